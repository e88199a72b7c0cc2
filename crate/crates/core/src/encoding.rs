//! Variation operators over two genome representations: minimal-width binary
//! strings for integer coordinates, and plain vectors for real coordinates.
//!
//! Binary strings are kept at minimal width (no leading zeros, except the
//! single digit for zero), because the crossover cut positions depend on each
//! parent's actual digit count. Mutation flips one digit in place and never
//! changes a string's width, so a leading zero can appear after a downward
//! flip; `decode_binary` accepts that.

use crate::rng::SeededRng;
use alloc::vec::Vec;
use core::fmt;

/// Bit pattern, most significant digit first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryString {
    bits: Vec<bool>,
}

impl BinaryString {
    /// Builds from text of `0`/`1` digits. Empty or foreign characters fail.
    pub fn parse(text: &str) -> Result<Self, EncodingError> {
        if text.is_empty() {
            return Err(EncodingError::EmptyString);
        }
        let mut bits = Vec::with_capacity(text.len());
        for ch in text.chars() {
            match ch {
                '0' => bits.push(false),
                '1' => bits.push(true),
                _ => return Err(EncodingError::BadDigit(ch)),
            }
        }
        Ok(BinaryString { bits })
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// Digit at `index`, counted from the most significant end.
    pub fn bit(&self, index: usize) -> bool {
        self.bits[index]
    }
}

impl fmt::Display for BinaryString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Which digit flips a mutation may perform.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MutationDirection {
    /// Flip a 0 digit to 1; the decoded value strictly increases.
    ZeroToOne,
    /// Flip a 1 digit to 0; the decoded value strictly decreases.
    OneToZero,
    /// Flip any digit.
    AnyFlip,
}

impl MutationDirection {
    fn eligible(&self, bit: bool) -> bool {
        match self {
            MutationDirection::ZeroToOne => !bit,
            MutationDirection::OneToZero => bit,
            MutationDirection::AnyFlip => true,
        }
    }
}

/// Operator failures.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EncodingError {
    /// The string has no digit the requested direction may flip.
    NoEligibleBit,
    /// A scripted flip named a digit the direction may not touch.
    IneligibleBit { index: usize },
    /// A scripted flip index past the end of the string.
    IndexOutOfRange { index: usize, len: usize },
    BadDigit(char),
    EmptyString,
    /// More than 64 digits cannot decode into a machine word.
    TooWide { len: usize },
}

impl fmt::Display for EncodingError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EncodingError::NoEligibleBit => f.write_str("no digit is eligible to flip"),
            EncodingError::IneligibleBit { index } => {
                write!(f, "digit {index} is not eligible for the flip direction")
            }
            EncodingError::IndexOutOfRange { index, len } => {
                write!(f, "digit index {index} out of range for width {len}")
            }
            EncodingError::BadDigit(c) => write!(f, "character {c:?} is not a binary digit"),
            EncodingError::EmptyString => f.write_str("empty binary string"),
            EncodingError::TooWide { len } => write!(f, "{len} digits exceed a 64-bit word"),
        }
    }
}

/// Minimal-width binary form of `value`. Zero encodes as the single digit `0`.
pub fn encode_binary(value: u64) -> BinaryString {
    if value == 0 {
        return BinaryString {
            bits: alloc::vec![false],
        };
    }
    let width = 64 - value.leading_zeros() as usize;
    let bits = (0..width)
        .map(|i| value & (1u64 << (width - 1 - i)) != 0)
        .collect();
    BinaryString { bits }
}

/// Numeric value of a binary string. Width above 64 digits is an error.
pub fn decode_binary(s: &BinaryString) -> Result<u64, EncodingError> {
    if s.len() > 64 {
        return Err(EncodingError::TooWide { len: s.len() });
    }
    let mut v: u64 = 0;
    for &b in &s.bits {
        v = (v << 1) | b as u64;
    }
    Ok(v)
}

/// Single-cut recombination at each parent's own midpoint.
///
/// The first child keeps the first `len(a)/2` digits of `a` and takes the rest
/// of its digits from the same positions of `b`; the second child mirrors this
/// with the parents swapped. With unequal widths the children swap widths,
/// so total digit count is conserved whenever both cut positions land inside
/// both parents.
pub fn crossover_binary(a: &BinaryString, b: &BinaryString) -> (BinaryString, BinaryString) {
    let cut = |head: &BinaryString, tail: &BinaryString| {
        let k = head.len() / 2;
        let mut bits: Vec<bool> = head.bits[..k].to_vec();
        if k <= tail.len() {
            bits.extend_from_slice(&tail.bits[k..]);
        }
        // A head whose cut lands past the tail's end keeps only its own
        // digits; an empty result (both sides empty) decodes as zero.
        if bits.is_empty() {
            bits.push(false);
        }
        BinaryString { bits }
    };
    (cut(a, b), cut(b, a))
}

/// Flips one uniformly chosen eligible digit. Returns the mutated string and
/// the flipped index (from the most significant end). Width never changes.
pub fn mutate_binary(
    s: &BinaryString,
    direction: MutationDirection,
    rng: &mut SeededRng,
) -> Result<(BinaryString, usize), EncodingError> {
    let eligible: Vec<usize> = (0..s.len())
        .filter(|&i| direction.eligible(s.bits[i]))
        .collect();
    if eligible.is_empty() {
        return Err(EncodingError::NoEligibleBit);
    }
    let index = eligible[rng.below(eligible.len() as u64) as usize];
    let mut out = s.clone();
    out.bits[index] = !out.bits[index];
    Ok((out, index))
}

/// Flips the digit at a prescribed index, validating it against the flip
/// direction. This is the replay path for scripted mutations.
pub fn mutate_binary_at(
    s: &BinaryString,
    direction: MutationDirection,
    index: usize,
) -> Result<BinaryString, EncodingError> {
    if index >= s.len() {
        return Err(EncodingError::IndexOutOfRange {
            index,
            len: s.len(),
        });
    }
    if !direction.eligible(s.bits[index]) {
        return Err(EncodingError::IneligibleBit { index });
    }
    let mut out = s.clone();
    out.bits[index] = !out.bits[index];
    Ok(out)
}

/// Single-cut recombination of real vectors. One cut point is drawn uniformly
/// from the interior positions and shared by both children.
///
/// A one-dimensional input has no interior cut, so the binary operator is
/// applied to a 16-bit fixed-point image of each magnitude; each child keeps
/// the sign of the parent contributing its leading digits.
pub fn crossover_real(
    a: &[f64],
    b: &[f64],
    rng: &mut SeededRng,
) -> (Vec<f64>, Vec<f64>) {
    assert_eq!(a.len(), b.len(), "parents must share a dimension");
    assert!(!a.is_empty(), "empty genome");
    if a.len() == 1 {
        let (ca, cb) = crossover_binary(&fixed_point(a[0]), &fixed_point(b[0]));
        let va = decode_binary(&ca).unwrap_or(0) as f64 / 65536.0;
        let vb = decode_binary(&cb).unwrap_or(0) as f64 / 65536.0;
        return (
            alloc::vec![va * sign_of(a[0])],
            alloc::vec![vb * sign_of(b[0])],
        );
    }
    let k = 1 + rng.below((a.len() - 1) as u64) as usize;
    let mut c1 = a[..k].to_vec();
    c1.extend_from_slice(&b[k..]);
    let mut c2 = b[..k].to_vec();
    c2.extend_from_slice(&a[k..]);
    (c1, c2)
}

fn fixed_point(x: f64) -> BinaryString {
    let scaled = num_traits::Float::round(num_traits::Float::abs(x) * 65536.0);
    // Cap at 2^52 so the conversion is exact and decodable.
    let capped = if scaled >= 4.5e15 { 4.5e15 } else { scaled };
    encode_binary(capped as u64)
}

fn sign_of(x: f64) -> f64 {
    if x < 0.0 {
        -1.0
    } else {
        1.0
    }
}

/// Gaussian step on one uniformly chosen coordinate, scaled by `sigma` times
/// that coordinate's bound width and clamped back into the bound. Returns the
/// mutated vector and the chosen coordinate. The coordinate is drawn before
/// the step size.
pub fn mutate_real(
    x: &[f64],
    sigma: f64,
    bounds: &[(f64, f64)],
    rng: &mut SeededRng,
) -> (Vec<f64>, usize) {
    assert_eq!(x.len(), bounds.len(), "bounds must match the dimension");
    assert!(!x.is_empty(), "empty genome");
    let j = rng.below(x.len() as u64) as usize;
    let (lo, hi) = bounds[j];
    let step = rng.normal() * sigma * (hi - lo);
    let mut out = x.to_vec();
    out[j] = (out[j] + step).clamp(lo, hi);
    (out, j)
}
