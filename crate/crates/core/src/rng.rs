//! Seeded pseudo-random generator with a portable, pinned algorithm.
//!
//! The stream is xoshiro256++ with its state filled from SplitMix64, so the
//! same seed yields the same sequence on every platform and toolchain. Both
//! algorithms are public domain; they are written out here rather than pulled
//! from a crate so the byte-for-byte output can never shift under a dependency
//! upgrade.

use alloc::vec::Vec;

/// Stateful generator. Every stochastic choice in this crate draws from one of
/// these, so a run is fully determined by its seed.
#[derive(Clone, Debug)]
pub struct SeededRng {
    s: [u64; 4],
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl SeededRng {
    /// Builds the generator for `seed`. Any seed is valid; SplitMix64
    /// expansion guarantees a nonzero xoshiro state.
    pub fn new(seed: u64) -> Self {
        let mut sm = seed;
        let s = [
            splitmix64(&mut sm),
            splitmix64(&mut sm),
            splitmix64(&mut sm),
            splitmix64(&mut sm),
        ];
        SeededRng { s }
    }

    /// Next raw 64-bit output.
    pub fn next_u64(&mut self) -> u64 {
        let s = &mut self.s;
        let result = s[0]
            .wrapping_add(s[3])
            .rotate_left(23)
            .wrapping_add(s[0]);
        let t = s[1] << 17;
        s[2] ^= s[0];
        s[3] ^= s[1];
        s[1] ^= s[2];
        s[0] ^= s[3];
        s[2] ^= t;
        s[3] = s[3].rotate_left(45);
        result
    }

    /// Uniform draw in `[0, 1)` using the top 53 bits, so every value is an
    /// exactly representable multiple of 2^-53.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform integer in `[0, n)` by multiply-shift with rejection, which is
    /// exactly unbiased for every `n`.
    ///
    /// Panics if `n` is zero.
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0, "below(0) has no valid output");
        let mut x = self.next_u64();
        let mut m = (x as u128) * (n as u128);
        let mut low = m as u64;
        if low < n {
            let threshold = n.wrapping_neg() % n;
            while low < threshold {
                x = self.next_u64();
                m = (x as u128) * (n as u128);
                low = m as u64;
            }
        }
        (m >> 64) as u64
    }

    /// Uniform integer in `[lo, hi]` inclusive.
    ///
    /// Panics if `lo > hi`.
    pub fn range_inclusive(&mut self, lo: i64, hi: i64) -> i64 {
        assert!(lo <= hi, "empty range");
        let span = (hi as i128 - lo as i128 + 1) as u64;
        lo.wrapping_add(self.below(span) as i64)
    }

    /// Uniform draw in `[lo, hi)`.
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// Standard normal deviate via the Box-Muller transform. Two fresh
    /// uniforms per call, cosine branch; no state is carried between calls, so
    /// the stream position stays predictable.
    pub fn normal(&mut self) -> f64 {
        // The first uniform is shifted away from zero so the log argument is
        // always positive.
        let u1 = 1.0 - self.next_f64();
        let u2 = self.next_f64();
        let r = num_traits::Float::sqrt(-2.0 * num_traits::Float::ln(u1));
        let theta = 2.0 * core::f64::consts::PI * u2;
        r * num_traits::Float::cos(theta)
    }

    /// Draws `count` distinct indices from `[0, n)`, in draw order, via a
    /// partial Fisher-Yates shuffle.
    ///
    /// Panics if `count > n`.
    pub fn sample_indices(&mut self, n: usize, count: usize) -> Vec<usize> {
        assert!(count <= n, "cannot draw {count} distinct from {n}");
        let mut pool: Vec<usize> = (0..n).collect();
        let mut out = Vec::with_capacity(count);
        for i in 0..count {
            let j = i + self.below((n - i) as u64) as usize;
            pool.swap(i, j);
            out.push(pool[i]);
        }
        out
    }

    /// Jumps this generator forward by 2^192 steps, giving a stream that never
    /// overlaps the original for any realistic draw count. Used to derive
    /// independent substreams from one seed.
    pub fn long_jump(&mut self) {
        const LONG_JUMP: [u64; 4] = [
            0x76E1_5D3E_FEFD_CBBF,
            0xC500_4E44_1C52_2FB3,
            0x7771_0069_854E_E241,
            0x3910_9BB0_2ACB_E635,
        ];
        let mut acc = [0u64; 4];
        for word in LONG_JUMP {
            for bit in 0..64 {
                if word & (1u64 << bit) != 0 {
                    acc[0] ^= self.s[0];
                    acc[1] ^= self.s[1];
                    acc[2] ^= self.s[2];
                    acc[3] ^= self.s[3];
                }
                self.next_u64();
            }
        }
        self.s = acc;
    }

    /// Returns a substream generator: a clone jumped forward `index + 1`
    /// long-jumps, leaving `self` untouched.
    pub fn substream(&self, index: u64) -> SeededRng {
        let mut sub = self.clone();
        for _ in 0..=index {
            sub.long_jump();
        }
        sub
    }
}
