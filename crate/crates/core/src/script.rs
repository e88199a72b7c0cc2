//! Decision scripts: a line-oriented text form of every stochastic choice a
//! run makes. A script captures initial genomes, subpopulation draws, pairing
//! choices, crossover cuts, mutation targets, and acceptance inputs, so a run
//! can be replayed bit-exactly, or a hand-written run can be driven through
//! the engine.
//!
//! Grammar, one record per line, `#` starts a comment, blank lines skipped:
//!
//! ```text
//! INIT B1 4320 3120        # individual id, then one value per coordinate
//! SUBPOP B3 B8 B11 B1      # drawn subpopulation, by id
//! PAIR B13 B3              # parent id, partner id
//! PAIR B13 K1              # partner by rank: K1 is the subpopulation best
//! CUT 2                    # crossover cut position for the next pairing
//! FORCE C8 X1 1028         # override a child coordinate before mutation
//! MUTBIT C1 X1 1           # flip digit 1 (from the most significant end)
//! MUTREAL C1 X2 -0.75      # set a real coordinate's post-mutation value
//! THRESH C1 0.37           # acceptance threshold for one child
//! ACCEPT C1                # forced acceptance verdict
//! REJECT C7                # forced rejection verdict; the child is discarded
//! ```
//!
//! Coordinates are written `X1` through `Xd`. Rank aliases `K1`, `K2`, ... in
//! a PAIR record always denote subpopulation ranks, never individual ids.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

/// A numeric token: integer form is kept exact, real form round-trips through
/// the shortest decimal representation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Scalar {
    Int(i64),
    Real(f64),
}

impl Scalar {
    pub fn as_f64(&self) -> f64 {
        match self {
            Scalar::Int(v) => *v as f64,
            Scalar::Real(v) => *v,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Int(v) => write!(f, "{v}"),
            Scalar::Real(v) => write!(f, "{v:?}"),
        }
    }
}

/// Partner reference in a PAIR record.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PartnerRef {
    Id(String),
    /// 1-based rank into the ranked subpopulation; 1 is the best member.
    Rank(usize),
}

impl fmt::Display for PartnerRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PartnerRef::Id(id) => f.write_str(id),
            PartnerRef::Rank(k) => write!(f, "K{k}"),
        }
    }
}

/// One scripted decision. Coordinate indices are 0-based in memory and
/// written 1-based (`X1`) in text.
#[derive(Clone, Debug, PartialEq)]
pub enum Record {
    Init { id: String, coords: Vec<Scalar> },
    Subpop { ids: Vec<String> },
    Pair { parent: String, partner: PartnerRef },
    Cut { position: usize },
    Force { child: String, coord: usize, value: Scalar },
    MutBit { child: String, coord: usize, index: usize },
    MutReal { child: String, coord: usize, value: f64 },
    Thresh { child: String, value: f64 },
    Verdict { child: String, accept: bool },
}

impl Record {
    /// Keyword this record serializes under.
    pub fn keyword(&self) -> &'static str {
        match self {
            Record::Init { .. } => "INIT",
            Record::Subpop { .. } => "SUBPOP",
            Record::Pair { .. } => "PAIR",
            Record::Cut { .. } => "CUT",
            Record::Force { .. } => "FORCE",
            Record::MutBit { .. } => "MUTBIT",
            Record::MutReal { .. } => "MUTREAL",
            Record::Thresh { .. } => "THRESH",
            Record::Verdict { accept: true, .. } => "ACCEPT",
            Record::Verdict { accept: false, .. } => "REJECT",
        }
    }
}

impl fmt::Display for Record {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Record::Init { id, coords } => {
                write!(f, "INIT {id}")?;
                for c in coords {
                    write!(f, " {c}")?;
                }
                Ok(())
            }
            Record::Subpop { ids } => {
                f.write_str("SUBPOP")?;
                for id in ids {
                    write!(f, " {id}")?;
                }
                Ok(())
            }
            Record::Pair { parent, partner } => write!(f, "PAIR {parent} {partner}"),
            Record::Cut { position } => write!(f, "CUT {position}"),
            Record::Force { child, coord, value } => {
                write!(f, "FORCE {child} X{} {value}", coord + 1)
            }
            Record::MutBit { child, coord, index } => {
                write!(f, "MUTBIT {child} X{} {index}", coord + 1)
            }
            Record::MutReal { child, coord, value } => {
                write!(f, "MUTREAL {child} X{} {value:?}", coord + 1)
            }
            Record::Thresh { child, value } => write!(f, "THRESH {child} {value:?}"),
            Record::Verdict { child, accept } => {
                write!(f, "{} {child}", if *accept { "ACCEPT" } else { "REJECT" })
            }
        }
    }
}

/// A parsed script: records in file order, each with its source line number
/// (synthetic records carry line 0).
#[derive(Clone, Debug, Default, PartialEq)]
pub struct DecisionScript {
    entries: Vec<(usize, Record)>,
}

/// Parse failure, pointing at the offending line.
#[derive(Clone, Debug, PartialEq)]
pub struct ScriptError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ScriptError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "script line {}: {}", self.line, self.message)
    }
}

fn fail(line: usize, message: String) -> ScriptError {
    ScriptError { line, message }
}

fn parse_coord(line: usize, token: &str) -> Result<usize, ScriptError> {
    let digits = token
        .strip_prefix('X')
        .ok_or_else(|| fail(line, format!("expected a coordinate like X1, got {token:?}")))?;
    let n: usize = digits
        .parse()
        .map_err(|_| fail(line, format!("bad coordinate {token:?}")))?;
    if n == 0 {
        return Err(fail(line, "coordinates are numbered from X1".to_string()));
    }
    Ok(n - 1)
}

fn parse_scalar(line: usize, token: &str) -> Result<Scalar, ScriptError> {
    if let Ok(v) = token.parse::<i64>() {
        return Ok(Scalar::Int(v));
    }
    match token.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(Scalar::Real(v)),
        _ => Err(fail(line, format!("bad number {token:?}"))),
    }
}

fn parse_f64(line: usize, token: &str) -> Result<f64, ScriptError> {
    match token.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(fail(line, format!("bad number {token:?}"))),
    }
}

fn parse_unit(line: usize, token: &str) -> Result<f64, ScriptError> {
    let v = parse_f64(line, token)?;
    if (0.0..=1.0).contains(&v) {
        Ok(v)
    } else {
        Err(fail(line, format!("threshold {token} must be in [0, 1]")))
    }
}

fn expect_arity(
    line: usize,
    keyword: &str,
    args: &[&str],
    expected: usize,
) -> Result<(), ScriptError> {
    if args.len() == expected {
        Ok(())
    } else {
        Err(fail(
            line,
            format!(
                "{keyword} takes {expected} argument{}, got {}",
                if expected == 1 { "" } else { "s" },
                args.len()
            ),
        ))
    }
}

impl DecisionScript {
    pub fn new() -> Self {
        DecisionScript::default()
    }

    /// Parses script text. Errors carry the 1-based line number.
    pub fn parse(text: &str) -> Result<Self, ScriptError> {
        let mut entries = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let bare = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            };
            let mut tokens = bare.split_whitespace();
            let Some(keyword) = tokens.next() else {
                continue;
            };
            let args: Vec<&str> = tokens.collect();
            let record = match keyword {
                "INIT" => {
                    if args.len() < 2 {
                        return Err(fail(
                            line,
                            "INIT takes an id and at least one coordinate".to_string(),
                        ));
                    }
                    let coords = args[1..]
                        .iter()
                        .map(|t| parse_scalar(line, t))
                        .collect::<Result<Vec<_>, _>>()?;
                    Record::Init {
                        id: args[0].to_string(),
                        coords,
                    }
                }
                "SUBPOP" => {
                    if args.is_empty() {
                        return Err(fail(line, "SUBPOP needs at least one id".to_string()));
                    }
                    Record::Subpop {
                        ids: args.iter().map(|s| s.to_string()).collect(),
                    }
                }
                "PAIR" => {
                    expect_arity(line, "PAIR", &args, 2)?;
                    let partner = match args[1].strip_prefix('K') {
                        Some(digits) if !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit()) => {
                            let k: usize = digits
                                .parse()
                                .map_err(|_| fail(line, format!("bad rank {:?}", args[1])))?;
                            if k == 0 {
                                return Err(fail(line, "ranks are numbered from K1".to_string()));
                            }
                            PartnerRef::Rank(k)
                        }
                        _ => PartnerRef::Id(args[1].to_string()),
                    };
                    Record::Pair {
                        parent: args[0].to_string(),
                        partner,
                    }
                }
                "CUT" => {
                    expect_arity(line, "CUT", &args, 1)?;
                    let position: usize = args[0]
                        .parse()
                        .map_err(|_| fail(line, format!("bad cut position {:?}", args[0])))?;
                    if position == 0 {
                        return Err(fail(line, "cut positions start at 1".to_string()));
                    }
                    Record::Cut { position }
                }
                "FORCE" => {
                    expect_arity(line, "FORCE", &args, 3)?;
                    Record::Force {
                        child: args[0].to_string(),
                        coord: parse_coord(line, args[1])?,
                        value: parse_scalar(line, args[2])?,
                    }
                }
                "MUTBIT" => {
                    expect_arity(line, "MUTBIT", &args, 3)?;
                    Record::MutBit {
                        child: args[0].to_string(),
                        coord: parse_coord(line, args[1])?,
                        index: args[2]
                            .parse()
                            .map_err(|_| fail(line, format!("bad digit index {:?}", args[2])))?,
                    }
                }
                "MUTREAL" => {
                    expect_arity(line, "MUTREAL", &args, 3)?;
                    Record::MutReal {
                        child: args[0].to_string(),
                        coord: parse_coord(line, args[1])?,
                        value: parse_f64(line, args[2])?,
                    }
                }
                "THRESH" => {
                    expect_arity(line, "THRESH", &args, 2)?;
                    Record::Thresh {
                        child: args[0].to_string(),
                        value: parse_unit(line, args[1])?,
                    }
                }
                "ACCEPT" | "REJECT" => {
                    expect_arity(line, keyword, &args, 1)?;
                    Record::Verdict {
                        child: args[0].to_string(),
                        accept: keyword == "ACCEPT",
                    }
                }
                other => {
                    return Err(fail(line, format!("unknown keyword {other:?}")));
                }
            };
            entries.push((line, record));
        }
        Ok(DecisionScript { entries })
    }

    /// Renders the script as text; parsing it back yields the same records.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        for (_, record) in &self.entries {
            out.push_str(&record.to_string());
            out.push('\n');
        }
        out
    }

    /// Appends a synthetic record (line number 0).
    pub fn push(&mut self, record: Record) {
        self.entries.push((0, record));
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Record at position `i` with its source line.
    pub fn entry(&self, i: usize) -> Option<(usize, &Record)> {
        self.entries.get(i).map(|(l, r)| (*l, r))
    }

    pub fn records(&self) -> impl Iterator<Item = &Record> {
        self.entries.iter().map(|(_, r)| r)
    }

    /// Number of SUBPOP records, which equals the iteration count the script
    /// drives.
    pub fn iteration_count(&self) -> usize {
        self.records()
            .filter(|r| matches!(r, Record::Subpop { .. }))
            .count()
    }
}

/// The bundled worked example: a fully scripted two-iteration run of the
/// filtered engine on the squared-magnitude problem, 16 individuals, used by
/// the trace front end and the fixture tests.
pub const WORKED_EXAMPLE: &str = include_str!("../data/worked_example.script");
