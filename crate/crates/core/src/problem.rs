//! Problem definitions: what a genome is, how it is scored, and which
//! direction counts as better.

use crate::rng::SeededRng;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// Optimization direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Maximize,
    Minimize,
}

/// Candidate solution. Integer genomes drive the binary operators; real
/// genomes drive the arithmetic ones.
#[derive(Clone, Debug, PartialEq)]
pub enum Genome {
    Int(Vec<i64>),
    Real(Vec<f64>),
}

impl Genome {
    pub fn len(&self) -> usize {
        match self {
            Genome::Int(v) => v.len(),
            Genome::Real(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Objective value. The integer variant keeps the worked-example arithmetic
/// exact; the real variant serves the benchmark functions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Fitness {
    Int(i64),
    Real(f64),
}

impl Fitness {
    pub fn as_f64(&self) -> f64 {
        match self {
            Fitness::Int(v) => *v as f64,
            Fitness::Real(v) => *v,
        }
    }

    /// True when `self` is strictly preferable to `other` under `sense`.
    pub fn better_than(&self, other: &Fitness, sense: Sense) -> bool {
        let (a, b) = match (self, other) {
            (Fitness::Int(a), Fitness::Int(b)) => {
                return match sense {
                    Sense::Maximize => a > b,
                    Sense::Minimize => a < b,
                }
            }
            (a, b) => (a.as_f64(), b.as_f64()),
        };
        match sense {
            Sense::Maximize => a > b,
            Sense::Minimize => a < b,
        }
    }
}

impl fmt::Display for Fitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fitness::Int(v) => write!(f, "{v}"),
            Fitness::Real(v) => write!(f, "{v:?}"),
        }
    }
}

/// One population member. `fitness` is filled in by evaluation; constructors
/// that take a genome leave it empty.
#[derive(Clone, Debug, PartialEq)]
pub struct Individual {
    pub id: String,
    pub genome: Genome,
    pub fitness: Option<Fitness>,
}

impl Individual {
    pub fn new(id: String, genome: Genome) -> Self {
        Individual {
            id,
            genome,
            fitness: None,
        }
    }

    /// Fitness accessor for contexts where evaluation has already happened.
    ///
    /// Panics if the individual was never evaluated.
    pub fn score(&self) -> Fitness {
        self.fitness.expect("individual was never evaluated")
    }
}

/// Scoring function over real vectors. The seeded variant covers objectives
/// with a stochastic term; they draw only from the generator they are handed.
#[derive(Clone, Copy)]
pub enum RealObjective {
    Pure(fn(&[f64]) -> f64),
    Seeded(fn(&[f64], &mut SeededRng) -> f64),
}

impl fmt::Debug for RealObjective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RealObjective::Pure(_) => f.write_str("RealObjective::Pure"),
            RealObjective::Seeded(_) => f.write_str("RealObjective::Seeded"),
        }
    }
}

/// Genome representation plus scoring for one problem family.
#[derive(Clone, Debug)]
pub enum ProblemKind {
    /// Integer coordinates, scored exactly. Bounds must be non-negative so
    /// coordinates have a plain binary encoding.
    Integer {
        bounds: Vec<(i64, i64)>,
        objective: fn(&[i64]) -> i64,
    },
    /// Real coordinates in per-dimension boxes.
    Real {
        bounds: Vec<(f64, f64)>,
        objective: RealObjective,
    },
}

/// A complete problem statement: name, direction, representation, scorer.
#[derive(Clone, Debug)]
pub struct ObjectiveProblem {
    pub name: String,
    pub sense: Sense,
    pub kind: ProblemKind,
}

/// Evaluation and construction failures. These are reported, never panicked,
/// so a caller feeding bad data gets a diagnostic instead of an abort.
#[derive(Clone, Debug, PartialEq)]
pub enum ProblemError {
    /// Genome variant does not match the problem representation.
    KindMismatch,
    DimensionMismatch { expected: usize, got: usize },
    /// Coordinate `index` fell outside its bound.
    OutOfBounds { index: usize },
    /// Integer bounds with a negative lower end have no plain binary form.
    NegativeBound { index: usize },
    /// A bound pair with lo > hi.
    EmptyBound { index: usize },
}

impl fmt::Display for ProblemError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProblemError::KindMismatch => f.write_str("genome kind does not match problem"),
            ProblemError::DimensionMismatch { expected, got } => {
                write!(f, "expected {expected} coordinates, got {got}")
            }
            ProblemError::OutOfBounds { index } => {
                write!(f, "coordinate {index} is outside its bound")
            }
            ProblemError::NegativeBound { index } => {
                write!(f, "integer bound {index} has a negative lower end")
            }
            ProblemError::EmptyBound { index } => write!(f, "bound {index} has lo > hi"),
        }
    }
}

impl ObjectiveProblem {
    pub fn integer(
        name: &str,
        bounds: Vec<(i64, i64)>,
        sense: Sense,
        objective: fn(&[i64]) -> i64,
    ) -> Result<Self, ProblemError> {
        for (i, &(lo, hi)) in bounds.iter().enumerate() {
            if lo > hi {
                return Err(ProblemError::EmptyBound { index: i });
            }
            if lo < 0 {
                return Err(ProblemError::NegativeBound { index: i });
            }
        }
        Ok(ObjectiveProblem {
            name: String::from(name),
            sense,
            kind: ProblemKind::Integer { bounds, objective },
        })
    }

    pub fn real(
        name: &str,
        bounds: Vec<(f64, f64)>,
        sense: Sense,
        objective: RealObjective,
    ) -> Result<Self, ProblemError> {
        for (i, &(lo, hi)) in bounds.iter().enumerate() {
            if !(lo <= hi) {
                return Err(ProblemError::EmptyBound { index: i });
            }
        }
        Ok(ObjectiveProblem {
            name: String::from(name),
            sense,
            kind: ProblemKind::Real { bounds, objective },
        })
    }

    pub fn dimension(&self) -> usize {
        match &self.kind {
            ProblemKind::Integer { bounds, .. } => bounds.len(),
            ProblemKind::Real { bounds, .. } => bounds.len(),
        }
    }

    /// Scores a genome. Bound violations and representation mismatches are
    /// errors; the generator is consulted only by seeded objectives.
    pub fn evaluate(&self, genome: &Genome, rng: &mut SeededRng) -> Result<Fitness, ProblemError> {
        match (&self.kind, genome) {
            (ProblemKind::Integer { bounds, objective }, Genome::Int(coords)) => {
                check_dims(bounds.len(), coords.len())?;
                for (i, (&c, &(lo, hi))) in coords.iter().zip(bounds).enumerate() {
                    if c < lo || c > hi {
                        return Err(ProblemError::OutOfBounds { index: i });
                    }
                }
                Ok(Fitness::Int(objective(coords)))
            }
            (ProblemKind::Real { bounds, objective }, Genome::Real(coords)) => {
                check_dims(bounds.len(), coords.len())?;
                for (i, (&c, &(lo, hi))) in coords.iter().zip(bounds).enumerate() {
                    if !(c >= lo && c <= hi) {
                        return Err(ProblemError::OutOfBounds { index: i });
                    }
                }
                Ok(Fitness::Real(match objective {
                    RealObjective::Pure(f) => f(coords),
                    RealObjective::Seeded(f) => f(coords, rng),
                }))
            }
            _ => Err(ProblemError::KindMismatch),
        }
    }

    /// Uniform random genome within bounds.
    pub fn random_genome(&self, rng: &mut SeededRng) -> Genome {
        match &self.kind {
            ProblemKind::Integer { bounds, .. } => Genome::Int(
                bounds
                    .iter()
                    .map(|&(lo, hi)| rng.range_inclusive(lo, hi))
                    .collect(),
            ),
            ProblemKind::Real { bounds, .. } => Genome::Real(
                bounds
                    .iter()
                    .map(|&(lo, hi)| rng.uniform(lo, hi))
                    .collect(),
            ),
        }
    }

    /// Clamps each coordinate to its bound, the repair applied to operator
    /// outputs before evaluation.
    pub fn clamp_genome(&self, genome: &mut Genome) {
        match (&self.kind, genome) {
            (ProblemKind::Integer { bounds, .. }, Genome::Int(coords)) => {
                for (c, &(lo, hi)) in coords.iter_mut().zip(bounds) {
                    *c = (*c).clamp(lo, hi);
                }
            }
            (ProblemKind::Real { bounds, .. }, Genome::Real(coords)) => {
                for (c, &(lo, hi)) in coords.iter_mut().zip(bounds) {
                    *c = c.clamp(lo, hi);
                }
            }
            _ => {}
        }
    }
}

fn check_dims(expected: usize, got: usize) -> Result<(), ProblemError> {
    if expected == got {
        Ok(())
    } else {
        Err(ProblemError::DimensionMismatch { expected, got })
    }
}

fn sum_of_squares(coords: &[i64]) -> i64 {
    coords.iter().map(|&c| c * c).sum()
}

/// The worked-example problem: maximize the squared magnitude of an integer
/// point, each coordinate in `[lo, hi]`.
pub fn squared_magnitude_problem(dim: usize, lo: i64, hi: i64) -> ObjectiveProblem {
    ObjectiveProblem::integer(
        "squared-magnitude",
        alloc::vec![(lo, hi); dim],
        Sense::Maximize,
        sum_of_squares,
    )
    .expect("static bounds are valid")
}
