//! Temperature-controlled acceptance: the probability rule, the threshold
//! comparison, cooling schedules, and a self-contained annealing loop usable
//! as a baseline optimizer.

use crate::encoding::{decode_binary, encode_binary, mutate_binary, mutate_real, MutationDirection};
use crate::problem::{Genome, Individual, ObjectiveProblem, ProblemError, ProblemKind, Sense};
use crate::rng::SeededRng;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use num_traits::Float;

/// Probability of accepting `candidate` against `incumbent` at `temperature`.
///
/// Scores are taken in the problem's own orientation; `sense` says which
/// direction is better. A candidate no worse than the incumbent is accepted
/// with probability 1; a worse one with probability `exp(-worsening / T)`.
/// At zero temperature a worse candidate has probability 0.
pub fn acceptance_probability(
    candidate: f64,
    incumbent: f64,
    temperature: f64,
    sense: Sense,
) -> f64 {
    let worsening = match sense {
        Sense::Minimize => candidate - incumbent,
        Sense::Maximize => incumbent - candidate,
    };
    if worsening <= 0.0 {
        1.0
    } else if temperature <= 0.0 {
        0.0
    } else {
        // The mathematical value is positive for every finite worsening, and
        // a zero threshold must always accept, so underflow may not round the
        // probability down to zero.
        let p = Float::exp(-worsening / temperature);
        if p < f64::MIN_POSITIVE {
            f64::MIN_POSITIVE
        } else {
            p
        }
    }
}

/// Outcome of one threshold comparison.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AcceptanceDecision {
    pub probability: f64,
    pub threshold: f64,
    pub accepted: bool,
}

/// Accepts when the threshold falls strictly below the probability, so a
/// zero probability rejects even a zero threshold, and probability 1 accepts
/// every threshold drawn from `[0, 1)`.
pub fn metropolis_accept(probability: f64, threshold: f64) -> AcceptanceDecision {
    AcceptanceDecision {
        probability,
        threshold,
        accepted: threshold < probability,
    }
}

/// How the temperature falls per iteration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CoolingRule {
    /// Multiply by `alpha` each iteration; `alpha` in (0, 1].
    Geometric { alpha: f64 },
    /// Subtract `step` each iteration; `step >= 0`.
    Linear { step: f64 },
    /// Hold constant.
    Constant,
}

/// A cooling rule with a lower clamp. The floor keeps long geometric runs
/// from underflowing to a zero that would freeze acceptance entirely.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Cooling {
    rule: CoolingRule,
    floor: f64,
}

/// Rejected cooling parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct InvalidCooling(pub String);

impl fmt::Display for InvalidCooling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid cooling: {}", self.0)
    }
}

impl Cooling {
    pub fn new(rule: CoolingRule, floor: f64) -> Result<Self, InvalidCooling> {
        if !(floor >= 0.0) {
            return Err(InvalidCooling(format!("floor {floor} must be >= 0")));
        }
        match rule {
            CoolingRule::Geometric { alpha } => {
                if !(alpha > 0.0 && alpha <= 1.0) {
                    return Err(InvalidCooling(format!("alpha {alpha} must be in (0, 1]")));
                }
            }
            CoolingRule::Linear { step } => {
                if !(step >= 0.0) {
                    return Err(InvalidCooling(format!("step {step} must be >= 0")));
                }
            }
            CoolingRule::Constant => {}
        }
        Ok(Cooling { rule, floor })
    }

    pub fn geometric(alpha: f64, floor: f64) -> Result<Self, InvalidCooling> {
        Cooling::new(CoolingRule::Geometric { alpha }, floor)
    }

    pub fn linear(step: f64, floor: f64) -> Result<Self, InvalidCooling> {
        Cooling::new(CoolingRule::Linear { step }, floor)
    }

    pub fn constant() -> Self {
        Cooling {
            rule: CoolingRule::Constant,
            floor: 0.0,
        }
    }

    pub fn rule(&self) -> CoolingRule {
        self.rule
    }

    pub fn floor(&self) -> f64 {
        self.floor
    }
}

/// One cooling step, clamped to the floor.
pub fn cool(temperature: f64, cooling: &Cooling) -> f64 {
    let next = match cooling.rule {
        CoolingRule::Geometric { alpha } => temperature * alpha,
        CoolingRule::Linear { step } => temperature - step,
        CoolingRule::Constant => temperature,
    };
    if next < cooling.floor {
        cooling.floor
    } else {
        next
    }
}

/// Settings for the standalone annealing loop.
#[derive(Clone, Debug)]
pub struct SaConfig {
    pub initial_temperature: f64,
    pub cooling: Cooling,
    pub steps: usize,
}

/// Result of an annealing run.
#[derive(Clone, Debug)]
pub struct SaOutcome {
    /// Best candidate ever evaluated.
    pub best: Individual,
    /// Where the walk ended, which may be worse than `best`.
    pub final_current: Individual,
    /// Objective evaluations spent (steps + the initial point).
    pub evaluations: usize,
    /// Best-so-far score after each step.
    pub best_trajectory: Vec<f64>,
}

/// Single-walker annealing: start from a uniform random point, propose with
/// `neighbor`, accept by the threshold rule with a fresh uniform draw per
/// step, cool once per step. Per step the proposal draws come first, then the
/// threshold draw.
pub fn sa_optimize<N>(
    problem: &ObjectiveProblem,
    config: &SaConfig,
    mut neighbor: N,
    rng: &mut SeededRng,
) -> Result<SaOutcome, ProblemError>
where
    N: FnMut(&Genome, &mut SeededRng) -> Genome,
{
    let genome = problem.random_genome(rng);
    let fitness = problem.evaluate(&genome, rng)?;
    let mut current = Individual {
        id: String::from("S0"),
        genome,
        fitness: Some(fitness),
    };
    let mut best = current.clone();
    let mut temperature = config.initial_temperature;
    let mut best_trajectory = Vec::with_capacity(config.steps);

    for step in 1..=config.steps {
        let mut genome = neighbor(&current.genome, rng);
        problem.clamp_genome(&mut genome);
        let fitness = problem.evaluate(&genome, rng)?;
        let candidate = Individual {
            id: format!("S{step}"),
            genome,
            fitness: Some(fitness),
        };
        let probability = acceptance_probability(
            candidate.score().as_f64(),
            current.score().as_f64(),
            temperature,
            problem.sense,
        );
        let threshold = rng.next_f64();
        if metropolis_accept(probability, threshold).accepted {
            current = candidate.clone();
        }
        if candidate.score().better_than(&best.score(), problem.sense) {
            best = candidate;
        }
        best_trajectory.push(best.score().as_f64());
        temperature = cool(temperature, &config.cooling);
    }

    Ok(SaOutcome {
        best,
        final_current: current,
        evaluations: config.steps + 1,
        best_trajectory,
    })
}

/// Problem-appropriate proposal move: a Gaussian step on one coordinate for
/// real genomes (scaled by `sigma` times the bound width), or one digit flip
/// on one coordinate's binary form for integer genomes.
pub fn default_neighbor<'p>(
    problem: &'p ObjectiveProblem,
    sigma: f64,
) -> impl FnMut(&Genome, &mut SeededRng) -> Genome + 'p {
    move |genome: &Genome, rng: &mut SeededRng| match (genome, &problem.kind) {
        (Genome::Real(x), ProblemKind::Real { bounds, .. }) => {
            let (out, _) = mutate_real(x, sigma, bounds, rng);
            Genome::Real(out)
        }
        (Genome::Int(x), ProblemKind::Integer { .. }) => {
            let j = rng.below(x.len() as u64) as usize;
            let coded = encode_binary(x[j] as u64);
            // Any nonempty string has a digit AnyFlip may take.
            let (flipped, _) =
                mutate_binary(&coded, MutationDirection::AnyFlip, rng).expect("nonempty string");
            let mut out = x.to_vec();
            out[j] = decode_binary(&flipped).unwrap_or(x[j] as u64) as i64;
            Genome::Int(out)
        }
        _ => genome.clone(),
    }
}
