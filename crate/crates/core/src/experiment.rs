//! Repeated seeded runs aggregated into summary statistics. Run k uses seed
//! `base_seed + k`, so any single run can be reproduced in isolation.

use crate::annealing::{default_neighbor, sa_optimize, SaConfig};
use crate::engine::{lpb_run, lpbsa_run, EngineError, RunConfig};
use crate::problem::{ObjectiveProblem, Sense};
use crate::rng::SeededRng;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use num_traits::Float;

/// The three optimizers an experiment can drive.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Algorithm {
    /// Population engine with the temperature-controlled mutation filter.
    Lpbsa,
    /// Population engine without the filter.
    Lpb,
    /// Single-solution annealing over the same neighborhood move.
    Sa,
}

impl Algorithm {
    pub fn as_str(&self) -> &'static str {
        match self {
            Algorithm::Lpbsa => "lpbsa",
            Algorithm::Lpb => "lpb",
            Algorithm::Sa => "sa",
        }
    }

    pub fn from_name(name: &str) -> Option<Algorithm> {
        for alg in [Algorithm::Lpbsa, Algorithm::Lpb, Algorithm::Sa] {
            if name.eq_ignore_ascii_case(alg.as_str()) {
                return Some(alg);
            }
        }
        None
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A batch of independent runs of one algorithm on one problem.
#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub algorithm: Algorithm,
    pub runs: usize,
    pub base_seed: u64,
    pub run_config: RunConfig,
    /// When set, overrides the iteration or step count so every algorithm
    /// spends exactly this many objective evaluations per run.
    pub evaluation_budget: Option<usize>,
}

/// Iterations that make the population engine spend `budget` evaluations:
/// the initial population plus four per selected parent per iteration.
pub fn iterations_for_budget(budget: usize, config: &RunConfig) -> usize {
    budget.saturating_sub(config.population_size) / (4 * config.selection_count)
}

/// Annealing steps that spend `budget` evaluations (one for the start point,
/// one per step).
pub fn sa_steps_for_budget(budget: usize) -> usize {
    budget.saturating_sub(1)
}

/// Mean and population standard deviation (divisor n).
pub fn mean_and_std(values: &[f64]) -> (f64, f64) {
    assert!(!values.is_empty(), "statistics need at least one value");
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    (mean, Float::sqrt(var))
}

/// Aggregate results of one experiment.
#[derive(Clone, Debug)]
pub struct RunStats {
    pub problem: String,
    pub algorithm: Algorithm,
    pub runs: usize,
    /// Final best objective value of each run, in run order.
    pub finals: Vec<f64>,
    pub average: f64,
    pub std_dev: f64,
    /// Best final across runs (respecting the problem's sense).
    pub best: f64,
    /// Worst final across runs.
    pub worst: f64,
    /// Best-so-far series of each run, indexed by iteration or step; one
    /// inner vector per run, all the same length.
    pub trajectories: Vec<Vec<f64>>,
    pub evaluations_per_run: usize,
}

impl RunStats {
    /// Mean best-so-far trajectory across runs.
    pub fn mean_convergence(&self) -> Vec<f64> {
        let len = self.trajectories.first().map_or(0, Vec::len);
        let mut mean = vec![0.0; len];
        for trajectory in &self.trajectories {
            for (sum, v) in mean.iter_mut().zip(trajectory) {
                *sum += v;
            }
        }
        for v in &mut mean {
            *v /= self.trajectories.len() as f64;
        }
        mean
    }
}

/// Runs the configured algorithm `runs` times and aggregates the outcomes.
pub fn run_experiment(
    problem: &ObjectiveProblem,
    config: &ExperimentConfig,
) -> Result<RunStats, EngineError> {
    if config.runs == 0 {
        return Err(EngineError::InvalidConfig(String::from(
            "an experiment needs at least one run",
        )));
    }

    let mut engine_config = config.run_config.clone();
    if let Some(budget) = config.evaluation_budget {
        engine_config.max_iterations = iterations_for_budget(budget, &engine_config);
    }
    let sa_config = SaConfig {
        initial_temperature: engine_config.initial_temperature,
        cooling: engine_config.cooling,
        steps: config
            .evaluation_budget
            .map(sa_steps_for_budget)
            .unwrap_or(engine_config.max_iterations),
    };

    let mut finals = Vec::with_capacity(config.runs);
    let mut trajectories = Vec::with_capacity(config.runs);
    let mut evaluations_per_run = 0usize;

    for k in 0..config.runs {
        let mut rng = SeededRng::new(config.base_seed.wrapping_add(k as u64));
        let (final_value, trajectory, evaluations) = match config.algorithm {
            Algorithm::Lpbsa | Algorithm::Lpb => {
                let out = if config.algorithm == Algorithm::Lpbsa {
                    lpbsa_run(problem, &engine_config, &mut rng, None)?
                } else {
                    lpb_run(problem, &engine_config, &mut rng, None)?
                };
                let trajectory: Vec<f64> = out
                    .iterations
                    .iter()
                    .map(|it| it.best_so_far.as_f64())
                    .collect();
                (out.best.score().as_f64(), trajectory, out.evaluations)
            }
            Algorithm::Sa => {
                let neighbor = default_neighbor(problem, engine_config.mutation_sigma);
                let out = sa_optimize(problem, &sa_config, neighbor, &mut rng)
                    .map_err(EngineError::Problem)?;
                let best = out.best.score().as_f64();
                (best, out.best_trajectory, out.evaluations)
            }
        };
        if k == 0 {
            evaluations_per_run = evaluations;
        }
        debug_assert_eq!(
            evaluations, evaluations_per_run,
            "equal-seeded runs spend equal budgets"
        );
        finals.push(final_value);
        trajectories.push(trajectory);
    }

    let (average, std_dev) = mean_and_std(&finals);
    let (mut best, mut worst) = (finals[0], finals[0]);
    for &v in &finals[1..] {
        let improves = match problem.sense {
            Sense::Minimize => v < best,
            Sense::Maximize => v > best,
        };
        if improves {
            best = v;
        }
        let worsens = match problem.sense {
            Sense::Minimize => v > worst,
            Sense::Maximize => v < worst,
        };
        if worsens {
            worst = v;
        }
    }

    Ok(RunStats {
        problem: problem.name.clone(),
        algorithm: config.algorithm,
        runs: config.runs,
        finals,
        average,
        std_dev,
        best,
        worst,
        trajectories,
        evaluations_per_run,
    })
}
