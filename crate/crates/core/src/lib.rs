//! Core library for a learner-inspired population optimizer hybridized with an
//! annealing acceptance filter. Everything here is deterministic given a seed:
//! the same seed and configuration reproduce the same run byte for byte, and a
//! recorded decision script replays a run exactly on any platform.
//!
//! The crate is `no_std` (with `alloc`) so the engine can run embedded or be
//! linked from other runtimes; all file and terminal concerns live in the
//! companion CLI crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod annealing;
pub mod benchmarks;
pub mod encoding;
pub mod engine;
pub mod experiment;
pub mod grouping;
pub mod problem;
pub mod rng;
pub mod script;

pub use annealing::{
    acceptance_probability, cool, default_neighbor, metropolis_accept, sa_optimize,
    AcceptanceDecision, Cooling, CoolingRule, SaConfig, SaOutcome,
};
pub use encoding::{
    crossover_binary, crossover_real, decode_binary, encode_binary, mutate_binary,
    mutate_binary_at, mutate_real, BinaryString, EncodingError, MutationDirection,
};
pub use engine::{
    lpb_run, lpbsa_run, summary_average, update_population, ChildOutcome, ChildRecord,
    EngineError, IterationAverage, IterationRecord, MutationNote, PairingRecord, RunConfig,
    RunOutcome, ThresholdSource,
};
pub use experiment::{
    iterations_for_budget, mean_and_std, run_experiment, sa_steps_for_budget, Algorithm,
    ExperimentConfig, RunStats,
};
pub use grouping::{
    partition_population, sample_subpopulation, select_parents, split_ranked, Group,
    PopulationPartition, SubpopulationSplit,
};
pub use problem::{Fitness, Genome, Individual, ObjectiveProblem, ProblemError, Sense};
pub use rng::SeededRng;
pub use script::{DecisionScript, PartnerRef, Record, ScriptError};
