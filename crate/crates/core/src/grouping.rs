//! Population structuring: sample a subpopulation, rank and halve it, use the
//! half leaders as thresholds to label the whole population, and pick parents
//! by label precedence.

use crate::problem::{Fitness, Individual, Sense};
use crate::rng::SeededRng;
use alloc::string::String;
use alloc::vec::Vec;

/// Label a population member earns from the threshold comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Group {
    Ideal,
    Good,
    Bad,
}

/// Ranked subpopulation with its two thresholds. The first half of `ranked`
/// is the stronger ("good") half; each threshold is the score of its half's
/// leader.
#[derive(Clone, Debug, PartialEq)]
pub struct SubpopulationSplit {
    /// Members best-first. Ties keep draw order.
    pub ranked: Vec<(String, Fitness)>,
    pub good_threshold: Fitness,
    pub bad_threshold: Fitness,
}

impl SubpopulationSplit {
    pub fn good_half(&self) -> &[(String, Fitness)] {
        &self.ranked[..self.ranked.len() / 2]
    }

    pub fn bad_half(&self) -> &[(String, Fitness)] {
        &self.ranked[self.ranked.len() / 2..]
    }
}

/// Group labels aligned with the population slice they were computed from.
#[derive(Clone, Debug, PartialEq)]
pub struct PopulationPartition {
    pub labels: Vec<(String, Group)>,
}

fn at_most(a: &Fitness, b: &Fitness) -> bool {
    match (a, b) {
        (Fitness::Int(x), Fitness::Int(y)) => x <= y,
        _ => a.as_f64() <= b.as_f64(),
    }
}

/// True when `f` is no better than threshold `t` under `sense`.
fn no_better_than(f: &Fitness, t: &Fitness, sense: Sense) -> bool {
    match sense {
        Sense::Maximize => at_most(f, t),
        Sense::Minimize => at_most(t, f),
    }
}

/// Ranks the given members best-first and splits them into halves.
///
/// `members.len()` must be even and at least 2; every member must carry a
/// fitness.
pub fn split_ranked(members: &[&Individual], sense: Sense) -> SubpopulationSplit {
    assert!(
        members.len() >= 2 && members.len() % 2 == 0,
        "subpopulation size must be even and at least 2"
    );
    let mut ranked: Vec<(String, Fitness)> = members
        .iter()
        .map(|m| (m.id.clone(), m.score()))
        .collect();
    ranked.sort_by(|a, b| {
        if a.1.better_than(&b.1, sense) {
            core::cmp::Ordering::Less
        } else if b.1.better_than(&a.1, sense) {
            core::cmp::Ordering::Greater
        } else {
            core::cmp::Ordering::Equal
        }
    });
    let half = ranked.len() / 2;
    let good_threshold = ranked[0].1;
    let bad_threshold = ranked[half].1;
    SubpopulationSplit {
        ranked,
        good_threshold,
        bad_threshold,
    }
}

/// Draws `size` distinct members uniformly and returns their ranked split.
pub fn sample_subpopulation(
    pop: &[Individual],
    size: usize,
    sense: Sense,
    rng: &mut SeededRng,
) -> SubpopulationSplit {
    let picks = rng.sample_indices(pop.len(), size);
    let members: Vec<&Individual> = picks.iter().map(|&i| &pop[i]).collect();
    split_ranked(&members, sense)
}

/// Labels every member of `pop` against the split's thresholds.
///
/// A score no better than the bad threshold is Bad; otherwise no better than
/// the good threshold is Good; otherwise Ideal. Boundary equality therefore
/// groups downward.
pub fn partition_population(
    pop: &[Individual],
    split: &SubpopulationSplit,
    sense: Sense,
) -> PopulationPartition {
    let labels = pop
        .iter()
        .map(|m| {
            let f = m.score();
            let g = if no_better_than(&f, &split.bad_threshold, sense) {
                Group::Bad
            } else if no_better_than(&f, &split.good_threshold, sense) {
                Group::Good
            } else {
                Group::Ideal
            };
            (m.id.clone(), g)
        })
        .collect();
    PopulationPartition { labels }
}

/// Picks `count` parent ids: all Ideal members first, then Good, then Bad,
/// each group best-first with ties keeping population order.
///
/// `partition` must be aligned with `pop` (same members, same order).
pub fn select_parents(
    pop: &[Individual],
    partition: &PopulationPartition,
    count: usize,
    sense: Sense,
) -> Vec<String> {
    assert!(count <= pop.len(), "cannot select more parents than members");
    assert_eq!(
        pop.len(),
        partition.labels.len(),
        "partition does not match population"
    );
    let mut out = Vec::with_capacity(count);
    for wanted in [Group::Ideal, Group::Good, Group::Bad] {
        if out.len() == count {
            break;
        }
        let mut bucket: Vec<&Individual> = pop
            .iter()
            .zip(&partition.labels)
            .filter(|(m, (id, g))| {
                assert_eq!(&m.id, id, "partition does not match population");
                *g == wanted
            })
            .map(|(m, _)| m)
            .collect();
        bucket.sort_by(|a, b| {
            if a.score().better_than(&b.score(), sense) {
                core::cmp::Ordering::Less
            } else if b.score().better_than(&a.score(), sense) {
                core::cmp::Ordering::Greater
            } else {
                core::cmp::Ordering::Equal
            }
        });
        for m in bucket {
            if out.len() == count {
                break;
            }
            out.push(m.id.clone());
        }
    }
    out
}
