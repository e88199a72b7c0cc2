//! Renders a replayed run as the sequence of tables the scripted walkthrough
//! follows: initial population, ranked draws with thresholds, labels,
//! selection, recombination, mutation, acceptance, survivors, and averages.
//! The last line repeats every average in order.

use crate::report::{fmt_fitness, fmt_value, TextTable};
use lpbsa_core::engine::{ChildOutcome, MutationNote, RunOutcome};
use lpbsa_core::problem::{Fitness, Genome, Individual};

fn genome_cells(genome: &Genome) -> Vec<String> {
    match genome {
        Genome::Int(v) => v.iter().map(|c| c.to_string()).collect(),
        Genome::Real(v) => v.iter().map(|c| fmt_value(*c)).collect(),
    }
}

fn coordinate_headers(dim: usize) -> Vec<String> {
    (1..=dim).map(|i| format!("x{i}")).collect()
}

fn score_of(roster: &[Individual], id: &str) -> Option<Fitness> {
    roster.iter().find(|m| m.id == id).map(|m| m.score())
}

fn flips_cell(notes: &[MutationNote]) -> String {
    if notes.is_empty() {
        return "-".to_string();
    }
    let parts: Vec<String> = notes
        .iter()
        .map(|n| match n {
            MutationNote::BitFlip { coord, index } => format!("X{}:{index}", coord + 1),
            MutationNote::GaussianStep { coord } => format!("X{}:~", coord + 1),
            MutationNote::NoEligibleBit { coord } => format!("X{}:-", coord + 1),
        })
        .collect();
    parts.join(" ")
}

fn outcome_cell(outcome: ChildOutcome) -> &'static str {
    match outcome {
        ChildOutcome::Accepted => "accepted",
        ChildOutcome::Reverted => "reverted",
        ChildOutcome::Discarded => "rejected",
    }
}

/// The full plain-text report of a replayed run.
pub fn render(out: &RunOutcome) -> String {
    let dim = out
        .initial_population
        .first()
        .map_or(0, |m| m.genome.len());
    let mut text = String::new();

    text.push_str("initial population\n");
    let mut header = vec!["id".to_string()];
    header.extend(coordinate_headers(dim));
    header.push("fitness".to_string());
    let mut table = TextTable::new(header.clone());
    for member in &out.initial_population {
        let mut row = vec![member.id.clone()];
        row.extend(genome_cells(&member.genome));
        row.push(fmt_fitness(member.score()));
        table.push(row);
    }
    text.push_str(&table.render());
    text.push_str(&format!("average {}\n", fmt_fitness(out.initial_average)));

    for iteration in &out.iterations {
        text.push_str(&format!("\niteration {}\n", iteration.index));

        text.push_str("draw, strongest first\n");
        let mut table = TextTable::new(vec!["rank", "id", "fitness"]);
        for (k, (id, fitness)) in iteration.split.ranked.iter().enumerate() {
            table.push(vec![
                format!("K{}", k + 1),
                id.clone(),
                fmt_fitness(*fitness),
            ]);
        }
        text.push_str(&table.render());
        text.push_str(&format!(
            "thresholds: strong {}, weak {}\n",
            fmt_fitness(iteration.split.good_threshold),
            fmt_fitness(iteration.split.bad_threshold)
        ));

        text.push_str("\nlabels\n");
        let mut table = TextTable::new(vec!["id", "fitness", "label"]);
        for (id, group) in &iteration.partition.labels {
            let fitness = score_of(&out.initial_population, id)
                .map_or_else(|| "-".to_string(), fmt_fitness);
            table.push(vec![id.clone(), fitness, format!("{group:?}")]);
        }
        text.push_str(&table.render());

        text.push_str(&format!("\nparents: {}\n", iteration.parents.join(" ")));

        text.push_str("\nrecombination\n");
        let mut header = vec!["child".to_string(), "parent".to_string(), "partner".to_string()];
        header.extend(coordinate_headers(dim));
        header.push("fitness".to_string());
        let mut table = TextTable::new(header);
        for child in &iteration.children {
            let mut row = vec![child.id.clone(), child.parent.clone(), child.partner.clone()];
            row.extend(genome_cells(&child.pre_mutation));
            row.push(fmt_fitness(child.pre_fitness));
            table.push(row);
        }
        text.push_str(&table.render());

        text.push_str("\nmutation\n");
        let mut header = vec!["child".to_string()];
        header.extend(coordinate_headers(dim));
        header.push("flips".to_string());
        header.push("fitness".to_string());
        let mut table = TextTable::new(header);
        for child in &iteration.children {
            let mut row = vec![child.id.clone()];
            row.extend(genome_cells(&child.mutated));
            row.push(flips_cell(&child.mutation_notes));
            row.push(fmt_fitness(child.mutated_fitness));
            table.push(row);
        }
        text.push_str(&table.render());

        text.push_str("\nacceptance\n");
        let mut table = TextTable::new(vec!["child", "before", "after", "decision"]);
        for child in &iteration.children {
            table.push(vec![
                child.id.clone(),
                fmt_fitness(child.pre_fitness),
                fmt_fitness(child.mutated_fitness),
                outcome_cell(child.outcome).to_string(),
            ]);
        }
        text.push_str(&table.render());

        text.push_str(&format!("\nsurvivors: {}\n", iteration.survivors.join(" ")));
        text.push_str(&format!(
            "average {}\n",
            fmt_fitness(iteration.average.value())
        ));
    }

    let mut averages = vec![fmt_fitness(out.initial_average)];
    averages.extend(
        out.iterations
            .iter()
            .map(|it| fmt_fitness(it.average.value())),
    );
    text.push('\n');
    text.push_str(&averages.join(" "));
    text.push('\n');
    text
}
