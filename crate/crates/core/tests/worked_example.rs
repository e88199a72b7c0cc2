//! Replays the bundled decision script against the squared-magnitude problem
//! and checks every recorded quantity of both iterations: initial fitness,
//! ranked draws, thresholds, labels, selections, recombination and mutation
//! output, verdicts, survivor order, and the three truncated averages.

use lpbsa_core::engine::{
    lpbsa_run, ChildOutcome, IterationAverage, RunConfig, RunOutcome, ThresholdSource,
};
use lpbsa_core::grouping::Group;
use lpbsa_core::problem::{squared_magnitude_problem, Fitness, Genome};
use lpbsa_core::rng::SeededRng;
use lpbsa_core::script::{DecisionScript, WORKED_EXAMPLE};

const INITIAL: [(&str, i64, i64, i64); 16] = [
    ("B1", 4320, 3120, 28_396_800),
    ("B2", 1233, 4523, 21_977_818),
    ("B3", 5100, 3209, 36_307_681),
    ("B4", 4355, 5210, 46_110_125),
    ("B5", 2331, 4266, 23_632_317),
    ("B6", 2040, 2755, 11_751_625),
    ("B7", 5043, 1977, 29_340_378),
    ("B8", 3460, 4781, 34_829_561),
    ("B9", 1920, 5510, 34_046_500),
    ("B10", 4222, 3741, 31_820_365),
    ("B11", 5401, 1740, 32_198_401),
    ("B12", 3351, 2850, 19_351_701),
    ("B13", 5201, 4989, 51_940_522),
    ("B14", 2188, 3477, 16_876_873),
    ("B15", 3409, 1877, 15_144_410),
    ("B16", 4560, 2776, 28_499_776),
];

const SUBPOP_1: [&str; 8] = ["B3", "B8", "B11", "B1", "B5", "B12", "B15", "B6"];
const SUBPOP_2: [&str; 8] = ["B4", "B9", "B10", "B1", "B2", "B12", "B14", "B6"];

const LABELS_1: [(&str, Group); 16] = [
    ("B1", Group::Good),
    ("B2", Group::Bad),
    ("B3", Group::Good),
    ("B4", Group::Ideal),
    ("B5", Group::Bad),
    ("B6", Group::Bad),
    ("B7", Group::Good),
    ("B8", Group::Good),
    ("B9", Group::Good),
    ("B10", Group::Good),
    ("B11", Group::Good),
    ("B12", Group::Bad),
    ("B13", Group::Ideal),
    ("B14", Group::Bad),
    ("B15", Group::Bad),
    ("B16", Group::Good),
];

// The member sitting exactly on the weak threshold stays in the weak group.
const LABELS_2: [(&str, Group); 16] = [
    ("B1", Group::Good),
    ("B2", Group::Bad),
    ("B3", Group::Good),
    ("B4", Group::Good),
    ("B5", Group::Good),
    ("B6", Group::Bad),
    ("B7", Group::Good),
    ("B8", Group::Good),
    ("B9", Group::Good),
    ("B10", Group::Good),
    ("B11", Group::Good),
    ("B12", Group::Bad),
    ("B13", Group::Ideal),
    ("B14", Group::Bad),
    ("B15", Group::Bad),
    ("B16", Group::Good),
];

const PARENTS: [&str; 4] = ["B13", "B4", "B3", "B8"];
const PAIRS_1: [(&str, &str); 4] = [("B13", "B3"), ("B4", "B8"), ("B3", "B12"), ("B8", "B1")];
const PAIRS_2: [(&str, &str); 4] = [("B13", "B4"), ("B4", "B9"), ("B3", "B10"), ("B8", "B1")];

const PRE_1: [(i64, i64); 8] = [
    (5228, 2441),
    (5073, 6525),
    (2180, 5165),
    (6915, 4826),
    (2519, 3234),
    (6764, 2825),
    (7008, 2416),
    (1028, 6189),
];
const MUT_1: [(i64, i64); 8] = [
    (7276, 3465),
    (7121, 7549),
    (3204, 7213),
    (7939, 6874),
    (3543, 3746),
    (7788, 3849),
    (7024, 3440),
    (1540, 7213),
];
const PRE_2: [(i64, i64); 8] = [
    (5123, 4954),
    (4433, 5245),
    (1088, 5126),
    (7683, 5594),
    (5630, 3229),
    (4102, 3721),
    (3488, 2416),
    (4292, 6189),
];
const MUT_2: [(i64, i64); 8] = [
    (7171, 7002),
    (6481, 7293),
    (1600, 7174),
    (7939, 7642),
    (7678, 3741),
    (6150, 3977),
    (4000, 3440),
    (6340, 7213),
];

const REJECTED_1: [&str; 1] = ["C7"];
const REJECTED_2: [&str; 3] = ["C3", "C4", "C7"];

const ACCEPTED_FITNESS_1: [i64; 7] = [
    64_946_401, 107_696_042, 62_292_985, 110_279_597, 26_585_365, 75_467_745, 54_398_969,
];
const ACCEPTED_FITNESS_2: [i64; 5] = [
    100_451_245, 95_191_210, 72_946_765, 53_639_029, 92_222_969,
];

const SURVIVORS_1: [&str; 16] = [
    "C4", "C2", "C6", "C1", "C3", "C8", "B13", "B4", "B3", "B8", "B9", "B11", "B10", "B7",
    "B16", "B1",
];

fn fixture_config() -> RunConfig {
    RunConfig {
        population_size: 16,
        subpopulation_size: 8,
        selection_count: 4,
        max_iterations: 2,
        initial_temperature: 100.0,
        threshold_source: ThresholdSource::Fixed(0.6),
        ..RunConfig::default()
    }
}

fn replay_fixture() -> RunOutcome {
    let problem = squared_magnitude_problem(2, 0, 9000);
    let script = DecisionScript::parse(WORKED_EXAMPLE).expect("bundled script parses");
    let mut rng = SeededRng::new(0);
    lpbsa_run(&problem, &fixture_config(), &mut rng, Some(&script)).expect("replay succeeds")
}

fn pair(genome: &Genome) -> (i64, i64) {
    match genome {
        Genome::Int(v) => (v[0], v[1]),
        Genome::Real(_) => panic!("fixture genomes are integer"),
    }
}

#[test]
fn initial_population_and_average() {
    let out = replay_fixture();
    assert_eq!(out.initial_population.len(), 16);
    for (member, &(id, x1, x2, fitness)) in out.initial_population.iter().zip(&INITIAL) {
        assert_eq!(member.id, id);
        assert_eq!(pair(&member.genome), (x1, x2));
        assert_eq!(member.score(), Fitness::Int(fitness));
    }
    assert_eq!(out.initial_average, Fitness::Int(28_889_053));
}

#[test]
fn ranked_draws_and_thresholds() {
    let out = replay_fixture();
    let split1 = &out.iterations[0].split;
    let ids1: Vec<&str> = split1.ranked.iter().map(|(id, _)| id.as_str()).collect();
    assert_eq!(ids1, SUBPOP_1);
    assert_eq!(split1.good_threshold, Fitness::Int(36_307_681));
    assert_eq!(split1.bad_threshold, Fitness::Int(23_632_317));
    let good1: Vec<&str> = split1.good_half().iter().map(|(id, _)| id.as_str()).collect();
    assert_eq!(good1, ["B3", "B8", "B11", "B1"]);

    let split2 = &out.iterations[1].split;
    let ids2: Vec<&str> = split2.ranked.iter().map(|(id, _)| id.as_str()).collect();
    assert_eq!(ids2, SUBPOP_2);
    assert_eq!(split2.good_threshold, Fitness::Int(46_110_125));
    assert_eq!(split2.bad_threshold, Fitness::Int(21_977_818));
    let good2: Vec<&str> = split2.good_half().iter().map(|(id, _)| id.as_str()).collect();
    assert_eq!(good2, ["B4", "B9", "B10", "B1"]);
}

#[test]
fn partitions_and_selection() {
    let out = replay_fixture();
    for (iteration, expected) in out.iterations.iter().zip([&LABELS_1, &LABELS_2]) {
        let got: Vec<(&str, Group)> = iteration
            .partition
            .labels
            .iter()
            .map(|(id, g)| (id.as_str(), *g))
            .collect();
        let want: Vec<(&str, Group)> = expected.to_vec();
        assert_eq!(got, want);
        assert_eq!(iteration.parents, PARENTS);
    }
    for (iteration, pairs) in out.iterations.iter().zip([&PAIRS_1, &PAIRS_2]) {
        let got: Vec<(&str, &str)> = iteration
            .pairings
            .iter()
            .map(|p| (p.parent.as_str(), p.partner.as_str()))
            .collect();
        assert_eq!(got, *pairs);
    }
}

#[test]
fn recombination_and_mutation_values() {
    let out = replay_fixture();
    let tables = [(&PRE_1, &MUT_1), (&PRE_2, &MUT_2)];
    for (iteration, (pre, mutated)) in out.iterations.iter().zip(tables) {
        assert_eq!(iteration.children.len(), 8);
        for (i, child) in iteration.children.iter().enumerate() {
            assert_eq!(child.id, format!("C{}", i + 1));
            assert_eq!(pair(&child.pre_mutation), pre[i], "{} before", child.id);
            assert_eq!(pair(&child.mutated), mutated[i], "{} after", child.id);
        }
    }
}

#[test]
fn verdicts_discard_exactly_the_recorded_children() {
    let out = replay_fixture();
    for (iteration, rejected) in out.iterations.iter().zip([&REJECTED_1[..], &REJECTED_2[..]]) {
        for child in &iteration.children {
            assert!(child.forced_verdict, "{} carries a scripted verdict", child.id);
            let expected = if rejected.contains(&child.id.as_str()) {
                ChildOutcome::Discarded
            } else {
                ChildOutcome::Accepted
            };
            assert_eq!(child.outcome, expected, "{}", child.id);
        }
    }
}

#[test]
fn accepted_fitness_and_truncated_averages() {
    let out = replay_fixture();
    let expected: [&[i64]; 2] = [&ACCEPTED_FITNESS_1, &ACCEPTED_FITNESS_2];
    let averages = [52_649_382i64, 55_693_299];
    for ((iteration, fitness), average) in out.iterations.iter().zip(expected).zip(averages) {
        let accepted: Vec<Fitness> = iteration
            .children
            .iter()
            .filter(|c| c.outcome == ChildOutcome::Accepted)
            .map(|c| c.mutated_fitness)
            .collect();
        let want: Vec<Fitness> = fitness.iter().map(|&f| Fitness::Int(f)).collect();
        assert_eq!(accepted, want);
        assert_eq!(
            iteration.average,
            IterationAverage::Participants(Fitness::Int(average))
        );
    }
}

#[test]
fn survivors_best_and_budget() {
    let out = replay_fixture();
    assert_eq!(out.iterations[0].survivors, SURVIVORS_1);
    assert_eq!(out.iterations[0].best_so_far, Fitness::Int(110_279_597));
    assert_eq!(out.iterations[1].best_so_far, Fitness::Int(110_279_597));
    assert_eq!(out.best.id, "C4");
    assert_eq!(out.best.score(), Fitness::Int(110_279_597));
    // 16 initial evaluations plus two iterations of 8 children evaluated
    // before and after mutation.
    assert_eq!(out.evaluations, 48);
}

#[test]
fn replay_echoes_the_script_normalized() {
    let out = replay_fixture();
    let input = DecisionScript::parse(WORKED_EXAMPLE).unwrap();
    assert_eq!(out.script.serialize(), input.serialize());
}
