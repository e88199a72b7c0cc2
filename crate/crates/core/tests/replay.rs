//! Replay must fail on the first record that contradicts the engine's own
//! computation, naming the source line. Each case tampers with one line of
//! the bundled script and checks the reported line and message.

use lpbsa_core::engine::{lpbsa_run, EngineError, RunConfig, RunOutcome, ThresholdSource};
use lpbsa_core::problem::{squared_magnitude_problem, Fitness};
use lpbsa_core::rng::SeededRng;
use lpbsa_core::script::{DecisionScript, WORKED_EXAMPLE};

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

fn run_script(text: &str) -> Result<RunOutcome, EngineError> {
    let problem = squared_magnitude_problem(2, 0, 9000);
    let script = DecisionScript::parse(text).expect("tampered script still parses");
    let mut rng = SeededRng::new(0);
    lpbsa_run(&problem, &fixture_config(), &mut rng, Some(&script))
}

/// Replaces one exact line, keeping the numbering intact.
fn tamper(original: &str, replacement: &str) -> String {
    let out = WORKED_EXAMPLE.replacen(original, replacement, 1);
    assert_ne!(out, WORKED_EXAMPLE, "line to tamper with not found");
    out
}

fn expect_divergence(text: &str, line: usize, needle: &str) {
    match run_script(text) {
        Err(EngineError::Replay { line: got, detail }) => {
            assert_eq!(got, line, "wrong line in: {detail}");
            assert!(detail.contains(needle), "{detail:?} lacks {needle:?}");
        }
        Err(other) => panic!("wrong error kind: {other}"),
        Ok(_) => panic!("tampered script replayed without divergence"),
    }
}

#[test]
fn unknown_subpopulation_member() {
    let text = tamper(
        "SUBPOP B3 B8 B11 B1 B5 B12 B15 B6",
        "SUBPOP B3 B8 B11 B1 B5 B12 B99 B6",
    );
    expect_divergence(&text, 27, "unknown individual B99");
}

#[test]
fn repeated_subpopulation_member() {
    let text = tamper(
        "SUBPOP B3 B8 B11 B1 B5 B12 B15 B6",
        "SUBPOP B3 B8 B11 B1 B5 B12 B3 B6",
    );
    expect_divergence(&text, 27, "repeats B3");
}

#[test]
fn wrong_subpopulation_size() {
    let text = tamper(
        "SUBPOP B3 B8 B11 B1 B5 B12 B15 B6",
        "SUBPOP B3 B8 B11 B1 B5 B12 B15",
    );
    expect_divergence(&text, 27, "names 7 members");
}

#[test]
fn wrong_record_kind_in_place_of_a_draw() {
    let text = tamper("SUBPOP B3 B8 B11 B1 B5 B12 B15 B6", "PAIR B13 B3");
    expect_divergence(&text, 27, "expected SUBPOP, found PAIR");
}

#[test]
fn pairing_contradicts_the_computed_parent() {
    let text = tamper("PAIR B13 B3", "PAIR B12 B3");
    expect_divergence(&text, 29, "selection produced B13");
}

#[test]
fn unknown_partner() {
    let text = tamper("PAIR B13 B3", "PAIR B13 B99");
    expect_divergence(&text, 29, "unknown partner B99");
}

#[test]
fn partner_rank_out_of_range() {
    let text = tamper("PAIR B13 B3", "PAIR B13 K9");
    expect_divergence(&text, 29, "rank K9 exceeds");
}

#[test]
fn forced_coordinate_for_an_unknown_child() {
    let text = tamper("FORCE C8 X1 1028", "FORCE C9 X1 1028");
    expect_divergence(&text, 35, "unknown child C9");
}

#[test]
fn flip_for_the_wrong_child() {
    let text = tamper("MUTBIT C1 X1 1\nMUTBIT C1 X2 1", "MUTBIT C2 X1 1\nMUTBIT C1 X2 1");
    expect_divergence(&text, 37, "record names C2");
}

#[test]
fn flip_on_an_ineligible_digit() {
    // The first coordinate's leading digit is already a one; the upward flip
    // cannot touch it.
    let text = tamper("MUTBIT C1 X1 1\nMUTBIT C1 X2 1", "MUTBIT C1 X1 0\nMUTBIT C1 X2 1");
    expect_divergence(&text, 37, "cannot flip digit 0");
}

#[test]
fn real_step_in_an_integer_run() {
    let text = tamper("MUTBIT C1 X1 1\nMUTBIT C1 X2 1", "MUTREAL C1 X1 5228.0\nMUTBIT C1 X2 1");
    expect_divergence(&text, 37, "expected MUTBIT, found MUTREAL");
}

#[test]
fn verdict_for_the_wrong_child() {
    let text = tamper("ACCEPT C1\nACCEPT C2\nACCEPT C3", "ACCEPT C2\nACCEPT C1\nACCEPT C3");
    expect_divergence(&text, 54, "acceptance record names C2 while deciding C1");
}

#[test]
fn script_ends_before_the_run_does() {
    let mut text = String::from(WORKED_EXAMPLE.trim_end());
    assert!(text.ends_with("ACCEPT C8"));
    text.truncate(text.len() - "ACCEPT C8".len());
    expect_divergence(&text, 0, "script ended after line 100");
}

#[test]
fn script_continues_after_the_run_ends() {
    let mut text = String::from(WORKED_EXAMPLE);
    text.push_str("SUBPOP B3 B8 B11 B1 B5 B12 B15 B6\n");
    expect_divergence(&text, 102, "run complete but script continues with SUBPOP");
}

#[test]
fn too_few_initial_members() {
    let text = tamper("INIT B16 4560 2776\n", "");
    expect_divergence(&text, 0, "initializes 15 individuals");
}

#[test]
fn duplicate_initial_id() {
    let text = tamper("INIT B16 4560 2776", "INIT B1 4560 2776");
    expect_divergence(&text, 24, "duplicate initial id B1");
}

#[test]
fn initial_member_with_wrong_dimension() {
    let text = tamper("INIT B1 4320 3120", "INIT B1 4320");
    expect_divergence(&text, 9, "expected 2 coordinates");
}

#[test]
fn real_coordinate_in_an_integer_run() {
    let text = tamper("INIT B1 4320 3120", "INIT B1 4320.5 3120");
    expect_divergence(&text, 9, "cannot take real coordinate");
}

#[test]
fn threshold_records_are_accepted_in_place_of_verdicts() {
    // The first child improves on its pre-mutation form, so any threshold
    // accepts it and the iteration is unchanged.
    let text = tamper("ACCEPT C1\n", "THRESH C1 0.5\n");
    let out = run_script(&text).expect("threshold decision replays");
    let child = &out.iterations[0].children[0];
    assert!(!child.forced_verdict);
    let decision = child.decision.expect("filtered run decides every child");
    assert_eq!(decision.threshold, 0.5);
    assert!(decision.accepted);
    assert_eq!(
        out.iterations[0].average.value(),
        Fitness::Int(52_649_382)
    );
}

#[test]
fn replaying_twice_gives_identical_records() {
    let a = run_script(WORKED_EXAMPLE).unwrap();
    let b = run_script(WORKED_EXAMPLE).unwrap();
    assert_eq!(a.script.serialize(), b.script.serialize());
    for (x, y) in a.iterations.iter().zip(&b.iterations) {
        assert_eq!(x.survivors, y.survivors);
        assert_eq!(x.best_so_far, y.best_so_far);
        assert_eq!(x.average, y.average);
    }
}
