//! Randomized properties of the operators, the aggregation helpers, and the
//! script text format.

use lpbsa_core::annealing::acceptance_probability;
use lpbsa_core::encoding::{
    crossover_binary, decode_binary, encode_binary, mutate_binary, mutate_real,
    MutationDirection,
};
use lpbsa_core::engine::{summary_average, update_population};
use lpbsa_core::problem::{Fitness, Genome, Individual, Sense};
use lpbsa_core::rng::SeededRng;
use lpbsa_core::script::{DecisionScript, PartnerRef, Record, Scalar};
use proptest::prelude::*;

fn sense_strategy() -> impl Strategy<Value = Sense> {
    prop_oneof![Just(Sense::Minimize), Just(Sense::Maximize)]
}

proptest! {
    #[test]
    fn encode_decode_round_trips(v: u64) {
        prop_assert_eq!(decode_binary(&encode_binary(v)).unwrap(), v);
    }

    #[test]
    fn crossover_swaps_widths(a in 1u64.., b in 1u64..) {
        let (ea, eb) = (encode_binary(a), encode_binary(b));
        // The midpoint splice fits only when each head's cut lands within
        // the other parent.
        prop_assume!(ea.len() / 2 <= eb.len() && eb.len() / 2 <= ea.len());
        let (c1, c2) = crossover_binary(&ea, &eb);
        prop_assert_eq!(c1.len(), eb.len());
        prop_assert_eq!(c2.len(), ea.len());
    }

    #[test]
    fn crossover_conserves_set_bits_at_equal_widths(
        (a, b) in (1u32..32).prop_flat_map(|w| {
            let lo = 1u64 << (w - 1);
            let hi = 1u64 << w;
            (lo..hi, lo..hi)
        })
    ) {
        let (c1, c2) = crossover_binary(&encode_binary(a), &encode_binary(b));
        let got = decode_binary(&c1).unwrap().count_ones()
            + decode_binary(&c2).unwrap().count_ones();
        prop_assert_eq!(got, a.count_ones() + b.count_ones());
    }

    #[test]
    fn upward_flip_strictly_increases(v in 0u64..1 << 32, seed: u64) {
        let coded = encode_binary(v);
        // Values whose digits are all ones have nothing to raise.
        prop_assume!((0..coded.len()).any(|i| !coded.bit(i)));
        let mut rng = SeededRng::new(seed);
        let (flipped, _) = mutate_binary(&coded, MutationDirection::ZeroToOne, &mut rng).unwrap();
        prop_assert!(decode_binary(&flipped).unwrap() > v);
    }

    #[test]
    fn downward_flip_strictly_decreases(v in 1u64..1 << 32, seed: u64) {
        let coded = encode_binary(v);
        let mut rng = SeededRng::new(seed);
        let (flipped, _) = mutate_binary(&coded, MutationDirection::OneToZero, &mut rng).unwrap();
        prop_assert!(decode_binary(&flipped).unwrap() < v);
    }

    #[test]
    fn truncating_average_matches_the_oracle(values in prop::collection::vec(any::<i64>(), 1..20)) {
        let wrapped: Vec<Fitness> = values.iter().map(|&v| Fitness::Int(v)).collect();
        let sum: i128 = values.iter().map(|&v| v as i128).sum();
        let magnitude = sum.unsigned_abs() / values.len() as u128;
        let expected = if sum < 0 { -(magnitude as i64) } else { magnitude as i64 };
        prop_assert_eq!(summary_average(&wrapped), Some(Fitness::Int(expected)));
    }

    #[test]
    fn real_average_matches_the_oracle(values in prop::collection::vec(-1e12f64..1e12, 1..20)) {
        let wrapped: Vec<Fitness> = values.iter().map(|&v| Fitness::Real(v)).collect();
        let expected = values.iter().sum::<f64>() / values.len() as f64;
        prop_assert_eq!(summary_average(&wrapped), Some(Fitness::Real(expected)));
    }

    #[test]
    fn merge_truncate_matches_a_stable_sort_oracle(
        current in prop::collection::vec(0i64..20, 1..10),
        entrants in prop::collection::vec(0i64..20, 0..10),
        capacity in 1usize..24,
        sense in sense_strategy(),
    ) {
        let mk = |prefix: &str, values: &[i64]| -> Vec<Individual> {
            values
                .iter()
                .enumerate()
                .map(|(i, &f)| Individual {
                    id: format!("{prefix}{i}"),
                    genome: Genome::Int(vec![0]),
                    fitness: Some(Fitness::Int(f)),
                })
                .collect()
        };
        let current = mk("m", &current);
        let entrants = mk("e", &entrants);

        let mut oracle: Vec<(String, i64)> = current
            .iter()
            .chain(&entrants)
            .map(|m| (m.id.clone(), match m.score() { Fitness::Int(v) => v, _ => unreachable!() }))
            .collect();
        match sense {
            Sense::Maximize => oracle.sort_by_key(|(_, f)| core::cmp::Reverse(*f)),
            Sense::Minimize => oracle.sort_by_key(|(_, f)| *f),
        }
        oracle.truncate(capacity);
        let expected: Vec<String> = oracle.into_iter().map(|(id, _)| id).collect();

        let got: Vec<String> = update_population(&current, &entrants, capacity, sense)
            .into_iter()
            .map(|m| m.id)
            .collect();
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn real_mutation_steps_one_coordinate_within_bounds(
        x in prop::collection::vec(-5f64..5.0, 1..6),
        sigma in 0.01f64..1.0,
        seed: u64,
    ) {
        let bounds: Vec<(f64, f64)> = x.iter().map(|_| (-5.0, 5.0)).collect();
        let mut rng = SeededRng::new(seed);
        let (stepped, coord) = mutate_real(&x, sigma, &bounds, &mut rng);
        prop_assert_eq!(stepped.len(), x.len());
        prop_assert!(coord < x.len());
        for (i, (&got, &before)) in stepped.iter().zip(&x).enumerate() {
            prop_assert!((-5.0..=5.0).contains(&got));
            if i != coord {
                prop_assert_eq!(got, before);
            }
        }
    }

    #[test]
    fn acceptance_probability_stays_in_the_unit_interval(
        new in -1e6f64..1e6,
        current in -1e6f64..1e6,
        temperature in 1e-9f64..1e6,
        sense in sense_strategy(),
    ) {
        let p = acceptance_probability(new, current, temperature, sense);
        prop_assert!(p > 0.0 && p <= 1.0);
        let worsening = match sense {
            Sense::Minimize => new - current,
            Sense::Maximize => current - new,
        };
        if worsening <= 0.0 {
            prop_assert_eq!(p, 1.0);
        } else if worsening / temperature >= 1e-10 {
            prop_assert!(p < 1.0);
        }
    }
}

fn id_strategy() -> impl Strategy<Value = String> {
    // Letters A through J keep generated ids clear of rank aliases, which
    // start with K.
    "[A-J][0-9]{1,3}"
}

fn scalar_strategy() -> impl Strategy<Value = Scalar> {
    prop_oneof![
        any::<i64>().prop_map(Scalar::Int),
        (-1e300f64..1e300).prop_map(Scalar::Real),
    ]
}

fn record_strategy() -> impl Strategy<Value = Record> {
    prop_oneof![
        (id_strategy(), prop::collection::vec(scalar_strategy(), 1..4))
            .prop_map(|(id, coords)| Record::Init { id, coords }),
        prop::collection::vec(id_strategy(), 1..8).prop_map(|ids| Record::Subpop { ids }),
        (id_strategy(), id_strategy()).prop_map(|(parent, partner)| Record::Pair {
            parent,
            partner: PartnerRef::Id(partner),
        }),
        (id_strategy(), 1usize..9).prop_map(|(parent, k)| Record::Pair {
            parent,
            partner: PartnerRef::Rank(k),
        }),
        (1usize..64).prop_map(|position| Record::Cut { position }),
        (id_strategy(), 0usize..6, scalar_strategy()).prop_map(|(child, coord, value)| {
            Record::Force {
                child,
                coord,
                value,
            }
        }),
        (id_strategy(), 0usize..6, 0usize..32).prop_map(|(child, coord, index)| {
            Record::MutBit {
                child,
                coord,
                index,
            }
        }),
        (id_strategy(), 0usize..6, -1e300f64..1e300).prop_map(|(child, coord, value)| {
            Record::MutReal {
                child,
                coord,
                value,
            }
        }),
        (id_strategy(), 0f64..=1.0).prop_map(|(child, value)| Record::Thresh { child, value }),
        (id_strategy(), any::<bool>()).prop_map(|(child, accept)| Record::Verdict { child, accept }),
    ]
}

proptest! {
    #[test]
    fn script_text_round_trips(records in prop::collection::vec(record_strategy(), 0..40)) {
        let mut script = DecisionScript::new();
        for r in &records {
            script.push(r.clone());
        }
        let text = script.serialize();
        let parsed = DecisionScript::parse(&text).unwrap();
        let got: Vec<&Record> = parsed.records().collect();
        let want: Vec<&Record> = records.iter().collect();
        prop_assert_eq!(got, want);
        prop_assert_eq!(parsed.serialize(), text);
    }
}
