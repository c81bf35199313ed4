mod common;

use std::path::Path;

use num_bigint::BigInt;
use proptest::prelude::*;

use paradecomp::config::{
    alpha_vector, generate_equations, ConfigurationSet, EquationId, Orientation, Selection, Subsystem,
};
use paradecomp::decomp::{g_sigma, o_sets, sigma_slots};
use paradecomp::gordan::gordan_alternative;
use paradecomp::grouporacle::{FreeGroupOracle, GroupOracle};
use paradecomp::intmat::{IntMatrix, Permutation};
use paradecomp::io::{format_selections, parse_matrix, parse_selections};
use paradecomp::normality::{certificate_matrix, search_normality, verify_normality, SystemPair};
use paradecomp::word::GroupWord;

use common::*;

fn letters(max_gen: i32, max_len: usize) -> impl Strategy<Value = Vec<i32>> {
    prop::collection::vec((1..=max_gen, any::<bool>()).prop_map(|(g, neg)| if neg { -g } else { g }), 0..max_len)
}

/// A pair of 0/1 matrices with `rows × cols` entries.
fn pair_strategy(max_rows: usize, max_cols: usize) -> impl Strategy<Value = (Vec<Vec<u8>>, Vec<Vec<u8>>)> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(|(r, c)| {
        let m = prop::collection::vec(prop::collection::vec(0u8..=1, c), r);
        (m.clone(), m)
    })
}

fn order_strategy(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

fn widen(m: &[Vec<u8>]) -> Vec<Vec<i64>> {
    m.iter().map(|r| r.iter().map(|&v| v as i64).collect()).collect()
}

fn to_i64(m: &IntMatrix) -> Vec<Vec<i64>> {
    m.iter_rows()
        .map(|r| r.iter().map(|v| i64::try_from(v).unwrap()).collect())
        .collect()
}

proptest! {
    #[test]
    fn reduction_is_a_fixpoint(w in letters(3, 24)) {
        let r = GroupWord::from_letters(w).reduce();
        prop_assert!(r.is_reduced());
        prop_assert_eq!(r.reduce(), r.clone());
        prop_assert!(r.letters().windows(2).all(|p| p[0] != -p[1]));
    }

    #[test]
    fn word_times_inverse_is_identity(w in letters(3, 24)) {
        let g = GroupWord::from_letters(w);
        prop_assert!(g.concat(&g.inverse()).reduce().is_identity());
        prop_assert_eq!(g.inverse().inverse(), g);
    }

    #[test]
    fn alphabetic_form_round_trips(w in letters(2, 16)) {
        let g = GroupWord::from_letters(w).reduce();
        prop_assert_eq!(GroupWord::parse_alphabetic(&g.to_alphabetic()), Some(g));
    }

    #[test]
    fn permutation_images_round_trip(images in (1usize..9).prop_flat_map(|n| Just((1..=n).collect::<Vec<_>>()).prop_shuffle())) {
        let p = Permutation::from_images(&images).unwrap();
        prop_assert_eq!(p.images(), images.clone());
        let inv = p.inverse();
        for i in 1..=images.len() {
            prop_assert_eq!(inv.image(p.image(i)), i);
        }
    }

    #[test]
    fn certificate_matches_direct_evaluation(
        (a, b, order) in pair_strategy(6, 4).prop_flat_map(|(a, b)| {
            let n = a.len();
            (Just(a), Just(b), order_strategy(n))
        })
    ) {
        let pair = SystemPair::from_rows(&a, &b).unwrap();
        let pi = Permutation::from_images(&order.iter().map(|i| i + 1).collect::<Vec<_>>()).unwrap();
        let direct = certificate_rows(&widen(&a), &widen(&b), &order);
        prop_assert_eq!(to_i64(&certificate_matrix(&pair, &pi).unwrap()), direct.clone());
        let positive_sums = pair.row_sum_diff().strictly_positive;
        let bounded = direct.iter().flatten().all(|&v| v >= -1);
        prop_assert_eq!(verify_normality(&pair, &pi), positive_sums && bounded);
    }

    #[test]
    fn search_agrees_with_exhaustive_orders((a, b) in pair_strategy(5, 3)) {
        let pair = SystemPair::from_rows(&a, &b).unwrap();
        let found = search_normality(&pair);
        prop_assert_eq!(found.is_some(), brute_force_normal(&widen(&a), &widen(&b)));
        if let Some(c) = found {
            prop_assert!(verify_normality(&pair, &c.pi));
            prop_assert_eq!(certificate_matrix(&pair, &c.pi).unwrap(), c.matrix);
        }
    }

    #[test]
    fn row_sum_difference_is_column_sum((a, b) in pair_strategy(6, 4)) {
        let pair = SystemPair::from_rows(&a, &b).unwrap();
        let cols = a[0].len();
        let expected: Vec<BigInt> = (0..cols)
            .map(|c| a.iter().zip(&b).map(|(x, y)| y[c] as i64 - x[c] as i64).sum::<i64>().into())
            .collect();
        prop_assert_eq!(pair.row_sum_diff().vector, expected);
    }

    #[test]
    fn gordan_outcome_always_verifies(
        m in (1usize..=4, 1usize..=4).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-2i64..=2, c), r))
    ) {
        let matrix = IntMatrix::from_rows(&m).unwrap();
        prop_assert!(gordan_alternative(&matrix).verify(&matrix));
    }

    #[test]
    fn matrix_text_round_trips(
        m in (1usize..=5, 1usize..=5).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-50i64..=50, c), r))
    ) {
        let matrix = IntMatrix::from_rows(&m).unwrap();
        prop_assert_eq!(parse_matrix(&matrix.to_string(), Path::new("m.txt")).unwrap(), matrix);
    }

    #[test]
    fn sigma_sets_partition_the_slots(m in 1usize..=10) {
        let mut total = 0usize;
        for k in 1..=m {
            let sets = o_sets(k, m).unwrap();
            for s in &sets {
                prop_assert_eq!(s.bits().len(), m - k + 1);
                prop_assert!(s.bits()[0] && s.bits()[m - k]);
                prop_assert_eq!(g_sigma(s).len(), s.ones());
            }
            let mut sorted: Vec<String> = sets.iter().map(ToString::to_string).collect();
            sorted.sort();
            sorted.dedup();
            prop_assert_eq!(sorted.len(), sets.len());
            total += sets.len();
        }
        prop_assert_eq!(BigInt::from(total), BigInt::from(sigma_slots(m)));
    }

    #[test]
    fn free_ball_sizes(rank in 1usize..=3, radius in 0usize..=4) {
        let g = FreeGroupOracle::first_letter(rank).unwrap();
        let expected = if rank == 1 {
            2 * radius + 1
        } else {
            let q = 2 * rank - 1;
            1 + 2 * rank * (q.pow(radius as u32) - 1) / (q - 1)
        };
        prop_assert_eq!(g.ball(radius).unwrap().len(), expected);
    }

    #[test]
    fn alpha_matches_pair_column_sums(mults in prop::collection::vec(1usize..=3, 3)) {
        let cs = five_configs();
        let eqs = generate_equations(&cs);
        let sels: Vec<Selection> = [(1, 0, 1), (2, 0, 2), (3, 1, 3)]
            .iter()
            .zip(&mults)
            .map(|(&(block, j, k), &multiplicity)| Selection {
                equation: EquationId { block, j, k },
                orientation: Orientation::AsIs,
                multiplicity,
            })
            .collect();
        let sub = Subsystem::new(&eqs, sels.clone()).unwrap();
        prop_assert_eq!(sub.len(), mults.iter().sum::<usize>());
        prop_assert_eq!(alpha_vector(&sub), sub.pair().row_sum_diff().vector);
        let text = format_selections(&sels);
        prop_assert_eq!(parse_selections(&text, Path::new("s.sub")).unwrap(), sels);
    }

    #[test]
    fn equation_entries_are_block_indicators(seed in prop::collection::vec(prop::collection::vec(1usize..=2, 3), 1..=4)) {
        let mut tuples = seed;
        tuples.sort();
        tuples.dedup();
        let refs: Vec<&[usize]> = tuples.iter().map(Vec::as_slice).collect();
        let cs = ConfigurationSet::from_tuples(2, 2, &refs).unwrap();
        let eqs = generate_equations(&cs);
        prop_assert_eq!(eqs.len(), 2 * 3);
        for e in eqs.equations() {
            let id = e.id;
            let expected: Vec<i64> = tuples
                .iter()
                .map(|t| (t[id.j] == id.block) as i64 - (t[id.k] == id.block) as i64)
                .collect();
            prop_assert_eq!(e.difference(), expected);
        }
    }
}
