use num_integer::Integer;
use pebbling::lemke::{brute_force, erdos_lemke_holds, factorize, pigeonhole_subset, replay, solve, verify};
use proptest::prelude::*;

/// Every nonempty index set meeting both conclusions, by subset enumeration.
fn feasible_sets(xs: &[u64], q: u64) -> Vec<Vec<usize>> {
    (1u32..(1 << xs.len()))
        .map(|mask| (0..xs.len()).filter(|&i| mask >> i & 1 == 1).map(|i| i + 1).collect::<Vec<_>>())
        .filter(|idx| {
            let sum: u64 = idx.iter().map(|&i| xs[i - 1] % q).sum();
            let g: u64 = idx.iter().map(|&i| xs[i - 1].gcd(&q)).sum();
            sum.is_multiple_of(q) && g <= q
        })
        .collect()
}

#[test]
fn small_example() {
    let xs = [3, 5, 7, 9];
    let sol = solve(&xs, 4).unwrap();
    assert!(feasible_sets(&xs, 4).contains(&sol.indices));
    assert!(brute_force(&xs, 4).unwrap().is_some());
}

#[test]
fn equal_values_need_every_index() {
    // only the full set of two 3s works modulo 2
    let sol = solve(&[3, 3], 2).unwrap();
    assert_eq!(sol.indices, vec![1, 2]);
    assert_eq!(feasible_sets(&[3, 3], 2), vec![vec![1, 2]]);
}

#[test]
fn factorizations() {
    assert_eq!(factorize(360), vec![(2, 3), (3, 2), (5, 1)]);
    assert_eq!(factorize(59), vec![(59, 1)]);
}

fn instance(max_q: u64) -> impl Strategy<Value = (Vec<u64>, u64)> {
    (2..=max_q).prop_flat_map(|q| (proptest::collection::vec(1u64..=1_000_000, q as usize), Just(q)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn solutions_are_feasible_and_replay((xs, q) in instance(60)) {
        let sol = solve(&xs, q).unwrap();
        prop_assert!(!sol.indices.is_empty());
        prop_assert!(verify(&xs, q, &sol.indices).is_ok());
        prop_assert!(sol.gcd_sum <= q);
        prop_assert!(erdos_lemke_holds(&xs, q, &sol.indices));
        let end = replay(&xs, q, &sol.certificate).unwrap();
        prop_assert!(end.all_well_placed());
    }

    #[test]
    fn small_moduli_agree_with_enumeration((xs, q) in instance(12)) {
        let sol = solve(&xs, q).unwrap();
        let all = feasible_sets(&xs, q);
        prop_assert!(all.contains(&sol.indices));
        prop_assert_eq!(brute_force(&xs, q).unwrap(), all.into_iter().min());
    }

    #[test]
    fn pigeonhole_gives_a_zero_sum(xs in proptest::collection::vec(1u64..1000, 1..20)) {
        let q = xs.len() as u64;
        let idx = pigeonhole_subset(&xs, q).unwrap();
        prop_assert!(!idx.is_empty());
        let sum: u64 = idx.iter().map(|&i| xs[i - 1]).sum();
        prop_assert_eq!(sum % q, 0);
    }
}
