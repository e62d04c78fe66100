//! The memoized solver and the pebbling-number search against a plain
//! reachability search over explicit distributions.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use pebbling::families::{complete, cycle, path};
use pebbling::graph::enumerate::connected_graphs;
use pebbling::solver::is_solvable;
use pebbling::{pebbling_number, solvable, weight, Graph, Options, PebbleDistribution, SolveMode, Target};
use proptest::prelude::*;

fn allowed(mode: SolveMode, from: u32, to: u32) -> bool {
    match mode {
        SolveMode::Greedy => to < from,
        SolveMode::SemiGreedy => to <= from,
        _ => true,
    }
}

/// Whether some sequence of steps allowed by `mode` puts `k` pebbles on
/// `root`, by exhaustive search of the reachable distributions.
fn reachable(g: &Graph, start: &[u32], root: usize, k: u32, mode: SolveMode) -> bool {
    let dist = g.distances_from(root);
    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    let mut stack = vec![start.to_vec()];
    while let Some(d) = stack.pop() {
        if d[root] >= k {
            return true;
        }
        if !seen.insert(d.clone()) {
            continue;
        }
        for &(a, b) in g.edges() {
            for (u, v) in [(a, b), (b, a)] {
                if d[u] >= 2 && allowed(mode, dist[u], dist[v]) {
                    let mut next = d.clone();
                    next[u] -= 2;
                    next[v] += 1;
                    stack.push(next);
                }
            }
        }
    }
    false
}

/// All distributions of exactly `t` pebbles on `n` vertices.
fn compositions(n: usize, t: u32) -> Vec<Vec<u32>> {
    if n == 1 {
        return vec![vec![t]];
    }
    (0..=t)
        .flat_map(|first| {
            compositions(n - 1, t - first).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}

/// Least t such that every size-t distribution reaches every root.
fn oracle_number(g: &Graph, k: u32) -> u64 {
    (1..)
        .find(|&t| {
            compositions(g.n(), t)
                .iter()
                .all(|d| (0..g.n()).all(|r| reachable(g, d, r, k, SolveMode::Unrestricted)))
        })
        .unwrap() as u64
}

#[test]
fn pebbling_numbers_match_the_scan_on_small_graphs() {
    for n in 1..=4 {
        for g in connected_graphs(n) {
            for k in 1..=2 {
                let want = oracle_number(&g, k);
                let got = pebbling_number(&g, None, &Options::default().with_k(k)).unwrap();
                assert_eq!(got, want, "{:?} k={k}", g.edges());
            }
        }
    }
    for g in [path(5), cycle(5), complete(5)] {
        assert_eq!(pebbling_number(&g, None, &Options::default()).unwrap(), oracle_number(&g, 1));
    }
}

#[test]
fn every_small_distribution_agrees_with_reachability() {
    for n in 2..=4 {
        for g in connected_graphs(n) {
            for t in 0..=5 {
                for d in compositions(n, t) {
                    let pd = PebbleDistribution(d.clone());
                    for r in 0..n {
                        for mode in [SolveMode::Unrestricted, SolveMode::Greedy, SolveMode::SemiGreedy] {
                            let opts = Options::default().with_mode(mode);
                            assert_eq!(
                                is_solvable(&g, &pd, r, &opts).unwrap(),
                                reachable(&g, &d, r, 1, mode),
                                "{:?} {d:?} r={r} {mode:?}",
                                g.edges()
                            );
                        }
                    }
                }
            }
        }
    }
}

fn connected_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n)
        .prop_flat_map(|n| {
            let parents: Vec<BoxedStrategy<usize>> = (1..n).map(|v| (0..v).boxed()).collect();
            (Just(n), parents, proptest::collection::vec(any::<bool>(), n * n))
        })
        .prop_map(|(n, parents, extra)| {
            let mut edges: Vec<(usize, usize)> = parents.iter().enumerate().map(|(i, &p)| (p, i + 1)).collect();
            for u in 0..n {
                for v in u + 1..n {
                    if extra[u * n + v] && !edges.contains(&(u, v)) && !edges.contains(&(v, u)) {
                        edges.push((u, v));
                    }
                }
            }
            Graph::new(n, edges).unwrap()
        })
}

fn instance() -> impl Strategy<Value = (Graph, Vec<u32>, usize)> {
    connected_graph(6).prop_flat_map(|g| {
        let n = g.n();
        (Just(g), proptest::collection::vec(0u32..6, n), 0..n)
    })
}

fn mode() -> impl Strategy<Value = SolveMode> {
    prop_oneof![
        Just(SolveMode::Unrestricted),
        Just(SolveMode::Greedy),
        Just(SolveMode::SemiGreedy),
        Just(SolveMode::TreeSolvable),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn witnesses_replay((g, d, r) in instance(), mode in mode(), k in 1u32..=2) {
        let d = PebbleDistribution(d);
        let opts = Options::default().with_mode(mode).with_k(k);
        let s = solvable(&g, &d, Target::Root(r), &opts).unwrap();
        if s.solvable {
            let (root, seq) = &s.witnesses[0];
            prop_assert_eq!(*root, r);
            let end = seq.replay(&g, &opts.costs, &d, r, mode).unwrap();
            prop_assert!(end.counts()[r] >= k);
        }
    }

    #[test]
    fn adding_a_pebble_never_hurts((g, d, r) in instance(), v in 0usize..6, mode in mode()) {
        let opts = Options::default().with_mode(mode);
        let before = is_solvable(&g, &PebbleDistribution(d.clone()), r, &opts).unwrap();
        let mut more = d;
        let v = v % g.n();
        more[v] += 1;
        let after = is_solvable(&g, &PebbleDistribution(more), r, &opts).unwrap();
        prop_assert!(!before || after);
    }

    #[test]
    fn restricted_modes_are_weaker((g, d, r) in instance()) {
        let d = PebbleDistribution(d);
        let s = |m| is_solvable(&g, &d, r, &Options::default().with_mode(m)).unwrap();
        let (free, greedy, semi, tree) =
            (s(SolveMode::Unrestricted), s(SolveMode::Greedy), s(SolveMode::SemiGreedy), s(SolveMode::TreeSolvable));
        prop_assert!(!greedy || semi);
        prop_assert!(!semi || free);
        prop_assert!(!tree || free);
    }

    #[test]
    fn weight_below_one_is_unsolvable((g, d, r) in instance()) {
        let d = PebbleDistribution(d);
        if weight(&g, &d, r).unwrap() < BigRational::from_integer(BigInt::from(1)) {
            prop_assert!(!is_solvable(&g, &d, r, &Options::default()).unwrap());
        }
    }

    #[test]
    fn pebbling_number_respects_the_elementary_bounds(g in connected_graph(5)) {
        let f = pebbling_number(&g, None, &Options::default()).unwrap();
        prop_assert!(pebbling::number::lower_bound(&g) <= f);
        prop_assert!(f <= pebbling::number::upper_bound(&g));
        let sym = pebbling_number(&g, None, &Options::default().with_symmetry(true)).unwrap();
        prop_assert_eq!(sym, f);
    }
}
