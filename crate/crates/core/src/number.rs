//! Exact pebbling numbers.
//!
//! The r-unsolvable distributions form a down-closed set: removing pebbles
//! never makes a distribution solvable. We walk that set depth first, fixing
//! vertex counts one vertex at a time and raising each count until the
//! distribution becomes solvable, so every unsolvable distribution is visited
//! exactly once and no solvable one is extended. f(G, r; k) is one more than
//! the largest size seen.

use crate::distribution::PebbleDistribution;
use crate::error::{Error, Result};
use crate::graph::{iso, Graph};
use crate::par;
use crate::solver::{Budget, Exhausted, Options, RootSearch};

/// A largest unsolvable distribution and the root it fails for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Unsolvable {
    pub size: u64,
    pub dist: PebbleDistribution,
    pub root: usize,
}

/// max{n, 2^diam}, a lower bound on f(G).
pub fn lower_bound(g: &Graph) -> u64 {
    (g.n() as u64).max(1u64 << g.diameter().min(63))
}

/// (2^diam − 1)(n − 1) + 1, an upper bound on f(G).
pub fn upper_bound(g: &Graph) -> u64 {
    let d = g.diameter().min(62);
    ((1u64 << d) - 1) * (g.n() as u64 - 1) + 1
}

/// Largest distribution that is not k-fold solvable for `root`, or for some
/// root when `root` is `None`.
pub fn max_unsolvable(g: &Graph, root: Option<usize>, opts: &Options) -> Result<Unsolvable> {
    opts.validate(g)?;
    let roots: Vec<usize> = match root {
        Some(r) => {
            if r >= g.n() {
                return crate::error::invalid(format!("root {r} out of range"));
            }
            vec![r]
        }
        None if opts.symmetry => iso::vertex_orbits(g).into_iter().map(|o| o[0]).collect(),
        None => (0..g.n()).collect(),
    };
    let budget = Budget::new(opts.max_expansions);
    let items: Vec<(usize, usize)> = roots
        .iter()
        .flat_map(|&r| (0..g.n()).map(move |j| (r, j)))
        .collect();
    let results = par::map(items, |(r, j)| branch(g, opts, r, j, &budget));

    let mut best: Option<Unsolvable> = None;
    let mut exhausted = false;
    for (found, ok) in results {
        exhausted |= !ok;
        if let Some(u) = found {
            if best.as_ref().is_none_or(|b| u.size > b.size) {
                best = Some(u);
            }
        }
    }
    let best = best.unwrap_or(Unsolvable { size: 0, dist: PebbleDistribution::zeros(g.n()), root: roots[0] });
    if exhausted {
        let hi = match root {
            None if opts.is_plain() => Some(upper_bound(g)),
            Some(r) if opts.is_plain() => {
                let e = g.eccentricity(r).min(62);
                Some(((1u64 << e) - 1) * (g.n() as u64 - 1) + 1)
            }
            _ => None,
        };
        return Err(Error::ResourceLimit { lo: best.size + 1, hi });
    }
    Ok(best)
}

/// f(G) (when `root` is `None`) or f(G, r; k), under the costs and mode of
/// `opts`.
pub fn pebbling_number(g: &Graph, root: Option<usize>, opts: &Options) -> Result<u64> {
    Ok(max_unsolvable(g, root, opts)?.size + 1)
}

/// Enumerates the unsolvable distributions whose first nonzero vertex (in the
/// search order for root `r`) is the `j`-th one. Returns the largest found
/// and whether the enumeration completed.
fn branch(g: &Graph, opts: &Options, r: usize, j: usize, budget: &Budget) -> (Option<Unsolvable>, bool) {
    let Ok(search) = RootSearch::new(g, opts, r, budget) else {
        return (None, false);
    };
    let dist = g.distances_from(r);
    let mut order: Vec<usize> = (0..g.n()).filter(|&v| v != r).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(dist[v]), v));
    order.push(r);
    let mut e = Enumerator { search, order, counts: vec![0; g.n()], best_size: 0, best: None };
    let ok = e.first(j).is_ok();
    let found = e.best.map(|counts| Unsolvable { size: e.best_size, dist: PebbleDistribution(counts), root: r });
    (found, ok)
}

struct Enumerator<'b> {
    search: RootSearch<'b>,
    order: Vec<usize>,
    counts: Vec<u32>,
    best_size: u64,
    best: Option<Vec<u32>>,
}

impl Enumerator<'_> {
    fn first(&mut self, j: usize) -> std::result::Result<(), Exhausted> {
        if j == 0 {
            // the empty distribution belongs to exactly one branch
            self.record(0);
        }
        self.raise(j, 0)
    }

    fn record(&mut self, size: u64) {
        if self.best.is_none() || size > self.best_size {
            self.best_size = size;
            self.best = Some(self.counts.clone());
        }
    }

    /// Visits every unsolvable extension of the current counts that is
    /// nonzero at `order[j]` and zero beyond what `rec` adds after it.
    fn raise(&mut self, j: usize, size: u64) -> std::result::Result<(), Exhausted> {
        let v = self.order[j];
        let mut c = 1;
        loop {
            self.counts[v] = c;
            if self.search.is_solvable(&self.counts)? {
                break;
            }
            let s = size + c as u64;
            self.record(s);
            self.rec(j + 1, s)?;
            c += 1;
        }
        self.counts[v] = 0;
        Ok(())
    }

    fn rec(&mut self, start: usize, size: u64) -> std::result::Result<(), Exhausted> {
        for j in start..self.order.len() {
            if let Err(e) = self.raise(j, size) {
                self.counts[self.order[j]] = 0;
                return Err(e);
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distribution::SolveMode;
    use crate::solver::is_solvable;

    fn path(n: usize) -> Graph {
        Graph::new(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    fn cycle(n: usize) -> Graph {
        Graph::new(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    fn complete(n: usize) -> Graph {
        let mut e = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                e.push((i, j));
            }
        }
        Graph::new(n, e).unwrap()
    }

    #[test]
    fn small_known_values() {
        let o = Options::default();
        assert_eq!(pebbling_number(&complete(1), None, &o).unwrap(), 1);
        assert_eq!(pebbling_number(&complete(5), None, &o).unwrap(), 5);
        assert_eq!(pebbling_number(&path(4), None, &o).unwrap(), 8);
        assert_eq!(pebbling_number(&cycle(5), None, &o).unwrap(), 5);
        assert_eq!(pebbling_number(&cycle(6), None, &o).unwrap(), 8);
    }

    #[test]
    fn witness_is_unsolvable() {
        let g = cycle(6);
        let u = max_unsolvable(&g, None, &Options::default()).unwrap();
        assert_eq!(u.size, 7);
        assert_eq!(u.dist.size(), 7);
        assert!(!is_solvable(&g, &u.dist, u.root, &Options::default()).unwrap());
    }

    #[test]
    fn k3_witness_is_one_per_nonroot() {
        let u = max_unsolvable(&complete(3), Some(0), &Options::default()).unwrap();
        assert_eq!(u.dist.0, vec![0, 1, 1]);
    }

    #[test]
    fn rooted_k_fold_on_paths() {
        // pushing k pebbles to the end of a path with e edges takes k * 2^e
        let g = path(4);
        for k in 1..=3 {
            let o = Options::default().with_k(k);
            assert_eq!(pebbling_number(&g, Some(0), &o).unwrap(), k as u64 * 8);
        }
    }

    #[test]
    fn symmetry_does_not_change_answer() {
        let g = cycle(7);
        let plain = pebbling_number(&g, None, &Options::default()).unwrap();
        let sym = pebbling_number(&g, None, &Options::default().with_symmetry(true)).unwrap();
        assert_eq!(plain, 11);
        assert_eq!(sym, 11);
    }

    #[test]
    fn restricted_modes_never_help() {
        let g = cycle(5);
        let base = pebbling_number(&g, Some(0), &Options::default()).unwrap();
        for mode in [SolveMode::SemiGreedy, SolveMode::Greedy, SolveMode::TreeSolvable] {
            let f = pebbling_number(&g, Some(0), &Options::default().with_mode(mode)).unwrap();
            assert!(f >= base, "{mode:?}");
        }
    }

    #[test]
    fn budget_reports_bounds() {
        let g = cycle(8);
        match pebbling_number(&g, None, &Options::default().with_budget(50)) {
            Err(Error::ResourceLimit { lo, hi }) => {
                assert!(lo >= 1);
                assert_eq!(hi, Some(upper_bound(&g)));
                assert!(lo <= 16);
            }
            other => panic!("expected resource limit, got {other:?}"),
        }
    }

    #[test]
    fn bounds_bracket_small_values() {
        for g in [path(5), cycle(6), complete(4)] {
            let f = pebbling_number(&g, None, &Options::default()).unwrap();
            assert!(lower_bound(&g) <= f && f <= upper_bound(&g));
        }
    }
}
