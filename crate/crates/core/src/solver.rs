//! Exact solvability search.
//!
//! A search state is the vector of pebble counts (plus, for tree-solvable
//! search, the set of edges already traversed). States that cannot reach the
//! goal are remembered per root, so repeated queries against one root share
//! work. Every step removes at least one pebble in total, so the state graph is
//! acyclic and plain depth-first search terminates.

use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::BigInt;
use num_rational::BigRational;
use rustc_hash::FxHashSet;

use crate::distribution::{Costs, Move, MoveSequence, PebbleDistribution, SolveMode};
use crate::error::{invalid, Error, Result};
use crate::graph::Graph;

/// Parameters shared by solvability queries and pebbling-number computations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Options {
    /// Number of pebbles that must reach the root.
    pub k: u32,
    pub costs: Costs,
    pub mode: SolveMode,
    /// Cap on search-node expansions; `None` for unlimited.
    pub max_expansions: Option<u64>,
    /// Only examine one root per automorphism orbit when computing f(G).
    pub symmetry: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options { k: 1, costs: Costs::default(), mode: SolveMode::Unrestricted, max_expansions: None, symmetry: false }
    }
}

impl Options {
    pub fn with_k(mut self, k: u32) -> Self {
        self.k = k;
        self
    }

    pub fn with_p(mut self, p: u32) -> Self {
        self.costs = Costs::Uniform(p);
        self
    }

    pub fn with_costs(mut self, costs: Costs) -> Self {
        self.costs = costs;
        self
    }

    pub fn with_mode(mut self, mode: SolveMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_budget(mut self, max_expansions: u64) -> Self {
        self.max_expansions = Some(max_expansions);
        self
    }

    pub fn with_symmetry(mut self, on: bool) -> Self {
        self.symmetry = on;
        self
    }

    pub fn validate(&self, g: &Graph) -> Result<()> {
        if self.k == 0 {
            return invalid("k must be at least 1");
        }
        self.costs.validate(g)?;
        if self.mode == SolveMode::TreeSolvable && g.edge_count() > 64 {
            return invalid("tree-solvable search supports at most 64 edges");
        }
        Ok(())
    }

    /// Ordinary one-pebble unrestricted pebbling, the setting of f(G).
    pub fn is_plain(&self) -> bool {
        self.k == 1 && self.costs.is_ordinary() && self.mode == SolveMode::Unrestricted
    }
}

/// Which roots a solvability query is about.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Target {
    Root(usize),
    AllRoots,
}

/// Result of [`solvable`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solvability {
    pub solvable: bool,
    /// One replayable witness per solved root.
    pub witnesses: Vec<(usize, MoveSequence)>,
    /// First root that could not be reached, if any.
    pub failed_root: Option<usize>,
}

/// Node-expansion budget, shareable across threads.
#[derive(Debug, Default)]
pub struct Budget {
    limit: Option<u64>,
    used: AtomicU64,
}

impl Budget {
    pub fn new(limit: Option<u64>) -> Self {
        Budget { limit, used: AtomicU64::new(0) }
    }

    pub fn used(&self) -> u64 {
        self.used.load(Ordering::Relaxed)
    }

    fn charge(&self, n: u64) -> std::result::Result<(), Exhausted> {
        let total = self.used.fetch_add(n, Ordering::Relaxed) + n;
        match self.limit {
            Some(limit) if total > limit => Err(Exhausted),
            _ => Ok(()),
        }
    }
}

/// The search ran out of budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Exhausted;

#[derive(Hash, PartialEq, Eq)]
enum Key {
    Packed(u128, u64),
    Wide(Box<[u32]>, u64),
}

const CACHE_CAP: usize = 4_000_000;
const CHARGE_BATCH: u64 = 256;

/// Solvability search toward one fixed root, with memo tables that persist
/// across queries.
pub struct RootSearch<'a> {
    root: usize,
    k: u32,
    mode: SolveMode,
    /// Outgoing steps per vertex: (target, edge id, cost), nearest targets first.
    moves: Vec<Vec<(usize, usize, u32)>>,
    min_cost: Vec<u32>,
    /// Non-root vertices by distance to the root, then the root itself.
    order: Vec<usize>,
    /// `lcm / potential(v)` per vertex, when the weight bound is usable.
    scale: Option<Vec<u128>>,
    target: u128,
    bits: u32,
    edge_ends: Vec<(usize, usize)>,
    failed: FxHashSet<Key>,
    solved: FxHashSet<Key>,
    budget: &'a Budget,
    pending: u64,
}

impl<'a> RootSearch<'a> {
    pub fn new(g: &Graph, opts: &Options, root: usize, budget: &'a Budget) -> Result<Self> {
        opts.validate(g)?;
        if root >= g.n() {
            return invalid(format!("root {root} out of range"));
        }
        let n = g.n();
        let dist = g.distances_from(root);
        let mut moves: Vec<Vec<(usize, usize, u32)>> = (0..n)
            .map(|u| {
                g.incident(u)
                    .iter()
                    .filter(|&&(v, _)| opts.mode.allows(dist[u], dist[v]))
                    .map(|&(v, e)| (v, e, opts.costs.edge_cost(e)))
                    .collect()
            })
            .collect();
        for list in &mut moves {
            list.sort_by_key(|&(v, _, c)| (dist[v], c, v));
        }
        let min_cost = moves
            .iter()
            .map(|l| l.iter().map(|&(_, _, c)| c).min().unwrap_or(u32::MAX))
            .collect();
        let mut order: Vec<usize> = (0..n).filter(|&v| v != root).collect();
        order.sort_by_key(|&v| (dist[v], v));
        order.push(root);

        let (scale, target) = match potential_scale(g, &opts.costs, root) {
            Some((scale, lcm)) => match lcm.checked_mul(opts.k as u128) {
                Some(t) => (Some(scale), t),
                None => (None, 0),
            },
            None => (None, 0),
        };
        let bits = if n == 0 { 8 } else { (128 / n as u32).min(16) };
        Ok(RootSearch {
            root,
            k: opts.k,
            mode: opts.mode,
            moves,
            min_cost,
            order,
            scale,
            target,
            bits,
            edge_ends: g.edges().to_vec(),
            failed: FxHashSet::default(),
            solved: FxHashSet::default(),
            budget,
            pending: 0,
        })
    }

    pub fn root(&self) -> usize {
        self.root
    }

    /// Whether `counts` can put `k` pebbles on the root.
    pub fn is_solvable(&mut self, counts: &[u32]) -> std::result::Result<bool, Exhausted> {
        let mut state = counts.to_vec();
        let r = self.dfs(&mut state, 0, None);
        self.flush()?;
        r
    }

    /// A solving move sequence for `counts`, or `None` if unsolvable.
    pub fn witness(&mut self, counts: &[u32]) -> std::result::Result<Option<Vec<Move>>, Exhausted> {
        let mut state = counts.to_vec();
        let mut path = Vec::new();
        let r = self.dfs(&mut state, 0, Some(&mut path));
        self.flush()?;
        Ok(if r? { Some(path) } else { None })
    }

    fn flush(&mut self) -> std::result::Result<(), Exhausted> {
        let n = std::mem::take(&mut self.pending);
        if n > 0 {
            self.budget.charge(n)?;
        }
        Ok(())
    }

    fn key(&self, state: &[u32], mask: u64) -> Key {
        let bits = self.bits;
        let limit = if bits >= 32 { u32::MAX } else { (1u32 << bits) - 1 };
        if state.len() as u32 * bits <= 128 && state.iter().all(|&c| c <= limit) {
            let packed = state
                .iter()
                .fold(0u128, |acc, &c| (acc << bits) | c as u128);
            Key::Packed(packed, mask)
        } else {
            Key::Wide(state.into(), mask)
        }
    }

    fn connected_in(&self, mask: u64, a: usize, b: usize) -> bool {
        // tiny union-find over the traversed edges
        let n = self.moves.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut m = mask;
        while m != 0 {
            let e = m.trailing_zeros() as usize;
            m &= m - 1;
            let (u, v) = self.edge_ends[e];
            let (x, y) = (find(&mut parent, u), find(&mut parent, v));
            parent[x] = y;
        }
        find(&mut parent, a) == find(&mut parent, b)
    }

    fn dfs(
        &mut self,
        state: &mut [u32],
        mask: u64,
        mut path: Option<&mut Vec<Move>>,
    ) -> std::result::Result<bool, Exhausted> {
        if state[self.root] >= self.k {
            return Ok(true);
        }
        if let Some(scale) = &self.scale {
            let w = state
                .iter()
                .zip(scale)
                .fold(0u128, |acc, (&c, &s)| acc.saturating_add(c as u128 * s));
            if w < self.target {
                return Ok(false);
            }
        }
        let key = self.key(state, mask);
        if self.failed.contains(&key) {
            return Ok(false);
        }
        if path.is_none() && self.solved.contains(&key) {
            return Ok(true);
        }
        self.pending += 1;
        if self.pending >= CHARGE_BATCH {
            self.flush()?;
        }
        for i in 0..self.order.len() {
            let u = self.order[i];
            if state[u] < self.min_cost[u] {
                continue;
            }
            for j in 0..self.moves[u].len() {
                let (v, e, c) = self.moves[u][j];
                if state[u] < c {
                    continue;
                }
                let mut next_mask = mask;
                if self.mode == SolveMode::TreeSolvable && mask >> e & 1 == 0 {
                    if self.connected_in(mask, u, v) {
                        continue;
                    }
                    next_mask |= 1 << e;
                }
                state[u] -= c;
                state[v] += 1;
                if let Some(p) = path.as_deref_mut() {
                    p.push(Move { from: u, to: v, cost: c });
                }
                let r = self.dfs(state, next_mask, path.as_deref_mut());
                state[u] += c;
                state[v] -= 1;
                match r {
                    Ok(true) => {
                        if path.is_none() {
                            if self.solved.len() >= CACHE_CAP {
                                self.solved.clear();
                            }
                            self.solved.insert(key);
                        }
                        return Ok(true);
                    }
                    Ok(false) => {
                        if let Some(p) = path.as_deref_mut() {
                            p.pop();
                        }
                    }
                    Err(x) => return Err(x),
                }
            }
        }
        if self.failed.len() >= CACHE_CAP {
            self.failed.clear();
        }
        self.failed.insert(key);
        Ok(false)
    }
}

/// Per-vertex multipliers `lcm / potential(v)` and the lcm, where the
/// potential of `v` is the least product of step costs along a path to the
/// root. No step can increase `Σ D(v) / potential(v)`, so a distribution whose
/// weighted sum is below `k` cannot be k-fold solved. `None` on overflow.
fn potential_scale(g: &Graph, costs: &Costs, root: usize) -> Option<(Vec<u128>, u128)> {
    let n = g.n();
    let mut pot: Vec<Option<u128>> = vec![None; n];
    let mut done = vec![false; n];
    pot[root] = Some(1);
    for _ in 0..n {
        let u = (0..n)
            .filter(|&v| !done[v] && pot[v].is_some())
            .min_by_key(|&v| pot[v].unwrap())?;
        done[u] = true;
        let pu = pot[u].unwrap();
        for &(v, e) in g.incident(u) {
            let cand = pu.checked_mul(costs.edge_cost(e) as u128)?;
            if pot[v].is_none_or(|p| cand < p) {
                pot[v] = Some(cand);
            }
        }
    }
    let pot: Vec<u128> = pot.into_iter().collect::<Option<Vec<_>>>()?;
    let mut lcm = 1u128;
    for &p in &pot {
        let g = num_integer::gcd(lcm, p);
        lcm = (lcm / g).checked_mul(p)?;
    }
    Some((pot.iter().map(|&p| lcm / p).collect(), lcm))
}

/// Σ_v D(v) / 2^dist(v, r) as an exact rational.
pub fn weight(g: &Graph, d: &PebbleDistribution, root: usize) -> Result<BigRational> {
    d.check_for(g)?;
    if root >= g.n() {
        return invalid(format!("root {root} out of range"));
    }
    let dist = g.distances_from(root);
    let mut total = BigRational::from_integer(BigInt::from(0));
    for (v, &c) in d.counts().iter().enumerate() {
        let denom = BigInt::from(1) << dist[v] as usize;
        total += BigRational::new(BigInt::from(c), denom);
    }
    Ok(total)
}

/// Decides (k-fold, p-pebbling, mode-restricted) solvability and returns a
/// replayable witness for every solved root.
pub fn solvable(g: &Graph, d: &PebbleDistribution, target: Target, opts: &Options) -> Result<Solvability> {
    opts.validate(g)?;
    d.check_for(g)?;
    let roots: Vec<usize> = match target {
        Target::Root(r) => {
            if r >= g.n() {
                return invalid(format!("root {r} out of range"));
            }
            vec![r]
        }
        Target::AllRoots => (0..g.n()).collect(),
    };
    let budget = Budget::new(opts.max_expansions);
    let mut witnesses = Vec::new();
    for r in roots {
        let mut search = RootSearch::new(g, opts, r, &budget)?;
        match search.witness(d.counts()) {
            Ok(Some(path)) => witnesses.push((r, MoveSequence(path))),
            Ok(None) => return Ok(Solvability { solvable: false, witnesses, failed_root: Some(r) }),
            Err(Exhausted) => return Err(Error::ResourceLimit { lo: 0, hi: None }),
        }
    }
    Ok(Solvability { solvable: true, witnesses, failed_root: None })
}

/// Convenience wrapper: is `d` k-fold `root`-solvable under `opts`?
pub fn is_solvable(g: &Graph, d: &PebbleDistribution, root: usize, opts: &Options) -> Result<bool> {
    Ok(solvable(g, d, Target::Root(root), opts)?.solvable)
}
