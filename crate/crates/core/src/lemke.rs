//! Zero-sum subsets through numerical pebbling on a grid.
//!
//! For a modulus q = Π p_i^{d_i}, every input number x_j becomes a pebble on
//! the grid P_d̄ at the coordinates c̄ with q / gcd(x_j, q) = Π p_i^{c_i}. A
//! step along dimension i takes p_i pebbles from one cell, keeps a nonempty
//! subset whose value sum is divisible by one more power of p_i, and moves the
//! merged pebble one cell closer to the origin. A pebble that reaches the
//! origin names a nonempty index set I with q | Σ_{i∈I} x_i and
//! Σ_{i∈I} gcd(q, x_i) ≤ q.
//!
//! Index sets in this module are 1-based.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::distribution::SolveMode;
use crate::error::{invalid, Error, Result};
use crate::families::weighted_grid;
use crate::solver::{Budget, Options, RootSearch};

/// A merged group of input numbers sitting on one grid cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrackedPebble {
    /// Sorted 1-based input positions.
    pub indices: Vec<usize>,
    pub val: BigUint,
    pub gcdsum: u64,
    pub pos: Vec<u32>,
}

/// Pebbles on the grid for modulus q = Π primes[i]^dims[i].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridState {
    pub q: u64,
    pub primes: Vec<u64>,
    pub dims: Vec<u32>,
    pub cells: BTreeMap<Vec<u32>, Vec<TrackedPebble>>,
}

/// One numerical pebbling step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepRecord {
    pub from: Vec<u32>,
    pub dim: usize,
    pub to: Vec<u32>,
    /// Indices of the merged pebble that moved.
    pub merged: Vec<usize>,
    /// Indices of the selected pebbles that were dropped.
    pub discarded: Vec<usize>,
}

impl fmt::Display for StepRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coords = |c: &[u32]| c.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        let merged = self.merged.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        write!(f, "({}) --dim {}--> ({}): merged {{{}}}", coords(&self.from), self.dim + 1, coords(&self.to), merged)
    }
}

/// A zero-sum index set with the steps that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub indices: Vec<usize>,
    pub sum: BigUint,
    pub gcd_sum: u64,
    pub certificate: Vec<StepRecord>,
}

/// Prime factorization by trial division, primes ascending.
pub fn factorize(mut q: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= q {
        let mut e = 0;
        while q.is_multiple_of(p) {
            q /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if q > 1 {
        out.push((q, 1));
    }
    out
}

fn check_input(xs: &[u64], q: u64) -> Result<()> {
    if q == 0 {
        return invalid("modulus must be at least 1");
    }
    if xs.len() as u64 != q {
        return invalid(format!("expected {q} numbers, got {}", xs.len()));
    }
    if xs.contains(&0) {
        return invalid("inputs must be positive");
    }
    Ok(())
}

/// Nonempty run of consecutive positions whose sum is divisible by `q`, from
/// the first repeated prefix sum modulo `q`.
pub fn pigeonhole_subset(xs: &[u64], q: u64) -> Result<Vec<usize>> {
    if q == 0 || xs.len() as u64 != q {
        return invalid("need exactly q numbers and q >= 1");
    }
    let mut seen = vec![usize::MAX; q as usize];
    seen[0] = 0;
    let mut s = 0u64;
    for (j, &x) in xs.iter().enumerate() {
        s = (s + x % q) % q;
        if seen[s as usize] != usize::MAX {
            return Ok((seen[s as usize] + 1..=j + 1).collect());
        }
        seen[s as usize] = j + 1;
    }
    Err(Error::Internal("pigeonhole found no repeated prefix".into()))
}

impl GridState {
    /// p^(d̄ − c̄) for a cell.
    fn slack(&self, pos: &[u32]) -> BigUint {
        let mut m = BigUint::one();
        for ((&p, &d), &c) in self.primes.iter().zip(&self.dims).zip(pos) {
            m *= BigUint::from(p).pow(d - c);
        }
        m
    }

    /// Both well-placedness conditions for a pebble at its recorded cell.
    pub fn well_placed(&self, a: &TrackedPebble) -> bool {
        let s = self.slack(&a.pos);
        (&a.val % &s).is_zero() && BigUint::from(a.gcdsum) <= s
    }

    pub fn all_well_placed(&self) -> bool {
        self.cells.values().flatten().all(|a| self.well_placed(a))
    }

    pub fn pebble_count(&self) -> usize {
        self.cells.values().map(Vec::len).sum()
    }

    /// Mixed-radix index of a cell, first coordinate most significant.
    fn cell_index(&self, pos: &[u32]) -> usize {
        pos.iter().zip(&self.dims).fold(0, |acc, (&c, &d)| acc * (d as usize + 1) + c as usize)
    }

    fn cell_of(&self, mut index: usize) -> Vec<u32> {
        let mut pos = vec![0; self.dims.len()];
        for i in (0..self.dims.len()).rev() {
            let r = self.dims[i] as usize + 1;
            pos[i] = (index % r) as u32;
            index /= r;
        }
        pos
    }
}

/// Places pebble {x_j} at the cell c̄ with q / gcd(x_j, q) = Π p_i^{c_i}.
pub fn initial_placement(xs: &[u64], q: u64) -> Result<GridState> {
    check_input(xs, q)?;
    let factors = factorize(q);
    let primes: Vec<u64> = factors.iter().map(|f| f.0).collect();
    let dims: Vec<u32> = factors.iter().map(|f| f.1).collect();
    let mut cells: BTreeMap<Vec<u32>, Vec<TrackedPebble>> = BTreeMap::new();
    for (j, &x) in xs.iter().enumerate() {
        let g = x.gcd(&q);
        let mut rest = q / g;
        let pos: Vec<u32> = primes
            .iter()
            .map(|&p| {
                let mut c = 0;
                while rest.is_multiple_of(p) {
                    rest /= p;
                    c += 1;
                }
                c
            })
            .collect();
        let pebble = TrackedPebble { indices: vec![j + 1], val: BigUint::from(x), gcdsum: g, pos: pos.clone() };
        cells.entry(pos).or_default().push(pebble);
    }
    Ok(GridState { q, primes, dims, cells })
}

/// Applies one numerical step at cell `u` along dimension `i`: the `p_i`
/// pebbles with smallest gcd sums are selected, a nonempty run of them whose
/// value sum gains a factor p_i is merged and moved to `u − e_i`, and the
/// rest of the selection is dropped.
pub fn select_and_step(state: &mut GridState, u: &[u32], i: usize) -> Result<StepRecord> {
    if i >= state.dims.len() || u.len() != state.dims.len() {
        return invalid("dimension or cell out of range");
    }
    if u[i] == 0 {
        return Err(Error::PreconditionViolated("cell is already at coordinate 0 in this dimension".into()));
    }
    let p = state.primes[i];
    let here = state.cells.get(u).map_or(0, Vec::len);
    if (here as u64) < p {
        return Err(Error::PreconditionViolated(format!("cell holds {here} pebbles, need {p}")));
    }
    let mut pile = state.cells.remove(u).unwrap_or_default();
    pile.sort_by(|a, b| a.gcdsum.cmp(&b.gcdsum).then_with(|| a.indices.cmp(&b.indices)));
    let rest = pile.split_off(p as usize);
    let chosen = pile;
    if !rest.is_empty() {
        state.cells.insert(u.to_vec(), rest);
    }
    // WP1 at u makes every value divisible by p^(b−1), b = d_i − u_i + 1
    let b = state.dims[i] - u[i] + 1;
    let unit = BigUint::from(p).pow(b - 1);
    let pb = BigUint::from(p);
    let mut first_at = vec![usize::MAX; p as usize];
    first_at[0] = 0;
    let mut s = BigUint::zero();
    let mut run = None;
    for (k, a) in chosen.iter().enumerate() {
        if !(&a.val % &unit).is_zero() {
            return Err(Error::Internal("selected pebble is not well placed".into()));
        }
        s = (s + &a.val / &unit) % &pb;
        let key = usize::try_from(&s).expect("residue below p");
        if first_at[key] != usize::MAX {
            run = Some((first_at[key], k + 1));
            break;
        }
        first_at[key] = k + 1;
    }
    let (lo, hi) = run.ok_or_else(|| Error::Internal("no zero-sum run among p pebbles".into()))?;
    let mut to = u.to_vec();
    to[i] -= 1;
    let mut merged = TrackedPebble { indices: Vec::new(), val: BigUint::zero(), gcdsum: 0, pos: to.clone() };
    let mut discarded = Vec::new();
    for (k, a) in chosen.into_iter().enumerate() {
        if (lo..hi).contains(&k) {
            merged.indices.extend(a.indices);
            merged.val += a.val;
            merged.gcdsum += a.gcdsum;
        } else {
            discarded.extend(a.indices);
        }
    }
    merged.indices.sort_unstable();
    discarded.sort_unstable();
    if !state.well_placed(&merged) {
        return Err(Error::Internal("merged pebble is not well placed".into()));
    }
    let record = StepRecord { from: u.to_vec(), dim: i, to: to.clone(), merged: merged.indices.clone(), discarded };
    state.cells.entry(to).or_default().push(merged);
    Ok(record)
}

/// Finds I with q | Σ_{i∈I} x_i and Σ_{i∈I} gcd(q, x_i) ≤ q.
///
/// The step schedule comes from a greedy p̄-pebbling solution of the pebble
/// counts on the grid toward the origin (one exists because there are exactly
/// q pebbles); each grid move is then replayed as a numerical step.
pub fn solve(xs: &[u64], q: u64) -> Result<Solution> {
    check_input(xs, q)?;
    if q > u32::MAX as u64 {
        return invalid("modulus too large");
    }
    let mut state = initial_placement(xs, q)?;
    if !state.all_well_placed() {
        return Err(Error::Internal("initial placement is not well placed".into()));
    }
    let origin = vec![0u32; state.dims.len()];
    let mut certificate = Vec::new();
    if !state.cells.contains_key(&origin) {
        let dims: Vec<usize> = state.dims.iter().map(|&d| d as usize).collect();
        let costs: Vec<u32> = state.primes.iter().map(|&p| p as u32).collect();
        let (g, costs) = weighted_grid(&dims, &costs)?;
        let opts = Options::default().with_costs(costs).with_mode(SolveMode::Greedy);
        let budget = Budget::new(None);
        let mut search = RootSearch::new(&g, &opts, 0, &budget)?;
        let mut counts = vec![0u32; g.n()];
        for (pos, pile) in &state.cells {
            counts[state.cell_index(pos)] = pile.len() as u32;
        }
        let moves = search
            .witness(&counts)
            .map_err(|_| Error::Internal("unbounded search reported exhaustion".into()))?
            .ok_or_else(|| Error::Internal("pebble counts admit no greedy solution".into()))?;
        for mv in moves {
            let from = state.cell_of(mv.from);
            let to = state.cell_of(mv.to);
            let dim = (0..from.len()).find(|&k| from[k] != to[k]).expect("a move changes one coordinate");
            certificate.push(select_and_step(&mut state, &from, dim)?);
        }
    }
    let winner = state
        .cells
        .get(&origin)
        .and_then(|pile| pile.first())
        .ok_or_else(|| Error::Internal("no pebble reached the origin".into()))?;
    let sol = Solution {
        indices: winner.indices.clone(),
        sum: winner.val.clone(),
        gcd_sum: winner.gcdsum,
        certificate,
    };
    verify(xs, q, &sol.indices)?;
    Ok(sol)
}

/// Checks both conclusions for a 1-based index set from scratch.
pub fn verify(xs: &[u64], q: u64, indices: &[usize]) -> Result<()> {
    if indices.is_empty() || indices.iter().any(|&i| i == 0 || i > xs.len()) {
        return Err(Error::Internal("index set is empty or out of range".into()));
    }
    let sum: BigUint = indices.iter().map(|&i| BigUint::from(xs[i - 1])).sum();
    let gsum: u64 = indices.iter().map(|&i| xs[i - 1].gcd(&q)).sum();
    if !(sum % q).is_zero() || gsum > q {
        return Err(Error::Internal("index set fails the zero-sum conclusions".into()));
    }
    Ok(())
}

/// Σ_{i∈I} x_i ≤ lcm(q, x_1, …, x_q).
pub fn erdos_lemke_holds(xs: &[u64], q: u64, indices: &[usize]) -> bool {
    let sum: BigUint = indices.iter().map(|&i| BigUint::from(xs[i - 1])).sum();
    let lcm = xs.iter().fold(BigUint::from(q), |l, &x| l.lcm(&BigUint::from(x)));
    sum <= lcm
}

/// Replays a certificate from the initial placement, checking every step's
/// outcome and well-placedness throughout.
pub fn replay(xs: &[u64], q: u64, certificate: &[StepRecord]) -> Result<GridState> {
    let mut state = initial_placement(xs, q)?;
    if !state.all_well_placed() {
        return Err(Error::Internal("initial placement is not well placed".into()));
    }
    for (k, step) in certificate.iter().enumerate() {
        let got = select_and_step(&mut state, &step.from, step.dim)?;
        if &got != step {
            return Err(Error::Internal(format!("certificate step {k} does not replay")));
        }
        if !state.all_well_placed() {
            return Err(Error::Internal(format!("well-placedness lost after step {k}")));
        }
    }
    Ok(state)
}

/// Lexicographically least nonempty index set satisfying both conclusions,
/// by exhaustive search.
pub fn brute_force(xs: &[u64], q: u64) -> Result<Option<Vec<usize>>> {
    check_input(xs, q)?;
    if q > 20 {
        return Err(Error::ResourceLimit { lo: 0, hi: None });
    }
    let gcds: Vec<u64> = xs.iter().map(|x| x.gcd(&q)).collect();
    let res: Vec<u64> = xs.iter().map(|x| x % q).collect();
    fn dfs(start: usize, sum: u64, gsum: u64, q: u64, res: &[u64], gcds: &[u64], cur: &mut Vec<usize>) -> bool {
        for j in start..res.len() {
            let g = gsum + gcds[j];
            if g > q {
                continue;
            }
            cur.push(j + 1);
            let s = (sum + res[j]) % q;
            if s == 0 || dfs(j + 1, s, g, q, res, gcds, cur) {
                return true;
            }
            cur.pop();
        }
        false
    }
    let mut cur = Vec::new();
    Ok(dfs(0, 0, 0, q, &res, &gcds, &mut cur).then_some(cur))
}
