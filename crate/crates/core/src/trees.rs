//! Path partitions of trees and the tree pebbling formulas.

use std::cmp::Reverse;

use crate::error::{invalid, Error, Result};
use crate::graph::Graph;

/// Edge partition of a tree into paths, longest first. Each path is a vertex
/// sequence starting at the end nearest the root it was built for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathPartition {
    pub paths: Vec<Vec<usize>>,
}

impl PathPartition {
    /// Path lengths in edges, nonincreasing.
    pub fn lengths(&self) -> Vec<u32> {
        self.paths.iter().map(|p| p.len() as u32 - 1).collect()
    }

    /// Whether the paths are simple, edge-disjoint, cover every edge of `t`,
    /// and are sorted by nonincreasing length.
    pub fn is_partition_of(&self, t: &Graph) -> bool {
        let mut seen = vec![false; t.edge_count()];
        for p in &self.paths {
            if p.len() < 2 {
                return false;
            }
            let mut verts = p.clone();
            verts.sort_unstable();
            if verts.windows(2).any(|w| w[0] == w[1]) {
                return false;
            }
            for w in p.windows(2) {
                match t.edge_id(w[0], w[1]) {
                    Some(e) if !seen[e] => seen[e] = true,
                    _ => return false,
                }
            }
        }
        let lengths = self.lengths();
        seen.iter().all(|&s| s) && lengths.windows(2).all(|w| w[0] >= w[1])
    }
}

fn require_tree(t: &Graph) -> Result<()> {
    if t.is_tree() {
        Ok(())
    } else {
        Err(Error::NotATree)
    }
}

/// Maximum r-path partition when `root` is given, maximum path partition
/// otherwise (the best r-maximum partition over all roots, earliest root on
/// ties).
pub fn max_path_partition(t: &Graph, root: Option<usize>) -> Result<PathPartition> {
    require_tree(t)?;
    match root {
        Some(r) if r >= t.n() => invalid(format!("root {r} out of range")),
        Some(r) => Ok(rooted_partition(t, r)),
        None => Ok((0..t.n())
            .map(|r| rooted_partition(t, r))
            .fold(None::<PathPartition>, |best, p| match best {
                Some(b) if b.lengths() >= p.lengths() => Some(b),
                _ => Some(p),
            })
            .expect("trees have a vertex")),
    }
}

/// Every child of the root starts its own path; elsewhere the incoming path
/// continues into the tallest child and every other child starts a new path.
fn rooted_partition(t: &Graph, r: usize) -> PathPartition {
    let n = t.n();
    let mut parent = vec![usize::MAX; n];
    let mut order = vec![r];
    let mut i = 0;
    while i < order.len() {
        let v = order[i];
        for w in t.neighbors(v) {
            if w != r && parent[w] == usize::MAX {
                parent[w] = v;
                order.push(w);
            }
        }
        i += 1;
    }
    let mut height = vec![0u32; n];
    for &v in order.iter().rev() {
        if v != r {
            let p = parent[v];
            height[p] = height[p].max(height[v] + 1);
        }
    }
    let children = |v: usize| -> Vec<usize> {
        let mut c: Vec<usize> = t.neighbors(v).filter(|&w| w != r && parent[w] == v).collect();
        c.sort_by_key(|&w| (Reverse(height[w]), w));
        c
    };
    let mut paths = Vec::new();
    let mut starts: Vec<(usize, usize)> = children(r).into_iter().map(|c| (r, c)).collect();
    while let Some((from, first)) = starts.pop() {
        let mut p = vec![from, first];
        let mut v = first;
        loop {
            let kids = children(v);
            let Some((&next, rest)) = kids.split_first() else { break };
            starts.extend(rest.iter().map(|&c| (v, c)));
            p.push(next);
            v = next;
        }
        paths.push(p);
    }
    paths.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    PathPartition { paths }
}

fn formula_value(lengths: &[u32], k: u32) -> Result<u64> {
    let Some((&q1, rest)) = lengths.split_first() else {
        return Ok(k as u64);
    };
    let pow = |q: u32| 1u64.checked_shl(q).filter(|_| q < 63).ok_or(());
    let overflow = || Error::InvalidParameter("tree formula value overflows".into());
    let mut total = pow(q1).ok().and_then(|x| x.checked_mul(k as u64)).ok_or_else(overflow)?;
    for &q in rest {
        total = pow(q).ok().and_then(|x| total.checked_add(x)).ok_or_else(overflow)?;
    }
    Ok(total - lengths.len() as u64 + 1)
}

/// f(T) (root `None`, taken as the maximum over roots) or f(T, r; k), from a
/// maximum path partition.
pub fn tree_formula(t: &Graph, root: Option<usize>, k: u32) -> Result<u64> {
    require_tree(t)?;
    if k == 0 {
        return invalid("k must be at least 1");
    }
    match root {
        Some(r) => formula_value(&max_path_partition(t, Some(r))?.lengths(), k),
        None => (0..t.n())
            .map(|r| formula_value(&rooted_partition(t, r).lengths(), k))
            .try_fold(0, |m, f| f.map(|f| m.max(f))),
    }
}

/// Components of T − r, each relabeled to `0..` with the neighbor of `r` it
/// contains given as its root.
pub fn branches(t: &Graph, r: usize) -> Result<Vec<(Graph, usize)>> {
    require_tree(t)?;
    let mut out = Vec::new();
    for start in t.neighbors(r) {
        let mut verts = vec![start];
        let mut i = 0;
        while i < verts.len() {
            let v = verts[i];
            for w in t.neighbors(v) {
                if w != r && !verts.contains(&w) {
                    verts.push(w);
                }
            }
            i += 1;
        }
        let index = |v: usize| verts.iter().position(|&x| x == v);
        let edges: Vec<(usize, usize)> = t
            .edges()
            .iter()
            .filter_map(|&(u, v)| Some((index(u)?, index(v)?)))
            .collect();
        out.push((Graph::new(verts.len(), edges)?, 0));
    }
    Ok(out)
}

/// Evaluates the branch recursion for f(T, r; k): one plus the maximum of
/// Σ (f(T_i, r_i; k_i + 1) − 1) over k_1..k_s with Σ ⌊k_i/2⌋ < k, where
/// `sub(T_i, r_i, j)` supplies f(T_i, r_i; j).
pub fn branch_recursion<F>(t: &Graph, r: usize, k: u32, mut sub: F) -> Result<u64>
where
    F: FnMut(&Graph, usize, u32) -> Result<u64>,
{
    if k == 0 {
        return invalid("k must be at least 1");
    }
    let parts = branches(t, r)?;
    let k = k as usize;
    // exact[u]: largest Σ (f(T_i, r_i; k_i + 1) − 1) over the branches so far
    // with Σ ⌊k_i/2⌋ = u. Odd k_i dominate even ones.
    let mut exact: Vec<Option<u64>> = vec![None; k];
    exact[0] = Some(0);
    for (g, gr) in &parts {
        let vals: Vec<u64> = (0..k as u32)
            .map(|a| sub(g, *gr, 2 * a + 2).map(|f| f - 1))
            .collect::<Result<_>>()?;
        let mut next = vec![None; k];
        for (u, slot) in next.iter_mut().enumerate() {
            *slot = (0..=u)
                .filter_map(|a| exact[u - a].map(|b| b + vals[a]))
                .max();
        }
        exact = next;
    }
    // pebbles left on r itself: k − 1 − u
    let best = exact
        .iter()
        .enumerate()
        .filter_map(|(u, b)| b.map(|b| b + (k - 1 - u) as u64))
        .max()
        .expect("u = 0 is always reachable");
    Ok(best + 1)
}
