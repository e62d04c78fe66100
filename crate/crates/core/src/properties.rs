//! Structural pebbling properties: Class 0, the 2-pebbling property, and
//! product-bound checks.

use itertools::Itertools;

use crate::distribution::{weighted_product, Costs, PebbleDistribution};
use crate::error::{invalid, Error, Result};
use crate::graph::Graph;
use crate::number::{max_unsolvable, pebbling_number};
use crate::par;
use crate::solver::{is_solvable, Budget, Exhausted, Options, RootSearch};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Exact,
    SufficientCondition,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::SufficientCondition => "sufficient-condition",
        }
    }
}

/// Outcome of a property test. A failing report carries, when available, a
/// distribution and the root it cannot serve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropertyReport {
    pub holds: bool,
    pub witness: Option<(PebbleDistribution, usize)>,
    pub method: Method,
}

/// Diameter at most 1, or diameter 2 and 3-connected, or connectivity at
/// least 2^(2·diam+3). Each forces f(G) = n(G); `false` decides nothing.
pub fn class0_sufficient(g: &Graph) -> bool {
    let d = g.diameter();
    if d <= 1 {
        return true;
    }
    let kappa = g.vertex_connectivity() as u64;
    (d == 2 && kappa >= 3) || (2 * d + 3 < 64 && kappa >= 1u64 << (2 * d + 3))
}

/// Class 0 test (f(G) = n(G)), using the sufficient conditions and the
/// cut-vertex and large-girth obstructions before falling back to exact search.
pub fn class0(g: &Graph, opts: &Options) -> Result<PropertyReport> {
    if class0_sufficient(g) {
        return Ok(PropertyReport { holds: true, witness: None, method: Method::SufficientCondition });
    }
    let plain = Options { k: 1, costs: Costs::default(), mode: Default::default(), ..opts.clone() };
    if let Some(w) = cut_vertex_witness(g, &plain)? {
        return Ok(PropertyReport { holds: false, witness: Some(w), method: Method::SufficientCondition });
    }
    // a shortest cycle is isometric, so diam ≥ ⌊girth/2⌋ and f ≥ 2^⌊girth/2⌋
    if let Some(girth) = g.girth() {
        if girth / 2 < 63 && 1u64 << (girth / 2) > g.n() as u64 {
            return Ok(PropertyReport { holds: false, witness: None, method: Method::SufficientCondition });
        }
    }
    let u = max_unsolvable(g, None, &plain)?;
    if u.size >= g.n() as u64 {
        Ok(PropertyReport { holds: false, witness: Some((u.dist, u.root)), method: Method::Exact })
    } else {
        Ok(PropertyReport { holds: true, witness: None, method: Method::Exact })
    }
}

/// For a cut vertex x, a root r and a vertex y in different components of
/// G − x: three pebbles on y, none on r or x, one everywhere else. Returns
/// the first such distribution (over the choices of x, r, y) that the solver
/// confirms is r-unsolvable.
fn cut_vertex_witness(g: &Graph, opts: &Options) -> Result<Option<(PebbleDistribution, usize)>> {
    for x in g.cut_vertices() {
        let comp = components_without(g, x);
        for r in 0..g.n() {
            for y in 0..g.n() {
                if r == x || y == x || comp[r] == comp[y] {
                    continue;
                }
                let mut d = vec![1u32; g.n()];
                d[r] = 0;
                d[x] = 0;
                d[y] = 3;
                let d = PebbleDistribution(d);
                if !is_solvable(g, &d, r, opts)? {
                    return Ok(Some((d, r)));
                }
            }
        }
    }
    Ok(None)
}

fn components_without(g: &Graph, x: usize) -> Vec<usize> {
    let mut comp = vec![usize::MAX; g.n()];
    let mut next = 0;
    for s in 0..g.n() {
        if s == x || comp[s] != usize::MAX {
            continue;
        }
        comp[s] = next;
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            for w in g.neighbors(v) {
                if w != x && comp[w] == usize::MAX {
                    comp[w] = next;
                    stack.push(w);
                }
            }
        }
        next += 1;
    }
    comp
}

/// Exact 2-pebbling property test: every distribution D with
/// |D| ≥ 2f(G) − q(D) + 1 is 2-fold solvable for every root.
///
/// For each support set S of size q it suffices to check the distributions
/// supported exactly on S of size max(q, 2f(G) − q + 1): any larger one on S
/// contains one of these, and adding pebbles never hurts. Support sets are
/// visited by decreasing size, then in increasing bitmask order, and the
/// first failure in that order is reported.
pub fn two_pebbling(g: &Graph, opts: &Options) -> Result<PropertyReport> {
    let n = g.n();
    if n > 24 {
        return invalid("two-pebbling check supports at most 24 vertices");
    }
    let plain = Options { k: 1, costs: Costs::default(), mode: Default::default(), ..opts.clone() };
    let f = pebbling_number(g, None, &plain)?;
    let mut supports: Vec<u32> = (1u32..1 << n).collect();
    supports.sort_by_key(|&m| (std::cmp::Reverse(m.count_ones()), m));
    let budget = Budget::new(opts.max_expansions);
    let two = Options { k: 2, ..plain };
    let results = par::map(supports, |mask| check_support(g, &two, f, mask, &budget));
    for r in results {
        match r {
            Ok(None) => {}
            Ok(Some(w)) => return Ok(PropertyReport { holds: false, witness: Some(w), method: Method::Exact }),
            Err(Exhausted) => return Err(Error::ResourceLimit { lo: 0, hi: None }),
        }
    }
    Ok(PropertyReport { holds: true, witness: None, method: Method::Exact })
}

fn check_support(
    g: &Graph,
    two: &Options,
    f: u64,
    mask: u32,
    budget: &Budget,
) -> std::result::Result<Option<(PebbleDistribution, usize)>, Exhausted> {
    let support: Vec<usize> = (0..g.n()).filter(|&v| mask >> v & 1 == 1).collect();
    let q = support.len() as u64;
    let t = q.max((2 * f + 1).saturating_sub(q));
    let extra = (t - q) as usize;
    let mut searches: Vec<RootSearch> = (0..g.n())
        .map(|r| RootSearch::new(g, two, r, budget).expect("options validated"))
        .collect();
    // stars and bars: place q−1 bars among extra + q − 1 slots
    for bars in (0..extra + support.len() - 1).combinations(support.len() - 1) {
        let mut counts = vec![0u32; g.n()];
        let mut prev = 0usize;
        for (i, &v) in support.iter().enumerate() {
            // bar i sits after (bars[i] - i) extra pebbles
            let end = if i < bars.len() { bars[i] - i } else { extra };
            counts[v] = 1 + (end - prev) as u32;
            prev = end;
        }
        for s in searches.iter_mut() {
            if !s.is_solvable(&counts)? {
                return Ok(Some((PebbleDistribution(counts), s.root())));
            }
        }
    }
    Ok(None)
}

/// Both sides of the product bound f(G1 □ G2) ≤ f_p1(G1) · f_p2(G2), where
/// steps along G1 edges cost p1 and along G2 edges cost p2.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProductCheck {
    pub lhs: u64,
    pub rhs: u64,
    pub holds: bool,
}

pub fn graham_check(g1: &Graph, g2: &Graph, p1: u32, p2: u32, opts: &Options) -> Result<ProductCheck> {
    if p1 < 2 || p2 < 2 {
        return invalid("pebbling costs must be at least 2");
    }
    let (h, costs) = weighted_product(g1, g2, p1, p2);
    let base = Options { k: 1, mode: Default::default(), ..opts.clone() };
    let lhs = pebbling_number(&h, None, &base.clone().with_costs(costs))?;
    let f1 = pebbling_number(g1, None, &base.clone().with_p(p1))?;
    let f2 = pebbling_number(g2, None, &base.with_p(p2))?;
    let rhs = f1 * f2;
    Ok(ProductCheck { lhs, rhs, holds: lhs <= rhs })
}

/// Result of checking f(H) ≤ f(G1) + f(G2) for H = (G1 + G2) ∪ F.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenProdCheck {
    pub f_h: u64,
    pub bound: u64,
    pub holds: bool,
    /// 2-pebbling verdict for H, computed only when the bound is tight.
    pub two_pebbling: Option<bool>,
}

/// Joins disjoint copies of `g1` (vertices `0..n1`) and `g2` (vertices
/// `n1..n1+n2`) by the cross edges `f`, given as (vertex of g1, vertex of g2).
pub fn join(g1: &Graph, g2: &Graph, f: &[(usize, usize)]) -> Result<Graph> {
    if f.is_empty() {
        return invalid("the cross edge set must be nonempty");
    }
    let n1 = g1.n();
    if f.iter().any(|&(a, b)| a >= n1 || b >= g2.n()) {
        return invalid("cross edge endpoint out of range");
    }
    let edges = g1
        .edges()
        .iter()
        .copied()
        .chain(g2.edges().iter().map(|&(u, v)| (u + n1, v + n1)))
        .chain(f.iter().map(|&(a, b)| (a, b + n1)));
    Graph::new(n1 + g2.n(), edges)
}

pub fn genprod_check(g1: &Graph, g2: &Graph, f: &[(usize, usize)], opts: &Options) -> Result<GenProdCheck> {
    let h = join(g1, g2, f)?;
    let plain = Options { k: 1, costs: Costs::default(), mode: Default::default(), ..opts.clone() };
    let f_h = pebbling_number(&h, None, &plain)?;
    let bound = pebbling_number(g1, None, &plain)? + pebbling_number(g2, None, &plain)?;
    let two_pebbling = if f_h == bound { Some(two_pebbling(&h, &plain)?.holds) } else { None };
    Ok(GenProdCheck { f_h, bound, holds: f_h <= bound, two_pebbling })
}
