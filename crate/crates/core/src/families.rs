//! Named graph families and their closed-form pebbling numbers.

use std::fmt;
use std::str::FromStr;

use crate::distribution::Costs;
use crate::error::{invalid, Error, Result};
use crate::graph::Graph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    Path,
    Cycle,
    Complete,
    Star,
    Wheel,
    Hypercube,
    Grid,
    Kneser,
    Petersen,
    Lemke,
    FosterSnevily,
    Wang,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Path => "path",
            Family::Cycle => "cycle",
            Family::Complete => "complete",
            Family::Star => "star",
            Family::Wheel => "wheel",
            Family::Hypercube => "hypercube",
            Family::Grid => "grid",
            Family::Kneser => "kneser",
            Family::Petersen => "petersen",
            Family::Lemke => "lemke",
            Family::FosterSnevily => "foster_snevily",
            Family::Wang => "wang",
        }
    }

    const ALL: [Family; 12] = [
        Family::Path,
        Family::Cycle,
        Family::Complete,
        Family::Star,
        Family::Wheel,
        Family::Hypercube,
        Family::Grid,
        Family::Kneser,
        Family::Petersen,
        Family::Lemke,
        Family::FosterSnevily,
        Family::Wang,
    ];
}

impl FromStr for Family {
    type Err = Error;

    /// Case-insensitive; `-` and `_` are interchangeable.
    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('-', "_");
        Family::ALL
            .into_iter()
            .find(|f| f.name() == key)
            .ok_or_else(|| Error::Parse(format!("unknown family {s:?}")))
    }
}

/// A family name with its integer parameters, written `name` or
/// `name:a,b,...` (for example `cycle:7`, `grid:2,1,1`, `kneser:5,2`).
///
/// Parameters: `path:v`, `cycle:v`, `complete:v`, `star:v`, `wheel:v` take the
/// vertex count; `hypercube:m` the dimension; `grid:d1,...,dm` the edge count
/// of each path factor; `kneser:n,t`; `foster_snevily:k` and `wang:k` the
/// sequence index. `petersen` and `lemke` take none.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FamilySpec {
    pub family: Family,
    pub params: Vec<usize>,
}

impl FamilySpec {
    pub fn new(family: Family, params: Vec<usize>) -> Result<Self> {
        let spec = FamilySpec { family, params };
        spec.check()?;
        Ok(spec)
    }

    fn check(&self) -> Result<()> {
        let p = &self.params;
        let want = |k: usize| -> Result<()> {
            if p.len() != k {
                return invalid(format!("{} takes {k} parameter(s), got {}", self.family.name(), p.len()));
            }
            Ok(())
        };
        match self.family {
            Family::Path | Family::Complete => {
                want(1)?;
                if p[0] < 1 {
                    return invalid("need at least one vertex");
                }
            }
            Family::Cycle => {
                want(1)?;
                if p[0] < 3 {
                    return invalid("a cycle needs at least 3 vertices");
                }
            }
            Family::Star => {
                want(1)?;
                if p[0] < 2 {
                    return invalid("a star needs at least 2 vertices");
                }
            }
            Family::Wheel => {
                want(1)?;
                if p[0] < 4 {
                    return invalid("a wheel needs at least 4 vertices");
                }
            }
            Family::Hypercube => {
                want(1)?;
                if p[0] > 16 {
                    return invalid("hypercube dimension above 16 is not supported");
                }
            }
            Family::Grid => {
                if p.is_empty() || p.contains(&0) {
                    return invalid("grid needs one or more positive path lengths");
                }
                if p.iter().map(|&d| d + 1).try_fold(1usize, |a, b| a.checked_mul(b)).is_none_or(|n| n > 1 << 20) {
                    return invalid("grid is too large");
                }
            }
            Family::Kneser => {
                want(2)?;
                let (n, t) = (p[0], p[1]);
                if t < 1 || n < 2 * t + 1 {
                    return invalid(format!("kneser needs t >= 1 and n >= 2t+1, got n={n}, t={t}"));
                }
                if n > 24 {
                    return invalid("kneser ground set above 24 is not supported");
                }
            }
            Family::Petersen | Family::Lemke => want(0)?,
            Family::FosterSnevily | Family::Wang => want(1)?,
        }
        Ok(())
    }

    pub fn generate(&self) -> Result<Graph> {
        let p = &self.params;
        match self.family {
            Family::Path => Ok(path(p[0])),
            Family::Cycle => Ok(cycle(p[0])),
            Family::Complete => Ok(complete(p[0])),
            Family::Star => Graph::new(p[0], (1..p[0]).map(|v| (0, v))),
            Family::Wheel => {
                let n = p[0];
                let spokes = (1..n).map(|v| (0, v));
                let rim = (1..n).map(|v| (v, if v + 1 < n { v + 1 } else { 1 }));
                Graph::new(n, spokes.chain(rim))
            }
            Family::Hypercube => Ok(grid(&vec![1; p[0]]).0),
            Family::Grid => Ok(grid(p).0),
            Family::Kneser => kneser(p[0], p[1]),
            Family::Petersen => Ok(petersen()),
            Family::Lemke => Ok(lemke()),
            Family::FosterSnevily => Ok(lemke_sequence(p[0], false)),
            Family::Wang => Ok(lemke_sequence(p[0], true)),
        }
    }

    /// The grid with steps along dimension `i` costing `pbar[i]`.
    pub fn generate_with_costs(&self, pbar: &[u32]) -> Result<(Graph, Costs)> {
        if self.family != Family::Grid {
            return invalid("per-dimension costs only apply to grids");
        }
        if pbar.len() != self.params.len() {
            return invalid("need one cost per grid dimension");
        }
        if pbar.iter().any(|&p| p < 2) {
            return invalid("pebbling costs must be at least 2");
        }
        let (g, dims) = grid(&self.params);
        let costs = g.edges().iter().map(|&(u, v)| pbar[dims(v - u)]).collect();
        Ok((g, Costs::PerEdge(costs)))
    }

    /// Closed-form pebbling number, when one is known. With `pbar`, the
    /// p̄-pebbling number of a grid.
    pub fn formula(&self, pbar: Option<&[u32]>) -> Result<Formula> {
        if let Some(pbar) = pbar {
            if self.family != Family::Grid {
                return invalid("per-dimension costs only apply to grids");
            }
            if pbar.len() != self.params.len() || pbar.iter().any(|&p| p < 2) {
                return invalid("need one cost of at least 2 per grid dimension");
            }
            let mut f = 1u64;
            for (&p, &d) in pbar.iter().zip(&self.params) {
                f = (p as u64)
                    .checked_pow(d as u32)
                    .and_then(|x| f.checked_mul(x))
                    .ok_or_else(|| Error::InvalidParameter("formula value overflows".into()))?;
            }
            return Ok(Formula::Value(f));
        }
        let p = &self.params;
        let pow2 = |e: usize| -> Result<Formula> {
            1u64.checked_shl(e as u32)
                .filter(|_| e < 64)
                .map(Formula::Value)
                .ok_or_else(|| Error::InvalidParameter("formula value overflows".into()))
        };
        match self.family {
            Family::Path => pow2(p[0] - 1),
            Family::Complete => Ok(Formula::Value(p[0] as u64)),
            Family::Cycle => {
                let n = p[0];
                let k = n / 2;
                if n.is_multiple_of(2) {
                    pow2(k)
                } else {
                    match pow2(k + 1)? {
                        Formula::Value(x) => Ok(Formula::Value(2 * (x / 3) + 1)),
                        Formula::Unknown => Ok(Formula::Unknown),
                    }
                }
            }
            Family::Hypercube => pow2(p[0]),
            Family::Grid => pow2(p.iter().sum()),
            _ => Ok(Formula::Unknown),
        }
    }
}

impl FromStr for FamilySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, args) = match s.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (s, None),
        };
        let family: Family = name.parse()?;
        let params = match args {
            None => Vec::new(),
            Some(a) => a
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::Parse(format!("bad family parameter {t:?}")))
                })
                .collect::<Result<Vec<_>>>()?,
        };
        FamilySpec::new(family, params)
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.family.name())?;
        if !self.params.is_empty() {
            let parts: Vec<String> = self.params.iter().map(|p| p.to_string()).collect();
            write!(f, ":{}", parts.join(","))?;
        }
        Ok(())
    }
}

/// A closed-form value, or `Unknown` when no formula applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Formula {
    Value(u64),
    Unknown,
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Value(v) => write!(f, "{v}"),
            Formula::Unknown => f.write_str("unknown"),
        }
    }
}

/// Path on `n` vertices, labeled along the path.
pub fn path(n: usize) -> Graph {
    Graph::new(n, (1..n).map(|i| (i - 1, i))).expect("valid path")
}

pub fn cycle(n: usize) -> Graph {
    Graph::new(n, (0..n).map(|i| (i, (i + 1) % n))).expect("valid cycle")
}

pub fn complete(n: usize) -> Graph {
    Graph::new(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))).expect("valid clique")
}

/// Product of paths with `dims[i]` edges each, row-major (first coordinate
/// most significant). Also returns a map from index difference of an edge to
/// its dimension.
fn grid(dims: &[usize]) -> (Graph, impl Fn(usize) -> usize) {
    let m = dims.len();
    let mut stride = vec![1usize; m];
    for i in (0..m.saturating_sub(1)).rev() {
        stride[i] = stride[i + 1] * (dims[i + 1] + 1);
    }
    let n = if m == 0 { 1 } else { stride[0] * (dims[0] + 1) };
    let mut edges = Vec::new();
    for v in 0..n {
        for i in 0..m {
            if (v / stride[i]) % (dims[i] + 1) < dims[i] {
                edges.push((v, v + stride[i]));
            }
        }
    }
    let g = Graph::new(n, edges).expect("valid grid");
    let lookup = move |diff: usize| stride.iter().position(|&s| s == diff).expect("grid edge");
    (g, lookup)
}

/// Kneser graph K(n, t): t-subsets of `0..n`, labeled by colex rank, adjacent
/// when disjoint.
pub fn kneser(n: usize, t: usize) -> Result<Graph> {
    if t < 1 || n < 2 * t + 1 {
        return invalid("kneser needs t >= 1 and n >= 2t+1");
    }
    let mut sets: Vec<u32> = (0u32..1 << n).filter(|s| s.count_ones() as usize == t).collect();
    // colex order on sets is numeric order of their bitmasks
    sets.sort_unstable();
    let mut edges = Vec::new();
    for i in 0..sets.len() {
        for j in i + 1..sets.len() {
            if sets[i] & sets[j] == 0 {
                edges.push((i, j));
            }
        }
    }
    Graph::new(sets.len(), edges)
}

/// Outer 5-cycle 0..4, inner pentagram 5..9 (i adjacent to i+2), spokes i, i+5.
pub fn petersen() -> Graph {
    let mut e = Vec::new();
    for i in 0..5 {
        e.push((i, (i + 1) % 5));
        e.push((5 + i, 5 + (i + 2) % 5));
        e.push((i, i + 5));
    }
    Graph::new(10, e).expect("valid Petersen graph")
}

/// Lemke graph with a, b, c, d, w, x, y, z labeled 0..7.
pub fn lemke() -> Graph {
    let (a, b, c, d, w, x, y, z) = (0, 1, 2, 3, 4, 5, 6, 7);
    Graph::new(
        8,
        [
            (a, b),
            (a, c),
            (a, d),
            (b, w),
            (b, z),
            (c, w),
            (c, z),
            (d, w),
            (d, z),
            (w, x),
            (x, y),
            (y, z),
            (z, a),
        ],
    )
    .expect("valid Lemke graph")
}

/// Starting from the Lemke graph, `k` times subdivide each of the four edges at
/// vertex 0; with `clique`, also join the four new vertices pairwise. New
/// vertices are appended in order of the far endpoint they lead to.
fn lemke_sequence(k: usize, clique: bool) -> Graph {
    let mut g = lemke();
    for _ in 0..k {
        let n = g.n();
        let nbrs: Vec<usize> = g.neighbors(0).collect();
        let mut edges: Vec<(usize, usize)> = g.edges().iter().copied().filter(|&(u, _)| u != 0).collect();
        for (i, &v) in nbrs.iter().enumerate() {
            edges.push((0, n + i));
            edges.push((n + i, v));
        }
        if clique {
            for i in 0..nbrs.len() {
                for j in i + 1..nbrs.len() {
                    edges.push((n + i, n + j));
                }
            }
        }
        g = Graph::new(n + nbrs.len(), edges).expect("subdivision stays simple");
    }
    g
}

/// The weighted grid for a grid spec and per-dimension costs.
pub fn weighted_grid(dims: &[usize], pbar: &[u32]) -> Result<(Graph, Costs)> {
    FamilySpec::new(Family::Grid, dims.to_vec())?.generate_with_costs(pbar)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::cartesian_product as product;
    use crate::graph::iso::is_isomorphic;

    fn spec(s: &str) -> FamilySpec {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_display_round_trip() {
        for s in ["path:5", "cycle:7", "grid:2,1,1", "kneser:5,2", "petersen", "foster_snevily:1", "wang:2"] {
            assert_eq!(spec(s).to_string(), s);
        }
        assert_eq!(spec("Foster-Snevily:0").family, Family::FosterSnevily);
        assert!("kneser:4,2".parse::<FamilySpec>().is_err());
        assert!("cycle".parse::<FamilySpec>().is_err());
        assert!("blob:3".parse::<FamilySpec>().is_err());
        assert!("cycle:x".parse::<FamilySpec>().is_err());
    }

    #[test]
    fn shapes() {
        assert_eq!(spec("star:4").generate().unwrap().degree(0), 3);
        let w = spec("wheel:6").generate().unwrap();
        assert_eq!((w.n(), w.edge_count(), w.degree(0)), (6, 10, 5));
        let g = spec("grid:2,1").generate().unwrap();
        assert_eq!((g.n(), g.edge_count()), (6, 7));
        let l = lemke();
        assert_eq!(l.edge_count(), 13);
        assert_eq!(l.degree(0), 4);
    }

    #[test]
    fn kneser_5_2_is_petersen() {
        assert!(is_isomorphic(&spec("kneser:5,2").generate().unwrap(), &petersen()));
        assert!(is_isomorphic(&spec("kneser:3,1").generate().unwrap(), &complete(3)));
    }

    #[test]
    fn lemke_sequences_start_at_lemke() {
        assert_eq!(spec("foster_snevily:0").generate().unwrap(), lemke());
        assert_eq!(spec("wang:0").generate().unwrap(), lemke());
        let l1 = spec("foster_snevily:1").generate().unwrap();
        assert_eq!((l1.n(), l1.edge_count()), (12, 17));
        let w1 = spec("wang:1").generate().unwrap();
        assert_eq!((w1.n(), w1.edge_count()), (12, 23));
        let l2 = spec("foster_snevily:2").generate().unwrap();
        assert_eq!(l2.distances_from(0)[1], 3);
    }

    #[test]
    fn grid_of_edges_is_cube() {
        let q3 = spec("grid:1,1,1").generate().unwrap();
        assert!(is_isomorphic(&q3, &spec("hypercube:3").generate().unwrap()));
        let k2 = path(2);
        assert!(is_isomorphic(&q3, &product(&product(&k2, &k2), &k2)));
    }

    #[test]
    fn weighted_grid_costs() {
        let (g, costs) = weighted_grid(&[2, 1], &[3, 5]).unwrap();
        // vertex (u1,u2) -> 2*u1 + u2
        assert_eq!(costs.edge_cost(g.edge_id(0, 1).unwrap()), 5);
        assert_eq!(costs.edge_cost(g.edge_id(0, 2).unwrap()), 3);
        assert!(spec("cycle:5").generate_with_costs(&[3]).is_err());
    }

    #[test]
    fn formulas() {
        let f = |s: &str| spec(s).formula(None).unwrap();
        assert_eq!(f("cycle:5"), Formula::Value(5));
        assert_eq!(f("cycle:6"), Formula::Value(8));
        assert_eq!(f("cycle:7"), Formula::Value(11));
        assert_eq!(f("cycle:9"), Formula::Value(21));
        assert_eq!(f("cycle:3"), Formula::Value(3));
        assert_eq!(f("path:4"), Formula::Value(8));
        assert_eq!(f("complete:5"), Formula::Value(5));
        assert_eq!(f("hypercube:3"), Formula::Value(8));
        assert_eq!(f("grid:2,1"), Formula::Value(8));
        assert_eq!(f("petersen"), Formula::Unknown);
        assert_eq!(f("star:4").to_string(), "unknown");
        assert_eq!(spec("grid:2").formula(Some(&[3])).unwrap(), Formula::Value(9));
        assert_eq!(spec("grid:1,1").formula(Some(&[3, 3])).unwrap(), Formula::Value(9));
        assert!(spec("cycle:5").formula(Some(&[3])).is_err());
    }
}
