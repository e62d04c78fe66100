//! Pebble distributions, pebbling moves, and the rules a move sequence obeys.

use std::fmt;
use std::str::FromStr;

use crate::error::{invalid, Error, Result};
use crate::graph::{self, Graph};

/// Pebble counts per vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct PebbleDistribution(pub Vec<u32>);

impl PebbleDistribution {
    pub fn zeros(n: usize) -> Self {
        PebbleDistribution(vec![0; n])
    }

    /// Builds a distribution on `n` vertices from `(vertex, count)` pairs.
    pub fn from_pairs(n: usize, pairs: &[(usize, u32)]) -> Self {
        let mut d = vec![0; n];
        for &(v, c) in pairs {
            d[v] += c;
        }
        PebbleDistribution(d)
    }

    pub fn counts(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Total number of pebbles, |D|.
    pub fn size(&self) -> u64 {
        self.0.iter().map(|&c| c as u64).sum()
    }

    /// Number of vertices holding at least one pebble, q(D).
    pub fn support(&self) -> usize {
        self.0.iter().filter(|&&c| c > 0).count()
    }

    pub fn check_for(&self, g: &Graph) -> Result<()> {
        if self.0.len() != g.n() {
            return invalid(format!(
                "distribution has {} entries but the graph has {} vertices",
                self.0.len(),
                g.n()
            ));
        }
        Ok(())
    }

    /// Whitespace-separated counts, the on-disk distribution format.
    pub fn to_text(&self) -> String {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        parts.join(" ")
    }

    /// Parses whitespace- or comma-separated counts.
    pub fn parse(text: &str) -> Result<Self> {
        let counts = text
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<u32>()
                    .map_err(|_| Error::Parse(format!("bad pebble count {t:?}")))
            })
            .collect::<Result<Vec<u32>>>()?;
        Ok(PebbleDistribution(counts))
    }
}

impl fmt::Display for PebbleDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// One pebbling step: `cost` pebbles leave `from`, one arrives at `to`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Move {
    pub from: usize,
    pub to: usize,
    pub cost: u32,
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.cost == 2 {
            write!(f, "{}->{}", self.from, self.to)
        } else {
            write!(f, "{}->{} (cost {})", self.from, self.to, self.cost)
        }
    }
}

/// Restrictions on which steps a solution may use, relative to the root.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum SolveMode {
    #[default]
    Unrestricted,
    /// Every step strictly decreases the distance to the root.
    Greedy,
    /// Every step does not increase the distance to the root.
    SemiGreedy,
    /// The edges traversed by the solution form an acyclic subgraph.
    TreeSolvable,
}

impl SolveMode {
    pub fn name(self) -> &'static str {
        match self {
            SolveMode::Unrestricted => "unrestricted",
            SolveMode::Greedy => "greedy",
            SolveMode::SemiGreedy => "semigreedy",
            SolveMode::TreeSolvable => "tree",
        }
    }

    /// Whether a step from distance `from` to distance `to` is allowed.
    pub(crate) fn allows(self, from: u32, to: u32) -> bool {
        match self {
            SolveMode::Greedy => to < from,
            SolveMode::SemiGreedy => to <= from,
            SolveMode::Unrestricted | SolveMode::TreeSolvable => true,
        }
    }
}

impl FromStr for SolveMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "unrestricted" | "any" => Ok(SolveMode::Unrestricted),
            "greedy" => Ok(SolveMode::Greedy),
            "semigreedy" => Ok(SolveMode::SemiGreedy),
            "tree" | "treesolvable" => Ok(SolveMode::TreeSolvable),
            other => invalid(format!("unknown solve mode {other:?}")),
        }
    }
}

/// Pebbles consumed per step along each edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Costs {
    /// Ordinary (p = 2) or uniform p-pebbling.
    Uniform(u32),
    /// One cost per edge id of the graph.
    PerEdge(Vec<u32>),
}

impl Default for Costs {
    fn default() -> Self {
        Costs::Uniform(2)
    }
}

impl Costs {
    pub fn edge_cost(&self, edge: usize) -> u32 {
        match self {
            Costs::Uniform(p) => *p,
            Costs::PerEdge(c) => c[edge],
        }
    }

    pub fn validate(&self, g: &Graph) -> Result<()> {
        match self {
            Costs::Uniform(p) if *p < 2 => invalid(format!("pebbling cost must be at least 2, got {p}")),
            Costs::PerEdge(c) if c.len() != g.edge_count() => {
                invalid("per-edge cost list does not match the edge count")
            }
            Costs::PerEdge(c) if c.iter().any(|&p| p < 2) => invalid("pebbling costs must be at least 2"),
            _ => Ok(()),
        }
    }

    pub fn is_ordinary(&self) -> bool {
        match self {
            Costs::Uniform(p) => *p == 2,
            Costs::PerEdge(c) => c.iter().all(|&p| p == 2),
        }
    }
}

/// Product `g1 □ g2` where steps along a `g1` edge cost `p1` and along a `g2`
/// edge cost `p2`.
pub fn weighted_product(g1: &Graph, g2: &Graph, p1: u32, p2: u32) -> (Graph, Costs) {
    let h = graph::cartesian_product(g1, g2);
    let costs = graph::product_edge_sides(g2.n(), &h)
        .into_iter()
        .map(|first| if first { p1 } else { p2 })
        .collect();
    (h, Costs::PerEdge(costs))
}

/// Ordered list of pebbling steps.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct MoveSequence(pub Vec<Move>);

impl MoveSequence {
    pub fn moves(&self) -> &[Move] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Replays the sequence from `start`, checking adjacency, costs, pebble
    /// availability and, relative to `root`, the constraints of `mode`.
    /// Returns the final distribution.
    pub fn replay(
        &self,
        g: &Graph,
        costs: &Costs,
        start: &PebbleDistribution,
        root: usize,
        mode: SolveMode,
    ) -> Result<PebbleDistribution> {
        start.check_for(g)?;
        let dist = g.distances_from(root);
        let mut counts = start.0.clone();
        let mut used_edges: Vec<usize> = Vec::new();
        for (i, mv) in self.0.iter().enumerate() {
            let bad = |why: &str| Err(Error::PreconditionViolated(format!("move {i} ({mv}): {why}")));
            let Some(edge) = g.edge_id(mv.from, mv.to) else {
                return bad("not an edge");
            };
            if mv.cost != costs.edge_cost(edge) {
                return bad("wrong cost for this edge");
            }
            if counts[mv.from] < mv.cost {
                return bad("not enough pebbles");
            }
            if !mode.allows(dist[mv.from], dist[mv.to]) {
                return bad("violates the solve mode");
            }
            if mode == SolveMode::TreeSolvable && !used_edges.contains(&edge) {
                used_edges.push(edge);
            }
            counts[mv.from] -= mv.cost;
            counts[mv.to] += 1;
        }
        if mode == SolveMode::TreeSolvable && !is_forest(g, &used_edges) {
            return Err(Error::PreconditionViolated("traversed edges contain a cycle".into()));
        }
        Ok(PebbleDistribution(counts))
    }
}

impl fmt::Display for MoveSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|m| m.to_string()).collect();
        f.write_str(&parts.join(", "))
    }
}

fn is_forest(g: &Graph, edges: &[usize]) -> bool {
    let mut parent: Vec<usize> = (0..g.n()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for &e in edges {
        let (u, v) = g.edges()[e];
        let (a, b) = (find(&mut parent, u), find(&mut parent, v));
        if a == b {
            return false;
        }
        parent[a] = b;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn size_and_support() {
        let d = PebbleDistribution(vec![0, 3, 0, 2]);
        assert_eq!(d.size(), 5);
        assert_eq!(d.support(), 2);
    }

    #[test]
    fn parse_accepts_commas_and_spaces() {
        assert_eq!(PebbleDistribution::parse("1, 2 3\n4").unwrap().0, vec![1, 2, 3, 4]);
        assert!(PebbleDistribution::parse("1 -2").is_err());
    }

    #[test]
    fn replay_rejects_overdraft() {
        let g = Graph::new(2, [(0, 1)]).unwrap();
        let seq = MoveSequence(vec![Move { from: 0, to: 1, cost: 2 }]);
        let start = PebbleDistribution(vec![1, 0]);
        assert!(seq.replay(&g, &Costs::default(), &start, 1, SolveMode::Unrestricted).is_err());
        let start = PebbleDistribution(vec![2, 0]);
        let end = seq.replay(&g, &Costs::default(), &start, 1, SolveMode::Unrestricted).unwrap();
        assert_eq!(end.0, vec![0, 1]);
    }

    #[test]
    fn replay_checks_greedy_direction() {
        let g = Graph::new(3, [(0, 1), (1, 2)]).unwrap();
        let seq = MoveSequence(vec![Move { from: 1, to: 2, cost: 2 }]);
        let start = PebbleDistribution(vec![0, 2, 0]);
        assert!(seq.replay(&g, &Costs::default(), &start, 0, SolveMode::Greedy).is_err());
        assert!(seq.replay(&g, &Costs::default(), &start, 0, SolveMode::Unrestricted).is_ok());
    }

    #[test]
    fn weighted_product_assigns_side_costs() {
        let k2 = Graph::new(2, [(0, 1)]).unwrap();
        let p3 = Graph::new(3, [(0, 1), (1, 2)]).unwrap();
        let (h, costs) = weighted_product(&p3, &k2, 3, 5);
        // (a,b) -> 2a+b; edge (0,1) runs along k2, edge (0,2) along p3
        assert_eq!(costs.edge_cost(h.edge_id(0, 1).unwrap()), 5);
        assert_eq!(costs.edge_cost(h.edge_id(0, 2).unwrap()), 3);
    }

    #[test]
    fn mode_parsing() {
        assert_eq!("semi-greedy".parse::<SolveMode>().unwrap(), SolveMode::SemiGreedy);
        assert_eq!("tree".parse::<SolveMode>().unwrap(), SolveMode::TreeSolvable);
        assert!("sideways".parse::<SolveMode>().is_err());
    }
}
