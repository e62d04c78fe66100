//! Simple connected undirected graphs and their structural invariants.

use std::collections::VecDeque;
use std::fmt;

use crate::error::{Error, Result};

/// A simple connected undirected graph on vertices `0..n`.
///
/// Edges are stored once as `(u, v)` with `u < v`, sorted; each edge has an id
/// equal to its position in [`Graph::edges`].
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<(usize, usize)>>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edges", &self.edges)
            .finish()
    }
}

impl Graph {
    /// Builds a graph, rejecting loops, duplicate edges, out-of-range ids and
    /// disconnected inputs.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let g = Self::build(n, edges)?;
        if !g.is_connected() {
            return Err(Error::InvalidGraph("graph is not connected".into()));
        }
        Ok(g)
    }

    fn build(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGraph("graph has no vertices".into()));
        }
        let mut list = Vec::new();
        for (a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::InvalidGraph(format!("edge ({a},{b}) out of range for n={n}")));
            }
            if a == b {
                return Err(Error::InvalidGraph(format!("loop at vertex {a}")));
            }
            list.push((a.min(b), a.max(b)));
        }
        list.sort_unstable();
        if list.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidGraph("duplicate edge".into()));
        }
        let mut adj = vec![Vec::new(); n];
        for (id, &(u, v)) in list.iter().enumerate() {
            adj[u].push((v, id));
            adj[v].push((u, id));
        }
        for row in &mut adj {
            row.sort_unstable();
        }
        Ok(Graph { n, edges: list, adj })
    }

    /// Builds a graph that may be disconnected. Used by enumerators that filter
    /// on connectivity themselves.
    pub(crate) fn new_unchecked_connectivity(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        Self::build(n, edges)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Neighbors of `v` in increasing order.
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[v].iter().map(|&(u, _)| u)
    }

    /// `(neighbor, edge id)` pairs of `v`.
    pub fn incident(&self, v: usize) -> &[(usize, usize)] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edge_id(u, v).is_some()
    }

    pub fn edge_id(&self, u: usize, v: usize) -> Option<usize> {
        let row = self.adj.get(u)?;
        row.binary_search_by_key(&v, |&(w, _)| w).ok().map(|i| row[i].1)
    }

    pub fn is_connected(&self) -> bool {
        self.bfs(0).iter().all(|d| d.is_some())
    }

    pub fn is_tree(&self) -> bool {
        self.edges.len() + 1 == self.n && self.is_connected()
    }

    fn bfs(&self, src: usize) -> Vec<Option<u32>> {
        let mut dist = vec![None; self.n];
        dist[src] = Some(0);
        let mut queue = VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            for w in self.neighbors(u) {
                if dist[w].is_none() {
                    dist[w] = Some(du + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// BFS distances from `src`.
    pub fn distances_from(&self, src: usize) -> Vec<u32> {
        self.bfs(src).into_iter().map(|d| d.expect("graph is connected")).collect()
    }

    /// All-pairs distance matrix.
    pub fn distances(&self) -> Vec<Vec<u32>> {
        (0..self.n).map(|v| self.distances_from(v)).collect()
    }

    pub fn eccentricity(&self, v: usize) -> u32 {
        self.distances_from(v).into_iter().max().unwrap_or(0)
    }

    pub fn diameter(&self) -> u32 {
        (0..self.n).map(|v| self.eccentricity(v)).max().unwrap_or(0)
    }

    /// Length of a shortest cycle, or `None` for forests.
    pub fn girth(&self) -> Option<u32> {
        let mut best: Option<u32> = None;
        for src in 0..self.n {
            let mut dist = vec![u32::MAX; self.n];
            let mut parent = vec![usize::MAX; self.n];
            dist[src] = 0;
            let mut queue = VecDeque::from([src]);
            while let Some(u) = queue.pop_front() {
                for w in self.neighbors(u) {
                    if dist[w] == u32::MAX {
                        dist[w] = dist[u] + 1;
                        parent[w] = u;
                        queue.push_back(w);
                    } else if parent[u] != w {
                        let len = dist[u] + dist[w] + 1;
                        best = Some(best.map_or(len, |b| b.min(len)));
                    }
                }
            }
        }
        best
    }

    /// Articulation points in increasing order.
    pub fn cut_vertices(&self) -> Vec<usize> {
        let n = self.n;
        let mut disc = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut is_cut = vec![false; n];
        let mut timer = 0;
        // iterative DFS: (vertex, parent, next neighbor index)
        let mut stack: Vec<(usize, usize, usize)> = Vec::new();
        for root in 0..n {
            if disc[root] != usize::MAX {
                continue;
            }
            disc[root] = timer;
            low[root] = timer;
            timer += 1;
            let mut root_children = 0;
            stack.push((root, usize::MAX, 0));
            while let Some(&mut (u, parent, ref mut idx)) = stack.last_mut() {
                if *idx < self.adj[u].len() {
                    let w = self.adj[u][*idx].0;
                    *idx += 1;
                    if disc[w] == usize::MAX {
                        disc[w] = timer;
                        low[w] = timer;
                        timer += 1;
                        if u == root {
                            root_children += 1;
                        }
                        stack.push((w, u, 0));
                    } else if w != parent {
                        low[u] = low[u].min(disc[w]);
                    }
                } else {
                    stack.pop();
                    if parent != usize::MAX {
                        low[parent] = low[parent].min(low[u]);
                        if parent != root && low[u] >= disc[parent] {
                            is_cut[parent] = true;
                        }
                    }
                }
            }
            if root_children > 1 {
                is_cut[root] = true;
            }
        }
        (0..n).filter(|&v| is_cut[v]).collect()
    }

    /// Number of internally vertex-disjoint paths between non-adjacent `s`
    /// and `t` (unit-capacity max flow on the split graph).
    fn local_connectivity(&self, s: usize, t: usize) -> usize {
        // vertex v -> in-node 2v, out-node 2v+1
        let nodes = 2 * self.n;
        let mut cap: Vec<Vec<(usize, u8)>> = vec![Vec::new(); nodes];
        let add = |cap: &mut Vec<Vec<(usize, u8)>>, a: usize, b: usize, c: u8| {
            cap[a].push((b, c));
            cap[b].push((a, 0));
        };
        for v in 0..self.n {
            let c = if v == s || v == t { u8::MAX } else { 1 };
            add(&mut cap, 2 * v, 2 * v + 1, c);
        }
        for &(u, v) in &self.edges {
            add(&mut cap, 2 * u + 1, 2 * v, 1);
            add(&mut cap, 2 * v + 1, 2 * u, 1);
        }
        let source = 2 * s + 1;
        let sink = 2 * t;
        let mut flow = 0;
        loop {
            let mut prev: Vec<Option<(usize, usize)>> = vec![None; nodes];
            let mut queue = VecDeque::from([source]);
            let mut seen = vec![false; nodes];
            seen[source] = true;
            while let Some(a) = queue.pop_front() {
                if a == sink {
                    break;
                }
                for (i, &(b, c)) in cap[a].iter().enumerate() {
                    if c > 0 && !seen[b] {
                        seen[b] = true;
                        prev[b] = Some((a, i));
                        queue.push_back(b);
                    }
                }
            }
            if !seen[sink] {
                return flow;
            }
            let mut b = sink;
            while let Some((a, i)) = prev[b] {
                cap[a][i].1 -= 1;
                let back = cap[b].iter().position(|&(x, _)| x == a).unwrap();
                // parallel arcs never occur, so the first reverse arc is the right one
                cap[b][back].1 = cap[b][back].1.saturating_add(1);
                b = a;
            }
            flow += 1;
        }
    }

    /// Vertex connectivity κ(G); `n - 1` for complete graphs.
    pub fn vertex_connectivity(&self) -> usize {
        let n = self.n;
        let mut best = n.saturating_sub(1);
        for s in 0..n {
            for t in (s + 1)..n {
                if !self.has_edge(s, t) {
                    best = best.min(self.local_connectivity(s, t));
                }
            }
        }
        best
    }

    /// Diameter, girth, connectivity and cut vertices in one report.
    pub fn structure(&self) -> Structure {
        Structure {
            diameter: self.diameter(),
            girth: self.girth(),
            vertex_connectivity: self.vertex_connectivity(),
            cut_vertices: self.cut_vertices(),
        }
    }

    /// Graph on the same vertices with `extra` edges added.
    pub fn with_edges(&self, extra: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        Graph::new(self.n, self.edges.iter().copied().chain(extra))
    }

    /// Applies a vertex relabeling `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n {
            return Err(Error::InvalidParameter("permutation length mismatch".into()));
        }
        Graph::new(self.n, self.edges.iter().map(|&(u, v)| (perm[u], perm[v])))
    }

    /// Writes the graph in the `n m` / `u v` text format.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.edges.len());
        for &(u, v) in &self.edges {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    /// Parses the `n m` / `u v` text format.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut tokens = text.split_whitespace().map(|t| {
            t.parse::<usize>()
                .map_err(|_| Error::Parse(format!("expected a non-negative integer, found {t:?}")))
        });
        let mut next = |what: &str| {
            tokens
                .next()
                .unwrap_or_else(|| Err(Error::Parse(format!("missing {what}"))))
        };
        let n = next("vertex count")?;
        let m = next("edge count")?;
        let mut edges = Vec::with_capacity(m);
        for _ in 0..m {
            let u = next("edge endpoint")?;
            let v = next("edge endpoint")?;
            edges.push((u, v));
        }
        if tokens.next().is_some() {
            return Err(Error::Parse("trailing tokens after edge list".into()));
        }
        Graph::new(n, edges)
    }
}

/// Girth-aware structural summary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Structure {
    pub diameter: u32,
    /// `None` stands for infinite girth (acyclic graphs).
    pub girth: Option<u32>,
    pub vertex_connectivity: usize,
    pub cut_vertices: Vec<usize>,
}

/// Cartesian product with vertex `(a, b)` flattened to `a * n2 + b`.
pub fn cartesian_product(g1: &Graph, g2: &Graph) -> Graph {
    let n2 = g2.n();
    let mut edges = Vec::new();
    for a in 0..g1.n() {
        for &(u, v) in g2.edges() {
            edges.push((a * n2 + u, a * n2 + v));
        }
    }
    for &(u, v) in g1.edges() {
        for b in 0..n2 {
            edges.push((u * n2 + b, v * n2 + b));
        }
    }
    Graph::new(g1.n() * n2, edges).expect("product of connected graphs is connected")
}

/// For each edge of a product built by [`cartesian_product`] with second
/// factor of order `n2`, whether the edge runs along the first factor.
pub fn product_edge_sides(n2: usize, product: &Graph) -> Vec<bool> {
    product.edges().iter().map(|&(u, v)| u % n2 == v % n2).collect()
}

/// Structure-preserving bijections and canonical forms for small graphs.
pub mod iso {
    use super::Graph;

    fn adjacency(g: &Graph) -> Vec<Vec<bool>> {
        let mut m = vec![vec![false; g.n()]; g.n()];
        for &(u, v) in g.edges() {
            m[u][v] = true;
            m[v][u] = true;
        }
        m
    }

    struct Matcher<'a> {
        a: Vec<Vec<bool>>,
        b: Vec<Vec<bool>>,
        deg_a: Vec<usize>,
        deg_b: Vec<usize>,
        order: Vec<usize>,
        map: Vec<usize>,
        used: Vec<bool>,
        _g: &'a Graph,
    }

    impl Matcher<'_> {
        fn extend(&mut self, depth: usize) -> bool {
            if depth == self.order.len() {
                return true;
            }
            let v = self.order[depth];
            if self.map[v] != usize::MAX {
                return self.extend(depth + 1);
            }
            for cand in 0..self.b.len() {
                if self.used[cand] || self.deg_b[cand] != self.deg_a[v] {
                    continue;
                }
                let ok = (0..self.a.len())
                    .filter(|&u| self.map[u] != usize::MAX)
                    .all(|u| self.a[v][u] == self.b[cand][self.map[u]]);
                if ok {
                    self.map[v] = cand;
                    self.used[cand] = true;
                    if self.extend(depth + 1) {
                        return true;
                    }
                    self.map[v] = usize::MAX;
                    self.used[cand] = false;
                }
            }
            false
        }
    }

    /// Finds an isomorphism `g -> h` extending the partial assignment `fixed`.
    pub fn find_isomorphism(g: &Graph, h: &Graph, fixed: &[(usize, usize)]) -> Option<Vec<usize>> {
        if g.n() != h.n() || g.edge_count() != h.edge_count() {
            return None;
        }
        let deg_a: Vec<usize> = (0..g.n()).map(|v| g.degree(v)).collect();
        let deg_b: Vec<usize> = (0..h.n()).map(|v| h.degree(v)).collect();
        let mut sa = deg_a.clone();
        let mut sb = deg_b.clone();
        sa.sort_unstable();
        sb.sort_unstable();
        if sa != sb {
            return None;
        }
        // BFS order keeps each new vertex adjacent to mapped ones, which prunes early
        let start = fixed.first().map_or(0, |&(v, _)| v);
        let mut order: Vec<usize> = Vec::with_capacity(g.n());
        let mut seen = vec![false; g.n()];
        for &(v, _) in fixed {
            if !seen[v] {
                seen[v] = true;
                order.push(v);
            }
        }
        if !seen[start] {
            seen[start] = true;
            order.push(start);
        }
        let mut i = 0;
        while i < order.len() {
            for w in g.neighbors(order[i]) {
                if !seen[w] {
                    seen[w] = true;
                    order.push(w);
                }
            }
            i += 1;
        }
        let mut m = Matcher {
            a: adjacency(g),
            b: adjacency(h),
            deg_a,
            deg_b,
            order,
            map: vec![usize::MAX; g.n()],
            used: vec![false; h.n()],
            _g: g,
        };
        for &(v, w) in fixed {
            if m.deg_a[v] != m.deg_b[w] || m.used[w] {
                return None;
            }
            let ok = (0..g.n())
                .filter(|&u| m.map[u] != usize::MAX)
                .all(|u| m.a[v][u] == m.b[w][m.map[u]]);
            if !ok {
                return None;
            }
            m.map[v] = w;
            m.used[w] = true;
        }
        if m.extend(0) {
            Some(m.map)
        } else {
            None
        }
    }

    pub fn is_isomorphic(g: &Graph, h: &Graph) -> bool {
        find_isomorphism(g, h, &[]).is_some()
    }

    /// Vertex orbits under the automorphism group; each orbit sorted, orbits
    /// ordered by their least element.
    pub fn vertex_orbits(g: &Graph) -> Vec<Vec<usize>> {
        let n = g.n();
        let mut orbit_of = vec![usize::MAX; n];
        let mut orbits: Vec<Vec<usize>> = Vec::new();
        for v in 0..n {
            if orbit_of[v] != usize::MAX {
                continue;
            }
            let id = orbits.len();
            orbit_of[v] = id;
            let mut orbit = vec![v];
            for w in (v + 1)..n {
                if orbit_of[w] == usize::MAX && find_isomorphism(g, g, &[(v, w)]).is_some() {
                    orbit_of[w] = id;
                    orbit.push(w);
                }
            }
            orbits.push(orbit);
        }
        orbits
    }

    /// Canonical adjacency bitmask (minimum over all relabelings) for graphs
    /// with at most 8 vertices. Two such graphs are isomorphic iff their
    /// canonical masks and orders agree.
    pub fn canonical_mask(g: &Graph) -> u64 {
        use itertools::Itertools;
        let n = g.n();
        assert!(n <= 8, "canonical_mask is meant for tiny graphs");
        let pair_bit = |u: usize, v: usize| {
            let (a, b) = (u.min(v), u.max(v));
            // index of (a,b) in the upper triangle, row-major
            a * (2 * n - a - 1) / 2 + (b - a - 1)
        };
        (0..n)
            .permutations(n)
            .map(|perm| {
                g.edges()
                    .iter()
                    .fold(0u64, |acc, &(u, v)| acc | 1 << pair_bit(perm[u], perm[v]))
            })
            .min()
            .unwrap_or(0)
    }
}

/// Exhaustive generators of small connected graphs and trees.
pub mod enumerate {
    use std::collections::BTreeMap;

    use super::{iso, Graph};

    /// All connected graphs on `n` vertices, one per isomorphism class, in a
    /// deterministic order.
    pub fn connected_graphs(n: usize) -> Vec<Graph> {
        assert!((1..=7).contains(&n), "exhaustive enumeration is limited to n <= 7");
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| ((u + 1)..n).map(move |v| (u, v)))
            .collect();
        let mut classes: BTreeMap<u64, Graph> = BTreeMap::new();
        for mask in 0u64..(1u64 << pairs.len()) {
            if n > 1 && (mask.count_ones() as usize) < n - 1 {
                continue;
            }
            let edges = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &e)| e);
            let Ok(g) = Graph::new_unchecked_connectivity(n, edges) else { continue };
            if !g.is_connected() {
                continue;
            }
            classes.entry(iso::canonical_mask(&g)).or_insert(g);
        }
        classes.into_values().collect()
    }

    /// Decodes a Prüfer sequence over `0..seq.len()+2` into a labeled tree.
    pub fn prufer_tree(seq: &[usize]) -> Graph {
        let n = seq.len() + 2;
        let mut degree = vec![1usize; n];
        for &s in seq {
            degree[s] += 1;
        }
        let mut edges = Vec::with_capacity(n - 1);
        for &s in seq {
            let leaf = (0..n).find(|&v| degree[v] == 1).unwrap();
            edges.push((leaf, s));
            degree[leaf] -= 1;
            degree[s] -= 1;
        }
        let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
        edges.push((rest[0], rest[1]));
        Graph::new(n, edges).expect("Prüfer sequences decode to trees")
    }

    /// AHU-style canonical string of a tree rooted at `root`.
    fn rooted_code(t: &Graph, v: usize, parent: usize) -> String {
        let mut kids: Vec<String> = t
            .neighbors(v)
            .filter(|&w| w != parent)
            .map(|w| rooted_code(t, w, v))
            .collect();
        kids.sort();
        format!("({})", kids.concat())
    }

    /// Canonical code of an unrooted tree (minimum over its centers).
    pub fn tree_code(t: &Graph) -> String {
        let ecc: Vec<u32> = (0..t.n()).map(|v| t.eccentricity(v)).collect();
        let radius = *ecc.iter().min().unwrap();
        (0..t.n())
            .filter(|&v| ecc[v] == radius)
            .map(|c| rooted_code(t, c, usize::MAX))
            .min()
            .unwrap()
    }

    /// Canonical code of a tree rooted at `root`.
    pub fn rooted_tree_code(t: &Graph, root: usize) -> String {
        rooted_code(t, root, usize::MAX)
    }

    /// All trees on `n` vertices, one per isomorphism class, found by decoding
    /// every Prüfer sequence and deduplicating.
    pub fn trees(n: usize) -> Vec<Graph> {
        assert!((1..=10).contains(&n));
        if n == 1 {
            return vec![Graph::new(1, []).unwrap()];
        }
        if n == 2 {
            return vec![Graph::new(2, [(0, 1)]).unwrap()];
        }
        let len = n - 2;
        let total = n.pow(len as u32);
        let mut classes: BTreeMap<String, Graph> = BTreeMap::new();
        let mut seq = vec![0usize; len];
        for mut code in 0..total {
            for slot in seq.iter_mut() {
                *slot = code % n;
                code /= n;
            }
            let t = prufer_tree(&seq);
            classes.entry(tree_code(&t)).or_insert(t);
        }
        classes.into_values().collect()
    }
}
