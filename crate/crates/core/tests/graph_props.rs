use pebbling::families::{kneser, petersen, Family, FamilySpec, Formula};
use pebbling::graph::enumerate::connected_graphs;
use pebbling::graph::iso::{canonical_mask, is_isomorphic};
use pebbling::{pebbling_number, Graph, Options};
use proptest::prelude::*;

fn floyd_warshall(g: &Graph) -> Vec<Vec<u32>> {
    let n = g.n();
    let inf = u32::MAX / 4;
    let mut d = vec![vec![inf; n]; n];
    for (v, row) in d.iter_mut().enumerate() {
        row[v] = 0;
    }
    for &(u, v) in g.edges() {
        d[u][v] = 1;
        d[v][u] = 1;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                d[i][j] = d[i][j].min(d[i][k] + d[k][j]);
            }
        }
    }
    d
}

fn connected_without(g: &Graph, removed: u64) -> bool {
    let alive: Vec<usize> = (0..g.n()).filter(|&v| removed >> v & 1 == 0).collect();
    let Some(&start) = alive.first() else { return true };
    let mut seen = vec![false; g.n()];
    let mut stack = vec![start];
    seen[start] = true;
    while let Some(u) = stack.pop() {
        for w in g.neighbors(u) {
            if removed >> w & 1 == 0 && !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    alive.iter().all(|&v| seen[v])
}

/// Smallest vertex set whose removal disconnects the graph, or n - 1.
fn brute_connectivity(g: &Graph) -> usize {
    let n = g.n();
    (0u64..1 << n)
        .filter(|&s| (s.count_ones() as usize) < n.saturating_sub(1) && !connected_without(g, s))
        .map(|s| s.count_ones() as usize)
        .min()
        .unwrap_or(n.saturating_sub(1))
}

#[test]
fn distances_match_floyd_warshall() {
    for n in 1..=5 {
        for g in connected_graphs(n) {
            assert_eq!(g.distances(), floyd_warshall(&g));
        }
    }
    assert_eq!(petersen().distances(), floyd_warshall(&petersen()));
}

#[test]
fn connectivity_and_cut_vertices_by_deletion() {
    for n in 1..=6 {
        for g in connected_graphs(n) {
            assert_eq!(g.vertex_connectivity(), brute_connectivity(&g), "{:?}", g.edges());
            let cuts: Vec<usize> = (0..n).filter(|&v| n > 1 && !connected_without(&g, 1 << v)).collect();
            assert_eq!(g.cut_vertices(), cuts);
        }
    }
}

#[test]
fn girth_of_known_graphs() {
    let g = |s: &str| s.parse::<FamilySpec>().unwrap().generate().unwrap();
    assert_eq!(g("cycle:7").girth(), Some(7));
    assert_eq!(g("path:5").girth(), None);
    assert_eq!(g("complete:5").girth(), Some(3));
    assert_eq!(g("hypercube:3").girth(), Some(4));
    assert_eq!(petersen().girth(), Some(5));
    assert_eq!(petersen().diameter(), 2);
}

#[test]
fn named_isomorphisms() {
    let g = |s: &str| s.parse::<FamilySpec>().unwrap().generate().unwrap();
    assert!(is_isomorphic(&g("hypercube:3"), &g("grid:1,1,1")));
    assert!(is_isomorphic(&g("hypercube:2"), &g("cycle:4")));
    assert!(is_isomorphic(&kneser(5, 2).unwrap(), &petersen()));
    assert!(!is_isomorphic(&g("star:5"), &g("path:5")));
}

#[test]
fn small_connected_graph_counts() {
    // connected graphs on 1..=6 unlabeled vertices
    let counts: Vec<usize> = (1..=6).map(|n| connected_graphs(n).len()).collect();
    assert_eq!(counts, vec![1, 1, 2, 6, 21, 112]);
}

#[test]
fn family_formulas_match_the_solver() {
    let specs = [
        "path:1", "path:4", "path:6", "cycle:3", "cycle:5", "cycle:6", "cycle:7", "complete:2", "complete:6",
        "hypercube:1", "hypercube:3", "grid:2,1", "grid:3,2",
    ];
    for s in specs {
        let spec: FamilySpec = s.parse().unwrap();
        let g = spec.generate().unwrap();
        let exact = pebbling_number(&g, None, &Options::default().with_symmetry(true)).unwrap();
        match spec.formula(None).unwrap() {
            Formula::Value(v) => assert_eq!(v, exact, "{s}"),
            Formula::Unknown => panic!("{s} has no formula"),
        }
    }
    // no closed form in the family table: a star with m leaves needs m + 2, Petersen needs 10
    for (s, want) in [("star:4", 5), ("star:6", 7), ("petersen", 10)] {
        let spec: FamilySpec = s.parse().unwrap();
        assert_eq!(spec.formula(None).unwrap(), Formula::Unknown);
        let g = spec.generate().unwrap();
        assert_eq!(pebbling_number(&g, None, &Options::default().with_symmetry(true)).unwrap(), want, "{s}");
    }
}

#[test]
fn family_names_parse_loosely() {
    assert_eq!("Foster-Snevily".parse::<Family>().unwrap(), Family::FosterSnevily);
    assert!("moebius".parse::<Family>().is_err());
    assert!("cycle:2".parse::<FamilySpec>().is_err());
}

/// Random connected graph: a random spanning tree plus random chords.
fn graph() -> impl Strategy<Value = Graph> {
    (1usize..=7)
        .prop_flat_map(|n| {
            let parents: Vec<BoxedStrategy<usize>> = (1..n).map(|v| (0..v).boxed()).collect();
            (Just(n), parents, proptest::collection::vec(any::<bool>(), n * (n - 1) / 2))
        })
        .prop_map(|(n, parents, bits)| {
            let mut edges: Vec<(usize, usize)> = parents.iter().enumerate().map(|(i, &p)| (p, i + 1)).collect();
            let pairs = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
            for (e, b) in pairs.zip(bits) {
                if b && !edges.contains(&e) {
                    edges.push(e);
                }
            }
            Graph::new(n, edges).unwrap()
        })
}

fn relabeled() -> impl Strategy<Value = (Graph, Vec<usize>)> {
    graph().prop_flat_map(|g| {
        let n = g.n();
        (Just(g), Just((0..n).collect::<Vec<_>>()).prop_shuffle())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn canonical_form_ignores_labels((g, perm) in relabeled()) {
        let h = g.relabel(&perm).unwrap();
        prop_assert_eq!(canonical_mask(&g), canonical_mask(&h));
        prop_assert!(is_isomorphic(&g, &h));
        prop_assert_eq!(g.girth(), h.girth());
        prop_assert_eq!(g.vertex_connectivity(), h.vertex_connectivity());
    }

    #[test]
    fn text_round_trip(g in graph()) {
        let back = Graph::from_text(&g.to_text()).unwrap();
        prop_assert_eq!(back.n(), g.n());
        prop_assert_eq!(back.edges(), g.edges());
    }

    #[test]
    fn distances_match_floyd_warshall_on_random_graphs(g in graph()) {
        prop_assert_eq!(g.distances(), floyd_warshall(&g));
    }
}
