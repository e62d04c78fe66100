//! The acceptance suite: every reproduced number, checked and reported as one
//! pass/fail line per criterion, plus the CSV files the run produces.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::distribution::{PebbleDistribution, SolveMode};
use crate::error::Result;
use crate::families::{self, complete, cycle, lemke, path, petersen, weighted_grid, Family, FamilySpec, Formula};
use crate::graph::{cartesian_product, enumerate, Graph};
use crate::lattice;
use crate::number::{lower_bound, max_unsolvable, pebbling_number, upper_bound};
use crate::properties::{class0, class0_sufficient, graham_check};
use crate::solver::{is_solvable, Options};
use crate::thresholds::{clique_coverage, threshold_scan, Model, ScanConfig};
use crate::trees::{branch_recursion, tree_formula};
use crate::{lemke as kl, par};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReproConfig {
    pub seed: u64,
    /// Trials per threshold probe.
    pub trials: u64,
    /// Skip the items that take longest (Petersen, the full P3□S4 value).
    pub skip_heavy: bool,
}

impl Default for ReproConfig {
    fn default() -> Self {
        ReproConfig { seed: 42, trials: 2000, skip_heavy: false }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub criterion: u8,
    pub name: &'static str,
    pub passed: bool,
    pub summary: String,
    pub failures: Vec<String>,
}

impl Check {
    pub fn line(&self) -> String {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        let detail = if self.passed {
            self.summary.clone()
        } else {
            let mut shown: Vec<String> = self.failures.iter().take(5).cloned().collect();
            if self.failures.len() > 5 {
                shown.push(format!("and {} more", self.failures.len() - 5));
            }
            shown.join("; ")
        };
        format!("[{tag}] {} {}: {detail}", self.criterion, self.name)
    }
}

#[derive(Clone, Debug, Default)]
pub struct Report {
    pub checks: Vec<Check>,
    /// File name → CSV contents.
    pub csv: BTreeMap<String, String>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn table(&self) -> String {
        self.checks.iter().map(|c| c.line() + "\n").collect()
    }

    /// One row per criterion, deterministic for a fixed configuration.
    pub fn results_csv(&self) -> String {
        let mut s = String::from("criterion,name,passed\n");
        for c in &self.checks {
            let _ = writeln!(s, "{},{},{}", c.criterion, c.name.replace(',', ";"), c.passed);
        }
        s
    }
}

/// Collects named sub-item outcomes into one check.
struct Tally {
    failures: Vec<String>,
    items: usize,
}

impl Tally {
    fn new() -> Self {
        Tally { failures: Vec::new(), items: 0 }
    }

    fn item(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.items += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn result<T>(&mut self, r: Result<T>, what: impl FnOnce() -> String) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.items += 1;
                self.failures.push(format!("{}: {e}", what()));
                None
            }
        }
    }

    fn finish(self, criterion: u8, name: &'static str, summary: String) -> Check {
        Check {
            criterion,
            name,
            passed: self.failures.is_empty(),
            summary: format!("{} items; {summary}", self.items),
            failures: self.failures,
        }
    }
}

fn f(g: &Graph) -> Result<u64> {
    pebbling_number(g, None, &Options::default().with_symmetry(true))
}

pub fn exact_numbers(cfg: &ReproConfig) -> Check {
    let mut t = Tally::new();
    let mut cases: Vec<(String, Result<Graph>, u64)> = Vec::new();
    for n in 2..=7 {
        cases.push((format!("K{n}"), Ok(complete(n)), n as u64));
    }
    for v in 2..=6 {
        cases.push((format!("P{v}"), Ok(path(v)), 1 << (v - 1)));
    }
    for n in 3..=9 {
        let want = match FamilySpec::new(Family::Cycle, vec![n]).and_then(|s| s.formula(None)) {
            Ok(Formula::Value(v)) => v,
            _ => 0,
        };
        cases.push((format!("C{n}"), Ok(cycle(n)), want));
    }
    cases.push(("Q3".into(), FamilySpec::new(Family::Hypercube, vec![3]).and_then(|s| s.generate()), 8));
    if !cfg.skip_heavy {
        cases.push(("Petersen".into(), Ok(petersen()), 10));
    }
    cases.push(("Lemke".into(), Ok(lemke()), 8));
    for (name, g, want) in cases {
        if let Some(got) = t.result(g.and_then(|g| f(&g)), || name.clone()) {
            t.item(got == want, || format!("{name}: got {got}, want {want}"));
        }
    }
    let note = if cfg.skip_heavy { "Petersen skipped" } else { "all values exact" };
    t.finish(1, "exact pebbling numbers", note.into())
}

pub fn tree_laws() -> Check {
    let mut t = Tally::new();
    let mut count = 0;
    for n in 1..=8 {
        for tree in enumerate::trees(n) {
            count += 1;
            let code = enumerate::tree_code(&tree);
            let mut best = 0;
            for r in 0..n {
                let exact = pebbling_number(&tree, Some(r), &Options::default());
                let formula = tree_formula(&tree, Some(r), 1);
                if let (Some(e), Some(fm)) = (
                    t.result(exact, || format!("{code} root {r}")),
                    t.result(formula, || format!("{code} root {r}")),
                ) {
                    t.item(e == fm, || format!("{code} root {r}: exact {e}, formula {fm}"));
                    best = best.max(e);
                }
            }
            if let Some(fm) = t.result(tree_formula(&tree, None, 1), || code.clone()) {
                t.item(best == fm, || format!("{code}: exact {best}, formula {fm}"));
            }
            if n > 7 {
                continue;
            }
            for r in 0..n {
                for k in 1..=2 {
                    let exact = pebbling_number(&tree, Some(r), &Options::default().with_k(k));
                    let rec = branch_recursion(&tree, r, k, |g, gr, j| {
                        pebbling_number(g, Some(gr), &Options::default().with_k(j))
                    });
                    if let (Some(e), Some(rv)) = (
                        t.result(exact, || format!("{code} root {r} k {k}")),
                        t.result(rec, || format!("{code} root {r} k {k}")),
                    ) {
                        t.item(e == rv, || format!("{code} root {r} k {k}: exact {e}, recursion {rv}"));
                    }
                }
            }
        }
    }
    t.finish(2, "tree formula and branch recursion", format!("{count} trees up to 8 vertices"))
}

/// The 8-vertex graph: 6-cycle a..f (0..5), g (6) adjacent to a and c,
/// h (7) adjacent to a and e.
pub fn eight_vertex_h() -> Graph {
    let mut e: Vec<(usize, usize)> = (0..6).map(|i| (i, (i + 1) % 6)).collect();
    e.extend([(6, 0), (6, 2), (7, 0), (7, 4)]);
    Graph::new(8, e).expect("valid graph")
}

/// The 6-cycle a, b, c, d, e, g (0..5) with the triangle a, c, e.
pub fn cycle_with_triangle() -> Graph {
    let mut e: Vec<(usize, usize)> = (0..6).map(|i| (i, (i + 1) % 6)).collect();
    e.extend([(0, 2), (2, 4), (4, 0)]);
    Graph::new(6, e).expect("valid graph")
}

pub fn counterexamples() -> Check {
    let mut t = Tally::new();
    let plain = Options::default();
    let mut solv = |name: &str, g: &Graph, d: PebbleDistribution, root: usize, opts: Options, want: bool| {
        if let Some(got) = t.result(is_solvable(g, &d, root, &opts), || name.into()) {
            t.item(got == want, || format!("{name}: solvable={got}"));
        }
    };
    let c5 = cycle(5);
    let d = PebbleDistribution(vec![0, 0, 3, 2, 0]);
    solv("C5 unrestricted", &c5, d.clone(), 0, plain.clone(), true);
    solv("C5 greedy", &c5, d, 0, plain.clone().with_mode(SolveMode::Greedy), false);

    let h = eight_vertex_h();
    let d = PebbleDistribution::from_pairs(8, &[(0, 1), (1, 3), (5, 3), (6, 1), (7, 1)]);
    solv("H semigreedy d", &h, d.clone(), 3, plain.clone().with_mode(SolveMode::SemiGreedy), false);
    solv("H unrestricted d", &h, d, 3, plain.clone(), true);
    let d = PebbleDistribution::from_pairs(8, &[(1, 1), (2, 5), (3, 1), (6, 1), (7, 1)]);
    solv("H tree f", &h, d.clone(), 5, plain.clone().with_mode(SolveMode::TreeSolvable), false);
    solv("H unrestricted f", &h, d, 5, plain.clone(), true);

    let ct = cycle_with_triangle();
    let d = PebbleDistribution::from_pairs(6, &[(1, 3), (3, 3)]);
    solv("cycle+triangle D(b,d)=(3,3) to g", &ct, d, 5, plain.clone(), false);

    let d = PebbleDistribution(vec![8, 1, 1, 1, 0, 0, 0, 1]);
    solv("Lemke two pebbles to x", &lemke(), d, 5, plain.clone().with_k(2), false);

    for (name, g, want) in [("H", h, 9), ("cycle+triangle", ct, 7)] {
        if let Some(got) = t.result(f(&g), || name.into()) {
            t.item(got == want, || format!("f({name}) = {got}, want {want}"));
        }
    }
    t.finish(3, "counterexample suite", "all verdicts as stated".into())
}

pub fn small_graph_laws() -> Check {
    let mut t = Tally::new();
    let mut count = 0;
    for n in 1..=6 {
        let graphs = enumerate::connected_graphs(n);
        count += graphs.len();
        let values = par::map(graphs.clone(), |g| f(&g));
        for (g, v) in graphs.iter().zip(values) {
            let name = format!("n={n} edges={:?}", g.edges());
            let Some(v) = t.result(v, || name.clone()) else { continue };
            let n64 = n as u64;
            t.item(lower_bound(g) <= v && v <= upper_bound(g), || format!("{name}: bounds fail for f={v}"));
            if !g.cut_vertices().is_empty() {
                t.item(v > n64, || format!("{name}: cut vertex but f={v}"));
            }
            if g.diameter() == 2 {
                t.item(v <= n64 + 1, || format!("{name}: diameter 2 but f={v}"));
            }
            if class0_sufficient(g) {
                t.item(v == n64, || format!("{name}: sufficient condition but f={v}"));
            }
            if let Some(r) = t.result(class0(g, &Options::default()), || name.clone()) {
                t.item(r.holds == (v == n64), || format!("{name}: class0 says {} but f={v}", r.holds));
            }
        }
    }
    t.finish(4, "small-graph laws", format!("{count} connected graphs up to 6 vertices"))
}

pub fn product_laws(cfg: &ReproConfig) -> Check {
    let mut t = Tally::new();
    let k2 = path(2);
    let c3 = cycle(3);
    let plain = Options::default().with_symmetry(true);
    for (name, g1, g2, want) in [("K2xK2", &k2, &k2, 4), ("C3xC3", &c3, &c3, 9)] {
        if let Some(c) = t.result(graham_check(g1, g2, 2, 2, &plain), || name.into()) {
            t.item(c.lhs == want && c.holds, || format!("{name}: f={} bound={}", c.lhs, c.rhs));
        }
    }
    let star = FamilySpec::new(Family::Star, vec![4]).and_then(|s| s.generate());
    if let Some(star) = t.result(star, || "S4".into()) {
        let g = cartesian_product(&path(3), &star);
        if let Some(u) = t.result(max_unsolvable(&g, None, &plain), || "P3xS4".into()) {
            let replay = is_solvable(&g, &u.dist, u.root, &Options::default());
            t.item(u.size >= 17 && replay.as_ref().ok() == Some(&false), || {
                format!("P3xS4: largest unsolvable found has size {}", u.size)
            });
            if !cfg.skip_heavy {
                t.item(u.size + 1 == 18, || format!("P3xS4: f={}", u.size + 1));
            }
        }
    }
    for (dims, pbar, want) in [(vec![2], vec![3], 9), (vec![1, 1], vec![2, 2], 4), (vec![1, 1], vec![3, 3], 9)] {
        let name = format!("grid {dims:?} costs {pbar:?}");
        if let Some((g, costs)) = t.result(weighted_grid(&dims, &pbar), || name.clone()) {
            let got = pebbling_number(&g, Some(0), &Options::default().with_costs(costs));
            if let Some(got) = t.result(got, || name.clone()) {
                t.item(got == want, || format!("{name}: got {got}, want {want}"));
            }
        }
    }
    t.finish(5, "product laws", "all values exact".into())
}

/// The seeded instance list for the zero-sum solver check.
pub fn lemke_instances(seed: u64, count: usize) -> Vec<(Vec<u64>, u64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let q = rng.random_range(2..=60u64);
            let xs = (0..q).map(|_| rng.random_range(1..=1_000_000u64)).collect();
            (xs, q)
        })
        .collect()
}

pub fn lemke_suite(cfg: &ReproConfig, csv: &mut BTreeMap<String, String>) -> Check {
    let mut t = Tally::new();
    let instances = lemke_instances(cfg.seed, 500);
    let outcomes = par::map(instances.clone(), |(xs, q)| -> Result<(Vec<usize>, bool)> {
        let sol = kl::solve(&xs, q)?;
        kl::verify(&xs, q, &sol.indices)?;
        let mut checked = false;
        if q <= 12 {
            kl::replay(&xs, q, &sol.certificate)?;
            let bf = kl::brute_force(&xs, q)?;
            if bf.is_none() {
                return Err(crate::Error::Internal("brute force finds no feasible set".into()));
            }
            checked = true;
        }
        if !kl::erdos_lemke_holds(&xs, q, &sol.indices) {
            return Err(crate::Error::Internal("sum exceeds the lcm bound".into()));
        }
        Ok((sol.indices, checked))
    });
    let mut out = String::from("instance,q,indices\n");
    let mut small = 0;
    for (i, o) in outcomes.into_iter().enumerate() {
        if let Some((indices, checked)) = t.result(o, || format!("instance {i}")) {
            t.item(true, String::new);
            small += checked as usize;
            let idx: Vec<String> = indices.iter().map(|x| x.to_string()).collect();
            let _ = writeln!(out, "{i},{},{}", instances[i].1, idx.join(" "));
        }
    }
    csv.insert("lemke.csv".into(), out);
    t.finish(6, "zero-sum subset solver", format!("{small} instances with q <= 12 cross-checked"))
}

pub fn threshold_suite(cfg: &ReproConfig, csv: &mut BTreeMap<String, String>) -> Check {
    let mut t = Tally::new();
    let scan_cfg = ScanConfig::new(cfg.trials, cfg.trials, cfg.seed);
    let mut exponents = Vec::new();
    let scans: [(&str, Family, &[usize], fn(f64) -> bool, &str); 3] = [
        ("clique", Family::Complete, &[16, 64, 256, 1024], |e| (e - 0.5).abs() <= 0.1, "0.5 +- 0.1"),
        ("star", Family::Star, &[16, 64, 256, 1024], |e| (e - 0.5).abs() <= 0.1, "0.5 +- 0.1"),
        ("path", Family::Path, &[8, 16, 32, 64], |e| e >= 0.8, ">= 0.8"),
    ];
    for (name, family, ns, ok, want) in scans {
        let scan = threshold_scan(|n| Model::for_family(family, n), ns, &scan_cfg);
        if let Some(s) = t.result(scan, || format!("{name} scan")) {
            t.item(ok(s.exponent), || format!("{name} exponent {:.3}, want {want}", s.exponent));
            exponents.push(format!("{name} {:.3}", s.exponent));
            csv.insert(format!("threshold_{name}.csv"), s.curve_csv());
            csv.insert(format!("threshold_{name}_summary.csv"), s.summary_csv());
        }
    }
    for size in [3, 6] {
        let hits = clique_coverage(10, size, 100, cfg.trials, cfg.seed);
        if let Some(h) = t.result(hits, || format!("K10 coverage t={size}")) {
            t.item(h >= 93, || format!("K10 t={size}: {h}/100 intervals cover the exact value"));
            exponents.push(format!("K10 t={size} coverage {h}/100"));
        }
    }
    t.finish(7, "threshold exponents", exponents.join(", "))
}

/// Smallest shadow over all families of each size in BMS[n, w, b], by
/// enumerating every subset of the level.
pub fn min_shadow_by_size(n: u64, w: u64, b: u32) -> Vec<u128> {
    let top = lattice::level(n, w, b);
    let below = lattice::level(n, w - 1, b);
    let masks: Vec<u64> = top
        .iter()
        .map(|m| {
            m.shadow()
                .iter()
                .map(|s| 1u64 << below.iter().position(|x| x == s).expect("shadow lies one level down"))
                .fold(0, |a, x| a | x)
        })
        .collect();
    let mut best = vec![u128::MAX; top.len() + 1];
    for fam in 0u64..(1 << top.len()) {
        let shad = (0..top.len()).filter(|&i| fam >> i & 1 == 1).fold(0u64, |a, i| a | masks[i]);
        let k = fam.count_ones() as usize;
        best[k] = best[k].min(shad.count_ones() as u128);
    }
    best
}

/// Every vector v̄ = (v_1, …, v_s) with v_s ≥ 1, entries ≤ b, s ≤ `max_s`, and
/// weight ≤ `max_w`.
fn vectors(max_s: usize, max_w: u64, b: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for s in 1..=max_s {
        let mut v = vec![0u32; s];
        loop {
            let w: u64 = v.iter().map(|&x| x as u64).sum();
            if v[s - 1] >= 1 && w <= max_w {
                out.push(v.clone());
            }
            let mut i = 0;
            while i < s && v[i] == b {
                v[i] = 0;
                i += 1;
            }
            if i == s {
                break;
            }
            v[i] += 1;
        }
    }
    out
}

pub fn lattice_suite() -> Check {
    let mut t = Tally::new();
    for (n, w, b) in [(3u64, 3u64, 2u32), (4, 3, 1), (3, 2, 3)] {
        let best = min_shadow_by_size(n, w, b);
        for (k, &m) in best.iter().enumerate().skip(1) {
            let seg = lattice::Family::initial_segment(k as u128, w, b);
            let Some(seg) = t.result(seg, || format!("({n},{w},{b}) size {k}")) else { continue };
            if let Some(c) = t.result(lattice::cl_check(&seg), || format!("({n},{w},{b}) size {k}")) {
                t.item(c.shad_actual == m && c.shad_bound == m, || {
                    format!("({n},{w},{b}) size {k}: min {m}, segment {}, bound {}", c.shad_actual, c.shad_bound)
                });
            }
        }
    }
    for b in 1..=3 {
        for v in vectors(4, 4, b) {
            let w: u64 = v.iter().map(|&x| x as u64).sum();
            let sizes = lattice::col(&v, b).and_then(|c| Ok((c, lattice::shadow_col(&v, b)?)));
            let Some((c, sc)) = t.result(sizes, || format!("col {v:?} b={b}")) else { continue };
            let seg = lattice::Family::initial_segment(c, w, b).and_then(|s| s.shadow());
            let lower = lattice::Family::initial_segment(sc, w - 1, b);
            if let (Some(seg), Some(lower)) =
                (t.result(seg, || format!("segment {v:?}")), t.result(lower, || format!("segment {v:?}")))
            {
                t.item(seg == lower, || format!("shadow of segment ending at {v:?} (b={b})"));
            }
        }
    }
    for n in 0..=5 {
        for w in 0..=6 {
            for b in 1..=4 {
                let got = lattice::bmul(n, w, b as u64);
                let want = lattice::level(n, w, b).len() as u128;
                t.item(got == want, || format!("bmul({n},{w},{b}) = {got}, enumeration {want}"));
            }
        }
    }
    let eighteenth = BigRational::new(BigInt::from(1), BigInt::from(18));
    for n in 3..=8u64 {
        for s in 2..n {
            for b in 2..=6 {
                if let Some(g) = t.result(lattice::supernormal_gap(n, b, s), || format!("gap ({n},{b},{s})")) {
                    t.item(g.closed_form == g.explicit && g.closed_form > BigRational::zero(), || {
                        format!("gap ({n},{b},{s}) = {} (explicit {})", g.closed_form, g.explicit)
                    });
                    if (n, b, s) == (3, 2, 2) {
                        t.item(g.closed_form == eighteenth, || format!("gap (3,2,2) = {}", g.closed_form));
                    }
                }
            }
        }
    }
    for (n, b) in [(3u64, 2u32), (4, 1), (2, 3)] {
        for w in 2..=n * b as u64 {
            for u in 1..w {
                if let Some(ok) = t.result(lattice::normal_check(n, b, u, w), || format!("normal ({n},{b},{u},{w})")) {
                    t.item(ok, || format!("normal ({n},{b}) fails between levels {u} and {w}"));
                }
            }
        }
    }
    for b in [2u32, 3] {
        for w in 1..=4u64 {
            for size in 1..=lattice::bmul(5, w, b as u64) {
                let seg = lattice::Family::initial_segment(size, w, b);
                let Some(seg) = t.result(seg, || format!("segment {size} w={w} b={b}")) else { continue };
                if let Some(c) = t.result(lattice::genlov_check(&seg), || format!("genlov {size} w={w} b={b}")) {
                    t.item(c.holds, || format!("genlov size {size} w={w} b={b}: shadow {} < {:.6}", c.shad, c.bound));
                }
            }
        }
    }
    t.finish(8, "multiset lattice", "bounds, identities, and normality confirmed".into())
}

/// Reruns a reduced threshold scan and the P3□S4 search at two worker counts
/// and compares the outputs.
pub fn determinism(cfg: &ReproConfig) -> Check {
    let mut t = Tally::new();
    let run = |jobs: usize| -> Result<String> {
        par::with_jobs(jobs, || {
            let scan_cfg = ScanConfig::new(200, 400, cfg.seed);
            let scan = threshold_scan(|n| Model::for_family(Family::Complete, n), &[16, 64], &scan_cfg)?;
            let star = families::FamilySpec::new(Family::Star, vec![4])?.generate()?;
            let g = cartesian_product(&path(3), &star);
            let u = max_unsolvable(&g, None, &Options::default())?;
            let sols: Vec<String> = lemke_instances(cfg.seed, 50)
                .into_iter()
                .map(|(xs, q)| kl::solve(&xs, q).map(|s| format!("{:?}", s.indices)))
                .collect::<Result<_>>()?;
            Ok(format!("{}{}{:?}\n{}", scan.curve_csv(), scan.summary_csv(), u, sols.join("\n")))
        })
    };
    if let (Some(a), Some(b)) = (t.result(run(1), || "jobs 1".into()), t.result(run(4), || "jobs 4".into())) {
        t.item(a == b, || "outputs differ between 1 and 4 workers".into());
    }
    t.finish(9, "determinism", "1 and 4 workers agree byte for byte".into())
}

/// Runs every criterion in order.
pub fn run(cfg: &ReproConfig) -> Report {
    let mut csv = BTreeMap::new();
    let checks = vec![
        exact_numbers(cfg),
        tree_laws(),
        counterexamples(),
        small_graph_laws(),
        product_laws(cfg),
        lemke_suite(cfg, &mut csv),
        threshold_suite(cfg, &mut csv),
        lattice_suite(),
        determinism(cfg),
    ];
    let mut report = Report { checks, csv };
    let results = report.results_csv();
    report.csv.insert("acceptance.csv".into(), results);
    report
}
