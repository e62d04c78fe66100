//! Monte Carlo estimates of the probability that a uniformly random
//! distribution of t pebbles on n vertices is solvable, and threshold scans
//! over graph sequences.
//!
//! Trial `i` of the probe (n, t) draws from its own ChaCha stream keyed by
//! (seed, n, t, i), so results do not depend on how trials are scheduled.

use std::fmt::Write as _;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{invalid, Error, Result};
use crate::families::{self, FamilySpec};
use crate::graph::Graph;
use crate::par;
use crate::solver::{solvable, Options, Target};
use crate::PebbleDistribution;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrialConfig {
    pub trials: u64,
    pub seed: u64,
    pub confidence: f64,
}

impl TrialConfig {
    pub fn new(trials: u64, seed: u64) -> Self {
        TrialConfig { trials, seed, confidence: 0.95 }
    }

    fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return invalid("need at least one trial");
        }
        if !(self.confidence > 0.0 && self.confidence < 1.0) {
            return invalid("confidence must lie strictly between 0 and 1");
        }
        Ok(())
    }
}

/// One probe of a threshold curve.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurveRow {
    pub n: usize,
    pub t: u64,
    pub trials: u64,
    pub successes: u64,
    /// Trials the solver could not decide within its budget.
    pub undecided: u64,
    pub phat: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
}

pub const CURVE_HEADER: &str = "n,t,trials,successes,phat,ci_lo,ci_hi";

impl CurveRow {
    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{:.6},{:.6},{:.6}",
            self.n, self.t, self.trials, self.successes, self.phat, self.ci_lo, self.ci_hi
        )
    }
}

/// The random stream for one trial.
pub fn trial_rng(seed: u64, n: usize, t: u64, trial: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&(n as u64).to_le_bytes());
    key[16..24].copy_from_slice(&t.to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(trial);
    rng
}

/// Uniform weak composition of `t` into `n` parts: choose n − 1 bar positions
/// among t + n − 1 slots.
pub fn sample_distribution<R: Rng + ?Sized>(n: usize, t: u64, rng: &mut R) -> PebbleDistribution {
    assert!(n >= 1, "need at least one vertex");
    let slots = t as usize + n - 1;
    let mut bars = index::sample(rng, slots, n - 1).into_vec();
    bars.sort_unstable();
    let mut counts = Vec::with_capacity(n);
    let mut prev = 0usize;
    for (i, &b) in bars.iter().enumerate() {
        counts.push((b - i - prev) as u32);
        prev = b - i;
    }
    counts.push((t as usize - prev) as u32);
    PebbleDistribution(counts)
}

/// Solvability for every root, by a family-specific rule or by exact search.
#[derive(Clone, Debug)]
pub enum Model {
    Clique,
    /// Center is vertex 0.
    Star,
    /// Hub is vertex 0, rim 1..n−1 in cyclic order.
    Wheel,
    Path,
    Exact(Graph, Option<u64>),
}

impl Model {
    /// The model for the `n`-vertex member of a family.
    pub fn for_family(family: families::Family, n: usize) -> Result<Model> {
        use families::Family::*;
        Ok(match family {
            Complete => Model::Clique,
            Star => Model::Star,
            Wheel => Model::Wheel,
            Path => Model::Path,
            f => Model::Exact(FamilySpec::new(f, vec![n])?.generate()?, None),
        })
    }

    /// `Some(answer)`, or `None` if exact search ran out of budget.
    pub fn solvable(&self, d: &[u32]) -> Result<Option<bool>> {
        Ok(Some(match self {
            Model::Clique => clique_solvable(d),
            Model::Star => star_solvable(d),
            Model::Wheel => wheel_solvable(d),
            Model::Path => path_solvable(d),
            Model::Exact(g, budget) => {
                let opts = Options { max_expansions: *budget, ..Options::default() };
                match solvable(g, &PebbleDistribution(d.to_vec()), Target::AllRoots, &opts) {
                    Ok(s) => s.solvable,
                    Err(Error::ResourceLimit { .. }) => return Ok(None),
                    Err(e) => return Err(e),
                }
            }
        }))
    }
}

/// K_n: a root without a pebble needs some vertex holding two.
pub fn clique_solvable(d: &[u32]) -> bool {
    d.iter().all(|&c| c >= 1) || d.iter().any(|&c| c >= 2)
}

/// K_{1,n−1} with center 0.
pub fn star_solvable(d: &[u32]) -> bool {
    let (center, leaves) = (d[0], &d[1..]);
    let to_center = center >= 1 || leaves.iter().any(|&c| c >= 2);
    let gather = center as u64 + leaves.iter().map(|&c| (c / 2) as u64).sum::<u64>();
    to_center && (leaves.iter().all(|&c| c >= 1) || gather >= 2)
}

/// Wheel with hub 0 and rim 1..n−1.
pub fn wheel_solvable(d: &[u32]) -> bool {
    let hub = d[0];
    let rim = &d[1..];
    let m = rim.len();
    if hub == 0 && rim.iter().all(|&c| c < 2) {
        return false;
    }
    let gather = hub as u64 + rim.iter().map(|&c| (c / 2) as u64).sum::<u64>();
    if gather >= 2 {
        // hub reaches 2 pebbles, then any rim root is one step away
        return true;
    }
    // At most one rim vertex v holds two or three pebbles and the hub is
    // empty or holds one pebble with no rim vertex above one.
    let Some(v) = (0..m).find(|&i| rim[i] >= 2) else {
        // hub has one pebble, rim all at most one: no step is possible
        return rim.iter().all(|&c| c >= 1);
    };
    // root rho is reached iff rho has a pebble or v can push one along a run
    // of single pebbles ending next to rho
    (0..m).all(|rho| {
        if rim[rho] >= 1 {
            return true;
        }
        [1, m - 1].iter().any(|&step| {
            let mut i = (rho + step) % m;
            loop {
                if i == v {
                    return true;
                }
                if rim[i] != 1 {
                    return false;
                }
                i = (i + step) % m;
            }
        })
    })
}

/// Path 0..n−1: pebbles can only usefully flow toward the root, so carry
/// halves in from each side.
pub fn path_solvable(d: &[u32]) -> bool {
    let n = d.len();
    let mut from_left = vec![0u64; n];
    for i in 1..n {
        from_left[i] = (d[i - 1] as u64 + from_left[i - 1]) / 2;
    }
    let mut from_right = 0u64;
    for i in (0..n).rev() {
        if d[i] == 0 && from_left[i] == 0 && from_right == 0 {
            return false;
        }
        from_right = (d[i] as u64 + from_right) / 2;
    }
    true
}

/// Wilson score interval for `successes` out of `trials`.
pub fn wilson(successes: u64, trials: u64, confidence: f64) -> (f64, f64) {
    let z = Normal::standard().inverse_cdf(1.0 - (1.0 - confidence) / 2.0);
    let nf = trials as f64;
    let p = successes as f64 / nf;
    let z2 = z * z;
    let denom = 1.0 + z2 / nf;
    let center = (p + z2 / (2.0 * nf)) / denom;
    let half = z / denom * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt();
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Estimates P(random size-`t` distribution on `n` vertices is solvable).
pub fn estimate(model: &Model, n: usize, t: u64, cfg: &TrialConfig) -> Result<CurveRow> {
    cfg.validate()?;
    if n == 0 {
        return invalid("need at least one vertex");
    }
    let outcomes = par::map_range(cfg.trials as usize, |i| {
        let mut rng = trial_rng(cfg.seed, n, t, i as u64);
        let d = sample_distribution(n, t, &mut rng);
        model.solvable(d.counts())
    });
    let (mut successes, mut undecided) = (0, 0);
    for o in outcomes {
        match o? {
            Some(true) => successes += 1,
            Some(false) => {}
            None => undecided += 1,
        }
    }
    let decided = cfg.trials - undecided;
    let (phat, ci_lo, ci_hi) = if decided == 0 {
        (0.0, 0.0, 1.0)
    } else {
        let (lo, hi) = wilson(successes, decided, cfg.confidence);
        (successes as f64 / decided as f64, lo, hi)
    };
    Ok(CurveRow { n, t, trials: cfg.trials, successes, undecided, phat, ci_lo, ci_hi })
}

/// Exact probability that a uniform size-`t` distribution on K_n is
/// solvable: 1 − C(n,t)/C(t+n−1,n−1) for t < n, and 1 otherwise.
pub fn clique_exact(n: usize, t: u64) -> BigRational {
    let one = BigRational::from_integer(1.into());
    if t >= n as u64 {
        return one;
    }
    let bad = binomial(n as u64, t);
    let all = binomial(t + n as u64 - 1, n as u64 - 1);
    one - BigRational::new(bad.into(), all.into())
}

fn binomial(n: u64, k: u64) -> BigUint {
    let mut r = BigUint::from(1u32);
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

/// Scan parameters: probes during the search use `coarse_trials`, the final
/// bracket `final_trials`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScanConfig {
    pub coarse_trials: u64,
    pub final_trials: u64,
    pub seed: u64,
    pub confidence: f64,
    pub target: f64,
}

impl ScanConfig {
    pub fn new(coarse_trials: u64, final_trials: u64, seed: u64) -> Self {
        ScanConfig { coarse_trials, final_trials, seed, confidence: 0.95, target: 0.5 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanResult {
    /// Every probe in the order it was made.
    pub rows: Vec<CurveRow>,
    pub t_half: Vec<(usize, f64)>,
    pub exponent: f64,
    /// Some pair of final probes is out of order by more than their
    /// confidence intervals allow.
    pub non_monotone: bool,
}

impl ScanResult {
    pub fn curve_csv(&self) -> String {
        let mut s = String::from(CURVE_HEADER);
        s.push('\n');
        for r in &self.rows {
            s.push_str(&r.to_csv());
            s.push('\n');
        }
        s
    }

    pub fn summary_csv(&self) -> String {
        let mut s = String::from("n,t_half\n");
        for (n, t) in &self.t_half {
            let _ = writeln!(s, "{n},{t:.6}");
        }
        s
    }
}

/// Locates, for each n, the pebble count where the solvability probability
/// crosses `cfg.target`, and fits log t_half against log n.
pub fn threshold_scan<F>(model_for: F, n_list: &[usize], cfg: &ScanConfig) -> Result<ScanResult>
where
    F: Fn(usize) -> Result<Model>,
{
    if n_list.len() < 2 {
        return invalid("need at least two values of n to fit an exponent");
    }
    if !(cfg.target > 0.0 && cfg.target < 1.0) {
        return invalid("target probability must lie strictly between 0 and 1");
    }
    let mut rows = Vec::new();
    let mut t_half = Vec::new();
    let mut non_monotone = false;
    for &n in n_list {
        let model = model_for(n)?;
        let coarse = TrialConfig { trials: cfg.coarse_trials, seed: cfg.seed, confidence: cfg.confidence };
        let fine = TrialConfig { trials: cfg.final_trials, ..coarse };
        let mut probe = |t: u64, c: &TrialConfig| -> Result<CurveRow> {
            let row = estimate(&model, n, t, c)?;
            if row.undecided > 0 {
                return Err(Error::ResourceLimit { lo: 0, hi: None });
            }
            rows.push(row);
            Ok(row)
        };
        // exponential search for a t with p̂ ≥ target, then bisection
        let (mut lo, mut hi) = (0u64, 1u64);
        while probe(hi, &coarse)?.phat < cfg.target {
            lo = hi;
            hi = hi.checked_mul(2).ok_or_else(|| Error::Internal("threshold search diverged".into()))?;
        }
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if probe(mid, &coarse)?.phat >= cfg.target {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let ts: Vec<u64> = [lo.saturating_sub(1), lo, hi, hi + 1]
            .into_iter()
            .filter(|&t| t >= 1)
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .collect();
        let finals: Vec<CurveRow> = ts.iter().map(|&t| probe(t, &fine)).collect::<Result<_>>()?;
        non_monotone |= finals.windows(2).any(|w| w[1].ci_hi < w[0].ci_lo);
        let smooth = isotonic(&finals.iter().map(|r| (r.phat, r.trials as f64)).collect::<Vec<_>>());
        t_half.push((n, crossing(&ts, &smooth, cfg.target)));
    }
    let xs: Vec<f64> = t_half.iter().map(|&(n, _)| (n as f64).ln()).collect();
    let ys: Vec<f64> = t_half.iter().map(|&(_, t)| t.ln()).collect();
    Ok(ScanResult { rows, t_half, exponent: slope(&xs, &ys), non_monotone })
}

/// Pool-adjacent-violators fit of a nondecreasing sequence to weighted values.
pub fn isotonic(points: &[(f64, f64)]) -> Vec<f64> {
    // blocks of (mean, weight, count)
    let mut blocks: Vec<(f64, f64, usize)> = Vec::new();
    for &(y, w) in points {
        blocks.push((y, w, 1));
        while blocks.len() > 1 && blocks[blocks.len() - 2].0 > blocks[blocks.len() - 1].0 {
            let (y2, w2, c2) = blocks.pop().unwrap();
            let (y1, w1, c1) = blocks.pop().unwrap();
            blocks.push(((y1 * w1 + y2 * w2) / (w1 + w2), w1 + w2, c1 + c2));
        }
    }
    blocks.into_iter().flat_map(|(y, _, c)| std::iter::repeat_n(y, c)).collect()
}

/// Linear interpolation of the first crossing of `target` by a nondecreasing
/// sequence sampled at `ts`.
fn crossing(ts: &[u64], ps: &[f64], target: f64) -> f64 {
    match ps.iter().position(|&p| p >= target) {
        None => *ts.last().unwrap() as f64,
        Some(0) => ts[0] as f64,
        Some(i) => {
            let (t0, t1) = (ts[i - 1] as f64, ts[i] as f64);
            let (p0, p1) = (ps[i - 1], ps[i]);
            if p1 > p0 {
                t0 + (target - p0) / (p1 - p0) * (t1 - t0)
            } else {
                (t0 + t1) / 2.0
            }
        }
    }
}

/// Least-squares slope of `ys` against `xs`.
pub fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Runs `runs` independent estimates of P(K_n solvable) at size `t`, each
/// with its own derived seed, and counts how often the exact value falls
/// inside the run's confidence interval.
pub fn clique_coverage(n: usize, t: u64, runs: u64, trials: u64, seed: u64) -> Result<u64> {
    let exact = clique_exact(n, t).to_f64().unwrap_or(f64::NAN);
    let mut hits = 0;
    for run in 0..runs {
        let run_seed = trial_rng(seed, usize::MAX, t, run).random::<u64>();
        let row = estimate(&Model::Clique, n, t, &TrialConfig::new(trials, run_seed))?;
        if row.ci_lo <= exact && exact <= row.ci_hi {
            hits += 1;
        }
    }
    Ok(hits)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sampler_shapes() {
        let mut rng = trial_rng(1, 1, 5, 0);
        assert_eq!(sample_distribution(1, 5, &mut rng).0, vec![5]);
        for t in 0..6 {
            let d = sample_distribution(4, t, &mut rng);
            assert_eq!((d.len(), d.size()), (4, t));
        }
    }

    #[test]
    fn sampler_is_deterministic() {
        let a = sample_distribution(6, 9, &mut trial_rng(7, 6, 9, 3));
        let b = sample_distribution(6, 9, &mut trial_rng(7, 6, 9, 3));
        assert_eq!(a, b);
    }

    #[test]
    fn wilson_contains_phat() {
        let (lo, hi) = wilson(30, 100, 0.95);
        assert!(lo < 0.3 && 0.3 < hi);
        assert!((lo - 0.2189).abs() < 1e-3 && (hi - 0.3958).abs() < 1e-3);
        assert!(wilson(0, 10, 0.95).0 < 1e-12);
    }

    #[test]
    fn clique_exact_values() {
        assert_eq!(clique_exact(10, 3), BigRational::new(5.into(), 11.into()));
        assert_eq!(clique_exact(10, 6), BigRational::new(685.into(), 715.into()));
        assert_eq!(clique_exact(4, 4), BigRational::from_integer(1.into()));
    }

    #[test]
    fn isotonic_pools_violations() {
        let out = isotonic(&[(0.1, 1.0), (0.5, 1.0), (0.3, 1.0), (0.9, 2.0)]);
        assert_eq!(out, vec![0.1, 0.4, 0.4, 0.9]);
    }

    #[test]
    fn crossing_interpolates() {
        assert_eq!(crossing(&[2, 3, 4], &[0.2, 0.4, 0.8], 0.5), 3.25);
    }

    #[test]
    fn trivial_probes() {
        let g = families::cycle(5);
        let m = Model::Exact(g, None);
        assert_eq!(estimate(&m, 5, 1, &TrialConfig::new(50, 3)).unwrap().successes, 0);
        assert_eq!(estimate(&m, 5, 5, &TrialConfig::new(50, 3)).unwrap().successes, 50);
    }

    #[test]
    fn path_rule_examples() {
        assert!(path_solvable(&[0, 0, 0, 8]));
        assert!(!path_solvable(&[0, 0, 0, 7]));
        assert!(path_solvable(&[1, 1, 1]));
        assert!(path_solvable(&[0, 3, 0]));
        assert!(!path_solvable(&[3, 0, 0]));
        assert!(path_solvable(&[0, 4, 0]));
    }
}
