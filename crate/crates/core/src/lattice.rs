//! Bounded multisets: colex order, shadows, counting functions, and the
//! shadow bounds and normality checks built on them.
//!
//! A multiset over the symbols 1, 2, … is a multiplicity vector
//! (m_1, …, m_l) with trailing zeros trimmed. Within one weight, colex order
//! is numeric order of the key C(M) = Σ m_i (b+1)^{i−1}.
//!
//! A colex initial segment is described by its last member v̄ = (v_1, …, v_s):
//! col[v̄, b] is the segment's size and, with r the first nonzero position of
//! v̄, the shadow of the segment is the initial segment ending at v̄ − e_r.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{invalid, Error, Result};

/// C(n, k) for small arguments.
pub fn bin(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) as u128 / (i + 1) as u128;
    }
    r
}

/// Number of weight-w multisets over n symbols, C(n + w − 1, w).
pub fn mul(n: u64, w: u64) -> u128 {
    if n == 0 {
        return (w == 0) as u128;
    }
    bin(n + w - 1, w)
}

/// Number of weight-w multisets over n symbols with multiplicities at most b.
pub fn bmul(n: u64, w: u64, b: u64) -> u128 {
    let mut total: i128 = 0;
    for i in 0..=w / (b + 1) {
        let term = (bin(n, i) * mul(n, w - i * (b + 1))) as i128;
        total += if i % 2 == 0 { term } else { -term };
    }
    total.max(0) as u128
}

/// bmul with a real first argument, from the same alternating sum with the
/// binomials read as polynomials.
pub fn bmul_real(x: f64, w: u64, b: u64) -> f64 {
    let falling = |k: u64| (0..k).fold(1.0, |acc, i| acc * (x - i as f64) / (i + 1) as f64);
    let rising = |k: u64| (0..k).fold(1.0, |acc, i| acc * (x + i as f64) / (i + 1) as f64);
    (0..=w / (b + 1))
        .map(|i| {
            let t = falling(i) * rising(w - i * (b + 1));
            if i % 2 == 0 {
                t
            } else {
                -t
            }
        })
        .sum()
}

/// The real x with bmul[x, w, b] = f: the least integer N with
/// bmul[N, w, b] ≥ f, refined by bisection on [N − 1, N].
pub fn solve_x(f: u128, w: u64, b: u64) -> Result<f64> {
    if f == 0 || b == 0 {
        return invalid("need f >= 1 and b >= 1");
    }
    if w == 0 {
        return invalid("weight 0 has a single member; x is undetermined");
    }
    let mut n = 0u64;
    while bmul(n, w, b) < f {
        n += 1;
        if n > 1 << 20 {
            return Err(Error::ResourceLimit { lo: n, hi: None });
        }
    }
    if bmul(n, w, b) == f {
        return Ok(n as f64);
    }
    let target = f as f64;
    let (mut lo, mut hi) = ((n - 1) as f64, n as f64);
    while hi - lo > 1e-12 {
        let mid = (lo + hi) / 2.0;
        if bmul_real(mid, w, b) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(hi)
}

/// A bounded multiset. Multiplicities are stored with trailing zeros removed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BoundedMultiset {
    mult: Vec<u32>,
    b: u32,
}

impl BoundedMultiset {
    pub fn new(mut mult: Vec<u32>, b: u32) -> Result<Self> {
        if b == 0 {
            return invalid("bound must be at least 1");
        }
        if mult.iter().any(|&m| m > b) {
            return invalid("multiplicity exceeds the bound");
        }
        while mult.last() == Some(&0) {
            mult.pop();
        }
        Ok(BoundedMultiset { mult, b })
    }

    pub fn mult(&self) -> &[u32] {
        &self.mult
    }

    pub fn bound(&self) -> u32 {
        self.b
    }

    pub fn weight(&self) -> u64 {
        self.mult.iter().map(|&m| m as u64).sum()
    }

    /// C(M) = Σ m_i (b+1)^{i−1}.
    pub fn key(&self) -> BigUint {
        let base = BigUint::from(self.b + 1);
        self.mult
            .iter()
            .rev()
            .fold(BigUint::zero(), |acc, &m| acc * &base + BigUint::from(m))
    }

    /// All multisets of weight one less that it dominates coordinatewise.
    pub fn shadow(&self) -> Vec<BoundedMultiset> {
        let mut out: Vec<BoundedMultiset> = (0..self.mult.len())
            .filter(|&i| self.mult[i] > 0)
            .map(|i| {
                let mut m = self.mult.clone();
                m[i] -= 1;
                BoundedMultiset::new(m, self.b).expect("still bounded")
            })
            .collect();
        out.sort_by_key(|m| m.key());
        out
    }
}

/// Colex rank (0-based) of `m` within BMS[weight(m), b].
pub fn rank(m: &BoundedMultiset) -> u128 {
    let b = m.b as u64;
    let mut prefix = 0u64;
    let mut r = 0u128;
    for (j, &mj) in m.mult.iter().enumerate() {
        prefix += mj as u64;
        for v in 0..mj as u64 {
            r += bmul(j as u64, prefix - v, b);
        }
    }
    r
}

/// The member of BMS[w, b] with colex rank `index`.
pub fn unrank(index: u128, w: u64, b: u32) -> Result<BoundedMultiset> {
    if b == 0 {
        return invalid("bound must be at least 1");
    }
    let bb = b as u64;
    if w == 0 {
        return if index == 0 { BoundedMultiset::new(vec![], b) } else { invalid("rank out of range") };
    }
    // top symbol: least l with more than `index` members inside [l]
    let mut l = 1u64;
    while bmul(l, w, bb) <= index {
        l += 1;
        if l > 4096 {
            return invalid("rank out of range");
        }
    }
    let mut mult = vec![0u32; l as usize];
    let mut rest = w;
    let mut idx = index;
    for j in (1..=l).rev() {
        let mut v = 0u64;
        loop {
            if v > bb || v > rest {
                return Err(Error::Internal("unrank overran a position".into()));
            }
            let below = bmul(j - 1, rest - v, bb);
            if idx < below {
                break;
            }
            idx -= below;
            v += 1;
        }
        mult[j as usize - 1] = v as u32;
        rest -= v;
    }
    BoundedMultiset::new(mult, b)
}

/// The first `f` members of BMS[w, b] in colex order.
pub fn first_f(f: u128, w: u64, b: u32) -> Result<Vec<BoundedMultiset>> {
    (0..f).map(|i| unrank(i, w, b)).collect()
}

/// Size of the colex initial segment ending at v̄.
pub fn col(v: &[u32], b: u32) -> Result<u128> {
    Ok(rank(&BoundedMultiset::new(v.to_vec(), b)?) + 1)
}

/// Size of the shadow of the colex initial segment ending at v̄.
pub fn shadow_col(v: &[u32], b: u32) -> Result<u128> {
    let Some(r) = v.iter().position(|&x| x > 0) else {
        return invalid("the empty multiset has no shadow");
    };
    let mut lower = v.to_vec();
    lower[r] -= 1;
    col(&lower, b)
}

/// The last member v̄ of the initial segment of size `f` in BMS[w, b].
pub fn decompose(f: u128, w: u64, b: u32) -> Result<Vec<u32>> {
    if f == 0 {
        return invalid("an empty family has no last member");
    }
    Ok(unrank(f - 1, w, b)?.mult)
}

/// A family of multisets of one weight and bound, kept sorted by colex key.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Family {
    pub w: u64,
    pub b: u32,
    members: Vec<BoundedMultiset>,
}

impl Family {
    pub fn new(w: u64, b: u32, members: impl IntoIterator<Item = BoundedMultiset>) -> Result<Self> {
        let mut members: Vec<BoundedMultiset> = members.into_iter().collect();
        if members.iter().any(|m| m.weight() != w || m.b != b) {
            return invalid("family members must share weight and bound");
        }
        members.sort_by_key(|m| m.key());
        members.dedup();
        Ok(Family { w, b, members })
    }

    /// Family from 0-based colex ranks.
    pub fn from_ranks(w: u64, b: u32, ranks: &[u128]) -> Result<Self> {
        Family::new(w, b, ranks.iter().map(|&r| unrank(r, w, b)).collect::<Result<Vec<_>>>()?)
    }

    pub fn initial_segment(f: u128, w: u64, b: u32) -> Result<Self> {
        Family::new(w, b, first_f(f, w, b)?)
    }

    pub fn members(&self) -> &[BoundedMultiset] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn ranks(&self) -> Vec<u128> {
        self.members.iter().map(rank).collect()
    }

    pub fn shadow(&self) -> Result<Family> {
        if self.w == 0 {
            return invalid("weight-0 families have no shadow");
        }
        Family::new(self.w - 1, self.b, self.members.iter().flat_map(|m| m.shadow()))
    }
}

/// Shadow size against the bound of the shadow-size theorem for multisets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClCheck {
    /// Last member of the colex segment with the family's size.
    pub v: Vec<u32>,
    pub shad_actual: u128,
    pub shad_bound: u128,
    pub holds: bool,
}

pub fn cl_check(f: &Family) -> Result<ClCheck> {
    if f.w == 0 {
        return invalid("weight-0 families have no shadow");
    }
    let shad_actual = f.shadow()?.len() as u128;
    if f.is_empty() {
        return Ok(ClCheck { v: vec![], shad_actual, shad_bound: 0, holds: true });
    }
    let v = decompose(f.len() as u128, f.w, f.b)?;
    let shad_bound = shadow_col(&v, f.b)?;
    Ok(ClCheck { v, shad_actual, shad_bound, holds: shad_actual >= shad_bound })
}

/// Real-parameter shadow bound: x solves bmul[x, w, b] = |F|, the bound is
/// bmul[x, w−1, b].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LovaszCheck {
    pub x: f64,
    pub bound: f64,
    pub shad: u128,
    pub holds: bool,
}

pub fn genlov_check(f: &Family) -> Result<LovaszCheck> {
    if f.is_empty() {
        return invalid("family must be nonempty");
    }
    let x = solve_x(f.len() as u128, f.w, f.b as u64)?;
    let bound = bmul_real(x, f.w - 1, f.b as u64);
    let shad = f.shadow()?.len() as u128;
    Ok(LovaszCheck { x, bound, shad, holds: shad as f64 >= bound - 1e-6 })
}

fn ratio(a: u128, b: u128) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

/// All weight-w multisets over n symbols with multiplicities at most b.
pub fn level(n: u64, w: u64, b: u32) -> Vec<BoundedMultiset> {
    fn go(i: usize, rest: u64, b: u32, cur: &mut Vec<u32>, out: &mut Vec<BoundedMultiset>) {
        if i == cur.len() {
            if rest == 0 {
                out.push(BoundedMultiset::new(cur.clone(), b).expect("bounded"));
            }
            return;
        }
        for m in 0..=(b as u64).min(rest) {
            cur[i] = m as u32;
            go(i + 1, rest - m, b, cur, out);
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    go(0, w, b, &mut vec![0; n as usize], &mut out);
    out.sort_by_key(|m| m.key());
    out
}

/// |BMS[n, w, b]| as the coefficient of x^w in (1 + x + … + x^b)^n.
pub fn level_count(n: u64, w: u64, b: u32) -> u128 {
    let mut poly = vec![1u128];
    for _ in 0..n {
        let mut next = vec![0u128; poly.len() + b as usize];
        for (i, &c) in poly.iter().enumerate() {
            for j in 0..=b as usize {
                next[i + j] += c;
            }
        }
        poly = next;
    }
    poly.get(w as usize).copied().unwrap_or(0)
}

/// p(F)^{b−1} − p(Shad F)^b for F the colex segment ending at b copies of
/// symbol s, inside the lattice of b-bounded multisets over n symbols,
/// computed from the closed forms and, independently, from explicit families.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupernormalGap {
    pub closed_form: BigRational,
    pub explicit: BigRational,
}

pub fn supernormal_gap(n: u64, b: u32, s: u64) -> Result<SupernormalGap> {
    if !(2 <= s && s < n && b >= 2) {
        return invalid("need 2 <= s < n and b >= 2");
    }
    let bb = b as u64;
    let pf = ratio(bin(s + bb - 1, bb), bin(n + bb - 1, bb));
    let ps = ratio(bin(s + bb - 2, bb - 1), bin(n + bb - 2, bb - 1));
    let closed_form = pow(&pf, b - 1) - pow(&ps, b);

    let mut v = vec![0u32; s as usize];
    v[s as usize - 1] = b;
    let fam = Family::initial_segment(col(&v, b)?, bb, b)?;
    if fam.members().iter().any(|m| m.mult().len() as u64 > n) {
        return Err(Error::Internal("segment leaves the ground set".into()));
    }
    let shad = fam.shadow()?;
    let pf = ratio(fam.len() as u128, level_count(n, bb, b));
    let ps = ratio(shad.len() as u128, level_count(n, bb - 1, b));
    let explicit = pow(&pf, b - 1) - pow(&ps, b);
    Ok(SupernormalGap { closed_form, explicit })
}

fn pow(x: &BigRational, e: u32) -> BigRational {
    (0..e).fold(BigRational::one(), |acc, _| acc * x)
}

/// Normalized matching between levels u < w of the b-bounded lattice on n
/// symbols: for every size f of a family at level w, the smallest possible
/// (w−u)-fold shadow, found by iterating shadows of the colex segment,
/// satisfies p(F_u) ≥ p(F_w).
pub fn normal_check(n: u64, b: u32, u: u64, w: u64) -> Result<bool> {
    if !(0 < u && u < w && w <= n * b as u64) {
        return invalid("need 0 < u < w <= n*b");
    }
    let top = level(n, w, b).len() as u128;
    let bottom = level(n, u, b).len() as u128;
    if top > 100_000 {
        return Err(Error::ResourceLimit { lo: 0, hi: None });
    }
    for f in 1..=top {
        let mut fam = Family::initial_segment(f, w, b)?;
        for _ in u..w {
            fam = fam.shadow()?;
        }
        if ratio(fam.len() as u128, bottom) < ratio(f, top) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ms(m: &[u32], b: u32) -> BoundedMultiset {
        BoundedMultiset::new(m.to_vec(), b).unwrap()
    }

    #[test]
    fn counting_identities() {
        for n in 0..=8 {
            for w in 0..=8 {
                assert_eq!(bmul(n, w, 1), bin(n, w));
                assert_eq!(bmul(n, w, w.max(1)), mul(n, w));
            }
        }
        assert_eq!(bmul(4, 4, 3), 31);
        assert!((bmul_real(5.0, 2, 1) - 10.0).abs() < 1e-12);
    }

    #[test]
    fn colex_orders() {
        // b = 1, w = 2: {1,2}, {1,3}, {2,3}, {1,4}
        let got: Vec<Vec<u32>> = first_f(4, 2, 1).unwrap().into_iter().map(|m| m.mult).collect();
        assert_eq!(got, vec![vec![1, 1], vec![1, 0, 1], vec![0, 1, 1], vec![1, 0, 0, 1]]);
        // b = 2, w = 2: {1,1}, {1,2}, {2,2}, {1,3}
        let got: Vec<Vec<u32>> = first_f(4, 2, 2).unwrap().into_iter().map(|m| m.mult).collect();
        assert_eq!(got, vec![vec![2], vec![1, 1], vec![0, 2], vec![1, 0, 1]]);
        assert_eq!(unrank(0, 0, 3).unwrap().weight(), 0);
        assert_eq!(rank(&ms(&[], 3)), 0);
    }

    #[test]
    fn rank_unrank_round_trip() {
        for b in 1..=4 {
            for w in 0..=5u64 {
                for i in 0..bmul(6, w, b as u64) {
                    let m = unrank(i, w, b).unwrap();
                    assert_eq!(rank(&m), i);
                    assert_eq!(m.weight(), w);
                }
            }
        }
    }

    #[test]
    fn shadows() {
        assert_eq!(ms(&[2], 2).shadow(), vec![ms(&[1], 2)]);
        assert_eq!(ms(&[1, 1], 2).shadow(), vec![ms(&[1], 2), ms(&[0, 1], 2)]);
    }

    #[test]
    fn segment_shadow_identity() {
        let v = [1, 0, 2];
        let b = 2;
        let seg = Family::initial_segment(col(&v, b).unwrap(), 3, b).unwrap();
        assert_eq!(seg.members().last().unwrap().mult(), &v);
        let shad = seg.shadow().unwrap();
        assert_eq!(shad.len() as u128, shadow_col(&v, b).unwrap());
        assert_eq!(shad, Family::initial_segment(shad.len() as u128, 2, b).unwrap());
    }

    #[test]
    fn solve_x_examples() {
        assert_eq!(solve_x(10, 2, 1).unwrap(), 5.0);
        let x = solve_x(12, 2, 1).unwrap();
        assert!((bmul_real(x, 2, 1) - 12.0).abs() < 1e-6);
        assert!(x > 5.0 && x < 6.0);
    }

    #[test]
    fn full_level_lovasz_equality() {
        let f = Family::initial_segment(bin(5, 3), 3, 1).unwrap();
        let c = genlov_check(&f).unwrap();
        assert_eq!(c.x, 5.0);
        assert_eq!(c.shad, 10);
        assert!(c.holds);
    }

    #[test]
    fn gap_example() {
        let g = supernormal_gap(3, 2, 2).unwrap();
        assert_eq!(g.closed_form, ratio(1, 18));
        assert_eq!(g.explicit, g.closed_form);
        assert!(supernormal_gap(3, 2, 3).is_err());
    }

    #[test]
    fn normal_small() {
        for w in 2..=6 {
            for u in 1..w {
                assert!(normal_check(3, 2, u, w).unwrap());
            }
        }
    }

    #[test]
    fn cl_on_segment_is_tight() {
        let f = Family::initial_segment(5, 3, 2).unwrap();
        let c = cl_check(&f).unwrap();
        assert!(c.holds);
        assert_eq!(c.shad_actual, c.shad_bound);
    }
}
