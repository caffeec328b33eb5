//! Polynomials and the K-polynomials K^{λ,ν}(z).

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::Add;

use crate::diagrams::{arcs, diagram_of, Arch, WeightDiagram};
use crate::error::{Error, Result};
use crate::halfint::HalfInt;
use crate::weights::{
    check_weight, tail, tau_preimage, validate_weight, AlgebraContext, BlockWeight, Family,
};

/// A polynomial in z with nonnegative integer coefficients, lowest power
/// first, no trailing zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KPoly(Vec<u64>);

impl KPoly {
    pub fn zero() -> Self {
        KPoly(Vec::new())
    }

    pub fn one() -> Self {
        KPoly(vec![1])
    }

    /// c·z^e
    pub fn monomial(e: usize, c: u64) -> Self {
        let mut v = vec![0; e + 1];
        v[e] = c;
        KPoly::from_coeffs(v)
    }

    pub fn from_coeffs(mut v: Vec<u64>) -> Self {
        while v.last() == Some(&0) {
            v.pop();
        }
        KPoly(v)
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coeff(&self, e: usize) -> u64 {
        self.0.get(e).copied().unwrap_or(0)
    }

    pub fn constant(&self) -> u64 {
        self.coeff(0)
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    /// Nonzero terms (exponent, coefficient), ascending.
    pub fn terms(&self) -> Vec<(usize, u64)> {
        self.0.iter().enumerate().filter(|(_, &c)| c != 0).map(|(e, &c)| (e, c)).collect()
    }

    /// Multiplies by z.
    pub fn times_z(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut v = vec![0];
        v.extend_from_slice(&self.0);
        KPoly(v)
    }

    pub fn eval_minus_one(&self) -> i64 {
        self.0.iter().enumerate().map(|(e, &c)| if e % 2 == 0 { c as i64 } else { -(c as i64) }).sum()
    }
}

impl Add for KPoly {
    type Output = KPoly;
    fn add(self, o: KPoly) -> KPoly {
        let len = self.0.len().max(o.0.len());
        KPoly::from_coeffs((0..len).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
}

fn write_terms(f: &mut fmt::Formatter<'_>, terms: &[(usize, u64)]) -> fmt::Result {
    if terms.is_empty() {
        return f.write_str("0");
    }
    for (i, &(e, c)) in terms.iter().enumerate() {
        if i > 0 {
            f.write_str("+")?;
        }
        match (e, c) {
            (0, c) => write!(f, "{c}")?,
            (1, 1) => f.write_str("z")?,
            (1, c) => write!(f, "{c}z")?,
            (e, 1) => write!(f, "z^{e}")?,
            (e, c) => write!(f, "{c}z^{e}")?,
        }
    }
    Ok(())
}

impl fmt::Display for KPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, &self.terms())
    }
}

/// A Laurent polynomial with nonnegative coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Laurent(BTreeMap<i64, u64>);

impl Laurent {
    pub fn from_terms(terms: impl IntoIterator<Item = (i64, u64)>) -> Self {
        let mut m = BTreeMap::new();
        for (e, c) in terms {
            if c != 0 {
                *m.entry(e).or_insert(0) += c;
            }
        }
        Laurent(m)
    }

    /// z^shift · p
    pub fn shifted(p: &KPoly, shift: i64) -> Self {
        Laurent::from_terms(p.terms().into_iter().map(|(e, c)| (e as i64 + shift, c)))
    }
}

/// (Σ d_i z^i)_+ = Σ_{i≥0} d_i z^i
pub fn truncate_plus(p: &Laurent) -> KPoly {
    let top = p.0.keys().next_back().copied().unwrap_or(-1);
    if top < 0 {
        return KPoly::zero();
    }
    KPoly::from_coeffs((0..=top).map(|e| p.0.get(&e).copied().unwrap_or(0)).collect())
}

/// P(0) mod 2
pub fn parity_bar(p: &KPoly) -> u8 {
    (p.constant() % 2) as u8
}

/// A polynomial in z and w, with a set of w-powers whose coefficient is
/// not known.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct KPoly2 {
    /// w-power to z-polynomial
    terms: BTreeMap<u32, KPoly>,
    unknown: BTreeSet<u32>,
}

impl KPoly2 {
    pub fn add_at(&mut self, s: u32, p: KPoly) {
        if p.is_zero() {
            return;
        }
        let e = self.terms.entry(s).or_default();
        *e = e.clone() + p;
    }

    pub fn flag_unknown(&mut self, s: u32) {
        self.unknown.insert(s);
    }

    /// Coefficient of w^s.
    pub fn at(&self, s: u32) -> KPoly {
        self.terms.get(&s).cloned().unwrap_or_default()
    }

    /// w-powers with a known nonzero coefficient.
    pub fn w_support(&self) -> BTreeSet<u32> {
        self.terms.keys().copied().collect()
    }

    pub fn unknown(&self) -> &BTreeSet<u32> {
        &self.unknown
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.unknown.is_empty()
    }

    /// Coefficient of z^i w^s.
    pub fn coeff(&self, i: usize, s: u32) -> u64 {
        self.at(s).coeff(i)
    }
}

impl fmt::Display for KPoly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w = |s: u32| if s == 1 { "w".to_string() } else { format!("w^{s}") };
        let mut first = true;
        for (&s, p) in &self.terms {
            if !first {
                f.write_str("+")?;
            }
            first = false;
            let terms = p.terms();
            match terms.as_slice() {
                [(0, 1)] => write!(f, "{}", w(s))?,
                [_] => write!(f, "{p}{}", w(s))?,
                _ => write!(f, "({p}){}", w(s))?,
            }
        }
        for &s in &self.unknown {
            if !first {
                f.write_str("+")?;
            }
            first = false;
            write!(f, "?·{}", w(s))?;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// How `g` arises from `f`, if it does by a single move.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Move {
    /// one cross from `a` to `q`
    One { a: i64, q: i64 },
    /// two crosses from the zero stack to `p < q`
    Two { p: i64, q: i64 },
}

fn cross_counts(d: &WeightDiagram) -> BTreeMap<i64, u32> {
    d.cross_positions().into_iter().map(|p| (p, d.crosses_at(p))).collect()
}

/// The move turning `f` into `g` whose new cross is the rightmost one of `g`.
fn detect_move(f: &WeightDiagram, g: &WeightDiagram) -> Option<Move> {
    let fc = cross_counts(f);
    let gc = cross_counts(g);
    let mut removed = Vec::new();
    let mut added = Vec::new();
    let keys: BTreeSet<i64> = fc.keys().chain(gc.keys()).copied().collect();
    for p in keys {
        let (x, y) = (fc.get(&p).copied().unwrap_or(0), gc.get(&p).copied().unwrap_or(0));
        removed.extend(std::iter::repeat_n(p, x.saturating_sub(y) as usize));
        added.extend(std::iter::repeat_n(p, y.saturating_sub(x) as usize));
    }
    let top = *gc.keys().next_back()?;
    match (removed.as_slice(), added.as_slice()) {
        (&[a], &[q]) if a < q && q == top => Some(Move::One { a, q }),
        (&[0, 0], &[p, q]) if f.has_stack() && 0 < p && p < q && q == top => {
            Some(Move::Two { p, q })
        }
        _ => None,
    }
}

fn zpow(e: i64) -> KPoly {
    KPoly::monomial(e as usize, 1)
}

fn gl_closed(ctx: AlgebraContext, lambda: &BlockWeight, nu: &BlockWeight) -> KPoly {
    let f = diagram_of(ctx, nu);
    let g = diagram_of(ctx, lambda);
    match detect_move(&f, &g) {
        Some(Move::One { a, q }) => {
            let b = *arcs(&f).ends(a).iter().next_back().expect("every cross has an arch");
            if q <= b {
                zpow(b - q)
            } else {
                KPoly::zero()
            }
        }
        _ => KPoly::zero(),
    }
}

fn osp_closed(ctx: AlgebraContext, lambda: &BlockWeight, nu: &BlockWeight) -> Result<KPoly> {
    let t = ctx.osp_t().expect("osp");
    debug_assert_ne!(t, 1);
    if lambda.is_zero() {
        return Err(Error::OspLambdaZero);
    }
    if let (Some(x), Some(y)) = (lambda.sign(), nu.sign()) {
        if x != y {
            return Ok(KPoly::zero());
        }
    }
    let f = diagram_of(ctx, nu);
    let g = diagram_of(ctx, lambda);
    let ad = arcs(&f);
    Ok(match detect_move(&f, &g) {
        Some(Move::One { a, q }) => {
            let ends = ad.ends(a);
            let b = *ends.iter().next_back().expect("every cross has an arch");
            if a != 0 || t == 2 {
                if q <= b {
                    zpow(b - q)
                } else {
                    KPoly::zero()
                }
            } else {
                let bm = *ends.iter().next().expect("nonempty");
                if q <= bm && bm < b {
                    zpow(bm - q) + zpow(b - q)
                } else if q <= b {
                    zpow(b - q)
                } else {
                    KPoly::zero()
                }
            }
        }
        Some(Move::Two { p, q: lam1 }) => {
            let max0 = *ad.ends(0).iter().next_back().expect("zero stack has arches");
            let leg = ad.arches.iter().find_map(|arch| match *arch {
                Arch::Three { b1, b2 } if b1 == p => Some(b2),
                _ => None,
            });
            match leg {
                Some(q) if lam1 <= q && q < max0 => zpow(q - lam1),
                _ => KPoly::zero(),
            }
        }
        None => KPoly::zero(),
    })
}

/// z + z^2 + … + z^{m-1}
fn q_zero_zero(m: usize) -> KPoly {
    KPoly::from_coeffs((0..m).map(|e| (e > 0) as u64).collect())
}

fn q_closed(ctx: AlgebraContext, lambda: &BlockWeight, nu: &BlockWeight) -> KPoly {
    if lambda.is_zero() {
        return if nu.is_zero() { q_zero_zero(ctx.m()) } else { KPoly::zero() };
    }
    let f = diagram_of(ctx, nu);
    let g = diagram_of(ctx, lambda);
    match detect_move(&f, &g) {
        Some(Move::One { a, q }) => {
            let ends = arcs(&f).ends(a);
            let b = *ends.iter().next_back().expect("every cross has an arch");
            if a == 0 && ctx.has_zero_stack() {
                let inside: Vec<i64> = if q < b { ends.range(q..b).copied().collect() } else { Vec::new() };
                match (inside.first(), inside.last()) {
                    (Some(&lo), Some(&hi)) => zpow(lo - q) + zpow(hi - q),
                    _ => KPoly::zero(),
                }
            } else if q <= b {
                zpow(b - q)
            } else {
                KPoly::zero()
            }
        }
        _ => KPoly::zero(),
    }
}

/// K^{λ,ν}(z) from the closed formulas.
///
/// For osp(2n+1|2n) the value is read off the τ-preimages. For osp the
/// formulas need λ ≠ 0; otherwise [`Error::OspLambdaZero`].
pub fn kpoly(ctx: AlgebraContext, lambda: &BlockWeight, nu: &BlockWeight) -> Result<KPoly> {
    check_weight(ctx, lambda)?;
    check_weight(ctx, nu)?;
    match ctx.family {
        Family::Gl => Ok(gl_closed(ctx, lambda, nu)),
        Family::Osp { t: 1 } => {
            let (c2, l2) = tau_preimage(ctx, lambda);
            let (_, n2) = tau_preimage(ctx, nu);
            osp_closed(c2, &l2, &n2)
        }
        Family::Osp { .. } => osp_closed(ctx, lambda, nu),
        Family::Q { .. } => Ok(q_closed(ctx, lambda, nu)),
    }
}

type Memo = HashMap<(usize, Vec<HalfInt>, Vec<HalfInt>), KPoly>;

fn zeros(v: &[HalfInt]) -> usize {
    v.iter().filter(|c| c.is_zero()).count()
}

fn recursive(ctx: AlgebraContext, lam: &[HalfInt], nu: &[HalfInt], memo: &mut Memo) -> KPoly {
    let key = (ctx.n, lam.to_vec(), nu.to_vec());
    if let Some(p) = memo.get(&key) {
        return p.clone();
    }
    let n = ctx.n;
    let m = ctx.m();
    let one = HalfInt::int(1);
    let out = if lam.iter().all(|c| c.is_zero()) {
        if nu.iter().all(|c| c.is_zero()) {
            q_zero_zero(m)
        } else {
            KPoly::zero()
        }
    } else if lam[0] <= one {
        // λ = θ, or θ/2 when m = 2
        if lam[0] == one && nu.iter().all(|c| c.is_zero()) {
            KPoly::one() + zpow(m as i64 - 2)
        } else {
            KPoly::zero()
        }
    } else {
        let mut lower = lam.to_vec();
        lower[0] = lower[0] - one;
        if nu == lower.as_slice() {
            KPoly::one()
        } else if n == 1 || lam[0] > lam[1] + one {
            let p = recursive(ctx, &lower, nu, memo);
            let base = truncate_plus(&Laurent::shifted(&p, -1));
            if zeros(nu) > zeros(lam) {
                base + KPoly::monomial(0, parity_bar(&p) as u64)
            } else {
                base
            }
        } else if nu[0] != lam[1] {
            KPoly::zero()
        } else {
            recursive(ctx.with_rank(n - 1), &lam[1..], &nu[1..], memo).times_z()
        }
    };
    memo.insert(key, out.clone());
    out
}

/// K^{λ,ν}(z) for q(m) from the recursion on λ_1, independent of arch
/// diagrams.
pub fn kpoly_q_recursive(ctx: AlgebraContext, lambda: &BlockWeight, nu: &BlockWeight) -> Result<KPoly> {
    if !ctx.is_q() {
        return Err(Error::ContextMismatch(format!("the recursion is for q(m), got {ctx}")));
    }
    check_weight(ctx, lambda)?;
    check_weight(ctx, nu)?;
    let mut memo = Memo::new();
    Ok(recursive(ctx, lambda.coords(), nu.coords(), &mut memo))
}

/// Coordinates used for restriction: τ-preimages for osp(2n+1|2n).
fn working(ctx: AlgebraContext, w: &BlockWeight) -> (AlgebraContext, BlockWeight) {
    if ctx.osp_t() == Some(1) {
        tau_preimage(ctx, w)
    } else {
        (ctx, w.clone())
    }
}

/// n + 1 - min{i : λ_i ≠ ν_i}. For osp(2n|2n) a sign difference counts as
/// a difference in the last coordinate.
pub fn s_zero(ctx: AlgebraContext, lambda: &BlockWeight, nu: &BlockWeight) -> Result<usize> {
    check_weight(ctx, lambda)?;
    check_weight(ctx, nu)?;
    if lambda == nu {
        return Err(Error::EqualWeights);
    }
    let (c, l) = working(ctx, lambda);
    let (_, v) = working(ctx, nu);
    let first = l.coords().iter().zip(v.coords()).position(|(a, b)| a != b).unwrap_or(c.n - 1);
    Ok(c.n - first)
}

/// K evaluated after dropping the first n - s coordinates of both weights.
pub fn k_restricted(ctx: AlgebraContext, lambda: &BlockWeight, nu: &BlockWeight, s: usize) -> Result<KPoly> {
    check_weight(ctx, lambda)?;
    check_weight(ctx, nu)?;
    if s == 0 || s > ctx.n {
        return Err(Error::ContextMismatch(format!("rank {s} is outside 1..={}", ctx.n)));
    }
    let (c, l) = working(ctx, lambda);
    let (_, v) = working(ctx, nu);
    let d = c.n - s;
    if l.coords()[..d] != v.coords()[..d] {
        return Ok(KPoly::zero());
    }
    let rc = c.with_rank(s);
    let (Ok(lr), Ok(vr)) = (
        validate_weight(rc, &l.coords()[d..], l.sign()),
        validate_weight(rc, &v.coords()[d..], v.sign()),
    ) else {
        return Ok(KPoly::zero());
    };
    kpoly(rc, &lr, &vr)
}

/// Σ_s w^s K_(s)(z). Osp terms with a zero restricted λ are flagged unknown.
pub fn k_hat(ctx: AlgebraContext, lambda: &BlockWeight, nu: &BlockWeight) -> Result<KPoly2> {
    let mut out = KPoly2::default();
    for s in 1..=ctx.n {
        match k_restricted(ctx, lambda, nu, s) {
            Ok(p) => out.add_at(s as u32, p),
            Err(Error::OspLambdaZero) => out.flag_unknown(s as u32),
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

/// Constant term of K_(s) at s = s_zero(λ, ν).
pub fn k_zero(ctx: AlgebraContext, lambda: &BlockWeight, nu: &BlockWeight) -> Result<u64> {
    let s = s_zero(ctx, lambda, nu)?;
    match k_restricted(ctx, lambda, nu, s) {
        Ok(p) => Ok(p.constant()),
        Err(Error::OspLambdaZero) => Ok(0),
        Err(e) => Err(e),
    }
}

/// The restricted polynomial behind k_zero, as printed on graph edges.
pub fn k_zero_poly(ctx: AlgebraContext, lambda: &BlockWeight, nu: &BlockWeight) -> Result<Option<KPoly>> {
    let s = s_zero(ctx, lambda, nu)?;
    match k_restricted(ctx, lambda, nu, s) {
        Ok(p) => Ok(Some(p)),
        Err(Error::OspLambdaZero) => Ok(None),
        Err(e) => Err(e),
    }
}

/// tail(ν) - tail(λ)
pub fn tail_diff(ctx: AlgebraContext, lambda: &BlockWeight, nu: &BlockWeight) -> i64 {
    let (c, l) = working(ctx, lambda);
    let (_, v) = working(ctx, nu);
    tail(c, &v) as i64 - tail(c, &l) as i64
}
