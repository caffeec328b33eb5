//! Algebra contexts, block weights and the general q(m) weights.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::halfint::HalfInt;

/// Default cap on the number of weights a window may hold.
pub const DEFAULT_CAP: usize = 200_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    /// gl(n|n)
    Gl,
    /// osp(2n+t|2n), t in {0,1,2}
    Osp { t: u8 },
    /// q(2n+ell), ell in {0,1}
    Q { ell: u8 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Block {
    B0,
    BHalf,
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Block::B0 => "B0",
            Block::BHalf => "B1/2",
        })
    }
}

impl FromStr for Block {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "B0" | "b0" | "0" => Ok(Block::B0),
            "B1/2" | "b1/2" | "BHalf" | "1/2" => Ok(Block::BHalf),
            other => Err(Error::ParseError(format!("unknown block {other:?}"))),
        }
    }
}

/// Which algebra and which block we are working in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AlgebraContext {
    pub family: Family,
    pub n: usize,
    pub block: Block,
}

impl AlgebraContext {
    pub fn new(family: Family, n: usize, block: Block) -> Result<Self> {
        match family {
            Family::Osp { t } if t > 2 => {
                return Err(Error::ContextMismatch(format!("osp needs t in 0..=2, got {t}")))
            }
            Family::Q { ell } if ell > 1 => {
                return Err(Error::ContextMismatch(format!("q needs ell in 0..=1, got {ell}")))
            }
            _ => {}
        }
        if block == Block::BHalf && family != (Family::Q { ell: 0 }) {
            return Err(Error::ContextMismatch(
                "the half-integral block exists only for q(2n)".into(),
            ));
        }
        Ok(AlgebraContext { family, n, block })
    }

    pub fn gl(n: usize) -> Self {
        AlgebraContext { family: Family::Gl, n, block: Block::B0 }
    }

    /// osp(2n+t|2n).
    pub fn osp(n: usize, t: u8) -> Self {
        Self::new(Family::Osp { t }, n, Block::B0).expect("t must be 0, 1 or 2")
    }

    /// q(m), principal block.
    pub fn q(m: usize) -> Self {
        AlgebraContext { family: Family::Q { ell: (m % 2) as u8 }, n: m / 2, block: Block::B0 }
    }

    /// q(m), half-integral block. `m` must be even.
    pub fn q_half(m: usize) -> Result<Self> {
        Self::new(Family::Q { ell: (m % 2) as u8 }, m / 2, Block::BHalf)
    }

    /// Same family and block in rank `s`.
    pub fn with_rank(self, s: usize) -> Self {
        AlgebraContext { n: s, ..self }
    }

    pub fn is_half(self) -> bool {
        self.block == Block::BHalf
    }

    /// Position 0 holds a stack of crosses (osp and q, integral block).
    pub fn has_zero_stack(self) -> bool {
        self.family != Family::Gl && !self.is_half()
    }

    /// `>` sits at position 0 (osp(2n+2|2n) and q(2n+1)).
    pub fn has_zero_gt(self) -> bool {
        matches!(self.family, Family::Osp { t: 2 } | Family::Q { ell: 1 })
    }

    /// The `ell` of the family: 1 for osp(2n+2|2n) and q(2n+1), else 0.
    pub fn ell(self) -> u8 {
        self.has_zero_gt() as u8
    }

    /// m = 2n + ell for q; panics elsewhere.
    pub fn m(self) -> usize {
        match self.family {
            Family::Q { ell } => 2 * self.n + ell as usize,
            _ => panic!("m is only defined for q"),
        }
    }

    pub fn is_q(self) -> bool {
        matches!(self.family, Family::Q { .. })
    }

    pub fn is_osp(self) -> bool {
        matches!(self.family, Family::Osp { .. })
    }

    pub fn osp_t(self) -> Option<u8> {
        match self.family {
            Family::Osp { t } => Some(t),
            _ => None,
        }
    }

    /// Parses `gl(n|n)`, `osp(M|2n)` or `q(m)`.
    pub fn parse(s: &str, block: Block) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::ParseError(format!("unknown algebra {s:?}"));
        let inner = |prefix: &str| -> Option<String> {
            s.strip_prefix(prefix)?.strip_suffix(')').map(str::to_string)
        };
        let num = |x: &str| x.parse::<usize>().map_err(|_| bad());
        if let Some(body) = inner("gl(") {
            let (a, b) = body.split_once('|').ok_or_else(bad)?;
            let (a, b) = (num(a)?, num(b)?);
            if a != b {
                return Err(Error::ParseError(format!("only gl(n|n) is supported, got {s:?}")));
            }
            return Self::new(Family::Gl, a, block);
        }
        if let Some(body) = inner("osp(") {
            let (a, b) = body.split_once('|').ok_or_else(bad)?;
            let (a, b) = (num(a)?, num(b)?);
            if b % 2 != 0 || a < b || a > b + 2 {
                return Err(Error::ParseError(format!("expected osp(2n+t|2n), got {s:?}")));
            }
            return Self::new(Family::Osp { t: (a - b) as u8 }, b / 2, block);
        }
        if let Some(body) = inner("q(") {
            let m = num(&body)?;
            return Self::new(Family::Q { ell: (m % 2) as u8 }, m / 2, block);
        }
        Err(bad())
    }
}

impl fmt::Display for AlgebraContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.n;
        match self.family {
            Family::Gl => write!(f, "gl({n}|{n})"),
            Family::Osp { t } => write!(f, "osp({}|{})", 2 * n + t as usize, 2 * n),
            Family::Q { ell } => write!(f, "q({})", 2 * n + ell as usize),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

impl Serialize for Sign {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_char(self.symbol())
    }
}

/// A dominant weight of a block: coordinates (λ_1,…,λ_n) and, for some
/// osp weights, a sign.
///
/// For osp(2n+1|2n) the coordinates are those of the osp(2n+1|2n) diagram
/// itself; [`tau_preimage`] gives the matching osp(2n+2|2n) weight.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BlockWeight {
    coords: Vec<HalfInt>,
    sign: Option<Sign>,
}

impl BlockWeight {
    pub fn coords(&self) -> &[HalfInt] {
        &self.coords
    }

    pub fn sign(&self) -> Option<Sign> {
        self.sign
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }
}

impl fmt::Display for BlockWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        if let Some(s) = self.sign {
            write!(f, ";{}", s.symbol())?;
        }
        f.write_str(")")
    }
}

fn zero_count(coords: &[HalfInt]) -> usize {
    coords.iter().filter(|c| c.is_zero()).count()
}

/// Whether a weight with these coordinates must carry a sign.
pub fn sign_required(ctx: AlgebraContext, coords: &[HalfInt]) -> bool {
    match ctx.family {
        Family::Osp { t: 0 } => ctx.n > 0 && zero_count(coords) == 0,
        Family::Osp { t: 1 } => zero_count(coords) > 0,
        _ => false,
    }
}

pub fn validate_weight(
    ctx: AlgebraContext,
    coords: &[HalfInt],
    sign: Option<Sign>,
) -> Result<BlockWeight> {
    let show = || {
        coords.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
    };
    if coords.len() != ctx.n {
        return Err(Error::NotInBlock(format!(
            "{ctx} needs {} coordinates, got ({})",
            ctx.n,
            show()
        )));
    }
    let half = ctx.is_half();
    if coords.iter().any(|c| c.is_integer() == half) {
        let kind = if half { "half-integers" } else { "integers" };
        return Err(Error::NotInBlock(format!("coordinates ({}) must be {kind}", show())));
    }
    for w in coords.windows(2) {
        let ok = w[1] < w[0] || (ctx.has_zero_stack() && w[0].is_zero() && w[1].is_zero());
        if !ok {
            return Err(Error::NotInBlock(format!("({}) is not decreasing", show())));
        }
    }
    if ctx.family != Family::Gl && coords.last().is_some_and(|c| *c < HalfInt::ZERO) {
        return Err(Error::NotInBlock(format!("({}) has a negative coordinate", show())));
    }
    match (sign_required(ctx, coords), sign) {
        (true, None) => Err(Error::SignRequired),
        (false, Some(_)) => Err(Error::SignIllegal),
        _ => Ok(BlockWeight { coords: coords.to_vec(), sign }),
    }
}

/// Re-validates `w` against `ctx`.
pub fn check_weight(ctx: AlgebraContext, w: &BlockWeight) -> Result<()> {
    validate_weight(ctx, &w.coords, w.sign)
        .map(|_| ())
        .map_err(|e| Error::ContextMismatch(format!("{w} is not a weight of {ctx}: {e}")))
}

/// Reads the weight grammar: an optional leading `+`/`-` token, then
/// comma-separated coordinates (halves written `a/2`).
pub fn parse_coords(text: &str) -> Result<(Option<Sign>, Vec<HalfInt>)> {
    let mut s = text.trim();
    let mut sign = None;
    for (c, sg) in [('+', Sign::Plus), ('-', Sign::Minus)] {
        if let Some(rest) = s.strip_prefix(c) {
            if rest.is_empty() || rest.starts_with([' ', ',', ';', '\t']) {
                sign = Some(sg);
                s = rest.trim_start_matches([' ', ',', ';', '\t']);
            }
        }
    }
    let s = s.trim().trim_start_matches('(').trim_end_matches(')');
    let coords = if s.trim().is_empty() {
        Vec::new()
    } else {
        s.split(',').map(HalfInt::from_str).collect::<Result<Vec<_>>>()?
    };
    Ok((sign, coords))
}

pub fn parse_weight(ctx: AlgebraContext, text: &str) -> Result<BlockWeight> {
    let (sign, coords) = parse_coords(text)?;
    validate_weight(ctx, &coords, sign)
}

/// Every weight of `ctx` whose coordinates lie in `[min, max]`.
///
/// `min` defaults to `-max` for gl and to 0 elsewhere. Weights come in
/// lexicographic order of coordinates, `+` before `-`.
pub fn enumerate_block(
    ctx: AlgebraContext,
    max: HalfInt,
    min: Option<HalfInt>,
    cap: usize,
) -> Result<Vec<BlockWeight>> {
    let min = min.unwrap_or(if ctx.family == Family::Gl { -max } else { HalfInt::ZERO });
    let lo = if ctx.family == Family::Gl { min } else { min.max(HalfInt::ZERO) };
    // candidate values, ascending
    let half = ctx.is_half();
    let mut values = Vec::new();
    let mut t = lo.twice();
    while t <= max.twice() {
        if (t % 2 != 0) == half {
            values.push(HalfInt::from_twice(t));
        }
        t += 1;
    }
    let zeros_ok = ctx.has_zero_stack() && lo <= HalfInt::ZERO && HalfInt::ZERO <= max;
    let mut out: Vec<Vec<HalfInt>> = Vec::new();
    let mut cur = Vec::new();
    // choose strictly decreasing sequences; a run of zeros may close them off
    fn rec(
        values: &[HalfInt],
        n: usize,
        zeros_ok: bool,
        cur: &mut Vec<HalfInt>,
        out: &mut Vec<Vec<HalfInt>>,
        cap: usize,
    ) -> Result<()> {
        if cur.len() == n {
            if out.len() >= cap {
                return Err(Error::WindowTooLarge { count: out.len() + 1, cap });
            }
            out.push(cur.clone());
            return Ok(());
        }
        if zeros_ok {
            // close off with zeros
            let mut full = cur.clone();
            full.resize(n, HalfInt::ZERO);
            if out.len() >= cap {
                return Err(Error::WindowTooLarge { count: out.len() + 1, cap });
            }
            out.push(full);
        }
        for &v in values {
            if zeros_ok && v.is_zero() {
                continue;
            }
            if cur.last().is_some_and(|c| v >= *c) {
                continue;
            }
            cur.push(v);
            rec(values, n, zeros_ok, cur, out, cap)?;
            cur.pop();
        }
        Ok(())
    }
    // iterate candidates from the top so sequences are decreasing
    let desc: Vec<HalfInt> = values.iter().rev().copied().collect();
    rec(&desc, ctx.n, zeros_ok, &mut cur, &mut out, cap)?;
    out.sort();
    out.dedup();
    let mut weights = Vec::with_capacity(out.len());
    for coords in out {
        if sign_required(ctx, &coords) {
            for s in [Sign::Plus, Sign::Minus] {
                weights.push(BlockWeight { coords: coords.clone(), sign: Some(s) });
            }
        } else {
            weights.push(BlockWeight { coords, sign: None });
        }
        if weights.len() > cap {
            return Err(Error::WindowTooLarge { count: weights.len(), cap });
        }
    }
    Ok(weights)
}

/// Number of zero coordinates (always 0 for gl and the half-integral block).
pub fn tail(ctx: AlgebraContext, w: &BlockWeight) -> usize {
    if ctx.has_zero_stack() {
        zero_count(&w.coords)
    } else {
        0
    }
}

/// The osp(2n+2|2n) weight whose image under τ is the osp(2n+1|2n) weight `w`.
pub fn tau_preimage(ctx: AlgebraContext, w: &BlockWeight) -> (AlgebraContext, BlockWeight) {
    assert_eq!(ctx.osp_t(), Some(1), "tau_preimage needs osp(2n+1|2n)");
    let t2 = AlgebraContext::osp(ctx.n, 2);
    let one = HalfInt::int(1);
    let mut coords: Vec<HalfInt> =
        w.coords.iter().map(|&c| if c.is_zero() { c } else { c + one }).collect();
    if w.sign == Some(Sign::Plus) {
        // the first zero coordinate becomes 1
        if let Some(c) = coords.iter_mut().find(|c| c.is_zero()) {
            *c = one;
        }
    }
    (t2, BlockWeight { coords, sign: None })
}

/// τ on weights: osp(2n+2|2n) to osp(2n+1|2n).
pub fn tau_image(ctx: AlgebraContext, w: &BlockWeight) -> (AlgebraContext, BlockWeight) {
    assert_eq!(ctx.osp_t(), Some(2), "tau_image needs osp(2n+2|2n)");
    let t1 = AlgebraContext::osp(ctx.n, 1);
    let one = HalfInt::int(1);
    let coords: Vec<HalfInt> =
        w.coords.iter().map(|&c| if c.is_zero() { c } else { c - one }).collect();
    let sign = if w.coords.contains(&one) {
        Some(Sign::Plus)
    } else if w.coords.iter().any(|c| c.is_zero()) {
        Some(Sign::Minus)
    } else {
        None
    };
    (t1, BlockWeight { coords, sign })
}

/// ‖λ‖: the coordinate sum, corrected by `n - tail` for osp(2n+2|2n).
pub fn norm(ctx: AlgebraContext, w: &BlockWeight) -> HalfInt {
    let sum: HalfInt = w.coords.iter().copied().sum();
    match ctx.family {
        Family::Osp { t: 2 } => sum - HalfInt::int((ctx.n - tail(ctx, w)) as i64),
        _ => sum,
    }
}

fn mod2(h: HalfInt) -> u8 {
    let k = h.to_integer().expect("parity of a non-integer");
    k.rem_euclid(2) as u8
}

/// (‖λ‖ - ‖ν‖) mod 2.
pub fn pari_rel(ctx: AlgebraContext, lambda: &BlockWeight, nu: &BlockWeight) -> Result<u8> {
    check_weight(ctx, lambda)?;
    check_weight(ctx, nu)?;
    Ok(mod2(norm(ctx, lambda) - norm(ctx, nu)))
}

/// Absolute parity. For the half-integral block it is measured from the
/// minimal weight (n-1/2, …, 1/2), whose norm is n²/2.
pub fn pari_abs(ctx: AlgebraContext, w: &BlockWeight) -> u8 {
    let base = if ctx.is_half() {
        HalfInt::from_twice((ctx.n * ctx.n) as i64)
    } else {
        HalfInt::ZERO
    };
    mod2(norm(ctx, w) - base)
}

/// Coordinatewise `a >= b`, with signs required to agree when coordinates
/// coincide. For osp(2n+1|2n) the comparison is made on τ-preimages.
pub fn dominates(ctx: AlgebraContext, a: &BlockWeight, b: &BlockWeight) -> bool {
    if ctx.osp_t() == Some(1) {
        let (c2, a2) = tau_preimage(ctx, a);
        let (_, b2) = tau_preimage(ctx, b);
        return dominates(c2, &a2, &b2);
    }
    if a.coords == b.coords {
        return a.sign == b.sign;
    }
    a.coords.iter().zip(&b.coords).all(|(x, y)| x >= y)
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Basis {
    Eps(usize),
    Delta(usize),
}

fn format_combination(terms: BTreeMap<Basis, HalfInt>) -> String {
    let mut out = String::new();
    for (b, c) in terms {
        if c.is_zero() {
            continue;
        }
        let name = match b {
            Basis::Eps(i) => format!("ε{i}"),
            Basis::Delta(i) => format!("δ{i}"),
        };
        let neg = c < HalfInt::ZERO;
        if neg {
            out.push('-');
        } else if !out.is_empty() {
            out.push('+');
        }
        if c.abs() != HalfInt::int(1) {
            out.push_str(&c.abs().to_string());
        }
        out.push_str(&name);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// The weight itself (not λ+ρ) in the ε/δ basis.
pub fn to_epsilon_delta(ctx: AlgebraContext, w: &BlockWeight) -> String {
    let n = ctx.n;
    let mut terms: BTreeMap<Basis, HalfInt> = BTreeMap::new();
    let mut add = |b: Basis, c: HalfInt| {
        let e = terms.entry(b).or_insert(HalfInt::ZERO);
        *e = *e + c;
    };
    let lam = &w.coords;
    match ctx.family {
        Family::Gl => {
            for (i, &l) in lam.iter().enumerate() {
                let c = l - HalfInt::int((n - 1 - i) as i64);
                add(Basis::Eps(i + 1), c);
                add(Basis::Delta(n - i), -c);
            }
        }
        Family::Osp { t: 0 } => {
            for (i, &l) in lam.iter().enumerate() {
                add(Basis::Delta(i + 1), l);
                let xi = if i + 1 == n && w.sign == Some(Sign::Minus) { -l } else { l };
                add(Basis::Eps(i + 1), xi);
            }
        }
        Family::Osp { t: 2 } => {
            for (i, &l) in lam.iter().enumerate() {
                add(Basis::Eps(i + 1), l);
                add(Basis::Delta(i + 1), l);
            }
        }
        Family::Osp { .. } => {
            for (i, &l) in lam.iter().enumerate() {
                if l.is_zero() {
                    if w.sign == Some(Sign::Plus) {
                        add(Basis::Eps(i + 1), HalfInt::int(1));
                    }
                    break;
                }
                add(Basis::Eps(i + 1), l + HalfInt::int(1));
                add(Basis::Delta(i + 1), l);
            }
        }
        Family::Q { ell } => {
            let m = 2 * n + ell as usize;
            for (i, &l) in lam.iter().enumerate() {
                add(Basis::Eps(i + 1), l);
                add(Basis::Eps(m - i), -l);
            }
        }
    }
    format_combination(terms)
}

/// A weight Σ a_i ε_i of q(m), not necessarily in a principal block.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GeneralQWeight {
    coords: Vec<HalfInt>,
}

impl GeneralQWeight {
    pub fn new(coords: Vec<HalfInt>) -> Result<Self> {
        let show = || coords.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",");
        if let Some(first) = coords.first() {
            if coords.iter().any(|c| c.is_integer() != first.is_integer()) {
                return Err(Error::NotInBlock(format!("({}) mixes integers and halves", show())));
            }
        }
        for w in coords.windows(2) {
            if !(w[1] < w[0] || (w[0].is_zero() && w[1].is_zero())) {
                return Err(Error::NotInBlock(format!("({}) is not dominant", show())));
            }
        }
        Ok(GeneralQWeight { coords })
    }

    pub fn parse(text: &str) -> Result<Self> {
        let (sign, coords) = parse_coords(text)?;
        if sign.is_some() {
            return Err(Error::SignIllegal);
        }
        Self::new(coords)
    }

    /// Embeds a block weight of q(m): (λ_1,…,λ_n, [0], -λ_n,…,-λ_1).
    pub fn from_block(ctx: AlgebraContext, w: &BlockWeight) -> Self {
        assert!(ctx.is_q());
        let mut coords = w.coords.clone();
        if ctx.ell() == 1 {
            coords.push(HalfInt::ZERO);
        }
        coords.extend(w.coords.iter().rev().map(|&c| -c));
        coords.sort_by(|a, b| b.cmp(a));
        GeneralQWeight { coords }
    }

    pub fn m(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[HalfInt] {
        &self.coords
    }

    pub fn is_integral(&self) -> bool {
        self.coords.first().is_none_or(|c| c.is_integer())
    }

    pub fn has_zero(&self) -> bool {
        self.coords.iter().any(|c| c.is_zero())
    }
}

impl fmt::Display for GeneralQWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", body.join(","))
    }
}

/// The multiset of coordinates that survive cancelling pairs a_i + a_j = 0.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CentralCharacter {
    /// decreasing
    pub core: Vec<HalfInt>,
    pub integral: bool,
    pub ell_of: u8,
}

impl CentralCharacter {
    /// Π-invariant iff an odd number of core entries are nonzero.
    pub fn is_pi_invariant(&self) -> bool {
        self.core.iter().filter(|c| !c.is_zero()).count() % 2 == 1
    }
}

impl fmt::Display for CentralCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.core.iter().map(|c| c.to_string()).collect();
        write!(f, "{{{}}}", body.join(","))
    }
}

/// Positions of glued crosses (with multiplicity at 0) and the surviving core.
fn split_core(w: &GeneralQWeight) -> (Vec<HalfInt>, Vec<HalfInt>) {
    let zeros = zero_count(&w.coords);
    let mut crosses = vec![HalfInt::ZERO; zeros / 2];
    let mut core = Vec::new();
    if zeros % 2 == 1 {
        core.push(HalfInt::ZERO);
    }
    for &c in &w.coords {
        if c.is_zero() {
            continue;
        }
        if w.coords.contains(&-c) {
            if c > HalfInt::ZERO {
                crosses.push(c);
            }
        } else {
            core.push(c);
        }
    }
    core.sort_by(|a, b| b.cmp(a));
    crosses.sort();
    (crosses, core)
}

pub fn core_of(w: &GeneralQWeight) -> CentralCharacter {
    let (_, core) = split_core(w);
    let ell_of = core.iter().any(|c| c.is_zero()) as u8;
    CentralCharacter { core, integral: w.is_integral(), ell_of }
}

/// Number of glued crosses.
pub fn atypicality(w: &GeneralQWeight) -> usize {
    split_core(w).0.len()
}

/// Every cross lies left of every core symbol at a nonzero position.
pub fn is_stable(w: &GeneralQWeight) -> bool {
    let (crosses, core) = split_core(w);
    let first_core = core.iter().filter(|c| !c.is_zero()).map(|c| c.abs()).min();
    match (crosses.last(), first_core) {
        (Some(&x), Some(c)) => x < c,
        _ => true,
    }
}

/// Erases (and closes up) the core symbols at nonzero positions, giving a
/// block weight of q(2k+ℓ) where k is the atypicality.
pub fn reduce(w: &GeneralQWeight) -> Result<(AlgebraContext, BlockWeight)> {
    let (crosses, core) = split_core(w);
    let k = crosses.len();
    if k == 0 {
        return Err(Error::Typical);
    }
    let ell = core.iter().any(|c| c.is_zero()) as usize;
    let removed: Vec<HalfInt> = core.iter().filter(|c| !c.is_zero()).map(|c| c.abs()).collect();
    let mut coords: Vec<HalfInt> = crosses
        .iter()
        .map(|&x| {
            let shift = removed.iter().filter(|&&p| p < x).count() as i64;
            x - HalfInt::int(shift)
        })
        .collect();
    coords.sort_by(|a, b| b.cmp(a));
    let block = if w.is_integral() { Block::B0 } else { Block::BHalf };
    let ctx = AlgebraContext::new(Family::Q { ell: ell as u8 }, k, block)?;
    let bw = validate_weight(ctx, &coords, None)?;
    Ok((ctx, bw))
}
