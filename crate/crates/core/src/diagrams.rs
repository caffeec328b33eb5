//! Weight diagrams, arch diagrams, moves and the ASCII wire format.
//!
//! Positions are stored as integer indices. In the half-integral block the
//! index `i` stands for the position `i + 1/2`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::halfint::HalfInt;
use crate::weights::{
    sign_required, validate_weight, AlgebraContext, BlockWeight, Family, GeneralQWeight, Sign,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Symbol {
    Empty,
    Times(u32),
    /// crosses stacked over `>` at position 0; `TimesOverGt(0)` is a bare `>`
    TimesOverGt(u32),
    Gt,
    Lt,
}

impl Symbol {
    pub fn crosses(self) -> u32 {
        match self {
            Symbol::Times(k) | Symbol::TimesOverGt(k) => k,
            _ => 0,
        }
    }
}

/// What a diagram belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Shape {
    Block(AlgebraContext),
    GeneralQ { m: usize, half: bool },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeightDiagram {
    shape: Shape,
    sign: Option<Sign>,
    cells: BTreeMap<i64, Symbol>,
}

impl WeightDiagram {
    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn sign(&self) -> Option<Sign> {
        self.sign
    }

    pub fn half(&self) -> bool {
        match self.shape {
            Shape::Block(ctx) => ctx.is_half(),
            Shape::GeneralQ { half, .. } => half,
        }
    }

    /// Position 0 is a stack (anything but gl and half-integral diagrams).
    pub fn has_stack(&self) -> bool {
        match self.shape {
            Shape::Block(ctx) => ctx.has_zero_stack(),
            Shape::GeneralQ { half, .. } => !half,
        }
    }

    fn is_stack(&self, p: i64) -> bool {
        p == 0 && self.has_stack()
    }

    pub fn symbol(&self, p: i64) -> Symbol {
        self.cells.get(&p).copied().unwrap_or(Symbol::Empty)
    }

    pub fn crosses_at(&self, p: i64) -> u32 {
        self.symbol(p).crosses()
    }

    /// Number of crosses at the zero stack.
    pub fn tail(&self) -> u32 {
        if self.has_stack() {
            self.crosses_at(0)
        } else {
            0
        }
    }

    /// Positions holding at least one cross, ascending.
    pub fn cross_positions(&self) -> Vec<i64> {
        self.cells.iter().filter(|(_, s)| s.crosses() > 0).map(|(&p, _)| p).collect()
    }

    /// Non-empty cells, ascending.
    pub fn cells(&self) -> impl Iterator<Item = (i64, Symbol)> + '_ {
        self.cells.iter().map(|(&p, &s)| (p, s))
    }

    /// The number a position index stands for.
    pub fn label(&self, p: i64) -> HalfInt {
        if self.half() {
            HalfInt::from_twice(2 * p + 1)
        } else {
            HalfInt::int(p)
        }
    }

    fn index_of(half: bool, c: HalfInt) -> i64 {
        if half {
            (c.twice() - 1) / 2
        } else {
            c.twice() / 2
        }
    }

    fn has_wobbly(&self) -> bool {
        match self.shape {
            Shape::Block(ctx) => ctx.family == Family::Q { ell: 1 },
            Shape::GeneralQ { half, .. } => {
                !half && matches!(self.symbol(0), Symbol::TimesOverGt(_))
            }
        }
    }

    /// True when the lowest cross of the zero stack gets a two-legged arch.
    fn lowest_zero_two_legged(&self) -> bool {
        matches!(self.shape, Shape::Block(AlgebraContext { family: Family::Osp { t: 0 | 1 }, .. }))
    }
}

pub fn diagram_of(ctx: AlgebraContext, w: &BlockWeight) -> WeightDiagram {
    let mut cells = BTreeMap::new();
    let half = ctx.is_half();
    for &c in w.coords() {
        let p = WeightDiagram::index_of(half, c);
        let e = cells.entry(p).or_insert(Symbol::Times(0));
        if let Symbol::Times(k) = e {
            *k += 1;
        }
    }
    if ctx.has_zero_gt() {
        let k = cells.remove(&0).map_or(0, Symbol::crosses);
        cells.insert(0, Symbol::TimesOverGt(k));
    }
    WeightDiagram { shape: Shape::Block(ctx), sign: w.sign(), cells }
}

fn structure_error(msg: impl Into<String>) -> Error {
    Error::MalformedDiagram(msg.into())
}

fn check_structure(d: &WeightDiagram) -> Result<()> {
    for (p, s) in d.cells() {
        let stack = d.is_stack(p);
        match (s, d.shape) {
            (Symbol::Empty, _) => return Err(structure_error("explicit empty cell")),
            (Symbol::Times(0), _) => return Err(structure_error("empty stack")),
            (Symbol::Times(k), _) if k > 1 && !stack => {
                return Err(structure_error(format!("{k} crosses away from the zero stack")))
            }
            (Symbol::TimesOverGt(_), _) if !stack => {
                return Err(structure_error("x^k> away from position 0"))
            }
            (Symbol::Gt | Symbol::Lt, Shape::Block(_)) => {
                return Err(structure_error("core symbols in a block diagram"))
            }
            (Symbol::Gt | Symbol::Lt, _) if stack => {
                return Err(structure_error("bare core symbol at position 0"))
            }
            _ => {}
        }
        let negative_ok = matches!(d.shape, Shape::Block(AlgebraContext { family: Family::Gl, .. }));
        if p < 0 && !negative_ok {
            return Err(structure_error("negative position"));
        }
    }
    match d.shape {
        Shape::Block(ctx) => {
            let at_zero_gt = matches!(d.symbol(0), Symbol::TimesOverGt(_));
            if ctx.has_zero_gt() != at_zero_gt {
                return Err(structure_error(format!(
                    "{ctx} {} `>` at position 0",
                    if ctx.has_zero_gt() { "needs" } else { "has no" }
                )));
            }
        }
        Shape::GeneralQ { m, .. } => {
            if d.sign.is_some() {
                return Err(Error::SignIllegal);
            }
            let size: usize = d
                .cells()
                .map(|(_, s)| match s {
                    Symbol::Times(k) => 2 * k as usize,
                    Symbol::TimesOverGt(k) => 2 * k as usize + 1,
                    _ => 1,
                })
                .sum();
            if size != m {
                return Err(structure_error(format!("diagram has {size} coordinates, expected {m}")));
            }
        }
    }
    Ok(())
}

pub fn weight_of(ctx: AlgebraContext, d: &WeightDiagram) -> Result<BlockWeight> {
    if d.shape != Shape::Block(ctx) {
        return Err(structure_error(format!("diagram does not belong to {ctx}")));
    }
    check_structure(d)?;
    let mut coords = Vec::new();
    for (p, s) in d.cells.iter().rev() {
        for _ in 0..s.crosses() {
            coords.push(d.label(*p));
        }
    }
    validate_weight(ctx, &coords, d.sign).map_err(|e| match e {
        Error::SignRequired | Error::SignIllegal => e,
        other => structure_error(other.to_string()),
    })
}

/// Diagram of a general q(m) weight: `>` at a for a ≥ 0, `<` at |a| for
/// a < 0, glued pairs become crosses.
pub fn qdiagram_of(w: &GeneralQWeight) -> WeightDiagram {
    let half = !w.is_integral();
    let mut cells: BTreeMap<i64, Symbol> = BTreeMap::new();
    let zeros = w.coords().iter().filter(|c| c.is_zero()).count() as u32;
    if zeros > 0 {
        let s = if zeros % 2 == 1 { Symbol::TimesOverGt(zeros / 2) } else { Symbol::Times(zeros / 2) };
        cells.insert(0, s);
    }
    for &c in w.coords() {
        if c.is_zero() {
            continue;
        }
        let p = WeightDiagram::index_of(half, c.abs());
        let new = if c > HalfInt::ZERO { Symbol::Gt } else { Symbol::Lt };
        let merged = match cells.get(&p) {
            None => new,
            Some(_) => Symbol::Times(1),
        };
        cells.insert(p, merged);
    }
    WeightDiagram { shape: Shape::GeneralQ { m: w.m(), half }, sign: None, cells }
}

/// Inverse of [`qdiagram_of`].
pub fn qweight_of(d: &WeightDiagram) -> Result<GeneralQWeight> {
    if !matches!(d.shape, Shape::GeneralQ { .. }) {
        return Err(structure_error("not a general q diagram"));
    }
    check_structure(d)?;
    let mut coords = Vec::new();
    for (p, s) in d.cells() {
        let x = d.label(p);
        match s {
            Symbol::Times(k) if d.is_stack(p) => {
                coords.extend(std::iter::repeat_n(HalfInt::ZERO, 2 * k as usize))
            }
            Symbol::TimesOverGt(k) => {
                coords.extend(std::iter::repeat_n(HalfInt::ZERO, 2 * k as usize + 1))
            }
            Symbol::Times(_) => coords.extend([x, -x]),
            Symbol::Gt => coords.push(x),
            Symbol::Lt => coords.push(-x),
            Symbol::Empty => {}
        }
    }
    coords.sort_by(|a, b| b.cmp(a));
    GeneralQWeight::new(coords)
}

/// One arch. Three-legged and wobbly arches start at position 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Arch {
    Two { a: i64, b: i64 },
    Three { b1: i64, b2: i64 },
    Wobbly { b: i64 },
}

impl Arch {
    pub fn left(self) -> i64 {
        match self {
            Arch::Two { a, .. } => a,
            _ => 0,
        }
    }

    pub fn right_ends(self) -> Vec<i64> {
        match self {
            Arch::Two { b, .. } | Arch::Wobbly { b } => vec![b],
            Arch::Three { b1, b2 } => vec![b1, b2],
        }
    }

    pub fn max_end(self) -> i64 {
        match self {
            Arch::Two { b, .. } | Arch::Wobbly { b } => b,
            Arch::Three { b2, .. } => b2,
        }
    }

    /// Consecutive leg-to-leg segments.
    fn segments(self) -> Vec<(i64, i64)> {
        match self {
            Arch::Two { a, b } => vec![(a, b)],
            Arch::Three { b1, b2 } => vec![(0, b1), (b1, b2)],
            Arch::Wobbly { b } => vec![(0, b)],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArchDiagram {
    pub base: WeightDiagram,
    pub arches: Vec<Arch>,
}

impl ArchDiagram {
    /// Right legs of all arches starting at `p`.
    pub fn ends(&self, p: i64) -> BTreeSet<i64> {
        let stack = self.base.is_stack(p);
        self.arches
            .iter()
            .filter(|a| match a {
                Arch::Two { a, .. } => *a == p,
                _ => stack,
            })
            .flat_map(|a| a.right_ends())
            .collect()
    }

    /// Sorted by rightmost leg, e.g. `arc(1;2) arc(0;3,4)`.
    pub fn render(&self) -> String {
        let mut arches = self.arches.clone();
        arches.sort_by_key(|a| (a.max_end(), a.left()));
        let l = |p: i64| self.base.label(p);
        arches
            .iter()
            .map(|a| match *a {
                Arch::Two { a, b } => format!("arc({};{})", l(a), l(b)),
                Arch::Three { b1, b2 } => format!("arc(0;{},{})", l(b1), l(b2)),
                Arch::Wobbly { b } => format!("wob(0;{})", l(b)),
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Checks that every cross carries one arch, that arches do not cross and
    /// that no free position sits under a (non-wobbly) arch.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        let d = &self.base;
        for p in d.cross_positions() {
            let want = d.crosses_at(p) as usize;
            let got = self
                .arches
                .iter()
                .filter(|a| match a {
                    Arch::Two { a, .. } => *a == p,
                    Arch::Three { .. } => d.is_stack(p),
                    Arch::Wobbly { .. } => false,
                })
                .count();
            if got != want {
                return Err(format!("position {p}: {want} crosses but {got} arches"));
            }
        }
        if d.has_wobbly() != self.arches.iter().any(|a| matches!(a, Arch::Wobbly { .. })) {
            return Err("wobbly arch missing or unexpected".into());
        }
        let mut ends = BTreeSet::new();
        for a in &self.arches {
            for b in a.right_ends() {
                if d.symbol(b) != Symbol::Empty || !ends.insert(b) {
                    return Err(format!("leg at {b} does not land on a fresh empty position"));
                }
            }
        }
        let segs: Vec<(usize, (i64, i64))> = self
            .arches
            .iter()
            .enumerate()
            .flat_map(|(i, a)| a.segments().into_iter().map(move |s| (i, s)))
            .collect();
        for &(i, (x1, y1)) in &segs {
            for &(j, (x2, y2)) in &segs {
                if i != j && x1 < x2 && x2 < y1 && y1 < y2 {
                    return Err(format!("arches ({x1},{y1}) and ({x2},{y2}) cross"));
                }
            }
        }
        for a in &self.arches {
            if matches!(a, Arch::Wobbly { .. }) {
                continue;
            }
            for p in a.left() + 1..a.max_end() {
                if d.symbol(p) == Symbol::Empty && !ends.contains(&p) {
                    return Err(format!("free position {p} under an arch"));
                }
            }
        }
        Ok(())
    }
}

pub fn arcs(d: &WeightDiagram) -> ArchDiagram {
    let mut used: BTreeSet<i64> = BTreeSet::new();
    let next_free = |from: i64, used: &BTreeSet<i64>| -> i64 {
        let mut p = from;
        while d.symbol(p) != Symbol::Empty || used.contains(&p) {
            p += 1;
        }
        p
    };
    let mut arches = Vec::new();
    let stack = d.has_stack();
    // single crosses, right to left
    let singles: Vec<i64> = d
        .cells()
        .filter(|&(p, s)| !(stack && p == 0) && s == Symbol::Times(1))
        .map(|(p, _)| p)
        .collect();
    for &a in singles.iter().rev() {
        let b = next_free(a + 1, &used);
        used.insert(b);
        arches.push(Arch::Two { a, b });
    }
    // the zero stack, bottom up
    if stack {
        for j in 0..d.crosses_at(0) {
            if j == 0 && d.lowest_zero_two_legged() {
                let b = next_free(1, &used);
                used.insert(b);
                arches.push(Arch::Two { a: 0, b });
            } else {
                let b1 = next_free(1, &used);
                used.insert(b1);
                let b2 = next_free(b1 + 1, &used);
                used.insert(b2);
                arches.push(Arch::Three { b1, b2 });
            }
        }
    }
    if d.has_wobbly() {
        let b = next_free(1, &used);
        arches.push(Arch::Wobbly { b });
    }
    ArchDiagram { base: d.clone(), arches }
}

/// Right legs of the arches starting at `p`.
pub fn arc_ends(d: &WeightDiagram, p: i64) -> Result<BTreeSet<i64>> {
    let ok = d.crosses_at(p) > 0 || (d.is_stack(p) && matches!(d.symbol(0), Symbol::TimesOverGt(_)));
    if !ok {
        return Err(Error::NoSymbol(d.label(p).to_string()));
    }
    Ok(arcs(d).ends(p))
}

fn block_ctx(d: &WeightDiagram) -> Result<AlgebraContext> {
    match d.shape {
        Shape::Block(ctx) => Ok(ctx),
        Shape::GeneralQ { .. } => Err(Error::MoveUndefined("moves act on block diagrams".into())),
    }
}

fn take_cross(d: &mut WeightDiagram, p: i64) -> Result<()> {
    let s = d.symbol(p);
    let new = match s {
        Symbol::Times(1) => Symbol::Empty,
        Symbol::Times(k) if k > 1 => Symbol::Times(k - 1),
        Symbol::TimesOverGt(k) if k > 0 => Symbol::TimesOverGt(k - 1),
        _ => return Err(Error::MoveUndefined(format!("no cross at {}", d.label(p)))),
    };
    if new == Symbol::Empty {
        d.cells.remove(&p);
    } else {
        d.cells.insert(p, new);
    }
    Ok(())
}

fn put_cross(d: &mut WeightDiagram, p: i64) -> Result<()> {
    let s = d.symbol(p);
    let stack = d.is_stack(p);
    let new = match s {
        Symbol::Empty => Symbol::Times(1),
        Symbol::Times(k) if stack => Symbol::Times(k + 1),
        Symbol::TimesOverGt(k) if stack => Symbol::TimesOverGt(k + 1),
        _ => return Err(Error::MoveUndefined(format!("position {} is occupied", d.label(p)))),
    };
    if p < 0 && d.has_stack() {
        return Err(Error::MoveUndefined("negative position".into()));
    }
    d.cells.insert(p, new);
    Ok(())
}

/// Attach the sign the moved diagram needs: keep the old one if there was
/// one, otherwise take `sign`.
fn settle_sign(
    ctx: AlgebraContext,
    mut d: WeightDiagram,
    old: Option<Sign>,
    sign: Option<Sign>,
) -> Result<WeightDiagram> {
    let coords: Vec<HalfInt> = d
        .cells()
        .flat_map(|(p, s)| std::iter::repeat_n(p, s.crosses() as usize))
        .map(|p| d.label(p))
        .collect();
    d.sign = if sign_required(ctx, &coords) {
        match (old, sign) {
            (Some(o), Some(s)) if o != s => {
                return Err(Error::MoveUndefined("sign conflicts with the diagram".into()))
            }
            (Some(o), _) => Some(o),
            (None, Some(s)) => Some(s),
            (None, None) => return Err(Error::SignRequired),
        }
    } else {
        None
    };
    Ok(d)
}

/// (f)_a^q: one cross from `a` to the empty position `q > a`.
///
/// When the result needs a sign the diagram did not have, `sign` supplies
/// it; otherwise it is ignored.
pub fn move_one(d: &WeightDiagram, a: i64, q: i64, sign: Option<Sign>) -> Result<WeightDiagram> {
    let ctx = block_ctx(d)?;
    if q <= a {
        return Err(Error::MoveUndefined(format!("{q} is not right of {a}")));
    }
    if d.symbol(q) != Symbol::Empty {
        return Err(Error::MoveUndefined(format!("position {} is occupied", d.label(q))));
    }
    let mut out = d.clone();
    take_cross(&mut out, a)?;
    put_cross(&mut out, q)?;
    settle_sign(ctx, out, d.sign, sign)
}

/// (f)_{0,0}^{p,q}: two crosses from the zero stack to empty `0 < p < q`.
pub fn move_two(d: &WeightDiagram, p: i64, q: i64, sign: Option<Sign>) -> Result<WeightDiagram> {
    let ctx = block_ctx(d)?;
    if !d.has_stack() || d.crosses_at(0) < 2 {
        return Err(Error::MoveUndefined("fewer than two crosses at 0".into()));
    }
    if !(0 < p && p < q) {
        return Err(Error::MoveUndefined(format!("need 0 < {p} < {q}")));
    }
    if d.symbol(p) != Symbol::Empty || d.symbol(q) != Symbol::Empty {
        return Err(Error::MoveUndefined("target occupied".into()));
    }
    let mut out = d.clone();
    take_cross(&mut out, 0)?;
    take_cross(&mut out, 0)?;
    put_cross(&mut out, p)?;
    put_cross(&mut out, q)?;
    settle_sign(ctx, out, d.sign, sign)
}

/// Inverse of [`move_one`]: the cross at `q` goes back to `a < q` (the zero
/// stack or an empty position).
pub fn unmove_one(d: &WeightDiagram, q: i64, a: i64, sign: Option<Sign>) -> Result<WeightDiagram> {
    let ctx = block_ctx(d)?;
    if a >= q || d.crosses_at(q) == 0 || d.is_stack(q) {
        return Err(Error::MoveUndefined(format!("cannot pull {q} back to {a}")));
    }
    let mut out = d.clone();
    take_cross(&mut out, q)?;
    put_cross(&mut out, a)?;
    settle_sign(ctx, out, d.sign_if_kept(a), sign)
}

/// Inverse of [`move_two`].
pub fn unmove_two(d: &WeightDiagram, p: i64, q: i64, sign: Option<Sign>) -> Result<WeightDiagram> {
    let ctx = block_ctx(d)?;
    if !d.has_stack() || !(0 < p && p < q) || d.crosses_at(p) == 0 || d.crosses_at(q) == 0 {
        return Err(Error::MoveUndefined(format!("cannot pull {p},{q} back to 0")));
    }
    let mut out = d.clone();
    take_cross(&mut out, p)?;
    take_cross(&mut out, q)?;
    put_cross(&mut out, 0)?;
    put_cross(&mut out, 0)?;
    settle_sign(ctx, out, d.sign_if_kept(0), sign)
}

impl WeightDiagram {
    /// A sign survives a backward move unless crosses are added to the zero
    /// stack of an osp(2n+1|2n) diagram, where the new sign is free.
    fn sign_if_kept(&self, target: i64) -> Option<Sign> {
        match self.shape {
            Shape::Block(ctx) if ctx.osp_t() == Some(1) && self.is_stack(target) => None,
            _ => self.sign,
        }
    }
}

/// τ: osp(2n+2|2n) diagrams to osp(2n+1|2n) diagrams. Remove `>`, shift
/// left by one; crosses at 1 fall onto the zero stack.
pub fn tau(d: &WeightDiagram) -> Result<WeightDiagram> {
    let ctx = block_ctx(d)?;
    if ctx.osp_t() != Some(2) {
        return Err(Error::ContextMismatch(format!("tau needs osp(2n+2|2n), got {ctx}")));
    }
    let k = d.crosses_at(0);
    let one = d.crosses_at(1) > 0;
    let mut cells = BTreeMap::new();
    let zero = k + one as u32;
    if zero > 0 {
        cells.insert(0, Symbol::Times(zero));
    }
    for p in d.cross_positions() {
        if p >= 2 {
            cells.insert(p - 1, Symbol::Times(1));
        }
    }
    let sign = if one {
        Some(Sign::Plus)
    } else if k > 0 {
        Some(Sign::Minus)
    } else {
        None
    };
    let t1 = AlgebraContext::osp(ctx.n, 1);
    Ok(WeightDiagram { shape: Shape::Block(t1), sign, cells })
}

pub fn tau_inv(d: &WeightDiagram) -> Result<WeightDiagram> {
    let ctx = block_ctx(d)?;
    if ctx.osp_t() != Some(1) {
        return Err(Error::ContextMismatch(format!("tau_inv needs osp(2n+1|2n), got {ctx}")));
    }
    let c = d.crosses_at(0);
    let mut cells = BTreeMap::new();
    for p in d.cross_positions() {
        if p >= 1 {
            cells.insert(p + 1, Symbol::Times(1));
        }
    }
    let zero = match d.sign {
        Some(Sign::Plus) => {
            cells.insert(1, Symbol::Times(1));
            c - 1
        }
        _ => c,
    };
    cells.insert(0, Symbol::TimesOverGt(zero));
    let t2 = AlgebraContext::osp(ctx.n, 2);
    Ok(WeightDiagram { shape: Shape::Block(t2), sign: None, cells })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArchOrder {
    Less,
    Greater,
    Incomparable,
}

fn arch_greater(x: Arch, y: Arch) -> bool {
    use Arch::*;
    match (x, y) {
        (Two { a, b }, Two { a: a2, .. }) => a < a2 && a2 < b,
        (Three { b2, .. } | Wobbly { b: b2 }, Two { a: a2, .. }) => a2 < b2,
        (Three { b2, .. } | Wobbly { b: b2 }, Three { b2: c2, .. } | Wobbly { b: c2 }) => b2 > c2,
        (Two { .. }, _) => false,
    }
}

/// The partial order on arches of one arch diagram: the enclosing arch is
/// the greater one.
pub fn arch_compare(x: Arch, y: Arch) -> ArchOrder {
    if arch_greater(x, y) {
        ArchOrder::Greater
    } else if arch_greater(y, x) {
        ArchOrder::Less
    } else {
        ArchOrder::Incomparable
    }
}

fn token(d: &WeightDiagram, p: i64) -> String {
    let s = d.symbol(p);
    if d.is_stack(p) {
        return match s {
            Symbol::Empty => "o".into(),
            Symbol::Times(k) => format!("x^{k}"),
            Symbol::TimesOverGt(0) => ">".into(),
            Symbol::TimesOverGt(k) => format!("x^{k}>"),
            Symbol::Gt => ">".into(),
            Symbol::Lt => "<".into(),
        };
    }
    match s {
        Symbol::Empty => "o".into(),
        Symbol::Times(_) | Symbol::TimesOverGt(_) => "x".into(),
        Symbol::Gt => ">".into(),
        Symbol::Lt => "<".into(),
    }
}

fn is_gl(d: &WeightDiagram) -> bool {
    matches!(d.shape, Shape::Block(AlgebraContext { family: Family::Gl, .. }))
}

/// One token per position: `o`, `x`, `x^k`, `x^k>`, `>`, `<`.
pub fn render_ascii(d: &WeightDiagram) -> String {
    let mut parts: Vec<String> = Vec::new();
    let gl = is_gl(d);
    let first = d.cells.keys().next().copied();
    let last = d.cells.keys().next_back().copied();
    let start = if gl { first.unwrap_or(0) } else { 0 };
    let mut end = last.unwrap_or(start - 1);
    if d.has_stack() {
        end = end.max(0);
    }
    if d.half() {
        parts.push("half;".into());
    }
    if gl {
        parts.push(format!("offset={start};"));
    }
    if let Some(s) = d.sign {
        parts.push(s.symbol().to_string());
    }
    for p in start..=end {
        parts.push(token(d, p));
    }
    parts.join(" ")
}

impl fmt::Display for WeightDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_ascii(self))
    }
}

fn parse_token(tok: &str, stack: bool) -> Result<Symbol> {
    let bad = || Error::ParseError(format!("bad token {tok:?}"));
    let tok = tok.replace('×', "x").replace('∘', "o");
    Ok(match tok.as_str() {
        "o" => Symbol::Empty,
        "x" => Symbol::Times(1),
        "x>" => Symbol::TimesOverGt(1),
        ">" if stack => Symbol::TimesOverGt(0),
        ">" => Symbol::Gt,
        "<" => Symbol::Lt,
        t => {
            let body = t.strip_prefix("x^").ok_or_else(bad)?;
            match body.strip_suffix('>') {
                Some(k) => Symbol::TimesOverGt(k.parse().map_err(|_| bad())?),
                None => Symbol::Times(body.parse().map_err(|_| bad())?),
            }
        }
    })
}

/// Reads the format written by [`render_ascii`]. The shorthands
/// `x>` and `x` at position 0 are accepted too.
pub fn parse_ascii(text: &str, shape: Shape) -> Result<WeightDiagram> {
    let pieces: Vec<&str> = text.split(';').collect();
    let (body, directives) = pieces.split_last().expect("split yields one piece");
    let mut offset = 0i64;
    let mut saw_half = false;
    for dir in directives {
        let dir = dir.trim();
        if dir == "half" {
            saw_half = true;
        } else if let Some(k) = dir.strip_prefix("offset=") {
            offset = k.trim().parse().map_err(|_| Error::ParseError(format!("bad offset {k:?}")))?;
        } else if !dir.is_empty() {
            return Err(Error::ParseError(format!("unknown directive {dir:?}")));
        }
    }
    let mut d = WeightDiagram { shape, sign: None, cells: BTreeMap::new() };
    if saw_half && !d.half() {
        return Err(Error::ParseError("`half;` on an integral diagram".into()));
    }
    if offset != 0 && !is_gl(&d) {
        return Err(Error::ParseError("offset is only used for gl".into()));
    }
    let mut tokens: Vec<String> = body.split_whitespace().map(str::to_string).collect();
    if let Some(first) = tokens.first().cloned() {
        for (c, s) in [('+', Sign::Plus), ('-', Sign::Minus)] {
            if let Some(rest) = first.strip_prefix(c) {
                d.sign = Some(s);
                if rest.is_empty() {
                    tokens.remove(0);
                } else {
                    tokens[0] = rest.to_string();
                }
            }
        }
    }
    for (i, tok) in tokens.iter().enumerate() {
        let p = offset + i as i64;
        let sym = parse_token(tok, d.is_stack(p))?;
        if sym != Symbol::Empty {
            d.cells.insert(p, sym);
        }
    }
    // `x` at a `>`-carrying position 0 of a block diagram means `x^1>`
    match shape {
        Shape::Block(ctx) => {
            if ctx.has_zero_gt() {
                let k = d.cells.remove(&0).map_or(0, Symbol::crosses);
                if !matches!(d.symbol(0), Symbol::TimesOverGt(_)) {
                    d.cells.insert(0, Symbol::TimesOverGt(k));
                }
            }
            // reuse the structural checks of weight_of
            weight_of(ctx, &d).map_err(|e| Error::ParseError(e.to_string()))?;
        }
        Shape::GeneralQ { .. } => {
            check_structure(&d).map_err(|e| Error::ParseError(e.to_string()))?;
        }
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::{enumerate_block, parse_weight, DEFAULT_CAP};

    fn block(ctx: AlgebraContext, s: &str) -> WeightDiagram {
        parse_ascii(s, Shape::Block(ctx)).unwrap()
    }

    fn gq(s: &str) -> WeightDiagram {
        qdiagram_of(&GeneralQWeight::parse(s).unwrap())
    }

    fn ends(d: &WeightDiagram, p: i64) -> Vec<i64> {
        arc_ends(d, p).unwrap().into_iter().collect()
    }

    #[test]
    fn diagrams_of_zero() {
        let gl = AlgebraContext::gl(3);
        let d = diagram_of(gl, &parse_weight(gl, "2,1,0").unwrap());
        assert_eq!(render_ascii(&d), "offset=0; x x x");
        let osp = AlgebraContext::osp(3, 0);
        let d = diagram_of(osp, &parse_weight(osp, "0,0,0").unwrap());
        assert_eq!(render_ascii(&d), "x^3");
        assert_eq!(d.sign(), None);
        let q = AlgebraContext::q(5);
        let d = diagram_of(q, &parse_weight(q, "0,0").unwrap());
        assert_eq!(render_ascii(&d), "x^2>");
        let t2 = AlgebraContext::osp(1, 2);
        let d = diagram_of(t2, &parse_weight(t2, "0").unwrap());
        assert_eq!(render_ascii(&d), "x^1>");
        assert_eq!(block(t2, "x>"), d);
    }

    #[test]
    fn rendering_examples() {
        let gl = AlgebraContext::gl(3);
        assert_eq!(render_ascii(&diagram_of(gl, &parse_weight(gl, "3,1,0").unwrap())), "offset=0; x x o x");
        assert_eq!(render_ascii(&diagram_of(gl, &parse_weight(gl, "3,1,-2").unwrap())), "offset=-2; x o o x o x");
        let osp = AlgebraContext::osp(2, 0);
        assert_eq!(render_ascii(&diagram_of(osp, &parse_weight(osp, "+ 2,1").unwrap())), "+ o x x");
        let half = AlgebraContext::q_half(2).unwrap();
        assert_eq!(render_ascii(&diagram_of(half, &parse_weight(half, "3/2").unwrap())), "half; o x");
        let q = AlgebraContext::q(4);
        assert_eq!(render_ascii(&diagram_of(q, &parse_weight(q, "1,0").unwrap())), "x^1 x");
    }

    #[test]
    fn general_diagrams() {
        assert_eq!(render_ascii(&gq("1,0,-1,-3")), "> x o <");
        assert_eq!(render_ascii(&gq("3,0,0,-1")), "x^1 < o >");
        assert_eq!(render_ascii(&gq("4,2,-1,-2")), "o < x o >");
        let shape = Shape::GeneralQ { m: 4, half: false };
        assert_eq!(parse_ascii("x < o >", shape).unwrap(), gq("3,0,0,-1"));
        assert_eq!(render_ascii(&gq("3/2,-1/2,-3/2")), "half; < x");
        for s in ["1,0,-1,-3", "3,0,0,-1", "4,2,-1,-2", "2,1,0,0,0,0,0,-1", "3/2,-1/2,-3/2"] {
            let w = GeneralQWeight::parse(s).unwrap();
            assert_eq!(qweight_of(&qdiagram_of(&w)).unwrap(), w);
        }
    }

    #[test]
    fn arch_examples() {
        let q4 = AlgebraContext::q(4);
        let ad = arcs(&block(q4, "x^1 x"));
        assert_eq!(ad.render(), "arc(1;2) arc(0;3,4)");
        let osp = AlgebraContext::osp(3, 0);
        let ad = arcs(&block(osp, "x^2 x"));
        assert_eq!(
            ad.arches,
            vec![Arch::Two { a: 1, b: 2 }, Arch::Two { a: 0, b: 3 }, Arch::Three { b1: 4, b2: 5 }]
        );
        assert_eq!(arcs(&block(osp, "x^3")).render(), "arc(0;1) arc(0;2,3) arc(0;4,5)");
        let q8 = AlgebraContext::q(8);
        assert_eq!(ends(&block(q8, "x^2 x o o x"), 0), vec![3, 6, 7, 8]);
        assert_eq!(ends(&block(q4, "x^1 o x"), 0), vec![1, 4]);
        assert_eq!(ends(&block(AlgebraContext::osp(2, 0), "x^1 o x"), 0), vec![1]);
        let q3 = AlgebraContext::q(3);
        assert_eq!(ends(&block(q3, "x^1>"), 0), vec![1, 2, 3]);
        assert_eq!(arcs(&block(q3, "x^1>")).render(), "arc(0;1,2) wob(0;3)");
    }

    #[test]
    fn osp_ten_ten_arches() {
        // f = x^3 o o x x in osp(10|10)
        let osp = AlgebraContext::osp(5, 0);
        let ad = arcs(&block(osp, "x^3 o o x x"));
        assert_eq!(ad.render(), "arc(0;1) arc(4;5) arc(3;6) arc(0;2,7) arc(0;8,9)");
        ad.check_invariants().unwrap();
    }

    #[test]
    fn arc_ends_needs_a_symbol() {
        let q4 = AlgebraContext::q(4);
        assert!(matches!(arc_ends(&block(q4, "x^1 x"), 2), Err(Error::NoSymbol(_))));
        let q3 = AlgebraContext::q(3);
        assert_eq!(ends(&block(q3, "> x"), 0), vec![3]);
    }

    #[test]
    fn worked_moves() {
        let osp = AlgebraContext::osp(3, 0);
        let g = block(osp, "x^2 o x");
        assert_eq!(move_one(&g, 0, 3, None).unwrap(), block(osp, "x^1 o x x"));
        assert!(matches!(move_one(&g, 0, 2, None), Err(Error::MoveUndefined(_))));
        let f = block(osp, "x^2 x");
        let moved = move_two(&f, 3, 4, Some(Sign::Plus)).unwrap();
        assert_eq!(render_ascii(&moved), "+ o x o x x");
        assert_eq!(move_two(&f, 3, 4, None), Err(Error::SignRequired));
        let q8 = AlgebraContext::q(8);
        let f = block(q8, "x^2 x o o x");
        assert_eq!(render_ascii(&move_one(&f, 0, 7, None).unwrap()), "x^1 x o o x o o x");
    }

    #[test]
    fn tau_examples() {
        let t2 = AlgebraContext::osp(1, 2);
        let t1 = AlgebraContext::osp(1, 1);
        assert_eq!(render_ascii(&tau(&block(t2, "x^1>")).unwrap()), "- x^1");
        assert_eq!(render_ascii(&tau(&block(t2, "> x")).unwrap()), "+ x^1");
        assert_eq!(render_ascii(&tau(&block(t2, "> o x")).unwrap()), "o x");
        let t2b = AlgebraContext::osp(2, 2);
        assert_eq!(render_ascii(&tau(&block(t2b, "x^1> o x")).unwrap()), "- x^1 x");
        assert_eq!(tau_inv(&block(t1, "- x")).unwrap(), block(t2, "x^1>"));
        // tau agrees with the weight-level map
        let t2 = AlgebraContext::osp(3, 2);
        for w in enumerate_block(t2, HalfInt::int(6), None, DEFAULT_CAP).unwrap() {
            let d = diagram_of(t2, &w);
            let (c1, img) = crate::weights::tau_image(t2, &w);
            assert_eq!(tau(&d).unwrap(), diagram_of(c1, &img));
        }
    }

    #[test]
    fn arch_order() {
        let q4 = AlgebraContext::q(4);
        let ad = arcs(&block(q4, "x^1 x"));
        assert_eq!(arch_compare(ad.arches[1], ad.arches[0]), ArchOrder::Greater);
        let x = Arch::Two { a: 4, b: 5 };
        let y = Arch::Two { a: 3, b: 6 };
        assert_eq!(arch_compare(x, y), ArchOrder::Less);
        assert_eq!(
            arch_compare(Arch::Two { a: 1, b: 2 }, Arch::Two { a: 4, b: 5 }),
            ArchOrder::Incomparable
        );
    }

    #[test]
    fn parse_errors() {
        let q4 = AlgebraContext::q(4);
        let shape = Shape::Block(q4);
        assert!(parse_ascii("x^1 y", shape).is_err());
        assert!(parse_ascii("x x", shape).is_ok());
        assert!(parse_ascii("x^2 x", shape).is_err());
        assert!(parse_ascii("o x^2", shape).is_err());
        assert!(parse_ascii("> x", shape).is_err());
        let osp = Shape::Block(AlgebraContext::osp(2, 0));
        assert_eq!(parse_ascii("o x x", osp), Err(Error::ParseError("this weight needs a sign".into())));
    }
}
