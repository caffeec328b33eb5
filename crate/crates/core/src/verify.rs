//! Exhaustive property checks over finite windows of a block.

use std::fmt;

use rayon::prelude::*;

use crate::diagrams::{
    arcs, diagram_of, move_one, move_two, parse_ascii, render_ascii, tau, tau_inv, unmove_one,
    unmove_two, weight_of, Arch, Shape, Symbol,
};
use crate::error::Result;
use crate::extgraph::{
    check_bipartite, ext_block, induced, k0_graph, predecessors, successors, window_isomorphic,
    ExtGraph, ExtValue,
};
use crate::halfint::HalfInt;
use crate::kpoly::{k_hat, k_zero, kpoly, kpoly_q_recursive, s_zero, tail_diff, KPoly};
use crate::weights::{
    dominates, enumerate_block, pari_rel, tau_image, tau_preimage, AlgebraContext, Block,
    BlockWeight, Family, Sign, DEFAULT_CAP,
};

/// Pass/fail count for one property.
#[derive(Clone, Debug, Default)]
pub struct Tally {
    pub name: String,
    pub checked: usize,
    pub failures: Vec<String>,
}

impl Tally {
    fn new(name: &str) -> Self {
        Tally { name: name.into(), ..Default::default() }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn merge(&mut self, other: Tally) {
        self.checked += other.checked;
        self.failures.extend(other.failures);
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for Tally {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "{status} {:<14} {} checked, {} failed", self.name, self.checked, self.failures.len())?;
        for x in self.failures.iter().take(5) {
            write!(f, "\n    {x}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default)]
pub struct PropertyReport {
    pub tallies: Vec<Tally>,
}

impl PropertyReport {
    pub fn passed(&self) -> bool {
        self.tallies.iter().all(Tally::passed)
    }

    pub fn get(&self, name: &str) -> Option<&Tally> {
        self.tallies.iter().find(|t| t.name == name)
    }
}

impl fmt::Display for PropertyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for t in &self.tallies {
            writeln!(f, "{t}")?;
        }
        Ok(())
    }
}

fn window(ctx: AlgebraContext, min: Option<HalfInt>, max: HalfInt) -> Result<Vec<BlockWeight>> {
    enumerate_block(ctx, max, min, DEFAULT_CAP)
}

fn pairs(ws: &[BlockWeight]) -> Vec<(&BlockWeight, &BlockWeight)> {
    ws.iter().flat_map(|a| ws.iter().map(move |b| (a, b))).collect()
}

fn par_tally<T: Sync>(name: &str, items: &[T], f: impl Fn(&T, &mut Tally) + Sync) -> Tally {
    items
        .par_iter()
        .map(|x| {
            let mut t = Tally::new(name);
            f(x, &mut t);
            t
        })
        .reduce(|| Tally::new(name), |mut a, b| {
            a.merge(b);
            a
        })
}

/// Closed forms against the recursion, every ordered pair.
pub fn oracle(ctx: AlgebraContext, ws: &[BlockWeight]) -> Tally {
    par_tally("oracle", &pairs(ws), |(l, v), t| {
        let a = kpoly(ctx, l, v);
        let b = kpoly_q_recursive(ctx, l, v);
        t.check(a == b, || format!("K^{{{l},{v}}}: closed {a:?}, recursion {b:?}"));
    })
}

/// The shape and exponent parity of a nonzero K^{λ,ν}, λ ≠ ν.
pub fn parity_shape_ok(ctx: AlgebraContext, l: &BlockWeight, v: &BlockWeight, k: &KPoly) -> bool {
    let pari = pari_rel(ctx, l, v).expect("valid weights") as usize;
    let d = tail_diff(ctx, l, v);
    let terms = k.terms();
    let mass: u64 = terms.iter().map(|&(_, c)| c).sum();
    let top = k.degree().expect("nonzero");
    let low = terms[0].0;
    let top_ok = |shift: usize| top % 2 == (pari + 1 + shift) % 2;
    match ctx.family {
        Family::Gl => mass == 1 && top_ok(0),
        Family::Q { .. } if ctx.is_half() => mass == 1 && top_ok(0),
        Family::Osp { t: 0 } => match d {
            0 | 2 => mass == 1 && top_ok(0),
            1 => (mass == 1 || (mass == 2 && terms.len() == 2 && low % 2 == top % 2)) && top_ok(0),
            _ => false,
        },
        Family::Osp { .. } => (0..=2).contains(&d) && mass == 1 && top_ok(0),
        Family::Q { ell } => match d {
            0 => mass == 1 && top_ok(0),
            1 => mass == 2 && top_ok(ell as usize),
            _ => false,
        },
    }
}

pub fn parity(ctx: AlgebraContext, ws: &[BlockWeight]) -> Tally {
    par_tally("parity", &pairs(ws), |(l, v), t| {
        if l == v {
            return;
        }
        match kpoly(ctx, l, v) {
            Ok(k) if !k.is_zero() => {
                t.check(parity_shape_ok(ctx, l, v, &k), || format!("K^{{{l},{v}}} = {k}"));
            }
            _ => {}
        }
    })
}

/// K̂(λ,ν) lives in the single power w^{s_zero}, and nonzero K needs ν ≤ λ.
pub fn w_support(ctx: AlgebraContext, ws: &[BlockWeight]) -> Tally {
    par_tally("w-support", &pairs(ws), |(l, v), t| {
        if l == v {
            return;
        }
        let (Ok(h), Ok(s)) = (k_hat(ctx, l, v), s_zero(ctx, l, v)) else {
            t.check(false, || format!("k_hat({l},{v}) failed"));
            return;
        };
        let support = h.w_support();
        t.check(support.iter().all(|&x| x as usize == s), || format!("K̂({l},{v}) = {h}, s0 = {s}"));
        if let Ok(k) = kpoly(ctx, l, v) {
            if !k.is_zero() {
                t.check(dominates(ctx, l, v), || format!("K^{{{l},{v}}} = {k} but ν ≰ λ"));
            }
        }
    })
}

/// Successor counts and edge multiplicities.
pub fn out_degree(ctx: AlgebraContext, ws: &[BlockWeight]) -> Tally {
    let q_b0 = ctx.is_q() && !ctx.is_half();
    par_tally("out-degree", ws, |v, t| {
        let Ok(succ) = successors(ctx, v) else {
            t.check(false, || format!("successors({v}) failed"));
            return;
        };
        let tl = crate::weights::tail(ctx, v);
        let max_mult = if q_b0 { 2 } else { 1 };
        t.check(succ.iter().all(|&(_, k)| k <= max_mult), || format!("{v}: multiplicity above {max_mult}"));
        let doubles = succ.iter().filter(|&&(_, k)| k == 2).count();
        let n = ctx.n;
        let ok = match ctx.family {
            Family::Osp { t: 0 } if tl > 0 => true,
            Family::Q { .. } if q_b0 && tl > 0 => doubles <= 1,
            _ => succ.len() == n && doubles == 0,
        };
        t.check(ok, || {
            let s: Vec<String> = succ.iter().map(|(w, k)| format!("{w}x{k}")).collect();
            format!("{v} (tail {tl}): successors {}", s.join(" "))
        });
    })
}

/// Whether pari_abs two-colors the K⁰ graph (for q(m) integral weights,
/// restricted to λ_n > 1 + ℓ).
pub fn bipartite(ctx: AlgebraContext, ws: &[BlockWeight]) -> Tally {
    let mut t = Tally::new("bipartite");
    let g = match k0_graph(ctx, ws) {
        Ok(g) => g,
        Err(e) => {
            t.check(false, || e.to_string());
            return t;
        }
    };
    let g = if ctx.is_q() && !ctx.is_half() {
        let bound = HalfInt::int(1 + ctx.ell() as i64);
        induced(&g, |v| v.coords.last().is_some_and(|&c| c > bound))
    } else {
        g
    };
    let bad = check_bipartite(&g, |v| v.pari);
    t.checked += g.edges.len();
    for (a, b) in bad {
        t.failures.push(format!("{:?} -- {:?}", g.vertices[a].coords, g.vertices[b].coords));
    }
    t
}

fn reach(ctx: AlgebraContext) -> HalfInt {
    HalfInt::int(2 * ctx.n as i64 + 3)
}

/// Successors and predecessors of every weight in `inner` against a full
/// k_zero scan of `outer`, plus the ext bounds on `inner`.
pub fn brute_force(ctx: AlgebraContext, inner: &[BlockWeight], outer: &[BlockWeight]) -> Tally {
    let mut t = par_tally("brute-force", inner, |v, t| {
        let scan = |f: &dyn Fn(&BlockWeight) -> Option<u64>| -> Vec<(BlockWeight, u64)> {
            outer
                .iter()
                .filter(|w| *w != v)
                .filter_map(|w| f(w).filter(|&k| k > 0).map(|k| (w.clone(), k)))
                .collect()
        };
        let up = scan(&|w| k_zero(ctx, w, v).ok());
        let down = scan(&|w| k_zero(ctx, v, w).ok());
        let mut s = successors(ctx, v).unwrap_or_default();
        let mut p = predecessors(ctx, v).unwrap_or_default();
        s.sort();
        p.sort();
        t.check(s == up, || format!("successors of {v}: {s:?} vs scan {up:?}"));
        t.check(p == down, || format!("predecessors of {v}: {p:?} vs scan {down:?}"));
    });
    let ext = par_tally("brute-force", &pairs(inner), |(l, v), t| {
        let (Ok(a), Ok(b)) = (ext_block(ctx, l, v), ext_block(ctx, v, l)) else {
            t.check(false, || format!("ext({l},{v}) failed"));
            return;
        };
        t.check(a == b, || format!("ext({l},{v}) = {a} but ext({v},{l}) = {b}"));
        if l == v {
            return;
        }
        let k0 = if dominates(ctx, l, v) {
            k_zero(ctx, l, v).unwrap_or(0)
        } else if dominates(ctx, v, l) {
            k_zero(ctx, v, l).unwrap_or(0)
        } else {
            0
        };
        let ok = match a {
            ExtValue::Exact(x) => x <= k0,
            ExtValue::Bounded(lo, hi) => lo <= hi && hi == k0,
        };
        t.check(ok, || format!("ext({l},{v}) = {a}, k0 = {k0}"));
    });
    t.merge(ext);
    t
}

fn signed_moves(d: &crate::diagrams::WeightDiagram) -> Vec<(i64, i64, bool)> {
    let ad = arcs(d);
    let mut out = Vec::new();
    for a in d.cross_positions() {
        for q in ad.ends(a) {
            if q > a && d.symbol(q) == Symbol::Empty {
                out.push((a, q, false));
            }
        }
    }
    for arch in &ad.arches {
        if let Arch::Three { b1, b2 } = *arch {
            out.push((b1, b2, true));
        }
    }
    out
}

/// diagram_of/weight_of, render/parse, τ/τ⁻¹, moves and their inverses,
/// and the arch invariants.
pub fn round_trips(ctx: AlgebraContext, ws: &[BlockWeight]) -> Tally {
    par_tally("round-trips", ws, |w, t| {
        let d = diagram_of(ctx, w);
        t.check(weight_of(ctx, &d).as_ref() == Ok(w), || format!("weight_of(diagram_of({w}))"));
        let text = render_ascii(&d);
        t.check(parse_ascii(&text, Shape::Block(ctx)).as_ref() == Ok(&d), || format!("parse({text:?})"));
        if let Err(e) = arcs(&d).check_invariants() {
            t.check(false, || format!("{w}: {e}"));
        }
        match ctx.osp_t() {
            Some(2) => {
                let back = tau(&d).and_then(|x| tau_inv(&x));
                t.check(back.as_ref() == Ok(&d), || format!("tau_inv(tau({w}))"));
                let (c1, w1) = tau_image(ctx, w);
                t.check(tau_preimage(c1, &w1).1 == *w, || format!("tau on weight {w}"));
                let img = tau(&d).map(|x| arcs(&x).arches.len());
                t.check(img == Ok(arcs(&d).arches.len()), || format!("tau arch count {w}"));
            }
            Some(1) => {
                let back = tau_inv(&d).and_then(|x| tau(&x));
                t.check(back.as_ref() == Ok(&d), || format!("tau(tau_inv({w}))"));
            }
            _ => {}
        }
        for (a, q, two) in signed_moves(&d) {
            for s in [None, Some(Sign::Plus), Some(Sign::Minus)] {
                let moved = if two { move_two(&d, a, q, s) } else { move_one(&d, a, q, s) };
                let Ok(g) = moved else { continue };
                let Ok(_) = weight_of(ctx, &g) else {
                    t.check(false, || format!("move from {w} gives an invalid diagram"));
                    continue;
                };
                let back = if two { unmove_two(&g, a, q, d.sign()) } else { unmove_one(&g, q, a, d.sign()) };
                t.check(back.as_ref() == Ok(&d), || format!("move {a}->{q} on {w} does not invert"));
            }
        }
    })
}

/// B_{>p} with coordinates up to p + `size`, shifted down by p.
pub fn shifted_window(ctx: AlgebraContext, p: HalfInt, size: i64) -> Result<ExtGraph> {
    let step = if ctx.is_half() { HalfInt::HALF } else { HalfInt::int(1) };
    let ws = window(ctx, Some(p + step), p + HalfInt::int(size))?;
    let ws: Vec<BlockWeight> = ws.into_iter().filter(|w| w.coords().last().is_some_and(|&c| c > p)).collect();
    let mut g = k0_graph(ctx, &ws)?;
    for v in &mut g.vertices {
        for c in &mut v.coords {
            *c = *c - p;
        }
    }
    Ok(g)
}

/// The reference window: the half-integral block of q(2n) shifted by 1/2.
pub fn reference_window(n: usize, size: i64) -> Result<ExtGraph> {
    let ctx = AlgebraContext::q_half(2 * n)?;
    shifted_window(ctx, -HalfInt::HALF, size)
}

/// (B_{>p};K⁰) against the reference window, one sign class at a time.
pub fn window_iso(ctx: AlgebraContext, ps: &[i64], size: i64) -> Tally {
    let mut t = Tally::new("window-iso");
    let reference = match reference_window(ctx.n, size) {
        Ok(r) => r,
        Err(e) => {
            t.check(false, || e.to_string());
            return t;
        }
    };
    for &p in ps {
        let p = if ctx.is_half() { HalfInt::from_twice(2 * p + 1) } else { HalfInt::int(p) };
        let g = match shifted_window(ctx, p, size) {
            Ok(g) => g,
            Err(e) => {
                t.check(false, || e.to_string());
                continue;
            }
        };
        let classes: Vec<Option<Sign>> = if ctx.osp_t() == Some(0) {
            vec![Some(Sign::Plus), Some(Sign::Minus)]
        } else {
            vec![None]
        };
        for s in classes {
            let part = induced(&g, |v| v.sign == s);
            let ok = window_isomorphic(&part, &reference, |v| (v.coords.clone(), None));
            t.check(ok, || format!("{ctx} p={p} sign {s:?}: not isomorphic to the reference"));
        }
    }
    t
}

/// Runs every property on the window of `ctx` with coordinates in
/// [`min`, `max`].
pub fn run_suite(ctx: AlgebraContext, min: Option<HalfInt>, max: HalfInt) -> Result<PropertyReport> {
    let ws = window(ctx, min, max)?;
    let lo = min.map(|m| m - reach(ctx));
    let outer = window(ctx, lo.or(if ctx.family == Family::Gl { Some(-max - reach(ctx)) } else { None }), max + reach(ctx))?;
    let mut tallies = Vec::new();
    if ctx.is_q() {
        tallies.push(oracle(ctx, &ws));
    }
    tallies.push(parity(ctx, &ws));
    tallies.push(w_support(ctx, &ws));
    tallies.push(out_degree(ctx, &ws));
    tallies.push(bipartite(ctx, &ws));
    tallies.push(brute_force(ctx, &ws, &outer));
    tallies.push(round_trips(ctx, &ws));
    let size = (max.twice() / 2).clamp(2, 6);
    tallies.push(window_iso(ctx, &[0, 1, 2], size));
    tallies.push(goldens());
    Ok(PropertyReport { tallies })
}

fn wd(ctx: AlgebraContext, s: &str) -> BlockWeight {
    weight_of(ctx, &parse_ascii(s, Shape::Block(ctx)).expect("golden diagram")).expect("golden weight")
}

/// Worked examples with known K-polynomials: (algebra, λ, ν, K).
pub const GOLDEN_TABLES: &[(&str, &str, &str, &str)] = &[
    ("osp(4|4)", "x^1 o x", "x^1 x", "1"),
    ("osp(4|4)", "+ o x x", "x^1 x", "z"),
    ("osp(4|4)", "- o x o x", "x^1 x", "1"),
    ("osp(6|4)", "x^1> o x", "x^1> x", "1"),
    ("osp(6|4)", "> x x", "x^1> x", "z^2"),
    ("osp(6|4)", "> x o x", "x^1> x", "z"),
    ("osp(6|4)", "> x o o x", "x^1> x", "1"),
    ("osp(6|6)", "x^2 o x", "x^2 x", "1"),
    ("osp(6|6)", "x^1 x x", "x^2 x", "z+z^3"),
    ("osp(6|6)", "x^1 x o x", "x^2 x", "1+z^2"),
    ("osp(6|6)", "x^1 x o o x", "x^2 x", "z"),
    ("osp(6|6)", "x^1 x o o o x", "x^2 x", "1"),
    ("osp(10|10)", "x^3 o o x o x", "x^3 o o x x", "1"),
    ("osp(10|10)", "x^3 o o o x o x", "x^3 o o x x", "1"),
    ("osp(10|10)", "x^1 o x x x x", "x^3 o o x x", "z^2"),
    ("osp(10|10)", "x^1 o x x x o x", "x^3 o o x x", "z"),
    ("osp(10|10)", "x^1 o x x x o o x", "x^3 o o x x", "1"),
    ("osp(10|10)", "x^3 o o o x x", "x^3 o o x x", "z"),
    ("osp(10|10)", "x^2 o o x x x", "x^3 o o x x", "z^4"),
    ("osp(10|10)", "x^2 o o x x o x", "x^3 o o x x", "z^3"),
    ("osp(10|10)", "x^2 o o x x o o x", "x^3 o o x x", "z^2"),
    ("osp(10|10)", "x^2 o o x x o o o x", "x^3 o o x x", "z"),
    ("osp(10|10)", "x^2 o o x x o o o o x", "x^3 o o x x", "1"),
    ("osp(10|10)", "x^2 o o x x o o o o o x", "x^3 o o x x", "0"),
    ("q(4)", "x^1 o x", "x^1 x", "1"),
    ("q(4)", "o x o x", "x^1 x", "2"),
    ("q(4)", "o x x", "x^1 x", "2z"),
    ("q(8)", "x^1 x o o x x", "x^2 x o o x", "z+z^2"),
    ("q(8)", "x^1 x o o x o x", "x^2 x o o x", "1+z"),
    ("q(8)", "x^1 x o o x o o x", "x^2 x o o x", "2"),
    ("q(8)", "x^2 x o o o x", "x^2 x o o x", "1"),
    ("q(8)", "x^1 x o o o x x", "x^2 x o o o x", "2z"),
    ("q(8)", "x^1 x o o o x o x", "x^2 x o o o x", "2"),
    ("q(8)", "x^2 x o o o o x", "x^2 x o o o x", "1"),
];

/// The golden tables plus the closed formulas for K^{θ,0}, K^{ε1+δ1,0} and
/// K^{0,0}.
pub fn goldens() -> Tally {
    let mut t = Tally::new("goldens");
    for &(alg, l, v, want) in GOLDEN_TABLES {
        let ctx = AlgebraContext::parse(alg, Block::B0).expect("golden algebra");
        let got = kpoly(ctx, &wd(ctx, l), &wd(ctx, v)).map(|k| k.to_string());
        t.check(got.as_deref() == Ok(want), || format!("{alg} K^{{{l},{v}}} = {got:?}, want {want}"));
    }
    for (ctx, lam, want) in closed_formula_cases() {
        let zero = enumerate_block(ctx, HalfInt::ZERO, None, DEFAULT_CAP).expect("zero weight");
        let got = kpoly(ctx, &lam, &zero[0]);
        t.check(got.as_ref() == Ok(&want), || format!("{ctx} K^{{{lam},0}} = {got:?}, want {want}"));
    }
    t
}

fn first_coord(ctx: AlgebraContext, c: i64, sign: Option<Sign>) -> BlockWeight {
    let mut coords = vec![HalfInt::ZERO; ctx.n];
    coords[0] = HalfInt::int(c);
    crate::weights::validate_weight(ctx, &coords, sign).expect("closed formula weight")
}

/// (ctx, λ, K^{λ,0}) for the closed formulas.
pub fn closed_formula_cases() -> Vec<(AlgebraContext, BlockWeight, KPoly)> {
    let z = |e: usize| KPoly::monomial(e, 1);
    let mut out = Vec::new();
    for m in 2..=8 {
        let ctx = AlgebraContext::q(m);
        out.push((ctx, first_coord(ctx, 1, None), KPoly::one() + z(m - 2)));
    }
    for m in 2..=6 {
        let ctx = AlgebraContext::q(m);
        let zero = first_coord(ctx, 0, None);
        let want = (1..m).map(z).fold(KPoly::zero(), |a, b| a + b);
        out.push((ctx, zero, want));
    }
    // ε1+δ1 is (1,0,…,0), signed + when n = 1
    let osp2 = AlgebraContext::osp(1, 0);
    out.push((osp2, first_coord(osp2, 1, Some(Sign::Plus)), KPoly::one()));
    for n in 2..=4 {
        let ctx = AlgebraContext::osp(n, 0);
        out.push((ctx, first_coord(ctx, 1, None), KPoly::one() + z(2 * n - 2)));
    }
    for n in 1..=4 {
        let ctx = AlgebraContext::osp(n, 2);
        out.push((ctx, first_coord(ctx, 1, None), z(2 * n - 1)));
    }
    out
}

/// The K⁰ graph's edges as (ν, λ, multiplicity) in coordinate form.
pub fn edge_list(g: &ExtGraph) -> Vec<(String, String, u64)> {
    let label = |i: usize| {
        let v = &g.vertices[i];
        let c: Vec<String> = v.coords.iter().map(|x| x.to_string()).collect();
        match v.sign {
            Some(s) => format!("{};{}", c.join(","), s.symbol()),
            None => c.join(","),
        }
    };
    g.edges.iter().map(|e| (label(e.src), label(e.dst), e.multiplicity)).collect()
}
