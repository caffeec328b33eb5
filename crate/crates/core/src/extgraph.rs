//! ext(λ;ν), successors and predecessors, and the K⁰, ext and Ext¹ graphs.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::diagrams::{
    arcs, diagram_of, move_one, move_two, qdiagram_of, render_ascii, unmove_one, unmove_two,
    weight_of, Arch, Symbol, WeightDiagram,
};
use crate::error::{Error, Result};
use crate::halfint::HalfInt;
use crate::kpoly::{k_zero, k_zero_poly};
use crate::weights::{
    atypicality, check_weight, core_of, dominates, pari_abs, reduce, tail, tau_image,
    tau_preimage, AlgebraContext, BlockWeight, CentralCharacter, GeneralQWeight, Sign,
};

/// ext(λ;ν): known exactly, or only up to bounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ExtValue {
    Exact(u64),
    Bounded(u64, u64),
}

impl ExtValue {
    fn bounded(lo: u64, hi: u64) -> Self {
        if lo == hi {
            ExtValue::Exact(lo)
        } else {
            ExtValue::Bounded(lo, hi)
        }
    }

    pub fn hi(self) -> u64 {
        match self {
            ExtValue::Exact(v) | ExtValue::Bounded(_, v) => v,
        }
    }

    pub fn is_exact(self) -> bool {
        matches!(self, ExtValue::Exact(_))
    }
}

impl fmt::Display for ExtValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtValue::Exact(v) => write!(f, "Exact({v})"),
            ExtValue::Bounded(lo, hi) => write!(f, "Bounded({lo},{hi})"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum EdgeKind {
    K0,
    #[serde(rename = "EXT")]
    Ext,
    #[serde(rename = "EXT1")]
    Ext1,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Vertex {
    pub id: usize,
    pub coords: Vec<HalfInt>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sign: Option<Sign>,
    pub diagram: String,
    pub pari: u8,
    pub tail: usize,
    /// Which copy of a doubled Ext¹ vertex this is.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub copy: Option<u8>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Edge {
    pub src: usize,
    pub dst: usize,
    pub kind: EdgeKind,
    pub multiplicity: u64,
    pub kpoly: String,
    pub exact: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub parity_offset: Option<u8>,
}

/// A fundamental cycle of a doubled Ext¹ graph and the sum of the copy
/// shifts along it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CycleParity {
    pub vertices: Vec<usize>,
    pub parity: u8,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtGraph {
    pub algebra: String,
    pub block: String,
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub cycle_parities: Vec<CycleParity>,
}

fn uniq(ws: impl IntoIterator<Item = BlockWeight>) -> Vec<BlockWeight> {
    let mut v: Vec<BlockWeight> = ws.into_iter().collect();
    v.sort();
    v.dedup();
    v
}

const SIGN_CHOICES: [Option<Sign>; 3] = [None, Some(Sign::Plus), Some(Sign::Minus)];

/// Diagrams reachable from `ν` by moving crosses along its arches.
fn forward_candidates(ctx: AlgebraContext, nu: &BlockWeight) -> Vec<BlockWeight> {
    let d = diagram_of(ctx, nu);
    let ad = arcs(&d);
    let mut out = Vec::new();
    let mut push = |r: Result<WeightDiagram>| {
        if let Ok(w) = r.and_then(|g| weight_of(ctx, &g)) {
            out.push(w);
        }
    };
    for a in d.cross_positions() {
        for q in ad.ends(a) {
            if q > a && d.symbol(q) == Symbol::Empty {
                for s in SIGN_CHOICES {
                    push(move_one(&d, a, q, s));
                }
            }
        }
    }
    if ctx.is_osp() {
        for arch in &ad.arches {
            if let Arch::Three { b1, b2 } = *arch {
                for s in SIGN_CHOICES {
                    push(move_two(&d, b1, b2, s));
                }
            }
        }
    }
    uniq(out)
}

/// Diagrams from which `λ` is reachable by one forward move.
fn backward_candidates(ctx: AlgebraContext, lambda: &BlockWeight) -> Vec<BlockWeight> {
    let d = diagram_of(ctx, lambda);
    let stack = d.has_stack();
    let mut out = Vec::new();
    let mut push = |r: Result<WeightDiagram>| {
        if let Ok(w) = r.and_then(|g| weight_of(ctx, &g)) {
            out.push(w);
        }
    };
    let crosses: Vec<i64> = d.cross_positions().into_iter().filter(|&p| !(stack && p == 0)).collect();
    let reach = 2 * ctx.n as i64 + 3;
    for &q in &crosses {
        let lo = if stack { 0 } else { q - reach };
        for a in lo..q {
            if d.symbol(a) == Symbol::Empty || (stack && a == 0) {
                for s in SIGN_CHOICES {
                    push(unmove_one(&d, q, a, s));
                }
            }
        }
    }
    if ctx.is_osp() {
        for (i, &p) in crosses.iter().enumerate() {
            for &q in &crosses[i + 1..] {
                for s in SIGN_CHOICES {
                    push(unmove_two(&d, p, q, s));
                }
            }
        }
    }
    uniq(out)
}

fn through_tau(
    ctx: AlgebraContext,
    w: &BlockWeight,
    f: fn(AlgebraContext, &BlockWeight) -> Vec<BlockWeight>,
) -> Vec<BlockWeight> {
    if ctx.osp_t() == Some(1) {
        let (c2, w2) = tau_preimage(ctx, w);
        uniq(f(c2, &w2).iter().map(|v| tau_image(c2, v).1))
    } else {
        f(ctx, w)
    }
}

/// All λ with k_zero(λ, ν) > 0, with that multiplicity.
pub fn successors(ctx: AlgebraContext, nu: &BlockWeight) -> Result<Vec<(BlockWeight, u64)>> {
    check_weight(ctx, nu)?;
    let mut out = Vec::new();
    for lam in through_tau(ctx, nu, forward_candidates) {
        if lam == *nu {
            continue;
        }
        let k = k_zero(ctx, &lam, nu)?;
        if k > 0 {
            out.push((lam, k));
        }
    }
    Ok(out)
}

/// All ν ≠ λ with k_zero(λ, ν) > 0, with that multiplicity.
pub fn predecessors(ctx: AlgebraContext, lambda: &BlockWeight) -> Result<Vec<(BlockWeight, u64)>> {
    check_weight(ctx, lambda)?;
    let mut out = Vec::new();
    for nu in through_tau(ctx, lambda, backward_candidates) {
        if nu == *lambda {
            continue;
        }
        let k = k_zero(ctx, lambda, &nu)?;
        if k > 0 {
            out.push((nu, k));
        }
    }
    Ok(out)
}

fn block_name(ctx: AlgebraContext) -> String {
    ctx.block.to_string()
}

fn block_vertex(ctx: AlgebraContext, id: usize, w: &BlockWeight) -> Vertex {
    Vertex {
        id,
        coords: w.coords().to_vec(),
        sign: w.sign(),
        diagram: render_ascii(&diagram_of(ctx, w)),
        pari: pari_abs(ctx, w),
        tail: tail(ctx, w),
        copy: None,
    }
}

fn index_vertices(ctx: AlgebraContext, vertices: &[BlockWeight]) -> Result<Vec<BlockWeight>> {
    for w in vertices {
        check_weight(ctx, w)?;
    }
    Ok(uniq(vertices.iter().cloned()))
}

/// The induced subgraph of G(B;K⁰) on `vertices`: an edge ν→λ of
/// multiplicity k_zero(λ;ν) whenever that is positive.
pub fn k0_graph(ctx: AlgebraContext, vertices: &[BlockWeight]) -> Result<ExtGraph> {
    let ws = index_vertices(ctx, vertices)?;
    let ids: HashMap<&BlockWeight, usize> = ws.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let per_vertex: Vec<Vec<Edge>> = ws
        .par_iter()
        .enumerate()
        .map(|(src, nu)| -> Result<Vec<Edge>> {
            let mut edges = Vec::new();
            for (lam, k) in successors(ctx, nu)? {
                if let Some(&dst) = ids.get(&lam) {
                    let poly = k_zero_poly(ctx, &lam, nu)?.map_or("?".into(), |p| p.to_string());
                    edges.push(Edge {
                        src,
                        dst,
                        kind: EdgeKind::K0,
                        multiplicity: k,
                        kpoly: poly,
                        exact: true,
                        parity_offset: None,
                    });
                }
            }
            Ok(edges)
        })
        .collect::<Result<_>>()?;
    let mut edges: Vec<Edge> = per_vertex.into_iter().flatten().collect();
    edges.sort_by_key(|e| (e.src, e.dst));
    Ok(ExtGraph {
        algebra: ctx.to_string(),
        block: block_name(ctx),
        vertices: ws.iter().enumerate().map(|(i, w)| block_vertex(ctx, i, w)).collect(),
        edges,
        cycle_parities: Vec::new(),
    })
}

/// The ext graph on `vertices`: one undirected edge per pair with a
/// possibly nonzero ext, no loops.
pub fn ext_graph(ctx: AlgebraContext, vertices: &[BlockWeight]) -> Result<ExtGraph> {
    let mut g = k0_graph(ctx, vertices)?;
    let ws: Vec<BlockWeight> = index_vertices(ctx, vertices)?;
    let edges: Vec<Edge> = g
        .edges
        .par_iter()
        .map(|e| -> Result<Option<Edge>> {
            let v = ext_block(ctx, &ws[e.dst], &ws[e.src])?;
            Ok((v.hi() > 0).then(|| Edge {
                src: e.src.min(e.dst),
                dst: e.src.max(e.dst),
                kind: EdgeKind::Ext,
                multiplicity: v.hi(),
                kpoly: e.kpoly.clone(),
                exact: v.is_exact(),
                parity_offset: None,
            }))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    let mut edges = edges;
    edges.sort_by_key(|e| (e.src, e.dst));
    g.edges = edges;
    Ok(g)
}

/// The two q(2), q(3) integral chains: 0–θ–2θ–… and θ–0–2θ–3θ–….
fn q_rank_one(ell: u8, hi: i64, lo: i64) -> ExtValue {
    let linked = match ell {
        0 => hi == lo + 1,
        _ => (hi, lo) == (1, 0) || (hi, lo) == (2, 0) || (lo >= 2 && hi == lo + 1),
    };
    ExtValue::Exact(linked as u64)
}

/// ext(λ;ν) for two weights of one block. Symmetric.
pub fn ext_block(ctx: AlgebraContext, lambda: &BlockWeight, nu: &BlockWeight) -> Result<ExtValue> {
    check_weight(ctx, lambda)?;
    check_weight(ctx, nu)?;
    let q_b0 = ctx.is_q() && !ctx.is_half();
    if lambda == nu {
        if q_b0 && tail(ctx, lambda) > 0 {
            return Ok(ExtValue::Bounded(0, 1));
        }
        return Ok(ExtValue::Exact(0));
    }
    let (lam, nu) = if dominates(ctx, lambda, nu) {
        (lambda, nu)
    } else if dominates(ctx, nu, lambda) {
        (nu, lambda)
    } else {
        return Ok(ExtValue::Exact(0));
    };
    let k0 = k_zero(ctx, lam, nu)?;
    if !q_b0 {
        return Ok(ExtValue::Exact(k0));
    }
    let ell = ctx.ell();
    let n = ctx.n;
    let c = |w: &BlockWeight, i: usize| w.coords()[i].to_integer().expect("integral block");
    if n == 1 {
        return Ok(q_rank_one(ell, c(lam, 0), c(nu, 0)));
    }
    let last = c(lam, n - 1);
    if last > 1 + ell as i64 || (ell == 1 && last == 1 && c(lam, n - 2) > 4) {
        return Ok(ExtValue::Exact(k0));
    }
    Ok(ExtValue::bounded(0, k0))
}

/// ext(η;ζ) for two q(m) weights, through the reduction to a principal
/// block.
pub fn ext_general_q(eta: &GeneralQWeight, zeta: &GeneralQWeight) -> Result<ExtValue> {
    if eta.m() != zeta.m() {
        return Err(Error::SizeMismatch);
    }
    if eta.is_integral() != zeta.is_integral() || core_of(eta) != core_of(zeta) {
        return Ok(ExtValue::Exact(0));
    }
    if atypicality(eta) == 0 {
        if eta == zeta && eta.has_zero() {
            return Ok(ExtValue::Bounded(0, 1));
        }
        return Ok(ExtValue::Exact(0));
    }
    let (ctx, a) = reduce(eta)?;
    let (ctx2, b) = reduce(zeta)?;
    debug_assert_eq!(ctx, ctx2);
    let v = ext_block(ctx, &a, &b)?;
    assert!(v.hi() <= 2, "ext above 2 for {ctx}: {v}");
    Ok(v)
}

fn general_vertex(id: usize, w: &GeneralQWeight, copy: Option<u8>) -> Vertex {
    let (pari, tl) = match reduce(w) {
        Ok((c, r)) => (pari_abs(c, &r), tail(c, &r)),
        Err(_) => (0, 0),
    };
    Vertex {
        id,
        coords: w.coords().to_vec(),
        sign: None,
        diagram: render_ascii(&qdiagram_of(w)),
        pari,
        tail: tl,
        copy,
    }
}

/// The Ext¹ graph of the q(m) weights `vertices`, all with central
/// character `chi`.
///
/// When `chi` is Π-invariant this is the ext graph plus a loop at each
/// weight with a zero coordinate. Otherwise every weight ν becomes
/// (ν,0), (ν,1); copy shifts on ext edges are fixed to 0 along a
/// breadth-first tree, and the remaining ones are reported as inexact.
pub fn ext1_graph_q(chi: &CentralCharacter, vertices: &[GeneralQWeight]) -> Result<ExtGraph> {
    let mut ws: Vec<GeneralQWeight> = vertices.to_vec();
    ws.sort_by(|a, b| a.coords().cmp(b.coords()));
    ws.dedup();
    for w in &ws {
        if core_of(w) != *chi {
            return Err(Error::MixedCharacters);
        }
    }
    let m = ws.first().map_or(0, |w| w.m());
    if ws.iter().any(|w| w.m() != m) {
        return Err(Error::SizeMismatch);
    }
    let pairs: Vec<(usize, usize)> =
        (0..ws.len()).flat_map(|i| (i + 1..ws.len()).map(move |j| (i, j))).collect();
    let ext: Vec<(usize, usize, ExtValue)> = pairs
        .par_iter()
        .map(|&(i, j)| ext_general_q(&ws[i], &ws[j]).map(|v| (i, j, v)))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .filter(|(_, _, v)| v.hi() > 0)
        .collect();
    let algebra = format!("q({m})");
    let block = chi.to_string();
    let edge = |src, dst, v: ExtValue, offset| Edge {
        src,
        dst,
        kind: EdgeKind::Ext1,
        multiplicity: v.hi(),
        kpoly: String::new(),
        exact: v.is_exact(),
        parity_offset: offset,
    };
    if chi.is_pi_invariant() {
        let mut edges: Vec<Edge> = ext.iter().map(|&(i, j, v)| edge(i, j, v, None)).collect();
        for (i, w) in ws.iter().enumerate() {
            if w.has_zero() {
                edges.push(edge(i, i, ExtValue::Exact(1), None));
            }
        }
        edges.sort_by_key(|e| (e.src, e.dst));
        return Ok(ExtGraph {
            algebra,
            block,
            vertices: ws.iter().enumerate().map(|(i, w)| general_vertex(i, w, None)).collect(),
            edges,
            cycle_parities: Vec::new(),
        });
    }
    // breadth-first spanning forest from the least vertex of each component
    let mut adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &(i, j, _) in &ext {
        adj.entry(i).or_default().push(j);
        adj.entry(j).or_default().push(i);
    }
    let mut parent: Vec<Option<usize>> = vec![None; ws.len()];
    let mut seen = vec![false; ws.len()];
    let mut tree: BTreeSet<(usize, usize)> = BTreeSet::new();
    for root in 0..ws.len() {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for &v in adj.get(&u).into_iter().flatten() {
                if !seen[v] {
                    seen[v] = true;
                    parent[v] = Some(u);
                    tree.insert((u.min(v), u.max(v)));
                    queue.push_back(v);
                }
            }
        }
    }
    let tails: Vec<usize> = ws.iter().map(|w| reduce(w).map_or(0, |(c, r)| tail(c, &r))).collect();
    // doubled vertex (ν, i) has id 2ν + i
    let id = |v: usize, c: u8| 2 * v + c as usize;
    let mut edges: BTreeMap<(usize, usize), Edge> = BTreeMap::new();
    let mut add = |a: usize, b: usize, e: Edge| {
        let key = (a.min(b), a.max(b));
        edges.entry(key).or_insert(Edge { src: key.0, dst: key.1, ..e });
    };
    for (v, w) in ws.iter().enumerate() {
        if w.has_zero() {
            add(id(v, 0), id(v, 1), edge(0, 0, ExtValue::Exact(1), None));
        }
    }
    for &(x, y, val) in &ext {
        // ν the smaller of the pair, λ the larger
        let (nu, lam) = (x.min(y), x.max(y));
        let i = ((tails[lam] as i64 - tails[nu] as i64).rem_euclid(2)) as u8;
        let j = 0u8;
        let exact = val.is_exact() && tree.contains(&(nu, lam));
        let val = if exact { val } else { ExtValue::Bounded(0, val.hi()) };
        for (a, b) in [
            (id(nu, 0), id(lam, j)),
            (id(lam, j), id(nu, i)),
            (id(nu, 1), id(lam, j ^ 1)),
            (id(lam, j ^ 1), id(nu, i ^ 1)),
        ] {
            add(a, b, edge(0, 0, val, Some(i)));
        }
    }
    let mut cycle_parities = Vec::new();
    for &(x, y, _) in &ext {
        if tree.contains(&(x.min(y), x.max(y))) {
            continue;
        }
        let path = |mut v: usize| {
            let mut p = vec![v];
            while let Some(u) = parent[v] {
                p.push(u);
                v = u;
            }
            p
        };
        let (px, py) = (path(x), path(y));
        let common: BTreeSet<usize> = px.iter().copied().collect::<BTreeSet<_>>();
        let meet = *py.iter().find(|v| common.contains(v)).expect("same component");
        let mut cycle: Vec<usize> = px.iter().copied().take_while(|&v| v != meet).collect();
        cycle.push(meet);
        let back: Vec<usize> = py.iter().copied().take_while(|&v| v != meet).collect();
        cycle.extend(back.into_iter().rev());
        // every shift is gauged to 0, so the sum is that of the assumed shifts
        cycle_parities.push(CycleParity { vertices: cycle, parity: 0 });
    }
    let mut vs = Vec::new();
    for (v, w) in ws.iter().enumerate() {
        for c in 0..2u8 {
            vs.push(general_vertex(id(v, c), w, Some(c)));
        }
    }
    Ok(ExtGraph { algebra, block, vertices: vs, edges: edges.into_values().collect(), cycle_parities })
}

/// Merges vertices that differ only by sign; parallel edges keep the
/// larger multiplicity.
pub fn unsigned_quotient(g: &ExtGraph) -> ExtGraph {
    let keys: Vec<Vec<HalfInt>> = g.vertices.iter().map(|v| v.coords.clone()).collect();
    let distinct: BTreeSet<Vec<HalfInt>> = keys.iter().cloned().collect();
    let new_id: BTreeMap<&Vec<HalfInt>, usize> = distinct.iter().enumerate().map(|(i, k)| (k, i)).collect();
    let mut vertices: Vec<Vertex> = Vec::new();
    for v in &g.vertices {
        let id = new_id[&v.coords];
        if vertices.len() == id {
            vertices.push(Vertex { id, sign: None, ..v.clone() });
        }
    }
    let mut edges: BTreeMap<(usize, usize, EdgeKind), Edge> = BTreeMap::new();
    for e in &g.edges {
        let (s, d) = (new_id[&keys[e.src]], new_id[&keys[e.dst]]);
        let ne = Edge { src: s, dst: d, ..e.clone() };
        edges
            .entry((s, d, e.kind))
            .and_modify(|old| {
                if ne.multiplicity > old.multiplicity {
                    *old = ne.clone();
                }
            })
            .or_insert(ne);
    }
    ExtGraph {
        algebra: g.algebra.clone(),
        block: g.block.clone(),
        vertices,
        edges: edges.into_values().collect(),
        cycle_parities: Vec::new(),
    }
}

/// Non-loop edges whose endpoints get the same color.
pub fn check_bipartite(g: &ExtGraph, color: impl Fn(&Vertex) -> u8) -> Vec<(usize, usize)> {
    g.edges
        .iter()
        .filter(|e| e.src != e.dst && color(&g.vertices[e.src]) == color(&g.vertices[e.dst]))
        .map(|e| (e.src, e.dst))
        .collect()
}

/// The subgraph induced on the vertices satisfying `keep`, renumbered.
pub fn induced(g: &ExtGraph, keep: impl Fn(&Vertex) -> bool) -> ExtGraph {
    let mut map = BTreeMap::new();
    let mut vertices = Vec::new();
    for v in &g.vertices {
        if keep(v) {
            map.insert(v.id, vertices.len());
            vertices.push(Vertex { id: vertices.len(), ..v.clone() });
        }
    }
    let edges = g
        .edges
        .iter()
        .filter_map(|e| Some(Edge { src: *map.get(&e.src)?, dst: *map.get(&e.dst)?, ..e.clone() }))
        .collect();
    ExtGraph { vertices, edges, cycle_parities: Vec::new(), ..g.clone() }
}

type Label = (Vec<HalfInt>, Option<Sign>);

/// Whether `relabel` maps the vertices of `g1` bijectively onto those of
/// `g2` (matched by coordinates and sign) and carries the edge multiset,
/// with multiplicities, onto that of `g2`.
pub fn window_isomorphic(g1: &ExtGraph, g2: &ExtGraph, relabel: impl Fn(&Vertex) -> Label) -> bool {
    let l1: Vec<Label> = g1.vertices.iter().map(&relabel).collect();
    let l2: Vec<Label> = g2.vertices.iter().map(|v| (v.coords.clone(), v.sign)).collect();
    let s1: BTreeSet<&Label> = l1.iter().collect();
    let s2: BTreeSet<&Label> = l2.iter().collect();
    if s1.len() != l1.len() || s1 != s2 {
        return false;
    }
    let edges = |g: &ExtGraph, l: &[Label]| {
        let mut v: Vec<(Label, Label, EdgeKind, u64)> = g
            .edges
            .iter()
            .map(|e| (l[e.src].clone(), l[e.dst].clone(), e.kind, e.multiplicity))
            .collect();
        v.sort();
        v
    };
    edges(g1, &l1) == edges(g2, &l2)
}

impl ExtGraph {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("graph serializes")
    }

    /// Graphviz source. Double edges are drawn twice, inexact edges dashed,
    /// ext edges without arrowheads.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph G {\n");
        s.push_str(&format!("  label=\"{} {}\";\n", self.algebra, self.block));
        for v in &self.vertices {
            let copy = v.copy.map_or(String::new(), |c| format!(" [{c}]"));
            s.push_str(&format!("  v{} [label=\"{}{}\"];\n", v.id, v.diagram, copy));
        }
        for e in &self.edges {
            let mut attrs = Vec::new();
            if !e.exact {
                attrs.push("style=dashed".to_string());
            }
            if e.kind != EdgeKind::K0 {
                attrs.push("dir=none".to_string());
            }
            if !e.kpoly.is_empty() && e.kpoly != "1" && e.kpoly != "2" {
                attrs.push(format!("label=\"{}\"", e.kpoly));
            }
            let attrs = if attrs.is_empty() { String::new() } else { format!(" [{}]", attrs.join(", ")) };
            for _ in 0..e.multiplicity.max(1) {
                s.push_str(&format!("  v{} -> v{}{};\n", e.src, e.dst, attrs));
            }
        }
        s.push_str("}\n");
        s
    }

    /// One line per edge, `src -> dst xk [poly]`.
    pub fn to_ascii(&self) -> String {
        let label = |v: &Vertex| {
            let coords: Vec<String> = v.coords.iter().map(|c| c.to_string()).collect();
            let sign = v.sign.map_or(String::new(), |s| format!(";{}", s.symbol()));
            let copy = v.copy.map_or(String::new(), |c| format!("#{c}"));
            format!("({}{sign}){copy}", coords.join(","))
        };
        let mut s = format!("{} {}: {} vertices, {} edges\n", self.algebra, self.block, self.vertices.len(), self.edges.len());
        for e in &self.edges {
            let arrow = if e.kind == EdgeKind::K0 { "->" } else { "--" };
            let mult = if e.multiplicity == 1 { String::new() } else { format!(" x{}", e.multiplicity) };
            let exact = if e.exact { "" } else { " (bounded)" };
            let poly = if e.kpoly.is_empty() || e.kind != EdgeKind::K0 { String::new() } else { format!(" [{}]", e.kpoly) };
            s.push_str(&format!(
                "{} {arrow} {}{mult}{poly}{exact}\n",
                label(&self.vertices[e.src]),
                label(&self.vertices[e.dst])
            ));
        }
        s
    }

    /// Out-degree of `v` counted with multiplicity.
    pub fn out_degree(&self, v: usize) -> u64 {
        self.edges.iter().filter(|e| e.src == v).map(|e| e.multiplicity).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::{enumerate_block, parse_weight, DEFAULT_CAP};

    fn w(c: AlgebraContext, s: &str) -> BlockWeight {
        parse_weight(c, s).unwrap()
    }

    fn show(v: &[(BlockWeight, u64)]) -> Vec<String> {
        v.iter().map(|(w, k)| format!("{w}:{k}")).collect()
    }

    #[test]
    fn successor_examples() {
        let gl = AlgebraContext::gl(3);
        let s = successors(gl, &w(gl, "2,1,0")).unwrap();
        assert_eq!(show(&s), ["(3,1,0):1", "(4,2,0):1", "(5,2,1):1"]);
        let q3 = AlgebraContext::q(3);
        let s = successors(q3, &w(q3, "0")).unwrap();
        assert_eq!(show(&s), ["(1):1", "(2):2"]);
        let o = AlgebraContext::osp(1, 0);
        let s = successors(o, &w(o, "0")).unwrap();
        assert_eq!(show(&s), ["(1;+):1", "(1;-):1"]);
    }

    #[test]
    fn predecessor_examples() {
        for c in [AlgebraContext::osp(2, 0), AlgebraContext::osp(2, 1), AlgebraContext::q(5)] {
            let zero = enumerate_block(c, HalfInt::ZERO, None, DEFAULT_CAP).unwrap();
            for z in zero {
                assert!(predecessors(c, &z).unwrap().is_empty());
            }
        }
        let q2 = AlgebraContext::q(2);
        assert_eq!(show(&predecessors(q2, &w(q2, "1")).unwrap()), ["(0):2"]);
        let gl = AlgebraContext::gl(1);
        assert_eq!(show(&predecessors(gl, &w(gl, "4")).unwrap()), ["(3):1"]);
    }

    #[test]
    fn q3_chain() {
        let q3 = AlgebraContext::q(3);
        let ws = enumerate_block(q3, HalfInt::int(3), None, DEFAULT_CAP).unwrap();
        let g = ext_graph(q3, &ws).unwrap();
        let e: Vec<(usize, usize)> = g.edges.iter().map(|e| (e.src, e.dst)).collect();
        assert_eq!(e, [(0, 1), (0, 2), (2, 3)]);
        assert_eq!(ext_block(q3, &w(q3, "2"), &w(q3, "1")).unwrap(), ExtValue::Exact(0));
        assert_eq!(ext_block(q3, &w(q3, "0"), &w(q3, "2")).unwrap(), ExtValue::Exact(1));
    }

    #[test]
    fn osp42_fork() {
        let c = AlgebraContext::osp(1, 2);
        let ws = enumerate_block(c, HalfInt::int(3), None, DEFAULT_CAP).unwrap();
        let g = ext_graph(c, &ws).unwrap();
        let e: Vec<(usize, usize)> = g.edges.iter().map(|e| (e.src, e.dst)).collect();
        assert_eq!(e, [(0, 2), (1, 2), (2, 3)]);
    }

    #[test]
    fn ext_values() {
        assert_eq!(ExtValue::Bounded(0, 2).to_string(), "Bounded(0,2)");
        let q4 = AlgebraContext::q(4);
        assert_eq!(ext_block(q4, &w(q4, "1,0"), &w(q4, "1,0")).unwrap(), ExtValue::Bounded(0, 1));
        assert_eq!(ext_block(q4, &w(q4, "2,1"), &w(q4, "2,1")).unwrap(), ExtValue::Exact(0));
        let gl = AlgebraContext::gl(2);
        assert_eq!(ext_block(gl, &w(gl, "3,0"), &w(gl, "2,1")).unwrap(), ExtValue::Exact(0));
    }

    #[test]
    fn general_q() {
        let eta = GeneralQWeight::parse("1,0,-1,-3").unwrap();
        let zeta = GeneralQWeight::parse("3,0,0,-1").unwrap();
        assert_eq!(ext_general_q(&eta, &zeta).unwrap(), ExtValue::Exact(0));
        let short = GeneralQWeight::parse("1,0,-1").unwrap();
        assert_eq!(ext_general_q(&eta, &short), Err(Error::SizeMismatch));
    }

    #[test]
    fn json_and_dot() {
        let q2 = AlgebraContext::q(2);
        let ws = enumerate_block(q2, HalfInt::int(2), None, DEFAULT_CAP).unwrap();
        let g = k0_graph(q2, &ws).unwrap();
        let dot = g.to_dot();
        assert_eq!(dot.matches("v0 -> v1").count(), 2);
        let json = g.to_json();
        assert!(json.contains("\"kind\": \"K0\""));
        assert!(json.contains("\"coords\": [\n        \"1\""));
        assert_eq!(g.to_json(), k0_graph(q2, &ws).unwrap().to_json());
    }
}
