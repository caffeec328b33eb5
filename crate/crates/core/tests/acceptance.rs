//! The acceptance criteria, one PASS/FAIL line each.

use std::io::Write;
use std::time::{Duration, Instant};

use superext::diagrams::{parse_ascii, weight_of, Shape};
use superext::extgraph::{ext_general_q, ext_graph, k0_graph, unsigned_quotient, ExtGraph, ExtValue};
use superext::kpoly::{k_zero, kpoly, KPoly};
use superext::verify::{
    bipartite, brute_force, oracle, out_degree, parity, parity_shape_ok, reference_window,
    round_trips, shifted_window, w_support, window_iso, Tally,
};
use superext::weights::{
    enumerate_block, parse_weight, AlgebraContext, Block, BlockWeight, GeneralQWeight, Sign,
    DEFAULT_CAP,
};
use superext::{Error, HalfInt};

struct Criterion {
    id: u32,
    title: &'static str,
    checked: usize,
    failures: Vec<String>,
}

impl Criterion {
    fn new(id: u32, title: &'static str) -> Self {
        Criterion { id, title, checked: 0, failures: Vec::new() }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn absorb(&mut self, label: &str, t: Tally) {
        self.checked += t.checked;
        self.failures.extend(t.failures.into_iter().map(|f| format!("{label}: {f}")));
    }

    fn within(&mut self, start: Instant, budget: Duration) {
        let took = start.elapsed();
        self.check(took <= budget, || format!("took {took:?}, budget {budget:?}"));
    }
}

fn h(k: i64) -> HalfInt {
    HalfInt::int(k)
}

fn win(ctx: AlgebraContext, min: Option<HalfInt>, max: HalfInt) -> Vec<BlockWeight> {
    enumerate_block(ctx, max, min, DEFAULT_CAP).expect("window")
}

fn alg(s: &str) -> AlgebraContext {
    AlgebraContext::parse(s, Block::B0).unwrap()
}

fn wd(ctx: AlgebraContext, s: &str) -> BlockWeight {
    weight_of(ctx, &parse_ascii(s, Shape::Block(ctx)).unwrap()).unwrap()
}

/// Every context of the property windows, with its window.
fn property_windows() -> Vec<(AlgebraContext, Vec<BlockWeight>)> {
    let mut out = Vec::new();
    for n in 1..=3 {
        let gl = AlgebraContext::gl(n);
        out.push((gl, win(gl, Some(h(-3)), h(5))));
        for t in 0..=2 {
            let c = AlgebraContext::osp(n, t);
            out.push((c, win(c, None, h(6))));
        }
    }
    for m in 2..=7 {
        let c = AlgebraContext::q(m);
        out.push((c, win(c, None, h(6))));
    }
    for m in [2, 4, 6] {
        let c = AlgebraContext::q_half(m).unwrap();
        out.push((c, win(c, None, HalfInt::from_twice(11))));
    }
    out
}

fn c1_golden_tables() -> Criterion {
    let mut c = Criterion::new(1, "golden tables");
    let start = Instant::now();
    let f = "x^1 x";
    let tables: &[(&str, &str, &[(&str, &str)])] = &[
        ("osp(4|4)", f, &[("x^1 o x", "1"), ("+ o x x", "z"), ("- o x o x", "1")]),
        (
            "osp(6|4)",
            "x^1> x",
            &[("x^1> o x", "1"), ("> x x", "z^2"), ("> x o x", "z"), ("> x o o x", "1")],
        ),
        (
            "osp(6|6)",
            "x^2 x",
            &[
                ("x^2 o x", "1"),
                ("x^1 x x", "z+z^3"),
                ("x^1 x o x", "1+z^2"),
                ("x^1 x o o x", "z"),
                ("x^1 x o o o x", "1"),
            ],
        ),
        (
            "osp(10|10)",
            "x^3 o o x x",
            &[
                ("x^3 o o x o x", "1"),
                ("x^3 o o o x o x", "1"),
                ("x^1 o x x x x", "z^2"),
                ("x^1 o x x x o x", "z"),
                ("x^1 o x x x o o x", "1"),
                ("x^3 o o o x x", "z"),
            ],
        ),
        ("q(4)", f, &[("x^1 o x", "1"), ("o x o x", "2"), ("o x x", "2z")]),
        (
            "q(8)",
            "x^2 x o o x",
            &[
                ("x^1 x o o x x", "z+z^2"),
                ("x^1 x o o x o x", "1+z"),
                ("x^1 x o o x o o x", "2"),
                ("x^2 x o o o x", "1"),
            ],
        ),
        (
            "q(8)",
            "x^2 x o o o x",
            &[("x^1 x o o o x x", "2z"), ("x^1 x o o o x o x", "2"), ("x^2 x o o o o x", "1")],
        ),
    ];
    for &(a, nu, rows) in tables {
        let ctx = alg(a);
        let v = wd(ctx, nu);
        for &(lam, want) in rows {
            let got = kpoly(ctx, &wd(ctx, lam), &v).map(|k| k.to_string());
            c.check(got.as_deref() == Ok(want), || format!("{a} K({lam} / {nu}) = {got:?}, want {want}"));
        }
    }
    // osp(10|10): (f)_0^i for i = 5..9 is z^{9-i}, and (f)_0^10 vanishes
    let ctx = alg("osp(10|10)");
    let v = wd(ctx, "x^3 o o x x");
    for i in 5..=10usize {
        let mut cells = vec!["o"; i + 1];
        cells[0] = "x^2";
        cells[3] = "x";
        cells[4] = "x";
        cells[i] = "x";
        let g = cells.join(" ");
        let got = kpoly(ctx, &wd(ctx, &g), &v).unwrap();
        let want = if i <= 9 { KPoly::monomial(9 - i, 1) } else { KPoly::zero() };
        c.check(got == want, || format!("osp(10|10) K({g}) = {got}, want {want}"));
    }
    c.within(start, Duration::from_secs(1));
    c
}

fn c2_closed_formulas() -> Criterion {
    let mut c = Criterion::new(2, "closed formulas");
    let first = |ctx: AlgebraContext, k: i64, s: Option<Sign>| {
        let mut v = vec![HalfInt::ZERO; ctx.n];
        v[0] = h(k);
        superext::weights::validate_weight(ctx, &v, s).unwrap()
    };
    let zpow = |e: usize| KPoly::monomial(e, 1);
    for m in 2..=8 {
        let ctx = AlgebraContext::q(m);
        let got = kpoly(ctx, &first(ctx, 1, None), &first(ctx, 0, None)).unwrap();
        let want = KPoly::one() + zpow(m - 2);
        c.check(got == want, || format!("q({m}) K^(θ,0) = {got}, want {want}"));
    }
    for m in 2..=6 {
        let ctx = AlgebraContext::q(m);
        let zero = first(ctx, 0, None);
        let got = kpoly(ctx, &zero, &zero).unwrap();
        let want = KPoly::from_coeffs((0..m).map(|e| (e > 0) as u64).collect());
        c.check(got == want, || format!("q({m}) K^(0,0) = {got}, want {want}"));
    }
    let ctx = AlgebraContext::osp(1, 0);
    let got = kpoly(ctx, &first(ctx, 1, Some(Sign::Plus)), &first(ctx, 0, None)).unwrap();
    c.check(got == KPoly::one(), || format!("osp(2|2) K = {got}"));
    for n in 2..=4 {
        let ctx = AlgebraContext::osp(n, 0);
        let got = kpoly(ctx, &first(ctx, 1, None), &first(ctx, 0, None)).unwrap();
        let want = KPoly::one() + zpow(2 * n - 2);
        c.check(got == want, || format!("osp({}|{}) K = {got}, want {want}", 2 * n, 2 * n));
    }
    for n in 1..=4 {
        let ctx = AlgebraContext::osp(n, 2);
        let got = kpoly(ctx, &first(ctx, 1, None), &first(ctx, 0, None)).unwrap();
        let want = zpow(2 * n - 1);
        c.check(got == want, || format!("osp({}|{}) K = {got}, want {want}", 2 * n + 2, 2 * n));
    }
    c
}

fn c3_oracle() -> Criterion {
    let mut c = Criterion::new(3, "oracle equivalence");
    let start = Instant::now();
    for m in 2..=7 {
        let ctx = AlgebraContext::q(m);
        c.absorb(&ctx.to_string(), oracle(ctx, &win(ctx, None, h(6))));
        if m % 2 == 0 {
            let ctx = AlgebraContext::q_half(m).unwrap();
            c.absorb(&format!("{ctx} B1/2"), oracle(ctx, &win(ctx, None, HalfInt::from_twice(11))));
        }
    }
    c.within(start, Duration::from_secs(60));
    c
}

fn c4_parity() -> Criterion {
    let mut c = Criterion::new(4, "parity and monomiality");
    for (ctx, ws) in property_windows() {
        c.absorb(&format!("{ctx} {}", ctx.block), parity(ctx, &ws));
    }
    // the check itself rejects a shifted exponent
    let q4 = AlgebraContext::q(4);
    let (l, v) = (parse_weight(q4, "1,0").unwrap(), parse_weight(q4, "0,0").unwrap());
    let k = kpoly(q4, &l, &v).unwrap();
    c.check(parity_shape_ok(q4, &l, &v, &k), || format!("K^(θ,0) = {k} rejected"));
    c.check(!parity_shape_ok(q4, &l, &v, &k.times_z()), || "z·K^(θ,0) accepted".into());
    c
}

fn c5_w_support() -> Criterion {
    let mut c = Criterion::new(5, "w-support");
    for (ctx, ws) in property_windows() {
        c.absorb(&format!("{ctx} {}", ctx.block), w_support(ctx, &ws));
    }
    c
}

fn edges(g: &ExtGraph) -> Vec<(String, String, u64)> {
    superext::verify::edge_list(g)
}

fn expect_edges(c: &mut Criterion, name: &str, g: &ExtGraph, want: &[(&str, &str, u64)]) {
    let got = edges(g);
    let want: Vec<(String, String, u64)> =
        want.iter().map(|&(a, b, k)| (a.to_string(), b.to_string(), k)).collect();
    c.check(got == want, || format!("{name}: got {got:?}, want {want:?}"));
}

fn c6_graph_figures() -> Criterion {
    let mut c = Criterion::new(6, "graph figures");
    let gl = AlgebraContext::gl(1);
    let ws = win(gl, Some(h(-2)), h(3));
    let chain = [("-2", "-1", 1), ("-1", "0", 1), ("0", "1", 1), ("1", "2", 1), ("2", "3", 1)];
    expect_edges(&mut c, "gl(1|1) K0", &k0_graph(gl, &ws).unwrap(), &chain);
    expect_edges(&mut c, "gl(1|1) ext", &ext_graph(gl, &ws).unwrap(), &chain);

    let osp = AlgebraContext::osp(1, 0);
    let ws = win(osp, None, h(3));
    let g = k0_graph(osp, &ws).unwrap();
    let signed = [
        ("0", "1;+", 1),
        ("0", "1;-", 1),
        ("1;+", "2;+", 1),
        ("1;-", "2;-", 1),
        ("2;+", "3;+", 1),
        ("2;-", "3;-", 1),
    ];
    expect_edges(&mut c, "osp(2|2) K0", &g, &signed);
    expect_edges(&mut c, "osp(2|2) ext", &ext_graph(osp, &ws).unwrap(), &signed);
    let path = [("0", "1", 1), ("1", "2", 1), ("2", "3", 1)];
    expect_edges(&mut c, "OSP(2|2) K0", &unsigned_quotient(&g), &path);

    let o42 = AlgebraContext::osp(1, 2);
    let ws = win(o42, None, h(3));
    let g = k0_graph(o42, &ws).unwrap();
    let fork = [("0", "2", 1), ("1", "2", 1), ("2", "3", 1)];
    expect_edges(&mut c, "osp(4|2) K0", &g, &fork);
    expect_edges(&mut c, "osp(4|2) ext", &ext_graph(o42, &ws).unwrap(), &fork);
    let pari: Vec<u8> = g.vertices.iter().map(|v| v.pari).collect();
    c.check(pari == [0, 0, 1, 0], || format!("osp(4|2) pari {pari:?}"));
    // dotted arrows: K ≠ 0 but k0 = 0
    let w = |s: &str| parse_weight(o42, s).unwrap();
    let k = kpoly(o42, &w("1"), &w("0"));
    c.check(k.as_ref().map(|p| p.to_string()) == Ok("z".into()), || format!("osp(4|2) K^(β,0) = {k:?}"));
    c.check(k_zero(o42, &w("1"), &w("0")) == Ok(0), || "osp(4|2) k0(β,0) ≠ 0".into());
    c.check(k_zero(o42, &w("0"), &w("1")) == Ok(0), || "osp(4|2) k0(0,β) ≠ 0".into());
    c.check(kpoly(o42, &w("0"), &w("1")) == Err(Error::OspLambdaZero), || "osp(4|2) K^(0,β) known".into());

    let qh = AlgebraContext::q_half(2).unwrap();
    let ws = win(qh, None, HalfInt::from_twice(7));
    expect_edges(&mut c, "q(2) B1/2 K0", &k0_graph(qh, &ws).unwrap(), &[("1/2", "3/2", 1), ("3/2", "5/2", 1), ("5/2", "7/2", 1)]);

    let q2 = AlgebraContext::q(2);
    let ws = win(q2, None, h(3));
    let g = k0_graph(q2, &ws).unwrap();
    expect_edges(&mut c, "q(2) K0", &g, &[("0", "1", 2), ("1", "2", 1), ("2", "3", 1)]);
    expect_edges(&mut c, "q(2) ext", &ext_graph(q2, &ws).unwrap(), &[("0", "1", 1), ("1", "2", 1), ("2", "3", 1)]);

    let q3 = AlgebraContext::q(3);
    let ws = win(q3, None, h(3));
    let g = k0_graph(q3, &ws).unwrap();
    expect_edges(&mut c, "q(3) K0", &g, &[("0", "1", 1), ("0", "2", 2), ("1", "2", 1), ("2", "3", 1)]);
    let label = g.edges.iter().find(|e| (e.src, e.dst) == (0, 1)).map(|e| e.kpoly.clone());
    c.check(label.as_deref() == Some("1+z"), || format!("q(3) 0→θ labeled {label:?}"));
    let e = ext_graph(q3, &ws).unwrap();
    expect_edges(&mut c, "q(3) ext", &e, &[("0", "1", 1), ("0", "2", 1), ("2", "3", 1)]);
    c.check(e.edges.iter().all(|e| e.exact), || "q(3) ext edge not exact".into());
    let has_12 = e.edges.iter().any(|e| (e.src, e.dst) == (1, 2));
    c.check(!has_12, || "q(3) θ–2θ edge present".into());
    c
}

fn c7_out_degree() -> Criterion {
    let mut c = Criterion::new(7, "out-degree and multiedges");
    for (ctx, ws) in property_windows() {
        c.absorb(&format!("{ctx} {}", ctx.block), out_degree(ctx, &ws));
    }
    c
}

fn c8_bipartite() -> Criterion {
    let mut c = Criterion::new(8, "bipartiteness");
    for (ctx, ws) in property_windows() {
        c.absorb(&format!("{ctx} {}", ctx.block), bipartite(ctx, &ws));
    }
    c
}

fn c9_window_iso() -> Criterion {
    let mut c = Criterion::new(9, "window isomorphism");
    for n in 2..=3 {
        let contexts = [
            AlgebraContext::gl(n),
            AlgebraContext::osp(n, 0),
            AlgebraContext::osp(n, 1),
            AlgebraContext::osp(n, 2),
            AlgebraContext::q(2 * n),
            AlgebraContext::q(2 * n + 1),
        ];
        for ctx in contexts {
            c.absorb(&ctx.to_string(), window_iso(ctx, &[0, 1, 2], 5));
        }
        // a wrong shift must be detected
        let reference = reference_window(n, 5).unwrap();
        let g = shifted_window(AlgebraContext::gl(n), h(1), 5).unwrap();
        let off = superext::extgraph::window_isomorphic(&g, &reference, |v| {
            (v.coords.iter().map(|&x| x + h(1)).collect(), None)
        });
        c.check(!off, || format!("gl({n}|{n}) window matched under a wrong shift"));
    }
    c
}

fn c10_brute_force() -> Criterion {
    let mut c = Criterion::new(10, "brute-force agreement");
    for (ctx, ws) in property_windows() {
        let reach = h(2 * ctx.n as i64 + 3);
        let outer = if ctx.family == superext::weights::Family::Gl {
            win(ctx, Some(h(-3) - reach), h(5) + reach)
        } else {
            win(ctx, None, h(6) + reach)
        };
        c.absorb(&format!("{ctx} {}", ctx.block), brute_force(ctx, &ws, &outer));
    }
    // stable lifts of 2θ and θ from q(3) to q(5)
    let eta = GeneralQWeight::parse("7,2,0,-2,-9").unwrap();
    let zeta = GeneralQWeight::parse("7,1,0,-1,-9").unwrap();
    let v = ext_general_q(&eta, &zeta);
    c.check(v == Ok(ExtValue::Exact(0)), || format!("ext_q5(2θ lift, θ lift) = {v:?}"));
    c
}

fn c11_round_trips() -> Criterion {
    let mut c = Criterion::new(11, "round-trips");
    for (ctx, ws) in property_windows() {
        c.absorb(&format!("{ctx} {}", ctx.block), round_trips(ctx, &ws));
    }
    c
}

#[test]
fn acceptance() {
    let results = [
        c1_golden_tables(),
        c2_closed_formulas(),
        c3_oracle(),
        c4_parity(),
        c5_w_support(),
        c6_graph_figures(),
        c7_out_degree(),
        c8_bipartite(),
        c9_window_iso(),
        c10_brute_force(),
        c11_round_trips(),
    ];
    let mut out = std::io::stdout().lock();
    for r in &results {
        let status = if r.failures.is_empty() { "PASS" } else { "FAIL" };
        writeln!(out, "{status} criterion {:>2}: {} ({} checks)", r.id, r.title, r.checked).unwrap();
        for f in r.failures.iter().take(10) {
            writeln!(out, "    {f}").unwrap();
        }
    }
    out.flush().unwrap();
    let failed: Vec<u32> = results.iter().filter(|r| !r.failures.is_empty()).map(|r| r.id).collect();
    assert!(failed.is_empty(), "criteria failed: {failed:?}");
}
