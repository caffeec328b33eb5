//! The `superext` command line.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::diagrams::{arcs, diagram_of, qdiagram_of, render_ascii};
use crate::error::Error;
use crate::extgraph::{ext1_graph_q, ext_block, ext_graph, k0_graph, ExtGraph};
use crate::halfint::HalfInt;
use crate::kpoly::{k_hat, k_zero, kpoly, kpoly_q_recursive, s_zero};
use crate::verify::run_suite;
use crate::weights::{
    atypicality, core_of, enumerate_block, is_stable, pari_abs, parse_weight, reduce, tail,
    to_epsilon_delta, AlgebraContext, Block, BlockWeight, Family, GeneralQWeight, DEFAULT_CAP,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INVALID: i32 = 3;
pub const EXIT_VERIFY: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "superext", version, about = "Weight diagrams, K-polynomials and extension graphs")]
pub struct Cli {
    /// Print the parsed configuration before running.
    #[arg(long, global = true)]
    pub explain: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Target {
    /// gl(n|n), osp(2n+t|2n) or q(m)
    pub algebra: String,
    #[arg(long, default_value = "B0")]
    pub block: Block,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Show the diagram, arches, tail and parity of a weight.
    Diagram {
        #[command(flatten)]
        target: Target,
        #[arg(allow_hyphen_values = true)]
        weight: String,
        /// Read the weight as a general q(m) weight (a_1,…,a_m).
        #[arg(long)]
        general: bool,
    },
    /// Compute K^{λ,ν}(z) and related numbers.
    Kpoly {
        #[command(flatten)]
        target: Target,
        #[arg(allow_hyphen_values = true)]
        lambda: String,
        #[arg(allow_hyphen_values = true)]
        nu: String,
        /// Also run the q(m) recursion and compare.
        #[arg(long)]
        oracle: bool,
        /// Also print ext(λ;ν).
        #[arg(long)]
        ext: bool,
    },
    /// Build a graph over a window of weights.
    Graph {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        window: Window,
        #[arg(long, value_enum, default_value_t = Kind::K0)]
        kind: Kind,
        #[arg(long, value_enum, default_value_t = Format::Ascii)]
        format: Format,
        /// Write to a file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the property suite on a window.
    Verify {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        window: Window,
    },
}

#[derive(Args, Debug, Clone)]
pub struct Window {
    #[arg(long, allow_hyphen_values = true)]
    pub min: Option<HalfInt>,
    #[arg(long, allow_hyphen_values = true, default_value = "4")]
    pub max: HalfInt,
    #[arg(long, default_value_t = DEFAULT_CAP)]
    pub cap: usize,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    K0,
    Ext,
    Ext1,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Ascii,
    Json,
    Dot,
}

/// What a command produced: text for stdout and an exit code.
pub struct Outcome {
    pub text: String,
    pub code: i32,
}

fn explain(cli: &Cli) -> String {
    let t = |t: &Target| format!("algebra={} block={}", t.algebra, t.block);
    let w = |w: &Window| {
        let min = w.min.map_or("default".into(), |m| m.to_string());
        format!("min={min} max={} cap={}", w.max, w.cap)
    };
    match &cli.command {
        Command::Diagram { target, weight, general } => {
            format!("command=diagram {} weight={weight:?} general={general}", t(target))
        }
        Command::Kpoly { target, lambda, nu, oracle, ext } => {
            format!("command=kpoly {} lambda={lambda:?} nu={nu:?} oracle={oracle} ext={ext}", t(target))
        }
        Command::Graph { target, window, kind, format, out } => format!(
            "command=graph {} {} kind={} format={} out={}",
            t(target),
            w(window),
            format!("{kind:?}").to_lowercase(),
            format!("{format:?}").to_lowercase(),
            out.as_ref().map_or("stdout".into(), |p| p.display().to_string())
        ),
        Command::Verify { target, window } => format!("command=verify {} {}", t(target), w(window)),
    }
}

fn context(t: &Target) -> Result<AlgebraContext, Error> {
    AlgebraContext::parse(&t.algebra, t.block)
}

fn cmd_diagram(t: &Target, text: &str, general: bool) -> Result<String, Error> {
    let mut s = String::new();
    if general {
        let w = GeneralQWeight::parse(text)?;
        let ctx = context(t)?;
        if !ctx.is_q() || ctx.m() != w.m() {
            return Err(Error::ContextMismatch(format!("{w} is not a weight of {}", t.algebra)));
        }
        let d = qdiagram_of(&w);
        writeln!(s, "weight: {w}").ok();
        writeln!(s, "diagram: {}", render_ascii(&d)).ok();
        writeln!(s, "arcs: {}", arcs(&d).render()).ok();
        writeln!(s, "core: {}", core_of(&w)).ok();
        writeln!(s, "atypicality: {}", atypicality(&w)).ok();
        writeln!(s, "stable: {}", is_stable(&w)).ok();
        match reduce(&w) {
            Ok((c, r)) => {
                let body: Vec<String> = r.coords().iter().map(|x| x.to_string()).collect();
                writeln!(s, "reduced: {c}: {}", body.join(",")).ok();
            }
            Err(Error::Typical) => {
                writeln!(s, "reduced: none (typical)").ok();
            }
            Err(e) => return Err(e),
        }
        return Ok(s);
    }
    let ctx = context(t)?;
    let w = parse_weight(ctx, text)?;
    let d = diagram_of(ctx, &w);
    writeln!(s, "weight: {w}").ok();
    writeln!(s, "diagram: {}", render_ascii(&d)).ok();
    writeln!(s, "arcs: {}", arcs(&d).render()).ok();
    writeln!(s, "tail: {}", tail(ctx, &w)).ok();
    writeln!(s, "pari: {}", pari_abs(ctx, &w)).ok();
    writeln!(s, "epsilon-delta: {}", to_epsilon_delta(ctx, &w)).ok();
    Ok(s)
}

fn cmd_kpoly(t: &Target, l: &str, v: &str, oracle: bool, ext: bool) -> Result<Outcome, Error> {
    let ctx = context(t)?;
    let lam = parse_weight(ctx, l)?;
    let nu = parse_weight(ctx, v)?;
    let k = kpoly(ctx, &lam, &nu);
    let k_text = match &k {
        Ok(p) => p.to_string(),
        Err(Error::OspLambdaZero) => "unknown".into(),
        Err(e) => return Err(e.clone()),
    };
    let (k0, s0) = if lam == nu {
        ("n/a".to_string(), "n/a".to_string())
    } else {
        (k_zero(ctx, &lam, &nu)?.to_string(), s_zero(ctx, &lam, &nu)?.to_string())
    };
    let mut summary = format!("K={k_text}, k0={k0}");
    let mut code = EXIT_OK;
    let mut extra = String::new();
    if oracle {
        let r = kpoly_q_recursive(ctx, &lam, &nu)?;
        let verdict = if k.as_ref() == Ok(&r) { "MATCH" } else { "MISMATCH" };
        if verdict == "MISMATCH" {
            code = EXIT_VERIFY;
        }
        summary.push_str(&format!(", {verdict}"));
        writeln!(extra, "recursion: {r}").ok();
    }
    let mut s = format!("{summary}\n");
    writeln!(s, "K^{{λ,ν}}(z) = {k_text}").ok();
    writeln!(s, "k_hat = {}", k_hat(ctx, &lam, &nu)?).ok();
    writeln!(s, "s_zero = {s0}").ok();
    writeln!(s, "k_zero = {k0}").ok();
    s.push_str(&extra);
    if ext {
        writeln!(s, "ext={}", ext_block(ctx, &lam, &nu)?).ok();
    }
    Ok(Outcome { text: s, code })
}

fn window_weights(ctx: AlgebraContext, w: &Window) -> Result<Vec<BlockWeight>, Error> {
    enumerate_block(ctx, w.max, w.min, w.cap)
}

fn build_graph(ctx: AlgebraContext, w: &Window, kind: Kind) -> Result<ExtGraph, Error> {
    let ws = window_weights(ctx, w)?;
    match kind {
        Kind::K0 => k0_graph(ctx, &ws),
        Kind::Ext => ext_graph(ctx, &ws),
        Kind::Ext1 => {
            if ctx.family == Family::Gl || ctx.is_osp() {
                return Err(Error::ContextMismatch("Ext¹ graphs are available for q(m) only".into()));
            }
            let general: Vec<GeneralQWeight> =
                ws.iter().map(|x| GeneralQWeight::from_block(ctx, x)).collect();
            let chi = core_of(general.first().ok_or_else(|| Error::NotInBlock("empty window".into()))?);
            ext1_graph_q(&chi, &general)
        }
    }
}

fn cmd_graph(t: &Target, w: &Window, kind: Kind, format: Format, out: &Option<PathBuf>) -> Result<String, Error> {
    let ctx = context(t)?;
    let g = build_graph(ctx, w, kind)?;
    let text = match format {
        Format::Ascii => g.to_ascii(),
        Format::Json => g.to_json() + "\n",
        Format::Dot => g.to_dot(),
    };
    match out {
        Some(path) => {
            std::fs::write(path, &text)
                .map_err(|e| Error::ParseError(format!("cannot write {}: {e}", path.display())))?;
            Ok(format!("wrote {}\n", path.display()))
        }
        None => Ok(text),
    }
}

fn cmd_verify(t: &Target, w: &Window) -> Result<Outcome, Error> {
    let ctx = context(t)?;
    let report = run_suite(ctx, w.min, w.max)?;
    let code = if report.passed() { EXIT_OK } else { EXIT_VERIFY };
    let verdict = if report.passed() { "all properties pass" } else { "verification failed" };
    Ok(Outcome { text: format!("{ctx} {}\n{report}{verdict}\n", ctx.block), code })
}

/// Runs a parsed command.
pub fn execute(cli: &Cli) -> Outcome {
    let mut prefix = String::new();
    if cli.explain {
        prefix = format!("{}\n", explain(cli));
    }
    let result = match &cli.command {
        Command::Diagram { target, weight, general } => {
            cmd_diagram(target, weight, *general).map(|text| Outcome { text, code: EXIT_OK })
        }
        Command::Kpoly { target, lambda, nu, oracle, ext } => cmd_kpoly(target, lambda, nu, *oracle, *ext),
        Command::Graph { target, window, kind, format, out } => {
            cmd_graph(target, window, *kind, *format, out).map(|text| Outcome { text, code: EXIT_OK })
        }
        Command::Verify { target, window } => cmd_verify(target, window),
    };
    match result {
        Ok(o) => Outcome { text: prefix + &o.text, code: o.code },
        Err(e) => Outcome { text: format!("{prefix}error: {e}\n"), code: EXIT_INVALID },
    }
}

/// Parses `args` (program name first) and runs them. Usage errors exit 2.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(&cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            Outcome { text: e.render().to_string(), code }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_ok(args: &[&str]) -> String {
        let o = run(std::iter::once("superext").chain(args.iter().copied()));
        assert_eq!(o.code, EXIT_OK, "{}", o.text);
        o.text
    }

    #[test]
    fn diagram_command() {
        let s = run_ok(&["diagram", "q(4)", "1,0"]);
        assert!(s.contains("diagram: x^1 x\n"), "{s}");
        assert!(s.contains("arcs: arc(1;2) arc(0;3,4)\n"), "{s}");
        let s = run_ok(&["diagram", "osp(6|6)", "0,0,0"]);
        assert!(s.contains("diagram: x^3\n") && s.contains("arcs: arc(0;1) arc(0;2,3) arc(0;4,5)\n"), "{s}");
        let s = run_ok(&["diagram", "q(4)", "--general", "1,0,-1,-3"]);
        assert!(s.contains("diagram: > x o <\n"), "{s}");
        assert!(s.contains("atypicality: 1\n") && s.contains("reduced: q(3): 1\n"), "{s}");
    }

    #[test]
    fn kpoly_command() {
        let s = run_ok(&["kpoly", "q(3)", "2", "0", "--oracle"]);
        assert!(s.starts_with("K=2, k0=2, MATCH\n"), "{s}");
        let s = run_ok(&["kpoly", "osp(6|4)", "2,1", "1,0"]);
        assert!(s.starts_with("K=z^2, k0=0\n"), "{s}");
        let s = run_ok(&["kpoly", "q(2)", "1", "0", "--ext"]);
        assert!(s.contains("ext=Exact(1)\n"), "{s}");
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run(["superext", "diagram"]).code, EXIT_USAGE);
        assert_eq!(run(["superext", "frobnicate"]).code, EXIT_USAGE);
        assert_eq!(run(["superext", "diagram", "q(4)", "1,1"]).code, EXIT_INVALID);
        assert_eq!(run(["superext", "diagram", "x(4)", "1"]).code, EXIT_INVALID);
        let o = run(["superext", "--explain", "graph", "q(3)", "--max", "3", "--kind", "ext"]);
        assert!(o.text.starts_with("command=graph algebra=q(3) block=B0"), "{}", o.text);
    }

    #[test]
    fn graph_command() {
        let s = run_ok(&["graph", "q(3)", "--max", "3", "--kind", "ext"]);
        assert_eq!(s.lines().skip(1).collect::<Vec<_>>(), ["(0) -- (1)", "(0) -- (2)", "(2) -- (3)"]);
        let s = run_ok(&["graph", "gl(1|1)", "--min", "-2", "--max", "3", "--format", "dot"]);
        assert_eq!(s.matches(" -> ").count(), 5);
        let a = run_ok(&["graph", "q(4)", "--max", "3", "--format", "json"]);
        assert_eq!(a, run_ok(&["graph", "q(4)", "--max", "3", "--format", "json"]));
    }
}
