use std::f64::consts::PI;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use omq_core::formula::{parse, parse_node_literal, EvalContext};
use omq_core::implication::{ImplSpec, Implication};
use omq_core::lattice::{sweep, GeneratorSpec};
use omq_core::matrix::{self, MatrixLogicContext, DEFAULT_SAMPLES, DEFAULT_TOLERANCE};
use omq_core::transfer::{verify_many, Suite, SuiteConfig};
use omq_core::universe::{build_fragment, FragmentParams, NodeStore, DEFAULT_BUDGET};
use omq_core::Logic;

#[derive(Parser)]
#[command(name = "omq", version, about = "Model checker for orthomodular-valued set theory")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Validate a lattice file or generator recipe.
    LatticeCheck {
        /// Lattice JSON file (same as --lattice).
        path: Option<PathBuf>,
        #[command(flatten)]
        src: LogicSource,
    },
    /// Print the full implication table.
    ImplTable {
        #[command(flatten)]
        src: LogicSource,
        /// poly:J (or J) for the polynomial implications.
        #[arg(long = "impl", default_value = "poly:3")]
        imp: String,
        /// JSON table file instead of --impl.
        #[arg(long)]
        impl_file: Option<PathBuf>,
    },
    /// Evaluate a formula to a truth value.
    Eval {
        #[command(flatten)]
        src: LogicSource,
        #[arg(long = "impl", default_value = "poly:0")]
        imp: String,
        #[command(flatten)]
        frag: FragmentArgs,
        /// Bind a variable to a name literal, e.g. `u={{}: a}`.
        #[arg(long = "let", value_name = "NAME=LITERAL")]
        lets: Vec<String>,
        formula: String,
    },
    /// Run verification suites.
    Verify {
        /// Generator recipes; defaults to the standard sweep.
        #[arg(long = "gen")]
        gens: Vec<String>,
        /// Lattice JSON files.
        #[arg(long = "lattice")]
        lattices: Vec<PathBuf>,
        /// Implications to check; defaults to poly:0 through poly:5.
        #[arg(long = "impl")]
        impls: Vec<String>,
        /// Suites to run, or `all`.
        #[arg(long = "suite", default_value = "all")]
        suites: Vec<String>,
        #[command(flatten)]
        frag: FragmentArgs,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Projection-lattice checks: the non-polynomial witness, or the
    /// twisted relations with --relations.
    Matrix {
        #[arg(long, default_value_t = PI / 2.0)]
        theta: f64,
        /// Also report `P =>_{j,θ,i} Q` on the witness pair.
        #[arg(long)]
        j: Option<u8>,
        #[arg(long)]
        i: Option<u8>,
        #[arg(long)]
        relations: bool,
        #[arg(long, value_delimiter = ',', default_value = "2,3,4")]
        dims: Vec<usize>,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
        #[arg(long, default_value_t = matrix::DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tol: f64,
        /// Write the witness matrices as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

#[derive(Args)]
struct LogicSource {
    /// Lattice JSON file.
    #[arg(long, conflicts_with = "gen")]
    lattice: Option<PathBuf>,
    /// Generator recipe: boolean:k, mo:k, prod:A,B, hsum:A,B.
    #[arg(long)]
    gen: Option<String>,
}

#[derive(Args)]
struct FragmentArgs {
    #[arg(long, default_value_t = 2)]
    rank: u32,
    #[arg(long, default_value_t = 2)]
    dom_cap: usize,
    /// Largest fragment to build.
    #[arg(long, env = "OMQ_BUDGET", default_value_t = DEFAULT_BUDGET)]
    budget: u64,
}

impl FragmentArgs {
    fn params(&self) -> FragmentParams {
        FragmentParams::new(self.rank, self.dom_cap).with_budget(self.budget)
    }

    fn echo(&self, cfg: &mut serde_json::Map<String, Value>) {
        cfg.insert("rank".into(), json!(self.rank));
        cfg.insert("dom_cap".into(), json!(self.dom_cap));
        cfg.insert("budget".into(), json!(self.budget));
    }
}

fn load_logic(path: &PathBuf) -> Result<Logic> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(Logic::from_json(&text)?)
}

fn build_gen(spec: &str) -> Result<Logic> {
    Ok(spec.parse::<GeneratorSpec>()?.build()?)
}

impl LogicSource {
    fn label(&self) -> String {
        match (&self.lattice, &self.gen) {
            (Some(p), _) => p.display().to_string(),
            (None, Some(g)) => g.clone(),
            (None, None) => "mo:2".into(),
        }
    }

    /// Defaults to `mo:2`.
    fn load(&self) -> Result<Logic> {
        match (&self.lattice, &self.gen) {
            (Some(p), _) => load_logic(p),
            (None, Some(g)) => build_gen(g),
            (None, None) => build_gen("mo:2"),
        }
    }
}

struct Out {
    format: Format,
    config: serde_json::Map<String, Value>,
}

impl Out {
    fn new(format: Format, command: &str) -> Out {
        let mut config = serde_json::Map::new();
        config.insert("command".into(), json!(command));
        config.insert("format".into(), json!(if format == Format::Json { "json" } else { "text" }));
        Out { format, config }
    }

    fn set(&mut self, k: &str, v: impl Into<Value>) {
        self.config.insert(k.into(), v.into());
    }

    fn header(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.config {
            let v = match v {
                Value::String(t) => t.clone(),
                other => other.to_string(),
            };
            let _ = writeln!(s, "# {k}: {v}");
        }
        s
    }

    /// Prints either `text` after the config header, or a JSON document
    /// with the config and `body` merged.
    fn emit(&self, text: &str, body: Value) {
        // A closed pipe (`| head`) is not an error worth a panic.
        let mut w = std::io::stdout().lock();
        let _ = match self.format {
            Format::Text => write!(w, "{}{text}", self.header()),
            Format::Json => {
                let mut doc = serde_json::Map::new();
                doc.insert("config".into(), Value::Object(self.config.clone()));
                if let Value::Object(m) = body {
                    doc.extend(m);
                }
                writeln!(w, "{}", serde_json::to_string_pretty(&Value::Object(doc)).expect("json"))
            }
        };
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<bool> {
    match cli.cmd {
        Cmd::LatticeCheck { path, src } => lattice_check(cli.format, path, src),
        Cmd::ImplTable { src, imp, impl_file } => impl_table(cli.format, src, imp, impl_file),
        Cmd::Eval { src, imp, frag, lets, formula } => eval(cli.format, src, imp, frag, lets, formula),
        Cmd::Verify { gens, lattices, impls, suites, frag, seed } => {
            verify(cli.format, gens, lattices, impls, suites, frag, seed)
        }
        Cmd::Matrix { theta, j, i, relations, dims, samples, seed, tol, csv } => {
            matrix_cmd(cli.format, theta, j.zip(i), relations, dims, samples, seed, tol, csv)
        }
    }
}

fn lattice_check(format: Format, path: Option<PathBuf>, mut src: LogicSource) -> Result<bool> {
    if path.is_some() {
        src.lattice = path;
    }
    let mut out = Out::new(format, "lattice-check");
    out.set("lattice", src.label());
    let l = match src.load() {
        Ok(l) => l,
        Err(e) => {
            out.emit(&format!("FAIL lattice-check: {e}\n"), json!({ "valid": false, "error": e.to_string() }));
            return Ok(false);
        }
    };
    let center = l.center(l.carrier());
    let blocks = omq_core::commutator::maximal_boolean_sublogics(&l);
    let text = format!(
        "PASS lattice-check: {} elements\n  elements: {}\n  boolean: {}\n  center: {}\n  maximal Boolean sublogics: {}\n",
        l.size(),
        l.names().join(" "),
        l.is_boolean_logic(),
        l.format_set(center),
        blocks.len()
    );
    out.emit(
        &text,
        json!({
            "valid": true,
            "size": l.size(),
            "elements": l.names(),
            "boolean": l.is_boolean_logic(),
            "center": l.format_set(center),
            "maximal_boolean_sublogics": blocks.iter().map(|b| l.format_set(*b)).collect::<Vec<_>>(),
        }),
    );
    Ok(true)
}

fn resolve_impl(l: &Logic, imp: &str, file: Option<&PathBuf>) -> Result<Implication> {
    let spec = match file {
        Some(p) => {
            let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            ImplSpec::table_from_json(&text)?
        }
        None => imp.parse::<ImplSpec>()?,
    };
    Ok(spec.resolve(l)?)
}

fn impl_table(format: Format, src: LogicSource, imp: String, file: Option<PathBuf>) -> Result<bool> {
    let mut out = Out::new(format, "impl-table");
    out.set("lattice", src.label());
    match &file {
        Some(p) => out.set("impl_file", p.display().to_string()),
        None => out.set("impl", imp.clone()),
    }
    let l = src.load()?;
    let imp = resolve_impl(&l, &imp, file.as_ref())?;
    let names = l.names();
    let rows: Vec<Vec<&str>> = l.elements().map(|p| l.elements().map(|q| l.name(imp.eval(p, q))).collect()).collect();
    let w = names.iter().map(|n| n.len()).max().unwrap_or(1).max(3);
    let mut text = format!("{:>w$} |", "=>");
    for n in names {
        let _ = write!(text, " {n:>w$}");
    }
    let _ = writeln!(text, "\n{}", "-".repeat((w + 1) * (names.len() + 1) + 1));
    for (p, row) in names.iter().zip(&rows) {
        let _ = write!(text, "{p:>w$} |");
        for v in row {
            let _ = write!(text, " {v:>w$}");
        }
        text.push('\n');
    }
    out.emit(&text, json!({ "elements": names, "rows": rows }));
    Ok(true)
}

fn eval(
    format: Format,
    src: LogicSource,
    imp: String,
    frag: FragmentArgs,
    lets: Vec<String>,
    formula: String,
) -> Result<bool> {
    let mut out = Out::new(format, "eval");
    out.set("lattice", src.label());
    out.set("impl", imp.clone());
    out.set("let", lets.clone());
    out.set("formula", formula.clone());
    let l = src.load()?;
    let imp = resolve_impl(&l, &imp, None)?;
    let mut store = NodeStore::new();
    let mut env = Vec::new();
    for b in &lets {
        let (name, lit) = b.split_once('=').with_context(|| format!("--let `{b}` is not NAME=LITERAL"))?;
        let node = parse_node_literal(lit, &mut store, &l).with_context(|| format!("in --let {name}"))?;
        env.push((name.trim().to_string(), node));
    }
    let scope: Vec<&str> = env.iter().map(|(n, _)| n.as_str()).collect();
    let f = parse(&formula, &scope)?.resolve(&mut store, &l)?;
    let domain = if f.is_delta0() {
        Vec::new()
    } else {
        frag.echo(&mut out.config);
        build_fragment(&mut store, &l, frag.params())?.nodes().to_vec()
    };
    let env: Vec<(&str, _)> = env.iter().map(|(n, u)| (n.as_str(), *u)).collect();
    let mut cx = EvalContext::new(&l, &imp, &store, &domain);
    let v = cx.value(&f, &env)?;
    let name = l.name(v);
    out.emit(&format!("{name}\n"), json!({ "value": name }));
    Ok(true)
}

fn verify(
    format: Format,
    gens: Vec<String>,
    lattices: Vec<PathBuf>,
    impls: Vec<String>,
    suites: Vec<String>,
    frag: FragmentArgs,
    seed: u64,
) -> Result<bool> {
    let mut out = Out::new(format, "verify");
    let mut logics = Vec::new();
    if gens.is_empty() && lattices.is_empty() {
        logics = sweep();
    }
    for g in &gens {
        logics.push((g.clone(), build_gen(g)?));
    }
    for p in &lattices {
        logics.push((p.display().to_string(), load_logic(p)?));
    }
    let mut selected: Vec<Suite> = Vec::new();
    for s in &suites {
        if s == "all" {
            selected.extend(Suite::ALL);
        } else {
            selected.push(s.parse()?);
        }
    }
    selected.sort();
    selected.dedup();
    let mut cfg = SuiteConfig { fragment: frag.params(), seed, ..Default::default() };
    if !impls.is_empty() {
        cfg.impls = impls.iter().map(|s| s.parse()).collect::<Result<_, _>>()?;
    }
    out.set("logics", logics.iter().map(|(n, _)| n.clone()).collect::<Vec<_>>());
    out.set("suites", selected.iter().map(|s| s.name()).collect::<Vec<_>>());
    out.set("impls", cfg.impls.iter().map(|i| i.to_string()).collect::<Vec<_>>());
    out.set("seed", seed);
    frag.echo(&mut out.config);

    let reports = verify_many(&logics, &selected, &cfg)?;
    let passed = reports.iter().all(|r| r.passed());
    let checked: u64 = reports.iter().map(|r| r.checked).sum();
    let failed: u64 = reports.iter().map(|r| r.failed).sum();
    let mut text: String = reports.iter().map(|r| r.to_text()).collect();
    let _ = writeln!(
        text,
        "{} overall: {} reports, {checked} checked, {failed} failed",
        if passed { "PASS" } else { "FAIL" },
        reports.len()
    );
    out.emit(&text, json!({ "passed": passed, "checked": checked, "failed": failed, "reports": reports }));
    Ok(passed)
}

#[allow(clippy::too_many_arguments)]
fn matrix_cmd(
    format: Format,
    theta: f64,
    ji: Option<(u8, u8)>,
    relations: bool,
    dims: Vec<usize>,
    samples: usize,
    seed: u64,
    tol: f64,
    csv: Option<PathBuf>,
) -> Result<bool> {
    let mut out = Out::new(format, "matrix");
    out.set("tol", tol);
    if relations {
        out.set("relations", true);
        out.set("dims", dims.clone());
        out.set("samples", samples);
        out.set("seed", seed);
        let r = matrix::verify_twisted_relations(seed, &dims, samples, tol)?;
        let mut text = format!(
            "{} twisted-relations: {} checked, {} failed, max deviation {:.3e}\n",
            if r.holds() { "PASS" } else { "FAIL" },
            r.checked,
            r.failures.len(),
            r.max_deviation
        );
        for f in r.failures.iter().take(20) {
            let _ = writeln!(
                text,
                "  {} dim {} sample {} ({:?}, θ = {}): deviation {:.3e}",
                f.relation, f.dim, f.sample, f.kind, f.theta, f.deviation
            );
        }
        out.emit(&text, json!({ "passed": r.holds(), "report": r }));
        return Ok(r.holds());
    }
    out.set("theta", theta);
    if let Some((j, i)) = ji {
        out.set("j", j);
        out.set("i", i);
    }
    let w = matrix::non_polynomial_witness(theta, tol)?;
    let ok = w.success(tol);
    let c = |re: f64, im: f64| format!("{re:.12} {im:+.12}i");
    let mut text = format!(
        "{} non-polynomial witness at θ = {theta}\n  <1|phi> = {}\n  <phi|phi(θ)> = {}\n  com(P, Q) = 0: {}\n  Q∘P rank one: {}\n  P=>Q equals the twist: {}\n",
        if ok { "PASS" } else { "FAIL" },
        c(w.overlap_one_phi.re, w.overlap_one_phi.im),
        c(w.overlap_phi_phi_theta.re, w.overlap_phi_phi_theta.im),
        w.commutator_vanishes,
        w.twist_is_rank_one,
        w.implication_is_twist,
    );
    for (n, d) in &w.distances {
        let _ = writeln!(text, "  distance to {n}: {d:.6}");
    }
    for (n, d) in &w.other_operations {
        let _ = writeln!(text, "  {n}: nearest polynomial value at {d:.6}");
    }
    let mut body = json!({ "passed": ok, "witness": w });
    if let Some((j, i)) = ji {
        let ctx = MatrixLogicContext::new(2, tol)?;
        let (p, q) = (&w.matrices[0].1, &w.matrices[1].1);
        let x = ctx.twisted_impl(j, theta, i, p, q)?;
        let nearest = (0..6)
            .map(|k| (k, ctx.poly(k, p, q)))
            .chain([(6, ctx.zero()), (7, ctx.one()), (8, p.clone()), (9, q.clone())])
            .map(|(_, y)| x.distance(&y))
            .fold(f64::INFINITY, f64::min);
        let _ = writeln!(text, "  j={j} i={i}: nearest polynomial value at {nearest:.6}");
        body["requested"] = json!({ "j": j, "i": i, "nearest_polynomial_distance": nearest });
    }
    if let Some(path) = csv {
        std::fs::write(&path, w.to_csv()).with_context(|| format!("writing {}", path.display()))?;
    }
    out.emit(&text, body);
    Ok(ok)
}
