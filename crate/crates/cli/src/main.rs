mod output;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fracpsi::catalog::{self, OpKind, Params};
use fracpsi::operand::{Context, Operand, Side};
use fracpsi::operators::OrderSpec;
use fracpsi::psi::PsiSpec;
use fracpsi::quad::{EvalResult, QuadConfig, QuadRule};
use fracpsi::verify::{self, Suite, VerifyOptions};
use fracpsi::FracError;
use output::{Format, Row};
use rayon::prelude::*;
use std::io::Write;
use std::process::ExitCode;
use std::sync::Arc;

const EXIT_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_NUMERIC: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "fracpsi", version, about = "Fractional integrals and derivatives with respect to a kernel function ψ")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate an operator at a point or on a grid.
    Eval(EvalArgs),
    /// List the classical operators, or evaluate one of them.
    Catalog(CatalogArgs),
    /// Run verification suites.
    Verify(VerifyArgs),
    /// Observed order of the product trapezoid rule under mesh doubling.
    Converge(ConvergeArgs),
    /// List kernels, operators and suites.
    List,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Op {
    Integral,
    Rl,
    Caputo,
    Hilfer,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum SideArg {
    Left,
    Right,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum RuleArg {
    Adaptive,
    Trapezoid,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum KindArg {
    Integral,
    Derivative,
}

#[derive(Args, Debug, Clone)]
struct Points {
    /// Left end of the interval.
    #[arg(long, allow_hyphen_values = true)]
    a: f64,
    /// Right end of the interval.
    #[arg(long, allow_hyphen_values = true)]
    b: f64,
    /// Single evaluation point.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "grid", required_unless_present = "grid")]
    x: Option<f64>,
    /// N uniform points over (a, b].
    #[arg(long)]
    grid: Option<usize>,
}

#[derive(Args, Debug, Clone)]
struct Quad {
    #[arg(long)]
    quad_nodes: Option<usize>,
    #[arg(long)]
    quad_tol: Option<f64>,
    #[arg(long, value_enum, default_value_t = RuleArg::Adaptive)]
    quad_rule: RuleArg,
}

#[derive(Args, Debug, Clone)]
struct Sink {
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<std::path::PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args, Debug)]
struct EvalArgs {
    #[arg(long, value_enum)]
    op: Op,
    #[arg(long, value_enum, default_value_t = SideArg::Left)]
    side: SideArg,
    #[arg(long)]
    alpha: f64,
    #[arg(long, default_value_t = 0.0)]
    beta: f64,
    /// identity, log, pow:<rho> or expr:<text>.
    #[arg(long, default_value = "identity")]
    psi: String,
    /// The function, as an expression in x.
    #[arg(long)]
    f: String,
    #[command(flatten)]
    points: Points,
    #[command(flatten)]
    quad: Quad,
    #[command(flatten)]
    sink: Sink,
}

#[derive(Args, Debug)]
struct CatalogArgs {
    /// Print the catalog instead of evaluating.
    #[arg(long, conflicts_with = "name")]
    list: bool,
    #[arg(long, required_unless_present = "list")]
    name: Option<String>,
    #[arg(long, value_enum, default_value_t = KindArg::Integral)]
    kind: KindArg,
    /// Preset parameter as key=value; repeatable.
    #[arg(long = "param", value_name = "KEY=VALUE")]
    params: Vec<String>,
    /// Kernel selector for presets defined for any ψ.
    #[arg(long)]
    psi: Option<String>,
    #[arg(long, required_unless_present = "list")]
    alpha: Option<f64>,
    #[arg(long, required_unless_present = "list")]
    f: Option<String>,
    /// Interval; optional at a single x for infinite-interval presets.
    #[arg(long, allow_hyphen_values = true)]
    a: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    b: Option<f64>,
    #[arg(long, allow_hyphen_values = true, conflicts_with = "grid")]
    x: Option<f64>,
    #[arg(long)]
    grid: Option<usize>,
    #[command(flatten)]
    quad: Quad,
    #[command(flatten)]
    sink: Sink,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, default_value = "all")]
    suite: String,
    /// Replaces every per-case tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// Print passing cases too.
    #[arg(long)]
    verbose: bool,
    #[command(flatten)]
    quad: Quad,
}

#[derive(Args, Debug)]
struct ConvergeArgs {
    #[arg(long, value_enum)]
    op: Op,
    #[arg(long, value_enum, default_value_t = SideArg::Left)]
    side: SideArg,
    #[arg(long)]
    alpha: f64,
    #[arg(long, default_value_t = 0.0)]
    beta: f64,
    #[arg(long, default_value = "identity")]
    psi: String,
    #[arg(long)]
    f: String,
    #[arg(long, allow_hyphen_values = true)]
    a: f64,
    #[arg(long, allow_hyphen_values = true)]
    b: f64,
    #[arg(long, allow_hyphen_values = true)]
    x: f64,
    /// Coarsest mesh.
    #[arg(long, default_value_t = 16)]
    quad_nodes: usize,
    #[arg(long, default_value_t = 6)]
    levels: usize,
}

/// Failure of a command, split by the exit code it maps to.
enum Fail {
    Usage(String),
    Numeric(FracError),
    Io(std::io::Error),
}

impl From<std::io::Error> for Fail {
    fn from(e: std::io::Error) -> Self {
        Fail::Io(e)
    }
}

fn usage<E: std::fmt::Display>(e: E) -> Fail {
    Fail::Usage(e.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Eval(a) => eval(a),
        Command::Catalog(a) => catalog_cmd(a),
        Command::Verify(a) => verify_cmd(a),
        Command::Converge(a) => converge(a),
        Command::List => list().map(|_| true),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FAILED),
        Err(Fail::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Fail::Numeric(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_NUMERIC)
        }
        Err(Fail::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(Fail::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_NUMERIC)
        }
    }
}

impl Quad {
    fn config(&self) -> Result<QuadConfig, Fail> {
        let d = QuadConfig::default();
        let c = QuadConfig::new(self.quad_nodes.unwrap_or(d.nodes), d.refinement, self.quad_tol.unwrap_or(d.tol))
            .map_err(usage)?;
        Ok(c.with_rule(match self.quad_rule {
            RuleArg::Adaptive => QuadRule::Adaptive,
            RuleArg::Trapezoid => QuadRule::ProductTrapezoid,
        }))
    }
}

fn side_of(s: SideArg) -> Side {
    match s {
        SideArg::Left => Side::Left,
        SideArg::Right => Side::Right,
    }
}

fn check_interval(a: f64, b: f64) -> Result<(), Fail> {
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Fail::Usage(format!("need finite a < b, got a = {a}, b = {b}")));
    }
    Ok(())
}

/// The evaluation points: `x` itself, or a + (b − a) i/N for i = 1..N.
fn points(a: f64, b: f64, x: Option<f64>, grid: Option<usize>) -> Result<Vec<f64>, Fail> {
    match (x, grid) {
        (Some(x), None) => {
            if !(x >= a && x <= b) {
                return Err(Fail::Usage(format!("x = {x} lies outside [{a}, {b}]")));
            }
            Ok(vec![x])
        }
        (None, Some(n)) => {
            if n < 2 {
                return Err(Fail::Usage(format!("grid needs at least 2 points, got {n}")));
            }
            Ok((1..=n).map(|i| if i == n { b } else { a + (b - a) * i as f64 / n as f64 }).collect())
        }
        _ => Err(Fail::Usage("give exactly one of --x and --grid".into())),
    }
}

/// Builds the operator once; evaluation then only needs the point.
fn build(op: Op, side: Side, alpha: f64, beta: f64, ctx: &Arc<Context>, f: &Operand) -> Result<Operand, Fail> {
    let order = |b: f64| OrderSpec::new(alpha, b).map_err(usage);
    let r = match op {
        Op::Integral => {
            if !(alpha > 0.0 && alpha.is_finite()) {
                return Err(Fail::Usage(format!("alpha must be positive, got {alpha}")));
            }
            ctx.integral(alpha, side, f)
        }
        Op::Rl => ctx.hilfer(&order(0.0)?, side, f),
        Op::Caputo => ctx.hilfer(&order(1.0)?, side, f),
        Op::Hilfer => ctx.hilfer(&order(beta)?, side, f),
    };
    r.map_err(Fail::Numeric)
}

fn evaluate(op: Op, side: Side, ctx: &Context, operator: &Operand, x: f64) -> fracpsi::Result<EvalResult> {
    match op {
        Op::Integral => ctx.eval_integral(operator, side, x),
        _ => ctx.eval_derivative(operator, side, x),
    }
}

fn eval_rows<F>(xs: &[f64], f: F) -> Result<Vec<Row>, Fail>
where
    F: Fn(f64) -> fracpsi::Result<EvalResult> + Sync,
{
    let results: Vec<_> = xs.par_iter().map(|&x| f(x).map(|r| Row { x, value: r.value, err_est: r.err_est })).collect();
    results.into_iter().collect::<fracpsi::Result<Vec<_>>>().map_err(Fail::Numeric)
}

fn op_name(op: Op) -> &'static str {
    match op {
        Op::Integral => "integral",
        Op::Rl => "rl",
        Op::Caputo => "caputo",
        Op::Hilfer => "hilfer",
    }
}

fn side_name(s: SideArg) -> &'static str {
    match s {
        SideArg::Left => "left",
        SideArg::Right => "right",
    }
}

fn eval(args: EvalArgs) -> Result<bool, Fail> {
    let p = &args.points;
    check_interval(p.a, p.b)?;
    let xs = points(p.a, p.b, p.x, p.grid)?;
    let config = args.quad.config()?;
    let psi = PsiSpec::from_selector(&args.psi, p.a, p.b).map_err(usage)?;
    let f = Operand::parse(&args.f).map_err(usage)?;
    let ctx = Context::new(psi, config).map_err(usage)?;
    let side = side_of(args.side);
    let operator = build(args.op, side, args.alpha, args.beta, &ctx, &f)?;
    let rows = eval_rows(&xs, |x| evaluate(args.op, side, &ctx, &operator, x))?;
    let inputs = serde_json::json!({
        "command": "eval",
        "op": op_name(args.op),
        "side": side_name(args.side),
        "alpha": args.alpha,
        "beta": args.beta,
        "psi": args.psi,
        "f": args.f,
        "a": p.a,
        "b": p.b,
        "x": p.x,
        "grid": p.grid,
        "quad_nodes": config.nodes,
        "quad_tol": config.tol,
        "quad_rule": format!("{:?}", args.quad.quad_rule).to_lowercase(),
    });
    output::write(&args.sink.out, args.sink.format, inputs, &rows)?;
    Ok(true)
}

fn parse_params(items: &[String]) -> Result<Params, Fail> {
    let mut out = Params::new();
    for item in items {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| Fail::Usage(format!("parameter `{item}` is not key=value")))?;
        let v: f64 = v.trim().parse().map_err(|_| Fail::Usage(format!("parameter `{item}` has a non-numeric value")))?;
        out.insert(k.trim().to_string(), v);
    }
    Ok(out)
}

fn catalog_cmd(args: CatalogArgs) -> Result<bool, Fail> {
    let mut out = std::io::stdout().lock();
    if args.list {
        for kind in [OpKind::Integral, OpKind::Derivative] {
            writeln!(out, "{}s:", kind.name())?;
            for e in catalog::registry(kind) {
                let mut params: Vec<String> = e.required.iter().map(|s| s.to_string()).collect();
                params.extend(e.optional.iter().map(|s| format!("[{s}]")));
                writeln!(out, "  {:<22} {:<30} {}  params: {}", e.name, e.title, e.formula, if params.is_empty() { "-".into() } else { params.join(", ") })?;
            }
        }
        return Ok(true);
    }
    let kind = match args.kind {
        KindArg::Integral => OpKind::Integral,
        KindArg::Derivative => OpKind::Derivative,
    };
    let name = args.name.clone().unwrap_or_default();
    let (alpha, a, b) = (args.alpha.unwrap_or(f64::NAN), args.a.unwrap_or(f64::NAN), args.b.unwrap_or(f64::NAN));
    let params = parse_params(&args.params)?;
    let mut preset = catalog::resolve(kind, &name, &params).map_err(usage)?;
    if let Some(sel) = &args.psi {
        preset = preset.with_psi(sel);
    }
    let xs = match preset.domain_policy {
        catalog::DomainPolicy::Finite => {
            if args.a.is_none() || args.b.is_none() {
                return Err(Fail::Usage(format!("preset `{name}` needs --a and --b")));
            }
            check_interval(a, b)?;
            points(a, b, args.x, args.grid)?
        }
        // Infinite-interval operators take any x; a and b only span the grid.
        catalog::DomainPolicy::Truncated { .. } => match (args.x, args.grid) {
            (Some(x), None) => vec![x],
            _ => {
                check_interval(a, b)?;
                points(a, b, args.x, args.grid)?
            }
        },
    };
    let config = args.quad.config()?;
    let f = Operand::parse(args.f.as_deref().unwrap_or("")).map_err(usage)?;
    let rows = eval_rows(&xs, |x| catalog::apply(&preset, alpha, &f, x, a, b, &config))?;
    let inputs = serde_json::json!({
        "command": "catalog",
        "name": name,
        "kind": kind.name(),
        "params": params,
        "psi": args.psi,
        "alpha": alpha,
        "f": args.f,
        "a": a,
        "b": b,
        "x": args.x,
        "grid": args.grid,
        "quad_nodes": config.nodes,
        "quad_tol": config.tol,
    });
    output::write(&args.sink.out, args.sink.format, inputs, &rows)?;
    Ok(true)
}

fn verify_cmd(args: VerifyArgs) -> Result<bool, Fail> {
    let mut out = std::io::stdout().lock();
    let suite: Suite = args.suite.parse().map_err(usage)?;
    if let Some(t) = args.tol {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Fail::Usage(format!("tolerance must be positive, got {t}")));
        }
    }
    let opts = VerifyOptions { config: args.quad.config()?, tol: args.tol };
    let reports = verify::run(suite, &opts);
    for r in &reports {
        for c in &r.cases {
            if args.verbose || !c.passed {
                writeln!(out, "{}/{c}", r.suite.name())?;
            }
        }
    }
    for line in verify::summary(&reports) {
        writeln!(out, "{line}")?;
    }
    Ok(reports.iter().all(|r| r.passed()))
}

fn converge(args: ConvergeArgs) -> Result<bool, Fail> {
    let mut out = std::io::stdout().lock();
    check_interval(args.a, args.b)?;
    points(args.a, args.b, Some(args.x), None)?;
    if args.levels < 3 {
        return Err(Fail::Usage(format!("need at least 3 levels, got {}", args.levels)));
    }
    let psi = PsiSpec::from_selector(&args.psi, args.a, args.b).map_err(usage)?;
    let f = Operand::parse(&args.f).map_err(usage)?;
    let side = side_of(args.side);
    let mut values = Vec::with_capacity(args.levels);
    let mut nodes = args.quad_nodes;
    writeln!(out, "level,nodes,value,difference,observed_order")?;
    for level in 0..args.levels {
        // One doubling per level at a tolerance that never stops it early.
        let config = QuadConfig::new(nodes, 1, 1e-14).map_err(usage)?.with_rule(QuadRule::ProductTrapezoid);
        let ctx = Context::new(psi.clone(), config).map_err(usage)?;
        let operator = build(args.op, side, args.alpha, args.beta, &ctx, &f)?;
        let v = evaluate(args.op, side, &ctx, &operator, args.x).map_err(Fail::Numeric)?.value;
        values.push(v);
        let n = values.len();
        let diff = if n >= 2 { values[n - 1] - values[n - 2] } else { f64::NAN };
        let order = if n >= 3 { ((values[n - 2] - values[n - 3]) / diff).abs().log2() } else { f64::NAN };
        writeln!(out, "{level},{},{},{},{}", 2 * nodes, output::num(v), output::num(diff), output::num(order))?;
        nodes *= 2;
    }
    Ok(true)
}

fn list() -> Result<(), Fail> {
    let mut out = std::io::stdout().lock();
    writeln!(out, "operators: integral, rl, caputo, hilfer")?;
    writeln!(out, "sides: left, right")?;
    writeln!(out, "kernels: identity, log, pow:<rho>, expr:<text>")?;
    let suites: Vec<&str> = Suite::EACH.iter().map(|s| s.name()).chain(["all"]).collect();
    writeln!(out, "suites: {}", suites.join(", "))?;
    for kind in [OpKind::Integral, OpKind::Derivative] {
        let names: Vec<&str> = catalog::registry(kind).iter().map(|e| e.name).collect();
        writeln!(out, "catalog {}s: {}", kind.name(), names.join(", "))?;
    }
    Ok(())
}
