//! Verification suites: identities of the ψ-operators checked numerically,
//! one report line per case.

use crate::catalog::{apply, resolve, OpKind, Params};
use crate::error::{FracError, Result};
use crate::operand::{Context, Operand, Side};
use crate::operators::{inversion_endpoint_data, OrderSpec};
use crate::oracles::{self, interior_grid, reference_kernels, OracleCase, OracleOp, TestFunction};
use crate::psi::{make_preset, PsiKind, PsiSpec};
use crate::quad::QuadConfig;
use crate::specialfn::gamma;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Power,
    Ml,
    Semigroup,
    Inversion,
    Bounds,
    Catalog,
    All,
}

impl Suite {
    pub const EACH: [Suite; 6] = [Suite::Power, Suite::Ml, Suite::Semigroup, Suite::Inversion, Suite::Bounds, Suite::Catalog];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Power => "power",
            Suite::Ml => "ml",
            Suite::Semigroup => "semigroup",
            Suite::Inversion => "inversion",
            Suite::Bounds => "bounds",
            Suite::Catalog => "catalog",
            Suite::All => "all",
        }
    }
}

impl FromStr for Suite {
    type Err = FracError;

    fn from_str(s: &str) -> Result<Suite> {
        Suite::EACH
            .iter()
            .chain(std::iter::once(&Suite::All))
            .find(|x| x.name() == s)
            .copied()
            .ok_or_else(|| FracError::invalid(format!("unknown suite `{s}`")))
    }
}

/// Measured error of one case against its tolerance. `error` is NaN when
/// the computation itself failed; `note` then holds the message.
#[derive(Debug, Clone, PartialEq)]
pub struct CaseReport {
    pub name: String,
    pub error: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub note: Option<String>,
}

impl CaseReport {
    fn measured(name: impl Into<String>, error: f64, tolerance: f64) -> CaseReport {
        CaseReport {
            name: name.into(),
            error,
            tolerance,
            passed: error <= tolerance,
            note: None,
        }
    }

    fn failed(name: impl Into<String>, err: FracError, tolerance: f64) -> CaseReport {
        CaseReport {
            name: name.into(),
            error: f64::NAN,
            tolerance,
            passed: false,
            note: Some(err.to_string()),
        }
    }

    fn from_result(name: String, tolerance: f64, r: Result<f64>) -> CaseReport {
        match r {
            Ok(e) => CaseReport::measured(name, e, tolerance),
            Err(e) => CaseReport::failed(name, e, tolerance),
        }
    }
}

impl fmt::Display for CaseReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{status} {} error={:.3e} tol={:.1e}", self.name, self.error, self.tolerance)?;
        if let Some(n) = &self.note {
            write!(f, " ({n})")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub suite: Suite,
    pub cases: Vec<CaseReport>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.cases.iter().all(|c| c.passed)
    }

    pub fn worst(&self) -> Option<&CaseReport> {
        self.cases
            .iter()
            .filter(|c| c.tolerance.is_finite())
            .max_by(|a, b| (a.error / a.tolerance).total_cmp(&(b.error / b.tolerance)))
    }
}

/// Settings for a verification run. `tol`, when set, replaces the
/// per-case tolerances.
#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    pub config: QuadConfig,
    pub tol: Option<f64>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            config: QuadConfig::default(),
            tol: None,
        }
    }
}

impl VerifyOptions {
    fn tol(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }
}

pub fn run(suite: Suite, opts: &VerifyOptions) -> Vec<SuiteReport> {
    let suites: Vec<Suite> = match suite {
        Suite::All => Suite::EACH.to_vec(),
        s => vec![s],
    };
    suites
        .into_iter()
        .map(|s| SuiteReport {
            suite: s,
            cases: match s {
                Suite::Power => power_suite(opts),
                Suite::Ml => ml_suite(opts),
                Suite::Semigroup => semigroup_suite(opts),
                Suite::Inversion => inversion_suite(opts),
                Suite::Bounds => bounds_suite(opts),
                Suite::Catalog => catalog_suite(opts),
                Suite::All => unreachable!(),
            },
        })
        .collect()
}

fn rel_err(value: f64, expected: f64) -> f64 {
    (value - expected).abs() / expected.abs().max(1e-300)
}

/// Largest relative error of an oracle case over its grid.
pub fn oracle_error(case: &OracleCase, config: &QuadConfig) -> Result<f64> {
    let ctx = Context::new(case.psi.clone(), *config)?;
    let f = case.function.operand(&case.psi, case.side)?;
    let op = match case.op {
        OracleOp::Integral => ctx.integral(case.order.alpha, case.side, &f)?,
        OracleOp::Hilfer => ctx.hilfer(&case.order, case.side, &f)?,
    };
    let mut worst: f64 = 0.0;
    for &x in &case.grid {
        let v = match case.op {
            OracleOp::Integral => ctx.eval_integral(&op, case.side, x)?,
            OracleOp::Hilfer => ctx.eval_derivative(&op, case.side, x)?,
        };
        worst = worst.max(rel_err(v.value, (case.expected)(x)?));
    }
    Ok(worst)
}

pub fn run_oracle_case(case: &OracleCase, opts: &VerifyOptions) -> CaseReport {
    CaseReport::from_result(case.name.clone(), opts.tol(case.tolerance), oracle_error(case, &opts.config))
}

/// Largest |HD (ψ − ψ(a))^{γ−k}| over the interior grid, k = 1..n.
pub fn kernel_residual(psi: &PsiSpec, order: &OrderSpec, config: &QuadConfig) -> Result<f64> {
    let ctx = Context::new(psi.clone(), *config)?;
    let mut worst: f64 = 0.0;
    for k in 1..=order.n {
        let f = TestFunction::PsiPower { delta: order.gamma_h - k as f64 + 1.0 }.operand(psi, Side::Left)?;
        let op = ctx.hilfer(order, Side::Left, &f)?;
        for x in interior_grid(psi) {
            worst = worst.max(ctx.eval_derivative(&op, Side::Left, x)?.value.abs());
        }
    }
    Ok(worst)
}

fn power_suite(opts: &VerifyOptions) -> Vec<CaseReport> {
    let mut out: Vec<CaseReport> = oracles::power_integral_cases()
        .iter()
        .chain(oracles::power_derivative_cases().iter())
        .map(|c| run_oracle_case(c, opts))
        .collect();
    for (kname, psi) in reference_kernels() {
        for alpha in oracles::POWER_ALPHAS {
            for beta in oracles::POWER_BETAS {
                let order = OrderSpec::new(alpha, beta).unwrap();
                out.push(CaseReport::from_result(
                    format!("hilfer_kernel/{kname}/a{alpha}/b{beta}"),
                    opts.tol(5e-5),
                    kernel_residual(&psi, &order, &opts.config),
                ));
            }
        }
    }
    out
}

/// HD^{α,β} E_α(λ s^α) − λ E_α(λ s^α) against s^{−α}/Γ(1−α), the image
/// of the constant term, as a largest relative deviation.
pub fn ml_deviation_error(alpha: f64, beta: f64, lambda: f64, config: &QuadConfig) -> Result<f64> {
    let psi = make_preset(PsiKind::Identity, 0.0, 1.0)?;
    let ctx = Context::new(psi.clone(), *config)?;
    let order = OrderSpec::new(alpha, beta)?;
    let f = TestFunction::MittagLeffler { alpha, lambda }.operand(&psi, Side::Left)?;
    let op = ctx.hilfer(&order, Side::Left, &f)?;
    let mut worst: f64 = 0.0;
    for x in interior_grid(&psi) {
        let dev = ctx.eval_derivative(&op, Side::Left, x)?.value - oracles::ml_eigen(&psi, alpha, lambda, x)?;
        let predicted = x.powf(-alpha) / gamma(1.0 - alpha)?;
        worst = worst.max(rel_err(dev, predicted));
    }
    Ok(worst)
}

fn ml_suite(opts: &VerifyOptions) -> Vec<CaseReport> {
    let mut out: Vec<CaseReport> = oracles::ml_cases().iter().map(|c| run_oracle_case(c, opts)).collect();
    for alpha in oracles::ML_ALPHAS {
        for lambda in oracles::ML_LAMBDAS {
            out.push(CaseReport::from_result(
                format!("ml_constant_term/a{alpha}/l{lambda}/b0.5"),
                opts.tol(1e-3),
                ml_deviation_error(alpha, 0.5, lambda, &opts.config),
            ));
        }
    }
    out
}

pub const SEMIGROUP_ORDERS: [f64; 3] = [0.3, 0.7, 1.2];
pub const SEMIGROUP_FUNCTIONS: [&str; 3] = ["1", "t", "sin(t)"];

/// Largest |I^α I^β f − I^{α+β} f| over the interior grid, and the
/// matching combined error estimate.
pub fn semigroup_deviation(psi: &PsiSpec, a1: f64, a2: f64, f: &Operand, config: &QuadConfig) -> Result<(f64, f64)> {
    let ctx = Context::new(psi.clone(), *config)?;
    let nested = ctx.integral(a1, Side::Left, &ctx.integral(a2, Side::Left, f)?)?;
    let direct = ctx.integral(a1 + a2, Side::Left, f)?;
    let (mut dev, mut err): (f64, f64) = (0.0, 0.0);
    for x in interior_grid(psi) {
        let u = ctx.eval_integral(&nested, Side::Left, x)?;
        let v = ctx.eval_integral(&direct, Side::Left, x)?;
        let d = (u.value - v.value).abs();
        if d > dev {
            dev = d;
            err = u.err_est + v.err_est;
        }
    }
    Ok((dev, err))
}

/// (I^α)^k h against I^{kα} h, and the mean-value ratio
/// (I^α)^k h / (s^{kα}/Γ(kα+1)) against the range of h on [a, x].
pub fn iterated_semigroup(psi: &PsiSpec, alpha: f64, k: u32, h: &Operand, config: &QuadConfig) -> Result<(f64, f64)> {
    let ctx = Context::new(psi.clone(), *config)?;
    let mut it = h.clone();
    for _ in 0..k {
        it = ctx.integral(alpha, Side::Left, &it)?;
    }
    let direct = ctx.integral(k as f64 * alpha, Side::Left, h)?;
    let ka = k as f64 * alpha;
    let (mut dev, mut outside): (f64, f64) = (0.0, 0.0);
    for x in interior_grid(psi) {
        let u = ctx.eval_integral(&it, Side::Left, x)?.value;
        let v = ctx.eval_integral(&direct, Side::Left, x)?.value;
        dev = dev.max((u - v).abs());
        let s = psi.from_a(x)?;
        let ratio = u / (s.powf(ka) / gamma(ka + 1.0)?);
        let (a, _) = (psi.a(), psi.b());
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for i in 1..=64 {
            let t = a + (x - a) * i as f64 / 64.0;
            let y = h.eval_at(&ctx, t)?.value;
            lo = lo.min(y);
            hi = hi.max(y);
        }
        if let Some(y) = h.limit(Side::Left, &ctx) {
            lo = lo.min(y);
            hi = hi.max(y);
        }
        let slack = 1e-9 * hi.abs().max(lo.abs()).max(1.0);
        outside = outside.max((lo - ratio - slack).max(ratio - hi - slack).max(0.0));
    }
    Ok((dev, outside))
}

fn semigroup_suite(opts: &VerifyOptions) -> Vec<CaseReport> {
    let mut out = Vec::new();
    for (kname, psi) in reference_kernels() {
        for a1 in SEMIGROUP_ORDERS {
            for a2 in SEMIGROUP_ORDERS {
                for fs in SEMIGROUP_FUNCTIONS {
                    let name = format!("semigroup/{kname}/{a1}+{a2}/{fs}");
                    let f = Operand::parse(fs).unwrap();
                    match semigroup_deviation(&psi, a1, a2, &f, &opts.config) {
                        Ok((dev, err)) => out.push(CaseReport::measured(name, dev, opts.tol(1e-6).max(3.0 * err))),
                        Err(e) => out.push(CaseReport::failed(name, e, opts.tol(1e-6))),
                    }
                }
            }
        }
        let smooth = Operand::parse("sin(t) + 1").unwrap();
        let hd = mean_value_input(&psi, &opts.config);
        for k in [2u32, 3] {
            let name = format!("iterated/{kname}/k{k}");
            match iterated_semigroup(&psi, 0.4, k, &smooth, &opts.config) {
                Ok((dev, _)) => out.push(CaseReport::measured(name, dev, opts.tol(1e-6))),
                Err(e) => out.push(CaseReport::failed(name, e, opts.tol(1e-6))),
            }
            let name = format!("mean_value/{kname}/k{k}");
            let r = hd.clone().and_then(|h| iterated_semigroup(&psi, 0.4, k, &h, &opts.config)).map(|(_, o)| o);
            out.push(CaseReport::from_result(name, 0.0, r));
        }
    }
    out
}

/// h = (HD^{0.5,0.5})^2 f for f = s^3 + 2 s^2 in s = ψ(x) − ψ(a). The
/// operators reduce ψ-powers exactly; h is returned opaque so that
/// iterated integrals of it go through quadrature.
pub fn mean_value_input(psi: &PsiSpec, config: &QuadConfig) -> Result<Operand> {
    let ctx = Context::new(psi.clone(), *config)?;
    let order = OrderSpec::new(0.5, 0.5)?;
    let f = Operand::power(1.0, 3.0, Side::Left).add(&Operand::power(2.0, 2.0, Side::Left));
    let h = ctx.hilfer(&order, Side::Left, &ctx.hilfer(&order, Side::Left, &f)?)?;
    Ok(Operand::native(move |p| h.eval(p).map(|r| r.value)))
}

/// Smooth test inputs: `exp(x)` and `cos(x) + x^2` for n = 1; for n = 2,
/// where the ψ-Hilfer derivative of f(a) ≠ 0 does not exist for β < 1,
/// s·exp(s) and s·(cos(x) + x^2) with s = ψ(x) − ψ(a). Both stay smooth in
/// s when ψ'(a) = 0, as for x^2 on [0, 1].
pub fn inversion_functions(psi: &PsiSpec, n: u32) -> Vec<Operand> {
    use crate::expr::Expr;
    let s = Expr::sub(psi.psi_expr().clone(), Expr::Const(psi.psi(psi.a()).unwrap()));
    let even = Operand::parse("cos(x) + x^2").unwrap();
    if n == 1 {
        vec![Operand::parse("exp(x)").unwrap(), even]
    } else {
        let s_exp = Expr::mul(s.clone(), Expr::call(crate::expr::Func::Exp, vec![s.clone()]));
        vec![Operand::expr(s_exp), Operand::expr(s).mul(&even)]
    }
}

pub const INVERSION_ORDERS: [(f64, f64); 6] = [(0.5, 0.0), (0.5, 0.5), (0.5, 1.0), (0.8, 0.3), (1.5, 0.5), (1.5, 1.0)];

/// Largest relative error of HD(I^α f) = f over the interior grid.
pub fn left_inverse_error(psi: &PsiSpec, order: &OrderSpec, f: &Operand, config: &QuadConfig) -> Result<f64> {
    let ctx = Context::new(psi.clone(), *config)?;
    let op = ctx.hilfer(order, Side::Left, &ctx.integral(order.alpha, Side::Left, f)?)?;
    let mut worst: f64 = 0.0;
    for x in interior_grid(psi) {
        let v = ctx.eval_derivative(&op, Side::Left, x)?.value;
        worst = worst.max(rel_err(v, f.eval_at(&ctx, x)?.value));
    }
    Ok(worst)
}

/// Largest relative error of I^α(HD f) = f − residual over the interior grid.
pub fn inversion_error(psi: &PsiSpec, order: &OrderSpec, f: &Operand, config: &QuadConfig) -> Result<f64> {
    let ctx = Context::new(psi.clone(), *config)?;
    let op = ctx.integral(order.alpha, Side::Left, &ctx.hilfer(order, Side::Left, f)?)?;
    let data = inversion_endpoint_data(&ctx, order, f)?;
    let mut worst: f64 = 0.0;
    for x in interior_grid(psi) {
        let v = ctx.eval_integral(&op, Side::Left, x)?.value;
        let s = psi.from_a(x)?;
        let mut residual = 0.0;
        for (i, c) in data.iter().enumerate() {
            let e = order.gamma_h - (i + 1) as f64;
            residual += c * s.powf(e) / gamma(e + 1.0)?;
        }
        let fx = f.eval_at(&ctx, x)?.value;
        worst = worst.max(rel_err(v, fx - residual));
    }
    Ok(worst)
}

fn inversion_suite(opts: &VerifyOptions) -> Vec<CaseReport> {
    let mut out = Vec::new();
    for (kname, psi) in reference_kernels() {
        for (alpha, beta) in INVERSION_ORDERS {
            let order = OrderSpec::new(alpha, beta).unwrap();
            for (i, f) in inversion_functions(&psi, order.n).iter().enumerate() {
                out.push(CaseReport::from_result(
                    format!("left_inverse/{kname}/a{alpha}/b{beta}/f{i}"),
                    opts.tol(1e-5),
                    left_inverse_error(&psi, &order, f, &opts.config),
                ));
                out.push(CaseReport::from_result(
                    format!("inversion/{kname}/a{alpha}/b{beta}/f{i}"),
                    opts.tol(1e-5),
                    inversion_error(&psi, &order, f, &opts.config),
                ));
            }
        }
    }
    out
}

/// Points x_i = a + (b − a) i / 200.
pub const NORM_GRID: usize = 201;

fn norm_grid(psi: &PsiSpec) -> Vec<f64> {
    let (a, b) = (psi.a(), psi.b());
    (0..NORM_GRID).map(|i| a + (b - a) * i as f64 / (NORM_GRID - 1) as f64).collect()
}

/// max |(ψ(x) − ψ(a))^γ g(x)| over the norm grid; the point x = a, where
/// the weight vanishes, is left out.
pub fn weighted_norm(ctx: &Context, g: &Operand, gamma_w: f64) -> Result<f64> {
    let mut m: f64 = 0.0;
    for x in norm_grid(ctx.psi()).into_iter().skip(1) {
        let s = ctx.psi().from_a(x)?;
        m = m.max((s.powf(gamma_w) * g.eval_at(ctx, x)?.value).abs());
    }
    Ok(m)
}

/// Σ_{k<n} max |f^{[k]}| + max |(ψ − ψ(a))^γ f^{[n]}| over the norm grid.
pub fn cn_weighted_norm(ctx: &Arc<Context>, f: &Operand, n: u32, gamma_w: f64) -> Result<f64> {
    let mut total = 0.0;
    let mut d = f.clone();
    for _ in 0..n {
        let mut m: f64 = 0.0;
        for x in norm_grid(ctx.psi()) {
            m = m.max(d.eval_at(ctx, x)?.value.abs());
        }
        total += m;
        d = d.derivative(Side::Left, ctx)?;
    }
    Ok(total + weighted_norm(ctx, &d, gamma_w)?)
}

/// Random smooth inputs c0 + c1 t + c2 t² + c3 sin(k t).
pub fn random_smooth_functions(count: usize, seed: u64) -> Vec<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let c: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-2.0..2.0));
            let k: f64 = rng.gen_range(0.5..6.0);
            format!("{:?} + {:?}*t + {:?}*t^2 + {:?}*sin({:?}*t)", c[0], c[1], c[2], c[3], k)
        })
        .collect()
}

/// ‖HD f‖_{C_γ} / ‖f‖_{C^n_γ} for one input.
pub fn norm_ratio(psi: &PsiSpec, order: &OrderSpec, f: &Operand, config: &QuadConfig) -> Result<f64> {
    let ctx = Context::new(psi.clone(), *config)?;
    let hd = ctx.hilfer(order, Side::Left, f)?;
    Ok(weighted_norm(&ctx, &hd, order.gamma_h)? / cn_weighted_norm(&ctx, f, order.n, order.gamma_h)?)
}

/// max over 101 points of |I^α f_n − I^α f| and the bound
/// (ψ(b)−ψ(a))^α/Γ(α+1) ‖f_n − f‖_∞ for f_n = t + 1/n, f = t.
pub fn uniform_convergence_gap(psi: &PsiSpec, alpha: f64, n: u32, config: &QuadConfig) -> Result<(f64, f64)> {
    let ctx = Context::new(psi.clone(), *config)?;
    let f = Operand::parse("t")?;
    let fnn = Operand::parse(&format!("t + 1/{n}"))?;
    let i_f = ctx.integral(alpha, Side::Left, &f)?;
    let i_fn = ctx.integral(alpha, Side::Left, &fnn)?;
    let (a, b) = (psi.a(), psi.b());
    let mut lhs: f64 = 0.0;
    for i in 0..=100 {
        let x = a + (b - a) * i as f64 / 100.0;
        let d = ctx.eval_integral(&i_fn, Side::Left, x)?.value - ctx.eval_integral(&i_f, Side::Left, x)?.value;
        lhs = lhs.max(d.abs());
    }
    let bound = psi.length().powf(alpha) / gamma(alpha + 1.0)? / n as f64;
    Ok((lhs, bound))
}

pub const CONVERGENCE_NS: [u32; 5] = [1, 2, 5, 10, 100];

fn bounds_suite(opts: &VerifyOptions) -> Vec<CaseReport> {
    let mut out = Vec::new();
    let psi = make_preset(PsiKind::Identity, 0.0, 1.0).unwrap();
    let order = OrderSpec::new(0.5, 0.5).unwrap();
    let k = oracles::bound_constant(&psi, &order);
    for (i, text) in random_smooth_functions(20, 7).iter().enumerate() {
        let f = Operand::parse(text).unwrap();
        let r = norm_ratio(&psi, &order, &f, &opts.config);
        out.push(match r {
            Ok(ratio) => CaseReport::measured(format!("norm_ratio/{i}"), ratio, k + 1e-6),
            Err(e) => CaseReport::failed(format!("norm_ratio/{i}"), e, k),
        });
    }
    for (kname, psi) in reference_kernels() {
        for alpha in oracles::POWER_ALPHAS {
            for n in CONVERGENCE_NS {
                let name = format!("uniform_bound/{kname}/a{alpha}/n{n}");
                out.push(match uniform_convergence_gap(&psi, alpha, n, &opts.config) {
                    Ok((lhs, bound)) => CaseReport::measured(name, lhs, bound + 1e-8),
                    Err(e) => CaseReport::failed(name, e, 0.0),
                });
            }
        }
    }
    out
}

fn params(kv: &[(&str, f64)]) -> Params {
    kv.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

/// Relative gap between two catalog pipelines, or a catalog pipeline and
/// a plain operator, over a few points.
fn catalog_gap(
    kind: OpKind,
    name: &str,
    p: &Params,
    f: &str,
    alpha: f64,
    (a, b): (f64, f64),
    xs: &[f64],
    reference: impl Fn(f64) -> Result<f64>,
    config: &QuadConfig,
) -> Result<f64> {
    let preset = resolve(kind, name, p)?;
    let f = Operand::parse(f)?;
    let mut worst: f64 = 0.0;
    for &x in xs {
        let v = apply(&preset, alpha, &f, x, a, b, config)?.value;
        worst = worst.max(rel_err(v, reference(x)?));
    }
    Ok(worst)
}

fn catalog_suite(opts: &VerifyOptions) -> Vec<CaseReport> {
    let cfg = opts.config;
    let mut out = Vec::new();
    let id = make_preset(PsiKind::Identity, 0.0, 2.0).unwrap();
    let xs = [0.3, 1.0, 1.7];
    let f = "exp(t) + t";
    let fop = Operand::parse(f).unwrap();
    let rl = |alpha: f64| {
        let (id, fop) = (id.clone(), fop.clone());
        move |x: f64| crate::operators::frac_integral(&id, alpha, Side::Left, &fop, x, &cfg).map(|r| r.value)
    };
    out.push(CaseReport::from_result(
        "katugampola_rho1_is_riemann_liouville".into(),
        opts.tol(1e-12),
        catalog_gap(OpKind::Integral, "katugampola", &params(&[("rho", 1.0)]), f, 0.6, (0.0, 2.0), &xs, rl(0.6), &cfg),
    ));
    out.push(CaseReport::from_result(
        "prabhakar_gamma0_is_riemann_liouville".into(),
        opts.tol(1e-8),
        catalog_gap(
            OpKind::Integral,
            "prabhakar",
            &params(&[("gamma_p", 0.0), ("omega", 1.3)]),
            f,
            0.6,
            (0.0, 2.0),
            &xs,
            rl(0.6),
            &cfg,
        ),
    ));
    let ek_exact = |x: f64| Ok(x.powf(-0.5) * power_integral_identity(0.5, 2.0, x));
    out.push(CaseReport::from_result(
        "erdelyi_kober_power".into(),
        opts.tol(1e-8),
        catalog_gap(
            OpKind::Integral,
            "erdelyi_kober",
            &params(&[("sigma", 1.0), ("eta", 0.0)]),
            "t",
            0.5,
            (0.0, 2.0),
            &xs,
            ek_exact,
            &cfg,
        ),
    ));
    // Hadamard integral of (ln t)^2 on [1, e]: 2 (ln x)^{2+α}/Γ(3+α).
    out.push(CaseReport::from_result(
        "hadamard_log_power".into(),
        opts.tol(1e-8),
        catalog_gap(
            OpKind::Integral,
            "hadamard",
            &Params::new(),
            "ln(t)^2",
            0.4,
            (1.0, std::f64::consts::E),
            &[1.3, 2.0, 2.6],
            |x: f64| Ok(2.0 * x.ln().powf(2.4) / gamma(3.4)?),
            &cfg,
        ),
    ));
    // Riesz integral of an even function takes equal values at ±x.
    let riesz = resolve(OpKind::Integral, "riesz", &Params::new()).unwrap();
    let even = Operand::parse("exp(-t^2)").unwrap();
    let r = (|| -> Result<f64> {
        let mut worst: f64 = 0.0;
        for x in [0.4, 1.5] {
            let u = apply(&riesz, 0.5, &even, x, 0.0, 0.0, &cfg)?.value;
            let v = apply(&riesz, 0.5, &even, -x, 0.0, 0.0, &cfg)?.value;
            worst = worst.max((u - v).abs());
        }
        Ok(worst)
    })();
    out.push(CaseReport::from_result("riesz_symmetry".into(), opts.tol(1e-8), r));
    // Riesz integral of e^{−t²} at 0: Γ(α/2) / (2 Γ(α) cos(απ/2)).
    let r = (|| -> Result<f64> {
        let alpha: f64 = 0.5;
        let v = apply(&riesz, alpha, &even, 0.0, 0.0, 0.0, &cfg)?.value;
        let exact = gamma(alpha / 2.0)? / (2.0 * gamma(alpha)? * (alpha * std::f64::consts::FRAC_PI_2).cos());
        Ok(rel_err(v, exact))
    })();
    out.push(CaseReport::from_result("riesz_gaussian".into(), opts.tol(1e-8), r));
    // Weyl derivative of e^{−t} is e^{−x}.
    out.push(CaseReport::from_result(
        "weyl_exponential".into(),
        opts.tol(1e-6),
        catalog_gap(
            OpKind::Derivative,
            "weyl",
            &Params::new(),
            "exp(-t)",
            0.4,
            (0.0, 0.0),
            &[-0.5, 0.5, 2.0],
            |x: f64| Ok((-x).exp()),
            &cfg,
        ),
    ));
    out
}

fn power_integral_identity(alpha: f64, delta: f64, x: f64) -> f64 {
    gamma(delta).unwrap() / gamma(alpha + delta).unwrap() * x.powf(alpha + delta - 1.0)
}

/// Summary used by the CLI: a short line per suite.
pub fn summary(reports: &[SuiteReport]) -> Vec<String> {
    reports
        .iter()
        .map(|r| {
            let failed = r.cases.iter().filter(|c| !c.passed).count();
            format!("{}: {} cases, {} failed", r.suite.name(), r.cases.len(), failed)
        })
        .collect()
}
