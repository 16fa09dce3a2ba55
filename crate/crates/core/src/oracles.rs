//! Closed-form reference values for powers of the kernel distance and for
//! Mittag-Leffler eigenfunctions, plus the registry of reference cases run
//! by the verification suites.

use crate::error::{FracError, Result};
use crate::expr::Expr;
use crate::operand::{Operand, Side};
use crate::operators::OrderSpec;
use crate::psi::{make_preset, PsiKind, PsiSpec};
use crate::specialfn::{gamma, mittag_leffler, MLParams};
use std::fmt;
use std::sync::Arc;

fn dist(psi: &PsiSpec, side: Side, x: f64) -> Result<f64> {
    match side {
        Side::Left => psi.from_a(x),
        Side::Right => psi.to_b(x),
    }
}

/// I^α of s^{δ−1}: Γ(δ)/Γ(α+δ) s^{α+δ−1}, with s the kernel distance from
/// the endpoint of `side`.
pub fn power_integral(psi: &PsiSpec, alpha: f64, delta: f64, side: Side, x: f64) -> Result<f64> {
    if !(delta > 0.0) {
        return Err(FracError::invalid(format!("power exponent delta must be positive, got {delta}")));
    }
    let s = dist(psi, side, x)?;
    Ok(gamma(delta)? / gamma(alpha + delta)? * s.powf(alpha + delta - 1.0))
}

/// ψ-Hilfer derivative of s^{δ−1} for δ > n: Γ(δ)/Γ(δ−α) s^{δ−α−1},
/// independent of β.
pub fn power_derivative(psi: &PsiSpec, order: &OrderSpec, delta: f64, side: Side, x: f64) -> Result<f64> {
    if !(delta > order.n as f64) {
        return Err(FracError::invalid(format!(
            "power exponent delta must exceed n = {}, got {delta}",
            order.n
        )));
    }
    let s = dist(psi, side, x)?;
    Ok(gamma(delta)? / gamma(delta - order.alpha)? * s.powf(delta - order.alpha - 1.0))
}

/// λ E_α(λ (ψ(x) − ψ(a))^α), the Caputo-type derivative of the
/// Mittag-Leffler eigenfunction.
pub fn ml_eigen(psi: &PsiSpec, alpha: f64, lambda: f64, x: f64) -> Result<f64> {
    if !(lambda > 0.0) {
        return Err(FracError::invalid(format!("eigenvalue must be positive, got {lambda}")));
    }
    let s = psi.from_a(x)?;
    Ok(lambda * mittag_leffler(MLParams::one(alpha)?, lambda * s.powf(alpha))?)
}

/// Operator norm bound of the ψ-Hilfer derivative from C^n_γ to C_γ:
/// (ψ(b)−ψ(a))^{n−α} / ((n−γ)(γ−α)Γ(n−γ)Γ(γ−α)), infinite for β ∈ {0, 1}.
pub fn bound_constant(psi: &PsiSpec, order: &OrderSpec) -> f64 {
    let nf = order.n as f64;
    let (u, v) = (nf - order.gamma_h, order.gamma_h - order.alpha);
    if !(u > 0.0 && v > 0.0) {
        return f64::INFINITY;
    }
    match (gamma(u), gamma(v)) {
        (Ok(gu), Ok(gv)) => psi.length().powf(nf - order.alpha) / (u * v * gu * gv),
        _ => f64::INFINITY,
    }
}

/// Input functions of the reference cases.
#[derive(Debug, Clone, PartialEq)]
pub enum TestFunction {
    /// (ψ(x) − ψ(a))^{δ−1} on the left, (ψ(b) − ψ(x))^{δ−1} on the right.
    /// Nonnegative left exponents are expressions; singular or right-sided
    /// powers read the carried distance, since ψ(x) − ψ(a) computed from a
    /// rounded x vanishes near the base point.
    PsiPower { delta: f64 },
    /// E_α(λ (ψ(x) − ψ(a))^α).
    MittagLeffler { alpha: f64, lambda: f64 },
    Expr(String),
}

impl TestFunction {
    pub fn operand(&self, psi: &PsiSpec, side: Side) -> Result<Operand> {
        match self {
            TestFunction::PsiPower { delta } => {
                let e = delta - 1.0;
                match side {
                    Side::Left if e < 0.0 => Ok(Operand::native(move |p| Ok(p.from_a.powf(e)))),
                    Side::Left => {
                        let base = Expr::sub(psi.psi_expr().clone(), Expr::Const(psi.psi(psi.a())?));
                        Ok(Operand::expr(Expr::pow(base, Expr::Const(e))))
                    }
                    Side::Right => Ok(Operand::native(move |p| Ok(p.to_b.powf(e)))),
                }
            }
            TestFunction::MittagLeffler { alpha, lambda } => {
                let params = MLParams::one(*alpha)?;
                let (alpha, lambda) = (*alpha, *lambda);
                Ok(Operand::native(move |p| mittag_leffler(params, lambda * p.from_a.powf(alpha))))
            }
            TestFunction::Expr(text) => Operand::parse(text),
        }
    }
}

impl fmt::Display for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TestFunction::PsiPower { delta } => write!(f, "s^{}", delta - 1.0),
            TestFunction::MittagLeffler { alpha, lambda } => write!(f, "E_{alpha}({lambda} s^{alpha})"),
            TestFunction::Expr(text) => write!(f, "{text}"),
        }
    }
}

/// Which operator a reference case exercises.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleOp {
    Integral,
    Hilfer,
}

type Expected = Arc<dyn Fn(f64) -> Result<f64> + Send + Sync>;

/// One operator applied to one function on one kernel, with its closed
/// form and a relative tolerance.
#[derive(Clone)]
pub struct OracleCase {
    pub name: String,
    pub psi: PsiSpec,
    pub order: OrderSpec,
    pub side: Side,
    pub op: OracleOp,
    pub function: TestFunction,
    pub grid: Vec<f64>,
    pub expected: Expected,
    pub tolerance: f64,
    pub description: &'static str,
}

impl fmt::Debug for OracleCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OracleCase")
            .field("name", &self.name)
            .field("order", &self.order)
            .field("side", &self.side)
            .field("op", &self.op)
            .field("function", &self.function)
            .field("tolerance", &self.tolerance)
            .finish()
    }
}

/// Interior fractions of [a, b] at which cases are checked.
pub const GRID_FRACTIONS: [f64; 5] = [0.1, 0.3, 0.5, 0.7, 0.9];

pub fn interior_grid(psi: &PsiSpec) -> Vec<f64> {
    let (a, b) = (psi.a(), psi.b());
    GRID_FRACTIONS.iter().map(|u| a + (b - a) * u).collect()
}

/// The three reference kernels: identity on [0, 1], log on [1, e] and
/// x² on [1, 2], each with ψ' > 0 on the closed interval.
pub fn reference_kernels() -> Vec<(&'static str, PsiSpec)> {
    vec![
        ("identity", make_preset(PsiKind::Identity, 0.0, 1.0).unwrap()),
        ("log", make_preset(PsiKind::Log, 1.0, std::f64::consts::E).unwrap()),
        ("pow2", make_preset(PsiKind::Power(2.0), 1.0, 2.0).unwrap()),
    ]
}

pub const POWER_ALPHAS: [f64; 3] = [0.3, 0.5, 0.8];
pub const POWER_BETAS: [f64; 3] = [0.0, 0.5, 1.0];
pub const ML_ALPHAS: [f64; 2] = [0.4, 0.8];
pub const ML_LAMBDAS: [f64; 2] = [0.5, 1.0];

/// Power-law cases for the ψ-Hilfer derivative: every kernel, α ∈ {0.3,
/// 0.5, 0.8}, δ ∈ {n+1, n+2}, β ∈ {0, 0.5, 1}.
pub fn power_derivative_cases() -> Vec<OracleCase> {
    let mut out = Vec::new();
    for (kname, psi) in reference_kernels() {
        for alpha in POWER_ALPHAS {
            for beta in POWER_BETAS {
                let order = OrderSpec::new(alpha, beta).unwrap();
                for dk in [1.0, 2.0] {
                    let delta = order.n as f64 + dk;
                    let p = psi.clone();
                    out.push(OracleCase {
                        name: format!("hilfer_power/{kname}/a{alpha}/b{beta}/d{delta}"),
                        psi: psi.clone(),
                        order,
                        side: Side::Left,
                        op: OracleOp::Hilfer,
                        function: TestFunction::PsiPower { delta },
                        grid: interior_grid(&psi),
                        expected: Arc::new(move |x| power_derivative(&p, &order, delta, Side::Left, x)),
                        tolerance: 1e-6,
                        description: "ψ-Hilfer derivative of a power of ψ(x) − ψ(a)",
                    });
                }
            }
        }
    }
    out
}

/// Power-law cases for the fractional integral, both sides.
pub fn power_integral_cases() -> Vec<OracleCase> {
    let mut out = Vec::new();
    for (kname, psi) in reference_kernels() {
        for alpha in [0.3, 0.5, 1.2] {
            for delta in [0.5, 1.0, 2.5] {
                for side in [Side::Left, Side::Right] {
                    let p = psi.clone();
                    out.push(OracleCase {
                        name: format!("integral_power/{kname}/{}/a{alpha}/d{delta}", side.name()),
                        psi: psi.clone(),
                        order: OrderSpec::new(alpha, 0.0).unwrap(),
                        side,
                        op: OracleOp::Integral,
                        function: TestFunction::PsiPower { delta },
                        grid: interior_grid(&psi),
                        expected: Arc::new(move |x| power_integral(&p, alpha, delta, side, x)),
                        tolerance: 1e-6,
                        description: "fractional integral of a power of the kernel distance",
                    });
                }
            }
        }
    }
    out
}

/// Mittag-Leffler eigenfunction cases at β = 1 on the identity kernel.
pub fn ml_cases() -> Vec<OracleCase> {
    let mut out = Vec::new();
    let psi = make_preset(PsiKind::Identity, 0.0, 1.0).unwrap();
    for alpha in ML_ALPHAS {
        for lambda in ML_LAMBDAS {
            let p = psi.clone();
            out.push(OracleCase {
                name: format!("ml_eigen/a{alpha}/l{lambda}"),
                psi: psi.clone(),
                order: OrderSpec::new(alpha, 1.0).unwrap(),
                side: Side::Left,
                op: OracleOp::Hilfer,
                function: TestFunction::MittagLeffler { alpha, lambda },
                grid: interior_grid(&psi),
                expected: Arc::new(move |x| ml_eigen(&p, alpha, lambda, x)),
                tolerance: 1e-4,
                description: "Caputo-type derivative of E_α(λ s^α) equals λ E_α(λ s^α)",
            });
        }
    }
    out
}

/// Every built-in reference case.
pub fn registry() -> Vec<OracleCase> {
    let mut all = power_integral_cases();
    all.extend(power_derivative_cases());
    all.extend(ml_cases());
    all
}

#[cfg(test)]
mod tests {
    use super::*;

    fn id(a: f64, b: f64) -> PsiSpec {
        make_preset(PsiKind::Identity, a, b).unwrap()
    }

    #[test]
    fn power_integral_values() {
        let v = power_integral(&id(0.0, 1.0), 0.5, 1.0, Side::Left, 1.0).unwrap();
        assert!((v - 1.128_379_167_095_512_6).abs() < 1e-15);
        assert!((power_integral(&id(0.0, 2.0), 1.0, 1.0, Side::Left, 2.0).unwrap() - 2.0).abs() < 1e-15);
        assert!((power_integral(&id(0.0, 1.0), 1.0, 2.0, Side::Left, 1.0).unwrap() - 0.5).abs() < 1e-15);
        // α → 1 with δ = 1 tends to x − a.
        let v = power_integral(&id(0.5, 2.0), 1.0 - 1e-13, 1.0, Side::Left, 1.7).unwrap();
        assert!((v - 1.2).abs() < 1e-12);
        assert!(power_integral(&id(0.0, 1.0), 0.5, 0.0, Side::Left, 1.0).is_err());
    }

    #[test]
    fn power_derivative_values() {
        let o = OrderSpec::new(0.5, 0.3).unwrap();
        let v = power_derivative(&id(0.0, 1.0), &o, 3.0, Side::Left, 1.0).unwrap();
        assert!((v - 1.504_505_556_127_350_1).abs() < 1e-15);
        let o1 = OrderSpec::new(1.0, 0.0).unwrap();
        assert!((power_derivative(&id(0.0, 5.0), &o1, 2.0, Side::Left, 5.0).unwrap() - 1.0).abs() < 1e-15);
        let log = make_preset(PsiKind::Log, 1.0, std::f64::consts::E).unwrap();
        let v = power_derivative(&log, &o, 3.0, Side::Left, std::f64::consts::E).unwrap();
        assert!((v - 1.504_505_556_127_350_1).abs() < 1e-14);
        assert!(power_derivative(&id(0.0, 1.0), &o, 1.0, Side::Left, 0.5).is_err());
    }

    #[test]
    fn ml_eigen_values() {
        let v = ml_eigen(&id(0.0, 1.0), 1.0, 1.0, 1.0).unwrap();
        assert!((v - std::f64::consts::E).abs() < 1e-14);
        assert_eq!(ml_eigen(&id(0.0, 1.0), 0.6, 0.5, 0.0).unwrap(), 0.5);
        let v = ml_eigen(&id(0.0, 1.0), 0.5, 1.0, 1.0).unwrap();
        assert!((v - 5.008_980_080_762_283_5).abs() < 1e-13);
    }

    #[test]
    fn bound_constant_values() {
        let psi = id(0.0, 1.0);
        assert!(bound_constant(&psi, &OrderSpec::new(0.5, 0.0).unwrap()).is_infinite());
        assert!(bound_constant(&psi, &OrderSpec::new(0.5, 1.0).unwrap()).is_infinite());
        // 16 / Γ(1/4)², with Γ(1/4) = 3.625609908221908311930685155867672.
        let k = bound_constant(&psi, &OrderSpec::new(0.5, 0.5).unwrap());
        let g = 3.625_609_908_221_908_3_f64;
        assert!((k - 16.0 / (g * g)).abs() < 1e-14);
        assert!((k - 1.217_188_477_799_483_3).abs() < 1e-14);
    }

    #[test]
    fn registry_is_well_formed() {
        let r = registry();
        assert_eq!(power_derivative_cases().len(), 54);
        for c in &r {
            assert!(c.tolerance > 0.0);
            for &x in &c.grid {
                assert!((c.expected)(x).unwrap().is_finite(), "{}", c.name);
            }
        }
        let mut names: Vec<_> = r.iter().map(|c| c.name.clone()).collect();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), r.len());
    }

    #[test]
    fn psi_power_function_matches_distance() {
        for (_, psi) in reference_kernels() {
            let f = TestFunction::PsiPower { delta: 2.5 }.operand(&psi, Side::Left).unwrap();
            let g = TestFunction::PsiPower { delta: 2.5 }.operand(&psi, Side::Right).unwrap();
            for x in interior_grid(&psi) {
                let ctx = crate::operand::Context::new(psi.clone(), Default::default()).unwrap();
                let v = f.eval_at(&ctx, x).unwrap().value;
                assert!((v - psi.from_a(x).unwrap().powf(1.5)).abs() < 1e-14);
                let w = g.eval_at(&ctx, x).unwrap().value;
                assert!((w - psi.to_b(x).unwrap().powf(1.5)).abs() < 1e-14);
            }
        }
    }
}
