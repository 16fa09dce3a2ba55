//! ψ-fractional integrals and the ψ-Riemann-Liouville, ψ-Caputo and
//! ψ-Hilfer derivatives on a finite interval, left- and right-sided.
//!
//! Each operator is first built as an [`Operand`] by a [`Context`] and then
//! evaluated; the free functions do both. Right-sided operators act in the
//! distance ψ(b) − ψ(x), so their derivative steps are −(1/ψ') d/dx and the
//! (−1)^n factors come out of the construction.

use crate::error::{FracError, Result};
use crate::operand::{Context, Operand, Side};
use crate::psi::PsiSpec;
use crate::quad::{EvalResult, QuadConfig};
use crate::specialfn::gamma;
use std::sync::Arc;

pub type SideTag = Side;

/// Order α and type β of a ψ-Hilfer derivative, with the derived
/// quantities n, γ = α + β(n − α) and μ = n(1 − β) + βα.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrderSpec {
    pub alpha: f64,
    pub beta: f64,
    pub n: u32,
    pub gamma_h: f64,
    pub mu: f64,
}

impl OrderSpec {
    pub fn new(alpha: f64, beta: f64) -> Result<OrderSpec> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(FracError::invalid(format!("order alpha must be positive, got {alpha}")));
        }
        if !(0.0..=1.0).contains(&beta) {
            return Err(FracError::invalid(format!("type beta must lie in [0, 1], got {beta}")));
        }
        if alpha > 1000.0 {
            return Err(FracError::invalid(format!("order alpha = {alpha} is too large")));
        }
        let n = if alpha.fract() == 0.0 { alpha as u32 } else { alpha.floor() as u32 + 1 };
        let nf = n as f64;
        Ok(OrderSpec {
            alpha,
            beta,
            n,
            gamma_h: alpha + beta * (nf - alpha),
            mu: nf * (1.0 - beta) + beta * alpha,
        })
    }

    pub fn is_integer(&self) -> bool {
        self.alpha == self.n as f64
    }
}

impl Context {
    /// I^{α;ψ} f on `side`.
    pub fn integral(self: &Arc<Self>, alpha: f64, side: Side, f: &Operand) -> Result<Operand> {
        Operand::integral(self, alpha, side, f)
    }

    /// (±(1/ψ') d/dx)^n f, the sign being − on the right.
    pub fn psi_derivative(self: &Arc<Self>, n: u32, side: Side, f: &Operand) -> Result<Operand> {
        let mut d = f.clone();
        for _ in 0..n {
            d = d.derivative(side, self)?;
        }
        Ok(d)
    }

    /// I^{n−α} applied to the n-th ψ-derivative.
    pub fn caputo(self: &Arc<Self>, alpha: f64, side: Side, f: &Operand) -> Result<Operand> {
        let order = OrderSpec::new(alpha, 1.0)?;
        let dn = self.psi_derivative(order.n, side, f)?;
        if order.is_integer() {
            return Ok(dn);
        }
        self.integral(order.n as f64 - alpha, side, &dn)
    }

    /// Riemann-Liouville derivative as the Caputo derivative plus the
    /// derivatives of the subtracted ψ-Taylor polynomial,
    /// Σ_k f^{[k]}(a) s^{k−α} / Γ(k + 1 − α).
    ///
    /// When an endpoint value f^{[k]}(a) cannot be determined the
    /// derivative of I^{n−α} f is taken numerically instead.
    pub fn riemann_liouville(self: &Arc<Self>, alpha: f64, side: Side, f: &Operand) -> Result<Operand> {
        let order = OrderSpec::new(alpha, 0.0)?;
        if order.is_integer() {
            return self.psi_derivative(order.n, side, f);
        }
        let mut terms = Vec::with_capacity(order.n as usize + 1);
        let mut dk = f.clone();
        for k in 0..order.n {
            let Some(lim) = dk.limit(side, self) else {
                let inner = self.integral(order.n as f64 - alpha, side, f)?;
                return self.psi_derivative(order.n, side, &inner);
            };
            let kf = k as f64;
            terms.push(Operand::power(lim / gamma(kf + 1.0 - alpha)?, kf - alpha, side));
            dk = dk.derivative(side, self)?;
        }
        terms.push(self.integral(order.n as f64 - alpha, side, &dk)?);
        Ok(Operand::sum(terms))
    }

    /// I^{γ−α} applied to the Riemann-Liouville derivative of order γ.
    /// β = 0 and β = 1 dispatch to the Riemann-Liouville and Caputo
    /// constructions themselves.
    pub fn hilfer(self: &Arc<Self>, order: &OrderSpec, side: Side, f: &Operand) -> Result<Operand> {
        if order.is_integer() {
            return self.psi_derivative(order.n, side, f);
        }
        if order.beta == 0.0 {
            return self.riemann_liouville(order.alpha, side, f);
        }
        if order.beta == 1.0 {
            return self.caputo(order.alpha, side, f);
        }
        let inner = self.riemann_liouville(order.gamma_h, side, f)?;
        self.integral(order.gamma_h - order.alpha, side, &inner)
    }

    fn check_point(&self, x: f64) -> Result<()> {
        let (a, b) = (self.psi().a(), self.psi().b());
        let slack = 1e-12 * (b - a);
        if !(x >= a - slack && x <= b + slack) {
            return Err(FracError::domain("operator outside [a, b]", x));
        }
        Ok(())
    }

    fn at_endpoint(&self, side: Side, x: f64) -> bool {
        x == self.endpoint(side)
    }

    /// Value of an integral-type operand on `side` at x; 0 at the base point.
    pub fn eval_integral(&self, op: &Operand, side: Side, x: f64) -> Result<EvalResult> {
        self.check_point(x)?;
        if self.at_endpoint(side, x) {
            return Ok(EvalResult::exact(0.0));
        }
        op.eval_at(self, x.clamp(self.psi().a(), self.psi().b()))
    }

    /// Value of a derivative-type operand on `side` at x. At the base
    /// point the one-sided limit is returned; if it does not exist the
    /// value is NaN with an infinite error estimate.
    pub fn eval_derivative(&self, op: &Operand, side: Side, x: f64) -> Result<EvalResult> {
        self.check_point(x)?;
        if self.at_endpoint(side, x) {
            return Ok(match op.limit(side, self) {
                Some(v) => EvalResult::exact(v),
                None => EvalResult::new(f64::NAN, f64::INFINITY, 0),
            });
        }
        op.eval_at(self, x.clamp(self.psi().a(), self.psi().b()))
    }
}

pub fn frac_integral(
    psi: &PsiSpec,
    alpha: f64,
    side: Side,
    f: &Operand,
    x: f64,
    config: &QuadConfig,
) -> Result<EvalResult> {
    let ctx = Context::new(psi.clone(), *config)?;
    let op = ctx.integral(alpha, side, f)?;
    ctx.eval_integral(&op, side, x)
}

/// ((1/ψ') d/dx)^n f at x. Expression operands are differentiated
/// symbolically; others by Richardson-extrapolated central differences in
/// ψ(x) − ψ(a) with relative step 1/32.
pub fn psi_derivative_op(psi: &PsiSpec, n: u32, f: &Operand, x: f64) -> Result<f64> {
    if n == 0 {
        return Err(FracError::invalid("derivative order must be at least 1"));
    }
    let ctx = Context::new(psi.clone(), QuadConfig::default())?;
    let op = ctx.psi_derivative(n, Side::Left, f)?;
    ctx.check_point(x)?;
    Ok(op.eval_at(&ctx, x)?.value)
}

pub fn caputo_derivative(
    psi: &PsiSpec,
    order: &OrderSpec,
    side: Side,
    f: &Operand,
    x: f64,
    config: &QuadConfig,
) -> Result<EvalResult> {
    let ctx = Context::new(psi.clone(), *config)?;
    let op = ctx.caputo(order.alpha, side, f)?;
    ctx.eval_derivative(&op, side, x)
}

pub fn rl_derivative(
    psi: &PsiSpec,
    order: &OrderSpec,
    side: Side,
    f: &Operand,
    x: f64,
    config: &QuadConfig,
) -> Result<EvalResult> {
    let ctx = Context::new(psi.clone(), *config)?;
    let op = ctx.riemann_liouville(order.alpha, side, f)?;
    ctx.eval_derivative(&op, side, x)
}

pub fn hilfer_derivative(
    psi: &PsiSpec,
    order: &OrderSpec,
    side: Side,
    f: &Operand,
    x: f64,
    config: &QuadConfig,
) -> Result<EvalResult> {
    let ctx = Context::new(psi.clone(), *config)?;
    let op = ctx.hilfer(order, side, f)?;
    ctx.eval_derivative(&op, side, x)
}

/// Quadrature settings used where an operation takes no configuration.
pub fn residual_config() -> QuadConfig {
    QuadConfig::default().with_tol(1e-11)
}

/// The endpoint data [((1/ψ') d/dx)^{n−k} I^{(1−β)(n−α)} f](a) for
/// k = 1..n, as right limits.
pub fn inversion_endpoint_data(ctx: &Arc<Context>, order: &OrderSpec, f: &Operand) -> Result<Vec<f64>> {
    let nf = order.n as f64;
    let j = if nf - order.gamma_h > 0.0 {
        ctx.integral(nf - order.gamma_h, Side::Left, f)?
    } else {
        f.clone()
    };
    let mut data = vec![0.0; order.n as usize];
    let mut d = j;
    // data[k-1] holds the (n−k)-th derivative.
    for m in 0..order.n {
        let k = order.n - m;
        data[k as usize - 1] = match d.limit(Side::Left, ctx) {
            Some(v) => v,
            None => d.extrapolate(Side::Left, ctx)?,
        };
        if m + 1 < order.n {
            d = d.derivative(Side::Left, ctx)?;
        }
    }
    Ok(data)
}

/// Σ_{k=1}^n (ψ(x)−ψ(a))^{γ−k} / Γ(γ−k+1) · [((1/ψ') d/dx)^{n−k} I^{(1−β)(n−α)} f](a),
/// the part of f annihilated by the left ψ-Hilfer derivative, so that
/// I^α HD^{α,β} f = f − residual.
pub fn inversion_residual(psi: &PsiSpec, order: &OrderSpec, f: &Operand, x: f64) -> Result<f64> {
    let ctx = Context::new(psi.clone(), residual_config())?;
    ctx.check_point(x)?;
    let data = inversion_endpoint_data(&ctx, order, f)?;
    let s = psi.from_a(x)?;
    let mut r = 0.0;
    for (i, c) in data.iter().enumerate() {
        if *c == 0.0 {
            continue;
        }
        let e = order.gamma_h - (i + 1) as f64;
        r += c * s.powf(e) / gamma(e + 1.0)?;
    }
    Ok(r)
}
