//! Lazily evaluated operands for the fractional operators.
//!
//! An [`Operand`] is a tree that is evaluated at a [`Point`], which carries
//! the distances ψ(t) − ψ(a) and ψ(b) − ψ(t) along with t. Integral nodes
//! integrate their child in those distances, so nothing is tabulated.
//! Differentiation is structural where the structure allows it and falls
//! back to Richardson-extrapolated central differences otherwise.

use crate::error::{FracError, Result};
use crate::expr::{parse, Expr};
use crate::psi::PsiSpec;
use crate::quad::{frac_kernel_integral, kernel_product_integral, EvalResult, QuadConfig, QuadRule};
use crate::specialfn::gamma;
use std::fmt;
use std::sync::Arc;

/// Which endpoint an operator is anchored at: `Left` integrates over [a, x],
/// `Right` over [x, b].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Side::Left => "left",
            Side::Right => "right",
        }
    }
}

/// An evaluation point with both kernel distances carried exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub t: f64,
    pub from_a: f64,
    pub to_b: f64,
}

impl Point {
    /// Kernel distance from the endpoint of `side`.
    pub fn dist(&self, side: Side) -> f64 {
        match side {
            Side::Left => self.from_a,
            Side::Right => self.to_b,
        }
    }
}

/// Kernel, interval and quadrature settings shared by the nodes of a tree.
#[derive(Debug, Clone)]
pub struct Context {
    psi: PsiSpec,
    config: QuadConfig,
    len: f64,
}

impl Context {
    pub fn new(psi: PsiSpec, config: QuadConfig) -> Result<Arc<Context>> {
        config.validate()?;
        let len = psi.length();
        Ok(Arc::new(Context { psi, config, len }))
    }

    pub fn psi(&self) -> &PsiSpec {
        &self.psi
    }

    pub fn config(&self) -> &QuadConfig {
        &self.config
    }

    /// ψ(b) − ψ(a).
    pub fn length(&self) -> f64 {
        self.len
    }

    pub fn endpoint(&self, side: Side) -> f64 {
        match side {
            Side::Left => self.psi.a(),
            Side::Right => self.psi.b(),
        }
    }

    pub fn point(&self, x: f64) -> Result<Point> {
        Ok(Point {
            t: x,
            from_a: self.psi.from_a(x)?,
            to_b: self.psi.to_b(x)?,
        })
    }

    /// The point at kernel distance `s` from the endpoint of `side`.
    pub fn point_at_distance(&self, side: Side, s: f64) -> Result<Point> {
        Ok(match side {
            Side::Left => Point {
                t: self.psi.at_from_a(s)?,
                from_a: s,
                to_b: self.len - s,
            },
            Side::Right => Point {
                t: self.psi.at_to_b(s)?,
                from_a: self.len - s,
                to_b: s,
            },
        })
    }
}

type NativeFn = dyn Fn(&Point) -> Result<f64> + Send + Sync;
type KernelFn = dyn Fn(f64) -> Result<f64> + Send + Sync;

enum Node {
    Expr(Expr),
    Native(Arc<NativeFn>),
    /// c · dist(side)^p.
    Power { coef: f64, exponent: f64, side: Side },
    Sum(Vec<Operand>),
    Scale(f64, Operand),
    Product(Operand, Operand),
    /// I^{order} on `side`.
    Integral { order: f64, side: Side, inner: Operand, ctx: Arc<Context> },
    /// ∫ k(dist(x) − dist(t)) g(t) dψ(t) on `side`.
    KernelIntegral { kernel: Arc<KernelFn>, side: Side, inner: Operand, ctx: Arc<Context> },
    /// Numerical d/d dist(side).
    Derivative { side: Side, inner: Operand, ctx: Arc<Context> },
}

/// A function of the evaluation point, built from expressions, closures
/// and fractional integrals.
#[derive(Clone)]
pub struct Operand(Arc<Node>);

const FD_REL_STEP: f64 = 1.0 / 32.0;
/// Fractions of b − a at which endpoint values are extrapolated.
const LIMIT_OFFSETS: [f64; 4] = [1e-3, 2e-3, 4e-3, 8e-3];
const LIMIT_STABILITY: f64 = 1e-6;

impl Operand {
    fn node(n: Node) -> Operand {
        Operand(Arc::new(n))
    }

    pub fn expr(e: Expr) -> Operand {
        Operand::node(Node::Expr(e))
    }

    pub fn parse(text: &str) -> Result<Operand> {
        Ok(Operand::expr(parse(text)?))
    }

    pub fn constant(c: f64) -> Operand {
        Operand::expr(Expr::Const(c))
    }

    pub fn zero() -> Operand {
        Operand::constant(0.0)
    }

    /// A closure of the evaluation point.
    pub fn native<F>(f: F) -> Operand
    where
        F: Fn(&Point) -> Result<f64> + Send + Sync + 'static,
    {
        Operand::node(Node::Native(Arc::new(f)))
    }

    /// A closure of t alone.
    pub fn function<F>(f: F) -> Operand
    where
        F: Fn(f64) -> Result<f64> + Send + Sync + 'static,
    {
        Operand::native(move |p| f(p.t))
    }

    /// coef · (ψ(t) − ψ(a))^exponent on the left, coef · (ψ(b) − ψ(t))^exponent
    /// on the right.
    pub fn power(coef: f64, exponent: f64, side: Side) -> Operand {
        if coef == 0.0 {
            return Operand::zero();
        }
        if exponent == 0.0 {
            return Operand::constant(coef);
        }
        Operand::node(Node::Power { coef, exponent, side })
    }

    pub fn sum(terms: Vec<Operand>) -> Operand {
        let mut flat = Vec::with_capacity(terms.len());
        for t in terms {
            match &*t.0 {
                Node::Sum(inner) => flat.extend(inner.iter().cloned()),
                _ if t.is_zero() => {}
                _ => flat.push(t),
            }
        }
        match flat.len() {
            0 => Operand::zero(),
            1 => flat.pop().unwrap(),
            _ => Operand::node(Node::Sum(flat)),
        }
    }

    pub fn add(&self, other: &Operand) -> Operand {
        Operand::sum(vec![self.clone(), other.clone()])
    }

    pub fn sub(&self, other: &Operand) -> Operand {
        self.add(&other.scale(-1.0))
    }

    pub fn scale(&self, c: f64) -> Operand {
        if c == 1.0 {
            return self.clone();
        }
        if c == 0.0 || self.is_zero() {
            return Operand::zero();
        }
        match &*self.0 {
            Node::Expr(Expr::Const(v)) => Operand::constant(c * v),
            Node::Power { coef, exponent, side } => Operand::power(c * coef, *exponent, *side),
            Node::Scale(k, inner) => inner.scale(c * k),
            _ => Operand::node(Node::Scale(c, self.clone())),
        }
    }

    pub fn mul(&self, other: &Operand) -> Operand {
        if self.is_zero() || other.is_zero() {
            return Operand::zero();
        }
        if let Some(c) = self.as_const() {
            return other.scale(c);
        }
        if let Some(c) = other.as_const() {
            return self.scale(c);
        }
        if let (Node::Expr(u), Node::Expr(v)) = (&*self.0, &*other.0) {
            return Operand::expr(Expr::mul(u.clone(), v.clone()));
        }
        Operand::node(Node::Product(self.clone(), other.clone()))
    }

    pub fn is_zero(&self) -> bool {
        self.as_const() == Some(0.0)
    }

    fn as_const(&self) -> Option<f64> {
        match &*self.0 {
            Node::Expr(e) => e.as_const(),
            _ => None,
        }
    }

    /// Fractional integral of `inner` of the given order.
    ///
    /// Terms that are powers of the distance from the same endpoint are
    /// integrated in closed form; the rest become one quadrature node.
    pub fn integral(ctx: &Arc<Context>, order: f64, side: Side, inner: &Operand) -> Result<Operand> {
        if !(order > 0.0 && order.is_finite()) {
            return Err(FracError::invalid(format!(
                "integral order must be positive, got {order}"
            )));
        }
        let terms: Vec<Operand> = match &*inner.0 {
            Node::Sum(ts) => ts.clone(),
            _ => vec![inner.clone()],
        };
        let mut exact = Vec::new();
        let mut rest = Vec::new();
        for t in terms {
            if t.is_zero() {
                continue;
            }
            if let Some(c) = t.as_const() {
                exact.push(Operand::power(c / gamma(order + 1.0)?, order, side));
                continue;
            }
            match &*t.0 {
                Node::Power { coef, exponent, side: ps } if *ps == side => {
                    if *exponent <= -1.0 {
                        return Err(FracError::invalid(format!(
                            "power {exponent} of the kernel distance is not integrable"
                        )));
                    }
                    let c = coef * gamma(exponent + 1.0)? / gamma(exponent + order + 1.0)?;
                    exact.push(Operand::power(c, exponent + order, side));
                }
                _ => rest.push(t),
            }
        }
        if !rest.is_empty() {
            exact.push(Operand::node(Node::Integral {
                order,
                side,
                inner: Operand::sum(rest),
                ctx: ctx.clone(),
            }));
        }
        Ok(Operand::sum(exact))
    }

    /// ∫ k(w) g dψ over the distances covered by `side`, with w the kernel
    /// distance between the evaluation point and the integration variable.
    pub fn kernel_integral<K>(ctx: &Arc<Context>, side: Side, kernel: K, inner: &Operand) -> Operand
    where
        K: Fn(f64) -> Result<f64> + Send + Sync + 'static,
    {
        Operand::kernel_integral_arc(ctx, side, Arc::new(kernel), inner)
    }

    fn kernel_integral_arc(ctx: &Arc<Context>, side: Side, kernel: Arc<KernelFn>, inner: &Operand) -> Operand {
        if inner.is_zero() {
            return Operand::zero();
        }
        Operand::node(Node::KernelIntegral {
            kernel,
            side,
            inner: inner.clone(),
            ctx: ctx.clone(),
        })
    }

    /// Value at t = x in the kernel of `ctx`.
    pub fn eval_at(&self, ctx: &Context, x: f64) -> Result<EvalResult> {
        self.eval(&ctx.point(x)?)
    }

    pub fn eval(&self, p: &Point) -> Result<EvalResult> {
        match &*self.0 {
            Node::Expr(e) => Ok(EvalResult::exact(e.eval(p.t)?)),
            Node::Native(f) => Ok(EvalResult::exact(f(p)?)),
            Node::Power { coef, exponent, side } => {
                let d = p.dist(*side);
                if d < 0.0 && exponent.fract() != 0.0 {
                    return Err(FracError::domain("kernel distance power", d));
                }
                Ok(EvalResult::exact(coef * d.powf(*exponent)))
            }
            Node::Sum(ts) => {
                let mut acc = EvalResult::exact(0.0);
                for t in ts {
                    let r = t.eval(p)?;
                    acc.value += r.value;
                    acc.err_est += r.err_est;
                    acc.panels_used += r.panels_used;
                }
                Ok(acc)
            }
            Node::Scale(c, inner) => {
                let r = inner.eval(p)?;
                Ok(EvalResult::new(c * r.value, c.abs() * r.err_est, r.panels_used))
            }
            Node::Product(u, v) => {
                let a = u.eval(p)?;
                let b = v.eval(p)?;
                Ok(EvalResult::new(
                    a.value * b.value,
                    a.value.abs() * b.err_est + b.value.abs() * a.err_est + a.err_est * b.err_est,
                    a.panels_used + b.panels_used,
                ))
            }
            Node::Integral { order, side, inner, ctx } => {
                let big_s = p.dist(*side);
                let g = |n: crate::quad::KernelNode| inner.eval(&ctx.point_at_distance(*side, n.s)?);
                match ctx.config.rule {
                    QuadRule::Adaptive => frac_kernel_integral(big_s, *order, ctx.config.tol, g),
                    QuadRule::ProductTrapezoid => {
                        crate::quad::trapezoid_frac_kernel(big_s, *order, &ctx.config, g)
                    }
                }
            }
            Node::KernelIntegral { kernel, side, inner, ctx } => {
                let big_s = p.dist(*side);
                kernel_product_integral(big_s, ctx.config.tol, |w| kernel(w), |n| {
                    inner.eval(&ctx.point_at_distance(*side, n.s)?)
                })
            }
            Node::Derivative { side, inner, ctx } => central_difference(inner, *side, ctx, p.dist(*side)),
        }
    }

    /// d/dψ on the left, −d/dψ on the right: the derivative with respect
    /// to the kernel distance from the endpoint of `side`.
    pub fn derivative(&self, side: Side, ctx: &Arc<Context>) -> Result<Operand> {
        let fd = || Operand::node(Node::Derivative { side, inner: self.clone(), ctx: ctx.clone() });
        Ok(match &*self.0 {
            Node::Expr(e) => {
                if e.is_constant() {
                    return Ok(Operand::zero());
                }
                match e.differentiate() {
                    Ok(de) => {
                        let d = Operand::expr(Expr::mul(de, ctx.psi.inv_dpsi_expr().clone()));
                        match side {
                            Side::Left => d,
                            Side::Right => d.scale(-1.0),
                        }
                    }
                    Err(_) => fd(),
                }
            }
            Node::Native(_) => fd(),
            Node::Power { coef, exponent, side: ps } => {
                let c = coef * exponent;
                if *ps == side {
                    Operand::power(c, exponent - 1.0, side)
                } else {
                    Operand::power(-c, exponent - 1.0, *ps)
                }
            }
            Node::Sum(ts) => {
                let mut out = Vec::with_capacity(ts.len());
                for t in ts {
                    out.push(t.derivative(side, ctx)?);
                }
                Operand::sum(out)
            }
            Node::Scale(c, inner) => inner.derivative(side, ctx)?.scale(*c),
            Node::Product(u, v) => {
                let du = u.derivative(side, ctx)?;
                let dv = v.derivative(side, ctx)?;
                du.mul(v).add(&u.mul(&dv))
            }
            Node::Integral { order, side: is, inner, ctx: ictx } if *is == side => {
                match inner.limit(side, ictx) {
                    Some(g0) => {
                        let body = Operand::integral(ictx, *order, side, &inner.derivative(side, ictx)?)?;
                        let boundary = Operand::power(g0 / gamma(*order)?, order - 1.0, side);
                        body.add(&boundary)
                    }
                    None => fd(),
                }
            }
            // d/dS ∫_0^S k(S − s) g(s) ds = k(S) g(0) + ∫_0^S k(S − s) g'(s) ds.
            Node::KernelIntegral { kernel, side: is, inner, ctx: ictx } if *is == side => {
                match inner.limit(side, ictx) {
                    Some(g0) => {
                        let body = Operand::kernel_integral_arc(ictx, side, kernel.clone(), &inner.derivative(side, ictx)?);
                        if g0 == 0.0 {
                            body
                        } else {
                            let k = kernel.clone();
                            body.add(&Operand::native(move |p| Ok(g0 * k(p.dist(side))?)))
                        }
                    }
                    None => fd(),
                }
            }
            _ => fd(),
        })
    }

    /// Limit at the endpoint of `side`, or `None` if it cannot be found
    /// or does not exist.
    pub fn limit(&self, side: Side, ctx: &Context) -> Option<f64> {
        let v = match &*self.0 {
            Node::Expr(e) => match e.eval(ctx.endpoint(side)) {
                Ok(v) if v.is_finite() => Some(v),
                // Removable singularities such as x^2/x at 0.
                _ => self.extrapolate(side, ctx).ok(),
            },
            Node::Native(_) | Node::Derivative { .. } => self.extrapolate(side, ctx).ok(),
            Node::Power { coef, exponent, side: ps } => {
                if *ps == side {
                    if *exponent > 0.0 {
                        Some(0.0)
                    } else {
                        None
                    }
                } else {
                    Some(coef * ctx.len.powf(*exponent))
                }
            }
            Node::Sum(ts) => ts.iter().map(|t| t.limit(side, ctx)).sum(),
            Node::Scale(c, inner) => inner.limit(side, ctx).map(|v| c * v),
            Node::Product(u, v) => Some(u.limit(side, ctx)? * v.limit(side, ctx)?),
            Node::Integral { side: is, inner, .. } | Node::KernelIntegral { side: is, inner, .. } => {
                if *is == side {
                    if inner.limit(side, ctx).is_some() {
                        Some(0.0)
                    } else {
                        self.extrapolate(side, ctx).ok()
                    }
                } else {
                    let end = ctx.point_at_distance(side, 0.0).ok()?;
                    self.eval(&end).ok().map(|r| r.value)
                }
            }
        };
        v.filter(|v| v.is_finite())
    }

    /// Endpoint value by cubic extrapolation from points at 0.1 %, 0.2 %,
    /// 0.4 % and 0.8 % of the interval, checked against a quadratic fit.
    pub fn extrapolate(&self, side: Side, ctx: &Context) -> Result<f64> {
        let (a, b) = (ctx.psi.a(), ctx.psi.b());
        let mut f = [0.0; 4];
        for (k, off) in LIMIT_OFFSETS.iter().enumerate() {
            let x = match side {
                Side::Left => a + (b - a) * off,
                Side::Right => b - (b - a) * off,
            };
            f[k] = self.eval_at(ctx, x)?.value;
            if !f[k].is_finite() {
                return Err(FracError::Extrapolation(format!("non-finite value near x = {x}")));
            }
        }
        // Cubic through all four nodes (ratio 1:2:4:8) against the quadratic
        // through the first three, both evaluated at 0.
        let fine = (64.0 * f[0] - 56.0 * f[1] + 14.0 * f[2] - f[3]) / 21.0;
        let coarse = 8.0 / 3.0 * f[0] - 2.0 * f[1] + f[2] / 3.0;
        if (fine - coarse).abs() > LIMIT_STABILITY * fine.abs().max(1.0) {
            return Err(FracError::Extrapolation(format!(
                "{} endpoint estimates {fine} and {coarse} disagree",
                side.name()
            )));
        }
        Ok(fine)
    }
}

/// Richardson-extrapolated central difference in the kernel distance,
/// with steps s/32, s/64 and s/128.
fn central_difference(inner: &Operand, side: Side, ctx: &Context, s: f64) -> Result<EvalResult> {
    let h = FD_REL_STEP * s;
    if !(h > 1e-300) {
        return Err(FracError::StepUnderflow { distance: s });
    }
    let mut d = [0.0; 3];
    let mut max_err: f64 = 0.0;
    let mut evals = 0;
    for (k, dk) in d.iter_mut().enumerate() {
        let hk = h / (1u32 << k) as f64;
        let up = inner.eval(&ctx.point_at_distance(side, s + hk)?)?;
        let dn = inner.eval(&ctx.point_at_distance(side, s - hk)?)?;
        *dk = (up.value - dn.value) / (2.0 * hk);
        max_err = max_err.max(up.err_est).max(dn.err_est);
        evals += up.panels_used + dn.panels_used + 2;
    }
    let r1 = (4.0 * d[1] - d[0]) / 3.0;
    let r2 = (4.0 * d[2] - d[1]) / 3.0;
    let r = (16.0 * r2 - r1) / 15.0;
    let err = (r - r2).abs() + 6.6 * max_err / h;
    Ok(EvalResult::new(r, err, evals))
}

impl fmt::Display for Operand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.0 {
            Node::Expr(e) => write!(f, "{e}"),
            Node::Native(_) => write!(f, "<fn>"),
            Node::Power { coef, exponent, side } => write!(f, "{coef:?}*s_{}^{exponent:?}", side.name()),
            Node::Sum(ts) => {
                write!(f, "(")?;
                for (i, t) in ts.iter().enumerate() {
                    if i > 0 {
                        write!(f, " + ")?;
                    }
                    write!(f, "{t}")?;
                }
                write!(f, ")")
            }
            Node::Scale(c, inner) => write!(f, "{c:?}*{inner}"),
            Node::Product(u, v) => write!(f, "{u}*{v}"),
            Node::Integral { order, side, inner, .. } => write!(f, "I_{}^{order:?}[{inner}]", side.name()),
            Node::KernelIntegral { side, inner, .. } => write!(f, "K_{}[{inner}]", side.name()),
            Node::Derivative { side, inner, .. } => write!(f, "D_{}[{inner}]", side.name()),
        }
    }
}

impl fmt::Debug for Operand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Operand({self})")
    }
}

impl From<Expr> for Operand {
    fn from(e: Expr) -> Operand {
        Operand::expr(e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::psi::{make_preset, PsiKind};

    fn ctx(kind: PsiKind, a: f64, b: f64) -> Arc<Context> {
        Context::new(make_preset(kind, a, b).unwrap(), QuadConfig::default().with_tol(1e-12)).unwrap()
    }

    #[test]
    fn integral_of_constant_is_closed_form() {
        let c = ctx(PsiKind::Identity, 0.0, 1.0);
        let op = Operand::integral(&c, 0.5, Side::Left, &Operand::constant(1.0)).unwrap();
        let v = op.eval_at(&c, 1.0).unwrap().value;
        assert!((v - 1.128_379_167_095_512_6).abs() < 1e-15);
    }

    #[test]
    fn integral_of_expression_uses_quadrature() {
        let c = ctx(PsiKind::Log, 1.0, std::f64::consts::E);
        // ln(x)^2 = s^2 in the log kernel.
        let f = Operand::parse("ln(x)^2").unwrap();
        let op = Operand::integral(&c, 0.3, Side::Left, &f).unwrap();
        let x = 2.0f64;
        let s = x.ln();
        let exact = 2.0 / gamma(3.3).unwrap() * s.powf(2.3);
        let r = op.eval_at(&c, x).unwrap();
        assert!(((r.value - exact) / exact).abs() < 1e-12, "{r:?} {exact}");
        assert!(r.panels_used > 0);
    }

    #[test]
    fn derivative_of_integral_adds_boundary_term() {
        let c = ctx(PsiKind::Identity, 0.0, 2.0);
        let f = Operand::parse("exp(x)").unwrap();
        let i = Operand::integral(&c, 0.4, Side::Left, &f).unwrap();
        let d = i.derivative(Side::Left, &c).unwrap();
        // Compare against a numerical derivative of the integral.
        let fd = Operand::node(Node::Derivative { side: Side::Left, inner: i.clone(), ctx: c.clone() });
        for x in [0.3, 1.0, 1.9] {
            let a = d.eval_at(&c, x).unwrap().value;
            let b = fd.eval_at(&c, x).unwrap().value;
            assert!((a - b).abs() < 1e-8 * a.abs().max(1.0), "x={x}: {a} vs {b}");
        }
    }

    #[test]
    fn right_side_derivative_sign() {
        let c = ctx(PsiKind::Identity, 0.0, 1.0);
        let f = Operand::parse("x^2").unwrap();
        // d/d(b - x) of x^2 is -2x.
        let d = f.derivative(Side::Right, &c).unwrap();
        assert!((d.eval_at(&c, 0.25).unwrap().value + 0.5).abs() < 1e-15);
        let p = Operand::power(2.0, 3.0, Side::Left);
        let dp = p.derivative(Side::Right, &c).unwrap();
        assert!((dp.eval_at(&c, 0.5).unwrap().value + 6.0 * 0.25).abs() < 1e-14);
    }

    #[test]
    fn native_derivative_and_limits() {
        let c = ctx(PsiKind::Identity, 0.0, 1.0);
        let f = Operand::function(|t| Ok((2.0 * t).sin()));
        let d = f.derivative(Side::Left, &c).unwrap();
        let v = d.eval_at(&c, 0.5).unwrap();
        assert!((v.value - 2.0 * 1f64.cos()).abs() < 1e-10, "{v:?}");
        let l = f.limit(Side::Left, &c).unwrap();
        assert!(l.abs() < 1e-8);
        let r = f.limit(Side::Right, &c).unwrap();
        assert!((r - 2f64.sin()).abs() < 1e-8);
        let singular = Operand::function(|t| Ok(t.powf(-0.5)));
        assert!(singular.limit(Side::Left, &c).is_none());
    }

    #[test]
    fn non_integrable_power_is_rejected() {
        let c = ctx(PsiKind::Identity, 0.0, 1.0);
        let p = Operand::power(1.0, -1.0, Side::Left);
        assert!(Operand::integral(&c, 0.5, Side::Left, &p).is_err());
        assert!(Operand::integral(&c, 0.0, Side::Left, &Operand::constant(1.0)).is_err());
    }

    #[test]
    fn step_underflow_at_endpoint() {
        let c = ctx(PsiKind::Identity, 0.0, 1.0);
        let f = Operand::function(|t| Ok(t.exp()));
        let d = f.derivative(Side::Left, &c).unwrap();
        assert!(matches!(d.eval_at(&c, 0.0), Err(FracError::StepUnderflow { .. })));
    }
}
