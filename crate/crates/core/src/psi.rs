//! Kernel functions ψ: strictly increasing, C¹ on [a, b].
//!
//! Presets carry closed forms for ψ, ψ' and ψ⁻¹; custom kernels are given as
//! expressions and inverted numerically unless an inverse is supplied.

use crate::error::{FracError, Result};
use crate::expr::{parse, Expr};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PsiKind {
    Identity,
    Log,
    Power(f64),
    Custom,
}

#[derive(Debug, Clone)]
pub struct PsiSpec {
    kind: PsiKind,
    a: f64,
    b: f64,
    psi: Expr,
    dpsi: Expr,
    inv: Option<Expr>,
    inv_dpsi: Expr,
    psi_a: f64,
    psi_b: f64,
}

/// First point that fails validation.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub x: f64,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub points_checked: usize,
    pub first_violation: Option<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.first_violation.is_none()
    }

    pub fn into_result(self) -> Result<()> {
        match self.first_violation {
            None => Ok(()),
            Some(v) => Err(FracError::InvalidDomain(format!(
                "kernel fails at x = {}: {}",
                v.x, v.reason
            ))),
        }
    }
}

fn check_interval(a: f64, b: f64) -> Result<()> {
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(FracError::InvalidDomain(format!(
            "need finite a < b, got [{a}, {b}]"
        )));
    }
    Ok(())
}

/// Builds a preset kernel on [a, b].
pub fn make_preset(kind: PsiKind, a: f64, b: f64) -> Result<PsiSpec> {
    check_interval(a, b)?;
    let x = Expr::Var;
    let (psi, dpsi, inv, inv_dpsi) = match kind {
        PsiKind::Identity => (x.clone(), Expr::Const(1.0), x.clone(), Expr::Const(1.0)),
        PsiKind::Log => {
            if a <= 0.0 {
                return Err(FracError::InvalidDomain(format!(
                    "log kernel needs a > 0, got a = {a}"
                )));
            }
            (
                Expr::call(crate::expr::Func::Ln, vec![x.clone()]),
                Expr::div(Expr::Const(1.0), x.clone()),
                Expr::call(crate::expr::Func::Exp, vec![x.clone()]),
                x.clone(),
            )
        }
        PsiKind::Power(rho) => {
            if !(rho > 0.0 && rho.is_finite()) {
                return Err(FracError::InvalidDomain(format!(
                    "power kernel needs rho > 0, got {rho}"
                )));
            }
            if a < 0.0 {
                return Err(FracError::InvalidDomain(format!(
                    "power kernel needs a >= 0, got a = {a}"
                )));
            }
            (
                Expr::pow(x.clone(), Expr::Const(rho)),
                Expr::mul(Expr::Const(rho), Expr::pow(x.clone(), Expr::Const(rho - 1.0))),
                Expr::pow(x.clone(), Expr::Const(1.0 / rho)),
                Expr::mul(Expr::Const(1.0 / rho), Expr::pow(x.clone(), Expr::Const(1.0 - rho))),
            )
        }
        PsiKind::Custom => {
            return Err(FracError::invalid(
                "custom kernels are built with PsiSpec::custom",
            ))
        }
    };
    let mut spec = PsiSpec {
        kind,
        a,
        b,
        psi,
        dpsi,
        inv: Some(inv),
        inv_dpsi,
        psi_a: 0.0,
        psi_b: 0.0,
    };
    spec.psi_a = spec.psi(a)?;
    spec.psi_b = spec.psi(b)?;
    Ok(spec)
}

impl PsiSpec {
    /// Kernel given by an expression; ψ' is derived symbolically.
    pub fn custom(psi: Expr, a: f64, b: f64, inv: Option<Expr>) -> Result<PsiSpec> {
        check_interval(a, b)?;
        let dpsi = psi.differentiate()?;
        let inv_dpsi = Expr::div(Expr::Const(1.0), dpsi.clone());
        let mut spec = PsiSpec {
            kind: PsiKind::Custom,
            a,
            b,
            psi,
            dpsi,
            inv,
            inv_dpsi,
            psi_a: 0.0,
            psi_b: 0.0,
        };
        spec.psi_a = spec.psi(a)?;
        spec.psi_b = spec.psi(b)?;
        if !(spec.psi_a < spec.psi_b) {
            return Err(FracError::InvalidDomain(format!(
                "kernel is not increasing: psi(a) = {}, psi(b) = {}",
                spec.psi_a, spec.psi_b
            )));
        }
        Ok(spec)
    }

    /// Parses `identity`, `log`, `pow:<rho>` or `expr:<text>`.
    pub fn from_selector(selector: &str, a: f64, b: f64) -> Result<PsiSpec> {
        let s = selector.trim();
        match s {
            "identity" => make_preset(PsiKind::Identity, a, b),
            "log" => make_preset(PsiKind::Log, a, b),
            _ => {
                if let Some(r) = s.strip_prefix("pow:") {
                    let rho: f64 = r.trim().parse().map_err(|_| {
                        FracError::invalid(format!("bad power exponent `{r}`"))
                    })?;
                    make_preset(PsiKind::Power(rho), a, b)
                } else if let Some(text) = s.strip_prefix("expr:") {
                    let spec = PsiSpec::custom(parse(text)?, a, b, None)?;
                    validate(&spec).into_result()?;
                    Ok(spec)
                } else {
                    Err(FracError::invalid(format!(
                        "unknown kernel `{s}`; expected identity, log, pow:<rho> or expr:<text>"
                    )))
                }
            }
        }
    }

    pub fn kind(&self) -> PsiKind {
        self.kind
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn psi_expr(&self) -> &Expr {
        &self.psi
    }

    pub fn dpsi_expr(&self) -> &Expr {
        &self.dpsi
    }

    /// 1/ψ' as an expression, the factor in the ψ-derivative.
    pub fn inv_dpsi_expr(&self) -> &Expr {
        &self.inv_dpsi
    }

    /// Same kernel restricted to another interval.
    pub fn with_domain(&self, a: f64, b: f64) -> Result<PsiSpec> {
        match self.kind {
            PsiKind::Custom => PsiSpec::custom(self.psi.clone(), a, b, self.inv.clone()),
            k => make_preset(k, a, b),
        }
    }

    pub fn psi(&self, x: f64) -> Result<f64> {
        let v = match self.kind {
            PsiKind::Identity => x,
            PsiKind::Log => {
                if x <= 0.0 {
                    return Err(FracError::domain("ln", x));
                }
                x.ln()
            }
            PsiKind::Power(rho) => {
                if x < 0.0 {
                    return Err(FracError::domain("pow", x));
                }
                x.powf(rho)
            }
            PsiKind::Custom => self.psi.eval(x)?,
        };
        Ok(v)
    }

    pub fn dpsi(&self, x: f64) -> Result<f64> {
        match self.kind {
            PsiKind::Identity => Ok(1.0),
            PsiKind::Log => Ok(1.0 / x),
            PsiKind::Power(rho) => Ok(rho * x.powf(rho - 1.0)),
            PsiKind::Custom => self.dpsi.eval(x),
        }
    }

    /// ψ(b) − ψ(a).
    pub fn length(&self) -> f64 {
        match self.kind {
            PsiKind::Log => (self.b / self.a).ln(),
            _ => self.psi_b - self.psi_a,
        }
    }

    /// ψ(x) − ψ(a), computed without cancellation for the presets.
    pub fn from_a(&self, x: f64) -> Result<f64> {
        Ok(match self.kind {
            PsiKind::Identity => x - self.a,
            PsiKind::Log => (x / self.a).ln(),
            _ => self.psi(x)? - self.psi_a,
        })
    }

    /// ψ(b) − ψ(x).
    pub fn to_b(&self, x: f64) -> Result<f64> {
        Ok(match self.kind {
            PsiKind::Identity => self.b - x,
            PsiKind::Log => (self.b / x).ln(),
            _ => self.psi_b - self.psi(x)?,
        })
    }

    /// The t with ψ(t) − ψ(a) = s.
    pub fn at_from_a(&self, s: f64) -> Result<f64> {
        match self.kind {
            PsiKind::Identity => Ok(self.a + s),
            PsiKind::Log => Ok(self.a * s.exp()),
            PsiKind::Power(rho) => Ok((self.psi_a + s).max(0.0).powf(1.0 / rho)),
            PsiKind::Custom => self.inverse_unchecked(self.psi_a + s),
        }
    }

    /// The t with ψ(b) − ψ(t) = s.
    pub fn at_to_b(&self, s: f64) -> Result<f64> {
        match self.kind {
            PsiKind::Identity => Ok(self.b - s),
            PsiKind::Log => Ok(self.b * (-s).exp()),
            PsiKind::Power(rho) => Ok((self.psi_b - s).max(0.0).powf(1.0 / rho)),
            PsiKind::Custom => self.inverse_unchecked(self.psi_b - s),
        }
    }

    /// ψ⁻¹(y) for y in [ψ(a), ψ(b)].
    pub fn invert(&self, y: f64) -> Result<f64> {
        let tol = 1e-12 * (1.0 + y.abs());
        if !(y >= self.psi_a - tol && y <= self.psi_b + tol) {
            return Err(FracError::OutOfRange {
                value: y,
                lo: self.psi_a,
                hi: self.psi_b,
            });
        }
        self.inverse_unchecked(y)
    }

    fn inverse_unchecked(&self, y: f64) -> Result<f64> {
        match self.kind {
            PsiKind::Identity => Ok(y),
            PsiKind::Log => Ok(y.exp()),
            PsiKind::Power(rho) => Ok(y.max(0.0).powf(1.0 / rho)),
            PsiKind::Custom => match &self.inv {
                Some(inv) => inv.eval(y),
                None => self.solve(y),
            },
        }
    }

    /// Safeguarded Newton iteration on a bisection bracket.
    fn solve(&self, y: f64) -> Result<f64> {
        let (mut lo, mut hi) = (self.a, self.b);
        let (flo, fhi) = (self.psi_a - y, self.psi_b - y);
        if flo == 0.0 {
            return Ok(lo);
        }
        if fhi == 0.0 {
            return Ok(hi);
        }
        if flo > 0.0 || fhi < 0.0 {
            // Outside [a, b]: the presets extend naturally, a custom kernel
            // is searched on a widened bracket.
            let w = self.b - self.a;
            let mut k = 1.0;
            loop {
                let (l2, h2) = (self.a - k * w, self.b + k * w);
                let ok_lo = self.psi(l2).map(|v| v - y <= 0.0).unwrap_or(false);
                let ok_hi = self.psi(h2).map(|v| v - y >= 0.0).unwrap_or(false);
                if ok_lo && ok_hi {
                    lo = l2;
                    hi = h2;
                    break;
                }
                k *= 2.0;
                if k > 1e6 {
                    return Err(FracError::OutOfRange {
                        value: y,
                        lo: self.psi_a,
                        hi: self.psi_b,
                    });
                }
            }
        }
        let ytol = 1e-12 * (1.0 + y.abs());
        let mut x = 0.5 * (lo + hi);
        for _ in 0..200 {
            let f = self.psi(x)? - y;
            if f.abs() <= 0.01 * ytol {
                return Ok(x);
            }
            if f < 0.0 {
                lo = x;
            } else {
                hi = x;
            }
            let d = self.dpsi(x).unwrap_or(0.0);
            let newton = x - f / d;
            x = if d > 0.0 && newton > lo && newton < hi {
                newton
            } else {
                0.5 * (lo + hi)
            };
            if hi - lo <= 4.0 * f64::EPSILON * (1.0 + x.abs()) {
                return Ok(x);
            }
        }
        Err(FracError::NonConvergence {
            what: format!("kernel inversion at y = {y}"),
            iterations: 200,
        })
    }
}

/// Number of Chebyshev points used by [`validate`].
pub const VALIDATION_POINTS: usize = 257;

/// Checks ψ' > 0, ψ' against a central difference of ψ (relative 1e-6) and
/// ψ⁻¹(ψ(x)) = x (1e-10) at interior Chebyshev points.
pub fn validate(spec: &PsiSpec) -> ValidationReport {
    let (a, b) = (spec.a, spec.b);
    let n = VALIDATION_POINTS;
    let mut points: Vec<f64> = (0..n)
        .map(|j| {
            let th = std::f64::consts::PI * (2 * j + 1) as f64 / (2 * n) as f64;
            0.5 * (a + b) - 0.5 * (b - a) * th.cos()
        })
        .collect();
    points.sort_by(|x, y| x.partial_cmp(y).unwrap());
    for &x in &points {
        if let Some(reason) = check_point(spec, x) {
            return ValidationReport {
                points_checked: n,
                first_violation: Some(Violation { x, reason }),
            };
        }
    }
    ValidationReport {
        points_checked: n,
        first_violation: None,
    }
}

fn check_point(spec: &PsiSpec, x: f64) -> Option<String> {
    let p = match spec.psi(x) {
        Ok(v) if v.is_finite() => v,
        Ok(v) => return Some(format!("psi is not finite ({v})")),
        Err(e) => return Some(e.to_string()),
    };
    let d = match spec.dpsi(x) {
        Ok(v) => v,
        Err(e) => return Some(e.to_string()),
    };
    if !(d > 0.0 && d.is_finite()) {
        return Some(format!("psi' = {d} is not positive"));
    }
    let h = 1e-3 * (x - spec.a).min(spec.b - x);
    let cd = |h: f64| -> Option<f64> {
        let up = spec.psi(x + h).ok()?;
        let dn = spec.psi(x - h).ok()?;
        Some((up - dn) / (2.0 * h))
    };
    match (cd(h), cd(0.5 * h)) {
        (Some(d1), Some(d2)) => {
            let fd = (4.0 * d2 - d1) / 3.0;
            if (fd - d).abs() > 1e-6 * d.abs() {
                return Some(format!(
                    "psi' = {d} disagrees with the difference quotient {fd}"
                ));
            }
        }
        _ => return Some("psi is undefined near the point".into()),
    }
    if spec.kind != PsiKind::Custom || spec.inv.is_some() {
        match spec.inverse_unchecked(p) {
            Ok(back) if (back - x).abs() <= 1e-10 * (1.0 + x.abs()) => {}
            Ok(back) => return Some(format!("inverse returns {back}")),
            Err(e) => return Some(format!("inverse fails: {e}")),
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_validate() {
        for (kind, a, b) in [
            (PsiKind::Identity, 0.0, 1.0),
            (PsiKind::Log, 1.0, 3.0),
            (PsiKind::Log, 0.01, 50.0),
            (PsiKind::Power(2.0), 0.0, 1.0),
            (PsiKind::Power(0.5), 0.1, 4.0),
        ] {
            let s = make_preset(kind, a, b).unwrap();
            let r = validate(&s);
            assert!(r.is_valid(), "{kind:?}: {:?}", r.first_violation);
            assert_eq!(r.points_checked, 257);
        }
    }

    #[test]
    fn preset_domain_rules() {
        assert!(make_preset(PsiKind::Log, 0.0, 1.0).is_err());
        assert!(make_preset(PsiKind::Power(2.0), -1.0, 1.0).is_err());
        assert!(make_preset(PsiKind::Power(-1.0), 0.0, 1.0).is_err());
        assert!(make_preset(PsiKind::Identity, 1.0, 1.0).is_err());
        assert!(make_preset(PsiKind::Identity, 0.0, f64::INFINITY).is_err());
    }

    #[test]
    fn custom_kernel_inversion() {
        let s = PsiSpec::custom(parse("x + exp(x)").unwrap(), 0.0, 1.0, None).unwrap();
        assert!(validate(&s).is_valid());
        // ψ(0) = 1, so y = 1 maps back to the left endpoint.
        assert_eq!(s.invert(1.0).unwrap(), 0.0);
        let x = s.invert(2.0).unwrap();
        assert!((x - 0.442_854_401_002_388_6).abs() < 1e-12 * 3.0, "{x}");
        assert!(matches!(s.invert(0.5), Err(FracError::OutOfRange { .. })));
        assert!(matches!(s.invert(4.0), Err(FracError::OutOfRange { .. })));
        for i in 1..20 {
            let x = i as f64 / 20.0;
            let y = s.psi(x).unwrap();
            assert!((s.invert(y).unwrap() - x).abs() <= 1e-12 * (1.0 + y));
        }
    }

    #[test]
    fn validation_reports_first_bad_point() {
        // ψ' = 2x − 1 changes sign at x = 1/2.
        let s = PsiSpec::custom(parse("x^2 - x").unwrap(), 0.0, 1.0, None);
        // ψ(0) = ψ(1), rejected as non-increasing.
        assert!(s.is_err());
        let s = PsiSpec::custom(parse("x^3 - x").unwrap(), -2.0, 2.0, None).unwrap();
        let r = validate(&s);
        let v = r.first_violation.unwrap();
        assert!(v.x < -0.5 && v.x > -0.6, "{v:?}");
        // Wrong supplied inverse.
        let s =
            PsiSpec::custom(parse("x^3").unwrap(), 0.5, 2.0, Some(parse("x^0.5").unwrap())).unwrap();
        let r = validate(&s);
        assert!(r.first_violation.unwrap().reason.contains("inverse"));
    }

    #[test]
    fn selector_parsing() {
        assert_eq!(PsiSpec::from_selector("identity", 0.0, 1.0).unwrap().kind(), PsiKind::Identity);
        assert_eq!(PsiSpec::from_selector("log", 1.0, 2.0).unwrap().kind(), PsiKind::Log);
        assert_eq!(
            PsiSpec::from_selector("pow:2.5", 0.0, 1.0).unwrap().kind(),
            PsiKind::Power(2.5)
        );
        assert_eq!(
            PsiSpec::from_selector("expr:sinh_like", 0.0, 1.0).unwrap_err(),
            FracError::UnknownIdentifier {
                offset: 0,
                name: "sinh_like".into()
            }
        );
        assert!(PsiSpec::from_selector("expr:x + x^3", 0.0, 1.0).is_ok());
        assert!(PsiSpec::from_selector("cubic", 0.0, 1.0).is_err());
    }

    #[test]
    fn offsets_are_consistent() {
        let s = make_preset(PsiKind::Power(2.0), 0.5, 2.0).unwrap();
        for i in 0..=10 {
            let x = 0.5 + 1.5 * i as f64 / 10.0;
            let sa = s.from_a(x).unwrap();
            let sb = s.to_b(x).unwrap();
            assert!((sa + sb - s.length()).abs() < 1e-14);
            assert!((s.at_from_a(sa).unwrap() - x).abs() < 1e-14);
            assert!((s.at_to_b(sb).unwrap() - x).abs() < 1e-14);
        }
    }
}
