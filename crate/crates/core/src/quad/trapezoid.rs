use super::{gauss_jacobi, EvalResult, KernelNode, QuadConfig};
use crate::error::{FracError, Result};
use crate::specialfn::gamma;

/// Product-trapezoid weights for ∫_0^N v^{ν-1} φ(v) dv with φ linear on
/// each unit panel, indexed by the distance v = 0..N from the singularity.
fn weights(n: usize, nu: f64) -> Vec<f64> {
    let mut w = vec![0.0; n + 1];
    let gl = gauss_jacobi(12, 0.0, 0.0);
    for p in 1..=n {
        let (a, b) = if p == 1 {
            (1.0 / (nu * (nu + 1.0)), 1.0 / (nu + 1.0))
        } else if p <= 16 {
            let pf = p as f64;
            let m0 = (pf.powf(nu) - (pf - 1.0).powf(nu)) / nu;
            let m1 = (pf.powf(nu + 1.0) - (pf - 1.0).powf(nu + 1.0)) / (nu + 1.0);
            (pf * m0 - m1, m1 - (pf - 1.0) * m0)
        } else {
            // v = c + τ with c = p - 1; the factor (1 + τ/c)^{ν-1} is smooth.
            let c = (p - 1) as f64;
            let mut a = 0.0;
            let mut b = 0.0;
            for (u, wt) in gl.nodes.iter().zip(&gl.weights) {
                let tau = 0.5 * (1.0 + u);
                let k = 0.5 * wt * (1.0 + tau / c).powf(nu - 1.0);
                a += (1.0 - tau) * k;
                b += tau * k;
            }
            let scale = c.powf(nu - 1.0);
            (a * scale, b * scale)
        };
        w[p - 1] += a;
        w[p] += b;
    }
    w
}

fn trapezoid_nodes<F>(n: usize, nu: f64, mut sample: F) -> Result<(f64, f64)>
where
    F: FnMut(usize) -> Result<EvalResult>,
{
    let w = weights(n, nu);
    let mut sum = 0.0;
    let mut err = 0.0;
    for (v, wv) in w.iter().enumerate() {
        let r = sample(v)?;
        sum += wv * r.value;
        err += wv * r.err_est;
    }
    Ok((sum, err))
}

/// Single product-trapezoid sum with `panels` uniform panels for
/// ∫_lower^upper k(s) g(s) ds, where k(s) = (upper - s)^{ν-1} if
/// `at_upper_singularity` and (s - lower)^{ν-1} otherwise.
pub fn product_trapezoid<G>(
    mut g: G,
    lower: f64,
    upper: f64,
    nu: f64,
    at_upper_singularity: bool,
    panels: usize,
) -> Result<f64>
where
    G: FnMut(f64) -> Result<f64>,
{
    if !(nu > 0.0) {
        return Err(FracError::invalid(format!("kernel exponent must be positive, got {nu}")));
    }
    if panels == 0 {
        return Err(FracError::invalid("need at least one panel"));
    }
    let len = upper - lower;
    let h = len / panels as f64;
    let (sum, _) = trapezoid_nodes(panels, nu, |v| {
        let s = if at_upper_singularity {
            upper - v as f64 * h
        } else {
            lower + v as f64 * h
        };
        let y = g(s)?;
        if !y.is_finite() {
            return Err(FracError::NonFiniteSample { abscissa: s });
        }
        Ok(EvalResult::exact(y))
    })?;
    Ok(h.powf(nu) * sum)
}

/// ∫ (upper - s)^{ν-1} g(s) ds over [lower, upper] (or with the kernel
/// singular at `lower`) by the product trapezoidal rule.
///
/// Starts from `config.nodes` panels and doubles up to `config.refinement`
/// times, stopping once successive values agree to `config.tol`. The
/// returned value is the finest sum and `err_est` its difference from the
/// previous one.
pub fn weakly_singular_integral<G>(
    mut g: G,
    lower: f64,
    upper: f64,
    exponent: f64,
    at_upper_singularity: bool,
    config: &QuadConfig,
) -> Result<EvalResult>
where
    G: FnMut(f64) -> Result<f64>,
{
    config.validate()?;
    if !(lower.is_finite() && upper.is_finite()) {
        return Err(FracError::InvalidDomain("integration limits must be finite".into()));
    }
    if upper - lower < 1e-14 {
        return Ok(EvalResult::new(0.0, 0.0, config.nodes));
    }
    let mut n = config.nodes;
    let mut prev = product_trapezoid(&mut g, lower, upper, exponent, at_upper_singularity, n)?;
    let mut diff = 0.0;
    for _ in 0..config.refinement {
        n *= 2;
        let cur = product_trapezoid(&mut g, lower, upper, exponent, at_upper_singularity, n)?;
        diff = (cur - prev).abs();
        prev = cur;
        if diff <= config.tol * prev.abs().max(1.0) {
            break;
        }
    }
    Ok(EvalResult::new(prev, diff, n))
}

/// Product-trapezoid counterpart of the adaptive fractional kernel
/// integral, (1/Γ(ν)) ∫_0^S (S - s)^{ν-1} g(s) ds.
pub(crate) fn trapezoid_frac_kernel<G>(
    big_s: f64,
    nu: f64,
    config: &QuadConfig,
    mut g: G,
) -> Result<EvalResult>
where
    G: FnMut(KernelNode) -> Result<EvalResult>,
{
    if !(big_s > 0.0) {
        return Ok(EvalResult::new(0.0, 0.0, config.nodes));
    }
    let g_nu = gamma(nu)?;
    let mut run = |n: usize| -> Result<(f64, f64)> {
        let h = big_s / n as f64;
        let (sum, err) = trapezoid_nodes(n, nu, |v| {
            let w = v as f64 * h;
            let s = (n - v) as f64 * h;
            let r = g(KernelNode { s, w })?;
            if !r.value.is_finite() {
                return Err(FracError::NonFiniteSample { abscissa: s });
            }
            Ok(r)
        })?;
        let scale = h.powf(nu) / g_nu;
        Ok((scale * sum, scale * err))
    };
    let mut n = config.nodes;
    let (mut prev, _) = run(n)?;
    let mut diff = 0.0;
    let mut inner = 0.0;
    for _ in 0..config.refinement {
        n *= 2;
        let (cur, e) = run(n)?;
        diff = (cur - prev).abs();
        inner = e;
        prev = cur;
        if diff <= config.tol * prev.abs().max(1.0) {
            break;
        }
    }
    Ok(EvalResult::new(prev, diff + inner, n))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> QuadConfig {
        QuadConfig::default()
    }

    #[test]
    fn constant_integrand() {
        let r = weakly_singular_integral(|_| Ok(1.0), 0.0, 1.0, 0.5, true, &cfg()).unwrap();
        assert!((r.value - 2.0).abs() < 1e-12);
        assert!(r.panels_used >= 512);
    }

    #[test]
    fn exact_for_linear_integrands() {
        for nu in [0.25, 0.5, 0.9, 1.5] {
            for upper_sing in [true, false] {
                let (lo, up) = (0.5, 2.0);
                let r = product_trapezoid(|s| Ok(3.0 - 2.0 * s), lo, up, nu, upper_sing, 37).unwrap();
                let len: f64 = up - lo;
                // With u the distance from the singular end, g = c0 + c1 u.
                let (c0, c1) = if upper_sing { (3.0 - 2.0 * up, 2.0) } else { (3.0 - 2.0 * lo, -2.0) };
                let exact = c0 * len.powf(nu) / nu + c1 * len.powf(nu + 1.0) / (nu + 1.0);
                assert!((r - exact).abs() < 1e-12, "nu={nu} upper={upper_sing}: {r} vs {exact}");
            }
        }
    }

    #[test]
    fn exponential_matches_reference_values() {
        // ∫_0^1 s^{-1/2} e^s ds and ∫_0^1 (1-s)^{-1/2} e^s ds.
        let lower_form = 2.925_303_491_814_363_2;
        let upper_form = 4.060_156_938_557_410_0;
        let r = weakly_singular_integral(|s| Ok(s.exp()), 0.0, 1.0, 0.5, false, &cfg()).unwrap();
        assert!((r.value - lower_form).abs() <= r.err_est.max(1e-12), "{r:?}");
        assert!((r.value - lower_form).abs() < 1e-6);
        let r = weakly_singular_integral(|s| Ok(s.exp()), 0.0, 1.0, 0.5, true, &cfg()).unwrap();
        assert!((r.value - upper_form).abs() <= r.err_est.max(1e-12), "{r:?}");
        assert!((r.value - upper_form).abs() < 1e-6);
    }

    #[test]
    fn degenerate_and_invalid_input() {
        let r = weakly_singular_integral(|_| Ok(1.0), 1.0, 1.0 + 1e-15, 0.5, true, &cfg()).unwrap();
        assert_eq!(r.value, 0.0);
        assert_eq!(r.err_est, 0.0);
        let e = weakly_singular_integral(
            |s| Ok(if s > 0.49 && s < 0.51 { f64::INFINITY } else { 1.0 }),
            0.0,
            1.0,
            0.5,
            true,
            &QuadConfig::new(100, 1, 1e-8).unwrap(),
        )
        .unwrap_err();
        assert_eq!(e, FracError::NonFiniteSample { abscissa: 0.5 });
        assert!(QuadConfig::new(8, 2, 1e-8).is_err());
        assert!(QuadConfig::new(9, 0, 1e-8).is_err());
        assert!(QuadConfig::new(9, 1, 1e-16).is_err());
        assert!(QuadConfig::new(9, 1, 0.5).is_err());
    }
}
