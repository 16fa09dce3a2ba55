use crate::specialfn::ln_gamma;
use nalgebra::{DMatrix, SymmetricEigen};
use once_cell::sync::Lazy;
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

/// Gauss rule for ∫_{-1}^{1} (1-u)^a (1+u)^b f(u) du.
#[derive(Debug, Clone)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

type Key = (u64, u64, usize);

static CACHE: Lazy<Mutex<HashMap<Key, Arc<GaussRule>>>> = Lazy::new(|| Mutex::new(HashMap::new()));

/// Gauss-Jacobi rule with `m` nodes (Golub-Welsch), cached by parameters.
///
/// Requires a, b > -1.
pub fn gauss_jacobi(m: usize, a: f64, b: f64) -> Arc<GaussRule> {
    assert!(m >= 1 && a > -1.0 && b > -1.0, "invalid Gauss-Jacobi parameters");
    let key = (a.to_bits(), b.to_bits(), m);
    if let Some(rule) = CACHE.lock().unwrap().get(&key) {
        return rule.clone();
    }
    let rule = Arc::new(build(m, a, b));
    CACHE.lock().unwrap().insert(key, rule.clone());
    rule
}

fn build(m: usize, a: f64, b: f64) -> GaussRule {
    let ab = a + b;
    let mut jac = DMatrix::<f64>::zeros(m, m);
    for k in 0..m {
        let kf = k as f64;
        let diag = if k == 0 {
            (b - a) / (ab + 2.0)
        } else {
            (b * b - a * a) / ((2.0 * kf + ab) * (2.0 * kf + ab + 2.0))
        };
        jac[(k, k)] = diag;
        if k + 1 < m {
            let j = kf + 1.0;
            let num = 4.0 * j * (j + a) * (j + b) * (j + ab);
            let t = 2.0 * j + ab;
            let den = t * t * (t + 1.0) * (t - 1.0);
            let off = (num / den).sqrt();
            jac[(k, k + 1)] = off;
            jac[(k + 1, k)] = off;
        }
    }
    let ln_mu0 = (ab + 1.0) * std::f64::consts::LN_2 + ln_gamma(a + 1.0).unwrap()
        + ln_gamma(b + 1.0).unwrap()
        - ln_gamma(ab + 2.0).unwrap();
    let mu0 = ln_mu0.exp();
    let eig = SymmetricEigen::new(jac);
    let mut pairs: Vec<(f64, f64)> = (0..m)
        .map(|i| {
            let v0 = eig.eigenvectors[(0, i)];
            (eig.eigenvalues[i], mu0 * v0 * v0)
        })
        .collect();
    pairs.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
    GaussRule {
        nodes: pairs.iter().map(|p| p.0).collect(),
        weights: pairs.iter().map(|p| p.1).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specialfn::gamma;

    #[test]
    fn legendre_rule_integrates_polynomials() {
        let r = gauss_jacobi(10, 0.0, 0.0);
        for p in 0..20 {
            let q: f64 = r.nodes.iter().zip(&r.weights).map(|(u, w)| w * u.powi(p)).sum();
            let exact = if p % 2 == 0 { 2.0 / (p as f64 + 1.0) } else { 0.0 };
            assert!((q - exact).abs() < 1e-14, "degree {p}: {q} vs {exact}");
        }
    }

    #[test]
    fn jacobi_moments_are_exact() {
        // ∫(1-u)^a (1+u)^k du = 2^{a+k+1} Γ(a+1) Γ(k+1) / Γ(a+k+2)
        for a in [-0.9999, -0.75, -0.5, -0.1, 0.5, 1.3] {
            let r = gauss_jacobi(12, a, 0.0);
            for k in 0..24 {
                let q: f64 = r
                    .nodes
                    .iter()
                    .zip(&r.weights)
                    .map(|(u, w)| w * (1.0 + u).powi(k))
                    .sum();
                let kf = k as f64;
                let exact = 2f64.powf(a + kf + 1.0) * gamma(a + 1.0).unwrap() * gamma(kf + 1.0).unwrap()
                    / gamma(a + kf + 2.0).unwrap();
                assert!(((q - exact) / exact).abs() < 1e-12, "a={a} k={k}: {q} vs {exact}");
            }
        }
    }

    #[test]
    fn rules_are_cached() {
        let r1 = gauss_jacobi(7, -0.3, 0.0);
        let r2 = gauss_jacobi(7, -0.3, 0.0);
        assert!(Arc::ptr_eq(&r1, &r2));
    }
}
