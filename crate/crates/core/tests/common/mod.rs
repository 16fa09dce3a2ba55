#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Random expression text in `x` that is finite and smooth on (0, 3]:
/// logarithms and roots only see arguments bounded away from zero.
pub fn random_expr(rng: &mut ChaCha8Rng, depth: u32) -> String {
    if depth == 0 || rng.gen_bool(0.25) {
        return match rng.gen_range(0..3) {
            0 => "x".to_string(),
            1 => format!("{:.3}", rng.gen_range(-3.0..3.0)),
            _ => format!("{:.2}*x", rng.gen_range(-2.0..2.0)),
        };
    }
    let a = random_expr(rng, depth - 1);
    match rng.gen_range(0..10) {
        0 => format!("({a} + {})", random_expr(rng, depth - 1)),
        1 => format!("({a} - {})", random_expr(rng, depth - 1)),
        2 => format!("({a} * {})", random_expr(rng, depth - 1)),
        3 => format!("({a} / (1 + ({})^2))", random_expr(rng, depth - 1)),
        4 => format!("({a})^{}", rng.gen_range(2..4)),
        5 => format!("sin({a})"),
        6 => format!("cos({a})"),
        7 => format!("exp(sin({a}))"),
        8 => format!("ln(1 + ({a})^2)"),
        _ => format!("sqrt(2 + cos({a}))"),
    }
}

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on P_m.
pub fn gauss_legendre(m: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; m];
    let mut w = vec![0.0; m];
    for i in 0..(m + 1) / 2 {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p1, mut p2) = (1.0, 0.0);
            for j in 1..=m {
                let p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j as f64 - 1.0) * z * p2 - (j as f64 - 1.0) * p3) / j as f64;
            }
            dp = m as f64 * (z * p1 - p2) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-15 {
                break;
            }
        }
        x[i] = -z;
        x[m - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[m - 1 - i] = w[i];
    }
    (x, w)
}

/// ∫_a^x (x − t)^{ν−1} h(t, x − t) dt with t = x − (x − a) u^{1/ν}, which
/// turns the kernel into a constant. `h` may carry any smooth factor and
/// receives the distance x − t exactly.
pub fn direct_singular_integral(nu: f64, a: f64, x: f64, h: impl Fn(f64, f64) -> f64) -> f64 {
    let (gx, gw) = gauss_legendre(20);
    let panels = 400;
    let len = x - a;
    let mut sum = 0.0;
    for p in 0..panels {
        let (lo, hi) = (p as f64 / panels as f64, (p + 1) as f64 / panels as f64);
        for (z, w) in gx.iter().zip(&gw) {
            let u = lo + (hi - lo) * 0.5 * (z + 1.0);
            let d = len * u.powf(1.0 / nu);
            sum += 0.5 * (hi - lo) * w * h(x - d, d);
        }
    }
    len.powf(nu) / nu * sum
}

/// Five-point central difference.
pub fn fd5(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (f(x - 2.0 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2.0 * h)) / (12.0 * h)
}

pub fn rel_err(v: f64, e: f64) -> f64 {
    (v - e).abs() / e.abs().max(1e-300)
}
