use criterion::{black_box, criterion_group, criterion_main, Criterion};
use fracpsi::operand::{Operand, Side};
use fracpsi::operators::{frac_integral, hilfer_derivative, OrderSpec};
use fracpsi::psi::{make_preset, PsiKind};
use fracpsi::quad::{product_trapezoid, QuadConfig};
use fracpsi::specialfn::{mittag_leffler, MLParams};

fn integrals(c: &mut Criterion) {
    let cfg = QuadConfig::default();
    let psi = make_preset(PsiKind::Log, 1.0, std::f64::consts::E).unwrap();
    let f = Operand::parse("sin(x) + x^2").unwrap();
    c.bench_function("frac_integral log kernel", |b| {
        b.iter(|| frac_integral(&psi, black_box(0.37), Side::Left, &f, black_box(2.1), &cfg).unwrap())
    });
    let order = OrderSpec::new(0.6, 0.4).unwrap();
    c.bench_function("hilfer_derivative log kernel", |b| {
        b.iter(|| hilfer_derivative(&psi, &order, Side::Left, &f, black_box(2.1), &cfg).unwrap())
    });
}

fn special(c: &mut Criterion) {
    let p = MLParams::two(0.7, 1.3).unwrap();
    c.bench_function("mittag_leffler small z", |b| b.iter(|| mittag_leffler(p, black_box(-1.5)).unwrap()));
    c.bench_function("mittag_leffler large negative z", |b| b.iter(|| mittag_leffler(p, black_box(-40.0)).unwrap()));
}

fn trapezoid(c: &mut Criterion) {
    c.bench_function("product_trapezoid 1024 panels", |b| {
        b.iter(|| product_trapezoid(|s| Ok(s.exp()), 0.0, 1.0, black_box(0.5), true, 1024).unwrap())
    });
}

criterion_group!(benches, integrals, special, trapezoid);
criterion_main!(benches);
