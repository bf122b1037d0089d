//! Cost of one 2π return-map integration: plain point transport versus
//! jet transport carrying the (∂β, ∂γ, ∂e) variationals.

use criterion::{criterion_group, criterion_main, Criterion};

use spinorbit_core::arith::Jet;
use spinorbit_core::flow::map_g;
use spinorbit_core::TaylorPolicy;

fn bench_map_g(c: &mut Criterion) {
    let policy = TaylorPolicy::from_tol(1e-13).unwrap();
    let (eps, eta, ecc) = (1e-3, 1e-3, 0.25);
    let (beta0, gamma0) = (0.3, 1.05);

    let mut group = c.benchmark_group("map_g");
    group.sample_size(20);
    group.bench_function("scalar", |b| {
        b.iter(|| map_g(&beta0, &gamma0, &policy, &eps, &eta, &ecc).unwrap())
    });
    group.bench_function("jet3", |b| {
        let jb = Jet::<f64, 3>::variable(beta0, 0);
        let jg = Jet::<f64, 3>::variable(gamma0, 1);
        let je = Jet::<f64, 3>::variable(ecc, 2);
        b.iter(|| map_g(&jb, &jg, &policy, &eps, &eta, &je).unwrap())
    });
    group.finish();
}

criterion_group!(benches, bench_map_g);
criterion_main!(benches);
