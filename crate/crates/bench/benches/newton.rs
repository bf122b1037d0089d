//! Wall time of a single Newton step across mesh sizes.  The per-point
//! integrations dominate, so the scaling should come out linear in N —
//! the FFT stages underneath are N log N but invisibly cheap next to them.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use spinorbit_core::flow::Model;
use spinorbit_core::kam::{newton_solve, newton_step};
use spinorbit_core::{LiftedCurve, ModelParams, Periodic, Scalar, TaylorPolicy};

fn converged_base() -> (spinorbit_core::TorusSolution<f64>, ModelParams<f64>, TaylorPolicy<f64>) {
    let omega = (5.0f64.sqrt() + 1.0) / 2.0;
    let params = ModelParams::new(1e-3, 1e-3, 0.0, omega).unwrap();
    let policy = TaylorPolicy::from_tol(1e-13).unwrap();
    let yhat = omega / f64::two_pi();
    let k0 = LiftedCurve::graph(Periodic::zero(64).unwrap(), Periodic::constant(64, yhat).unwrap())
        .unwrap();
    let ecc0 = spinorbit_core::seed::drift_from_frequency(&omega).unwrap();
    let sol = newton_solve(&k0, &ecc0, Model::Full, &params, &policy, &1e-11, 12).unwrap();
    (sol, params, policy)
}

fn bench_newton_step(c: &mut Criterion) {
    let (sol, params, policy) = converged_base();
    let mut group = c.benchmark_group("newton_step");
    group.sample_size(10);
    for n in [64usize, 128, 256, 512] {
        let k = sol.k.resample(n).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| newton_step(&k, &sol.ecc, Model::Full, &params, &policy).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_newton_step);
criterion_main!(benches);
