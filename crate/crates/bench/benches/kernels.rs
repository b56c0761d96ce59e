use criterion::{criterion_group, criterion_main, Criterion};
use skyshare_core::analysis_exact::{Evaluation, LaplacianModel, PsiKernel};
use skyshare_core::specfun::{gauss_2f1, FunctionAccuracy};
use skyshare_core::{Scenario, ScenarioConfig};
use std::hint::black_box;

fn psi(c: &mut Criterion) {
    let kernel = PsiKernel::new(5, 2.2, 4).unwrap();
    let mut out = [0.0; 5];
    c.bench_function("psi_scaled_order4", |b| {
        b.iter(|| {
            kernel.eval_scaled(black_box(3.7e4), black_box(2.5e5), &mut out);
            out[4]
        })
    });
}

fn hypergeometric(c: &mut Criterion) {
    let acc = FunctionAccuracy::default();
    c.bench_function("gauss_2f1_negative_z", |b| {
        b.iter(|| gauss_2f1(black_box(6.0), black_box(0.09), black_box(1.09), black_box(-7.5), &acc).unwrap())
    });
}

fn laplacian(c: &mut Criterion) {
    let scn = Scenario::new(&ScenarioConfig::default()).unwrap();
    let model = LaplacianModel::u2u(&scn, 4, Evaluation::Tabulated).unwrap();
    // warm the lazily built tables
    model.scaled_derivatives(1e10, 4).unwrap();
    c.bench_function("laplacian_u2u_tabulated", |b| {
        b.iter(|| model.scaled_derivatives(black_box(1.3e10), 4).unwrap())
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(20);
    targets = psi, hypergeometric, laplacian
}
criterion_main!(benches);
