use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, Criterion};
use kanquillen::homotopy::homology;
use kanquillen::lifting::{has_rlp, kan_check, GeneratingSet};
use kanquillen::lifting::problem::to_terminal;
use kanquillen::sset::standard::{boundary, horn};
use kanquillen::subdivision::{sd_iter, ExComplex};

fn pools() -> Vec<(&'static str, rayon::ThreadPool)> {
    vec![
        ("sequential", rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap()),
        ("parallel", rayon::ThreadPoolBuilder::new().build().unwrap()),
    ]
}

fn kan_check_ex(c: &mut Criterion) {
    let ex = ExComplex::new(&Arc::new(boundary(2)), 2).unwrap();
    let k = ex.object().clone();
    let mut group = c.benchmark_group("kan_check Ex(∂Δ^2)");
    for (name, pool) in pools() {
        group.bench_function(name, |b| b.iter(|| pool.install(|| black_box(kan_check(&k, 2).unwrap()))));
    }
    group.finish();
}

fn rlp_scan(c: &mut Criterion) {
    let h = Arc::new(horn(2, 1).unwrap());
    let f = to_terminal(ExComplex::new(&h, 2).unwrap().object());
    let g = GeneratingSet::j_kq(2);
    let mut group = c.benchmark_group("rlp Ex(Λ^2_1) -> Δ^0 against J≤2");
    for (name, pool) in pools() {
        group.bench_function(name, |b| b.iter(|| pool.install(|| black_box(has_rlp(&f, &g).unwrap()))));
    }
    group.finish();
}

fn homology_sd(c: &mut Criterion) {
    let (k, _) = sd_iter(&Arc::new(boundary(3)), 2).unwrap();
    let mut group = c.benchmark_group("homology sd^2 ∂Δ^3");
    for (name, pool) in pools() {
        group.bench_function(name, |b| b.iter(|| pool.install(|| black_box(homology(&k).unwrap()))));
    }
    group.finish();
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = kan_check_ex, rlp_scan, homology_sd
}
criterion_main!(benches);
