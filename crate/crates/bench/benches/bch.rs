use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qgt_core::bch::{self, BchSpec, RootMethod};
use qgt_core::density;

fn syndrome_decode(c: &mut Criterion) {
    let mut group = c.benchmark_group("syndrome_decode");
    for t in 1..=4 {
        let spec = BchSpec::new(12, t, 4095).unwrap();
        let positions: Vec<usize> = (0..t).map(|i| 17 + 611 * i).collect();
        let syn = bch::syndrome_of_positions(&spec, &positions);
        for method in [RootMethod::Chien, RootMethod::Direct] {
            group.bench_with_input(BenchmarkId::new(format!("{method:?}"), t), &syn, |b, syn| {
                b.iter(|| bch::decode_syndrome(&spec, syn, t, method).unwrap())
            });
        }
    }
    group.finish();
}

fn threshold(c: &mut Criterion) {
    c.bench_function("lambda_threshold/t=2,ell=2", |b| {
        b.iter(|| density::lambda_threshold(2, 2))
    });
}

criterion_group!(benches, syndrome_decode, threshold);
criterion_main!(benches);
