use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use inhomog_core::cantor::{hall_condition_check, Dissection, SetKind};
use inhomog_core::spectrum::mplus_oracle;
use inhomog_core::{Execution, NcfExpansion, RealHandle, Surd};

const MODES: [(&str, Execution); 2] = [("parallel", Execution::Parallel), ("sequential", Execution::Sequential)];

fn bench_oracle(c: &mut Criterion) {
    let alpha = NcfExpansion::periodic(&[], &[5, 3]).unwrap();
    let beta = RealHandle::from_surd(Surd::from_ratio(1, 3));
    let mut group = c.benchmark_group("mplus_oracle");
    group.sample_size(10);
    for qmax in [1u64 << 16, 1 << 20] {
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, qmax), &qmax, |b, &qmax| {
                b.iter(|| mplus_oracle(black_box(&beta), &alpha, qmax, exec).unwrap())
            });
        }
    }
    group.finish();
}

fn bench_hall(c: &mut Criterion) {
    let alpha = NcfExpansion::periodic(&[], &[3, 2, 2]).unwrap();
    let mut group = c.benchmark_group("hall_condition_check");
    group.sample_size(10);
    for depth in [6usize, 8] {
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, depth), &depth, |b, &depth| {
                b.iter(|| {
                    let diss = Dissection::new(SetKind::F, &alpha, 6).unwrap();
                    hall_condition_check(&diss, depth, exec).unwrap()
                })
            });
        }
    }
    group.finish();
}

criterion_group!(benches, bench_oracle, bench_hall);
criterion_main!(benches);
