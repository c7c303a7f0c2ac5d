//! Compare sequential and multi-worker paths on the scan-shaped workloads:
//! p-regular flagging of a whole group, coset obstruction scanning, and
//! spanning-rank computation. Thread counts above 1 fall back to the
//! sequential code when the crate is built without the `parallel` feature,
//! so the same bench binary measures both configurations.

use adequacy_core::adequacy::{algebra_span_rank, ElementFilter};
use adequacy_core::constructions::{dihedral_subgroup_psl2, psl2, scan_coset_witness};
use adequacy_core::field::Field;
use adequacy_core::groups::{FiniteGroup, GroupElement};
use adequacy_core::modrep::Representation;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;
use std::sync::Arc;

const WORKERS: [usize; 2] = [1, 4];

fn l2_61() -> Arc<FiniteGroup> {
    // |L2(61)| = 113460: large enough that flagging and scanning dominate,
    // small enough to keep bench iterations reasonable.
    psl2(61, 200_000).expect("L2(61) enumerates")
}

fn bench_p_regular_flags(c: &mut Criterion) {
    let group = l2_61();
    let mut bench = c.benchmark_group("p_regular_flags/L2(61)");
    bench.sample_size(10);
    for workers in WORKERS {
        bench.bench_with_input(BenchmarkId::from_parameter(workers), &workers, |b, &w| {
            b.iter(|| black_box(group.p_regular_flags(5, w)));
        });
    }
    bench.finish();
}

fn bench_coset_scan(c: &mut Criterion) {
    let group = l2_61();
    let subgroup = dihedral_subgroup_psl2(&group, 61, 5).expect("dihedral subgroup");
    let mut bench = c.benchmark_group("coset_scan/L2(61)_over_D5");
    bench.sample_size(10);
    for workers in WORKERS {
        bench.bench_with_input(BenchmarkId::from_parameter(workers), &workers, |b, &w| {
            b.iter(|| black_box(scan_coset_witness(&group, &subgroup, 5, w).unwrap()));
        });
    }
    bench.finish();
}

fn bench_span_rank(c: &mut Criterion) {
    let f5 = Field::new(5, 1).unwrap();
    let swap = GroupElement::permutation(vec![1, 0, 2, 3, 4, 5, 6]).unwrap();
    let cycle = GroupElement::permutation(vec![1, 2, 3, 4, 5, 6, 0]).unwrap();
    let group = Arc::new(FiniteGroup::enumerate(vec![swap, cycle], 10_000).unwrap());
    let rep = Representation::from_permutation_action(&group, &f5)
        .expect("7-point permutation module over GF(5)");
    let mut bench = c.benchmark_group("span_rank/S7_perm_module");
    bench.sample_size(10);
    for workers in WORKERS {
        bench.bench_with_input(BenchmarkId::from_parameter(workers), &workers, |b, &w| {
            b.iter(|| black_box(algebra_span_rank(&rep, ElementFilter::PRegular(5), w).unwrap()));
        });
    }
    bench.finish();
}

criterion_group!(benches, bench_p_regular_flags, bench_coset_scan, bench_span_rank);
criterion_main!(benches);
