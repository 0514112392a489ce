use criterion::{black_box, criterion_group, criterion_main, Criterion};

use bautin_bench::{family_arc, numeric_arc};
use bautin_core::blowup::{fiber_dimension_sample, order_of_arc, ArcSampler};
use bautin_core::kapteyn::{
    bautin_ideal, closure_suite, localized_generators, FamilyId, FamilySampler, Stratum,
};
use bautin_core::numeric::{arc_displacement, displacement, Precision};

fn exact(c: &mut Criterion) {
    let ideal = bautin_ideal();
    let origin = family_arc(FamilyId::Origin, 1);
    c.bench_function("order_of_arc/origin", |b| {
        b.iter(|| order_of_arc(&ideal, black_box(&origin)).unwrap())
    });
    let local = localized_generators(Stratum::I1I3).unwrap();
    let sampler = FamilySampler::new(FamilyId::I13A);
    c.bench_function("fiber_dimension_sample/I13_A/64", |b| {
        b.iter(|| fiber_dimension_sample(&local, &[&sampler as &dyn ArcSampler], 64, 7).unwrap())
    });
    c.bench_function("closure_suite/1", |b| {
        b.iter(|| closure_suite(1, 1, 12).unwrap())
    });
}

fn numeric(c: &mut Criterion) {
    let focus = [0.01, 0.0, 0.0, 0.0, 0.0, 0.0];
    c.bench_function("displacement/double", |b| {
        b.iter(|| displacement(black_box(&focus), 0.05).unwrap())
    });
    let arc = numeric_arc(FamilyId::Origin, 1);
    let mut g = c.benchmark_group("quad");
    g.sample_size(10);
    g.bench_function("arc_displacement/origin", |b| {
        b.iter(|| arc_displacement(&arc, 1e-3, 0.1, Precision::Quad).unwrap())
    });
    g.finish();
}

criterion_group!(benches, exact, numeric);
criterion_main!(benches);
