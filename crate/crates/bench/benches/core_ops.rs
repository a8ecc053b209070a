use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use num_bigint::BigInt;

use hyptri::enumeration::{peeling_mass, tau_planar_polygon, GjRecursion, LambdaParams, LAMBDA_C};
use hyptri::oracle::{enumerate_planar_polygon, enumerate_rooted, GluingSpec};
use hyptri::peeling::{peel_explore, rebuild, Algorithm};
use hyptri::samplers::{sample_ball, sample_boltzmann, stream, HalfPlaneVariant, Model, SamplerContext};

fn enumeration(c: &mut Criterion) {
    c.bench_function("gj_tau_40_4_fresh", |b| {
        b.iter_batched(
            || GjRecursion::seeded(&BigInt::from(4)).unwrap(),
            |mut gj| gj.tau(40, 4).unwrap(),
            BatchSize::SmallInput,
        )
    });
    c.bench_function("krikun_tau_200_5", |b| b.iter(|| tau_planar_polygon(200, 5).unwrap()));
    let pa = LambdaParams::critical();
    c.bench_function("peeling_mass_critical_1e5", |b| b.iter(|| peeling_mass(&pa, pa.beta_hyp, 100_000)));
}

fn oracle(c: &mut Criterion) {
    let mut g = c.benchmark_group("oracle");
    g.sample_size(10);
    g.bench_function("gluing_closed_6", |b| b.iter(|| enumerate_rooted(&GluingSpec::closed(6, None)).unwrap()));
    g.bench_function("planar_4gon_3_internal", |b| b.iter(|| enumerate_planar_polygon(4, 3).unwrap()));
    g.finish();
}

fn samplers(c: &mut Criterion) {
    let half = LambdaParams::from_lambda(LAMBDA_C / 2.0).unwrap();
    let models = [
        ("halfplane_critical_r2", LambdaParams::critical(), Model::HalfPlane(HalfPlaneVariant::Hyperbolic)),
        ("halfplane_subcritical_r2", half, Model::HalfPlane(HalfPlaneVariant::Subcritical)),
        ("plane_critical_r2", LambdaParams::critical(), Model::Plane),
    ];
    for (name, pa, model) in models {
        let ctx = SamplerContext::new(pa, model).unwrap();
        let mut i = 0u64;
        c.bench_function(name, |b| {
            b.iter(|| {
                i += 1;
                sample_ball(&ctx, stream(1, i), 2)
            })
        });
    }
    let ctx = SamplerContext::new(half, Model::Boltzmann(3)).unwrap();
    let mut i = 0u64;
    c.bench_function("boltzmann_3gon", |b| {
        b.iter(|| {
            i += 1;
            sample_boltzmann(&ctx, stream(2, i)).unwrap()
        })
    });
}

fn peeling(c: &mut Criterion) {
    let maps = enumerate_planar_polygon(3, 4).unwrap().maps;
    let t = maps[maps.len() / 2].clone();
    for (name, alg) in [("peel_metric", Algorithm::Metric), ("peel_left", Algorithm::Left)] {
        c.bench_function(name, |b| b.iter(|| peel_explore(&t, &alg).unwrap()));
    }
    let d = peel_explore(&t, &Algorithm::Left).unwrap().diagram;
    c.bench_function("rebuild_left", |b| b.iter(|| rebuild(&d, &Algorithm::Left).unwrap()));
}

criterion_group!(benches, enumeration, oracle, samplers, peeling);
criterion_main!(benches);
