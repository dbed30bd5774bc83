use criterion::{black_box, criterion_group, criterion_main, Criterion};
use sdf_core::{
    default_molecules, reference_levels, solve_bound_state, PhysicalConstants, RadialProblem,
    SdfModel,
};

fn models() -> Vec<(String, SdfModel)> {
    let c = PhysicalConstants::default();
    default_molecules()
        .iter()
        .map(|m| (m.name.clone(), SdfModel::from_molecule(m, &c).unwrap()))
        .collect()
}

fn closed_form(c: &mut Criterion) {
    let models = models();
    let table = reference_levels();
    c.bench_function("closed_form_table", |b| {
        b.iter(|| {
            for r in &table {
                let m = &models.iter().find(|(n, _)| *n == r.molecule).unwrap().1;
                black_box(m.energy(r.n, r.l).unwrap());
            }
        })
    });
    c.bench_function("quantization_root_table", |b| {
        b.iter(|| {
            for r in &table {
                let m = &models.iter().find(|(n, _)| *n == r.molecule).unwrap().1;
                black_box(m.energy_by_root(r.n, r.l).unwrap());
            }
        })
    });
    let h2 = models[0].1;
    c.bench_function("wavefunction_h2_5_10", |b| {
        b.iter(|| black_box(h2.radial_wavefunction(5, 10, black_box(0.9)).unwrap()))
    });
}

fn numerov(c: &mut Criterion) {
    let h2 = models()[0].1;
    let mut group = c.benchmark_group("numerov");
    group.sample_size(10);
    for l in [0u32, 10] {
        let p = RadialProblem::for_sdf(&h2, l).unwrap();
        group.bench_function(format!("h2_n5_l{l}"), |b| {
            b.iter(|| black_box(solve_bound_state(&p, 5).unwrap().energy))
        });
    }
    group.finish();
}

criterion_group!(benches, closed_form, numerov);
criterion_main!(benches);
