use criterion::{criterion_group, criterion_main, Criterion};
use homfrac::cell::{f_hom_cell, UnitCell};
use homfrac::elastic::{ElasticSystem, FloatingRule};
use homfrac::medium::CellPattern;
use homfrac::mincut::{CutOrientation, CutProblem, Window};
use homfrac_bench::{fixture_datum, fixture_discount, fixture_grid, fixture_medium};
use std::hint::black_box;

fn bench_elastic(c: &mut Criterion) {
    let mut group = c.benchmark_group("elastic");
    for nodes in [65usize, 129, 257] {
        let grid = fixture_grid(nodes);
        let medium = fixture_medium(&grid);
        let crack = homfrac_bench::empty_crack(&grid);
        let datum = fixture_datum(&grid, 1.0);
        group.bench_function(format!("solve_{nodes}x{nodes}"), |b| {
            b.iter(|| {
                let sys = ElasticSystem::build(&grid, &medium, &crack).unwrap();
                let sol = sys.solve(&datum, &FloatingRule::Zero).unwrap();
                black_box(sol.bulk_energy)
            })
        });
        // factorization reuse: datum-only resolve
        let sys = ElasticSystem::build(&grid, &medium, &crack).unwrap();
        group.bench_function(format!("resolve_{nodes}x{nodes}"), |b| {
            b.iter(|| {
                let sol = sys.solve(&datum, &FloatingRule::Zero).unwrap();
                black_box(sol.bulk_energy)
            })
        });
    }
    group.finish();
}

fn bench_mincut(c: &mut Criterion) {
    let mut group = c.benchmark_group("mincut");
    group.sample_size(20);
    for nodes in [129usize, 257] {
        let grid = fixture_grid(nodes);
        let medium = fixture_medium(&grid);
        let discount = fixture_discount(&grid);
        let mut mask = vec![false; grid.edge_count()];
        for &e in &discount {
            mask[e] = true;
        }
        group.bench_function(format!("discounted_cut_{nodes}x{nodes}"), |b| {
            b.iter(|| {
                let p = CutProblem::build(
                    &grid,
                    Window::full(&grid),
                    CutOrientation::NormalY,
                    &|e| medium.kappa_edge(e),
                    &|e| mask[e],
                );
                black_box(p.min_cut().cut_cost)
            })
        });
    }
    group.finish();
}

fn bench_cell(c: &mut Criterion) {
    let mut group = c.benchmark_group("cell");
    group.sample_size(10);
    let cell = UnitCell {
        dim: 2,
        bulk: CellPattern::Checkerboard { values: [1.0, 4.0] },
        toughness: CellPattern::Constant(1.0),
        toughness_anisotropy: [1.0, 1.0],
        p: 2.0,
    };
    for res in [64usize, 128] {
        group.bench_function(format!("f_hom_checkerboard_{res}"), |b| {
            b.iter(|| black_box(f_hom_cell(&cell, [1.0, 0.0], res).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, bench_elastic, bench_mincut, bench_cell);
criterion_main!(benches);
