use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use dwmec::{build_fvb, compute_mec, CenterFunction};
use dwmec_bench::{convex_sites, weight_points};

const SIZES: [usize; 4] = [4, 16, 64, 128];

fn construction(c: &mut Criterion) {
    let mut g = c.benchmark_group("construction");
    for m in SIZES {
        let sites = convex_sites(m, 7);
        g.bench_with_input(BenchmarkId::new("mec", m), &sites, |b, s| b.iter(|| compute_mec(black_box(s))));
        g.bench_with_input(BenchmarkId::new("fvb", m), &sites, |b, s| b.iter(|| build_fvb(black_box(s)).unwrap()));
        g.bench_with_input(BenchmarkId::new("division_tree", m), &sites, |b, s| {
            b.iter(|| CenterFunction::new(black_box(s)).unwrap())
        });
    }
    g.finish();
}

fn queries(c: &mut Criterion) {
    let points = weight_points(256, 11);
    let mut g = c.benchmark_group("query");
    for m in SIZES {
        let cf = CenterFunction::new(&convex_sites(m, 7)).unwrap();
        // Weight points on a hull vertex are rejected; skip any such draw.
        let ps: Vec<_> = points.iter().copied().filter(|&p| cf.solve(p).is_ok()).collect();
        g.bench_with_input(BenchmarkId::new("traversal", m), &ps, |b, ps| {
            b.iter(|| ps.iter().map(|&p| cf.solve_by_traversal(black_box(p)).unwrap().value).sum::<f64>())
        });
        g.bench_with_input(BenchmarkId::new("descent", m), &ps, |b, ps| {
            b.iter(|| ps.iter().map(|&p| cf.solve_by_descent(black_box(p)).unwrap().value).sum::<f64>())
        });
    }
    g.finish();
}

criterion_group!(benches, construction, queries);
criterion_main!(benches);
