//! Acceptance criteria 1 to 10, one PASS/FAIL line each.
//!
//! Runs as a plain binary: `cargo test -p dwmec --test acceptance` runs all
//! criteria, `cargo test -p dwmec --test acceptance -- 3 7` runs a subset.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use dwmec::edge::EdgeOptimum;
use dwmec::{
    compute_mec, enumerate_regions, evaluate_objective, max_displacement, oracle_rigid_max, oracle_solve, solve, tre,
    CenterFunction, EdgeFrame, Error, Locus, OracleConfig, Point, RigidMotion, SiteSet, Solution,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

/// `m` hull vertices on a random ellipse plus a few interior points.
fn instance(rng: &mut ChaCha8Rng, m: usize) -> Vec<Point> {
    let (ax, ay) = (rng.gen_range(0.5..1.5), rng.gen_range(0.5..1.5));
    let rot = rng.gen_range(0.0..std::f64::consts::TAU);
    let shift = Point::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
    let mut pts: Vec<Point> = (0..m)
        .map(|k| {
            let t = std::f64::consts::TAU * (k as f64 + rng.gen_range(0.1..0.9)) / m as f64;
            Point::new(ax * t.cos(), ay * t.sin()).rotated(rot) + shift
        })
        .collect();
    if m >= 3 {
        for _ in 0..rng.gen_range(0..4) {
            let t = rng.gen_range(0.0..std::f64::consts::TAU);
            let s = rng.gen_range(0.0..0.5);
            pts.push(Point::new(s * ax * t.cos(), s * ay * t.sin()).rotated(rot) + shift);
        }
    }
    pts
}

/// Weight point uniform in 4× the bounding box, away from every site.
fn weight_point(rng: &mut ChaCha8Rng, pts: &[Point]) -> Point {
    let lo = pts.iter().fold(Point::new(f64::MAX, f64::MAX), |a, p| Point::new(a.x.min(p.x), a.y.min(p.y)));
    let hi = pts.iter().fold(Point::new(f64::MIN, f64::MIN), |a, p| Point::new(a.x.max(p.x), a.y.max(p.y)));
    let (mid, ext) = (lo.midpoint(hi), hi - lo);
    loop {
        let p = mid + Point::new(rng.gen_range(-2.0..2.0) * ext.x, rng.gen_range(-2.0..2.0) * ext.y);
        if pts.iter().all(|s| s.dist(p) > 1e-6) {
            return p;
        }
    }
}

fn same_locus(a: &Solution, b: &Solution) -> bool {
    let eq = |x: &Locus, y: &Locus| match (x, y) {
        (Locus::EdgeInterior { edge: e1, lambda: l1 }, Locus::EdgeInterior { edge: e2, lambda: l2 }) => {
            e1 == e2 && (l1 - l2).abs() <= 1e-9 * (1.0 + l1.abs())
        }
        _ => x == y,
    };
    eq(&a.locus, &b.locus) || a.ties.iter().any(|t| eq(t, &b.locus)) || b.ties.iter().any(|t| eq(t, &a.locus))
}

fn restriction_and_oracle() -> (Outcome, Outcome) {
    let start = Instant::now();
    let cfg = OracleConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let cases: Vec<(Vec<Point>, Point)> = (0..500)
        .map(|_| {
            let m = rng.gen_range(2..=15);
            let pts = instance(&mut rng, m);
            let p = weight_point(&mut rng, &pts);
            (pts, p)
        })
        .collect();
    let mut worst_excess = f64::NEG_INFINITY;
    let (mut worst_dv, mut worst_dx) = (0.0f64, 0.0f64);
    let (mut plane_fail, mut value_fail, mut point_fail) = (0, 0, 0);
    for (pts, p) in &cases {
        let sites = SiteSet::new(pts).expect("valid instance");
        let sol = solve(&sites, *p).expect("solvable instance");
        let orc = oracle_solve(&sites, *p, &cfg).expect("oracle");
        let excess = orc.plane_value - sol.value;
        worst_excess = worst_excess.max(excess / orc.discretization_bound);
        if excess > orc.discretization_bound {
            plane_fail += 1;
        }
        let dv = (sol.value - orc.best_value).abs();
        worst_dv = worst_dv.max(dv);
        if dv > 1e-4 {
            value_fail += 1;
        }
        let dx = match (sol.point, orc.best_point) {
            (Some(a), Some(b)) => a.dist(b),
            (None, None) => 0.0,
            _ => f64::INFINITY,
        };
        worst_dx = worst_dx.max(dx);
        if dx > 1e-2 {
            point_fail += 1;
        }
    }
    let elapsed = start.elapsed();
    let c1 = outcome(
        plane_fail == 0 && elapsed < Duration::from_secs(300),
        format!(
            "{} instances, {plane_fail} plane samples above solve + bound, worst excess {worst_excess:.2e} bounds, {:.1}s",
            cases.len(),
            elapsed.as_secs_f64()
        ),
    );
    let c2 = outcome(
        value_fail == 0 && point_fail == 0,
        format!(
            "{} instances, max |dvalue| {worst_dv:.2e}, max optimizer distance {worst_dx:.2e}, {value_fail} value / {point_fail} point failures",
            cases.len()
        ),
    );
    (c1, c2)
}

/// `f² − 1` for the two-site objective, read off the distances. Writing the
/// numerator `‖x−p‖² − ‖x−x_i‖²` as a dot product keeps flat maxima far
/// along the edge resolvable.
fn edge_value(f: &EdgeFrame, p: Point, lambda: f64) -> f64 {
    let x = f.point_at(lambda);
    let (xi, _) = f.sites();
    (xi - p).dot(x * 2.0 - p - xi) / x.dist2(xi)
}

/// Argmax of the edge objective by a dense scan plus golden-section zoom.
/// `None` offset means the supremum at infinity.
fn scan_edge(f: &EdgeFrame, p: Point, n: usize) -> (Option<f64>, f64, bool) {
    let lambdas: Vec<f64> = match f.length() {
        Some(d) => (0..n).map(|k| d * k as f64 / (n - 1) as f64).collect(),
        None => (0..n).map(|k| k as f64 / n as f64).map(|t| t / (1.0 - t)).collect(),
    };
    let (mut k, mut best) = (0, f64::NEG_INFINITY);
    for (i, &l) in lambdas.iter().enumerate() {
        let v = edge_value(f, p, l);
        if v > best {
            (k, best) = (i, v);
        }
    }
    if f.length().is_none() && 0.0 > best {
        return (None, 0.0, true);
    }
    if k == 0 || k == n - 1 {
        return (Some(lambdas[k]), best, true);
    }
    let (mut a, mut b) = (lambdas[k - 1], lambdas[k + 1]);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..200 {
        let (u, v) = (b - g * (b - a), a + g * (b - a));
        if edge_value(f, p, u) >= edge_value(f, p, v) {
            b = v;
        } else {
            a = u;
        }
    }
    let l = 0.5 * (a + b);
    (Some(l), edge_value(f, p, l).max(best), false)
}

fn edge_tables() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let frames: Vec<(EdgeFrame, Point)> = (0..1000)
        .map(|_| {
            let xi = Point::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let xj = Point::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let n = (xj - xi).perp().normalized();
            let o = xi.midpoint(xj) - n * rng.gen_range(0.0..1.0);
            let len = rng.gen_bool(0.5).then(|| rng.gen_range(0.05..3.0));
            let p = Point::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
            (EdgeFrame::new(o, -n, xi, xj, len), p)
        })
        .collect();
    let results: Vec<(bool, bool, f64)> = frames
        .par_iter()
        .map(|(f, p)| {
            let sol = f.solve(*p);
            let solver_endpoint = !matches!(sol.kind, EdgeOptimum::Interior { .. });
            let (scan_l, _, scan_endpoint) = scan_edge(f, *p, 100_000);
            let dl = match (sol.kind.offset(f.length()), scan_l) {
                (None, None) => 0.0,
                (Some(a), Some(b)) => (a - b).abs(),
                _ => f64::INFINITY,
            };
            (solver_endpoint == scan_endpoint, solver_endpoint, dl)
        })
        .collect();
    let decision_fail = results.iter().filter(|r| !r.0 && r.2 > 1e-3).count();
    let resolution_ties = results.iter().filter(|r| !r.0 && r.2 <= 1e-3).count();
    let lambda_fail = results.iter().filter(|r| r.2 > 1e-3).count();
    let worst = results.iter().map(|r| r.2).fold(0.0, f64::max);
    let interior = results.iter().filter(|r| !r.1).count();
    outcome(
        decision_fail == 0 && lambda_fail == 0,
        format!(
            "{} frames ({interior} interior), max |dlambda| {worst:.2e}, {decision_fail} decision / {lambda_fail} lambda failures, {resolution_ties} endpoint calls within scan resolution",
            frames.len()
        ),
    )
}

fn worked_values() -> Outcome {
    let pts = [Point::new(-1.0, 0.0), Point::new(1.0, 0.0)];
    let sites = SiteSet::new(&pts).unwrap();
    let cases = [
        (Point::new(0.0, 0.5), Some(Point::new(0.0, -2.0)), 5f64.sqrt() / 2.0),
        (Point::new(0.0, -3.0), Some(Point::new(0.0, 1.0 / 3.0)), 10f64.sqrt()),
        (Point::new(2.0, 0.0), Some(Point::new(0.0, 0.0)), 2.0),
        (Point::new(0.5, 0.0), None, 1.0),
    ];
    let cfg = OracleConfig::default();
    let mut failures = Vec::new();
    let mut worst = 0.0f64;
    for (k, (p, x, v)) in cases.iter().enumerate() {
        // The oracle and the closed form must agree before the solver is compared.
        let orc = oracle_solve(&sites, *p, &cfg).unwrap();
        let oracle_ok = (orc.best_value - v).abs() <= 1e-6
            && match (orc.best_point, x) {
                (Some(a), Some(b)) => a.dist(*b) <= 1e-2,
                (None, None) => true,
                _ => false,
            };
        if let Some(x) = x {
            if (evaluate_objective(*x, &pts, *p) - v).abs() > 1e-12 {
                failures.push(format!("closed form {k}"));
            }
        }
        let sol = solve(&sites, *p).unwrap();
        let dv = (sol.value - v).abs();
        let dx = match (sol.point, x) {
            (Some(a), Some(b)) => a.dist(*b),
            (None, None) => 0.0,
            _ => f64::INFINITY,
        };
        worst = worst.max(dv).max(dx);
        if !oracle_ok {
            failures.push(format!("oracle {k}"));
        }
        if dv > 1e-9 || dx > 1e-9 {
            failures.push(format!("solve {k}"));
        }
        if x.is_none() && !(sol.locus == Locus::AtInfinity && sol.supremum_only) {
            failures.push(format!("locus {k}"));
        }
    }
    outcome(failures.is_empty(), format!("4 worked values, max deviation {worst:.2e}, failures {failures:?}"))
}

fn structural_counts() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut failures = Vec::new();
    let mut n = 0;
    for m in 2..=30 {
        for _ in 0..10 {
            let pts = instance(&mut rng, m);
            let sites = SiteSet::new(&pts).unwrap();
            let cf = CenterFunction::new(&sites).unwrap();
            let g = dwmec::build_fvb(&sites).unwrap();
            let regions = cf.enumerate_regions().regions.len();
            let (e, v, m) = (g.logical_edge_count(), g.logical_node_count(), g.m());
            if e > 2 * m - 3 || v > m - 1 || regions > 3 * m - 4 {
                failures.push(format!("m={m}: edges {e}, nodes {v}, regions {regions}"));
            }
            n += 1;
        }
    }
    let tri: Vec<Point> =
        (0..3).map(|k| Point::new(0.0, 1.0).rotated(std::f64::consts::TAU * k as f64 / 3.0)).collect();
    let eq_regions = enumerate_regions(&SiteSet::new(&tri).unwrap()).unwrap().regions.len();
    if eq_regions != 5 {
        failures.push(format!("equilateral triangle: {eq_regions} regions"));
    }
    outcome(
        failures.is_empty(),
        format!("{n} instances for m in [2,30], equilateral triangle {eq_regions} regions, failures {failures:?}"),
    )
}

fn method_agreement() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let cases: Vec<(Vec<Point>, Point)> = (0..10_000)
        .map(|_| {
            let m = rng.gen_range(2..=20);
            let pts = instance(&mut rng, m);
            let p = weight_point(&mut rng, &pts);
            (pts, p)
        })
        .collect();
    let results: Vec<(f64, bool, bool)> = cases
        .par_iter()
        .map(|(pts, p)| {
            let cf = CenterFunction::new(&SiteSet::new(pts).unwrap()).unwrap();
            let t = cf.solve_by_traversal(*p).unwrap();
            let (d, stats) = cf.solve_by_descent_with_stats(*p).unwrap();
            ((t.value - d.value).abs(), same_locus(&t, &d), stats.levels <= stats.depth + 1)
        })
        .collect();
    let worst = results.iter().map(|r| r.0).fold(0.0, f64::max);
    let value_fail = results.iter().filter(|r| r.0 > 1e-9).count();
    let locus_fail = results.iter().filter(|r| !r.1).count();
    let level_fail = results.iter().filter(|r| !r.2).count();
    outcome(
        value_fail + locus_fail + level_fail == 0,
        format!(
            "{} instances, max |dvalue| {worst:.2e}, {value_fail} value / {locus_fail} locus / {level_fail} level failures",
            cases.len()
        ),
    )
}

fn continuity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let step = 1e-4;
    let paths: Vec<(Vec<Point>, f64, f64, f64)> = (0..20)
        .map(|_| {
            let m = rng.gen_range(2..=15);
            let pts = instance(&mut rng, m);
            (
                pts,
                rng.gen_range(1.2..3.0),
                rng.gen_range(0.0..std::f64::consts::TAU),
                rng.gen_range(1.0..std::f64::consts::TAU),
            )
        })
        .collect();
    let results: Vec<(f64, usize)> = paths
        .par_iter()
        .map(|(pts, scale, start, span)| {
            let sites = SiteSet::new(pts).unwrap();
            let cf = CenterFunction::new(&sites).unwrap();
            let mec = compute_mec(&sites);
            // A circular arc outside the enclosing circle never meets the hull.
            let radius = scale * mec.radius;
            let steps = (span * radius / step).ceil() as usize;
            let dt = span / steps as f64;
            let mut prev: Option<Option<Point>> = None;
            let mut worst = 0.0f64;
            for k in 0..=steps {
                let t = start + dt * k as f64;
                let p = mec.center + Point::new(t.cos(), t.sin()) * radius;
                let x = cf.solve(p).unwrap().point;
                if let Some(prev) = prev {
                    let jump = match (prev, x) {
                        (Some(a), Some(b)) => a.dist(b),
                        (None, None) => 0.0,
                        _ => f64::INFINITY,
                    };
                    worst = worst.max(jump);
                }
                prev = Some(x);
            }
            (worst, steps)
        })
        .collect();
    let worst = results.iter().map(|r| r.0).fold(0.0, f64::max);
    let steps: usize = results.iter().map(|r| r.1).sum();
    outcome(
        worst <= 1e3 * step,
        format!("20 paths, {steps} steps of {step:e}, largest optimizer jump {worst:.2e} (limit {:.0e})", 1e3 * step),
    )
}

fn rigid_equivalence() -> Outcome {
    let start = Instant::now();
    let cfg = OracleConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst_rel = 0.0f64;
    let mut worst_above = f64::NEG_INFINITY;
    let mut worst_binding = 0.0f64;
    let mut failures = Vec::new();
    for case in 0..50 {
        let m = rng.gen_range(2..=8);
        let pts = instance(&mut rng, m);
        let p = weight_point(&mut rng, &pts);
        let sites = SiteSet::new(&pts).unwrap();
        let r = compute_mec(&sites).radius;
        let c = if case % 10 == 0 { 2.0 * r } else { rng.gen_range(0.05..1.0) * 2.0 * r };
        let bound = max_displacement(&sites, p, c).unwrap();
        let orc = oracle_rigid_max(&sites, p, c, &cfg);
        let rel = (orc.value - bound.value).abs() / bound.value;
        let above = orc.value - bound.value;
        worst_rel = worst_rel.max(rel);
        worst_above = worst_above.max(above);
        let w = &bound.witness;
        let site_max = pts.iter().map(|&x| tre(x, w).norm()).fold(0.0, f64::max);
        let binding = (site_max - c).abs().max((tre(p, w).norm() - bound.value).abs());
        worst_binding = worst_binding.max(binding);
        if rel > 1e-3 || above > 1e-6 || site_max > c + 1e-6 || binding > 1e-6 {
            failures.push(case);
        }
    }
    let elapsed = start.elapsed();
    outcome(
        failures.is_empty() && elapsed < Duration::from_secs(600),
        format!(
            "50 instances, max relative gap {worst_rel:.2e}, max oracle excess {worst_above:.2e}, max binding error {worst_binding:.2e}, failing cases {failures:?}, {:.1}s",
            elapsed.as_secs_f64()
        ),
    )
}

fn contour_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst = 0.0f64;
    let mut zero_exact = true;
    for _ in 0..100 {
        let theta = loop {
            let t: f64 = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
            if t.abs() > 1e-6 {
                break t;
            }
        };
        let s = Point::new(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
        let q = Point::new(rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0));
        let motion = RigidMotion::new(theta, s);
        let c = motion.contour().unwrap().center;
        let expect = 2.0 * q.dist(c) * (theta.abs() / 2.0).sin();
        worst = worst.max((tre(q, &motion).norm() - expect).abs());

        let still = RigidMotion::new(0.0, s);
        zero_exact &= tre(q, &still).norm() == s.norm();
        zero_exact &= matches!(still.contour(), Err(Error::ZeroRotation));
    }
    outcome(
        worst <= 1e-9 && zero_exact,
        format!("100 motions, max contour deviation {worst:.2e}, zero rotation constant: {zero_exact}"),
    )
}

fn degeneration() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let xi = Point::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let xj = Point::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let n = (xj - xi).perp().normalized();
        let o = xi.midpoint(xj) - n * rng.gen_range(0.05..1.0);
        let long = EdgeFrame::new(o, -n, xi, xj, Some(1e6));
        let open = EdgeFrame::new(o, -n, xi, xj, None);
        let r = open.r();
        // b₂ = 0 tends to the circle b = 0.
        let (b2, b) = (long.b2_circle().unwrap(), open.b_circle());
        worst = worst.max(b2.center.dist(b.center) / r).max((b2.radius - b.radius).abs() / r);
        // b₁ = 0 flattens onto the site line a = 0: its curvature vanishes and
        // it stays within the tolerance of the line near the sites.
        let b1 = long.b1_circle().unwrap();
        worst = worst.max(r / b1.radius);
        let (dir, mid) = ((xj - xi).normalized(), xi.midpoint(xj));
        for t in [-2.0, -1.0, 0.0, 1.0, 2.0] {
            let on_line = mid + dir * (t * r);
            let gap = (on_line.dist(b1.center) - b1.radius).abs();
            worst = worst.max(gap / r);
        }
    }
    outcome(worst <= 1e-3, format!("100 frames with length 1e6, max scaled deviation {worst:.2e}"))
}

fn main() -> ExitCode {
    let selected: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let want = |k: usize| selected.is_empty() || selected.contains(&k);
    let names = [
        "restriction to the boundary graph",
        "closed form vs oracle",
        "edge-level classification",
        "worked values",
        "structural counts",
        "traversal vs descent",
        "continuity outside the hull",
        "rigid-motion equivalence",
        "contour identity",
        "degeneration of long edges",
    ];
    let mut ok = true;
    let mut report = |k: usize, o: Outcome| {
        ok &= o.pass;
        println!("criterion {k:>2} {:<36} {}  {}", names[k - 1], if o.pass { "PASS" } else { "FAIL" }, o.detail);
    };
    if want(1) || want(2) {
        let (c1, c2) = restriction_and_oracle();
        if want(1) {
            report(1, c1);
        }
        if want(2) {
            report(2, c2);
        }
    }
    let rest: [(usize, fn() -> Outcome); 8] = [
        (3, edge_tables),
        (4, worked_values),
        (5, structural_counts),
        (6, method_agreement),
        (7, continuity),
        (8, rigid_equivalence),
        (9, contour_identity),
        (10, degeneration),
    ];
    for (k, f) in rest {
        if want(k) {
            report(k, f());
        }
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
