//! Brute-force reference solvers used to validate the closed forms.
//!
//! Nothing here relies on the edge solver or the division tree: the weighted
//! center oracle samples the plane and the boundary graph directly, and the
//! rigid-motion oracle grids over `(θ, s)` and keeps feasible motions.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::fpvd::{build_fvb, compute_mec, FvbGraph};
use crate::geom::{Point, SiteSet};
use crate::rigid::{rigid_constraint_check, tre, RigidMotion};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleConfig {
    /// Samples per boundary edge; unbounded edges use `λ = t/(1−t)`.
    pub edge_samples: usize,
    /// Plane grid points per side, spanning 4× the hull bounding box.
    pub plane_grid: usize,
    /// Zoom rounds around the best edge sample.
    pub edge_refine_rounds: usize,
    pub rigid_theta_steps: usize,
    pub rigid_s_steps: usize,
    pub rigid_rounds: usize,
    /// Factor applied to the refinement grid spacing after each round.
    pub rigid_shrink: f64,
    /// Candidates carried from one refinement round to the next.
    pub rigid_top_k: usize,
    /// Restrict the rigid search to a single rotation angle.
    pub rigid_fixed_theta: Option<f64>,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            edge_samples: 100_000,
            plane_grid: 2000,
            edge_refine_rounds: 40,
            rigid_theta_steps: 181,
            rigid_s_steps: 41,
            rigid_rounds: 60,
            rigid_shrink: 0.7,
            rigid_top_k: 8,
            rigid_fixed_theta: None,
        }
    }
}

impl OracleConfig {
    /// A lighter configuration for quick checks.
    pub fn coarse() -> Self {
        Self { edge_samples: 10_000, plane_grid: 400, ..Self::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleSolution {
    /// Overall best point (caller's frame); `None` when the supremum at infinity wins.
    pub best_point: Option<Point>,
    pub best_value: f64,
    /// Best sample on the boundary graph, including the limit value 1 at infinity.
    pub graph_point: Option<Point>,
    pub graph_value: f64,
    /// Best plane-grid sample.
    pub plane_point: Point,
    pub plane_value: f64,
    /// Plane-grid spacing (caller's units).
    pub grid_spacing: f64,
    /// Lipschitz bound on how far the grid may undershoot the true maximum.
    pub discretization_bound: f64,
    /// Whether the best plane sample beats the best graph sample beyond the bound.
    pub plane_beats_graph: bool,
}

/// Objective using only hull vertices for the farthest distance.
fn objective(x: Point, hull: &[Point], p: Point) -> f64 {
    let far = hull.iter().map(|&s| x.dist2(s)).fold(0.0, f64::max);
    (x.dist2(p) / far).sqrt()
}

pub fn oracle_solve(sites: &SiteSet, p: Point, config: &OracleConfig) -> Result<OracleSolution> {
    let graph = build_fvb(sites)?;
    Ok(oracle_solve_on(&graph, p, config))
}

/// Oracle over a prebuilt boundary graph (whose geometry it samples).
pub fn oracle_solve_on(graph: &FvbGraph, p: Point, config: &OracleConfig) -> OracleSolution {
    let t = graph.sites().transform();
    let q = t.to_normalized(p);
    let hull = graph.hull().points(graph.points());

    let (graph_point, graph_value) = sample_graph(graph, &hull, q, config);

    let (mut lo, mut hi) = (hull[0], hull[0]);
    for h in &hull {
        lo = Point::new(lo.x.min(h.x), lo.y.min(h.y));
        hi = Point::new(hi.x.max(h.x), hi.y.max(h.y));
    }
    let mid = lo.midpoint(hi);
    // 4× the bounding box; a flat box still gets some height.
    let ext = hi - lo;
    let side = ext.x.max(ext.y);
    let half = Point::new(ext.x.max(0.25 * side), ext.y.max(0.25 * side)) * 2.0;
    let n = config.plane_grid.max(2);
    let step = Point::new(2.0 * half.x / (n - 1) as f64, 2.0 * half.y / (n - 1) as f64);
    let (plane_point, plane_value) = (0..n)
        .into_par_iter()
        .map(|a| {
            let mut best = (mid, f64::NEG_INFINITY);
            for b in 0..n {
                let x = mid - half + Point::new(step.x * a as f64, step.y * b as f64);
                let v = objective(x, &hull, q);
                if v > best.1 {
                    best = (x, v);
                }
            }
            best
        })
        .reduce(|| (mid, f64::NEG_INFINITY), |a, b| if b.1 > a.1 { b } else { a });

    let r = graph.mec_normalized().radius;
    let best_value = graph_value.max(plane_value);
    let discretization_bound = (1.0 + best_value) / r * step.norm();
    let (best_point, best_value) =
        if plane_value > graph_value { (Some(plane_point), plane_value) } else { (graph_point, graph_value) };
    OracleSolution {
        best_point: best_point.map(|x| t.to_original(x)),
        best_value,
        graph_point: graph_point.map(|x| t.to_original(x)),
        graph_value,
        plane_point: t.to_original(plane_point),
        plane_value,
        grid_spacing: t.length_to_original(step.norm() / 2f64.sqrt()),
        discretization_bound,
        plane_beats_graph: plane_value > graph_value + discretization_bound,
    }
}

/// Dense samples along every edge, then a shrinking local grid around the
/// best sample. Returns normalized coordinates; `None` is infinity.
fn sample_graph(graph: &FvbGraph, hull: &[Point], q: Point, config: &OracleConfig) -> (Option<Point>, f64) {
    let n = config.edge_samples.max(2);
    let per_edge: Vec<(Option<Point>, f64)> = graph
        .edges()
        .par_iter()
        .map(|e| {
            let o = graph.node_point(e.start).expect("finite start");
            let at = |lambda: f64| o + e.direction * lambda;
            let param = |k: f64| match e.length {
                Some(d) => d * k / n as f64,
                None => {
                    let t = k / n as f64;
                    t / (1.0 - t)
                }
            };
            let last = if e.length.is_some() { n } else { n - 1 };
            let mut best = (0.0, f64::NEG_INFINITY);
            for k in 0..=last {
                let v = objective(at(param(k as f64)), hull, q);
                if v > best.1 {
                    best = (k as f64, v);
                }
            }
            // Zoom in parameter space around the best index.
            let (mut center, mut width) = (best.0, 1.0);
            let upper = last as f64;
            for _ in 0..config.edge_refine_rounds {
                for j in -10..=10 {
                    let k = (center + width * j as f64 / 10.0).clamp(0.0, upper);
                    let v = objective(at(param(k)), hull, q);
                    if v > best.1 {
                        best = (k, v);
                    }
                }
                center = best.0;
                width *= 0.5;
            }
            let finite = (Some(at(param(best.0))), best.1);
            if e.length.is_none() && 1.0 > finite.1 {
                (None, 1.0)
            } else {
                finite
            }
        })
        .collect();
    per_edge.into_iter().fold((None, f64::NEG_INFINITY), |a, b| if b.1 > a.1 { b } else { a })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RigidOracleResult {
    pub value: f64,
    pub motion: RigidMotion,
    /// Best value after the initial grid and after each refinement round.
    pub history: Vec<f64>,
}

/// Grid search for `max ‖TRE(p)‖` subject to `‖TRE(x_i)‖ ≤ c`.
pub fn oracle_rigid_max(sites: &SiteSet, p: Point, c: f64, config: &OracleConfig) -> RigidOracleResult {
    // Work about the enclosing circle's center so the feasible translations
    // stay within `c + 2r` of the origin.
    let mec = compute_mec(sites);
    let origin = mec.center;
    let local: Vec<Point> = sites.original().iter().map(|&x| x - origin).collect();
    let local_sites = SiteSet::new(&local).expect("translated sites stay valid");
    let pl = p - origin;
    let reach = c + 2.0 * mec.radius;

    let evaluate = |theta: f64, s: Point| -> Option<f64> {
        let m = RigidMotion::new(theta, s);
        rigid_constraint_check(&local_sites, &m, c).then(|| tre(pl, &m).norm())
    };

    let (theta_lo, theta_hi, theta_steps) = match config.rigid_fixed_theta {
        Some(th) => (th, th, 1),
        None => (-std::f64::consts::PI, std::f64::consts::PI, config.rigid_theta_steps.max(2)),
    };
    let ns = config.rigid_s_steps.max(2);
    let grid = |theta0: f64, dtheta: f64, nt: usize, s0: Point, ds: f64| -> Vec<(f64, f64, Point)> {
        (0..nt)
            .into_par_iter()
            .flat_map_iter(|a| {
                let theta = if nt == 1 { theta0 } else { theta0 - dtheta + 2.0 * dtheta * a as f64 / (nt - 1) as f64 };
                (0..ns).flat_map(move |b| (0..ns).map(move |d| (theta, b, d)))
            })
            .filter_map(|(theta, b, d)| {
                let s = s0
                    + Point::new(
                        -ds + 2.0 * ds * b as f64 / (ns - 1) as f64,
                        -ds + 2.0 * ds * d as f64 / (ns - 1) as f64,
                    );
                evaluate(theta, s).map(|v| (v, theta, s))
            })
            .collect()
    };

    let mut pool = grid(0.5 * (theta_lo + theta_hi), 0.5 * (theta_hi - theta_lo), theta_steps, Point::ORIGIN, reach);
    // The zero translation is always feasible.
    pool.push((evaluate(0.0, Point::ORIGIN).unwrap_or(0.0), 0.0, Point::ORIGIN));
    let top = |pool: &mut Vec<(f64, f64, Point)>, k: usize| {
        pool.sort_by(|a, b| b.0.total_cmp(&a.0));
        pool.truncate(k);
    };
    top(&mut pool, config.rigid_top_k.max(1));
    let mut history = vec![pool[0].0];

    let mut dtheta = if theta_steps == 1 { 0.0 } else { (theta_hi - theta_lo) / (theta_steps - 1) as f64 };
    let mut ds = 2.0 * reach / (ns - 1) as f64;
    let nt = if theta_steps == 1 { 1 } else { 9 };
    for _ in 0..config.rigid_rounds {
        let mut next = pool.clone();
        for &(_, theta, s) in &pool {
            next.extend(grid(theta, dtheta, nt, s, ds));
        }
        top(&mut next, config.rigid_top_k.max(1));
        pool = next;
        history.push(pool[0].0);
        dtheta *= config.rigid_shrink;
        ds *= config.rigid_shrink;
    }

    let (value, theta, s) = pool[0];
    // Translate the winning motion back to the caller's frame.
    let local_motion = RigidMotion::new(theta, s);
    let shift = tre(origin, &RigidMotion::new(theta, Point::ORIGIN));
    RigidOracleResult { value, motion: RigidMotion::new(local_motion.theta(), s - shift), history }
}
