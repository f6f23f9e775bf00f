//! Planar primitives: points, circles, predicates, convex hull and the
//! validated site set.
//!
//! All solver modules work on *normalized* coordinates: the centroid of the
//! input is moved to the origin and the bounding box is scaled to unit
//! diagonal. [`SiteSet`] records that similarity so results can be mapped
//! back to the caller's frame. Tolerances below are absolute values in the
//! normalized frame.

use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance on orientation and in-circle determinants.
pub const PREDICATE_TOL: f64 = 1e-12;

/// Absolute tolerance on distances (snapping, duplicate merging, boundary tests).
pub const DISTANCE_TOL: f64 = 1e-9;

/// A point (or free vector) in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    #[inline]
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    #[inline]
    pub fn dot(self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 3D cross product.
    #[inline]
    pub fn cross(self, other: Point) -> f64 {
        self.x * other.y - self.y * other.x
    }

    #[inline]
    pub fn norm2(self) -> f64 {
        self.dot(self)
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    #[inline]
    pub fn dist(self, other: Point) -> f64 {
        (self - other).norm()
    }

    #[inline]
    pub fn dist2(self, other: Point) -> f64 {
        (self - other).norm2()
    }

    /// Counterclockwise quarter turn.
    #[inline]
    pub fn perp(self) -> Point {
        Point::new(-self.y, self.x)
    }

    /// Unit vector in the same direction; the zero vector maps to itself.
    pub fn normalized(self) -> Point {
        let n = self.norm();
        if n == 0.0 {
            self
        } else {
            self / n
        }
    }

    #[inline]
    pub fn midpoint(self, other: Point) -> Point {
        Point::new(0.5 * (self.x + other.x), 0.5 * (self.y + other.y))
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Rotate by `angle` radians about the origin.
    pub fn rotated(self, angle: f64) -> Point {
        let (s, c) = angle.sin_cos();
        Point::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }
}

impl From<[f64; 2]> for Point {
    fn from(v: [f64; 2]) -> Self {
        Point::new(v[0], v[1])
    }
}

impl From<Point> for [f64; 2] {
    fn from(p: Point) -> Self {
        [p.x, p.y]
    }
}

impl From<(f64, f64)> for Point {
    fn from(v: (f64, f64)) -> Self {
        Point::new(v.0, v.1)
    }
}

impl Add for Point {
    type Output = Point;
    #[inline]
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl AddAssign for Point {
    #[inline]
    fn add_assign(&mut self, o: Point) {
        self.x += o.x;
        self.y += o.y;
    }
}

impl Sub for Point {
    type Output = Point;
    #[inline]
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    #[inline]
    fn mul(self, s: f64) -> Point {
        Point::new(self.x * s, self.y * s)
    }
}

impl Div<f64> for Point {
    type Output = Point;
    #[inline]
    fn div(self, s: f64) -> Point {
        Point::new(self.x / s, self.y / s)
    }
}

impl Neg for Point {
    type Output = Point;
    #[inline]
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

/// Twice the signed area of triangle `abc`; positive when counterclockwise.
#[inline]
pub fn orient(a: Point, b: Point, c: Point) -> f64 {
    (b - a).cross(c - a)
}

/// In-circle determinant: positive when `d` lies inside the circle through
/// the counterclockwise triangle `abc`, negative outside.
pub fn incircle(a: Point, b: Point, c: Point, d: Point) -> f64 {
    let (ad, bd, cd) = (a - d, b - d, c - d);
    let (al, bl, cl) = (ad.norm2(), bd.norm2(), cd.norm2());
    ad.x * (bd.y * cl - bl * cd.y) - ad.y * (bd.x * cl - bl * cd.x) + al * (bd.x * cd.y - bd.y * cd.x)
}

/// Center of the circle through three non-collinear points.
pub fn circumcenter(a: Point, b: Point, c: Point) -> Result<Point> {
    let det = orient(a, b, c);
    if det.abs() < PREDICATE_TOL {
        return Err(Error::CollinearInput { det });
    }
    // Solve relative to `a` to keep the numbers small.
    let (ba, ca) = (b - a, c - a);
    let (bl, cl) = (ba.norm2(), ca.norm2());
    let d = 2.0 * ba.cross(ca);
    let ux = (ca.y * bl - ba.y * cl) / d;
    let uy = (ba.x * cl - ca.x * bl) / d;
    Ok(a + Point::new(ux, uy))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Circle {
    pub center: Point,
    pub radius: f64,
}

impl Circle {
    pub fn new(center: Point, radius: f64) -> Self {
        debug_assert!(radius >= 0.0);
        Self { center, radius }
    }

    pub fn contains(&self, p: Point, tol: f64) -> bool {
        self.center.dist(p) <= self.radius + tol
    }
}

/// `x -> (x - offset) * scale`, mapping input coordinates to the normalized frame.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Similarity {
    pub offset: Point,
    pub scale: f64,
}

impl Similarity {
    pub const IDENTITY: Similarity = Similarity { offset: Point::ORIGIN, scale: 1.0 };

    #[inline]
    pub fn to_normalized(&self, p: Point) -> Point {
        (p - self.offset) * self.scale
    }

    #[inline]
    pub fn to_original(&self, q: Point) -> Point {
        q / self.scale + self.offset
    }

    #[inline]
    pub fn length_to_original(&self, len: f64) -> f64 {
        len / self.scale
    }

    #[inline]
    pub fn length_to_normalized(&self, len: f64) -> f64 {
        len * self.scale
    }
}

/// The validated static point set.
///
/// Sites are pairwise distinct (points closer than the snap tolerance in the
/// normalized frame are merged) and there are at least two of them.
#[derive(Debug, Clone)]
pub struct SiteSet {
    original: Vec<Point>,
    normalized: Vec<Point>,
    /// Index in the caller's input for each retained site.
    source: Vec<usize>,
    transform: Similarity,
    tolerance: f64,
}

impl SiteSet {
    pub fn new<P: Into<Point> + Copy>(points: &[P]) -> Result<Self> {
        Self::with_tolerance(points, DISTANCE_TOL)
    }

    /// Build with a custom snap tolerance (normalized units) for duplicate
    /// merging, node snapping and vertex coincidence.
    pub fn with_tolerance<P: Into<Point> + Copy>(points: &[P], tolerance: f64) -> Result<Self> {
        let input: Vec<Point> = points.iter().map(|&p| p.into()).collect();
        if let Some(index) = input.iter().position(|p| !p.is_finite()) {
            return Err(Error::NonFiniteCoordinate { index });
        }
        if input.len() < 2 {
            return Err(Error::TooFewSites { found: input.len() });
        }

        let n = input.len() as f64;
        let centroid = input.iter().fold(Point::ORIGIN, |acc, &p| acc + p) / n;
        let (mut lo, mut hi) = (input[0], input[0]);
        for p in &input {
            lo = Point::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Point::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        let diag = (hi - lo).norm();
        if diag == 0.0 {
            return Err(Error::TooFewSites { found: 1 });
        }
        let transform = Similarity { offset: centroid, scale: 1.0 / diag };

        // Merge near-duplicates: sweep in x order, keep the first occurrence.
        let normalized_all: Vec<Point> = input.iter().map(|&p| transform.to_normalized(p)).collect();
        let mut order: Vec<usize> = (0..input.len()).collect();
        order.sort_by(|&a, &b| normalized_all[a].x.total_cmp(&normalized_all[b].x).then(a.cmp(&b)));
        let mut dropped = vec![false; input.len()];
        for (k, &i) in order.iter().enumerate() {
            if dropped[i] {
                continue;
            }
            for &j in &order[k + 1..] {
                if normalized_all[j].x - normalized_all[i].x > tolerance {
                    break;
                }
                if !dropped[j] && normalized_all[i].dist(normalized_all[j]) <= tolerance {
                    // Keep the smaller input index.
                    let (keep, drop) = if i < j { (i, j) } else { (j, i) };
                    dropped[drop] = true;
                    if keep != i {
                        break;
                    }
                }
            }
        }
        let source: Vec<usize> = (0..input.len()).filter(|&i| !dropped[i]).collect();
        if source.len() < 2 {
            return Err(Error::TooFewSites { found: source.len() });
        }
        Ok(Self {
            original: source.iter().map(|&i| input[i]).collect(),
            normalized: source.iter().map(|&i| normalized_all[i]).collect(),
            source,
            transform,
            tolerance,
        })
    }

    pub fn len(&self) -> usize {
        self.normalized.len()
    }

    pub fn is_empty(&self) -> bool {
        self.normalized.is_empty()
    }

    /// Sites in the normalized frame.
    pub fn normalized(&self) -> &[Point] {
        &self.normalized
    }

    /// Sites in the caller's frame (after duplicate merging).
    pub fn original(&self) -> &[Point] {
        &self.original
    }

    /// Position of site `i` in the caller's input list.
    pub fn source_index(&self, i: usize) -> usize {
        self.source[i]
    }

    pub fn transform(&self) -> Similarity {
        self.transform
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// Objective value at `x` for weight point `p`, both in the caller's frame.
    pub fn objective(&self, x: Point, p: Point) -> f64 {
        evaluate_objective(x, &self.original, p)
    }
}

/// `‖x − p‖ / max_i ‖x − x_i‖`.
///
/// The ratio is invariant under similarities, so it can be evaluated in
/// either frame as long as `x`, `p` and `sites` agree.
pub fn evaluate_objective(x: Point, sites: &[Point], p: Point) -> f64 {
    let far = sites.iter().map(|&s| x.dist2(s)).fold(0.0_f64, f64::max);
    (x.dist2(p) / far).sqrt()
}

/// Counterclockwise, strictly convex hull, stored as site indices.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexHull {
    vertices: Vec<usize>,
}

impl ConvexHull {
    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn points(&self, sites: &[Point]) -> Vec<Point> {
        self.vertices.iter().map(|&i| sites[i]).collect()
    }

    pub fn contains_vertex(&self, site: usize) -> bool {
        self.vertices.contains(&site)
    }

    /// Closed containment test against the hull of `sites` (tolerance on
    /// the signed edge distance). Two-vertex hulls are segments.
    pub fn contains(&self, sites: &[Point], p: Point, tol: f64) -> bool {
        let pts = self.points(sites);
        if pts.len() == 2 {
            return on_segment(pts[0], pts[1], p, tol);
        }
        (0..pts.len()).all(|k| {
            let (a, b) = (pts[k], pts[(k + 1) % pts.len()]);
            orient(a, b, p) / a.dist(b) >= -tol
        })
    }
}

pub(crate) fn on_segment(a: Point, b: Point, p: Point, tol: f64) -> bool {
    let ab = b - a;
    let len = ab.norm();
    let t = (p - a).dot(ab) / (len * len);
    (-tol..=1.0 + tol).contains(&t) && (orient(a, b, p) / len).abs() <= tol
}

/// Andrew's monotone chain over the normalized sites. Collinear boundary
/// points are dropped, so consecutive hull vertices are never collinear.
pub fn convex_hull(sites: &SiteSet) -> ConvexHull {
    ConvexHull { vertices: hull_indices(sites.normalized()) }
}

pub(crate) fn hull_indices(pts: &[Point]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..pts.len()).collect();
    idx.sort_by(|&a, &b| pts[a].x.total_cmp(&pts[b].x).then(pts[a].y.total_cmp(&pts[b].y)));
    if idx.len() <= 2 {
        return idx;
    }
    let turn = |h: &[usize], c: usize| {
        let (a, b) = (pts[h[h.len() - 2]], pts[h[h.len() - 1]]);
        orient(a, b, pts[c])
    };
    let mut lower: Vec<usize> = Vec::with_capacity(idx.len());
    for &i in &idx {
        while lower.len() >= 2 && turn(&lower, i) <= PREDICATE_TOL {
            lower.pop();
        }
        lower.push(i);
    }
    let mut upper: Vec<usize> = Vec::with_capacity(idx.len());
    for &i in idx.iter().rev() {
        while upper.len() >= 2 && turn(&upper, i) <= PREDICATE_TOL {
            upper.pop();
        }
        upper.push(i);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Co-circular quadruples among hull vertices (site indices, ascending).
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct GeneralPositionReport {
    pub violations: Vec<[usize; 4]>,
}

impl GeneralPositionReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Report every 4-subset of hull vertices whose in-circle determinant is
/// below [`PREDICATE_TOL`].
pub fn check_general_position(sites: &SiteSet) -> GeneralPositionReport {
    let hull = convex_hull(sites);
    let pts = sites.normalized();
    let v = hull.vertices();
    let mut violations = Vec::new();
    for a in 0..v.len() {
        for b in a + 1..v.len() {
            for c in b + 1..v.len() {
                for d in c + 1..v.len() {
                    let det = incircle(pts[v[a]], pts[v[b]], pts[v[c]], pts[v[d]]);
                    if det.abs() < PREDICATE_TOL {
                        let mut q = [v[a], v[b], v[c], v[d]];
                        q.sort_unstable();
                        violations.push(q);
                    }
                }
            }
        }
    }
    violations.sort_unstable();
    GeneralPositionReport { violations }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn set(pts: &[(f64, f64)]) -> SiteSet {
        SiteSet::new(pts).unwrap()
    }

    fn hull_points(s: &SiteSet) -> Vec<Point> {
        convex_hull(s).points(s.original())
    }

    #[test]
    fn square_hull_drops_interior_point() {
        let s = set(&[(0.0, 0.0), (2.0, 0.0), (2.0, 2.0), (0.0, 2.0), (1.0, 1.0)]);
        let h = hull_points(&s);
        assert_eq!(h.len(), 4);
        assert_eq!(h, vec![Point::new(0.0, 0.0), Point::new(2.0, 0.0), Point::new(2.0, 2.0), Point::new(0.0, 2.0)]);
    }

    #[test]
    fn two_point_hull_is_segment() {
        let s = set(&[(-1.0, 0.0), (1.0, 0.0)]);
        let h = convex_hull(&s);
        assert_eq!(h.len(), 2);
        assert_eq!(hull_points(&s), vec![Point::new(-1.0, 0.0), Point::new(1.0, 0.0)]);
    }

    #[test]
    fn collinear_set_hull_keeps_extremes() {
        let s = set(&[(0.0, 0.0), (1.0, 1.0), (2.0, 2.0), (3.0, 3.0)]);
        assert_eq!(hull_points(&s), vec![Point::new(0.0, 0.0), Point::new(3.0, 3.0)]);
    }

    #[test]
    fn random_hull_matches_brute_force_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let pts: Vec<(f64, f64)> = (0..50).map(|_| (rng.gen(), rng.gen())).collect();
            let s = set(&pts);
            let h = convex_hull(&s);
            let np = s.normalized();
            // Brute force: a directed pair (i, j) is a hull edge iff every other
            // point is strictly left of it.
            let mut oracle_edges = Vec::new();
            for i in 0..np.len() {
                for j in 0..np.len() {
                    if i != j && (0..np.len()).all(|k| k == i || k == j || orient(np[i], np[j], np[k]) > 0.0) {
                        oracle_edges.push((i, j));
                    }
                }
            }
            let v = h.vertices();
            let mut edges: Vec<(usize, usize)> = (0..v.len()).map(|k| (v[k], v[(k + 1) % v.len()])).collect();
            edges.sort_unstable();
            oracle_edges.sort_unstable();
            assert_eq!(edges, oracle_edges);
            for &q in np {
                for &(a, b) in &edges {
                    assert!(orient(np[a], np[b], q) >= -PREDICATE_TOL);
                }
            }
        }
    }

    #[test]
    fn circumcenter_examples() {
        let c = circumcenter(Point::new(0.0, 0.0), Point::new(2.0, 0.0), Point::new(0.0, 2.0)).unwrap();
        assert_abs_diff_eq!(c.x, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(c.y, 1.0, epsilon = 1e-15);
        let h = 3f64.sqrt() / 2.0;
        let c = circumcenter(Point::new(1.0, 0.0), Point::new(-0.5, h), Point::new(-0.5, -h)).unwrap();
        assert_abs_diff_eq!(c.x, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(c.y, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn circumcenter_rejects_collinear() {
        let r = circumcenter(Point::new(0.0, 0.0), Point::new(1.0, 1.0), Point::new(2.0, 2.0));
        assert!(matches!(r, Err(Error::CollinearInput { .. })));
    }

    #[test]
    fn general_position_examples() {
        let s = set(&[(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)]);
        let rep = check_general_position(&s);
        assert_eq!(rep.violations, vec![[0, 1, 2, 3]]);
        let s = set(&[(-1.0, 0.0), (1.0, 0.0), (0.0, 2.0)]);
        assert!(check_general_position(&s).is_ok());
    }

    #[test]
    fn general_position_random_agrees_with_circumcircle_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10 {
            let pts: Vec<(f64, f64)> = (0..10).map(|_| (rng.gen(), rng.gen())).collect();
            let s = set(&pts);
            assert!(check_general_position(&s).is_ok());
            // Oracle: distance of the fourth point to the circumcircle of the
            // other three, over all 4-subsets of all sites.
            let np = s.normalized();
            let mut min_gap = f64::INFINITY;
            for a in 0..np.len() {
                for b in a + 1..np.len() {
                    for c in b + 1..np.len() {
                        let Ok(cc) = circumcenter(np[a], np[b], np[c]) else { continue };
                        let r = cc.dist(np[a]);
                        for &q in &np[c + 1..] {
                            min_gap = min_gap.min((cc.dist(q) - r).abs());
                        }
                    }
                }
            }
            assert!(min_gap > 1e-9);
        }
    }

    #[test]
    fn objective_examples() {
        let sites = [Point::new(-1.0, 0.0), Point::new(1.0, 0.0)];
        let p = Point::new(0.0, 0.5);
        assert_eq!(evaluate_objective(p, &sites, p), 0.0);
        assert_abs_diff_eq!(evaluate_objective(Point::new(0.0, -2.0), &sites, p), 5f64.sqrt() / 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(
            evaluate_objective(Point::new(0.0, 0.0), &sites, Point::new(2.0, 0.0)),
            2.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn objective_tends_to_one_far_away() {
        let sites = [Point::new(-1.0, 0.3), Point::new(1.0, 0.0), Point::new(0.2, 0.9)];
        let p = Point::new(0.4, -0.7);
        for k in 0..16 {
            let dir = Point::new(1.0, 0.0).rotated(k as f64 * 0.4);
            let v = evaluate_objective(dir * 1e6, &sites, p);
            assert!((v - 1.0).abs() < 1e-4);
        }
    }

    #[test]
    fn duplicates_are_merged_and_indices_kept() {
        let s = SiteSet::new(&[(0.0, 0.0), (1.0, 0.0), (1e-12, 0.0), (0.0, 1.0)]).unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!((0..3).map(|i| s.source_index(i)).collect::<Vec<_>>(), vec![0, 1, 3]);
    }

    #[test]
    fn invalid_site_sets_are_rejected() {
        assert!(matches!(SiteSet::new(&[(0.0, 0.0)]), Err(Error::TooFewSites { .. })));
        assert!(matches!(SiteSet::new(&[(1.0, 1.0), (1.0, 1.0)]), Err(Error::TooFewSites { .. })));
        assert!(matches!(SiteSet::new(&[(0.0, 0.0), (f64::NAN, 1.0)]), Err(Error::NonFiniteCoordinate { index: 1 })));
    }

    #[test]
    fn normalization_round_trips() {
        let s = set(&[(10.0, 20.0), (30.0, -5.0), (12.0, 7.0)]);
        let t = s.transform();
        for (o, n) in s.original().iter().zip(s.normalized()) {
            assert_abs_diff_eq!(t.to_original(*n).dist(*o), 0.0, epsilon = 1e-12);
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn pt() -> impl Strategy<Value = Point> {
            (-10.0..10.0f64, -10.0..10.0f64).prop_map(|(x, y)| Point::new(x, y))
        }

        proptest! {
            #[test]
            fn circumcenter_is_equidistant_and_symmetric(a in pt(), b in pt(), c in pt()) {
                prop_assume!(orient(a, b, c).abs() > 1e-3);
                let o = circumcenter(a, b, c).unwrap();
                let (da, db, dc) = (o.dist(a), o.dist(b), o.dist(c));
                let scale = da.max(1.0);
                prop_assert!((da - db).abs() < 1e-9 * scale && (da - dc).abs() < 1e-9 * scale);
                for perm in [(b, c, a), (c, a, b), (b, a, c), (a, c, b), (c, b, a)] {
                    let q = circumcenter(perm.0, perm.1, perm.2).unwrap();
                    prop_assert!(q.dist(o) < 1e-12 * scale.max(o.norm()) * 1e3);
                }
            }

            #[test]
            fn objective_is_similarity_invariant(
                sites in proptest::collection::vec(pt(), 2..8),
                p in pt(), x in pt(), pivot in pt(), s in 0.01..100.0f64,
            ) {
                let far = sites.iter().map(|&q| x.dist(q)).fold(0.0, f64::max);
                prop_assume!(far > 1e-6);
                let v = evaluate_objective(x, &sites, p);
                let map = |q: Point| pivot + (q - pivot) * s;
                let scaled: Vec<Point> = sites.iter().map(|&q| map(q)).collect();
                let w = evaluate_objective(map(x), &scaled, map(p));
                prop_assert!((v - w).abs() <= 1e-9 * v.max(1.0));
            }
        }
    }
}
