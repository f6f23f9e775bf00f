//! Closed-form maximization of the objective along a single boundary edge.
//!
//! An edge `E(x_i, x_j)` lies on the perpendicular bisector of its two
//! sites and runs from its start node `O₁` (the endpoint nearer the segment
//! `x_i x_j`) either to a node `O₂` at distance `δ` or to infinity. In the
//! local frame `O₁` is the origin, the edge occupies the negative x-axis
//! and the sites sit at `(γ, ±h)`, so a point of the edge is `(−λ, 0)` and
//!
//! ```text
//! f(λ)² = (ρ² + 2ρλcosθ + λ²) / (r² + 2γλ + λ²),     λ ∈ [0, δ]
//! ```
//!
//! with `(ρ, θ)` the polar coordinates of the weight point. The sign of
//! `f′` is the sign of `aλ² + bλ + c`, where `a = γ − ρcosθ`,
//! `b = r² − ρ²` and `c = ρr²cosθ − ρ²γ`; the sign pattern of `(a, b, c)`
//! and two extra circles for bounded edges decide where the maximum is.

use serde::Serialize;

use crate::geom::{Circle, Point, DISTANCE_TOL, PREDICATE_TOL};

/// Candidates farther apart than this (normalized units) are distinct optima.
const TIE_SEPARATION: f64 = 1e-6;
/// Edge offsets beyond this are indistinguishable from the point at infinity.
const FAR_LAMBDA: f64 = 1e6;

/// Local coordinate system of one edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeFrame {
    origin: Point,
    /// Unit vector from `O₁` toward `O₂` (the edge direction).
    direction: Point,
    /// Local +y axis.
    normal: Point,
    sites: (Point, Point),
    gamma: f64,
    r: f64,
    half_chord: f64,
    length: Option<f64>,
}

/// Quadratic coefficients of the derivative numerator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EdgeCoefficients {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    /// Positive stationary offset, when one exists.
    pub lambda_star: Option<f64>,
}

/// Regions of the plane for an unbounded edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum UnboundedRegion {
    /// `a<0, b<0, c<0`: decreasing, optimum at `O₁`.
    One,
    /// `a>0, b<0, c<0`: dips then rises, `f(0) > f(∞)`.
    Two,
    /// `a<0, c>0`: rises then falls, optimum inside the edge.
    ThreeFive,
    /// `a>0, b>0, c<0`: dips then rises, `f(0) < f(∞)`.
    Four,
    /// `a>0, b>0, c>0`: increasing, optimum at infinity.
    Six,
    /// A coefficient vanishes; resolved by comparing candidate values.
    Boundary,
}

/// Regions of the plane for a bounded edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BoundedRegion {
    One,
    TwoPrime,
    ThreePrime,
    FourPrime,
    FivePrime,
    Six,
    Boundary,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EdgeOptimum {
    StartNode,
    EndNode,
    Interior { lambda: f64 },
    Infinity,
}

impl EdgeOptimum {
    /// Offset along the edge; `None` for the point at infinity.
    pub fn offset(self, length: Option<f64>) -> Option<f64> {
        match self {
            EdgeOptimum::StartNode => Some(0.0),
            EdgeOptimum::EndNode => length,
            EdgeOptimum::Interior { lambda } => Some(lambda),
            EdgeOptimum::Infinity => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EdgeSolution {
    pub kind: EdgeOptimum,
    pub value: f64,
    /// False when another candidate attains the same value elsewhere.
    pub unique: bool,
    /// The other optimal candidates when `unique` is false.
    pub ties: Vec<EdgeOptimum>,
}

impl EdgeFrame {
    /// Frame for the edge starting at `origin`, heading along `direction`
    /// (normalized internally), with sites `xi`, `xj` and optional length.
    pub fn new(origin: Point, direction: Point, xi: Point, xj: Point, length: Option<f64>) -> Self {
        let direction = direction.normalized();
        let axis = -direction;
        let normal = axis.perp();
        let mid = xi.midpoint(xj);
        let gamma = (mid - origin).dot(axis).max(0.0);
        Self {
            origin,
            direction,
            normal,
            sites: (xi, xj),
            gamma,
            r: origin.dist(xi),
            half_chord: 0.5 * xi.dist(xj),
            length,
        }
    }

    pub fn origin(&self) -> Point {
        self.origin
    }

    pub fn direction(&self) -> Point {
        self.direction
    }

    pub fn sites(&self) -> (Point, Point) {
        self.sites
    }

    /// Distance from the start node to the site segment.
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Distance from the start node to either site.
    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn half_chord(&self) -> f64 {
        self.half_chord
    }

    /// Edge length; `None` when unbounded.
    pub fn length(&self) -> Option<f64> {
        self.length
    }

    pub fn is_bounded(&self) -> bool {
        self.length.is_some()
    }

    pub fn to_local(&self, p: Point) -> Point {
        let d = p - self.origin;
        Point::new(-d.dot(self.direction), d.dot(self.normal))
    }

    pub fn to_global(&self, q: Point) -> Point {
        self.origin - self.direction * q.x + self.normal * q.y
    }

    /// Global point at offset `lambda` from the start node.
    pub fn point_at(&self, lambda: f64) -> Point {
        self.origin + self.direction * lambda
    }

    pub fn end_point(&self) -> Option<Point> {
        self.length.map(|d| self.point_at(d))
    }

    /// `(ρ, θ)`: polar coordinates of `p` in the local frame.
    pub fn polar(&self, p: Point) -> (f64, f64) {
        let q = self.to_local(p);
        (q.norm(), q.y.atan2(q.x))
    }

    /// Objective restricted to the edge; `f64::INFINITY` means the limit point.
    pub fn objective(&self, p: Point, lambda: f64) -> f64 {
        if lambda.is_infinite() {
            return 1.0;
        }
        let q = self.to_local(p);
        let num = q.norm2() + 2.0 * q.x * lambda + lambda * lambda;
        let den = self.r * self.r + 2.0 * self.gamma * lambda + lambda * lambda;
        (num.max(0.0) / den).sqrt()
    }

    pub fn coefficients(&self, p: Point) -> EdgeCoefficients {
        let q = self.to_local(p);
        let (px, rho2, r2) = (q.x, q.norm2(), self.r * self.r);
        let a = self.gamma - px;
        let b = r2 - rho2;
        let c = px * r2 - rho2 * self.gamma;
        EdgeCoefficients { a, b, c, lambda_star: positive_root(a, b, c) }
    }

    /// Circle `c = 0` through `O₁` and both sites, or `None` when `γ = 0`
    /// (the boundary is then the site line).
    pub fn c_circle(&self) -> Option<Circle> {
        (self.gamma > PREDICATE_TOL).then(|| {
            let rad = self.r * self.r / (2.0 * self.gamma);
            Circle::new(self.to_global(Point::new(rad, 0.0)), rad)
        })
    }

    /// Circle `b = 0`: centered at `O₁` through both sites.
    pub fn b_circle(&self) -> Circle {
        Circle::new(self.origin, self.r)
    }

    /// Circle `b₁ = 0` through both sites and `O₂`; bounded edges only.
    pub fn b1_circle(&self) -> Option<Circle> {
        let delta = self.length?;
        let cx = (self.r * self.r - delta * delta) / (2.0 * self.gamma + 2.0 * delta);
        Some(self.circle_through_sites(cx))
    }

    /// Circle `b₂ = 0` through both sites, separating `f(0) > f(δ)` from
    /// `f(0) < f(δ)`; bounded edges only.
    pub fn b2_circle(&self) -> Option<Circle> {
        let delta = self.length?;
        let cx = self.r * self.r / (2.0 * self.gamma + delta);
        Some(self.circle_through_sites(cx))
    }

    fn circle_through_sites(&self, local_cx: f64) -> Circle {
        let rad = (self.gamma - local_cx).hypot(self.half_chord);
        Circle::new(self.to_global(Point::new(local_cx, 0.0)), rad)
    }

    /// `Arch(O₁, x_i, x_j)`.
    pub fn start_arch(&self) -> Arch {
        Arch::new(Some(self.origin), self.sites.0, self.sites.1, self.direction)
    }

    /// `Arch(O₂, x_i, x_j)`; empty for unbounded edges.
    pub fn end_arch(&self) -> Arch {
        Arch::new(self.end_point(), self.sites.0, self.sites.1, self.direction)
    }

    /// Whether the optimum for `p` lies strictly inside this edge:
    /// `p ∈ Arch(O₁) − Arch(O₂)`.
    pub fn dominant_region_contains(&self, p: Point) -> bool {
        self.start_arch().contains(p) && !self.end_arch().contains(p)
    }

    /// Classify and solve using the table matching the edge type.
    pub fn solve(&self, p: Point) -> EdgeSolution {
        if self.is_bounded() {
            self.classify_bounded(p).1
        } else {
            self.classify_unbounded(p).1
        }
    }

    pub fn classify_unbounded(&self, p: Point) -> (UnboundedRegion, EdgeSolution) {
        debug_assert!(self.length.is_none());
        let co = self.coefficients(p);
        let (a, b, c) = (co.a, co.b, co.c);
        let region = match (sign(a), sign(b), sign(c)) {
            (-1, -1, -1) => UnboundedRegion::One,
            (1, -1, -1) => UnboundedRegion::Two,
            (-1, _, 1) => UnboundedRegion::ThreeFive,
            (1, 1, -1) => UnboundedRegion::Four,
            (1, 1, 1) => UnboundedRegion::Six,
            _ => UnboundedRegion::Boundary,
        };
        let d = self.boundary_distances(p, &co);
        let near = d.a.min(d.b).min(d.c) <= DISTANCE_TOL;
        if near || region == UnboundedRegion::Boundary {
            return (region, self.solve_by_candidates(p, &co));
        }
        let kind = match region {
            UnboundedRegion::One | UnboundedRegion::Two => EdgeOptimum::StartNode,
            UnboundedRegion::ThreeFive => match co.lambda_star {
                Some(lambda) => EdgeOptimum::Interior { lambda },
                None => return (region, self.solve_by_candidates(p, &co)),
            },
            UnboundedRegion::Four | UnboundedRegion::Six => EdgeOptimum::Infinity,
            UnboundedRegion::Boundary => unreachable!(),
        };
        (region, self.unique(p, kind))
    }

    pub fn classify_bounded(&self, p: Point) -> (BoundedRegion, EdgeSolution) {
        let delta = self.length.expect("classify_bounded on an unbounded edge");
        let co = self.coefficients(p);
        let q = self.to_local(p);
        let b1 = self.b1_value(q, delta);
        let b2 = self.b2_value(q, delta);
        let region = match (sign(co.a), sign(co.b), sign(co.c)) {
            (-1, -1, -1) => BoundedRegion::One,
            (1, 1, 1) => BoundedRegion::Six,
            (-1, _, 1) => match sign(b1) {
                1 => BoundedRegion::ThreePrime,
                -1 => BoundedRegion::FivePrime,
                _ => BoundedRegion::Boundary,
            },
            (1, _, -1) => match sign(b2) {
                1 => BoundedRegion::TwoPrime,
                -1 => BoundedRegion::FourPrime,
                _ => BoundedRegion::Boundary,
            },
            _ => BoundedRegion::Boundary,
        };
        let d = self.boundary_distances(p, &co);
        let (g1, g2) = (self.b1_gradient(q, delta), self.b2_gradient(q, delta));
        let near = d.a.min(d.b).min(d.c).min(b1.abs() / g1).min(b2.abs() / g2) <= DISTANCE_TOL;
        if near || region == BoundedRegion::Boundary {
            return (region, self.solve_by_candidates(p, &co));
        }
        let kind = match region {
            BoundedRegion::One | BoundedRegion::TwoPrime => EdgeOptimum::StartNode,
            BoundedRegion::ThreePrime => match co.lambda_star {
                Some(lambda) if lambda < delta => EdgeOptimum::Interior { lambda },
                _ => return (region, self.solve_by_candidates(p, &co)),
            },
            BoundedRegion::FourPrime | BoundedRegion::FivePrime | BoundedRegion::Six => EdgeOptimum::EndNode,
            BoundedRegion::Boundary => unreachable!(),
        };
        (region, self.unique(p, kind))
    }

    /// `b₁(p)`: negative inside the circle through the sites and `O₂`.
    fn b1_value(&self, q: Point, delta: f64) -> f64 {
        let (g, r2) = (self.gamma, self.r * self.r);
        (g + delta) * q.norm2() - (r2 - delta * delta) * q.x - (g * delta + r2) * delta
    }

    fn b1_gradient(&self, q: Point, delta: f64) -> f64 {
        let (g, r2) = (self.gamma, self.r * self.r);
        Point::new(2.0 * (g + delta) * q.x - (r2 - delta * delta), 2.0 * (g + delta) * q.y).norm()
    }

    /// `b₂(p)`: positive where `f(0) > f(δ)`.
    fn b2_value(&self, q: Point, delta: f64) -> f64 {
        let (g, r2) = (self.gamma, self.r * self.r);
        (2.0 * g + delta) * q.norm2() - 2.0 * r2 * q.x - r2 * delta
    }

    fn b2_gradient(&self, q: Point, delta: f64) -> f64 {
        let (g, r2) = (self.gamma, self.r * self.r);
        Point::new(2.0 * (2.0 * g + delta) * q.x - 2.0 * r2, 2.0 * (2.0 * g + delta) * q.y).norm()
    }

    /// First-order distances from `p` to the boundaries `a = 0`, `b = 0`, `c = 0`.
    fn boundary_distances(&self, p: Point, co: &EdgeCoefficients) -> BoundaryDistances {
        let q = self.to_local(p);
        let r2 = self.r * self.r;
        let grad_c = Point::new(r2 - 2.0 * self.gamma * q.x, -2.0 * self.gamma * q.y).norm();
        BoundaryDistances {
            a: co.a.abs(),
            b: (q.norm() - self.r).abs(),
            c: if grad_c > 0.0 { co.c.abs() / grad_c } else { f64::INFINITY },
        }
    }

    fn unique(&self, p: Point, kind: EdgeOptimum) -> EdgeSolution {
        EdgeSolution { kind, value: self.value_of(p, kind), unique: true, ties: Vec::new() }
    }

    fn value_of(&self, p: Point, kind: EdgeOptimum) -> f64 {
        match kind.offset(self.length) {
            Some(lambda) => self.objective(p, lambda),
            None => 1.0,
        }
    }

    /// Boundary resolution: evaluate every endpoint and every interior local
    /// maximum of `f`, keep the best, and report distinct equal-valued
    /// candidates as ties.
    fn solve_by_candidates(&self, p: Point, co: &EdgeCoefficients) -> EdgeSolution {
        let mut cands = vec![EdgeOptimum::StartNode];
        cands.push(if self.is_bounded() { EdgeOptimum::EndNode } else { EdgeOptimum::Infinity });
        let upper = self.length.unwrap_or(f64::INFINITY);
        for lambda in roots(co.a, co.b, co.c) {
            // A local maximum needs f′ to go from positive to negative.
            let h = 1e-7 * lambda.max(1.0);
            let slope = |l: f64| co.a * l * l + co.b * l + co.c;
            if lambda > 0.0 && lambda < upper && slope(lambda - h) > 0.0 && slope(lambda + h) < 0.0 {
                cands.push(EdgeOptimum::Interior { lambda });
            }
        }
        let scored: Vec<(EdgeOptimum, f64)> = cands.into_iter().map(|k| (k, self.value_of(p, k))).collect();
        let best = scored
            .iter()
            .copied()
            .fold(None::<(EdgeOptimum, f64)>, |acc, cur| match acc {
                Some(a) if a.1 >= cur.1 => Some(a),
                _ => Some(cur),
            })
            .expect("at least two candidates");
        let ties: Vec<EdgeOptimum> = scored
            .iter()
            .filter(|(k, v)| {
                (best.1 - v).abs() <= DISTANCE_TOL && separated(k.offset(self.length), best.0.offset(self.length))
            })
            .map(|(k, _)| *k)
            .collect();
        EdgeSolution { kind: best.0, value: best.1, unique: ties.is_empty(), ties }
    }
}

struct BoundaryDistances {
    a: f64,
    b: f64,
    c: f64,
}

fn sign(v: f64) -> i8 {
    if v > 0.0 {
        1
    } else if v < 0.0 {
        -1
    } else {
        0
    }
}

fn separated(a: Option<f64>, b: Option<f64>) -> bool {
    match (a, b) {
        (Some(x), Some(y)) => (x - y).abs() > TIE_SEPARATION,
        (Some(x), None) | (None, Some(x)) => x < FAR_LAMBDA,
        (None, None) => false,
    }
}

/// Real roots of `aλ² + bλ + c`, computed without cancellation.
fn roots(a: f64, b: f64, c: f64) -> Vec<f64> {
    if a.abs() < PREDICATE_TOL {
        return if b != 0.0 { vec![-c / b] } else { Vec::new() };
    }
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return Vec::new();
    }
    let q = -0.5 * (b + b.signum() * disc.sqrt());
    if q == 0.0 {
        return vec![0.0];
    }
    vec![q / a, c / q]
}

/// The positive stationary offset `λ*` when there is exactly one positive
/// root (the only case the tables use), else the smallest positive root.
fn positive_root(a: f64, b: f64, c: f64) -> Option<f64> {
    roots(a, b, c).into_iter().filter(|&l| l > 0.0 && l.is_finite()).min_by(f64::total_cmp)
}

/// `Arch(O, x_i, x_j)`: the region between segment `x_i x_j` and the arc of
/// the circle through `O, x_i, x_j` that does not contain `O`. When `O` is
/// on the segment it is the open half-plane not containing the edge, and it
/// is empty when `O` is the point at infinity. Containment is strict.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Arch {
    Empty,
    Region {
        apex: Point,
        xi: Point,
        xj: Point,
        /// Unit normal of the chord pointing into the arch.
        inward: Point,
        gamma: f64,
        r2: f64,
    },
}

impl Arch {
    /// `edge_direction` only matters when `apex` lies on the segment.
    pub fn new(apex: Option<Point>, xi: Point, xj: Point, edge_direction: Point) -> Self {
        let Some(apex) = apex else { return Arch::Empty };
        let mid = xi.midpoint(xj);
        let chord_normal = (xj - xi).perp().normalized();
        let side = (apex - mid).dot(chord_normal);
        let inward = if side.abs() > PREDICATE_TOL {
            chord_normal * -side.signum()
        } else {
            let s = edge_direction.dot(chord_normal);
            chord_normal * -(if s == 0.0 { 1.0 } else { s.signum() })
        };
        let gamma = (mid - apex).dot(inward).max(0.0);
        Arch::Region { apex, xi, xj, inward, gamma, r2: apex.dist2(xi) }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, Arch::Empty)
    }

    pub fn contains(&self, p: Point) -> bool {
        match *self {
            Arch::Empty => false,
            Arch::Region { apex, inward, gamma, r2, .. } => {
                let d = p - apex;
                let px = d.dot(inward);
                px > gamma && px * r2 - d.norm2() * gamma > 0.0
            }
        }
    }

    /// First-order distance from `p` to the arch boundary (chord line or arc).
    pub fn boundary_distance(&self, p: Point) -> f64 {
        match *self {
            Arch::Empty => f64::INFINITY,
            Arch::Region { apex, inward, gamma, r2, .. } => {
                let d = p - apex;
                let px = d.dot(inward);
                let py = d.dot(inward.perp());
                let c = px * r2 - d.norm2() * gamma;
                let grad = Point::new(r2 - 2.0 * gamma * px, -2.0 * gamma * py).norm();
                (px - gamma).abs().min(if grad > 0.0 { c.abs() / grad } else { f64::INFINITY })
            }
        }
    }

    /// The bounding circle, or `None` for a half-plane or the empty arch.
    pub fn circle(&self) -> Option<Circle> {
        match *self {
            Arch::Region { apex, inward, gamma, r2, .. } if gamma > PREDICATE_TOL => {
                let rad = r2 / (2.0 * gamma);
                Some(Circle::new(apex + inward * rad, rad))
            }
            _ => None,
        }
    }

    pub fn chord(&self) -> Option<(Point, Point)> {
        match *self {
            Arch::Region { xi, xj, .. } => Some((xi, xj)),
            Arch::Empty => None,
        }
    }

    pub fn inward(&self) -> Option<Point> {
        match *self {
            Arch::Region { inward, .. } => Some(inward),
            Arch::Empty => None,
        }
    }
}

/// Free-function form of [`Arch::contains`].
pub fn arch_contains(apex: Option<Point>, xi: Point, xj: Point, edge_direction: Point, p: Point) -> bool {
    Arch::new(apex, xi, xj, edge_direction).contains(p)
}
