//! The center function `φ(p)`: the global maximizer for a weight point.
//!
//! Three views of the same map are provided. Traversal runs the edge solver
//! on every edge of the division tree and keeps the best candidate. Descent
//! walks down a single branch, using arch containment to decide at each
//! node whether the optimum is the node, the point at infinity, inside the
//! incoming edge or further down. The plane division lists the inverse
//! image of every node and edge as arc-bounded regions.

use std::cmp::Ordering;
use std::f64::consts::TAU;

use serde::Serialize;

use crate::division::{DivisionTree, EdgeEnd, RootKind};
use crate::edge::{Arch, EdgeOptimum, EdgeSolution};
use crate::error::{Error, Result};
use crate::fpvd::segment_distance;
use crate::geom::{evaluate_objective, on_segment, orient, Point, Similarity, SiteSet, DISTANCE_TOL};

/// Candidates closer than this (normalized) are the same optimizer.
const SAME_POINT: f64 = 1e-6;
/// Finite candidates this far out (normalized) are the point at infinity.
const FAR_AWAY: f64 = 1e6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "locus", rename_all = "snake_case")]
pub enum Locus {
    /// A node of the division tree (node 0 is the root).
    Node { node: usize },
    /// Strictly inside a division-tree edge, `lambda` from its start node
    /// (caller's units).
    EdgeInterior { edge: usize, lambda: f64 },
    #[serde(rename = "infinity")]
    AtInfinity,
}

impl Locus {
    fn rank(&self) -> (u8, usize, f64) {
        match *self {
            Locus::Node { node } => (0, node, 0.0),
            Locus::EdgeInterior { edge, lambda } => (1, edge, lambda),
            Locus::AtInfinity => (2, 0, 0.0),
        }
    }

    fn cmp_rank(&self, other: &Locus) -> Ordering {
        let (a, b) = (self.rank(), other.rank());
        a.0.cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.total_cmp(&b.2))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Solution {
    pub locus: Locus,
    /// Optimizer in the caller's frame; `None` at infinity.
    pub point: Option<Point>,
    /// Objective value; exactly 1 at infinity.
    pub value: f64,
    pub unique: bool,
    /// The value at infinity is a supremum approached but never attained.
    pub supremum_only: bool,
    /// Other optimal loci when `unique` is false.
    pub ties: Vec<Locus>,
}

/// Instrumentation for [`CenterFunction::solve_by_descent_with_stats`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DescentStats {
    /// Tree levels whose node was examined (the root counts as one).
    pub levels: usize,
    pub depth: usize,
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    /// Edge offsets are normalized here.
    locus: Locus,
    position: Option<Point>,
    value: f64,
}

/// Precomputed division tree answering queries for many weight points.
#[derive(Debug, Clone)]
pub struct CenterFunction {
    tree: DivisionTree,
}

impl CenterFunction {
    pub fn new(sites: &SiteSet) -> Result<Self> {
        Ok(Self { tree: DivisionTree::from_sites(sites)? })
    }

    pub fn from_tree(tree: DivisionTree) -> Self {
        Self { tree }
    }

    pub fn tree(&self) -> &DivisionTree {
        &self.tree
    }

    pub fn sites(&self) -> &SiteSet {
        self.tree.sites()
    }

    fn transform(&self) -> Similarity {
        self.tree.sites().transform()
    }

    /// Normalize `p`, rejecting weight points on a hull vertex.
    fn query(&self, p: Point) -> Result<Point> {
        let q = self.tree.to_normalized(p);
        let pts = self.tree.points();
        let tol = self.tree.sites().tolerance();
        if let Some(&v) = self.tree.hull().vertices().iter().find(|&&v| pts[v].dist(q) <= tol) {
            let cell_edges =
                self.tree.edges().iter().filter(|e| e.sites.0 == v || e.sites.1 == v).map(|e| e.id).collect();
            return Err(Error::VertexCoincidence { site: self.tree.sites().source_index(v), cell_edges });
        }
        Ok(q)
    }

    /// The authoritative solver; same as [`Self::solve_by_traversal`].
    pub fn solve(&self, p: Point) -> Result<Solution> {
        self.solve_by_traversal(p)
    }

    /// Solve every edge in closed form and keep the best.
    pub fn solve_by_traversal(&self, p: Point) -> Result<Solution> {
        let q = self.query(p)?;
        let mut cands = Vec::with_capacity(2 * self.tree.edges().len());
        for e in self.tree.edges() {
            let sol = self.tree.edge_frame(e.id).solve(q);
            for kind in std::iter::once(sol.kind).chain(sol.ties.iter().copied()) {
                cands.push(self.candidate(e.id, kind, q));
            }
        }
        Ok(self.finish(cands))
    }

    pub fn solve_by_descent(&self, p: Point) -> Result<Solution> {
        self.solve_by_descent_with_stats(p).map(|(s, _)| s)
    }

    /// Walk one branch of the tree from the root, deciding at each node by
    /// triangle and arch containment.
    pub fn solve_by_descent_with_stats(&self, p: Point) -> Result<(Solution, DescentStats)> {
        let q = self.query(p)?;
        let t = &self.tree;
        let pts = t.points();
        let mut stats = DescentStats { levels: 1, depth: t.depth() };
        let mut margin = f64::INFINITY;

        let root = t.root();
        let in_root_hull = match *root.sites.as_slice() {
            [a, b, c] => {
                margin = margin.min(triangle_margin([pts[a], pts[b], pts[c]], q));
                in_triangle([pts[a], pts[b], pts[c]], q)
            }
            [a, b] => {
                // The segment is the whole infinity region; points on it are interior.
                let on = on_segment(pts[a], pts[b], q, DISTANCE_TOL);
                if !on {
                    margin = margin.min(segment_distance(pts[a], pts[b], q));
                }
                on
            }
            _ => unreachable!("root has two or three sites"),
        };
        let mut outcome = if in_root_hull { Outcome::Infinity } else { Outcome::Node(0) };
        if !in_root_hull {
            let mut current = None;
            for &e in &root.children {
                let arch = self.child_arch(e);
                margin = margin.min(arch.boundary_distance(q));
                if arch.contains(q) {
                    current = Some(e);
                    break;
                }
            }
            while let Some(e) = current.take() {
                stats.levels += 1;
                let edge = t.edge(e);
                let Some(child) = edge.child() else {
                    outcome = Outcome::Edge(e);
                    break;
                };
                let node = t.node(child);
                let tri = [pts[node.sites[0]], pts[node.sites[1]], pts[node.sites[2]]];
                margin = margin.min(triangle_margin(tri, q));
                if in_triangle(tri, q) {
                    outcome = Outcome::Infinity;
                    break;
                }
                for &c in &node.children {
                    let arch = self.child_arch(c);
                    margin = margin.min(arch.boundary_distance(q));
                    if arch.contains(q) {
                        current = Some(c);
                        break;
                    }
                }
                if current.is_some() {
                    continue;
                }
                let frame = t.edge_frame(e);
                let (start, end) = (frame.start_arch(), frame.end_arch());
                margin = margin.min(start.boundary_distance(q)).min(end.boundary_distance(q));
                outcome = if start.contains(q) && !end.contains(q) { Outcome::Edge(e) } else { Outcome::Node(child) };
            }
        }

        let mut unique = margin > DISTANCE_TOL;
        let cand = match outcome {
            Outcome::Infinity => Candidate { locus: Locus::AtInfinity, position: None, value: 1.0 },
            Outcome::Node(n) => {
                let x = t.node(n).position;
                Candidate { locus: Locus::Node { node: n }, position: Some(x), value: evaluate_objective(x, pts, q) }
            }
            Outcome::Edge(e) => {
                let sol: EdgeSolution = t.edge_frame(e).solve(q);
                unique &= sol.unique;
                self.candidate(e, sol.kind, q)
            }
        };
        let mut solution = self.finish(vec![cand]);
        solution.unique = unique;
        Ok((solution, stats))
    }

    /// `Arch(O, x_i, x_j)` for the edge `e` hanging below node `O`.
    fn child_arch(&self, e: usize) -> Arch {
        let t = &self.tree;
        let edge = t.edge(e);
        let pts = t.points();
        Arch::new(Some(t.node(edge.start).position), pts[edge.sites.0], pts[edge.sites.1], edge.direction)
    }

    fn candidate(&self, e: usize, kind: EdgeOptimum, q: Point) -> Candidate {
        let t = &self.tree;
        let edge = t.edge(e);
        let pts = t.points();
        let node = |n: usize| {
            let x = t.node(n).position;
            Candidate { locus: Locus::Node { node: n }, position: Some(x), value: evaluate_objective(x, pts, q) }
        };
        match kind {
            EdgeOptimum::StartNode => node(edge.start),
            EdgeOptimum::EndNode => match edge.end {
                EdgeEnd::Node(c) => node(c),
                EdgeEnd::Infinity => Candidate { locus: Locus::AtInfinity, position: None, value: 1.0 },
            },
            // An interior optimum indistinguishable from an endpoint is that endpoint.
            EdgeOptimum::Interior { lambda } if lambda <= SAME_POINT => node(edge.start),
            EdgeOptimum::Interior { lambda } if edge.length.is_some_and(|d| d - lambda <= SAME_POINT) => {
                match edge.end {
                    EdgeEnd::Node(c) => node(c),
                    EdgeEnd::Infinity => unreachable!("bounded edges end at a node"),
                }
            }
            EdgeOptimum::Interior { lambda } => {
                let x = t.node(edge.start).position + edge.direction * lambda;
                Candidate {
                    locus: Locus::EdgeInterior { edge: e, lambda },
                    position: Some(x),
                    value: evaluate_objective(x, pts, q),
                }
            }
            EdgeOptimum::Infinity => Candidate { locus: Locus::AtInfinity, position: None, value: 1.0 },
        }
    }

    /// Group near-optimal candidates by position and report the smallest
    /// locus of each group; more than one group means a tie.
    fn finish(&self, cands: Vec<Candidate>) -> Solution {
        let best = cands.iter().map(|c| c.value).fold(f64::NEG_INFINITY, f64::max);
        let mut groups: Vec<Candidate> = Vec::new();
        for c in cands.into_iter().filter(|c| c.value >= best - DISTANCE_TOL) {
            let pos = c.position.filter(|x| x.norm() <= FAR_AWAY);
            let same = |g: &Candidate| match (pos, g.position.filter(|x| x.norm() <= FAR_AWAY)) {
                (Some(a), Some(b)) => a.dist(b) <= SAME_POINT,
                (None, None) => true,
                _ => false,
            };
            match groups.iter_mut().find(|g| same(g)) {
                Some(g) if c.locus.cmp_rank(&g.locus) == Ordering::Less => *g = c,
                Some(_) => {}
                None => groups.push(c),
            }
        }
        groups.sort_by(|a, b| a.locus.cmp_rank(&b.locus));
        let scale = self.transform().scale;
        let public = |l: Locus| match l {
            Locus::EdgeInterior { edge, lambda } => Locus::EdgeInterior { edge, lambda: lambda / scale },
            other => other,
        };
        let primary = groups[0];
        let (point, value) = match (primary.locus, primary.position) {
            (Locus::AtInfinity, _) | (_, None) => (None, 1.0),
            (_, Some(x)) => (Some(self.tree.to_original(x)), primary.value),
        };
        Solution {
            locus: public(primary.locus),
            point,
            value,
            unique: groups.len() == 1,
            supremum_only: point.is_none(),
            ties: groups[1..].iter().map(|g| public(g.locus)).collect(),
        }
    }

    /// Original-frame position of a locus.
    pub fn locus_point(&self, locus: &Locus) -> Option<Point> {
        let t = &self.tree;
        match *locus {
            Locus::Node { node } => Some(t.to_original(t.node(node).position)),
            Locus::EdgeInterior { edge, lambda } => {
                let e = t.edge(edge);
                let lambda = lambda * self.transform().scale;
                Some(t.to_original(t.node(e.start).position + e.direction * lambda))
            }
            Locus::AtInfinity => None,
        }
    }

    /// Inverse images of every node, edge and the point at infinity.
    pub fn enumerate_regions(&self) -> PlaneDivision {
        let t = &self.tree;
        let pts = t.points();
        let tri = |sites: &[usize]| Shape::Triangle([pts[sites[0]], pts[sites[1]], pts[sites[2]]]);
        let mut regions = Vec::new();

        let split = match t.kind() {
            RootKind::Split { halves, .. } => Some(halves),
            RootKind::Node => None,
        };
        match split {
            None => {
                let mut holes = vec![tri(&t.root().sites)];
                holes.extend(t.root().children.iter().map(|&e| Shape::Arch(self.child_arch(e))));
                regions.push(Region::new(RegionLabel::Node(0), Shape::Plane, holes));
            }
            Some(halves) => {
                let (a, b) = (pts[t.root().sites[0]], pts[t.root().sites[1]]);
                let mut holes = vec![Shape::Segment(a, b)];
                holes.extend(
                    halves.iter().filter_map(|&h| t.edge(h).child().map(|c| Shape::Arch(self.node_arch(c, h)))),
                );
                regions.push(Region::new(RegionLabel::SplitEdge(halves), Shape::Plane, holes));
            }
        }
        for node in t.nodes().iter().skip(1) {
            let parent = node.parent_edge.expect("non-root node has a parent");
            let mut holes = vec![tri(&node.sites)];
            holes.extend(node.children.iter().map(|&e| Shape::Arch(self.child_arch(e))));
            regions.push(Region::new(RegionLabel::Node(node.id), Shape::Arch(self.node_arch(node.id, parent)), holes));
        }
        for e in t.edges() {
            if split.is_some_and(|h| h.contains(&e.id)) {
                continue;
            }
            let holes = e.child().map(|c| Shape::Arch(self.node_arch(c, e.id))).into_iter().collect();
            regions.push(Region::new(RegionLabel::Edge(e.id), Shape::Arch(self.child_arch(e.id)), holes));
        }
        let hull = t.hull().points(pts);
        regions.push(Region::new(RegionLabel::Infinity, Shape::Hull(hull), Vec::new()));

        let transform = self.transform();
        for r in &mut regions {
            r.boundary = r.pieces(transform);
        }
        PlaneDivision { regions, m: t.m(), transform }
    }

    /// `Arch(O, x_i, x_j)` with `O` the child end of edge `e`.
    fn node_arch(&self, node: usize, e: usize) -> Arch {
        let t = &self.tree;
        let edge = t.edge(e);
        let pts = t.points();
        Arch::new(Some(t.node(node).position), pts[edge.sites.0], pts[edge.sites.1], edge.direction)
    }
}

enum Outcome {
    Infinity,
    Node(usize),
    Edge(usize),
}

fn in_triangle(tri: [Point; 3], p: Point) -> bool {
    (0..3).all(|k| {
        let (a, b) = (tri[k], tri[(k + 1) % 3]);
        orient(a, b, p) / a.dist(b) >= -DISTANCE_TOL
    })
}

fn triangle_margin(tri: [Point; 3], p: Point) -> f64 {
    (0..3).map(|k| segment_distance(tri[k], tri[(k + 1) % 3], p)).fold(f64::INFINITY, f64::min)
}

pub fn solve(sites: &SiteSet, p: Point) -> Result<Solution> {
    CenterFunction::new(sites)?.solve(p)
}

pub fn solve_by_traversal(sites: &SiteSet, p: Point) -> Result<Solution> {
    CenterFunction::new(sites)?.solve_by_traversal(p)
}

pub fn solve_by_descent(sites: &SiteSet, p: Point) -> Result<Solution> {
    CenterFunction::new(sites)?.solve_by_descent(p)
}

pub fn enumerate_regions(sites: &SiteSet) -> Result<PlaneDivision> {
    Ok(CenterFunction::new(sites)?.enumerate_regions())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "id", rename_all = "snake_case")]
pub enum RegionLabel {
    Node(usize),
    Edge(usize),
    /// Both halves of the split edge together with the root they share.
    SplitEdge([usize; 2]),
    Infinity,
}

impl RegionLabel {
    /// Whether a solution locus belongs to this region.
    pub fn matches(&self, locus: &Locus) -> bool {
        match (*self, *locus) {
            (RegionLabel::Node(n), Locus::Node { node }) => n == node,
            (RegionLabel::Edge(e), Locus::EdgeInterior { edge, .. }) => e == edge,
            (RegionLabel::SplitEdge(h), Locus::EdgeInterior { edge, .. }) => h.contains(&edge),
            (RegionLabel::SplitEdge(_), Locus::Node { node }) => node == 0,
            (RegionLabel::Infinity, Locus::AtInfinity) => true,
            _ => false,
        }
    }
}

/// A boundary primitive in the caller's frame.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum BoundaryPiece {
    /// Counterclockwise from `start_angle` to `end_angle` (radians, `end > start`).
    Arc {
        center: Point,
        radius: f64,
        start_angle: f64,
        end_angle: f64,
    },
    Segment {
        a: Point,
        b: Point,
    },
    /// Infinite line through `point` along `direction`; the shape it bounds
    /// lies to its left.
    Line {
        point: Point,
        direction: Point,
    },
}

#[derive(Debug, Clone, PartialEq)]
enum Shape {
    Plane,
    Arch(Arch),
    Triangle([Point; 3]),
    Segment(Point, Point),
    Hull(Vec<Point>),
}

impl Shape {
    fn contains(&self, p: Point) -> bool {
        match self {
            Shape::Plane => true,
            Shape::Arch(a) => a.contains(p),
            Shape::Triangle(t) => in_triangle(*t, p),
            Shape::Segment(a, b) => on_segment(*a, *b, p, DISTANCE_TOL),
            Shape::Hull(h) if h.len() == 2 => on_segment(h[0], h[1], p, DISTANCE_TOL),
            Shape::Hull(h) => (0..h.len())
                .all(|k| orient(h[k], h[(k + 1) % h.len()], p) / h[k].dist(h[(k + 1) % h.len()]) >= -DISTANCE_TOL),
        }
    }

    fn pieces(&self, t: Similarity, out: &mut Vec<BoundaryPiece>) {
        let seg = |a: Point, b: Point| BoundaryPiece::Segment { a: t.to_original(a), b: t.to_original(b) };
        match self {
            Shape::Plane => {}
            Shape::Arch(arch) => {
                let Some((xi, xj)) = arch.chord() else { return };
                match arch.circle() {
                    Some(c) => {
                        let inward = arch.inward().expect("non-empty arch");
                        let (a1, a2) =
                            ((xi - c.center).y.atan2((xi - c.center).x), (xj - c.center).y.atan2((xj - c.center).x));
                        // Pick the counterclockwise sweep whose midpoint is on the far side of the chord.
                        let ccw = |from: f64, to: f64| {
                            let end = if to > from { to } else { to + TAU };
                            (from, end)
                        };
                        let mid_side = |(s, e): (f64, f64)| {
                            let m = 0.5 * (s + e);
                            (c.center + Point::new(m.cos(), m.sin()) * c.radius - xi.midpoint(xj)).dot(inward)
                        };
                        let (s, e) = if mid_side(ccw(a1, a2)) > 0.0 { ccw(a1, a2) } else { ccw(a2, a1) };
                        out.push(BoundaryPiece::Arc {
                            center: t.to_original(c.center),
                            radius: t.length_to_original(c.radius),
                            start_angle: s,
                            end_angle: e,
                        });
                        out.push(seg(xi, xj));
                    }
                    None => {
                        let inward = arch.inward().expect("non-empty arch");
                        let d = (xj - xi).normalized();
                        let direction = if d.perp().dot(inward) >= 0.0 { d } else { -d };
                        out.push(BoundaryPiece::Line { point: t.to_original(xi), direction });
                    }
                }
            }
            Shape::Triangle(tri) => out.extend((0..3).map(|k| seg(tri[k], tri[(k + 1) % 3]))),
            Shape::Segment(a, b) => out.push(seg(*a, *b)),
            Shape::Hull(h) if h.len() == 2 => out.push(seg(h[0], h[1])),
            Shape::Hull(h) => out.extend((0..h.len()).map(|k| seg(h[k], h[(k + 1) % h.len()]))),
        }
    }
}

/// One inverse image `φ⁻¹(·)`: an outer shape minus holes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Region {
    pub label: RegionLabel,
    pub boundary: Vec<BoundaryPiece>,
    #[serde(skip)]
    outer: Shape,
    #[serde(skip)]
    holes: Vec<Shape>,
}

impl Region {
    fn new(label: RegionLabel, outer: Shape, holes: Vec<Shape>) -> Self {
        Self { label, boundary: Vec::new(), outer, holes }
    }

    fn pieces(&self, t: Similarity) -> Vec<BoundaryPiece> {
        let mut out = Vec::new();
        self.outer.pieces(t, &mut out);
        for h in &self.holes {
            h.pieces(t, &mut out);
        }
        out
    }

    /// Membership of a normalized point.
    fn contains_normalized(&self, p: Point) -> bool {
        self.outer.contains(p) && !self.holes.iter().any(|h| h.contains(p))
    }

    /// Boundary pieces of the outer shape only (empty for the whole plane).
    pub fn outer_boundary(&self, t: Similarity) -> Vec<BoundaryPiece> {
        let mut out = Vec::new();
        self.outer.pieces(t, &mut out);
        out
    }

    /// Boundary pieces of each hole, one list per hole.
    pub fn hole_boundaries(&self, t: Similarity) -> Vec<Vec<BoundaryPiece>> {
        self.holes
            .iter()
            .map(|h| {
                let mut out = Vec::new();
                h.pieces(t, &mut out);
                out
            })
            .collect()
    }

    /// Whether the region is the whole plane minus holes.
    pub fn is_unbounded_complement(&self) -> bool {
        self.outer == Shape::Plane
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlaneDivision {
    pub regions: Vec<Region>,
    pub m: usize,
    #[serde(skip)]
    transform: Similarity,
}

impl PlaneDivision {
    pub fn transform(&self) -> Similarity {
        self.transform
    }

    /// Regions containing `p` (caller's frame). Exactly one away from
    /// region boundaries.
    pub fn locate(&self, p: Point) -> Vec<usize> {
        let q = self.transform.to_normalized(p);
        (0..self.regions.len()).filter(|&k| self.regions[k].contains_normalized(q)).collect()
    }
}
