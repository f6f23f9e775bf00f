//! Minimum enclosing circle and the farthest-point Voronoi boundary.
//!
//! The boundary graph is the dual of the farthest-point Delaunay
//! triangulation of the hull vertices: every triangle contributes its
//! circumcenter as a node, every interior diagonal a bounded edge and every
//! hull edge an unbounded edge heading into the polygon. The triangulation
//! is built by randomized incremental insertion in polygon order, which
//! only ever needs ear insertions and Lawson flips.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::edge::{Arch, EdgeFrame};
use crate::error::{Error, Result};
use crate::geom::{
    check_general_position, circumcenter, convex_hull, incircle, orient, Circle, ConvexHull, GeneralPositionReport,
    Point, SiteSet, DISTANCE_TOL, PREDICATE_TOL,
};

/// Seed used by [`build_fvb`]; any seed yields the same graph up to ids.
pub const DEFAULT_SEED: u64 = 0x5eed_f0bd;

/// Above this hull size the exhaustive quadruple check is replaced by the
/// local in-circle test on every triangulation diagonal.
const EXHAUSTIVE_GP_LIMIT: usize = 64;

pub type NodeId = usize;
pub type EdgeId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NodePosition {
    Finite(Point),
    Infinity,
}

impl NodePosition {
    pub fn finite(self) -> Option<Point> {
        match self {
            NodePosition::Finite(p) => Some(p),
            NodePosition::Infinity => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FvbNode {
    pub id: NodeId,
    /// Normalized coordinates.
    pub position: NodePosition,
    /// Three sites for a circumcenter node, two for the midpoint node of a
    /// two-vertex hull, none at infinity.
    pub defining_sites: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FvbEdge {
    pub id: EdgeId,
    /// The two farthest sites along the edge, ascending.
    pub sites: (usize, usize),
    /// Endpoint nearer the site segment.
    pub start: NodeId,
    pub end: NodeId,
    /// Unit vector from `start` toward `end`.
    pub direction: Point,
    /// `None` when the edge runs to infinity.
    pub length: Option<f64>,
}

impl FvbEdge {
    pub fn is_bounded(&self) -> bool {
        self.length.is_some()
    }
}

/// Where the minimum enclosing circle's center sits on the graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CenterLocation {
    Node(NodeId),
    Edge(EdgeId),
}

/// The farthest-point Voronoi boundary of a site set.
///
/// Geometry is stored in the normalized frame of the owning [`SiteSet`].
#[derive(Debug, Clone)]
pub struct FvbGraph {
    sites: SiteSet,
    hull: ConvexHull,
    mec: Circle,
    nodes: Vec<FvbNode>,
    edges: Vec<FvbEdge>,
    infinity: NodeId,
    triangles: Vec<[usize; 3]>,
}

impl FvbGraph {
    pub fn sites(&self) -> &SiteSet {
        &self.sites
    }

    /// Normalized site coordinates.
    pub fn points(&self) -> &[Point] {
        self.sites.normalized()
    }

    pub fn hull(&self) -> &ConvexHull {
        &self.hull
    }

    /// Number of hull vertices.
    pub fn m(&self) -> usize {
        self.hull.len()
    }

    /// Minimum enclosing circle in the caller's frame.
    pub fn mec(&self) -> Circle {
        let t = self.sites.transform();
        Circle::new(t.to_original(self.mec.center), t.length_to_original(self.mec.radius))
    }

    pub fn mec_normalized(&self) -> Circle {
        self.mec
    }

    pub fn nodes(&self) -> &[FvbNode] {
        &self.nodes
    }

    pub fn edges(&self) -> &[FvbEdge] {
        &self.edges
    }

    pub fn node(&self, id: NodeId) -> &FvbNode {
        &self.nodes[id]
    }

    pub fn edge(&self, id: EdgeId) -> &FvbEdge {
        &self.edges[id]
    }

    pub fn infinity(&self) -> NodeId {
        self.infinity
    }

    /// Farthest-point Delaunay triangles as site-index triples (counterclockwise).
    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn node_point(&self, id: NodeId) -> Option<Point> {
        self.nodes[id].position.finite()
    }

    /// Node position in the caller's frame.
    pub fn node_point_original(&self, id: NodeId) -> Option<Point> {
        self.node_point(id).map(|q| self.sites.transform().to_original(q))
    }

    /// Edges counted as a plane graph counts them: the two halves of
    /// a two-vertex bisector are one edge.
    pub fn logical_edge_count(&self) -> usize {
        if self.m() == 2 {
            1
        } else {
            self.edges.len()
        }
    }

    /// Circumcenter nodes plus the node at infinity.
    pub fn logical_node_count(&self) -> usize {
        self.nodes.iter().filter(|n| n.defining_sites.len() == 3).count() + 1
    }

    pub fn incident_edges(&self, node: NodeId) -> Vec<EdgeId> {
        self.edges.iter().filter(|e| e.start == node || e.end == node).map(|e| e.id).collect()
    }

    /// Local frame of an edge oriented from its start node.
    pub fn edge_frame(&self, id: EdgeId) -> EdgeFrame {
        let e = &self.edges[id];
        let pts = self.points();
        let origin = self.node_point(e.start).expect("edge start is finite");
        EdgeFrame::new(origin, e.direction, pts[e.sites.0], pts[e.sites.1], e.length)
    }

    /// Normalized point at offset `lambda` along an edge.
    pub fn point_on_edge(&self, id: EdgeId, lambda: f64) -> Point {
        let e = &self.edges[id];
        self.node_point(e.start).expect("edge start is finite") + e.direction * lambda
    }

    /// Distance from a normalized point to an edge (segment or ray).
    pub fn distance_to_edge(&self, id: EdgeId, q: Point) -> f64 {
        let e = &self.edges[id];
        let o = self.node_point(e.start).expect("edge start is finite");
        let t = (q - o).dot(e.direction).max(0.0);
        let t = e.length.map_or(t, |d| t.min(d));
        q.dist(o + e.direction * t)
    }

    /// Distance from a normalized point to the whole graph.
    pub fn distance_to_graph(&self, q: Point) -> f64 {
        (0..self.edges.len()).map(|e| self.distance_to_edge(e, q)).fold(f64::INFINITY, f64::min)
    }

    /// Sites whose distance from `q` is within `tol` of the largest.
    pub fn farthest_sites(&self, q: Point, tol: f64) -> Vec<usize> {
        farthest_within(self.points(), q, tol)
    }

    /// Locate the minimum enclosing circle's center: a node when within the
    /// snap tolerance of one, otherwise the nearest edge.
    pub fn locate_center(&self) -> CenterLocation {
        let eps = self.mec.center;
        let tol = self.sites.tolerance();
        let nearest_node = self
            .nodes
            .iter()
            .filter_map(|n| n.position.finite().map(|q| (n.id, q.dist(eps))))
            .min_by(|a, b| a.1.total_cmp(&b.1));
        if let Some((id, d)) = nearest_node {
            if d <= tol && self.nodes[id].defining_sites.len() == 3 {
                return CenterLocation::Node(id);
            }
        }
        if self.m() == 2 {
            // The midpoint node splits the bisector at the center by construction.
            return CenterLocation::Node(0);
        }
        let edge = (0..self.edges.len())
            .min_by(|&a, &b| self.distance_to_edge(a, eps).total_cmp(&self.distance_to_edge(b, eps)))
            .expect("graph has edges");
        CenterLocation::Edge(edge)
    }
}

/// Sites within `tol` of the largest distance from `q`.
pub(crate) fn farthest_within(pts: &[Point], q: Point, tol: f64) -> Vec<usize> {
    let far = pts.iter().map(|&s| q.dist(s)).fold(0.0, f64::max);
    (0..pts.len()).filter(|&i| far - q.dist(pts[i]) <= tol).collect()
}

/// Minimum enclosing circle in the caller's frame.
pub fn compute_mec(sites: &SiteSet) -> Circle {
    let hull = convex_hull(sites);
    let c = minidisk(&hull.points(sites.normalized()), DEFAULT_SEED);
    let t = sites.transform();
    Circle::new(t.to_original(c.center), t.length_to_original(c.radius))
}

/// Move-to-front incremental minidisk over a deterministic shuffle.
pub(crate) fn minidisk(pts: &[Point], seed: u64) -> Circle {
    let mut shuffled = pts.to_vec();
    shuffled.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let inside = |c: &Circle, q: Point| c.contains(q, PREDICATE_TOL);
    let mut disk = Circle::new(shuffled[0], 0.0);
    for i in 1..shuffled.len() {
        if inside(&disk, shuffled[i]) {
            continue;
        }
        let p = shuffled[i];
        disk = Circle::new(p, 0.0);
        for j in 0..i {
            if inside(&disk, shuffled[j]) {
                continue;
            }
            let q = shuffled[j];
            disk = diametral(p, q);
            for &r in &shuffled[..j] {
                if !inside(&disk, r) {
                    disk = circle_through(p, q, r);
                }
            }
        }
    }
    disk
}

fn diametral(a: Point, b: Point) -> Circle {
    Circle::new(a.midpoint(b), 0.5 * a.dist(b))
}

fn circle_through(a: Point, b: Point, c: Point) -> Circle {
    match circumcenter(a, b, c) {
        Ok(o) => Circle::new(o, o.dist(a).max(o.dist(b)).max(o.dist(c))),
        // Collinear: the two farthest-apart points span the circle.
        Err(_) => [diametral(a, b), diametral(a, c), diametral(b, c)]
            .into_iter()
            .max_by(|x, y| x.radius.total_cmp(&y.radius))
            .expect("three candidates"),
    }
}

/// Build the boundary graph with the default insertion seed.
pub fn build_fvb(sites: &SiteSet) -> Result<FvbGraph> {
    build_fvb_with_seed(sites, DEFAULT_SEED)
}

pub fn build_fvb_with_seed(sites: &SiteSet, seed: u64) -> Result<FvbGraph> {
    let hull = convex_hull(sites);
    let pts = sites.normalized();
    let poly = hull.points(pts);
    if hull.len() <= EXHAUSTIVE_GP_LIMIT {
        let report = check_general_position(sites);
        if !report.is_ok() {
            return Err(Error::GeneralPositionViolation(report));
        }
    }
    let mec = minidisk(&poly, seed);

    let mut graph = FvbGraph {
        sites: sites.clone(),
        hull: hull.clone(),
        mec,
        nodes: Vec::new(),
        edges: Vec::new(),
        infinity: 0,
        triangles: Vec::new(),
    };

    let v = hull.vertices();
    if v.len() == 2 {
        let (a, b) = (v[0].min(v[1]), v[0].max(v[1]));
        let dir = (pts[b] - pts[a]).perp().normalized();
        graph.nodes = vec![
            FvbNode { id: 0, position: NodePosition::Finite(pts[a].midpoint(pts[b])), defining_sites: vec![a, b] },
            FvbNode { id: 1, position: NodePosition::Infinity, defining_sites: Vec::new() },
        ];
        graph.infinity = 1;
        graph.edges = [dir, -dir]
            .into_iter()
            .enumerate()
            .map(|(id, direction)| FvbEdge { id, sites: (a, b), start: 0, end: 1, direction, length: None })
            .collect();
        return Ok(graph);
    }

    let fdt = FarthestDelaunay::build(&poly, &mut ChaCha8Rng::seed_from_u64(seed));
    if hull.len() > EXHAUSTIVE_GP_LIMIT {
        let report = fdt.local_cocircularity(v);
        if !report.is_ok() {
            return Err(Error::GeneralPositionViolation(report));
        }
    }

    // Compact triangle ids and create one node per triangle.
    let live: Vec<(usize, [usize; 3])> = fdt.tris.iter().enumerate().filter_map(|(k, t)| t.map(|t| (k, t))).collect();
    let mut node_of = HashMap::with_capacity(live.len());
    for (id, &(k, t)) in live.iter().enumerate() {
        node_of.insert(k, id);
        let o = circumcenter(poly[t[0]], poly[t[1]], poly[t[2]])?;
        graph.triangles.push(t.map(|i| v[i]));
        graph.nodes.push(FvbNode { id, position: NodePosition::Finite(o), defining_sites: t.map(|i| v[i]).to_vec() });
    }
    graph.infinity = graph.nodes.len();
    graph.nodes.push(FvbNode { id: graph.infinity, position: NodePosition::Infinity, defining_sites: Vec::new() });

    for &(k, t) in &live {
        for s in 0..3 {
            let (a, b) = (t[s], t[(s + 1) % 3]);
            let pair = (v[a].min(v[b]), v[a].max(v[b]));
            let here = node_of[&k];
            let o = graph.nodes[here].position.finite().expect("finite");
            match fdt.owner.get(&(b, a)) {
                Some(&other) if k < other => {
                    let there = node_of[&other];
                    let q = graph.nodes[there].position.finite().expect("finite");
                    // Start at the node nearer the site segment (smaller circumradius).
                    let (start, end, from, to) =
                        if o.dist(poly[a]) <= q.dist(poly[a]) { (here, there, o, q) } else { (there, here, q, o) };
                    graph.edges.push(FvbEdge {
                        id: graph.edges.len(),
                        sites: pair,
                        start,
                        end,
                        direction: (to - from).normalized(),
                        length: Some(from.dist(to)),
                    });
                }
                Some(_) => {}
                None => graph.edges.push(FvbEdge {
                    id: graph.edges.len(),
                    sites: pair,
                    start: here,
                    end: graph.infinity,
                    // Inward normal of the counterclockwise hull edge.
                    direction: (poly[b] - poly[a]).perp().normalized(),
                    length: None,
                }),
            }
        }
    }
    Ok(graph)
}

/// Farthest-point Delaunay triangulation of a strictly convex polygon given
/// in counterclockwise order; vertices are polygon positions.
struct FarthestDelaunay<'a> {
    pts: &'a [Point],
    tris: Vec<Option<[usize; 3]>>,
    /// Directed edge to the triangle that traverses it counterclockwise.
    owner: HashMap<(usize, usize), usize>,
}

impl<'a> FarthestDelaunay<'a> {
    fn build<R: Rng>(pts: &'a [Point], rng: &mut R) -> Self {
        let m = pts.len();
        let mut order: Vec<usize> = (0..m).collect();
        order.shuffle(rng);

        // Peel vertices in reverse insertion order, remembering neighbours.
        let mut prev: Vec<usize> = (0..m).map(|i| (i + m - 1) % m).collect();
        let mut next: Vec<usize> = (0..m).map(|i| (i + 1) % m).collect();
        let mut neighbours = vec![(0, 0); m];
        for &q in order[3..].iter().rev() {
            neighbours[q] = (prev[q], next[q]);
            next[prev[q]] = next[q];
            prev[next[q]] = prev[q];
        }

        let mut fdt = Self { pts, tris: Vec::with_capacity(3 * m), owner: HashMap::with_capacity(6 * m) };
        let a = order[0];
        fdt.add([a, next[a], next[next[a]]]);
        for &q in &order[3..] {
            let (a, b) = neighbours[q];
            fdt.add([a, q, b]);
            fdt.legalize(b, a, q);
        }
        fdt.lawson_pass();
        fdt
    }

    fn add(&mut self, t: [usize; 3]) -> usize {
        let id = self.tris.len();
        self.tris.push(Some(t));
        for s in 0..3 {
            self.owner.insert((t[s], t[(s + 1) % 3]), id);
        }
        id
    }

    fn remove(&mut self, id: usize) {
        if let Some(t) = self.tris[id].take() {
            for s in 0..3 {
                self.owner.remove(&(t[s], t[(s + 1) % 3]));
            }
        }
    }

    fn apex(&self, id: usize, u: usize, v: usize) -> usize {
        let t = self.tris[id].expect("live triangle");
        t.into_iter().find(|&w| w != u && w != v).expect("triangle has an apex")
    }

    /// Edge `(u, v)` of the live triangle `(u, v, q)` is illegal when the
    /// opposite apex lies strictly outside the triangle's circumcircle.
    fn is_illegal(&self, u: usize, v: usize, q: usize) -> Option<usize> {
        let &twin = self.owner.get(&(v, u))?;
        let c = self.apex(twin, v, u);
        (incircle(self.pts[u], self.pts[v], self.pts[q], self.pts[c]) < 0.0).then_some(c)
    }

    fn flip(&mut self, u: usize, v: usize, q: usize, c: usize) {
        let t1 = self.owner[&(u, v)];
        let t2 = self.owner[&(v, u)];
        self.remove(t1);
        self.remove(t2);
        self.add([q, u, c]);
        self.add([q, c, v]);
    }

    fn legalize(&mut self, u: usize, v: usize, q: usize) {
        let mut stack = vec![(u, v, q)];
        while let Some((u, v, q)) = stack.pop() {
            match self.owner.get(&(u, v)) {
                Some(&t) if self.apex(t, u, v) == q => {}
                _ => continue,
            }
            if let Some(c) = self.is_illegal(u, v, q) {
                self.flip(u, v, q, c);
                stack.push((u, c, q));
                stack.push((c, v, q));
            }
        }
    }

    /// Flip any remaining illegal diagonal until none is left.
    fn lawson_pass(&mut self) {
        let limit = self.pts.len().pow(2) + 16;
        for _ in 0..limit {
            let mut flipped = false;
            for id in 0..self.tris.len() {
                let Some(t) = self.tris[id] else { continue };
                for s in 0..3 {
                    let (u, v, q) = (t[s], t[(s + 1) % 3], t[(s + 2) % 3]);
                    if let Some(c) = self.is_illegal(u, v, q) {
                        self.flip(u, v, q, c);
                        flipped = true;
                        break;
                    }
                }
            }
            if !flipped {
                return;
            }
        }
    }

    /// Co-circular quadruples across triangulation diagonals, in site indices.
    fn local_cocircularity(&self, sites: &[usize]) -> GeneralPositionReport {
        let mut violations = Vec::new();
        for t in self.tris.iter().flatten() {
            for s in 0..3 {
                let (u, v, q) = (t[s], t[(s + 1) % 3], t[(s + 2) % 3]);
                let Some(&twin) = self.owner.get(&(v, u)) else { continue };
                if u > v {
                    continue;
                }
                let c = self.apex(twin, v, u);
                if incircle(self.pts[u], self.pts[v], self.pts[q], self.pts[c]).abs() < PREDICATE_TOL {
                    let mut quad = [sites[u], sites[v], sites[q], sites[c]];
                    quad.sort_unstable();
                    violations.push(quad);
                }
            }
        }
        violations.sort_unstable();
        GeneralPositionReport { violations }
    }
}

/// Inverse image of a non-root node under the center function:
/// `Arch(O, parent pair) − △ − Arch(O, child pairs)`.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeRegion {
    pub node: NodeId,
    /// Normalized triangle of the defining sites.
    pub triangle: [Point; 3],
    pub parent_pair: (usize, usize),
    pub outer: Arch,
    pub holes: [Arch; 2],
}

impl NodeRegion {
    /// Open-set membership test for a normalized point.
    pub fn contains(&self, p: Point) -> bool {
        let [a, b, c] = self.triangle;
        let in_triangle = orient(a, b, p) >= 0.0 && orient(b, c, p) >= 0.0 && orient(c, a, p) >= 0.0;
        self.outer.contains(p) && !in_triangle && !self.holes.iter().any(|h| h.contains(p))
    }

    /// Distance to the nearest boundary piece (first order).
    pub fn boundary_distance(&self, p: Point) -> f64 {
        let [a, b, c] = self.triangle;
        let tri =
            [(a, b), (b, c), (c, a)].into_iter().map(|(u, w)| segment_distance(u, w, p)).fold(f64::INFINITY, f64::min);
        self.holes.iter().map(|h| h.boundary_distance(p)).fold(self.outer.boundary_distance(p).min(tri), f64::min)
    }
}

pub(crate) fn segment_distance(a: Point, b: Point, p: Point) -> f64 {
    let ab = b - a;
    let t = ((p - a).dot(ab) / ab.norm2()).clamp(0.0, 1.0);
    p.dist(a + ab * t)
}

/// Arc-bounded region mapped to a circumcenter node that is not the root.
pub fn node_inverse_region(graph: &FvbGraph, node: NodeId) -> Result<NodeRegion> {
    let n = graph.node(node);
    let Some(o) = n.position.finite() else {
        return Err(Error::NotApplicable("node at infinity"));
    };
    if n.defining_sites.len() != 3 || o.dist(graph.mec_normalized().center) <= DISTANCE_TOL {
        return Err(Error::NotApplicable("root node"));
    }
    let pts = graph.points();
    let s = &n.defining_sites;
    // The parent chord separates the node from the opposite site.
    let parent = (0..3).map(|k| (s[k], s[(k + 1) % 3], s[(k + 2) % 3])).find(|&(i, j, k)| {
        let side_o = orient(pts[i], pts[j], o);
        let side_k = orient(pts[i], pts[j], pts[k]);
        side_o * side_k < 0.0 && side_o.abs() / pts[i].dist(pts[j]) > DISTANCE_TOL
    });
    let Some((i, j, k)) = parent else {
        return Err(Error::NotApplicable("root node"));
    };
    let arch = |u: usize, w: usize| {
        let away = (pts[u].midpoint(pts[w]) - pts[k]).normalized();
        Arch::new(Some(o), pts[u], pts[w], away)
    };
    Ok(NodeRegion {
        node,
        triangle: [pts[s[0]], pts[s[1]], pts[s[2]]],
        parent_pair: (i.min(j), i.max(j)),
        outer: arch(i, j),
        holes: [arch(i, k), arch(k, j)],
    })
}
