//! The boundary graph re-rooted at the minimum enclosing circle's center.
//!
//! Every edge is oriented from parent to child, so its start node is the
//! endpoint nearer its site segment. When the center lies inside an edge,
//! that edge is split there into two halves that both start at the root.

use std::collections::VecDeque;

use serde::Serialize;

use crate::edge::EdgeFrame;
use crate::error::{Error, Result};
use crate::fpvd::{build_fvb, CenterLocation, EdgeId, FvbGraph, NodeId};
use crate::geom::{Circle, ConvexHull, Point, SiteSet};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DvNode {
    pub id: usize,
    /// Normalized coordinates.
    pub position: Point,
    /// Defining sites: three for a circumcenter, two for a split root.
    pub sites: Vec<usize>,
    pub fvb_node: Option<NodeId>,
    pub parent_edge: Option<usize>,
    pub children: Vec<usize>,
    pub depth: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeEnd {
    Node(usize),
    Infinity,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DvEdge {
    pub id: usize,
    pub sites: (usize, usize),
    /// Parent node.
    pub start: usize,
    pub end: EdgeEnd,
    pub direction: Point,
    pub length: Option<f64>,
    /// Depth of the child end; the point at infinity sits one below the parent.
    pub depth: usize,
    /// Boundary-graph edge this came from (a split half keeps the original id).
    pub fvb_edge: EdgeId,
}

impl DvEdge {
    pub fn child(&self) -> Option<usize> {
        match self.end {
            EdgeEnd::Node(n) => Some(n),
            EdgeEnd::Infinity => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RootKind {
    /// The center is a circumcenter node.
    Node,
    /// The center is the midpoint of a diametral pair inside an edge (or of
    /// the bisector of a two-vertex hull, where `original` is `None`).
    Split { original: Option<EdgeId>, halves: [usize; 2] },
}

#[derive(Debug, Clone)]
pub struct DivisionTree {
    sites: SiteSet,
    hull: ConvexHull,
    mec: Circle,
    nodes: Vec<DvNode>,
    edges: Vec<DvEdge>,
    kind: RootKind,
}

pub fn build_division_tree(fvb: &FvbGraph) -> DivisionTree {
    let pts = fvb.points();
    let mut nodes: Vec<DvNode> = Vec::new();
    let mut edges: Vec<DvEdge> = Vec::new();
    let mut queue: VecDeque<usize> = VecDeque::new();
    let mut used = vec![false; fvb.edges().len()];

    let new_node = |nodes: &mut Vec<DvNode>, fvb_node: Option<NodeId>, position: Point, sites: Vec<usize>| {
        let id = nodes.len();
        nodes.push(DvNode { id, position, sites, fvb_node, parent_edge: None, children: Vec::new(), depth: 0 });
        id
    };

    let kind = match fvb.locate_center() {
        CenterLocation::Node(id) if fvb.m() > 2 => {
            let root = new_node(
                &mut nodes,
                Some(id),
                fvb.node_point(id).expect("finite"),
                fvb.node(id).defining_sites.clone(),
            );
            queue.push_back(root);
            RootKind::Node
        }
        CenterLocation::Node(id) => {
            // Two-vertex hull: both halves of the bisector hang off the midpoint.
            let n = fvb.node(id);
            let root = new_node(&mut nodes, Some(id), n.position.finite().expect("finite"), n.defining_sites.clone());
            queue.push_back(root);
            RootKind::Split { original: None, halves: [0, 1] }
        }
        CenterLocation::Edge(e) => {
            let fe = fvb.edge(e);
            used[e] = true;
            let (i, j) = fe.sites;
            let eps = pts[i].midpoint(pts[j]);
            let root = new_node(&mut nodes, None, eps, vec![i, j]);
            let o1 = fvb.node_point(fe.start).expect("finite");
            let split = (eps - o1).dot(fe.direction).max(0.0);
            let mut halves = [0; 2];
            let towards = [
                (fe.start, -fe.direction, Some(split)),
                (fe.end, fe.direction, fe.length.map(|d| (d - split).max(0.0))),
            ];
            for (k, (target, direction, length)) in towards.into_iter().enumerate() {
                let end = if target == fvb.infinity() {
                    EdgeEnd::Infinity
                } else {
                    let child = new_node(
                        &mut nodes,
                        Some(target),
                        fvb.node_point(target).expect("finite"),
                        fvb.node(target).defining_sites.clone(),
                    );
                    queue.push_back(child);
                    EdgeEnd::Node(child)
                };
                halves[k] = push_edge(&mut nodes, &mut edges, root, end, (i, j), direction, length, e);
            }
            RootKind::Split { original: Some(e), halves }
        }
    };

    while let Some(parent) = queue.pop_front() {
        let Some(fvb_node) = nodes[parent].fvb_node else { continue };
        for e in fvb.incident_edges(fvb_node) {
            if used[e] {
                continue;
            }
            used[e] = true;
            let fe = fvb.edge(e);
            let (other, direction) =
                if fe.start == fvb_node { (fe.end, fe.direction) } else { (fe.start, -fe.direction) };
            let end = if other == fvb.infinity() {
                EdgeEnd::Infinity
            } else {
                let child = new_node(
                    &mut nodes,
                    Some(other),
                    fvb.node_point(other).expect("finite"),
                    fvb.node(other).defining_sites.clone(),
                );
                queue.push_back(child);
                EdgeEnd::Node(child)
            };
            push_edge(&mut nodes, &mut edges, parent, end, fe.sites, direction, fe.length, e);
        }
    }

    DivisionTree {
        sites: fvb.sites().clone(),
        hull: fvb.hull().clone(),
        mec: Circle::new(nodes[0].position, fvb.mec_normalized().radius),
        nodes,
        edges,
        kind,
    }
}

#[allow(clippy::too_many_arguments)]
fn push_edge(
    nodes: &mut [DvNode],
    edges: &mut Vec<DvEdge>,
    parent: usize,
    end: EdgeEnd,
    sites: (usize, usize),
    direction: Point,
    length: Option<f64>,
    fvb_edge: EdgeId,
) -> usize {
    let id = edges.len();
    let depth = nodes[parent].depth + 1;
    edges.push(DvEdge { id, sites, start: parent, end, direction, length, depth, fvb_edge });
    nodes[parent].children.push(id);
    if let EdgeEnd::Node(c) = end {
        nodes[c].depth = depth;
        nodes[c].parent_edge = Some(id);
    }
    id
}

impl DivisionTree {
    pub fn from_sites(sites: &SiteSet) -> Result<Self> {
        Ok(build_division_tree(&build_fvb(sites)?))
    }

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

    pub fn m(&self) -> usize {
        self.hull.len()
    }

    /// Minimum enclosing circle, normalized frame.
    pub fn mec_normalized(&self) -> Circle {
        self.mec
    }

    pub fn root(&self) -> &DvNode {
        &self.nodes[0]
    }

    pub fn kind(&self) -> RootKind {
        self.kind
    }

    pub fn nodes(&self) -> &[DvNode] {
        &self.nodes
    }

    pub fn edges(&self) -> &[DvEdge] {
        &self.edges
    }

    pub fn node(&self, id: usize) -> &DvNode {
        &self.nodes[id]
    }

    pub fn edge(&self, id: usize) -> &DvEdge {
        &self.edges[id]
    }

    /// Tree depth `D`: the largest edge depth.
    pub fn depth(&self) -> usize {
        self.edges.iter().map(|e| e.depth).max().unwrap_or(0)
    }

    pub fn edge_frame(&self, id: usize) -> EdgeFrame {
        let e = &self.edges[id];
        let pts = self.points();
        EdgeFrame::new(self.nodes[e.start].position, e.direction, pts[e.sites.0], pts[e.sites.1], e.length)
    }

    pub fn to_original(&self, q: Point) -> Point {
        self.sites.transform().to_original(q)
    }

    pub fn to_normalized(&self, q: Point) -> Point {
        self.sites.transform().to_normalized(q)
    }

    /// Sites labelling at least one edge, ascending.
    pub fn involved_sites(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.edges.iter().flat_map(|e| [e.sites.0, e.sites.1]).collect();
        s.sort_unstable();
        s.dedup();
        s
    }

    /// Keep edges of depth at most `d`; edges cut at depth `d` continue to
    /// infinity along their direction.
    pub fn truncate(&self, d: usize) -> Result<DivisionTree> {
        let max = self.depth();
        if d > max {
            return Err(Error::DepthOutOfRange { depth: d, max });
        }
        let mut remap = vec![None; self.nodes.len()];
        let mut nodes = Vec::new();
        for n in self.nodes.iter().filter(|n| n.depth < d || n.id == 0) {
            remap[n.id] = Some(nodes.len());
            nodes.push(DvNode { id: nodes.len(), children: Vec::new(), parent_edge: None, ..n.clone() });
        }
        let mut edges: Vec<DvEdge> = Vec::new();
        let mut edge_remap = vec![None; self.edges.len()];
        for e in self.edges.iter().filter(|e| e.depth <= d) {
            let start = remap[e.start].expect("parent kept");
            let (end, length) = match e.end {
                EdgeEnd::Node(c) if self.nodes[c].depth < d => (EdgeEnd::Node(remap[c].expect("kept")), e.length),
                _ => (EdgeEnd::Infinity, None),
            };
            let id = edges.len();
            edge_remap[e.id] = Some(id);
            nodes[start].children.push(id);
            if let EdgeEnd::Node(c) = end {
                nodes[c].parent_edge = Some(id);
            }
            edges.push(DvEdge { id, start, end, length, ..e.clone() });
        }
        let kind = match self.kind {
            RootKind::Split { original, halves } if d >= 1 => {
                RootKind::Split { original, halves: halves.map(|h| edge_remap[h].expect("root edges kept")) }
            }
            other => other,
        };
        Ok(DivisionTree { sites: self.sites.clone(), hull: self.hull.clone(), mec: self.mec, nodes, edges, kind })
    }
}
