//! JSON rendering. Field order is insertion order and every float is
//! rounded to 9 significant digits, so identical runs print identical bytes.

use dwmec::{
    BoundaryPiece, DisplacementBound, Error, FvbGraph, Locus, OracleSolution, PlaneDivision, Point, RegionLabel,
    RigidMotion, RigidOracleResult, SiteSet, Solution,
};
use serde_json::{json, Map, Value};

pub fn round9(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return if x == 0.0 { 0.0 } else { x };
    }
    let r: f64 = format!("{x:.8e}").parse().expect("formatted float parses");
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

/// Round every number in place; integers are left alone.
pub fn normalize(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            *v = json!(round9(n.as_f64().expect("f64 number")));
        }
        Value::Array(a) => a.iter_mut().for_each(normalize),
        Value::Object(o) => o.values_mut().for_each(normalize),
        _ => {}
    }
}

pub fn to_string(mut v: Value) -> String {
    normalize(&mut v);
    serde_json::to_string(&v).expect("JSON values serialize")
}

pub fn point(p: Point) -> Value {
    json!([p.x, p.y])
}

fn opt_point(p: Option<Point>) -> Value {
    p.map_or(Value::Null, point)
}

/// The locus flattened into `obj`: `locus` plus its node, edge and offset.
fn put_locus(obj: &mut Map<String, Value>, locus: &Locus) {
    match *locus {
        Locus::Node { node } => {
            obj.insert("locus".into(), json!("node"));
            obj.insert("node".into(), json!(node));
        }
        Locus::EdgeInterior { edge, lambda } => {
            obj.insert("locus".into(), json!("edge_interior"));
            obj.insert("edge".into(), json!(edge));
            obj.insert("lambda".into(), json!(lambda));
        }
        Locus::AtInfinity => {
            obj.insert("locus".into(), json!("infinity"));
        }
    }
}

fn locus(l: &Locus) -> Value {
    let mut obj = Map::new();
    put_locus(&mut obj, l);
    Value::Object(obj)
}

pub fn solution(s: &Solution) -> Map<String, Value> {
    let mut obj = Map::new();
    put_locus(&mut obj, &s.locus);
    obj.insert("point".into(), opt_point(s.point));
    obj.insert("value".into(), json!(s.value));
    obj.insert("unique".into(), json!(s.unique));
    obj.insert("supremum_only".into(), json!(s.supremum_only));
    obj.insert("ties".into(), Value::Array(s.ties.iter().map(locus).collect()));
    obj
}

pub fn mec(sites: &SiteSet) -> Value {
    let c = dwmec::compute_mec(sites);
    json!({ "center": point(c.center), "radius": c.radius })
}

pub fn fvd(graph: &FvbGraph) -> Value {
    let sites = graph.sites();
    let src = |i: usize| sites.source_index(i);
    let t = sites.transform();
    let inf = graph.infinity();
    let nodes: Vec<Value> = graph
        .nodes()
        .iter()
        .filter(|n| n.id != inf)
        .map(|n| {
            json!({
                "id": n.id,
                "point": opt_point(graph.node_point_original(n.id)),
                "sites": n.defining_sites.iter().map(|&i| src(i)).collect::<Vec<_>>(),
            })
        })
        .collect();
    let edges: Vec<Value> = graph
        .edges()
        .iter()
        .map(|e| {
            json!({
                "id": e.id,
                "sites": [src(e.sites.0), src(e.sites.1)],
                "start": e.start,
                "end": if e.end == inf { Value::Null } else { json!(e.end) },
                "direction": point(e.direction),
                "length": e.length.map_or(Value::Null, |l| json!(t.length_to_original(l))),
            })
        })
        .collect();
    json!({
        "m": graph.m(),
        "hull": graph.hull().vertices().iter().map(|&i| src(i)).collect::<Vec<_>>(),
        "mec": mec(sites),
        "edge_count": graph.logical_edge_count(),
        "node_count": graph.logical_node_count(),
        "nodes": nodes,
        "edges": edges,
    })
}

fn label(l: &RegionLabel) -> Value {
    match *l {
        RegionLabel::Node(n) => json!({ "kind": "node", "node": n }),
        RegionLabel::Edge(e) => json!({ "kind": "edge", "edge": e }),
        RegionLabel::SplitEdge(h) => json!({ "kind": "split_edge", "edges": h }),
        RegionLabel::Infinity => json!({ "kind": "infinity" }),
    }
}

pub fn piece(p: &BoundaryPiece) -> Value {
    match *p {
        BoundaryPiece::Arc { center, radius, start_angle, end_angle } => json!({
            "type": "arc",
            "center": point(center),
            "radius": radius,
            "start_angle": start_angle,
            "end_angle": end_angle,
        }),
        BoundaryPiece::Segment { a, b } => json!({ "type": "segment", "a": point(a), "b": point(b) }),
        BoundaryPiece::Line { point: q, direction } => {
            json!({ "type": "line", "point": point(q), "direction": point(direction) })
        }
    }
}

pub fn regions(div: &PlaneDivision) -> Value {
    let regions: Vec<Value> = div
        .regions
        .iter()
        .map(|r| json!({ "label": label(&r.label), "boundary": r.boundary.iter().map(piece).collect::<Vec<_>>() }))
        .collect();
    json!({
        "m": div.m,
        "count": div.regions.len(),
        "bound": 3 * div.m - 4,
        "regions": regions,
    })
}

pub fn motion(m: &RigidMotion) -> Value {
    json!({ "theta": m.theta(), "s": point(m.s()) })
}

pub fn displacement(d: &DisplacementBound) -> Map<String, Value> {
    let mut obj = Map::new();
    obj.insert("value".into(), json!(d.value));
    obj.insert("witness".into(), motion(&d.witness));
    obj.insert("solution".into(), Value::Object(solution(&d.solution)));
    obj
}

pub fn oracle(o: &OracleSolution) -> Value {
    json!({
        "value": o.best_value,
        "point": opt_point(o.best_point),
        "graph_value": o.graph_value,
        "graph_point": opt_point(o.graph_point),
        "plane_value": o.plane_value,
        "plane_point": point(o.plane_point),
        "grid_spacing": o.grid_spacing,
        "discretization_bound": o.discretization_bound,
        "plane_beats_graph": o.plane_beats_graph,
    })
}

pub fn rigid_oracle(o: &RigidOracleResult) -> Value {
    json!({ "value": o.value, "witness": motion(&o.motion) })
}

/// Error payload printed on stdout next to the stderr diagnostic.
pub fn error(e: &Error, sites: Option<&SiteSet>) -> Value {
    let src = |i: usize| sites.map_or(i, |s| s.source_index(i));
    let mut obj = Map::new();
    let kind = match e {
        Error::TooFewSites { .. } | Error::NonFiniteCoordinate { .. } => "invalid_input",
        Error::CollinearInput { .. } | Error::DegenerateInput(_) | Error::GeneralPositionViolation(_) => {
            "general_position"
        }
        Error::VertexCoincidence { .. } => "vertex_coincidence",
        Error::BudgetOutOfRange { .. } => "budget_out_of_range",
        Error::NotApplicable(_) | Error::DepthOutOfRange { .. } | Error::ZeroRotation => "not_applicable",
    };
    obj.insert("error".into(), json!(kind));
    obj.insert("message".into(), json!(e.to_string()));
    match e {
        Error::GeneralPositionViolation(report) => {
            let v: Vec<Vec<usize>> = report.violations.iter().map(|q| q.iter().map(|&i| src(i)).collect()).collect();
            obj.insert("violations".into(), json!(v));
        }
        Error::VertexCoincidence { site, cell_edges } => {
            obj.insert("site".into(), json!(site));
            obj.insert("cell_edges".into(), json!(cell_edges));
        }
        Error::BudgetOutOfRange { budget, limit } => {
            obj.insert("budget".into(), json!(budget));
            obj.insert("limit".into(), json!(limit));
        }
        _ => {}
    }
    Value::Object(obj)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_keeps_nine_digits() {
        assert_eq!(round9(1.118033988749895), 1.11803399);
        assert_eq!(round9(-0.0), 0.0);
        assert_eq!(round9(2.0), 2.0);
        assert_eq!(round9(1e-20), 1e-20);
        assert_eq!(to_string(json!({ "b": 0.1 + 0.2, "a": [-0.0] })), r#"{"b":0.3,"a":[0.0]}"#);
    }
}
