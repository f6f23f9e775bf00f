//! SVG drawings of the boundary graph and the plane division.
//!
//! The viewport is four times the hull's bounding box. The boundary graph is
//! drawn dash-dot; each region is filled through a mask (outer shape white,
//! holes black) with one color per label class.

use std::fmt::Write;

use dwmec::{BoundaryPiece, FvbGraph, PlaneDivision, Point, RegionLabel};

const WIDTH: f64 = 800.0;

struct View {
    lo: Point,
    hi: Point,
    scale: f64,
}

impl View {
    fn new(points: &[Point]) -> Self {
        let lo = points.iter().fold(Point::new(f64::MAX, f64::MAX), |a, p| Point::new(a.x.min(p.x), a.y.min(p.y)));
        let hi = points.iter().fold(Point::new(f64::MIN, f64::MIN), |a, p| Point::new(a.x.max(p.x), a.y.max(p.y)));
        let ext = hi - lo;
        let side = ext.x.max(ext.y);
        // A flat hull still gets some height.
        let half = Point::new(ext.x.max(0.25 * side), ext.y.max(0.25 * side)) * 2.0;
        let mid = lo.midpoint(hi);
        Self { lo: mid - half, hi: mid + half, scale: WIDTH / (2.0 * half.x) }
    }

    fn height(&self) -> f64 {
        (self.hi.y - self.lo.y) * self.scale
    }

    /// Long enough to leave the viewport from anywhere inside it.
    fn far(&self) -> f64 {
        4.0 * (self.hi - self.lo).norm()
    }

    fn px(&self, p: Point) -> String {
        let x = (p.x - self.lo.x) * self.scale;
        let y = (self.hi.y - p.y) * self.scale;
        format!("{} {}", num(x), num(y))
    }
}

fn num(v: f64) -> String {
    let s = format!("{v:.2}");
    if s == "-0.00" {
        "0.00".into()
    } else {
        s
    }
}

fn arc_ends(center: Point, radius: f64, start: f64, end: f64) -> (Point, Point) {
    (center + Point::new(start.cos(), start.sin()) * radius, center + Point::new(end.cos(), end.sin()) * radius)
}

/// Counterclockwise arc; the y flip turns it into a negative-sweep SVG arc.
fn arc_command(v: &View, radius: f64, start: f64, end: f64, to: Point) -> String {
    let large = if end - start > std::f64::consts::PI { 1 } else { 0 };
    let r = num(radius * v.scale);
    format!("A {r} {r} 0 {large} 0 {}", v.px(to))
}

/// Closed path for one shape given its boundary pieces, or `None` when the
/// shape has no area.
fn shape_path(v: &View, pieces: &[BoundaryPiece]) -> Option<String> {
    match pieces {
        [BoundaryPiece::Arc { center, radius, start_angle, end_angle }, BoundaryPiece::Segment { .. }] => {
            let (a, b) = arc_ends(*center, *radius, *start_angle, *end_angle);
            Some(format!("M {} {} Z", v.px(a), arc_command(v, *radius, *start_angle, *end_angle, b)))
        }
        [BoundaryPiece::Line { point, direction }] => {
            let (d, left) = (*direction * v.far(), direction.perp() * v.far());
            let corners = [*point - d, *point + d, *point + d + left, *point - d + left];
            Some(format!(
                "M {} L {} L {} L {} Z",
                v.px(corners[0]),
                v.px(corners[1]),
                v.px(corners[2]),
                v.px(corners[3])
            ))
        }
        segs if segs.len() >= 3 && segs.iter().all(|s| matches!(s, BoundaryPiece::Segment { .. })) => {
            let mut d = String::new();
            for (k, s) in segs.iter().enumerate() {
                if let BoundaryPiece::Segment { a, .. } = s {
                    let _ = write!(d, "{} {} ", if k == 0 { "M" } else { "L" }, v.px(*a));
                }
            }
            d.push('Z');
            Some(d)
        }
        _ => None,
    }
}

/// Open path tracing a piece.
fn piece_path(v: &View, piece: &BoundaryPiece) -> String {
    match *piece {
        BoundaryPiece::Arc { center, radius, start_angle, end_angle } => {
            let (a, b) = arc_ends(center, radius, start_angle, end_angle);
            format!("M {} {}", v.px(a), arc_command(v, radius, start_angle, end_angle, b))
        }
        BoundaryPiece::Segment { a, b } => format!("M {} L {}", v.px(a), v.px(b)),
        BoundaryPiece::Line { point, direction } => {
            let d = direction * v.far();
            format!("M {} L {}", v.px(point - d), v.px(point + d))
        }
    }
}

fn color(label: &RegionLabel) -> &'static str {
    match label {
        RegionLabel::Node(_) => "#9ecae1",
        RegionLabel::Edge(_) | RegionLabel::SplitEdge(_) => "#fdd49e",
        RegionLabel::Infinity => "#d9d9d9",
    }
}

fn header(out: &mut String, v: &View) {
    let (w, h) = (num(WIDTH), num(v.height()));
    let _ = writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#);
    let _ = writeln!(out, r#"<rect x="0" y="0" width="{w}" height="{h}" fill="white"/>"#);
}

fn graph_layers(out: &mut String, v: &View, graph: &FvbGraph, p: Option<Point>) {
    let sites = graph.sites().original();
    let hull = graph.hull().points(sites);
    let mut d = String::new();
    for (k, h) in hull.iter().enumerate() {
        let _ = write!(d, "{} {} ", if k == 0 { "M" } else { "L" }, v.px(*h));
    }
    d.push('Z');
    let _ = writeln!(out, r##"<path d="{d}" fill="none" stroke="#000" stroke-width="1.2"/>"##);

    for e in graph.edges() {
        let Some(a) = graph.node_point_original(e.start) else { continue };
        let b = graph.node_point_original(e.end).unwrap_or(a + e.direction * v.far());
        let _ = writeln!(
            out,
            r##"<path d="M {} L {}" fill="none" stroke="#08306b" stroke-width="1.5" stroke-dasharray="10 4 2 4"/>"##,
            v.px(a),
            v.px(b)
        );
    }
    for n in graph.nodes() {
        if let Some(q) = graph.node_point_original(n.id) {
            let _ = writeln!(
                out,
                r##"<circle cx="{}" cy="{}" r="2.5" fill="#08306b"/>"##,
                num((q.x - v.lo.x) * v.scale),
                num((v.hi.y - q.y) * v.scale)
            );
        }
    }
    for s in sites {
        let _ = writeln!(
            out,
            r##"<circle cx="{}" cy="{}" r="3.5" fill="#000"/>"##,
            num((s.x - v.lo.x) * v.scale),
            num((v.hi.y - s.y) * v.scale)
        );
    }
    if let Some(q) = p {
        let _ = writeln!(
            out,
            r##"<circle cx="{}" cy="{}" r="4" fill="#cb181d"/>"##,
            num((q.x - v.lo.x) * v.scale),
            num((v.hi.y - q.y) * v.scale)
        );
    }
}

fn view_for(graph: &FvbGraph) -> View {
    View::new(&graph.hull().points(graph.sites().original()))
}

/// Boundary graph, hull, sites and enclosing circle.
pub fn render_fvd(graph: &FvbGraph, p: Option<Point>) -> String {
    let v = view_for(graph);
    let mut out = String::new();
    header(&mut out, &v);
    let mec = graph.mec();
    let _ = writeln!(
        out,
        r##"<circle cx="{}" cy="{}" r="{}" fill="none" stroke="#999" stroke-width="1" stroke-dasharray="2 3"/>"##,
        num((mec.center.x - v.lo.x) * v.scale),
        num((v.hi.y - mec.center.y) * v.scale),
        num(mec.radius * v.scale)
    );
    graph_layers(&mut out, &v, graph, p);
    out.push_str("</svg>\n");
    out
}

/// Filled regions of the plane division with the boundary graph on top.
pub fn render_regions(graph: &FvbGraph, div: &PlaneDivision, p: Option<Point>) -> String {
    let v = view_for(graph);
    let t = div.transform();
    let (w, h) = (num(WIDTH), num(v.height()));
    let mut out = String::new();
    header(&mut out, &v);
    out.push_str("<defs>\n");
    for (k, r) in div.regions.iter().enumerate() {
        let _ =
            writeln!(out, r#"<mask id="region{k}" maskUnits="userSpaceOnUse" x="0" y="0" width="{w}" height="{h}">"#);
        if r.is_unbounded_complement() {
            let _ = writeln!(out, r#"<rect x="0" y="0" width="{w}" height="{h}" fill="white"/>"#);
        } else if let Some(d) = shape_path(&v, &r.outer_boundary(t)) {
            let _ = writeln!(out, r#"<path d="{d}" fill="white"/>"#);
        }
        for hole in r.hole_boundaries(t) {
            if let Some(d) = shape_path(&v, &hole) {
                let _ = writeln!(out, r#"<path d="{d}" fill="black"/>"#);
            }
        }
        out.push_str("</mask>\n");
    }
    out.push_str("</defs>\n");
    for (k, r) in div.regions.iter().enumerate() {
        let _ = writeln!(
            out,
            r#"<rect x="0" y="0" width="{w}" height="{h}" fill="{}" fill-opacity="0.8" mask="url(#region{k})"/>"#,
            color(&r.label)
        );
    }
    for r in &div.regions {
        for piece in &r.boundary {
            let _ = writeln!(
                out,
                r##"<path d="{}" fill="none" stroke="#636363" stroke-width="0.8"/>"##,
                piece_path(&v, piece)
            );
        }
    }
    graph_layers(&mut out, &v, graph, p);
    out.push_str("</svg>\n");
    out
}
