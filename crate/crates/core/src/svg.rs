//! Deterministic SVG rendering of partitions: the unit disk mapped onto a
//! 512x512 viewport (y axis flipped), exact arcs emitted as native
//! elliptical-arc path segments, polylines as line chains. Coordinates are
//! written with fixed precision so identical inputs give byte-identical
//! output.

use crate::evolver::DiscreteGraph;
use crate::geometry::{ArcEdge, Point};
use crate::graph::{PartitionGraph, RegionId, Walk};

const VIEW: f64 = 512.0;
const MARGIN: f64 = 10.0;

fn map(p: Point) -> (f64, f64) {
    let scale = (VIEW - 2.0 * MARGIN) / 2.0;
    (VIEW / 2.0 + scale * p.x, VIEW / 2.0 - scale * p.y)
}

fn fmt(v: f64) -> String {
    format!("{:.6}", v)
}

fn arc_path(e: &ArcEdge) -> String {
    let (x0, y0) = map(e.p0);
    let (x1, y1) = map(e.p1);
    if e.is_segment() {
        return format!("M {} {} L {} {}", fmt(x0), fmt(y0), fmt(x1), fmt(y1));
    }
    let scale = (VIEW - 2.0 * MARGIN) / 2.0;
    let r = scale * e.radius();
    let large = if e.central_angle().abs() > std::f64::consts::PI {
        1
    } else {
        0
    };
    // the y flip turns counterclockwise (h > 0) into sweep=0
    let sweep = if e.h > 0.0 { 0 } else { 1 };
    format!(
        "M {} {} A {} {} 0 {} {} {} {}",
        fmt(x0),
        fmt(y0),
        fmt(r),
        fmt(r),
        large,
        sweep,
        fmt(x1),
        fmt(y1)
    )
}

fn polyline_path(points: &[Point]) -> String {
    let mut out = String::new();
    for (k, p) in points.iter().enumerate() {
        let (x, y) = map(*p);
        if k == 0 {
            out.push_str(&format!("M {} {}", fmt(x), fmt(y)));
        } else {
            out.push_str(&format!(" L {} {}", fmt(x), fmt(y)));
        }
    }
    out
}

const REGION_COLORS: [&str; 6] = [
    "#7eb3d9", "#e8a87c", "#9ccf9c", "#d9a8d0", "#d9d07e", "#a8c8d9",
];

fn header() -> String {
    let mut s = String::new();
    s.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{v}\" height=\"{v}\" viewBox=\"0 0 {v} {v}\">\n",
        v = VIEW
    ));
    let (cx, cy) = (VIEW / 2.0, VIEW / 2.0);
    let r = (VIEW - 2.0 * MARGIN) / 2.0;
    s.push_str(&format!(
        "  <circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1.5\"/>\n",
        fmt(cx),
        fmt(cy),
        fmt(r)
    ));
    s
}

/// Renders an exact graph: edges as arcs plus a label at each region's
/// first-component centroid-ish point.
pub fn render_partition_graph(g: &PartitionGraph) -> String {
    let mut s = header();
    for e in &g.edges {
        s.push_str(&format!(
            "  <path d=\"{}\" fill=\"none\" stroke=\"#111111\" stroke-width=\"2\"/>\n",
            arc_path(&e.arc)
        ));
    }
    for (ri, _) in g.regions.iter().enumerate() {
        if let Some(p) = region_label_point(g, RegionId(ri)) {
            let (x, y) = map(p);
            s.push_str(&format!(
                "  <text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"18\" fill=\"{}\" text-anchor=\"middle\">{}</text>\n",
                fmt(x),
                fmt(y),
                REGION_COLORS[ri % REGION_COLORS.len()],
                ri + 1
            ));
        }
    }
    s.push_str("</svg>\n");
    s
}

/// Rough interior point of a region: the average of its first component's
/// sampled boundary, nudged fully inside by bisecting toward the disk
/// center when it escapes.
fn region_label_point(g: &PartitionGraph, region: RegionId) -> Option<Point> {
    let cycle = g.regions[region.0].components.first()?;
    let mut acc = Point::new(0.0, 0.0);
    let mut count: f64 = 0.0;
    for w in cycle {
        match w {
            Walk::Edge { id, .. } => {
                let arc = &g.edges[id.0].arc;
                for k in 0..4 {
                    let p = arc.point_at(arc.length() * k as f64 / 4.0);
                    acc = acc + p;
                    count += 1.0;
                }
            }
            Walk::BoundaryArc { from, to } => {
                acc = acc + g.vertices[from.0].point + g.vertices[to.0].point;
                count += 2.0;
            }
        }
    }
    Some(acc.scale(1.0 / count.max(1.0)))
}

/// Renders a discrete polyline graph.
pub fn render_discrete_graph(g: &DiscreteGraph) -> String {
    let mut s = header();
    for ci in 0..g.chains.len() {
        s.push_str(&format!(
            "  <path d=\"{}\" fill=\"none\" stroke=\"#111111\" stroke-width=\"2\"/>\n",
            polyline_path(&g.chain_polyline(ci))
        ));
    }
    for ji in 0..g.junctions.len() {
        let (x, y) = map(g.junctions[ji].position());
        s.push_str(&format!(
            "  <circle cx=\"{}\" cy=\"{}\" r=\"3\" fill=\"#c0392b\"/>\n",
            fmt(x),
            fmt(y)
        ));
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::{solve_three_areas, AreaTargets};

    #[test]
    fn svg_is_deterministic_and_has_one_path_per_edge() {
        let t = AreaTargets::new(vec![2.0, 1.0, std::f64::consts::PI - 3.0]).unwrap();
        let g = solve_three_areas(&t).unwrap().to_partition_graph().unwrap();
        let a = render_partition_graph(&g);
        let b = render_partition_graph(&g);
        assert_eq!(a, b, "byte-identical output for identical input");
        assert_eq!(a.matches("<path").count(), 3, "three interior edges");
        assert_eq!(a.matches("<circle").count(), 1, "the disk boundary");
    }
}
