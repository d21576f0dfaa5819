//! Standard graphs: exact construction and verification.
//!
//! A standard graph is three circular arcs or segments meeting at one
//! interior vertex at 120 degrees, each reaching the unit circle
//! orthogonally, with curvatures summing to zero. The construction here
//! extends a two-region splitter: map the disk to the upper half-plane
//! sending one splitter endpoint to infinity, where the splitter becomes a
//! vertical line; the two new edges become circles of equal radius centered
//! on the real axis through the image of the chosen vertex, at 120 degrees
//! to the line. Mapping back yields the unique completion.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use crate::error::Error;
use crate::geometry::{
    arc_polygon_area, disk_to_halfplane, meets_unit_circle_orthogonally, unit_circle_arcs, ArcEdge,
    ArcPolygon, Point, SEGMENT_CURVATURE_EPS, TOL_GEOM,
};
use crate::graph::{
    Edge, EdgeId, PartitionGraph, Region, RegionId, Vertex, VertexId, VertexKind, Walk,
};
use crate::Result;

const SQRT3: f64 = 1.732_050_807_568_877_2;

/// An arc of constant curvature meeting the unit circle orthogonally at both
/// endpoints, splitting the disk into two regions. Oriented p0 (south) →
/// p1 (north) with region 1 on the left (west); the stored curvature is
/// h12 = p1_pressure − p2_pressure.
#[derive(Clone, Copy, Debug)]
pub struct TwoRegionSplitter {
    pub edge: ArcEdge,
}

impl TwoRegionSplitter {
    pub fn curvature(&self) -> f64 {
        self.edge.h
    }

    /// Area of region 1 (the west side).
    pub fn area_region1(&self) -> f64 {
        let arcs = unit_circle_arcs(self.edge.p1, self.edge.p0).expect("splitter endpoints");
        let mut cycle = vec![self.edge];
        cycle.extend(arcs);
        arc_polygon_area(&ArcPolygon::new(cycle).expect("splitter cycle"))
    }

    pub fn length(&self) -> f64 {
        self.edge.length()
    }

    /// Two-region partition graph (region 1 west, region 2 east).
    pub fn to_partition_graph(&self) -> Result<PartitionGraph> {
        let vertices = vec![
            Vertex {
                point: self.edge.p0,
                kind: VertexKind::Boundary,
            },
            Vertex {
                point: self.edge.p1,
                kind: VertexKind::Boundary,
            },
        ];
        let edges = vec![Edge {
            arc: self.edge,
            v0: VertexId(0),
            v1: VertexId(1),
            left: RegionId(0),
            right: RegionId(1),
        }];
        let regions = vec![
            Region::new(
                vec![vec![
                    Walk::Edge {
                        id: EdgeId(0),
                        forward: true,
                    },
                    Walk::BoundaryArc {
                        from: VertexId(1),
                        to: VertexId(0),
                    },
                ]],
                None,
            ),
            Region::new(
                vec![vec![
                    Walk::Edge {
                        id: EdgeId(0),
                        forward: false,
                    },
                    Walk::BoundaryArc {
                        from: VertexId(0),
                        to: VertexId(1),
                    },
                ]],
                None,
            ),
        ];
        PartitionGraph::new(vertices, edges, regions)
    }
}

/// The unique (up to rotation) splitter of curvature `h`, placed with its
/// endpoints symmetric about the x-axis and region 1 on the west. `h = 0`
/// gives the vertical diameter; `h → ±∞` shrinks one of the two regions.
pub fn splitter_from_curvature(h: f64) -> Result<TwoRegionSplitter> {
    if !h.is_finite() {
        return Err(Error::domain("splitter curvature must be finite"));
    }
    if h.abs() < SEGMENT_CURVATURE_EPS {
        let edge = ArcEdge::segment(Point::new(0.0, -1.0), Point::new(0.0, 1.0))?;
        return Ok(TwoRegionSplitter { edge });
    }
    let r = 1.0 / h.abs();
    let cx = (1.0 + r * r).sqrt();
    // orthogonality: |center|^2 = 1 + r^2. For h > 0 region 1 is the cap
    // around the center (west side); for h < 0 the cap lies east and region
    // 1 is the large west side. Either way the arc is the portion of the
    // circle inside the disk, endpoints at x = ±1/cx.
    let sign = if h > 0.0 { -1.0 } else { 1.0 };
    let x = sign / cx;
    // 1 − x² = r²/(1+r²) exactly; avoids cancellation for tiny caps
    let y = r / cx;
    let edge = ArcEdge::new(Point::new(x, -y), Point::new(x, y), h)?;
    debug_assert!(edge.center().unwrap().dist(Point::new(sign * cx, 0.0)) < 1e-9 * cx);
    Ok(TwoRegionSplitter { edge })
}

/// A standard graph. Edge orientation convention: each edge runs from its
/// boundary vertex to the interior vertex with region i on the left for
/// edge c_ij, so stored curvatures are exactly h12, h23, h31.
#[derive(Clone, Copy, Debug)]
pub struct StandardGraph {
    pub c12: ArcEdge,
    pub c23: ArcEdge,
    pub c31: ArcEdge,
    pub interior_vertex: Point,
    /// Boundary endpoints of [c12, c23, c31].
    pub boundary_vertices: [Point; 3],
    /// Zero-sum pressures (p1, p2, p3).
    pub pressures: [f64; 3],
}

/// Completes a splitter to the unique standard graph with interior vertex
/// `v` on the splitter. The kept part of the splitter runs from its p0
/// endpoint to `v`; region 3 grows on the p1 side.
pub fn complete_from_edge(s: &TwoRegionSplitter, v: Point) -> Result<StandardGraph> {
    if v.norm() >= 1.0 - TOL_GEOM {
        return Err(Error::domain(
            "degenerate vertex: v must be strictly interior to the disk",
        ));
    }
    let (_, dist) = s.edge.closest(v);
    if dist > 1e-7 {
        return Err(Error::domain(format!(
            "vertex is {dist} away from the splitter"
        )));
    }
    let q = s.edge.p0;
    let f = disk_to_halfplane(q)?;
    let p = f.apply_point(v);
    let (x_l, d) = (p.x, p.y);
    if !d.is_finite() || d <= 0.0 {
        return Err(Error::domain(format!(
            "half-plane height must be positive, got {d}"
        )));
    }

    // two circles of radius 2d/√3 centered on the real axis through the
    // image of v, meeting the vertical line at 120 degrees
    let radius = 2.0 * d / SQRT3;
    let off = d / SQRT3;
    let finv = f.inverse();
    let hp = |x: f64, y: f64| Point::new(x, y);

    // edge toward region 1 (arc from P clockwise to the axis crossing east
    // of the line): center west of the line
    let c31_center = hp(x_l - off, 0.0);
    let c31_end = hp(x_l + off, 0.0);
    let c31_mid = c31_center + Point::new((PI / 6.0).cos(), (PI / 6.0).sin()).scale(radius);
    // edge toward region 2, mirror image
    let c23_center = hp(x_l + off, 0.0);
    let c23_end = hp(x_l - off, 0.0);
    let c23_mid =
        c23_center + Point::new((5.0 * PI / 6.0).cos(), (5.0 * PI / 6.0).sin()).scale(radius);

    let b1 = finv.apply_point(c31_end);
    let b2 = finv.apply_point(c23_end);
    let v_to_b1 = ArcEdge::through_three_points(v, finv.apply_point(c31_mid), b1)?;
    let v_to_b2 = ArcEdge::through_three_points(v, finv.apply_point(c23_mid), b2)?;
    let c31 = v_to_b1.reversed(); // left = region 3
    let c23 = v_to_b2.reversed(); // left = region 2
    let c12 = ArcEdge::new(q, v, s.edge.h)?;

    let h12 = c12.h;
    let h23 = c23.h;
    let h31 = c31.h;
    let p1 = (2.0 * h12 + h23) / 3.0;
    let p2 = (h23 - h12) / 3.0;
    let p3 = -(h12 + 2.0 * h23) / 3.0;
    // reconstruction error scales with the curvature magnitude near the
    // degenerate ends of the sweep
    let scale = 1.0 + h23.abs().max(h31.abs());
    debug_assert!(
        (h12 + h23 + h31).abs() < 1e-8 * scale,
        "balancing: {} at curvature scale {}",
        h12 + h23 + h31,
        scale
    );

    Ok(StandardGraph {
        c12,
        c23,
        c31,
        interior_vertex: v,
        boundary_vertices: [q, b2, b1],
        pressures: [p1, p2, p3],
    })
}

/// Geodesic curvatures (h31, h32) of the completion edges, w.r.t. the
/// normals pointing into region 3, in terms of the height `d` of the image
/// of the vertex over the real axis. `x` is the splitter curvature h12
/// (forced by the balancing condition h32 − h31 = h12).
pub fn curvatures_from_halfplane(d: f64, x: f64) -> Result<(f64, f64)> {
    if d.is_nan() || d <= 0.0 {
        return Err(Error::domain(format!(
            "half-plane height must be positive, got {d}"
        )));
    }
    let common = SQRT3 * (1.0 + x * x) / d;
    let h31 = 0.25 * (-SQRT3 * d - 2.0 * x + common);
    let h32 = 0.25 * (-SQRT3 * d + 2.0 * x + common);
    Ok((h31, h32))
}

/// Height of the interior vertex over the real axis in the half-plane model
/// anchored at the kept boundary endpoint. Exposed for validating the
/// closed-form curvatures against the construction.
pub fn halfplane_height(s: &TwoRegionSplitter, v: Point) -> Result<f64> {
    let f = disk_to_halfplane(s.edge.p0)?;
    Ok(f.apply_point(v).y)
}

/// Unique zero-sum pressures of a balanced standard graph.
pub fn pressures_of(g: &StandardGraph) -> Result<(f64, f64, f64)> {
    let balance = g.c12.h + g.c23.h + g.c31.h;
    let scale = 1.0 + g.c23.h.abs().max(g.c31.h.abs());
    if balance.abs() > 1e-7 * scale {
        return Err(Error::Consistency(format!(
            "curvatures are not balanced: h12+h23+h31 = {balance}"
        )));
    }
    let h12 = g.c12.h;
    let h23 = g.c23.h;
    Ok((
        (2.0 * h12 + h23) / 3.0,
        (h23 - h12) / 3.0,
        -(h12 + 2.0 * h23) / 3.0,
    ))
}

impl StandardGraph {
    pub fn perimeter(&self) -> f64 {
        self.c12.length() + self.c23.length() + self.c31.length()
    }

    /// Areas (A1, A2, A3) of the three regions.
    pub fn areas(&self) -> Result<[f64; 3]> {
        let [q, b2, b1] = self.boundary_vertices;
        let v = self.interior_vertex;
        let area = |edges: Vec<ArcEdge>, arc_from: Point, arc_to: Point| -> Result<f64> {
            let mut cycle = edges;
            cycle.extend(unit_circle_arcs(arc_from, arc_to)?);
            Ok(arc_polygon_area(&ArcPolygon::new(cycle)?))
        };
        let _ = v;
        let a1 = area(vec![self.c12, self.c31.reversed()], b1, q)?;
        let a2 = area(vec![self.c23, self.c12.reversed()], q, b2)?;
        let a3 = area(vec![self.c31, self.c23.reversed()], b2, b1)?;
        Ok([a1, a2, a3])
    }

    pub fn rotated(&self, angle: f64) -> StandardGraph {
        StandardGraph {
            c12: self.c12.rotated(angle),
            c23: self.c23.rotated(angle),
            c31: self.c31.rotated(angle),
            interior_vertex: self.interior_vertex.rotated(angle),
            boundary_vertices: self.boundary_vertices.map(|p| p.rotated(angle)),
            pressures: self.pressures,
        }
    }

    /// Three-region partition graph (regions indexed 0, 1, 2 = R1, R2, R3).
    pub fn to_partition_graph(&self) -> Result<PartitionGraph> {
        let [q, b2, b1] = self.boundary_vertices;
        let vertices = vec![
            Vertex {
                point: self.interior_vertex,
                kind: VertexKind::Interior,
            },
            Vertex {
                point: q,
                kind: VertexKind::Boundary,
            },
            Vertex {
                point: b2,
                kind: VertexKind::Boundary,
            },
            Vertex {
                point: b1,
                kind: VertexKind::Boundary,
            },
        ];
        let edges = vec![
            Edge {
                arc: self.c12,
                v0: VertexId(1),
                v1: VertexId(0),
                left: RegionId(0),
                right: RegionId(1),
            },
            Edge {
                arc: self.c23,
                v0: VertexId(2),
                v1: VertexId(0),
                left: RegionId(1),
                right: RegionId(2),
            },
            Edge {
                arc: self.c31,
                v0: VertexId(3),
                v1: VertexId(0),
                left: RegionId(2),
                right: RegionId(0),
            },
        ];
        let areas = self.areas()?;
        let fwd = |id: usize| Walk::Edge {
            id: EdgeId(id),
            forward: true,
        };
        let bwd = |id: usize| Walk::Edge {
            id: EdgeId(id),
            forward: false,
        };
        let arc = |from: usize, to: usize| Walk::BoundaryArc {
            from: VertexId(from),
            to: VertexId(to),
        };
        let regions = vec![
            Region::new(vec![vec![fwd(0), bwd(2), arc(3, 1)]], Some(areas[0])),
            Region::new(vec![vec![fwd(1), bwd(0), arc(1, 2)]], Some(areas[1])),
            Region::new(vec![vec![fwd(2), bwd(1), arc(2, 3)]], Some(areas[2])),
        ];
        PartitionGraph::new(vertices, edges, regions)
    }
}

/// Stationarity diagnostics for a partition graph: 120-degree junction
/// residuals, curvature balancing at junctions, boundary orthogonality, and
/// per-edge curvature constancy (zero by construction for exact arcs).
#[derive(Clone, Debug)]
pub struct StationarityReport {
    pub vertex_angle_residuals: Vec<(VertexId, f64)>,
    pub balancing_residuals: Vec<(VertexId, f64)>,
    pub orthogonality_residuals: Vec<(VertexId, f64)>,
    pub curvature_constancy_residuals: Vec<(EdgeId, f64)>,
}

impl StationarityReport {
    pub fn max_residual(&self) -> f64 {
        let m = |v: &[(_, f64)]| v.iter().map(|x| x.1).fold(0.0, f64::max);
        self.vertex_angle_residuals
            .iter()
            .map(|x| x.1)
            .fold(0.0, f64::max)
            .max(m(&self.balancing_residuals))
            .max(m(&self.orthogonality_residuals))
            .max(
                self.curvature_constancy_residuals
                    .iter()
                    .map(|x| x.1)
                    .fold(0.0, f64::max),
            )
    }

    pub fn is_stationary(&self, tol: f64) -> bool {
        self.max_residual() < tol
    }
}

/// Checks the stationarity conditions on a partition graph and reports all
/// residuals.
pub fn check_stationary(g: &PartitionGraph) -> StationarityReport {
    let mut report = StationarityReport {
        vertex_angle_residuals: Vec::new(),
        balancing_residuals: Vec::new(),
        orthogonality_residuals: Vec::new(),
        curvature_constancy_residuals: Vec::new(),
    };
    for (vi, v) in g.vertices.iter().enumerate() {
        let vid = VertexId(vi);
        match v.kind {
            VertexKind::Interior => {
                let inc = g.incident(vid);
                let mut angles: Vec<f64> = inc
                    .iter()
                    .map(|i| {
                        let t = g.departure_tangent(*i);
                        t.y.atan2(t.x)
                    })
                    .collect();
                angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
                let mut worst: f64 = 0.0;
                for k in 0..angles.len() {
                    let next = angles[(k + 1) % angles.len()];
                    let gap = (next - angles[k]).rem_euclid(TAU);
                    worst = worst.max((gap - TAU / 3.0).abs());
                }
                report.vertex_angle_residuals.push((vid, worst));

                let balance: f64 = inc
                    .iter()
                    .map(|i| {
                        let h = g.edges[i.edge.0].arc.h;
                        if i.departs {
                            h
                        } else {
                            -h
                        }
                    })
                    .sum();
                report.balancing_residuals.push((vid, balance.abs()));
            }
            VertexKind::Boundary => {
                let inc = g.incident(vid);
                let res = inc
                    .first()
                    .map(|i| {
                        meets_unit_circle_orthogonally(&g.edges[i.edge.0].arc).unwrap_or(FRAC_PI_2)
                    })
                    .unwrap_or(FRAC_PI_2);
                report.orthogonality_residuals.push((vid, res));
            }
        }
    }
    for ei in 0..g.edges.len() {
        // exact arcs have constant curvature by representation
        report.curvature_constancy_residuals.push((EdgeId(ei), 0.0));
    }
    report
}
