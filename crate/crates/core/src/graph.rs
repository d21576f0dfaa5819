//! Partition graphs: vertices, oriented arc edges, region incidence.
//!
//! An admissible graph decomposes the open unit disk into regions. Interior
//! vertices have degree 3, boundary vertices degree 1. Each edge stores its
//! exact arc together with the regions on its left and right; the curvature
//! convention is `h(left, right) = stored h`, so pressure differences read
//! directly off edges.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::geometry::{arc_polygon_area, unit_circle_arcs, ArcEdge, ArcPolygon, Point, TOL_GEOM};
use crate::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VertexId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EdgeId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RegionId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum VertexKind {
    Interior,
    Boundary,
}

#[derive(Clone, Copy, Debug)]
pub struct Vertex {
    pub point: Point,
    pub kind: VertexKind,
}

#[derive(Clone, Copy, Debug)]
pub struct Edge {
    pub arc: ArcEdge,
    pub v0: VertexId,
    pub v1: VertexId,
    /// Region on the left of p0→p1 travel; the stored curvature is taken
    /// with respect to the normal pointing into this region.
    pub left: RegionId,
    pub right: RegionId,
}

impl Edge {
    /// Curvature with respect to the normal pointing into `region`.
    pub fn curvature_into(&self, region: RegionId) -> f64 {
        if region == self.left {
            self.arc.h
        } else {
            -self.arc.h
        }
    }
}

/// One step of a region-boundary cycle: an interior edge traversed forward
/// or backward, or a counterclockwise arc of the unit circle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Walk {
    Edge { id: EdgeId, forward: bool },
    BoundaryArc { from: VertexId, to: VertexId },
}

#[derive(Clone, Debug)]
pub struct Region {
    /// Boundary cycles of the connected components, each traversed
    /// counterclockwise (region on the left).
    pub components: Vec<Vec<Walk>>,
    pub target_area: Option<f64>,
    /// Zero-sum-gauge pressure, fit from edge curvatures at construction.
    pub pressure: f64,
}

impl Region {
    pub fn new(components: Vec<Vec<Walk>>, target_area: Option<f64>) -> Region {
        Region {
            components,
            target_area,
            pressure: 0.0,
        }
    }
}

/// Incidence of an edge at a vertex.
#[derive(Clone, Copy, Debug)]
pub struct Incidence {
    pub edge: EdgeId,
    /// True if the edge's p0 end sits at the vertex (the edge departs).
    pub departs: bool,
}

#[derive(Clone, Debug)]
pub struct PartitionGraph {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
    pub regions: Vec<Region>,
    /// Max |p_left − p_right − h| over edges after the pressure fit.
    pub pressure_residual: f64,
}

impl PartitionGraph {
    /// Builds and validates a partition graph. Pressures are fit from edge
    /// curvatures in the zero-sum gauge.
    pub fn new(vertices: Vec<Vertex>, edges: Vec<Edge>, mut regions: Vec<Region>) -> Result<Self> {
        let mut g = PartitionGraph {
            vertices,
            edges,
            regions: Vec::new(),
            pressure_residual: 0.0,
        };
        g.validate_incidence()?;
        for (ri, r) in regions.iter().enumerate() {
            for cycle in &r.components {
                g.check_cycle(RegionId(ri), cycle)?;
            }
        }
        let (pressures, residual) = g.fit_pressures(regions.len())?;
        for (r, p) in regions.iter_mut().zip(pressures.iter()) {
            r.pressure = *p;
        }
        g.pressure_residual = residual;
        g.regions = regions;

        let total: f64 = (0..g.regions.len())
            .map(|i| g.region_area(RegionId(i)))
            .sum();
        if (total - std::f64::consts::PI).abs() > 1e-9 {
            return Err(Error::topology(format!(
                "region areas sum to {total}, expected pi"
            )));
        }
        Ok(g)
    }

    fn validate_incidence(&self) -> Result<()> {
        let mut degree = vec![0usize; self.vertices.len()];
        for (ei, e) in self.edges.iter().enumerate() {
            for (vid, pt) in [(e.v0, e.arc.p0), (e.v1, e.arc.p1)] {
                let v = self.vertices.get(vid.0).ok_or_else(|| {
                    Error::topology(format!("edge {ei}: vertex {} missing", vid.0))
                })?;
                if v.point.dist(pt) > 1e-7 {
                    return Err(Error::topology(format!(
                        "edge {ei}: arc endpoint does not match vertex {}",
                        vid.0
                    )));
                }
                degree[vid.0] += 1;
            }
            if e.left == e.right {
                return Err(Error::topology(format!(
                    "edge {ei} separates a region from itself"
                )));
            }
        }
        for (vi, v) in self.vertices.iter().enumerate() {
            match v.kind {
                VertexKind::Interior => {
                    if degree[vi] != 3 {
                        return Err(Error::topology(format!(
                            "interior vertex {vi} has degree {}, expected 3",
                            degree[vi]
                        )));
                    }
                    if v.point.norm() >= 1.0 - TOL_GEOM {
                        return Err(Error::topology(format!(
                            "interior vertex {vi} lies on the boundary"
                        )));
                    }
                }
                VertexKind::Boundary => {
                    if degree[vi] != 1 {
                        return Err(Error::topology(format!(
                            "boundary vertex {vi} has degree {}, expected 1",
                            degree[vi]
                        )));
                    }
                    if !v.point.on_unit_circle() {
                        return Err(Error::topology(format!(
                            "boundary vertex {vi} is not on the unit circle"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    fn check_cycle(&self, region: RegionId, cycle: &[Walk]) -> Result<()> {
        if cycle.is_empty() {
            return Err(Error::topology("empty component cycle"));
        }
        for (k, w) in cycle.iter().enumerate() {
            let next = &cycle[(k + 1) % cycle.len()];
            let end = self.walk_end(w)?;
            let start = self.walk_start(next)?;
            if self.vertices[end.0]
                .point
                .dist(self.vertices[start.0].point)
                > 1e-7
            {
                return Err(Error::topology(format!(
                    "component cycle of region {} breaks between steps {} and {}",
                    region.0,
                    k,
                    (k + 1) % cycle.len()
                )));
            }
            if let Walk::Edge { id, forward } = w {
                let e = &self.edges[id.0];
                let on_left = if *forward { e.left } else { e.right };
                if on_left != region {
                    return Err(Error::topology(format!(
                        "edge {} traversed with region {} on the left, but it bounds {}",
                        id.0, region.0, on_left.0
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn walk_start(&self, w: &Walk) -> Result<VertexId> {
        Ok(match w {
            Walk::Edge { id, forward } => {
                let e = self
                    .edges
                    .get(id.0)
                    .ok_or_else(|| Error::topology(format!("edge {} missing", id.0)))?;
                if *forward {
                    e.v0
                } else {
                    e.v1
                }
            }
            Walk::BoundaryArc { from, .. } => *from,
        })
    }

    pub fn walk_end(&self, w: &Walk) -> Result<VertexId> {
        Ok(match w {
            Walk::Edge { id, forward } => {
                let e = self
                    .edges
                    .get(id.0)
                    .ok_or_else(|| Error::topology(format!("edge {} missing", id.0)))?;
                if *forward {
                    e.v1
                } else {
                    e.v0
                }
            }
            Walk::BoundaryArc { to, .. } => *to,
        })
    }

    /// Arc realization of a component cycle (boundary arcs are split below
    /// the semicircle cap).
    pub fn component_polygon(&self, cycle: &[Walk]) -> Result<ArcPolygon> {
        let mut arcs = Vec::new();
        for w in cycle {
            match w {
                Walk::Edge { id, forward } => {
                    let arc = self.edges[id.0].arc;
                    arcs.push(if *forward { arc } else { arc.reversed() });
                }
                Walk::BoundaryArc { from, to } => {
                    arcs.extend(unit_circle_arcs(
                        self.vertices[from.0].point,
                        self.vertices[to.0].point,
                    )?);
                }
            }
        }
        ArcPolygon::new(arcs)
    }

    pub fn component_area(&self, cycle: &[Walk]) -> f64 {
        self.component_polygon(cycle)
            .map(|p| arc_polygon_area(&p))
            .unwrap_or(f64::NAN)
    }

    /// True when the component does not touch the disk boundary.
    pub fn component_is_interior(&self, cycle: &[Walk]) -> bool {
        cycle.iter().all(|w| matches!(w, Walk::Edge { .. }))
    }

    /// Edge count of an m-component; a maximal boundary arc counts as one edge.
    pub fn component_edge_count(&self, cycle: &[Walk]) -> usize {
        cycle.len()
    }

    pub fn region_area(&self, region: RegionId) -> f64 {
        self.regions[region.0]
            .components
            .iter()
            .map(|c| self.component_area(c))
            .sum()
    }

    pub fn areas(&self) -> Vec<f64> {
        (0..self.regions.len())
            .map(|i| self.region_area(RegionId(i)))
            .collect()
    }

    /// Total length of the interior edges (boundary arcs belong to the disk,
    /// not to the graph).
    pub fn perimeter(&self) -> f64 {
        self.edges.iter().map(|e| e.arc.length()).sum()
    }

    pub fn incident(&self, v: VertexId) -> Vec<Incidence> {
        let mut out = Vec::new();
        for (ei, e) in self.edges.iter().enumerate() {
            if e.v0 == v {
                out.push(Incidence {
                    edge: EdgeId(ei),
                    departs: true,
                });
            }
            if e.v1 == v {
                out.push(Incidence {
                    edge: EdgeId(ei),
                    departs: false,
                });
            }
        }
        out
    }

    /// Unit tangent at `v` pointing away from the vertex along the edge.
    pub fn departure_tangent(&self, inc: Incidence) -> Point {
        let e = &self.edges[inc.edge.0];
        if inc.departs {
            e.arc.tangent_at(0.0)
        } else {
            -e.arc.tangent_at(e.arc.length())
        }
    }

    /// The region not touching edge `e` among the three meeting at interior
    /// vertex `v`.
    pub fn third_region_at(&self, v: VertexId, e: EdgeId) -> Result<RegionId> {
        let (l, r) = {
            let edge = &self.edges[e.0];
            (edge.left, edge.right)
        };
        for inc in self.incident(v) {
            if inc.edge == e {
                continue;
            }
            let other = &self.edges[inc.edge.0];
            for cand in [other.left, other.right] {
                if cand != l && cand != r {
                    return Ok(cand);
                }
            }
        }
        Err(Error::topology(format!(
            "no third region at vertex {} for edge {}",
            v.0, e.0
        )))
    }

    /// Least-squares pressures in the zero-sum gauge; returns (pressures,
    /// max residual of h = p_left − p_right).
    fn fit_pressures(&self, n_regions: usize) -> Result<(Vec<f64>, f64)> {
        if n_regions == 0 {
            return Err(Error::topology("graph has no regions"));
        }
        let rows = self.edges.len() + 1;
        let mut a = nalgebra::DMatrix::<f64>::zeros(rows, n_regions);
        let mut b = nalgebra::DVector::<f64>::zeros(rows);
        for (ei, e) in self.edges.iter().enumerate() {
            if e.left.0 >= n_regions || e.right.0 >= n_regions {
                return Err(Error::topology(format!(
                    "edge {ei} references missing region"
                )));
            }
            a[(ei, e.left.0)] = 1.0;
            a[(ei, e.right.0)] = -1.0;
            b[ei] = e.arc.h;
        }
        for j in 0..n_regions {
            a[(self.edges.len(), j)] = 1.0;
        }
        let ata = a.transpose() * &a;
        let atb = a.transpose() * b;
        let p = ata
            .lu()
            .solve(&atb)
            .ok_or_else(|| Error::Consistency("pressure system is singular".into()))?;
        let mut residual: f64 = 0.0;
        for e in &self.edges {
            residual = residual.max((p[e.left.0] - p[e.right.0] - e.arc.h).abs());
        }
        Ok((p.iter().copied().collect(), residual))
    }

    pub fn rotated(&self, angle: f64) -> PartitionGraph {
        let mut g = self.clone();
        for v in &mut g.vertices {
            v.point = v.point.rotated(angle);
        }
        for e in &mut g.edges {
            e.arc = e.arc.rotated(angle);
        }
        g
    }

    /// Reflection across the x-axis (flips curvature signs; region cycles are
    /// reversed to stay counterclockwise).
    pub fn mirrored_x(&self) -> PartitionGraph {
        let mut g = self.clone();
        for v in &mut g.vertices {
            v.point = v.point.mirrored_x();
        }
        for e in &mut g.edges {
            e.arc = e.arc.mirrored_x();
            std::mem::swap(&mut e.left, &mut e.right);
        }
        for r in &mut g.regions {
            for cycle in &mut r.components {
                cycle.reverse();
                for w in cycle.iter_mut() {
                    match w {
                        Walk::Edge { forward, .. } => *forward = !*forward,
                        Walk::BoundaryArc { from, to } => std::mem::swap(from, to),
                    }
                }
            }
        }
        g
    }

    /// Dense point sample of all edges, for Hausdorff comparisons.
    pub fn sample_points(&self, per_edge: usize) -> Vec<Point> {
        let mut pts = Vec::with_capacity(self.edges.len() * (per_edge + 1));
        for e in &self.edges {
            let len = e.arc.length();
            for k in 0..=per_edge {
                pts.push(e.arc.point_at(len * k as f64 / per_edge as f64));
            }
        }
        pts
    }
}

/// Symmetric Hausdorff distance between two point samples.
pub fn hausdorff(a: &[Point], b: &[Point]) -> f64 {
    let directed = |xs: &[Point], ys: &[Point]| -> f64 {
        xs.iter()
            .map(|x| ys.iter().map(|y| x.dist(*y)).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    };
    directed(a, b).max(directed(b, a))
}

/// Hausdorff distance between two graphs' edge samples after optimizing over
/// rotations and a reflection: congruence is up to rigid motions of the disk.
pub fn hausdorff_up_to_rotation(a: &PartitionGraph, b: &PartitionGraph, per_edge: usize) -> f64 {
    let pa = a.sample_points(per_edge);
    let best_for = |g: &PartitionGraph| -> f64 {
        let pb = g.sample_points(per_edge);
        let eval = |theta: f64| {
            let rotated: Vec<Point> = pb.iter().map(|p| p.rotated(theta)).collect();
            hausdorff(&pa, &rotated)
        };
        let n = 256;
        let mut best = (0.0, f64::INFINITY);
        for k in 0..n {
            let t = std::f64::consts::TAU * k as f64 / n as f64;
            let v = eval(t);
            if v < best.1 {
                best = (t, v);
            }
        }
        let mut lo = best.0 - std::f64::consts::TAU / n as f64;
        let mut hi = best.0 + std::f64::consts::TAU / n as f64;
        let phi = (5f64.sqrt() - 1.0) / 2.0;
        for _ in 0..60 {
            let m1 = hi - phi * (hi - lo);
            let m2 = lo + phi * (hi - lo);
            if eval(m1) < eval(m2) {
                hi = m2;
            } else {
                lo = m1;
            }
        }
        eval(0.5 * (lo + hi)).min(best.1)
    };
    best_for(b).min(best_for(&b.mirrored_x()))
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    /// Two-region graph: vertical diameter splitting the disk in half.
    pub(crate) fn diameter_graph() -> PartitionGraph {
        let south = Point::new(0.0, -1.0);
        let north = Point::new(0.0, 1.0);
        let vertices = vec![
            Vertex {
                point: south,
                kind: VertexKind::Boundary,
            },
            Vertex {
                point: north,
                kind: VertexKind::Boundary,
            },
        ];
        let edges = vec![Edge {
            arc: ArcEdge::segment(south, north).unwrap(),
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
                Some(std::f64::consts::FRAC_PI_2),
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
                Some(std::f64::consts::FRAC_PI_2),
            ),
        ];
        PartitionGraph::new(vertices, edges, regions).unwrap()
    }

    #[test]
    fn diameter_graph_is_valid() {
        let g = diameter_graph();
        let areas = g.areas();
        assert!((areas[0] - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
        assert!((areas[1] - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
        assert!((g.perimeter() - 2.0).abs() < 1e-14);
        assert!(g.pressure_residual < 1e-14);
        assert!(g.regions[0].pressure.abs() < 1e-14);
    }

    #[test]
    fn hausdorff_detects_rotation_equivalence() {
        let g = diameter_graph();
        let rotated = g.rotated(1.2);
        assert!(hausdorff_up_to_rotation(&g, &rotated, 32) < 1e-6);
        let pa = g.sample_points(32);
        let pb = rotated.sample_points(32);
        assert!(hausdorff(&pa, &pb) > 0.1);
    }
}
