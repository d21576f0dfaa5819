//! Exact stationary instances of catalog configurations.
//!
//! These are the certificate fixtures for the stability analysis: graphs
//! whose junction angles, balancing and boundary orthogonality hold to
//! closed-form (or Newton-refined) accuracy far beyond what a relaxed
//! polyline can deliver.
//!
//! * [`configuration_a`]: two congruent boundary 3-components ("caps") of
//!   one region at the east and west, the rest split by a diameter segment.
//! * [`hexagon_graph`]: a regular hexagon of segments with radial spokes;
//!   all pressures equal, two regions with three boundary components each.
//! * [`configuration_c`]: an interior quadrilateral with four spokes, doubly
//!   mirror-symmetric; off-diagonal corners give curved spokes.
//! * [`configuration_i`]: a vertical chain of five components (two of them
//!   congruent interior quadrilaterals of one region) with two side regions.

use std::f64::consts::{PI, TAU};

use nalgebra::{DMatrix, DVector};

use crate::error::Error;
use crate::geometry::{arc_to_unit_circle, ArcEdge, Point};
use crate::graph::{
    Edge, EdgeId, PartitionGraph, Region, RegionId, Vertex, VertexId, VertexKind, Walk,
};
use crate::util;
use crate::Result;

const SQRT3: f64 = 1.732_050_807_568_877_2;

fn fwd(id: usize) -> Walk {
    Walk::Edge {
        id: EdgeId(id),
        forward: true,
    }
}

fn rev(id: usize) -> Walk {
    Walk::Edge {
        id: EdgeId(id),
        forward: false,
    }
}

fn barc(from: usize, to: usize) -> Walk {
    Walk::BoundaryArc {
        from: VertexId(from),
        to: VertexId(to),
    }
}

fn interior(p: Point) -> Vertex {
    Vertex {
        point: p,
        kind: VertexKind::Interior,
    }
}

fn boundary(p: Point) -> Vertex {
    Vertex {
        point: p,
        kind: VertexKind::Boundary,
    }
}

fn edge(arc: ArcEdge, v0: usize, v1: usize, left: usize, right: usize) -> Edge {
    Edge {
        arc,
        v0: VertexId(v0),
        v1: VertexId(v1),
        left: RegionId(left),
        right: RegionId(right),
    }
}

/// Curvature of the arc leaving `v` in direction `theta` that meets the
/// unit circle orthogonally: κ = 2 v·n̂ / (1 − |v|²), n̂ the left normal.
fn orthogonal_curvature(v: Point, theta: f64) -> f64 {
    let n = Point::new(theta.cos(), theta.sin()).rot90();
    2.0 * v.dot(n) / (1.0 - v.norm2())
}

/// Stationary configuration-(a) instance with region-0 area `a1` (two caps,
/// each a boundary 3-component) and equal remaining areas. Closed form: the
/// caps sit at (±e, 0), their edges depart at ±60 degrees from the diameter
/// and meet the boundary orthogonally.
pub fn configuration_a(a1: f64) -> Result<PartitionGraph> {
    if !(a1 > 0.0 && a1 < 2.0 * PI / 3.0) {
        return Err(Error::domain(format!(
            "configuration (a) requires 0 < a1 < 2pi/3, got {a1}"
        )));
    }
    // cap area is strictly decreasing in the junction abscissa e
    let residual = |e: f64| -> f64 {
        configuration_a_at(e)
            .map(|g| g.region_area(RegionId(0)) - a1)
            .unwrap_or(f64::NAN)
    };
    let f_lo = residual(1e-6);
    let (e, fe) = util::bisect(residual, 1e-6, 1.0 - 1e-6, f_lo, 0.0, 1e-12, 200);
    if fe.abs() > 1e-9 {
        return Err(Error::solver(
            "configuration (a) area solve did not converge",
            format!("e = {e}, residual = {fe}"),
        ));
    }
    configuration_a_at(e)
}

/// The configuration-(a) instance with junctions at (±e, 0).
pub fn configuration_a_at(e: f64) -> Result<PartitionGraph> {
    if !(e > 0.0 && e < 1.0) {
        return Err(Error::domain("junction abscissa must lie in (0, 1)"));
    }
    let v_e = Point::new(e, 0.0);
    let v_w = Point::new(-e, 0.0);
    let cap = SQRT3 * e / (1.0 - e * e);

    // east cap edges depart at ±60 degrees, west mirrored
    let cap_e_n = arc_to_unit_circle(v_e, PI / 3.0, -cap)?;
    let cap_e_s = arc_to_unit_circle(v_e, -PI / 3.0, cap)?;
    let cap_w_n = arc_to_unit_circle(v_w, 2.0 * PI / 3.0, cap)?;
    let cap_w_s = arc_to_unit_circle(v_w, -2.0 * PI / 3.0, -cap)?;
    debug_assert!((orthogonal_curvature(v_e, PI / 3.0) - (-cap)).abs() < 1e-12);

    let vertices = vec![
        interior(v_e),
        interior(v_w),
        boundary(cap_e_n.p1),
        boundary(cap_e_s.p1),
        boundary(cap_w_n.p1),
        boundary(cap_w_s.p1),
    ];
    let edges = vec![
        // 0: east cap north edge, north cell on the left
        edge(cap_e_n, 0, 2, 1, 0),
        // 1: east cap south edge, cap region on the left
        edge(cap_e_s, 0, 3, 0, 2),
        // 2: west cap north edge, cap region on the left
        edge(cap_w_n, 1, 4, 0, 1),
        // 3: west cap south edge, south cell on the left
        edge(cap_w_s, 1, 5, 2, 0),
        // 4: the diameter segment between the junctions
        edge(ArcEdge::segment(v_w, v_e)?, 1, 0, 1, 2),
    ];
    let regions = vec![
        Region::new(
            vec![
                vec![fwd(1), barc(3, 2), rev(0)],
                vec![fwd(2), barc(4, 5), rev(3)],
            ],
            None,
        ),
        Region::new(vec![vec![fwd(0), barc(2, 4), rev(2), fwd(4)]], None),
        Region::new(vec![vec![rev(4), fwd(3), barc(5, 3), rev(1)]], None),
    ];
    PartitionGraph::new(vertices, edges, regions)
}

/// The hexagon graph: a regular hexagon of segments (corner radius chosen
/// for the given center area) with radial spokes, all pressures equal.
/// Regions 0 and 1 alternate around the ring (three boundary 4-components
/// each); region 2 is the hexagon.
pub fn hexagon_graph(center_area: f64) -> Result<PartitionGraph> {
    let rho = (center_area * 2.0 / (3.0 * SQRT3)).sqrt();
    if !(rho > 0.0 && rho < 1.0 - 1e-9) {
        return Err(Error::domain(format!(
            "hexagon area {center_area} does not fit in the disk"
        )));
    }
    let corner: Vec<Point> = (0..6)
        .map(|k| {
            let a = TAU * k as f64 / 6.0;
            Point::new(rho * a.cos(), rho * a.sin())
        })
        .collect();
    let rim: Vec<Point> = (0..6)
        .map(|k| {
            let a = TAU * k as f64 / 6.0;
            Point::new(a.cos(), a.sin())
        })
        .collect();
    let mut vertices: Vec<Vertex> = corner.iter().map(|p| interior(*p)).collect();
    vertices.extend(rim.iter().map(|p| boundary(*p)));

    let outer_region = |k: usize| k % 2;
    let mut edges = Vec::new();
    // 0..6: hexagon edges c_k → c_{k+1}, hexagon (region 2) on the left
    for k in 0..6 {
        edges.push(edge(
            ArcEdge::segment(corner[k], corner[(k + 1) % 6])?,
            k,
            (k + 1) % 6,
            2,
            outer_region(k),
        ));
    }
    // 6..12: radial spokes c_k → rim_k, ring cell k on the left
    for k in 0..6 {
        edges.push(edge(
            ArcEdge::segment(corner[k], rim[k])?,
            k,
            6 + k,
            outer_region(k),
            outer_region((k + 5) % 6),
        ));
    }

    let ring_cycle = |k: usize| -> Vec<Walk> {
        let next = (k + 1) % 6;
        vec![fwd(6 + k), barc(6 + k, 6 + next), rev(6 + next), rev(k)]
    };
    let regions = vec![
        Region::new(vec![ring_cycle(0), ring_cycle(2), ring_cycle(4)], None),
        Region::new(vec![ring_cycle(1), ring_cycle(3), ring_cycle(5)], None),
        Region::new(vec![(0..6).map(fwd).collect()], None),
    ];
    PartitionGraph::new(vertices, edges, regions)
}

// --- configuration (c): interior quadrilateral with four spokes ----------

#[derive(Clone, Copy, Debug)]
struct ConfCParams {
    h_top: f64,
    h_right: f64,
    theta_spoke: f64,
}

/// Residuals at the first-quadrant corner v = (x, y): two 120-degree gaps
/// and the spoke's boundary orthogonality. The spoke curvature is
/// h_right − h_top by the balancing condition.
fn conf_c_residuals(v: Point, p: ConfCParams) -> Result<[f64; 3]> {
    let v_mirror = Point::new(-v.x, v.y);
    let v_south = Point::new(v.x, -v.y);
    let top = ArcEdge::new(v, v_mirror, p.h_top)?;
    let right = ArcEdge::new(v_south, v, p.h_right)?;
    let dep_top = top.tangent_at(0.0);
    let dep_right = -right.tangent_at(right.length());
    let h_spoke = p.h_right - p.h_top;

    let a_spoke = p.theta_spoke;
    let a_top = dep_top.angle();
    let a_right = dep_right.angle();
    let gap = |from: f64, to: f64| (to - from).rem_euclid(TAU);
    let r1 = gap(a_spoke, a_top) - TAU / 3.0;
    let r2 = gap(a_top, a_right) - TAU / 3.0;
    let r3 =
        h_spoke * (1.0 - v.norm2()) - 2.0 * v.dot(Point::new(a_spoke.cos(), a_spoke.sin()).rot90());
    Ok([r1, r2, r3])
}

fn conf_c_solve(v: Point, seed: ConfCParams) -> Result<ConfCParams> {
    let mut z = DVector::from_column_slice(&[seed.h_top, seed.h_right, seed.theta_spoke]);
    let eval = |z: &DVector<f64>| -> Result<DVector<f64>> {
        let r = conf_c_residuals(
            v,
            ConfCParams {
                h_top: z[0],
                h_right: z[1],
                theta_spoke: z[2],
            },
        )?;
        Ok(DVector::from_column_slice(&r))
    };
    for _ in 0..60 {
        let r = eval(&z)?;
        if r.norm() < 1e-13 {
            break;
        }
        let mut jac = DMatrix::<f64>::zeros(3, 3);
        let delta = 1e-7;
        for j in 0..3 {
            let mut zp = z.clone();
            zp[j] += delta;
            let rp = eval(&zp)?;
            for i in 0..3 {
                jac[(i, j)] = (rp[i] - r[i]) / delta;
            }
        }
        let step = jac
            .lu()
            .solve(&r)
            .ok_or_else(|| Error::solver("singular Jacobian in configuration (c)", "newton"))?;
        let clamp = (0.5 / step.norm().max(1e-30)).min(1.0);
        z -= step * clamp;
    }
    let r = eval(&z)?;
    if r.norm() > 1e-10 {
        return Err(Error::solver(
            "configuration (c) corner equations did not converge",
            format!("residual {}", r.norm()),
        ));
    }
    Ok(ConfCParams {
        h_top: z[0],
        h_right: z[1],
        theta_spoke: z[2],
    })
}

/// Seed on the diagonal: straight radial spokes and equal quad curvatures;
/// a single bisection on the 120-degree gap.
fn conf_c_diagonal_seed(d: f64) -> Result<ConfCParams> {
    let v = Point::new(d, d);
    let theta = v.angle();
    let residual = |h: f64| -> f64 {
        match conf_c_residuals(
            v,
            ConfCParams {
                h_top: h,
                h_right: h,
                theta_spoke: theta,
            },
        ) {
            Ok(r) => r[0],
            Err(_) => f64::NAN,
        }
    };
    let (lo, hi, flo) = util::expand_bracket(residual, 0.4, 0.4, 64.0)
        .ok_or_else(|| Error::solver("no bracket for the diagonal quad curvature", "seed"))?;
    let (h, fh) = util::bisect(residual, lo, hi, flo, 0.0, 1e-13, 200);
    if fh.abs() > 1e-10 {
        return Err(Error::solver(
            "diagonal seed bisection did not converge",
            format!("h = {h}"),
        ));
    }
    Ok(ConfCParams {
        h_top: h,
        h_right: h,
        theta_spoke: theta,
    })
}

/// Stationary configuration-(c) instance with the first-quadrant corner at
/// `corner`: an interior quadrilateral (region 0) whose corners carry
/// spokes to the boundary; regions 1 (north+south) and 2 (east+west) each
/// have two boundary 4-components. Corners off the diagonal give curved
/// spokes (distinct pressures in regions 1 and 2).
pub fn configuration_c(corner: Point) -> Result<PartitionGraph> {
    if !(corner.x > 0.05 && corner.y > 0.05 && corner.norm() < 0.85) {
        return Err(Error::domain(
            "corner must lie well inside the first quadrant",
        ));
    }
    let d = (corner.x + corner.y) / 2.0;
    let mut params = conf_c_diagonal_seed(d)?;
    let steps = 8;
    let start = Point::new(d, d);
    for k in 1..=steps {
        let t = k as f64 / steps as f64;
        let v = Point::new(
            start.x + (corner.x - start.x) * t,
            start.y + (corner.y - start.y) * t,
        );
        params = conf_c_solve(v, params)?;
    }
    configuration_c_from(corner, params)
}

fn configuration_c_from(v: Point, p: ConfCParams) -> Result<PartitionGraph> {
    let h_spoke = p.h_right - p.h_top;
    let (x, y) = (v.x, v.y);
    let v_ne = Point::new(x, y);
    let v_nw = Point::new(-x, y);
    let v_sw = Point::new(-x, -y);
    let v_se = Point::new(x, -y);

    let spoke_ne = arc_to_unit_circle(v_ne, p.theta_spoke, h_spoke)?;
    let spoke_nw = arc_to_unit_circle(v_nw, PI - p.theta_spoke, -h_spoke)?;
    let spoke_sw = arc_to_unit_circle(v_sw, PI + p.theta_spoke, h_spoke)?;
    let spoke_se = arc_to_unit_circle(v_se, -p.theta_spoke, -h_spoke)?;

    let vertices = vec![
        interior(v_ne),
        interior(v_nw),
        interior(v_sw),
        interior(v_se),
        boundary(spoke_ne.p1),
        boundary(spoke_nw.p1),
        boundary(spoke_sw.p1),
        boundary(spoke_se.p1),
    ];
    let edges = vec![
        // quad edges, quadrilateral (region 0) on the left
        edge(ArcEdge::new(v_ne, v_nw, p.h_top)?, 0, 1, 0, 1),
        edge(ArcEdge::new(v_nw, v_sw, p.h_right)?, 1, 2, 0, 2),
        edge(ArcEdge::new(v_sw, v_se, p.h_top)?, 2, 3, 0, 1),
        edge(ArcEdge::new(v_se, v_ne, p.h_right)?, 3, 0, 0, 2),
        // spokes, oriented outward
        edge(spoke_ne, 0, 4, 1, 2),
        edge(spoke_nw, 1, 5, 2, 1),
        edge(spoke_sw, 2, 6, 1, 2),
        edge(spoke_se, 3, 7, 2, 1),
    ];
    let regions = vec![
        Region::new(vec![vec![fwd(0), fwd(1), fwd(2), fwd(3)]], None),
        Region::new(
            vec![
                vec![rev(0), fwd(4), barc(4, 5), rev(5)],
                vec![rev(2), fwd(6), barc(6, 7), rev(7)],
            ],
            None,
        ),
        Region::new(
            vec![
                vec![rev(3), fwd(7), barc(7, 4), rev(4)],
                vec![rev(1), fwd(5), barc(5, 6), rev(6)],
            ],
            None,
        ),
    ];
    PartitionGraph::new(vertices, edges, regions)
}

// --- configuration (i): chain of five with two side regions --------------

#[derive(Clone, Copy, Debug)]
struct ConfIParams {
    /// y of the outer rungs.
    b: f64,
    /// y of the inner rungs.
    a: f64,
    /// half-widths of the outer and inner rungs.
    w_b: f64,
    w_a: f64,
    /// side-edge curvature h_s = p(chain) − p(side); the five chain cells
    /// share one pressure (straight rungs).
    h_s: f64,
}

/// Residuals of the corner equations on the east side (the west follows by
/// mirror symmetry): 120-degree gaps at the outer and inner rung ends plus
/// boundary orthogonality of the outermost side edge.
fn conf_i_residuals(p: ConfIParams) -> Result<[f64; 4]> {
    let v_b = Point::new(p.w_b, p.b);
    let v_a = Point::new(p.w_a, p.a);
    let s2 = ArcEdge::new(v_b, v_a, -p.h_s)?;
    let s3 = ArcEdge::new(v_a, Point::new(p.w_a, -p.a), -p.h_s)?;

    let gap = |from: f64, to: f64| (to - from).rem_euclid(TAU);
    // at the outer rung end: departures are rung (west), s2 (down), s1 (up)
    let a_s2 = s2.tangent_at(0.0).angle();
    let r1 = gap(PI, a_s2) - TAU / 3.0;
    let a_s1 = a_s2 + TAU / 3.0;
    let r2 =
        p.h_s * (1.0 - v_b.norm2()) - 2.0 * v_b.dot(Point::new(a_s1.cos(), a_s1.sin()).rot90());

    // at the inner rung end: rung (west), s3 (down), s2 (back up)
    let a_s3 = s3.tangent_at(0.0).angle();
    let a_s2_back = (-s2.tangent_at(s2.length())).angle();
    let r3 = gap(PI, a_s3) - TAU / 3.0;
    let r4 = gap(a_s3, a_s2_back) - TAU / 3.0;
    Ok([r1, r2, r3, r4])
}

fn conf_i_solve(b: f64, seed: [f64; 4]) -> Result<ConfIParams> {
    let mut z = DVector::from_column_slice(&seed); // (a, w_b, w_a, h_s)
    let eval = |z: &DVector<f64>| -> Result<DVector<f64>> {
        let r = conf_i_residuals(ConfIParams {
            b,
            a: z[0],
            w_b: z[1],
            w_a: z[2],
            h_s: z[3],
        })?;
        Ok(DVector::from_column_slice(&r))
    };
    for _ in 0..120 {
        let r = eval(&z)?;
        if r.norm() < 1e-13 {
            break;
        }
        let mut jac = DMatrix::<f64>::zeros(4, 4);
        let delta = 1e-7;
        for j in 0..4 {
            let mut zp = z.clone();
            zp[j] += delta;
            let rp = eval(&zp)?;
            for i in 0..4 {
                jac[(i, j)] = (rp[i] - r[i]) / delta;
            }
        }
        let step = jac
            .lu()
            .solve(&r)
            .ok_or_else(|| Error::solver("singular Jacobian in configuration (i)", "newton"))?;
        let clamp = (0.2 / step.norm().max(1e-30)).min(1.0);
        z -= step * clamp;
    }
    let r = eval(&z)?;
    if r.norm() > 1e-10 {
        return Err(Error::solver(
            "configuration (i) corner equations did not converge",
            format!("residual {:?}", r.as_slice()),
        ));
    }
    Ok(ConfIParams {
        b,
        a: z[0],
        w_b: z[1],
        w_a: z[2],
        h_s: z[3],
    })
}

/// Stationary configuration-(i) instance: a vertical chain
/// [boundary, interior, interior, interior, boundary] of components
/// alternating between regions 1 and 0, flanked by the two components of
/// region 2. The two interior quadrilaterals of region 0 are congruent by
/// the horizontal mirror symmetry, and regions 0 and 1 share one pressure
/// (straight rungs).
///
/// The 120-degree fans force every side edge to subtend 60 degrees of its
/// circle, which pins a = b/3, w_a = w_b and h_s = 3/(2b); the boundary
/// orthogonality then gives w as a root of w² − (2b/√3)w + (5b²/3 − 1),
/// solvable for b in (√(3/5), √3/2). Newton only polishes roundoff.
pub fn configuration_i() -> Result<PartitionGraph> {
    configuration_i_at(0.84)
}

/// Configuration (i) with the outer rungs at height ±b.
pub fn configuration_i_at(b: f64) -> Result<PartitionGraph> {
    let disc = 1.0 - 4.0 * b * b / 3.0;
    if disc < 0.0 {
        return Err(Error::domain(format!(
            "configuration (i) requires b < sqrt(3)/2, got {b}"
        )));
    }
    let w = b / SQRT3 - disc.sqrt();
    if w <= 0.02 {
        return Err(Error::domain(format!(
            "configuration (i) requires b > sqrt(3/5) for a positive chain width, got {b}"
        )));
    }
    let p = conf_i_solve(b, [b / 3.0, w, w, 3.0 / (2.0 * b)])?;
    configuration_i_from(p)
}

fn configuration_i_from(p: ConfIParams) -> Result<PartitionGraph> {
    let ConfIParams {
        b,
        a,
        w_b,
        w_a,
        h_s,
    } = p;
    let nb_e = Point::new(w_b, b);
    let nb_w = Point::new(-w_b, b);
    let na_e = Point::new(w_a, a);
    let na_w = Point::new(-w_a, a);
    let sa_e = Point::new(w_a, -a);
    let sa_w = Point::new(-w_a, -a);
    let sb_e = Point::new(w_b, -b);
    let sb_w = Point::new(-w_b, -b);

    // the outermost side edges leave the outer rung ends 120 degrees
    // counterclockwise from the inner side edges
    let s2_e = ArcEdge::new(nb_e, na_e, -h_s)?;
    let a_s1_e = s2_e.tangent_at(0.0).angle() + TAU / 3.0;
    let s1_e = arc_to_unit_circle(nb_e, a_s1_e, h_s)?;
    let s1_w = arc_to_unit_circle(nb_w, PI - a_s1_e, -h_s)?;
    let s5_e = arc_to_unit_circle(sb_e, -a_s1_e, -h_s)?;
    let s5_w = arc_to_unit_circle(sb_w, PI + a_s1_e, h_s)?;

    let vertices = vec![
        interior(nb_e),    // 0
        interior(nb_w),    // 1
        interior(na_e),    // 2
        interior(na_w),    // 3
        interior(sa_e),    // 4
        interior(sa_w),    // 5
        interior(sb_e),    // 6
        interior(sb_w),    // 7
        boundary(s1_e.p1), // 8
        boundary(s1_w.p1), // 9
        boundary(s5_e.p1), // 10
        boundary(s5_w.p1), // 11
    ];
    // regions: 0 = interior quads U, L; 1 = chain cells T, M, B; 2 = sides
    let edges = vec![
        // rungs west→east, cell above on the left
        edge(ArcEdge::segment(nb_w, nb_e)?, 1, 0, 1, 0), // 0: T over U
        edge(ArcEdge::segment(na_w, na_e)?, 3, 2, 0, 1), // 1: U over M
        edge(ArcEdge::segment(sa_w, sa_e)?, 5, 4, 1, 0), // 2: M over L
        edge(ArcEdge::segment(sb_w, sb_e)?, 7, 6, 0, 1), // 3: L over B
        // east side edges top→bottom
        edge(s1_e, 0, 8, 1, 2),                            // 4: T | E
        edge(s2_e, 0, 2, 2, 0),                            // 5: E | U
        edge(ArcEdge::new(na_e, sa_e, -h_s)?, 2, 4, 2, 1), // 6: E | M
        edge(ArcEdge::new(sa_e, sb_e, -h_s)?, 4, 6, 2, 0), // 7: E | L
        edge(s5_e, 6, 10, 2, 1),                           // 8: E | B
        // west side edges top→bottom
        edge(s1_w, 1, 9, 2, 1),                           // 9: W | T
        edge(ArcEdge::new(nb_w, na_w, h_s)?, 1, 3, 0, 2), // 10: U | W
        edge(ArcEdge::new(na_w, sa_w, h_s)?, 3, 5, 1, 2), // 11: M | W
        edge(ArcEdge::new(sa_w, sb_w, h_s)?, 5, 7, 0, 2), // 12: L | W
        edge(s5_w, 7, 11, 1, 2),                          // 13: B | W
    ];

    let regions = vec![
        Region::new(
            vec![
                vec![rev(0), fwd(10), fwd(1), rev(5)],
                vec![rev(2), fwd(12), fwd(3), rev(7)],
            ],
            None,
        ),
        Region::new(
            vec![
                vec![fwd(4), barc(8, 9), rev(9), fwd(0)],
                vec![rev(1), fwd(11), fwd(2), rev(6)],
                vec![rev(3), fwd(13), barc(11, 10), rev(8)],
            ],
            None,
        ),
        Region::new(
            vec![
                vec![fwd(5), fwd(6), fwd(7), fwd(8), barc(10, 8), rev(4)],
                vec![fwd(9), barc(9, 11), rev(13), rev(12), rev(11), rev(10)],
            ],
            None,
        ),
    ];
    PartitionGraph::new(vertices, edges, regions)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stability::{
        assemble_index_form, constrained_min_eigenvalue, jacobi_residual,
        largest_pressure_component_bound, nodal_region_count, rotation_jacobi, CertificateKind,
        Discretization,
    };
    use crate::standard::check_stationary;

    #[test]
    fn configuration_a_is_stationary() {
        let g = configuration_a(1.0).unwrap();
        let report = check_stationary(&g);
        assert!(
            report.is_stationary(1e-9),
            "residual {}",
            report.max_residual()
        );
        assert!((g.region_area(RegionId(0)) - 1.0).abs() < 1e-9);
        let a1 = g.region_area(RegionId(1));
        let a2 = g.region_area(RegionId(2));
        assert!((a1 - a2).abs() < 1e-9, "mirror-symmetric halves");
    }

    #[test]
    fn configuration_a_is_unstable() {
        let g = configuration_a(1.1).unwrap();
        let ifm = assemble_index_form(&g, 48).unwrap();
        let sol = constrained_min_eigenvalue(&ifm, 2).unwrap();
        assert!(
            sol.eigenvalues[0] < -1e-3,
            "two boundary 3-components must be unstable, lambda_min = {}",
            sol.eigenvalues[0]
        );
    }

    #[test]
    fn hexagon_graph_is_stationary_and_certified_unstable() {
        let g = hexagon_graph(PI / 3.0).unwrap();
        let report = check_stationary(&g);
        assert!(report.is_stationary(1e-12));
        for a in g.areas() {
            assert!((a - PI / 3.0).abs() < 1e-12);
        }
        // the hexagon graph's perimeter is 6 regardless of the corner radius
        assert!((g.perimeter() - 6.0).abs() < 1e-12);

        let report = largest_pressure_component_bound(&g, 32).unwrap();
        assert!(!report.satisfied);
        assert_eq!(report.nonhexagonal_components, 3);
        let cert = report.certificate.expect("certificate");
        assert_eq!(cert.kind, CertificateKind::LargestPressureComponents);
        assert!(cert.q_value < -1e-3, "Q = {}", cert.q_value);

        let ifm = assemble_index_form(&g, 48).unwrap();
        let sol = constrained_min_eigenvalue(&ifm, 2).unwrap();
        assert!(
            sol.eigenvalues[0] < -1e-3,
            "lambda_min = {}",
            sol.eigenvalues[0]
        );
    }

    #[test]
    fn hexagon_ring_indicator_value() {
        // a ring cell is bounded by three straight interior edges and the
        // circle: its indicator costs nothing in the interior (h = 0 and the
        // vertex coefficients vanish at equal pressures) and −1 at each of
        // its two boundary endpoints, so Q = −2 exactly
        let g = hexagon_graph(PI / 3.0).unwrap();
        let ifm = assemble_index_form(&g, 32).unwrap();
        let u = crate::stability::component_indicator(
            &ifm.disc,
            RegionId(0),
            &g.regions[0].components[0],
        );
        let q = ifm.apply(&u, &u);
        assert!((q + 2.0).abs() < 1e-10, "Q = {q}");
    }

    #[test]
    fn hexagon_indicator_of_center_is_neutral() {
        // the hexagon is bounded by segments: Q(u,u) = 0 for its indicator
        let g = hexagon_graph(PI / 3.0).unwrap();
        let ifm = assemble_index_form(&g, 32).unwrap();
        let u = crate::stability::component_indicator(
            &ifm.disc,
            RegionId(2),
            &g.regions[2].components[0],
        );
        let q = ifm.apply(&u, &u);
        assert!(q.abs() < 1e-9, "hexagon bounded by segments: Q = {q}");
    }

    #[test]
    fn configuration_c_diagonal_is_stationary() {
        let g = configuration_c(Point::new(0.3, 0.3)).unwrap();
        let report = check_stationary(&g);
        assert!(
            report.is_stationary(1e-9),
            "residual {}",
            report.max_residual()
        );
    }

    #[test]
    fn configuration_c_off_diagonal_has_four_nodal_regions() {
        let g = configuration_c(Point::new(0.26, 0.4)).unwrap();
        let report = check_stationary(&g);
        assert!(
            report.is_stationary(1e-9),
            "residual {}",
            report.max_residual()
        );
        assert!(
            (g.regions[1].pressure - g.regions[2].pressure).abs() > 1e-3,
            "off-diagonal corners give distinct outer pressures"
        );
        let disc = Discretization::new(&g, 64).unwrap();
        let u = rotation_jacobi(&disc);
        assert!(jacobi_residual(&disc, &u) < 1e-8);
        let nodal = nodal_region_count(&disc, &u);
        assert!(
            nodal.vertex_flags.is_empty(),
            "nodal points away from vertices"
        );
        assert!(nodal.count >= 4, "count = {}", nodal.count);

        let ifm = assemble_index_form(&g, 48).unwrap();
        let sol = constrained_min_eigenvalue(&ifm, 2).unwrap();
        assert!(
            sol.eigenvalues[0] < -1e-3,
            "lambda_min = {}",
            sol.eigenvalues[0]
        );
    }

    #[test]
    fn configuration_i_pair_certificate() {
        let g = configuration_i().unwrap();
        let report = check_stationary(&g);
        assert!(
            report.is_stationary(1e-9),
            "residual {}",
            report.max_residual()
        );
        // the chain cells share one pressure: straight rungs
        assert!((g.regions[0].pressure - g.regions[1].pressure).abs() < 1e-9);

        let bound = largest_pressure_component_bound(&g, 32).unwrap();
        let cert = bound.certificate.expect("pair certificate");
        assert!(cert.q_value < -1e-3, "Q = {}", cert.q_value);
        // the +1/−1 pair lives on the two congruent interior quads
        assert!(cert.support.contains("region 0"), "{}", cert.support);
    }
}

#[cfg(test)]
mod embedding_tests {
    use super::*;

    /// Every fixture edge stays inside the closed disk (the constructions
    /// are exact, but arcs could in principle bulge outside).
    #[test]
    fn fixtures_stay_inside_the_disk() {
        let graphs = vec![
            ("conf_a", configuration_a(1.1).unwrap()),
            ("hex", hexagon_graph(PI / 3.0).unwrap()),
            ("conf_c", configuration_c(Point::new(0.26, 0.4)).unwrap()),
            ("conf_i", configuration_i().unwrap()),
        ];
        for (label, g) in &graphs {
            for (ei, e) in g.edges.iter().enumerate() {
                let len = e.arc.length();
                for k in 0..=32 {
                    let p = e.arc.point_at(len * k as f64 / 32.0);
                    assert!(
                        p.norm() <= 1.0 + 1e-9,
                        "{label} edge {ei}: point {p:?} escapes the disk"
                    );
                }
            }
            for a in g.areas() {
                assert!(a > 1e-3, "{label}: region areas must be solid, got {a}");
            }
        }
    }
}
