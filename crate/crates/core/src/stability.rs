//! Discretized first/second variation of length: the index form, constrained
//! spectra, Jacobi functions, nodal regions, and instability certificates.
//!
//! Functions on the graph are sampled at m+1 equally spaced arc-length nodes
//! per edge, stored with respect to each edge's left normal. The quadratic
//! form is assembled in the weak (integrated-by-parts) shape
//!
//! ```text
//! Q(u,v) = Σ_e ∫ (u'v' − h²uv) ds
//!        + Σ_{interior vertex p, e ∋ p} q_e(p) u_e(p) v_e(p)
//!        − Σ_{boundary vertex p} u(p) v(p)
//! ```
//!
//! using elements that solve u'' + h²u = 0 exactly, so Jacobi fields (the
//! rotation field in particular) are reproduced without discretization
//! error. Correctness is pinned to the finite-difference contract exercised
//! by [`crate::oracle`], not to a sign convention.

use nalgebra::{DMatrix, DVector};

use crate::error::Error;
use crate::geometry::Point;
use crate::graph::{EdgeId, PartitionGraph, RegionId, VertexId, VertexKind, Walk};
use crate::standard::check_stationary;
use crate::Result;

/// Default intervals per edge.
pub const DEFAULT_M: usize = 64;

/// Stationarity gate for index-form assembly.
pub const STATIONARY_TOL: f64 = 1e-6;

/// Arc-length sampling of every edge of a graph.
#[derive(Clone, Debug)]
pub struct Discretization {
    pub graph: PartitionGraph,
    /// Intervals per edge (nodes per edge = m + 1).
    pub m: usize,
    offsets: Vec<usize>,
    steps: Vec<f64>,
    total: usize,
}

impl Discretization {
    pub fn new(graph: &PartitionGraph, m: usize) -> Result<Discretization> {
        if m < 2 || !m.is_multiple_of(2) {
            return Err(Error::domain("m must be an even number of intervals >= 2"));
        }
        let mut offsets = Vec::with_capacity(graph.edges.len());
        let mut steps = Vec::with_capacity(graph.edges.len());
        let mut total = 0;
        for e in &graph.edges {
            offsets.push(total);
            steps.push(e.arc.length() / m as f64);
            total += m + 1;
        }
        Ok(Discretization {
            graph: graph.clone(),
            m,
            offsets,
            steps,
            total,
        })
    }

    pub fn dof_count(&self) -> usize {
        self.total
    }

    pub fn dof(&self, e: EdgeId, node: usize) -> usize {
        self.offsets[e.0] + node
    }

    pub fn step(&self, e: EdgeId) -> f64 {
        self.steps[e.0]
    }

    pub fn node_s(&self, e: EdgeId, node: usize) -> f64 {
        self.steps[e.0] * node as f64
    }

    pub fn node_point(&self, e: EdgeId, node: usize) -> Point {
        self.graph.edges[e.0].arc.point_at(self.node_s(e, node))
    }

    /// Left unit normal at a node.
    pub fn node_normal(&self, e: EdgeId, node: usize) -> Point {
        self.graph.edges[e.0].arc.normal_at(self.node_s(e, node))
    }

    /// Dof of the edge end sitting at a vertex (node 0 when the edge
    /// departs, node m when it arrives).
    pub fn end_dof(&self, e: EdgeId, departs: bool) -> usize {
        if departs {
            self.dof(e, 0)
        } else {
            self.dof(e, self.m)
        }
    }
}

/// Per-edge sampled normal-component functions, stored against each edge's
/// left normal; u_ji = −u_ij is realized by the left/right bookkeeping.
#[derive(Clone, Debug)]
pub struct DiscretizedVariation {
    pub values: Vec<f64>,
}

impl DiscretizedVariation {
    pub fn zeros(disc: &Discretization) -> Self {
        DiscretizedVariation {
            values: vec![0.0; disc.dof_count()],
        }
    }

    /// Samples `f(edge, s, point)` at every node.
    pub fn from_fn(disc: &Discretization, mut f: impl FnMut(EdgeId, f64, Point) -> f64) -> Self {
        let mut values = vec![0.0; disc.dof_count()];
        for ei in 0..disc.graph.edges.len() {
            let e = EdgeId(ei);
            for k in 0..=disc.m {
                let s = disc.node_s(e, k);
                values[disc.dof(e, k)] = f(e, s, disc.node_point(e, k));
            }
        }
        DiscretizedVariation { values }
    }

    pub fn edge_values<'a>(&'a self, disc: &Discretization, e: EdgeId) -> &'a [f64] {
        let start = disc.dof(e, 0);
        &self.values[start..start + disc.m + 1]
    }

    /// Max violation of the junction compatibility condition
    /// u_ij + u_jk + u_ki = 0 over interior vertices.
    pub fn compatibility_residual(&self, disc: &Discretization) -> f64 {
        let mut worst: f64 = 0.0;
        for (vi, v) in disc.graph.vertices.iter().enumerate() {
            if v.kind != VertexKind::Interior {
                continue;
            }
            let mut sum = 0.0;
            for inc in disc.graph.incident(VertexId(vi)) {
                let val = self.values[disc.end_dof(inc.edge, inc.departs)];
                sum += if inc.departs { val } else { -val };
            }
            worst = worst.max(sum.abs());
        }
        worst
    }

    /// Velocity of a vertex consistent with the sampled normal components:
    /// least squares over the incident normals at interior vertices, a
    /// tangential vector at boundary vertices (None if unrecoverable).
    pub fn vertex_velocity(&self, disc: &Discretization, v: VertexId) -> Option<Point> {
        let g = &disc.graph;
        let inc = g.incident(v);
        match g.vertices[v.0].kind {
            VertexKind::Interior => {
                let mut a = [[0.0f64; 2]; 2];
                let mut b = [0.0f64; 2];
                for i in &inc {
                    let t = g.departure_tangent(*i);
                    let n = t.rot90();
                    let raw = self.values[disc.end_dof(i.edge, i.departs)];
                    let c = if i.departs { raw } else { -raw };
                    a[0][0] += n.x * n.x;
                    a[0][1] += n.x * n.y;
                    a[1][0] += n.y * n.x;
                    a[1][1] += n.y * n.y;
                    b[0] += c * n.x;
                    b[1] += c * n.y;
                }
                let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
                if det.abs() < 1e-12 {
                    return None;
                }
                Some(Point::new(
                    (b[0] * a[1][1] - b[1] * a[0][1]) / det,
                    (b[1] * a[0][0] - b[0] * a[1][0]) / det,
                ))
            }
            VertexKind::Boundary => {
                let i = inc.first()?;
                let t_circle = g.vertices[v.0].point.rot90();
                let t = g.departure_tangent(*i);
                let n = t.rot90();
                let raw = self.values[disc.end_dof(i.edge, i.departs)];
                let c = if i.departs { raw } else { -raw };
                let denom = t_circle.dot(n);
                if denom.abs() < 1e-9 {
                    return None;
                }
                Some(t_circle.scale(c / denom))
            }
        }
    }
}

// --- exact element integrals on the space { u'' + h²u = 0 } --------------

/// x·cot(x), series-stable.
fn xcot(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 3.0 - x2 * x2 / 45.0
    } else {
        x * x.cos() / x.sin()
    }
}

/// x/sin(x), series-stable.
fn x_over_sin(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 + x2 / 6.0 + 7.0 * x2 * x2 / 360.0
    } else {
        x / x.sin()
    }
}

/// tan(x)/x, series-stable.
fn tan_over_x(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 + x2 / 3.0 + 2.0 * x2 * x2 / 15.0
    } else {
        x.tan() / x
    }
}

/// Element matrices on one interval of length `dl` with curvature `h`, for
/// the nodal basis solving u'' + h²u = 0: the bilinear form
/// B(φa, φb) = ∫(φa'φb' − h²φaφb) (exactly [φa'φb] at the ends), the mass
/// ∫φaφb, and the load ∫φa.
struct Element {
    b00: f64,
    b01: f64,
    m00: f64,
    m01: f64,
    w: f64,
}

fn element(h: f64, dl: f64) -> Element {
    let x = h * dl;
    let b00 = xcot(x) / dl;
    let b01 = -x_over_sin(x) / dl;
    let (m00, m01) = if x.abs() < 1e-3 {
        let x2 = x * x;
        (
            dl * (1.0 / 3.0 + 2.0 * x2 / 45.0),
            dl * (1.0 / 6.0 + 7.0 * x2 / 180.0),
        )
    } else {
        let s = x.sin();
        let s2 = s * s;
        (
            dl * (0.5 - (2.0 * x).sin() / (4.0 * x)) / s2,
            dl * (s / (2.0 * x) - x.cos() / 2.0) / s2,
        )
    };
    let w = 0.5 * dl * tan_over_x(0.5 * x);
    Element {
        b00,
        b01,
        m00,
        m01,
        w,
    }
}

/// Exact ∫u ds over one edge for the piecewise-Jacobi interpolant.
fn edge_integral(disc: &Discretization, e: EdgeId, values: &[f64]) -> f64 {
    let h = disc.graph.edges[e.0].arc.h;
    let dl = disc.step(e);
    let el = element(h, dl);
    let mut total = 0.0;
    for k in 0..disc.m {
        total += el.w * (values[k] + values[k + 1]);
    }
    total
}

/// The discretized index form: Q, the L² mass matrix, per-region
/// area-derivative rows, and junction-compatibility rows, all over the full
/// nodal space.
pub struct IndexFormMatrix {
    pub disc: Discretization,
    pub q: DMatrix<f64>,
    pub mass: DMatrix<f64>,
    /// One row per region: dA_i/dt = row · u.
    pub area_rows: DMatrix<f64>,
    /// One row per interior vertex: compatibility u_ij + u_jk + u_ki = 0.
    pub compat_rows: DMatrix<f64>,
}

/// Vertex coefficient q_e(p) = (h_ki + h_kj)/√3 = (2p_k − p_i − p_j)/√3,
/// with k the third region at the vertex.
fn vertex_coefficient(g: &PartitionGraph, v: VertexId, e: EdgeId) -> Result<f64> {
    let edge = &g.edges[e.0];
    let k = g.third_region_at(v, e)?;
    let (pi, pj, pk) = (
        g.regions[edge.left.0].pressure,
        g.regions[edge.right.0].pressure,
        g.regions[k.0].pressure,
    );
    Ok((2.0 * pk - pi - pj) / 3f64.sqrt())
}

/// Assembles the index form on a stationary graph with `m` intervals per
/// edge.
pub fn assemble_index_form(g: &PartitionGraph, m: usize) -> Result<IndexFormMatrix> {
    let report = check_stationary(g);
    if !report.is_stationary(STATIONARY_TOL) {
        return Err(Error::NotStationary(format!(
            "max stationarity residual {} exceeds {STATIONARY_TOL}",
            report.max_residual()
        )));
    }
    let disc = Discretization::new(g, m)?;
    let n = disc.dof_count();
    let mut q = DMatrix::<f64>::zeros(n, n);
    let mut mass = DMatrix::<f64>::zeros(n, n);
    let mut area_rows = DMatrix::<f64>::zeros(g.regions.len(), n);

    for (ei, e) in g.edges.iter().enumerate() {
        let eid = EdgeId(ei);
        let el = element(e.arc.h, disc.step(eid));
        for k in 0..m {
            let (i, j) = (disc.dof(eid, k), disc.dof(eid, k + 1));
            q[(i, i)] += el.b00;
            q[(j, j)] += el.b00;
            q[(i, j)] += el.b01;
            q[(j, i)] += el.b01;
            mass[(i, i)] += el.m00;
            mass[(j, j)] += el.m00;
            mass[(i, j)] += el.m01;
            mass[(j, i)] += el.m01;
            for dof in [i, j] {
                // dA_i = −Σ ∫u_ij; stored values are u(left, right)
                area_rows[(e.left.0, dof)] -= el.w;
                area_rows[(e.right.0, dof)] += el.w;
            }
        }
    }

    let mut compat = Vec::new();
    for (vi, v) in g.vertices.iter().enumerate() {
        let vid = VertexId(vi);
        match v.kind {
            VertexKind::Interior => {
                let mut row = DVector::<f64>::zeros(n);
                for inc in g.incident(vid) {
                    let dof = disc.end_dof(inc.edge, inc.departs);
                    q[(dof, dof)] += vertex_coefficient(g, vid, inc.edge)?;
                    row[dof] = if inc.departs { 1.0 } else { -1.0 };
                }
                compat.push(row.transpose());
            }
            VertexKind::Boundary => {
                for inc in g.incident(vid) {
                    let dof = disc.end_dof(inc.edge, inc.departs);
                    // geodesic curvature of the unit circle
                    q[(dof, dof)] -= 1.0;
                }
            }
        }
    }
    let compat_rows = if compat.is_empty() {
        DMatrix::<f64>::zeros(0, n)
    } else {
        DMatrix::from_rows(&compat)
    };

    Ok(IndexFormMatrix {
        disc,
        q,
        mass,
        area_rows,
        compat_rows,
    })
}

impl IndexFormMatrix {
    /// Q(u, v).
    pub fn apply(&self, u: &DiscretizedVariation, v: &DiscretizedVariation) -> f64 {
        let uu = DVector::from_column_slice(&u.values);
        let vv = DVector::from_column_slice(&v.values);
        (uu.transpose() * &self.q * vv)[(0, 0)]
    }

    /// ‖u‖² in the L² mass inner product.
    pub fn mass_norm2(&self, u: &DiscretizedVariation) -> f64 {
        let uu = DVector::from_column_slice(&u.values);
        (uu.transpose() * &self.mass * uu)[(0, 0)]
    }

    /// dA_i/dt for the sampled variation (exact element integrals).
    pub fn area_derivatives_exact(&self, u: &DiscretizedVariation) -> Vec<f64> {
        let uu = DVector::from_column_slice(&u.values);
        (0..self.area_rows.nrows())
            .map(|i| (self.area_rows.row(i) * &uu)[(0, 0)])
            .collect()
    }

    fn stacked_constraints(&self) -> DMatrix<f64> {
        let n = self.q.nrows();
        let rows = self.compat_rows.nrows() + self.area_rows.nrows();
        let mut c = DMatrix::<f64>::zeros(rows, n);
        c.view_mut((0, 0), (self.compat_rows.nrows(), n))
            .copy_from(&self.compat_rows);
        c.view_mut((self.compat_rows.nrows(), 0), (self.area_rows.nrows(), n))
            .copy_from(&self.area_rows);
        c
    }

    /// M-orthogonal projection of u onto the admissible area-preserving
    /// subspace (null space of compatibility and area rows). The last area
    /// row is redundant (the rows sum to zero) and is dropped before the
    /// Gram solve.
    pub fn project_constraints(&self, u: &DiscretizedVariation) -> Result<DiscretizedVariation> {
        let full = self.stacked_constraints();
        let c = full.rows(0, full.nrows() - 1).into_owned();
        let chol = nalgebra::Cholesky::new(self.mass.clone())
            .ok_or_else(|| Error::Consistency("mass matrix is not positive definite".into()))?;
        let minv_ct = chol.solve(&c.transpose());
        let gram = &c * &minv_ct;
        let rhs = &c * DVector::from_column_slice(&u.values);
        let lambda = gram
            .lu()
            .solve(&rhs)
            .ok_or_else(|| Error::Consistency("projection Gram system is singular".into()))?;
        let w = DVector::from_column_slice(&u.values) - minv_ct * lambda;
        Ok(DiscretizedVariation {
            values: w.iter().copied().collect(),
        })
    }
}

/// Result of the constrained eigenvalue computation.
pub struct EigenSolution {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<DiscretizedVariation>,
    /// Rank of the combined constraint rows (compatibility + areas).
    pub constraint_rank: usize,
    /// The area rows always sum to zero, so the expected rank is rows − 1;
    /// any further deficiency is reported and the computation proceeds on
    /// the actual null space.
    pub rank_deficient: bool,
}

/// k smallest eigenvalues of Q on the admissible area-preserving subspace,
/// generalized against the L² mass matrix; eigenvectors are M-orthonormal.
pub fn constrained_min_eigenvalue(ifm: &IndexFormMatrix, k: usize) -> Result<EigenSolution> {
    let n = ifm.q.nrows();
    let chol = nalgebra::Cholesky::new(ifm.mass.clone())
        .ok_or_else(|| Error::Consistency("mass matrix is not positive definite".into()))?;
    let l = chol.l();
    let solve_lower = |m: &DMatrix<f64>| -> Result<DMatrix<f64>> {
        l.solve_lower_triangular(m)
            .ok_or_else(|| Error::Consistency("singular Cholesky factor".into()))
    };

    // whitened operator Q̃ = L⁻¹ Q L⁻ᵀ
    let a = solve_lower(&ifm.q)?;
    let qt = solve_lower(&a.transpose())?;
    let qt = (&qt + qt.transpose()) * 0.5;

    // constraints in whitened coordinates, orthonormalized
    let c = ifm.stacked_constraints();
    let ct_white = solve_lower(&c.transpose())?;
    let mut basis: Vec<DVector<f64>> = Vec::new();
    for j in 0..ct_white.ncols() {
        let mut v = ct_white.column(j).into_owned();
        let scale = v.norm();
        for _ in 0..2 {
            for b in &basis {
                let d = b.dot(&v);
                v -= b * d;
            }
        }
        if v.norm() > 1e-10 * scale.max(1.0) {
            let nv = v.norm();
            basis.push(v / nv);
        }
    }
    let rank = basis.len();
    let expected_rank = c.nrows().saturating_sub(1);

    // deflation: W = P Q̃ P + σ B Bᵀ with P = I − B Bᵀ
    let r = basis.len();
    let mut bmat = DMatrix::<f64>::zeros(n, r);
    for (j, b) in basis.iter().enumerate() {
        bmat.set_column(j, b);
    }
    let gersh: f64 = (0..n)
        .map(|i| qt.row(i).iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max);
    let sigma = 2.0 * gersh + 1.0;
    let t = &qt * &bmat; // n×r
    let s = bmat.transpose() * &t; // r×r
    let w = &qt - &bmat * t.transpose() - &t * bmat.transpose()
        + &bmat * (s + DMatrix::identity(r, r) * sigma) * bmat.transpose();
    let w = (&w + w.transpose()) * 0.5;

    let eig = nalgebra::SymmetricEigen::new(w);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap());

    let mut eigenvalues = Vec::new();
    let mut eigenvectors = Vec::new();
    let lt = l.transpose();
    for &idx in &order {
        if eigenvalues.len() >= k {
            break;
        }
        let lam = eig.eigenvalues[idx];
        if lam > 0.5 * sigma {
            continue;
        }
        let y = eig.eigenvectors.column(idx).into_owned();
        if basis.iter().any(|b| b.dot(&y).abs() > 1e-7) {
            continue;
        }
        let x = lt
            .solve_upper_triangular(&y)
            .ok_or_else(|| Error::Consistency("singular Cholesky factor".into()))?;
        eigenvalues.push(lam);
        eigenvectors.push(DiscretizedVariation {
            values: x.iter().copied().collect(),
        });
    }

    Ok(EigenSolution {
        eigenvalues,
        eigenvectors,
        constraint_rank: rank,
        rank_deficient: rank != expected_rank,
    })
}

/// First variation of length for the sampled variation: the curvature term
/// plus the conormal terms at vertices (which vanish at 120-degree junctions
/// and orthogonal boundary meetings).
pub fn first_variation_length(disc: &Discretization, u: &DiscretizedVariation) -> Result<f64> {
    let g = &disc.graph;
    let mut dl = 0.0;
    for (ei, e) in g.edges.iter().enumerate() {
        let eid = EdgeId(ei);
        dl -= e.arc.h * edge_integral(disc, eid, u.edge_values(disc, eid));
    }
    for vi in 0..g.vertices.len() {
        let vid = VertexId(vi);
        let x = u.vertex_velocity(disc, vid).ok_or_else(|| {
            Error::Consistency(format!("vertex velocity unrecoverable at vertex {vi}"))
        })?;
        for inc in g.incident(vid) {
            // inner conormal = tangent pointing into the edge
            dl -= x.dot(g.departure_tangent(inc));
        }
    }
    Ok(dl)
}

/// Area derivatives dA_i/dt = −Σ_j ∫ u_ij by composite Simpson quadrature.
pub fn area_derivatives(disc: &Discretization, u: &DiscretizedVariation) -> Vec<f64> {
    let g = &disc.graph;
    let mut out = vec![0.0; g.regions.len()];
    for (ei, e) in g.edges.iter().enumerate() {
        let eid = EdgeId(ei);
        let vals = u.edge_values(disc, eid);
        let dl = disc.step(eid);
        let mut integral = 0.0;
        for k in (0..disc.m).step_by(2) {
            integral += dl / 3.0 * (vals[k] + 4.0 * vals[k + 1] + vals[k + 2]);
        }
        out[e.left.0] -= integral;
        out[e.right.0] += integral;
    }
    out
}

/// Normal component of the rotation Killing field (−y, x) sampled at the
/// discretization nodes; an exact Jacobi function on any graph.
pub fn rotation_jacobi(disc: &Discretization) -> DiscretizedVariation {
    let edges = disc.graph.edges.clone();
    DiscretizedVariation::from_fn(disc, |e, s, p| {
        let n = edges[e.0].arc.normal_at(s);
        Point::new(-p.y, p.x).dot(n)
    })
}

/// Max misfit of u against the local solution space of u'' + h²u = 0 on
/// each edge (span{cos hs, sin hs}, or {1, s} on segments). Zero for Jacobi
/// functions up to roundoff.
pub fn jacobi_residual(disc: &Discretization, u: &DiscretizedVariation) -> f64 {
    let mut worst: f64 = 0.0;
    for (ei, e) in disc.graph.edges.iter().enumerate() {
        let eid = EdgeId(ei);
        let vals = u.edge_values(disc, eid);
        let h = e.arc.h;
        let n = vals.len();
        let mut basis = DMatrix::<f64>::zeros(n, 2);
        for k in 0..n {
            let s = disc.node_s(eid, k);
            if h.abs() < crate::geometry::SEGMENT_CURVATURE_EPS {
                basis[(k, 0)] = 1.0;
                basis[(k, 1)] = s;
            } else {
                basis[(k, 0)] = (h * s).cos();
                basis[(k, 1)] = (h * s).sin();
            }
        }
        let rhs = DVector::from_column_slice(vals);
        let svd = nalgebra::SVD::new(basis.clone(), true, true);
        match svd.solve(&rhs, 1e-13) {
            Ok(coef) => {
                let fit = basis * coef;
                for k in 0..n {
                    worst = worst.max((vals[k] - fit[k]).abs());
                }
            }
            Err(_) => worst = f64::INFINITY,
        }
    }
    worst
}

/// Nodal-region count of a function on the graph.
#[derive(Clone, Debug)]
pub struct NodalReport {
    /// Connected components of {u ≠ 0}; vertices glue incident branches.
    pub count: usize,
    /// Vertices where some branch value vanishes (the instability criterion
    /// requires nodal points away from vertices, so these are inconclusive).
    pub vertex_flags: Vec<VertexId>,
    /// Nodes with 0 < |u| ≤ tie tolerance (ties are flagged, not resolved).
    pub tie_flags: Vec<(EdgeId, usize)>,
    pub identically_zero: bool,
}

const TIE_EPS: f64 = 1e-10;

/// Counts nodal regions: components of {u ≠ 0} with sign changes located by
/// linear interpolation between nodes.
pub fn nodal_region_count(disc: &Discretization, u: &DiscretizedVariation) -> NodalReport {
    let g = &disc.graph;
    let n = disc.dof_count();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    fn union(parent: &mut [usize], a: usize, b: usize) {
        let (ra, rb) = (find(parent, a), find(parent, b));
        if ra != rb {
            parent[ra] = rb;
        }
    }

    let nonzero = |x: f64| x.abs() > TIE_EPS;
    let mut tie_flags = Vec::new();
    let mut any_nonzero = false;

    for ei in 0..g.edges.len() {
        let eid = EdgeId(ei);
        let vals = u.edge_values(disc, eid);
        for (k, &v) in vals.iter().enumerate() {
            if v != 0.0 && !nonzero(v) {
                tie_flags.push((eid, k));
            }
            any_nonzero |= nonzero(v);
        }
        for k in 0..disc.m {
            let (a, b) = (vals[k], vals[k + 1]);
            if nonzero(a) && nonzero(b) && a.signum() == b.signum() {
                union(&mut parent, disc.dof(eid, k), disc.dof(eid, k + 1));
            }
        }
    }

    let mut vertex_flags = Vec::new();
    for (vi, v) in g.vertices.iter().enumerate() {
        let vid = VertexId(vi);
        if v.kind != VertexKind::Interior {
            continue;
        }
        let ends: Vec<usize> = g
            .incident(vid)
            .iter()
            .map(|inc| disc.end_dof(inc.edge, inc.departs))
            .collect();
        if ends.iter().any(|&d| !nonzero(u.values[d])) {
            vertex_flags.push(vid);
            continue;
        }
        for w in ends.windows(2) {
            union(&mut parent, w[0], w[1]);
        }
    }

    let mut roots = std::collections::HashSet::new();
    for i in 0..n {
        if nonzero(u.values[i]) {
            let r = find(&mut parent, i);
            roots.insert(r);
        }
    }

    NodalReport {
        count: roots.len(),
        vertex_flags,
        tie_flags,
        identically_zero: !any_nonzero,
    }
}

/// Component metadata for the largest-pressure-region analysis.
#[derive(Clone, Debug)]
pub struct ComponentInfo {
    pub region: RegionId,
    pub index: usize,
    pub interior: bool,
    pub edge_count: usize,
    pub hexagonal: bool,
    /// Length of the component boundary inside the open disk.
    pub interior_perimeter: f64,
}

/// An explicit destabilizing direction with its index-form value.
#[derive(Clone, Debug)]
pub struct Certificate {
    pub kind: CertificateKind,
    pub q_value: f64,
    /// Q(u,u)/‖u‖² in the L² mass norm.
    pub rayleigh: f64,
    pub support: String,
    pub variation: DiscretizedVariation,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CertificateKind {
    /// Combination of component-boundary indicators of the largest-pressure
    /// region.
    LargestPressureComponents,
    /// Opposed sweeps of two congruent boundary 3-components of one region.
    TwoBoundaryThreeComponents,
    /// A Jacobi function with at least four nodal regions.
    NodalRegions,
}

impl CertificateKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            CertificateKind::LargestPressureComponents => "largest-pressure-components",
            CertificateKind::TwoBoundaryThreeComponents => "two-boundary-3-components",
            CertificateKind::NodalRegions => "nodal-regions",
        }
    }
}

/// Report of the component-count bound for the largest-pressure region.
#[derive(Debug)]
pub struct LargestPressureReport {
    pub region: RegionId,
    pub pressure: f64,
    pub nonhexagonal_components: usize,
    /// The bound n − 1 from the component-count argument.
    pub bound: usize,
    pub satisfied: bool,
    pub components: Vec<ComponentInfo>,
    pub certificate: Option<Certificate>,
}

fn component_infos(g: &PartitionGraph, region: RegionId) -> Vec<ComponentInfo> {
    g.regions[region.0]
        .components
        .iter()
        .enumerate()
        .map(|(idx, cycle)| {
            let interior = g.component_is_interior(cycle);
            let edge_count = g.component_edge_count(cycle);
            let all_segments = cycle.iter().all(|w| match w {
                Walk::Edge { id, .. } => g.edges[id.0].arc.is_segment(),
                Walk::BoundaryArc { .. } => false,
            });
            let interior_perimeter = cycle
                .iter()
                .map(|w| match w {
                    Walk::Edge { id, .. } => g.edges[id.0].arc.length(),
                    Walk::BoundaryArc { .. } => 0.0,
                })
                .sum();
            ComponentInfo {
                region,
                index: idx,
                interior,
                edge_count,
                hexagonal: interior && edge_count == 6 && all_segments,
                interior_perimeter,
            }
        })
        .collect()
}

/// Indicator of ∂Ω ∩ int D for one component, extended by zero, with respect
/// to the normals pointing into the component's region.
pub fn component_indicator(
    disc: &Discretization,
    region: RegionId,
    cycle: &[Walk],
) -> DiscretizedVariation {
    let mut u = DiscretizedVariation::zeros(disc);
    for w in cycle {
        if let Walk::Edge { id, .. } = w {
            let e = &disc.graph.edges[id.0];
            let val = if e.left == region { 1.0 } else { -1.0 };
            for k in 0..=disc.m {
                u.values[disc.dof(*id, k)] = val;
            }
        }
    }
    u
}

/// Identifies the largest-pressure region, counts its nonhexagonal
/// components, and when the count exceeds n−1 constructs the explicit
/// destabilizing combination of component indicators.
pub fn largest_pressure_component_bound(
    g: &PartitionGraph,
    m: usize,
) -> Result<LargestPressureReport> {
    let n_regions = g.regions.len();
    let max_p = g
        .regions
        .iter()
        .map(|r| r.pressure)
        .fold(f64::NEG_INFINITY, f64::max);
    let tied: Vec<RegionId> = (0..n_regions)
        .map(RegionId)
        .filter(|r| g.regions[r.0].pressure > max_p - 1e-9)
        .collect();

    let mut fallback: Option<LargestPressureReport> = None;
    for region in tied {
        let infos = component_infos(g, region);
        let nonhex: Vec<ComponentInfo> = infos.iter().filter(|c| !c.hexagonal).cloned().collect();
        let count = nonhex.len();
        let bound = n_regions - 1;
        if count <= bound {
            // the bound holds, but a pair of congruent interior components
            // of a largest-pressure region still destabilizes: swap them
            // with a +1/−1 indicator pair
            if let Some(cert) = congruent_pair_certificate(g, region, &nonhex, m)? {
                return Ok(LargestPressureReport {
                    region,
                    pressure: g.regions[region.0].pressure,
                    nonhexagonal_components: count,
                    bound,
                    satisfied: true,
                    components: infos,
                    certificate: Some(cert),
                });
            }
            if fallback.is_none() {
                fallback = Some(LargestPressureReport {
                    region,
                    pressure: g.regions[region.0].pressure,
                    nonhexagonal_components: count,
                    bound,
                    satisfied: true,
                    components: infos,
                    certificate: None,
                });
            }
            continue;
        }

        let ifm = assemble_index_form(g, m)?;
        let indicators: Vec<DiscretizedVariation> = nonhex
            .iter()
            .map(|c| {
                component_indicator(&ifm.disc, region, &g.regions[region.0].components[c.index])
            })
            .collect();
        let coeffs = area_preserving_combination(&ifm, &indicators, &nonhex)?;
        let mut u = DiscretizedVariation::zeros(&ifm.disc);
        for (c, ind) in coeffs.iter().zip(indicators.iter()) {
            for (uv, iv) in u.values.iter_mut().zip(ind.values.iter()) {
                *uv += c * iv;
            }
        }
        let q_value = ifm.apply(&u, &u);
        let rayleigh = q_value / ifm.mass_norm2(&u);
        let support = format!(
            "region {} components {:?}",
            region.0,
            nonhex.iter().map(|c| c.index).collect::<Vec<_>>()
        );
        return Ok(LargestPressureReport {
            region,
            pressure: g.regions[region.0].pressure,
            nonhexagonal_components: count,
            bound,
            satisfied: false,
            components: infos,
            certificate: Some(Certificate {
                kind: CertificateKind::LargestPressureComponents,
                q_value,
                rayleigh,
                support,
                variation: u,
            }),
        });
    }
    fallback.ok_or_else(|| Error::Consistency("no regions in graph".into()))
}

/// Builds the +1/−1 indicator pair on two congruent interior components of
/// a (tied-)largest-pressure region, if such a pair exists and satisfies
/// the mean-value conditions.
fn congruent_pair_certificate(
    g: &PartitionGraph,
    region: RegionId,
    nonhex: &[ComponentInfo],
    m: usize,
) -> Result<Option<Certificate>> {
    let interior: Vec<&ComponentInfo> = nonhex.iter().filter(|c| c.interior).collect();
    for i in 0..interior.len() {
        for j in (i + 1)..interior.len() {
            let (a, b) = (interior[i], interior[j]);
            if a.edge_count != b.edge_count
                || (a.interior_perimeter - b.interior_perimeter).abs() > 1e-8
            {
                continue;
            }
            let ifm = assemble_index_form(g, m)?;
            let ua =
                component_indicator(&ifm.disc, region, &g.regions[region.0].components[a.index]);
            let ub =
                component_indicator(&ifm.disc, region, &g.regions[region.0].components[b.index]);
            let mut u = DiscretizedVariation::zeros(&ifm.disc);
            for k in 0..u.values.len() {
                u.values[k] = ua.values[k] - ub.values[k];
            }
            let derivs = ifm.area_derivatives_exact(&u);
            if derivs.iter().any(|d| d.abs() > 1e-8) {
                continue;
            }
            let q_value = ifm.apply(&u, &u);
            let rayleigh = q_value / ifm.mass_norm2(&u);
            return Ok(Some(Certificate {
                kind: CertificateKind::LargestPressureComponents,
                q_value,
                rayleigh,
                support: format!(
                    "region {} congruent interior components {} and {}",
                    region.0, a.index, b.index
                ),
                variation: u,
            }));
        }
    }
    Ok(None)
}

/// Picks coefficients making Σ c_i u_i area-preserving to first order.
/// Congruent pairs (the +1/−1 swap of two identical components) are tried
/// first; otherwise a null vector of the area-derivative matrix is used.
fn area_preserving_combination(
    ifm: &IndexFormMatrix,
    indicators: &[DiscretizedVariation],
    infos: &[ComponentInfo],
) -> Result<Vec<f64>> {
    let n = ifm.area_rows.nrows();
    let cols = indicators.len();
    let mut d = DMatrix::<f64>::zeros(n, cols);
    for (j, ind) in indicators.iter().enumerate() {
        let derivs = ifm.area_derivatives_exact(ind);
        for i in 0..n {
            d[(i, j)] = derivs[i];
        }
    }
    let scale = d.norm().max(1e-30);
    for i in 0..cols {
        for j in (i + 1)..cols {
            if (infos[i].interior_perimeter - infos[j].interior_perimeter).abs() < 1e-6 {
                let mut probe = DVector::<f64>::zeros(cols);
                probe[i] = 1.0;
                probe[j] = -1.0;
                if (&d * &probe).norm() < 1e-6 * scale {
                    let mut c = vec![0.0; cols];
                    c[i] = 1.0;
                    c[j] = -1.0;
                    return Ok(c);
                }
            }
        }
    }
    let svd = nalgebra::SVD::new(d.clone(), true, true);
    let vt = svd
        .v_t
        .as_ref()
        .ok_or_else(|| Error::Consistency("svd failed".into()))?;
    let sv = &svd.singular_values;
    // with cols > rank(d) a null combination exists; take the right singular
    // vector of the smallest singular value, checking it really annihilates d
    let mut best: Option<(f64, Vec<f64>)> = None;
    for i in 0..vt.nrows() {
        let cand: Vec<f64> = vt.row(i).iter().copied().collect();
        let vec = DVector::from_column_slice(&cand);
        let resid = (&d * vec).norm();
        if best.as_ref().is_none_or(|(r, _)| resid < *r) {
            best = Some((resid, cand));
        }
    }
    let _ = sv;
    let (resid, coeffs) = best.ok_or_else(|| Error::Consistency("svd failed".into()))?;
    if resid > 1e-6 * scale {
        return Err(Error::Consistency(format!(
            "no area-preserving combination of component indicators (residual {resid})"
        )));
    }
    Ok(coeffs)
}

/// Builds the sweep field of a boundary 3-component: the infinitesimal
/// motion of its vertex along the third edge, which changes only the cap's
/// two edges (the one-parameter family of standard completions over the
/// third edge's extension). Returns None when the cap does not match its
/// completion family (a genuinely non-stationary cap).
fn cap_sweep_field(disc: &Discretization, cycle: &[Walk]) -> Result<Option<DiscretizedVariation>> {
    use crate::standard::{complete_from_edge, TwoRegionSplitter};

    let g = &disc.graph;
    let cap_edges: Vec<EdgeId> = cycle
        .iter()
        .filter_map(|w| match w {
            Walk::Edge { id, .. } => Some(*id),
            _ => None,
        })
        .collect();
    if cap_edges.len() != 2 {
        return Ok(None);
    }
    // shared interior vertex of the two cap edges
    let ends = |e: EdgeId| [g.edges[e.0].v0, g.edges[e.0].v1];
    let mut shared = None;
    for a in ends(cap_edges[0]) {
        for b in ends(cap_edges[1]) {
            if a == b && g.vertices[a.0].kind == VertexKind::Interior {
                shared = Some(a);
            }
        }
    }
    let Some(w) = shared else { return Ok(None) };
    let w_pt = g.vertices[w.0].point;
    let third = g
        .incident(w)
        .into_iter()
        .find(|inc| !cap_edges.contains(&inc.edge))
        .ok_or_else(|| Error::topology("degree-3 vertex without a third edge"))?;
    let third_arc = {
        let e = &g.edges[third.edge.0];
        if third.departs {
            e.arc
        } else {
            e.arc.reversed()
        }
    };
    // extend the third edge's supporting circle to a full splitter; the cap
    // grows toward the splitter's p1 end, i.e. away from the third edge
    let departure = third_arc.tangent_at(0.0);
    let make_splitter = |flip: bool| -> Result<TwoRegionSplitter> {
        // arc through w in the direction opposite the third edge
        let theta = (-departure).angle();
        let kappa = -third_arc.h; // reversing travel direction flips h
        let ahead = crate::geometry::arc_to_unit_circle(w_pt, theta, kappa)?;
        let behind =
            crate::geometry::arc_to_unit_circle(w_pt, theta + std::f64::consts::PI, -kappa)?;
        let (p0, p1, h) = if !flip {
            // travel from behind's far endpoint to ahead's far endpoint
            (behind.p1, ahead.p1, kappa)
        } else {
            (ahead.p1, behind.p1, -kappa)
        };
        Ok(TwoRegionSplitter {
            edge: crate::geometry::ArcEdge::new(p0, p1, h)?,
        })
    };
    // pick the orientation whose completion reproduces the cap
    let mut chosen = None;
    for flip in [false, true] {
        let Ok(splitter) = make_splitter(flip) else {
            continue;
        };
        let Ok(completion) = complete_from_edge(&splitter, w_pt) else {
            continue;
        };
        // match each completed edge to a cap edge by boundary endpoint
        let comp = [completion.c23, completion.c31];
        let mut ok = true;
        let mut pairing = [0usize; 2];
        for (ci, c) in comp.iter().enumerate() {
            let boundary_end = c.p0; // completion edges run boundary → vertex
            let mut matched = None;
            for &eid in &cap_edges {
                let e = &g.edges[eid.0];
                let cap_boundary = if g.vertices[e.v0.0].kind == VertexKind::Boundary {
                    e.arc.p0
                } else {
                    e.arc.p1
                };
                if cap_boundary.dist(boundary_end) < 1e-5 {
                    matched = Some(eid.0);
                }
            }
            match matched {
                Some(eidx) => pairing[ci] = eidx,
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            chosen = Some((splitter, pairing));
            break;
        }
    }
    let Some((splitter, pairing)) = chosen else {
        return Ok(None);
    };

    // central-difference normal velocity of the family as the vertex slides
    let (s_w, dist) = splitter.edge.closest(w_pt);
    if dist > 1e-6 {
        return Ok(None);
    }
    let delta = 1e-5;
    let plus = complete_from_edge(&splitter, splitter.edge.point_at(s_w + delta))?;
    let minus = complete_from_edge(&splitter, splitter.edge.point_at(s_w - delta))?;

    let mut u = DiscretizedVariation::zeros(disc);
    for (ci, &eidx) in pairing.iter().enumerate() {
        let eid = EdgeId(eidx);
        let arc_plus = [plus.c23, plus.c31][ci];
        let arc_minus = [minus.c23, minus.c31][ci];
        let edge = &g.edges[eidx];
        for k in 0..=disc.m {
            let x = disc.node_point(eid, k);
            let n = disc.node_normal(eid, k);
            let q_plus = arc_plus.point_at(arc_plus.closest(x).0);
            let q_minus = arc_minus.point_at(arc_minus.closest(x).0);
            u.values[disc.dof(eid, k)] = (q_plus - q_minus).dot(n) / (2.0 * delta);
        }
        // exact value at the sliding vertex: the velocity is the splitter
        // tangent, so the normal component is analytic
        let t_hat = splitter.edge.tangent_at(s_w);
        let (node, s_end) = if edge.v0 == w {
            (0, 0.0)
        } else {
            (disc.m, edge.arc.length())
        };
        u.values[disc.dof(eid, node)] = t_hat.dot(edge.arc.normal_at(s_end));
    }
    Ok(Some(u))
}

/// Detects a region with two boundary 3-components and builds the opposed
/// sweep certificate: each cap slides along its third edge, the opposed
/// combination preserves all areas (the caps are congruent on stationary
/// graphs) and strictly decreases length to second order.
pub fn boundary_cap_certificate(g: &PartitionGraph, m: usize) -> Result<Option<Certificate>> {
    for (ri, region) in g.regions.iter().enumerate() {
        let caps: Vec<usize> = region
            .components
            .iter()
            .enumerate()
            .filter(|(_, c)| !g.component_is_interior(c) && g.component_edge_count(c) == 3)
            .map(|(i, _)| i)
            .collect();
        if caps.len() < 2 {
            continue;
        }
        let ifm = assemble_index_form(g, m)?;
        let u1 = cap_sweep_field(&ifm.disc, &region.components[caps[0]])?;
        let u2 = cap_sweep_field(&ifm.disc, &region.components[caps[1]])?;
        let (Some(u1), Some(u2)) = (u1, u2) else {
            continue;
        };
        let d1 = ifm.area_derivatives_exact(&u1);
        let d2 = ifm.area_derivatives_exact(&u2);
        // c1 u1 + c2 u2 with zero area derivatives: least-squares ratio
        let dot12: f64 = d1.iter().zip(d2.iter()).map(|(a, b)| a * b).sum();
        let dot22: f64 = d2.iter().map(|b| b * b).sum();
        if dot22 < 1e-20 {
            continue;
        }
        let t = dot12 / dot22;
        let residual: f64 = d1
            .iter()
            .zip(d2.iter())
            .map(|(a, b)| (a - t * b) * (a - t * b))
            .sum::<f64>()
            .sqrt();
        let scale: f64 = d1.iter().map(|a| a * a).sum::<f64>().sqrt();
        if residual > 1e-3 * scale.max(1e-12) {
            // caps are not congruent enough to cancel areas
            continue;
        }
        let mut u = DiscretizedVariation::zeros(&ifm.disc);
        for k in 0..u.values.len() {
            u.values[k] = u1.values[k] - t * u2.values[k];
        }
        // clean residual first-order area drift before evaluating Q
        let u = ifm.project_constraints(&u)?;
        let q_value = ifm.apply(&u, &u);
        let rayleigh = q_value / ifm.mass_norm2(&u);
        return Ok(Some(Certificate {
            kind: CertificateKind::TwoBoundaryThreeComponents,
            q_value,
            rayleigh,
            support: format!(
                "region {} boundary 3-components {} and {}",
                ri, caps[0], caps[1]
            ),
            variation: u,
        }));
    }
    Ok(None)
}

/// Stability verdict for a stationary graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Stable,
    Unstable,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Stable => "stable",
            Verdict::Unstable => "unstable",
        }
    }
}

/// Full stability analysis: constrained spectrum plus every certificate the
/// catalog arguments provide.
pub struct StabilityReport {
    pub eigenvalues: Vec<f64>,
    pub constraint_rank: usize,
    pub rank_deficient: bool,
    pub verdict: Verdict,
    pub certificates: Vec<Certificate>,
    /// Nodal count of the rotation Jacobi function, when conclusive.
    pub rotation_nodal_count: Option<usize>,
}

/// Runs the constrained eigensolve and all certificate detectors.
pub fn stability_report(g: &PartitionGraph, m: usize, k: usize) -> Result<StabilityReport> {
    let ifm = assemble_index_form(g, m)?;
    let sol = constrained_min_eigenvalue(&ifm, k.max(1))?;

    let mut certificates = Vec::new();
    if let Some(cert) = boundary_cap_certificate(g, m)? {
        if cert.q_value < -1e-9 {
            certificates.push(cert);
        }
    }
    let bound_report = largest_pressure_component_bound(g, m)?;
    if let Some(cert) = bound_report.certificate {
        if cert.q_value < -1e-9 {
            certificates.push(cert);
        }
    }
    // rotation Jacobi nodal count (conclusive for three regions only, and
    // only when no nodal point sits on a vertex)
    let mut rotation_nodal_count = None;
    let u_rot = rotation_jacobi(&ifm.disc);
    if jacobi_residual(&ifm.disc, &u_rot) < 1e-8 {
        let nodal = nodal_region_count(&ifm.disc, &u_rot);
        if nodal.vertex_flags.is_empty() && !nodal.identically_zero {
            rotation_nodal_count = Some(nodal.count);
            if nodal.count >= 4 && g.regions.len() == 3 {
                certificates.push(Certificate {
                    kind: CertificateKind::NodalRegions,
                    q_value: 0.0,
                    rayleigh: 0.0,
                    support: format!(
                        "rotation Jacobi function with {} nodal regions",
                        nodal.count
                    ),
                    variation: u_rot,
                });
            }
        }
    }

    let lambda_min = sol.eigenvalues.first().copied().unwrap_or(f64::NAN);
    let verdict = if lambda_min < -1e-6 || !certificates.is_empty() {
        Verdict::Unstable
    } else {
        Verdict::Stable
    };
    Ok(StabilityReport {
        eigenvalues: sol.eigenvalues,
        constraint_rank: sol.constraint_rank,
        rank_deficient: sol.rank_deficient,
        verdict,
        certificates,
        rotation_nodal_count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::{solve_three_areas, AreaTargets};
    use std::f64::consts::PI;

    fn standard_graph(a: [f64; 3]) -> PartitionGraph {
        let t = AreaTargets::new(a.to_vec()).unwrap();
        solve_three_areas(&t).unwrap().to_partition_graph().unwrap()
    }

    #[test]
    fn rotation_jacobi_is_compatible_and_jacobi() {
        let g = standard_graph([1.2, 0.9, PI - 2.1]);
        let disc = Discretization::new(&g, 32).unwrap();
        let u = rotation_jacobi(&disc);
        assert!(u.compatibility_residual(&disc) < 1e-12);
        assert!(jacobi_residual(&disc, &u) < 1e-10);
    }

    #[test]
    fn rotation_jacobi_on_equal_areas_radii() {
        // the rotation field is perpendicular to radii, so u grows linearly
        // from the center (u = ±s) and vanishes only at the center vertex
        let g = standard_graph([PI / 3.0, PI / 3.0, PI / 3.0]);
        let disc = Discretization::new(&g, 16).unwrap();
        let u = rotation_jacobi(&disc);
        for ei in 0..g.edges.len() {
            let eid = EdgeId(ei);
            let vals = u.edge_values(&disc, eid);
            for (k, v) in vals.iter().enumerate() {
                let r = disc.node_point(eid, k).norm();
                assert!((v.abs() - r).abs() < 1e-9, "|u| = distance from center");
            }
        }
        // Q(u_rot, u_rot) = 0 exactly: 3·∫u'² − 3·u(1)² = 0
        let ifm = assemble_index_form(&g, 16).unwrap();
        assert!(ifm.apply(&u, &u).abs() < 1e-9);
        // the center vertex is a nodal point, so the count is flagged
        let report = nodal_region_count(&disc, &u);
        assert_eq!(report.count, 3);
        assert_eq!(report.vertex_flags.len(), 1);
        assert!(!report.identically_zero);
    }

    #[test]
    fn rotation_is_a_null_direction_of_q() {
        let g = standard_graph([1.4, 1.0, PI - 2.4]);
        let ifm = assemble_index_form(&g, DEFAULT_M).unwrap();
        let u = rotation_jacobi(&ifm.disc);
        let q = ifm.apply(&u, &u);
        assert!(q.abs() < 1e-6, "Q(u_rot, u_rot) = {q}");
        for da in ifm.area_derivatives_exact(&u) {
            assert!(da.abs() < 1e-9, "rotation preserves areas, dA = {da}");
        }
    }

    #[test]
    fn area_derivative_examples() {
        let g = standard_graph([1.0, 1.1, PI - 2.1]);
        let disc = Discretization::new(&g, DEFAULT_M).unwrap();
        let zero = DiscretizedVariation::zeros(&disc);
        for da in area_derivatives(&disc, &zero) {
            assert_eq!(da, 0.0);
        }
        // u = 1 on the boundary of region 0 (into the region): the region
        // loses area at the rate of its interior perimeter
        let u = component_indicator(&disc, RegionId(0), &g.regions[0].components[0]);
        let das = area_derivatives(&disc, &u);
        let perim: f64 = g.regions[0].components[0]
            .iter()
            .filter_map(|w| match w {
                Walk::Edge { id, .. } => Some(g.edges[id.0].arc.length()),
                _ => None,
            })
            .sum();
        assert!(
            (das[0] + perim).abs() < 1e-9,
            "dA0 = {}, perim = {perim}",
            das[0]
        );
        assert!((das[1] + das[2] - perim).abs() < 1e-9);
    }

    #[test]
    fn standard_graphs_are_stable() {
        for areas in [
            [PI / 3.0, PI / 3.0, PI / 3.0],
            [1.5, 1.0, PI - 2.5],
            [0.5, 1.2, PI - 1.7],
        ] {
            let g = standard_graph(areas);
            let ifm = assemble_index_form(&g, DEFAULT_M).unwrap();
            let sol = constrained_min_eigenvalue(&ifm, 3).unwrap();
            assert!(
                sol.eigenvalues[0] >= -1e-6,
                "standard graph must be stable, lambda_min = {} for {areas:?}",
                sol.eigenvalues[0]
            );
            assert!(
                !sol.rank_deficient,
                "constraint rank {}",
                sol.constraint_rank
            );
        }
    }

    #[test]
    fn eigenvalues_converge_under_refinement() {
        // verdicts are driven by the smallest eigenvalue, which must be
        // insensitive to m → 2m at the default resolution; higher modes
        // converge at the O(λ²Δ²) element rate and are held to a relative
        // version of the same bound
        let g = standard_graph([1.3, 0.8, PI - 2.1]);
        let coarse =
            constrained_min_eigenvalue(&assemble_index_form(&g, DEFAULT_M).unwrap(), 2).unwrap();
        let fine = constrained_min_eigenvalue(&assemble_index_form(&g, 2 * DEFAULT_M).unwrap(), 2)
            .unwrap();
        let drift_min = (coarse.eigenvalues[0] - fine.eigenvalues[0]).abs();
        assert!(drift_min < 1e-4, "lambda_min drift {drift_min}");
        let drift2 = (coarse.eigenvalues[1] - fine.eigenvalues[1]).abs();
        assert!(
            drift2 < 2e-4 * (1.0 + coarse.eigenvalues[1].abs()),
            "lambda_2 relative drift: {} vs {}",
            coarse.eigenvalues[1],
            fine.eigenvalues[1]
        );
    }

    #[test]
    fn diameter_splitter_is_stable() {
        let s = crate::standard::splitter_from_curvature(0.0).unwrap();
        let g = s.to_partition_graph().unwrap();
        let ifm = assemble_index_form(&g, DEFAULT_M).unwrap();
        let sol = constrained_min_eigenvalue(&ifm, 2).unwrap();
        assert!(
            sol.eigenvalues[0] >= -1e-6,
            "lambda_min = {}",
            sol.eigenvalues[0]
        );
    }

    #[test]
    fn largest_pressure_bound_on_standard_graph() {
        let g = standard_graph([1.2, 1.0, PI - 2.2]);
        let report = largest_pressure_component_bound(&g, 32).unwrap();
        assert!(report.satisfied);
        assert_eq!(report.nonhexagonal_components, 1);
        assert!(report.certificate.is_none());
    }

    #[test]
    fn stability_report_verdicts() {
        let g = standard_graph([1.2, 1.0, PI - 2.2]);
        let report = stability_report(&g, DEFAULT_M, 3).unwrap();
        assert_eq!(report.verdict, Verdict::Stable);
        assert!(report.certificates.is_empty());
        assert!(report.eigenvalues[0] >= -1e-6);

        let conf_a = crate::configurations::configuration_a(1.0).unwrap();
        let report = stability_report(&conf_a, 48, 2).unwrap();
        assert_eq!(report.verdict, Verdict::Unstable);
        assert!(report.eigenvalues[0] < -1e-3);
        let kinds: Vec<&str> = report
            .certificates
            .iter()
            .map(|c| c.kind.as_str())
            .collect();
        assert!(
            kinds.contains(&"two-boundary-3-components"),
            "certificates: {kinds:?}"
        );
        let cap_cert = report
            .certificates
            .iter()
            .find(|c| c.kind == CertificateKind::TwoBoundaryThreeComponents)
            .unwrap();
        assert!(cap_cert.q_value < -1e-4, "Q = {}", cap_cert.q_value);

        let hex = crate::configurations::hexagon_graph(PI / 3.0).unwrap();
        let report = stability_report(&hex, 48, 2).unwrap();
        assert_eq!(report.verdict, Verdict::Unstable);
        let kinds: Vec<&str> = report
            .certificates
            .iter()
            .map(|c| c.kind.as_str())
            .collect();
        assert!(
            kinds.contains(&"largest-pressure-components"),
            "certificates: {kinds:?}"
        );

        let conf_c =
            crate::configurations::configuration_c(crate::geometry::Point::new(0.26, 0.4)).unwrap();
        let report = stability_report(&conf_c, 48, 2).unwrap();
        assert_eq!(report.verdict, Verdict::Unstable);
        let kinds: Vec<&str> = report
            .certificates
            .iter()
            .map(|c| c.kind.as_str())
            .collect();
        assert!(kinds.contains(&"nodal-regions"), "certificates: {kinds:?}");
    }
}

#[cfg(test)]
mod vertex_identity_tests {
    use super::*;
    use crate::solver::{solve_three_areas, AreaTargets};

    /// At interior vertices on the boundary of a largest-pressure-region
    /// component, the two vertex coefficients sum to (h_k1 + h_j1)/√3 ≤ 0.
    #[test]
    fn vertex_coefficient_identity_on_largest_pressure_components() {
        let graphs = vec![
            solve_three_areas(
                &AreaTargets::new(vec![1.4, 1.0, std::f64::consts::PI - 2.4]).unwrap(),
            )
            .unwrap()
            .to_partition_graph()
            .unwrap(),
            crate::configurations::configuration_a(1.1).unwrap(),
        ];
        for g in &graphs {
            let max_p = g
                .regions
                .iter()
                .map(|r| r.pressure)
                .fold(f64::NEG_INFINITY, f64::max);
            let region = RegionId(
                (0..g.regions.len())
                    .find(|r| g.regions[*r].pressure > max_p - 1e-12)
                    .unwrap(),
            );
            for cycle in &g.regions[region.0].components {
                for w in cycle {
                    let Walk::Edge { id, .. } = w else { continue };
                    for v in [g.edges[id.0].v0, g.edges[id.0].v1] {
                        if g.vertices[v.0].kind != VertexKind::Interior {
                            continue;
                        }
                        // the two component edges at this vertex
                        let incident: Vec<EdgeId> = g
                            .incident(v)
                            .iter()
                            .map(|i| i.edge)
                            .filter(|e| {
                                let edge = &g.edges[e.0];
                                edge.left == region || edge.right == region
                            })
                            .collect();
                        assert_eq!(incident.len(), 2);
                        let q_sum: f64 = incident
                            .iter()
                            .map(|e| vertex_coefficient(g, v, *e).unwrap())
                            .sum();
                        // (h_k1 + h_j1)/√3 with j, k the other two regions
                        let others: Vec<f64> = (0..g.regions.len())
                            .filter(|r| RegionId(*r) != region)
                            .map(|r| g.regions[r].pressure)
                            .collect();
                        let expected = (others[0] + others[1] - 2.0 * g.regions[region.0].pressure)
                            / 3f64.sqrt();
                        assert!(
                            (q_sum - expected).abs() < 1e-9,
                            "identity violated: {q_sum} vs {expected}"
                        );
                        assert!(q_sum <= 1e-12, "largest pressure forces q-sum ≤ 0: {q_sum}");
                    }
                }
            }
        }
    }
}
