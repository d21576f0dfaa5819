//! Independent finite-difference oracles for the variational formulas.
//!
//! Everything here evaluates lengths and areas of explicitly deformed
//! curves by dense per-element Gauss–Legendre quadrature and differentiates
//! them numerically. It shares no code path with the index-form assembly in
//! [`crate::stability`], which is why it can arbitrate it:
//!
//! * [`fd_first_variation`] ≈ dL/dt against `first_variation_length`;
//! * [`fd_area_derivatives`] ≈ dA_i/dt against `area_derivatives`;
//! * [`fd_index_form`] ≈ d²(L − Σ p_i A_i)/dt², which equals Q(u,u) for
//!   variations preserving areas to first order on a stationary graph
//!   (tangential blending and the second-order endpoint corrections cancel
//!   through stationarity).
//!
//! Deformations are generated by the piecewise-Jacobi interpolant of the
//! nodal values — the same function space the assembly integrates — so the
//! comparison isolates the assembly (signs, vertex terms, boundary terms)
//! rather than the interpolation of some unrelated smooth field.

use std::f64::consts::PI;

use crate::error::Error;
use crate::geometry::{ArcEdge, Point, SEGMENT_CURVATURE_EPS};
use crate::graph::{PartitionGraph, VertexKind, Walk};
use crate::stability::{Discretization, DiscretizedVariation};
use crate::util::SplitMix64;
use crate::Result;

/// Smooth per-edge seed amplitude used to generate random admissible
/// variations: linear endpoint interpolation plus interior sine bumps.
#[derive(Clone, Debug)]
pub struct EdgeSeed {
    pub end0: f64,
    pub end1: f64,
    pub bumps: Vec<f64>,
}

impl EdgeSeed {
    pub fn eval(&self, s: f64, len: f64) -> f64 {
        let t = s / len;
        let mut u = self.end0 * (1.0 - t) + self.end1 * t;
        for (k, c) in self.bumps.iter().enumerate() {
            u += c * ((k + 1) as f64 * PI * t).sin();
        }
        u
    }
}

/// A random admissible variation in both smooth and sampled form.
pub struct RandomVariation {
    pub vertex_velocity: Vec<Point>,
    pub seeds: Vec<EdgeSeed>,
    pub sampled: DiscretizedVariation,
}

/// Random admissible variation: vertex velocities (tangential at the
/// boundary) fix the endpoint values, sine bumps fill the interiors, and the
/// result is sampled at the discretization nodes. Junction compatibility
/// holds by construction.
pub fn random_admissible(
    disc: &Discretization,
    rng: &mut SplitMix64,
    bumps: usize,
    scale: f64,
) -> RandomVariation {
    let g = &disc.graph;
    let vertex_velocity: Vec<Point> = g
        .vertices
        .iter()
        .map(|v| match v.kind {
            VertexKind::Interior => Point::new(rng.range(-scale, scale), rng.range(-scale, scale)),
            VertexKind::Boundary => v.point.rot90().scale(rng.range(-scale, scale)),
        })
        .collect();
    let seeds: Vec<EdgeSeed> = g
        .edges
        .iter()
        .map(|e| {
            let n0 = e.arc.normal_at(0.0);
            let n1 = e.arc.normal_at(e.arc.length());
            EdgeSeed {
                end0: vertex_velocity[e.v0.0].dot(n0),
                end1: vertex_velocity[e.v1.0].dot(n1),
                bumps: (0..bumps).map(|_| rng.range(-scale, scale)).collect(),
            }
        })
        .collect();
    let lens: Vec<f64> = g.edges.iter().map(|e| e.arc.length()).collect();
    let sampled = DiscretizedVariation::from_fn(disc, |e, s, _| seeds[e.0].eval(s, lens[e.0]));
    RandomVariation {
        vertex_velocity,
        seeds,
        sampled,
    }
}

/// The piecewise-Jacobi interpolant of nodal values on one edge: on each
/// interval it solves u'' + h²u = 0 through the two nodal values.
#[derive(Clone, Debug)]
pub struct EdgeInterpolant {
    pub h: f64,
    pub dl: f64,
    pub values: Vec<f64>,
}

impl EdgeInterpolant {
    fn locate(&self, s: f64) -> (usize, f64) {
        let m = self.values.len() - 1;
        let mut k = (s / self.dl).floor() as usize;
        if k >= m {
            k = m - 1;
        }
        (k, s - k as f64 * self.dl)
    }

    pub fn eval(&self, s: f64) -> f64 {
        let (k, local) = self.locate(s);
        let (a, b) = (self.values[k], self.values[k + 1]);
        if self.h.abs() < SEGMENT_CURVATURE_EPS {
            let t = local / self.dl;
            a * (1.0 - t) + b * t
        } else {
            let x = self.h * self.dl;
            (a * (self.h * (self.dl - local)).sin() + b * (self.h * local).sin()) / x.sin()
        }
    }

    pub fn deriv(&self, s: f64) -> f64 {
        let (k, local) = self.locate(s);
        let (a, b) = (self.values[k], self.values[k + 1]);
        if self.h.abs() < SEGMENT_CURVATURE_EPS {
            (b - a) / self.dl
        } else {
            let x = self.h * self.dl;
            self.h * (-a * (self.h * (self.dl - local)).cos() + b * (self.h * local).cos())
                / x.sin()
        }
    }
}

/// Normal amplitude along one edge, either the piecewise-Jacobi interpolant
/// of nodal values or a smooth seed function.
#[derive(Clone, Debug)]
pub enum Amplitude {
    Interpolant(EdgeInterpolant),
    Smooth { seed: EdgeSeed, len: f64 },
}

impl Amplitude {
    fn eval(&self, s: f64) -> f64 {
        match self {
            Amplitude::Interpolant(i) => i.eval(s),
            Amplitude::Smooth { seed, len } => seed.eval(s, *len),
        }
    }

    fn deriv(&self, s: f64) -> f64 {
        match self {
            Amplitude::Interpolant(i) => i.deriv(s),
            Amplitude::Smooth { seed, len } => {
                let t = s / len;
                let mut du = (seed.end1 - seed.end0) / len;
                for (k, c) in seed.bumps.iter().enumerate() {
                    let w = (k + 1) as f64 * PI / len;
                    du += c * w * (w * s).cos();
                }
                let _ = t;
                du
            }
        }
    }
}

/// A deformation of a graph generated by normal components: per-edge
/// amplitudes plus the consistent vertex velocities.
pub struct Deformation {
    pub graph: PartitionGraph,
    pub m: usize,
    pub vertex_velocity: Vec<Point>,
    pub edges: Vec<Amplitude>,
}

/// Builds the (piecewise-Jacobi) deformation generated by a sampled
/// variation.
pub fn deformation(disc: &Discretization, u: &DiscretizedVariation) -> Result<Deformation> {
    let g = &disc.graph;
    let mut vertex_velocity = Vec::with_capacity(g.vertices.len());
    for vi in 0..g.vertices.len() {
        let x = u
            .vertex_velocity(disc, crate::graph::VertexId(vi))
            .ok_or_else(|| {
                Error::Consistency(format!("vertex velocity unrecoverable at vertex {vi}"))
            })?;
        vertex_velocity.push(x);
    }
    let edges = g
        .edges
        .iter()
        .enumerate()
        .map(|(ei, e)| {
            Amplitude::Interpolant(EdgeInterpolant {
                h: e.arc.h,
                dl: disc.step(crate::graph::EdgeId(ei)),
                values: u.edge_values(disc, crate::graph::EdgeId(ei)).to_vec(),
            })
        })
        .collect();
    Ok(Deformation {
        graph: g.clone(),
        m: disc.m,
        vertex_velocity,
        edges,
    })
}

/// Builds the smooth deformation generated directly by a random variation's
/// seed functions.
pub fn smooth_deformation(g: &PartitionGraph, var: &RandomVariation, m: usize) -> Deformation {
    let edges = g
        .edges
        .iter()
        .zip(var.seeds.iter())
        .map(|(e, seed)| Amplitude::Smooth {
            seed: seed.clone(),
            len: e.arc.length(),
        })
        .collect();
    Deformation {
        graph: g.clone(),
        m,
        vertex_velocity: var.vertex_velocity.clone(),
        edges,
    }
}

const GL8_X: [f64; 8] = [
    -0.9602898564975363,
    -0.7966664774136267,
    -0.525532409916329,
    -0.18343464249564978,
    0.18343464249564978,
    0.525532409916329,
    0.7966664774136267,
    0.9602898564975363,
];
const GL8_W: [f64; 8] = [
    0.10122853629037626,
    0.22238103445337448,
    0.31370664587788727,
    0.362683783378362,
    0.362683783378362,
    0.31370664587788727,
    0.22238103445337448,
    0.10122853629037626,
];

struct DeformedEdge<'a> {
    arc: ArcEdge,
    interp: &'a Amplitude,
    tau0: f64,
    tau1: f64,
    len: f64,
    fix0: Point,
    fix1: Point,
    t: f64,
}

impl<'a> DeformedEdge<'a> {
    fn position(&self, s: f64) -> Point {
        let tangent = self.arc.tangent_at(s);
        let normal = tangent.rot90();
        let u = self.interp.eval(s);
        let tau = self.tau0 * (1.0 - s / self.len) + self.tau1 * s / self.len;
        let w = normal.scale(u) + tangent.scale(tau);
        let hat0 = 1.0 - s / self.len;
        let hat1 = s / self.len;
        self.arc.point_at(s) + w.scale(self.t) + self.fix0.scale(hat0) + self.fix1.scale(hat1)
    }

    /// d(position)/ds.
    fn speed_vector(&self, s: f64) -> Point {
        let tangent = self.arc.tangent_at(s);
        let normal = tangent.rot90();
        let h = self.arc.h;
        let u = self.interp.eval(s);
        let du = self.interp.deriv(s);
        let tau = self.tau0 * (1.0 - s / self.len) + self.tau1 * s / self.len;
        let dtau = (self.tau1 - self.tau0) / self.len;
        // (uN + τT)' = (u' + τh)N + (τ' − uh)T
        let wprime = normal.scale(du + tau * h) + tangent.scale(dtau - u * h);
        let fix_slope = (self.fix1 - self.fix0).scale(1.0 / self.len);
        tangent + wprime.scale(self.t) + fix_slope
    }
}

struct DeformedGraph<'a> {
    def: &'a Deformation,
    t: f64,
    vertex_pos: Vec<Point>,
}

impl<'a> DeformedGraph<'a> {
    fn new(def: &'a Deformation, t: f64) -> Self {
        let vertex_pos = def
            .graph
            .vertices
            .iter()
            .enumerate()
            .map(|(vi, v)| match v.kind {
                VertexKind::Interior => v.point + def.vertex_velocity[vi].scale(t),
                VertexKind::Boundary => {
                    // rotate along the circle: tangential speed = angle rate
                    let speed = def.vertex_velocity[vi].dot(v.point.rot90());
                    v.point.rotated(t * speed)
                }
            })
            .collect();
        DeformedGraph { def, t, vertex_pos }
    }

    fn edge(&self, ei: usize) -> DeformedEdge<'_> {
        let e = &self.def.graph.edges[ei];
        let len = e.arc.length();
        let tau0 = self.def.vertex_velocity[e.v0.0].dot(e.arc.tangent_at(0.0));
        let tau1 = self.def.vertex_velocity[e.v1.0].dot(e.arc.tangent_at(len));
        let first0 = e.arc.p0 + self.def.vertex_velocity[e.v0.0].scale(self.t);
        let first1 = e.arc.p1 + self.def.vertex_velocity[e.v1.0].scale(self.t);
        DeformedEdge {
            arc: e.arc,
            interp: &self.def.edges[ei],
            tau0,
            tau1,
            len,
            fix0: self.vertex_pos[e.v0.0] - first0,
            fix1: self.vertex_pos[e.v1.0] - first1,
            t: self.t,
        }
    }

    /// ∫ f(s) ds with Gauss points aligned to the interpolant's elements
    /// (the integrand has kinks at element boundaries).
    fn integrate_edge(&self, ei: usize, mut f: impl FnMut(&DeformedEdge, f64) -> f64) -> f64 {
        let de = self.edge(ei);
        let m = self.def.m;
        let dl = de.len / m as f64;
        let mut total = 0.0;
        for k in 0..m {
            let mid = (k as f64 + 0.5) * dl;
            for (x, w) in GL8_X.iter().zip(GL8_W.iter()) {
                total += w * f(&de, mid + 0.5 * dl * x);
            }
        }
        total * 0.5 * dl
    }

    fn length(&self) -> f64 {
        (0..self.def.graph.edges.len())
            .map(|ei| self.integrate_edge(ei, |de, s| de.speed_vector(s).norm()))
            .sum()
    }

    fn areas(&self) -> Vec<f64> {
        let g = &self.def.graph;
        let mut edge_green = vec![0.0; g.edges.len()];
        for (ei, green) in edge_green.iter_mut().enumerate() {
            *green =
                self.integrate_edge(ei, |de, s| 0.5 * de.position(s).cross(de.speed_vector(s)));
        }
        let mut out = vec![0.0; g.regions.len()];
        for (ri, region) in g.regions.iter().enumerate() {
            for cycle in &region.components {
                for w in cycle {
                    match w {
                        Walk::Edge { id, forward } => {
                            out[ri] += if *forward {
                                edge_green[id.0]
                            } else {
                                -edge_green[id.0]
                            };
                        }
                        Walk::BoundaryArc { from, to } => {
                            // Green integral of a unit-circle arc is half its
                            // angular span
                            let a = self.vertex_pos[from.0].angle();
                            let b = self.vertex_pos[to.0].angle();
                            out[ri] += 0.5 * (b - a).rem_euclid(std::f64::consts::TAU);
                        }
                    }
                }
            }
        }
        out
    }
}

/// Length of the deformed graph at time t.
pub fn deformed_length(def: &Deformation, t: f64) -> f64 {
    DeformedGraph::new(def, t).length()
}

/// Region areas of the deformed graph at time t.
pub fn deformed_areas(def: &Deformation, t: f64) -> Vec<f64> {
    DeformedGraph::new(def, t).areas()
}

/// Central-difference dL/dt at t = 0.
pub fn fd_first_variation(def: &Deformation, eps: f64) -> f64 {
    (deformed_length(def, eps) - deformed_length(def, -eps)) / (2.0 * eps)
}

/// Central-difference dA_i/dt at t = 0.
pub fn fd_area_derivatives(def: &Deformation, eps: f64) -> Vec<f64> {
    let plus = deformed_areas(def, eps);
    let minus = deformed_areas(def, -eps);
    plus.iter()
        .zip(minus.iter())
        .map(|(p, m)| (p - m) / (2.0 * eps))
        .collect()
}

/// Second central difference of the pressure-augmented length
/// L − Σ p_i A_i, which equals Q(u,u) for variations preserving areas to
/// first order on a stationary graph.
pub fn fd_index_form(def: &Deformation, eps: f64) -> f64 {
    let l = [
        deformed_length(def, -eps),
        deformed_length(def, 0.0),
        deformed_length(def, eps),
    ];
    let a = [
        deformed_areas(def, -eps),
        deformed_areas(def, 0.0),
        deformed_areas(def, eps),
    ];
    let mut second = (l[0] - 2.0 * l[1] + l[2]) / (eps * eps);
    for (ri, region) in def.graph.regions.iter().enumerate() {
        let a2 = (a[0][ri] - 2.0 * a[1][ri] + a[2][ri]) / (eps * eps);
        second -= region.pressure * a2;
    }
    second
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::{solve_three_areas, AreaTargets};
    use crate::stability;

    fn standard_graph(a: [f64; 3]) -> PartitionGraph {
        let t = AreaTargets::new(a.to_vec()).unwrap();
        solve_three_areas(&t).unwrap().to_partition_graph().unwrap()
    }

    #[test]
    fn deformed_graph_at_zero_matches_the_graph() {
        let g = standard_graph([1.1, 0.9, std::f64::consts::PI - 2.0]);
        let disc = stability::Discretization::new(&g, 32).unwrap();
        let mut rng = SplitMix64::new(1);
        let u = random_admissible(&disc, &mut rng, 3, 0.3).sampled;
        let def = deformation(&disc, &u).unwrap();
        assert!((deformed_length(&def, 0.0) - g.perimeter()).abs() < 1e-12);
        for (a, b) in deformed_areas(&def, 0.0).iter().zip(g.areas().iter()) {
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn first_variation_matches_finite_differences() {
        let g = standard_graph([1.3, 1.1, std::f64::consts::PI - 2.4]);
        let disc = stability::Discretization::new(&g, 64).unwrap();
        let mut rng = SplitMix64::new(7);
        for trial in 0..5 {
            let u = random_admissible(&disc, &mut rng, 3, 0.4).sampled;
            let dl = stability::first_variation_length(&disc, &u).unwrap();
            let def = deformation(&disc, &u).unwrap();
            let fd = fd_first_variation(&def, 1e-5);
            let denom = fd.abs().max(1e-3);
            assert!(
                (dl - fd).abs() / denom < 1e-6,
                "trial {trial}: dL {dl} vs fd {fd}"
            );
        }
    }

    #[test]
    fn area_derivatives_match_finite_differences() {
        // Simpson quadrature targets smooth integrands, so compare against
        // the smooth deformation the samples came from
        let g = standard_graph([0.9, 1.4, std::f64::consts::PI - 2.3]);
        let disc = stability::Discretization::new(&g, 64).unwrap();
        let mut rng = SplitMix64::new(8);
        let var = random_admissible(&disc, &mut rng, 2, 0.5);
        let def = smooth_deformation(&g, &var, 64);
        let simpson = stability::area_derivatives(&disc, &var.sampled);
        let fd = fd_area_derivatives(&def, 1e-5);
        for (s, f) in simpson.iter().zip(fd.iter()) {
            assert!((s - f).abs() < 1e-6, "simpson {s} vs fd {f}");
        }
    }

    #[test]
    fn index_form_matches_augmented_second_difference() {
        let g = standard_graph([1.2, 1.0, std::f64::consts::PI - 2.2]);
        let ifm = stability::assemble_index_form(&g, 64).unwrap();
        let mut rng = SplitMix64::new(77);
        for trial in 0..5 {
            let raw = random_admissible(&ifm.disc, &mut rng, 3, 0.4);
            let u = ifm.project_constraints(&raw.sampled).unwrap();
            assert!(u.compatibility_residual(&ifm.disc) < 1e-9);
            let q = ifm.apply(&u, &u);
            let def = deformation(&ifm.disc, &u).unwrap();
            let fd = fd_index_form(&def, 1e-4);
            assert!(
                (q - fd).abs() / fd.abs().max(1e-6) < 1e-4,
                "trial {trial}: Q {q} vs fd {fd}"
            );
        }
    }

    #[test]
    fn stationary_area_preserving_first_variation_vanishes() {
        let g = standard_graph([1.0, 1.2, std::f64::consts::PI - 2.2]);
        let ifm = stability::assemble_index_form(&g, 64).unwrap();
        let mut rng = SplitMix64::new(5);
        let raw = random_admissible(&ifm.disc, &mut rng, 3, 0.4);
        let u = ifm.project_constraints(&raw.sampled).unwrap();
        let dl = stability::first_variation_length(&ifm.disc, &u).unwrap();
        assert!(dl.abs() < 1e-8, "stationary graph: dL = {dl}");
    }
}
