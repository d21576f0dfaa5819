//! Inverse problems: from target areas to exact graphs, and the
//! isoperimetric profile.
//!
//! Both solvers exploit monotonicity: the splitter's region-1 area decreases
//! in its curvature, and for a fixed splitter the third region's area is
//! strictly monotone in the vertex position (the swept regions are nested).
//! Bracketed bisection is therefore safe and derivative-free.

use std::f64::consts::PI;

use crate::error::Error;
use crate::graph::PartitionGraph;
use crate::standard::{
    complete_from_edge, splitter_from_curvature, StandardGraph, TwoRegionSplitter,
};
use crate::util;
use crate::Result;

/// Positive region areas summing to the disk area.
#[derive(Clone, Debug, PartialEq)]
pub struct AreaTargets {
    areas: Vec<f64>,
}

/// Smallest admissible target area; below this the constructions degenerate.
pub const MIN_TARGET_AREA: f64 = 1e-6;

impl AreaTargets {
    pub fn new(areas: Vec<f64>) -> Result<AreaTargets> {
        if areas.len() < 2 {
            return Err(Error::domain("at least two areas are required"));
        }
        for &a in &areas {
            if !(a.is_finite() && a > 0.0) {
                return Err(Error::domain(format!("areas must be positive, got {a}")));
            }
            if a < MIN_TARGET_AREA {
                return Err(Error::domain(format!(
                    "degenerate target area {a} < {MIN_TARGET_AREA}"
                )));
            }
        }
        let total: f64 = areas.iter().sum();
        if (total - PI).abs() > 1e-9 {
            return Err(Error::domain(format!("areas must sum to pi, got {total}")));
        }
        Ok(AreaTargets { areas })
    }

    /// Rescales arbitrary positive values to sum to pi.
    pub fn normalized(raw: Vec<f64>) -> Result<AreaTargets> {
        let total: f64 = raw.iter().sum();
        if !(total.is_finite() && total > 0.0) {
            return Err(Error::domain("areas must have a positive finite sum"));
        }
        AreaTargets::new(raw.into_iter().map(|a| a * PI / total).collect())
    }

    pub fn equal(n: usize) -> Result<AreaTargets> {
        AreaTargets::new(vec![PI / n as f64; n])
    }

    pub fn len(&self) -> usize {
        self.areas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.areas.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.areas
    }

    pub fn get(&self, i: usize) -> f64 {
        self.areas[i]
    }
}

/// One evaluated point of the isoperimetric profile.
#[derive(Clone, Debug)]
pub struct ProfilePoint {
    pub areas: Vec<f64>,
    pub perimeter: f64,
    pub graph: PartitionGraph,
}

/// Outcome of a single profile grid point; failures are recorded, the sweep
/// continues.
#[derive(Debug)]
pub enum ProfileEntry {
    Ok(ProfilePoint),
    Failed { areas: Vec<f64>, error: Error },
}

const MAX_BISECT: usize = 200;

/// Least-perimeter partition of the disk into two regions of areas
/// (a1, a2): the unique splitter whose region-1 area is a1.
pub fn solve_two_areas(a1: f64, a2: f64) -> Result<TwoRegionSplitter> {
    let targets = AreaTargets::new(vec![a1, a2])?;
    let a1 = targets.get(0);
    let residual = |h: f64| -> f64 {
        splitter_from_curvature(h)
            .map(|s| s.area_region1() - a1)
            .unwrap_or(f64::NAN)
    };
    // area_region1 decreases in h
    let (lo, hi, flo) = util::expand_bracket(residual, 0.0, 4.0, 1e7).ok_or_else(|| {
        Error::solver(
            "no curvature bracket for two-area split",
            format!("a1 = {a1}"),
        )
    })?;
    let (h, fh) = util::bisect(residual, lo, hi, flo, 0.0, 1e-13, MAX_BISECT);
    if fh.abs() > 1e-9 {
        return Err(Error::solver(
            "two-area bisection did not converge",
            format!("h = {h}, residual = {fh}"),
        ));
    }
    splitter_from_curvature(h)
}

/// Area of region 3 after completing `s` at the vertex with arc-length
/// fraction `t`; NaN when the construction degenerates.
fn region3_area(s: &TwoRegionSplitter, t: f64) -> f64 {
    let v = s.edge.point_at(t * s.length());
    complete_from_edge(s, v)
        .and_then(|g| g.areas())
        .map(|a| a[2])
        .unwrap_or(f64::NAN)
}

/// Inner solve: vertex fraction t with area(R3) = a3. Decreasing in t.
/// The bracket grows geometrically from the middle so the construction is
/// only evaluated near the degenerate ends when the targets require it.
fn solve_vertex_for_area(s: &TwoRegionSplitter, a3: f64) -> Result<StandardGraph> {
    let f = |t: f64| region3_area(s, t) - a3;
    let mut lo = 0.25;
    let mut flo = f(lo);
    while flo.is_nan() || flo <= 0.0 {
        lo /= 8.0;
        if lo < 1e-12 {
            return Err(Error::solver(
                "third-region area is not bracketed toward the kept endpoint",
                format!("a3 = {a3}"),
            ));
        }
        flo = f(lo);
    }
    let mut hi = 0.75;
    let mut fhi = f(hi);
    while fhi.is_nan() || fhi >= 0.0 {
        hi = 1.0 - (1.0 - hi) / 8.0;
        if 1.0 - hi < 1e-12 {
            return Err(Error::solver(
                "third-region area is not bracketed toward the swallowed endpoint",
                format!("a3 = {a3}"),
            ));
        }
        fhi = f(hi);
    }
    let (t, ft) = util::bisect(f, lo, hi, flo, 0.0, 1e-12, MAX_BISECT);
    if ft.abs() > 1e-9 {
        return Err(Error::solver(
            "vertex bisection did not converge",
            format!("t = {t}, residual = {ft}"),
        ));
    }
    complete_from_edge(s, s.edge.point_at(t * s.length()))
}

/// Least-perimeter partition into three regions of prescribed areas: the
/// unique standard graph, canonically placed (splitter endpoints symmetric
/// about the x-axis, region 1 west, region 3 north).
pub fn solve_three_areas(targets: &AreaTargets) -> Result<StandardGraph> {
    solve_three_areas_seeded(targets, 0.0)
}

/// `solve_three_areas` with an initial guess for the splitter curvature; the
/// result must not depend on the seed (uniqueness up to rigid motion).
pub fn solve_three_areas_seeded(targets: &AreaTargets, h12_seed: f64) -> Result<StandardGraph> {
    if targets.len() != 3 {
        return Err(Error::domain("three areas required"));
    }
    let (a1, a3) = (targets.get(0), targets.get(2));
    // outer residual: region-1 area mismatch with the inner solve applied
    let residual = |h12: f64| -> f64 {
        let Ok(s) = splitter_from_curvature(h12) else {
            return f64::NAN;
        };
        match solve_vertex_for_area(&s, a3) {
            Ok(g) => match g.areas() {
                Ok(areas) => areas[0] - a1,
                Err(_) => f64::NAN,
            },
            Err(_) => f64::NAN,
        }
    };
    let (lo, hi, flo) = util::expand_bracket(residual, h12_seed, 2.0, 1e7).ok_or_else(|| {
        Error::solver(
            "no curvature bracket for three-area solve",
            format!("targets = {:?}", targets.as_slice()),
        )
    })?;
    let (h12, fh) = util::bisect(residual, lo, hi, flo, 0.0, 1e-12, MAX_BISECT);
    if fh.is_nan() || fh.abs() > 1e-9 {
        return Err(Error::solver(
            "three-area outer bisection did not converge",
            format!("h12 = {h12}, residual = {fh}"),
        ));
    }
    let s = splitter_from_curvature(h12)?;
    solve_vertex_for_area(&s, a3)
}

/// Upper bound for the isoperimetric profile: n radii cut the disk into
/// sectors of any prescribed areas, with total length n.
pub fn radii_upper_bound(targets: &AreaTargets) -> f64 {
    targets.len() as f64
}

/// Tabulates the profile over the interior points of the area simplex on a
/// grid with `grid` points per axis (step pi/(grid−1), endpoints excluded).
/// n = 2 or 3; results are deterministic and sequential.
pub fn profile_sweep(n: usize, grid: usize) -> Result<Vec<ProfileEntry>> {
    if grid < 2 {
        return Err(Error::domain("grid must be at least 2"));
    }
    let denom = (grid - 1) as f64;
    let mut out = Vec::new();
    match n {
        2 => {
            for i in 1..grid - 1 {
                let a1 = PI * i as f64 / denom;
                let areas = vec![a1, PI - a1];
                match solve_two_areas(areas[0], areas[1])
                    .and_then(|s| Ok((s.length(), s.to_partition_graph()?)))
                {
                    Ok((len, graph)) => out.push(ProfileEntry::Ok(ProfilePoint {
                        areas,
                        perimeter: len,
                        graph,
                    })),
                    Err(error) => out.push(ProfileEntry::Failed { areas, error }),
                }
            }
        }
        3 => {
            let total = grid - 1;
            for i in 1..total {
                for j in 1..total - i {
                    let k = total - i - j;
                    let areas = vec![
                        PI * i as f64 / denom,
                        PI * j as f64 / denom,
                        PI * k as f64 / denom,
                    ];
                    let solve = AreaTargets::new(areas.clone())
                        .and_then(|t| solve_three_areas(&t))
                        .and_then(|g| Ok((g.perimeter(), g.to_partition_graph()?)));
                    match solve {
                        Ok((len, graph)) => out.push(ProfileEntry::Ok(ProfilePoint {
                            areas,
                            perimeter: len,
                            graph,
                        })),
                        Err(error) => out.push(ProfileEntry::Failed { areas, error }),
                    }
                }
            }
        }
        _ => {
            return Err(Error::domain(
                "exact profile is available for n = 2 or 3 only",
            ))
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::hausdorff_up_to_rotation;
    use crate::util::SplitMix64;

    #[test]
    fn equal_two_areas_is_diameter() {
        let s = solve_two_areas(PI / 2.0, PI / 2.0).unwrap();
        assert!((s.length() - 2.0).abs() < 1e-12);
        assert!(s.curvature().abs() < 1e-12);
    }

    #[test]
    fn tiny_cap_is_short() {
        let eps = 1e-3;
        let s = solve_two_areas(PI - eps, eps).unwrap();
        assert!(s.length() < 0.2, "length {}", s.length());
        // small-cap asymptotics: cap ~ half-disk of radius 1/h
        let r = 1.0 / s.curvature().abs();
        assert!((PI * r * r / 2.0 - eps).abs() / eps < 0.05);
    }

    /// Brute-force curvature scan as an oracle for the (3π/4, π/4) split.
    #[test]
    fn quarter_split_matches_scan_oracle() {
        let target = PI / 4.0;
        let mut best = (f64::INFINITY, 0.0);
        let n = 100_000;
        for k in 0..n {
            let h = -4.0 + 8.0 * k as f64 / n as f64;
            if let Ok(s) = splitter_from_curvature(h) {
                let err = (s.area_region1() - (PI - target)).abs();
                if err < best.0 {
                    best = (err, h);
                }
            }
        }
        let s = solve_two_areas(3.0 * PI / 4.0, PI / 4.0).unwrap();
        assert!(
            (s.curvature() - best.1).abs() < 1e-4,
            "solver h {} vs scan h {}",
            s.curvature(),
            best.1
        );
        let scan_len = splitter_from_curvature(best.1).unwrap().length();
        assert!((s.length() - scan_len).abs() < 1e-3);
    }

    #[test]
    fn equal_three_areas_gives_three_radii() {
        let t = AreaTargets::equal(3).unwrap();
        let g = solve_three_areas(&t).unwrap();
        assert!((g.perimeter() - 3.0).abs() < 1e-9);
        let areas = g.areas().unwrap();
        for a in areas {
            assert!((a - PI / 3.0).abs() < 1e-9);
        }
    }

    #[test]
    fn area_residuals_below_tolerance() {
        let t = AreaTargets::new(vec![1.2, 0.9, PI - 2.1]).unwrap();
        let g = solve_three_areas(&t).unwrap();
        let areas = g.areas().unwrap();
        for (a, b) in areas.iter().zip(t.as_slice()) {
            assert!((a - b).abs() < 1e-9, "{a} vs {b}");
        }
    }

    #[test]
    fn permuted_targets_are_congruent() {
        let t1 = AreaTargets::new(vec![1.4, 1.0, PI - 2.4]).unwrap();
        let t2 = AreaTargets::new(vec![1.0, PI - 2.4, 1.4]).unwrap();
        let g1 = solve_three_areas(&t1).unwrap();
        let g2 = solve_three_areas(&t2).unwrap();
        assert!((g1.perimeter() - g2.perimeter()).abs() < 1e-9);
        let p1 = g1.to_partition_graph().unwrap();
        let p2 = g2.to_partition_graph().unwrap();
        assert!(hausdorff_up_to_rotation(&p1, &p2, 48) < 1e-6);
    }

    #[test]
    fn seeded_solves_agree() {
        let mut rng = SplitMix64::new(31);
        let t = AreaTargets::new(vec![0.8, 1.5, PI - 2.3]).unwrap();
        let reference = solve_three_areas(&t).unwrap().to_partition_graph().unwrap();
        for _ in 0..5 {
            let seed = rng.range(-3.0, 3.0);
            let g = solve_three_areas_seeded(&t, seed)
                .unwrap()
                .to_partition_graph()
                .unwrap();
            assert!(hausdorff_up_to_rotation(&reference, &g, 48) < 1e-6);
        }
    }

    #[test]
    fn continuity_toward_two_region_limit() {
        let a1 = 1.3;
        let a2 = PI - 1.3;
        let two = solve_two_areas(a1, a2).unwrap().length();
        let mut prev_gap = f64::INFINITY;
        for a3 in [1e-2, 1e-3, 1e-4] {
            let rest = (PI - a3) / PI;
            let t = AreaTargets::new(vec![a1 * rest, a2 * rest, a3]).unwrap();
            let g = solve_three_areas(&t).unwrap();
            let gap = (g.perimeter() - two).abs();
            assert!(gap < prev_gap, "perimeter approaches the two-region length");
            prev_gap = gap;
        }
        assert!(prev_gap < 2e-2, "final gap {prev_gap}");
    }

    #[test]
    fn profile_two_regions_symmetric() {
        let entries = profile_sweep(2, 11).unwrap();
        assert_eq!(entries.len(), 9);
        let per: Vec<f64> = entries
            .iter()
            .map(|e| match e {
                ProfileEntry::Ok(p) => p.perimeter,
                ProfileEntry::Failed { .. } => panic!("profile point failed"),
            })
            .collect();
        for k in 0..per.len() {
            assert!((per[k] - per[per.len() - 1 - k]).abs() < 1e-9);
            assert!(per[k] <= 2.0 + 1e-12);
        }
        // max at the diameter
        assert!((per[4] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn profile_three_regions_bounded_by_three() {
        // grid 7 puts the equal-areas point (2,2,2)/6 on the grid
        let entries = profile_sweep(3, 7).unwrap();
        let mut max_per = 0.0f64;
        let mut equal_point = 0.0f64;
        for e in &entries {
            match e {
                ProfileEntry::Ok(p) => {
                    max_per = max_per.max(p.perimeter);
                    if p.areas.iter().all(|a| (a - PI / 3.0).abs() < 1e-12) {
                        equal_point = p.perimeter;
                    }
                }
                ProfileEntry::Failed { areas, error } => {
                    panic!("profile failed at {areas:?}: {error}")
                }
            }
        }
        assert!(max_per <= 3.0 + 1e-9, "profile bound I <= n, got {max_per}");
        assert!(
            (equal_point - 3.0).abs() < 1e-9,
            "maximum attained at equal areas: {equal_point}"
        );
        assert!((max_per - equal_point).abs() < 1e-9);
    }

    #[test]
    fn degenerate_targets_rejected() {
        assert!(AreaTargets::new(vec![PI - 1e-7, 1e-7]).is_err());
        assert!(AreaTargets::new(vec![1.0, 1.0]).is_err());
        assert!(AreaTargets::normalized(vec![2.0, 1.0, 1.0]).is_ok());
    }
}
