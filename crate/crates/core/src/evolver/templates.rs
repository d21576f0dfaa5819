//! Topology templates for the relaxation engine: the ten three-region
//! candidate configurations plus the hexagon graph, and the conjectured
//! configurations (with their alternates) for four, five and six regions.
//!
//! Seeds are hand-authored coordinate sets: junction positions, boundary
//! angles, and chain region labels. Faces are traced from the embedding, so
//! a template is exactly the data a combinatorial candidate needs and
//! nothing more. Seed areas are whatever the coordinates give; instantiation
//! walks the areas to the requested targets with Newton projections.

use std::f64::consts::PI;

use crate::error::Error;
use crate::geometry::Point;
use crate::graph::RegionId;
use crate::solver::AreaTargets;
use crate::Result;

use super::{Chain, DiscreteGraph, Junction};

/// Seed description: interior junctions as points, boundary junctions as
/// angles, chains as (a, b, left, right).
struct Seed {
    junctions: Vec<Junction>,
    chains: Vec<(usize, usize, usize, usize)>,
}

/// A named topology with a seed geometry generator.
#[derive(Clone, Copy)]
pub struct Template {
    pub name: &'static str,
    pub regions: usize,
    seed: fn() -> Seed,
}

impl std::fmt::Debug for Template {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Template({})", self.name)
    }
}

fn ip(x: f64, y: f64) -> Junction {
    Junction::Interior(Point::new(x, y))
}

fn bp(deg: f64) -> Junction {
    Junction::Boundary(deg.to_radians())
}

// --- three-region catalog -------------------------------------------------

/// Two boundary 3-components (caps) of region 0 east and west, the middle
/// band split by a horizontal edge into regions 1 (north) and 2 (south).
fn conf_a() -> Seed {
    Seed {
        junctions: vec![
            ip(0.55, 0.0),  // 0 east cap vertex
            ip(-0.55, 0.0), // 1 west cap vertex
            bp(45.0),       // 2
            bp(-45.0),      // 3
            bp(135.0),      // 4
            bp(-135.0),     // 5
        ],
        chains: vec![
            (0, 2, 1, 0), // east cap north edge
            (0, 3, 0, 2), // east cap south edge
            (1, 4, 0, 1), // west cap north edge
            (1, 5, 2, 0), // west cap south edge
            (1, 0, 1, 2), // middle edge
        ],
    }
}

/// Two boundary 4-components of region 0 east and west, four boundary
/// 3-components of region 1 in the corners, one central component of
/// region 2.
fn conf_b() -> Seed {
    Seed {
        junctions: vec![
            ip(0.45, 0.25),   // 0 east cap upper
            ip(0.45, -0.25),  // 1 east cap lower
            ip(-0.45, 0.25),  // 2 west cap upper
            ip(-0.45, -0.25), // 3 west cap lower
            bp(30.0),         // 4
            bp(-30.0),        // 5
            bp(150.0),        // 6
            bp(-150.0),       // 7
            bp(72.0),         // 8 f1
            bp(-72.0),        // 9 f2
            bp(108.0),        // 10 g1
            bp(-108.0),       // 11 g2
        ],
        chains: vec![
            (0, 4, 1, 0),  // east cap north edge
            (0, 1, 0, 2),  // east cap middle edge
            (1, 5, 0, 1),  // east cap south edge
            (2, 6, 0, 1),  // west cap north edge
            (2, 3, 2, 0),  // west cap middle edge
            (3, 7, 1, 0),  // west cap south edge
            (0, 8, 2, 1),  // f1
            (1, 9, 1, 2),  // f2
            (2, 10, 1, 2), // g1
            (3, 11, 2, 1), // g2
        ],
    }
}

/// Interior quadrilateral (region 0) with four spokes; regions 1 and 2 have
/// two boundary 4-components each.
fn conf_c() -> Seed {
    Seed {
        junctions: vec![
            ip(0.33, 0.33),   // 0 NE
            ip(-0.33, 0.33),  // 1 NW
            ip(-0.33, -0.33), // 2 SW
            ip(0.33, -0.33),  // 3 SE
            bp(45.0),         // 4
            bp(135.0),        // 5
            bp(225.0),        // 6
            bp(315.0),        // 7
        ],
        chains: vec![
            (0, 1, 0, 1), // top
            (1, 2, 0, 2), // left
            (2, 3, 0, 1), // bottom
            (3, 0, 0, 2), // right
            (0, 4, 1, 2), // NE spoke
            (1, 5, 2, 1), // NW spoke
            (2, 6, 1, 2), // SW spoke
            (3, 7, 2, 1), // SE spoke
        ],
    }
}

/// Boundary 3-component (cap, east) plus interior quadrilateral of region 0
/// joined by a connector; regions 1 and 2 have two components each.
fn conf_d() -> Seed {
    Seed {
        junctions: vec![
            ip(0.6, 0.0),     // 0 cap vertex
            ip(0.0, 0.24),    // 1 quad NE
            ip(-0.45, 0.24),  // 2 quad NW
            ip(-0.45, -0.24), // 3 quad SW
            ip(0.0, -0.24),   // 4 quad SE
            bp(42.0),         // 5 cap north
            bp(-42.0),        // 6 cap south
            bp(140.0),        // 7 spoke from NW
            bp(220.0),        // 8 spoke from SW
            bp(-75.0),        // 9 spoke from SE
        ],
        chains: vec![
            (0, 5, 1, 0), // cap north edge
            (0, 6, 0, 2), // cap south edge
            (1, 0, 1, 2), // connector
            (1, 2, 0, 1), // quad north
            (2, 3, 0, 2), // quad west
            (3, 4, 0, 1), // quad south
            (4, 1, 0, 2), // quad east
            (2, 7, 2, 1), // NW spoke
            (3, 8, 1, 2), // SW spoke
            (4, 9, 2, 1), // SE spoke
        ],
    }
}

/// Boundary 4-component (east) plus interior quadrilateral of region 0 with
/// a connector from the cap's upper vertex to the quad.
fn conf_e() -> Seed {
    Seed {
        junctions: vec![
            ip(0.52, 0.2),   // 0 cap upper
            ip(0.52, -0.2),  // 1 cap lower
            ip(-0.08, 0.2),  // 2 quad NE
            ip(-0.5, 0.2),   // 3 quad NW
            ip(-0.5, -0.2),  // 4 quad SW
            ip(-0.08, -0.2), // 5 quad SE
            bp(48.0),        // 6 cap north
            bp(-48.0),       // 7 cap south
            bp(-76.0),       // 8 f2
            bp(140.0),       // 9 NW spoke
            bp(215.0),       // 10 SW spoke
            bp(-96.0),       // 11 SE spoke
        ],
        chains: vec![
            (0, 6, 1, 0),  // cap north edge
            (0, 1, 0, 2),  // cap middle edge
            (1, 7, 0, 1),  // cap south edge
            (1, 8, 1, 2),  // f2
            (0, 2, 2, 1),  // connector
            (2, 3, 0, 1),  // quad north
            (3, 4, 0, 2),  // quad west
            (4, 5, 0, 1),  // quad south
            (5, 2, 0, 2),  // quad east
            (3, 9, 2, 1),  // NW spoke
            (4, 10, 1, 2), // SW spoke
            (5, 11, 2, 1), // SE spoke
        ],
    }
}

/// Two interior quadrilaterals of region 0 joined by a connector, six
/// spokes to the boundary.
fn conf_f() -> Seed {
    Seed {
        junctions: vec![
            ip(-0.14, 0.17),  // 0 aNE
            ip(-0.5, 0.17),   // 1 aNW
            ip(-0.5, -0.17),  // 2 aSW
            ip(-0.14, -0.17), // 3 aSE
            ip(0.14, 0.17),   // 4 bNW
            ip(0.5, 0.17),    // 5 bNE
            ip(0.5, -0.17),   // 6 bSE
            ip(0.14, -0.17),  // 7 bSW
            bp(155.0),        // 8 aNW spoke
            bp(205.0),        // 9 aSW spoke
            bp(-115.0),       // 10 aSE spoke
            bp(25.0),         // 11 bNE spoke
            bp(-25.0),        // 12 bSE spoke
            bp(-65.0),        // 13 bSW spoke
        ],
        chains: vec![
            (0, 1, 0, 1),  // aN (aNE→aNW, quad below on the left)
            (1, 2, 0, 2),  // aW
            (2, 3, 0, 1),  // aS
            (3, 0, 0, 2),  // aE
            (4, 5, 1, 0),  // bN
            (4, 7, 0, 2),  // bW (bNW→bSW)
            (7, 6, 0, 1),  // bS
            (6, 5, 0, 2),  // bE (bSE→bNE)
            (0, 4, 1, 2),  // connector
            (1, 8, 2, 1),  // aNW spoke
            (2, 9, 1, 2),  // aSW spoke
            (3, 10, 2, 1), // aSE spoke
            (5, 11, 1, 2), // bNE spoke
            (6, 12, 2, 1), // bSE spoke
            (7, 13, 1, 2), // bSW spoke
        ],
    }
}

/// Boundary 3-component (east) and boundary 4-component (west) of region 0
/// joined by a connector.
fn conf_g() -> Seed {
    Seed {
        junctions: vec![
            ip(0.62, 0.0),    // 0 east cap vertex
            ip(-0.45, 0.22),  // 1 west cap upper
            ip(-0.45, -0.22), // 2 west cap lower
            bp(40.0),         // 3 east cap north
            bp(-40.0),        // 4 east cap south
            bp(142.0),        // 5 west cap north
            bp(218.0),        // 6 west cap south
            bp(-78.0),        // 7 f2
        ],
        chains: vec![
            (0, 3, 1, 0), // east cap north edge
            (0, 4, 0, 2), // east cap south edge
            (0, 1, 2, 1), // connector
            (1, 5, 0, 1), // west cap north edge
            (1, 2, 2, 0), // west cap middle edge
            (2, 6, 1, 0), // west cap south edge
            (2, 7, 2, 1), // f2
        ],
    }
}

/// Vertical chain of four components (boundary, interior, interior,
/// boundary) alternating regions 1 and 0, flanked by region 2.
fn conf_h() -> Seed {
    Seed {
        junctions: vec![
            ip(0.38, 0.45),  // 0 rung1 east
            ip(-0.38, 0.45), // 1 rung1 west
            ip(0.45, 0.02),  // 2 rung2 east
            ip(-0.45, 0.02), // 3 rung2 west
            ip(0.4, -0.42),  // 4 rung3 east
            ip(-0.4, -0.42), // 5 rung3 west
            bp(62.0),        // 6
            bp(118.0),       // 7
            bp(-62.0),       // 8
            bp(-118.0),      // 9
        ],
        chains: vec![
            (1, 0, 1, 0), // rung1 (T above, el2 below)
            (3, 2, 0, 1), // rung2 (el2 above, el3 below)
            (5, 4, 1, 0), // rung3 (el3 above, B below)
            (0, 6, 1, 2), // T east side
            (0, 2, 2, 0), // el2 east side
            (2, 4, 2, 1), // el3 east side
            (4, 8, 2, 0), // B east side
            (1, 7, 2, 1), // T west side
            (1, 3, 0, 2), // el2 west side
            (3, 5, 1, 2), // el3 west side
            (5, 9, 0, 2), // B west side
        ],
    }
}

/// Vertical chain of five components with two interior quadrilaterals of
/// region 0, three cells of region 1, and side regions 2.
fn conf_i() -> Seed {
    Seed {
        junctions: vec![
            ip(0.26, 0.76),   // 0 nb east
            ip(-0.26, 0.76),  // 1 nb west
            ip(0.3, 0.26),    // 2 na east
            ip(-0.3, 0.26),   // 3 na west
            ip(0.3, -0.26),   // 4 sa east
            ip(-0.3, -0.26),  // 5 sa west
            ip(0.26, -0.76),  // 6 sb east
            ip(-0.26, -0.76), // 7 sb west
            bp(55.0),         // 8
            bp(125.0),        // 9
            bp(-55.0),        // 10
            bp(-125.0),       // 11
        ],
        chains: vec![
            (1, 0, 1, 0),  // rung +b
            (3, 2, 0, 1),  // rung +a
            (5, 4, 1, 0),  // rung −a
            (7, 6, 0, 1),  // rung −b
            (0, 8, 1, 2),  // s1 east
            (0, 2, 2, 0),  // s2 east
            (2, 4, 2, 1),  // s3 east
            (4, 6, 2, 0),  // s4 east
            (6, 10, 2, 1), // s5 east
            (1, 9, 2, 1),  // s1 west
            (1, 3, 0, 2),  // s2 west
            (3, 5, 1, 2),  // s3 west
            (5, 7, 0, 2),  // s4 west
            (7, 11, 1, 2), // s5 west
        ],
    }
}

/// The standard graph: three edges from one interior vertex (region 0 west,
/// 1 east, 2 north).
fn conf_j() -> Seed {
    Seed {
        junctions: vec![ip(0.0, 0.0), bp(-90.0), bp(30.0), bp(150.0)],
        chains: vec![
            (0, 1, 1, 0), // south edge
            (0, 2, 2, 1), // north-east edge
            (0, 3, 0, 2), // north-west edge
        ],
    }
}

/// Regular hexagon (region 2) with six radial spokes; regions 0 and 1
/// alternate around the ring.
fn hex() -> Seed {
    let rho = 0.63;
    let mut junctions = Vec::new();
    for k in 0..6 {
        let a = 2.0 * PI * k as f64 / 6.0;
        junctions.push(ip(rho * a.cos(), rho * a.sin()));
    }
    for k in 0..6 {
        junctions.push(bp(60.0 * k as f64));
    }
    let mut chains = Vec::new();
    for k in 0..6usize {
        chains.push((k, (k + 1) % 6, 2, k % 2));
    }
    for k in 0..6usize {
        chains.push((k, 6 + k, k % 2, (k + 5) % 6 % 2));
    }
    Seed { junctions, chains }
}

// --- conjectured configurations for n = 4, 5, 6 ---------------------------

/// Two-junction tree: west cap, east cap, north and south bands.
fn std4() -> Seed {
    Seed {
        junctions: vec![
            ip(-0.35, 0.0),
            ip(0.35, 0.0),
            bp(125.0),
            bp(-125.0),
            bp(55.0),
            bp(-55.0),
        ],
        chains: vec![
            (0, 1, 1, 2), // middle edge (N band above, S band below)
            (0, 2, 0, 1), // west cap north
            (0, 3, 2, 0), // west cap south
            (1, 4, 1, 3), // east cap north
            (1, 5, 3, 2), // east cap south
        ],
    }
}

/// Interior 3-gon (region 3) ringed by three boundary regions.
fn alt4() -> Seed {
    let r = 0.3;
    let mut junctions = Vec::new();
    for k in 0..3 {
        let a = (90.0 + 120.0 * k as f64).to_radians();
        junctions.push(ip(r * a.cos(), r * a.sin()));
    }
    for k in 0..3 {
        junctions.push(bp(90.0 + 120.0 * k as f64));
    }
    let mut chains = Vec::new();
    for k in 0..3usize {
        chains.push((k, (k + 1) % 3, 3, k));
    }
    for k in 0..3usize {
        chains.push((k, 3 + k, k, (k + 2) % 3));
    }
    Seed { junctions, chains }
}

/// Three-junction tree: west cap, one north band, two south cells, east cap.
fn std5() -> Seed {
    Seed {
        junctions: vec![
            ip(-0.5, 0.0),
            ip(0.0, -0.15),
            ip(0.5, 0.0),
            bp(150.0),
            bp(-130.0),
            bp(-90.0),
            bp(30.0),
            bp(-50.0),
        ],
        chains: vec![
            (0, 1, 1, 2), // west inner edge
            (1, 2, 1, 3), // east inner edge
            (0, 3, 0, 1), // west cap north
            (0, 4, 2, 0), // west cap south
            (1, 5, 3, 2), // middle spoke (south)
            (2, 6, 1, 4), // east cap north
            (2, 7, 4, 3), // east cap south
        ],
    }
}

/// Interior 4-gon (region 4) ringed by four boundary regions.
fn alt5() -> Seed {
    let r = 0.33;
    let mut junctions = Vec::new();
    for k in 0..4 {
        let a = (45.0 + 90.0 * k as f64).to_radians();
        junctions.push(ip(r * a.cos(), r * a.sin()));
    }
    for k in 0..4 {
        junctions.push(bp(45.0 + 90.0 * k as f64));
    }
    let mut chains = Vec::new();
    for k in 0..4usize {
        chains.push((k, (k + 1) % 4, 4, k));
    }
    for k in 0..4usize {
        chains.push((k, 4 + k, k, (k + 3) % 4));
    }
    Seed { junctions, chains }
}

/// Interior 5-gon (region 5) ringed by five boundary regions.
fn std6() -> Seed {
    let r = 0.32;
    let mut junctions = Vec::new();
    for k in 0..5 {
        let a = (90.0 + 72.0 * k as f64).to_radians();
        junctions.push(ip(r * a.cos(), r * a.sin()));
    }
    for k in 0..5 {
        junctions.push(bp(90.0 + 72.0 * k as f64));
    }
    let mut chains = Vec::new();
    for k in 0..5usize {
        chains.push((k, (k + 1) % 5, 5, k));
    }
    for k in 0..5usize {
        chains.push((k, 5 + k, k, (k + 4) % 5));
    }
    Seed { junctions, chains }
}

/// Four-junction tree: all six regions touch the boundary.
fn alt6_tree() -> Seed {
    Seed {
        junctions: vec![
            ip(-0.55, 0.0),
            ip(-0.18, 0.1),
            ip(0.18, -0.1),
            ip(0.55, 0.0),
            bp(160.0),
            bp(-160.0),
            bp(80.0),
            bp(-80.0),
            bp(20.0),
            bp(-20.0),
        ],
        chains: vec![
            (0, 1, 1, 3),
            (1, 2, 2, 3),
            (2, 3, 2, 4),
            (0, 4, 0, 1),
            (0, 5, 3, 0),
            (1, 6, 1, 2),
            (2, 7, 4, 3),
            (3, 8, 2, 5),
            (3, 9, 5, 4),
        ],
    }
}

/// Central hexagon (region 5) with six ring cells; the opposite ring cells
/// 0 and 3 share one region, so six regions fill the disk.
fn alt6_hex() -> Seed {
    let rho = 0.45;
    let ring = [0usize, 1, 2, 0, 3, 4];
    let mut junctions = Vec::new();
    for k in 0..6 {
        let a = 2.0 * PI * k as f64 / 6.0;
        junctions.push(ip(rho * a.cos(), rho * a.sin()));
    }
    for k in 0..6 {
        junctions.push(bp(60.0 * k as f64));
    }
    let mut chains = Vec::new();
    for (k, &r) in ring.iter().enumerate() {
        chains.push((k, (k + 1) % 6, 5, r));
    }
    for (k, &r) in ring.iter().enumerate() {
        chains.push((k, 6 + k, r, ring[(k + 5) % 6]));
    }
    Seed { junctions, chains }
}

/// Chain of four components with all-distinct regions plus two sides.
fn alt6_chain() -> Seed {
    Seed {
        junctions: vec![
            ip(0.38, 0.45),
            ip(-0.38, 0.45),
            ip(0.45, 0.02),
            ip(-0.45, 0.02),
            ip(0.4, -0.42),
            ip(-0.4, -0.42),
            bp(62.0),
            bp(118.0),
            bp(-62.0),
            bp(-118.0),
        ],
        chains: vec![
            (1, 0, 0, 1),
            (3, 2, 1, 2),
            (5, 4, 2, 3),
            (0, 6, 0, 4),
            (0, 2, 4, 1),
            (2, 4, 4, 2),
            (4, 8, 4, 3),
            (1, 7, 5, 0),
            (1, 3, 1, 5),
            (3, 5, 2, 5),
            (5, 9, 3, 5),
        ],
    }
}

/// The template catalog for a region count (empty for unsupported counts).
pub fn catalog(n: usize) -> Vec<Template> {
    match n {
        3 => vec![
            Template {
                name: "conf_a",
                regions: 3,
                seed: conf_a,
            },
            Template {
                name: "conf_b",
                regions: 3,
                seed: conf_b,
            },
            Template {
                name: "conf_c",
                regions: 3,
                seed: conf_c,
            },
            Template {
                name: "conf_d",
                regions: 3,
                seed: conf_d,
            },
            Template {
                name: "conf_e",
                regions: 3,
                seed: conf_e,
            },
            Template {
                name: "conf_f",
                regions: 3,
                seed: conf_f,
            },
            Template {
                name: "conf_g",
                regions: 3,
                seed: conf_g,
            },
            Template {
                name: "conf_h",
                regions: 3,
                seed: conf_h,
            },
            Template {
                name: "conf_i",
                regions: 3,
                seed: conf_i,
            },
            Template {
                name: "conf_j",
                regions: 3,
                seed: conf_j,
            },
            Template {
                name: "hex",
                regions: 3,
                seed: hex,
            },
        ],
        4 => vec![
            Template {
                name: "std4",
                regions: 4,
                seed: std4,
            },
            Template {
                name: "alt4",
                regions: 4,
                seed: alt4,
            },
        ],
        5 => vec![
            Template {
                name: "std5",
                regions: 5,
                seed: std5,
            },
            Template {
                name: "alt5",
                regions: 5,
                seed: alt5,
            },
        ],
        6 => vec![
            Template {
                name: "std6",
                regions: 6,
                seed: std6,
            },
            Template {
                name: "alt6_tree",
                regions: 6,
                seed: alt6_tree,
            },
            Template {
                name: "alt6_hex",
                regions: 6,
                seed: alt6_hex,
            },
            Template {
                name: "alt6_chain",
                regions: 6,
                seed: alt6_chain,
            },
        ],
        _ => Vec::new(),
    }
}

/// Looks a template up by name across all catalogs.
pub fn template_by_name(name: &str) -> Option<Template> {
    for n in [3, 4, 5, 6] {
        if let Some(t) = catalog(n).into_iter().find(|t| t.name == name) {
            return Some(t);
        }
    }
    None
}

/// Builds the seed graph of a template with `n_pts` interior points per
/// chain (straight polylines between junction positions).
pub fn seed_graph(t: &Template, n_pts: usize) -> Result<DiscreteGraph> {
    let seed = (t.seed)();
    let positions: Vec<Point> = seed.junctions.iter().map(|j| j.position()).collect();
    let chains = seed
        .chains
        .iter()
        .map(|&(a, b, left, right)| {
            let pa = positions[a];
            let pb = positions[b];
            let points = (1..=n_pts)
                .map(|k| {
                    let s = k as f64 / (n_pts + 1) as f64;
                    pa + (pb - pa).scale(s)
                })
                .collect();
            Chain {
                a,
                b,
                points,
                left: RegionId(left),
                right: RegionId(right),
            }
        })
        .collect();
    // seed target areas = the seed's own areas; instantiation retargets
    let mut g = DiscreteGraph::new(seed.junctions, chains, t.regions, vec![0.0; t.regions])?;
    g.targets = g.areas();
    Ok(g)
}

/// Instantiates a template, walking the seed areas to the targets in small
/// steps with a Newton projection each (relaxing nothing). Reports
/// infeasible instantiation when the homotopy cannot keep the areas.
pub fn template_instantiate(
    t: &Template,
    targets: &AreaTargets,
    n_pts: usize,
) -> Result<DiscreteGraph> {
    if targets.len() != t.regions {
        return Err(Error::domain(format!(
            "template {} has {} regions, got {} areas",
            t.name,
            t.regions,
            targets.len()
        )));
    }
    let mut g = seed_graph(t, n_pts)?;
    let start = g.areas();
    let steps = 12;
    for k in 1..=steps {
        let s = k as f64 / steps as f64;
        let blended: Vec<f64> = start
            .iter()
            .zip(targets.as_slice())
            .map(|(a, b)| a * (1.0 - s) + b * s)
            .collect();
        g.targets = blended;
        // a handful of cheap relaxation iterations doubles as the projector
        // and keeps the geometry tame during the walk
        let result = super::relax(
            g,
            &super::RelaxOptions {
                step: 0.05,
                max_iters: 30,
                tol: 1e-9,
                min_chain_length: 1e-4,
                resample_every: 10,
            },
        )
        .map_err(|e| match e {
            Error::TopologyEvent { edge, .. } => Error::Infeasible(format!(
                "template {} cannot reach the requested areas (chain {} collapsed)",
                t.name, edge
            )),
            other => other,
        })?;
        g = result.graph;
    }
    g.targets = targets.as_slice().to_vec();
    Ok(g)
}
