//! The JSON interchange document: the single graph format shared by the
//! solver, the stability analysis and the relaxation engine.
//!
//! Edges carry either an exact signed curvature or a polyline, so both
//! graph flavors round-trip losslessly through the same schema. The schema
//! version is checked on load.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::evolver::{Chain, DiscreteGraph, Junction};
use crate::geometry::{ArcEdge, Point};
use crate::graph::{
    Edge, EdgeId, PartitionGraph, Region, RegionId, Vertex, VertexId, VertexKind, Walk,
};
use crate::Result;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GraphDocument {
    pub schema_version: String,
    pub vertices: Vec<VertexDoc>,
    pub edges: Vec<EdgeDoc>,
    pub regions: Vec<RegionDoc>,
    #[serde(default, skip_serializing_if = "Metadata::is_empty")]
    pub metadata: Metadata,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VertexDoc {
    pub id: usize,
    pub x: f64,
    pub y: f64,
    pub kind: VertexKind,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EdgeDoc {
    pub id: usize,
    pub v0: usize,
    pub v1: usize,
    pub left_region: usize,
    pub right_region: usize,
    /// Signed geodesic curvature for exact arcs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<f64>,
    /// Interior sample points for polyline edges.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polyline: Option<Vec<[f64; 2]>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RegionDoc {
    pub id: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_area: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pressure: Option<f64>,
    /// Component cycles; `{"edge": id, "forward": bool}` or
    /// `{"boundary_arc": {"from": vid, "to": vid}}`.
    pub components: Vec<Vec<WalkDoc>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WalkDoc {
    Edge { edge: usize, forward: bool },
    BoundaryArc { boundary_arc: ArcDoc },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ArcDoc {
    pub from: usize,
    pub to: usize,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct Metadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub template: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub areas: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub perimeter: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub multipliers: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub iterations: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub converged: Option<bool>,
}

impl Metadata {
    pub fn is_empty(&self) -> bool {
        self.template.is_none()
            && self.areas.is_none()
            && self.provenance.is_none()
            && self.perimeter.is_none()
            && self.multipliers.is_none()
            && self.iterations.is_none()
            && self.converged.is_none()
    }
}

impl GraphDocument {
    pub fn from_partition_graph(g: &PartitionGraph) -> GraphDocument {
        GraphDocument {
            schema_version: SCHEMA_VERSION.into(),
            vertices: g
                .vertices
                .iter()
                .enumerate()
                .map(|(id, v)| VertexDoc {
                    id,
                    x: v.point.x,
                    y: v.point.y,
                    kind: v.kind,
                })
                .collect(),
            edges: g
                .edges
                .iter()
                .enumerate()
                .map(|(id, e)| EdgeDoc {
                    id,
                    v0: e.v0.0,
                    v1: e.v1.0,
                    left_region: e.left.0,
                    right_region: e.right.0,
                    h: Some(e.arc.h),
                    polyline: None,
                })
                .collect(),
            regions: g
                .regions
                .iter()
                .enumerate()
                .map(|(id, r)| RegionDoc {
                    id,
                    target_area: r.target_area,
                    pressure: Some(r.pressure),
                    components: r
                        .components
                        .iter()
                        .map(|cycle| cycle.iter().map(walk_doc).collect())
                        .collect(),
                })
                .collect(),
            metadata: Metadata::default(),
        }
    }

    pub fn from_discrete_graph(g: &DiscreteGraph) -> GraphDocument {
        let vertices = g
            .junctions
            .iter()
            .enumerate()
            .map(|(id, j)| {
                let p = j.position();
                VertexDoc {
                    id,
                    x: p.x,
                    y: p.y,
                    kind: if j.is_boundary() {
                        VertexKind::Boundary
                    } else {
                        VertexKind::Interior
                    },
                }
            })
            .collect();
        let edges = g
            .chains
            .iter()
            .enumerate()
            .map(|(id, c)| EdgeDoc {
                id,
                v0: c.a,
                v1: c.b,
                left_region: c.left.0,
                right_region: c.right.0,
                h: None,
                polyline: Some(c.points.iter().map(|p| [p.x, p.y]).collect()),
            })
            .collect();
        let mut regions: Vec<RegionDoc> = (0..g.n_regions)
            .map(|id| RegionDoc {
                id,
                target_area: Some(g.targets[id]),
                pressure: None,
                components: Vec::new(),
            })
            .collect();
        for f in &g.faces {
            let cycle = f
                .entries
                .iter()
                .map(|e| match e {
                    crate::evolver::Loop::Chain { id, forward } => WalkDoc::Edge {
                        edge: *id,
                        forward: *forward,
                    },
                    crate::evolver::Loop::Arc { from, to } => WalkDoc::BoundaryArc {
                        boundary_arc: ArcDoc {
                            from: *from,
                            to: *to,
                        },
                    },
                })
                .collect();
            regions[f.region.0].components.push(cycle);
        }
        GraphDocument {
            schema_version: SCHEMA_VERSION.into(),
            vertices,
            edges,
            regions,
            metadata: Metadata::default(),
        }
    }

    pub fn check_version(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::Document(format!(
                "unsupported schema version {} (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        Ok(())
    }

    pub fn is_exact(&self) -> bool {
        self.edges.iter().all(|e| e.h.is_some())
    }

    /// Reconstructs an exact partition graph (all edges must carry
    /// curvatures).
    pub fn to_partition_graph(&self) -> Result<PartitionGraph> {
        self.check_version()?;
        let vertices: Vec<Vertex> = self
            .vertices
            .iter()
            .map(|v| Vertex {
                point: Point::new(v.x, v.y),
                kind: v.kind,
            })
            .collect();
        let edges = self
            .edges
            .iter()
            .map(|e| {
                let h = e.h.ok_or_else(|| {
                    Error::Document(format!("edge {} has no exact curvature", e.id))
                })?;
                let p0 = vertices
                    .get(e.v0)
                    .ok_or_else(|| Error::Document(format!("edge {}: bad vertex", e.id)))?
                    .point;
                let p1 = vertices
                    .get(e.v1)
                    .ok_or_else(|| Error::Document(format!("edge {}: bad vertex", e.id)))?
                    .point;
                Ok(Edge {
                    arc: ArcEdge::new(p0, p1, h)?,
                    v0: VertexId(e.v0),
                    v1: VertexId(e.v1),
                    left: RegionId(e.left_region),
                    right: RegionId(e.right_region),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let regions = self
            .regions
            .iter()
            .map(|r| {
                let components = r
                    .components
                    .iter()
                    .map(|cycle| cycle.iter().map(doc_walk).collect())
                    .collect();
                Region::new(components, r.target_area)
            })
            .collect();
        PartitionGraph::new(vertices, edges, regions)
    }

    /// Reconstructs a discrete polyline graph (all edges must carry
    /// polylines).
    pub fn to_discrete_graph(&self) -> Result<DiscreteGraph> {
        self.check_version()?;
        let junctions: Vec<Junction> = self
            .vertices
            .iter()
            .map(|v| match v.kind {
                VertexKind::Interior => Junction::Interior(Point::new(v.x, v.y)),
                VertexKind::Boundary => Junction::Boundary(v.y.atan2(v.x)),
            })
            .collect();
        let chains = self
            .edges
            .iter()
            .map(|e| {
                let polyline = e
                    .polyline
                    .as_ref()
                    .ok_or_else(|| Error::Document(format!("edge {} has no polyline", e.id)))?;
                Ok(Chain {
                    a: e.v0,
                    b: e.v1,
                    points: polyline.iter().map(|p| Point::new(p[0], p[1])).collect(),
                    left: RegionId(e.left_region),
                    right: RegionId(e.right_region),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let targets: Vec<f64> = self
            .regions
            .iter()
            .map(|r| r.target_area.unwrap_or(0.0))
            .collect();
        DiscreteGraph::new(junctions, chains, self.regions.len(), targets)
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Document(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<GraphDocument> {
        let doc: GraphDocument =
            serde_json::from_str(text).map_err(|e| Error::Document(e.to_string()))?;
        doc.check_version()?;
        Ok(doc)
    }
}

fn walk_doc(w: &Walk) -> WalkDoc {
    match w {
        Walk::Edge { id, forward } => WalkDoc::Edge {
            edge: id.0,
            forward: *forward,
        },
        Walk::BoundaryArc { from, to } => WalkDoc::BoundaryArc {
            boundary_arc: ArcDoc {
                from: from.0,
                to: to.0,
            },
        },
    }
}

fn doc_walk(w: &WalkDoc) -> Walk {
    match w {
        WalkDoc::Edge { edge, forward } => Walk::Edge {
            id: EdgeId(*edge),
            forward: *forward,
        },
        WalkDoc::BoundaryArc { boundary_arc } => Walk::BoundaryArc {
            from: VertexId(boundary_arc.from),
            to: VertexId(boundary_arc.to),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::{solve_three_areas, AreaTargets};
    use crate::standard::check_stationary;

    #[test]
    fn exact_graph_round_trips() {
        let t = AreaTargets::new(vec![1.1, 0.9, std::f64::consts::PI - 2.0]).unwrap();
        let g = solve_three_areas(&t).unwrap().to_partition_graph().unwrap();
        let doc = GraphDocument::from_partition_graph(&g);
        let json = doc.to_json().unwrap();
        let back = GraphDocument::from_json(&json).unwrap();
        let g2 = back.to_partition_graph().unwrap();
        // identical residuals and geometry after the round trip
        let r1 = check_stationary(&g);
        let r2 = check_stationary(&g2);
        assert!((r1.max_residual() - r2.max_residual()).abs() < 1e-12);
        assert!((g.perimeter() - g2.perimeter()).abs() < 1e-12);
        for (a, b) in g.areas().iter().zip(g2.areas().iter()) {
            assert!((a - b).abs() < 1e-12);
        }
        // canonical serialization is stable
        let json2 = GraphDocument::from_partition_graph(&g2).to_json().unwrap();
        assert_eq!(json, json2);
    }

    #[test]
    fn discrete_graph_round_trips() {
        let t = crate::evolver::template_by_name("conf_j").unwrap();
        let targets = AreaTargets::equal(3).unwrap();
        let g = crate::evolver::templates::template_instantiate(&t, &targets, 16).unwrap();
        let doc = GraphDocument::from_discrete_graph(&g);
        let json = doc.to_json().unwrap();
        let back = GraphDocument::from_json(&json)
            .unwrap()
            .to_discrete_graph()
            .unwrap();
        assert!((g.perimeter() - back.perimeter()).abs() < 1e-12);
        for (a, b) in g.areas().iter().zip(back.areas().iter()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn version_mismatch_is_rejected() {
        let t = AreaTargets::equal(3).unwrap();
        let g = solve_three_areas(&t).unwrap().to_partition_graph().unwrap();
        let mut doc = GraphDocument::from_partition_graph(&g);
        doc.schema_version = "0".into();
        let json = serde_json::to_string(&doc).unwrap();
        assert!(GraphDocument::from_json(&json).is_err());
    }
}
