//! Browser demo bindings: exact solves, stability verdicts, and stepwise
//! relaxation of catalog templates, each returning JSON with an inline SVG.

use wasm_bindgen::prelude::*;

use diskfoam_core::evolver::{self, template_by_name, DiscreteGraph, RelaxOptions};
use diskfoam_core::solver::{solve_three_areas, AreaTargets};
use diskfoam_core::stability::{stability_report, DEFAULT_M};
use diskfoam_core::svg;

fn err(e: impl std::fmt::Display) -> JsValue {
    JsValue::from_str(&e.to_string())
}

/// Exact three-region solve; raw weights are rescaled to sum to pi.
/// Returns {svg, perimeter, pressures, curvatures, areas}.
#[wasm_bindgen]
pub fn solve_three(w1: f64, w2: f64, w3: f64) -> Result<String, JsValue> {
    let targets = AreaTargets::normalized(vec![w1, w2, w3]).map_err(err)?;
    let graph = solve_three_areas(&targets).map_err(err)?;
    let pg = graph.to_partition_graph().map_err(err)?;
    let body = serde_json::json!({
        "svg": svg::render_partition_graph(&pg),
        "perimeter": graph.perimeter(),
        "pressures": graph.pressures,
        "curvatures": [graph.c12.h, graph.c23.h, graph.c31.h],
        "areas": targets.as_slice(),
    });
    Ok(body.to_string())
}

/// Constrained spectrum of the exact solution for the given weights.
/// Returns {lambda_min, modes, verdict}.
#[wasm_bindgen]
pub fn stability_of_solution(w1: f64, w2: f64, w3: f64, m: usize) -> Result<String, JsValue> {
    let targets = AreaTargets::normalized(vec![w1, w2, w3]).map_err(err)?;
    let graph = solve_three_areas(&targets)
        .and_then(|g| g.to_partition_graph())
        .map_err(err)?;
    let m = if m == 0 { DEFAULT_M } else { m };
    let report = stability_report(&graph, m, 4).map_err(err)?;
    let body = serde_json::json!({
        "lambda_min": report.eigenvalues.first(),
        "modes": report.eigenvalues,
        "verdict": report.verdict.as_str(),
    });
    Ok(body.to_string())
}

/// Names of the relaxation templates for a region count.
#[wasm_bindgen]
pub fn template_names(n: usize) -> String {
    let names: Vec<&str> = evolver::catalog(n).iter().map(|t| t.name).collect();
    serde_json::json!(names).to_string()
}

/// A stepwise relaxation session for interactive animation.
#[wasm_bindgen]
pub struct EvolveSession {
    graph: Option<DiscreteGraph>,
    perimeter: f64,
    iterations: usize,
    converged: bool,
    event: Option<String>,
}

#[wasm_bindgen]
impl EvolveSession {
    /// Instantiates a template at the given raw area weights
    /// (comma-separated, rescaled to sum to pi).
    #[wasm_bindgen(constructor)]
    pub fn new(template: &str, weights: &str, n_pts: usize) -> Result<EvolveSession, JsValue> {
        let t = template_by_name(template)
            .ok_or_else(|| err(format!("unknown template {template}")))?;
        let raw: Result<Vec<f64>, _> = weights.split(',').map(|s| s.trim().parse()).collect();
        let raw = raw.map_err(err)?;
        let targets = AreaTargets::normalized(raw).map_err(err)?;
        let graph = evolver::templates::template_instantiate(&t, &targets, n_pts).map_err(err)?;
        let perimeter = graph.perimeter();
        Ok(EvolveSession {
            graph: Some(graph),
            perimeter,
            iterations: 0,
            converged: false,
            event: None,
        })
    }

    /// Runs up to `iters` relaxation steps and returns
    /// {svg, perimeter, iterations, converged, event?}.
    pub fn step(&mut self, iters: usize) -> Result<String, JsValue> {
        if let Some(graph) = self.graph.take() {
            if !self.converged && self.event.is_none() {
                let opts = RelaxOptions {
                    max_iters: iters,
                    ..RelaxOptions::default()
                };
                match evolver::relax(graph, &opts) {
                    Ok(result) => {
                        self.perimeter = result.perimeter;
                        self.iterations += result.iterations;
                        self.converged = result.converged;
                        self.graph = Some(result.graph);
                    }
                    Err(e) => {
                        self.event = Some(e.to_string());
                    }
                }
            } else {
                self.graph = Some(graph);
            }
        }
        let svg_text = self
            .graph
            .as_ref()
            .map(svg::render_discrete_graph)
            .unwrap_or_default();
        let body = serde_json::json!({
            "svg": svg_text,
            "perimeter": self.perimeter,
            "iterations": self.iterations,
            "converged": self.converged,
            "event": self.event,
        });
        Ok(body.to_string())
    }
}

#[cfg(all(test, not(target_arch = "wasm32")))]
mod tests {
    use super::*;

    #[test]
    fn solve_three_returns_svg_and_stats() {
        let out = solve_three(1.0, 1.0, 1.0).unwrap();
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert!((v["perimeter"].as_f64().unwrap() - 3.0).abs() < 1e-9);
        assert!(v["svg"].as_str().unwrap().starts_with("<svg"));
    }

    #[test]
    fn stability_of_solution_reports_verdict() {
        let out = stability_of_solution(2.0, 1.0, 1.0, 32).unwrap();
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["verdict"], "stable");
    }

    #[test]
    fn evolve_session_steps_toward_three() {
        let mut session = EvolveSession::new("conf_j", "1,1,1", 24).unwrap();
        let mut last = f64::INFINITY;
        for _ in 0..40 {
            let out = session.step(200).unwrap();
            let v: serde_json::Value = serde_json::from_str(&out).unwrap();
            last = v["perimeter"].as_f64().unwrap();
            if v["converged"].as_bool().unwrap() {
                break;
            }
        }
        assert!((last - 3.0).abs() < 1e-2, "perimeter {last}");
    }

    #[test]
    fn template_names_cover_catalogs() {
        let three: Vec<String> = serde_json::from_str(&template_names(3)).unwrap();
        assert_eq!(three.len(), 11);
        assert!(three.contains(&"conf_j".to_string()));
    }
}
