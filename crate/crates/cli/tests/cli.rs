//! Command-surface tests: exit codes, artifact discipline (stdout carries
//! only the requested artifact), and document round trips through the
//! subcommands.

use std::process::Command;

fn diskfoam() -> Command {
    Command::new(env!("CARGO_BIN_EXE_diskfoam"))
}

#[test]
fn invalid_areas_exit_code_2() {
    let out = diskfoam()
        .args(["solve", "--areas", "1.0,1.0"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2), "{out:?}");
    assert!(out.stdout.is_empty(), "diagnostics go to stderr only");

    let out = diskfoam()
        .args(["solve", "--areas", "not-numbers"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn normalize_rescales_arbitrary_weights() {
    let out = diskfoam()
        .args(["solve", "--areas", "2,1,1", "--normalize"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{out:?}");
    let doc = diskfoam_core::document::GraphDocument::from_json(
        std::str::from_utf8(&out.stdout).unwrap(),
    )
    .unwrap();
    let areas = doc.metadata.areas.unwrap();
    let total: f64 = areas.iter().sum();
    assert!((total - std::f64::consts::PI).abs() < 1e-9);
    assert!((areas[0] - 2.0 * areas[1]).abs() < 1e-9);
}

#[test]
fn stability_of_nonstationary_doc_exit_code_4() {
    // three radii meeting at 90/135/135 degrees: a valid partition that is
    // not stationary
    let dir = std::env::temp_dir().join("diskfoam-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad_junction.json");
    let doc = serde_json::json!({
        "schema_version": "1",
        "vertices": [
            {"id": 0, "x": 0.0, "y": 0.0, "kind": "Interior"},
            {"id": 1, "x": 1.0, "y": 0.0, "kind": "Boundary"},
            {"id": 2, "x": 0.0, "y": 1.0, "kind": "Boundary"},
            {"id": 3, "x": -1.0, "y": 0.0, "kind": "Boundary"},
        ],
        "edges": [
            {"id": 0, "v0": 1, "v1": 0, "left_region": 0, "right_region": 1, "h": 0.0},
            {"id": 1, "v0": 2, "v1": 0, "left_region": 1, "right_region": 2, "h": 0.0},
            {"id": 2, "v0": 3, "v1": 0, "left_region": 2, "right_region": 0, "h": 0.0},
        ],
        "regions": [
            {"id": 0, "components": [[
                {"edge": 0, "forward": true},
                {"edge": 2, "forward": false},
                {"boundary_arc": {"from": 3, "to": 1}},
            ]]},
            {"id": 1, "components": [[
                {"edge": 1, "forward": true},
                {"edge": 0, "forward": false},
                {"boundary_arc": {"from": 1, "to": 2}},
            ]]},
            {"id": 2, "components": [[
                {"edge": 2, "forward": true},
                {"edge": 1, "forward": false},
                {"boundary_arc": {"from": 2, "to": 3}},
            ]]},
        ],
    });
    std::fs::write(&path, serde_json::to_string(&doc).unwrap()).unwrap();
    let out = diskfoam()
        .args(["stability", path.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4), "{out:?}");
    // check reports the residual but also exits 4
    let out = diskfoam()
        .args(["check", path.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn unknown_template_exit_code_2() {
    let out = diskfoam()
        .args(["evolve", "--template", "nonesuch"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn solve_then_stability_pipeline() {
    let dir = std::env::temp_dir().join("diskfoam-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let json = dir.join("solved.json");
    let svg = dir.join("solved.svg");
    let out = diskfoam()
        .args([
            "solve",
            "--areas",
            "1.2,0.8,1.1415926535897931",
            "--json",
            json.to_str().unwrap(),
            "--svg",
            svg.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "{out:?}");
    assert!(
        out.stdout.is_empty(),
        "artifact went to --json, stdout stays clean"
    );
    let svg_text = std::fs::read_to_string(&svg).unwrap();
    assert_eq!(svg_text.matches("<path").count(), 3);

    let out = diskfoam()
        .args(["stability", json.to_str().unwrap(), "--k", "2", "--m", "32"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{out:?}");
    let report: serde_json::Value =
        serde_json::from_str(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    assert_eq!(report["verdict"], "stable");

    let out = diskfoam()
        .args(["check", json.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out.status.success());
}

#[test]
fn evolve_writes_polyline_document() {
    let dir = std::env::temp_dir().join("diskfoam-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let json = dir.join("evolved.json");
    let out = diskfoam()
        .args([
            "evolve",
            "--template",
            "conf_j",
            "--areas",
            "equal",
            "--n-pts",
            "16",
            "--tol",
            "1e-4",
            "--json",
            json.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "{out:?}");
    let doc =
        diskfoam_core::document::GraphDocument::from_json(&std::fs::read_to_string(&json).unwrap())
            .unwrap();
    assert!(!doc.is_exact());
    let g = doc.to_discrete_graph().unwrap();
    assert!((g.perimeter() - doc.metadata.perimeter.unwrap()).abs() < 1e-9);
    // the document survives the check subcommand
    let out = diskfoam()
        .args(["check", json.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out.status.success(), "{out:?}");
}

#[test]
fn profile_csv_shape() {
    let out = diskfoam()
        .args(["profile", "--n", "2", "--grid", "11"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = std::str::from_utf8(&out.stdout).unwrap();
    let rows: Vec<&str> = text.trim().lines().collect();
    assert_eq!(rows.len(), 10, "header plus nine interior rows");
    assert_eq!(rows[0], "a1,a2,perimeter,error");
    // symmetric about the diameter, maximum 2 at the middle row
    let mid: Vec<&str> = rows[5].split(',').collect();
    let perimeter: f64 = mid[2].parse().unwrap();
    assert!((perimeter - 2.0).abs() < 1e-9);
}

#[test]
fn topology_event_exit_code_5() {
    // configuration (d) is a saddle at equal areas: descent slides off it
    // until an edge collapses, which must surface as a topology event
    let out = diskfoam()
        .args([
            "evolve",
            "--template",
            "conf_d",
            "--areas",
            "equal",
            "--n-pts",
            "24",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(5), "{out:?}");
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("topology event"), "{err}");
}

#[test]
fn compare_lists_catalog() {
    let out = diskfoam()
        .args(["compare", "--n", "3", "--list"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(text.lines().count(), 11);
    assert!(text.contains("conf_j"));
    assert!(text.contains("hex"));
}

#[test]
fn profile_json_emits_documents() {
    let dir = std::env::temp_dir().join("diskfoam-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let json = dir.join("profile.json");
    let out = diskfoam()
        .args([
            "profile",
            "--n",
            "2",
            "--grid",
            "5",
            "--csv",
            dir.join("profile.csv").to_str().unwrap(),
            "--json",
            json.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "{out:?}");
    let docs: Vec<serde_json::Value> =
        serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(docs.len(), 3, "three interior grid points");
    for d in &docs {
        assert_eq!(d["schema_version"], "1");
    }
}

#[test]
fn seeded_starts_reach_the_same_minimum() {
    let mut perimeters = Vec::new();
    for seed in ["1", "2"] {
        let out = diskfoam()
            .args([
                "evolve",
                "--template",
                "conf_j",
                "--areas",
                "1.4,0.9,0.8415926535897932",
                "--n-pts",
                "16",
                "--tol",
                "1e-6",
                "--seed",
                seed,
            ])
            .output()
            .unwrap();
        assert!(out.status.success(), "{out:?}");
        let doc = diskfoam_core::document::GraphDocument::from_json(
            std::str::from_utf8(&out.stdout).unwrap(),
        )
        .unwrap();
        perimeters.push(doc.metadata.perimeter.unwrap());
    }
    assert!(
        (perimeters[0] - perimeters[1]).abs() < 1e-5,
        "perturbed starts must agree: {perimeters:?}"
    );
}
