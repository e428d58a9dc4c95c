//! End-to-end runs of the `occlusion` binary: every subcommand, the file
//! formats, and the exit-code contract (0 ok, 1 predicate failure, 2 bad
//! input).

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_occlusion"))
}

fn run_ok(args: &[&str]) -> Output {
    let out = bin().args(args).output().expect("spawn occlusion");
    assert!(
        out.status.success(),
        "occlusion {args:?} failed:\n{}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("occlusion-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn json_of(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn generate_learn_round_trip_with_markers() {
    let objects = tmp("objs.json");
    run_ok(&[
        "gen-objects", "--m", "4", "--size", "8", "--colors", "16",
        "--seed", "11", "--out", objects.to_str().unwrap(),
    ]);
    let doc = json_of(&objects);
    assert_eq!(doc["objects"].as_array().unwrap().len(), 4);
    assert_eq!(doc["c"], 16);

    let samples = tmp("samples.json");
    run_ok(&[
        "gen-images", "--objects", objects.to_str().unwrap(),
        "--count", "60", "--d", "50", "--k", "2", "--markers",
        "--constraint", "0:1", "--constraint", "0:2",
        "--seed", "3", "--out", samples.to_str().unwrap(),
    ]);
    let sdoc = json_of(&samples);
    assert_eq!(sdoc["meta"]["seed"], 3);
    assert_eq!(sdoc["samples"].as_array().unwrap().len(), 60);
    // Markers appear in-band as -2 / -3.
    let some_pixels: Vec<i64> = sdoc["samples"][0]["image"]["pixels"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_i64().unwrap())
        .collect();
    assert_eq!(some_pixels.len(), 50);

    let learned = tmp("learned.json");
    run_ok(&[
        "learn", "--mode", "markers", "--samples", samples.to_str().unwrap(),
        "--w", "3", "--out", learned.to_str().unwrap(),
    ]);
    // Identical sets modulo id order: compare sorted pixel rows.
    let rows = |v: &serde_json::Value| -> Vec<Vec<i64>> {
        let mut rows: Vec<Vec<i64>> = v["objects"]
            .as_array()
            .unwrap()
            .iter()
            .map(|o| {
                o["pixels"].as_array().unwrap().iter().map(|p| p.as_i64().unwrap()).collect()
            })
            .collect();
        rows.sort();
        rows
    };
    assert_eq!(rows(&json_of(&learned)), rows(&json_of(&objects)));
}

#[test]
fn check_structure_exit_codes_and_witness() {
    let objects = tmp("ws-objs.json");
    std::fs::write(
        &objects,
        r#"{"c":2,"s_min":5,"s":5,"objects":[{"id":0,"pixels":[1,0,1,1,1]}]}"#,
    )
    .unwrap();
    let out = bin()
        .args(["check-structure", "--objects", objects.to_str().unwrap(), "--w", "2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1), "violated property must exit 1");
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["holds"], false);
    assert_eq!(report["witness"]["first"], serde_json::json!([0, 2]));
    assert_eq!(report["witness"]["second"], serde_json::json!([0, 3]));

    let out = bin()
        .args(["check-structure", "--objects", objects.to_str().unwrap(), "--w", "3"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));

    // Strong variant with epsilon.
    let out = bin()
        .args([
            "check-structure", "--objects", objects.to_str().unwrap(),
            "--w", "3", "--epsilon", "1/3",
        ])
        .output()
        .unwrap();
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["epsilon"], "1/3");

    // Bad input exits 2.
    let out = bin()
        .args(["check-structure", "--objects", "/nonexistent.json", "--w", "2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn corrupt_then_infer_noisy_names_the_flips() {
    let objects = tmp("noisy-objs.json");
    run_ok(&[
        "gen-objects", "--m", "1", "--size", "64", "--colors", "8",
        "--seed", "5", "--out", objects.to_str().unwrap(),
    ]);
    // A clean image: the object fully visible via gen-images (k = 1).
    let samples = tmp("noisy-samples.json");
    run_ok(&[
        "gen-images", "--objects", objects.to_str().unwrap(),
        "--count", "1", "--d", "64", "--k", "1", "--room", "closed",
        "--seed", "5", "--out", samples.to_str().unwrap(),
    ]);
    let image = tmp("clean.json");
    std::fs::write(&image, serde_json::to_string(&json_of(&samples)["samples"][0]["image"]).unwrap())
        .unwrap();

    let corrupted = tmp("corrupted.json");
    run_ok(&[
        "corrupt", "--image", image.to_str().unwrap(), "--alpha", "1/16",
        "--window", "16", "--colors", "8", "--strategy", "worst-case-cluster",
        "--seed", "9", "--out", corrupted.to_str().unwrap(),
    ]);
    let cdoc = json_of(&corrupted);
    let flips = cdoc["plan"]["flips"].as_array().unwrap();
    assert!(!flips.is_empty());

    let corrupted_image = tmp("corrupted-image.json");
    std::fs::write(&corrupted_image, serde_json::to_string(&cdoc["image"]).unwrap()).unwrap();
    let inferred = tmp("inferred.json");
    run_ok(&[
        "infer", "--algo", "greedy-noisy",
        "--objects", objects.to_str().unwrap(),
        "--image", corrupted_image.to_str().unwrap(),
        "--w", "8", "--epsilon", "1/2", "--alpha", "1/16", "--window", "16",
        "--k", "1", "--out", inferred.to_str().unwrap(),
    ]);
    let idoc = json_of(&inferred);
    assert_eq!(idoc["feasible"], true);
    let corrected = idoc["corrected"].as_array().unwrap();
    // Every reported correction is one of the planned flips.
    for c in corrected {
        let idx = c[0].as_u64().unwrap();
        assert!(flips.iter().any(|f| f[0].as_u64() == Some(idx)));
    }
}

#[test]
fn dp_infer_reports_count_and_infeasibility() {
    let objects = tmp("dp-objs.json");
    std::fs::write(
        &objects,
        r#"{"c":2,"s_min":3,"s":3,"objects":[{"id":0,"pixels":[1,0,1]}]}"#,
    )
    .unwrap();
    let image = tmp("dp-image.json");
    std::fs::write(&image, r#"{"d":6,"pixels":[-1,1,0,1,-1,-1]}"#).unwrap();
    let out = run_ok(&[
        "infer", "--algo", "dp", "--objects", objects.to_str().unwrap(),
        "--image", image.to_str().unwrap(), "--room", "closed",
    ]);
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["object_count"], 1);
    assert_eq!(doc["explanation"][0]["bg"], 0);
    assert_eq!(doc["explanation"][1]["obj"], serde_json::json!([0, 0]));

    let bad = tmp("dp-bad-image.json");
    std::fs::write(&bad, r#"{"d":3,"pixels":[0,0,0]}"#).unwrap();
    let out = run_ok(&[
        "infer", "--algo", "dp", "--objects", objects.to_str().unwrap(),
        "--image", bad.to_str().unwrap(), "--room", "closed",
    ]);
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["feasible"], false);
}

#[test]
fn reduce_and_verify_ol_round_trip() {
    let ss = tmp("ss.json");
    std::fs::write(&ss, r#"{"n":3,"clauses":[[0,1],[0,1,2]]}"#).unwrap();
    let instance = tmp("ol.json");
    run_ok(&["reduce", "--ss", ss.to_str().unwrap(), "--out", instance.to_str().unwrap()]);
    let idoc = json_of(&instance);
    assert_eq!(idoc["n_obj"], 10);
    assert_eq!(idoc["d"], 13);
    assert_eq!(idoc["triples"].as_array().unwrap().len(), 13);

    // Objects from a satisfying assignment (x0 true, rest false).
    let objects = occlusion_core::hardness::assignment_to_objects(
        &occlusion_core::hardness::SsInstance::new(3, vec![vec![0, 1], vec![0, 1, 2]]).unwrap(),
        &[true, false, false],
    )
    .unwrap();
    let set = occlusion_core::model::ObjectSet::new(objects, 5).unwrap();
    let objects_path = tmp("ol-objects.json");
    std::fs::write(
        &objects_path,
        serde_json::to_string(&occlusion_cli::json::object_set_to_doc(&set)).unwrap(),
    )
    .unwrap();
    let out = bin()
        .args([
            "verify-ol", "--instance", instance.to_str().unwrap(),
            "--objects", objects_path.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));

    // A violating assignment's objects must be rejected with exit 1.
    let bad_objects = occlusion_core::hardness::assignment_to_objects(
        &occlusion_core::hardness::SsInstance::new(3, vec![vec![0, 1], vec![0, 1, 2]]).unwrap(),
        &[true, true, true],
    )
    .unwrap();
    let bad_set = occlusion_core::model::ObjectSet::new(bad_objects, 5).unwrap();
    let bad_path = tmp("ol-bad-objects.json");
    std::fs::write(
        &bad_path,
        serde_json::to_string(&occlusion_cli::json::object_set_to_doc(&bad_set)).unwrap(),
    )
    .unwrap();
    let out = bin()
        .args([
            "verify-ol", "--instance", instance.to_str().unwrap(),
            "--objects", bad_path.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn experiment_artifacts_are_deterministic_and_csv_works() {
    let a = tmp("exp-a.json");
    let b = tmp("exp-b.json");
    for path in [&a, &b] {
        run_ok(&[
            "experiment", "--name", "breaker-fixtures",
            "--out", path.to_str().unwrap(),
        ]);
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());

    let csv = tmp("exp.csv");
    run_ok(&[
        "experiment", "--name", "hardness-reduction", "--format", "csv",
        "--out", csv.to_str().unwrap(),
    ]);
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("# hardness-reduction\ntrial,seed,success"));
    assert_eq!(text.lines().count(), 2 + 16);

    // Unknown experiment names exit 2.
    let out = bin().args(["experiment", "--name", "nope"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn experiment_rejects_zero_trials_and_round_trips_artifacts() {
    let out = bin()
        .args(["experiment", "--name", "greedy-coverage", "--trials", "0"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));

    // The artifact parses back into the same document.
    let path = tmp("roundtrip.json");
    run_ok(&[
        "experiment", "--name", "marker-learning", "--trials", "4",
        "--out", path.to_str().unwrap(),
    ]);
    let text = std::fs::read_to_string(&path).unwrap();
    let docs: Vec<occlusion_cli::json::ExperimentResultDoc> =
        serde_json::from_str(&text).unwrap();
    let re_encoded = serde_json::to_string_pretty(&docs).unwrap() + "\n";
    for (a, b) in text.lines().zip(re_encoded.lines()) {
        assert_eq!(a, b, "artifact round-trip drift");
    }
    assert_eq!(re_encoded.len(), text.len());
    assert_eq!(docs[0].records.len(), docs[0].trials);
}

#[test]
fn fixture_emits_objects_image_and_plan() {
    let path = tmp("fixture.json");
    run_ok(&[
        "fixture", "--kind", "dp-noise", "--d", "12", "--w", "2",
        "--out", path.to_str().unwrap(),
    ]);
    let doc = json_of(&path);
    assert_eq!(doc["kind"], "dp-noise");
    assert_eq!(doc["plan"]["flips"].as_array().unwrap().len(), 1);
    assert_eq!(doc["clean"]["d"], 12);
    assert_eq!(doc["image"]["d"], 12);

    // Invalid geometry exits 2.
    let out = bin()
        .args(["fixture", "--kind", "dp-noise", "--d", "9", "--w", "2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn learn_parameter_validity_failure_exits_2() {
    let objects = tmp("lv-objs.json");
    run_ok(&[
        "gen-objects", "--m", "2", "--size", "24", "--colors", "32",
        "--seed", "2", "--out", objects.to_str().unwrap(),
    ]);
    let samples = tmp("lv-samples.json");
    run_ok(&[
        "gen-images", "--objects", objects.to_str().unwrap(),
        "--count", "5", "--d", "40", "--k", "2",
        "--seed", "2", "--out", samples.to_str().unwrap(),
    ]);
    // m * d' = 2 * 62 < 128: the two-object validity check must reject.
    let out = bin()
        .args([
            "learn", "--mode", "no-markers-2", "--samples", samples.to_str().unwrap(),
            "--w", "4", "--m", "2", "--s", "24",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("m * d'"));
}
