//! End-to-end tests of the `toric` binary: exit codes, report text, the
//! artifact emit/verify loop with tampering, and agreement of the shipped
//! corpus files with the built-in constructors.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn toric(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_toric")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf8 stdout")
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).expect("utf8 stderr")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("no signal")
}

fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus")
}

#[test]
fn check_reports_fan_invariants() {
    let out = toric(&["check", "p2"]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("# toric check p2"));
    assert!(text.contains("status: valid"));
    assert!(text.contains("rays: 3"));
    assert!(text.contains("smooth: true"));
    assert!(text.contains("complete: true"));
}

#[test]
fn check_reports_presentation_invariants() {
    let out = toric(&["check", "doubled_line_presentation"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("kind: presentation"));
    assert!(text.contains("separated: false"));
}

#[test]
fn unknown_input_name_is_an_input_error() {
    let out = toric(&["check", "nosuchexample"]);
    assert_eq!(code(&out), 3);
    assert!(stderr(&out).contains("nosuchexample"));
}

#[test]
fn invalid_fan_file_fails_check_with_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.fan");
    std::fs::write(&path, "rank 2\nrays\n2 0\nmax_cones\n0\n").unwrap();
    let out = toric(&["check", path.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    let text = stdout(&out);
    assert!(text.contains("status: invalid"));
    assert!(text.contains("not primitive"));
}

#[test]
fn parse_errors_carry_positions_and_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.fan");
    std::fs::write(&path, "rank x\n").unwrap();
    let out = toric(&["check", path.to_str().unwrap()]);
    assert_eq!(code(&out), 3);
    assert!(stderr(&out).contains("line 1"));
}

#[test]
fn usage_errors_exit_three_and_help_exits_zero() {
    assert_eq!(code(&toric(&["--help"])), 0);
    assert_eq!(code(&toric(&["divisorial"])), 3);
    assert_eq!(code(&toric(&["no-such-command"])), 3);
    assert_eq!(code(&toric(&["divisorial", "p2", "--k", "0"])), 3);
}

#[test]
fn machine_format_is_parseable_json() {
    let out = toric(&["check", "p2", "--format", "machine"]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["command"], "check");
    assert_eq!(v["input"], "p2");
    assert_eq!(v["status"], "valid");
    assert_eq!(v["result"]["rays"], 3);
    assert_eq!(v["result"]["smooth"], true);
}

#[test]
fn machine_output_is_deterministic() {
    let a = stdout(&toric(&["divisorial", "wp112", "--k", "3", "--format", "machine"]));
    let b = stdout(&toric(&["divisorial", "wp112", "--k", "3", "--format", "machine"]));
    assert!(!a.is_empty());
    assert_eq!(a, b);
}

#[test]
fn classgroup_requires_a_fan() {
    let out = toric(&["classgroup", "p2"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("free rank 1"));

    let out = toric(&["classgroup", "doubled_line_presentation"]);
    assert_eq!(code(&out), 3);
    assert!(stderr(&out).contains("needs a fan input"));
}

#[test]
fn divisorial_exit_codes_follow_the_decision() {
    let yes = toric(&["divisorial", "p2"]);
    assert_eq!(code(&yes), 0);
    assert!(stdout(&yes).contains("status: YES"));

    let no = toric(&["divisorial", "nondivisorial3"]);
    assert_eq!(code(&no), 1);
    let text = stdout(&no);
    assert!(text.contains("status: NO"));
    assert!(text.contains("maximal cone 0"));

    // Divisorial but neither simplicial nor complete: the k = 2 decision
    // has no certificate route and stays open.
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("halfopen.fan");
    std::fs::write(
        &path,
        "rank 3\nrays\n0 0 1\n1 0 1\n0 1 1\n1 1 1\n0 -1 0\nmax_cones\n0 1 2 3\n0 1 4\n",
    )
    .unwrap();
    let unknown = toric(&["divisorial", path.to_str().unwrap(), "--k", "2"]);
    assert_eq!(code(&unknown), 2);
    assert!(stdout(&unknown).contains("status: UNKNOWN"));
}

#[test]
fn conoid_reports_bound_exhaustion_with_exit_two() {
    let done = toric(&["conoid", "p2"]);
    assert_eq!(code(&done), 0);
    assert!(stdout(&done).contains("status: COMPLETE"));

    let cut = toric(&["conoid", "wp112", "--bound", "1"]);
    assert_eq!(code(&cut), 2);
    assert!(stdout(&cut).contains("status: BOUND_EXHAUSTED"));
}

#[test]
fn embed_bound_exhaustion_exits_two() {
    let out = toric(&["embed", "wp112", "--bound", "1"]);
    assert_eq!(code(&out), 2);
    assert!(stdout(&out).contains("status: BOUND_EXHAUSTED"));
}

#[test]
fn embed_reports_the_weighted_plane_embedding() {
    let out = toric(&["embed", "wp112"]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("status: EMBEDDED"));
    assert!(text.contains("ambient coordinates: 4"));
    assert!(text.contains("separated: true"));
}

#[test]
fn cox_emit_verify_and_tamper_loop() {
    let dir = tempfile::tempdir().unwrap();
    let art = dir.path().join("cox.json");
    let out = toric(&["cox", "p2", "--emit", art.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("artifact written"));

    let ok = toric(&["verify", art.to_str().unwrap()]);
    assert_eq!(code(&ok), 0, "stdout: {}", stdout(&ok));
    assert!(stdout(&ok).contains("status: PASS"));
    assert!(stdout(&ok).contains("kind: cox"));

    let mut v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&art).unwrap()).unwrap();
    v["presentation"]["charts"][0]["vanishing"] = serde_json::json!([0]);
    std::fs::write(&art, serde_json::to_string(&v).unwrap()).unwrap();
    let bad = toric(&["verify", art.to_str().unwrap()]);
    assert_eq!(code(&bad), 1);
    assert!(stdout(&bad).contains("status: FAIL"));
}

#[test]
fn divisorial_no_artifact_verifies_and_rejects_forged_witness() {
    let dir = tempfile::tempdir().unwrap();
    let art = dir.path().join("no.json");
    let out = toric(&["divisorial", "nondivisorial3", "--emit", art.to_str().unwrap()]);
    assert_eq!(code(&out), 1);

    let ok = toric(&["verify", art.to_str().unwrap()]);
    assert_eq!(code(&ok), 0);
    assert!(stdout(&ok).contains("re-derived"));

    let mut v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&art).unwrap()).unwrap();
    v["status"]["No"]["witness_cone"] = serde_json::json!(5);
    std::fs::write(&art, serde_json::to_string(&v).unwrap()).unwrap();
    let bad = toric(&["verify", art.to_str().unwrap()]);
    assert_eq!(code(&bad), 1);
    assert!(stdout(&bad).contains("claims 5"));
}

#[test]
fn ample_artifact_demonstrations_are_checked() {
    let dir = tempfile::tempdir().unwrap();
    let art = dir.path().join("ample.json");
    let out = toric(&["divisorial", "wp112", "--k", "3", "--emit", art.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("ample divisor"));

    let ok = toric(&["verify", art.to_str().unwrap()]);
    assert_eq!(code(&ok), 0, "stdout: {}", stdout(&ok));

    // Claiming the same certificate for k = 1 changes the expected tuple
    // layout, which the verifier recomputes.
    let mut v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&art).unwrap()).unwrap();
    v["k"] = serde_json::json!(1);
    std::fs::write(&art, serde_json::to_string(&v).unwrap()).unwrap();
    let bad = toric(&["verify", art.to_str().unwrap()]);
    assert_eq!(code(&bad), 1);
    assert!(stdout(&bad).contains("status: FAIL"));
}

#[test]
fn conoid_emit_verify_and_tamper_loop() {
    let dir = tempfile::tempdir().unwrap();
    let art = dir.path().join("conoid.json");
    let out = toric(&["conoid", "wp112", "--emit", art.to_str().unwrap()]);
    assert_eq!(code(&out), 0);

    let ok = toric(&["verify", art.to_str().unwrap()]);
    assert_eq!(code(&ok), 0, "stdout: {}", stdout(&ok));

    let mut v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&art).unwrap()).unwrap();
    let second = v["sections"]["generators"][1].clone();
    v["sections"]["generators"][0] = second;
    std::fs::write(&art, serde_json::to_string(&v).unwrap()).unwrap();
    let bad = toric(&["verify", art.to_str().unwrap()]);
    assert_eq!(code(&bad), 1);
    assert!(stdout(&bad).contains("not strictly sorted"));
}

#[test]
fn embedding_artifact_rejects_flag_tampering() {
    let dir = tempfile::tempdir().unwrap();
    let art = dir.path().join("embed.json");
    let out = toric(&["embed", "wp112", "--emit", art.to_str().unwrap()]);
    assert_eq!(code(&out), 0);

    let ok = toric(&["verify", art.to_str().unwrap()]);
    assert_eq!(code(&ok), 0, "stdout: {}", stdout(&ok));

    let mut v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&art).unwrap()).unwrap();
    v["embedding"]["separated"] = serde_json::json!(false);
    std::fs::write(&art, serde_json::to_string(&v).unwrap()).unwrap();
    let bad = toric(&["verify", art.to_str().unwrap()]);
    assert_eq!(code(&bad), 1);
    assert!(stdout(&bad).contains("status: FAIL"));
}

#[test]
fn aksets_reports_the_doubled_line_and_survives_the_verify_loop() {
    let dir = tempfile::tempdir().unwrap();
    let art = dir.path().join("aksets.json");
    let out =
        toric(&["aksets", "doubled_line_presentation", "--emit", art.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("maximal subsets with the 2-tuple property: 2"));
    assert!(text.contains("{0, 1}"));
    assert!(text.contains("{0, 2}"));

    let ok = toric(&["verify", art.to_str().unwrap()]);
    assert_eq!(code(&ok), 0);

    let mut v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&art).unwrap()).unwrap();
    v["analysis"]["maximal"] = serde_json::json!([]);
    std::fs::write(&art, serde_json::to_string(&v).unwrap()).unwrap();
    let bad = toric(&["verify", art.to_str().unwrap()]);
    assert_eq!(code(&bad), 1);
    assert!(stdout(&bad).contains("recomputation"));
}

#[test]
fn aksets_on_the_line_excludes_the_fixed_point_pair() {
    // The two fixed points of the line lie in no common invariant chart, so
    // each maximal subset keeps the torus orbit and drops one fixed point.
    let out = toric(&["aksets", "p1"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("complement components: 2"));
    assert!(text.contains("maximal subsets with the 2-tuple property: 2"));
    assert!(text.contains("{0, 1}"));
    assert!(text.contains("{0, 2}"));
}

#[test]
fn verify_rejects_non_artifacts_with_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("junk.json");
    std::fs::write(&path, "{\"kind\": \"nonsense\"}").unwrap();
    let out = toric(&["verify", path.to_str().unwrap()]);
    assert_eq!(code(&out), 3);
    assert!(stderr(&out).contains("not an artifact"));
}

#[test]
fn corpus_files_match_the_builtin_constructors() {
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(corpus_dir().join("manifest.json")).unwrap())
            .unwrap();
    let entries = manifest.as_object().unwrap();
    assert!(!entries.is_empty());

    let mut listed: Vec<String> = vec!["manifest.json".into()];
    for (name, entry) in entries {
        let file = entry["file"].as_str().unwrap();
        listed.push(file.to_string());
        let text = std::fs::read_to_string(corpus_dir().join(file)).unwrap();
        match entry["kind"].as_str().unwrap() {
            "fan" => {
                let fan = toric::files::parse_fan(&text).unwrap();
                assert_eq!(fan, toric::corpus::fan_by_name(name).unwrap(), "{name}");
                assert_eq!(toric::files::serialize_fan(&fan), text, "{name} bytes");
                let v = fan.validate().unwrap();
                assert_eq!(v.rank() as u64, entry["rank"].as_u64().unwrap());
                assert_eq!(v.n_rays() as u64, entry["rays"].as_u64().unwrap());
                assert_eq!(v.n_max_cones() as u64, entry["max_cones"].as_u64().unwrap());
                let p = v.props();
                assert_eq!(p.smooth, entry["smooth"].as_bool().unwrap(), "{name} smooth");
                assert_eq!(
                    p.simplicial,
                    entry["simplicial"].as_bool().unwrap(),
                    "{name} simplicial"
                );
                assert_eq!(p.complete, entry["complete"].as_bool().unwrap(), "{name} complete");
                assert_eq!(
                    toric::divisor::is_divisorial(&v).is_ok(),
                    entry["divisorial"].as_bool().unwrap(),
                    "{name} divisorial"
                );
            }
            "presentation" => {
                let qp = toric::files::parse_presentation(&text).unwrap();
                assert_eq!(qp, toric::corpus::presentation_by_name(name).unwrap(), "{name}");
                assert_eq!(toric::files::serialize_presentation(&qp), text, "{name} bytes");
                toric::embed::validate_presentation(&qp).unwrap();
                assert_eq!(qp.n as u64, entry["coordinates"].as_u64().unwrap());
                assert_eq!(
                    qp.class_group.free_rank as u64,
                    entry["class_rank"].as_u64().unwrap()
                );
                assert_eq!(qp.cones.len() as u64, entry["charts"].as_u64().unwrap());
                let separated = matches!(
                    toric::embed::is_separated(&qp),
                    toric::embed::Separatedness::Separated
                );
                assert_eq!(separated, entry["separated"].as_bool().unwrap(), "{name} separated");
            }
            other => panic!("unknown corpus kind {other}"),
        }
    }

    // The directory holds exactly the manifest and its files.
    let mut present: Vec<String> = std::fs::read_dir(corpus_dir())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    present.sort();
    listed.sort();
    assert_eq!(present, listed);
}

#[test]
fn file_inputs_resolve_by_keyword() {
    let dir = tempfile::tempdir().unwrap();
    let fan_path = dir.path().join("square.fan");
    std::fs::write(&fan_path, std::fs::read_to_string(corpus_dir().join("p1xp1.fan")).unwrap())
        .unwrap();
    let out = toric(&["divisorial", fan_path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);

    let qp_path = dir.path().join("line.qp");
    std::fs::write(
        &qp_path,
        std::fs::read_to_string(corpus_dir().join("doubled_line_presentation.qp")).unwrap(),
    )
    .unwrap();
    let out = toric(&["aksets", qp_path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("complement components: 2"));
}
