//! End-to-end tests of the `pretop` binary: exit codes, report shapes,
//! derivation outputs, search determinism, sharding, and the rule that
//! every emitted document re-loads to an equal structure.

use std::path::{Path, PathBuf};
use std::process::Command;

use prelab::interchange::{self, Body, Envelope};
use prelab::search::{
    self, CertificateData, ExhaustionData, HuntOutcome, SearchKind, SearchStructure,
};
use serde_json::Value;

const CYCLIC_PAIR_DOC: &str = r#"{
  "format_version": 1,
  "kind": "preuniformity-basis",
  "carrier": ["a", "b", "c"],
  "basis": [
    [["a","a"], ["b","b"], ["c","c"], ["a","b"], ["b","c"], ["c","a"]],
    [["a","a"], ["b","b"], ["c","c"], ["a","c"], ["b","a"], ["c","b"]]
  ]
}"#;

const DISCRETE_MU_DOC: &str = r#"{
  "format_version": 1,
  "kind": "preuniformity-basis",
  "carrier": ["a", "b"],
  "basis": [[["a","a"], ["b","b"]]]
}"#;

const DISCRETE_DELTA_DOC: &str = r#"{
  "format_version": 1,
  "kind": "preproximity",
  "carrier": ["a", "b"],
  "near": [[["a"], ["a"]], [["b"], ["b"]]]
}"#;

const STRONG_NOT_SYMMETRIC_SPEC: &str =
    r#"{"kind": "preuniformity-basis", "carrier_bound": 2, "target": "strong ∧ ¬symmetric"}"#;

const SYMMETRIC_NOT_STRONG_SPEC: &str =
    r#"{"kind": "preuniformity-basis", "carrier_bound": 2, "target": "symmetric ∧ ¬strong"}"#;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn pretop(args: &[&str]) -> Run {
    let output = Command::new(env!("CARGO_BIN_EXE_pretop"))
        .args(args)
        .output()
        .expect("the binary runs");
    Run {
        code: output.status.code().expect("no signal"),
        stdout: String::from_utf8(output.stdout).expect("utf-8 stdout"),
        stderr: String::from_utf8(output.stderr).expect("utf-8 stderr"),
    }
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).expect("fixture write");
    path
}

fn path_str(p: &PathBuf) -> &str {
    p.to_str().expect("utf-8 path")
}

/// Emitted documents are canonical: loading and re-saving reproduces the
/// bytes, and the structure survives the round trip.
fn assert_canonical_document(path: &Path) {
    let text = std::fs::read_to_string(path).expect("emitted file reads");
    let loaded = interchange::loads(&text).expect("emitted file re-loads");
    let resaved =
        interchange::save(&interchange::structure_doc(&loaded.structure, &loaded.labels));
    assert_eq!(resaved, text, "emitted document is not canonical: {path:?}");
}

#[test]
fn verify_flags_the_documented_example() {
    let dir = tempfile::tempdir().expect("temp dir");
    let example = write(dir.path(), "example.json", CYCLIC_PAIR_DOC);

    let run = pretop(&["verify", path_str(&example)]);
    assert_eq!(run.code, 2, "axiom failure must exit 2; stderr: {}", run.stderr);

    let report: Value = serde_json::from_str(&run.stdout).expect("JSON report");
    assert_eq!(report["valid"], Value::Bool(false));
    let checks = report["checks"].as_array().expect("checks array");
    let u3 = checks
        .iter()
        .find(|c| c["name"] == "U3")
        .expect("U3 check present");
    assert_eq!(u3["holds"], Value::Bool(false));
    assert_eq!(report["induced_opens"].as_array().map(Vec::len), Some(5));
    assert_eq!(report["separation_profile"]["t1"], Value::Bool(true));
    assert_eq!(report["separation_profile"]["t2"], Value::Bool(false));
}

#[test]
fn verify_text_report_names_the_failure() {
    let dir = tempfile::tempdir().expect("temp dir");
    let example = write(dir.path(), "example.json", CYCLIC_PAIR_DOC);

    let run = pretop(&["verify", path_str(&example), "--format", "text"]);
    assert_eq!(run.code, 2);
    assert!(run.stdout.contains("U3"), "text report must name U3: {}", run.stdout);
}

#[test]
fn verify_discrete_family_exits_zero() {
    let dir = tempfile::tempdir().expect("temp dir");
    let discrete = write(dir.path(), "discrete-mu.json", DISCRETE_MU_DOC);

    let run = pretop(&["verify", path_str(&discrete)]);
    assert_eq!(run.code, 0, "stderr: {}", run.stderr);
    let report: Value = serde_json::from_str(&run.stdout).expect("JSON report");
    assert_eq!(report["valid"], Value::Bool(true));
}

#[test]
fn verify_malformed_file_exits_one() {
    let dir = tempfile::tempdir().expect("temp dir");
    let malformed = write(dir.path(), "malformed.json", "{ this is not json");

    let run = pretop(&["verify", path_str(&malformed)]);
    assert_eq!(run.code, 1);
    assert!(!run.stderr.is_empty(), "format errors must be reported on stderr");
}

#[test]
fn verify_kind_mismatch_is_a_format_error() {
    let dir = tempfile::tempdir().expect("temp dir");
    let example = write(dir.path(), "example.json", CYCLIC_PAIR_DOC);

    let run = pretop(&["verify", path_str(&example), "--kind", "pretopology"]);
    assert_eq!(run.code, 1, "kind mismatch must exit 1; stderr: {}", run.stderr);
}

#[test]
fn derive_tau_emits_the_five_opens() {
    let dir = tempfile::tempdir().expect("temp dir");
    let example = write(dir.path(), "example.json", CYCLIC_PAIR_DOC);
    let out = dir.path().join("tau.json");

    let run = pretop(&["derive", "tau", path_str(&example), "--out", path_str(&out)]);
    assert_eq!(run.code, 0, "stderr: {}", run.stderr);

    let doc: Value =
        serde_json::from_str(&std::fs::read_to_string(&out).expect("output written"))
            .expect("JSON document");
    assert_eq!(doc["kind"], Value::String("pretopology".into()));
    assert_eq!(doc["opens"].as_array().map(Vec::len), Some(5));
    assert_canonical_document(&out);

    let reverify = pretop(&["verify", path_str(&out)]);
    assert_eq!(reverify.code, 0, "the derived opens must verify clean");
}

#[test]
fn derive_coreflection_fixes_the_discrete_family() {
    let dir = tempfile::tempdir().expect("temp dir");
    let discrete = write(dir.path(), "discrete-mu.json", DISCRETE_MU_DOC);
    let first = dir.path().join("coreflection.json");
    let second = dir.path().join("coreflection-again.json");

    let run =
        pretop(&["derive", "coreflection", path_str(&discrete), "--out", path_str(&first)]);
    assert_eq!(run.code, 0, "stderr: {}", run.stderr);

    // same structure as the input
    let input = interchange::loads(DISCRETE_MU_DOC).expect("fixture loads");
    let output =
        interchange::loads(&std::fs::read_to_string(&first).expect("read")).expect("re-loads");
    let (interchange::Structure::PreuniformityBasis(a), interchange::Structure::PreuniformityBasis(b)) =
        (input.structure, output.structure)
    else {
        panic!("expected entourage-family documents");
    };
    assert_eq!(a, b, "the coreflection of a discrete family is the family itself");

    // and a byte-level fixed point on the canonical output
    let again =
        pretop(&["derive", "coreflection", path_str(&first), "--out", path_str(&second)]);
    assert_eq!(again.code, 0);
    assert_eq!(
        std::fs::read(&first).expect("read"),
        std::fs::read(&second).expect("read"),
        "deriving the coreflection twice must be a byte-level fixed point"
    );
    assert_canonical_document(&first);
}

#[test]
fn derive_mu_delta_emits_a_two_member_basis() {
    let dir = tempfile::tempdir().expect("temp dir");
    let delta = write(dir.path(), "discrete-delta.json", DISCRETE_DELTA_DOC);
    let out = dir.path().join("mu-delta.json");

    let run = pretop(&["derive", "mu_delta", path_str(&delta), "--out", path_str(&out)]);
    assert_eq!(run.code, 0, "stderr: {}", run.stderr);

    let doc: Value =
        serde_json::from_str(&std::fs::read_to_string(&out).expect("output written"))
            .expect("JSON document");
    assert_eq!(doc["kind"], Value::String("preuniformity-basis".into()));
    assert_eq!(doc["basis"].as_array().map(Vec::len), Some(2));
    assert_canonical_document(&out);

    let reverify = pretop(&["verify", path_str(&out)]);
    assert_eq!(reverify.code, 0, "the derived family must verify clean");
}

#[test]
fn search_is_deterministic_and_certificates_replay() {
    let dir = tempfile::tempdir().expect("temp dir");
    let spec = write(dir.path(), "strong-not-symmetric.spec", STRONG_NOT_SYMMETRIC_SPEC);
    let first = dir.path().join("certificate.json");
    let second = dir.path().join("certificate-again.json");

    let run = pretop(&["search", path_str(&spec), "--out", path_str(&first)]);
    assert_eq!(run.code, 0, "stderr: {}", run.stderr);
    let again = pretop(&["search", path_str(&spec), "--out", path_str(&second)]);
    assert_eq!(again.code, 0);
    assert_eq!(
        std::fs::read(&first).expect("read"),
        std::fs::read(&second).expect("read"),
        "the same spec must produce byte-identical outputs"
    );

    let doc: Value =
        serde_json::from_str(&std::fs::read_to_string(&first).expect("read")).expect("JSON");
    assert_eq!(doc["kind"], Value::String("certificate".into()));
    assert_eq!(
        doc["canonical_id"],
        Value::String("preuniformity-basis:n=2:[11,13]".into())
    );

    // replay through verify and explain
    let verify = pretop(&["verify", path_str(&first)]);
    assert_eq!(verify.code, 0, "stderr: {}", verify.stderr);
    let report: Value = serde_json::from_str(&verify.stdout).expect("JSON report");
    assert_eq!(report["replay_ok"], Value::Bool(true));

    let explain = pretop(&["explain", path_str(&first)]);
    assert_eq!(explain.code, 0);
    assert!(explain.stdout.contains("replay: OK"), "explain output: {}", explain.stdout);

    // a tampered trace is caught
    let tampered_path = dir.path().join("tampered.json");
    let tampered = std::fs::read_to_string(&first)
        .expect("read")
        .replacen("\"value\": false", "\"value\": true", 1);
    std::fs::write(&tampered_path, tampered).expect("write");
    let caught = pretop(&["verify", path_str(&tampered_path)]);
    assert_eq!(caught.code, 2, "a tampered certificate must fail replay");
}

#[test]
fn search_exhaustion_record_replays_and_tampering_is_caught() {
    let dir = tempfile::tempdir().expect("temp dir");
    let spec = write(dir.path(), "symmetric-not-strong.spec", SYMMETRIC_NOT_STRONG_SPEC);
    let out = dir.path().join("exhaustion.json");

    let run = pretop(&["search", path_str(&spec), "--out", path_str(&out)]);
    assert_eq!(run.code, 0, "stderr: {}", run.stderr);
    let doc: Value =
        serde_json::from_str(&std::fs::read_to_string(&out).expect("read")).expect("JSON");
    assert_eq!(doc["kind"], Value::String("exhaustion".into()));
    assert_eq!(doc["carrier_bound"], Value::from(2));
    assert_eq!(doc["examined"], Value::from(3));

    let verify = pretop(&["verify", path_str(&out)]);
    assert_eq!(verify.code, 0, "re-running the sweep must confirm the record");

    let tampered_path = dir.path().join("tampered.json");
    let tampered = std::fs::read_to_string(&out)
        .expect("read")
        .replacen("\"examined\": 3", "\"examined\": 2", 1);
    std::fs::write(&tampered_path, tampered).expect("write");
    let caught = pretop(&["verify", path_str(&tampered_path)]);
    assert_eq!(caught.code, 2, "a tampered exhaustion record must fail the re-run");
}

/// Rebuilds a hunt outcome from an emitted record so shard outputs can be
/// merged through the library's partition interface.
fn outcome_from_file(path: &Path) -> HuntOutcome {
    let text = std::fs::read_to_string(path).expect("read");
    let envelope: Envelope = serde_json::from_str(&text).expect("parses");
    match envelope.body {
        Body::Certificate { target, canonical_id, structure, trace } => {
            let loaded = interchange::load(&structure).expect("embedded structure loads");
            let structure =
                SearchStructure::from_loaded(&loaded.structure).expect("embedded structure valid");
            HuntOutcome::Found(CertificateData { target, canonical_id, structure, trace })
        }
        Body::Exhaustion { target, structure_kind, carrier_bound, size_bound, examined } => {
            HuntOutcome::Exhausted(ExhaustionData {
                target,
                kind: SearchKind::from_str(&structure_kind).expect("known kind"),
                carrier_bound,
                size_bound,
                examined,
            })
        }
        other => panic!("not a search record: {}", other.kind_name()),
    }
}

#[test]
fn shard_outputs_merge_to_the_whole_run() {
    let dir = tempfile::tempdir().expect("temp dir");
    for (name, spec_text) in [
        ("found.spec", STRONG_NOT_SYMMETRIC_SPEC),
        ("exhausted.spec", SYMMETRIC_NOT_STRONG_SPEC),
    ] {
        let spec = write(dir.path(), name, spec_text);
        let whole = dir.path().join(format!("{name}.whole.json"));
        let run = pretop(&["search", path_str(&spec), "--out", path_str(&whole)]);
        assert_eq!(run.code, 0, "stderr: {}", run.stderr);

        let mut shards = Vec::new();
        for i in 0..2 {
            let part = dir.path().join(format!("{name}.shard{i}.json"));
            let shard_arg = format!("{i}/2");
            let run = pretop(&[
                "search",
                path_str(&spec),
                "--shard",
                &shard_arg,
                "--out",
                path_str(&part),
            ]);
            assert_eq!(run.code, 0, "stderr: {}", run.stderr);
            shards.push(outcome_from_file(&part));
        }
        let merged = search::merge_outcomes(&shards).expect("two shards");
        assert_eq!(
            interchange::save(&merged.to_envelope()),
            std::fs::read_to_string(&whole).expect("read"),
            "merged shard outcomes must equal the unsharded record"
        );
    }
}

#[test]
fn explain_describes_a_structure_document() {
    let dir = tempfile::tempdir().expect("temp dir");
    let example = write(dir.path(), "example.json", CYCLIC_PAIR_DOC);

    let run = pretop(&["explain", path_str(&example)]);
    assert_eq!(run.code, 0, "stderr: {}", run.stderr);
    assert!(
        run.stdout.contains("3 points"),
        "the description names the carrier size: {}",
        run.stdout
    );
}
