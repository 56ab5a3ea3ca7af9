use std::path::PathBuf;

use glproof::check::check_proof;
use glproof::cli::run;
use glproof::format::parse_proof_file;

struct Outcome {
    code: i32,
    stdout: String,
    stderr: String,
}

fn invoke_with_stdin(args: &[&str], stdin: &str) -> Outcome {
    let mut argv = vec!["glproof"];
    argv.extend_from_slice(args);
    let mut input = stdin.as_bytes();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(argv, &mut input, &mut out, &mut err);
    Outcome {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn invoke(args: &[&str]) -> Outcome {
    invoke_with_stdin(args, "")
}

fn fixture(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("tests/fixtures");
    p.push(name);
    p.display().to_string()
}

#[test]
fn decide_lob_in_csgl_prints_a_checkable_proof() {
    let r = invoke(&["decide", "--calculus", "csgl", "[]([]p->p)->[]p"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let p = parse_proof_file(&r.stdout).unwrap();
    assert!(check_proof(&p).accepted);
    assert!(r.stdout.starts_with("calculus: CSGL\n"));
}

#[test]
fn decide_invalid_reports_countermodel() {
    let r = invoke(&["decide", "[]p -> p"]);
    assert_eq!(r.code, 1);
    assert!(r.stdout.starts_with("NotProved\t.\t"));
    assert!(r.stdout.contains("countermodel"));
}

#[test]
fn decide_json_output() {
    let r = invoke(&["decide", "--format", "json", "p | ~p"]);
    assert_eq!(r.code, 0);
    let v: serde_json::Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(v["result"], "proved");
    assert_eq!(v["calculus"], "GLseq");
}

#[test]
fn decide_reads_stdin() {
    let r = invoke_with_stdin(&["decide", "-"], "# a comment\n[]p -> [][]p\n");
    assert_eq!(r.code, 0, "{}", r.stderr);
}

#[test]
fn fuel_exhaustion_is_reported() {
    let r = invoke(&["decide", "--fuel", "1", "[]([]p->p)->[]p"]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.starts_with("FuelExhausted\t"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(invoke(&["decide", "--calculus", "lk", "p"]).code, 2);
    assert_eq!(invoke(&["transform", "--pass", "cut", "x.glp"]).code, 2);
    assert_eq!(invoke(&["render", "--format", "svg", "x.glp"]).code, 2);
    assert_eq!(invoke(&["frobnicate"]).code, 2);
    let r = invoke(&["decide", "p &"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.starts_with("SyntaxError\t"));
    assert_eq!(invoke(&["check", "/nonexistent/file.glp"]).code, 2);
}

#[test]
fn help_exits_zero() {
    let r = invoke(&["--help"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("pipeline"));
}

#[test]
fn check_accepts_fixtures() {
    for name in ["id1.glp", "lob_cyclic.glp"] {
        let r = invoke(&["check", &fixture(name)]);
        assert_eq!(r.code, 0, "{name}: {}", r.stdout);
        assert!(r.stdout.starts_with("accepted\t"));
    }
}

#[test]
fn check_rejects_negative_fixtures_with_their_codes() {
    let cases = [
        ("bad_freshness.glp", "FreshnessViolation"),
        ("bad_backlink_self.glp", "BadBacklink"),
        ("bad_backlink_not_ancestor.glp", "BadBacklink"),
        ("bad_backlink_mismatch.glp", "BadBacklink"),
        ("bad_not_tree.glp", "NotATree"),
        ("bad_partition.glp", "BadPartition"),
    ];
    for (name, code) in cases {
        let r = invoke(&["check", &fixture(name)]);
        assert_eq!(r.code, 1, "{name}");
        for line in r.stdout.lines() {
            let fields: Vec<&str> = line.split('\t').collect();
            assert_eq!(fields.len(), 3, "{line}");
            assert_eq!(fields[0], code, "{name}");
        }
        let json = invoke(&["check", "--format", "json", &fixture(name)]);
        let v: serde_json::Value = serde_json::from_str(&json.stdout).unwrap();
        assert_eq!(v["accepted"], false);
        assert_eq!(v["failures"][0]["code"], code);
    }
}

#[test]
fn transform_rejects_wrong_calculus() {
    let r = invoke(&["transform", "--pass", "to-g3gl", &fixture("id1.glp")]);
    assert_eq!(r.code, 1);
    assert!(r.stdout.starts_with("NotApplicable\t"));
}

#[test]
fn transform_passes_chain_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let r = invoke(&["decide", "--calculus", "csgl", "[](p -> q) -> ([]p -> []q)"]);
    assert_eq!(r.code, 0);
    let mut current = dir.path().join("0.glp");
    std::fs::write(&current, &r.stdout).unwrap();
    for (i, pass) in ["end-active", "linearize", "normalize", "to-glseq", "to-g3gl"].iter().enumerate() {
        let r = invoke(&["transform", "--pass", pass, current.to_str().unwrap()]);
        assert_eq!(r.code, 0, "{pass}: {}", r.stdout);
        current = dir.path().join(format!("{}.glp", i + 1));
        std::fs::write(&current, &r.stdout).unwrap();
        assert_eq!(invoke(&["check", current.to_str().unwrap()]).code, 0, "{pass}");
    }
    let last = std::fs::read_to_string(&current).unwrap();
    assert!(last.starts_with("calculus: G3GLext"));
}

#[test]
fn pipeline_emits_six_stage_files() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("out");
    let r = invoke(&["pipeline", "[]p->[][]p", "--emit-trace", trace.to_str().unwrap()]);
    assert_eq!(r.code, 0, "{}{}", r.stdout, r.stderr);
    assert_eq!(r.stdout.lines().count(), 6);
    let mut names: Vec<String> = std::fs::read_dir(&trace)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert_eq!(
        names,
        ["1-csgl.glp", "2-end-active.glp", "3-lngl.glp", "4-normal.glp", "5-glseq.glp", "6-g3gl.glp"]
    );
    for name in names {
        let path = trace.join(&name);
        let r = invoke(&["check", path.to_str().unwrap()]);
        assert_eq!(r.code, 0, "{name}: {}", r.stdout);
    }
}

#[test]
fn pipeline_on_invalid_formula_fails() {
    let r = invoke(&["pipeline", "[][]p -> []p"]);
    assert_eq!(r.code, 1);
    assert!(r.stdout.starts_with("NotProved\t"));
}

#[test]
fn pipeline_json() {
    let r = invoke(&["pipeline", "--format", "json", "p | ~p"]);
    assert_eq!(r.code, 0);
    let v: serde_json::Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(v["stages"].as_array().unwrap().len(), 6);
    assert_eq!(v["stages"][5]["calculus"], "G3GLext");
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["decide", "--calculus", "csgl", "[](p & q) -> []p & []q"][..],
        &["pipeline", "[]([]p -> p) -> []p"][..],
        &["oracle", "[]p | []~p"][..],
    ] {
        let a = invoke(args);
        let b = invoke(args);
        assert_eq!(a.stdout, b.stdout);
        assert_eq!(a.code, b.code);
    }
}

#[test]
fn oracle_verdicts() {
    assert_eq!(invoke(&["oracle", "[]([]p->p)->[]p"]).code, 0);
    let r = invoke(&["oracle", "[]p -> p"]);
    assert_eq!(r.code, 1);
    assert!(r.stdout.starts_with("countermodel at "));
    let r = invoke(&["oracle", "--bound", "1", "--format", "json", "[]p -> p"]);
    let v: serde_json::Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(v["result"], "countermodel");
}

#[test]
fn oracle_evaluates_in_a_given_model() {
    let dir = tempfile::tempdir().unwrap();
    let model = dir.path().join("m.glm");
    std::fs::write(&model, "worlds: a b\nrel: a<b\nval p: b\n").unwrap();
    let m = model.to_str().unwrap();
    assert_eq!(invoke(&["oracle", "--model", m, "[]p"]).code, 0);
    let r = invoke(&["oracle", "--model", m, "p"]);
    assert_eq!(r.code, 1);
    assert_eq!(r.stdout, "false at a\n");
    std::fs::write(&model, "worlds: a\nrel: a<a\n").unwrap();
    assert_eq!(invoke(&["oracle", "--model", m, "p"]).code, 2);
}

#[test]
fn render_formats() {
    let file = fixture("lob_cyclic.glp");
    let text = invoke(&["render", &file]);
    assert_eq!(text.code, 0);
    assert!(text.stdout.starts_with("GLcirc proof of "));
    let dot = invoke(&["render", "--format", "dot", &file]);
    assert!(dot.stdout.contains("style=dashed"));
    let latex = invoke(&["render", "--format", "latex", &file]);
    assert!(latex.stdout.starts_with("\\begin{prooftree}"));
    assert!(latex.stdout.contains("\\Box_{4}"));
}

#[test]
fn formula_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("lob.glf");
    std::fs::write(&path, "# Löb\n[]([]p -> p)\n  -> []p\n").unwrap();
    let r = invoke(&["decide", path.to_str().unwrap()]);
    assert_eq!(r.code, 0, "{}", r.stderr);
}
