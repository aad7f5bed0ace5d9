use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use ctlab_cli::leaves::pair_gap;
use ctlab_cli::{CliError, EXIT_FAIL, EXIT_INPUT, EXIT_NUMERICAL};
use ctlab_core::kleinian::{solve_fiber_representation, KleinianError, Monodromy, SolverOptions};
use ctlab_core::words::BoundaryWord;
use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn ctlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ctlab"))
        .args(args)
        .output()
        .expect("the binary runs")
}

fn json_stdout(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

#[test]
fn ct_draw_without_samples_writes_only_the_header() {
    let out = ctlab(&["ct-draw", "--samples", "0", "--seed", "1"]);
    assert_eq!(code(&out), 0);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "t,x,y,z,estimate\n");
}

#[test]
fn ct_draw_files_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("curve.csv");
    let svg = dir.path().join("curve.svg");
    let args = |c: &Path, s: &Path| {
        vec![
            "ct-draw".to_string(),
            "--samples".into(),
            "300".into(),
            "--depth".into(),
            "20".into(),
            "--seed".into(),
            "9".into(),
            "--out".into(),
            c.display().to_string(),
            "--svg".into(),
            s.display().to_string(),
        ]
    };
    let run = |c: &Path, s: &Path| {
        let a = args(c, s);
        let out = ctlab(&a.iter().map(String::as_str).collect::<Vec<_>>());
        assert_eq!(code(&out), 0);
    };
    run(&csv, &svg);
    let (csv2, svg2) = (dir.path().join("again.csv"), dir.path().join("again.svg"));
    run(&csv2, &svg2);
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text, std::fs::read_to_string(&csv2).unwrap());
    assert_eq!(std::fs::read(&svg).unwrap(), std::fs::read(&svg2).unwrap());

    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows.len(), 301);
    let mut last_t = -1.0;
    for row in &rows[1..] {
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields.len(), 5);
        // 17 significant digits: one before the point, sixteen after
        for f in &fields {
            let mantissa = f.split('e').next().unwrap().trim_start_matches('-');
            assert_eq!(mantissa.len(), 18, "{f}");
        }
        let v: Vec<f64> = fields.iter().map(|f| f.parse().unwrap()).collect();
        assert!((0.0..1.0).contains(&v[0]) && v[0] > last_t);
        last_t = v[0];
        let norm = v[1] * v[1] + v[2] * v[2] + v[3] * v[3];
        assert!((norm - 1.0).abs() < 1e-9);
        assert!(v[4].is_finite());
    }
    let svg_text = std::fs::read_to_string(&svg).unwrap();
    assert!(svg_text.starts_with("<svg") && svg_text.contains("<polyline"));
}

#[test]
fn verify_leaves_with_no_leaves_passes_vacuously() {
    let out = ctlab(&["verify-leaves", "--leaves", "0", "--seed", "1"]);
    assert_eq!(code(&out), 0);
    let r = json_stdout(&out);
    assert_eq!(r["pass"], true);
    assert_eq!(r["leaves"], Value::Array(vec![]));
    assert_eq!(r["controls"], Value::Array(vec![]));
    assert_eq!(r["median_leaf_gap"], Value::Null);
}

#[test]
fn verify_leaves_counts_undecided_samples() {
    let out = ctlab(&["verify-leaves", "--leaves", "5", "--depth", "12", "--seed", "3"]);
    let r = json_stdout(&out);
    assert_eq!(code(&out), if r["pass"] == true { 0 } else { EXIT_FAIL });
    let leaves = r["leaves"].as_array().unwrap();
    assert_eq!(leaves.len(), 5);
    let undecided = leaves.iter().filter(|l| l["gap"]["undecided"] == true).count();
    assert_eq!(r["undecided_leaves"].as_u64().unwrap() as usize, undecided);
    assert_eq!(r["controls"].as_array().unwrap().len(), 5);
}

#[test]
fn identical_endpoints_are_a_degenerate_pair() {
    let rep = solve_fiber_representation(&Monodromy::figure_eight(), &SolverOptions::default())
        .unwrap();
    let w = BoundaryWord::stored("abAbbaBA".parse().unwrap());
    let g = pair_gap(&rep, &w, &w, 8, 1e-3).unwrap();
    assert_eq!(g.gap, 0.0);
    assert!(g.degenerate);
}

#[test]
fn coarse_commands_on_small_graphs() {
    let tree = fixture("graphs/tree15.graph");
    let path = fixture("graphs/path5.graph");
    let delta = ctlab(&["coarse", "delta", "--graph", tree.to_str().unwrap()]);
    assert_eq!(code(&delta), 0);
    assert_eq!(json_stdout(&delta)["delta"], 0.0);

    let el = ctlab(&["coarse", "electrocute", "--graph", path.to_str().unwrap()]);
    assert_eq!(code(&el), 0);
    assert_eq!(json_stdout(&el)["distances"][0][4], 3.0);

    let track = ctlab(&["coarse", "track", "--graph", tree.to_str().unwrap()]);
    assert_eq!(code(&track), 0);
    let r = json_stdout(&track);
    assert_eq!(r["subsets"], 0);
    assert_eq!(r["tracking_constant"], 0.0);
    assert_eq!(r["pairs"], 105);
}

#[test]
fn sampled_delta_needs_a_seed() {
    let g = fixture("graphs/cycle12.graph");
    let out = ctlab(&["coarse", "delta", "--graph", g.to_str().unwrap(), "--samples", "10"]);
    assert_eq!(code(&out), EXIT_INPUT);
    let out = ctlab(&[
        "coarse", "delta", "--graph", g.to_str().unwrap(), "--samples", "200", "--seed", "4",
    ]);
    assert_eq!(code(&out), 0);
    let r = json_stdout(&out);
    assert_eq!(r["exhaustive"], false);
    assert!(r["delta"].as_f64().unwrap() <= 3.0);
}

#[test]
fn malformed_graph_reports_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.graph");
    std::fs::write(&bad, "3 2\n0 1 1\n1 7 1\n").unwrap();
    let out = ctlab(&["coarse", "delta", "--graph", bad.to_str().unwrap()]);
    assert_eq!(code(&out), EXIT_INPUT);
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 3"), "{err}");
}

#[test]
fn identity_ladder_audit_is_tree_exact() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("audit");
    let spec = fixture("identity_r3.spec");
    let out = ctlab(&[
        "ladder-audit",
        "--spec",
        spec.to_str().unwrap(),
        "--seed",
        "1",
        "--exhaustive",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let read = |name: &str| -> Value {
        serde_json::from_str(&std::fs::read_to_string(out_dir.join(name)).unwrap()).unwrap()
    };
    assert_eq!(read("summary.json")["pass"], true);
    assert!(read("lipschitz.json")["constants"]["C"].as_f64().unwrap() <= 1.0 + 1e-9);
    assert!(read("coarse_separation.json")["constants"]["C1"].as_f64().unwrap() <= 1.0);
    assert_eq!(std::fs::read_dir(&out_dir).unwrap().count(), 8);
}

#[test]
fn monodromy_ladder_audit_reports_finite_constants() {
    let out = ctlab(&[
        "ladder-audit",
        "--spec",
        fixture("monodromy_r5.spec").to_str().unwrap(),
        "--seed",
        "2",
        "--samples",
        "200",
    ]);
    assert!(matches!(code(&out), 0 | 1));
    let r = json_stdout(&out);
    let reports = r["reports"].as_array().unwrap();
    assert_eq!(reports.len(), 7);
    for report in reports {
        for (k, v) in report["constants"].as_object().unwrap() {
            let nums: Vec<f64> = match v {
                Value::Array(a) => a.iter().filter_map(Value::as_f64).collect(),
                other => other.as_f64().into_iter().collect(),
            };
            assert!(nums.iter().all(|x| x.is_finite()), "{k} = {v}");
        }
    }
}

#[test]
fn infeasible_spec_fails_before_auditing() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("bad.spec");
    std::fs::write(&spec, "blocks=2\nradius=3\nkinds=split\ncomponents=0\n").unwrap();
    let out_dir = dir.path().join("audit");
    let out = ctlab(&[
        "ladder-audit",
        "--spec",
        spec.to_str().unwrap(),
        "--seed",
        "1",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), EXIT_INPUT);
    assert!(!out_dir.exists());
    assert!(out.stdout.is_empty());
}

#[test]
fn lam_poles_depth_zero_has_only_singletons() {
    let out = ctlab(&["lam-poles", "--depth", "0", "--leaves", "5", "--seed", "1"]);
    assert_eq!(code(&out), EXIT_FAIL);
    let r = json_stdout(&out);
    let classes = r["partition"]["classes"].as_array().unwrap();
    assert_eq!(classes.len(), 5);
    assert!(classes.iter().all(|c| c["pole"].is_null()));
    assert_eq!(r["message"], "not found at depth 0");
}

#[test]
fn lam_poles_finds_a_witness() {
    let out = ctlab(&["lam-poles", "--depth", "6", "--seed", "1"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json_stdout(&out)["pole_found"], true);
}

#[test]
fn input_errors_exit_with_code_two() {
    assert_eq!(code(&ctlab(&["ct-draw", "--samples", "3"])), EXIT_INPUT);
    assert_eq!(
        code(&ctlab(&["lam-poles", "--monodromy", "1,1,0,1", "--seed", "1"])),
        EXIT_INPUT
    );
    assert_eq!(
        code(&ctlab(&["coarse", "delta", "--graph", "/nonexistent/graph"])),
        EXIT_INPUT
    );
    assert_eq!(
        code(&ctlab(&["verify-leaves", "--depth", "5", "--baseline-depth", "9", "--seed", "1"])),
        EXIT_INPUT
    );
}

#[test]
fn solver_failures_map_to_the_numerical_exit_code() {
    let e = CliError::from(KleinianError::NoConvergence { residual: 1.0 });
    assert_eq!(e.exit_code(), EXIT_NUMERICAL);
}

#[test]
fn negative_trace_monodromy_is_accepted() {
    let out = ctlab(&["lam-poles", "--monodromy", "-2,-1,-1,-1", "--depth", "2", "--seed", "1"]);
    assert!(matches!(code(&out), 0 | 1), "{}", String::from_utf8_lossy(&out.stderr));
}
