use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn examples() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/examples")
}

fn icdms(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_icdms"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn rows(path: &Path) -> Vec<(f64, f64, String)> {
    let mut r = csv::Reader::from_path(path).unwrap();
    assert_eq!(
        r.headers().unwrap().iter().collect::<Vec<_>>(),
        ["r1_bits", "r2_bits", "region"]
    );
    r.records()
        .map(|rec| {
            let rec = rec.unwrap();
            (
                rec[0].parse().unwrap(),
                rec[1].parse().unwrap(),
                rec[2].to_string(),
            )
        })
        .collect()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn out_arg(dir: &TempDir) -> String {
    dir.path().to_str().unwrap().to_string()
}

#[test]
fn fig4_region_corner_and_metadata() {
    let dir = TempDir::new().unwrap();
    let o = icdms(&[
        "--out",
        &out_arg(&dir),
        "region",
        "--preset",
        "fig4",
        "--region",
        "g_sp1",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let rows = rows(&dir.path().join("frontier.csv"));
    let top = &rows[0];
    assert_eq!(top.0, 0.0);
    assert!(rows.iter().all(|r| r.1 <= top.1));
    assert!((top.1 - 1.4037).abs() < 1e-4);
    let last = rows.last().unwrap();
    assert!((last.0 - 1.9711).abs() < 1e-4 && last.1 == 0.0);

    let meta: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("frontier.meta.json")).unwrap())
            .unwrap();
    assert_eq!(meta["channel"]["c21"], 0.3);
    assert_eq!(meta["channel"]["c12"], 0.0);
    assert_eq!(meta["grids"]["g_sp1"]["alpha"]["steps"], 201);
    assert_eq!(meta["convex_hull"], false);
    assert_eq!(meta["version"], env!("CARGO_PKG_VERSION"));
}

#[test]
fn collapsed_alpha_gives_a_single_corner() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        &dir,
        "c.json",
        r#"{"preset": "fig4", "regions": ["g_sp1"], "grid": {"alpha": {"lo": 0, "hi": 0, "steps": 1}}}"#,
    );
    let o = icdms(&[
        "--out",
        &out_arg(&dir),
        "region",
        "--config",
        cfg.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let rows = rows(&dir.path().join("frontier.csv"));
    assert!(rows.len() > 10);
    assert!(rows.iter().all(|r| r.1 == 0.0));
}

#[test]
fn three_regions_in_one_csv_and_deterministic() {
    let a = TempDir::new().unwrap();
    let b = TempDir::new().unwrap();
    for d in [&a, &b] {
        let o = icdms(&[
            "--out",
            &out_arg(d),
            "--grid-steps",
            "9",
            "region",
            "--preset",
            "fig6",
        ]);
        assert!(o.status.success(), "{}", stderr(&o));
    }
    let csv_a = fs::read(a.path().join("frontier.csv")).unwrap();
    assert_eq!(csv_a, fs::read(b.path().join("frontier.csv")).unwrap());
    let labels: std::collections::BTreeSet<String> = rows(&a.path().join("frontier.csv"))
        .into_iter()
        .map(|r| r.2)
        .collect();
    assert_eq!(
        labels.into_iter().collect::<Vec<_>>(),
        ["g", "g_sp1", "g_sp2"]
    );

    // The sidecar's config reproduces the run.
    let meta: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(a.path().join("frontier.meta.json")).unwrap())
            .unwrap();
    let c = TempDir::new().unwrap();
    let mut cfg = meta["config"].clone();
    cfg["output"]["dir"] = serde_json::Value::String(out_arg(&c));
    let cfg_path = write(&c, "rerun.json", &cfg.to_string());
    let o = icdms(&["region", "--config", cfg_path.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(csv_a, fs::read(c.path().join("frontier.csv")).unwrap());
}

#[test]
fn convex_hull_flag_removes_dents() {
    let dir = TempDir::new().unwrap();
    let o = icdms(&[
        "--out",
        &out_arg(&dir),
        "--convex-hull",
        "region",
        "--preset",
        "fig7",
        "--region",
        "g_sp1",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let r: Vec<f64> = rows(&dir.path().join("frontier.csv"))
        .into_iter()
        .map(|r| r.1)
        .collect();
    // sampled points only, so allow a little slack for the merged corners
    for w in r.windows(3) {
        assert!(w[1] + 1e-9 >= w[0].min(w[2]));
    }
}

#[test]
fn config_errors_exit_2_with_line() {
    let dir = TempDir::new().unwrap();
    let bad_key = write(
        &dir,
        "a.json",
        "{\n  \"preset\": \"fig4\",\n  \"grid\": {\"alfa\": 3}\n}\n",
    );
    let o = icdms(&[
        "--out",
        &out_arg(&dir),
        "region",
        "--config",
        bad_key.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("a.json:3:"), "{}", stderr(&o));

    let bad_value = write(
        &dir,
        "b.json",
        "{\n  \"channel\": {\"p1\": 6, \"p2\": 6, \"c12\": 0.3, \"c21\": 2},\n  \"regions\": [\"g_sp1\"],\n  \"r1_step\": -1\n}\n",
    );
    let o = icdms(&[
        "--out",
        &out_arg(&dir),
        "region",
        "--config",
        bad_value.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("b.json:4:"), "{}", stderr(&o));

    let syntax = write(
        &dir,
        "c.json",
        "{\n  \"preset\": \"fig4\"\n  \"regions\": []\n}\n",
    );
    let o = icdms(&["region", "--config", syntax.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("c.json:3:"), "{}", stderr(&o));
}

#[test]
fn empty_union_exits_3() {
    let dir = TempDir::new().unwrap();
    // U carries no power (beta = 0) but must carry W: every tuple is degenerate.
    let cfg = write(
        &dir,
        "e.json",
        r#"{
  "preset": "fig6",
  "regions": ["g"],
  "grid": {
    "alpha": {"lo": 0.5, "hi": 1, "steps": 3},
    "beta": {"lo": 0, "hi": 0, "steps": 1},
    "lambda1": {"fixed": {"lo": 1, "hi": 2, "steps": 2}},
    "lambda2": {"fixed": {"lo": 0, "hi": 1, "steps": 2}},
    "dpc_anchors": false,
    "corollary_alpha_steps": 0
  }
}"#,
    );
    let o = icdms(&[
        "--out",
        &out_arg(&dir),
        "region",
        "--config",
        cfg.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
}

#[test]
fn discrete_unit_square() {
    let f = examples().join("noiseless_full.json");
    let o = icdms(&["discrete", f.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let s = stdout(&o);
    assert!(s.contains("r1_bound   1.00000000000"), "{s}");
    assert!(s.contains("r2_bound   1.00000000000"), "{s}");
    assert!(s.contains("sum_bound  2.00000000000"), "{s}");
    assert!(s.contains("feasible   true"));
}

#[test]
fn discrete_constant_outputs() {
    let f = examples().join("constant_outputs.json");
    let s = stdout(&icdms(&["discrete", f.to_str().unwrap()]));
    assert!(
        s.contains("r1_bound   0\n")
            && s.contains("r2_bound   0\n")
            && s.contains("sum_bound  0\n"),
        "{s}"
    );
}

#[test]
fn paper_literal_switches_the_active_reading() {
    let f = examples().join("star_bsc.json");
    let default = stdout(&icdms(&["discrete", f.to_str().unwrap()]));
    let literal = stdout(&icdms(&[
        "--paper-literal",
        "discrete",
        f.to_str().unwrap(),
    ]));
    let line = |s: &str, key: &str| s.lines().find(|l| l.contains(key)).unwrap().to_string();
    assert!(line(&default, "I(V;Y2|UQ)").ends_with("active"));
    assert!(line(&default, "I(V;Y1|UQ)").ends_with("reported"));
    assert!(line(&literal, "I(V;Y2|UQ)").ends_with("reported"));
    assert!(line(&literal, "I(V;Y1|UQ)").ends_with("active"));
    // the Y1 reading is violated by this distribution
    assert!(default.contains("feasible   true"));
    assert!(literal.contains("feasible   false"));
}

#[test]
fn discrete_report_json() {
    let dir = TempDir::new().unwrap();
    let f = examples().join("star_bsc.json");
    let o = icdms(&[
        "--out",
        &out_arg(&dir),
        "discrete",
        "--theorem",
        "3",
        f.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("discrete.json")).unwrap())
            .unwrap();
    assert_eq!(v["theorem"], 3);
    assert!(v["region"]["sum_bound"].is_null());
    assert_eq!(v["region"]["constraints"].as_array().unwrap().len(), 2);

    let o = icdms(&["discrete", "--theorem", "1", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn unnormalized_factor_names_factor_and_slice() {
    let dir = TempDir::new().unwrap();
    let src = fs::read_to_string(examples().join("noiseless_full.json")).unwrap();
    // last slice of p(x2|u_tilde,v_tilde,w,q): (1,1,1,0)
    let at = src.rfind("[[0.0, 1.0]]]]]").unwrap();
    let broken = format!("{}[[0.9, 0.0]]]]]{}", &src[..at], &src[at + 15..]);
    assert_ne!(src, broken, "fixture layout changed");
    let p = write(&dir, "bad.json", &broken);
    let o = icdms(&["discrete", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let e = stderr(&o);
    assert!(e.contains("p(x2|u_tilde,v_tilde,w,q)"), "{e}");
    assert!(e.contains("(u_tilde=1,v_tilde=1,w=1,q=0)"), "{e}");
    assert!(e.contains("bad.json:"), "{e}");
}

#[test]
fn fig5_passes_through_the_half_power_corner() {
    let dir = TempDir::new().unwrap();
    let o = icdms(&["--out", &out_arg(&dir), "figure", "fig5"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let rows = rows(&dir.path().join("fig5.csv"));
    assert!(rows
        .iter()
        .any(|r| (r.0 - 0.3390).abs() < 5e-5 && r.1 == 1.0));
    let svg = fs::read_to_string(dir.path().join("fig5.svg")).unwrap();
    assert!(svg.contains("width=\"800\" height=\"600\""));
    assert!(svg.contains("g_sp1"));
    assert!(dir.path().join("fig5.meta.json").exists());
}

fn gap_over_sp1(summary: &str) -> f64 {
    let line = summary
        .lines()
        .find(|l| l.starts_with("inclusion_gap(g_sp1, g)"))
        .expect("gap line");
    let inside: f64 = line
        .split(" = ")
        .nth(1)
        .unwrap()
        .split(',')
        .next()
        .unwrap()
        .parse()
        .unwrap();
    assert!(inside <= 1e-9, "{line}");
    line.rsplit(" = ").next().unwrap().trim().parse().unwrap()
}

#[test]
fn fig7_gap_exceeds_fig6_gap() {
    let dir = TempDir::new().unwrap();
    let o6 = icdms(&["--out", &out_arg(&dir), "figure", "fig6"]);
    let o7 = icdms(&["--out", &out_arg(&dir), "figure", "fig7"]);
    assert!(o6.status.success() && o7.status.success());
    assert!(gap_over_sp1(&stdout(&o7)) > gap_over_sp1(&stdout(&o6)));
}

#[test]
fn dpc_lambda_report() {
    let o = icdms(&[
        "dpc-lambda",
        "--p1",
        "6",
        "--p2",
        "6",
        "--c12",
        "0.3",
        "--c21",
        "0.3",
        "--alpha",
        "1",
        "--beta",
        "0",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let lambda = v["lambda_star"].as_f64().unwrap();
    assert!(lambda > 0.0);
    assert!((v["grid_argmax"].as_f64().unwrap() - lambda).abs() < 2e-3);
    assert!((v["grid_max_bits"].as_f64().unwrap() - v["gain_bits"].as_f64().unwrap()).abs() < 1e-6);

    let o = icdms(&["dpc-lambda", "--alpha", "0.5", "--beta", "0.5"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn oracle_check_small_run() {
    let o = icdms(&[
        "--seed",
        "3",
        "oracle-check",
        "--draws",
        "2",
        "--samples",
        "50000",
        "--discrete-draws",
        "4",
    ]);
    assert!(o.status.success(), "{}{}", stdout(&o), stderr(&o));
    assert!(stdout(&o).contains("all oracle comparisons passed"));
}

#[test]
fn bad_flags_exit_2() {
    assert_eq!(
        icdms(&["--grid-steps", "0", "figure", "fig4"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(icdms(&["figure", "fig9"]).status.code(), Some(2));
    assert_eq!(
        icdms(&["region", "--region", "g_sp9"]).status.code(),
        Some(2)
    );
}
