use lifting::cli::{
    reproduce_figure, run_scenario, CliError, FigureId, RunOptions, Scenario, EXIT_CONFIG, EXIT_NUMERIC, EXIT_OK,
    EXIT_THRESHOLD, FIGURE_IDS,
};
use std::path::{Path, PathBuf};
use std::process::Command;

fn repo() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn scenario(text: &str) -> Scenario {
    Scenario::from_toml(text, "test").unwrap()
}

const FIG2: &str = r#"
name = "fig2"
models = ["linear_exact"]
[shape]
kind = "power_rise"
n = 1
tau_end = 1.0
[params]
t0_omega0 = 100.0
t0_delta0 = 5.0
[sweep]
parameter = "tau"
from = 0.0
to = 1.0
points = 21
"#;

const DETUNING: &str = r#"
name = "detuning"
models = ["universal", "large_detuning"]
[shape]
kind = "power_rise"
n = 2
tau_end = 3.0
[params]
t0_omega0 = 100.0
t0_delta0 = 0.0
[sweep]
parameter = "t0_delta0"
from = 0.0
to = 20.0
points = 21
"#;

#[test]
fn fig2_scenario_converges_at_the_end_of_the_rise() {
    let r = run_scenario(&scenario(FIG2), &RunOptions::default()).unwrap();
    assert_eq!(r.rows.len(), 21);
    assert_eq!(r.frame, "adiabatic");
    let last = &r.rows[20];
    assert!(!last.failed);
    assert!(last.models[0].abs_error < 1e-4, "{}", last.models[0].abs_error);
    assert!(last.models[0].phase_error < 1e-3, "{}", last.models[0].phase_error);
    // starts in |->
    assert!(r.rows[0].oracle.p_plus < 1e-20);
}

#[test]
fn fig4_scenario_has_the_same_structure() {
    let text = r#"
name = "fig4"
models = ["exponential_exact"]
[shape]
kind = "exponential_rise"
tau_end = 2.302585092994046
[params]
t0_omega0 = 100.0
t0_delta0 = 0.4
[sweep]
parameter = "tau"
from = -5.0
to = 2.302585092994046
points = 11
"#;
    let r = run_scenario(&scenario(text), &RunOptions::default()).unwrap();
    assert_eq!(r.rows.len(), 11);
    let last = r.rows.last().unwrap();
    assert!(last.models[0].abs_error < 1e-3, "{}", last.models[0].abs_error);
}

#[test]
fn two_point_sweep_gives_two_rows() {
    let text = DETUNING.replace("points = 21", "points = 2");
    let r = run_scenario(&scenario(&text), &RunOptions::default()).unwrap();
    assert_eq!(r.rows.len(), 2);
    assert_eq!(r.rows[1].value, 20.0);
}

#[test]
fn max_abs_error_is_the_row_maximum() {
    let r = run_scenario(&scenario(DETUNING), &RunOptions::default()).unwrap();
    for (k, m) in r.summary.iter().enumerate() {
        let rows: Vec<f64> =
            r.rows.iter().map(|row| &row.models[k]).filter(|x| x.error.is_none()).map(|x| x.abs_error).collect();
        assert_eq!(rows.len(), m.evaluated_rows);
        assert_eq!(m.max_abs_error, rows.iter().cloned().fold(f64::NAN, f64::max));
    }
    // large-detuning theory refuses small alpha_n instead of aborting the sweep
    let large = &r.summary[1];
    assert!(large.evaluated_rows < r.rows.len());
    assert!(r.rows[0].models[1].error.is_some());
}

#[test]
fn reports_are_identical_across_worker_counts() {
    let s = scenario(DETUNING);
    let a = run_scenario(&s, &RunOptions { workers: 1, ..Default::default() }).unwrap();
    let b = run_scenario(&s, &RunOptions { workers: 5, ..Default::default() }).unwrap();
    assert_eq!(a.rows_csv(), b.rows_csv());
    assert_eq!(a.to_json(), b.to_json());
}

#[test]
fn config_errors_name_the_field() {
    let cases = [
        (DETUNING.replace("points = 21", "points = 1"), "sweep.points"),
        (DETUNING.replace(r#"models = ["universal", "large_detuning"]"#, "models = []"), "models"),
        (DETUNING.replace(r#"models = ["universal", "large_detuning"]"#, r#"models = ["trig"]"#), "models"),
        (DETUNING.replace("n = 2", "n = 2\ncolour = 1"), "colour"),
        (DETUNING.replace("parameter = \"t0_delta0\"", "parameter = \"chirp\""), "chirp"),
        (DETUNING.replace("tau_end = 3.0", ""), "tau_end"),
    ];
    for (text, field) in cases {
        match Scenario::from_toml(&text, "cfg.toml") {
            Err(e @ CliError::Config { .. }) => {
                assert_eq!(e.exit_code(), EXIT_CONFIG);
                assert!(e.to_string().contains(field), "{e}");
            }
            other => panic!("expected a config error for {field}, got {other:?}"),
        }
    }
    // parse errors carry the line
    let e = Scenario::from_toml("name = \"x\"\nmodels = [\n", "cfg.toml").unwrap_err();
    assert!(e.to_string().contains("line"), "{e}");
}

#[test]
fn tau_sweep_must_stay_on_the_support() {
    let text = FIG2.replace("to = 1.0", "to = 2.0");
    assert!(Scenario::from_toml(&text, "cfg").is_err());
}

/// `{x}` in a documented name matches any non-empty text.
fn matches(pattern: &str, name: &str) -> bool {
    match pattern.find('{') {
        None => pattern == name,
        Some(i) => {
            let close = pattern[i..].find('}').map(|j| i + j).expect("unclosed placeholder");
            let (head, rest) = (&pattern[..i], &pattern[close + 1..]);
            name.starts_with(head)
                && (head.len() + 1..=name.len()).any(|k| matches(rest, &name[k..]))
        }
    }
}

/// (file, columns) pairs from the tables of docs/schemas.md.
fn documented() -> Vec<(String, String)> {
    let text = std::fs::read_to_string(repo().join("docs/schemas.md")).unwrap();
    text.lines()
        .filter(|l| l.starts_with("| `"))
        .filter_map(|l| {
            let ticks: Vec<&str> = l.split('`').collect();
            (ticks.len() >= 5).then(|| (ticks[1].to_string(), ticks[3].to_string()))
        })
        .collect()
}

#[test]
fn figure_headers_match_the_documented_schema() {
    let docs = documented();
    let opts = RunOptions::default();
    for id in FIGURE_IDS {
        let tables = reproduce_figure(id, &opts).unwrap();
        assert!(!tables.is_empty());
        for t in tables {
            let file = format!("{}.csv", t.name);
            let header = t.columns.join(",");
            assert!(
                docs.iter().any(|(f, c)| matches(f, &file) && *c == header),
                "{file} with header {header} is not documented"
            );
            let csv = t.to_csv();
            assert_eq!(csv.lines().next().unwrap(), header);
            assert_eq!(csv.lines().count(), t.rows.len() + 1);
            let json: serde_json::Value = serde_json::from_str(&t.to_json()).unwrap();
            assert_eq!(json["columns"].as_array().unwrap().len(), t.columns.len());
            assert_eq!(json["rows"].as_array().unwrap().len(), t.rows.len());
        }
    }
}

#[test]
fn report_headers_match_the_documented_schema() {
    let docs = documented();
    let r = run_scenario(&scenario(DETUNING), &RunOptions::default()).unwrap();
    let rows = &docs.iter().find(|(f, _)| f == "<stem>.csv").unwrap().1;
    let (head, rest) = rows.split_at(rows.find("{model}").unwrap());
    let (block, tail) = rest.split_at(rest.rfind("{model}_phase_err,").unwrap() + "{model}_phase_err,".len());
    let mut expect = head.replace("{parameter}", "t0_delta0");
    for m in ["universal", "large_detuning"] {
        expect += &block.replace("{model}", m);
    }
    expect += tail;
    assert_eq!(r.rows_csv().lines().next().unwrap(), expect);
    let summary = &docs.iter().find(|(f, _)| f == "<stem>_summary.csv").unwrap().1;
    assert_eq!(r.summary_csv().lines().next().unwrap(), summary);

    let json: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
    let mut keys: Vec<&str> = json.as_object().unwrap().keys().map(|k| k.as_str()).collect();
    keys.sort();
    let mut want = vec![
        "scenario", "frame", "sweep_parameter", "tol", "rows", "summary", "regime_flags", "threshold",
        "threshold_breached",
    ];
    want.sort();
    assert_eq!(keys, want);
    let row = &json["rows"][0];
    for k in ["index", "value", "failed", "message", "oracle", "models"] {
        assert!(row.get(k).is_some(), "row key {k}");
    }
    for k in ["model", "values", "abs_error", "rel_error", "phase_error", "flag", "error"] {
        assert!(row["models"][0].get(k).is_some(), "model key {k}");
    }
}

#[test]
fn fig3_and_fig7_columns() {
    let opts = RunOptions::default();
    let t = &reproduce_figure(FigureId::Fig3, &opts).unwrap()[0];
    assert_eq!(t.columns, ["omega", "p_plus", "chi_minus", "chi_plus"]);
    let w = t.column("omega").unwrap();
    assert_eq!((w[0], *w.last().unwrap()), (0.0, 3.0));
    let t = &reproduce_figure(FigureId::Fig7, &opts).unwrap()[0];
    assert_eq!(t.columns, ["x", "G"]);
}

fn lifting_bin(out: &Path, args: &[&str]) -> (i32, String) {
    let o = Command::new(env!("CARGO_BIN_EXE_lifting"))
        .env("LIFTING_OUT_DIR", out)
        .args(args)
        .output()
        .unwrap();
    (o.status.code().unwrap(), String::from_utf8_lossy(&o.stdout).into_owned())
}

fn temp_dir(tag: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("lifting-cli-{tag}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&d);
    std::fs::create_dir_all(&d).unwrap();
    d
}

#[test]
fn binary_exit_codes() {
    let dir = temp_dir("exit");
    let write = |name: &str, text: &str| {
        let p = dir.join(name);
        std::fs::write(&p, text).unwrap();
        p.display().to_string()
    };
    let ok = write("ok.toml", DETUNING);
    let (code, stdout) = lifting_bin(&dir.join("out"), &["run", &ok]);
    assert_eq!(code, EXIT_OK);
    // the output directory comes from the environment
    assert!(dir.join("out/detuning.csv").exists(), "{stdout}");
    assert!(dir.join("out/detuning_summary.csv").exists());

    let strict = write("strict.toml", &format!("threshold = 1e-9\n{DETUNING}"));
    assert_eq!(lifting_bin(&dir.join("out"), &["run", &strict]).0, EXIT_THRESHOLD);

    let bad = write("bad.toml", &DETUNING.replace("points = 21", "points = 1"));
    assert_eq!(lifting_bin(&dir.join("out"), &["run", &bad]).0, EXIT_CONFIG);
    assert_eq!(lifting_bin(&dir.join("out"), &["run", "/nonexistent.toml"]).0, EXIT_CONFIG);
    assert_eq!(lifting_bin(&dir.join("out"), &["figure", "fig99"]).0, EXIT_CONFIG);
    assert_eq!(lifting_bin(&dir.join("out"), &["--tol", "1", "figure", "fig3"]).0, EXIT_CONFIG);
    assert_eq!(lifting_bin(&dir.join("out"), &["frobnicate"]).0, EXIT_CONFIG);

    // T0*Omega0 = 0 cannot be propagated: that row fails, the other is reported
    let zero = write(
        "zero.toml",
        &DETUNING.replace("parameter = \"t0_delta0\"", "parameter = \"t0_omega0\"").replace("points = 21", "points = 2"),
    );
    let (code, _) = lifting_bin(&dir.join("num"), &["--format", "json", "run", &zero]);
    assert_eq!(code, EXIT_NUMERIC);
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("num/detuning.json")).unwrap()).unwrap();
    assert_eq!(json["rows"][0]["failed"], true);
    assert_eq!(json["rows"][1]["failed"], false);
}

#[test]
fn binary_sweep_overrides_and_reruns_are_byte_identical() {
    let dir = temp_dir("sweep");
    let cfg = dir.join("single.toml");
    let single = DETUNING.split("[sweep]").next().unwrap().to_string();
    std::fs::write(&cfg, single).unwrap();
    let cfg = cfg.display().to_string();
    // no sweep table and no flags
    assert_eq!(lifting_bin(&dir.join("a"), &["sweep", &cfg]).0, EXIT_CONFIG);
    let args = ["sweep", &cfg, "--parameter", "t0_delta0", "--from", "1", "--to", "4", "--points", "4"];
    assert_eq!(lifting_bin(&dir.join("a"), &args).0, EXIT_OK);
    let mut w1 = args.to_vec();
    w1.extend(["--workers", "1"]);
    assert_eq!(lifting_bin(&dir.join("b"), &w1).0, EXIT_OK);
    let a = std::fs::read(dir.join("a/detuning.csv")).unwrap();
    let b = std::fs::read(dir.join("b/detuning.csv")).unwrap();
    assert_eq!(a, b);
    assert_eq!(String::from_utf8(a).unwrap().lines().count(), 5);
}

#[test]
fn binary_writes_figures_under_out_dir_flag() {
    let dir = temp_dir("fig");
    let out = dir.join("flag");
    let o = Command::new(env!("CARGO_BIN_EXE_lifting"))
        .env("LIFTING_OUT_DIR", dir.join("env"))
        .args(["--out-dir", out.to_str().unwrap(), "--format", "json", "figure", "fig3"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(EXIT_OK));
    assert!(out.join("fig3.json").exists());
    assert!(!dir.join("env").exists());
}

#[test]
fn shipped_scenarios_parse() {
    let dir = repo().join("scenarios");
    let mut n = 0;
    for e in std::fs::read_dir(dir).unwrap() {
        let p = e.unwrap().path();
        if p.extension().is_some_and(|x| x == "toml") {
            Scenario::from_path(&p).unwrap();
            n += 1;
        }
    }
    assert!(n >= 4);
}
