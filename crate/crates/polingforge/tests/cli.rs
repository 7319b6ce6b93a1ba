//! End-to-end tests through the `polingforge` binary: spec handling,
//! emitted artifacts, determinism, and the design → evaluate round trip.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use polingforge::files;
use polingforge::pipeline::Metrics;
use polingforge::runspec::{CommandKind, CrystalBlock, FileInit, InitialBlock, RunSpec};

const PI: f64 = core::f64::consts::PI;
const TWO_PI: f64 = core::f64::consts::TAU;

/// Small design run: finishes in well under a second.
const SMALL_DESIGN: &str = r#"{
  "command": "design",
  "crystal": { "n_domains": 64, "l_c_um": 23.0, "initial": "random" },
  "target": {
    "shape": "gaussian",
    "range": [133176.2103152195, 140005.7595621538],
    "width": 800.0,
    "samples": 401
  },
  "anneal": { "iterations": 3000, "seed": 99, "restarts": 1 }
}"#;

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_polingforge"))
}

fn run(command: &str, spec: &Path, out: &Path, extra: &[&str]) -> Output {
    binary()
        .arg(command)
        .arg("--spec")
        .arg(spec)
        .arg("--out")
        .arg(out)
        .args(extra)
        .output()
        .expect("the binary should launch")
}

fn run_ok(command: &str, spec: &Path, out: &Path, extra: &[&str]) -> Output {
    let output = run(command, spec, out, extra);
    assert!(
        output.status.success(),
        "{command} failed:\n{}",
        String::from_utf8_lossy(&output.stderr)
    );
    output
}

fn write_spec(dir: &Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn read_metrics(out: &Path) -> Metrics {
    let text = std::fs::read_to_string(out.join("metrics.json")).unwrap();
    serde_json::from_str(&text).unwrap()
}

fn preset(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../presets")
        .join(name)
}

#[test]
fn design_then_evaluate_reproduces_the_best_cost() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(dir.path(), "design.json", SMALL_DESIGN);
    run_ok("design", &spec, dir.path(), &[]);
    let metrics = read_metrics(dir.path());
    let best_cost = metrics.anneal.as_ref().unwrap().best_cost;

    // feed the emitted poling file back through evaluate with the resolved
    // target echoed by the design run
    let mut eval_spec = RunSpec::new(CommandKind::Evaluate);
    eval_spec.crystal = Some(CrystalBlock {
        n_domains: None,
        l_c_um: None,
        lambda_um: None,
        initial: Some(InitialBlock::File(FileInit {
            file: "poling.txt".to_owned(),
        })),
    });
    eval_spec.target = metrics.spec.target.clone();
    let eval_path = write_spec(
        dir.path(),
        "evaluate.json",
        &serde_json::to_string_pretty(&eval_spec).unwrap(),
    );
    let out2 = dir.path().join("eval");
    run_ok("evaluate", &eval_path, &out2, &[]);
    let cost = read_metrics(&out2).evaluate.unwrap().cost;
    assert!(
        (cost - best_cost).abs() <= 1e-9 * best_cost,
        "round trip drifted: design {best_cost}, evaluate {cost}"
    );
}

#[test]
fn same_spec_and_seed_give_byte_identical_poling_files() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(dir.path(), "design.json", SMALL_DESIGN);
    let (out1, out2) = (dir.path().join("a"), dir.path().join("b"));
    run_ok("design", &spec, &out1, &[]);
    run_ok("design", &spec, &out2, &[]);
    let poling1 = std::fs::read(out1.join("poling.txt")).unwrap();
    let poling2 = std::fs::read(out2.join("poling.txt")).unwrap();
    assert_eq!(poling1, poling2);
    let best1 = read_metrics(&out1).anneal.unwrap().best_cost;
    let best2 = read_metrics(&out2).anneal.unwrap().best_cost;
    assert_eq!(best1.to_bits(), best2.to_bits());
}

#[test]
fn single_restart_runs_stream_progress_lines() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(dir.path(), "design.json", SMALL_DESIGN);
    let output = run_ok("design", &spec, dir.path(), &[]);
    let stderr = String::from_utf8(output.stderr).unwrap();
    let lines: Vec<&str> = stderr.lines().filter(|l| l.starts_with("iter=")).collect();
    // trace interval defaults to J/1000, so a J=3000 run reports 1000 times
    assert_eq!(lines.len(), 1000);
    assert!(lines[0].starts_with("iter=3 cost="));
    assert!(lines.last().unwrap().starts_with("iter=3000 "));
    assert!(lines.last().unwrap().ends_with(" h=0"));
}

#[test]
fn multi_restart_runs_stay_quiet_on_stderr() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(
        dir.path(),
        "design.json",
        &SMALL_DESIGN.replace("\"restarts\": 1", "\"restarts\": 2"),
    );
    let output = run_ok("design", &spec, dir.path(), &[]);
    let stderr = String::from_utf8(output.stderr).unwrap();
    assert!(
        !stderr.contains("iter="),
        "unexpected progress lines:\n{stderr}"
    );
}

#[test]
fn evaluate_on_the_periodic_740_crystal_matches_the_locked_cost() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(
        dir.path(),
        "evaluate.json",
        r#"{
          "command": "evaluate",
          "crystal": { "n_domains": 740, "l_c_um": 23.0, "initial": "periodic" },
          "target": {
            "shape": "gaussian",
            "dk_peak": 136590.98493868666,
            "range": [133176.2103152195, 140005.7595621538],
            "width": 188.54196670612808,
            "height": 0.007613972477516273,
            "samples": 2001
          }
        }"#,
    );
    run_ok("evaluate", &spec, dir.path(), &[]);
    let cost = read_metrics(dir.path()).evaluate.unwrap().cost;
    // same value the core cost regression locks
    assert_eq!(cost.to_bits(), 1.428_910_858_705_410_2_f64.to_bits());
}

#[test]
fn presets_spell_the_published_parameters() {
    let lambda = 46e-6;
    let read = |name: &str| -> RunSpec {
        let text = std::fs::read_to_string(preset(name)).unwrap();
        let mut spec: RunSpec = serde_json::from_str(&text).unwrap();
        spec.validate().unwrap();
        spec
    };

    let fig2a = read("fig2a.spec");
    assert_eq!(fig2a.command, CommandKind::Jsa);
    let crystal = fig2a.crystal.as_ref().unwrap();
    assert_eq!(crystal.n_domains, Some(740));
    assert_eq!(crystal.l_c_um, Some(23.0));

    let fig2c = read("fig2c.spec");
    assert_eq!(fig2c.command, CommandKind::Design);
    let crystal = fig2c.crystal.as_ref().unwrap();
    assert_eq!(crystal.n_domains, Some(1300));
    let target = fig2c.target.as_ref().unwrap();
    assert_eq!(target.samples, 2001);
    assert_eq!(
        target.height.unwrap().to_bits(),
        (0.8 * 1300.0 * 23e-6 / PI).to_bits()
    );
    assert_eq!(target.dk_peak.unwrap().to_bits(), (TWO_PI / lambda).to_bits());
    let [lo, hi] = target.range.unwrap();
    assert_eq!(lo.to_bits(), (TWO_PI * 0.975 / lambda).to_bits());
    assert_eq!(hi.to_bits(), (TWO_PI * 1.025 / lambda).to_bits());
    let anneal = fig2c.anneal.as_ref().unwrap();
    assert_eq!(
        (anneal.iterations, anneal.q, anneal.a, anneal.restarts),
        (200_000, 0.999, 1000.0, 5)
    );
    assert_eq!(fig2c.jsa.unwrap().grid, 512);

    let fig3a = read("fig3a.spec");
    let target = fig3a.target.as_ref().unwrap();
    assert_eq!(target.shape, "triangle");
    assert_eq!(
        target.height.unwrap().to_bits(),
        (0.4 * 3500.0 * 23e-6 / PI).to_bits()
    );
    let [lo, hi] = target.range.unwrap();
    assert_eq!(lo.to_bits(), (TWO_PI * 0.995 / lambda).to_bits());
    assert_eq!(hi.to_bits(), (TWO_PI * 1.005 / lambda).to_bits());
    let anneal = fig3a.anneal.as_ref().unwrap();
    assert_eq!((anneal.iterations, anneal.a), (40_000, 100.0));

    let fig3b = read("fig3b.spec");
    let target = fig3b.target.as_ref().unwrap();
    assert_eq!(target.shape, "rectangle");
    assert_eq!(
        target.height.unwrap().to_bits(),
        (0.2 * 5000.0 * 23e-6 / PI).to_bits()
    );
    assert_eq!(fig3b.crystal.as_ref().unwrap().n_domains, Some(5000));
    let anneal = fig3b.anneal.as_ref().unwrap();
    assert_eq!((anneal.iterations, anneal.a), (100_000, 1000.0));
}

#[test]
fn every_emitted_file_reads_back_through_the_artifact() {
    let dir = tempfile::tempdir().unwrap();
    // design with a chained jsa stage so all four artifact kinds appear
    let spec = write_spec(
        dir.path(),
        "design.json",
        r#"{
          "command": "design",
          "pump": { "lambda_p_nm": 791.0, "sigma_nm": 1.0 },
          "crystal": { "n_domains": 64, "l_c_um": 23.0, "initial": "random" },
          "target": {
            "shape": "gaussian",
            "range": [133176.2103152195, 140005.7595621538],
            "width": 800.0,
            "samples": 401
          },
          "anneal": { "iterations": 2000, "seed": 7, "restarts": 1 },
          "jsa": { "grid": 64, "extent_sigmas": 4.0 }
        }"#,
    );
    run_ok("design", &spec, dir.path(), &[]);
    let metrics = read_metrics(dir.path());

    let poling = files::read_poling(&dir.path().join("poling.txt")).unwrap();
    assert_eq!(poling.config.n_domains(), 64);
    assert_eq!(
        poling.cost.unwrap().to_bits(),
        metrics.anneal.as_ref().unwrap().best_cost.to_bits()
    );

    let curve = files::read_curve(&dir.path().join("curve.csv")).unwrap();
    assert_eq!(curve.len(), 401);

    let jsa = files::read_jsa_csv(&dir.path().join("jsa.csv")).unwrap();
    assert_eq!(jsa.len(), 64 * 64);

    let schmidt = files::read_schmidt_csv(&dir.path().join("schmidt.csv")).unwrap();
    assert!(!schmidt.is_empty() && schmidt.len() <= 64);
    let jsa_metrics = metrics.jsa.as_ref().unwrap();
    assert_eq!(schmidt[0].1.to_bits(), jsa_metrics.schmidt_leading[0].to_bits());
    assert!(jsa_metrics.purity > 0.0 && jsa_metrics.purity <= 1.0 + 1e-12);
}

#[test]
fn best_cost_is_the_minimum_across_restarts() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(
        dir.path(),
        "design.json",
        &SMALL_DESIGN.replace("\"restarts\": 1", "\"restarts\": 3"),
    );
    run_ok("design", &spec, dir.path(), &["--threads", "3"]);
    let anneal = read_metrics(dir.path()).anneal.unwrap();
    assert_eq!(anneal.restart_costs.len(), 3);
    for &cost in &anneal.restart_costs {
        assert!(anneal.best_cost <= cost);
    }
    assert_eq!(
        anneal.best_cost.to_bits(),
        anneal.restart_costs[anneal.best_restart as usize].to_bits()
    );
}

#[test]
fn seed_flag_overrides_the_spec_and_entropy_draws_are_replayable() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(dir.path(), "design.json", SMALL_DESIGN);
    let out = dir.path().join("flag");
    run_ok("design", &spec, &out, &["--seed", "1234"]);
    let metrics = read_metrics(&out);
    let rng = metrics.rng.as_ref().unwrap();
    assert_eq!((rng.seed, rng.source.as_str()), (1234, "flag"));
    assert_eq!(metrics.spec.anneal.unwrap().seed, Some(1234));

    // no seed anywhere: drawn from entropy, recorded, and replayable
    let unseeded = write_spec(
        dir.path(),
        "unseeded.json",
        &SMALL_DESIGN.replace("\"seed\": 99, ", ""),
    );
    let out1 = dir.path().join("entropy");
    run_ok("design", &unseeded, &out1, &[]);
    let first = read_metrics(&out1);
    let rng = first.rng.as_ref().unwrap();
    assert_eq!(rng.source, "entropy");
    let drawn = rng.seed;
    assert_eq!(first.spec.anneal.unwrap().seed, Some(drawn));

    let out2 = dir.path().join("replay");
    run_ok("design", &unseeded, &out2, &["--seed", &drawn.to_string()]);
    let replay = read_metrics(&out2);
    assert_eq!(
        replay.anneal.unwrap().best_cost.to_bits(),
        first.anneal.unwrap().best_cost.to_bits()
    );
}

#[test]
fn command_mismatch_is_fatal() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(dir.path(), "design.json", SMALL_DESIGN);
    let output = run("evaluate", &spec, dir.path(), &[]);
    assert!(!output.status.success());
    let stderr = String::from_utf8(output.stderr).unwrap();
    assert!(
        stderr.contains("declares command \"design\" but was invoked as \"evaluate\""),
        "stderr: {stderr}"
    );
    assert!(!dir.path().join("metrics.json").exists());
}

#[test]
fn unknown_spec_keys_are_fatal_through_the_binary() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(
        dir.path(),
        "typo.json",
        &SMALL_DESIGN.replace("\"crystal\"", "\"croystal\""),
    );
    let output = run("design", &spec, dir.path(), &[]);
    assert!(!output.status.success());
    let stderr = String::from_utf8(output.stderr).unwrap();
    assert!(stderr.contains("croystal"), "stderr: {stderr}");
}

#[test]
fn suggest_prints_the_geometry_and_height_bounds() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(
        dir.path(),
        "suggest.json",
        r#"{
          "command": "suggest",
          "target": { "shape": "gaussian", "dk_peak": 136590.98493868666 }
        }"#,
    );
    let output = run_ok("suggest", &spec, dir.path(), &[]);
    let stdout = String::from_utf8(output.stdout).unwrap();
    for key in ["l_c_um = ", "n_domains = ", "h_max_m = ", "h_default_m = "] {
        assert!(stdout.contains(key), "missing {key:?} in:\n{stdout}");
    }
    let suggest = read_metrics(dir.path()).suggest.unwrap();
    let expected_h_max = 2.0 * suggest.n_domains as f64 * suggest.l_c_um * 1e-6 / PI;
    assert!((suggest.h_max_m - expected_h_max).abs() < 1e-15);
    assert_eq!(suggest.h_default_m.to_bits(), (0.4 * suggest.h_max_m).to_bits());
}

#[test]
fn spec_relative_paths_resolve_against_the_spec_directory() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(dir.path(), "design.json", SMALL_DESIGN);
    run_ok("design", &spec, dir.path(), &[]);
    // the poling reference below is relative to the spec's own directory,
    // not to whatever directory the binary runs from
    let eval_spec = write_spec(
        dir.path(),
        "evaluate.json",
        r#"{
          "command": "evaluate",
          "crystal": { "initial": { "file": "poling.txt" } },
          "target": {
            "shape": "gaussian",
            "range": [133176.2103152195, 140005.7595621538],
            "width": 800.0,
            "height": 0.001,
            "samples": 101
          }
        }"#,
    );
    let out = dir.path().join("eval");
    run_ok("evaluate", &eval_spec, &out, &[]);
    assert!(out.join("curve.csv").exists());
}
