//! The four pipelines behind the CLI: load and validate a run spec, drive
//! the core modules, and emit poling/curve/JSA/Schmidt files plus a JSON
//! metrics document that echoes the fully resolved spec.

use std::path::{Path, PathBuf};
use std::time::Instant;

use polingforge_core::{
    anneal_multi, anneal_single_with_progress, build_jsa, schmidt_decompose, suggest_parameters,
    AnnealParams, CostMode, DispersionModel, DomainConfig, InitialSpec, JsaGridParams, PumpSpec,
    SketchShape, TargetFunction, TargetShape, TargetSketch, RNG_ALGORITHM,
};
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::runspec::{CommandKind, CrystalBlock, InitialBlock, RunSpec, TargetBlock};
use crate::{files, material, CliError};

/// One CLI invocation, as resolved from the command line.
#[derive(Clone, Debug)]
pub struct RunRequest {
    pub command: CommandKind,
    pub spec: PathBuf,
    /// Output directory override; falls back to the spec's `output`, then
    /// the working directory.
    pub out: Option<PathBuf>,
    /// Restart parallelism cap.
    pub threads: usize,
    /// RNG seed override.
    pub seed: Option<u64>,
}

/// A completed run: where the metrics landed and what they contain.
#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub metrics_path: PathBuf,
    pub metrics: Metrics,
}

/// The metrics document. Everything a rerun needs is in `spec` (defaults
/// resolved, seed pinned); the rest records what this run produced.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Metrics {
    pub command: String,
    pub spec_path: String,
    pub spec: RunSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dispersion: Option<DispersionInfo>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rng: Option<RngInfo>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub suggest: Option<SuggestMetrics>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub anneal: Option<AnnealMetrics>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub evaluate: Option<EvaluateMetrics>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jsa: Option<JsaMetrics>,
    pub files: FileList,
    pub timings_ms: Timings,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DispersionInfo {
    pub name: String,
    /// `"builtin"` or the resolved model file path.
    pub origin: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RngInfo {
    pub algorithm: String,
    pub seed: u64,
    /// Where the seed came from: `"spec"`, `"flag"`, or `"entropy"`.
    pub source: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SuggestMetrics {
    pub l_c_um: f64,
    pub n_domains: usize,
    pub h_max_m: f64,
    pub h_default_m: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AnnealMetrics {
    pub restarts: u32,
    /// Final cost of every restart, in restart order.
    pub restart_costs: Vec<f64>,
    pub best_restart: u32,
    /// Starting cost of the winning restart.
    pub initial_cost: f64,
    pub best_cost: f64,
    pub iterations_used: u64,
    pub sweep_passes: u32,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EvaluateMetrics {
    pub cost: f64,
    pub mode: String,
    pub samples: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct JsaMetrics {
    pub grid: usize,
    pub extent_sigmas: f64,
    pub purity: f64,
    pub entropy_bits: f64,
    /// Largest Schmidt coefficients, descending (up to 16).
    pub schmidt_leading: Vec<f64>,
    /// Δk band of the hard spectral window, when one was applied.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub filter_band: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub purity_filtered: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub entropy_bits_filtered: Option<f64>,
}

/// Paths of the artifacts this run wrote.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct FileList {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub poling: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub curve: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jsa: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schmidt: Option<String>,
    pub metrics: String,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct Timings {
    pub total_ms: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub anneal_ms: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jsa_ms: Option<f64>,
}

/// Everything the command arms accumulate before the metrics document is
/// assembled.
#[derive(Default)]
struct Collected {
    dispersion: Option<DispersionInfo>,
    rng: Option<RngInfo>,
    suggest: Option<SuggestMetrics>,
    anneal: Option<AnnealMetrics>,
    evaluate: Option<EvaluateMetrics>,
    jsa: Option<JsaMetrics>,
    files: FileList,
    anneal_ms: Option<f64>,
    jsa_ms: Option<f64>,
}

/// Runs one pipeline end to end and writes `metrics.json` last, so a
/// metrics document on disk always describes a completed run.
pub fn run(req: &RunRequest) -> Result<RunOutcome, CliError> {
    let started = Instant::now();
    let spec_path = req.spec.as_path();
    let text = std::fs::read_to_string(spec_path).map_err(|e| CliError::io(spec_path, e))?;
    let mut spec: RunSpec = serde_json::from_str(&text).map_err(|e| CliError::Json {
        path: spec_path.to_owned(),
        source: e,
    })?;
    spec.validate()
        .map_err(|message| CliError::invalid(spec_path, message))?;
    if spec.command != req.command {
        return Err(CliError::invalid(
            spec_path,
            format!(
                "spec declares command \"{}\" but was invoked as \"{}\"",
                spec.command, req.command
            ),
        ));
    }
    let spec_dir = spec_path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or_else(|| Path::new("."))
        .to_owned();
    let out_dir = req
        .out
        .clone()
        .or_else(|| spec.output.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&out_dir).map_err(|e| CliError::io(&out_dir, e))?;

    let mut col = Collected::default();
    match req.command {
        CommandKind::Suggest => run_suggest(&spec, &mut col)?,
        CommandKind::Design => run_design(&mut spec, req, &spec_dir, &out_dir, &mut col)?,
        CommandKind::Evaluate => run_evaluate(&mut spec, &spec_dir, &out_dir, &mut col)?,
        CommandKind::Jsa => run_jsa_command(&mut spec, &spec_dir, &out_dir, &mut col)?,
    }

    let metrics_path = out_dir.join("metrics.json");
    col.files.metrics = display(&metrics_path);
    let metrics = Metrics {
        command: req.command.id().to_owned(),
        spec_path: display(spec_path),
        spec,
        dispersion: col.dispersion,
        rng: col.rng,
        suggest: col.suggest,
        anneal: col.anneal,
        evaluate: col.evaluate,
        jsa: col.jsa,
        files: col.files,
        timings_ms: Timings {
            total_ms: ms_since(started),
            anneal_ms: col.anneal_ms,
            jsa_ms: col.jsa_ms,
        },
    };
    files::write_json(&metrics_path, &metrics)?;
    Ok(RunOutcome {
        metrics_path,
        metrics,
    })
}

fn run_suggest(spec: &RunSpec, col: &mut Collected) -> Result<(), CliError> {
    let target = spec.target.as_ref().expect("validation requires the target");
    let sketch = TargetSketch {
        shape: match target.shape.as_str() {
            "gaussian" => SketchShape::Gaussian,
            "triangle" => SketchShape::Triangle,
            "rectangle" => SketchShape::Rectangle,
            _ => unreachable!("validation rejects other shapes for suggest"),
        },
        dk_peak: target.dk_peak,
        range: target.range.map(|[a, b]| (a, b)),
        width: target.width.expect("validation fills the width"),
    };
    let suggested = suggest_parameters(&sketch)?;
    let metrics = SuggestMetrics {
        l_c_um: suggested.l_c * 1e6,
        n_domains: suggested.n_domains,
        h_max_m: suggested.h_max,
        h_default_m: suggested.h_default,
    };
    println!("l_c_um = {}", metrics.l_c_um);
    println!("n_domains = {}", metrics.n_domains);
    println!("h_max_m = {}", metrics.h_max_m);
    println!("h_default_m = {}", metrics.h_default_m);
    col.suggest = Some(metrics);
    Ok(())
}

fn run_design(
    spec: &mut RunSpec,
    req: &RunRequest,
    spec_dir: &Path,
    out_dir: &Path,
    col: &mut Collected,
) -> Result<(), CliError> {
    let crystal = resolve_crystal(
        spec.crystal.as_ref().expect("validation requires the crystal"),
        spec_dir,
    )?;
    let target_block = spec.target.as_mut().expect("validation requires the target");
    fill_height(target_block, crystal.n_domains, crystal.l_c);
    let target = build_target(target_block)?;
    let mode = cost_mode(target_block);

    let anneal_block = spec.anneal.as_mut().expect("validation fills the anneal block");
    let (seed, seed_source) = match (req.seed, anneal_block.seed) {
        (Some(s), _) => (s, "flag"),
        (None, Some(s)) => (s, "spec"),
        (None, None) => (rand::rng().random(), "entropy"),
    };
    anneal_block.seed = Some(seed);
    let params = AnnealParams {
        j: anneal_block.iterations,
        q: anneal_block.q,
        a: anneal_block.a,
        seed,
        restarts: anneal_block.restarts,
        trace_interval: anneal_block.trace_interval,
    };
    col.rng = Some(RngInfo {
        algorithm: RNG_ALGORITHM.to_owned(),
        seed,
        source: seed_source.to_owned(),
    });

    let t0 = Instant::now();
    let multi = if params.restarts == 1 {
        anneal_single_with_progress(&crystal.initial, &target, mode, &params, |i, cost, h| {
            eprintln!("iter={i} cost={cost} h={h}");
        })?
    } else {
        anneal_multi(&crystal.initial, &target, mode, &params, req.threads)?
    };
    col.anneal_ms = Some(ms_since(t0));

    col.anneal = Some(AnnealMetrics {
        restarts: params.restarts,
        restart_costs: multi.summaries.iter().map(|s| s.best_cost).collect(),
        best_restart: multi.best_restart,
        initial_cost: multi.best.initial_cost,
        best_cost: multi.best.best_cost,
        iterations_used: multi.best.iterations_used,
        sweep_passes: multi.best.sweep_passes,
    });

    let poling_path = out_dir.join("poling.txt");
    files::write_poling(
        &poling_path,
        &multi.best.best,
        crystal.l_c_um,
        Some(multi.best.best_cost),
        Some(mode),
    )?;
    col.files.poling = Some(display(&poling_path));
    let curve_path = out_dir.join("curve.csv");
    files::write_curve(&curve_path, &multi.best.best, &target)?;
    col.files.curve = Some(display(&curve_path));

    if spec.jsa.is_some() {
        let (model, info) = load_model(spec, spec_dir)?;
        col.dispersion = Some(info);
        let jsa_metrics = run_jsa_stage(&multi.best.best, &model, spec, out_dir, col)?;
        col.jsa = Some(jsa_metrics);
    }
    Ok(())
}

fn run_evaluate(
    spec: &mut RunSpec,
    spec_dir: &Path,
    out_dir: &Path,
    col: &mut Collected,
) -> Result<(), CliError> {
    let crystal = resolve_crystal(
        spec.crystal.as_ref().expect("validation requires the crystal"),
        spec_dir,
    )?;
    let config = crystal.config.expect("evaluate starts from a concrete config");
    let target_block = spec.target.as_mut().expect("validation requires the target");
    fill_height(target_block, crystal.n_domains, crystal.l_c);
    let target = build_target(target_block)?;
    let mode = cost_mode(target_block);
    let cost = polingforge_core::cost(&config, &target, mode)?;
    println!("cost = {cost}");
    let curve_path = out_dir.join("curve.csv");
    files::write_curve(&curve_path, &config, &target)?;
    col.files.curve = Some(display(&curve_path));
    col.evaluate = Some(EvaluateMetrics {
        cost,
        mode: mode.id().to_owned(),
        samples: target.samples(),
    });
    Ok(())
}

fn run_jsa_command(
    spec: &mut RunSpec,
    spec_dir: &Path,
    out_dir: &Path,
    col: &mut Collected,
) -> Result<(), CliError> {
    let crystal = resolve_crystal(
        spec.crystal.as_ref().expect("validation requires the crystal"),
        spec_dir,
    )?;
    let config = crystal.config.expect("jsa starts from a concrete config");
    let (model, info) = load_model(spec, spec_dir)?;
    col.dispersion = Some(info);
    let jsa_metrics = run_jsa_stage(&config, &model, spec, out_dir, col)?;
    println!("purity = {}", jsa_metrics.purity);
    println!("entropy_bits = {}", jsa_metrics.entropy_bits);
    if let Some(p) = jsa_metrics.purity_filtered {
        println!("purity_filtered = {p}");
    }
    col.jsa = Some(jsa_metrics);
    Ok(())
}

/// Builds the JSA for `config`, decomposes it (optionally also inside the
/// target band), and writes the JSA and Schmidt CSVs.
fn run_jsa_stage(
    config: &DomainConfig,
    model: &DispersionModel,
    spec: &RunSpec,
    out_dir: &Path,
    col: &mut Collected,
) -> Result<JsaMetrics, CliError> {
    let pump_block = spec.pump.as_ref().expect("validation requires the pump");
    let pump = PumpSpec::new(pump_block.lambda_p_nm * 1e-9, pump_block.sigma_nm * 1e-9)?;
    let jsa_block = spec.jsa.unwrap_or_default();
    let params = JsaGridParams {
        g: jsa_block.grid,
        extent_sigmas: jsa_block.extent_sigmas,
    };
    let t0 = Instant::now();
    let grid = build_jsa(config, model, &pump, &params)?;
    let schmidt = schmidt_decompose(&grid)?;
    let band = spec.target.as_ref().and_then(|t| t.range);
    let (filter_band, purity_filtered, entropy_bits_filtered) = match band {
        Some([a, b]) => {
            let filtered = grid.filtered_to_band(model, (a, b))?;
            let s = schmidt_decompose(&filtered)?;
            (Some([a, b]), Some(s.purity), Some(s.entropy_bits))
        }
        None => (None, None, None),
    };
    col.jsa_ms = Some(ms_since(t0));

    let jsa_path = out_dir.join("jsa.csv");
    files::write_jsa_csv(&jsa_path, &grid)?;
    col.files.jsa = Some(display(&jsa_path));
    let schmidt_path = out_dir.join("schmidt.csv");
    files::write_schmidt_csv(&schmidt_path, &schmidt.b)?;
    col.files.schmidt = Some(display(&schmidt_path));

    Ok(JsaMetrics {
        grid: params.g,
        extent_sigmas: params.extent_sigmas,
        purity: schmidt.purity,
        entropy_bits: schmidt.entropy_bits,
        schmidt_leading: schmidt.b.iter().copied().take(16).collect(),
        filter_band,
        purity_filtered,
        entropy_bits_filtered,
    })
}

/// A crystal block resolved against the filesystem: the annealer's
/// starting point plus the concrete geometry.
struct ResolvedCrystal {
    initial: InitialSpec,
    /// The configuration itself for `evaluate`/`jsa`; `None` when each
    /// restart draws fresh random orientations.
    config: Option<DomainConfig>,
    n_domains: usize,
    /// Domain width in meters.
    l_c: f64,
    /// Domain width exactly as spelled in the spec or poling header (µm).
    l_c_um: f64,
}

fn resolve_crystal(crystal: &CrystalBlock, spec_dir: &Path) -> Result<ResolvedCrystal, CliError> {
    let initial = crystal
        .initial
        .as_ref()
        .expect("validation fills the initial");
    match initial {
        InitialBlock::Keyword(word) => {
            let n_domains = crystal
                .n_domains
                .expect("validation requires n_domains for keyword initials");
            let l_c_um = crystal
                .l_c_um
                .expect("validation requires l_c_um for keyword initials");
            let l_c = l_c_um * 1e-6;
            if word == "random" {
                Ok(ResolvedCrystal {
                    initial: InitialSpec::Random { n_domains, l_c },
                    config: None,
                    n_domains,
                    l_c,
                    l_c_um,
                })
            } else {
                let config = DomainConfig::periodic(n_domains, l_c)?;
                Ok(ResolvedCrystal {
                    initial: InitialSpec::Periodic { n_domains, l_c },
                    config: Some(config),
                    n_domains,
                    l_c,
                    l_c_um,
                })
            }
        }
        InitialBlock::File(init) => {
            let path = resolve_path(spec_dir, &init.file);
            let poling = files::read_poling(&path)?;
            if let Some(n) = crystal.n_domains {
                if n != poling.config.n_domains() {
                    return Err(CliError::invalid(
                        &path,
                        format!(
                            "crystal.n_domains = {n} disagrees with the poling file's N = {}",
                            poling.config.n_domains()
                        ),
                    ));
                }
            }
            if let Some(l_c_um) = crystal.l_c_um {
                if (l_c_um - poling.l_c_um).abs() > 1e-9 * poling.l_c_um.abs() {
                    return Err(CliError::invalid(
                        &path,
                        format!(
                            "crystal.l_c_um = {l_c_um} disagrees with the poling file's \
                             l_c_um = {}",
                            poling.l_c_um
                        ),
                    ));
                }
            }
            let n_domains = poling.config.n_domains();
            let l_c = poling.config.l_c();
            Ok(ResolvedCrystal {
                initial: InitialSpec::Fixed(poling.config.clone()),
                config: Some(poling.config),
                n_domains,
                l_c,
                l_c_um: poling.l_c_um,
            })
        }
    }
}

/// Fills the default height 0.4·H_max = 0.8·N·l_c/π once the crystal is
/// known; custom targets default to 1 (their points are absolute).
fn fill_height(target: &mut TargetBlock, n_domains: usize, l_c: f64) {
    if target.height.is_none() {
        let height = if target.shape == "custom" {
            1.0
        } else {
            0.8 * n_domains as f64 * l_c / core::f64::consts::PI
        };
        target.height = Some(height);
    }
}

fn build_target(block: &TargetBlock) -> Result<TargetFunction, CliError> {
    let [a, b] = block.range.expect("validation requires the range here");
    let height = block.height.expect("the height is filled before building");
    let shape = match block.shape.as_str() {
        "gaussian" => TargetShape::Gaussian {
            center: block.dk_peak.expect("validation fills dk_peak"),
            width: block.width.expect("validation fills the width"),
        },
        "triangle" => TargetShape::Triangle {
            center: block.dk_peak.expect("validation fills dk_peak"),
            width: block.width.expect("validation fills the width"),
        },
        "rectangle" => TargetShape::Rectangle {
            center: block.dk_peak.expect("validation fills dk_peak"),
            width: block.width.expect("validation fills the width"),
        },
        "custom" => TargetShape::Custom {
            points: block
                .points
                .as_ref()
                .expect("validation requires points for custom")
                .iter()
                .map(|&[dk, value]| (dk, value))
                .collect(),
        },
        other => unreachable!("validation rejects shape {other:?}"),
    };
    Ok(TargetFunction::build(shape, (a, b), block.samples, height)?)
}

fn cost_mode(block: &TargetBlock) -> CostMode {
    CostMode::from_id(&block.mode).expect("validation checks the mode id")
}

fn load_model(
    spec: &RunSpec,
    spec_dir: &Path,
) -> Result<(DispersionModel, DispersionInfo), CliError> {
    match &spec.dispersion {
        Some(raw) => {
            let path = resolve_path(spec_dir, raw);
            let model = material::load_dispersion(&path)?;
            let info = DispersionInfo {
                name: model.name().to_owned(),
                origin: display(&path),
            };
            Ok((model, info))
        }
        None => {
            let model = DispersionModel::ktp_type_ii();
            let info = DispersionInfo {
                name: model.name().to_owned(),
                origin: "builtin".to_owned(),
            };
            Ok((model, info))
        }
    }
}

fn resolve_path(spec_dir: &Path, raw: &str) -> PathBuf {
    let path = Path::new(raw);
    if path.is_absolute() {
        path.to_owned()
    } else {
        spec_dir.join(path)
    }
}

fn display(path: &Path) -> String {
    path.display().to_string()
}

fn ms_since(t0: Instant) -> f64 {
    t0.elapsed().as_secs_f64() * 1e3
}
