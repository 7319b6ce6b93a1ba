//! Run-spec files: the JSON documents that describe one pipeline run.
//!
//! A spec names its command and provides the blocks that command needs;
//! everything else is optional with documented defaults. Parsing rejects
//! unknown keys outright, and [`RunSpec::validate`] resolves defaults in
//! place so the validated value can be echoed verbatim into the metrics
//! output.

use serde::{Deserialize, Serialize};

/// Divisor for the default target width: `dk_peak / 400` keeps a minimal
/// spec's Gaussian far narrower than its optimization range.
const DEFAULT_WIDTH_DIVISOR: f64 = 400.0;

/// The pipeline selected by a spec (and by the CLI subcommand, which must
/// agree).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CommandKind {
    Suggest,
    Design,
    Evaluate,
    Jsa,
}

impl CommandKind {
    #[must_use]
    pub fn id(self) -> &'static str {
        match self {
            CommandKind::Suggest => "suggest",
            CommandKind::Design => "design",
            CommandKind::Evaluate => "evaluate",
            CommandKind::Jsa => "jsa",
        }
    }
}

impl core::fmt::Display for CommandKind {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.id())
    }
}

/// One run: command plus the blocks it draws from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSpec {
    pub command: CommandKind,
    /// Path to a dispersion-model JSON file, relative to the spec file's
    /// directory. Absent: the built-in KTP model.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dispersion: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pump: Option<PumpBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub crystal: Option<CrystalBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<TargetBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub anneal: Option<AnnealBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jsa: Option<JsaBlock>,
    /// Output directory; overridden by `--out`, defaults to the working
    /// directory.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
}

/// Pump laser: center wavelength and amplitude bandwidth, both in the
/// units experimenters quote them in.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PumpBlock {
    pub lambda_p_nm: f64,
    /// Gaussian amplitude FWHM in wavelength (nm).
    pub sigma_nm: f64,
}

/// Crystal geometry and the configuration the run starts from (or, for
/// `evaluate`/`jsa`, operates on).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CrystalBlock {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_domains: Option<usize>,
    /// Domain width in µm; mutually exclusive with `lambda_um`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l_c_um: Option<f64>,
    /// Poling period Λ = 2·l_c in µm; normalized to `l_c_um` during
    /// validation.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda_um: Option<f64>,
    /// `"random"`, `"periodic"`, or `{"file": "poling.txt"}`. Defaults to
    /// `"random"` for design and `"periodic"` otherwise.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial: Option<InitialBlock>,
}

/// Where the starting configuration comes from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InitialBlock {
    Keyword(String),
    File(FileInit),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileInit {
    /// Poling file path, relative to the spec file's directory.
    pub file: String,
}

/// The profile the phase-matching function is optimized toward.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetBlock {
    /// `gaussian` (default), `triangle`, `rectangle`, or `custom`.
    #[serde(default = "default_shape")]
    pub shape: String,
    /// Peak position Δk_peak (rad/m); defaults to the range midpoint.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dk_peak: Option<f64>,
    /// Optimization range [a, b] (rad/m).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub range: Option<[f64; 2]>,
    /// Width parameter w (rad/m); defaults to dk_peak/400.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub width: Option<f64>,
    /// Height H (m); defaults to 0.4·H_max = 0.8·N·l_c/π once the crystal
    /// is known.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub height: Option<f64>,
    /// Cost samples M across the range, endpoints included.
    #[serde(default = "default_samples")]
    pub samples: usize,
    /// Cost comparison mode: `modulus` (default) or `complex`.
    #[serde(default = "default_mode")]
    pub mode: String,
    /// `(Δk, value)` pairs for `shape = "custom"`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<[f64; 2]>>,
}

/// Annealing schedule and restart policy.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnnealBlock {
    /// Total iterations J.
    #[serde(default = "default_iterations")]
    pub iterations: u64,
    /// Better-move acceptance probability.
    #[serde(default = "default_q")]
    pub q: f64,
    /// Local-minimum scale A.
    #[serde(default = "default_a")]
    pub a: f64,
    /// RNG seed; absent means drawn from entropy (and recorded).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default = "default_restarts")]
    pub restarts: u32,
    /// Progress/trace sampling interval; defaults to J/1000.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace_interval: Option<u64>,
}

impl Default for AnnealBlock {
    fn default() -> Self {
        Self {
            iterations: default_iterations(),
            q: default_q(),
            a: default_a(),
            seed: None,
            restarts: default_restarts(),
            trace_interval: None,
        }
    }
}

/// Joint-spectral-amplitude grid resolution and extent.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JsaBlock {
    #[serde(default = "default_grid")]
    pub grid: usize,
    /// Half-extent of each frequency axis in pump-bandwidth units.
    #[serde(default = "default_extent")]
    pub extent_sigmas: f64,
}

impl Default for JsaBlock {
    fn default() -> Self {
        Self {
            grid: default_grid(),
            extent_sigmas: default_extent(),
        }
    }
}

fn default_shape() -> String {
    "gaussian".to_owned()
}

fn default_samples() -> usize {
    2001
}

fn default_mode() -> String {
    "modulus".to_owned()
}

fn default_iterations() -> u64 {
    200_000
}

fn default_q() -> f64 {
    0.999
}

fn default_a() -> f64 {
    1000.0
}

fn default_restarts() -> u32 {
    1
}

fn default_grid() -> usize {
    512
}

fn default_extent() -> f64 {
    4.0
}

impl RunSpec {
    /// A spec with every block absent; callers fill in what their command
    /// needs.
    #[must_use]
    pub fn new(command: CommandKind) -> Self {
        Self {
            command,
            dispersion: None,
            pump: None,
            crystal: None,
            target: None,
            anneal: None,
            jsa: None,
            output: None,
        }
    }

    /// Validates every present block, resolves defaults in place, and
    /// checks that the blocks the command needs exist. The error message
    /// names the first failing field and its bounds.
    pub fn validate(&mut self) -> Result<(), String> {
        if let Some(pump) = &self.pump {
            pump.validate()?;
        }
        if let Some(crystal) = &mut self.crystal {
            crystal.validate()?;
        }
        if let Some(target) = &mut self.target {
            target.validate()?;
        }
        if let Some(anneal) = &self.anneal {
            anneal.validate()?;
        }
        if let Some(jsa) = &self.jsa {
            jsa.validate()?;
        }
        self.resolve_command_requirements()
    }

    fn resolve_command_requirements(&mut self) -> Result<(), String> {
        let command = self.command;
        match command {
            CommandKind::Suggest => {
                let target = require(&self.target, "suggest", "target")?;
                if target.shape == "custom" {
                    return Err(
                        "target.shape = \"custom\" has no parameter suggestion; \
                         use gaussian, triangle, or rectangle"
                            .to_owned(),
                    );
                }
            }
            CommandKind::Design => {
                let crystal = require_mut(&mut self.crystal, "design", "crystal")?;
                crystal.resolve_initial("random", command)?;
                crystal.require_geometry()?;
                let target = require(&self.target, "design", "target")?;
                if target.range.is_none() {
                    return Err("target.range is required for design".to_owned());
                }
                if self.anneal.is_none() {
                    self.anneal = Some(AnnealBlock::default());
                }
                if self.jsa.is_some() && self.pump.is_none() {
                    return Err(
                        "design with a jsa block needs a pump block".to_owned()
                    );
                }
            }
            CommandKind::Evaluate => {
                let crystal = require_mut(&mut self.crystal, "evaluate", "crystal")?;
                crystal.resolve_initial("periodic", command)?;
                crystal.require_geometry()?;
                let target = require(&self.target, "evaluate", "target")?;
                if target.range.is_none() {
                    return Err("target.range is required for evaluate".to_owned());
                }
            }
            CommandKind::Jsa => {
                let crystal = require_mut(&mut self.crystal, "jsa", "crystal")?;
                crystal.resolve_initial("periodic", command)?;
                crystal.require_geometry()?;
                require(&self.pump, "jsa", "pump")?;
                if self.jsa.is_none() {
                    self.jsa = Some(JsaBlock::default());
                }
            }
        }
        Ok(())
    }
}

fn require<'a, T>(block: &'a Option<T>, command: &str, name: &str) -> Result<&'a T, String> {
    block
        .as_ref()
        .ok_or_else(|| format!("{command} requires a `{name}` block"))
}

fn require_mut<'a, T>(
    block: &'a mut Option<T>,
    command: &str,
    name: &str,
) -> Result<&'a mut T, String> {
    block
        .as_mut()
        .ok_or_else(|| format!("{command} requires a `{name}` block"))
}

impl PumpBlock {
    fn validate(&self) -> Result<(), String> {
        if !(self.lambda_p_nm.is_finite() && self.lambda_p_nm > 0.0) {
            return Err(format!(
                "pump.lambda_p_nm = {} must be a positive wavelength in nm",
                self.lambda_p_nm
            ));
        }
        if !(self.sigma_nm.is_finite() && self.sigma_nm > 0.0) {
            return Err(format!(
                "pump.sigma_nm = {} must be a positive bandwidth in nm",
                self.sigma_nm
            ));
        }
        Ok(())
    }
}

impl CrystalBlock {
    fn validate(&mut self) -> Result<(), String> {
        if self.l_c_um.is_some() && self.lambda_um.is_some() {
            return Err(
                "crystal.l_c_um and crystal.lambda_um are mutually exclusive".to_owned(),
            );
        }
        if let Some(lambda) = self.lambda_um.take() {
            if !(lambda.is_finite() && lambda > 0.0) {
                return Err(format!(
                    "crystal.lambda_um = {lambda} must be a positive period in µm"
                ));
            }
            self.l_c_um = Some(0.5 * lambda);
        }
        if let Some(l_c) = self.l_c_um {
            if !(l_c.is_finite() && l_c > 0.0) {
                return Err(format!(
                    "crystal.l_c_um = {l_c} must be a positive width in µm"
                ));
            }
        }
        if let Some(n) = self.n_domains {
            if n == 0 {
                return Err("crystal.n_domains must be at least 1".to_owned());
            }
        }
        if let Some(InitialBlock::Keyword(word)) = &self.initial {
            if word != "random" && word != "periodic" {
                return Err(format!(
                    "crystal.initial = \"{word}\" must be \"random\", \"periodic\", \
                     or {{\"file\": <path>}}"
                ));
            }
        }
        Ok(())
    }

    /// Fills the command's default starting configuration and rejects the
    /// combinations that make no sense for it.
    fn resolve_initial(&mut self, default: &str, command: CommandKind) -> Result<(), String> {
        if self.initial.is_none() {
            self.initial = Some(InitialBlock::Keyword(default.to_owned()));
        }
        if let Some(InitialBlock::Keyword(word)) = &self.initial {
            if word == "random" && command != CommandKind::Design {
                return Err(format!(
                    "crystal.initial = \"random\" is not meaningful for {command}; \
                     use \"periodic\" or {{\"file\": <path>}}"
                ));
            }
        }
        Ok(())
    }

    /// Domain count and width are required unless a poling file supplies
    /// them.
    fn require_geometry(&self) -> Result<(), String> {
        if matches!(self.initial, Some(InitialBlock::File(_))) {
            return Ok(());
        }
        if self.n_domains.is_none() {
            return Err(
                "crystal.n_domains is required when crystal.initial is not a file".to_owned(),
            );
        }
        if self.l_c_um.is_none() {
            return Err(
                "crystal.l_c_um (or crystal.lambda_um) is required when crystal.initial \
                 is not a file"
                    .to_owned(),
            );
        }
        Ok(())
    }
}

impl TargetBlock {
    fn validate(&mut self) -> Result<(), String> {
        match self.shape.as_str() {
            "gaussian" | "triangle" | "rectangle" | "custom" => {}
            other => {
                return Err(format!(
                    "target.shape = \"{other}\" must be \"gaussian\", \"triangle\", \
                     \"rectangle\", or \"custom\""
                ));
            }
        }
        if let Some([a, b]) = self.range {
            if !(a.is_finite() && b.is_finite() && a < b) {
                return Err(format!(
                    "target.range = [{a}, {b}] must satisfy range[0] < range[1]"
                ));
            }
        }
        if self.dk_peak.is_none() {
            if let Some([a, b]) = self.range {
                self.dk_peak = Some(0.5 * (a + b));
            } else if self.shape != "custom" {
                return Err("target needs dk_peak or range".to_owned());
            }
        }
        if let Some(dk) = self.dk_peak {
            if !(dk.is_finite() && dk > 0.0) {
                return Err(format!("target.dk_peak = {dk} must be positive"));
            }
        }
        if self.shape == "custom" {
            if self.points.as_ref().is_none_or(Vec::is_empty) {
                return Err(
                    "target.points is required when target.shape = \"custom\"".to_owned(),
                );
            }
        } else if self.points.is_some() {
            return Err(
                "target.points is only used when target.shape = \"custom\"".to_owned(),
            );
        } else if self.width.is_none() {
            self.width = self.dk_peak.map(|dk| dk / DEFAULT_WIDTH_DIVISOR);
        }
        if let Some(w) = self.width {
            if !(w.is_finite() && w > 0.0) {
                return Err(format!("target.width = {w} must be positive"));
            }
        }
        if let Some(h) = self.height {
            if !(h.is_finite() && h > 0.0) {
                return Err(format!("target.height = {h} must be positive"));
            }
        }
        if self.samples < 2 {
            return Err(format!(
                "target.samples = {} must be at least 2",
                self.samples
            ));
        }
        match self.mode.as_str() {
            "modulus" | "complex" => {}
            other => {
                return Err(format!(
                    "target.mode = \"{other}\" must be \"modulus\" or \"complex\""
                ));
            }
        }
        Ok(())
    }
}

impl AnnealBlock {
    fn validate(&self) -> Result<(), String> {
        if self.iterations == 0 {
            return Err("anneal.iterations must be at least 1".to_owned());
        }
        if !(self.q > 0.0 && self.q <= 1.0) {
            return Err(format!("anneal.q = {} must lie in (0, 1]", self.q));
        }
        if !(self.a.is_finite() && self.a > 0.0) {
            return Err(format!("anneal.a = {} must be positive", self.a));
        }
        if self.restarts == 0 {
            return Err("anneal.restarts must be at least 1".to_owned());
        }
        if self.trace_interval == Some(0) {
            return Err("anneal.trace_interval must be at least 1".to_owned());
        }
        Ok(())
    }
}

impl JsaBlock {
    fn validate(&self) -> Result<(), String> {
        if self.grid < 2 {
            return Err(format!("jsa.grid = {} must be at least 2", self.grid));
        }
        if !(self.extent_sigmas.is_finite() && self.extent_sigmas > 0.0) {
            return Err(format!(
                "jsa.extent_sigmas = {} must be positive",
                self.extent_sigmas
            ));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(json: &str) -> Result<RunSpec, serde_json::Error> {
        serde_json::from_str(json)
    }

    fn parse_valid(json: &str) -> RunSpec {
        let mut spec = parse(json).expect("spec parses");
        spec.validate().expect("spec validates");
        spec
    }

    #[test]
    fn minimal_suggest_spec_resolves_defaults() {
        let spec = parse_valid(
            r#"{ "command": "suggest", "target": { "dk_peak": 136590.98 } }"#,
        );
        let target = spec.target.unwrap();
        assert_eq!(target.shape, "gaussian");
        assert_eq!(target.samples, 2001);
        assert_eq!(target.mode, "modulus");
        assert_eq!(target.width, Some(136590.98 / 400.0));
        assert_eq!(target.dk_peak, Some(136590.98));
    }

    #[test]
    fn unknown_keys_are_fatal_and_named() {
        let err = parse(r#"{ "command": "suggest", "tragect": {} }"#).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("tragect"), "{msg}");
        let err = parse(
            r#"{ "command": "design", "anneal": { "iterations": 10, "quality": 0.9 } }"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("quality"), "{err}");
    }

    #[test]
    fn q_out_of_bounds_names_the_field() {
        let mut spec = parse(
            r#"{
                "command": "design",
                "crystal": { "n_domains": 10, "l_c_um": 23.0 },
                "target": { "dk_peak": 1.0e5, "range": [9.0e4, 1.1e5] },
                "anneal": { "q": 1.5 }
            }"#,
        )
        .unwrap();
        let msg = spec.validate().unwrap_err();
        assert!(msg.contains("anneal.q") && msg.contains("(0, 1]"), "{msg}");
    }

    #[test]
    fn missing_blocks_name_the_command_requirements() {
        let mut spec = parse(r#"{ "command": "design" }"#).unwrap();
        let msg = spec.validate().unwrap_err();
        assert!(msg.contains("design requires a `crystal` block"), "{msg}");

        let mut spec = parse(
            r#"{ "command": "jsa", "crystal": { "n_domains": 10, "l_c_um": 23.0 } }"#,
        )
        .unwrap();
        let msg = spec.validate().unwrap_err();
        assert!(msg.contains("jsa requires a `pump` block"), "{msg}");
    }

    #[test]
    fn design_defaults_to_random_initial_and_default_anneal() {
        let spec = parse_valid(
            r#"{
                "command": "design",
                "crystal": { "n_domains": 10, "l_c_um": 23.0 },
                "target": { "dk_peak": 1.0e5, "range": [9.0e4, 1.1e5] }
            }"#,
        );
        assert_eq!(
            spec.crystal.unwrap().initial,
            Some(InitialBlock::Keyword("random".to_owned()))
        );
        let anneal = spec.anneal.unwrap();
        assert_eq!(anneal.iterations, 200_000);
        assert_eq!(anneal.q, 0.999);
        assert_eq!(anneal.a, 1000.0);
        assert_eq!(anneal.restarts, 1);
        assert_eq!(anneal.seed, None);
    }

    #[test]
    fn evaluate_rejects_random_initial() {
        let mut spec = parse(
            r#"{
                "command": "evaluate",
                "crystal": { "n_domains": 10, "l_c_um": 23.0, "initial": "random" },
                "target": { "dk_peak": 1.0e5, "range": [9.0e4, 1.1e5] }
            }"#,
        )
        .unwrap();
        let msg = spec.validate().unwrap_err();
        assert!(msg.contains("not meaningful for evaluate"), "{msg}");
    }

    #[test]
    fn lambda_um_normalizes_to_half_width() {
        let spec = parse_valid(
            r#"{
                "command": "evaluate",
                "crystal": { "n_domains": 10, "lambda_um": 46.0 },
                "target": { "dk_peak": 1.0e5, "range": [9.0e4, 1.1e5] }
            }"#,
        );
        let crystal = spec.crystal.unwrap();
        assert_eq!(crystal.l_c_um, Some(23.0));
        assert_eq!(crystal.lambda_um, None);
    }

    #[test]
    fn both_width_forms_is_an_error() {
        let mut spec = parse(
            r#"{
                "command": "evaluate",
                "crystal": { "n_domains": 10, "l_c_um": 23.0, "lambda_um": 46.0 },
                "target": { "dk_peak": 1.0e5, "range": [9.0e4, 1.1e5] }
            }"#,
        )
        .unwrap();
        let msg = spec.validate().unwrap_err();
        assert!(msg.contains("mutually exclusive"), "{msg}");
    }

    #[test]
    fn file_initial_lifts_geometry_requirement() {
        let spec = parse_valid(
            r#"{
                "command": "evaluate",
                "crystal": { "initial": { "file": "poling.txt" } },
                "target": { "dk_peak": 1.0e5, "range": [9.0e4, 1.1e5] }
            }"#,
        );
        assert_eq!(
            spec.crystal.unwrap().initial,
            Some(InitialBlock::File(FileInit {
                file: "poling.txt".to_owned()
            }))
        );
    }

    #[test]
    fn custom_shape_needs_points_and_vice_versa() {
        let mut spec = parse(
            r#"{
                "command": "evaluate",
                "crystal": { "n_domains": 10, "l_c_um": 23.0 },
                "target": { "shape": "custom", "range": [9.0e4, 1.1e5] }
            }"#,
        )
        .unwrap();
        let msg = spec.validate().unwrap_err();
        assert!(msg.contains("target.points is required"), "{msg}");

        let mut spec = parse(
            r#"{
                "command": "evaluate",
                "crystal": { "n_domains": 10, "l_c_um": 23.0 },
                "target": {
                    "dk_peak": 1.0e5,
                    "range": [9.0e4, 1.1e5],
                    "points": [[9.0e4, 0.0], [1.1e5, 1.0]]
                }
            }"#,
        )
        .unwrap();
        let msg = spec.validate().unwrap_err();
        assert!(msg.contains("only used when"), "{msg}");
    }

    #[test]
    fn resolved_spec_reparses_to_itself() {
        let spec = parse_valid(
            r#"{
                "command": "design",
                "crystal": { "n_domains": 10, "lambda_um": 46.0 },
                "target": { "dk_peak": 1.0e5, "range": [9.0e4, 1.1e5] },
                "anneal": { "seed": 7 }
            }"#,
        );
        let echo = serde_json::to_string(&spec).unwrap();
        let mut reparsed: RunSpec = serde_json::from_str(&echo).unwrap();
        reparsed.validate().unwrap();
        assert_eq!(reparsed, spec);
    }
}
