//! Loading dispersion models from JSON files.
//!
//! A model file names its axes, gives each a formula id with coefficients
//! and a validity window, and assigns the pump and down-converted modes to
//! axes. The shipped `data/ktp_fradkin_konig.json` mirrors the built-in
//! KTP model and doubles as the format reference.

use std::collections::BTreeMap;
use std::path::Path;

use polingforge_core::{AxisDispersion, DispersionModel, Formula, ModeAxes};
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    name: String,
    /// Free-text provenance of the coefficients; carried for the reader,
    /// not interpreted.
    #[serde(default)]
    #[allow(dead_code)]
    source: Option<String>,
    axes: BTreeMap<String, AxisFile>,
    mode_axes: ModeAxesFile,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct AxisFile {
    formula_id: String,
    coefficients: Vec<f64>,
    validity_um: [f64; 2],
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModeAxesFile {
    p: String,
    a: String,
    b: String,
}

/// Reads and validates a dispersion-model JSON file.
pub fn load_dispersion(path: &Path) -> Result<DispersionModel, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let file: ModelFile = serde_json::from_str(&text).map_err(|e| CliError::Json {
        path: path.to_owned(),
        source: e,
    })?;
    let mut axes = BTreeMap::new();
    for (axis, spec) in file.axes {
        let formula = Formula::from_id(&spec.formula_id).ok_or_else(|| {
            CliError::invalid(
                path,
                format!(
                    "axis \"{axis}\": unknown formula_id \"{}\"; expected \
                     \"constant\", \"linear_omega\", or \"sellmeier_offset\"",
                    spec.formula_id
                ),
            )
        })?;
        axes.insert(
            axis,
            AxisDispersion {
                formula,
                coefficients: spec.coefficients,
                validity_um: (spec.validity_um[0], spec.validity_um[1]),
            },
        );
    }
    let mode_axes = ModeAxes {
        p: file.mode_axes.p,
        a: file.mode_axes.a,
        b: file.mode_axes.b,
    };
    Ok(DispersionModel::new(file.name, axes, mode_axes)?)
}
