//! On-disk artifact formats: poling files, curve/JSA/Schmidt CSVs, and the
//! JSON metrics document.
//!
//! Every format written here is read back by this module (or by serde for
//! the metrics), so round-trip tests can hold the artifact to its own
//! output. Floats are printed with `{}` — the shortest representation that
//! re-parses to the same bits — which also makes identical runs
//! byte-identical.

use std::fmt::Write as _;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use polingforge_core::{CostMode, DomainConfig, JsaGrid, TargetFunction};
use serde::Serialize;

use crate::CliError;

/// A poling file's content: the configuration plus the header fields that
/// travel with it.
#[derive(Clone, Debug)]
pub struct PolingFile {
    pub config: DomainConfig,
    /// Domain width exactly as the header spells it (µm).
    pub l_c_um: f64,
    pub cost: Option<f64>,
    pub mode: Option<CostMode>,
}

/// Writes a poling file: `#`-prefixed `key = value` headers (`N`,
/// `l_c_um`, `Lambda_um`, optionally `cost` and `mode`) followed by one
/// `+1`/`-1` line per domain.
pub fn write_poling(
    path: &Path,
    config: &DomainConfig,
    l_c_um: f64,
    cost: Option<f64>,
    mode: Option<CostMode>,
) -> Result<(), CliError> {
    let mut text = String::new();
    let _ = writeln!(text, "# N = {}", config.n_domains());
    let _ = writeln!(text, "# l_c_um = {l_c_um}");
    let _ = writeln!(text, "# Lambda_um = {}", 2.0 * l_c_um);
    if let Some(cost) = cost {
        let _ = writeln!(text, "# cost = {cost}");
    }
    if let Some(mode) = mode {
        let _ = writeln!(text, "# mode = {}", mode.id());
    }
    for &s in config.orientations() {
        text.push_str(if s > 0 { "+1\n" } else { "-1\n" });
    }
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

/// Reads a poling file back; the header's `N` must match the number of
/// orientation lines, and `Lambda_um`, when present, must equal `2·l_c_um`.
pub fn read_poling(path: &Path) -> Result<PolingFile, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let mut n: Option<usize> = None;
    let mut l_c_um: Option<f64> = None;
    let mut lambda_um: Option<f64> = None;
    let mut cost: Option<f64> = None;
    let mut mode: Option<CostMode> = None;
    let mut s: Vec<i8> = Vec::new();
    for (index, line) in text.lines().enumerate() {
        let lineno = index + 1;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(header) = line.strip_prefix('#') {
            let (key, value) = header.split_once('=').ok_or_else(|| {
                CliError::invalid(
                    path,
                    format!("line {lineno}: header \"{line}\" is not `# key = value`"),
                )
            })?;
            let (key, value) = (key.trim(), value.trim());
            let bad_number = |what: &str| {
                CliError::invalid(
                    path,
                    format!("line {lineno}: {key} = \"{value}\" is not {what}"),
                )
            };
            match key {
                "N" => n = Some(value.parse().map_err(|_| bad_number("a domain count"))?),
                "l_c_um" => l_c_um = Some(value.parse().map_err(|_| bad_number("a width"))?),
                "Lambda_um" => {
                    lambda_um = Some(value.parse().map_err(|_| bad_number("a period"))?);
                }
                "cost" => cost = Some(value.parse().map_err(|_| bad_number("a cost"))?),
                "mode" => {
                    mode = Some(CostMode::from_id(value).ok_or_else(|| {
                        CliError::invalid(
                            path,
                            format!(
                                "line {lineno}: mode = \"{value}\" must be \
                                 \"modulus\" or \"complex\""
                            ),
                        )
                    })?);
                }
                other => {
                    return Err(CliError::invalid(
                        path,
                        format!("line {lineno}: unknown header key \"{other}\""),
                    ));
                }
            }
        } else {
            match line {
                "+1" => s.push(1),
                "-1" => s.push(-1),
                other => {
                    return Err(CliError::invalid(
                        path,
                        format!("line {lineno}: expected \"+1\" or \"-1\", got \"{other}\""),
                    ));
                }
            }
        }
    }
    let n = n.ok_or_else(|| CliError::invalid(path, "missing `# N = <count>` header"))?;
    let l_c_um =
        l_c_um.ok_or_else(|| CliError::invalid(path, "missing `# l_c_um = <width>` header"))?;
    if n != s.len() {
        return Err(CliError::invalid(
            path,
            format!(
                "header declares N = {n} but the file has {} orientation lines",
                s.len()
            ),
        ));
    }
    if let Some(lambda) = lambda_um {
        if (lambda - 2.0 * l_c_um).abs() > 1e-9 * lambda.abs() {
            return Err(CliError::invalid(
                path,
                format!(
                    "Lambda_um = {lambda} disagrees with l_c_um = {l_c_um} \
                     (expected Lambda = 2·l_c)"
                ),
            ));
        }
    }
    let config = DomainConfig::new(l_c_um * 1e-6, 1.0, s)?;
    Ok(PolingFile {
        config,
        l_c_um,
        cost,
        mode,
    })
}

/// Writes the phase-matching curve over the target's sample grid:
/// `dk_rad_per_m,phi_abs_m,phi_re_m,phi_im_m,target_m`.
pub fn write_curve(
    path: &Path,
    config: &DomainConfig,
    target: &TargetFunction,
) -> Result<(), CliError> {
    let file = fs::File::create(path).map_err(|e| CliError::io(path, e))?;
    let mut out = BufWriter::new(file);
    let write = |out: &mut BufWriter<fs::File>, line: &str| -> Result<(), CliError> {
        out.write_all(line.as_bytes())
            .map_err(|e| CliError::io(path, e))
    };
    write(&mut out, "dk_rad_per_m,phi_abs_m,phi_re_m,phi_im_m,target_m\n")?;
    for m in 0..target.samples() {
        let dk = target.abscissa(m);
        let phi = config.evaluate_pmf(dk);
        let line = format!(
            "{dk},{},{},{},{}\n",
            phi.re.hypot(phi.im),
            phi.re,
            phi.im,
            target.values()[m]
        );
        write(&mut out, &line)?;
    }
    out.flush().map_err(|e| CliError::io(path, e))
}

/// Reads a curve CSV back into rows of
/// `[dk, phi_abs, phi_re, phi_im, target]`.
pub fn read_curve(path: &Path) -> Result<Vec<[f64; 5]>, CliError> {
    read_csv(path, "dk_rad_per_m,phi_abs_m,phi_re_m,phi_im_m,target_m")
}

/// Writes the JSA grid as `omega_a_rad_s,omega_b_rad_s,re,im`, row-major
/// in ω_a.
pub fn write_jsa_csv(path: &Path, grid: &JsaGrid) -> Result<(), CliError> {
    let file = fs::File::create(path).map_err(|e| CliError::io(path, e))?;
    let mut out = BufWriter::new(file);
    out.write_all(b"omega_a_rad_s,omega_b_rad_s,re,im\n")
        .map_err(|e| CliError::io(path, e))?;
    let amp = grid.amplitude();
    for (i, &omega_a) in grid.omega_a().iter().enumerate() {
        for (j, &omega_b) in grid.omega_b().iter().enumerate() {
            let v = amp[(i, j)];
            let line = format!("{omega_a},{omega_b},{},{}\n", v.re, v.im);
            out.write_all(line.as_bytes())
                .map_err(|e| CliError::io(path, e))?;
        }
    }
    out.flush().map_err(|e| CliError::io(path, e))
}

/// Reads a JSA CSV back into rows of `[omega_a, omega_b, re, im]`.
pub fn read_jsa_csv(path: &Path) -> Result<Vec<[f64; 4]>, CliError> {
    read_csv(path, "omega_a_rad_s,omega_b_rad_s,re,im")
}

/// Writes the Schmidt coefficients as `k,b_k`, k counted from 1 in
/// descending coefficient order.
pub fn write_schmidt_csv(path: &Path, b: &[f64]) -> Result<(), CliError> {
    let mut text = String::from("k,b_k\n");
    for (index, value) in b.iter().enumerate() {
        let _ = writeln!(text, "{},{value}", index + 1);
    }
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

/// Reads a Schmidt CSV back into `(k, b_k)` rows.
pub fn read_schmidt_csv(path: &Path) -> Result<Vec<(usize, f64)>, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let mut lines = text.lines();
    match lines.next() {
        Some("k,b_k") => {}
        other => {
            return Err(CliError::invalid(
                path,
                format!("expected header \"k,b_k\", got {other:?}"),
            ));
        }
    }
    let mut rows = Vec::new();
    for (index, line) in lines.enumerate() {
        let parse = || -> Option<(usize, f64)> {
            let (k, b) = line.split_once(',')?;
            Some((k.parse().ok()?, b.parse().ok()?))
        };
        rows.push(parse().ok_or_else(|| {
            CliError::invalid(path, format!("line {}: bad row \"{line}\"", index + 2))
        })?);
    }
    Ok(rows)
}

/// Serializes a value as pretty JSON with a trailing newline.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let file = fs::File::create(path).map_err(|e| CliError::io(path, e))?;
    let mut out = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut out, value).map_err(|e| CliError::Json {
        path: path.to_owned(),
        source: e,
    })?;
    out.write_all(b"\n").map_err(|e| CliError::io(path, e))?;
    out.flush().map_err(|e| CliError::io(path, e))
}

fn read_csv<const W: usize>(path: &Path, header: &str) -> Result<Vec<[f64; W]>, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let mut lines = text.lines();
    if lines.next() != Some(header) {
        return Err(CliError::invalid(
            path,
            format!("expected header \"{header}\""),
        ));
    }
    let mut rows = Vec::new();
    for (index, line) in lines.enumerate() {
        let mut row = [0.0; W];
        let mut fields = line.split(',');
        for slot in &mut row {
            *slot = fields
                .next()
                .and_then(|f| f.parse().ok())
                .ok_or_else(|| {
                    CliError::invalid(
                        path,
                        format!("line {}: bad row \"{line}\"", index + 2),
                    )
                })?;
        }
        if fields.next().is_some() {
            return Err(CliError::invalid(
                path,
                format!("line {}: too many fields in \"{line}\"", index + 2),
            ));
        }
        rows.push(row);
    }
    Ok(rows)
}
