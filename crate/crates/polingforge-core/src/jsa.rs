//! Joint spectral amplitude construction and Schmidt analysis.
//!
//! The two-photon state produced by a pumped crystal has joint spectral
//! amplitude f(ω_a, ω_b) = α(ω_a + ω_b) · Φ(Δk(ω_a, ω_b)): a Gaussian
//! pump envelope α multiplied by the crystal's phase-matching function Φ
//! evaluated at the mismatch the dispersion model assigns to that
//! frequency pair. Discretized on a uniform G×G grid centered at the
//! degenerate frequency ω_p0/2, the singular values of the amplitude
//! matrix are the Schmidt coefficients b_k (rescaled to Σ b_k² = 1), from
//! which the heralded purity P = Σ b_k⁴ and the entanglement entropy
//! E = −Σ b_k² log₂ b_k² follow.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::dispersion::{DispersionError, DispersionModel, Mode, SPEED_OF_LIGHT};
use crate::math;
use crate::phasematch::{
    suggest_parameters, DomainConfig, PhasematchError, SketchShape, TargetSketch,
};

const TWO_PI: f64 = core::f64::consts::TAU;

/// FWHM of a Gaussian divided by its standard deviation: 2·√(2·ln 2).
const FWHM_PER_SIGMA: f64 = 2.354_820_045_030_949_3;

/// Errors from pump validation, grid construction, and decomposition.
#[derive(Clone, Debug, PartialEq)]
pub enum JsaError {
    /// A pump field that must be strictly positive and finite was not.
    BadPump { field: &'static str, value: f64 },
    /// Malformed grid geometry (too few points, non-uniform axis, …).
    BadGrid { why: &'static str },
    AllZeroAmplitude,
    EmptyCoefficients,
    /// A Schmidt coefficient was negative or non-finite.
    BadCoefficient { index: usize },
    /// The singular value decomposition did not converge.
    SvdFailed,
    /// Width bracket with lo ≥ hi or non-positive bounds.
    DegenerateBracket { lo: f64, hi: f64 },
    Dispersion(DispersionError),
    Phasematch(PhasematchError),
}

impl fmt::Display for JsaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            JsaError::BadPump { field, value } => {
                write!(f, "pump {field} = {value} must be strictly positive and finite")
            }
            JsaError::BadGrid { why } => write!(f, "bad JSA grid: {why}"),
            JsaError::AllZeroAmplitude => write!(f, "JSA amplitude is identically zero"),
            JsaError::EmptyCoefficients => write!(f, "no Schmidt coefficients given"),
            JsaError::BadCoefficient { index } => {
                write!(f, "Schmidt coefficient {index} must be finite and nonnegative")
            }
            JsaError::SvdFailed => write!(f, "singular value decomposition did not converge"),
            JsaError::DegenerateBracket { lo, hi } => {
                write!(f, "width bracket [{lo}, {hi}] is not a positive increasing interval")
            }
            JsaError::Dispersion(e) => write!(f, "{e}"),
            JsaError::Phasematch(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for JsaError {
    fn source(&self) -> Option<&(dyn core::error::Error + 'static)> {
        match self {
            JsaError::Dispersion(e) => Some(e),
            JsaError::Phasematch(e) => Some(e),
            _ => None,
        }
    }
}

impl From<DispersionError> for JsaError {
    fn from(e: DispersionError) -> Self {
        JsaError::Dispersion(e)
    }
}

impl From<PhasematchError> for JsaError {
    fn from(e: PhasematchError) -> Self {
        JsaError::Phasematch(e)
    }
}

/// Gaussian pump: central wavelength λ_p and bandwidth σ, both in meters.
///
/// σ is the full width at half maximum of the spectral *amplitude* in
/// wavelength. It is converted to an angular-frequency standard deviation
/// in two steps: the Jacobian 2πc/λ_p² maps wavelength width to frequency
/// width (see [`wavelength_bandwidth_to_omega`]), and dividing by
/// 2·√(2·ln 2) converts FWHM to standard deviation. With σ = 1 nm at
/// λ_p = 791 nm this gives σ_ω ≈ 1.278×10¹² rad/s.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PumpSpec {
    lambda_p: f64,
    sigma_lambda: f64,
}

impl PumpSpec {
    pub fn new(lambda_p: f64, sigma_lambda: f64) -> Result<Self, JsaError> {
        if !(lambda_p > 0.0 && lambda_p.is_finite()) {
            return Err(JsaError::BadPump {
                field: "lambda_p",
                value: lambda_p,
            });
        }
        if !(sigma_lambda > 0.0 && sigma_lambda.is_finite()) {
            return Err(JsaError::BadPump {
                field: "sigma",
                value: sigma_lambda,
            });
        }
        Ok(Self {
            lambda_p,
            sigma_lambda,
        })
    }

    /// Central wavelength λ_p (m).
    #[must_use]
    pub fn lambda_p(&self) -> f64 {
        self.lambda_p
    }

    /// Amplitude-FWHM bandwidth in wavelength (m).
    #[must_use]
    pub fn sigma_lambda(&self) -> f64 {
        self.sigma_lambda
    }

    /// Central angular frequency ω_p0 = 2πc/λ_p (rad/s).
    #[must_use]
    pub fn omega_p0(&self) -> f64 {
        TWO_PI * SPEED_OF_LIGHT / self.lambda_p
    }

    /// Amplitude standard deviation σ_ω (rad/s); see the type docs for the
    /// FWHM convention.
    #[must_use]
    pub fn sigma_omega(&self) -> f64 {
        wavelength_bandwidth_to_omega(self.sigma_lambda, self.lambda_p) / FWHM_PER_SIGMA
    }
}

/// Converts a small wavelength bandwidth at λ_p into an angular-frequency
/// bandwidth: |dω/dλ|·σ = 2πc·σ/λ_p². For σ = 1 nm at λ_p = 791 nm this
/// is ≈ 3.011×10¹² rad/s.
#[must_use]
pub fn wavelength_bandwidth_to_omega(sigma_lambda: f64, lambda_p: f64) -> f64 {
    TWO_PI * SPEED_OF_LIGHT * sigma_lambda / (lambda_p * lambda_p)
}

/// Pump spectral amplitude exp(−(ω − ω_p0)²/(2σ_ω²)); peak value 1.
#[must_use]
pub fn pump_envelope(omega: f64, pump: &PumpSpec) -> f64 {
    let u = (omega - pump.omega_p0()) / pump.sigma_omega();
    math::exp(-0.5 * u * u)
}

/// Grid geometry for [`build_jsa`]: G points per axis spanning
/// ±`extent_sigmas`·σ_ω around ω_p0/2.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JsaGridParams {
    pub g: usize,
    pub extent_sigmas: f64,
}

impl Default for JsaGridParams {
    fn default() -> Self {
        Self {
            g: 512,
            extent_sigmas: 4.0,
        }
    }
}

impl JsaGridParams {
    fn validate(&self) -> Result<(), JsaError> {
        if self.g < 2 {
            return Err(JsaError::BadGrid {
                why: "each axis needs at least 2 points",
            });
        }
        if !(self.extent_sigmas > 0.0 && self.extent_sigmas.is_finite()) {
            return Err(JsaError::BadGrid {
                why: "extent must be strictly positive",
            });
        }
        Ok(())
    }
}

/// A discretized JSA: uniform frequency axes and the L²-normalized complex
/// amplitude matrix (rows follow ω_a, columns ω_b).
#[derive(Clone, Debug)]
pub struct JsaGrid {
    omega_a: Vec<f64>,
    omega_b: Vec<f64>,
    d_omega_a: f64,
    d_omega_b: f64,
    amp: DMatrix<Complex64>,
    /// Provenance, present when built through [`build_jsa`].
    config_digest: Option<u64>,
    dispersion_name: Option<String>,
    pump: Option<PumpSpec>,
}

impl JsaGrid {
    /// Builds a grid by sampling `f(ω_a, ω_b)` over the given axes and
    /// normalizing so that Σ |f|²·δω_a·δω_b = 1.
    ///
    /// Both axes must be uniform and strictly increasing.
    pub fn from_fn<F: FnMut(f64, f64) -> Complex64>(
        omega_a: Vec<f64>,
        omega_b: Vec<f64>,
        mut f: F,
    ) -> Result<Self, JsaError> {
        let d_omega_a = axis_step(&omega_a)?;
        let d_omega_b = axis_step(&omega_b)?;
        let amp = DMatrix::from_fn(omega_a.len(), omega_b.len(), |i, j| {
            f(omega_a[i], omega_b[j])
        });
        let mut grid = Self {
            omega_a,
            omega_b,
            d_omega_a,
            d_omega_b,
            amp,
            config_digest: None,
            dispersion_name: None,
            pump: None,
        };
        grid.normalize()?;
        Ok(grid)
    }

    fn normalize(&mut self) -> Result<(), JsaError> {
        let mut norm2 = 0.0;
        for v in self.amp.iter() {
            norm2 += v.re * v.re + v.im * v.im;
        }
        norm2 *= self.d_omega_a * self.d_omega_b;
        if !norm2.is_finite() {
            return Err(JsaError::BadGrid {
                why: "amplitude is not finite",
            });
        }
        if norm2 == 0.0 {
            return Err(JsaError::AllZeroAmplitude);
        }
        let scale = 1.0 / math::sqrt(norm2);
        for v in self.amp.iter_mut() {
            *v *= scale;
        }
        Ok(())
    }

    #[must_use]
    pub fn omega_a(&self) -> &[f64] {
        &self.omega_a
    }

    #[must_use]
    pub fn omega_b(&self) -> &[f64] {
        &self.omega_b
    }

    /// Axis steps (δω_a, δω_b) in rad/s.
    #[must_use]
    pub fn steps(&self) -> (f64, f64) {
        (self.d_omega_a, self.d_omega_b)
    }

    /// Normalized amplitude matrix; rows follow ω_a, columns ω_b.
    #[must_use]
    pub fn amplitude(&self) -> &DMatrix<Complex64> {
        &self.amp
    }

    /// Digest of the crystal the grid was built from, when known.
    #[must_use]
    pub fn config_digest(&self) -> Option<u64> {
        self.config_digest
    }

    #[must_use]
    pub fn dispersion_name(&self) -> Option<&str> {
        self.dispersion_name.as_deref()
    }

    #[must_use]
    pub fn pump(&self) -> Option<&PumpSpec> {
        self.pump.as_ref()
    }

    /// Σ |f|²·δω_a·δω_b, equal to 1 after construction.
    #[must_use]
    pub fn l2_norm_squared(&self) -> f64 {
        let mut norm2 = 0.0;
        for v in self.amp.iter() {
            norm2 += v.re * v.re + v.im * v.im;
        }
        norm2 * self.d_omega_a * self.d_omega_b
    }

    /// The same state with the two photons' axes exchanged; Schmidt
    /// coefficients are unaffected.
    #[must_use]
    pub fn transposed(&self) -> Self {
        Self {
            omega_a: self.omega_b.clone(),
            omega_b: self.omega_a.clone(),
            d_omega_a: self.d_omega_b,
            d_omega_b: self.d_omega_a,
            amp: self.amp.transpose(),
            config_digest: self.config_digest,
            dispersion_name: self.dispersion_name.clone(),
            pump: self.pump,
        }
    }

    /// Hard spectral window: zeroes every cell whose phase mismatch lies
    /// outside `band` (rad/m) and renormalizes.
    ///
    /// Models an ideal filter keeping only the optimized mismatch band;
    /// out-of-band ripple from an annealed grating is discarded the way a
    /// spectral filter would discard it downstream.
    pub fn filtered_to_band(
        &self,
        model: &DispersionModel,
        band: (f64, f64),
    ) -> Result<Self, JsaError> {
        let (lo, hi) = band;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(JsaError::BadGrid {
                why: "filter band must be an increasing finite interval",
            });
        }
        let mut out = self.clone();
        for (i, &wa) in self.omega_a.iter().enumerate() {
            for (j, &wb) in self.omega_b.iter().enumerate() {
                let dk = model.phase_mismatch(wa, wb)?;
                if dk < lo || dk > hi {
                    out.amp[(i, j)] = Complex64::new(0.0, 0.0);
                }
            }
        }
        out.normalize()?;
        Ok(out)
    }
}

fn axis_step(axis: &[f64]) -> Result<f64, JsaError> {
    if axis.len() < 2 {
        return Err(JsaError::BadGrid {
            why: "each axis needs at least 2 points",
        });
    }
    let step = (axis[axis.len() - 1] - axis[0]) / (axis.len() - 1) as f64;
    if !(step > 0.0 && step.is_finite()) {
        return Err(JsaError::BadGrid {
            why: "axis must increase strictly",
        });
    }
    for pair in axis.windows(2) {
        if math::abs(pair[1] - pair[0] - step) > 1e-9 * step {
            return Err(JsaError::BadGrid {
                why: "axis must be uniform",
            });
        }
    }
    Ok(step)
}

/// Uniform axis of `g` points centered on `center`, spanning ±`half`.
#[must_use]
pub fn centered_axis(center: f64, half: f64, g: usize) -> Vec<f64> {
    let step = 2.0 * half / (g - 1) as f64;
    (0..g).map(|i| center - half + i as f64 * step).collect()
}

/// Builds the JSA of a crystal: f_ij = α(ω_a,i + ω_b,j) · Φ_raw(Δk_ij),
/// L²-normalized, on a G×G grid centered at ω_p0/2 spanning
/// ±extent·σ_ω per axis.
///
/// Since both axes share the same uniform spacing, every pump-dependent
/// quantity is a function of i + j alone; α and k_p are tabulated on the
/// 2G − 1 anti-diagonal values, and k_a, k_b on the axes, so the per-cell
/// work is one PMF evaluation.
pub fn build_jsa(
    config: &DomainConfig,
    model: &DispersionModel,
    pump: &PumpSpec,
    params: &JsaGridParams,
) -> Result<JsaGrid, JsaError> {
    params.validate()?;
    let g = params.g;
    let center = 0.5 * pump.omega_p0();
    let half = params.extent_sigmas * pump.sigma_omega();
    let axis = centered_axis(center, half, g);
    let step = axis_step(&axis)?;

    let k_a: Vec<f64> = axis
        .iter()
        .map(|&w| model.wavevector(Mode::A, w))
        .collect::<Result<_, _>>()?;
    let k_b: Vec<f64> = axis
        .iter()
        .map(|&w| model.wavevector(Mode::B, w))
        .collect::<Result<_, _>>()?;
    // ω_a,i + ω_b,j depends only on i + j: tabulate pump and k_p on the
    // 2G − 1 anti-diagonals
    let mut k_p = Vec::with_capacity(2 * g - 1);
    let mut alpha = Vec::with_capacity(2 * g - 1);
    let first_sum = 2.0 * (center - half);
    for t in 0..(2 * g - 1) {
        let w_sum = first_sum + t as f64 * step;
        k_p.push(model.wavevector(Mode::P, w_sum)?);
        alpha.push(pump_envelope(w_sum, pump));
    }

    let amp = DMatrix::from_fn(g, g, |i, j| {
        let t = i + j;
        let dk = k_a[i] + k_b[j] - k_p[t];
        config.evaluate_pmf(dk) * alpha[t]
    });

    let mut grid = JsaGrid {
        omega_a: axis.clone(),
        omega_b: axis,
        d_omega_a: step,
        d_omega_b: step,
        amp,
        config_digest: Some(config.digest()),
        dispersion_name: Some(String::from(model.name())),
        pump: Some(*pump),
    };
    grid.normalize()?;
    Ok(grid)
}

/// Schmidt modes of a decomposition, kept only when requested.
#[derive(Clone, Debug)]
pub struct SchmidtModes {
    /// Columns are the discretized u_k(ω_a), in coefficient order.
    pub u: DMatrix<Complex64>,
    /// Rows are the discretized v_k(ω_b)* (adjoint layout), in
    /// coefficient order.
    pub v_t: DMatrix<Complex64>,
    /// Matrix scale: the amplitude matrix equals u·diag(b·scale)·v_t.
    pub scale: f64,
}

/// Schmidt coefficients (descending, Σ b_k² = 1) with the derived purity
/// and entanglement entropy.
#[derive(Clone, Debug)]
pub struct SchmidtResult {
    pub b: Vec<f64>,
    /// Heralded purity P = Σ b_k⁴.
    pub purity: f64,
    /// Entanglement entropy E = −Σ b_k² log₂ b_k², in bits.
    pub entropy_bits: f64,
    pub modes: Option<SchmidtModes>,
}

/// Purity and entropy of a (renormalized) Schmidt coefficient list.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SchmidtMetrics {
    pub purity: f64,
    pub entropy_bits: f64,
}

/// Computes P = Σ b_k⁴ and E = −Σ b_k² log₂ b_k² from coefficients,
/// renormalizing Σ b_k² to 1 first (the input may be off by discretization
/// error). Zero coefficients contribute nothing to E.
pub fn schmidt_metrics(b: &[f64]) -> Result<SchmidtMetrics, JsaError> {
    if b.is_empty() {
        return Err(JsaError::EmptyCoefficients);
    }
    let mut sum2 = 0.0;
    for (index, &v) in b.iter().enumerate() {
        if !(v >= 0.0 && v.is_finite()) {
            return Err(JsaError::BadCoefficient { index });
        }
        sum2 += v * v;
    }
    if sum2 == 0.0 {
        return Err(JsaError::AllZeroAmplitude);
    }
    let mut purity = 0.0;
    let mut entropy = 0.0;
    for &v in b {
        let p = v * v / sum2;
        purity += p * p;
        if p > 0.0 {
            entropy -= p * math::log2(p);
        }
    }
    Ok(SchmidtMetrics {
        purity,
        entropy_bits: entropy,
    })
}

fn svd_internal(grid: &JsaGrid, with_modes: bool) -> Result<SchmidtResult, JsaError> {
    let svd = grid
        .amp
        .clone()
        .try_svd_unordered(with_modes, with_modes, f64::EPSILON, 0)
        .ok_or(JsaError::SvdFailed)?;
    let raw: Vec<f64> = svd.singular_values.iter().copied().collect();
    let mut order: Vec<usize> = (0..raw.len()).collect();
    order.sort_by(|&i, &j| raw[j].partial_cmp(&raw[i]).unwrap());

    let sum2: f64 = raw.iter().map(|s| s * s).sum();
    if sum2 == 0.0 {
        return Err(JsaError::AllZeroAmplitude);
    }
    let scale = math::sqrt(sum2);
    let b: Vec<f64> = order.iter().map(|&i| raw[i] / scale).collect();
    let metrics = schmidt_metrics(&b)?;

    let modes = if with_modes {
        let u_raw = svd.u.ok_or(JsaError::SvdFailed)?;
        let v_t_raw = svd.v_t.ok_or(JsaError::SvdFailed)?;
        let u = DMatrix::from_fn(u_raw.nrows(), order.len(), |r, k| u_raw[(r, order[k])]);
        let v_t = DMatrix::from_fn(order.len(), v_t_raw.ncols(), |k, c| v_t_raw[(order[k], c)]);
        Some(SchmidtModes { u, v_t, scale })
    } else {
        None
    };

    Ok(SchmidtResult {
        b,
        purity: metrics.purity,
        entropy_bits: metrics.entropy_bits,
        modes,
    })
}

/// Schmidt decomposition of a JSA grid: singular values rescaled to
/// Σ b_k² = 1, plus purity and entropy. Mode vectors are skipped; use
/// [`schmidt_decompose_full`] when they are needed.
pub fn schmidt_decompose(grid: &JsaGrid) -> Result<SchmidtResult, JsaError> {
    svd_internal(grid, false)
}

/// [`schmidt_decompose`] keeping the discretized Schmidt modes, for
/// reconstruction and mode inspection.
pub fn schmidt_decompose_full(grid: &JsaGrid) -> Result<SchmidtResult, JsaError> {
    svd_internal(grid, true)
}

/// Purity of an idealized design: the crystal's Φ is replaced by a
/// Gaussian of the given width (rad/m) centered on the degenerate phase
/// mismatch, and the resulting JSA is decomposed. This is the objective
/// [`optimize_target_width`] maximizes.
pub fn gaussian_pmf_purity(
    pump: &PumpSpec,
    model: &DispersionModel,
    width: f64,
    params: &JsaGridParams,
) -> Result<f64, JsaError> {
    if !(width > 0.0 && width.is_finite()) {
        return Err(JsaError::BadGrid {
            why: "PMF width must be strictly positive",
        });
    }
    params.validate()?;
    let g = params.g;
    let center = 0.5 * pump.omega_p0();
    let half = params.extent_sigmas * pump.sigma_omega();
    let axis = centered_axis(center, half, g);
    let step = axis_step(&axis)?;
    let dk0 = model.phase_mismatch(center, center)?;

    let k_a: Vec<f64> = axis
        .iter()
        .map(|&w| model.wavevector(Mode::A, w))
        .collect::<Result<_, _>>()?;
    let k_b: Vec<f64> = axis
        .iter()
        .map(|&w| model.wavevector(Mode::B, w))
        .collect::<Result<_, _>>()?;
    let mut k_p = Vec::with_capacity(2 * g - 1);
    let mut alpha = Vec::with_capacity(2 * g - 1);
    let first_sum = 2.0 * (center - half);
    for t in 0..(2 * g - 1) {
        let w_sum = first_sum + t as f64 * step;
        k_p.push(model.wavevector(Mode::P, w_sum)?);
        alpha.push(pump_envelope(w_sum, pump));
    }
    let grid = JsaGrid::from_fn(axis.clone(), axis, |wa, wb| {
        // recover indices from the uniform axis to reuse the tables
        let i = ((wa - (center - half)) / step + 0.5) as usize;
        let j = ((wb - (center - half)) / step + 0.5) as usize;
        let u = (k_a[i] + k_b[j] - k_p[i + j] - dk0) / width;
        Complex64::new(alpha[i + j] * math::exp(-0.5 * u * u), 0.0)
    })?;
    Ok(schmidt_decompose(&grid)?.purity)
}

/// Result of [`optimize_target_width`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WidthOptimum {
    /// Purity-maximizing Gaussian target width (rad/m).
    pub w_star: f64,
    /// Purity of the idealized design at `w_star`.
    pub purity: f64,
    /// Domain count recommended for this width at the given l_c (even,
    /// from the target's Fourier support).
    pub suggested_n: usize,
}

/// Golden-section search for the Gaussian target width that maximizes the
/// idealized-design purity; see [`gaussian_pmf_purity`].
///
/// The scan runs on a G=256 grid (±4σ_ω), converges the bracket to 1% of
/// the width, and converts the winner into a recommended domain count via
/// the Fourier-support heuristic of `suggest_parameters`.
pub fn optimize_target_width(
    pump: &PumpSpec,
    model: &DispersionModel,
    l_c: f64,
    bracket: (f64, f64),
) -> Result<WidthOptimum, JsaError> {
    let (mut lo, mut hi) = bracket;
    if !(lo > 0.0 && hi > lo && hi.is_finite()) {
        return Err(JsaError::DegenerateBracket { lo, hi });
    }
    if !(l_c > 0.0 && l_c.is_finite()) {
        return Err(JsaError::Phasematch(
            PhasematchError::NonPositiveDomainWidth,
        ));
    }
    let params = JsaGridParams {
        g: 256,
        extent_sigmas: 4.0,
    };
    let eval = |w: f64| gaussian_pmf_purity(pump, model, w, &params);

    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = eval(x1)?;
    let mut f2 = eval(x2)?;
    let mut best_w = if f1 >= f2 { x1 } else { x2 };
    let mut best_p = f1.max(f2);
    for _ in 0..60 {
        if (hi - lo) <= 0.01 * 0.5 * (hi + lo) {
            break;
        }
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = eval(x2)?;
            if f2 > best_p {
                best_p = f2;
                best_w = x2;
            }
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = eval(x1)?;
            if f1 > best_p {
                best_p = f1;
                best_w = x1;
            }
        }
    }

    let suggested = suggest_parameters(&TargetSketch {
        shape: SketchShape::Gaussian,
        dk_peak: Some(core::f64::consts::PI / l_c),
        range: None,
        width: best_w,
    })?;
    Ok(WidthOptimum {
        w_star: best_w,
        purity: best_p,
        suggested_n: suggested.n_domains,
    })
}
