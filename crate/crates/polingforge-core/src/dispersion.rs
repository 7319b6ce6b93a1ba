//! Refractive indices and phase-matching kinematics.
//!
//! A [`DispersionModel`] maps each crystal axis to an empirical index
//! formula n(λ) with a declared wavelength validity window, and assigns one
//! axis to each interacting mode: pump `p` and the two down-converted modes
//! `a` and `b`. Wave vectors, group slopes, the phase mismatch, and the
//! first-order quasi-phase-matching period all derive from n(λ).
//!
//! All operations are pure functions of an immutable model and may be used
//! concurrently without restriction.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::math;

/// Speed of light in vacuum (m/s).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

const TWO_PI: f64 = core::f64::consts::TAU;

/// Relative step of the central finite difference in
/// [`DispersionModel::group_slope`].
const GROUP_SLOPE_REL_STEP: f64 = 1e-6;

/// Number of points sampled per axis when checking n ≥ 1 at construction.
const VALIDITY_SAMPLES: usize = 33;

/// Index formula family for one crystal axis.
///
/// Coefficient layouts (wavelength λ in µm, angular frequency ω in rad/s):
///
/// - [`Formula::Constant`]: `[n]` — fixed index, for tests and vacuum-like
///   references.
/// - [`Formula::LinearOmega`]: `[n0, n1]` — n(ω) = n0 + n1·ω, a calibration
///   model with a trivial analytic group slope.
/// - [`Formula::SellmeierOffset`]: `[A, d, b1, l1, b2, l2, …]` —
///   n²(λ) = A + d·λ² + Σ_j b_j / (1 − l_j/λ²), the offset Sellmeier form
///   most published KTP fits use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Formula {
    Constant,
    LinearOmega,
    SellmeierOffset,
}

impl Formula {
    /// Stable identifier used by dispersion files.
    #[must_use]
    pub fn id(self) -> &'static str {
        match self {
            Formula::Constant => "constant",
            Formula::LinearOmega => "linear_omega",
            Formula::SellmeierOffset => "sellmeier_offset",
        }
    }

    /// Inverse of [`Formula::id`].
    #[must_use]
    pub fn from_id(id: &str) -> Option<Self> {
        match id {
            "constant" => Some(Formula::Constant),
            "linear_omega" => Some(Formula::LinearOmega),
            "sellmeier_offset" => Some(Formula::SellmeierOffset),
            _ => None,
        }
    }

    fn coefficients_ok(self, coefficients: &[f64]) -> bool {
        match self {
            Formula::Constant => coefficients.len() == 1,
            Formula::LinearOmega => coefficients.len() == 2,
            Formula::SellmeierOffset => {
                coefficients.len() >= 4 && coefficients.len().is_multiple_of(2)
            }
        }
    }
}

/// One axis's index formula plus the wavelength window it is trusted on.
#[derive(Clone, Debug, PartialEq)]
pub struct AxisDispersion {
    pub formula: Formula,
    pub coefficients: Vec<f64>,
    /// Inclusive validity window in µm; queries outside it are errors, not
    /// extrapolations.
    pub validity_um: (f64, f64),
}

impl AxisDispersion {
    /// Evaluates n(λ) without a window check; λ in µm.
    fn index_at_um(&self, lambda_um: f64) -> f64 {
        let c = &self.coefficients;
        match self.formula {
            Formula::Constant => c[0],
            Formula::LinearOmega => {
                let omega = TWO_PI * SPEED_OF_LIGHT / (lambda_um * 1e-6);
                c[0] + c[1] * omega
            }
            Formula::SellmeierOffset => {
                let l2 = lambda_um * lambda_um;
                let mut n2 = c[0] + c[1] * l2;
                for pair in c[2..].chunks_exact(2) {
                    n2 += pair[0] / (1.0 - pair[1] / l2);
                }
                math::sqrt(n2)
            }
        }
    }
}

/// Which declared axis each mode's polarization sees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModeAxes {
    pub p: String,
    pub a: String,
    pub b: String,
}

/// Interacting mode label: pump or one of the down-converted pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    P,
    A,
    B,
}

/// Per-axis refractive-index model with mode-to-axis assignment.
#[derive(Clone, Debug)]
pub struct DispersionModel {
    name: String,
    axes: BTreeMap<String, AxisDispersion>,
    mode_axes: ModeAxes,
}

/// Errors from model construction and evaluation.
#[derive(Clone, Debug, PartialEq)]
pub enum DispersionError {
    /// A queried wavelength fell outside an axis's validity window.
    OutOfValidity {
        axis: String,
        wavelength_um: f64,
        window_um: (f64, f64),
    },
    /// A mode was assigned to an axis that was never declared.
    UnknownAxis { axis: String },
    /// The model declared no axes at all.
    EmptyAxes,
    /// Coefficient count does not match the formula's layout.
    BadCoefficients { axis: String, got: usize },
    /// A validity window with lo ≥ hi or a nonpositive bound.
    BadValidityWindow { axis: String, window_um: (f64, f64) },
    /// The formula dips below n = 1 (or is not finite) inside its own
    /// declared window.
    IndexBelowUnity {
        axis: String,
        wavelength_um: f64,
        index: f64,
    },
    /// A frequency argument was not strictly positive.
    NonPositiveFrequency,
    /// Phase mismatch is not positive, so no first-order poling period
    /// exists for this frequency pair.
    NoFirstOrderPeriod { mismatch_rad_per_m: f64 },
}

impl fmt::Display for DispersionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DispersionError::OutOfValidity {
                axis,
                wavelength_um,
                window_um,
            } => write!(
                f,
                "wavelength {wavelength_um} um is outside the validity window \
                 [{}, {}] um of axis `{axis}`",
                window_um.0, window_um.1
            ),
            DispersionError::UnknownAxis { axis } => {
                write!(f, "axis `{axis}` is not declared by this model")
            }
            DispersionError::EmptyAxes => write!(f, "dispersion model declares no axes"),
            DispersionError::BadCoefficients { axis, got } => write!(
                f,
                "axis `{axis}` has {got} coefficients, which does not fit its formula"
            ),
            DispersionError::BadValidityWindow { axis, window_um } => write!(
                f,
                "axis `{axis}` has an invalid validity window [{}, {}] um",
                window_um.0, window_um.1
            ),
            DispersionError::IndexBelowUnity {
                axis,
                wavelength_um,
                index,
            } => write!(
                f,
                "axis `{axis}` yields n = {index} < 1 at {wavelength_um} um, \
                 inside its own validity window"
            ),
            DispersionError::NonPositiveFrequency => {
                write!(f, "angular frequency must be strictly positive")
            }
            DispersionError::NoFirstOrderPeriod { mismatch_rad_per_m } => write!(
                f,
                "phase mismatch {mismatch_rad_per_m} rad/m is not positive; \
                 no first-order quasi-phase-matching period exists"
            ),
        }
    }
}

impl core::error::Error for DispersionError {}

impl DispersionModel {
    /// Builds and validates a model.
    ///
    /// Checks that at least one axis is declared, that every coefficient
    /// list fits its formula, that validity windows are ordered and
    /// positive, that each mode's axis exists, and that n(λ) stays finite
    /// and ≥ 1 on a sample of each window.
    pub fn new(
        name: String,
        axes: BTreeMap<String, AxisDispersion>,
        mode_axes: ModeAxes,
    ) -> Result<Self, DispersionError> {
        if axes.is_empty() {
            return Err(DispersionError::EmptyAxes);
        }
        for (id, axis) in &axes {
            let (lo, hi) = axis.validity_um;
            if !(lo > 0.0 && lo < hi && hi.is_finite()) {
                return Err(DispersionError::BadValidityWindow {
                    axis: id.clone(),
                    window_um: axis.validity_um,
                });
            }
            if !axis.formula.coefficients_ok(&axis.coefficients) {
                return Err(DispersionError::BadCoefficients {
                    axis: id.clone(),
                    got: axis.coefficients.len(),
                });
            }
            for i in 0..VALIDITY_SAMPLES {
                let t = i as f64 / (VALIDITY_SAMPLES - 1) as f64;
                let lambda_um = lo * (1.0 - t) + hi * t;
                let n = axis.index_at_um(lambda_um);
                if !(n.is_finite() && n >= 1.0 - 1e-12) {
                    return Err(DispersionError::IndexBelowUnity {
                        axis: id.clone(),
                        wavelength_um: lambda_um,
                        index: n,
                    });
                }
            }
        }
        for axis in [&mode_axes.p, &mode_axes.a, &mode_axes.b] {
            if !axes.contains_key(axis) {
                return Err(DispersionError::UnknownAxis { axis: axis.clone() });
            }
        }
        Ok(Self {
            name,
            axes,
            mode_axes,
        })
    }

    /// Built-in KTP model for the type-II process used throughout this
    /// crate: pump and mode `a` polarized along `y`, mode `b` along `z`.
    ///
    /// Coefficients: z axis from Fradkin, Arie, Skliar, and Rosenman,
    /// Appl. Phys. Lett. 74, 914 (1999); y axis from König and Wong,
    /// Appl. Phys. Lett. 84, 1644 (2004). Room temperature. The same set
    /// ships as `data/ktp_fradkin_konig.json` for use via dispersion files.
    #[must_use]
    pub fn ktp_type_ii() -> Self {
        let mut axes = BTreeMap::new();
        axes.insert(
            String::from("y"),
            AxisDispersion {
                formula: Formula::SellmeierOffset,
                coefficients: alloc::vec![2.09930, -0.0138408, 0.922683, 0.0467695],
                validity_um: (0.40, 3.50),
            },
        );
        axes.insert(
            String::from("z"),
            AxisDispersion {
                formula: Formula::SellmeierOffset,
                coefficients: alloc::vec![
                    2.12725,
                    -0.00968956,
                    1.18431,
                    0.0514852,
                    0.6603,
                    100.00507
                ],
                validity_um: (0.43, 3.54),
            },
        );
        let mode_axes = ModeAxes {
            p: String::from("y"),
            a: String::from("y"),
            b: String::from("z"),
        };
        Self::new(String::from("ktp_fradkin_konig"), axes, mode_axes)
            .expect("built-in KTP coefficients are valid")
    }

    #[must_use]
    pub fn name(&self) -> &str {
        &self.name
    }

    /// Declared axes, ordered by id.
    pub fn axes(&self) -> impl Iterator<Item = (&str, &AxisDispersion)> {
        self.axes.iter().map(|(id, a)| (id.as_str(), a))
    }

    #[must_use]
    pub fn mode_axes(&self) -> &ModeAxes {
        &self.mode_axes
    }

    /// Axis id a mode's polarization sees.
    #[must_use]
    pub fn mode_axis(&self, mode: Mode) -> &str {
        match mode {
            Mode::P => &self.mode_axes.p,
            Mode::A => &self.mode_axes.a,
            Mode::B => &self.mode_axes.b,
        }
    }

    /// Refractive index of `axis` at vacuum wavelength `wavelength` (m).
    pub fn refractive_index(&self, axis: &str, wavelength: f64) -> Result<f64, DispersionError> {
        let ax = self
            .axes
            .get(axis)
            .ok_or_else(|| DispersionError::UnknownAxis {
                axis: String::from(axis),
            })?;
        let lambda_um = wavelength * 1e6;
        let (lo, hi) = ax.validity_um;
        if !(lambda_um >= lo && lambda_um <= hi) {
            return Err(DispersionError::OutOfValidity {
                axis: String::from(axis),
                wavelength_um: lambda_um,
                window_um: ax.validity_um,
            });
        }
        Ok(ax.index_at_um(lambda_um))
    }

    /// Wave vector k = n(ω)·ω/c (rad/m) of a mode at angular frequency ω
    /// (rad/s).
    pub fn wavevector(&self, mode: Mode, omega: f64) -> Result<f64, DispersionError> {
        if !math::is_positive(omega) {
            return Err(DispersionError::NonPositiveFrequency);
        }
        let wavelength = TWO_PI * SPEED_OF_LIGHT / omega;
        let n = self.refractive_index(self.mode_axis(mode), wavelength)?;
        Ok(n * omega / SPEED_OF_LIGHT)
    }

    /// Group slope k′ = ∂k/∂ω (s/m) of a mode at ω (rad/s), by central
    /// finite difference with relative step 1e−6.
    pub fn group_slope(&self, mode: Mode, omega: f64) -> Result<f64, DispersionError> {
        if !math::is_positive(omega) {
            return Err(DispersionError::NonPositiveFrequency);
        }
        let step = GROUP_SLOPE_REL_STEP * omega;
        let hi = self.wavevector(mode, omega + step)?;
        let lo = self.wavevector(mode, omega - step)?;
        Ok((hi - lo) / (2.0 * step))
    }

    /// Phase mismatch Δk(ω_a, ω_b) = k_a(ω_a) + k_b(ω_b) − k_p(ω_a+ω_b)
    /// in rad/m.
    ///
    /// The sign convention is chosen so that Δk is positive for
    /// normal-dispersion down-conversion (the daughter momenta exceed the
    /// pump's), which makes the first-order poling period Λ = 2π/Δk
    /// directly meaningful. Magnitude-level quantities are unaffected by
    /// the choice; only the overall phase of the complex phase-matching
    /// function would flip.
    pub fn phase_mismatch(&self, omega_a: f64, omega_b: f64) -> Result<f64, DispersionError> {
        let ka = self.wavevector(Mode::A, omega_a)?;
        let kb = self.wavevector(Mode::B, omega_b)?;
        let kp = self.wavevector(Mode::P, omega_a + omega_b)?;
        Ok(ka + kb - kp)
    }

    /// Group-velocity-matching residual k′_p − (k′_a + k′_b)/2 (s/m) for a
    /// pump at vacuum wavelength `lambda_p` (m) with degenerate daughters.
    ///
    /// Zero means the phase-matching function runs exactly perpendicular to
    /// the pump ridge of the joint spectrum.
    pub fn gvm_residual(&self, lambda_p: f64) -> Result<f64, DispersionError> {
        if !math::is_positive(lambda_p) {
            return Err(DispersionError::NonPositiveFrequency);
        }
        let omega_p = TWO_PI * SPEED_OF_LIGHT / lambda_p;
        let half = 0.5 * omega_p;
        let kp = self.group_slope(Mode::P, omega_p)?;
        let ka = self.group_slope(Mode::A, half)?;
        let kb = self.group_slope(Mode::B, half)?;
        Ok(kp - 0.5 * (ka + kb))
    }

    /// First-order quasi-phase-matching period Λ = 2π/Δk(ω_a, ω_b) (m).
    ///
    /// Errors when the mismatch is not positive, in which case no
    /// first-order grating can compensate it.
    pub fn first_order_period(&self, omega_a: f64, omega_b: f64) -> Result<f64, DispersionError> {
        let dk = self.phase_mismatch(omega_a, omega_b)?;
        if !math::is_positive(dk) {
            return Err(DispersionError::NoFirstOrderPeriod {
                mismatch_rad_per_m: dk,
            });
        }
        Ok(TWO_PI / dk)
    }
}
