//! Domain grids, phase-matching functions, target profiles, and the
//! optimization cost.
//!
//! A crystal is `N` equal-width domains with orientations s_n ∈ {−1, +1}.
//! With domain width l_c and origins z_n = (n − ½)·l_c, its raw
//! phase-matching function is
//!
//! ```text
//! Φ_raw(Δk) = χ₀ · l_c · sinc(Δk·l_c/2) · Σ_n s_n · exp(−i·Δk·z_n)
//! ```
//!
//! which carries units of meters (domain width times a dimensionless sum).
//! A periodically poled crystal of the same length peaks at 2·N·l_c/π, the
//! natural height scale for targets. The distance between a configuration
//! and a sampled target profile is the sum of per-sample deviations; a
//! [`CostCache`] maintains the per-sample domain sums so that the cost of a
//! single-domain flip costs O(M) instead of O(N·M).

use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;
use rand::Rng;

use crate::math;

const TWO_PI: f64 = core::f64::consts::TAU;
const PI: f64 = core::f64::consts::PI;

/// Accepted incremental updates between from-scratch rebuilds of a
/// [`CostCache`]; bounds floating-point drift of the cached sums.
const CACHE_REFRESH_INTERVAL: u32 = 10_000;

/// How a configuration is scored against a target; see [`cost`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CostMode {
    /// Compare |Φ_raw| against the (nonnegative) target. Default: a perfect
    /// periodic crystal has a purely imaginary raw sum at its peak, so
    /// comparing magnitudes is what makes nonnegative targets attainable.
    Modulus,
    /// Compare the complex value e^{i·Δk·L/2}·Φ_raw — phase-referenced to
    /// the crystal center, which makes a symmetric grating real — against
    /// the real target. Stricter; kept for experimentation.
    Complex,
}

impl CostMode {
    #[must_use]
    pub fn id(self) -> &'static str {
        match self {
            CostMode::Modulus => "modulus",
            CostMode::Complex => "complex",
        }
    }

    #[must_use]
    pub fn from_id(id: &str) -> Option<Self> {
        match id {
            "modulus" => Some(CostMode::Modulus),
            "complex" => Some(CostMode::Complex),
            _ => None,
        }
    }
}

/// Errors from configuration, target, and cache construction.
#[derive(Clone, Debug, PartialEq)]
pub enum PhasematchError {
    EmptyDomains,
    /// An orientation entry was neither +1 nor −1.
    BadOrientation { index: usize },
    NonPositiveDomainWidth,
    NonPositiveScale,
    /// Target range with a ≥ b or a non-finite bound.
    BadRange { a: f64, b: f64 },
    /// Fewer than two target samples.
    TooFewSamples { got: usize },
    NonPositiveHeight,
    NonPositiveShapeWidth,
    /// Custom target abscissas must increase strictly.
    CustomPointsUnsorted { index: usize },
    /// Custom target values must be ≥ 0 and finite.
    CustomBadValue { index: usize },
    CustomTooFewPoints,
    DomainIndexOutOfRange { index: usize, n_domains: usize },
    /// A peak position that must be strictly positive was not.
    NonPositivePeak,
}

impl fmt::Display for PhasematchError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PhasematchError::EmptyDomains => write!(f, "a crystal needs at least one domain"),
            PhasematchError::BadOrientation { index } => {
                write!(f, "orientation at index {index} is not +1 or -1")
            }
            PhasematchError::NonPositiveDomainWidth => {
                write!(f, "domain width must be strictly positive")
            }
            PhasematchError::NonPositiveScale => {
                write!(f, "nonlinearity scale must be strictly positive")
            }
            PhasematchError::BadRange { a, b } => {
                write!(f, "target range [{a}, {b}] is not an increasing finite interval")
            }
            PhasematchError::TooFewSamples { got } => {
                write!(f, "target needs at least 2 samples, got {got}")
            }
            PhasematchError::NonPositiveHeight => {
                write!(f, "target height must be strictly positive")
            }
            PhasematchError::NonPositiveShapeWidth => {
                write!(f, "target width parameter must be strictly positive")
            }
            PhasematchError::CustomPointsUnsorted { index } => write!(
                f,
                "custom target abscissas must increase strictly (violated at index {index})"
            ),
            PhasematchError::CustomBadValue { index } => write!(
                f,
                "custom target value at index {index} must be finite and nonnegative"
            ),
            PhasematchError::CustomTooFewPoints => {
                write!(f, "custom target needs at least 2 points")
            }
            PhasematchError::DomainIndexOutOfRange { index, n_domains } => {
                write!(f, "domain index {index} out of range for {n_domains} domains")
            }
            PhasematchError::NonPositivePeak => {
                write!(f, "peak position must be strictly positive")
            }
        }
    }
}

impl core::error::Error for PhasematchError {}

/// A poling configuration: `N` domains of width `l_c` with orientations ±1.
///
/// Domain `i` (0-based) covers `[i·l_c, (i+1)·l_c)` and has origin
/// z_i = (i + ½)·l_c. The crystal length is L = N·l_c.
#[derive(Clone, Debug, PartialEq)]
pub struct DomainConfig {
    l_c: f64,
    chi0: f64,
    s: Vec<i8>,
}

impl DomainConfig {
    /// Builds a configuration from explicit orientations.
    pub fn new(l_c: f64, chi0: f64, s: Vec<i8>) -> Result<Self, PhasematchError> {
        if s.is_empty() {
            return Err(PhasematchError::EmptyDomains);
        }
        if !(l_c > 0.0 && l_c.is_finite()) {
            return Err(PhasematchError::NonPositiveDomainWidth);
        }
        if !(chi0 > 0.0 && chi0.is_finite()) {
            return Err(PhasematchError::NonPositiveScale);
        }
        if let Some(index) = s.iter().position(|&v| v != 1 && v != -1) {
            return Err(PhasematchError::BadOrientation { index });
        }
        Ok(Self { l_c, chi0, s })
    }

    /// Periodically poled configuration: orientations alternate starting
    /// with −1, giving grating period Λ = 2·l_c.
    pub fn periodic(n_domains: usize, l_c: f64) -> Result<Self, PhasematchError> {
        let s = (0..n_domains)
            .map(|i| if i % 2 == 0 { -1 } else { 1 })
            .collect();
        Self::new(l_c, 1.0, s)
    }

    /// Uniformly random orientations from `rng`.
    pub fn random<R: Rng + ?Sized>(
        n_domains: usize,
        l_c: f64,
        rng: &mut R,
    ) -> Result<Self, PhasematchError> {
        let s = (0..n_domains)
            .map(|_| if rng.random::<bool>() { 1 } else { -1 })
            .collect();
        Self::new(l_c, 1.0, s)
    }

    #[must_use]
    pub fn n_domains(&self) -> usize {
        self.s.len()
    }

    /// Domain width l_c (m).
    #[must_use]
    pub fn l_c(&self) -> f64 {
        self.l_c
    }

    /// Nonlinearity scale χ₀ (dimensionless placeholder for the coupling).
    #[must_use]
    pub fn chi0(&self) -> f64 {
        self.chi0
    }

    /// Crystal length L = N·l_c (m).
    #[must_use]
    pub fn length(&self) -> f64 {
        self.s.len() as f64 * self.l_c
    }

    #[must_use]
    pub fn orientations(&self) -> &[i8] {
        &self.s
    }

    /// Origin z_i = (i + ½)·l_c of 0-based domain `i` (m).
    #[must_use]
    pub fn domain_origin(&self, index: usize) -> f64 {
        (index as f64 + 0.5) * self.l_c
    }

    /// Flips the orientation of one domain in place.
    pub fn flip(&mut self, index: usize) -> Result<(), PhasematchError> {
        let n_domains = self.s.len();
        let v = self
            .s
            .get_mut(index)
            .ok_or(PhasematchError::DomainIndexOutOfRange { index, n_domains })?;
        *v = -*v;
        Ok(())
    }

    /// Raw phase-matching function Φ_raw(Δk) (complex, units m).
    ///
    /// |Φ_raw| ≤ χ₀·N·l_c everywhere (triangle inequality with |sinc| ≤ 1).
    /// The domain phasors are advanced by a multiplicative recurrence whose
    /// rounding error grows like N·ε — negligible against the tolerances
    /// used anywhere in this crate, and exact at Δk = 0.
    #[must_use]
    pub fn evaluate_pmf(&self, dk: f64) -> Complex64 {
        let envelope = self.chi0 * self.l_c * math::sinc(0.5 * dk * self.l_c);
        let (sin_half, cos_half) = math::sin_cos(-0.5 * dk * self.l_c);
        let mut phasor = Complex64::new(cos_half, sin_half);
        let step = Complex64::new(
            cos_half * cos_half - sin_half * sin_half,
            2.0 * sin_half * cos_half,
        );
        let mut sum = Complex64::new(0.0, 0.0);
        for &sn in &self.s {
            if sn > 0 {
                sum += phasor;
            } else {
                sum -= phasor;
            }
            phasor *= step;
        }
        sum * envelope
    }

    /// Peak-normalized phase-matching value: Φ_raw divided by the
    /// first-order peak 2·N·l_c/π of a periodic crystal of the same
    /// length, so a periodic grating has unit peak magnitude.
    #[must_use]
    pub fn evaluate_pmf_normalized(&self, dk: f64) -> Complex64 {
        self.evaluate_pmf(dk) / (2.0 * self.chi0 * self.length() / PI)
    }

    /// FNV-1a digest over the orientations and geometry; identifies a
    /// configuration in output provenance.
    #[must_use]
    pub fn digest(&self) -> u64 {
        let mut h: u64 = 0xCBF2_9CE4_8422_2325;
        let mut eat = |byte: u8| {
            h ^= u64::from(byte);
            h = h.wrapping_mul(0x0000_0100_0000_01B3);
        };
        for b in self.l_c.to_bits().to_le_bytes() {
            eat(b);
        }
        for b in self.chi0.to_bits().to_le_bytes() {
            eat(b);
        }
        for &sn in &self.s {
            eat(sn as u8);
        }
        h
    }
}

/// Periodic-poling sinc approximation: sinc((Δk − 2π/Λ)·L/2).
///
/// Approximates the peak-normalized phase-matching function of a
/// periodically poled crystal of length `length` and period
/// `lambda_period` near its first-order peak; both arguments must be
/// positive. Real-valued in [−0.2172…, 1], equal to 1 at Δk = 2π/Λ.
#[must_use]
pub fn periodic_pmf_analytic(dk: f64, lambda_period: f64, length: f64) -> f64 {
    math::sinc((dk - TWO_PI / lambda_period) * 0.5 * length)
}

/// Shape of a target phase-matching profile.
#[derive(Clone, Debug, PartialEq)]
pub enum TargetShape {
    /// H·exp(−(Δk−center)²/(2·width²)).
    Gaussian { center: f64, width: f64 },
    /// H·max(0, 1 − |Δk−center|/width).
    Triangle { center: f64, width: f64 },
    /// H on |Δk−center| ≤ width, else 0.
    Rectangle { center: f64, width: f64 },
    /// H times the linear interpolation of `(Δk, value)` pairs, clamped to
    /// 0 outside the covered interval. Abscissas must increase strictly;
    /// values must be ≥ 0.
    Custom { points: Vec<(f64, f64)> },
}

impl TargetShape {
    #[must_use]
    pub fn id(&self) -> &'static str {
        match self {
            TargetShape::Gaussian { .. } => "gaussian",
            TargetShape::Triangle { .. } => "triangle",
            TargetShape::Rectangle { .. } => "rectangle",
            TargetShape::Custom { .. } => "custom",
        }
    }
}

/// A real, nonnegative target profile sampled on `samples` uniform points
/// of `[a, b]`, both endpoints included. Heights are in meters, the same
/// units as Φ_raw.
#[derive(Clone, Debug, PartialEq)]
pub struct TargetFunction {
    shape: TargetShape,
    range: (f64, f64),
    samples: usize,
    height: f64,
    values: Vec<f64>,
}

impl TargetFunction {
    /// Builds and samples a target profile.
    pub fn build(
        shape: TargetShape,
        range: (f64, f64),
        samples: usize,
        height: f64,
    ) -> Result<Self, PhasematchError> {
        let (a, b) = range;
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(PhasematchError::BadRange { a, b });
        }
        if samples < 2 {
            return Err(PhasematchError::TooFewSamples { got: samples });
        }
        if !(height > 0.0 && height.is_finite()) {
            return Err(PhasematchError::NonPositiveHeight);
        }
        match &shape {
            TargetShape::Gaussian { width, .. }
            | TargetShape::Triangle { width, .. }
            | TargetShape::Rectangle { width, .. } => {
                if !(*width > 0.0 && width.is_finite()) {
                    return Err(PhasematchError::NonPositiveShapeWidth);
                }
            }
            TargetShape::Custom { points } => {
                if points.len() < 2 {
                    return Err(PhasematchError::CustomTooFewPoints);
                }
                for (i, pair) in points.windows(2).enumerate() {
                    if !math::is_positive(pair[1].0 - pair[0].0) {
                        return Err(PhasematchError::CustomPointsUnsorted { index: i + 1 });
                    }
                }
                if let Some(index) = points.iter().position(|p| !(p.1 >= 0.0 && p.1.is_finite()))
                {
                    return Err(PhasematchError::CustomBadValue { index });
                }
            }
        }
        let mut target = Self {
            shape,
            range,
            samples,
            height,
            values: Vec::new(),
        };
        target.values = (0..samples).map(|m| target.value_at(target.abscissa(m))).collect();
        Ok(target)
    }

    /// Analytic target value at an arbitrary Δk (m).
    #[must_use]
    pub fn value_at(&self, dk: f64) -> f64 {
        let h = self.height;
        match &self.shape {
            TargetShape::Gaussian { center, width } => {
                let u = (dk - center) / width;
                h * math::exp(-0.5 * u * u)
            }
            TargetShape::Triangle { center, width } => {
                let u = 1.0 - math::abs(dk - center) / width;
                if u > 0.0 {
                    h * u
                } else {
                    0.0
                }
            }
            TargetShape::Rectangle { center, width } => {
                if math::abs(dk - center) <= *width {
                    h
                } else {
                    0.0
                }
            }
            TargetShape::Custom { points } => {
                let first = points[0].0;
                let last = points[points.len() - 1].0;
                if dk < first || dk > last {
                    return 0.0;
                }
                let j = match points.binary_search_by(|p| p.0.partial_cmp(&dk).unwrap()) {
                    Ok(exact) => return h * points[exact].1,
                    Err(j) => j,
                };
                let (x0, v0) = points[j - 1];
                let (x1, v1) = points[j];
                let t = (dk - x0) / (x1 - x0);
                h * (v0 + t * (v1 - v0))
            }
        }
    }

    /// Sample abscissa Δk_m; `m` runs 0..samples with both endpoints of the
    /// range included.
    #[must_use]
    pub fn abscissa(&self, m: usize) -> f64 {
        let t = m as f64 / (self.samples - 1) as f64;
        self.range.0 * (1.0 - t) + self.range.1 * t
    }

    /// Precomputed values at the sample abscissas.
    #[must_use]
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[must_use]
    pub fn shape(&self) -> &TargetShape {
        &self.shape
    }

    #[must_use]
    pub fn range(&self) -> (f64, f64) {
        self.range
    }

    #[must_use]
    pub fn samples(&self) -> usize {
        self.samples
    }

    #[must_use]
    pub fn height(&self) -> f64 {
        self.height
    }

    /// Nominal sample spacing (b − a)/(M − 1).
    #[must_use]
    pub fn step(&self) -> f64 {
        (self.range.1 - self.range.0) / (self.samples - 1) as f64
    }
}

/// Distance d_s between a configuration's phase-matching function and a
/// target, summed over the target's samples (units m).
///
/// `Modulus` mode scores Σ_m | |Φ_raw(Δk_m)| − Φ_target(Δk_m) |; `Complex`
/// mode scores Σ_m | e^{i·Δk_m·L/2}·Φ_raw(Δk_m) − Φ_target(Δk_m) | with a
/// complex-valued difference. Zero iff the curves agree at every sample.
pub fn cost(
    config: &DomainConfig,
    target: &TargetFunction,
    mode: CostMode,
) -> Result<f64, PhasematchError> {
    Ok(CostCache::new(config.clone(), target, mode)?.cost())
}

/// Per-sample state making single-flip cost evaluation O(M).
///
/// Caches the complex domain sums S_m = Σ_n s_n·e^{−i·Δk_m·z_n} at every
/// target sample. Flipping domain n changes S_m by −2·s_n·e^{−i·Δk_m·z_n},
/// so a candidate cost needs one pass over the samples instead of a full
/// O(N·M) re-evaluation. The sums are rebuilt from scratch every
/// 10⁴ accepted flips to bound floating-point drift; after any number of
/// updates they stay within 1e−9 of a fresh build.
///
/// One cache per search thread: the cache owns its configuration and is
/// deliberately not shareable mid-search.
#[derive(Clone, Debug)]
pub struct CostCache {
    config: DomainConfig,
    mode: CostMode,
    /// First abscissa and nominal step of the sample grid.
    dk_first: f64,
    dk_step: f64,
    /// Envelope χ₀·l_c·sinc(Δk_m·l_c/2) per sample.
    envelope: Vec<f64>,
    /// Complex mode only: center-referencing phasor e^{i·Δk_m·L/2}.
    phase_ref: Vec<Complex64>,
    target_values: Vec<f64>,
    abscissas: Vec<f64>,
    sums: Vec<Complex64>,
    /// Reusable buffer for the updated sums of a committed flip.
    scratch: Vec<Complex64>,
    cost: f64,
    accepted_since_refresh: u32,
}

impl CostCache {
    /// Builds the cache, computing all domain sums from scratch.
    pub fn new(
        config: DomainConfig,
        target: &TargetFunction,
        mode: CostMode,
    ) -> Result<Self, PhasematchError> {
        let m = target.samples();
        let abscissas: Vec<f64> = (0..m).map(|i| target.abscissa(i)).collect();
        let envelope: Vec<f64> = abscissas
            .iter()
            .map(|&dk| config.chi0() * config.l_c() * math::sinc(0.5 * dk * config.l_c()))
            .collect();
        let phase_ref = match mode {
            CostMode::Modulus => Vec::new(),
            CostMode::Complex => {
                let half_length = 0.5 * config.length();
                abscissas
                    .iter()
                    .map(|&dk| {
                        let (s, c) = math::sin_cos(dk * half_length);
                        Complex64::new(c, s)
                    })
                    .collect()
            }
        };
        let mut cache = Self {
            config,
            mode,
            dk_first: abscissas[0],
            dk_step: target.step(),
            envelope,
            phase_ref,
            target_values: target.values().to_vec(),
            abscissas,
            sums: Vec::new(),
            scratch: Vec::new(),
            cost: 0.0,
            accepted_since_refresh: 0,
        };
        cache.rebuild();
        Ok(cache)
    }

    /// Current cost d_s (m).
    #[must_use]
    pub fn cost(&self) -> f64 {
        self.cost
    }

    #[must_use]
    pub fn config(&self) -> &DomainConfig {
        &self.config
    }

    /// Consumes the cache, returning the configuration it evolved.
    #[must_use]
    pub fn into_config(self) -> DomainConfig {
        self.config
    }

    fn sample_cost(&self, m: usize, sum: Complex64) -> f64 {
        let env = self.envelope[m];
        match self.mode {
            // scale the components before taking the modulus, in exactly the
            // order evaluate_pmf uses, so a target sampled from a
            // configuration's own curve costs exactly zero
            CostMode::Modulus => {
                math::abs(math::cmod(sum.re * env, sum.im * env) - self.target_values[m])
            }
            CostMode::Complex => {
                let v = self.phase_ref[m] * sum * env;
                math::cmod(v.re - self.target_values[m], v.im)
            }
        }
    }

    /// Recomputes every domain sum and the cost from the configuration.
    pub fn rebuild(&mut self) {
        let l_c = self.config.l_c();
        let s = self.config.orientations();
        self.sums.clear();
        self.sums.reserve(self.abscissas.len());
        let mut total = 0.0;
        for m in 0..self.abscissas.len() {
            let dk = self.abscissas[m];
            let (sin_half, cos_half) = math::sin_cos(-0.5 * dk * l_c);
            let mut phasor = Complex64::new(cos_half, sin_half);
            let step = Complex64::new(
                cos_half * cos_half - sin_half * sin_half,
                2.0 * sin_half * cos_half,
            );
            let mut sum = Complex64::new(0.0, 0.0);
            for &sn in s {
                if sn > 0 {
                    sum += phasor;
                } else {
                    sum -= phasor;
                }
                phasor *= step;
            }
            self.sums.push(sum);
            total += self.sample_cost(m, sum);
        }
        self.cost = total;
        self.accepted_since_refresh = 0;
    }

    /// Cost of the configuration with domain `index` flipped, in O(M)
    /// work, without modifying anything.
    pub fn candidate_cost(&self, index: usize) -> Result<f64, PhasematchError> {
        self.scan_flip(index, None)
    }

    /// Applies the flip of domain `index`: updates the configuration, the
    /// cached sums, and the cost. Returns the new cost. Flipping the same
    /// domain again restores the previous state (up to the documented
    /// floating-point drift bound).
    pub fn commit_flip(&mut self, index: usize) -> Result<f64, PhasematchError> {
        let mut updated = core::mem::take(&mut self.scratch);
        let new_cost = self.scan_flip(index, Some(&mut updated))?;
        core::mem::swap(&mut self.sums, &mut updated);
        self.scratch = updated;
        self.cost = new_cost;
        self.config.flip(index)?;
        self.accepted_since_refresh += 1;
        if self.accepted_since_refresh >= CACHE_REFRESH_INTERVAL {
            self.rebuild();
        }
        Ok(self.cost)
    }

    /// Shared single-pass flip evaluation. With `commit` the updated sums
    /// are collected into the provided buffer; either way the arithmetic is
    /// identical, so a committed flip lands on exactly the candidate cost
    /// it advertised.
    fn scan_flip(
        &self,
        index: usize,
        mut commit: Option<&mut Vec<Complex64>>,
    ) -> Result<f64, PhasematchError> {
        if let Some(out) = commit.as_deref_mut() {
            out.clear();
            out.reserve(self.sums.len());
        }
        let n_domains = self.config.n_domains();
        if index >= n_domains {
            return Err(PhasematchError::DomainIndexOutOfRange {
                index,
                n_domains,
            });
        }
        // flipping s_n changes S_m by -2*s_n*exp(-i*dk_m*z_n); walk the
        // samples with a phase recurrence in m (uniform dk grid)
        let z = self.config.domain_origin(index);
        let delta_scale = -2.0 * f64::from(self.config.orientations()[index]);
        let (sin0, cos0) = math::sin_cos(-self.dk_first * z);
        let mut phasor = Complex64::new(cos0, sin0);
        let (sin_s, cos_s) = math::sin_cos(-self.dk_step * z);
        let step = Complex64::new(cos_s, sin_s);
        let mut total = 0.0;
        for m in 0..self.sums.len() {
            let sum = self.sums[m] + phasor * delta_scale;
            total += self.sample_cost(m, sum);
            if let Some(out) = commit.as_deref_mut() {
                out.push(sum);
            }
            phasor *= step;
        }
        Ok(total)
    }
}

/// Shape family of a target sketch handed to [`suggest_parameters`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SketchShape {
    Gaussian,
    Triangle,
    Rectangle,
}

/// Minimal description of an intended target: where its peak sits (either
/// directly or as the midpoint of a range) and how wide it is.
#[derive(Clone, Debug)]
pub struct TargetSketch {
    pub shape: SketchShape,
    /// Peak position Δk_peak (rad/m); defaults to the range midpoint.
    pub dk_peak: Option<f64>,
    /// Optimization range [a, b] (rad/m), used for the peak when
    /// `dk_peak` is absent.
    pub range: Option<(f64, f64)>,
    /// Width parameter w (rad/m), with the same meaning as the
    /// corresponding [`TargetShape`].
    pub width: f64,
}

/// Crystal parameters recommended for a target sketch.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SuggestedParameters {
    /// Domain width l_c = π/Δk_peak (m).
    pub l_c: f64,
    /// Smallest even domain count whose crystal covers the target's
    /// spatial support.
    pub n_domains: usize,
    /// Largest reachable target height 2·N·l_c/π (m), the first-order
    /// peak of a periodic crystal of the same length.
    pub h_max: f64,
    /// Default design height 0.4·h_max (m).
    pub h_default: f64,
}

/// Recommends domain width, domain count, and height bounds for a target.
///
/// The domain width puts the first-order peak on the sketch peak:
/// l_c = π/Δk_peak. The crystal must be long enough to hold the target's
/// spatial (Fourier) support: for a Gaussian of width w the transform's
/// intensity profile has spatial deviation 1/(w·√2), and ±4 of those
/// deviations (99.99% of the mass) gives support 8/(w·√2); triangle and
/// rectangle use ±8/w for their transforms' first-lobe scale. N is the
/// smallest even integer with N·l_c at least that support.
pub fn suggest_parameters(sketch: &TargetSketch) -> Result<SuggestedParameters, PhasematchError> {
    let dk_peak = match (sketch.dk_peak, sketch.range) {
        (Some(peak), _) => peak,
        (None, Some((a, b))) => 0.5 * (a + b),
        (None, None) => return Err(PhasematchError::NonPositivePeak),
    };
    if !(dk_peak > 0.0 && dk_peak.is_finite()) {
        return Err(PhasematchError::NonPositivePeak);
    }
    if !(sketch.width > 0.0 && sketch.width.is_finite()) {
        return Err(PhasematchError::NonPositiveShapeWidth);
    }
    let l_c = PI / dk_peak;
    let support = match sketch.shape {
        SketchShape::Gaussian => 8.0 / (core::f64::consts::SQRT_2 * sketch.width),
        SketchShape::Triangle | SketchShape::Rectangle => 16.0 / sketch.width,
    };
    let mut n_domains = math::ceil(support / l_c) as usize;
    n_domains += n_domains % 2;
    n_domains = n_domains.max(2);
    let h_max = 2.0 * n_domains as f64 * l_c / PI;
    Ok(SuggestedParameters {
        l_c,
        n_domains,
        h_max,
        h_default: 0.4 * h_max,
    })
}
