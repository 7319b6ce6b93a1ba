//! Design engine for quasi-phase-matched nonlinear crystals.
//!
//! A poled crystal is a row of `N` fixed-width domains whose nonlinearity
//! is flipped domain by domain (orientations ±1). Its phase-matching
//! function is the Fourier-like sum of the domain contributions evaluated
//! at the phase mismatch Δk; shaping that function shapes the joint
//! spectrum of photon pairs the crystal produces. This crate provides the
//! pieces of that chain:
//!
//! - [`dispersion`]: Sellmeier refractive indices, wave vectors, group
//!   slopes, phase mismatch, and first-order poling periods;
//! - [`phasematch`]: domain grids, the exact domain-sum phase-matching
//!   function and its periodic sinc approximation, target profiles, and the
//!   optimization cost with O(M) single-flip updates;
//! - [`annealer`]: simulated annealing over domain orientations with a
//!   deterministic final sweep and multi-restart orchestration;
//! - [`jsa`]: joint spectral amplitudes, Schmidt decomposition, heralded
//!   purity and entanglement entropy.
//!
//! The crate is `no_std`-compatible (with `alloc`); the default `std`
//! feature enables faster float intrinsics and parallel restarts.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod annealer;
pub mod dispersion;
pub mod jsa;
pub mod math;
pub mod phasematch;

pub use annealer::{
    accept_probability, anneal, anneal_multi, anneal_single_with_progress, anneal_with_progress,
    heat, restart_seed, sweep_polish, AnnealError, AnnealParams, AnnealResult, InitialSpec,
    MultiResult, PolishResult, RunSummary, RNG_ALGORITHM,
};
pub use num_complex::Complex64;
pub use dispersion::{
    AxisDispersion, DispersionError, DispersionModel, Formula, Mode, ModeAxes, SPEED_OF_LIGHT,
};
pub use jsa::{
    build_jsa, centered_axis, gaussian_pmf_purity, optimize_target_width, pump_envelope,
    schmidt_decompose, schmidt_decompose_full, schmidt_metrics, wavelength_bandwidth_to_omega,
    JsaError, JsaGrid, JsaGridParams, PumpSpec, SchmidtMetrics, SchmidtModes, SchmidtResult,
    WidthOptimum,
};
pub use phasematch::{
    cost, periodic_pmf_analytic, suggest_parameters, CostCache, CostMode, DomainConfig,
    PhasematchError, SketchShape, SuggestedParameters, TargetFunction, TargetShape, TargetSketch,
};
