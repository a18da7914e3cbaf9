//! # qig-core
//!
//! A qubit quantum-information-geometry toolkit: spin tomography, monotone
//! quantum metrics in canonical polar form, numerical certification and
//! falsification of operator monotonicity, and the scheme equation relating
//! two metrics through a change of tomographic map.
//!
//! The crate is organized around five layers:
//!
//! - [`qubit`] — density matrices, Bloch/polar parametrization, rotated Pauli
//!   triads, spectral decomposition with a deterministic gauge, tangent
//!   vectors, and CPTP channels;
//! - [`tomography`] — quorums, tomograms, Bloch reconstruction, and spectral
//!   scheme maps w -> w~;
//! - [`geometry`] — divergences, Fisher tensors, quantum metrics, the metric
//!   superoperator, and the conformal pullback machinery;
//! - [`monotone`] — the Petz-function catalog plus upper-half-plane scans and
//!   randomized matrix/channel monotonicity tests;
//! - [`ode`] — the first-order second-degree scheme equation, its separable
//!   power-law family, and solution verification.
//!
//! Everything is a pure function over immutable values; randomized routines
//! take explicit seeds and derive per-sample substreams, so results do not
//! depend on scheduling.

pub mod error;
pub mod geometry;
pub mod monotone;
pub mod numeric;
pub mod ode;
pub mod petz;
pub mod qubit;
pub mod tomography;
pub mod verify;

pub use error::{Error, Result};
pub use geometry::{
    classical_tsallis_divergence, cm_metric_value, conformal_factor, divide_conformal,
    extract_petz_function, fisher_from_divergence, fisher_tomographic_tensor, parse_metric_spec,
    petz_metric, pullback_metric, tomographic_tensor, tsallis_metric, von_neumann_metric,
    DivergenceSpec, MetricCoeffs,
};
pub use monotone::{
    loewner_scan, matrix_monotonicity_test, metric_monotonicity_test, MonotonicityReport, Region,
    Verdict, Witness,
};
pub use ode::{
    ode_rhs, solve_ode, solve_ode_with, solve_separable_power, verify_solution, OdeOptions,
    OdePoint, OdeSolution, OdeSource, VerificationRecord,
};
pub use petz::{symmetry_residual, PetzFunction};
pub use qubit::{
    density_from_bloch, random_channel, rotated_pauli_basis, spectral_decompose, BlochVector,
    Channel, QubitDensity, TangentVector, UnitaryFrame,
};
pub use tomography::{
    apply_spectral_map, bloch_from_tensor, exponential_scheme, rotated_quorum,
    scheme_from_matrix_function, standard_quorum, tomogram, Quorum, SpectralMap, Tomogram,
};
