//! Spectral stability toolkit for compressive boundary layers of the
//! isentropic compressible Navier–Stokes equations.
//!
//! The crate computes stationary boundary-layer profiles (inflow and outflow),
//! evaluates the Evans function of the linearized eigenvalue problem by
//! one-sided shooting with analytically continued eigenbases, and counts
//! unstable eigenvalues via winding numbers over semicircular contours in the
//! right half-plane.
//!
//! Module map:
//! - [`profile`]: layer parameters and the heteroclinic profile solver;
//! - [`ode`]: the adaptive Runge–Kutta integrator used throughout;
//! - [`eigen`]: coefficient matrices, asymptotic modes, analytic continuation
//!   of eigenvectors (Kato frames);
//! - [`evans`]: the four Evans-function variants via one-sided shooting;
//! - [`contour`]: spectral contours, winding numbers, high-frequency bounds;
//! - [`stability`]: real-axis scans, stability indices, strong-layer
//!   comparisons;
//! - [`harness`]: parameter sweeps, convergence studies, CSV/SVG export.

pub mod contour;
pub mod eigen;
pub mod evans;
pub mod harness;
pub mod ode;
pub mod profile;
pub mod stability;

use thiserror::Error as ThisError;

/// Unified error type for the whole crate.
#[derive(Debug, ThisError)]
pub enum Error {
    /// Invalid parameters or preconditions.
    #[error("domain error: {0}")]
    Domain(String),
    /// The ODE integrator failed to advance.
    #[error("integration error: {0}")]
    Integration(String),
    /// Consistent splitting of asymptotic modes failed or was ambiguous.
    #[error("mode splitting error: {0}")]
    Splitting(String),
    /// Eigenvalue collision within the guard distance.
    #[error("eigenvalue collision: {0}")]
    Collision(String),
    /// A solution component exceeded the overflow guard.
    #[error("numerical overflow: {0}")]
    Overflow(String),
    /// The Evans function is too close to zero on a contour node.
    #[error("near-zero Evans value: {0}")]
    NearZero(String),
    /// Adaptive refinement hit its depth or point cap.
    #[error("refinement cap exceeded: {0}")]
    RefinementCap(String),
    /// A pairing or normalization degenerated.
    #[error("degenerate normalization: {0}")]
    Degenerate(String),
    /// Configuration file or CLI parameter problem.
    #[error("config error: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Whether this error reflects bad input rather than a numerical failure.
    pub fn is_config(&self) -> bool {
        matches!(self, Error::Config(_) | Error::Domain(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub use contour::{hf_bound, semicircle, winding_number, Contour, Edge, EdgeKind, WindingReport};
pub use eigen::{
    asymptotic_modes, asymptotic_matrix, coeff_matrix, kato_continue, limiting_adjoint_direction,
    limiting_plus_eigenvalues, scalar_f, scalar_h, C64, CoeffKind, CoeffMatrix, EndMode, EndModes,
    FramePath, KatoFrame, M3, MatrixEnd, ModeFamily, ModeSelect, V3,
};
pub use evans::{
    boundary_data, boundary_mismatch, evans_inflow, evans_limit, evans_outflow, shock_correction,
    shoot_adjoint_inflow, shoot_unstable_outflow, BoundaryData, EvansEvaluator, EvansSample,
    ShotConfig, Variant,
};
pub use harness::{
    convergence_study, emit_plot, needs_indent, run_sweep, ConvergenceConfig, ConvergenceStudy,
    PlotSeries, Sweep, SweepConfig, SweepRecord, SweepStatus,
};
pub use profile::{
    derive_constants, limiting_profile, profile_rhs, solve_profile, LayerParams, Profile, Side,
};
pub use stability::{limit_comparison, real_axis_scan, stability_index, vstar, LimitComparison, RealAxisScan};
