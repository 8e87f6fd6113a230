//! Error type shared by all modules.

use thiserror::Error;

/// Errors surfaced by construction, validation, and solver routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("grid resolution too small: need nx >= 3 and ny >= 3, got ({nx}, {ny})")]
    ResolutionTooSmall { nx: usize, ny: usize },

    #[error("domain extent must be positive, got ({lx}, {ly})")]
    NonpositiveExtent { lx: f64, ly: f64 },

    #[error("weight anchor ({x}, {y}) lies in the closed domain")]
    AnchorOnClosure { x: f64, y: f64 },

    #[error("observation horizon too short: T = {t} must exceed T_min = {t_min}")]
    HorizonTooShort { t: f64, t_min: f64 },

    #[error("sigma = {sigma} must lie in (0, min_d) with min_d = {min_d}")]
    SigmaTooLarge { sigma: f64, min_d: f64 },

    #[error("beam needs at least 7 nodes, got {nodes}")]
    BeamTooShort { nodes: usize },

    #[error("beam/boundary node counts differ: {beam} vs {boundary}")]
    MismatchedNodeCounts { beam: usize, boundary: usize },

    #[error("beam operators need square cells: hx = {hx}, hy = {hy}")]
    NonuniformBeamSpacing { hx: f64, hy: f64 },

    #[error("shape mismatch: {context}")]
    ShapeMismatch { context: String },

    #[error("linear solver failed: {context}")]
    SolverFailure { context: String },

    #[error("growth guard tripped in backward branch: |y| = {norm:.3e} exceeds {bound:.3e}")]
    GrowthGuardTripped { norm: f64, bound: f64 },

    #[error("domain membership order must be 1, 2, or 3, got {order}")]
    InvalidOrder { order: usize },

    #[error("trajectory stride too coarse for trace extraction (stride {stride})")]
    StrideTooCoarse { stride: usize },

    #[error("tau = {tau} overflows the weight: cap is {cap}")]
    TauOverflow { tau: f64, cap: f64 },

    #[error("no tau values left in the fit window")]
    FitWindowEmpty,

    #[error("regularization weight must be nonnegative, got {alpha}")]
    NegativeAlpha { alpha: f64 },

    #[error("problem too large for dense assembly: {unknowns} interior unknowns (cap {cap})")]
    ScaleTooLarge { unknowns: usize, cap: usize },

    #[error("recovery diverged: residual grew on two consecutive iterations ({prev:.3e} -> {last:.3e})")]
    Divergence { prev: f64, last: f64 },

    #[error("invalid format: {context}")]
    Format { context: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
