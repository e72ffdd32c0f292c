use thiserror::Error;

/// Errors shared across the solver, integral and symbolic layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("monodromy constraint s1 - s2 + s3 + s1*s2*s3 = 0 violated (residual {residual:.3e})")]
    ConstraintViolation { residual: f64 },

    #[error("monodromy data does not belong to a supported solution class")]
    UnsupportedClass,

    #[error("operation requires class {expected} but solution is {found}")]
    ClassMismatch { expected: String, found: String },

    #[error("pole of the gamma function at {z}")]
    GammaPole { z: String },

    #[error("step size collapsed near x = {x:.6} (suspected pole, solution reclassified as singular)")]
    StepSizeCollapse { x: f64 },

    #[error("forward/backward solutions disagree by {mismatch:.3e} at x = {x:.3} (tolerance {tol:.3e})")]
    MatchingInconsistency { x: f64, mismatch: f64, tol: f64 },

    #[error("boundary-value iteration failed to converge ({detail})")]
    BvpNonConvergence { detail: String },

    #[error("x = {x:.3} lies inside the non-asymptotic zone (|x| >= {threshold:.3} required)")]
    NonAsymptoticRegime { x: f64, threshold: f64 },

    #[error("asymptotic expansion order {order} not implemented for this endpoint")]
    OrderUnavailable { order: usize },

    #[error("exact division by u failed: a density acquired a monomial without a factor of u")]
    ExactDivisionFailure,

    #[error("series order {requested} exceeds the configured maximum {max}")]
    OrderOverflow { requested: usize, max: usize },

    #[error("Fredholm determinant did not converge at quadrature order {order}")]
    DetNonConvergence { order: usize },

    #[error("Nystrom system is ill-conditioned at x = {x:.3} for quadrature order {order}")]
    IllConditioned { x: f64, order: usize },

    #[error("tail budget {budget:.3e} exceeds the requested tolerance {tol:.3e}")]
    TailBudgetExceeded { budget: f64, tol: f64 },

    #[error("branch residual {residual:.3e} above tolerance {tol:.3e}; numerical failure, not branch ambiguity")]
    BranchResidual { residual: f64, tol: f64 },

    #[error("regularizing function F_n is not available for n = {n} in class {class}")]
    FnUnavailable { n: usize, class: String },

    #[error("solution grid does not span the matching interval [{needed_lo:.1}, {needed_hi:.1}]")]
    GridTooShort { needed_lo: f64, needed_hi: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
