//! Error type shared by every module of the crate.
//!
//! Payload fields are plain `f64` regardless of the working scalar type so
//! that errors stay printable and comparable across instantiations.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An anchor point is too far from the unit circle to be normalized.
    #[error("anchor {index} has modulus {modulus:e}; anchors must lie on the unit circle")]
    AnchorOffCircle { index: usize, modulus: f64 },

    /// Two anchors coincide or sit closer than the minimum angular separation.
    #[error("anchors {first} and {second} are angularly separated by only {gap:e} rad")]
    DuplicateAnchors { first: usize, second: usize, gap: f64 },

    /// A spectral weight is zero or negative.
    #[error("weight {index} is not strictly positive")]
    NonpositiveWeight { index: usize },

    /// An evaluation point collides with an anchor pole.
    #[error("evaluation point is within {distance:e} of an anchor singularity")]
    AnchorSingularity { distance: f64 },

    /// The simultaneous root iteration stalled above the requested residual.
    #[error("root finding stalled at residual {residual:e} (requested {tol:e})")]
    NonConvergence { residual: f64, tol: f64 },

    /// A zero of the numerator polynomial falls inside the classification
    /// band around the unit circle, so inside/outside cancellation is
    /// ambiguous.
    #[error("numerator root with |root| = {modulus} lies within {band:e} of the unit circle")]
    RootNearBoundary { modulus: f64, band: f64 },

    /// Adaptive quadrature exhausted its subdivision budget.
    #[error("quadrature error estimate {achieved:e} exceeds the requested tolerance {requested:e}")]
    ToleranceNotMet { requested: f64, achieved: f64 },

    /// An integration target sits closer to a puncture than the clearance
    /// the caller promised to respect.
    #[error("target is {distance:e} from a puncture; clearance {required:e} is required")]
    PunctureTooClose { distance: f64, required: f64 },

    /// A point lies outside the horizontal strip |Im z| <= pi/2.
    #[error("imaginary part {im} is outside the strip |Im z| <= pi/2")]
    OutsideStrip { im: f64 },

    /// A point lies outside the domain of the requested roof function.
    #[error("point lies outside the domain of the requested roof function")]
    OutsideDomain,

    /// Boundary directions failed to stabilize under extrapolation.
    #[error("end directions did not converge; extrapolation spread {spread:e}")]
    NoConvergence { spread: f64 },

    /// A point configuration carries no usable geometric information.
    #[error("point configuration is degenerate")]
    DegenerateConfiguration,

    /// A precondition on plain arguments was violated.
    #[error("{0}")]
    InvalidInput(String),
}

impl Error {
    /// Convenience constructor for precondition failures.
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
