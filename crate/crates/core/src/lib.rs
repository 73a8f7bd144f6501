//! Flat surfaces with a positive harmonic roof, built from anchor/weight
//! data on the unit disk.
//!
//! A [`PoissonSpectrum`] (unit-circle anchors with positive weights)
//! defines a holomorphic sum `U` whose real part is positive on the open
//! disk and vanishes on the circle. The zeros of `dU` inside the disk are
//! cancelled by a [`BlaschkeProduct`] `h`, so the 1-form `Phi = dU / h`
//! never vanishes and integrates to an immersion `F` of the punctured
//! closed disk into the plane. The image carries the roof `u = Re U` with
//! zero boundary values and unit boundary gradient.
//!
//! Module map:
//! * [`analytic`]: polynomials, root finding, Blaschke products;
//! * [`spectrum`]: anchor data, `U`, `dU`, and assembled triples;
//! * [`integrate`]: adaptive contour integration and grid mapping;
//! * [`atlas`]: closed-form reference surfaces (half plane, exterior
//!   disk, hairpin), boundary tracing, end directions, intersections,
//!   similarity fitting;
//! * [`verify`]: numerical certification of the defining properties.
//!
//! All numeric code is generic over the scalar type through
//! [`scalar::Real`]; `f64` is the default type parameter and the aliases
//! below pin the common instantiations.

pub mod analytic;
pub mod atlas;
pub mod error;
pub mod integrate;
pub mod scalar;
pub mod spectrum;
pub mod verify;

pub use analytic::{
    blaschke_eval, poly_eval, poly_roots, BlaschkeProduct, Polynomial, Root, RootLocation,
    RootSet,
};
pub use atlas::{
    catalogue_trivial, end_data, fit_matched_curves, fit_similarity, fit_to_hairpin,
    hairpin_boundary_point, hairpin_contains, hairpin_eval, pathological_eval, period_constant,
    self_intersections, trace_boundary, BoundaryCurve, Crossing, EndReport, SimilarityTransform,
    TrivialDomain,
};
pub use error::{Error, Result};
pub use integrate::{
    check_path_independence, integrate_segment, map_grid, map_point, FieldGrid, GridSample,
    PathPolyline,
};
pub use scalar::Real;
pub use spectrum::{PoissonSpectrum, WeierstrassTriple};
pub use verify::{
    verify_neumann_fd, verify_neumann_hairpin, verify_roof_closed_form, verify_triple,
    CheckRecord, ClosedFormRoof, GridSpec, Tolerances, VerificationReport,
};

/// Complex number over the working scalar.
pub type Cx<T = f64> = num_complex::Complex<T>;

/// Double precision instantiations (the default everywhere).
pub type Spectrum64 = spectrum::PoissonSpectrum<f64>;
pub type Triple64 = spectrum::WeierstrassTriple<f64>;
pub type Polynomial64 = analytic::Polynomial<f64>;

/// Single precision instantiations for quick low-accuracy sweeps.
pub type Spectrum32 = spectrum::PoissonSpectrum<f32>;
pub type Triple32 = spectrum::WeierstrassTriple<f32>;
pub type Polynomial32 = analytic::Polynomial<f32>;
