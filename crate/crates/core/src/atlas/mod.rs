//! Catalogue of closed-form reference surfaces and the geometric tooling
//! used to compare constructed surfaces against them: the hairpin domain,
//! trivial roofs (half plane, exterior disks), a non-injective warning
//! example, boundary tracing, end-direction extraction, self-intersection
//! detection, and similarity fitting.

mod boundary;
mod geometry;

pub use boundary::{end_data, trace_boundary, BoundaryCurve, EndReport};
pub use geometry::{
    correspond_curves, fit_matched_curves, fit_similarity, fit_to_hairpin, self_intersections,
    Crossing, SimilarityTransform,
};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::integrate::integrate_segment;
use crate::scalar::{cst, Real};

/// Hairpin data at a strip point: image point, roof value, and squared
/// roof gradient in image coordinates.
#[derive(Clone, Copy, Debug)]
pub struct HairpinSample<T = f64> {
    pub f: Complex<T>,
    pub u: T,
    pub grad_norm_sq: T,
}

/// Evaluates the hairpin immersion `F(z) = z + sinh z` on the closed
/// strip `|Im z| <= pi/2`, together with the roof `u = Re cosh z` and
/// `|grad u|^2 = (cosh x - cos y) / (cosh x + cos y)` at the image point.
pub fn hairpin_eval<T: Real>(z: Complex<T>) -> Result<HairpinSample<T>> {
    let half_pi = T::PI() * cst::<T>(0.5);
    if z.im.abs() > half_pi {
        return Err(Error::OutsideStrip {
            im: z.im.to_f64().unwrap_or(f64::NAN),
        });
    }
    let f = z + z.sinh();
    let u = z.cosh().re;
    let denom = z.re.cosh() + z.im.cos();
    let grad_norm_sq = (z.re.cosh() - z.im.cos()) / denom;
    Ok(HairpinSample { f, u, grad_norm_sq })
}

/// Whether `w` lies strictly inside the open hairpin domain
/// `{ |Im w| < pi/2 + cosh(Re w) }`.
pub fn hairpin_contains<T: Real>(w: Complex<T>) -> bool {
    w.im.abs() < T::PI() * cst::<T>(0.5) + w.re.cosh()
}

/// Boundary point of the hairpin domain over abscissa `x`:
/// `x ± i (pi/2 + cosh x)`, the image of `x ± i pi/2` under `F`.
pub fn hairpin_boundary_point<T: Real>(x: T, upper: bool) -> Complex<T> {
    let y = T::PI() * cst::<T>(0.5) + x.cosh();
    Complex::new(x, if upper { y } else { -y })
}

/// Trivial exceptional domains with closed-form roofs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TrivialDomain {
    /// Half space `x_1 >= 0`, roof `u = x_1`.
    HalfPlane,
    /// Plane exterior of the unit disk, roof `u = log |x|`.
    ExteriorDisk2d,
    /// Exterior of the unit ball in dimension `m >= 3`, roof
    /// `u = (1 - |x|^(2-m)) / (m - 2)`.
    ExteriorDiskMd,
}

/// Evaluates the closed-form roof of a trivial domain at `point`.
///
/// `m` is the ambient dimension and must match `point.len()`. Points
/// outside the (closed) domain are rejected; membership carries a
/// roundoff band of 1e-12 so boundary points built in floating point
/// (e.g. `(cos a, sin a)`) are admitted.
pub fn catalogue_trivial<T: Real>(kind: TrivialDomain, point: &[T], m: usize) -> Result<T> {
    if m != point.len() || m < 2 {
        return Err(Error::invalid(format!(
            "dimension {m} does not match a {}-coordinate point or is below 2",
            point.len()
        )));
    }
    let slack = cst::<T>(1e-12);
    let r = point
        .iter()
        .fold(T::zero(), |acc, &x| acc + x * x)
        .sqrt();
    match kind {
        TrivialDomain::HalfPlane => {
            if point[0] < -slack {
                return Err(Error::OutsideDomain);
            }
            Ok(point[0])
        }
        TrivialDomain::ExteriorDisk2d => {
            if m != 2 {
                return Err(Error::invalid("the plane exterior disk lives in dimension 2"));
            }
            if r < T::one() - slack {
                return Err(Error::OutsideDomain);
            }
            Ok(r.ln())
        }
        TrivialDomain::ExteriorDiskMd => {
            if m < 3 {
                return Err(Error::invalid(
                    "the higher-dimensional exterior ball needs m >= 3",
                ));
            }
            if r < T::one() - slack {
                return Err(Error::OutsideDomain);
            }
            let m_t = cst::<T>(m as f64);
            Ok((T::one() - r.powf(cst::<T>(2.0) - m_t)) / (m_t - cst::<T>(2.0)))
        }
    }
}

/// Antiderivative `F(z) = integral_0^z exp(-sinh w) dw` of an entire,
/// never-vanishing integrand. `F` is well defined on the whole plane but
/// not injective: it is periodic in steps of `2 pi i` up to the additive
/// constant [`period_constant`].
pub fn pathological_eval<T: Real>(z: Complex<T>, tol: T) -> Result<Complex<T>> {
    let f = |w: Complex<T>| (-w.sinh()).exp();
    integrate_segment(&f, Complex::new(T::zero(), T::zero()), z, tol)
}

/// The additive period `F(z + 2 pi i) - F(z)`, computed as the integral
/// of `exp(-sinh w)` along the segment from 0 to `2 pi i`.
pub fn period_constant<T: Real>(tol: T) -> Result<Complex<T>> {
    let f = |w: Complex<T>| (-w.sinh()).exp();
    let top = Complex::new(T::zero(), cst::<T>(2.0) * T::PI());
    integrate_segment(&f, Complex::new(T::zero(), T::zero()), top, tol)
}
