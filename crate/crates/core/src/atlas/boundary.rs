//! Boundary tracing of the integrated immersion along circle arcs and
//! extraction of asymptotic end directions at the punctures.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::integrate::{integrate_segment, map_point, DEFAULT_CLEARANCE};
use crate::scalar::{cst, Real};
use crate::spectrum::WeierstrassTriple;

/// Image of one open boundary arc between consecutive anchors.
#[derive(Clone, Debug)]
pub struct BoundaryCurve<T = f64> {
    /// Index of the anchor at the counterclockwise start of the arc.
    pub arc_index: usize,
    /// Sample angles on the unit circle, strictly increasing.
    pub thetas: Vec<T>,
    /// Image points `F(e^{i theta})`.
    pub points: Vec<Complex<T>>,
    /// Roof values at the samples; zero up to roundoff on the circle.
    pub us: Vec<T>,
}

/// Traces the image of the open arc that starts counterclockwise at
/// anchor `j`, with `n_samples` samples kept an angular distance
/// `eps_end` away from both endpoint anchors.
///
/// The first sample is mapped from the origin; subsequent samples reuse
/// the previous value and integrate only the short chord between
/// consecutive circle points, so the cost is linear in `n_samples`.
pub fn trace_boundary<T: Real>(
    t: &WeierstrassTriple<T>,
    j: usize,
    n_samples: usize,
    eps_end: T,
    f0: Complex<T>,
    tol: T,
) -> Result<BoundaryCurve<T>> {
    let n = t.spectrum().len();
    if j >= n {
        return Err(Error::invalid(format!("arc index {j} out of range (n = {n})")));
    }
    if n_samples < 2 {
        return Err(Error::invalid("boundary tracing needs at least 2 samples"));
    }
    let gap = t.spectrum().arc_gap(j);
    if !(eps_end > T::zero()) || eps_end + eps_end >= gap {
        return Err(Error::invalid(
            "eps_end must be positive and leave a nonempty arc window",
        ));
    }
    let theta0 = t.spectrum().angles()[j];
    let span = gap - eps_end - eps_end;
    let thetas: Vec<T> = (0..n_samples)
        .map(|k| theta0 + eps_end + span * cst::<T>(k as f64) / cst::<T>((n_samples - 1) as f64))
        .collect();

    let first = Complex::from_polar(T::one(), thetas[0]);
    let clearance = t
        .anchor_clearance(first)
        .min(cst(DEFAULT_CLEARANCE))
        * cst::<T>(0.8);
    let mut f = map_point(t, first, f0, tol, clearance)?;

    let phi = |z: Complex<T>| t.phi(z);
    let base_chord_tol = tol / cst::<T>(n_samples as f64);
    let mut points = Vec::with_capacity(n_samples);
    let mut us = Vec::with_capacity(n_samples);
    points.push(f);
    us.push(t.roof(first)?);
    let mut prev = first;
    let mut phi_prev = phi(first).norm();
    for &theta in thetas.iter().skip(1) {
        let z = Complex::from_polar(T::one(), theta);
        let phi_here = phi(z).norm();
        // near the punctures a chord's own increment dwarfs the running
        // value, and quadrature cannot resolve either below its roundoff
        // floor; the budget is floored by the scale of both, with the
        // increment bounded through the endpoint form magnitudes
        let mass = (z - prev).norm() * phi_prev.max(phi_here);
        let chord_tol = base_chord_tol
            .max(cst::<T>(200.0) * T::epsilon() * (T::one() + f.norm() + mass));
        f = f + integrate_segment(&phi, prev, z, chord_tol)?;
        points.push(f);
        us.push(t.roof(z)?);
        prev = z;
        phi_prev = phi_here;
    }
    Ok(BoundaryCurve {
        arc_index: j,
        thetas,
        points,
        us,
    })
}

/// Asymptotic data at one puncture: unit directions along the two
/// adjacent boundary arcs and the opening angle between them.
#[derive(Clone, Copy, Debug)]
pub struct EndReport<T = f64> {
    pub anchor_index: usize,
    /// Unit limit direction along the arc that starts at the anchor
    /// (approach from counterclockwise-after).
    pub tau_minus: Complex<T>,
    /// Unit limit direction along the arc that ends at the anchor
    /// (approach from counterclockwise-before).
    pub tau_plus: Complex<T>,
    /// Angle in (0, 2 pi] with `tau_minus = e^{i theta} tau_plus`.
    pub theta: T,
    /// Extrapolation stability indicator: distance between the last two
    /// accelerated direction estimates.
    pub spread: T,
}

/// Largest extrapolation spread accepted before reporting failure.
const SPREAD_LIMIT: f64 = 2e-3;

/// Estimates the end directions at anchor `j` by sampling `F` at circle
/// points whose angular distances to the anchor shrink geometrically
/// (`d_k = d_0 * ratio^k`, `k < levels`), then removing the error blocks
/// `d^m log^j d` up to `m = 3` by repeated Richardson extrapolation in
/// the ratio.
pub fn end_data<T: Real>(
    t: &WeierstrassTriple<T>,
    j: usize,
    geometric_ratio: T,
    levels: usize,
) -> Result<EndReport<T>> {
    let n = t.spectrum().len();
    if j >= n {
        return Err(Error::invalid(format!("anchor index {j} out of range (n = {n})")));
    }
    if !(geometric_ratio > cst(0.05) && geometric_ratio < cst(0.95)) {
        return Err(Error::invalid("geometric ratio must lie in (0.05, 0.95)"));
    }
    if levels < 3 {
        return Err(Error::invalid("direction extrapolation needs at least 3 levels"));
    }
    let theta0 = t.spectrum().angles()[j];
    let gap_after = t.spectrum().arc_gap(j);
    let gap_before = t.spectrum().arc_gap((j + n - 1) % n);
    let d0 = cst::<T>(0.02)
        .min(gap_after * cst(0.25))
        .min(gap_before * cst(0.25));

    let weight = t.spectrum().weights()[j];
    let tau_minus = side_direction(t, theta0, weight, d0, geometric_ratio, levels, true)?;
    let tau_plus = side_direction(t, theta0, weight, d0, geometric_ratio, levels, false)?;
    let spread = tau_minus.1.max(tau_plus.1);
    if spread > cst(SPREAD_LIMIT) {
        return Err(Error::NoConvergence {
            spread: spread.to_f64().unwrap_or(f64::NAN),
        });
    }
    let ratio = tau_minus.0 / tau_plus.0;
    let mut theta = ratio.arg();
    if theta <= T::zero() {
        theta = theta + cst::<T>(2.0) * T::PI();
    }
    Ok(EndReport {
        anchor_index: j,
        tau_minus: tau_minus.0,
        tau_plus: tau_plus.0,
        theta,
        spread,
    })
}

/// Direction estimate on one side of the anchor, with its spread.
fn side_direction<T: Real>(
    t: &WeierstrassTriple<T>,
    theta0: T,
    weight: T,
    d0: T,
    ratio: T,
    levels: usize,
    after: bool,
) -> Result<(Complex<T>, T)> {
    let sign = if after { T::one() } else { -T::one() };
    let angles: Vec<T> = (0..levels)
        .map(|k| theta0 + sign * d0 * ratio.powi(k as i32))
        .collect();

    // walk inward from the farthest sample, reusing each partial integral
    let first = Complex::from_polar(T::one(), angles[0]);
    let clearance = t
        .anchor_clearance(first)
        .min(cst(DEFAULT_CLEARANCE))
        * cst::<T>(0.8);
    let base_tol = cst::<T>(1e-12);
    // |F| ~ 2 w / d near the anchor pole; the quadrature roundoff floor is
    // proportional to that magnitude, so the absolute budget must scale
    // with it (the extracted direction divides by |F| again)
    let first_tol = base_tol * (T::one() + cst::<T>(2.0) * weight / d0);
    let mut f = map_point(t, first, Complex::new(T::zero(), T::zero()), first_tol, clearance)?;
    let phi = |z: Complex<T>| t.phi(z);
    let mut dirs = Vec::with_capacity(levels);
    dirs.push(f / f.norm());
    let mut prev = first;
    for &a in angles.iter().skip(1) {
        let z = Complex::from_polar(T::one(), a);
        // |F| grows like 1/d near the pole; scale the chord tolerance so
        // the direction F/|F| keeps a fixed absolute accuracy
        let chord_tol = base_tol * (T::one() + f.norm());
        f = f + integrate_segment(&phi, prev, z, chord_tol)?;
        dirs.push(f / f.norm());
        prev = z;
    }

    // Richardson stages: a term P(k) * q^k with deg P = p needs p + 1
    // stages at factor q. The direction error expands in d^m log^j d with
    // j <= m, and log d_k is affine in k, so two stages at `ratio` remove
    // the d block, three at `ratio^2` the d^2 block, four at `ratio^3`
    // the d^3 block.
    let r2 = ratio * ratio;
    let r3 = r2 * ratio;
    let factors = [ratio, ratio, r2, r2, r2, r3, r3, r3, r3];
    let max_stages = levels.saturating_sub(2).min(factors.len());
    let mut table = dirs;
    for &fct in factors.iter().take(max_stages) {
        let denom = T::one() - fct;
        let next: Vec<Complex<T>> = table
            .windows(2)
            .map(|w| (w[1] - w[0] * fct) / denom)
            .collect();
        table = next;
    }
    let last = table[table.len() - 1];
    let spread = if table.len() >= 2 {
        (last - table[table.len() - 2]).norm()
    } else {
        T::infinity()
    };
    Ok((last / last.norm(), spread))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::PoissonSpectrum;

    type C = Complex<f64>;

    fn c(re: f64, im: f64) -> C {
        Complex::new(re, im)
    }

    fn triple(n: usize) -> WeierstrassTriple<f64> {
        WeierstrassTriple::assemble(PoissonSpectrum::symmetric(n), 1e-12, 1e-8).unwrap()
    }

    #[test]
    fn traced_samples_carry_vanishing_roof_values() {
        let t = triple(2);
        for j in 0..2 {
            let curve = trace_boundary(&t, j, 64, 1e-3, c(0.0, 0.0), 1e-9).unwrap();
            assert_eq!(curve.points.len(), 64);
            assert!(curve.thetas.windows(2).all(|w| w[0] < w[1]));
            for &u in &curve.us {
                assert!(u.abs() <= 1e-10, "u = {u}");
            }
        }
    }

    #[test]
    fn single_anchor_boundary_is_the_imaginary_axis() {
        // F = (1+z)/(1-z) maps the unit circle minus {1} onto Re F = 0
        let t = triple(1);
        let curve = trace_boundary(&t, 0, 33, 1e-2, c(1.0, 0.0), 1e-10).unwrap();
        for (k, p) in curve.points.iter().enumerate() {
            assert!(p.re.abs() < 1e-7, "k={k} p={p}");
            let z = Complex::from_polar(1.0, curve.thetas[k]);
            let expect = (c(1.0, 0.0) + z) / (c(1.0, 0.0) - z);
            assert!((p - expect).norm() < 1e-7);
        }
    }

    #[test]
    fn tracing_rejects_bad_windows() {
        let t = triple(2);
        assert!(trace_boundary(&t, 5, 16, 1e-3, c(0.0, 0.0), 1e-9).is_err());
        assert!(trace_boundary(&t, 0, 1, 1e-3, c(0.0, 0.0), 1e-9).is_err());
        assert!(trace_boundary(&t, 0, 16, 10.0, c(0.0, 0.0), 1e-9).is_err());
    }

    #[test]
    fn simple_pole_ends_open_at_angle_pi() {
        for n in [1usize, 2] {
            let t = triple(n);
            let report = end_data(&t, 0, 0.6, 10).unwrap();
            assert!(
                (report.theta - std::f64::consts::PI).abs() < 1e-4,
                "n={n} theta={}",
                report.theta
            );
            // the defining relation between the two directions
            let rotated = report.tau_plus * Complex::from_polar(1.0, report.theta);
            assert!((report.tau_minus - rotated).norm() < 1e-12);
            assert!((report.tau_minus.norm() - 1.0).abs() < 1e-12);
            assert!((report.tau_plus.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn single_anchor_directions_are_vertical() {
        // F = (1+z)/(1-z): approaching z = 1 along the circle sends
        // F to -+ i * infinity depending on the side
        let t = triple(1);
        let report = end_data(&t, 0, 0.6, 10).unwrap();
        // F = i cot(d/2) at angle d from the anchor: purely imaginary,
        // positive on the counterclockwise-after side
        assert!((report.tau_minus - c(0.0, 1.0)).norm() < 1e-5);
        assert!((report.tau_plus - c(0.0, -1.0)).norm() < 1e-5);
    }

    #[test]
    fn opening_angle_is_stable_in_the_sampling_ratio() {
        let t = triple(2);
        let mut thetas = Vec::new();
        for &ratio in &[0.5, 0.65, 0.8] {
            thetas.push(end_data(&t, 0, ratio, 12).unwrap().theta);
        }
        for w in thetas.windows(2) {
            assert!((w[0] - w[1]).abs() < 1e-6, "thetas={thetas:?}");
        }
    }
}
