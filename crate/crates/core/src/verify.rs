//! Numerical certification of assembled triples and closed-form roofs:
//! boundary unimodularity of the Blaschke factor, roof positivity,
//! non-vanishing of the flow form, holomorphy under finite-difference
//! refinement, zero bookkeeping, boundary difference quotients, and
//! Laplacian refinement tests on the catalogue examples.

use num_complex::Complex;

use crate::atlas::{catalogue_trivial, hairpin_eval, TrivialDomain};
use crate::error::{Error, Result};
use crate::integrate::integrate_segment;
use crate::scalar::{cst, Real};
use crate::spectrum::WeierstrassTriple;

/// Boundary samples used by the unimodularity check.
const CIRCLE_SAMPLES: usize = 4096;

/// Window for second-order finite-difference refinement ratios.
const REFINE_RATIO_LO: f64 = 3.5;
const REFINE_RATIO_HI: f64 = 4.5;

/// Residual level treated as "exactly zero" by the Laplacian check.
const LAPLACIAN_ZERO: f64 = 1e-12;

/// Allowed distance between a Blaschke zero and its matching root.
const ZERO_MATCH_TOL: f64 = 1e-9;

/// Allowed roof magnitude on the boundary of a closed-form domain.
const BOUNDARY_ROOF_TOL: f64 = 1e-10;

/// Thresholds for the verification checks.
#[derive(Clone, Copy, Debug)]
pub struct Tolerances<T = f64> {
    /// Allowed deviation of |h| from 1 on the unit circle.
    pub unimodularity: T,
    /// The roof must exceed this margin on the interior grid.
    pub positivity_margin: T,
    /// |Phi| must exceed this floor on the interior grid.
    pub nonvanishing_floor: T,
    /// Base step of the finite-difference holomorphy check.
    pub fd_step: T,
    /// Allowed relative deviation of boundary difference quotients from 1.
    pub neumann_rel: T,
    /// Absolute tolerance handed to quadrature inside the checks.
    pub quadrature: T,
}

impl<T: Real> Default for Tolerances<T> {
    fn default() -> Self {
        Tolerances {
            unimodularity: cst(1e-10),
            positivity_margin: T::zero(),
            nonvanishing_floor: cst(1e-12),
            fd_step: cst(1e-5),
            neumann_rel: cst(1e-3),
            quadrature: cst(1e-10),
        }
    }
}

impl<T: Real> Tolerances<T> {
    /// Loosens every judgement threshold by `factor` (> 1). Measurement
    /// parameters (`fd_step`, `quadrature`) are left untouched, so a
    /// passing report must keep passing under the loosened thresholds.
    pub fn loosened(&self, factor: T) -> Self {
        let margin = if self.positivity_margin == T::zero() {
            -(factor - T::one()) * cst::<T>(1e-6)
        } else {
            self.positivity_margin / factor
        };
        Tolerances {
            unimodularity: self.unimodularity * factor,
            positivity_margin: margin,
            nonvanishing_floor: self.nonvanishing_floor / factor,
            fd_step: self.fd_step,
            neumann_rel: self.neumann_rel * factor,
            quadrature: self.quadrature,
        }
    }
}

/// One verification record. `pass` holds exactly when `measured` is
/// strictly above `lower` (if set) and at most `upper` (if set).
#[derive(Clone, Debug)]
pub struct CheckRecord<T = f64> {
    pub name: String,
    pub measured: T,
    pub lower: Option<T>,
    pub upper: Option<T>,
    pub pass: bool,
    pub samples: usize,
}

impl<T: Real> CheckRecord<T> {
    fn judge(name: &str, measured: T, lower: Option<T>, upper: Option<T>, samples: usize) -> Self {
        let pass = lower.map_or(true, |lo| measured > lo)
            && upper.map_or(true, |hi| measured <= hi);
        CheckRecord {
            name: name.to_string(),
            measured,
            lower,
            upper,
            pass,
            samples,
        }
    }
}

/// Outcome of a verification run: individual records plus their
/// conjunction.
#[derive(Clone, Debug, Default)]
pub struct VerificationReport<T = f64> {
    pub records: Vec<CheckRecord<T>>,
}

impl<T: Real> VerificationReport<T> {
    pub fn pass(&self) -> bool {
        self.records.iter().all(|r| r.pass)
    }

    pub fn merge(mut self, other: VerificationReport<T>) -> Self {
        self.records.extend(other.records);
        self
    }
}

/// Interior sampling grid used by the triple checks.
#[derive(Clone, Copy, Debug)]
pub struct GridSpec<T = f64> {
    pub radial: usize,
    pub angular: usize,
    pub rmax: T,
}

impl<T: Real> Default for GridSpec<T> {
    fn default() -> Self {
        GridSpec {
            radial: 24,
            angular: 48,
            rmax: cst(0.995),
        }
    }
}

fn polar_grid<T: Real>(spec: &GridSpec<T>) -> Vec<Complex<T>> {
    let tau = cst::<T>(2.0) * T::PI();
    let mut pts = Vec::with_capacity(spec.radial * spec.angular);
    for i in 1..=spec.radial {
        let r = spec.rmax * cst::<T>(i as f64) / cst::<T>(spec.radial as f64);
        for j in 0..spec.angular {
            let a = tau * cst::<T>(j as f64) / cst::<T>(spec.angular as f64);
            pts.push(Complex::from_polar(r, a));
        }
    }
    pts
}

/// Certifies an assembled triple:
/// * the Blaschke factor is unimodular on the circle;
/// * the roof `Re U` is positive on the interior grid;
/// * `|Phi|` stays above the non-vanishing floor;
/// * the finite-difference Cauchy-Riemann residual of `U` shrinks by the
///   second-order factor 4 when the step is halved;
/// * every Blaschke zero matches an interior root of the numerator.
pub fn verify_triple<T: Real>(
    t: &WeierstrassTriple<T>,
    grid: &GridSpec<T>,
    tol: &Tolerances<T>,
) -> Result<VerificationReport<T>> {
    if grid.radial < 2 || grid.angular < 4 {
        return Err(Error::invalid("verification grid is too coarse"));
    }
    if !(grid.rmax > T::zero() && grid.rmax < T::one()) {
        return Err(Error::invalid("grid rmax must lie strictly inside (0, 1)"));
    }
    let mut records = Vec::new();
    let tau = cst::<T>(2.0) * T::PI();

    // boundary unimodularity of h
    let mut worst = T::zero();
    for k in 0..CIRCLE_SAMPLES {
        let z = Complex::from_polar(
            T::one(),
            tau * cst::<T>(k as f64) / cst::<T>(CIRCLE_SAMPLES as f64),
        );
        worst = worst.max((t.blaschke().eval(z).norm() - T::one()).abs());
    }
    records.push(CheckRecord::judge(
        "boundary_unimodularity",
        worst,
        None,
        Some(tol.unimodularity),
        CIRCLE_SAMPLES,
    ));

    // roof positivity and flow non-vanishing on the interior grid
    let pts = polar_grid(grid);
    let mut min_u = T::infinity();
    let mut min_phi = T::infinity();
    for &z in &pts {
        min_u = min_u.min(t.roof(z)?);
        min_phi = min_phi.min(t.phi(z).norm());
    }
    records.push(CheckRecord::judge(
        "roof_positivity",
        min_u,
        Some(tol.positivity_margin),
        None,
        pts.len(),
    ));
    records.push(CheckRecord::judge(
        "flow_nonvanishing",
        min_phi,
        Some(tol.nonvanishing_floor),
        None,
        pts.len(),
    ));

    // holomorphy: the Cauchy-Riemann residual of U under finite
    // differences is O(step^2); halving the step must shrink it ~4x
    let stride = (pts.len() / 256).max(1);
    let probes: Vec<Complex<T>> = pts.iter().step_by(stride).copied().collect();
    let residual = |step: T| -> Result<T> {
        let mut worst = T::zero();
        for &z in &probes {
            let dx = Complex::new(step, T::zero());
            let dy = Complex::new(T::zero(), step);
            let two = cst::<T>(2.0) * step;
            let fx = (t.eval_u(z + dx)? - t.eval_u(z - dx)?) / two;
            let fy = (t.eval_u(z + dy)? - t.eval_u(z - dy)?) / two;
            worst = worst.max((fx + fy * Complex::i()).norm());
        }
        Ok(worst)
    };
    let r1 = residual(tol.fd_step)?;
    let r2 = residual(tol.fd_step * cst(0.5))?;
    let ratio = if r2 == T::zero() {
        if r1 == T::zero() {
            cst(4.0)
        } else {
            T::infinity()
        }
    } else {
        r1 / r2
    };
    records.push(CheckRecord::judge(
        "holomorphy_refinement",
        ratio,
        Some(cst(REFINE_RATIO_LO)),
        Some(cst(REFINE_RATIO_HI)),
        probes.len(),
    ));

    // bookkeeping: every Blaschke zero must match an interior root of P
    let mut slots: Vec<(Complex<T>, usize)> = t
        .disk_zeros()
        .iter()
        .map(|r| (r.value, r.multiplicity))
        .collect();
    let mut worst_match = T::zero();
    let mut matched_all = true;
    for &zk in t.blaschke().zeros() {
        let mut best: Option<usize> = None;
        let mut best_d = T::infinity();
        for (i, (v, m)) in slots.iter().enumerate() {
            if *m == 0 {
                continue;
            }
            let d = (zk - v).norm();
            if d < best_d {
                best_d = d;
                best = Some(i);
            }
        }
        match best {
            Some(i) => {
                slots[i].1 -= 1;
                worst_match = worst_match.max(best_d);
            }
            None => matched_all = false,
        }
    }
    if slots.iter().any(|&(_, m)| m > 0) {
        matched_all = false;
    }
    let measured = if matched_all { worst_match } else { cst(2.0) };
    records.push(CheckRecord::judge(
        "blaschke_zero_consistency",
        measured,
        None,
        Some(cst(ZERO_MATCH_TOL)),
        t.blaschke().zeros().len(),
    ));

    Ok(VerificationReport { records })
}

/// Checks the unit-gradient boundary condition by difference quotients:
/// at boundary samples `b = e^{i theta}` and interior partners
/// `w = (1 - s) b`, the ratio `u(w) / |F(b) - F(w)|` must equal 1 up to
/// `neumann_rel` (at the contract scale `s = 1e-4`).
pub fn verify_neumann_fd<T: Real>(
    t: &WeierstrassTriple<T>,
    boundary_samples: usize,
    s: T,
    tol: &Tolerances<T>,
) -> Result<VerificationReport<T>> {
    if boundary_samples == 0 {
        return Err(Error::invalid("at least one boundary sample is required"));
    }
    if !(s > T::zero() && s < T::one()) {
        return Err(Error::invalid("offset s must lie strictly inside (0, 1)"));
    }
    let n = t.spectrum().len();
    let tau = cst::<T>(2.0) * T::PI();
    let phi = |z: Complex<T>| t.phi(z);
    let mut worst = T::zero();
    let mut count = 0usize;
    for j in 0..n {
        let gap = t.spectrum().arc_gap(j);
        let theta0 = t.spectrum().angles()[j];
        let share = ((cst::<T>(boundary_samples as f64) * gap / tau)
            .ceil()
            .to_f64()
            .unwrap_or(1.0) as usize)
            .max(1);
        let margin = gap * cst::<T>(0.15);
        let span = gap - margin - margin;
        for k in 0..share {
            let frac = (cst::<T>(k as f64) + cst::<T>(0.5)) / cst::<T>(share as f64);
            let theta = theta0 + margin + span * frac;
            let b = Complex::from_polar(T::one(), theta);
            let w = Complex::from_polar(T::one() - s, theta);
            let u = t.roof(w)?;
            let step = integrate_segment(&phi, w, b, tol.quadrature)?;
            let denom = step.norm();
            if denom == T::zero() {
                return Err(Error::DegenerateConfiguration);
            }
            worst = worst.max((u / denom - T::one()).abs());
            count += 1;
        }
    }
    let mut records = Vec::new();
    records.push(CheckRecord::judge(
        "neumann_unit_quotient",
        worst,
        None,
        Some(tol.neumann_rel),
        count,
    ));
    Ok(VerificationReport { records })
}

/// Hairpin analogue of [`verify_neumann_fd`], entirely in closed form:
/// samples sit on the strip boundary `Im z = pi/2` over `|Re z| <= xmax`.
pub fn verify_neumann_hairpin<T: Real>(
    boundary_samples: usize,
    xmax: T,
    s: T,
    tol: &Tolerances<T>,
) -> Result<VerificationReport<T>> {
    if boundary_samples < 2 {
        return Err(Error::invalid("at least two boundary samples are required"));
    }
    if !(s > T::zero() && s < T::one()) {
        return Err(Error::invalid("offset s must lie strictly inside (0, 1)"));
    }
    let half_pi = T::PI() * cst::<T>(0.5);
    let mut worst = T::zero();
    for k in 0..boundary_samples {
        let x = xmax * (cst::<T>(2.0) * cst::<T>(k as f64) / cst::<T>((boundary_samples - 1) as f64) - T::one());
        let zb = Complex::new(x, half_pi);
        let zi = Complex::new(x, half_pi - s);
        let boundary = hairpin_eval(zb)?;
        let interior = hairpin_eval(zi)?;
        let denom = (boundary.f - interior.f).norm();
        worst = worst.max((interior.u / denom - T::one()).abs());
    }
    Ok(VerificationReport {
        records: vec![CheckRecord::judge(
            "neumann_unit_quotient",
            worst,
            None,
            Some(tol.neumann_rel),
            boundary_samples,
        )],
    })
}

/// Closed-form roofs subject to the Laplacian/positivity/boundary suite.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClosedFormRoof {
    HalfPlane,
    ExteriorDisk,
    Hairpin,
}

/// Base Laplacian stencil step: a dyadic value, so stencil points on
/// dyadic grids are exact and affine roofs have exactly zero residual.
const LAPLACE_STEP: f64 = 0.015625;

/// Verifies a closed-form roof: five-point Laplacian residual refines at
/// second order (or is zero outright for affine roofs), the roof is
/// positive on the interior grid, and it vanishes on the boundary.
pub fn verify_roof_closed_form<T: Real>(
    kind: ClosedFormRoof,
    tol: &Tolerances<T>,
) -> Result<VerificationReport<T>> {
    let h = cst::<T>(LAPLACE_STEP);
    let (interior, boundary): (Vec<(T, T)>, Vec<(T, T)>) = match kind {
        ClosedFormRoof::HalfPlane => {
            // dyadic rectangle in {x1 > 0}
            let mut pts = Vec::new();
            for i in 2..=16 {
                for j in -8..=8 {
                    pts.push((cst::<T>(i as f64) / cst::<T>(8.0), cst::<T>(j as f64) / cst::<T>(8.0)));
                }
            }
            let bnd = (-8..=8)
                .map(|j| (T::zero(), cst::<T>(j as f64) / cst::<T>(8.0)))
                .collect();
            (pts, bnd)
        }
        ClosedFormRoof::ExteriorDisk => {
            let tau = cst::<T>(2.0) * T::PI();
            let mut pts = Vec::new();
            for i in 0..8 {
                let r = cst::<T>(1.25) + cst::<T>(1.75) * cst::<T>(i as f64) / cst::<T>(7.0);
                for j in 0..16 {
                    let a = tau * cst::<T>(j as f64) / cst::<T>(16.0);
                    pts.push((r * a.cos(), r * a.sin()));
                }
            }
            let bnd = (0..64)
                .map(|j| {
                    let a = tau * cst::<T>(j as f64) / cst::<T>(64.0);
                    (a.cos(), a.sin())
                })
                .collect();
            (pts, bnd)
        }
        ClosedFormRoof::Hairpin => {
            // images of an interior strip grid
            let mut pts = Vec::new();
            for i in 0..11 {
                for j in 0..9 {
                    let x = cst::<T>(-1.25) + cst::<T>(2.5) * cst::<T>(i as f64) / cst::<T>(10.0);
                    let y = T::PI() * (cst::<T>(-0.3) + cst::<T>(0.6) * cst::<T>(j as f64) / cst::<T>(8.0));
                    let w = hairpin_eval(Complex::new(x, y))?.f;
                    pts.push((w.re, w.im));
                }
            }
            let bnd = (0..41)
                .map(|k| {
                    let x = cst::<T>(-3.0) + cst::<T>(6.0) * cst::<T>(k as f64) / cst::<T>(40.0);
                    let w = crate::atlas::hairpin_boundary_point(x, k % 2 == 0);
                    (w.re, w.im)
                })
                .collect();
            (pts, bnd)
        }
    };

    let roof = |x: T, y: T| -> Result<T> {
        match kind {
            ClosedFormRoof::HalfPlane => catalogue_trivial(TrivialDomain::HalfPlane, &[x, y], 2),
            ClosedFormRoof::ExteriorDisk => {
                catalogue_trivial(TrivialDomain::ExteriorDisk2d, &[x, y], 2)
            }
            ClosedFormRoof::Hairpin => hairpin_roof_at(Complex::new(x, y)),
        }
    };

    let laplacian_residual = |step: T| -> Result<T> {
        let mut worst = T::zero();
        for &(x, y) in &interior {
            let sum = roof(x + step, y)?
                + roof(x - step, y)?
                + roof(x, y + step)?
                + roof(x, y - step)?
                - cst::<T>(4.0) * roof(x, y)?;
            worst = worst.max((sum / (step * step)).abs());
        }
        Ok(worst)
    };

    let mut records = Vec::new();
    let r1 = laplacian_residual(h)?;
    let r2 = laplacian_residual(h * cst(0.5))?;
    if r1.max(r2) <= cst(LAPLACIAN_ZERO) {
        records.push(CheckRecord::judge(
            "laplacian_residual",
            r1.max(r2),
            None,
            Some(cst(LAPLACIAN_ZERO)),
            interior.len(),
        ));
    } else {
        let ratio = if r2 == T::zero() { T::infinity() } else { r1 / r2 };
        records.push(CheckRecord::judge(
            "laplacian_refine_ratio",
            ratio,
            Some(cst(REFINE_RATIO_LO)),
            Some(cst(REFINE_RATIO_HI)),
            interior.len(),
        ));
    }

    let mut min_u = T::infinity();
    for &(x, y) in &interior {
        min_u = min_u.min(roof(x, y)?);
    }
    records.push(CheckRecord::judge(
        "roof_positivity",
        min_u,
        Some(tol.positivity_margin),
        None,
        interior.len(),
    ));

    let mut worst_b = T::zero();
    for &(x, y) in &boundary {
        worst_b = worst_b.max(roof(x, y)?.abs());
    }
    records.push(CheckRecord::judge(
        "boundary_dirichlet",
        worst_b,
        None,
        Some(cst(BOUNDARY_ROOF_TOL)),
        boundary.len(),
    ));

    Ok(VerificationReport { records })
}

/// Hairpin roof in image coordinates: inverts `F(z) = z + sinh z` on the
/// strip and evaluates `Re cosh` at the preimage.
///
/// The strip preimage is unique (`<F(z) - F(z'), z - z'> >= |z - z'|^2`),
/// but the entire extension of `F` has other preimages outside, so the
/// Newton iterate is projected back into the closed strip after every
/// step and the step is halved until the residual decreases.
fn hairpin_roof_at<T: Real>(w: Complex<T>) -> Result<T> {
    let one = Complex::new(T::one(), T::zero());
    let half_pi = T::PI() * cst::<T>(0.5);
    let clamp = |z: Complex<T>| Complex::new(z.re, z.im.min(half_pi).max(-half_pi));
    let resid = |z: Complex<T>| z + z.sinh() - w;

    // boundary images clamp onto their exact preimages; interior images
    // clamp to a same-side seed the damped iteration pulls inward
    let mut z = clamp(w);
    let tol = cst::<T>(1e-13) * (T::one() + w.norm());
    let mut f = resid(z);
    for _ in 0..200 {
        if f.norm() <= tol {
            break;
        }
        let step = f / (one + z.cosh());
        let mut scale = T::one();
        loop {
            let cand = clamp(z - step * scale);
            let fc = resid(cand);
            if fc.norm() < f.norm() || scale < cst(1e-6) {
                z = cand;
                f = fc;
                break;
            }
            scale = scale * cst(0.5);
        }
    }
    if f.norm() > tol * cst(100.0) {
        return Err(Error::NoConvergence {
            spread: f.norm().to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(z.cosh().re)
}
