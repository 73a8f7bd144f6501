//! Adaptive contour integration of holomorphic 1-forms over segments and
//! polylines in the closed unit disk, plus point and grid mapping of the
//! integrated immersion.
//!
//! The kernel is a 15-point Kronrod rule with embedded 7-point Gauss rule.
//! The interval with the worst error estimate is bisected until the total
//! estimate meets the budget; the pop order and the final left-to-right
//! summation are both deterministic, so results are bitwise reproducible.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{cst, Real};
use crate::spectrum::WeierstrassTriple;

/// Default clearance kept between integration paths and the anchors.
pub const DEFAULT_CLEARANCE: f64 = 1e-3;

const MAX_DEPTH: usize = 48;
const MAX_NODES: usize = 200_000;

/// Kronrod abscissae on [-1, 1] (positive half; the rule is symmetric).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_33,
    0.949_107_912_342_758_524_526_189_684_047_85,
    0.864_864_423_359_769_072_789_712_788_640_93,
    0.741_531_185_599_394_439_863_864_773_280_79,
    0.586_087_235_467_691_130_294_144_838_258_73,
    0.405_845_151_377_397_166_906_606_412_076_96,
    0.207_784_955_007_898_467_600_689_403_773_24,
    0.0,
];

/// Kronrod weights matching `XGK`.
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_97,
    0.063_092_092_629_978_553_290_700_663_189_2,
    0.104_790_010_322_250_183_839_876_322_541_52,
    0.140_653_259_715_525_918_745_189_590_510_24,
    0.169_004_726_639_267_902_826_583_426_598_55,
    0.190_350_578_064_785_409_913_256_402_421_01,
    0.204_432_940_075_298_892_414_161_999_234_65,
    0.209_482_141_084_727_828_012_999_174_891_71,
];

/// Gauss weights for the embedded 7-point rule (odd Kronrod abscissae).
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_08,
    0.279_705_391_489_276_667_901_467_771_423_78,
    0.381_830_050_505_118_944_950_369_775_488_97,
    0.417_959_183_673_469_387_755_102_040_816_33,
];

/// QUADPACK-style error rescaling: sharpens the raw |K - G| difference
/// using the measured smoothness of the integrand on the interval.
fn rescale_error<T: Real>(err: T, result_abs: T, result_asc: T) -> T {
    let mut err = err.abs();
    if result_asc != T::zero() && err != T::zero() {
        let scale = (cst::<T>(200.0) * err / result_asc).powf(cst(1.5));
        err = if scale < T::one() {
            result_asc * scale
        } else {
            result_asc
        };
    }
    let min_pos = T::min_positive_value();
    if result_abs > min_pos / (cst::<T>(50.0) * T::epsilon()) {
        let min_err = cst::<T>(50.0) * T::epsilon() * result_abs;
        if min_err > err {
            err = min_err;
        }
    }
    err
}

/// One Kronrod 15 / Gauss 7 evaluation of a complex-valued integrand over
/// the real interval [a, b]. Returns (integral, error estimate).
fn gk15<T: Real, F: Fn(T) -> Complex<T>>(f: &F, a: T, b: T) -> (Complex<T>, T) {
    let half = (b - a) * cst::<T>(0.5);
    let center = (a + b) * cst::<T>(0.5);
    let zero = Complex::new(T::zero(), T::zero());

    let mut fv = [zero; 15];
    for (i, &x) in XGK.iter().enumerate() {
        let dx = half * cst::<T>(x);
        if i == 7 {
            fv[7] = f(center);
        } else {
            fv[i] = f(center - dx);
            fv[14 - i] = f(center + dx);
        }
    }

    let mut kronrod = zero;
    let mut gauss = zero;
    let mut resabs = T::zero();
    for i in 0..8 {
        let wk = cst::<T>(WGK[i]);
        if i == 7 {
            kronrod = kronrod + fv[7] * wk;
            resabs = resabs + fv[7].norm() * wk;
        } else {
            kronrod = kronrod + (fv[i] + fv[14 - i]) * wk;
            resabs = resabs + (fv[i].norm() + fv[14 - i].norm()) * wk;
        }
    }
    // Gauss nodes are the odd Kronrod abscissae; WG[3] weights the center
    for (j, &wg) in WG.iter().enumerate() {
        let i = 2 * j + 1;
        if i == 7 {
            gauss = gauss + fv[7] * cst::<T>(wg);
        } else {
            gauss = gauss + (fv[i] + fv[14 - i]) * cst::<T>(wg);
        }
    }

    let mean = kronrod * cst::<T>(0.5);
    let mut resasc = T::zero();
    for i in 0..8 {
        let wk = cst::<T>(WGK[i]);
        if i == 7 {
            resasc = resasc + (fv[7] - mean).norm() * wk;
        } else {
            resasc = resasc + ((fv[i] - mean).norm() + (fv[14 - i] - mean).norm()) * wk;
        }
    }

    let scale = half.abs();
    let result = kronrod * half;
    let raw_err = ((kronrod - gauss) * half).norm();
    let err = rescale_error(raw_err, resabs * scale, resasc * scale);
    (result, err)
}

/// Total order on error keys: NaN sorts above everything so broken
/// intervals are refined first.
fn ord_key<T: Real>(x: T, y: T) -> Ordering {
    match (x.is_nan(), y.is_nan()) {
        (true, true) => Ordering::Equal,
        (true, false) => Ordering::Greater,
        (false, true) => Ordering::Less,
        (false, false) => x.partial_cmp(&y).unwrap_or(Ordering::Equal),
    }
}

struct Node<T: Real> {
    lo: T,
    hi: T,
    value: Complex<T>,
    err: T,
    depth: usize,
    seq: u64,
}

impl<T: Real> PartialEq for Node<T> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl<T: Real> Eq for Node<T> {}
impl<T: Real> PartialOrd for Node<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T: Real> Ord for Node<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        // max-heap on the error; older nodes win ties for determinism
        ord_key(self.err, other.err).then(other.seq.cmp(&self.seq))
    }
}

/// Worst-first refinement with one global error budget. Splitting stops
/// per interval only when its midpoint is no longer representable; such
/// saturated intervals keep their error on the books, so an impossible
/// request still fails honestly.
fn adaptive<T: Real, F: Fn(T) -> Complex<T>>(f: &F, lo: T, hi: T, tol: T) -> Result<(Complex<T>, T)> {
    let (value, err) = gk15(f, lo, hi);
    let mut heap: BinaryHeap<Node<T>> = BinaryHeap::new();
    let mut settled: Vec<Node<T>> = Vec::new();
    let mut seq = 0u64;
    heap.push(Node { lo, hi, value, err, depth: 0, seq });
    let mut total_err = err;
    let mut nodes = 1usize;

    while !(total_err <= tol) {
        if !total_err.is_finite() {
            total_err = heap
                .iter()
                .chain(settled.iter())
                .fold(T::zero(), |acc, n| acc + n.err);
        }
        let worst = match heap.pop() {
            Some(n) => n,
            None => break,
        };
        let mid = (worst.lo + worst.hi) * cst::<T>(0.5);
        if !(mid > worst.lo && mid < worst.hi) {
            settled.push(worst);
            continue;
        }
        if worst.depth >= MAX_DEPTH || nodes + 2 > MAX_NODES {
            return Err(Error::ToleranceNotMet {
                requested: tol.to_f64().unwrap_or(f64::NAN),
                achieved: total_err.to_f64().unwrap_or(f64::NAN),
            });
        }
        let (lv, le) = gk15(f, worst.lo, mid);
        let (rv, re) = gk15(f, mid, worst.hi);
        nodes += 2;
        total_err = total_err - worst.err + le + re;
        seq += 1;
        heap.push(Node { lo: worst.lo, hi: mid, value: lv, err: le, depth: worst.depth + 1, seq });
        seq += 1;
        heap.push(Node { lo: mid, hi: worst.hi, value: rv, err: re, depth: worst.depth + 1, seq });
    }

    // deterministic left-to-right summation over the final partition
    let mut leaves: Vec<Node<T>> = heap.into_vec();
    leaves.append(&mut settled);
    leaves.sort_by(|a, b| ord_key(a.lo, b.lo));
    let mut sum = Complex::new(T::zero(), T::zero());
    let mut err_sum = T::zero();
    for n in &leaves {
        sum = sum + n.value;
        err_sum = err_sum + n.err;
    }
    if !(err_sum <= tol) {
        return Err(Error::ToleranceNotMet {
            requested: tol.to_f64().unwrap_or(f64::NAN),
            achieved: err_sum.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok((sum, err_sum))
}

/// Integrates `phi` along the straight segment from `a` to `b` to within
/// the absolute tolerance `tol`, returning the integral and the achieved
/// error estimate.
pub fn integrate_segment_with_estimate<T: Real>(
    phi: &dyn Fn(Complex<T>) -> Complex<T>,
    a: Complex<T>,
    b: Complex<T>,
    tol: T,
) -> Result<(Complex<T>, T)> {
    if !(tol > T::zero()) {
        return Err(Error::invalid("quadrature tolerance must be positive"));
    }
    let dir = b - a;
    if dir.norm() == T::zero() {
        return Ok((Complex::new(T::zero(), T::zero()), T::zero()));
    }
    let f = |t: T| phi(a + dir * t) * dir;
    adaptive(&f, T::zero(), T::one(), tol)
}

/// Integrates `phi` along the straight segment from `a` to `b`.
pub fn integrate_segment<T: Real>(
    phi: &dyn Fn(Complex<T>) -> Complex<T>,
    a: Complex<T>,
    b: Complex<T>,
    tol: T,
) -> Result<Complex<T>> {
    integrate_segment_with_estimate(phi, a, b, tol).map(|(v, _)| v)
}

/// Distance from point `p` to the segment [a, b].
fn point_segment_distance<T: Real>(p: Complex<T>, a: Complex<T>, b: Complex<T>) -> T {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == T::zero() {
        return (p - a).norm();
    }
    let t = ((p - a).re * ab.re + (p - a).im * ab.im) / len2;
    let t = t.max(T::zero()).min(T::one());
    (p - (a + ab * t)).norm()
}

/// Piecewise-linear integration path that keeps a declared clearance from
/// a set of punctures.
#[derive(Clone, Debug)]
pub struct PathPolyline<T = f64> {
    vertices: Vec<Complex<T>>,
    clearance: T,
}

impl<T: Real> PathPolyline<T> {
    /// Validates that consecutive vertices are distinct and that every
    /// segment keeps at least `clearance` distance from every puncture.
    pub fn new(
        vertices: Vec<Complex<T>>,
        clearance: T,
        punctures: &[Complex<T>],
    ) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::invalid("a path needs at least one vertex"));
        }
        if !(clearance > T::zero()) {
            return Err(Error::invalid("path clearance must be positive"));
        }
        let slack = clearance * (T::one() - cst::<T>(1e-9));
        for w in vertices.windows(2) {
            if (w[1] - w[0]).norm() == T::zero() {
                return Err(Error::invalid("consecutive path vertices coincide"));
            }
            for &p in punctures {
                let d = point_segment_distance(p, w[0], w[1]);
                if d < slack {
                    return Err(Error::invalid(format!(
                        "path segment passes within {:e} of a puncture (clearance {:e})",
                        d.to_f64().unwrap_or(f64::NAN),
                        clearance.to_f64().unwrap_or(f64::NAN),
                    )));
                }
            }
        }
        Ok(PathPolyline {
            vertices,
            clearance,
        })
    }

    pub fn vertices(&self) -> &[Complex<T>] {
        &self.vertices
    }

    pub fn clearance(&self) -> T {
        self.clearance
    }

    pub fn length(&self) -> T {
        self.vertices
            .windows(2)
            .fold(T::zero(), |acc, w| acc + (w[1] - w[0]).norm())
    }
}

/// Integrates `phi` along a polyline, splitting the tolerance across
/// segments in proportion to their length.
pub fn integrate_path<T: Real>(
    phi: &dyn Fn(Complex<T>) -> Complex<T>,
    path: &PathPolyline<T>,
    tol: T,
) -> Result<Complex<T>> {
    let total = path.length();
    if total == T::zero() {
        return Ok(Complex::new(T::zero(), T::zero()));
    }
    let mut acc = Complex::new(T::zero(), T::zero());
    for w in path.vertices().windows(2) {
        let share = tol * (w[1] - w[0]).norm() / total;
        let share = share.max(tol * cst::<T>(1e-3));
        acc = acc + integrate_segment(phi, w[0], w[1], share)?;
    }
    Ok(acc)
}

/// Inserts polygonal detours around punctures into a waypoint list. The
/// detour arc sits at radius `1.25 * clearance` on the side of the
/// puncture facing the disk center, so every replacement vertex stays in
/// the closed disk whenever the original segment does.
fn insert_detours<T: Real>(
    waypoints: &[Complex<T>],
    punctures: &[Complex<T>],
    clearance: T,
) -> Vec<Complex<T>> {
    let radius = clearance * cst::<T>(1.25);
    let mut out = vec![waypoints[0]];
    for w in waypoints.windows(2) {
        let (a, b) = (w[0], w[1]);
        // collect detours along this segment, ordered by entry parameter
        let mut arcs: Vec<(T, Vec<Complex<T>>)> = Vec::new();
        for &p in punctures {
            if point_segment_distance(p, a, b) >= radius {
                continue;
            }
            if let Some((t_in, t_out)) = circle_crossing(a, b, p, radius) {
                let entry = a + (b - a) * t_in;
                let exit = a + (b - a) * t_out;
                let arc = detour_arc(entry, exit, p, radius);
                arcs.push((t_in, arc));
            }
        }
        arcs.sort_by(|x, y| x.0.partial_cmp(&y.0).expect("finite parameters"));
        for (_, arc) in arcs {
            out.extend(arc);
        }
        out.push(b);
    }
    // drop consecutive duplicates introduced by tangential crossings
    let mut dedup: Vec<Complex<T>> = Vec::with_capacity(out.len());
    for v in out {
        if dedup
            .last()
            .map_or(true, |&u| (v - u).norm() > T::epsilon() * cst::<T>(32.0))
        {
            dedup.push(v);
        }
    }
    dedup
}

/// Parameters where segment [a, b] crosses the circle of the given radius
/// around `p`, if the crossing is transversal and interior to the segment.
fn circle_crossing<T: Real>(
    a: Complex<T>,
    b: Complex<T>,
    p: Complex<T>,
    radius: T,
) -> Option<(T, T)> {
    let d = b - a;
    let f = a - p;
    let qa = d.norm_sqr();
    let qb = cst::<T>(2.0) * (f.re * d.re + f.im * d.im);
    let qc = f.norm_sqr() - radius * radius;
    let disc = qb * qb - cst::<T>(4.0) * qa * qc;
    if disc <= T::zero() || qa == T::zero() {
        return None;
    }
    let sq = disc.sqrt();
    let t1 = (-qb - sq) / (cst::<T>(2.0) * qa);
    let t2 = (-qb + sq) / (cst::<T>(2.0) * qa);
    let t_in = t1.max(T::zero());
    let t_out = t2.min(T::one());
    if t_in >= t_out {
        return None;
    }
    Some((t_in, t_out))
}

/// Polygonal arc from `entry` to `exit` on the circle of the given radius
/// around `p`, swept through the direction pointing at the disk center.
fn detour_arc<T: Real>(
    entry: Complex<T>,
    exit: Complex<T>,
    p: Complex<T>,
    radius: T,
) -> Vec<Complex<T>> {
    let tau = cst::<T>(2.0) * T::PI();
    let norm_angle = |x: T| {
        let mut a = x % tau;
        if a < T::zero() {
            a = a + tau;
        }
        a
    };
    let psi_entry = (entry - p).arg();
    let psi_exit = (exit - p).arg();
    let psi_inward = (-p).arg();
    let ccw_total = norm_angle(psi_exit - psi_entry);
    let ccw_to_inward = norm_angle(psi_inward - psi_entry);
    let (sweep, sign) = if ccw_to_inward <= ccw_total {
        (ccw_total, T::one())
    } else {
        (tau - ccw_total, -T::one())
    };
    let steps = (sweep / cst::<T>(std::f64::consts::FRAC_PI_8))
        .ceil()
        .to_f64()
        .unwrap_or(1.0)
        .max(1.0) as usize;
    let mut arc = Vec::with_capacity(steps + 1);
    for k in 0..=steps {
        let frac = cst::<T>(k as f64) / cst::<T>(steps as f64);
        let ang = psi_entry + sign * sweep * frac;
        arc.push(p + Complex::from_polar(radius, ang));
    }
    arc
}

/// Builds a clearance-respecting polyline through the given waypoints and
/// integrates `phi` along it.
fn integrate_waypoints<T: Real>(
    t: &WeierstrassTriple<T>,
    waypoints: &[Complex<T>],
    tol: T,
    clearance: T,
) -> Result<Complex<T>> {
    let anchors = t.spectrum().anchors();
    let vertices = insert_detours(waypoints, anchors, clearance);
    let path = PathPolyline::new(vertices, clearance * cst::<T>(0.7), anchors)?;
    let phi = |z: Complex<T>| t.phi(z);
    integrate_path(&phi, &path, tol)
}

/// Clearance actually used for path construction: small enough that
/// detours around one anchor cannot collide with a neighbouring anchor or
/// swallow the target point.
fn effective_clearance<T: Real>(t: &WeierstrassTriple<T>, delta: T, target_dist: T) -> T {
    let anchors = t.spectrum().anchors();
    let mut min_gap = T::infinity();
    for i in 0..anchors.len() {
        for j in (i + 1)..anchors.len() {
            min_gap = min_gap.min((anchors[i] - anchors[j]).norm());
        }
    }
    let mut eff = delta.min(cst(0.25));
    if min_gap.is_finite() {
        eff = eff.min(min_gap * cst(0.25));
    }
    eff.min(target_dist / cst(1.5))
}

/// Maps one point: `F(z) = F0 + integral of Phi from 0 to z` along a
/// straight path with detours around anchors.
///
/// `z` must lie in the closed disk at distance at least `delta` from every
/// anchor.
pub fn map_point<T: Real>(
    t: &WeierstrassTriple<T>,
    z: Complex<T>,
    f0: Complex<T>,
    tol: T,
    delta: T,
) -> Result<Complex<T>> {
    if !(delta > T::zero()) {
        return Err(Error::invalid("clearance delta must be positive"));
    }
    if z.norm() > T::one() + cst(1e-12) {
        return Err(Error::invalid("map target must lie in the closed disk"));
    }
    let dist = t.anchor_clearance(z);
    if dist < delta {
        return Err(Error::PunctureTooClose {
            distance: dist.to_f64().unwrap_or(f64::NAN),
            required: delta.to_f64().unwrap_or(f64::NAN),
        });
    }
    if z.norm() == T::zero() {
        return Ok(f0);
    }
    let eff = effective_clearance(t, delta, dist);
    let origin = Complex::new(T::zero(), T::zero());
    Ok(f0 + integrate_waypoints(t, &[origin, z], tol, eff)?)
}

/// One mapped grid sample.
#[derive(Clone, Copy, Debug)]
pub struct GridSample<T = f64> {
    pub z: Complex<T>,
    pub f: Complex<T>,
    pub u: T,
}

/// Polar grid of mapped samples. `base_point` with `base_value` records
/// the integration base (`F(base_point) = base_value`).
#[derive(Clone, Debug)]
pub struct FieldGrid<T = f64> {
    pub samples: Vec<GridSample<T>>,
    pub base_point: Complex<T>,
    pub base_value: Complex<T>,
}

/// Maps a polar grid with `radial` rings and `angular` rays, radii
/// `rmax * i / radial` (i = 1..radial) and angles `2 pi j / angular`.
/// Samples are ordered ray-major: all radii of ray 0, then ray 1, ...
///
/// Each ray is integrated incrementally outward from the origin, so the
/// cost is linear in the number of samples.
pub fn map_grid<T: Real>(
    t: &WeierstrassTriple<T>,
    radial: usize,
    angular: usize,
    rmax: T,
    tol: T,
) -> Result<FieldGrid<T>> {
    if radial < 2 || angular < 2 {
        return Err(Error::invalid("grid needs radial >= 2 and angular >= 2"));
    }
    if !(rmax > T::zero() && rmax < T::one()) {
        return Err(Error::invalid("rmax must lie strictly between 0 and 1"));
    }
    let tau = cst::<T>(2.0) * T::PI();
    let seg_tol = (tol / cst::<T>(radial as f64)).max(tol * cst::<T>(1e-3));
    let phi_form = |z: Complex<T>| t.phi(z);
    let mut samples = Vec::with_capacity(radial * angular);
    for j in 0..angular {
        let ang = tau * cst::<T>(j as f64) / cst::<T>(angular as f64);
        let dir = Complex::from_polar(T::one(), ang);
        let mut f = Complex::new(T::zero(), T::zero());
        let mut prev = Complex::new(T::zero(), T::zero());
        let mut phi_prev = phi_form(prev).norm();
        for i in 1..=radial {
            let r = rmax * cst::<T>(i as f64) / cst::<T>(radial as f64);
            let zi = dir * r;
            let phi_here = phi_form(zi).norm();
            // a ring step toward the boundary can carry more mass than
            // the requested budget resolves in floating point; floor it
            // by the roundoff scale of the running value and of the
            // step's increment, bounded through the endpoint form sizes
            let mass = (zi - prev).norm() * phi_prev.max(phi_here);
            let step_tol = seg_tol
                .max(cst::<T>(200.0) * T::epsilon() * (T::one() + f.norm() + mass));
            f = f + integrate_segment(&phi_form, prev, zi, step_tol)?;
            let u = t.roof(zi)?;
            samples.push(GridSample { z: zi, f, u });
            prev = zi;
            phi_prev = phi_here;
        }
    }
    Ok(FieldGrid {
        samples,
        base_point: Complex::new(T::zero(), T::zero()),
        base_value: Complex::new(T::zero(), T::zero()),
    })
}

/// Integrates `Phi` from 0 to `z` along two homotopic paths, the direct
/// segment and a radial-then-arc route, and returns the absolute
/// difference. For a holomorphic integrand the true difference is zero,
/// so the result is bounded by twice the quadrature tolerance.
pub fn check_path_independence<T: Real>(
    t: &WeierstrassTriple<T>,
    z: Complex<T>,
    tol: T,
) -> Result<T> {
    let r = z.norm();
    if r == T::zero() {
        return Ok(T::zero());
    }
    if r > T::one() + cst(1e-12) {
        return Err(Error::invalid("target must lie in the closed disk"));
    }
    let delta = cst::<T>(DEFAULT_CLEARANCE);
    let dist = t.anchor_clearance(z);
    if dist < delta {
        return Err(Error::PunctureTooClose {
            distance: dist.to_f64().unwrap_or(f64::NAN),
            required: delta.to_f64().unwrap_or(f64::NAN),
        });
    }
    let eff = effective_clearance(t, delta, dist);
    let origin = Complex::new(T::zero(), T::zero());

    let direct = integrate_waypoints(t, &[origin, z], tol, eff)?;

    // radial leg along the positive real axis, then a circular arc
    let theta = z.arg();
    let mut waypoints = vec![origin, Complex::new(r, T::zero())];
    let steps = ((theta.abs() / cst::<T>(std::f64::consts::PI / 64.0))
        .ceil()
        .to_f64()
        .unwrap_or(1.0) as usize)
        .max(1);
    for k in 1..=steps {
        let a = theta * cst::<T>(k as f64) / cst::<T>(steps as f64);
        waypoints.push(Complex::from_polar(r, a));
    }
    let routed = integrate_waypoints(t, &waypoints, tol, eff)?;

    Ok((direct - routed).norm())
}
