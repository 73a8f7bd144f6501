//! Plane geometry on traced curves: transversal self-intersection
//! detection, complex similarity fitting, and arc-length correspondence
//! between curves that are expected to be similar.

use num_complex::Complex;

use super::boundary::BoundaryCurve;
use crate::error::{Error, Result};
use crate::scalar::{cst, Real};

/// Crossings closer than this (in segment parameter) to an endpoint are
/// treated as shared endpoints, not transversal crossings.
const ENDPOINT_TOL: f64 = 1e-9;

/// One transversal crossing between two polyline segments.
#[derive(Clone, Copy, Debug)]
pub struct Crossing<T = f64> {
    pub curve_a: usize,
    pub seg_a: usize,
    pub curve_b: usize,
    pub seg_b: usize,
    pub point: Complex<T>,
}

struct SweepSegment<T> {
    curve: usize,
    seg: usize,
    p: Complex<T>,
    q: Complex<T>,
    xmin: T,
    xmax: T,
    ymin: T,
    ymax: T,
}

/// Finds all transversal crossings between and within the given traced
/// curves by an interval sweep over the segment x-extents. Crossings at
/// shared endpoints and between adjacent segments of the same curve are
/// excluded; parallel overlaps are ignored.
pub fn self_intersections<T: Real>(curves: &[BoundaryCurve<T>]) -> Vec<Crossing<T>> {
    let mut segments: Vec<SweepSegment<T>> = Vec::new();
    for (ci, curve) in curves.iter().enumerate() {
        for (si, w) in curve.points.windows(2).enumerate() {
            let (p, q) = (w[0], w[1]);
            if (q - p).norm() == T::zero() {
                continue;
            }
            segments.push(SweepSegment {
                curve: ci,
                seg: si,
                p,
                q,
                xmin: p.re.min(q.re),
                xmax: p.re.max(q.re),
                ymin: p.im.min(q.im),
                ymax: p.im.max(q.im),
            });
        }
    }
    let mut order: Vec<usize> = (0..segments.len()).collect();
    order.sort_by(|&a, &b| {
        segments[a]
            .xmin
            .partial_cmp(&segments[b].xmin)
            .expect("finite coordinates")
            .then(a.cmp(&b))
    });

    let mut crossings = Vec::new();
    let mut active: Vec<usize> = Vec::new();
    for &idx in &order {
        let s = &segments[idx];
        active.retain(|&a| segments[a].xmax >= s.xmin);
        for &a in &active {
            let o = &segments[a];
            if s.curve == o.curve && s.seg.abs_diff(o.seg) <= 1 {
                continue;
            }
            if o.ymax < s.ymin || s.ymax < o.ymin {
                continue;
            }
            if let Some(point) = transversal_crossing(o.p, o.q, s.p, s.q) {
                let (first, second) = if (o.curve, o.seg) <= (s.curve, s.seg) {
                    (o, s)
                } else {
                    (s, o)
                };
                crossings.push(Crossing {
                    curve_a: first.curve,
                    seg_a: first.seg,
                    curve_b: second.curve,
                    seg_b: second.seg,
                    point,
                });
            }
        }
        active.push(idx);
    }
    crossings.sort_by(|x, y| {
        (x.curve_a, x.seg_a, x.curve_b, x.seg_b).cmp(&(y.curve_a, y.seg_a, y.curve_b, y.seg_b))
    });
    crossings
}

fn cross<T: Real>(a: Complex<T>, b: Complex<T>) -> T {
    a.re * b.im - a.im * b.re
}

/// Interior transversal crossing of segments [p1, q1] and [p2, q2],
/// if any.
fn transversal_crossing<T: Real>(
    p1: Complex<T>,
    q1: Complex<T>,
    p2: Complex<T>,
    q2: Complex<T>,
) -> Option<Complex<T>> {
    let r = q1 - p1;
    let s = q2 - p2;
    let denom = cross(r, s);
    if denom.abs() <= cst::<T>(1e-14) * r.norm() * s.norm() {
        return None;
    }
    let d = p2 - p1;
    let t = cross(d, s) / denom;
    let u = cross(d, r) / denom;
    let lo = cst::<T>(ENDPOINT_TOL);
    let hi = T::one() - lo;
    if t < lo || t > hi || u < lo || u > hi {
        return None;
    }
    Some(p1 + r * t)
}

/// Orientation-preserving (or reflecting) plane similarity
/// `w = lambda z + c`, respectively `w = lambda conj(z) + c`.
#[derive(Clone, Copy, Debug)]
pub struct SimilarityTransform<T = f64> {
    pub rotation_scale: Complex<T>,
    pub translation: Complex<T>,
    pub reflection: bool,
}

impl<T: Real> SimilarityTransform<T> {
    pub fn apply(&self, z: Complex<T>) -> Complex<T> {
        let base = if self.reflection { z.conj() } else { z };
        self.rotation_scale * base + self.translation
    }

    /// The inverse similarity; reflections invert to reflections.
    pub fn inverse(&self) -> Self {
        if self.reflection {
            let l = self.rotation_scale.conj();
            SimilarityTransform {
                rotation_scale: l.inv(),
                translation: -(self.translation.conj()) / l,
                reflection: true,
            }
        } else {
            SimilarityTransform {
                rotation_scale: self.rotation_scale.inv(),
                translation: -self.translation / self.rotation_scale,
                reflection: false,
            }
        }
    }
}

/// Least-squares similarity from points `a` to points `b` (paired by
/// index). Returns the transform together with the normalized residual:
/// root-mean-square error divided by the diameter of `b`.
///
/// With `allow_reflection` the reflecting fit is also computed and the
/// better of the two is returned.
pub fn fit_similarity<T: Real>(
    a: &[Complex<T>],
    b: &[Complex<T>],
    allow_reflection: bool,
) -> Result<(SimilarityTransform<T>, T)> {
    if a.len() != b.len() || a.len() < 2 {
        return Err(Error::invalid(
            "similarity fitting needs two equally long point lists with at least 2 points",
        ));
    }
    let diameter = point_set_diameter(b);
    if diameter == T::zero() {
        return Err(Error::DegenerateConfiguration);
    }
    let direct = lsq_similarity(a, b, false)?;
    let best = if allow_reflection {
        let mirrored = lsq_similarity(a, b, true)?;
        if mirrored.1 < direct.1 {
            mirrored
        } else {
            direct
        }
    } else {
        direct
    };
    Ok((best.0, best.1 / diameter))
}

fn lsq_similarity<T: Real>(
    a: &[Complex<T>],
    b: &[Complex<T>],
    reflect: bool,
) -> Result<(SimilarityTransform<T>, T)> {
    let n = cst::<T>(a.len() as f64);
    let zero = Complex::new(T::zero(), T::zero());
    let src: Vec<Complex<T>> = a
        .iter()
        .map(|&z| if reflect { z.conj() } else { z })
        .collect();
    let mean_a = src.iter().fold(zero, |acc, &z| acc + z) / n;
    let mean_b = b.iter().fold(zero, |acc, &z| acc + z) / n;
    let mut num = zero;
    let mut den = T::zero();
    for (&x, &y) in src.iter().zip(b) {
        let xa = x - mean_a;
        num = num + xa.conj() * (y - mean_b);
        den = den + xa.norm_sqr();
    }
    if den == T::zero() {
        return Err(Error::DegenerateConfiguration);
    }
    let lambda = num / den;
    let translation = mean_b - lambda * mean_a;
    let mut sq = T::zero();
    for (&x, &y) in src.iter().zip(b) {
        sq = sq + (lambda * x + translation - y).norm_sqr();
    }
    let rms = (sq / n).sqrt();
    Ok((
        SimilarityTransform {
            rotation_scale: lambda,
            translation,
            reflection: reflect,
        },
        rms,
    ))
}

fn point_set_diameter<T: Real>(pts: &[Complex<T>]) -> T {
    let mut d = T::zero();
    for i in 0..pts.len() {
        for j in (i + 1)..pts.len() {
            d = d.max((pts[i] - pts[j]).norm());
        }
    }
    d
}

/// Arc-length table of a polyline: cumulative length at each vertex.
fn cumulative_lengths<T: Real>(pts: &[Complex<T>]) -> Vec<T> {
    let mut cum = Vec::with_capacity(pts.len());
    let mut acc = T::zero();
    cum.push(acc);
    for w in pts.windows(2) {
        acc = acc + (w[1] - w[0]).norm();
        cum.push(acc);
    }
    cum
}

/// Point at arc position `s` (clamped) by linear interpolation.
fn point_at<T: Real>(pts: &[Complex<T>], cum: &[T], s: T) -> Complex<T> {
    let total = cum[cum.len() - 1];
    let s = s.max(T::zero()).min(total);
    let mut lo = 0usize;
    let mut hi = cum.len() - 1;
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if cum[mid] <= s {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let seg_len = cum[hi] - cum[lo];
    if seg_len == T::zero() {
        return pts[lo];
    }
    let t = (s - cum[lo]) / seg_len;
    pts[lo] + (pts[hi] - pts[lo]) * t
}

/// Arc position of the point of largest discrete curvature (exterior
/// angle over the mean adjacent segment length). Curvature argmax is
/// equivariant under similarities, so corresponding curves anchor at
/// corresponding points; a straight polyline falls back to its midpoint.
/// The discrete peak is sharpened by parabolic interpolation through the
/// neighbouring curvature values.
fn max_curvature_position<T: Real>(pts: &[Complex<T>], cum: &[T]) -> T {
    let n = pts.len();
    let kappa = |i: usize| -> T {
        let d0 = pts[i] - pts[i - 1];
        let d1 = pts[i + 1] - pts[i];
        let (l0, l1) = (d0.norm(), d1.norm());
        if l0 == T::zero() || l1 == T::zero() {
            return T::zero();
        }
        (d1 * d0.conj()).arg().abs() / ((l0 + l1) * cst::<T>(0.5))
    };
    let mut best_i = 0usize;
    let mut best_k = T::zero();
    for i in 1..n - 1 {
        let k = kappa(i);
        if k > best_k {
            best_k = k;
            best_i = i;
        }
    }
    if best_i == 0 {
        return cum[cum.len() - 1] * cst::<T>(0.5);
    }
    if best_i == 1 || best_i == n - 2 {
        return cum[best_i];
    }
    // vertex of the parabola through the three (position, curvature) pairs
    let (s0, s1, s2) = (cum[best_i - 1], cum[best_i], cum[best_i + 1]);
    let (k0, k1, k2) = (kappa(best_i - 1), best_k, kappa(best_i + 1));
    let num = (s0 - s1) * (s0 - s1) * (k1 - k2) - (s2 - s1) * (s2 - s1) * (k1 - k0);
    let den = cst::<T>(2.0) * ((s0 - s1) * (k1 - k2) - (s2 - s1) * (k1 - k0));
    if den == T::zero() {
        return s1;
    }
    let s = s1 + num / den;
    if s > s0 && s < s2 {
        s
    } else {
        s1
    }
}

/// Unwrapped tangent angle per segment, positioned at the segment
/// midpoint arc position. Returns (positions, angles).
fn tangent_profile<T: Real>(pts: &[Complex<T>], cum: &[T]) -> (Vec<T>, Vec<T>) {
    let tau = cst::<T>(2.0) * T::PI();
    let mut pos = Vec::with_capacity(pts.len() - 1);
    let mut ang = Vec::with_capacity(pts.len() - 1);
    let mut prev: Option<T> = None;
    for (i, w) in pts.windows(2).enumerate() {
        let mut a = (w[1] - w[0]).arg();
        if let Some(p) = prev {
            while a - p > T::PI() {
                a = a - tau;
            }
            while p - a > T::PI() {
                a = a + tau;
            }
        }
        prev = Some(a);
        pos.push((cum[i] + cum[i + 1]) * cst::<T>(0.5));
        ang.push(a);
    }
    (pos, ang)
}

/// Linear interpolation of the tangent profile at arc position `s`.
fn tangent_at<T: Real>(pos: &[T], ang: &[T], s: T) -> T {
    if s <= pos[0] {
        return ang[0];
    }
    if s >= pos[pos.len() - 1] {
        return ang[ang.len() - 1];
    }
    let mut lo = 0usize;
    let mut hi = pos.len() - 1;
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if pos[mid] <= s {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let t = (s - pos[lo]) / (pos[hi] - pos[lo]);
    ang[lo] + (ang[hi] - ang[lo]) * t
}

/// Arc position where the monotone envelope of the turning profile first
/// reaches `target`; the profile is swept from the vertex outward.
fn arc_position_of_turning<T: Real>(
    pos: &[T],
    turn: &[T],
    vertex: T,
    target: T,
) -> Option<T> {
    // walk outward from the vertex in the direction matching the sign
    let forward = target >= T::zero();
    let mut prev_s = vertex;
    let mut prev_t = T::zero();
    let idx: Vec<usize> = if forward {
        (0..pos.len()).filter(|&i| pos[i] > vertex).collect()
    } else {
        (0..pos.len()).filter(|&i| pos[i] < vertex).rev().collect()
    };
    let mut best = T::zero(); // running extreme of the turning
    for i in idx {
        let mut tv = turn[i];
        // monotone envelope: turning may jitter at sample scale
        if forward {
            tv = tv.max(best);
            best = tv;
            if tv >= target {
                let t = if tv == prev_t {
                    T::zero()
                } else {
                    (target - prev_t) / (tv - prev_t)
                };
                return Some(prev_s + (pos[i] - prev_s) * t);
            }
        } else {
            tv = tv.min(best);
            best = tv;
            if tv <= target {
                let t = if tv == prev_t {
                    T::zero()
                } else {
                    (target - prev_t) / (tv - prev_t)
                };
                return Some(prev_s + (pos[i] - prev_s) * t);
            }
        }
        prev_s = pos[i];
        prev_t = tv;
    }
    None
}

struct CurveTables<T> {
    pts: Vec<Complex<T>>,
    cum: Vec<T>,
    vertex: T,
    /// turning = tangent angle minus tangent angle at the vertex
    turn_pos: Vec<T>,
    turn: Vec<T>,
}

impl<T: Real> CurveTables<T> {
    /// Canonicalizes the orientation so that the turning increases along
    /// the parameter; the sampled point pairs are orientation-free, and
    /// the outward walks assume counterclockwise profiles.
    fn build(points: &[Complex<T>]) -> Result<Self> {
        let fwd = Self::build_oriented(points)?;
        let turn = &fwd.turn;
        if turn[turn.len() - 1] - turn[0] >= T::zero() {
            return Ok(fwd);
        }
        let rev: Vec<Complex<T>> = points.iter().rev().copied().collect();
        Self::build_oriented(&rev)
    }

    fn build_oriented(points: &[Complex<T>]) -> Result<Self> {
        if points.len() < 3 {
            return Err(Error::invalid("curve correspondence needs at least 3 points"));
        }
        let pts = points.to_vec();
        let cum = cumulative_lengths(&pts);
        if cum[cum.len() - 1] == T::zero() {
            return Err(Error::DegenerateConfiguration);
        }
        let vertex = max_curvature_position(&pts, &cum);
        let (turn_pos, raw) = tangent_profile(&pts, &cum);
        let at_vertex = tangent_at(&turn_pos, &raw, vertex);
        let turn: Vec<T> = raw.iter().map(|&a| a - at_vertex).collect();
        Ok(CurveTables {
            pts,
            cum,
            vertex,
            turn_pos,
            turn,
        })
    }

    fn turning_range(&self) -> (T, T) {
        let lo = self.turn.iter().fold(T::zero(), |m, &t| m.min(t));
        let hi = self.turn.iter().fold(T::zero(), |m, &t| m.max(t));
        (lo, hi)
    }
}

/// Builds matched sample lists on two curves that are expected to be
/// similar.
///
/// Both curves are anchored at their point of largest curvature and
/// canonicalized to counterclockwise turning, so their parametrizations
/// need not agree. The usable window is clipped to the turning range
/// (tangent rotation relative to the anchor) covered by both curves,
/// which is invariant under orientation-preserving similarities; within
/// the window, samples are paired by normalized arc length from the
/// anchor, separately on each side.
pub fn correspond_curves<T: Real>(
    a: &[Complex<T>],
    b: &[Complex<T>],
    samples: usize,
) -> Result<(Vec<Complex<T>>, Vec<Complex<T>>)> {
    if samples < 4 {
        return Err(Error::invalid("correspondence needs at least 4 samples"));
    }
    let ta = CurveTables::build(a)?;
    let tb = CurveTables::build(b)?;
    let pairs = try_correspondence(&ta, &tb, samples).ok_or(Error::DegenerateConfiguration)?;
    if pairs.0.len() < 4 {
        return Err(Error::DegenerateConfiguration);
    }
    Ok(pairs)
}

fn try_correspondence<T: Real>(
    ta: &CurveTables<T>,
    tb: &CurveTables<T>,
    samples: usize,
) -> Option<(Vec<Complex<T>>, Vec<Complex<T>>)> {
    let (lo_a, hi_a) = ta.turning_range();
    let (lo_b, hi_b) = tb.turning_range();
    let lo = lo_a.max(lo_b);
    let hi = hi_a.min(hi_b);
    if !(hi > T::zero() && lo < T::zero()) {
        return None;
    }
    let shrink = cst::<T>(0.98);
    let lo = lo * shrink;
    let hi = hi * shrink;

    // window ends in arc position on each curve
    let sa_hi = arc_position_of_turning(&ta.turn_pos, &ta.turn, ta.vertex, hi)?;
    let sa_lo = arc_position_of_turning(&ta.turn_pos, &ta.turn, ta.vertex, lo)?;
    let sb_hi = arc_position_of_turning(&tb.turn_pos, &tb.turn, tb.vertex, hi)?;
    let sb_lo = arc_position_of_turning(&tb.turn_pos, &tb.turn, tb.vertex, lo)?;

    let half = (samples / 2).max(2);
    let mut pa = Vec::with_capacity(2 * half + 1);
    let mut pb = Vec::with_capacity(2 * half + 1);
    pa.push(point_at(&ta.pts, &ta.cum, ta.vertex));
    pb.push(point_at(&tb.pts, &tb.cum, tb.vertex));
    for m in 0..half {
        let g = (cst::<T>(m as f64) + cst::<T>(0.5)) / cst::<T>(half as f64);
        // positive-turning side
        pa.push(point_at(&ta.pts, &ta.cum, ta.vertex + (sa_hi - ta.vertex) * g));
        pb.push(point_at(&tb.pts, &tb.cum, tb.vertex + (sb_hi - tb.vertex) * g));
        // negative-turning side
        pa.push(point_at(&ta.pts, &ta.cum, ta.vertex + (sa_lo - ta.vertex) * g));
        pb.push(point_at(&tb.pts, &tb.cum, tb.vertex + (sb_lo - tb.vertex) * g));
    }
    Some((pa, pb))
}

/// Projects `p` onto the polyline, returning the closest point.
fn project_onto<T: Real>(pts: &[Complex<T>], p: Complex<T>) -> Complex<T> {
    let mut best = pts[0];
    let mut best_d = T::infinity();
    for w in pts.windows(2) {
        let d = w[1] - w[0];
        let len2 = d.norm_sqr();
        let t = if len2 == T::zero() {
            T::zero()
        } else {
            (((p - w[0]).re * d.re + (p - w[0]).im * d.im) / len2)
                .max(T::zero())
                .min(T::one())
        };
        let cand = w[0] + d * t;
        let dist = (p - cand).norm();
        if dist < best_d {
            best_d = dist;
            best = cand;
        }
    }
    best
}

/// Fits one similarity jointly over several corresponded curve pairs and
/// refines it by alternating projection and refit: each round re-targets
/// every source sample at the projection of its image onto the
/// destination polyline, then refits. Projection removes the tangential
/// drift the turning-based correspondence leaves near flat curve ends.
/// Returns the transform and the normalized residual (RMS over all
/// samples divided by the diameter of the final targets).
pub fn fit_matched_curves<T: Real>(
    pairs: &[(&[Complex<T>], &[Complex<T>])],
    samples_per_curve: usize,
    allow_reflection: bool,
) -> Result<(SimilarityTransform<T>, T)> {
    if pairs.is_empty() {
        return Err(Error::invalid("at least one curve pair is required"));
    }
    let mut src = Vec::new();
    let mut dst = Vec::new();
    let mut spans = Vec::new();
    for (a, b) in pairs {
        let (pa, pb) = correspond_curves(a, b, samples_per_curve)?;
        spans.push((src.len(), pa.len()));
        src.extend(pa);
        dst.extend(pb);
    }
    let (mut tr, mut residual) = fit_similarity(&src, &dst, allow_reflection)?;
    for _ in 0..25 {
        let mut refined = Vec::with_capacity(src.len());
        for ((_, b), &(offset, count)) in pairs.iter().zip(&spans) {
            for s in &src[offset..offset + count] {
                refined.push(project_onto(b, tr.apply(*s)));
            }
        }
        let (next, next_res) = fit_similarity(&src, &refined, allow_reflection)?;
        let improved = next_res < residual * (T::one() - cst::<T>(1e-3));
        tr = next;
        residual = next_res;
        if !improved {
            break;
        }
    }
    Ok((tr, residual))
}

/// Matches traced boundary curves against the hairpin boundary branches
/// `x ± i (pi/2 + cosh x)` over `|x| <= halfwidth` and returns the best
/// joint similarity with its normalized residual.
///
/// Accepts one curve (matched against either branch) or two curves
/// (matched against both branches in the pairing that fits best).
pub fn fit_to_hairpin<T: Real>(
    curves: &[&[Complex<T>]],
    halfwidth: T,
    samples_per_curve: usize,
) -> Result<(SimilarityTransform<T>, T)> {
    let count = 2001usize;
    let branch = |upper: bool| -> Vec<Complex<T>> {
        (0..count)
            .map(|k| {
                let x = halfwidth * (cst::<T>(2.0) * cst::<T>(k as f64) / cst::<T>((count - 1) as f64) - T::one());
                super::hairpin_boundary_point(x, upper)
            })
            .collect()
    };
    let upper = branch(true);
    let lower = branch(false);
    match curves {
        [single] => {
            let up = fit_matched_curves(&[(*single, upper.as_slice())], samples_per_curve, false);
            let down = fit_matched_curves(&[(*single, lower.as_slice())], samples_per_curve, false);
            match (up, down) {
                (Ok(a), Ok(b)) => Ok(if a.1 <= b.1 { a } else { b }),
                (Ok(a), Err(_)) => Ok(a),
                (Err(_), Ok(b)) => Ok(b),
                (Err(e), Err(_)) => Err(e),
            }
        }
        [first, second] => {
            let straight = fit_matched_curves(
                &[(*first, upper.as_slice()), (*second, lower.as_slice())],
                samples_per_curve,
                false,
            );
            let swapped = fit_matched_curves(
                &[(*first, lower.as_slice()), (*second, upper.as_slice())],
                samples_per_curve,
                false,
            );
            match (straight, swapped) {
                (Ok(a), Ok(b)) => Ok(if a.1 <= b.1 { a } else { b }),
                (Ok(a), Err(_)) => Ok(a),
                (Err(_), Ok(b)) => Ok(b),
                (Err(e), Err(_)) => Err(e),
            }
        }
        _ => Err(Error::invalid("hairpin matching expects one or two curves")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type C = Complex<f64>;

    fn c(re: f64, im: f64) -> C {
        Complex::new(re, im)
    }

    fn curve_from(points: Vec<C>) -> BoundaryCurve<f64> {
        let n = points.len();
        BoundaryCurve {
            arc_index: 0,
            thetas: (0..n).map(|k| k as f64).collect(),
            points,
            us: vec![0.0; n],
        }
    }

    #[test]
    fn crossing_segments_are_detected() {
        let a = curve_from(vec![c(-1.0, -1.0), c(1.0, 1.0)]);
        let b = curve_from(vec![c(-1.0, 1.0), c(1.0, -1.0)]);
        let hits = self_intersections(&[a, b]);
        assert_eq!(hits.len(), 1);
        assert!((hits[0].point - c(0.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn shared_endpoints_and_adjacency_do_not_count() {
        // a V shape: two segments meeting at the origin
        let v = curve_from(vec![c(-1.0, 1.0), c(0.0, 0.0), c(1.0, 1.0)]);
        assert!(self_intersections(&[v]).is_empty());
        // two curves sharing an endpoint exactly
        let a = curve_from(vec![c(-1.0, 0.0), c(0.0, 0.0)]);
        let b = curve_from(vec![c(0.0, 0.0), c(0.0, 1.0)]);
        assert!(self_intersections(&[a, b]).is_empty());
    }

    #[test]
    fn parallel_segments_are_ignored() {
        let a = curve_from(vec![c(0.0, 0.0), c(1.0, 0.0)]);
        let b = curve_from(vec![c(0.5, 0.0), c(1.5, 0.0)]);
        assert!(self_intersections(&[a, b]).is_empty());
    }

    #[test]
    fn self_crossing_polyline_is_found() {
        // a four-segment loop crossing itself once
        let pts = vec![c(0.0, 0.0), c(2.0, 0.0), c(2.0, 1.0), c(1.0, -0.5)];
        let hits = self_intersections(&[curve_from(pts)]);
        assert_eq!(hits.len(), 1);
        assert_eq!((hits[0].seg_a, hits[0].seg_b), (0, 2));
    }

    #[test]
    fn exact_similarity_is_recovered() {
        let src: Vec<C> = (0..40)
            .map(|k| {
                let t = k as f64 * 0.17;
                c(t.cos() + 0.3 * t, t.sin() - 0.1 * t * t)
            })
            .collect();
        let lambda = c(1.3, -0.7);
        let shift = c(0.4, 2.0);
        let dst: Vec<C> = src.iter().map(|&z| lambda * z + shift).collect();
        let (tr, residual) = fit_similarity(&src, &dst, false).unwrap();
        assert!((tr.rotation_scale - lambda).norm() < 1e-12);
        assert!((tr.translation - shift).norm() < 1e-12);
        assert!(residual < 1e-13);
        // round trip through the inverse
        let inv = tr.inverse();
        for &z in &src {
            assert!((inv.apply(tr.apply(z)) - z).norm() < 1e-12);
        }
    }

    #[test]
    fn reflected_data_needs_the_reflection_flag() {
        let src: Vec<C> = (0..25)
            .map(|k| {
                let t = k as f64 * 0.31;
                c(t, (1.3 * t).sin())
            })
            .collect();
        let lambda = c(0.6, 0.8);
        let dst: Vec<C> = src.iter().map(|&z| lambda * z.conj() + c(-1.0, 0.5)).collect();
        let (_, bad) = fit_similarity(&src, &dst, false).unwrap();
        let (tr, good) = fit_similarity(&src, &dst, true).unwrap();
        assert!(tr.reflection);
        assert!(good < 1e-13);
        assert!(bad > 1e-2);
        let inv = tr.inverse();
        for &z in &src {
            assert!((inv.apply(tr.apply(z)) - z).norm() < 1e-12);
        }
    }

    #[test]
    fn degenerate_input_is_rejected() {
        let a = vec![c(1.0, 1.0); 10];
        let b = vec![c(0.0, 0.0); 10];
        assert!(matches!(
            fit_similarity(&a, &b, false),
            Err(Error::DegenerateConfiguration)
        ));
    }

    #[test]
    fn corresponding_a_transformed_parabola_recovers_the_map() {
        // two discretizations of similar parabola-like arcs, different
        // sampling densities and opposite orientations
        let arc_a: Vec<C> = (0..400)
            .map(|k| {
                let x = -2.0 + 4.0 * k as f64 / 399.0;
                c(x, 1.0 + x * x)
            })
            .collect();
        let lambda = c(-0.9, 0.5);
        let shift = c(0.3, -0.8);
        let arc_b: Vec<C> = (0..631)
            .rev()
            .map(|k| {
                let x = -2.3 + 4.6 * k as f64 / 630.0;
                lambda * c(x, 1.0 + x * x) + shift
            })
            .collect();
        let (tr, residual) =
            fit_matched_curves(&[(arc_a.as_slice(), arc_b.as_slice())], 200, false).unwrap();
        assert!(residual < 1e-4, "residual = {residual}");
        assert!((tr.rotation_scale - lambda).norm() < 1e-2);
    }

    #[test]
    fn hairpin_branches_match_themselves() {
        let pts: Vec<C> = (0..2000)
            .map(|k| {
                let x = -5.0 + 10.0 * k as f64 / 1999.0;
                super::super::hairpin_boundary_point(x, true)
            })
            .collect();
        let (tr, residual) = fit_to_hairpin(&[pts.as_slice()], 6.0, 300).unwrap();
        assert!(residual < 1e-6, "residual = {residual}");
        assert!((tr.rotation_scale - c(1.0, 0.0)).norm() < 1e-3);
        assert!(tr.translation.norm() < 1e-3);
    }
}

