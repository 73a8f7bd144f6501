//! Complex polynomial arithmetic, simultaneous root finding with
//! unit-circle classification, and finite Blaschke products.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{cst, Real};

/// Magnitude below which a trailing coefficient counts as zero.
pub const COEFF_STRIP_TOL: f64 = 1e-14;

/// Default half-width of the classification band around the unit circle.
pub const DEFAULT_BOUNDARY_BAND: f64 = 1e-8;

/// Dense polynomial with complex coefficients; index `k` holds the
/// coefficient of `z^k`.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial<T = f64> {
    coeffs: Vec<Complex<T>>,
}

impl<T: Real> Polynomial<T> {
    /// Builds a polynomial, stripping trailing coefficients with magnitude
    /// at most [`COEFF_STRIP_TOL`]. An effectively empty list collapses to
    /// the zero polynomial.
    pub fn new(mut coeffs: Vec<Complex<T>>) -> Self {
        let tol = cst::<T>(COEFF_STRIP_TOL);
        while coeffs.len() > 1 && coeffs.last().map_or(false, |c| c.norm() <= tol) {
            coeffs.pop();
        }
        if coeffs.is_empty() || (coeffs.len() == 1 && coeffs[0].norm() <= tol) {
            coeffs = vec![Complex::new(T::zero(), T::zero())];
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial {
            coeffs: vec![Complex::new(T::zero(), T::zero())],
        }
    }

    pub fn constant(c: Complex<T>) -> Self {
        Polynomial::new(vec![c])
    }

    /// Monic polynomial with the given roots (repeats encode multiplicity).
    pub fn from_roots(roots: &[Complex<T>]) -> Self {
        let one = Complex::new(T::one(), T::zero());
        let mut acc = vec![one];
        for &r in roots {
            let mut next = vec![Complex::new(T::zero(), T::zero()); acc.len() + 1];
            for (k, &c) in acc.iter().enumerate() {
                next[k + 1] = next[k + 1] + c;
                next[k] = next[k] - c * r;
            }
            acc = next;
        }
        Polynomial { coeffs: acc }
    }

    /// Degree of the polynomial; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].norm() == T::zero()
    }

    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    pub fn leading(&self) -> Complex<T> {
        *self.coeffs.last().expect("coefficient list is never empty")
    }

    pub fn max_coeff_norm(&self) -> T {
        self.coeffs
            .iter()
            .fold(T::zero(), |m, c| m.max(c.norm()))
    }

    /// Horner evaluation.
    pub fn eval(&self, z: Complex<T>) -> Complex<T> {
        let mut acc = Complex::new(T::zero(), T::zero());
        for &c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Polynomial::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| c * cst::<T>(k as f64))
            .collect();
        Polynomial::new(coeffs)
    }

    pub fn scale(&self, c: Complex<T>) -> Self {
        Polynomial::new(self.coeffs.iter().map(|&a| a * c).collect())
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let zero = Complex::new(T::zero(), T::zero());
        let coeffs = (0..n)
            .map(|k| {
                let a = self.coeffs.get(k).copied().unwrap_or(zero);
                let b = rhs.coeffs.get(k).copied().unwrap_or(zero);
                a + b
            })
            .collect();
        Polynomial::new(coeffs)
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let zero = Complex::new(T::zero(), T::zero());
        let mut coeffs = vec![zero; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j] + a * b;
            }
        }
        Polynomial::new(coeffs)
    }

    /// Synthetic division by `(z - root)`; the remainder is discarded, so
    /// this is only exact when `root` actually annihilates the polynomial.
    pub fn deflate(&self, root: Complex<T>) -> Self {
        let d = self.degree();
        if d == 0 {
            return Polynomial::zero();
        }
        let zero = Complex::new(T::zero(), T::zero());
        let mut quotient = vec![zero; d];
        let mut carry = self.coeffs[d];
        for k in (0..d).rev() {
            quotient[k] = carry;
            carry = self.coeffs[k] + carry * root;
        }
        Polynomial::new(quotient)
    }

    /// Strips leading coefficients smaller than `rel_tol` times the largest
    /// coefficient magnitude. Used to drop pure roundoff in assembled
    /// polynomials without touching genuinely small absolute scales.
    pub fn strip_relative(&self, rel_tol: T) -> Self {
        let thr = self.max_coeff_norm() * rel_tol;
        let mut coeffs = self.coeffs.clone();
        while coeffs.len() > 1 && coeffs.last().map_or(false, |c| c.norm() <= thr) {
            coeffs.pop();
        }
        Polynomial::new(coeffs)
    }
}

/// Position of a root relative to the unit circle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RootLocation {
    InsideDisk,
    BoundaryBand,
    OutsideDisk,
}

/// One root with multiplicity and circle classification.
#[derive(Clone, Copy, Debug)]
pub struct Root<T = f64> {
    pub value: Complex<T>,
    pub multiplicity: usize,
    pub location: RootLocation,
}

/// All roots of a polynomial, with a certified residual bound.
#[derive(Clone, Debug)]
pub struct RootSet<T = f64> {
    pub roots: Vec<Root<T>>,
    /// max over roots of the backward error
    /// |p(root)| / sum_k |c_k| |root|^k.
    pub residual_bound: T,
}

impl<T: Real> RootSet<T> {
    pub fn total_multiplicity(&self) -> usize {
        self.roots.iter().map(|r| r.multiplicity).sum()
    }

    pub fn inside(&self) -> impl Iterator<Item = &Root<T>> {
        self.roots
            .iter()
            .filter(|r| r.location == RootLocation::InsideDisk)
    }
}

/// Finds all roots of `p` (counted with multiplicity) by an
/// Ehrlich-Aberth simultaneous iteration, then merges residual-limited
/// clusters into multiple roots and polishes each cluster with a
/// multiplicity-aware Newton step.
///
/// `tol` bounds, for every reported root, the smaller of the residual
/// scaled by max|coeff| and the backward error
/// |p(root)| / sum_k |c_k| |root|^k. The first form alone would penalize
/// distant roots for the cancellation inherent in evaluating there; the
/// second alone can never accept a nearly-zero multiple root when the low
/// coefficients vanish. `eps_bdry` is the half-width of the
/// classification band around the unit circle.
pub fn poly_roots<T: Real>(p: &Polynomial<T>, tol: T, eps_bdry: T) -> Result<RootSet<T>> {
    if p.is_zero() || p.degree() == 0 {
        return Err(Error::invalid("root finding requires degree >= 1"));
    }
    if !(tol > T::zero()) || !(eps_bdry > T::zero()) {
        return Err(Error::invalid("tolerances must be strictly positive"));
    }
    let scale = p.max_coeff_norm();
    let coeffs: Vec<Complex<T>> = p.coeffs().iter().map(|&c| c / scale).collect();
    let pn = Polynomial { coeffs };

    let mut best: Option<(Vec<Root<T>>, T)> = None;
    for attempt in 0..3 {
        let points = initial_guesses(&pn, attempt);
        let points = aberth(&pn, points);
        let clusters = merge_clusters(&pn, points, tol);
        let polished = polish_clusters(&pn, clusters);
        let residual = polished
            .iter()
            .fold(T::zero(), |m, &(z, _)| {
                let v = pn.eval(z).norm();
                m.max(v.min(v / eval_scale(&pn, z)))
            });
        let roots = classify(&polished, eps_bdry);
        match &best {
            Some((_, r)) if *r <= residual => {}
            _ => best = Some((roots, residual)),
        }
        if best.as_ref().map_or(false, |(_, r)| *r <= tol) {
            break;
        }
    }
    let (roots, residual_bound) = best.expect("at least one attempt ran");
    if residual_bound > tol {
        return Err(Error::NonConvergence {
            residual: residual_bound.to_f64().unwrap_or(f64::NAN),
            tol: tol.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(RootSet {
        roots,
        residual_bound,
    })
}

/// Magnitude scale of evaluating `p` at `z`: the rounding noise of the
/// computed value is about `eps` times this, and it also normalizes
/// residuals into backward errors.
fn eval_scale<T: Real>(p: &Polynomial<T>, z: Complex<T>) -> T {
    let sum = p
        .coeffs()
        .iter()
        .fold((T::zero(), T::one()), |(acc, pw), c| {
            (acc + c.norm() * pw, pw * z.norm())
        })
        .0;
    sum.max(T::epsilon())
}

fn initial_guesses<T: Real>(p: &Polynomial<T>, attempt: usize) -> Vec<Complex<T>> {
    let d = p.degree();
    let lead = p.leading().norm();
    let cauchy = T::one()
        + p.coeffs()[..d]
            .iter()
            .fold(T::zero(), |m, c| m.max(c.norm() / lead));
    let c0 = p.coeffs()[0].norm();
    let geometric = if c0 > T::zero() {
        (c0 / lead).powf(T::one() / cst::<T>(d as f64))
    } else {
        cauchy * cst::<T>(0.25)
    };
    let radius = geometric.max(cst::<T>(1e-3)).min(cauchy) * (T::one() + cst::<T>(0.13) * cst::<T>(attempt as f64));
    let offset = cst::<T>(0.4) + cst::<T>(0.9) * cst::<T>(attempt as f64);
    (0..d)
        .map(|k| {
            let angle = cst::<T>(2.0) * T::PI() * cst::<T>(k as f64) / cst::<T>(d as f64) + offset;
            Complex::from_polar(radius, angle)
        })
        .collect()
}

fn aberth<T: Real>(p: &Polynomial<T>, mut z: Vec<Complex<T>>) -> Vec<Complex<T>> {
    let dp = p.derivative();
    let one = Complex::new(T::one(), T::zero());
    let step_floor = cst::<T>(4.0) * T::epsilon();
    let mut stagnant = 0usize;
    for _ in 0..256 {
        let mut max_rel_step = T::zero();
        for k in 0..z.len() {
            let pk = p.eval(z[k]);
            if pk.norm() == T::zero() {
                continue;
            }
            let dk = dp.eval(z[k]);
            if dk.norm() == T::zero() {
                // sitting on a critical point: nudge deterministically
                z[k] = z[k] + Complex::from_polar(
                    cst::<T>(1e-6) * (T::one() + z[k].norm()),
                    cst::<T>(k as f64),
                );
                max_rel_step = max_rel_step.max(cst::<T>(1e-6));
                continue;
            }
            let w = pk / dk;
            let mut sum = Complex::new(T::zero(), T::zero());
            for j in 0..z.len() {
                if j != k {
                    let diff = z[k] - z[j];
                    if diff.norm() > T::zero() {
                        sum = sum + one / diff;
                    }
                }
            }
            let denom = one - w * sum;
            let step = if denom.norm() < cst::<T>(1e-30) { w } else { w / denom };
            z[k] = z[k] - step;
            max_rel_step = max_rel_step.max(step.norm() / (T::one() + z[k].norm()));
        }
        if max_rel_step <= step_floor {
            stagnant += 1;
            if stagnant >= 2 {
                break;
            }
        } else {
            stagnant = 0;
        }
    }
    z
}

/// Agglomerates converged iterates into multiple roots. Two effects hide a
/// multiple root and each needs its own test. Iterates near an m-fold root
/// scatter over a radius the Newton correction measures (at distance d the
/// correction |p / p'| is close to d / m), so iterates are linked whenever
/// their separation is covered by a safety multiple of their summed
/// corrections; this adapts to local conditioning. Coefficient rounding of
/// size eta instead splits an m-fold root into simple ones eta^(1/m) apart
/// which the corrections rightly report as distinct, so a second pass
/// gathers clusters inside the perturbation radius of each multiplicity
/// hypothesis, largest first, accepting a gather only when it collects
/// enough mass to justify the hypothesis.
fn merge_clusters<T: Real>(
    p: &Polynomial<T>,
    points: Vec<Complex<T>>,
    tol: T,
) -> Vec<(Complex<T>, usize)> {
    let dp = p.derivative();
    let deg = cst::<T>(points.len() as f64);
    let guard = cst::<T>(3.0);
    let steps: Vec<T> = points
        .iter()
        .map(|&z| {
            // rounding noise bounds how well the iterate can be located
            // even when the evaluated residual rounds to zero
            let noise = T::epsilon() * eval_scale(p, z);
            let d = dp.eval(z).norm();
            if d > T::zero() {
                (p.eval(z).norm() + noise) / d
            } else {
                T::epsilon().sqrt() * (T::one() + z.norm())
            }
        })
        .collect();

    fn find(comp: &mut [usize], mut i: usize) -> usize {
        while comp[i] != i {
            comp[i] = comp[comp[i]];
            i = comp[i];
        }
        i
    }
    let n = points.len();
    let mut comp: Vec<usize> = (0..n).collect();
    for i in 0..n {
        for j in (i + 1)..n {
            let dist = (points[i] - points[j]).norm();
            let thr = tol.max(guard * deg * (steps[i] + steps[j]));
            if dist <= thr {
                let (a, b) = (find(&mut comp, i), find(&mut comp, j));
                if a != b {
                    comp[a.max(b)] = a.min(b);
                }
            }
        }
    }

    let mut clusters: Vec<(Complex<T>, usize)> = Vec::new();
    let mut slot: Vec<Option<usize>> = vec![None; n];
    for i in 0..n {
        let rep = find(&mut comp, i);
        match slot[rep] {
            Some(k) => {
                clusters[k].0 = clusters[k].0 + points[i];
                clusters[k].1 += 1;
            }
            None => {
                slot[rep] = Some(clusters.len());
                clusters.push((points[i], 1));
            }
        }
    }
    for c in &mut clusters {
        c.0 = c.0 / cst::<T>(c.1 as f64);
    }

    let raw_residual = points
        .iter()
        .fold(T::zero(), |m, &z| {
            let v = p.eval(z).norm();
            m.max(v.min(v / eval_scale(p, z)))
        });
    let floor = raw_residual.max(T::epsilon()) * cst::<T>(100.0);
    for m_hyp in (2..=n).rev() {
        let thr = tol.max(floor.powf(T::one() / cst::<T>(m_hyp as f64)));
        'gather: loop {
            for seed in 0..clusters.len() {
                let center = clusters[seed].0;
                let mut picked: Vec<usize> = Vec::new();
                let mut mass = 0usize;
                for (idx, &(z, m)) in clusters.iter().enumerate() {
                    if (z - center).norm() <= thr {
                        picked.push(idx);
                        mass += m;
                    }
                }
                if picked.len() >= 2 && mass >= m_hyp {
                    let mut num = Complex::new(T::zero(), T::zero());
                    for &idx in &picked {
                        let (z, m) = clusters[idx];
                        num = num + z * cst::<T>(m as f64);
                    }
                    let centroid = num / cst::<T>(mass as f64);
                    for &idx in picked.iter().rev() {
                        clusters.remove(idx);
                    }
                    clusters.push((centroid, mass));
                    continue 'gather;
                }
            }
            break;
        }
    }
    clusters
}

fn polish_clusters<T: Real>(
    p: &Polynomial<T>,
    clusters: Vec<(Complex<T>, usize)>,
) -> Vec<(Complex<T>, usize)> {
    let dp = p.derivative();
    clusters
        .into_iter()
        .map(|(mut z, m)| {
            let mfac = cst::<T>(m as f64);
            let mut fz = p.eval(z).norm();
            for _ in 0..4 {
                let dz = dp.eval(z);
                if dz.norm() == T::zero() {
                    break;
                }
                let cand = z - p.eval(z) / dz * mfac;
                let fc = p.eval(cand).norm();
                if fc < fz {
                    z = cand;
                    fz = fc;
                } else {
                    break;
                }
            }
            (z, m)
        })
        .collect()
}

fn classify<T: Real>(clusters: &[(Complex<T>, usize)], eps_bdry: T) -> Vec<Root<T>> {
    clusters
        .iter()
        .map(|&(value, multiplicity)| {
            let modulus = value.norm();
            let location = if modulus < T::one() - eps_bdry {
                RootLocation::InsideDisk
            } else if modulus <= T::one() + eps_bdry {
                RootLocation::BoundaryBand
            } else {
                RootLocation::OutsideDisk
            };
            Root {
                value,
                multiplicity,
                location,
            }
        })
        .collect()
}

/// Finite Blaschke product `e^{-i mu} prod_k (z - z_k) / (conj(z_k) z - 1)`
/// with all zeros strictly inside the unit disk.
#[derive(Clone, Debug)]
pub struct BlaschkeProduct<T = f64> {
    zeros: Vec<Complex<T>>,
    phase: T,
}

impl<T: Real> BlaschkeProduct<T> {
    /// Empty product: the constant 1.
    pub fn identity() -> Self {
        BlaschkeProduct {
            zeros: Vec::new(),
            phase: T::zero(),
        }
    }

    /// Builds a product whose zeros must sit at distance more than `band`
    /// from the unit circle. The phase is normalized into [0, 2 pi).
    pub fn with_band(zeros: Vec<Complex<T>>, phase: T, band: T) -> Result<Self> {
        for z in &zeros {
            let m = z.norm();
            if !(m < T::one() - band) {
                return Err(Error::RootNearBoundary {
                    modulus: m.to_f64().unwrap_or(f64::NAN),
                    band: band.to_f64().unwrap_or(f64::NAN),
                });
            }
        }
        Ok(BlaschkeProduct {
            zeros,
            phase: normalize_phase(phase),
        })
    }

    pub fn new(zeros: Vec<Complex<T>>, phase: T) -> Result<Self> {
        Self::with_band(zeros, phase, cst(DEFAULT_BOUNDARY_BAND))
    }

    pub fn zeros(&self) -> &[Complex<T>] {
        &self.zeros
    }

    pub fn phase(&self) -> T {
        self.phase
    }

    /// Same zeros, phase set to `mu`.
    pub fn with_phase(mut self, mu: T) -> Self {
        self.phase = normalize_phase(mu);
        self
    }

    /// Evaluates the product; unimodular on the unit circle for any zeros.
    pub fn eval(&self, z: Complex<T>) -> Complex<T> {
        let one = Complex::new(T::one(), T::zero());
        let mut acc = Complex::from_polar(T::one(), -self.phase);
        for &zk in &self.zeros {
            acc = acc * (z - zk) / (zk.conj() * z - one);
        }
        acc
    }
}

/// Evaluates a Blaschke product at `z`.
pub fn blaschke_eval<T: Real>(b: &BlaschkeProduct<T>, z: Complex<T>) -> Complex<T> {
    b.eval(z)
}

/// Evaluates a polynomial at `z` by Horner's rule.
pub fn poly_eval<T: Real>(p: &Polynomial<T>, z: Complex<T>) -> Complex<T> {
    p.eval(z)
}

fn normalize_phase<T: Real>(mu: T) -> T {
    let tau = cst::<T>(2.0) * T::PI();
    let mut m = mu % tau;
    if m < T::zero() {
        m = m + tau;
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    type C = Complex<f64>;

    fn c(re: f64, im: f64) -> C {
        Complex::new(re, im)
    }

    #[test]
    fn horner_matches_direct_evaluation() {
        // p(z) = 1 + 2z + 3z^2 at z = 1 - i
        let p = Polynomial::new(vec![c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)]);
        let z = c(1.0, -1.0);
        let direct = c(1.0, 0.0) + z * 2.0 + z * z * 3.0;
        assert!((p.eval(z) - direct).norm() < 1e-15);
    }

    #[test]
    fn double_root_evaluates_to_zero() {
        // (z - 1/2)^2 expanded
        let p = Polynomial::new(vec![c(0.25, 0.0), c(-1.0, 0.0), c(1.0, 0.0)]);
        assert!(p.eval(c(0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn trailing_roundoff_is_stripped() {
        let p = Polynomial::new(vec![c(1.0, 0.0), c(2.0, 0.0), c(1e-15, -1e-16)]);
        assert_eq!(p.degree(), 1);
    }

    #[test]
    fn factored_and_expanded_forms_agree() {
        let roots = [c(0.3, 0.1), c(-0.5, 0.2), c(0.0, -0.7), c(0.9, 0.0)];
        let p = Polynomial::from_roots(&roots);
        assert_eq!(p.degree(), 4);
        for k in 0..100 {
            let angle = 0.37 * k as f64;
            let radius = 0.97 * ((k * 7919 % 1000) as f64 / 1000.0);
            let z = Complex::from_polar(radius, angle);
            let factored: C = roots.iter().fold(c(1.0, 0.0), |acc, &r| acc * (z - r));
            let expanded = p.eval(z);
            let scale = factored.norm().max(expanded.norm()).max(1.0);
            assert!((factored - expanded).norm() <= 1e-12 * scale);
        }
    }

    #[test]
    fn deflation_inverts_multiplication() {
        let q = Polynomial::from_roots(&[c(0.2, 0.4), c(-0.3, 0.0)]);
        let r = c(0.5, -0.1);
        let p = q.mul(&Polynomial::from_roots(&[r]));
        let back = p.deflate(r);
        for (a, b) in back.coeffs().iter().zip(q.coeffs()) {
            assert!((a - b).norm() < 1e-14);
        }
    }

    #[test]
    fn quadratic_roots_match_the_closed_form() {
        // z^2 - 6z + 1; the quadratic formula gives 3 -+ 2 sqrt(2).
        let p = Polynomial::new(vec![c(1.0, 0.0), c(-6.0, 0.0), c(1.0, 0.0)]);
        let rs = poly_roots(&p, 1e-12, 1e-8).unwrap();
        assert_eq!(rs.total_multiplicity(), 2);
        let inner = 0.17157287525380993_f64; // 3 - 2 sqrt(2)
        let outer = 5.82842712474619_f64; // 3 + 2 sqrt(2)
        let mut vals: Vec<f64> = rs.roots.iter().map(|r| r.value.re).collect();
        vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((vals[0] - inner).abs() < 1e-12);
        assert!((vals[1] - outer).abs() < 1e-10);
        for r in &rs.roots {
            assert!(r.value.im.abs() < 1e-12);
            let expect = if r.value.re < 1.0 {
                RootLocation::InsideDisk
            } else {
                RootLocation::OutsideDisk
            };
            assert_eq!(r.location, expect);
        }
    }

    #[test]
    fn unit_roots_land_in_the_boundary_band() {
        // z^2 - 1
        let p = Polynomial::new(vec![c(-1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        let rs = poly_roots(&p, 1e-12, 1e-12).unwrap();
        assert_eq!(rs.roots.len(), 2);
        for r in &rs.roots {
            assert_eq!(r.location, RootLocation::BoundaryBand);
            assert!((r.value.norm() - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn triple_root_at_origin_is_merged() {
        // z^3
        let p = Polynomial::new(vec![c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        let rs = poly_roots(&p, 1e-12, 1e-8).unwrap();
        assert_eq!(rs.roots.len(), 1);
        assert_eq!(rs.roots[0].multiplicity, 3);
        assert!(rs.roots[0].value.norm() < 1e-6);
        assert_eq!(rs.roots[0].location, RootLocation::InsideDisk);
    }

    #[test]
    fn mixed_multiplicities_are_recovered() {
        // (z - 0.3)^2 (z + 0.7)
        let p = Polynomial::from_roots(&[c(0.3, 0.0), c(0.3, 0.0), c(-0.7, 0.0)]);
        let rs = poly_roots(&p, 1e-10, 1e-8).unwrap();
        assert_eq!(rs.total_multiplicity(), 3);
        let double = rs.roots.iter().find(|r| r.multiplicity == 2).unwrap();
        let simple = rs.roots.iter().find(|r| r.multiplicity == 1).unwrap();
        assert!((double.value - c(0.3, 0.0)).norm() < 1e-7);
        assert!((simple.value - c(-0.7, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn unreachable_tolerance_reports_nonconvergence() {
        let p = Polynomial::new(vec![c(1.0, 0.0), c(-6.0, 0.0), c(1.0, 0.0)]);
        match poly_roots(&p, 1e-300, 1e-8) {
            Err(Error::NonConvergence { .. }) => {}
            other => panic!("expected NonConvergence, got {other:?}"),
        }
    }

    #[test]
    fn empty_blaschke_product_is_one() {
        let b: BlaschkeProduct = BlaschkeProduct::identity();
        assert!((b.eval(c(0.3, 0.4)) - c(1.0, 0.0)).norm() < 1e-16);
    }

    #[test]
    fn blaschke_is_unimodular_on_the_circle() {
        let b = BlaschkeProduct::new(vec![c(0.5, 0.0), c(-0.2, 0.3), c(0.0, 0.0)], 1.3).unwrap();
        for k in 0..64 {
            let z = Complex::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / 64.0);
            assert!((b.eval(z).norm() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn blaschke_rejects_zeros_near_the_circle() {
        match BlaschkeProduct::new(vec![c(0.999999999, 0.0)], 0.0) {
            Err(Error::RootNearBoundary { .. }) => {}
            other => panic!("expected RootNearBoundary, got {other:?}"),
        }
    }

    #[test]
    fn phase_rotates_the_product() {
        let zeros = vec![c(0.4, -0.1)];
        let b0 = BlaschkeProduct::new(zeros.clone(), 0.0).unwrap();
        let b1 = b0.clone().with_phase(std::f64::consts::PI);
        let z = c(0.2, 0.1);
        assert!((b1.eval(z) + b0.eval(z)).norm() < 1e-15);
    }
}


