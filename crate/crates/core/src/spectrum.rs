//! Anchor/weight data on the unit circle and the holomorphic objects it
//! generates: the sum `U`, its derivative `dU`, the numerator polynomial
//! `P` of `dU`, and fully assembled `(U, h, Phi)` triples in which a
//! Blaschke product cancels the interior zeros of `dU`.

use num_complex::Complex;

use crate::analytic::{poly_roots, BlaschkeProduct, Polynomial, Root, RootLocation};
use crate::error::{Error, Result};
use crate::scalar::{cst, Real};

/// Default minimum angular separation between anchors, in radians.
pub const DEFAULT_MIN_SEPARATION: f64 = 1e-6;

/// Points within this distance of an anchor count as singular.
pub const SINGULARITY_CLEARANCE: f64 = 1e-14;

/// Anchors on the unit circle with positive weights. Anchors are stored
/// normalized to unit modulus and sorted counterclockwise by angle in
/// [0, 2 pi); weights travel with their anchors through the sort.
#[derive(Clone, Debug)]
pub struct PoissonSpectrum<T = f64> {
    anchors: Vec<Complex<T>>,
    weights: Vec<T>,
    angles: Vec<T>,
}

impl<T: Real> PoissonSpectrum<T> {
    /// Validates and normalizes anchor/weight data with the default
    /// minimum angular separation.
    pub fn new(anchors: Vec<Complex<T>>, weights: Vec<T>) -> Result<Self> {
        Self::with_min_separation(anchors, weights, cst(DEFAULT_MIN_SEPARATION))
    }

    /// Validates and normalizes anchor/weight data.
    ///
    /// Anchors whose modulus deviates from 1 by more than 1e-12 are
    /// rejected; the rest are renormalized exactly onto the circle.
    pub fn with_min_separation(
        anchors: Vec<Complex<T>>,
        weights: Vec<T>,
        sep_min: T,
    ) -> Result<Self> {
        if anchors.is_empty() {
            return Err(Error::invalid("at least one anchor is required"));
        }
        if anchors.len() != weights.len() {
            return Err(Error::invalid(format!(
                "{} anchors but {} weights",
                anchors.len(),
                weights.len()
            )));
        }
        for (index, w) in weights.iter().enumerate() {
            if !(*w > T::zero()) {
                return Err(Error::NonpositiveWeight { index });
            }
        }
        let mut normalized = Vec::with_capacity(anchors.len());
        for (index, a) in anchors.iter().enumerate() {
            let m = a.norm();
            if (m - T::one()).abs() > cst(1e-12) {
                return Err(Error::AnchorOffCircle {
                    index,
                    modulus: m.to_f64().unwrap_or(f64::NAN),
                });
            }
            normalized.push(a / m);
        }
        let tau = cst::<T>(2.0) * T::PI();
        let mut order: Vec<usize> = (0..normalized.len()).collect();
        let angle_of = |z: Complex<T>| {
            let mut ang = z.arg();
            if ang < T::zero() {
                ang = ang + tau;
            }
            ang
        };
        order.sort_by(|&i, &j| {
            angle_of(normalized[i])
                .partial_cmp(&angle_of(normalized[j]))
                .expect("anchor angles are finite")
                .then(i.cmp(&j))
        });
        let anchors: Vec<Complex<T>> = order.iter().map(|&i| normalized[i]).collect();
        let weights: Vec<T> = order.iter().map(|&i| weights[i]).collect();
        let angles: Vec<T> = anchors.iter().map(|&a| angle_of(a)).collect();
        if anchors.len() > 1 {
            for i in 0..anchors.len() {
                let j = (i + 1) % anchors.len();
                let mut gap = angles[j] - angles[i];
                if j == 0 {
                    gap = gap + tau;
                }
                if gap <= sep_min {
                    return Err(Error::DuplicateAnchors {
                        first: i,
                        second: j,
                        gap: gap.to_f64().unwrap_or(f64::NAN),
                    });
                }
            }
        }
        Ok(PoissonSpectrum {
            anchors,
            weights,
            angles,
        })
    }

    /// The n-th roots of unity, each with weight 1/n.
    pub fn symmetric(n: usize) -> Self {
        assert!(n >= 1, "symmetric spectrum needs n >= 1");
        let tau = cst::<T>(2.0) * T::PI();
        let w = T::one() / cst::<T>(n as f64);
        let angles: Vec<T> = (0..n).map(|k| tau * cst::<T>(k as f64) / cst::<T>(n as f64)).collect();
        PoissonSpectrum {
            anchors: angles.iter().map(|&a| Complex::from_polar(T::one(), a)).collect(),
            weights: vec![w; n],
            angles,
        }
    }

    pub fn len(&self) -> usize {
        self.anchors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.anchors.is_empty()
    }

    pub fn anchors(&self) -> &[Complex<T>] {
        &self.anchors
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    /// Anchor angles in [0, 2 pi), sorted ascending.
    pub fn angles(&self) -> &[T] {
        &self.angles
    }

    /// Counterclockwise angular gap from anchor `j` to the next anchor
    /// (2 pi for a single anchor).
    pub fn arc_gap(&self, j: usize) -> T {
        let tau = cst::<T>(2.0) * T::PI();
        if self.anchors.len() == 1 {
            return tau;
        }
        let k = (j + 1) % self.anchors.len();
        let mut gap = self.angles[k] - self.angles[j];
        if k == 0 || gap <= T::zero() {
            gap = gap + tau;
        }
        gap
    }

    /// Distance from `z` to the nearest anchor.
    pub fn anchor_clearance(&self, z: Complex<T>) -> T {
        self.anchors
            .iter()
            .fold(T::infinity(), |m, &a| m.min((z - a).norm()))
    }

    /// The holomorphic sum `U(z) = -sum_k a_k (z + alpha_k) / (z - alpha_k)`.
    ///
    /// Its real part equals `sum_k a_k (1 - |z|^2) / |z - alpha_k|^2`,
    /// hence is positive on the open disk and zero on the circle.
    pub fn eval_u(&self, z: Complex<T>) -> Result<Complex<T>> {
        self.guard_singularity(z)?;
        let mut acc = Complex::new(T::zero(), T::zero());
        for (&a, &w) in self.anchors.iter().zip(&self.weights) {
            acc = acc - (z + a) / (z - a) * w;
        }
        Ok(acc)
    }

    /// The derivative `dU(z) = sum_k 2 a_k alpha_k / (z - alpha_k)^2`.
    pub fn eval_du(&self, z: Complex<T>) -> Result<Complex<T>> {
        self.guard_singularity(z)?;
        let mut acc = Complex::new(T::zero(), T::zero());
        for (&a, &w) in self.anchors.iter().zip(&self.weights) {
            let d = z - a;
            acc = acc + a * (cst::<T>(2.0) * w) / (d * d);
        }
        Ok(acc)
    }

    /// Numerator polynomial `P` of `dU`:
    /// `P(z) = sum_k 2 a_k alpha_k prod_{j != k} (z - alpha_j)^2`,
    /// so that `dU = P / prod_j (z - alpha_j)^2`. Degree is at most
    /// `2n - 2`; leading coefficients that are pure roundoff relative to
    /// the largest coefficient are stripped.
    pub fn numerator_polynomial(&self) -> Polynomial<T> {
        let full = Polynomial::from_roots(&self.anchors);
        let mut acc = Polynomial::zero();
        for (&a, &w) in self.anchors.iter().zip(&self.weights) {
            let g = full.deflate(a);
            let g2 = g.mul(&g);
            acc = acc.add(&g2.scale(a * (cst::<T>(2.0) * w)));
        }
        acc.strip_relative(cst(1e-12))
    }

    fn guard_singularity(&self, z: Complex<T>) -> Result<()> {
        let d = self.anchor_clearance(z);
        if d < cst(SINGULARITY_CLEARANCE) {
            return Err(Error::AnchorSingularity {
                distance: d.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(())
    }
}

/// Assembled data `(U, h, Phi)`: the spectrum generating `U`, a Blaschke
/// product `h` whose zeros are exactly the interior zeros of `dU`, and
/// the non-vanishing quotient `Phi = dU / h` in deflated form.
#[derive(Clone, Debug)]
pub struct WeierstrassTriple<T = f64> {
    spectrum: PoissonSpectrum<T>,
    blaschke: BlaschkeProduct<T>,
    numerator: Polynomial<T>,
    disk_zeros: Vec<Root<T>>,
    /// `P` with every interior root divided out; shares no zeros with the
    /// closed disk.
    deflated: Polynomial<T>,
    /// Blaschke zeros with no matching root of `P`. Empty for honestly
    /// assembled triples; populated only by the corruption hook below.
    extra_zeros: Vec<Complex<T>>,
}

impl<T: Real> WeierstrassTriple<T> {
    /// Computes `P`, finds its roots, rejects roots inside the
    /// circle-classification band, and cancels the interior ones with a
    /// Blaschke product (phase 0).
    pub fn assemble(spectrum: PoissonSpectrum<T>, tol: T, eps_bdry: T) -> Result<Self> {
        let numerator = spectrum.numerator_polynomial();
        let mut disk_zeros = Vec::new();
        let mut deflated = numerator.clone();
        if !numerator.is_zero() && numerator.degree() >= 1 {
            let roots = poly_roots(&numerator, tol, eps_bdry)?;
            if let Some(bad) = roots
                .roots
                .iter()
                .find(|r| r.location == RootLocation::BoundaryBand)
            {
                return Err(Error::RootNearBoundary {
                    modulus: bad.value.norm().to_f64().unwrap_or(f64::NAN),
                    band: eps_bdry.to_f64().unwrap_or(f64::NAN),
                });
            }
            for root in roots.roots {
                if root.location == RootLocation::InsideDisk {
                    for _ in 0..root.multiplicity {
                        deflated = deflated.deflate(root.value);
                    }
                    disk_zeros.push(root);
                }
            }
        }
        let mut flat = Vec::new();
        for r in &disk_zeros {
            for _ in 0..r.multiplicity {
                flat.push(r.value);
            }
        }
        let blaschke = BlaschkeProduct::with_band(flat, T::zero(), eps_bdry)?;
        Ok(WeierstrassTriple {
            spectrum,
            blaschke,
            numerator,
            disk_zeros,
            deflated,
            extra_zeros: Vec::new(),
        })
    }

    /// Same triple with the Blaschke phase set to `mu`; rotates the image
    /// of the integrated immersion by `e^{i mu}`.
    pub fn with_phase(mut self, mu: T) -> Self {
        self.blaschke = self.blaschke.with_phase(mu);
        self
    }

    /// Adds a Blaschke zero that does not correspond to any root of `P`.
    ///
    /// This deliberately breaks the triple: `Phi` acquires a pole inside
    /// the disk. It exists so that consistency checks can be exercised
    /// against corrupted data.
    pub fn with_extra_blaschke_zero(mut self, z0: Complex<T>) -> Result<Self> {
        let mut zeros = self.blaschke.zeros().to_vec();
        zeros.push(z0);
        self.blaschke = BlaschkeProduct::with_band(zeros, self.blaschke.phase(), cst(1e-12))?;
        self.extra_zeros.push(z0);
        Ok(self)
    }

    pub fn spectrum(&self) -> &PoissonSpectrum<T> {
        &self.spectrum
    }

    pub fn blaschke(&self) -> &BlaschkeProduct<T> {
        &self.blaschke
    }

    pub fn numerator(&self) -> &Polynomial<T> {
        &self.numerator
    }

    /// Interior roots of `P`, with multiplicity.
    pub fn disk_zeros(&self) -> &[Root<T>] {
        &self.disk_zeros
    }

    pub fn eval_u(&self, z: Complex<T>) -> Result<Complex<T>> {
        self.spectrum.eval_u(z)
    }

    /// Roof value `u = Re U`.
    pub fn roof(&self, z: Complex<T>) -> Result<T> {
        Ok(self.spectrum.eval_u(z)?.re)
    }

    /// Evaluates `Phi = dU / h` in pole/zero-cancelled form.
    ///
    /// The interior roots of `P` are divided out algebraically and each
    /// matched Blaschke factor contributes its co-factor
    /// `(conj(z_k) z - 1)`, so the quotient stays finite and non-zero at
    /// the cancelled points instead of passing through 0/0.
    pub fn phi(&self, z: Complex<T>) -> Complex<T> {
        let one = Complex::new(T::one(), T::zero());
        let mut num = self.deflated.eval(z);
        for &zk in self.blaschke.zeros() {
            num = num * (zk.conj() * z - one);
        }
        num = num * Complex::from_polar(T::one(), self.blaschke.phase());
        let mut den = one;
        for &a in self.spectrum.anchors() {
            let d = z - a;
            den = den * (d * d);
        }
        for &ze in &self.extra_zeros {
            den = den * (z - ze);
        }
        num / den
    }

    pub fn anchor_clearance(&self, z: Complex<T>) -> T {
        self.spectrum.anchor_clearance(z)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type C = Complex<f64>;

    fn c(re: f64, im: f64) -> C {
        Complex::new(re, im)
    }

    fn disk_points(count: usize, rmax: f64) -> Vec<C> {
        (0..count)
            .map(|k| {
                let angle = 2.399963229728653 * k as f64; // golden-angle sweep
                let radius = rmax * (((k * 2654435761) % 1000) as f64 / 1000.0).sqrt();
                Complex::from_polar(radius, angle)
            })
            .collect()
    }

    #[test]
    fn validation_rejects_bad_data() {
        let on = c(1.0, 0.0);
        match PoissonSpectrum::new(vec![c(1.1, 0.0)], vec![1.0]) {
            Err(Error::AnchorOffCircle { .. }) => {}
            other => panic!("expected AnchorOffCircle, got {other:?}"),
        }
        match PoissonSpectrum::new(vec![on, on], vec![0.5, 0.5]) {
            Err(Error::DuplicateAnchors { .. }) => {}
            other => panic!("expected DuplicateAnchors, got {other:?}"),
        }
        match PoissonSpectrum::new(vec![on], vec![-1.0]) {
            Err(Error::NonpositiveWeight { .. }) => {}
            other => panic!("expected NonpositiveWeight, got {other:?}"),
        }
    }

    #[test]
    fn anchors_are_sorted_counterclockwise() {
        let s = PoissonSpectrum::new(
            vec![c(0.0, -1.0), c(1.0, 0.0), c(-1.0, 0.0)],
            vec![3.0, 1.0, 2.0],
        )
        .unwrap();
        assert!(s.angles().windows(2).all(|w| w[0] < w[1]));
        // weights follow their anchors through the sort
        assert_eq!(s.weights()[0], 1.0);
        assert_eq!(s.weights()[1], 2.0);
        assert_eq!(s.weights()[2], 3.0);
    }

    #[test]
    fn symmetric_sum_telescopes() {
        // For the n-th roots of unity with weights 1/n the sum collapses
        // to (1 + z^n) / (1 - z^n).
        for n in 1..=6 {
            let s: PoissonSpectrum = PoissonSpectrum::symmetric(n);
            for z in disk_points(60, 0.95) {
                let zn = z.powu(n as u32);
                let closed = (c(1.0, 0.0) + zn) / (c(1.0, 0.0) - zn);
                let got = s.eval_u(z).unwrap();
                assert!(
                    (got - closed).norm() < 1e-12,
                    "n={n} z={z} got={got} closed={closed}"
                );
            }
        }
    }

    #[test]
    fn real_part_of_u_is_a_poisson_sum() {
        let s = PoissonSpectrum::new(
            vec![c(1.0, 0.0), c(-1.0, 0.0)],
            vec![1.0, 2.0],
        )
        .unwrap();
        for z in disk_points(50, 0.99) {
            let direct = s.eval_u(z).unwrap().re;
            let poisson: f64 = s
                .anchors()
                .iter()
                .zip(s.weights())
                .map(|(&a, &w)| w * (1.0 - z.norm_sqr()) / (z - a).norm_sqr())
                .sum();
            assert!((direct - poisson).abs() < 1e-12 * poisson.max(1.0));
        }
    }

    #[test]
    fn du_matches_a_finite_difference_of_u() {
        let s = PoissonSpectrum::new(
            vec![c(1.0, 0.0), c(0.0, 1.0), c(-0.6, -0.8)],
            vec![0.7, 1.1, 0.4],
        )
        .unwrap();
        let h = 1e-6;
        for z in disk_points(30, 0.8) {
            let du = s.eval_du(z).unwrap();
            let fd = (s.eval_u(z + c(h, 0.0)).unwrap() - s.eval_u(z - c(h, 0.0)).unwrap())
                / c(2.0 * h, 0.0);
            assert!((du - fd).norm() < 1e-4 * (1.0 + du.norm()));
        }
    }

    #[test]
    fn numerator_matches_du_times_denominator() {
        let s = PoissonSpectrum::new(
            vec![c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)],
            vec![0.3, 0.9, 1.4, 0.6],
        )
        .unwrap();
        let p = s.numerator_polynomial();
        assert!(p.degree() <= 2 * s.len() - 2);
        for z in disk_points(50, 0.97) {
            let du = s.eval_du(z).unwrap();
            let den: C = s.anchors().iter().fold(c(1.0, 0.0), |acc, &a| {
                let d = z - a;
                acc * d * d
            });
            let lhs = p.eval(z);
            let rhs = du * den;
            let scale = lhs.norm().max(rhs.norm()).max(1.0);
            assert!((lhs - rhs).norm() < 1e-10 * scale);
        }
    }

    #[test]
    fn symmetric_numerator_is_a_pure_monomial() {
        for n in 1..=6usize {
            let s: PoissonSpectrum = PoissonSpectrum::symmetric(n);
            let p = s.numerator_polynomial();
            assert_eq!(p.degree(), n - 1, "n={n}");
            for (k, coeff) in p.coeffs().iter().enumerate() {
                let expect = if k == n - 1 { 2.0 * n as f64 } else { 0.0 };
                assert!(
                    (coeff - c(expect, 0.0)).norm() < 1e-12,
                    "n={n} k={k} coeff={coeff}"
                );
            }
        }
    }

    #[test]
    fn asymmetric_pair_produces_the_expected_quadratic() {
        // anchors +-1 with weights 1 and 2:
        // P(z) = -2 z^2 + 12 z - 2, roots 3 -+ 2 sqrt(2).
        let s = PoissonSpectrum::new(vec![c(1.0, 0.0), c(-1.0, 0.0)], vec![1.0, 2.0]).unwrap();
        let p = s.numerator_polynomial();
        let expect = [c(-2.0, 0.0), c(12.0, 0.0), c(-2.0, 0.0)];
        assert_eq!(p.degree(), 2);
        for (a, b) in p.coeffs().iter().zip(expect.iter()) {
            assert!((a - b).norm() < 1e-12);
        }
        let t = WeierstrassTriple::assemble(s, 1e-12, 1e-8).unwrap();
        assert_eq!(t.disk_zeros().len(), 1);
        let inner = 0.17157287525380993_f64; // 3 - 2 sqrt(2)
        assert!((t.disk_zeros()[0].value - c(inner, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn assembled_phi_agrees_with_du_over_h() {
        let s = PoissonSpectrum::new(
            vec![c(1.0, 0.0), c(-0.5, 0.8660254037844386), c(-0.5, -0.8660254037844386)],
            vec![0.5, 0.8, 1.2],
        )
        .unwrap();
        let t = WeierstrassTriple::assemble(s, 1e-12, 1e-8).unwrap();
        for z in disk_points(60, 0.9) {
            // stay away from the cancelled points where du/h is 0/0
            if t.disk_zeros()
                .iter()
                .any(|r| (z - r.value).norm() < 1e-3)
            {
                continue;
            }
            let du = t.spectrum().eval_du(z).unwrap();
            let h = t.blaschke().eval(z);
            let expect = du / h;
            let got = t.phi(z);
            let scale = expect.norm().max(1.0);
            assert!(
                (got - expect).norm() < 1e-9 * scale,
                "z={z} got={got} expect={expect}"
            );
        }
    }

    #[test]
    fn phi_is_finite_and_nonzero_at_cancelled_points() {
        let s: PoissonSpectrum = PoissonSpectrum::symmetric(3);
        let t = WeierstrassTriple::assemble(s, 1e-12, 1e-8).unwrap();
        // P = 6 z^2: double zero at the origin, cancelled by h = z^2 (up to phase)
        assert_eq!(t.disk_zeros().len(), 1);
        assert_eq!(t.disk_zeros()[0].multiplicity, 2);
        let v = t.phi(c(0.0, 0.0));
        assert!(v.is_finite());
        assert!(v.norm() > 1.0);
    }

    #[test]
    fn near_circle_root_is_rejected() {
        // anchors +-1 with weights (1, b): interior root at
        // (b+1)/(b-1) + 2 sqrt(b)/(b-1) -> -1 as b -> 0, entering the band
        // for sufficiently extreme weight ratios.
        let s = PoissonSpectrum::new(vec![c(1.0, 0.0), c(-1.0, 0.0)], vec![1.0, 1e-17]).unwrap();
        match WeierstrassTriple::assemble(s, 1e-10, 1e-8) {
            Err(Error::RootNearBoundary { .. }) => {}
            other => panic!("expected RootNearBoundary, got {other:?}"),
        }
    }

    #[test]
    fn corruption_hook_adds_a_pole() {
        let s: PoissonSpectrum = PoissonSpectrum::symmetric(2);
        let t = WeierstrassTriple::assemble(s, 1e-12, 1e-8).unwrap();
        let bad = t.with_extra_blaschke_zero(c(0.3, 0.0)).unwrap();
        // the honest zero at the origin plus the injected one
        assert_eq!(bad.blaschke().zeros().len(), 2);
        // Phi now blows up near the spurious zero
        let near = bad.phi(c(0.3 + 1e-8, 0.0));
        assert!(near.norm() > 1e6);
    }
}
