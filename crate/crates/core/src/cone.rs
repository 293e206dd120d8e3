//! The cone-parametrized bundle semigroup at desk scale: Pauli labeling of
//! Minkowski 4-vectors, the forward light cone and its convex hull, frames of
//! skew-Hermitian generators with their curvature, interchange of two
//! directions up to a gauge fiber, and lattice-path holonomy over the hull.
//!
//! The gauge group here is the full unitary group of the matrix algebra and
//! the gauge algebra is all skew-Hermitians, so the curvature hypothesis
//! [V_k, V_l] = ad_{c_kl} with c_kl in the gauge algebra holds for any frame.
//!
//! The cone-indexed family is genuinely multi-parameter: no finite set of
//! one-parameter subfamilies generates it, which is why paths, fibers, and
//! holonomy are the interesting structure rather than any single direction.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{
    commutator, kron, pauli, AlgebraElement, AlgebraError, GaugeAlgebraElement, GaugeGroupElement,
};
use crate::report::{CheckReport, ResidualScan};
use crate::representation::ParameterMatrix;
use crate::semigroup::{generate_inner_semigroup, Endomorphism, SemigroupFamily};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConeError {
    #[error("point {point:?} lies outside the hull of the forward cone by {defect:.3e}")]
    OutsideHull { point: [f64; 4], defect: f64 },
    #[error("frame expects 4-vectors over {expected} generators, got {got}")]
    FrameArity { expected: usize, got: usize },
    #[error("frame generators have mixed dimensions")]
    MixedDimensions,
    #[error("frame needs at least one generator")]
    EmptyFrame,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// A Minkowski 4-vector tagged with forward-cone bookkeeping.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConeVector(pub [f64; 4]);

impl ConeVector {
    pub fn zero() -> Self {
        Self([0.0; 4])
    }

    pub fn coords(&self) -> [f64; 4] {
        self.0
    }

    pub fn spatial_norm(&self) -> f64 {
        (self.0[1] * self.0[1] + self.0[2] * self.0[2] + self.0[3] * self.0[3]).sqrt()
    }

    /// |q(x)| with q the Minkowski form; zero on the cone.
    pub fn cone_defect(&self) -> f64 {
        (self.0[0] * self.0[0]
            - self.0[1] * self.0[1]
            - self.0[2] * self.0[2]
            - self.0[3] * self.0[3])
            .abs()
    }

    pub fn is_on_cone(&self, tol: f64) -> bool {
        self.0[0] >= -tol && self.cone_defect() <= tol
    }

    /// Membership in the convex hull of the forward cone: x0 >= |spatial|.
    pub fn hull_defect(&self) -> f64 {
        (self.spatial_norm() - self.0[0]).max(0.0)
    }

    pub fn in_hull(&self, tol: f64) -> bool {
        self.hull_defect() <= tol
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = [0.0; 4];
        for (slot, (a, b)) in out.iter_mut().zip(self.0.iter().zip(&rhs.0)) {
            *slot = a + b;
        }
        Self(out)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let mut out = [0.0; 4];
        for (slot, (a, b)) in out.iter_mut().zip(self.0.iter().zip(&rhs.0)) {
            *slot = a - b;
        }
        Self(out)
    }

    pub fn scaled(&self, r: f64) -> Self {
        Self([self.0[0] * r, self.0[1] * r, self.0[2] * r, self.0[3] * r])
    }
}

/// The Pauli labeling X = x0 I + sum_k x^k sigma_k, explicitly
/// [[x0 + x3, x1 - i x2], [x1 + i x2, x0 - x3]].
pub fn pauli_map(x: &[f64; 4]) -> ParameterMatrix {
    ParameterMatrix::from_minkowski(x)
}

/// The cone point with pauli_map(x) = phi (x) conj(phi); phase-invariant and
/// always on the forward nullcone.
pub fn spinor_cone_point(phi: [Complex64; 2]) -> ConeVector {
    let n0 = phi[0].norm_sqr();
    let n1 = phi[1].norm_sqr();
    let cross = phi[1] * phi[0].conj();
    ConeVector([
        0.5 * (n0 + n1),
        cross.re,
        cross.im,
        0.5 * (n0 - n1),
    ])
}

/// A frame of skew-Hermitian generators g_k; the fields x -> ad_{g(x)} with
/// g(x) = sum x^k g_k carry the bundle construction. Curvature is
/// c_kl = [g_k, g_l].
#[derive(Clone, Debug)]
pub struct GeneratorFrame {
    generators: Vec<GaugeAlgebraElement>,
}

impl GeneratorFrame {
    pub fn new(generators: Vec<GaugeAlgebraElement>) -> Result<Self, ConeError> {
        let Some(first) = generators.first() else {
            return Err(ConeError::EmptyFrame);
        };
        let dim = first.dim();
        if generators.iter().any(|g| g.dim() != dim) {
            return Err(ConeError::MixedDimensions);
        }
        Ok(Self { generators })
    }

    /// The 2x2 frame g_mu = i sigma_mu, so that g(x) = i pauli_map(x).
    pub fn pauli_frame() -> Self {
        let i = Complex64::new(0.0, 1.0);
        Self {
            generators: (0..4)
                .map(|k| GaugeAlgebraElement::from_skew(pauli(k).scaled(i)))
                .collect(),
        }
    }

    /// A 4x4 frame of unit-norm Pauli tensor products with generic pairwise
    /// curvature.
    pub fn pauli_tensor_frame() -> Self {
        let i = Complex64::new(0.0, 1.0);
        let products = [
            kron(&pauli(0), &pauli(1)),
            kron(&pauli(1), &pauli(3)),
            kron(&pauli(2), &pauli(0)),
            kron(&pauli(3), &pauli(2)),
        ];
        Self {
            generators: products
                .into_iter()
                .map(|p| GaugeAlgebraElement::from_skew(p.scaled(i)))
                .collect(),
        }
    }

    pub fn arity(&self) -> usize {
        self.generators.len()
    }

    pub fn dim(&self) -> usize {
        self.generators[0].dim()
    }

    pub fn generators(&self) -> &[GaugeAlgebraElement] {
        &self.generators
    }

    /// Curvature element c_kl = [g_k, g_l]; skew-Hermitian and antisymmetric
    /// in (k, l).
    pub fn curvature(&self, k: usize, l: usize) -> AlgebraElement {
        commutator(
            self.generators[k].as_element(),
            self.generators[l].as_element(),
        )
        .expect("frame generators share a dimension")
    }

    /// The direction generator g(x) = sum_k x^k g_k.
    pub fn generator_at(&self, x: &ConeVector) -> Result<GaugeAlgebraElement, ConeError> {
        let coords = x.coords();
        if coords.len() != self.arity() {
            return Err(ConeError::FrameArity {
                expected: self.arity(),
                got: coords.len(),
            });
        }
        let mut sum = AlgebraElement::zeros(self.dim());
        for (coeff, g) in coords.iter().zip(&self.generators) {
            sum = &sum + &g.as_element().scaled_re(*coeff);
        }
        Ok(GaugeAlgebraElement::from_skew(sum))
    }

    /// The inner semigroup of the direction x, defined for x in the hull.
    pub fn direction_semigroup(
        &self,
        x: &ConeVector,
    ) -> Result<SemigroupFamily<AlgebraElement>, ConeError> {
        if !x.in_hull(1e-9) {
            return Err(ConeError::OutsideHull {
                point: x.coords(),
                defect: x.hull_defect(),
            });
        }
        Ok(generate_inner_semigroup(&self.generator_at(x)?))
    }

    /// Interchange of two directions: E^x_t . E^y_s differs from
    /// E^y_s . E^x_t by left composition with Ad of the group commutator
    /// u = exp(t g(x)) exp(s g(y)) exp(-t g(x)) exp(-s g(y)).
    pub fn interchange(
        &self,
        x: &ConeVector,
        y: &ConeVector,
        t: f64,
        s: f64,
        samples: &[AlgebraElement],
    ) -> Result<InterchangeReport, ConeError> {
        let gx = self.generator_at(x)?;
        let gy = self.generator_at(y)?;
        let a = gx.exp_at(t);
        let b = gy.exp_at(s);
        let u_raw = &(&(&a * &b) * &gx.exp_at(-t)) * &gy.exp_at(-s);
        let unitarity_defect = u_raw.unitary_defect();
        let u = GaugeGroupElement::with_tolerance(u_raw, 1e-8)?;

        let mut scan = ResidualScan::new();
        for (idx, q) in samples.iter().enumerate() {
            let xy = &(&(&a * &b) * q) * &(&a * &b).star();
            let yx = &(&(&b * &a) * q) * &(&b * &a).star();
            scan.observe((&xy - &u.conjugate(&yx)).cstar_norm(), || format!("q#{idx}"));
        }
        Ok(InterchangeReport {
            fiber: u,
            residual: scan.max(),
            unitarity_defect,
            samples: scan.samples(),
        })
    }

    /// Ordered composition of a polyline from 0 through the given vertices.
    /// Every vertex must lie in the hull; segment increments may point
    /// backward along a direction (the matrix model realizes groups), which
    /// is what makes closed loops and their holonomy expressible. The fiber
    /// is extracted against the straight-line endomorphism of the endpoint:
    /// u = exp(g(d_n)) ... exp(g(d_1)) exp(-g(endpoint)).
    pub fn path_compose(&self, vertices: &[ConeVector]) -> Result<BundlePoint, ConeError> {
        let mut product = AlgebraElement::identity(self.dim());
        let mut previous = ConeVector::zero();
        for vertex in vertices {
            if !vertex.in_hull(1e-9) {
                return Err(ConeError::OutsideHull {
                    point: vertex.coords(),
                    defect: vertex.hull_defect(),
                });
            }
            let increment = vertex.sub(&previous);
            // Chronological composition: later segments act after, i.e. on
            // the left of the accumulated product.
            product = &self.generator_at(&increment)?.exp_at(1.0) * &product;
            previous = *vertex;
        }
        let endpoint = previous;
        let fiber_raw = &product * &self.generator_at(&endpoint)?.exp_at(-1.0);
        let fiber = GaugeGroupElement::with_tolerance(fiber_raw, 1e-8)?;
        Ok(BundlePoint {
            base: endpoint,
            fiber,
        })
    }

    /// The endomorphism a bundle point represents: Ad_u . E^{base}_1.
    pub fn endomorphism_of(
        &self,
        point: &BundlePoint,
    ) -> Result<Endomorphism<AlgebraElement>, ConeError> {
        let straight = self.generator_at(&point.base)?.exp_at(1.0);
        let w = &point.fiber.as_element().clone() * &straight;
        Ok(Endomorphism::new(
            format!("bundle point over {:?}", point.base.coords()),
            move |q: &AlgebraElement| &(&w * q) * &w.star(),
        ))
    }

    /// The bundle semigroup law: composing the endomorphisms of two points
    /// lands over the sum of the bases with a unitary fiber. Checks the
    /// fiber-extraction equation, the pure-gauge fiber over 0, and fiber
    /// unitarity.
    pub fn bundle_semigroup_check(
        &self,
        points: &[(BundlePoint, BundlePoint)],
        samples: &[AlgebraElement],
        tolerance: f64,
    ) -> Result<Vec<CheckReport>, ConeError> {
        let mut extraction = ResidualScan::new();
        let mut unitarity = ResidualScan::new();
        for (idx, (p, r)) in points.iter().enumerate() {
            let composite_base = p.base.add(&r.base);
            // w = u_p exp(g(p)) u_r exp(g(r)) exp(-g(p + r)).
            let w_raw = &(&(&(&p.fiber.as_element().clone()
                * &self.generator_at(&p.base)?.exp_at(1.0))
                * r.fiber.as_element())
                * &self.generator_at(&r.base)?.exp_at(1.0))
                * &self.generator_at(&composite_base)?.exp_at(-1.0);
            unitarity.observe(w_raw.unitary_defect(), || format!("pair#{idx}"));
            let straight = self.generator_at(&composite_base)?.exp_at(1.0);
            let left = self.endomorphism_of(p)?;
            let right = self.endomorphism_of(r)?;
            for (qi, q) in samples.iter().enumerate() {
                let composed = left.apply(&right.apply(q));
                let through_fiber = {
                    let inner = &(&straight * q) * &straight.star();
                    &(&w_raw * &inner) * &w_raw.star()
                };
                extraction.observe((&composed - &through_fiber).cstar_norm(), || {
                    format!("pair#{idx} q#{qi}")
                });
            }
        }
        Ok(vec![
            extraction.into_report("bundle-fiber-extraction", tolerance),
            unitarity.into_report("bundle-fiber-unitarity", tolerance),
        ])
    }
}

/// Point of the bundle over the hull: base 4-vector plus gauge fiber.
#[derive(Clone, Debug)]
pub struct BundlePoint {
    pub base: ConeVector,
    pub fiber: GaugeGroupElement,
}

/// Interchange verdict: the gauge fiber, the sup residual of the swapped
/// composition, and the fiber's unitarity defect.
#[derive(Clone, Debug)]
pub struct InterchangeReport {
    pub fiber: GaugeGroupElement,
    pub residual: f64,
    pub unitarity_defect: f64,
    pub samples: usize,
}

/// One row of the closed-loop holonomy study: rectangle side scale, the log
/// of the holonomy, and its BCH leading term t s [g(y), g(x)].
#[derive(Clone, Debug)]
pub struct HolonomySample {
    pub size: f64,
    pub log_norm: f64,
    pub predicted_norm: f64,
    pub defect: f64,
}

/// Traverse the rectangle 0 -> size*x -> size*(x+y) -> size*y -> 0 and
/// compare log(holonomy) against the curvature leading term
/// size^2 [g(y), g(x)]; the defect is O(size^3).
pub fn loop_holonomy_study(
    frame: &GeneratorFrame,
    x: &ConeVector,
    y: &ConeVector,
    sizes: &[f64],
) -> Result<Vec<HolonomySample>, ConeError> {
    let gx = frame.generator_at(x)?;
    let gy = frame.generator_at(y)?;
    let leading = commutator(gy.as_element(), gx.as_element())?;
    let mut out = Vec::with_capacity(sizes.len());
    for &size in sizes {
        let corners = [
            x.scaled(size),
            x.scaled(size).add(&y.scaled(size)),
            y.scaled(size),
            ConeVector::zero(),
        ];
        let point = frame.path_compose(&corners)?;
        debug_assert!(point.base.coords() == [0.0; 4]);
        let log = point.fiber.as_element().log_near_identity()?;
        let predicted = leading.scaled_re(size * size);
        out.push(HolonomySample {
            size,
            log_norm: log.cstar_norm(),
            predicted_norm: predicted.cstar_norm(),
            defect: (&log - &predicted).cstar_norm(),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn unit_samples(rng: &mut StdRng, n: usize, count: usize) -> Vec<AlgebraElement> {
        (0..count)
            .map(|_| sample::random_unit_element(rng, n))
            .collect()
    }

    #[test]
    fn pauli_map_basis_vectors() {
        let id = pauli_map(&[1.0, 0.0, 0.0, 0.0]).as_algebra_element();
        assert_eq!(id, AlgebraElement::identity(2));
        // (1, 0, 0, 1) -> [[2, 0], [0, 0]].
        let x = pauli_map(&[1.0, 0.0, 0.0, 1.0]).as_algebra_element();
        let expected = AlgebraElement::from_real_rows(&[&[2.0, 0.0], &[0.0, 0.0]]).unwrap();
        assert_eq!(x, expected);
    }

    #[test]
    fn pauli_map_determinant_is_the_minkowski_form() {
        let mut rng = StdRng::seed_from_u64(3);
        for _ in 0..64 {
            let x: [f64; 4] = [
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-2.0..2.0),
            ];
            let det = pauli_map(&x).determinant();
            let q = x[0] * x[0] - x[1] * x[1] - x[2] * x[2] - x[3] * x[3];
            assert!((det - c(q, 0.0)).norm() <= 1e-12);
        }
    }

    #[test]
    fn cone_points_have_rank_deficient_nonnegative_image() {
        let mut rng = StdRng::seed_from_u64(5);
        for _ in 0..32 {
            let x = ConeVector(sample::random_cone_vector(&mut rng, 2.0));
            assert!(x.is_on_cone(1e-12));
            let image = pauli_map(&x.coords());
            assert!(image.determinant().norm() <= 1e-12);
            let trace = image.trace();
            assert!(trace.im.abs() <= 1e-14 && trace.re >= -1e-14);
            assert!((trace.re - 2.0 * x.coords()[0]).abs() <= 1e-12);
        }
    }

    #[test]
    fn spinor_point_of_basis_spinor() {
        let x = spinor_cone_point([c(1.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(x.coords(), [0.5, 0.0, 0.0, 0.5]);
        let zero = spinor_cone_point([c(0.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(zero.coords(), [0.0; 4]);
        assert!(zero.is_on_cone(0.0));
    }

    #[test]
    fn spinor_point_inverts_the_pauli_map() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..32 {
            let phi = sample::random_spinor(&mut rng);
            let x = spinor_cone_point(phi);
            assert!(x.is_on_cone(1e-12), "defect {}", x.cone_defect());
            let image = pauli_map(&x.coords());
            let outer = ParameterMatrix::from_spinor(phi);
            let diff = &image.as_algebra_element() - &outer.as_algebra_element();
            assert!(diff.frobenius_norm() <= 1e-13);
        }
    }

    #[test]
    fn spinor_point_is_phase_invariant() {
        let mut rng = StdRng::seed_from_u64(11);
        let phi = sample::random_spinor(&mut rng);
        let theta = 1.234f64;
        let rotated = [
            phi[0] * c(theta.cos(), theta.sin()),
            phi[1] * c(theta.cos(), theta.sin()),
        ];
        let a = spinor_cone_point(phi).coords();
        let b = spinor_cone_point(rotated).coords();
        for k in 0..4 {
            assert!((a[k] - b[k]).abs() <= 1e-14);
        }
    }

    #[test]
    fn pauli_frame_generator_matches_the_labeling() {
        let frame = GeneratorFrame::pauli_frame();
        let x = ConeVector([1.0, 0.3, -0.2, 0.9]);
        let g = frame.generator_at(&x).unwrap();
        let expected = pauli_map(&x.coords())
            .as_algebra_element()
            .scaled(c(0.0, 1.0));
        assert!((g.as_element() - &expected).frobenius_norm() <= 1e-14);
    }

    #[test]
    fn frames_have_unit_norm_skew_generators_and_skew_curvature() {
        for frame in [GeneratorFrame::pauli_frame(), GeneratorFrame::pauli_tensor_frame()] {
            for g in frame.generators() {
                assert!(g.as_element().is_skew_hermitian(1e-14));
                assert!((g.as_element().cstar_norm() - 1.0).abs() <= 1e-10);
            }
            for k in 0..frame.arity() {
                for l in 0..frame.arity() {
                    let c_kl = frame.curvature(k, l);
                    assert!(c_kl.is_skew_hermitian(1e-13));
                    let antisym = &c_kl + &frame.curvature(l, k);
                    assert!(antisym.frobenius_norm() <= 1e-13);
                }
            }
        }
    }

    #[test]
    fn direction_semigroup_requires_the_hull() {
        let frame = GeneratorFrame::pauli_frame();
        let outside = ConeVector([0.1, 1.0, 0.0, 0.0]);
        assert!(matches!(
            frame.direction_semigroup(&outside),
            Err(ConeError::OutsideHull { .. })
        ));
        let inside = ConeVector([1.0, 0.2, 0.3, 0.1]);
        assert!(frame.direction_semigroup(&inside).is_ok());
    }

    #[test]
    fn zero_direction_gives_the_identity_family() {
        let frame = GeneratorFrame::pauli_frame();
        let family = frame.direction_semigroup(&ConeVector::zero()).unwrap();
        let mut rng = StdRng::seed_from_u64(13);
        let q = sample::random_element(&mut rng, 2, 1.0);
        assert!((&family.at(3.7).apply(&q) - &q).cstar_norm() <= 1e-14);
    }

    #[test]
    fn direction_scaling_matches_time_scaling() {
        let frame = GeneratorFrame::pauli_tensor_frame();
        let x = ConeVector([1.0, 0.6, 0.0, 0.8]);
        let mut rng = StdRng::seed_from_u64(17);
        let q = sample::random_unit_element(&mut rng, 4);
        let double = frame.direction_semigroup(&x.scaled(2.0)).unwrap();
        let single = frame.direction_semigroup(&x).unwrap();
        for t in [0.25, 1.0, 2.0] {
            let diff = &double.at(t).apply(&q) - &single.at(2.0 * t).apply(&q);
            assert!(diff.cstar_norm() <= 1e-10);
        }
    }

    #[test]
    fn direction_semigroup_preserves_the_involution() {
        let frame = GeneratorFrame::pauli_tensor_frame();
        let x = ConeVector([1.2, 0.5, -0.8, 0.3]);
        let family = frame.direction_semigroup(&x).unwrap();
        let mut rng = StdRng::seed_from_u64(19);
        let q = sample::random_element(&mut rng, 4, 1.0);
        let e = family.at(0.9);
        assert!((&e.apply(&q.star()) - &e.apply(&q).star()).cstar_norm() <= 1e-12);
    }

    #[test]
    fn interchange_commuting_directions_is_trivial() {
        let frame = GeneratorFrame::pauli_frame();
        let x = ConeVector([1.0, 0.0, 0.0, 1.0]);
        let mut rng = StdRng::seed_from_u64(23);
        let samples = unit_samples(&mut rng, 2, 4);
        // y parallel to x: the generators commute.
        let report = frame
            .interchange(&x, &x.scaled(0.5), 1.3, 0.7, &samples)
            .unwrap();
        let diff = report.fiber.as_element() - &AlgebraElement::identity(2);
        assert!(diff.cstar_norm() <= 1e-12);
        assert!(report.residual <= 1e-12, "{report:?}");
    }

    #[test]
    fn interchange_residual_vanishes_for_generic_directions() {
        let mut rng = StdRng::seed_from_u64(29);
        for frame in [GeneratorFrame::pauli_frame(), GeneratorFrame::pauli_tensor_frame()] {
            let samples = unit_samples(&mut rng, frame.dim(), 5);
            let x = ConeVector(sample::random_cone_vector(&mut rng, 1.0));
            let y = ConeVector(sample::random_cone_vector(&mut rng, 1.0));
            let report = frame.interchange(&x, &y, 1.0, 1.0, &samples).unwrap();
            assert!(report.residual <= 1e-9, "{report:?}");
            assert!(report.unitarity_defect <= 1e-9);
        }
    }

    #[test]
    fn interchange_log_approaches_the_curvature_term() {
        // ||log u - t s [g(x), g(y)]|| = O((t + s)^3): a halving sweep must
        // show at least cubic decay.
        let frame = GeneratorFrame::pauli_frame();
        let x = ConeVector([1.0, 1.0, 0.0, 0.0]);
        let y = ConeVector([1.0, 0.0, 1.0, 0.0]);
        let gx = frame.generator_at(&x).unwrap();
        let gy = frame.generator_at(&y).unwrap();
        let curvature = commutator(gx.as_element(), gy.as_element()).unwrap();
        let defect_at = |tau: f64| {
            let report = frame
                .interchange(&x, &y, tau, tau, &[AlgebraElement::identity(2)])
                .unwrap();
            let log = report.fiber.as_element().log_near_identity().unwrap();
            (&log - &curvature.scaled_re(tau * tau)).cstar_norm()
        };
        let d0 = defect_at(0.2);
        let d1 = defect_at(0.1);
        let d2 = defect_at(0.05);
        let order01 = (d0 / d1).log2();
        let order12 = (d1 / d2).log2();
        assert!(
            order01 >= 2.5 && order12 >= 2.5,
            "orders {order01} {order12} ({d0} {d1} {d2})"
        );
    }

    #[test]
    fn single_segment_path_has_identity_fiber() {
        let frame = GeneratorFrame::pauli_tensor_frame();
        let x = ConeVector([1.0, 0.3, 0.9, -0.2]).scaled(0.8);
        let point = frame.path_compose(&[x]).unwrap();
        assert_eq!(point.base, x);
        let diff = point.fiber.as_element() - &AlgebraElement::identity(4);
        assert!(diff.cstar_norm() <= 1e-12);
    }

    #[test]
    fn path_outside_the_hull_is_rejected() {
        let frame = GeneratorFrame::pauli_frame();
        let bad = ConeVector([0.2, 1.0, 0.0, 0.0]);
        assert!(matches!(
            frame.path_compose(&[bad]),
            Err(ConeError::OutsideHull { .. })
        ));
    }

    #[test]
    fn two_paths_to_the_same_corner_differ_by_the_interchange_fiber() {
        let frame = GeneratorFrame::pauli_tensor_frame();
        let t = 0.9;
        let s = 0.6;
        let x = ConeVector([1.0, 1.0, 0.0, 0.0]).scaled(t);
        let y = ConeVector([1.0, 0.0, 0.6, 0.8]).scaled(s);
        let corner = x.add(&y);
        let path_xy = frame.path_compose(&[x, corner]).unwrap();
        let path_yx = frame.path_compose(&[y, corner]).unwrap();
        assert_eq!(path_xy.base, path_yx.base);
        // Both points represent endomorphisms over the same base, so their
        // fibers differ by the unitary group commutator.
        let ratio = path_xy.fiber.compose(&path_yx.fiber.inverse());
        let gx = frame.generator_at(&x).unwrap();
        let gy = frame.generator_at(&y).unwrap();
        let expected = &(&(&gy.exp_at(1.0) * &gx.exp_at(1.0)) * &gy.exp_at(-1.0)) * &gx.exp_at(-1.0);
        assert!(
            (ratio.as_element() - &expected).cstar_norm() <= 1e-9,
            "fiber ratio is not the interchange commutator"
        );
        // And the two endomorphisms agree after Ad of the ratio.
        let mut rng = StdRng::seed_from_u64(31);
        let q = sample::random_unit_element(&mut rng, 4);
        let e_xy = frame.endomorphism_of(&path_xy).unwrap();
        let e_yx = frame.endomorphism_of(&path_yx).unwrap();
        let diff = &e_xy.apply(&q) - &ratio.conjugate(&e_yx.apply(&q));
        assert!(diff.cstar_norm() <= 1e-9);
    }

    #[test]
    fn closed_loop_holonomy_matches_the_curvature_leading_term() {
        let frame = GeneratorFrame::pauli_tensor_frame();
        let x = ConeVector([1.0, 1.0, 0.0, 0.0]);
        let y = ConeVector([1.0, 0.0, 1.0, 0.0]);
        let study = loop_holonomy_study(&frame, &x, &y, &[0.2, 0.1, 0.05]).unwrap();
        for w in study.windows(2) {
            let order = (w[0].defect / w[1].defect).log2();
            assert!(order >= 2.5, "holonomy defect order {order}: {study:?}");
        }
        // The leading term itself is quadratic in the size.
        let ratio = study[0].predicted_norm / study[1].predicted_norm;
        assert!((ratio - 4.0).abs() <= 1e-9);
    }

    #[test]
    fn bundle_points_over_zero_compose_as_the_gauge_group() {
        let frame = GeneratorFrame::pauli_frame();
        let mut rng = StdRng::seed_from_u64(37);
        let u = sample::random_gauge_group(&mut rng, 2);
        let v = sample::random_gauge_group(&mut rng, 2);
        let p = BundlePoint {
            base: ConeVector::zero(),
            fiber: u.clone(),
        };
        let r = BundlePoint {
            base: ConeVector::zero(),
            fiber: v.clone(),
        };
        let q = sample::random_unit_element(&mut rng, 2);
        let left = frame.endomorphism_of(&p).unwrap();
        let right = frame.endomorphism_of(&r).unwrap();
        let composed = left.apply(&right.apply(&q));
        let direct = u.compose(&v).conjugate(&q);
        assert!((&composed - &direct).cstar_norm() <= 1e-12);
    }

    #[test]
    fn gauge_point_composed_with_direction_point_lands_over_that_base() {
        // Ad_u over 0 composed with the straight point over x: the composite
        // sits over base x with fiber in the gauge group, the two-parameter
        // family of gauge times direction.
        let frame = GeneratorFrame::pauli_frame();
        let mut rng = StdRng::seed_from_u64(43);
        let u = sample::random_gauge_group(&mut rng, 2);
        let x = ConeVector([1.0, 0.4, 0.6, 0.0]);
        let gauge_point = BundlePoint {
            base: ConeVector::zero(),
            fiber: u.clone(),
        };
        let straight_point = frame.path_compose(&[x]).unwrap();
        let q = sample::random_unit_element(&mut rng, 2);
        let left = frame.endomorphism_of(&gauge_point).unwrap();
        let right = frame.endomorphism_of(&straight_point).unwrap();
        let composed = left.apply(&right.apply(&q));
        // Expected: Ad_u . E^x_1 applied directly.
        let straight = frame.generator_at(&x).unwrap().exp_at(1.0);
        let expected = u.conjugate(&(&(&straight * &q) * &straight.star()));
        assert!((&composed - &expected).cstar_norm() <= 1e-12);
        let reports = frame
            .bundle_semigroup_check(
                &[(gauge_point, straight_point)],
                &[q],
                1e-9,
            )
            .unwrap();
        for report in &reports {
            assert!(report.pass, "{report:?}");
        }
    }

    #[test]
    fn bundle_semigroup_check_passes_on_random_points() {
        let frame = GeneratorFrame::pauli_tensor_frame();
        let mut rng = StdRng::seed_from_u64(41);
        let samples = unit_samples(&mut rng, 4, 3);
        let mut pairs = Vec::new();
        for _ in 0..4 {
            let mk = |rng: &mut StdRng| {
                let base = ConeVector(sample::random_cone_vector(rng, 0.8));
                let fiber = sample::random_gauge_group(rng, 4);
                BundlePoint { base, fiber }
            };
            pairs.push((mk(&mut rng), mk(&mut rng)));
        }
        let reports = frame.bundle_semigroup_check(&pairs, &samples, 1e-9).unwrap();
        for report in &reports {
            assert!(report.pass, "{report:?}");
        }
    }

    #[test]
    fn cone_vector_json_round_trip() {
        let path = vec![ConeVector([1.0, 0.5, 0.25, 0.1]), ConeVector::zero()];
        let json = serde_json::to_string(&path).unwrap();
        assert_eq!(json, "[[1.0,0.5,0.25,0.1],[0.0,0.0,0.0,0.0]]");
        let back: Vec<ConeVector> = serde_json::from_str(&json).unwrap();
        assert_eq!(back, path);
    }

    #[test]
    fn paths_specified_as_json_compose() {
        let frame = GeneratorFrame::pauli_frame();
        let json = "[[0.5,0.3,0.0,0.4],[1.0,0.3,0.6,0.4]]";
        let path: Vec<ConeVector> = serde_json::from_str(json).unwrap();
        let point = frame.path_compose(&path).unwrap();
        assert_eq!(point.base, ConeVector([1.0, 0.3, 0.6, 0.4]));
        assert!(point.fiber.as_element().unitary_defect() <= 1e-9);
    }
}
