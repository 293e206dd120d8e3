//! Vector fields built from a representation through a transition operator.
//!
//! The desk-scale model: H is functions on a periodic N-point grid, the
//! difference operator is the central-difference circulant (exactly skew by
//! antisymmetry), and the transition stack is D = (1; d) into H (x) C^2 with
//! the swap S exchanging the two legs. Multiplication operators are diagonal
//! matrices. Everything here is plain linear algebra on `AlgebraElement`s;
//! residuals are reported in the Frobenius norm, an upper bound on the
//! operator norm with exact O(N^2) evaluation.

use num_complex::Complex64;

use crate::algebra::{commutator, pauli, AlgebraElement, AlgebraError};
use crate::report::{CheckReport, ResidualScan};

/// Central-difference circulant on a periodic grid: entries +-1/(2h) on the
/// wraparound super/subdiagonals. Real antisymmetric, hence exactly
/// skew-Hermitian.
#[derive(Clone, Debug)]
pub struct DifferenceOperator {
    n: usize,
    h: f64,
    matrix: AlgebraElement,
}

impl DifferenceOperator {
    pub fn new(n: usize, h: f64) -> Self {
        assert!(n >= 3 && h > 0.0);
        let w = 1.0 / (2.0 * h);
        let mut m = AlgebraElement::zeros(n);
        for i in 0..n {
            m.set_entry(i, (i + 1) % n, Complex64::new(w, 0.0));
            m.set_entry(i, (i + n - 1) % n, Complex64::new(-w, 0.0));
        }
        Self { n, h, matrix: m }
    }

    /// Periodic grid on [0, 2 pi) with spacing 2 pi / n.
    pub fn periodic_circle(n: usize) -> Self {
        Self::new(n, 2.0 * std::f64::consts::PI / n as f64)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn spacing(&self) -> f64 {
        self.h
    }

    pub fn matrix(&self) -> &AlgebraElement {
        &self.matrix
    }

    /// d + d* as a matrix; zero entry by entry, not just in norm.
    pub fn skew_defect(&self) -> AlgebraElement {
        &self.matrix + &self.matrix.star()
    }
}

/// 2x2 complex parameter of the bilinear field family.
#[derive(Clone, Debug, PartialEq)]
pub struct ParameterMatrix {
    entries: [[Complex64; 2]; 2],
}

impl ParameterMatrix {
    pub fn new(entries: [[Complex64; 2]; 2]) -> Self {
        Self { entries }
    }

    pub fn zero() -> Self {
        Self::new([[Complex64::new(0.0, 0.0); 2]; 2])
    }

    pub fn identity() -> Self {
        let mut m = Self::zero();
        m.entries[0][0] = Complex64::new(1.0, 0.0);
        m.entries[1][1] = Complex64::new(1.0, 0.0);
        m
    }

    /// The coefficient matrix that reproduces the translation field
    /// d* q + q d: the swap-positioned entries X^{01} = X^{10} = 1.
    pub fn swap_coefficients() -> Self {
        let mut m = Self::zero();
        m.entries[0][1] = Complex64::new(1.0, 0.0);
        m.entries[1][0] = Complex64::new(1.0, 0.0);
        m
    }

    /// The rank-<=1 Hermitian parameter phi (x) conj(phi).
    pub fn from_spinor(phi: [Complex64; 2]) -> Self {
        let mut m = Self::zero();
        for l in 0..2 {
            for lp in 0..2 {
                m.entries[l][lp] = phi[l] * phi[lp].conj();
            }
        }
        m
    }

    /// Minkowski labeling x0 I + sum x^k sigma_k.
    pub fn from_minkowski(x: &[f64; 4]) -> Self {
        let mut entries = [[Complex64::new(0.0, 0.0); 2]; 2];
        let sigma: [AlgebraElement; 4] = [pauli(0), pauli(1), pauli(2), pauli(3)];
        for (coeff, s) in x.iter().zip(sigma.iter()) {
            for (l, row) in entries.iter_mut().enumerate() {
                for (lp, e) in row.iter_mut().enumerate() {
                    *e += s.entry(l, lp) * *coeff;
                }
            }
        }
        Self::new(entries)
    }

    pub fn entry(&self, l: usize, lp: usize) -> Complex64 {
        self.entries[l][lp]
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        let d00 = self.entries[0][0] - self.entries[0][0].conj();
        let d11 = self.entries[1][1] - self.entries[1][1].conj();
        let d01 = self.entries[0][1] - self.entries[1][0].conj();
        d00.norm() <= tol && d11.norm() <= tol && d01.norm() <= tol
    }

    pub fn determinant(&self) -> Complex64 {
        self.entries[0][0] * self.entries[1][1] - self.entries[0][1] * self.entries[1][0]
    }

    pub fn trace(&self) -> Complex64 {
        self.entries[0][0] + self.entries[1][1]
    }

    pub fn as_algebra_element(&self) -> AlgebraElement {
        AlgebraElement::from_fn(2, |i, j| self.entries[i][j])
    }

    pub fn linear_combination(alpha: Complex64, x: &Self, beta: Complex64, y: &Self) -> Self {
        let mut out = Self::zero();
        for l in 0..2 {
            for lp in 0..2 {
                out.entries[l][lp] = alpha * x.entries[l][lp] + beta * y.entries[l][lp];
            }
        }
        out
    }
}

/// The transition stack D = (D_0; D_1) with D_0 = 1 and D_1 = d, together
/// with the swap S on the two legs of H (x) C^2.
#[derive(Clone, Debug)]
pub struct TransitionOperator {
    partial: DifferenceOperator,
}

impl TransitionOperator {
    pub fn new(partial: DifferenceOperator) -> Self {
        Self { partial }
    }

    pub fn periodic_circle(n: usize) -> Self {
        Self::new(DifferenceOperator::periodic_circle(n))
    }

    pub fn partial(&self) -> &DifferenceOperator {
        &self.partial
    }

    pub fn len(&self) -> usize {
        self.partial.len()
    }

    pub fn is_empty(&self) -> bool {
        self.partial.is_empty()
    }

    /// The stacked matrices [D, 0-padded] and S as square 2N x 2N operators,
    /// for JSON export and external cross-checks. D occupies the first N
    /// columns of the 2N x 2N embedding.
    pub fn stacked_transition(&self) -> AlgebraElement {
        let n = self.len();
        let d = self.partial.matrix();
        AlgebraElement::from_fn(2 * n, |i, j| {
            if j >= n {
                Complex64::new(0.0, 0.0)
            } else if i < n {
                // D_0 = identity block.
                if i == j {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            } else {
                d.entry(i - n, j)
            }
        })
    }

    /// The swap [[0, 1], [1, 0]] on H (x) C^2.
    pub fn swap(&self) -> AlgebraElement {
        let n = self.len();
        AlgebraElement::from_fn(2 * n, |i, j| {
            if (i + n) % (2 * n) == j {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    fn require_diagonal(&self, q: &AlgebraElement) -> Result<(), AlgebraError> {
        if q.dim() != self.len() {
            return Err(AlgebraError::DimensionMismatch {
                left: q.dim(),
                right: self.len(),
            });
        }
        if !q.is_diagonal() {
            return Err(AlgebraError::NotDiagonal);
        }
        Ok(())
    }

    /// The translation field V(q) = d* q + q d = [q, d] for a multiplication
    /// operator q.
    pub fn translation_field(&self, q: &AlgebraElement) -> Result<AlgebraElement, AlgebraError> {
        self.require_diagonal(q)?;
        commutator(q, self.partial.matrix())
    }

    /// The bilinear family V_X(q) = X^{L L'} D*_{L'} S pi(q) D_L with
    /// pi(q) = diag(q, q). In this model D*_0 S pi(q) D_0 and
    /// D*_1 S pi(q) D_1 vanish identically (the swap pairs each leg with the
    /// other), leaving X^{01} d* q + X^{10} q d.
    pub fn sandwich_field(
        &self,
        x: &ParameterMatrix,
        q: &AlgebraElement,
    ) -> Result<AlgebraElement, AlgebraError> {
        self.require_diagonal(q)?;
        let d = self.partial.matrix();
        let d_star_q = &d.star() * q;
        let q_d = q * d;
        Ok(&d_star_q.scaled(x.entry(0, 1)) + &q_d.scaled(x.entry(1, 0)))
    }

    /// Max Frobenius residual of V_X(q*) = (V_X(q))* over diagonal samples,
    /// reported as a pass (Hermitian X) or a lower-bounded failure witness
    /// (non-Hermitian X).
    pub fn reality_of_family(
        &self,
        x: &ParameterMatrix,
        samples: &[AlgebraElement],
        tolerance: f64,
    ) -> Result<CheckReport, AlgebraError> {
        let mut scan = ResidualScan::new();
        for (idx, q) in samples.iter().enumerate() {
            let lhs = self.sandwich_field(x, &q.star())?;
            let rhs = self.sandwich_field(x, q)?.star();
            scan.observe((&lhs - &rhs).frobenius_norm(), || format!("q#{idx}"));
        }
        Ok(scan.into_report("sandwich-field-reality", tolerance))
    }

    /// Both sufficiency conditions and the resulting product rule, on
    /// diagonal pairs (u, v):
    /// - D* S D = d + d* vanishes entry by entry,
    /// - the cross term [u, D*] S [D, v] vanishes identically, and
    /// - the product-rule defect V(uv) - u V(v) - V(u) v equals that cross
    ///   term, so it vanishes too (audited numerically next to it).
    pub fn sufficiency_check(
        &self,
        samples: &[(AlgebraElement, AlgebraElement)],
        tolerance: f64,
    ) -> Result<SufficiencyReport, AlgebraError> {
        let d = self.partial.matrix();
        let dsd_defect = self.partial.skew_defect().frobenius_norm();

        let mut cross = ResidualScan::new();
        let mut product_rule = ResidualScan::new();
        let mut audit = ResidualScan::new();
        let id = AlgebraElement::identity(self.len());
        for (idx, (u, v)) in samples.iter().enumerate() {
            self.require_diagonal(u)?;
            self.require_diagonal(v)?;
            // Blockwise through the swap, [u, D*] S [D, v] =
            // [u, D_0*] [D_1, v] + [u, D_1*] [D_0, v] =
            // [u, 1] [d, v] + [u, d*] [1, v]; each summand carries an exact
            // zero commutator with the identity leg.
            let comm = |a: &AlgebraElement, b: &AlgebraElement| &(a * b) - &(b * a);
            let cross_term = &(&comm(u, &id) * &comm(d, v)) + &(&comm(u, &d.star()) * &comm(&id, v));
            cross.observe(cross_term.frobenius_norm(), || format!("pair#{idx}"));

            let vq = |q: &AlgebraElement| self.translation_field(q);
            let uv = u * v;
            let defect = &(&vq(&uv)? - &(u * &vq(v)?)) - &(&vq(u)? * v);
            product_rule.observe(defect.frobenius_norm(), || format!("pair#{idx}"));
            audit.observe(
                (&defect - &cross_term).frobenius_norm(),
                || format!("pair#{idx}"),
            );
        }

        Ok(SufficiencyReport {
            dsd_defect: CheckReport::new(
                "transition-swap-annihilation",
                dsd_defect,
                "d + d* entrywise",
                0.0,
            ),
            cross_term: cross.into_report("cross-term[u,D*]S[D,v]", tolerance),
            product_rule: product_rule.into_report("translation-field-product-rule", tolerance),
            identity_audit: audit.into_report("defect-equals-cross-term", tolerance),
        })
    }
}

/// Verdicts of [`TransitionOperator::sufficiency_check`].
#[derive(Clone, Debug)]
pub struct SufficiencyReport {
    pub dsd_defect: CheckReport,
    pub cross_term: CheckReport,
    pub product_rule: CheckReport,
    pub identity_audit: CheckReport,
}

impl SufficiencyReport {
    pub fn pass(&self) -> bool {
        self.dsd_defect.pass
            && self.cross_term.pass
            && self.product_rule.pass
            && self.identity_audit.pass
    }
}

/// Diagonal multiplication operator from grid samples of a function.
pub fn multiplication_operator(values: &[Complex64]) -> AlgebraElement {
    AlgebraElement::from_diagonal(values)
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

    fn random_diagonal(rng: &mut StdRng, n: usize) -> AlgebraElement {
        let values: Vec<Complex64> = (0..n)
            .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        multiplication_operator(&values)
    }

    fn real_diagonal(rng: &mut StdRng, n: usize) -> AlgebraElement {
        let values: Vec<Complex64> = (0..n).map(|_| c(rng.gen_range(-1.0..1.0), 0.0)).collect();
        multiplication_operator(&values)
    }

    /// Rectangular complex matrix arithmetic for the stacked-operator oracle,
    /// independent of `AlgebraElement`.
    #[derive(Clone)]
    struct Rect {
        rows: usize,
        cols: usize,
        data: Vec<Complex64>,
    }

    impl Rect {
        fn zeros(rows: usize, cols: usize) -> Self {
            Self {
                rows,
                cols,
                data: vec![c(0.0, 0.0); rows * cols],
            }
        }
        fn get(&self, i: usize, j: usize) -> Complex64 {
            self.data[i * self.cols + j]
        }
        fn set(&mut self, i: usize, j: usize, z: Complex64) {
            self.data[i * self.cols + j] = z;
        }
        fn from_square(a: &AlgebraElement) -> Self {
            let n = a.dim();
            let mut m = Self::zeros(n, n);
            for i in 0..n {
                for j in 0..n {
                    m.set(i, j, a.entry(i, j));
                }
            }
            m
        }
        fn adjoint(&self) -> Self {
            let mut m = Self::zeros(self.cols, self.rows);
            for i in 0..self.rows {
                for j in 0..self.cols {
                    m.set(j, i, self.get(i, j).conj());
                }
            }
            m
        }
        fn mul(&self, rhs: &Self) -> Self {
            assert_eq!(self.cols, rhs.rows);
            let mut m = Self::zeros(self.rows, rhs.cols);
            for i in 0..self.rows {
                for j in 0..rhs.cols {
                    let mut sum = c(0.0, 0.0);
                    for k in 0..self.cols {
                        sum += self.get(i, k) * rhs.get(k, j);
                    }
                    m.set(i, j, sum);
                }
            }
            m
        }
        fn stack_vertical(top: &Self, bottom: &Self) -> Self {
            assert_eq!(top.cols, bottom.cols);
            let mut m = Self::zeros(top.rows + bottom.rows, top.cols);
            for i in 0..top.rows {
                for j in 0..top.cols {
                    m.set(i, j, top.get(i, j));
                }
            }
            for i in 0..bottom.rows {
                for j in 0..bottom.cols {
                    m.set(top.rows + i, j, bottom.get(i, j));
                }
            }
            m
        }
    }

    /// Oracle: V_X(q) from the literal 2N x N stacked operators, summing the
    /// index-by-index contraction X^{L L'} D*_{L'} S pi(q) D_L.
    fn sandwich_oracle(
        op: &TransitionOperator,
        x: &ParameterMatrix,
        q: &AlgebraElement,
    ) -> AlgebraElement {
        let n = op.len();
        let d_mat = Rect::from_square(op.partial().matrix());
        let id = Rect::from_square(&AlgebraElement::identity(n));
        let zero = Rect::zeros(n, n);
        // D_L as 2N x N stacks living on leg L.
        let stacks = [
            Rect::stack_vertical(&id, &zero),
            Rect::stack_vertical(&zero, &d_mat),
        ];
        let q_rect = Rect::from_square(q);
        // S pi(q) as a 2N x 2N block matrix [[0, q], [q, 0]].
        let mut s_pi_q = Rect::zeros(2 * n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                s_pi_q.set(i, n + j, q_rect.get(i, j));
                s_pi_q.set(n + i, j, q_rect.get(i, j));
            }
        }
        let mut total = Rect::zeros(n, n);
        for l in 0..2 {
            for lp in 0..2 {
                let term = stacks[lp].adjoint().mul(&s_pi_q).mul(&stacks[l]);
                let coeff = x.entry(l, lp);
                for k in 0..n * n {
                    total.data[k] += coeff * term.data[k];
                }
            }
        }
        AlgebraElement::from_fn(n, |i, j| total.get(i, j))
    }

    #[test]
    fn difference_operator_is_exactly_skew() {
        let d = DifferenceOperator::periodic_circle(64);
        assert_eq!(d.skew_defect(), AlgebraElement::zeros(64));
    }

    #[test]
    fn translation_field_of_identity_vanishes() {
        let op = TransitionOperator::periodic_circle(32);
        let v = op
            .translation_field(&AlgebraElement::identity(32))
            .unwrap();
        assert_eq!(v, AlgebraElement::zeros(32));
    }

    #[test]
    fn translation_field_rejects_non_diagonal() {
        let op = TransitionOperator::periodic_circle(8);
        let mut q = AlgebraElement::identity(8);
        q.set_entry(0, 1, c(0.5, 0.0));
        assert!(matches!(
            op.translation_field(&q),
            Err(AlgebraError::NotDiagonal)
        ));
        let wrong_dim = AlgebraElement::identity(9);
        assert!(matches!(
            op.translation_field(&wrong_dim),
            Err(AlgebraError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn translation_field_product_rule_is_exact() {
        let op = TransitionOperator::periodic_circle(48);
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..4 {
            let u = random_diagonal(&mut rng, 48);
            let v = random_diagonal(&mut rng, 48);
            let lhs = op.translation_field(&(&u * &v)).unwrap();
            let rhs = &(&u * &op.translation_field(&v).unwrap())
                + &(&op.translation_field(&u).unwrap() * &v);
            assert!((&lhs - &rhs).frobenius_norm() <= 1e-12);
        }
    }

    #[test]
    fn translation_field_of_real_diagonal_is_real() {
        let op = TransitionOperator::periodic_circle(32);
        let mut rng = StdRng::seed_from_u64(11);
        let q = real_diagonal(&mut rng, 32);
        let v = op.translation_field(&q).unwrap();
        let v_star_input = op.translation_field(&q.star()).unwrap();
        assert!((&v_star_input - &v.star()).frobenius_norm() <= 1e-13);
    }

    #[test]
    fn swap_coefficients_reproduce_translation_field() {
        let op = TransitionOperator::periodic_circle(40);
        let mut rng = StdRng::seed_from_u64(13);
        let q = random_diagonal(&mut rng, 40);
        let from_x = op
            .sandwich_field(&ParameterMatrix::swap_coefficients(), &q)
            .unwrap();
        let direct = op.translation_field(&q).unwrap();
        assert_eq!(from_x, direct);
    }

    #[test]
    fn zero_parameter_gives_zero_field() {
        let op = TransitionOperator::periodic_circle(16);
        let mut rng = StdRng::seed_from_u64(17);
        let q = random_diagonal(&mut rng, 16);
        let v = op.sandwich_field(&ParameterMatrix::zero(), &q).unwrap();
        assert_eq!(v, AlgebraElement::zeros(16));
    }

    #[test]
    fn sandwich_field_matches_stacked_contraction_oracle() {
        let op = TransitionOperator::periodic_circle(12);
        let mut rng = StdRng::seed_from_u64(19);
        let q = random_diagonal(&mut rng, 12);
        for x in [
            ParameterMatrix::swap_coefficients(),
            ParameterMatrix::identity(),
            ParameterMatrix::from_spinor([c(1.0, 0.0), c(0.0, 0.0)]),
            ParameterMatrix::from_spinor(sample::random_spinor(&mut rng)),
            ParameterMatrix::new([[c(0.3, 0.2), c(-1.0, 0.4)], [c(0.0, 0.9), c(2.0, -0.3)]]),
        ] {
            let fast = op.sandwich_field(&x, &q).unwrap();
            let oracle = sandwich_oracle(&op, &x, &q);
            assert!(
                (&fast - &oracle).frobenius_norm() <= 1e-12,
                "mismatch for {x:?}"
            );
        }
    }

    #[test]
    fn basis_spinor_selects_the_zero_block() {
        // phi = (1, 0): X = diag(1, 0) touches only the vanishing S-block,
        // so the field is zero.
        let op = TransitionOperator::periodic_circle(16);
        let mut rng = StdRng::seed_from_u64(23);
        let q = random_diagonal(&mut rng, 16);
        let x = ParameterMatrix::from_spinor([c(1.0, 0.0), c(0.0, 0.0)]);
        let v = op.sandwich_field(&x, &q).unwrap();
        assert_eq!(v, AlgebraElement::zeros(16));
        assert_eq!(sandwich_oracle(&op, &x, &q), AlgebraElement::zeros(16));
    }

    #[test]
    fn sandwich_field_is_bilinear_in_the_parameter() {
        let op = TransitionOperator::periodic_circle(24);
        let mut rng = StdRng::seed_from_u64(29);
        let q = random_diagonal(&mut rng, 24);
        let x = ParameterMatrix::new([[c(0.1, 0.2), c(0.5, -0.1)], [c(1.0, 0.0), c(0.0, 0.7)]]);
        let y = ParameterMatrix::new([[c(-0.4, 0.0), c(0.2, 0.3)], [c(0.0, -1.0), c(0.6, 0.1)]]);
        let alpha = c(0.7, -0.3);
        let beta = c(-1.1, 0.2);
        let combined = op
            .sandwich_field(
                &ParameterMatrix::linear_combination(alpha, &x, beta, &y),
                &q,
            )
            .unwrap();
        let split = &op.sandwich_field(&x, &q).unwrap().scaled(alpha)
            + &op.sandwich_field(&y, &q).unwrap().scaled(beta);
        assert!((&combined - &split).frobenius_norm() <= 1e-12);
    }

    #[test]
    fn hermitian_parameters_give_real_fields() {
        let op = TransitionOperator::periodic_circle(32);
        let mut rng = StdRng::seed_from_u64(31);
        let samples: Vec<AlgebraElement> =
            (0..8).map(|_| random_diagonal(&mut rng, 32)).collect();
        for x in [
            ParameterMatrix::identity(),
            ParameterMatrix::swap_coefficients(),
            ParameterMatrix::from_spinor(sample::random_spinor(&mut rng)),
            ParameterMatrix::from_minkowski(&[1.3, -0.2, 0.8, 0.4]),
        ] {
            assert!(x.is_hermitian(1e-12));
            let report = op.reality_of_family(&x, &samples, 1e-12).unwrap();
            assert!(report.pass, "{report:?}");
        }
    }

    #[test]
    fn non_hermitian_parameters_fail_reality() {
        let op = TransitionOperator::periodic_circle(32);
        let mut rng = StdRng::seed_from_u64(37);
        let samples: Vec<AlgebraElement> =
            (0..8).map(|_| random_diagonal(&mut rng, 32)).collect();
        let nilpotent = ParameterMatrix::new([[c(0.0, 0.0), c(1.0, 0.0)], [c(0.0, 0.0), c(0.0, 0.0)]]);
        let report = op.reality_of_family(&nilpotent, &samples, 1e-12).unwrap();
        assert!(!report.pass);
        assert!(report.max_residual > 0.1, "{report:?}");
    }

    #[test]
    fn minkowski_labeling_reality_iff_real_up_to_the_diagonal_kernel() {
        // Real 4-vectors give Hermitian parameters hence real fields; an
        // imaginary component along sigma_1 or sigma_2 breaks reality. (The
        // diagonal directions sigma_0, sigma_3 act trivially in this model:
        // both diagonal S-blocks vanish.)
        let op = TransitionOperator::periodic_circle(24);
        let mut rng = StdRng::seed_from_u64(41);
        let samples: Vec<AlgebraElement> = (0..6).map(|_| random_diagonal(&mut rng, 24)).collect();
        let real_x = ParameterMatrix::from_minkowski(&[0.5, 1.0, -0.7, 0.2]);
        assert!(op
            .reality_of_family(&real_x, &samples, 1e-12)
            .unwrap()
            .pass);
        // x^1 -> x^1 + 0.3 i.
        let mut broken = ParameterMatrix::from_minkowski(&[0.5, 1.0, -0.7, 0.2]);
        broken = ParameterMatrix::linear_combination(
            c(1.0, 0.0),
            &broken,
            c(0.0, 0.3),
            &ParameterMatrix::from_minkowski(&[0.0, 1.0, 0.0, 0.0]),
        );
        let report = op.reality_of_family(&broken, &samples, 1e-12).unwrap();
        assert!(!report.pass && report.max_residual > 0.01, "{report:?}");
    }

    #[test]
    fn translation_field_generates_the_shift_group() {
        // V(q) = [q, d] is the inner field of the bounded surrogate -d, so
        // its group is Ad_exp(-t d); the semigroup engine runs against it
        // directly, and its derivative at 0 recovers the field.
        use crate::semigroup::{
            check_semigroup_laws, generate_inner_semigroup, SemigroupTolerances,
        };
        let op = TransitionOperator::periodic_circle(24);
        let generator = crate::algebra::GaugeAlgebraElement::from_skew(
            op.partial().matrix().scaled_re(-1.0),
        );
        let family = generate_inner_semigroup(&generator);
        let mut rng = StdRng::seed_from_u64(47);
        let samples = vec![real_diagonal(&mut rng, 24), random_diagonal(&mut rng, 24)];
        let reports =
            check_semigroup_laws(&family, &[0.0, 0.2, 0.7], &samples, SemigroupTolerances::uniform(1e-9));
        for report in &reports {
            assert!(report.pass, "{report:?}");
        }
        // Central difference of the family at 0 converges to [q, d].
        let q = real_diagonal(&mut rng, 24);
        let target = op.translation_field(&q).unwrap();
        let central = |h: f64| {
            let plus = family.at(h).apply(&q);
            let minus = family.at(-h).apply(&q);
            (&(&plus - &minus).scaled_re(0.5 / h) - &target).frobenius_norm()
        };
        let e1 = central(1e-3);
        let e2 = central(5e-4);
        assert!((e1 / e2).log2() >= 1.9, "orders {e1} {e2}");
    }

    #[test]
    fn sufficiency_conditions_hold_identically() {
        let op = TransitionOperator::periodic_circle(48);
        let mut rng = StdRng::seed_from_u64(43);
        let pairs: Vec<(AlgebraElement, AlgebraElement)> = (0..6)
            .map(|_| (random_diagonal(&mut rng, 48), random_diagonal(&mut rng, 48)))
            .collect();
        let report = op.sufficiency_check(&pairs, 1e-12).unwrap();
        assert!(report.pass(), "{report:?}");
        assert_eq!(report.dsd_defect.max_residual, 0.0);
    }

    #[test]
    fn sufficiency_identity_terms_vanish_for_units() {
        let op = TransitionOperator::periodic_circle(16);
        let id = AlgebraElement::identity(16);
        let report = op.sufficiency_check(&[(id.clone(), id)], 1e-14).unwrap();
        assert!(report.pass(), "{report:?}");
        assert_eq!(report.product_rule.max_residual, 0.0);
    }

    #[test]
    fn stacked_exports_are_consistent() {
        let op = TransitionOperator::periodic_circle(6);
        let d_stack = op.stacked_transition();
        let s = op.swap();
        // D* S D embedded in the 2N square model: the N x N top-left block of
        // (D*)(S)(D) must vanish (it equals d + d*).
        let product = &(&d_stack.star() * &s) * &d_stack;
        for i in 0..6 {
            for j in 0..6 {
                assert_eq!(product.entry(i, j), c(0.0, 0.0));
            }
        }
        // JSON round trip of the exported operators.
        let json = serde_json::to_string(&s).unwrap();
        let back: AlgebraElement = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
    }
}
