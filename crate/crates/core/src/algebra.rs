//! Finite-dimensional complex matrix *-algebra with its C*-norm.
//!
//! `AlgebraElement` is a dense n×n complex matrix; the involution is the
//! conjugate transpose and the norm is the largest singular value, the unique
//! C*-norm on a matrix algebra. Skew-Hermitian elements ([`GaugeAlgebraElement`])
//! and unitaries ([`GaugeGroupElement`]) get their own validated wrappers, since
//! they are what the semigroup constructions consume.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Residual tolerance for identities that hold exactly in exact arithmetic.
pub const ALGEBRAIC_TOL: f64 = 1e-12;
/// Tolerance for quantities that pass through a spectral computation.
pub const SPECTRAL_TOL: f64 = 1e-10;
/// Looser spectral tolerance for accumulated products and large sweeps.
pub const LOOSE_SPECTRAL_TOL: f64 = 1e-8;
/// Default unitarity acceptance for [`GaugeGroupElement`] construction.
pub const UNITARY_TOL: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AlgebraError {
    #[error("dimension mismatch: {left}x{left} vs {right}x{right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("matrix rows are ragged or not square: {rows} rows, row {row} has {cols} entries")]
    NotSquare { rows: usize, row: usize, cols: usize },
    #[error("element is not unitary: ||u*u - 1|| = {defect:.3e} exceeds {tolerance:.3e}")]
    NotUnitary { defect: f64, tolerance: f64 },
    #[error("logarithm out of domain: ||u - 1|| = {distance:.3e} >= 1")]
    LogOutOfDomain { distance: f64 },
    #[error("expected a diagonal matrix")]
    NotDiagonal,
}

/// Element of the matrix C*-algebra: a dense complex square matrix.
#[derive(Clone, PartialEq)]
pub struct AlgebraElement {
    dim: usize,
    // Row-major, length dim * dim.
    entries: Vec<Complex64>,
}

impl fmt::Debug for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "AlgebraElement({}x{})", self.dim, self.dim)?;
        for i in 0..self.dim {
            let row: Vec<String> = (0..self.dim)
                .map(|j| {
                    let z = self.entry(i, j);
                    format!("{:+.4}{:+.4}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl AlgebraElement {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            entries: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set_entry(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self, AlgebraError> {
        let dim = rows.len();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(AlgebraError::NotSquare {
                    rows: dim,
                    row: i,
                    cols: row.len(),
                });
            }
        }
        Ok(Self {
            dim,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    /// Real matrix literal, mostly for tests and fixed operators.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self, AlgebraError> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
                .collect(),
        )
    }

    pub fn from_diagonal(diag: &[Complex64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &z) in diag.iter().enumerate() {
            m.set_entry(i, i, z);
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m.set_entry(i, j, f(i, j));
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.dim + j]
    }

    #[inline]
    pub fn set_entry(&mut self, i: usize, j: usize, z: Complex64) {
        self.entries[i * self.dim + j] = z;
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        (0..self.dim).map(|i| self.entry(i, i)).collect()
    }

    /// Off-diagonal entries must be exactly zero.
    pub fn is_diagonal(&self) -> bool {
        for i in 0..self.dim {
            for j in 0..self.dim {
                if i != j && self.entry(i, j) != Complex64::new(0.0, 0.0) {
                    return false;
                }
            }
        }
        true
    }

    /// The involution: conjugate transpose.
    pub fn star(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.entry(j, i).conj())
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|&z| z * c).collect(),
        }
    }

    pub fn scaled_re(&self, r: f64) -> Self {
        self.scaled(Complex64::new(r, 0.0))
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.entry(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Maximum absolute column sum; the cheap norm used to pick the
    /// exponential scaling count.
    pub fn one_norm(&self) -> f64 {
        let mut max = 0.0f64;
        for j in 0..self.dim {
            let col: f64 = (0..self.dim).map(|i| self.entry(i, j).norm()).sum();
            max = max.max(col);
        }
        max
    }

    /// The C*-norm: largest singular value, computed as sqrt of the top
    /// eigenvalue of a*a (cyclic Jacobi on the Hermitian Gram matrix).
    pub fn cstar_norm(&self) -> f64 {
        if self.dim == 0 {
            return 0.0;
        }
        let gram = &self.star() * self;
        let top = hermitian_eigenvalues(&gram)
            .into_iter()
            .fold(0.0f64, f64::max);
        top.max(0.0).sqrt()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        (self - &self.star()).frobenius_norm() <= tol
    }

    pub fn is_skew_hermitian(&self, tol: f64) -> bool {
        (self + &self.star()).frobenius_norm() <= tol
    }

    pub fn unitary_defect(&self) -> f64 {
        let n = self.dim;
        let left = (&(&self.star() * self) - &Self::identity(n)).cstar_norm();
        let right = (&(self * &self.star()) - &Self::identity(n)).cstar_norm();
        left.max(right)
    }

    /// Matrix exponential by scaling and squaring around a degree-13 Taylor
    /// core; the scaling count brings the 1-norm at or below 0.5, where the
    /// truncation error sits under double precision.
    pub fn exp(&self) -> Self {
        let norm = self.one_norm();
        let squarings = if norm <= 0.5 {
            0u32
        } else {
            ((norm / 0.5).log2().ceil() as u32).min(64)
        };
        let scaled = self.scaled_re(1.0 / 2.0f64.powi(squarings as i32));
        let mut acc = Self::identity(self.dim);
        for k in (1..=13u32).rev() {
            acc = &Self::identity(self.dim) + &(&scaled * &acc).scaled_re(1.0 / f64::from(k));
        }
        let mut result = acc;
        for _ in 0..squarings {
            result = &result * &result;
        }
        result
    }

    /// Principal logarithm near the identity via the alternating series for
    /// ln(1 + x), truncated once a term drops below 1e-14 in Frobenius norm.
    pub fn log_near_identity(&self) -> Result<Self, AlgebraError> {
        let x = self - &Self::identity(self.dim);
        let distance = x.cstar_norm();
        if distance >= 1.0 || distance.is_nan() {
            return Err(AlgebraError::LogOutOfDomain { distance });
        }
        let mut sum = Self::zeros(self.dim);
        let mut power = x.clone();
        let mut k = 1u32;
        loop {
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            let term = power.scaled_re(sign / f64::from(k));
            if term.frobenius_norm() < 1e-14 {
                break;
            }
            sum = &sum + &term;
            power = &power * &x;
            k += 1;
            if k > 20_000 {
                break; // series geometric for ||x|| < 1; this is unreachable headroom
            }
        }
        Ok(sum)
    }
}

/// Checked matrix product; the operator form panics on dimension mismatch.
pub fn mul(a: &AlgebraElement, b: &AlgebraElement) -> Result<AlgebraElement, AlgebraError> {
    if a.dim != b.dim {
        return Err(AlgebraError::DimensionMismatch {
            left: a.dim,
            right: b.dim,
        });
    }
    Ok(a * b)
}

/// Checked commutator [a, b] = ab - ba.
pub fn commutator(a: &AlgebraElement, b: &AlgebraElement) -> Result<AlgebraElement, AlgebraError> {
    if a.dim != b.dim {
        return Err(AlgebraError::DimensionMismatch {
            left: a.dim,
            right: b.dim,
        });
    }
    Ok(&(a * b) - &(b * a))
}

impl Mul for &AlgebraElement {
    type Output = AlgebraElement;

    fn mul(self, rhs: &AlgebraElement) -> AlgebraElement {
        assert_eq!(
            self.dim, rhs.dim,
            "matrix product dimension mismatch: {} vs {}",
            self.dim, rhs.dim
        );
        let n = self.dim;
        let mut out = AlgebraElement::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let aik = self.entries[i * n + k];
                if aik == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out.entries[i * n + j] += aik * rhs.entries[k * n + j];
                }
            }
        }
        out
    }
}

impl Add for &AlgebraElement {
    type Output = AlgebraElement;

    fn add(self, rhs: &AlgebraElement) -> AlgebraElement {
        assert_eq!(self.dim, rhs.dim, "matrix sum dimension mismatch");
        AlgebraElement {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(&a, &b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &AlgebraElement {
    type Output = AlgebraElement;

    fn sub(self, rhs: &AlgebraElement) -> AlgebraElement {
        assert_eq!(self.dim, rhs.dim, "matrix difference dimension mismatch");
        AlgebraElement {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(&a, &b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &AlgebraElement {
    type Output = AlgebraElement;

    fn neg(self) -> AlgebraElement {
        self.scaled_re(-1.0)
    }
}

/// Skew-Hermitian element of the gauge algebra. The projection (g - g*)/2 at
/// construction makes g + g* = 0 exact, not approximate.
#[derive(Clone, Debug, PartialEq)]
pub struct GaugeAlgebraElement {
    value: AlgebraElement,
}

impl GaugeAlgebraElement {
    pub fn new(a: &AlgebraElement) -> Self {
        let skew = (a - &a.star()).scaled_re(0.5);
        Self { value: skew }
    }

    /// Wrap without projecting; panics unless already skew-Hermitian to 1e-12.
    pub fn from_skew(a: AlgebraElement) -> Self {
        assert!(
            a.is_skew_hermitian(ALGEBRAIC_TOL),
            "element is not skew-Hermitian"
        );
        Self { value: a }
    }

    pub fn as_element(&self) -> &AlgebraElement {
        &self.value
    }

    pub fn dim(&self) -> usize {
        self.value.dim()
    }

    pub fn scaled_re(&self, r: f64) -> Self {
        Self {
            value: self.value.scaled_re(r),
        }
    }

    /// exp(tg); unitary because g is skew-Hermitian.
    pub fn exp_at(&self, t: f64) -> AlgebraElement {
        self.value.scaled_re(t).exp()
    }
}

/// Unitary element of the gauge group, validated at construction.
#[derive(Clone, Debug, PartialEq)]
pub struct GaugeGroupElement {
    value: AlgebraElement,
}

impl GaugeGroupElement {
    pub fn new(u: AlgebraElement) -> Result<Self, AlgebraError> {
        Self::with_tolerance(u, UNITARY_TOL)
    }

    pub fn with_tolerance(u: AlgebraElement, tolerance: f64) -> Result<Self, AlgebraError> {
        let defect = u.unitary_defect();
        if defect <= tolerance {
            Ok(Self { value: u })
        } else {
            Err(AlgebraError::NotUnitary { defect, tolerance })
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            value: AlgebraElement::identity(dim),
        }
    }

    pub fn as_element(&self) -> &AlgebraElement {
        &self.value
    }

    pub fn dim(&self) -> usize {
        self.value.dim()
    }

    /// Inverse = adjoint, up to the construction tolerance.
    pub fn inverse(&self) -> Self {
        Self {
            value: self.value.star(),
        }
    }

    /// Group product; stays unitary, no revalidation needed.
    pub fn compose(&self, rhs: &Self) -> Self {
        Self {
            value: &self.value * &rhs.value,
        }
    }

    /// The conjugation q -> u q u*.
    pub fn conjugate(&self, q: &AlgebraElement) -> AlgebraElement {
        &(&self.value * q) * &self.value.star()
    }
}

/// Eigenvalues of a Hermitian matrix by cyclic Jacobi rotations.
///
/// Deterministic and accurate to machine precision for the desk-scale
/// dimensions used here; the Hermitian part of the input is what gets
/// diagonalized, so tiny asymmetry from rounding is harmless.
pub fn hermitian_eigenvalues(h: &AlgebraElement) -> Vec<f64> {
    let n = h.dim();
    if n == 0 {
        return Vec::new();
    }
    // Work on the exact Hermitian part.
    let mut a = (h + &h.star()).scaled_re(0.5);
    let scale = a.frobenius_norm().max(f64::MIN_POSITIVE);
    let target = 1e-14 * scale;

    for _sweep in 0..60 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a.entry(p, q).norm_sqr();
            }
        }
        if (2.0 * off).sqrt() <= target {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a.entry(p, q);
                let b = apq.norm();
                if b <= 1e-300 {
                    continue;
                }
                let u = apq / b; // phase of the off-diagonal entry
                let alpha = a.entry(p, p).re;
                let gamma = a.entry(q, q).re;
                let tau = (gamma - alpha) / (2.0 * b);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                // U = I except U[p][p] = c, U[p][q] = s, U[q][p] = -s*conj(u), U[q][q] = c*conj(u).
                let upp = Complex64::new(c, 0.0);
                let upq = Complex64::new(s, 0.0);
                let uqp = -u.conj() * s;
                let uqq = u.conj() * c;

                // Columns update: A <- A U.
                for i in 0..n {
                    let aip = a.entry(i, p);
                    let aiq = a.entry(i, q);
                    a.set_entry(i, p, aip * upp + aiq * uqp);
                    a.set_entry(i, q, aip * upq + aiq * uqq);
                }
                // Rows update: A <- U* A.
                for j in 0..n {
                    let apj = a.entry(p, j);
                    let aqj = a.entry(q, j);
                    a.set_entry(p, j, upp.conj() * apj + uqp.conj() * aqj);
                    a.set_entry(q, j, upq.conj() * apj + uqq.conj() * aqj);
                }
            }
        }
    }
    let mut eigs: Vec<f64> = (0..n).map(|i| a.entry(i, i).re).collect();
    eigs.sort_by(|a, b| a.partial_cmp(b).expect("eigenvalues are finite"));
    eigs
}

// JSON form: array of rows, each entry a [re, im] pair, row-major.
impl Serialize for AlgebraElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<[f64; 2]>> = (0..self.dim)
            .map(|i| {
                (0..self.dim)
                    .map(|j| {
                        let z = self.entry(i, j);
                        [z.re, z.im]
                    })
                    .collect()
            })
            .collect();
        rows.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for AlgebraElement {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let rows: Vec<Vec<[f64; 2]>> = Vec::deserialize(deserializer)?;
        AlgebraElement::from_rows(
            rows.into_iter()
                .map(|row| {
                    row.into_iter()
                        .map(|[re, im]| Complex64::new(re, im))
                        .collect()
                })
                .collect(),
        )
        .map_err(|e| D::Error::custom(e.to_string()))
    }
}

/// The 2x2 Pauli matrices s1, s2, s3 (s0 = identity lives in `identity(2)`).
pub fn pauli(k: usize) -> AlgebraElement {
    let i = Complex64::new(0.0, 1.0);
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let rows = match k {
        0 => vec![vec![one, zero], vec![zero, one]],
        1 => vec![vec![zero, one], vec![one, zero]],
        2 => vec![vec![zero, -i], vec![i, zero]],
        3 => vec![vec![one, zero], vec![zero, -one]],
        _ => panic!("pauli index must be 0..=3"),
    };
    AlgebraElement::from_rows(rows).expect("pauli literals are square")
}

/// Kronecker product, used to build higher-dimensional generator frames.
pub fn kron(a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
    let (na, nb) = (a.dim(), b.dim());
    AlgebraElement::from_fn(na * nb, |i, j| {
        a.entry(i / nb, j / nb) * b.entry(i % nb, j % nb)
    })
}
