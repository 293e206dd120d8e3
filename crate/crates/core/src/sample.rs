//! Seeded random sampling of algebra elements; every suite draws from here so
//! that a seed fully determines its sample set.

use num_complex::Complex64;
use rand::Rng;

use crate::algebra::{AlgebraElement, GaugeAlgebraElement, GaugeGroupElement};

/// Dense matrix with entries uniform in the square [-scale, scale]^2.
pub fn random_element<R: Rng>(rng: &mut R, dim: usize, scale: f64) -> AlgebraElement {
    AlgebraElement::from_fn(dim, |_, _| {
        Complex64::new(
            rng.gen_range(-scale..=scale),
            rng.gen_range(-scale..=scale),
        )
    })
}

/// Random element rescaled to unit C*-norm (zero stays zero).
pub fn random_unit_element<R: Rng>(rng: &mut R, dim: usize) -> AlgebraElement {
    let a = random_element(rng, dim, 1.0);
    let norm = a.cstar_norm();
    if norm > 0.0 {
        a.scaled_re(1.0 / norm)
    } else {
        a
    }
}

pub fn random_hermitian<R: Rng>(rng: &mut R, dim: usize, scale: f64) -> AlgebraElement {
    let a = random_element(rng, dim, scale);
    (&a + &a.star()).scaled_re(0.5)
}

pub fn random_gauge_algebra<R: Rng>(rng: &mut R, dim: usize) -> GaugeAlgebraElement {
    GaugeAlgebraElement::new(&random_element(rng, dim, 1.0))
}

/// Skew-Hermitian generator rescaled to the requested C*-norm.
pub fn random_gauge_algebra_with_norm<R: Rng>(
    rng: &mut R,
    dim: usize,
    norm: f64,
) -> GaugeAlgebraElement {
    let g = random_gauge_algebra(rng, dim);
    let current = g.as_element().cstar_norm();
    if current > 0.0 {
        g.scaled_re(norm / current)
    } else {
        g
    }
}

/// Unitary drawn as exp of a random skew-Hermitian element.
pub fn random_gauge_group<R: Rng>(rng: &mut R, dim: usize) -> GaugeGroupElement {
    let g = random_gauge_algebra(rng, dim);
    GaugeGroupElement::new(g.as_element().exp()).expect("exp of a skew-Hermitian is unitary")
}

pub fn random_spinor<R: Rng>(rng: &mut R) -> [Complex64; 2] {
    [
        Complex64::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0)),
        Complex64::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0)),
    ]
}

/// Random point of the forward light cone: spatial part uniform, x0 = |spatial|.
pub fn random_cone_vector<R: Rng>(rng: &mut R, scale: f64) -> [f64; 4] {
    let spatial: [f64; 3] = [
        rng.gen_range(-scale..=scale),
        rng.gen_range(-scale..=scale),
        rng.gen_range(-scale..=scale),
    ];
    let x0 = (spatial[0] * spatial[0] + spatial[1] * spatial[1] + spatial[2] * spatial[2]).sqrt();
    [x0, spatial[0], spatial[1], spatial[2]]
}
