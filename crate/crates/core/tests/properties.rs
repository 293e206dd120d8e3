//! Property suites over randomized inputs: the algebraic identities every
//! backend must satisfy, independent of the handpicked unit-test fixtures.

use num_complex::Complex64;
use proptest::prelude::*;

use cstar_lab::algebra::{commutator, hermitian_eigenvalues, AlgebraElement, GaugeAlgebraElement};
use cstar_lab::cone::{pauli_map, spinor_cone_point};
use cstar_lab::flow::{FlowMap, Grid, GridFunction};
use cstar_lab::semigroup::{ad, generate_inner_semigroup};

fn complex_entry() -> impl Strategy<Value = Complex64> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(re, im)| Complex64::new(re, im))
}

fn matrix(dim: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = AlgebraElement> {
    dim.prop_flat_map(|n| {
        proptest::collection::vec(complex_entry(), n * n)
            .prop_map(move |entries| AlgebraElement::from_fn(n, |i, j| entries[i * n + j]))
    })
}

fn skew(dim: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = GaugeAlgebraElement> {
    matrix(dim).prop_map(|a| GaugeAlgebraElement::new(&a))
}

fn matrix_of(n: usize) -> impl Strategy<Value = AlgebraElement> {
    proptest::collection::vec(complex_entry(), n * n)
        .prop_map(move |e| AlgebraElement::from_fn(n, |i, j| e[i * n + j]))
}

fn matrix_pair(
    dim: std::ops::RangeInclusive<usize>,
) -> impl Strategy<Value = (AlgebraElement, AlgebraElement)> {
    dim.prop_flat_map(|n| (matrix_of(n), matrix_of(n)))
}

fn matrix_triple(
    dim: std::ops::RangeInclusive<usize>,
) -> impl Strategy<Value = (AlgebraElement, AlgebraElement, AlgebraElement)> {
    dim.prop_flat_map(|n| (matrix_of(n), matrix_of(n), matrix_of(n)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cstar_identity(a in matrix(1..=8)) {
        let norm = a.cstar_norm();
        let gram_norm = (&a.star() * &a).cstar_norm();
        prop_assert!((norm * norm - gram_norm).abs() <= 1e-8 * (norm * norm).max(1e-30));
    }

    #[test]
    fn involution_is_an_antihomomorphism((a, b) in matrix_pair(2..=6)) {
        let lhs = (&a * &b).star();
        let rhs = &b.star() * &a.star();
        prop_assert!((&lhs - &rhs).frobenius_norm() <= 1e-12);
        // Antilinearity: (i a)* = -i a*.
        let i = Complex64::new(0.0, 1.0);
        let lin = (&a.scaled(i).star() - &a.star().scaled(-i)).frobenius_norm();
        prop_assert!(lin == 0.0);
    }

    #[test]
    fn inner_fields_are_derivations((g, u, v) in matrix_triple(2..=6)) {
        let field = ad(&g);
        let lhs = field.apply(&(&u * &v));
        let rhs = &(&u * &field.apply(&v)) + &(&field.apply(&u) * &v);
        prop_assert!((&lhs - &rhs).frobenius_norm() <= 1e-12 * (1.0 + u.frobenius_norm() * v.frobenius_norm() * g.frobenius_norm()));
    }

    #[test]
    fn commutator_satisfies_jacobi((a, b, c) in matrix_triple(3..=5)) {
        let abc = commutator(&a, &commutator(&b, &c).unwrap()).unwrap();
        let bca = commutator(&b, &commutator(&c, &a).unwrap()).unwrap();
        let cab = commutator(&c, &commutator(&a, &b).unwrap()).unwrap();
        let cycle = &(&abc + &bca) + &cab;
        prop_assert!(cycle.frobenius_norm() <= 1e-12);
    }

    #[test]
    fn exponentials_of_skew_elements_are_unitary(g in skew(2..=6), scale in 0.1..10.0f64) {
        let norm = g.as_element().cstar_norm();
        prop_assume!(norm > 1e-6);
        let rescaled = g.scaled_re(scale / norm);
        let u = rescaled.as_element().exp();
        prop_assert!(u.unitary_defect() <= 1e-10);
    }

    #[test]
    fn log_inverts_exp_near_the_identity(g in skew(2..=5), scale in 0.01..0.5f64) {
        let norm = g.as_element().cstar_norm();
        prop_assume!(norm > 1e-6);
        let rescaled = g.scaled_re(scale / norm);
        let round_trip = rescaled.as_element().exp().log_near_identity().unwrap();
        prop_assert!((&round_trip - rescaled.as_element()).cstar_norm() <= 1e-10);
    }

    #[test]
    fn inner_semigroups_preserve_star_and_norm(g in skew(2..=5), t in 0.0..6.0f64) {
        let family = generate_inner_semigroup(&g);
        let q = g.as_element().scaled(Complex64::new(0.3, 0.4));
        let e = family.at(t);
        let eq = e.apply(&q);
        prop_assert!((&e.apply(&q.star()) - &eq.star()).frobenius_norm() <= 1e-10);
        prop_assert!(eq.cstar_norm() <= q.cstar_norm() + 1e-9);
    }

    #[test]
    fn jacobi_eigenvalues_match_the_trace(h in matrix(2..=8)) {
        let herm = (&h + &h.star()).scaled_re(0.5);
        let eigs = hermitian_eigenvalues(&herm);
        let trace: f64 = herm.trace().re;
        let sum: f64 = eigs.iter().sum();
        prop_assert!((trace - sum).abs() <= 1e-10 * (1.0 + trace.abs()));
    }

    #[test]
    fn grid_functions_form_a_cstar_algebra(values in proptest::collection::vec(complex_entry(), 8..32)) {
        let grid = Grid::new(0.0, 0.5, values.len().max(4));
        let padded: Vec<Complex64> = values
            .iter()
            .copied()
            .chain(std::iter::repeat(Complex64::new(0.0, 0.0)))
            .take(grid.len())
            .collect();
        let f = GridFunction::sample(&grid, |x| padded[((x - grid.x_min()) / grid.spacing()).round() as usize]);
        let norm = f.sup_norm();
        let gram = f.conj().pointwise_mul(&f).sup_norm();
        prop_assert!((norm * norm - gram).abs() <= 1e-13 * (norm * norm).max(1e-30));
        // Involution is an (anti)homomorphism; the algebra is commutative.
        let g = f.scaled_re(0.7);
        let lhs = f.pointwise_mul(&g).conj();
        let rhs = g.conj().pointwise_mul(&f.conj());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn semiflow_law_for_a_lipschitz_field(xi in -2.0..2.0f64, s in 0.0..1.5f64, t in 0.0..1.5f64) {
        let flow = FlowMap::new(|x: f64| 0.8 * (0.4 * x).cos() + 0.1, 1e-3);
        let through = flow.eval(flow.eval(xi, s).unwrap(), t).unwrap();
        let direct = flow.eval(xi, s + t).unwrap();
        prop_assert!((through - direct).abs() <= 1e-9);
    }

    #[test]
    fn pauli_determinant_is_the_minkowski_form(x0 in -2.0..2.0f64, x1 in -2.0..2.0f64, x2 in -2.0..2.0f64, x3 in -2.0..2.0f64) {
        let det = pauli_map(&[x0, x1, x2, x3]).determinant();
        let q = x0 * x0 - x1 * x1 - x2 * x2 - x3 * x3;
        prop_assert!((det.re - q).abs() <= 1e-12 && det.im.abs() <= 1e-12);
    }

    #[test]
    fn spinor_points_land_on_the_cone(re0 in -1.0..1.0f64, im0 in -1.0..1.0f64, re1 in -1.0..1.0f64, im1 in -1.0..1.0f64) {
        let phi = [Complex64::new(re0, im0), Complex64::new(re1, im1)];
        let x = spinor_cone_point(phi);
        prop_assert!(x.is_on_cone(1e-12), "defect {}", x.cone_defect());
    }
}
