//! Numerical laboratory for real vector fields (derivations) on C*-algebras
//! and the one-parameter *-endomorphism semigroups they generate.
//!
//! Two desk-scale backends carry all constructions:
//!
//! - a finite-dimensional matrix *-algebra ([`algebra`]) where inner fields
//!   ad_g of skew-Hermitian generators exponentiate to conjugation
//!   semigroups, ordered exponentials realize the gauge-shifted semigroup of
//!   ad_h + ad_g ([`ordered_exp`]), and cone-parametrized frames compose into
//!   a bundle with unitary fibers and curvature holonomy ([`cone`]);
//! - a commutative grid model of C_0(R) ([`flow`]) where first-order fields
//!   V(x) d/dx pull back along ODE flows, and the cube-root field exhibits
//!   the non-convexity of the semigroup-generating set.
//!
//! The [`semigroup`] engine runs the same property suites (product rule,
//! semigroup laws, reality, commutation with the generator) against either
//! backend; [`representation`] builds fields from a transition operator and
//! a swap, parametrized bilinearly by 2x2 matrices. Every check reduces to a
//! [`report::CheckReport`] with a named residual, witness, and tolerance.

#![forbid(unsafe_code)]

pub mod algebra;
pub mod cone;
pub mod flow;
pub mod ordered_exp;
pub mod report;
pub mod representation;
pub mod sample;
pub mod semigroup;
pub mod util;

pub use algebra::{AlgebraElement, AlgebraError, GaugeAlgebraElement, GaugeGroupElement};
pub use cone::{ConeVector, GeneratorFrame};
pub use flow::{FlowMap, Grid, GridFunction};
pub use report::CheckReport;
pub use representation::{DifferenceOperator, ParameterMatrix, TransitionOperator};
pub use semigroup::{Endomorphism, SemigroupFamily, StarAlgebra, VectorField};
