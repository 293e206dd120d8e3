//! One-parameter *-endomorphism semigroups and the property suites that
//! certify them.
//!
//! The engine is generic over the element type: the matrix algebra and the
//! grid-function algebra both implement [`StarAlgebra`], and every check here
//! runs unchanged against either backend. A semigroup is represented by an
//! evaluator t -> endomorphism rather than a stored trajectory, so the
//! composition laws can be tested at arbitrary parameter pairs.

use std::sync::Arc;

use crate::algebra::{commutator, AlgebraElement, GaugeAlgebraElement, GaugeGroupElement};
use crate::report::{CheckReport, ResidualScan};

/// Minimal *-algebra interface the property suites need.
pub trait StarAlgebra: Clone {
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    /// The involution.
    fn star(&self) -> Self;
    /// The C*-norm of the backend.
    fn norm(&self) -> f64;
}

impl StarAlgebra for AlgebraElement {
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn star(&self) -> Self {
        AlgebraElement::star(self)
    }
    fn norm(&self) -> f64 {
        self.cstar_norm()
    }
}

type ApplyFn<A> = Arc<dyn Fn(&A) -> A + Send + Sync>;

/// A derivation on (a dense *-subalgebra of) the algebra.
#[derive(Clone)]
pub struct VectorField<A> {
    apply: ApplyFn<A>,
    domain_label: String,
    real: bool,
}

impl<A> VectorField<A> {
    pub fn new(
        domain_label: impl Into<String>,
        real: bool,
        apply: impl Fn(&A) -> A + Send + Sync + 'static,
    ) -> Self {
        Self {
            apply: Arc::new(apply),
            domain_label: domain_label.into(),
            real,
        }
    }

    pub fn apply(&self, q: &A) -> A {
        (self.apply)(q)
    }

    /// Label of the dense *-subalgebra the field is defined on.
    pub fn domain_label(&self) -> &str {
        &self.domain_label
    }

    /// Whether the field is flagged real (commutes with the involution).
    pub fn is_real(&self) -> bool {
        self.real
    }
}

impl VectorField<AlgebraElement> {
    /// The inner field ad_g = [g, .]; real exactly when g is skew-Hermitian.
    pub fn inner(g: &AlgebraElement) -> Self {
        let real = g.is_skew_hermitian(crate::algebra::ALGEBRAIC_TOL);
        let g = g.clone();
        Self::new("full matrix algebra", real, move |q: &AlgebraElement| {
            commutator(&g, q).expect("inner field dimension fixed at construction")
        })
    }
}

/// The inner derivation ad_g as a vector field on the whole algebra.
pub fn ad(g: &AlgebraElement) -> VectorField<AlgebraElement> {
    VectorField::inner(g)
}

/// A concrete *-endomorphism of the backend algebra.
#[derive(Clone)]
pub struct Endomorphism<A> {
    apply: ApplyFn<A>,
    label: String,
}

impl<A: 'static> Endomorphism<A> {
    pub fn new(label: impl Into<String>, apply: impl Fn(&A) -> A + Send + Sync + 'static) -> Self {
        Self {
            apply: Arc::new(apply),
            label: label.into(),
        }
    }

    pub fn identity() -> Self
    where
        A: Clone,
    {
        Self::new("identity", |q: &A| q.clone())
    }

    pub fn apply(&self, q: &A) -> A {
        (self.apply)(q)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Composition self after other.
    pub fn compose(&self, other: &Self) -> Self {
        let first = other.apply.clone();
        let second = self.apply.clone();
        Self {
            apply: Arc::new(move |q: &A| second(&first(q))),
            label: format!("{} . {}", self.label, other.label),
        }
    }
}

impl Endomorphism<AlgebraElement> {
    /// Ad_u: the conjugation automorphism q -> u q u*.
    pub fn conjugation(u: &GaugeGroupElement) -> Self {
        let u = u.clone();
        Self::new("Ad_u", move |q: &AlgebraElement| u.conjugate(q))
    }
}

/// Free-function form of Ad_u; same thing as [`Endomorphism::conjugation`].
pub fn conjugation(u: &GaugeGroupElement) -> Endomorphism<AlgebraElement> {
    Endomorphism::conjugation(u)
}

type EvalFn<A> = Arc<dyn Fn(f64) -> Endomorphism<A> + Send + Sync>;

/// A one-parameter family t -> E_t, expected to satisfy E_0 = Id and
/// E_s . E_t = E_{s+t}.
#[derive(Clone)]
pub struct SemigroupFamily<A> {
    field: VectorField<A>,
    eval: EvalFn<A>,
}

impl<A> SemigroupFamily<A> {
    pub fn new(
        field: VectorField<A>,
        eval: impl Fn(f64) -> Endomorphism<A> + Send + Sync + 'static,
    ) -> Self {
        Self {
            field,
            eval: Arc::new(eval),
        }
    }

    pub fn field(&self) -> &VectorField<A> {
        &self.field
    }

    /// The endomorphism at parameter t. Semigroups are defined for t >= 0;
    /// inner families in the matrix model extend to groups, so negative t is
    /// allowed there (used by difference-quotient oracles).
    pub fn at(&self, t: f64) -> Endomorphism<A> {
        (self.eval)(t)
    }
}

/// The inner semigroup t -> Ad_{exp(tg)} generated by a skew-Hermitian g.
pub fn generate_inner_semigroup(g: &GaugeAlgebraElement) -> SemigroupFamily<AlgebraElement> {
    let field = VectorField::inner(g.as_element());
    let g = g.clone();
    SemigroupFamily::new(field, move |t: f64| {
        let u = GaugeGroupElement::new(g.exp_at(t))
            .expect("exp of a skew-Hermitian element is unitary");
        let label = format!("Ad_exp({t}g)");
        let e = Endomorphism::conjugation(&u);
        Endomorphism::new(label, move |q| e.apply(q))
    })
}

/// Max residual of the product rule V(uv) = u V(v) + V(u) v over sample pairs.
pub fn check_product_rule<A: StarAlgebra>(
    field: &VectorField<A>,
    samples: &[(A, A)],
    tolerance: f64,
) -> CheckReport {
    let mut scan = ResidualScan::new();
    for (idx, (u, v)) in samples.iter().enumerate() {
        let lhs = field.apply(&u.mul(v));
        let rhs = u.mul(&field.apply(v)).add(&field.apply(u).mul(v));
        scan.observe(lhs.sub(&rhs).norm(), || format!("pair #{idx}"));
    }
    scan.into_report(
        format!("product-rule[{}]", field.domain_label()),
        tolerance,
    )
}

/// Max residual of V(q*) = (V(q))* over samples; meaningful for fields
/// flagged real.
pub fn check_reality<A: StarAlgebra>(
    field: &VectorField<A>,
    samples: &[A],
    tolerance: f64,
) -> CheckReport {
    let mut scan = ResidualScan::new();
    for (idx, q) in samples.iter().enumerate() {
        let lhs = field.apply(&q.star());
        let rhs = field.apply(q).star();
        scan.observe(lhs.sub(&rhs).norm(), || format!("sample #{idx}"));
    }
    scan.into_report("field-reality", tolerance)
}

/// Per-law tolerances for [`check_semigroup_laws`]. Backends with exact
/// composition (matrix conjugation) use a uniform budget; grid backends give
/// the composition law a separate budget tied to the interpolation order and
/// the smoothness of the flow.
#[derive(Clone, Copy, Debug)]
pub struct SemigroupTolerances {
    pub composition: f64,
    pub multiplicativity: f64,
    pub star_preservation: f64,
    pub norm_nonincrease: f64,
}

impl SemigroupTolerances {
    pub fn uniform(tol: f64) -> Self {
        Self {
            composition: tol,
            multiplicativity: tol,
            star_preservation: tol,
            norm_nonincrease: tol,
        }
    }

    pub fn with_composition(mut self, tol: f64) -> Self {
        self.composition = tol;
        self
    }
}

/// The four semigroup laws, each as its own report: composition
/// E_s(E_t(q)) = E_{s+t}(q), multiplicativity, *-preservation, and norm
/// non-increase. Times must be >= 0.
pub fn check_semigroup_laws<A: StarAlgebra + 'static>(
    family: &SemigroupFamily<A>,
    times: &[f64],
    samples: &[A],
    tolerance: SemigroupTolerances,
) -> Vec<CheckReport> {
    let mut composition = ResidualScan::new();
    let mut multiplicativity = ResidualScan::new();
    let mut star_preservation = ResidualScan::new();
    let mut norm_excess = ResidualScan::new();

    let endos: Vec<(f64, Endomorphism<A>)> = times.iter().map(|&t| (t, family.at(t))).collect();

    for (i, (s, e_s)) in endos.iter().enumerate() {
        for (t, e_t) in &endos[i..] {
            let e_sum = family.at(s + t);
            for (idx, q) in samples.iter().enumerate() {
                let through = e_s.apply(&e_t.apply(q));
                let direct = e_sum.apply(q);
                composition.observe(through.sub(&direct).norm(), || {
                    format!("s={s} t={t} q#{idx}")
                });
            }
        }
    }

    for (t, e_t) in &endos {
        for (idx, q) in samples.iter().enumerate() {
            let eq = e_t.apply(q);
            star_preservation.observe(e_t.apply(&q.star()).sub(&eq.star()).norm(), || {
                format!("t={t} q#{idx}")
            });
            norm_excess.observe((eq.norm() - q.norm()).max(0.0), || format!("t={t} q#{idx}"));
        }
        for (idx, (u, v)) in samples.iter().zip(samples.iter().rev()).enumerate() {
            let lhs = e_t.apply(&u.mul(v));
            let rhs = e_t.apply(u).mul(&e_t.apply(v));
            multiplicativity.observe(lhs.sub(&rhs).norm(), || format!("t={t} pair#{idx}"));
        }
    }

    vec![
        composition.into_report("semigroup-composition", tolerance.composition),
        multiplicativity.into_report("endomorphism-multiplicativity", tolerance.multiplicativity),
        star_preservation.into_report(
            "endomorphism-star-preservation",
            tolerance.star_preservation,
        ),
        norm_excess.into_report("endomorphism-norm-nonincrease", tolerance.norm_nonincrease),
    ]
}

/// Max residual of V(E_t(q)) - E_t(V(q)) over times and samples; zero in
/// exact arithmetic when the family is generated by V.
pub fn check_field_commutes_with_semigroup<A: StarAlgebra + 'static>(
    field: &VectorField<A>,
    family: &SemigroupFamily<A>,
    times: &[f64],
    samples: &[A],
    tolerance: f64,
) -> CheckReport {
    let mut scan = ResidualScan::new();
    for &t in times {
        let e_t = family.at(t);
        for (idx, q) in samples.iter().enumerate() {
            let lhs = field.apply(&e_t.apply(q));
            let rhs = e_t.apply(&field.apply(q));
            scan.observe(lhs.sub(&rhs).norm(), || format!("t={t} q#{idx}"));
        }
    }
    scan.into_report("field-commutes-with-semigroup", tolerance)
}
