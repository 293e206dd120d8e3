//! Desk-scale model of C_0(R): functions on a truncated uniform grid with
//! pointwise operations, ODE flow maps, pullback endomorphisms, and the
//! cube-root non-convexity counterexample.
//!
//! Conventions: values outside [x_min, x_max] are zero (the grid stand-in for
//! vanishing at infinity), interpolation between nodes is local 4-point cubic,
//! and flows are integrated with classical fixed-step fourth-order Runge-Kutta.

use std::sync::Arc;

use num_complex::Complex64;
use thiserror::Error;

use crate::semigroup::{Endomorphism, SemigroupFamily, StarAlgebra, VectorField};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FlowError {
    #[error("trajectory from {start} escaped the box |x| <= {bound} at t = {time} (x = {position})")]
    Escaped {
        start: f64,
        time: f64,
        position: f64,
        bound: f64,
    },
    #[error("trajectory from {start} became non-finite at t = {time}")]
    NonFinite { start: f64, time: f64 },
    #[error("flow time must be finite, got {0}")]
    BadTime(f64),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GridCsvError {
    #[error("csv line {line}: expected `x,re,im`, got {content:?}")]
    Malformed { line: usize, content: String },
    #[error("csv nodes are not uniformly spaced at line {line}")]
    NonUniform { line: usize },
    #[error("csv needs at least 4 nodes for cubic interpolation, got {0}")]
    TooShort(usize),
}

/// Uniform grid descriptor: nodes x_min + i h for i in 0..len.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid {
    x_min: f64,
    h: f64,
    len: usize,
}

impl Grid {
    pub fn new(x_min: f64, h: f64, len: usize) -> Self {
        assert!(h > 0.0 && len >= 4, "grid needs h > 0 and at least 4 nodes");
        Self { x_min, h, len }
    }

    /// The default desk-scale grid: x in [-8, 8] with spacing 1e-3.
    pub fn default_desk() -> Self {
        Self::new(-8.0, 1e-3, 16001)
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_min + self.h * (self.len - 1) as f64
    }

    pub fn spacing(&self) -> f64 {
        self.h
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn node(&self, i: usize) -> f64 {
        self.x_min + self.h * i as f64
    }
}

/// Complex-valued function on a grid; an element of the commutative
/// *-algebra with pointwise product, conjugation as involution, and the
/// sup norm (which satisfies the C*-identity on the nose).
#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction {
    grid: Grid,
    values: Vec<Complex64>,
}

impl GridFunction {
    pub fn zeros(grid: &Grid) -> Self {
        Self {
            grid: grid.clone(),
            values: vec![Complex64::new(0.0, 0.0); grid.len()],
        }
    }

    pub fn sample(grid: &Grid, f: impl Fn(f64) -> Complex64) -> Self {
        Self {
            grid: grid.clone(),
            values: (0..grid.len()).map(|i| f(grid.node(i))).collect(),
        }
    }

    pub fn sample_real(grid: &Grid, f: impl Fn(f64) -> f64) -> Self {
        Self::sample(grid, |x| Complex64::new(f(x), 0.0))
    }

    /// Compactly supported C^1 bump: cos^2(pi (x - center) / (2 radius))
    /// inside |x - center| < radius, exactly zero outside.
    pub fn bump(grid: &Grid, center: f64, radius: f64) -> Self {
        Self::sample_real(grid, |x| bump_profile(x, center, radius))
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn conj(&self) -> Self {
        Self {
            grid: self.grid.clone(),
            values: self.values.iter().map(|z| z.conj()).collect(),
        }
    }

    fn zip(&self, rhs: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        assert_eq!(self.grid, rhs.grid, "grid functions live on different grids");
        Self {
            grid: self.grid.clone(),
            values: self
                .values
                .iter()
                .zip(&rhs.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    pub fn pointwise_mul(&self, rhs: &Self) -> Self {
        self.zip(rhs, |a, b| a * b)
    }

    pub fn pointwise_add(&self, rhs: &Self) -> Self {
        self.zip(rhs, |a, b| a + b)
    }

    pub fn pointwise_sub(&self, rhs: &Self) -> Self {
        self.zip(rhs, |a, b| a - b)
    }

    pub fn scaled_re(&self, r: f64) -> Self {
        Self {
            grid: self.grid.clone(),
            values: self.values.iter().map(|&z| z * r).collect(),
        }
    }

    /// Evaluation anywhere on the line: local 4-point cubic interpolation
    /// between nodes, zero outside [x_min, x_max].
    pub fn eval(&self, x: f64) -> Complex64 {
        let g = &self.grid;
        if !x.is_finite() || x < g.x_min() || x > g.x_max() {
            return Complex64::new(0.0, 0.0);
        }
        let u = (x - g.x_min()) / g.spacing();
        let cell = (u.floor() as isize).clamp(0, g.len() as isize - 2) as usize;
        let base = cell.saturating_sub(1).min(g.len() - 4);
        let s = u - base as f64;
        // Cubic Lagrange weights on the 4 nodes base..base+3.
        let w0 = -(s - 1.0) * (s - 2.0) * (s - 3.0) / 6.0;
        let w1 = s * (s - 2.0) * (s - 3.0) / 2.0;
        let w2 = -s * (s - 1.0) * (s - 3.0) / 2.0;
        let w3 = s * (s - 1.0) * (s - 2.0) / 6.0;
        self.values[base] * w0
            + self.values[base + 1] * w1
            + self.values[base + 2] * w2
            + self.values[base + 3] * w3
    }

    /// Desk-scale smoothness tag: max second difference quotient
    /// |f_{i+1} - 2 f_i + f_{i-1}| / h, an estimate of h * sup|f''|. Small
    /// for C^1 functions sampled on the grid, order-one at kinks.
    pub fn second_difference_defect(&self) -> f64 {
        let h = self.grid.spacing();
        let mut max = 0.0f64;
        for i in 1..self.values.len() - 1 {
            let dd = (self.values[i + 1] - self.values[i] * 2.0 + self.values[i - 1]).norm() / h;
            max = max.max(dd);
        }
        max
    }

    pub fn is_c1(&self, tol: f64) -> bool {
        self.second_difference_defect() <= tol
    }

    /// CSV form: one `x,re,im` row per node.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,re,im\n");
        for (i, z) in self.values.iter().enumerate() {
            out.push_str(&format!("{},{},{}\n", self.grid.node(i), z.re, z.im));
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self, GridCsvError> {
        let mut xs = Vec::new();
        let mut values = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') || trimmed.starts_with('x') {
                continue;
            }
            let fields: Vec<&str> = trimmed.split(',').collect();
            let parsed: Option<(f64, f64, f64)> = match fields.as_slice() {
                [x, re, im] => match (x.parse(), re.parse(), im.parse()) {
                    (Ok(x), Ok(re), Ok(im)) => Some((x, re, im)),
                    _ => None,
                },
                _ => None,
            };
            let Some((x, re, im)) = parsed else {
                return Err(GridCsvError::Malformed {
                    line: idx + 1,
                    content: line.to_string(),
                });
            };
            xs.push(x);
            values.push(Complex64::new(re, im));
        }
        if xs.len() < 4 {
            return Err(GridCsvError::TooShort(xs.len()));
        }
        let h = xs[1] - xs[0];
        for (i, pair) in xs.windows(2).enumerate() {
            if ((pair[1] - pair[0]) - h).abs() > 1e-9 * h.abs().max(1.0) {
                return Err(GridCsvError::NonUniform { line: i + 2 });
            }
        }
        Ok(Self {
            grid: Grid::new(xs[0], h, xs.len()),
            values,
        })
    }
}

impl StarAlgebra for GridFunction {
    fn add(&self, rhs: &Self) -> Self {
        self.pointwise_add(rhs)
    }
    fn sub(&self, rhs: &Self) -> Self {
        self.pointwise_sub(rhs)
    }
    fn mul(&self, rhs: &Self) -> Self {
        self.pointwise_mul(rhs)
    }
    fn star(&self) -> Self {
        self.conj()
    }
    fn norm(&self) -> f64 {
        self.sup_norm()
    }
}

fn bump_profile(x: f64, center: f64, radius: f64) -> f64 {
    let u = (x - center) / radius;
    if u.abs() >= 1.0 {
        0.0
    } else {
        let c = (std::f64::consts::FRAC_PI_2 * u).cos();
        c * c
    }
}

/// Flow map of the scalar ODE x' = V(x), integrated by classical RK4 with a
/// fixed step. Trajectories must stay inside |x| <= bound.
#[derive(Clone)]
pub struct FlowMap {
    coeff: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    step: f64,
    bound: f64,
}

/// Default escape box for flow integration.
pub const DEFAULT_FLOW_BOUND: f64 = 1e6;

impl FlowMap {
    pub fn new(coeff: impl Fn(f64) -> f64 + Send + Sync + 'static, step: f64) -> Self {
        assert!(step > 0.0, "integrator step must be positive");
        Self {
            coeff: Arc::new(coeff),
            step,
            bound: DEFAULT_FLOW_BOUND,
        }
    }

    pub fn with_bound(mut self, bound: f64) -> Self {
        self.bound = bound;
        self
    }

    /// F(xi, t). Negative t integrates backward, which is meaningful for the
    /// group-generating fields used here.
    pub fn eval(&self, xi: f64, t: f64) -> Result<f64, FlowError> {
        if !t.is_finite() {
            return Err(FlowError::BadTime(t));
        }
        if t == 0.0 {
            return Ok(xi);
        }
        let n = (t.abs() / self.step).ceil().max(1.0) as usize;
        let dt = t / n as f64;
        let f = &self.coeff;
        let mut x = xi;
        for k in 0..n {
            let k1 = f(x);
            let k2 = f(x + 0.5 * dt * k1);
            let k3 = f(x + 0.5 * dt * k2);
            let k4 = f(x + dt * k3);
            x += dt * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0;
            if !x.is_finite() {
                return Err(FlowError::NonFinite {
                    start: xi,
                    time: dt * (k + 1) as f64,
                });
            }
            if x.abs() > self.bound {
                return Err(FlowError::Escaped {
                    start: xi,
                    time: dt * (k + 1) as f64,
                    position: x,
                    bound: self.bound,
                });
            }
        }
        Ok(x)
    }
}

/// One-shot flow evaluation with the default escape box.
pub fn flow(
    coeff: impl Fn(f64) -> f64 + Send + Sync + 'static,
    xi: f64,
    t: f64,
    step: f64,
) -> Result<f64, FlowError> {
    FlowMap::new(coeff, step).eval(xi, t)
}

/// The first-order field V(x) d/dx on grid functions: central differences
/// scaled by the coefficient, with the zero-extension convention past the
/// ends. Second-order accurate, and a derivation up to O(h^2).
pub fn first_order_field(
    grid: &Grid,
    coeff: impl Fn(f64) -> f64 + Send + Sync + 'static,
) -> VectorField<GridFunction> {
    let grid = grid.clone();
    VectorField::new("C_0^1 grid functions", true, move |f: &GridFunction| {
        assert_eq!(f.grid(), &grid, "field and function grids differ");
        let n = grid.len();
        let h = grid.spacing();
        let vals = f.values();
        let get = |i: isize| -> Complex64 {
            if i < 0 || i >= n as isize {
                Complex64::new(0.0, 0.0)
            } else {
                vals[i as usize]
            }
        };
        let mut out = Vec::with_capacity(n);
        for i in 0..n as isize {
            let derivative = (get(i + 1) - get(i - 1)) / (2.0 * h);
            out.push(derivative * coeff(grid.node(i as usize)));
        }
        GridFunction {
            grid: grid.clone(),
            values: out,
        }
    })
}

/// The pullback endomorphism f -> f(F(., t)): flow every node forward for
/// time t once, then each application is a single interpolation pass.
/// Trajectories that leave the grid read zero; trajectories that leave the
/// flow box are an error.
pub fn pullback_endomorphism(
    flow: &FlowMap,
    grid: &Grid,
    t: f64,
) -> Result<Endomorphism<GridFunction>, FlowError> {
    if t == 0.0 {
        // E_0 = Id exactly, not up to interpolation rounding.
        return Ok(Endomorphism::identity());
    }
    let mut targets = Vec::with_capacity(grid.len());
    for i in 0..grid.len() {
        targets.push(flow.eval(grid.node(i), t)?);
    }
    let grid = grid.clone();
    Ok(Endomorphism::new(
        format!("pullback[t={t}]"),
        move |f: &GridFunction| {
            assert_eq!(f.grid(), &grid, "pullback grid mismatch");
            GridFunction {
                grid: grid.clone(),
                values: targets.iter().map(|&y| f.eval(y)).collect(),
            }
        },
    ))
}

/// The pullback semigroup of V(x) d/dx as a family. Evaluation panics if a
/// node trajectory escapes the flow box; pick the box (and the times probed)
/// so the suite fields stay inside.
pub fn pullback_family(
    grid: &Grid,
    coeff: impl Fn(f64) -> f64 + Send + Sync + Clone + 'static,
    step: f64,
) -> SemigroupFamily<GridFunction> {
    let field = first_order_field(grid, coeff.clone());
    let grid = grid.clone();
    let flow_map = FlowMap::new(coeff, step);
    SemigroupFamily::new(field, move |t: f64| {
        pullback_endomorphism(&flow_map, &grid, t)
            .expect("suite trajectories must stay inside the flow box")
    })
}

/// The non-convexity trio: V1 = cbrt(x) + 1, V2 = cbrt(x) - 1, and their
/// midpoint cbrt(x). `f64::cbrt` is the sign-preserving real cube root.
pub fn field_v1(x: f64) -> f64 {
    x.cbrt() + 1.0
}

pub fn field_v2(x: f64) -> f64 {
    x.cbrt() - 1.0
}

pub fn field_midpoint(x: f64) -> f64 {
    x.cbrt()
}

/// The C^1 substitution y(x) = 3 (ln(cbrt(x) + 1) - cbrt(x) + x^{2/3} / 2),
/// defined for x > -1; it rectifies V1 to d/dy.
pub fn substitution_y(x: f64) -> f64 {
    let u = x.cbrt();
    3.0 * ((u).ln_1p() - u + 0.5 * u * u)
}

/// Branch endpoints of x' = cbrt(x) started from +/- epsilon.
#[derive(Clone, Debug)]
pub struct BranchPair {
    pub epsilon: f64,
    pub plus: f64,
    pub minus: f64,
}

impl BranchPair {
    pub fn gap(&self) -> f64 {
        self.plus - self.minus
    }
}

/// Report of the cube-root branch study.
#[derive(Clone, Debug)]
pub struct NonUniquenessReport {
    pub t: f64,
    /// The closed-form limit (2t/3)^{3/2} of the "+" branch.
    pub predicted: f64,
    /// Seeds swept from epsilon_max down by decades to 1e-8.
    pub branches: Vec<BranchPair>,
    /// Endpoint of the exactly-zero seed: the degenerate third solution.
    /// Integrator-dependent; the discrete map fixes 0 because cbrt(0) = 0.
    pub zero_seed_endpoint: f64,
    pub limit_plus: f64,
    pub limit_minus: f64,
    /// Max deviation of the two limits from +/- predicted.
    pub max_limit_error: f64,
    /// Gaps shrink monotonically toward 2 * predicted as epsilon decreases.
    pub gap_monotone: bool,
}

/// Integrate the midpoint field from +/- epsilon seeds, sweeping epsilon down
/// by decades to 1e-8, and compare the limits against +/-(2t/3)^{3/2}.
pub fn counterexample_nonuniqueness(t: f64, epsilon_max: f64, step: f64) -> NonUniquenessReport {
    assert!(t > 0.0 && epsilon_max > 0.0);
    let predicted = (2.0 * t / 3.0).powf(1.5);
    let flow_map = FlowMap::new(field_midpoint, step);

    let mut branches = Vec::new();
    let mut eps = epsilon_max;
    while eps >= 1e-8 * (1.0 - 1e-12) {
        let plus = flow_map.eval(eps, t).expect("midpoint field is sublinear");
        let minus = flow_map.eval(-eps, t).expect("midpoint field is sublinear");
        branches.push(BranchPair {
            epsilon: eps,
            plus,
            minus,
        });
        eps /= 10.0;
    }
    let last = branches.last().expect("at least one seed");
    let limit_plus = last.plus;
    let limit_minus = last.minus;
    let max_limit_error = (limit_plus - predicted)
        .abs()
        .max((limit_minus + predicted).abs());
    let gap_monotone = branches
        .windows(2)
        .all(|w| w[1].gap() <= w[0].gap() + 1e-15);
    let zero_seed_endpoint = flow_map.eval(0.0, t).expect("fixed point");

    NonUniquenessReport {
        t,
        predicted,
        branches,
        zero_seed_endpoint,
        limit_plus,
        limit_minus,
        max_limit_error,
        gap_monotone,
    }
}

/// Report of the multiplicativity obstruction at the branch point.
#[derive(Clone, Debug)]
pub struct EndomorphismFailureReport {
    pub t: f64,
    pub branch_plus: f64,
    pub branch_minus: f64,
    pub bump_radius: f64,
    /// Sup norm of the product f g; exactly zero once the branch gap clears
    /// the bump supports.
    pub product_sup: f64,
    /// |E(f)(0) E(g)(0) - E(fg)(0)| resolving E at 0 along the "+" branch.
    pub violation_plus_branch: f64,
    /// Same with the "-" branch resolving E(fg)(0).
    pub violation_minus_branch: f64,
}

impl EndomorphismFailureReport {
    pub fn max_violation(&self) -> f64 {
        self.violation_plus_branch.max(self.violation_minus_branch)
    }
}

/// Quantify how badly a single-valued pullback at xi = 0 fails to be
/// multiplicative for the given field: put a bump f at the "+" branch
/// endpoint and a bump g at the "-" branch endpoint. Continuity from xi > 0
/// forces E(f)(0) = f(x_plus), continuity from xi < 0 forces
/// E(g)(0) = g(x_minus), while E(fg)(0) can only take one branch value.
/// For a well-posed field the two endpoints coincide and the violation is
/// interpolation noise; for the cube-root field with separated bumps it is 1.
pub fn endomorphism_failure_violation(
    coeff: impl Fn(f64) -> f64 + Send + Sync + 'static,
    t: f64,
    grid: &Grid,
    step: f64,
    bump_radius: f64,
    seed_epsilon: f64,
) -> EndomorphismFailureReport {
    let flow_map = FlowMap::new(coeff, step);
    let branch_plus = flow_map.eval(seed_epsilon, t).expect("suite field in box");
    let branch_minus = flow_map
        .eval(-seed_epsilon, t)
        .expect("suite field in box");

    let f = GridFunction::bump(grid, branch_plus, bump_radius);
    let g = GridFunction::bump(grid, branch_minus, bump_radius);
    let fg = f.pointwise_mul(&g);

    let ef_at_zero = f.eval(branch_plus).re;
    let eg_at_zero = g.eval(branch_minus).re;
    let efg_plus = fg.eval(branch_plus).re;
    let efg_minus = fg.eval(branch_minus).re;

    EndomorphismFailureReport {
        t,
        branch_plus,
        branch_minus,
        bump_radius,
        product_sup: fg.sup_norm(),
        violation_plus_branch: (ef_at_zero * eg_at_zero - efg_plus).abs(),
        violation_minus_branch: (ef_at_zero * eg_at_zero - efg_minus).abs(),
    }
}

/// The multiplicativity obstruction for the midpoint field on the default
/// desk grid.
pub fn counterexample_endomorphism_failure(t: f64) -> EndomorphismFailureReport {
    endomorphism_failure_violation(field_midpoint, t, &Grid::default_desk(), 1e-5, 0.25, 1e-8)
}

/// Report of the substitution audit dy/dx * (cbrt(x) + 1) = 1.
#[derive(Clone, Debug)]
pub struct SubstitutionReport {
    /// Max residual of the identity over the pass region [-0.95, 8].
    pub max_identity_residual: f64,
    pub argmax_x: f64,
    /// One-sided difference quotients of y at 0: (delta, q_plus, q_minus).
    pub quotient_sweep: Vec<(f64, f64, f64)>,
    /// Deviation of the final one-sided quotients from the C^1 value 1.
    pub limit_defect: f64,
    /// Fixed-step (h = 1e-3) residuals at x approaching -1: the naive
    /// quotient blows up toward the zero of V1; excluded from the pass
    /// criterion by design.
    pub near_singularity_sweep: Vec<(f64, f64)>,
}

/// Numerically differentiate the closed-form substitution and audit the
/// identity dy/dx = 1 / V1(x), plus the C^1 claim at x = 0 via one-sided
/// quotients converging to 1 from both sides.
pub fn substitution_check() -> SubstitutionReport {
    // Five-point stencil with a step adapted to the distance from both
    // singular points (x = 0 where y is only C^1, x = -1 where V1 vanishes).
    let derivative = |x: f64| {
        let h = 0.01 * (x.abs().max(1e-8)).min((x + 1.0) / 2.0);
        (-substitution_y(x + 2.0 * h) + 8.0 * substitution_y(x + h)
            - 8.0 * substitution_y(x - h)
            + substitution_y(x - 2.0 * h))
            / (12.0 * h)
    };
    let residual = |x: f64| (derivative(x) * (x.cbrt() + 1.0) - 1.0).abs();

    let mut max_identity_residual = 0.0f64;
    let mut argmax_x = f64::NAN;
    let mut observe = |x: f64| {
        let r = residual(x);
        if r > max_identity_residual || argmax_x.is_nan() {
            max_identity_residual = r;
            argmax_x = x;
        }
    };
    let samples = 1_800usize;
    for i in 0..=samples {
        let x = -0.95 + (8.0 + 0.95) * i as f64 / samples as f64;
        if x != 0.0 {
            observe(x);
        }
    }
    // Extra coverage of the delicate neighborhood of 0.
    for k in 1..=24 {
        let x = 10f64.powf(-6.0 + 5.0 * k as f64 / 24.0);
        observe(x);
        observe(-x);
    }

    let mut quotient_sweep = Vec::new();
    let mut delta = 1e-2;
    while delta >= 1e-13 * (1.0 - 1e-12) {
        let q_plus = substitution_y(delta) / delta;
        let q_minus = substitution_y(-delta) / (-delta);
        quotient_sweep.push((delta, q_plus, q_minus));
        delta /= 10.0;
    }
    let (_, q_plus, q_minus) = *quotient_sweep.last().expect("sweep non-empty");
    let limit_defect = (q_plus - 1.0).abs().max((q_minus - 1.0).abs());

    // Naive fixed-step differentiation for comparison: its residual grows
    // without bound as x -> -1 from the right.
    let fixed_residual = |x: f64| {
        let h = 1e-3;
        let d = (-substitution_y(x + 2.0 * h) + 8.0 * substitution_y(x + h)
            - 8.0 * substitution_y(x - h)
            + substitution_y(x - 2.0 * h))
            / (12.0 * h);
        (d * (x.cbrt() + 1.0) - 1.0).abs()
    };
    let near_singularity_sweep = [-0.9, -0.95, -0.99, -0.995]
        .into_iter()
        .map(|x| (x, fixed_residual(x)))
        .collect();

    SubstitutionReport {
        max_identity_residual,
        argmax_x,
        quotient_sweep,
        limit_defect,
        near_singularity_sweep,
    }
}

/// Rows (t, x) of one integral curve, for the figure exports.
pub fn flow_curve(
    coeff: impl Fn(f64) -> f64 + Send + Sync + 'static,
    xi0: f64,
    t_max: f64,
    rows: usize,
    step: f64,
) -> Result<Vec<(f64, f64)>, FlowError> {
    assert!(rows >= 2);
    let flow_map = FlowMap::new(coeff, step);
    let mut out = Vec::with_capacity(rows);
    for k in 0..rows {
        let t = t_max * k as f64 / (rows - 1) as f64;
        out.push((t, flow_map.eval(xi0, t)?));
    }
    Ok(out)
}
