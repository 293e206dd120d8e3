//! Suite runner behind the `cstar-lab` binary: flat key-value configs, one
//! reproducible experiment suite per construction, JSON reports plus CSV plot
//! data. A seed fully determines every random sample, and reports are
//! byte-identical across runs of the same config.

#![forbid(unsafe_code)]

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;
use thiserror::Error;

use cstar_lab::algebra::{commutator, AlgebraElement, GaugeAlgebraElement};
use cstar_lab::cone::{
    loop_holonomy_study, pauli_map, spinor_cone_point, BundlePoint, ConeVector, GeneratorFrame,
};
use cstar_lab::flow::{
    counterexample_nonuniqueness, endomorphism_failure_violation, field_midpoint, field_v1,
    field_v2, first_order_field, flow_curve, pullback_family, substitution_check, Grid,
    GridFunction,
};
use cstar_lab::ordered_exp::{
    observed_orders, tilde_convergence_study, tilde_ordering_negative_control,
    verify_commutator_lemma, verify_tilde_formula, verify_tilde_splitting,
};
use cstar_lab::report::{CheckReport, ResidualScan};
use cstar_lab::representation::{ParameterMatrix, TransitionOperator};
use cstar_lab::sample;
use cstar_lab::semigroup::{
    ad, check_field_commutes_with_semigroup, check_product_rule, check_reality,
    check_semigroup_laws, generate_inner_semigroup, SemigroupTolerances,
};
use cstar_lab::util::map_maybe_parallel;

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub const SUITES: [&str; 7] = [
    "algebra-laws",
    "semigroup-laws",
    "nonconvexity",
    "tilde-formula",
    "commutator-lemma",
    "representation-fields",
    "cone-bundle",
];

pub const PLOT_KINDS: [&str; 3] = ["field-graph", "integral-curves", "convergence"];

/// Environment variable overriding the output directory.
pub const OUT_DIR_ENV: &str = "CSTAR_LAB_OUT";

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`, got {content:?}")]
    Malformed { line: usize, content: String },
    #[error("line {line}: unknown key {key:?}")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: bad value for {key}: {value:?}")]
    BadValue {
        line: usize,
        key: String,
        value: String,
    },
    #[error("tolerance {key} must be positive, got {value}")]
    NonPositiveTolerance { key: String, value: f64 },
    #[error("cannot read config: {0}")]
    Unreadable(String),
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("unknown suite {0:?}; expected one of {SUITES:?} or `plot`")]
    UnknownSuite(String),
    #[error("unknown plot kind {0:?}; expected one of {PLOT_KINDS:?}")]
    UnknownPlotKind(String),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("i/o failure: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// Distinct exit codes: 2 usage / unknown suite, 3 invalid config, 4 i/o.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::UnknownSuite(_) | CliError::UnknownPlotKind(_) => 2,
            CliError::Config(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

/// Suite configuration: seed, mesh parameters, and named tolerances. Every
/// field has the module-stated default; a flat `key = value` file overrides
/// them, and unknown keys are rejected.
#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub timestamp: String,
    pub parallel: bool,
    pub trials: usize,
    pub matrix_dim_max: usize,
    pub grid_x_min: f64,
    pub grid_x_max: f64,
    pub grid_h: f64,
    pub flow_step: f64,
    pub branch_step: f64,
    pub oe_steps: usize,
    pub quad_steps: usize,
    pub rep_points: usize,
    pub bump_radius: f64,
    pub tolerances: BTreeMap<String, f64>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        let tolerances = [
            ("algebraic", 1e-12),
            ("spectral", 1e-10),
            ("loose_spectral", 1e-8),
            ("semigroup", 1e-9),
            ("pullback", 1e-4),
            ("branch", 1e-4),
            ("violation_min", 0.5),
            ("substitution", 1e-6),
            ("tilde", 1e-6),
            ("tilde_reversed_min", 1e-3),
            ("lemma", 1e-6),
            ("interchange", 1e-9),
            ("bundle", 1e-9),
            ("det_identity", 1e-12),
            ("phase_invariance", 1e-14),
            ("order_min", 1.9),
            ("holonomy_order_min", 2.5),
            ("reality_negative_min", 0.1),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect();
        Self {
            seed: 7,
            // Fixed epoch placeholder keeps default reports byte-identical;
            // override with `timestamp = ...` for wall-clock stamps.
            timestamp: "1970-01-01T00:00:00Z".to_string(),
            parallel: false,
            trials: 1000,
            matrix_dim_max: 16,
            grid_x_min: -8.0,
            grid_x_max: 8.0,
            grid_h: 1e-3,
            flow_step: 1e-3,
            branch_step: 1e-5,
            oe_steps: 4096,
            quad_steps: 2048,
            rep_points: 256,
            bump_radius: 0.25,
            tolerances,
        }
    }
}

impl ExperimentConfig {
    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::Unreadable(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = Self::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let Some((key, value)) = content.split_once('=') else {
                return Err(ConfigError::Malformed {
                    line,
                    content: raw.to_string(),
                });
            };
            let key = key.trim();
            let value = value.trim();
            let bad = |k: &str, v: &str| ConfigError::BadValue {
                line,
                key: k.to_string(),
                value: v.to_string(),
            };
            match key {
                "seed" => cfg.seed = value.parse().map_err(|_| bad(key, value))?,
                "timestamp" => cfg.timestamp = value.to_string(),
                "parallel" => cfg.parallel = value.parse().map_err(|_| bad(key, value))?,
                "trials" => cfg.trials = value.parse().map_err(|_| bad(key, value))?,
                "matrix_dim_max" => {
                    cfg.matrix_dim_max = value.parse().map_err(|_| bad(key, value))?
                }
                "grid_x_min" => cfg.grid_x_min = value.parse().map_err(|_| bad(key, value))?,
                "grid_x_max" => cfg.grid_x_max = value.parse().map_err(|_| bad(key, value))?,
                "grid_h" => cfg.grid_h = value.parse().map_err(|_| bad(key, value))?,
                "flow_step" => cfg.flow_step = value.parse().map_err(|_| bad(key, value))?,
                "branch_step" => cfg.branch_step = value.parse().map_err(|_| bad(key, value))?,
                "oe_steps" => cfg.oe_steps = value.parse().map_err(|_| bad(key, value))?,
                "quad_steps" => cfg.quad_steps = value.parse().map_err(|_| bad(key, value))?,
                "rep_points" => cfg.rep_points = value.parse().map_err(|_| bad(key, value))?,
                "bump_radius" => cfg.bump_radius = value.parse().map_err(|_| bad(key, value))?,
                _ => {
                    if let Some(name) = key.strip_prefix("tol_") {
                        let parsed: f64 = value.parse().map_err(|_| bad(key, value))?;
                        if !cfg.tolerances.contains_key(name) {
                            return Err(ConfigError::UnknownKey {
                                line,
                                key: key.to_string(),
                            });
                        }
                        cfg.tolerances.insert(name.to_string(), parsed);
                    } else {
                        return Err(ConfigError::UnknownKey {
                            line,
                            key: key.to_string(),
                        });
                    }
                }
            }
        }
        for (key, &value) in &cfg.tolerances {
            if value <= 0.0 || value.is_nan() {
                return Err(ConfigError::NonPositiveTolerance {
                    key: key.clone(),
                    value,
                });
            }
        }
        Ok(cfg)
    }

    pub fn tol(&self, name: &str) -> f64 {
        *self
            .tolerances
            .get(name)
            .unwrap_or_else(|| panic!("tolerance {name} has a default"))
    }

    pub fn grid(&self) -> Grid {
        let len = ((self.grid_x_max - self.grid_x_min) / self.grid_h).round() as usize + 1;
        Grid::new(self.grid_x_min, self.grid_h, len)
    }

    /// The composition law of a grid pullback pays O(h^{4/3}) for
    /// interpolating the composed flow where it is only C^1 (the cube-root
    /// kink); the budget follows the mesh.
    pub fn pullback_composition_budget(&self) -> f64 {
        4.0 * self.grid_h.powf(4.0 / 3.0)
    }
}

/// One named artifact written next to the report, e.g. CSV plot data.
#[derive(Clone, Debug, PartialEq)]
pub struct Artifact {
    pub name: String,
    pub contents: String,
}

/// Report schema: {suite, checks, seed, timestamp}.
#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<SuiteCheck>,
    pub seed: u64,
    pub timestamp: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteCheck {
    pub name: String,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub witness: String,
}

impl From<CheckReport> for SuiteCheck {
    fn from(r: CheckReport) -> Self {
        Self {
            name: r.check,
            max_residual: r.max_residual,
            tolerance: r.tolerance,
            pass: r.pass,
            witness: r.witness,
        }
    }
}

impl SuiteReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_json(&self) -> String {
        let mut json = serde_json::to_string_pretty(self).expect("report serializes");
        json.push('\n');
        json
    }
}

/// A finished suite run: the report plus any CSV artifacts.
#[derive(Clone, Debug)]
pub struct SuiteRun {
    pub report: SuiteReport,
    pub artifacts: Vec<Artifact>,
}

/// Run one named suite under the config. Fails fast on unknown names so no
/// partial files get written.
pub fn run_suite(suite: &str, config: &ExperimentConfig) -> Result<SuiteRun, CliError> {
    let (checks, artifacts) = match suite {
        "algebra-laws" => suite_algebra_laws(config),
        "semigroup-laws" => suite_semigroup_laws(config),
        "nonconvexity" => suite_nonconvexity(config),
        "tilde-formula" => suite_tilde_formula(config),
        "commutator-lemma" => suite_commutator_lemma(config),
        "representation-fields" => suite_representation_fields(config),
        "cone-bundle" => suite_cone_bundle(config),
        other => return Err(CliError::UnknownSuite(other.to_string())),
    };
    Ok(SuiteRun {
        report: SuiteReport {
            suite: suite.to_string(),
            checks: checks.into_iter().map(SuiteCheck::from).collect(),
            seed: config.seed,
            timestamp: config.timestamp.clone(),
        },
        artifacts,
    })
}

/// Fold per-trial reports of the same check into one, keeping the worst
/// residual and its witness.
fn fold_reports(name: &str, reports: Vec<CheckReport>) -> CheckReport {
    let tolerance = reports
        .first()
        .map(|r| r.tolerance)
        .expect("folding at least one report");
    let mut scan = ResidualScan::new();
    for (idx, r) in reports.iter().enumerate() {
        scan.observe(r.max_residual, || format!("trial#{idx}: {}", r.witness));
    }
    scan.into_report(name, tolerance)
}

fn unit_samples(rng: &mut StdRng, dim: usize, count: usize) -> Vec<AlgebraElement> {
    (0..count)
        .map(|_| sample::random_unit_element(rng, dim))
        .collect()
}

fn suite_algebra_laws(config: &ExperimentConfig) -> (Vec<CheckReport>, Vec<Artifact>) {
    let mut rng = StdRng::seed_from_u64(config.seed);
    let loose = config.tol("loose_spectral");
    let algebraic = config.tol("algebraic");
    let spectral = config.tol("spectral");

    let mut cstar = ResidualScan::new();
    let mut antihom = ResidualScan::new();
    for trial in 0..config.trials {
        let dim = rng.gen_range(1..=config.matrix_dim_max);
        let a = sample::random_element(&mut rng, dim, 1.0);
        let norm = a.cstar_norm();
        let gram_norm = (&a.star() * &a).cstar_norm();
        let scale = (norm * norm).max(1e-30);
        cstar.observe((norm * norm - gram_norm).abs() / scale, || {
            format!("trial#{trial} dim={dim}")
        });
        let b = sample::random_element(&mut rng, dim, 1.0);
        let defect = (&(&a * &b).star() - &(&b.star() * &a.star())).cstar_norm();
        antihom.observe(defect, || format!("trial#{trial} dim={dim}"));
    }

    let mut derivation = ResidualScan::new();
    let mut jacobi = ResidualScan::new();
    let mut unitarity = ResidualScan::new();
    let mut log_roundtrip = ResidualScan::new();
    for trial in 0..(config.trials / 10).max(10) {
        let dim = rng.gen_range(2..=config.matrix_dim_max.min(8));
        let g = sample::random_gauge_algebra(&mut rng, dim);
        let field = ad(g.as_element());
        let u = sample::random_unit_element(&mut rng, dim);
        let v = sample::random_unit_element(&mut rng, dim);
        let lhs = field.apply(&(&u * &v));
        let rhs = &(&u * &field.apply(&v)) + &(&field.apply(&u) * &v);
        derivation.observe((&lhs - &rhs).cstar_norm(), || format!("trial#{trial}"));

        let a = sample::random_unit_element(&mut rng, dim);
        let b = sample::random_unit_element(&mut rng, dim);
        let c = sample::random_unit_element(&mut rng, dim);
        let cycle = &(&commutator(&a, &commutator(&b, &c).expect("dims")).expect("dims")
            + &commutator(&b, &commutator(&c, &a).expect("dims")).expect("dims"))
            + &commutator(&c, &commutator(&a, &b).expect("dims")).expect("dims");
        jacobi.observe(cycle.cstar_norm(), || format!("trial#{trial}"));

        let norm = g.as_element().cstar_norm().max(1e-12);
        let big = g.scaled_re(rng.gen_range(0.1..10.0) / norm);
        unitarity.observe(big.as_element().exp().unitary_defect(), || {
            format!("trial#{trial}")
        });
        let small = g.scaled_re(rng.gen_range(0.01..0.5) / norm);
        let log = small
            .as_element()
            .exp()
            .log_near_identity()
            .expect("inside the log domain");
        log_roundtrip.observe((&log - small.as_element()).cstar_norm(), || {
            format!("trial#{trial}")
        });
    }

    (
        vec![
            cstar.into_report("cstar-identity-relative", loose),
            antihom.into_report("involution-antihomomorphism", loose),
            derivation.into_report("ad-derivation-identity", algebraic),
            jacobi.into_report("commutator-jacobi", algebraic),
            unitarity.into_report("exp-skew-unitarity", spectral),
            log_roundtrip.into_report("log-exp-roundtrip", spectral),
        ],
        Vec::new(),
    )
}

fn suite_semigroup_laws(config: &ExperimentConfig) -> (Vec<CheckReport>, Vec<Artifact>) {
    let mut rng = StdRng::seed_from_u64(config.seed);
    let tol = config.tol("semigroup");
    let times = [0.0, 0.25, 1.0, 3.5, 10.0];

    let generators: Vec<(usize, GaugeAlgebraElement, Vec<AlgebraElement>)> = (0..20)
        .map(|_| {
            let dim = rng.gen_range(2..=config.matrix_dim_max.min(8));
            let norm = rng.gen_range(0.5..=2.0);
            let g = sample::random_gauge_algebra_with_norm(&mut rng, dim, norm);
            let samples = unit_samples(&mut rng, dim, 3);
            (dim, g, samples)
        })
        .collect();

    let per_generator = map_maybe_parallel(&generators, config.parallel, |(_, g, samples)| {
        let family = generate_inner_semigroup(g);
        let laws = check_semigroup_laws(
            &family,
            &times,
            samples,
            SemigroupTolerances::uniform(tol),
        );
        let commutes = check_field_commutes_with_semigroup(
            family.field(),
            &family,
            &times,
            samples,
            tol,
        );
        let product_pairs: Vec<(AlgebraElement, AlgebraElement)> = samples
            .iter()
            .zip(samples.iter().rev())
            .map(|(a, b)| (a.clone(), b.clone()))
            .collect();
        let product = check_product_rule(family.field(), &product_pairs, 1e-12);
        let reality = check_reality(family.field(), samples, 1e-12);
        (laws, commutes, product, reality)
    });

    let mut composition = Vec::new();
    let mut multiplicativity = Vec::new();
    let mut star = Vec::new();
    let mut norm = Vec::new();
    let mut commutes = Vec::new();
    let mut product = Vec::new();
    let mut reality = Vec::new();
    for (laws, c, p, r) in per_generator {
        let mut laws = laws.into_iter();
        composition.push(laws.next().expect("composition report"));
        multiplicativity.push(laws.next().expect("multiplicativity report"));
        star.push(laws.next().expect("star report"));
        norm.push(laws.next().expect("norm report"));
        commutes.push(c);
        product.push(p);
        reality.push(r);
    }

    // Cone property: nonnegative rescaling of the generator rescales time.
    let mut cone = ResidualScan::new();
    for trial in 0..10 {
        let dim = rng.gen_range(2..=config.matrix_dim_max.min(8));
        let g = sample::random_gauge_algebra_with_norm(&mut rng, dim, 1.0);
        let lambda = rng.gen_range(0.0..3.0);
        let q = sample::random_unit_element(&mut rng, dim);
        let scaled = generate_inner_semigroup(&g.scaled_re(lambda));
        let base = generate_inner_semigroup(&g);
        for t in [0.3, 1.7] {
            let diff = (&scaled.at(t).apply(&q) - &base.at(lambda * t).apply(&q)).cstar_norm();
            cone.observe(diff, || format!("trial#{trial} lambda={lambda:.3} t={t}"));
        }
    }

    (
        vec![
            fold_reports("semigroup-composition", composition),
            fold_reports("endomorphism-multiplicativity", multiplicativity),
            fold_reports("endomorphism-star-preservation", star),
            fold_reports("endomorphism-norm-nonincrease", norm),
            fold_reports("field-commutes-with-semigroup", commutes),
            fold_reports("inner-field-product-rule", product),
            fold_reports("inner-field-reality", reality),
            cone.into_report("generator-cone-rescaling", config.tol("spectral")),
        ],
        Vec::new(),
    )
}

fn suite_nonconvexity(config: &ExperimentConfig) -> (Vec<CheckReport>, Vec<Artifact>) {
    let grid = config.grid();
    let tol_pullback = config.tol("pullback");
    let budget = SemigroupTolerances::uniform(tol_pullback)
        .with_composition(config.pullback_composition_budget());
    let times = [0.0, 0.3337, 0.501];
    let bump = |center: f64, radius: f64| GridFunction::bump(&grid, center, radius);
    let samples = vec![
        bump(0.5, 0.8),
        bump(-0.9, 0.7),
        GridFunction::sample(&grid, |x| {
            Complex64::new(
                if (x - 0.1).abs() < 1.2 {
                    ((x - 0.1) * std::f64::consts::FRAC_PI_2 / 1.2).cos().powi(2)
                } else {
                    0.0
                },
                0.3 * if (x + 0.4).abs() < 1.0 {
                    ((x + 0.4) * std::f64::consts::FRAC_PI_2).cos().powi(2)
                } else {
                    0.0
                },
            )
        }),
    ];

    let mut checks = Vec::new();
    type LabeledField = (&'static str, fn(f64) -> f64);
    let labeled: [LabeledField; 3] = [
        ("v1", field_v1),
        ("v2", field_v2),
        ("translation", |_| 1.0),
    ];
    let law_sets = map_maybe_parallel(&labeled, config.parallel, |(label, coeff)| {
        let family = pullback_family(&grid, *coeff, config.flow_step);
        let budget = if *label == "translation" {
            // Smooth field: the composition law sits at the interpolation
            // floor together with the rest.
            SemigroupTolerances::uniform(tol_pullback)
        } else {
            budget
        };
        let mut laws = check_semigroup_laws(&family, &times, &samples, budget);
        for law in &mut laws {
            law.check = format!("{}[{label}]", law.check);
        }
        laws
    });
    checks.extend(law_sets.into_iter().flatten());

    // Product rule of the first-order fields on smooth pairs: the central
    // difference is a derivation up to O(h^2).
    let mut product = Vec::new();
    for (label, coeff) in [("v1", field_v1 as fn(f64) -> f64), ("translation", |_| 1.0)] {
        let field = first_order_field(&grid, coeff);
        let pairs = vec![
            (bump(0.4, 0.9), bump(-0.1, 1.2)),
            (samples[2].clone(), bump(0.2, 1.0)),
        ];
        let mut report =
            check_product_rule(&field, &pairs, 100.0 * config.grid_h * config.grid_h);
        report.check = format!("first-order-field-product-rule[{label}]");
        product.push(report);
    }
    checks.extend(product);

    // Branch endpoints of the midpoint field against the closed form.
    let t = 1.0;
    let branch = counterexample_nonuniqueness(t, 1e-2, config.branch_step);
    checks.push(CheckReport::new(
        "branch-endpoints-vs-closed-form",
        branch.max_limit_error,
        format!(
            "limits ({:.6}, {:.6}) vs +/-{:.6}",
            branch.limit_plus, branch.limit_minus, branch.predicted
        ),
        config.tol("branch"),
    ));
    checks.push(CheckReport::new(
        "branch-gap-monotone-in-epsilon",
        if branch.gap_monotone { 0.0 } else { 1.0 },
        format!("{} seeds, zero seed stays at {}", branch.branches.len(), branch.zero_seed_endpoint),
        0.5,
    ));

    // Multiplicativity obstruction: the midpoint field must violate, the
    // endpoint fields must not.
    let violation = endomorphism_failure_violation(
        field_midpoint,
        t,
        &grid,
        config.branch_step,
        config.bump_radius,
        1e-8,
    );
    checks.push(CheckReport::new_lower_bound(
        "midpoint-field-multiplicativity-violation",
        violation.max_violation(),
        format!(
            "branches ({:.5}, {:.5}), product sup {:.2e}",
            violation.branch_plus, violation.branch_minus, violation.product_sup
        ),
        config.tol("violation_min"),
    ));
    for (label, coeff) in [("v1", field_v1 as fn(f64) -> f64), ("v2", field_v2)] {
        let control = endomorphism_failure_violation(
            coeff,
            t,
            &grid,
            config.branch_step,
            config.bump_radius,
            1e-8,
        );
        checks.push(CheckReport::new(
            format!("endpoint-field-violation-control[{label}]"),
            control.max_violation(),
            format!("branches ({:.5}, {:.5})", control.branch_plus, control.branch_minus),
            config.tol("substitution"),
        ));
    }

    // Substitution audit.
    let substitution = substitution_check();
    checks.push(CheckReport::new(
        "substitution-identity",
        substitution.max_identity_residual,
        format!("argmax x = {:.6}", substitution.argmax_x),
        config.tol("substitution"),
    ));
    checks.push(CheckReport::new(
        "substitution-c1-limit-at-zero",
        substitution.limit_defect,
        "one-sided quotients at delta = 1e-13",
        config.tol("branch"),
    ));

    // Plot data.
    let mut artifacts = vec![
        Artifact {
            name: "field_graph_v1.csv".into(),
            contents: field_graph_csv(field_v1, &grid),
        },
        Artifact {
            name: "field_graph_v2.csv".into(),
            contents: field_graph_csv(field_v2, &grid),
        },
        Artifact {
            name: "branch_sweep.csv".into(),
            contents: {
                let mut csv = String::from("# columns: epsilon, plus_endpoint, minus_endpoint\n");
                let _ = writeln!(csv, "epsilon,plus,minus");
                for b in &branch.branches {
                    let _ = writeln!(csv, "{},{},{}", b.epsilon, b.plus, b.minus);
                }
                csv
            },
        },
    ];
    artifacts.push(Artifact {
        name: "integral_curves_v1.csv".into(),
        contents: integral_curves_csv(field_v1, config),
    });
    (checks, artifacts)
}

fn suite_tilde_formula(config: &ExperimentConfig) -> (Vec<CheckReport>, Vec<Artifact>) {
    let mut rng = StdRng::seed_from_u64(config.seed);
    let tol = config.tol("tilde");
    let i = Complex64::new(0.0, 1.0);
    let sigma3 = GaugeAlgebraElement::from_skew(cstar_lab::algebra::pauli(3).scaled(i));
    let sigma1 = GaugeAlgebraElement::from_skew(cstar_lab::algebra::pauli(1).scaled(i));

    // Random instances: ||h||, ||g|| <= 1, t <= 2, dims 2 and 4.
    let instances: Vec<(GaugeAlgebraElement, GaugeAlgebraElement, f64, Vec<AlgebraElement>)> = (0
        ..12)
        .map(|k| {
            let dim = if k % 2 == 0 { 2 } else { 4 };
            let h_norm = rng.gen_range(0.2..=1.0);
            let g_norm = rng.gen_range(0.2..=1.0);
            let h = sample::random_gauge_algebra_with_norm(&mut rng, dim, h_norm);
            let g = sample::random_gauge_algebra_with_norm(&mut rng, dim, g_norm);
            let t = rng.gen_range(0.25..=2.0);
            let samples = unit_samples(&mut rng, dim, 4);
            (h, g, t, samples)
        })
        .collect();
    let residual_reports = map_maybe_parallel(&instances, config.parallel, |(h, g, t, samples)| {
        verify_tilde_formula(h, g, *t, config.oe_steps, samples, tol)
    });

    let mut checks = vec![fold_reports("tilde-formula-residual", residual_reports)];

    // Convergence order across three mesh doublings on the Pauli instance.
    let mut pauli_rng = StdRng::seed_from_u64(config.seed ^ 0x5151);
    let pauli_samples = unit_samples(&mut pauli_rng, 2, 6);
    let study = tilde_convergence_study(
        &sigma3,
        &sigma1,
        1.0,
        &[512, 1024, 2048, 4096],
        &pauli_samples,
    );
    let orders = observed_orders(&study);
    let min_order = orders.iter().copied().fold(f64::INFINITY, f64::min);
    checks.push(CheckReport::new_lower_bound(
        "tilde-convergence-order",
        min_order,
        format!("orders {orders:?}"),
        config.tol("order_min"),
    ));

    // Ordering negative control on the sigma3/sigma1 instance.
    checks.push(tilde_ordering_negative_control(
        &sigma3,
        &sigma1,
        1.0,
        config.oe_steps,
        &pauli_samples,
        config.tol("tilde_reversed_min"),
    ));

    // Splitting identity: trivial factor and midpoint split.
    checks.push(verify_tilde_splitting(
        &sigma3,
        &sigma1,
        1.0,
        0.0,
        config.oe_steps,
        config.tol("algebraic"),
    ));
    checks.push(verify_tilde_splitting(
        &sigma3,
        &sigma1,
        1.0,
        0.5,
        config.oe_steps,
        tol,
    ));

    let artifacts = vec![Artifact {
        name: "tilde_convergence.csv".into(),
        contents: convergence_csv(&study),
    }];
    (checks, artifacts)
}

fn suite_commutator_lemma(config: &ExperimentConfig) -> (Vec<CheckReport>, Vec<Artifact>) {
    let mut rng = StdRng::seed_from_u64(config.seed);
    let tol = config.tol("lemma");
    let i = Complex64::new(0.0, 1.0);
    let sigma3 = GaugeAlgebraElement::from_skew(cstar_lab::algebra::pauli(3).scaled(i));
    let sigma1 = GaugeAlgebraElement::from_skew(cstar_lab::algebra::pauli(1).scaled(i));

    let instances: Vec<(GaugeAlgebraElement, GaugeAlgebraElement, Vec<AlgebraElement>)> = (0..8)
        .map(|k| {
            let dim = if k % 2 == 0 { 2 } else { 4 };
            let g1 = sample::random_gauge_algebra_with_norm(&mut rng, dim, 1.0);
            let g2 = sample::random_gauge_algebra_with_norm(&mut rng, dim, 1.0);
            let samples = unit_samples(&mut rng, dim, 4);
            (g1, g2, samples)
        })
        .collect();
    let reports = map_maybe_parallel(&instances, config.parallel, |(g1, g2, samples)| {
        verify_commutator_lemma(g1, g2, 1.0, config.quad_steps, samples, tol)
    });
    let (lemma, corollary): (Vec<CheckReport>, Vec<CheckReport>) =
        reports.into_iter().map(|r| (r.lemma, r.corollary)).unzip();

    let mut checks = vec![
        fold_reports("commutator-lemma-residual", lemma),
        fold_reports("commutator-lemma-ad-corollary", corollary),
    ];

    // Quadrature order on the Pauli instance.
    let mut pauli_rng = StdRng::seed_from_u64(config.seed ^ 0x2626);
    let samples = unit_samples(&mut pauli_rng, 2, 4);
    let study: Vec<(usize, f64)> = [256usize, 512, 1024]
        .iter()
        .map(|&n| {
            (
                n,
                verify_commutator_lemma(&sigma3, &sigma1, 1.0, n, &samples, tol)
                    .lemma
                    .max_residual,
            )
        })
        .collect();
    let orders = observed_orders(&study);
    let min_order = orders.iter().copied().fold(f64::INFINITY, f64::min);
    checks.push(CheckReport::new_lower_bound(
        "commutator-lemma-quadrature-order",
        min_order,
        format!("orders {orders:?}"),
        config.tol("order_min"),
    ));

    let artifacts = vec![Artifact {
        name: "lemma_convergence.csv".into(),
        contents: convergence_csv(&study),
    }];
    (checks, artifacts)
}

fn suite_representation_fields(config: &ExperimentConfig) -> (Vec<CheckReport>, Vec<Artifact>) {
    let mut rng = StdRng::seed_from_u64(config.seed);
    let n = config.rep_points;
    let op = TransitionOperator::periodic_circle(n);
    let algebraic = config.tol("algebraic");

    let random_diagonal = |rng: &mut StdRng| {
        let values: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        AlgebraElement::from_diagonal(&values)
    };

    let pairs: Vec<(AlgebraElement, AlgebraElement)> = (0..100)
        .map(|_| (random_diagonal(&mut rng), random_diagonal(&mut rng)))
        .collect();
    let sufficiency = op
        .sufficiency_check(&pairs, algebraic)
        .expect("diagonal samples");

    let samples: Vec<AlgebraElement> = (0..100).map(|_| random_diagonal(&mut rng)).collect();
    let hermitian_params = [
        ("identity", ParameterMatrix::identity()),
        ("swap", ParameterMatrix::swap_coefficients()),
        (
            "spinor",
            ParameterMatrix::from_spinor(sample::random_spinor(&mut rng)),
        ),
        (
            "minkowski",
            ParameterMatrix::from_minkowski(&[
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            ]),
        ),
    ];
    let mut reality_pos = Vec::new();
    for (label, x) in &hermitian_params {
        let mut report = op
            .reality_of_family(x, &samples, algebraic)
            .expect("diagonal samples");
        report.check = format!("reality-hermitian[{label}]");
        reality_pos.push(report);
    }
    // Negative control: a generic non-Hermitian parameter with skew
    // off-diagonal content.
    let non_hermitian = ParameterMatrix::new([
        [
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            Complex64::new(1.0, 0.4),
        ],
        [
            Complex64::new(-0.2, 0.9),
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
        ],
    ]);
    let negative = op
        .reality_of_family(&non_hermitian, &samples, algebraic)
        .expect("diagonal samples");

    // Bilinearity in the parameter.
    let mut bilinear = ResidualScan::new();
    for trial in 0..20 {
        let q = random_diagonal(&mut rng);
        let x = ParameterMatrix::from_minkowski(&[
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        ]);
        let y = ParameterMatrix::from_spinor(sample::random_spinor(&mut rng));
        let alpha = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let beta = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let combined = op
            .sandwich_field(&ParameterMatrix::linear_combination(alpha, &x, beta, &y), &q)
            .expect("diagonal");
        let split = &op.sandwich_field(&x, &q).expect("diagonal").scaled(alpha)
            + &op.sandwich_field(&y, &q).expect("diagonal").scaled(beta);
        bilinear.observe((&combined - &split).frobenius_norm(), || {
            format!("trial#{trial}")
        });
    }

    // The swap parameter reproduces the translation field exactly.
    let mut swap_match = ResidualScan::new();
    for trial in 0..10 {
        let q = random_diagonal(&mut rng);
        let from_x = op
            .sandwich_field(&ParameterMatrix::swap_coefficients(), &q)
            .expect("diagonal");
        let direct = op.translation_field(&q).expect("diagonal");
        swap_match.observe((&from_x - &direct).frobenius_norm(), || {
            format!("trial#{trial}")
        });
    }

    let mut checks = vec![
        sufficiency.dsd_defect,
        sufficiency.cross_term,
        sufficiency.product_rule,
        sufficiency.identity_audit,
    ];
    checks.extend(reality_pos);
    checks.push(CheckReport::new_lower_bound(
        "reality-non-hermitian-negative-control",
        negative.max_residual,
        negative.witness.clone(),
        config.tol("reality_negative_min"),
    ));
    checks.push(bilinear.into_report("sandwich-field-bilinearity", algebraic));
    checks.push(swap_match.into_report("swap-parameter-matches-translation", algebraic));

    let artifacts = vec![Artifact {
        name: "difference_operator.json".into(),
        contents: {
            let small = TransitionOperator::periodic_circle(16);
            let mut json =
                serde_json::to_string_pretty(small.partial().matrix()).expect("serializes");
            json.push('\n');
            json
        },
    }];
    (checks, artifacts)
}

fn suite_cone_bundle(config: &ExperimentConfig) -> (Vec<CheckReport>, Vec<Artifact>) {
    let mut rng = StdRng::seed_from_u64(config.seed);
    let det_tol = config.tol("det_identity");
    let phase_tol = config.tol("phase_invariance");
    let interchange_tol = config.tol("interchange");
    let bundle_tol = config.tol("bundle");

    let mut det_scan = ResidualScan::new();
    for trial in 0..config.trials {
        let x = [
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
        ];
        let det = pauli_map(&x).determinant();
        let q = x[0] * x[0] - x[1] * x[1] - x[2] * x[2] - x[3] * x[3];
        det_scan.observe(
            (det - Complex64::new(q, 0.0)).norm(),
            || format!("trial#{trial}"),
        );
    }

    let mut phase_scan = ResidualScan::new();
    let mut cone_scan = ResidualScan::new();
    for trial in 0..config.trials {
        let phi = sample::random_spinor(&mut rng);
        let theta: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let rotated = [
            phi[0] * Complex64::new(theta.cos(), theta.sin()),
            phi[1] * Complex64::new(theta.cos(), theta.sin()),
        ];
        let a = spinor_cone_point(phi);
        let b = spinor_cone_point(rotated);
        let diff = a
            .coords()
            .iter()
            .zip(b.coords().iter())
            .map(|(p, q)| (p - q).abs())
            .fold(0.0f64, f64::max);
        phase_scan.observe(diff, || format!("trial#{trial}"));
        cone_scan.observe(a.cone_defect(), || format!("trial#{trial}"));
    }

    let frames = [
        ("2x2", GeneratorFrame::pauli_frame()),
        ("4x4", GeneratorFrame::pauli_tensor_frame()),
    ];
    let mut checks = vec![
        det_scan.into_report("pauli-determinant-identity", det_tol),
        phase_scan.into_report("spinor-phase-invariance", phase_tol),
        cone_scan.into_report("spinor-cone-membership", det_tol),
    ];

    for (label, frame) in &frames {
        let samples = unit_samples(&mut rng, frame.dim(), 4);
        let mut inter_scan = ResidualScan::new();
        let mut fiber_unitary = ResidualScan::new();
        for trial in 0..6 {
            let x = ConeVector(sample::random_cone_vector(&mut rng, 1.0));
            let y = ConeVector(sample::random_cone_vector(&mut rng, 1.0));
            let t = rng.gen_range(0.25..=1.0);
            let s = rng.gen_range(0.25..=1.0);
            let report = frame
                .interchange(&x, &y, t, s, &samples)
                .expect("cone directions are in the hull");
            inter_scan.observe(report.residual, || format!("trial#{trial}"));
            fiber_unitary.observe(report.unitarity_defect, || format!("trial#{trial}"));
        }
        checks.push(inter_scan.into_report(format!("interchange-residual[{label}]"), interchange_tol));
        checks.push(
            fiber_unitary.into_report(format!("interchange-fiber-unitarity[{label}]"), interchange_tol),
        );

        // Two lattice paths to the same corner: fibers differ by a unitary
        // and the endomorphisms agree after Ad of the ratio.
        let mut two_path = ResidualScan::new();
        for trial in 0..4 {
            let x = ConeVector(sample::random_cone_vector(&mut rng, 0.8));
            let y = ConeVector(sample::random_cone_vector(&mut rng, 0.8));
            let corner = x.add(&y);
            let path_xy = frame.path_compose(&[x, corner]).expect("hull path");
            let path_yx = frame.path_compose(&[y, corner]).expect("hull path");
            let ratio = path_xy.fiber.compose(&path_yx.fiber.inverse());
            let e_xy = frame.endomorphism_of(&path_xy).expect("hull");
            let e_yx = frame.endomorphism_of(&path_yx).expect("hull");
            for (qi, q) in samples.iter().enumerate() {
                let diff = (&e_xy.apply(q) - &ratio.conjugate(&e_yx.apply(q))).cstar_norm();
                two_path.observe(diff, || format!("trial#{trial} q#{qi}"));
            }
        }
        checks.push(two_path.into_report(format!("two-path-fiber-consistency[{label}]"), bundle_tol));

        // Bundle composition law over random points.
        let point_pairs: Vec<(BundlePoint, BundlePoint)> = (0..4)
            .map(|_| {
                let mk = |rng: &mut StdRng| BundlePoint {
                    base: ConeVector(sample::random_cone_vector(rng, 0.8)),
                    fiber: sample::random_gauge_group(rng, frame.dim()),
                };
                (mk(&mut rng), mk(&mut rng))
            })
            .collect();
        let mut bundle_reports = frame
            .bundle_semigroup_check(&point_pairs, &samples, bundle_tol)
            .expect("hull points");
        for report in &mut bundle_reports {
            report.check = format!("{}[{label}]", report.check);
        }
        checks.extend(bundle_reports);
    }

    // Closed-loop holonomy: three-point size sweep against the curvature
    // leading term.
    let frame = GeneratorFrame::pauli_tensor_frame();
    let x = ConeVector([1.0, 1.0, 0.0, 0.0]);
    let y = ConeVector([1.0, 0.0, 1.0, 0.0]);
    let sizes = [0.2, 0.1, 0.05];
    let study = loop_holonomy_study(&frame, &x, &y, &sizes).expect("loop stays in the hull");
    let mut min_order = f64::INFINITY;
    for w in study.windows(2) {
        min_order = min_order.min((w[0].defect / w[1].defect).log2());
    }
    checks.push(CheckReport::new_lower_bound(
        "holonomy-defect-cubic-order",
        min_order,
        format!(
            "defects {:?}",
            study.iter().map(|s| s.defect).collect::<Vec<_>>()
        ),
        config.tol("holonomy_order_min"),
    ));

    let mut holonomy_csv = String::from("# columns: loop_size, log_holonomy_norm, predicted_leading_term\n");
    let _ = writeln!(holonomy_csv, "loop_size,log_norm,predicted");
    for s in &study {
        let _ = writeln!(holonomy_csv, "{},{},{}", s.size, s.log_norm, s.predicted_norm);
    }
    (
        checks,
        vec![Artifact {
            name: "holonomy.csv".into(),
            contents: holonomy_csv,
        }],
    )
}

fn field_graph_csv(coeff: fn(f64) -> f64, grid: &Grid) -> String {
    let mut csv = String::from("# columns: x, V(x)\n");
    let _ = writeln!(csv, "x,v");
    // Every 16th node keeps the file small while resolving the curve.
    let mut i = 0;
    while i < grid.len() {
        let x = grid.node(i);
        let _ = writeln!(csv, "{},{}", x, coeff(x));
        i += 16;
    }
    csv
}

fn integral_curves_csv(coeff: fn(f64) -> f64, config: &ExperimentConfig) -> String {
    let mut csv = String::from("# columns: seed, t, x; integral curves of x' = V(x)\n");
    let _ = writeln!(csv, "seed,t,x");
    for k in -3..=3 {
        let xi0 = k as f64;
        if let Ok(rows) = flow_curve(coeff, xi0, 1.5, 31, config.flow_step) {
            for (t, x) in rows {
                let _ = writeln!(csv, "{},{},{}", xi0, t, x);
            }
        }
    }
    csv
}

fn convergence_csv(study: &[(usize, f64)]) -> String {
    let mut csv = String::from("# columns: n_steps, residual\n");
    let _ = writeln!(csv, "n,residual");
    for (n, residual) in study {
        let _ = writeln!(csv, "{},{}", n, residual);
    }
    csv
}

/// Emit plot data without running a full suite.
pub fn emit_plot_data(kind: &str, config: &ExperimentConfig) -> Result<Vec<Artifact>, CliError> {
    match kind {
        "field-graph" => {
            let grid = config.grid();
            Ok(vec![
                Artifact {
                    name: "field_graph_v1.csv".into(),
                    contents: field_graph_csv(field_v1, &grid),
                },
                Artifact {
                    name: "field_graph_v2.csv".into(),
                    contents: field_graph_csv(field_v2, &grid),
                },
            ])
        }
        "integral-curves" => Ok(vec![
            Artifact {
                name: "integral_curves_v1.csv".into(),
                contents: integral_curves_csv(field_v1, config),
            },
            Artifact {
                name: "integral_curves_v2.csv".into(),
                contents: integral_curves_csv(field_v2, config),
            },
        ]),
        "convergence" => {
            let i = Complex64::new(0.0, 1.0);
            let sigma3 = GaugeAlgebraElement::from_skew(cstar_lab::algebra::pauli(3).scaled(i));
            let sigma1 = GaugeAlgebraElement::from_skew(cstar_lab::algebra::pauli(1).scaled(i));
            let mut rng = StdRng::seed_from_u64(config.seed ^ 0x5151);
            let samples = unit_samples(&mut rng, 2, 6);
            let study =
                tilde_convergence_study(&sigma3, &sigma1, 1.0, &[512, 1024, 2048, 4096], &samples);
            Ok(vec![Artifact {
                name: "tilde_convergence.csv".into(),
                contents: convergence_csv(&study),
            }])
        }
        other => Err(CliError::UnknownPlotKind(other.to_string())),
    }
}

/// Parsed command line.
#[derive(Debug, Clone)]
pub struct Invocation {
    pub command: Command,
    pub config_path: Option<PathBuf>,
    pub out_dir: PathBuf,
    pub parallel: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Command {
    Suite(String),
    Plot(String),
}

pub const USAGE: &str = "usage: cstar-lab <suite> [--config <path>] [--out <dir>] [--parallel]
       cstar-lab plot <kind> [--config <path>] [--out <dir>]

suites: algebra-laws, semigroup-laws, nonconvexity, tilde-formula,
        commutator-lemma, representation-fields, cone-bundle
plot kinds: field-graph, integral-curves, convergence

The CSTAR_LAB_OUT environment variable overrides --out.";

pub fn parse_args(args: &[String]) -> Result<Invocation, CliError> {
    let mut positional = Vec::new();
    let mut config_path = None;
    let mut out_dir = PathBuf::from(".");
    let mut parallel = false;
    let mut iter = args.iter();
    while let Some(arg) = iter.next() {
        match arg.as_str() {
            "--config" => {
                let value = iter
                    .next()
                    .ok_or_else(|| CliError::Usage("--config needs a path".into()))?;
                config_path = Some(PathBuf::from(value));
            }
            "--out" => {
                let value = iter
                    .next()
                    .ok_or_else(|| CliError::Usage("--out needs a directory".into()))?;
                out_dir = PathBuf::from(value);
            }
            "--parallel" => parallel = true,
            "--help" | "-h" => return Err(CliError::Usage(USAGE.to_string())),
            other if other.starts_with("--") => {
                return Err(CliError::Usage(format!("unknown flag {other}\n{USAGE}")));
            }
            other => positional.push(other.to_string()),
        }
    }
    if let Ok(dir) = std::env::var(OUT_DIR_ENV) {
        if !dir.is_empty() {
            out_dir = PathBuf::from(dir);
        }
    }
    let command = match positional.as_slice() {
        [suite] if SUITES.contains(&suite.as_str()) => Command::Suite(suite.clone()),
        [plot, kind] if plot == "plot" => {
            if PLOT_KINDS.contains(&kind.as_str()) {
                Command::Plot(kind.clone())
            } else {
                return Err(CliError::UnknownPlotKind(kind.clone()));
            }
        }
        [unknown] => return Err(CliError::UnknownSuite(unknown.clone())),
        _ => return Err(CliError::Usage(USAGE.to_string())),
    };
    Ok(Invocation {
        command,
        config_path,
        out_dir,
        parallel,
    })
}

/// Execute a parsed invocation: run, then write the report and artifacts.
/// Returns the process exit code (0 all checks pass, 1 some check failed).
pub fn execute(invocation: &Invocation) -> Result<u8, CliError> {
    let mut config = match &invocation.config_path {
        Some(path) => ExperimentConfig::from_file(path)?,
        None => ExperimentConfig::default(),
    };
    config.parallel = config.parallel || invocation.parallel;

    match &invocation.command {
        Command::Suite(suite) => {
            let run = run_suite(suite, &config)?;
            std::fs::create_dir_all(&invocation.out_dir)?;
            let report_path = invocation.out_dir.join(format!("{suite}.json"));
            std::fs::write(&report_path, run.report.to_json())?;
            for artifact in &run.artifacts {
                std::fs::write(invocation.out_dir.join(&artifact.name), &artifact.contents)?;
            }
            for check in &run.report.checks {
                println!(
                    "{} {}: residual {:.3e} vs tolerance {:.3e}",
                    if check.pass { "PASS" } else { "FAIL" },
                    check.name,
                    check.max_residual,
                    check.tolerance
                );
            }
            println!(
                "{}: report written to {}",
                if run.report.all_pass() { "ok" } else { "FAILED" },
                report_path.display()
            );
            Ok(if run.report.all_pass() { 0 } else { 1 })
        }
        Command::Plot(kind) => {
            let artifacts = emit_plot_data(kind, &config)?;
            std::fs::create_dir_all(&invocation.out_dir)?;
            for artifact in &artifacts {
                let path = invocation.out_dir.join(&artifact.name);
                std::fs::write(&path, &artifact.contents)?;
                println!("wrote {}", path.display());
            }
            Ok(0)
        }
    }
}
