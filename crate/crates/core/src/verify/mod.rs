//! Randomized property suites, deterministic under a seed.
//!
//! Trial `i` of a suite draws everything from its own generator seeded by
//! `trial_seed(seed, suite, i)`, so any failure is reproduced by its seed. A
//! failing trial is re-run at smaller degree bounds and the smallest failing
//! bound is reported.

mod trials;

use std::time::{Duration, Instant};

use serde_json::{json, Value};
use thiserror::Error;

use crate::polymap::separating_scalars;
use crate::random::{rng, trial_seed, TestRng};
use crate::scalars::Ring;
use crate::weil::WeilAlgebra;

pub use trials::*;

pub const SUITES: [&str; 9] = [
    "weil-laws",
    "ktheory",
    "taylor-chain",
    "jets-vs-oracle",
    "difference-functoriality",
    "embedding-sign",
    "graded-star",
    "separation",
    "naturality",
];

/// Highest order used by the difference-calculus suites.
const MAX_DIFF_ORDER: usize = 3;
const CALIBRATION_SAMPLES: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("unknown suite {0:?}; expected one of {}", SUITES.join(", "))]
    UnknownSuite(String),
}

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub ring: Ring,
    pub trials: usize,
    pub seed: u64,
    pub max_degree: u32,
    pub vars: usize,
}

impl Default for VerifyConfig {
    fn default() -> VerifyConfig {
        VerifyConfig { ring: Ring::Rationals, trials: 20, seed: 0, max_degree: 4, vars: 2 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialFailure {
    /// `trial <i>`, or the name of a fixed check run before the trials.
    pub label: String,
    pub seed: u64,
    /// Smallest degree bound at which the trial still fails.
    pub max_degree: u32,
    pub failure: Failure,
}

#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub suite: String,
    pub ring: Ring,
    pub seed: u64,
    pub trials: usize,
    pub passed: usize,
    pub skipped: usize,
    pub failures: Vec<TrialFailure>,
    pub skip_reason: Option<String>,
    pub elapsed: Duration,
}

impl VerifyReport {
    pub fn status(&self) -> Status {
        if !self.failures.is_empty() {
            Status::Fail
        } else if self.skip_reason.is_some() || (self.passed == 0 && self.skipped > 0) {
            Status::Skip
        } else {
            Status::Pass
        }
    }

    /// The report as JSON; `elapsed_ms` is included only with `timing`.
    pub fn to_json(&self, timing: bool) -> Value {
        let failures: Vec<Value> = self
            .failures
            .iter()
            .map(|f| {
                json!({
                    "label": f.label,
                    "seed": f.seed,
                    "max_degree": f.max_degree,
                    "inputs": f.failure.inputs,
                    "expected": f.failure.expected,
                    "actual": f.failure.actual,
                })
            })
            .collect();
        let mut v = json!({
            "suite": self.suite,
            "ring": self.ring.to_string(),
            "seed": self.seed,
            "status": self.status().as_str(),
            "trials": self.trials,
            "passed": self.passed,
            "skipped": self.skipped,
            "skip_reason": self.skip_reason,
            "failures": failures,
        });
        if timing {
            v["elapsed_ms"] = json!(self.elapsed.as_secs_f64() * 1e3);
        }
        v
    }
}

struct Ctx {
    ring: Ring,
    vars: usize,
    max_degree: u32,
    diff_order: usize,
    law_algebras: Vec<WeilAlgebra>,
    graded: Vec<WeilAlgebra>,
    nesting: Vec<(WeilAlgebra, WeilAlgebra)>,
}

impl Ctx {
    fn new(cfg: &VerifyConfig) -> Ctx {
        let ring = cfg.ring.clone();
        let (j1, j2, t1) = (WeilAlgebra::jet(&ring, 1), WeilAlgebra::jet(&ring, 2), WeilAlgebra::tangent(&ring, 1));
        let nesting = vec![(j1.clone(), j1.clone()), (j1.clone(), t1.clone()), (j2.clone(), j1), (j2, t1)];
        Ctx {
            vars: cfg.vars.max(1),
            max_degree: cfg.max_degree.max(1),
            diff_order: max_nonsingular_order(&ring, MAX_DIFF_ORDER),
            law_algebras: law_algebras(&ring),
            graded: graded_algebras(&ring),
            nesting,
            ring,
        }
    }

    fn with_degree(&self, max_degree: u32) -> Ctx {
        Ctx {
            ring: self.ring.clone(),
            vars: self.vars,
            max_degree,
            diff_order: self.diff_order,
            law_algebras: self.law_algebras.clone(),
            graded: self.graded.clone(),
            nesting: self.nesting.clone(),
        }
    }

    /// Order of trial `i` in a difference-calculus suite, cycling through `1..=diff_order`.
    fn order(&self, i: usize) -> usize {
        1 + i % self.diff_order
    }
}

fn precondition(suite: &str, ctx: &Ctx) -> Option<String> {
    match suite {
        "separation" => separating_scalars(&ctx.ring, ctx.max_degree).err().map(|e| e.to_string()),
        "jets-vs-oracle" | "difference-functoriality" | "embedding-sign" if ctx.diff_order == 0 => {
            Some(format!("{} has no nonsingular times", ctx.ring))
        }
        _ => None,
    }
}

/// Fixed checks that run once before the randomized trials.
fn fixed_checks(suite: &str, ctx: &Ctx, seed: u64) -> Vec<(String, u64, Outcome)> {
    match suite {
        "weil-laws" => ctx.law_algebras.iter().map(|a| (format!("validate {a}"), seed, validation_check(a))).collect(),
        "graded-star" => {
            vec![("left distributivity counterexample".into(), seed, left_distributivity_counterexample(&ctx.ring))]
        }
        "embedding-sign" => (1..=ctx.diff_order)
            .map(|k| {
                let s = trial_seed(seed, "embedding-calibration", k);
                let o = embedding_calibration(&mut rng(s), &ctx.ring, ctx.vars, ctx.max_degree, k, CALIBRATION_SAMPLES);
                (format!("calibration at order {k}"), s, o)
            })
            .collect(),
        _ => Vec::new(),
    }
}

fn run_trial(suite: &str, ctx: &Ctx, rng: &mut TestRng, i: usize) -> Outcome {
    let (ring, m, d) = (&ctx.ring, ctx.vars, ctx.max_degree);
    match suite {
        "weil-laws" => weil_laws_trial(rng, &ctx.law_algebras[i % ctx.law_algebras.len()]),
        "ktheory" => {
            let (a, b) = &ctx.nesting[i % ctx.nesting.len()];
            all([nesting_trial(rng, ring, a, b, m), whitney_trial(rng, ring, a, b, m)])
        }
        "taylor-chain" => {
            let k = 1 + (i % 3) as u32;
            all([taylor_chain_trial(rng, ring, m, d, k, false), taylor_chain_trial(rng, ring, m, d, k, true)])
        }
        "jets-vs-oracle" => {
            let k = ctx.order(i);
            all([
                oracle_triangle(rng, ring, m, d, k),
                radial_trial(rng, ring, m, d, k as u32),
                jet_functoriality(rng, ring, m, d, k, i % 2 == 1),
            ])
        }
        "difference-functoriality" => {
            let k = ctx.order(i);
            all([difference_trial(rng, ring, m, d, k, false), difference_trial(rng, ring, m, d, k, true)])
        }
        "embedding-sign" => {
            let k = ctx.order(i);
            all([embedding_trial(rng, ring, m, d, k, false), embedding_trial(rng, ring, m, d, k, true)])
        }
        "graded-star" => {
            let alg = &ctx.graded[i % ctx.graded.len()];
            all([star_trial(rng, alg), endo_trial(rng, alg), star_inverse_trial(rng, alg)])
        }
        "separation" => separation_trial(rng, ring, m, d),
        "naturality" => all([naturality_trial(rng, ring, m, d, false), naturality_trial(rng, ring, m, d, true)]),
        _ => unreachable!("suite names are checked before running"),
    }
}

/// Re-runs a failing trial at smaller degree bounds; returns the smallest failing one.
fn minimize(suite: &str, ctx: &Ctx, seed: u64, i: usize, failure: Failure) -> (u32, Failure) {
    for d in 1..ctx.max_degree {
        if let Outcome::Fail(f) = run_trial(suite, &ctx.with_degree(d), &mut rng(seed), i) {
            return (d, f);
        }
    }
    (ctx.max_degree, failure)
}

pub fn run_suite(suite: &str, cfg: &VerifyConfig) -> Result<VerifyReport, VerifyError> {
    if !SUITES.contains(&suite) {
        return Err(VerifyError::UnknownSuite(suite.to_string()));
    }
    let start = Instant::now();
    let ctx = Ctx::new(cfg);
    let mut report = VerifyReport {
        suite: suite.to_string(),
        ring: cfg.ring.clone(),
        seed: cfg.seed,
        trials: cfg.trials,
        passed: 0,
        skipped: 0,
        failures: Vec::new(),
        skip_reason: precondition(suite, &ctx),
        elapsed: Duration::ZERO,
    };
    if report.skip_reason.is_none() {
        for (label, seed, outcome) in fixed_checks(suite, &ctx, cfg.seed) {
            if let Outcome::Fail(failure) = outcome {
                report.failures.push(TrialFailure { label, seed, max_degree: ctx.max_degree, failure });
            }
        }
        for i in 0..cfg.trials {
            let seed = trial_seed(cfg.seed, suite, i);
            match run_trial(suite, &ctx, &mut rng(seed), i) {
                Outcome::Pass => report.passed += 1,
                Outcome::Skip(_) => report.skipped += 1,
                Outcome::Fail(failure) => {
                    let (max_degree, failure) = minimize(suite, &ctx, seed, i, failure);
                    report.failures.push(TrialFailure { label: format!("trial {i}"), seed, max_degree, failure });
                }
            }
        }
    }
    report.elapsed = start.elapsed();
    Ok(report)
}

/// Runs `all` or a single suite.
pub fn run(name: &str, cfg: &VerifyConfig) -> Result<Vec<VerifyReport>, VerifyError> {
    if name == "all" {
        SUITES.iter().map(|s| run_suite(s, cfg)).collect()
    } else {
        Ok(vec![run_suite(name, cfg)?])
    }
}
