//! Timing of extension over jet algebras against iterated tangent algebras.

use std::ops::RangeInclusive;
use std::time::Instant;

use serde_json::{json, Value};

use crate::algebra::{AlgebraicMap, KAlgebra};
use crate::scalars::{Ring, Scalar};
use crate::smoothexpr::{ExprError, ExprMap};
use crate::weil::{Tower, WeilAlgebra, WeilElement};

pub const CSV_HEADER: &str = "k,dim,mode,ns_per_eval";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BenchMode {
    Jet,
    Tangent,
    Both,
}

impl BenchMode {
    pub fn parse(s: &str) -> Option<BenchMode> {
        match s {
            "jet" => Some(BenchMode::Jet),
            "tangent" => Some(BenchMode::Tangent),
            "both" => Some(BenchMode::Both),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub k: u32,
    pub dim: usize,
    pub mode: &'static str,
    pub ns_per_eval: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NestingRow {
    pub k: u32,
    pub dim: usize,
    pub nested_ns: f64,
    pub direct_ns: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    pub point: Vec<Scalar>,
    pub rows: Vec<BenchRow>,
    pub nesting: Vec<NestingRow>,
}

impl BenchReport {
    /// `tangent / jet` time per order, for orders measured in both modes.
    pub fn ratios(&self) -> Vec<(u32, f64)> {
        self.rows
            .iter()
            .filter(|r| r.mode == "jet")
            .filter_map(|j| {
                let t = self.rows.iter().find(|r| r.mode == "tangent" && r.k == j.k)?;
                Some((j.k, t.ns_per_eval / j.ns_per_eval))
            })
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            out.push_str(&format!("{},{},{},{:.1}\n", r.k, r.dim, r.mode, r.ns_per_eval));
        }
        for n in &self.nesting {
            out.push_str(&format!("{},{},nested,{:.1}\n", n.k, n.dim, n.nested_ns));
            out.push_str(&format!("{},{},direct,{:.1}\n", n.k, n.dim, n.direct_ns));
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| json!({ "k": r.k, "dim": r.dim, "mode": r.mode, "ns_per_eval": r.ns_per_eval }))
            .collect();
        let ratios: Vec<Value> = self.ratios().iter().map(|(k, r)| json!({ "k": k, "tangent_over_jet": r })).collect();
        let nesting: Vec<Value> = self
            .nesting
            .iter()
            .map(|n| json!({ "k": n.k, "dim": n.dim, "nested_ns": n.nested_ns, "direct_ns": n.direct_ns, "agree": true }))
            .collect();
        let point: Vec<Value> = self.point.iter().map(Scalar::to_json).collect();
        json!({ "point": point, "rows": rows, "ratios": ratios, "nesting": nesting })
    }
}

/// The first point of a small integer scan at which `f` is defined.
pub fn domain_point(f: &ExprMap, ring: &Ring) -> Result<Vec<Scalar>, ExprError> {
    let m = f.arity();
    let mut last = None;
    for n in 0..64i64 {
        let x: Vec<Scalar> = (0..m).map(|i| ring.from_i64(n + i as i64)).collect();
        match f.eval_scalars(ring, &x) {
            Ok(_) => return Ok(x),
            Err(e) => last = Some(e),
        }
    }
    Err(last.map_or_else(|| ExprError::PathMismatch("empty scan".into()), ExprError::from))
}

fn time_per_eval(repeat: usize, mut f: impl FnMut()) -> f64 {
    let repeat = repeat.max(1);
    let start = Instant::now();
    for _ in 0..repeat {
        f();
    }
    start.elapsed().as_nanos() as f64 / repeat as f64
}

/// Times `f` at `x + Σ generators` over `alg`.
fn time_over(f: &ExprMap, alg: &WeilAlgebra, x: &[Scalar], repeat: usize) -> Result<f64, ExprError> {
    let nvars = alg.presentation().map_or(1, |p| p.nvars());
    let nu = (0..nvars).fold(alg.zero(), |acc, v| alg.add(&acc, &alg.variable(v)));
    let args: Vec<WeilElement> = x.iter().map(|xi| alg.add(&alg.embed(xi), &nu)).collect();
    f.eval_in(alg, &args)?;
    Ok(time_per_eval(repeat, || {
        let _ = f.eval_in(alg, &args);
    }))
}

/// Nested evaluation over `k` copies of `jet(1)` against `jet(1)^{⊗k}`; errors
/// if the two disagree.
fn nesting_row(f: &ExprMap, ring: &Ring, x: &[Scalar], k: u32, repeat: usize) -> Result<NestingRow, ExprError> {
    let j1 = WeilAlgebra::jet(ring, 1);
    let mut direct_alg = j1.clone();
    for _ in 1..k {
        direct_alg = WeilAlgebra::tensor(&direct_alg, &j1)?;
    }
    let tower = Tower::new(ring, vec![j1.clone(); k as usize])?;
    let delta = j1.variable(0);
    let nu_nested = (1..=k as usize)
        .map(|d| tower.lift(d, &delta))
        .try_fold(tower.zero(), |acc, e| e.map(|e| tower.add(&acc, &e)))?;
    let nested_args: Vec<_> = x.iter().map(|xi| tower.add(&tower.embed(xi), &nu_nested)).collect();
    let direct_args = nested_args.iter().map(|a| tower.to_tensor(a, &direct_alg)).collect::<Result<Vec<_>, _>>()?;
    let nested = f.eval_in(&tower, &nested_args)?;
    let direct = f.eval_in(&direct_alg, &direct_args)?;
    let flattened = nested.iter().map(|n| tower.to_tensor(n, &direct_alg)).collect::<Result<Vec<_>, _>>()?;
    if flattened != direct {
        return Err(ExprError::PathMismatch(format!("nested and direct evaluation differ at order {k}")));
    }
    let nested_ns = time_per_eval(repeat, || {
        let _ = f.eval_in(&tower, &nested_args);
    });
    let direct_ns = time_per_eval(repeat, || {
        let _ = f.eval_in(&direct_alg, &direct_args);
    });
    Ok(NestingRow { k, dim: direct_alg.dim(), nested_ns, direct_ns })
}

pub fn bench(
    f: &ExprMap,
    ring: &Ring,
    mode: BenchMode,
    orders: RangeInclusive<u32>,
    repeat: usize,
) -> Result<BenchReport, ExprError> {
    let x = domain_point(f, ring)?;
    let mut rows = Vec::new();
    let mut nesting = Vec::new();
    for k in orders {
        if matches!(mode, BenchMode::Jet | BenchMode::Both) {
            let alg = WeilAlgebra::jet(ring, k);
            rows.push(BenchRow { k, dim: alg.dim(), mode: "jet", ns_per_eval: time_over(f, &alg, &x, repeat)? });
        }
        if matches!(mode, BenchMode::Tangent | BenchMode::Both) {
            let alg = WeilAlgebra::tangent(ring, k);
            rows.push(BenchRow { k, dim: alg.dim(), mode: "tangent", ns_per_eval: time_over(f, &alg, &x, repeat)? });
        }
        if k >= 1 {
            nesting.push(nesting_row(f, ring, &x, k, repeat)?);
        }
    }
    Ok(BenchReport { point: x, rows, nesting })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimensions_and_gate() {
        let f = ExprMap::parse("1/(1 + x0^2)").unwrap();
        let r = Ring::Rationals;
        let rep = bench(&f, &r, BenchMode::Both, 1..=3, 2).unwrap();
        let dims: Vec<(u32, usize, &str)> = rep.rows.iter().map(|r| (r.k, r.dim, r.mode)).collect();
        assert_eq!(dims, vec![(1, 2, "jet"), (1, 2, "tangent"), (2, 3, "jet"), (2, 4, "tangent"), (3, 4, "jet"), (3, 8, "tangent")]);
        assert_eq!(rep.nesting.iter().map(|n| n.dim).collect::<Vec<_>>(), vec![2, 4, 8]);
        assert!(rep.to_csv().starts_with(CSV_HEADER));
        assert_eq!(rep.ratios().len(), 3);
    }

    #[test]
    fn domain_scan_avoids_poles() {
        let f = ExprMap::parse("1/x0").unwrap();
        assert_eq!(domain_point(&f, &Ring::Rationals).unwrap(), vec![Ring::Rationals.from_i64(1)]);
        assert!(domain_point(&ExprMap::parse("1/(x0 - x0)").unwrap(), &Ring::Rationals).is_err());
    }
}
