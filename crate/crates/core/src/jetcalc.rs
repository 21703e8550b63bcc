//! Taylor polynomials, normalized differentials and simplicial jets, all
//! extracted by evaluating over truncated polynomial algebras.

use serde_json::{json, Value};

use crate::algebra::{AlgebraicMap, EvalError, KAlgebra};
use crate::polymap::{Poly, PolyMap, PolyRing};
use crate::scalars::{Ring, Scalar, ScalarError};
use crate::smoothexpr::{ExprError, ExprMap};
use crate::weil::{presentation::degree, Tower, WeilAlgebra, WeilElement};

/// `Tay^k_x f`: a polynomial map in displacement variables with no constant term.
#[derive(Debug, Clone, PartialEq)]
pub struct TaylorPoly {
    base_point: Vec<Scalar>,
    order: u32,
    poly: PolyMap,
}

impl TaylorPoly {
    pub fn base_point(&self) -> &[Scalar] {
        &self.base_point
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn poly(&self) -> &PolyMap {
        &self.poly
    }

    /// The degree-`i` homogeneous part `h ↦ D^i_h f(x)`.
    pub fn part(&self, i: u32) -> PolyMap {
        let outputs = self.poly.outputs().iter().map(|p| p.homogeneous_part(i)).collect();
        PolyMap::new(self.poly.ring(), self.poly.arity(), outputs).expect("same shape")
    }

    pub fn to_json(&self) -> Value {
        let mut v = self.poly.to_json();
        v["base_point"] = Value::Array(self.base_point.iter().map(Scalar::to_json).collect());
        v["order"] = json!(self.order);
        v
    }
}

/// Components `(w_0, …, w_k)` of a simplicial jet, each a point of `K^w`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JetValue {
    pub components: Vec<Vec<Scalar>>,
}

impl JetValue {
    pub fn order(&self) -> usize {
        self.components.len() - 1
    }

    pub fn to_json(&self) -> Value {
        let comps: Vec<Value> =
            self.components.iter().map(|c| Value::Array(c.iter().map(Scalar::to_json).collect())).collect();
        json!({ "order": self.order(), "components": comps })
    }
}

/// `f(x + tv) = f(x) + Σ_{i≤k} a_i t^i + t^k R(t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialExpansion {
    pub value: Vec<Scalar>,
    pub coeffs: Vec<Vec<Scalar>>,
    /// One univariate polynomial in `t` per output.
    pub remainder: Vec<Poly>,
}

impl RadialExpansion {
    pub fn remainder_at(&self, t: &Scalar) -> Vec<Scalar> {
        self.remainder.iter().map(|p| p.eval_in(&t.ring(), std::slice::from_ref(t))).collect()
    }

    pub fn remainder_vanishes_at_zero(&self) -> bool {
        self.remainder.iter().all(|p| p.constant_term().is_none())
    }

    /// Reassembles `f(x + tv)` from the expansion.
    pub fn recombine(&self, t: &Scalar) -> Vec<Scalar> {
        let k = self.coeffs.len() as u32;
        let rem = self.remainder_at(t);
        (0..self.value.len())
            .map(|o| {
                let mut acc = self.value[o].clone();
                for (i, a) in self.coeffs.iter().enumerate() {
                    acc = &acc + &(&t.pow(i as u32 + 1) * &a[o]);
                }
                &acc + &(&t.pow(k) * &rem[o])
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FactorialReport {
    /// `D^j_v f(x)`.
    pub normalized: Vec<Scalar>,
    /// `d^j f(x)(v, …, v) / j!`.
    pub classical: Vec<Scalar>,
}

impl FactorialReport {
    pub fn equal(&self) -> bool {
        self.normalized == self.classical
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainReport {
    pub composite: PolyMap,
    pub composed: PolyMap,
}

impl ChainReport {
    pub fn equal(&self) -> bool {
        self.composite == self.composed
    }
}

fn check_point(f: &ExprMap, ring: &Ring, x: &[Scalar]) -> Result<(), ExprError> {
    if x.len() != f.arity() {
        return Err(EvalError::ArityMismatch { expected: f.arity(), got: x.len() }.into());
    }
    if x.iter().any(|s| &s.ring() != ring) {
        return Err(EvalError::AlgebraMismatch.into());
    }
    Ok(())
}

/// Evaluates over `truncated(m, k)` at `x + Σ X_i e_i`.
pub fn taylor(f: &ExprMap, ring: &Ring, x: &[Scalar], k: u32) -> Result<TaylorPoly, ExprError> {
    check_point(f, ring, x)?;
    let m = f.arity();
    let alg = WeilAlgebra::truncated(ring, m, k);
    let args: Vec<WeilElement> = (0..m).map(|i| alg.add(&alg.embed(&x[i]), &alg.variable(i))).collect();
    let out = f.eval_in(&alg, &args)?;
    let basis = alg.presentation().expect("monomial presentation").basis();
    let outputs = out
        .iter()
        .map(|e| {
            Poly::from_terms(
                m,
                basis.iter().zip(e.coeffs()).filter(|(b, _)| degree(b) > 0).map(|(b, c)| (b.clone(), c.clone())),
            )
        })
        .collect();
    Ok(TaylorPoly { base_point: x.to_vec(), order: k, poly: PolyMap::new(ring, m, outputs)? })
}

/// Exact expansion of `f(x + tv)` in `t` for polynomial `f`.
pub fn radial_expansion(
    f: &ExprMap,
    ring: &Ring,
    x: &[Scalar],
    v: &[Scalar],
    k: u32,
) -> Result<RadialExpansion, ExprError> {
    check_point(f, ring, x)?;
    check_point(f, ring, v)?;
    if !f.is_polynomial() {
        return Err(ExprError::NotPolynomial(f.to_string()));
    }
    let pr = PolyRing::new(ring, 1, None);
    let t = pr.var(0);
    let args: Vec<Poly> = x.iter().zip(v).map(|(xi, vi)| pr.add(&pr.embed(xi), &pr.scale(vi, &t))).collect();
    let out = f.eval_in(&pr, &args)?;
    let coeff = |p: &Poly, i: u32| p.coeff(&[i]).cloned().unwrap_or_else(|| ring.zero());
    let value = out.iter().map(|p| coeff(p, 0)).collect();
    let coeffs = (1..=k).map(|i| out.iter().map(|p| coeff(p, i)).collect()).collect();
    let remainder = out
        .iter()
        .map(|p| Poly::from_terms(1, p.terms().iter().filter(|(e, _)| e[0] > k).map(|(e, c)| (vec![e[0] - k], c.clone()))))
        .collect();
    let exp = RadialExpansion { value, coeffs, remainder };
    assert!(exp.remainder_vanishes_at_zero());
    Ok(exp)
}

/// `D^α_v f(x)`, one fresh jet variable per nonzero `α_i`.
pub fn normalized_diff(
    f: &ExprMap,
    ring: &Ring,
    x: &[Scalar],
    vs: &[Vec<Scalar>],
    alpha: &[u32],
) -> Result<Vec<Scalar>, ExprError> {
    let order: Vec<usize> = (0..alpha.len()).collect();
    normalized_diff_ordered(f, ring, x, vs, alpha, &order)
}

/// As [`normalized_diff`], applying the steps in the given order of indices.
pub fn normalized_diff_ordered(
    f: &ExprMap,
    ring: &Ring,
    x: &[Scalar],
    vs: &[Vec<Scalar>],
    alpha: &[u32],
    order: &[usize],
) -> Result<Vec<Scalar>, ExprError> {
    check_point(f, ring, x)?;
    if vs.len() != alpha.len() {
        return Err(EvalError::ArityMismatch { expected: alpha.len(), got: vs.len() }.into());
    }
    for v in vs {
        check_point(f, ring, v)?;
    }
    let mut sorted = order.to_vec();
    sorted.sort_unstable();
    if sorted != (0..alpha.len()).collect::<Vec<_>>() {
        return Err(ExprError::Eval(EvalError::ArityMismatch { expected: alpha.len(), got: order.len() }));
    }
    let steps: Vec<usize> = order.iter().copied().filter(|&i| alpha[i] > 0).collect();
    if steps.is_empty() {
        return Ok(f.eval_scalars(ring, x)?);
    }
    let levels = steps.iter().map(|&i| WeilAlgebra::jet(ring, alpha[i])).collect();
    let tower = Tower::new(ring, levels)?;
    let deltas = steps
        .iter()
        .enumerate()
        .map(|(d, _)| tower.lift(d + 1, &tower.levels()[d].basis_element(1)))
        .collect::<Result<Vec<_>, _>>()?;
    let args: Vec<_> = (0..f.arity())
        .map(|c| {
            steps.iter().zip(&deltas).fold(tower.embed(&x[c]), |acc, (&i, d)| tower.add(&acc, &tower.scale(&vs[i][c], d)))
        })
        .collect();
    let out = f.eval_in(&tower, &args)?;
    let indices: Vec<usize> = steps.iter().rev().map(|&i| alpha[i] as usize).collect();
    Ok(out.iter().map(|e| e.coefficient(&indices).clone()).collect())
}

/// Evaluates over `jet(k)` at `v_0 + δ v_1 + … + δ^k v_k`.
pub fn simplicial_jet(f: &ExprMap, ring: &Ring, vs: &[Vec<Scalar>]) -> Result<JetValue, ExprError> {
    let k = vs.len().checked_sub(1).ok_or(EvalError::ArityMismatch { expected: 1, got: 0 })?;
    for v in vs {
        check_point(f, ring, v)?;
    }
    let alg = WeilAlgebra::jet(ring, k as u32);
    let args: Vec<WeilElement> = (0..f.arity())
        .map(|c| {
            let coeffs = vs.iter().map(|v| v[c].clone()).collect();
            alg.element(coeffs).expect("jet dimension")
        })
        .collect();
    let out = f.eval_in(&alg, &args)?;
    let components = (0..=k).map(|l| out.iter().map(|e| e.coeffs()[l].clone()).collect()).collect();
    Ok(JetValue { components })
}

/// Components `1..=k` of `J^k_x f` computed from the Taylor polynomial, checked
/// against direct evaluation over `jet(k)`.
pub fn jet_from_taylor(f: &ExprMap, ring: &Ring, x: &[Scalar], vs: &[Vec<Scalar>]) -> Result<Vec<Vec<Scalar>>, ExprError> {
    let k = vs.len();
    let tay = taylor(f, ring, x, k as u32)?;
    for v in vs {
        check_point(f, ring, v)?;
    }
    let alg = WeilAlgebra::jet(ring, k as u32);
    let args: Vec<WeilElement> = (0..f.arity())
        .map(|c| {
            let coeffs = std::iter::once(ring.zero()).chain(vs.iter().map(|v| v[c].clone())).collect();
            alg.element(coeffs).expect("jet dimension")
        })
        .collect();
    let out = tay.poly().eval_over(&alg, &args)?;
    let fiber: Vec<Vec<Scalar>> = (1..=k).map(|l| out.iter().map(|e| e.coeffs()[l].clone()).collect()).collect();
    let mut full = vec![x.to_vec()];
    full.extend(vs.iter().cloned());
    let direct = simplicial_jet(f, ring, &full)?;
    if direct.components[1..] != fiber[..] {
        return Err(ExprError::PathMismatch(format!("Taylor jet {fiber:?} != direct jet {:?}", &direct.components[1..])));
    }
    Ok(fiber)
}

/// All `α ∈ ℕ^k` with `Σ_i i·α_i = j` (indices counted from 1).
pub fn weighted_multi_indices(k: usize, j: u32) -> Vec<Vec<u32>> {
    fn go(i: usize, k: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == k {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let w = i as u32 + 1;
        for a in 0..=left / w {
            cur.push(a);
            go(i + 1, k, left - a * w, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, k, j, &mut Vec::new(), &mut out);
    out
}

/// `Σ_{Σ iα_i = j} D^α_v f(x)`.
pub fn taylor_eqn_rhs(
    f: &ExprMap,
    ring: &Ring,
    x: &[Scalar],
    vs: &[Vec<Scalar>],
    j: u32,
) -> Result<Vec<Scalar>, ExprError> {
    let mut acc = vec![ring.zero(); f.coarity()];
    for alpha in weighted_multi_indices(vs.len(), j) {
        let d = normalized_diff(f, ring, x, vs, &alpha)?;
        acc = acc.iter().zip(&d).map(|(a, b)| a + b).collect();
    }
    Ok(acc)
}

/// Compares `D^j_v f(x)` with `d^j f(x)(v, …, v) / j!`; requires `j!` to be a unit.
pub fn factorial_check(
    f: &ExprMap,
    ring: &Ring,
    x: &[Scalar],
    v: &[Scalar],
    j: u32,
) -> Result<FactorialReport, ExprError> {
    let fact = (1..=j as i64).fold(ring.one(), |acc, i| &acc * &ring.from_i64(i));
    let inv = fact.inv().map_err(|_| ScalarError::NotAUnit(format!("{j}!"), ring.clone()))?;
    let normalized = normalized_diff(f, ring, x, &[v.to_vec()], &[j])?;
    let classical_raw = normalized_diff(f, ring, x, &vec![v.to_vec(); j as usize], &vec![1; j as usize])?;
    let classical = classical_raw.iter().map(|c| c * &inv).collect();
    Ok(FactorialReport { normalized, classical })
}

/// `Tay^k_x(g ∘ h)` against `Tay^k_{h(x)} g ∘ Tay^k_x h` truncated at `k`.
pub fn taylor_chain(g: &ExprMap, h: &ExprMap, ring: &Ring, x: &[Scalar], k: u32) -> Result<ChainReport, ExprError> {
    let gh = g.compose(h)?;
    let composite = taylor(&gh, ring, x, k)?.poly;
    let hx = h.eval_scalars(ring, x)?;
    let tg = taylor(g, ring, &hx, k)?;
    let th = taylor(h, ring, x, k)?;
    let composed = tg.poly.truncated_compose(&th.poly, k)?;
    Ok(ChainReport { composite, composed })
}
