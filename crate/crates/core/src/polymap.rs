//! Sparse multivariate polynomials and polynomial maps `K^m -> K^w`.

use std::collections::BTreeMap;
use std::fmt;

use serde_json::{json, Value};
use thiserror::Error;

use crate::algebra::{AlgebraicMap, EvalError, KAlgebra};
use crate::scalars::{Ring, Scalar, ScalarError};
use crate::weil::presentation::{degree, Exponent};

/// A polynomial in a fixed number of variables. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Exponent, Scalar>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Poly {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Scalar) -> Poly {
        Poly::monomial(vec![0; nvars], c)
    }

    pub fn monomial(exps: Exponent, c: Scalar) -> Poly {
        let nvars = exps.len();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        Poly { nvars, terms }
    }

    pub fn var(ring: &Ring, nvars: usize, i: usize) -> Poly {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Poly::monomial(e, ring.one())
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Exponent, Scalar)>) -> Poly {
        let mut p = Poly::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent length");
            p.add_term(e, &c);
        }
        p
    }

    fn add_term(&mut self, e: Exponent, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Exponent, Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| degree(e)).max()
    }

    pub fn coeff(&self, e: &[u32]) -> Option<&Scalar> {
        self.terms.get(e)
    }

    pub fn constant_term(&self) -> Option<&Scalar> {
        self.terms.get(&vec![0; self.nvars])
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c);
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn scale(&self, t: &Scalar) -> Poly {
        if t.is_zero() {
            return Poly::zero(self.nvars);
        }
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), t * c)).filter(|(_, c)| !c.is_zero()).collect();
        Poly { nvars: self.nvars, terms }
    }

    /// Product, dropping monomials of total degree above `cap`.
    pub fn mul_capped(&self, other: &Poly, cap: Option<u32>) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            let de = degree(e);
            for (f, d) in &other.terms {
                if cap.is_some_and(|r| de + degree(f) > r) {
                    continue;
                }
                let g: Exponent = e.iter().zip(f).map(|(a, b)| a + b).collect();
                out.add_term(g, &(c * d));
            }
        }
        out
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        self.mul_capped(other, None)
    }

    pub fn truncate(&self, cap: u32) -> Poly {
        let terms = self.terms.iter().filter(|(e, _)| degree(e) <= cap).map(|(e, c)| (e.clone(), c.clone())).collect();
        Poly { nvars: self.nvars, terms }
    }

    /// The total-degree-`d` part.
    pub fn homogeneous_part(&self, d: u32) -> Poly {
        let terms = self.terms.iter().filter(|(e, _)| degree(e) == d).map(|(e, c)| (e.clone(), c.clone())).collect();
        Poly { nvars: self.nvars, terms }
    }

    /// Evaluates at a point of any `K`-algebra.
    pub fn eval_in<A: KAlgebra>(&self, alg: &A, args: &[A::Elem]) -> A::Elem {
        assert_eq!(args.len(), self.nvars, "argument count");
        let mut powers: Vec<Vec<A::Elem>> = args.iter().map(|a| vec![alg.one(), a.clone()]).collect();
        let mut acc = alg.zero();
        for (e, c) in &self.terms {
            let mut term = alg.embed(c);
            for (v, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                while powers[v].len() <= k as usize {
                    let next = alg.mul(powers[v].last().unwrap(), &args[v]);
                    powers[v].push(next);
                }
                term = alg.mul(&term, &powers[v][k as usize]);
            }
            acc = alg.add(&acc, &term);
        }
        acc
    }

    pub fn eval(&self, x: &[Scalar]) -> Scalar {
        let ring = x.first().map(Scalar::ring).or_else(|| self.terms.values().next().map(Scalar::ring));
        match ring {
            Some(r) => self.eval_in(&r, x),
            None => panic!("cannot infer the ring of a constant zero polynomial with no arguments"),
        }
    }

    /// Treats the polynomial as univariate in variable `v`: coefficient polynomials by power.
    pub fn coefficients_in(&self, v: usize) -> Vec<Poly> {
        let top = self.terms.keys().map(|e| e[v]).max().unwrap_or(0) as usize;
        let mut out = vec![Poly::zero(self.nvars); top + 1];
        for (e, c) in &self.terms {
            let mut f = e.clone();
            let k = f[v] as usize;
            f[v] = 0;
            out[k].add_term(f, c);
        }
        out
    }

    /// Drops to `nvars` variables by zero-padding or truncation (truncated variables must be unused).
    pub fn with_nvars(&self, nvars: usize) -> Poly {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut f = e.clone();
                if nvars < f.len() {
                    assert!(f[nvars..].iter().all(|&k| k == 0), "dropped variable is used");
                }
                f.resize(nvars, 0);
                (f, c.clone())
            })
            .collect();
        Poly { nvars, terms }
    }

    /// Writes the polynomial in the expression grammar, naming variables `{prefix}{i}`.
    pub fn to_text(&self, prefix: &str) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut sorted: Vec<(&Exponent, &Scalar)> = self.terms.iter().collect();
        sorted.sort_by(|a, b| crate::weil::presentation::basis_order(a.0, b.0));
        let parts: Vec<String> = sorted
            .into_iter()
            .map(|(e, c)| {
                let mut factors: Vec<String> = Vec::new();
                let coef = if c.is_negative_rational() { format!("({c})") } else { c.to_string() };
                if !c.is_one() || degree(e) == 0 {
                    factors.push(coef);
                }
                for (v, &k) in e.iter().enumerate() {
                    match k {
                        0 => {}
                        1 => factors.push(format!("{prefix}{v}")),
                        _ => factors.push(format!("{prefix}{v}^{k}")),
                    }
                }
                factors.join("*")
            })
            .collect();
        parts.join(" + ")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text("x"))
    }
}

/// Polynomials in `nvars` variables, optionally truncated above total degree `cap`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyRing {
    pub ring: Ring,
    pub nvars: usize,
    pub cap: Option<u32>,
}

impl PolyRing {
    pub fn new(ring: &Ring, nvars: usize, cap: Option<u32>) -> PolyRing {
        PolyRing { ring: ring.clone(), nvars, cap }
    }

    pub fn var(&self, i: usize) -> Poly {
        Poly::var(&self.ring, self.nvars, i)
    }
}

impl KAlgebra for PolyRing {
    type Elem = Poly;

    fn ring(&self) -> &Ring {
        &self.ring
    }
    fn zero(&self) -> Poly {
        Poly::zero(self.nvars)
    }
    fn one(&self) -> Poly {
        Poly::constant(self.nvars, self.ring.one())
    }
    fn embed(&self, t: &Scalar) -> Poly {
        Poly::constant(self.nvars, t.clone())
    }
    fn add(&self, a: &Poly, b: &Poly) -> Poly {
        a.add(b)
    }
    fn neg(&self, a: &Poly) -> Poly {
        a.neg()
    }
    fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        a.mul_capped(b, self.cap)
    }
    fn scale(&self, t: &Scalar, a: &Poly) -> Poly {
        a.scale(t)
    }
    fn is_zero(&self, a: &Poly) -> bool {
        a.is_zero()
    }

    /// Units are constants that are units, plus (when truncated) anything with a unit constant term.
    fn inv(&self, a: &Poly) -> Option<Poly> {
        let c = a.constant_term()?.clone();
        let c_inv = c.inv().ok()?;
        let n = a.sub(&self.embed(&c));
        if n.is_zero() {
            return Some(self.embed(&c_inv));
        }
        let cap = self.cap?;
        let m = n.scale(&-&c_inv);
        let mut term = self.one();
        let mut total = self.one();
        for _ in 0..cap {
            term = self.mul(&term, &m);
            total = total.add(&term);
        }
        Some(total.scale(&c_inv))
    }

    fn contains(&self, a: &Poly) -> bool {
        a.nvars == self.nvars
            && a.terms.values().all(|c| c.ring() == self.ring)
            && self.cap.map_or(true, |r| a.degree().unwrap_or(0) <= r)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("arity mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("no unit r with 1 - r^{exponent} a unit in {ring}; cannot separate homogeneous parts")]
    NoSeparatingScalars { ring: Ring, exponent: u32 },
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("malformed polynomial map: {0}")]
    Malformed(String),
}

/// A polynomial map `K^arity -> K^coarity`, one sparse polynomial per output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMap {
    ring: Ring,
    arity: usize,
    outputs: Vec<Poly>,
}

impl PolyMap {
    pub fn new(ring: &Ring, arity: usize, outputs: Vec<Poly>) -> Result<PolyMap, PolyError> {
        if let Some(p) = outputs.iter().find(|p| p.nvars != arity) {
            return Err(PolyError::ArityMismatch { expected: arity, got: p.nvars });
        }
        if outputs.iter().flat_map(|p| p.terms.values()).any(|c| &c.ring() != ring) {
            return Err(PolyError::Malformed(format!("coefficient outside {ring}")));
        }
        Ok(PolyMap { ring: ring.clone(), arity, outputs })
    }

    /// The identity map on `K^n`.
    pub fn identity(ring: &Ring, n: usize) -> PolyMap {
        PolyMap { ring: ring.clone(), arity: n, outputs: (0..n).map(|i| Poly::var(ring, n, i)).collect() }
    }

    pub fn zero(ring: &Ring, arity: usize, coarity: usize) -> PolyMap {
        PolyMap { ring: ring.clone(), arity, outputs: vec![Poly::zero(arity); coarity] }
    }

    /// Parses the division-free subset of the expression grammar.
    pub fn parse(text: &str, ring: &Ring) -> Result<PolyMap, PolyError> {
        let e = crate::smoothexpr::ExprMap::parse(text).map_err(|e| PolyError::Malformed(e.to_string()))?;
        e.to_polymap(ring).map_err(|e| PolyError::Malformed(e.to_string()))
    }

    /// As [`PolyMap::parse`] with an explicit arity.
    pub fn parse_with_arity(text: &str, arity: usize, ring: &Ring) -> Result<PolyMap, PolyError> {
        let e = crate::smoothexpr::ExprMap::parse_with_arity(text, arity).map_err(|e| PolyError::Malformed(e.to_string()))?;
        e.to_polymap(ring).map_err(|e| PolyError::Malformed(e.to_string()))
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn outputs(&self) -> &[Poly] {
        &self.outputs
    }

    pub fn degree(&self) -> u32 {
        self.outputs.iter().filter_map(Poly::degree).max().unwrap_or(0)
    }

    pub fn add(&self, other: &PolyMap) -> PolyMap {
        self.zip(other, Poly::add)
    }

    pub fn mul(&self, other: &PolyMap) -> PolyMap {
        self.zip(other, Poly::mul)
    }

    fn zip(&self, other: &PolyMap, f: impl Fn(&Poly, &Poly) -> Poly) -> PolyMap {
        assert_eq!((self.arity, self.coarity()), (other.arity, other.coarity()), "shape mismatch");
        let outputs = self.outputs.iter().zip(&other.outputs).map(|(a, b)| f(a, b)).collect();
        PolyMap { ring: self.ring.clone(), arity: self.arity, outputs }
    }

    /// Evaluation over an algebra (scalar extension).
    pub fn eval_over<A: KAlgebra>(&self, alg: &A, z: &[A::Elem]) -> Result<Vec<A::Elem>, PolyError> {
        Ok(self.eval_in(alg, z)?)
    }

    /// Nonzero homogeneous parts `(d, P_d)` in increasing degree.
    pub fn homogeneous_parts(&self) -> Vec<(u32, PolyMap)> {
        (0..=self.degree())
            .map(|d| {
                let outputs = self.outputs.iter().map(|p| p.homogeneous_part(d)).collect();
                (d, PolyMap { ring: self.ring.clone(), arity: self.arity, outputs })
            })
            .filter(|(_, p)| p.outputs.iter().any(|q| !q.is_zero()))
            .collect()
    }

    /// `self ∘ inner` without truncation.
    pub fn compose(&self, inner: &PolyMap) -> Result<PolyMap, PolyError> {
        self.compose_capped(inner, None)
    }

    fn compose_capped(&self, inner: &PolyMap, cap: Option<u32>) -> Result<PolyMap, PolyError> {
        if inner.coarity() != self.arity {
            return Err(PolyError::ArityMismatch { expected: self.arity, got: inner.coarity() });
        }
        let pr = PolyRing::new(&self.ring, inner.arity, cap);
        let args: Vec<Poly> = inner.outputs.iter().map(|p| cap.map_or_else(|| p.clone(), |k| p.truncate(k))).collect();
        let outputs = self.eval_in(&pr, &args)?;
        Ok(PolyMap { ring: self.ring.clone(), arity: inner.arity, outputs })
    }

    /// `self ∘ inner` modulo monomials of total degree `> k`.
    pub fn truncated_compose(&self, inner: &PolyMap, k: u32) -> Result<PolyMap, PolyError> {
        self.compose_capped(inner, Some(k))
    }

    pub fn truncate(&self, k: u32) -> PolyMap {
        PolyMap { ring: self.ring.clone(), arity: self.arity, outputs: self.outputs.iter().map(|p| p.truncate(k)).collect() }
    }

    /// Multi-homogeneous component of multidegree `alpha` of `P(v_1 + … + v_n)`,
    /// read off by expanding `P(Σ y_i v_i)` in marker variables `y`.
    pub fn multihomogeneous_component(&self, alpha: &[u32], vs: &[Vec<Scalar>]) -> Result<Vec<Scalar>, PolyError> {
        if alpha.len() != vs.len() {
            return Err(PolyError::ArityMismatch { expected: alpha.len(), got: vs.len() });
        }
        if let Some(v) = vs.iter().find(|v| v.len() != self.arity) {
            return Err(PolyError::ArityMismatch { expected: self.arity, got: v.len() });
        }
        let n = vs.len();
        let pr = PolyRing::new(&self.ring, n, Some(alpha.iter().sum()));
        let args: Vec<Poly> = (0..self.arity)
            .map(|c| Poly::from_terms(n, vs.iter().enumerate().map(|(i, v)| {
                let mut e = vec![0; n];
                e[i] = 1;
                (e, v[c].clone())
            })))
            .collect();
        let expanded = self.eval_in(&pr, &args)?;
        Ok(expanded.iter().map(|p| p.coeff(alpha).cloned().unwrap_or_else(|| self.ring.zero())).collect())
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .outputs
            .iter()
            .enumerate()
            .flat_map(|(i, p)| {
                p.terms.iter().map(move |(e, c)| json!({ "out": i, "exps": e, "coef": c.to_json() }))
            })
            .collect();
        json!({ "arity": self.arity, "coarity": self.coarity(), "terms": terms })
    }

    pub fn from_json(value: &Value, ring: &Ring) -> Result<PolyMap, PolyError> {
        let bad = |m: &str| PolyError::Malformed(m.to_string());
        let arity = value["arity"].as_u64().ok_or_else(|| bad("missing arity"))? as usize;
        let coarity = value["coarity"].as_u64().ok_or_else(|| bad("missing coarity"))? as usize;
        let mut outputs = vec![Poly::zero(arity); coarity];
        for t in value["terms"].as_array().ok_or_else(|| bad("missing terms"))? {
            let out = t["out"].as_u64().ok_or_else(|| bad("term without out"))? as usize;
            let exps: Exponent = t["exps"]
                .as_array()
                .ok_or_else(|| bad("term without exps"))?
                .iter()
                .map(|x| x.as_u64().map(|k| k as u32).ok_or_else(|| bad("bad exponent")))
                .collect::<Result<_, _>>()?;
            if out >= coarity || exps.len() != arity {
                return Err(bad("term shape"));
            }
            let c = ring.parse_json(&t["coef"])?;
            outputs[out].add_term(exps, &c);
        }
        Ok(PolyMap { ring: ring.clone(), arity, outputs })
    }
}

impl AlgebraicMap for PolyMap {
    fn arity(&self) -> usize {
        self.arity
    }

    fn coarity(&self) -> usize {
        self.outputs.len()
    }

    fn eval_in<A: KAlgebra>(&self, alg: &A, args: &[A::Elem]) -> Result<Vec<A::Elem>, EvalError> {
        self.check_args(alg, args)?;
        if alg.ring() != &self.ring {
            return Err(EvalError::AlgebraMismatch);
        }
        Ok(self.outputs.iter().map(|p| p.eval_in(alg, args)).collect())
    }
}

impl PolyMap {
    pub fn coarity(&self) -> usize {
        self.outputs.len()
    }

    pub fn arity(&self) -> usize {
        self.arity
    }
}

impl fmt::Display for PolyMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.outputs.iter().map(|p| p.to_text("x")).collect();
        write!(f, "{}", parts.join("; "))
    }
}

/// Units `r_1, …, r_{k-1}` for the separation recursion: `r_i` must make
/// `1 - r_i^{k-i}` a unit. Found by a deterministic scan of small units.
pub fn separating_scalars(ring: &Ring, k: u32) -> Result<Vec<Scalar>, PolyError> {
    (1..k)
        .map(|i| {
            let m = k - i;
            ring.unit_candidates()
                .find(|r| (&ring.one() - &r.pow(m)).is_unit())
                .ok_or(PolyError::NoSeparatingScalars { ring: ring.clone(), exponent: m })
        })
        .collect()
}

/// Values `[P_0(x), …, P_k(x)]` of the homogeneous parts of a degree-`≤ k`
/// polynomial map known only through evaluations, which are made solely at
/// scalar multiples of `x`.
pub fn separate_homogeneous_blackbox<F>(
    mut eval: F,
    k: u32,
    x: &[Scalar],
    ring: &Ring,
) -> Result<Vec<Vec<Scalar>>, PolyError>
where
    F: FnMut(&[Scalar]) -> Result<Vec<Scalar>, EvalError>,
{
    let scaled = |c: &Scalar| x.iter().map(|xi| c * xi).collect::<Vec<_>>();
    let p0 = eval(&scaled(&ring.zero()))?;
    let w = p0.len();
    let mut parts: Vec<Vec<Scalar>> = vec![vec![ring.zero(); w]; k as usize + 1];
    parts[0] = p0.clone();
    // Residual R(c) = P(cx) − P_0 − Σ_{found d} c^d P_d(x) holds only degrees 1..=deg.
    let mut residual = |c: &Scalar, found: &[(u32, Vec<Scalar>)]| -> Result<Vec<Scalar>, PolyError> {
        let mut v = eval(&scaled(c))?;
        for (i, vi) in v.iter_mut().enumerate() {
            *vi = &*vi - &p0[i];
            for (d, pd) in found {
                *vi = &*vi - &(&c.pow(*d) * &pd[i]);
            }
        }
        Ok(v)
    };
    let mut found: Vec<(u32, Vec<Scalar>)> = Vec::new();
    for deg in (1..=k).rev() {
        let rs = separating_scalars(ring, deg)?;
        let value = q_value(&mut residual, &found, &rs, rs.len(), &ring.one(), w)?;
        let lambda = rs
            .iter()
            .enumerate()
            .fold(ring.one(), |acc, (i, r)| &acc * &(&r.pow(i as u32 + 1) - &r.pow(deg)));
        let lambda_inv = lambda.inv()?;
        let pd: Vec<Scalar> = value.iter().map(|v| &lambda_inv * v).collect();
        parts[deg as usize] = pd.clone();
        found.push((deg, pd));
    }
    Ok(parts)
}

/// `Q_0 = R`, `Q_{i}(c) = r_i^i Q_{i-1}(c) − Q_{i-1}(r_i c)`.
fn q_value<R>(
    residual: &mut R,
    found: &[(u32, Vec<Scalar>)],
    rs: &[Scalar],
    level: usize,
    c: &Scalar,
    w: usize,
) -> Result<Vec<Scalar>, PolyError>
where
    R: FnMut(&Scalar, &[(u32, Vec<Scalar>)]) -> Result<Vec<Scalar>, PolyError>,
{
    if level == 0 {
        return residual(c, found);
    }
    let r = &rs[level - 1];
    let a = q_value(residual, found, rs, level - 1, c, w)?;
    let b = q_value(residual, found, rs, level - 1, &(r * c), w)?;
    let ri = r.pow(level as u32);
    Ok((0..w).map(|j| &(&ri * &a[j]) - &b[j]).collect())
}
