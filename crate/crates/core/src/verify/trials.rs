//! Single randomized checks. Each draws its inputs from the generator it is
//! given, so a trial is reproduced exactly by its seed.

use std::fmt::Debug;

use rand::Rng;

use crate::algebra::{AlgebraicMap, KAlgebra};
use crate::diffcalc::{
    calibrate_embedding_signs, check_embedding, embedding_signs, extended_jet, extended_tangent, g_embed, rho_cubic,
    rho_simplicial, simplicial_dq, symbolic_simplicial, DiffError, EmbeddingReport,
};
use crate::jetcalc::{jet_from_taylor, radial_expansion, simplicial_jet, taylor, taylor_chain, taylor_eqn_rhs};
use crate::polymap::{separate_homogeneous_blackbox, PolyError, PolyMap};
use crate::random::{self, TestRng};
use crate::scalars::{Ring, Scalar};
use crate::smoothexpr::{ExprError, ExprMap};
use crate::weil::{Morphism, WeilAlgebra, WeilElement, WeilError};

/// Attempts at finding inputs inside the domain of a rational map.
const DOMAIN_ATTEMPTS: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub inputs: String,
    pub expected: String,
    pub actual: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail(Failure),
    Skip(String),
}

impl Outcome {
    pub fn is_pass(&self) -> bool {
        matches!(self, Outcome::Pass)
    }
}

/// Why a check stopped early.
pub(crate) enum Stop {
    /// The sampled point is outside the domain; resample.
    Domain,
    Done(Outcome),
}

pub(crate) type Check = Result<(), Stop>;

fn fail(inputs: &str, expected: impl Into<String>, actual: impl Into<String>) -> Stop {
    Stop::Done(Outcome::Fail(Failure { inputs: inputs.to_string(), expected: expected.into(), actual: actual.into() }))
}

fn skip(reason: impl Into<String>) -> Stop {
    Stop::Done(Outcome::Skip(reason.into()))
}

fn ensure_eq<T: PartialEq + Debug>(inputs: &str, what: &str, expected: &T, actual: &T) -> Check {
    if expected == actual {
        Ok(())
    } else {
        Err(fail(inputs, format!("{what}: {expected:?}"), format!("{what}: {actual:?}")))
    }
}

fn ensure(inputs: &str, what: &str, holds: bool) -> Check {
    if holds {
        Ok(())
    } else {
        Err(fail(inputs, what, "violated"))
    }
}

trait Domain {
    fn is_domain(&self) -> bool;
}

impl Domain for ExprError {
    fn is_domain(&self) -> bool {
        ExprError::is_domain(self)
    }
}

impl Domain for DiffError {
    fn is_domain(&self) -> bool {
        DiffError::is_domain(self)
    }
}

impl Domain for crate::algebra::EvalError {
    fn is_domain(&self) -> bool {
        matches!(self, crate::algebra::EvalError::Domain(_))
    }
}

impl Domain for PolyError {
    fn is_domain(&self) -> bool {
        matches!(self, PolyError::Eval(crate::algebra::EvalError::Domain(_)))
    }
}

impl Domain for WeilError {
    fn is_domain(&self) -> bool {
        false
    }
}

trait OrStop<T> {
    fn or_stop(self, inputs: &str) -> Result<T, Stop>;
}

impl<T, E: Domain + std::fmt::Display> OrStop<T> for Result<T, E> {
    fn or_stop(self, inputs: &str) -> Result<T, Stop> {
        self.map_err(|e| if e.is_domain() { Stop::Domain } else { fail(inputs, "success", format!("error: {e}")) })
    }
}

/// Runs `check` on fresh inputs until they land in the domain.
pub(crate) fn settle(rng: &mut TestRng, mut check: impl FnMut(&mut TestRng) -> Check) -> Outcome {
    for _ in 0..DOMAIN_ATTEMPTS {
        match check(rng) {
            Ok(()) => return Outcome::Pass,
            Err(Stop::Domain) => continue,
            Err(Stop::Done(o)) => return o,
        }
    }
    Outcome::Skip(format!("no sample inside the domain after {DOMAIN_ATTEMPTS} attempts"))
}

/// Runs the checks in order and reports the first that does not pass.
pub fn all(outcomes: impl IntoIterator<Item = Outcome>) -> Outcome {
    let mut skipped = None;
    for o in outcomes {
        match o {
            Outcome::Pass => {}
            Outcome::Fail(_) => return o,
            Outcome::Skip(_) => skipped = skipped.or(Some(o)),
        }
    }
    skipped.unwrap_or(Outcome::Pass)
}

/// The largest `k ≤ max` for which nonsingular times of order `k` exist.
pub fn max_nonsingular_order(ring: &Ring, max: usize) -> usize {
    match ring {
        Ring::Rationals => max,
        Ring::Modular(m) => {
            let p = crate::scalars::smallest_prime_factor(*m);
            max.min(usize::try_from(p - 1).unwrap_or(usize::MAX))
        }
    }
}

fn map_of(rng: &mut TestRng, ring: &Ring, arity: usize, coarity: usize, max_deg: u32, rational: bool) -> ExprMap {
    if rational {
        random::rational_map(rng, ring, arity, coarity, 2)
    } else {
        random::poly_map(rng, ring, arity, coarity, max_deg)
    }
}

fn points(rng: &mut TestRng, ring: &Ring, m: usize, n: usize) -> Vec<Vec<Scalar>> {
    (0..n).map(|_| random::point(rng, ring, m)).collect()
}

/// `J^k(g ∘ f) = J^k g ∘ J^k f` at a random jet point, `k = 1..=max_k`.
pub fn jet_functoriality(rng: &mut TestRng, ring: &Ring, vars: usize, max_deg: u32, max_k: usize, rational: bool) -> Outcome {
    settle(rng, |rng| {
        let f = map_of(rng, ring, vars, vars, max_deg, rational);
        let width = rng.gen_range(1..=2);
        let g = map_of(rng, ring, vars, width, max_deg, rational);
        let gf = g.compose(&f).or_stop("compose")?;
        for k in 1..=max_k {
            let vs = points(rng, ring, vars, k + 1);
            let inputs = format!("f = {f}; g = {g}; v = {vs:?}");
            let inner = simplicial_jet(&f, ring, &vs).or_stop(&inputs)?;
            let lhs = simplicial_jet(&gf, ring, &vs).or_stop(&inputs)?;
            let rhs = simplicial_jet(&g, ring, &inner.components).or_stop(&inputs)?;
            ensure_eq(&inputs, &format!("J^{k}"), &lhs.components, &rhs.components)?;
        }
        Ok(())
    })
}

fn texts(p: &PolyMap) -> Vec<String> {
    p.outputs().iter().map(|q| q.to_text("h")).collect()
}

/// `Tay^k_x(g ∘ h)` against the truncated composition of Taylor polynomials.
pub fn taylor_chain_trial(rng: &mut TestRng, ring: &Ring, vars: usize, max_deg: u32, k: u32, rational: bool) -> Outcome {
    settle(rng, |rng| {
        let h = map_of(rng, ring, vars, vars, max_deg, rational);
        let width = rng.gen_range(1..=2);
        let g = map_of(rng, ring, vars, width, max_deg, rational);
        let x = random::point(rng, ring, vars);
        let inputs = format!("g = {g}; h = {h}; x = {x:?}; k = {k}");
        let rep = taylor_chain(&g, &h, ring, &x, k).or_stop(&inputs)?;
        ensure_eq(&inputs, "Taylor polynomial", &texts(&rep.composite), &texts(&rep.composed))
    })
}

/// A point of `(A ⊗ B)^m` whose augmentation is `x`.
fn point_over(rng: &mut TestRng, alg: &WeilAlgebra, x: &[Scalar]) -> Vec<WeilElement> {
    x.iter().map(|xi| alg.add(&alg.embed(xi), &random::nilpotent(rng, alg))).collect()
}

/// Direct evaluation over `A ⊗ B` against evaluation over `B` with coefficients in `A`.
pub fn nesting_trial(rng: &mut TestRng, ring: &Ring, a: &WeilAlgebra, b: &WeilAlgebra, vars: usize) -> Outcome {
    let ab = match WeilAlgebra::tensor(a, b) {
        Ok(ab) => ab,
        Err(e) => return Outcome::Fail(Failure { inputs: format!("{a} ⊗ {b}"), expected: "tensor".into(), actual: e.to_string() }),
    };
    settle(rng, |rng| {
        let f = random::rational_map(rng, ring, vars, 1, 2);
        let x = random::point(rng, ring, vars);
        let z = point_over(rng, &ab, &x);
        let inputs = format!("f = {f}; A = {a}; B = {b}; z = {z:?}");
        let rep = f.nested_vs_direct(a, b, &z).or_stop(&inputs)?;
        ensure_eq(&inputs, "value over A ⊗ B", &rep.direct, &rep.nested)
    })
}

/// The pushforward over `A ⊕ B` is the pair of pushforwards over `A` and `B`.
pub fn whitney_trial(rng: &mut TestRng, ring: &Ring, a: &WeilAlgebra, b: &WeilAlgebra, vars: usize) -> Outcome {
    let w = match WeilAlgebra::whitney_sum(a, b) {
        Ok(w) => w,
        Err(e) => return Outcome::Fail(Failure { inputs: format!("{a} ⊕ {b}"), expected: "whitney sum".into(), actual: e.to_string() }),
    };
    settle(rng, |rng| {
        let width = rng.gen_range(1..=2);
        let f = random::rational_map(rng, ring, vars, width, 2);
        let x = random::point(rng, ring, vars);
        let nu_a: Vec<WeilElement> = (0..vars).map(|_| random::nilpotent(rng, a)).collect();
        let nu_b: Vec<WeilElement> = (0..vars).map(|_| random::nilpotent(rng, b)).collect();
        let inputs = format!("f = {f}; x = {x:?}; ν_A = {nu_a:?}; ν_B = {nu_b:?}");
        let inject = |left: bool, e: &WeilElement| w.inject(left, e).or_stop(&inputs);
        let nu_w = nu_a
            .iter()
            .zip(&nu_b)
            .map(|(p, q)| Ok(w.add(&inject(true, p)?, &inject(false, q)?)))
            .collect::<Result<Vec<_>, Stop>>()?;
        let pa = f.pushforward(a, &x, &nu_a).or_stop(&inputs)?;
        let pb = f.pushforward(b, &x, &nu_b).or_stop(&inputs)?;
        let pw = f.pushforward(&w, &x, &nu_w).or_stop(&inputs)?;
        let pair = pa
            .fiber
            .iter()
            .zip(&pb.fiber)
            .map(|(p, q)| Ok(w.add(&inject(true, p)?, &inject(false, q)?)))
            .collect::<Result<Vec<_>, Stop>>()?;
        ensure_eq(&inputs, "base", &pa.base, &pw.base)?;
        ensure_eq(&inputs, "fiber", &pair, &pw.fiber)
    })
}

/// Symbolic quotients against the numeric quotient at nonsingular times and
/// against the three jet computations at `s = 0`.
pub fn oracle_triangle(rng: &mut TestRng, ring: &Ring, vars: usize, max_deg: u32, k: usize) -> Outcome {
    settle(rng, |rng| {
        let width = rng.gen_range(1..=2);
        let f = random::poly_map(rng, ring, vars, width, max_deg);
        let p = random::simplicial_point(rng, ring, vars, k).ok_or_else(|| skip("no nonsingular times"))?;
        let vs = p.vectors();
        let inputs = format!("f = {f}; v = {vs:?}; s = {:?}", p.times());
        let sym = symbolic_simplicial(&f, ring, vs).or_stop(&inputs)?;
        let at_s = sym.eval_at(p.times());
        for j in 0..=k {
            let dq = simplicial_dq(&f, &p.truncate(j)).or_stop(&inputs)?;
            ensure_eq(&inputs, &format!("quotient of order {j}"), &dq, &at_s[j])?;
        }
        let jet = simplicial_jet(&f, ring, vs).or_stop(&inputs)?;
        ensure_eq(&inputs, "jet at s = 0", &jet.components, &sym.at_zero())?;
        let from_taylor = jet_from_taylor(&f, ring, &vs[0], &vs[1..]).or_stop(&inputs)?;
        ensure_eq(&inputs, "jet from Taylor", &jet.components[1..].to_vec(), &from_taylor)?;
        for j in 1..=k {
            let rhs = taylor_eqn_rhs(&f, ring, &vs[0], &vs[1..], j as u32).or_stop(&inputs)?;
            ensure_eq(&inputs, &format!("weighted sum of order {j}"), &jet.components[j], &rhs)?;
        }
        Ok(())
    })
}

/// `f(x + tv) = f(x) + Σ t^i D^i_v f(x) + t^k R(t)` with `R(0) = 0`.
pub fn radial_trial(rng: &mut TestRng, ring: &Ring, vars: usize, max_deg: u32, k: u32) -> Outcome {
    settle(rng, |rng| {
        let width = rng.gen_range(1..=2);
        let f = random::poly_map(rng, ring, vars, width, max_deg);
        let x = random::point(rng, ring, vars);
        let v = random::point(rng, ring, vars);
        let t = ring.random(rng);
        let inputs = format!("f = {f}; x = {x:?}; v = {v:?}; t = {t}; k = {k}");
        let exp = radial_expansion(&f, ring, &x, &v, k).or_stop(&inputs)?;
        ensure(&inputs, "remainder vanishes at t = 0", exp.remainder_vanishes_at_zero())?;
        let moved: Vec<Scalar> = x.iter().zip(&v).map(|(a, b)| a + &(&t * b)).collect();
        let direct = f.eval_scalars(ring, &moved).or_stop(&inputs)?;
        ensure_eq(&inputs, "f(x + tv)", &direct, &exp.recombine(&t))?;
        let tay = taylor(&f, ring, &x, k).or_stop(&inputs)?;
        for i in 1..=k {
            let part = tay.part(i).eval_over(ring, &v).or_stop(&inputs)?;
            ensure_eq(&inputs, &format!("radial coefficient {i}"), &exp.coeffs[i as usize - 1], &part)?;
        }
        Ok(())
    })
}

/// Functoriality of both extended maps and `ρ`-equivariance of both and of the embedding.
pub fn difference_trial(rng: &mut TestRng, ring: &Ring, vars: usize, max_deg: u32, k: usize, rational: bool) -> Outcome {
    settle(rng, |rng| {
        let f = map_of(rng, ring, vars, vars, max_deg, rational);
        let width = rng.gen_range(1..=2);
        let g = map_of(rng, ring, vars, width, max_deg, rational);
        let gf = g.compose(&f).or_stop("compose")?;
        let p = random::simplicial_point(rng, ring, vars, k).ok_or_else(|| skip("no nonsingular times"))?;
        let q = random::cubic_point(rng, ring, vars, k).ok_or_else(|| skip("no nonsingular cubic point"))?;
        let r = ring.random_unit(rng);
        let inputs = format!("f = {f}; g = {g}; simplicial = {p:?}; cubic = {q:?}; r = {r}");

        let jf = extended_jet(&f, &p).or_stop(&inputs)?;
        let lhs = extended_jet(&gf, &p).or_stop(&inputs)?;
        let rhs = extended_jet(&g, &jf).or_stop(&inputs)?;
        ensure_eq(&inputs, "simplicial functoriality", &lhs, &rhs)?;

        let tf = extended_tangent(&f, &q).or_stop(&inputs)?;
        let lhs = extended_tangent(&gf, &q).or_stop(&inputs)?;
        let rhs = extended_tangent(&g, &tf).or_stop(&inputs)?;
        ensure_eq(&inputs, "cubic functoriality", &lhs, &rhs)?;

        let lhs = extended_jet(&f, &rho_simplicial(&r, &p).or_stop(&inputs)?).or_stop(&inputs)?;
        ensure_eq(&inputs, "simplicial equivariance", &rho_simplicial(&r, &jf).or_stop(&inputs)?, &lhs)?;

        let lhs = extended_tangent(&f, &rho_cubic(&r, &q).or_stop(&inputs)?).or_stop(&inputs)?;
        ensure_eq(&inputs, "cubic equivariance", &rho_cubic(&r, &tf).or_stop(&inputs)?, &lhs)?;

        let lhs = g_embed(&rho_simplicial(&r, &p).or_stop(&inputs)?).or_stop(&inputs)?;
        let rhs = rho_cubic(&r, &g_embed(&p).or_stop(&inputs)?).or_stop(&inputs)?;
        ensure_eq(&inputs, "embedding equivariance", &rhs, &lhs)
    })
}

/// `ρ`-equivariance alone, on polynomial maps.
pub fn equivariance_trial(rng: &mut TestRng, ring: &Ring, vars: usize, max_deg: u32, k: usize) -> Outcome {
    settle(rng, |rng| {
        let width = rng.gen_range(1..=2);
        let f = random::poly_map(rng, ring, vars, width, max_deg);
        let p = random::simplicial_point(rng, ring, vars, k).ok_or_else(|| skip("no nonsingular times"))?;
        let q = random::cubic_point(rng, ring, vars, k).ok_or_else(|| skip("no nonsingular cubic point"))?;
        let r = ring.random_unit(rng);
        let inputs = format!("f = {f}; simplicial = {p:?}; cubic = {q:?}; r = {r}");
        let jf = extended_jet(&f, &p).or_stop(&inputs)?;
        let lhs = extended_jet(&f, &rho_simplicial(&r, &p).or_stop(&inputs)?).or_stop(&inputs)?;
        ensure_eq(&inputs, "simplicial equivariance", &rho_simplicial(&r, &jf).or_stop(&inputs)?, &lhs)?;
        let tf = extended_tangent(&f, &q).or_stop(&inputs)?;
        let lhs = extended_tangent(&f, &rho_cubic(&r, &q).or_stop(&inputs)?).or_stop(&inputs)?;
        ensure_eq(&inputs, "cubic equivariance", &rho_cubic(&r, &tf).or_stop(&inputs)?, &lhs)
    })
}

/// Both sides of the embedding square at a random polynomial map and point.
pub fn embedding_sample(rng: &mut TestRng, ring: &Ring, vars: usize, max_deg: u32, k: usize) -> Option<EmbeddingReport> {
    let width = rng.gen_range(1..=2);
    let f = random::poly_map(rng, ring, vars, width, max_deg);
    let p = random::simplicial_point(rng, ring, vars, k)?;
    EmbeddingReport::new(&f, &p).ok()
}

/// Calibrates the sign pattern of order `k` from `samples` reports and
/// compares it with the frozen table.
pub fn embedding_calibration(rng: &mut TestRng, ring: &Ring, vars: usize, max_deg: u32, k: usize, samples: usize) -> Outcome {
    let reports: Vec<EmbeddingReport> =
        (0..samples).filter_map(|_| embedding_sample(rng, ring, vars, max_deg, k)).collect();
    let inputs = format!("order {k}, {} samples over {ring}", reports.len());
    if reports.is_empty() {
        return Outcome::Skip(format!("no calibration samples at order {k}"));
    }
    let frozen = embedding_signs(k).map(<[i8]>::to_vec);
    match calibrate_embedding_signs(&reports) {
        Ok(signs) if Some(&signs) == frozen.as_ref() => Outcome::Pass,
        Ok(signs) => {
            Outcome::Fail(Failure { inputs, expected: format!("{frozen:?}"), actual: format!("calibrated {signs:?}") })
        }
        Err(e) => Outcome::Fail(Failure { inputs, expected: "a consistent sign pattern".into(), actual: e.to_string() }),
    }
}

/// The embedding square with frozen signs at a fresh point.
pub fn embedding_trial(rng: &mut TestRng, ring: &Ring, vars: usize, max_deg: u32, k: usize, rational: bool) -> Outcome {
    settle(rng, |rng| {
        let width = rng.gen_range(1..=2);
        let f = map_of(rng, ring, vars, width, max_deg, rational);
        let p = random::simplicial_point(rng, ring, vars, k).ok_or_else(|| skip("no nonsingular times"))?;
        let inputs = format!("f = {f}; p = {p:?}");
        let holds = check_embedding(&f, &p).or_stop(&inputs)?;
        if !holds {
            let rep = EmbeddingReport::new(&f, &p).or_stop(&inputs)?;
            let signs = embedding_signs(k).unwrap_or(&[]);
            let signed: Vec<Vec<Scalar>> = rep
                .embedded
                .spaces()
                .iter()
                .zip(signs)
                .map(|(v, &s)| v.iter().map(|c| if s < 0 { -c } else { c.clone() }).collect())
                .collect();
            return Err(fail(&inputs, format!("σ·g(J f(p)) = {signed:?}"), format!("T f(g(p)) = {:?}", rep.cubic.spaces())));
        }
        Ok(())
    })
}

/// Blackbox separation of homogeneous parts against the coefficients.
pub fn separation_trial(rng: &mut TestRng, ring: &Ring, vars: usize, max_deg: u32) -> Outcome {
    settle(rng, |rng| {
        let width = rng.gen_range(1..=2);
        let f = random::poly_map(rng, ring, vars, width, max_deg);
        let x = random::point(rng, ring, vars);
        let inputs = format!("f = {f}; x = {x:?}; degree ≤ {max_deg}");
        let p = f.to_polymap(ring).or_stop(&inputs)?;
        let mut truth = vec![vec![ring.zero(); f.coarity()]; max_deg as usize + 1];
        for (d, part) in p.homogeneous_parts() {
            truth[d as usize] = part.eval_over(ring, &x).or_stop(&inputs)?;
        }
        let found = separate_homogeneous_blackbox(|y| f.eval_scalars(ring, y), max_deg, &x, ring).or_stop(&inputs)?;
        ensure_eq(&inputs, "homogeneous parts", &truth, &found)
    })
}

/// Algebras whose laws are checked: presets, tensor products and Whitney
/// sums of mixed presets, all of dimension at most 64.
pub fn law_algebras(ring: &Ring) -> Vec<WeilAlgebra> {
    let mut out: Vec<WeilAlgebra> = Vec::new();
    for k in 0..=3 {
        out.push(WeilAlgebra::jet(ring, k));
    }
    for k in 1..=3 {
        out.push(WeilAlgebra::tangent(ring, k));
    }
    out.push(WeilAlgebra::truncated(ring, 2, 2));
    out.push(WeilAlgebra::truncated(ring, 3, 2));
    let pairs = [
        (WeilAlgebra::jet(ring, 2), WeilAlgebra::tangent(ring, 1)),
        (WeilAlgebra::tangent(ring, 2), WeilAlgebra::truncated(ring, 2, 2)),
        (WeilAlgebra::jet(ring, 3), WeilAlgebra::tangent(ring, 3)),
        (WeilAlgebra::truncated(ring, 2, 3), WeilAlgebra::jet(ring, 1)),
    ];
    for (a, b) in &pairs {
        out.extend(WeilAlgebra::tensor(a, b));
        out.extend(WeilAlgebra::whitney_sum(a, b));
    }
    out.retain(|a| a.dim() <= 64);
    out
}

/// Ring axioms on random elements, inverses of units, the scaling action and the flip.
pub fn weil_laws_trial(rng: &mut TestRng, alg: &WeilAlgebra) -> Outcome {
    let run = |rng: &mut TestRng| -> Check {
        let (a, b, c) = (random::element(rng, alg), random::element(rng, alg), random::element(rng, alg));
        let inputs = format!("A = {alg}; a = {a}; b = {b}; c = {c}");
        ensure_eq(&inputs, "(ab)c", &alg.mul(&alg.mul(&a, &b), &c), &alg.mul(&a, &alg.mul(&b, &c)))?;
        ensure_eq(&inputs, "ab", &alg.mul(&a, &b), &alg.mul(&b, &a))?;
        ensure_eq(&inputs, "a(b + c)", &alg.mul(&a, &alg.add(&b, &c)), &alg.add(&alg.mul(&a, &b), &alg.mul(&a, &c)))?;
        ensure_eq(&inputs, "1a", &a, &alg.mul(&alg.one(), &a))?;
        ensure_eq(&inputs, "π(ab)", &(&a.project() * &b.project()), &alg.mul(&a, &b).project())?;
        let u = random::unit_element(rng, alg);
        let inputs = format!("A = {alg}; u = {u}");
        let inv = u.inv().or_stop(&inputs)?;
        ensure_eq(&inputs, "u u⁻¹", &alg.one(), &alg.mul(&u, &inv))?;
        ensure_eq(&inputs, "(u⁻¹)⁻¹", &u, &inv.inv().or_stop(&inputs)?)?;
        if alg.grading().is_some() {
            let (r, r2) = (alg.ring().random_unit(rng), alg.ring().random_unit(rng));
            let inputs = format!("A = {alg}; a = {a}; b = {b}; r = {r}; r' = {r2}");
            let rho = |r: &Scalar, x: &WeilElement| alg.scale_action(r, x).or_stop(&inputs);
            ensure_eq(&inputs, "ρ(r)(ab)", &alg.mul(&rho(&r, &a)?, &rho(&r, &b)?), &rho(&r, &alg.mul(&a, &b))?)?;
            ensure_eq(&inputs, "ρ(r)ρ(r')", &rho(&(&r * &r2), &a)?, &rho(&r, &rho(&r2, &a)?)?)?;
        }
        if let Ok(flipped) = alg.flip(&a) {
            let inputs = format!("A = {alg}; a = {a}; b = {b}");
            let target = flipped.algebra().clone();
            ensure_eq(&inputs, "flip²", &a, &target.flip(&flipped).or_stop(&inputs)?)?;
            let fb = alg.flip(&b).or_stop(&inputs)?;
            let fab = alg.flip(&alg.mul(&a, &b)).or_stop(&inputs)?;
            ensure_eq(&inputs, "flip(ab)", &target.mul(&flipped, &fb), &fab)?;
        }
        Ok(())
    };
    settle(rng, run)
}

/// Validation of the structure constants.
pub fn validation_check(alg: &WeilAlgebra) -> Outcome {
    let rep = alg.validate();
    match rep.violation {
        None => Outcome::Pass,
        Some(v) => Outcome::Fail(Failure { inputs: alg.to_string(), expected: "valid Weil algebra".into(), actual: format!("{v:?}") }),
    }
}

/// Algebras carrying the near-ring structure.
pub fn graded_algebras(ring: &Ring) -> Vec<WeilAlgebra> {
    vec![WeilAlgebra::jet(ring, 3), WeilAlgebra::truncated(ring, 2, 2)]
}

/// Associativity and right distributivity of `⋆`.
pub fn star_trial(rng: &mut TestRng, alg: &WeilAlgebra) -> Outcome {
    settle(rng, |rng| {
        let (a, b, c) = (random::element(rng, alg), random::element(rng, alg), random::element(rng, alg));
        let inputs = format!("A = {alg}; a = {a}; b = {b}; c = {c}");
        let star = |x: &WeilElement, y: &WeilElement| alg.star(x, y).or_stop(&inputs);
        ensure_eq(&inputs, "(a⋆b)⋆c", &star(&star(&a, &b)?, &c)?, &star(&a, &star(&b, &c)?)?)?;
        ensure_eq(&inputs, "(a+b)⋆c", &alg.add(&star(&a, &c)?, &star(&b, &c)?), &star(&alg.add(&a, &b), &c)?)
    })
}

/// Multiplicativity of `endo(a)` and `endo(a') ∘ endo(a) = endo(a ⋆ a')`.
pub fn endo_trial(rng: &mut TestRng, alg: &WeilAlgebra) -> Outcome {
    settle(rng, |rng| {
        let (a, a2) = (random::element(rng, alg), random::element(rng, alg));
        let (b, c) = (random::element(rng, alg), random::element(rng, alg));
        let inputs = format!("A = {alg}; a = {a}; a' = {a2}; b = {b}; c = {c}");
        let endo = |x: &WeilElement, y: &WeilElement| alg.graded_endo(x, y).or_stop(&inputs);
        ensure_eq(&inputs, "endo(a)(bc)", &alg.mul(&endo(&a, &b)?, &endo(&a, &c)?), &endo(&a, &alg.mul(&b, &c))?)?;
        let star = alg.star(&a, &a2).or_stop(&inputs)?;
        ensure_eq(&inputs, "endo(a')(endo(a)(b))", &endo(&star, &b)?, &endo(&a2, &endo(&a, &b)?)?)
    })
}

/// `star_inverse` is a two-sided inverse for `⋆`.
pub fn star_inverse_trial(rng: &mut TestRng, alg: &WeilAlgebra) -> Outcome {
    settle(rng, |rng| {
        let a = random::unit_element(rng, alg);
        let inputs = format!("A = {alg}; a = {a}");
        let x = alg.star_inverse(&a).or_stop(&inputs)?;
        ensure_eq(&inputs, "a⋆a⁻¹", &alg.one(), &alg.star(&a, &x).or_stop(&inputs)?)?;
        ensure_eq(&inputs, "a⁻¹⋆a", &alg.one(), &alg.star(&x, &a).or_stop(&inputs)?)
    })
}

/// `δ ⋆ (1 + 1) ≠ δ ⋆ 1 + δ ⋆ 1` in `jet(3)`; holds whenever `2 ≠ 0`.
pub fn left_distributivity_counterexample(ring: &Ring) -> Outcome {
    let alg = WeilAlgebra::jet(ring, 3);
    let (b, a) = (alg.basis_element(1), alg.one());
    let inputs = format!("b = {b}; a = a' = {a}");
    let witness = || -> Result<bool, WeilError> {
        let lhs = alg.star(&b, &alg.add(&a, &a))?;
        let rhs = alg.add(&alg.star(&b, &a)?, &alg.star(&b, &a)?);
        Ok(lhs != rhs)
    };
    match witness() {
        Ok(true) => Outcome::Pass,
        Ok(false) if ring.characteristic() == 2 => Outcome::Skip("2 = 0 makes the witness distributive".into()),
        Ok(false) => Outcome::Fail(Failure { inputs, expected: "left distributivity fails".into(), actual: "it holds".into() }),
        Err(e) => Outcome::Fail(Failure { inputs, expected: "success".into(), actual: e.to_string() }),
    }
}

/// Extension commutes with jet truncations and augmentations.
pub fn naturality_trial(rng: &mut TestRng, ring: &Ring, vars: usize, max_deg: u32, rational: bool) -> Outcome {
    let algebras = law_algebras(ring);
    settle(rng, |rng| {
        let width = rng.gen_range(1..=2);
        let f = map_of(rng, ring, vars, width, max_deg, rational);
        let k = rng.gen_range(1..=3);
        let j = rng.gen_range(0..k);
        let (src, dst) = (WeilAlgebra::jet(ring, k), WeilAlgebra::jet(ring, j));
        let other = &algebras[rng.gen_range(0..algebras.len())];
        let morphisms = [
            Morphism::jet_truncation(&src, &dst).or_stop("jet truncation")?,
            Morphism::augmentation(other),
        ];
        for phi in &morphisms {
            let x = random::point(rng, ring, vars);
            let z = point_over(rng, phi.source(), &x);
            let inputs = format!("f = {f}; Φ: {} -> {}; z = {z:?}", phi.source(), phi.target());
            ensure(&inputs, "Φ is a morphism", phi.check())?;
            let image = |e: &WeilElement| phi.apply(e).or_stop(&inputs);
            let fz = f.eval_in(phi.source(), &z).or_stop(&inputs)?;
            let lhs = fz.iter().map(image).collect::<Result<Vec<_>, _>>()?;
            let phi_z = z.iter().map(image).collect::<Result<Vec<_>, _>>()?;
            let rhs = f.eval_in(phi.target(), &phi_z).or_stop(&inputs)?;
            ensure_eq(&inputs, "Φ ∘ T^A f", &lhs, &rhs)?;
        }
        Ok(())
    })
}
