//! Seeded generators for randomized checks.

use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

use crate::diffcalc::{CubicPoint, SimplicialPoint};
use crate::scalars::{Ring, Scalar};
use crate::smoothexpr::{Expr, ExprMap};
use crate::weil::{WeilAlgebra, WeilElement};

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Seed of trial `i` in a stream named `label`, stable across runs.
pub fn trial_seed(seed: u64, label: &str, i: usize) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in label.bytes().chain(seed.to_le_bytes()).chain((i as u64).to_le_bytes()) {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h
}

fn int(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// A constant that exists in `ring`: small integers, and halves or thirds when invertible.
pub fn constant(rng: &mut TestRng, ring: &Ring) -> BigRational {
    let n: i64 = rng.gen_range(-5..=5);
    let dens: Vec<i64> = [2, 3].into_iter().filter(|&d| ring.from_i64(d).is_unit()).collect();
    match dens.choose(rng) {
        Some(&d) if rng.gen_bool(0.2) => BigRational::new(n.into(), d.into()),
        _ => int(n),
    }
}

fn monomial(rng: &mut TestRng, nvars: usize, deg: u32) -> Expr {
    let mut exps = vec![0u32; nvars];
    for _ in 0..deg {
        exps[rng.gen_range(0..nvars)] += 1;
    }
    let mut factors = exps
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| if e == 1 { Expr::Var(i) } else { Expr::IntPow(Box::new(Expr::Var(i)), e) });
    let first = factors.next();
    match first {
        None => Expr::Const(int(1)),
        Some(f) => factors.fold(f, |acc, g| Expr::Mul(Box::new(acc), Box::new(g))),
    }
}

/// A random polynomial expression of total degree at most `max_deg`.
pub fn poly_expr(rng: &mut TestRng, ring: &Ring, nvars: usize, max_deg: u32) -> Expr {
    let terms = rng.gen_range(1..=4);
    let mut acc = Expr::Const(constant(rng, ring));
    for _ in 0..terms {
        let deg = rng.gen_range(1..=max_deg.max(1));
        let c = constant(rng, ring);
        let t = Expr::ScalarMul(c, Box::new(monomial(rng, nvars, deg)));
        acc = Expr::Add(Box::new(acc), Box::new(t));
    }
    acc
}

/// A polynomial map `K^arity -> K^coarity`.
pub fn poly_map(rng: &mut TestRng, ring: &Ring, arity: usize, coarity: usize, max_deg: u32) -> ExprMap {
    let outputs = (0..coarity).map(|_| poly_expr(rng, ring, arity, max_deg)).collect();
    ExprMap::new(arity, outputs).expect("variables within arity")
}

/// A random rational expression: polynomials combined with sums, products and reciprocals.
pub fn rational_expr(rng: &mut TestRng, ring: &Ring, nvars: usize, depth: u32) -> Expr {
    if depth == 0 || rng.gen_bool(0.25) {
        return poly_expr(rng, ring, nvars, 2);
    }
    let sub = |rng: &mut TestRng| Box::new(rational_expr(rng, ring, nvars, depth - 1));
    match rng.gen_range(0..5) {
        0 => Expr::Add(sub(rng), sub(rng)),
        1 => Expr::Mul(sub(rng), sub(rng)),
        2 => Expr::IntPow(sub(rng), rng.gen_range(2..=3)),
        3 => Expr::ScalarMul(constant(rng, ring), sub(rng)),
        _ => {
            // 1 / (c + e) with c a unit keeps the domain large.
            let c = loop {
                let c = constant(rng, ring);
                if ring.from_rational(&c).map(|s| s.is_unit()).unwrap_or(false) {
                    break c;
                }
            };
            Expr::Inv(Box::new(Expr::Add(Box::new(Expr::Const(c)), sub(rng))))
        }
    }
}

pub fn rational_map(rng: &mut TestRng, ring: &Ring, arity: usize, coarity: usize, depth: u32) -> ExprMap {
    let outputs = (0..coarity).map(|_| rational_expr(rng, ring, arity, depth)).collect();
    ExprMap::new(arity, outputs).expect("variables within arity")
}

pub fn point(rng: &mut TestRng, ring: &Ring, m: usize) -> Vec<Scalar> {
    (0..m).map(|_| ring.random(rng)).collect()
}

pub fn element(rng: &mut TestRng, alg: &WeilAlgebra) -> WeilElement {
    alg.element(point(rng, alg.ring(), alg.dim())).expect("dimension")
}

/// A random element with zero augmentation.
pub fn nilpotent(rng: &mut TestRng, alg: &WeilAlgebra) -> WeilElement {
    let e = element(rng, alg);
    e.nilpotent_part()
}

/// A random element whose augmentation is a unit.
pub fn unit_element(rng: &mut TestRng, alg: &WeilAlgebra) -> WeilElement {
    let n = nilpotent(rng, alg);
    let u = alg.embed(&alg.ring().random_unit(rng));
    n.add(&u).expect("same algebra")
}

/// Times `s_1, …, s_k` with all pairwise differences (including `s_0 = 0`) units,
/// or `None` if a bounded search fails.
pub fn nonsingular_times(rng: &mut TestRng, ring: &Ring, k: usize) -> Option<Vec<Scalar>> {
    'outer: for _ in 0..200 {
        let mut s = vec![ring.zero()];
        for _ in 0..k {
            let mut found = None;
            for _ in 0..50 {
                let c = ring.random(rng);
                if s.iter().all(|t| (&c - t).is_unit()) {
                    found = Some(c);
                    break;
                }
            }
            match found {
                Some(c) => s.push(c),
                None => continue 'outer,
            }
        }
        return Some(s[1..].to_vec());
    }
    None
}

pub fn simplicial_point(rng: &mut TestRng, ring: &Ring, m: usize, k: usize) -> Option<SimplicialPoint> {
    let s = nonsingular_times(rng, ring, k)?;
    let vs = (0..=k).map(|_| point(rng, ring, m)).collect();
    Some(SimplicialPoint::new(ring, vs, s).expect("well-formed"))
}

pub fn cubic_point(rng: &mut TestRng, ring: &Ring, m: usize, k: usize) -> Option<CubicPoint> {
    for _ in 0..500 {
        let space = (0..1 << k).map(|_| point(rng, ring, m)).collect();
        let time = (1..1 << k).map(|_| ring.random(rng)).collect();
        let p = CubicPoint::new(ring, k, space, time).expect("well-formed");
        if p.is_nonsingular() {
            return Some(p);
        }
    }
    None
}
