#![allow(dead_code)]

use proptest::prelude::*;
use weilcalc::random::{self, TestRng};
use weilcalc::{PolyMap, Ring, Scalar};

pub fn rat() -> Ring {
    Ring::Rationals
}

pub fn m101() -> Ring {
    Ring::Modular(101)
}

pub fn ints(r: &Ring, v: &[i64]) -> Vec<Scalar> {
    v.iter().map(|&i| r.from_i64(i)).collect()
}

pub fn q(r: &Ring, text: &str) -> Scalar {
    r.parse_scalar(text).unwrap()
}

pub fn poly(text: &str, r: &Ring) -> PolyMap {
    PolyMap::parse(text, r).unwrap()
}

pub fn poly_n(text: &str, arity: usize, r: &Ring) -> PolyMap {
    PolyMap::parse_with_arity(text, arity, r).unwrap()
}

/// Rationals, a prime field, and a composite modulus.
pub fn any_ring() -> impl Strategy<Value = Ring> {
    prop_oneof![Just(Ring::Rationals), Just(Ring::Modular(101)), Just(Ring::Modular(7)), Just(Ring::Modular(12))]
}

pub fn exact_ring() -> impl Strategy<Value = Ring> {
    prop_oneof![Just(Ring::Rationals), Just(Ring::Modular(101))]
}

pub fn gen(seed: u64) -> TestRng {
    random::rng(seed)
}

pub fn random_poly(g: &mut TestRng, r: &Ring, arity: usize, coarity: usize, max_deg: u32) -> PolyMap {
    random::poly_map(g, r, arity, coarity, max_deg).to_polymap(r).unwrap()
}
