//! Exact base rings: the rationals and the integers modulo `m`.
//!
//! Every [`Scalar`] carries its ring, so mixing values from different rings
//! is caught at the arithmetic boundary instead of silently producing garbage.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("{0} is not a unit of {1}")]
    NotAUnit(String, Ring),
    #[error("cannot find {wanted} units with pairwise unit differences in {ring}")]
    Exhausted { ring: Ring, wanted: usize },
    #[error("invalid ring descriptor {0:?} (expected \"rat\" or \"mod:<m>\" with m >= 2)")]
    InvalidRing(String),
    #[error("cannot parse scalar {0:?}")]
    Parse(String),
}

/// Descriptor of the base ring `K`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Ring {
    Rationals,
    /// Integers modulo `m`, `m >= 2`.
    Modular(u64),
}

/// A ring-tagged exact scalar.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Modular { residue: u64, modulus: u64 },
}

impl Ring {
    pub fn modular(m: u64) -> Result<Ring, ScalarError> {
        if m < 2 {
            return Err(ScalarError::InvalidRing(format!("mod:{m}")));
        }
        Ok(Ring::Modular(m))
    }

    /// 0 for the rationals, `m` for `Z/m`.
    pub fn characteristic(&self) -> u64 {
        match self {
            Ring::Rationals => 0,
            Ring::Modular(m) => *m,
        }
    }

    /// True for the rationals and for prime moduli.
    pub fn is_field(&self) -> bool {
        match self {
            Ring::Rationals => true,
            Ring::Modular(m) => smallest_prime_factor(*m) == *m,
        }
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match self {
            Ring::Rationals => Scalar::Rational(BigRational::from_integer(n.into())),
            Ring::Modular(m) => Scalar::Modular {
                residue: (n as i128).rem_euclid(*m as i128) as u64,
                modulus: *m,
            },
        }
    }

    pub fn from_bigint(&self, n: &BigInt) -> Scalar {
        match self {
            Ring::Rationals => Scalar::Rational(BigRational::from_integer(n.clone())),
            Ring::Modular(m) => {
                let r = n.mod_floor(&BigInt::from(*m));
                Scalar::Modular {
                    residue: r.to_u64().expect("residue fits in u64"),
                    modulus: *m,
                }
            }
        }
    }

    /// Maps `p/q` into the ring; fails when `q` is not invertible.
    pub fn from_rational(&self, q: &BigRational) -> Result<Scalar, ScalarError> {
        match self {
            Ring::Rationals => Ok(Scalar::Rational(q.clone())),
            Ring::Modular(_) => {
                let num = self.from_bigint(q.numer());
                let den = self.from_bigint(q.denom());
                Ok(&num * &den.inv()?)
            }
        }
    }

    pub fn is_unit(&self, a: &Scalar) -> bool {
        a.is_unit()
    }

    /// A random element: small fractions over the rationals, uniform residues otherwise.
    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Scalar {
        match self {
            Ring::Rationals => {
                let num: i64 = rng.gen_range(-6..=6);
                let den: i64 = if rng.gen_bool(0.3) { rng.gen_range(1..=4) } else { 1 };
                Scalar::Rational(BigRational::new(num.into(), den.into()))
            }
            Ring::Modular(m) => Scalar::Modular {
                residue: rng.gen_range(0..*m),
                modulus: *m,
            },
        }
    }

    /// A random unit, by rejection sampling.
    pub fn random_unit<R: Rng + ?Sized>(&self, rng: &mut R) -> Scalar {
        loop {
            let a = self.random(rng);
            if a.is_unit() {
                return a;
            }
        }
    }

    /// Candidate units in a fixed deterministic order (small integers first).
    pub fn unit_candidates(&self) -> Box<dyn Iterator<Item = Scalar> + '_> {
        match self {
            Ring::Rationals => Box::new(
                (2i64..)
                    .flat_map(|n| [n, -n])
                    .map(move |n| self.from_i64(n)),
            ),
            Ring::Modular(m) => Box::new(
                (2..*m)
                    .chain(std::iter::once(1))
                    .map(move |r| self.from_i64(r as i64))
                    .filter(|s| s.is_unit()),
            ),
        }
    }

    /// All elements of a finite ring, in residue order. Empty for the rationals.
    pub fn elements(&self) -> Vec<Scalar> {
        match self {
            Ring::Rationals => Vec::new(),
            Ring::Modular(m) => (0..*m).map(|r| self.from_i64(r as i64)).collect(),
        }
    }

    /// Parses `"p"`, `"p/q"` or (for modular rings) a JSON-style integer string.
    pub fn parse_scalar(&self, text: &str) -> Result<Scalar, ScalarError> {
        let text = text.trim();
        let q = parse_rational(text).ok_or_else(|| ScalarError::Parse(text.to_string()))?;
        self.from_rational(&q)
    }

    pub fn parse_json(&self, value: &serde_json::Value) -> Result<Scalar, ScalarError> {
        match value {
            serde_json::Value::String(s) => self.parse_scalar(s),
            serde_json::Value::Number(n) => self.parse_scalar(&n.to_string()),
            other => Err(ScalarError::Parse(other.to_string())),
        }
    }
}

pub(crate) fn parse_rational(text: &str) -> Option<BigRational> {
    match text.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                return None;
            }
            Some(BigRational::new(p, q))
        }
        None => Some(BigRational::from_integer(text.trim().parse().ok()?)),
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::Rationals => write!(f, "rat"),
            Ring::Modular(m) => write!(f, "mod:{m}"),
        }
    }
}

impl FromStr for Ring {
    type Err = ScalarError;

    fn from_str(s: &str) -> Result<Ring, ScalarError> {
        let s = s.trim();
        if s == "rat" {
            return Ok(Ring::Rationals);
        }
        s.strip_prefix("mod:")
            .and_then(|m| m.parse::<u64>().ok())
            .filter(|m| *m >= 2)
            .map(Ring::Modular)
            .ok_or_else(|| ScalarError::InvalidRing(s.to_string()))
    }
}

pub(crate) fn smallest_prime_factor(m: u64) -> u64 {
    if m % 2 == 0 {
        return 2;
    }
    let mut p = 3;
    while p * p <= m {
        if m % p == 0 {
            return p;
        }
        p += 2;
    }
    m
}

fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

impl Scalar {
    pub fn ring(&self) -> Ring {
        match self {
            Scalar::Rational(_) => Ring::Rationals,
            Scalar::Modular { modulus, .. } => Ring::Modular(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Modular { residue, .. } => *residue == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_one(),
            Scalar::Modular { residue, modulus } => *residue == 1 % *modulus,
        }
    }

    pub fn is_unit(&self) -> bool {
        match self {
            Scalar::Rational(q) => !q.is_zero(),
            Scalar::Modular { residue, modulus } => residue.gcd(modulus) == 1,
        }
    }

    pub fn inv(&self) -> Result<Scalar, ScalarError> {
        let fail = || ScalarError::NotAUnit(self.to_string(), self.ring());
        match self {
            Scalar::Rational(q) => {
                if q.is_zero() {
                    Err(fail())
                } else {
                    Ok(Scalar::Rational(q.recip()))
                }
            }
            Scalar::Modular { residue, modulus } => mod_inverse(*residue, *modulus)
                .map(|r| Scalar::Modular { residue: r, modulus: *modulus })
                .ok_or_else(fail),
        }
    }

    pub fn pow(&self, mut e: u32) -> Scalar {
        let mut base = self.clone();
        let mut acc = self.ring().one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Rational value of the scalar (canonical representative for residues).
    pub fn to_rational(&self) -> BigRational {
        match self {
            Scalar::Rational(q) => q.clone(),
            Scalar::Modular { residue, .. } => BigRational::from_integer((*residue).into()),
        }
    }

    /// JSON encoding: `"p/q"` strings for rationals, integers for residues.
    pub fn to_json(&self) -> serde_json::Value {
        match self {
            Scalar::Rational(_) => serde_json::Value::String(self.to_string()),
            Scalar::Modular { residue, .. } => serde_json::Value::from(*residue),
        }
    }

    pub(crate) fn residue_parts(&self) -> Option<(u64, u64)> {
        match self {
            Scalar::Modular { residue, modulus } => Some((*residue, *modulus)),
            Scalar::Rational(_) => None,
        }
    }

    pub(crate) fn is_negative_rational(&self) -> bool {
        matches!(self, Scalar::Rational(q) if q.is_negative())
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => {
                if q.denom().is_one() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            Scalar::Modular { residue, .. } => write!(f, "{residue}"),
        }
    }
}

fn same_modulus(a: u64, b: u64) -> u64 {
    assert_eq!(a, b, "scalars from different rings (mod:{a} vs mod:{b})");
    a
}

macro_rules! binop {
    ($trait:ident, $method:ident, $rat:expr, $modop:expr) => {
        impl $trait<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                match (self, rhs) {
                    (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational($rat(a, b)),
                    (
                        Scalar::Modular { residue: a, modulus: m },
                        Scalar::Modular { residue: b, modulus: n },
                    ) => {
                        let m = same_modulus(*m, *n);
                        Scalar::Modular { residue: $modop(*a as u128, *b as u128, m as u128) as u64, modulus: m }
                    }
                    (a, b) => panic!("scalars from different rings ({} vs {})", a.ring(), b.ring()),
                }
            }
        }
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
    };
}

binop!(Add, add, |a: &BigRational, b: &BigRational| a + b, |a: u128, b: u128, m: u128| (a + b) % m);
binop!(Sub, sub, |a: &BigRational, b: &BigRational| a - b, |a: u128, b: u128, m: u128| (a + m - b) % m);
binop!(Mul, mul, |a: &BigRational, b: &BigRational| a * b, |a: u128, b: u128, m: u128| (a * b) % m);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(q) => Scalar::Rational(-q),
            Scalar::Modular { residue, modulus } => Scalar::Modular {
                residue: (modulus - residue) % modulus,
                modulus: *modulus,
            },
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

/// `n` distinct units whose pairwise differences are units, deterministic in `seed`.
///
/// Over `Z/m` such a family exists iff `n <= p - 1` for the smallest prime `p | m`.
pub fn sample_units(ring: &Ring, n: usize, seed: u64) -> Result<Vec<Scalar>, ScalarError> {
    let exhausted = || ScalarError::Exhausted { ring: ring.clone(), wanted: n };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match ring {
        Ring::Rationals => {
            let mut out: Vec<Scalar> = Vec::with_capacity(n);
            while out.len() < n {
                let cand = ring.random_unit(&mut rng);
                if !out.contains(&cand) {
                    out.push(cand);
                }
            }
            Ok(out)
        }
        Ring::Modular(m) => {
            if n as u64 >= smallest_prime_factor(*m) {
                return Err(exhausted());
            }
            let ok_with = |out: &[Scalar], c: &Scalar| c.is_unit() && out.iter().all(|o| (o - c).is_unit());
            for _ in 0..64 {
                let mut out: Vec<Scalar> = Vec::with_capacity(n);
                for _ in 0..(16 * n + 16) {
                    if out.len() == n {
                        break;
                    }
                    let c = ring.random(&mut rng);
                    if ok_with(&out, &c) {
                        out.push(c);
                    }
                }
                if out.len() == n {
                    return Ok(out);
                }
            }
            // 1, 2, ..., n always works below the smallest prime factor.
            let mut out: Vec<Scalar> = (1..=n as i64).map(|i| ring.from_i64(i)).collect();
            out.shuffle(&mut rng);
            Ok(out)
        }
    }
}

/// Determinant over `Q` or `Z/m`, by fraction-free (Euclidean) elimination.
pub fn determinant(ring: &Ring, matrix: &[Vec<Scalar>]) -> Scalar {
    let n = matrix.len();
    let mut a: Vec<Vec<Scalar>> = matrix.to_vec();
    let mut det = ring.one();
    match ring {
        Ring::Rationals => {
            for col in 0..n {
                let Some(piv) = (col..n).find(|&r| !a[r][col].is_zero()) else {
                    return ring.zero();
                };
                if piv != col {
                    a.swap(piv, col);
                    det = -det;
                }
                let p = a[col][col].clone();
                det = &det * &p;
                let pinv = p.inv().expect("nonzero rational");
                for r in col + 1..n {
                    if a[r][col].is_zero() {
                        continue;
                    }
                    let factor = &a[r][col] * &pinv;
                    for c in col..n {
                        let t = &factor * &a[col][c];
                        a[r][c] = &a[r][c] - &t;
                    }
                }
            }
            det
        }
        Ring::Modular(_) => {
            // Row operations with integer quotients are unimodular, so they work mod any m.
            for col in 0..n {
                loop {
                    let nonzero: Vec<usize> = (col..n).filter(|&r| !a[r][col].is_zero()).collect();
                    if nonzero.is_empty() {
                        return ring.zero();
                    }
                    let piv = *nonzero
                        .iter()
                        .min_by_key(|&&r| a[r][col].residue_parts().unwrap().0)
                        .unwrap();
                    if piv != col {
                        a.swap(piv, col);
                        det = -det;
                    }
                    if nonzero.len() == 1 {
                        break;
                    }
                    let p = a[col][col].residue_parts().unwrap().0;
                    for r in col + 1..n {
                        let v = a[r][col].residue_parts().unwrap().0;
                        if v == 0 {
                            continue;
                        }
                        let q = ring.from_i64((v / p) as i64);
                        for c in col..n {
                            let t = &q * &a[col][c];
                            a[r][c] = &a[r][c] - &t;
                        }
                    }
                }
                det = &det * &a[col][col];
            }
            det
        }
    }
}

/// Reduces a list of vectors to a spanning set in echelon form (fields only).
pub(crate) fn echelon_basis(ring: &Ring, vectors: Vec<Vec<Scalar>>) -> Vec<Vec<Scalar>> {
    debug_assert!(ring.is_field());
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    for mut v in vectors {
        for (row, &p) in rows.iter().zip(&pivots) {
            if !v[p].is_zero() {
                let f = v[p].clone();
                for (x, y) in v.iter_mut().zip(row) {
                    *x = &*x - &(&f * y);
                }
            }
        }
        if let Some(p) = v.iter().position(|x| !x.is_zero()) {
            let inv = v[p].inv().expect("field element");
            for x in v.iter_mut() {
                *x = &*x * &inv;
            }
            for row in rows.iter_mut() {
                if !row[p].is_zero() {
                    let f = row[p].clone();
                    for (x, y) in row.iter_mut().zip(&v) {
                        *x = &*x - &(&f * y);
                    }
                }
            }
            rows.push(v);
            pivots.push(p);
        }
    }
    rows
}

/// A spanning set of the row span in echelon form, at most one row per column.
///
/// Over `Z/m` the reduction uses only unimodular integer row operations, so
/// the span is preserved even when `m` is composite.
pub(crate) fn span_basis(ring: &Ring, vectors: Vec<Vec<Scalar>>) -> Vec<Vec<Scalar>> {
    match ring {
        Ring::Rationals => echelon_basis(ring, vectors),
        Ring::Modular(_) => {
            let mut rows: Vec<Vec<Scalar>> = vectors.into_iter().filter(|v| v.iter().any(|x| !x.is_zero())).collect();
            let ncols = rows.first().map_or(0, Vec::len);
            let mut done: Vec<Vec<Scalar>> = Vec::new();
            for col in 0..ncols {
                loop {
                    let live: Vec<usize> = (0..rows.len()).filter(|&r| !rows[r][col].is_zero()).collect();
                    if live.len() <= 1 {
                        if let Some(&r) = live.first() {
                            done.push(rows.swap_remove(r));
                        }
                        break;
                    }
                    let piv = *live.iter().min_by_key(|&&r| rows[r][col].residue_parts().unwrap().0).unwrap();
                    let p = rows[piv][col].residue_parts().unwrap().0;
                    let pivot_row = rows[piv].clone();
                    for &r in &live {
                        if r == piv {
                            continue;
                        }
                        let v = rows[r][col].residue_parts().unwrap().0;
                        let q = ring.from_i64((v / p) as i64);
                        for (x, y) in rows[r].iter_mut().zip(&pivot_row) {
                            *x = &*x - &(&q * y);
                        }
                    }
                }
                rows.retain(|v| v.iter().any(|x| !x.is_zero()));
            }
            done
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> Scalar {
        Scalar::Rational(BigRational::new(p.into(), d.into()))
    }

    #[test]
    fn unit_detection() {
        assert!(!Ring::Rationals.zero().is_unit());
        assert!(!Ring::Modular(6).from_i64(3).is_unit());
        assert!(Ring::Modular(101).from_i64(7).is_unit());
    }

    #[test]
    fn inverses() {
        assert_eq!(q(2, 3).inv().unwrap(), q(3, 2));
        let z101 = Ring::Modular(101);
        assert_eq!(z101.from_i64(2).inv().unwrap(), z101.from_i64(51));
        assert!(matches!(z101.zero().inv(), Err(ScalarError::NotAUnit(..))));
    }

    #[test]
    fn prime_field_units() {
        let ring = Ring::Modular(13);
        for a in ring.elements().into_iter().skip(1) {
            let b = a.inv().unwrap();
            assert!((&a * &b).is_one());
            assert!((&b * &a).is_one());
        }
    }

    #[test]
    fn sampling_units() {
        let three = sample_units(&Ring::Rationals, 3, 1).unwrap();
        assert_eq!(three.len(), 3);
        let four = sample_units(&Ring::Modular(101), 4, 9).unwrap();
        for (i, a) in four.iter().enumerate() {
            assert!(a.is_unit());
            for b in &four[i + 1..] {
                assert!((a - b).is_unit());
            }
        }
        assert_eq!(four, sample_units(&Ring::Modular(101), 4, 9).unwrap());
        assert!(matches!(
            sample_units(&Ring::Modular(2), 3, 0),
            Err(ScalarError::Exhausted { .. })
        ));
        // mod 15: smallest prime factor 3 allows at most two
        assert!(sample_units(&Ring::Modular(15), 2, 4).is_ok());
        assert!(sample_units(&Ring::Modular(15), 3, 4).is_err());
    }

    #[test]
    fn ring_strings() {
        assert_eq!("rat".parse::<Ring>().unwrap(), Ring::Rationals);
        assert_eq!("mod:7".parse::<Ring>().unwrap(), Ring::Modular(7));
        assert!("mod:1".parse::<Ring>().is_err());
        assert!("real".parse::<Ring>().is_err());
        assert_eq!(Ring::Modular(7).to_string(), "mod:7");
    }

    #[test]
    fn parse_and_print() {
        let r = Ring::Rationals;
        assert_eq!(r.parse_scalar("-3/6").unwrap(), q(-1, 2));
        assert_eq!(q(-1, 2).to_string(), "-1/2");
        assert_eq!(Ring::Modular(7).parse_scalar("1/2").unwrap(), Ring::Modular(7).from_i64(4));
        assert!(Ring::Modular(6).parse_scalar("1/2").is_err());
    }

    #[test]
    fn determinants() {
        let r = Ring::Rationals;
        let m = vec![vec![r.from_i64(2), r.from_i64(1)], vec![r.from_i64(4), r.from_i64(3)]];
        assert_eq!(determinant(&r, &m), r.from_i64(2));
        let z = Ring::Modular(12);
        let m = vec![vec![z.from_i64(4), z.from_i64(3)], vec![z.from_i64(6), z.from_i64(5)]];
        // 20 - 18 = 2
        assert_eq!(determinant(&z, &m), z.from_i64(2));
    }

    #[test]
    #[should_panic(expected = "different rings")]
    fn cross_ring_mixing_panics() {
        let _ = Ring::Modular(5).one() + Ring::Modular(7).one();
    }
}
