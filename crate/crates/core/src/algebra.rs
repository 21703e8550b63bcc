//! The commutative `K`-algebra interface every evaluator is generic over.

use std::fmt::Debug;

use thiserror::Error;

use crate::scalars::{Ring, Scalar};

/// A commutative unital algebra over an exact base ring.
///
/// Elements are plain values; the algebra object carries whatever shared
/// data (multiplication tables, nesting levels) the arithmetic needs.
pub trait KAlgebra {
    type Elem: Clone + PartialEq + Debug;

    fn ring(&self) -> &Ring;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    /// The structure map `K -> A`, `t |-> t * 1`.
    fn embed(&self, t: &Scalar) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn scale(&self, t: &Scalar, a: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    /// Multiplicative inverse, `None` when `a` is not a unit.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    /// Whether `a` is a well-formed element of this algebra.
    fn contains(&self, a: &Self::Elem) -> bool;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn pow(&self, a: &Self::Elem, mut e: u32) -> Self::Elem {
        let mut acc = self.one();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    fn sum<'a, I>(&self, items: I) -> Self::Elem
    where
        I: IntoIterator<Item = &'a Self::Elem>,
        Self::Elem: 'a,
    {
        items.into_iter().fold(self.zero(), |acc, x| self.add(&acc, x))
    }
}

impl KAlgebra for Ring {
    type Elem = Scalar;

    fn ring(&self) -> &Ring {
        self
    }
    fn zero(&self) -> Scalar {
        Ring::zero(self)
    }
    fn one(&self) -> Scalar {
        Ring::one(self)
    }
    fn embed(&self, t: &Scalar) -> Scalar {
        t.clone()
    }
    fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        a + b
    }
    fn neg(&self, a: &Scalar) -> Scalar {
        -a
    }
    fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        a - b
    }
    fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        a * b
    }
    fn scale(&self, t: &Scalar, a: &Scalar) -> Scalar {
        t * a
    }
    fn is_zero(&self, a: &Scalar) -> bool {
        a.is_zero()
    }
    fn inv(&self, a: &Scalar) -> Option<Scalar> {
        a.inv().ok()
    }
    fn contains(&self, a: &Scalar) -> bool {
        &a.ring() == self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("expected {expected} arguments, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    /// An inverted subexpression did not evaluate to a unit.
    #[error("domain error: {0} is not invertible at this point")]
    Domain(String),
    #[error("constant {0} does not exist in {1}")]
    ConstantNotInRing(String, Ring),
    #[error("argument does not belong to the evaluation algebra")]
    AlgebraMismatch,
}

/// A map `K^arity -> K^coarity` that can be evaluated over any commutative `K`-algebra.
pub trait AlgebraicMap {
    fn arity(&self) -> usize;
    fn coarity(&self) -> usize;
    fn eval_in<A: KAlgebra>(&self, alg: &A, args: &[A::Elem]) -> Result<Vec<A::Elem>, EvalError>;

    fn check_args<A: KAlgebra>(&self, alg: &A, args: &[A::Elem]) -> Result<(), EvalError> {
        if args.len() != self.arity() {
            return Err(EvalError::ArityMismatch { expected: self.arity(), got: args.len() });
        }
        if !args.iter().all(|a| alg.contains(a)) {
            return Err(EvalError::AlgebraMismatch);
        }
        Ok(())
    }

    /// Plain evaluation over the base ring.
    fn eval_scalars(&self, ring: &Ring, x: &[Scalar]) -> Result<Vec<Scalar>, EvalError> {
        self.eval_in(ring, x)
    }
}
