use std::fmt;

use super::{WeilAlgebra, WeilError};
use crate::algebra::KAlgebra;
use crate::scalars::Scalar;

/// A dense coefficient vector over the basis of a Weil algebra.
#[derive(Clone, PartialEq)]
pub struct WeilElement {
    alg: WeilAlgebra,
    coeffs: Vec<Scalar>,
}

impl WeilElement {
    pub fn new(alg: &WeilAlgebra, coeffs: Vec<Scalar>) -> Result<WeilElement, WeilError> {
        if coeffs.len() != alg.dim() {
            return Err(WeilError::DimensionMismatch { expected: alg.dim(), got: coeffs.len() });
        }
        if coeffs.iter().any(|c| &c.ring() != alg.ring()) {
            return Err(WeilError::AlgebraMismatch);
        }
        Ok(WeilElement { alg: alg.clone(), coeffs })
    }

    pub(crate) fn from_parts(alg: WeilAlgebra, coeffs: Vec<Scalar>) -> WeilElement {
        debug_assert_eq!(coeffs.len(), alg.dim());
        WeilElement { alg, coeffs }
    }

    pub fn algebra(&self) -> &WeilAlgebra {
        &self.alg
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Scalar> {
        self.coeffs
    }

    fn check(&self, other: &WeilElement) -> Result<(), WeilError> {
        if self.alg.contains(other) {
            Ok(())
        } else {
            Err(WeilError::AlgebraMismatch)
        }
    }

    pub fn add(&self, other: &WeilElement) -> Result<WeilElement, WeilError> {
        self.check(other)?;
        Ok(self.alg.add(self, other))
    }

    pub fn sub(&self, other: &WeilElement) -> Result<WeilElement, WeilError> {
        self.check(other)?;
        Ok(self.alg.sub(self, other))
    }

    pub fn mul(&self, other: &WeilElement) -> Result<WeilElement, WeilError> {
        self.check(other)?;
        Ok(self.alg.mul(self, other))
    }

    pub fn neg(&self) -> WeilElement {
        self.alg.neg(self)
    }

    pub fn scalar_mul(&self, t: &Scalar) -> Result<WeilElement, WeilError> {
        if &t.ring() != self.alg.ring() {
            return Err(WeilError::AlgebraMismatch);
        }
        Ok(self.alg.scale(t, self))
    }

    pub fn pow(&self, e: u32) -> WeilElement {
        self.alg.pow(self, e)
    }

    /// Inverse via the nilpotent geometric series; fails when `π(a)` is not a unit.
    pub fn inv(&self) -> Result<WeilElement, WeilError> {
        self.alg.inv(self).ok_or_else(|| WeilError::NotAUnit(self.to_string()))
    }

    /// `π^A(a)`, the augmentation.
    pub fn project(&self) -> Scalar {
        super::sc_project(self.alg.ring(), &self.alg, &self.coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }

    /// `a − π(a)·1`.
    pub fn nilpotent_part(&self) -> WeilElement {
        let p = self.alg.embed(&self.project());
        self.alg.sub(self, &p)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(self.coeffs.iter().map(Scalar::to_json).collect())
    }
}

impl fmt::Debug for WeilElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.alg.label(), self)
    }
}

impl fmt::Display for WeilElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}
