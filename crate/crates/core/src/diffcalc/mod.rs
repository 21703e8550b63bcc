//! Difference calculus on extended domains.
//!
//! Cubic points of order `k` are stored flat, indexed by subset bitmask: bit
//! `i` stands for the index `i + 1`. Simplicial points carry `v_0, …, v_k` and
//! times `s_1, …, s_k` with the convention `s_0 = 0`.

mod cubic;
mod embed;
mod simplicial;
mod symbolic;

use thiserror::Error;

use crate::algebra::EvalError;
use crate::scalars::{Ring, Scalar};
use crate::smoothexpr::ExprError;

pub use cubic::{cubic_dq, extended_tangent, second_differential, symbolic_cubic, CubicPoint};
pub use embed::{
    calibrate_embedding_signs, check_embedding, embedding_signs, g_embed, g_unembed, rho_cubic, rho_simplicial,
    EmbeddingReport, EMBEDDING_SIGNS,
};
pub use simplicial::{extended_jet, simplicial_dq, SimplicialPoint};
pub use symbolic::{div_exact, symbolic_simplicial, SymbolicJet};

/// Cubic points have `2^k` space slots; larger orders are refused.
pub const MAX_ORDER: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiffError {
    #[error("time {0} is not a unit")]
    SingularTime(String),
    #[error("order {0} exceeds the supported maximum {MAX_ORDER}")]
    OrderTooLarge(usize),
    #[error("malformed point: {0}")]
    Shape(String),
    #[error("not in the image of the simplicial embedding: {0}")]
    NotInImage(String),
    #[error("division by {0} is not exact")]
    DivisionNotExact(String),
    #[error("{0} is not a unit")]
    NotAUnit(String),
    #[error("inconsistent sign calibration at component {0}")]
    Calibration(usize),
    #[error(transparent)]
    Expr(#[from] ExprError),
}

impl From<EvalError> for DiffError {
    fn from(e: EvalError) -> DiffError {
        DiffError::Expr(ExprError::Eval(e))
    }
}

impl DiffError {
    pub fn is_domain(&self) -> bool {
        matches!(self, DiffError::Expr(e) if e.is_domain())
    }
}

fn unit_inverse(r: &Scalar) -> Result<Scalar, DiffError> {
    r.inv().map_err(|_| DiffError::NotAUnit(r.to_string()))
}

fn check_vectors(ring: &Ring, vs: &[Vec<Scalar>]) -> Result<usize, DiffError> {
    let m = vs.first().map_or(0, Vec::len);
    if vs.iter().any(|v| v.len() != m) {
        return Err(DiffError::Shape("vectors of different lengths".into()));
    }
    if vs.iter().flatten().any(|c| &c.ring() != ring) {
        return Err(DiffError::Shape("coordinate outside the ring".into()));
    }
    Ok(m)
}
