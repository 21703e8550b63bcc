//! Exact Weil-algebra calculus: Taylor-mode differentiation of rational maps
//! over arbitrary commutative base rings, with a difference-quotient oracle.

pub mod algebra;
pub mod bench;
pub mod diffcalc;
pub mod jetcalc;
pub mod polymap;
pub mod random;
pub mod scalars;
pub mod smoothexpr;
pub mod verify;
pub mod weil;

pub use algebra::{AlgebraicMap, EvalError, KAlgebra};
pub use polymap::{Poly, PolyError, PolyMap, PolyRing};
pub use scalars::{sample_units, Ring, Scalar, ScalarError};
pub use smoothexpr::{Expr, ExprError, ExprMap};
pub use weil::{WeilAlgebra, WeilElement, WeilError};
