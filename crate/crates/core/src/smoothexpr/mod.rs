//! Rational expression maps, evaluable over any commutative `K`-algebra.
//!
//! Evaluating at `x + ν` with `ν` nilpotent is the Weil functor `T^A`; the
//! domain of a map is implicit and consists of the points where every
//! inverted subexpression evaluates to a unit.

mod parse;

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed};
use thiserror::Error;

use crate::algebra::{AlgebraicMap, EvalError, KAlgebra};
use crate::polymap::{PolyError, PolyMap, PolyRing};
use crate::scalars::{Ring, Scalar, ScalarError};
use crate::weil::{Tower, WeilAlgebra, WeilElement, WeilError};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    Const(BigRational),
    Var(usize),
    Add(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    ScalarMul(BigRational, Box<Expr>),
    IntPow(Box<Expr>, u32),
    Inv(Box<Expr>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Weil(#[from] WeilError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("expression is not polynomial: {0}")]
    NotPolynomial(String),
    #[error("argument {0} has a nonzero augmentation")]
    NotNilpotent(usize),
    #[error("independent computations disagree: {0}")]
    PathMismatch(String),
}

impl ExprError {
    /// The point lies outside the domain of a rational map.
    pub fn is_domain(&self) -> bool {
        matches!(self, ExprError::Eval(EvalError::Domain(_)) | ExprError::Poly(PolyError::Eval(EvalError::Domain(_))))
    }
}

impl Expr {
    pub fn max_var(&self) -> Option<usize> {
        match self {
            Expr::Const(_) => None,
            Expr::Var(i) => Some(*i),
            Expr::Add(a, b) | Expr::Mul(a, b) => a.max_var().max(b.max_var()),
            Expr::Neg(a) | Expr::ScalarMul(_, a) | Expr::IntPow(a, _) | Expr::Inv(a) => a.max_var(),
        }
    }

    pub fn has_inv(&self) -> bool {
        match self {
            Expr::Const(_) | Expr::Var(_) => false,
            Expr::Inv(_) => true,
            Expr::Add(a, b) | Expr::Mul(a, b) => a.has_inv() || b.has_inv(),
            Expr::Neg(a) | Expr::ScalarMul(_, a) | Expr::IntPow(a, _) => a.has_inv(),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Expr::Const(_) | Expr::Var(_) => 1,
            Expr::Add(a, b) | Expr::Mul(a, b) => 1 + a.size() + b.size(),
            Expr::Neg(a) | Expr::ScalarMul(_, a) | Expr::IntPow(a, _) | Expr::Inv(a) => 1 + a.size(),
        }
    }

    /// Replaces `Var(i)` by `subs[i]`.
    pub fn substitute(&self, subs: &[Expr]) -> Expr {
        let go = |e: &Expr| Box::new(e.substitute(subs));
        match self {
            Expr::Const(c) => Expr::Const(c.clone()),
            Expr::Var(i) => subs[*i].clone(),
            Expr::Add(a, b) => Expr::Add(go(a), go(b)),
            Expr::Mul(a, b) => Expr::Mul(go(a), go(b)),
            Expr::Neg(a) => Expr::Neg(go(a)),
            Expr::ScalarMul(c, a) => Expr::ScalarMul(c.clone(), go(a)),
            Expr::IntPow(a, n) => Expr::IntPow(go(a), *n),
            Expr::Inv(a) => Expr::Inv(go(a)),
        }
    }

    pub fn eval_in<A: KAlgebra>(&self, alg: &A, args: &[A::Elem]) -> Result<A::Elem, EvalError> {
        let constant = |c: &BigRational| {
            alg.ring()
                .from_rational(c)
                .map_err(|_| EvalError::ConstantNotInRing(fmt_rational(c), alg.ring().clone()))
        };
        Ok(match self {
            Expr::Const(c) => alg.embed(&constant(c)?),
            Expr::Var(i) => args.get(*i).cloned().ok_or(EvalError::ArityMismatch { expected: i + 1, got: args.len() })?,
            Expr::Add(a, b) => alg.add(&a.eval_in(alg, args)?, &b.eval_in(alg, args)?),
            Expr::Neg(a) => alg.neg(&a.eval_in(alg, args)?),
            Expr::Mul(a, b) => alg.mul(&a.eval_in(alg, args)?, &b.eval_in(alg, args)?),
            Expr::ScalarMul(c, a) => alg.scale(&constant(c)?, &a.eval_in(alg, args)?),
            Expr::IntPow(a, n) => alg.pow(&a.eval_in(alg, args)?, *n),
            Expr::Inv(a) => {
                let v = a.eval_in(alg, args)?;
                alg.inv(&v).ok_or_else(|| EvalError::Domain(a.to_string()))?
            }
        })
    }
}

fn fmt_rational(c: &BigRational) -> String {
    if c.denom().is_one() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for Expr {
    /// Fully parenthesized form; parsing it gives back the same tree.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) if c.is_negative() => write!(f, "({})", fmt_rational(c)),
            Expr::Const(c) => write!(f, "{}", fmt_rational(c)),
            Expr::Var(i) => write!(f, "x{i}"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Neg(a) => write!(f, "(-({a}))"),
            Expr::Mul(a, b) => write!(f, "(({a}) * {b})"),
            Expr::ScalarMul(c, a) => write!(f, "({} * {a})", fmt_rational(c)),
            Expr::IntPow(a, n) => write!(f, "(({a})^{n})"),
            Expr::Inv(a) => write!(f, "(1/({a}))"),
        }
    }
}

/// A rational map `K^arity -> K^coarity` given by one expression per output.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExprMap {
    arity: usize,
    outputs: Vec<Expr>,
}

/// `(f(x), T^A_x f(ν))`.
#[derive(Debug, Clone, PartialEq)]
pub struct Pushforward {
    pub base: Vec<Scalar>,
    pub fiber: Vec<WeilElement>,
}

/// Result of comparing direct evaluation over `A ⊗ B` with iterated evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct NestingReport {
    pub direct: Vec<WeilElement>,
    pub nested: Vec<WeilElement>,
}

impl NestingReport {
    pub fn equal(&self) -> bool {
        self.direct == self.nested
    }
}

impl ExprMap {
    pub fn new(arity: usize, outputs: Vec<Expr>) -> Result<ExprMap, ExprError> {
        if let Some(m) = outputs.iter().filter_map(Expr::max_var).max() {
            if m >= arity {
                return Err(ExprError::Eval(EvalError::ArityMismatch { expected: arity, got: m + 1 }));
            }
        }
        Ok(ExprMap { arity, outputs })
    }

    /// Parses `expr (';' expr)*`; the arity is one more than the largest variable index.
    pub fn parse(text: &str) -> Result<ExprMap, ExprError> {
        let outputs = parse::parse_outputs(text)?;
        let arity = outputs.iter().filter_map(Expr::max_var).max().map_or(0, |m| m + 1);
        Ok(ExprMap { arity, outputs })
    }

    /// Parses with an explicit arity, which must cover every variable used.
    pub fn parse_with_arity(text: &str, arity: usize) -> Result<ExprMap, ExprError> {
        ExprMap::new(arity, parse::parse_outputs(text)?)
    }

    pub fn outputs(&self) -> &[Expr] {
        &self.outputs
    }

    pub fn with_arity(&self, arity: usize) -> Result<ExprMap, ExprError> {
        ExprMap::new(arity, self.outputs.clone())
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &ExprMap) -> Result<ExprMap, ExprError> {
        if inner.outputs.len() != self.arity {
            return Err(EvalError::ArityMismatch { expected: self.arity, got: inner.outputs.len() }.into());
        }
        Ok(ExprMap { arity: inner.arity, outputs: self.outputs.iter().map(|e| e.substitute(&inner.outputs)).collect() })
    }

    /// Tuple `(self, other)` of two maps on the same domain.
    pub fn product(&self, other: &ExprMap) -> Result<ExprMap, ExprError> {
        if self.arity != other.arity {
            return Err(EvalError::ArityMismatch { expected: self.arity, got: other.arity }.into());
        }
        let outputs = self.outputs.iter().chain(&other.outputs).cloned().collect();
        Ok(ExprMap { arity: self.arity, outputs })
    }

    pub fn from_polymap(p: &PolyMap) -> ExprMap {
        let text: Vec<String> = p.outputs().iter().map(|q| q.to_text("x")).collect();
        ExprMap::parse_with_arity(&text.join("; "), p.arity()).expect("printed polynomial parses")
    }

    pub fn is_polynomial(&self) -> bool {
        !self.outputs.iter().any(Expr::has_inv)
    }

    /// Expands into coefficient form; fails if an inverse is not a constant unit.
    pub fn to_polymap(&self, ring: &Ring) -> Result<PolyMap, ExprError> {
        let pr = PolyRing::new(ring, self.arity, None);
        let vars: Vec<_> = (0..self.arity).map(|i| pr.var(i)).collect();
        let outs = self.eval_in(&pr, &vars).map_err(|e| match e {
            EvalError::Domain(s) => ExprError::NotPolynomial(format!("1/({s}) is not a polynomial")),
            other => other.into(),
        })?;
        PolyMap::new(ring, self.arity, outs).map_err(|e| ExprError::NotPolynomial(e.to_string()))
    }

    /// `T^A` at `(x, ν)`, computed by direct evaluation at `x + ν` and checked
    /// against the nilpotent scalar extension of the Taylor polynomial at `x`.
    pub fn pushforward(&self, alg: &WeilAlgebra, x: &[Scalar], nu: &[WeilElement]) -> Result<Pushforward, ExprError> {
        if x.len() != self.arity || nu.len() != self.arity {
            return Err(EvalError::ArityMismatch { expected: self.arity, got: x.len().min(nu.len()) }.into());
        }
        if let Some(i) = nu.iter().position(|n| !n.project().is_zero()) {
            return Err(ExprError::NotNilpotent(i));
        }
        let base = self.eval_in(alg.ring(), x)?;
        let args: Vec<WeilElement> = x.iter().zip(nu).map(|(xi, ni)| alg.add(&alg.embed(xi), ni)).collect();
        let direct = self.eval_in(alg, &args)?;
        let fiber: Vec<WeilElement> = direct.iter().map(WeilElement::nilpotent_part).collect();
        let direct_base: Vec<Scalar> = direct.iter().map(WeilElement::project).collect();
        if direct_base != base {
            return Err(ExprError::PathMismatch("augmentation of T^A f differs from f(x)".into()));
        }
        let k = alg
            .nilpotency_order()
            .ok_or_else(|| WeilError::InvalidTable("augmentation ideal is not nilpotent".into()))?
            .saturating_sub(1) as u32;
        let taylor = crate::jetcalc::taylor(self, alg.ring(), x, k)?;
        let via_taylor = taylor.poly().eval_over(alg, nu)?;
        if via_taylor != fiber {
            return Err(ExprError::PathMismatch(format!(
                "direct fiber {fiber:?} != Taylor extension {via_taylor:?}"
            )));
        }
        Ok(Pushforward { base, fiber })
    }

    /// Evaluates once over `A ⊗ B` and once over `B` with coefficients in `A`.
    pub fn nested_vs_direct(
        &self,
        a: &WeilAlgebra,
        b: &WeilAlgebra,
        point: &[WeilElement],
    ) -> Result<NestingReport, ExprError> {
        let ab = WeilAlgebra::tensor(a, b)?;
        let tower = Tower::new(a.ring(), vec![a.clone(), b.clone()])?;
        let direct = self.eval_in(&ab, point)?;
        let lifted = point.iter().map(|p| tower.from_tensor(p)).collect::<Result<Vec<_>, _>>()?;
        let nested_raw = self.eval_in(&tower, &lifted)?;
        let nested = nested_raw.iter().map(|n| tower.to_tensor(n, &ab)).collect::<Result<Vec<_>, _>>()?;
        Ok(NestingReport { direct, nested })
    }
}

impl AlgebraicMap for ExprMap {
    fn arity(&self) -> usize {
        self.arity
    }

    fn coarity(&self) -> usize {
        self.outputs.len()
    }

    fn eval_in<A: KAlgebra>(&self, alg: &A, args: &[A::Elem]) -> Result<Vec<A::Elem>, EvalError> {
        self.check_args(alg, args)?;
        self.outputs.iter().map(|e| e.eval_in(alg, args)).collect()
    }
}

impl fmt::Display for ExprMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.outputs.iter().map(Expr::to_string).collect();
        write!(f, "{}", parts.join("; "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn parses_reciprocal() {
        let e = ExprMap::parse("1/(1+x0)").unwrap();
        let expected = Expr::Inv(Box::new(Expr::Add(Box::new(Expr::Const(int(1))), Box::new(Expr::Var(0)))));
        assert_eq!(e.outputs(), &[expected]);
    }

    #[test]
    fn parses_sums_and_arity() {
        let e = ExprMap::parse("x0^2 + 3*x1").unwrap();
        assert_eq!(e.arity(), 2);
        assert!(matches!(e.outputs()[0], Expr::Add(_, _)));
    }

    #[test]
    fn syntax_errors_carry_positions() {
        match ExprMap::parse("x0 +") {
            Err(ExprError::Syntax { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("{other:?}"),
        }
        for bad in ["", "x", "(x0", "x0^x1", "x0 $ 1", "1/0", "x0;"] {
            assert!(ExprMap::parse(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn literals_and_division() {
        let e = ExprMap::parse("3/4*x0 - x1/2").unwrap();
        let r = Ring::Rationals;
        let v = e.eval_scalars(&r, &[r.from_i64(4), r.from_i64(2)]).unwrap();
        assert_eq!(v, vec![r.from_i64(2)]);
    }

    #[test]
    fn printing_round_trips() {
        for text in [
            "1/(1+x0)",
            "x0^2 + 3*x1",
            "-x0 + (-2/3)*x1^3; 1/(x0*x1 - 5)",
            "-(3) * x0",
            "(1)*x0",
            "2*3*x0",
            "-3^2",
            "x0/(-2)",
        ] {
            let e = ExprMap::parse(text).unwrap();
            assert_eq!(ExprMap::parse(&e.to_string()).unwrap(), e, "{text} -> {e}");
        }
    }

    #[test]
    fn evaluation_over_jets() {
        let r = Ring::Rationals;
        let j2 = WeilAlgebra::jet(&r, 2);
        let f = ExprMap::parse("1/(1+x0)").unwrap();
        let out = f.eval_in(&j2, &[j2.basis_element(1)]).unwrap();
        assert_eq!(out[0], j2.element_from_ints(&[1, -1, 1]));

        let sq = ExprMap::parse("x0^2").unwrap();
        assert_eq!(sq.eval_scalars(&r, &[r.from_i64(3)]).unwrap(), vec![r.from_i64(9)]);

        let recip = ExprMap::parse("1/x0").unwrap();
        assert!(matches!(recip.eval_in(&j2, &[j2.basis_element(1)]), Err(EvalError::Domain(_))));
    }

    #[test]
    fn constants_outside_the_ring() {
        let m = Ring::Modular(6);
        let f = ExprMap::parse("1/2*x0").unwrap();
        assert!(matches!(f.eval_scalars(&m, &[m.one()]), Err(EvalError::ConstantNotInRing(..))));
    }

    #[test]
    fn pushforward_of_reciprocal() {
        let r = Ring::Rationals;
        let j1 = WeilAlgebra::jet(&r, 1);
        let f = ExprMap::parse("1/x0").unwrap();
        let pf = f.pushforward(&j1, &[r.from_i64(2)], &[j1.basis_element(1)]).unwrap();
        assert_eq!(pf.base, vec![r.parse_scalar("1/2").unwrap()]);
        assert_eq!(pf.fiber[0].coeffs(), &[r.zero(), r.parse_scalar("-1/4").unwrap()]);

        let zero = f.pushforward(&j1, &[r.from_i64(2)], &[KAlgebra::zero(&j1)]).unwrap();
        assert!(zero.fiber[0].is_zero());

        assert!(matches!(
            f.pushforward(&j1, &[r.zero()], &[j1.basis_element(1)]),
            Err(ExprError::Eval(EvalError::Domain(_)))
        ));
        assert!(matches!(
            f.pushforward(&j1, &[r.one()], &[KAlgebra::one(&j1)]),
            Err(ExprError::NotNilpotent(0))
        ));
    }

    #[test]
    fn nesting_dual_numbers() {
        let r = Ring::Rationals;
        let j1 = WeilAlgebra::jet(&r, 1);
        let ab = WeilAlgebra::tensor(&j1, &j1).unwrap();
        let f = ExprMap::parse("x0^2").unwrap();
        // 1 + ε + ε′
        let z = ab.element_from_ints(&[1, 1, 1, 0]);
        let rep = f.nested_vs_direct(&j1, &j1, &[z]).unwrap();
        assert!(rep.equal());
        assert_eq!(rep.direct[0], ab.element_from_ints(&[1, 2, 2, 2]));
    }

    #[test]
    fn polynomial_conversion() {
        let r = Ring::Rationals;
        let f = ExprMap::parse("(x0 + 1)^2 * 1/2").unwrap();
        assert_eq!(f.to_polymap(&r).unwrap(), PolyMap::parse("1/2*x0^2 + x0 + 1/2", &r).unwrap());
        assert!(matches!(ExprMap::parse("1/x0").unwrap().to_polymap(&r), Err(ExprError::NotPolynomial(_))));
    }
}
