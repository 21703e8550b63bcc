use crate::algebra::{AlgebraicMap, KAlgebra};
use crate::polymap::{Poly, PolyRing};
use crate::scalars::{Ring, Scalar};
use crate::smoothexpr::{ExprError, ExprMap};

use super::symbolic::div_exact;
use super::{check_vectors, DiffError, MAX_ORDER};

/// `((v_α)_α, (t_α)_{α≠∅})` with `α` a subset bitmask of `{1, …, k}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CubicPoint {
    ring: Ring,
    order: usize,
    space: Vec<Vec<Scalar>>,
    /// Slot 0 is unused and holds zero.
    time: Vec<Scalar>,
}

impl CubicPoint {
    /// `space` has `2^k` entries; `time[i]` is the time of mask `i + 1`.
    pub fn new(ring: &Ring, order: usize, space: Vec<Vec<Scalar>>, time: Vec<Scalar>) -> Result<CubicPoint, DiffError> {
        if order > MAX_ORDER {
            return Err(DiffError::OrderTooLarge(order));
        }
        let n = 1 << order;
        if space.len() != n || time.len() != n - 1 {
            return Err(DiffError::Shape(format!("order {order} needs {n} vectors and {} times", n - 1)));
        }
        check_vectors(ring, &space)?;
        if time.iter().any(|t| &t.ring() != ring) {
            return Err(DiffError::Shape("time outside the ring".into()));
        }
        let time = std::iter::once(ring.zero()).chain(time).collect();
        Ok(CubicPoint { ring: ring.clone(), order, space, time })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn space(&self, mask: usize) -> &[Scalar] {
        &self.space[mask]
    }

    pub fn time(&self, mask: usize) -> &Scalar {
        assert!(mask > 0, "the empty subset carries no time");
        &self.time[mask]
    }

    pub fn spaces(&self) -> &[Vec<Scalar>] {
        &self.space
    }

    /// Times of the nonempty masks in increasing order.
    pub fn times(&self) -> &[Scalar] {
        &self.time[1..]
    }

    /// Every quotient in the recursion divides by a unit. This depends on the
    /// times only, and is weaker than asking every `t_α` to be a unit.
    pub fn is_nonsingular(&self) -> bool {
        nonsingular(&self.ring, self.order, &self.time)
    }

    fn with_space(&self, space: Vec<Vec<Scalar>>) -> CubicPoint {
        CubicPoint { ring: self.ring.clone(), order: self.order, space, time: self.time.clone() }
    }
}

fn nonsingular(ring: &Ring, k: usize, time: &[Scalar]) -> bool {
    if k == 0 {
        return true;
    }
    let b = 1 << (k - 1);
    let t = &time[b];
    if !t.is_unit() {
        return false;
    }
    let shifted: Vec<Scalar> = (0..b).map(|m| if m == 0 { ring.zero() } else { &time[m] + &(t * &time[m | b]) }).collect();
    nonsingular(ring, k - 1, &time[..b]) && nonsingular(ring, k - 1, &shifted)
}

/// Division by a time, in the numeric or the symbolic setting.
pub(crate) trait Quotient: KAlgebra {
    fn quotient(&self, a: &Self::Elem, t: &Self::Elem) -> Result<Self::Elem, DiffError>;
}

impl Quotient for Ring {
    fn quotient(&self, a: &Scalar, t: &Scalar) -> Result<Scalar, DiffError> {
        Ok(a * &t.inv().map_err(|_| DiffError::SingularTime(t.to_string()))?)
    }
}

impl Quotient for PolyRing {
    fn quotient(&self, a: &Poly, t: &Poly) -> Result<Poly, DiffError> {
        div_exact(a, t).ok_or_else(|| DiffError::DivisionNotExact(t.to_text("t")))
    }
}

/// `T^{]k[} f`: entry `m` of the result is the component of mask `m`.
pub(crate) fn extend<A: Quotient>(
    f: &ExprMap,
    alg: &A,
    k: usize,
    space: &[Vec<A::Elem>],
    time: &[A::Elem],
) -> Result<Vec<Vec<A::Elem>>, DiffError> {
    if k == 0 {
        return Ok(vec![f.eval_in(alg, &space[0])?]);
    }
    let b = 1 << (k - 1);
    let t = &time[b];
    let moved: Vec<Vec<A::Elem>> =
        (0..b).map(|m| space[m].iter().zip(&space[m | b]).map(|(x, u)| alg.add(x, &alg.mul(t, u))).collect()).collect();
    let moved_time: Vec<A::Elem> =
        (0..b).map(|m| if m == 0 { alg.zero() } else { alg.add(&time[m], &alg.mul(t, &time[m | b])) }).collect();
    let mut out = extend(f, alg, k - 1, &space[..b], &time[..b])?;
    let far = extend(f, alg, k - 1, &moved, &moved_time)?;
    for m in 0..b {
        let d = out[m].iter().zip(&far[m]).map(|(a, c)| alg.quotient(&alg.sub(c, a), t)).collect::<Result<_, _>>()?;
        out.push(d);
    }
    Ok(out)
}

fn check_map(f: &ExprMap, p: &CubicPoint) -> Result<(), DiffError> {
    if p.space.first().map_or(0, Vec::len) != f.arity() {
        return Err(ExprError::Eval(crate::EvalError::ArityMismatch { expected: f.arity(), got: p.space[0].len() }).into());
    }
    if !p.is_nonsingular() {
        return Err(DiffError::SingularTime(format!("point of order {} is singular", p.order)));
    }
    Ok(())
}

/// The extended tangent map at a nonsingular point; times pass through unchanged.
pub fn extended_tangent(f: &ExprMap, p: &CubicPoint) -> Result<CubicPoint, DiffError> {
    check_map(f, p)?;
    let out = extend(f, &p.ring, p.order, &p.space, &p.time)?;
    Ok(p.with_space(out))
}

/// `(f(x + tv) − f(x)) / t` at an order-1 point.
pub fn cubic_dq(f: &ExprMap, p: &CubicPoint) -> Result<Vec<Scalar>, DiffError> {
    if p.order != 1 {
        return Err(DiffError::Shape(format!("expected order 1, got {}", p.order)));
    }
    Ok(extended_tangent(f, p)?.space[1].clone())
}

/// `T^{]k[} f` with all times formal: variable `i` of the result is the time of mask `i + 1`.
pub fn symbolic_cubic(f: &ExprMap, ring: &Ring, k: usize, space: &[Vec<Scalar>]) -> Result<Vec<Vec<Poly>>, DiffError> {
    if k > MAX_ORDER {
        return Err(DiffError::OrderTooLarge(k));
    }
    if space.len() != 1 << k {
        return Err(DiffError::Shape(format!("order {k} needs {} vectors", 1 << k)));
    }
    if !f.is_polynomial() {
        return Err(ExprError::NotPolynomial(f.to_string()).into());
    }
    check_vectors(ring, space)?;
    let n = (1 << k) - 1;
    let pr = PolyRing::new(ring, n, None);
    let sp: Vec<Vec<Poly>> = space.iter().map(|v| v.iter().map(|c| pr.embed(c)).collect()).collect();
    let time: Vec<Poly> = (0..=n).map(|m| if m == 0 { pr.zero() } else { pr.var(m - 1) }).collect();
    extend(f, &pr, k, &sp, &time)
}

/// `d²f(x)(u, v)`: the top component of the order-2 quotient at `(x, u, v, 0)`, at `t = 0`.
pub fn second_differential(
    f: &ExprMap,
    ring: &Ring,
    x: &[Scalar],
    u: &[Scalar],
    v: &[Scalar],
) -> Result<Vec<Scalar>, DiffError> {
    let zero = vec![ring.zero(); x.len()];
    let out = symbolic_cubic(f, ring, 2, &[x.to_vec(), u.to_vec(), v.to_vec(), zero])?;
    Ok(out[3].iter().map(|p| p.constant_term().cloned().unwrap_or_else(|| ring.zero())).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(r: &Ring, v: &[i64]) -> Vec<Scalar> {
        v.iter().map(|&i| r.from_i64(i)).collect()
    }

    fn point1(r: &Ring, x: i64, v: i64, t: i64) -> CubicPoint {
        CubicPoint::new(r, 1, vec![ints(r, &[x]), ints(r, &[v])], ints(r, &[t])).unwrap()
    }

    #[test]
    fn first_order_quotients() {
        let r = Ring::Rationals;
        let sq = ExprMap::parse("x0^2").unwrap();
        // 2xv + tv^2 at x = 3, v = 5, t = 2
        assert_eq!(cubic_dq(&sq, &point1(&r, 3, 5, 2)).unwrap(), ints(&r, &[80]));
        let lin = ExprMap::parse("4*x0").unwrap();
        assert_eq!(cubic_dq(&lin, &point1(&r, 3, 5, 7)).unwrap(), ints(&r, &[20]));
        assert!(matches!(cubic_dq(&sq, &point1(&r, 3, 5, 0)), Err(DiffError::SingularTime(_))));
    }

    #[test]
    fn symbolic_first_order() {
        let r = Ring::Rationals;
        let sq = ExprMap::parse("x0^2").unwrap();
        let out = symbolic_cubic(&sq, &r, 1, &[ints(&r, &[3]), ints(&r, &[5])]).unwrap();
        // 30 + 25 t
        assert_eq!(out[1][0], crate::PolyMap::parse("30 + 25*x0", &r).unwrap().outputs()[0]);
    }

    #[test]
    fn nonsingularity_is_recursive() {
        let r = Ring::Rationals;
        let zero_space = vec![ints(&r, &[0]); 4];
        // t_1 = 0 is singular even though t_2 and t_12 are units.
        let p = CubicPoint::new(&r, 2, zero_space.clone(), ints(&r, &[0, 1, 1])).unwrap();
        assert!(!p.is_nonsingular());
        // t_12 = 0 is allowed.
        let q = CubicPoint::new(&r, 2, zero_space.clone(), ints(&r, &[1, 1, 0])).unwrap();
        assert!(q.is_nonsingular());
        // shifted time t_1 + t_2 t_12 = 0 is singular.
        let s = CubicPoint::new(&r, 2, zero_space, ints(&r, &[1, 1, -1])).unwrap();
        assert!(!s.is_nonsingular());
    }

    #[test]
    fn schwarz_symmetry() {
        let r = Ring::Rationals;
        let f = ExprMap::parse("x0^2*x1 + 3*x1^3").unwrap();
        let (x, u, v) = (ints(&r, &[1, 2]), ints(&r, &[3, -1]), ints(&r, &[2, 5]));
        let a = second_differential(&f, &r, &x, &u, &v).unwrap();
        assert_eq!(a, second_differential(&f, &r, &x, &v, &u).unwrap());
        // d²(x0^2 x1) = 2 x1 u0 v0 + 2 x0 (u0 v1 + u1 v0), d²(3 x1^3) = 18 x1 u1 v1
        assert_eq!(a, ints(&r, &[24 + 2 * (15 - 2) - 180]));
    }
}
