use crate::algebra::{AlgebraicMap, KAlgebra};
use crate::polymap::{Poly, PolyRing};
use crate::scalars::{Ring, Scalar};
use crate::smoothexpr::{ExprError, ExprMap};

use super::{check_vectors, DiffError};

/// Exact quotient `p / d` when `d = x_v − a` for some variable `x_v` not
/// occurring in `a`; `None` if no such variable exists or the remainder is nonzero.
pub fn div_exact(p: &Poly, d: &Poly) -> Option<Poly> {
    let n = d.nvars();
    let one = d.terms().values().next()?.ring().one();
    for v in 0..n {
        let cs = d.coefficients_in(v);
        if cs.len() == 2 && cs[1].degree() == Some(0) && cs[1].constant_term() == Some(&one) {
            return divide_by_root(p, v, &cs[0].neg());
        }
    }
    None
}

/// Synthetic division of `p` by `x_v − a`.
fn divide_by_root(p: &Poly, v: usize, a: &Poly) -> Option<Poly> {
    let n = p.nvars();
    let cs = p.coefficients_in(v);
    let top = cs.len() - 1;
    let mut qs = vec![Poly::zero(n); top];
    let mut carry = Poly::zero(n);
    for i in (1..=top).rev() {
        carry = cs[i].add(&a.mul(&carry));
        qs[i - 1] = carry.clone();
    }
    let rem = cs[0].add(&a.mul(&carry));
    if !rem.is_zero() {
        return None;
    }
    let mut q = Poly::zero(n);
    for (i, qi) in qs.iter().enumerate() {
        if qi.is_zero() {
            continue;
        }
        let mut e = vec![0; n];
        e[v] = i as u32;
        let ring = qi.terms().values().next().expect("nonzero").ring();
        q = q.add(&qi.mul(&Poly::monomial(e, ring.one())));
    }
    Some(q)
}

/// `f^{⟨j⟩}(v_0, …, v_j; s_1, …, s_j)` for `j = 0..=k` as polynomials in
/// formal times; variable `i` stands for `s_{i+1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolicJet {
    ring: Ring,
    pub components: Vec<Vec<Poly>>,
}

impl SymbolicJet {
    pub fn eval_at(&self, s: &[Scalar]) -> Vec<Vec<Scalar>> {
        self.components.iter().map(|c| c.iter().map(|p| p.eval_in(&self.ring, s)).collect()).collect()
    }

    /// Specialization at `s = 0`: the simplicial jet.
    pub fn at_zero(&self) -> Vec<Vec<Scalar>> {
        let zero = self.ring.zero();
        self.components.iter().map(|c| c.iter().map(|p| p.constant_term().unwrap_or(&zero).clone()).collect()).collect()
    }
}

/// Newton recursion with exact division by `Π_{ℓ<j} (s_j − s_ℓ)`.
pub fn symbolic_simplicial(f: &ExprMap, ring: &Ring, vs: &[Vec<Scalar>]) -> Result<SymbolicJet, DiffError> {
    if !f.is_polynomial() {
        return Err(ExprError::NotPolynomial(f.to_string()).into());
    }
    if vs.is_empty() {
        return Err(DiffError::Shape("at least one vector is required".into()));
    }
    if check_vectors(ring, vs)? != f.arity() {
        return Err(crate::EvalError::ArityMismatch { expected: f.arity(), got: vs[0].len() }.into());
    }
    let k = vs.len() - 1;
    let pr = PolyRing::new(ring, k, None);
    let s = |j: usize| if j == 0 { pr.zero() } else { pr.var(j - 1) };
    let consts = |v: &[Scalar]| v.iter().map(|c| pr.embed(c)).collect::<Vec<_>>();
    let base = f.eval_in(&pr, &consts(&vs[0]))?;
    let mut comps: Vec<Vec<Poly>> = vec![base.clone()];
    for j in 1..=k {
        // weights[i] = Π_{ℓ<i} (s_j − s_ℓ)
        let mut weights = vec![pr.one()];
        for i in 1..=j {
            weights.push(weights[i - 1].mul(&s(j).sub(&s(i - 1))));
        }
        let node: Vec<Poly> = (0..f.arity())
            .map(|c| (1..=j).fold(pr.embed(&vs[0][c]), |acc, i| acc.add(&weights[i].scale(&vs[i][c]))))
            .collect();
        let mut rest = f.eval_in(&pr, &node)?;
        for (o, r) in rest.iter_mut().enumerate() {
            for (i, comp) in comps.iter().enumerate() {
                *r = r.sub(&weights[i].mul(&comp[o]));
            }
            for l in 0..j {
                let d = s(j).sub(&s(l));
                *r = div_exact(r, &d).ok_or_else(|| DiffError::DivisionNotExact(d.to_text("s")))?;
            }
        }
        comps.push(rest);
    }
    Ok(SymbolicJet { ring: ring.clone(), components: comps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polymap::PolyMap;

    fn ints(r: &Ring, v: &[i64]) -> Vec<Scalar> {
        v.iter().map(|&i| r.from_i64(i)).collect()
    }

    #[test]
    fn exact_division() {
        let r = Ring::Rationals;
        let p = PolyMap::parse("x0^2 - x1^2", &r).unwrap().outputs()[0].clone();
        let d = PolyMap::parse("x0 - x1", &r).unwrap().outputs()[0].clone();
        let q = div_exact(&p, &d).unwrap();
        assert_eq!(q, PolyMap::parse("x0 + x1", &r).unwrap().outputs()[0]);
        let odd = PolyMap::parse("x0^2 + x1", &r).unwrap().outputs()[0].clone();
        assert!(div_exact(&odd, &d).is_none());
        let not_monic = PolyMap::parse("2*x0", &r).unwrap().outputs()[0].clone();
        assert!(div_exact(&p, &not_monic.with_nvars(2)).is_none());
    }

    #[test]
    fn square_components() {
        let r = Ring::Rationals;
        let f = ExprMap::parse("x0^2").unwrap();
        let (v0, v1, v2) = (2, 3, 5);
        let jet = symbolic_simplicial(&f, &r, &[ints(&r, &[v0]), ints(&r, &[v1]), ints(&r, &[v2])]).unwrap();
        // 2 v0 v1 + s1 v1^2
        let one = PolyMap::parse_with_arity(&format!("{} + {}*x0", 2 * v0 * v1, v1 * v1), 2, &r).unwrap();
        assert_eq!(jet.components[1], one.outputs());
        // v1^2 + 2 v0 v2 + 2 s2 v1 v2 + s2 (s2 − s1) v2^2
        let two = PolyMap::parse(
            &format!("{} + {}*x1 + {}*(x1^2 - x0*x1)", v1 * v1 + 2 * v0 * v2, 2 * v1 * v2, v2 * v2),
            &r,
        )
        .unwrap();
        assert_eq!(jet.components[2], two.outputs());
        assert_eq!(jet.at_zero()[2], ints(&r, &[29]));
    }

    #[test]
    fn linear_maps_give_their_values() {
        let r = Ring::Modular(101);
        let f = ExprMap::parse("3*x0 - x1").unwrap();
        let vs = [ints(&r, &[1, 2]), ints(&r, &[4, 7]), ints(&r, &[5, 9]), ints(&r, &[6, 1])];
        let jet = symbolic_simplicial(&f, &r, &vs).unwrap();
        for j in 1..4 {
            let expected = f.eval_scalars(&r, &vs[j]).unwrap();
            assert_eq!(jet.components[j][0].degree(), Some(0));
            assert_eq!(jet.at_zero()[j], expected);
        }
    }
}
