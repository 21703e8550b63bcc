use crate::algebra::AlgebraicMap;
use crate::scalars::{Ring, Scalar};
use crate::smoothexpr::{ExprError, ExprMap};

use super::{check_vectors, DiffError};

/// `(v_0, …, v_k; s_1, …, s_k)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialPoint {
    ring: Ring,
    vs: Vec<Vec<Scalar>>,
    /// `s_0 = 0` followed by `s_1, …, s_k`.
    s: Vec<Scalar>,
}

impl SimplicialPoint {
    pub fn new(ring: &Ring, vs: Vec<Vec<Scalar>>, s: Vec<Scalar>) -> Result<SimplicialPoint, DiffError> {
        if vs.is_empty() || s.len() + 1 != vs.len() {
            return Err(DiffError::Shape(format!("{} vectors need {} times, got {}", vs.len(), vs.len().max(1) - 1, s.len())));
        }
        check_vectors(ring, &vs)?;
        if s.iter().any(|t| &t.ring() != ring) {
            return Err(DiffError::Shape("time outside the ring".into()));
        }
        let s = std::iter::once(ring.zero()).chain(s).collect();
        Ok(SimplicialPoint { ring: ring.clone(), vs, s })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn order(&self) -> usize {
        self.vs.len() - 1
    }

    pub fn vectors(&self) -> &[Vec<Scalar>] {
        &self.vs
    }

    /// `s_1, …, s_k`.
    pub fn times(&self) -> &[Scalar] {
        &self.s[1..]
    }

    /// `s_i`, with `s_0 = 0`.
    pub fn time(&self, i: usize) -> &Scalar {
        &self.s[i]
    }

    /// All differences `s_i − s_j`, `i ≠ j`, are units.
    pub fn is_nonsingular(&self) -> bool {
        (0..self.s.len()).all(|i| (0..i).all(|j| (&self.s[i] - &self.s[j]).is_unit()))
    }

    /// `v_0 + Σ_{j ≤ i} Π_{m < j} (s_i − s_m) v_j`.
    pub fn node(&self, i: usize) -> Vec<Scalar> {
        let mut out = self.vs[0].clone();
        let mut weight = self.ring.one();
        for j in 1..=i {
            weight = &weight * &(&self.s[i] - &self.s[j - 1]);
            for (o, v) in out.iter_mut().zip(&self.vs[j]) {
                *o = &*o + &(&weight * v);
            }
        }
        out
    }

    /// The sub-point `(v_0, …, v_j; s_1, …, s_j)`.
    pub fn truncate(&self, j: usize) -> SimplicialPoint {
        SimplicialPoint { ring: self.ring.clone(), vs: self.vs[..=j].to_vec(), s: self.s[..=j].to_vec() }
    }

    pub(crate) fn with_vectors(&self, vs: Vec<Vec<Scalar>>) -> SimplicialPoint {
        SimplicialPoint { ring: self.ring.clone(), vs, s: self.s.clone() }
    }
}

/// `f^{⟩k⟨}(v; s) = Σ_i f(node_i) / Π_{j≠i} (s_i − s_j)`.
pub fn simplicial_dq(f: &ExprMap, p: &SimplicialPoint) -> Result<Vec<Scalar>, DiffError> {
    if p.vs[0].len() != f.arity() {
        return Err(ExprError::Eval(crate::EvalError::ArityMismatch { expected: f.arity(), got: p.vs[0].len() }).into());
    }
    if !p.is_nonsingular() {
        return Err(DiffError::SingularTime(format!("times {:?} are not pairwise unit-separated", p.times())));
    }
    let k = p.order();
    let mut acc = vec![p.ring.zero(); f.coarity()];
    for i in 0..=k {
        let denom = (0..=k).filter(|&j| j != i).fold(p.ring.one(), |d, j| &d * &(&p.s[i] - &p.s[j]));
        let inv = denom.inv().expect("nonsingular");
        let value = f.eval_scalars(&p.ring, &p.node(i))?;
        for (a, v) in acc.iter_mut().zip(&value) {
            *a = &*a + &(v * &inv);
        }
    }
    Ok(acc)
}

/// `J^{⟩k⟨} f`: the quotients of orders `0..=k` with shared times.
pub fn extended_jet(f: &ExprMap, p: &SimplicialPoint) -> Result<SimplicialPoint, DiffError> {
    let ws = (0..=p.order()).map(|j| simplicial_dq(f, &p.truncate(j))).collect::<Result<Vec<_>, _>>()?;
    Ok(p.with_vectors(ws))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(r: &Ring, v: &[i64]) -> Vec<Scalar> {
        v.iter().map(|&i| r.from_i64(i)).collect()
    }

    fn point(r: &Ring, vs: &[i64], s: &[i64]) -> SimplicialPoint {
        SimplicialPoint::new(r, vs.iter().map(|&v| vec![r.from_i64(v)]).collect(), ints(r, s)).unwrap()
    }

    #[test]
    fn classical_divided_difference() {
        let r = Ring::Rationals;
        let f = ExprMap::parse("x0^2").unwrap();
        let p = point(&r, &[0, 1, 0], &[1, 2]);
        assert_eq!(p.node(2), ints(&r, &[2]));
        assert_eq!(simplicial_dq(&f, &p).unwrap(), ints(&r, &[1]));
    }

    #[test]
    fn order_one_is_the_cubic_quotient() {
        let r = Ring::Rationals;
        let f = ExprMap::parse("x0^3 - x0").unwrap();
        let p = point(&r, &[2, 3], &[5]);
        let q = super::super::CubicPoint::new(&r, 1, vec![ints(&r, &[2]), ints(&r, &[3])], ints(&r, &[5])).unwrap();
        assert_eq!(simplicial_dq(&f, &p).unwrap(), super::super::cubic_dq(&f, &q).unwrap());
    }

    #[test]
    fn constants_are_annihilated() {
        let r = Ring::Modular(101);
        let f = ExprMap::parse_with_arity("7", 1).unwrap();
        for k in 1..4 {
            let vs: Vec<i64> = (0..=k).map(|i| 3 * i as i64 + 1).collect();
            let s: Vec<i64> = (1..=k).map(|i| i as i64 * 4).collect();
            assert_eq!(simplicial_dq(&f, &point(&r, &vs, &s)).unwrap(), ints(&r, &[0]));
        }
        assert!(matches!(simplicial_dq(&f, &point(&r, &[1, 2], &[0])), Err(DiffError::SingularTime(_))));
    }

    #[test]
    fn extended_jet_components() {
        let r = Ring::Rationals;
        let f = ExprMap::parse("x0^2").unwrap();
        let j = extended_jet(&f, &point(&r, &[0, 1, 0], &[1, 2])).unwrap();
        assert_eq!(j.vectors(), &[ints(&r, &[0]), ints(&r, &[1]), ints(&r, &[1])]);
    }
}
