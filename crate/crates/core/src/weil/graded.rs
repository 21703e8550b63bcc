//! Canonical automorphisms and the graded near-ring structure.

use super::{FactorKind, WeilAlgebra, WeilElement, WeilError};
use crate::algebra::KAlgebra;
use crate::scalars::{determinant, Scalar};

impl WeilAlgebra {
    fn require_grading(&self) -> Result<&[u32], WeilError> {
        self.grading().ok_or(WeilError::Ungraded)
    }

    /// Grading with `A_0 = K·1`, as needed by the near-ring operations.
    fn connected_grading(&self) -> Result<&[u32], WeilError> {
        let g = self.require_grading()?;
        let unit = self.unit_index();
        if g[unit] != 0 || g.iter().enumerate().any(|(i, &d)| d == 0 && i != unit) {
            return Err(WeilError::Ungraded);
        }
        Ok(g)
    }

    pub fn top_degree(&self) -> Result<u32, WeilError> {
        Ok(self.require_grading()?.iter().copied().max().unwrap_or(0))
    }

    /// Homogeneous components `(a_0, …, a_top)` of `a`.
    pub fn graded_components(&self, a: &WeilElement) -> Result<Vec<WeilElement>, WeilError> {
        let g = self.require_grading()?;
        let top = g.iter().copied().max().unwrap_or(0);
        Ok((0..=top)
            .map(|d| {
                let c = a
                    .coeffs()
                    .iter()
                    .zip(g)
                    .map(|(x, &e)| if e == d { x.clone() } else { self.ring().zero() })
                    .collect();
                WeilElement::from_parts(self.clone(), c)
            })
            .collect())
    }

    /// The canonical `K^×`-action: degree-`d` coefficients are multiplied by `r^d`.
    pub fn scale_action(&self, r: &Scalar, a: &WeilElement) -> Result<WeilElement, WeilError> {
        let g = self.require_grading()?;
        if !r.is_unit() {
            return Err(WeilError::NotAUnit(r.to_string()));
        }
        let c = a.coeffs().iter().zip(g).map(|(x, &d)| &r.pow(d) * x).collect();
        Ok(WeilElement::from_parts(self.clone(), c))
    }

    /// The generalized flip `A ⊗ B -> B ⊗ A`.
    pub fn flip(&self, a: &WeilElement) -> Result<WeilElement, WeilError> {
        let f = self.factors().filter(|f| f.kind == FactorKind::Tensor).ok_or(WeilError::NotATensor)?;
        let target = WeilAlgebra::tensor(&f.right, &f.left)?;
        let back = target.factors().expect("tensor has factors");
        let c = back.pairs.iter().map(|&(ib, ia)| a.coeffs()[f.index[&(ia, ib)]].clone()).collect();
        Ok(WeilElement::from_parts(target, c))
    }

    /// `b ⋆ a = Σ_j b_j a^{j+1}`, where `b_j` is the degree-`j` component of `b`.
    ///
    /// Regrouping by degree gives `u_i = Σ_j b_j Σ_{|α|=i−j} a_{α_0}⋯a_{α_j}`.
    pub fn star(&self, b: &WeilElement, a: &WeilElement) -> Result<WeilElement, WeilError> {
        self.connected_grading()?;
        let bs = self.graded_components(b)?;
        let mut power = a.clone();
        let mut acc = KAlgebra::zero(self);
        for bj in &bs {
            acc = self.add(&acc, &self.mul(bj, &power));
            power = self.mul(&power, a);
        }
        Ok(acc)
    }

    /// The algebra endomorphism `b ↦ Σ_j b_j a^j`.
    pub fn graded_endo(&self, a: &WeilElement, b: &WeilElement) -> Result<WeilElement, WeilError> {
        self.connected_grading()?;
        let bs = self.graded_components(b)?;
        let mut power = KAlgebra::one(self);
        let mut acc = KAlgebra::zero(self);
        for bj in &bs {
            acc = self.add(&acc, &self.mul(bj, &power));
            power = self.mul(&power, a);
        }
        Ok(acc)
    }

    /// Matrix of `graded_endo(a)` in the basis, column `j` the image of `e_j`.
    pub fn graded_endo_matrix(&self, a: &WeilElement) -> Result<Vec<Vec<Scalar>>, WeilError> {
        let n = self.dim();
        let cols: Vec<WeilElement> =
            (0..n).map(|j| self.graded_endo(a, &self.basis_element(j))).collect::<Result<_, _>>()?;
        Ok((0..n).map(|i| cols.iter().map(|c| c.coeffs()[i].clone()).collect()).collect())
    }

    /// Whether `graded_endo(a)` is bijective, decided by its determinant.
    pub fn graded_endo_is_bijective(&self, a: &WeilElement) -> Result<bool, WeilError> {
        let m = self.graded_endo_matrix(a)?;
        Ok(determinant(self.ring(), &m).is_unit())
    }

    /// Two-sided `⋆`-inverse, solved degree by degree.
    pub fn star_inverse(&self, a: &WeilElement) -> Result<WeilElement, WeilError> {
        let g = self.connected_grading()?.to_vec();
        let a0 = a.coeffs()[self.unit_index()].clone();
        let a0_inv = a0.inv().map_err(|_| WeilError::NotAUnit(a0.to_string()))?;
        let top = g.iter().copied().max().unwrap_or(0);
        let mut x = KAlgebra::zero(self);
        for d in 0..=top {
            // With x_d = 0 the degree-d part of a ⋆ x misses exactly a_0 x_d.
            let rest = self.star(a, &x)?;
            let mut coeffs = x.coeffs().to_vec();
            for (i, &gi) in g.iter().enumerate() {
                if gi == d {
                    let target = if i == self.unit_index() { self.ring().one() } else { self.ring().zero() };
                    coeffs[i] = &a0_inv * &(&target - &rest.coeffs()[i]);
                }
            }
            x = WeilElement::from_parts(self.clone(), coeffs);
        }
        Ok(x)
    }
}
