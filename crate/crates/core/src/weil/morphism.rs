use std::sync::{Arc, OnceLock};

use super::{WeilAlgebra, WeilElement, WeilError};
use crate::algebra::KAlgebra;
use crate::scalars::Scalar;

/// A linear map between Weil algebras given by its matrix
/// (`target.dim()` rows, `source.dim()` columns).
#[derive(Debug, Clone)]
pub struct Morphism {
    source: WeilAlgebra,
    target: WeilAlgebra,
    matrix: Vec<Vec<Scalar>>,
    verdict: Arc<OnceLock<Result<(), String>>>,
}

impl Morphism {
    pub fn new(source: &WeilAlgebra, target: &WeilAlgebra, matrix: Vec<Vec<Scalar>>) -> Result<Morphism, WeilError> {
        if source.ring() != target.ring() {
            return Err(WeilError::AlgebraMismatch);
        }
        if matrix.len() != target.dim() {
            return Err(WeilError::DimensionMismatch { expected: target.dim(), got: matrix.len() });
        }
        if let Some(row) = matrix.iter().find(|row| row.len() != source.dim()) {
            return Err(WeilError::DimensionMismatch { expected: source.dim(), got: row.len() });
        }
        Ok(Morphism {
            source: source.clone(),
            target: target.clone(),
            matrix,
            verdict: Arc::new(OnceLock::new()),
        })
    }

    /// The map whose column `j` is `images[j]`, the image of basis element `j`.
    pub fn from_basis_images(source: &WeilAlgebra, target: &WeilAlgebra, images: &[WeilElement]) -> Result<Morphism, WeilError> {
        if images.len() != source.dim() {
            return Err(WeilError::DimensionMismatch { expected: source.dim(), got: images.len() });
        }
        if images.iter().any(|im| !target.contains(im)) {
            return Err(WeilError::AlgebraMismatch);
        }
        let matrix = (0..target.dim())
            .map(|i| images.iter().map(|im| im.coeffs()[i].clone()).collect())
            .collect();
        Morphism::new(source, target, matrix)
    }

    /// Extends variable images multiplicatively over a monomial basis.
    pub fn from_generator_images(
        source: &WeilAlgebra,
        target: &WeilAlgebra,
        images: &[WeilElement],
    ) -> Result<Morphism, WeilError> {
        let p = source
            .presentation()
            .ok_or_else(|| WeilError::InvalidPreset("source needs a monomial presentation".into()))?;
        if images.len() != p.nvars() {
            return Err(WeilError::DimensionMismatch { expected: p.nvars(), got: images.len() });
        }
        let cols: Vec<WeilElement> = p
            .basis()
            .iter()
            .map(|e| {
                e.iter()
                    .zip(images)
                    .fold(KAlgebra::one(target), |acc, (&k, im)| target.mul(&acc, &target.pow(im, k)))
            })
            .collect();
        Morphism::from_basis_images(source, target, &cols)
    }

    /// Basis permutation: source basis `j` goes to target basis `perm[j]`.
    pub fn from_permutation(source: &WeilAlgebra, target: &WeilAlgebra, perm: &[usize]) -> Result<Morphism, WeilError> {
        let images: Vec<WeilElement> = perm.iter().map(|&k| target.basis_element(k)).collect();
        Morphism::from_basis_images(source, target, &images)
    }

    /// The augmentation `π^A: A -> K = jet(0)`.
    pub fn augmentation(source: &WeilAlgebra) -> Morphism {
        let target = WeilAlgebra::jet(source.ring(), 0);
        Morphism::new(source, &target, vec![source.augmentation().to_vec()]).expect("augmentation shape")
    }

    /// Truncation `jet(k) -> jet(j)`, `δ ↦ δ`, for `j ≤ k`.
    pub fn jet_truncation(source: &WeilAlgebra, target: &WeilAlgebra) -> Result<Morphism, WeilError> {
        Morphism::from_generator_images(source, target, &[target.variable(0)])
    }

    pub fn source(&self) -> &WeilAlgebra {
        &self.source
    }

    pub fn target(&self) -> &WeilAlgebra {
        &self.target
    }

    pub fn matrix(&self) -> &[Vec<Scalar>] {
        &self.matrix
    }

    fn image(&self, coeffs: &[Scalar]) -> WeilElement {
        let ring = self.source.ring();
        let c = self
            .matrix
            .iter()
            .map(|row| row.iter().zip(coeffs).fold(ring.zero(), |acc, (m, x)| if x.is_zero() { acc } else { &acc + &(m * x) }))
            .collect();
        WeilElement::from_parts(self.target.clone(), c)
    }

    fn column(&self, j: usize) -> WeilElement {
        let c = self.matrix.iter().map(|row| row[j].clone()).collect();
        WeilElement::from_parts(self.target.clone(), c)
    }

    fn validate(&self) -> Result<(), String> {
        let (a, b) = (&self.source, &self.target);
        if self.column(a.unit_index()) != KAlgebra::one(b) {
            return Err("unit is not mapped to unit".into());
        }
        for j in 0..a.dim() {
            if self.column(j).project() != a.basis_element(j).project() {
                return Err(format!("augmentation not preserved on basis element {j}"));
            }
        }
        let cols: Vec<WeilElement> = (0..a.dim()).map(|j| self.column(j)).collect();
        for i in 0..a.dim() {
            for j in i..a.dim() {
                let lhs = self.image(&a.basis_product(i, j));
                if lhs != b.mul(&cols[i], &cols[j]) {
                    return Err(format!("not multiplicative on basis pair ({i}, {j})"));
                }
            }
        }
        Ok(())
    }

    /// Checks unit, multiplicativity on all basis pairs and `π_B ∘ M = π_A`.
    pub fn check_report(&self) -> Result<(), String> {
        self.verdict.get_or_init(|| self.validate()).clone()
    }

    pub fn check(&self) -> bool {
        self.check_report().is_ok()
    }

    pub fn apply(&self, a: &WeilElement) -> Result<WeilElement, WeilError> {
        self.check_report().map_err(WeilError::NotAMorphism)?;
        if !self.source.contains(a) {
            return Err(WeilError::AlgebraMismatch);
        }
        Ok(self.image(a.coeffs()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::Ring;

    #[test]
    fn augmentation_is_a_morphism() {
        let r = Ring::Rationals;
        for a in [WeilAlgebra::jet(&r, 3), WeilAlgebra::tangent(&r, 2), WeilAlgebra::truncated(&r, 2, 2)] {
            assert!(Morphism::augmentation(&a).check());
        }
    }

    #[test]
    fn truncation_validates() {
        let r = Ring::Rationals;
        let m = Morphism::jet_truncation(&WeilAlgebra::jet(&r, 2), &WeilAlgebra::jet(&r, 1)).unwrap();
        assert!(m.check());
        let j2 = WeilAlgebra::jet(&r, 2);
        assert_eq!(m.apply(&j2.element_from_ints(&[1, 2, 3])).unwrap().coeffs(), &[r.one(), r.from_i64(2)]);
    }

    #[test]
    fn delta_to_one_fails() {
        let r = Ring::Rationals;
        let j1 = WeilAlgebra::jet(&r, 1);
        let m = Morphism::from_basis_images(&j1, &j1, &[KAlgebra::one(&j1), KAlgebra::one(&j1)]).unwrap();
        assert!(!m.check());
        assert!(matches!(m.apply(&j1.basis_element(1)), Err(WeilError::NotAMorphism(_))));
    }

    #[test]
    fn shapes_are_checked() {
        let r = Ring::Rationals;
        let j1 = WeilAlgebra::jet(&r, 1);
        assert!(Morphism::new(&j1, &j1, vec![vec![r.one()]]).is_err());
    }
}
