//! Weil algebras `A = K ⊕ N`: presentations, element arithmetic, tensor and
//! Whitney constructions, automorphisms, morphisms and the graded near-ring.

mod element;
mod graded;
mod json;
mod morphism;
pub mod presentation;
mod spec;
mod tower;
mod validate;

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::algebra::KAlgebra;
use crate::scalars::{Ring, Scalar};

pub use element::WeilElement;
pub use morphism::Morphism;
pub use presentation::{Exponent, Presentation};
pub use spec::parse_algebra_spec;
pub use tower::{Tower, TowerElem};
pub use validate::{ValidationReport, Violation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeilError {
    #[error("invalid preset: {0}")]
    InvalidPreset(String),
    #[error("elements belong to different algebras")]
    AlgebraMismatch,
    #[error("{0} is not a unit")]
    NotAUnit(String),
    #[error("algebra carries no grading")]
    Ungraded,
    #[error("algebra is not a tensor product")]
    NotATensor,
    #[error("not a morphism of Weil algebras: {0}")]
    NotAMorphism(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid table: {0}")]
    InvalidTable(String),
}

/// Named algebra families.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Preset {
    /// `K[X]/(X^{k+1})`.
    Jet(u32),
    /// `K[X_1..X_k]/(X_1², …, X_k²)`.
    Tangent(u32),
    /// `W^r_n(K)`: polynomials in `n` variables modulo total degree `> r`.
    Truncated(usize, u32),
    Custom { nvars: usize, cap: u32, extra_gens: Vec<Exponent> },
}

impl Preset {
    fn presentation(&self) -> Result<Presentation, WeilError> {
        match self {
            Preset::Jet(k) => Presentation::new(1, *k, vec![]),
            Preset::Tangent(k) => {
                let n = *k as usize;
                let gens = (0..n)
                    .map(|i| {
                        let mut e = vec![0; n];
                        e[i] = 2;
                        e
                    })
                    .collect();
                Presentation::new(n, *k, gens)
            }
            Preset::Truncated(n, r) => Presentation::new(*n, *r, vec![]),
            Preset::Custom { nvars, cap, extra_gens } => Presentation::new(*nvars, *cap, extra_gens.clone()),
        }
    }

    fn label(&self) -> String {
        match self {
            Preset::Jet(k) => format!("jet:{k}"),
            Preset::Tangent(k) => format!("tan:{k}"),
            Preset::Truncated(n, r) => format!("trunc:{n},{r}"),
            Preset::Custom { nvars, cap, .. } => format!("custom:{nvars},{cap}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FactorKind {
    Tensor,
    Whitney,
}

/// How a product algebra's basis decomposes over its two factors.
#[derive(Debug, Clone)]
pub(crate) struct Factors {
    pub kind: FactorKind,
    pub left: WeilAlgebra,
    pub right: WeilAlgebra,
    pub pairs: Vec<(usize, usize)>,
    pub index: HashMap<(usize, usize), usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Products {
    /// Basis products are basis elements or zero; per row, the nonzero `(j, k)` pairs.
    Monomial(Vec<Vec<(usize, usize)>>),
    /// Sparse structure constants `e_i e_j = Σ c_k e_k`, row-major.
    Table(Vec<Vec<(usize, Scalar)>>),
}

#[derive(Debug)]
pub(crate) struct Inner {
    pub ring: Ring,
    pub label: String,
    pub presentation: Option<Presentation>,
    pub dim: usize,
    pub unit: usize,
    pub augmentation: Vec<Scalar>,
    pub grading: Option<Vec<u32>>,
    pub products: Products,
    pub nilpotency: Option<usize>,
    pub factors: Option<Factors>,
}

/// A Weil algebra over a fixed base ring. Cloning is cheap.
#[derive(Clone)]
pub struct WeilAlgebra(pub(crate) Arc<Inner>);

/// Input for [`WeilAlgebra::from_table`].
#[derive(Debug, Clone)]
pub struct TableSpec {
    pub dim: usize,
    /// `constants[i][j]` is the coefficient vector of `e_i e_j`.
    pub constants: Vec<Vec<Vec<Scalar>>>,
    pub unit: usize,
    pub augmentation: Vec<Scalar>,
    pub grading: Option<Vec<u32>>,
}

pub fn make_algebra(preset: &Preset, ring: &Ring) -> Result<WeilAlgebra, WeilError> {
    Ok(WeilAlgebra::from_presentation(preset.presentation()?, ring, preset.label(), None))
}

impl WeilAlgebra {
    pub fn jet(ring: &Ring, k: u32) -> WeilAlgebra {
        make_algebra(&Preset::Jet(k), ring).expect("jet preset")
    }

    pub fn tangent(ring: &Ring, k: u32) -> WeilAlgebra {
        make_algebra(&Preset::Tangent(k), ring).expect("tangent preset")
    }

    pub fn truncated(ring: &Ring, nvars: usize, cap: u32) -> WeilAlgebra {
        make_algebra(&Preset::Truncated(nvars, cap), ring).expect("truncated preset")
    }

    pub fn custom(ring: &Ring, nvars: usize, cap: u32, extra_gens: Vec<Exponent>) -> Result<WeilAlgebra, WeilError> {
        make_algebra(&Preset::Custom { nvars, cap, extra_gens }, ring)
    }

    pub(crate) fn from_presentation(
        p: Presentation,
        ring: &Ring,
        label: String,
        factors: Option<Factors>,
    ) -> WeilAlgebra {
        let dim = p.dim();
        let rows = (0..dim)
            .map(|i| (0..dim).filter_map(|j| p.product_index(i, j).map(|k| (j, k))).collect())
            .collect();
        let mut augmentation = vec![ring.zero(); dim];
        augmentation[0] = ring.one();
        WeilAlgebra(Arc::new(Inner {
            ring: ring.clone(),
            label,
            dim,
            unit: 0,
            augmentation,
            grading: Some(p.grading()),
            products: Products::Monomial(rows),
            nilpotency: Some(p.nilpotency_order()),
            factors,
            presentation: Some(p),
        }))
    }

    /// Builds an algebra from structure constants. Shapes are checked here;
    /// the algebra laws are checked by [`WeilAlgebra::validate`].
    pub fn from_table(ring: &Ring, spec: TableSpec) -> Result<WeilAlgebra, WeilError> {
        let dim = spec.dim;
        let bad = |msg: String| Err(WeilError::InvalidTable(msg));
        if dim == 0 || spec.unit >= dim {
            return bad(format!("unit index {} out of range for dim {dim}", spec.unit));
        }
        if spec.augmentation.len() != dim {
            return bad("augmentation length differs from dim".into());
        }
        if spec.grading.as_ref().is_some_and(|g| g.len() != dim) {
            return bad("grading length differs from dim".into());
        }
        if spec.constants.len() != dim
            || spec.constants.iter().any(|row| row.len() != dim || row.iter().any(|c| c.len() != dim))
        {
            return bad("structure constants must be dim × dim × dim".into());
        }
        let all = spec
            .constants
            .iter()
            .flatten()
            .flatten()
            .chain(&spec.augmentation);
        for c in all {
            if &c.ring() != ring {
                return bad(format!("constant {c} is not in {ring}"));
            }
        }
        let rows = spec
            .constants
            .iter()
            .flatten()
            .map(|v| v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(k, c)| (k, c.clone())).collect())
            .collect();
        let alg = Inner {
            ring: ring.clone(),
            label: "table".into(),
            presentation: None,
            dim,
            unit: spec.unit,
            augmentation: spec.augmentation,
            grading: spec.grading,
            products: Products::Table(rows),
            nilpotency: None,
            factors: None,
        };
        let mut alg = WeilAlgebra(Arc::new(alg));
        let q = validate::nilpotency_of(&alg);
        Arc::get_mut(&mut alg.0).expect("freshly built").nilpotency = q;
        Ok(alg)
    }

    pub fn tensor(a: &WeilAlgebra, b: &WeilAlgebra) -> Result<WeilAlgebra, WeilError> {
        Self::product(a, b, FactorKind::Tensor)
    }

    pub fn whitney_sum(a: &WeilAlgebra, b: &WeilAlgebra) -> Result<WeilAlgebra, WeilError> {
        Self::product(a, b, FactorKind::Whitney)
    }

    fn product(a: &WeilAlgebra, b: &WeilAlgebra, kind: FactorKind) -> Result<WeilAlgebra, WeilError> {
        if a.ring() != b.ring() {
            return Err(WeilError::AlgebraMismatch);
        }
        let (Some(pa), Some(pb)) = (a.presentation(), b.presentation()) else {
            return Err(WeilError::InvalidPreset("products need monomial presentations".into()));
        };
        let (p, label) = match kind {
            FactorKind::Tensor => (Presentation::tensor(pa, pb), format!("tensor({},{})", a.label(), b.label())),
            FactorKind::Whitney => (Presentation::whitney(pa, pb), format!("whitney({},{})", a.label(), b.label())),
        };
        let split = pa.nvars();
        let pairs: Vec<(usize, usize)> = p
            .basis()
            .iter()
            .map(|e| {
                let ia = pa.index_of(&e[..split]).expect("left block in left basis");
                let ib = pb.index_of(&e[split..]).expect("right block in right basis");
                (ia, ib)
            })
            .collect();
        let index = pairs.iter().enumerate().map(|(k, &pr)| (pr, k)).collect();
        let factors = Factors { kind, left: a.clone(), right: b.clone(), pairs, index };
        Ok(WeilAlgebra::from_presentation(p, a.ring(), label, Some(factors)))
    }

    /// `(A ⊗ B) ⊕_A (A ⊗ B')`: the fibre product over the shared left factor.
    pub fn whitney_over(ab: &WeilAlgebra, ab2: &WeilAlgebra) -> Result<WeilAlgebra, WeilError> {
        let (f1, f2) = match (ab.factors(), ab2.factors()) {
            (Some(f1), Some(f2)) if f1.kind == FactorKind::Tensor && f2.kind == FactorKind::Tensor => (f1, f2),
            _ => return Err(WeilError::NotATensor),
        };
        if f1.left != f2.left {
            return Err(WeilError::AlgebraMismatch);
        }
        let pa = f1.left.presentation().ok_or(WeilError::NotATensor)?;
        let pb = f1.right.presentation().ok_or(WeilError::NotATensor)?;
        let pc = f2.right.presentation().ok_or(WeilError::NotATensor)?;
        let (na, nb, nc) = (pa.nvars(), pb.nvars(), pc.nvars());
        let n = na + nb + nc;
        let embed = |e: &Exponent, offset: usize| {
            let mut f = vec![0; n];
            f[offset..offset + e.len()].copy_from_slice(e);
            f
        };
        let mut gens: Vec<Exponent> = Vec::new();
        for (p, offset) in [(pa, 0), (pb, na), (pc, na + nb)] {
            gens.extend(p.extra_gens().iter().map(|g| embed(g, offset)));
            gens.extend(presentation::monomials_of_degree(p.nvars(), p.cap() + 1).iter().map(|g| embed(g, offset)));
        }
        gens.extend(presentation::cross_products(na..na + nb, na + nb..n, n));
        let p = Presentation::new(n, pa.cap() + pb.cap().max(pc.cap()), gens)?;
        let label = format!("whitney_over({},{})", ab.label(), ab2.label());
        Ok(WeilAlgebra::from_presentation(p, ab.ring(), label, None))
    }

    pub fn ring(&self) -> &Ring {
        &self.0.ring
    }

    pub fn label(&self) -> &str {
        &self.0.label
    }

    pub fn dim(&self) -> usize {
        self.0.dim
    }

    pub fn presentation(&self) -> Option<&Presentation> {
        self.0.presentation.as_ref()
    }

    pub fn grading(&self) -> Option<&[u32]> {
        self.0.grading.as_deref()
    }

    /// Smallest `q` with `N^q = 0`; `None` for a table whose kernel is not nilpotent.
    pub fn nilpotency_order(&self) -> Option<usize> {
        self.0.nilpotency
    }

    pub fn unit_index(&self) -> usize {
        self.0.unit
    }

    pub fn augmentation(&self) -> &[Scalar] {
        &self.0.augmentation
    }

    pub(crate) fn factors(&self) -> Option<&Factors> {
        self.0.factors.as_ref()
    }

    /// Left and right factors of a tensor product or Whitney sum.
    pub fn factor_algebras(&self) -> Option<(FactorKind, &WeilAlgebra, &WeilAlgebra)> {
        self.factors().map(|f| (f.kind, &f.left, &f.right))
    }

    /// For each basis index, the pair of factor basis indices it corresponds to.
    pub fn factor_pairs(&self) -> Option<&[(usize, usize)]> {
        self.factors().map(|f| f.pairs.as_slice())
    }

    /// `a ↦ a ⊗ 1` (`left`) or `b ↦ 1 ⊗ b` into a tensor product or Whitney sum.
    pub fn inject(&self, left: bool, a: &WeilElement) -> Result<WeilElement, WeilError> {
        let f = self.factors().ok_or(WeilError::NotATensor)?;
        let (src, other) = if left { (&f.left, &f.right) } else { (&f.right, &f.left) };
        if a.algebra() != src {
            return Err(WeilError::AlgebraMismatch);
        }
        let u = other.unit_index();
        let mut c = vec![self.ring().zero(); self.dim()];
        for (i, ci) in a.coeffs().iter().enumerate() {
            let key = if left { (i, u) } else { (u, i) };
            if let Some(&k) = f.index.get(&key) {
                c[k] = ci.clone();
            }
        }
        Ok(WeilElement::from_parts(self.clone(), c))
    }

    pub fn basis_element(&self, i: usize) -> WeilElement {
        let mut c = vec![self.ring().zero(); self.dim()];
        c[i] = self.ring().one();
        WeilElement::from_parts(self.clone(), c)
    }

    /// Element with the given coefficients, which must match the dimension.
    pub fn element(&self, coeffs: Vec<Scalar>) -> Result<WeilElement, WeilError> {
        WeilElement::new(self, coeffs)
    }

    pub fn element_from_ints(&self, coeffs: &[i64]) -> WeilElement {
        WeilElement::from_parts(self.clone(), coeffs.iter().map(|&c| self.ring().from_i64(c)).collect())
    }

    /// The image of variable `v`, or zero when the presentation kills it.
    pub fn variable(&self, v: usize) -> WeilElement {
        match self.presentation().and_then(|p| p.variable_index(v)) {
            Some(i) => self.basis_element(i),
            None => KAlgebra::zero(self),
        }
    }

    /// `σ^A(t) = t · 1`.
    pub fn embed(&self, t: &Scalar) -> WeilElement {
        KAlgebra::embed(self, t)
    }

    /// Coefficients of `e_i e_j`.
    pub fn basis_product(&self, i: usize, j: usize) -> Vec<Scalar> {
        let mut out = vec![self.ring().zero(); self.dim()];
        self.for_each_product(i, j, |k, c| out[k] = &out[k] + c);
        out
    }

    fn for_each_product(&self, i: usize, j: usize, mut f: impl FnMut(usize, &Scalar)) {
        match &self.0.products {
            Products::Monomial(rows) => {
                if let Ok(pos) = rows[i].binary_search_by_key(&j, |&(jj, _)| jj) {
                    f(rows[i][pos].1, &self.ring().one());
                }
            }
            Products::Table(t) => {
                for (k, c) in &t[i * self.dim() + j] {
                    f(*k, c);
                }
            }
        }
    }

    fn same_as(&self, other: &WeilAlgebra) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self == other
    }
}

impl PartialEq for WeilAlgebra {
    fn eq(&self, other: &WeilAlgebra) -> bool {
        if Arc::ptr_eq(&self.0, &other.0) {
            return true;
        }
        let (a, b) = (&*self.0, &*other.0);
        let pairs = |x: &Inner| x.factors.as_ref().map(|f| (f.kind, f.pairs.clone()));
        a.ring == b.ring
            && a.dim == b.dim
            && a.unit == b.unit
            && a.augmentation == b.augmentation
            && a.grading == b.grading
            && match (&a.presentation, &b.presentation) {
                (Some(p), Some(q)) => p == q,
                (None, None) => a.products == b.products,
                _ => false,
            }
            && pairs(a) == pairs(b)
    }
}

impl fmt::Debug for WeilAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WeilAlgebra({} over {}, dim {})", self.label(), self.ring(), self.dim())
    }
}

impl fmt::Display for WeilAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

/// Product of two coefficient vectors over `alg` with entries in the algebra `c`.
pub fn sc_mul<C: KAlgebra>(c: &C, alg: &WeilAlgebra, a: &[C::Elem], b: &[C::Elem]) -> Vec<C::Elem> {
    let dim = alg.dim();
    let mut out = vec![c.zero(); dim];
    let nz_b: Vec<usize> = (0..dim).filter(|&j| !c.is_zero(&b[j])).collect();
    for (i, ai) in a.iter().enumerate() {
        if c.is_zero(ai) {
            continue;
        }
        match &alg.0.products {
            Products::Monomial(rows) => {
                let row = &rows[i];
                if nz_b.len() * 4 < row.len() {
                    for &j in &nz_b {
                        if let Ok(pos) = row.binary_search_by_key(&j, |&(jj, _)| jj) {
                            let k = row[pos].1;
                            out[k] = c.add(&out[k], &c.mul(ai, &b[j]));
                        }
                    }
                } else {
                    for &(j, k) in row {
                        if !c.is_zero(&b[j]) {
                            out[k] = c.add(&out[k], &c.mul(ai, &b[j]));
                        }
                    }
                }
            }
            Products::Table(t) => {
                for &j in &nz_b {
                    let entry = &t[i * dim + j];
                    if entry.is_empty() {
                        continue;
                    }
                    let p = c.mul(ai, &b[j]);
                    for (k, coef) in entry {
                        out[*k] = c.add(&out[*k], &c.scale(coef, &p));
                    }
                }
            }
        }
    }
    out
}

/// Augmentation `π(a)` of a coefficient vector, as an element of `c`.
pub fn sc_project<C: KAlgebra>(c: &C, alg: &WeilAlgebra, a: &[C::Elem]) -> C::Elem {
    match &alg.0.products {
        Products::Monomial(_) => a[0].clone(),
        Products::Table(_) => {
            let mut acc = c.zero();
            for (x, w) in a.iter().zip(alg.augmentation()) {
                if !w.is_zero() {
                    acc = c.add(&acc, &c.scale(w, x));
                }
            }
            acc
        }
    }
}

/// Inverse by the finite geometric series `x⁻¹ Σ_{j<q} (−x⁻¹ n)^j`, `x = π(a)`.
pub fn sc_inv<C: KAlgebra>(c: &C, alg: &WeilAlgebra, a: &[C::Elem]) -> Option<Vec<C::Elem>> {
    let q = alg.nilpotency_order()?;
    let x = sc_project(c, alg, a);
    let x_inv = c.inv(&x)?;
    let unit = alg.unit_index();
    // n = a − x·1, then m = −x⁻¹ n
    let mut m: Vec<C::Elem> = a.to_vec();
    m[unit] = c.sub(&m[unit], &x);
    let neg_x_inv = c.neg(&x_inv);
    for e in m.iter_mut() {
        *e = c.mul(&neg_x_inv, e);
    }
    let mut term: Vec<C::Elem> = vec![c.zero(); alg.dim()];
    term[unit] = c.one();
    let mut total = term.clone();
    for _ in 1..q {
        term = sc_mul(c, alg, &term, &m);
        if term.iter().all(|t| c.is_zero(t)) {
            break;
        }
        for (s, t) in total.iter_mut().zip(&term) {
            *s = c.add(s, t);
        }
    }
    Some(total.iter().map(|t| c.mul(&x_inv, t)).collect())
}

impl KAlgebra for WeilAlgebra {
    type Elem = WeilElement;

    fn ring(&self) -> &Ring {
        &self.0.ring
    }

    fn zero(&self) -> WeilElement {
        WeilElement::from_parts(self.clone(), vec![self.ring().zero(); self.dim()])
    }

    fn one(&self) -> WeilElement {
        self.basis_element(self.unit_index())
    }

    fn embed(&self, t: &Scalar) -> WeilElement {
        let mut c = vec![self.ring().zero(); self.dim()];
        c[self.unit_index()] = t.clone();
        WeilElement::from_parts(self.clone(), c)
    }

    fn add(&self, a: &WeilElement, b: &WeilElement) -> WeilElement {
        let c = a.coeffs().iter().zip(b.coeffs()).map(|(x, y)| x + y).collect();
        WeilElement::from_parts(self.clone(), c)
    }

    fn neg(&self, a: &WeilElement) -> WeilElement {
        WeilElement::from_parts(self.clone(), a.coeffs().iter().map(|x| -x).collect())
    }

    fn sub(&self, a: &WeilElement, b: &WeilElement) -> WeilElement {
        let c = a.coeffs().iter().zip(b.coeffs()).map(|(x, y)| x - y).collect();
        WeilElement::from_parts(self.clone(), c)
    }

    fn mul(&self, a: &WeilElement, b: &WeilElement) -> WeilElement {
        WeilElement::from_parts(self.clone(), sc_mul(self.ring(), self, a.coeffs(), b.coeffs()))
    }

    fn scale(&self, t: &Scalar, a: &WeilElement) -> WeilElement {
        WeilElement::from_parts(self.clone(), a.coeffs().iter().map(|x| t * x).collect())
    }

    fn is_zero(&self, a: &WeilElement) -> bool {
        a.coeffs().iter().all(Scalar::is_zero)
    }

    fn inv(&self, a: &WeilElement) -> Option<WeilElement> {
        sc_inv(self.ring(), self, a.coeffs()).map(|c| WeilElement::from_parts(self.clone(), c))
    }

    fn contains(&self, a: &WeilElement) -> bool {
        a.algebra().same_as(self) && a.coeffs().iter().all(|c| &c.ring() == self.ring())
    }
}
