//! Iterated scalar extension: an element of the outermost algebra whose
//! coefficients live in the next algebra down, and so on to `K`.

use super::{sc_inv, sc_mul, FactorKind, WeilAlgebra, WeilElement, WeilError};
use crate::algebra::KAlgebra;
use crate::scalars::{Ring, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub enum TowerElem {
    Base(Scalar),
    Vec(Vec<TowerElem>),
}

impl TowerElem {
    fn entries(&self) -> &[TowerElem] {
        match self {
            TowerElem::Vec(v) => v,
            TowerElem::Base(_) => panic!("tower element has fewer levels than its algebra"),
        }
    }

    /// Coefficient at basis indices listed from the outermost level inwards.
    pub fn coefficient(&self, indices: &[usize]) -> &Scalar {
        indices.iter().fold(self, |x, &i| &x.entries()[i]).scalar()
    }

    fn scalar(&self) -> &Scalar {
        match self {
            TowerElem::Base(s) => s,
            TowerElem::Vec(_) => panic!("tower element has more levels than its algebra"),
        }
    }
}

/// `levels[0]` is applied first and sits innermost; the last level is outermost.
#[derive(Debug, Clone, PartialEq)]
pub struct Tower {
    ring: Ring,
    levels: Vec<WeilAlgebra>,
}

/// The sub-tower made of the first `depth` levels.
#[derive(Clone, Copy)]
struct Level<'a> {
    tower: &'a Tower,
    depth: usize,
}

impl Tower {
    pub fn new(ring: &Ring, levels: Vec<WeilAlgebra>) -> Result<Tower, WeilError> {
        if levels.iter().any(|a| a.ring() != ring) {
            return Err(WeilError::AlgebraMismatch);
        }
        Ok(Tower { ring: ring.clone(), levels })
    }

    pub fn levels(&self) -> &[WeilAlgebra] {
        &self.levels
    }

    fn top(&self) -> Level<'_> {
        Level { tower: self, depth: self.levels.len() }
    }

    /// Element `Σ_i c_i e_i` of level `depth` (1-based) lifted to the whole tower.
    pub fn lift(&self, depth: usize, a: &WeilElement) -> Result<TowerElem, WeilError> {
        if depth == 0 || depth > self.levels.len() || a.algebra() != &self.levels[depth - 1] {
            return Err(WeilError::AlgebraMismatch);
        }
        let inner = Level { tower: self, depth: depth - 1 };
        let mut x = TowerElem::Vec(a.coeffs().iter().map(|c| inner.embed(c)).collect());
        for d in depth + 1..=self.levels.len() {
            x = Level { tower: self, depth: d - 1 }.lift_one(x);
        }
        Ok(x)
    }

    /// Converts an element of `((A_1 ⊗ A_2) ⊗ …) ⊗ A_n` into tower form.
    pub fn from_tensor(&self, a: &WeilElement) -> Result<TowerElem, WeilError> {
        split_tensor(a, self.levels.len())
    }

    /// Flattens a tower element back into the iterated tensor product `target`.
    pub fn to_tensor(&self, x: &TowerElem, target: &WeilAlgebra) -> Result<WeilElement, WeilError> {
        let coeffs = join_tensor(x, target, self.levels.len())?;
        WeilElement::new(target, coeffs)
    }
}

fn split_tensor(a: &WeilElement, depth: usize) -> Result<TowerElem, WeilError> {
    if depth == 1 {
        return Ok(TowerElem::Vec(a.coeffs().iter().cloned().map(TowerElem::Base).collect()));
    }
    let f = a.algebra().factors().filter(|f| f.kind == FactorKind::Tensor).ok_or(WeilError::NotATensor)?;
    let ring = a.algebra().ring();
    let mut out = Vec::with_capacity(f.right.dim());
    for ib in 0..f.right.dim() {
        let c = (0..f.left.dim()).map(|ia| f.index.get(&(ia, ib)).map_or(ring.zero(), |&k| a.coeffs()[k].clone())).collect();
        out.push(split_tensor(&WeilElement::new(&f.left, c)?, depth - 1)?);
    }
    Ok(TowerElem::Vec(out))
}

fn join_tensor(x: &TowerElem, target: &WeilAlgebra, depth: usize) -> Result<Vec<Scalar>, WeilError> {
    if depth == 1 {
        return Ok(x.entries().iter().map(|e| e.scalar().clone()).collect());
    }
    let f = target.factors().filter(|f| f.kind == FactorKind::Tensor).ok_or(WeilError::NotATensor)?;
    let mut out = vec![target.ring().zero(); target.dim()];
    for (ib, inner) in x.entries().iter().enumerate() {
        let left = join_tensor(inner, &f.left, depth - 1)?;
        for (ia, c) in left.into_iter().enumerate() {
            if let Some(&k) = f.index.get(&(ia, ib)) {
                out[k] = c;
            }
        }
    }
    Ok(out)
}

impl<'a> Level<'a> {
    fn below(self) -> Level<'a> {
        Level { tower: self.tower, depth: self.depth - 1 }
    }

    fn algebra(self) -> &'a WeilAlgebra {
        &self.tower.levels[self.depth - 1]
    }

    /// Embeds an element of level `depth` as the constant term of level `depth + 1`.
    fn lift_one(self, x: TowerElem) -> TowerElem {
        let outer = &self.tower.levels[self.depth];
        let mut v = vec![self.zero(); outer.dim()];
        v[outer.unit_index()] = x;
        TowerElem::Vec(v)
    }

    fn map2(self, a: &TowerElem, b: &TowerElem, f: impl Fn(&Scalar, &Scalar) -> Scalar + Copy) -> TowerElem {
        match (a, b) {
            (TowerElem::Base(x), TowerElem::Base(y)) => TowerElem::Base(f(x, y)),
            (TowerElem::Vec(x), TowerElem::Vec(y)) => {
                TowerElem::Vec(x.iter().zip(y).map(|(p, q)| self.below().map2(p, q, f)).collect())
            }
            _ => panic!("tower elements of different depth"),
        }
    }

    fn map1(self, a: &TowerElem, f: impl Fn(&Scalar) -> Scalar + Copy) -> TowerElem {
        match a {
            TowerElem::Base(x) => TowerElem::Base(f(x)),
            TowerElem::Vec(x) => TowerElem::Vec(x.iter().map(|p| self.below().map1(p, f)).collect()),
        }
    }
}

impl KAlgebra for Level<'_> {
    type Elem = TowerElem;

    fn ring(&self) -> &Ring {
        &self.tower.ring
    }

    fn zero(&self) -> TowerElem {
        self.embed(&self.tower.ring.zero())
    }

    fn one(&self) -> TowerElem {
        self.embed(&self.tower.ring.one())
    }

    fn embed(&self, t: &Scalar) -> TowerElem {
        if self.depth == 0 {
            return TowerElem::Base(t.clone());
        }
        let alg = self.algebra();
        let below = self.below();
        let mut v = vec![below.zero(); alg.dim()];
        v[alg.unit_index()] = below.embed(t);
        TowerElem::Vec(v)
    }

    fn add(&self, a: &TowerElem, b: &TowerElem) -> TowerElem {
        self.map2(a, b, |x, y| x + y)
    }

    fn sub(&self, a: &TowerElem, b: &TowerElem) -> TowerElem {
        self.map2(a, b, |x, y| x - y)
    }

    fn neg(&self, a: &TowerElem) -> TowerElem {
        self.map1(a, |x| -x)
    }

    fn scale(&self, t: &Scalar, a: &TowerElem) -> TowerElem {
        self.map1(a, |x| t * x)
    }

    fn mul(&self, a: &TowerElem, b: &TowerElem) -> TowerElem {
        if self.depth == 0 {
            return TowerElem::Base(a.scalar() * b.scalar());
        }
        TowerElem::Vec(sc_mul(&self.below(), self.algebra(), a.entries(), b.entries()))
    }

    fn is_zero(&self, a: &TowerElem) -> bool {
        match a {
            TowerElem::Base(x) => x.is_zero(),
            TowerElem::Vec(v) => v.iter().all(|e| self.below().is_zero(e)),
        }
    }

    fn inv(&self, a: &TowerElem) -> Option<TowerElem> {
        if self.depth == 0 {
            return a.scalar().inv().ok().map(TowerElem::Base);
        }
        sc_inv(&self.below(), self.algebra(), a.entries()).map(TowerElem::Vec)
    }

    fn contains(&self, a: &TowerElem) -> bool {
        match a {
            TowerElem::Base(x) => self.depth == 0 && x.ring() == self.tower.ring,
            TowerElem::Vec(v) => {
                self.depth > 0 && v.len() == self.algebra().dim() && v.iter().all(|e| self.below().contains(e))
            }
        }
    }
}

macro_rules! forward {
    ($($name:ident($($arg:ident: $ty:ty),*) -> $ret:ty;)*) => {
        $(fn $name(&self, $($arg: $ty),*) -> $ret { self.top().$name($($arg),*) })*
    };
}

impl KAlgebra for Tower {
    type Elem = TowerElem;

    fn ring(&self) -> &Ring {
        &self.ring
    }

    forward! {
        zero() -> TowerElem;
        one() -> TowerElem;
        embed(t: &Scalar) -> TowerElem;
        add(a: &TowerElem, b: &TowerElem) -> TowerElem;
        sub(a: &TowerElem, b: &TowerElem) -> TowerElem;
        neg(a: &TowerElem) -> TowerElem;
        scale(t: &Scalar, a: &TowerElem) -> TowerElem;
        mul(a: &TowerElem, b: &TowerElem) -> TowerElem;
        is_zero(a: &TowerElem) -> bool;
        inv(a: &TowerElem) -> Option<TowerElem>;
        contains(a: &TowerElem) -> bool;
    }
}
