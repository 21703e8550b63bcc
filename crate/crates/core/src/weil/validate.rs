use std::collections::BTreeMap;
use std::fmt;

use super::{Products, WeilAlgebra};
use crate::scalars::{span_basis, Ring, Scalar};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Unit { index: usize },
    Commutativity { i: usize, j: usize },
    Associativity { i: usize, j: usize, k: usize },
    /// `π` is not a unital ring map on this basis pair.
    Augmentation { i: usize, j: usize },
    /// `ker π` is not nilpotent.
    Nilpotency,
    Grading { i: usize, j: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Unit { index } => write!(f, "unit law fails on basis element {index}"),
            Violation::Commutativity { i, j } => write!(f, "e{i}·e{j} != e{j}·e{i}"),
            Violation::Associativity { i, j, k } => write!(f, "(e{i}·e{j})·e{k} != e{i}·(e{j}·e{k})"),
            Violation::Augmentation { i, j } => write!(f, "augmentation not multiplicative on (e{i}, e{j})"),
            Violation::Nilpotency => write!(f, "kernel of the augmentation is not nilpotent"),
            Violation::Grading { i, j } => write!(f, "e{i}·e{j} leaves the expected graded piece"),
        }
    }
}

/// Outcome of [`WeilAlgebra::validate`]; carries the first violation found.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub violation: Option<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violation.is_none()
    }
}

type Sparse = BTreeMap<usize, Scalar>;

fn product_terms(alg: &WeilAlgebra, i: usize, j: usize) -> Sparse {
    let mut out = Sparse::new();
    alg.for_each_product(i, j, |k, c| {
        let entry = out.entry(k).or_insert_with(|| alg.ring().zero());
        *entry = &*entry + c;
    });
    out.retain(|_, c| !c.is_zero());
    out
}

fn times_basis(alg: &WeilAlgebra, x: &Sparse, k: usize, left: bool) -> Sparse {
    let mut out = Sparse::new();
    for (l, c) in x {
        let p = if left { product_terms(alg, *l, k) } else { product_terms(alg, k, *l) };
        for (m, d) in p {
            let entry = out.entry(m).or_insert_with(|| alg.ring().zero());
            *entry = &*entry + &(c * &d);
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn augment(alg: &WeilAlgebra, x: &Sparse) -> Scalar {
    x.iter().fold(alg.ring().zero(), |acc, (k, c)| &acc + &(&alg.augmentation()[*k] * c))
}

impl WeilAlgebra {
    /// Checks the Weil algebra axioms on basis elements.
    pub fn validate(&self) -> ValidationReport {
        ValidationReport { violation: self.first_violation() }
    }

    fn first_violation(&self) -> Option<Violation> {
        let n = self.dim();
        let u = self.unit_index();
        let one = self.ring().one();
        for i in 0..n {
            let e_i = Sparse::from([(i, one.clone())]);
            if product_terms(self, u, i) != e_i || product_terms(self, i, u) != e_i {
                return Some(Violation::Unit { index: i });
            }
        }
        let table: Vec<Vec<Sparse>> = (0..n).map(|i| (0..n).map(|j| product_terms(self, i, j)).collect()).collect();
        for i in 0..n {
            for j in i + 1..n {
                if table[i][j] != table[j][i] {
                    return Some(Violation::Commutativity { i, j });
                }
            }
        }
        // Monomial quotients are associative by construction; large ones skip the cubic scan.
        if matches!(self.0.products, Products::Table(_)) || n <= 64 {
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        let lhs = times_basis(self, &table[i][j], k, true);
                        let rhs = times_basis(self, &table[j][k], i, false);
                        if lhs != rhs {
                            return Some(Violation::Associativity { i, j, k });
                        }
                    }
                }
            }
        }
        if self.augmentation()[u] != one {
            return Some(Violation::Augmentation { i: u, j: u });
        }
        for i in 0..n {
            for j in i..n {
                let lhs = augment(self, &table[i][j]);
                if lhs != &self.augmentation()[i] * &self.augmentation()[j] {
                    return Some(Violation::Augmentation { i, j });
                }
            }
        }
        if nilpotency_of(self).is_none() {
            return Some(Violation::Nilpotency);
        }
        if let Some(g) = self.grading() {
            for i in 0..n {
                for j in 0..n {
                    if table[i][j].keys().any(|&k| g[k] != g[i] + g[j]) {
                        return Some(Violation::Grading { i, j });
                    }
                }
            }
        }
        None
    }
}

/// Smallest `q` with `(ker π)^q = 0`, found by powering a spanning set.
///
/// Returns `None` when the powers stop shrinking before reaching zero.
pub(crate) fn nilpotency_of(alg: &WeilAlgebra) -> Option<usize> {
    let n = alg.dim();
    let ring = alg.ring();
    let u = alg.unit_index();
    let aug = alg.augmentation();
    if aug[u] != ring.one() {
        return None;
    }
    let gens: Vec<Vec<Scalar>> = (0..n)
        .filter(|&i| i != u)
        .map(|i| {
            let mut v = vec![ring.zero(); n];
            v[i] = ring.one();
            v[u] = -&aug[i];
            v
        })
        .collect();
    let limit = match ring {
        Ring::Modular(m) if !ring.is_field() => n * (1 + (64 - m.leading_zeros()) as usize) + 1,
        _ => n + 1,
    };
    let mut power = span_basis(ring, gens.clone());
    let mut q = 1;
    while !power.is_empty() {
        if q > limit {
            return None;
        }
        let mut next = Vec::with_capacity(power.len() * gens.len());
        for x in &power {
            for g in &gens {
                next.push(super::sc_mul(ring, alg, x, g));
            }
        }
        power = span_basis(ring, next);
        q += 1;
    }
    Some(q)
}
