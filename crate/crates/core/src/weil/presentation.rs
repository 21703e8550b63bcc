//! Monomial-quotient presentations `K[X_1..X_n] / (deg > r, extra generators)`.

use std::collections::{BTreeSet, HashMap};

use super::WeilError;

pub type Exponent = Vec<u32>;

/// A monomial ideal quotient of the truncated polynomial algebra `W^r_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    nvars: usize,
    cap: u32,
    extra_gens: Vec<Exponent>,
    basis: Vec<Exponent>,
    index: HashMap<Exponent, usize>,
}

pub fn degree(e: &[u32]) -> u32 {
    e.iter().sum()
}

fn divides(g: &[u32], e: &[u32]) -> bool {
    g.iter().zip(e).all(|(a, b)| a <= b)
}

/// Graded-lex order: constant first, ascending degree, then descending lex
/// (so `X_1` precedes `X_2`).
pub fn basis_order(a: &Exponent, b: &Exponent) -> std::cmp::Ordering {
    degree(a).cmp(&degree(b)).then_with(|| b.cmp(a))
}

impl Presentation {
    pub fn new(nvars: usize, cap: u32, extra_gens: Vec<Exponent>) -> Result<Presentation, WeilError> {
        for g in &extra_gens {
            if g.len() != nvars {
                return Err(WeilError::InvalidPreset(format!(
                    "generator {g:?} has {} entries, expected {nvars}",
                    g.len()
                )));
            }
            if degree(g) == 0 {
                return Err(WeilError::InvalidPreset("the constant monomial cannot be a generator".into()));
            }
        }
        // Keep only minimal generators of degree <= cap.
        let candidates: BTreeSet<Exponent> = extra_gens.into_iter().filter(|g| degree(g) <= cap).collect();
        let mut gens: Vec<Exponent> = candidates
            .iter()
            .filter(|g| !candidates.iter().any(|h| h != *g && divides(h, g)))
            .cloned()
            .collect();
        gens.sort_by(basis_order);

        // Divisors of surviving monomials survive, so grow degree by degree.
        let mut basis: Vec<Exponent> = vec![vec![0; nvars]];
        let mut layer: Vec<Exponent> = basis.clone();
        for _ in 0..cap {
            let mut next: BTreeSet<Exponent> = BTreeSet::new();
            for e in &layer {
                for v in 0..nvars {
                    let mut f = e.clone();
                    f[v] += 1;
                    if !gens.iter().any(|g| divides(g, &f)) {
                        next.insert(f);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            layer = next.into_iter().collect();
            layer.sort_by(basis_order);
            basis.extend(layer.iter().cloned());
        }
        let index = basis.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();
        Ok(Presentation { nvars, cap, extra_gens: gens, basis, index })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    pub fn extra_gens(&self) -> &[Exponent] {
        &self.extra_gens
    }

    pub fn basis(&self) -> &[Exponent] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn index_of(&self, e: &[u32]) -> Option<usize> {
        self.index.get(e).copied()
    }

    pub fn grading(&self) -> Vec<u32> {
        self.basis.iter().map(|e| degree(e)).collect()
    }

    /// Smallest `q` with `N^q = 0`: one more than the top basis degree.
    pub fn nilpotency_order(&self) -> usize {
        self.basis.iter().map(|e| degree(e)).max().unwrap_or(0) as usize + 1
    }

    /// Index of the product of two basis monomials, `None` when it reduces to 0.
    pub fn product_index(&self, i: usize, j: usize) -> Option<usize> {
        let e: Exponent = self.basis[i].iter().zip(&self.basis[j]).map(|(a, b)| a + b).collect();
        self.index_of(&e)
    }

    /// Index of the monomial for variable `v`, if it survives.
    pub fn variable_index(&self, v: usize) -> Option<usize> {
        let mut e = vec![0; self.nvars];
        e[v] = 1;
        self.index_of(&e)
    }

    /// Presentation of `A ⊗ B`: the variable blocks are concatenated and each
    /// block keeps its own relations, including its own degree cap.
    pub fn tensor(a: &Presentation, b: &Presentation) -> Presentation {
        let n = a.nvars + b.nvars;
        let mut gens: Vec<Exponent> = Vec::new();
        for g in &a.extra_gens {
            gens.push(g.iter().copied().chain(std::iter::repeat(0).take(b.nvars)).collect());
        }
        for g in &b.extra_gens {
            gens.push(std::iter::repeat(0).take(a.nvars).chain(g.iter().copied()).collect());
        }
        for e in monomials_of_degree(a.nvars, a.cap + 1) {
            gens.push(e.into_iter().chain(std::iter::repeat(0).take(b.nvars)).collect());
        }
        for e in monomials_of_degree(b.nvars, b.cap + 1) {
            gens.push(std::iter::repeat(0).take(a.nvars).chain(e).collect());
        }
        Presentation::new(n, a.cap + b.cap, gens).expect("tensor of valid presentations")
    }

    /// Presentation of the Whitney sum: the tensor relations plus `X_i Y_j = 0`.
    pub fn whitney(a: &Presentation, b: &Presentation) -> Presentation {
        let t = Presentation::tensor(a, b);
        let mut gens = t.extra_gens.clone();
        gens.extend(cross_products(0..a.nvars, a.nvars..a.nvars + b.nvars, t.nvars));
        Presentation::new(t.nvars, t.cap, gens).expect("whitney sum of valid presentations")
    }

    /// Relabels variables by `perm`, where new variable `perm[v]` is old variable `v`.
    pub fn permute_variables(&self, perm: &[usize]) -> Presentation {
        let relabel = |e: &Exponent| {
            let mut f = vec![0; self.nvars];
            for (v, &p) in perm.iter().enumerate() {
                f[p] = e[v];
            }
            f
        };
        Presentation::new(self.nvars, self.cap, self.extra_gens.iter().map(relabel).collect())
            .expect("relabelled presentation")
    }
}

pub(crate) fn cross_products(
    left: std::ops::Range<usize>,
    right: std::ops::Range<usize>,
    nvars: usize,
) -> Vec<Exponent> {
    let mut gens = Vec::new();
    for i in left {
        for j in right.clone() {
            let mut e = vec![0; nvars];
            e[i] += 1;
            e[j] += 1;
            gens.push(e);
        }
    }
    gens
}

/// All exponent vectors in `n` variables of total degree exactly `d`.
pub fn monomials_of_degree(n: usize, d: u32) -> Vec<Exponent> {
    fn go(n: usize, d: u32, prefix: &mut Exponent, out: &mut Vec<Exponent>) {
        if prefix.len() + 1 == n {
            prefix.push(d);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for k in (0..=d).rev() {
            prefix.push(k);
            go(n, d - k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        if d == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    go(n, d, &mut Vec::with_capacity(n), &mut out);
    out
}
