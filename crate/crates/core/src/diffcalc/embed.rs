use crate::scalars::Scalar;
use crate::smoothexpr::ExprMap;

use super::cubic::{extended_tangent, CubicPoint};
use super::simplicial::{extended_jet, SimplicialPoint};
use super::{unit_inverse, DiffError, MAX_ORDER};

/// Per-component signs `σ(k)` relating the cubic extension along the
/// embedding to the embedded simplicial extension, indexed by mask. Obtained
/// by [`calibrate_embedding_signs`] on polynomial maps and frozen here.
pub const EMBEDDING_SIGNS: [&[i8]; 3] = [&[1, 1], &[1, 1, 1, 1], &[1, 1, 1, 1, 1, 1, 1, 1]];

pub fn embedding_signs(k: usize) -> Option<&'static [i8]> {
    EMBEDDING_SIGNS.get(k.checked_sub(1)?).copied()
}

fn chain_mask(i: usize) -> usize {
    (1 << i) - 1
}

/// `g_k`: `u_∅ = v_0`, `u_{1..i} = v_i`, `t_{i} = s_i − s_{i−1}`, `t_{i,i+1} = 1`, all else zero.
pub fn g_embed(p: &SimplicialPoint) -> Result<CubicPoint, DiffError> {
    let k = p.order();
    if k > MAX_ORDER {
        return Err(DiffError::OrderTooLarge(k));
    }
    let ring = p.ring();
    let m = p.vectors()[0].len();
    let n = 1 << k;
    let mut space = vec![vec![ring.zero(); m]; n];
    for (i, v) in p.vectors().iter().enumerate() {
        space[chain_mask(i)] = v.clone();
    }
    let mut time = vec![ring.zero(); n];
    for i in 1..=k {
        time[1 << (i - 1)] = p.time(i) - p.time(i - 1);
        if i < k {
            time[3 << (i - 1)] = ring.one();
        }
    }
    CubicPoint::new(ring, k, space, time[1..].to_vec())
}

/// Inverse of [`g_embed`] on its image: `s_i = Σ_{j ≤ i} t_{j}`.
pub fn g_unembed(q: &CubicPoint) -> Result<SimplicialPoint, DiffError> {
    let k = q.order();
    let ring = q.ring();
    let chains: Vec<usize> = (0..=k).map(chain_mask).collect();
    for mask in 0..1 << k {
        if !chains.contains(&mask) && q.space(mask).iter().any(|c| !c.is_zero()) {
            return Err(DiffError::NotInImage(format!("space component {mask} is nonzero")));
        }
    }
    for mask in 1..1usize << k {
        let expected = match mask.count_ones() {
            1 => continue,
            2 if mask & (mask >> 1) != 0 => ring.one(),
            _ => ring.zero(),
        };
        if q.time(mask) != &expected {
            return Err(DiffError::NotInImage(format!("time component {mask} is {}", q.time(mask))));
        }
    }
    let mut s = Vec::with_capacity(k);
    let mut acc = ring.zero();
    for i in 1..=k {
        acc = &acc + q.time(1 << (i - 1));
        s.push(acc.clone());
    }
    SimplicialPoint::new(ring, chains.iter().map(|&c| q.space(c).to_vec()).collect(), s)
}

/// `(r^{|α|} v_α, r^{|α|−2} t_α)`.
pub fn rho_cubic(r: &Scalar, q: &CubicPoint) -> Result<CubicPoint, DiffError> {
    let inv = unit_inverse(r)?;
    let ring = q.ring();
    let power = |e: i32| if e >= 0 { r.pow(e as u32) } else { inv.pow((-e) as u32) };
    let space = (0..1usize << q.order())
        .map(|m| {
            let c = power(m.count_ones() as i32);
            q.space(m).iter().map(|x| &c * x).collect()
        })
        .collect();
    let time = (1..1usize << q.order()).map(|m| &power(m.count_ones() as i32 - 2) * q.time(m)).collect();
    CubicPoint::new(ring, q.order(), space, time)
}

/// `(v_0, r v_1, r² v_2, …; r^{-1} s_1, …)`.
pub fn rho_simplicial(r: &Scalar, p: &SimplicialPoint) -> Result<SimplicialPoint, DiffError> {
    let inv = unit_inverse(r)?;
    let vs = p.vectors().iter().enumerate().map(|(i, v)| {
        let c = r.pow(i as u32);
        v.iter().map(|x| &c * x).collect()
    });
    let s = p.times().iter().map(|t| &inv * t).collect();
    SimplicialPoint::new(p.ring(), vs.collect(), s)
}

/// Both sides of the embedding square at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingReport {
    /// `T^{]k[} f (g_k(p))`.
    pub cubic: CubicPoint,
    /// `g_k (J^{⟩k⟨} f (p))`.
    pub embedded: CubicPoint,
}

impl EmbeddingReport {
    pub fn new(f: &ExprMap, p: &SimplicialPoint) -> Result<EmbeddingReport, DiffError> {
        let cubic = extended_tangent(f, &g_embed(p)?)?;
        let embedded = g_embed(&extended_jet(f, p)?)?;
        Ok(EmbeddingReport { cubic, embedded })
    }

    /// Whether the square commutes under the given per-mask signs.
    pub fn commutes_with(&self, signs: &[i8]) -> bool {
        let ring = self.cubic.ring();
        self.cubic.times() == self.embedded.times()
            && signs.len() == self.cubic.spaces().len()
            && self.cubic.spaces().iter().zip(self.embedded.spaces()).zip(signs).all(|((a, b), &s)| {
                let sign = ring.from_i64(s as i64);
                a.iter().zip(b).all(|(x, y)| x == &(&sign * y))
            })
    }
}

/// Checks the embedding square against the frozen sign table.
pub fn check_embedding(f: &ExprMap, p: &SimplicialPoint) -> Result<bool, DiffError> {
    let signs = embedding_signs(p.order()).ok_or(DiffError::OrderTooLarge(p.order()))?;
    Ok(EmbeddingReport::new(f, p)?.commutes_with(signs))
}

/// Derives the sign of every component from sample reports of one order.
/// Components that vanish on both sides in every sample default to `+1`.
pub fn calibrate_embedding_signs(reports: &[EmbeddingReport]) -> Result<Vec<i8>, DiffError> {
    let n = reports.first().map_or(0, |r| r.cubic.spaces().len());
    let mut signs: Vec<Option<i8>> = vec![None; n];
    for rep in reports {
        for (m, sign) in signs.iter_mut().enumerate() {
            let (a, b) = (rep.cubic.space(m), rep.embedded.space(m));
            let plus = a == b;
            let minus = a.iter().zip(b).all(|(x, y)| x == &-y);
            let seen = match (plus, minus) {
                (true, true) => continue,
                (true, false) => 1,
                (false, true) => -1,
                (false, false) => return Err(DiffError::Calibration(m)),
            };
            match sign {
                Some(s) if *s != seen => return Err(DiffError::Calibration(m)),
                _ => *sign = Some(seen),
            }
        }
    }
    Ok(signs.into_iter().map(|s| s.unwrap_or(1)).collect())
}
