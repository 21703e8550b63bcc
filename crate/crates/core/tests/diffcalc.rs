mod common;

use common::*;
use proptest::prelude::*;
use weilcalc::diffcalc::*;
use weilcalc::jetcalc::simplicial_jet;
use weilcalc::random;
use weilcalc::{ExprMap, Ring, Scalar};

fn expr(text: &str) -> ExprMap {
    ExprMap::parse(text).unwrap()
}

fn cubic1(r: &Ring, x: i64, v: i64, t: i64) -> CubicPoint {
    CubicPoint::new(r, 1, vec![ints(r, &[x]), ints(r, &[v])], ints(r, &[t])).unwrap()
}

fn simplicial(r: &Ring, vs: &[i64], s: &[i64]) -> SimplicialPoint {
    SimplicialPoint::new(r, vs.iter().map(|&v| ints(r, &[v])).collect(), ints(r, s)).unwrap()
}

#[test]
fn first_order_quotients() {
    let r = rat();
    // 2xv + tv² at x = 3, v = 5, t = 7.
    assert_eq!(cubic_dq(&expr("x0^2"), &cubic1(&r, 3, 5, 7)).unwrap(), ints(&r, &[30 + 175]));
    for t in [1, 2, -4] {
        assert_eq!(cubic_dq(&expr("3*x0 + 0*1"), &cubic1(&r, 3, 5, t)).unwrap(), ints(&r, &[15]));
    }
    assert!(matches!(cubic_dq(&expr("x0^2"), &cubic1(&r, 3, 5, 0)), Err(DiffError::SingularTime(_))));
    let m6 = Ring::Modular(6);
    assert!(matches!(cubic_dq(&expr("x0^2"), &cubic1(&m6, 3, 5, 2)), Err(DiffError::SingularTime(_))));
}

#[test]
fn divided_differences() {
    let r = rat();
    let p = simplicial(&r, &[0, 1, 0], &[1, 2]);
    assert_eq!(simplicial_dq(&expr("x0^2"), &p).unwrap(), ints(&r, &[1]));
    assert!(simplicial_dq(&expr("4 + 0*x0"), &p).unwrap()[0].is_zero());

    let p1 = simplicial(&r, &[3, 5], &[7]);
    assert_eq!(simplicial_dq(&expr("x0^2"), &p1).unwrap(), cubic_dq(&expr("x0^2"), &cubic1(&r, 3, 5, 7)).unwrap());

    let singular = simplicial(&r, &[0, 1, 0], &[1, 1]);
    assert!(!singular.is_nonsingular());
    assert!(matches!(simplicial_dq(&expr("x0^2"), &singular), Err(DiffError::SingularTime(_))));
}

#[test]
fn embedding_layout() {
    let r = rat();
    let p = simplicial(&r, &[2, 3, 4], &[5, 9]);
    let q = g_embed(&p).unwrap();
    assert_eq!(q.spaces(), &[ints(&r, &[2]), ints(&r, &[3]), ints(&r, &[0]), ints(&r, &[4])]);
    assert_eq!(q.times(), &ints(&r, &[5, 4, 1])[..]);
    assert_eq!(g_unembed(&q).unwrap(), p);

    let p1 = simplicial(&r, &[2, 3], &[5]);
    assert_eq!(g_embed(&p1).unwrap(), cubic1(&r, 2, 3, 5));

    let off = CubicPoint::new(&r, 2, vec![ints(&r, &[2]), ints(&r, &[3]), ints(&r, &[1]), ints(&r, &[4])], ints(&r, &[5, 4, 1]))
        .unwrap();
    assert!(matches!(g_unembed(&off), Err(DiffError::NotInImage(_))));
}

#[test]
fn scaling_actions() {
    let r = rat();
    let two = r.from_i64(2);
    let q = rho_cubic(&two, &cubic1(&r, 3, 5, 8)).unwrap();
    assert_eq!(q, cubic1(&r, 3, 10, 4));
    assert_eq!(rho_cubic(&r.one(), &cubic1(&r, 3, 5, 8)).unwrap(), cubic1(&r, 3, 5, 8));
    assert!(matches!(rho_cubic(&r.zero(), &cubic1(&r, 3, 5, 8)), Err(DiffError::NotAUnit(_))));

    let p = simplicial(&r, &[1, 2, 3], &[4, 6]);
    let scaled = rho_simplicial(&two, &p).unwrap();
    assert_eq!(scaled, simplicial(&r, &[1, 4, 12], &[2, 3]));
}

#[test]
fn symbolic_expansions() {
    let r = rat();
    let f = expr("x0^2");
    let (v0, v1, v2) = (ints(&r, &[3]), ints(&r, &[5]), ints(&r, &[7]));
    let sym = symbolic_simplicial(&f, &r, &[v0.clone(), v1.clone(), v2.clone()]).unwrap();
    // f<1> = 2 v0 v1 + s1 v1², f<2> = v1² + 2 v0 v2 + 2 s2 v1 v2 + s2 (s2 − s1) v2².
    let (s1, s2) = (r.from_i64(2), r.from_i64(-3));
    let at = sym.eval_at(&[s1.clone(), s2.clone()]);
    let expected1 = 30 + 2 * 25;
    let expected2 = 25 + 42 + 2 * -3 * 35 + (-3) * (-3 - 2) * 49;
    assert_eq!(at[1], ints(&r, &[expected1]));
    assert_eq!(at[2], ints(&r, &[expected2]));
    assert_eq!(sym.at_zero(), simplicial_jet(&f, &r, &[v0.clone(), v1.clone(), v2.clone()]).unwrap().components);
    let p = SimplicialPoint::new(&r, vec![v0.clone(), v1.clone(), v2.clone()], vec![s1, s2]).unwrap();
    assert_eq!(extended_jet(&f, &p).unwrap().vectors(), &at[..]);

    let lin = expr("3*x0");
    let sym = symbolic_simplicial(&lin, &r, &[v0, v1.clone(), v2.clone()]).unwrap();
    assert_eq!(sym.at_zero()[1], ints(&r, &[15]));
    assert_eq!(sym.at_zero()[2], ints(&r, &[21]));
    assert!(sym.components[2][0].degree().map_or(true, |d| d == 0));

    assert!(matches!(
        symbolic_simplicial(&expr("1/x0"), &r, &[ints(&r, &[1])]),
        Err(DiffError::Expr(weilcalc::ExprError::NotPolynomial(_)))
    ));
}

#[test]
fn second_differentials() {
    let r = rat();
    // d²(x³)(x)(u, v) = 6xuv.
    let d = second_differential(&expr("x0^3"), &r, &ints(&r, &[2]), &ints(&r, &[3]), &ints(&r, &[5])).unwrap();
    assert_eq!(d, ints(&r, &[180]));
}

#[test]
fn frozen_signs_are_positive() {
    for k in 1..=3 {
        assert!(embedding_signs(k).unwrap().iter().all(|&s| s == 1));
    }
    assert!(embedding_signs(0).is_none());
    assert!(embedding_signs(4).is_none());
}

fn nonsingular_simplicial(g: &mut random::TestRng, r: &Ring, m: usize, k: usize) -> SimplicialPoint {
    loop {
        if let Some(p) = random::simplicial_point(g, r, m, k) {
            return p;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn oracle_agreement(ring in exact_ring(), seed in any::<u64>(), k in 1usize..=3) {
        let mut g = gen(seed);
        let f = random::poly_map(&mut g, &ring, 2, 1, 4);
        let p = nonsingular_simplicial(&mut g, &ring, 2, k);
        let sym = symbolic_simplicial(&f, &ring, p.vectors()).unwrap();
        prop_assert_eq!(&sym.eval_at(p.times())[k], &simplicial_dq(&f, &p).unwrap());
        prop_assert_eq!(sym.at_zero(), simplicial_jet(&f, &ring, p.vectors()).unwrap().components);
    }

    #[test]
    fn unembed_inverts_embed(ring in exact_ring(), seed in any::<u64>(), k in 1usize..=3) {
        let mut g = gen(seed);
        let p = nonsingular_simplicial(&mut g, &ring, 2, k);
        prop_assert_eq!(g_unembed(&g_embed(&p).unwrap()).unwrap(), p);
    }

    #[test]
    fn embedding_square_commutes(ring in exact_ring(), seed in any::<u64>(), k in 1usize..=3) {
        let mut g = gen(seed);
        let f = random::poly_map(&mut g, &ring, 2, 1, 3);
        let p = nonsingular_simplicial(&mut g, &ring, 2, k);
        prop_assert!(check_embedding(&f, &p).unwrap());
    }

    #[test]
    fn equivariance(ring in exact_ring(), seed in any::<u64>(), k in 1usize..=3) {
        let mut g = gen(seed);
        let f = random::poly_map(&mut g, &ring, 2, 1, 3);
        let p = nonsingular_simplicial(&mut g, &ring, 2, k);
        let r: Scalar = ring.random_unit(&mut g);
        let lhs = g_embed(&rho_simplicial(&r, &p).unwrap()).unwrap();
        prop_assert_eq!(lhs, rho_cubic(&r, &g_embed(&p).unwrap()).unwrap());
        let jet_scaled = extended_jet(&f, &rho_simplicial(&r, &p).unwrap()).unwrap();
        prop_assert_eq!(jet_scaled, rho_simplicial(&r, &extended_jet(&f, &p).unwrap()).unwrap());
    }

    #[test]
    fn cubic_functoriality(ring in exact_ring(), seed in any::<u64>(), k in 1usize..=2) {
        let mut g = gen(seed);
        let f = random::poly_map(&mut g, &ring, 2, 2, 2);
        let h = random::poly_map(&mut g, &ring, 2, 1, 2);
        let Some(p) = random::cubic_point(&mut g, &ring, 2, k) else { return Ok(()) };
        let hf = h.compose(&f).unwrap();
        let lhs = extended_tangent(&hf, &p).unwrap();
        let rhs = extended_tangent(&h, &extended_tangent(&f, &p).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}
