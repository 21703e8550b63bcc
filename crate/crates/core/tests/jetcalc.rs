mod common;

use common::*;
use proptest::prelude::*;
use weilcalc::jetcalc::*;
use weilcalc::random;
use weilcalc::{AlgebraicMap, ExprError, ExprMap, Poly, Ring, ScalarError};

fn expr(text: &str) -> ExprMap {
    ExprMap::parse(text).unwrap()
}

#[test]
fn taylor_polynomials() {
    let r = rat();
    assert_eq!(taylor(&expr("x0^2"), &r, &ints(&r, &[1]), 2).unwrap().poly(), &poly("2*x0 + x0^2", &r));
    assert_eq!(taylor(&expr("1/x0"), &r, &ints(&r, &[1]), 2).unwrap().poly(), &poly("-x0 + x0^2", &r));
    let f = expr("3 + x0*x1 + x1^3");
    let t = taylor(&f, &r, &ints(&r, &[0, 0]), 4).unwrap();
    assert_eq!(t.poly(), &poly("x0*x1 + x1^3", &r));
    assert_eq!(t.part(2), poly_n("x0*x1", 2, &r));
    assert!(taylor(&expr("1/x0"), &r, &ints(&r, &[0]), 1).unwrap_err().is_domain());
}

#[test]
fn radial_expansion_of_a_cube() {
    let r = rat();
    let e = radial_expansion(&expr("x0^3"), &r, &ints(&r, &[1]), &ints(&r, &[1]), 2).unwrap();
    assert_eq!(e.coeffs, vec![ints(&r, &[3]), ints(&r, &[3])]);
    assert_eq!(e.remainder, vec![Poly::var(&r, 1, 0)]);
    assert!(e.remainder_vanishes_at_zero());
    let t = q(&r, "2/7");
    let direct = expr("x0^3").eval_scalars(&r, &[&r.one() + &t]).unwrap();
    assert_eq!(e.recombine(&t), direct);

    let full = radial_expansion(&expr("x0^3"), &r, &ints(&r, &[1]), &ints(&r, &[1]), 3).unwrap();
    assert!(full.remainder.iter().all(Poly::is_zero));
}

#[test]
fn normalized_differentials() {
    let r = rat();
    let f = expr("x0^3");
    let (x, u, v) = (ints(&r, &[2]), ints(&r, &[3]), ints(&r, &[5]));
    // 3 x v² and 6 x u v.
    assert_eq!(normalized_diff(&f, &r, &x, &[v.clone()], &[2]).unwrap(), ints(&r, &[150]));
    let uv = vec![u.clone(), v.clone()];
    assert_eq!(normalized_diff(&f, &r, &x, &uv, &[1, 1]).unwrap(), ints(&r, &[180]));
    assert_eq!(normalized_diff_ordered(&f, &r, &x, &uv, &[1, 1], &[1, 0]).unwrap(), ints(&r, &[180]));
    // First differential is linear in v.
    let d1 = normalized_diff(&f, &r, &x, &[v.clone()], &[1]).unwrap();
    assert_eq!(d1, ints(&r, &[60]));
}

#[test]
fn simplicial_jets_and_taylor() {
    let r = rat();
    let f = expr("x0^2");
    let vs = vec![ints(&r, &[3]), ints(&r, &[5]), ints(&r, &[7])];
    let jet = simplicial_jet(&f, &r, &vs).unwrap();
    assert_eq!(jet.components, vec![ints(&r, &[9]), ints(&r, &[30]), ints(&r, &[42 + 25])]);
    let zero = simplicial_jet(&f, &r, &[ints(&r, &[3]), ints(&r, &[0]), ints(&r, &[0])]).unwrap();
    assert_eq!(zero.components, vec![ints(&r, &[9]), ints(&r, &[0]), ints(&r, &[0])]);

    let fiber = jet_from_taylor(&f, &r, &ints(&r, &[1]), &[ints(&r, &[5]), ints(&r, &[7])]).unwrap();
    assert_eq!(fiber, vec![ints(&r, &[10]), ints(&r, &[14 + 25])]);
    let fiber = jet_from_taylor(&f, &r, &ints(&r, &[1]), &[ints(&r, &[0]), ints(&r, &[0])]).unwrap();
    assert!(fiber.iter().flatten().all(|c| c.is_zero()));
}

#[test]
fn taylor_equation() {
    let r = rat();
    let f = expr("x0^2");
    let (x, v1, v2) = (ints(&r, &[2]), ints(&r, &[3]), ints(&r, &[5]));
    let vs = vec![v1.clone(), v2.clone()];
    assert_eq!(taylor_eqn_rhs(&f, &r, &x, &vs, 2).unwrap(), ints(&r, &[20 + 9]));
    assert_eq!(taylor_eqn_rhs(&f, &r, &x, &vs, 1).unwrap(), ints(&r, &[12]));
    let cube = expr("x0^3");
    let vs3 = vec![v1.clone(), v2.clone(), ints(&r, &[7])];
    assert_eq!(taylor_eqn_rhs(&cube, &r, &ints(&r, &[0]), &vs3, 3).unwrap(), ints(&r, &[27]));
    assert_eq!(weighted_multi_indices(3, 3), vec![vec![0, 0, 1], vec![1, 1, 0], vec![3, 0, 0]]);
}

#[test]
fn factorials() {
    let r = rat();
    let f = expr("x0^2");
    let rep = factorial_check(&f, &r, &ints(&r, &[4]), &ints(&r, &[3]), 2).unwrap();
    assert!(rep.equal());
    assert_eq!(rep.normalized, ints(&r, &[9]));
    assert!(factorial_check(&f, &r, &ints(&r, &[4]), &ints(&r, &[3]), 1).unwrap().equal());
    let m2 = Ring::Modular(2);
    let err = factorial_check(&f, &m2, &ints(&m2, &[1]), &ints(&m2, &[1]), 2).unwrap_err();
    assert!(matches!(err, ExprError::Scalar(ScalarError::NotAUnit(..))));
    // The normalized differential itself stays defined in characteristic 2.
    assert_eq!(taylor(&f, &m2, &ints(&m2, &[1]), 2).unwrap().poly(), &poly("x0^2", &m2));
}

#[test]
fn chain_rule_examples() {
    let r = rat();
    let g = expr("x0^2");
    let h = expr("1/(1+x0)");
    assert!(taylor_chain(&g, &h, &r, &ints(&r, &[1]), 3).unwrap().equal());
    let id = expr("x0");
    let rep = taylor_chain(&id, &h, &r, &ints(&r, &[2]), 2).unwrap();
    assert!(rep.equal());
    assert_eq!(rep.composite, taylor(&h, &r, &ints(&r, &[2]), 2).unwrap().poly().clone());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn jet_paths_agree(ring in exact_ring(), seed in any::<u64>(), k in 1usize..=3) {
        let mut g = gen(seed);
        let f = random::rational_map(&mut g, &ring, 2, 1, 2);
        let x = random::point(&mut g, &ring, 2);
        let vs: Vec<_> = (0..k).map(|_| random::point(&mut g, &ring, 2)).collect();
        let mut all = vec![x.clone()];
        all.extend(vs.iter().cloned());
        let Ok(jet) = simplicial_jet(&f, &ring, &all) else { return Ok(()) };
        let fiber = jet_from_taylor(&f, &ring, &x, &vs).unwrap();
        prop_assert_eq!(&jet.components[1..], &fiber[..]);
        for j in 1..=k {
            prop_assert_eq!(&taylor_eqn_rhs(&f, &ring, &x, &vs, j as u32).unwrap(), &jet.components[j]);
        }
    }

    #[test]
    fn chain_rule(ring in exact_ring(), seed in any::<u64>(), k in 1u32..=3) {
        let mut g = gen(seed);
        let outer = random::rational_map(&mut g, &ring, 2, 1, 2);
        let inner = random::rational_map(&mut g, &ring, 2, 2, 2);
        let x = random::point(&mut g, &ring, 2);
        match taylor_chain(&outer, &inner, &ring, &x, k) {
            Ok(rep) => prop_assert!(rep.equal()),
            Err(e) => prop_assert!(e.is_domain()),
        }
    }

    #[test]
    fn differentials_commute(ring in exact_ring(), seed in any::<u64>()) {
        let mut g = gen(seed);
        let f = random::poly_map(&mut g, &ring, 2, 1, 4);
        let x = random::point(&mut g, &ring, 2);
        let vs = vec![random::point(&mut g, &ring, 2), random::point(&mut g, &ring, 2)];
        let a = normalized_diff_ordered(&f, &ring, &x, &vs, &[2, 1], &[0, 1]).unwrap();
        let b = normalized_diff_ordered(&f, &ring, &x, &vs, &[2, 1], &[1, 0]).unwrap();
        prop_assert_eq!(a, b);
    }
}
