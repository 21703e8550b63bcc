mod common;

use common::*;
use proptest::prelude::*;
use weilcalc::random;
use weilcalc::weil::{parse_algebra_spec, Morphism, TableSpec, Violation};
use weilcalc::{KAlgebra, Ring, Scalar, WeilAlgebra, WeilError};

/// `perm` is an isomorphism of structure constants from `a` to `b`.
fn isomorphic_by(a: &WeilAlgebra, b: &WeilAlgebra, perm: &[usize]) -> bool {
    let m = Morphism::from_permutation(a, b, perm).unwrap();
    a.dim() == b.dim() && m.check()
}

#[test]
fn preset_dimensions() {
    let r = rat();
    let j2 = WeilAlgebra::jet(&r, 2);
    assert_eq!(j2.dim(), 3);
    assert!(j2.variable(0).mul(&j2.basis_element(2)).unwrap().is_zero());
    let t2 = WeilAlgebra::tangent(&r, 2);
    assert_eq!(t2.dim(), 4);
    assert!(t2.variable(0).pow(2).is_zero());
    let w = WeilAlgebra::truncated(&r, 2, 1);
    assert_eq!((w.dim(), w.nilpotency_order()), (3, Some(2)));
    assert_eq!(WeilAlgebra::jet(&r, 0).dim(), 1);
}

#[test]
fn tensor_and_whitney() {
    let r = rat();
    let (j1, j2, j3) = (WeilAlgebra::jet(&r, 1), WeilAlgebra::jet(&r, 2), WeilAlgebra::jet(&r, 3));
    assert_eq!(WeilAlgebra::tensor(&j2, &j1).unwrap().dim(), 6);
    assert_eq!(WeilAlgebra::whitney_sum(&j2, &j3).unwrap().dim(), 6);

    let t1 = WeilAlgebra::tangent(&r, 1);
    let tt = WeilAlgebra::tensor(&t1, &t1).unwrap();
    assert!(isomorphic_by(&tt, &WeilAlgebra::tangent(&r, 2), &[0, 1, 2, 3]));
    let ws = WeilAlgebra::whitney_sum(&t1, &t1).unwrap();
    assert!(isomorphic_by(&ws, &WeilAlgebra::truncated(&r, 2, 1), &[0, 1, 2]));
    assert!(!isomorphic_by(&tt, &WeilAlgebra::tangent(&r, 2), &[0, 1, 3, 2]));
}

#[test]
fn element_arithmetic() {
    let r = rat();
    let j2 = WeilAlgebra::jet(&r, 2);
    let a = j2.element_from_ints(&[1, 1, 0]);
    assert_eq!(a.mul(&a).unwrap(), j2.element_from_ints(&[1, 2, 1]));
    assert_eq!(a.inv().unwrap(), j2.element_from_ints(&[1, -1, 1]));
    assert!(matches!(j2.variable(0).inv(), Err(WeilError::NotAUnit(_))));

    let t2 = WeilAlgebra::tangent(&r, 2);
    let (e1, e2) = (t2.variable(0), t2.variable(1));
    assert!(e1.mul(&e1).unwrap().is_zero());
    assert_eq!(e1.mul(&e2).unwrap(), t2.basis_element(3));

    let j1 = WeilAlgebra::jet(&r, 1);
    let inv = j1.element_from_ints(&[2, 1]).inv().unwrap();
    assert_eq!(inv.coeffs(), &[q(&r, "1/2"), q(&r, "-1/4")]);

    let j3 = WeilAlgebra::jet(&r, 3);
    assert_eq!(j3.embed(&r.from_i64(5)), j3.element_from_ints(&[5, 0, 0, 0]));
    assert_eq!(j2.element_from_ints(&[1, 2, 3]).project(), r.one());
}

#[test]
fn mismatched_algebras_are_rejected() {
    let r = rat();
    let a = WeilAlgebra::jet(&r, 1).variable(0);
    let b = WeilAlgebra::tangent(&r, 2).variable(0);
    assert_eq!(a.add(&b), Err(WeilError::AlgebraMismatch));
}

#[test]
fn spec_strings() {
    let r = rat();
    assert_eq!(parse_algebra_spec("jet:2", &r).unwrap().dim(), 3);
    assert_eq!(parse_algebra_spec("tensor(tan:1,tan:1)", &r).unwrap().dim(), 4);
    assert_eq!(parse_algebra_spec("whitney(jet:2, trunc:2,1)", &r).unwrap().dim(), 5);
    for bad in ["", "jet:", "foo:2", "tensor(jet:1)", "jet:1 x"] {
        assert!(matches!(parse_algebra_spec(bad, &r), Err(WeilError::InvalidPreset(_))), "{bad}");
    }
}

#[test]
fn graded_operations_on_small_examples() {
    let r = rat();
    let j2 = WeilAlgebra::jet(&r, 2);
    let a = j2.element_from_ints(&[4, 5, 6]);
    assert_eq!(j2.scale_action(&r.from_i64(3), &a).unwrap(), j2.element_from_ints(&[4, 15, 54]));
    assert_eq!(j2.scale_action(&r.one(), &a).unwrap(), a);

    let t1 = WeilAlgebra::tangent(&r, 1);
    let t = WeilAlgebra::tensor(&t1, &t1).unwrap();
    let f = t.flip(&t.element_from_ints(&[1, 2, 3, 4])).unwrap();
    assert_eq!(f.coeffs(), &ints(&r, &[1, 3, 2, 4])[..]);

    // Length-one grading: closed forms for star, its inverse and the endomorphism.
    let b = t1.element_from_ints(&[2, 3]);
    let a = t1.element_from_ints(&[5, 7]);
    assert_eq!(t1.star(&b, &a).unwrap(), t1.element_from_ints(&[10, 14 + 75]));
    let x = t1.star_inverse(&a).unwrap();
    assert_eq!(x.coeffs(), &[q(&r, "1/5"), q(&r, "-7/125")]);
    assert_eq!(t1.star(&a, &x).unwrap(), t1.one());
    assert_eq!(t1.star(&x, &a).unwrap(), t1.one());
    assert_eq!(t1.graded_endo(&a, &b).unwrap(), t1.element_from_ints(&[2, 15]));
    assert_eq!(t1.star_inverse(&t1.one()).unwrap(), t1.one());
    assert!(matches!(t1.star_inverse(&t1.variable(0)), Err(WeilError::NotAUnit(_))));

    // a = r·1 gives the canonical scaling action.
    let j3 = WeilAlgebra::jet(&r, 3);
    let b = j3.element_from_ints(&[1, 2, 3, 4]);
    let three = j3.embed(&r.from_i64(3));
    assert_eq!(j3.graded_endo(&three, &b).unwrap(), j3.element_from_ints(&[1, 6, 27, 108]));
    assert_eq!(j3.star(&b, &three).unwrap(), j3.element_from_ints(&[3, 18, 81, 324]));
}

#[test]
fn ungraded_table_algebra() {
    let r = rat();
    let one = r.one();
    let spec = TableSpec {
        dim: 1,
        constants: vec![vec![vec![one.clone()]]],
        unit: 0,
        augmentation: vec![one],
        grading: None,
    };
    let k = WeilAlgebra::from_table(&r, spec).unwrap();
    assert!(k.validate().is_valid());
    assert_eq!(k.star(&k.one(), &k.one()), Err(WeilError::Ungraded));
}

fn dual_numbers_table(r: &Ring, eps_sq: [i64; 2], unit_sq: [i64; 2]) -> TableSpec {
    let v = |c: [i64; 2]| ints(r, &c);
    TableSpec {
        dim: 2,
        constants: vec![vec![v(unit_sq), v([0, 1])], vec![v([0, 1]), v(eps_sq)]],
        unit: 0,
        augmentation: ints(r, &[1, 0]),
        grading: None,
    }
}

#[test]
fn table_validation() {
    let r = rat();
    let good = WeilAlgebra::from_table(&r, dual_numbers_table(&r, [0, 0], [1, 0])).unwrap();
    assert!(good.validate().is_valid());
    let idem = WeilAlgebra::from_table(&r, dual_numbers_table(&r, [0, 1], [1, 0])).unwrap();
    assert_eq!(idem.validate().violation, Some(Violation::Nilpotency));
    let bent = WeilAlgebra::from_table(&r, dual_numbers_table(&r, [0, 0], [1, 1])).unwrap();
    assert!(!bent.validate().is_valid());

    // Perturb one product of trunc(2,2): x·y = xy + x gives (xy)y != x(yy).
    let w = WeilAlgebra::truncated(&r, 2, 2);
    let mut constants: Vec<Vec<Vec<Scalar>>> =
        (0..6).map(|i| (0..6).map(|j| w.basis_product(i, j)).collect()).collect();
    let perturbed_xy = ints(&r, &[0, 1, 0, 0, 1, 0]);
    constants[1][2] = perturbed_xy.clone();
    constants[2][1] = perturbed_xy;
    let spec = TableSpec { dim: 6, constants, unit: 0, augmentation: w.augmentation().to_vec(), grading: None };
    let perturbed = WeilAlgebra::from_table(&r, spec).unwrap();
    assert!(matches!(perturbed.validate().violation, Some(Violation::Associativity { .. })));

    let short = TableSpec { dim: 2, constants: vec![], unit: 0, augmentation: ints(&r, &[1, 0]), grading: None };
    assert!(matches!(WeilAlgebra::from_table(&r, short), Err(WeilError::InvalidTable(_))));
}

#[test]
fn presets_validate() {
    for ring in [rat(), m101(), Ring::Modular(2), Ring::Modular(12)] {
        for spec in ["jet:0", "jet:3", "tan:3", "trunc:2,2", "tensor(jet:2,tan:1)", "whitney(trunc:2,1,jet:2)"] {
            let a = parse_algebra_spec(spec, &ring).unwrap();
            assert!(a.validate().is_valid(), "{spec} over {ring}");
        }
    }
}

#[test]
fn morphisms() {
    let r = rat();
    let (j1, j2) = (WeilAlgebra::jet(&r, 1), WeilAlgebra::jet(&r, 2));
    assert!(Morphism::augmentation(&WeilAlgebra::tangent(&r, 2)).check());
    let trunc = Morphism::jet_truncation(&j2, &j1).unwrap();
    assert!(trunc.check());
    assert_eq!(trunc.apply(&j2.element_from_ints(&[1, 2, 3])).unwrap(), j1.element_from_ints(&[1, 2]));
    let bad = Morphism::from_generator_images(&j1, &j1, &[j1.one()]);
    assert!(bad.map_or(true, |m| !m.check()));
}

#[test]
fn tower_round_trip() {
    let r = rat();
    let j1 = WeilAlgebra::jet(&r, 1);
    let t = weilcalc::weil::Tower::new(&r, vec![j1.clone(), j1.clone()]).unwrap();
    let flat = WeilAlgebra::tensor(&j1, &j1).unwrap();
    let a = flat.element_from_ints(&[1, 2, 3, 4]);
    let nested = t.from_tensor(&a).unwrap();
    assert_eq!(t.to_tensor(&nested, &flat).unwrap(), a);
}

fn small_algebras(ring: &Ring) -> Vec<WeilAlgebra> {
    ["jet:3", "tan:2", "trunc:2,2", "tensor(jet:1,jet:2)", "whitney(tan:1,jet:2)"]
        .iter()
        .map(|s| parse_algebra_spec(s, ring).unwrap())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn algebra_laws(ring in any_ring(), which in 0usize..5, seed in any::<u64>()) {
        let alg = &small_algebras(&ring)[which];
        let mut g = gen(seed);
        let (a, b, c) = (random::element(&mut g, alg), random::element(&mut g, alg), random::element(&mut g, alg));
        prop_assert_eq!(alg.mul(&alg.mul(&a, &b), &c), alg.mul(&a, &alg.mul(&b, &c)));
        prop_assert_eq!(alg.mul(&a, &b), alg.mul(&b, &a));
        prop_assert_eq!(alg.mul(&a, &alg.add(&b, &c)), alg.add(&alg.mul(&a, &b), &alg.mul(&a, &c)));
        prop_assert_eq!(alg.mul(&a, &alg.one()), a.clone());
        prop_assert_eq!(alg.mul(&a, &b).project(), &a.project() * &b.project());
    }

    #[test]
    fn units_invert(ring in any_ring(), which in 0usize..5, seed in any::<u64>()) {
        let alg = &small_algebras(&ring)[which];
        let u = random::unit_element(&mut gen(seed), alg);
        let v = u.inv().unwrap();
        prop_assert_eq!(alg.mul(&u, &v), alg.one());
    }

    #[test]
    fn nilpotents_are_nilpotent(ring in any_ring(), which in 0usize..5, seed in any::<u64>()) {
        let alg = &small_algebras(&ring)[which];
        let n = random::nilpotent(&mut gen(seed), alg);
        let order = alg.nilpotency_order().unwrap() as u32;
        prop_assert!(n.pow(order).is_zero());
        prop_assert!(n.inv().is_err());
    }
}
