use super::*;
use crate::value_group::{int, rat};
use proptest::prelude::*;

fn g(n: i64, d: i64) -> GroupElement {
    GroupElement::from_ints(n, d)
}

/// `X^p - X + t` and its root `a = sum t^{p^i}` over F_p(t).
fn not_key_setup(p: u32) -> (Tower, Element, PolyOverK) {
    let tw = Tower::rational(p, 1);
    let a = tw.as_root(&tw.neg(&tw.t_pow(int(1))).unwrap(), 0).unwrap();
    let f = PolyOverK::min_poly(&tw, &a).unwrap();
    (tw, a, f)
}

#[test]
fn linear_factor_evaluates_to_gamma() {
    let tw = Tower::laurent(3, 1);
    let a = tw.t_pow(rat(1, 2));
    let pair = Pair::new(a.clone(), g(2, 3));
    let f = PolyOverK::linear(&a);
    assert_eq!(w_eval_roots(&tw, &f, &pair).unwrap(), g(2, 3));
    assert_eq!(w_eval_taylor(&tw, &f, &pair).unwrap(), g(2, 3));
    assert_eq!(j_invariant(&tw, &f, &pair).unwrap(), 1);
    assert_eq!(delta_w(&tw, &f, &pair).unwrap(), Some(g(2, 3)));
}

#[test]
fn quadratic_example_both_oracles() {
    let tw = Tower::laurent(3, 1);
    let f = poly_from_terms(3, &[&[(3, 1, 1)], &[(1, 1, 1)], &[(0, 1, 1)]]).unwrap();
    let pair = Pair::new(tw.zero(), g(2, 1));
    assert_eq!(w_eval_taylor(&tw, &f, &pair).unwrap(), g(3, 1));
    let c = poly_from_terms(3, &[&[(5, 2, 2)]]).unwrap();
    assert_eq!(w_eval_taylor(&tw, &c, &pair).unwrap(), g(5, 2));
}

#[test]
fn not_key_example() {
    let (tw, a, f) = not_key_setup(3);
    assert_eq!(f.degree(), 3);
    assert_eq!(f.coeffs().unwrap().len(), 4);
    let gamma = g(1, 2);
    let pair0 = Pair::new(tw.zero(), gamma.clone());
    let pair_a = Pair::new(a.clone(), gamma.clone());
    assert!(same_valuation(&tw, &pair_a, &pair0).unwrap());
    assert_eq!(w_eval_roots(&tw, &f, &pair0).unwrap(), gamma);
    assert_eq!(w_eval_taylor(&tw, &f, &pair0).unwrap(), gamma);
    assert_eq!(j_invariant(&tw, &f, &pair_a).unwrap(), 1);
    assert_eq!(j_invariant(&tw, &f, &pair0).unwrap(), 1);
    // the initial form of f is that of -X, which differs from in(X) for odd p
    let x = PolyOverK::x(3);
    assert!(!initial_forms_equal(&tw, &f, &x, &pair0).unwrap());
    assert!(initial_forms_equal(&tw, &f, &x.scale(&Fq::from_i64(3, -1)), &pair0).unwrap());
    let fam = key_search_family(&tw, &f, &[]).unwrap();
    match key_certificate(&tw, &f, &pair0, &fam).unwrap() {
        KeyVerdict::NotKeyByInitialForm { witness } => assert_eq!(witness, "2*X"),
        v => panic!("{v:?}"),
    }
}

#[test]
fn not_key_example_characteristic_two() {
    let (tw, _, f) = not_key_setup(2);
    let pair0 = Pair::new(tw.zero(), g(1, 3));
    assert!(initial_forms_equal(&tw, &f, &PolyOverK::x(2), &pair0).unwrap());
}

#[test]
fn initial_form_basics() {
    let tw = Tower::laurent(5, 1);
    let pair = Pair::new(tw.zero(), g(1, 2));
    let x = PolyOverK::x(5);
    let t = poly_from_terms(5, &[&[(1, 1, 1)]]).unwrap();
    assert!(initial_forms_equal(&tw, &x, &x, &pair).unwrap());
    assert!(!initial_forms_equal(&tw, &x, &t, &pair).unwrap());
}

#[test]
fn minimal_pair_prefers_degree_one() {
    let (tw, a, _) = not_key_setup(3);
    let pair = Pair::new(a.clone(), g(1, 2));
    let m = minimal_pair_among(&tw, &[a, tw.zero()], &pair).unwrap();
    assert_eq!(m.index, 1);
    assert_eq!(m.status, Status::Certified);
}

#[test]
fn minimal_pair_by_krasner() {
    let tw = Tower::perfect(3);
    let a = tw.as_root(&tw.t_pow(int(-1)), 0).unwrap();
    let r = tw.nth_root(&tw.t_pow(int(1)), 2, 0).unwrap();
    let b = tw.add(&a, &r).unwrap();
    let gamma = GroupElement::new(rat(1, 4), 1);
    let pair = Pair::new(b.clone(), gamma);
    let m = minimal_pair_among(&tw, &[b, a], &pair).unwrap();
    assert_eq!((m.index, m.degree, m.status), (1, 3, Status::Certified));
}

#[test]
fn transcendental_shift() {
    let tw = Tower::laurent(3, 1);
    let pair = Pair::new(tw.zero(), g(1, 2));
    let t = assoc_value_transcendental(&pair).unwrap();
    assert_eq!(t.gamma, GroupElement::new(rat(1, 2), -1));
    assert!(matches!(assoc_value_transcendental(&t), Err(Error::AlreadyTranscendental)));
    let (tw, a, f) = not_key_setup(3);
    let pa = Pair::new(a, g(1, 2));
    let pt = assoc_value_transcendental(&pa).unwrap();
    assert_eq!(j_invariant(&tw, &f, &pt).unwrap(), 1);
}

#[test]
fn f_adic() {
    let gp = poly_from_terms(3, &[&[(1, 1, 1)], &[], &[], &[(0, 1, 1)]]).unwrap();
    let f = poly_from_terms(3, &[&[], &[], &[(0, 1, 1)]]).unwrap();
    let parts = f_adic_expansion(&gp, &f).unwrap();
    let labels: Vec<_> = parts.iter().map(|p| p.label().to_string()).collect();
    assert_eq!(labels, vec!["t", "X"]);
    let parts = f_adic_expansion(&f, &f).unwrap();
    let labels: Vec<_> = parts.iter().map(|p| p.label().to_string()).collect();
    assert_eq!(labels, vec!["0", "1"]);
}

#[test]
fn augmentation_example() {
    let tw = Tower::laurent(3, 1);
    let pair = Pair::new(tw.zero(), g(1, 1));
    let x = PolyOverK::x(3);
    let aug = augment(&tw, &pair, &x, g(2, 1)).unwrap();
    let f = poly_from_terms(3, &[&[(3, 1, 1)], &[(1, 1, 1)], &[(0, 1, 1)]]).unwrap();
    assert_eq!(aug.eval(&tw, &f).unwrap(), g(3, 1));
    assert_eq!(aug.eval(&tw, &x).unwrap(), g(2, 1));
    let c = poly_from_terms(3, &[&[(2, 1, 1)]]).unwrap();
    assert_eq!(aug.eval(&tw, &c).unwrap(), g(2, 1));
    assert!(matches!(
        augment(&tw, &pair, &x, g(1, 1)),
        Err(Error::BetaNotLarger { .. })
    ));
}

#[test]
fn key_by_degree_one_pair() {
    let tw = Tower::laurent(3, 1);
    let pair = Pair::new(tw.zero(), g(1, 2));
    let x = PolyOverK::min_poly(&tw, &tw.zero()).unwrap();
    assert!(matches!(
        key_certificate(&tw, &x, &pair, &[]).unwrap(),
        KeyVerdict::KeyByMinimalPair { .. }
    ));
}

#[test]
fn abstract_key() {
    let tw = Tower::laurent(3, 1);
    let pair = Pair::new(tw.zero(), g(1, 2));
    let x = PolyOverK::linear(&tw.zero());
    let x2 = PolyOverK::from_roots(HahnSeries::one(3), vec![tw.zero(), tw.zero()]);
    assert!(matches!(
        abstract_key_check(&tw, &x2, &pair, std::slice::from_ref(&x)).unwrap(),
        AbstractKeyVerdict::Counterexample { .. }
    ));
    assert!(matches!(
        abstract_key_check(&tw, &x, &pair, &[]).unwrap(),
        AbstractKeyVerdict::NoCounterexample { checked: 0 }
    ));
}

#[test]
fn abstract_key_for_artin_schreier_polynomial() {
    let tw = Tower::perfect(3);
    let a = tw.as_root(&tw.t_pow(int(-1)), 0).unwrap();
    let q = PolyOverK::min_poly(&tw, &a).unwrap();
    let pair = Pair::new(a.clone(), g(0, 1));
    let s = a.series(&int(1));
    let mut fam = vec![PolyOverK::linear(&tw.zero())];
    for k in 1..=8 {
        let tr = HahnSeries::from_terms(3, s.terms()[..k].to_vec(), None);
        fam.push(PolyOverK::linear(&tw.exact(tr).unwrap()));
    }
    assert_eq!(delta_w(&tw, &q, &pair).unwrap(), Some(g(0, 1)));
    assert!(matches!(
        abstract_key_check(&tw, &q, &pair, &fam).unwrap(),
        AbstractKeyVerdict::NoCounterexample { .. }
    ));
}

fn puiseux(p: u32, terms: &[(i64, i64, i64)]) -> HahnSeries {
    HahnSeries::from_terms(
        p,
        terms.iter().map(|&(n, d, c)| (rat(n, d), Fq::from_i64(p, c))),
        None,
    )
}

fn arb_root() -> impl Strategy<Value = Vec<(i64, i64, i64)>> {
    prop::collection::vec((-3i64..6, 1i64..4, 1i64..5), 1..3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn oracles_agree_and_w_is_multiplicative(
        roots in prop::collection::vec(arb_root(), 1..4),
        other in prop::collection::vec(arb_root(), 1..3),
        a in arb_root(),
        gn in 0i64..8, gd in 1i64..4,
    ) {
        let p = 5;
        let tw = Tower::laurent(p, 1);
        let mk = |rs: &Vec<Vec<(i64, i64, i64)>>| {
            let els: Vec<Element> = rs.iter().map(|r| tw.exact(puiseux(p, r)).unwrap()).collect();
            PolyOverK::from_roots(HahnSeries::one(p), els)
        };
        let f = mk(&roots);
        let h = mk(&other);
        let pair = Pair::new(tw.exact(puiseux(p, &a)).unwrap(), g(gn, gd));
        let wr = w_eval_roots(&tw, &f, &pair).unwrap();
        prop_assert_eq!(&wr, &w_eval_taylor(&tw, &f, &pair).unwrap());
        let fh = f.mul(&h);
        prop_assert_eq!(
            w_eval_roots(&tw, &fh, &pair).unwrap(),
            wr + w_eval_roots(&tw, &h, &pair).unwrap()
        );
        prop_assert_eq!(
            j_invariant(&tw, &fh, &pair).unwrap(),
            j_invariant(&tw, &f, &pair).unwrap() + j_invariant(&tw, &h, &pair).unwrap()
        );
    }

    #[test]
    fn j_is_independent_of_the_pair_of_definition(
        roots in prop::collection::vec(arb_root(), 1..4),
        a in arb_root(),
        extra in (1i64..4, 1i64..3),
    ) {
        let p = 3;
        let tw = Tower::laurent(p, 1);
        let els: Vec<Element> = roots.iter().map(|r| tw.exact(puiseux(p, r)).unwrap()).collect();
        let f = PolyOverK::from_roots(HahnSeries::one(p), els);
        let gamma = g(1, 1);
        let a_el = tw.exact(puiseux(p, &a)).unwrap();
        let mut bt = a.clone();
        bt.push((extra.0 + 1, 1, extra.1));
        let b_el = tw.exact(puiseux(p, &bt)).unwrap();
        let pa = Pair::new(a_el, gamma.clone());
        let pb = Pair::new(b_el, gamma);
        prop_assume!(same_valuation(&tw, &pa, &pb).unwrap());
        prop_assert_eq!(j_invariant(&tw, &f, &pa).unwrap(), j_invariant(&tw, &f, &pb).unwrap());
        prop_assert_eq!(w_eval(&tw, &f, &pa).unwrap(), w_eval(&tw, &f, &pb).unwrap());
    }
}
