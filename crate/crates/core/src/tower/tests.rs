use super::*;
use crate::value_group::{int, rat};

fn inv_t(tw: &Tower) -> Element {
    tw.t_pow(int(-1))
}

fn meta3(tw: &Tower, b: &Element) -> (u64, u64, u64, u64) {
    let x = tw.ext_invariants(b);
    (x.deg, x.e, x.f, x.defect)
}

#[test]
fn as_root_of_minus_t_is_the_geometric_sum() {
    let tw = Tower::laurent(2, 1);
    let u = tw.neg(&tw.t_pow(int(1))).unwrap();
    let a = tw.as_root(&u, 0).unwrap();
    let s = a.series(&int(40));
    let exps: Vec<_> = s.terms().iter().map(|(e, _)| e.clone()).collect();
    assert_eq!(exps, vec![int(1), int(2), int(4), int(8), int(16), int(32)]);
    assert_eq!(meta3(&tw, &a), (1, 1, 1, 1));
    assert_eq!(a.meta().deg_k, Some(2));
}

#[test]
fn as_root_of_inverse_t_over_perfect_base() {
    for p in [2u32, 3, 5] {
        let tw = Tower::perfect(p);
        let a = tw.as_root(&inv_t(&tw), 0).unwrap();
        assert_eq!(meta3(&tw, &a), (p as u64, 1, 1, p as u64));
        assert_eq!(tw.val(a.value()).unwrap(), GroupElement::from_ints(-1, p as i64));
        assert_eq!(tw.kras(&a).unwrap(), Some(GroupElement::zero()));
        let conj = tw.conjugates(&a).unwrap();
        assert_eq!(conj.len(), p as usize);
        for c in &conj[1..] {
            assert_eq!(tw.dist(&a, c).unwrap(), GroupElement::zero());
        }
    }
}

#[test]
fn as_root_defining_equation_residual() {
    let tw = Tower::laurent(3, 1);
    let u = tw
        .exact(HahnSeries::from_terms(
            3,
            vec![(int(-2), Fq::one(3)), (int(0), Fq::one(3)), (int(1), Fq::from_i64(3, 2))],
            None,
        ))
        .unwrap();
    let y = tw.as_root(&u, 1).unwrap();
    let bound = int(30);
    let ys = y.series(&bound);
    let lhs = ys.pow_bounded(3, Some(&bound)).sub(&ys).sub(u.as_exact().unwrap());
    assert!(lhs.terms().is_empty(), "{lhs}");
    assert_eq!(meta3(&tw, &y), (3, 3, 1, 1));
}

#[test]
fn as_root_of_zero_is_a_constant() {
    let tw = Tower::laurent(5, 1);
    let y = tw.as_root(&tw.zero(), 2).unwrap();
    assert_eq!(y.as_exact(), Some(&HahnSeries::constant(Fq::from_i64(5, 2))));
    assert_eq!(meta3(&tw, &y).0, 1);
}

#[test]
fn nth_roots() {
    let tw = Tower::laurent(3, 1);
    let r = tw.nth_root(&tw.t_pow(int(1)), 2, 0).unwrap();
    assert_eq!(meta3(&tw, &r), (2, 2, 1, 1));
    let one = tw.nth_root(&tw.int(1), 2, 0).unwrap();
    assert_eq!(meta3(&tw, &one).0, 1);
    let t = tw.nth_root(&tw.t_pow(int(2)), 2, 0).unwrap();
    assert_eq!(t.as_exact(), Some(&HahnSeries::t(3)));
    assert_eq!(meta3(&tw, &t).0, 1);
}

#[test]
fn kummer_root_of_a_unit() {
    let tw = Tower::laurent(5, 1);
    let u = tw
        .exact(HahnSeries::from_terms(5, vec![(int(0), Fq::one(5)), (int(1), Fq::one(5))], None))
        .unwrap();
    let y = tw.nth_root(&u, 2, 0).unwrap();
    assert_eq!(meta3(&tw, &y).0, 1);
    let bound = int(12);
    let s = y.series(&bound);
    let sq = s.mul_bounded(&s, Some(&bound));
    assert_eq!(sq.truncated(&bound).terms(), u.as_exact().unwrap().terms());
}

#[test]
fn sum_with_square_root_over_perfect_base() {
    let tw = Tower::perfect(3);
    let a = tw.as_root(&inv_t(&tw), 0).unwrap();
    let r = tw.nth_root(&tw.t_pow(int(1)), 2, 0).unwrap();
    let b = tw.add(&a, &r).unwrap();
    assert_eq!(meta3(&tw, &b), (6, 2, 1, 3));
    let conj = tw.conjugates(&b).unwrap();
    assert_eq!(conj.len(), 6);
    let mut ds: Vec<GroupElement> = conj.iter().map(|c| tw.dist(&b, c).unwrap()).collect();
    ds.sort();
    let z = GroupElement::zero();
    assert_eq!(
        ds,
        vec![z.clone(), z.clone(), z.clone(), z, GroupElement::from_ints(1, 2), GroupElement::Infinity]
    );
    assert_eq!(tw.kras(&b).unwrap(), Some(GroupElement::from_ints(1, 2)));
}

#[test]
fn rational_elements() {
    let tw = Tower::laurent(3, 1);
    let x = tw.t_pow(int(2));
    assert_eq!(tw.conjugates(&x).unwrap().len(), 1);
    assert_eq!(tw.kras(&x).unwrap(), None);
}

fn cdc(tw: &Tower) -> (Element, Element) {
    let t = tw.t_pow(int(1));
    let a = tw.as_root(&tw.neg(&t).unwrap(), 0).unwrap();
    let u = tw.sub(&tw.int(1), &a).unwrap();
    let b = tw.as_root(&u, 0).unwrap();
    (a, b)
}

#[test]
fn chain_example_metadata() {
    for p in [2u32, 3, 5] {
        let tw = Tower::laurent(p, 1);
        let (_, b) = cdc(&tw);
        let pp = p as u64;
        assert_eq!(meta3(&tw, &b), (pp, 1, pp, 1));
        assert_eq!(b.meta().deg_k, Some(pp * pp));
        let kt = tw.with_henselian(false);
        assert_eq!(kt.conjugates(&b).unwrap().len(), (pp * pp) as usize);
        assert_eq!(tw.conjugates(&b).unwrap().len(), pp as usize);
    }
}

#[test]
fn chain_example_approximation_distances() {
    for p in [2u32, 3, 5] {
        let tw = Tower::laurent(p, 1);
        let (_, b) = cdc(&tw);
        let mut u = HahnSeries::one(p);
        let mut e = int(1);
        for n in 0..=6u32 {
            u = u.sub(&HahnSeries::monomial(Fq::one(p), e.clone()));
            e *= BigInt::from(p);
            let bn = tw.as_root(&tw.exact(u.clone()).unwrap(), 0).unwrap();
            let expect = GroupElement::rational(BigRational::from_integer(BigInt::from(p).pow(n + 1)));
            assert_eq!(tw.dist(&b, &bn).unwrap(), expect, "p={p} n={n}");
        }
    }
}

#[test]
fn distance_cap_avoids_refinement() {
    let tw = Tower::laurent(2, 1);
    let (a, _) = cdc(&tw);
    let z = tw.zero();
    let cap = GroupElement::new(rat(1, 2), 1);
    assert_eq!(tw.dist_capped(&a, &z, &cap).unwrap(), cap);
    let cap = GroupElement::new(int(1), 1);
    assert_eq!(tw.dist_capped(&a, &z, &cap).unwrap(), GroupElement::rational(int(1)));
}

#[test]
fn descendants_are_listed_innermost_first() {
    let tw = Tower::laurent(3, 1);
    let (a, b) = cdc(&tw);
    let d = tw.descendants(&b);
    assert!(d.iter().any(|x| x.same(&a)));
}
