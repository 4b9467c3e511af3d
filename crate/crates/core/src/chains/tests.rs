use super::*;
use crate::value_group::{int, rat};

fn cdc(tw: &Tower) -> Element {
    let t = tw.t_pow(int(1));
    let a = tw.as_root(&tw.neg(&t).unwrap(), 0).unwrap();
    let u = tw.sub(&tw.int(1), &a).unwrap();
    tw.as_root(&u, 0).unwrap()
}

#[test]
fn chain_example_over_henselian_model() {
    for p in [2u32, 3, 5] {
        let tw = Tower::laurent(p, 1);
        let b = cdc(&tw);
        let fam = standard_family(&tw, &b, tw.cfg.depth);
        let d = delta_b(&tw, &b, &fam).unwrap();
        assert_eq!(d.achieved, GroupElement::zero());
        assert!(d.certified(), "{d:?}");
        assert!(d.upper_certificate.unwrap().starts_with("residue"));
        let chain = build_chain(&tw, &b).unwrap();
        assert_eq!(chain.degrees, vec![p as u64, 1]);
        assert_eq!(chain.labels[1], "0");
        let rep = verify_chain(&tw, &chain).unwrap();
        assert_eq!(rep.status, Status::Certified);
        assert!(is_distinguished_pair(&tw, &b, &tw.zero(), &fam).unwrap().holds);
    }
}

#[test]
fn chain_example_over_rational_provenance() {
    for p in [2u32, 3, 5] {
        let tw = Tower::rational(p, 1);
        let b = cdc(&tw);
        match build_chain(&tw, &b) {
            Err(Error::NoChain(msg)) => {
                assert!(msg.contains("unbounded"), "{msg}");
                assert!(msg.contains("non-henselian"), "{msg}");
            }
            other => panic!("{other:?}"),
        }
    }
}

#[test]
fn trivial_and_negative_chains() {
    let tw = Tower::laurent(5, 1);
    let x = tw.t_pow(int(3));
    let chain = build_chain(&tw, &x).unwrap();
    assert!(chain.is_empty());
    verify_chain(&tw, &chain).unwrap();
    assert!(matches!(delta_b(&tw, &x, &standard_family(&tw, &x, 4)), Err(Error::EmptyFamily)));

    let b = tw.t_pow(rat(1, 3));
    let a = tw.t_pow(rat(1, 2));
    let bad = Chain::from_elements(&tw, vec![b.clone(), a, tw.zero()]).unwrap();
    assert!(matches!(
        verify_chain(&tw, &bad),
        Err(Error::VerificationFailed { link: 0, .. })
    ));
    let fam = standard_family(&tw, &b, 4);
    let v = is_distinguished_pair(&tw, &b, &b, &fam).unwrap();
    assert!(!v.dp1 && !v.holds);
}

#[test]
fn tame_chain_is_certified() {
    let tw = Tower::laurent(3, 1);
    let b = tw
        .exact(HahnSeries::from_terms(
            3,
            vec![(rat(1, 2), Fq::one(3)), (rat(5, 4), Fq::one(3))],
            None,
        ))
        .unwrap();
    let chain = build_chain(&tw, &b).unwrap();
    assert_eq!(chain.degrees, vec![4, 2, 1]);
    assert_eq!(chain.links[0].gamma, GroupElement::from_ints(5, 4));
    let rep = verify_chain(&tw, &chain).unwrap();
    assert_eq!(rep.status, Status::Certified);
}

#[test]
fn perfect_base_artin_schreier_root() {
    let tw = Tower::perfect(3);
    let a = tw.as_root(&tw.t_pow(int(-1)), 0).unwrap();
    let shallow = standard_family(&tw, &a, 0);
    let v = is_distinguished_pair(&tw, &a, &tw.zero(), &shallow).unwrap();
    assert!(v.holds);
    assert_eq!(v.gamma, GroupElement::from_ints(-1, 3));
    assert_eq!(v.status, Status::FamilyChecked);
    let deep = standard_family(&tw, &a, 4);
    assert!(!is_distinguished_pair(&tw, &a, &tw.zero(), &deep).unwrap().holds);
    assert!(matches!(build_chain(&tw, &a), Err(Error::NoChain(_))));
}
