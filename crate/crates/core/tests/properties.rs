//! Property tests over random Puiseux towers, checked against independent
//! computations (defining equations, conjugate orbits, index arithmetic).

use proptest::prelude::*;

use valext::chains::{build_chain, verify_chain};
use valext::cli::fuzz::Puiseux;
use valext::coefficient_field::Fq;
use valext::defect_calculus::stability_check;
use valext::hahn_series::newton_slopes;
use valext::pairval::{key_certificate, Pair, PolyOverK, Status};
use valext::tower::Tower;
use valext::value_group::{int, GroupElement};

fn tame_dens(p: u32) -> Vec<i64> {
    [1i64, 2, 3, 4, 6].into_iter().filter(|d| d % p as i64 != 0).collect()
}

/// Nonzero Puiseux polynomial with exponents in `(lo, lo + 3]` and tame
/// denominators.
fn arb_puiseux(p: u32, lo: i64) -> impl Strategy<Value = Puiseux> {
    arb_terms(p, lo, tame_dens(p))
}

fn arb_terms(p: u32, lo: i64, dens: Vec<i64>) -> impl Strategy<Value = Puiseux> {
    prop::collection::vec(
        (prop::sample::select(dens), 1i64..=36, 1..p as i64),
        1..=3,
    )
    .prop_map(move |ts| {
        Puiseux::new(p, ts.into_iter().map(|(d, k, c)| (lo * d + (k * d + 11) / 12, d, c)))
    })
    .prop_filter("nonzero", |b| !b.terms.is_empty())
}

fn arb_prime() -> impl Strategy<Value = u32> {
    prop::sample::select(vec![3u32, 5, 7])
}

fn arb_tame() -> impl Strategy<Value = Puiseux> {
    arb_prime().prop_flat_map(|p| arb_puiseux(p, 0))
}

fn sorted(mut v: Vec<GroupElement>) -> Vec<GroupElement> {
    v.sort();
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn artin_schreier_roots_solve_their_equation(
        (u, branch) in arb_prime().prop_flat_map(|p| (arb_terms(p, 0, vec![1]), 0..p))
    ) {
        let p = u.p;
        let tw = Tower::laurent(p, 1);
        let ue = tw.exact(u.series()).unwrap();
        let y = tw.as_root(&ue, branch).unwrap();
        let bound = int(24);
        let ys = y.series(&bound);
        let residual = ys.pow_bounded(p, Some(&bound)).sub(&ys).sub(&u.series()).truncated(&bound);
        prop_assert!(residual.terms().is_empty(), "{}", residual);
        prop_assert_eq!(tw.ext_invariants(&y).deg, 1);
    }

    #[test]
    fn newton_slopes_match_conjugate_valuations(
        (b, s) in arb_prime().prop_flat_map(|p| (arb_puiseux(p, 0), arb_terms(p, 0, vec![1])))
    ) {
        let p = b.p;
        let tw = Tower::laurent(p, 1);
        let be = tw.exact(b.series()).unwrap();
        let se = tw.exact(s.series()).unwrap();
        let shifted = tw.sub(&be, &se).unwrap();
        if tw.val(shifted.value()).unwrap().is_infinity() {
            return Ok(());
        }
        let f = PolyOverK::min_poly(&tw, &shifted).unwrap();
        let slopes = newton_slopes(&f.coeffs_at(&int(48))).unwrap();
        let direct: Vec<_> = tw
            .conjugates(&be)
            .unwrap()
            .iter()
            .map(|c| tw.dist(c, &se).unwrap())
            .collect();
        prop_assert_eq!(slopes, sorted(direct));
    }

    #[test]
    fn tame_root_and_residue_extension_multiply(
        p in arb_prime(),
        n in prop::sample::select(vec![2u32, 3, 4]),
        c in 1i64..7,
    ) {
        prop_assume!(n % p != 0);
        let tw = Tower::laurent(p, 1);
        let r = tw.nth_root(&tw.t_pow(int(1)), n, 0).unwrap();
        let c = tw.constant(Fq::from_i64(p, 1 + c % (p as i64 - 1))).unwrap();
        let y = tw.as_root(&c, 0).unwrap();
        let b = tw.add(&r, &y).unwrap();
        let x = tw.ext_invariants(&b);
        prop_assert_eq!((x.deg, x.e, x.f, x.defect), (n as u64 * p as u64, n as u64, p as u64, 1));
    }

    #[test]
    fn chains_verify_and_descend(b in arb_tame()) {
        let tw = Tower::laurent(b.p, 1);
        let el = tw.exact(b.series()).unwrap().named("b");
        let chain = build_chain(&tw, &el).unwrap();
        let rep = verify_chain(&tw, &chain).unwrap();
        prop_assert_eq!(rep.status, Status::Certified);
        prop_assert_eq!(*chain.degrees.last().unwrap(), 1);
        for w in chain.degrees.windows(2) {
            prop_assert!(w[1] < w[0] && w[0] % w[1] == 0, "{:?}", chain.degrees);
        }
        for (link, check) in chain.links.iter().zip(&rep.links) {
            prop_assert!(check.dp.holds);
            prop_assert_eq!(&check.dp.gamma, &link.gamma);
            if let Some(d) = &link.delta {
                prop_assert_eq!(&d.achieved, &link.gamma);
            }
        }
        for w in chain.links.windows(2) {
            prop_assert!(w[1].gamma < w[0].gamma);
        }
    }

    #[test]
    fn stability_identity_case_is_defectless(a in arb_tame(), k in 1i64..12) {
        let tw = Tower::laurent(a.p, 1);
        let ae = tw.exact(a.series()).unwrap();
        let kras = tw.kras(&ae).unwrap().unwrap_or_else(GroupElement::zero);
        let gamma = &kras + &GroupElement::from_ints(k, 12);
        let q = PolyOverK::min_poly(&tw, &ae).unwrap();
        let pa = Pair::new(ae, gamma);
        let key = key_certificate(&tw, &q, &pa, &[]).unwrap();
        let s = stability_check(&tw, &pa, &pa, &q, &q, &key).unwrap();
        prop_assert_eq!(s.lhs, Some(s.rhs));
        prop_assert!(s.equal && s.defectless_certified);
    }
}
