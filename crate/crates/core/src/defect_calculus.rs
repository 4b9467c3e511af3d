//! Value-group and residue-field bookkeeping for `(K(X)|K, w)` and
//! `(K(b,X)|K(X), w)`, with `j(f)` standing in for the degree of the
//! henselized extension.

use serde::Serialize;

use crate::coefficient_field::ResidueFieldDesc;
use crate::error::{Error, Result};
use crate::pairval::{j_invariant, w_eval, KeyVerdict, Pair, PolyOverK, Status};
use crate::tower::{Element, Tower};
use crate::value_group::{order_mod, ratio, subgroup_index, GroupElement, ValueGroupDesc};
use num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtensionInvariants {
    pub value_group: ValueGroupDesc,
    pub residue_field: ResidueFieldDesc,
}

#[derive(Debug, Clone, Serialize)]
pub struct WkxInvariants {
    pub invariants: ExtensionInvariants,
    pub j_q: u64,
    /// `w(Q)` in the rational case.
    pub w_q: Option<GroupElement>,
    /// Order of `w(Q)` modulo `vK(a)` in the rational case.
    pub e: Option<u64>,
}

/// Invariants of `(K(X), w)` for `w = v_{a,gamma}` with `Q` the minimal
/// polynomial of `a`.
pub fn wkx_invariants(tw: &Tower, pair: &Pair, q: &PolyOverK, strict: bool) -> Result<WkxInvariants> {
    if strict && pair.status == Status::Asserted {
        return Err(Error::NotMinimalPair);
    }
    let vka = tw.value_group(&pair.a);
    let kav = tw.residue_field(&pair.a);
    let j_q = j_invariant(tw, q, pair)?;
    if pair.gamma.eps() != 0 {
        return Ok(WkxInvariants {
            invariants: ExtensionInvariants {
                value_group: vka.with_gamma(pair.gamma.clone(), j_q),
                residue_field: kav,
            },
            j_q,
            w_q: None,
            e: None,
        });
    }
    let wq = w_eval(tw, q, pair)?;
    let wq_r = wq
        .as_rational()
        .ok_or_else(|| Error::InvalidArgument("w(Q) is not rational".into()))?
        .clone();
    let e = order_mod(&wq, &vka);
    Ok(WkxInvariants {
        invariants: ExtensionInvariants {
            value_group: vka.join_rational(&wq_r),
            residue_field: ResidueFieldDesc {
                transcendental: true,
                ..kav
            },
        },
        j_q,
        w_q: Some(wq),
        e,
    })
}

/// Invariants of `(K(b,X), w)`: over `K(b)` the pair is `(b, gamma)` with
/// `Q = X - b`.
fn wkbx_invariants(tw: &Tower, b: &Element, gamma: &GroupElement) -> (ExtensionInvariants, Option<u64>) {
    let vkb = tw.value_group(b);
    let kbv = tw.residue_field(b);
    if gamma.eps() != 0 {
        (
            ExtensionInvariants {
                value_group: vkb.with_gamma(gamma.clone(), 1),
                residue_field: kbv,
            },
            None,
        )
    } else {
        let g = gamma.as_rational().unwrap();
        let e = order_mod(gamma, &vkb);
        (
            ExtensionInvariants {
                value_group: vkb.join_rational(g),
                residue_field: ResidueFieldDesc {
                    transcendental: true,
                    ..kbv
                },
            },
            e,
        )
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Hypotheses {
    pub b_defectless: bool,
    pub f_key: bool,
}

impl Hypotheses {
    pub fn any(&self) -> bool {
        self.b_defectless || self.f_key
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct StabilityReport {
    pub value_index: u64,
    pub residue_degree: Option<u64>,
    /// `(wK(b,X) : wK(X)) [K(b,X)w : K(X)w]`, when computable.
    pub lhs: Option<u64>,
    /// `j(Q) (vK(b) : vK(a)) [K(b)v : K(a)v]`.
    pub rhs: u64,
    pub j_q: u64,
    pub j_f: u64,
    pub equal: bool,
    pub hypotheses: Hypotheses,
    /// Neither hypothesis certified: the identity is reported but not claimed.
    pub hypothesis_unknown: bool,
    pub defectless_certified: bool,
    pub notes: Vec<String>,
}

pub fn stability_check(
    tw: &Tower,
    pair_b: &Pair,
    pair_a: &Pair,
    f: &PolyOverK,
    q: &PolyOverK,
    f_key: &KeyVerdict,
) -> Result<StabilityReport> {
    if pair_a.gamma != pair_b.gamma {
        return Err(Error::InvalidArgument("pairs with different gamma".into()));
    }
    let gamma = &pair_a.gamma;
    let (a, b) = (&pair_a.a, &pair_b.a);
    let wa = wkx_invariants(tw, pair_a, q, false)?;
    let (inv_b, e_b) = wkbx_invariants(tw, b, gamma);
    let mut notes = Vec::new();
    let value_index = subgroup_index(&inv_b.value_group, &wa.invariants.value_group)?;
    let res_ab = tw.residue_field(b).degree_over(&tw.residue_field(a))? as u64;
    let residue_degree = if gamma.eps() != 0 {
        Some(res_ab)
    } else {
        // the residue of g Q^e is a power of that of c (X - b)^{e_b} exactly
        // when no root of Q sits at distance gamma from b
        let mut exact_gamma = false;
        for z in q.roots().unwrap_or(&[]) {
            if tw.dist(b, z)? == *gamma {
                exact_gamma = true;
            }
        }
        let strict = tw.dist_capped(a, b, &GroupElement::Infinity)? > *gamma;
        match (wa.e, e_b) {
            (Some(ea), Some(eb)) if strict && !exact_gamma && (wa.j_q * ea) % eb == 0 => {
                Some(res_ab * wa.j_q * ea / eb)
            }
            _ => {
                notes.push(
                    "transcendental residue degree not determined: a root of Q lies at distance gamma from b"
                        .into(),
                );
                None
            }
        }
    };
    let lhs = residue_degree.map(|r| value_index * r);
    let vindex = subgroup_index(&tw.value_group(b), &tw.value_group(a))?;
    let rhs = wa.j_q * vindex * res_ab;
    let j_f = j_invariant(tw, f, pair_a)?;
    let hypotheses = Hypotheses {
        b_defectless: tw.ext_invariants(b).defect == 1,
        f_key: matches!(f_key, KeyVerdict::KeyByMinimalPair { .. }),
    };
    let mut equal = lhs == Some(rhs);
    if hypotheses.any() {
        equal = equal && lhs == Some(j_f);
    }
    let defectless_certified = tw.henselian && lhs == Some(j_f);
    if !hypotheses.any() {
        notes.push("neither (K(b)|K) defectless nor f key-certified: hypothesis unknown".into());
    }
    Ok(StabilityReport {
        value_index,
        residue_degree,
        lhs,
        rhs,
        j_q: wa.j_q,
        j_f,
        equal,
        hypothesis_unknown: !hypotheses.any(),
        hypotheses,
        defectless_certified,
        notes,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct DegreeRatioReport {
    pub lhs: u64,
    #[serde(serialize_with = "as_string")]
    pub rhs: BigRational,
    pub equal: bool,
    pub hypothesis_unknown: bool,
}

fn as_string<S: serde::Serializer>(q: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(q)
}

/// `(vK(b):vK(a)) [K(b)v:K(a)v]` against `deg f / deg Q`.
pub fn degree_ratio_check(
    tw: &Tower,
    b: &Element,
    a: &Element,
    f: &PolyOverK,
    q: &PolyOverK,
    f_key: &KeyVerdict,
) -> Result<DegreeRatioReport> {
    let vindex = subgroup_index(&tw.value_group(b), &tw.value_group(a))?;
    let res = tw.residue_field(b).degree_over(&tw.residue_field(a))? as u64;
    let lhs = vindex * res;
    let rhs = ratio(f.degree() as u64, q.degree() as u64);
    let hypothesis_unknown =
        !(tw.henselian && matches!(f_key, KeyVerdict::KeyByMinimalPair { .. }));
    Ok(DegreeRatioReport {
        equal: BigRational::from_integer(lhs.into()) == rhs,
        lhs,
        rhs,
        hypothesis_unknown,
    })
}

/// `[K(b):K] = e f` over the henselian base.
pub fn fundamental_equality_check(tw: &Tower, b: &Element) -> bool {
    let x = tw.ext_invariants(b);
    x.deg == x.e * x.f
}
