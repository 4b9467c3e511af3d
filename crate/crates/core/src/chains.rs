//! Distinguished pairs, `delta(b, K)` and complete distinguished chains over
//! a finite search family plus residue and Krasner certificates.

use std::collections::HashSet;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::coefficient_field::Fq;
use crate::error::{Error, Result};
use crate::hahn_series::HahnSeries;
use crate::pairval::{minimal_certificate, minimal_pair_among, MinimalChoice, Pair, Status};
use crate::tower::{Element, Recipe, Tower};
use crate::value_group::GroupElement;

/// Series of `b` with at least `n` certified terms when the schedule allows.
fn series_with_terms(tw: &Tower, b: &Element, n: usize) -> HahnSeries {
    let mut s = HahnSeries::zero(b.p());
    for bound in tw.bounds() {
        s = b.series(&bound);
        if s.is_exact() || s.terms().len() >= n {
            break;
        }
    }
    s
}

fn prefix(s: &HahnSeries, k: usize) -> HahnSeries {
    HahnSeries::from_terms(s.p(), s.terms()[..k].to_vec(), None)
}

/// Deterministic search family: truncations of `b` (with F_p shifts),
/// Artin-Schreier roots of truncated arguments, and the elements `b` was
/// built from.
pub fn standard_family(tw: &Tower, b: &Element, depth: usize) -> Vec<Element> {
    let p = tw.p();
    let mut out: Vec<Element> = Vec::new();
    let s = series_with_terms(tw, b, depth);
    for k in 0..=depth.min(s.terms().len()) {
        let tr = prefix(&s, k);
        for i in 0..p {
            let shifted = tr.add(&HahnSeries::constant(Fq::from_i64(p, i as i64)));
            if let Ok(e) = tw.exact(shifted) {
                out.push(e);
            }
        }
    }
    if let Recipe::AsRoot { u, .. } = b.recipe() {
        if u.as_exact().is_none() {
            let us = series_with_terms(tw, u, depth);
            for k in 1..=depth.min(us.terms().len()) {
                let Ok(ue) = tw.exact(prefix(&us, k)) else { continue };
                for j in 0..p {
                    if let Ok(y) = tw.as_root(&ue, j) {
                        out.push(y);
                    }
                }
            }
        }
    }
    out.extend(tw.descendants(b));
    let mut seen = HashSet::new();
    out.retain(|e| seen.insert(e.key().to_string()));
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct DeltaB {
    /// Largest distance to a lower-degree family member.
    pub achieved: GroupElement,
    pub witness: String,
    #[serde(skip)]
    pub witness_index: usize,
    /// Bound valid for every lower-degree element, when certified.
    pub upper: Option<GroupElement>,
    pub upper_certificate: Option<String>,
    /// Lower-degree members whose distance could not be certified.
    pub skipped: usize,
}

impl DeltaB {
    pub fn certified(&self) -> bool {
        self.upper.as_ref() == Some(&self.achieved)
    }
}

/// Residue and Krasner bounds on `v(b - z)` for `[K(z):K] < [K(b):K]`.
pub fn delta_upper(tw: &Tower, b: &Element) -> Result<Option<(GroupElement, String)>> {
    if !tw.henselian {
        return Ok(None);
    }
    let deg = tw.degree(b)?;
    let mut best: Option<(GroupElement, String)> = None;
    if tw.val(b.value())? >= GroupElement::zero() {
        let c = b.series(&BigRational::one()).coeff(&BigRational::zero())?;
        let rd = c.degree_over(tw.base.m0) as u64;
        if rd >= deg {
            best = Some((
                GroupElement::zero(),
                format!("residue obstruction: residue generates a degree-{rd} extension, so v(b - z) > 0 forces deg z >= {rd}"),
            ));
        }
    }
    if let Ok(Some(k)) = tw.kras(b) {
        if best.as_ref().is_none_or(|(u, _)| &k < u) {
            best = Some((k.clone(), format!("Krasner: v(b - z) > kras(b) = {k} forces K(b) in K(z)")));
        }
    }
    Ok(best)
}

pub fn delta_b(tw: &Tower, b: &Element, family: &[Element]) -> Result<DeltaB> {
    let deg = tw.degree(b)?;
    let mut best: Option<(GroupElement, u64, usize)> = None;
    let mut skipped = 0;
    let mut lower = 0;
    for (i, z) in family.iter().enumerate() {
        let Ok(dz) = tw.degree(z) else { continue };
        if dz >= deg {
            continue;
        }
        lower += 1;
        let d = match tw.dist(b, z) {
            Ok(d) => d,
            Err(e) if e.is_precision_loss() => {
                skipped += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        let better = match &best {
            None => true,
            Some((bd, bdeg, _)) => d > *bd || (d == *bd && dz < *bdeg),
        };
        if better {
            best = Some((d, dz, i));
        }
    }
    if lower == 0 {
        return Err(Error::EmptyFamily);
    }
    let (achieved, _, idx) = best.ok_or_else(|| {
        Error::precision(BigRational::zero(), "no lower-degree distance certified")
    })?;
    let upper = delta_upper(tw, b)?;
    Ok(DeltaB {
        achieved,
        witness: family[idx].label().to_string(),
        witness_index: idx,
        upper: upper.as_ref().map(|u| u.0.clone()),
        upper_certificate: upper.map(|u| u.1),
        skipped,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct DpVerdict {
    pub gamma: GroupElement,
    pub dp1: bool,
    pub dp2: bool,
    pub dp2_status: Status,
    pub dp3: bool,
    pub dp3_status: Status,
    pub holds: bool,
    pub status: Status,
    pub violations: Vec<String>,
}

pub fn is_distinguished_pair(tw: &Tower, b: &Element, a: &Element, family: &[Element]) -> Result<DpVerdict> {
    let db = tw.degree(b)?;
    let da = tw.degree(a)?;
    let gamma = tw.dist(b, a)?;
    let dp1 = db > da;
    let mut violations = Vec::new();
    if !dp1 {
        violations.push(format!("DP1: deg b = {db} is not larger than deg a = {da}"));
    }
    let mut dp2 = true;
    let mut dp3 = true;
    for z in family {
        let Ok(dz) = tw.degree(z) else { continue };
        if dz >= db {
            continue;
        }
        let d = match tw.dist(b, z) {
            Ok(d) => d,
            Err(e) if e.is_precision_loss() => continue,
            Err(e) => return Err(e),
        };
        if d > gamma {
            dp2 = false;
            violations.push(format!("DP2: v(b - {z}) = {d} exceeds {gamma}"));
        } else if d == gamma && dz < da {
            dp3 = false;
            violations.push(format!("DP3: {z} of degree {dz} also attains {gamma}"));
        }
    }
    let upper = delta_upper(tw, b)?;
    let dp2_status = match &upper {
        Some((u, _)) if dp2 && u <= &gamma => Status::Certified,
        _ => Status::FamilyChecked,
    };
    // (a, gamma) certified minimal bounds the degree of every z at distance gamma
    let dp3_status = if da == 1 || minimal_certificate(tw, a, &gamma)?.0 == Status::Certified {
        Status::Certified
    } else {
        Status::FamilyChecked
    };
    let holds = dp1 && dp2 && dp3;
    Ok(DpVerdict {
        gamma,
        dp1,
        dp2,
        dp2_status,
        dp3,
        dp3_status,
        holds,
        status: dp2_status.max(dp3_status),
        violations,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct Link {
    pub from: String,
    pub to: String,
    pub gamma: GroupElement,
    pub delta: Option<DeltaB>,
    pub dp: Option<DpVerdict>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Chain {
    #[serde(skip)]
    pub elements: Vec<Element>,
    pub labels: Vec<String>,
    pub degrees: Vec<u64>,
    pub links: Vec<Link>,
}

impl Chain {
    /// A chain from given elements, without verdicts.
    pub fn from_elements(tw: &Tower, elements: Vec<Element>) -> Result<Chain> {
        let mut links = Vec::new();
        for w in elements.windows(2) {
            links.push(Link {
                from: w[0].label().to_string(),
                to: w[1].label().to_string(),
                gamma: tw.dist(&w[0], &w[1])?,
                delta: None,
                dp: None,
            });
        }
        Ok(Chain {
            labels: elements.iter().map(|e| e.label().to_string()).collect(),
            degrees: elements.iter().map(|e| tw.degree(e)).collect::<Result<_>>()?,
            elements,
            links,
        })
    }

    pub fn len(&self) -> usize {
        self.links.len()
    }

    pub fn is_empty(&self) -> bool {
        self.links.is_empty()
    }
}

const MAX_LINKS: usize = 16;

/// Greedy descent through best approximants of minimal degree.
pub fn build_chain(tw: &Tower, b: &Element) -> Result<Chain> {
    let depth = tw.cfg.depth;
    let mut elements = vec![b.clone()];
    let mut links = Vec::new();
    let mut cur = b.clone();
    while tw.degree(&cur)? > 1 {
        if links.len() >= MAX_LINKS {
            return Err(Error::NoChain("chain length cap reached".into()));
        }
        let family = standard_family(tw, &cur, depth);
        let delta = delta_b(tw, &cur, &family)?;
        if !delta.certified() {
            if let Some(diag) = unbounded_diagnostic(tw, &cur, depth)? {
                return Err(Error::NoChain(diag));
            }
        }
        let a = family[delta.witness_index].clone();
        let dp = is_distinguished_pair(tw, &cur, &a, &family)?;
        links.push(Link {
            from: cur.label().to_string(),
            to: a.label().to_string(),
            gamma: dp.gamma.clone(),
            delta: Some(delta),
            dp: Some(dp),
        });
        elements.push(a.clone());
        cur = a;
    }
    Ok(Chain {
        labels: elements.iter().map(|e| e.label().to_string()).collect(),
        degrees: elements.iter().map(|e| tw.degree(e)).collect::<Result<_>>()?,
        elements,
        links,
    })
}

/// Reports distances that keep growing with the family depth.
fn unbounded_diagnostic(tw: &Tower, b: &Element, depth: usize) -> Result<Option<String>> {
    if depth < 2 {
        return Ok(None);
    }
    let mut seq = Vec::new();
    for d in depth - 2..=depth {
        let fam = standard_family(tw, b, d);
        seq.push(delta_b(tw, b, &fam)?.achieved);
    }
    if !seq.windows(2).all(|w| w[0] < w[1]) {
        return Ok(None);
    }
    let inv = tw.ext_invariants(b);
    let mut why = Vec::new();
    if !tw.henselian {
        why.push("non-henselian provenance".to_string());
    }
    if inv.defect > 1 {
        why.push(format!("defect {}", inv.defect));
    }
    let shown: Vec<String> = seq.iter().map(|g| g.to_string()).collect();
    let mut msg = format!(
        "approximation distances unbounded in family depth: {} at depths {}..={}",
        shown.join(", "),
        depth - 2,
        depth
    );
    if !why.is_empty() {
        msg.push_str(&format!(" ({})", why.join(", ")));
    }
    Ok(Some(msg))
}

#[derive(Debug, Clone, Serialize)]
pub struct LinkCheck {
    pub link: usize,
    pub divides: bool,
    pub dp: DpVerdict,
    pub minimal_pair: MinimalChoice,
}

#[derive(Debug, Clone, Serialize)]
pub struct ChainReport {
    pub labels: Vec<String>,
    pub degrees: Vec<u64>,
    pub links: Vec<LinkCheck>,
    pub status: Status,
}

pub fn verify_chain(tw: &Tower, chain: &Chain) -> Result<ChainReport> {
    let depth = tw.cfg.depth;
    let els = &chain.elements;
    let mut checks = Vec::new();
    for (i, w) in els.windows(2).enumerate() {
        let (b, a) = (&w[0], &w[1]);
        let (db, da) = (tw.degree(b)?, tw.degree(a)?);
        if db % da != 0 {
            return Err(Error::VerificationFailed {
                link: i,
                reason: format!("degree {da} does not divide {db}"),
            });
        }
        let mut family = standard_family(tw, b, depth);
        if !family.iter().any(|z| z.same(a)) {
            family.push(a.clone());
        }
        let dp = is_distinguished_pair(tw, b, a, &family)?;
        if !dp.holds {
            return Err(Error::VerificationFailed {
                link: i,
                reason: dp.violations.join("; "),
            });
        }
        let pair = Pair::new(b.clone(), dp.gamma.clone());
        let mp = minimal_pair_among(tw, &family, &pair)?;
        if mp.degree != da {
            return Err(Error::VerificationFailed {
                link: i,
                reason: format!(
                    "minimal pair for v_(b, {}) has degree {} rather than {da}",
                    dp.gamma, mp.degree
                ),
            });
        }
        checks.push(LinkCheck {
            link: i,
            divides: true,
            dp,
            minimal_pair: mp,
        });
    }
    if let Some(last) = els.last() {
        if tw.degree(last)? != 1 {
            return Err(Error::VerificationFailed {
                link: els.len().saturating_sub(1),
                reason: "final element is not in the base".into(),
            });
        }
    }
    let status = checks
        .iter()
        .map(|c| c.dp.status.max(c.minimal_pair.status))
        .max()
        .unwrap_or(Status::Certified);
    Ok(ChainReport {
        labels: chain.labels.clone(),
        degrees: chain.degrees.clone(),
        links: checks,
        status,
    })
}

#[cfg(test)]
mod tests;
