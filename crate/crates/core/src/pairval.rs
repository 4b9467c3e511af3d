//! The valuation `w = v_{a,gamma}` on K(X): evaluation, j- and delta-invariants,
//! initial forms, minimal pairs, augmentations and key certificates.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::coefficient_field::Fq;
use crate::error::{Error, Result};
use crate::hahn_series::HahnSeries;
use crate::tower::{Element, Recipe, Tower};
use crate::value_group::GroupElement;

/// Provenance of a verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Certified,
    FamilyChecked,
    Asserted,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Certified => "certified",
            Status::FamilyChecked => "family-checked",
            Status::Asserted => "asserted",
        })
    }
}

#[derive(Debug, Clone)]
pub struct Pair {
    pub a: Element,
    pub gamma: GroupElement,
    pub status: Status,
}

impl Pair {
    pub fn new(a: Element, gamma: GroupElement) -> Pair {
        Pair {
            a,
            gamma,
            status: Status::Asserted,
        }
    }
}

/// Polynomial over the base, in factored and/or coefficient form.
#[derive(Clone)]
pub struct PolyOverK {
    unit: HahnSeries,
    roots: Option<Vec<Element>>,
    coeffs: Option<Vec<HahnSeries>>,
    min_poly_of: Option<Element>,
    label: String,
}

impl fmt::Debug for PolyOverK {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

impl fmt::Display for PolyOverK {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

fn fmt_coeffs(c: &[HahnSeries]) -> String {
    let mut parts = Vec::new();
    for (i, s) in c.iter().enumerate().rev() {
        if s.is_exact_zero() {
            continue;
        }
        let x = match i {
            0 => String::new(),
            1 => "X".into(),
            _ => format!("X^{i}"),
        };
        let cs = s.to_string();
        parts.push(match (i, cs.as_str()) {
            (0, _) => cs,
            (_, "1") => x,
            _ if s.terms().len() == 1 => format!("{cs}*{x}"),
            _ => format!("({cs})*{x}"),
        });
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

impl PolyOverK {
    /// `unit * prod (X - z)`.
    pub fn from_roots(unit: HahnSeries, roots: Vec<Element>) -> PolyOverK {
        let coeffs = if unit.is_exact() && roots.iter().all(|r| r.as_exact().is_some()) {
            let mut c = vec![unit.clone()];
            for r in &roots {
                c = poly_mul(&c, &[r.as_exact().unwrap().neg(), HahnSeries::one(unit.p())]);
            }
            Some(c)
        } else {
            None
        };
        let label = match &coeffs {
            Some(c) => fmt_coeffs(c),
            None => {
                let rs: Vec<String> = roots.iter().map(|r| format!("(X - {r})")).collect();
                rs.join("")
            }
        };
        PolyOverK {
            unit,
            roots: Some(roots),
            coeffs,
            min_poly_of: None,
            label,
        }
    }

    /// Coefficient form, constant term first.
    pub fn from_coeffs(coeffs: Vec<HahnSeries>) -> Result<PolyOverK> {
        let mut coeffs = coeffs;
        while coeffs.len() > 1 && coeffs.last().unwrap().is_exact_zero() {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return Err(Error::InvalidArgument("empty coefficient list".into()));
        }
        if coeffs.iter().any(|c| !c.is_exact()) {
            return Err(Error::InvalidArgument("coefficients must be exact".into()));
        }
        let unit = coeffs.last().unwrap().clone();
        Ok(PolyOverK {
            label: fmt_coeffs(&coeffs),
            unit,
            roots: None,
            coeffs: Some(coeffs),
            min_poly_of: None,
        })
    }

    pub fn x(p: u32) -> PolyOverK {
        PolyOverK::from_coeffs(vec![HahnSeries::zero(p), HahnSeries::one(p)]).unwrap()
    }

    /// `X - z`.
    pub fn linear(z: &Element) -> PolyOverK {
        PolyOverK::from_roots(HahnSeries::one(z.p()), vec![z.clone()])
    }

    /// Minimal polynomial of `z` over the tower's base.
    pub fn min_poly(tw: &Tower, z: &Element) -> Result<PolyOverK> {
        let roots = tw.conjugates(z)?;
        let p = z.p();
        let mut poly = PolyOverK::from_roots(HahnSeries::one(p), roots);
        if poly.coeffs.is_none() {
            poly.coeffs = known_min_poly_coeffs(z, poly.degree());
            if let Some(c) = &poly.coeffs {
                poly.label = fmt_coeffs(c);
            }
        }
        poly.min_poly_of = Some(z.clone());
        Ok(poly)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> PolyOverK {
        self.label = label.into();
        self
    }

    pub fn degree(&self) -> usize {
        match (&self.roots, &self.coeffs) {
            (Some(r), _) => r.len(),
            (None, Some(c)) => c.len() - 1,
            (None, None) => unreachable!(),
        }
    }

    pub fn roots(&self) -> Option<&[Element]> {
        self.roots.as_deref()
    }

    pub fn coeffs(&self) -> Option<&[HahnSeries]> {
        self.coeffs.as_deref()
    }

    pub fn unit(&self) -> &HahnSeries {
        &self.unit
    }

    pub fn min_poly_of(&self) -> Option<&Element> {
        self.min_poly_of.as_ref()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn is_monic(&self) -> bool {
        self.unit == HahnSeries::one(self.unit.p())
    }

    pub fn scale(&self, c: &Fq) -> PolyOverK {
        let cs = HahnSeries::constant(c.clone());
        let coeffs = self
            .coeffs
            .as_ref()
            .map(|v| v.iter().map(|x| x.scale(c)).collect::<Vec<_>>());
        let label = match &coeffs {
            Some(v) => fmt_coeffs(v),
            None => format!("{c}*{}", self.label),
        };
        PolyOverK {
            unit: self.unit.mul(&cs),
            roots: self.roots.clone(),
            coeffs,
            min_poly_of: None,
            label,
        }
    }

    pub fn mul(&self, other: &PolyOverK) -> PolyOverK {
        let roots = match (&self.roots, &other.roots) {
            (Some(a), Some(b)) => Some(a.iter().chain(b).cloned().collect()),
            _ => None,
        };
        let coeffs = match (&self.coeffs, &other.coeffs) {
            (Some(a), Some(b)) => Some(poly_mul(a, b)),
            _ => None,
        };
        PolyOverK {
            unit: self.unit.mul(&other.unit),
            roots,
            coeffs,
            min_poly_of: None,
            label: format!("({})({})", self.label, other.label),
        }
    }

    /// Coefficients, expanded from the roots to the given precision when no
    /// exact coefficient form is known.
    pub fn coeffs_at(&self, bound: &BigRational) -> Vec<HahnSeries> {
        if let Some(c) = &self.coeffs {
            return c.clone();
        }
        let p = self.unit.p();
        let mut c = vec![self.unit.clone()];
        for r in self.roots.as_ref().unwrap() {
            let z = r.series(bound);
            let lin = [z.neg(), HahnSeries::one(p)];
            c = poly_mul_bounded(&c, &lin, Some(bound));
        }
        c
    }
}

/// Coefficients of `X^p - X - u`, `X^n - u` or `X - c` when the minimal
/// polynomial is a one-step defining equation over the base.
fn known_min_poly_coeffs(z: &Element, deg: usize) -> Option<Vec<HahnSeries>> {
    let p = z.p();
    match z.recipe() {
        Recipe::AsRoot { u, .. } => {
            let u = u.as_exact()?;
            if deg == p as usize {
                let mut c = vec![HahnSeries::zero(p); deg + 1];
                c[0] = u.neg();
                c[1] = HahnSeries::constant(Fq::from_i64(p, -1));
                c[deg] = HahnSeries::one(p);
                Some(c)
            } else {
                None
            }
        }
        Recipe::NthRoot { u, n, .. } => {
            let u = u.as_exact()?;
            (deg == *n as usize).then(|| {
                let mut c = vec![HahnSeries::zero(p); deg + 1];
                c[0] = u.neg();
                c[deg] = HahnSeries::one(p);
                c
            })
        }
        _ => None,
    }
}

pub fn poly_mul(a: &[HahnSeries], b: &[HahnSeries]) -> Vec<HahnSeries> {
    poly_mul_bounded(a, b, None)
}

fn poly_mul_bounded(a: &[HahnSeries], b: &[HahnSeries], cap: Option<&BigRational>) -> Vec<HahnSeries> {
    let p = a[0].p();
    let mut out = vec![HahnSeries::zero(p); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].add(&x.mul_bounded(y, cap));
        }
    }
    out
}

fn poly_sub(a: &[HahnSeries], b: &[HahnSeries]) -> Vec<HahnSeries> {
    let p = a[0].p();
    let n = a.len().max(b.len());
    let z = HahnSeries::zero(p);
    (0..n)
        .map(|i| a.get(i).unwrap_or(&z).sub(b.get(i).unwrap_or(&z)))
        .collect()
}

/// Division by a monic polynomial with exact coefficients.
fn poly_divrem(g: &[HahnSeries], f: &[HahnSeries]) -> (Vec<HahnSeries>, Vec<HahnSeries>) {
    let p = g[0].p();
    let df = f.len() - 1;
    let mut r = g.to_vec();
    if r.len() <= df {
        return (vec![HahnSeries::zero(p)], r);
    }
    let mut q = vec![HahnSeries::zero(p); r.len() - df];
    for k in (df..r.len()).rev() {
        let c = r[k].clone();
        if c.is_exact_zero() {
            continue;
        }
        q[k - df] = c.clone();
        for (i, fi) in f.iter().enumerate() {
            r[k - df + i] = r[k - df + i].sub(&c.mul(fi));
        }
    }
    r.truncate(df.max(1));
    (q, r)
}

// ----- evaluation -----

/// `v(unit) + sum_i min(v(a - z_i), gamma)`.
pub fn w_eval_roots(tw: &Tower, f: &PolyOverK, pair: &Pair) -> Result<GroupElement> {
    let roots = f
        .roots
        .as_ref()
        .ok_or_else(|| Error::InvalidArgument(format!("{} has no factored form", f.label)))?;
    let mut acc = f.unit.val()?;
    for z in roots {
        acc = acc + tw.dist_capped(&pair.a, z, &pair.gamma)?;
    }
    Ok(acc)
}

/// `min_i (v(c_i) + i gamma)` for the expansion `f = sum c_i (X - a)^i`.
pub fn w_eval_taylor(tw: &Tower, f: &PolyOverK, pair: &Pair) -> Result<GroupElement> {
    // w(f) <= v(lead) + deg gamma, so a first pass truncated just above that
    // usually certifies
    let first = match (f.unit.val(), pair.gamma.main()) {
        (Ok(GroupElement::Finite { main, .. }), Some(g)) => {
            Some(main + g * BigInt::from(f.degree() as u64) + BigInt::one())
        }
        _ => None,
    };
    w_eval_coeff_fn(tw, |b| f.coeffs_at(b), pair, first)
}

fn w_eval_coeff_fn(
    tw: &Tower,
    coeffs: impl Fn(&BigRational) -> Vec<HahnSeries>,
    pair: &Pair,
    first: Option<BigRational>,
) -> Result<GroupElement> {
    let mut last = None;
    let mut bounds = tw.bounds();
    if let Some(b) = first.filter(|b| b < &bounds[0]) {
        bounds.insert(0, b);
    }
    for bound in bounds {
        let bound = match pair.gamma.main() {
            Some(g) if &bound <= g => g + BigInt::from(8),
            _ => bound,
        };
        let c = coeffs(&bound);
        let a = pair.a.series(&bound);
        let taylor = taylor_coeffs(&c, &a, &bound);
        match certified_min(&taylor, &pair.gamma) {
            Ok(v) => return Ok(v),
            Err(Error::PrecisionLoss { hint, .. }) => last = Some(hint),
            Err(e) => return Err(e),
        }
    }
    Err(Error::precision(
        last.unwrap_or_else(BigRational::zero),
        "Taylor evaluation not certified",
    ))
}

/// Repeated synthetic division by `X - a`.
fn taylor_coeffs(c: &[HahnSeries], a: &HahnSeries, bound: &BigRational) -> Vec<HahnSeries> {
    let mut cur = c.to_vec();
    let mut out = Vec::with_capacity(c.len());
    while !cur.is_empty() {
        let n = cur.len();
        let mut q = vec![HahnSeries::zero(a.p()); n.saturating_sub(1)];
        let mut acc = cur[n - 1].clone();
        for k in (0..n - 1).rev() {
            q[k] = acc.clone();
            acc = cur[k].add(&acc.mul_bounded(a, Some(bound)));
        }
        out.push(acc);
        cur = q;
    }
    out
}

fn certified_min(taylor: &[HahnSeries], gamma: &GroupElement) -> Result<GroupElement> {
    let mut best: Option<GroupElement> = None;
    let mut pending: Vec<GroupElement> = Vec::new();
    for (i, c) in taylor.iter().enumerate() {
        let shift = gamma.scale(i as i64);
        if let Some((e, _)) = c.terms().first() {
            let v = GroupElement::rational(e.clone()) + shift;
            best = Some(match best {
                Some(b) if b <= v => b,
                _ => v,
            });
        } else if let Some(t) = c.tail() {
            pending.push(GroupElement::rational(t.clone()) + shift);
        }
    }
    match best {
        Some(b) if pending.iter().all(|l| l >= &b) => Ok(b),
        None if pending.is_empty() => Ok(GroupElement::Infinity),
        _ => {
            let hint = pending
                .iter()
                .filter_map(|g| g.main().cloned())
                .min()
                .unwrap_or_else(BigRational::zero);
            Err(Error::precision(hint, "Taylor coefficient below the minimum"))
        }
    }
}

/// Value of `f` under `w`, via roots when available.
pub fn w_eval(tw: &Tower, f: &PolyOverK, pair: &Pair) -> Result<GroupElement> {
    if f.roots.is_some() {
        w_eval_roots(tw, f, pair)
    } else {
        w_eval_taylor(tw, f, pair)
    }
}

/// Number of roots z (with multiplicity) with `v(a - z) >= gamma`.
pub fn j_invariant(tw: &Tower, f: &PolyOverK, pair: &Pair) -> Result<u64> {
    let roots = f
        .roots
        .as_ref()
        .ok_or_else(|| Error::InvalidArgument(format!("{} has no factored form", f.label)))?;
    let mut j = 0;
    for z in roots {
        if tw.dist_capped(&pair.a, z, &pair.gamma)? == pair.gamma {
            j += 1;
        }
    }
    Ok(j)
}

/// `max_z min(v(a - z), gamma)` over the roots; `None` for constants.
pub fn delta_w(tw: &Tower, f: &PolyOverK, pair: &Pair) -> Result<Option<GroupElement>> {
    let roots = f
        .roots
        .as_ref()
        .ok_or_else(|| Error::InvalidArgument(format!("{} has no factored form", f.label)))?;
    let mut best: Option<GroupElement> = None;
    for z in roots {
        let d = tw.dist_capped(&pair.a, z, &pair.gamma)?;
        best = Some(match best {
            Some(b) if b >= d => b,
            _ => d,
        });
    }
    Ok(best)
}

/// `w(f - g) > w(f) = w(g)`.
pub fn initial_forms_equal(tw: &Tower, f: &PolyOverK, g: &PolyOverK, pair: &Pair) -> Result<bool> {
    let wf = w_eval(tw, f, pair)?;
    let wg = w_eval(tw, g, pair)?;
    if wf != wg {
        return Ok(false);
    }
    let diff = w_eval_coeff_fn(tw, |b| poly_sub(&f.coeffs_at(b), &g.coeffs_at(b)), pair, None)?;
    Ok(diff > wf)
}

/// Both pairs define the same valuation.
pub fn same_valuation(tw: &Tower, p1: &Pair, p2: &Pair) -> Result<bool> {
    if p1.gamma != p2.gamma {
        return Ok(false);
    }
    Ok(tw.dist_capped(&p1.a, &p2.a, &p1.gamma)? == p1.gamma)
}

#[derive(Debug, Clone, Serialize)]
pub struct MinimalChoice {
    #[serde(skip)]
    pub element: Element,
    pub label: String,
    pub index: usize,
    pub degree: u64,
    pub status: Status,
    pub certificate: String,
}

/// A qualifying candidate of least degree; ties go to the earliest.
pub fn minimal_pair_among(tw: &Tower, candidates: &[Element], pair: &Pair) -> Result<MinimalChoice> {
    let mut best: Option<(usize, u64)> = None;
    for (i, z) in candidates.iter().enumerate() {
        let Ok(d) = tw.degree(z) else { continue };
        if best.is_some_and(|(_, bd)| bd <= d) {
            continue;
        }
        let zp = Pair::new(z.clone(), pair.gamma.clone());
        if same_valuation(tw, &zp, pair)? {
            best = Some((i, d));
        }
    }
    let (index, degree) = best.ok_or(Error::EmptyFamily)?;
    let element = candidates[index].clone();
    let (status, certificate) = minimal_certificate(tw, &element, &pair.gamma)?;
    Ok(MinimalChoice {
        label: element.label().to_string(),
        element,
        index,
        degree,
        status,
        certificate,
    })
}

/// Certificate that `(z, gamma)` is a minimal pair.
pub fn minimal_certificate(tw: &Tower, z: &Element, gamma: &GroupElement) -> Result<(Status, String)> {
    if tw.degree(z)? == 1 {
        return Ok((Status::Certified, "degree-one element".into()));
    }
    if tw.henselian {
        if let Some(k) = tw.kras(z)? {
            if gamma > &k {
                return Ok((
                    Status::Certified,
                    format!("Krasner: gamma {gamma} exceeds kras {k}, so K(z) lies in K(z') for every z' of the pair"),
                ));
            }
        }
    }
    Ok((Status::FamilyChecked, "least degree within the candidate family".into()))
}

pub fn assoc_value_transcendental(pair: &Pair) -> Result<Pair> {
    match &pair.gamma {
        GroupElement::Finite { main, eps: 0 } => Ok(Pair {
            a: pair.a.clone(),
            gamma: GroupElement::new(main.clone(), -1),
            status: pair.status,
        }),
        _ => Err(Error::AlreadyTranscendental),
    }
}

/// `g = sum g_i f^i` with `deg g_i < deg f`.
pub fn f_adic_expansion(g: &PolyOverK, f: &PolyOverK) -> Result<Vec<PolyOverK>> {
    let (gc, fc) = match (&g.coeffs, &f.coeffs) {
        (Some(a), Some(b)) => (a.clone(), b.clone()),
        _ => return Err(Error::InvalidArgument("f-adic expansion needs coefficient forms".into())),
    };
    if !f.is_monic() || fc.len() < 2 {
        return Err(Error::InvalidArgument("f must be monic of positive degree".into()));
    }
    let mut out = Vec::new();
    let mut cur = gc;
    loop {
        let (q, r) = poly_divrem(&cur, &fc);
        out.push(PolyOverK::from_coeffs(r)?);
        if q.iter().all(|c| c.is_exact_zero()) {
            break;
        }
        cur = q;
    }
    Ok(out)
}

/// The ordinary augmentation `[w; f, beta]`.
#[derive(Debug, Clone)]
pub struct Augmentation {
    pub pair: Pair,
    pub f: PolyOverK,
    pub beta: GroupElement,
    pub wf: GroupElement,
}

pub fn augment(tw: &Tower, pair: &Pair, f: &PolyOverK, beta: GroupElement) -> Result<Augmentation> {
    let wf = w_eval(tw, f, pair)?;
    if beta <= wf {
        return Err(Error::BetaNotLarger {
            beta: beta.to_string(),
            wf: wf.to_string(),
        });
    }
    Ok(Augmentation {
        pair: pair.clone(),
        f: f.clone(),
        beta,
        wf,
    })
}

impl Augmentation {
    /// `min_i (w(g_i) + i beta)`.
    pub fn eval(&self, tw: &Tower, g: &PolyOverK) -> Result<GroupElement> {
        let parts = f_adic_expansion(g, &self.f)?;
        let mut best = GroupElement::Infinity;
        for (i, gi) in parts.iter().enumerate() {
            let v = w_eval_taylor(tw, gi, &self.pair)? + self.beta.scale(i as i64);
            if v < best {
                best = v;
            }
        }
        Ok(best)
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum KeyVerdict {
    KeyByMinimalPair { certificate: String },
    NotKeyByInitialForm { witness: String },
    Unknown { annotation: Option<String> },
}

impl KeyVerdict {
    pub fn name(&self) -> &'static str {
        match self {
            KeyVerdict::KeyByMinimalPair { .. } => "KeyByMinimalPair",
            KeyVerdict::NotKeyByInitialForm { .. } => "NotKeyByInitialForm",
            KeyVerdict::Unknown { .. } => "Unknown",
        }
    }
}

/// Lower-degree search family `c * X^k` (`c` ranging over the nonzero
/// constants of the base) and `X - z` for the supplied elements.
pub fn key_search_family(tw: &Tower, f: &PolyOverK, extra: &[Element]) -> Result<Vec<PolyOverK>> {
    let p = tw.p();
    let units: Vec<Fq> = Fq::elements(p, tw.base.m0)?
        .into_iter()
        .filter(|c| !c.is_zero())
        .collect();
    let mut out = Vec::new();
    for k in 1..f.degree() {
        let mut c = vec![HahnSeries::zero(p); k + 1];
        c[k] = HahnSeries::one(p);
        let xk = PolyOverK::from_roots(HahnSeries::one(p), vec![tw.zero(); k]);
        for u in &units {
            let mut cu = c.clone();
            cu[k] = HahnSeries::constant(u.clone());
            let mut poly = xk.scale(u);
            poly.label = fmt_coeffs(&cu);
            out.push(poly);
        }
    }
    for z in extra {
        if tw.degree(z).ok() == Some(1) && f.degree() > 1 {
            out.push(PolyOverK::linear(z));
        }
    }
    Ok(out)
}

pub fn key_certificate(tw: &Tower, f: &PolyOverK, pair: &Pair, family: &[PolyOverK]) -> Result<KeyVerdict> {
    if let Some(z) = &f.min_poly_of {
        let zp = Pair::new(z.clone(), pair.gamma.clone());
        if same_valuation(tw, &zp, pair)? {
            let (status, cert) = minimal_certificate(tw, z, &pair.gamma)?;
            if status == Status::Certified {
                return Ok(KeyVerdict::KeyByMinimalPair {
                    certificate: format!("minimal polynomial of {z}; {cert}"),
                });
            }
        }
    }
    for g in family {
        if g.degree() >= f.degree() {
            continue;
        }
        if initial_forms_equal(tw, f, g, pair)? {
            return Ok(KeyVerdict::NotKeyByInitialForm {
                witness: g.label.clone(),
            });
        }
    }
    let annotation = (pair.gamma.eps() != 0).then(|| {
        "gamma is torsion-free modulo the value group; an external criterion rules f out \
         when deg f exceeds the minimal-pair degree (recorded, not proved here)"
            .to_string()
    });
    Ok(KeyVerdict::Unknown { annotation })
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum AbstractKeyVerdict {
    NoCounterexample { checked: usize },
    Counterexample { witness: String, delta_g: GroupElement, delta_f: GroupElement },
}

/// Looks for lower-degree `g` with `delta_w(g) >= delta_w(f)`.
pub fn abstract_key_check(
    tw: &Tower,
    f: &PolyOverK,
    pair: &Pair,
    family: &[PolyOverK],
) -> Result<AbstractKeyVerdict> {
    let df = delta_w(tw, f, pair)?.unwrap_or(GroupElement::Infinity);
    let mut checked = 0;
    for g in family {
        if g.degree() >= f.degree() {
            continue;
        }
        checked += 1;
        if let Some(dg) = delta_w(tw, g, pair)? {
            if dg >= df {
                return Ok(AbstractKeyVerdict::Counterexample {
                    witness: g.label.clone(),
                    delta_g: dg,
                    delta_f: df,
                });
            }
        }
    }
    Ok(AbstractKeyVerdict::NoCounterexample { checked })
}

/// Exact polynomial from integer-coefficient Laurent data, for tests and
/// scenarios: `terms[i]` lists `(numerator, denominator, coefficient)` of
/// the coefficient of `X^i`.
pub fn poly_from_terms(p: u32, terms: &[&[(i64, i64, i64)]]) -> Result<PolyOverK> {
    PolyOverK::from_coeffs(
        terms
            .iter()
            .map(|c| {
                HahnSeries::from_terms(
                    p,
                    c.iter().map(|&(n, d, k)| {
                        (BigRational::new(BigInt::from(n), BigInt::from(d)), Fq::from_i64(p, k))
                    }),
                    None,
                )
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests;
