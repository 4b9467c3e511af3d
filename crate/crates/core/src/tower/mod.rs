//! Elements of the algebraic closure of the base field, built as explicit
//! towers, with expansions, conjugates and degree bookkeeping.
//!
//! Two base models share one element representation:
//! * `F_q((t))`, the completion (and henselization stand-in) of `F_q(t)`;
//!   a `Tower` over it is either henselian or carries `F_q(t)` provenance,
//!   in which case degrees are taken over the rational function field.
//! * the henselized perfect hull of `F_p(t)`, with exponents in `Z[1/p]`.

mod orbit;
pub mod value;

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::coefficient_field::{
    as_residue_solve, nth_root_coeff, root_of_unity, Fq, ResidueFieldDesc,
};
use crate::error::{Error, Result};
use crate::hahn_series::HahnSeries;
use crate::value_group::{GroupElement, ValueGroupDesc};

use orbit::exact_orbit;
pub use value::{Atom, Value};
use value::{vp, AtomKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Exponents {
    /// Value group Z: the `F_q((t))` model.
    Integers,
    /// Value group Z[1/p]: the perfect-hull model.
    PDivisible,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BaseField {
    pub p: u32,
    pub m0: u32,
    pub exponents: Exponents,
}

impl BaseField {
    pub fn perfect(&self) -> bool {
        self.exponents == Exponents::PDivisible
    }

    pub fn value_group(&self) -> ValueGroupDesc {
        match self.exponents {
            Exponents::Integers => ValueGroupDesc::integers(self.p),
            Exponents::PDivisible => ValueGroupDesc::p_integers(self.p),
        }
    }

    pub fn residue_field(&self) -> ResidueFieldDesc {
        ResidueFieldDesc {
            p: self.p,
            m: self.m0,
            transcendental: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PrecisionConfig {
    /// Truncation depth of search families.
    pub depth: usize,
    /// Number of precision refinements before giving up.
    pub retries: u32,
}

impl Default for PrecisionConfig {
    fn default() -> Self {
        PrecisionConfig {
            depth: 8,
            retries: 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Tower {
    pub base: BaseField,
    /// Degrees and conjugates are taken over the henselian model; otherwise
    /// over `F_q(t)` itself.
    pub henselian: bool,
    pub cfg: PrecisionConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Meta {
    /// Degree over the henselian base.
    pub deg_h: u64,
    /// Degree over `F_q(t)`, when known.
    pub deg_k: Option<u64>,
    pub e: u64,
    pub f: u64,
}

#[derive(Clone)]
pub enum Recipe {
    Exact,
    AsRoot { u: Element, branch: u32 },
    NthRoot { u: Element, n: u32, branch: u32 },
    Sum(Element, Element),
    Prod(Element, Element),
}

#[derive(Clone)]
pub struct Element(Arc<Node>);

struct Node {
    recipe: Recipe,
    value: Value,
    meta: Meta,
    depth: u32,
    label: String,
    key: String,
}

impl Element {
    fn build(recipe: Recipe, value: Value, meta: Meta, depth: u32, label: String) -> Element {
        let key = value.key();
        Element(Arc::new(Node {
            recipe,
            value,
            meta,
            depth,
            label,
            key,
        }))
    }

    pub fn value(&self) -> &Value {
        &self.0.value
    }

    pub fn meta(&self) -> Meta {
        self.0.meta
    }

    pub fn depth(&self) -> u32 {
        self.0.depth
    }

    pub fn recipe(&self) -> &Recipe {
        &self.0.recipe
    }

    pub fn label(&self) -> &str {
        &self.0.label
    }

    /// Identity key: equal keys mean equal elements.
    pub fn key(&self) -> &str {
        &self.0.key
    }

    pub fn p(&self) -> u32 {
        self.0.value.p()
    }

    pub fn as_exact(&self) -> Option<&HahnSeries> {
        self.0.value.as_exact()
    }

    pub fn series(&self, bound: &BigRational) -> HahnSeries {
        self.0.value.series(bound)
    }

    pub fn same(&self, other: &Element) -> bool {
        self.key() == other.key()
    }

    /// Copy with a new label.
    pub fn named(&self, label: impl Into<String>) -> Element {
        Element::build(
            self.0.recipe.clone(),
            self.0.value.clone(),
            self.0.meta,
            self.0.depth,
            label.into(),
        )
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ExtInvariants {
    pub deg: u64,
    pub e: u64,
    pub f: u64,
    pub defect: u64,
}

fn zero_q() -> BigRational {
    BigRational::zero()
}

impl Tower {
    /// `F_q((t))` with `q = p^m0`.
    pub fn laurent(p: u32, m0: u32) -> Tower {
        Tower {
            base: BaseField {
                p,
                m0,
                exponents: Exponents::Integers,
            },
            henselian: true,
            cfg: PrecisionConfig::default(),
        }
    }

    /// `F_q(t)` with the t-adic valuation; degrees over the rational field.
    pub fn rational(p: u32, m0: u32) -> Tower {
        Tower {
            henselian: false,
            ..Tower::laurent(p, m0)
        }
    }

    /// Henselization of the perfect hull of `F_p(t)`.
    pub fn perfect(p: u32) -> Tower {
        Tower {
            base: BaseField {
                p,
                m0: 1,
                exponents: Exponents::PDivisible,
            },
            henselian: true,
            cfg: PrecisionConfig::default(),
        }
    }

    pub fn with_config(mut self, cfg: PrecisionConfig) -> Tower {
        self.cfg = cfg;
        self
    }

    /// The same base viewed with the other provenance.
    pub fn with_henselian(&self, henselian: bool) -> Tower {
        assert!(henselian || !self.base.perfect(), "the perfect base is henselian");
        Tower {
            henselian,
            ..self.clone()
        }
    }

    pub fn p(&self) -> u32 {
        self.base.p
    }

    /// Refinement schedule for truncation bounds.
    pub fn bounds(&self) -> Vec<BigRational> {
        let mut b = BigRational::from_integer(BigInt::from(8));
        let mut out = vec![b.clone()];
        for _ in 0..self.cfg.retries {
            b *= BigInt::from(16);
            out.push(b.clone());
        }
        out
    }

    // ----- constructors -----

    pub fn exact(&self, s: HahnSeries) -> Result<Element> {
        let label = s.to_string();
        self.exact_labeled(s, label)
    }

    fn exact_labeled(&self, s: HahnSeries, label: String) -> Result<Element> {
        if s.p() != self.p() {
            return Err(Error::InvalidArgument("series over a different prime".into()));
        }
        if !s.is_exact() {
            return Err(Error::InvalidArgument("exact element needs an exact series".into()));
        }
        let meta = self.exact_meta(&s)?;
        Ok(Element::build(Recipe::Exact, Value::exact(s), meta, 0, label))
    }

    pub fn constant(&self, c: Fq) -> Result<Element> {
        self.exact(HahnSeries::constant(c))
    }

    pub fn int(&self, n: i64) -> Element {
        self.constant(Fq::from_i64(self.p(), n)).expect("prime field constant")
    }

    pub fn zero(&self) -> Element {
        self.int(0)
    }

    /// `c t^e`.
    pub fn monomial(&self, c: Fq, e: BigRational) -> Result<Element> {
        self.exact(HahnSeries::monomial(c, e))
    }

    pub fn t_pow(&self, e: BigRational) -> Element {
        self.monomial(Fq::one(self.p()), e).expect("monomial")
    }

    fn exact_meta(&self, s: &HahnSeries) -> Result<Meta> {
        let o = exact_orbit(s, self.base.m0, self.base.perfect())?;
        Ok(Meta {
            deg_h: o.degree(),
            deg_k: Some(o.degree()),
            e: o.e(),
            f: o.f(),
        })
    }

    /// Root `y` of `y^p - y = u`, branch `y + i`.
    pub fn as_root(&self, u: &Element, branch: u32) -> Result<Element> {
        let p = self.p();
        let m0 = self.base.m0;
        let one = BigRational::one();
        let s = u.value().series(&one);
        if s.tail().is_some_and(|t| t <= &zero_q()) {
            return Err(Error::UnsupportedTower(
                "Artin-Schreier argument with an accumulating principal part".into(),
            ));
        }
        let u_minus = s.exact_part_below(&zero_q())?;
        let u0 = s.coeff(&zero_q())?;
        let w = u
            .value()
            .sub(&Value::exact(u_minus.add(&HahnSeries::constant(u0.clone()))));
        let (corr, principal) = canonical_principal(&u_minus, m0.lcm(&u_minus.coefficient_degree()))?;
        let mut y = Value::exact(corr);
        for (a, c) in &principal {
            let atom = Atom::new(AtomKind::Principal {
                c: c.clone(),
                a: a.clone(),
            });
            y = y.add(&Value::atom(atom));
        }
        let (beta, d) = as_residue_solve(&u0, m0)?;
        let shift = beta.add(&Fq::from_i64(p, branch as i64));
        y = y.add(&Value::exact(HahnSeries::constant(shift)));
        if !w.is_zero() {
            let lower = w
                .series(&one)
                .lower_bound()
                .unwrap_or_else(|| one.clone());
            if lower <= zero_q() {
                return Err(Error::precision(lower, "positive part of Artin-Schreier argument"));
            }
            y = y.add(&Value::atom(Atom::new(AtomKind::AsConvergent { w, lower })));
        }
        let label = if branch == 0 {
            format!("AS({})", u.label())
        } else {
            format!("AS({})+{branch}", u.label())
        };
        let recipe = Recipe::AsRoot {
            u: u.clone(),
            branch,
        };
        if let Some(ex) = y.as_exact() {
            let meta = self.exact_meta(ex)?;
            return Ok(Element::build(recipe, y, meta, 0, label));
        }
        let um = u.meta();
        if um.deg_h != 1 {
            return Err(Error::UnsupportedTower(format!(
                "Artin-Schreier root over a proper extension (argument of degree {})",
                um.deg_h
            )));
        }
        let ramified = !principal.is_empty();
        let (deg_h, e, f) = match (self.base.perfect(), ramified, d > 1) {
            (false, true, _) => (p as u64, p as u64, 1),
            (true, true, false) => (p as u64, 1, 1),
            (true, true, true) => {
                return Err(Error::UnsupportedTower(
                    "perfect-base Artin-Schreier root with both a principal part and a residue step"
                        .into(),
                ))
            }
            (_, false, true) => (p as u64, 1, p as u64),
            (_, false, false) => (1, 1, 1),
        };
        let deg_k = if self.base.perfect() {
            Some(deg_h)
        } else if let Some(ex) = u.as_exact() {
            Some(if laurent_as_trivial(ex, m0) { 1 } else { p as u64 })
        } else if deg_h == p as u64 {
            um.deg_k.map(|k| k * p as u64)
        } else {
            None
        };
        let meta = Meta { deg_h, deg_k, e, f };
        Ok(Element::build(recipe, y, meta, u.depth() + 1, label))
    }

    /// Root `y` of `y^n = u`; branch `k` multiplies the principal root by
    /// `zeta_n^k`.
    pub fn nth_root(&self, u: &Element, n: u32, branch: u32) -> Result<Element> {
        let p = self.p();
        if n == 0 {
            return Err(Error::InvalidArgument("zeroth root".into()));
        }
        let mut n1 = n;
        let mut s_p = 0u32;
        while n1.is_multiple_of(p) {
            n1 /= p;
            s_p += 1;
        }
        let label = if branch == 0 {
            format!("root{n}({})", u.label())
        } else {
            format!("root{n}[{branch}]({})", u.label())
        };
        let recipe = Recipe::NthRoot {
            u: u.clone(),
            n,
            branch,
        };
        let mut base = u.value().clone();
        if s_p > 0 {
            let ex = u.as_exact().ok_or_else(|| {
                Error::UnsupportedTower("p-th roots need an exact radicand".into())
            })?;
            let mut ex = ex.clone();
            for _ in 0..s_p {
                ex = ex.inv_frobenius();
            }
            base = Value::exact(ex);
        }
        if base.is_zero() {
            return Ok(Element::build(recipe, base, self.exact_meta(&HahnSeries::zero(p))?, 0, label));
        }
        let y = if n1 == 1 {
            base
        } else {
            let (v, c) = self.leading_term(&base)?;
            let (lambda, _) = nth_root_coeff(&c, n1, self.base.m0)?;
            let zeta = root_of_unity(p, n1)?;
            let factor = zeta.pow(branch as i64).mul(&lambda);
            let mono = HahnSeries::monomial(factor, &v / BigInt::from(n1));
            let cinv = c.inv().expect("leading coefficient");
            let r = base
                .mul_exact(&HahnSeries::monomial(cinv, -v.clone()))
                .sub(&Value::exact(HahnSeries::one(p)));
            if r.is_zero() {
                Value::exact(mono)
            } else {
                let lower = r
                    .series(&BigRational::one())
                    .lower_bound()
                    .unwrap_or_else(BigRational::one);
                if lower <= zero_q() {
                    return Err(Error::precision(lower, "Kummer radicand correction"));
                }
                let atom = Atom::new(AtomKind::Kummer { r, n: n1, lower });
                Value::exact(mono.clone()).add(&Value::atom(atom).mul_exact(&mono))
            }
        };
        if let Some(ex) = y.as_exact() {
            let meta = self.exact_meta(ex)?;
            return Ok(Element::build(recipe, y, meta, 0, label));
        }
        let um = u.meta();
        if um.deg_h != 1 || (s_p > 0 && !self.base.perfect()) {
            return Err(Error::UnsupportedTower(
                "radical of an element outside the base".into(),
            ));
        }
        let mono = y.exact_part().clone();
        let o = exact_orbit(&mono, self.base.m0, self.base.perfect())?;
        let deg_h = o.degree();
        let deg_k = (self.base.perfect()
            || deg_h == n1 as u64 && (u.as_exact().is_some() || um.deg_k == Some(1)))
        .then_some(deg_h);
        let meta = Meta {
            deg_h,
            deg_k,
            e: o.e(),
            f: o.f(),
        };
        Ok(Element::build(recipe, y, meta, u.depth() + 1, label))
    }

    pub fn add(&self, x: &Element, y: &Element) -> Result<Element> {
        let v = x.value().add(y.value());
        let label = format!("({} + {})", x.label(), y.label());
        self.combine(Recipe::Sum(x.clone(), y.clone()), v, label)
    }

    pub fn mul(&self, x: &Element, y: &Element) -> Result<Element> {
        let v = x.value().mul(y.value());
        let label = format!("{}*{}", x.label(), y.label());
        self.combine(Recipe::Prod(x.clone(), y.clone()), v, label)
    }

    pub fn neg(&self, x: &Element) -> Result<Element> {
        let m = self.int(-1);
        let v = x.value().neg();
        self.combine(Recipe::Prod(m, x.clone()), v, format!("-{}", x.label()))
    }

    pub fn sub(&self, x: &Element, y: &Element) -> Result<Element> {
        let ny = self.neg(y)?;
        let v = x.value().sub(y.value());
        let label = format!("({} - {})", x.label(), y.label());
        self.combine(Recipe::Sum(x.clone(), ny), v, label)
    }

    /// `x + c` for a constant.
    pub fn add_const(&self, x: &Element, c: &Fq) -> Result<Element> {
        let y = self.constant(c.clone())?;
        self.add(x, &y)
    }

    fn combine(&self, recipe: Recipe, v: Value, label: String) -> Result<Element> {
        let (x, y) = match &recipe {
            Recipe::Sum(x, y) | Recipe::Prod(x, y) => (x.clone(), y.clone()),
            _ => unreachable!(),
        };
        if let Some(ex) = v.as_exact() {
            let meta = self.exact_meta(ex)?;
            return Ok(Element::build(recipe, v, meta, 0, label));
        }
        let (mx, my) = (x.meta(), y.meta());
        let (deg_h, e, f) = if mx.deg_h == 1 {
            (my.deg_h, my.e, my.f)
        } else if my.deg_h == 1 {
            (mx.deg_h, mx.e, mx.f)
        } else if mx.deg_h.gcd(&my.deg_h) == 1 {
            (mx.deg_h * my.deg_h, mx.e * my.e, mx.f * my.f)
        } else {
            return Err(Error::UnsupportedTower(format!(
                "composite of elements of degrees {} and {}",
                mx.deg_h, my.deg_h
            )));
        };
        let deg_k = match (mx.deg_k, my.deg_k) {
            (Some(1), k) | (k, Some(1)) => k,
            (Some(a), Some(b)) if a.gcd(&b) == 1 => Some(a * b),
            _ => None,
        };
        let meta = Meta { deg_h, deg_k, e, f };
        let depth = x.depth().max(y.depth());
        Ok(Element::build(recipe, v, meta, depth, label))
    }

    // ----- queries -----

    /// Degree over this tower's base.
    pub fn degree(&self, b: &Element) -> Result<u64> {
        let m = b.meta();
        if self.henselian {
            Ok(m.deg_h)
        } else {
            m.deg_k.ok_or_else(|| {
                Error::UnsupportedTower(format!("degree of {} over F_q(t) unknown", b.label()))
            })
        }
    }

    /// Invariants of the extension over the henselian base.
    pub fn ext_invariants(&self, b: &Element) -> ExtInvariants {
        let m = b.meta();
        ExtInvariants {
            deg: m.deg_h,
            e: m.e,
            f: m.f,
            defect: m.deg_h / (m.e * m.f),
        }
    }

    pub fn value_group(&self, b: &Element) -> ValueGroupDesc {
        self.base.value_group().with_denom(b.meta().e)
    }

    pub fn residue_field(&self, b: &Element) -> ResidueFieldDesc {
        ResidueFieldDesc {
            p: self.p(),
            m: self.base.m0 * b.meta().f as u32,
            transcendental: false,
        }
    }

    /// Certified leading term of a value.
    pub fn leading_term(&self, v: &Value) -> Result<(BigRational, Fq)> {
        if v.is_zero() {
            return Err(Error::InvalidArgument("zero has no leading term".into()));
        }
        let mut last = None;
        for b in self.bounds() {
            let s = v.series(&b);
            if let Some((e, c)) = s.terms().first() {
                return Ok((e.clone(), c.clone()));
            }
            if s.is_exact() {
                return Err(Error::InvalidArgument("zero has no leading term".into()));
            }
            let tail = s.tail().cloned().unwrap();
            if last.as_ref() == Some(&tail) {
                break;
            }
            last = Some(tail);
        }
        Err(Error::precision(
            last.unwrap_or_else(zero_q),
            "leading term not certified",
        ))
    }

    /// Certified valuation of a value (infinity for structural zero).
    pub fn val(&self, v: &Value) -> Result<GroupElement> {
        if v.is_zero() {
            return Ok(GroupElement::Infinity);
        }
        match self.leading_term(v) {
            Ok((e, _)) => Ok(GroupElement::rational(e)),
            Err(Error::InvalidArgument(_)) => Ok(GroupElement::Infinity),
            Err(e) => Err(e),
        }
    }

    /// `v(x - y)`.
    pub fn dist(&self, x: &Element, y: &Element) -> Result<GroupElement> {
        self.val(&x.value().sub(y.value()))
    }

    /// `min(v(x - y), cap)`, which only needs precision up to the cap.
    pub fn dist_capped(&self, x: &Element, y: &Element, cap: &GroupElement) -> Result<GroupElement> {
        let d = x.value().sub(y.value());
        if d.is_zero() {
            return Ok(cap.clone());
        }
        let (g, eps) = match cap {
            GroupElement::Infinity => return self.val(&d),
            GroupElement::Finite { main, eps } => (main.clone(), *eps),
        };
        let mut last = None;
        for b in self.bounds() {
            let b = if b <= g { &g + BigInt::from(1) } else { b };
            let s = d.series(&b);
            if let Some((e, _)) = s.terms().first() {
                return Ok(GroupElement::rational(e.clone()).min(cap.clone()));
            }
            match s.tail() {
                None => return Ok(cap.clone()),
                Some(t) => {
                    if (eps <= 0 && t >= &g) || (eps > 0 && t > &g) {
                        return Ok(cap.clone());
                    }
                    if last.as_ref() == Some(t) {
                        break;
                    }
                    last = Some(t.clone());
                }
            }
        }
        Err(Error::precision(
            last.unwrap_or_else(zero_q),
            "distance below cap not certified",
        ))
    }

    /// Galois orbit over the base (with multiplicity for inseparable exact
    /// elements).
    pub fn conjugates(&self, b: &Element) -> Result<Vec<Element>> {
        if b.depth() > 2 {
            return Err(Error::UnsupportedTower(format!(
                "conjugates of a tower of depth {}",
                b.depth()
            )));
        }
        let deg = self.degree(b)?;
        let out = self.conjugates_inner(b)?;
        if out.len() as u64 != deg {
            return Err(Error::UnsupportedTower(format!(
                "{} conjugates found for an element of degree {deg}",
                out.len()
            )));
        }
        Ok(out)
    }

    fn conjugates_inner(&self, b: &Element) -> Result<Vec<Element>> {
        let p = self.p();
        let meta = b.meta();
        if let Some(ex) = b.as_exact() {
            let o = exact_orbit(ex, self.base.m0, self.base.perfect())?;
            let mut out = Vec::new();
            for (i, img) in o.images.iter().enumerate() {
                let el = if i == 0 {
                    b.clone()
                } else {
                    Element::build(Recipe::Exact, Value::exact(img.clone()), meta, 0, img.to_string())
                };
                for _ in 0..o.insep {
                    out.push(el.clone());
                }
            }
            return Ok(out);
        }
        let local = self.henselian || meta.deg_k == Some(meta.deg_h);
        match b.recipe() {
            Recipe::Exact => unreachable!("exact recipe with atoms"),
            Recipe::AsRoot { u, branch } => {
                if local {
                    if meta.deg_h == 1 {
                        return Ok(vec![b.clone()]);
                    }
                    Ok((0..p)
                        .map(|j| {
                            let shift = Fq::from_i64(p, j as i64 - *branch as i64);
                            let v = b.value().add(&Value::exact(HahnSeries::constant(shift)));
                            let label = relabel_branch(b.label(), j);
                            Element::build(
                                Recipe::AsRoot {
                                    u: u.clone(),
                                    branch: j,
                                },
                                v,
                                meta,
                                b.depth(),
                                label,
                            )
                        })
                        .collect())
                } else if meta.deg_k == Some(1) {
                    Ok(vec![b.clone()])
                } else if meta.deg_k.is_some() && meta.deg_k == u.meta().deg_k.map(|k| k * p as u64)
                {
                    let mut out = Vec::new();
                    for uc in self.conjugates(u)? {
                        for j in 0..p {
                            out.push(self.as_root(&uc, j)?);
                        }
                    }
                    Ok(out)
                } else {
                    Err(Error::UnsupportedTower(
                        "conjugates over F_q(t) of this Artin-Schreier root".into(),
                    ))
                }
            }
            Recipe::NthRoot { u, n, branch } => {
                if !local {
                    return Err(Error::UnsupportedTower(
                        "conjugates over F_q(t) of this radical".into(),
                    ));
                }
                let n1 = prime_to(*n, p);
                let zeta = root_of_unity(p, n1)?;
                let mono = b.value().exact_part().clone();
                let o = exact_orbit(&mono, self.base.m0, self.base.perfect())?;
                let c0 = mono.terms()[0].1.clone();
                let mut out = Vec::new();
                for img in &o.images {
                    let ratio = img.terms()[0].1.div(&c0).expect("nonzero");
                    let j = (0..n1)
                        .find(|&j| zeta.pow(j as i64) == ratio)
                        .ok_or_else(|| Error::UnsupportedTower("radical conjugate".into()))?;
                    let v = b.value().scale(&ratio);
                    let br = (branch + j) % n1;
                    out.push(Element::build(
                        Recipe::NthRoot {
                            u: u.clone(),
                            n: *n,
                            branch: br,
                        },
                        v,
                        meta,
                        b.depth(),
                        format!("root{n}[{br}]({})", u.label()),
                    ));
                }
                Ok(out)
            }
            Recipe::Sum(x, y) | Recipe::Prod(x, y) => {
                let is_sum = matches!(b.recipe(), Recipe::Sum(..));
                let (dx, dy) = (self.degree(x)?, self.degree(y)?);
                if dx != 1 && dy != 1 && dx.gcd(&dy) != 1 {
                    return Err(Error::UnsupportedTower(format!(
                        "conjugates of a composite of degrees {dx} and {dy}"
                    )));
                }
                let cx = self.conjugates(x)?;
                let cy = self.conjugates(y)?;
                let mut out: Vec<Element> = Vec::new();
                for xi in &cx {
                    for yj in &cy {
                        let v = if is_sum {
                            xi.value().add(yj.value())
                        } else {
                            xi.value().mul(yj.value())
                        };
                        let (recipe, label) = if is_sum {
                            (
                                Recipe::Sum(xi.clone(), yj.clone()),
                                format!("({} + {})", xi.label(), yj.label()),
                            )
                        } else {
                            (
                                Recipe::Prod(xi.clone(), yj.clone()),
                                format!("{}*{}", xi.label(), yj.label()),
                            )
                        };
                        out.push(Element::build(recipe, v, meta, b.depth(), label));
                    }
                }
                let mut keys: Vec<&str> = out.iter().map(|e| e.key()).collect();
                keys.sort_unstable();
                keys.dedup();
                if keys.len() != out.len() {
                    return Err(Error::UnsupportedTower(
                        "composite is not a primitive element".into(),
                    ));
                }
                // keep b itself first
                if let Some(pos) = out.iter().position(|c| c.same(b)) {
                    let me = out.remove(pos);
                    out.insert(0, me);
                }
                Ok(out)
            }
        }
    }

    /// Largest distance from `b` to another conjugate; `None` for degree 1.
    pub fn kras(&self, b: &Element) -> Result<Option<GroupElement>> {
        let mut best: Option<GroupElement> = None;
        for c in self.conjugates(b)? {
            if c.same(b) {
                continue;
            }
            let d = self.dist(b, &c)?;
            best = Some(match best {
                Some(x) if x >= d => x,
                _ => d,
            });
        }
        Ok(best)
    }

    /// Sub-elements appearing in the construction of `b`, innermost first.
    pub fn descendants(&self, b: &Element) -> Vec<Element> {
        let mut out: Vec<Element> = Vec::new();
        fn walk(e: &Element, out: &mut Vec<Element>) {
            match e.recipe() {
                Recipe::Exact => {}
                Recipe::AsRoot { u, .. } | Recipe::NthRoot { u, .. } => {
                    walk(u, out);
                    out.push(u.clone());
                }
                Recipe::Sum(x, y) | Recipe::Prod(x, y) => {
                    walk(x, out);
                    out.push(x.clone());
                    walk(y, out);
                    out.push(y.clone());
                }
            }
        }
        walk(b, &mut out);
        let mut seen = std::collections::HashSet::new();
        out.retain(|e| seen.insert(e.key().to_string()));
        out
    }
}

fn relabel_branch(label: &str, j: u32) -> String {
    let base = match label.rfind(")+") {
        Some(i) if label[i + 2..].chars().all(|c| c.is_ascii_digit()) => &label[..=i],
        _ => label,
    };
    if j == 0 {
        base.to_string()
    } else {
        format!("{base}+{j}")
    }
}

fn prime_to(mut n: u32, p: u32) -> u32 {
    while n.is_multiple_of(p) {
        n /= p;
    }
    n
}

/// Rewrites `sum_{k >= 1} Frob^{-k}(u)` for an exact `u` as exact corrections
/// plus principal atoms `P(c t^a)` whose exponents have numerator prime to p,
/// with coefficients split along an F_p-basis so that equal atoms cancel.
fn canonical_principal(u: &HahnSeries, m: u32) -> Result<(HahnSeries, Vec<(BigRational, Fq)>)> {
    let p = u.p();
    let pb = BigInt::from(p);
    let mut corr: Vec<(BigRational, Fq)> = Vec::new();
    let mut canon: std::collections::BTreeMap<BigRational, Fq> = Default::default();
    for (r, c) in u.terms() {
        let s = vp(r, p);
        let (a, c1) = if s >= 0 {
            let a = r / pb.pow(s as u32);
            let mut c1 = c.clone();
            for _ in 0..s {
                c1 = c1.inv_frobenius();
            }
            // P(Frob^s x) = P(x) + sum_{k<s} Frob^k x
            let mut term_c = c1.clone();
            let mut term_e = a.clone();
            for _ in 0..s {
                corr.push((term_e.clone(), term_c.clone()));
                term_c = term_c.frobenius();
                term_e *= &pb;
            }
            (a, c1)
        } else {
            let sigma = (-s) as u32;
            let a = r * pb.pow(sigma);
            let mut c1 = c.clone();
            for _ in 0..sigma {
                c1 = c1.frobenius();
            }
            // P(Frob^{-sigma} x) = P(x) - sum_{k=1..sigma} Frob^{-k} x
            let mut term_c = c1.clone();
            let mut term_e = a.clone();
            for _ in 0..sigma {
                term_c = term_c.inv_frobenius();
                term_e /= &pb;
                corr.push((term_e.clone(), term_c.neg()));
            }
            (a, c1)
        };
        let entry = canon.entry(a).or_insert_with(|| Fq::zero(p));
        *entry = entry.add(&c1);
    }
    let mut atoms = Vec::new();
    for (a, c) in canon {
        if c.is_zero() {
            continue;
        }
        if let Some(k) = c.as_prime() {
            let _ = k;
            atoms.push((a.clone(), c.clone()));
            continue;
        }
        let m = m.lcm(&c.degree());
        let coords = c.coords_in(m)?;
        let g = Fq::generator(p, m)?;
        for (i, &ci) in coords.iter().enumerate() {
            if ci != 0 {
                atoms.push((a.clone(), g.pow(i as i64).mul(&Fq::from_i64(p, ci as i64))));
            }
        }
    }
    Ok((HahnSeries::from_terms(p, corr, None), atoms))
}

/// Whether `u in F_q[t, 1/t]` lies in `{g^p - g : g in F_q(t)}`.
fn laurent_as_trivial(u: &HahnSeries, m0: u32) -> bool {
    let p = u.p();
    let pb = BigInt::from(p);
    let mut cur = u.clone();
    loop {
        let mut changed = false;
        let terms: Vec<(BigRational, Fq)> = cur
            .terms()
            .iter()
            .map(|(e, c)| {
                if !e.is_zero() && e.denom().is_one() && (e.numer() % &pb).is_zero() {
                    changed = true;
                    (e / &pb, c.inv_frobenius())
                } else {
                    (e.clone(), c.clone())
                }
            })
            .collect();
        cur = HahnSeries::from_terms(p, terms, None);
        if !changed {
            break;
        }
    }
    match cur.terms() {
        [] => true,
        [(e, c)] if e.is_zero() => c.trace(m0.lcm(&c.degree())).is_zero(),
        _ => false,
    }
}

#[cfg(test)]
mod tests;
