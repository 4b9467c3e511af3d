//! Series-valued expressions with exact cancellation.
//!
//! Some tower elements have expansions that cannot be cut at an arbitrary
//! exponent: the root of `X^p - X - 1/t` is `sum_k t^{-1/p^k}`, whose exponents
//! accumulate at 0 from below. To still decide that `a - (a + 1) = -1` we keep
//! every element as an exact series plus an exact-coefficient combination of
//! named infinite "atoms". Identical atoms cancel symbolically; everything else
//! is compared through truncated expansions.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::coefficient_field::Fq;
use crate::hahn_series::HahnSeries;

/// Number of terms of a principal-part atom that are ever expanded.
pub(crate) const PRINCIPAL_TERMS: u32 = 24;

#[derive(Clone)]
pub struct Atom(Arc<AtomNode>);

struct AtomNode {
    kind: AtomKind,
    key: String,
    cache: Mutex<Option<(BigRational, HahnSeries)>>,
}

pub(crate) enum AtomKind {
    /// `sum_{k >= 1} Frob^{-k}(c t^a)` for a negative exponent `a`.
    Principal { c: Fq, a: BigRational },
    /// `-sum_{k >= 0} Frob^k(w)`; `lower` is a positive lower bound for v(w).
    AsConvergent { w: Value, lower: BigRational },
    /// `(1 + r)^{1/n} - 1` via the binomial series; `lower` bounds v(r) > 0.
    Kummer { r: Value, n: u32, lower: BigRational },
    Product(Atom, Atom),
}

impl Atom {
    pub(crate) fn new(kind: AtomKind) -> Atom {
        let key = match &kind {
            AtomKind::Principal { c, a } => format!("P[{c};{a}]"),
            AtomKind::AsConvergent { w, .. } => format!("C[{}]", w.key()),
            AtomKind::Kummer { r, n, .. } => format!("R{n}[{}]", r.key()),
            AtomKind::Product(x, y) => format!("M[{}*{}]", x.key(), y.key()),
        };
        Atom(Arc::new(AtomNode {
            kind,
            key,
            cache: Mutex::new(None),
        }))
    }

    pub fn key(&self) -> &str {
        &self.0.key
    }

    pub(crate) fn kind(&self) -> &AtomKind {
        &self.0.kind
    }

    pub fn p(&self) -> u32 {
        match &self.0.kind {
            AtomKind::Principal { c, .. } => c.p(),
            AtomKind::AsConvergent { w, .. } => w.p(),
            AtomKind::Kummer { r, .. } => r.p(),
            AtomKind::Product(x, _) => x.p(),
        }
    }

    /// Certified lower bound on the valuation.
    pub fn lower_bound(&self) -> BigRational {
        match &self.0.kind {
            AtomKind::Principal { a, .. } => a / BigInt::from(self.p()),
            AtomKind::AsConvergent { lower, .. } => lower.clone(),
            AtomKind::Kummer { lower, .. } => lower.clone(),
            AtomKind::Product(x, y) => x.lower_bound() + y.lower_bound(),
        }
    }

    /// Expansion up to `O(t^bound)`; the tail may fall short of `bound` when
    /// the exponents accumulate below it.
    pub fn series(&self, bound: &BigRational) -> HahnSeries {
        {
            let cache = self.0.cache.lock().unwrap();
            if let Some((b, s)) = cache.as_ref() {
                if bound <= b {
                    return s.truncated(bound);
                }
            }
        }
        let s = self.compute(bound);
        let mut cache = self.0.cache.lock().unwrap();
        let better = match cache.as_ref() {
            Some((b, _)) => bound > b,
            None => true,
        };
        if better {
            *cache = Some((bound.clone(), s.clone()));
        }
        s
    }

    fn compute(&self, bound: &BigRational) -> HahnSeries {
        let p = self.p();
        let pb = BigInt::from(p);
        match &self.0.kind {
            AtomKind::Principal { c, a } => {
                let mut terms = Vec::new();
                let mut coeff = c.clone();
                let mut e = a.clone();
                for _ in 0..PRINCIPAL_TERMS {
                    coeff = coeff.inv_frobenius();
                    e /= &pb;
                    if &e >= bound {
                        return HahnSeries::from_terms(p, terms, Some(bound.clone()));
                    }
                    terms.push((e.clone(), coeff.clone()));
                }
                let rest = (&e / &pb).min(bound.clone());
                HahnSeries::from_terms(p, terms, Some(rest))
            }
            AtomKind::AsConvergent { w, lower } => {
                let mut acc = HahnSeries::unknown(p, bound.clone());
                let mut scale = BigRational::one();
                let mut k = 0u32;
                while &(lower * &scale) < bound {
                    let mut s = w.series(&(bound / &scale));
                    for _ in 0..k {
                        s = s.frobenius();
                    }
                    acc = acc.sub(&s);
                    scale *= &pb;
                    k += 1;
                }
                acc
            }
            AtomKind::Kummer { r, n, lower } => {
                let s = r.series(bound);
                let mut acc = HahnSeries::unknown(p, bound.clone());
                let mut power = HahnSeries::one(p);
                let mut k = 1u64;
                let mut binom = BigRational::one();
                let exponent = BigRational::new(BigInt::one(), BigInt::from(*n));
                while &(lower * BigInt::from(k)) < bound {
                    power = power.mul_bounded(&s, Some(bound));
                    binom = binom * (&exponent - BigInt::from(k - 1)) / BigInt::from(k);
                    let c = reduce_mod_p(&binom, p);
                    acc = acc.add(&power.scale(&c));
                    k += 1;
                }
                acc
            }
            AtomKind::Product(x, y) => {
                let sx = x.series(&(bound - y.lower_bound()));
                let sy = y.series(&(bound - x.lower_bound()));
                sx.mul_bounded(&sy, Some(bound))
            }
        }
    }
}

/// Image in F_p of a p-integral rational.
pub(crate) fn reduce_mod_p(q: &BigRational, p: u32) -> Fq {
    let pb = BigInt::from(p);
    let num = (q.numer() % &pb + &pb) % &pb;
    let den = (q.denom() % &pb + &pb) % &pb;
    assert!(!den.is_zero(), "value is not p-integral");
    let num = Fq::from_i64(p, num.to_i64().unwrap());
    let den = Fq::from_i64(p, den.to_i64().unwrap());
    num.div(&den).unwrap()
}

impl fmt::Debug for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.key())
    }
}

/// `exact + sum_i coeff_i * atom_i`, coefficients exact and nonzero, atoms
/// sorted by key.
#[derive(Clone)]
pub struct Value {
    exact: HahnSeries,
    terms: Vec<(Atom, HahnSeries)>,
}

impl Value {
    pub fn zero(p: u32) -> Value {
        Value::exact(HahnSeries::zero(p))
    }

    pub fn exact(s: HahnSeries) -> Value {
        assert!(s.is_exact(), "exact part must not carry a tail");
        Value {
            exact: s,
            terms: Vec::new(),
        }
    }

    pub fn atom(a: Atom) -> Value {
        let p = a.p();
        Value {
            exact: HahnSeries::zero(p),
            terms: vec![(a, HahnSeries::one(p))],
        }
    }

    pub fn p(&self) -> u32 {
        self.exact.p()
    }

    pub fn exact_part(&self) -> &HahnSeries {
        &self.exact
    }

    pub fn atoms(&self) -> &[(Atom, HahnSeries)] {
        &self.terms
    }

    pub fn as_exact(&self) -> Option<&HahnSeries> {
        self.terms.is_empty().then_some(&self.exact)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.exact.is_exact_zero()
    }

    pub fn key(&self) -> String {
        let mut s = self.exact.to_string();
        for (a, c) in &self.terms {
            s.push_str(&format!(" + ({c})*{}", a.key()));
        }
        s
    }

    fn from_map(exact: HahnSeries, map: BTreeMap<String, (Atom, HahnSeries)>) -> Value {
        Value {
            exact,
            terms: map
                .into_values()
                .filter(|(_, c)| !c.is_exact_zero())
                .collect(),
        }
    }

    fn map(&self) -> BTreeMap<String, (Atom, HahnSeries)> {
        self.terms
            .iter()
            .map(|(a, c)| (a.key().to_string(), (a.clone(), c.clone())))
            .collect()
    }

    pub fn add(&self, other: &Value) -> Value {
        let mut map = self.map();
        for (a, c) in &other.terms {
            map.entry(a.key().to_string())
                .and_modify(|e| e.1 = e.1.add(c))
                .or_insert_with(|| (a.clone(), c.clone()));
        }
        Value::from_map(self.exact.add(&other.exact), map)
    }

    pub fn neg(&self) -> Value {
        Value {
            exact: self.exact.neg(),
            terms: self.terms.iter().map(|(a, c)| (a.clone(), c.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &Value) -> Value {
        self.add(&other.neg())
    }

    /// Product with an exact series.
    pub fn mul_exact(&self, s: &HahnSeries) -> Value {
        assert!(s.is_exact());
        let map = self
            .terms
            .iter()
            .map(|(a, c)| (a.key().to_string(), (a.clone(), c.mul(s))))
            .collect();
        Value::from_map(self.exact.mul(s), map)
    }

    pub fn mul(&self, other: &Value) -> Value {
        let mut out = self.mul_exact(&other.exact);
        let mut map = out.map();
        let mut add = |a: Atom, c: HahnSeries| {
            map.entry(a.key().to_string())
                .and_modify(|e| e.1 = e.1.add(&c))
                .or_insert((a, c));
        };
        for (b, cb) in &other.terms {
            add(b.clone(), cb.mul(&self.exact));
            for (a, ca) in &self.terms {
                let (x, y) = if a.key() <= b.key() { (a, b) } else { (b, a) };
                let prod = Atom::new(AtomKind::Product(x.clone(), y.clone()));
                add(prod, ca.mul(cb));
            }
        }
        out = Value::from_map(out.exact, map);
        out
    }

    pub fn scale(&self, c: &Fq) -> Value {
        self.mul_exact(&HahnSeries::constant(c.clone()))
    }

    /// Expansion up to `O(t^bound)` (or a smaller tail if an atom cannot be
    /// expanded that far).
    pub fn series(&self, bound: &BigRational) -> HahnSeries {
        let mut acc = self.exact.truncated(bound);
        for (a, c) in &self.terms {
            let lc = c.lower_bound().expect("nonzero coefficient");
            let s = a.series(&(bound - &lc));
            acc = acc.add(&s.mul_bounded(c, Some(bound)));
        }
        if self.terms.is_empty() && self.exact.terms().iter().all(|(e, _)| e < bound) {
            return self.exact.clone();
        }
        acc
    }

    /// Structural lower bound on the valuation; `None` for zero.
    pub fn lower_bound(&self) -> Option<BigRational> {
        let mut best = self.exact.lower_bound();
        for (a, c) in &self.terms {
            let b = a.lower_bound() + c.lower_bound().expect("nonzero coefficient");
            best = Some(match best {
                Some(x) if x <= b => x,
                _ => b,
            });
        }
        best
    }

    /// Whether every atom can be expanded beyond any bound.
    pub fn is_refinable(&self) -> bool {
        fn refinable(a: &Atom) -> bool {
            match a.kind() {
                AtomKind::Principal { .. } => false,
                AtomKind::AsConvergent { w, .. } => w.is_refinable(),
                AtomKind::Kummer { r, .. } => r.is_refinable(),
                AtomKind::Product(x, y) => refinable(x) && refinable(y),
            }
        }
        self.terms.iter().all(|(a, _)| refinable(a))
    }
}

impl fmt::Debug for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.key())
    }
}

/// `p`-adic valuation of a nonzero rational.
pub(crate) fn vp(q: &BigRational, p: u32) -> i64 {
    let pb = BigInt::from(p);
    let mut n = q.numer().abs();
    let mut d = q.denom().clone();
    let mut s = 0i64;
    while (&n % &pb).is_zero() {
        n /= &pb;
        s += 1;
    }
    while (&d % &pb).is_zero() {
        d /= &pb;
        s -= 1;
    }
    s
}
