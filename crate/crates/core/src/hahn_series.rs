//! Truncated generalized power series `sum c_e t^e` with rational exponents
//! and finite-field coefficients.
//!
//! A series carries an optional tail bound `B`: every omitted term has
//! exponent `>= B` and every listed exponent is `< B`. Without a bound the
//! series is exact (a finite sum).

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use crate::coefficient_field::Fq;
use crate::error::{Error, Result};
use crate::value_group::GroupElement;

#[derive(Clone, PartialEq, Eq)]
pub struct HahnSeries {
    p: u32,
    terms: Vec<(BigRational, Fq)>,
    tail: Option<BigRational>,
}

fn min_opt(a: &Option<BigRational>, b: &Option<BigRational>) -> Option<BigRational> {
    match (a, b) {
        (None, None) => None,
        (Some(x), None) | (None, Some(x)) => Some(x.clone()),
        (Some(x), Some(y)) => Some(x.min(y).clone()),
    }
}

impl HahnSeries {
    pub fn zero(p: u32) -> Self {
        HahnSeries {
            p,
            terms: Vec::new(),
            tail: None,
        }
    }

    /// Zero up to `O(t^bound)`.
    pub fn unknown(p: u32, bound: BigRational) -> Self {
        HahnSeries {
            p,
            terms: Vec::new(),
            tail: Some(bound),
        }
    }

    pub fn constant(c: Fq) -> Self {
        HahnSeries::monomial(c, BigRational::zero())
    }

    pub fn one(p: u32) -> Self {
        HahnSeries::constant(Fq::one(p))
    }

    pub fn monomial(c: Fq, e: BigRational) -> Self {
        let p = c.p();
        if c.is_zero() {
            return HahnSeries::zero(p);
        }
        HahnSeries {
            p,
            terms: vec![(e, c)],
            tail: None,
        }
    }

    /// The uniformizer `t`.
    pub fn t(p: u32) -> Self {
        HahnSeries::monomial(Fq::one(p), BigRational::one())
    }

    /// Builds a series from arbitrary terms: sorts, merges equal exponents and
    /// drops zero coefficients and terms at or beyond the tail.
    pub fn from_terms(
        p: u32,
        terms: impl IntoIterator<Item = (BigRational, Fq)>,
        tail: Option<BigRational>,
    ) -> Self {
        let mut acc: BTreeMap<BigRational, Fq> = BTreeMap::new();
        for (e, c) in terms {
            if let Some(b) = &tail {
                if &e >= b {
                    continue;
                }
            }
            match acc.get_mut(&e) {
                Some(x) => *x = x.add(&c),
                None => {
                    acc.insert(e, c);
                }
            }
        }
        HahnSeries {
            p,
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
            tail,
        }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn terms(&self) -> &[(BigRational, Fq)] {
        &self.terms
    }

    pub fn tail(&self) -> Option<&BigRational> {
        self.tail.as_ref()
    }

    pub fn is_exact(&self) -> bool {
        self.tail.is_none()
    }

    pub fn is_exact_zero(&self) -> bool {
        self.is_exact() && self.terms.is_empty()
    }

    /// True when the series is a single exact term.
    pub fn as_monomial(&self) -> Option<(&BigRational, &Fq)> {
        match (self.terms.as_slice(), &self.tail) {
            ([(e, c)], None) => Some((e, c)),
            _ => None,
        }
    }

    /// Largest certified lower bound on the valuation; `None` for exact zero.
    pub fn lower_bound(&self) -> Option<BigRational> {
        match self.terms.first() {
            Some((e, _)) => Some(e.clone()),
            None => self.tail.clone(),
        }
    }

    pub fn truncated(&self, bound: &BigRational) -> HahnSeries {
        let tail = min_opt(&self.tail, &Some(bound.clone()));
        let cut = tail.as_ref().unwrap();
        HahnSeries {
            p: self.p,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e < cut)
                .cloned()
                .collect(),
            tail,
        }
    }

    /// Terms with exponent strictly below `bound`, as an exact series.
    pub fn exact_part_below(&self, bound: &BigRational) -> Result<HahnSeries> {
        if let Some(t) = &self.tail {
            if t < bound {
                return Err(Error::precision(t.clone(), "terms below bound not all known"));
            }
        }
        Ok(HahnSeries {
            p: self.p,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e < bound)
                .cloned()
                .collect(),
            tail: None,
        })
    }

    /// Terms with exponent `>= bound`, keeping the tail.
    pub fn part_from(&self, bound: &BigRational) -> HahnSeries {
        HahnSeries {
            p: self.p,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e >= bound)
                .cloned()
                .collect(),
            tail: self.tail.clone(),
        }
    }

    pub fn val(&self) -> Result<GroupElement> {
        match (self.terms.first(), &self.tail) {
            (Some((e, _)), _) => Ok(GroupElement::rational(e.clone())),
            (None, None) => Ok(GroupElement::Infinity),
            (None, Some(b)) => Err(Error::precision(b.clone(), "valuation not certified")),
        }
    }

    pub fn leading(&self) -> Result<(&BigRational, &Fq)> {
        match (self.terms.first(), &self.tail) {
            (Some((e, c)), _) => Ok((e, c)),
            (None, None) => Err(Error::InvalidArgument("zero has no leading term".into())),
            (None, Some(b)) => Err(Error::precision(b.clone(), "leading term not certified")),
        }
    }

    /// Coefficient at exponent `e`, certified only below the tail.
    pub fn coeff(&self, e: &BigRational) -> Result<Fq> {
        if let Some(b) = &self.tail {
            if e >= b {
                return Err(Error::precision(b.clone(), "coefficient beyond tail"));
            }
        }
        Ok(self
            .terms
            .iter()
            .find(|(x, _)| x == e)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(|| Fq::zero(self.p)))
    }

    pub fn residue(&self) -> Result<Fq> {
        let zero = BigRational::zero();
        if let Some((e, _)) = self.terms.first() {
            if e < &zero {
                return Err(Error::NegativeValuation);
            }
        }
        self.coeff(&zero)
    }

    pub fn neg(&self) -> HahnSeries {
        HahnSeries {
            p: self.p,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c.neg())).collect(),
            tail: self.tail.clone(),
        }
    }

    pub fn add(&self, other: &HahnSeries) -> HahnSeries {
        let tail = min_opt(&self.tail, &other.tail);
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() || j < b.len() {
            let next = match (a.get(i), b.get(j)) {
                (Some((ea, ca)), Some((eb, cb))) => match ea.cmp(eb) {
                    std::cmp::Ordering::Less => {
                        i += 1;
                        (ea.clone(), ca.clone())
                    }
                    std::cmp::Ordering::Greater => {
                        j += 1;
                        (eb.clone(), cb.clone())
                    }
                    std::cmp::Ordering::Equal => {
                        i += 1;
                        j += 1;
                        (ea.clone(), ca.add(cb))
                    }
                },
                (Some(x), None) => {
                    i += 1;
                    x.clone()
                }
                (None, Some(y)) => {
                    j += 1;
                    y.clone()
                }
                (None, None) => unreachable!(),
            };
            if let Some(t) = &tail {
                if &next.0 >= t {
                    break;
                }
            }
            if !next.1.is_zero() {
                out.push(next);
            }
        }
        HahnSeries {
            p: self.p,
            terms: out,
            tail,
        }
    }

    pub fn sub(&self, other: &HahnSeries) -> HahnSeries {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Fq) -> HahnSeries {
        if c.is_zero() {
            return match &self.tail {
                None => HahnSeries::zero(self.p),
                Some(_) if self.terms.is_empty() => self.clone(),
                // c * O(t^B) is still O(t^B)
                Some(b) => HahnSeries::unknown(self.p, b.clone()),
            };
        }
        HahnSeries {
            p: self.p,
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x.mul(c))).collect(),
            tail: self.tail.clone(),
        }
    }

    /// Multiplication by `t^r`.
    pub fn shift(&self, r: &BigRational) -> HahnSeries {
        HahnSeries {
            p: self.p,
            terms: self.terms.iter().map(|(e, c)| (e + r, c.clone())).collect(),
            tail: self.tail.as_ref().map(|b| b + r),
        }
    }

    pub fn mul(&self, other: &HahnSeries) -> HahnSeries {
        self.mul_bounded(other, None)
    }

    /// Product truncated at `cap` (if given). The tail bound is
    /// `min(cap, v(x) + tail(y), v(y) + tail(x), tail(x) + tail(y))`.
    pub fn mul_bounded(&self, other: &HahnSeries, cap: Option<&BigRational>) -> HahnSeries {
        let p = self.p;
        if self.is_exact_zero() || other.is_exact_zero() {
            return HahnSeries::zero(p);
        }
        let lx = self.lower_bound().unwrap();
        let ly = other.lower_bound().unwrap();
        let mut tail: Option<BigRational> = cap.cloned();
        if let Some(by) = &other.tail {
            tail = min_opt(&tail, &Some(&lx + by));
        }
        if let Some(bx) = &self.tail {
            tail = min_opt(&tail, &Some(&ly + bx));
        }
        let mut acc: BTreeMap<BigRational, Fq> = BTreeMap::new();
        for (ex, cx) in &self.terms {
            if let Some(t) = &tail {
                if &(ex + &ly) >= t {
                    break;
                }
            }
            for (ey, cy) in &other.terms {
                let e = ex + ey;
                if let Some(t) = &tail {
                    if &e >= t {
                        break;
                    }
                }
                let prod = cx.mul(cy);
                match acc.get_mut(&e) {
                    Some(v) => *v = v.add(&prod),
                    None => {
                        acc.insert(e, prod);
                    }
                }
            }
        }
        HahnSeries {
            p,
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
            tail,
        }
    }

    pub fn pow_bounded(&self, n: u32, cap: Option<&BigRational>) -> HahnSeries {
        let mut result = HahnSeries::one(self.p);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = result.mul_bounded(&base, cap);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul_bounded(&base, cap);
            }
        }
        result
    }

    /// `1/x` up to `O(t^bound)`; needs a certified leading term. The tail is
    /// at most `tail(x) - 2 v(x)`.
    pub fn inv(&self, bound: &BigRational) -> Result<HahnSeries> {
        let (r, c) = self.leading()?;
        let (r, c) = (r.clone(), c.clone());
        let cinv = c.inv().expect("leading coefficient is nonzero");
        // x = c t^r (1 + s)
        let s = self.shift(&-&r).scale(&cinv).sub(&HahnSeries::one(self.p));
        let rel_bound = match &s.tail {
            Some(ts) => ts.clone().min(bound + &r),
            None => bound + &r,
        };
        if s.is_exact_zero() {
            return Ok(HahnSeries::monomial(cinv, -r));
        }
        let vs = s.lower_bound().expect("nonzero");
        let neg_s = s.neg();
        let mut sum = HahnSeries::one(self.p);
        let mut power = HahnSeries::one(self.p);
        let mut k = BigRational::zero();
        loop {
            k += &vs;
            if k >= rel_bound {
                break;
            }
            power = power.mul_bounded(&neg_s, Some(&rel_bound));
            sum = sum.add(&power);
        }
        Ok(sum.truncated(&rel_bound).shift(&-&r).scale(&cinv))
    }

    /// Termwise `x -> x^p`: exponents and tail times p, coefficients to the
    /// p-th power.
    pub fn frobenius(&self) -> HahnSeries {
        let pb = BigInt::from(self.p);
        HahnSeries {
            p: self.p,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e * &pb, c.frobenius()))
                .collect(),
            tail: self.tail.as_ref().map(|b| b * &pb),
        }
    }

    pub fn inv_frobenius(&self) -> HahnSeries {
        let pb = BigInt::from(self.p);
        HahnSeries {
            p: self.p,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e / &pb, c.inv_frobenius()))
                .collect(),
            tail: self.tail.as_ref().map(|b| b / &pb),
        }
    }

    /// Least common multiple of the exponent denominators.
    pub fn exponent_denominator(&self) -> BigInt {
        use num_integer::Integer;
        self.terms
            .iter()
            .fold(BigInt::one(), |acc, (e, _)| acc.lcm(e.denom()))
    }

    /// Smallest m such that every coefficient lies in F_{p^m}.
    pub fn coefficient_degree(&self) -> u32 {
        use num_integer::Integer;
        self.terms.iter().fold(1, |acc, (_, c)| acc.lcm(&c.degree()))
    }

    pub fn map_coefficients(&self, f: impl Fn(&Fq) -> Fq) -> HahnSeries {
        HahnSeries::from_terms(
            self.p,
            self.terms.iter().map(|(e, c)| (e.clone(), f(c))),
            self.tail.clone(),
        )
    }
}

/// `v(x - y)`, certified.
pub fn hs_dist(x: &HahnSeries, y: &HahnSeries) -> Result<GroupElement> {
    x.sub(y).val()
}

pub fn hs_val(x: &HahnSeries) -> Result<GroupElement> {
    x.val()
}

pub fn hs_residue(x: &HahnSeries) -> Result<Fq> {
    x.residue()
}

/// Valuations of the roots of `sum_i coeffs[i] X^i` (with multiplicity),
/// read off the lower convex hull of the points `(i, v(coeffs[i]))`.
///
/// Coefficients whose valuation is only bounded from below are accepted as
/// long as the bound lies on or above the hull of the certified points.
pub fn newton_slopes(coeffs: &[HahnSeries]) -> Result<Vec<GroupElement>> {
    let n = coeffs.len();
    if n == 0 {
        return Err(Error::InvalidArgument("empty polynomial".into()));
    }
    let lead = coeffs[n - 1].val()?;
    if lead.is_infinity() {
        return Err(Error::InvalidArgument("leading coefficient is zero".into()));
    }
    let mut points: Vec<(i64, BigRational)> = Vec::new();
    let mut pending: Vec<(i64, BigRational)> = Vec::new();
    let mut zero_roots = 0usize;
    let mut seen_nonzero = false;
    for (i, c) in coeffs.iter().enumerate() {
        match c.val() {
            Ok(GroupElement::Infinity) => {
                if !seen_nonzero {
                    zero_roots += 1;
                }
            }
            Ok(v) => {
                seen_nonzero = true;
                points.push((i as i64, v.main().unwrap().clone()));
            }
            Err(_) => {
                let b = c.tail().unwrap().clone();
                if !seen_nonzero {
                    return Err(Error::precision(b, "constant coefficient not certified"));
                }
                pending.push((i as i64, b));
            }
        }
    }
    let hull = lower_hull(&points);
    for (i, b) in &pending {
        let on_hull = hull_value_at(&hull, *i);
        if b < &on_hull {
            return Err(Error::precision(
                b.clone(),
                format!("coefficient {i} may lie below the Newton polygon"),
            ));
        }
    }
    let mut out = vec![GroupElement::Infinity; zero_roots];
    for w in hull.windows(2) {
        let (i0, v0) = &w[0];
        let (i1, v1) = &w[1];
        let len = i1 - i0;
        let slope = (v1 - v0) / BigRational::from_integer(BigInt::from(len));
        for _ in 0..len {
            out.push(GroupElement::rational(-slope.clone()));
        }
    }
    out.sort();
    Ok(out)
}

fn lower_hull(points: &[(i64, BigRational)]) -> Vec<(i64, BigRational)> {
    let mut hull: Vec<(i64, BigRational)> = Vec::new();
    for pt in points {
        while hull.len() >= 2 {
            let (a, b) = (&hull[hull.len() - 2], &hull[hull.len() - 1]);
            // drop b if it lies on or above the segment a..pt
            let lhs = (&b.1 - &a.1) * BigInt::from(pt.0 - a.0);
            let rhs = (&pt.1 - &a.1) * BigInt::from(b.0 - a.0);
            if lhs >= rhs {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt.clone());
    }
    hull
}

fn hull_value_at(hull: &[(i64, BigRational)], i: i64) -> BigRational {
    for w in hull.windows(2) {
        let (i0, v0) = &w[0];
        let (i1, v1) = &w[1];
        if *i0 <= i && i <= *i1 {
            return v0 + (v1 - v0) * BigRational::new(BigInt::from(i - i0), BigInt::from(i1 - i0));
        }
    }
    hull.last().map(|x| x.1.clone()).unwrap_or_else(BigRational::zero)
}

fn fmt_exponent(e: &BigRational) -> String {
    if e.denom().is_one() && !e.is_negative() {
        e.to_string()
    } else {
        format!("({e})")
    }
}

impl fmt::Display for HahnSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        for (e, c) in &self.terms {
            let coeff = c.to_string();
            let coeff = if coeff.contains('+') {
                format!("({coeff})")
            } else {
                coeff
            };
            parts.push(if e.is_zero() {
                coeff
            } else if e.is_one() {
                if c.is_one() {
                    "t".to_string()
                } else {
                    format!("{coeff}*t")
                }
            } else if c.is_one() {
                format!("t^{}", fmt_exponent(e))
            } else {
                format!("{coeff}*t^{}", fmt_exponent(e))
            });
        }
        if let Some(b) = &self.tail {
            parts.push(format!("O(t^{})", fmt_exponent(b)));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl fmt::Debug for HahnSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HahnSeries({self})")
    }
}

/// `{"terms": [["1/2", "1"], ...], "tail": "3"}` with `tail: null` for exact
/// series.
impl Serialize for HahnSeries {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let terms: Vec<(String, String)> = self
            .terms
            .iter()
            .map(|(e, c)| (e.to_string(), c.to_string()))
            .collect();
        let mut st = s.serialize_struct("HahnSeries", 2)?;
        st.serialize_field("terms", &terms)?;
        st.serialize_field("tail", &self.tail.as_ref().map(|b| b.to_string()))?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::value_group::{int, rat};
    use proptest::prelude::*;

    fn c(p: u32, n: i64) -> Fq {
        Fq::from_i64(p, n)
    }

    fn series(p: u32, terms: &[(i64, i64, i64)], tail: Option<i64>) -> HahnSeries {
        HahnSeries::from_terms(
            p,
            terms.iter().map(|&(n, d, k)| (rat(n, d), c(p, k))),
            tail.map(int),
        )
    }

    #[test]
    fn valuation_examples() {
        let x = series(3, &[(1, 1, 1), (2, 1, 1), (4, 1, 1)], None);
        assert_eq!(x.val().unwrap(), GroupElement::from_ints(1, 1));
        assert_eq!(HahnSeries::zero(3).val().unwrap(), GroupElement::Infinity);
        let unknown = HahnSeries::unknown(3, int(5));
        assert!(unknown.val().unwrap_err().is_precision_loss());
    }

    #[test]
    fn arithmetic_examples() {
        let p = 3;
        let a = series(p, &[(1, 1, 1), (2, 1, 1)], Some(10));
        let b = series(p, &[(1, 1, 1)], None);
        let d = a.sub(&b);
        assert_eq!(d.terms(), &[(int(2), c(p, 1))]);
        assert_eq!(d.tail(), Some(&int(10)));
        let x = series(p, &[(0, 1, 1), (1, 1, 1)], None);
        let y = series(p, &[(0, 1, 1), (1, 1, -1)], None);
        assert_eq!(x.mul(&y), series(p, &[(0, 1, 1), (2, 1, -1)], None));
        let t = HahnSeries::t(p);
        assert_eq!(t.inv(&int(10)).unwrap(), series(p, &[(-1, 1, 1)], None));
    }

    #[test]
    fn inverse_of_one_plus_t() {
        let p = 5;
        let x = series(p, &[(0, 1, 1), (1, 1, 1)], None);
        let inv = x.inv(&int(6)).unwrap();
        assert_eq!(inv.tail(), Some(&int(6)));
        let prod = x.mul(&inv);
        assert_eq!(prod.terms(), &[(int(0), c(p, 1))]);
        for k in 0..6 {
            assert_eq!(inv.coeff(&int(k)).unwrap(), c(p, if k % 2 == 0 { 1 } else { -1 }));
        }
    }

    #[test]
    fn product_tail_rule() {
        let p = 2;
        let x = series(p, &[(1, 1, 1)], Some(3));
        let y = series(p, &[(2, 1, 1)], Some(7));
        let z = x.mul(&y);
        // min(1 + 7, 2 + 3, 3 + 7)
        assert_eq!(z.tail(), Some(&int(5)));
        assert_eq!(z.terms(), &[(int(3), c(p, 1))]);
    }

    #[test]
    fn distance_examples() {
        // a = t + t^p + t^{p^2} + ... to precision 100, against t + t^p
        let p = 3;
        let a = series(p, &[(1, 1, 1), (3, 1, 1), (9, 1, 1), (27, 1, 1), (81, 1, 1)], Some(100));
        let y = series(p, &[(1, 1, 1), (3, 1, 1)], None);
        assert_eq!(hs_dist(&a, &y).unwrap(), GroupElement::from_ints(9, 1));
        assert!(hs_dist(&a, &a.clone()).unwrap_err().is_precision_loss());
        let exact = series(p, &[(1, 2, 1)], None);
        assert_eq!(hs_dist(&exact, &exact).unwrap(), GroupElement::Infinity);
    }

    #[test]
    fn residue_examples() {
        let p = 3;
        assert_eq!(series(p, &[(0, 1, 1), (1, 1, 1)], None).residue().unwrap(), c(p, 1));
        assert_eq!(series(p, &[(1, 2, 1), (1, 1, 1)], None).residue().unwrap(), c(p, 0));
        assert_eq!(
            series(p, &[(-1, 3, 1)], None).residue().unwrap_err(),
            Error::NegativeValuation
        );
        assert!(HahnSeries::unknown(p, rat(-1, 9)).residue().unwrap_err().is_precision_loss());
    }

    #[test]
    fn newton_examples() {
        let p = 3;
        // X^2 + t X + t^3
        let f = vec![
            series(p, &[(3, 1, 1)], None),
            series(p, &[(1, 1, 1)], None),
            HahnSeries::one(p),
        ];
        let s = newton_slopes(&f).unwrap();
        assert_eq!(s, vec![GroupElement::from_ints(1, 1), GroupElement::from_ints(2, 1)]);
        // X^p - X - 1/t
        for p in [2u32, 3, 5] {
            let mut f = vec![HahnSeries::zero(p); p as usize + 1];
            f[0] = series(p, &[(-1, 1, -1)], None);
            f[1] = series(p, &[(0, 1, -1)], None);
            f[p as usize] = HahnSeries::one(p);
            let s = newton_slopes(&f).unwrap();
            assert_eq!(s, vec![GroupElement::from_ints(-1, p as i64); p as usize]);
        }
        // X - t
        let f = vec![series(3, &[(1, 1, -1)], None), HahnSeries::one(3)];
        assert_eq!(newton_slopes(&f).unwrap(), vec![GroupElement::from_ints(1, 1)]);
    }

    #[test]
    fn newton_tolerates_bounded_coefficients_above_hull() {
        let p = 3;
        let f = vec![
            series(p, &[(2, 1, 1)], None),
            HahnSeries::unknown(p, int(5)),
            HahnSeries::one(p),
        ];
        assert_eq!(newton_slopes(&f).unwrap(), vec![GroupElement::from_ints(1, 1); 2]);
        let g = vec![
            series(p, &[(2, 1, 1)], None),
            HahnSeries::unknown(p, rat(1, 2)),
            HahnSeries::one(p),
        ];
        assert!(newton_slopes(&g).unwrap_err().is_precision_loss());
    }

    #[test]
    fn frobenius_roundtrip() {
        let x = series(5, &[(-1, 1, 2), (1, 3, 3)], Some(4));
        assert_eq!(x.frobenius().inv_frobenius(), x);
        assert_eq!(x.frobenius().tail(), Some(&int(20)));
    }

    #[test]
    fn display() {
        let x = series(3, &[(-1, 3, 1), (0, 1, 2), (2, 1, 1)], Some(5));
        assert_eq!(x.to_string(), "t^(-1/3) + 2 + t^2 + O(t^5)");
    }

    fn arb_series(p: u32) -> impl Strategy<Value = HahnSeries> {
        (
            prop::collection::vec((-6i64..12, 1i64..4, 1i64..p as i64), 0..5),
            prop::option::of(8i64..20),
        )
            .prop_map(move |(terms, tail)| {
                HahnSeries::from_terms(
                    p,
                    terms.into_iter().map(|(n, d, k)| (rat(n, d), Fq::from_i64(p, k))),
                    tail.map(int),
                )
            })
    }

    fn arb_poly_roots() -> impl Strategy<Value = Vec<(i64, i64, i64)>> {
        prop::collection::vec((-4i64..6, 1i64..3, 1i64..5), 1..5)
    }

    fn poly_from_roots(p: u32, roots: &[(i64, i64, i64)]) -> Vec<HahnSeries> {
        let mut coeffs = vec![HahnSeries::one(p)];
        for &(n, d, k) in roots {
            let z = HahnSeries::monomial(Fq::from_i64(p, k), rat(n, d));
            let mut next = vec![HahnSeries::zero(p); coeffs.len() + 1];
            for (i, ci) in coeffs.iter().enumerate() {
                next[i + 1] = next[i + 1].add(ci);
                next[i] = next[i].sub(&ci.mul(&z));
            }
            coeffs = next;
        }
        coeffs
    }

    proptest! {
        #[test]
        fn ultrametric(x in arb_series(5), y in arb_series(5), z in arb_series(5)) {
            if let (Ok(dxy), Ok(dyz), Ok(dxz)) = (hs_dist(&x, &y), hs_dist(&y, &z), hs_dist(&x, &z)) {
                prop_assert!(dxz >= dxy.clone().min(dyz.clone()));
                if dxy != dyz {
                    prop_assert_eq!(dxz, dxy.min(dyz));
                }
            }
        }

        #[test]
        fn valuation_is_multiplicative(x in arb_series(3), y in arb_series(3)) {
            if let (Ok(vx), Ok(vy)) = (x.val(), y.val()) {
                prop_assert_eq!(x.mul(&y).val().unwrap(), &vx + &vy);
                if let Ok(vs) = x.add(&y).val() {
                    prop_assert!(vs >= vx.min(vy));
                }
            }
        }

        #[test]
        fn newton_slopes_of_products(r1 in arb_poly_roots(), r2 in arb_poly_roots()) {
            let p = 5;
            let f = poly_from_roots(p, &r1);
            let g = poly_from_roots(p, &r2);
            let mut all = r1.clone();
            all.extend(r2.iter().cloned());
            let fg = poly_from_roots(p, &all);
            let mut expect = newton_slopes(&f).unwrap();
            expect.extend(newton_slopes(&g).unwrap());
            expect.sort();
            prop_assert_eq!(newton_slopes(&fg).unwrap(), expect.clone());
            let direct: Vec<_> = {
                let mut v: Vec<_> = all.iter().map(|&(n, d, _)| GroupElement::from_ints(n, d)).collect();
                v.sort();
                v
            };
            prop_assert_eq!(expect, direct);
        }
    }
}
