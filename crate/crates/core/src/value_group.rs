//! Ordered value groups: Q with a top element, extended lexicographically by
//! one formal positive infinitesimal `eps`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Parses `"a/b"`, `"-a"` or `"a"`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// An element of `(Q x Z)_lex` or the top element.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum GroupElement {
    Finite { main: BigRational, eps: i64 },
    Infinity,
}

impl GroupElement {
    pub fn rational(q: BigRational) -> Self {
        GroupElement::Finite { main: q, eps: 0 }
    }

    pub fn new(main: BigRational, eps: i64) -> Self {
        GroupElement::Finite { main, eps }
    }

    pub fn from_ints(n: i64, d: i64) -> Self {
        GroupElement::rational(rat(n, d))
    }

    pub fn zero() -> Self {
        GroupElement::rational(BigRational::zero())
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, GroupElement::Infinity)
    }

    pub fn main(&self) -> Option<&BigRational> {
        match self {
            GroupElement::Finite { main, .. } => Some(main),
            GroupElement::Infinity => None,
        }
    }

    pub fn eps(&self) -> i64 {
        match self {
            GroupElement::Finite { eps, .. } => *eps,
            GroupElement::Infinity => 0,
        }
    }

    /// The rational value when `eps == 0`.
    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            GroupElement::Finite { main, eps: 0 } => Some(main),
            _ => None,
        }
    }

    pub fn scale(&self, n: i64) -> GroupElement {
        match self {
            GroupElement::Infinity => GroupElement::Infinity,
            GroupElement::Finite { main, eps } => GroupElement::Finite {
                main: main * BigInt::from(n),
                eps: eps * n,
            },
        }
    }

    /// `(gamma, -1)`: just below `gamma`, above every smaller rational.
    pub fn infinitesimally_below(&self) -> Result<GroupElement> {
        match self {
            GroupElement::Finite { main, eps: 0 } => Ok(GroupElement::new(main.clone(), -1)),
            GroupElement::Finite { .. } => Err(Error::AlreadyTranscendental),
            GroupElement::Infinity => Err(Error::InvalidArgument("infinite gamma".into())),
        }
    }
}

pub fn ge_cmp(a: &GroupElement, b: &GroupElement) -> Ordering {
    a.cmp(b)
}

pub fn ge_add(a: &GroupElement, b: &GroupElement) -> GroupElement {
    a + b
}

pub fn ge_scale(n: i64, a: &GroupElement) -> GroupElement {
    a.scale(n)
}

impl Ord for GroupElement {
    fn cmp(&self, other: &Self) -> Ordering {
        use GroupElement::*;
        match (self, other) {
            (Infinity, Infinity) => Ordering::Equal,
            (Infinity, _) => Ordering::Greater,
            (_, Infinity) => Ordering::Less,
            (Finite { main: a, eps: x }, Finite { main: b, eps: y }) => {
                a.cmp(b).then(x.cmp(y))
            }
        }
    }
}

impl PartialOrd for GroupElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &GroupElement {
    type Output = GroupElement;

    fn add(self, rhs: &GroupElement) -> GroupElement {
        use GroupElement::*;
        match (self, rhs) {
            (Finite { main: a, eps: x }, Finite { main: b, eps: y }) => Finite {
                main: a + b,
                eps: x + y,
            },
            _ => Infinity,
        }
    }
}

impl Add for GroupElement {
    type Output = GroupElement;

    fn add(self, rhs: GroupElement) -> GroupElement {
        &self + &rhs
    }
}

impl Neg for &GroupElement {
    type Output = GroupElement;

    /// Panics on infinity.
    fn neg(self) -> GroupElement {
        assert!(!self.is_infinity(), "negating infinity");
        self.scale(-1)
    }
}

impl Sub for &GroupElement {
    type Output = GroupElement;

    fn sub(self, rhs: &GroupElement) -> GroupElement {
        self + &(-rhs)
    }
}

impl From<BigRational> for GroupElement {
    fn from(q: BigRational) -> Self {
        GroupElement::rational(q)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupElement::Infinity => write!(f, "inf"),
            GroupElement::Finite { main, eps: 0 } => write!(f, "{main}"),
            GroupElement::Finite { main, eps } => write!(f, "({main}, {eps})"),
        }
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for GroupElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            GroupElement::Infinity => s.serialize_str("inf"),
            GroupElement::Finite { main, eps } => {
                let mut m = s.serialize_map(Some(2))?;
                m.serialize_entry("main", &main.to_string())?;
                m.serialize_entry("eps", eps)?;
                m.end()
            }
        }
    }
}

impl<'de> Deserialize<'de> for GroupElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Tag(String),
            Pair { main: String, eps: i64 },
        }
        match Repr::deserialize(d)? {
            Repr::Tag(s) if s == "inf" => Ok(GroupElement::Infinity),
            Repr::Tag(s) => parse_rational(&s)
                .map(GroupElement::rational)
                .map_err(de::Error::custom),
            Repr::Pair { main, eps } => parse_rational(&main)
                .map(|m| GroupElement::new(m, eps))
                .map_err(de::Error::custom),
        }
    }
}

/// Strips every factor `p` from `n`.
pub fn prime_to_p(n: &BigInt, p: u32) -> BigInt {
    let pb = BigInt::from(p);
    let mut n = n.abs();
    if n.is_zero() {
        return n;
    }
    while (&n % &pb).is_zero() {
        n /= &pb;
    }
    n
}

/// A subgroup `(1/m)Z` or `(1/m)Z[1/p]`, optionally plus the direct summand
/// `Z * j * gamma` for a gamma with nonzero infinitesimal part.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValueGroupDesc {
    pub p: u32,
    pub denom: u64,
    pub p_divisible: bool,
    pub gamma_mult: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub gamma: Option<GroupElement>,
}

impl ValueGroupDesc {
    pub fn integers(p: u32) -> Self {
        ValueGroupDesc {
            p,
            denom: 1,
            p_divisible: false,
            gamma_mult: 0,
            gamma: None,
        }
    }

    pub fn p_integers(p: u32) -> Self {
        ValueGroupDesc {
            p_divisible: true,
            ..ValueGroupDesc::integers(p)
        }
    }

    pub fn with_denom(mut self, denom: u64) -> Self {
        assert!(denom > 0);
        self.denom = if self.p_divisible {
            prime_to_p(&BigInt::from(denom), self.p).to_u64().unwrap()
        } else {
            denom
        };
        self
    }

    /// Adjoins `Z * j * gamma`.
    pub fn with_gamma(mut self, gamma: GroupElement, j: u64) -> Self {
        assert!(gamma.eps() != 0 || j == 0, "gamma summand needs an infinitesimal part");
        self.gamma_mult = j;
        self.gamma = (j > 0).then_some(gamma);
        self
    }

    fn effective_den(&self, q: &BigRational) -> BigInt {
        if self.p_divisible {
            prime_to_p(q.denom(), self.p)
        } else {
            q.denom().clone()
        }
    }

    pub fn contains_rational(&self, q: &BigRational) -> bool {
        (BigInt::from(self.denom) % self.effective_den(q)).is_zero()
    }

    /// Order of `q` modulo the rational part.
    fn rational_order(&self, q: &BigRational) -> u64 {
        let d = self.effective_den(q);
        let m = BigInt::from(self.denom);
        (&d / d.gcd(&m)).to_u64().expect("order fits in u64")
    }

    pub fn contains(&self, a: &GroupElement) -> bool {
        match a {
            GroupElement::Infinity => false,
            GroupElement::Finite { .. } => order_mod(a, self) == Some(1),
        }
    }

    /// Smallest group containing `self` and `q`.
    pub fn join_rational(&self, q: &BigRational) -> ValueGroupDesc {
        let d = self.effective_den(q);
        let m = BigInt::from(self.denom).lcm(&d);
        let mut out = self.clone();
        out.denom = m.to_u64().expect("denominator fits in u64");
        out
    }
}

/// Least `e >= 1` with `e * alpha` in `g`.
pub fn order_mod(alpha: &GroupElement, g: &ValueGroupDesc) -> Option<u64> {
    let (main, eps) = match alpha {
        GroupElement::Infinity => return None,
        GroupElement::Finite { main, eps } => (main, *eps),
    };
    if eps == 0 {
        return Some(g.rational_order(main));
    }
    let gamma = g.gamma.as_ref()?;
    if g.gamma_mult == 0 {
        return None;
    }
    let step = g.gamma_mult as i64 * gamma.eps();
    // e * eps must be a multiple of step; then k = e * eps / step copies of
    // j * gamma are removed and the remainder must be rational-part torsion.
    let e1 = (step / step.gcd(&eps)).unsigned_abs();
    let k = e1 as i64 * eps / step;
    let gamma_main = gamma.main().expect("finite gamma");
    let r = main * BigInt::from(e1) - gamma_main * BigInt::from(k * g.gamma_mult as i64);
    Some(e1 * g.rational_order(&r))
}

/// Index `(g1 : g2)`.
pub fn subgroup_index(g1: &ValueGroupDesc, g2: &ValueGroupDesc) -> Result<u64> {
    if g1.p != g2.p {
        return Err(Error::InvalidArgument("groups over different primes".into()));
    }
    let rational_index = match (g1.p_divisible, g2.p_divisible) {
        (false, true) => return Err(Error::NotContained),
        (true, false) => {
            if !g1.denom.is_multiple_of(g2.denom) {
                return Err(Error::NotContained);
            }
            return Err(Error::InfiniteIndex);
        }
        _ => {
            if !g1.denom.is_multiple_of(g2.denom) {
                return Err(Error::NotContained);
            }
            g1.denom / g2.denom
        }
    };
    let gamma_index = match (g1.gamma_mult, g2.gamma_mult) {
        (0, 0) => 1,
        (0, _) => return Err(Error::NotContained),
        (_, 0) => return Err(Error::InfiniteIndex),
        (j1, j2) => {
            if g1.gamma != g2.gamma {
                let (a, b) = (g1.gamma.as_ref().unwrap(), g2.gamma.as_ref().unwrap());
                // Same direction only: b must be a rational multiple shift of a.
                if a.eps() != b.eps() {
                    return Err(Error::InvalidArgument(
                        "gamma summands with different infinitesimal parts".into(),
                    ));
                }
                let diff = b.main().unwrap() - a.main().unwrap();
                if !g1.contains_rational(&(diff * BigInt::from(j2))) {
                    return Err(Error::NotContained);
                }
            }
            if j2 % j1 != 0 {
                return Err(Error::NotContained);
            }
            j2 / j1
        }
    };
    Ok(rational_index * gamma_index)
}

/// `n / d` as a rational, for counts.
pub fn ratio(n: u64, d: u64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn is_integer(q: &BigRational) -> bool {
    q.denom().is_one()
}
