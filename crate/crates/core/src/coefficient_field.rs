//! Finite fields F_{p^m} used for series coefficients and residue fields.
//!
//! Every field is defined by the lexicographically least primitive polynomial
//! whose root is compatible with the roots chosen for all subfields, i.e. the
//! root of the defining polynomial of F_{p^d} is `alpha_m^((p^m-1)/(p^d-1))`
//! for every `d | m`. The embeddings between fields are therefore canonical,
//! so an element is always stored in its *minimal* subfield and two elements
//! are equal iff their representations are equal.
//!
//! Elements are coordinate vectors in the power basis of `alpha_m`.

mod known_moduli;

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, Mutex, OnceLock, RwLock};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Upper bound on `p^m` for constructed fields.
pub const MAX_FIELD_ORDER: u64 = 1 << 62;

/// Fields whose moduli are not in the precomputed table are searched for at
/// runtime, which is only practical below this order.
const SEARCH_LIMIT: u64 = 1 << 24;

type Coords = Vec<u32>;

struct SubfieldMap {
    /// Columns `beta^i` for `i < d`, where `beta` is the image of `alpha_d`.
    basis: Vec<Coords>,
}

/// Defining data of one field F_{p^m}.
pub struct FieldTable {
    p: u32,
    m: u32,
    order: u64,
    modulus: Coords,
    frob: Vec<Coords>,
    unit_factors: Vec<u64>,
    subfields: Mutex<HashMap<u32, Arc<SubfieldMap>>>,
    dlog: OnceLock<HashMap<Coords, u64>>,
}

impl FieldTable {
    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// Coefficients of the defining polynomial, constant term first (monic).
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    fn units(&self) -> u64 {
        self.order - 1
    }

    fn one(&self) -> Coords {
        let mut c = vec![0; self.m as usize];
        c[0] = 1;
        c
    }

    fn alpha(&self) -> Coords {
        if self.m == 1 {
            vec![(self.p - self.modulus[0]) % self.p]
        } else {
            let mut c = vec![0; self.m as usize];
            c[1] = 1;
            c
        }
    }

    fn add(&self, a: &[u32], b: &[u32]) -> Coords {
        a.iter().zip(b).map(|(x, y)| (x + y) % self.p).collect()
    }

    fn neg(&self, a: &[u32]) -> Coords {
        a.iter().map(|x| (self.p - x) % self.p).collect()
    }

    fn mul(&self, a: &[u32], b: &[u32]) -> Coords {
        if self.m == 1 {
            return vec![((a[0] as u64 * b[0] as u64) % self.p as u64) as u32];
        }
        polymulmod(a, b, &self.modulus, self.p)
    }

    fn pow(&self, a: &[u32], mut e: u64) -> Coords {
        let mut result = self.one();
        let mut b = a.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(&result, &b);
            }
            e >>= 1;
            if e > 0 {
                b = self.mul(&b, &b);
            }
        }
        result
    }

    fn frobenius(&self, a: &[u32]) -> Coords {
        let mut out = vec![0u64; self.m as usize];
        for (j, &c) in a.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (i, &f) in self.frob[j].iter().enumerate() {
                out[i] += c as u64 * f as u64;
            }
        }
        out.into_iter().map(|x| (x % self.p as u64) as u32).collect()
    }

    fn subfield_map(&self, d: u32) -> Arc<SubfieldMap> {
        let mut cache = self.subfields.lock().unwrap();
        if let Some(s) = cache.get(&d) {
            return s.clone();
        }
        let sub_units = (self.p as u64).pow(d) - 1;
        let beta = self.pow(&self.alpha(), self.units() / sub_units);
        let mut basis = Vec::with_capacity(d as usize);
        let mut cur = self.one();
        for _ in 0..d {
            basis.push(cur.clone());
            cur = self.mul(&cur, &beta);
        }
        let map = Arc::new(SubfieldMap { basis });
        cache.insert(d, map.clone());
        map
    }

    /// Discrete logarithm base `alpha` by baby-step giant-step.
    fn log(&self, a: &[u32]) -> u64 {
        let n = self.units();
        let s = ((n as f64).sqrt() as u64).max(1) + 1;
        let table = self.dlog.get_or_init(|| {
            let alpha = self.alpha();
            let mut t = HashMap::with_capacity(s as usize);
            let mut cur = self.one();
            for j in 0..s {
                t.entry(cur.clone()).or_insert(j);
                cur = self.mul(&cur, &alpha);
            }
            t
        });
        // giant step alpha^(-s)
        let giant = self.pow(&self.alpha(), (n - s % n) % n);
        let mut cur = a.to_vec();
        for i in 0..=s {
            if let Some(&j) = table.get(&cur) {
                return (i * s + j) % n;
            }
            cur = self.mul(&cur, &giant);
        }
        unreachable!("discrete log of a nonzero element always exists")
    }
}

type Registry = RwLock<HashMap<(u32, u32), Arc<FieldTable>>>;

fn registry() -> &'static Registry {
    static REG: OnceLock<Registry> = OnceLock::new();
    REG.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Returns the (cached) field F_{p^m}, building it and its subfields on first
/// use.
pub fn field(p: u32, m: u32) -> Result<Arc<FieldTable>> {
    if let Some(f) = registry().read().unwrap().get(&(p, m)) {
        return Ok(f.clone());
    }
    if m == 0 || p < 2 || !is_prime(p as u64) {
        return Err(Error::InvalidArgument(format!("no field F_{p}^{m}")));
    }
    let order = match (p as u64).checked_pow(m) {
        Some(q) if q <= MAX_FIELD_ORDER => q,
        _ => return Err(Error::FieldTooLarge { p, m }),
    };
    let subfields: Vec<Arc<FieldTable>> = proper_divisors(m)
        .into_iter()
        .map(|d| field(p, d))
        .collect::<Result<_>>()?;
    let unit_factors = prime_factors(order - 1);
    let modulus = match known_moduli::lookup(p, m) {
        Some(c) => c.to_vec(),
        None if order <= SEARCH_LIMIT => search_modulus(p, m, &unit_factors, &subfields),
        None => return Err(Error::FieldTooLarge { p, m }),
    };
    let table = Arc::new(assemble(p, m, order, modulus, unit_factors));
    let mut reg = registry().write().unwrap();
    Ok(reg.entry((p, m)).or_insert(table).clone())
}

fn assemble(p: u32, m: u32, order: u64, modulus: Coords, unit_factors: Vec<u64>) -> FieldTable {
    let mut t = FieldTable {
        p,
        m,
        order,
        modulus,
        frob: Vec::new(),
        unit_factors,
        subfields: Mutex::new(HashMap::new()),
        dlog: OnceLock::new(),
    };
    let mut frob = Vec::with_capacity(m as usize);
    for j in 0..m as usize {
        let mut basis = vec![0; m as usize];
        basis[j] = 1;
        frob.push(t.pow(&basis, p as u64));
    }
    t.frob = frob;
    t
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

fn proper_divisors(m: u32) -> Vec<u32> {
    (1..m).filter(|d| m.is_multiple_of(*d)).collect()
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

// Dense polynomial arithmetic over F_p modulo a monic polynomial of degree m.
fn polymulmod(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Coords {
    let m = modulus.len() - 1;
    let p64 = p as u64;
    let mut prod = vec![0u64; 2 * m];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p64;
        }
    }
    for k in (m..2 * m).rev() {
        let c = prod[k];
        if c == 0 {
            continue;
        }
        prod[k] = 0;
        for i in 0..m {
            let sub = c * modulus[i] as u64 % p64;
            prod[k - m + i] = (prod[k - m + i] + p64 - sub) % p64;
        }
    }
    prod.truncate(m);
    prod.into_iter().map(|x| x as u32).collect()
}

fn polypowmod(base: &[u32], mut e: u64, modulus: &[u32], p: u32) -> Coords {
    let m = modulus.len() - 1;
    let mut result = vec![0u32; m];
    result[0] = 1;
    let mut b = base.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            result = polymulmod(&result, &b, modulus, p);
        }
        e >>= 1;
        if e > 0 {
            b = polymulmod(&b, &b, modulus, p);
        }
    }
    result
}

fn is_one(v: &[u32]) -> bool {
    v[0] == 1 && v[1..].iter().all(|&c| c == 0)
}

/// Evaluates the monic `sub_modulus` at `x` inside F_p[X]/(modulus).
fn eval_modulus_at(sub_modulus: &[u32], x: &[u32], modulus: &[u32], p: u32) -> Coords {
    let m = modulus.len() - 1;
    let mut acc = vec![0u32; m];
    for &c in sub_modulus.iter().rev() {
        acc = polymulmod(&acc, x, modulus, p);
        acc[0] = (acc[0] + c) % p;
    }
    acc
}

/// Lexicographically least (on `c_{m-1}, ..., c_0`) monic primitive
/// polynomial of degree `m` compatible with the given subfields.
pub(crate) fn search_modulus(
    p: u32,
    m: u32,
    unit_factors: &[u64],
    subfields: &[Arc<FieldTable>],
) -> Coords {
    let units = (p as u64).pow(m) - 1;
    if m == 1 {
        let g = (1..p)
            .find(|&g| {
                unit_factors
                    .iter()
                    .all(|&r| mod_pow(g as u64, units / r, p as u64) != 1)
            })
            .expect("primitive root exists");
        return vec![(p - g) % p, 1];
    }
    let mut x = vec![0u32; m as usize];
    x[1] = 1;
    // idx has c_{m-1} as its most significant base-p digit, so increasing
    // idx walks the lexicographic order.
    'search: for idx in 0..(p as u64).pow(m) {
        let mut coeffs = vec![0u32; m as usize + 1];
        coeffs[m as usize] = 1;
        let mut t = idx;
        for slot in coeffs.iter_mut().take(m as usize) {
            *slot = (t % p as u64) as u32;
            t /= p as u64;
        }
        if coeffs[0] == 0 {
            continue;
        }
        for sub in subfields {
            let e = units / ((p as u64).pow(sub.m) - 1);
            let beta = polypowmod(&x, e, &coeffs, p);
            if eval_modulus_at(&sub.modulus, &beta, &coeffs, p)
                .iter()
                .any(|&c| c != 0)
            {
                continue 'search;
            }
        }
        if !is_one(&polypowmod(&x, units, &coeffs, p)) {
            continue;
        }
        for &r in unit_factors {
            if is_one(&polypowmod(&x, units / r, &coeffs, p)) {
                continue 'search;
            }
        }
        return coeffs;
    }
    unreachable!("a compatible primitive polynomial always exists")
}

/// An element of a finite field of characteristic p, stored in its minimal
/// subfield.
#[derive(Clone)]
pub struct Fq {
    field: Arc<FieldTable>,
    c: Coords,
}

impl Fq {
    fn raw(field: Arc<FieldTable>, c: Coords) -> Self {
        Fq { field, c }
    }

    pub fn zero(p: u32) -> Self {
        Fq::raw(field(p, 1).expect("prime field"), vec![0])
    }

    pub fn one(p: u32) -> Self {
        Fq::from_i64(p, 1)
    }

    pub fn from_i64(p: u32, n: i64) -> Self {
        let r = n.rem_euclid(p as i64) as u32;
        Fq::raw(field(p, 1).expect("prime field"), vec![r])
    }

    /// The canonical generator `alpha_m` of the multiplicative group of
    /// F_{p^m}.
    pub fn generator(p: u32, m: u32) -> Result<Self> {
        let f = field(p, m)?;
        let a = f.alpha();
        Ok(normalize(&f, a))
    }

    /// Coordinates over F_p in the basis `1, alpha_m, ..., alpha_m^(m-1)`.
    pub fn from_coords(p: u32, m: u32, coords: &[u32]) -> Result<Self> {
        let f = field(p, m)?;
        let mut c: Coords = coords.iter().map(|x| x % p).collect();
        c.resize(m as usize, 0);
        Ok(normalize(&f, c))
    }

    pub fn p(&self) -> u32 {
        self.field.p
    }

    /// Degree of the element over F_p.
    pub fn degree(&self) -> u32 {
        self.field.m
    }

    /// Degree of F_{p^m0}(self) over F_{p^m0}.
    pub fn degree_over(&self, m0: u32) -> u32 {
        self.degree().lcm(&m0) / m0
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|&x| x == 0)
    }

    pub fn is_one(&self) -> bool {
        self.field.m == 1 && self.c[0] == 1
    }

    /// Integer value when the element lies in F_p.
    pub fn as_prime(&self) -> Option<u32> {
        (self.field.m == 1).then_some(self.c[0])
    }

    /// Coordinates inside F_{p^m}; `m` must be a multiple of the element's
    /// degree.
    pub fn coords_in(&self, m: u32) -> Result<Coords> {
        if !m.is_multiple_of(self.degree()) {
            return Err(Error::NotContained);
        }
        let f = field(self.p(), m)?;
        Ok(embed(self, &f))
    }

    fn common(&self, other: &Fq) -> Arc<FieldTable> {
        assert_eq!(self.p(), other.p(), "mixed characteristics");
        let m = self.degree().lcm(&other.degree());
        if m == self.degree() {
            self.field.clone()
        } else if m == other.degree() {
            other.field.clone()
        } else {
            field(self.p(), m).expect("compositum of coefficient fields too large")
        }
    }

    pub fn add(&self, other: &Fq) -> Fq {
        let f = self.common(other);
        let s = f.add(&embed(self, &f), &embed(other, &f));
        normalize(&f, s)
    }

    pub fn neg(&self) -> Fq {
        Fq::raw(self.field.clone(), self.field.neg(&self.c))
    }

    pub fn sub(&self, other: &Fq) -> Fq {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Fq) -> Fq {
        if self.is_zero() || other.is_zero() {
            return Fq::zero(self.p());
        }
        let f = self.common(other);
        let prod = f.mul(&embed(self, &f), &embed(other, &f));
        normalize(&f, prod)
    }

    pub fn inv(&self) -> Option<Fq> {
        if self.is_zero() {
            return None;
        }
        let f = &self.field;
        Some(Fq::raw(f.clone(), f.pow(&self.c, f.units() - 1)))
    }

    pub fn div(&self, other: &Fq) -> Option<Fq> {
        other.inv().map(|i| self.mul(&i))
    }

    pub fn pow(&self, e: i64) -> Fq {
        if self.is_zero() {
            return if e == 0 { Fq::one(self.p()) } else { self.clone() };
        }
        let f = &self.field;
        let n = f.units() as i128;
        let k = (e as i128).rem_euclid(n) as u64;
        normalize(f, f.pow(&self.c, k))
    }

    pub fn frobenius(&self) -> Fq {
        Fq::raw(self.field.clone(), self.field.frobenius(&self.c))
    }

    /// The unique p-th root.
    pub fn inv_frobenius(&self) -> Fq {
        let mut x = self.c.clone();
        for _ in 1..self.degree() {
            x = self.field.frobenius(&x);
        }
        Fq::raw(self.field.clone(), x)
    }

    /// Absolute trace of `self` viewed in F_{p^m}.
    pub fn trace(&self, m: u32) -> Fq {
        debug_assert_eq!(m % self.degree(), 0);
        let mut acc = Fq::zero(self.p());
        let mut x = self.clone();
        for _ in 0..m {
            acc = acc.add(&x);
            x = x.frobenius();
        }
        acc
    }

    /// All elements of F_{p^m}; only sensible for small fields.
    pub fn elements(p: u32, m: u32) -> Result<Vec<Fq>> {
        let f = field(p, m)?;
        let mut out = Vec::with_capacity(f.order as usize);
        for idx in 0..f.order {
            let mut c = vec![0u32; m as usize];
            let mut t = idx;
            for slot in c.iter_mut() {
                *slot = (t % p as u64) as u32;
                t /= p as u64;
            }
            out.push(normalize(&f, c));
        }
        Ok(out)
    }

    /// Multiplicative order (0 for zero).
    pub fn mult_order(&self) -> u64 {
        if self.is_zero() {
            return 0;
        }
        let f = &self.field;
        let mut ord = f.units();
        for &r in &f.unit_factors {
            while ord.is_multiple_of(r) && is_one(&f.pow(&self.c, ord / r)) {
                ord /= r;
            }
        }
        ord
    }
}

fn embed(x: &Fq, target: &Arc<FieldTable>) -> Coords {
    if x.field.m == target.m {
        return x.c.clone();
    }
    debug_assert_eq!(target.m % x.field.m, 0);
    let map = target.subfield_map(x.field.m);
    let mut out = vec![0u64; target.m as usize];
    for (i, &c) in x.c.iter().enumerate() {
        if c == 0 {
            continue;
        }
        for (k, &b) in map.basis[i].iter().enumerate() {
            out[k] += c as u64 * b as u64;
        }
    }
    out.into_iter().map(|v| (v % target.p as u64) as u32).collect()
}

fn normalize(f: &Arc<FieldTable>, c: Coords) -> Fq {
    if c.iter().all(|&x| x == 0) {
        return Fq::zero(f.p);
    }
    if f.m == 1 {
        return Fq::raw(f.clone(), c);
    }
    // x^(p^d) for increasing d; the first fixed one gives the minimal field.
    let mut x = c.clone();
    for d in 1..f.m {
        x = f.frobenius(&x);
        if f.m.is_multiple_of(d) && x == c {
            let sub = field(f.p, d).expect("subfield");
            let map = f.subfield_map(d);
            let coords = solve_in_basis(&map.basis, &c, f.p)
                .expect("a Frobenius-fixed element lies in the subfield");
            return Fq::raw(sub, coords);
        }
    }
    Fq::raw(f.clone(), c)
}

/// Solves `sum_i x_i * basis[i] = target` over F_p.
fn solve_in_basis(basis: &[Coords], target: &[u32], p: u32) -> Option<Coords> {
    let rows: Vec<Vec<u32>> = (0..target.len())
        .map(|r| {
            let mut row: Vec<u32> = basis.iter().map(|col| col[r]).collect();
            row.push(target[r]);
            row
        })
        .collect();
    solve_mod_p(rows, p)
}

impl PartialEq for Fq {
    fn eq(&self, other: &Self) -> bool {
        self.field.p == other.field.p && self.field.m == other.field.m && self.c == other.c
    }
}

impl Eq for Fq {}

impl Hash for Fq {
    fn hash<H: Hasher>(&self, state: &mut H) {
        (self.field.p, self.field.m, &self.c).hash(state);
    }
}

/// Elements of smaller degree first, then the packed integer `sum c_i p^i`.
/// This is the "least root" order used for deterministic branch choice.
impl Ord for Fq {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.field.p, self.field.m)
            .cmp(&(other.field.p, other.field.m))
            .then_with(|| self.c.iter().rev().cmp(other.c.iter().rev()))
    }
}

impl PartialOrd for Fq {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// F_p elements print as integers, others as polynomials in the field
/// generator, e.g. `2+g3^2`.
impl fmt::Display for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.field.m == 1 {
            return write!(f, "{}", self.c[0]);
        }
        let m = self.field.m;
        let mut first = true;
        for (i, &c) in self.c.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            match (i, c) {
                (0, _) => write!(f, "{c}")?,
                (1, 1) => write!(f, "g{m}")?,
                (1, _) => write!(f, "{c}*g{m}")?,
                (_, 1) => write!(f, "g{m}^{i}")?,
                _ => write!(f, "{c}*g{m}^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Fq<{}>({})", self.p(), self)
    }
}

impl Serialize for Fq {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Residue field descriptor: F_{p^m}, possibly with one adjoined
/// transcendental generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueFieldDesc {
    pub p: u32,
    pub m: u32,
    pub transcendental: bool,
}

impl ResidueFieldDesc {
    /// Degree `[self : sub]` for descriptors with equal transcendence flag.
    pub fn degree_over(&self, sub: &ResidueFieldDesc) -> Result<u32> {
        if self.p != sub.p || self.transcendental != sub.transcendental {
            return Err(Error::InvalidArgument(
                "residue fields are not comparable".into(),
            ));
        }
        if !self.m.is_multiple_of(sub.m) {
            return Err(Error::NotContained);
        }
        Ok(self.m / sub.m)
    }
}

/// Smallest m with n | p^m - 1 (n coprime to p).
pub fn unity_degree(p: u32, n: u32) -> u32 {
    assert!(n > 0 && !n.is_multiple_of(p));
    let n = n as u64;
    let mut m = 1;
    let mut pm = p as u64 % n;
    while pm % n != 1 % n {
        pm = pm * p as u64 % n;
        m += 1;
    }
    m
}

/// Canonical primitive n-th root of unity (n coprime to p).
pub fn root_of_unity(p: u32, n: u32) -> Result<Fq> {
    let m = unity_degree(p, n);
    let f = field(p, m)?;
    let e = f.units() / n as u64;
    Ok(normalize(&f, f.pow(&f.alpha(), e)))
}

/// Solves `x^p - x = c`. Returns the least root (in `Fq` order) together with
/// the degree `d in {1, p}` of the extension of F_{p^m} needed to contain it.
pub fn as_residue_solve(c: &Fq, m: u32) -> Result<(Fq, u32)> {
    let p = c.p();
    let m = m.lcm(&c.degree());
    let d = if c.trace(m).is_zero() { 1 } else { p };
    let big = m * d;
    let f = field(p, big)?;
    // x -> x^p - x is F_p-linear; solve in coordinates.
    let n = big as usize;
    let rhs = embed(c, &f);
    let rows: Vec<Vec<u32>> = (0..n)
        .map(|i| {
            let mut row: Vec<u32> = (0..n)
                .map(|j| {
                    let diag = u32::from(i == j);
                    (f.frob[j][i] + p - diag) % p
                })
                .collect();
            row.push(rhs[i]);
            row
        })
        .collect();
    let sol = solve_mod_p(rows, p).ok_or_else(|| {
        Error::InvalidArgument("Artin-Schreier equation has no solution".into())
    })?;
    let x0 = normalize(&f, sol);
    let best = (0..p as i64)
        .map(|i| x0.add(&Fq::from_i64(p, i)))
        .min()
        .expect("p roots");
    Ok((best, d))
}

/// Gaussian elimination over F_p; returns one solution with free variables 0.
fn solve_mod_p(mut rows: Vec<Vec<u32>>, p: u32) -> Option<Coords> {
    let n = rows.len();
    let cols = rows[0].len() - 1;
    let p64 = p as u64;
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == n {
            break;
        }
        let Some(piv) = (r..n).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, piv);
        let iv = mod_pow(rows[r][c] as u64, p64 - 2, p64);
        for x in rows[r].iter_mut() {
            *x = (*x as u64 * iv % p64) as u32;
        }
        let pivot = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && row[c] != 0 {
                let factor = row[c] as u64;
                for (x, &y) in row.iter_mut().zip(&pivot) {
                    let sub = factor * y as u64 % p64;
                    *x = ((*x as u64 + p64 - sub) % p64) as u32;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if rows[r..].iter().any(|row| row[cols] != 0) {
        return None;
    }
    let mut sol = vec![0u32; cols];
    for (i, &c) in pivots.iter().enumerate() {
        sol[c] = rows[i][cols];
    }
    Some(sol)
}

fn mod_pow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = (r as u128 * b as u128 % m as u128) as u64;
        }
        b = (b as u128 * b as u128 % m as u128) as u64;
        e >>= 1;
    }
    r
}

/// A solution of `y^n = c` in the smallest extension of F_{p^m} that has
/// one; returns the least such root and the extension degree.
pub fn nth_root_coeff(c: &Fq, n: u32, m: u32) -> Result<(Fq, u32)> {
    if n == 0 {
        return Err(Error::InvalidArgument("zeroth root".into()));
    }
    let p = c.p();
    let m = m.lcm(&c.degree());
    if c.is_zero() {
        return Ok((Fq::zero(p), 1));
    }
    let mut n_rest = n;
    let mut base = c.clone();
    while n_rest.is_multiple_of(p) {
        n_rest /= p;
        base = base.inv_frobenius();
    }
    if n_rest == 1 {
        return Ok((base, 1));
    }
    for d in 1.. {
        let big = m * d;
        let f = field(p, big)?;
        let units = f.units();
        let k = f.log(&embed(&base, &f));
        let g = (n_rest as u64).gcd(&units);
        if k % g != 0 {
            continue;
        }
        let modulus = units / g;
        let j0 = if modulus == 1 {
            0
        } else {
            let inv = mod_inverse((n_rest as u64 / g) % modulus, modulus);
            ((k / g) as u128 * inv as u128 % modulus as u128) as u64
        };
        let alpha = f.alpha();
        let best = (0..g)
            .map(|t| normalize(&f, f.pow(&alpha, (j0 + t * modulus) % units)))
            .min()
            .expect("g >= 1");
        return Ok((best, d));
    }
    unreachable!()
}

fn mod_inverse(a: u64, m: u64) -> u64 {
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let qt = old_r / r;
        (old_r, r) = (r, old_r - qt * r);
        (old_s, s) = (s, old_s - qt * s);
    }
    old_s.rem_euclid(m as i128) as u64
}

/// All roots in F_{p^m} of the polynomial with coefficients `coeffs`
/// (constant first), by exhaustive search.
pub fn roots_in_field(coeffs: &[Fq], p: u32, m: u32) -> Result<Vec<Fq>> {
    Ok(Fq::elements(p, m)?
        .into_iter()
        .filter(|x| eval_poly(coeffs, x).is_zero())
        .collect())
}

pub fn eval_poly(coeffs: &[Fq], x: &Fq) -> Fq {
    let p = x.p();
    coeffs
        .iter()
        .rev()
        .fold(Fq::zero(p), |acc, c| acc.mul(x).add(c))
}
