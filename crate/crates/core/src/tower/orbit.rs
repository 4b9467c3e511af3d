//! Conjugates of finite Puiseux sums `sum c_i t^{r_i}` over the henselian base.
//!
//! Over `F_q((t))` (or its perfect hull) the Galois group of the field
//! generated by `t^{1/D}` and a finite coefficient extension is generated by
//! `t^{1/D} -> zeta t^{1/D}` and the q-Frobenius on coefficients. The orbit of
//! `x` under that group gives its separable degree; the orbit under the roots
//! of unity alone (the inertia part) gives the tame ramification index.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use crate::coefficient_field::{root_of_unity, unity_degree, Fq};
use crate::error::Result;
use crate::hahn_series::HahnSeries;

pub(crate) struct Orbit {
    /// Distinct conjugates, starting with `x` itself.
    pub images: Vec<HahnSeries>,
    pub inertia: usize,
    /// Inseparable degree `p^s` (always 1 over a perfect base).
    pub insep: u64,
}

impl Orbit {
    pub fn degree(&self) -> u64 {
        self.images.len() as u64 * self.insep
    }

    pub fn e(&self) -> u64 {
        self.inertia as u64 * self.insep
    }

    pub fn f(&self) -> u64 {
        (self.images.len() / self.inertia) as u64
    }
}

/// Largest orbit enumerated; bigger towers are out of scope.
const MAX_GROUP: u64 = 20_000;

pub(crate) fn exact_orbit(x: &HahnSeries, m0: u32, perfect: bool) -> Result<Orbit> {
    let p = x.p();
    let pb = BigInt::from(p);
    let mut d_prime = BigInt::one();
    let mut insep_exp = 0i64;
    for (e, _) in x.terms() {
        let mut d = e.denom().clone();
        let mut s = 0;
        while (&d % &pb) == BigInt::from(0) {
            d /= &pb;
            s += 1;
        }
        d_prime = d_prime.lcm(&d);
        insep_exp = insep_exp.max(s);
    }
    let d = d_prime.to_u32().ok_or_else(|| {
        crate::Error::UnsupportedTower("exponent denominators too large".into())
    })?;
    let insep = if perfect { 1 } else { (p as u64).pow(insep_exp as u32) };
    let coeff_deg = x.coefficient_degree();
    let mut big = (m0 as u64).lcm(&(coeff_deg as u64));
    if d > 1 {
        big = big.lcm(&(unity_degree(p, d) as u64));
    }
    let steps = big / m0 as u64;
    if steps * d as u64 > MAX_GROUP {
        return Err(crate::Error::UnsupportedTower(format!(
            "Galois group of order {} too large to enumerate",
            steps * d as u64
        )));
    }
    let zeta = if d > 1 { root_of_unity(p, d)? } else { Fq::one(p) };
    // residue of r * D modulo D, with p-power denominators inverted mod D
    let rho: Vec<u64> = x
        .terms()
        .iter()
        .map(|(e, _)| twist_index(e, d))
        .collect();
    let zeta_pows: Vec<Fq> = (0..d).map(|k| zeta.pow(k as i64)).collect();
    let mut images: Vec<HahnSeries> = Vec::new();
    let mut inertia = 0usize;
    let mut frob_coeffs: Vec<Fq> = x.terms().iter().map(|(_, c)| c.clone()).collect();
    for k in 0..steps {
        for j in 0..d as u64 {
            let terms = x.terms().iter().enumerate().map(|(i, (e, _))| {
                let tw = &zeta_pows[((j * rho[i]) % d as u64) as usize];
                (e.clone(), frob_coeffs[i].mul(tw))
            });
            let img = HahnSeries::from_terms(p, terms, None);
            if !images.contains(&img) {
                images.push(img);
            }
        }
        if k == 0 {
            inertia = images.len();
        }
        for c in frob_coeffs.iter_mut() {
            for _ in 0..m0 {
                *c = c.frobenius();
            }
        }
    }
    Ok(Orbit {
        images,
        inertia,
        insep,
    })
}

/// `e * D` is `num / p^s`; the root of unity acts on `t^e` through
/// `num * p^{-s} mod D`.
fn twist_index(e: &BigRational, d: u32) -> u64 {
    if d == 1 {
        return 0;
    }
    let dm = BigInt::from(d);
    let scaled = e * &dm;
    let num = scaled.numer().mod_floor(&dm);
    let den = scaled.denom().mod_floor(&dm);
    let inv = mod_inv(den.to_i64().unwrap(), d as i64);
    ((num.to_i64().unwrap() * inv).rem_euclid(d as i64)) as u64
}

fn mod_inv(a: i64, m: i64) -> i64 {
    let (mut r0, mut r1) = (a.rem_euclid(m), m);
    let (mut s0, mut s1) = (1i64, 0i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    s0.rem_euclid(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::value_group::{int, rat};

    fn series(p: u32, terms: &[(i64, i64, i64)]) -> HahnSeries {
        HahnSeries::from_terms(
            p,
            terms.iter().map(|&(n, d, c)| (rat(n, d), Fq::from_i64(p, c))),
            None,
        )
    }

    #[test]
    fn square_root_of_t() {
        let o = exact_orbit(&series(3, &[(1, 2, 1)]), 1, false).unwrap();
        assert_eq!((o.degree(), o.e(), o.f()), (2, 2, 1));
    }

    #[test]
    fn mixed_denominators() {
        // t^{1/2} + t^{1/3}: degree 6, totally ramified
        let o = exact_orbit(&series(5, &[(1, 3, 1), (1, 2, 1)]), 1, false).unwrap();
        assert_eq!((o.degree(), o.e(), o.f()), (6, 6, 1));
    }

    #[test]
    fn coefficient_twist() {
        // sqrt(-t) = i t^{1/2} over F_3: degree 2 with e = 2
        let i = crate::coefficient_field::nth_root_coeff(&Fq::from_i64(3, -1), 2, 1)
            .unwrap()
            .0;
        let x = HahnSeries::monomial(i.clone(), rat(1, 2));
        let o = exact_orbit(&x, 1, false).unwrap();
        assert_eq!((o.degree(), o.e(), o.f()), (2, 2, 1));
        // i + t: unramified of degree 2
        let y = HahnSeries::from_terms(3, vec![(int(0), i), (int(1), Fq::one(3))], None);
        let o = exact_orbit(&y, 1, false).unwrap();
        assert_eq!((o.degree(), o.e(), o.f()), (2, 1, 2));
    }

    #[test]
    fn inseparable_and_perfect() {
        let x = series(3, &[(1, 3, 1)]);
        let o = exact_orbit(&x, 1, false).unwrap();
        assert_eq!((o.degree(), o.e(), o.f()), (3, 3, 1));
        let o = exact_orbit(&x, 1, true).unwrap();
        assert_eq!(o.degree(), 1);
        // t^{1/6} over the perfect base for p = 3 only needs the square root
        let o = exact_orbit(&series(3, &[(1, 6, 1)]), 1, true).unwrap();
        assert_eq!((o.degree(), o.e(), o.f()), (2, 2, 1));
    }

    #[test]
    fn rational_elements_are_fixed() {
        let o = exact_orbit(&series(2, &[(-1, 1, 1), (3, 1, 1)]), 1, false).unwrap();
        assert_eq!(o.images.len(), 1);
    }
}
