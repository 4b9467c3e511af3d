//! Seeded property suites over random tame instances.
//!
//! Instance `i` of a run draws from its own ChaCha stream, so results do not
//! depend on scheduling and any single instance can be replayed alone.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_integer::Integer;
use num_rational::BigRational;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::chains::{build_chain, verify_chain};
use crate::coefficient_field::Fq;
use crate::defect_calculus::fundamental_equality_check;
use crate::error::{Error, Result};
use crate::hahn_series::HahnSeries;
use crate::pairval::{
    assoc_value_transcendental, augment, j_invariant, key_certificate, minimal_certificate,
    w_eval_roots, w_eval_taylor, KeyVerdict, Pair, PolyOverK, Status,
};
use crate::tower::{PrecisionConfig, Tower};
use crate::value_group::{subgroup_index, GroupElement};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Profile {
    RatioLaw,
    OracleAgreement,
    IndexIdentities,
    ChainRoundtrip,
}

impl Profile {
    pub fn name(self) -> &'static str {
        match self {
            Profile::RatioLaw => "ratio-law",
            Profile::OracleAgreement => "oracle-agreement",
            Profile::IndexIdentities => "index-identities",
            Profile::ChainRoundtrip => "chain-roundtrip",
        }
    }

    pub fn parse(s: &str) -> Option<Profile> {
        [
            Profile::RatioLaw,
            Profile::OracleAgreement,
            Profile::IndexIdentities,
            Profile::ChainRoundtrip,
        ]
        .into_iter()
        .find(|p| p.name() == s)
    }
}

/// Cap on `deg f` in oracle instances; the Taylor evaluator is quadratic in
/// the degree.
pub const ORACLE_DEGREE_BUDGET: i64 = 16;

/// Random pairs shared by all instances of a ratio-law run.
pub const RATIO_LAW_PAIRS: usize = 5;

/// A Puiseux polynomial with `F_p` coefficients, kept as data so that it can
/// be printed back into a scenario.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Puiseux {
    pub p: u32,
    /// `(numerator, denominator, coefficient)`, exponents increasing.
    pub terms: Vec<(i64, i64, i64)>,
}

impl Puiseux {
    pub fn series(&self) -> HahnSeries {
        HahnSeries::from_terms(
            self.p,
            self.terms
                .iter()
                .map(|&(n, d, c)| (BigRational::new(n.into(), d.into()), Fq::from_i64(self.p, c))),
            None,
        )
    }

    pub fn expr(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|&(n, d, c)| {
                let q = BigRational::new(n.into(), d.into());
                match (q.is_integer() && n >= 0, c) {
                    (true, 1) => format!("t^{q}"),
                    (true, _) => format!("{c}*t^{q}"),
                    (false, 1) => format!("t^({q})"),
                    (false, _) => format!("{c}*t^({q})"),
                }
            })
            .collect();
        parts.join(" + ")
    }

    /// Normalizes: reduced exponents, sorted, like terms merged, zero
    /// coefficients dropped.
    pub fn new(p: u32, terms: impl IntoIterator<Item = (i64, i64, i64)>) -> Puiseux {
        let mut terms: Vec<(i64, i64, i64)> = terms
            .into_iter()
            .map(|(n, d, c)| {
                let g = n.gcd(&d) * d.signum();
                (n / g, d / g, c.rem_euclid(p as i64))
            })
            .collect();
        terms.sort_by(|a, b| (a.0 * b.1).cmp(&(b.0 * a.1)));
        let mut out: Vec<(i64, i64, i64)> = Vec::new();
        for t in terms {
            match out.last_mut() {
                Some(l) if l.0 == t.0 && l.1 == t.1 => l.2 = (l.2 + t.2) % p as i64,
                _ => out.push(t),
            }
        }
        out.retain(|t| t.2 != 0);
        Puiseux { p, terms: out }
    }

    fn with(&self, extra: (i64, i64, i64)) -> Puiseux {
        Puiseux::new(self.p, self.terms.iter().copied().chain([extra]))
    }
}

fn tame_denominators(p: u32) -> Vec<i64> {
    [1i64, 2, 3, 4, 6]
        .into_iter()
        .filter(|d| d % p as i64 != 0)
        .collect()
}

fn rand_prime(rng: &mut ChaCha8Rng) -> u32 {
    [3u32, 5, 7][rng.gen_range(0..3)]
}

fn rand_coeff(rng: &mut ChaCha8Rng, p: u32) -> i64 {
    rng.gen_range(1..p as i64)
}

/// Exponent `k / d` with `d` a tame denominator and `lo < k/d <= lo + 2`.
fn rand_exponent(rng: &mut ChaCha8Rng, p: u32, lo: &BigRational) -> (i64, i64) {
    let dens = tame_denominators(p);
    let d = dens[rng.gen_range(0..dens.len())];
    let base = (lo * BigRational::from_integer(d.into())).floor().to_integer();
    let base: i64 = base.try_into().unwrap_or(0);
    let k = base + rng.gen_range(1..=2 * d);
    let g = k.gcd(&d);
    (k / g, d / g)
}

/// 1 to 3 terms with positive exponents.
pub fn rand_puiseux(rng: &mut ChaCha8Rng, p: u32) -> Puiseux {
    let n = rng.gen_range(1..=3);
    let mut out = Puiseux { p, terms: vec![] };
    let mut lo = BigRational::from_integer(0.into());
    for _ in 0..n {
        let (k, d) = rand_exponent(rng, p, &lo);
        lo = BigRational::new(k.into(), d.into());
        out = out.with((k, d, rand_coeff(rng, p)));
    }
    out
}

fn ge(n: i64, d: i64) -> GroupElement {
    GroupElement::from_ints(n, d)
}

fn as_q(g: &GroupElement) -> BigRational {
    g.as_rational().cloned().unwrap_or_else(|| BigRational::from_integer(0.into()))
}

/// A minimal pair `(a, gamma)` with `gamma` beyond the Krasner constant, so
/// that minimality is certified.
#[derive(Debug, Clone)]
pub struct PairSpec {
    pub a: Puiseux,
    /// `gamma = kras(a) + num/12` (or `num/12` for `a` in the base).
    pub gamma: GroupElement,
}

pub fn rand_pair(rng: &mut ChaCha8Rng, tw: &Tower) -> Result<PairSpec> {
    let a = rand_puiseux(rng, tw.p());
    let el = tw.exact(a.series())?;
    let k = tw.kras(&el)?.unwrap_or_else(GroupElement::zero);
    let gamma = &k + &ge(rng.gen_range(1..=12), 12);
    Ok(PairSpec { a, gamma })
}

/// A root for a factor of a random `f`: near `a` above `gamma`, near `a`
/// below `gamma`, or unrelated.
fn rand_factor_root(rng: &mut ChaCha8Rng, pair: &PairSpec) -> Puiseux {
    let p = pair.a.p;
    match rng.gen_range(0..3) {
        0 => {
            // denominators of `a` only, so the degree does not grow
            let d = pair.a.degree();
            let g = as_q(&pair.gamma);
            let k = (g * BigRational::from_integer(d.into())).floor().to_integer();
            let k: i64 = k.try_into().unwrap_or(0) + rng.gen_range(1..=d * 2);
            let g = k.gcd(&d);
            pair.a.with((k / g, d / g, rand_coeff(rng, p)))
        }
        1 => {
            let (k, d) = rand_exponent(rng, p, &BigRational::from_integer(0.into()));
            pair.a.with((k, d, rand_coeff(rng, p)))
        }
        _ => rand_puiseux(rng, p),
    }
}

impl Puiseux {
    /// Degree over `F_p((t))`: the common denominator of the exponents.
    pub fn degree(&self) -> i64 {
        self.terms.iter().map(|t| t.1).fold(1, |x, y| x.lcm(&y))
    }
}

/// `n` factor roots whose degrees sum to at most `budget`; draws that would
/// exceed it are dropped.
fn rand_factor_roots(rng: &mut ChaCha8Rng, pair: &PairSpec, n: usize, budget: i64) -> Vec<Puiseux> {
    let mut out = Vec::new();
    let mut used = 0;
    for _ in 0..n {
        let z = rand_factor_root(rng, pair);
        if used + z.degree() <= budget || out.is_empty() {
            used += z.degree();
            out.push(z);
        }
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct Violation {
    pub instance: usize,
    pub detail: String,
    /// Minimized reproducing scenario (TOML).
    #[serde(skip)]
    pub scenario: String,
    pub artifact: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FuzzSummary {
    pub schema: &'static str,
    pub profile: Profile,
    pub seed: u64,
    pub count: usize,
    pub checked: usize,
    pub stats: BTreeMap<String, u64>,
    pub violations: Vec<Violation>,
}

impl FuzzSummary {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Outcome of one instance: counters to merge, or a violation.
struct Outcome {
    stats: Vec<&'static str>,
    violation: Option<(String, String)>,
}

impl Outcome {
    fn ok(stats: Vec<&'static str>) -> Self {
        Outcome { stats, violation: None }
    }

    fn bad(stats: Vec<&'static str>, detail: String, scenario: String) -> Self {
        Outcome {
            stats,
            violation: Some((detail, scenario)),
        }
    }
}

pub fn instance_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

pub fn fuzz(seed: u64, count: usize, profile: Profile, cfg: PrecisionConfig) -> FuzzSummary {
    let pairs: Vec<(u32, PairSpec)> = if profile == Profile::RatioLaw && count > 0 {
        (0..RATIO_LAW_PAIRS)
            .map(|j| {
                let mut rng = instance_rng(seed, u64::MAX - j as u64);
                loop {
                    let p = rand_prime(&mut rng);
                    let tw = Tower::laurent(p, 1).with_config(cfg);
                    if let Ok(ps) = rand_pair(&mut rng, &tw) {
                        break (p, ps);
                    }
                }
            })
            .collect()
    } else {
        Vec::new()
    };
    let outcomes: Vec<Outcome> = (0..count)
        .into_par_iter()
        .map(|i| {
            let mut rng = instance_rng(seed, i as u64);
            match profile {
                Profile::RatioLaw => {
                    let (p, ps) = &pairs[i % RATIO_LAW_PAIRS];
                    ratio_law_instance(&mut rng, *p, ps, cfg)
                }
                Profile::OracleAgreement => oracle_instance(&mut rng, cfg),
                Profile::IndexIdentities => index_instance(&mut rng, cfg),
                Profile::ChainRoundtrip => chain_instance(&mut rng, cfg),
            }
        })
        .collect();
    let mut stats = BTreeMap::new();
    let mut violations = Vec::new();
    for (i, o) in outcomes.into_iter().enumerate() {
        for s in o.stats {
            *stats.entry(s.to_string()).or_insert(0) += 1;
        }
        if let Some((detail, scenario)) = o.violation {
            violations.push(Violation {
                instance: i,
                detail,
                scenario,
                artifact: None,
            });
        }
    }
    FuzzSummary {
        schema: super::report::FUZZ_SCHEMA,
        profile,
        seed,
        count,
        checked: count,
        stats,
        violations,
    }
}

/// Header shared by reproducing scenarios.
fn scenario_head(name: &str, base: &str, p: u32, cfg: PrecisionConfig) -> String {
    format!(
        "name = \"{name}\"\nbase = \"{base}\"\nprimes = [{p}]\n\n[config]\ndepth = {}\nretries = {}\n",
        cfg.depth, cfg.retries
    )
}

fn push_element(s: &mut String, name: &str, value: &str) {
    let _ = write!(s, "\n[[element]]\nname = \"{name}\"\nvalue = \"{value}\"\n");
}

fn push_factored_poly(s: &mut String, name: &str, roots: &[&str]) {
    let list: Vec<String> = roots.iter().map(|r| format!("\"{r}\"")).collect();
    let _ = write!(s, "\n[[poly]]\nname = \"{name}\"\nfactors = [{}]\n", list.join(", "));
}

fn push_pair(s: &mut String, name: &str, a: &str, gamma: &GroupElement) {
    let _ = write!(s, "\n[[pair]]\nname = \"{name}\"\na = \"{a}\"\ngamma = \"{gamma}\"\ncertify = true\n");
}

fn factors_poly(tw: &Tower, zs: &[Puiseux]) -> Result<PolyOverK> {
    let mut f: Option<PolyOverK> = None;
    for z in zs {
        let m = PolyOverK::min_poly(tw, &tw.exact(z.series())?)?;
        f = Some(match f {
            None => m,
            Some(f) => f.mul(&m),
        });
    }
    f.ok_or_else(|| Error::InvalidArgument("empty factor list".into()))
}

/// Drops factors while `still_bad` holds.
fn minimize<T: Clone>(items: &[T], still_bad: impl Fn(&[T]) -> bool) -> Vec<T> {
    let mut cur = items.to_vec();
    let mut i = 0;
    while i < cur.len() && cur.len() > 1 {
        let mut trial = cur.clone();
        trial.remove(i);
        if still_bad(&trial) {
            cur = trial;
        } else {
            i += 1;
        }
    }
    cur
}

fn certified_pair(tw: &Tower, ps: &PairSpec) -> Result<Pair> {
    let a = tw.exact(ps.a.series())?;
    let mut pair = Pair::new(a.clone(), ps.gamma.clone());
    pair.status = minimal_certificate(tw, &a, &ps.gamma)?.0;
    Ok(pair)
}

/// `j(f) deg Q <= deg f j(Q)`; equality expected when `f` is certified key.
fn ratio_law_check(tw: &Tower, ps: &PairSpec, zs: &[Puiseux]) -> Result<(bool, Option<String>)> {
    let pair = certified_pair(tw, ps)?;
    let q = PolyOverK::min_poly(tw, &pair.a)?;
    let f = factors_poly(tw, zs)?;
    let (jq, jf) = (j_invariant(tw, &q, &pair)?, j_invariant(tw, &f, &pair)?);
    let (dq, df) = (q.degree() as u64, f.degree() as u64);
    let key = zs.len() == 1
        && matches!(key_certificate(tw, &f, &pair, &[])?, KeyVerdict::KeyByMinimalPair { .. });
    let bad = if jf * dq > df * jq {
        Some(format!("j(f)/j(Q) = {jf}/{jq} exceeds deg f/deg Q = {df}/{dq} for f = {f}"))
    } else if key && jf * dq != df * jq {
        Some(format!("certified key f = {f} has j(f)/j(Q) = {jf}/{jq} but degrees {df}/{dq}"))
    } else {
        None
    };
    Ok((key, bad))
}

fn ratio_law_instance(rng: &mut ChaCha8Rng, p: u32, ps: &PairSpec, cfg: PrecisionConfig) -> Outcome {
    let tw = Tower::laurent(p, 1).with_config(cfg);
    let n = rng.gen_range(1..=3);
    let zs: Vec<Puiseux> = (0..n).map(|_| rand_factor_root(rng, ps)).collect();
    let scenario = |zs: &[Puiseux]| {
        let mut s = scenario_head("ratio-law-repro", "laurent", p, cfg);
        push_pair(&mut s, "w", &ps.a.expr(), &ps.gamma);
        let roots: Vec<String> = zs.iter().map(Puiseux::expr).collect();
        let refs: Vec<&str> = roots.iter().map(String::as_str).collect();
        push_factored_poly(&mut s, "f", &refs);
        s.push_str("\n[[check]]\nkind = \"ratio-law\"\npair = \"w\"\npoly = \"f\"\n");
        s
    };
    match ratio_law_check(&tw, ps, &zs) {
        Ok((key, None)) => {
            let mut st = vec!["instances"];
            if key {
                st.push("key-certified");
                st.push("key-equalities");
            }
            Outcome::ok(st)
        }
        Ok((_, Some(detail))) => {
            let min = minimize(&zs, |t| matches!(ratio_law_check(&tw, ps, t), Ok((_, Some(_)))));
            Outcome::bad(vec!["instances"], detail, scenario(&min))
        }
        Err(e) => Outcome::bad(vec!["instances"], format!("error: {e}"), scenario(&zs)),
    }
}

/// Three evaluators of the same valuation: roots and Taylor expansion for
/// `v_(a, gamma)`, and the augmentation `[v_(a, gamma); Q, beta]` against
/// `v_(a, gamma')` with `beta = w'(Q)`.
fn oracle_check(tw: &Tower, ps: &PairSpec, shift: &GroupElement, zs: &[Puiseux]) -> Result<Option<String>> {
    let pair = certified_pair(tw, ps)?;
    let f = factors_poly(tw, zs)?;
    let r = w_eval_roots(tw, &f, &pair)?;
    let t = w_eval_taylor(tw, &f, &pair)?;
    if r != t {
        return Ok(Some(format!("w(f) by roots {r} but by Taylor expansion {t} for f = {f}")));
    }
    let q = PolyOverK::min_poly(tw, &pair.a)?;
    let gamma2 = &ps.gamma + shift;
    let pair2 = Pair::new(pair.a.clone(), gamma2);
    let beta = w_eval_roots(tw, &q, &pair2)?;
    let aug = augment(tw, &pair, &q, beta)?;
    let e = aug.eval(tw, &f)?;
    let r2 = w_eval_roots(tw, &f, &pair2)?;
    let t2 = w_eval_taylor(tw, &f, &pair2)?;
    if e != r2 || r2 != t2 {
        return Ok(Some(format!(
            "augmented value {e} but roots {r2} and Taylor {t2} for v_(a, {}) on f = {f}",
            pair2.gamma
        )));
    }
    Ok(None)
}

fn oracle_instance(rng: &mut ChaCha8Rng, cfg: PrecisionConfig) -> Outcome {
    let p = rand_prime(rng);
    let tw = Tower::laurent(p, 1).with_config(cfg);
    let ps = match rand_pair(rng, &tw) {
        Ok(ps) => ps,
        Err(e) => return Outcome::bad(vec!["instances"], format!("error: {e}"), String::new()),
    };
    let shift = ge(rng.gen_range(1..=12), 12);
    let n = rng.gen_range(1..=3);
    let zs = rand_factor_roots(rng, &ps, n, ORACLE_DEGREE_BUDGET);
    let scenario = |zs: &[Puiseux]| {
        let mut s = scenario_head("oracle-agreement-repro", "laurent", p, cfg);
        push_pair(&mut s, "w", &ps.a.expr(), &ps.gamma);
        push_pair(&mut s, "w2", &ps.a.expr(), &(&ps.gamma + &shift));
        let roots: Vec<String> = zs.iter().map(Puiseux::expr).collect();
        let refs: Vec<&str> = roots.iter().map(String::as_str).collect();
        push_factored_poly(&mut s, "f", &refs);
        s.push_str("\n[[check]]\nkind = \"oracle-agreement\"\npair = \"w\"\npoly = \"f\"\n");
        s.push_str("\n[[check]]\nkind = \"oracle-agreement\"\npair = \"w2\"\npoly = \"f\"\n");
        s
    };
    match oracle_check(&tw, &ps, &shift, &zs) {
        Ok(None) => Outcome::ok(vec!["instances"]),
        Ok(Some(detail)) => {
            let min = minimize(&zs, |t| matches!(oracle_check(&tw, &ps, &shift, t), Ok(Some(_))));
            Outcome::bad(vec!["instances"], detail, scenario(&min))
        }
        Err(e) => Outcome::bad(vec!["instances"], format!("error: {e}"), scenario(&zs)),
    }
}

/// `deg = e f` and trivial defect for a tame element, value group index
/// equal to `e`, and `j` unchanged under `gamma -> (gamma, -1)`.
fn index_check(tw: &Tower, b: &Puiseux, ps: &PairSpec, zs: &[Puiseux]) -> Result<Option<String>> {
    let el = tw.exact(b.series())?;
    let inv = tw.ext_invariants(&el);
    if inv.deg != inv.e * inv.f || inv.defect != 1 || !fundamental_equality_check(tw, &el) {
        return Ok(Some(format!(
            "tame element {b:?} has deg {}, e {}, f {}, defect {}",
            inv.deg, inv.e, inv.f, inv.defect
        )));
    }
    let idx = subgroup_index(&tw.value_group(&el), &tw.base.value_group())?;
    if idx != inv.e {
        return Ok(Some(format!("value group index {idx} differs from e = {}", inv.e)));
    }
    let pair = certified_pair(tw, ps)?;
    let f = factors_poly(tw, zs)?;
    let shifted = assoc_value_transcendental(&pair)?;
    let (j1, j2) = (j_invariant(tw, &f, &pair)?, j_invariant(tw, &f, &shifted)?);
    if j1 != j2 {
        return Ok(Some(format!(
            "j(f) = {j1} for gamma {} but {j2} for {}, f = {f}",
            pair.gamma, shifted.gamma
        )));
    }
    Ok(None)
}

fn index_instance(rng: &mut ChaCha8Rng, cfg: PrecisionConfig) -> Outcome {
    let p = rand_prime(rng);
    let tw = Tower::laurent(p, 1).with_config(cfg);
    let b = rand_puiseux(rng, p);
    let ps = match rand_pair(rng, &tw) {
        Ok(ps) => ps,
        Err(e) => return Outcome::bad(vec!["instances"], format!("error: {e}"), String::new()),
    };
    let n = rng.gen_range(1..=3);
    let zs: Vec<Puiseux> = (0..n).map(|_| rand_factor_root(rng, &ps)).collect();
    let scenario = |zs: &[Puiseux]| {
        let mut s = scenario_head("index-identities-repro", "laurent", p, cfg);
        push_element(&mut s, "b", &b.expr());
        push_pair(&mut s, "w", &ps.a.expr(), &ps.gamma);
        let roots: Vec<String> = zs.iter().map(Puiseux::expr).collect();
        let refs: Vec<&str> = roots.iter().map(String::as_str).collect();
        push_factored_poly(&mut s, "f", &refs);
        s.push_str("\n[[check]]\nkind = \"invariants\"\nx = \"b\"\nexpect-defect = 1\n");
        s.push_str("\n[[check]]\nkind = \"j-shift\"\npair = \"w\"\npoly = \"f\"\n");
        s
    };
    match index_check(&tw, &b, &ps, &zs) {
        Ok(None) => Outcome::ok(vec!["instances"]),
        Ok(Some(detail)) => {
            let min = minimize(&zs, |t| matches!(index_check(&tw, &b, &ps, t), Ok(Some(_))));
            Outcome::bad(vec!["instances"], detail, scenario(&min))
        }
        Err(e) => Outcome::bad(vec!["instances"], format!("error: {e}"), scenario(&zs)),
    }
}

/// Builds and re-verifies the chain of a random tame element.
pub fn chain_roundtrip(tw: &Tower, b: &Puiseux) -> Result<(usize, Status)> {
    let el = tw.exact(b.series())?.named("b");
    let chain = build_chain(tw, &el)?;
    let rep = verify_chain(tw, &chain)?;
    Ok((rep.links.len(), rep.status))
}

fn chain_instance(rng: &mut ChaCha8Rng, cfg: PrecisionConfig) -> Outcome {
    let p = rand_prime(rng);
    let tw = Tower::laurent(p, 1).with_config(cfg);
    let mut b = rand_puiseux(rng, p);
    while b.degree() == 1 {
        b = rand_puiseux(rng, p);
    }
    let repro = |b: &Puiseux| {
        let mut s = scenario_head("chain-roundtrip-repro", "laurent", p, cfg);
        push_element(&mut s, "b", &b.expr());
        s.push_str("\n[[check]]\nkind = \"chain\"\nb = \"b\"\nexpect = \"certified\"\n");
        s
    };
    let bad = |b: &Puiseux| !matches!(chain_roundtrip(&tw, b), Ok((_, Status::Certified)));
    match chain_roundtrip(&tw, &b) {
        Ok((links, Status::Certified)) => {
            let mut st = vec!["instances"];
            st.extend(std::iter::repeat_n("links", links));
            Outcome::ok(st)
        }
        res => {
            let detail = match res {
                Ok((_, s)) => format!("chain verified only as {s}"),
                Err(e) => format!("error: {e}"),
            };
            let terms = minimize(&b.terms, |t| bad(&Puiseux { p, terms: t.to_vec() }));
            Outcome::bad(vec!["instances"], detail, repro(&Puiseux { p, terms }))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn puiseux_expr_round_trip_text() {
        let b = Puiseux { p: 5, terms: vec![(1, 2, 1), (5, 4, 4), (3, 1, 2)] };
        assert_eq!(Puiseux::new(5, [(6, 2, 2), (2, 4, 3), (5, 4, 9), (1, 2, 3)]), b);
        assert_eq!(b.expr(), "t^(1/2) + 4*t^(5/4) + 2*t^3");
        let c = b.with((1, 2, 4));
        assert_eq!(c.terms, vec![(5, 4, 4), (3, 1, 2)]);
    }

    #[test]
    fn empty_run() {
        let s = fuzz(1, 0, Profile::OracleAgreement, PrecisionConfig::default());
        assert!(s.ok() && s.checked == 0 && s.stats.is_empty());
    }

    #[test]
    fn minimize_drops_irrelevant_items() {
        let m = minimize(&[1, 2, 3, 4], |t| t.contains(&3));
        assert_eq!(m, vec![3]);
    }

    #[test]
    fn small_runs_are_clean() {
        for profile in [
            Profile::RatioLaw,
            Profile::OracleAgreement,
            Profile::IndexIdentities,
            Profile::ChainRoundtrip,
        ] {
            let s = fuzz(7, 12, profile, PrecisionConfig::default());
            assert!(s.ok(), "{profile:?}: {:?}", s.violations);
        }
    }
}
