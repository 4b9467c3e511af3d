//! Scenario execution.

use std::collections::HashMap;

use rayon::prelude::*;

use super::expr::{Env, Val};
use super::fuzz::{fuzz, Profile};
use super::report::{Claim, PrimeRun, RunConfig, ScenarioReport};
use super::scenario::{CheckDef, Expect, Overrides, PairDef, PolyDef, Scenario};
use crate::chains::{build_chain, delta_b, standard_family, verify_chain};
use crate::defect_calculus::stability_check;
use crate::error::{Error, Result};
use crate::hahn_series::HahnSeries;
use crate::pairval::{
    assoc_value_transcendental, initial_forms_equal, j_invariant, key_certificate, key_search_family,
    minimal_certificate, w_eval, w_eval_roots, w_eval_taylor, KeyVerdict, Pair, PolyOverK, Status,
};
use crate::tower::{Element, PrecisionConfig, Recipe, Tower};
use crate::value_group::GroupElement;
use num_rational::BigRational;
use num_traits::Signed;

fn is_input_error(e: &Error) -> bool {
    matches!(e, Error::Parse(_) | Error::Validation(_))
}

/// Runs every prime of the scenario; input errors abort the whole run.
pub fn run_scenario(sc: &Scenario, o: &Overrides) -> Result<ScenarioReport> {
    let cfg = sc.precision(o);
    let seed = sc.seed(o);
    let runs: Vec<Result<PrimeRun>> = sc
        .primes
        .par_iter()
        .map(|&p| run_prime(sc, p, cfg, seed, o.strict))
        .collect();
    let runs: Vec<PrimeRun> = runs.into_iter().collect::<Result<_>>()?;
    let failed = runs.iter().flat_map(|r| &r.claims).filter(|c| !c.pass).count();
    let total: usize = runs.iter().map(|r| r.claims.len()).sum();
    Ok(ScenarioReport {
        scenario: sc.name.clone(),
        description: sc.description.clone(),
        base: sc.base,
        config: RunConfig {
            depth: cfg.depth,
            retries: cfg.retries,
            seed,
            strict: o.strict,
        },
        runs,
        passed: total - failed,
        failed,
    })
}

struct Ctx<'a> {
    env: Env<'a>,
    polys: HashMap<String, PolyOverK>,
    pairs: HashMap<String, Pair>,
    seed: u64,
}

struct Claims {
    out: Vec<Claim>,
    check: usize,
    kind: &'static str,
    strict: bool,
}

impl Claims {
    fn push(&mut self, quantity: impl Into<String>, value: String, expected: Option<String>, status: Status) {
        let pass = expected.as_ref().is_none_or(|e| e == &value);
        self.push_raw(quantity.into(), value, expected, Some(status), pass, None);
    }

    fn push_raw(
        &mut self,
        quantity: String,
        value: String,
        expected: Option<String>,
        status: Option<Status>,
        mut pass: bool,
        mut note: Option<String>,
    ) {
        if self.strict && status == Some(Status::FamilyChecked) {
            pass = false;
            note = Some(match note {
                Some(n) => format!("{n}; family-checked fails under --strict"),
                None => "family-checked fails under --strict".into(),
            });
        }
        self.out.push(Claim {
            check: self.check,
            kind: self.kind,
            quantity,
            value,
            expected,
            status,
            pass,
            note,
        });
    }

    fn note(&mut self, note: String) {
        if let Some(c) = self.out.last_mut() {
            c.note = Some(match c.note.take() {
                Some(n) => format!("{n}; {note}"),
                None => note,
            });
        }
    }

    fn error(&mut self, e: &Error) {
        self.push_raw("error".into(), e.to_string(), None, None, false, None);
    }
}

fn run_prime(sc: &Scenario, p: u32, cfg: PrecisionConfig, seed: u64, strict: bool) -> Result<PrimeRun> {
    let tw = sc.tower(p, cfg);
    let mut ctx = Ctx {
        env: Env::new(&tw),
        polys: HashMap::new(),
        pairs: HashMap::new(),
        seed,
    };
    let mut setup = Claims {
        out: Vec::new(),
        check: 0,
        kind: "setup",
        strict,
    };
    if let Err(e) = ctx.setup(sc) {
        if is_input_error(&e) {
            return Err(e);
        }
        setup.error(&e);
        return Ok(PrimeRun { p, claims: setup.out });
    }
    let mut claims = Vec::new();
    for (i, check) in sc.check.iter().enumerate() {
        let mut cl = Claims {
            out: Vec::new(),
            check: i,
            kind: check.kind(),
            strict,
        };
        if let Err(e) = ctx.run_check(check, &mut cl) {
            if is_input_error(&e) {
                return Err(e);
            }
            cl.error(&e);
        }
        claims.extend(cl.out);
    }
    Ok(PrimeRun { p, claims })
}

fn list(v: &[String]) -> String {
    format!("[{}]", v.join(", "))
}

/// Degree claims rest on irreducibility of Artin-Schreier steps over the
/// perfect base, which is asserted rather than proved.
fn construction_status(tw: &Tower, x: &Element) -> Status {
    fn has_as(x: &Element) -> bool {
        match x.recipe() {
            Recipe::Exact => false,
            Recipe::AsRoot { .. } => true,
            Recipe::NthRoot { u, .. } => has_as(u),
            Recipe::Sum(a, b) | Recipe::Prod(a, b) => has_as(a) || has_as(b),
        }
    }
    if tw.base.perfect() && has_as(x) {
        Status::Asserted
    } else {
        Status::Certified
    }
}

fn exp_group(env: &Env, e: &Option<Expect>) -> Result<Option<String>> {
    e.as_ref()
        .map(|e| match e {
            Expect::Int(n) => Ok(GroupElement::from_ints(*n, 1).to_string()),
            Expect::Str(s) => Ok(env.group_element(s)?.to_string()),
            _ => Err(Error::Validation(format!("expected a value, got {e:?}"))),
        })
        .transpose()
}

fn exp_count(env: &Env, e: &Option<Expect>) -> Result<Option<String>> {
    e.as_ref().map(|e| count(env, e)).transpose()
}

fn count(env: &Env, e: &Expect) -> Result<String> {
    match e {
        Expect::Int(n) if *n >= 0 => Ok(n.to_string()),
        Expect::Str(s) => {
            let q = env.rational(s)?;
            if q.is_integer() && !q.is_negative() {
                Ok(q.to_integer().to_string())
            } else {
                Err(Error::Validation(format!("{s:?} is not a count")))
            }
        }
        _ => Err(Error::Validation(format!("expected a count, got {e:?}"))),
    }
}

impl Ctx<'_> {
    fn tw(&self) -> &Tower {
        self.env.tw
    }

    fn setup(&mut self, sc: &Scenario) -> Result<()> {
        for e in &sc.element {
            let x = self.env.element(&e.value)?.named(e.name.clone());
            self.env.vars.insert(e.name.clone(), Val::Elt(x));
        }
        for f in &sc.poly {
            let poly = self.poly(f)?.with_label(f.name.clone());
            self.polys.insert(f.name.clone(), poly);
        }
        for w in &sc.pair {
            let pair = self.pair(w)?;
            self.pairs.insert(w.name.clone(), pair);
        }
        Ok(())
    }

    fn poly(&self, f: &PolyDef) -> Result<PolyOverK> {
        let tw = self.tw();
        if let Some(z) = &f.min_poly {
            return PolyOverK::min_poly(tw, &self.env.element(z)?);
        }
        if let Some(z) = &f.linear {
            return Ok(PolyOverK::linear(&self.env.element(z)?));
        }
        if let Some(cs) = &f.coeffs {
            let mut out: Vec<HahnSeries> = Vec::new();
            for c in cs {
                let x = self.env.element(c)?;
                match x.as_exact() {
                    Some(s) if tw.degree(&x)? == 1 => out.push(s.clone()),
                    _ => return Err(Error::Validation(format!("coefficient {c:?} of {} is not in the base", f.name))),
                }
            }
            return PolyOverK::from_coeffs(out);
        }
        let mut acc: Option<PolyOverK> = None;
        for z in f.factors.as_deref().unwrap_or_default() {
            let m = PolyOverK::min_poly(tw, &self.env.element(z)?)?;
            acc = Some(match acc {
                None => m,
                Some(a) => a.mul(&m),
            });
        }
        acc.ok_or_else(|| Error::Validation(format!("polynomial {} is empty", f.name)))
    }

    fn pair(&self, w: &PairDef) -> Result<Pair> {
        let a = self.env.element(&w.a)?;
        let gamma = self.env.group_element(&w.gamma)?;
        let mut pair = Pair::new(a, gamma);
        if w.certify {
            pair.status = minimal_certificate(self.tw(), &pair.a, &pair.gamma)?.0;
        }
        Ok(pair)
    }

    fn get_pair(&self, n: &str) -> &Pair {
        &self.pairs[n]
    }

    fn get_poly(&self, n: &str) -> &PolyOverK {
        &self.polys[n]
    }

    fn tower_for(&self, henselian: Option<bool>) -> Tower {
        match henselian {
            Some(h) => self.tw().with_henselian(h),
            None => self.tw().clone(),
        }
    }

    fn run_check(&self, check: &CheckDef, cl: &mut Claims) -> Result<()> {
        match check {
            CheckDef::Distance {
                x,
                y,
                expect,
                range,
                var,
            } => {
                let var = var.as_deref().unwrap_or("n");
                let ns: Vec<Option<i64>> = match range {
                    Some([lo, hi]) => (*lo..=*hi).map(Some).collect(),
                    None => vec![None],
                };
                for n in ns {
                    let mut env = Env {
                        tw: self.env.tw,
                        vars: self.env.vars.clone(),
                    };
                    let mut q = format!("v({x} - {y})");
                    if let Some(n) = n {
                        env.vars.insert(var.into(), Val::Num(BigRational::from_integer(n.into())));
                        q = format!("{q} at {var} = {n}");
                    }
                    let expected = exp_group(&env, expect)?;
                    let xv = env.element(x)?;
                    let yv = env.element(y)?;
                    match self.tw().dist(&xv, &yv) {
                        Ok(d) => cl.push(q, d.to_string(), expected, Status::Certified),
                        Err(e) => cl.push_raw(q, e.to_string(), expected, None, false, None),
                    }
                }
            }
            CheckDef::Invariants {
                x,
                henselian,
                expect_deg,
                expect_e,
                expect_f,
                expect_defect,
            } => {
                let tw = self.tower_for(*henselian);
                let xv = self.env.element(x)?;
                let st = construction_status(&tw, &xv);
                let over = if tw.henselian { "K^h" } else { "K" };
                cl.push(
                    format!("[K({x}):{over}]"),
                    tw.degree(&xv)?.to_string(),
                    exp_count(&self.env, expect_deg)?,
                    st,
                );
                if tw.henselian {
                    let inv = tw.ext_invariants(&xv);
                    cl.push("e", inv.e.to_string(), exp_count(&self.env, expect_e)?, Status::Certified);
                    cl.push("f", inv.f.to_string(), exp_count(&self.env, expect_f)?, Status::Certified);
                    cl.push("defect", inv.defect.to_string(), exp_count(&self.env, expect_defect)?, st);
                }
            }
            CheckDef::Delta {
                b,
                henselian,
                expect,
                certificate,
            } => {
                let tw = self.tower_for(*henselian);
                let bv = self.env.element(b)?;
                let fam = standard_family(&tw, &bv, tw.cfg.depth);
                let d = delta_b(&tw, &bv, &fam)?;
                let st = if d.certified() {
                    Status::Certified
                } else {
                    Status::FamilyChecked
                };
                cl.push(format!("delta({b})"), d.achieved.to_string(), exp_group(&self.env, expect)?, st);
                cl.note(format!("witness {}", d.witness));
                let cert = d.upper_certificate.clone().unwrap_or_else(|| "none".into());
                if let Some(want) = certificate {
                    let pass = cert.contains(want.as_str());
                    cl.push_raw("upper-bound certificate".into(), cert, Some(format!("~{want}")), Some(st), pass, None);
                } else if let Some(c) = &d.upper_certificate {
                    cl.note(format!("upper bound: {c}"));
                }
            }
            CheckDef::Chain {
                b,
                henselian,
                expect,
                expect_degrees,
                diagnostic,
            } => {
                let tw = self.tower_for(*henselian);
                let bv = self.env.element(b)?;
                let want_degrees = match expect_degrees {
                    Some(Expect::List(v)) => Some(list(&v.iter().map(|e| count(&self.env, e)).collect::<Result<Vec<_>>>()?)),
                    Some(e) => return Err(Error::Validation(format!("expect-degrees must be a list, got {e:?}"))),
                    None => None,
                };
                match build_chain(&tw, &bv).and_then(|c| verify_chain(&tw, &c)) {
                    Ok(rep) => {
                        cl.push("chain", rep.status.to_string(), expect.clone(), rep.status);
                        cl.note(format!("labels {}", list(&rep.labels)));
                        let degs: Vec<String> = rep.degrees.iter().map(|d| d.to_string()).collect();
                        cl.push("degrees", list(&degs), want_degrees, rep.status);
                        for lk in &rep.links {
                            cl.push(
                                format!("link {} gamma", lk.link),
                                lk.dp.gamma.to_string(),
                                None,
                                lk.dp.status,
                            );
                            cl.note(format!(
                                "degree divides; minimal pair of degree {} ({})",
                                lk.minimal_pair.degree, lk.minimal_pair.certificate
                            ));
                        }
                    }
                    Err(Error::NoChain(msg)) => {
                        cl.push("chain", "no-chain".into(), expect.clone(), Status::FamilyChecked);
                        match diagnostic {
                            Some(want) => {
                                let pass = msg.contains(want.as_str());
                                cl.push_raw(
                                    "diagnostic".into(),
                                    msg,
                                    Some(format!("~{want}")),
                                    Some(Status::FamilyChecked),
                                    pass,
                                    None,
                                );
                            }
                            None => cl.note(msg),
                        }
                    }
                    Err(Error::VerificationFailed { link, reason }) => {
                        cl.push_raw(
                            "chain".into(),
                            "verification-failed".into(),
                            expect.clone(),
                            Some(Status::Certified),
                            expect.as_deref() == Some("verification-failed"),
                            Some(format!("link {link}: {reason}")),
                        );
                    }
                    Err(e) => return Err(e),
                }
            }
            CheckDef::W { pair, poly, expect } => {
                let v = w_eval(self.tw(), self.get_poly(poly), self.get_pair(pair))?;
                cl.push(format!("w_{pair}({poly})"), v.to_string(), exp_group(&self.env, expect)?, Status::Certified);
            }
            CheckDef::J { pair, poly, expect } => {
                let j = j_invariant(self.tw(), self.get_poly(poly), self.get_pair(pair))?;
                cl.push(format!("j_{pair}({poly})"), j.to_string(), exp_count(&self.env, expect)?, Status::Certified);
            }
            CheckDef::InitialFormsEqual { pair, f, g, expect } => {
                let eq = initial_forms_equal(self.tw(), self.get_poly(f), self.get_poly(g), self.get_pair(pair))?;
                cl.push(
                    format!("in_{pair}({f}) = in_{pair}({g})"),
                    eq.to_string(),
                    expect.map(|b| b.to_string()),
                    Status::Certified,
                );
            }
            CheckDef::Key {
                pair,
                poly,
                expect,
                witness,
                family,
            } => {
                let tw = self.tw();
                let f = self.get_poly(poly);
                let extra: Vec<Element> = family.iter().map(|z| self.env.element(z)).collect::<Result<_>>()?;
                let fam = key_search_family(tw, f, &extra)?;
                let verdict = key_certificate(tw, f, self.get_pair(pair), &fam)?;
                let (st, note) = match &verdict {
                    KeyVerdict::KeyByMinimalPair { certificate } => (Status::Certified, Some(certificate.clone())),
                    KeyVerdict::NotKeyByInitialForm { witness } => {
                        (Status::Certified, Some(format!("in({poly}) = in({witness})")))
                    }
                    KeyVerdict::Unknown { annotation } => (Status::FamilyChecked, annotation.clone()),
                };
                cl.push(format!("key({poly}) for {pair}"), verdict.name().into(), expect.clone(), st);
                if let Some(n) = note {
                    cl.note(n);
                }
                if let (Some(w), KeyVerdict::NotKeyByInitialForm { witness: got }) = (witness, &verdict) {
                    cl.push("witness", got.clone(), Some(w.clone()), st);
                }
            }
            CheckDef::MinimalPair { pair, expect } => {
                let w = self.get_pair(pair);
                let (st, cert) = minimal_certificate(self.tw(), &w.a, &w.gamma)?;
                cl.push(format!("minimal({pair})"), st.to_string(), expect.clone(), st);
                cl.note(cert);
            }
            CheckDef::Stability {
                pair_b,
                pair_a,
                f,
                q,
                expect_lhs,
                expect_rhs,
                expect_j_f,
                expect_j_q,
                expect_defectless,
            } => {
                let tw = self.tw();
                let (pb, pa) = (self.get_pair(pair_b), self.get_pair(pair_a));
                let (fp, qp) = (self.get_poly(f), self.get_poly(q));
                let key = key_certificate(tw, fp, pa, &[])?;
                let r = stability_check(tw, pb, pa, fp, qp, &key)?;
                let lhs_st = if r.defectless_certified {
                    Status::Certified
                } else {
                    Status::FamilyChecked
                };
                let lhs = r.lhs.map_or("unknown".to_string(), |v| v.to_string());
                cl.push("lhs (index x residue degree over K(X))", lhs, exp_count(&self.env, expect_lhs)?, lhs_st);
                cl.push("rhs j(Q) (index x residue degree over K(a))", r.rhs.to_string(), exp_count(&self.env, expect_rhs)?, Status::Certified);
                cl.push(format!("j({f})"), r.j_f.to_string(), exp_count(&self.env, expect_j_f)?, Status::Certified);
                cl.push(format!("j({q})"), r.j_q.to_string(), exp_count(&self.env, expect_j_q)?, Status::Certified);
                cl.push(
                    "defectless",
                    r.defectless_certified.to_string(),
                    expect_defectless.map(|b| b.to_string()),
                    lhs_st,
                );
                for n in &r.notes {
                    cl.note(n.clone());
                }
            }
            CheckDef::RatioLaw { pair, poly } => {
                let tw = self.tw();
                let w = self.get_pair(pair);
                let f = self.get_poly(poly);
                let q = PolyOverK::min_poly(tw, &w.a)?;
                let (jq, jf) = (j_invariant(tw, &q, w)?, j_invariant(tw, f, w)?);
                let (dq, df) = (q.degree() as u64, f.degree() as u64);
                cl.push(
                    "j(f) deg Q <= deg f j(Q)",
                    (jf * dq <= df * jq).to_string(),
                    Some("true".into()),
                    w.status,
                );
                cl.note(format!("j(f) = {jf}, j(Q) = {jq}, deg f = {df}, deg Q = {dq}"));
            }
            CheckDef::OracleAgreement { pair, poly } => {
                let tw = self.tw();
                let (w, f) = (self.get_pair(pair), self.get_poly(poly));
                let r = w_eval_roots(tw, f, w)?;
                let t = w_eval_taylor(tw, f, w)?;
                cl.push("roots = Taylor", (r == t).to_string(), Some("true".into()), Status::Certified);
                cl.note(format!("roots {r}, Taylor {t}"));
            }
            CheckDef::JShift { pair, poly } => {
                let tw = self.tw();
                let (w, f) = (self.get_pair(pair), self.get_poly(poly));
                let shifted = assoc_value_transcendental(w)?;
                let (j1, j2) = (j_invariant(tw, f, w)?, j_invariant(tw, f, &shifted)?);
                cl.push("j invariant under (gamma, -1)", (j1 == j2).to_string(), Some("true".into()), Status::Certified);
                cl.note(format!("j = {j1} and {j2}"));
            }
            CheckDef::Property { profile, count } => {
                let prof = Profile::parse(profile).expect("validated");
                let s = fuzz(self.seed, *count, prof, self.tw().cfg);
                cl.push(
                    format!("{profile} violations in {count}"),
                    s.violations.len().to_string(),
                    Some("0".into()),
                    Status::Certified,
                );
                if let Some(v) = s.violations.first() {
                    cl.note(format!("instance {}: {}", v.instance, v.detail));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::scenario::builtin;

    fn run(name: &str, strict: bool) -> ScenarioReport {
        let sc = Scenario::parse(builtin(name).unwrap()).unwrap();
        run_scenario(&sc, &Overrides { strict, ..Default::default() }).unwrap()
    }

    #[test]
    fn cdc_builtin_passes() {
        let r = run("example-cdc", false);
        let bad: Vec<_> = r.claims().filter(|(_, c)| !c.pass).collect();
        assert!(bad.is_empty(), "{bad:?}");
        // 7 distances per prime among the claims
        assert_eq!(r.claims().filter(|(_, c)| c.kind == "distance").count(), 21);
    }

    #[test]
    fn stability_builtin_passes() {
        let r = run("example-stability", false);
        let bad: Vec<_> = r.claims().filter(|(_, c)| !c.pass).collect();
        assert!(bad.is_empty(), "{bad:?}");
    }

    #[test]
    fn not_key_builtin_fails_only_on_the_sign() {
        let r = run("example-not-key", false);
        let bad: Vec<_> = r.claims().filter(|(_, c)| !c.pass).map(|(_, c)| c.quantity.clone()).collect();
        assert_eq!(bad, vec!["in_w(f) = in_w(X)".to_string()]);
    }

    #[test]
    fn strict_mode_rejects_family_checked() {
        let r = run("example-cdc", true);
        assert!(r.claims().any(|(_, c)| !c.pass && c.status == Some(Status::FamilyChecked)));
    }

    #[test]
    fn reports_are_deterministic() {
        let a = serde_json::to_string(&run("example-stability", false)).unwrap();
        let b = serde_json::to_string(&run("example-stability", false)).unwrap();
        assert_eq!(a, b);
    }
}
