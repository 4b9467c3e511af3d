//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the lines reach the terminal. A
//! criterion listed in `KNOWN_RED` is expected to print FAIL; the target
//! fails if any other criterion fails or if a known red starts passing.

use std::time::{Duration, Instant};

use valext::chains::{build_chain, verify_chain};
use valext::cli::fuzz::{fuzz, instance_rng, rand_puiseux, Profile};
use valext::cli::report::ScenarioReport;
use valext::cli::run::run_scenario;
use valext::cli::scenario::{builtin, Overrides, Scenario};
use valext::defect_calculus::fundamental_equality_check;
use valext::pairval::{j_invariant, Pair, PolyOverK, Status};
use valext::tower::{PrecisionConfig, Tower};
use valext::value_group::{int, GroupElement};

/// `(criterion, reason)` for criteria that cannot be met as stated.
const KNOWN_RED: &[(u32, &str)] = &[(
    2,
    "in_w(X^3 - X + t) = in_w(-X), not in_w(X), for p = 3",
)];

type Criterion = (u32, &'static str, u64, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn ok(detail: impl Into<String>) -> Outcome {
    Outcome {
        pass: true,
        detail: detail.into(),
    }
}

fn fail(detail: impl Into<String>) -> Outcome {
    Outcome {
        pass: false,
        detail: detail.into(),
    }
}

fn scenario(name: &str) -> ScenarioReport {
    let sc = Scenario::parse(builtin(name).unwrap()).unwrap();
    run_scenario(&sc, &Overrides::default()).unwrap()
}

fn claim<'a>(r: &'a ScenarioReport, p: u32, kind: &str, quantity: &str) -> Option<&'a valext::cli::report::Claim> {
    r.claims()
        .find(|(q, c)| *q == p && c.kind == kind && c.quantity.starts_with(quantity))
        .map(|(_, c)| c)
}

fn failures(r: &ScenarioReport) -> Vec<String> {
    r.claims()
        .filter(|(_, c)| !c.pass)
        .map(|(p, c)| format!("p={p} {} {} = {}", c.kind, c.quantity, c.value))
        .collect()
}

fn criterion_1() -> Outcome {
    let r = scenario("example-cdc");
    let bad = failures(&r);
    if !bad.is_empty() {
        return fail(bad.join("; "));
    }
    for p in [2u32, 3, 5] {
        let dists: Vec<&str> = r
            .claims()
            .filter(|(q, c)| *q == p && c.kind == "distance")
            .map(|(_, c)| c.value.as_str())
            .collect();
        let want: Vec<String> = (1..=7).map(|k| p.pow(k).to_string()).collect();
        if dists != want {
            return fail(format!("p={p}: distances {dists:?}"));
        }
        let delta = claim(&r, p, "delta", "delta").unwrap();
        let cert = claim(&r, p, "delta", "upper-bound").unwrap();
        if delta.value != "0" || delta.status != Some(Status::Certified) || !cert.value.starts_with("residue") {
            return fail(format!("p={p}: delta {} ({})", delta.value, cert.value));
        }
        let degrees = r
            .claims()
            .find(|(q, c)| *q == p && c.kind == "chain" && c.quantity == "degrees")
            .map(|(_, c)| c.value.clone());
        if degrees != Some(format!("[{p}, 1]")) {
            return fail(format!("p={p}: chain degrees {degrees:?}"));
        }
        let no_chain = r
            .claims()
            .any(|(q, c)| q == p && c.quantity == "diagnostic" && c.value.contains("unbounded"));
        if !no_chain {
            return fail(format!("p={p}: no unbounded-distance diagnostic over F_p(t)"));
        }
    }
    ok("distances p^(n+1) for n <= 6, delta = 0 (residue), chain (b, 0), NoChain over F_p(t)")
}

fn criterion_2() -> Outcome {
    let r = scenario("example-not-key");
    let w = claim(&r, 3, "w", "w_w(f)").unwrap();
    let j0 = claim(&r, 3, "j", "j_w(f)").unwrap();
    let ja = claim(&r, 3, "j", "j_wa(f)").unwrap();
    let in_x = claim(&r, 3, "initial-forms-equal", "in_w(f) = in_w(X)").unwrap();
    let in_minus_x = claim(&r, 3, "initial-forms-equal", "in_w(f) = in_w(minus-X)").unwrap();
    let key = claim(&r, 3, "key", "key(f)").unwrap();
    // the henselian analogue of f: its factor X - a over F_3((t))
    let tw = Tower::laurent(3, 1);
    let a = tw.as_root(&tw.neg(&tw.t_pow(int(1))).unwrap(), 0).unwrap();
    let jh = j_invariant(
        &tw,
        &PolyOverK::linear(&a),
        &Pair::new(tw.zero(), GroupElement::from_ints(1, 2)),
    )
    .unwrap();
    let detail = format!(
        "w(f) = {}, j_w(f) = {}, j_wa(f) = {}, j(f^h) = {jh}, in(f) = in(X): {}, in(f) = in(-X): {}, {}",
        w.value, j0.value, ja.value, in_x.value, in_minus_x.value, key.value
    );
    let rest = w.value == "1/2"
        && j0.value == "1"
        && ja.value == "1"
        && jh == 1
        && key.value == "NotKeyByInitialForm";
    if rest && in_x.value == "true" {
        ok(detail)
    } else {
        fail(detail)
    }
}

fn criterion_3() -> Outcome {
    let r = scenario("example-stability");
    let bad = failures(&r);
    if !bad.is_empty() {
        return fail(bad.join("; "));
    }
    for p in [3u32, 5] {
        let defect = r
            .claims()
            .find(|(q, c)| *q == p && c.kind == "invariants" && c.check == 0 && c.quantity == "defect")
            .map(|(_, c)| c.value.clone());
        let deg_b = claim(&r, p, "invariants", "[K(b)").unwrap();
        if defect != Some(p.to_string()) || deg_b.value != (2 * p).to_string() {
            return fail(format!("p={p}: defect(a) {defect:?}, [K(b):K] {}", deg_b.value));
        }
    }
    ok("defect(a) = p, [K(b):K] = 2p, j(Q) = 1, j(f) = 2, lhs = rhs = 2, defectless certified")
}

fn criterion_4() -> Outcome {
    let s = fuzz(1, 200, Profile::RatioLaw, PrecisionConfig::default());
    let key = s.stats.get("key-certified").copied().unwrap_or(0);
    let eq = s.stats.get("key-equalities").copied().unwrap_or(0);
    let detail = format!("{} instances, {} violations, equality in {eq}/{key} certified keys", s.checked, s.violations.len());
    if s.ok() && key > 0 && key == eq {
        ok(detail)
    } else {
        fail(format!("{detail}: {:?}", s.violations.first().map(|v| &v.detail)))
    }
}

fn criterion_5() -> Outcome {
    let s = fuzz(1, 500, Profile::OracleAgreement, PrecisionConfig::default());
    let detail = format!("{} instances, {} disagreements", s.checked, s.violations.len());
    if s.ok() {
        ok(detail)
    } else {
        fail(format!("{detail}: {:?}", s.violations.first().map(|v| &v.detail)))
    }
}

fn criterion_6() -> Outcome {
    let mut links = 0;
    for p in [2u32, 3, 5] {
        let tw = Tower::laurent(p, 1);
        let a = tw.as_root(&tw.neg(&tw.t_pow(int(1))).unwrap(), 0).unwrap();
        let u = tw.sub(&tw.int(1), &a).unwrap();
        let b = tw.as_root(&u, 0).unwrap();
        match build_chain(&tw, &b).and_then(|c| verify_chain(&tw, &c)) {
            Ok(rep) if rep.links.iter().all(|l| l.divides) => links += rep.links.len(),
            other => return fail(format!("example chain p={p}: {other:?}")),
        }
    }
    let s = fuzz(1, 50, Profile::ChainRoundtrip, PrecisionConfig::default());
    let random_links = s.stats.get("links").copied().unwrap_or(0);
    let detail = format!(
        "{links} example links and {random_links} links over {} random towers confirmed",
        s.checked
    );
    if s.ok() && random_links > 0 {
        ok(detail)
    } else {
        fail(format!("{detail}: {:?}", s.violations.first().map(|v| &v.detail)))
    }
}

fn criterion_7() -> Outcome {
    let s = fuzz(1, 100, Profile::IndexIdentities, PrecisionConfig::default());
    let detail = format!("{} instances, {} violations", s.checked, s.violations.len());
    if s.ok() {
        ok(detail)
    } else {
        fail(format!("{detail}: {:?}", s.violations.first().map(|v| &v.detail)))
    }
}

fn criterion_8() -> Outcome {
    let mut tame = 0;
    for i in 0..100u64 {
        let mut rng = instance_rng(8, i);
        let p = [3u32, 5, 7][(i % 3) as usize];
        let tw = Tower::laurent(p, 1);
        let b = tw.exact(rand_puiseux(&mut rng, p).series()).unwrap();
        let inv = tw.ext_invariants(&b);
        if inv.deg != inv.e * inv.f || !fundamental_equality_check(&tw, &b) {
            return fail(format!("tame {b}: {inv:?}"));
        }
        tame += 1;
    }
    for p in [2u32, 3, 5, 7] {
        let tw = Tower::perfect(p);
        let a = tw.as_root(&tw.t_pow(int(-1)), 0).unwrap();
        let inv = tw.ext_invariants(&a);
        if inv.defect != p as u64 || fundamental_equality_check(&tw, &a) {
            return fail(format!("perfect-base AS root p={p}: {inv:?}"));
        }
    }
    ok(format!("{tame} tame towers with deg = e f; defect p for the perfect-base AS root, p in {{2,3,5,7}}"))
}

fn main() {
    let criteria: [Criterion; 8] = [
        (1, "Artin-Schreier chain example", 10, criterion_1),
        (2, "not-a-key example", 1, criterion_2),
        (3, "stability example", 5, criterion_3),
        (4, "ratio law", 30, criterion_4),
        (5, "oracle agreement", 30, criterion_5),
        (6, "minimal pairs and degree divisibility along chains", 30, criterion_6),
        (7, "j under the associated transcendental value", 10, criterion_7),
        (8, "fundamental equality", 5, criterion_8),
    ];
    let mut unexpected = Vec::new();
    for (n, name, limit, run) in criteria {
        let start = Instant::now();
        let mut out = run();
        let took = start.elapsed();
        if took > Duration::from_secs(limit) {
            out = fail(format!("{} (took {took:.2?}, limit {limit} s)", out.detail));
        }
        let known = KNOWN_RED.iter().find(|(k, _)| *k == n);
        println!(
            "criterion {n} {}: {name}: {} [{took:.2?}]",
            if out.pass { "PASS" } else { "FAIL" },
            out.detail
        );
        if let Some((_, why)) = known {
            println!("    known red: {why}");
        }
        if out.pass == known.is_some() {
            unexpected.push(n);
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected acceptance outcome for criteria {unexpected:?}");
        std::process::exit(1);
    }
}
