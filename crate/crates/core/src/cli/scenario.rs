//! Scenario files: TOML describing a base field, named tower elements,
//! polynomials and pairs, and the checks to run on them.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::expr;
use crate::coefficient_field::field;
use crate::error::{Error, Result};
use crate::tower::{PrecisionConfig, Tower};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BaseKind {
    /// `F_q((t))`, henselian.
    Laurent,
    /// `F_q((t))` elements with degrees taken over `F_q(t)`.
    Rational,
    /// Henselized perfect hull of `F_p(t)`.
    Perfect,
}

impl BaseKind {
    pub fn name(self) -> &'static str {
        match self {
            BaseKind::Laurent => "laurent",
            BaseKind::Rational => "rational",
            BaseKind::Perfect => "perfect",
        }
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigSection {
    pub depth: Option<usize>,
    pub retries: Option<u32>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElementDef {
    pub name: String,
    pub value: String,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct PolyDef {
    pub name: String,
    /// Minimal polynomial of an element.
    pub min_poly: Option<String>,
    /// `X - z`.
    pub linear: Option<String>,
    /// Coefficients in the base, constant term first.
    pub coeffs: Option<Vec<String>>,
    /// Product of the minimal polynomials of the listed elements.
    pub factors: Option<Vec<String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairDef {
    pub name: String,
    pub a: String,
    pub gamma: String,
    /// Tag the pair with its minimality certificate rather than `asserted`.
    #[serde(default)]
    pub certify: bool,
}

/// An expected value: numbers and booleans as written, strings as
/// expressions (or verbatim for names and verdicts).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Expect {
    Bool(bool),
    Int(i64),
    Str(String),
    List(Vec<Expect>),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(
    tag = "kind",
    rename_all = "kebab-case",
    rename_all_fields = "kebab-case",
    deny_unknown_fields
)]
pub enum CheckDef {
    /// `v(x - y)`, optionally for each `var` in `range`.
    Distance {
        x: String,
        y: String,
        expect: Option<Expect>,
        range: Option<[i64; 2]>,
        var: Option<String>,
    },
    /// Degree, ramification index, residue degree and defect of `K(x)|K`.
    Invariants {
        x: String,
        henselian: Option<bool>,
        expect_deg: Option<Expect>,
        expect_e: Option<Expect>,
        expect_f: Option<Expect>,
        expect_defect: Option<Expect>,
    },
    /// `delta(b, K)` over the standard search family.
    Delta {
        b: String,
        henselian: Option<bool>,
        expect: Option<Expect>,
        /// Substring of the upper-bound certificate.
        certificate: Option<String>,
    },
    /// Greedy complete distinguished chain and its verification.
    Chain {
        b: String,
        henselian: Option<bool>,
        /// A certificate tag, or `no-chain`.
        expect: Option<String>,
        expect_degrees: Option<Expect>,
        /// Substring of the no-chain diagnostic.
        diagnostic: Option<String>,
    },
    W {
        pair: String,
        poly: String,
        expect: Option<Expect>,
    },
    J {
        pair: String,
        poly: String,
        expect: Option<Expect>,
    },
    InitialFormsEqual {
        pair: String,
        f: String,
        g: String,
        expect: Option<bool>,
    },
    Key {
        pair: String,
        poly: String,
        expect: Option<String>,
        witness: Option<String>,
        /// Extra elements `z` contributing `X - z` to the search family.
        #[serde(default)]
        family: Vec<String>,
    },
    MinimalPair {
        pair: String,
        expect: Option<String>,
    },
    Stability {
        pair_b: String,
        pair_a: String,
        f: String,
        q: String,
        expect_lhs: Option<Expect>,
        expect_rhs: Option<Expect>,
        expect_j_f: Option<Expect>,
        expect_j_q: Option<Expect>,
        expect_defectless: Option<bool>,
    },
    /// `j(f) deg Q <= deg f j(Q)` for `Q` the minimal polynomial of the
    /// pair's element.
    RatioLaw { pair: String, poly: String },
    /// Roots against Taylor evaluation.
    OracleAgreement { pair: String, poly: String },
    /// `j` under `gamma -> (gamma, -1)`.
    JShift { pair: String, poly: String },
    /// A seeded property suite.
    Property { profile: String, count: usize },
}

impl CheckDef {
    pub fn kind(&self) -> &'static str {
        match self {
            CheckDef::Distance { .. } => "distance",
            CheckDef::Invariants { .. } => "invariants",
            CheckDef::Delta { .. } => "delta",
            CheckDef::Chain { .. } => "chain",
            CheckDef::W { .. } => "w",
            CheckDef::J { .. } => "j",
            CheckDef::InitialFormsEqual { .. } => "initial-forms-equal",
            CheckDef::Key { .. } => "key",
            CheckDef::MinimalPair { .. } => "minimal-pair",
            CheckDef::Stability { .. } => "stability",
            CheckDef::RatioLaw { .. } => "ratio-law",
            CheckDef::OracleAgreement { .. } => "oracle-agreement",
            CheckDef::JShift { .. } => "j-shift",
            CheckDef::Property { .. } => "property",
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct Scenario {
    pub name: String,
    pub description: Option<String>,
    pub base: BaseKind,
    pub primes: Vec<u32>,
    #[serde(default = "one")]
    pub residue_degree: u32,
    #[serde(default)]
    pub config: ConfigSection,
    #[serde(default)]
    pub element: Vec<ElementDef>,
    #[serde(default)]
    pub poly: Vec<PolyDef>,
    #[serde(default)]
    pub pair: Vec<PairDef>,
    #[serde(default)]
    pub check: Vec<CheckDef>,
}

fn one() -> u32 {
    1
}

pub const BUILTINS: &[(&str, &str)] = &[
    ("example-cdc", include_str!("builtin/example-cdc.toml")),
    ("example-not-key", include_str!("builtin/example-not-key.toml")),
    ("example-stability", include_str!("builtin/example-stability.toml")),
];

pub fn builtin(name: &str) -> Option<&'static str> {
    BUILTINS.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

/// Overrides from the command line, applied over the scenario's own config.
#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub depth: Option<usize>,
    pub retries: Option<u32>,
    pub strict: bool,
}

impl Scenario {
    pub fn parse(src: &str) -> Result<Scenario> {
        let sc: Scenario = toml::from_str(src).map_err(|e| Error::Parse(e.to_string()))?;
        sc.validate()?;
        Ok(sc)
    }

    /// Builtin name or file path.
    pub fn load(selector: &str) -> Result<Scenario> {
        match builtin(selector) {
            Some(src) => Scenario::parse(src),
            None => {
                let src = std::fs::read_to_string(selector)
                    .map_err(|e| Error::Parse(format!("cannot read scenario {selector:?}: {e}")))?;
                Scenario::parse(&src)
            }
        }
    }

    pub fn precision(&self, o: &Overrides) -> PrecisionConfig {
        let d = PrecisionConfig::default();
        PrecisionConfig {
            depth: o.depth.or(self.config.depth).unwrap_or(d.depth),
            retries: o.retries.or(self.config.retries).unwrap_or(d.retries),
        }
    }

    pub fn seed(&self, o: &Overrides) -> u64 {
        o.seed.or(self.config.seed).unwrap_or(1)
    }

    pub fn tower(&self, p: u32, cfg: PrecisionConfig) -> Tower {
        let tw = match self.base {
            BaseKind::Laurent => Tower::laurent(p, self.residue_degree),
            BaseKind::Rational => Tower::rational(p, self.residue_degree),
            BaseKind::Perfect => Tower::perfect(p),
        };
        tw.with_config(cfg)
    }

    /// Static checks: primes, unique names, references and expression syntax.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Validation(format!("{}: {m}", self.name)));
        if self.primes.is_empty() {
            return bad("no primes given".into());
        }
        for &p in &self.primes {
            if p < 2 || !(2..p).take_while(|d| d * d <= p).all(|d| p % d != 0) {
                return bad(format!("{p} is not prime"));
            }
            if field(p, self.residue_degree).is_err() {
                return bad(format!("no field table for F_{p}^{}", self.residue_degree));
            }
        }
        if self.base == BaseKind::Perfect && self.residue_degree != 1 {
            return bad("the perfect base has residue field F_p".into());
        }
        let mut names: HashSet<&str> = ["t", "g", "p"].into_iter().collect();
        for e in &self.element {
            if !names.insert(&e.name) {
                return bad(format!("element name {:?} is reserved or repeated", e.name));
            }
            expr::parse(&e.value)?;
        }
        let mut polys = HashSet::new();
        for f in &self.poly {
            if !polys.insert(f.name.as_str()) {
                return bad(format!("polynomial {:?} defined twice", f.name));
            }
            let forms = [
                f.min_poly.is_some(),
                f.linear.is_some(),
                f.coeffs.is_some(),
                f.factors.is_some(),
            ];
            if forms.iter().filter(|x| **x).count() != 1 {
                return bad(format!(
                    "polynomial {:?} needs exactly one of min-poly, linear, coeffs, factors",
                    f.name
                ));
            }
            let srcs = f
                .min_poly
                .iter()
                .chain(&f.linear)
                .chain(f.coeffs.iter().flatten())
                .chain(f.factors.iter().flatten());
            for s in srcs {
                expr::parse(s)?;
            }
            if matches!(&f.factors, Some(v) if v.is_empty()) || matches!(&f.coeffs, Some(v) if v.is_empty()) {
                return bad(format!("polynomial {:?} is empty", f.name));
            }
        }
        let mut pairs = HashSet::new();
        for w in &self.pair {
            if !pairs.insert(w.name.as_str()) {
                return bad(format!("pair {:?} defined twice", w.name));
            }
            expr::parse(&w.a)?;
        }
        let need_pair = |n: &str| {
            if pairs.contains(n) {
                Ok(())
            } else {
                Err(Error::Validation(format!("{}: unknown pair {n:?}", self.name)))
            }
        };
        let need_poly = |n: &str| {
            if polys.contains(n) {
                Ok(())
            } else {
                Err(Error::Validation(format!("{}: unknown polynomial {n:?}", self.name)))
            }
        };
        for c in &self.check {
            match c {
                CheckDef::Distance { x, y, range, .. } => {
                    expr::parse(x)?;
                    expr::parse(y)?;
                    if matches!(range, Some([lo, hi]) if lo > hi) {
                        return bad("empty distance range".into());
                    }
                }
                CheckDef::Invariants { x, .. } => {
                    expr::parse(x)?;
                }
                CheckDef::Delta { b, .. } | CheckDef::Chain { b, .. } => {
                    expr::parse(b)?;
                }
                CheckDef::W { pair, poly, .. }
                | CheckDef::J { pair, poly, .. }
                | CheckDef::RatioLaw { pair, poly }
                | CheckDef::OracleAgreement { pair, poly }
                | CheckDef::JShift { pair, poly } => {
                    need_pair(pair)?;
                    need_poly(poly)?;
                }
                CheckDef::Key { pair, poly, family, .. } => {
                    need_pair(pair)?;
                    need_poly(poly)?;
                    for z in family {
                        expr::parse(z)?;
                    }
                }
                CheckDef::InitialFormsEqual { pair, f, g, .. } => {
                    need_pair(pair)?;
                    need_poly(f)?;
                    need_poly(g)?;
                }
                CheckDef::MinimalPair { pair, .. } => need_pair(pair)?,
                CheckDef::Stability {
                    pair_b,
                    pair_a,
                    f,
                    q,
                    ..
                } => {
                    need_pair(pair_b)?;
                    need_pair(pair_a)?;
                    need_poly(f)?;
                    need_poly(q)?;
                }
                CheckDef::Property { profile, .. } => {
                    if super::fuzz::Profile::parse(profile).is_none() {
                        return bad(format!("unknown property profile {profile:?}"));
                    }
                }
            }
        }
        Ok(())
    }
}
