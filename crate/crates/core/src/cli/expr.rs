//! Expression syntax for scenario files.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' unary)?
//! atom   := INT | NAME | NAME '(' expr (',' expr)* ')' | '(' expr ')'
//! ```
//!
//! Names are `t`, `g` (generator of the residue field of the base), `p`,
//! loop variables and previously defined elements. Calls: `as(u[, branch])`
//! for an Artin-Schreier root of `X^p - X - u`, `root(n, u[, branch])` for
//! `u^(1/n)` and `sum(k, lo, hi, body)`. Rationals only appear as exponents
//! and expected values; element constants must be integers.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::coefficient_field::Fq;
use crate::error::{Error, Result};
use crate::tower::{Element, Tower};
use crate::value_group::GroupElement;

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Int(BigInt),
    Name(String),
    Neg(Box<Expr>),
    Bin(char, Box<Expr>, Box<Expr>),
    Call(String, Vec<Expr>),
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Name(String),
    Sym(char),
}

fn lex(src: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let cs: Vec<char> = src.chars().collect();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let s = i;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            let lit: String = cs[s..i].iter().collect();
            out.push(Tok::Int(lit.parse().unwrap()));
        } else if c.is_alphabetic() || c == '_' {
            let s = i;
            while i < cs.len() && (cs[i].is_alphanumeric() || cs[i] == '_') {
                i += 1;
            }
            out.push(Tok::Name(cs[s..i].iter().collect()));
        } else if "+-*/^(),".contains(c) {
            out.push(Tok::Sym(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected {c:?} in {src:?}")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    src: &'a str,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn fail<T>(&self, what: &str) -> Result<T> {
        Err(Error::Parse(format!("{what} at token {} of {:?}", self.pos, self.src)))
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Some(Tok::Sym(c)) if *c == '+' || *c == '-' => *c,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(self.term()?));
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Some(Tok::Sym(c)) if *c == '*' || *c == '/' => *c,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(self.unary()?));
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        let base = self.atom()?;
        if self.eat('^') {
            return Ok(Expr::Bin('^', Box::new(base), Box::new(self.unary()?)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(Expr::Int(n))
            }
            Some(Tok::Name(name)) => {
                self.pos += 1;
                if !self.eat('(') {
                    return Ok(Expr::Name(name));
                }
                let mut args = vec![self.expr()?];
                while self.eat(',') {
                    args.push(self.expr()?);
                }
                if !self.eat(')') {
                    return self.fail("expected ')'");
                }
                Ok(Expr::Call(name, args))
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return self.fail("expected ')'");
                }
                Ok(e)
            }
            _ => self.fail("expected a number, name or '('"),
        }
    }
}

pub fn parse(src: &str) -> Result<Expr> {
    let mut p = Parser {
        toks: lex(src)?,
        pos: 0,
        src,
    };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return p.fail("trailing input");
    }
    Ok(e)
}

#[derive(Debug, Clone)]
pub enum Val {
    Num(BigRational),
    Elt(Element),
}

/// Names visible to an expression.
pub struct Env<'a> {
    pub tw: &'a Tower,
    pub vars: HashMap<String, Val>,
}

impl<'a> Env<'a> {
    pub fn new(tw: &'a Tower) -> Self {
        let mut vars = HashMap::new();
        vars.insert("p".to_string(), Val::Num(BigRational::from_integer(tw.p().into())));
        Env { tw, vars }
    }

    pub fn element(&self, src: &str) -> Result<Element> {
        let v = self.eval(&parse(src)?)?;
        self.to_elt(v)
    }

    pub fn rational(&self, src: &str) -> Result<BigRational> {
        match self.eval(&parse(src)?)? {
            Val::Num(q) => Ok(q),
            Val::Elt(_) => Err(Error::Validation(format!("{src:?} is not a number"))),
        }
    }

    /// `inf`, `(q, eps)` or a numeric expression.
    pub fn group_element(&self, src: &str) -> Result<GroupElement> {
        let s = src.trim();
        if s == "inf" {
            return Ok(GroupElement::Infinity);
        }
        if let Some(inner) = s.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
            if let Some((q, e)) = inner.rsplit_once(',') {
                let eps = self.rational(e)?;
                if !eps.is_integer() {
                    return Err(Error::Validation(format!("infinitesimal part of {s:?} must be an integer")));
                }
                return Ok(GroupElement::new(self.rational(q)?, eps.to_integer().to_i64().unwrap_or(0)));
            }
        }
        Ok(GroupElement::rational(self.rational(s)?))
    }

    fn to_elt(&self, v: Val) -> Result<Element> {
        match v {
            Val::Elt(e) => Ok(e),
            Val::Num(q) if q.is_integer() => {
                let n = q.to_integer().mod_floor(&BigInt::from(self.tw.p()));
                Ok(self.tw.int(n.to_i64().unwrap()))
            }
            Val::Num(q) => Err(Error::Validation(format!("rational constant {q} used as a field element"))),
        }
    }

    fn small(&self, v: Val, what: &str) -> Result<i64> {
        match v {
            Val::Num(q) if q.is_integer() => q
                .to_integer()
                .to_i64()
                .ok_or_else(|| Error::Validation(format!("{what} out of range"))),
            _ => Err(Error::Validation(format!("{what} must be an integer"))),
        }
    }

    pub fn eval(&self, e: &Expr) -> Result<Val> {
        let tw = self.tw;
        match e {
            Expr::Int(n) => Ok(Val::Num(BigRational::from_integer(n.clone()))),
            Expr::Name(n) if n == "t" => Ok(Val::Elt(tw.t_pow(BigRational::one()))),
            Expr::Name(n) if n == "g" => Ok(Val::Elt(tw.constant(Fq::generator(tw.p(), tw.base.m0)?)?)),
            Expr::Name(n) => self
                .vars
                .get(n)
                .cloned()
                .ok_or_else(|| Error::Validation(format!("unknown name {n:?}"))),
            Expr::Neg(x) => match self.eval(x)? {
                Val::Num(q) => Ok(Val::Num(-q)),
                Val::Elt(x) => Ok(Val::Elt(tw.neg(&x)?)),
            },
            Expr::Bin('^', b, x) => {
                let x = self.eval(x)?;
                if **b == Expr::Name("t".into()) {
                    return match x {
                        Val::Num(q) => Ok(Val::Elt(tw.t_pow(q))),
                        Val::Elt(_) => Err(Error::Validation("exponent of t must be a number".into())),
                    };
                }
                let k = self.small(x, "exponent")?;
                match self.eval(b)? {
                    Val::Num(q) if q.is_zero() && k < 0 => Err(Error::Validation("0 to a negative power".into())),
                    Val::Num(q) => Ok(Val::Num(num_traits::pow::Pow::pow(&q, k as i32))),
                    Val::Elt(_) if k < 0 => Err(Error::Validation("negative power of an element".into())),
                    Val::Elt(x) => {
                        let mut acc = tw.int(1);
                        for _ in 0..k {
                            acc = tw.mul(&acc, &x)?;
                        }
                        Ok(Val::Elt(acc))
                    }
                }
            }
            Expr::Bin(op, l, r) => {
                let (l, r) = (self.eval(l)?, self.eval(r)?);
                match (l, r) {
                    (Val::Num(a), Val::Num(b)) => Ok(Val::Num(match op {
                        '+' => a + b,
                        '-' => a - b,
                        '*' => a * b,
                        _ if b.is_zero() => return Err(Error::Validation("division by zero".into())),
                        _ => a / b,
                    })),
                    (_, _) if *op == '/' => Err(Error::Validation("division of field elements is not supported".into())),
                    (l, r) => {
                        let (a, b) = (self.to_elt(l)?, self.to_elt(r)?);
                        Ok(Val::Elt(match op {
                            '+' => tw.add(&a, &b)?,
                            '-' => tw.sub(&a, &b)?,
                            _ => tw.mul(&a, &b)?,
                        }))
                    }
                }
            }
            Expr::Call(f, args) => self.call(f, args),
        }
    }

    fn call(&self, f: &str, args: &[Expr]) -> Result<Val> {
        let tw = self.tw;
        let arity = |lo: usize, hi: usize| {
            if args.len() < lo || args.len() > hi {
                Err(Error::Validation(format!("{f} takes {lo} to {hi} arguments")))
            } else {
                Ok(())
            }
        };
        let branch = |i: usize| -> Result<u32> {
            match args.get(i) {
                None => Ok(0),
                Some(e) => {
                    let b = self.small(self.eval(e)?, "branch")?;
                    u32::try_from(b).map_err(|_| Error::Validation("branch must be nonnegative".into()))
                }
            }
        };
        match f {
            "as" => {
                arity(1, 2)?;
                let u = self.to_elt(self.eval(&args[0])?)?;
                Ok(Val::Elt(tw.as_root(&u, branch(1)?)?))
            }
            "root" => {
                arity(2, 3)?;
                let n = self.small(self.eval(&args[0])?, "root index")?;
                let n = u32::try_from(n)
                    .ok()
                    .filter(|n| *n >= 1)
                    .ok_or_else(|| Error::Validation("root index must be positive".into()))?;
                let u = self.to_elt(self.eval(&args[1])?)?;
                Ok(Val::Elt(tw.nth_root(&u, n, branch(2)?)?))
            }
            "sum" => {
                arity(4, 4)?;
                let var = match &args[0] {
                    Expr::Name(v) => v.clone(),
                    _ => return Err(Error::Validation("sum variable must be a name".into())),
                };
                let lo = self.small(self.eval(&args[1])?, "sum bound")?;
                let hi = self.small(self.eval(&args[2])?, "sum bound")?;
                let mut acc = Val::Num(BigRational::zero());
                for k in lo..=hi {
                    let mut inner = Env {
                        tw,
                        vars: self.vars.clone(),
                    };
                    inner.vars.insert(var.clone(), Val::Num(BigRational::from_integer(k.into())));
                    let term = inner.eval(&args[3])?;
                    acc = match (acc, term) {
                        (Val::Num(a), Val::Num(b)) => Val::Num(a + b),
                        (a, b) => Val::Elt(tw.add(&self.to_elt(a)?, &self.to_elt(b)?)?),
                    };
                }
                Ok(acc)
            }
            _ => Err(Error::Validation(format!("unknown function {f:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hahn_series::HahnSeries;
    use crate::value_group::{int, rat};

    #[test]
    fn parses_precedence() {
        let e = parse("1 - t^(1/2) * 2").unwrap();
        match e {
            Expr::Bin('-', _, r) => assert!(matches!(*r, Expr::Bin('*', _, _))),
            _ => panic!("{e:?}"),
        }
        assert!(parse("t^").is_err());
        assert!(parse("(t").is_err());
        assert!(parse("t $ 1").is_err());
    }

    #[test]
    fn numbers_and_exponents() {
        let tw = Tower::laurent(3, 1);
        let mut env = Env::new(&tw);
        env.vars.insert("n".into(), Val::Num(int(2)));
        assert_eq!(env.rational("p^(n+1)").unwrap(), int(27));
        assert_eq!(env.rational("-1/4 + 1/2").unwrap(), rat(1, 4));
        assert_eq!(env.group_element("(1/4, 1)").unwrap(), GroupElement::new(rat(1, 4), 1));
        assert_eq!(env.group_element("inf").unwrap(), GroupElement::Infinity);
    }

    #[test]
    fn exact_elements() {
        let tw = Tower::laurent(5, 1);
        let env = Env::new(&tw);
        let x = env.element("t^(1/2) + 2*t^3 - 1").unwrap();
        let expect = HahnSeries::from_terms(
            5,
            vec![(int(0), Fq::from_i64(5, 4)), (rat(1, 2), Fq::one(5)), (int(3), Fq::from_i64(5, 2))],
            None,
        );
        assert_eq!(x.as_exact(), Some(&expect));
        let s = env.element("sum(k, 0, 2, t^(p^k))").unwrap();
        assert_eq!(s.as_exact().unwrap().terms().len(), 3);
        assert!(env.element("1/2").is_err());
        assert!(env.element("b").is_err());
    }

    #[test]
    fn roots() {
        let tw = Tower::laurent(3, 1);
        let mut env = Env::new(&tw);
        let a = env.element("as(-t)").unwrap();
        env.vars.insert("a".into(), Val::Elt(a.clone()));
        let b = env.element("as(1 - a)").unwrap();
        assert_eq!(tw.degree(&b).unwrap(), 3);
        let r = env.element("root(2, t)").unwrap();
        assert_eq!(tw.degree(&r).unwrap(), 2);
    }
}
