//! Exact scalars: rationals, prime fields, and rational expressions in named
//! parameters that are evaluated at concrete assignments.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Name of the weight parameter in expressions.
pub const WEIGHT: &str = "lambda";

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    Rational,
    Prime(u64),
}

impl Field {
    pub fn prime(p: u64) -> Result<Field> {
        if p >= 1 << 32 {
            return Err(Error::ModulusTooLarge(p));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Field::Prime(p))
    }

    /// Parses `rational`, `q`, or `fp:<p>`.
    pub fn parse(s: &str) -> Result<Field> {
        let s = s.trim();
        match s {
            "rational" | "q" | "Q" => Ok(Field::Rational),
            _ => {
                let p = s
                    .strip_prefix("fp:")
                    .or_else(|| s.strip_prefix("F_"))
                    .ok_or_else(|| Error::Usage(format!("unknown field `{s}`")))?;
                let p: u64 = p
                    .parse()
                    .map_err(|_| Error::Usage(format!("bad modulus in `{s}`")))?;
                Field::prime(p)
            }
        }
    }

    pub fn zero(&self) -> FieldElement {
        self.from_int(0)
    }

    pub fn one(&self) -> FieldElement {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> FieldElement {
        match self {
            Field::Rational => FieldElement::Rational(BigRational::from_integer(n.into())),
            Field::Prime(p) => FieldElement::Modular {
                value: n.rem_euclid(*p as i64) as u64,
                modulus: *p,
            },
        }
    }

    /// Maps a rational into the field; fails when the denominator vanishes mod p.
    pub fn from_rational(&self, r: &BigRational) -> Result<FieldElement> {
        match self {
            Field::Rational => Ok(FieldElement::Rational(r.clone())),
            Field::Prime(p) => {
                let pm = BigInt::from(*p);
                let num = r.numer().mod_floor(&pm).to_u64().unwrap();
                let den = r.denom().mod_floor(&pm).to_u64().unwrap();
                if den == 0 {
                    return Err(Error::DivisionByZero(r.denom().to_string()));
                }
                let n = FieldElement::Modular { value: num, modulus: *p };
                let d = FieldElement::Modular { value: den, modulus: *p };
                Ok(n * d.inverse().expect("nonzero"))
            }
        }
    }

    pub fn parse_element(&self, s: &str) -> Result<FieldElement> {
        let r = parse_ratio(s).ok_or_else(|| Error::Usage(format!("bad scalar `{s}`")))?;
        self.from_rational(&r)
    }

    /// All elements of a prime field in increasing order; `None` for rationals.
    pub fn elements(&self) -> Option<Vec<FieldElement>> {
        match self {
            Field::Rational => None,
            Field::Prime(p) => Some((0..*p as i64).map(|i| self.from_int(i)).collect()),
        }
    }

    pub fn modulus(&self) -> Option<u64> {
        match self {
            Field::Rational => None,
            Field::Prime(p) => Some(*p),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "rational"),
            Field::Prime(p) => write!(f, "fp:{p}"),
        }
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn parse_ratio(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n, d))
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

fn ratio_string(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// An element of the active field. Mixing elements of different fields is a
/// programming error and panics.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldElement {
    Rational(BigRational),
    Modular { value: u64, modulus: u64 },
}

impl FieldElement {
    pub fn is_zero(&self) -> bool {
        match self {
            FieldElement::Rational(r) => r.is_zero(),
            FieldElement::Modular { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldElement::Rational(r) => r.is_one(),
            FieldElement::Modular { value, .. } => *value == 1,
        }
    }

    pub fn field(&self) -> Field {
        match self {
            FieldElement::Rational(_) => Field::Rational,
            FieldElement::Modular { modulus, .. } => Field::Prime(*modulus),
        }
    }

    pub fn zero_like(&self) -> FieldElement {
        self.field().zero()
    }

    pub fn inverse(&self) -> Option<FieldElement> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            FieldElement::Rational(r) => FieldElement::Rational(r.recip()),
            FieldElement::Modular { value, modulus } => FieldElement::Modular {
                value: pow_mod(*value, modulus - 2, *modulus),
                modulus: *modulus,
            },
        })
    }

    pub fn checked_div(&self, other: &FieldElement) -> Option<FieldElement> {
        other.inverse().map(|inv| self * &inv)
    }

    /// Canonical integer-ratio representative (residues in `[0, p)`).
    pub fn to_rational(&self) -> BigRational {
        match self {
            FieldElement::Rational(r) => r.clone(),
            FieldElement::Modular { value, .. } => BigRational::from_integer((*value).into()),
        }
    }

    pub fn as_residue(&self) -> Option<u64> {
        match self {
            FieldElement::Modular { value, .. } => Some(*value),
            FieldElement::Rational(_) => None,
        }
    }
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElement::Rational(r) => f.write_str(&ratio_string(r)),
            FieldElement::Modular { value, .. } => write!(f, "{value}"),
        }
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $rat:expr, $modop:expr) => {
        impl<'a> $trait<&'a FieldElement> for &'a FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &'a FieldElement) -> FieldElement {
                match (self, rhs) {
                    (FieldElement::Rational(a), FieldElement::Rational(b)) => {
                        FieldElement::Rational($rat(a, b))
                    }
                    (
                        FieldElement::Modular { value: a, modulus: m },
                        FieldElement::Modular { value: b, modulus: n },
                    ) if m == n => FieldElement::Modular {
                        value: $modop(*a, *b, *m),
                        modulus: *m,
                    },
                    _ => panic!("arithmetic across different fields"),
                }
            }
        }
        impl $trait for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                (&self).$method(&rhs)
            }
        }
    };
}

binop!(Add, add, |a: &BigRational, b: &BigRational| a + b, |a: u64, b: u64, m: u64| (a + b) % m);
binop!(Sub, sub, |a: &BigRational, b: &BigRational| a - b, |a: u64, b: u64, m: u64| (a + m - b) % m);
binop!(Mul, mul, |a: &BigRational, b: &BigRational| a * b, |a: u64, b: u64, m: u64| a * b % m);

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        match self {
            FieldElement::Rational(r) => FieldElement::Rational(-r),
            FieldElement::Modular { value, modulus } => FieldElement::Modular {
                value: (modulus - value) % modulus,
                modulus: *modulus,
            },
        }
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

/// Parameter values keyed by name.
pub type Assignment = BTreeMap<String, FieldElement>;

pub fn format_assignment(a: &Assignment) -> String {
    let parts: Vec<String> = a.iter().map(|(k, v)| format!("{k}={v}")).collect();
    format!("{{{}}}", parts.join(", "))
}

/// A rational expression over named parameters.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ParamExpr {
    Const(BigRational),
    Param(String),
    Neg(Box<ParamExpr>),
    Add(Box<ParamExpr>, Box<ParamExpr>),
    Sub(Box<ParamExpr>, Box<ParamExpr>),
    Mul(Box<ParamExpr>, Box<ParamExpr>),
    Div(Box<ParamExpr>, Box<ParamExpr>),
}

impl ParamExpr {
    pub fn int(n: i64) -> ParamExpr {
        ParamExpr::Const(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> ParamExpr {
        ParamExpr::int(0)
    }

    pub fn param(name: &str) -> ParamExpr {
        ParamExpr::Param(name.to_string())
    }

    pub fn weight() -> ParamExpr {
        ParamExpr::param(WEIGHT)
    }

    pub fn from_element(e: &FieldElement) -> ParamExpr {
        ParamExpr::Const(e.to_rational())
    }

    pub fn as_const(&self) -> Option<&BigRational> {
        match self {
            ParamExpr::Const(c) => Some(c),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ParamExpr::Const(c) if c.is_zero())
    }

    pub fn div(self, rhs: ParamExpr) -> ParamExpr {
        match (&self, &rhs) {
            (ParamExpr::Const(a), ParamExpr::Const(b)) if !b.is_zero() => ParamExpr::Const(a / b),
            (_, ParamExpr::Const(b)) if b.is_one() => self,
            _ => ParamExpr::Div(Box::new(self), Box::new(rhs)),
        }
    }

    pub fn params(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_params(&mut out);
        out
    }

    fn collect_params(&self, out: &mut BTreeSet<String>) {
        match self {
            ParamExpr::Const(_) => {}
            ParamExpr::Param(p) => {
                out.insert(p.clone());
            }
            ParamExpr::Neg(a) => a.collect_params(out),
            ParamExpr::Add(a, b) | ParamExpr::Sub(a, b) | ParamExpr::Mul(a, b) | ParamExpr::Div(a, b) => {
                a.collect_params(out);
                b.collect_params(out);
            }
        }
    }

    /// Every denominator subexpression, for deriving forbidden loci.
    pub fn denominators(&self) -> Vec<ParamExpr> {
        let mut out = Vec::new();
        self.collect_denominators(&mut out);
        out
    }

    fn collect_denominators(&self, out: &mut Vec<ParamExpr>) {
        match self {
            ParamExpr::Const(_) | ParamExpr::Param(_) => {}
            ParamExpr::Neg(a) => a.collect_denominators(out),
            ParamExpr::Add(a, b) | ParamExpr::Sub(a, b) | ParamExpr::Mul(a, b) => {
                a.collect_denominators(out);
                b.collect_denominators(out);
            }
            ParamExpr::Div(a, b) => {
                a.collect_denominators(out);
                b.collect_denominators(out);
                if b.as_const().is_none() && !out.contains(b) {
                    out.push((**b).clone());
                }
            }
        }
    }

    pub fn eval(&self, field: &Field, assignment: &Assignment) -> Result<FieldElement> {
        Ok(match self {
            ParamExpr::Const(c) => field.from_rational(c)?,
            ParamExpr::Param(p) => assignment
                .get(p)
                .cloned()
                .ok_or_else(|| Error::Unassigned(p.clone()))?,
            ParamExpr::Neg(a) => -a.eval(field, assignment)?,
            ParamExpr::Add(a, b) => a.eval(field, assignment)? + b.eval(field, assignment)?,
            ParamExpr::Sub(a, b) => a.eval(field, assignment)? - b.eval(field, assignment)?,
            ParamExpr::Mul(a, b) => a.eval(field, assignment)? * b.eval(field, assignment)?,
            ParamExpr::Div(a, b) => {
                let num = a.eval(field, assignment)?;
                let den = b.eval(field, assignment)?;
                num.checked_div(&den)
                    .ok_or_else(|| Error::DivisionByZero(b.to_string()))?
            }
        })
    }

    /// Replaces assigned parameters by constants and folds what becomes constant.
    pub fn substitute(&self, a: &Assignment) -> ParamExpr {
        match self {
            ParamExpr::Const(_) => self.clone(),
            ParamExpr::Param(p) => a.get(p).map_or_else(|| self.clone(), |v| ParamExpr::Const(v.to_rational())),
            ParamExpr::Neg(x) => -x.substitute(a),
            ParamExpr::Add(x, y) => x.substitute(a) + y.substitute(a),
            ParamExpr::Sub(x, y) => x.substitute(a) - y.substitute(a),
            ParamExpr::Mul(x, y) => x.substitute(a) * y.substitute(a),
            ParamExpr::Div(x, y) => x.substitute(a).div(y.substitute(a)),
        }
    }

    pub fn parse(text: &str) -> Result<ParamExpr> {
        let mut p = ExprParser { src: text, toks: tokenize(text)?, pos: 0 };
        let e = p.expr()?;
        if p.pos != p.toks.len() {
            return Err(p.err("trailing input"));
        }
        Ok(e)
    }

    fn precedence(&self) -> u8 {
        match self {
            ParamExpr::Add(..) | ParamExpr::Sub(..) => 1,
            ParamExpr::Mul(..) | ParamExpr::Div(..) => 2,
            ParamExpr::Neg(_) => 3,
            ParamExpr::Const(c) if !c.is_integer() => 2,
            ParamExpr::Const(c) if c.is_negative() => 3,
            _ => 4,
        }
    }
}

impl fmt::Display for ParamExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn wrap(f: &mut fmt::Formatter<'_>, e: &ParamExpr, min: u8) -> fmt::Result {
            if e.precedence() < min {
                write!(f, "({e})")
            } else {
                write!(f, "{e}")
            }
        }
        match self {
            ParamExpr::Const(c) => f.write_str(&ratio_string(c)),
            ParamExpr::Param(p) => f.write_str(p),
            ParamExpr::Neg(a) => {
                f.write_str("-")?;
                wrap(f, a, 3)
            }
            ParamExpr::Add(a, b) => {
                wrap(f, a, 1)?;
                f.write_str("+")?;
                wrap(f, b, 2)
            }
            ParamExpr::Sub(a, b) => {
                wrap(f, a, 1)?;
                f.write_str("-")?;
                wrap(f, b, 2)
            }
            ParamExpr::Mul(a, b) => {
                wrap(f, a, 2)?;
                f.write_str("*")?;
                wrap(f, b, 3)
            }
            ParamExpr::Div(a, b) => {
                wrap(f, a, 2)?;
                f.write_str("/")?;
                wrap(f, b, 3)
            }
        }
    }
}

impl Add for ParamExpr {
    type Output = ParamExpr;
    fn add(self, rhs: ParamExpr) -> ParamExpr {
        match (&self, &rhs) {
            (ParamExpr::Const(a), ParamExpr::Const(b)) => ParamExpr::Const(a + b),
            _ if self.is_zero() => rhs,
            _ if rhs.is_zero() => self,
            _ => ParamExpr::Add(Box::new(self), Box::new(rhs)),
        }
    }
}

impl Sub for ParamExpr {
    type Output = ParamExpr;
    fn sub(self, rhs: ParamExpr) -> ParamExpr {
        match (&self, &rhs) {
            (ParamExpr::Const(a), ParamExpr::Const(b)) => ParamExpr::Const(a - b),
            _ if rhs.is_zero() => self,
            _ if self.is_zero() => -rhs,
            _ => ParamExpr::Sub(Box::new(self), Box::new(rhs)),
        }
    }
}

impl Mul for ParamExpr {
    type Output = ParamExpr;
    fn mul(self, rhs: ParamExpr) -> ParamExpr {
        match (&self, &rhs) {
            (ParamExpr::Const(a), ParamExpr::Const(b)) => ParamExpr::Const(a * b),
            _ if self.is_zero() || rhs.is_zero() => ParamExpr::zero(),
            (ParamExpr::Const(a), _) if a.is_one() => rhs,
            (_, ParamExpr::Const(b)) if b.is_one() => self,
            (ParamExpr::Const(a), _) if (-a).is_one() => -rhs,
            _ => ParamExpr::Mul(Box::new(self), Box::new(rhs)),
        }
    }
}

impl Neg for ParamExpr {
    type Output = ParamExpr;
    fn neg(self) -> ParamExpr {
        match self {
            ParamExpr::Const(c) => ParamExpr::Const(-c),
            ParamExpr::Neg(a) => *a,
            other => ParamExpr::Neg(Box::new(other)),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Sym(char),
}

fn tokenize(s: &str) -> Result<Vec<(usize, Tok)>> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = s.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].1.is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().map(|(_, c)| c).collect();
            out.push((pos, Tok::Num(text.parse().unwrap())));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].1.is_alphanumeric() || chars[i].1 == '_') {
                i += 1;
            }
            let mut text: String = chars[start..i].iter().map(|(_, c)| c).collect();
            if text == "λ" {
                text = WEIGHT.to_string();
            }
            out.push((pos, Tok::Ident(text)));
        } else if "+-*/()".contains(c) {
            out.push((pos, Tok::Sym(c)));
            i += 1;
        } else if c == '−' {
            out.push((pos, Tok::Sym('-')));
            i += 1;
        } else {
            return Err(Error::ExprParse { pos, msg: format!("unexpected `{c}`") });
        }
    }
    Ok(out)
}

struct ExprParser<'a> {
    src: &'a str,
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

impl ExprParser<'_> {
    fn err(&self, msg: &str) -> Error {
        let pos = self.toks.get(self.pos).map(|t| t.0).unwrap_or(self.src.len());
        Error::ExprParse { pos, msg: msg.to_string() }
    }

    fn peek_sym(&self) -> Option<char> {
        match self.toks.get(self.pos) {
            Some((_, Tok::Sym(c))) => Some(*c),
            _ => None,
        }
    }

    fn expr(&mut self) -> Result<ParamExpr> {
        let mut acc = self.term()?;
        while let Some(c @ ('+' | '-')) = self.peek_sym() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if c == '+' {
                ParamExpr::Add(Box::new(acc), Box::new(rhs))
            } else {
                ParamExpr::Sub(Box::new(acc), Box::new(rhs))
            };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<ParamExpr> {
        let mut acc = self.unary()?;
        while let Some(c @ ('*' | '/')) = self.peek_sym() {
            self.pos += 1;
            let rhs = self.unary()?;
            acc = if c == '*' {
                ParamExpr::Mul(Box::new(acc), Box::new(rhs))
            } else {
                ParamExpr::Div(Box::new(acc), Box::new(rhs))
            };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<ParamExpr> {
        if self.peek_sym() == Some('-') {
            self.pos += 1;
            return Ok(match self.unary()? {
                ParamExpr::Const(c) => ParamExpr::Const(-c),
                e => ParamExpr::Neg(Box::new(e)),
            });
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<ParamExpr> {
        let tok = self.toks.get(self.pos).cloned();
        match tok {
            Some((_, Tok::Num(n))) => {
                self.pos += 1;
                Ok(ParamExpr::Const(BigRational::from_integer(n)))
            }
            Some((_, Tok::Ident(name))) => {
                self.pos += 1;
                Ok(ParamExpr::Param(name))
            }
            Some((_, Tok::Sym('('))) => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek_sym() != Some(')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(e)
            }
            _ => Err(self.err("expected number, identifier or `(`")),
        }
    }
}

/// Seeded draws of parameter assignments that avoid the zero sets of the
/// forbidden expressions.
pub struct Specializer {
    rng: ChaCha8Rng,
    pub seed: u64,
    pub budget: usize,
}

impl Specializer {
    pub fn new(seed: u64) -> Specializer {
        Specializer { rng: ChaCha8Rng::seed_from_u64(seed), seed, budget: 200 }
    }

    fn draw_value(&mut self, field: &Field) -> FieldElement {
        match field {
            Field::Rational => {
                let n: i64 = self.rng.gen_range(-30..=30);
                let d: i64 = self.rng.gen_range(1..=7);
                FieldElement::Rational(BigRational::new(n.into(), d.into()))
            }
            Field::Prime(p) => field.from_int(self.rng.gen_range(0..*p) as i64),
        }
    }

    pub fn next(
        &mut self,
        params: &[String],
        field: &Field,
        forbidden: &[ParamExpr],
    ) -> Result<Assignment> {
        for _ in 0..self.budget {
            let a: Assignment = params
                .iter()
                .map(|p| (p.clone(), self.draw_value(field)))
                .collect();
            let ok = forbidden
                .iter()
                .all(|e| matches!(e.eval(field, &a), Ok(v) if !v.is_zero()));
            if ok {
                return Ok(a);
            }
        }
        Err(Error::RetryBudget(self.budget))
    }
}

pub fn random_assignment(
    params: &[String],
    field: &Field,
    forbidden: &[ParamExpr],
    seed: u64,
) -> Result<Assignment> {
    Specializer::new(seed).next(params, field, forbidden)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> FieldElement {
        FieldElement::Rational(BigRational::new(n.into(), d.into()))
    }

    #[test]
    fn characteristic_two() {
        let f = Field::prime(2).unwrap();
        assert!((f.one() + f.one()).is_zero());
    }

    #[test]
    fn exact_rationals() {
        assert_eq!(q(1, 3) + q(1, 6), q(1, 2));
    }

    #[test]
    fn composite_modulus_rejected() {
        assert!(matches!(Field::prime(4), Err(Error::NotPrime(4))));
        assert_eq!(Field::prime(4).unwrap_err().to_string(), "modulus not prime: 4");
    }

    #[test]
    fn eval_rational_function() {
        let e = ParamExpr::parse("(lambda+p1)*(lambda+p2)/p3").unwrap();
        let a: Assignment = [("lambda", 1), ("p1", 0), ("p2", 1), ("p3", 2)]
            .iter()
            .map(|(k, v)| (k.to_string(), Field::Rational.from_int(*v)))
            .collect();
        assert_eq!(e.eval(&Field::Rational, &a).unwrap(), q(1, 1));
    }

    #[test]
    fn eval_names_vanishing_denominator() {
        let e = ParamExpr::parse("p1*p2/(λ+p2)").unwrap();
        let a: Assignment = [("lambda", 1), ("p1", 3), ("p2", -1)]
            .iter()
            .map(|(k, v)| (k.to_string(), Field::Rational.from_int(*v)))
            .collect();
        let err = e.eval(&Field::Rational, &a).unwrap_err();
        assert_eq!(err.to_string(), "division by zero: lambda+p2");
    }

    #[test]
    fn unassigned_parameter() {
        let e = ParamExpr::parse("p7").unwrap();
        assert!(matches!(e.eval(&Field::Rational, &Assignment::new()), Err(Error::Unassigned(_))));
        assert!(ParamExpr::zero().eval(&Field::Rational, &Assignment::new()).unwrap().is_zero());
    }

    #[test]
    fn printing_round_trips() {
        for s in ["-(lambda+p1)*(lambda+p1+p2)/p3", "p1*p2/(lambda+p2)", "1/2*lambda", "-lambda", "a-(b-c)", "-3/4"] {
            let e = ParamExpr::parse(s).unwrap();
            assert_eq!(ParamExpr::parse(&e.to_string()).unwrap(), e, "{s}");
        }
        assert_eq!(ParamExpr::parse("a-(b-c)").unwrap().to_string(), "a-(b-c)");
    }

    #[test]
    fn specialization_avoids_forbidden_loci() {
        let params = vec!["lambda".to_string(), "p2".to_string()];
        let forbidden = vec![ParamExpr::parse("lambda+p2").unwrap()];
        let a = random_assignment(&params, &Field::Rational, &forbidden, 7).unwrap();
        assert!(!forbidden[0].eval(&Field::Rational, &a).unwrap().is_zero());
        assert_eq!(a, random_assignment(&params, &Field::Rational, &forbidden, 7).unwrap());
        assert!(random_assignment(&params, &Field::Rational, &[ParamExpr::int(1)], 1).is_ok());
        assert!(matches!(
            random_assignment(&params, &Field::Rational, &[ParamExpr::zero()], 1),
            Err(Error::RetryBudget(_))
        ));
    }

    #[test]
    fn rationals_map_into_prime_fields() {
        let f = Field::prime(7).unwrap();
        let half = f.from_rational(&BigRational::new(1.into(), 2.into())).unwrap();
        assert_eq!(&half + &half, f.one());
        assert!(f.from_rational(&BigRational::new(1.into(), 7.into())).is_err());
    }

    fn element(field: Field) -> impl Strategy<Value = FieldElement> {
        match field {
            Field::Rational => (-50i64..50, 1i64..20).prop_map(|(n, d)| q(n, d)).boxed(),
            Field::Prime(p) => (0..p as i64).prop_map(move |v| Field::Prime(p).from_int(v)).boxed(),
        }
    }

    fn any_field() -> impl Strategy<Value = Field> {
        prop_oneof![Just(Field::Rational), Just(Field::Prime(2)), Just(Field::Prime(5)), Just(Field::Prime(65521))]
    }

    fn triple() -> impl Strategy<Value = (FieldElement, FieldElement, FieldElement)> {
        any_field().prop_flat_map(|f| (element(f.clone()), element(f.clone()), element(f)))
    }

    proptest! {
        #[test]
        fn field_axioms((a, b, c) in triple()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&(&a - &b) + &b, a.clone());
            if let Some(inv) = a.inverse() {
                prop_assert!((&a * &inv).is_one());
            }
        }

        #[test]
        fn eval_is_a_ring_homomorphism(x in -20i64..20, y in -20i64..20, op in 0usize..3) {
            let f = Field::Rational;
            let a: Assignment = [("x".to_string(), f.from_int(x)), ("y".to_string(), f.from_int(y))].into();
            let (ex, ey) = (ParamExpr::param("x"), ParamExpr::param("y"));
            let (vx, vy) = (f.from_int(x), f.from_int(y));
            let (e, v) = match op {
                0 => (ParamExpr::Add(Box::new(ex), Box::new(ey)), vx + vy),
                1 => (ParamExpr::Sub(Box::new(ex), Box::new(ey)), vx - vy),
                _ => (ParamExpr::Mul(Box::new(ex), Box::new(ey)), vx * vy),
            };
            prop_assert_eq!(e.eval(&f, &a).unwrap(), v);
        }
    }
}
