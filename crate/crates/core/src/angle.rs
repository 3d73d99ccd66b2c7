//! Exact rotation angles in R/Z.
//!
//! An [`ExactAngle`] is a reduced rational in `[0, 1)` plus a finite rational
//! combination of declared irrational generators. Generators are assumed to
//! be rationally independent of `1` and of each other, which makes equality
//! and rationality decidable on canonical forms.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AngleError {
    #[error("generator `{0}` is not declared in this context")]
    ContextMismatch(String),
    #[error("no numeric value supplied for generator `{0}`")]
    MissingGeneratorValue(String),
    #[error("malformed angle expression `{expr}`: {reason}")]
    Parse { expr: String, reason: String },
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
}

/// The declared irrational generators, in declaration order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GeneratorContext {
    ids: Vec<String>,
    descriptions: Vec<String>,
}

impl GeneratorContext {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn declare(
        &mut self,
        id: impl Into<String>,
        description: impl Into<String>,
    ) -> Result<(), AngleError> {
        let id = id.into();
        if self.contains(&id) {
            return Err(AngleError::DuplicateGenerator(id));
        }
        self.ids.push(id);
        self.descriptions.push(description.into());
        Ok(())
    }

    pub fn contains(&self, id: &str) -> bool {
        self.ids.iter().any(|g| g == id)
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn description(&self, id: &str) -> Option<&str> {
        self.ids
            .iter()
            .position(|g| g == id)
            .map(|i| self.descriptions[i].as_str())
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    /// Fails with `ContextMismatch` if `a` mentions an undeclared generator.
    pub fn check(&self, a: &ExactAngle) -> Result<(), AngleError> {
        match a.generators().find(|g| !self.contains(g)) {
            Some(g) => Err(AngleError::ContextMismatch(g.to_string())),
            None => Ok(()),
        }
    }

    pub fn add(&self, a: &ExactAngle, b: &ExactAngle) -> Result<ExactAngle, AngleError> {
        self.check(a)?;
        self.check(b)?;
        Ok(a + b)
    }
}

/// An element of R/Z in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExactAngle {
    rational: BigRational,
    coefficients: BTreeMap<String, BigRational>,
}

fn reduce_mod_one(q: BigRational) -> BigRational {
    let floor = q.floor();
    q - floor
}

impl ExactAngle {
    pub fn zero() -> Self {
        Self {
            rational: BigRational::zero(),
            coefficients: BTreeMap::new(),
        }
    }

    pub fn rational(q: BigRational) -> Self {
        Self {
            rational: reduce_mod_one(q),
            coefficients: BTreeMap::new(),
        }
    }

    pub fn from_ratio(numer: i64, denom: i64) -> Self {
        Self::rational(BigRational::new(numer.into(), denom.into()))
    }

    /// `coeff * gen`, with zero rational part.
    pub fn generator(id: impl Into<String>, coeff: BigRational) -> Self {
        let mut coefficients = BTreeMap::new();
        if !coeff.is_zero() {
            coefficients.insert(id.into(), coeff);
        }
        Self {
            rational: BigRational::zero(),
            coefficients,
        }
    }

    pub fn from_parts(
        rational: BigRational,
        coefficients: impl IntoIterator<Item = (String, BigRational)>,
    ) -> Self {
        let mut out = Self::rational(rational);
        for (g, c) in coefficients {
            out.add_coefficient(g, c);
        }
        out
    }

    fn add_coefficient(&mut self, g: String, c: BigRational) {
        let entry = self.coefficients.entry(g).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.coefficients.retain(|_, v| !v.is_zero());
        }
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.rational
    }

    pub fn coefficient(&self, generator: &str) -> BigRational {
        self.coefficients
            .get(generator)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn coefficients(&self) -> &BTreeMap<String, BigRational> {
        &self.coefficients
    }

    pub fn generators(&self) -> impl Iterator<Item = &str> {
        self.coefficients.keys().map(String::as_str)
    }

    pub fn is_rational(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// True iff the angle is `0` in R/Z.
    pub fn is_integer_multiple(&self) -> bool {
        self.is_rational() && self.rational.is_zero()
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        let kq = BigRational::from_integer(k.clone());
        let mut out = Self::rational(&self.rational * &kq);
        if !k.is_zero() {
            for (g, c) in &self.coefficients {
                out.coefficients.insert(g.clone(), c * &kq);
            }
        }
        out
    }

    /// Least common multiple of the denominators of the rational part and of
    /// every generator coefficient.
    pub fn denominator_lcm(&self) -> BigInt {
        self.coefficients
            .values()
            .fold(self.rational.denom().clone(), |acc, c| acc.lcm(c.denom()))
    }

    /// Numeric value in `[0, 1)` given floating-point values for the generators.
    pub fn to_float(&self, values: &BTreeMap<String, f64>) -> Result<f64, AngleError> {
        let mut acc = ratio_to_f64(&self.rational);
        for (g, c) in &self.coefficients {
            let v = values
                .get(g)
                .ok_or_else(|| AngleError::MissingGeneratorValue(g.clone()))?;
            let whole = c.trunc();
            let frac = c - &whole;
            let whole_part = whole.to_integer().to_f64().unwrap_or(0.0) * v;
            acc += whole_part.rem_euclid(1.0) + ratio_to_f64(&frac) * v;
        }
        let r = acc.rem_euclid(1.0);
        Ok(if r >= 1.0 { 0.0 } else { r })
    }
}

fn ratio_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(0.0)
}

impl Default for ExactAngle {
    fn default() -> Self {
        Self::zero()
    }
}

impl Add for &ExactAngle {
    type Output = ExactAngle;

    fn add(self, rhs: &ExactAngle) -> ExactAngle {
        let mut out = ExactAngle::rational(&self.rational + &rhs.rational);
        out.coefficients = self.coefficients.clone();
        for (g, c) in &rhs.coefficients {
            out.add_coefficient(g.clone(), c.clone());
        }
        out
    }
}

impl Add for ExactAngle {
    type Output = ExactAngle;

    fn add(self, rhs: ExactAngle) -> ExactAngle {
        &self + &rhs
    }
}

impl Neg for &ExactAngle {
    type Output = ExactAngle;

    fn neg(self) -> ExactAngle {
        self.scale(&BigInt::from(-1))
    }
}

impl Sub for &ExactAngle {
    type Output = ExactAngle;

    fn sub(self, rhs: &ExactAngle) -> ExactAngle {
        self + &(-rhs)
    }
}

impl std::iter::Sum for ExactAngle {
    fn sum<I: Iterator<Item = ExactAngle>>(iter: I) -> Self {
        iter.fold(ExactAngle::zero(), |a, b| &a + &b)
    }
}

fn write_ratio(f: &mut fmt::Formatter<'_>, q: &BigRational) -> fmt::Result {
    if q.denom().is_one() {
        write!(f, "{}", q.numer())
    } else {
        write!(f, "{}/{}", q.numer(), q.denom())
    }
}

/// Canonical form `p/q [+ c/d*g]...`; negative coefficients print as `- c/d*g`.
impl fmt::Display for ExactAngle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_ratio(f, &self.rational)?;
        for (g, c) in &self.coefficients {
            if c.is_negative() {
                f.write_str(" - ")?;
                write_ratio(f, &-c)?;
            } else {
                f.write_str(" + ")?;
                write_ratio(f, c)?;
            }
            write!(f, "*{g}")?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// parsing

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Slash,
    Star,
}

fn tokenize(src: &str) -> Result<Vec<Token>, String> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            c if c.is_whitespace() => i += 1,
            '+' => {
                out.push(Token::Plus);
                i += 1;
            }
            '-' => {
                out.push(Token::Minus);
                i += 1;
            }
            '/' => {
                out.push(Token::Slash);
                i += 1;
            }
            '*' => {
                out.push(Token::Star);
                i += 1;
            }
            c if c.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                out.push(Token::Int(
                    s.parse().map_err(|_| "bad integer".to_string())?,
                ));
            }
            c if c.is_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push(Token::Ident(chars[start..i].iter().collect()));
            }
            other => return Err(format!("unexpected character `{other}`")),
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn rat(&mut self) -> Result<BigRational, String> {
        let numer = match self.next() {
            Some(Token::Int(n)) => n,
            _ => return Err("expected integer".into()),
        };
        if self.peek() == Some(&Token::Slash) {
            self.pos += 1;
            match self.next() {
                Some(Token::Int(d)) if !d.is_zero() => Ok(BigRational::new(numer, d)),
                Some(Token::Int(_)) => Err("zero denominator".into()),
                _ => Err("expected denominator".into()),
            }
        } else {
            Ok(BigRational::from_integer(numer))
        }
    }

    /// `rat ('*' ident)?`
    fn term(&mut self) -> Result<(BigRational, Option<String>), String> {
        let q = self.rat()?;
        if self.peek() == Some(&Token::Star) {
            self.pos += 1;
            match self.next() {
                Some(Token::Ident(g)) => Ok((q, Some(g))),
                _ => Err("expected generator name after `*`".into()),
            }
        } else {
            Ok((q, None))
        }
    }
}

/// Parses `rat`, `rat (('+'|'-') rat '*' ident)+` or
/// `rat? (('+'|'-')? rat '*' ident)+`. Only the leading term may be a bare
/// rational; every later term must name a generator.
pub fn parse_angle(src: &str) -> Result<ExactAngle, AngleError> {
    let err = |reason: String| AngleError::Parse {
        expr: src.to_string(),
        reason,
    };
    let tokens = tokenize(src).map_err(err)?;
    if tokens.is_empty() {
        return Err(err("empty expression".into()));
    }
    let mut p = Parser { tokens, pos: 0 };
    let mut out = ExactAngle::zero();
    let mut first = true;
    while p.peek().is_some() {
        let negative = match p.peek() {
            Some(Token::Plus) => {
                p.pos += 1;
                false
            }
            Some(Token::Minus) => {
                p.pos += 1;
                true
            }
            _ if first => false,
            _ => return Err(err("expected `+` or `-` between terms".into())),
        };
        let (mut q, g) = p.term().map_err(err)?;
        if negative {
            q = -q;
        }
        match g {
            Some(g) => out = &out + &ExactAngle::generator(g, q),
            None if first => out = &out + &ExactAngle::rational(q),
            None => return Err(err("only the leading term may be a bare rational".into())),
        }
        first = false;
    }
    Ok(out)
}

impl FromStr for ExactAngle {
    type Err = AngleError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_angle(s)
    }
}
