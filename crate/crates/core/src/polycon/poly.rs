//! Sparse multivariate polynomials and rational functions over the rationals.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::exactnum::{fmt_rational, int, CommRing, Rational};

/// Exponent vector, ordered graded-lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Polynomial in a fixed, ordered list of variables. Arithmetic between
/// polynomials over different variable lists panics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiPoly {
    vars: Vec<String>,
    terms: BTreeMap<Monomial, Rational>,
}

impl MultiPoly {
    pub fn zero(vars: &[String]) -> Self {
        MultiPoly {
            vars: vars.to_vec(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &[String], q: Rational) -> Self {
        let mut p = Self::zero(vars);
        if !q.is_zero() {
            p.terms.insert(Monomial(vec![0; vars.len()]), q);
        }
        p
    }

    /// The `i`-th variable.
    pub fn var(vars: &[String], i: usize) -> Self {
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        let mut p = Self::zero(vars);
        p.terms.insert(Monomial(e), Rational::one());
        p
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.iter().next() {
            None => Some(Rational::zero()),
            Some((m, c)) if self.terms.len() == 1 && m.degree() == 0 => Some(c.clone()),
            _ => None,
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degrees = self.terms.keys().map(Monomial::degree);
        match degrees.next() {
            None => true,
            Some(d) => degrees.all(|e| e == d),
        }
    }

    /// Highest power of variable `i` that occurs.
    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|m| m.0[i]).max().unwrap_or(0)
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    fn check_vars(&self, other: &Self) {
        assert_eq!(self.vars, other.vars, "polynomials over different variables");
    }

    pub fn scale(&self, k: &Rational) -> Self {
        if k.is_zero() {
            return Self::zero(&self.vars);
        }
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(&self.vars, Rational::one());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        self.terms.iter().fold(Rational::zero(), |acc, (m, c)| {
            let v = m
                .0
                .iter()
                .zip(point)
                .fold(c.clone(), |t, (&e, x)| t * num_traits::pow(x.clone(), e as usize));
            acc + v
        })
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        self.terms.iter().fold(0.0, |acc, (m, c)| {
            let v = m
                .0
                .iter()
                .zip(point)
                .fold(c.to_f64().unwrap_or(f64::NAN), |t, (&e, x)| t * x.powi(e as i32));
            acc + v
        })
    }

    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Self::zero(&self.vars);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.0[i] -= 1;
            out.add_term(m2, c * int(e as i64));
        }
        out
    }

    /// Replaces variable `i` by `values[i]`, which all live over a common
    /// variable list.
    pub fn substitute(&self, values: &[MultiPoly]) -> MultiPoly {
        assert_eq!(values.len(), self.vars.len());
        let target = values
            .first()
            .map(|v| v.vars.clone())
            .unwrap_or_default();
        let mut out = MultiPoly::zero(&target);
        for (m, c) in &self.terms {
            let mut t = MultiPoly::constant(&target, c.clone());
            for (v, &e) in values.iter().zip(&m.0) {
                if e > 0 {
                    t = &t * &v.pow(e);
                }
            }
            out = &out + &t;
        }
        out
    }

    /// Maximum absolute coefficient.
    pub fn max_coefficient(&self) -> Rational {
        self.terms
            .values()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }

    /// Divides out the leading coefficient, giving a canonical scalar multiple.
    pub fn monic(&self) -> Self {
        match self.terms.values().next_back() {
            Some(c) => self.scale(&c.recip()),
            None => self.clone(),
        }
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        self.check_vars(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self.check_vars(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        self.check_vars(rhs);
        let mut out = MultiPoly::zero(&self.vars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let m = Monomial(ma.0.iter().zip(&mb.0).map(|(a, b)| a + b).collect());
                out.add_term(m, ca * cb);
            }
        }
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(&-Rational::one())
    }
}

impl CommRing for MultiPoly {
    fn zero_like(&self) -> Self {
        MultiPoly::zero(&self.vars)
    }
    fn one_like(&self) -> Self {
        MultiPoly::constant(&self.vars, Rational::one())
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
}

impl fmt::Display for MultiPoly {
    /// Highest terms first, e.g. `2*c1^2*c2 - c3 + 1/2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mut factors: Vec<String> = Vec::new();
            if !abs.is_one() || m.degree() == 0 {
                factors.push(fmt_rational(&abs));
            }
            for (v, &e) in self.vars.iter().zip(&m.0) {
                match e {
                    0 => {}
                    1 => factors.push(v.clone()),
                    _ => factors.push(format!("{v}^{e}")),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

/// Quotient of two polynomials over the same variables. Not reduced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalFunction {
    pub num: MultiPoly,
    pub den: MultiPoly,
}

impl RationalFunction {
    pub fn from_poly(p: MultiPoly) -> Self {
        let den = p.one_like();
        RationalFunction { num: p, den }
    }

    pub fn constant(vars: &[String], q: Rational) -> Self {
        Self::from_poly(MultiPoly::constant(vars, q))
    }

    pub fn vars(&self) -> &[String] {
        self.num.vars()
    }

    fn combine(&self, other: &Self, sub: bool) -> Self {
        let a = &self.num * &other.den;
        let b = &other.num * &self.den;
        let den = if self.den == other.den {
            return RationalFunction {
                num: if sub { &self.num - &other.num } else { &self.num + &other.num },
                den: self.den.clone(),
            };
        } else {
            &self.den * &other.den
        };
        RationalFunction {
            num: if sub { &a - &b } else { &a + &b },
            den,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, true)
    }

    pub fn mul(&self, other: &Self) -> Self {
        RationalFunction {
            num: &self.num * &other.num,
            den: &self.den * &other.den,
        }
    }

    /// `None` when dividing by the zero polynomial.
    pub fn div(&self, other: &Self) -> Option<Self> {
        if other.num.is_zero() {
            return None;
        }
        Some(RationalFunction {
            num: &self.num * &other.den,
            den: &self.den * &other.num,
        })
    }

    pub fn neg(&self) -> Self {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        RationalFunction {
            num: self.num.pow(e),
            den: self.den.pow(e),
        }
    }

    /// `None` where the denominator vanishes.
    pub fn eval(&self, point: &[Rational]) -> Option<Rational> {
        let d = self.den.eval(point);
        (!d.is_zero()).then(|| self.num.eval(point) / d)
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.den.as_constant() {
            Some(d) if d.is_one() => write!(f, "{}", self.num),
            _ => write!(f, "({}) / ({})", self.num, self.den),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExprError {
    pub position: usize,
    pub message: String,
}

impl fmt::Display for ExprError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at offset {}: {}", self.position, self.message)
    }
}

impl std::error::Error for ExprError {}

/// Parses an arithmetic expression in the named parameters, e.g.
/// `t*(3t - 2s)/(3t + 4s)`. Supports `+ - * / ^`, parentheses, integer
/// literals and juxtaposition as multiplication.
pub fn parse_rational_function(text: &str, params: &[String]) -> Result<RationalFunction, ExprError> {
    let mut p = ExprParser {
        src: text.as_bytes(),
        pos: 0,
        params,
    };
    let r = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(r)
}

struct ExprParser<'a> {
    src: &'a [u8],
    pos: usize,
    params: &'a [String],
}

impl ExprParser<'_> {
    fn error(&self, message: &str) -> ExprError {
        ExprError {
            position: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<RationalFunction, ExprError> {
        let mut acc = self.term()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if c == b'+' { acc.add(&rhs) } else { acc.sub(&rhs) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RationalFunction, ExprError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = acc.mul(&self.factor()?);
                }
                Some(b'/') => {
                    self.pos += 1;
                    let rhs = self.factor()?;
                    acc = acc.div(&rhs).ok_or_else(|| self.error("division by zero"))?;
                }
                Some(c) if c == b'(' || c.is_ascii_alphabetic() || c == b'_' => {
                    acc = acc.mul(&self.factor()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<RationalFunction, ExprError> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(self.factor()?.neg());
        }
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let e: u32 = std::str::from_utf8(&self.src[start..self.pos])
                .ok()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| self.error("expected a non-negative integer exponent"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<RationalFunction, ExprError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let n: num_bigint::BigInt = std::str::from_utf8(&self.src[start..self.pos])
                    .expect("ascii digits")
                    .parse()
                    .expect("digits parse");
                Ok(RationalFunction::constant(self.params, Rational::from_integer(n)))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii identifier");
                match self.params.iter().position(|p| p == name) {
                    Some(i) => Ok(RationalFunction::from_poly(MultiPoly::var(self.params, i))),
                    None => {
                        self.pos = start;
                        Err(self.error(&format!("unknown parameter {name:?}")))
                    }
                }
            }
            _ => Err(self.error("expected a number, parameter or '('")),
        }
    }
}
