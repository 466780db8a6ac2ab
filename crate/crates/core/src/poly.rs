//! Dense univariate polynomials over `F_p`.
//!
//! Coefficients are stored in ascending order (`coeffs[i]` multiplies `x^i`)
//! and kept trailing-zero-free, so the zero polynomial is the empty vector and
//! two polynomials are equal iff their vectors are equal.
//!
//! The degree of the zero polynomial is [`Degree::NegInf`], which sorts below
//! every finite degree and absorbs addition. This lets bounds such as
//! `deg(e) <= tau` admit the zero error without special cases.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};

/// Degree of a polynomial: `NegInf` for zero, otherwise the highest power.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Degree {
    NegInf,
    Finite(usize),
}

impl Degree {
    pub fn is_finite(&self) -> bool {
        matches!(self, Degree::Finite(_))
    }

    /// The finite degree, if any.
    pub fn finite(&self) -> Option<usize> {
        match *self {
            Degree::Finite(d) => Some(d),
            Degree::NegInf => None,
        }
    }

    /// Signed form with `-1` standing in for `NegInf`; only for display and
    /// comparisons against signed bounds such as `tau`.
    pub fn as_i64(&self) -> i64 {
        match *self {
            Degree::Finite(d) => d as i64,
            Degree::NegInf => -1,
        }
    }
}

impl From<usize> for Degree {
    fn from(d: usize) -> Self {
        Degree::Finite(d)
    }
}

impl Add for Degree {
    type Output = Degree;
    fn add(self, rhs: Degree) -> Degree {
        match (self, rhs) {
            (Degree::Finite(a), Degree::Finite(b)) => Degree::Finite(a + b),
            _ => Degree::NegInf,
        }
    }
}

impl Add<usize> for Degree {
    type Output = Degree;
    fn add(self, rhs: usize) -> Degree {
        self + Degree::Finite(rhs)
    }
}

impl PartialEq<usize> for Degree {
    fn eq(&self, other: &usize) -> bool {
        *self == Degree::Finite(*other)
    }
}

impl PartialOrd<usize> for Degree {
    fn partial_cmp(&self, other: &usize) -> Option<Ordering> {
        Some(self.cmp(&Degree::Finite(*other)))
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::Finite(d) => write!(f, "{d}"),
            Degree::NegInf => write!(f, "-inf"),
        }
    }
}

/// `null` for the zero polynomial's degree, a number otherwise.
impl Serialize for Degree {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Degree::Finite(d) => serializer.serialize_u64(*d as u64),
            Degree::NegInf => serializer.serialize_none(),
        }
    }
}

/// A polynomial over `F_p` in canonical (trailing-zero-free) form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    field: Field,
    coeffs: Vec<u64>,
}

impl Polynomial {
    /// Builds a polynomial from ascending coefficients, reducing each mod `p`.
    pub fn new(field: Field, coeffs: Vec<u64>) -> Self {
        let coeffs = coeffs.into_iter().map(|c| field.reduce(c)).collect();
        Self::from_raw(field, coeffs)
    }

    /// Like [`Polynomial::new`] but accepts signed coefficients.
    pub fn from_signed(field: Field, coeffs: &[i64]) -> Self {
        let coeffs = coeffs
            .iter()
            .map(|&c| field.element_signed(c).value())
            .collect();
        Self::from_raw(field, coeffs)
    }

    /// Coefficients must already be reduced.
    fn from_raw(field: Field, mut coeffs: Vec<u64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Self { field, coeffs }
    }

    pub fn zero(field: Field) -> Self {
        Self {
            field,
            coeffs: Vec::new(),
        }
    }

    pub fn one(field: Field) -> Self {
        Self::constant(field, 1)
    }

    pub fn constant(field: Field, c: u64) -> Self {
        Self::new(field, vec![c])
    }

    /// `c * x^k`.
    pub fn monomial(field: Field, c: u64, k: usize) -> Self {
        let mut coeffs = vec![0; k + 1];
        coeffs[k] = field.reduce(c);
        Self::from_raw(field, coeffs)
    }

    /// The polynomial with a 1 at each listed exponent (handy over `F_2`).
    pub fn from_exponents(field: Field, exponents: &[usize]) -> Self {
        let len = exponents.iter().max().map_or(0, |&e| e + 1);
        let mut coeffs = vec![0; len];
        for &e in exponents {
            coeffs[e] = field.add_raw(coeffs[e], 1);
        }
        Self::from_raw(field, coeffs)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// Ascending coefficient values.
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    /// Coefficient of `x^i` (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> FieldElement {
        self.field.element(self.coeffs.get(i).copied().unwrap_or(0))
    }

    pub fn degree(&self) -> Degree {
        match self.coeffs.len() {
            0 => Degree::NegInf,
            n => Degree::Finite(n - 1),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&1)
    }

    /// Leading coefficient; zero for the zero polynomial.
    pub fn leading(&self) -> FieldElement {
        self.field.element(self.coeffs.last().copied().unwrap_or(0))
    }

    fn check_field(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(Error::MixedFields {
                left: self.field.characteristic(),
                right: other.field.characteristic(),
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        let f = self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).copied().unwrap_or(0);
                let b = other.coeffs.get(i).copied().unwrap_or(0);
                f.add_raw(a, b)
            })
            .collect();
        Ok(Self::from_raw(f, coeffs))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        let f = self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).copied().unwrap_or(0);
                let b = other.coeffs.get(i).copied().unwrap_or(0);
                f.sub_raw(a, b)
            })
            .collect();
        Ok(Self::from_raw(f, coeffs))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.field));
        }
        let f = self.field;
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add_raw(out[i + j], f.mul_raw(a, b));
            }
        }
        Ok(Self::from_raw(f, out))
    }

    /// Multiplies every coefficient by `c`.
    pub fn scale(&self, c: FieldElement) -> Self {
        let f = self.field;
        let c = f.reduce(c.value());
        Self::from_raw(f, self.coeffs.iter().map(|&a| f.mul_raw(a, c)).collect())
    }

    /// Scales to leading coefficient 1; the zero polynomial stays zero.
    pub fn monic(&self) -> Self {
        match self.coeffs.last() {
            None | Some(1) => self.clone(),
            Some(&lc) => {
                let inv = self.field.inv_raw(lc).expect("nonzero leading coefficient");
                self.scale(self.field.element(inv))
            }
        }
    }

    /// Euclidean division: `self = q * divisor + r` with `deg(r) < deg(divisor)`.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self)> {
        self.check_field(divisor)?;
        if divisor.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let f = self.field;
        let dlen = divisor.coeffs.len();
        if self.coeffs.len() < dlen {
            return Ok((Self::zero(f), self.clone()));
        }
        let lead_inv = f.inv_raw(*divisor.coeffs.last().unwrap())?;
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0u64; rem.len() - dlen + 1];
        for k in (0..quot.len()).rev() {
            let top = rem[k + dlen - 1];
            if top == 0 {
                continue;
            }
            let q = f.mul_raw(top, lead_inv);
            quot[k] = q;
            for (j, &d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = f.sub_raw(rem[k + j], f.mul_raw(q, d));
            }
        }
        rem.truncate(dlen - 1);
        Ok((Self::from_raw(f, quot), Self::from_raw(f, rem)))
    }

    /// `|self|_{modulus}`.
    pub fn rem(&self, modulus: &Self) -> Result<Self> {
        Ok(self.div_rem(modulus)?.1)
    }

    /// Division that must leave no remainder.
    pub fn exact_div(&self, divisor: &Self) -> Result<Self> {
        let (q, r) = self.div_rem(divisor)?;
        if !r.is_zero() {
            return Err(Error::InexactDivision(format!(
                "{self} is not divisible by {divisor} (remainder {r})"
            )));
        }
        Ok(q)
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        if self.is_zero() && other.is_zero() {
            return Err(Error::BothZero);
        }
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        Ok(a.monic())
    }

    /// Extended Euclid: returns `(g, s, t)` with `s*self + t*other = g`, `g` monic.
    pub fn xgcd(&self, other: &Self) -> Result<(Self, Self, Self)> {
        self.check_field(other)?;
        if self.is_zero() && other.is_zero() {
            return Err(Error::BothZero);
        }
        let f = self.field;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Self::one(f), Self::zero(f));
        let (mut t0, mut t1) = (Self::zero(f), Self::one(f));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1)?;
            let s = &s0 - &(&q * &s1);
            let t = &t0 - &(&q * &t1);
            (r0, r1) = (r1, r);
            (s0, s1) = (s1, s);
            (t0, t1) = (t1, t);
        }
        let inv = r0.leading().inv()?;
        Ok((r0.scale(inv), s0.scale(inv), t0.scale(inv)))
    }

    /// Monic least common multiple.
    pub fn lcm(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        if self.is_zero() || other.is_zero() {
            return Err(Error::ZeroInput);
        }
        let g = self.gcd(other)?;
        Ok(self.exact_div(&g)?.checked_mul(other)?.monic())
    }

    /// Inverse of `self` modulo `modulus`, if they are coprime.
    pub fn inv_mod(&self, modulus: &Self) -> Result<Self> {
        let reduced = self.rem(modulus)?;
        let (g, s, _) = reduced.xgcd(modulus)?;
        if g.degree() != 0usize {
            return Err(Error::InexactDivision(format!(
                "{self} is not invertible modulo {modulus}"
            )));
        }
        s.rem(modulus)
    }

    /// Canonical text form; see [`Polynomial::parse`].
    pub fn to_text(&self) -> String {
        self.to_string()
    }

    /// Parses the canonical term form (`3*x^2+x+5`, `0`) or an ascending
    /// coefficient list (`[5,1,3]`).
    ///
    /// Terms must appear in strictly descending power order with
    /// coefficients in `[0, p)`. Whitespace is ignored.
    pub fn parse(text: &str, field: Field) -> Result<Self> {
        Parser::new(text, field).parse()
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            match (k, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => write!(f, "x")?,
                (1, c) => write!(f, "{c}*x")?,
                (k, 1) => write!(f, "x^{k}")?,
                (k, c) => write!(f, "{c}*x^{k}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} over {}", self, self.field)
    }
}

impl Serialize for Polynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

// Operator forms panic on mixed fields. Library code only uses them on
// polynomials that were validated to share a field up front.

impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &'a Polynomial) -> Polynomial {
        self.checked_add(rhs).expect("field mismatch")
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &'a Polynomial) -> Polynomial {
        self.checked_sub(rhs).expect("field mismatch")
    }
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &'a Polynomial) -> Polynomial {
        self.checked_mul(rhs).expect("field mismatch")
    }
}

macro_rules! forward_owned_binop {
    ($imp:ident, $method:ident) => {
        impl $imp<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                (&self).$method(&rhs)
            }
        }

        impl<'a> $imp<&'a Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: &'a Polynomial) -> Polynomial {
                (&self).$method(rhs)
            }
        }

        impl<'a> $imp<Polynomial> for &'a Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        let f = self.field;
        Polynomial::from_raw(f, self.coeffs.iter().map(|&c| f.neg_raw(c)).collect())
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    field: Field,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str, field: Field) -> Self {
        Self {
            src: text.as_bytes(),
            pos: 0,
            field,
        }
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            position: self.pos,
            message: message.into(),
        })
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

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn number(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected a number");
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        match digits.parse::<u64>() {
            Ok(v) => Ok(v),
            Err(_) => {
                self.pos = start;
                self.err("number too large")
            }
        }
    }

    fn coefficient(&mut self) -> Result<u64> {
        let start = self.pos;
        let c = self.number()?;
        if c >= self.field.characteristic() {
            self.pos = start;
            return self.err(format!(
                "coefficient {c} is outside [0, {})",
                self.field.characteristic()
            ));
        }
        Ok(c)
    }

    fn parse(mut self) -> Result<Polynomial> {
        let poly = match self.peek() {
            None => return self.err("empty input"),
            Some(b'[') => self.list()?,
            Some(_) => self.terms()?,
        };
        if self.peek().is_some() {
            return self.err("unexpected trailing input");
        }
        Ok(poly)
    }

    fn list(&mut self) -> Result<Polynomial> {
        self.eat(b'[');
        let mut coeffs = Vec::new();
        if !self.eat(b']') {
            loop {
                coeffs.push(self.coefficient()?);
                if self.eat(b']') {
                    break;
                }
                if !self.eat(b',') {
                    return self.err("expected ',' or ']'");
                }
            }
        }
        Ok(Polynomial::from_raw(self.field, coeffs))
    }

    fn terms(&mut self) -> Result<Polynomial> {
        let mut coeffs: Vec<u64> = Vec::new();
        let mut last_power: Option<usize> = None;
        loop {
            let term_start = {
                self.skip_ws();
                self.pos
            };
            let (c, k) = self.term()?;
            if c == 0 {
                // "0" is only valid as the entire polynomial
                if last_power.is_some() || self.peek().is_some() {
                    self.pos = term_start;
                    return self.err("zero terms are only allowed as the whole polynomial \"0\"");
                }
                return Ok(Polynomial::zero(self.field));
            }
            if let Some(prev) = last_power {
                if k >= prev {
                    self.pos = term_start;
                    return self.err("terms must be in strictly descending power order");
                }
            } else {
                coeffs = vec![0; k + 1];
            }
            coeffs[k] = c;
            last_power = Some(k);
            if !self.eat(b'+') {
                break;
            }
        }
        Ok(Polynomial::from_raw(self.field, coeffs))
    }

    /// One of `c*x^k`, `x^k`, `c*x`, `x`, `c`.
    fn term(&mut self) -> Result<(u64, usize)> {
        match self.peek() {
            Some(b'x') => {
                self.pos += 1;
                Ok((1, self.power()?))
            }
            Some(b) if b.is_ascii_digit() => {
                let c = self.coefficient()?;
                if self.eat(b'*') {
                    if !self.eat(b'x') {
                        return self.err("expected 'x' after '*'");
                    }
                    Ok((c, self.power()?))
                } else {
                    Ok((c, 0))
                }
            }
            Some(_) => self.err("expected a term"),
            None => self.err("unexpected end of input"),
        }
    }

    fn power(&mut self) -> Result<usize> {
        if self.eat(b'^') {
            let start = self.pos;
            let k = self.number()?;
            usize::try_from(k).or_else(|_| {
                self.pos = start;
                self.err("exponent too large")
            })
        } else {
            Ok(1)
        }
    }
}
