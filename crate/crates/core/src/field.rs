//! Arithmetic in the prime field `F_p` for a prime chosen at runtime.
//!
//! [`Field`] is a small `Copy` handle carrying the characteristic. Raw
//! coefficient arithmetic (`u64` values already reduced into `[0, p)`) lives
//! on `Field` so polynomial code can work on plain vectors; [`FieldElement`]
//! is the checked, self-describing scalar type.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Largest characteristic accepted by [`Field::new`].
pub const MAX_PRIME: u64 = 1 << 31;

/// The prime field `F_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Field {
    p: u64,
}

impl Field {
    /// Builds `F_p`, rejecting composite or oversized `p`.
    pub fn new(p: u64) -> Result<Self> {
        if p > MAX_PRIME {
            return Err(Error::PrimeTooLarge(p));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Self { p })
    }

    /// The binary field, `F_2`.
    pub fn binary() -> Self {
        Self { p: 2 }
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    /// Wraps `value mod p` as a field element.
    pub fn element(&self, value: u64) -> FieldElement {
        FieldElement {
            value: value % self.p,
            field: *self,
        }
    }

    /// Wraps a signed integer, reducing into `[0, p)`.
    pub fn element_signed(&self, value: i64) -> FieldElement {
        let v = value.rem_euclid(self.p as i64) as u64;
        FieldElement {
            value: v,
            field: *self,
        }
    }

    pub fn zero(&self) -> FieldElement {
        self.element(0)
    }

    pub fn one(&self) -> FieldElement {
        self.element(1)
    }

    /// All elements in increasing order of representative.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.p).map(|v| self.element(v))
    }

    pub(crate) fn reduce(&self, v: u64) -> u64 {
        v % self.p
    }

    #[inline]
    pub(crate) fn add_raw(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub(crate) fn sub_raw(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub(crate) fn neg_raw(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub(crate) fn mul_raw(&self, a: u64, b: u64) -> u64 {
        // p <= 2^31 so the product fits in u64
        (a * b) % self.p
    }

    /// Inverse by the extended Euclidean algorithm on integers.
    pub(crate) fn inv_raw(&self, a: u64) -> Result<u64> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        let (mut r0, mut r1) = (self.p as i64, a as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        Ok(t0.rem_euclid(self.p as i64) as u64)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.p)
    }
}

/// Deterministic trial division; `p` is at most 2^31 so this is cheap.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// An element of `F_p`. The value is always in `[0, p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    value: u64,
    field: Field,
}

impl FieldElement {
    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn same_field(&self, other: &Self) -> Result<Field> {
        if self.field != other.field {
            return Err(Error::MixedFields {
                left: self.field.p,
                right: other.field.p,
            });
        }
        Ok(self.field)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        let f = self.same_field(other)?;
        Ok(f.element(f.add_raw(self.value, other.value)))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        let f = self.same_field(other)?;
        Ok(f.element(f.sub_raw(self.value, other.value)))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        let f = self.same_field(other)?;
        Ok(f.element(f.mul_raw(self.value, other.value)))
    }

    /// Multiplicative inverse; fails with `DivisionByZero` on zero.
    pub fn inv(&self) -> Result<Self> {
        Ok(self.field.element(self.field.inv_raw(self.value)?))
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

// Operator forms panic on mixed fields; use the `checked_*` methods when the
// operands come from untrusted sources.

impl Add for FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: Self) -> Self {
        self.checked_add(&rhs).expect("field mismatch")
    }
}

impl Sub for FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: Self) -> Self {
        self.checked_sub(&rhs).expect("field mismatch")
    }
}

impl Mul for FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: Self) -> Self {
        self.checked_mul(&rhs).expect("field mismatch")
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> Self {
        self.field.element(self.field.neg_raw(self.value))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64) -> Field {
        Field::new(p).unwrap()
    }

    /// Exhaustive-search inverse, kept independent of the Euclid route.
    fn inv_by_search(field: Field, a: u64) -> Option<u64> {
        (1..field.characteristic()).find(|b| (a * b) % field.characteristic() == 1)
    }

    #[test]
    fn rejects_composites_and_small_values() {
        assert_eq!(Field::new(0), Err(Error::NotPrime(0)));
        assert_eq!(Field::new(1), Err(Error::NotPrime(1)));
        assert_eq!(Field::new(4), Err(Error::NotPrime(4)));
        assert_eq!(Field::new(91), Err(Error::NotPrime(91)));
        assert!(Field::new(2).is_ok());
        assert!(Field::new(2147483647).is_ok());
        assert_eq!(Field::new(1 << 32), Err(Error::PrimeTooLarge(1 << 32)));
    }

    #[test]
    fn addition_examples() {
        assert_eq!(f(2).element(1) + f(2).element(1), f(2).zero());
        assert_eq!((f(7).element(5) + f(7).element(4)).value(), 2);
        assert_eq!((f(2).element(0) + f(2).element(1)).value(), 1);
    }

    #[test]
    fn multiplication_examples() {
        assert_eq!((f(2).element(1) * f(2).element(1)).value(), 1);
        assert_eq!((f(7).element(3) * f(7).element(5)).value(), 1);
        assert_eq!((f(5).element(2) * f(5).element(0)).value(), 0);
    }

    #[test]
    fn f7_product_3_5_matches_table() {
        // full multiplication table of F_7 by repeated addition
        let field = f(7);
        for a in 0..7u64 {
            for b in 0..7u64 {
                let mut acc = 0u64;
                for _ in 0..b {
                    acc = (acc + a) % 7;
                }
                assert_eq!((field.element(a) * field.element(b)).value(), acc);
            }
        }
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(f(2).element(1).inv().unwrap().value(), 1);
        assert_eq!(f(7).element(3).inv().unwrap().value(), 5);
        assert_eq!(f(13).element(2).inv().unwrap().value(), 7);
        assert_eq!(f(7).zero().inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn negation_and_subtraction() {
        assert_eq!((-f(2).element(1)).value(), 1);
        assert_eq!((-f(7).element(3)).value(), 4);
        assert_eq!((f(7).element(2) - f(7).element(5)).value(), 4);
        assert_eq!((-f(7).zero()).value(), 0);
    }

    #[test]
    fn mixed_fields_are_rejected() {
        let a = f(5).element(1);
        let b = f(7).element(1);
        assert_eq!(
            a.checked_add(&b),
            Err(Error::MixedFields { left: 5, right: 7 })
        );
        assert!(a.checked_mul(&b).is_err());
        assert!(a.checked_sub(&b).is_err());
    }

    #[test]
    fn inverse_agrees_with_search_for_small_primes() {
        for p in (2..=101).filter(|&n| is_prime(n)) {
            let field = f(p);
            for a in 1..p {
                let inv = field.element(a).inv().unwrap();
                assert_eq!(Some(inv.value()), inv_by_search(field, a), "p={p} a={a}");
                assert_eq!((field.element(a) * inv).value(), 1);
            }
        }
    }

    #[test]
    fn signed_elements_wrap() {
        assert_eq!(f(7).element_signed(-1).value(), 6);
        assert_eq!(f(7).element_signed(15).value(), 1);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn prime() -> impl Strategy<Value = u64> {
            prop::sample::select(vec![2u64, 3, 5, 7, 13, 101, 65521, 2147483647])
        }

        proptest! {
            #[test]
            fn ring_axioms(p in prime(), a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
                let field = Field::new(p).unwrap();
                let (a, b, c) = (field.element(a), field.element(b), field.element(c));
                prop_assert_eq!((a + b) + c, a + (b + c));
                prop_assert_eq!((a * b) * c, a * (b * c));
                prop_assert_eq!(a + b, b + a);
                prop_assert_eq!(a * b, b * a);
                prop_assert_eq!(a * (b + c), a * b + a * c);
                prop_assert_eq!(a - b + b, a);
                prop_assert_eq!(a + (-a), field.zero());
                if !a.is_zero() {
                    prop_assert_eq!(a * a.inv().unwrap(), field.one());
                }
            }
        }
    }
}
