//! Finite-precision p-adic numbers and finite Riemann sums of the p-adic
//! q-integral.
//!
//! A [`Padic`] is `p^v · u` with `u` a unit known modulo `p^{prec - v}`, or
//! zero known modulo `p^{prec}`. Precision is tracked pessimistically: no
//! operation claims more digits than its inputs justify.

mod riemann;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub use riemann::{
    check_degenerate_integral, check_order_r, riemann_sum, riemann_sum_periodic, LevelReport,
    QConfig,
};

/// Whether `p` is an odd prime.
pub fn is_odd_prime(p: u64) -> bool {
    if p < 3 || p.is_multiple_of(2) {
        return false;
    }
    let mut d = 3;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

fn pow_p(p: u64, e: i64) -> BigInt {
    debug_assert!(e >= 0);
    num_traits::pow(BigInt::from(p), e as usize)
}

/// Splits `n ≠ 0` into `(v, n / p^v)`.
fn split_valuation(p: u64, n: &BigInt) -> (i64, BigInt) {
    let bp = BigInt::from(p);
    let mut v = 0;
    let mut n = n.clone();
    loop {
        let (q, r) = n.div_rem(&bp);
        if !r.is_zero() {
            return (v, n);
        }
        n = q;
        v += 1;
    }
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.extended_gcd(m);
    debug_assert!(e.gcd.is_one());
    e.x.mod_floor(m)
}

/// An element of `Q_p` known to a finite absolute precision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Padic {
    p: u64,
    /// Absolute precision: the value is known modulo `p^prec`.
    prec: i64,
    /// Valuation; equals `prec` for a value indistinguishable from zero.
    val: i64,
    /// Unit part, reduced modulo `p^{prec - val}`; zero for zero.
    unit: BigInt,
}

impl Padic {
    pub fn zero(p: u64, prec: i64) -> Padic {
        Padic {
            p,
            prec,
            val: prec,
            unit: BigInt::zero(),
        }
    }

    fn from_parts(p: u64, val: i64, unit: BigInt, prec: i64) -> Padic {
        if val >= prec || unit.is_zero() {
            return Padic::zero(p, prec);
        }
        let m = pow_p(p, prec - val);
        Padic {
            p,
            prec,
            val,
            unit: unit.mod_floor(&m),
        }
    }

    /// `n` known modulo `p^prec`.
    pub fn from_int(p: u64, n: &BigInt, prec: i64) -> Padic {
        if n.is_zero() {
            return Padic::zero(p, prec);
        }
        let (v, u) = split_valuation(p, n);
        Padic::from_parts(p, v, u, prec)
    }

    pub fn from_i64(p: u64, n: i64, prec: i64) -> Padic {
        Padic::from_int(p, &BigInt::from(n), prec)
    }

    /// The rational `r` known modulo `p^prec`.
    pub fn from_rational(p: u64, r: &BigRational, prec: i64) -> Padic {
        if r.is_zero() {
            return Padic::zero(p, prec);
        }
        let (vn, un) = split_valuation(p, r.numer());
        let (vd, ud) = split_valuation(p, r.denom());
        let val = vn - vd;
        if val >= prec {
            return Padic::zero(p, prec);
        }
        let m = pow_p(p, prec - val);
        Padic::from_parts(p, val, un * mod_inverse(&ud, &m), prec)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Absolute precision: the value is determined modulo `p^precision`.
    pub fn precision(&self) -> i64 {
        self.prec
    }

    /// Digits known beyond the valuation; zero for zero.
    pub fn relative_precision(&self) -> i64 {
        self.prec - self.val
    }

    pub fn is_zero(&self) -> bool {
        self.unit.is_zero()
    }

    /// The valuation, or `None` if the value is zero to known precision.
    pub fn valuation(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.val)
        }
    }

    /// Representative in `[0, p^prec)` for values with nonnegative
    /// valuation.
    pub fn residue(&self) -> Option<BigInt> {
        if self.val < 0 || self.prec < 0 {
            return None;
        }
        Some(&self.unit * pow_p(self.p, self.val))
    }

    /// Drops precision to at most `prec`.
    pub fn truncate(&self, prec: i64) -> Padic {
        if prec >= self.prec {
            return self.clone();
        }
        Padic::from_parts(self.p, self.val, self.unit.clone(), prec)
    }

    fn same_prime(&self, other: &Padic) {
        assert_eq!(self.p, other.p, "p-adic operands with different primes");
    }

    fn add_impl(&self, other: &Padic) -> Padic {
        self.same_prime(other);
        let prec = self.prec.min(other.prec);
        if self.is_zero() {
            return other.truncate(prec);
        }
        if other.is_zero() {
            return self.truncate(prec);
        }
        let base = self.val.min(other.val);
        if base >= prec {
            return Padic::zero(self.p, prec);
        }
        let lift = |x: &Padic| &x.unit * pow_p(x.p, x.val - base);
        let sum = lift(self) + lift(other);
        let sum = sum.mod_floor(&pow_p(self.p, prec - base));
        if sum.is_zero() {
            return Padic::zero(self.p, prec);
        }
        let (v, u) = split_valuation(self.p, &sum);
        Padic::from_parts(self.p, base + v, u, prec)
    }

    fn mul_impl(&self, other: &Padic) -> Padic {
        self.same_prime(other);
        match (self.is_zero(), other.is_zero()) {
            (true, true) => Padic::zero(self.p, self.prec + other.prec),
            (true, false) => Padic::zero(self.p, self.prec + other.val),
            (false, true) => Padic::zero(self.p, other.prec + self.val),
            (false, false) => {
                let val = self.val + other.val;
                let rel = self.relative_precision().min(other.relative_precision());
                Padic::from_parts(self.p, val, &self.unit * &other.unit, val + rel)
            }
        }
    }

    /// Division; loses as many digits as the divisor's valuation.
    pub fn checked_div(&self, other: &Padic) -> Result<Padic> {
        self.same_prime(other);
        if other.is_zero() {
            return Err(Error::PadicZeroDivisor);
        }
        if self.is_zero() {
            return Ok(Padic::zero(self.p, self.prec - other.val));
        }
        let val = self.val - other.val;
        let rel = self.relative_precision().min(other.relative_precision());
        let m = pow_p(self.p, rel);
        let unit = &self.unit * mod_inverse(&other.unit, &m);
        Ok(Padic::from_parts(self.p, val, unit, val + rel))
    }

    pub fn pow(&self, mut e: u64) -> Padic {
        let mut base = self.clone();
        let mut acc: Option<Padic> = None;
        while e > 0 {
            if e & 1 == 1 {
                acc = Some(match acc {
                    Some(a) => &a * &base,
                    None => base.clone(),
                });
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc.unwrap_or_else(|| Padic::from_i64(self.p, 1, self.prec))
    }
}

impl fmt::Display for Padic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            write!(f, "O({}^{})", self.p, self.prec)
        } else {
            write!(
                f,
                "{}^{} * {} + O({}^{})",
                self.p, self.val, self.unit, self.p, self.prec
            )
        }
    }
}

impl Add for &Padic {
    type Output = Padic;
    fn add(self, rhs: &Padic) -> Padic {
        self.add_impl(rhs)
    }
}

impl Sub for &Padic {
    type Output = Padic;
    fn sub(self, rhs: &Padic) -> Padic {
        self.add_impl(&-rhs)
    }
}

impl Mul for &Padic {
    type Output = Padic;
    fn mul(self, rhs: &Padic) -> Padic {
        self.mul_impl(rhs)
    }
}

impl Neg for &Padic {
    type Output = Padic;
    fn neg(self) -> Padic {
        if self.is_zero() {
            return self.clone();
        }
        Padic::from_parts(self.p, self.val, -&self.unit, self.prec)
    }
}

impl Neg for Padic {
    type Output = Padic;
    fn neg(self) -> Padic {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u64 = 3;
    const K: i64 = 15;

    fn int(n: i64) -> Padic {
        Padic::from_i64(P, n, K)
    }

    #[test]
    fn primes() {
        assert!(is_odd_prime(3));
        assert!(is_odd_prime(7));
        assert!(!is_odd_prime(2));
        assert!(!is_odd_prime(4));
        assert!(!is_odd_prime(9));
        assert!(!is_odd_prime(1));
    }

    #[test]
    fn valuation_of_p() {
        assert_eq!(int(3).valuation(), Some(1));
        assert_eq!(int(18).valuation(), Some(2));
        assert_eq!(int(5).valuation(), Some(0));
        assert_eq!(int(0).valuation(), None);
        assert_eq!(int(0).precision(), K);
    }

    #[test]
    fn inverse_of_one_plus_p() {
        let a = int(1 + P as i64);
        let inv = int(1).checked_div(&a).unwrap();
        let one = &inv * &a;
        assert_eq!(one, int(1));
        assert_eq!(one.precision(), K);
    }

    #[test]
    fn division_costs_divisor_valuation() {
        let a = int(7);
        let b = int(9);
        let c = a.checked_div(&b).unwrap();
        assert_eq!(c.valuation(), Some(-2));
        assert_eq!(c.relative_precision(), K - 2);
        let z = int(0).checked_div(&b).unwrap();
        assert_eq!(z.precision(), K - 2);
        assert_eq!(a.checked_div(&int(0)), Err(Error::PadicZeroDivisor));
    }

    #[test]
    fn cancellation_raises_valuation() {
        let d = &int(10) - &int(1);
        assert_eq!(d.valuation(), Some(2));
        assert!((&int(5) - &int(5)).is_zero());
    }

    #[test]
    fn rationals() {
        let r = BigRational::new(BigInt::from(2), BigInt::from(5));
        let x = Padic::from_rational(P, &r, K);
        assert_eq!(&x * &int(5), int(2));
        let r = BigRational::new(BigInt::from(1), BigInt::from(9));
        assert_eq!(Padic::from_rational(P, &r, K).valuation(), Some(-2));
        let big = BigInt::from(3).pow(20);
        assert!(Padic::from_int(P, &big, K).is_zero());
    }

    #[test]
    fn residue_and_power() {
        assert_eq!(int(4).pow(3).residue(), Some(BigInt::from(64)));
        assert_eq!(int(3).pow(2).valuation(), Some(2));
        let m = pow_p(P, K);
        assert_eq!(int(-1).residue(), Some(&m - 1));
    }
}
