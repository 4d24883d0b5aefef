//! Rational functions in `q`, `L`, `Q` over the rationals.
//!
//! Equality is decided by cross-multiplication. Reduction is opportunistic:
//! integer content and common monomials are always removed, and when one side
//! of the fraction lives in a single variable its gcd with the other side is
//! cancelled exactly. Every denominator produced by the q-Bernoulli families
//! is univariate in `q`, so those values end up fully reduced.

use std::collections::HashMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::poly::{Monomial, MultiPoly, Var};
use super::univariate::UniPoly;
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct RatFunc {
    num: MultiPoly,
    den: MultiPoly,
}

fn to_uni(p: &MultiPoly, v: Var) -> UniPoly {
    let mut coeffs = vec![BigInt::zero(); p.degree_in(v) as usize + 1];
    for (m, c) in p.terms() {
        debug_assert!(c.is_integer());
        coeffs[m.exp(v) as usize] = c.numer().clone();
    }
    UniPoly::new(coeffs)
}

fn from_uni<'a>(
    u: &'a UniPoly,
    v: Var,
    base: &Monomial,
) -> impl Iterator<Item = (Monomial, BigRational)> + 'a {
    let base = *base;
    u.coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(move |(i, c)| {
            (
                base.with_exp(v, i as u32),
                BigRational::from_integer(c.clone()),
            )
        })
}

/// Cancels the gcd of `single` (a polynomial in `v` only) against every
/// `v`-slice of `multi`. Both inputs must be integral.
fn cancel_against(single: &MultiPoly, multi: &MultiPoly, v: Var) -> Option<(MultiPoly, MultiPoly)> {
    let s = to_uni(single, v);
    if s.is_constant() {
        return None;
    }
    let slices: Vec<(Monomial, UniPoly)> = multi
        .slices_in(v)
        .into_iter()
        .map(|(m, p)| (m, to_uni(&p, v)))
        .collect();
    let mut g = s.primitive();
    for (_, slice) in &slices {
        if g.is_constant() {
            return None;
        }
        if slice.exact_div(&g).is_none() {
            g = g.gcd(slice);
        }
    }
    if g.is_constant() {
        return None;
    }
    let reduced_single = s.exact_div(&g).expect("gcd divides");
    let single_out = MultiPoly::from_terms(from_uni(&reduced_single, v, &Monomial::ONE));
    let multi_out = MultiPoly::from_terms(slices.iter().flat_map(|(m, slice)| {
        let q = slice.exact_div(&g).expect("gcd divides every slice");
        from_uni(&q, v, m).collect::<Vec<_>>()
    }));
    Some((single_out, multi_out))
}

/// The variable in which both polynomials live, if any (constants live in
/// every variable).
fn shared_single_var(a: &MultiPoly, b: &MultiPoly) -> Option<Var> {
    Var::ALL.into_iter().find(|&v| a.only_in(v) && b.only_in(v))
}

impl RatFunc {
    /// Builds `num / den`, reducing opportunistically.
    pub fn new(num: MultiPoly, den: MultiPoly) -> Result<RatFunc> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(RatFunc::normalize(num, den, true))
    }

    pub fn from_poly(p: MultiPoly) -> RatFunc {
        RatFunc::normalize(p, MultiPoly::one(), false)
    }

    pub fn zero() -> RatFunc {
        RatFunc {
            num: MultiPoly::zero(),
            den: MultiPoly::one(),
        }
    }

    pub fn one() -> RatFunc {
        RatFunc::from_int(1)
    }

    pub fn from_int(c: i64) -> RatFunc {
        RatFunc::from_poly(MultiPoly::from_int(c))
    }

    pub fn from_bigint(c: BigInt) -> RatFunc {
        RatFunc::constant(BigRational::from_integer(c))
    }

    pub fn constant(c: BigRational) -> RatFunc {
        RatFunc::from_poly(MultiPoly::constant(c))
    }

    pub fn var(v: Var) -> RatFunc {
        RatFunc::from_poly(MultiPoly::var(v))
    }

    /// `v^k` for a monomial power.
    pub fn var_pow(v: Var, k: u32) -> RatFunc {
        RatFunc::from_poly(MultiPoly::term(
            BigRational::one(),
            Monomial::ONE.with_exp(v, k),
        ))
    }

    /// `[x]_q = (1 - Q)/(1 - q)`.
    pub fn q_bracket_x() -> RatFunc {
        RatFunc::normalize(
            MultiPoly::one_minus_pow(Var::X, 1),
            MultiPoly::one_minus_pow(Var::Q, 1),
            false,
        )
    }

    /// `[n]_q = (1 - q^n)/(1 - q) = 1 + q + ⋯ + q^{n-1}`.
    pub fn q_int(n: u32) -> RatFunc {
        RatFunc::from_poly(MultiPoly::from_terms(
            (0..n).map(|i| (Monomial::ONE.with_exp(Var::Q, i), BigRational::one())),
        ))
    }

    pub fn num(&self) -> &MultiPoly {
        &self.num
    }

    pub fn den(&self) -> &MultiPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.as_constant().is_some()
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        let n = self.num.as_constant()?;
        let d = self.den.as_constant()?;
        Some(n / d)
    }

    pub fn depends_on(&self, v: Var) -> bool {
        self.num.depends_on(v) || self.den.depends_on(v)
    }

    /// Total number of stored terms, numerator plus denominator.
    pub fn term_count(&self) -> usize {
        self.num.len() + self.den.len()
    }

    fn normalize(num: MultiPoly, den: MultiPoly, cancel: bool) -> RatFunc {
        debug_assert!(!den.is_zero());
        if num.is_zero() {
            return RatFunc::zero();
        }
        let mut num = num;
        let mut den = den;

        let l = num.denominator_lcm().lcm(&den.denominator_lcm());
        if !l.is_one() {
            let s = BigRational::from_integer(l);
            num = num.scale(&s);
            den = den.scale(&s);
        }

        let g = num.monomial_content().gcd(&den.monomial_content());
        if g != Monomial::ONE {
            num = num.div_monomial(&g);
            den = den.div_monomial(&g);
        }

        if cancel {
            for v in Var::ALL {
                if den.only_in(v) {
                    if let Some((d, n)) = cancel_against(&den, &num, v) {
                        den = d;
                        num = n;
                    }
                } else if num.only_in(v) {
                    if let Some((n, d)) = cancel_against(&num, &den, v) {
                        num = n;
                        den = d;
                    }
                }
            }
        }

        let mut c = num.integer_content().gcd(&den.integer_content());
        if den.leading_sign() < 0 {
            c = -c;
        }
        if !c.is_one() {
            num = num.div_integer(&c);
            den = den.div_integer(&c);
        }
        RatFunc { num, den }
    }

    /// Structural equality of the stored numerator and denominator.
    pub fn same_form(&self, other: &RatFunc) -> bool {
        self.num == other.num && self.den == other.den
    }

    /// Value equality: `a.num · b.den = b.num · a.den`.
    pub fn rf_eq(&self, other: &RatFunc) -> bool {
        if self.den == other.den {
            return self.num == other.num;
        }
        if self.num.is_zero() || other.num.is_zero() {
            return self.num.is_zero() && other.num.is_zero();
        }
        &self.num * &other.den == &other.num * &self.den
    }

    pub fn recip(&self) -> Result<RatFunc> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(RatFunc::normalize(
            self.den.clone(),
            self.num.clone(),
            false,
        ))
    }

    pub fn checked_div(&self, other: &RatFunc) -> Result<RatFunc> {
        Ok(self * &other.recip()?)
    }

    pub fn pow(&self, k: u32) -> RatFunc {
        if k == 0 {
            return RatFunc::one();
        }
        RatFunc::normalize(self.num.pow(k), self.den.pow(k), false)
    }

    /// `self^k` for a possibly negative exponent.
    pub fn powi(&self, k: i64) -> Result<RatFunc> {
        if k >= 0 {
            Ok(self.pow(k as u32))
        } else {
            Ok(self.recip()?.pow((-k) as u32))
        }
    }

    pub fn scale(&self, c: &BigRational) -> RatFunc {
        RatFunc::normalize(self.num.scale(c), self.den.clone(), false)
    }

    pub fn scale_int(&self, c: &BigInt) -> RatFunc {
        self.scale(&BigRational::from_integer(c.clone()))
    }

    fn add_impl(&self, other: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            return RatFunc::normalize(&self.num + &other.num, self.den.clone(), true);
        }
        if let Some(v) = shared_single_var(&self.den, &other.den) {
            let a = to_uni(&self.den, v);
            let b = to_uni(&other.den, v);
            let g = a.gcd(&b);
            if !g.is_constant() {
                let a_red =
                    MultiPoly::from_terms(from_uni(&a.exact_div(&g).unwrap(), v, &Monomial::ONE));
                let b_red =
                    MultiPoly::from_terms(from_uni(&b.exact_div(&g).unwrap(), v, &Monomial::ONE));
                let num = &(&self.num * &b_red) + &(&other.num * &a_red);
                let den = &self.den * &b_red;
                return RatFunc::normalize(num, den, true);
            }
        }
        let num = &(&self.num * &other.den) + &(&other.num * &self.den);
        let den = &self.den * &other.den;
        RatFunc::normalize(num, den, true)
    }

    fn mul_impl(&self, other: &RatFunc) -> RatFunc {
        if self.is_zero() || other.is_zero() {
            return RatFunc::zero();
        }
        if self.is_polynomial() && other.is_polynomial() {
            return RatFunc::normalize(&self.num * &other.num, &self.den * &other.den, false);
        }
        RatFunc::normalize(&self.num * &other.num, &self.den * &other.den, true)
    }

    /// Ring substitution `v ↦ image`.
    pub fn subst(&self, v: Var, image: &RatFunc) -> Result<RatFunc> {
        if let Some(c) = image.as_constant() {
            let den = self.den.eval_var(v, &c);
            if den.is_zero() {
                return Err(Error::VanishingDenominator {
                    var: v,
                    image: image.to_string(),
                });
            }
            return Ok(RatFunc::normalize(self.num.eval_var(v, &c), den, true));
        }
        let a = &image.num;
        let b = &image.den;
        let dn = self.num.degree_in(v);
        let dd = self.den.degree_in(v);
        let top = dn.max(dd) as usize;
        let mut a_pows = vec![MultiPoly::one()];
        let mut b_pows = vec![MultiPoly::one()];
        let b_trivial = b.is_one();
        for i in 1..=top {
            a_pows.push(&a_pows[i - 1] * a);
            if !b_trivial {
                b_pows.push(&b_pows[i - 1] * b);
            }
        }
        let homogenize = |p: &MultiPoly, d: u32| -> MultiPoly {
            let mut out = MultiPoly::zero();
            for (k, c) in p.collect_by(v) {
                let mut t = &c * &a_pows[k as usize];
                if !b_trivial {
                    t = &t * &b_pows[(d - k) as usize];
                }
                out = &out + &t;
            }
            out
        };
        let mut num = homogenize(&self.num, dn);
        let mut den = homogenize(&self.den, dd);
        if den.is_zero() {
            return Err(Error::VanishingDenominator {
                var: v,
                image: image.to_string(),
            });
        }
        if !b_trivial {
            if dd >= dn {
                num = &num * &b_pows[(dd - dn) as usize];
            } else {
                den = &den * &b_pows[(dn - dd) as usize];
            }
        }
        Ok(RatFunc::normalize(num, den, true))
    }

    /// Limit as `v → point`, through the shift `v = point + ε`.
    ///
    /// The lowest power of `ε` is cancelled between numerator and
    /// denominator before setting `ε = 0`; a higher order in the denominator
    /// is a pole.
    pub fn limit(&self, v: Var, point: &BigRational) -> Result<RatFunc> {
        let Some((kn, cn)) = lowest_shifted_coeff(&self.num, v, point) else {
            return Ok(RatFunc::zero());
        };
        let (kd, cd) = lowest_shifted_coeff(&self.den, v, point).expect("denominator is nonzero");
        if kd > kn {
            return Err(Error::Pole {
                var: v,
                point: point.to_string(),
            });
        }
        if kn > kd {
            return Ok(RatFunc::zero());
        }
        Ok(RatFunc::normalize(cn, cd, true))
    }

    /// Evaluation at a full rational point `(q, L, Q)`.
    pub fn eval(&self, point: &[BigRational; 3]) -> Result<BigRational> {
        let d = self.den.eval(point);
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.num.eval(point) / d)
    }
}

/// Lowest nonzero coefficient of `p(v = point + ε)` as a series in `ε`.
fn lowest_shifted_coeff(p: &MultiPoly, v: Var, point: &BigRational) -> Option<(u32, MultiPoly)> {
    if p.is_zero() {
        return None;
    }
    let top = p.degree_in(v);
    let mut point_pows = vec![BigRational::one()];
    for i in 1..=top as usize {
        point_pows.push(&point_pows[i - 1] * point);
    }
    let mut binom: HashMap<(u32, u32), BigInt> = HashMap::new();
    for i in 0..=top {
        let coeff =
            MultiPoly::from_terms(p.terms().filter(|(m, _)| m.exp(v) >= i).map(|(m, c)| {
                let e = m.exp(v);
                let b = binom
                    .entry((e, i))
                    .or_insert_with(|| binomial(e, i))
                    .clone();
                (
                    m.with_exp(v, 0),
                    c * BigRational::from_integer(b) * &point_pows[(e - i) as usize],
                )
            }));
        if !coeff.is_zero() {
            return Some((i, coeff));
        }
    }
    unreachable!("a nonzero polynomial has a nonzero Taylor coefficient")
}

pub(crate) fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

impl PartialEq for RatFunc {
    fn eq(&self, other: &Self) -> bool {
        self.rf_eq(other)
    }
}

impl Eq for RatFunc {}

impl From<MultiPoly> for RatFunc {
    fn from(p: MultiPoly) -> RatFunc {
        RatFunc::from_poly(p)
    }
}

impl From<i64> for RatFunc {
    fn from(c: i64) -> RatFunc {
        RatFunc::from_int(c)
    }
}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        self.add_impl(rhs)
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self.add_impl(&-rhs)
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        self.mul_impl(rhs)
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for RatFunc {
            type Output = RatFunc;
            fn $m(self, rhs: RatFunc) -> RatFunc {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&RatFunc> for RatFunc {
            type Output = RatFunc;
            fn $m(self, rhs: &RatFunc) -> RatFunc {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl std::iter::Sum for RatFunc {
    fn sum<I: Iterator<Item = RatFunc>>(iter: I) -> RatFunc {
        iter.fold(RatFunc::zero(), |acc, x| &acc + &x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;

    fn q() -> RatFunc {
        RatFunc::var(Var::Q)
    }

    fn one_minus_q() -> RatFunc {
        &RatFunc::one() - &q()
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn add_over_common_denominator_collapses() {
        let a = RatFunc::one().checked_div(&one_minus_q()).unwrap();
        let b = (-&q()).checked_div(&one_minus_q()).unwrap();
        let s = &a + &b;
        assert!(s.same_form(&RatFunc::one()));
    }

    #[test]
    fn bracket_times_denominator_cancels() {
        let p = &RatFunc::q_bracket_x() * &one_minus_q();
        let expected = &RatFunc::one() - &RatFunc::var(Var::X);
        assert!(p.same_form(&expected));
    }

    #[test]
    fn square_of_one_plus_q() {
        let p = (&RatFunc::one() + &q()).pow(2);
        let expected = RatFunc::from_poly(
            MultiPoly::from_int(1)
                + MultiPoly::var(Var::Q).scale(&rat(2, 1))
                + MultiPoly::var(Var::Q).pow(2),
        );
        assert!(p.same_form(&expected));
    }

    #[test]
    fn equality_examples() {
        let lhs = RatFunc::new(
            MultiPoly::one_minus_pow(Var::Q, 2),
            MultiPoly::one_minus_pow(Var::Q, 1),
        )
        .unwrap();
        assert_eq!(lhs, &RatFunc::one() + &q());
        let a = q().checked_div(&(&RatFunc::one() + &q())).unwrap();
        let b = q().checked_div(&one_minus_q()).unwrap();
        assert_ne!(a, b);
        let c = RatFunc::new(
            MultiPoly::var(Var::X) - MultiPoly::one(),
            MultiPoly::var(Var::Q) - MultiPoly::one(),
        )
        .unwrap();
        assert_eq!(c, RatFunc::q_bracket_x());
        assert!(c.same_form(&RatFunc::q_bracket_x()));
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(
            q().checked_div(&RatFunc::zero()),
            Err(Error::DivisionByZero)
        );
    }

    #[test]
    fn substitution_examples() {
        let f = RatFunc::one().checked_div(&one_minus_q()).unwrap();
        let g = f.subst(Var::Q, &q().pow(2)).unwrap();
        assert_eq!(
            g,
            RatFunc::new(MultiPoly::one(), MultiPoly::one_minus_pow(Var::Q, 2)).unwrap()
        );

        let shifted = RatFunc::q_bracket_x()
            .subst(Var::X, &(&q() * &RatFunc::var(Var::X)))
            .unwrap();
        let expected = RatFunc::new(
            MultiPoly::one() - MultiPoly::var(Var::Q) * MultiPoly::var(Var::X),
            MultiPoly::one_minus_pow(Var::Q, 1),
        )
        .unwrap();
        assert_eq!(shifted, expected);

        let lq = &RatFunc::var(Var::L) * &RatFunc::var(Var::X);
        assert!(lq.subst(Var::L, &RatFunc::zero()).unwrap().is_zero());
    }

    #[test]
    fn substitution_can_vanish_denominator() {
        let f = RatFunc::one().checked_div(&one_minus_q()).unwrap();
        assert!(matches!(
            f.subst(Var::Q, &RatFunc::one()),
            Err(Error::VanishingDenominator { .. })
        ));
    }

    #[test]
    fn rational_image_substitution() {
        // q / (1 + q) with q -> 1/q gives 1 / (1 + q)
        let f = q().checked_div(&(&RatFunc::one() + &q())).unwrap();
        let inv = RatFunc::one().checked_div(&q()).unwrap();
        let g = f.subst(Var::Q, &inv).unwrap();
        assert_eq!(
            g,
            RatFunc::one()
                .checked_div(&(&RatFunc::one() + &q()))
                .unwrap()
        );
    }

    #[test]
    fn limit_examples() {
        let three = RatFunc::new(
            MultiPoly::one_minus_pow(Var::Q, 3),
            MultiPoly::one_minus_pow(Var::Q, 1),
        )
        .unwrap();
        assert_eq!(
            three.limit(Var::Q, &rat(1, 1)).unwrap(),
            RatFunc::from_int(3)
        );

        // an unreduced form exercises the shift-and-cancel path
        let raw = RatFunc {
            num: MultiPoly::one_minus_pow(Var::Q, 3),
            den: MultiPoly::one_minus_pow(Var::Q, 1),
        };
        assert_eq!(raw.limit(Var::Q, &rat(1, 1)).unwrap(), RatFunc::from_int(3));

        assert!(RatFunc::q_bracket_x()
            .limit(Var::X, &rat(1, 1))
            .unwrap()
            .is_zero());

        let pole = RatFunc::one().checked_div(&one_minus_q()).unwrap();
        assert!(matches!(
            pole.limit(Var::Q, &rat(1, 1)),
            Err(Error::Pole { .. })
        ));
    }

    #[test]
    fn limit_of_bracket_in_q_is_not_finite_at_generic_x() {
        // [x]_q = (1-Q)/(1-q) has a genuine pole at q = 1 for symbolic Q
        assert!(RatFunc::q_bracket_x().limit(Var::Q, &rat(1, 1)).is_err());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(40, 20), "137846528820".parse::<BigInt>().unwrap());
        assert_eq!(binomial(3, 4), BigInt::zero());
    }

    #[test]
    fn q_int_matches_quotient() {
        for n in 1..6 {
            let quot = RatFunc::new(
                MultiPoly::one_minus_pow(Var::Q, n),
                MultiPoly::one_minus_pow(Var::Q, 1),
            )
            .unwrap();
            assert!(quot.same_form(&RatFunc::q_int(n)));
        }
    }

    #[test]
    fn negative_leading_denominator_is_normalized() {
        let f = RatFunc::new(MultiPoly::one(), -MultiPoly::var(Var::Q)).unwrap();
        assert_eq!(f.den().leading_sign(), 1);
        assert!(f.num().leading().unwrap().1.is_negative());
    }
}
