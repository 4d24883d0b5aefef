//! Sparse polynomials over the rationals in the three indeterminates `q`, `L`
//! (the degeneracy parameter) and `Q` (standing for `q^x`).

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::budget;

/// One of the three indeterminates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    /// The deformation base `q`.
    Q,
    /// The degeneracy parameter `λ`, written `L`.
    L,
    /// The power `q^x`, written `Q`.
    X,
}

impl Var {
    pub const ALL: [Var; 3] = [Var::Q, Var::L, Var::X];

    pub fn index(self) -> usize {
        match self {
            Var::Q => 0,
            Var::L => 1,
            Var::X => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Var::Q => "q",
            Var::L => "L",
            Var::X => "Q",
        }
    }

    pub fn from_name(s: &str) -> Option<Var> {
        match s {
            "q" => Some(Var::Q),
            "L" => Some(Var::L),
            "Q" => Some(Var::X),
            _ => None,
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Exponent vector `q^a L^b Q^c`.
///
/// Ordered graded-lexicographically with `q ≻ L ≻ Q`: total degree first,
/// then the exponent of `q`, then `L`, then `Q`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Monomial(pub [u32; 3]);

impl Monomial {
    pub const ONE: Monomial = Monomial([0, 0, 0]);

    pub fn var(v: Var) -> Monomial {
        let mut e = [0; 3];
        e[v.index()] = 1;
        Monomial(e)
    }

    pub fn exp(&self, v: Var) -> u32 {
        self.0[v.index()]
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn with_exp(mut self, v: Var, e: u32) -> Monomial {
        self.0[v.index()] = e;
        self
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let e = |i: usize| {
            self.0[i]
                .checked_add(other.0[i])
                .expect("exponent overflow")
        };
        Monomial([e(0), e(1), e(2)])
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        (0..3).all(|i| self.0[i] <= other.0[i])
    }

    pub fn div(&self, other: &Monomial) -> Monomial {
        debug_assert!(other.divides(self));
        Monomial([
            self.0[0] - other.0[0],
            self.0[1] - other.0[1],
            self.0[2] - other.0[2],
        ])
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial([
            self.0[0].min(other.0[0]),
            self.0[1].min(other.0[1]),
            self.0[2].min(other.0[2]),
        ])
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

/// Sparse multivariate polynomial with exact rational coefficients.
///
/// No stored coefficient is zero. Terms are kept in a `BTreeMap`, so
/// iteration in reverse gives the canonical (descending) order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    terms: BTreeMap<Monomial, BigRational>,
}

fn is_int(c: &BigRational) -> bool {
    c.denom().is_one()
}

impl MultiPoly {
    pub fn zero() -> MultiPoly {
        MultiPoly::default()
    }

    pub fn one() -> MultiPoly {
        MultiPoly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> MultiPoly {
        MultiPoly::term(c, Monomial::ONE)
    }

    pub fn from_int(c: i64) -> MultiPoly {
        MultiPoly::constant(BigRational::from_integer(c.into()))
    }

    pub fn var(v: Var) -> MultiPoly {
        MultiPoly::term(BigRational::one(), Monomial::var(v))
    }

    pub fn term(c: BigRational, m: Monomial) -> MultiPoly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MultiPoly { terms }
    }

    /// Builds a polynomial from `(monomial, coefficient)` pairs, merging
    /// repeated monomials and dropping zeros.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, BigRational)>>(it: I) -> MultiPoly {
        let mut terms: BTreeMap<Monomial, BigRational> = BTreeMap::new();
        for (m, c) in it {
            *terms.entry(m).or_insert_with(BigRational::zero) += c;
        }
        terms.retain(|_, c| !c.is_zero());
        MultiPoly { terms }
    }

    /// `1 - v^k`, the workhorse of every q-analogue denominator.
    pub fn one_minus_pow(v: Var, k: u32) -> MultiPoly {
        MultiPoly::one() - MultiPoly::term(BigRational::one(), Monomial::ONE.with_exp(v, k))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&Monomial::ONE).is_some_and(|c| c.is_one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical (descending graded-lex) order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter().rev()
    }

    pub fn coeff(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn leading(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().next_back()
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&Monomial::ONE).cloned(),
            _ => None,
        }
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.keys().map(|m| m.exp(v)).max().unwrap_or(0)
    }

    pub fn depends_on(&self, v: Var) -> bool {
        self.terms.keys().any(|m| m.exp(v) > 0)
    }

    /// True when every variable other than `v` is absent.
    pub fn only_in(&self, v: Var) -> bool {
        Var::ALL
            .iter()
            .filter(|&&w| w != v)
            .all(|&w| !self.depends_on(w))
    }

    pub fn is_integral(&self) -> bool {
        self.terms.values().all(is_int)
    }

    /// Largest monomial dividing every term.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        match it.next() {
            None => Monomial::ONE,
            Some(first) => it.fold(*first, |g, m| g.gcd(m)),
        }
    }

    pub fn div_monomial(&self, m: &Monomial) -> MultiPoly {
        MultiPoly {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.div(m), c.clone()))
                .collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> MultiPoly {
        MultiPoly {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.mul(m), c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &BigRational) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero();
        }
        MultiPoly {
            terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    /// Least common multiple of the coefficient denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        self.terms
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    /// Gcd of the numerators (meaningful for integral polynomials).
    pub fn integer_content(&self) -> BigInt {
        self.terms
            .values()
            .fold(BigInt::zero(), |acc, c| acc.gcd(c.numer()))
    }

    pub fn pow(&self, k: u32) -> MultiPoly {
        let mut result = MultiPoly::one();
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Splits into `Σ_k coeff_k · v^k` with `coeff_k` free of `v`.
    pub fn collect_by(&self, v: Var) -> BTreeMap<u32, MultiPoly> {
        let mut out: BTreeMap<u32, BTreeMap<Monomial, BigRational>> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.exp(v))
                .or_default()
                .insert(m.with_exp(v, 0), c.clone());
        }
        out.into_iter()
            .map(|(k, terms)| (k, MultiPoly { terms }))
            .collect()
    }

    /// Splits into slices `v`-polynomial coefficient per monomial in the
    /// other variables: `Σ_m m · slice_m(v)`.
    pub fn slices_in(&self, v: Var) -> BTreeMap<Monomial, MultiPoly> {
        let mut out: BTreeMap<Monomial, BTreeMap<Monomial, BigRational>> = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.exp(v);
            out.entry(m.with_exp(v, 0))
                .or_default()
                .insert(Monomial::ONE.with_exp(v, e), c.clone());
        }
        out.into_iter()
            .map(|(k, terms)| (k, MultiPoly { terms }))
            .collect()
    }

    /// Evaluates `v` at a rational point, leaving the other variables.
    pub fn eval_var(&self, v: Var, point: &BigRational) -> MultiPoly {
        let mut powers: HashMap<u32, BigRational> = HashMap::new();
        MultiPoly::from_terms(self.terms.iter().map(|(m, c)| {
            let e = m.exp(v);
            let pw = powers
                .entry(e)
                .or_insert_with(|| num_traits::pow(point.clone(), e as usize))
                .clone();
            (m.with_exp(v, 0), c * pw)
        }))
    }

    /// Full evaluation at a rational point `(q, L, Q)`.
    pub fn eval(&self, point: &[BigRational; 3]) -> BigRational {
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, p) in point.iter().enumerate() {
                if m.0[i] > 0 {
                    t *= num_traits::pow(p.clone(), m.0[i] as usize);
                }
            }
            acc += t;
        }
        acc
    }

    fn add_impl(&self, other: &MultiPoly, negate: bool) -> MultiPoly {
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            match terms.get_mut(m) {
                Some(acc) => {
                    if negate {
                        *acc -= c;
                    } else {
                        *acc += c;
                    }
                    if acc.is_zero() {
                        terms.remove(m);
                    }
                }
                None => {
                    terms.insert(*m, if negate { -c } else { c.clone() });
                }
            }
        }
        MultiPoly { terms }
    }

    fn mul_impl(&self, other: &MultiPoly) -> MultiPoly {
        if self.is_zero() || other.is_zero() {
            return MultiPoly::zero();
        }
        let (small, large) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        if small.len() == 1 {
            let (m, c) = small.terms.iter().next().unwrap();
            return MultiPoly {
                terms: large.terms.iter().map(|(k, v)| (k.mul(m), v * c)).collect(),
            };
        }
        let limit = budget::max_terms();
        if small.is_integral() && large.is_integral() {
            let mut acc: HashMap<Monomial, BigInt> = HashMap::new();
            for (ma, ca) in &small.terms {
                for (mb, cb) in &large.terms {
                    let prod = ca.numer() * cb.numer();
                    match acc.entry(ma.mul(mb)) {
                        std::collections::hash_map::Entry::Occupied(mut e) => *e.get_mut() += prod,
                        std::collections::hash_map::Entry::Vacant(e) => {
                            e.insert(prod);
                        }
                    }
                }
                budget::check(acc.len(), limit);
            }
            MultiPoly {
                terms: acc
                    .into_iter()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(m, c)| (m, BigRational::from_integer(c)))
                    .collect(),
            }
        } else {
            let mut acc: HashMap<Monomial, BigRational> = HashMap::new();
            for (ma, ca) in &small.terms {
                for (mb, cb) in &large.terms {
                    *acc.entry(ma.mul(mb)).or_insert_with(BigRational::zero) += ca * cb;
                }
                budget::check(acc.len(), limit);
            }
            MultiPoly {
                terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
            }
        }
    }

    /// Ring substitution `v ↦ image` for a polynomial image.
    pub fn subst_poly(&self, v: Var, image: &MultiPoly) -> MultiPoly {
        let parts = self.collect_by(v);
        let mut out = MultiPoly::zero();
        let mut power = MultiPoly::one();
        let mut current = 0;
        for (k, coeff) in parts {
            while current < k {
                power = &power * image;
                current += 1;
            }
            out = &out + &(&coeff * &power);
        }
        out
    }

    /// Divides every coefficient by `d`.
    pub fn div_integer(&self, d: &BigInt) -> MultiPoly {
        let d = BigRational::from_integer(d.clone());
        MultiPoly {
            terms: self.terms.iter().map(|(k, c)| (*k, c / &d)).collect(),
        }
    }

    /// Sign of the leading coefficient, or zero for the zero polynomial.
    pub fn leading_sign(&self) -> i32 {
        match self.leading() {
            None => 0,
            Some((_, c)) if c.is_negative() => -1,
            Some(_) => 1,
        }
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        self.add_impl(rhs, false)
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self.add_impl(rhs, true)
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        self.mul_impl(rhs)
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for MultiPoly {
            type Output = MultiPoly;
            fn $m(self, rhs: MultiPoly) -> MultiPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}
