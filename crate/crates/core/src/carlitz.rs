//! Carlitz q-Bernoulli numbers and polynomials.
//!
//! Three independent constructions of `β_{n,q}(x)` are provided: the
//! binomial expansion over the numbers, the closed alternating sum, and
//! term-by-term integration of `[x+y]_q^n` against the q-measure. The
//! order-r polynomials come from the r-fold integral, which factors because
//! `∫⋯∫ q^{j(y_1+⋯+y_r)} = (∫ q^{jy})^r`.

use std::collections::HashMap;
use std::sync::Mutex;

use crate::error::{Error, Result};
use crate::exactcore::{binomial, MultiPoly, RatFunc, Var};

/// `∫ q^{jy} dμ_q(y) = (j+1)/[j+1]_q`.
pub fn integral_monomial(j: usize) -> RatFunc {
    RatFunc::new(
        MultiPoly::from_int(j as i64 + 1),
        RatFunc::q_int(j as u32 + 1).num().clone(),
    )
    .expect("[j+1]_q is nonzero")
}

/// A polynomial in `Y = q^y` with rational-function coefficients, used to
/// integrate functions of `[x+y]_q` against `dμ_q(y)` term by term.
#[derive(Clone, Debug)]
pub struct QIntegrand {
    coeffs: Vec<RatFunc>,
}

impl QIntegrand {
    pub fn constant(c: RatFunc) -> QIntegrand {
        QIntegrand { coeffs: vec![c] }
    }

    /// `[x+y]_q = (1 - Q Y)/(1 - q)`.
    pub fn shifted_bracket() -> QIntegrand {
        let inv = RatFunc::new(MultiPoly::one(), MultiPoly::one_minus_pow(Var::Q, 1)).unwrap();
        let y_coeff = -(&RatFunc::var(Var::X) * &inv);
        QIntegrand {
            coeffs: vec![inv, y_coeff],
        }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeff(&self, j: usize) -> RatFunc {
        self.coeffs.get(j).cloned().unwrap_or_else(RatFunc::zero)
    }

    pub fn add_constant(&self, c: &RatFunc) -> QIntegrand {
        let mut coeffs = self.coeffs.clone();
        coeffs[0] = &coeffs[0] + c;
        QIntegrand { coeffs }
    }

    pub fn mul(&self, other: &QIntegrand) -> QIntegrand {
        let mut coeffs = vec![RatFunc::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = &coeffs[i + j] + &(a * b);
            }
        }
        QIntegrand { coeffs }
    }

    /// r-fold integral against `dμ_q(y_1)⋯dμ_q(y_r)` with `Y = q^{y_1+⋯+y_r}`.
    pub fn integrate(&self, r: usize) -> RatFunc {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, c)| c * &integral_monomial(j).pow(r as u32))
            .sum()
    }
}

/// Memoized Carlitz values.
///
/// `numbers` holds `β_{n,q}`, `polys` holds `β_{n,q}(x)`, `order_r` holds
/// `β^{(r)}_{n,q}(x)` and `degenerate` holds `β^{(r)}_{n,q}(x|λ)`. All
/// entries are deterministic functions of their keys, so concurrent callers
/// that race on a miss compute identical values.
#[derive(Default)]
pub struct BetaCache {
    numbers: Mutex<Vec<RatFunc>>,
    polys: Mutex<HashMap<usize, RatFunc>>,
    order_r: Mutex<HashMap<(usize, usize), RatFunc>>,
    pub(crate) degenerate: Mutex<HashMap<(usize, usize), RatFunc>>,
}

impl BetaCache {
    pub fn new() -> BetaCache {
        BetaCache::default()
    }

    /// `β_{n,q}` from `q(qβ + 1)^n - β_n = [n = 1]`, solved for `β_n`:
    /// `β_n = ([n = 1] - q Σ_{k<n} C(n,k) q^k β_k) / (q^{n+1} - 1)`.
    pub fn beta_number(&self, n: usize) -> RatFunc {
        {
            let nums = self.numbers.lock().unwrap();
            if let Some(b) = nums.get(n) {
                return b.clone();
            }
        }
        let mut known: Vec<RatFunc> = self.numbers.lock().unwrap().clone();
        if known.is_empty() {
            known.push(RatFunc::one());
        }
        let q = RatFunc::var(Var::Q);
        while known.len() <= n {
            let m = known.len();
            let mut rhs = if m == 1 {
                RatFunc::one()
            } else {
                RatFunc::zero()
            };
            let mut acc = RatFunc::zero();
            for (k, b) in known.iter().enumerate() {
                let t = &RatFunc::var_pow(Var::Q, k as u32) * b;
                acc = &acc + &t.scale_int(&binomial(m as u32, k as u32));
            }
            rhs = &rhs - &(&q * &acc);
            let pivot = RatFunc::var_pow(Var::Q, m as u32 + 1) - RatFunc::one();
            known.push(rhs.checked_div(&pivot).expect("q^{n+1} - 1 is nonzero"));
        }
        let value = known[n].clone();
        let mut nums = self.numbers.lock().unwrap();
        if nums.len() < known.len() {
            *nums = known;
        }
        value
    }

    /// `β_{n,q}(x) = Σ_l C(n,l) β_{l,q} q^{lx} [x]_q^{n-l}`.
    pub fn beta_poly(&self, n: usize) -> RatFunc {
        let bracket = RatFunc::q_bracket_x();
        (0..=n)
            .map(|l| {
                let t = &(&self.beta_number(l) * &RatFunc::var_pow(Var::X, l as u32))
                    * &bracket.pow((n - l) as u32);
                t.scale_int(&binomial(n as u32, l as u32))
            })
            .sum()
    }

    /// `β_{n,q}(x) = (1-q)^{-n} Σ_j C(n,j) (-1)^j q^{jx} (j+1)/[j+1]_q`.
    pub fn beta_poly_closed(&self, n: usize) -> RatFunc {
        if let Some(v) = self.polys.lock().unwrap().get(&n) {
            return v.clone();
        }
        let v = closed_form(n, 1);
        self.polys.lock().unwrap().insert(n, v.clone());
        v
    }

    /// `∫ [x+y]_q^n dμ_q(y)`, expanded in powers of `q^y` and integrated
    /// term by term.
    pub fn beta_via_integral(&self, n: usize) -> RatFunc {
        let bracket = QIntegrand::shifted_bracket();
        let mut integrand = QIntegrand::constant(RatFunc::one());
        for _ in 0..n {
            integrand = integrand.mul(&bracket);
        }
        integrand.integrate(1)
    }

    /// Order-r polynomial `β^{(r)}_{n,q}(x)`; `r = 0` is rejected.
    pub fn beta_order_r(&self, n: usize, r: usize) -> Result<RatFunc> {
        if r == 0 {
            return Err(Error::InvalidArgument("order r must be at least 1".into()));
        }
        if r == 1 {
            return Ok(self.beta_poly_closed(n));
        }
        if let Some(v) = self.order_r.lock().unwrap().get(&(n, r)) {
            return Ok(v.clone());
        }
        let v = closed_form(n, r);
        self.order_r.lock().unwrap().insert((n, r), v.clone());
        Ok(v)
    }
}

/// `(1-q)^{-n} Σ_j C(n,j) (-1)^j Q^j ((j+1)/[j+1]_q)^r`.
fn closed_form(n: usize, r: usize) -> RatFunc {
    let inner: RatFunc = (0..=n)
        .map(|j| {
            let mut c = binomial(n as u32, j as u32);
            if j % 2 == 1 {
                c = -c;
            }
            (&RatFunc::var_pow(Var::X, j as u32) * &integral_monomial(j).pow(r as u32))
                .scale_int(&c)
        })
        .sum();
    let scale = RatFunc::new(
        MultiPoly::one(),
        MultiPoly::one_minus_pow(Var::Q, 1).pow(n as u32),
    )
    .expect("nonzero");
    &inner * &scale
}

/// Left side of the defining recurrence, `q Σ_{k≤n} C(n,k) q^k β_k - β_n`,
/// evaluated on supplied values.
pub fn recurrence_residual(betas: &[RatFunc], n: usize) -> RatFunc {
    let sum: RatFunc = (0..=n)
        .map(|k| {
            (&RatFunc::var_pow(Var::Q, k as u32) * &betas[k])
                .scale_int(&binomial(n as u32, k as u32))
        })
        .sum();
    &(&RatFunc::var(Var::Q) * &sum) - &betas[n]
}

/// Kronecker delta `[n = 1]` as used on the right of the recurrence.
pub fn recurrence_rhs(n: usize) -> RatFunc {
    if n == 1 {
        RatFunc::one()
    } else {
        RatFunc::zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactcore::{rational, BigRational};
    use num_traits::One;

    fn q() -> RatFunc {
        RatFunc::var(Var::Q)
    }

    fn one_plus_q() -> RatFunc {
        &RatFunc::one() + &q()
    }

    fn at_x0(f: &RatFunc) -> RatFunc {
        f.subst(Var::X, &RatFunc::one()).unwrap()
    }

    #[test]
    fn first_numbers() {
        let c = BetaCache::new();
        assert!(c.beta_number(0).is_one());
        // β_1 (q^2 - 1) = 1 - q
        let b1 = RatFunc::from_int(-1).checked_div(&one_plus_q()).unwrap();
        assert_eq!(c.beta_number(1), b1);
        // β_2 (q^3 - 1) = -q (1 + 2 q β_1)
        let b2 = q()
            .checked_div(&(&one_plus_q() * &(&one_plus_q() + &q().pow(2))))
            .unwrap();
        assert_eq!(c.beta_number(2), b2);
        assert_eq!(
            c.beta_number(2).limit(Var::Q, &rational(1, 1)).unwrap(),
            RatFunc::constant(rational(1, 6))
        );
    }

    #[test]
    fn number_cache_fills_prefix() {
        let c = BetaCache::new();
        let b5 = c.beta_number(5);
        assert_eq!(c.numbers.lock().unwrap().len(), 6);
        assert!(c.beta_number(5).same_form(&b5));
    }

    #[test]
    fn recurrence_closes() {
        let c = BetaCache::new();
        let betas: Vec<RatFunc> = (0..=12).map(|n| c.beta_number(n)).collect();
        for n in 1..=12 {
            assert_eq!(recurrence_residual(&betas, n), recurrence_rhs(n), "n={n}");
        }
    }

    #[test]
    fn first_polynomials() {
        let c = BetaCache::new();
        assert!(c.beta_poly(0).is_one());
        assert!(c.beta_poly_closed(0).is_one());
        assert!(c.beta_via_integral(0).is_one());
        let x = RatFunc::var(Var::X);
        let b1 = &RatFunc::q_bracket_x() - &x.checked_div(&one_plus_q()).unwrap();
        assert_eq!(c.beta_poly(1), b1);
        let closed1 = &(&RatFunc::one() - &(&x * &integral_monomial(1)))
            * &RatFunc::one()
                .checked_div(&(&RatFunc::one() - &q()))
                .unwrap();
        assert_eq!(c.beta_poly_closed(1), closed1);
        assert_eq!(at_x0(&c.beta_via_integral(1)), c.beta_number(1));
    }

    #[test]
    fn three_constructions_agree() {
        let c = BetaCache::new();
        for n in 0..=10 {
            let a = c.beta_poly(n);
            let b = c.beta_poly_closed(n);
            let i = c.beta_via_integral(n);
            assert_eq!(a, b, "n={n}");
            assert_eq!(b, i, "n={n}");
        }
    }

    #[test]
    fn polys_at_x0_are_numbers() {
        let c = BetaCache::new();
        for n in 0..=12 {
            assert_eq!(at_x0(&c.beta_poly_closed(n)), c.beta_number(n), "n={n}");
        }
    }

    #[test]
    fn integral_monomials() {
        assert!(integral_monomial(0).is_one());
        assert_eq!(
            integral_monomial(1),
            RatFunc::from_int(2).checked_div(&one_plus_q()).unwrap()
        );
        let three = &one_plus_q() + &q().pow(2);
        assert_eq!(
            integral_monomial(2),
            RatFunc::from_int(3).checked_div(&three).unwrap()
        );
    }

    #[test]
    fn order_r_examples() {
        let c = BetaCache::new();
        for r in 1..=4 {
            assert!(c.beta_order_r(0, r).unwrap().is_one());
        }
        for n in 0..=8 {
            assert_eq!(c.beta_order_r(n, 1).unwrap(), c.beta_poly_closed(n));
        }
        let expected = &(&RatFunc::one() - &(&RatFunc::var(Var::X) * &integral_monomial(1).pow(2)))
            * &RatFunc::one()
                .checked_div(&(&RatFunc::one() - &q()))
                .unwrap();
        assert_eq!(c.beta_order_r(1, 2).unwrap(), expected);
        assert!(matches!(
            c.beta_order_r(3, 0),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn order_r_matches_iterated_integrand() {
        let c = BetaCache::new();
        let bracket = QIntegrand::shifted_bracket();
        for r in 2..=3 {
            let mut integrand = QIntegrand::constant(RatFunc::one());
            for n in 0..=5 {
                assert_eq!(
                    integrand.integrate(r),
                    c.beta_order_r(n, r).unwrap(),
                    "n={n} r={r}"
                );
                integrand = integrand.mul(&bracket);
            }
        }
    }

    #[test]
    fn numbers_have_removable_poles_at_one() {
        let c = BetaCache::new();
        for n in 0..=12 {
            assert!(c.beta_number(n).limit(Var::Q, &BigRational::one()).is_ok());
        }
    }
}
