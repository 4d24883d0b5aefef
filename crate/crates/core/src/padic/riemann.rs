//! Finite Riemann sums `(1/[p^N]_q) Σ_{y<p^N} f(y) q^y` and the numeric
//! checks built on them.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::{is_odd_prime, Padic};
use crate::carlitz::BetaCache;
use crate::degenerate::dbeta;
use crate::error::{Error, Result};
use crate::exactcore::RatFunc;

/// Largest number of summation points (tuples, for iterated sums) accepted.
pub const MAX_POINTS: u64 = 1 << 24;

/// Evaluation point and working precision for the numeric checks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QConfig {
    pub p: u64,
    pub k: i64,
    pub q: BigInt,
    pub lambda: BigInt,
    pub x: u64,
}

impl QConfig {
    /// `q = 1 + p`, `λ = 0`, `x = 0`.
    pub fn new(p: u64, k: i64) -> Result<QConfig> {
        if !is_odd_prime(p) {
            return Err(Error::InvalidArgument(format!(
                "p = {p} is not an odd prime"
            )));
        }
        if k < 1 {
            return Err(Error::InvalidArgument(format!(
                "precision {k} must be positive"
            )));
        }
        Ok(QConfig {
            p,
            k,
            q: BigInt::from(1 + p),
            lambda: BigInt::zero(),
            x: 0,
        })
    }

    /// Replaces `q`; it must satisfy `q ≡ 1 (mod p)`.
    pub fn with_q(mut self, q: BigInt) -> Result<QConfig> {
        if !(&q - 1u32).mod_floor(&BigInt::from(self.p)).is_zero() {
            return Err(Error::InvalidArgument(format!(
                "q = {q} is not 1 mod {}",
                self.p
            )));
        }
        self.q = q;
        Ok(self)
    }

    pub fn with_lambda(mut self, lambda: i64) -> QConfig {
        self.lambda = BigInt::from(lambda);
        self
    }

    pub fn with_x(mut self, x: u64) -> QConfig {
        self.x = x;
        self
    }

    fn int(&self, n: &BigInt, prec: i64) -> Padic {
        Padic::from_int(self.p, n, prec)
    }

    fn modulus(&self, prec: i64) -> BigInt {
        num_traits::pow(BigInt::from(self.p), prec as usize)
    }

    fn v_q_minus_one(&self) -> i64 {
        self.int(&(&self.q - 1u32), self.k)
            .valuation()
            .unwrap_or(self.k)
    }

    /// `q^e` known to precision `prec`.
    pub fn q_pow(&self, e: u64, prec: i64) -> Padic {
        self.int(&self.q.modpow(&BigInt::from(e), &self.modulus(prec)), prec)
    }

    /// `[m]_q = (1 - q^m)/(1 - q)`, known to at least `prec` digits. The
    /// numerator is computed with extra digits to absorb the division.
    pub fn q_bracket(&self, m: u64, prec: i64) -> Padic {
        let extra = prec + self.v_q_minus_one();
        let num = &Padic::from_i64(self.p, 1, extra) - &self.q_pow(m, extra);
        let den = self.int(&(BigInt::one() - &self.q), extra);
        num.checked_div(&den).expect("q is not 1").truncate(prec)
    }

    /// `(q, λ, q^x)` as exact rationals, for evaluating closed forms.
    fn point(&self) -> [BigRational; 3] {
        [
            BigRational::from_integer(self.q.clone()),
            BigRational::from_integer(self.lambda.clone()),
            BigRational::from_integer(self.q.pow(self.x as u32)),
        ]
    }

    fn target(&self, value: &RatFunc, prec: i64) -> Result<Padic> {
        Ok(Padic::from_rational(
            self.p,
            &value.eval(&self.point())?,
            prec,
        ))
    }
}

fn point_count(p: u64, exp: u64) -> Result<u64> {
    let total = p
        .checked_pow(exp as u32)
        .filter(|&t| t <= MAX_POINTS)
        .ok_or(Error::BudgetExceeded {
            terms: usize::MAX,
            budget: MAX_POINTS as usize,
        })?;
    Ok(total)
}

fn need_precision(k: i64, loss: i64) -> Result<()> {
    if k <= loss {
        Err(Error::Precision(format!(
            "precision {k} does not exceed the {loss} digits lost to the normalization"
        )))
    } else {
        Ok(())
    }
}

/// `(1/[d p^N]_q) Σ_{y < d p^N} f(y) q^y`.
pub fn riemann_sum_periodic(
    f: impl Fn(u64) -> Padic,
    cfg: &QConfig,
    d: u64,
    level: u32,
) -> Result<Padic> {
    need_precision(cfg.k, level as i64)?;
    let points = point_count(cfg.p, level as u64)?
        .checked_mul(d)
        .filter(|&t| t <= MAX_POINTS)
        .ok_or(Error::BudgetExceeded {
            terms: usize::MAX,
            budget: MAX_POINTS as usize,
        })?;
    let mut sum = Padic::zero(cfg.p, cfg.k);
    for y in 0..points {
        sum = &sum + &(&f(y) * &cfg.q_pow(y, cfg.k));
    }
    let den = cfg.q_bracket(points, 2 * cfg.k + level as i64);
    sum.checked_div(&den)
}

/// `(1/[p^N]_q) Σ_{y < p^N} f(y) q^y`; the result is known to `K - N` digits.
pub fn riemann_sum(f: impl Fn(u64) -> Padic, cfg: &QConfig, level: u32) -> Result<Padic> {
    riemann_sum_periodic(f, cfg, 1, level)
}

/// Agreement between a Riemann sum and its exact limit at one level.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelReport {
    #[serde(rename = "N")]
    pub level: u32,
    /// Valuation of the difference; for `exact` levels, the known precision.
    pub valuation: i64,
    pub precision: i64,
    /// The difference is zero to every known digit.
    pub exact: bool,
}

impl LevelReport {
    fn new(level: u32, diff: &Padic) -> LevelReport {
        LevelReport {
            level,
            valuation: diff.valuation().unwrap_or(diff.precision()),
            precision: diff.precision(),
            exact: diff.is_zero(),
        }
    }

    /// Valuations never drop as the level grows. An exact level only bounds
    /// its valuation from below, so it can follow anything, and a later
    /// level must not fall under that bound.
    pub fn nondecreasing(levels: &[LevelReport]) -> bool {
        levels
            .windows(2)
            .all(|w| w[1].exact || w[1].valuation >= w[0].valuation)
    }
}

/// `[x+y]_{n,λ} = Π_{i<n} ([x+y]_q - iλ)` at integer `y`.
fn falling_integrand(cfg: &QConfig, n: usize, y: u64) -> Padic {
    let bracket = cfg.q_bracket(cfg.x + y, cfg.k);
    let mut acc = Padic::from_i64(cfg.p, 1, cfg.k);
    for i in 0..n {
        let shift = cfg.int(&(&cfg.lambda * BigInt::from(i)), cfg.k);
        acc = &acc * &(&bracket - &shift);
    }
    acc
}

/// Riemann sums of the step-λ falling product against the exact degenerate
/// polynomial, one report per level.
pub fn check_degenerate_integral(
    n: usize,
    cfg: &QConfig,
    levels: &[u32],
) -> Result<Vec<LevelReport>> {
    let exact = dbeta(&BetaCache::new(), n);
    levels
        .iter()
        .map(|&level| {
            let sum = riemann_sum(|y| falling_integrand(cfg, n, y), cfg, level)?;
            let target = cfg.target(&exact, cfg.k)?;
            Ok(LevelReport::new(level, &(&sum - &target)))
        })
        .collect()
}

/// r-fold iterated Riemann sum of `[x_1+⋯+x_r+x]_q^n` against the exact
/// order-r polynomial. The integrand depends only on `s = x_1+⋯+x_r`, so
/// the tuples are grouped by `s` with their multiplicities.
pub fn check_order_r(n: usize, r: usize, cfg: &QConfig, level: u32) -> Result<LevelReport> {
    if r == 0 {
        return Err(Error::InvalidArgument("order r must be at least 1".into()));
    }
    let loss = r as i64 * level as i64;
    need_precision(cfg.k, loss)?;
    let width = point_count(cfg.p, level as u64)?;
    point_count(cfg.p, level as u64 * r as u64)?;

    let mut counts = vec![BigInt::one()];
    for _ in 0..r {
        let mut next = vec![BigInt::zero(); counts.len() + width as usize - 1];
        for (s, c) in counts.iter().enumerate() {
            for y in 0..width as usize {
                next[s + y] += c;
            }
        }
        counts = next;
    }

    let mut sum = Padic::zero(cfg.p, cfg.k);
    for (s, c) in counts.iter().enumerate() {
        let s = s as u64;
        let term = &cfg.q_bracket(cfg.x + s, cfg.k).pow(n as u64) * &cfg.q_pow(s, cfg.k);
        sum = &sum + &(&cfg.int(c, cfg.k) * &term);
    }
    let den = cfg.q_bracket(width, 2 * cfg.k + level as i64).pow(r as u64);
    let value = sum.checked_div(&den)?;

    let exact = BetaCache::new().beta_order_r(n, r)?;
    let target = cfg.target(&exact, cfg.k)?;
    Ok(LevelReport::new(level, &(&value - &target)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::carlitz::integral_monomial;

    fn cfg() -> QConfig {
        QConfig::new(3, 15).unwrap()
    }

    #[test]
    fn config_validation() {
        assert!(QConfig::new(4, 15).is_err());
        assert!(QConfig::new(2, 15).is_err());
        assert!(cfg().with_q(BigInt::from(5)).is_err());
        assert!(cfg().with_q(BigInt::from(7)).is_ok());
    }

    #[test]
    fn bracket_of_p_power_has_valuation_level() {
        let c = cfg();
        for level in 0..=6u32 {
            let b = c.q_bracket(3u64.pow(level), c.k);
            assert_eq!(b.valuation(), Some(level as i64));
            assert!(b.precision() >= c.k);
        }
    }

    #[test]
    fn constant_integrand_sums_to_one() {
        let c = cfg();
        for level in 1..=6 {
            let s = riemann_sum(|_| Padic::from_i64(3, 1, c.k), &c, level).unwrap();
            let diff = &s - &Padic::from_i64(3, 1, c.k);
            assert!(diff.is_zero(), "level {level}: {s}");
            assert_eq!(diff.precision(), c.k - level as i64);
        }
    }

    #[test]
    fn insufficient_precision() {
        let c = QConfig::new(3, 4).unwrap();
        let r = riemann_sum(|_| Padic::from_i64(3, 1, 4), &c, 4);
        assert!(matches!(r, Err(Error::Precision(_))));
        assert!(matches!(
            check_order_r(1, 2, &c, 2),
            Err(Error::Precision(_))
        ));
    }

    #[test]
    fn monomial_integral_converges() {
        let c = cfg();
        let exact = c.target(&integral_monomial(1), c.k).unwrap();
        let vals: Vec<i64> = [2u32, 4, 6]
            .iter()
            .map(|&level| {
                let s = riemann_sum(|y| c.q_pow(y, c.k), &c, level).unwrap();
                let d = &s - &exact;
                d.valuation().unwrap_or(d.precision())
            })
            .collect();
        assert!(vals.windows(2).all(|w| w[1] > w[0]), "{vals:?}");
    }

    #[test]
    fn degenerate_integral_trivial_degree() {
        let reports = check_degenerate_integral(0, &cfg(), &[2, 4, 6]).unwrap();
        assert!(reports.iter().all(|r| r.exact));
    }

    #[test]
    fn degenerate_integral_degree_one_converges() {
        let reports = check_degenerate_integral(1, &cfg(), &[2, 4, 6]).unwrap();
        assert!(LevelReport::nondecreasing(&reports), "{reports:?}");
        assert!(reports[2].valuation >= 4, "{reports:?}");
    }

    #[test]
    fn degenerate_integral_degenerate_shifted() {
        let c = cfg().with_lambda(1).with_x(1);
        let reports = check_degenerate_integral(3, &c, &[2, 4, 6]).unwrap();
        assert!(LevelReport::nondecreasing(&reports), "{reports:?}");
    }

    #[test]
    fn order_two() {
        let c = cfg();
        let floor = check_order_r(1, 2, &c, 2).unwrap();
        let at3 = check_order_r(1, 2, &c, 3).unwrap();
        assert!(at3.valuation >= 2, "{at3:?}");
        assert!(at3.exact || at3.valuation >= floor.valuation);
        assert!(check_order_r(0, 2, &c, 3).unwrap().exact);
        assert!(check_order_r(0, 3, &c, 2).unwrap().exact);
    }

    #[test]
    fn order_one_matches_degenerate_at_lambda_zero() {
        let c = cfg();
        for n in 0..=3 {
            let a = check_order_r(n, 1, &c, 3).unwrap();
            let b = check_degenerate_integral(n, &c, &[3]).unwrap();
            assert_eq!(a, b[0], "n={n}");
        }
    }

    #[test]
    fn doubled_period_agrees() {
        let c = cfg();
        let f = |y: u64| c.q_bracket(y, c.k).pow(2);
        let diffs: Vec<i64> = (1..=4u32)
            .map(|level| {
                let a = riemann_sum(f, &c, level).unwrap();
                let b = riemann_sum_periodic(f, &c, 2, level).unwrap();
                let d = &a - &b;
                d.valuation().unwrap_or(d.precision())
            })
            .collect();
        assert!(diffs.windows(2).all(|w| w[1] > w[0]), "{diffs:?}");
    }

    #[test]
    fn point_budget() {
        let c = QConfig::new(3, 40).unwrap();
        assert!(matches!(
            check_order_r(1, 3, &c, 12),
            Err(Error::BudgetExceeded { .. })
        ));
    }
}
