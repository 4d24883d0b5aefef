//! Degenerate Carlitz q-Bernoulli polynomials `β_{n,q}(x|λ)` and their
//! order-r versions, with every expansion and identity as a construction.
//!
//! The degenerate polynomial is the first-kind Stirling transform of the
//! ordinary one, `β_{n,q}(x|λ) = Σ_l s1(n,l) λ^{n-l} β_{l,q}(x)`; the other
//! constructions here (double sum, expansion over the numbers, direct
//! integration of the falling product, distribution sum) must agree with it.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::carlitz::{integral_monomial, BetaCache, QIntegrand};
use crate::error::{Error, Result};
use crate::exactcore::{binomial, rational, BigRational, RatFunc, Var};
use crate::stirling::{falling_step, s1, s2};

/// A degenerate value together with its indices.
#[derive(Clone, Debug)]
pub struct DegenerateBeta {
    pub n: usize,
    pub r: usize,
    pub value: RatFunc,
}

impl DegenerateBeta {
    pub fn new(cache: &BetaCache, n: usize, r: usize) -> Result<DegenerateBeta> {
        Ok(DegenerateBeta {
            n,
            r,
            value: dbeta_order_r(cache, n, r)?,
        })
    }

    /// The degenerate number (`x = 0`, i.e. `Q = 1`).
    pub fn number(&self) -> RatFunc {
        self.value
            .subst(Var::X, &RatFunc::one())
            .expect("denominators are free of Q")
    }

    /// The `λ → 0` limit, which is the non-degenerate counterpart.
    pub fn at_lambda_zero(&self) -> Result<RatFunc> {
        self.value.limit(Var::L, &BigRational::zero())
    }
}

fn lambda_pow(k: usize) -> RatFunc {
    RatFunc::var_pow(Var::L, k as u32)
}

/// `Σ_{l≤n} s1(n,l) λ^{n-l} f(l)`.
pub fn stirling1_transform(n: usize, mut f: impl FnMut(usize) -> RatFunc) -> RatFunc {
    (0..=n)
        .filter(|&l| !s1(n, l).is_zero())
        .map(|l| (&lambda_pow(n - l) * &f(l)).scale_int(&s1(n, l)))
        .sum()
}

/// `Σ_{m≤n} s2(n,m) λ^{n-m} f(m)`.
pub fn stirling2_transform(n: usize, mut f: impl FnMut(usize) -> RatFunc) -> RatFunc {
    (0..=n)
        .filter(|&m| !s2(n, m).is_zero())
        .map(|m| (&lambda_pow(n - m) * &f(m)).scale_int(&s2(n, m)))
        .sum()
}

/// `β_{n,q}(x|λ) = Σ_l s1(n,l) λ^{n-l} β_{l,q}(x)`.
pub fn dbeta(cache: &BetaCache, n: usize) -> RatFunc {
    dbeta_order_r(cache, n, 1).expect("order 1 is valid")
}

/// The fully expanded double sum
/// `Σ_l Σ_{j≤l} s1(n,l) (1-q)^{-l} C(l,j) (-1)^j q^{jx} (j+1)/[j+1]_q λ^{n-l}`.
pub fn dbeta_double_sum(n: usize) -> RatFunc {
    let one_minus_q = &RatFunc::one() - &RatFunc::var(Var::Q);
    let mut total = RatFunc::zero();
    for l in 0..=n {
        let s = s1(n, l);
        if s.is_zero() {
            continue;
        }
        let scale = one_minus_q.pow(l as u32).recip().expect("nonzero");
        for j in 0..=l {
            let mut c = &s * binomial(l as u32, j as u32);
            if j % 2 == 1 {
                c = -c;
            }
            let term = &(&(&scale * &RatFunc::var_pow(Var::X, j as u32)) * &integral_monomial(j))
                * &lambda_pow(n - l);
            total = &total + &term.scale_int(&c);
        }
    }
    total
}

/// Expansion over the Carlitz numbers:
/// `Σ_k Σ_{l≤k} C(n,k) [x]_{n-k,λ} λ^{k-l} q^{lx} s1(k,l) β_{l,q}`.
pub fn dbeta_from_numbers(cache: &BetaCache, n: usize) -> RatFunc {
    let bracket = RatFunc::q_bracket_x();
    let lambda = RatFunc::var(Var::L);
    let mut total = RatFunc::zero();
    for k in 0..=n {
        let falling = falling_step(&bracket, n - k, &lambda);
        let inner: RatFunc = (0..=k)
            .filter(|&l| !s1(k, l).is_zero())
            .map(|l| {
                (&(&lambda_pow(k - l) * &RatFunc::var_pow(Var::X, l as u32))
                    * &cache.beta_number(l))
                    .scale_int(&s1(k, l))
            })
            .sum();
        total = &total + &(&falling * &inner).scale_int(&binomial(n as u32, k as u32));
    }
    total
}

/// Inverse transform `Σ_m s2(n,m) λ^{n-m} source[m]`; with
/// `source[m] = β_{m,q}(x|λ)` this returns `β_{n,q}(x)`.
pub fn recover_beta(n: usize, source: &[RatFunc]) -> Result<RatFunc> {
    if source.len() <= n {
        return Err(Error::InvalidArgument(format!(
            "need {} source values, got {}",
            n + 1,
            source.len()
        )));
    }
    Ok(stirling2_transform(n, |m| source[m].clone()))
}

fn check_order(r: usize) -> Result<()> {
    if r == 0 {
        Err(Error::InvalidArgument("order r must be at least 1".into()))
    } else {
        Ok(())
    }
}

/// `β^{(r)}_{n,q}(x|λ) = Σ_m λ^{n-m} s1(n,m) β^{(r)}_{m,q}(x)`.
pub fn dbeta_order_r(cache: &BetaCache, n: usize, r: usize) -> Result<RatFunc> {
    check_order(r)?;
    if let Some(v) = cache.degenerate.lock().unwrap().get(&(n, r)) {
        return Ok(v.clone());
    }
    let v = stirling1_transform(n, |m| cache.beta_order_r(m, r).expect("r >= 1"));
    cache.degenerate.lock().unwrap().insert((n, r), v.clone());
    Ok(v)
}

/// `Σ_m λ^{n-m} s2(n,m) β^{(r)}_{m,q}(x|λ)`, which recovers `β^{(r)}_{n,q}(x)`.
pub fn recover_beta_order_r(cache: &BetaCache, n: usize, r: usize) -> Result<RatFunc> {
    check_order(r)?;
    let source: Vec<RatFunc> = (0..=n)
        .map(|m| dbeta_order_r(cache, m, r))
        .collect::<Result<_>>()?;
    Ok(stirling2_transform(n, |m| source[m].clone()))
}

/// r-fold integral of the step-λ falling product `[x_1+⋯+x_r+x]_{n,λ}`,
/// multiplied out in powers of `q^{x_1+⋯+x_r}` and integrated termwise.
/// Independent of the Stirling transforms.
pub fn falling_integral(n: usize, r: usize) -> Result<RatFunc> {
    check_order(r)?;
    let bracket = QIntegrand::shifted_bracket();
    let lambda = RatFunc::var(Var::L);
    let mut integrand = QIntegrand::constant(RatFunc::one());
    for i in 0..n {
        let factor = bracket.add_constant(&-lambda.scale_int(&BigInt::from(i)));
        integrand = integrand.mul(&factor);
    }
    Ok(integrand.integrate(r))
}

/// Distribution sum
/// `Σ_l Σ_{i<m} s1(n,l) λ^{n-l} [m]_q^{l-1} q^i β_{l,q^m}((x+i)/m)`.
///
/// `β_{l,q^m}((x+i)/m)` is `β_{l,q}(x)` under `q ↦ q^m` followed by
/// `Q ↦ q^i Q`, since `(q^m)^{(x+i)/m} = q^i q^x`.
pub fn multiplication_rhs(cache: &BetaCache, n: usize, m: usize) -> Result<RatFunc> {
    if m == 0 {
        return Err(Error::InvalidArgument("m must be at least 1".into()));
    }
    let q_m = RatFunc::var_pow(Var::Q, m as u32);
    let bracket_m = RatFunc::q_int(m as u32);
    let mut total = RatFunc::zero();
    for l in 0..=n {
        let s = s1(n, l);
        if s.is_zero() {
            continue;
        }
        let based = cache.beta_poly_closed(l).subst(Var::Q, &q_m)?;
        let shifted: RatFunc = (0..m)
            .map(|i| {
                let image = &RatFunc::var_pow(Var::Q, i as u32) * &RatFunc::var(Var::X);
                let b = based
                    .subst(Var::X, &image)
                    .expect("denominators are free of Q");
                &RatFunc::var_pow(Var::Q, i as u32) * &b
            })
            .sum();
        let weight = bracket_m.powi(l as i64 - 1)?;
        total = &total + &(&(&lambda_pow(n - l) * &weight) * &shifted).scale_int(&s);
    }
    Ok(total)
}

fn difference_sides_upto(cache: &BetaCache, n: usize, upper: usize) -> Result<(RatFunc, RatFunc)> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "difference identity needs n >= 1".into(),
        ));
    }
    let q = RatFunc::var(Var::Q);
    let b = dbeta(cache, n);
    let shifted = b.subst(Var::X, &(&q * &RatFunc::var(Var::X)))?;
    let lhs = &(&q * &shifted) - &b;

    let bracket = RatFunc::q_bracket_x();
    let head = &(&q - &RatFunc::one()) * &falling_step(&bracket, n, &RatFunc::var(Var::L));
    let tail: RatFunc = (1..=upper)
        .filter(|&l| !s1(n, l).is_zero())
        .map(|l| {
            let t = &(&lambda_pow(n - l) * &bracket.pow(l as u32 - 1)) * &RatFunc::var(Var::X);
            t.scale_int(&(s1(n, l) * BigInt::from(l)))
        })
        .sum();
    Ok((lhs, &head + &tail))
}

/// Both sides of the difference identity
/// `q β_{n,q}(x+1|λ) - β_{n,q}(x|λ) = (q-1) λ^n ([x]_q/λ)_n + Σ_{l=1}^{n} s1(n,l) λ^{n-l} l [x]_q^{l-1} q^x`.
///
/// The shift `x ↦ x+1` is `Q ↦ qQ`.
pub fn difference_sides(cache: &BetaCache, n: usize) -> Result<(RatFunc, RatFunc)> {
    difference_sides_upto(cache, n, n)
}

/// Same as [`difference_sides`] but with the sum stopped at `n - 1`, which
/// drops the `l = n` derivative term. Does not hold; kept as a regression.
pub fn difference_sides_printed(cache: &BetaCache, n: usize) -> Result<(RatFunc, RatFunc)> {
    difference_sides_upto(cache, n, n.saturating_sub(1))
}

/// `q I_q(f_1) - I_q(f) = (q-1) f(0) + (q-1)/log q · f'(0)` for
/// `f(y) = q^{jy}`; the derivative term is `(q-1) j`.
pub fn derivative_basis_check(j: usize) -> (RatFunc, RatFunc) {
    let q = RatFunc::var(Var::Q);
    let integral = integral_monomial(j);
    let lhs = &(&RatFunc::var_pow(Var::Q, j as u32 + 1) * &integral) - &integral;
    let q_minus_one = &q - &RatFunc::one();
    let rhs = &q_minus_one + &q_minus_one.scale(&rational(j as i64, 1));
    (lhs, rhs)
}
