use qbern_core::carlitz::{integral_monomial, BetaCache};
use qbern_core::degenerate::{dbeta, dbeta_order_r, DegenerateBeta};
use qbern_core::exactcore::{rational, BigRational};
use qbern_core::padic::{check_degenerate_integral, LevelReport, QConfig};
use qbern_core::{RatFunc, Var};

/// Bernoulli numbers by the Akiyama–Tanigawa algorithm, which yields
/// `B_1 = +1/2`; the sign is flipped to the `-1/2` convention.
fn bernoulli(n: usize) -> BigRational {
    let mut a: Vec<BigRational> = Vec::new();
    for m in 0..=n {
        a.push(rational(1, m as i64 + 1));
        for j in (1..=m).rev() {
            a[j - 1] = (&a[j - 1] - &a[j]) * rational(j as i64, 1);
        }
    }
    if n == 1 {
        -a[0].clone()
    } else {
        a[0].clone()
    }
}

fn one() -> BigRational {
    rational(1, 1)
}

#[test]
fn q_to_one_gives_bernoulli_numbers() {
    assert_eq!(bernoulli(12), rational(-691, 2730));
    let cache = BetaCache::new();
    for n in 0..=12 {
        let limit = cache.beta_number(n).limit(Var::Q, &one()).unwrap();
        assert_eq!(limit, RatFunc::constant(bernoulli(n)), "n={n}");
    }
}

#[test]
fn degenerate_numbers_at_q_one_and_lambda_zero() {
    let cache = BetaCache::new();
    for n in 0..=8 {
        let d = DegenerateBeta::new(&cache, n, 1).unwrap();
        let number = d.number();
        let classical = number
            .limit(Var::L, &BigRational::from_integer(0.into()))
            .unwrap()
            .limit(Var::Q, &one())
            .unwrap();
        assert_eq!(classical, RatFunc::constant(bernoulli(n)), "n={n}");
    }
}

#[test]
fn numbers_are_polynomials_at_x_zero() {
    let cache = BetaCache::new();
    for n in 0..=10 {
        let at_zero = cache
            .beta_poly_closed(n)
            .subst(Var::X, &RatFunc::one())
            .unwrap();
        assert_eq!(at_zero, cache.beta_number(n), "n={n}");
    }
}

#[test]
fn order_r_at_q_one_is_higher_order_bernoulli() {
    // (t/(e^t - 1))^2 = Σ B^{(2)}_n t^n/n! with B^{(2)}_n = Σ C(n,k) B_k B_{n-k}.
    let cache = BetaCache::new();
    for n in 0..=6 {
        let mut expected = BigRational::from_integer(0.into());
        for k in 0..=n {
            let c = (0..k).fold(one(), |acc, i| {
                acc * rational((n - i) as i64, (i + 1) as i64)
            });
            expected += c * bernoulli(k) * bernoulli(n - k);
        }
        let value = cache
            .beta_order_r(n, 2)
            .unwrap()
            .subst(Var::X, &RatFunc::one())
            .unwrap()
            .limit(Var::Q, &one())
            .unwrap();
        assert_eq!(value, RatFunc::constant(expected), "n={n}");
    }
}

#[test]
fn degenerate_order_one_is_degenerate() {
    let cache = BetaCache::new();
    for n in 0..=6 {
        assert_eq!(dbeta_order_r(&cache, n, 1).unwrap(), dbeta(&cache, n));
    }
}

#[test]
fn basis_integral_at_q_one() {
    for j in 0..=8 {
        assert!(integral_monomial(j).limit(Var::Q, &one()).unwrap().is_one());
    }
}

#[test]
fn riemann_sums_track_the_exact_values() {
    let cfg = QConfig::new(5, 12).unwrap().with_lambda(5).with_x(2);
    for n in 1..=3 {
        let levels = check_degenerate_integral(n, &cfg, &[1, 2, 3]).unwrap();
        assert!(LevelReport::nondecreasing(&levels), "n={n}: {levels:?}");
        assert!(levels[2].exact || levels[2].valuation > levels[0].valuation);
    }
}
