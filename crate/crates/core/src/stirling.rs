//! Signed Stirling numbers of the first kind, Stirling numbers of the second
//! kind, and the step-λ falling factorial.
//!
//! First kind uses the signed convention `(x)_n = Σ_l s1(n, l) x^l`.

use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::exactcore::RatFunc;

#[derive(Default)]
struct Rows {
    s1: Vec<Vec<BigInt>>,
    s2: Vec<Vec<BigInt>>,
}

impl Rows {
    fn grow_to(&mut self, n: usize) {
        if self.s1.is_empty() {
            self.s1.push(vec![BigInt::one()]);
            self.s2.push(vec![BigInt::one()]);
        }
        while self.s1.len() <= n {
            let m = self.s1.len() - 1;
            let prev1 = &self.s1[m];
            let prev2 = &self.s2[m];
            let at = |row: &Vec<BigInt>, k: usize| row.get(k).cloned().unwrap_or_else(BigInt::zero);
            let mut row1 = Vec::with_capacity(m + 2);
            let mut row2 = Vec::with_capacity(m + 2);
            for k in 0..=m + 1 {
                let below1 = if k == 0 {
                    BigInt::zero()
                } else {
                    at(prev1, k - 1)
                };
                let below2 = if k == 0 {
                    BigInt::zero()
                } else {
                    at(prev2, k - 1)
                };
                // s1(m+1, k) = s1(m, k-1) - m s1(m, k)
                row1.push(below1 - BigInt::from(m) * at(prev1, k));
                // s2(m+1, k) = k s2(m, k) + s2(m, k-1)
                row2.push(BigInt::from(k) * at(prev2, k) + below2);
            }
            self.s1.push(row1);
            self.s2.push(row2);
        }
    }
}

/// Memoized Stirling triangles, grown row by row on demand.
///
/// Requesting row `n` fills every row up to `n`. Readers only ever observe
/// completed rows.
#[derive(Default)]
pub struct StirlingTable {
    rows: RwLock<Rows>,
}

impl StirlingTable {
    pub fn new() -> StirlingTable {
        StirlingTable::default()
    }

    fn lookup(&self, n: usize, k: usize, first: bool) -> BigInt {
        if k > n {
            return BigInt::zero();
        }
        {
            let rows = self.rows.read().unwrap();
            if rows.s1.len() > n {
                let row = if first { &rows.s1[n] } else { &rows.s2[n] };
                return row[k].clone();
            }
        }
        let mut rows = self.rows.write().unwrap();
        rows.grow_to(n);
        let row = if first { &rows.s1[n] } else { &rows.s2[n] };
        row[k].clone()
    }

    pub fn s1(&self, n: usize, k: usize) -> BigInt {
        self.lookup(n, k, true)
    }

    pub fn s2(&self, n: usize, k: usize) -> BigInt {
        self.lookup(n, k, false)
    }

    /// Number of rows computed so far.
    pub fn rows(&self) -> usize {
        self.rows.read().unwrap().s1.len()
    }
}

fn shared() -> &'static StirlingTable {
    static TABLE: OnceLock<StirlingTable> = OnceLock::new();
    TABLE.get_or_init(StirlingTable::new)
}

/// Signed Stirling number of the first kind; zero for `k > n`.
pub fn s1(n: usize, k: usize) -> BigInt {
    shared().s1(n, k)
}

/// Stirling number of the second kind; zero for `k > n`.
pub fn s2(n: usize, k: usize) -> BigInt {
    shared().s2(n, k)
}

/// `z (z - step) (z - 2 step) ⋯ (z - (n-1) step)`; the empty product is 1.
pub fn falling_step(z: &RatFunc, n: usize, step: &RatFunc) -> RatFunc {
    let mut acc = RatFunc::one();
    for i in 0..n {
        let factor = z - &step.scale_int(&BigInt::from(i));
        acc = &acc * &factor;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactcore::Var;

    /// Coefficients of `x(x-1)⋯(x-n+1)` by direct polynomial multiplication.
    fn falling_coeffs(n: usize) -> Vec<i64> {
        let mut c = vec![1i64];
        for i in 0..n as i64 {
            let mut next = vec![0i64; c.len() + 1];
            for (k, &v) in c.iter().enumerate() {
                next[k + 1] += v;
                next[k] -= i * v;
            }
            c = next;
        }
        c
    }

    /// Counts set partitions of `{0..n}` into exactly `k` blocks by
    /// enumerating restricted growth strings.
    fn count_partitions(n: usize, k: usize) -> u64 {
        fn go(i: usize, n: usize, used: usize, k: usize) -> u64 {
            if i == n {
                return (used == k) as u64;
            }
            let mut total = 0;
            for b in 0..=used {
                if b < k {
                    total += go(i + 1, n, used.max(b + 1), k);
                }
            }
            total
        }
        if n == 0 {
            return (k == 0) as u64;
        }
        go(0, n, 0, k)
    }

    #[test]
    fn first_kind_examples() {
        assert_eq!(s1(1, 1), BigInt::from(1));
        let c = falling_coeffs(3);
        assert_eq!(c, vec![0, 2, -3, 1]);
        assert_eq!(s1(3, 2), BigInt::from(c[2]));
        assert_eq!(s1(3, 1), BigInt::from(c[1]));
        assert_eq!(s1(3, 2), BigInt::from(-3));
        assert_eq!(s1(3, 1), BigInt::from(2));
        assert_eq!(s1(2, 5), BigInt::zero());
    }

    #[test]
    fn first_kind_matches_expansion() {
        for n in 0..=10 {
            let c = falling_coeffs(n);
            for (k, v) in c.iter().enumerate() {
                assert_eq!(s1(n, k), BigInt::from(*v), "s1({n},{k})");
            }
        }
    }

    #[test]
    fn second_kind_examples() {
        for n in 0..=10 {
            assert_eq!(s2(n, n), BigInt::one());
        }
        assert_eq!(count_partitions(3, 2), 3);
        assert_eq!(s2(3, 2), BigInt::from(3));
        assert_eq!(count_partitions(4, 2), 7);
        assert_eq!(s2(4, 2), BigInt::from(7));
        assert_eq!(s2(1, 3), BigInt::zero());
    }

    #[test]
    fn second_kind_matches_partition_count() {
        for n in 0..=8 {
            for k in 0..=n {
                assert_eq!(
                    s2(n, k),
                    BigInt::from(count_partitions(n, k)),
                    "s2({n},{k})"
                );
            }
        }
    }

    #[test]
    fn boundary_values() {
        for n in 1..=12 {
            assert_eq!(s1(n, n), BigInt::one());
            assert_eq!(s1(n, 0), BigInt::zero());
            assert_eq!(s2(n, 0), BigInt::zero());
        }
        assert_eq!(s1(0, 0), BigInt::one());
        assert_eq!(s2(0, 0), BigInt::one());
    }

    #[test]
    fn inversion() {
        for n in 0..=14 {
            for m in 0..=n {
                let sum: BigInt = (0..=n).map(|k| s1(n, k) * s2(k, m)).sum();
                let expected = if n == m {
                    BigInt::one()
                } else {
                    BigInt::zero()
                };
                assert_eq!(sum, expected, "n={n} m={m}");
            }
        }
    }

    #[test]
    fn absolute_first_kind_sums_to_factorial() {
        let mut fact = BigInt::one();
        for n in 0..=12usize {
            if n > 0 {
                fact *= BigInt::from(n);
            }
            let sum: BigInt = (0..=n).map(|k| num_traits::Signed::abs(&s1(n, k))).sum();
            assert_eq!(sum, fact);
        }
    }

    #[test]
    fn second_kind_sums_to_bell() {
        // Bell triangle: each row starts with the last entry of the previous one.
        let mut bell = vec![1u64];
        let mut row = vec![1u64];
        for _ in 1..=10 {
            let mut next = vec![*row.last().unwrap()];
            for &v in &row {
                next.push(next.last().unwrap() + v);
            }
            bell.push(next[0]);
            row = next;
        }
        assert_eq!(bell[4], 15);
        for (n, b) in bell.iter().enumerate() {
            let sum: BigInt = (0..=n).map(|k| s2(n, k)).sum();
            assert_eq!(sum, BigInt::from(*b), "n={n}");
        }
    }

    #[test]
    fn falling_step_examples() {
        let z = RatFunc::var(Var::Q);
        let l = RatFunc::var(Var::L);
        assert!(falling_step(&z, 0, &l).is_one());
        let expected = &z.pow(2) - &(&l * &z);
        assert_eq!(falling_step(&z, 2, &l), expected);
    }

    #[test]
    fn falling_step_is_first_kind_transform() {
        let l = RatFunc::var(Var::L);
        let bracket = RatFunc::q_bracket_x();
        let z = RatFunc::var(Var::X);
        for n in 0..=8 {
            for base in [&bracket, &z] {
                let direct = falling_step(base, n, &l);
                let expanded: RatFunc = (0..=n)
                    .map(|k| &base.pow(k as u32) * &l.pow((n - k) as u32).scale_int(&s1(n, k)))
                    .sum();
                assert_eq!(direct, expanded, "n={n}");
            }
        }
    }

    #[test]
    fn independent_table_agrees_with_shared() {
        let t = StirlingTable::new();
        assert_eq!(t.s1(9, 4), s1(9, 4));
        assert_eq!(t.s2(9, 4), s2(9, 4));
        assert_eq!(t.rows(), 10);
    }
}
