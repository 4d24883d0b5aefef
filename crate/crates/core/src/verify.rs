//! Identity verification over exhaustive parameter grids.
//!
//! Each identity is checked by building both sides independently and
//! comparing them with exact rational-function equality. A check stops at
//! the first mismatch and records it as the counterexample.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::carlitz::BetaCache;
use crate::degenerate::{
    dbeta, dbeta_double_sum, dbeta_from_numbers, dbeta_order_r, derivative_basis_check,
    difference_sides, difference_sides_printed, falling_integral, multiplication_rhs, recover_beta,
    recover_beta_order_r, stirling1_transform,
};
use crate::error::{Error, Result};
use crate::exactcore::budget::{with_budget, DEFAULT_MAX_TERMS};
use crate::exactcore::{BigRational, RatFunc, Var};
use num_traits::Zero;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IdentityId {
    T1,
    T2,
    Cor3,
    T4,
    T5,
    T6,
    T7,
    T8,
    T9,
    T9Truncated,
    Eq23,
}

impl IdentityId {
    pub const ALL: [IdentityId; 11] = [
        IdentityId::T1,
        IdentityId::T2,
        IdentityId::Cor3,
        IdentityId::T4,
        IdentityId::T5,
        IdentityId::T6,
        IdentityId::T7,
        IdentityId::T8,
        IdentityId::T9,
        IdentityId::T9Truncated,
        IdentityId::Eq23,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            IdentityId::T1 => "T1",
            IdentityId::T2 => "T2",
            IdentityId::Cor3 => "COR3",
            IdentityId::T4 => "T4",
            IdentityId::T5 => "T5",
            IdentityId::T6 => "T6",
            IdentityId::T7 => "T7",
            IdentityId::T8 => "T8",
            IdentityId::T9 => "T9",
            IdentityId::T9Truncated => "T9-paper-variant",
            IdentityId::Eq23 => "EQ23",
        }
    }

    /// Whether the identity is expected to fail on a grid reaching `max_n`.
    /// Only the variant with the truncated sum is, and only once `n ≥ 1` is
    /// on the grid.
    pub fn expected_to_fail(self, max_n: usize) -> bool {
        self == IdentityId::T9Truncated && max_n >= 1
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for IdentityId {
    type Err = Error;

    fn from_str(s: &str) -> Result<IdentityId> {
        IdentityId::ALL
            .into_iter()
            .find(|id| id.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown identity id {s:?}")))
    }
}

/// Upper bounds of the index grid. Unset bounds fall back to per-identity
/// defaults.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Bounds {
    pub max_n: Option<usize>,
    pub max_m: Option<usize>,
    pub max_r: Option<usize>,
    pub max_j: Option<usize>,
}

/// Resource limits. Grids beyond the index limits, products beyond the term
/// budget, and checks running past the time budget are reported as errors.
#[derive(Clone, Copy, Debug)]
pub struct Limits {
    pub max_n: usize,
    pub max_m: usize,
    pub max_r: usize,
    pub max_j: usize,
    pub max_terms: usize,
    pub time_budget: Option<Duration>,
}

impl Default for Limits {
    fn default() -> Limits {
        Limits {
            max_n: 10,
            max_m: 3,
            max_r: 3,
            max_j: 20,
            max_terms: DEFAULT_MAX_TERMS,
            time_budget: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Counterexample {
    pub params: BTreeMap<String, usize>,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub identity_id: String,
    pub params: BTreeMap<String, usize>,
    pub status: Status,
    pub counterexample: Option<Counterexample>,
    pub elapsed_ms: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl IdentityReport {
    /// True when the status is the one this identity is supposed to have.
    pub fn as_expected(&self) -> bool {
        let id: IdentityId = self.identity_id.parse().expect("report ids are valid");
        let max_n = self.params.get("n").copied().unwrap_or(0);
        match self.status {
            Status::Pass => !id.expected_to_fail(max_n),
            Status::Fail => id.expected_to_fail(max_n),
            Status::Error => false,
        }
    }

    pub fn is_resource_error(&self) -> bool {
        self.status == Status::Error
    }
}

/// Every report matches its expected status.
pub fn expectations_met(reports: &[IdentityReport]) -> bool {
    reports.iter().all(IdentityReport::as_expected)
}

type Point = BTreeMap<String, usize>;

fn point(pairs: &[(&str, usize)]) -> Point {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

struct Grid {
    params: Point,
    points: Vec<Point>,
}

fn default_n(id: IdentityId) -> usize {
    match id {
        IdentityId::T1
        | IdentityId::Cor3
        | IdentityId::T5
        | IdentityId::T9
        | IdentityId::T9Truncated => 8,
        IdentityId::T2 | IdentityId::T4 => 10,
        IdentityId::T6 | IdentityId::T7 | IdentityId::T8 => 6,
        IdentityId::Eq23 => 0,
    }
}

fn check_limit(name: &str, value: usize, limit: usize) -> Result<usize> {
    if value > limit {
        Err(Error::InvalidArgument(format!(
            "bound {name} = {value} exceeds the resource limit {limit}"
        )))
    } else {
        Ok(value)
    }
}

fn grid(id: IdentityId, bounds: &Bounds, limits: &Limits) -> Result<Grid> {
    if id == IdentityId::Eq23 {
        let j = check_limit("j", bounds.max_j.unwrap_or(10), limits.max_j)?;
        return Ok(Grid {
            params: point(&[("j", j)]),
            points: (0..=j).map(|j| point(&[("j", j)])).collect(),
        });
    }
    let n = check_limit("n", bounds.max_n.unwrap_or(default_n(id)), limits.max_n)?;
    let start = match id {
        IdentityId::T9 | IdentityId::T9Truncated => 1,
        _ => 0,
    };
    match id {
        IdentityId::T6 | IdentityId::T7 => {
            let r = check_limit("r", bounds.max_r.unwrap_or(3), limits.max_r)?;
            let points = (1..=r)
                .flat_map(|r| (start..=n).map(move |n| point(&[("n", n), ("r", r)])))
                .collect();
            Ok(Grid {
                params: point(&[("n", n), ("r", r)]),
                points,
            })
        }
        IdentityId::T8 => {
            let m = check_limit("m", bounds.max_m.unwrap_or(3), limits.max_m)?;
            let points = (1..=m)
                .flat_map(|m| (start..=n).map(move |n| point(&[("m", m), ("n", n)])))
                .collect();
            Ok(Grid {
                params: point(&[("m", m), ("n", n)]),
                points,
            })
        }
        _ => Ok(Grid {
            params: point(&[("n", n)]),
            points: (start..=n).map(|n| point(&[("n", n)])).collect(),
        }),
    }
}

/// Pairs of sides that must agree at one grid point.
fn sides(id: IdentityId, cache: &BetaCache, p: &Point) -> Result<Vec<(RatFunc, RatFunc)>> {
    let n = p.get("n").copied().unwrap_or(0);
    let zero = BigRational::zero();
    Ok(match id {
        IdentityId::T1 => vec![(falling_integral(n, 1)?, dbeta(cache, n))],
        IdentityId::T2 => {
            let d = dbeta(cache, n);
            vec![
                (d.limit(Var::L, &zero)?, cache.beta_poly_closed(n)),
                (stirling1_transform(n, |l| cache.beta_poly(l)), d.clone()),
                (dbeta_double_sum(n), d),
            ]
        }
        IdentityId::Cor3 => {
            let c = dbeta_double_sum(n);
            let numbers = stirling1_transform(n, |l| {
                &cache.beta_number(l) * &RatFunc::var_pow(Var::X, l as u32)
            });
            vec![
                (
                    c.clone(),
                    stirling1_transform(n, |l| cache.beta_via_integral(l)),
                ),
                (
                    c.subst(Var::X, &RatFunc::one())?,
                    numbers.subst(Var::X, &RatFunc::one())?,
                ),
            ]
        }
        IdentityId::T4 => {
            let source: Vec<RatFunc> = (0..=n).map(|m| dbeta(cache, m)).collect();
            let recovered = recover_beta(n, &source)?;
            let free = recovered.subst(Var::L, &RatFunc::one())?;
            vec![
                (recovered.clone(), cache.beta_poly_closed(n)),
                (recovered, free),
            ]
        }
        IdentityId::T5 => vec![(dbeta_from_numbers(cache, n), dbeta(cache, n))],
        IdentityId::T6 => {
            let r = p["r"];
            vec![(falling_integral(n, r)?, dbeta_order_r(cache, n, r)?)]
        }
        IdentityId::T7 => {
            let r = p["r"];
            vec![(
                recover_beta_order_r(cache, n, r)?,
                cache.beta_order_r(n, r)?,
            )]
        }
        IdentityId::T8 => vec![(dbeta(cache, n), multiplication_rhs(cache, n, p["m"])?)],
        IdentityId::T9 => vec![difference_sides(cache, n)?],
        IdentityId::T9Truncated => vec![difference_sides_printed(cache, n)?],
        IdentityId::Eq23 => vec![derivative_basis_check(p["j"])],
    })
}

fn run_grid(
    id: IdentityId,
    cache: &BetaCache,
    g: &Grid,
    limits: &Limits,
) -> Result<Option<Counterexample>> {
    let start = Instant::now();
    for p in &g.points {
        for (lhs, rhs) in sides(id, cache, p)? {
            if lhs != rhs {
                return Ok(Some(Counterexample {
                    params: p.clone(),
                    lhs: lhs.to_string(),
                    rhs: rhs.to_string(),
                }));
            }
        }
        if let Some(budget) = limits.time_budget {
            if start.elapsed() > budget {
                return Err(Error::InvalidArgument(format!(
                    "time budget of {} ms exceeded",
                    budget.as_millis()
                )));
            }
        }
    }
    Ok(None)
}

/// Checks one identity on its grid.
pub fn verify_identity(
    id: IdentityId,
    bounds: &Bounds,
    limits: &Limits,
    cache: &BetaCache,
) -> IdentityReport {
    let start = Instant::now();
    let mut report = IdentityReport {
        identity_id: id.as_str().to_string(),
        params: BTreeMap::new(),
        status: Status::Error,
        counterexample: None,
        elapsed_ms: 0,
        error: None,
    };
    let outcome = grid(id, bounds, limits).and_then(|g| {
        report.params = g.params.clone();
        match with_budget(limits.max_terms, || run_grid(id, cache, &g, limits)) {
            Ok(r) => r,
            Err(b) => Err(Error::BudgetExceeded {
                terms: b.terms,
                budget: b.budget,
            }),
        }
    });
    match outcome {
        Ok(None) => report.status = Status::Pass,
        Ok(Some(c)) => {
            report.status = Status::Fail;
            report.counterexample = Some(c);
        }
        Err(e) => report.error = Some(e.to_string()),
    }
    report.elapsed_ms = start.elapsed().as_millis() as u64;
    report
}

/// Checks every identity, running up to `jobs` checks at once. Reports come
/// back in the fixed identity order.
pub fn verify_all(bounds: &Bounds, limits: &Limits, jobs: usize) -> Vec<IdentityReport> {
    verify_ids(&IdentityId::ALL, bounds, limits, jobs)
}

pub fn verify_ids(
    ids: &[IdentityId],
    bounds: &Bounds,
    limits: &Limits,
    jobs: usize,
) -> Vec<IdentityReport> {
    let cache = BetaCache::new();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .expect("thread pool");
    pool.install(|| {
        ids.par_iter()
            .map(|&id| verify_identity(id, bounds, limits, &cache))
            .collect()
    })
}
