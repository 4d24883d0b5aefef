use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use qbern_core::carlitz::BetaCache;
use qbern_core::degenerate::{dbeta, dbeta_order_r};
use qbern_core::exactcore::budget::{with_budget, DEFAULT_MAX_TERMS};
use qbern_core::exactcore::{parse_bigrational, BigRational};
use qbern_core::padic::{
    check_degenerate_integral, check_order_r, is_odd_prime, LevelReport, QConfig,
};
use qbern_core::verify::{self, Bounds, IdentityId, IdentityReport, Limits};
use qbern_core::{Error, RatFunc, Var};

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_RESOURCE: u8 = 3;

#[derive(Parser)]
#[command(
    name = "qbern",
    version,
    about = "Exact Carlitz and degenerate Carlitz q-Bernoulli polynomials"
)]
struct Cli {
    /// Output format for single values.
    #[arg(long, global = true, value_enum, default_value_t = Format::Plain)]
    format: Format,

    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Worker threads for verification; defaults to available parallelism.
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Plain,
    Json,
    Latex,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Family {
    CarlitzNumber,
    CarlitzPoly,
    OrderR,
    Degenerate,
    DegenerateOrderR,
}

impl Family {
    fn uses_order(self) -> bool {
        matches!(self, Family::OrderR | Family::DegenerateOrderR)
    }

    fn value(self, cache: &BetaCache, n: usize, r: Option<usize>) -> qbern_core::Result<RatFunc> {
        match self {
            Family::CarlitzNumber => Ok(cache.beta_number(n)),
            Family::CarlitzPoly => Ok(cache.beta_poly_closed(n)),
            Family::OrderR => cache.beta_order_r(n, r.unwrap_or(1)),
            Family::Degenerate => Ok(dbeta(cache, n)),
            Family::DegenerateOrderR => dbeta_order_r(cache, n, r.unwrap_or(1)),
        }
    }
}

#[derive(Args)]
struct Target {
    #[arg(long, value_enum)]
    family: Family,

    #[arg(long)]
    n: usize,

    /// Order, required by the order-r families.
    #[arg(long)]
    r: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Compute one value, optionally evaluated at a point.
    Compute {
        #[command(flatten)]
        target: Target,

        /// Assignments such as `q=1,L=0`; each is taken as a limit, so
        /// removable singularities are fine.
        #[arg(long)]
        at: Option<String>,
    },
    /// Limits of one value at q = 1 and/or λ = 0.
    Limit {
        #[command(flatten)]
        target: Target,

        /// Take q → 1.
        #[arg(long)]
        q1: bool,

        /// Take λ → 0.
        #[arg(long)]
        l0: bool,
    },
    /// Check identities and write a JSON report.
    Verify {
        /// Identity id, or `all`.
        #[arg(long, default_value = "all")]
        identity: String,

        #[arg(long)]
        max_n: Option<usize>,

        #[arg(long)]
        m: Option<usize>,

        #[arg(long)]
        r: Option<usize>,

        #[arg(long)]
        max_j: Option<usize>,
    },
    /// Write a JSON table of values for n = 0..=max-n.
    Table {
        #[arg(long, value_enum)]
        family: Family,

        #[arg(long)]
        max_n: usize,

        #[arg(long)]
        r: Option<usize>,
    },
    /// Compare finite p-adic Riemann sums with the exact values.
    Padic {
        #[arg(long, default_value_t = 3)]
        p: u64,

        #[arg(long, default_value_t = 15)]
        precision: i64,

        /// Comma-separated levels N.
        #[arg(long, default_value = "2,4,6", value_delimiter = ',')]
        levels: Vec<u32>,

        #[arg(long)]
        n: usize,

        #[arg(long, default_value_t = 1)]
        r: usize,

        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        lambda: i64,

        #[arg(long, default_value_t = 0)]
        x: u64,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Failure {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match e {
            Error::Pole { .. }
            | Error::BudgetExceeded { .. }
            | Error::Precision(_)
            | Error::PadicZeroDivisor => EXIT_RESOURCE,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type Outcome = Result<u8, Failure>;

fn term_budget() -> Result<usize, Failure> {
    match std::env::var("QBERN_BUDGET_TERMS") {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| Failure::usage(format!("QBERN_BUDGET_TERMS={s:?} is not a count"))),
        Err(_) => Ok(DEFAULT_MAX_TERMS),
    }
}

fn budgeted<T>(f: impl FnOnce() -> Result<T, Failure>) -> Result<T, Failure> {
    let budget = term_budget()?;
    with_budget(budget, f).unwrap_or_else(|b| {
        Err(Error::BudgetExceeded {
            terms: b.terms,
            budget: b.budget,
        }
        .into())
    })
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display()))),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::usage(format!("cannot write output: {e}"))),
    }
}

fn render(value: &RatFunc, format: Format) -> String {
    match format {
        Format::Plain => format!("{value}\n"),
        Format::Json => format!("{}\n", value.to_json()),
        Format::Latex => format!("{}\n", value.to_latex()),
    }
}

fn check_order(target: &Target) -> Result<Option<usize>, Failure> {
    match (target.family.uses_order(), target.r) {
        (true, None) => Err(Failure::usage("this family needs --r")),
        (true, Some(0)) => Err(Failure::usage("--r must be at least 1")),
        (false, Some(_)) => Err(Failure::usage("--r only applies to the order-r families")),
        (_, r) => Ok(r),
    }
}

fn parse_point(spec: &str) -> Result<Vec<(Var, BigRational)>, Failure> {
    spec.split(',')
        .map(|part| {
            let (name, value) = part
                .split_once('=')
                .ok_or_else(|| Failure::usage(format!("expected VAR=VALUE, got {part:?}")))?;
            let var = Var::from_name(name.trim())
                .ok_or_else(|| Failure::usage(format!("unknown variable {name:?}")))?;
            Ok((var, parse_bigrational(value.trim())?))
        })
        .collect()
}

fn compute(
    target: &Target,
    point: &[(Var, BigRational)],
    format: Format,
    out: &Option<PathBuf>,
) -> Outcome {
    let r = check_order(target)?;
    let value = budgeted(|| {
        let mut v = target.family.value(&BetaCache::new(), target.n, r)?;
        for (var, at) in point {
            v = v.limit(*var, at)?;
        }
        Ok(v)
    })?;
    emit(out, &render(&value, format))?;
    Ok(0)
}

fn verify_cmd(id: &str, bounds: Bounds, jobs: usize, out: &Option<PathBuf>) -> Outcome {
    let ids: Vec<IdentityId> = if id.eq_ignore_ascii_case("all") {
        IdentityId::ALL.to_vec()
    } else {
        vec![IdentityId::from_str(id)?]
    };
    let limits = Limits {
        max_terms: term_budget()?,
        ..Limits::default()
    };
    let reports = verify::verify_ids(&ids, &bounds, &limits, jobs);
    emit(out, &to_json(&reports))?;
    for r in &reports {
        if let Some(e) = &r.error {
            eprintln!("qbern: {}: {e}", r.identity_id);
        }
    }
    if reports.iter().any(IdentityReport::is_resource_error) {
        Ok(EXIT_RESOURCE)
    } else if verify::expectations_met(&reports) {
        Ok(0)
    } else {
        Ok(EXIT_FAIL)
    }
}

#[derive(Serialize)]
struct TableEntry {
    family: Family,
    n: usize,
    r: Option<usize>,
    value: String,
}

fn table(family: Family, max_n: usize, r: Option<usize>, out: &Option<PathBuf>) -> Outcome {
    let target = Target {
        family,
        n: max_n,
        r,
    };
    let r = check_order(&target)?;
    let cache = BetaCache::new();
    let entries = budgeted(|| {
        (0..=max_n)
            .map(|n| {
                Ok(TableEntry {
                    family,
                    n,
                    r,
                    value: family.value(&cache, n, r)?.to_string(),
                })
            })
            .collect::<Result<Vec<_>, Failure>>()
    })?;
    emit(out, &to_json(&entries))?;
    Ok(0)
}

#[derive(Serialize)]
struct PadicReport {
    n: usize,
    r: usize,
    p: u64,
    #[serde(rename = "K")]
    k: i64,
    lambda: i64,
    x: u64,
    levels: Vec<LevelReport>,
}

#[allow(clippy::too_many_arguments)]
fn padic(
    p: u64,
    k: i64,
    levels: &[u32],
    n: usize,
    r: usize,
    lambda: i64,
    x: u64,
    out: &Option<PathBuf>,
) -> Outcome {
    if !is_odd_prime(p) {
        return Err(Failure::usage(format!("--p {p} is not an odd prime")));
    }
    if r == 0 {
        return Err(Failure::usage("--r must be at least 1"));
    }
    if r > 1 && lambda != 0 {
        return Err(Failure::usage("order r > 1 is checked at lambda = 0 only"));
    }
    let cfg = QConfig::new(p, k)?.with_lambda(lambda).with_x(x);
    let levels = if r == 1 {
        check_degenerate_integral(n, &cfg, levels)?
    } else {
        levels
            .iter()
            .map(|&level| check_order_r(n, r, &cfg, level))
            .collect::<Result<_, _>>()?
    };
    let report = PadicReport {
        n,
        r,
        p,
        k,
        lambda,
        x,
        levels,
    };
    emit(out, &to_json(&report))?;
    Ok(0)
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn run(cli: Cli) -> Outcome {
    let jobs = cli
        .jobs
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    match &cli.command {
        Command::Compute { target, at } => {
            let point = match at {
                Some(s) => parse_point(s)?,
                None => Vec::new(),
            };
            compute(target, &point, cli.format, &cli.out)
        }
        Command::Limit { target, q1, l0 } => {
            if !q1 && !l0 {
                return Err(Failure::usage("limit needs --q1 and/or --l0"));
            }
            let mut point = Vec::new();
            if *q1 {
                point.push((Var::Q, BigRational::from_integer(1.into())));
            }
            if *l0 {
                point.push((Var::L, BigRational::from_integer(0.into())));
            }
            compute(target, &point, cli.format, &cli.out)
        }
        Command::Verify {
            identity,
            max_n,
            m,
            r,
            max_j,
        } => {
            let bounds = Bounds {
                max_n: *max_n,
                max_m: *m,
                max_r: *r,
                max_j: *max_j,
            };
            verify_cmd(identity, bounds, jobs, &cli.out)
        }
        Command::Table { family, max_n, r } => table(*family, *max_n, *r, &cli.out),
        Command::Padic {
            p,
            precision,
            levels,
            n,
            r,
            lambda,
            x,
        } => padic(*p, *precision, levels, *n, *r, *lambda, *x, &cli.out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("qbern: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
