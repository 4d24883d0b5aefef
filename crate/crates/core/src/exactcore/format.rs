//! Text, JSON and LaTeX forms of polynomials and rational functions.
//!
//! Text: terms in canonical order written `c * q^a * L^b * Q^c`, with unit
//! coefficients and exponents omitted, joined by ` + ` (or ` - ` for a
//! negative coefficient); a fraction is `num / den`, each side parenthesized
//! when it has more than one term.
//!
//! JSON: `{"num": [[a, b, c, "p/q"], ...], "den": [...]}` in canonical order.

use std::fmt::{self, Write as _};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use super::poly::{Monomial, MultiPoly, Var};
use super::ratfunc::RatFunc;
use super::univariate::UniPoly;
use crate::error::{Error, Result};

fn write_monomial(out: &mut String, m: &Monomial, sep: &str, latex: bool) {
    let mut first = true;
    for v in Var::ALL {
        let e = m.exp(v);
        if e == 0 {
            continue;
        }
        if !first {
            out.push_str(sep);
        }
        first = false;
        out.push_str(v.name());
        if e > 1 {
            if latex {
                let _ = write!(out, "^{{{e}}}");
            } else {
                let _ = write!(out, "^{e}");
            }
        }
    }
}

fn write_coeff(out: &mut String, c: &BigRational, latex: bool) {
    if latex && !c.is_integer() {
        let _ = write!(out, "\\frac{{{}}}{{{}}}", c.numer(), c.denom());
    } else if c.is_integer() {
        let _ = write!(out, "{}", c.numer());
    } else {
        let _ = write!(out, "{}/{}", c.numer(), c.denom());
    }
}

fn render_poly(p: &MultiPoly, latex: bool) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let (mul_sep, plus, minus) = if latex {
        (" ", " + ", " - ")
    } else {
        (" * ", " + ", " - ")
    };
    let mut out = String::new();
    for (i, (m, c)) in p.terms().enumerate() {
        let neg = c.is_negative();
        let abs = c.abs();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { minus } else { plus });
        }
        if *m == Monomial::ONE {
            write_coeff(&mut out, &abs, latex);
        } else {
            if !abs.is_one() {
                write_coeff(&mut out, &abs, latex);
                out.push_str(mul_sep);
            }
            write_monomial(&mut out, m, mul_sep, latex);
        }
    }
    out
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_poly(self, false))
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |p: &MultiPoly| {
            let s = render_poly(p, false);
            if p.len() > 1 {
                format!("({s})")
            } else {
                s
            }
        };
        if self.den().is_one() {
            f.write_str(&render_poly(self.num(), false))
        } else if let Some(c) = self.as_constant() {
            write!(f, "{c}")
        } else {
            write!(f, "{} / {}", wrap(self.num()), wrap(self.den()))
        }
    }
}

fn poly_to_json(p: &MultiPoly) -> Value {
    Value::Array(
        p.terms()
            .map(|(m, c)| {
                json!([
                    m.exp(Var::Q),
                    m.exp(Var::L),
                    m.exp(Var::X),
                    format!("{}/{}", c.numer(), c.denom())
                ])
            })
            .collect(),
    )
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad rational {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Parses a rational written `p`, `-p` or `p/q`.
pub fn parse_bigrational(s: &str) -> Result<BigRational> {
    parse_rational(s)
}

fn poly_from_json(v: &Value) -> Result<MultiPoly> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::Parse("expected an array of terms".into()))?;
    let mut terms = Vec::with_capacity(arr.len());
    for t in arr {
        let t = t
            .as_array()
            .filter(|t| t.len() == 4)
            .ok_or_else(|| Error::Parse("expected [a, b, c, \"p/q\"]".into()))?;
        let mut e = [0u32; 3];
        for (i, slot) in e.iter_mut().enumerate() {
            *slot = t[i]
                .as_u64()
                .and_then(|x| u32::try_from(x).ok())
                .ok_or_else(|| Error::Parse("exponent must be a nonnegative integer".into()))?;
        }
        let c = t[3]
            .as_str()
            .ok_or_else(|| Error::Parse("coefficient must be a string".into()))?;
        terms.push((Monomial(e), parse_rational(c)?));
    }
    Ok(MultiPoly::from_terms(terms))
}

impl RatFunc {
    pub fn to_json(&self) -> Value {
        json!({ "num": poly_to_json(self.num()), "den": poly_to_json(self.den()) })
    }

    pub fn from_json(v: &Value) -> Result<RatFunc> {
        let num = poly_from_json(
            v.get("num")
                .ok_or_else(|| Error::Parse("missing num".into()))?,
        )?;
        let den = poly_from_json(
            v.get("den")
                .ok_or_else(|| Error::Parse("missing den".into()))?,
        )?;
        RatFunc::new(num, den)
    }

    /// Parses the text form produced by `Display`.
    pub fn parse(s: &str) -> Result<RatFunc> {
        let s = s.trim();
        match split_top_level_slash(s) {
            Some((n, d)) => RatFunc::new(MultiPoly::parse(n)?, MultiPoly::parse(d)?),
            None => Ok(RatFunc::from_poly(MultiPoly::parse(s)?)),
        }
    }

    /// LaTeX rendering. Denominators in `q` alone that factor as a constant
    /// times a product of `[k]_q` and powers of `(1 - q)` are shown in that
    /// form; anything else is printed as a raw polynomial.
    pub fn to_latex(&self) -> String {
        let num = render_poly(self.num(), true);
        if self.den().is_one() {
            return num;
        }
        let den = q_factored_latex(self.den()).unwrap_or_else(|| render_poly(self.den(), true));
        format!("\\frac{{{num}}}{{{den}}}")
    }
}

/// Finds ` / ` outside parentheses.
fn split_top_level_slash(s: &str) -> Option<(&str, &str)> {
    let mut depth = 0i32;
    let bytes = s.as_bytes();
    for i in 0..bytes.len() {
        match bytes[i] {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b'/' if depth == 0
                && i > 0
                && bytes[i - 1] == b' '
                && bytes.get(i + 1) == Some(&b' ') =>
            {
                return Some((&s[..i], &s[i + 1..]));
            }
            _ => {}
        }
    }
    None
}

impl MultiPoly {
    /// Parses a sum of terms such as `-3/2 * q^2 * L + Q - 1`, optionally
    /// wrapped in parentheses.
    pub fn parse(s: &str) -> Result<MultiPoly> {
        let mut s = s.trim();
        if s.starts_with('(') && s.ends_with(')') {
            s = s[1..s.len() - 1].trim();
        }
        if s.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let mut terms = Vec::new();
        let mut sign = 1i32;
        let mut rest = s;
        if let Some(r) = rest.strip_prefix('-') {
            sign = -1;
            rest = r.trim_start();
        }
        loop {
            let (term, next) = match (rest.find(" + "), rest.find(" - ")) {
                (Some(a), Some(b)) => {
                    let i = a.min(b);
                    (&rest[..i], Some((i, if i == a { 1 } else { -1 })))
                }
                (Some(a), None) => (&rest[..a], Some((a, 1))),
                (None, Some(b)) => (&rest[..b], Some((b, -1))),
                (None, None) => (rest, None),
            };
            let (m, mut c) = parse_term(term)?;
            if sign < 0 {
                c = -c;
            }
            terms.push((m, c));
            match next {
                Some((i, sg)) => {
                    sign = sg;
                    rest = &rest[i + 3..];
                }
                None => break,
            }
        }
        Ok(MultiPoly::from_terms(terms))
    }
}

fn parse_term(t: &str) -> Result<(Monomial, BigRational)> {
    let mut coeff = BigRational::one();
    let mut m = Monomial::ONE;
    for factor in t.split('*') {
        let f = factor.trim();
        if f.is_empty() {
            return Err(Error::Parse(format!("empty factor in {t:?}")));
        }
        let (base, exp) = match f.split_once('^') {
            Some((b, e)) => (
                b.trim(),
                e.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::Parse(format!("bad exponent in {f:?}")))?,
            ),
            None => (f, 1),
        };
        match Var::from_name(base) {
            Some(v) => m = m.mul(&Monomial::ONE.with_exp(v, exp)),
            None => {
                if exp != 1 {
                    return Err(Error::Parse(format!("exponent on a number in {f:?}")));
                }
                coeff *= parse_rational(base)?;
            }
        }
    }
    Ok((m, coeff))
}

/// Tries to write a univariate-in-`q` polynomial as `c · Π [k]_q^{e_k} · (1-q)^e`.
fn q_factored_latex(p: &MultiPoly) -> Option<String> {
    if !p.only_in(Var::Q) || !p.is_integral() || p.as_constant().is_some() {
        return None;
    }
    let mut coeffs = vec![BigInt::zero(); p.degree_in(Var::Q) as usize + 1];
    for (m, c) in p.terms() {
        coeffs[m.exp(Var::Q) as usize] = c.numer().clone();
    }
    let mut rest = UniPoly::new(coeffs);
    let one_minus_q = UniPoly::new(vec![BigInt::one(), -BigInt::one()]);
    let mut minus_count = 0u32;
    while let Some(r) = rest.exact_div(&one_minus_q) {
        rest = r;
        minus_count += 1;
    }
    let mut factors: Vec<(usize, u32)> = Vec::new();
    let top = rest.degree()?;
    for k in (2..=top + 1).rev() {
        let bracket = UniPoly::new(vec![BigInt::one(); k]);
        let mut e = 0;
        while let Some(r) = rest.exact_div(&bracket) {
            rest = r;
            e += 1;
        }
        if e > 0 {
            factors.push((k, e));
        }
    }
    if !rest.is_constant() {
        return None;
    }
    let c = rest.coeffs().first().cloned().unwrap_or_else(BigInt::one);
    let mut out = String::new();
    if c == -BigInt::one() {
        out.push('-');
    } else if !c.is_one() {
        let _ = write!(out, "{c} ");
    }
    let mut parts: Vec<String> = factors
        .iter()
        .rev()
        .map(|&(k, e)| {
            if e == 1 {
                format!("[{k}]_q")
            } else {
                format!("[{k}]_q^{{{e}}}")
            }
        })
        .collect();
    match minus_count {
        0 => {}
        1 => parts.push("(1 - q)".into()),
        e => parts.push(format!("(1 - q)^{{{e}}}")),
    }
    out.push_str(&parts.join(" "));
    Some(out.trim().to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_form_of_simple_fraction() {
        let f = RatFunc::new(
            MultiPoly::from_int(-1),
            MultiPoly::one() + MultiPoly::var(Var::Q),
        )
        .unwrap();
        assert_eq!(f.to_string(), "-1 / (q + 1)");
        assert_eq!(RatFunc::from_int(1).to_string(), "1");
    }

    #[test]
    fn text_form_of_terms() {
        let p = MultiPoly::parse("-3/2 * q^2 * L + Q - 1").unwrap();
        assert_eq!(p.to_string(), "-3/2 * q^2 * L + Q - 1");
    }

    #[test]
    fn parse_round_trip() {
        let f = RatFunc::new(
            MultiPoly::parse("2 * q * Q - L^3 + 1/3").unwrap(),
            MultiPoly::parse("q^2 + q + 1").unwrap(),
        )
        .unwrap();
        let g = RatFunc::parse(&f.to_string()).unwrap();
        assert!(g.same_form(&f));
    }

    #[test]
    fn json_round_trip() {
        let f = RatFunc::new(
            MultiPoly::parse("q - 1").unwrap(),
            MultiPoly::parse("q^3 + 2").unwrap(),
        )
        .unwrap();
        let v = f.to_json();
        assert_eq!(v["den"][0], json!([3, 0, 0, "1/1"]));
        assert!(RatFunc::from_json(&v).unwrap().same_form(&f));
    }

    #[test]
    fn latex_recognizes_q_integers() {
        // (1+q)(1+q+q^2) = [2]_q [3]_q
        let den = MultiPoly::parse("q^3 + 2 * q^2 + 2 * q + 1").unwrap();
        let f = RatFunc::new(MultiPoly::var(Var::Q), den).unwrap();
        assert_eq!(f.to_latex(), "\\frac{q}{[2]_q [3]_q}");
    }

    #[test]
    fn latex_falls_back_to_raw() {
        let f = RatFunc::new(MultiPoly::one(), MultiPoly::parse("q^2 + 1").unwrap()).unwrap();
        assert_eq!(f.to_latex(), "\\frac{1}{q^{2} + 1}");
    }

    #[test]
    fn parse_errors() {
        assert!(MultiPoly::parse("q^x").is_err());
        assert!(MultiPoly::parse("").is_err());
        assert!(RatFunc::parse("1 / 0").is_err());
    }
}
