//! Numeric flags. Rational strings stay exact; decimals become `f64`. One
//! invocation uses a single notation.

use std::fmt;

use pgm_tight::{Rational, Scalar};

/// Malformed invocation; exits with status 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Notation {
    Integer,
    Rational,
    Decimal,
}

pub fn notation(s: &str) -> anyhow::Result<Notation> {
    let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
    if !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit()) {
        return Ok(Notation::Integer);
    }
    if s.contains('/') {
        return match s.parse::<Rational>() {
            Ok(_) => Ok(Notation::Rational),
            Err(_) => Err(usage(format!("malformed rational `{s}`"))),
        };
    }
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(Notation::Decimal),
        _ => Err(usage(format!("malformed number `{s}`"))),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Arith {
    Exact,
    Float,
}

impl Arith {
    pub fn name(self) -> &'static str {
        match self {
            Arith::Exact => "rational",
            Arith::Float => "decimal",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Policy {
    /// Certificate paths.
    ExactOnly,
    /// Simulation paths.
    FloatOnly,
    /// Exact unless a decimal is present.
    Either,
}

/// Arithmetic for a set of numeric flags. Integers fit both notations.
pub fn arith_for(values: &[&str], policy: Policy) -> anyhow::Result<Arith> {
    let mut rational = None;
    let mut decimal = None;
    for v in values {
        match notation(v)? {
            Notation::Integer => {}
            Notation::Rational => rational = rational.or(Some(*v)),
            Notation::Decimal => decimal = decimal.or(Some(*v)),
        }
    }
    if let (Some(r), Some(d)) = (rational, decimal) {
        return Err(usage(format!(
            "mixed notation: `{r}` is rational but `{d}` is decimal; use one notation"
        )));
    }
    match policy {
        Policy::ExactOnly => match decimal {
            Some(d) => Err(usage(format!("`{d}` is decimal; this command needs exact values such as `1/2`"))),
            None => Ok(Arith::Exact),
        },
        Policy::FloatOnly => match rational {
            Some(r) => Err(usage(format!("`{r}` is rational; this command runs in floating point, write a decimal"))),
            None => Ok(Arith::Float),
        },
        Policy::Either => Ok(if decimal.is_some() { Arith::Float } else { Arith::Exact }),
    }
}

/// Scalars that can be read from a flag.
pub trait ArgScalar: Scalar {
    fn parse_arg(s: &str) -> anyhow::Result<Self>;
}

impl ArgScalar for f64 {
    fn parse_arg(s: &str) -> anyhow::Result<Self> {
        if notation(s)? == Notation::Rational {
            return Err(usage(format!("`{s}` is rational where a decimal is expected")));
        }
        Ok(s.parse::<f64>().expect("checked by notation"))
    }
}

impl ArgScalar for Rational {
    fn parse_arg(s: &str) -> anyhow::Result<Self> {
        if notation(s)? == Notation::Decimal {
            return Err(usage(format!("`{s}` is decimal where an exact value is expected")));
        }
        Ok(s.trim_start_matches('+').parse::<Rational>().expect("checked by notation"))
    }
}

pub fn required<'a>(value: &'a Option<String>, flag: &str) -> anyhow::Result<&'a str> {
    value.as_deref().ok_or_else(|| usage(format!("{flag} is required")))
}

/// Numeric strings among `values`, skipping absent flags and tokens.
pub fn numeric<'a>(values: &[Option<&'a str>]) -> Vec<&'a str> {
    values
        .iter()
        .flatten()
        .copied()
        .filter(|v| !v.chars().all(|c| c.is_ascii_alphabetic()))
        .collect()
}
