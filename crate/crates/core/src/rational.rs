//! Exact rational helpers shared by the algebraic modules.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{parse_err, Result};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn q_is_integer(x: &Q) -> bool {
    x.denom().is_one()
}

/// Integer value of `x` if it is integral and fits an `i64`.
pub fn q_to_i64(x: &Q) -> Option<i64> {
    if q_is_integer(x) {
        x.numer().to_i64()
    } else {
        None
    }
}

pub fn q_to_f64(x: &Q) -> f64 {
    // Ratio of big integers; both are converted separately only when they fit.
    match (x.numer().to_f64(), x.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => x.to_f64().unwrap_or(f64::NAN),
    }
}

/// Canonical text form: `p` for integers, `p/q` otherwise.
pub fn q_to_string(x: &Q) -> String {
    if q_is_integer(x) {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `p` or `p/q` with integer `p`, `q` (no decimals, no exponents).
pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || parse_err(s, "expected an exact rational of the form p or p/q");
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let ok = |t: &str| {
        let t = t.strip_prefix('-').or_else(|| t.strip_prefix('+')).unwrap_or(t);
        !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit())
    };
    if !ok(n) || !ok(d) {
        return Err(bad());
    }
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(parse_err(s, "zero denominator"));
    }
    Ok(Q::new(n, d))
}

pub fn binomial(n: u32, k: u32) -> Q {
    if k > n {
        return Q::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    Q::from_integer(acc)
}

pub fn q_abs(x: &Q) -> Q {
    x.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        assert_eq!(parse_q("3/6").unwrap(), qf(1, 2));
        assert_eq!(q_to_string(&qf(-4, 2)), "-2");
        assert_eq!(q_to_string(&qf(3, -9)), "-1/3");
        assert!(parse_q("0.5").is_err());
        assert!(parse_q("1e3").is_err());
        assert!(parse_q("1/0").is_err());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), q(10));
        assert_eq!(binomial(3, 4), q(0));
    }
}
