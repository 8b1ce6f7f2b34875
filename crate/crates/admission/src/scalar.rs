//! The scalar substrate: exact rationals generic over their integer component.
//!
//! Every quantity in this crate (bids, assigned rates, probabilities,
//! thresholds) is an exact `Ratio<I>`. Admission decisions hinge on exact
//! boundary comparisons and tie detection, so floating-point scalars are
//! deliberately unsupported. The integer component is pluggable: the
//! crate-root aliases fix it to `BigInt`, while fixed-width signed integers
//! (`i128`) work for workloads whose numerators provably stay in range.

use std::fmt;

use num::rational::Ratio;
use num::{FromPrimitive, Integer, One, Signed, ToPrimitive};

use crate::error::Error;
use crate::Result;

/// Integer types usable as the component of an exact `Ratio`.
pub trait RatioInt:
    Integer + Signed + FromPrimitive + ToPrimitive + Clone + fmt::Debug + fmt::Display + 'static
{
}

impl<T> RatioInt for T where
    T: Integer + Signed + FromPrimitive + ToPrimitive + Clone + fmt::Debug + fmt::Display + 'static
{
}

/// Converts a count to the scalar's integer type, panicking only if the
/// scalar is too narrow for the value (never the case for `BigInt`).
pub fn int<I: RatioInt>(n: u64) -> I {
    I::from_u64(n).expect("count exceeds the range of the scalar integer type")
}

/// `n` as an exact rational.
pub fn ratio_int<I: RatioInt>(n: u64) -> Ratio<I> {
    Ratio::from_integer(int(n))
}

/// `n/d` as an exact rational.
pub fn ratio<I: RatioInt>(n: u64, d: u64) -> Ratio<I> {
    Ratio::new(int(n), int(d))
}

/// Best-effort `f64` view of an exact rational, for display and error bars.
pub fn approx<I: RatioInt>(r: &Ratio<I>) -> f64 {
    let n = r.numer().to_f64().unwrap_or(f64::INFINITY);
    let d = r.denom().to_f64().unwrap_or(f64::INFINITY);
    n / d
}

/// True when `r` lies in `[0, 1]`.
pub fn in_unit_interval<I: RatioInt>(r: &Ratio<I>) -> bool {
    !r.is_negative() && *r <= Ratio::one()
}

fn parse_int<I: RatioInt>(s: &str) -> Result<I> {
    <I as num::Num>::from_str_radix(s, 10)
        .map_err(|_| Error::Parse(format!("invalid integer `{s}`")))
}

fn parse_digits<I: RatioInt>(s: &str) -> Result<I> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Parse(format!("invalid digits `{s}`")));
    }
    parse_int(s)
}

fn pow10<I: RatioInt>(k: usize) -> I {
    let ten: I = int(10);
    let mut acc = I::one();
    for _ in 0..k {
        acc = acc * ten.clone();
    }
    acc
}

/// Parses an exact rational from a decimal string (`"0.4"`, `"12"`) or a
/// fraction string (`"59/150"`). Decimal inputs are parsed exactly, e.g.
/// `"0.4"` becomes 2/5.
pub fn parse_rate<I: RatioInt>(s: &str) -> Result<Ratio<I>> {
    let t = s.trim();
    if t.is_empty() {
        return Err(Error::Parse("empty number".into()));
    }
    if let Some((n, d)) = t.split_once('/') {
        let numer: I = parse_int(n.trim())?;
        let denom: I = parse_int(d.trim())?;
        if denom.is_zero() {
            return Err(Error::Parse(format!("zero denominator in `{t}`")));
        }
        return Ok(Ratio::new(numer, denom));
    }
    let (negative, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(Error::Parse(format!("invalid number `{t}`")));
    }
    let int_digits: I = if int_part.is_empty() {
        I::zero()
    } else {
        parse_digits(int_part)?
    };
    let frac_digits: I = if frac_part.is_empty() {
        I::zero()
    } else {
        parse_digits(frac_part)?
    };
    let scale: I = pow10(frac_part.len());
    let numer = int_digits * scale.clone() + frac_digits;
    let numer = if negative { -numer } else { numer };
    Ok(Ratio::new(numer, scale))
}

/// Renders a rational as a decimal string when its reduced denominator has
/// only factors 2 and 5 (`2/5` prints as `0.4`), and as `num/den` otherwise
/// (`59/150` stays `59/150`). Round-trips exactly through [`parse_rate`].
pub fn decimal_string<I: RatioInt>(r: &Ratio<I>) -> String {
    let denom = r.denom();
    if denom.is_one() {
        return r.numer().to_string();
    }
    let two: I = int(2);
    let five: I = int(5);
    let mut rest = denom.clone();
    let mut twos = 0usize;
    let mut fives = 0usize;
    loop {
        let (q, rem) = rest.div_rem(&two);
        if rem.is_zero() {
            rest = q;
            twos += 1;
        } else {
            break;
        }
    }
    loop {
        let (q, rem) = rest.div_rem(&five);
        if rem.is_zero() {
            rest = q;
            fives += 1;
        } else {
            break;
        }
    }
    if !rest.is_one() {
        return fraction_string(r);
    }
    let places = twos.max(fives);
    let scaled = r.numer().clone() * pow10::<I>(places);
    let (digits, rem) = scaled.div_rem(denom);
    debug_assert!(rem.is_zero());
    let sign = if digits.is_negative() { "-" } else { "" };
    let magnitude = digits.abs();
    let (int_part, frac_part) = magnitude.div_rem(&pow10::<I>(places));
    format!("{sign}{int_part}.{:0>places$}", frac_part.to_string())
}

/// Renders a rational as `num/den`, or as a bare integer when the
/// denominator is 1 (`1/2` stays `1/2`, probability one prints as `1`).
pub fn fraction_string<I: RatioInt>(r: &Ratio<I>) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rate;

    fn r(s: &str) -> Rate {
        parse_rate(s).unwrap()
    }

    #[test]
    fn parses_decimal_strings_exactly() {
        assert_eq!(r("0.4"), ratio(2, 5));
        assert_eq!(r("0.5"), ratio(1, 2));
        assert_eq!(r("10"), ratio_int(10));
        assert_eq!(r(".25"), ratio(1, 4));
        assert_eq!(r("1."), ratio_int(1));
        assert_eq!(r("-0.4"), -ratio::<crate::Int>(2, 5));
    }

    #[test]
    fn parses_fraction_strings() {
        assert_eq!(r("59/150"), ratio(59, 150));
        assert_eq!(r("3/7"), ratio(3, 7));
        assert_eq!(r("4/2"), ratio_int(2));
    }

    #[test]
    fn rejects_malformed_numbers() {
        for bad in ["", ".", "1/0", "1e3", "0.4.1", "a/b", "1/ "] {
            assert!(parse_rate::<crate::Int>(bad).is_err(), "accepted {bad:?}");
        }
    }

    #[test]
    fn decimal_rendering_uses_terminating_expansions() {
        assert_eq!(decimal_string(&r("2/5")), "0.4");
        assert_eq!(decimal_string(&r("1/2")), "0.5");
        assert_eq!(decimal_string(&r("1/20")), "0.05");
        assert_eq!(decimal_string(&r("77/100")), "0.77");
        assert_eq!(decimal_string(&r("5")), "5");
        assert_eq!(decimal_string(&r("0")), "0");
        assert_eq!(decimal_string(&r("59/150")), "59/150");
        assert_eq!(decimal_string(&r("1/3")), "1/3");
        assert_eq!(decimal_string(&r("-3/4")), "-0.75");
    }

    #[test]
    fn fraction_rendering_keeps_reduced_terms() {
        assert_eq!(fraction_string(&r("1/2")), "1/2");
        assert_eq!(fraction_string(&r("1")), "1");
        assert_eq!(fraction_string(&r("2/4")), "1/2");
    }

    #[test]
    fn works_with_fixed_width_scalars() {
        let x: Ratio<i128> = parse_rate("0.4").unwrap();
        assert_eq!(x, Ratio::new(2, 5));
        assert_eq!(decimal_string(&x), "0.4");
    }
}
