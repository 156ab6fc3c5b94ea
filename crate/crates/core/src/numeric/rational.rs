//! Helpers around exact rationals: construction, parsing, rendering and
//! directed rounding to dyadic grids.

use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact arbitrary-precision fraction, always in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn pow2(exp: i64) -> Rational {
    if exp >= 0 {
        Rational::from_integer(BigInt::one() << exp as usize)
    } else {
        Rational::new(BigInt::one(), BigInt::one() << (-exp) as usize)
    }
}

/// Parses a plain decimal literal such as `-3.14159` or `2e-5` exactly.
pub fn parse_decimal(s: &str) -> Result<Rational> {
    let s = s.trim();
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => {
            let exp: i64 = s[i + 1..]
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("bad exponent in {s:?}")))?;
            (&s[..i], exp)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = match digits.split_once('.') {
        Some((a, b)) => (a, b),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty()
        || !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit())
    {
        return Err(Error::InvalidArgument(format!("not a decimal number: {s:?}")));
    }
    let all_digits = format!("{int_part}{frac_part}");
    let numer = BigInt::from_str(if all_digits.is_empty() { "0" } else { &all_digits })
        .map_err(|_| Error::InvalidArgument(format!("not a decimal number: {s:?}")))?;
    let scale = exponent - frac_part.len() as i64;
    let ten = Rational::from_integer(BigInt::from(10));
    let factor = if scale >= 0 {
        num_traits::pow(ten, scale as usize)
    } else {
        num_traits::pow(ten, (-scale) as usize).recip()
    };
    let value = Rational::from_integer(numer) * factor;
    Ok(if negative { -value } else { value })
}

/// Parses `"num/den"`, a bare integer, or a decimal literal.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim())
            .map_err(|_| Error::InvalidArgument(format!("bad numerator in {s:?}")))?;
        let d = BigInt::from_str(d.trim())
            .map_err(|_| Error::InvalidArgument(format!("bad denominator in {s:?}")))?;
        if d.is_zero() {
            return Err(Error::InvalidArgument(format!("zero denominator in {s:?}")));
        }
        Ok(Rational::new(n, d))
    } else {
        parse_decimal(s)
    }
}

/// Canonical `"num/den"` rendering (integers keep the `/1`).
pub fn to_fraction_string(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Decimal rendering truncated toward zero after `digits` fractional digits.
pub fn to_decimal_string(r: &Rational, digits: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), digits);
    let scaled = (r.numer().abs() * &scale) / r.denom();
    let (int_part, frac_part) = scaled.div_rem(&scale);
    let sign = if r.is_negative() && !scaled.is_zero() { "-" } else { "" };
    if digits == 0 {
        return format!("{sign}{int_part}");
    }
    format!("{sign}{int_part}.{:0>width$}", frac_part.to_string(), width = digits)
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Exact value of a finite `f64`.
pub fn from_f64(x: f64) -> Rational {
    Rational::from_float(x).unwrap_or_else(Rational::zero)
}

/// Approximate `log2 |r|`, accurate to within one.
fn magnitude(r: &Rational) -> i64 {
    r.numer().bits() as i64 - r.denom().bits() as i64
}

fn round_to_grid(r: &Rational, bits: u64, upward: bool) -> Rational {
    if r.is_zero() || r.denom().bits() <= bits {
        return r.clone();
    }
    // grid spacing 2^-shift keeps about `bits` significant bits
    let shift = bits as i64 - magnitude(r);
    let scaled = r * pow2(shift);
    let rounded = if upward { scaled.ceil() } else { scaled.floor() };
    rounded * pow2(-shift)
}

/// Largest grid value `<= r` with about `bits` significant bits; exact when
/// the denominator already fits in `bits` bits.
pub fn round_down(r: &Rational, bits: u64) -> Rational {
    round_to_grid(r, bits, false)
}

/// Smallest grid value `>= r`; see [`round_down`].
pub fn round_up(r: &Rational, bits: u64) -> Rational {
    round_to_grid(r, bits, true)
}

/// Interval of all reals whose decimal expansion starts with `s`, e.g.
/// `"0.22525"` gives `[0.22525, 0.22526]`. Used to compare enclosures against
/// truncated published values such as `1.55456...`.
pub fn decimal_prefix(s: &str) -> Result<(Rational, Rational)> {
    let value = parse_decimal(s)?;
    let digits = s
        .trim()
        .split_once('.')
        .map(|(_, frac)| frac.len())
        .unwrap_or(0);
    let ulp = num_traits::pow(Rational::from_integer(BigInt::from(10)), digits).recip();
    Ok(if value.is_negative() || s.trim().starts_with('-') {
        (&value - ulp, value)
    } else {
        (value.clone(), value + ulp)
    })
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimal_parsing() {
        assert_eq!(parse_decimal("3.25").unwrap(), rat(13, 4));
        assert_eq!(parse_decimal("-0.5").unwrap(), rat(-1, 2));
        assert_eq!(parse_decimal("5e-5").unwrap(), rat(1, 20000));
        assert_eq!(parse_decimal("12").unwrap(), int(12));
        assert!(parse_decimal("1.2.3").is_err());
        assert!(parse_decimal("").is_err());
    }

    #[test]
    fn fraction_parsing() {
        assert_eq!(parse_rational("6/8").unwrap(), rat(3, 4));
        assert_eq!(parse_rational("-1/3").unwrap(), rat(-1, 3));
        assert!(parse_rational("1/0").is_err());
        assert_eq!(to_fraction_string(&int(2)), "2/1");
    }

    #[test]
    fn decimal_rendering_truncates() {
        assert_eq!(to_decimal_string(&rat(1, 3), 4), "0.3333");
        assert_eq!(to_decimal_string(&rat(-7, 4), 3), "-1.750");
        assert_eq!(to_decimal_string(&rat(-1, 1000), 2), "0.00");
    }

    #[test]
    fn directed_rounding_brackets() {
        let third = rat(1, 3) + pow2(-90);
        let lo = round_down(&third, 20);
        let hi = round_up(&third, 20);
        assert!(lo < third && third < hi);
        assert!(&hi - &lo <= pow2(-20));
        assert!(lo.denom().bits() <= 22);
        let neg = -third;
        assert!(round_down(&neg, 20) < neg && neg < round_up(&neg, 20));
        // small denominators are left alone
        assert_eq!(round_down(&rat(3, 8), 20), rat(3, 8));
    }

    #[test]
    fn prefix_intervals() {
        let (lo, hi) = decimal_prefix("0.22525").unwrap();
        assert_eq!(lo, rat(22525, 100000));
        assert_eq!(hi, rat(22526, 100000));
        let (lo, hi) = decimal_prefix("-0.5").unwrap();
        assert_eq!((lo, hi), (rat(-6, 10), rat(-1, 2)));
    }

    #[test]
    fn factorials() {
        assert_eq!(factorial(0), BigInt::from(1));
        assert_eq!(factorial(6), BigInt::from(720));
    }
}
