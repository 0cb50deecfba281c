use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Parses a rational from `p/q`, integer, decimal, or scientific notation.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let t = s.trim();
    let err = || Error::ParseRational(s.to_string());
    if t.is_empty() {
        return Err(err());
    }
    if let Some((p, q)) = t.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| err())?;
        let q: BigInt = q.trim().parse().map_err(|_| err())?;
        if q.is_zero() {
            return Err(err());
        }
        return Ok(BigRational::new(p, q));
    }
    let lower = t.to_ascii_lowercase();
    let (mant, exp) = match lower.split_once('e') {
        Some((m, e)) => (m, e.parse::<i64>().map_err(|_| err())?),
        None => (lower.as_str(), 0i64),
    };
    let (negative, digits) = match mant.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (int_part, frac_part) = match digits.split_once('.') {
        Some((i, f)) => (i, f),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    let all_digits = |p: &str| p.chars().all(|c| c.is_ascii_digit());
    if !all_digits(int_part) || !all_digits(frac_part) {
        return Err(err());
    }
    let mut numer: BigInt = format!("{int_part}{frac_part}").parse().map_err(|_| err())?;
    if negative {
        numer = -numer;
    }
    let scale = frac_part.len() as i64 - exp;
    Ok(if scale >= 0 {
        BigRational::new(numer, pow10(scale as u64))
    } else {
        BigRational::from_integer(numer * pow10(-scale as u64))
    })
}

/// Formats as `p` for integers, `p/q` otherwise.
pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rational_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn rational_sign(r: &BigRational) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_negative() {
        -1
    } else {
        1
    }
}

fn pow10(k: u64) -> BigInt {
    num::pow(BigInt::from(10), k as usize)
}

fn sqrt_parts(x: &BigRational, digits: u32) -> Result<(BigInt, BigInt, bool)> {
    if x.is_negative() {
        return Err(Error::ParamDomain {
            name: "x",
            value: format_rational(x),
            domain: "x >= 0",
        });
    }
    let pow = pow10(digits as u64);
    let m = x.numer() * x.denom() * &pow * &pow;
    let root = m.sqrt();
    let exact = &root * &root == m;
    Ok((root, x.denom() * pow, exact))
}

/// Largest multiple of 10^-digits/denom(x) not exceeding sqrt(x); the gap to
/// the true root is below 10^-digits.
pub fn sqrt_lower(x: &BigRational, digits: u32) -> Result<BigRational> {
    let (root, scale, _) = sqrt_parts(x, digits)?;
    Ok(BigRational::new(root, scale))
}

/// Rational upper bound on sqrt(x), exact when x is a perfect square of the
/// chosen grid, otherwise within 10^-digits of the true root.
pub fn sqrt_upper(x: &BigRational, digits: u32) -> Result<BigRational> {
    let (root, scale, exact) = sqrt_parts(x, digits)?;
    let root = if exact { root } else { root + 1 };
    Ok(BigRational::new(root, scale))
}

/// Exact sign of u + v*sqrt(d) for rationals with d >= 0.
pub fn sign_with_sqrt(u: &BigRational, v: &BigRational, d: &BigRational) -> Result<i32> {
    if d.is_negative() {
        return Err(Error::ParamDomain {
            name: "d",
            value: format_rational(d),
            domain: "d >= 0",
        });
    }
    if d.is_zero() || v.is_zero() {
        return Ok(rational_sign(u));
    }
    if u.is_zero() {
        return Ok(rational_sign(v));
    }
    let su = rational_sign(u);
    if su == rational_sign(v) {
        return Ok(su);
    }
    let t = u * u - v * v * d;
    Ok(su * rational_sign(&t))
}
