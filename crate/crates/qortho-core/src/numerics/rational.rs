//! Exact rational arithmetic: thin helpers over `num-rational`.

use alloc::string::{String, ToString};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{QError, QResult};

/// Exact rational number, always in lowest terms.
pub type Rational = num_rational::BigRational;

/// Parse "p/r", an integer, or a plain decimal ("0.25", "-1.5") exactly.
pub fn parse_rational(s: &str) -> QResult<Rational> {
    let s = s.trim();
    if s.is_empty() {
        return Err(QError::InvalidLiteral(String::from(s)));
    }
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num
            .trim()
            .parse()
            .map_err(|_| QError::InvalidLiteral(s.to_string()))?;
        let d: BigInt = den
            .trim()
            .parse()
            .map_err(|_| QError::InvalidLiteral(s.to_string()))?;
        if d.is_zero() {
            return Err(QError::DivisionByZero("rational literal"));
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        let neg = int_part.trim_start().starts_with('-');
        let i: BigInt = if int_part.is_empty() || int_part == "-" {
            BigInt::zero()
        } else {
            int_part
                .parse()
                .map_err(|_| QError::InvalidLiteral(s.to_string()))?
        };
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(QError::InvalidLiteral(s.to_string()));
        }
        let f: BigInt = frac_part
            .parse()
            .map_err(|_| QError::InvalidLiteral(s.to_string()))?;
        let scale = BigInt::from(10u32).pow(frac_part.len() as u32);
        let frac = Rational::new(f, scale);
        let whole = Rational::from_integer(i);
        return Ok(if neg { whole - frac } else { whole + frac });
    }
    let n: BigInt = s
        .parse()
        .map_err(|_| QError::InvalidLiteral(s.to_string()))?;
    Ok(Rational::from_integer(n))
}

/// Integer power with negative exponents allowed (base must be nonzero).
pub fn rat_powi(base: &Rational, n: i64) -> Rational {
    if n == 0 {
        return Rational::one();
    }
    let mut e = n.unsigned_abs();
    let mut b = base.clone();
    let mut acc = Rational::one();
    while e > 0 {
        if e & 1 == 1 {
            acc *= &b;
        }
        b = &b * &b;
        e >>= 1;
    }
    if n < 0 {
        acc.recip()
    } else {
        acc
    }
}

pub fn rat_from_i64(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// True when the rational is an integer.
pub fn rat_is_integer(r: &Rational) -> bool {
    r.denom().is_one()
}

/// Integer value when the rational is an integer.
pub fn rat_to_i64(r: &Rational) -> Option<i64> {
    if !rat_is_integer(r) {
        return None;
    }
    let n = r.numer();
    let (sign, digits) = n.to_u64_digits();
    match digits.len() {
        0 => Some(0),
        1 if digits[0] <= i64::MAX as u64 => {
            let v = digits[0] as i64;
            Some(if sign == num_bigint::Sign::Minus { -v } else { v })
        }
        _ => None,
    }
}

/// Exact rational square root when one exists.
pub fn rat_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

/// Render as "p/q" (or "p" for integers).
pub fn rat_to_string(r: &Rational) -> String {
    if rat_is_integer(r) {
        r.numer().to_string()
    } else {
        let mut s = r.numer().to_string();
        s.push('/');
        s.push_str(&r.denom().to_string());
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("1/2").unwrap(), Rational::new(1.into(), 2.into()));
        assert_eq!(parse_rational("-3").unwrap(), rat_from_i64(-3));
        assert_eq!(parse_rational("0.25").unwrap(), Rational::new(1.into(), 4.into()));
        assert_eq!(parse_rational("-1.5").unwrap(), Rational::new((-3).into(), 2.into()));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
    }

    #[test]
    fn powi_negative() {
        let h = Rational::new(1.into(), 2.into());
        assert_eq!(rat_powi(&h, -3), rat_from_i64(8));
        assert_eq!(rat_powi(&h, 0), Rational::one());
    }

    #[test]
    fn sqrt_detection() {
        let q = Rational::new(1.into(), 4.into());
        assert_eq!(rat_sqrt(&q).unwrap(), Rational::new(1.into(), 2.into()));
        let h = Rational::new(1.into(), 2.into());
        assert!(rat_sqrt(&h).is_none());
    }
}
