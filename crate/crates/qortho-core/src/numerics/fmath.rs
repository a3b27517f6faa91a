//! Core-only f64 helpers (ln, exp, floor, round) for the rate-fitting and
//! cutoff paths. The std float methods live outside core, so a `no_std`
//! build needs its own; ~1 ulp accuracy is irrelevant here — fits feed
//! tolerance bands an order of magnitude wide.

const LN_2: f64 = core::f64::consts::LN_2;

pub fn fabs(x: f64) -> f64 {
    f64::from_bits(x.to_bits() & !(1u64 << 63))
}

pub fn floor(x: f64) -> f64 {
    let t = x as i64 as f64;
    if t > x {
        t - 1.0
    } else {
        t
    }
}

pub fn round(x: f64) -> f64 {
    floor(x + 0.5)
}

/// 2^k through exponent bits; clamps outside the finite range.
pub fn pow2(k: i64) -> f64 {
    if k < -1074 {
        0.0
    } else if k > 1023 {
        f64::INFINITY
    } else if k >= -1022 {
        f64::from_bits(((k + 1023) as u64) << 52)
    } else {
        f64::from_bits(1u64 << (k + 1074) as u32)
    }
}

/// Natural log for finite positive normal inputs; NAN otherwise.
pub fn ln(x: f64) -> f64 {
    if x.is_nan() || x <= 0.0 || !x.is_finite() {
        return f64::NAN;
    }
    let bits = x.to_bits();
    let e = ((bits >> 52) & 0x7ff) as i64;
    if e == 0 {
        // subnormal: rescale by 2^64
        return ln(x * pow2(64)) - 64.0 * LN_2;
    }
    let e = e - 1023;
    let m = f64::from_bits((bits & 0x000f_ffff_ffff_ffff) | (1023u64 << 52)); // [1, 2)
    // ln m = 2·atanh((m−1)/(m+1)), t ≤ 1/3
    let t = (m - 1.0) / (m + 1.0);
    let t2 = t * t;
    let mut term = t;
    let mut sum = t;
    for k in 1..27u32 {
        term *= t2;
        sum += term / (2 * k + 1) as f64;
    }
    2.0 * sum + e as f64 * LN_2
}

/// Exponential via base-2 range reduction and a Taylor tail.
pub fn exp(x: f64) -> f64 {
    if !x.is_finite() {
        return if x > 0.0 { f64::INFINITY } else { 0.0 };
    }
    if fabs(x) > 700.0 {
        return if x > 0.0 { f64::INFINITY } else { 0.0 };
    }
    let k = round(x / LN_2);
    let r = x - k * LN_2; // |r| ≤ ln2/2
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    for i in 1..22u32 {
        term *= r / i as f64;
        sum += term;
    }
    sum * pow2(k as i64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_std_math() {
        for x in [1e-60, 3.7e-3, 0.5, 1.0, core::f64::consts::E, 1234.5, 8.1e40] {
            assert!((ln(x) - x.ln()).abs() < 1e-12 * (1.0 + x.ln().abs()));
        }
        for x in [-30.0, -2.5, -1e-8, 0.0, 0.3, 5.0, 42.0] {
            assert!((exp(x) - x.exp()).abs() < 1e-12 * x.exp());
        }
        assert_eq!(floor(2.7), 2.0);
        assert_eq!(floor(-2.1), -3.0);
        assert_eq!(round(2.5), 3.0);
        assert_eq!(round(-2.4), -2.0);
        assert_eq!(fabs(-3.5), 3.5);
    }
}
