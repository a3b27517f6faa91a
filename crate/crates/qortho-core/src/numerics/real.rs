//! Fixed-precision real and complex values on top of arbitrary-precision floats.
//!
//! Every operation rounds to the context's bit count with a fixed rounding
//! mode, so results are bit-identical for a fixed context regardless of call
//! order or thread count. Operations that internally need transcendental
//! constants (exp, ln, pow, decimal parse/format) build a fresh constants
//! cache per call; they sit outside the hot loops.

use alloc::string::String;
use alloc::vec::Vec;
use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use core::cmp::Ordering;
use num_bigint::{BigInt, Sign as IntSign};

use crate::error::{QError, QResult};
use crate::numerics::rational::Rational;

const RM: RoundingMode = RoundingMode::ToEven;

/// Arithmetic context: the working precision in bits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NumCtx {
    bits: usize,
}

impl NumCtx {
    /// New context. Precision below 64 bits is rejected by policy elsewhere;
    /// here it is clamped so helper contexts stay usable.
    pub fn new(bits: usize) -> Self {
        NumCtx { bits: bits.max(64) }
    }

    pub fn bits(&self) -> usize {
        self.bits
    }

    pub fn zero(&self) -> Real {
        Real(BigFloat::new(self.bits))
    }

    pub fn one(&self) -> Real {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Real {
        Real(BigFloat::from_i64(v, self.bits))
    }

    pub fn from_u64(&self, v: u64) -> Real {
        Real(BigFloat::from_u64(v, self.bits))
    }

    pub fn from_f64(&self, v: f64) -> Real {
        Real(BigFloat::from_f64(v, self.bits))
    }

    /// Exact conversion of a big integer, then one rounding to the context.
    pub fn from_bigint(&self, v: &BigInt) -> Real {
        let (sign, mag) = v.clone().into_parts();
        let digits = mag.to_u64_digits();
        if digits.is_empty() {
            return self.zero();
        }
        // Accumulate most-significant first at enough precision to be exact.
        let p = digits.len() * 64 + 64;
        let base = BigFloat::from_f64(18446744073709551616.0, p); // 2^64, exact
        let mut acc = BigFloat::new(p);
        for d in digits.iter().rev() {
            acc = acc.mul(&base, p, RM).add(&BigFloat::from_u64(*d, p), p, RM);
        }
        let mut acc = Real(acc).round_to(self.bits);
        if sign == IntSign::Minus {
            acc = acc.neg();
        }
        acc
    }

    /// Rational to real with a single rounding at the context precision.
    pub fn from_rational(&self, r: &Rational) -> Real {
        let wide = NumCtx::new(self.bits + 64);
        let n = wide.from_bigint(r.numer());
        let d = wide.from_bigint(r.denom());
        Real(n.0.div(&d.0, self.bits, RM))
    }

    /// Parse a decimal literal (plain or scientific) at the context precision.
    pub fn parse_dec(&self, s: &str) -> QResult<Real> {
        let mut cc = Consts::new().map_err(|_| QError::NonFinite)?;
        let v = BigFloat::parse(s, Radix::Dec, self.bits, RM, &mut cc);
        if v.is_nan() {
            return Err(QError::InvalidLiteral(String::from(s)));
        }
        Ok(Real(v))
    }

    /// 2^k as a real, exact.
    pub fn pow2(&self, k: i64) -> Real {
        let two = self.from_i64(2);
        two.powi(k, self)
    }
}

/// A real value carried at the working precision.
#[derive(Clone, Debug)]
pub struct Real(pub(crate) BigFloat);

impl Real {
    pub fn add(&self, rhs: &Real, ctx: &NumCtx) -> Real {
        Real(self.0.add(&rhs.0, ctx.bits, RM))
    }

    pub fn sub(&self, rhs: &Real, ctx: &NumCtx) -> Real {
        Real(self.0.sub(&rhs.0, ctx.bits, RM))
    }

    pub fn mul(&self, rhs: &Real, ctx: &NumCtx) -> Real {
        Real(self.0.mul(&rhs.0, ctx.bits, RM))
    }

    pub fn div(&self, rhs: &Real, ctx: &NumCtx) -> Real {
        Real(self.0.div(&rhs.0, ctx.bits, RM))
    }

    /// Negation; exact.
    pub fn neg(&self) -> Real {
        let mut v = self.0.clone();
        v.inv_sign();
        Real(v)
    }

    /// Absolute value; exact.
    pub fn abs(&self) -> Real {
        Real(self.0.abs())
    }

    pub fn sqrt(&self, ctx: &NumCtx) -> Real {
        Real(self.0.sqrt(ctx.bits, RM))
    }

    /// Integer power; negative exponents via one reciprocal.
    pub fn powi(&self, n: i64, ctx: &NumCtx) -> Real {
        if n == 0 {
            return ctx.one();
        }
        let p = Real(self.0.powi(n.unsigned_abs() as usize, ctx.bits, RM));
        if n < 0 {
            ctx.one().div(&p, ctx)
        } else {
            p
        }
    }

    pub fn exp(&self, ctx: &NumCtx) -> Real {
        let mut cc = Consts::new().expect("constants cache");
        Real(self.0.exp(ctx.bits, RM, &mut cc))
    }

    pub fn ln(&self, ctx: &NumCtx) -> Real {
        let mut cc = Consts::new().expect("constants cache");
        Real(self.0.ln(ctx.bits, RM, &mut cc))
    }

    pub fn log2(&self, ctx: &NumCtx) -> Real {
        let mut cc = Consts::new().expect("constants cache");
        Real(self.0.log2(ctx.bits, RM, &mut cc))
    }

    /// Real power a^e for a > 0.
    pub fn pow(&self, e: &Real, ctx: &NumCtx) -> Real {
        let mut cc = Consts::new().expect("constants cache");
        Real(self.0.pow(&e.0, ctx.bits, RM, &mut cc))
    }

    pub fn ceil(&self) -> Real {
        Real(self.0.ceil())
    }

    pub fn floor(&self) -> Real {
        Real(self.0.floor())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive() && !self.0.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        !self.0.is_nan() && !self.0.is_inf()
    }

    /// Binary exponent e with |x| in [2^(e−1), 2^e); None for zero.
    pub fn exponent(&self) -> Option<i64> {
        if self.0.is_zero() {
            return None;
        }
        self.0.exponent().map(|e| e as i64)
    }

    /// Total order; panics on NaN (finite values are an internal invariant).
    #[allow(clippy::should_implement_trait)]
    pub fn cmp(&self, rhs: &Real) -> Ordering {
        let c = self.0.cmp(&rhs.0).expect("comparison of non-finite values");
        match c {
            0 => Ordering::Equal,
            x if x < 0 => Ordering::Less,
            _ => Ordering::Greater,
        }
    }

    pub fn lt(&self, rhs: &Real) -> bool {
        self.cmp(rhs) == Ordering::Less
    }

    pub fn le(&self, rhs: &Real) -> bool {
        self.cmp(rhs) != Ordering::Greater
    }

    pub fn gt(&self, rhs: &Real) -> bool {
        self.cmp(rhs) == Ordering::Greater
    }

    pub fn ge(&self, rhs: &Real) -> bool {
        self.cmp(rhs) != Ordering::Less
    }

    pub fn max(&self, rhs: &Real, _ctx: &NumCtx) -> Real {
        if self.ge(rhs) {
            self.clone()
        } else {
            rhs.clone()
        }
    }

    fn round_to(&self, bits: usize) -> Real {
        let mut v = self.0.clone();
        v.set_precision(bits, RM).expect("precision change");
        Real(v)
    }

    /// Lossy conversion for rate fitting and reporting; not used in the
    /// arithmetic paths.
    pub fn to_f64(&self) -> f64 {
        if self.0.is_zero() {
            return 0.0;
        }
        if self.0.is_inf_pos() {
            return f64::INFINITY;
        }
        if self.0.is_inf_neg() {
            return f64::NEG_INFINITY;
        }
        let Some((words, _p, sign, e, _inexact)) = self.0.as_raw_parts() else {
            return f64::NAN;
        };
        let top = *words.last().expect("nonzero mantissa") as f64;
        let next = if words.len() >= 2 {
            words[words.len() - 2] as f64
        } else {
            0.0
        };
        // value = ±(0.m) · 2^e with the mantissa fraction in [1/2, 1)
        let frac = (top + next / 18446744073709551616.0) / 18446744073709551616.0;
        let mag = frac * crate::numerics::fmath::pow2(e as i64);
        if sign == astro_float::Sign::Neg {
            -mag
        } else {
            mag
        }
    }

    /// Full-precision decimal string (scientific notation).
    pub fn to_dec_string(&self) -> String {
        if self.0.is_zero() {
            return String::from("0");
        }
        let mut cc = Consts::new().expect("constants cache");
        self.0
            .format(Radix::Dec, RM, &mut cc)
            .unwrap_or_else(|_| String::from("nan"))
    }
}

/// A complex value; componentwise precision follows the context.
#[derive(Clone, Debug)]
pub struct Complex {
    pub re: Real,
    pub im: Real,
}

impl Complex {
    pub fn new(re: Real, im: Real) -> Self {
        Complex { re, im }
    }

    pub fn from_real(re: Real, ctx: &NumCtx) -> Self {
        Complex {
            re,
            im: ctx.zero(),
        }
    }

    pub fn zero(ctx: &NumCtx) -> Self {
        Complex {
            re: ctx.zero(),
            im: ctx.zero(),
        }
    }

    pub fn one(ctx: &NumCtx) -> Self {
        Complex {
            re: ctx.one(),
            im: ctx.zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn add(&self, rhs: &Complex, ctx: &NumCtx) -> Complex {
        Complex {
            re: self.re.add(&rhs.re, ctx),
            im: self.im.add(&rhs.im, ctx),
        }
    }

    pub fn sub(&self, rhs: &Complex, ctx: &NumCtx) -> Complex {
        Complex {
            re: self.re.sub(&rhs.re, ctx),
            im: self.im.sub(&rhs.im, ctx),
        }
    }

    pub fn mul(&self, rhs: &Complex, ctx: &NumCtx) -> Complex {
        let re = self
            .re
            .mul(&rhs.re, ctx)
            .sub(&self.im.mul(&rhs.im, ctx), ctx);
        let im = self
            .re
            .mul(&rhs.im, ctx)
            .add(&self.im.mul(&rhs.re, ctx), ctx);
        Complex { re, im }
    }

    pub fn div(&self, rhs: &Complex, ctx: &NumCtx) -> Complex {
        let den = rhs
            .re
            .mul(&rhs.re, ctx)
            .add(&rhs.im.mul(&rhs.im, ctx), ctx);
        let num = self.mul(&rhs.conj(), ctx);
        Complex {
            re: num.re.div(&den, ctx),
            im: num.im.div(&den, ctx),
        }
    }

    pub fn scale(&self, s: &Real, ctx: &NumCtx) -> Complex {
        Complex {
            re: self.re.mul(s, ctx),
            im: self.im.mul(s, ctx),
        }
    }

    /// Negation; exact.
    pub fn neg(&self) -> Complex {
        Complex {
            re: self.re.neg(),
            im: self.im.neg(),
        }
    }

    /// Conjugate; exact.
    pub fn conj(&self) -> Complex {
        Complex {
            re: self.re.clone(),
            im: self.im.neg(),
        }
    }

    pub fn inv(&self, ctx: &NumCtx) -> Complex {
        Complex::one(ctx).div(self, ctx)
    }

    pub fn abs_sq(&self, ctx: &NumCtx) -> Real {
        self.re
            .mul(&self.re, ctx)
            .add(&self.im.mul(&self.im, ctx), ctx)
    }

    pub fn abs(&self, ctx: &NumCtx) -> Real {
        if self.im.is_zero() {
            return self.re.abs();
        }
        if self.re.is_zero() {
            return self.im.abs();
        }
        self.abs_sq(ctx).sqrt(ctx)
    }

    /// Integer power by binary exponentiation.
    pub fn powi(&self, n: i64, ctx: &NumCtx) -> Complex {
        if n == 0 {
            return Complex::one(ctx);
        }
        let mut base = self.clone();
        let mut e = n.unsigned_abs();
        let mut acc = Complex::one(ctx);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, ctx);
            }
            base = base.mul(&base, ctx);
            e >>= 1;
        }
        if n < 0 {
            acc.inv(ctx)
        } else {
            acc
        }
    }
}

/// Infinity norm of a complex 2-vector.
pub fn vec2_norm_inf(v: &[Complex; 2], ctx: &NumCtx) -> Real {
    v[0].abs(ctx).max(&v[1].abs(ctx), ctx)
}

/// Deterministic low-discrepancy points in the annulus r_min ≤ |z| ≤ r_max,
/// used by tests and verification grids (no RNG dependency).
pub fn annulus_points(ctx: &NumCtx, count: usize, r_min: f64, r_max: f64) -> Vec<Complex> {
    let mut out = Vec::with_capacity(count);
    let mut state: u64 = 0x9e3779b97f4a7c15;
    for _ in 0..count {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let u = ((state >> 11) as f64) / ((1u64 << 53) as f64);
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let v = ((state >> 11) as f64) / ((1u64 << 53) as f64);
        let r = r_min + (r_max - r_min) * u;
        let theta = core::f64::consts::TAU * v;
        let (s, c) = sin_cos_f64(theta);
        // Keep a safe angular distance from the real axis (the lattice).
        let (s, c) = if s.abs() < 0.05 {
            sin_cos_f64(theta + 0.3)
        } else {
            (s, c)
        };
        out.push(Complex::new(ctx.from_f64(r * c), ctx.from_f64(r * s)));
    }
    out
}

// Minimal deterministic sine/cosine for grid generation only (f64 seeds the
// high-precision points; accuracy of the grid itself is irrelevant).
fn sin_cos_f64(x: f64) -> (f64, f64) {
    let mut x = x % core::f64::consts::TAU;
    if x < 0.0 {
        x += core::f64::consts::TAU;
    }
    // Taylor around 0 after range reduction to [-pi, pi]
    if x > core::f64::consts::PI {
        x -= core::f64::consts::TAU;
    }
    let x2 = x * x;
    let mut s = x;
    let mut term = x;
    let mut k = 1.0f64;
    for _ in 0..12 {
        term = -term * x2 / ((2.0 * k) * (2.0 * k + 1.0));
        s += term;
        k += 1.0;
    }
    let mut c = 1.0f64;
    let mut termc = 1.0f64;
    let mut m = 1.0f64;
    for _ in 0..12 {
        termc = -termc * x2 / ((2.0 * m - 1.0) * (2.0 * m));
        c += termc;
        m += 1.0;
    }
    (s, c)
}
