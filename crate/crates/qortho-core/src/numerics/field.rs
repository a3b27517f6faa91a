//! A small field abstraction so the polynomial engine runs identically over
//! exact rationals and fixed-precision reals.

use num_traits::{One, Signed, Zero};

use crate::numerics::rational::Rational;
use crate::numerics::real::{NumCtx, Real};

/// Field operations used by the moment/recurrence machinery.
#[allow(clippy::wrong_self_convention)]
pub trait NumField {
    type El: Clone + core::fmt::Debug;

    fn zero(&self) -> Self::El;
    fn one(&self) -> Self::El;
    fn from_i64(&self, v: i64) -> Self::El;
    fn add(&self, a: &Self::El, b: &Self::El) -> Self::El;
    fn sub(&self, a: &Self::El, b: &Self::El) -> Self::El;
    fn mul(&self, a: &Self::El, b: &Self::El) -> Self::El;
    fn div(&self, a: &Self::El, b: &Self::El) -> Self::El;
    fn neg(&self, a: &Self::El) -> Self::El;
    fn abs(&self, a: &Self::El) -> Self::El;
    fn is_zero(&self, a: &Self::El) -> bool;
    /// |a| > |b| on absolute values already taken.
    fn gt(&self, a: &Self::El, b: &Self::El) -> bool;
    /// True when x is negligible against the accumulation scale
    /// (exact zero for rationals, a precision-derived floor for reals).
    fn negligible(&self, x: &Self::El, scale: &Self::El) -> bool;
}

/// Exact rational field.
#[derive(Clone, Copy, Debug, Default)]
pub struct RatField;

impl NumField for RatField {
    type El = Rational;

    fn zero(&self) -> Rational {
        Rational::zero()
    }
    fn one(&self) -> Rational {
        Rational::one()
    }
    fn from_i64(&self, v: i64) -> Rational {
        Rational::from_integer(v.into())
    }
    fn add(&self, a: &Rational, b: &Rational) -> Rational {
        a + b
    }
    fn sub(&self, a: &Rational, b: &Rational) -> Rational {
        a - b
    }
    fn mul(&self, a: &Rational, b: &Rational) -> Rational {
        a * b
    }
    fn div(&self, a: &Rational, b: &Rational) -> Rational {
        a / b
    }
    fn neg(&self, a: &Rational) -> Rational {
        -a
    }
    fn abs(&self, a: &Rational) -> Rational {
        a.abs()
    }
    fn is_zero(&self, a: &Rational) -> bool {
        a.is_zero()
    }
    fn gt(&self, a: &Rational, b: &Rational) -> bool {
        a > b
    }
    fn negligible(&self, x: &Rational, _scale: &Rational) -> bool {
        x.is_zero()
    }
}

/// Fixed-precision real field with a degeneracy floor at 2^(−bits/2)·scale.
#[derive(Clone, Copy, Debug)]
pub struct RealField {
    pub ctx: NumCtx,
}

impl RealField {
    pub fn new(ctx: NumCtx) -> Self {
        RealField { ctx }
    }
}

impl NumField for RealField {
    type El = Real;

    fn zero(&self) -> Real {
        self.ctx.zero()
    }
    fn one(&self) -> Real {
        self.ctx.one()
    }
    fn from_i64(&self, v: i64) -> Real {
        self.ctx.from_i64(v)
    }
    fn add(&self, a: &Real, b: &Real) -> Real {
        a.add(b, &self.ctx)
    }
    fn sub(&self, a: &Real, b: &Real) -> Real {
        a.sub(b, &self.ctx)
    }
    fn mul(&self, a: &Real, b: &Real) -> Real {
        a.mul(b, &self.ctx)
    }
    fn div(&self, a: &Real, b: &Real) -> Real {
        a.div(b, &self.ctx)
    }
    fn neg(&self, a: &Real) -> Real {
        a.neg()
    }
    fn abs(&self, a: &Real) -> Real {
        a.abs()
    }
    fn is_zero(&self, a: &Real) -> bool {
        a.is_zero()
    }
    fn gt(&self, a: &Real, b: &Real) -> bool {
        a.gt(b)
    }
    fn negligible(&self, x: &Real, scale: &Real) -> bool {
        if x.is_zero() {
            return true;
        }
        let floor = scale
            .abs()
            .mul(&self.ctx.pow2(-((self.ctx.bits() / 2) as i64)), &self.ctx);
        x.abs().le(&floor)
    }
}
