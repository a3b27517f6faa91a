//! High-precision numeric foundation: working-precision reals and complexes,
//! exact rationals, the precision/truncation policy, and the tail-certified
//! truncation report every series/product operation returns.

pub mod field;
pub mod fmath;
pub mod rational;
pub mod real;

pub use field::{NumField, RatField, RealField};
pub use rational::{
    parse_rational, rat_from_i64, rat_is_integer, rat_powi, rat_sqrt, rat_to_i64, rat_to_string,
    Rational,
};
pub use real::{annulus_points, vec2_norm_inf, Complex, NumCtx, Real};

use crate::error::{QError, QResult};
use num_traits::Signed;

/// Precision and truncation policy obeyed by every module.
#[derive(Clone, Debug)]
pub struct PrecisionPolicy {
    work_bits: usize,
    tail_eps: Real,
    max_terms: usize,
    guard_bits: usize,
}

impl PrecisionPolicy {
    /// Validates work_bits ≥ 64, tail_eps > 0, max_terms ≥ 8.
    pub fn new(work_bits: usize, tail_eps: Real, max_terms: usize, guard_bits: usize) -> QResult<Self> {
        if work_bits < 64 {
            return Err(QError::InvalidLiteral("work_bits must be >= 64".into()));
        }
        if !tail_eps.is_positive() || !tail_eps.is_finite() {
            return Err(QError::InvalidLiteral("tail_eps must be > 0".into()));
        }
        if max_terms < 8 {
            return Err(QError::InvalidLiteral("max_terms must be >= 8".into()));
        }
        Ok(PrecisionPolicy {
            work_bits,
            tail_eps,
            max_terms,
            guard_bits,
        })
    }

    /// Policy with tail_eps = 10^exp10.
    pub fn with_pow10_eps(work_bits: usize, exp10: i32, max_terms: usize) -> QResult<Self> {
        let ctx = NumCtx::new(work_bits);
        let eps = ctx.from_i64(10).powi(exp10 as i64, &ctx);
        PrecisionPolicy::new(work_bits, eps, max_terms, 0)
    }

    pub fn ctx(&self) -> NumCtx {
        NumCtx::new(self.work_bits)
    }

    pub fn work_bits(&self) -> usize {
        self.work_bits
    }

    pub fn tail_eps(&self) -> &Real {
        &self.tail_eps
    }

    pub fn max_terms(&self) -> usize {
        self.max_terms
    }

    pub fn guard_bits(&self) -> usize {
        self.guard_bits
    }

    /// Same policy with tail_eps halved (refinement-stability checks).
    pub fn halved_eps(&self) -> Self {
        let ctx = self.ctx();
        PrecisionPolicy {
            work_bits: self.work_bits,
            tail_eps: self.tail_eps.div(&ctx.from_i64(2), &ctx),
            max_terms: self.max_terms,
            guard_bits: self.guard_bits,
        }
    }
}

/// Outcome of truncating an infinite sum or product: whether the discarded
/// tail was certified below the requested tolerance, and how many terms ran.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TailStatus {
    pub certified: bool,
    pub terms: usize,
}

impl TailStatus {
    pub fn certified(terms: usize) -> Self {
        TailStatus {
            certified: true,
            terms,
        }
    }

    pub fn cap_hit(terms: usize) -> Self {
        TailStatus {
            certified: false,
            terms,
        }
    }

    pub fn merge(self, other: TailStatus) -> TailStatus {
        TailStatus {
            certified: self.certified && other.certified,
            terms: self.terms.max(other.terms),
        }
    }
}

/// A value together with its truncation report; truncation is never silent.
#[derive(Clone, Debug)]
pub struct Trunc<T> {
    pub value: T,
    pub status: TailStatus,
}

impl<T> Trunc<T> {
    pub fn new(value: T, status: TailStatus) -> Self {
        Trunc { value, status }
    }

    pub fn certified(value: T, terms: usize) -> Self {
        Trunc {
            value,
            status: TailStatus::certified(terms),
        }
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Trunc<U> {
        Trunc {
            value: f(self.value),
            status: self.status,
        }
    }

    /// Unwrap, demanding a certified tail.
    pub fn require_certified(self) -> QResult<T> {
        if self.status.certified {
            Ok(self.value)
        } else {
            Err(QError::TruncationCap {
                terms: self.status.terms,
            })
        }
    }
}

/// Bits sufficient to carry gamma_{n_max} ≈ q^{n(n−1+α)/2} with 64 significant
/// bits to spare: ceil(n(n−1+max(α,0))/2 · log2(1/q)) + 64 + guard.
pub fn required_bits(q: &Rational, alpha: &Rational, n_max: usize, guard_bits: usize) -> QResult<usize> {
    if !q.is_positive() || *q >= Rational::from_integer(1.into()) {
        return Err(QError::QOutOfRange);
    }
    if *alpha <= rat_from_i64(-1) {
        return Err(QError::AlphaOutOfRange("alpha must be > -1"));
    }
    let alpha_pos = if alpha.is_negative() {
        Rational::from_integer(0.into())
    } else {
        alpha.clone()
    };
    let n = rat_from_i64(n_max as i64);
    let scale = &n * (&n - rat_from_i64(1) + alpha_pos) / rat_from_i64(2);
    if !scale.is_positive() {
        return Ok(64 + guard_bits);
    }
    // log2(1/q) at a fixed internal precision; the +64 cushion absorbs the
    // one-ulp ambiguity of the ceiling.
    let ctx = NumCtx::new(192);
    let log2_inv_q = ctx.from_rational(q).log2(&ctx).neg();
    let bits = ctx.from_rational(&scale).mul(&log2_inv_q, &ctx).ceil();
    let b = bits.to_f64();
    if !(0.0..=1e9).contains(&b) {
        return Err(QError::NonFinite);
    }
    Ok(b as usize + 64 + guard_bits)
}

/// Smallest J ≥ 0 with first·ratio^J/(1−ratio) ≤ eps.
pub fn geometric_tail_terms(ratio: &Real, first_term_mag: &Real, eps: &Real, ctx: &NumCtx) -> QResult<usize> {
    if !ratio.is_positive() || ratio.ge(&ctx.one()) {
        return Err(QError::QOutOfRange);
    }
    if !eps.is_positive() {
        return Err(QError::InvalidLiteral("eps must be > 0".into()));
    }
    let one_minus = ctx.one().sub(ratio, ctx);
    let bound0 = first_term_mag.div(&one_minus, ctx);
    if bound0.le(eps) {
        return Ok(0);
    }
    // Analytic guess, then local adjustment to the exact boundary.
    let guess = bound0.div(eps, ctx).ln(ctx).div(&ratio.ln(ctx).neg(), ctx).to_f64();
    let mut j = if guess.is_finite() && guess > 0.0 {
        fmath::floor(guess).max(0.0) as i64 - 2
    } else {
        0
    }
    .max(0) as usize;
    let mut bound = bound0.mul(&ratio.powi(j as i64, ctx), ctx);
    while bound.gt(eps) {
        bound = bound.mul(ratio, ctx);
        j += 1;
        if j > 100_000_000 {
            return Err(QError::NonConvergence);
        }
    }
    Ok(j)
}
