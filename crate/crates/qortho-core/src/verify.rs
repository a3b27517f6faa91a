//! Theorem harness: evaluates the predicted large-n behaviour of γ_n, a_n
//! and P_n against computed recurrence data, fits geometric decay rates,
//! checks the nonlinear lattice recurrence for a_n, and tracks the smallest
//! positive zeros toward the limiting profile.

use alloc::string::String;
use alloc::vec::Vec;
use num_traits::{One, Signed, Zero};

use crate::error::{QError, QResult};
use crate::modelrhp::ModelSolution;
use crate::numerics::{rat_powi, Complex, NumCtx, PrecisionPolicy, Rational, Real};
use crate::orthopoly::{
    eval_poly, smallest_positive_zero, RecurrenceTable,
};
use crate::qcalc::{f_fn, pochhammer_inf, QParams};
use crate::weights::least_squares;

/// Millisecond clock for report rows; the core default reports zeros, the
/// CLI supplies a wall clock.
pub trait Clock {
    fn now_ms(&self) -> u64;
}

impl Clock for () {
    fn now_ms(&self) -> u64 {
        0
    }
}

/// One measured error at degree n.
#[derive(Clone, Debug)]
pub struct ReportRow {
    pub n: usize,
    pub error: Real,
    pub ms: u64,
}

/// Least-squares geometric fit of an error sequence.
#[derive(Clone, Copy, Debug)]
pub struct FitResult {
    /// e_{n+1}/e_n estimate (per unit n).
    pub per_unit_n: f64,
    /// e_{n+2}/e_n estimate (per even step).
    pub per_step: f64,
    /// Sum of squared residuals of the log-linear fit.
    pub residual: f64,
    pub points: usize,
}

/// Per-claim error table with its fitted decay rate.
#[derive(Clone, Debug)]
pub struct AsymptoticReport {
    pub claim: String,
    pub rows: Vec<ReportRow>,
    pub fit: Option<FitResult>,
}

/// Fit log e_n vs n over the latest `max_points` rows with e_n above
/// `floor`, per the truncation-noise exclusion rule.
pub fn fit_rate(rows: &[ReportRow], floor: f64, max_points: usize) -> Option<FitResult> {
    let usable: Vec<(f64, f64)> = rows
        .iter()
        .filter_map(|r| {
            let e = r.error.to_f64();
            if e > floor && e.is_finite() {
                Some((r.n as f64, crate::numerics::fmath::ln(e)))
            } else {
                None
            }
        })
        .collect();
    if usable.len() < 2 {
        return None;
    }
    let start = usable.len().saturating_sub(max_points);
    let pts = &usable[start..];
    let (slope, intercept) = least_squares(pts);
    let residual: f64 = pts
        .iter()
        .map(|(x, y)| {
            let d = y - (slope * x + intercept);
            d * d
        })
        .sum();
    Some(FitResult {
        per_unit_n: crate::numerics::fmath::exp(slope),
        per_step: crate::numerics::fmath::exp(2.0 * slope),
        residual,
        points: pts.len(),
    })
}

/// Both leading-constant variants for the γ_n prediction.
#[derive(Clone, Debug)]
pub struct GammaPrediction {
    /// q^{n(n−1+α)/2} · 2·((q²;q²)_∞)²
    pub squared: Real,
    /// q^{n(n−1+α)/2} · 2·(q²;q²)_∞
    pub unsquared: Real,
    /// The bare power factor q^{n(n−1+α)/2}.
    pub power: Real,
}

fn q_squared_pochhammer(params: &QParams, policy: &PrecisionPolicy) -> QResult<Real> {
    let ctx = policy.ctx();
    let q2 = params.q().mul(params.q(), &ctx);
    let v = pochhammer_inf(
        &Complex::from_real(q2.clone(), &ctx),
        &q2,
        policy,
        policy.tail_eps(),
    )?
    .require_certified()?;
    Ok(v.re)
}

/// q^{n(n−1+α)/2}: exact integer power times q^{nα/2}.
fn gamma_power(n: usize, params: &QParams, ctx: &NumCtx) -> Real {
    let q = params.q();
    let int_part = q.powi((n as i64) * (n as i64 - 1) / 2, ctx);
    if params.alpha().is_zero() {
        return int_part;
    }
    let half_n_alpha = params
        .alpha()
        .mul(&ctx.from_i64(n as i64), ctx)
        .div(&ctx.from_i64(2), ctx);
    int_part.mul(&half_n_alpha.mul(&q.ln(ctx), ctx).exp(ctx), ctx)
}

/// γ_n prediction, both constant variants.
pub fn predict_gamma(
    n: usize,
    params: &QParams,
    policy: &PrecisionPolicy,
) -> QResult<GammaPrediction> {
    let ctx = policy.ctx();
    let qq = q_squared_pochhammer(params, policy)?;
    let two = ctx.from_i64(2);
    let power = gamma_power(n, params, &ctx);
    Ok(GammaPrediction {
        squared: power.mul(&two, &ctx).mul(&qq, &ctx).mul(&qq, &ctx),
        unsquared: power.mul(&two, &ctx).mul(&qq, &ctx),
        power,
    })
}

/// a_n prediction q^{n−1+α}.
pub fn predict_a(n: usize, params: &QParams, ctx: &NumCtx) -> Real {
    let q = params.q();
    let int_part = q.powi(n as i64 - 1, ctx);
    if params.alpha().is_zero() {
        return int_part;
    }
    int_part.mul(&params.alpha().mul(&q.ln(ctx), ctx).exp(ctx), ctx)
}

/// Which leading constant the data selects.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConstVariant {
    Squared,
    Unsquared,
}

/// Theorem-2 report: γ and a error sequences, fitted rates, and the
/// empirically resolved leading-constant variant.
#[derive(Clone, Debug)]
pub struct Theorem2Report {
    pub gamma: AsymptoticReport,
    pub gamma_alt: AsymptoticReport,
    pub a: AsymptoticReport,
    pub variant: ConstVariant,
}

/// Errors |γ_n/prediction − 1| (both variants) and |a_n/q^{n−1+α} − 1| over
/// the given degrees; exactly one constant variant must drive its sequence
/// to zero, and the report records which.
pub fn theorem2_report(
    rec: &RecurrenceTable<Real>,
    params: &QParams,
    n_set: &[usize],
    policy: &PrecisionPolicy,
    clock: &dyn Clock,
) -> QResult<Theorem2Report> {
    let ctx = policy.ctx();
    let one = ctx.one();
    let mut rows_sq = Vec::with_capacity(n_set.len());
    let mut rows_un = Vec::with_capacity(n_set.len());
    let mut rows_a = Vec::with_capacity(n_set.len());
    for &n in n_set {
        let t0 = clock.now_ms();
        let pred = predict_gamma(n, params, policy)?;
        let g = rec.gamma(n)?;
        let e_sq = g.div(&pred.squared, &ctx).sub(&one, &ctx).abs();
        let e_un = g.div(&pred.unsquared, &ctx).sub(&one, &ctx).abs();
        let a = rec.a(n)?;
        let e_a = a.div(&predict_a(n, params, &ctx), &ctx).sub(&one, &ctx).abs();
        let ms = clock.now_ms().saturating_sub(t0);
        rows_sq.push(ReportRow {
            n,
            error: e_sq,
            ms,
        });
        rows_un.push(ReportRow {
            n,
            error: e_un,
            ms: 0,
        });
        rows_a.push(ReportRow {
            n,
            error: e_a,
            ms: 0,
        });
    }
    let goes_to_zero = |rows: &[ReportRow]| -> bool {
        let first = rows.first().map(|r| r.error.to_f64()).unwrap_or(1.0);
        let last = rows.last().map(|r| r.error.to_f64()).unwrap_or(1.0);
        last < 0.05 && last < 0.2 * first.max(1e-300)
    };
    let sq_ok = goes_to_zero(&rows_sq);
    let un_ok = goes_to_zero(&rows_un);
    let variant = match (sq_ok, un_ok) {
        (true, false) => ConstVariant::Squared,
        (false, true) => ConstVariant::Unsquared,
        _ => return Err(QError::ConstantResolutionFailed),
    };
    let floor = policy.tail_eps().to_f64();
    let (rows_win, rows_lose) = if variant == ConstVariant::Squared {
        (rows_sq, rows_un)
    } else {
        (rows_un, rows_sq)
    };
    let fit = fit_rate(&rows_win, floor, 4);
    let fit_a = fit_rate(&rows_a, floor, 4);
    Ok(Theorem2Report {
        gamma: AsymptoticReport {
            claim: String::from("theorem2-gamma"),
            rows: rows_win,
            fit,
        },
        gamma_alt: AsymptoticReport {
            claim: String::from("theorem2-gamma-alt-constant"),
            rows: rows_lose,
            fit: None,
        },
        a: AsymptoticReport {
            claim: String::from("theorem2-a"),
            rows: rows_a,
            fit: fit_a,
        },
        variant,
    })
}

/// Inner-region error of the first theorem at scaled argument z = t·q^{n/2}:
/// returns (|(−1)^{n/2}q^{−(n/2)(n/2−1)}·P_n(z) − ψ(t)|,
///          |(−1)^{n/2}q^{(n/2)(n/2−1+α)}·γ_{n−1}^{−1}·P_{n−1}(z) − ϕ(t)|).
pub fn theorem1_inner_error(
    rec: &RecurrenceTable<Real>,
    sol: &ModelSolution,
    n: usize,
    t: &Complex,
    policy: &PrecisionPolicy,
) -> QResult<(Real, Real)> {
    if !n.is_multiple_of(2) || n < 2 {
        return Err(QError::OddDegree { n });
    }
    let ctx = policy.ctx();
    let params = sol.params();
    let q = params.q();
    let half_n = (n / 2) as i64;
    let arg = t.scale(&q.powi(half_n, &ctx), &ctx);
    let sign = if half_n % 2 == 0 { 1i64 } else { -1 };

    let p_n = eval_poly(rec, n, &arg, &ctx)?;
    let mut scale1 = q.powi(-half_n * (half_n - 1), &ctx);
    if sign < 0 {
        scale1 = scale1.neg();
    }
    let psi = sol.psi(t, &ctx)?;
    let e1 = p_n.scale(&scale1, &ctx).sub(&psi, &ctx).abs(&ctx);

    let p_nm1 = eval_poly(rec, n - 1, &arg, &ctx)?;
    let mut scale2 = q.powi(half_n * (half_n - 1), &ctx);
    if !params.alpha().is_zero() {
        let extra = params
            .alpha()
            .mul(&ctx.from_i64(half_n), &ctx)
            .mul(&q.ln(&ctx), &ctx)
            .exp(&ctx);
        scale2 = scale2.mul(&extra, &ctx);
    }
    scale2 = scale2.div(rec.gamma(n - 1)?, &ctx);
    if sign < 0 {
        scale2 = scale2.neg();
    }
    let varphi = sol.varphi(t, &ctx)?;
    let e2 = p_nm1.scale(&scale2, &ctx).sub(&varphi, &ctx).abs(&ctx);
    Ok((e1, e2))
}

/// Outer-region error |P_n(z) − z^n·(z^{−2};q²)_∞| of the first theorem.
pub fn theorem1_outer_error(
    rec: &RecurrenceTable<Real>,
    params: &QParams,
    n: usize,
    z: &Complex,
    policy: &PrecisionPolicy,
) -> QResult<Real> {
    let ctx = policy.ctx();
    let p_n = eval_poly(rec, n, z, &ctx)?;
    let f = f_fn(z, params.q(), policy, policy.tail_eps())?.value;
    let model = z.powi(n as i64, &ctx).mul(&f, &ctx);
    Ok(p_n.sub(&model, &ctx).abs(&ctx))
}

/// |b_n| rows with a recorded (not asserted) decay fit, for non-even weights.
pub fn bn_decay_check(
    rec: &RecurrenceTable<Real>,
    n_set: &[usize],
    policy: &PrecisionPolicy,
    clock: &dyn Clock,
) -> QResult<AsymptoticReport> {
    let mut rows = Vec::with_capacity(n_set.len());
    for &n in n_set {
        let t0 = clock.now_ms();
        let e = rec.b(n)?.abs();
        rows.push(ReportRow {
            n,
            error: e,
            ms: clock.now_ms().saturating_sub(t0),
        });
    }
    let fit = fit_rate(&rows, policy.tail_eps().to_f64(), 4);
    Ok(AsymptoticReport {
        claim: String::from("bn-decay"),
        rows,
        fit,
    })
}

/// |LHS/RHS − 1| of the nonlinear lattice recurrence
/// a_n(a_{n+1} + q^{1−n}a_n + q²a_{n−1} + q^{3−2n}a_{n+1}a_n a_{n−1})
///   = q^{n−1}(1−q^n), exact in rationals.
pub fn painleve_residual_rational(
    a_nm1: &Rational,
    a_n: &Rational,
    a_np1: &Rational,
    n: usize,
    q: &Rational,
) -> QResult<Rational> {
    if n == 0 {
        return Err(QError::DivisionByZero("lattice recurrence RHS at n = 0"));
    }
    let n = n as i64;
    let rhs = rat_powi(q, n - 1) * (Rational::one() - rat_powi(q, n));
    if rhs.is_zero() {
        return Err(QError::DivisionByZero("lattice recurrence RHS"));
    }
    let lhs = a_n
        * (a_np1
            + rat_powi(q, 1 - n) * a_n
            + rat_powi(q, 2) * a_nm1
            + rat_powi(q, 3 - 2 * n) * a_np1 * a_n * a_nm1);
    Ok((lhs / rhs - Rational::one()).abs())
}

/// Same residual at working precision.
pub fn painleve_residual_real(
    a_nm1: &Real,
    a_n: &Real,
    a_np1: &Real,
    n: usize,
    q: &Real,
    ctx: &NumCtx,
) -> QResult<Real> {
    if n == 0 {
        return Err(QError::DivisionByZero("lattice recurrence RHS at n = 0"));
    }
    let n = n as i64;
    let one = ctx.one();
    let rhs = q.powi(n - 1, ctx).mul(&one.sub(&q.powi(n, ctx), ctx), ctx);
    if rhs.is_zero() {
        return Err(QError::DivisionByZero("lattice recurrence RHS"));
    }
    let triple = a_np1.mul(a_n, ctx).mul(a_nm1, ctx);
    let inner = a_np1
        .add(&q.powi(1 - n, ctx).mul(a_n, ctx), ctx)
        .add(&q.powi(2, ctx).mul(a_nm1, ctx), ctx)
        .add(&q.powi(3 - 2 * n, ctx).mul(&triple, ctx), ctx);
    let lhs = a_n.mul(&inner, ctx);
    Ok(lhs.div(&rhs, ctx).sub(&one, ctx).abs())
}

/// Residual rows of the lattice recurrence for a computed coefficient table.
pub fn painleve_report(
    rec: &RecurrenceTable<Real>,
    n_set: &[usize],
    q: &Real,
    policy: &PrecisionPolicy,
    clock: &dyn Clock,
) -> QResult<AsymptoticReport> {
    let ctx = policy.ctx();
    let mut rows = Vec::with_capacity(n_set.len());
    for &n in n_set {
        let t0 = clock.now_ms();
        let e = painleve_residual_real(
            rec.a(n - 1)?,
            rec.a(n)?,
            rec.a(n + 1)?,
            n,
            q,
            &ctx,
        )?;
        rows.push(ReportRow {
            n,
            error: e,
            ms: clock.now_ms().saturating_sub(t0),
        });
    }
    let fit = fit_rate(&rows, policy.tail_eps().to_f64(), 4);
    Ok(AsymptoticReport {
        claim: String::from("painleve-residual"),
        rows,
        fit,
    })
}

/// Smallest positive zero of ψ by sign scan over the grid q^{j/8} up to the
/// inner-region boundary q^{−2.5}, then bisection.
pub fn psi_smallest_positive_zero(sol: &ModelSolution, policy: &PrecisionPolicy) -> QResult<Real> {
    let ctx = policy.ctx();
    let q = sol.params().q();
    let r = q.sqrt(&ctx).sqrt(&ctx).sqrt(&ctx); // q^{1/8}
    let j_hi: i64 = 80;
    let j_lo: i64 = -20; // q^{−2.5}
    let mut x_prev = r.powi(j_hi, &ctx);
    let mut s_prev = sol.psi_real(&x_prev, &ctx)?;
    if s_prev.is_zero() {
        return Ok(x_prev);
    }
    let mut bracket = None;
    for j in (j_lo..j_hi).rev() {
        let x = r.powi(j, &ctx);
        let s = sol.psi_real(&x, &ctx)?;
        if s.is_zero() {
            return Ok(x);
        }
        if s.is_negative() != s_prev.is_negative() {
            bracket = Some((x_prev, x));
            break;
        }
        x_prev = x;
        s_prev = s;
    }
    let Some((mut lo, mut hi)) = bracket else {
        return Err(QError::NoSignChange);
    };
    let mut f_lo = sol.psi_real(&lo, &ctx)?;
    let tol = ctx.pow2(-((policy.work_bits() / 2) as i64));
    let two = ctx.from_i64(2);
    loop {
        let mid = lo.add(&hi, &ctx).div(&two, &ctx);
        if hi.sub(&lo, &ctx).abs().div(&mid, &ctx).le(&tol) {
            return Ok(mid);
        }
        let f_mid = sol.psi_real(&mid, &ctx)?;
        if f_mid.is_zero() {
            return Ok(mid);
        }
        if f_mid.is_negative() == f_lo.is_negative() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
}

/// Smallest-zero scaling report: r_n = (smallest zero of P_n)/q^{n/2}
/// against the smallest positive zero t* of ψ.
#[derive(Clone, Debug)]
pub struct ZeroScalingReport {
    pub t_star: Real,
    /// (n, r_n, |r_n − t*|)
    pub rows: Vec<(usize, Real, Real)>,
    pub fit: Option<FitResult>,
}

pub fn smallest_zero_scaling(
    rec: &RecurrenceTable<Real>,
    sol: &ModelSolution,
    n_set: &[usize],
    q_exact: &Rational,
    policy: &PrecisionPolicy,
) -> QResult<ZeroScalingReport> {
    let ctx = policy.ctx();
    let q = ctx.from_rational(q_exact);
    let t_star = psi_smallest_positive_zero(sol, policy)?;
    let mut rows = Vec::with_capacity(n_set.len());
    for &n in n_set {
        let z = smallest_positive_zero(rec, n, q_exact, policy)?;
        let r_n = z.div(&q.powi((n / 2) as i64, &ctx), &ctx);
        let err = r_n.sub(&t_star, &ctx).abs();
        rows.push((n, r_n, err));
    }
    let err_rows: Vec<ReportRow> = rows
        .iter()
        .map(|(n, _, e)| ReportRow {
            n: *n,
            error: e.clone(),
            ms: 0,
        })
        .collect();
    let fit = fit_rate(&err_rows, policy.tail_eps().to_f64(), 4);
    Ok(ZeroScalingReport { t_star, rows, fit })
}

/// Exact Painlevé residual table for the model sequence a_n = q^{n−1}:
/// equals 4q^n/(1−q^n) identically.
pub fn painleve_model_sequence_residual(n: usize, q: &Rational) -> QResult<Rational> {
    if n == 0 {
        return Err(QError::DivisionByZero("lattice recurrence RHS at n = 0"));
    }
    let a = |m: usize| rat_powi(q, m as i64 - 1);
    painleve_residual_rational(&a(n - 1), &a(n), &a(n + 1), n, q)
}

/// γ_n/q^{n(n−1+α)/2} at a given degree (universality comparisons).
pub fn gamma_scaled_limit(
    rec: &RecurrenceTable<Real>,
    params: &QParams,
    n: usize,
    policy: &PrecisionPolicy,
) -> QResult<Real> {
    let ctx = policy.ctx();
    let power = gamma_power(n, params, &ctx);
    Ok(rec.gamma(n)?.div(&power, &ctx))
}
