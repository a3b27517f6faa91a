//! q-calculus primitives: Pochhammer products, two- and one-sided Jackson
//! integrals with certified geometric tails, the bilateral lattice function
//! h^α, and the product functions f, g, g_n with their q-difference relations.

use alloc::vec::Vec;

use crate::error::{QError, QResult};
use crate::numerics::{Complex, NumCtx, PrecisionPolicy, Rational, Real, TailStatus, Trunc};

/// Lattice/shape parameters: q ∈ (0,1) strictly and α > −1.
#[derive(Clone, Debug)]
pub struct QParams {
    q: Real,
    alpha: Real,
}

impl QParams {
    pub fn new(q: Real, alpha: Real, ctx: &NumCtx) -> QResult<Self> {
        if !q.is_positive() || q.ge(&ctx.one()) {
            return Err(QError::QOutOfRange);
        }
        if alpha.le(&ctx.from_i64(-1)) {
            return Err(QError::AlphaOutOfRange("alpha must be > -1"));
        }
        Ok(QParams { q, alpha })
    }

    pub fn from_rationals(q: &Rational, alpha: &Rational, ctx: &NumCtx) -> QResult<Self> {
        QParams::new(ctx.from_rational(q), ctx.from_rational(alpha), ctx)
    }

    pub fn q(&self) -> &Real {
        &self.q
    }

    pub fn alpha(&self) -> &Real {
        &self.alpha
    }

    /// q^α; exact 1 for α = 0, otherwise exp(α·ln q).
    pub fn q_pow_alpha(&self, ctx: &NumCtx) -> Real {
        if self.alpha.is_zero() {
            return ctx.one();
        }
        self.alpha.mul(&self.q.ln(ctx), ctx).exp(ctx)
    }
}

/// Which half of the lattice ±q^k a value belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Plus,
    Minus,
}

/// An integrand on the lattice {±q^k}: a callable, or a stored table.
pub trait LatticeFn {
    fn eval(&self, k: u32, side: Side) -> QResult<Trunc<Complex>>;
}

/// Callable integrand.
pub struct FnLattice<F>(pub F)
where
    F: Fn(u32, Side) -> QResult<Trunc<Complex>>;

impl<F> LatticeFn for FnLattice<F>
where
    F: Fn(u32, Side) -> QResult<Trunc<Complex>>,
{
    fn eval(&self, k: u32, side: Side) -> QResult<Trunc<Complex>> {
        (self.0)(k, side)
    }
}

/// Table of values at ±q^k for k = 0..=k_max; reads beyond are errors.
#[derive(Clone, Debug)]
pub struct LatticeTable {
    plus: Vec<Real>,
    minus: Vec<Real>,
}

impl LatticeTable {
    pub fn new(plus: Vec<Real>, minus: Vec<Real>) -> QResult<Self> {
        if plus.len() != minus.len() || plus.is_empty() {
            return Err(QError::InvalidLiteral(
                "lattice table sides must be non-empty and equal length".into(),
            ));
        }
        Ok(LatticeTable { plus, minus })
    }

    pub fn k_max(&self) -> u32 {
        (self.plus.len() - 1) as u32
    }

    pub fn value(&self, k: u32, side: Side) -> QResult<&Real> {
        let v = match side {
            Side::Plus => self.plus.get(k as usize),
            Side::Minus => self.minus.get(k as usize),
        };
        v.ok_or(QError::TableExhausted { k })
    }

    /// True when the table is even in z (plus and minus values agree).
    pub fn is_even(&self) -> bool {
        self.plus
            .iter()
            .zip(self.minus.iter())
            .all(|(p, m)| p.cmp(m) == core::cmp::Ordering::Equal)
    }
}

impl LatticeFn for LatticeTable {
    fn eval(&self, k: u32, side: Side) -> QResult<Trunc<Complex>> {
        let v = self.value(k, side)?;
        Ok(Trunc::certified(
            Complex::new(v.clone(), NumCtx::new(64).zero()),
            0,
        ))
    }
}

/// (z;q)_∞ = Π_{j≥0}(1−zq^j), truncated with relative tail ≤ eps.
///
/// Returns exact 0 as soon as a factor vanishes. The tail is certified via
/// Σ_{j≥J}|z|q^j/(1−|z|q^j) ≤ 2|z|q^J/(1−q) once |z|q^J ≤ 1/2.
pub fn pochhammer_inf(
    z: &Complex,
    q: &Real,
    policy: &PrecisionPolicy,
    eps: &Real,
) -> QResult<Trunc<Complex>> {
    let ctx = policy.ctx();
    if !q.is_positive() || q.ge(&ctx.one()) {
        return Err(QError::QOutOfRange);
    }
    if z.is_zero() {
        return Ok(Trunc::certified(Complex::one(&ctx), 0));
    }
    let one = ctx.one();
    let half = ctx.from_f64(0.5);
    let two = ctx.from_i64(2);
    let one_minus_q = one.sub(q, &ctx);
    let mut acc = Complex::one(&ctx);
    let mut zq = z.clone(); // z·q^j
    let mut j = 0usize;
    loop {
        let mag = zq.abs(&ctx);
        if mag.le(&half) {
            let bound = two.mul(&mag, &ctx).div(&one_minus_q, &ctx);
            if bound.le(eps) {
                return Ok(Trunc::certified(acc, j));
            }
        }
        if j >= policy.max_terms() {
            return Ok(Trunc::new(acc, TailStatus::cap_hit(j)));
        }
        let factor = Complex::one(&ctx).sub(&zq, &ctx);
        if factor.is_zero() {
            return Ok(Trunc::certified(Complex::zero(&ctx), j + 1));
        }
        acc = acc.mul(&factor, &ctx);
        zq = zq.scale(q, &ctx);
        j += 1;
    }
}

/// Finite partial product Π_{j=0}^{n−1}(1−zq^j); n = 0 gives 1.
pub fn pochhammer_fin(z: &Complex, q: &Real, n: usize, ctx: &NumCtx) -> Complex {
    let mut acc = Complex::one(ctx);
    let mut zq = z.clone();
    for _ in 0..n {
        let factor = Complex::one(ctx).sub(&zq, ctx);
        acc = acc.mul(&factor, ctx);
        zq = zq.scale(q, ctx);
    }
    acc
}

/// Shared tail-certified summation Σ_k s_k for summands with (eventually)
/// geometric decay. `summand` is called for k = 0, 1, 2, … in order.
pub(crate) fn jackson_sum_with(
    policy: &PrecisionPolicy,
    eps: &Real,
    mut summand: impl FnMut(u32) -> QResult<Trunc<Complex>>,
) -> QResult<Trunc<Complex>> {
    let ctx = policy.ctx();
    let one = ctx.one();
    let mut sum = Complex::zero(&ctx);
    let mut status = TailStatus::certified(0);
    // Magnitudes of the last three summands for the observed-ratio bound.
    let mut mags: [Option<Real>; 3] = [None, None, None];
    for k in 0..policy.max_terms() as u32 {
        let t = summand(k)?;
        status = status.merge(t.status);
        sum = sum.add(&t.value, &ctx);
        let mag = t.value.abs(&ctx);
        mags = [mags[1].take(), mags[2].take(), Some(mag)];
        if k >= 3 {
            let (m2, m1, m0) = (
                mags[0].as_ref().unwrap(),
                mags[1].as_ref().unwrap(),
                mags[2].as_ref().unwrap(),
            );
            if m0.is_zero() && m1.is_zero() {
                return Ok(Trunc::new(sum, status.merge(TailStatus::certified(k as usize + 1))));
            }
            if m1.is_positive() && m2.is_positive() {
                let r0 = m0.div(m1, &ctx);
                let r1 = m1.div(m2, &ctx);
                let r = r0.max(&r1, &ctx);
                if r.lt(&one) && m0.is_positive() {
                    let tail = m0.mul(&r, &ctx).div(&one.sub(&r, &ctx), &ctx);
                    if tail.le(eps) {
                        return Ok(Trunc::new(
                            sum,
                            status.merge(TailStatus::certified(k as usize + 1)),
                        ));
                    }
                }
            }
        }
    }
    Ok(Trunc::new(sum, TailStatus::cap_hit(policy.max_terms())))
}

/// Two-sided Jackson integral Σ_{k≥0}(f(q^k)+f(−q^k))q^k with certified tail.
pub fn jackson_two_sided(
    f: &dyn LatticeFn,
    q: &Real,
    policy: &PrecisionPolicy,
    eps: &Real,
) -> QResult<Trunc<Complex>> {
    let ctx = policy.ctx();
    if !q.is_positive() || q.ge(&ctx.one()) {
        return Err(QError::QOutOfRange);
    }
    let mut qk = ctx.one();
    jackson_sum_with(policy, eps, move |k| {
        let p = f.eval(k, Side::Plus)?;
        let m = f.eval(k, Side::Minus)?;
        let status = p.status.merge(m.status);
        let v = p.value.add(&m.value, &ctx).scale(&qk, &ctx);
        qk = qk.mul(q, &ctx);
        Ok(Trunc::new(v, status))
    })
}

/// One-sided Jackson integral Σ_{k≥0} f(q^k)q^k with certified tail.
pub fn jackson_one_sided(
    f: &dyn LatticeFn,
    q: &Real,
    policy: &PrecisionPolicy,
    eps: &Real,
) -> QResult<Trunc<Complex>> {
    let ctx = policy.ctx();
    if !q.is_positive() || q.ge(&ctx.one()) {
        return Err(QError::QOutOfRange);
    }
    let mut qk = ctx.one();
    jackson_sum_with(policy, eps, move |k| {
        let p = f.eval(k, Side::Plus)?;
        let v = p.value.scale(&qk, &ctx);
        qk = qk.mul(q, &ctx);
        Ok(Trunc::new(v, p.status))
    })
}

/// Truncation cutoffs for the bilateral sum of h^α.
struct BilateralCutoffs {
    k_plus: usize,
    k_minus: usize,
    certified: bool,
    pole_radius: Real,
}

fn h_alpha_cutoffs(
    z_abs: &Real,
    params: &QParams,
    policy: &PrecisionPolicy,
    eps: &Real,
) -> BilateralCutoffs {
    let ctx = policy.ctx();
    let one = ctx.one();
    let two = ctx.from_i64(2);
    let four = ctx.from_i64(4);
    let q = params.q();
    let qa = params.q_pow_alpha(&ctx);
    let ratio_plus = q.mul(&qa, &ctx); // q^{1+α}
    let ratio_minus = q.div(&qa, &ctx); // q^{1−α}
    let q2 = q.mul(q, &ctx);
    let zsq = z_abs.mul(z_abs, &ctx);
    let half_target = eps.div(&two, &ctx);
    let mut certified = true;

    // k → +∞ side: once q^{2k} ≤ |z|²/2 the term is ≤ (4/|z|)·q^{k(1+α)}.
    let regime_plus = zsq.div(&two, &ctx);
    let first_plus = four.div(z_abs, &ctx);
    let tail_factor_plus = one.div(&one.sub(&ratio_plus, &ctx), &ctx);
    let mut k_plus = 0usize;
    let mut q2k = one.clone();
    let mut rpk = one.clone();
    loop {
        if q2k.le(&regime_plus) {
            let bound = first_plus.mul(&rpk, &ctx).mul(&tail_factor_plus, &ctx);
            if bound.le(&half_target) {
                break;
            }
        }
        if k_plus >= policy.max_terms() {
            certified = false;
            break;
        }
        q2k = q2k.mul(&q2, &ctx);
        rpk = rpk.mul(&ratio_plus, &ctx);
        k_plus += 1;
    }

    // k → −∞ side: once q^{−2k} ≥ 2|z|² the term is ≤ 4|z|·q^{k(1−α)}.
    let regime_minus = two.mul(&zsq, &ctx);
    let first_minus = four.mul(z_abs, &ctx);
    let tail_factor_minus = one.div(&one.sub(&ratio_minus, &ctx), &ctx);
    let mut k_minus = 0usize;
    let mut qm2k = one.clone();
    let mut rmk = one.clone();
    loop {
        if qm2k.ge(&regime_minus) {
            let bound = first_minus.mul(&rmk, &ctx).mul(&tail_factor_minus, &ctx);
            if bound.le(&half_target) {
                break;
            }
        }
        if k_minus >= policy.max_terms() {
            certified = false;
            break;
        }
        qm2k = qm2k.div(&q2, &ctx);
        rmk = rmk.mul(&ratio_minus, &ctx);
        k_minus += 1;
    }

    let pole_radius = q
        .powi(k_plus as i64, &ctx)
        .div(&ctx.from_i64(8), &ctx);
    BilateralCutoffs {
        k_plus,
        k_minus,
        certified,
        pole_radius,
    }
}

/// Minimum distance from z to the lattice points ±q^k, k ∈ ℤ, restricted to
/// the magnitude window around |z|.
fn lattice_distance(z: &Complex, q: &Real, ctx: &NumCtx) -> Real {
    let az = z.abs(ctx);
    if az.is_zero() {
        return az;
    }
    let lg = az.ln(ctx).div(&q.ln(ctx), ctx).to_f64();
    let k0 = if lg.is_finite() {
        crate::numerics::fmath::round(lg) as i64
    } else {
        0
    };
    let mut best: Option<Real> = None;
    for k in (k0 - 2)..=(k0 + 2) {
        let p = q.powi(k, ctx);
        let lattice = Complex::from_real(p, ctx);
        for cand in [z.sub(&lattice, ctx), z.add(&lattice, ctx)] {
            let d = cand.abs(ctx);
            best = Some(match best {
                None => d,
                Some(b) => {
                    if d.lt(&b) {
                        d
                    } else {
                        b
                    }
                }
            });
        }
    }
    best.expect("window is non-empty")
}

/// Bilateral sum h^α(z) = Σ_{k∈ℤ} 2z·q^{k(1+α)}/(z²−q^{2k}), both tails
/// certified ≤ eps/2. Requires −1 < α < 1 and z away from the lattice.
pub fn h_alpha(
    z: &Complex,
    params: &QParams,
    policy: &PrecisionPolicy,
    eps: &Real,
) -> QResult<Trunc<Complex>> {
    let ctx = policy.ctx();
    let one = ctx.one();
    if params.alpha().le(&one.neg()) || params.alpha().ge(&one) {
        return Err(QError::AlphaOutOfRange(
            "bilateral sum requires -1 < alpha < 1",
        ));
    }
    if z.is_zero() {
        return Ok(Trunc::certified(Complex::zero(&ctx), 0));
    }
    let z_abs = z.abs(&ctx);
    let cut = h_alpha_cutoffs(&z_abs, params, policy, eps);
    if lattice_distance(z, params.q(), &ctx).lt(&cut.pole_radius) {
        return Err(QError::PoleProximity);
    }
    let value = h_alpha_partial(z, params, &ctx, cut.k_plus, cut.k_minus);
    let terms = cut.k_plus + cut.k_minus + 1;
    Ok(Trunc::new(
        value,
        if cut.certified {
            TailStatus::certified(terms)
        } else {
            TailStatus::cap_hit(terms)
        },
    ))
}

/// Raw bilateral partial sum Σ_{k=−k_minus}^{k_plus}; the self-consistency
/// oracle for `h_alpha` (two cutoff levels must agree).
pub fn h_alpha_partial(
    z: &Complex,
    params: &QParams,
    ctx: &NumCtx,
    k_plus: usize,
    k_minus: usize,
) -> Complex {
    let q = params.q();
    let qa = params.q_pow_alpha(ctx);
    let ratio_plus = q.mul(&qa, ctx); // q^{1+α}
    let q2 = q.mul(q, ctx);
    let two_z = z.scale(&ctx.from_i64(2), ctx);
    let zsq = z.mul(z, ctx);

    let mut sum = Complex::zero(ctx);
    // k = 0, 1, …, k_plus
    let mut num = one_real(ctx); // q^{k(1+α)}
    let mut q2k = one_real(ctx); // q^{2k}
    for _ in 0..=k_plus {
        let den = zsq.sub(&Complex::from_real(q2k.clone(), ctx), ctx);
        let term = two_z.scale(&num, ctx).div(&den, ctx);
        sum = sum.add(&term, ctx);
        num = num.mul(&ratio_plus, ctx);
        q2k = q2k.mul(&q2, ctx);
    }
    // k = −1, −2, …, −k_minus
    let mut num = one_real(ctx);
    let mut q2k = one_real(ctx);
    for _ in 0..k_minus {
        num = num.div(&ratio_plus, ctx);
        q2k = q2k.div(&q2, ctx);
        let den = zsq.sub(&Complex::from_real(q2k.clone(), ctx), ctx);
        let term = two_z.scale(&num, ctx).div(&den, ctx);
        sum = sum.add(&term, ctx);
    }
    sum
}

fn one_real(ctx: &NumCtx) -> Real {
    ctx.one()
}

/// q^α: exact 1 for α = 0, otherwise exp(α·ln q).
pub fn eval_alpha_power(q: &Real, alpha: &Real, ctx: &NumCtx) -> Real {
    if alpha.is_zero() {
        return ctx.one();
    }
    alpha.mul(&q.ln(ctx), ctx).exp(ctx)
}

/// f(z) = (z^{−2}; q²)_∞.
pub fn f_fn(
    z: &Complex,
    q: &Real,
    policy: &PrecisionPolicy,
    eps: &Real,
) -> QResult<Trunc<Complex>> {
    let ctx = policy.ctx();
    if z.is_zero() {
        return Err(QError::ZeroArgument);
    }
    let z_inv_sq = z.inv(&ctx).powi(2, &ctx);
    let q2 = q.mul(q, &ctx);
    pochhammer_inf(&z_inv_sq, &q2, policy, eps)
}

/// g(z) = (q²z², z^{−2}; q²)_∞.
pub fn g_fn(
    z: &Complex,
    q: &Real,
    policy: &PrecisionPolicy,
    eps: &Real,
) -> QResult<Trunc<Complex>> {
    let ctx = policy.ctx();
    if z.is_zero() {
        return Err(QError::ZeroArgument);
    }
    let two = ctx.from_i64(2);
    let half_eps = eps.div(&two, &ctx);
    let q2 = q.mul(q, &ctx);
    let first_arg = z.mul(z, &ctx).scale(&q2, &ctx);
    let second_arg = z.inv(&ctx).powi(2, &ctx);
    let p1 = pochhammer_inf(&first_arg, &q2, policy, &half_eps)?;
    let p2 = pochhammer_inf(&second_arg, &q2, policy, &half_eps)?;
    Ok(Trunc::new(
        p1.value.mul(&p2.value, &ctx),
        p1.status.merge(p2.status),
    ))
}

/// g_n(z) = f(z)·Π_{j=1}^{n/2}(1−q^{2j}z²); n must be even.
pub fn g_n_fn(
    z: &Complex,
    q: &Real,
    n: usize,
    policy: &PrecisionPolicy,
    eps: &Real,
) -> QResult<Trunc<Complex>> {
    if !n.is_multiple_of(2) {
        return Err(QError::OddDegree { n });
    }
    let ctx = policy.ctx();
    let f = f_fn(z, q, policy, eps)?;
    let q2 = q.mul(q, &ctx);
    let zsq = z.mul(z, &ctx);
    let mut acc = f.value;
    let mut q2j = ctx.one();
    for _ in 0..n / 2 {
        q2j = q2j.mul(&q2, &ctx);
        let factor = Complex::one(&ctx).sub(&zsq.scale(&q2j, &ctx), &ctx);
        acc = acc.mul(&factor, &ctx);
    }
    Ok(Trunc::new(acc, f.status))
}

/// g and g′ together, by differentiating the truncated product; used for
/// residues of the series solutions at the poles t = ±q^{−k}.
pub fn g_with_derivative(
    t: &Complex,
    q: &Real,
    policy: &PrecisionPolicy,
    eps: &Real,
) -> QResult<Trunc<(Complex, Complex)>> {
    let ctx = policy.ctx();
    if t.is_zero() {
        return Err(QError::ZeroArgument);
    }
    let one = ctx.one();
    let half = ctx.from_f64(0.5);
    let two = ctx.from_i64(2);
    let q2 = q.mul(q, &ctx);
    let one_minus_q2 = one.sub(&q2, &ctx);
    let quarter_eps = eps.div(&ctx.from_i64(4), &ctx);

    let mut p = Complex::one(&ctx);
    let mut dp = Complex::zero(&ctx);
    let mut status = TailStatus::certified(0);

    // Family 1: factors 1 − q^{2+2j}t², derivative −2q^{2+2j}t.
    let tsq = t.mul(t, &ctx);
    let mut c = q2.clone(); // q^{2+2j}
    let mut j = 0usize;
    loop {
        let arg_mag = tsq.abs(&ctx).mul(&c, &ctx);
        if arg_mag.le(&half) {
            let bound = two.mul(&arg_mag, &ctx).div(&one_minus_q2, &ctx);
            if bound.le(&quarter_eps) {
                status = status.merge(TailStatus::certified(j));
                break;
            }
        }
        if j >= policy.max_terms() {
            status = status.merge(TailStatus::cap_hit(j));
            break;
        }
        let factor = Complex::one(&ctx).sub(&tsq.scale(&c, &ctx), &ctx);
        let dfactor = t.scale(&two.mul(&c, &ctx).neg(), &ctx);
        dp = dp.mul(&factor, &ctx).add(&p.mul(&dfactor, &ctx), &ctx);
        p = p.mul(&factor, &ctx);
        c = c.mul(&q2, &ctx);
        j += 1;
    }

    // Family 2: factors 1 − q^{2j}t^{−2}, derivative 2q^{2j}t^{−3}.
    let t_inv = t.inv(&ctx);
    let t_inv_sq = t_inv.mul(&t_inv, &ctx);
    let t_inv_cb = t_inv_sq.mul(&t_inv, &ctx);
    let mut d = one.clone(); // q^{2j}
    let mut j = 0usize;
    loop {
        let arg_mag = t_inv_sq.abs(&ctx).mul(&d, &ctx);
        if arg_mag.le(&half) {
            let bound = two.mul(&arg_mag, &ctx).div(&one_minus_q2, &ctx);
            if bound.le(&quarter_eps) {
                status = status.merge(TailStatus::certified(j));
                break;
            }
        }
        if j >= policy.max_terms() {
            status = status.merge(TailStatus::cap_hit(j));
            break;
        }
        let factor = Complex::one(&ctx).sub(&t_inv_sq.scale(&d, &ctx), &ctx);
        let dfactor = t_inv_cb.scale(&two.mul(&d, &ctx), &ctx);
        dp = dp.mul(&factor, &ctx).add(&p.mul(&dfactor, &ctx), &ctx);
        p = p.mul(&factor, &ctx);
        d = d.mul(&q2, &ctx);
        j += 1;
    }

    Ok(Trunc::new((p, dp), status))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::PrecisionPolicy;

    fn setup() -> (PrecisionPolicy, NumCtx) {
        let policy = PrecisionPolicy::with_pow10_eps(256, -40, 20_000).unwrap();
        let ctx = policy.ctx();
        (policy, ctx)
    }

    fn creal(ctx: &NumCtx, v: f64) -> Complex {
        Complex::from_real(ctx.from_f64(v), ctx)
    }

    #[test]
    fn pochhammer_trivial_cases() {
        let (policy, ctx) = setup();
        let q = ctx.from_f64(0.5);
        let eps = policy.tail_eps().clone();
        // empty-effect product at z = 0
        let one = pochhammer_inf(&Complex::zero(&ctx), &q, &policy, &eps).unwrap();
        assert!(one.value.sub(&Complex::one(&ctx), &ctx).is_zero());
        // first factor vanishes at z = 1
        let zero = pochhammer_inf(&Complex::one(&ctx), &q, &policy, &eps).unwrap();
        assert!(zero.value.is_zero());
        assert!(zero.status.certified);
    }

    #[test]
    fn pochhammer_q_half() {
        let (policy, ctx) = setup();
        let q = ctx.from_f64(0.5);
        let eps = policy.tail_eps().clone();
        let v = pochhammer_inf(&creal(&ctx, 0.5), &q, &policy, &eps)
            .unwrap()
            .require_certified()
            .unwrap();
        // (q;q)_∞ at q = 1/2
        assert!((v.re.to_f64() - 0.2887880950866024).abs() < 1e-15);
        assert!(v.im.is_zero());
        // refinement stability: halving eps moves the value by ≤ 2·eps
        let halved = policy.halved_eps();
        let v2 = pochhammer_inf(&creal(&ctx, 0.5), &q, &halved, halved.tail_eps())
            .unwrap()
            .require_certified()
            .unwrap();
        let delta = v.sub(&v2, &ctx).abs(&ctx);
        let two_eps = policy.tail_eps().mul(&ctx.from_i64(2), &ctx);
        assert!(delta.le(&two_eps));
    }

    #[test]
    fn pochhammer_fin_cases() {
        let (_, ctx) = setup();
        let q = ctx.from_f64(0.5);
        let v = pochhammer_fin(&creal(&ctx, 5.0), &q, 0, &ctx);
        assert!(v.sub(&Complex::one(&ctx), &ctx).is_zero());
        let v = pochhammer_fin(&Complex::one(&ctx), &q, 2, &ctx);
        assert!(v.is_zero());
        let v = pochhammer_fin(&creal(&ctx, 0.5), &q, 2, &ctx);
        assert_eq!(v.re.to_f64(), 0.375);
    }

    #[test]
    fn jackson_closed_forms() {
        let (policy, ctx) = setup();
        let q = ctx.from_f64(0.5);
        let eps = policy.tail_eps().clone();
        // f ≡ 1 → 2/(1−q) = 4
        let f_one = FnLattice(|_k, _s| {
            let c = NumCtx::new(256);
            Ok(Trunc::certified(Complex::one(&c), 0))
        });
        let v = jackson_two_sided(&f_one, &q, &policy, &eps).unwrap();
        assert!((v.value.re.to_f64() - 4.0).abs() < 1e-30);
        // f(x) = x → odd, cancels to exactly 0
        let f_x = FnLattice(|k, s| {
            let c = NumCtx::new(256);
            let x = c.from_f64(0.5).powi(k as i64, &c);
            let x = if s == Side::Minus { x.neg() } else { x };
            Ok(Trunc::certified(Complex::from_real(x, &c), 0))
        });
        let v = jackson_two_sided(&f_x, &q, &policy, &eps).unwrap();
        assert!(v.value.is_zero());
        assert!(v.status.certified);
        // f(x) = x² → 2/(1−q³) = 16/7
        let f_x2 = FnLattice(|k, _s| {
            let c = NumCtx::new(256);
            let x = c.from_f64(0.25).powi(k as i64, &c);
            Ok(Trunc::certified(Complex::from_real(x, &c), 0))
        });
        let v = jackson_two_sided(&f_x2, &q, &policy, &eps).unwrap();
        assert!((v.value.re.to_f64() - 16.0 / 7.0).abs() < 1e-30);
        // one-sided: f ≡ 1 → 2, f(x) = x → 4/3, f ≡ 0 → 0
        let v = jackson_one_sided(&f_one, &q, &policy, &eps).unwrap();
        assert!((v.value.re.to_f64() - 2.0).abs() < 1e-30);
        let v = jackson_one_sided(&f_x, &q, &policy, &eps).unwrap();
        assert!((v.value.re.to_f64() - 4.0 / 3.0).abs() < 1e-30);
        let f_zero = FnLattice(|_k, _s| {
            let c = NumCtx::new(256);
            Ok(Trunc::certified(Complex::zero(&c), 0))
        });
        let v = jackson_one_sided(&f_zero, &q, &policy, &eps).unwrap();
        assert!(v.value.is_zero());
    }

    #[test]
    fn h_alpha_parity_and_shift() {
        let (policy, ctx) = setup();
        let q = ctx.from_f64(0.5);
        let params = QParams::new(q.clone(), ctx.zero(), &ctx).unwrap();
        let eps = policy.tail_eps().clone();
        let z = Complex::new(ctx.from_f64(0.3), ctx.from_f64(0.7));
        let h1 = h_alpha(&z, &params, &policy, &eps).unwrap().value;
        let h2 = h_alpha(&z.neg(), &params, &policy, &eps).unwrap().value;
        // odd in z, bitwise
        assert!(h1.add(&h2, &ctx).is_zero());

        // h^0(qz) = h^0(z)
        let z = Complex::new(ctx.from_f64(1.3), ctx.from_f64(0.4));
        let hz = h_alpha(&z, &params, &policy, &eps).unwrap().value;
        let hqz = h_alpha(&z.scale(&q, &ctx), &params, &policy, &eps)
            .unwrap()
            .value;
        let diff = hz.sub(&hqz, &ctx).abs(&ctx);
        let four_eps = eps.mul(&ctx.from_i64(4), &ctx);
        assert!(diff.le(&four_eps));
    }

    #[test]
    fn h_alpha_two_truncation_levels_agree() {
        let (policy, ctx) = setup();
        let q = ctx.from_f64(0.5);
        let params = QParams::new(q, ctx.zero(), &ctx).unwrap();
        let eps = policy.tail_eps().clone();
        let z = creal(&ctx, 1.5);
        let cut = super::h_alpha_cutoffs(&z.abs(&ctx), &params, &policy, &eps);
        let a = h_alpha_partial(&z, &params, &ctx, cut.k_plus, cut.k_minus);
        let b = h_alpha_partial(&z, &params, &ctx, cut.k_plus + 10, cut.k_minus + 10);
        let delta = a.sub(&b, &ctx).abs(&ctx);
        let two_eps = eps.mul(&ctx.from_i64(2), &ctx);
        assert!(delta.le(&two_eps));
        assert!(!a.re.is_zero());
    }

    #[test]
    fn h_alpha_q_shift_general_alpha() {
        let (policy, ctx) = setup();
        let q = ctx.from_f64(0.5);
        let eps = policy.tail_eps().clone();
        for alpha in [-0.5f64, 0.5] {
            let params = QParams::new(q.clone(), ctx.from_f64(alpha), &ctx).unwrap();
            let z = Complex::new(ctx.from_f64(1.3), ctx.from_f64(0.4));
            let hz = h_alpha(&z, &params, &policy, &eps).unwrap().value;
            let hqz = h_alpha(&z.scale(&q, &ctx), &params, &policy, &eps)
                .unwrap()
                .value;
            let qa = params.q_pow_alpha(&ctx);
            let resid = hqz.sub(&hz.scale(&qa, &ctx), &ctx).abs(&ctx);
            let tol = eps.mul(&ctx.from_i64(8), &ctx);
            assert!(resid.le(&tol), "alpha = {alpha}");
        }
    }

    #[test]
    fn h_alpha_domain_and_poles() {
        let (policy, ctx) = setup();
        let q = ctx.from_f64(0.5);
        let eps = policy.tail_eps().clone();
        let bad = QParams::new(q.clone(), ctx.from_f64(1.5), &ctx).unwrap();
        let z = creal(&ctx, 1.5);
        assert_eq!(
            h_alpha(&z, &bad, &policy, &eps).unwrap_err(),
            QError::AlphaOutOfRange("bilateral sum requires -1 < alpha < 1")
        );
        let params = QParams::new(q, ctx.zero(), &ctx).unwrap();
        let on_pole = creal(&ctx, 0.25);
        assert_eq!(
            h_alpha(&on_pole, &params, &policy, &eps).unwrap_err(),
            QError::PoleProximity
        );
    }

    #[test]
    fn f_g_functional_equations() {
        let (policy, ctx) = setup();
        let q = ctx.from_f64(0.5);
        let eps = policy.tail_eps().clone();
        let four_eps = eps.mul(&ctx.from_i64(4), &ctx);

        // f(1) = f(−1) = 0
        let v = f_fn(&creal(&ctx, 1.0), &q, &policy, &eps).unwrap().value;
        assert!(v.is_zero());
        let v = f_fn(&creal(&ctx, -1.0), &q, &policy, &eps).unwrap().value;
        assert!(v.is_zero());
        // f(2) = (1/4;1/4)_∞
        let v = f_fn(&creal(&ctx, 2.0), &q, &policy, &eps).unwrap().value;
        assert!((v.re.to_f64() - 0.6885375371).abs() < 1e-9);

        // f(qz) = (1 − 1/(q²z²))·f(z) at z = 2.7
        let z = creal(&ctx, 2.7);
        let fz = f_fn(&z, &q, &policy, &eps).unwrap().value;
        let fqz = f_fn(&z.scale(&q, &ctx), &q, &policy, &eps).unwrap().value;
        let qz = z.scale(&q, &ctx);
        let factor = Complex::one(&ctx).sub(&qz.mul(&qz, &ctx).inv(&ctx), &ctx);
        let resid = fqz.sub(&factor.mul(&fz, &ctx), &ctx).abs(&ctx);
        assert!(resid.le(&four_eps));

        // g(1) = 0
        let v = g_fn(&creal(&ctx, 1.0), &q, &policy, &eps).unwrap().value;
        assert!(v.is_zero());
        // g(qz) = −q^{−2}z^{−2} g(z) at z = 1.6+0.2i
        let z = Complex::new(ctx.from_f64(1.6), ctx.from_f64(0.2));
        let gz = g_fn(&z, &q, &policy, &eps).unwrap().value;
        let gqz = g_fn(&z.scale(&q, &ctx), &q, &policy, &eps).unwrap().value;
        let factor = z
            .mul(&z, &ctx)
            .scale(&q.mul(&q, &ctx), &ctx)
            .inv(&ctx)
            .neg();
        let resid = gqz.sub(&factor.mul(&gz, &ctx), &ctx).abs(&ctx);
        assert!(resid.le(&four_eps));

        // g(2) stable under eps halving
        let g1 = g_fn(&creal(&ctx, 2.0), &q, &policy, &eps).unwrap().value;
        let half = policy.halved_eps();
        let g2 = g_fn(&creal(&ctx, 2.0), &q, &half, half.tail_eps())
            .unwrap()
            .value;
        let delta = g1.sub(&g2, &ctx).abs(&ctx);
        let two_eps = eps.mul(&ctx.from_i64(2), &ctx);
        assert!(delta.le(&two_eps));
    }

    #[test]
    fn g_n_identities() {
        let (policy, ctx) = setup();
        let q = ctx.from_f64(0.5);
        let eps = policy.tail_eps().clone();

        // n = 0: g_0 = f
        let z = Complex::new(ctx.from_f64(1.1), ctx.from_f64(0.3));
        let g0 = g_n_fn(&z, &q, 0, &policy, &eps).unwrap().value;
        let f = f_fn(&z, &q, &policy, &eps).unwrap().value;
        assert!(g0.sub(&f, &ctx).is_zero());

        // odd n rejected
        assert_eq!(
            g_n_fn(&z, &q, 3, &policy, &eps).unwrap_err(),
            QError::OddDegree { n: 3 }
        );

        // (q^{n/2}z)^n f(q^{n/2}z) = i^n q^{(n/2)(n/2−1)} g_n(z), n = 4, z = 1.7
        let n = 4usize;
        let z = creal(&ctx, 1.7);
        let qn2 = q.powi((n / 2) as i64, &ctx);
        let w = z.scale(&qn2, &ctx);
        let lhs = w.powi(n as i64, &ctx).mul(
            &f_fn(&w, &q, &policy, &eps).unwrap().value,
            &ctx,
        );
        let sign = if (n / 2).is_multiple_of(2) { 1 } else { -1 };
        let c = q
            .powi(((n / 2) * (n / 2 - 1)) as i64, &ctx)
            .mul(&ctx.from_i64(sign), &ctx);
        let rhs = g_n_fn(&z, &q, n, &policy, &eps)
            .unwrap()
            .value
            .scale(&c, &ctx);
        let resid = lhs.sub(&rhs, &ctx).abs(&ctx);
        let tol = eps.mul(&ctx.from_i64(16), &ctx);
        assert!(resid.le(&tol));

        // g(z)/g_n(z) = (q^{n+2}z²; q²)_∞ at z = 0.9+0.1i, n = 6
        let n = 6usize;
        let z = Complex::new(ctx.from_f64(0.9), ctx.from_f64(0.1));
        let g = g_fn(&z, &q, &policy, &eps).unwrap().value;
        let gn = g_n_fn(&z, &q, n, &policy, &eps).unwrap().value;
        let ratio = g.div(&gn, &ctx);
        let arg = z
            .mul(&z, &ctx)
            .scale(&q.powi((n + 2) as i64, &ctx), &ctx);
        let q2 = q.mul(&q, &ctx);
        let rhs = pochhammer_inf(&arg, &q2, &policy, &eps).unwrap().value;
        let resid = ratio.sub(&rhs, &ctx).abs(&ctx);
        let tol = eps.mul(&ctx.from_i64(4), &ctx);
        assert!(resid.le(&tol));
    }

    #[test]
    fn parity_of_f_g() {
        let (policy, ctx) = setup();
        let q = ctx.from_f64(0.5);
        let eps = policy.tail_eps().clone();
        let z = Complex::new(ctx.from_f64(1.2), ctx.from_f64(-0.5));
        let f1 = f_fn(&z, &q, &policy, &eps).unwrap().value;
        let f2 = f_fn(&z.neg(), &q, &policy, &eps).unwrap().value;
        assert!(f1.sub(&f2, &ctx).is_zero());
        let g1 = g_fn(&z, &q, &policy, &eps).unwrap().value;
        let g2 = g_fn(&z.neg(), &q, &policy, &eps).unwrap().value;
        assert!(g1.sub(&g2, &ctx).is_zero());
    }

    #[test]
    fn term_cap_is_reported_not_silent() {
        // 8 terms cannot certify a q = 0.9 product at 1e-30
        let policy = PrecisionPolicy::with_pow10_eps(128, -30, 8).unwrap();
        let ctx = policy.ctx();
        let q = ctx.from_f64(0.9);
        let r = pochhammer_inf(&creal(&ctx, 0.5), &q, &policy, policy.tail_eps()).unwrap();
        assert!(!r.status.certified);
        assert_eq!(r.status.terms, 8);
        assert!(matches!(
            r.require_certified(),
            Err(QError::TruncationCap { terms: 8 })
        ));
    }

    #[test]
    fn lattice_table_errors() {
        let ctx = NumCtx::new(64);
        let t = LatticeTable::new(
            alloc::vec![ctx.one(), ctx.one()],
            alloc::vec![ctx.one(), ctx.one()],
        )
        .unwrap();
        assert_eq!(t.k_max(), 1);
        assert!(t.value(1, Side::Plus).is_ok());
        assert_eq!(t.value(2, Side::Minus).unwrap_err(), QError::TableExhausted { k: 2 });
        assert!(t.is_even());
    }
}
