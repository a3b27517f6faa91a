//! Moments, three-term recurrence data (a_n, b_n, γ_n), polynomial
//! evaluation, orthogonality residuals and smallest zeros — with an exact
//! Hankel-determinant oracle independent of the Gram–Schmidt construction.

use alloc::vec::Vec;
use num_traits::{One, Zero};

use crate::error::{QError, QResult};
use crate::numerics::{
    rat_from_i64, rat_powi, Complex, NumCtx, NumField, PrecisionPolicy, RatField, Rational, Real,
    RealField, TailStatus, Trunc,
};
use crate::qcalc::{eval_alpha_power, jackson_sum_with, Side};
use crate::weights::{alpha_as_integer, eval_weight_lattice, WeightSpec};

/// Moments mu\[m\] = ∫ x^m |x|^α w(x) d_q x over \[−1,1\], m = 0..=2·n_max.
#[derive(Clone, Debug)]
pub struct MomentTable<E> {
    pub mu: Vec<E>,
    pub exact: bool,
    pub even_weight: bool,
    pub status: TailStatus,
}

impl<E> MomentTable<E> {
    pub fn n_max(&self) -> usize {
        (self.mu.len() - 1) / 2
    }
}

/// Exact rational moments for polynomial weights with integer α ≥ 0:
/// sums of closed geometric forms 2/(1−q^{m+d+α+1}) over even-total terms.
pub fn moments_exact(spec: &WeightSpec, n_max: usize) -> QResult<MomentTable<Rational>> {
    let poly = spec.poly_form().ok_or(QError::NotExact)?;
    let alpha = alpha_as_integer(spec).ok_or(QError::NotExact)?;
    if alpha < 0 {
        // alpha > −1 and integer means alpha ≥ 0
        return Err(QError::DivergentMoment);
    }
    let q = &spec.q;
    let mut mu = Vec::with_capacity(2 * n_max + 1);
    for m in 0..=(2 * n_max) {
        let mut acc = Rational::zero();
        for (c, d) in &poly.terms {
            let total = m + *d as usize;
            if total.is_multiple_of(2) {
                let e = (total as i64) + alpha + 1;
                acc += c * rat_from_i64(2) / (Rational::one() - rat_powi(q, e));
            }
        }
        mu.push(acc);
    }
    Ok(MomentTable {
        mu,
        exact: true,
        even_weight: spec.is_even(),
        status: TailStatus::certified(0),
    })
}

/// Moments at working precision with certified Jackson tails. Polynomial
/// weights with integer α take the exact path and convert.
pub fn moments(
    spec: &WeightSpec,
    n_max: usize,
    policy: &PrecisionPolicy,
    eps: &Real,
) -> QResult<MomentTable<Real>> {
    let ctx = policy.ctx();
    if spec.alpha <= rat_from_i64(-1) {
        return Err(QError::DivergentMoment);
    }
    if spec.exact_moments_available() {
        let exact = moments_exact(spec, n_max)?;
        return Ok(MomentTable {
            mu: exact.mu.iter().map(|r| ctx.from_rational(r)).collect(),
            exact: true,
            even_weight: exact.even_weight,
            status: TailStatus::certified(0),
        });
    }
    let q = ctx.from_rational(&spec.q);
    let alpha = ctx.from_rational(&spec.alpha);
    let q_alpha = eval_alpha_power(&q, &alpha, &ctx);
    let even = spec.is_even();
    let mut mu = Vec::with_capacity(2 * n_max + 1);
    let mut status = TailStatus::certified(0);
    for m in 0..=(2 * n_max) {
        if even && !m.is_multiple_of(2) {
            mu.push(ctx.zero());
            continue;
        }
        // summand_k = q^{k(m+α+1)}·(w(q^k) + (−1)^m w(−q^k))
        let step = q.powi((m + 1) as i64, &ctx).mul(&q_alpha, &ctx);
        let mut prefac = ctx.one();
        let s = jackson_sum_with(policy, eps, |k| {
            let wp = eval_weight_lattice(spec, k, Side::Plus, policy, eps)?;
            let wm = eval_weight_lattice(spec, k, Side::Minus, policy, eps)?;
            let wsum = if m.is_multiple_of(2) {
                wp.value.add(&wm.value, &ctx)
            } else {
                wp.value.sub(&wm.value, &ctx)
            };
            let v = wsum.scale(&prefac, &ctx);
            prefac = prefac.mul(&step, &ctx);
            Ok(Trunc::new(v, wp.status.merge(wm.status)))
        })?;
        status = status.merge(s.status);
        // weights are real-valued on the lattice
        mu.push(s.value.re);
    }
    Ok(MomentTable {
        mu,
        exact: false,
        even_weight: even,
        status,
    })
}

/// Recurrence data of the monic orthogonal polynomials: a_n (n = 1..=n_max),
/// b_n (n = 0..n_max−1), γ_n (n = 0..=n_max) and the monic coefficient rows.
#[derive(Clone, Debug)]
pub struct RecurrenceTable<E> {
    n_max: usize,
    a: Vec<E>,
    b: Vec<E>,
    gamma: Vec<E>,
    coeffs: Vec<Vec<E>>,
}

impl<E: Clone> RecurrenceTable<E> {
    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// a_n for 1 ≤ n ≤ n_max.
    pub fn a(&self, n: usize) -> QResult<&E> {
        if n == 0 || n > self.n_max {
            return Err(QError::IndexOutOfRange {
                n,
                max: self.n_max,
            });
        }
        Ok(&self.a[n - 1])
    }

    /// b_n for 0 ≤ n ≤ n_max−1.
    pub fn b(&self, n: usize) -> QResult<&E> {
        self.b.get(n).ok_or(QError::IndexOutOfRange {
            n,
            max: self.n_max.saturating_sub(1),
        })
    }

    /// γ_n for 0 ≤ n ≤ n_max.
    pub fn gamma(&self, n: usize) -> QResult<&E> {
        self.gamma.get(n).ok_or(QError::IndexOutOfRange {
            n,
            max: self.n_max,
        })
    }

    /// Monic coefficients of P_n, constant term first.
    pub fn coeffs(&self, n: usize) -> QResult<&[E]> {
        self.coeffs
            .get(n)
            .map(|v| v.as_slice())
            .ok_or(QError::IndexOutOfRange {
                n,
                max: self.n_max,
            })
    }

    pub fn a_all(&self) -> &[E] {
        &self.a
    }

    pub fn b_all(&self) -> &[E] {
        &self.b
    }

    pub fn gamma_all(&self) -> &[E] {
        &self.gamma
    }
}

/// Gram–Schmidt via the three-term recurrence, inner products by coefficient
/// convolution against the moment table. Generic over exact rationals and
/// working-precision reals.
pub fn recurrence_stieltjes<F: NumField>(
    field: &F,
    moms: &MomentTable<F::El>,
    n_max: usize,
) -> QResult<RecurrenceTable<F::El>> {
    if moms.mu.len() < 2 * n_max + 1 {
        return Err(QError::IndexOutOfRange {
            n: 2 * n_max,
            max: moms.mu.len().saturating_sub(1),
        });
    }
    // ⟨x^shift·P, Q⟩ by convolution; also returns the largest |term| as the
    // cancellation scale for the degeneracy floor.
    let ip = |ci: &[F::El], cj: &[F::El], shift: usize| -> (F::El, F::El) {
        let mut acc = field.zero();
        let mut scale = field.zero();
        for (i, a) in ci.iter().enumerate() {
            if field.is_zero(a) {
                continue;
            }
            for (j, b) in cj.iter().enumerate() {
                if field.is_zero(b) {
                    continue;
                }
                let term = field.mul(&field.mul(a, b), &moms.mu[i + j + shift]);
                let t_abs = field.abs(&term);
                if field.gt(&t_abs, &scale) {
                    scale = t_abs;
                }
                acc = field.add(&acc, &term);
            }
        }
        (acc, scale)
    };

    let mut coeffs: Vec<Vec<F::El>> = Vec::with_capacity(n_max + 1);
    coeffs.push(alloc::vec![field.one()]);
    let mut gamma: Vec<F::El> = Vec::with_capacity(n_max + 1);
    let mut b: Vec<F::El> = Vec::with_capacity(n_max);
    let mut a: Vec<F::El> = Vec::with_capacity(n_max);

    for n in 0..=n_max {
        let cn = coeffs[n].clone();
        let (g, scale) = ip(&cn, &cn, 0);
        if field.negligible(&g, &scale) {
            return Err(QError::DegenerateMeasure { n });
        }
        gamma.push(g.clone());
        if n >= 1 {
            a.push(field.div(&gamma[n], &gamma[n - 1]));
        }
        if n == n_max {
            break;
        }
        let (xpp, _) = ip(&cn, &cn, 1);
        let bn = field.div(&xpp, &g);
        b.push(bn.clone());
        // P_{n+1} = (x − b_n)·P_n − a_n·P_{n−1}
        let mut next = alloc::vec![field.zero(); n + 2];
        for (i, c) in cn.iter().enumerate() {
            next[i + 1] = field.add(&next[i + 1], c);
            next[i] = field.sub(&next[i], &field.mul(&bn, c));
        }
        if n >= 1 {
            let an = field.div(&gamma[n], &gamma[n - 1]);
            for (i, c) in coeffs[n - 1].iter().enumerate() {
                next[i] = field.sub(&next[i], &field.mul(&an, c));
            }
        }
        coeffs.push(next);
    }

    Ok(RecurrenceTable {
        n_max,
        a,
        b,
        gamma,
        coeffs,
    })
}

/// Exact determinant of a rational matrix by Gaussian elimination.
#[allow(clippy::needless_range_loop)]
fn rational_det(mut m: Vec<Vec<Rational>>) -> Rational {
    let n = m.len();
    let mut det = Rational::one();
    for col in 0..n {
        let pivot_row = (col..n).find(|&r| !m[r][col].is_zero());
        let Some(p) = pivot_row else {
            return Rational::zero();
        };
        if p != col {
            m.swap(p, col);
            det = -det;
        }
        let pivot = m[col][col].clone();
        det *= &pivot;
        for r in (col + 1)..n {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] / &pivot;
            for c in col..n {
                let sub = &factor * &m[col][c];
                m[r][c] -= sub;
            }
        }
    }
    det
}

/// Independent construction from Hankel determinants D_n = det(mu[i+j]):
/// γ_n = D_{n+1}/D_n, monic coefficients from bordered minors. Exact only.
#[allow(clippy::needless_range_loop)]
pub fn hankel_oracle(moms: &MomentTable<Rational>, n_max: usize) -> QResult<RecurrenceTable<Rational>> {
    if moms.mu.len() < 2 * n_max + 1 {
        return Err(QError::IndexOutOfRange {
            n: 2 * n_max,
            max: moms.mu.len().saturating_sub(1),
        });
    }
    let mu = &moms.mu;
    let hankel = |n: usize| -> Rational {
        if n == 0 {
            return Rational::one();
        }
        let m: Vec<Vec<Rational>> = (0..n)
            .map(|i| (0..n).map(|j| mu[i + j].clone()).collect())
            .collect();
        rational_det(m)
    };
    let mut d = Vec::with_capacity(n_max + 2);
    for n in 0..=(n_max + 1) {
        let dn = hankel(n);
        if n >= 1 && dn.is_zero() {
            return Err(QError::DegenerateMeasure { n: n - 1 });
        }
        d.push(dn);
    }
    let gamma: Vec<Rational> = (0..=n_max).map(|n| &d[n + 1] / &d[n]).collect();
    let a: Vec<Rational> = (1..=n_max).map(|n| &gamma[n] / &gamma[n - 1]).collect();

    // coeff of x^i in P_n: (−1)^{i+n}·M_i/D_n where M_i deletes row i of the
    // (n+1)×n moment block (rows mu[r..r+n−1], r = 0..=n).
    let mut coeffs: Vec<Vec<Rational>> = Vec::with_capacity(n_max + 1);
    coeffs.push(alloc::vec![Rational::one()]);
    for n in 1..=n_max {
        let mut row = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let m: Vec<Vec<Rational>> = (0..=n)
                .filter(|&r| r != i)
                .map(|r| (0..n).map(|c| mu[r + c].clone()).collect())
                .collect();
            let minor = rational_det(m);
            let sign = if (i + n).is_multiple_of(2) {
                Rational::one()
            } else {
                -Rational::one()
            };
            row.push(sign * minor / &d[n]);
        }
        coeffs.push(row);
    }

    // b_n = coeffs[n][n−1] − coeffs[n+1][n]
    let mut b = Vec::with_capacity(n_max);
    for n in 0..n_max {
        let lower = if n == 0 {
            Rational::zero()
        } else {
            coeffs[n][n - 1].clone()
        };
        b.push(lower - &coeffs[n + 1][n]);
    }

    Ok(RecurrenceTable {
        n_max,
        a,
        b,
        gamma,
        coeffs,
    })
}

/// P_n(z) by the forward three-term recurrence from P_0 = 1, P_1 = z − b_0.
pub fn eval_poly(
    rec: &RecurrenceTable<Real>,
    n: usize,
    z: &Complex,
    ctx: &NumCtx,
) -> QResult<Complex> {
    if n > rec.n_max {
        return Err(QError::IndexOutOfRange { n, max: rec.n_max });
    }
    let mut prev = Complex::one(ctx);
    if n == 0 {
        return Ok(prev);
    }
    let mut cur = z.sub(&Complex::from_real(rec.b[0].clone(), ctx), ctx);
    for k in 1..n {
        let bk = Complex::from_real(rec.b[k].clone(), ctx);
        let ak = rec.a[k - 1].clone();
        let next = z
            .sub(&bk, ctx)
            .mul(&cur, ctx)
            .sub(&prev.scale(&ak, ctx), ctx);
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Real-argument evaluation (sign scans, lattice sums).
pub fn eval_poly_real(
    rec: &RecurrenceTable<Real>,
    n: usize,
    x: &Real,
    ctx: &NumCtx,
) -> QResult<Real> {
    if n > rec.n_max {
        return Err(QError::IndexOutOfRange { n, max: rec.n_max });
    }
    let mut prev = ctx.one();
    if n == 0 {
        return Ok(prev);
    }
    let mut cur = x.sub(&rec.b[0], ctx);
    for k in 1..n {
        let next = x
            .sub(&rec.b[k], ctx)
            .mul(&cur, ctx)
            .sub(&prev.mul(&rec.a[k - 1], ctx), ctx);
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Exact evaluation on the rational table.
pub fn eval_poly_rational(
    rec: &RecurrenceTable<Rational>,
    n: usize,
    x: &Rational,
) -> QResult<Rational> {
    if n > rec.n_max {
        return Err(QError::IndexOutOfRange { n, max: rec.n_max });
    }
    let mut prev = Rational::one();
    if n == 0 {
        return Ok(prev);
    }
    let mut cur = x - &rec.b[0];
    for k in 1..n {
        let next = (x - &rec.b[k]) * &cur - &rec.a[k - 1] * &prev;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Direct evaluation from the monic coefficient row (the dual path).
pub fn eval_poly_coeffs(
    rec: &RecurrenceTable<Real>,
    n: usize,
    z: &Complex,
    ctx: &NumCtx,
) -> QResult<Complex> {
    let row = rec.coeffs(n)?;
    let mut acc = Complex::zero(ctx);
    for c in row.iter().rev() {
        acc = acc.mul(z, ctx).add(&Complex::from_real(c.clone(), ctx), ctx);
    }
    Ok(acc)
}

/// |⟨P_n, P_m⟩ − γ_n δ_{nm}| / √(γ_n γ_m), the inner product re-summed on the
/// lattice with certified tails (independent of the moment convolution path).
pub fn orthogonality_residual(
    rec: &RecurrenceTable<Real>,
    spec: &WeightSpec,
    n: usize,
    m: usize,
    policy: &PrecisionPolicy,
    eps: &Real,
) -> QResult<Trunc<Real>> {
    let ctx = policy.ctx();
    if n > rec.n_max || m > rec.n_max {
        return Err(QError::IndexOutOfRange {
            n: n.max(m),
            max: rec.n_max,
        });
    }
    let q = ctx.from_rational(&spec.q);
    let alpha = ctx.from_rational(&spec.alpha);
    let q_alpha = eval_alpha_power(&q, &alpha, &ctx);
    let step = q.mul(&q_alpha, &ctx); // q^{1+α}
    let mut xk = ctx.one();
    let mut prefac = ctx.one();
    let s = jackson_sum_with(policy, eps, |k| {
        let wp = eval_weight_lattice(spec, k, Side::Plus, policy, eps)?;
        let wm = eval_weight_lattice(spec, k, Side::Minus, policy, eps)?;
        let pp = eval_poly_real(rec, n, &xk, &ctx)?.mul(&eval_poly_real(rec, m, &xk, &ctx)?, &ctx);
        let xm = xk.neg();
        let pm = eval_poly_real(rec, n, &xm, &ctx)?.mul(&eval_poly_real(rec, m, &xm, &ctx)?, &ctx);
        let v = pp
            .mul(&wp.value.re, &ctx)
            .add(&pm.mul(&wm.value.re, &ctx), &ctx)
            .mul(&prefac, &ctx);
        xk = xk.mul(&q, &ctx);
        prefac = prefac.mul(&step, &ctx);
        Ok(Trunc::new(
            Complex::from_real(v, &ctx),
            wp.status.merge(wm.status),
        ))
    })?;
    let mut dev = s.value.re;
    if n == m {
        dev = dev.sub(&rec.gamma[n], &ctx);
    }
    let norm = rec.gamma[n].mul(&rec.gamma[m], &ctx).abs().sqrt(&ctx);
    Ok(Trunc::new(dev.abs().div(&norm, &ctx), s.status))
}

/// Smallest positive zero of P_n: sign scan over the geometric grid q^{j/8}
/// (j descending, x ascending from below the zero scale), then bisection to
/// relative width 2^{−work_bits/2}.
pub fn smallest_positive_zero(
    rec: &RecurrenceTable<Real>,
    n: usize,
    q: &Rational,
    policy: &PrecisionPolicy,
) -> QResult<Real> {
    if n == 0 || n > rec.n_max {
        return Err(QError::IndexOutOfRange { n, max: rec.n_max });
    }
    let ctx = policy.ctx();
    let qr = ctx.from_rational(q);
    // q^{1/8} by three square roots
    let r = qr.sqrt(&ctx).sqrt(&ctx).sqrt(&ctx);
    // start well below the q^{n/2} zero scale
    let j_hi = 8 * (n / 2 + 6);
    let mut x_prev = r.powi(j_hi as i64, &ctx);
    let mut s_prev = eval_poly_real(rec, n, &x_prev, &ctx)?;
    if s_prev.is_zero() {
        return Ok(x_prev);
    }
    let mut bracket: Option<(Real, Real)> = None;
    for j in (0..j_hi).rev() {
        let x = r.powi(j as i64, &ctx);
        let s = eval_poly_real(rec, n, &x, &ctx)?;
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
    let mut f_lo = eval_poly_real(rec, n, &lo, &ctx)?;
    let tol = ctx.pow2(-((policy.work_bits() / 2) as i64));
    let two = ctx.from_i64(2);
    loop {
        let mid = lo.add(&hi, &ctx).div(&two, &ctx);
        let width = hi.sub(&lo, &ctx).abs().div(&mid, &ctx);
        if width.le(&tol) {
            return Ok(mid);
        }
        let f_mid = eval_poly_real(rec, n, &mid, &ctx)?;
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

/// Convert an exact table to working precision.
pub fn table_to_real(rec: &RecurrenceTable<Rational>, ctx: &NumCtx) -> RecurrenceTable<Real> {
    RecurrenceTable {
        n_max: rec.n_max,
        a: rec.a.iter().map(|r| ctx.from_rational(r)).collect(),
        b: rec.b.iter().map(|r| ctx.from_rational(r)).collect(),
        gamma: rec.gamma.iter().map(|r| ctx.from_rational(r)).collect(),
        coeffs: rec
            .coeffs
            .iter()
            .map(|row| row.iter().map(|r| ctx.from_rational(r)).collect())
            .collect(),
    }
}

/// Full real-mode pipeline: moments then Stieltjes recurrence.
pub fn recurrence_from_weight(
    spec: &WeightSpec,
    n_max: usize,
    policy: &PrecisionPolicy,
) -> QResult<RecurrenceTable<Real>> {
    let moms = moments(spec, n_max, policy, policy.tail_eps())?;
    let field = RealField::new(policy.ctx());
    recurrence_stieltjes(&field, &moms, n_max)
}

/// Full exact pipeline for polynomial weights with integer α.
pub fn recurrence_exact(spec: &WeightSpec, n_max: usize) -> QResult<RecurrenceTable<Rational>> {
    let moms = moments_exact(spec, n_max)?;
    recurrence_stieltjes(&RatField, &moms, n_max)
}

/// Exact recurrence directly from a moment vector (folding identities).
pub fn recurrence_exact_from_moments(
    mu: Vec<Rational>,
    n_max: usize,
    even: bool,
) -> QResult<RecurrenceTable<Rational>> {
    let moms = MomentTable {
        mu,
        exact: true,
        even_weight: even,
        status: TailStatus::certified(0),
    };
    recurrence_stieltjes(&RatField, &moms, n_max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::Rational;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn policy() -> PrecisionPolicy {
        PrecisionPolicy::with_pow10_eps(320, -40, 20_000).unwrap()
    }

    #[test]
    fn unit_moments_closed_form() {
        let spec = WeightSpec::unit(rat(1, 2), rat(0, 1)).unwrap();
        let moms = moments_exact(&spec, 2).unwrap();
        assert_eq!(moms.mu[0], rat(4, 1)); // 2/(1−1/2)
        assert_eq!(moms.mu[1], rat(0, 1));
        assert_eq!(moms.mu[2], rat(16, 7)); // 2/(1−1/8)
        assert!(moms.even_weight);
    }

    #[test]
    fn qhermite_moments_certified() {
        let p = policy();
        let spec = WeightSpec::qhermite1(rat(1, 2), rat(0, 1)).unwrap();
        let moms = moments(&spec, 1, &p, p.tail_eps()).unwrap();
        assert!(moms.status.certified);
        let mu0 = moms.mu[0].to_f64();
        assert!(mu0 > 0.0 && mu0 < 4.0);
        assert!(moms.mu[1].is_zero());
        // stability under eps halving
        let ph = p.halved_eps();
        let moms2 = moments(&spec, 1, &ph, ph.tail_eps()).unwrap();
        let ctx = p.ctx();
        let delta = moms.mu[0].sub(&moms2.mu[0], &ctx).abs();
        let bound = p.tail_eps().mul(&ctx.from_i64(2), &ctx);
        assert!(delta.le(&bound));
    }

    #[test]
    fn stieltjes_unit_exact() {
        let spec = WeightSpec::unit(rat(1, 2), rat(0, 1)).unwrap();
        let rec = recurrence_exact(&spec, 4).unwrap();
        assert_eq!(*rec.gamma(0).unwrap(), rat(4, 1));
        assert_eq!(*rec.b(0).unwrap(), rat(0, 1));
        // P_1 = x
        assert_eq!(rec.coeffs(1).unwrap(), &[rat(0, 1), rat(1, 1)]);
        // a_1 = mu2/mu0 = 4/7, P_2 = x² − 4/7
        assert_eq!(*rec.a(1).unwrap(), rat(4, 7));
        assert_eq!(rec.coeffs(2).unwrap(), &[rat(-4, 7), rat(0, 1), rat(1, 1)]);
        // P_2(1/2) = 1/4 − 4/7 = −9/28
        assert_eq!(
            eval_poly_rational(&rec, 2, &rat(1, 2)).unwrap(),
            rat(-9, 28)
        );
        // parity: odd coefficients of even-degree polys vanish
        for n in 0..=4usize {
            for (i, c) in rec.coeffs(n).unwrap().iter().enumerate() {
                if (n + i) % 2 == 1 {
                    assert!(c.is_zero(), "P_{n} coeff {i}");
                }
            }
        }
    }

    #[test]
    fn hankel_matches_stieltjes_unit() {
        for q in [rat(1, 2), rat(1, 3)] {
            let spec = WeightSpec::unit(q, rat(0, 1)).unwrap();
            let moms = moments_exact(&spec, 10).unwrap();
            let st = recurrence_stieltjes(&RatField, &moms, 10).unwrap();
            let hk = hankel_oracle(&moms, 10).unwrap();
            assert_eq!(st.gamma_all(), hk.gamma_all());
            assert_eq!(st.a_all(), hk.a_all());
            assert_eq!(st.b_all(), hk.b_all());
            for n in 0..=10 {
                assert_eq!(st.coeffs(n).unwrap(), hk.coeffs(n).unwrap());
            }
        }
    }

    #[test]
    fn hankel_gamma1_example() {
        let spec = WeightSpec::unit(rat(1, 2), rat(0, 1)).unwrap();
        let moms = moments_exact(&spec, 1).unwrap();
        let hk = hankel_oracle(&moms, 1).unwrap();
        assert_eq!(*hk.gamma(0).unwrap(), rat(4, 1));
        assert_eq!(*hk.gamma(1).unwrap(), rat(16, 7));
    }

    #[test]
    fn eval_dual_paths_agree() {
        let p = policy();
        let ctx = p.ctx();
        let spec = WeightSpec::unit(rat(1, 2), rat(0, 1)).unwrap();
        let rec = table_to_real(&recurrence_exact(&spec, 8).unwrap(), &ctx);
        let z = Complex::new(ctx.from_f64(0.8), ctx.from_f64(0.3));
        for n in [0usize, 3, 8] {
            let via_rec = eval_poly(&rec, n, &z, &ctx).unwrap();
            let via_coef = eval_poly_coeffs(&rec, n, &z, &ctx).unwrap();
            let d = via_rec.sub(&via_coef, &ctx).abs(&ctx);
            let scale = via_rec.abs(&ctx).add(&ctx.one(), &ctx);
            let tol = scale.mul(&ctx.pow2(-(p.work_bits() as i64) + 8), &ctx);
            assert!(d.le(&tol));
        }
    }

    #[test]
    fn orthogonality_residuals_small() {
        let p = policy();
        let ctx = p.ctx();
        let spec = WeightSpec::unit(rat(1, 2), rat(0, 1)).unwrap();
        let rec = table_to_real(&recurrence_exact(&spec, 4).unwrap(), &ctx);
        // odd pairing is exactly zero
        let r = orthogonality_residual(&rec, &spec, 0, 1, &p, p.tail_eps()).unwrap();
        assert!(r.value.is_zero());
        // diagonal at n = 3
        let r = orthogonality_residual(&rec, &spec, 3, 3, &p, p.tail_eps()).unwrap();
        assert!(r.status.certified);
        assert!(r.value.to_f64() < 1e-20);
        // off-diagonal (2,4)... within table
        let r = orthogonality_residual(&rec, &spec, 2, 4, &p, p.tail_eps()).unwrap();
        assert!(r.value.to_f64() < 1e-20);
    }

    #[test]
    fn smallest_zero_degree_two() {
        let p = policy();
        let ctx = p.ctx();
        let spec = WeightSpec::unit(rat(1, 2), rat(0, 1)).unwrap();
        let rec = table_to_real(&recurrence_exact(&spec, 2).unwrap(), &ctx);
        let z = smallest_positive_zero(&rec, 2, &rat(1, 2), &p).unwrap();
        // zero of x² − 4/7 is 2/√7
        let expect = ctx.from_i64(2).div(&ctx.from_i64(7).sqrt(&ctx), &ctx);
        let rel = z.sub(&expect, &ctx).abs().div(&expect, &ctx);
        assert!(rel.to_f64() < 1e-30);
        // P_1 = x has no positive zero
        assert_eq!(
            smallest_positive_zero(&rec, 1, &rat(1, 2), &p).unwrap_err(),
            QError::NoSignChange
        );
    }

    #[test]
    fn degenerate_measure_detected() {
        // moment table of the zero measure
        let mu = alloc::vec![rat(0, 1); 5];
        let r = recurrence_exact_from_moments(mu, 2, true);
        assert_eq!(r.unwrap_err(), QError::DegenerateMeasure { n: 0 });
    }
}
