//! Orthogonality weights on the lattice ±q^k: the catalog, admissibility
//! classification against the deviation law |1 − w(±q^{n/2})| ≈ c·ρ^n, and
//! the folding of one-sided weights onto the two-sided lattice.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use num_traits::{One, Signed, Zero};

use crate::error::{QError, QResult};
use crate::numerics::{
    rat_from_i64, rat_is_integer, rat_powi, rat_sqrt, rat_to_i64, rat_to_string, Complex, NumCtx,
    PrecisionPolicy, Rational, Real, Trunc,
};
use crate::qcalc::{pochhammer_inf, LatticeFn, LatticeTable, Side};

/// Threshold separating the strict admissibility class (rate ≈ q) from the
/// relaxed class (rate between q and 1): strict iff ρ ≤ q·(1 + RATE_TOL).
pub const RATE_TOL: f64 = 0.15;

/// A polynomial weight Σ c_i·x^{d_i} with exact rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyWeight {
    pub terms: Vec<(Rational, u32)>,
}

impl PolyWeight {
    pub fn constant_one() -> Self {
        PolyWeight {
            terms: alloc::vec![(Rational::one(), 0)],
        }
    }

    pub fn eval_rational(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for (c, d) in &self.terms {
            acc += c * rat_powi(x, *d as i64);
        }
        acc
    }

    pub fn eval_complex(&self, x: &Complex, ctx: &NumCtx) -> Complex {
        let mut acc = Complex::zero(ctx);
        for (c, d) in &self.terms {
            let term = x.powi(*d as i64, ctx).scale(&ctx.from_rational(c), ctx);
            acc = acc.add(&term, ctx);
        }
        acc
    }

    /// Even in x iff every monomial degree is even.
    pub fn is_even(&self) -> bool {
        self.terms.iter().all(|(_, d)| d.is_multiple_of(2))
    }

    /// The weight after the substitution x ← x² (degrees double).
    pub fn substitute_square(&self) -> PolyWeight {
        PolyWeight {
            terms: self.terms.iter().map(|(c, d)| (c.clone(), 2 * d)).collect(),
        }
    }
}

/// Weight catalog. The |x|^α factor is NOT part of `eval`: the polynomial
/// engine applies it as q^{kα} at lattice points.
#[derive(Clone, Debug)]
pub enum WeightKind {
    /// w ≡ 1.
    Unit,
    /// w(x) = (q²x²; q²)_∞.
    QHermite1,
    /// w(x) = (qx;q)_∞ / (bqx;q)_∞ with |b| < 1/q.
    LittleQJacobi { b: Rational },
    /// w(x) = 1 + c·x².
    PolyPerturbation { c: Rational },
    /// Values stored at ±q^k, k ≤ K.
    UserTable(LatticeTable),
    /// Polynomial weight produced by folding a one-sided polynomial weight.
    FoldedPoly(PolyWeight),
}

/// An orthogonality weight on the lattice ±q^k together with its |x|^α
/// exponent. q is kept exact so the rational pipeline stays exact.
#[derive(Clone, Debug)]
pub struct WeightSpec {
    pub kind: WeightKind,
    pub q: Rational,
    pub alpha: Rational,
}

fn validate_q_alpha(q: &Rational, alpha: &Rational) -> QResult<()> {
    if !q.is_positive() || *q >= Rational::one() {
        return Err(QError::QOutOfRange);
    }
    if *alpha <= rat_from_i64(-1) {
        return Err(QError::AlphaOutOfRange("alpha must be > -1"));
    }
    Ok(())
}

impl WeightSpec {
    pub fn unit(q: Rational, alpha: Rational) -> QResult<Self> {
        validate_q_alpha(&q, &alpha)?;
        Ok(WeightSpec {
            kind: WeightKind::Unit,
            q,
            alpha,
        })
    }

    pub fn qhermite1(q: Rational, alpha: Rational) -> QResult<Self> {
        validate_q_alpha(&q, &alpha)?;
        Ok(WeightSpec {
            kind: WeightKind::QHermite1,
            q,
            alpha,
        })
    }

    /// |b| < 1/q keeps the denominator poles off the lattice.
    pub fn little_qjacobi(q: Rational, alpha: Rational, b: Rational) -> QResult<Self> {
        validate_q_alpha(&q, &alpha)?;
        if b.abs() >= q.recip() {
            return Err(QError::InvalidLiteral(
                "little q-Jacobi requires |b| < 1/q".into(),
            ));
        }
        Ok(WeightSpec {
            kind: WeightKind::LittleQJacobi { b },
            q,
            alpha,
        })
    }

    /// Rejects c = −q^{−2k} (which would zero the weight on the lattice).
    pub fn poly_perturbation(q: Rational, alpha: Rational, c: Rational) -> QResult<Self> {
        validate_q_alpha(&q, &alpha)?;
        if c.is_negative() {
            let mut qk2 = Rational::one();
            for _ in 0..128 {
                if c == -qk2.clone().recip() {
                    return Err(QError::InvalidLiteral(
                        "poly perturbation vanishes on the lattice".into(),
                    ));
                }
                qk2 *= &q * &q;
            }
        }
        Ok(WeightSpec {
            kind: WeightKind::PolyPerturbation { c },
            q,
            alpha,
        })
    }

    pub fn user_table(q: Rational, alpha: Rational, table: LatticeTable) -> QResult<Self> {
        validate_q_alpha(&q, &alpha)?;
        Ok(WeightSpec {
            kind: WeightKind::UserTable(table),
            q,
            alpha,
        })
    }

    /// Catalog id used in artifacts and reports.
    pub fn name(&self) -> String {
        match &self.kind {
            WeightKind::Unit => "unit".into(),
            WeightKind::QHermite1 => "qhermite1".into(),
            WeightKind::LittleQJacobi { b } => format!("littleqjacobi:b={}", rat_to_string(b)),
            WeightKind::PolyPerturbation { c } => {
                format!("polyperturbation:c={}", rat_to_string(c))
            }
            WeightKind::UserTable(_) => "usertable".into(),
            WeightKind::FoldedPoly(_) => "folded".into(),
        }
    }

    /// Even weights make all odd moments vanish identically.
    pub fn is_even(&self) -> bool {
        match &self.kind {
            WeightKind::Unit | WeightKind::QHermite1 | WeightKind::PolyPerturbation { .. } => true,
            WeightKind::LittleQJacobi { .. } => false,
            WeightKind::UserTable(t) => t.is_even(),
            WeightKind::FoldedPoly(p) => p.is_even(),
        }
    }

    /// Polynomial form when the weight is a finite rational polynomial.
    pub fn poly_form(&self) -> Option<PolyWeight> {
        match &self.kind {
            WeightKind::Unit => Some(PolyWeight::constant_one()),
            WeightKind::PolyPerturbation { c } => Some(PolyWeight {
                terms: alloc::vec![(Rational::one(), 0), (c.clone(), 2)],
            }),
            WeightKind::FoldedPoly(p) => Some(p.clone()),
            _ => None,
        }
    }

    /// Exact rational moments exist for polynomial weights with integer α.
    pub fn exact_moments_available(&self) -> bool {
        self.poly_form().is_some() && rat_is_integer(&self.alpha)
    }
}

/// Evaluate the w-part of the weight at a complex point (no |x|^α factor).
pub fn eval_weight(
    spec: &WeightSpec,
    x: &Complex,
    policy: &PrecisionPolicy,
    eps: &Real,
) -> QResult<Trunc<Complex>> {
    let ctx = policy.ctx();
    match &spec.kind {
        WeightKind::Unit => Ok(Trunc::certified(Complex::one(&ctx), 0)),
        WeightKind::QHermite1 => {
            let q = ctx.from_rational(&spec.q);
            let q2 = q.mul(&q, &ctx);
            let arg = x.mul(x, &ctx).scale(&q2, &ctx);
            pochhammer_inf(&arg, &q2, policy, eps)
        }
        WeightKind::LittleQJacobi { b } => {
            let q = ctx.from_rational(&spec.q);
            let two = ctx.from_i64(2);
            let half_eps = eps.div(&two, &ctx);
            let num_arg = x.scale(&q, &ctx);
            let den_arg = num_arg.scale(&ctx.from_rational(b), &ctx);
            let num = pochhammer_inf(&num_arg, &q, policy, &half_eps)?;
            let den = pochhammer_inf(&den_arg, &q, policy, &half_eps)?;
            Ok(Trunc::new(
                num.value.div(&den.value, &ctx),
                num.status.merge(den.status),
            ))
        }
        WeightKind::PolyPerturbation { c } => {
            let cx = ctx.from_rational(c);
            let v = Complex::one(&ctx).add(&x.mul(x, &ctx).scale(&cx, &ctx), &ctx);
            Ok(Trunc::certified(v, 0))
        }
        WeightKind::FoldedPoly(p) => Ok(Trunc::certified(p.eval_complex(x, &ctx), 0)),
        WeightKind::UserTable(t) => {
            // Only stored lattice points are valid.
            let q = ctx.from_rational(&spec.q);
            for k in 0..=t.k_max() {
                let p = q.powi(k as i64, &ctx);
                let same_plus = x.im.is_zero() && x.re.cmp(&p) == core::cmp::Ordering::Equal;
                let same_minus = x.im.is_zero() && x.re.cmp(&p.neg()) == core::cmp::Ordering::Equal;
                if same_plus {
                    return t.eval(k, Side::Plus);
                }
                if same_minus {
                    return t.eval(k, Side::Minus);
                }
            }
            Err(QError::TableMiss)
        }
    }
}

/// Evaluate the w-part at the lattice point ±q^k (the path the polynomial
/// engine uses; table weights never miss here).
pub fn eval_weight_lattice(
    spec: &WeightSpec,
    k: u32,
    side: Side,
    policy: &PrecisionPolicy,
    eps: &Real,
) -> QResult<Trunc<Complex>> {
    let ctx = policy.ctx();
    match &spec.kind {
        WeightKind::UserTable(t) => t.eval(k, side),
        _ => {
            let q = ctx.from_rational(&spec.q);
            let x = q.powi(k as i64, &ctx);
            let x = if side == Side::Minus { x.neg() } else { x };
            eval_weight(spec, &Complex::from_real(x, &ctx), policy, eps)
        }
    }
}

/// Admissibility classification: the fitted ρ of |1−w(±q^{n/2})| ≈ c·ρ^n.
#[derive(Clone, Debug)]
pub struct AdmissibilityReport {
    pub is_strict: bool,
    pub fitted_rate: f64,
    pub c_estimate: f64,
    pub n_lo: usize,
    pub n_hi: usize,
}

/// Evaluate deviations at even n in [n_lo, n_hi] and fit the decay rate.
/// Strict class: ρ ≤ q(1+RATE_TOL); relaxed: decaying slower; error when the
/// deviations do not decay at all.
pub fn check_admissibility(
    spec: &WeightSpec,
    n_lo: usize,
    n_hi: usize,
    policy: &PrecisionPolicy,
) -> QResult<AdmissibilityReport> {
    let ctx = policy.ctx();
    let eps = policy.tail_eps();
    let evens: Vec<usize> = (n_lo..=n_hi).filter(|n| n.is_multiple_of(2)).collect();
    if evens.len() < 4 {
        return Err(QError::InvalidLiteral(
            "admissibility range must contain at least 4 even n".into(),
        ));
    }
    let one = Complex::one(&ctx);
    let mut devs: Vec<(usize, Real)> = Vec::with_capacity(evens.len());
    for &n in &evens {
        let k = (n / 2) as u32;
        let wp = eval_weight_lattice(spec, k, Side::Plus, policy, eps)?;
        let wm = eval_weight_lattice(spec, k, Side::Minus, policy, eps)?;
        let dp = one.sub(&wp.value, &ctx).abs(&ctx);
        let dm = one.sub(&wm.value, &ctx).abs(&ctx);
        devs.push((n, dp.max(&dm, &ctx)));
    }
    // Identically-zero deviations: w ≡ 1 on the checked lattice points.
    let floor = ctx.pow2(-((policy.work_bits() / 2) as i64));
    if devs.iter().all(|(_, d)| d.le(&floor)) {
        return Ok(AdmissibilityReport {
            is_strict: true,
            fitted_rate: 0.0,
            c_estimate: 0.0,
            n_lo,
            n_hi,
        });
    }
    let pts: Vec<(f64, f64)> = devs
        .iter()
        .filter(|(_, d)| d.is_positive())
        .map(|(n, d)| (*n as f64, d.ln(&ctx).to_f64()))
        .collect();
    if pts.len() < 3 {
        return Err(QError::NonConvergence);
    }
    let (slope, intercept) = least_squares(&pts);
    let rate = crate::numerics::fmath::exp(slope);
    let not_decaying = rate >= 0.995
        || devs.last().unwrap().1.gt(&devs.first().unwrap().1);
    if not_decaying {
        return Err(QError::InadmissibleWeight);
    }
    let q = crate::numerics::NumCtx::new(64)
        .from_rational(&spec.q)
        .to_f64();
    Ok(AdmissibilityReport {
        is_strict: rate <= q * (1.0 + RATE_TOL),
        fitted_rate: rate,
        c_estimate: crate::numerics::fmath::exp(intercept),
        n_lo,
        n_hi,
    })
}

pub(crate) fn least_squares(pts: &[(f64, f64)]) -> (f64, f64) {
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|(x, _)| x).sum();
    let sy: f64 = pts.iter().map(|(_, y)| y).sum();
    let sxx: f64 = pts.iter().map(|(x, _)| x * x).sum();
    let sxy: f64 = pts.iter().map(|(x, y)| x * y).sum();
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    let intercept = (sy - slope * sx) / n;
    (slope, intercept)
}

/// Fold a one-sided polynomial weight on {q^k} onto the two-sided lattice
/// ±ρ^k, ρ = √q: ω(z) = w(z²)·|z|, i.e. the polynomial w(z²) with α = 1.
/// Requires √q rational so the folded spec stays exact; use the moment-level
/// identity for general q.
pub fn fold_one_sided_poly(w: &PolyWeight, q: &Rational) -> QResult<WeightSpec> {
    if !q.is_positive() || *q >= Rational::one() {
        return Err(QError::QOutOfRange);
    }
    let rho = rat_sqrt(q).ok_or_else(|| {
        QError::InvalidLiteral("fold_one_sided: sqrt(q) is not rational; use moment folding".into())
    })?;
    Ok(WeightSpec {
        kind: WeightKind::FoldedPoly(w.substitute_square()),
        q: rho,
        alpha: Rational::one(),
    })
}

/// Fold a one-sided table weight: values at ±ρ^k both equal w(q^k).
pub fn fold_one_sided_table(values: &[Real], q: &Rational) -> QResult<WeightSpec> {
    if !q.is_positive() || *q >= Rational::one() {
        return Err(QError::QOutOfRange);
    }
    let rho = rat_sqrt(q).ok_or_else(|| {
        QError::InvalidLiteral("fold_one_sided: sqrt(q) is not rational; use moment folding".into())
    })?;
    let table = LatticeTable::new(values.to_vec(), values.to_vec())?;
    WeightSpec::user_table(rho, Rational::one(), table)
}

/// Moment-level folding: two-sided moments of the folded weight from the
/// one-sided moments ν_s: μ_{2s} = 2ν_s and μ_{odd} = 0. Exact for any q.
pub fn fold_moments(one_sided: &[Rational]) -> Vec<Rational> {
    let mut out = Vec::with_capacity(one_sided.len() * 2);
    for nu in one_sided {
        out.push(nu * rat_from_i64(2));
        out.push(Rational::zero());
    }
    out.pop();
    out
}

/// One-sided rational moments ν_s = Σ_k q^{k(s+1)}·w(q^k) of a polynomial
/// weight, s = 0..=s_max: closed geometric forms, exact.
pub fn one_sided_poly_moments(w: &PolyWeight, q: &Rational, s_max: usize) -> Vec<Rational> {
    let mut out = Vec::with_capacity(s_max + 1);
    for s in 0..=s_max {
        let mut acc = Rational::zero();
        for (c, d) in &w.terms {
            let e = (s + *d as usize + 1) as i64;
            acc += c / (Rational::one() - rat_powi(q, e));
        }
        out.push(acc);
    }
    out
}

/// Integer alpha of a spec when available (needed by the exact paths).
pub fn alpha_as_integer(spec: &WeightSpec) -> Option<i64> {
    rat_to_i64(&spec.alpha)
}
