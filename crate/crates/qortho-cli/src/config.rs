//! Run configuration: exact parsing of q, alpha, weight ids and tolerances,
//! and the precision resolution rule for "auto".

use anyhow::{anyhow, bail, Result};
use qortho_core::numerics::{
    parse_rational, required_bits, PrecisionPolicy, Rational, Real,
};
use qortho_core::weights::WeightSpec;
use serde::Serialize;

/// Exit codes: 0 pass, 1 assertion fail, 2 bad input, 3 numeric failure.
pub const EXIT_ASSERTION_FAILED: i32 = 1;
pub const EXIT_BAD_INPUT: i32 = 2;
pub const EXIT_NUMERIC_FAILURE: i32 = 3;

/// Parsed and validated run configuration.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub q: Rational,
    pub alpha: Rational,
    pub weight: String,
    pub n_max: usize,
    pub precision_bits: usize,
    pub tail_eps_str: String,
    pub policy: PrecisionPolicy,
    pub timings: bool,
}

/// Config echo embedded in every artifact.
#[derive(Clone, Debug, Serialize)]
pub struct ConfigEcho {
    pub q: String,
    pub alpha: String,
    pub weight: String,
    pub n_max: usize,
    pub precision_bits: usize,
    pub tail_eps: String,
}

impl RunConfig {
    #[allow(clippy::too_many_arguments)]
    pub fn resolve(
        q_str: &str,
        alpha_str: &str,
        weight: &str,
        n_max: usize,
        precision_bits: &str,
        tail_eps: &str,
        min_auto_bits: usize,
        timings: bool,
    ) -> Result<Self> {
        let q = parse_rational(q_str).map_err(|e| anyhow!("q: {e}"))?;
        let alpha = parse_rational(alpha_str).map_err(|e| anyhow!("alpha: {e}"))?;
        let bits = if precision_bits == "auto" {
            required_bits(&q, &alpha, n_max, 32)
                .map_err(|e| anyhow!("{e}"))?
                .max(min_auto_bits)
        } else {
            let b: usize = precision_bits
                .parse()
                .map_err(|_| anyhow!("precision-bits must be an integer or \"auto\""))?;
            if b < 64 {
                bail!("precision-bits must be at least 64");
            }
            b
        };
        let ctx = qortho_core::numerics::NumCtx::new(bits);
        let eps: Real = ctx
            .parse_dec(tail_eps)
            .map_err(|e| anyhow!("tail-eps: {e}"))?;
        let policy =
            PrecisionPolicy::new(bits, eps, 100_000, 32).map_err(|e| anyhow!("{e}"))?;
        Ok(RunConfig {
            q,
            alpha,
            weight: weight.to_string(),
            n_max,
            precision_bits: bits,
            tail_eps_str: tail_eps.to_string(),
            policy,
            timings,
        })
    }

    pub fn echo(&self) -> ConfigEcho {
        ConfigEcho {
            q: qortho_core::numerics::rat_to_string(&self.q),
            alpha: qortho_core::numerics::rat_to_string(&self.alpha),
            weight: self.weight.clone(),
            n_max: self.n_max,
            precision_bits: self.precision_bits,
            tail_eps: self.tail_eps_str.clone(),
        }
    }

    /// Parse the weight id: unit | qhermite1 | littleqjacobi:b=R |
    /// polyperturbation:c=R | usertable:PATH (JSON document).
    pub fn weight_spec(&self) -> Result<WeightSpec> {
        let (kind, param) = match self.weight.split_once(':') {
            Some((k, p)) => (k, Some(p)),
            None => (self.weight.as_str(), None),
        };
        let spec = match kind {
            "usertable" => {
                let path = param.ok_or_else(|| anyhow!("usertable requires :PATH"))?;
                return load_user_table(path, self);
            }
            "unit" => WeightSpec::unit(self.q.clone(), self.alpha.clone()),
            "qhermite1" => WeightSpec::qhermite1(self.q.clone(), self.alpha.clone()),
            "littleqjacobi" => {
                let p = param.ok_or_else(|| anyhow!("littleqjacobi requires :b=VALUE"))?;
                let b = p
                    .strip_prefix("b=")
                    .ok_or_else(|| anyhow!("littleqjacobi parameter must be b=VALUE"))?;
                let b = parse_rational(b).map_err(|e| anyhow!("b: {e}"))?;
                WeightSpec::little_qjacobi(self.q.clone(), self.alpha.clone(), b)
            }
            "polyperturbation" => {
                let p = param.ok_or_else(|| anyhow!("polyperturbation requires :c=VALUE"))?;
                let c = p
                    .strip_prefix("c=")
                    .ok_or_else(|| anyhow!("polyperturbation parameter must be c=VALUE"))?;
                let c = parse_rational(c).map_err(|e| anyhow!("c: {e}"))?;
                WeightSpec::poly_perturbation(self.q.clone(), self.alpha.clone(), c)
            }
            other => bail!("unknown weight \"{other}\""),
        };
        spec.map_err(|e| anyhow!("{e}"))
    }
}

/// On-disk schema of a user-table weight: values at ±q^k, k = 0..=K.
/// Value strings are rational ("3/4") or decimal ("0.75", "1e-3") literals.
#[derive(serde::Deserialize)]
struct UserTableFile {
    q: String,
    alpha: serde_json::Value,
    values: Vec<UserTableRow>,
}

#[derive(serde::Deserialize)]
struct UserTableRow {
    k: u32,
    plus: String,
    minus: String,
}

fn parse_value(s: &str, ctx: &qortho_core::numerics::NumCtx) -> Result<Real> {
    // rational or plain-decimal literals are exact; fall back to the
    // scientific-notation parser
    if let Ok(r) = parse_rational(s) {
        return Ok(ctx.from_rational(&r));
    }
    ctx.parse_dec(s).map_err(|e| anyhow!("{e}"))
}

/// Load a user-table weight and check it against the run configuration.
fn load_user_table(path: &str, cfg: &RunConfig) -> Result<WeightSpec> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| anyhow!("cannot read weight table {path}: {e}"))?;
    let file: UserTableFile =
        serde_json::from_str(&text).map_err(|e| anyhow!("weight table {path}: {e}"))?;
    let fq = parse_rational(&file.q).map_err(|e| anyhow!("weight table q: {e}"))?;
    if fq != cfg.q {
        bail!("weight table q = {} does not match --q", file.q);
    }
    let falpha = match &file.alpha {
        serde_json::Value::String(s) => parse_rational(s).map_err(|e| anyhow!("alpha: {e}"))?,
        serde_json::Value::Number(n) => parse_rational(&n.to_string())
            .map_err(|e| anyhow!("alpha: {e}"))?,
        _ => bail!("weight table alpha must be a number or string"),
    };
    if falpha != cfg.alpha {
        bail!("weight table alpha does not match --alpha");
    }
    let mut rows = file.values;
    rows.sort_by_key(|r| r.k);
    let ctx = cfg.policy.ctx();
    let mut plus = Vec::with_capacity(rows.len());
    let mut minus = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        if row.k as usize != i {
            bail!("weight table must cover k = 0..=K without gaps");
        }
        plus.push(parse_value(&row.plus, &ctx)?);
        minus.push(parse_value(&row.minus, &ctx)?);
    }
    let table = qortho_core::qcalc::LatticeTable::new(plus, minus).map_err(|e| anyhow!("{e}"))?;
    WeightSpec::user_table(cfg.q.clone(), cfg.alpha.clone(), table).map_err(|e| anyhow!("{e}"))
}

/// Classify a core error into an exit code.
pub fn exit_code_for(err: &qortho_core::QError) -> i32 {
    use qortho_core::QError::*;
    match err {
        QOutOfRange | AlphaOutOfRange(_) | InvalidLiteral(_) | TableMiss
        | IndexOutOfRange { .. } | OddDegree { .. } | DivergentMoment | NotExact => EXIT_BAD_INPUT,
        TruncationCap { .. } | PoleProximity | ZeroArgument | TableExhausted { .. }
        | DegenerateMeasure { .. } | NoSignChange | Resonance { .. } | NonConvergence
        | ZeroDet | DivisionByZero(_) | ConstantResolutionFailed | NonFinite => {
            EXIT_NUMERIC_FAILURE
        }
        InadmissibleWeight => EXIT_ASSERTION_FAILED,
    }
}
