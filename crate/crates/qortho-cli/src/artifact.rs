//! Artifact schemas and renderers. JSON artifacts are byte-identical for a
//! fixed config; wall-clock blocks are emitted only when requested.

use serde::Serialize;
use serde_json::Value;

use crate::config::ConfigEcho;

#[derive(Serialize)]
pub struct RecurrenceArtifact {
    pub config: ConfigEcho,
    pub q: String,
    pub alpha: String,
    pub weight: String,
    pub n_max: usize,
    pub exact: bool,
    pub truncation_certified: bool,
    /// a\[i\] is a_{i+1}, i = 0.. (a_1..a_{n_max})
    pub a: Vec<String>,
    /// b\[i\] is b_i, i = 0..n_max−1
    pub b: Vec<String>,
    /// gamma\[i\] is gamma_i, i = 0..=n_max
    pub gamma: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<Value>,
}

impl RecurrenceArtifact {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,a_n,b_n,gamma_n\n");
        for n in 0..=self.n_max {
            let a = if n >= 1 { self.a[n - 1].as_str() } else { "" };
            let b = self.b.get(n).map(String::as_str).unwrap_or("");
            let g = self.gamma[n].as_str();
            out.push_str(&format!("{n},{a},{b},{g}\n"));
        }
        out
    }
}

#[derive(Serialize)]
pub struct CoeffJson {
    pub power: i64,
    pub value: String,
}

#[derive(Serialize)]
pub struct SeriesJson {
    pub label: String,
    pub q: String,
    pub alpha: String,
    pub coeffs: Vec<CoeffJson>,
}

#[derive(Serialize)]
pub struct SeriesArtifact {
    pub config: ConfigEcho,
    pub j_max: usize,
    pub series: Vec<SeriesJson>,
    #[serde(rename = "C0")]
    pub c0: String,
    pub c0_gap: String,
    pub kappa_a: String,
    pub kappa_b: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub det_residual_max: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<Value>,
}

impl SeriesArtifact {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("label,power,value\n");
        for s in &self.series {
            for c in &s.coeffs {
                out.push_str(&format!("{},{},{}\n", s.label, c.power, c.value));
            }
        }
        out
    }
}

#[derive(Serialize)]
pub struct RowJson {
    pub n: usize,
    pub error: String,
    pub ms: u64,
}

#[derive(Serialize)]
pub struct ReportArtifact {
    pub config: ConfigEcho,
    pub claim: String,
    pub q: String,
    pub alpha: String,
    pub weight: String,
    pub rows: Vec<RowJson>,
    /// Fitted per-even-step error ratio (e_{n+2}/e_n), when a fit exists.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fitted_rate: Option<String>,
    pub passed: bool,
    /// Claim-specific extras (variant, t_star, thresholds, …).
    pub details: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<Value>,
}

impl ReportArtifact {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,error,ms\n");
        for r in &self.rows {
            out.push_str(&format!("{},{},{}\n", r.n, r.error, r.ms));
        }
        out
    }
}

/// Pretty JSON with a trailing newline (stable bytes for a fixed config).
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("artifact serialization");
    s.push('\n');
    s
}
