//! Run configuration: a single TOML file with documented defaults.
//!
//! Unknown keys are rejected everywhere. The raw text is echoed verbatim
//! into the report for provenance. See the repository README for the full
//! grammar and the defaults table.

use nctorus::algebra::ThetaMatrix;
use nctorus::spectral::TruncationPolicy;
use serde::Deserialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config: {0}")]
    Io(#[from] std::io::Error),
    #[error("config parse error: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("invalid twist specification `{0}`")]
    BadTheta(String),
    #[error("check #{index} ({id}): {message}")]
    BadCheck {
        index: usize,
        id: String,
        message: String,
    },
}

fn default_dimension() -> usize {
    2
}
fn default_theta() -> String {
    "golden".into()
}
fn default_seed() -> u64 {
    1
}
fn default_out_dir() -> String {
    "runs".into()
}

/// Top-level run specification.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Torus dimension d (default 2).
    #[serde(default = "default_dimension")]
    pub dimension: usize,
    /// Twist preset: "zero", "golden", or "p/q" (d = 2 rational twist).
    #[serde(default = "default_theta")]
    pub theta: String,
    /// Explicit antisymmetric matrix, overriding the preset when present.
    #[serde(default)]
    pub theta_matrix: Option<Vec<Vec<f64>>>,
    /// Master seed for all sample streams (default 1).
    #[serde(default = "default_seed")]
    pub seed: u64,
    /// Output directory for reports and dumps (default "runs").
    #[serde(default = "default_out_dir")]
    pub out_dir: String,
    #[serde(default)]
    pub truncation: TruncationConfig,
    #[serde(default)]
    pub tolerances: ToleranceConfig,
    #[serde(default)]
    pub checks: Vec<CheckConfig>,
}

/// Window-doubling policy knobs.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TruncationConfig {
    /// L0 = l0_factor · max(support, 1) (default 4).
    #[serde(default = "default_l0_factor")]
    pub l0_factor: i64,
    /// Relative L₁ tolerance between consecutive μ estimates (default 0.02).
    #[serde(default = "default_tol_mu")]
    pub tol_mu: f64,
    /// Window cap (default 32).
    #[serde(default = "default_l_max")]
    pub l_max: i64,
}

fn default_l0_factor() -> i64 {
    4
}
fn default_tol_mu() -> f64 {
    0.02
}
fn default_l_max() -> i64 {
    32
}

impl Default for TruncationConfig {
    fn default() -> Self {
        Self {
            l0_factor: default_l0_factor(),
            tol_mu: default_tol_mu(),
            l_max: default_l_max(),
        }
    }
}

impl TruncationConfig {
    pub fn policy(&self, support: i64) -> TruncationPolicy {
        TruncationPolicy {
            l0: self.l0_factor * support.max(1),
            tol: self.tol_mu,
            l_max: self.l_max,
        }
    }
}

/// Check-level tolerances.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceConfig {
    /// Relative tolerance for spectral-pipeline inequalities (default 0.01).
    #[serde(default = "default_pipeline_rel")]
    pub pipeline_rel: f64,
}

fn default_pipeline_rel() -> f64 {
    0.01
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            pipeline_rel: default_pipeline_rel(),
        }
    }
}

fn default_support() -> i64 {
    2
}
fn default_decay() -> f64 {
    2.0
}
fn default_samples() -> u32 {
    20
}
fn default_delta_points() -> usize {
    7
}
fn default_delta_min() -> f64 {
    0.1
}
fn default_delta_max() -> f64 {
    10.0
}
fn default_grid_points() -> usize {
    1024
}
fn default_matrix_size() -> usize {
    16
}
fn default_trials() -> u32 {
    10_000
}
fn default_k_max() -> u32 {
    6
}
fn default_field_order() -> u32 {
    4
}
fn default_t_values() -> Vec<f64> {
    vec![0.3, 1.0, std::f64::consts::SQRT_2]
}
fn default_sampling_grid() -> usize {
    512
}
fn default_scalar_points() -> usize {
    100
}

/// Scalar integral identity on a symmetric δ-grid avoiding 0.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScalarIdentityParams {
    #[serde(default = "default_delta_max")]
    pub delta_range: f64,
    #[serde(default = "default_scalar_points")]
    pub points: usize,
}

/// Matrix integral identity on random Hermitian matrices.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixIdentityParams {
    #[serde(default = "default_matrix_size")]
    pub n: usize,
    #[serde(default = "default_samples")]
    pub samples: u32,
}

/// Random-element pipeline sample shape.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubmajorizationParams {
    #[serde(default = "default_support")]
    pub support: i64,
    #[serde(default = "default_decay")]
    pub decay: f64,
    #[serde(default = "default_samples")]
    pub samples: u32,
    #[serde(default)]
    pub axis: usize,
    #[serde(default = "default_delta_min")]
    pub delta_min: f64,
    #[serde(default = "default_delta_max")]
    pub delta_max: f64,
    #[serde(default = "default_delta_points")]
    pub delta_points: usize,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CesaroInterpolationParams {
    #[serde(default = "default_support")]
    pub support: i64,
    #[serde(default = "default_decay")]
    pub decay: f64,
    #[serde(default = "default_samples")]
    pub samples: u32,
    #[serde(default)]
    pub axis: usize,
    #[serde(default = "default_grid_points")]
    pub grid_points: usize,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SequenceInterpolationParams {
    #[serde(default = "default_k_max")]
    pub k_max: u32,
    #[serde(default = "default_trials")]
    pub trials: u32,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldInterpolationParams {
    #[serde(default = "default_field_order")]
    pub k: u32,
    #[serde(default = "default_trials")]
    pub trials: u32,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HigherInterpolationParams {
    pub k: u32,
    pub alpha: Vec<i64>,
    #[serde(default = "default_support")]
    pub support: i64,
    #[serde(default = "default_decay")]
    pub decay: f64,
    #[serde(default = "default_samples")]
    pub samples: u32,
    #[serde(default = "default_grid_points")]
    pub grid_points: usize,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrequencyShiftParams {
    #[serde(default = "default_support")]
    pub support: i64,
    #[serde(default = "default_decay")]
    pub decay: f64,
    #[serde(default = "default_samples")]
    pub samples: u32,
    #[serde(default = "default_t_values")]
    pub t_values: Vec<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TheoremParams {
    pub k: u32,
    pub l: u32,
    pub p: f64,
    pub q: f64,
    #[serde(default = "default_support")]
    pub support: i64,
    #[serde(default = "default_decay")]
    pub decay: f64,
    #[serde(default = "default_samples")]
    pub samples: u32,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EndpointParams {
    pub k: u32,
    pub l: u32,
    #[serde(default = "default_support")]
    pub support: i64,
    #[serde(default = "default_decay")]
    pub decay: f64,
    #[serde(default = "default_samples")]
    pub samples: u32,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CommutativeCrossParams {
    pub k: u32,
    pub l: u32,
    pub p: f64,
    pub q: f64,
    #[serde(default = "default_support")]
    pub support: i64,
    #[serde(default = "default_decay")]
    pub decay: f64,
    #[serde(default = "default_samples")]
    pub samples: u32,
    #[serde(default = "default_sampling_grid")]
    pub sampling_grid: usize,
}

/// One requested check with its parameters.
#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "id")]
pub enum CheckConfig {
    #[serde(rename = "L3.1s")]
    ScalarIdentity(ScalarIdentityParams),
    #[serde(rename = "L3.1m")]
    MatrixIdentity(MatrixIdentityParams),
    #[serde(rename = "L3.2")]
    Submajorization(SubmajorizationParams),
    #[serde(rename = "L3.3")]
    CesaroInterpolation(CesaroInterpolationParams),
    #[serde(rename = "L3.4")]
    SequenceInterpolation(SequenceInterpolationParams),
    #[serde(rename = "L3.5")]
    FieldInterpolation(FieldInterpolationParams),
    #[serde(rename = "L3.6")]
    HigherInterpolation(HigherInterpolationParams),
    #[serde(rename = "L3.7")]
    FrequencyShift(FrequencyShiftParams),
    #[serde(rename = "THM")]
    Theorem(TheoremParams),
    #[serde(rename = "R1.2")]
    Endpoint(EndpointParams),
    #[serde(rename = "C1.3")]
    CommutativeCross(CommutativeCrossParams),
}

impl CheckConfig {
    pub fn id_str(&self) -> &'static str {
        match self {
            CheckConfig::ScalarIdentity(_) => "L3.1s",
            CheckConfig::MatrixIdentity(_) => "L3.1m",
            CheckConfig::Submajorization(_) => "L3.2",
            CheckConfig::CesaroInterpolation(_) => "L3.3",
            CheckConfig::SequenceInterpolation(_) => "L3.4",
            CheckConfig::FieldInterpolation(_) => "L3.5",
            CheckConfig::HigherInterpolation(_) => "L3.6",
            CheckConfig::FrequencyShift(_) => "L3.7",
            CheckConfig::Theorem(_) => "THM",
            CheckConfig::Endpoint(_) => "R1.2",
            CheckConfig::CommutativeCross(_) => "C1.3",
        }
    }
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let config: RunConfig = toml::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    /// Resolved twist matrix.
    pub fn theta_matrix(&self) -> Result<ThetaMatrix, ConfigError> {
        if let Some(rows) = &self.theta_matrix {
            let d = self.dimension;
            if rows.len() != d || rows.iter().any(|r| r.len() != d) {
                return Err(ConfigError::BadTheta(format!(
                    "explicit matrix must be {d}x{d}"
                )));
            }
            let flat: Vec<f64> = rows.iter().flatten().copied().collect();
            return ThetaMatrix::new(d, flat)
                .map_err(|e| ConfigError::BadTheta(format!("explicit matrix: {e}")));
        }
        match self.theta.as_str() {
            "zero" => Ok(ThetaMatrix::zero(self.dimension)),
            "golden" => Ok(ThetaMatrix::golden(self.dimension)),
            other => {
                let parts: Vec<&str> = other.split('/').collect();
                let (Some(p), Some(q)) = (
                    parts.first().and_then(|s| s.parse::<i64>().ok()),
                    parts.get(1).and_then(|s| s.parse::<i64>().ok()),
                ) else {
                    return Err(ConfigError::BadTheta(other.into()));
                };
                if parts.len() != 2 || self.dimension != 2 {
                    return Err(ConfigError::BadTheta(format!(
                        "rational twist `{other}` requires dimension = 2"
                    )));
                }
                ThetaMatrix::rational(p, q).map_err(|e| ConfigError::BadTheta(e.to_string()))
            }
        }
    }

    /// Human-readable twist descriptor for report records.
    pub fn theta_descriptor(&self) -> String {
        if self.theta_matrix.is_some() {
            "explicit".into()
        } else {
            self.theta.clone()
        }
    }

    fn validate(&self) -> Result<(), ConfigError> {
        self.theta_matrix().map(|_| ())?;
        let bad = |index: usize, id: &str, message: String| ConfigError::BadCheck {
            index,
            id: id.into(),
            message,
        };
        let order_ok = |k: u32, l: u32| (2..=8).contains(&k) && l <= k;
        for (i, check) in self.checks.iter().enumerate() {
            let id = check.id_str();
            match check {
                CheckConfig::Theorem(TheoremParams { k, l, p, q, .. })
                | CheckConfig::CommutativeCross(CommutativeCrossParams { k, l, p, q, .. }) => {
                    if *p <= 1.0 || *q <= 1.0 {
                        return Err(bad(
                            i,
                            id,
                            format!(
                                "p = {p}, q = {q}: the averaging operator is unbounded at the \
                                 L_1 endpoint; use the R1.2 check for the p = q = 1 inequality"
                            ),
                        ));
                    }
                    if !order_ok(*k, *l) {
                        return Err(bad(
                            i,
                            id,
                            format!("need 2 <= k <= 8 and l <= k, got k={k} l={l}"),
                        ));
                    }
                    if matches!(check, CheckConfig::CommutativeCross(_))
                        && self.theta_descriptor() != "zero"
                    {
                        return Err(bad(
                            i,
                            id,
                            "cross-validation requires theta = \"zero\"".into(),
                        ));
                    }
                }
                CheckConfig::Endpoint(EndpointParams { k, l, .. }) => {
                    if !order_ok(*k, *l) {
                        return Err(bad(
                            i,
                            id,
                            format!("need 2 <= k <= 8 and l <= k, got k={k} l={l}"),
                        ));
                    }
                }
                CheckConfig::HigherInterpolation(HigherInterpolationParams {
                    k, alpha, ..
                }) => {
                    if alpha.len() != self.dimension {
                        return Err(bad(i, id, "alpha length must equal dimension".into()));
                    }
                    if alpha.iter().any(|&a| a < 0) {
                        return Err(bad(i, id, "alpha must be nonnegative".into()));
                    }
                    let order: i64 = alpha.iter().sum();
                    if !(2..=8).contains(k) || order > *k as i64 {
                        return Err(bad(
                            i,
                            id,
                            format!("need 2 <= k <= 8 and |alpha| <= k, got k={k}"),
                        ));
                    }
                }
                CheckConfig::Submajorization(SubmajorizationParams {
                    axis,
                    delta_min,
                    delta_max,
                    delta_points,
                    ..
                }) => {
                    if *axis >= self.dimension {
                        return Err(bad(i, id, "axis out of range".into()));
                    }
                    if !(*delta_min > 0.0 && delta_max > delta_min && *delta_points >= 1) {
                        return Err(bad(i, id, "need 0 < delta_min < delta_max".into()));
                    }
                }
                CheckConfig::CesaroInterpolation(CesaroInterpolationParams { axis, .. }) => {
                    if *axis >= self.dimension {
                        return Err(bad(i, id, "axis out of range".into()));
                    }
                }
                CheckConfig::SequenceInterpolation(SequenceInterpolationParams {
                    k_max, ..
                }) => {
                    if !(2..=8).contains(k_max) {
                        return Err(bad(i, id, "need 2 <= k_max <= 8".into()));
                    }
                }
                CheckConfig::FieldInterpolation(FieldInterpolationParams { k, .. }) => {
                    if !(2..=8).contains(k) || self.dimension > 3 {
                        return Err(bad(i, id, "need 2 <= k <= 8 and dimension <= 3".into()));
                    }
                }
                CheckConfig::ScalarIdentity(ScalarIdentityParams {
                    delta_range,
                    points,
                }) => {
                    if !(*delta_range > 0.0 && *points >= 2) {
                        return Err(bad(i, id, "need positive range and >= 2 points".into()));
                    }
                }
                CheckConfig::MatrixIdentity(MatrixIdentityParams { n, .. }) => {
                    if !(1..=64).contains(n) {
                        return Err(bad(i, id, "need 1 <= n <= 64".into()));
                    }
                }
                CheckConfig::FrequencyShift(_) => {}
            }
        }
        Ok(())
    }
}

/// Log-spaced δ-grid used by the submajorization check.
pub fn delta_grid(min: f64, max: f64, points: usize) -> Vec<f64> {
    if points == 1 {
        return vec![min];
    }
    (0..points)
        .map(|i| {
            let t = i as f64 / (points - 1) as f64;
            min * (max / min).powf(t)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_fill_in() {
        let cfg = RunConfig::parse("").unwrap();
        assert_eq!(cfg.dimension, 2);
        assert_eq!(cfg.theta, "golden");
        assert_eq!(cfg.seed, 1);
        assert_eq!(cfg.truncation.l_max, 32);
        assert!(cfg.checks.is_empty());
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(RunConfig::parse("bogus_key = 1").is_err());
        assert!(RunConfig::parse("[[checks]]\nid = \"L3.4\"\nbogus = 2").is_err());
        assert!(RunConfig::parse("[[checks]]\nid = \"NOPE\"").is_err());
    }

    #[test]
    fn theta_presets_resolve() {
        let zero = RunConfig::parse("theta = \"zero\"").unwrap();
        assert!(zero.theta_matrix().unwrap().is_zero());
        let rational = RunConfig::parse("theta = \"3/7\"").unwrap();
        assert!((rational.theta_matrix().unwrap().get(0, 1) - 3.0 / 7.0).abs() <= 1e-15);
        assert!(RunConfig::parse("theta = \"nonsense\"").is_err());
        let golden = RunConfig::parse("dimension = 3").unwrap();
        assert_eq!(golden.theta_matrix().unwrap().dim(), 3);
    }

    #[test]
    fn explicit_matrix_is_validated() {
        let good = r#"
theta_matrix = [[0.0, 0.25], [-0.25, 0.0]]
"#;
        assert!(RunConfig::parse(good).is_ok());
        let bad = r#"
theta_matrix = [[0.0, 0.25], [0.25, 0.0]]
"#;
        assert!(RunConfig::parse(bad).is_err());
    }

    #[test]
    fn endpoint_exponent_is_a_config_error() {
        let text = r#"
[[checks]]
id = "THM"
k = 2
l = 1
p = 1.0
q = 2.0
"#;
        let err = RunConfig::parse(text).unwrap_err();
        assert!(err.to_string().contains("R1.2"), "{err}");
    }

    #[test]
    fn cross_check_requires_zero_twist() {
        let text = r#"
[[checks]]
id = "C1.3"
k = 2
l = 1
p = 2.0
q = 2.0
"#;
        assert!(RunConfig::parse(text).is_err());
        let ok = format!("theta = \"zero\"\n{text}");
        assert!(RunConfig::parse(&ok).is_ok());
    }

    #[test]
    fn delta_grid_is_log_spaced() {
        let g = delta_grid(0.1, 10.0, 3);
        assert!((g[0] - 0.1).abs() <= 1e-15);
        assert!((g[1] - 1.0).abs() <= 1e-12);
        assert!((g[2] - 10.0).abs() <= 1e-12);
    }
}
