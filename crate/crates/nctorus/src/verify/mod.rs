//! Structured inequality checks with margins and diagnostics.
//!
//! Each check evaluates one statement — an operator identity, a
//! combinatorial interpolation bound, a submajorization relation, or the
//! full interpolation inequality — and returns a [`GnReport`] carrying the
//! two compared sides, the constant in force, the ratio, a pass flag, and
//! whether every spectral estimate involved converged. The combinatorial
//! checks run in exact (dyadic-integer) arithmetic; spectral checks
//! tolerate the declared truncation budget.
//!
//! A report is reproducible from `(check_id, params, seed)`: randomized
//! checks draw from [`crate::stream::sample_rng`] keyed by the check's
//! ordinal and the sample index.

pub mod constants;
mod exact;
mod pipeline;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use exact::{
    check_field_interpolation, check_frequency_shift_automorphism,
    check_matrix_integral_identity, check_scalar_integral_identity,
    check_sequence_interpolation,
};
pub use pipeline::{
    check_cesaro_interpolation, check_commutative_cross, check_derivative_submajorization,
    check_higher_cesaro_interpolation, check_l1_inequality, check_main_inequality,
    indices_of_order, PipelineContext, VerifyError,
};

/// Identifiers of the checkable statements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CheckId {
    L31Scalar,
    L31Matrix,
    L32,
    L33,
    L34,
    L35,
    L36,
    L37,
    Theorem,
    Endpoint,
    Commutative,
}

impl CheckId {
    pub const ALL: [CheckId; 11] = [
        CheckId::L31Scalar,
        CheckId::L31Matrix,
        CheckId::L32,
        CheckId::L33,
        CheckId::L34,
        CheckId::L35,
        CheckId::L36,
        CheckId::L37,
        CheckId::Theorem,
        CheckId::Endpoint,
        CheckId::Commutative,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            CheckId::L31Scalar => "L3.1s",
            CheckId::L31Matrix => "L3.1m",
            CheckId::L32 => "L3.2",
            CheckId::L33 => "L3.3",
            CheckId::L34 => "L3.4",
            CheckId::L35 => "L3.5",
            CheckId::L36 => "L3.6",
            CheckId::L37 => "L3.7",
            CheckId::Theorem => "THM",
            CheckId::Endpoint => "R1.2",
            CheckId::Commutative => "C1.3",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|id| id.as_str() == s)
    }

    /// Stream ordinal for seed derivation (position in [`Self::ALL`]).
    pub fn ordinal(&self) -> u32 {
        Self::ALL.iter().position(|id| id == self).expect("listed") as u32
    }
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for CheckId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for CheckId {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = String::deserialize(d)?;
        CheckId::parse(&raw)
            .ok_or_else(|| serde::de::Error::custom(format!("unknown check id `{raw}`")))
    }
}

/// Echo of the parameters a record was produced from.
#[derive(Debug, Clone, Default, Serialize, Deserialize, PartialEq)]
pub struct ParamEcho {
    pub d: usize,
    pub theta: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub k: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub l: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub alpha: Option<Vec<i64>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub p: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub q: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub support: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub decay: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub l_final: Option<i64>,
    pub seed: u64,
    pub sample: u32,
}

/// One verification record.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GnReport {
    pub check_id: CheckId,
    pub params: ParamEcho,
    pub lhs: f64,
    pub rhs: f64,
    pub constant_used: f64,
    /// lhs/rhs (0/0 counts as 0); a pass requires ratio ≤ 1 plus the
    /// check's declared tolerance.
    pub ratio: f64,
    pub converged: bool,
    pub passed: bool,
    /// Description of the comparison grid or arithmetic mode.
    pub grid: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub max_violation: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

impl GnReport {
    pub(crate) fn ratio_of(lhs: f64, rhs: f64) -> f64 {
        if lhs == 0.0 && rhs == 0.0 {
            0.0
        } else {
            lhs / rhs
        }
    }
}
