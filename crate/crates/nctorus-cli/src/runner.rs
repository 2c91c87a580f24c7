//! Executes a run configuration into a report, plus the μ-data dumper.
//!
//! Samples run in parallel; record order is canonical (check ordinal,
//! config position, sample index) and every sample draws from its own
//! counter-derived RNG stream, so the report body is independent of
//! scheduling.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use rayon::prelude::*;
use thiserror::Error;

use nctorus::algebra::{random_element, MultiIndex, TorusElement};
use nctorus::spectral::TruncationPolicy;
use nctorus::stream::sample_rng;
use nctorus::symspace::{cesaro, comparison_grid, Curve, StepFunction};
use nctorus::verify::{self, CheckId, GnReport, ParamEcho, PipelineContext};

use crate::config::{
    delta_grid, CesaroInterpolationParams, CheckConfig, CommutativeCrossParams, ConfigError,
    EndpointParams, FieldInterpolationParams, FrequencyShiftParams, HigherInterpolationParams,
    MatrixIdentityParams, RunConfig, ScalarIdentityParams, SequenceInterpolationParams,
    SubmajorizationParams, TheoremParams,
};
use crate::report::{ReportBody, ReportFile, ReportMeta, SCHEMA_VERSION};

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("check execution failed: {0}")]
    Check(String),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
    #[error("unknown sample id `{0}` (expected \"CHECK:index\" for an element-bearing check)")]
    UnknownSample(String),
}

impl From<verify::VerifyError> for RunError {
    fn from(e: verify::VerifyError) -> Self {
        RunError::Check(e.to_string())
    }
}

/// Stream ordinal for a check at a config position: block index in the
/// high bits so repeated check ids draw independent samples.
fn stream_ordinal(check: CheckId, block: usize) -> u32 {
    (block as u32) << 8 | check.ordinal()
}

fn base_echo(config: &RunConfig, seed: u64, sample: u32) -> ParamEcho {
    ParamEcho {
        d: config.dimension,
        theta: config.theta_descriptor(),
        seed,
        sample,
        ..ParamEcho::default()
    }
}

fn pipeline_element(
    config: &RunConfig,
    ordinal: u32,
    sample: u32,
    seed: u64,
    support: i64,
    decay: f64,
) -> Result<TorusElement, RunError> {
    let theta = config.theta_matrix()?;
    let mut rng = sample_rng(seed, ordinal, sample);
    Ok(random_element(&theta, support, decay, true, &mut rng))
}

fn pipeline_ctx(
    config: &RunConfig,
    check: CheckId,
    block: usize,
    sample: u32,
    seed: u64,
    support: i64,
    decay: f64,
) -> Result<PipelineContext, RunError> {
    let ordinal = stream_ordinal(check, block);
    let element = pipeline_element(config, ordinal, sample, seed, support, decay)?;
    let policy: TruncationPolicy = config.truncation.policy(support);
    let mut echo = base_echo(config, seed, sample);
    echo.support = Some(support);
    echo.decay = Some(decay);
    Ok(PipelineContext::new(element, policy, echo))
}

/// One (check, sample) cell, run to a record.
fn run_cell(
    config: &RunConfig,
    block: usize,
    check: &CheckConfig,
    sample: u32,
    seed: u64,
) -> Result<GnReport, RunError> {
    let rel_tol = config.tolerances.pipeline_rel;
    match check {
        CheckConfig::ScalarIdentity(ScalarIdentityParams {
            delta_range,
            points,
        }) => {
            let half = points / 2;
            let mut deltas = Vec::with_capacity(2 * half);
            for i in 0..half {
                let t = (i as f64 + 1.0) / half as f64;
                deltas.push(-delta_range * t);
                deltas.push(delta_range * t);
            }
            let mut r = verify::check_scalar_integral_identity(&deltas, seed);
            r.params.theta = config.theta_descriptor();
            Ok(r)
        }
        CheckConfig::MatrixIdentity(MatrixIdentityParams { n, .. }) => {
            Ok(verify::check_matrix_integral_identity(*n, seed, sample))
        }
        CheckConfig::SequenceInterpolation(SequenceInterpolationParams { k_max, trials }) => {
            Ok(verify::check_sequence_interpolation(*k_max, *trials, seed))
        }
        CheckConfig::FieldInterpolation(FieldInterpolationParams { k, trials }) => Ok(
            verify::check_field_interpolation(config.dimension, *k, *trials, seed),
        ),
        CheckConfig::FrequencyShift(FrequencyShiftParams {
            support,
            decay,
            t_values,
            ..
        }) => {
            let theta = config.theta_matrix()?;
            let ordinal = stream_ordinal(CheckId::L37, block);
            let mut rng = sample_rng(seed, ordinal, sample);
            let x = random_element(&theta, *support, *decay, false, &mut rng);
            let y = random_element(&theta, *support, *decay, false, &mut rng);
            let mut r = verify::check_frequency_shift_automorphism(
                &x,
                &y,
                t_values,
                &config.theta_descriptor(),
                seed,
                sample,
            );
            r.params.decay = Some(*decay);
            Ok(r)
        }
        CheckConfig::Submajorization(SubmajorizationParams {
            support,
            decay,
            axis,
            delta_min,
            delta_max,
            delta_points,
            ..
        }) => {
            let mut ctx =
                pipeline_ctx(config, CheckId::L32, block, sample, seed, *support, *decay)?;
            let deltas = delta_grid(*delta_min, *delta_max, *delta_points);
            Ok(verify::check_derivative_submajorization(
                &mut ctx, *axis, &deltas, rel_tol,
            )?)
        }
        CheckConfig::CesaroInterpolation(CesaroInterpolationParams {
            support,
            decay,
            axis,
            grid_points,
            ..
        }) => {
            let mut ctx =
                pipeline_ctx(config, CheckId::L33, block, sample, seed, *support, *decay)?;
            Ok(verify::check_cesaro_interpolation(
                &mut ctx,
                *axis,
                rel_tol,
                *grid_points,
            )?)
        }
        CheckConfig::HigherInterpolation(HigherInterpolationParams {
            k,
            alpha,
            support,
            decay,
            grid_points,
            ..
        }) => {
            let mut ctx =
                pipeline_ctx(config, CheckId::L36, block, sample, seed, *support, *decay)?;
            let alpha = MultiIndex::new(alpha.clone());
            Ok(verify::check_higher_cesaro_interpolation(
                &mut ctx,
                &alpha,
                *k,
                rel_tol,
                *grid_points,
            )?)
        }
        CheckConfig::Theorem(TheoremParams {
            k,
            l,
            p,
            q,
            support,
            decay,
            ..
        }) => {
            let mut ctx =
                pipeline_ctx(config, CheckId::Theorem, block, sample, seed, *support, *decay)?;
            Ok(verify::check_main_inequality(&mut ctx, *k, *l, *p, *q)?)
        }
        CheckConfig::Endpoint(EndpointParams {
            k,
            l,
            support,
            decay,
            ..
        }) => {
            let mut ctx =
                pipeline_ctx(config, CheckId::Endpoint, block, sample, seed, *support, *decay)?;
            Ok(verify::check_l1_inequality(&mut ctx, *k, *l)?)
        }
        CheckConfig::CommutativeCross(CommutativeCrossParams {
            k,
            l,
            p,
            q,
            support,
            decay,
            sampling_grid,
            ..
        }) => {
            let mut ctx = pipeline_ctx(
                config,
                CheckId::Commutative,
                block,
                sample,
                seed,
                *support,
                *decay,
            )?;
            Ok(verify::check_commutative_cross(
                &mut ctx,
                *k,
                *l,
                *p,
                *q,
                *sampling_grid,
            )?)
        }
    }
}

fn sample_count(check: &CheckConfig) -> u32 {
    match check {
        CheckConfig::ScalarIdentity(_)
        | CheckConfig::SequenceInterpolation(_)
        | CheckConfig::FieldInterpolation(_) => 1,
        CheckConfig::MatrixIdentity(MatrixIdentityParams { samples, .. })
        | CheckConfig::Submajorization(SubmajorizationParams { samples, .. })
        | CheckConfig::CesaroInterpolation(CesaroInterpolationParams { samples, .. })
        | CheckConfig::HigherInterpolation(HigherInterpolationParams { samples, .. })
        | CheckConfig::FrequencyShift(FrequencyShiftParams { samples, .. })
        | CheckConfig::Theorem(TheoremParams { samples, .. })
        | CheckConfig::Endpoint(EndpointParams { samples, .. })
        | CheckConfig::CommutativeCross(CommutativeCrossParams { samples, .. }) => *samples,
    }
}

/// Executes all requested checks into a canonical record list.
pub fn execute(config: &RunConfig, seed: u64) -> Result<ReportBody, RunError> {
    let mut cells: Vec<(usize, u32, &CheckConfig)> = Vec::new();
    for (block, check) in config.checks.iter().enumerate() {
        for sample in 0..sample_count(check) {
            cells.push((block, sample, check));
        }
    }
    // Canonical record order: check ordinal, then config position, then
    // sample index; execution order is irrelevant to the output.
    cells.sort_by_key(|(block, sample, check)| {
        (
            CheckId::parse(check.id_str()).expect("known id").ordinal(),
            *block,
            *sample,
        )
    });
    let records: Result<Vec<GnReport>, RunError> = cells
        .par_iter()
        .map(|(block, sample, check)| run_cell(config, *block, check, *sample, seed))
        .collect();
    Ok(ReportBody::from_records(records?))
}

fn now_unix() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

/// Full `run` entry point: parse, execute, write `report.json`, return the
/// exit code.
pub fn run(
    config_path: &Path,
    seed_override: Option<u64>,
    out_override: Option<PathBuf>,
) -> Result<(i32, PathBuf), RunError> {
    let raw = fs::read_to_string(config_path)?;
    let config = RunConfig::parse(&raw)?;
    let seed = seed_override.unwrap_or(config.seed);
    let out_dir = out_override.unwrap_or_else(|| PathBuf::from(&config.out_dir));
    let body = execute(&config, seed)?;
    let report = ReportFile {
        meta: ReportMeta {
            schema_version: SCHEMA_VERSION,
            generator: format!("nctorus {}", env!("CARGO_PKG_VERSION")),
            timestamp_unix: now_unix(),
            seed,
            config_echo: raw,
        },
        body,
    };
    fs::create_dir_all(&out_dir)?;
    let path = out_dir.join("report.json");
    fs::write(&path, report.to_json())?;
    Ok((report.body.exit_code(), path))
}

/// Spectrum dump for one sample of an element-bearing check:
/// `mu_*.csv` step functions (`t_right,value`) and their averaged
/// transforms on the comparison grid (`t,value`), plus a manifest.
pub fn dump_spectrum(
    config_path: &Path,
    sample_id: &str,
    seed_override: Option<u64>,
    out_override: Option<PathBuf>,
) -> Result<(PathBuf, Vec<String>), RunError> {
    let raw = fs::read_to_string(config_path)?;
    let config = RunConfig::parse(&raw)?;
    let seed = seed_override.unwrap_or(config.seed);
    let out_dir = out_override.unwrap_or_else(|| PathBuf::from(&config.out_dir));

    let (check_str, index_str) = sample_id
        .split_once(':')
        .ok_or_else(|| RunError::UnknownSample(sample_id.into()))?;
    let check_id =
        CheckId::parse(check_str).ok_or_else(|| RunError::UnknownSample(sample_id.into()))?;
    let sample: u32 = index_str
        .parse()
        .map_err(|_| RunError::UnknownSample(sample_id.into()))?;

    // Locate the first config block with this id and an element sample.
    let (block, check) = config
        .checks
        .iter()
        .enumerate()
        .find(|(_, c)| c.id_str() == check_id.as_str())
        .ok_or_else(|| RunError::UnknownSample(sample_id.into()))?;
    if sample >= sample_count(check) {
        return Err(RunError::UnknownSample(sample_id.into()));
    }
    let (support, decay, alphas): (i64, f64, Vec<MultiIndex>) = match check {
        CheckConfig::Submajorization(SubmajorizationParams {
            support,
            decay,
            axis,
            ..
        })
        | CheckConfig::CesaroInterpolation(CesaroInterpolationParams {
            support,
            decay,
            axis,
            ..
        }) => {
            let d = config.dimension;
            let mut double = vec![0i64; d];
            double[*axis] = 2;
            (
                *support,
                *decay,
                vec![
                    MultiIndex::zero(d),
                    MultiIndex::unit(d, *axis),
                    MultiIndex::new(double),
                ],
            )
        }
        CheckConfig::HigherInterpolation(HigherInterpolationParams {
            k,
            alpha,
            support,
            decay,
            ..
        }) => {
            let mut list = vec![MultiIndex::zero(config.dimension)];
            list.push(MultiIndex::new(alpha.clone()));
            list.extend(verify::indices_of_order(config.dimension, *k));
            (*support, *decay, list)
        }
        CheckConfig::Theorem(TheoremParams {
            k,
            l,
            support,
            decay,
            ..
        })
        | CheckConfig::CommutativeCross(CommutativeCrossParams {
            k,
            l,
            support,
            decay,
            ..
        })
        | CheckConfig::Endpoint(EndpointParams {
            k,
            l,
            support,
            decay,
            ..
        }) => {
            let mut list = vec![MultiIndex::zero(config.dimension)];
            list.extend(verify::indices_of_order(config.dimension, *l));
            list.extend(verify::indices_of_order(config.dimension, *k));
            (*support, *decay, list)
        }
        _ => return Err(RunError::UnknownSample(sample_id.into())),
    };

    let ordinal = stream_ordinal(check_id, block);
    let element = pipeline_element(&config, ordinal, sample, seed, support, decay)?;
    let policy = config.truncation.policy(support);
    let echo = base_echo(&config, seed, sample);
    let mut ctx = PipelineContext::new(element, policy, echo);

    fs::create_dir_all(&out_dir)?;
    let mut files = Vec::new();
    let mut curves: Vec<(String, StepFunction)> = Vec::new();
    for alpha in &alphas {
        let mu = ctx.mu(alpha)?;
        let name = alpha_tag(alpha);
        let path = out_dir.join(format!("mu_{name}.csv"));
        fs::write(&path, step_csv(&mu))?;
        files.push(path.file_name().unwrap().to_string_lossy().into_owned());
        curves.push((name, mu));
    }
    // Averaged transforms share one declared grid.
    let hyperbolics: Vec<_> = curves.iter().map(|(n, m)| (n.clone(), cesaro(m))).collect();
    let grid = comparison_grid(
        &hyperbolics.iter().map(|(_, h)| Curve::from(h)).collect::<Vec<_>>(),
        1024,
    );
    for (name, h) in &hyperbolics {
        let path = out_dir.join(format!("cesaro_{name}.csv"));
        let mut text = String::from("t,value\n");
        for &t in &grid {
            let _ = writeln!(text, "{t},{v}", v = h.eval(t));
        }
        fs::write(&path, text)?;
        files.push(path.file_name().unwrap().to_string_lossy().into_owned());
    }
    let manifest = out_dir.join("manifest.json");
    let manifest_body = serde_json::json!({
        "sample_id": sample_id,
        "seed": seed,
        "files": files,
    });
    fs::write(&manifest, serde_json::to_string_pretty(&manifest_body).unwrap())?;
    files.push("manifest.json".into());
    Ok((out_dir, files))
}

fn alpha_tag(alpha: &MultiIndex) -> String {
    if alpha.order() == 0 {
        "x".into()
    } else {
        let digits: Vec<String> = alpha.components().iter().map(|c| c.to_string()).collect();
        format!("d{}", digits.join("_"))
    }
}

/// Step function as CSV with shortest round-trip decimal rendering.
/// Runs of equal values are coalesced (same function, fewer rows).
fn step_csv(f: &StepFunction) -> String {
    let mut out = String::from("t_right,value\n");
    let mut pending: Option<(f64, f64)> = None;
    for (_, t, v) in f.pieces() {
        match pending {
            Some((_, pv)) if pv == v => pending = Some((t, v)),
            Some((pt, pv)) => {
                let _ = writeln!(out, "{pt},{pv}");
                pending = Some((t, v));
            }
            None => pending = Some((t, v)),
        }
    }
    if let Some((t, v)) = pending {
        let _ = writeln!(out, "{t},{v}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alpha_tags() {
        assert_eq!(alpha_tag(&MultiIndex::zero(2)), "x");
        assert_eq!(alpha_tag(&MultiIndex::new(vec![1, 0])), "d1_0");
        assert_eq!(alpha_tag(&MultiIndex::new(vec![0, 2])), "d0_2");
    }

    #[test]
    fn csv_rendering_round_trips() {
        let f = StepFunction::new(vec![1.0 / 3.0, 1.0], vec![2.5, 0.125]).unwrap();
        let text = step_csv(&f);
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("t_right,value"));
        let first = lines.next().unwrap();
        let (t, v) = first.split_once(',').unwrap();
        assert_eq!(t.parse::<f64>().unwrap(), 1.0 / 3.0);
        assert_eq!(v.parse::<f64>().unwrap(), 2.5);
    }
}
