//! Spectral-pipeline checks: submajorization, averaged-interpolation
//! grids, and the assembled inequality.
//!
//! All checks on one sample share a [`PipelineContext`], which memoizes
//! the converged μ estimate per derivative order. That makes the chain
//! consistent by construction: the assembled inequality is evaluated from
//! exactly the μ data its ingredient checks saw.

use std::collections::BTreeMap;

use crate::algebra::{MultiIndex, TorusElement};
use crate::spectral::{
    mu_converged, mu_sampling_oracle, MuDiagnostics, SpectralError, TruncationPolicy,
};
use crate::symspace::{
    cesaro, comparison_grid, norm, submajorize, Curve, GridFn, SpaceSpec, StepFunction,
    SymspaceError,
};
use crate::verify::constants;
use crate::verify::{CheckId, GnReport, ParamEcho};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Symspace(#[from] SymspaceError),
    #[error("norm exponents must exceed 1 here (got p={p}, q={q}); the L_1 endpoint has its own check")]
    EndpointExponent { p: f64, q: f64 },
    #[error("order parameters out of range: k={k}, l={l} (need 2 <= k <= 8, l <= k)")]
    BadOrders { k: u32, l: u32 },
    #[error("derivative order {0} does not match the element dimension")]
    BadAlpha(MultiIndex),
}

/// Per-sample μ cache plus the report-echo template for the sample.
pub struct PipelineContext {
    element: TorusElement,
    policy: TruncationPolicy,
    echo: ParamEcho,
    cache: BTreeMap<MultiIndex, (StepFunction, MuDiagnostics)>,
}

impl PipelineContext {
    pub fn new(element: TorusElement, policy: TruncationPolicy, echo: ParamEcho) -> Self {
        Self {
            element,
            policy,
            echo,
            cache: BTreeMap::new(),
        }
    }

    pub fn element(&self) -> &TorusElement {
        &self.element
    }

    pub fn policy(&self) -> &TruncationPolicy {
        &self.policy
    }

    /// Converged μ(∇^α x), memoized. Computed through the self-adjoint
    /// derivative (same singular value data, Hermitian section).
    pub fn mu(&mut self, alpha: &MultiIndex) -> Result<StepFunction, VerifyError> {
        self.ensure(alpha)?;
        Ok(self.cache[alpha].0.clone())
    }

    pub fn diagnostics(&mut self, alpha: &MultiIndex) -> Result<MuDiagnostics, VerifyError> {
        self.ensure(alpha)?;
        Ok(self.cache[alpha].1.clone())
    }

    fn ensure(&mut self, alpha: &MultiIndex) -> Result<(), VerifyError> {
        if alpha.dim() != self.element.dim() {
            return Err(VerifyError::BadAlpha(alpha.clone()));
        }
        if !self.cache.contains_key(alpha) {
            let derived = self
                .element
                .derive_selfadjoint(alpha)
                .map_err(|_| VerifyError::BadAlpha(alpha.clone()))?;
            let entry = mu_converged(&derived, &self.policy)?;
            self.cache.insert(alpha.clone(), entry);
        }
        Ok(())
    }

    /// All ladders seen so far converged.
    pub fn all_converged(&self) -> bool {
        self.cache.values().all(|(_, d)| d.converged)
    }

    fn deepest_window(&self) -> Option<i64> {
        self.cache.values().map(|(_, d)| d.l_final).max()
    }

    /// Echo template extended with the cache's convergence state.
    fn echo_with(&self, k: Option<u32>, l: Option<u32>, alpha: Option<&MultiIndex>) -> ParamEcho {
        let mut echo = self.echo.clone();
        echo.k = k;
        echo.l = l;
        echo.alpha = alpha.map(|a| a.components().to_vec());
        echo.l_final = self.deepest_window();
        echo
    }
}

/// β ∈ N^d with |β|₁ = order, in lexicographic order.
pub fn indices_of_order(d: usize, order: u32) -> Vec<MultiIndex> {
    super::exact::simplex_points(d, order)
        .into_iter()
        .filter(|p| p.iter().sum::<u32>() == order)
        .map(|p| MultiIndex::new(p.into_iter().map(|c| c as i64).collect()))
        .collect()
}

/// `D_jx ≺≺ δ^{−1}μ(x) + δ·μ(D_j²x)` over a δ-grid: the cumulative of
/// μ(D_jx) must stay below the mixed bound at every t, within `rel_tol`
/// of the cumulative scale.
pub fn check_derivative_submajorization(
    ctx: &mut PipelineContext,
    axis: usize,
    deltas: &[f64],
    rel_tol: f64,
) -> Result<GnReport, VerifyError> {
    let d = ctx.element().dim();
    let e_j = MultiIndex::unit(d, axis);
    let e_jj = MultiIndex::new(
        (0..d).map(|a| if a == axis { 2 } else { 0 }).collect(),
    );
    let mu_d = ctx.mu(&e_j)?;
    let mu_x = ctx.mu(&MultiIndex::zero(d))?;
    let mu_dd = ctx.mu(&e_jj)?;

    let mut worst_rel = f64::NEG_INFINITY;
    let mut worst = (0.0, 0.0, 0.0); // (lhs, rhs, t) at the worst point
    for &delta in deltas {
        assert!(delta > 0.0, "δ must be positive");
        let bound = mu_x.combine(1.0 / delta, &mu_dd, delta);
        let sub = submajorize(&mu_d, &bound);
        let scale = mu_d.integral().max(bound.integral());
        let rel = if scale == 0.0 {
            0.0
        } else {
            sub.max_violation / scale
        };
        if rel > worst_rel {
            worst_rel = rel;
            let lhs = mu_d.cumulative(sub.worst_t).expect("t in range");
            let rhs = bound.cumulative(sub.worst_t).expect("t in range");
            worst = (lhs, rhs, sub.worst_t);
        }
    }
    let converged = ctx.all_converged();
    let ratio = 1.0 + worst_rel;
    Ok(GnReport {
        check_id: CheckId::L32,
        params: ctx.echo_with(None, None, Some(&MultiIndex::unit(d, axis))),
        lhs: worst.0,
        rhs: worst.1,
        constant_used: 1.0,
        ratio,
        converged,
        passed: worst_rel <= rel_tol,
        grid: format!("union-breakpoints, delta-grid[{}]", deltas.len()),
        max_violation: Some(worst_rel),
        note: Some(format!("worst t = {}", worst.2)),
    })
}

/// `Cμ(D_jx) ≤ 2·(Cμ(x))^{1/2}(Cμ(D_j²x))^{1/2}` on the declared grid.
pub fn check_cesaro_interpolation(
    ctx: &mut PipelineContext,
    axis: usize,
    rel_tol: f64,
    extra_points: usize,
) -> Result<GnReport, VerifyError> {
    let d = ctx.element().dim();
    let e_j = MultiIndex::unit(d, axis);
    let e_jj = MultiIndex::new(
        (0..d).map(|a| if a == axis { 2 } else { 0 }).collect(),
    );
    let c_d = cesaro(&ctx.mu(&e_j)?);
    let c_x = cesaro(&ctx.mu(&MultiIndex::zero(d))?);
    let c_dd = cesaro(&ctx.mu(&e_jj)?);

    let grid = comparison_grid(
        &[
            Curve::from(&c_d),
            Curve::from(&c_x),
            Curve::from(&c_dd),
        ],
        extra_points,
    );
    let lhs = GridFn::from_curve(Curve::from(&c_d), &grid);
    let rhs = GridFn::from_curve(Curve::from(&c_x), &grid)
        .powf(0.5)?
        .mul(&GridFn::from_curve(Curve::from(&c_dd), &grid).powf(0.5)?)
        .scale(2.0);
    let cmp = lhs.compare(&rhs);
    let converged = ctx.all_converged();
    Ok(GnReport {
        check_id: CheckId::L33,
        params: ctx.echo_with(None, None, Some(&e_j)),
        lhs: cmp.lhs,
        rhs: cmp.rhs,
        constant_used: 2.0,
        ratio: cmp.ratio,
        converged,
        passed: cmp.ratio <= 1.0 + rel_tol,
        grid: grid_descriptor(&grid, extra_points),
        max_violation: Some(cmp.ratio - 1.0),
        note: Some(format!("worst t = {}", cmp.t)),
    })
}

/// `Cμ(∇^αx) ≤ c_k (Cμ(x))^{1−l/k} (max_{|β|₁=k} Cμ(∇^βx))^{l/k}` on the
/// declared grid, the max taken pointwise.
pub fn check_higher_cesaro_interpolation(
    ctx: &mut PipelineContext,
    alpha: &MultiIndex,
    k: u32,
    rel_tol: f64,
    extra_points: usize,
) -> Result<GnReport, VerifyError> {
    let d = ctx.element().dim();
    let l = alpha.order() as u32;
    if !(2..=constants::MAX_ORDER).contains(&k) || l > k {
        return Err(VerifyError::BadOrders { k, l });
    }
    let c_alpha = cesaro(&ctx.mu(alpha)?);
    let c_x = cesaro(&ctx.mu(&MultiIndex::zero(d))?);
    let betas = indices_of_order(d, k);
    let c_betas: Vec<_> = betas
        .iter()
        .map(|b| ctx.mu(b).map(|m| cesaro(&m)))
        .collect::<Result<_, _>>()?;

    let mut curves = vec![Curve::from(&c_alpha), Curve::from(&c_x)];
    curves.extend(c_betas.iter().map(Curve::from));
    let grid = comparison_grid(&curves, extra_points);

    let lhs = GridFn::from_curve(Curve::from(&c_alpha), &grid);
    let mut peak = GridFn::from_curve(Curve::from(&c_betas[0]), &grid);
    for cb in &c_betas[1..] {
        peak = peak.pointwise_max(&GridFn::from_curve(Curve::from(cb), &grid));
    }
    let lw = l as f64 / k as f64;
    let constant = constants::c_f64(k);
    let rhs = GridFn::from_curve(Curve::from(&c_x), &grid)
        .powf(1.0 - lw)?
        .mul(&peak.powf(lw)?)
        .scale(constant);
    let cmp = lhs.compare(&rhs);
    let converged = ctx.all_converged();
    Ok(GnReport {
        check_id: CheckId::L36,
        params: ctx.echo_with(Some(k), Some(l), Some(alpha)),
        lhs: cmp.lhs,
        rhs: cmp.rhs,
        constant_used: constant,
        ratio: cmp.ratio,
        converged,
        passed: cmp.ratio <= 1.0 + rel_tol,
        grid: grid_descriptor(&grid, extra_points),
        max_violation: Some(cmp.ratio - 1.0),
        note: Some(format!("worst t = {}", cmp.t)),
    })
}

fn grid_descriptor(grid: &[f64], extra: usize) -> String {
    format!("union+log{extra}(1e-6,1], {} points", grid.len())
}

/// Norm-level data for the assembled inequality.
struct NormData {
    lhs: f64,
    norm_e: f64,
    peak_f: f64,
    converged: bool,
}

fn interpolation_norms(
    ctx: &mut PipelineContext,
    k: u32,
    l: u32,
    space_g: &SpaceSpec,
    space_e: &SpaceSpec,
    space_f: &SpaceSpec,
) -> Result<NormData, VerifyError> {
    let d = ctx.element().dim();
    let mut lhs = 0.0_f64;
    for alpha in indices_of_order(d, l) {
        let mu = ctx.mu(&alpha)?;
        lhs = lhs.max(norm(Curve::from(&mu), space_g)?);
    }
    let mu_x = ctx.mu(&MultiIndex::zero(d))?;
    let norm_e = norm(Curve::from(&mu_x), space_e)?;
    let mut peak_f = 0.0_f64;
    for beta in indices_of_order(d, k) {
        let mu = ctx.mu(&beta)?;
        peak_f = peak_f.max(norm(Curve::from(&mu), space_f)?);
    }
    Ok(NormData {
        lhs,
        norm_e,
        peak_f,
        converged: ctx.all_converged(),
    })
}

/// The interpolation space for the middle norm: E^{1−l/k} F^{l/k}
/// (collapsing to E at l = 0 and F at l = k).
fn middle_space(p: f64, q: f64, k: u32, l: u32) -> Result<SpaceSpec, VerifyError> {
    let e = SpaceSpec::lp(p)?;
    let f = SpaceSpec::lp(q)?;
    Ok(if l == 0 {
        e
    } else if l == k {
        f
    } else {
        SpaceSpec::composite(e, f, 1.0 - l as f64 / k as f64)?
    })
}

/// The assembled inequality: with G = E^{1−l/k}F^{l/k},
///
/// ```text
/// max_{|α|₁=l} ‖∇^αx‖_G ≤ c_k (k+1)^d ‖C‖_E^{1−l/k} ‖C‖_F^{l/k}
///                          · ‖x‖_E^{1−l/k} (max_{|β|₁=k}‖∇^βx‖_F)^{l/k}
/// ```
///
/// evaluated through converged μ data; requires p, q > 1 so the averaging
/// bounds are finite.
pub fn check_main_inequality(
    ctx: &mut PipelineContext,
    k: u32,
    l: u32,
    p: f64,
    q: f64,
) -> Result<GnReport, VerifyError> {
    if !(2..=constants::MAX_ORDER).contains(&k) || l > k {
        return Err(VerifyError::BadOrders { k, l });
    }
    if p <= 1.0 || q <= 1.0 {
        return Err(VerifyError::EndpointExponent { p, q });
    }
    let d = ctx.element().dim();
    let space_e = SpaceSpec::lp(p)?;
    let space_f = SpaceSpec::lp(q)?;
    let space_g = middle_space(p, q, k, l)?;
    let data = interpolation_norms(ctx, k, l, &space_g, &space_e, &space_f)?;

    let lw = l as f64 / k as f64;
    let constant = constants::theorem_constant_f64(k, d as u32)
        * space_e.cesaro_bound().powf(1.0 - lw)
        * space_f.cesaro_bound().powf(lw);
    let rhs = constant * data.norm_e.powf(1.0 - lw) * data.peak_f.powf(lw);
    let ratio = GnReport::ratio_of(data.lhs, rhs);
    Ok(GnReport {
        check_id: CheckId::Theorem,
        params: {
            let mut e = ctx.echo_with(Some(k), Some(l), None);
            e.p = Some(p);
            e.q = Some(q);
            e
        },
        lhs: data.lhs,
        rhs,
        constant_used: constant,
        ratio,
        converged: data.converged,
        passed: ratio <= 1.0,
        grid: "exact norms of converged mu data".into(),
        max_violation: None,
        note: None,
    })
}

/// Endpoint variant at p = q = 1: norms become ∫₀¹μ and the averaging
/// factors drop out of the constant.
pub fn check_l1_inequality(
    ctx: &mut PipelineContext,
    k: u32,
    l: u32,
) -> Result<GnReport, VerifyError> {
    if !(2..=constants::MAX_ORDER).contains(&k) || l > k {
        return Err(VerifyError::BadOrders { k, l });
    }
    let d = ctx.element().dim();
    let mut lhs = 0.0_f64;
    for alpha in indices_of_order(d, l) {
        lhs = lhs.max(ctx.mu(&alpha)?.integral());
    }
    let norm_x = ctx.mu(&MultiIndex::zero(d))?.integral();
    let mut peak = 0.0_f64;
    for beta in indices_of_order(d, k) {
        peak = peak.max(ctx.mu(&beta)?.integral());
    }
    let lw = l as f64 / k as f64;
    let constant = constants::theorem_constant_f64(k, d as u32);
    let rhs = constant * norm_x.powf(1.0 - lw) * peak.powf(lw);
    let ratio = GnReport::ratio_of(lhs, rhs);
    let converged = ctx.all_converged();
    Ok(GnReport {
        check_id: CheckId::Endpoint,
        params: {
            let mut e = ctx.echo_with(Some(k), Some(l), None);
            e.p = Some(1.0);
            e.q = Some(1.0);
            e
        },
        lhs,
        rhs,
        constant_used: constant,
        ratio,
        converged,
        passed: ratio <= 1.0,
        grid: "t = 1 evaluation of converged mu data".into(),
        max_violation: None,
        note: None,
    })
}

/// Untwisted cross-validation: the assembled inequality evaluated twice,
/// once through finite sections and once through the dense-grid sampling
/// rearrangement. Disagreement beyond 5% relative flags the spectral path
/// (a diagnostic failure, not an inequality violation).
pub fn check_commutative_cross(
    ctx: &mut PipelineContext,
    k: u32,
    l: u32,
    p: f64,
    q: f64,
    sampling_grid: usize,
) -> Result<GnReport, VerifyError> {
    if !(2..=constants::MAX_ORDER).contains(&k) || l > k {
        return Err(VerifyError::BadOrders { k, l });
    }
    if p <= 1.0 || q <= 1.0 {
        return Err(VerifyError::EndpointExponent { p, q });
    }
    let d = ctx.element().dim();
    let space_e = SpaceSpec::lp(p)?;
    let space_f = SpaceSpec::lp(q)?;
    let space_g = middle_space(p, q, k, l)?;
    let gns = interpolation_norms(ctx, k, l, &space_g, &space_e, &space_f)?;

    // Oracle path: classical rearrangement by dense sampling.
    let oracle_mu = |alpha: &MultiIndex| -> Result<StepFunction, VerifyError> {
        let derived = ctx
            .element()
            .derive_selfadjoint(alpha)
            .map_err(|_| VerifyError::BadAlpha(alpha.clone()))?;
        Ok(mu_sampling_oracle(&derived, sampling_grid)?)
    };
    let mut lhs_oracle = 0.0_f64;
    for alpha in indices_of_order(d, l) {
        lhs_oracle = lhs_oracle.max(norm(Curve::from(&oracle_mu(&alpha)?), &space_g)?);
    }
    let norm_e_oracle = norm(
        Curve::from(&oracle_mu(&MultiIndex::zero(d))?),
        &space_e,
    )?;
    let mut peak_f_oracle = 0.0_f64;
    for beta in indices_of_order(d, k) {
        peak_f_oracle = peak_f_oracle.max(norm(Curve::from(&oracle_mu(&beta)?), &space_f)?);
    }

    let lw = l as f64 / k as f64;
    let constant = constants::theorem_constant_f64(k, d as u32)
        * space_e.cesaro_bound().powf(1.0 - lw)
        * space_f.cesaro_bound().powf(lw);
    let rhs_gns = constant * gns.norm_e.powf(1.0 - lw) * gns.peak_f.powf(lw);
    let rhs_oracle = constant * norm_e_oracle.powf(1.0 - lw) * peak_f_oracle.powf(lw);
    let ratio_gns = GnReport::ratio_of(gns.lhs, rhs_gns);
    let ratio_oracle = GnReport::ratio_of(lhs_oracle, rhs_oracle);

    let agreement = if lhs_oracle == 0.0 && gns.lhs == 0.0 {
        0.0
    } else {
        (gns.lhs - lhs_oracle).abs() / lhs_oracle.max(f64::MIN_POSITIVE)
    };
    let agree_ok = agreement <= 0.05;
    Ok(GnReport {
        check_id: CheckId::Commutative,
        params: {
            let mut e = ctx.echo_with(Some(k), Some(l), None);
            e.p = Some(p);
            e.q = Some(q);
            e
        },
        lhs: gns.lhs,
        rhs: rhs_gns,
        constant_used: constant,
        ratio: ratio_gns.max(ratio_oracle),
        converged: gns.converged && agree_ok,
        passed: ratio_gns <= 1.0 && ratio_oracle <= 1.0,
        grid: format!("sections + sampling grid {sampling_grid}^{d}"),
        max_violation: Some(agreement),
        note: Some(format!(
            "oracle lhs {lhs_oracle:.6e}, section lhs {:.6e}, agreement {agreement:.4}",
            gns.lhs
        )),
    })
}
