//! Calculus of piecewise functions on (0,1].
//!
//! Singular value data arrives as non-increasing step functions with steps
//! of width 1/N. This module provides the function-space side of the
//! machinery: decreasing rearrangement, exact cumulative integrals, the
//! averaging operator `C(φ)(t) = (1/t)∫_0^t φ`, submajorization decisions,
//! and norms for the L_p scale together with its interpolation composites
//! (`E^ε F^{1−ε}` of L_p and L_q evaluated as L_r with 1/r = ε/p + (1−ε)/q).
//!
//! Conventions: a [`StepFunction`] takes the value `v_i` on the half-open
//! piece `(t_{i−1}, t_i]` with `t_0 = 0` and `t_m = 1`; the image of a step
//! function under the averaging operator is a [`PiecewiseHyperbolic`]
//! function `t ↦ β_i + α_i/t` on the same pieces. Both evaluate exactly, so
//! integrals of step functions and of integer powers of hyperbolic pieces
//! are closed-form; fractional powers fall back to Gauss–Legendre panels.

use std::sync::OnceLock;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum SymspaceError {
    #[error("breakpoints must increase strictly to 1, offending index {0}")]
    BadBreakpoints(usize),
    #[error("breakpoint/value length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("weights must be positive and sum to 1 (got sum {0})")]
    BadWeights(f64),
    #[error("evaluation point {0} outside [0,1]")]
    OutOfRange(f64),
    #[error("exponent p must satisfy p >= 1, got {0}")]
    BadExponent(f64),
    #[error("interpolation weight must lie in (0,1), got {0}")]
    BadWeight(f64),
    #[error("negative base {base} under fractional exponent {exponent}")]
    NegativeBase { base: f64, exponent: f64 },
    #[error("domination fails at t = {t}: |h| = {lhs} > {rhs}")]
    DominationViolated { t: f64, lhs: f64, rhs: f64 },
}

/// Right endpoint list of a partition of (0,1]; `cuts[i]` is `t_{i+1}`.
fn validate_cuts(cuts: &[f64]) -> Result<(), SymspaceError> {
    if cuts.is_empty() {
        return Err(SymspaceError::BadBreakpoints(0));
    }
    let mut prev = 0.0;
    for (i, &t) in cuts.iter().enumerate() {
        if t <= prev || !t.is_finite() {
            return Err(SymspaceError::BadBreakpoints(i));
        }
        prev = t;
    }
    if *cuts.last().unwrap() != 1.0 {
        return Err(SymspaceError::BadBreakpoints(cuts.len() - 1));
    }
    Ok(())
}

/// A finitely-piecewise constant function on (0,1].
#[derive(Debug, Clone, PartialEq)]
pub struct StepFunction {
    cuts: Vec<f64>,
    values: Vec<f64>,
}

impl StepFunction {
    pub fn new(cuts: Vec<f64>, values: Vec<f64>) -> Result<Self, SymspaceError> {
        if cuts.len() != values.len() {
            return Err(SymspaceError::LengthMismatch(cuts.len(), values.len()));
        }
        validate_cuts(&cuts)?;
        Ok(Self { cuts, values })
    }

    pub fn constant(v: f64) -> Self {
        Self {
            cuts: vec![1.0],
            values: vec![v],
        }
    }

    pub fn cuts(&self) -> &[f64] {
        &self.cuts
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn piece_count(&self) -> usize {
        self.cuts.len()
    }

    /// Iterates `(t_left, t_right, value)` triples.
    pub fn pieces(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        let lefts = std::iter::once(0.0).chain(self.cuts.iter().copied());
        lefts
            .zip(self.cuts.iter().copied())
            .zip(self.values.iter().copied())
            .map(|((a, b), v)| (a, b, v))
    }

    /// Value on the piece containing t ∈ (0,1].
    pub fn eval(&self, t: f64) -> f64 {
        assert!(t > 0.0 && t <= 1.0, "step function evaluated at {t}");
        let i = self.cuts.partition_point(|&c| c < t);
        self.values[i]
    }

    /// ∫_0^t of the function (exact piecewise-linear accumulation).
    pub fn cumulative(&self, t: f64) -> Result<f64, SymspaceError> {
        if !(0.0..=1.0).contains(&t) {
            return Err(SymspaceError::OutOfRange(t));
        }
        let mut acc = 0.0;
        let mut left = 0.0;
        for (&cut, &v) in self.cuts.iter().zip(&self.values) {
            if t <= cut {
                acc += v * (t - left);
                return Ok(acc);
            }
            acc += v * (cut - left);
            left = cut;
        }
        Ok(acc)
    }

    /// ∫_0^1 (signed).
    pub fn integral(&self) -> f64 {
        let mut acc = 0.0;
        let mut left = 0.0;
        for (&cut, &v) in self.cuts.iter().zip(&self.values) {
            acc += v * (cut - left);
            left = cut;
        }
        acc
    }

    pub fn is_nonincreasing(&self) -> bool {
        self.values.windows(2).all(|w| w[0] >= w[1])
    }

    pub fn is_nonnegative(&self) -> bool {
        self.values.iter().all(|&v| v >= 0.0)
    }

    pub fn scale(&self, c: f64) -> Self {
        Self {
            cuts: self.cuts.clone(),
            values: self.values.iter().map(|v| c * v).collect(),
        }
    }

    /// a·self + b·other on the merged partition.
    pub fn combine(&self, a: f64, other: &Self, b: f64) -> Self {
        let mut cuts = Vec::with_capacity(self.cuts.len() + other.cuts.len());
        let mut values = Vec::with_capacity(cuts.capacity());
        let (mut i, mut j) = (0, 0);
        while i < self.cuts.len() || j < other.cuts.len() {
            let ci = self.cuts.get(i).copied().unwrap_or(f64::INFINITY);
            let cj = other.cuts.get(j).copied().unwrap_or(f64::INFINITY);
            let cut = ci.min(cj);
            values.push(a * self.values[i.min(self.values.len() - 1)]
                + b * other.values[j.min(other.values.len() - 1)]);
            cuts.push(cut);
            if ci <= cut {
                i += 1;
            }
            if cj <= cut {
                j += 1;
            }
        }
        Self { cuts, values }
    }

    /// L_1 distance ∫|self − other| over (0,1].
    pub fn l1_distance(&self, other: &Self) -> f64 {
        let diff = self.combine(1.0, other, -1.0);
        let mut acc = 0.0;
        let mut left = 0.0;
        for (&cut, &v) in diff.cuts.iter().zip(&diff.values) {
            acc += v.abs() * (cut - left);
            left = cut;
        }
        acc
    }
}

/// Non-increasing rearrangement of weighted samples.
///
/// Sorts |values| descending and lays them out as steps whose widths are
/// the corresponding weights; weights must be positive and sum to 1 within
/// 1e−12 (the partition is renormalized so the last breakpoint is exactly 1).
pub fn rearrange(values: &[f64], weights: &[f64]) -> Result<StepFunction, SymspaceError> {
    if values.len() != weights.len() || values.is_empty() {
        return Err(SymspaceError::LengthMismatch(values.len(), weights.len()));
    }
    let total: f64 = weights.iter().sum();
    if weights.iter().any(|&w| w <= 0.0) || (total - 1.0).abs() > 1e-12 {
        return Err(SymspaceError::BadWeights(total));
    }
    let mut pairs: Vec<(f64, f64)> = values
        .iter()
        .zip(weights)
        .map(|(&v, &w)| (v.abs(), w))
        .collect();
    pairs.sort_by(|a, b| b.0.partial_cmp(&a.0).expect("finite values"));
    let mut cuts = Vec::with_capacity(pairs.len());
    let mut vals = Vec::with_capacity(pairs.len());
    let mut acc = 0.0;
    for (v, w) in &pairs {
        acc += w / total;
        cuts.push(acc);
        vals.push(*v);
    }
    *cuts.last_mut().unwrap() = 1.0;
    StepFunction::new(cuts, vals)
}

/// A function that is `β_i + α_i / t` on each piece `(t_{i−1}, t_i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseHyperbolic {
    cuts: Vec<f64>,
    alphas: Vec<f64>,
    betas: Vec<f64>,
}

impl PiecewiseHyperbolic {
    pub fn cuts(&self) -> &[f64] {
        &self.cuts
    }

    pub fn eval(&self, t: f64) -> f64 {
        assert!(t > 0.0 && t <= 1.0, "hyperbolic function evaluated at {t}");
        let i = self.cuts.partition_point(|&c| c < t);
        self.betas[i] + self.alphas[i] / t
    }

    /// Iterates `(t_left, t_right, alpha, beta)`.
    pub fn pieces(&self) -> impl Iterator<Item = (f64, f64, f64, f64)> + '_ {
        let lefts = std::iter::once(0.0).chain(self.cuts.iter().copied());
        lefts
            .zip(self.cuts.iter().copied())
            .zip(self.alphas.iter().copied().zip(self.betas.iter().copied()))
            .map(|((a, b), (al, be))| (a, b, al, be))
    }
}

/// Averaging (Hardy) transform of a step function:
/// `C(φ)(t) = (1/t)∫_0^t φ`, which is `v_i + (F(t_{i−1}) − v_i t_{i−1})/t`
/// on piece i (F the cumulative). Continuous, and ≥ φ pointwise when φ is
/// non-increasing and nonnegative.
pub fn cesaro(phi: &StepFunction) -> PiecewiseHyperbolic {
    let mut alphas = Vec::with_capacity(phi.piece_count());
    let mut betas = Vec::with_capacity(phi.piece_count());
    let mut cumulative = 0.0;
    let mut left = 0.0;
    for (&cut, &v) in phi.cuts.iter().zip(&phi.values) {
        alphas.push(cumulative - v * left);
        betas.push(v);
        cumulative += v * (cut - left);
        left = cut;
    }
    PiecewiseHyperbolic {
        cuts: phi.cuts.clone(),
        alphas,
        betas,
    }
}

/// Outcome of a submajorization comparison.
#[derive(Debug, Clone, Copy)]
pub struct Submajorization {
    pub holds: bool,
    /// max_t [∫_0^t φ − ∫_0^t ψ]; nonpositive iff the relation holds.
    pub max_violation: f64,
    /// A t attaining the maximum.
    pub worst_t: f64,
}

/// Decides `φ ≺≺ ψ`, i.e. `∫_0^t φ ≤ ∫_0^t ψ` for all t.
///
/// Inputs that are not non-increasing are rearranged first. For
/// non-increasing steps both cumulatives are concave piecewise-linear, so
/// comparing at the union of breakpoints is exact.
pub fn submajorize(phi: &StepFunction, psi: &StepFunction) -> Submajorization {
    let phi_r;
    let psi_r;
    let phi = if phi.is_nonincreasing() {
        phi
    } else {
        phi_r = rearrange_steps(phi);
        &phi_r
    };
    let psi = if psi.is_nonincreasing() {
        psi
    } else {
        psi_r = rearrange_steps(psi);
        &psi_r
    };

    let mut max_violation = f64::NEG_INFINITY;
    let mut worst_t = 0.0;
    let (mut i, mut j) = (0, 0);
    let (mut f, mut g) = (0.0_f64, 0.0_f64);
    let mut left = 0.0;
    while i < phi.cuts.len() || j < psi.cuts.len() {
        let ci = phi.cuts.get(i).copied().unwrap_or(f64::INFINITY);
        let cj = psi.cuts.get(j).copied().unwrap_or(f64::INFINITY);
        let cut = ci.min(cj);
        f += phi.values[i.min(phi.values.len() - 1)] * (cut - left);
        g += psi.values[j.min(psi.values.len() - 1)] * (cut - left);
        if f - g > max_violation {
            max_violation = f - g;
            worst_t = cut;
        }
        left = cut;
        if ci <= cut {
            i += 1;
        }
        if cj <= cut {
            j += 1;
        }
    }
    Submajorization {
        holds: max_violation <= 0.0,
        max_violation,
        worst_t,
    }
}

fn rearrange_steps(f: &StepFunction) -> StepFunction {
    let widths: Vec<f64> = f
        .pieces()
        .map(|(a, b, _)| b - a)
        .collect();
    rearrange(&f.values, &widths).expect("valid partition widths")
}

/// A symmetric function space on (0,1): an L_p space or an interpolation
/// composite `E^ε F^{1−ε}`, which on the L_p scale collapses to L_r with
/// 1/r = ε/p + (1−ε)/q.
#[derive(Debug, Clone, PartialEq)]
pub enum SpaceSpec {
    /// L_p with p ∈ [1, ∞].
    Lp(f64),
    /// E^ε F^{1−ε}.
    Composite {
        e: Box<SpaceSpec>,
        f: Box<SpaceSpec>,
        epsilon: f64,
    },
}

impl SpaceSpec {
    pub fn lp(p: f64) -> Result<Self, SymspaceError> {
        if p.is_nan() || p < 1.0 {
            return Err(SymspaceError::BadExponent(p));
        }
        Ok(SpaceSpec::Lp(p))
    }

    pub fn composite(e: SpaceSpec, f: SpaceSpec, epsilon: f64) -> Result<Self, SymspaceError> {
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(SymspaceError::BadWeight(epsilon));
        }
        Ok(SpaceSpec::Composite {
            e: Box::new(e),
            f: Box::new(f),
            epsilon,
        })
    }

    /// The exponent r with `self = L_r`; composites of L_p spaces always
    /// collapse on this scale.
    pub fn effective_p(&self) -> f64 {
        match self {
            SpaceSpec::Lp(p) => *p,
            SpaceSpec::Composite { e, f, epsilon } => {
                let p = e.effective_p();
                let q = f.effective_p();
                let inv = |x: f64| if x.is_infinite() { 0.0 } else { 1.0 / x };
                let inv_r = epsilon * inv(p) + (1.0 - epsilon) * inv(q);
                if inv_r == 0.0 {
                    f64::INFINITY
                } else {
                    1.0 / inv_r
                }
            }
        }
    }

    /// Certified upper bound for the averaging operator norm on this space:
    /// Hardy's inequality gives `p/(p−1)` on L_p for p > 1 (a fortiori on
    /// (0,1)), 1 at p = ∞, and the operator is unbounded on L_1 (+∞).
    pub fn cesaro_bound(&self) -> f64 {
        let p = self.effective_p();
        if p == 1.0 {
            f64::INFINITY
        } else if p.is_infinite() {
            1.0
        } else {
            p / (p - 1.0)
        }
    }
}

/// Upper bound for the averaging operator norm on `space`; +∞ on L_1.
pub fn cesaro_bound(space: &SpaceSpec) -> f64 {
    space.cesaro_bound()
}

/// Borrowed view of either function shape, for norms and grid sampling.
#[derive(Debug, Clone, Copy)]
pub enum Curve<'a> {
    Step(&'a StepFunction),
    Hyperbolic(&'a PiecewiseHyperbolic),
}

impl<'a> Curve<'a> {
    pub fn eval(&self, t: f64) -> f64 {
        match self {
            Curve::Step(f) => f.eval(t),
            Curve::Hyperbolic(f) => f.eval(t),
        }
    }

    pub fn cuts(&self) -> &[f64] {
        match self {
            Curve::Step(f) => f.cuts(),
            Curve::Hyperbolic(f) => f.cuts(),
        }
    }
}

impl<'a> From<&'a StepFunction> for Curve<'a> {
    fn from(f: &'a StepFunction) -> Self {
        Curve::Step(f)
    }
}

impl<'a> From<&'a PiecewiseHyperbolic> for Curve<'a> {
    fn from(f: &'a PiecewiseHyperbolic) -> Self {
        Curve::Hyperbolic(f)
    }
}

/// ‖f‖ in `space`, reduced to an L_r norm.
///
/// Step functions integrate in closed form for every exponent. Hyperbolic
/// pieces use the binomial expansion of `(β + α/t)^r` for integer r and
/// 32-node Gauss–Legendre panels otherwise; pieces are split at sign
/// changes first so the integrand is smooth. `r = ∞` takes the supremum
/// (+∞ when an α ≠ 0 piece touches t = 0).
pub fn norm(f: Curve<'_>, space: &SpaceSpec) -> Result<f64, SymspaceError> {
    let r = space.effective_p();
    if r.is_nan() || r < 1.0 {
        return Err(SymspaceError::BadExponent(r));
    }
    match f {
        Curve::Step(sf) => Ok(step_norm(sf, r)),
        Curve::Hyperbolic(hf) => hyperbolic_norm(hf, r),
    }
}

fn step_norm(f: &StepFunction, r: f64) -> f64 {
    if r.is_infinite() {
        return f.values.iter().fold(0.0, |m, v| m.max(v.abs()));
    }
    let mut acc = 0.0;
    let mut left = 0.0;
    for (&cut, &v) in f.cuts.iter().zip(&f.values) {
        acc += v.abs().powf(r) * (cut - left);
        left = cut;
    }
    acc.powf(1.0 / r)
}

fn hyperbolic_norm(f: &PiecewiseHyperbolic, r: f64) -> Result<f64, SymspaceError> {
    if r.is_infinite() {
        let mut sup = 0.0_f64;
        for (a, b, alpha, beta) in f.pieces() {
            // β + α/t is monotone on each piece; extremes sit at endpoints.
            sup = sup.max((beta + alpha / b).abs());
            if a == 0.0 {
                if alpha != 0.0 {
                    return Ok(f64::INFINITY);
                }
                sup = sup.max(beta.abs());
            } else {
                sup = sup.max((beta + alpha / a).abs());
            }
        }
        return Ok(sup);
    }
    let mut acc = 0.0;
    for (a, b, alpha, beta) in f.pieces() {
        for (lo, hi, negate) in split_at_root(a, b, alpha, beta) {
            let (al, be) = if negate { (-alpha, -beta) } else { (alpha, beta) };
            acc += if r.fract() == 0.0 && r <= 32.0 {
                integral_power_closed(lo, hi, al, be, r as u32)
            } else {
                integral_power_quadrature(lo, hi, al, be, r, 32)
            };
        }
    }
    Ok(acc.powf(1.0 / r))
}

/// Splits (a,b] at the root of β + α/t when the sign changes inside,
/// flagging the negative part.
fn split_at_root(a: f64, b: f64, alpha: f64, beta: f64) -> Vec<(f64, f64, bool)> {
    let val = |t: f64| beta + alpha / t;
    if beta != 0.0 && alpha != 0.0 {
        let root = -alpha / beta;
        if root > a && root < b {
            return vec![(a, root, val(0.5 * (a + root)) < 0.0), (root, b, val(0.5 * (root + b)) < 0.0)];
        }
    }
    vec![(a, b, val(b) < 0.0)]
}

/// ∫_a^b (β + α/t)^p dt for integer p via the binomial expansion; requires
/// the integrand nonnegative on (a,b]. a = 0 only converges for α = 0.
fn integral_power_closed(a: f64, b: f64, alpha: f64, beta: f64, p: u32) -> f64 {
    if alpha == 0.0 {
        return beta.powi(p as i32) * (b - a);
    }
    debug_assert!(a > 0.0, "hyperbolic power integral from 0 diverges");
    let mut total = 0.0;
    let mut binom = 1.0_f64;
    for j in 0..=p {
        let moment = match j {
            0 => b - a,
            1 => (b / a).ln(),
            _ => {
                let jm = (j - 1) as f64;
                (a.powf(-jm) - b.powf(-jm)) / jm
            }
        };
        total += binom * beta.powi((p - j) as i32) * alpha.powi(j as i32) * moment;
        binom *= (p - j) as f64 / (j + 1) as f64;
    }
    total
}

fn integral_power_quadrature(a: f64, b: f64, alpha: f64, beta: f64, p: f64, nodes: usize) -> f64 {
    gauss_legendre(a, b, nodes, |t| (beta + alpha / t).abs().powf(p))
}

/// ∫_a^b f via n-node Gauss–Legendre.
pub fn gauss_legendre(a: f64, b: f64, nodes: usize, f: impl Fn(f64) -> f64) -> f64 {
    let (xs, ws) = gl_rule(nodes);
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    xs.iter()
        .zip(ws)
        .map(|(&x, &w)| w * f(mid + half * x))
        .sum::<f64>()
        * half
}

type QuadratureRules = Vec<(usize, Vec<f64>, Vec<f64>)>;

fn gl_rule(nodes: usize) -> (&'static [f64], &'static [f64]) {
    static RULES: OnceLock<QuadratureRules> = OnceLock::new();
    let rules = RULES.get_or_init(|| {
        [16, 32, 64]
            .into_iter()
            .map(|n| {
                let (x, w) = compute_gl(n);
                (n, x, w)
            })
            .collect()
    });
    let entry = rules
        .iter()
        .find(|(n, _, _)| *n == nodes)
        .unwrap_or_else(|| panic!("no Gauss-Legendre rule with {nodes} nodes"));
    (&entry.1, &entry.2)
}

/// Newton iteration on Legendre polynomials for nodes/weights on [−1,1].
fn compute_gl(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut xs = vec![0.0; n];
    let mut ws = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        loop {
            let (p, dp) = legendre(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre(n, x);
        xs[i] = -x;
        xs[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        ws[i] = w;
        ws[n - 1 - i] = w;
    }
    (xs, ws)
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Sampled product Π f_i^{e_i} on the union of all breakpoints plus
/// log-spaced points; the declared comparison grid for transcendental
/// right-hand sides.
#[derive(Debug, Clone)]
pub struct GridFn {
    pub ts: Vec<f64>,
    pub values: Vec<f64>,
}

/// Worst point found when comparing two grid functions.
#[derive(Debug, Clone, Copy)]
pub struct GridComparison {
    pub ratio: f64,
    pub t: f64,
    pub lhs: f64,
    pub rhs: f64,
}

impl GridFn {
    pub fn from_curve(f: Curve<'_>, grid: &[f64]) -> Self {
        Self {
            ts: grid.to_vec(),
            values: grid.iter().map(|&t| f.eval(t)).collect(),
        }
    }

    /// max over the grid of self/other, treating 0/0 as 0.
    pub fn max_ratio_over(&self, other: &Self) -> (f64, f64) {
        let c = self.compare(other);
        (c.ratio, c.t)
    }

    /// Worst-point comparison against `other` on the shared grid.
    pub fn compare(&self, other: &Self) -> GridComparison {
        assert_eq!(self.ts, other.ts, "grids must agree");
        let mut best = GridComparison {
            ratio: 0.0,
            t: self.ts[0],
            lhs: 0.0,
            rhs: 0.0,
        };
        for ((&t, &a), &b) in self.ts.iter().zip(&self.values).zip(&other.values) {
            let r = if a == 0.0 && b == 0.0 { 0.0 } else { a / b };
            if r > best.ratio {
                best = GridComparison {
                    ratio: r,
                    t,
                    lhs: a,
                    rhs: b,
                };
            }
        }
        best
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.ts, other.ts, "grids must agree");
        Self {
            ts: self.ts.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| a * b)
                .collect(),
        }
    }

    pub fn pointwise_max(&self, other: &Self) -> Self {
        assert_eq!(self.ts, other.ts, "grids must agree");
        Self {
            ts: self.ts.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| a.max(b))
                .collect(),
        }
    }

    pub fn powf(&self, e: f64) -> Result<Self, SymspaceError> {
        let values = self
            .values
            .iter()
            .map(|&v| pow_checked(v, e))
            .collect::<Result<_, _>>()?;
        Ok(Self {
            ts: self.ts.clone(),
            values,
        })
    }

    pub fn scale(&self, c: f64) -> Self {
        Self {
            ts: self.ts.clone(),
            values: self.values.iter().map(|v| c * v).collect(),
        }
    }
}

fn pow_checked(base: f64, e: f64) -> Result<f64, SymspaceError> {
    if e == 1.0 {
        return Ok(base);
    }
    if base < 0.0 && e.fract() != 0.0 {
        return Err(SymspaceError::NegativeBase { base, exponent: e });
    }
    if e == 0.5 {
        return Ok(base.sqrt());
    }
    Ok(base.powf(e))
}

/// Union of the curves' breakpoints with `extra` log-spaced points in
/// (0,1), sorted and deduplicated; 1 is always included.
pub fn comparison_grid(curves: &[Curve<'_>], extra: usize) -> Vec<f64> {
    let mut grid: Vec<f64> = Vec::new();
    for c in curves {
        grid.extend_from_slice(c.cuts());
    }
    grid.extend(log_spaced(extra));
    grid.push(1.0);
    grid.sort_by(|a, b| a.partial_cmp(b).expect("finite grid"));
    grid.dedup();
    grid.retain(|&t| t > 0.0 && t <= 1.0);
    grid
}

/// `count` points 10^{−6(1−i/(count−1))}, log-spaced in (1e−6, 1].
pub fn log_spaced(count: usize) -> Vec<f64> {
    if count == 0 {
        return Vec::new();
    }
    (0..count)
        .map(|i| 10.0_f64.powf(-6.0 * (1.0 - i as f64 / (count.max(2) - 1) as f64)))
        .collect()
}

/// Pointwise product Π f_i^{e_i} on the declared comparison grid.
pub fn grid_combine(
    parts: &[(Curve<'_>, f64)],
    extra_points: usize,
) -> Result<GridFn, SymspaceError> {
    let curves: Vec<Curve<'_>> = parts.iter().map(|(c, _)| *c).collect();
    let grid = comparison_grid(&curves, extra_points);
    let mut values = vec![1.0; grid.len()];
    for (curve, e) in parts {
        for (slot, &t) in values.iter_mut().zip(&grid) {
            *slot *= pow_checked(curve.eval(t), *e)?;
        }
    }
    Ok(GridFn { ts: grid, values })
}

/// Witness-certified upper bound for the interpolation-space norm of h:
/// checks `|h| ≤ f^ε g^{1−ε}` on the declared grid and returns
/// `max(‖f‖_E, ‖g‖_F)`; the true norm is the infimum over such witnesses.
pub fn cl_norm_upper(
    h: Curve<'_>,
    e_space: &SpaceSpec,
    f_space: &SpaceSpec,
    epsilon: f64,
    witness_f: Curve<'_>,
    witness_g: Curve<'_>,
    extra_points: usize,
) -> Result<f64, SymspaceError> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(SymspaceError::BadWeight(epsilon));
    }
    let grid = comparison_grid(&[h, witness_f, witness_g], extra_points);
    for &t in &grid {
        let lhs = h.eval(t).abs();
        let rhs = pow_checked(witness_f.eval(t), epsilon)?
            * pow_checked(witness_g.eval(t), 1.0 - epsilon)?;
        if lhs > rhs * (1.0 + 1e-12) + 1e-300 {
            return Err(SymspaceError::DominationViolated { t, lhs, rhs });
        }
    }
    let nf = norm(witness_f, e_space)?;
    let ng = norm(witness_g, f_space)?;
    Ok(nf.max(ng))
}
