//! Singular value functions from finite sections.
//!
//! The trace representation of left multiplication by x restricts to the
//! frequency window `W_L = {n : |n|_∞ ≤ L}` as the matrix
//! `T[m,n] = x̂(m−n)·e^{2πiλ(m−n,n)}`. Its singular values, weighted 1/N
//! each, give a step-function approximation of the singular value function
//! μ(x); doubling L until consecutive estimates agree in relative L₁
//! distance gives the converged estimate together with diagnostics.
//!
//! Self-adjoint elements produce Hermitian sections, so μ comes from a
//! single banded eigendecomposition of T; general elements go through the
//! Gram matrix T^H T (also banded). Both avoid densifying the section,
//! whose bandwidth in the lexicographic window order is `M(2L+1)+M` for
//! support radius M.

pub mod band;
pub mod eigen;
pub mod matrix;

use num_complex::Complex64;
use thiserror::Error;

use crate::algebra::{lattice_box, phase_factor, MultiIndex, TorusElement};
use crate::symspace::StepFunction;
use band::BandedHermitian;
use matrix::DenseComplexMatrix;

#[derive(Debug, Error)]
pub enum SpectralError {
    #[error("matrix is not Hermitian (defect {0:e})")]
    NotHermitian(f64),
    #[error("QL iteration failed to converge at row {0}")]
    NoConvergence(usize),
    #[error("window radius {l} is below the support radius {radius}")]
    WindowTooSmall { l: i64, radius: i64 },
    #[error("sampling oracle requires the untwisted case θ = 0")]
    ThetaNotZero,
    #[error("invalid truncation policy: {0}")]
    BadPolicy(String),
}

/// The frequency window W_L with its fixed lexicographic enumeration.
#[derive(Debug, Clone)]
pub struct TruncationWindow {
    dim: usize,
    radius: i64,
}

impl TruncationWindow {
    pub fn new(dim: usize, radius: i64) -> Self {
        assert!(radius >= 0, "window radius must be nonnegative");
        Self { dim, radius }
    }

    pub fn radius(&self) -> i64 {
        self.radius
    }

    /// N = (2L+1)^d (never zero).
    pub fn len(&self) -> usize {
        let side = (2 * self.radius + 1) as usize;
        side.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Lexicographic enumeration (axis 0 most significant).
    pub fn indices(&self) -> Vec<MultiIndex> {
        lattice_box(self.dim, self.radius)
    }

    /// Position of n in the enumeration, if |n|_∞ ≤ L.
    pub fn position(&self, n: &MultiIndex) -> Option<usize> {
        let side = 2 * self.radius + 1;
        let mut idx: i64 = 0;
        for &c in n.components() {
            if c.abs() > self.radius {
                return None;
            }
            idx = idx * side + (c + self.radius);
        }
        Some(idx as usize)
    }

    /// Signed index displacement caused by a frequency offset k.
    pub fn offset(&self, k: &MultiIndex) -> i64 {
        let side = 2 * self.radius + 1;
        let mut delta: i64 = 0;
        for &c in k.components() {
            delta = delta * side + c;
        }
        delta
    }

    pub fn contains(&self, n: &MultiIndex) -> bool {
        n.linf() <= self.radius
    }
}

/// Finite section of left multiplication by x on W_L:
/// `T[m,n] = x̂(m−n) e^{2πiλ(m−n,n)}`.
///
/// Linear in x, and the section of the adjoint is the conjugate transpose.
pub fn gns_matrix(x: &TorusElement, l: i64) -> DenseComplexMatrix {
    let window = TruncationWindow::new(x.dim(), l);
    let points = window.indices();
    let mut t = DenseComplexMatrix::zeros(window.len());
    for (c, n) in points.iter().enumerate() {
        for (k, &coeff) in x.support() {
            let m = n.add(k);
            if let Some(r) = window.position(&m) {
                t.set(r, c, coeff * phase_factor(k, n, x.theta()));
            }
        }
    }
    t
}

/// Band form of the section of a self-adjoint element (lower triangle
/// built directly; the upper triangle is its conjugate by construction).
fn gns_band(x: &TorusElement, l: i64) -> BandedHermitian {
    let window = TruncationWindow::new(x.dim(), l);
    let offsets: Vec<(i64, &MultiIndex, Complex64)> = x
        .support()
        .map(|(k, &c)| (window.offset(k), k, c))
        .collect();
    let bw = offsets.iter().map(|(d, _, _)| *d).max().unwrap_or(0).max(0) as usize;
    let mut band = BandedHermitian::zeros(window.len(), bw);
    for (c, n) in window.indices().iter().enumerate() {
        for (delta, k, coeff) in &offsets {
            if *delta < 0 {
                continue;
            }
            let m = n.add(k);
            if window.contains(&m) {
                band.set(c + *delta as usize, c, coeff * phase_factor(k, n, x.theta()));
            }
        }
    }
    band
}

/// Band form of T^H T for the section of an arbitrary element, assembled
/// column-by-column from the sparse structure of T.
fn gram_band(x: &TorusElement, l: i64) -> BandedHermitian {
    let window = TruncationWindow::new(x.dim(), l);
    let offsets: Vec<(&MultiIndex, Complex64)> = x.support().map(|(k, &c)| (k, c)).collect();
    let bw = {
        let mut worst = 0i64;
        for (k1, _) in &offsets {
            for (k2, _) in &offsets {
                let diff = k2.add(&k1.neg());
                worst = worst.max(window.offset(&diff).abs());
            }
        }
        worst as usize
    };
    let mut band = BandedHermitian::zeros(window.len(), bw);
    for (c, n) in window.indices().iter().enumerate() {
        for (k2, c2) in &offsets {
            let r_point = n.add(k2);
            if !window.contains(&r_point) {
                continue;
            }
            let t2 = c2 * phase_factor(k2, n, x.theta());
            for (k1, c1) in &offsets {
                let m = r_point.add(&k1.neg());
                if !window.contains(&m) {
                    continue;
                }
                let dm = window.position(&m).expect("inside window") as i64 - c as i64;
                if dm < 0 {
                    continue;
                }
                let t1 = c1 * phase_factor(k1, &m, x.theta());
                let row = c + dm as usize;
                let cur = band.get(row, c);
                band.set(row, c, cur + t1.conj() * t2);
            }
        }
    }
    band
}

/// Descending singular values with uniform weight 1/N (total weight 1).
#[derive(Debug, Clone, PartialEq)]
pub struct SingularSpectrum {
    values: Vec<f64>,
}

impl SingularSpectrum {
    fn from_descending(values: Vec<f64>) -> Self {
        debug_assert!(values.windows(2).all(|w| w[0] >= w[1]));
        Self { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Lossless conversion to steps of width 1/N on (0,1].
    pub fn step_function(&self) -> StepFunction {
        let n = self.values.len();
        let cuts: Vec<f64> = (1..=n).map(|k| k as f64 / n as f64).collect();
        StepFunction::new(cuts, self.values.clone()).expect("uniform partition is valid")
    }
}

/// Singular values of A as √eig(A^H A), descending.
pub fn singular_spectrum(a: &DenseComplexMatrix) -> SingularSpectrum {
    if a.size() == 0 {
        return SingularSpectrum::from_descending(Vec::new());
    }
    let gram = a.gram();
    let mut vals = eigen::dense_eigenvalues(&gram, 1e-9 * (1.0 + gram.frobenius_norm()))
        .expect("Gram matrices are Hermitian");
    for v in vals.iter_mut() {
        *v = v.max(0.0).sqrt();
    }
    vals.reverse();
    SingularSpectrum::from_descending(vals)
}

/// Ascending eigenvalues of a Hermitian matrix (defect tolerance 1e−12).
pub fn hermitian_spectrum(h: &DenseComplexMatrix) -> Result<Vec<f64>, SpectralError> {
    eigen::dense_eigenvalues(h, 1e-12)
}

/// Eigendecomposition with vectors (defect tolerance 1e−12).
pub fn hermitian_eigen(
    h: &DenseComplexMatrix,
) -> Result<(Vec<f64>, DenseComplexMatrix), SpectralError> {
    eigen::dense_eigen(h, 1e-12)
}

/// Window-L approximation of μ(x) as a non-increasing step function.
///
/// Self-adjoint sections are diagonalized directly (singular values are
/// the eigenvalue magnitudes); otherwise the banded Gram matrix is used.
pub fn mu_approx(x: &TorusElement, l: i64) -> Result<StepFunction, SpectralError> {
    let radius = x.support_radius();
    if l < 1 || l < radius {
        return Err(SpectralError::WindowTooSmall { l, radius });
    }
    if x.is_zero() {
        return Ok(StepFunction::constant(0.0));
    }
    let mut vals = if x.is_hermitian(1e-12) {
        let mut vals = gns_band(x, l).into_eigenvalues()?;
        for v in vals.iter_mut() {
            *v = v.abs();
        }
        vals
    } else {
        let mut vals = gram_band(x, l).into_eigenvalues()?;
        for v in vals.iter_mut() {
            *v = v.max(0.0).sqrt();
        }
        vals
    };
    vals.sort_by(|a, b| b.partial_cmp(a).expect("finite singular values"));
    Ok(SingularSpectrum::from_descending(vals).step_function())
}

/// Window-doubling policy for μ estimates.
#[derive(Debug, Clone, Copy)]
pub struct TruncationPolicy {
    pub l0: i64,
    pub tol: f64,
    pub l_max: i64,
}

impl TruncationPolicy {
    /// Default desk-scale policy: L0 = 4·max(M,1), relative tolerance 0.02,
    /// cap L_max = 32.
    pub fn for_radius(radius: i64) -> Self {
        Self {
            l0: 4 * radius.max(1),
            tol: 0.02,
            l_max: 32,
        }
    }

    pub fn validate(&self) -> Result<(), SpectralError> {
        if self.tol <= 0.0 {
            return Err(SpectralError::BadPolicy(format!(
                "tolerance must be positive, got {}",
                self.tol
            )));
        }
        if self.l0 < 1 || self.l_max < self.l0 {
            return Err(SpectralError::BadPolicy(format!(
                "need 1 <= l0 <= l_max, got l0={} l_max={}",
                self.l0, self.l_max
            )));
        }
        Ok(())
    }
}

/// Convergence record for one μ ladder.
#[derive(Debug, Clone)]
pub struct MuDiagnostics {
    pub l_final: i64,
    pub converged: bool,
    /// (window, relative L₁ distance to the previous estimate).
    pub distances: Vec<(i64, f64)>,
    /// (‖T‖_F²/N) / Σ|x̂|² at the final window.
    pub frobenius_mass_ratio: f64,
}

/// Relative L₁ distance used by the ladder: ∫|a−b| normalized by the
/// amplitude sup b = b(0+) of the newer estimate. Scale-free (so ladder
/// decisions commute with x ↦ cx), and equal to the plain L₁ distance for
/// elements normalized to unit operator-norm scale.
pub fn relative_l1_distance(prev: &StepFunction, cur: &StepFunction) -> f64 {
    let dist = prev.l1_distance(cur);
    if dist == 0.0 {
        0.0
    } else {
        let amp = cur.values().iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        dist / amp.max(f64::MIN_POSITIVE)
    }
}

/// Doubles the window from the policy's L0 until consecutive μ estimates
/// agree within the relative tolerance; non-convergence past L_max is a
/// reported state, not an error.
pub fn mu_converged(
    x: &TorusElement,
    policy: &TruncationPolicy,
) -> Result<(StepFunction, MuDiagnostics), SpectralError> {
    policy.validate()?;
    if x.is_zero() {
        return Ok((
            StepFunction::constant(0.0),
            MuDiagnostics {
                l_final: policy.l0,
                converged: true,
                distances: Vec::new(),
                frobenius_mass_ratio: 1.0,
            },
        ));
    }
    let l0 = policy.l0.max(x.support_radius());
    let mut prev = mu_approx(x, l0)?;
    let mut l = l0;
    let mut distances = Vec::new();
    loop {
        let next_l = 2 * l;
        if next_l > policy.l_max {
            return Ok((
                prev,
                MuDiagnostics {
                    l_final: l,
                    converged: false,
                    distances,
                    frobenius_mass_ratio: frobenius_mass_ratio(x, l),
                },
            ));
        }
        let cur = mu_approx(x, next_l)?;
        let rel = relative_l1_distance(&prev, &cur);
        distances.push((next_l, rel));
        if rel < policy.tol {
            let ratio = frobenius_mass_ratio(x, next_l);
            return Ok((
                cur,
                MuDiagnostics {
                    l_final: next_l,
                    converged: true,
                    distances,
                    frobenius_mass_ratio: ratio,
                },
            ));
        }
        prev = cur;
        l = next_l;
    }
}

/// (‖T_L‖_F²/N)/Σ|x̂|², computed in closed form: each offset k appears in
/// Π_j(2L+1−|k_j|) columns with unimodular phases.
pub fn frobenius_mass_ratio(x: &TorusElement, l: i64) -> f64 {
    let side = 2 * l + 1;
    let n = (side as f64).powi(x.dim() as i32);
    let mut captured = 0.0;
    let mut total = 0.0;
    for (k, c) in x.support() {
        let mass = c.norm_sqr();
        total += mass;
        let mut count = 1.0;
        for &kj in k.components() {
            count *= (side - kj.abs()).max(0) as f64;
        }
        captured += mass * count;
    }
    if total == 0.0 {
        1.0
    } else {
        (captured / n) / total
    }
}

/// Commutative μ oracle: evaluates the trigonometric polynomial on the
/// uniform G^d grid of the ordinary torus and rearranges |values|
/// (requires θ = 0).
pub fn mu_sampling_oracle(u: &TorusElement, grid: usize) -> Result<StepFunction, SpectralError> {
    if !u.theta().is_zero() {
        return Err(SpectralError::ThetaNotZero);
    }
    assert!(grid >= 1, "sampling grid must be nonempty");
    let d = u.dim();
    let total = grid.pow(d as u32);
    let mut magnitudes = Vec::with_capacity(total);
    let mut point = vec![0usize; d];
    for _ in 0..total {
        let phi: Vec<f64> = point.iter().map(|&g| g as f64 / grid as f64).collect();
        magnitudes.push(u.eval_commutative(&phi).norm());
        for axis in (0..d).rev() {
            if point[axis] + 1 < grid {
                point[axis] += 1;
                break;
            }
            point[axis] = 0;
        }
    }
    magnitudes.sort_by(|a, b| b.partial_cmp(a).expect("finite values"));
    let cuts: Vec<f64> = (1..=total).map(|k| k as f64 / total as f64).collect();
    Ok(StepFunction::new(cuts, magnitudes).expect("uniform partition"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{random_element, ThetaMatrix};
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn window_enumeration_roundtrip() {
        let w = TruncationWindow::new(2, 3);
        assert_eq!(w.len(), 49);
        for (i, n) in w.indices().iter().enumerate() {
            assert_eq!(w.position(n), Some(i));
        }
        assert_eq!(w.position(&MultiIndex::new(vec![4, 0])), None);
        // Offsets translate enumeration positions.
        let k = MultiIndex::new(vec![1, -2]);
        let n = MultiIndex::new(vec![0, 1]);
        let m = n.add(&k);
        assert_eq!(
            w.position(&m).unwrap() as i64 - w.position(&n).unwrap() as i64,
            w.offset(&k)
        );
    }

    #[test]
    fn section_of_identity_is_identity() {
        let one = TorusElement::identity(ThetaMatrix::golden(2));
        let t = gns_matrix(&one, 2);
        assert_eq!(t, DenseComplexMatrix::identity(25));
    }

    #[test]
    fn untwisted_generator_section_is_shift() {
        let u = TorusElement::generator(ThetaMatrix::zero(1), 0).unwrap();
        let t = gns_matrix(&u, 3);
        let n = 7;
        for i in 0..n {
            for j in 0..n {
                let expect = if i == j + 1 { 1.0 } else { 0.0 };
                assert_eq!(t.get(i, j), c(expect, 0.0));
            }
        }
    }

    #[test]
    fn section_of_adjoint_is_conjugate_transpose() {
        let th = ThetaMatrix::rational(3, 7).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(2);
        let x = random_element(&th, 2, 1.0, false, &mut rng);
        let t = gns_matrix(&x, 4);
        let ta = gns_matrix(&x.adjoint(), 4);
        let defect = ta.sub(&t.conj_transpose()).frobenius_norm();
        assert!(defect <= 1e-12 * (1.0 + t.frobenius_norm()));
    }

    #[test]
    fn interior_rows_multiply_like_the_algebra() {
        // On rows at distance ≥ M from the window boundary, the section of
        // a product equals the product of sections.
        let th = ThetaMatrix::rational(3, 7).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        let x = random_element(&th, 2, 1.0, false, &mut rng);
        let y = random_element(&th, 2, 1.0, false, &mut rng);
        let l = 6;
        let txy = gns_matrix(&x.multiply(&y).unwrap(), l);
        let prod = gns_matrix(&x, l).mul(&gns_matrix(&y, l));
        let w = TruncationWindow::new(2, l);
        let mut worst = 0.0_f64;
        for (r, m) in w.indices().iter().enumerate() {
            if m.linf() > l - 4 {
                continue; // boundary rows: convolution truncated
            }
            for col in 0..w.len() {
                worst = worst.max((txy.get(r, col) - prod.get(r, col)).norm());
            }
        }
        assert!(worst <= 1e-10, "interior defect {worst}");
    }

    #[test]
    fn band_and_dense_sections_agree_for_selfadjoint_elements() {
        let th = ThetaMatrix::golden(2);
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        let x = random_element(&th, 2, 1.5, true, &mut rng);
        let band = gns_band(&x, 4).to_dense();
        let dense = gns_matrix(&x, 4);
        // The band form Hermitizes from the lower triangle.
        let mut worst = 0.0_f64;
        for i in 0..dense.size() {
            for j in 0..=i {
                worst = worst.max((band.get(i, j) - dense.get(i, j)).norm());
            }
        }
        assert!(worst == 0.0);
        assert!(dense.hermitian_defect() <= 1e-13);
    }

    #[test]
    fn gram_band_matches_dense_gram() {
        let th = ThetaMatrix::golden(2);
        let mut rng = ChaCha12Rng::seed_from_u64(5);
        let x = random_element(&th, 1, 1.0, false, &mut rng);
        let g_band = gram_band(&x, 3).to_dense();
        let g_dense = gns_matrix(&x, 3).gram();
        let mut worst = 0.0_f64;
        for i in 0..g_dense.size() {
            for j in 0..=i {
                worst = worst.max((g_band.get(i, j) - g_dense.get(i, j)).norm());
            }
        }
        assert!(worst <= 1e-12, "gram band defect {worst}");
    }

    #[test]
    fn singular_spectrum_examples() {
        // Unitary: all ones. Zero: all zeros.
        let id = DenseComplexMatrix::identity(6);
        assert!(singular_spectrum(&id)
            .values()
            .iter()
            .all(|&v| (v - 1.0).abs() <= 1e-12));
        let z = DenseComplexMatrix::zeros(5);
        assert!(singular_spectrum(&z).values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn singular_values_agree_with_left_gram() {
        let mut rng = ChaCha12Rng::seed_from_u64(11);
        let n = 24;
        let a = DenseComplexMatrix::from_fn(n, |_, _| {
            c(
                rand::Rng::gen_range(&mut rng, -1.0..1.0),
                rand::Rng::gen_range(&mut rng, -1.0..1.0),
            )
        });
        let right = singular_spectrum(&a);
        let left = singular_spectrum(&a.conj_transpose());
        for (x, y) in right.values().iter().zip(left.values()) {
            assert!((x - y).abs() <= 1e-9 * (1.0 + right.values()[0]));
        }
    }

    #[test]
    fn mu_of_scalar_multiple_of_identity() {
        let th = ThetaMatrix::golden(2);
        let x = TorusElement::identity(th).scale(c(-2.5, 0.0));
        let mu = mu_approx(&x, 2).unwrap();
        assert!(mu.values().iter().all(|&v| (v - 2.5).abs() <= 1e-12));
        let policy = TruncationPolicy {
            l0: 2,
            tol: 0.02,
            l_max: 8,
        };
        let (_, diag) = mu_converged(&x, &policy).unwrap();
        assert!(diag.converged);
        assert_eq!(diag.distances.last().map(|d| d.1), Some(0.0));
    }

    #[test]
    fn mu_matches_dense_eigenvalues_on_sections() {
        // The banded reduction must reproduce the dense solver on real
        // finite sections, both for the Hermitian and the Gram route.
        let th = ThetaMatrix::golden(2);
        let mut rng = ChaCha12Rng::seed_from_u64(31);
        let h = random_element(&th, 2, 1.5, true, &mut rng);
        let l = 5;
        let mu = mu_approx(&h, l).unwrap();
        let mut dense: Vec<f64> = eigen::dense_eigenvalues(&gns_matrix(&h, l), 1e-12)
            .unwrap()
            .into_iter()
            .map(f64::abs)
            .collect();
        dense.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let top = dense[0].max(1.0);
        for (a, b) in mu.values().iter().zip(&dense) {
            assert!((a - b).abs() <= 1e-10 * top, "{a} vs {b}");
        }

        let g = random_element(&th, 1, 1.0, false, &mut rng);
        let mu_g = mu_approx(&g, l).unwrap();
        let dense_g = singular_spectrum(&gns_matrix(&g, l));
        let top_g = dense_g.values()[0].max(1.0);
        for (a, b) in mu_g.values().iter().zip(dense_g.values()) {
            assert!((a - b).abs() <= 1e-9 * top_g, "{a} vs {b}");
        }
    }

    #[test]
    fn mu_respects_window_precondition() {
        let th = ThetaMatrix::zero(2);
        let mut rng = ChaCha12Rng::seed_from_u64(13);
        let x = random_element(&th, 3, 1.0, false, &mut rng);
        assert!(matches!(
            mu_approx(&x, 2),
            Err(SpectralError::WindowTooSmall { .. })
        ));
    }

    #[test]
    fn mu_zero_element_converges_immediately() {
        let x = TorusElement::zero(ThetaMatrix::golden(2));
        let policy = TruncationPolicy::for_radius(2);
        let (mu, diag) = mu_converged(&x, &policy).unwrap();
        assert!(diag.converged);
        assert!(mu.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn mu_top_value_below_coefficient_mass() {
        let th = ThetaMatrix::golden(2);
        let mut rng = ChaCha12Rng::seed_from_u64(17);
        for _ in 0..5 {
            let x = random_element(&th, 2, 1.0, true, &mut rng);
            let mu = mu_approx(&x, 4).unwrap();
            let bound = x.coeff_l1_norm();
            assert!(mu.values()[0] <= bound * (1.0 + 1e-12));
        }
    }

    #[test]
    fn translation_preserves_singular_data_at_fixed_window() {
        let th = ThetaMatrix::golden(2);
        let mut rng = ChaCha12Rng::seed_from_u64(19);
        let x = random_element(&th, 2, 2.0, true, &mut rng);
        let y = x.translate(0.37, 1).unwrap();
        let mu_x = mu_approx(&x, 6).unwrap();
        let mu_y = mu_approx(&y, 6).unwrap();
        let scale = mu_x.values()[0].max(1.0);
        assert!(mu_x.l1_distance(&mu_y) <= 1e-9 * scale);
    }

    #[test]
    fn frobenius_mass_bounds() {
        let th = ThetaMatrix::golden(2);
        let mut rng = ChaCha12Rng::seed_from_u64(23);
        let x = random_element(&th, 2, 1.0, false, &mut rng);
        let m = x.support_radius();
        for l in [2, 4, 8] {
            let t = gns_matrix(&x, l);
            let n = t.size() as f64;
            let per_row = t.frobenius_norm().powi(2) / n;
            let total: f64 = x.support().map(|(_, c)| c.norm_sqr()).sum();
            let side = 2 * l + 1;
            let lower = (((2 * (l - m) + 1) as f64) / side as f64).powi(2) * total;
            assert!(per_row <= total * (1.0 + 1e-12));
            assert!(per_row >= lower * (1.0 - 1e-12));
            // Closed form agrees with the assembled matrix.
            let ratio = frobenius_mass_ratio(&x, l);
            assert!((ratio - per_row / total).abs() <= 1e-12);
        }
    }

    #[test]
    fn sampling_oracle_requires_zero_twist() {
        let u = TorusElement::identity(ThetaMatrix::golden(2));
        assert!(matches!(
            mu_sampling_oracle(&u, 8),
            Err(SpectralError::ThetaNotZero)
        ));
        let v = TorusElement::identity(ThetaMatrix::zero(2)).scale(c(0.0, -3.0));
        let mu = mu_sampling_oracle(&v, 8).unwrap();
        assert!(mu.values().iter().all(|&m| (m - 3.0).abs() <= 1e-12));
    }
}
