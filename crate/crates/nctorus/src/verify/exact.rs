//! Checks that run in exact or machine-precision arithmetic.
//!
//! The integral identity `iδ = (e^{iδ} − 1) + δ²·J(δ)` with
//! `J(δ) = ∫₀¹∫₀ᵗ e^{isδ} ds dt` is verified in scalar and matrix
//! (functional calculus) form. The two interpolation bounds for
//! geometric-mean recursions are verified on hypothesis-satisfying random
//! data in dyadic-integer arithmetic, where both the hypothesis and the
//! conclusion are exact integer comparisons after taking base-2 logs.

use num_complex::Complex64;
use rand::Rng;

use crate::algebra::TorusElement;
use crate::spectral::hermitian_eigen;
use crate::spectral::matrix::DenseComplexMatrix;
use crate::stream::sample_rng;
use crate::symspace::gauss_legendre;
use crate::verify::constants;
use crate::verify::{CheckId, GnReport, ParamEcho};

/// Fixed-point scale for log-domain data: integers count units of 2^−16.
const LOG_SCALE: i64 = 1 << 16;

/// J(δ) = ∫₀¹∫₀ᵗ e^{isδ} ds dt in closed form, with a series branch where
/// the closed form cancels catastrophically.
fn double_time_average(delta: f64) -> Complex64 {
    if delta.abs() < 1e-2 {
        let z = Complex64::new(0.0, delta);
        let mut term = Complex64::new(1.0, 0.0);
        let mut acc = Complex64::new(0.0, 0.0);
        for m in 0..12u32 {
            acc += term / ((m + 1) as f64 * (m + 2) as f64);
            term = term * z / (m as f64 + 1.0);
        }
        acc
    } else {
        let iz = Complex64::new(0.0, delta);
        let e = Complex64::from_polar(1.0, delta) - 1.0;
        e / (iz * iz) - iz.inv()
    }
}

fn double_time_average_quadrature(delta: f64) -> Complex64 {
    let inner_re = |t: f64| gauss_legendre(0.0, t, 32, |s| (s * delta).cos());
    let inner_im = |t: f64| gauss_legendre(0.0, t, 32, |s| (s * delta).sin());
    Complex64::new(
        gauss_legendre(0.0, 1.0, 32, inner_re),
        gauss_legendre(0.0, 1.0, 32, inner_im),
    )
}

/// Residual of the scalar identity over a δ-grid, with J evaluated both
/// in closed form and by nested quadrature.
pub fn check_scalar_integral_identity(deltas: &[f64], seed: u64) -> GnReport {
    let tol = 1e-10;
    let mut worst = 0.0_f64;
    for &delta in deltas {
        assert!(delta != 0.0, "δ-grid must avoid 0");
        let lhs = Complex64::new(0.0, delta);
        let e = Complex64::from_polar(1.0, delta) - 1.0;
        let dsq = delta * delta;
        let r_closed = (lhs - e - dsq * double_time_average(delta)).norm();
        let r_quad = (lhs - e - dsq * double_time_average_quadrature(delta)).norm();
        worst = worst.max(r_closed).max(r_quad);
    }
    GnReport {
        check_id: CheckId::L31Scalar,
        params: ParamEcho {
            d: 1,
            theta: "n/a".into(),
            seed,
            sample: 0,
            ..ParamEcho::default()
        },
        lhs: worst,
        rhs: tol,
        constant_used: 1.0,
        ratio: GnReport::ratio_of(worst, tol),
        converged: true,
        passed: worst <= tol,
        grid: format!("delta-grid[{}]", deltas.len()),
        max_violation: Some(worst),
        note: None,
    }
}

/// Matrix form of the identity: `iA = e^{iA} − id + ∫₀¹∫₀ᵗ A²e^{isA} ds dt`
/// for a random Hermitian A, right side evaluated per eigenvalue.
pub fn check_matrix_integral_identity(n: usize, seed: u64, sample: u32) -> GnReport {
    let mut rng = sample_rng(seed, CheckId::L31Matrix.ordinal(), sample);
    let mut a = DenseComplexMatrix::zeros(n);
    for i in 0..n {
        a.set(i, i, Complex64::new(rng.gen_range(-1.0..1.0), 0.0));
        for j in 0..i {
            let v = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            a.set(i, j, v);
            a.set(j, i, v.conj());
        }
    }
    let (vals, vecs) = hermitian_eigen(&a).expect("random Hermitian input");
    let norm_a = vals.iter().fold(0.0_f64, |m, v| m.max(v.abs()));

    // RHS = V g(Λ) V^H with g(λ) = (e^{iλ} − 1) + λ²·J(λ).
    let g: Vec<Complex64> = vals
        .iter()
        .map(|&l| {
            Complex64::from_polar(1.0, l) - 1.0 + l * l * double_time_average(l)
        })
        .collect();
    let mut resid_sq = 0.0;
    for i in 0..n {
        for k in 0..n {
            let mut r = Complex64::new(0.0, 0.0);
            for (j, gj) in g.iter().enumerate() {
                r += vecs.get(i, j) * gj * vecs.get(k, j).conj();
            }
            let lhs = Complex64::new(0.0, 1.0) * a.get(i, k);
            resid_sq += (lhs - r).norm_sqr();
        }
    }
    let residual = resid_sq.sqrt();
    let tol = 1e-9 * (1.0 + norm_a.powi(3));
    GnReport {
        check_id: CheckId::L31Matrix,
        params: ParamEcho {
            d: 1,
            theta: "n/a".into(),
            support: Some(n as i64),
            seed,
            sample,
            ..ParamEcho::default()
        },
        lhs: residual,
        rhs: tol,
        constant_used: 1.0,
        ratio: GnReport::ratio_of(residual, tol),
        converged: true,
        passed: residual <= tol,
        grid: format!("eigendecomposition n={n}"),
        max_violation: Some(residual),
        note: None,
    }
}

/// Draws log-domain data in [−8, 8] on the dyadic grid and pushes it into
/// the constraint set `2b_m ≤ 2 + b_left + b_right` by Gauss–Seidel defect
/// sweeps; rejects and redraws if the sweeps stall.
fn project_to_hypothesis(
    rng: &mut impl Rng,
    len: usize,
    neighbors: &[(usize, usize, usize)],
) -> Vec<i64> {
    'redraw: for _attempt in 0..200 {
        let mut b: Vec<i64> = (0..len)
            .map(|_| rng.gen_range(-8 * LOG_SCALE..=8 * LOG_SCALE))
            .collect();
        for _sweep in 0..500 {
            let mut dirty = false;
            for &(left, mid, right) in neighbors {
                let defect = 2 * b[mid] - b[left] - b[right] - 2 * LOG_SCALE;
                if defect > 0 {
                    b[mid] -= (defect + 1) / 2;
                    dirty = true;
                }
            }
            if !dirty {
                return b;
            }
        }
        continue 'redraw;
    }
    panic!("hypothesis projection failed to converge");
}

/// Interpolation bound for positive sequences with
/// `a_m ≤ 2·√(a_{m−1} a_{m+1})`: verifies
/// `a_l ≤ c_k a_0^{1−l/k} a_k^{l/k}` for all 0 ≤ l ≤ k ≤ k_max in exact
/// dyadic-integer arithmetic.
pub fn check_sequence_interpolation(k_max: u32, trials: u32, seed: u64) -> GnReport {
    assert!((2..=constants::MAX_ORDER).contains(&k_max));
    let mut rng = sample_rng(seed, CheckId::L34.ordinal(), 0);
    let len = (k_max + 2) as usize;
    let neighbors: Vec<(usize, usize, usize)> =
        (1..len - 1).map(|m| (m - 1, m, m + 1)).collect();

    let mut violations = 0u64;
    // Worst signed log-gap k·(b_l − bound) in dyadic units, per unit k.
    let mut worst_gap = f64::NEG_INFINITY;
    for _ in 0..trials {
        let b = project_to_hypothesis(&mut rng, len, &neighbors);
        for k in 2..=k_max {
            let ek = constants::exponent(k) as i128;
            for l in 0..=k {
                let lhs = k as i128 * b[l as usize] as i128;
                let rhs = k as i128 * ek * LOG_SCALE as i128
                    + (k - l) as i128 * b[0] as i128
                    + l as i128 * b[k as usize] as i128;
                if lhs > rhs {
                    violations += 1;
                }
                let gap = (lhs - rhs) as f64 / (k as f64 * LOG_SCALE as f64);
                worst_gap = worst_gap.max(gap);
            }
        }
    }
    let ratio = worst_gap.exp2();
    GnReport {
        check_id: CheckId::L34,
        params: ParamEcho {
            d: 1,
            theta: "n/a".into(),
            k: Some(k_max),
            seed,
            sample: 0,
            ..ParamEcho::default()
        },
        lhs: ratio,
        rhs: 1.0,
        constant_used: constants::c_f64(k_max),
        ratio,
        converged: true,
        passed: violations == 0,
        grid: format!("dyadic-exact trials={trials}"),
        max_violation: Some(violations as f64),
        note: Some(format!("worst log2 slack {worst_gap:.6}")),
    }
}

/// Multi-index version: fields on the simplex |β|₁ ≤ k+1 with
/// `a(β+e_j) ≤ 2·√(a(β)·a(β+2e_j))` must satisfy
/// `a(α) ≤ c_k a(0)^{1−l/k} (max_{|β|₁=k} a(β))^{l/k}` for l = |α|₁ ≤ k.
pub fn check_field_interpolation(d: usize, k: u32, trials: u32, seed: u64) -> GnReport {
    assert!((2..=constants::MAX_ORDER).contains(&k));
    assert!((1..=3).contains(&d));
    let mut rng = sample_rng(seed, CheckId::L35.ordinal(), 0);

    // Enumerate the simplex and the in-simplex constraint triples.
    let points = simplex_points(d, k + 1);
    let index_of = |q: &[u32]| points.iter().position(|p| p == q).expect("in simplex");
    let mut neighbors = Vec::new();
    for (i, beta) in points.iter().enumerate() {
        let order: u32 = beta.iter().sum();
        if order + 2 > k + 1 {
            continue;
        }
        for j in 0..d {
            let mut mid = beta.clone();
            mid[j] += 1;
            let mut far = beta.clone();
            far[j] += 2;
            neighbors.push((i, index_of(&mid), index_of(&far)));
        }
    }

    let mut violations = 0u64;
    let mut worst_gap = f64::NEG_INFINITY;
    for _ in 0..trials {
        let b = project_to_hypothesis(&mut rng, points.len(), &neighbors);
        let zero = index_of(&vec![0; d]);
        for kk in 2..=k {
            let ek = constants::exponent(kk) as i128;
            let peak: i64 = points
                .iter()
                .enumerate()
                .filter(|(_, p)| p.iter().sum::<u32>() == kk)
                .map(|(i, _)| b[i])
                .max()
                .expect("order-k stratum nonempty");
            for (i, alpha) in points.iter().enumerate() {
                let l: u32 = alpha.iter().sum();
                if l > kk {
                    continue;
                }
                let lhs = kk as i128 * b[i] as i128;
                let rhs = kk as i128 * ek * LOG_SCALE as i128
                    + (kk - l) as i128 * b[zero] as i128
                    + l as i128 * peak as i128;
                if lhs > rhs {
                    violations += 1;
                }
                let gap = (lhs - rhs) as f64 / (kk as f64 * LOG_SCALE as f64);
                worst_gap = worst_gap.max(gap);
            }
        }
    }
    let ratio = worst_gap.exp2();
    GnReport {
        check_id: CheckId::L35,
        params: ParamEcho {
            d,
            theta: "n/a".into(),
            k: Some(k),
            seed,
            sample: 0,
            ..ParamEcho::default()
        },
        lhs: ratio,
        rhs: 1.0,
        constant_used: constants::c_f64(k),
        ratio,
        converged: true,
        passed: violations == 0,
        grid: format!("dyadic-exact trials={trials}"),
        max_violation: Some(violations as f64),
        note: Some(format!("worst log2 slack {worst_gap:.6}")),
    }
}

/// All β ∈ N^d with |β|₁ ≤ order, lexicographic.
pub fn simplex_points(d: usize, order: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut current = vec![0u32; d];
    loop {
        if current.iter().sum::<u32>() <= order {
            out.push(current.clone());
        }
        let mut axis = d;
        loop {
            if axis == 0 {
                return out;
            }
            axis -= 1;
            if current[axis] < order {
                current[axis] += 1;
                break;
            }
            current[axis] = 0;
        }
    }
}

/// The frequency shift e^{itD_j} must multiply, commute with the adjoint,
/// and preserve the trace; all at coefficient level.
pub fn check_frequency_shift_automorphism(
    x: &TorusElement,
    y: &TorusElement,
    ts: &[f64],
    theta_desc: &str,
    seed: u64,
    sample: u32,
) -> GnReport {
    let tol = 1e-12;
    let d = x.dim();
    let mut worst = 0.0_f64;
    for axis in 0..d {
        for &t in ts {
            let sx = x.translate(t, axis).expect("axis in range");
            let sy = y.translate(t, axis).expect("axis in range");
            let hom = x
                .multiply(y)
                .expect("same twist")
                .translate(t, axis)
                .expect("axis in range")
                .coeff_sup_distance(&sx.multiply(&sy).expect("same twist"));
            let star = x
                .adjoint()
                .translate(t, axis)
                .expect("axis in range")
                .coeff_sup_distance(&sx.adjoint());
            let tr = (sx.trace() - x.trace()).norm();
            worst = worst.max(hom).max(star).max(tr);
        }
    }
    GnReport {
        check_id: CheckId::L37,
        params: ParamEcho {
            d,
            theta: theta_desc.into(),
            support: Some(x.support_radius()),
            seed,
            sample,
            ..ParamEcho::default()
        },
        lhs: worst,
        rhs: tol,
        constant_used: 1.0,
        ratio: GnReport::ratio_of(worst, tol),
        converged: true,
        passed: worst <= tol,
        grid: format!("t-grid[{}] x coefficient level", ts.len()),
        max_violation: Some(worst),
        note: None,
    }
}
