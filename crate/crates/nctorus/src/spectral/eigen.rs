//! Dense complex Hermitian eigensolver.
//!
//! Householder reduction to real symmetric tridiagonal form followed by
//! the implicit-shift QL iteration (Bowdler–Martin–Reinsch–Wilkinson
//! lineage, as in EISPACK tred2/tql2). Reflectors are generated so the
//! resulting subdiagonal is real, which lets the tridiagonal stage run in
//! real arithmetic; eigenvectors, when requested, are accumulated by
//! applying the QL rotations to the complex back-transform.

use num_complex::Complex64;

use super::matrix::DenseComplexMatrix;
use super::SpectralError;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// One Householder step: base column, reflector tail, and τ.
type Reflector = (usize, Vec<Complex64>, Complex64);

/// Elementary reflector H = I − τ v v^H with v = (1, x/(α−β)) chosen so
/// that H^H maps (α, x) to (β, 0) with β real. Rewrites `x` with the tail
/// of v and returns τ (zero when no reflection is needed).
fn reflector(alpha: &mut Complex64, x: &mut [Complex64]) -> Complex64 {
    let xnorm_sq: f64 = x.iter().map(|c| c.norm_sqr()).sum();
    if xnorm_sq == 0.0 && alpha.im == 0.0 {
        return ZERO;
    }
    let anorm = (alpha.norm_sqr() + xnorm_sq).sqrt();
    let beta = if alpha.re >= 0.0 { -anorm } else { anorm };
    let tau = Complex64::new((beta - alpha.re) / beta, -alpha.im / beta);
    let scale = (*alpha - beta).inv();
    for xi in x.iter_mut() {
        *xi *= scale;
    }
    *alpha = Complex64::new(beta, 0.0);
    tau
}

/// Reduces Hermitian `a` to real tridiagonal (d, e); the reflector tails
/// and τ values are returned for back-transform accumulation.
fn tridiagonalize(a: &mut DenseComplexMatrix) -> (Vec<f64>, Vec<f64>, Vec<Reflector>) {
    let n = a.size();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    let mut reflectors = Vec::with_capacity(n.saturating_sub(1));
    if n == 0 {
        return (d, e, reflectors);
    }

    for i in 0..n.saturating_sub(1) {
        // Column i below the diagonal becomes (β, 0, …, 0).
        let mut alpha = a.get(i + 1, i);
        let mut tail: Vec<Complex64> = (i + 2..n).map(|r| a.get(r, i)).collect();
        let tau = reflector(&mut alpha, &mut tail);
        e[i] = alpha.re;

        if tau != ZERO {
            // v = (1, tail) on coordinates i+1..n.
            let m = n - i - 1;
            let mut v = Vec::with_capacity(m);
            v.push(Complex64::new(1.0, 0.0));
            v.extend_from_slice(&tail);

            // w = τ A₂₂ v, then w ← w − (τ/2)(w^H v) v.
            let mut w = vec![ZERO; m];
            for (r, slot) in w.iter_mut().enumerate() {
                let row = &a.row(i + 1 + r)[i + 1..n];
                let mut acc = ZERO;
                for (av, vv) in row.iter().zip(&v) {
                    acc += av * vv;
                }
                *slot = tau * acc;
            }
            let wv: Complex64 = w.iter().zip(&v).map(|(wk, vk)| wk.conj() * vk).sum();
            let corr = -0.5 * tau * wv;
            for (wk, vk) in w.iter_mut().zip(&v) {
                *wk += corr * vk;
            }

            // A₂₂ ← A₂₂ − v w^H − w v^H.
            for r in 0..m {
                let vr = v[r];
                let wr = w[r];
                let row = &mut a.row_mut(i + 1 + r)[i + 1..n];
                for c in 0..m {
                    row[c] -= vr * w[c].conj() + wr * v[c].conj();
                }
            }
            reflectors.push((i, tail, tau));
        }

        d[i] = a.get(i, i).re;
        a.set(i + 1, i, Complex64::new(e[i], 0.0));
    }
    d[n - 1] = a.get(n - 1, n - 1).re;
    (d, e, reflectors)
}

/// Q = H_0 H_1 ⋯, the unitary with A = Q T Q^H.
fn accumulate_transform(n: usize, reflectors: &[Reflector]) -> DenseComplexMatrix {
    let mut q = DenseComplexMatrix::identity(n);
    for (i, tail, tau) in reflectors.iter().rev() {
        let base = i + 1;
        let m = n - base;
        let mut v = Vec::with_capacity(m);
        v.push(Complex64::new(1.0, 0.0));
        v.extend_from_slice(tail);
        // Q ← (I − τ v v^H) Q restricted to rows base..n.
        for col in 0..n {
            let mut dot = ZERO;
            for (k, vk) in v.iter().enumerate() {
                dot += vk.conj() * q.get(base + k, col);
            }
            let f = tau * dot;
            for (k, vk) in v.iter().enumerate() {
                let cur = q.get(base + k, col);
                q.set(base + k, col, cur - f * vk);
            }
        }
    }
    q
}

/// Implicit-shift QL on a real symmetric tridiagonal; `on_rotation(i, c, s)`
/// observes every plane rotation so callers can carry eigenvectors.
fn tridiagonal_ql(
    d: &mut [f64],
    e: &mut [f64],
    mut on_rotation: impl FnMut(usize, f64, f64),
) -> Result<(), SpectralError> {
    let n = d.len();
    if n <= 1 {
        return Ok(());
    }
    let eps = f64::EPSILON;
    e[n - 1] = 0.0;

    let mut shift_acc = 0.0;
    let mut tst1 = 0.0_f64;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }

        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > 60 {
                    return Err(SpectralError::NoConvergence(l));
                }

                // Implicit Wilkinson-style shift.
                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for item in d.iter_mut().take(n).skip(l + 2) {
                    *item -= h;
                }
                shift_acc += h;

                // One QL sweep, bottom-up.
                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let gi = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * gi;
                    d[i + 1] = h + s * (c * gi + s * d[i]);
                    on_rotation(i, c, s);
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;

                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += shift_acc;
        e[l] = 0.0;
    }
    Ok(())
}

/// Ascending eigenvalues of a real symmetric tridiagonal (d, subdiag e).
pub fn tridiagonal_eigenvalues(
    mut d: Vec<f64>,
    mut e: Vec<f64>,
) -> Result<Vec<f64>, SpectralError> {
    e.resize(d.len(), 0.0);
    tridiagonal_ql(&mut d, &mut e, |_, _, _| {})?;
    d.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
    Ok(d)
}

/// Ascending eigenvalues of a Hermitian matrix (Hermitian defect must be
/// within `tol`; the strictly lower triangle is taken as authoritative
/// after an exact symmetrization).
pub fn dense_eigenvalues(h: &DenseComplexMatrix, tol: f64) -> Result<Vec<f64>, SpectralError> {
    let defect = h.hermitian_defect();
    if defect > tol {
        return Err(SpectralError::NotHermitian(defect));
    }
    let mut work = symmetrized(h);
    let (mut d, mut e, _) = tridiagonalize(&mut work);
    tridiagonal_ql(&mut d, &mut e, |_, _, _| {})?;
    d.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
    Ok(d)
}

/// Full eigendecomposition: ascending eigenvalues and the matching unitary
/// (eigenvectors in columns).
pub fn dense_eigen(
    h: &DenseComplexMatrix,
    tol: f64,
) -> Result<(Vec<f64>, DenseComplexMatrix), SpectralError> {
    let defect = h.hermitian_defect();
    if defect > tol {
        return Err(SpectralError::NotHermitian(defect));
    }
    let n = h.size();
    let mut work = symmetrized(h);
    let (mut d, mut e, reflectors) = tridiagonalize(&mut work);
    let mut q = accumulate_transform(n, &reflectors);
    tridiagonal_ql(&mut d, &mut e, |i, c, s| {
        for k in 0..n {
            let f = q.get(k, i + 1);
            let g = q.get(k, i);
            q.set(k, i + 1, s * g + c * f);
            q.set(k, i, c * g - s * f);
        }
    })?;

    // Sort ascending, carrying columns.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].partial_cmp(&d[b]).expect("finite eigenvalues"));
    let values: Vec<f64> = order.iter().map(|&i| d[i]).collect();
    let vectors = DenseComplexMatrix::from_fn(n, |r, c| q.get(r, order[c]));
    Ok((values, vectors))
}

fn symmetrized(h: &DenseComplexMatrix) -> DenseComplexMatrix {
    let n = h.size();
    DenseComplexMatrix::from_fn(n, |i, j| {
        if i == j {
            Complex64::new(h.get(i, i).re, 0.0)
        } else {
            0.5 * (h.get(i, j) + h.get(j, i).conj())
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    fn random_hermitian(n: usize, seed: u64) -> DenseComplexMatrix {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let mut h = DenseComplexMatrix::zeros(n);
        for i in 0..n {
            h.set(i, i, Complex64::new(rng.gen_range(-1.0..1.0), 0.0));
            for j in 0..i {
                let v = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                h.set(i, j, v);
                h.set(j, i, v.conj());
            }
        }
        h
    }

    #[test]
    fn diagonal_matrix_spectrum() {
        let mut h = DenseComplexMatrix::zeros(4);
        for (i, v) in [3.0, -1.0, 2.0, 0.5].into_iter().enumerate() {
            h.set(i, i, Complex64::new(v, 0.0));
        }
        let vals = dense_eigenvalues(&h, 1e-12).unwrap();
        assert_eq!(vals, vec![-1.0, 0.5, 2.0, 3.0]);
    }

    #[test]
    fn exchange_matrix_spectrum() {
        let mut h = DenseComplexMatrix::zeros(2);
        h.set(0, 1, Complex64::new(1.0, 0.0));
        h.set(1, 0, Complex64::new(1.0, 0.0));
        let vals = dense_eigenvalues(&h, 1e-12).unwrap();
        assert!((vals[0] + 1.0).abs() <= 1e-14);
        assert!((vals[1] - 1.0).abs() <= 1e-14);
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut h = DenseComplexMatrix::zeros(2);
        h.set(0, 1, Complex64::new(1.0, 0.0));
        assert!(matches!(
            dense_eigenvalues(&h, 1e-12),
            Err(SpectralError::NotHermitian(_))
        ));
    }

    #[test]
    fn moments_match_on_random_hermitian() {
        let n = 64;
        let h = random_hermitian(n, 9);
        let vals = dense_eigenvalues(&h, 1e-12).unwrap();

        // tr(H^k) vs power sums of eigenvalues for k ≤ 4.
        let mut power = DenseComplexMatrix::identity(n);
        for k in 1..=4u32 {
            power = power.mul(&h);
            let tr: Complex64 = (0..n).map(|i| power.get(i, i)).sum();
            let ps: f64 = vals.iter().map(|l| l.powi(k as i32)).sum();
            let scale = vals.iter().fold(0.0_f64, |m, v| m.max(v.abs())).powi(k as i32) * n as f64;
            assert!((tr.re - ps).abs() <= 1e-8 * scale.max(1.0), "moment {k}");
            assert!(tr.im.abs() <= 1e-9 * scale.max(1.0));
        }

        // Squares: spectrum of H² equals the squared spectrum.
        let h2 = h.mul(&h);
        let sq = dense_eigenvalues(&h2, 1e-9).unwrap();
        let mut expect: Vec<f64> = vals.iter().map(|v| v * v).collect();
        expect.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (a, b) in sq.iter().zip(&expect) {
            assert!((a - b).abs() <= 1e-9 * expect.last().unwrap().max(1.0));
        }
    }

    #[test]
    fn eigenvectors_have_small_residual() {
        let n = 48;
        let h = random_hermitian(n, 21);
        let (vals, vecs) = dense_eigen(&h, 1e-12).unwrap();
        let norm_h = vals.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        for (j, &lambda) in vals.iter().enumerate() {
            let v: Vec<Complex64> = (0..n).map(|i| vecs.get(i, j)).collect();
            let hv = h.apply(&v);
            let resid: f64 = hv
                .iter()
                .zip(&v)
                .map(|(a, b)| (a - lambda * b).norm_sqr())
                .sum::<f64>()
                .sqrt();
            assert!(resid <= 1e-9 * norm_h.max(1.0), "eigenpair {j}: {resid}");
        }
        // Trace identity.
        let tr: f64 = (0..n).map(|i| h.get(i, i).re).sum();
        let sum: f64 = vals.iter().sum();
        assert!((tr - sum).abs() <= 1e-9 * (n as f64) * norm_h.max(1.0));
    }

    #[test]
    fn handles_trivial_sizes() {
        let h = DenseComplexMatrix::zeros(0);
        assert!(dense_eigenvalues(&h, 1e-12).unwrap().is_empty());
        let mut h1 = DenseComplexMatrix::zeros(1);
        h1.set(0, 0, Complex64::new(4.0, 0.0));
        assert_eq!(dense_eigenvalues(&h1, 1e-12).unwrap(), vec![4.0]);
    }
}
