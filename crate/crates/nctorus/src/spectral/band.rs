//! Banded Hermitian eigenvalues via Givens bandwidth reduction.
//!
//! Finite sections of short Fourier supports are band matrices whose
//! bandwidth is far below their size, so the O(N³) dense reduction wastes
//! almost all of its work. This kernel peels the band one diagonal at a
//! time (Schwarz's scheme): each outermost entry is annihilated by an
//! adjacent plane rotation whose fill-in lands one diagonal outside the
//! band and is chased off the matrix in strides of the bandwidth. Total
//! cost is O(N²·bw) with an O(N·bw) working set, and the result feeds the
//! same tridiagonal QL stage as the dense path.
//!
//! Only the lower triangle is stored: `data[col·stride + dist]` holds
//! `A[col+dist, col]`, with one spare diagonal for the transient bulge.

use num_complex::Complex64;

use super::eigen::tridiagonal_eigenvalues;
use super::matrix::DenseComplexMatrix;
use super::SpectralError;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Hermitian band matrix (lower triangle, diagonal-major storage).
#[derive(Debug, Clone)]
pub struct BandedHermitian {
    n: usize,
    bw: usize,
    stride: usize,
    data: Vec<Complex64>,
}

impl BandedHermitian {
    pub fn zeros(n: usize, bandwidth: usize) -> Self {
        let bw = bandwidth.min(n.saturating_sub(1));
        let stride = bw + 2;
        Self {
            n,
            bw,
            stride,
            data: vec![ZERO; n * stride],
        }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn bandwidth(&self) -> usize {
        self.bw
    }

    /// Lower-triangle read; anything outside the stored band is zero.
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        debug_assert!(row >= col);
        let dist = row - col;
        if dist >= self.stride || row >= self.n {
            ZERO
        } else {
            self.data[col * self.stride + dist]
        }
    }

    pub fn set(&mut self, row: usize, col: usize, v: Complex64) {
        debug_assert!(row >= col && row - col <= self.bw);
        self.data[col * self.stride + (row - col)] = v;
    }

    pub fn frobenius_norm_sq(&self) -> f64 {
        let mut acc = 0.0;
        for col in 0..self.n {
            let base = col * self.stride;
            acc += self.data[base].norm_sqr();
            for dist in 1..self.stride.min(self.n - col) {
                acc += 2.0 * self.data[base + dist].norm_sqr();
            }
        }
        acc
    }

    /// Dense copy (tests and small cross-checks).
    pub fn to_dense(&self) -> DenseComplexMatrix {
        DenseComplexMatrix::from_fn(self.n, |i, j| {
            if i >= j {
                self.get(i, j)
            } else {
                self.get(j, i).conj()
            }
        })
    }

    /// Ascending eigenvalues; consumes the matrix (the reduction is
    /// in-place).
    pub fn into_eigenvalues(mut self) -> Result<Vec<f64>, SpectralError> {
        let (d, e) = self.tridiagonalize();
        tridiagonal_eigenvalues(d, e)
    }

    /// Reduces to a real symmetric tridiagonal (d, e). Eigenvalues are
    /// invariant under the final phase similarity that realifies the
    /// subdiagonal.
    fn tridiagonalize(&mut self) -> (Vec<f64>, Vec<f64>) {
        let n = self.n;
        for level in (2..=self.bw).rev() {
            for j in 0..n.saturating_sub(level) {
                if self.get(j + level, j) == ZERO {
                    continue;
                }
                self.annihilate_and_chase(j + level, j, level);
            }
        }
        let d: Vec<f64> = (0..n).map(|i| self.get(i, i).re).collect();
        let mut e: Vec<f64> = (0..n.saturating_sub(1))
            .map(|i| self.get(i + 1, i).norm())
            .collect();
        e.resize(n, 0.0);
        (d, e)
    }

    /// Zeros A[row, col] with the plane rotation (row−1, row), then chases
    /// the resulting bulge down in strides of `level`.
    fn annihilate_and_chase(&mut self, mut row: usize, mut col: usize, level: usize) {
        loop {
            let target = self.get(row, col);
            if target == ZERO {
                break;
            }
            let partner = self.get(row - 1, col);
            let (c, s) = zeroing_rotation(partner, target);
            self.rotate(row - 1, c, s, level, col);
            if row + level > self.n - 1 {
                break;
            }
            col = row - 1;
            row += level;
        }
    }

    /// Two-sided similarity by the plane rotation on coordinates
    /// (i1, i1+1); the update reach `level + 1` covers the bulge slot and
    /// `col_floor` bounds the nonzero row span on the left.
    fn rotate(&mut self, i1: usize, c: f64, s: Complex64, level: usize, col_floor: usize) {
        let i2 = i1 + 1;
        let n = self.n;
        let stride = self.stride;
        let s_conj = s.conj();
        let data = &mut self.data[..];

        // Rows (i1, i2) over earlier columns: the pair for column col sits
        // adjacently at idx, idx+1 with idx = i1 + col·(stride−1).
        let step = stride - 1;
        let mut idx = i1 + col_floor * step;
        for _ in col_floor..i1 {
            let x = data[idx];
            let y = data[idx + 1];
            data[idx] = c * x - s * y;
            data[idx + 1] = s_conj * x + c * y;
            idx += step;
        }

        // 2×2 diagonal block.
        let base1 = i1 * stride;
        let base2 = i2 * stride;
        let a = data[base1].re;
        let b = data[base2].re;
        let x = data[base1 + 1];
        let sx_re = (s * x).re;
        let ssq = s.norm_sqr();
        data[base1] = Complex64::new(c * c * a + ssq * b - 2.0 * c * sx_re, 0.0);
        data[base2] = Complex64::new(ssq * a + c * c * b + 2.0 * c * sx_re, 0.0);
        data[base1 + 1] = (c * s_conj) * (a - b) + (c * c) * x - s_conj * s_conj * x.conj();

        // Columns (i1, i2) over later rows: contiguous runs in both
        // column blocks, the last slot being the fresh bulge.
        let hi = (i1 + level + 1).min(n - 1);
        if hi > i2 {
            let len = hi - i2;
            let (left, right) = data.split_at_mut(base2);
            let col1 = &mut left[base1 + 2..base1 + 2 + len];
            let col2 = &mut right[1..1 + len];
            for (u_slot, w_slot) in col1.iter_mut().zip(col2) {
                let u = *u_slot;
                let w = *w_slot;
                *u_slot = c * u - s_conj * w;
                *w_slot = s * u + c * w;
            }
        }
    }
}

/// (c, s) with c real so the similarity zeroes the `g` slot of the pair
/// (f, g) = (A[i1, col], A[i2, col]).
fn zeroing_rotation(f: Complex64, g: Complex64) -> (f64, Complex64) {
    if g == ZERO {
        return (1.0, ZERO);
    }
    if f == ZERO {
        return (0.0, -g.conj() / g.norm());
    }
    let af = f.norm();
    let h = af.hypot(g.norm());
    let c = af / h;
    let s = -(g.conj() / h) * (f / af);
    (c, s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::eigen::dense_eigenvalues;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    fn random_band(n: usize, bw: usize, seed: u64) -> BandedHermitian {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let mut m = BandedHermitian::zeros(n, bw);
        for col in 0..n {
            m.set(col, col, Complex64::new(rng.gen_range(-1.0..1.0), 0.0));
            for dist in 1..=bw.min(n - 1 - col) {
                m.set(
                    col + dist,
                    col,
                    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                );
            }
        }
        m
    }

    #[test]
    fn matches_dense_solver() {
        for (n, bw, seed) in [(12, 3, 1), (40, 5, 2), (64, 1, 3), (64, 9, 4), (90, 20, 5)] {
            let band = random_band(n, bw, seed);
            let dense = band.to_dense();
            let got = band.into_eigenvalues().unwrap();
            let expect = dense_eigenvalues(&dense, 1e-12).unwrap();
            let scale = expect.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
            for (a, b) in got.iter().zip(&expect) {
                assert!((a - b).abs() <= 1e-10 * scale, "n={n} bw={bw}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn diagonal_band() {
        let mut m = BandedHermitian::zeros(5, 0);
        for (i, v) in [2.0, -3.0, 0.0, 1.0, 5.0].into_iter().enumerate() {
            m.set(i, i, Complex64::new(v, 0.0));
        }
        let vals = m.into_eigenvalues().unwrap();
        assert_eq!(vals, vec![-3.0, 0.0, 1.0, 2.0, 5.0]);
    }

    #[test]
    fn complex_tridiagonal_band() {
        // Already tridiagonal: only the realifying step applies.
        let mut m = BandedHermitian::zeros(6, 1);
        for i in 0..6 {
            m.set(i, i, Complex64::new(i as f64, 0.0));
        }
        for i in 0..5 {
            m.set(i + 1, i, Complex64::new(0.3, -0.4 * i as f64));
        }
        let dense = m.to_dense();
        let got = m.into_eigenvalues().unwrap();
        let expect = dense_eigenvalues(&dense, 1e-12).unwrap();
        for (a, b) in got.iter().zip(&expect) {
            assert!((a - b).abs() <= 1e-12);
        }
    }

    #[test]
    fn frobenius_matches_dense() {
        let band = random_band(30, 4, 8);
        let dense = band.to_dense();
        assert!((band.frobenius_norm_sq() - dense.frobenius_norm().powi(2)).abs() <= 1e-10);
    }
}
