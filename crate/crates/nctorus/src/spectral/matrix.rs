//! Dense complex matrices, row-major.

use num_complex::Complex64;

/// N×N complex matrix with contiguous row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseComplexMatrix {
    size: usize,
    data: Vec<Complex64>,
}

impl DenseComplexMatrix {
    pub fn zeros(size: usize) -> Self {
        Self {
            size,
            data: vec![Complex64::new(0.0, 0.0); size * size],
        }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = Self::zeros(size);
        for i in 0..size {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    pub fn from_fn(size: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(size * size);
        for i in 0..size {
            for j in 0..size {
                data.push(f(i, j));
            }
        }
        Self { size, data }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.size + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.size + j] = v;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.size..(i + 1) * self.size]
    }

    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [Complex64] {
        &mut self.data[i * self.size..(i + 1) * self.size]
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn conj_transpose(&self) -> Self {
        Self::from_fn(self.size, |i, j| self.get(j, i).conj())
    }

    /// Largest entrywise deviation from Hermitian symmetry.
    pub fn hermitian_defect(&self) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..self.size {
            for j in i..self.size {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.size, other.size, "size mismatch in matrix product");
        let n = self.size;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let src = other.row(k);
                let dst = out.row_mut(i);
                for j in 0..n {
                    dst[j] += a * src[j];
                }
            }
        }
        out
    }

    /// y = A x.
    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.size);
        (0..self.size)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .map(|(a, b)| a * b)
                    .sum::<Complex64>()
            })
            .collect()
    }

    /// A^H A. Skips exact zeros of A, which makes the product cheap for
    /// the sparse finite sections produced by short Fourier supports.
    pub fn gram(&self) -> Self {
        let n = self.size;
        let mut out = Self::zeros(n);
        for k in 0..n {
            let row = self.row(k);
            let nz: Vec<usize> = (0..n)
                .filter(|&j| row[j] != Complex64::new(0.0, 0.0))
                .collect();
            for &i in &nz {
                let a = row[i].conj();
                for &j in &nz {
                    let v = a * row[j];
                    out.data[i * n + j] += v;
                }
            }
        }
        out
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            size: self.size,
            data: self.data.iter().map(|v| c * v).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.size, other.size);
        Self {
            size: self.size,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.size, other.size);
        Self {
            size: self.size,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn product_and_gram() {
        let a = DenseComplexMatrix::from_fn(2, |i, j| c((i + 1) as f64, j as f64));
        let id = DenseComplexMatrix::identity(2);
        assert_eq!(a.mul(&id), a);
        let g = a.gram();
        let direct = a.conj_transpose().mul(&a);
        for i in 0..2 {
            for j in 0..2 {
                assert!((g.get(i, j) - direct.get(i, j)).norm() <= 1e-14);
            }
        }
    }

    #[test]
    fn hermitian_defect_detects_asymmetry() {
        let mut m = DenseComplexMatrix::identity(2);
        assert_eq!(m.hermitian_defect(), 0.0);
        m.set(0, 1, c(0.0, 1.0));
        m.set(1, 0, c(0.0, 1.0));
        assert!(m.hermitian_defect() > 1.9);
    }
}
