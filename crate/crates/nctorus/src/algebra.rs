//! Twisted Fourier calculus on the noncommutative d-torus.
//!
//! Elements are finite series `x = Σ x̂(n) U^n` over `n ∈ Z^d`, where the
//! generators satisfy `U_j U_k = e^{2πiθ_{j,k}} U_k U_j` for a real
//! antisymmetric matrix θ. With the ordering convention
//! `U^n = U_1^{n_1} ⋯ U_d^{n_d}`, products normal-order through the
//! bicharacter
//!
//! ```text
//! U^m U^n = e^{2πiλ(m,n)} U^{m+n},   λ(m,n) = Σ_{k>j} θ_{k,j} m_k n_j.
//! ```
//!
//! λ is bilinear in (m,n), which makes the product associative and gives
//! `U_j U_k = e^{2πiθ_{j,k}} U_k U_j` back when specialized to unit
//! frequencies. The normalized trace picks the coefficient at frequency 0,
//! derivations act as `∂_j U^n = 2πi n_j U^n`, and Fourier multipliers act
//! coefficientwise.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use rand::Rng;
use thiserror::Error;

const TAU: f64 = std::f64::consts::TAU;

/// Errors from torus-algebra operations.
#[derive(Debug, Error)]
pub enum AlgebraError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("operands live over different twist matrices")]
    ThetaMismatch,
    #[error("twist matrix entry ({0},{1}) breaks antisymmetry")]
    NotAntisymmetric(usize, usize),
    #[error("derivative order has negative component {0} on axis {1}")]
    NegativeOrder(i64, usize),
    #[error("multiplier symbol undefined at frequency {0}")]
    MultiplierUndefined(MultiIndex),
    #[error("axis {0} out of range for dimension {1}")]
    AxisOutOfRange(usize, usize),
    #[error("invalid twist parameter: {0}")]
    InvalidTheta(String),
}

/// Real antisymmetric d×d twist matrix θ.
///
/// Entries are interpreted mod 1; antisymmetry (`θ_{j,k} = −θ_{k,j}`, zero
/// diagonal) is enforced bit-exactly at construction so that algebraic
/// identities relying on `λ(n,−n) = λ(−n,n)` hold without rounding slack.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaMatrix {
    dim: usize,
    entries: Vec<f64>,
}

impl ThetaMatrix {
    /// Validates an explicit matrix. Antisymmetry must hold exactly.
    pub fn new(dim: usize, entries: Vec<f64>) -> Result<Self, AlgebraError> {
        if entries.len() != dim * dim {
            return Err(AlgebraError::DimensionMismatch(entries.len(), dim * dim));
        }
        for j in 0..dim {
            for k in 0..dim {
                let a = entries[j * dim + k];
                let b = entries[k * dim + j];
                if a != -b || (j == k && a != 0.0) {
                    return Err(AlgebraError::NotAntisymmetric(j, k));
                }
            }
        }
        Ok(Self { dim, entries })
    }

    /// Builds θ from its strict upper triangle, filling the lower triangle
    /// with exact negations.
    pub fn from_upper(dim: usize, mut upper: impl FnMut(usize, usize) -> f64) -> Self {
        let mut entries = vec![0.0; dim * dim];
        for j in 0..dim {
            for k in (j + 1)..dim {
                let v = upper(j, k);
                entries[j * dim + k] = v;
                entries[k * dim + j] = -v;
            }
        }
        Self { dim, entries }
    }

    /// The untwisted (commutative) case θ = 0.
    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            entries: vec![0.0; dim * dim],
        }
    }

    /// θ_{j,k} = (√5 − 1)/2 for j < k, antisymmetrized.
    pub fn golden(dim: usize) -> Self {
        let g = (5.0_f64.sqrt() - 1.0) / 2.0;
        Self::from_upper(dim, |_, _| g)
    }

    /// Two-dimensional rational twist θ_{1,2} = p/q.
    pub fn rational(p: i64, q: i64) -> Result<Self, AlgebraError> {
        if q <= 0 {
            return Err(AlgebraError::InvalidTheta(format!(
                "rational twist needs a positive denominator, got {q}"
            )));
        }
        Ok(Self::from_upper(2, |_, _| p as f64 / q as f64))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, j: usize, k: usize) -> f64 {
        self.entries[j * self.dim + k]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&v| v == 0.0)
    }
}

/// A point of Z^d: a frequency index, or (componentwise ≥ 0) a derivative
/// order α with total order |α|_1 = Σ α_j.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex(Vec<i64>);

impl MultiIndex {
    pub fn new(components: Vec<i64>) -> Self {
        Self(components)
    }

    pub fn zero(dim: usize) -> Self {
        Self(vec![0; dim])
    }

    /// The j-th standard basis vector e_j.
    pub fn unit(dim: usize, axis: usize) -> Self {
        let mut c = vec![0; dim];
        c[axis] = 1;
        Self(c)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn components(&self) -> &[i64] {
        &self.0
    }

    pub fn get(&self, axis: usize) -> i64 {
        self.0[axis]
    }

    /// |α|_1, the sum of components (meaningful for derivative orders).
    pub fn order(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|&c| c >= 0)
    }

    /// sup-norm |n|_∞.
    pub fn linf(&self) -> i64 {
        self.0.iter().map(|c| c.abs()).max().unwrap_or(0)
    }

    /// Euclidean norm |n|_2.
    pub fn l2(&self) -> f64 {
        self.0
            .iter()
            .map(|&c| (c as f64) * (c as f64))
            .sum::<f64>()
            .sqrt()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn neg(&self) -> Self {
        Self(self.0.iter().map(|&c| -c).collect())
    }

    /// First-nonzero-component sign; orders the lattice for conjugate pairing.
    pub fn lex_sign(&self) -> i64 {
        for &c in &self.0 {
            if c != 0 {
                return c.signum();
            }
        }
        0
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Normal-ordering phase λ(m,n) mod 1, in [0,1).
///
/// `U^m U^n = e^{2πiλ(m,n)} U^{m+n}` with λ(m,n) = Σ_{k>j} θ_{k,j} m_k n_j.
pub fn phase(m: &MultiIndex, n: &MultiIndex, theta: &ThetaMatrix) -> Result<f64, AlgebraError> {
    if m.dim() != theta.dim() {
        return Err(AlgebraError::DimensionMismatch(m.dim(), theta.dim()));
    }
    if n.dim() != theta.dim() {
        return Err(AlgebraError::DimensionMismatch(n.dim(), theta.dim()));
    }
    Ok(phase_raw(m, n, theta).rem_euclid(1.0))
}

/// λ(m,n) without mod-1 reduction; dimensions must already agree.
fn phase_raw(m: &MultiIndex, n: &MultiIndex, theta: &ThetaMatrix) -> f64 {
    let d = theta.dim();
    let mut lambda = 0.0;
    for k in 1..d {
        let mk = m.get(k);
        if mk == 0 {
            continue;
        }
        for j in 0..k {
            let nj = n.get(j);
            if nj == 0 {
                continue;
            }
            lambda += theta.get(k, j) * (mk as f64) * (nj as f64);
        }
    }
    lambda
}

/// e^{2πiλ(m,n)}, with the argument reduced mod 1 before cos/sin.
pub(crate) fn phase_factor(m: &MultiIndex, n: &MultiIndex, theta: &ThetaMatrix) -> Complex64 {
    let lambda = phase_raw(m, n, theta).rem_euclid(1.0);
    Complex64::from_polar(1.0, TAU * lambda)
}

/// A finite twisted Fourier series Σ x̂(n) U^n.
///
/// Coefficients are stored in a `BTreeMap` keyed by frequency so iteration
/// order (and thus every floating-point reduction) is canonical. Elements
/// over different twist matrices do not compose.
#[derive(Debug, Clone, PartialEq)]
pub struct TorusElement {
    theta: ThetaMatrix,
    coeffs: BTreeMap<MultiIndex, Complex64>,
}

impl TorusElement {
    pub fn zero(theta: ThetaMatrix) -> Self {
        Self {
            theta,
            coeffs: BTreeMap::new(),
        }
    }

    /// The multiplicative identity (coefficient 1 at frequency 0).
    pub fn identity(theta: ThetaMatrix) -> Self {
        let n = MultiIndex::zero(theta.dim());
        Self::monomial(theta, n, Complex64::new(1.0, 0.0)).expect("zero index always fits")
    }

    /// c·U^n.
    pub fn monomial(
        theta: ThetaMatrix,
        n: MultiIndex,
        c: Complex64,
    ) -> Result<Self, AlgebraError> {
        if n.dim() != theta.dim() {
            return Err(AlgebraError::DimensionMismatch(n.dim(), theta.dim()));
        }
        let mut coeffs = BTreeMap::new();
        if c != Complex64::new(0.0, 0.0) {
            coeffs.insert(n, c);
        }
        Ok(Self { theta, coeffs })
    }

    /// The generator U_j.
    pub fn generator(theta: ThetaMatrix, axis: usize) -> Result<Self, AlgebraError> {
        if axis >= theta.dim() {
            return Err(AlgebraError::AxisOutOfRange(axis, theta.dim()));
        }
        let n = MultiIndex::unit(theta.dim(), axis);
        Self::monomial(theta, n, Complex64::new(1.0, 0.0))
    }

    pub fn from_coeffs(
        theta: ThetaMatrix,
        coeffs: impl IntoIterator<Item = (MultiIndex, Complex64)>,
    ) -> Result<Self, AlgebraError> {
        let mut map = BTreeMap::new();
        for (n, c) in coeffs {
            if n.dim() != theta.dim() {
                return Err(AlgebraError::DimensionMismatch(n.dim(), theta.dim()));
            }
            if c != Complex64::new(0.0, 0.0) {
                let slot = map.entry(n).or_insert(Complex64::new(0.0, 0.0));
                *slot += c;
            }
        }
        map.retain(|_, c| *c != Complex64::new(0.0, 0.0));
        Ok(Self { theta, coeffs: map })
    }

    pub fn theta(&self) -> &ThetaMatrix {
        &self.theta
    }

    pub fn dim(&self) -> usize {
        self.theta.dim()
    }

    /// x̂(n), zero off the support.
    pub fn coeff(&self, n: &MultiIndex) -> Complex64 {
        self.coeffs
            .get(n)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn support(&self) -> impl Iterator<Item = (&MultiIndex, &Complex64)> {
        self.coeffs.iter()
    }

    pub fn support_len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// max |n|_∞ over the support (0 for the zero element).
    pub fn support_radius(&self) -> i64 {
        self.coeffs.keys().map(|n| n.linf()).max().unwrap_or(0)
    }

    /// Twisted convolution: `(xy)^(n) = Σ_m x̂(m) ŷ(n−m) e^{2πiλ(m, n−m)}`.
    pub fn multiply(&self, other: &Self) -> Result<Self, AlgebraError> {
        if self.theta != other.theta {
            return Err(AlgebraError::ThetaMismatch);
        }
        let mut coeffs: BTreeMap<MultiIndex, Complex64> = BTreeMap::new();
        for (m, &cm) in &self.coeffs {
            for (k, &ck) in &other.coeffs {
                let target = m.add(k);
                let term = cm * ck * phase_factor(m, k, &self.theta);
                *coeffs.entry(target).or_insert(Complex64::new(0.0, 0.0)) += term;
            }
        }
        coeffs.retain(|_, c| *c != Complex64::new(0.0, 0.0));
        Ok(Self {
            theta: self.theta.clone(),
            coeffs,
        })
    }

    /// Adjoint x*. Since `U^n (U^n)* = 1`, each monomial maps to
    /// `conj(x̂(n)) e^{−2πiλ(n,−n)} U^{−n}`.
    pub fn adjoint(&self) -> Self {
        let mut coeffs = BTreeMap::new();
        for (n, &c) in &self.coeffs {
            let minus = n.neg();
            let factor = phase_factor(n, &minus, &self.theta).conj();
            coeffs.insert(minus, c.conj() * factor);
        }
        Self {
            theta: self.theta.clone(),
            coeffs,
        }
    }

    /// Normalized trace τ(x) = x̂(0).
    pub fn trace(&self) -> Complex64 {
        self.coeff(&MultiIndex::zero(self.dim()))
    }

    /// Mixed derivative ∇^α = ∂_1^{α_1}⋯∂_d^{α_d}, acting as the multiplier
    /// Π_j (2πi n_j)^{α_j}.
    ///
    /// Applied one ∂_j at a time in axis order, so composing single
    /// derivatives reproduces the mixed derivative bit-for-bit.
    pub fn derive(&self, alpha: &MultiIndex) -> Result<Self, AlgebraError> {
        self.check_order(alpha)?;
        let mut out = self.clone();
        for (axis, &a) in alpha.components().iter().enumerate() {
            for _ in 0..a {
                out = out.multiplier(|n| Complex64::new(0.0, TAU * n.get(axis) as f64));
            }
        }
        Ok(out)
    }

    /// Self-adjoint mixed derivative D^α = D_1^{α_1}⋯D_d^{α_d} with
    /// D_j = −i∂_j, i.e. the real multiplier Π_j (2π n_j)^{α_j}.
    ///
    /// Differs from [`derive`](Self::derive) by the unimodular factor
    /// i^{|α|_1}, so both have the same singular value data; this variant
    /// keeps self-adjoint inputs self-adjoint.
    pub fn derive_selfadjoint(&self, alpha: &MultiIndex) -> Result<Self, AlgebraError> {
        self.check_order(alpha)?;
        let mut out = self.clone();
        for (axis, &a) in alpha.components().iter().enumerate() {
            for _ in 0..a {
                out = out.multiplier(|n| Complex64::new(TAU * n.get(axis) as f64, 0.0));
            }
        }
        Ok(out)
    }

    fn check_order(&self, alpha: &MultiIndex) -> Result<(), AlgebraError> {
        if alpha.dim() != self.dim() {
            return Err(AlgebraError::DimensionMismatch(alpha.dim(), self.dim()));
        }
        for (axis, &a) in alpha.components().iter().enumerate() {
            if a < 0 {
                return Err(AlgebraError::NegativeOrder(a, axis));
            }
        }
        Ok(())
    }

    /// Fourier multiplier m(∇): coefficient at n becomes m(n)·x̂(n).
    pub fn multiplier(&self, symbol: impl Fn(&MultiIndex) -> Complex64) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(n, &c)| (n.clone(), symbol(n) * c))
            .filter(|(_, c)| *c != Complex64::new(0.0, 0.0))
            .collect();
        Self {
            theta: self.theta.clone(),
            coeffs,
        }
    }

    /// Fourier multiplier from a finite symbol table; fails if the table
    /// misses a support frequency.
    pub fn multiplier_table(
        &self,
        symbol: &BTreeMap<MultiIndex, Complex64>,
    ) -> Result<Self, AlgebraError> {
        let mut coeffs = BTreeMap::new();
        for (n, &c) in &self.coeffs {
            let m = symbol
                .get(n)
                .ok_or_else(|| AlgebraError::MultiplierUndefined(n.clone()))?;
            let v = m * c;
            if v != Complex64::new(0.0, 0.0) {
                coeffs.insert(n.clone(), v);
            }
        }
        Ok(Self {
            theta: self.theta.clone(),
            coeffs,
        })
    }

    /// The one-parameter automorphism e^{itD_j}: multiplier e^{2πi t n_j}
    /// (translation by t along axis j).
    pub fn translate(&self, t: f64, axis: usize) -> Result<Self, AlgebraError> {
        if axis >= self.dim() {
            return Err(AlgebraError::AxisOutOfRange(axis, self.dim()));
        }
        Ok(self.multiplier(|n| {
            let arg = (t * n.get(axis) as f64).rem_euclid(1.0);
            Complex64::from_polar(1.0, TAU * arg)
        }))
    }

    /// Plancherel norm √(Σ |x̂(n)|²) = ‖x‖_{L_2}.
    pub fn l2_norm(&self) -> f64 {
        self.coeffs
            .values()
            .map(|c| c.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Σ |x̂(n)|: an upper bound for the operator norm.
    pub fn coeff_l1_norm(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm()).sum()
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(n, &v)| (n.clone(), c * v))
            .filter(|(_, v)| *v != Complex64::new(0.0, 0.0))
            .collect();
        Self {
            theta: self.theta.clone(),
            coeffs,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, AlgebraError> {
        if self.theta != other.theta {
            return Err(AlgebraError::ThetaMismatch);
        }
        let mut coeffs = self.coeffs.clone();
        for (n, &c) in &other.coeffs {
            let slot = coeffs.entry(n.clone()).or_insert(Complex64::new(0.0, 0.0));
            *slot += c;
        }
        coeffs.retain(|_, c| *c != Complex64::new(0.0, 0.0));
        Ok(Self {
            theta: self.theta.clone(),
            coeffs,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    /// Coefficientwise sup distance over the union of supports.
    pub fn coeff_sup_distance(&self, other: &Self) -> f64 {
        let mut worst = 0.0_f64;
        for n in self.coeffs.keys().chain(other.coeffs.keys()) {
            let d = (self.coeff(n) - other.coeff(n)).norm();
            worst = worst.max(d);
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.coeff_sup_distance(&self.adjoint()) <= tol
    }

    /// Evaluates the element at a point of the ordinary torus; only
    /// meaningful for θ = 0, where x is the trigonometric polynomial
    /// Σ x̂(n) e^{2πi n·φ}.
    pub fn eval_commutative(&self, point: &[f64]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (n, &c) in &self.coeffs {
            let mut arg = 0.0;
            for (axis, &nj) in n.components().iter().enumerate() {
                arg += nj as f64 * point[axis];
            }
            acc += c * Complex64::from_polar(1.0, TAU * arg.rem_euclid(1.0));
        }
        acc
    }
}

/// Lexicographic enumeration of the box {n ∈ Z^d : |n|_∞ ≤ radius}.
pub fn lattice_box(dim: usize, radius: i64) -> Vec<MultiIndex> {
    let side = (2 * radius + 1) as usize;
    let count = side.pow(dim as u32);
    let mut out = Vec::with_capacity(count);
    let mut current = vec![-radius; dim];
    for _ in 0..count {
        out.push(MultiIndex::new(current.clone()));
        for axis in (0..dim).rev() {
            if current[axis] < radius {
                current[axis] += 1;
                break;
            }
            current[axis] = -radius;
        }
    }
    out
}

/// Random test element with support in {|n|_∞ ≤ radius} and coefficient
/// magnitudes damped by (1 + |n|_2)^{−decay}.
///
/// With `hermitian` set, conjugate frequency pairs are tied together so
/// the output equals its own adjoint; the zero mode is drawn real. Output
/// is a pure function of the RNG stream.
pub fn random_element(
    theta: &ThetaMatrix,
    radius: i64,
    decay: f64,
    hermitian: bool,
    rng: &mut impl Rng,
) -> TorusElement {
    let dim = theta.dim();
    let mut coeffs: BTreeMap<MultiIndex, Complex64> = BTreeMap::new();
    for n in lattice_box(dim, radius) {
        let sign = n.lex_sign();
        if hermitian && sign < 0 {
            continue;
        }
        let re = rng.gen_range(-1.0..1.0);
        let im = rng.gen_range(-1.0..1.0);
        let damp = (1.0 + n.l2()).powf(-decay);
        if hermitian {
            if sign == 0 {
                coeffs.insert(n, Complex64::new(re * damp, 0.0));
            } else {
                let c = Complex64::new(re, im) * damp;
                // Pair −n so that the adjoint reproduces both entries.
                let minus = n.neg();
                let factor = phase_factor(&n, &minus, theta).conj();
                coeffs.insert(minus, c.conj() * factor);
                coeffs.insert(n, c);
            }
        } else {
            let c = Complex64::new(re, im) * damp;
            if c != Complex64::new(0.0, 0.0) {
                coeffs.insert(n, c);
            }
        }
    }
    TorusElement {
        theta: theta.clone(),
        coeffs,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn theta37() -> ThetaMatrix {
        ThetaMatrix::rational(3, 7).unwrap()
    }

    #[test]
    fn theta_constructors_validate() {
        assert!(ThetaMatrix::new(2, vec![0.0, 0.5, -0.5, 0.0]).is_ok());
        assert!(ThetaMatrix::new(2, vec![0.0, 0.5, 0.5, 0.0]).is_err());
        assert!(ThetaMatrix::new(2, vec![0.1, 0.5, -0.5, 0.0]).is_err());
        assert!(!ThetaMatrix::golden(3).is_zero());
        assert!(ThetaMatrix::zero(2).is_zero());
    }

    #[test]
    fn phase_normal_ordered_pair_is_zero() {
        let th = ThetaMatrix::from_upper(2, |_, _| 0.37);
        let m = MultiIndex::new(vec![1, 0]);
        let n = MultiIndex::new(vec![0, 1]);
        assert_eq!(phase(&m, &n, &th).unwrap(), 0.0);
    }

    #[test]
    fn phase_swapped_pair_is_minus_theta() {
        let t = 0.37;
        let th = ThetaMatrix::from_upper(2, |_, _| t);
        let m = MultiIndex::new(vec![0, 1]);
        let n = MultiIndex::new(vec![1, 0]);
        let got = phase(&m, &n, &th).unwrap();
        assert!((got - (-t).rem_euclid(1.0)).abs() < 1e-15);
    }

    #[test]
    fn defining_relation_holds() {
        // U_j U_k = e^{2πiθ_{j,k}} U_k U_j for all pairs.
        let th = ThetaMatrix::golden(3);
        for j in 0..3 {
            for k in 0..3 {
                let uj = TorusElement::generator(th.clone(), j).unwrap();
                let uk = TorusElement::generator(th.clone(), k).unwrap();
                let lhs = uj.multiply(&uk).unwrap();
                let factor = Complex64::from_polar(1.0, TAU * th.get(j, k).rem_euclid(1.0));
                let rhs = uk.multiply(&uj).unwrap().scale(factor);
                assert!(lhs.coeff_sup_distance(&rhs) <= 1e-12, "pair ({j},{k})");
            }
        }
    }

    #[test]
    fn identity_is_neutral() {
        let th = theta37();
        let mut rng = ChaCha12Rng::seed_from_u64(5);
        let x = random_element(&th, 2, 1.0, false, &mut rng);
        let one = TorusElement::identity(th);
        assert_eq!(one.multiply(&x).unwrap(), x);
        assert_eq!(x.multiply(&one).unwrap(), x);
    }

    #[test]
    fn untwisted_monomials_add_frequencies() {
        let th = ThetaMatrix::zero(2);
        let um = TorusElement::monomial(th.clone(), MultiIndex::new(vec![2, -1]), c(1.0, 0.0))
            .unwrap();
        let un =
            TorusElement::monomial(th.clone(), MultiIndex::new(vec![-3, 4]), c(1.0, 0.0)).unwrap();
        let prod = um.multiply(&un).unwrap();
        let expect =
            TorusElement::monomial(th, MultiIndex::new(vec![-1, 3]), c(1.0, 0.0)).unwrap();
        assert!(prod.coeff_sup_distance(&expect) <= 1e-15);
    }

    #[test]
    fn associativity_on_random_triples() {
        let th = theta37();
        let mut rng = ChaCha12Rng::seed_from_u64(11);
        for _ in 0..20 {
            let x = random_element(&th, 3, 1.0, false, &mut rng);
            let y = random_element(&th, 3, 1.0, false, &mut rng);
            let z = random_element(&th, 3, 1.0, false, &mut rng);
            let left = x.multiply(&y).unwrap().multiply(&z).unwrap();
            let right = x.multiply(&y.multiply(&z).unwrap()).unwrap();
            assert!(left.coeff_sup_distance(&right) <= 1e-12);
        }
    }

    #[test]
    fn adjoint_involution_and_antihomomorphism() {
        let th = theta37();
        let mut rng = ChaCha12Rng::seed_from_u64(23);
        let x = random_element(&th, 2, 1.0, false, &mut rng);
        let y = random_element(&th, 2, 1.0, false, &mut rng);
        assert!(x.adjoint().adjoint().coeff_sup_distance(&x) <= 1e-14);
        let lhs = x.multiply(&y).unwrap().adjoint();
        let rhs = y.adjoint().multiply(&x.adjoint()).unwrap();
        assert!(lhs.coeff_sup_distance(&rhs) <= 1e-13);
    }

    #[test]
    fn generators_are_unitary() {
        let th = ThetaMatrix::golden(2);
        for n in [vec![1, 0], vec![0, 1], vec![3, -2]] {
            let u = TorusElement::monomial(th.clone(), MultiIndex::new(n), c(1.0, 0.0)).unwrap();
            let prod = u.adjoint().multiply(&u).unwrap();
            let one = TorusElement::identity(th.clone());
            assert!(prod.coeff_sup_distance(&one) <= 1e-14);
        }
    }

    #[test]
    fn trace_examples() {
        let th = theta37();
        let one = TorusElement::identity(th.clone());
        assert_eq!(one.trace(), c(1.0, 0.0));
        let un = TorusElement::monomial(th.clone(), MultiIndex::new(vec![2, 1]), c(1.0, 0.0))
            .unwrap();
        assert_eq!(un.trace(), c(0.0, 0.0));
        // τ(x*x) = Σ |x̂(n)|².
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        let x = random_element(&th, 2, 1.0, false, &mut rng);
        let gram = x.adjoint().multiply(&x).unwrap().trace();
        let plancherel = x.l2_norm().powi(2);
        assert!((gram.re - plancherel).abs() <= 1e-12 * plancherel.max(1.0));
        assert!(gram.im.abs() <= 1e-13);
    }

    #[test]
    fn traciality_on_random_pairs() {
        let th = ThetaMatrix::golden(2);
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        for _ in 0..20 {
            let x = random_element(&th, 3, 1.0, false, &mut rng);
            let y = random_element(&th, 3, 1.0, false, &mut rng);
            let a = x.multiply(&y).unwrap().trace();
            let b = y.multiply(&x).unwrap().trace();
            assert!((a - b).norm() <= 1e-12);
        }
    }

    #[test]
    fn derive_examples() {
        let th = theta37();
        let mut rng = ChaCha12Rng::seed_from_u64(17);
        let x = random_element(&th, 2, 1.0, false, &mut rng);
        assert_eq!(x.derive(&MultiIndex::zero(2)).unwrap(), x);

        let n = MultiIndex::new(vec![3, -2]);
        let un = TorusElement::monomial(th.clone(), n.clone(), c(1.0, 0.0)).unwrap();
        let dj = un.derive(&MultiIndex::unit(2, 0)).unwrap();
        let expect = un.scale(c(0.0, TAU * 3.0));
        assert!(dj.coeff_sup_distance(&expect) <= 1e-14);

        // Mixed partials commute exactly.
        let a = x
            .derive(&MultiIndex::unit(2, 0))
            .unwrap()
            .derive(&MultiIndex::unit(2, 1))
            .unwrap();
        let b = x.derive(&MultiIndex::new(vec![1, 1])).unwrap();
        assert_eq!(a, b);

        assert!(x.derive(&MultiIndex::new(vec![-1, 0])).is_err());
    }

    #[test]
    fn leibniz_rule() {
        let th = ThetaMatrix::golden(2);
        let mut rng = ChaCha12Rng::seed_from_u64(29);
        let x = random_element(&th, 2, 1.0, false, &mut rng);
        let y = random_element(&th, 2, 1.0, false, &mut rng);
        for axis in 0..2 {
            let e = MultiIndex::unit(2, axis);
            let lhs = x.multiply(&y).unwrap().derive(&e).unwrap();
            let rhs = x
                .derive(&e)
                .unwrap()
                .multiply(&y)
                .unwrap()
                .add(&x.multiply(&y.derive(&e).unwrap()).unwrap())
                .unwrap();
            assert!(lhs.coeff_sup_distance(&rhs) <= 1e-10);
        }
    }

    #[test]
    fn multiplier_table_requires_full_symbol() {
        let th = theta37();
        let x = TorusElement::from_coeffs(
            th,
            [
                (MultiIndex::new(vec![0, 0]), c(1.0, 0.0)),
                (MultiIndex::new(vec![1, 0]), c(2.0, 0.0)),
            ],
        )
        .unwrap();
        let mut table = BTreeMap::new();
        table.insert(MultiIndex::new(vec![0, 0]), c(3.0, 0.0));
        assert!(matches!(
            x.multiplier_table(&table),
            Err(AlgebraError::MultiplierUndefined(_))
        ));
        table.insert(MultiIndex::new(vec![1, 0]), c(0.5, 0.0));
        let y = x.multiplier_table(&table).unwrap();
        assert_eq!(y.coeff(&MultiIndex::new(vec![0, 0])), c(3.0, 0.0));
        assert_eq!(y.coeff(&MultiIndex::new(vec![1, 0])), c(1.0, 0.0));
    }

    #[test]
    fn multiplier_and_translation() {
        let th = theta37();
        let mut rng = ChaCha12Rng::seed_from_u64(31);
        let x = random_element(&th, 2, 1.0, false, &mut rng);
        assert_eq!(x.multiplier(|_| c(1.0, 0.0)), x);
        assert_eq!(x.translate(0.0, 1).unwrap(), x);

        let n = MultiIndex::new(vec![2, -5]);
        let un = TorusElement::monomial(th, n, c(1.0, 0.0)).unwrap();
        let t = 0.3_f64;
        let shifted = un.translate(t, 1).unwrap();
        let expect = un.scale(Complex64::from_polar(1.0, TAU * (t * -5.0).rem_euclid(1.0)));
        assert!(shifted.coeff_sup_distance(&expect) <= 1e-14);
    }

    #[test]
    fn translation_is_star_homomorphism_on_coefficients() {
        let th = ThetaMatrix::golden(2);
        let mut rng = ChaCha12Rng::seed_from_u64(37);
        let x = random_element(&th, 2, 1.0, false, &mut rng);
        let y = random_element(&th, 2, 1.0, false, &mut rng);
        for &t in &[0.3, 1.0, std::f64::consts::SQRT_2] {
            let lhs = x.multiply(&y).unwrap().translate(t, 0).unwrap();
            let rhs = x
                .translate(t, 0)
                .unwrap()
                .multiply(&y.translate(t, 0).unwrap())
                .unwrap();
            assert!(lhs.coeff_sup_distance(&rhs) <= 1e-12);
            let star = x.adjoint().translate(t, 0).unwrap();
            let rats = x.translate(t, 0).unwrap().adjoint();
            assert!(star.coeff_sup_distance(&rats) <= 1e-12);
            assert!((x.translate(t, 0).unwrap().trace() - x.trace()).norm() <= 1e-15);
        }
    }

    #[test]
    fn l2_norm_examples() {
        let th = theta37();
        let un = TorusElement::monomial(th.clone(), MultiIndex::new(vec![1, 4]), c(1.0, 0.0))
            .unwrap();
        assert_eq!(un.l2_norm(), 1.0);
        assert_eq!(TorusElement::zero(th.clone()).l2_norm(), 0.0);
        let mut rng = ChaCha12Rng::seed_from_u64(41);
        let x = random_element(&th, 2, 1.0, false, &mut rng);
        let via_trace = x.adjoint().multiply(&x).unwrap().trace().re.sqrt();
        assert!((via_trace - x.l2_norm()).abs() <= 1e-12);
    }

    #[test]
    fn random_element_contracts() {
        let th = ThetaMatrix::golden(2);
        let mut rng = ChaCha12Rng::seed_from_u64(42);
        let small = random_element(&th, 0, 2.0, false, &mut rng);
        assert!(small.support_radius() == 0 && small.support_len() <= 1);

        let mut rng = ChaCha12Rng::seed_from_u64(42);
        let h = random_element(&th, 2, 2.0, true, &mut rng);
        assert!(h.coeff_sup_distance(&h.adjoint()) <= 1e-15);

        let mut r1 = ChaCha12Rng::seed_from_u64(42);
        let mut r2 = ChaCha12Rng::seed_from_u64(42);
        let a = random_element(&th, 2, 2.0, false, &mut r1);
        let b = random_element(&th, 2, 2.0, false, &mut r2);
        assert_eq!(a, b);
    }

    #[test]
    fn theta_mismatch_is_rejected() {
        let a = TorusElement::identity(ThetaMatrix::zero(2));
        let b = TorusElement::identity(ThetaMatrix::golden(2));
        assert!(a.multiply(&b).is_err());
        assert!(a.add(&b).is_err());
    }

    #[test]
    fn lattice_box_shape() {
        let b = lattice_box(2, 1);
        assert_eq!(b.len(), 9);
        assert_eq!(b[0], MultiIndex::new(vec![-1, -1]));
        assert_eq!(b[8], MultiIndex::new(vec![1, 1]));
        assert_eq!(lattice_box(1, 0), vec![MultiIndex::zero(1)]);
    }
}
