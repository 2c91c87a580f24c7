//! Clock-and-shift matrix oracle for the rational twist θ_{1,2} = p/q.
//!
//! The q×q clock Ω^p = diag(e^{2πip·j/q}) and cyclic shift S satisfy
//! Ω^p S = e^{2πip/q} S Ω^p, so U_1 ↦ Ω^p, U_2 ↦ S extends to a
//! representation of the twisted algebra. Everything here is built from
//! those two matrices directly — independent of the twisted-convolution
//! code it cross-checks. Trace comparisons are valid for frequencies with
//! |n|_∞ < q, where (1/q)·tr distinguishes the zero mode.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use nctorus::algebra::{phase, random_element, MultiIndex, ThetaMatrix, TorusElement};

const Q: i64 = 7;
const P: i64 = 3;
const TAU: f64 = std::f64::consts::TAU;

type Mat = Vec<Vec<Complex64>>;

fn zeros() -> Mat {
    vec![vec![Complex64::new(0.0, 0.0); Q as usize]; Q as usize]
}

/// Image of U^n = U_1^{n_1} U_2^{n_2}: the (i, j) entry is
/// e^{2πi p n_1 i / q} when i ≡ j + n_2 (mod q).
fn monomial_image(n1: i64, n2: i64) -> Mat {
    let mut m = zeros();
    for j in 0..Q {
        let i = (j + n2).rem_euclid(Q);
        let arg = (P * n1 * i) as f64 / Q as f64;
        m[i as usize][j as usize] = Complex64::from_polar(1.0, TAU * arg.rem_euclid(1.0));
    }
    m
}

fn image(x: &TorusElement) -> Mat {
    let mut out = zeros();
    for (n, &c) in x.support() {
        let m = monomial_image(n.get(0), n.get(1));
        for i in 0..Q as usize {
            for j in 0..Q as usize {
                out[i][j] += c * m[i][j];
            }
        }
    }
    out
}

fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let mut out = zeros();
    for i in 0..Q as usize {
        for k in 0..Q as usize {
            let aik = a[i][k];
            if aik == Complex64::new(0.0, 0.0) {
                continue;
            }
            for j in 0..Q as usize {
                out[i][j] += aik * b[k][j];
            }
        }
    }
    out
}

fn mat_adjoint(a: &Mat) -> Mat {
    let mut out = zeros();
    for i in 0..Q as usize {
        for j in 0..Q as usize {
            out[i][j] = a[j][i].conj();
        }
    }
    out
}

fn mat_distance(a: &Mat, b: &Mat) -> f64 {
    let mut worst = 0.0_f64;
    for i in 0..Q as usize {
        for j in 0..Q as usize {
            worst = worst.max((a[i][j] - b[i][j]).norm());
        }
    }
    worst
}

fn normalized_trace(a: &Mat) -> Complex64 {
    (0..Q as usize).map(|i| a[i][i]).sum::<Complex64>() / Q as f64
}

fn theta() -> ThetaMatrix {
    ThetaMatrix::rational(P, Q).unwrap()
}

#[test]
fn defining_relation_holds_in_the_representation() {
    // U_1 U_2 = e^{2πiθ_{12}} U_2 U_1 must map to A B = e^{2πip/q} B A.
    let a = monomial_image(1, 0);
    let b = monomial_image(0, 1);
    let ab = mat_mul(&a, &b);
    let ba = mat_mul(&b, &a);
    let factor = Complex64::from_polar(1.0, TAU * (P as f64 / Q as f64));
    let mut scaled = zeros();
    for i in 0..Q as usize {
        for j in 0..Q as usize {
            scaled[i][j] = factor * ba[i][j];
        }
    }
    assert!(mat_distance(&ab, &scaled) <= 1e-14);
}

#[test]
fn normal_ordering_phase_matches_the_representation() {
    // U^m U^n = e^{2πiλ(m,n)} U^{m+n} on the matrix side.
    let th = theta();
    let mut rng = ChaCha12Rng::seed_from_u64(12);
    for _ in 0..50 {
        let m = MultiIndex::new(vec![rng.gen_range(-3..=3), rng.gen_range(-3..=3)]);
        let n = MultiIndex::new(vec![rng.gen_range(-3..=3), rng.gen_range(-3..=3)]);
        let lambda = phase(&m, &n, &th).unwrap();
        let left = mat_mul(
            &monomial_image(m.get(0), m.get(1)),
            &monomial_image(n.get(0), n.get(1)),
        );
        let sum = m.add(&n);
        let mut right = monomial_image(sum.get(0), sum.get(1));
        let factor = Complex64::from_polar(1.0, TAU * lambda);
        for row in right.iter_mut() {
            for v in row.iter_mut() {
                *v *= factor;
            }
        }
        assert!(
            mat_distance(&left, &right) <= 1e-12,
            "phase mismatch at m={m} n={n}"
        );
    }
}

#[test]
fn representation_is_multiplicative_star_and_tracial() {
    let th = theta();
    let mut rng = ChaCha12Rng::seed_from_u64(34);
    for _ in 0..40 {
        let x = random_element(&th, 3, 1.0, false, &mut rng);
        let y = random_element(&th, 3, 1.0, false, &mut rng);

        let prod = mat_distance(&image(&x.multiply(&y).unwrap()), &mat_mul(&image(&x), &image(&y)));
        assert!(prod <= 1e-10, "multiplicativity defect {prod}");

        let star = mat_distance(&image(&x.adjoint()), &mat_adjoint(&image(&x)));
        assert!(star <= 1e-10, "adjoint defect {star}");

        let tr = (normalized_trace(&image(&x)) - x.trace()).norm();
        assert!(tr <= 1e-12, "trace defect {tr}");

        // Products keep |n|_∞ ≤ 6 < q, so the product trace also agrees.
        let tr2 = (normalized_trace(&image(&x.multiply(&y).unwrap()))
            - x.multiply(&y).unwrap().trace())
        .norm();
        assert!(tr2 <= 1e-10, "product trace defect {tr2}");
    }
}
