//! Exact integer constants for the interpolation inequalities.
//!
//! The iteration bound is `c_k = 2^{3·2^{k−2}−2}` for k ≥ 2, satisfying
//! `c_2 = 2` and `c_{k+1} = 4·c_k²`; the full inequality constant carries
//! an additional multiplicity factor `(k+1)^d`. Both are built in integer
//! arithmetic so no floating-point drift enters the right-hand sides.

use num_bigint::BigUint;

/// Largest supported order; 2^{3·2^{k−2}−2} already exceeds u128 here.
pub const MAX_ORDER: u32 = 8;

/// The binary exponent 3·2^{k−2} − 2 (k ≥ 2).
pub fn exponent(k: u32) -> u64 {
    assert!((2..=MAX_ORDER).contains(&k), "order k must be in 2..=8, got {k}");
    3 * (1u64 << (k - 2)) - 2
}

/// c_k = 2^{3·2^{k−2}−2} as an exact integer.
pub fn c(k: u32) -> BigUint {
    BigUint::from(1u32) << exponent(k)
}

/// c_k as a double (exact: a power of two well inside the exponent range).
pub fn c_f64(k: u32) -> f64 {
    (exponent(k) as f64).exp2()
}

/// c_k·(k+1)^d as an exact integer.
pub fn theorem_constant(k: u32, d: u32) -> BigUint {
    c(k) * BigUint::from(k + 1).pow(d)
}

pub fn theorem_constant_f64(k: u32, d: u32) -> f64 {
    let exact = theorem_constant(k, d);
    let s = exact.to_string();
    s.parse::<f64>().expect("decimal constant parses")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_values() {
        assert_eq!(c(2), BigUint::from(2u32));
        assert_eq!(c(3), BigUint::from(16u32));
        assert_eq!(c(4), BigUint::from(1024u32));
        assert_eq!(c_f64(2), 2.0);
        assert_eq!(c_f64(3), 16.0);
    }

    #[test]
    fn recursion_is_exact_up_to_max_order() {
        for k in 2..MAX_ORDER {
            let lhs = c(k + 1);
            let rhs = BigUint::from(4u32) * c(k).pow(2);
            assert_eq!(lhs, rhs, "k = {k}");
        }
    }

    #[test]
    fn theorem_constants_assemble_exactly() {
        // 2·(2+1)² = 18 for k = 2, d = 2.
        assert_eq!(theorem_constant(2, 2), BigUint::from(18u32));
        assert_eq!(theorem_constant_f64(2, 2), 18.0);
        // Integer assembly for d ≤ 4, k ≤ 8 stays exact.
        for d in 0..=4 {
            for k in 2..=MAX_ORDER {
                let exact = theorem_constant(k, d);
                let via_f64 = c_f64(k) * ((k + 1) as f64).powi(d as i32);
                let back = format!("{exact}").parse::<f64>().unwrap();
                assert_eq!(via_f64, back, "k={k} d={d}");
            }
        }
    }

    #[test]
    #[should_panic]
    fn rejects_order_below_two() {
        let _ = c(1);
    }
}
