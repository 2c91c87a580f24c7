//! Desk-scale operator calculus on the noncommutative d-torus.
//!
//! The crate is organized around four layers:
//!
//! - [`algebra`] — exact twisted Fourier arithmetic: products, adjoints,
//!   trace, derivations, multipliers, and seeded test-element generation.
//! - [`spectral`] — singular value functions μ(x) computed from finite
//!   sections of the left-multiplication representation, backed by an
//!   in-house dense/banded Hermitian eigensolver with convergence control.
//! - [`symspace`] — exact calculus of step functions on (0,1]: decreasing
//!   rearrangement, cumulative integrals, the averaging (Hardy/Cesàro)
//!   operator, submajorization tests, and L_p / interpolation-space norms.
//! - [`verify`] — inequality checkers that combine the layers into
//!   structured pass/fail records with margins and convergence diagnostics.
//!
//! [`stream`] pins the seed-derivation scheme used to make every random
//! suite reproducible record-by-record.

pub mod algebra;
pub mod stream;
pub mod symspace;

pub mod spectral;
pub mod verify;
