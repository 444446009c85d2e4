//! Dense complex linear algebra for small multipartite systems.
//!
//! Basis states are ordered lexicographically with the leftmost subsystem
//! most significant, so `|ψ⟩₁|Ξ⟩₂₃` is `psi.tensor(&xi)`.

pub mod density;
pub mod gates;
pub mod isometry;
pub mod operator;
pub mod ops;
pub mod povm;
pub mod rng;
pub mod shape;
pub mod spectral;
pub mod state;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub use density::DensityOperator;
pub use operator::Operator;
pub use ops::{
    apply, apply_raw, condition_on, embed, haar_random_qubit, haar_random_state,
    measure_projective, outcome_distribution, partial_trace, povm_probabilities, reduced_state,
    sample_outcome, tensor, tensor_all, Evolve, Tensor,
};
pub use povm::Povm;
pub use rng::{run_batched, RngStream};
pub use shape::SubsystemShape;
pub use spectral::herm_exp;
pub use state::StateVector;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Tolerance for structural checks (hermiticity, unitarity, traces).
pub const STRUCT_TOL: f64 = 1e-10;
/// Tolerance on state normalization.
pub const NORM_TOL: f64 = 1e-10;
/// Tolerance for composed numerical results.
pub const COMPOSED_TOL: f64 = 1e-9;

#[inline]
pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}
