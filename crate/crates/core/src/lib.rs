//! Orthogonal groups on the sequence space ℓ².
//!
//! Vectors are finitely supported real sequences indexed by ℕ. On top of
//! them the crate builds:
//!
//! * orthogonal projections and reflection operators `2P − I`,
//! * a closed class of computable orthogonal operators ([`GOperator`]: a
//!   finite or cofinite sign flip composed with a finite orthogonal block),
//! * the decomposition of an orthogonal matrix into a product of reflections,
//! * Euclidean semidirect products `T ⋊ O` and their action,
//! * hemisphere charts of the unit sphere, their transition derivatives,
//!   and the shift homotopies contracting the sphere to a point,
//! * the evaluation action `A ↦ A e₀`, stabilizers, a section of the
//!   quotient map, and local trivializations of `O(j+1) → Sʲ`.
//!
//! The crate is `no_std` and only needs an allocator.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod decomp;
pub mod dense;
pub mod error;
pub mod euclid;
pub mod operator;
pub mod quotient;
pub mod sample;
pub mod sphere;
pub mod vector;

pub use decomp::{
    embed, householder_decompose, random_orthogonal, reconstruct, DenseOrthoMatrix, Reflection,
    ReflectionWord,
};
pub use dense::DenseMatrix;
pub use error::{Error, Result};
pub use euclid::{e_act, e_compose, e_inverse, xi_conjugation_witness, EuclidElement};
pub use operator::{
    adjoint_inverse, compose, conjugate_reflection, is_stable_o_member, op_distance, project,
    reflection_flipping, reflection_spanning, BlockPart, GOperator, ProjectionSpec, SignMode,
    SignPattern,
};
pub use quotient::{
    project_lambda, reflection_r, same_coset, section_h0, stabilizer_membership, trivialize,
    untrivialize, TrivializationResult,
};
pub use sphere::{
    chart_forward, chart_inverse, contract_path, frechet_transition, homotopy_f1, homotopy_f2,
    shift_apply, transition, ChartPole, HomotopyPath, PathSample, SpherePoint,
};
pub use vector::{inner, norm, orthonormalize, OrthonormalFamily, SparseVector};

/// Numeric tolerances shared across modules.
pub mod tol {
    /// Coefficients below this magnitude are not stored.
    pub const STORAGE_EPS: f64 = 1e-14;
    /// Gram–Schmidt residual below which a vector counts as dependent.
    pub const DEPENDENCE: f64 = 1e-12;
    /// Pairwise Gram deviation allowed in an orthonormal family.
    pub const ORTHONORMAL: f64 = 1e-10;
    /// `‖MᵀM − I‖_max` allowed for an orthogonal matrix.
    pub const ORTHOGONAL: f64 = 1e-9;
    /// Pointwise operator equality.
    pub const OPERATOR_EQ: f64 = 1e-9;
    /// Unit-norm tolerance for sphere points.
    pub const UNIT: f64 = 1e-10;
}
