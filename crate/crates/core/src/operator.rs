//! Computable orthogonal operators on ℓ².
//!
//! Every operator here has the normal form `sign ∘ block`: a finite orthogonal
//! matrix acting on the span of a finite orthonormal family (identity on the
//! complement), followed by a diagonal ±1 pattern whose set of −1 entries is
//! finite or cofinite. The class contains `±I`, every reflection `2P − I`
//! whose projection has finite rank or finite corank, embedded `O(n)`
//! matrices, and is closed under composition and inversion.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::tol;
use crate::vector::{orthonormalize, OrthonormalFamily, SparseVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignMode {
    /// The listed indices carry −1.
    Finite,
    /// Every index except the listed ones carries −1.
    Cofinite,
}

/// A diagonal operator with entries ±1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignPattern {
    mode: SignMode,
    indices: BTreeSet<usize>,
}

impl SignPattern {
    pub fn new(mode: SignMode, indices: BTreeSet<usize>) -> Self {
        Self { mode, indices }
    }

    pub fn identity() -> Self {
        Self::new(SignMode::Finite, BTreeSet::new())
    }

    /// `−I`.
    pub fn negate_all() -> Self {
        Self::new(SignMode::Cofinite, BTreeSet::new())
    }

    pub fn flips<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        Self::new(SignMode::Finite, indices.into_iter().collect())
    }

    pub fn mode(&self) -> SignMode {
        self.mode
    }

    pub fn indices(&self) -> &BTreeSet<usize> {
        &self.indices
    }

    pub fn is_finite(&self) -> bool {
        self.mode == SignMode::Finite
    }

    pub fn is_negative(&self, index: usize) -> bool {
        match self.mode {
            SignMode::Finite => self.indices.contains(&index),
            SignMode::Cofinite => !self.indices.contains(&index),
        }
    }

    pub fn sign(&self, index: usize) -> f64 {
        if self.is_negative(index) {
            -1.0
        } else {
            1.0
        }
    }

    pub fn apply(&self, x: &SparseVector) -> SparseVector {
        x.map_values(|i, v| if self.is_negative(i) { -v } else { v })
    }

    /// Product of two sign patterns. The −1 set of the product is the
    /// symmetric difference of the two −1 sets.
    pub fn compose(&self, other: &Self) -> Self {
        let mode = if self.mode == other.mode {
            SignMode::Finite
        } else {
            SignMode::Cofinite
        };
        let indices = self.indices.symmetric_difference(&other.indices).copied().collect();
        Self { mode, indices }
    }
}

/// A finite orthogonal matrix acting on `span(basis)`, identity elsewhere.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockPart {
    basis: OrthonormalFamily,
    matrix: DenseMatrix,
}

impl BlockPart {
    pub fn identity() -> Self {
        Self {
            basis: OrthonormalFamily::empty(),
            matrix: DenseMatrix::identity(0),
        }
    }

    pub fn new(basis: OrthonormalFamily, matrix: DenseMatrix) -> Result<Self> {
        if !matrix.is_square() || matrix.rows() != basis.len() {
            return Err(Error::DimensionMismatch {
                expected: basis.len(),
                found: matrix.rows(),
            });
        }
        let residual = matrix.orthogonality_residual();
        if residual > tol::ORTHOGONAL {
            return Err(Error::NotOrthogonal { residual });
        }
        Ok(Self { basis, matrix })
    }

    pub(crate) fn from_trusted(basis: OrthonormalFamily, matrix: DenseMatrix) -> Self {
        debug_assert_eq!(basis.len(), matrix.rows());
        Self { basis, matrix }
    }

    /// `−I` on `span(family)`, identity on the complement.
    pub fn negation_on(family: &OrthonormalFamily) -> Self {
        let k = family.len();
        Self {
            basis: family.clone(),
            matrix: DenseMatrix::diagonal(&alloc::vec![-1.0; k]),
        }
    }

    pub fn basis(&self) -> &OrthonormalFamily {
        &self.basis
    }

    pub fn matrix(&self) -> &DenseMatrix {
        &self.matrix
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn support(&self) -> BTreeSet<usize> {
        self.basis.support()
    }

    pub fn apply(&self, x: &SparseVector) -> SparseVector {
        if self.basis.is_empty() {
            return x.clone();
        }
        let c = self.basis.coefficients(x);
        let k = c.len();
        let delta: Vec<f64> = (0..k)
            .map(|i| (0..k).map(|j| self.matrix[(i, j)] * c[j]).sum::<f64>() - c[i])
            .collect();
        x + &self.basis.combine(&delta)
    }

    /// `D · self · D` for a sign pattern `D`.
    fn conjugate_by_sign(&self, sign: &SignPattern) -> Self {
        Self {
            basis: self.basis.map_trusted(|v| sign.apply(v)),
            matrix: self.matrix.clone(),
        }
    }

    fn transpose(&self) -> Self {
        Self {
            basis: self.basis.clone(),
            matrix: self.matrix.transpose(),
        }
    }

    /// Matrix of this block in a frame whose span contains `span(basis)`.
    fn matrix_in(&self, frame: &OrthonormalFamily) -> DenseMatrix {
        let c = DenseMatrix::from_fn(frame.len(), self.basis.len(), |a, b| {
            frame.members()[a].inner(&self.basis.members()[b])
        });
        let ct = c.transpose();
        let transported = c.matmul(&self.matrix).matmul(&ct);
        let projector = c.matmul(&ct);
        DenseMatrix::from_fn(frame.len(), frame.len(), |i, j| {
            let id = if i == j { 1.0 } else { 0.0 };
            transported[(i, j)] + id - projector[(i, j)]
        })
    }

    /// `self ∘ other`, expressed on the re-orthonormalized union of both bases.
    fn compose(&self, other: &Self) -> Self {
        if other.basis.is_empty() {
            return self.clone();
        }
        if self.basis.is_empty() {
            return other.clone();
        }
        let frame = orthonormalize(self.basis.members().iter().chain(other.basis.members()));
        let matrix = self.matrix_in(&frame).matmul(&other.matrix_in(&frame));
        Self::from_trusted(frame, matrix)
    }

    /// Dense restriction to the coordinates `coords`, which must cover the support.
    fn dense_on(&self, coords: &[usize]) -> DenseMatrix {
        let k = self.basis.len();
        let q = DenseMatrix::from_fn(coords.len(), k, |r, a| self.basis.members()[a].get(coords[r]));
        let shifted = DenseMatrix::from_fn(k, k, |a, b| {
            self.matrix[(a, b)] - if a == b { 1.0 } else { 0.0 }
        });
        let correction = q.matmul(&shifted).matmul(&q.transpose());
        DenseMatrix::from_fn(coords.len(), coords.len(), |i, j| {
            correction[(i, j)] + if i == j { 1.0 } else { 0.0 }
        })
    }
}

/// An orthogonal operator in the normal form `sign ∘ block`.
#[derive(Debug, Clone, PartialEq)]
pub struct GOperator {
    sign: SignPattern,
    block: BlockPart,
}

impl Default for GOperator {
    fn default() -> Self {
        Self::identity()
    }
}

impl GOperator {
    pub fn new(sign: SignPattern, block: BlockPart) -> Self {
        Self { sign, block }
    }

    pub fn identity() -> Self {
        Self::new(SignPattern::identity(), BlockPart::identity())
    }

    pub fn negative_identity() -> Self {
        Self::new(SignPattern::negate_all(), BlockPart::identity())
    }

    pub fn from_sign(sign: SignPattern) -> Self {
        Self::new(sign, BlockPart::identity())
    }

    pub fn from_block(block: BlockPart) -> Self {
        Self::new(SignPattern::identity(), block)
    }

    pub fn sign(&self) -> &SignPattern {
        &self.sign
    }

    pub fn block(&self) -> &BlockPart {
        &self.block
    }

    pub fn apply(&self, x: &SparseVector) -> SparseVector {
        self.sign.apply(&self.block.apply(x))
    }

    /// `self ∘ other`.
    ///
    /// Uses `B·D = D·(D·B·D)` to move `self`'s block past `other`'s sign.
    pub fn compose(&self, other: &Self) -> Self {
        Self {
            sign: self.sign.compose(&other.sign),
            block: self.block.conjugate_by_sign(&other.sign).compose(&other.block),
        }
    }

    /// The adjoint, which for this class is also the inverse.
    pub fn adjoint_inverse(&self) -> Self {
        Self {
            sign: self.sign.clone(),
            block: self.block.transpose().conjugate_by_sign(&self.sign),
        }
    }

    /// Coordinates on which the block can act nontrivially.
    pub fn active_support(&self) -> BTreeSet<usize> {
        self.block.support()
    }

    /// Dense restriction to `coords`, which must cover the active support.
    pub fn dense_on(&self, coords: &[usize]) -> DenseMatrix {
        let mut m = self.block.dense_on(coords);
        for (r, &i) in coords.iter().enumerate() {
            if self.sign.is_negative(i) {
                for c in 0..coords.len() {
                    m[(r, c)] = -m[(r, c)];
                }
            }
        }
        m
    }

    /// Operator equality up to `tolerance` in operator norm.
    pub fn approx_eq(&self, other: &Self, tolerance: f64) -> bool {
        op_distance(self, other) <= tolerance
    }
}

/// The map `x ↦ Σ ⟨x, v⟩ v` over an orthonormal family.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ProjectionSpec {
    pub family: OrthonormalFamily,
}

impl ProjectionSpec {
    pub fn new(family: OrthonormalFamily) -> Self {
        Self { family }
    }

    pub fn apply(&self, x: &SparseVector) -> SparseVector {
        self.family.combine(&self.family.coefficients(x))
    }
}

pub fn project(spec: &ProjectionSpec, x: &SparseVector) -> SparseVector {
    spec.apply(x)
}

/// `2P_F − I`: fixes `span(F)` and negates its complement.
pub fn reflection_spanning(family: &OrthonormalFamily) -> GOperator {
    GOperator::new(SignPattern::negate_all(), BlockPart::negation_on(family))
}

/// `I − 2P_G`: negates `span(G)` and fixes its complement.
pub fn reflection_flipping(family: &OrthonormalFamily) -> GOperator {
    GOperator::from_block(BlockPart::negation_on(family))
}

pub fn compose(a: &GOperator, b: &GOperator) -> GOperator {
    a.compose(b)
}

pub fn adjoint_inverse(a: &GOperator) -> GOperator {
    a.adjoint_inverse()
}

/// Transports a reflection's family through `X`: `Xᵀ (2P_F − I) X = 2P_{XᵀF} − I`.
pub fn conjugate_reflection(x: &GOperator, family: &OrthonormalFamily) -> OrthonormalFamily {
    let xt = x.adjoint_inverse();
    family.map_trusted(|e| xt.apply(e))
}

/// `‖A − B‖_op`, computed exactly for the class.
///
/// Both blocks leave `ℓ²(C)` and its coordinate complement invariant, where
/// `C` is the union of their supports, so the difference splits into a dense
/// part on `C` and a diagonal part with entries in `{0, ±2}` outside it.
pub fn op_distance(a: &GOperator, b: &GOperator) -> f64 {
    let mut coords = a.active_support();
    coords.extend(b.active_support());
    let differing = a.sign.compose(&b.sign);
    let outside = match differing.mode {
        SignMode::Cofinite => 2.0,
        SignMode::Finite => {
            coords.extend(differing.indices.iter().copied());
            0.0
        }
    };
    let coords: Vec<usize> = coords.into_iter().collect();
    let diff = a.dense_on(&coords).sub(&b.dense_on(&coords));
    diff.spectral_norm().max(outside)
}

/// Membership in the stable group `⋃ O(n)`: the operator differs from the
/// identity on finitely many coordinates. Blocks always have finite support,
/// so only the sign pattern can deviate infinitely.
pub fn is_stable_o_member(a: &GOperator) -> bool {
    a.sign.is_finite()
}
