//! Orthogonal matrices as finite products of reflections.
//!
//! [`householder_decompose`] reduces an orthogonal matrix column by column:
//! at step `j` a reflection sends the current column `j` to `e_j`, after
//! which orthogonality forces row `j` to be `e_jᵀ` as well and the reduction
//! continues on the trailing block. With `L_k ⋯ L_1 M = I` and every `L_i`
//! involutory, `M = L_1 L_2 ⋯ L_k`.

use alloc::vec::Vec;

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::operator::{conjugate_reflection, reflection_flipping, reflection_spanning, BlockPart, GOperator};
use crate::sample;
use crate::tol;
use crate::vector::{OrthonormalFamily, SparseVector};

/// A square matrix with `‖MᵀM − I‖_max ≤ 1e-9`.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseOrthoMatrix(DenseMatrix);

impl DenseOrthoMatrix {
    pub fn new(matrix: DenseMatrix) -> Result<Self> {
        let residual = matrix.orthogonality_residual();
        if residual > tol::ORTHOGONAL {
            return Err(Error::NotOrthogonal { residual });
        }
        Ok(Self(matrix))
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        Self::new(DenseMatrix::from_rows(rows)?)
    }

    pub fn identity(n: usize) -> Self {
        Self(DenseMatrix::identity(n))
    }

    pub(crate) fn from_trusted(matrix: DenseMatrix) -> Self {
        Self(matrix)
    }

    pub fn n(&self) -> usize {
        self.0.rows()
    }

    pub fn matrix(&self) -> &DenseMatrix {
        &self.0
    }

    pub fn into_inner(self) -> DenseMatrix {
        self.0
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self(self.0.matmul(&other.0))
    }

    pub fn transpose(&self) -> Self {
        Self(self.0.transpose())
    }
}

/// One reflection factor, stored by the orthonormal family that induces it.
#[derive(Debug, Clone, PartialEq)]
pub enum Reflection {
    /// `I − 2P_G`: negates `span(G)`.
    Flip(OrthonormalFamily),
    /// `2P_F − I`: fixes `span(F)`, negates the complement.
    Span(OrthonormalFamily),
}

impl Reflection {
    pub fn family(&self) -> &OrthonormalFamily {
        match self {
            Self::Flip(f) | Self::Span(f) => f,
        }
    }

    pub fn to_operator(&self) -> GOperator {
        match self {
            Self::Flip(f) => reflection_flipping(f),
            Self::Span(f) => reflection_spanning(f),
        }
    }

    /// `Xᵀ L X`, which is again a reflection of the same kind.
    pub fn conjugate_by(&self, x: &GOperator) -> Self {
        match self {
            Self::Flip(f) => Self::Flip(conjugate_reflection(x, f)),
            Self::Span(f) => Self::Span(conjugate_reflection(x, f)),
        }
    }

    fn max_index(&self) -> Option<usize> {
        self.family().members().iter().filter_map(SparseVector::max_index).max()
    }

    /// The factor restricted to `ℝⁿ = span{e₀, …, e_{n−1}}`.
    pub fn dense(&self, n: usize) -> DenseMatrix {
        let members: Vec<Vec<f64>> = self.family().members().iter().map(|v| v.to_dense(n)).collect();
        let outer = |i: usize, j: usize| members.iter().map(|v| v[i] * v[j]).sum::<f64>();
        match self {
            Self::Flip(_) => DenseMatrix::from_fn(n, n, |i, j| if i == j { 1.0 } else { 0.0 } - 2.0 * outer(i, j)),
            Self::Span(_) => DenseMatrix::from_fn(n, n, |i, j| 2.0 * outer(i, j) - if i == j { 1.0 } else { 0.0 }),
        }
    }
}

/// An ordered product `L_1 L_2 ⋯ L_k` of reflections whose families are
/// supported below `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReflectionWord {
    n: usize,
    factors: Vec<Reflection>,
}

impl ReflectionWord {
    pub fn new(n: usize, factors: Vec<Reflection>) -> Result<Self> {
        for f in &factors {
            if let Some(max) = f.max_index() {
                if max >= n {
                    return Err(Error::DimensionMismatch { expected: n, found: max + 1 });
                }
            }
        }
        Ok(Self { n, factors })
    }

    pub fn identity(n: usize) -> Self {
        Self { n, factors: Vec::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn factors(&self) -> &[Reflection] {
        &self.factors
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn to_operator(&self) -> GOperator {
        self.factors
            .iter()
            .fold(GOperator::identity(), |acc, f| acc.compose(&f.to_operator()))
    }

    /// The inverse word: reflections are involutions, so reverse the order.
    pub fn inverse(&self) -> Self {
        Self {
            n: self.n,
            factors: self.factors.iter().rev().cloned().collect(),
        }
    }

    /// `self · other`.
    pub fn concat(&self, other: &Self) -> Self {
        Self {
            n: self.n.max(other.n),
            factors: self.factors.iter().chain(&other.factors).cloned().collect(),
        }
    }

    /// `Xᵀ W X`, conjugating factor by factor.
    pub fn conjugate_by(&self, x: &GOperator) -> Self {
        let factors: Vec<Reflection> = self.factors.iter().map(|f| f.conjugate_by(x)).collect();
        let n = factors
            .iter()
            .filter_map(Reflection::max_index)
            .map(|m| m + 1)
            .fold(self.n, usize::max);
        Self { n, factors }
    }

    pub fn reconstruct(&self) -> DenseOrthoMatrix {
        let m = self
            .factors
            .iter()
            .fold(DenseMatrix::identity(self.n), |acc, f| acc.matmul(&f.dense(self.n)));
        DenseOrthoMatrix::from_trusted(m)
    }
}

/// Factors `m` as a product of at most `n` flip reflections.
pub fn householder_decompose(m: &DenseOrthoMatrix) -> ReflectionWord {
    let n = m.n();
    let mut work = m.matrix().clone();
    let mut factors = Vec::new();
    for j in 0..n {
        let c: Vec<f64> = (j..n).map(|i| work[(i, j)]).collect();
        let tail_sq: f64 = c[1..].iter().map(|x| x * x).sum();
        let len = libm::sqrt(c[0] * c[0] + tail_sq);
        // u = c − ‖c‖ e_j, with the leading entry rewritten to avoid
        // cancellation when c is close to +e_j.
        let lead = if c[0] > 0.0 { -tail_sq / (c[0] + len) } else { c[0] - len };
        let mut u = c;
        u[0] = lead;
        let u_len = libm::sqrt(u.iter().map(|x| x * x).sum());
        if u_len <= tol::DEPENDENCE {
            continue;
        }
        u.iter_mut().for_each(|x| *x /= u_len);
        for col in 0..n {
            let s: f64 = (j..n).map(|i| u[i - j] * work[(i, col)]).sum();
            for i in j..n {
                work[(i, col)] -= 2.0 * u[i - j] * s;
            }
        }
        let v = SparseVector::from_pairs(u.iter().enumerate().map(|(i, &x)| (i + j, x)));
        factors.push(Reflection::Flip(OrthonormalFamily::from_trusted(alloc::vec![v])));
    }
    ReflectionWord { n, factors }
}

/// Validating front end for [`householder_decompose`].
pub fn decompose_dense(m: &DenseMatrix) -> Result<ReflectionWord> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch { expected: m.rows(), found: m.cols() });
    }
    Ok(householder_decompose(&DenseOrthoMatrix::new(m.clone())?))
}

pub fn reconstruct(word: &ReflectionWord) -> DenseOrthoMatrix {
    word.reconstruct()
}

/// Deterministic pseudo-random element of `O(n)`.
pub fn random_orthogonal(n: usize, seed: u64) -> DenseOrthoMatrix {
    sample::random_dense_orthogonal(&mut sample::rng(seed, 0), n)
}

/// `M` on coordinates `0..n`, identity above.
pub fn embed(m: &DenseOrthoMatrix) -> GOperator {
    GOperator::from_block(BlockPart::from_trusted(
        OrthonormalFamily::coordinates(0..m.n()),
        m.matrix().clone(),
    ))
}
