//! Seeded random inputs for property checks.
//!
//! Every sampler takes an explicit RNG; [`rng`] derives an independent
//! ChaCha stream per `(seed, stream)` pair so that sample `i` of a sweep is
//! the same no matter how the sweep is scheduled.

use alloc::vec::Vec;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::decomp::{DenseOrthoMatrix, Reflection, ReflectionWord};
use crate::dense::DenseMatrix;
use crate::operator::{reflection_flipping, reflection_spanning, BlockPart, GOperator, SignMode, SignPattern};
use crate::sphere::SpherePoint;
use crate::vector::{orthonormalize, OrthonormalFamily, SparseVector};

pub fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

pub fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

/// Gaussian coefficients on `nnz` distinct indices below `dim`.
pub fn random_vector<R: Rng + ?Sized>(rng: &mut R, dim: usize, nnz: usize) -> SparseVector {
    let nnz = nnz.min(dim);
    index::sample(rng, dim, nnz)
        .into_iter()
        .map(|i| (i, gaussian(rng)))
        .collect::<Vec<_>>()
        .into_iter()
        .collect()
}

/// Gaussian direction in `span{e₀, …, e_{dim−1}}`, normalized.
pub fn random_unit_vector<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> SpherePoint {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| gaussian(rng)).collect();
        let x = SparseVector::from_dense(&v);
        if let Some(p) = SpherePoint::normalize(&x) {
            return p;
        }
    }
}

/// Orthonormalization of `size` random vectors supported below `dim`.
pub fn random_family<R: Rng + ?Sized>(rng: &mut R, dim: usize, size: usize) -> OrthonormalFamily {
    let raw: Vec<SparseVector> = (0..size)
        .map(|_| {
            let nnz = rng.random_range(1..=dim.clamp(1, 6));
            random_vector(rng, dim, nnz)
        })
        .collect();
    orthonormalize(&raw)
}

/// Product of `n` Householder reflections with Gaussian directions, then a
/// random diagonal sign.
pub fn orthogonal_matrix<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DenseMatrix {
    let mut m = DenseMatrix::identity(n);
    for _ in 0..n {
        let u = loop {
            let v: Vec<f64> = (0..n).map(|_| gaussian(rng)).collect();
            let len = libm::sqrt(v.iter().map(|x| x * x).sum());
            if len > 1e-8 {
                break v.into_iter().map(|x| x / len).collect::<Vec<_>>();
            }
        };
        // m ← m (I − 2uuᵀ)
        let mu = m.mul_vec(&u);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] -= 2.0 * mu[i] * u[j];
            }
        }
    }
    for i in 0..n {
        if rng.random_bool(0.5) {
            for j in 0..n {
                m[(i, j)] = -m[(i, j)];
            }
        }
    }
    m
}

/// A random reflection over coordinates below `dim`, in either the
/// spanning (`2P − I`) or flipping (`I − 2P`) form.
pub fn random_reflection_spec<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Reflection {
    let size = rng.random_range(0..=dim.min(4));
    let family = random_family(rng, dim, size);
    if rng.random_bool(0.5) {
        Reflection::Span(family)
    } else {
        Reflection::Flip(family)
    }
}

pub fn random_reflection<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> GOperator {
    match random_reflection_spec(rng, dim) {
        Reflection::Span(f) => reflection_spanning(&f),
        Reflection::Flip(f) => reflection_flipping(&f),
    }
}

/// A product of one to three random factors: reflections, dense orthogonal
/// blocks on random coordinates, and sign patterns.
pub fn random_operator<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> GOperator {
    let factors = rng.random_range(1..=3);
    let mut out = GOperator::identity();
    for _ in 0..factors {
        let factor = match rng.random_range(0..3) {
            0 => random_reflection(rng, dim),
            1 => {
                let k = rng.random_range(1..=dim.min(4));
                let coords = index::sample(rng, dim, k);
                let m = orthogonal_matrix(rng, k);
                GOperator::from_block(BlockPart::from_trusted(OrthonormalFamily::coordinates(coords), m))
            }
            _ => {
                let k = rng.random_range(0..=3);
                let idx = index::sample(rng, dim, k.min(dim)).into_iter();
                let mode = if rng.random_bool(0.3) { SignMode::Cofinite } else { SignMode::Finite };
                GOperator::from_sign(SignPattern::new(mode, idx.collect()))
            }
        };
        out = out.compose(&factor);
    }
    out
}

pub fn random_dense_orthogonal<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DenseOrthoMatrix {
    DenseOrthoMatrix::from_trusted(orthogonal_matrix(rng, n))
}

/// A word of `len` random reflections over coordinates below `dim`.
pub fn random_word<R: Rng + ?Sized>(rng: &mut R, dim: usize, len: usize) -> ReflectionWord {
    let factors = (0..len).map(|_| random_reflection_spec(rng, dim)).collect();
    ReflectionWord::new(dim, factors).expect("factors are supported below dim")
}
