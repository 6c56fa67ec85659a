//! Finitely supported vectors of ℓ² and orthonormal families.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::tol;

/// A real sequence with finitely many nonzero terms.
///
/// Coefficients with magnitude below [`tol::STORAGE_EPS`] are pruned on
/// construction, so the support stays finite under repeated arithmetic.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SparseVector {
    entries: BTreeMap<usize, f64>,
}

impl SparseVector {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The standard basis vector `eᵢ`.
    pub fn basis(index: usize) -> Self {
        let mut entries = BTreeMap::new();
        entries.insert(index, 1.0);
        Self { entries }
    }

    /// Builds a vector from `(index, value)` pairs. Repeated indices are summed.
    pub fn from_pairs<I: IntoIterator<Item = (usize, f64)>>(pairs: I) -> Self {
        let mut entries = BTreeMap::new();
        for (i, v) in pairs {
            *entries.entry(i).or_insert(0.0) += v;
        }
        let mut out = Self { entries };
        out.prune();
        out
    }

    /// Builds a vector whose `i`-th coefficient is `values[i]`.
    pub fn from_dense(values: &[f64]) -> Self {
        Self::from_pairs(values.iter().copied().enumerate())
    }

    fn prune(&mut self) {
        self.entries.retain(|_, v| v.abs() >= tol::STORAGE_EPS);
    }

    pub fn get(&self, index: usize) -> f64 {
        self.entries.get(&index).copied().unwrap_or(0.0)
    }

    /// Nonzero coefficients in increasing index order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.entries.iter().map(|(&i, &v)| (i, v))
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries.keys().copied()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Largest index in the support.
    pub fn max_index(&self) -> Option<usize> {
        self.entries.keys().next_back().copied()
    }

    /// Dense coefficients `0..len`. Entries at or beyond `len` are ignored.
    pub fn to_dense(&self, len: usize) -> Vec<f64> {
        let mut out = alloc::vec![0.0; len];
        for (i, v) in self.entries.range(..len) {
            out[*i] = *v;
        }
        out
    }

    pub fn inner(&self, other: &Self) -> f64 {
        let (small, large) = if self.nnz() <= other.nnz() {
            (self, other)
        } else {
            (other, self)
        };
        small
            .entries
            .iter()
            .filter_map(|(i, a)| large.entries.get(i).map(|b| a * b))
            .sum()
    }

    pub fn norm(&self) -> f64 {
        libm::sqrt(self.entries.values().map(|v| v * v).sum())
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self::from_pairs(self.iter().map(|(i, v)| (i, v * factor)))
    }

    /// `self + factor · other`.
    pub fn axpy(&self, factor: f64, other: &Self) -> Self {
        let mut entries = self.entries.clone();
        for (i, v) in other.iter() {
            *entries.entry(i).or_insert(0.0) += factor * v;
        }
        let mut out = Self { entries };
        out.prune();
        out
    }

    pub fn distance(&self, other: &Self) -> f64 {
        (self - other).norm()
    }

    /// Relabels every support index through `f`, which must be injective.
    pub fn map_indices(&self, f: impl Fn(usize) -> usize) -> Self {
        Self {
            entries: self.iter().map(|(i, v)| (f(i), v)).collect(),
        }
    }

    /// Applies `f(index, value)` to every stored coefficient.
    pub fn map_values(&self, f: impl Fn(usize, f64) -> f64) -> Self {
        Self::from_pairs(self.iter().map(|(i, v)| (i, f(i, v))))
    }
}

impl Add for &SparseVector {
    type Output = SparseVector;
    fn add(self, rhs: Self) -> SparseVector {
        self.axpy(1.0, rhs)
    }
}

impl Sub for &SparseVector {
    type Output = SparseVector;
    fn sub(self, rhs: Self) -> SparseVector {
        self.axpy(-1.0, rhs)
    }
}

impl Neg for &SparseVector {
    type Output = SparseVector;
    fn neg(self) -> SparseVector {
        self.scale(-1.0)
    }
}

impl Mul<&SparseVector> for f64 {
    type Output = SparseVector;
    fn mul(self, rhs: &SparseVector) -> SparseVector {
        rhs.scale(self)
    }
}

impl FromIterator<(usize, f64)> for SparseVector {
    fn from_iter<I: IntoIterator<Item = (usize, f64)>>(iter: I) -> Self {
        Self::from_pairs(iter)
    }
}

pub fn inner(x: &SparseVector, y: &SparseVector) -> f64 {
    x.inner(y)
}

pub fn norm(x: &SparseVector) -> f64 {
    x.norm()
}

/// An ordered list of pairwise orthonormal vectors.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct OrthonormalFamily {
    members: Vec<SparseVector>,
}

impl OrthonormalFamily {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Validates `members` against [`tol::ORTHONORMAL`].
    pub fn new(members: Vec<SparseVector>) -> Result<Self> {
        let residual = gram_residual(&members);
        if residual > tol::ORTHONORMAL {
            return Err(Error::NotOrthonormal { residual });
        }
        Ok(Self { members })
    }

    /// The coordinate family `{eᵢ : i ∈ indices}`.
    pub fn coordinates<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        let set: BTreeSet<usize> = indices.into_iter().collect();
        Self {
            members: set.into_iter().map(SparseVector::basis).collect(),
        }
    }

    /// Caller guarantees orthonormality (images under an orthogonal map).
    pub(crate) fn from_trusted(members: Vec<SparseVector>) -> Self {
        debug_assert!(gram_residual(&members) <= 1e-8);
        Self { members }
    }

    pub fn members(&self) -> &[SparseVector] {
        &self.members
    }

    pub fn into_members(self) -> Vec<SparseVector> {
        self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// `⟨x, vᵢ⟩` for every member.
    pub fn coefficients(&self, x: &SparseVector) -> Vec<f64> {
        self.members.iter().map(|v| x.inner(v)).collect()
    }

    /// `Σ cᵢ vᵢ`.
    pub fn combine(&self, coeffs: &[f64]) -> SparseVector {
        debug_assert_eq!(coeffs.len(), self.members.len());
        self.members
            .iter()
            .zip(coeffs)
            .fold(SparseVector::zero(), |acc, (v, &c)| acc.axpy(c, v))
    }

    /// Union of the members' supports.
    pub fn support(&self) -> BTreeSet<usize> {
        self.members.iter().flat_map(|v| v.support()).collect()
    }

    pub fn gram_residual(&self) -> f64 {
        gram_residual(&self.members)
    }

    /// Maps each member through `f`; `f` must be orthogonal.
    pub(crate) fn map_trusted(&self, f: impl Fn(&SparseVector) -> SparseVector) -> Self {
        Self::from_trusted(self.members.iter().map(f).collect())
    }
}

fn gram_residual(members: &[SparseVector]) -> f64 {
    let mut worst: f64 = 0.0;
    for (i, a) in members.iter().enumerate() {
        for (j, b) in members.iter().enumerate().skip(i) {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((a.inner(b) - target).abs());
        }
    }
    worst
}

/// Modified Gram–Schmidt with one re-orthogonalization pass.
///
/// Vectors whose residual falls below [`tol::DEPENDENCE`] (relative to
/// `max(1, ‖v‖)`) are dropped, so the output spans the same subspace as the
/// input and is never longer.
pub fn orthonormalize<'a, I>(vectors: I) -> OrthonormalFamily
where
    I: IntoIterator<Item = &'a SparseVector>,
{
    let mut out: Vec<SparseVector> = Vec::new();
    for v in vectors {
        let scale = v.norm().max(1.0);
        let mut w = v.clone();
        for _ in 0..2 {
            for q in &out {
                let c = w.inner(q);
                w = w.axpy(-c, q);
            }
        }
        let r = w.norm();
        if r < tol::DEPENDENCE * scale {
            continue;
        }
        out.push(w.scale(1.0 / r));
    }
    OrthonormalFamily { members: out }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    fn sv(pairs: &[(usize, f64)]) -> SparseVector {
        SparseVector::from_pairs(pairs.iter().copied())
    }

    #[test]
    fn inner_examples() {
        let e0 = SparseVector::basis(0);
        let e1 = SparseVector::basis(1);
        assert_eq!(inner(&e0, &e0), 1.0);
        assert_eq!(inner(&e0, &e1), 0.0);
        // 1·3 + 2·4
        assert_eq!(inner(&sv(&[(0, 1.0), (1, 2.0)]), &sv(&[(0, 3.0), (1, 4.0)])), 11.0);
        assert_eq!(inner(&SparseVector::zero(), &e0), 0.0);
    }

    #[test]
    fn norm_examples() {
        assert_eq!(norm(&SparseVector::basis(7)), 1.0);
        assert_eq!(norm(&sv(&[(0, 3.0), (1, 4.0)])), 5.0);
        assert_eq!(norm(&SparseVector::zero()), 0.0);
    }

    #[test]
    fn tiny_entries_are_pruned() {
        let v = sv(&[(0, 1e-15), (3, 2.0)]);
        assert_eq!(v.nnz(), 1);
        let w = &v - &sv(&[(3, 2.0)]);
        assert!(w.is_zero());
    }

    #[test]
    fn orthonormalize_examples() {
        let f = orthonormalize(&[sv(&[(0, 1.0)]), sv(&[(0, 1.0), (1, 1.0)])]);
        assert_eq!(f.len(), 2);
        assert!(f.members()[0].distance(&SparseVector::basis(0)) < 1e-15);
        assert!(f.members()[1].distance(&SparseVector::basis(1)) < 1e-15);

        let input = [SparseVector::basis(3), SparseVector::basis(5)];
        let f = orthonormalize(&input);
        assert_eq!(f.members(), &input[..]);

        let f = orthonormalize(&[sv(&[(0, 1.0)]), sv(&[(0, 2.0)])]);
        assert_eq!(f.len(), 1);
        assert_eq!(f.members()[0], SparseVector::basis(0));
    }

    #[test]
    fn orthonormalize_drops_zero_vector() {
        let f = orthonormalize(&[SparseVector::zero(), SparseVector::basis(2)]);
        assert_eq!(f.members(), &[SparseVector::basis(2)][..]);
    }

    #[test]
    fn family_validation() {
        assert!(OrthonormalFamily::new(vec![SparseVector::basis(0), SparseVector::basis(1)]).is_ok());
        let err = OrthonormalFamily::new(vec![sv(&[(0, 1.0)]), sv(&[(0, 1.0), (1, 1.0)])]);
        assert!(matches!(err, Err(Error::NotOrthonormal { .. })));
    }

    fn arb_vector() -> impl Strategy<Value = SparseVector> {
        prop::collection::vec((0usize..24, -10.0f64..10.0), 0..10).prop_map(SparseVector::from_pairs)
    }

    proptest! {
        #[test]
        fn inner_is_bilinear(x in arb_vector(), y in arb_vector(), z in arb_vector(),
                             a in -5.0f64..5.0, b in -5.0f64..5.0) {
            let lhs = inner(&x.scale(a).axpy(b, &y), &z);
            let rhs = a * inner(&x, &z) + b * inner(&y, &z);
            let scale = (a.abs() * x.norm() + b.abs() * y.norm()) * z.norm() + 1.0;
            prop_assert!((lhs - rhs).abs() <= 1e-12 * scale);
        }

        #[test]
        fn inner_is_symmetric(x in arb_vector(), y in arb_vector()) {
            prop_assert_eq!(inner(&x, &y), inner(&y, &x));
        }

        #[test]
        fn cauchy_schwarz(x in arb_vector(), y in arb_vector()) {
            prop_assert!(inner(&x, &y).abs() <= norm(&x) * norm(&y) + 1e-12 * (1.0 + norm(&x) * norm(&y)));
        }

        #[test]
        fn bessel_inequality(vs in prop::collection::vec(arb_vector(), 0..8), x in arb_vector()) {
            let family = orthonormalize(&vs);
            prop_assert!(family.gram_residual() <= 1e-10);
            let total: f64 = family.coefficients(&x).iter().map(|c| c * c).sum();
            prop_assert!(total <= x.norm() * x.norm() * (1.0 + 1e-12) + 1e-10);
        }

        #[test]
        fn orthonormalize_is_idempotent(vs in prop::collection::vec(arb_vector(), 0..8)) {
            let once = orthonormalize(&vs);
            let twice = orthonormalize(once.members());
            prop_assert_eq!(once.len(), twice.len());
            for (a, b) in once.members().iter().zip(twice.members()) {
                for (c, d) in once.members().iter().zip(twice.members()) {
                    prop_assert!((a.inner(c) - b.inner(d)).abs() <= 1e-10);
                }
            }
            // Same span: every member of `once` is reproduced by projecting onto `twice`.
            for v in once.members() {
                let back = twice.combine(&twice.coefficients(v));
                prop_assert!(back.distance(v) <= 1e-10);
            }
        }

        #[test]
        fn orthonormalize_spans_input(vs in prop::collection::vec(arb_vector(), 0..8)) {
            let family = orthonormalize(&vs);
            prop_assert!(family.len() <= vs.len());
            for v in &vs {
                let back = family.combine(&family.coefficients(v));
                prop_assert!(back.distance(v) <= 1e-9 * (1.0 + v.norm()));
            }
        }
    }
}
