//! The orbit map `A ↦ A e₀` onto the sphere, its stabilizers and cosets, a
//! reflection-built section, and local trivializations of `O(j+1) → Sʲ`.

use alloc::vec::Vec;

use crate::decomp::DenseOrthoMatrix;
use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::operator::{reflection_flipping, GOperator};
use crate::sphere::SpherePoint;
use crate::tol;
use crate::vector::{OrthonormalFamily, SparseVector};

/// Below this distance from `−e₀` the section switches formula.
const ANTIPODE_RADIUS: f64 = 1e-6;
/// Minimum separation for [`reflection_r`].
const PAIR_SEPARATION: f64 = 1e-8;

/// `A e₀`.
pub fn project_lambda(a: &GOperator) -> SpherePoint {
    SpherePoint::from_trusted(a.apply(&SparseVector::basis(0)))
}

/// Whether `A` and `B` agree on `e₀`, i.e. lie in the same left coset of
/// the stabilizer of `e₀`.
pub fn same_coset(a: &GOperator, b: &GOperator) -> bool {
    project_lambda(a).distance(&project_lambda(b)) <= tol::OPERATOR_EQ
}

/// Whether `A` fixes each of `e₀, …, e_{n−1}`.
pub fn stabilizer_membership(n: usize, a: &GOperator) -> bool {
    (0..n).all(|i| {
        let e = SparseVector::basis(i);
        a.apply(&e).distance(&e) <= tol::OPERATOR_EQ
    })
}

/// The reflection exchanging `x` and `y`: a flip along `x − y`.
pub fn reflection_r(x: &SpherePoint, y: &SpherePoint) -> Result<GOperator> {
    let diff = x.vector() - y.vector();
    let distance = diff.norm();
    if distance <= PAIR_SEPARATION {
        return Err(Error::DegeneratePair { distance });
    }
    let u = diff.scale(1.0 / distance);
    Ok(reflection_flipping(&OrthonormalFamily::from_trusted(alloc::vec![u])))
}

/// An operator sending `e₀` to `x`: `−r(−e₀, x)`, or `r(e₀, x)` near `−e₀`
/// (exactly the coordinate flip of `e₀` at `x = −e₀`).
pub fn section_h0(x: &SpherePoint) -> GOperator {
    let antipode = SpherePoint::from_trusted(SparseVector::basis(0).scale(-1.0));
    if x.distance(&antipode) < ANTIPODE_RADIUS {
        return reflection_r(&SpherePoint::basis(0), x).expect("x is far from e0");
    }
    let r = reflection_r(&antipode, x).expect("x is far from -e0");
    GOperator::negative_identity().compose(&r)
}

/// An element of `O(j+1)` split as base point on `Sʲ` and fibre in `O(j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrivializationResult {
    pub base: SpherePoint,
    pub fibre: DenseOrthoMatrix,
}

/// The frame at `b`: the section on coordinates `0..=j` with columns
/// `1..=j` negated, so that the frame at `e₀` is the identity. Its first
/// column is `b`.
fn frame(j: usize, base: &SpherePoint) -> DenseMatrix {
    let coords: Vec<usize> = (0..=j).collect();
    let mut s = section_h0(base).dense_on(&coords);
    for i in 0..=j {
        for c in 1..=j {
            s[(i, c)] = -s[(i, c)];
        }
    }
    s
}

/// `A ↦ (A e₀, F)` where `Sᵀ A = diag(1, F)` in the frame `S` at `A e₀`.
pub fn trivialize(j: usize, a: &DenseOrthoMatrix) -> Result<TrivializationResult> {
    if a.n() != j + 1 {
        return Err(Error::DimensionMismatch { expected: j + 1, found: a.n() });
    }
    let residual = a.matrix().orthogonality_residual();
    if residual > tol::ORTHOGONAL {
        return Err(Error::NotOrthogonal { residual });
    }
    let column = SparseVector::from_dense(&a.matrix().column(0));
    let base = SpherePoint::normalize(&column).ok_or(Error::NotOrthogonal { residual })?;
    let local = frame(j, &base).transpose().matmul(a.matrix());
    let fibre = DenseMatrix::from_fn(j, j, |r, c| local[(r + 1, c + 1)]);
    Ok(TrivializationResult {
        base,
        fibre: DenseOrthoMatrix::from_trusted(fibre),
    })
}

/// The inverse of [`trivialize`]: `S · diag(1, F)`.
pub fn untrivialize(j: usize, r: &TrivializationResult) -> Result<DenseOrthoMatrix> {
    if r.fibre.n() != j {
        return Err(Error::InvalidFibre("fibre size differs from the sphere dimension"));
    }
    if r.fibre.matrix().orthogonality_residual() > tol::ORTHOGONAL {
        return Err(Error::InvalidFibre("fibre is not orthogonal"));
    }
    if r.base.vector().max_index().is_some_and(|m| m > j) {
        return Err(Error::InvalidFibre("base point lies outside the sphere's coordinates"));
    }
    let lifted = DenseMatrix::from_fn(j + 1, j + 1, |row, col| match (row, col) {
        (0, 0) => 1.0,
        (0, _) | (_, 0) => 0.0,
        _ => r.fibre.matrix()[(row - 1, col - 1)],
    });
    Ok(DenseOrthoMatrix::from_trusted(frame(j, &r.base).matmul(&lifted)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomp::embed;
    use crate::operator::{op_distance, reflection_flipping};
    use crate::sample;
    use alloc::vec;
    use rand::Rng;

    fn e(i: usize) -> SparseVector {
        SparseVector::basis(i)
    }

    fn flip(i: usize) -> GOperator {
        reflection_flipping(&OrthonormalFamily::coordinates([i]))
    }

    #[test]
    fn project_examples() {
        assert_eq!(project_lambda(&GOperator::identity()).vector(), &e(0));
        let swap = DenseOrthoMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert!(project_lambda(&embed(&swap)).vector().distance(&e(1)) <= 1e-15);
        assert_eq!(project_lambda(&GOperator::negative_identity()).vector(), &-&e(0));
    }

    #[test]
    fn coset_examples() {
        let a = sample::random_operator(&mut sample::rng(40, 0), 6);
        assert!(same_coset(&a, &a));
        assert!(same_coset(&GOperator::identity(), &flip(1)));
        assert!(!same_coset(&GOperator::identity(), &GOperator::negative_identity()));
    }

    #[test]
    fn stabilizer_examples() {
        assert!((0..5).all(|n| stabilizer_membership(n, &GOperator::identity())));
        assert!(!stabilizer_membership(1, &flip(0)));
        assert!(stabilizer_membership(2, &flip(5)));
    }

    #[test]
    fn reflection_r_examples() {
        let (x, y) = (SpherePoint::basis(0), SpherePoint::basis(1));
        let r = reflection_r(&x, &y).unwrap();
        // Householder oracle: (I − 2uuᵀ)e₀ with u = (e₀ − e₁)/√2.
        let u = [core::f64::consts::FRAC_1_SQRT_2, -core::f64::consts::FRAC_1_SQRT_2];
        let oracle = [1.0 - 2.0 * u[0] * u[0], -2.0 * u[1] * u[0]];
        let image = r.apply(&e(0));
        assert!((image.get(0) - oracle[0]).abs() < 1e-15 && (image.get(1) - oracle[1]).abs() < 1e-15);

        let mut rng = sample::rng(41, 0);
        let (x, y) = (sample::random_unit_vector(&mut rng, 6), sample::random_unit_vector(&mut rng, 6));
        let r = reflection_r(&x, &y).unwrap();
        assert!(r.apply(x.vector()).distance(y.vector()) <= 1e-9);
        assert!(r.apply(y.vector()).distance(x.vector()) <= 1e-9);
        assert!(r.compose(&r).approx_eq(&GOperator::identity(), 1e-12));
        assert!(r.approx_eq(&r.adjoint_inverse(), 1e-12));

        let p = SpherePoint::basis(0);
        assert!(matches!(reflection_r(&p, &p), Err(Error::DegeneratePair { .. })));
    }

    #[test]
    fn section_examples() {
        assert_eq!(section_h0(&SpherePoint::basis(0)).apply(&e(0)), e(0));
        assert!(section_h0(&SpherePoint::basis(1)).apply(&e(0)).distance(&e(1)) <= 1e-15);
        let antipode = SpherePoint::new(-&e(0)).unwrap();
        let h = section_h0(&antipode);
        assert_eq!(h.apply(&e(0)), -&e(0));
        assert!(h.approx_eq(&flip(0), 1e-15));
    }

    #[test]
    fn section_property_near_and_far_from_the_antipode() {
        let mut rng = sample::rng(42, 0);
        for i in 0..500 {
            let x = if i % 5 == 0 {
                let eps = 10f64.powi(-rng.random_range(3..10));
                let v = &(-&e(0)) + &sample::random_vector(&mut rng, 6, 3).scale(eps);
                SpherePoint::normalize(&v).unwrap()
            } else {
                sample::random_unit_vector(&mut rng, 9)
            };
            assert!(project_lambda(&section_h0(&x)).distance(&x) <= 1e-9);
        }
    }

    #[test]
    fn section_is_locally_lipschitz() {
        let mut rng = sample::rng(43, 0);
        let delta = 1e-4;
        for _ in 0..100 {
            let x = sample::random_unit_vector(&mut rng, 6);
            if x.vector().get(0) < -0.5 {
                continue;
            }
            let nudged = x.vector().axpy(delta, &sample::random_unit_vector(&mut rng, 6).into_vector());
            let y = SpherePoint::normalize(&nudged).unwrap();
            let d = x.distance(&y);
            assert!(op_distance(&section_h0(&x), &section_h0(&y)) <= 10.0 * d);
        }
    }

    #[test]
    fn coset_biconditional_and_metric_bound() {
        let mut rng = sample::rng(44, 0);
        let mut agreeing = 0;
        for i in 0..200 {
            let a = sample::random_operator(&mut rng, 6);
            // Every other pair shares a coset by construction.
            let b = if i % 2 == 0 {
                let fixer = GOperator::from_block(crate::operator::BlockPart::from_trusted(
                    OrthonormalFamily::coordinates(1..4),
                    sample::orthogonal_matrix(&mut rng, 3),
                ));
                a.compose(&fixer)
            } else {
                sample::random_operator(&mut rng, 6)
            };
            let same = same_coset(&a, &b);
            agreeing += usize::from(same);
            assert_eq!(same, stabilizer_membership(1, &a.adjoint_inverse().compose(&b)));
            let gap = project_lambda(&a).distance(&project_lambda(&b));
            assert!(gap <= op_distance(&a, &b) + 1e-9);
        }
        assert!(agreeing >= 100);
    }

    #[test]
    fn trivialize_identity() {
        for j in 1..5 {
            let r = trivialize(j, &DenseOrthoMatrix::identity(j + 1)).unwrap();
            assert_eq!(r.base, SpherePoint::basis(0));
            assert!(r.fibre.matrix().sub(&DenseMatrix::identity(j)).max_abs() <= 1e-15);
        }
    }

    #[test]
    fn trivialize_planar_rotation() {
        for k in 0..12 {
            let theta = 0.5 * k as f64;
            let (c, s) = (libm::cos(theta), libm::sin(theta));
            let rot = DenseOrthoMatrix::from_rows(&[vec![c, -s], vec![s, c]]).unwrap();
            let r = trivialize(1, &rot).unwrap();
            assert!((r.base.vector().get(0) - c).abs() <= 1e-12);
            assert!((r.base.vector().get(1) - s).abs() <= 1e-12);
            assert_eq!(r.fibre.n(), 1);
            assert!((r.fibre.matrix()[(0, 0)] - 1.0).abs() <= 1e-12);
            let mirror = DenseOrthoMatrix::from_rows(&[vec![c, s], vec![s, -c]]).unwrap();
            assert!((trivialize(1, &mirror).unwrap().fibre.matrix()[(0, 0)] + 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn untrivialize_examples() {
        let r = TrivializationResult {
            base: SpherePoint::basis(0),
            fibre: DenseOrthoMatrix::from_rows(&[vec![-1.0]]).unwrap(),
        };
        let a = untrivialize(1, &r).unwrap();
        assert_eq!(a.matrix(), &DenseMatrix::diagonal(&[1.0, -1.0]));

        let mut rng = sample::rng(45, 0);
        let base = sample::random_unit_vector(&mut rng, 4);
        let canonical = TrivializationResult { base: base.clone(), fibre: DenseOrthoMatrix::identity(3) };
        assert_eq!(untrivialize(3, &canonical).unwrap().matrix(), &frame(3, &base));

        let bad = TrivializationResult { base, fibre: DenseOrthoMatrix::identity(2) };
        assert!(matches!(untrivialize(3, &bad), Err(Error::InvalidFibre(_))));
    }

    #[test]
    fn trivialize_rejects_bad_input() {
        assert!(matches!(
            trivialize(2, &DenseOrthoMatrix::identity(2)),
            Err(Error::DimensionMismatch { expected: 3, found: 2 })
        ));
    }

    #[test]
    fn round_trips_and_commuting_diagram() {
        let mut rng = sample::rng(46, 0);
        for j in 1..=3 {
            for _ in 0..100 {
                let a = sample::random_dense_orthogonal(&mut rng, j + 1);
                let r = trivialize(j, &a).unwrap();
                assert!(r.fibre.matrix().orthogonality_residual() <= 1e-9);
                assert!(r.base.vector().distance(&project_lambda(&embed(&a)).into_vector()) <= 1e-12);
                let back = untrivialize(j, &r).unwrap();
                assert!(back.matrix().sub(a.matrix()).max_abs() <= 1e-8);
                let again = trivialize(j, &back).unwrap();
                assert!(again.base.distance(&r.base) <= 1e-8);
                assert!(again.fibre.matrix().sub(r.fibre.matrix()).max_abs() <= 1e-8);
            }
        }
    }

    #[test]
    fn fibre_distance_matches_total_distance_over_a_point() {
        let mut rng = sample::rng(47, 0);
        for j in 1..=4 {
            for _ in 0..50 {
                let base = sample::random_unit_vector(&mut rng, j + 1);
                let lift = |f: DenseOrthoMatrix| {
                    untrivialize(j, &TrivializationResult { base: base.clone(), fibre: f }).unwrap()
                };
                let (f, g) = (sample::random_dense_orthogonal(&mut rng, j), sample::random_dense_orthogonal(&mut rng, j));
                let (a, b) = (lift(f.clone()), lift(g.clone()));
                let total = a.matrix().sub(b.matrix()).spectral_norm();
                let fibre = f.matrix().sub(g.matrix()).spectral_norm();
                assert!((total - fibre).abs() <= 1e-8);
            }
        }
    }
}
