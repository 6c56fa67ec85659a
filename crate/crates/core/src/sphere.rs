//! The unit sphere of ℓ²: hemisphere charts, transition maps and their
//! derivatives, the index shift, and the two homotopies that contract the
//! sphere to `e₀`.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::tol;
use crate::vector::SparseVector;

/// Points must lie this far inside the open hemisphere.
const HEMISPHERE_MARGIN: f64 = 1e-10;
/// Chart coordinates must have norm below `1 − DISC_MARGIN`.
const DISC_MARGIN: f64 = 1e-12;
/// `homotopy_f1` refuses to normalize below this.
const F1_DENOMINATOR_FLOOR: f64 = 1e-6;

/// A vector of unit norm.
#[derive(Debug, Clone, PartialEq)]
pub struct SpherePoint(SparseVector);

impl SpherePoint {
    pub fn new(v: SparseVector) -> Result<Self> {
        let norm = v.norm();
        if (norm - 1.0).abs() > tol::UNIT {
            return Err(Error::NotUnit { norm });
        }
        Ok(Self(v))
    }

    /// `v / ‖v‖`, or `None` for the zero vector.
    pub fn normalize(v: &SparseVector) -> Option<Self> {
        let norm = v.norm();
        (norm > 0.0 && norm.is_finite()).then(|| Self(v.scale(1.0 / norm)))
    }

    pub fn basis(index: usize) -> Self {
        Self(SparseVector::basis(index))
    }

    pub(crate) fn from_trusted(v: SparseVector) -> Self {
        Self(v)
    }

    pub fn vector(&self) -> &SparseVector {
        &self.0
    }

    pub fn into_vector(self) -> SparseVector {
        self.0
    }

    pub fn distance(&self, other: &Self) -> f64 {
        self.0.distance(&other.0)
    }
}

impl AsRef<SparseVector> for SpherePoint {
    fn as_ref(&self) -> &SparseVector {
        &self.0
    }
}

/// The chart on the open hemisphere `{x : ⟨x, e_p⟩ > 0}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ChartPole(pub usize);

impl ChartPole {
    /// `z − ⟨z, e_p⟩ e_p`.
    fn project_out(self, z: &SparseVector) -> SparseVector {
        z.map_values(|i, v| if i == self.0 { 0.0 } else { v })
    }
}

/// `x ↦ x − ⟨x, e_p⟩ e_p`, onto the open disc of `e_p^⊥`.
pub fn chart_forward(pole: ChartPole, x: &SpherePoint) -> Result<SparseVector> {
    let component = x.0.get(pole.0);
    if component <= HEMISPHERE_MARGIN {
        return Err(Error::OutsideChart { pole: pole.0, component });
    }
    Ok(pole.project_out(&x.0))
}

/// `y ↦ y + √(1 − ‖y‖²) e_p`.
pub fn chart_inverse(pole: ChartPole, y: &SparseVector) -> Result<SpherePoint> {
    let norm = y.norm();
    if norm >= 1.0 - DISC_MARGIN {
        return Err(Error::OutsideDisc { norm });
    }
    let component = y.get(pole.0);
    if component.abs() > DISC_MARGIN {
        return Err(Error::NonzeroPoleComponent { pole: pole.0, component });
    }
    let height = libm::sqrt(1.0 - norm * norm);
    Ok(SpherePoint(pole.project_out(y).axpy(height, &SparseVector::basis(pole.0))))
}

/// `P_U ∘ P_V⁻¹`.
pub fn transition(to: ChartPole, from: ChartPole, y: &SparseVector) -> Result<SparseVector> {
    chart_forward(to, &chart_inverse(from, y)?)
}

/// Derivative of [`transition`] at `y` applied to `h`:
/// `h ↦ P_U(h) − (⟨y, h⟩ / √(1 − ‖y‖²)) P_U(e_V)`.
pub fn frechet_transition(
    to: ChartPole,
    from: ChartPole,
    y: &SparseVector,
    h: &SparseVector,
) -> Result<SparseVector> {
    // Same domain as the transition map itself.
    transition(to, from, y)?;
    let component = h.get(from.0);
    if component.abs() > DISC_MARGIN {
        return Err(Error::NonzeroPoleComponent { pole: from.0, component });
    }
    let height = libm::sqrt(1.0 - y.inner(y));
    let correction = y.inner(h) / height;
    Ok(to.project_out(h).axpy(-correction, &to.project_out(&SparseVector::basis(from.0))))
}

/// The `λ`-shift: relabels index `i` as `i + λ`. Isometric, not surjective.
pub fn shift_apply(lambda: usize, x: &SparseVector) -> SparseVector {
    x.map_indices(|i| i + lambda)
}

fn unit_interval(t: f64) -> Result<()> {
    if (0.0..=1.0).contains(&t) {
        Ok(())
    } else {
        Err(Error::InvalidParameter("homotopy time must lie in [0, 1]"))
    }
}

/// `‖t 𝒮x + (1 − t) x‖`, the normalizer of [`homotopy_f1`].
pub fn f1_denominator(t: f64, x: &SpherePoint) -> f64 {
    shift_apply(1, &x.0).scale(t).axpy(1.0 - t, &x.0).norm()
}

/// `(t 𝒮x + (1 − t) x) / ‖t 𝒮x + (1 − t) x‖`, from the identity to the shift.
pub fn homotopy_f1(t: f64, x: &SpherePoint) -> Result<SpherePoint> {
    unit_interval(t)?;
    let shifted = shift_apply(1, &x.0);
    if t == 0.0 {
        return Ok(x.clone());
    }
    if t == 1.0 {
        return Ok(SpherePoint(shifted));
    }
    let w = shifted.scale(t).axpy(1.0 - t, &x.0);
    let value = w.norm();
    if value <= F1_DENOMINATOR_FLOOR {
        return Err(Error::DegenerateDenominator { value });
    }
    Ok(SpherePoint(w.scale(1.0 / value)))
}

/// `t e₀ + √(1 − t²) 𝒮x`, from the shift to the constant map at `e₀`.
pub fn homotopy_f2(t: f64, x: &SpherePoint) -> Result<SpherePoint> {
    unit_interval(t)?;
    let shifted = shift_apply(1, &x.0);
    let w = shifted.scale(libm::sqrt(1.0 - t * t)).axpy(t, &SparseVector::basis(0));
    Ok(SpherePoint(w))
}

#[derive(Debug, Clone, PartialEq)]
pub struct PathSample {
    pub t: f64,
    pub point: SpherePoint,
}

/// Uniform samples of a path on the sphere.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct HomotopyPath {
    pub samples: Vec<PathSample>,
}

impl HomotopyPath {
    /// Largest `‖p_{i+1} − p_i‖`.
    pub fn max_gap(&self) -> f64 {
        self.gaps().fold(0.0, f64::max)
    }

    /// Polygonal length through the samples.
    pub fn length(&self) -> f64 {
        self.gaps().sum()
    }

    /// Smallest `C` with `‖p_{i+1} − p_i‖ ≤ C·(t_{i+1} − t_i)` for all `i`.
    pub fn continuity_constant(&self) -> f64 {
        self.samples
            .windows(2)
            .map(|w| w[0].point.distance(&w[1].point) / (w[1].t - w[0].t))
            .fold(0.0, f64::max)
    }

    /// Largest `|‖p_i‖ − 1|`.
    pub fn max_norm_defect(&self) -> f64 {
        self.samples
            .iter()
            .map(|s| (s.point.0.norm() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    fn gaps(&self) -> impl Iterator<Item = f64> + '_ {
        self.samples.windows(2).map(|w| w[0].point.distance(&w[1].point))
    }
}

/// `F1(2t, x)` on `[0, ½]` followed by `F2(2t − 1, x)` on `[½, 1]`, at
/// `steps` uniform times.
pub fn contract_path(x: &SpherePoint, steps: usize) -> Result<HomotopyPath> {
    if steps < 2 {
        return Err(Error::InvalidParameter("a path needs at least two samples"));
    }
    let last = (steps - 1) as f64;
    let samples = (0..steps)
        .map(|i| {
            let t = i as f64 / last;
            let point = if 2 * i < steps {
                homotopy_f1((2.0 * t).min(1.0), x)?
            } else {
                homotopy_f2((2.0 * t - 1.0).clamp(0.0, 1.0), x)?
            };
            Ok(PathSample { t, point })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(HomotopyPath { samples })
}
