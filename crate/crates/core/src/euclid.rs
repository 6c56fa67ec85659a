//! Rigid motions `x ↦ Mx + v` as pairs `(shift, rotor)` under the
//! semidirect composition `(v₁, M₁)(v₂, M₂) = (v₁ + M₁v₂, M₁M₂)`.

use crate::decomp::ReflectionWord;
use crate::error::{Error, Result};
use crate::operator::{op_distance, GOperator};
use crate::vector::SparseVector;

/// A rigid motion. When `word` is present the rotor is the product of its
/// reflections, which marks the element as generated by reflections.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct EuclidElement {
    pub shift: SparseVector,
    pub rotor: GOperator,
    pub word: Option<ReflectionWord>,
}

impl EuclidElement {
    pub fn new(shift: SparseVector, rotor: GOperator) -> Self {
        Self { shift, rotor, word: None }
    }

    pub fn identity() -> Self {
        Self::default()
    }

    pub fn translation(shift: SparseVector) -> Self {
        Self::new(shift, GOperator::identity())
    }

    pub fn rotation(rotor: GOperator) -> Self {
        Self::new(SparseVector::zero(), rotor)
    }

    /// `(shift, W)` with the rotor rebuilt from `word`.
    pub fn from_word(shift: SparseVector, word: ReflectionWord) -> Self {
        Self {
            shift,
            rotor: word.to_operator(),
            word: Some(word),
        }
    }

    /// Shift distance plus rotor operator distance.
    pub fn distance(&self, other: &Self) -> f64 {
        self.shift.distance(&other.shift) + op_distance(&self.rotor, &other.rotor)
    }

    pub fn approx_eq(&self, other: &Self, tolerance: f64) -> bool {
        self.distance(other) <= tolerance
    }
}

pub fn e_compose(g: &EuclidElement, h: &EuclidElement) -> EuclidElement {
    let word = match (&g.word, &h.word) {
        (Some(a), Some(b)) => Some(a.concat(b)),
        _ => None,
    };
    EuclidElement {
        shift: &g.shift + &g.rotor.apply(&h.shift),
        rotor: g.rotor.compose(&h.rotor),
        word,
    }
}

/// `(−M⁻¹v, M⁻¹)`.
pub fn e_inverse(g: &EuclidElement) -> EuclidElement {
    let rotor = g.rotor.adjoint_inverse();
    EuclidElement {
        shift: -&rotor.apply(&g.shift),
        rotor,
        word: g.word.as_ref().map(ReflectionWord::inverse),
    }
}

/// `Mx + v`.
pub fn e_act(g: &EuclidElement, x: &SparseVector) -> SparseVector {
    &g.rotor.apply(x) + &g.shift
}

/// `g⁻¹ a g`, with the rotor rewritten reflection by reflection so the
/// result again carries a word. Fails when `a` has no word.
pub fn xi_conjugation_witness(g: &EuclidElement, a: &EuclidElement) -> Result<EuclidElement> {
    let word = a.word.as_ref().ok_or(Error::MissingWord)?;
    let inv = g.rotor.adjoint_inverse();
    // −M⁻¹m + M⁻¹a + M⁻¹Am = M⁻¹(Am + a − m)
    let inner = &(&a.rotor.apply(&g.shift) + &a.shift) - &g.shift;
    Ok(EuclidElement::from_word(inv.apply(&inner), word.conjugate_by(&g.rotor)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::reflection_flipping;
    use crate::sample;
    use crate::vector::OrthonormalFamily;
    use alloc::vec::Vec;
    use rand::Rng;

    fn e(i: usize) -> SparseVector {
        SparseVector::basis(i)
    }

    fn flip(i: usize) -> GOperator {
        reflection_flipping(&OrthonormalFamily::coordinates([i]))
    }

    fn random_element<R: Rng>(rng: &mut R, dim: usize) -> EuclidElement {
        let nnz = rng.random_range(0..=dim);
        EuclidElement::new(sample::random_vector(rng, dim, nnz), sample::random_operator(rng, dim))
    }

    fn random_xi_element<R: Rng>(rng: &mut R, dim: usize) -> EuclidElement {
        let len = rng.random_range(0..=4);
        let nnz = rng.random_range(0..=dim);
        EuclidElement::from_word(sample::random_vector(rng, dim, nnz), sample::random_word(rng, dim, len))
    }

    #[test]
    fn compose_examples() {
        let (v, w) = (e(0).scale(2.0), e(3).scale(-1.0));
        let sum = e_compose(&EuclidElement::translation(v.clone()), &EuclidElement::translation(w.clone()));
        assert_eq!(sum.shift, &v + &w);
        assert!(sum.rotor.approx_eq(&GOperator::identity(), 0.0));

        let (m, n) = (flip(0), flip(2));
        let prod = e_compose(&EuclidElement::rotation(m.clone()), &EuclidElement::rotation(n.clone()));
        assert!(prod.shift.is_zero());
        assert!(prod.rotor.approx_eq(&m.compose(&n), 0.0));

        let g = EuclidElement::new(e(0), flip(0));
        let out = e_compose(&g, &EuclidElement::translation(e(0)));
        assert!(out.shift.is_zero());
        assert!(out.rotor.approx_eq(&flip(0), 0.0));
    }

    #[test]
    fn inverse_examples() {
        let v = SparseVector::from_pairs([(1, 0.5), (4, -2.0)]);
        assert_eq!(e_inverse(&EuclidElement::translation(v.clone())).shift, -&v);

        let m = sample::random_operator(&mut sample::rng(30, 0), 6);
        let inv = e_inverse(&EuclidElement::rotation(m.clone()));
        assert!(inv.shift.is_zero());
        assert!(inv.rotor.approx_eq(&m.adjoint_inverse(), 0.0));

        let g = EuclidElement::new(e(0), flip(0));
        let inv = e_inverse(&g);
        assert!(inv.approx_eq(&g, 1e-15));
        assert!(e_compose(&g, &inv).approx_eq(&EuclidElement::identity(), 1e-15));
    }

    #[test]
    fn act_examples() {
        let x = SparseVector::from_pairs([(0, 1.0), (2, 3.0)]);
        let v = e(5).scale(0.25);
        assert_eq!(e_act(&EuclidElement::translation(v.clone()), &x), &x + &v);
        assert_eq!(e_act(&EuclidElement::rotation(GOperator::negative_identity()), &x), -&x);
        let g = EuclidElement::new(e(1), flip(0));
        assert_eq!(e_act(&g, &e(0)), SparseVector::from_pairs([(0, -1.0), (1, 1.0)]));
    }

    #[test]
    fn group_laws() {
        let mut rng = sample::rng(31, 0);
        let id = EuclidElement::identity();
        for _ in 0..100 {
            let (f, g, h) = (random_element(&mut rng, 8), random_element(&mut rng, 8), random_element(&mut rng, 8));
            let left = e_compose(&e_compose(&f, &g), &h);
            let right = e_compose(&f, &e_compose(&g, &h));
            assert!(left.approx_eq(&right, 1e-8));
            assert!(e_compose(&f, &e_inverse(&f)).approx_eq(&id, 1e-9));
            assert!(e_compose(&e_inverse(&f), &f).approx_eq(&id, 1e-9));
            assert!(e_compose(&f, &id).approx_eq(&f, 1e-9));

            let x = sample::random_vector(&mut rng, 10, 5);
            let y = sample::random_vector(&mut rng, 10, 5);
            let gh_x = e_act(&e_compose(&g, &h), &x);
            assert!(gh_x.distance(&e_act(&g, &e_act(&h, &x))) <= 1e-9);
            let moved = e_act(&f, &x).distance(&e_act(&f, &y));
            assert!((moved - x.distance(&y)).abs() <= 1e-9);
        }
    }

    #[test]
    fn conjugation_witness_examples() {
        let mut rng = sample::rng(32, 0);
        let a = random_xi_element(&mut rng, 6);
        let same = xi_conjugation_witness(&EuclidElement::identity(), &a).unwrap();
        assert!(same.approx_eq(&a, 1e-12));

        let m = SparseVector::from_pairs([(0, 1.0), (3, -0.5)]);
        let a = EuclidElement::from_word(SparseVector::zero(), sample::random_word(&mut rng, 5, 3));
        let c = xi_conjugation_witness(&EuclidElement::translation(m.clone()), &a).unwrap();
        let expected = &a.rotor.apply(&m) - &m;
        assert!(c.shift.distance(&expected) <= 1e-12);
        assert_eq!(c.word.as_ref().unwrap().len(), 3);

        let plain = EuclidElement::rotation(flip(0));
        assert!(matches!(xi_conjugation_witness(&plain, &plain), Err(Error::MissingWord)));
    }

    #[test]
    fn conjugation_witness_matches_triple_product() {
        let mut rng = sample::rng(33, 0);
        for _ in 0..100 {
            let g = random_element(&mut rng, 7);
            let a = random_xi_element(&mut rng, 7);
            let witness = xi_conjugation_witness(&g, &a).unwrap();
            let direct = e_compose(&e_inverse(&g), &e_compose(&a, &g));
            let probes: Vec<SparseVector> = (0..4).map(|_| sample::random_vector(&mut rng, 12, 6)).collect();
            for x in &probes {
                assert!(e_act(&witness, x).distance(&e_act(&direct, x)) <= 1e-8);
            }
            assert!(witness.approx_eq(&direct, 1e-8));
            assert_eq!(witness.word.as_ref().unwrap().len(), a.word.as_ref().unwrap().len());
        }
    }
}
