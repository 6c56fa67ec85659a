//! JSON shapes for the library types.
//!
//! Each wire struct mirrors one library type and converts both ways;
//! conversions into library types validate and may fail.

use std::collections::{BTreeMap, BTreeSet};

use hilbert_ortho::{
    BlockPart, DenseMatrix, DenseOrthoMatrix, EuclidElement, GOperator, HomotopyPath,
    OrthonormalFamily, PathSample, Reflection, ReflectionWord, SignMode, SignPattern,
    SparseVector, SpherePoint, TrivializationResult,
};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VectorWire {
    pub entries: BTreeMap<usize, f64>,
}

impl From<&SparseVector> for VectorWire {
    fn from(v: &SparseVector) -> Self {
        Self { entries: v.iter().collect() }
    }
}

impl From<&VectorWire> for SparseVector {
    fn from(w: &VectorWire) -> Self {
        SparseVector::from_pairs(w.entries.iter().map(|(&i, &v)| (i, v)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeWire {
    Finite,
    Cofinite,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SignWire {
    pub mode: ModeWire,
    pub indices: BTreeSet<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockWire {
    pub basis: Vec<VectorWire>,
    pub matrix: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorWire {
    pub sign: SignWire,
    pub block: BlockWire,
}

impl From<&GOperator> for OperatorWire {
    fn from(op: &GOperator) -> Self {
        let mode = match op.sign().mode() {
            SignMode::Finite => ModeWire::Finite,
            SignMode::Cofinite => ModeWire::Cofinite,
        };
        Self {
            sign: SignWire { mode, indices: op.sign().indices().clone() },
            block: BlockWire {
                basis: op.block().basis().members().iter().map(VectorWire::from).collect(),
                matrix: op.block().matrix().to_rows(),
            },
        }
    }
}

impl TryFrom<&OperatorWire> for GOperator {
    type Error = hilbert_ortho::Error;

    fn try_from(w: &OperatorWire) -> hilbert_ortho::Result<Self> {
        let mode = match w.sign.mode {
            ModeWire::Finite => SignMode::Finite,
            ModeWire::Cofinite => SignMode::Cofinite,
        };
        let basis = OrthonormalFamily::new(w.block.basis.iter().map(SparseVector::from).collect())?;
        let matrix = DenseMatrix::from_rows(&w.block.matrix)?;
        Ok(GOperator::new(SignPattern::new(mode, w.sign.indices.clone()), BlockPart::new(basis, matrix)?))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixWire {
    pub n: usize,
    pub rows: Vec<Vec<f64>>,
}

impl MatrixWire {
    /// Checks the declared size against the rows without testing orthogonality.
    pub fn to_dense(&self) -> hilbert_ortho::Result<DenseMatrix> {
        if self.rows.len() != self.n {
            return Err(hilbert_ortho::Error::DimensionMismatch { expected: self.n, found: self.rows.len() });
        }
        if let Some(row) = self.rows.iter().find(|r| r.len() != self.n) {
            return Err(hilbert_ortho::Error::DimensionMismatch { expected: self.n, found: row.len() });
        }
        DenseMatrix::from_rows(&self.rows)
    }
}

impl From<&DenseOrthoMatrix> for MatrixWire {
    fn from(m: &DenseOrthoMatrix) -> Self {
        Self { n: m.n(), rows: m.matrix().to_rows() }
    }
}

impl TryFrom<&MatrixWire> for DenseOrthoMatrix {
    type Error = hilbert_ortho::Error;

    fn try_from(w: &MatrixWire) -> hilbert_ortho::Result<Self> {
        DenseOrthoMatrix::new(w.to_dense()?)
    }
}

/// A bare list of vectors is a flip factor `I − 2P`; `{"span": [...]}` is
/// a factor `2P − I`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged, try_from = "serde_json::Value")]
pub enum FactorWire {
    Flip(Vec<VectorWire>),
    Span { span: Vec<VectorWire> },
}

// Untagged deserialization buffers map keys as strings, which breaks the
// integer keys of `VectorWire`; dispatch on the JSON shape instead.
impl TryFrom<serde_json::Value> for FactorWire {
    type Error = serde_json::Error;

    fn try_from(value: serde_json::Value) -> Result<Self, Self::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct SpanOnly {
            span: Vec<VectorWire>,
        }
        if value.is_object() {
            let SpanOnly { span } = serde_json::from_value(value)?;
            Ok(Self::Span { span })
        } else {
            serde_json::from_value(value).map(Self::Flip)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WordWire {
    pub n: usize,
    pub factors: Vec<FactorWire>,
}

impl From<&ReflectionWord> for WordWire {
    fn from(word: &ReflectionWord) -> Self {
        let members = |f: &OrthonormalFamily| f.members().iter().map(VectorWire::from).collect();
        let factors = word
            .factors()
            .iter()
            .map(|f| match f {
                Reflection::Flip(fam) => FactorWire::Flip(members(fam)),
                Reflection::Span(fam) => FactorWire::Span { span: members(fam) },
            })
            .collect();
        Self { n: word.n(), factors }
    }
}

impl TryFrom<&WordWire> for ReflectionWord {
    type Error = hilbert_ortho::Error;

    fn try_from(w: &WordWire) -> hilbert_ortho::Result<Self> {
        let family = |vs: &[VectorWire]| OrthonormalFamily::new(vs.iter().map(SparseVector::from).collect());
        let factors = w
            .factors
            .iter()
            .map(|f| match f {
                FactorWire::Flip(vs) => family(vs).map(Reflection::Flip),
                FactorWire::Span { span } => family(span).map(Reflection::Span),
            })
            .collect::<hilbert_ortho::Result<Vec<_>>>()?;
        ReflectionWord::new(w.n, factors)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EuclidWire {
    pub shift: VectorWire,
    pub rotor: OperatorWire,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub word: Option<WordWire>,
}

impl From<&EuclidElement> for EuclidWire {
    fn from(g: &EuclidElement) -> Self {
        Self {
            shift: (&g.shift).into(),
            rotor: (&g.rotor).into(),
            word: g.word.as_ref().map(WordWire::from),
        }
    }
}

impl TryFrom<&EuclidWire> for EuclidElement {
    type Error = hilbert_ortho::Error;

    /// When a word is present the rotor is rebuilt from it.
    fn try_from(w: &EuclidWire) -> hilbert_ortho::Result<Self> {
        let shift = SparseVector::from(&w.shift);
        match &w.word {
            Some(word) => Ok(EuclidElement::from_word(shift, word.try_into()?)),
            None => Ok(EuclidElement::new(shift, (&w.rotor).try_into()?)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleWire {
    pub t: f64,
    pub point: VectorWire,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathWire {
    pub samples: Vec<SampleWire>,
}

impl From<&HomotopyPath> for PathWire {
    fn from(path: &HomotopyPath) -> Self {
        Self {
            samples: path
                .samples
                .iter()
                .map(|s| SampleWire { t: s.t, point: s.point.vector().into() })
                .collect(),
        }
    }
}

impl TryFrom<&PathWire> for HomotopyPath {
    type Error = hilbert_ortho::Error;

    fn try_from(w: &PathWire) -> hilbert_ortho::Result<Self> {
        let samples = w
            .samples
            .iter()
            .map(|s| Ok(PathSample { t: s.t, point: SpherePoint::new((&s.point).into())? }))
            .collect::<hilbert_ortho::Result<Vec<_>>>()?;
        Ok(HomotopyPath { samples })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrivializationWire {
    pub base: VectorWire,
    pub fibre: MatrixWire,
}

impl From<&TrivializationResult> for TrivializationWire {
    fn from(r: &TrivializationResult) -> Self {
        Self { base: r.base.vector().into(), fibre: (&r.fibre).into() }
    }
}

impl TryFrom<&TrivializationWire> for TrivializationResult {
    type Error = hilbert_ortho::Error;

    fn try_from(w: &TrivializationWire) -> hilbert_ortho::Result<Self> {
        Ok(TrivializationResult {
            base: SpherePoint::new((&w.base).into())?,
            fibre: (&w.fibre).try_into()?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use hilbert_ortho::sample;

    fn round_trip<W: Serialize + for<'de> Deserialize<'de>>(w: &W) -> W {
        serde_json::from_str(&serde_json::to_string(w).unwrap()).unwrap()
    }

    #[test]
    fn vector_shape() {
        let v = SparseVector::from_pairs([(0, 1.5), (12, -0.25)]);
        let json = serde_json::to_string(&VectorWire::from(&v)).unwrap();
        assert_eq!(json, r#"{"entries":{"0":1.5,"12":-0.25}}"#);
        assert_eq!(SparseVector::from(&round_trip(&VectorWire::from(&v))), v);
    }

    #[test]
    fn floats_survive_exactly() {
        let v = SparseVector::from_pairs([(3, 0.1 + 0.2), (4, 1.0 / 3.0), (5, 6.02e-23)]);
        assert_eq!(SparseVector::from(&round_trip(&VectorWire::from(&v))), v);
    }

    #[test]
    fn operator_round_trip() {
        let mut rng = sample::rng(1, 0);
        for _ in 0..50 {
            let op = sample::random_operator(&mut rng, 6);
            let back = GOperator::try_from(&round_trip(&OperatorWire::from(&op))).unwrap();
            assert_eq!(back, op);
        }
    }

    #[test]
    fn operator_shape() {
        let json = serde_json::to_value(OperatorWire::from(&GOperator::negative_identity())).unwrap();
        assert_eq!(
            json,
            serde_json::json!({"sign": {"mode": "cofinite", "indices": []}, "block": {"basis": [], "matrix": []}})
        );
    }

    #[test]
    fn word_round_trip_with_both_factor_kinds() {
        let mut rng = sample::rng(2, 0);
        for _ in 0..20 {
            let word = sample::random_word(&mut rng, 5, 4);
            let back = ReflectionWord::try_from(&round_trip(&WordWire::from(&word))).unwrap();
            assert_eq!(back, word);
        }
        let span: WordWire = serde_json::from_str(r#"{"n":2,"factors":[{"span":[{"entries":{"1":1.0}}]}]}"#).unwrap();
        let word = ReflectionWord::try_from(&span).unwrap();
        assert!(matches!(word.factors()[0], Reflection::Span(_)));
    }

    #[test]
    fn word_outside_its_dimension_is_rejected() {
        let w: WordWire = serde_json::from_str(r#"{"n":2,"factors":[[{"entries":{"4":1.0}}]]}"#).unwrap();
        assert!(ReflectionWord::try_from(&w).is_err());
    }

    #[test]
    fn matrix_shape_checks() {
        let ragged = MatrixWire { n: 2, rows: vec![vec![1.0, 0.0], vec![0.0]] };
        assert!(ragged.to_dense().is_err());
        let short = MatrixWire { n: 3, rows: vec![vec![1.0, 0.0, 0.0]] };
        assert!(short.to_dense().is_err());
        let skew = MatrixWire { n: 2, rows: vec![vec![1.0, 1.0], vec![0.0, 1.0]] };
        assert!(matches!(
            DenseOrthoMatrix::try_from(&skew),
            Err(hilbert_ortho::Error::NotOrthogonal { .. })
        ));
    }

    #[test]
    fn euclid_round_trip() {
        let mut rng = sample::rng(3, 0);
        let plain = EuclidElement::new(sample::random_vector(&mut rng, 5, 3), sample::random_operator(&mut rng, 5));
        let back = EuclidElement::try_from(&round_trip(&EuclidWire::from(&plain))).unwrap();
        assert_eq!(back, plain);
        assert!(!serde_json::to_string(&EuclidWire::from(&plain)).unwrap().contains("word"));

        let worded = EuclidElement::from_word(SparseVector::basis(2), sample::random_word(&mut rng, 4, 3));
        let back = EuclidElement::try_from(&round_trip(&EuclidWire::from(&worded))).unwrap();
        assert_eq!(back.word, worded.word);
        assert!(back.approx_eq(&worded, 1e-12));
    }

    #[test]
    fn path_and_trivialization_round_trip() {
        let mut rng = sample::rng(4, 0);
        let x = sample::random_unit_vector(&mut rng, 4);
        let path = hilbert_ortho::contract_path(&x, 9).unwrap();
        assert_eq!(HomotopyPath::try_from(&round_trip(&PathWire::from(&path))).unwrap(), path);

        let a = sample::random_dense_orthogonal(&mut rng, 3);
        let t = hilbert_ortho::trivialize(2, &a).unwrap();
        let back = TrivializationResult::try_from(&round_trip(&TrivializationWire::from(&t))).unwrap();
        assert_eq!(back, t);
    }
}
