//! Semantic axes built from pole-sentence embedding differences.
//!
//! An axis is `embed(positive) - embed(negative)`. The default set has five
//! axes in a fixed order (responsibility, emotion, public benefit,
//! consequence, personal benefit); that order is the column order of every
//! feature vector. The fairness vector is the plain sum of the axes.

use std::collections::HashSet;
use std::fs::File;
use std::io::{BufReader, Read};
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::embedding_io::EmbeddingStore;
use crate::error::{Error, Result};
use crate::vecmath::RealVector;

const DEFAULT_AXES_JSON: &str = include_str!("../data/axes_default.json");

pub const BASELINE_NAME: &str = "fairness-baseline";
pub const BASELINE_POSITIVE: &str = "it was fair";
pub const BASELINE_NEGATIVE: &str = "it was unfair";

/// Two opposed sentences naming one psychological dimension.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolePair {
    pub name: String,
    pub positive: String,
    pub negative: String,
}

impl PolePair {
    pub fn new(
        name: impl Into<String>,
        positive: impl Into<String>,
        negative: impl Into<String>,
    ) -> Result<Self> {
        let pole = Self {
            name: name.into(),
            positive: positive.into(),
            negative: negative.into(),
        };
        pole.validate()?;
        Ok(pole)
    }

    fn validate(&self) -> Result<()> {
        if self.name.trim().is_empty() {
            return Err(Error::Config("pole pair has an empty name".into()));
        }
        if self.positive.trim().is_empty() || self.negative.trim().is_empty() {
            return Err(Error::Config(format!(
                "pole pair {:?} has an empty sentence",
                self.name
            )));
        }
        if self.positive == self.negative {
            return Err(Error::Config(format!(
                "pole pair {:?} uses the same sentence on both sides",
                self.name
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DimensionAxis {
    pub pole: PolePair,
    pub axis: RealVector,
}

impl DimensionAxis {
    /// Wraps an existing direction. Fails on a zero vector.
    pub fn from_parts(pole: PolePair, axis: RealVector) -> Result<Self> {
        if axis.norm() == 0.0 {
            return Err(Error::ZeroNorm(format!(
                "axis {:?}: {:?} and {:?} have identical embeddings",
                pole.name, pole.positive, pole.negative
            )));
        }
        Ok(Self { pole, axis })
    }

    pub fn name(&self) -> &str {
        &self.pole.name
    }
}

/// An ordered, non-empty list of axes sharing one dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct AxisSet {
    axes: Vec<DimensionAxis>,
}

impl AxisSet {
    pub fn new(axes: Vec<DimensionAxis>) -> Result<Self> {
        let first = axes
            .first()
            .ok_or_else(|| Error::Config("axis set is empty".into()))?;
        let dimension = first.axis.dimension();
        let mut names = HashSet::new();
        for axis in &axes {
            if axis.axis.dimension() != dimension {
                return Err(Error::DimensionMismatch {
                    expected: dimension,
                    found: axis.axis.dimension(),
                });
            }
            if !names.insert(axis.name().to_string()) {
                return Err(Error::Config(format!(
                    "duplicate axis name {:?}",
                    axis.name()
                )));
            }
        }
        Ok(Self { axes })
    }

    pub fn axes(&self) -> &[DimensionAxis] {
        &self.axes
    }

    pub fn len(&self) -> usize {
        self.axes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.axes.is_empty()
    }

    pub fn dimension(&self) -> usize {
        self.axes[0].axis.dimension()
    }

    pub fn names(&self) -> Vec<&str> {
        self.axes.iter().map(|a| a.name()).collect()
    }

    pub fn vectors(&self) -> impl Iterator<Item = &RealVector> {
        self.axes.iter().map(|a| &a.axis)
    }

    /// Each axis scaled to unit length. Not the default: summing raw
    /// differences is what the fairness vector is defined as.
    pub fn unit_normalized(&self) -> Result<AxisSet> {
        let axes = self
            .axes
            .iter()
            .map(|a| DimensionAxis::from_parts(a.pole.clone(), a.axis.normalized()?))
            .collect::<Result<Vec<_>>>()?;
        AxisSet::new(axes)
    }

    /// SHA-256 over pole wordings and the exact bits of every axis component.
    pub fn checksum(&self) -> String {
        let mut hasher = Sha256::new();
        for axis in &self.axes {
            for part in [&axis.pole.name, &axis.pole.positive, &axis.pole.negative] {
                hasher.update(part.as_bytes());
                hasher.update([0u8]);
            }
            for v in axis.axis.iter() {
                hasher.update(v.to_le_bytes());
            }
        }
        hex::encode(hasher.finalize())
    }
}

/// `embed(positive) - embed(negative)`.
pub fn build_axis(pole: &PolePair, store: &EmbeddingStore) -> Result<DimensionAxis> {
    pole.validate()?;
    let positive = store.lookup(&pole.positive)?;
    let negative = store.lookup(&pole.negative)?;
    DimensionAxis::from_parts(pole.clone(), positive.checked_sub(negative)?)
}

pub fn build_axis_set(poles: &[PolePair], store: &EmbeddingStore) -> Result<AxisSet> {
    AxisSet::new(
        poles
            .iter()
            .map(|p| build_axis(p, store))
            .collect::<Result<Vec<_>>>()?,
    )
}

/// The five default pole pairs, in canonical order.
pub fn default_pole_pairs() -> Vec<PolePair> {
    parse_pole_pairs(DEFAULT_AXES_JSON).expect("bundled axis config is valid")
}

pub fn default_axis_set(store: &EmbeddingStore) -> Result<AxisSet> {
    build_axis_set(&default_pole_pairs(), store)
}

/// Parses an axis config: a JSON array of `{"name", "positive", "negative"}`.
pub fn parse_pole_pairs(json: &str) -> Result<Vec<PolePair>> {
    let poles: Vec<PolePair> = serde_json::from_str(json)?;
    check_pole_list(&poles)?;
    Ok(poles)
}

pub fn read_pole_pairs<R: Read>(source: R) -> Result<Vec<PolePair>> {
    let poles: Vec<PolePair> = serde_json::from_reader(source)?;
    check_pole_list(&poles)?;
    Ok(poles)
}

pub fn load_pole_pairs(path: impl AsRef<Path>) -> Result<Vec<PolePair>> {
    let file = File::open(path.as_ref())
        .map_err(|e| std::io::Error::new(e.kind(), format!("{}: {e}", path.as_ref().display())))?;
    read_pole_pairs(BufReader::new(file))
}

fn check_pole_list(poles: &[PolePair]) -> Result<()> {
    if poles.is_empty() {
        return Err(Error::Config("axis config lists no pole pairs".into()));
    }
    let mut names = HashSet::new();
    for pole in poles {
        pole.validate()?;
        if !names.insert(pole.name.as_str()) {
            return Err(Error::Config(format!(
                "duplicate axis name {:?}",
                pole.name
            )));
        }
    }
    Ok(())
}

/// Sum of every axis vector, accumulated in axis order. No normalization.
pub fn compose_fairness_vector(axes: &AxisSet) -> RealVector {
    let mut sum = vec![0.0; axes.dimension()];
    for axis in axes.vectors() {
        for (s, v) in sum.iter_mut().zip(axis.iter()) {
            *s += v;
        }
    }
    RealVector::new(sum).expect("sum of finite axes is finite")
}

pub fn baseline_pole() -> PolePair {
    PolePair::new(BASELINE_NAME, BASELINE_POSITIVE, BASELINE_NEGATIVE).expect("valid baseline")
}

/// `embed("it was fair") - embed("it was unfair")`.
pub fn baseline_axis(store: &EmbeddingStore) -> Result<DimensionAxis> {
    build_axis(&baseline_pole(), store)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedding_io::{EmbeddingManifest, EmbeddingRecord};

    fn store(entries: &[(&str, &[f64])]) -> EmbeddingStore {
        let dim = entries[0].1.len();
        EmbeddingStore::new(
            EmbeddingManifest::new("test", dim),
            entries
                .iter()
                .map(|(t, v)| EmbeddingRecord::new(*t, RealVector::new(v.to_vec()).unwrap()))
                .collect(),
        )
        .unwrap()
    }

    fn axis(name: &str, v: &[f64]) -> DimensionAxis {
        DimensionAxis::from_parts(
            PolePair::new(name, format!("{name}+"), format!("{name}-")).unwrap(),
            RealVector::new(v.to_vec()).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn bundled_config_has_five_axes_in_order() {
        let poles = default_pole_pairs();
        let names: Vec<_> = poles.iter().map(|p| p.name.as_str()).collect();
        assert_eq!(
            names,
            [
                "responsibility",
                "emotion",
                "public-benefit",
                "consequence",
                "personal-benefit"
            ]
        );
        assert_eq!(poles[0].positive, "it was very responsible");
        assert_eq!(poles[0].negative, "it was very irresponsible");
        assert_eq!(poles[1].positive, "it was joyous");
        assert_eq!(poles[1].negative, "it was sad");
        assert_eq!(poles[2].positive, "it was beneficial to society");
        assert_eq!(poles[2].negative, "it was not beneficial to society");
        assert_eq!(poles[3].positive, "was free to and rewarded");
        assert_eq!(poles[3].negative, "was sent to prison and punished");
        assert_eq!(poles[4].positive, "it was beneficial");
        assert_eq!(poles[4].negative, "it was harmful");
    }

    #[test]
    fn build_axis_subtracts() {
        let s = store(&[("up", &[3.0, 1.0]), ("down", &[1.0, 2.0])]);
        let a = build_axis(&PolePair::new("x", "up", "down").unwrap(), &s).unwrap();
        assert_eq!(a.axis.as_slice(), &[2.0, -1.0]);
    }

    #[test]
    fn identical_embeddings_give_zero_norm_error() {
        let s = store(&[("it was sad", &[1.0, 2.0]), ("it was glum", &[1.0, 2.0])]);
        let err = build_axis(
            &PolePair::new("e", "it was sad", "it was glum").unwrap(),
            &s,
        )
        .unwrap_err();
        assert!(matches!(err, Error::ZeroNorm(_)));
    }

    #[test]
    fn missing_pole_sentence() {
        let s = store(&[("it was joyous", &[1.0])]);
        let err = build_axis(
            &PolePair::new("e", "it was joyous", "it was sad").unwrap(),
            &s,
        )
        .unwrap_err();
        assert!(matches!(err, Error::MissingSentence(t) if t == "it was sad"));
    }

    #[test]
    fn identical_pole_texts_are_rejected() {
        assert!(PolePair::new("x", "same", "same").is_err());
        assert!(PolePair::new("x", "", "b").is_err());
    }

    #[test]
    fn custom_config_with_three_pairs() {
        let json = r#"[
            {"name": "a", "positive": "p1", "negative": "n1"},
            {"name": "b", "positive": "p2", "negative": "n2"},
            {"name": "c", "positive": "p3", "negative": "n3"}
        ]"#;
        let poles = parse_pole_pairs(json).unwrap();
        let s = store(&[
            ("p1", &[1.0, 0.0]),
            ("n1", &[0.0, 0.0]),
            ("p2", &[0.0, 1.0]),
            ("n2", &[0.0, 0.0]),
            ("p3", &[1.0, 1.0]),
            ("n3", &[0.0, 0.0]),
        ]);
        let set = build_axis_set(&poles, &s).unwrap();
        assert_eq!(set.len(), 3);
        assert_eq!(set.names(), ["a", "b", "c"]);
    }

    #[test]
    fn config_rejects_duplicates_and_empty() {
        assert!(parse_pole_pairs("[]").is_err());
        let dup = r#"[{"name":"a","positive":"p","negative":"n"},{"name":"a","positive":"q","negative":"m"}]"#;
        assert!(matches!(parse_pole_pairs(dup), Err(Error::Config(_))));
    }

    #[test]
    fn compose_matches_independent_sum() {
        let set = AxisSet::new(vec![
            axis("a", &[1.0, 2.0, 3.0]),
            axis("b", &[-0.5, 0.25, 4.0]),
            axis("c", &[2.0, -3.0, 0.125]),
        ])
        .unwrap();
        let v = compose_fairness_vector(&set);
        assert_eq!(v.as_slice(), &[2.5, -0.75, 7.125]);
    }

    #[test]
    fn compose_single_axis_is_identity() {
        let set = AxisSet::new(vec![axis("a", &[0.3, -0.7])]).unwrap();
        assert_eq!(compose_fairness_vector(&set).as_slice(), &[0.3, -0.7]);
    }

    #[test]
    fn axis_set_rejects_mixed_dimensions_and_duplicate_names() {
        assert!(AxisSet::new(vec![]).is_err());
        assert!(AxisSet::new(vec![axis("a", &[1.0]), axis("b", &[1.0, 2.0])]).is_err());
        assert!(AxisSet::new(vec![axis("a", &[1.0]), axis("a", &[2.0])]).is_err());
    }

    #[test]
    fn baseline_equals_generic_construction() {
        let s = store(&[("it was fair", &[1.0, 5.0]), ("it was unfair", &[2.0, 1.0])]);
        let direct = baseline_axis(&s).unwrap();
        let generic = build_axis(
            &PolePair::new("fairness-baseline", "it was fair", "it was unfair").unwrap(),
            &s,
        )
        .unwrap();
        assert_eq!(direct, generic);
        let missing = store(&[("it was fair", &[1.0])]);
        assert!(
            matches!(baseline_axis(&missing), Err(Error::MissingSentence(t)) if t == "it was unfair")
        );
    }

    #[test]
    fn unit_normalized_axes() {
        let set = AxisSet::new(vec![axis("a", &[3.0, 4.0])]).unwrap();
        let unit = set.unit_normalized().unwrap();
        assert!((unit.axes()[0].axis.norm() - 1.0).abs() < 1e-15);
        assert_ne!(set.checksum(), unit.checksum());
    }
}
