//! Scalar scoring against a single direction, and per-axis feature vectors.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::axes::AxisSet;
use crate::corpus::{Label, LabeledCorpus};
use crate::embedding_io::EmbeddingStore;
use crate::error::{Error, Result};
use crate::vecmath::{cosine_similarity, RealVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScoreMethod {
    /// Cosine with the sum of all axes.
    FairnessVector,
    /// Cosine with `embed("it was fair") - embed("it was unfair")`.
    BaselineVector,
}

impl ScoreMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            ScoreMethod::FairnessVector => "fairness_vector",
            ScoreMethod::BaselineVector => "baseline_vector",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FairnessScore {
    pub text: String,
    pub score: f64,
    pub method: ScoreMethod,
}

impl FairnessScore {
    pub fn classify(&self, threshold: f64) -> Label {
        classify(self.score, threshold)
    }
}

/// Fair iff `score > threshold`; a tie is Unfair.
pub fn classify(score: f64, threshold: f64) -> Label {
    Label::from_bool(score > threshold)
}

/// Cosine between the sentence embedding and `axis`.
pub fn score_sentence(
    text: &str,
    axis: &RealVector,
    store: &EmbeddingStore,
    method: ScoreMethod,
) -> Result<FairnessScore> {
    let embedding = store.lookup(text)?;
    let score = cosine_similarity(embedding, axis).map_err(|e| match e {
        Error::ZeroNorm(_) => Error::ZeroNorm(format!("scoring {text:?}: zero-norm operand")),
        other => other,
    })?;
    Ok(FairnessScore {
        text: text.to_string(),
        score,
        method,
    })
}

/// Per-axis cosines of one sentence, in the axis set's order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FeatureVector {
    pub text: String,
    pub components: Vec<f64>,
}

pub fn feature_vector(text: &str, axes: &AxisSet, store: &EmbeddingStore) -> Result<FeatureVector> {
    let embedding = store.lookup(text)?;
    let components = axes
        .vectors()
        .map(|axis| cosine_similarity(embedding, axis))
        .collect::<Result<Vec<_>>>()?;
    Ok(FeatureVector {
        text: text.to_string(),
        components,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LabeledFeatureRow {
    pub index: usize,
    pub feature: FeatureVector,
    pub label: Label,
}

/// One row per corpus sentence, in corpus order. Stops at the first sentence
/// missing from the store.
pub fn build_dataset(
    corpus: &LabeledCorpus,
    axes: &AxisSet,
    store: &EmbeddingStore,
) -> Result<Vec<LabeledFeatureRow>> {
    corpus
        .sentences()
        .iter()
        .enumerate()
        .map(|(index, s)| {
            Ok(LabeledFeatureRow {
                index,
                feature: feature_vector(&s.text, axes, store)?,
                label: s.label,
            })
        })
        .collect()
}

/// CSV `text,method,score,label_predicted`.
pub fn write_scores_csv<W: Write>(scores: &[FairnessScore], threshold: f64, sink: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(["text", "method", "score", "label_predicted"])?;
    for s in scores {
        w.write_record([
            s.text.as_str(),
            s.method.as_str(),
            &s.score.to_string(),
            s.classify(threshold).as_str(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// CSV `text,label,f1,...,fN` with one column per axis.
pub fn write_features_csv<W: Write>(rows: &[LabeledFeatureRow], sink: W) -> Result<()> {
    let width = rows.first().map_or(0, |r| r.feature.components.len());
    let mut w = csv::Writer::from_writer(sink);
    let mut header = vec!["text".to_string(), "label".to_string()];
    header.extend((1..=width).map(|i| format!("f{i}")));
    w.write_record(&header)?;
    for row in rows {
        let mut record = vec![row.feature.text.clone(), row.label.to_string()];
        record.extend(row.feature.components.iter().map(|c| c.to_string()));
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axes::{DimensionAxis, PolePair};
    use crate::corpus::load_corpus;
    use crate::embedding_io::{EmbeddingManifest, EmbeddingRecord};

    fn rv(v: &[f64]) -> RealVector {
        RealVector::new(v.to_vec()).unwrap()
    }

    fn store(entries: &[(&str, &[f64])]) -> EmbeddingStore {
        EmbeddingStore::new(
            EmbeddingManifest::new("test", entries[0].1.len()),
            entries
                .iter()
                .map(|(t, v)| EmbeddingRecord::new(*t, rv(v)))
                .collect(),
        )
        .unwrap()
    }

    fn axes(vs: &[&[f64]]) -> AxisSet {
        AxisSet::new(
            vs.iter()
                .enumerate()
                .map(|(i, v)| {
                    DimensionAxis::from_parts(
                        PolePair::new(format!("a{i}"), format!("p{i}"), format!("n{i}")).unwrap(),
                        rv(v),
                    )
                    .unwrap()
                })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn classify_threshold_and_tie() {
        assert_eq!(classify(0.3, 0.0), Label::Fair);
        assert_eq!(classify(-0.2, 0.0), Label::Unfair);
        assert_eq!(classify(0.0, 0.0), Label::Unfair);
    }

    #[test]
    fn sentence_equal_to_axis_scores_one() {
        let s = store(&[("x", &[0.2, -0.4, 1.0])]);
        let score =
            score_sentence("x", &rv(&[0.2, -0.4, 1.0]), &s, ScoreMethod::FairnessVector).unwrap();
        assert!((score.score - 1.0).abs() < 1e-15);
    }

    #[test]
    fn score_errors() {
        let s = store(&[("x", &[1.0, 0.0])]);
        assert!(matches!(
            score_sentence("y", &rv(&[1.0, 0.0]), &s, ScoreMethod::FairnessVector),
            Err(Error::MissingSentence(_))
        ));
        assert!(matches!(
            score_sentence("x", &rv(&[0.0, 0.0]), &s, ScoreMethod::FairnessVector),
            Err(Error::ZeroNorm(_))
        ));
    }

    #[test]
    fn feature_components_follow_axis_order() {
        let set = axes(&[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[1.0, 1.0, 0.0]]);
        let s = store(&[("orth", &[0.0, 0.0, 5.0]), ("along", &[0.0, 2.0, 0.0])]);
        let f = feature_vector("orth", &set, &s).unwrap();
        assert_eq!(f.components, vec![0.0, 0.0, 0.0]);
        let f = feature_vector("along", &set, &s).unwrap();
        assert_eq!(f.components[1], 1.0);
        assert!((f.components[2] - 0.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn dataset_preserves_order_and_labels() {
        let set = axes(&[&[1.0, 0.0], &[0.0, 1.0]]);
        let s = store(&[("a", &[1.0, 1.0]), ("b", &[-1.0, 0.5])]);
        let corpus = load_corpus("t", "text,label\nb,unfair\na,fair\n".as_bytes()).unwrap();
        let rows = build_dataset(&corpus, &set, &s).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(
            (rows[0].index, rows[0].feature.text.as_str(), rows[0].label),
            (0, "b", Label::Unfair)
        );
        assert_eq!(rows[1].label, Label::Fair);

        let empty = load_corpus("e", "text,label\n".as_bytes()).unwrap();
        assert!(build_dataset(&empty, &set, &s).unwrap().is_empty());

        let missing = load_corpus("m", "text,label\na,fair\nzzz,unfair\n".as_bytes()).unwrap();
        assert!(
            matches!(build_dataset(&missing, &set, &s), Err(Error::MissingSentence(t)) if t == "zzz")
        );
    }

    #[test]
    fn csv_outputs_have_expected_headers() {
        let scores = vec![FairnessScore {
            text: "Tom, who smiled".into(),
            score: 0.25,
            method: ScoreMethod::BaselineVector,
        }];
        let mut buf = Vec::new();
        write_scores_csv(&scores, 0.0, &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "text,method,score,label_predicted\n\"Tom, who smiled\",baseline_vector,0.25,fair\n"
        );

        let rows = vec![LabeledFeatureRow {
            index: 0,
            feature: FeatureVector {
                text: "a".into(),
                components: vec![0.5, -0.25],
            },
            label: Label::Fair,
        }];
        let mut buf = Vec::new();
        write_features_csv(&rows, &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "text,label,f1,f2\na,fair,0.5,-0.25\n"
        );
    }
}
