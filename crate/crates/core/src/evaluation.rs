//! Metrics, the two classification pipelines and the sentiment comparison.

use std::collections::HashMap;
use std::fmt;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::axes::{baseline_axis, compose_fairness_vector, AxisSet};
use crate::corpus::{Label, LabelCounts, LabeledCorpus};
use crate::embedding_io::{normalize_text, EmbeddingStore};
use crate::error::{Error, Result};
use crate::ml::{
    logreg_fit, logreg_predict, pca_fit, pca_transform, stratified_split, LogRegConfig, PcaTarget,
    Prediction, SplitSpec, TrainingMeta,
};
use crate::scoring::{
    build_dataset, classify, score_sentence, FairnessScore, LabeledFeatureRow, ScoreMethod,
};
use crate::vecmath::{pearson_correlation, RealVector};

/// Two-class confusion counts with Fair as the positive class.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub true_fair_pred_fair: usize,
    pub true_unfair_pred_fair: usize,
    pub true_fair_pred_unfair: usize,
    pub true_unfair_pred_unfair: usize,
}

impl ConfusionMatrix {
    pub fn total(&self) -> usize {
        self.true_fair_pred_fair
            + self.true_unfair_pred_fair
            + self.true_fair_pred_unfair
            + self.true_unfair_pred_unfair
    }

    pub fn accuracy(&self) -> f64 {
        let total = self.total();
        if total == 0 {
            return 0.0;
        }
        (self.true_fair_pred_fair + self.true_unfair_pred_unfair) as f64 / total as f64
    }
}

/// Rows are predictions, columns the actual class.
impl fmt::Display for ConfusionMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:<14}{:>14}{:>16}", "", "actual fair", "actual unfair")?;
        writeln!(
            f,
            "{:<14}{:>14}{:>16}",
            "pred fair", self.true_fair_pred_fair, self.true_unfair_pred_fair
        )?;
        write!(
            f,
            "{:<14}{:>14}{:>16}",
            "pred unfair", self.true_fair_pred_unfair, self.true_unfair_pred_unfair
        )
    }
}

pub fn confusion(predictions: &[Label], truth: &[Label]) -> Result<ConfusionMatrix> {
    if predictions.len() != truth.len() {
        return Err(Error::LengthMismatch {
            left: predictions.len(),
            right: truth.len(),
        });
    }
    if truth.is_empty() {
        return Err(Error::TooFewItems {
            needed: 1,
            found: 0,
        });
    }
    let mut m = ConfusionMatrix::default();
    for (p, t) in predictions.iter().zip(truth) {
        match (t, p) {
            (Label::Fair, Label::Fair) => m.true_fair_pred_fair += 1,
            (Label::Unfair, Label::Fair) => m.true_unfair_pred_fair += 1,
            (Label::Fair, Label::Unfair) => m.true_fair_pred_unfair += 1,
            (Label::Unfair, Label::Unfair) => m.true_unfair_pred_unfair += 1,
        }
    }
    Ok(m)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    /// Set when any ratio was 0/0 and replaced by 0.
    pub degenerate: bool,
}

pub fn f1_score(m: &ConfusionMatrix) -> Metrics {
    let tp = m.true_fair_pred_fair as f64;
    let fp = m.true_unfair_pred_fair as f64;
    let fn_ = m.true_fair_pred_unfair as f64;
    let mut degenerate = false;
    let mut ratio = |num: f64, den: f64| {
        if den == 0.0 {
            degenerate = true;
            0.0
        } else {
            num / den
        }
    };
    let precision = ratio(tp, tp + fp);
    let recall = ratio(tp, tp + fn_);
    let f1 = ratio(2.0 * precision * recall, precision + recall);
    Metrics {
        precision,
        recall,
        f1,
        degenerate,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EvalMethod {
    FairnessVector,
    BaselineVector,
    PcaLogisticRegression,
}

impl EvalMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            EvalMethod::FairnessVector => "fairness_vector",
            EvalMethod::BaselineVector => "baseline_vector",
            EvalMethod::PcaLogisticRegression => "pca_logistic_regression",
        }
    }
}

impl From<ScoreMethod> for EvalMethod {
    fn from(m: ScoreMethod) -> Self {
        match m {
            ScoreMethod::FairnessVector => EvalMethod::FairnessVector,
            ScoreMethod::BaselineVector => EvalMethod::BaselineVector,
        }
    }
}

/// Everything needed to rerun the evaluation that produced a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunEcho {
    pub model_id: String,
    pub embedding_dimension: usize,
    pub axis_names: Vec<String>,
    pub axis_checksum: String,
    pub corpus_name: String,
    pub corpus_checksum: String,
    pub corpus_counts: LabelCounts,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threshold: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub split: Option<SplitSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pca_variance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub logreg: Option<LogRegConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PcaSummary {
    pub n_components: usize,
    pub explained_variance_ratio: Vec<f64>,
    pub full_variance_ratio: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub method: EvalMethod,
    pub evaluated: usize,
    pub matrix: ConfusionMatrix,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub degenerate: bool,
    pub config: RunEcho,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub train_indices: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub test_indices: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pca: Option<PcaSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub training: Option<TrainingMeta>,
}

impl EvalReport {
    fn new(method: EvalMethod, matrix: ConfusionMatrix, config: RunEcho) -> Self {
        let m = f1_score(&matrix);
        Self {
            method,
            evaluated: matrix.total(),
            matrix,
            precision: m.precision,
            recall: m.recall,
            f1: m.f1,
            degenerate: m.degenerate,
            config,
            train_indices: None,
            test_indices: None,
            pca: None,
            training: None,
        }
    }

    pub fn to_json_pretty(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

fn echo(corpus: &LabeledCorpus, store: &EmbeddingStore, axes: &AxisSet) -> RunEcho {
    RunEcho {
        model_id: store.model_id().to_string(),
        embedding_dimension: store.dimension(),
        axis_names: axes.names().into_iter().map(String::from).collect(),
        axis_checksum: axes.checksum(),
        corpus_name: corpus.name().to_string(),
        corpus_checksum: corpus.checksum().to_string(),
        corpus_counts: corpus.counts(),
        threshold: None,
        split: None,
        pca_variance: None,
        logreg: None,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Approach1Outcome {
    pub report: EvalReport,
    pub scores: Vec<FairnessScore>,
}

/// The direction a score method compares sentences against.
pub fn scoring_direction(
    axes: &AxisSet,
    store: &EmbeddingStore,
    method: ScoreMethod,
) -> Result<RealVector> {
    match method {
        ScoreMethod::FairnessVector => Ok(compose_fairness_vector(axes)),
        ScoreMethod::BaselineVector => Ok(baseline_axis(store)?.axis),
    }
}

/// Scores each corpus sentence against `direction`.
pub fn score_corpus(
    corpus: &LabeledCorpus,
    store: &EmbeddingStore,
    direction: &RealVector,
    method: ScoreMethod,
) -> Result<Vec<FairnessScore>> {
    corpus
        .sentences()
        .iter()
        .map(|s| score_sentence(&s.text, direction, store, method))
        .collect()
}

/// Scores every sentence and classifies it as Fair iff `score > threshold`.
/// Both methods share this path and differ only in the direction.
pub fn run_approach1(
    corpus: &LabeledCorpus,
    store: &EmbeddingStore,
    axes: &AxisSet,
    method: ScoreMethod,
    threshold: f64,
) -> Result<Approach1Outcome> {
    let direction = scoring_direction(axes, store, method)?;
    let scores = score_corpus(corpus, store, &direction, method)?;
    let predictions: Vec<Label> = scores
        .iter()
        .map(|s| classify(s.score, threshold))
        .collect();
    let matrix = confusion(&predictions, &corpus.labels())?;
    let mut config = echo(corpus, store, axes);
    config.threshold = Some(threshold);
    Ok(Approach1Outcome {
        report: EvalReport::new(method.into(), matrix, config),
        scores,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Approach2Outcome {
    pub report: EvalReport,
    /// `(corpus index, prediction)` for each test row.
    pub predictions: Vec<(usize, Prediction)>,
}

/// Split, PCA fitted on the training rows, logistic regression on the
/// projected training rows, evaluation on the held-out rows.
pub fn run_approach2(
    corpus: &LabeledCorpus,
    store: &EmbeddingStore,
    axes: &AxisSet,
    split: &SplitSpec,
    pca_variance: f64,
    logreg: &LogRegConfig,
) -> Result<Approach2Outcome> {
    let rows = build_dataset(corpus, axes, store)?;
    let mut outcome = approach2_on_rows(&rows, split, pca_variance, logreg)?;
    let config = &mut outcome.report.config;
    *config = RunEcho {
        split: config.split,
        pca_variance: config.pca_variance,
        logreg: config.logreg,
        ..echo(corpus, store, axes)
    };
    Ok(outcome)
}

/// Approach 2 over a prebuilt dataset. The report's provenance fields other
/// than the split, PCA and classifier settings are left empty.
pub fn approach2_on_rows(
    rows: &[LabeledFeatureRow],
    split: &SplitSpec,
    pca_variance: f64,
    logreg: &LogRegConfig,
) -> Result<Approach2Outcome> {
    let labels: Vec<Label> = rows.iter().map(|r| r.label).collect();
    let partition = stratified_split(&labels, split)?;
    for (side, idx) in [("train", &partition.train), ("test", &partition.test)] {
        for class in Label::ALL {
            if !idx.iter().any(|&i| labels[i] == class) {
                return Err(Error::SingleClass(format!(
                    "{side} partition lacks {class}"
                )));
            }
        }
    }

    let train_x: Vec<&[f64]> = partition
        .train
        .iter()
        .map(|&i| rows[i].feature.components.as_slice())
        .collect();
    let test_x: Vec<&[f64]> = partition
        .test
        .iter()
        .map(|&i| rows[i].feature.components.as_slice())
        .collect();
    // Fitting sees only training rows.
    assert!(
        partition
            .train
            .iter()
            .all(|i| partition.test.binary_search(i).is_err()),
        "train and test partitions overlap"
    );

    let pca = pca_fit(&train_x, PcaTarget::VarianceRetained(pca_variance))?;
    let train_z = pca_transform(&pca, &train_x)?;
    let test_z = pca_transform(&pca, &test_x)?;
    let train_y: Vec<Label> = partition.train.iter().map(|&i| labels[i]).collect();
    let test_y: Vec<Label> = partition.test.iter().map(|&i| labels[i]).collect();

    let model = logreg_fit(&train_z, &train_y, logreg)?;
    let predicted = logreg_predict(&model, &test_z)?;
    let matrix = confusion(
        &predicted.iter().map(|p| p.label).collect::<Vec<_>>(),
        &test_y,
    )?;

    let config = RunEcho {
        model_id: String::new(),
        embedding_dimension: 0,
        axis_names: Vec::new(),
        axis_checksum: String::new(),
        corpus_name: String::new(),
        corpus_checksum: String::new(),
        corpus_counts: LabelCounts::default(),
        threshold: None,
        split: Some(*split),
        pca_variance: Some(pca_variance),
        logreg: Some(*logreg),
    };
    let mut report = EvalReport::new(EvalMethod::PcaLogisticRegression, matrix, config);
    report.pca = Some(PcaSummary {
        n_components: pca.n_components(),
        explained_variance_ratio: pca.explained_variance_ratio.clone(),
        full_variance_ratio: pca.full_variance_ratio.clone(),
    });
    report.training = Some(model.training.clone());
    let predictions = partition.test.iter().copied().zip(predicted).collect();
    report.train_indices = Some(partition.train);
    report.test_indices = Some(partition.test);
    Ok(Approach2Outcome {
        report,
        predictions,
    })
}

/// CSV `text,label,probability_fair,label_predicted` for held-out rows.
pub fn write_predictions_csv<W: Write>(
    corpus: &LabeledCorpus,
    predictions: &[(usize, Prediction)],
    sink: W,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(["text", "label", "probability_fair", "label_predicted"])?;
    for (i, p) in predictions {
        let s = corpus.sentences().get(*i).ok_or(Error::LengthMismatch {
            left: *i,
            right: corpus.len(),
        })?;
        w.write_record([
            s.text.as_str(),
            s.label.as_str(),
            &p.probability_fair.to_string(),
            p.label.as_str(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeedSweep {
    pub seeds: Vec<u64>,
    pub f1: Vec<f64>,
    pub n_components: Vec<usize>,
    pub mean_f1: f64,
    /// Population standard deviation over seeds.
    pub std_f1: f64,
}

/// Approach 2 repeated once per seed over the same dataset.
pub fn approach2_seed_sweep(
    rows: &[LabeledFeatureRow],
    seeds: &[u64],
    test_fraction: f64,
    pca_variance: f64,
    logreg: &LogRegConfig,
) -> Result<SeedSweep> {
    if seeds.is_empty() {
        return Err(Error::TooFewItems {
            needed: 1,
            found: 0,
        });
    }
    let mut f1 = Vec::with_capacity(seeds.len());
    let mut n_components = Vec::with_capacity(seeds.len());
    for &seed in seeds {
        let spec = SplitSpec::new(test_fraction, seed)?;
        let outcome = approach2_on_rows(rows, &spec, pca_variance, logreg)?;
        f1.push(outcome.report.f1);
        n_components.push(outcome.report.pca.as_ref().map_or(0, |p| p.n_components));
    }
    let n = f1.len() as f64;
    let mean_f1 = f1.iter().sum::<f64>() / n;
    let std_f1 = (f1.iter().map(|v| (v - mean_f1).powi(2)).sum::<f64>() / n).sqrt();
    Ok(SeedSweep {
        seeds: seeds.to_vec(),
        f1,
        n_components,
        mean_f1,
        std_f1,
    })
}

/// How well a two-cluster assignment matches the labels, under whichever
/// cluster-to-label mapping agrees more.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClusterAgreement {
    /// Cluster whose members are read as Fair.
    pub fair_cluster: usize,
    pub matrix: ConfusionMatrix,
    pub accuracy: f64,
    pub f1: f64,
}

pub fn cluster_agreement(assignments: &[usize], truth: &[Label]) -> Result<ClusterAgreement> {
    if let Some(&c) = assignments.iter().find(|&&c| c > 1) {
        return Err(Error::Config(format!(
            "agreement needs two clusters, found cluster index {c}"
        )));
    }
    let mut best: Option<ClusterAgreement> = None;
    for fair_cluster in [0, 1] {
        let predicted: Vec<Label> = assignments
            .iter()
            .map(|&c| Label::from_bool(c == fair_cluster))
            .collect();
        let matrix = confusion(&predicted, truth)?;
        let candidate = ClusterAgreement {
            fair_cluster,
            matrix,
            accuracy: matrix.accuracy(),
            f1: f1_score(&matrix).f1,
        };
        if best.is_none_or(|b| candidate.accuracy > b.accuracy) {
            best = Some(candidate);
        }
    }
    Ok(best.expect("two candidates"))
}

/// Compound sentiment per normalized sentence text.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SentimentTable {
    compound: HashMap<String, f64>,
}

impl SentimentTable {
    pub fn len(&self) -> usize {
        self.compound.len()
    }

    pub fn is_empty(&self) -> bool {
        self.compound.is_empty()
    }

    pub fn get(&self, text: &str) -> Option<f64> {
        self.compound.get(&normalize_text(text)).copied()
    }
}

/// Reads a `text,compound` CSV with compound scores in `[-1, 1]`.
pub fn load_sentiment<R: Read>(source: R) -> Result<SentimentTable> {
    #[derive(Deserialize)]
    struct Row {
        text: String,
        compound: f64,
    }
    let mut reader = csv::Reader::from_reader(source);
    let mut compound = HashMap::new();
    for (i, row) in reader.deserialize::<Row>().enumerate() {
        let line = i + 2;
        let row = row.map_err(|e| Error::Malformed {
            line,
            message: e.to_string(),
        })?;
        if !(-1.0..=1.0).contains(&row.compound) {
            return Err(Error::Malformed {
                line,
                message: format!("compound score {} outside [-1, 1]", row.compound),
            });
        }
        let key = normalize_text(&row.text);
        if compound.insert(key, row.compound).is_some() {
            return Err(Error::DuplicateText(row.text));
        }
    }
    Ok(SentimentTable { compound })
}

/// Pearson correlation between fairness scores and compound sentiment,
/// joined on normalized text.
pub fn sentiment_correlation(scores: &[FairnessScore], sentiment: &SentimentTable) -> Result<f64> {
    let fairness: Vec<f64> = scores.iter().map(|s| s.score).collect();
    let compound = scores
        .iter()
        .map(|s| {
            sentiment
                .get(&s.text)
                .ok_or_else(|| Error::MissingSentence(s.text.clone()))
        })
        .collect::<Result<Vec<_>>>()?;
    pearson_correlation(&fairness, &compound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axes::{DimensionAxis, PolePair, BASELINE_NEGATIVE, BASELINE_POSITIVE};
    use crate::corpus::load_corpus;
    use crate::embedding_io::{EmbeddingManifest, EmbeddingRecord};

    fn matrix(tp: usize, fp: usize, fn_: usize, tn: usize) -> ConfusionMatrix {
        ConfusionMatrix {
            true_fair_pred_fair: tp,
            true_unfair_pred_fair: fp,
            true_fair_pred_unfair: fn_,
            true_unfair_pred_unfair: tn,
        }
    }

    #[test]
    fn reported_matrices() {
        let right = f1_score(&matrix(74, 9, 26, 81));
        assert!((right.f1 - 0.8086).abs() < 5e-4, "{}", right.f1);
        let left = f1_score(&matrix(45, 18, 55, 72));
        assert!((left.f1 - 0.5521).abs() < 5e-4, "{}", left.f1);
        assert!(!right.degenerate);
    }

    #[test]
    fn perfect_and_degenerate() {
        let m = f1_score(&matrix(3, 0, 0, 2));
        assert_eq!((m.precision, m.recall, m.f1), (1.0, 1.0, 1.0));
        let m = f1_score(&matrix(0, 0, 0, 5));
        assert!(m.degenerate);
        assert_eq!(m.f1, 0.0);
    }

    #[test]
    fn confusion_cells() {
        use Label::*;
        let truth = [
            Fair, Fair, Fair, Fair, Fair, Fair, Unfair, Unfair, Unfair, Unfair,
        ];
        assert_eq!(confusion(&truth, &truth).unwrap(), matrix(6, 0, 0, 4));
        let inverted: Vec<Label> = truth
            .iter()
            .map(|l| Label::from_bool(!l.is_fair()))
            .collect();
        assert_eq!(confusion(&inverted, &truth).unwrap(), matrix(0, 4, 6, 0));
        assert!(confusion(&[Fair], &[]).is_err());
        assert!(confusion(&[], &[]).is_err());
    }

    #[test]
    fn matrix_display_orientation() {
        let text = matrix(74, 9, 26, 81).to_string();
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines[1].starts_with("pred fair") && lines[1].ends_with("9"));
        assert!(lines[2].trim_end().ends_with("81"));
    }

    fn rv(v: &[f64]) -> RealVector {
        RealVector::new(v.to_vec()).unwrap()
    }

    fn fixture() -> (EmbeddingStore, LabeledCorpus, AxisSet) {
        let entries: Vec<(&str, Vec<f64>)> = vec![
            (BASELINE_POSITIVE, vec![1.0, 0.0, 0.2]),
            (BASELINE_NEGATIVE, vec![-1.0, 0.0, 0.2]),
            ("good", vec![0.9, 0.1, 0.0]),
            ("bad", vec![-0.8, 0.3, 0.1]),
            ("meh", vec![-0.1, 1.0, 0.0]),
        ];
        let store = EmbeddingStore::new(
            EmbeddingManifest::new("toy", 3),
            entries
                .into_iter()
                .map(|(t, v)| EmbeddingRecord::new(t, rv(&v)))
                .collect(),
        )
        .unwrap();
        let corpus = load_corpus(
            "toy",
            "text,label\ngood,fair\nbad,unfair\nmeh,fair\n".as_bytes(),
        )
        .unwrap();
        let axes = AxisSet::new(vec![
            DimensionAxis::from_parts(PolePair::new("x", "p", "n").unwrap(), rv(&[1.0, 0.0, 0.0]))
                .unwrap(),
            DimensionAxis::from_parts(PolePair::new("y", "q", "m").unwrap(), rv(&[0.0, -0.5, 0.0]))
                .unwrap(),
        ])
        .unwrap();
        (store, corpus, axes)
    }

    #[test]
    fn approach1_on_toy_store() {
        let (store, corpus, axes) = fixture();
        let out = run_approach1(&corpus, &store, &axes, ScoreMethod::FairnessVector, 0.0).unwrap();
        assert_eq!(out.scores.len(), 3);
        assert_eq!(out.report.matrix, matrix(1, 0, 1, 1));
        assert_eq!(out.report.config.threshold, Some(0.0));
        assert_eq!(out.report.config.axis_checksum, axes.checksum());
    }

    #[test]
    fn methods_differ_only_in_direction() {
        let (store, corpus, axes) = fixture();
        let baseline =
            run_approach1(&corpus, &store, &axes, ScoreMethod::BaselineVector, 0.0).unwrap();
        let only_baseline = AxisSet::new(vec![baseline_axis(&store).unwrap()]).unwrap();
        let as_vector = run_approach1(
            &corpus,
            &store,
            &only_baseline,
            ScoreMethod::FairnessVector,
            0.0,
        )
        .unwrap();
        let a: Vec<f64> = baseline.scores.iter().map(|s| s.score).collect();
        let b: Vec<f64> = as_vector.scores.iter().map(|s| s.score).collect();
        assert_eq!(a, b);
        assert_eq!(baseline.report.matrix, as_vector.report.matrix);
    }

    #[test]
    fn single_sentence_is_degenerate_not_an_error() {
        let (store, _, axes) = fixture();
        let corpus = load_corpus("one", "text,label\nbad,unfair\n".as_bytes()).unwrap();
        let out = run_approach1(&corpus, &store, &axes, ScoreMethod::FairnessVector, 0.0).unwrap();
        assert!(out.report.degenerate);
        assert_eq!(out.report.evaluated, 1);
    }

    #[test]
    fn cluster_agreement_picks_the_better_mapping() {
        use Label::*;
        let truth = [Fair, Fair, Unfair, Unfair];
        let a = cluster_agreement(&[1, 1, 0, 0], &truth).unwrap();
        assert_eq!(a.fair_cluster, 1);
        assert_eq!(a.accuracy, 1.0);
        let a = cluster_agreement(&[0, 1, 0, 0], &truth).unwrap();
        assert_eq!((a.fair_cluster, a.accuracy), (1, 0.75));
        assert!(cluster_agreement(&[2, 0, 0, 0], &truth).is_err());
    }

    #[test]
    fn sentiment_join_and_errors() {
        let table = load_sentiment("text,compound\na,0.5\n b ,-0.25\nc,0.1\n".as_bytes()).unwrap();
        assert_eq!(table.get("b"), Some(-0.25));
        let scores: Vec<FairnessScore> = [("a", 0.5), ("b", -0.25), ("c", 0.1)]
            .iter()
            .map(|(t, s)| FairnessScore {
                text: t.to_string(),
                score: *s,
                method: ScoreMethod::FairnessVector,
            })
            .collect();
        assert!((sentiment_correlation(&scores, &table).unwrap() - 1.0).abs() < 1e-12);

        let mut missing = scores.clone();
        missing[0].text = "zzz".into();
        assert!(matches!(
            sentiment_correlation(&missing, &table),
            Err(Error::MissingSentence(_))
        ));
        let flat = load_sentiment("text,compound\na,0.1\nb,0.1\nc,0.1\n".as_bytes()).unwrap();
        assert!(sentiment_correlation(&scores, &flat).is_err());
        assert!(load_sentiment("text,compound\na,1.5\n".as_bytes()).is_err());
        assert!(load_sentiment("text,compound\na,0.1\na,0.2\n".as_bytes()).is_err());
    }
}
