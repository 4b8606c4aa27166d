//! Labeled sentence corpora and the bundled datasets.
//!
//! Corpus files are UTF-8 CSV with header `text,label`; labels are `fair` or
//! `unfair` (any case). An optional third column `reviewed` marks rows whose
//! label was a judgement call during transcription.

use std::collections::HashSet;
use std::fmt;
use std::io::Read;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::axes::{baseline_pole, default_pole_pairs};
use crate::embedding_io::normalize_text;
use crate::error::{Error, Result};

const ILLUSTRATIVE_CSV: &str = include_str!("../data/illustrative.csv");
const FULL_CSV: &str = include_str!("../data/full.csv");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Fair,
    Unfair,
}

impl Label {
    pub const ALL: [Label; 2] = [Label::Fair, Label::Unfair];

    pub fn as_str(self) -> &'static str {
        match self {
            Label::Fair => "fair",
            Label::Unfair => "unfair",
        }
    }

    pub fn is_fair(self) -> bool {
        self == Label::Fair
    }

    pub fn from_bool(fair: bool) -> Label {
        if fair {
            Label::Fair
        } else {
            Label::Unfair
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Label {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "fair" => Ok(Label::Fair),
            "unfair" => Ok(Label::Unfair),
            other => Err(other.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LabeledSentence {
    pub text: String,
    pub label: Label,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub reviewed: bool,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelCounts {
    pub fair: usize,
    pub unfair: usize,
}

impl LabelCounts {
    pub fn get(&self, label: Label) -> usize {
        match label {
            Label::Fair => self.fair,
            Label::Unfair => self.unfair,
        }
    }

    pub fn total(&self) -> usize {
        self.fair + self.unfair
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledCorpus {
    name: String,
    sentences: Vec<LabeledSentence>,
    checksum: String,
}

impl LabeledCorpus {
    /// Builds a corpus from already-validated parts; rejects empty texts and duplicates.
    pub fn new(name: impl Into<String>, sentences: Vec<LabeledSentence>) -> Result<Self> {
        let mut seen = HashSet::new();
        let mut hasher = Sha256::new();
        for (i, s) in sentences.iter().enumerate() {
            let key = normalize_text(&s.text);
            if key.is_empty() {
                return Err(Error::Malformed {
                    line: i + 2,
                    message: "empty sentence text".into(),
                });
            }
            if !seen.insert(key) {
                return Err(Error::DuplicateText(s.text.clone()));
            }
            hasher.update(s.text.as_bytes());
            hasher.update([0u8]);
            hasher.update(s.label.as_str().as_bytes());
            hasher.update(b"\n");
        }
        Ok(Self {
            name: name.into(),
            sentences,
            checksum: hex::encode(hasher.finalize()),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn sentences(&self) -> &[LabeledSentence] {
        &self.sentences
    }

    pub fn len(&self) -> usize {
        self.sentences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sentences.is_empty()
    }

    pub fn counts(&self) -> LabelCounts {
        let mut counts = LabelCounts::default();
        for s in &self.sentences {
            match s.label {
                Label::Fair => counts.fair += 1,
                Label::Unfair => counts.unfair += 1,
            }
        }
        counts
    }

    pub fn labels(&self) -> Vec<Label> {
        self.sentences.iter().map(|s| s.label).collect()
    }

    /// SHA-256 over texts and labels in corpus order.
    pub fn checksum(&self) -> &str {
        &self.checksum
    }
}

/// Parses a corpus CSV. Line numbers in errors are 1-based file lines.
pub fn load_corpus<R: Read>(name: &str, source: R) -> Result<LabeledCorpus> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .from_reader(source);
    let headers = reader.headers()?.clone();
    let column = |wanted: &str| {
        headers
            .iter()
            .position(|h| h.trim().eq_ignore_ascii_case(wanted))
    };
    let (text_col, label_col) = match (column("text"), column("label")) {
        (Some(t), Some(l)) => (t, l),
        _ => {
            return Err(Error::Malformed {
                line: 1,
                message: "header must contain text and label columns".into(),
            })
        }
    };
    let reviewed_col = column("reviewed");

    let mut sentences = Vec::new();
    let mut seen = HashSet::new();
    for result in reader.records() {
        let record = result.map_err(|e| {
            let line = e.position().map(|p| p.line() as usize).unwrap_or(0);
            Error::Malformed {
                line,
                message: e.to_string(),
            }
        })?;
        let line = record.position().map(|p| p.line() as usize).unwrap_or(0);
        let text = record.get(text_col).unwrap_or("").trim().to_string();
        if text.is_empty() {
            return Err(Error::Malformed {
                line,
                message: "empty sentence text".into(),
            });
        }
        let token = record.get(label_col).unwrap_or("");
        let label = token
            .parse::<Label>()
            .map_err(|token| Error::UnknownLabel { line, token })?;
        if !seen.insert(normalize_text(&text)) {
            return Err(Error::DuplicateText(text));
        }
        let reviewed = reviewed_col
            .and_then(|c| record.get(c))
            .map(|v| matches!(v.trim().to_ascii_lowercase().as_str(), "yes" | "true" | "1"))
            .unwrap_or(false);
        sentences.push(LabeledSentence {
            text,
            label,
            reviewed,
        });
    }
    LabeledCorpus::new(name, sentences)
}

/// The corpora compiled into the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BundledCorpus {
    /// 18 fair and 18 unfair illustrative sentences.
    Illustrative,
    /// The full 200-sentence evaluation corpus.
    Full,
}

impl BundledCorpus {
    pub fn name(self) -> &'static str {
        match self {
            BundledCorpus::Illustrative => "illustrative",
            BundledCorpus::Full => "full",
        }
    }

    pub fn raw(self) -> &'static str {
        match self {
            BundledCorpus::Illustrative => ILLUSTRATIVE_CSV,
            BundledCorpus::Full => FULL_CSV,
        }
    }

    /// SHA-256 of the bundled file bytes.
    pub fn expected_file_checksum(self) -> &'static str {
        match self {
            BundledCorpus::Illustrative => {
                "d8d7a49ac1f781b50f9171208384702b3ce0de878ef935efbdafa2d9501137d9"
            }
            BundledCorpus::Full => {
                "a7589077c8ddaf9ecdefcc74c7e700726d687068ae5e129d909566c2d75c6923"
            }
        }
    }

    pub fn load(self) -> Result<LabeledCorpus> {
        load_corpus(self.name(), self.raw().as_bytes())
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Checks each bundled file against its recorded checksum.
pub fn verify_bundled_checksums() -> Result<()> {
    for corpus in [BundledCorpus::Illustrative, BundledCorpus::Full] {
        let actual = sha256_hex(corpus.raw().as_bytes());
        if actual != corpus.expected_file_checksum() {
            return Err(Error::Config(format!(
                "bundled corpus {} checksum {actual} does not match {}",
                corpus.name(),
                corpus.expected_file_checksum()
            )));
        }
    }
    Ok(())
}

/// Corpus texts in order, optionally followed by the default pole sentences
/// and the baseline pair (the list an embedding exporter needs).
pub fn sentence_texts(corpus: &LabeledCorpus, include_poles: bool) -> Vec<String> {
    let mut texts: Vec<String> = corpus.sentences.iter().map(|s| s.text.clone()).collect();
    if include_poles {
        texts.extend(pole_texts());
    }
    texts
}

/// Positive then negative sentence of each default pole pair, then the
/// baseline pair.
pub fn pole_texts() -> Vec<String> {
    default_pole_pairs()
        .into_iter()
        .chain(std::iter::once(baseline_pole()))
        .flat_map(|p| [p.positive, p.negative])
        .collect()
}

/// Extra single-word and negation probes embedded alongside the corpora.
pub const PROBE_TEXTS: [&str; 3] = ["responsible", "not responsible", "irresponsible"];

/// Every text an embedding store must cover for these corpora: corpus
/// sentences in order, then pole sentences, then `extra`, with repeats
/// (after normalization) dropped.
pub fn exporter_sentences(
    corpora: &[LabeledCorpus],
    include_poles: bool,
    extra: &[&str],
) -> Vec<String> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let mut push = |t: String| {
        if seen.insert(normalize_text(&t)) {
            out.push(t);
        }
    };
    for corpus in corpora {
        for t in sentence_texts(corpus, false) {
            push(t);
        }
    }
    if include_poles {
        for t in pole_texts() {
            push(t);
        }
    }
    for t in extra {
        push(t.to_string());
    }
    out
}
