//! The `fpv-embeddings` store: a line-delimited JSON file holding one manifest
//! line followed by one `{"text", "vector"}` record per line.
//!
//! ```text
//! {"format":"fpv-embeddings","version":1,"model_id":"<string>","dimension":<int>}
//! {"text":"<sentence>","vector":[<number>,...]}
//! ```
//!
//! Records are keyed by their normalized text (NFC, surrounding whitespace
//! trimmed, case preserved). Numbers are written with the shortest decimal
//! representation that parses back to the same `f64`, so a write followed by
//! a read reproduces every component exactly.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use unicode_normalization::UnicodeNormalization;

use crate::error::{Error, Result};
use crate::vecmath::RealVector;

pub const FORMAT_NAME: &str = "fpv-embeddings";
pub const FORMAT_VERSION: u64 = 1;

/// Lookup key for a sentence: NFC normalization plus whitespace trim.
pub fn normalize_text(text: &str) -> String {
    text.trim().nfc().collect::<String>().trim().to_string()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingManifest {
    #[serde(rename = "format")]
    pub format_name: String,
    pub version: u64,
    pub model_id: String,
    pub dimension: usize,
}

impl EmbeddingManifest {
    pub fn new(model_id: impl Into<String>, dimension: usize) -> Self {
        Self {
            format_name: FORMAT_NAME.to_string(),
            version: FORMAT_VERSION,
            model_id: model_id.into(),
            dimension,
        }
    }

    fn validate(&self, line: usize) -> Result<()> {
        if self.format_name != FORMAT_NAME || self.version != FORMAT_VERSION {
            return Err(Error::UnknownFormat {
                format: self.format_name.clone(),
                version: self.version,
            });
        }
        if self.dimension == 0 {
            return Err(Error::Malformed {
                line,
                message: "manifest dimension must be positive".into(),
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingRecord {
    pub text: String,
    pub vector: RealVector,
}

impl EmbeddingRecord {
    pub fn new(text: impl Into<String>, vector: RealVector) -> Self {
        Self {
            text: text.into(),
            vector,
        }
    }
}

/// An immutable, validated collection of embeddings sharing one dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingStore {
    manifest: EmbeddingManifest,
    records: Vec<EmbeddingRecord>,
    index: HashMap<String, usize>,
}

impl EmbeddingStore {
    /// Validates records against the manifest. Record order is kept.
    pub fn new(manifest: EmbeddingManifest, records: Vec<EmbeddingRecord>) -> Result<Self> {
        manifest.validate(1)?;
        Self::build(manifest, records, |i| i + 2)
    }

    fn build(
        manifest: EmbeddingManifest,
        records: Vec<EmbeddingRecord>,
        line_of: impl Fn(usize) -> usize,
    ) -> Result<Self> {
        if records.is_empty() {
            return Err(Error::Malformed {
                line: line_of(0),
                message: "store has no records".into(),
            });
        }
        let mut index = HashMap::with_capacity(records.len());
        for (i, record) in records.iter().enumerate() {
            let key = normalize_text(&record.text);
            if key.is_empty() {
                return Err(Error::Malformed {
                    line: line_of(i),
                    message: "record text is empty".into(),
                });
            }
            if record.vector.dimension() != manifest.dimension {
                return Err(Error::DimensionConflict {
                    line: line_of(i),
                    expected: manifest.dimension,
                    found: record.vector.dimension(),
                });
            }
            if index.insert(key, i).is_some() {
                return Err(Error::DuplicateText(record.text.clone()));
            }
        }
        Ok(Self {
            manifest,
            records,
            index,
        })
    }

    pub fn manifest(&self) -> &EmbeddingManifest {
        &self.manifest
    }

    pub fn dimension(&self) -> usize {
        self.manifest.dimension
    }

    pub fn model_id(&self) -> &str {
        &self.manifest.model_id
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn records(&self) -> &[EmbeddingRecord] {
        &self.records
    }

    pub fn contains(&self, text: &str) -> bool {
        self.index.contains_key(&normalize_text(text))
    }

    /// Vector for `text` after normalization.
    pub fn lookup(&self, text: &str) -> Result<&RealVector> {
        self.index
            .get(&normalize_text(text))
            .map(|&i| &self.records[i].vector)
            .ok_or_else(|| Error::MissingSentence(text.to_string()))
    }

    pub fn read<R: BufRead>(source: R) -> Result<Self> {
        read_store(source)
    }

    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        let file = File::open(path.as_ref()).map_err(|e| {
            std::io::Error::new(e.kind(), format!("{}: {e}", path.as_ref().display()))
        })?;
        read_store(BufReader::new(file))
    }

    pub fn write<W: Write>(&self, sink: W) -> Result<()> {
        write_store(&self.manifest, &self.records, sink)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut out = BufWriter::new(File::create(path)?);
        self.write(&mut out)?;
        out.flush()?;
        Ok(())
    }
}

#[derive(Serialize)]
struct RecordLine<'a> {
    text: &'a str,
    vector: &'a [f64],
}

/// Writes the manifest line followed by one line per record, in input order.
pub fn write_store<W: Write>(
    manifest: &EmbeddingManifest,
    records: &[EmbeddingRecord],
    mut sink: W,
) -> Result<()> {
    // Validate the whole store before the first byte goes out.
    let store = EmbeddingStore::new(manifest.clone(), records.to_vec())?;
    serde_json::to_writer(&mut sink, &store.manifest)?;
    sink.write_all(b"\n")?;
    for record in &store.records {
        serde_json::to_writer(
            &mut sink,
            &RecordLine {
                text: &record.text,
                vector: record.vector.as_slice(),
            },
        )?;
        sink.write_all(b"\n")?;
    }
    sink.flush()?;
    Ok(())
}

/// Parses and validates a store. Errors carry 1-based line numbers.
pub fn read_store<R: BufRead>(source: R) -> Result<EmbeddingStore> {
    let mut lines = source.lines();
    let first = match lines.next() {
        Some(line) => line?,
        None => {
            return Err(Error::Malformed {
                line: 1,
                message: "empty input".into(),
            })
        }
    };
    let manifest: EmbeddingManifest =
        serde_json::from_str(&first).map_err(|e| Error::Malformed {
            line: 1,
            message: format!("bad manifest: {e}"),
        })?;
    manifest.validate(1)?;

    let mut records = Vec::new();
    for (i, line) in lines.enumerate() {
        let line_no = i + 2;
        let line = line?;
        if line.trim().is_empty() {
            return Err(Error::Malformed {
                line: line_no,
                message: "blank line".into(),
            });
        }
        let record: EmbeddingRecord =
            serde_json::from_str(&line).map_err(|e| Error::Malformed {
                line: line_no,
                message: format!("bad record: {e}"),
            })?;
        if record.vector.dimension() != manifest.dimension {
            return Err(Error::DimensionConflict {
                line: line_no,
                expected: manifest.dimension,
                found: record.vector.dimension(),
            });
        }
        records.push(record);
    }
    EmbeddingStore::build(manifest, records, |i| i + 2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(text: &str, values: &[f64]) -> EmbeddingRecord {
        EmbeddingRecord::new(text, RealVector::new(values.to_vec()).unwrap())
    }

    fn to_string(manifest: &EmbeddingManifest, records: &[EmbeddingRecord]) -> String {
        let mut buf = Vec::new();
        write_store(manifest, records, &mut buf).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn one_record_gives_two_lines() {
        let text = to_string(
            &EmbeddingManifest::new("test-model", 3),
            &[record("it was fair", &[0.5, -1.25, 3.0])],
        );
        assert_eq!(
            text,
            "{\"format\":\"fpv-embeddings\",\"version\":1,\"model_id\":\"test-model\",\"dimension\":3}\n\
             {\"text\":\"it was fair\",\"vector\":[0.5,-1.25,3.0]}\n"
        );
    }

    #[test]
    fn whitespace_variants_are_duplicates() {
        let mut buf = Vec::new();
        let err = write_store(
            &EmbeddingManifest::new("m", 1),
            &[
                record("it was sad", &[1.0]),
                record("  it was sad ", &[2.0]),
            ],
            &mut buf,
        )
        .unwrap_err();
        assert!(matches!(err, Error::DuplicateText(_)));
        assert!(buf.is_empty());
    }

    #[test]
    fn write_rejects_dimension_mismatch() {
        let err = write_store(
            &EmbeddingManifest::new("m", 2),
            &[record("a", &[1.0, 2.0, 3.0])],
            Vec::new(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::DimensionConflict { .. }));
    }

    #[test]
    fn round_trip_is_exact() {
        let records = vec![
            record("x", &[0.1, 1.0 / 3.0, -2.5e-300, 1e300]),
            record(
                "Jim hugged Sara",
                &[f64::MIN_POSITIVE, -0.0, 7.0, f64::EPSILON],
            ),
        ];
        let text = to_string(&EmbeddingManifest::new("m", 4), &records);
        let store = read_store(text.as_bytes()).unwrap();
        assert_eq!(store.records(), &records[..]);
        for (a, b) in store.records().iter().zip(&records) {
            for (x, y) in a.vector.iter().zip(b.vector.iter()) {
                assert_eq!(x.to_bits(), y.to_bits());
            }
        }
    }

    #[test]
    fn short_vector_names_its_line() {
        let mut input = String::from(
            "{\"format\":\"fpv-embeddings\",\"version\":1,\"model_id\":\"m\",\"dimension\":512}\n",
        );
        let full: Vec<String> = (0..512).map(|i| format!("{}", i as f64 * 0.001)).collect();
        input.push_str(&format!(
            "{{\"text\":\"ok\",\"vector\":[{}]}}\n",
            full.join(",")
        ));
        input.push_str(&format!(
            "{{\"text\":\"short\",\"vector\":[{}]}}\n",
            full[..511].join(",")
        ));
        match read_store(input.as_bytes()).unwrap_err() {
            Error::DimensionConflict {
                line,
                expected,
                found,
            } => assert_eq!((line, expected, found), (3, 512, 511)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn empty_stream_is_malformed() {
        assert!(matches!(
            read_store(&b""[..]).unwrap_err(),
            Error::Malformed { line: 1, .. }
        ));
    }

    #[test]
    fn rejects_unknown_format_and_blank_lines() {
        let bad = "{\"format\":\"other\",\"version\":1,\"model_id\":\"m\",\"dimension\":1}\n";
        assert!(matches!(
            read_store(bad.as_bytes()).unwrap_err(),
            Error::UnknownFormat { .. }
        ));
        let v2 =
            "{\"format\":\"fpv-embeddings\",\"version\":2,\"model_id\":\"m\",\"dimension\":1}\n";
        assert!(matches!(
            read_store(v2.as_bytes()).unwrap_err(),
            Error::UnknownFormat { version: 2, .. }
        ));
        let blank =
            "{\"format\":\"fpv-embeddings\",\"version\":1,\"model_id\":\"m\",\"dimension\":1}\n\
                     {\"text\":\"a\",\"vector\":[1]}\n\n{\"text\":\"b\",\"vector\":[1]}\n";
        assert!(matches!(
            read_store(blank.as_bytes()).unwrap_err(),
            Error::Malformed { line: 3, .. }
        ));
        let garbage = "{\"format\":\"fpv-embeddings\",\"version\":1,\"model_id\":\"m\",\"dimension\":1}\nnot json\n";
        assert!(matches!(
            read_store(garbage.as_bytes()).unwrap_err(),
            Error::Malformed { line: 2, .. }
        ));
    }

    #[test]
    fn lookup_normalizes_query() {
        let store = EmbeddingStore::new(
            EmbeddingManifest::new("m", 2),
            vec![record("The man serenaded his fiance\u{301}", &[1.0, 2.0])],
        )
        .unwrap();
        let v = store.lookup("The man serenaded his fiancé ").unwrap();
        assert_eq!(v.as_slice(), &[1.0, 2.0]);
        assert!(matches!(
            store.lookup("the man serenaded his fiancé"),
            Err(Error::MissingSentence(t)) if t == "the man serenaded his fiancé"
        ));
    }
}
