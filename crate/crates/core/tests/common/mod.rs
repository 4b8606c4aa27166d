#![allow(dead_code)]

use std::path::PathBuf;

use fpv_core::evaluation::{load_sentiment, SentimentTable};
use fpv_core::EmbeddingStore;

/// Committed fixture store, or the file named by `FPV_EMBEDDINGS`.
pub fn store_path() -> PathBuf {
    std::env::var_os("FPV_EMBEDDINGS")
        .map(PathBuf::from)
        .unwrap_or_else(|| data_dir().join("fixture_embeddings.ndjson"))
}

/// Committed compound-sentiment CSV, or the file named by `FPV_SENTIMENT`.
pub fn sentiment_path() -> PathBuf {
    std::env::var_os("FPV_SENTIMENT")
        .map(PathBuf::from)
        .unwrap_or_else(|| data_dir().join("sentiment.csv"))
}

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data")
}

pub fn fixture_store() -> EmbeddingStore {
    let path = store_path();
    EmbeddingStore::open(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

pub fn fixture_sentiment() -> SentimentTable {
    let path = sentiment_path();
    let file = std::fs::File::open(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    load_sentiment(file).unwrap()
}
