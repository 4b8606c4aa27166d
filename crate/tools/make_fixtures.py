#!/usr/bin/env python3
"""Regenerate the committed fixture embedding store and sentiment file.

Embeddings come from the pretrained WordLlama `l2_supercat` model (256 dims,
bundled inside the `wordllama` wheel, so no network access is needed once the
package is installed). Sentiment compound scores come from vaderSentiment.

    pip install wordllama vaderSentiment
    python3 tools/make_fixtures.py --data-dir crates/core/data

The store covers every sentence of both bundled corpora, every pole sentence
of the default axis set, the fair/unfair baseline poles and three probe words
("responsible", "not responsible", "irresponsible").
"""

import argparse
import csv
import json
from pathlib import Path

import numpy as np

MODEL_ID = "wordllama-0.4.0/l2_supercat_256"


def read_corpus(path):
    with open(path, newline="", encoding="utf-8") as f:
        return [row["text"].strip() for row in csv.DictReader(f)]


def fmt(x):
    return np.format_float_positional(np.float32(x), unique=True, trim="-")


def load_encoder():
    import shutil
    import tempfile

    import wordllama
    from wordllama import WordLlama

    try:
        return WordLlama.load(disable_download=True)
    except FileNotFoundError:
        # wordllama 0.4.0 ships its tokenizer under `tokenizers/` but looks
        # under `tokenizer/`; stage the bundled copy as a cache directory.
        bundled = Path(wordllama.__file__).parent / "tokenizers"
        cache = Path(tempfile.mkdtemp(prefix="wordllama-"))
        shutil.copytree(bundled, cache / "tokenizers")
        return WordLlama.load(cache_dir=cache, disable_download=True)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--data-dir", default="crates/core/data")
    args = ap.parse_args()
    data = Path(args.data_dir)

    corpus = read_corpus(data / "full.csv")
    illustrative = read_corpus(data / "illustrative.csv")
    sentences = corpus + illustrative
    with open(data / "axes_default.json", encoding="utf-8") as f:
        for pole in json.load(f):
            sentences += [pole["positive"], pole["negative"]]
    sentences += ["it was fair", "it was unfair"]
    sentences += ["responsible", "not responsible", "irresponsible"]
    unique = list(dict.fromkeys(sentences))

    encoder = load_encoder()
    vectors = encoder.embed(unique, norm=False)
    if not np.all(np.isfinite(vectors)):
        raise SystemExit("encoder produced non-finite values")

    with open(data / "fixture_embeddings.ndjson", "w", encoding="utf-8", newline="\n") as f:
        manifest = {"format": "fpv-embeddings", "version": 1, "model_id": MODEL_ID,
                    "dimension": int(vectors.shape[1])}
        f.write(json.dumps(manifest, separators=(",", ":")) + "\n")
        for text, vec in zip(unique, vectors):
            body = ",".join(fmt(x) for x in vec)
            head = json.dumps({"text": text}, ensure_ascii=False, separators=(",", ":"))[:-1]
            f.write(f'{head},"vector":[{body}]}}\n')

    from vaderSentiment.vaderSentiment import SentimentIntensityAnalyzer

    analyzer = SentimentIntensityAnalyzer()
    scored = list(dict.fromkeys(corpus + illustrative))
    with open(data / "sentiment.csv", "w", encoding="utf-8", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["text", "compound"])
        for s in scored:
            w.writerow([s, f"{analyzer.polarity_scores(s)['compound']:.4f}"])
    print(f"wrote {len(unique)} embeddings (dim {vectors.shape[1]}) and {len(scored)} sentiment rows")


if __name__ == "__main__":
    main()
