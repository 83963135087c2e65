"""STS-style evaluation: dataset loading, correlations, ablations, timing."""
from __future__ import annotations

import logging
import math
import resource
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .codec import CodecConfig
from .config import fingerprint
from .errors import LengthMismatch, NoValidRows, ScoreOutOfRange, ZeroVariance
from .kernels import BACKEND
from .lexicon import TokenizerConfig, WeightingScheme, build_frequency_table
from .pooling import cosine_similarity, embed_tokens, sentence_tokens

log = logging.getLogger(__name__)

# SemEval sts-*.csv layout: genre, file, year, id, score, sentence1, sentence2
SEMEVAL_COLUMNS = {"sentence_a": 5, "sentence_b": 6, "score": 4}
SIMPLE_COLUMNS = {"sentence_a": 0, "sentence_b": 1, "score": 2}


@dataclass(frozen=True)
class StsRecord:
    sentence_a: str
    sentence_b: str
    gold_score: float

    def __post_init__(self):
        if not 0.0 <= self.gold_score <= 5.0:
            raise ScoreOutOfRange(f"gold score {self.gold_score} outside [0, 5]")


@dataclass
class StsDataset:
    """Parsed rows plus bookkeeping about the ones that were dropped."""

    records: list[StsRecord]
    skipped_rows: list[int] = field(default_factory=list)
    out_of_range_rows: list[int] = field(default_factory=list)
    source: str = ""

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def __getitem__(self, item):
        return self.records[item]


def load_sts_tsv(path: str | Path, column_map: dict | None = None) -> StsDataset:
    """Parse a tab-separated STS file.

    Rows that are too short or carry a non-numeric score are skipped and their
    1-based line numbers recorded; scores outside [0, 5] are collected
    separately. Fields are split on tabs only, with no quote handling, since
    the SemEval files contain stray quote characters.

    Raises:
        FileNotFoundError: ``path`` does not exist.
        NoValidRows: nothing usable was found.
    """
    cols = column_map or SEMEVAL_COLUMNS
    ia, ib, isc = cols["sentence_a"], cols["sentence_b"], cols["score"]
    need = max(ia, ib, isc) + 1
    data = StsDataset([], source=str(path))
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\r\n")
            if not line.strip():
                continue
            parts = line.split("\t")
            if len(parts) < need:
                data.skipped_rows.append(lineno)
                continue
            try:
                score = float(parts[isc])
            except ValueError:
                data.skipped_rows.append(lineno)
                continue
            if not math.isfinite(score):
                data.skipped_rows.append(lineno)
                continue
            if not 0.0 <= score <= 5.0:
                data.out_of_range_rows.append(lineno)
                continue
            data.records.append(StsRecord(parts[ia], parts[ib], score))
    if data.skipped_rows or data.out_of_range_rows:
        log.warning("%s: skipped %d malformed and %d out-of-range rows", path,
                    len(data.skipped_rows), len(data.out_of_range_rows))
    if not data.records:
        raise NoValidRows(f"{path}: no valid rows")
    return data


# -- correlation ------------------------------------------------------------------

def _check_pair(x, y) -> tuple[np.ndarray, np.ndarray]:
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.ndim != 1 or y.ndim != 1 or x.size != y.size:
        raise LengthMismatch(f"inputs must be 1-D of equal length, got {x.shape} and {y.shape}")
    if x.size < 2:
        raise LengthMismatch("need at least two observations")
    return x, y


def pearson(x, y) -> float:
    x, y = _check_pair(x, y)
    dx = x - x.mean()
    dy = y - y.mean()
    sxx = float(np.dot(dx, dx))
    syy = float(np.dot(dy, dy))
    if sxx == 0.0 or syy == 0.0:
        raise ZeroVariance("correlation undefined for a constant input")
    r = float(np.dot(dx, dy)) / math.sqrt(sxx * syy)
    return min(1.0, max(-1.0, r))


def fractional_ranks(values) -> np.ndarray:
    """1-based ranks with ties sharing the mean of their positions."""
    values = np.asarray(values, dtype=np.float64)
    order = np.argsort(values, kind="mergesort")
    sorted_vals = values[order]
    # boundaries of runs of equal values
    starts = np.flatnonzero(np.r_[True, sorted_vals[1:] != sorted_vals[:-1]])
    ends = np.r_[starts[1:], sorted_vals.size]
    avg = (starts + ends + 1) / 2.0
    ranks = np.empty(values.size, dtype=np.float64)
    ranks[order] = np.repeat(avg, ends - starts)
    return ranks


def spearman(x, y) -> float:
    x, y = _check_pair(x, y)
    return pearson(fractional_ranks(x), fractional_ranks(y))


# -- evaluation runs --------------------------------------------------------------

@dataclass
class EvalReport:
    spearman_rho: float
    pearson_r: float
    n_pairs: int
    mean_latency_ms_per_pair: float
    config_fingerprint: str
    scheme: str
    dim: int
    scores: np.ndarray = field(repr=False)
    flagged_pairs: list[int] = field(default_factory=list)
    threads: int = 1
    backend: str = BACKEND
    peak_rss_mb: float = 0.0
    reversible: bool = True

    def to_dict(self, include_scores: bool = False) -> dict:
        out = {
            "config_fingerprint": self.config_fingerprint,
            "scheme": self.scheme,
            "D": self.dim,
            "rho": self.spearman_rho,
            "r": self.pearson_r,
            "n_pairs": self.n_pairs,
            "latency_ms": self.mean_latency_ms_per_pair,
            "flagged_pairs": list(self.flagged_pairs),
            "threads": self.threads,
            "backend": self.backend,
            "peak_rss_mb": self.peak_rss_mb,
            "codec_reversible": self.reversible,
        }
        if include_scores:
            out["scores"] = [float(s) for s in self.scores]
        return out


def _peak_rss_mb() -> float:
    rss = resource.getrusage(resource.RUSAGE_SELF).ru_maxrss
    # kilobytes on Linux, bytes on macOS
    return rss / (1024 * 1024) if sys.platform == "darwin" else rss / 1024


def _score_pairs(tokens_a, tokens_b, scheme, codec, threads):
    def score(i):
        va = embed_tokens(tokens_a[i], scheme, codec)
        vb = embed_tokens(tokens_b[i], scheme, codec)
        return cosine_similarity(va, vb), va.fallback or vb.fallback

    idx = range(len(tokens_a))
    if threads <= 1:
        return [score(i) for i in idx]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        # map yields in submission order, whatever the completion order
        return list(pool.map(score, idx))


def run_eval(records: Sequence[StsRecord], scheme: WeightingScheme, codec: CodecConfig,
             tokenizer: TokenizerConfig = TokenizerConfig(), *, threads: int = 1,
             chunk_long_tokens: bool = False) -> EvalReport:
    """Score every pair and correlate against the gold scores.

    The frequency table (for ITF / TF-IDF) is built from both sides of every
    record, one sentence per document. Latency covers only the embed + score
    loop.
    """
    records = list(records)
    if len(records) < 2:
        raise LengthMismatch("need at least two records to correlate")
    tokens_a = [sentence_tokens(r.sentence_a, codec, tokenizer, chunk_long_tokens) for r in records]
    tokens_b = [sentence_tokens(r.sentence_b, codec, tokenizer, chunk_long_tokens) for r in records]
    if scheme.kind in ("itf", "tfidf"):
        scheme = scheme.with_table(build_frequency_table(tokens_a + tokens_b))

    start = time.perf_counter()
    results = _score_pairs(tokens_a, tokens_b, scheme, codec, threads)
    elapsed = time.perf_counter() - start

    scores = np.array([s for s, _ in results], dtype=np.float64)
    flagged = [i for i, (_, f) in enumerate(results) if f]
    if flagged:
        log.info("%d pairs used the unfiltered fallback", len(flagged))
    gold = np.array([r.gold_score for r in records], dtype=np.float64)
    fp = fingerprint(
        dim=codec.dim,
        l_max=codec.l_max,
        min_modulus=codec.basis.min_modulus,
        scheme=scheme.kind,
        lowercase=tokenizer.lowercase,
        splitter=tokenizer.splitter,
        stopwords=scheme.stopwords if scheme.kind == "stopword_removal" else None,
        nfc=codec.unicode_normalization == "NFC",
        chunk_long_tokens=chunk_long_tokens,
    )
    return EvalReport(
        spearman_rho=spearman(scores, gold),
        pearson_r=pearson(scores, gold),
        n_pairs=len(records),
        mean_latency_ms_per_pair=1000.0 * elapsed / len(records),
        config_fingerprint=fp,
        scheme=scheme.kind,
        dim=codec.dim,
        scores=scores,
        flagged_pairs=flagged,
        threads=threads,
        peak_rss_mb=_peak_rss_mb(),
        reversible=codec.reversible,
    )


def dimension_sweep(records: Sequence[StsRecord], scheme: WeightingScheme, dims: Sequence[int],
                    tokenizer: TokenizerConfig = TokenizerConfig(), *, l_max: int = 24,
                    min_modulus: int = 3, nfc: bool = True, threads: int = 1,
                    chunk_long_tokens: bool = False) -> list[EvalReport]:
    for d in dims:
        if d < 4 or d % 2:
            raise ValueError(f"every dimension must be even and >= 4, got {d}")
    return [
        run_eval(records, scheme, CodecConfig.for_dim(d, l_max, min_modulus, nfc), tokenizer,
                 threads=threads, chunk_long_tokens=chunk_long_tokens)
        for d in dims
    ]


def format_table(reports: Sequence[EvalReport]) -> str:
    lines = [f"{'D':>6}  {'scheme':<16} {'rho':>8} {'r':>8} {'ms/pair':>9} {'pairs':>6}  fingerprint"]
    for rep in reports:
        lines.append(
            f"{rep.dim:>6}  {rep.scheme:<16} {rep.spearman_rho:>8.4f} {rep.pearson_r:>8.4f} "
            f"{rep.mean_latency_ms_per_pair:>9.3f} {rep.n_pairs:>6}  {rep.config_fingerprint}"
        )
    return "\n".join(lines)
