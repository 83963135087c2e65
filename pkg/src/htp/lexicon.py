"""Tokenization, corpus statistics and lexical weights."""
from __future__ import annotations

import hashlib
import math
import re
from collections import Counter
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import EmptyCorpus

SPLITTERS = ("unicode_words", "whitespace", "pretokenized")
SCHEMES = ("uniform", "itf", "tfidf", "stopword_removal")

# runs of letters/digits in any script; underscore is \w but not alphanumeric
_WORD_RE = re.compile(r"[^\W_]+")


@dataclass(frozen=True)
class TokenizerConfig:
    lowercase: bool = True
    splitter: str = "unicode_words"
    stopword_list: frozenset[str] | None = None

    def __post_init__(self):
        if self.splitter not in SPLITTERS:
            raise ValueError(f"splitter must be one of {SPLITTERS}, got {self.splitter!r}")


def tokenize(sentence: str, config: TokenizerConfig = TokenizerConfig()) -> list[str]:
    """Split ``sentence`` into tokens, keeping order and duplicates.

    >>> tokenize("A man is playing a guitar.")
    ['a', 'man', 'is', 'playing', 'a', 'guitar']
    """
    if config.splitter == "pretokenized":
        tokens = [sentence] if sentence else []
    elif config.splitter == "whitespace":
        tokens = sentence.split()
    else:
        tokens = _WORD_RE.findall(sentence)
    if config.lowercase:
        tokens = [t.lower() for t in tokens]
    return tokens


@dataclass
class FrequencyTable:
    counts: Counter = field(default_factory=Counter)
    doc_freq: Counter = field(default_factory=Counter)
    num_docs: int = 0

    def to_tsv(self) -> str:
        lines = ["token\tcount\tdoc_freq"]
        for token in sorted(self.counts):
            lines.append(f"{token}\t{self.counts[token]}\t{self.doc_freq[token]}")
        return "\n".join(lines) + "\n"


def build_frequency_table(corpus: Iterable[Sequence[str]]) -> FrequencyTable:
    table = FrequencyTable()
    for doc in corpus:
        table.counts.update(doc)
        table.doc_freq.update(set(doc))
        table.num_docs += 1
    return table


def itf_weight(token: str, table: FrequencyTable) -> float:
    # unseen tokens count as seen once; 1/log(1+0) would be infinite
    f = max(table.counts.get(token, 0), 1)
    return 1.0 / math.log1p(f)


def itf_weights(tokens: Sequence[str], table: FrequencyTable) -> np.ndarray:
    return np.array([itf_weight(t, table) for t in tokens], dtype=np.float64)


def tfidf_weights(tokens: Sequence[str], table: FrequencyTable) -> np.ndarray:
    """``tf * (ln((1 + N) / (1 + df)) + 1)`` per token position.

    ``tf`` is the count of the token within ``tokens``; repeated tokens carry
    the same weight at every position.
    """
    if table.num_docs == 0:
        raise EmptyCorpus("TF-IDF needs a frequency table built from at least one document")
    tf = Counter(tokens)
    n = table.num_docs
    idf = {t: math.log((1 + n) / (1 + table.doc_freq.get(t, 0))) + 1.0 for t in tf}
    return np.array([tf[t] * idf[t] for t in tokens], dtype=np.float64)


def filter_stopwords(tokens: Sequence[str], stopwords: Iterable[str]) -> list[str]:
    stopwords = stopwords if isinstance(stopwords, (set, frozenset)) else set(stopwords)
    return [t for t in tokens if t not in stopwords]


def parse_stopwords(text: str) -> frozenset[str]:
    words = set()
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            words.add(line)
    return frozenset(words)


def load_stopwords(path: str | Path | None = None) -> frozenset[str]:
    """Read a stopword file (UTF-8, one token per line, ``#`` comments).

    With no path, the bundled English list is returned.
    """
    return parse_stopwords(stopwords_text(path))


def stopwords_text(path: str | Path | None = None) -> str:
    if path is None:
        return resources.files("htp").joinpath("data/english_stopwords.txt").read_text("utf-8")
    return Path(path).read_text(encoding="utf-8")


def stopwords_digest(words: Iterable[str]) -> str:
    return hashlib.sha256("\n".join(sorted(words)).encode("utf-8")).hexdigest()


@dataclass(frozen=True)
class WeightingScheme:
    """Lexical weighting policy applied before pooling.

    ``itf`` and ``tfidf`` need a frequency table; ``stopword_removal`` needs a
    stopword set and pools the survivors with equal weight.
    """

    kind: str = "uniform"
    table: FrequencyTable | None = field(default=None, compare=False)
    stopwords: frozenset[str] | None = None

    def __post_init__(self):
        if self.kind not in SCHEMES:
            raise ValueError(f"scheme must be one of {SCHEMES}, got {self.kind!r}")
        if self.kind in ("itf", "tfidf") and self.table is None:
            raise ValueError(f"{self.kind} weighting needs a frequency table")
        if self.kind == "stopword_removal" and self.stopwords is None:
            raise ValueError("stopword_removal needs a stopword set")

    def with_table(self, table: FrequencyTable) -> "WeightingScheme":
        return WeightingScheme(self.kind, table, self.stopwords)

    def select(self, tokens: Sequence[str]) -> list[str]:
        if self.kind == "stopword_removal":
            return filter_stopwords(tokens, self.stopwords)
        return list(tokens)

    def weights(self, tokens: Sequence[str]) -> np.ndarray:
        if self.kind == "itf":
            return itf_weights(tokens, self.table)
        if self.kind == "tfidf":
            return tfidf_weights(tokens, self.table)
        return np.ones(len(tokens), dtype=np.float64)
