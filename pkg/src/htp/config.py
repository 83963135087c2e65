"""Run configuration and its stable fingerprint."""
from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, fields
from pathlib import Path

from .codec import DEFAULT_DIM, DEFAULT_LMAX, CodecConfig
from .lexicon import SCHEMES, SPLITTERS, TokenizerConfig, load_stopwords, stopwords_digest

SCHEME_ALIASES = {"stopword": "stopword_removal", "stopwords": "stopword_removal", "tf-idf": "tfidf"}


def canonical_scheme(name: str) -> str:
    name = SCHEME_ALIASES.get(name, name)
    if name not in SCHEMES:
        raise ValueError(f"unknown scheme {name!r}; choose from {SCHEMES}")
    return name


@dataclass
class RunConfig:
    dim: int = DEFAULT_DIM
    l_max: int = DEFAULT_LMAX
    min_modulus: int = 3
    scheme: str = "tfidf"
    lowercase: bool = True
    splitter: str = "unicode_words"
    stopwords_file: str | None = None
    nfc: bool = True
    chunk_long_tokens: bool = False
    input: str | None = None
    output: str | None = None

    def __post_init__(self):
        if self.dim < 4 or self.dim % 2:
            raise ValueError(f"dim must be an even integer >= 4, got {self.dim}")
        if self.l_max < 1:
            raise ValueError(f"l_max must be >= 1, got {self.l_max}")
        if self.min_modulus < 2:
            raise ValueError(f"min_modulus must be >= 2, got {self.min_modulus}")
        if self.splitter not in SPLITTERS:
            raise ValueError(f"splitter must be one of {SPLITTERS}")
        self.scheme = canonical_scheme(self.scheme)

    @classmethod
    def from_file(cls, path: str | Path, **overrides) -> "RunConfig":
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        data.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**data)

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True)

    def codec(self, dim: int | None = None) -> CodecConfig:
        return CodecConfig.for_dim(dim or self.dim, self.l_max, self.min_modulus, self.nfc)

    def tokenizer(self) -> TokenizerConfig:
        return TokenizerConfig(lowercase=self.lowercase, splitter=self.splitter)

    def stopwords(self) -> frozenset[str]:
        return load_stopwords(self.stopwords_file)

    def fingerprint(self, dim: int | None = None) -> str:
        return fingerprint(
            dim=dim or self.dim,
            l_max=self.l_max,
            min_modulus=self.min_modulus,
            scheme=self.scheme,
            lowercase=self.lowercase,
            splitter=self.splitter,
            stopwords=self.stopwords() if self.scheme == "stopword_removal" else None,
            nfc=self.nfc,
            chunk_long_tokens=self.chunk_long_tokens,
        )


def fingerprint(*, dim, l_max, min_modulus, scheme, lowercase, splitter, stopwords, nfc,
                chunk_long_tokens=False) -> str:
    """Short stable hash over everything that can change a score."""
    payload = {
        "dim": dim,
        "l_max": l_max,
        "min_modulus": min_modulus,
        "scheme": scheme,
        "lowercase": lowercase,
        "splitter": splitter,
        "stopwords_sha256": stopwords_digest(stopwords) if stopwords is not None else None,
        "nfc": nfc,
        "chunk_long_tokens": chunk_long_tokens,
    }
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":")).encode("utf-8")
    return hashlib.sha256(blob).hexdigest()[:16]
