"""Sentence vectors: weighted harmonic mean, L2 normalisation, cosine."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import kernels
from .codec import CodecConfig, encode_many, iter_chunks
from .errors import DimensionMismatch, EmptySentence, ZeroVector, ZeroWeightSum
from .lexicon import TokenizerConfig, WeightingScheme, tokenize

# below this the weighted mean is treated as the zero vector
_ZERO_NORM = 1e-300


@dataclass(frozen=True, eq=False)
class SentenceVector:
    components: np.ndarray
    normalized: bool = True
    # set when stopword removal emptied the sentence and uniform pooling was used
    fallback: bool = False

    @property
    def dim(self) -> int:
        return self.components.shape[0]


def pool(token_embeddings: np.ndarray | Sequence[np.ndarray], weights: Sequence[float]) -> SentenceVector:
    emb = np.asarray(token_embeddings, dtype=np.float64)
    w = np.asarray(weights, dtype=np.float64)
    if emb.ndim != 2 or emb.shape[0] == 0:
        raise EmptySentence("no token embeddings to pool")
    if w.shape != (emb.shape[0],):
        raise DimensionMismatch(f"{emb.shape[0]} embeddings but {w.size} weights")
    if (w < 0).any() or not np.isfinite(w).all():
        raise ValueError("weights must be finite and non-negative")
    total = math.fsum(w.tolist())
    if total <= 0.0:
        raise ZeroWeightSum("all pooling weights are zero")
    mean = kernels.weighted_sum(emb, w) / total
    norm = math.sqrt(float(np.dot(mean, mean)))
    if norm <= _ZERO_NORM:
        raise ZeroVector("weighted mean is the zero vector")
    return SentenceVector(mean / norm, normalized=True)


def cosine_similarity(x: SentenceVector | np.ndarray, y: SentenceVector | np.ndarray,
                      clamp: bool = True) -> float:
    a = x.components if isinstance(x, SentenceVector) else np.asarray(x, dtype=np.float64)
    b = y.components if isinstance(y, SentenceVector) else np.asarray(y, dtype=np.float64)
    if a.shape != b.shape:
        raise DimensionMismatch(f"{a.shape} vs {b.shape}")
    na = math.sqrt(float(np.dot(a, a)))
    nb = math.sqrt(float(np.dot(b, b)))
    if na == 0.0 or nb == 0.0:
        raise ZeroVector("cosine similarity of a zero vector")
    # elementwise product then fsum: exact symmetry in (x, y), order-independent rounding
    value = math.fsum((a * b).tolist()) / (na * nb)
    return min(1.0, max(-1.0, value)) if clamp else value


def sentence_tokens(sentence: str, codec: CodecConfig, tokenizer: TokenizerConfig,
                    chunk_long_tokens: bool = False) -> list[str]:
    tokens = tokenize(sentence, tokenizer)
    if chunk_long_tokens:
        tokens = [piece for t in tokens for piece in iter_chunks(t, codec.l_max)]
    return tokens


def embed_tokens(tokens: Sequence[str], scheme: WeightingScheme, codec: CodecConfig) -> SentenceVector:
    """Pool already-tokenized text according to ``scheme``."""
    if not tokens:
        raise EmptySentence("sentence has no tokens")
    kept = scheme.select(tokens)
    if not kept:
        # stopword removal swallowed everything: score it anyway, flagged
        vec = pool(encode_many(tokens, codec), np.ones(len(tokens)))
        return SentenceVector(vec.components, True, fallback=True)
    return pool(encode_many(kept, codec), scheme.weights(kept))


def embed_sentence(sentence: str, scheme: WeightingScheme, codec: CodecConfig,
                   tokenizer: TokenizerConfig = TokenizerConfig(),
                   chunk_long_tokens: bool = False) -> SentenceVector:
    tokens = sentence_tokens(sentence, codec, tokenizer, chunk_long_tokens)
    return embed_tokens(tokens, scheme, codec)
