"""Harmonic token projection: deterministic, reversible, training-free text embeddings."""
from .codec import CodecConfig, decode, decode_many, encode, encode_many, integer_to_token, token_to_integer
from .evaluation import StsRecord, dimension_sweep, load_sts_tsv, pearson, run_eval, spearman
from .kernels import BACKEND
from .lexicon import TokenizerConfig, WeightingScheme, build_frequency_table, load_stopwords, tokenize
from .modular_math import ModulusBasis, crt_reconstruct, generate_basis, modular_inverse, residues
from .pooling import SentenceVector, cosine_similarity, embed_sentence, pool

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "CodecConfig",
    "ModulusBasis",
    "SentenceVector",
    "StsRecord",
    "TokenizerConfig",
    "WeightingScheme",
    "build_frequency_table",
    "cosine_similarity",
    "crt_reconstruct",
    "decode",
    "decode_many",
    "dimension_sweep",
    "embed_sentence",
    "encode",
    "encode_many",
    "generate_basis",
    "integer_to_token",
    "load_sts_tsv",
    "load_stopwords",
    "modular_inverse",
    "pearson",
    "pool",
    "residues",
    "run_eval",
    "spearman",
    "token_to_integer",
    "tokenize",
]
