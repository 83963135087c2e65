"""Reversible token <-> harmonic vector transform.

A token is read as UTF-16 code units, zero padded to ``l_max`` digits and
evaluated as a base-65536 integer ``N`` (first unit most significant). Each
residue ``N mod m_i`` becomes the unit-circle point ``(sin, cos)(2*pi*r/m_i)``.
Decoding reads the phases back, rounds them to residues and rebuilds ``N``
with the CRT, which is exact as long as the basis capacity exceeds
``65536 ** l_max``.
"""
from __future__ import annotations

import struct
import unicodedata
import warnings
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .errors import (
    CapacityWarning,
    CodePointOutOfRange,
    ContainsNull,
    DataError,
    DegeneratePhase,
    DimensionMismatch,
    EmptyToken,
    InvalidCodePoint,
    TokenTooLong,
)
from .modular_math import ModulusBasis, basis_for_dim, crt_reconstruct

BASE = 2**16
DEFAULT_DIM = 512
DEFAULT_LMAX = 24
NORMALIZATIONS = ("NFC", "none")

VECTOR_MAGIC = b"HTPVEC01"


@dataclass(frozen=True)
class CodecConfig:
    basis: ModulusBasis = field(default_factory=lambda: basis_for_dim(DEFAULT_DIM))
    l_max: int = DEFAULT_LMAX
    unicode_normalization: str = "NFC"
    base: int = BASE

    def __post_init__(self):
        if self.base != BASE:
            raise ValueError(f"base is fixed at 2**16, got {self.base}")
        if self.l_max < 1:
            raise ValueError(f"l_max must be >= 1, got {self.l_max}")
        if self.unicode_normalization not in NORMALIZATIONS:
            raise ValueError(f"unicode_normalization must be one of {NORMALIZATIONS}")

    @classmethod
    def for_dim(cls, dim: int = DEFAULT_DIM, l_max: int = DEFAULT_LMAX,
                min_modulus: int = 3, nfc: bool = True) -> "CodecConfig":
        return cls(basis_for_dim(dim, min_modulus), l_max, "NFC" if nfc else "none")

    @property
    def dim(self) -> int:
        return self.basis.dim

    @property
    def reversible(self) -> bool:
        """True when every legal token integer is below the basis capacity."""
        return self.basis.capacity > self.base**self.l_max


@dataclass(frozen=True)
class TokenInteger:
    value: int
    source_length: int


def _normalize(token: str, config: CodecConfig) -> str:
    if config.unicode_normalization == "NFC":
        return unicodedata.normalize("NFC", token)
    return token


def token_units(token: str, config: CodecConfig) -> np.ndarray:
    """Validated UTF-16 code units of ``token`` (after normalization), unpadded.

    Astral code points occupy two units (a surrogate pair), so every unit is a
    valid base-65536 digit.
    """
    token = _normalize(token, config)
    if not token:
        raise EmptyToken("token is empty")
    if "\x00" in token:
        raise ContainsNull("token contains U+0000, which is reserved for padding")
    try:
        raw = token.encode("utf-16-le")
    except UnicodeEncodeError as exc:
        # lone surrogates in a Python str cannot be written as UTF-16
        raise CodePointOutOfRange(f"token is not encodable as UTF-16: {exc}") from None
    units = np.frombuffer(raw, dtype="<u2").astype(np.int64)
    if units.size > config.l_max:
        raise TokenTooLong(f"token has {units.size} UTF-16 units, l_max is {config.l_max}")
    return units


def token_digits(tokens: Sequence[str], config: CodecConfig) -> tuple[np.ndarray, np.ndarray]:
    """Zero-padded digit matrix ``int64[len(tokens), l_max]`` and row lengths."""
    out = np.zeros((len(tokens), config.l_max), dtype=np.int64)
    lengths = np.empty(len(tokens), dtype=np.int64)
    for row, token in enumerate(tokens):
        units = token_units(token, config)
        out[row, : units.size] = units
        lengths[row] = units.size
    return out, lengths


def token_to_integer(token: str, config: CodecConfig) -> TokenInteger:
    units = token_units(token, config)
    value = 0
    for u in units.tolist():
        value = value * config.base + u
    value *= config.base ** (config.l_max - units.size)
    return TokenInteger(value, int(units.size))


def integer_to_token(n: TokenInteger | int, config: CodecConfig) -> str:
    value = n.value if isinstance(n, TokenInteger) else int(n)
    if not 0 <= value < config.base**config.l_max:
        raise InvalidCodePoint(f"integer {value} is outside [0, B**l_max)")
    units = []
    for _ in range(config.l_max):
        value, digit = divmod(value, config.base)
        units.append(digit)
    units.reverse()
    while units and units[-1] == 0:
        units.pop()
    if not units:
        raise EmptyToken("integer 0 decodes to the all-padding token")
    if 0 in units:
        raise InvalidCodePoint("padding digit inside token body; integer is corrupted")
    try:
        return struct.pack(f"<{len(units)}H", *units).decode("utf-16-le")
    except UnicodeDecodeError as exc:
        raise InvalidCodePoint(f"unpaired surrogate in decoded units: {exc}") from None


def encode_many(tokens: Sequence[str], config: CodecConfig) -> np.ndarray:
    """Embeddings of ``tokens`` stacked as ``float64[len(tokens), 2k]``."""
    digits, lengths = token_digits(tokens, config)
    res = kernels.token_residues(digits, lengths, config.basis.moduli_array, config.base)
    return kernels.harmonic_project(res, config.basis.moduli_array)


def encode(token: str, config: CodecConfig) -> np.ndarray:
    return encode_many([token], config)[0]


def encode_integer(n: int, basis: ModulusBasis) -> np.ndarray:
    """Project an arbitrary non-negative integer; used for continuity/periodicity checks."""
    res = np.array([[n % m for m in basis.moduli]], dtype=np.int64)
    return kernels.harmonic_project(res, basis.moduli_array)[0]


def recover_residue(sin_val: float, cos_val: float, modulus: int) -> int:
    emb = np.array([[sin_val, cos_val]], dtype=np.float64)
    r = int(kernels.recover_residues(emb, np.array([modulus], dtype=np.int64))[0, 0])
    if r < 0:
        raise DegeneratePhase("(0, 0) has no defined phase")
    return r


def recover_residue_matrix(embeddings: np.ndarray, basis: ModulusBasis) -> np.ndarray:
    embeddings = np.atleast_2d(np.asarray(embeddings, dtype=np.float64))
    if embeddings.shape[1] != basis.dim:
        raise DimensionMismatch(f"expected {basis.dim} components, got {embeddings.shape[1]}")
    res = kernels.recover_residues(embeddings, basis.moduli_array)
    if (res < 0).any():
        row, col = np.argwhere(res < 0)[0]
        raise DegeneratePhase(f"vector {row}, pair {col} is (0, 0)")
    return res


def _warn_capacity(config: CodecConfig) -> None:
    if not config.reversible:
        warnings.warn(
            f"basis capacity ({config.basis.capacity.bit_length()} bits) does not exceed "
            f"B**l_max ({16 * config.l_max} bits); decoding recovers N mod M only",
            CapacityWarning,
            stacklevel=3,
        )


def decode_many(embeddings: np.ndarray, config: CodecConfig) -> list[str]:
    _warn_capacity(config)
    res = recover_residue_matrix(embeddings, config.basis)
    return [integer_to_token(crt_reconstruct(row, config.basis), config) for row in res.tolist()]


def decode(embedding: np.ndarray, config: CodecConfig) -> str:
    _warn_capacity(config)
    res = recover_residue_matrix(embedding, config.basis)
    return integer_to_token(crt_reconstruct(res[0].tolist(), config.basis), config)


# -- serialization --------------------------------------------------------------
# Binary: 8-byte magic, little-endian uint64 D, then float64 LE components.
# Several vectors of the same D may follow one header back to back.

def dumps_binary(vectors: np.ndarray) -> bytes:
    vectors = np.atleast_2d(np.asarray(vectors, dtype="<f8"))
    return VECTOR_MAGIC + struct.pack("<Q", vectors.shape[1]) + vectors.tobytes()


def loads_binary(blob: bytes) -> np.ndarray:
    if len(blob) < 16 or blob[:8] != VECTOR_MAGIC:
        raise DataError("not an htp vector file (bad magic)")
    (dim,) = struct.unpack("<Q", blob[8:16])
    body = blob[16:]
    if dim == 0 or len(body) % (8 * dim):
        raise DataError(f"payload of {len(body)} bytes does not hold whole {dim}-vectors")
    return np.frombuffer(body, dtype="<f8").astype(np.float64).reshape(-1, dim)


def dumps_json(vectors: np.ndarray) -> str:
    import json

    vectors = np.asarray(vectors, dtype=np.float64)
    # repr round-trips float64 exactly
    return json.dumps(vectors.tolist())


def loads_json(text: str) -> np.ndarray:
    import json

    data = json.loads(text)
    if isinstance(data, dict):
        data = data["vector"] if "vector" in data else data["vectors"]
    data = np.asarray(data, dtype=np.float64)
    if data.ndim == 1:
        data = data[None, :]
    if data.ndim != 2:
        raise DataError("JSON vectors must be a list or a list of lists")
    return data


def load_vectors(blob: bytes) -> np.ndarray:
    """Sniff the format (binary magic or JSON text) and parse."""
    if blob[:8] == VECTOR_MAGIC:
        return loads_binary(blob)
    try:
        return loads_json(blob.decode("utf-8"))
    except (UnicodeDecodeError, ValueError, KeyError, TypeError) as exc:
        raise DataError(f"unrecognised vector file: {exc}") from None


def iter_chunks(token: str, l_max: int) -> Iterable[str]:
    """Split an over-long token into pieces of at most ``l_max`` UTF-16 units.

    Surrogate pairs are never split. Lossy convenience for the evaluation
    harness; off by default.
    """
    piece, width = [], 0
    for ch in token:
        w = 2 if ord(ch) > 0xFFFF else 1
        if width + w > l_max:
            yield "".join(piece)
            piece, width = [], 0
        piece.append(ch)
        width += w
    if piece:
        yield "".join(piece)
