"""Modular arithmetic on arbitrary-precision integers.

Python's ``int`` is the big-integer type throughout; nothing here is allowed
to fall back to fixed-width arithmetic. Moduli themselves are small (well
below 2**20 for any realistic dimension), which is what lets the residue
kernels in :mod:`htp.kernels` work in int64.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import InvalidBasis, NotInvertible, ResidueOutOfRange

BASIS_FORMAT_VERSION = 1


def _sieve(limit: int) -> list[int]:
    is_prime = bytearray([1]) * (limit + 1)
    is_prime[0:2] = b"\x00\x00"
    for p in range(2, math.isqrt(limit) + 1):
        if is_prime[p]:
            is_prime[p * p :: p] = bytearray(len(range(p * p, limit + 1, p)))
    return [i for i, flag in enumerate(is_prime) if flag]


def first_primes(k: int, min_modulus: int = 3) -> list[int]:
    """Return the first ``k`` primes that are >= ``min_modulus``, ascending."""
    if k < 1:
        raise InvalidBasis(f"k must be >= 1, got {k}")
    if min_modulus < 2:
        raise InvalidBasis(f"min_modulus must be >= 2, got {min_modulus}")
    # prime counting bound pi(x) >= x / ln x for x >= 17; grow until enough
    limit = max(64, min_modulus + 64, int(1.3 * k * math.log(k + 2) + 16) + min_modulus)
    while True:
        primes = [p for p in _sieve(limit) if p >= min_modulus]
        if len(primes) >= k:
            return primes[:k]
        limit *= 2


def extended_gcd(a: int, b: int) -> tuple[int, int, int]:
    """Iterative extended Euclid: returns ``(g, x, y)`` with ``a*x + b*y == g``."""
    old_r, r = a, b
    old_x, x = 1, 0
    old_y, y = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_x, x = x, old_x - q * x
        old_y, y = y, old_y - q * y
    return old_r, old_x, old_y


def modular_inverse(a: int, m: int) -> int:
    """Return ``y`` in ``[1, m)`` with ``(a * y) % m == 1``.

    Raises:
        NotInvertible: ``a`` and ``m`` share a factor.
    """
    if m < 2:
        raise ValueError(f"modulus must be >= 2, got {m}")
    g, x, _ = extended_gcd(a % m, m)
    if g != 1:
        raise NotInvertible(f"{a} has no inverse modulo {m} (gcd={g})")
    return x % m


@dataclass(frozen=True)
class ModulusBasis:
    """Ordered, pairwise-coprime moduli with precomputed CRT constants.

    ``crt_weights[i]`` is ``M_i * y_i`` where ``M_i = M / m_i`` and ``y_i`` is
    the inverse of ``M_i`` mod ``m_i``. It is 1 mod ``m_i`` and 0 mod every
    other modulus.
    """

    moduli: tuple[int, ...]
    min_modulus: int = 3
    capacity: int = field(init=False, repr=False)
    crt_weights: tuple[int, ...] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        moduli = tuple(int(m) for m in self.moduli)
        if not moduli:
            raise InvalidBasis("basis needs at least one modulus")
        if any(m < 2 or m >= 2**63 for m in moduli):
            raise InvalidBasis("every modulus must be in [2, 2**63)")
        if any(b <= a for a, b in zip(moduli, moduli[1:])):
            raise InvalidBasis("moduli must be strictly increasing")
        for i, a in enumerate(moduli):
            for b in moduli[i + 1 :]:
                if math.gcd(a, b) != 1:
                    raise InvalidBasis(f"moduli {a} and {b} are not coprime")
        capacity = math.prod(moduli)
        weights = []
        for m in moduli:
            cofactor = capacity // m
            weights.append(cofactor * modular_inverse(cofactor, m))
        object.__setattr__(self, "moduli", moduli)
        object.__setattr__(self, "capacity", capacity)
        object.__setattr__(self, "crt_weights", tuple(weights))

    @property
    def k(self) -> int:
        return len(self.moduli)

    @property
    def dim(self) -> int:
        return 2 * len(self.moduli)

    @property
    def moduli_array(self) -> np.ndarray:
        return np.asarray(self.moduli, dtype=np.int64)

    def to_dict(self) -> dict:
        return {
            "version": BASIS_FORMAT_VERSION,
            "k": self.k,
            "min_modulus": self.min_modulus,
            "moduli": list(self.moduli),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "ModulusBasis":
        if data.get("version") != BASIS_FORMAT_VERSION:
            raise InvalidBasis(f"unsupported basis version {data.get('version')!r}")
        moduli = [int(m) for m in data["moduli"]]
        if len(moduli) != int(data["k"]):
            raise InvalidBasis(f"k={data['k']} but {len(moduli)} moduli listed")
        basis = cls(tuple(moduli), int(data.get("min_modulus", 3)))
        # CRT constants are rebuilt above; verify them before handing out
        for i, (m, w) in enumerate(zip(basis.moduli, basis.crt_weights)):
            if w % m != 1 or any(w % other for j, other in enumerate(basis.moduli) if j != i):
                raise InvalidBasis(f"CRT weight {i} failed verification")
        return basis

    @classmethod
    def from_json(cls, text: str) -> "ModulusBasis":
        return cls.from_dict(json.loads(text))


@lru_cache(maxsize=64)
def generate_basis(k: int, min_modulus: int = 3) -> ModulusBasis:
    """First ``k`` primes >= ``min_modulus`` as a ready-to-use basis.

    >>> generate_basis(3).moduli
    (3, 5, 7)
    >>> generate_basis(3).capacity
    105
    """
    return ModulusBasis(tuple(first_primes(k, min_modulus)), min_modulus)


def basis_for_dim(dim: int, min_modulus: int = 3) -> ModulusBasis:
    if dim < 2 or dim % 2:
        raise InvalidBasis(f"embedding dimension must be a positive even integer, got {dim}")
    return generate_basis(dim // 2, min_modulus)


def residues(n: int, basis: ModulusBasis) -> list[int]:
    if n < 0:
        raise ValueError("negative integers are not supported")
    return [n % m for m in basis.moduli]


def crt_reconstruct(residue_list: Sequence[int], basis: ModulusBasis) -> int:
    """Unique ``n`` in ``[0, M)`` with ``n % m_i == residue_list[i]``."""
    if len(residue_list) != basis.k:
        raise ResidueOutOfRange(f"expected {basis.k} residues, got {len(residue_list)}")
    total = 0
    for r, m, w in zip(residue_list, basis.moduli, basis.crt_weights):
        r = int(r)
        if not 0 <= r < m:
            raise ResidueOutOfRange(f"residue {r} outside [0, {m})")
        if r:
            total += r * w
    return total % basis.capacity
