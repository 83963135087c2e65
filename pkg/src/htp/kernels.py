"""Hot numeric loops, each in a numba and a pure-numpy flavour.

The public names (``token_residues``, ``harmonic_project``, ``recover_residues``,
``weighted_sum``) are bound to one flavour at import time according to
:data:`htp._accel.USE_NUMBA`. Both flavours stay importable under the
``*_numba`` / ``*_numpy`` names so tests and the benchmark can compare them.

Layout conventions:
    digits      int64[n, L]   UTF-16 code units, most significant first, zero padded
    lengths     int64[n]      unpadded length of each row
    moduli      int64[k]
    residues    int64[n, k]
    embeddings  float64[n, 2k] as [sin_1, cos_1, sin_2, cos_2, ...]
"""
import math

import numpy as np

from ._accel import USE_NUMBA, njit

TWO_PI = 2.0 * math.pi


# -- residues of the base-B token integer ---------------------------------------
# Padding digits are zero, so the tail of Horner's rule is a multiplication by
# B**pad; the kernels stop at each token's length and apply that factor once.

@njit(cache=True, nogil=True)
def token_residues_numba(digits, lengths, moduli, base):
    n, length = digits.shape
    k = moduli.shape[0]
    out = np.empty((n, k), dtype=np.int64)
    for i in range(k):
        m = moduli[i]
        b = base % m
        # b**j mod m for j = 0..length
        pw = np.empty(length + 1, dtype=np.int64)
        pw[0] = 1 % m
        for j in range(1, length + 1):
            pw[j] = (pw[j - 1] * b) % m
        for t in range(n):
            r = 0
            # r < m < 2**20 and b < m, so r*b + digit stays far below 2**63
            for j in range(lengths[t]):
                r = (r * b + digits[t, j]) % m
            out[t, i] = (r * pw[length - lengths[t]]) % m
    return out


def token_residues_numpy(digits, lengths, moduli, base):
    digits = np.asarray(digits, dtype=np.int64)
    lengths = np.asarray(lengths, dtype=np.int64)
    moduli = np.asarray(moduli, dtype=np.int64)
    length = digits.shape[1]
    b = base % moduli
    pw = np.empty((length + 1, moduli.shape[0]), dtype=np.int64)
    pw[0] = 1 % moduli
    for j in range(1, length + 1):
        pw[j] = (pw[j - 1] * b) % moduli
    r = np.zeros((digits.shape[0], moduli.shape[0]), dtype=np.int64)
    for j in range(int(lengths.max(initial=0))):
        active = (j < lengths)[:, None]
        r = np.where(active, (r * b + digits[:, j, None]) % moduli, r)
    return (r * pw[length - lengths]) % moduli


# -- residue -> (sin, cos) ------------------------------------------------------

@njit(cache=True, nogil=True)
def harmonic_project_numba(res, moduli):
    n, k = res.shape
    out = np.empty((n, 2 * k), dtype=np.float64)
    for t in range(n):
        for i in range(k):
            angle = TWO_PI * res[t, i] / moduli[i]
            out[t, 2 * i] = math.sin(angle)
            out[t, 2 * i + 1] = math.cos(angle)
    return out


def harmonic_project_numpy(res, moduli):
    angle = TWO_PI * np.asarray(res, dtype=np.int64) / np.asarray(moduli, dtype=np.int64)
    out = np.empty((angle.shape[0], 2 * angle.shape[1]), dtype=np.float64)
    out[:, 0::2] = np.sin(angle)
    out[:, 1::2] = np.cos(angle)
    return out


# -- (sin, cos) -> residue ------------------------------------------------------
# Degenerate (0, 0) pairs come back as -1; callers turn that into an exception.

@njit(cache=True, nogil=True)
def recover_residues_numba(emb, moduli):
    n = emb.shape[0]
    k = moduli.shape[0]
    out = np.empty((n, k), dtype=np.int64)
    for t in range(n):
        for i in range(k):
            s = emb[t, 2 * i]
            c = emb[t, 2 * i + 1]
            if s == 0.0 and c == 0.0:
                out[t, i] = -1
                continue
            phase = math.atan2(s, c)
            if phase < 0.0:
                phase += TWO_PI
            m = moduli[i]
            # phase >= 0, so floor(x + 0.5) is round-half-away-from-zero
            out[t, i] = np.int64(math.floor(phase / TWO_PI * m + 0.5)) % m
    return out


def recover_residues_numpy(emb, moduli):
    emb = np.asarray(emb, dtype=np.float64)
    moduli = np.asarray(moduli, dtype=np.int64)
    s = emb[:, 0::2]
    c = emb[:, 1::2]
    phase = np.arctan2(s, c)
    phase = np.where(phase < 0.0, phase + TWO_PI, phase)
    out = np.floor(phase / TWO_PI * moduli + 0.5).astype(np.int64) % moduli
    out[(s == 0.0) & (c == 0.0)] = -1
    return out


# -- pooling accumulation -------------------------------------------------------
# Rows are added strictly in order so the result does not depend on BLAS or threads.

@njit(cache=True, nogil=True)
def weighted_sum_numba(emb, weights):
    n, d = emb.shape
    acc = np.zeros(d, dtype=np.float64)
    for t in range(n):
        w = weights[t]
        if w == 0.0:
            continue
        for j in range(d):
            acc[j] += w * emb[t, j]
    return acc


def weighted_sum_numpy(emb, weights):
    emb = np.asarray(emb, dtype=np.float64)
    acc = np.zeros(emb.shape[1], dtype=np.float64)
    for t in range(emb.shape[0]):
        w = float(weights[t])
        if w == 0.0:
            continue
        acc += w * emb[t]
    return acc


if USE_NUMBA:
    token_residues = token_residues_numba
    harmonic_project = harmonic_project_numba
    recover_residues = recover_residues_numba
    weighted_sum = weighted_sum_numba
else:
    token_residues = token_residues_numpy
    harmonic_project = harmonic_project_numpy
    recover_residues = recover_residues_numpy
    weighted_sum = weighted_sum_numpy

BACKEND = "numba" if USE_NUMBA else "numpy"
