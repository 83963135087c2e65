"""Shared test utilities: random token generation and naive reference math."""
import math
import unicodedata

import numpy as np

# filled by test_acceptance, printed by conftest's terminal summary hook
ACCEPTANCE_LINES: list[str] = []


def report_criterion(name: str, passed: bool, detail: str) -> None:
    ACCEPTANCE_LINES.append(f"[{'PASS' if passed else 'FAIL'}] {name}: {detail}")


# (lo, hi) inclusive code point ranges; all NFC-stable for single characters
SCRIPT_RANGES = [
    (0x21, 0x7E),        # ASCII printable
    (0xC0, 0x17F),       # Latin-1 / Latin Extended-A
    (0x391, 0x3A9),      # Greek capitals
    (0x3B1, 0x3C9),      # Greek small
    (0x410, 0x44F),      # Cyrillic
    (0x5D0, 0x5EA),      # Hebrew
    (0x627, 0x64A),      # Arabic
    (0x905, 0x939),      # Devanagari
    (0x3041, 0x3096),    # Hiragana
    (0x4E00, 0x9FFF),    # CJK
    (0xAC00, 0xD7A3),    # Hangul syllables
    (0x1F600, 0x1F64F),  # emoji (astral, surrogate pair in UTF-16)
    (0x1D400, 0x1D433),  # math alphanumerics (astral)
]


def utf16_len(s: str) -> int:
    return len(s.encode("utf-16-le")) // 2


def random_token(rng: np.random.Generator, max_units: int = 24) -> str:
    """Random mixed-script token of 1..max_units UTF-16 units that survives NFC."""
    while True:
        target = int(rng.integers(1, max_units + 1))
        chars, units = [], 0
        while units < target:
            lo, hi = SCRIPT_RANGES[int(rng.integers(len(SCRIPT_RANGES)))]
            cp = int(rng.integers(lo, hi + 1))
            w = 2 if cp > 0xFFFF else 1
            if units + w > target:
                continue
            chars.append(chr(cp))
            units += w
        token = "".join(chars)
        if unicodedata.normalize("NFC", token) == token and 1 <= utf16_len(token) <= max_units:
            return token


def random_tokens(n: int, seed: int = 0, max_units: int = 24) -> list[str]:
    rng = np.random.default_rng(seed)
    return [random_token(rng, max_units) for _ in range(n)]


def naive_ranks(values):
    """Average ranks by full sort, quadratic tie scan."""
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        avg = (i + j) / 2.0 + 1.0
        for t in range(i, j + 1):
            ranks[order[t]] = avg
        i = j + 1
    return ranks


def naive_pearson(x, y):
    n = len(x)
    mx = math.fsum(x) / n
    my = math.fsum(y) / n
    sxy = math.fsum((a - mx) * (b - my) for a, b in zip(x, y))
    sxx = math.fsum((a - mx) ** 2 for a in x)
    syy = math.fsum((b - my) ** 2 for b in y)
    return sxy / math.sqrt(sxx * syy)


def naive_spearman(x, y):
    return naive_pearson(naive_ranks(list(x)), naive_ranks(list(y)))


def brute_force_crt(residue_list, moduli):
    """Scan [0, prod(moduli)) for the first n matching every residue."""
    capacity = math.prod(moduli)
    for n in range(capacity):
        if all(n % m == r for r, m in zip(residue_list, moduli)):
            return n
    return None


_FUNCTION = ["a", "the", "is", "of", "on", "in", "and", "with"]
_CONTENT = ("man woman dog cat guitar piano car road field river bird horse child ball "
            "plays runs eats rides jumps sings cuts drives cooks reads slices onion "
            "tomato potato bike boat train plane table chair").split()


def synthetic_sts_rows(n: int, seed: int = 0) -> list[tuple[str, str, float]]:
    """Sentence pairs whose gold score tracks their content-word overlap."""
    rng = np.random.default_rng(seed)
    rows = []
    for _ in range(n):
        base = list(rng.choice(_CONTENT, size=int(rng.integers(3, 7)), replace=False))
        keep = int(rng.integers(0, len(base) + 1))
        other = base[:keep] + list(rng.choice(_CONTENT, size=len(base) - keep))
        a = base + list(rng.choice(_FUNCTION, size=3))
        b = other + list(rng.choice(_FUNCTION, size=3))
        rng.shuffle(a)
        rng.shuffle(b)
        score = float(np.clip(5.0 * keep / len(base) + rng.normal(0, 0.4), 0, 5))
        rows.append((" ".join(a).capitalize() + ".", " ".join(b).capitalize() + ".", round(score, 3)))
    return rows


def write_semeval_tsv(path, rows) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for i, (a, b, s) in enumerate(rows):
            fh.write(f"main-captions\tMSRvid\t2012test\t{i:04d}\t{s}\t{a}\t{b}\n")
