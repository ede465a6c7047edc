"""Tuple frequency analysis, uniformity testing and class-structure detection.

Tuples are ranked lexicographically with symbol 1 lowest, so for ``a = 4``
the pair ``(1, 1)`` has rank 0, ``(1, 2)`` rank 1 and ``(4, 4)`` rank 15.
"""
from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .quasigroup import ParastropheSet
from .special import chi2_sf
from .symbols import to_internal

MAX_CELLS = 1 << 24
CHUNK = 1 << 20
MAX_EVALUATIONS = 10**8
DEFAULT_CLASS_THRESHOLD = 5.0


class SampleSizeWarning(UserWarning):
    """Expected cell counts are too small for the chi-square approximation."""


def letter_distribution(probs) -> np.ndarray:
    p = np.asarray(probs, dtype=float)
    if p.ndim != 1 or p.size < 2:
        raise ValueError("a letter distribution needs at least two probabilities")
    if np.any(p <= 0):
        raise ValueError("all letter probabilities must be positive")
    if abs(p.sum() - 1.0) > 1e-12:
        raise ValueError(f"letter probabilities sum to {p.sum()!r}, not 1")
    return p


@dataclass(frozen=True, eq=False)
class NGramDistribution:
    order: int
    m: int
    counts: np.ndarray
    total: int
    overlapping: bool

    @property
    def probs(self) -> np.ndarray:
        return self.counts / self.total

    @property
    def expected_count(self) -> float:
        return self.total / self.counts.size

    def tuples(self):
        """All m-tuples (1-based) in rank order."""
        return itertools.product(range(1, self.order + 1), repeat=self.m)


def tuple_rank(t: Sequence[int], order: int) -> int:
    r = 0
    for s in t:
        r = r * order + (s - 1)
    return r


def _codes(x, m, a, stride):
    n = (x.size - m) // stride + 1
    codes = np.zeros(n, dtype=np.int64)
    stop = stride * (n - 1) + 1
    for j in range(m):
        codes = codes * a + x[j:j + stop:stride]
    return codes


def count_ngrams(symbols, m: int, order: int, overlapping: bool = True) -> NGramDistribution:
    """Count m-tuple windows: every position if overlapping, else disjoint."""
    x = to_internal(symbols, order)
    if not 1 <= m <= x.size:
        raise ValueError(f"tuple length m={m} must be in 1..{x.size}")
    cells = order**m
    if cells > MAX_CELLS:
        raise ValueError(f"{order}^{m} cells is too many to tabulate")
    stride = 1 if overlapping else m
    counts = np.zeros(cells, dtype=np.int64)
    # chunks overlap by m - 1 symbols so no window is lost or double counted
    step = CHUNK - CHUNK % stride
    for lo in range(0, x.size, step):
        part = x[lo:lo + step + m - 1]
        if part.size < m:
            break
        counts += np.bincount(_codes(part, m, order, stride), minlength=cells)
    total = int(counts.sum())
    expected = x.size - m + 1 if overlapping else x.size // m
    assert total == expected, (total, expected)
    return NGramDistribution(order, m, counts, total, overlapping)


def distribution_from_probs(probs, order: int, m: int, total: int) -> NGramDistribution:
    """Wrap rounded ``probs * total`` counts as a distribution (for synthetic data)."""
    counts = np.rint(np.asarray(probs, dtype=float) * total).astype(np.int64)
    if counts.size != order**m:
        raise ValueError(f"expected {order**m} probabilities, got {counts.size}")
    return NGramDistribution(order, m, counts, int(counts.sum()), True)


@dataclass(frozen=True)
class UniformityReport:
    statistic: float
    df: int
    p_value: float
    l1: float
    max_dev: float

    def passes(self, alpha: float = 0.01) -> bool:
        return self.p_value >= alpha


def distance_to_uniform(d: NGramDistribution) -> tuple[float, float]:
    if d.total == 0:
        raise ValueError("empty distribution")
    dev = np.abs(d.probs - 1.0 / d.counts.size)
    return float(dev.sum()), float(dev.max())


def chi_square_uniformity(d: NGramDistribution) -> UniformityReport:
    if d.total == 0:
        raise ValueError("empty distribution")
    cells = d.counts.size
    expected = d.total / cells
    if expected < 5:
        warnings.warn(
            f"expected count {expected:.3g} per cell is below 5", SampleSizeWarning, stacklevel=2
        )
    stat = float(np.sum((d.counts - expected) ** 2) / expected)
    df = cells - 1
    l1, max_dev = distance_to_uniform(d)
    return UniformityReport(stat, df, chi2_sf(stat, df), l1, max_dev)


def expected_class_means(p, n: int) -> np.ndarray:
    """Probabilities ``p_i / a**n`` of the a classes of (n+1)-tuples after n E rounds."""
    p = letter_distribution(p)
    if n < 1:
        raise ValueError("n must be at least 1")
    return p / p.size**n


def merged_classes(p, n: int) -> list[tuple[float, int]]:
    """Distinct class probabilities with their sizes, equal ``p_i`` merged."""
    means = expected_class_means(p, n)
    size = means.size**n
    out: dict[float, int] = {}
    for v in means:
        out[float(v)] = out.get(float(v), 0) + size
    return sorted(out.items(), reverse=True)


@dataclass(frozen=True)
class ClassReport:
    sorted_probs: np.ndarray
    boundaries: tuple[float, ...]
    class_means: tuple[float, ...]
    class_sizes: tuple[int, ...]
    score: float
    threshold: float

    @property
    def detected(self) -> bool:
        return self.score >= self.threshold


def detect_classes(
    d: NGramDistribution, expected_classes: int, threshold: float = DEFAULT_CLASS_THRESHOLD
) -> ClassReport:
    """Split sorted tuple probabilities at the largest gaps and score the split.

    The score is the smallest gap used as a cut divided by the largest gap
    left inside a class (floored at ``1/(10N)``).
    """
    cells = d.counts.size
    if not 2 <= expected_classes <= cells:
        raise ValueError(f"expected_classes must be in 2..{cells}")
    probs = np.sort(d.probs)[::-1]
    gaps = probs[:-1] - probs[1:]
    order = np.argsort(-gaps, kind="stable")
    cut_idx = np.sort(order[: expected_classes - 1])
    cut = np.zeros(gaps.size, dtype=bool)
    cut[cut_idx] = True
    smallest_cut = float(gaps[cut].min())
    inner = float(gaps[~cut].max()) if (~cut).any() else 0.0
    score = smallest_cut / max(inner, 1.0 / (10 * d.total))
    edges = np.concatenate(([0], cut_idx + 1, [cells]))
    means = tuple(float(probs[lo:hi].mean()) for lo, hi in zip(edges[:-1], edges[1:]))
    sizes = tuple(int(hi - lo) for lo, hi in zip(edges[:-1], edges[1:]))
    bounds = tuple(float((probs[i] + probs[i + 1]) / 2) for i in cut_idx)
    return ClassReport(probs, bounds, means, sizes, score, threshold)


# -- exact enumeration -----------------------------------------------------

def _pe_batch(stack, leader, d1, x):
    """One PE round applied to every row of ``x`` at once (0-based)."""
    rows, k = x.shape
    a = stack.shape[1]
    out = np.empty_like(x)
    prev = np.full(rows, leader, dtype=np.int64)
    sel = np.full(rows, d1 % 6, dtype=np.int64)
    left = np.full(rows, d1, dtype=np.int64)
    for j in range(k):
        y = stack[sel, prev, x[:, j]]
        out[:, j] = y
        left -= 1
        done = left == 0
        if done.any() and j >= 1:
            d = a * (out[done, j - 1] + 1) + y[done] + 1
            sel[done] = d % 6
            left[done] = d
        prev = y
    return out


def exact_output_distribution(
    pset: ParastropheSet,
    rounds: Sequence[int],
    p,
    k: int,
    m: int,
    t: int,
) -> np.ndarray:
    """Exact law of the ciphertext m-tuple starting at 1-based position ``t``.

    Every plaintext of length ``k`` is weighted by the product of its letter
    probabilities; every tuple of round leaders is weighted uniformly.  The
    first-block lengths ``rounds`` are fixed.  Returns a vector of ``a**m``
    probabilities in tuple-rank order.
    """
    p = letter_distribution(p)
    a = pset.order
    if p.size != a:
        raise ValueError(f"distribution has {p.size} letters, alphabet has {a}")
    if not rounds:
        raise ValueError("need at least one round")
    if any(d < 2 for d in rounds):
        raise ValueError("d1 must be at least 2")
    if not 1 <= m <= k or not 1 <= t <= k - m + 1:
        raise ValueError(f"need 1 <= m <= k and 1 <= t <= k - m + 1 (k={k}, m={m}, t={t})")
    evaluations = a**k * a ** len(rounds)
    if evaluations > MAX_EVALUATIONS:
        raise ValueError(f"{evaluations} evaluations exceeds the limit of {MAX_EVALUATIONS}")

    stack = pset.stack
    result = np.zeros(a**m)
    powers = a ** np.arange(m - 1, -1, -1)
    leader_weight = 1.0 / a ** len(rounds)
    n_plain = a**k
    step = max(1, min(n_plain, CHUNK // k))
    for lo in range(0, n_plain, step):
        ranks = np.arange(lo, min(lo + step, n_plain))
        digits = (ranks[:, None] // a ** np.arange(k - 1, -1, -1)) % a
        weight = np.prod(p[digits], axis=1) * leader_weight
        for leaders in itertools.product(range(a), repeat=len(rounds)):
            y = digits
            for leader, d1 in zip(leaders, rounds):
                y = _pe_batch(stack, leader, d1, y)
            codes = y[:, t - 1:t - 1 + m] @ powers
            result += np.bincount(codes, weights=weight, minlength=a**m)
    return result
