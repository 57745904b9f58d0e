"""Ranking, the footrule coefficient, and its exact permutation null law.

The coefficient for a paired sample is 1 - 3*D/(n^2 - 1) where D is the
total absolute displacement between the two rank vectors. Under
independence its null distribution depends only on D's distribution over
uniformly random permutations, which `enumerate_null_distribution`
tabulates exactly for small n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

import numpy as np

from .common import NonFiniteError, SampleSizeError, TiesError

ENUMERATION_MAX_N = 10

_TIE_MODES = ("raise", "midrank")


@dataclass(frozen=True)
class PairedSample:
    """Two equal-length sequences of real observations.

    The underlying theory assumes continuous marginals, so tie-free data;
    ranking enforces this unless mid-ranks are explicitly requested.
    """

    x: np.ndarray
    y: np.ndarray

    def __post_init__(self) -> None:
        x = np.atleast_1d(np.asarray(self.x, dtype=float))
        y = np.atleast_1d(np.asarray(self.y, dtype=float))
        if x.ndim != 1 or y.ndim != 1:
            raise ValueError("x and y must be one-dimensional")
        if len(x) != len(y):
            raise ValueError(f"length mismatch: {len(x)} vs {len(y)}")
        if len(x) < 2:
            raise SampleSizeError("need at least 2 paired observations")
        if not (np.isfinite(x).all() and np.isfinite(y).all()):
            raise NonFiniteError("sample contains NaN or infinite values")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @property
    def n(self) -> int:
        return len(self.x)


@dataclass(frozen=True)
class RankPair:
    """A pair of rank vectors, each a permutation of {1..n}."""

    r: np.ndarray
    s: np.ndarray
    n: int

    def __post_init__(self) -> None:
        r = np.asarray(self.r, dtype=np.int64)
        s = np.asarray(self.s, dtype=np.int64)
        expected = np.arange(1, self.n + 1)
        for name, vec in (("r", r), ("s", s)):
            if vec.shape != (self.n,) or not np.array_equal(np.sort(vec), expected):
                raise ValueError(f"{name} is not a permutation of 1..{self.n}")
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "s", s)

    @classmethod
    def from_sample(cls, sample: PairedSample) -> "RankPair":
        return cls(compute_ranks(sample.x), compute_ranks(sample.y), sample.n)


@dataclass(frozen=True)
class FootruleResult:
    """The displacement sum D and the coefficient 1 - 3*D/(n^2 - 1).

    `distance` is integral whenever the ranks are tie-free; mid-rank
    ties can make it fractional.
    """

    n: int
    distance: float
    phi: float


def compute_ranks(values, ties: str = "raise") -> np.ndarray:
    """Rank a sequence of reals, smallest value getting rank 1.

    Args:
        values: sequence of at least two distinct finite reals.
        ties: "raise" rejects equal values (the continuity assumption);
            "midrank" assigns tied values their average rank. Mid-ranks
            fall outside the distributional theory and exist only as an
            explicit escape hatch for tied data.

    Returns:
        int64 array that is a permutation of 1..n ("raise" mode), or a
        float64 array of mid-ranks.
    """
    if ties not in _TIE_MODES:
        raise ValueError(f"ties must be one of {_TIE_MODES}")
    vals = np.atleast_1d(np.asarray(values, dtype=float))
    if vals.ndim != 1:
        raise ValueError("values must be one-dimensional")
    n = len(vals)
    if n < 2:
        raise SampleSizeError("need at least 2 values to rank")
    if not np.isfinite(vals).all():
        raise NonFiniteError("values contain NaN or infinite entries")

    order = np.argsort(vals, kind="stable")
    sv = vals[order]
    has_tie = bool((sv[1:] == sv[:-1]).any())
    if ties == "raise":
        if has_tie:
            dup = float(sv[np.nonzero(sv[1:] == sv[:-1])[0][0]])
            raise TiesError(f"tied value {dup!r}; continuous data expected")
        ranks = np.empty(n, dtype=np.int64)
        ranks[order] = np.arange(1, n + 1)
        return ranks

    if not has_tie:
        ranks = np.empty(n, dtype=float)
        ranks[order] = np.arange(1, n + 1, dtype=float)
        return ranks
    run_start = np.empty(n, dtype=bool)
    run_start[0] = True
    run_start[1:] = sv[1:] != sv[:-1]
    run_id = np.cumsum(run_start) - 1
    run_len = np.bincount(run_id)
    run_end = np.cumsum(run_len)
    avg = (run_end - run_len + 1 + run_end) / 2.0
    ranks = np.empty(n, dtype=float)
    ranks[order] = avg[run_id]
    return ranks


def footrule_distance(ranks: RankPair) -> int:
    """Total absolute displacement D = sum_i |r_i - s_i|."""
    return int(np.abs(ranks.r - ranks.s).sum())


def footrule_coefficient(sample: PairedSample, ties: str = "raise") -> FootruleResult:
    """Rank both margins and evaluate the footrule coefficient.

    Raises TiesError on tied data unless ties="midrank" is requested.
    n = 2 is allowed but degenerate: the value is either 1 or -1, the
    latter below the large-sample floor of -1/2.
    """
    n = sample.n
    r = compute_ranks(sample.x, ties=ties)
    s = compute_ranks(sample.y, ties=ties)
    d = np.abs(r - s).sum()
    distance = int(d) if r.dtype.kind == "i" else float(d)
    phi = 1.0 - 3.0 * distance / (n * n - 1)
    return FootruleResult(n=n, distance=distance, phi=phi)


def max_distance(n: int) -> int:
    """Largest achievable D over permutations of {1..n}, floor(n^2/2)."""
    return n * n // 2


@dataclass(frozen=True)
class ExactNullDistribution:
    """Counts of permutations by displacement D, for one sample size.

    `counts[d]` is the number of permutations pi of {1..n} with
    sum_i |i - pi(i)| = d. The totals define the exact null law of the
    coefficient because ranking makes the statistic distribution-free.
    """

    n: int
    counts: dict[int, int] = field(repr=False)

    def __post_init__(self) -> None:
        total = sum(self.counts.values())
        if total != math.factorial(self.n):
            raise ValueError(f"counts sum to {total}, expected {self.n}!")
        cap = max_distance(self.n)
        for d in self.counts:
            if d % 2 != 0 or not 0 <= d <= cap:
                raise ValueError(f"impossible displacement {d}")
        mean_num = 3 * sum(d * c for d, c in self.counts.items())
        if mean_num != (self.n * self.n - 1) * total:
            raise ValueError("mean displacement violates (n^2-1)/3")

    @property
    def total(self) -> int:
        return math.factorial(self.n)

    def phi(self, distance: int) -> float:
        return 1.0 - 3.0 * distance / (self.n * self.n - 1)

    def sorted_items(self) -> Iterator[tuple[int, int]]:
        """(distance, count) pairs in ascending distance order."""
        return iter(sorted(self.counts.items()))

    def phi_moments_exact(self) -> tuple[Fraction, Fraction]:
        """Exact (mean, variance) of the coefficient under the null."""
        m = self.n * self.n - 1
        mean_d = Fraction(sum(d * c for d, c in self.counts.items()), self.total)
        mean_d2 = Fraction(sum(d * d * c for d, c in self.counts.items()), self.total)
        mean = 1 - Fraction(3, m) * mean_d
        var = Fraction(9, m * m) * (mean_d2 - mean_d * mean_d)
        return mean, var

    def two_sided_p(self, distance: int) -> Fraction:
        """Exact P(|phi| >= |phi(distance)|) under the uniform null.

        Compared in integers: |phi(d)| >= |phi(d0)| iff
        |m - 3d| >= |m - 3d0| with m = n^2 - 1.
        """
        m = self.n * self.n - 1
        ref = abs(m - 3 * distance)
        hits = sum(c for d, c in self.counts.items() if abs(m - 3 * d) >= ref)
        return Fraction(hits, self.total)


def _permutation_table(n: int) -> np.ndarray:
    """All permutations of {0..n-1} as an (n!, n) int8 array.

    Built level by level: the table for size k is formed by inserting
    the new largest element into every position of each size-(k-1) row.
    """
    perms = np.zeros((1, 1), dtype=np.int8)
    for k in range(2, n + 1):
        m = perms.shape[0]
        grown = np.empty((m * k, k), dtype=np.int8)
        for pos in range(k):
            block = grown[pos * m:(pos + 1) * m]
            block[:, pos] = k - 1
            block[:, :pos] = perms[:, :pos]
            block[:, pos + 1:] = perms[:, pos:]
        perms = grown
    return perms


def enumerate_null_distribution(n: int) -> ExactNullDistribution:
    """Tabulate D over every permutation of {1..n}.

    Exact integer arithmetic throughout; capped at n = 10 (10! rows).
    """
    if n < 2:
        raise SampleSizeError("enumeration needs n >= 2")
    if n > ENUMERATION_MAX_N:
        raise SampleSizeError(
            f"enumeration capped at n = {ENUMERATION_MAX_N} ({ENUMERATION_MAX_N}! permutations)"
        )
    table = _permutation_table(n)
    dists = np.abs(table.astype(np.int16) - np.arange(n, dtype=np.int16)).sum(axis=1)
    tallies = np.bincount(dists, minlength=max_distance(n) + 1)
    counts = {int(d): int(c) for d, c in enumerate(tallies) if c}
    return ExactNullDistribution(n=n, counts=counts)
