"""Seeded Monte Carlo engine for the three statistics.

Streams are counter-based: each replication owns a Philox stream keyed by
(seed, replication index), and each (statistic, sample size) combination
draws from a disjoint block of that stream's counter space. Values
therefore depend only on (seed, replication, statistic, n), never on
execution order or worker count.
"""

from __future__ import annotations

import logging
import math
import statistics as _pystats
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .common import SampleSizeError, Statistic, TiesError
from .moments import limiting_variance
from .ranks import PairedSample, footrule_coefficient
from .representations import (
    UniformPairs,
    double_sum_representation,
    hajek_representation,
)
from .stats import (
    CurveGrid,
    KsOutcome,
    SummaryStats,
    ecdf_curve,
    gaussian_kde,
    ks_one_sample,
    ks_two_sample,
    normal_cdf,
    normal_pdf,
    summarize,
)

log = logging.getLogger(__name__)

_MASK64 = (1 << 64) - 1
_UNIT = 1 << 53
_MAX_REDRAWS = 100

UNIFORM_MARGINALS = "uniform"
PAPER_MARGINALS = "paper"

# The six distribution comparisons of the KS study, in report order.
KS_COMBINATIONS: tuple[tuple[str, str], ...] = (
    ("phi", "normal"),
    ("phiprime", "normal"),
    ("phidprime", "normal"),
    ("phi", "phiprime"),
    ("phi", "phidprime"),
    ("phiprime", "phidprime"),
)

_STAT_INDEX = {
    Statistic.FOOTRULE: 0,
    Statistic.DOUBLE_SUM: 1,
    Statistic.HAJEK: 2,
}


@dataclass(frozen=True)
class StreamKey:
    """Identifies one independent random stream: (seed, replication index)."""

    seed: int
    stream_id: int

    def generator(self, block: int = 0) -> np.random.Generator:
        """Generator for one counter block of this stream.

        Distinct keys give independent streams; distinct blocks give
        non-overlapping counter ranges within a stream, so draws for
        different (statistic, n) combinations never collide.
        """
        bitgen = np.random.Philox(
            key=[self.seed & _MASK64, self.stream_id & _MASK64],
            counter=[0, 0, 0, block & _MASK64],
        )
        return np.random.Generator(bitgen)


def uniform_open(gen: np.random.Generator, size: int | None = None):
    """Uniform draws strictly inside (0, 1).

    Integers from 1 to 2^53 - 1 divided by 2^53, so both endpoints are
    unreachable and the mean is exactly 1/2.
    """
    ints = gen.integers(1, _UNIT, size=size)
    return ints / float(_UNIT)


def _block(statistic: Statistic, n: int) -> int:
    return ((_STAT_INDEX[statistic] + 1) << 32) | n


def _inverse_normal(u: np.ndarray) -> np.ndarray:
    nd = _pystats.NormalDist()
    return np.array([nd.inv_cdf(t) for t in u])


def _draw_value(
    key: StreamKey,
    n: int,
    statistic: Statistic,
    scale_by_sqrt_n: bool,
    marginals: str,
) -> tuple[float, int]:
    """One statistic value plus the number of tie-forced redraws."""
    gen = key.generator(block=_block(statistic, n))
    redraws = 0
    while True:
        vec = uniform_open(gen, size=2 * n)
        u, v = vec[:n], vec[n:]
        try:
            if statistic is Statistic.FOOTRULE:
                if marginals == PAPER_MARGINALS:
                    x, y = _inverse_normal(u), v
                else:
                    x, y = u, v
                value = footrule_coefficient(PairedSample(x, y)).phi
            elif statistic is Statistic.DOUBLE_SUM:
                value = double_sum_representation(UniformPairs(u, v)).value
            else:
                value = hajek_representation(UniformPairs(u, v)).value
        except TiesError:
            # Machine-equal uniforms; essentially never, but stay exact.
            redraws += 1
            if redraws > _MAX_REDRAWS:
                raise
            continue
        if scale_by_sqrt_n:
            value *= math.sqrt(n)
        return value, redraws


def draw_statistic(
    key: StreamKey,
    n: int,
    statistic: Statistic,
    scale_by_sqrt_n: bool = False,
    marginals: str = UNIFORM_MARGINALS,
) -> float:
    """Draw one value of the statistic at sample size n under independence.

    The rank statistic is simulated on uniform marginals, which is valid
    because ranking makes it distribution-free; marginals="paper"
    instead feeds inverse-normal-transformed values to the x margin,
    which leaves the result bit-identical (the transform is strictly
    increasing) and exists as an explicit fidelity switch.
    """
    if n < 2 and statistic is not Statistic.HAJEK:
        raise SampleSizeError(f"{statistic.value} needs n >= 2")
    if n < 1:
        raise SampleSizeError("n must be positive")
    if marginals not in (UNIFORM_MARGINALS, PAPER_MARGINALS):
        raise ValueError(f"unknown marginals mode {marginals!r}")
    value, _ = _draw_value(key, n, statistic, scale_by_sqrt_n, marginals)
    return value


def _draw_many(
    seed: int,
    n: int,
    statistic: Statistic,
    replications: int,
    scale_by_sqrt_n: bool,
    marginals: str,
    threads: int,
) -> tuple[np.ndarray, int]:
    """All replication values, stream_id = replication index.

    Worker partitioning only splits the index range; every value is
    written to its own slot, so output is identical for any thread count.
    """
    values = np.empty(replications, dtype=float)

    def fill(lo: int, hi: int) -> int:
        redraws = 0
        for rep in range(lo, hi):
            values[rep], extra = _draw_value(
                StreamKey(seed, rep), n, statistic, scale_by_sqrt_n, marginals
            )
            redraws += extra
        return redraws

    if threads <= 1 or replications < 2 * threads:
        total_redraws = fill(0, replications)
    else:
        bounds = np.linspace(0, replications, threads + 1, dtype=int)
        with ThreadPoolExecutor(max_workers=threads) as pool:
            chunks = pool.map(fill, bounds[:-1], bounds[1:])
        total_redraws = sum(chunks)
    return values, total_redraws


@dataclass(frozen=True)
class SimConfig:
    """Settings for a replication study of a single statistic."""

    seed: int
    replications: int
    sample_sizes: tuple[int, ...]
    statistic: Statistic
    scale_by_sqrt_n: bool = False
    marginals: str = UNIFORM_MARGINALS
    threads: int = 1

    def __post_init__(self) -> None:
        if self.replications < 1:
            raise ValueError("replications must be >= 1")
        if not self.sample_sizes or min(self.sample_sizes) < 2:
            raise ValueError("sample sizes must all be >= 2")


@dataclass(frozen=True)
class MomentRow:
    statistic: Statistic
    n: int
    summary: SummaryStats
    redraws: int


@dataclass(frozen=True)
class KsRow:
    n: int
    combination: str
    outcome: KsOutcome


@dataclass(frozen=True)
class CurveRow:
    """KDE and ECDF of the scaled draws plus the limiting normal curves."""

    statistic: Statistic
    n: int
    density: CurveGrid
    cdf: CurveGrid
    ref_density: np.ndarray = field(repr=False)
    ref_cdf: np.ndarray = field(repr=False)


def run_moment_study(config: SimConfig) -> list[MomentRow]:
    """Summaries of the statistic against the true null value 0, per n."""
    rows = []
    for n in config.sample_sizes:
        values, redraws = _draw_many(
            config.seed,
            n,
            config.statistic,
            config.replications,
            config.scale_by_sqrt_n,
            config.marginals,
            config.threads,
        )
        rows.append(
            MomentRow(
                statistic=config.statistic,
                n=n,
                summary=summarize(values, 0.0),
                redraws=redraws,
            )
        )
    return rows


def _statistic_pools(
    seed: int,
    n: int,
    replications: int,
    marginals: str,
    threads: int,
) -> dict[str, np.ndarray]:
    pools: dict[str, np.ndarray] = {}
    for stat in Statistic:
        values, redraws = _draw_many(
            seed, n, stat, replications, True, marginals, threads
        )
        if redraws:
            log.info("n=%d %s: %d tie redraws", n, stat.value, redraws)
        pools[stat.value] = values
    return pools


def run_ks_study(
    seed: int,
    sample_sizes: tuple[int, ...],
    replications: int = 1000,
    marginals: str = UNIFORM_MARGINALS,
    threads: int = 1,
) -> list[KsRow]:
    """KS outcomes for the six distribution comparisons at each n.

    Per n, each statistic gets one pool of sqrt(n)-scaled draws from its
    own streams; the pool is reused across the combinations it enters.
    Pairs against "normal" are one-sample tests against the limiting
    Normal(0, 2/5) CDF; statistic pairs are two-sample tests.
    """
    def reference(t: float) -> float:
        return normal_cdf(t, 0.0, limiting_variance())

    rows = []
    for n in sample_sizes:
        pools = _statistic_pools(seed, n, replications, marginals, threads)
        for left, right in KS_COMBINATIONS:
            if right == "normal":
                outcome = ks_one_sample(pools[left], reference)
            else:
                outcome = ks_two_sample(pools[left], pools[right])
            rows.append(KsRow(n=n, combination=f"{left}-vs-{right}", outcome=outcome))
    return rows


def run_curve_study(
    seed: int,
    sample_sizes: tuple[int, ...],
    replications: int = 100_000,
    grid_size: int = 512,
    marginals: str = UNIFORM_MARGINALS,
    threads: int = 1,
) -> list[CurveRow]:
    """Density and CDF curves of the sqrt(n)-scaled statistics, per n.

    The ECDF and the reference Normal(0, 2/5) curves are evaluated on
    the KDE's grid so each (statistic, n) shares a single axis.
    """
    var = limiting_variance()
    rows = []
    for n in sample_sizes:
        pools = _statistic_pools(seed, n, replications, marginals, threads)
        for stat in Statistic:
            values = pools[stat.value]
            density = gaussian_kde(values, grid_size=grid_size)
            cdf = ecdf_curve(values, density.grid)
            ref_density = np.array([normal_pdf(g, 0.0, var) for g in density.grid])
            ref_cdf = np.array([normal_cdf(g, 0.0, var) for g in density.grid])
            rows.append(
                CurveRow(
                    statistic=stat,
                    n=n,
                    density=density,
                    cdf=cdf,
                    ref_density=ref_density,
                    ref_cdf=ref_cdf,
                )
            )
    return rows
