"""
Sample-size invariance: exact count scaling and Monte-Carlo estimator checks.

The population nb of a 2x2 design depends only on cell probabilities. Scaling
every count by k leaves RQ unchanged exactly, and the mean of the plug-in
estimator over multinomial samples of size n approaches the population value
as n grows.

Every replicate draws from its own generator, seeded by
SeedSequence(seed, spawn_key=(n, replicate)), so results do not depend on how
the replicates are scheduled across threads.
"""
import logging
import math
import numbers
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from itertools import product
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.stats import multinomial

from contingency import FOURFOLD, ContingencyTable, rq_rxc_exact, table_from_counts
from core import ValidationError, canonical_transform
from runner import evaluate

logger = logging.getLogger(__name__)

SIMPLEX_TOLERANCE = 1e-12
MIN_RECOMMENDED_REPLICATES = 100
GENERATOR_ID = "numpy.random.PCG64 <- SeedSequence(entropy=seed, spawn_key=(n, replicate))"
# replicates handed to one worker task
CHUNK_SIZE = 1000

Counts = Tuple[int, int, int, int]


@dataclass(frozen=True)
class PopulationTable2x2:
    """
    Cell probabilities of a 2x2 population, (p11, p12; p21, p22).

    Attributes:
        p11, p12, p21, p22: Nonnegative probabilities summing to 1 within SIMPLEX_TOLERANCE
    """
    p11: float
    p12: float
    p21: float
    p22: float

    def __post_init__(self):
        for name in ("p11", "p12", "p21", "p22"):
            value = float(getattr(self, name))
            if not math.isfinite(value) or value < 0:
                raise ValidationError(f"{name} must be a finite nonnegative probability, got {value!r}", field=name)
            object.__setattr__(self, name, value)
        total = self.p11 + self.p12 + self.p21 + self.p22
        if abs(total - 1.0) > SIMPLEX_TOLERANCE:
            raise ValidationError(f"probabilities must sum to 1, got {total!r}", field="probabilities")

    @property
    def probabilities(self) -> np.ndarray:
        p = np.array([self.p11, self.p12, self.p21, self.p22], dtype=np.float64)
        return p / p.sum()

    @property
    def is_degenerate(self) -> bool:
        """True when a single cell carries all of the probability."""
        return max(self.p11, self.p12, self.p21, self.p22) >= 1.0 - SIMPLEX_TOLERANCE


@dataclass(frozen=True)
class SampleSizeEstimate:
    """
    Monte-Carlo summary of the nb estimator at one sample size.

    Attributes:
        n: Sample size of every simulated table
        mean_nb_hat: Mean of the estimator over replicates
        sd_nb_hat: Sample standard deviation, None when there is a single replicate
        replicates: Number of simulated tables
    """
    n: int
    mean_nb_hat: float
    sd_nb_hat: Optional[float]
    replicates: int


@dataclass(frozen=True)
class SimulationResult:
    """
    Outcome of an estimator simulation.

    Attributes:
        population_nb: nb of the population the tables were drawn from
        per_n_estimates: One estimate per requested sample size, in request order
        seed: Root seed
        generator: Identifier of the random generator and seed derivation
        warnings: Conditions the caller should know about
    """
    population_nb: float
    per_n_estimates: Tuple[SampleSizeEstimate, ...]
    seed: int
    generator: str = GENERATOR_ID
    warnings: Tuple[str, ...] = field(default=())

    def to_dict(self) -> Dict[str, Any]:
        payload = asdict(self)
        payload["per_n_estimates"] = [asdict(e) for e in self.per_n_estimates]
        payload["warnings"] = list(self.warnings)
        return payload


def population_nb_2x2(pop: PopulationTable2x2) -> float:
    """
    Population nb with RQ = 4 |p11 p22 - p12 p21|; no sample size appears.

    Args:
        pop: Cell probabilities

    Returns:
        float: RQ / (1 + RQ)
    """
    rq = 4 * abs(pop.p11 * pop.p22 - pop.p12 * pop.p21)
    return canonical_transform(rq).value


def scale_check(table: ContingencyTable, k: int) -> bool:
    """
    Whether multiplying every count by k leaves RQ unchanged, in exact arithmetic.

    Args:
        table: Any contingency table
        k: Positive integer factor

    Returns:
        bool: True (both the deviation sum and n scale by k)
    """
    return rq_rxc_exact(table.scaled(k)) == rq_rxc_exact(table)


def _replicate_generator(seed: int, n: int, replicate: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(n, replicate))))


def sample_tables(pop: PopulationTable2x2, n: int, replicates: int, seed: int, start: int = 0) -> np.ndarray:
    """
    Draw multinomial(n, pop) tables, one generator per replicate.

    Args:
        pop: Cell probabilities
        n: Total count of each table
        replicates: Number of tables to draw
        seed: Root seed
        start: Index of the first replicate

    Returns:
        np.ndarray: Integer array of shape (replicates, 4), rows (a, b, c, d)
    """
    probabilities = pop.probabilities
    tables = np.empty((replicates, 4), dtype=np.int64)
    for row, replicate in enumerate(range(start, start + replicates)):
        tables[row] = _replicate_generator(seed, n, replicate).multinomial(n, probabilities)
    return tables


def _estimate_chunk(pop: PopulationTable2x2, n: int, start: int, count: int, seed: int) -> np.ndarray:
    tables = [table_from_counts(row.tolist()) for row in sample_tables(pop, n, count, seed, start)]
    return np.array([nb.value for nb in evaluate(FOURFOLD, tables)])


def _require_positive_int(value: object, name: str, minimum: int = 1) -> int:
    if isinstance(value, bool) or not isinstance(value, numbers.Integral) or value < minimum:
        raise ValidationError(f"{name} must be an integer >= {minimum}, got {value!r}", field=name)
    return int(value)


def run_estimator_sim(
        pop: PopulationTable2x2,
        sample_sizes: Sequence[int],
        replicates: int,
        seed: int,
        max_workers: Optional[int] = None,
    ) -> SimulationResult:
    """
    Estimate the mean and spread of the plug-in nb estimator at several sample sizes.

    Each replicate draws one multinomial table and evaluates nb_2x2 on it. The
    result is bit-identical for any max_workers, including sequential runs.

    Args:
        pop: Cell probabilities
        sample_sizes: Distinct sample sizes to simulate, each at least 4
        replicates: Tables per sample size, at least 1
        seed: Nonnegative root seed
        max_workers: Thread pool width; None runs sequentially

    Returns:
        SimulationResult: Population nb plus one estimate per sample size

    Raises:
        ValidationError: If a sample size, the replicate count or the seed is invalid
    """
    sizes = [_require_positive_int(n, "sample_sizes", minimum=4) for n in sample_sizes]
    if not sizes:
        raise ValidationError("at least one sample size is required", field="sample_sizes")
    repeated = sorted(n for n, count in Counter(sizes).items() if count > 1)
    if repeated:
        raise ValidationError(f"sample sizes must be distinct, repeated: {repeated}", field="sample_sizes")
    replicates = _require_positive_int(replicates, "replicates")
    seed = _require_positive_int(seed, "seed", minimum=0)

    warnings: List[str] = []
    if pop.is_degenerate:
        warnings.append("degenerate population: one cell has probability 1, every sampled table is neutral")
    if replicates < MIN_RECOMMENDED_REPLICATES:
        warnings.append(f"only {replicates} replicate(s); estimates below {MIN_RECOMMENDED_REPLICATES} are unreliable")
    if replicates == 1:
        warnings.append("standard deviation undefined for a single replicate")
    for message in warnings:
        logger.warning(message)

    tasks = [(n, start, min(CHUNK_SIZE, replicates - start)) for n in sizes for start in range(0, replicates, CHUNK_SIZE)]
    if max_workers is None or max_workers <= 1:
        chunks = [_estimate_chunk(pop, n, start, count, seed) for n, start, count in tasks]
    else:
        with ThreadPoolExecutor(max_workers=max_workers) as executor:
            futures = [executor.submit(_estimate_chunk, pop, n, start, count, seed) for n, start, count in tasks]
            chunks = [future.result() for future in futures]

    by_size: Dict[int, List[np.ndarray]] = {}
    for (n, _, _), chunk in zip(tasks, chunks):
        by_size.setdefault(n, []).append(chunk)

    estimates = []
    for n in sizes:
        values = np.concatenate(by_size[n])
        sd = float(np.std(values, ddof=1)) if replicates > 1 else None
        estimates.append(SampleSizeEstimate(n, float(np.mean(values)), sd, replicates))
        logger.debug("n=%d: mean nb_hat=%r sd=%r over %d replicates", n, estimates[-1].mean_nb_hat, sd, replicates)

    return SimulationResult(population_nb_2x2(pop), tuple(estimates), seed, warnings=tuple(warnings))


def enumerate_tables(n: int) -> List[Counts]:
    """All 2x2 count tables (a, b, c, d) with a + b + c + d = n."""
    return [
        (a, b, c, n - a - b - c)
        for a, b, c in product(range(n + 1), repeat=3)
        if a + b + c <= n
    ]


def exact_mean_nb(pop: PopulationTable2x2, n: int) -> float:
    """
    Exact expectation of nb_2x2 under multinomial(n, pop), by enumeration.

    Args:
        pop: Cell probabilities
        n: Total count, at least 1

    Returns:
        float: Probability-weighted mean of nb over every table of size n
    """
    n = _require_positive_int(n, "n")
    distribution = multinomial(n, pop.probabilities)
    total = 0.0
    for counts in enumerate_tables(n):
        probability = float(distribution.pmf(counts))
        if probability > 0.0:
            total += probability * FOURFOLD.compute(table_from_counts(counts)).value
    return total
