"""
Correlation: Distance to Independence of a Pearson correlation.

nb = |z| / (1 + |z|) with z = atanh(r), i.e. the general form with
delta = |z|, delta0 = 0 and scale = 1 on the Fisher z scale.
"""
import logging
import math
from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np

from base import NbMetric
from core import Contrast, Domain, NbValue, ValidationError, canonical_transform, unit_scaled

logger = logging.getLogger(__name__)

# |r| this close to 1 puts z beyond ~14 and is treated as a perfect correlation
DEGENERATE_R_MARGIN = 1e-12


class CorrelationError(ValidationError):
    """Base class for correlation errors"""
    pass


class UndefinedCorrelationError(CorrelationError):
    """Raised when one coordinate has zero variance"""
    pass


class DegenerateCorrelationError(CorrelationError):
    """Raised when |r| is 1 (or within DEGENERATE_R_MARGIN of it)"""
    pass


@dataclass(frozen=True)
class PairedSample:
    """
    Paired observations (x, y).

    Attributes:
        pairs: At least three finite (x, y) pairs
    """
    pairs: Tuple[Tuple[float, float], ...]

    def __post_init__(self):
        pairs = tuple((float(x), float(y)) for x, y in self.pairs)
        if len(pairs) < 3:
            raise CorrelationError(f"at least 3 pairs are required, got {len(pairs)}", field="pairs")
        for i, (x, y) in enumerate(pairs):
            if not (math.isfinite(x) and math.isfinite(y)):
                raise CorrelationError(f"pair {i + 1} is not finite: ({x!r}, {y!r})", field="pairs")
        object.__setattr__(self, 'pairs', pairs)

    @property
    def x(self) -> np.ndarray:
        return np.array([p[0] for p in self.pairs], dtype=np.float64)

    @property
    def y(self) -> np.ndarray:
        return np.array([p[1] for p in self.pairs], dtype=np.float64)


@dataclass(frozen=True)
class CorrelationValue:
    """
    A Pearson correlation strictly inside (-1, 1).

    Attributes:
        r: The correlation coefficient
    """
    r: float

    def __post_init__(self):
        r = float(self.r)
        if not math.isfinite(r) or not (-1.0 < r < 1.0):
            raise DegenerateCorrelationError(f"r must lie strictly inside (-1, 1), got {self.r!r}", field="r")
        object.__setattr__(self, 'r', r)


def pearson_r(sample: PairedSample) -> CorrelationValue:
    """
    Product-moment correlation of a paired sample.

    Each coordinate is rescaled to unit magnitude by a power of two, then
    deviations from the means are formed, then the cross and square sums.

    Args:
        sample: Validated paired sample

    Returns:
        CorrelationValue: r with |r| < 1 - DEGENERATE_R_MARGIN

    Raises:
        UndefinedCorrelationError: If x or y has zero variance
        DegenerateCorrelationError: If |r| >= 1 - DEGENERATE_R_MARGIN
    """
    x = unit_scaled(sample.x)
    y = unit_scaled(sample.y)
    dx = x - x.mean()
    dy = y - y.mean()
    sxx = float(np.dot(dx, dx))
    syy = float(np.dot(dy, dy))
    if sxx == 0.0 or syy == 0.0:
        which = "x" if sxx == 0.0 else "y"
        raise UndefinedCorrelationError(f"{which} has zero variance; correlation is undefined", field=which)
    r = float(np.dot(dx, dy)) / math.sqrt(sxx * syy)
    r = min(1.0, max(-1.0, r))
    if abs(r) >= 1.0 - DEGENERATE_R_MARGIN:
        raise DegenerateCorrelationError(f"|r| = {abs(r)!r} is a perfect correlation; Fisher z diverges", field="r")
    logger.debug("pearson r over %d pairs: %r", len(sample.pairs), r)
    return CorrelationValue(r)


def fisher_z(r: Union[CorrelationValue, float]) -> float:
    """
    Fisher z-transform atanh(r).

    Evaluated on |r| and signed afterwards, so the transform is exactly odd.

    Raises:
        DegenerateCorrelationError: If |r| >= 1
    """
    value = r.r if isinstance(r, CorrelationValue) else CorrelationValue(r).r
    return math.copysign(math.atanh(abs(value)), value)


def nb_dti(r: CorrelationValue) -> NbValue:
    """
    Distance to Independence |z| / (1 + |z|).

    Args:
        r: Pearson correlation

    Returns:
        NbValue: 0 exactly when r = 0; identical for r and -r
    """
    return DISTANCE_TO_INDEPENDENCE.compute(r)


class DistanceToIndependenceMetric(NbMetric[CorrelationValue]):
    """delta = |atanh(r)|, delta0 = 0, scale = 1."""
    domain = Domain.CORRELATION
    metric_name = "DTI"

    def contrast(self, data: CorrelationValue) -> Contrast:
        return Contrast(abs(fisher_z(data)), 0.0, 1.0)

    def compute(self, data: CorrelationValue) -> NbValue:
        return self.label(canonical_transform(abs(fisher_z(data))))


DISTANCE_TO_INDEPENDENCE = DistanceToIndependenceMetric()
