"""
Core: the general neutrality boundary form and the canonical transform.

Every domain metric in this project reduces to

    nb = |delta - delta0| / (|delta - delta0| + scale)

for a suitable contrast (delta, delta0, scale). This module owns that form,
the value type it produces, and the error type every other module derives from.
"""
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np


class ValidationError(Exception):
    """
    Raised when an input violates an invariant of the framework.

    Attributes:
        field: Name of the offending field, when one can be singled out
    """

    def __init__(self, message: str, field: Optional[str] = None):
        super().__init__(message)
        self.field = field


class Domain(str, Enum):
    """Domain an nb value originates from."""
    GENERAL = "general"
    BINARY_2X2 = "binary_2x2"
    CONTINGENCY_RXC = "contingency_rxc"
    ANOVA = "anova"
    CORRELATION = "correlation"


def _require_finite(value: float, field: str):
    if not math.isfinite(value):
        raise ValidationError(f"{field} must be finite, got {value!r}", field=field)


@dataclass(frozen=True)
class Contrast:
    """
    An observed contrast, its neutrality reference and a scale parameter.

    Attributes:
        delta: Observed contrast value, in domain units
        delta0: Neutrality reference, same units as delta
        scale: Positive scale parameter normalizing the distance, same units
    """
    delta: float
    delta0: float
    scale: float

    def __post_init__(self):
        _require_finite(self.delta, "delta")
        _require_finite(self.delta0, "delta0")
        _require_finite(self.scale, "scale")
        if self.scale <= 0:
            raise ValidationError(f"scale must be strictly positive, got {self.scale!r}", field="scale")

    @property
    def distance(self) -> float:
        """Absolute distance |delta - delta0| from the neutrality reference."""
        distance = abs(self.delta - self.delta0)
        # finite operands can still overflow on subtraction
        _require_finite(distance, "delta")
        return distance


@dataclass(frozen=True)
class NbValue:
    """
    A neutrality boundary value in [0, 1).

    The constructor rejects anything outside [0, 1) instead of clamping, so a
    formula that drifts out of range fails loudly.

    Attributes:
        value: The nb value
        domain: Domain the value was computed in
        metric_name: Human-readable name of the metric that produced it
    """
    value: float
    domain: Domain = Domain.GENERAL
    metric_name: str = "nb"

    def __post_init__(self):
        if not (0.0 <= self.value < 1.0):
            raise ValidationError(f"nb value must lie in [0, 1), got {self.value!r}", field="value")

    def __float__(self) -> float:
        return self.value


def canonical_transform(x: float) -> NbValue:
    """
    Map a nonnegative distance onto [0, 1) via x / (1 + x).

    Args:
        x: Nonnegative, finite distance (e.g. a Risk Quotient or |z|)

    Returns:
        NbValue: x / (1 + x) in the general domain

    Raises:
        ValidationError: If x is negative, not finite, or so large that x / (1 + x) rounds to 1
    """
    _require_finite(x, "x")
    if x < 0:
        raise ValidationError(f"x must be nonnegative, got {x!r}", field="x")
    value = x / (1.0 + x)
    if value >= 1.0:
        raise ValidationError(f"x = {x!r} is too large to keep x / (1 + x) below 1 in binary64", field="x")
    return NbValue(value, Domain.GENERAL, "canonical transform")


def nb_general(contrast: Contrast) -> NbValue:
    """
    Evaluate the general form |delta - delta0| / (|delta - delta0| + scale).

    The ratio distance/scale is formed first and passed through the canonical
    transform, so the general form and the domain-specific forms built on
    canonical_transform share one rounding path.

    Args:
        contrast: A validated contrast

    Returns:
        NbValue: The neutrality boundary value, 0 exactly when delta == delta0

    Raises:
        ValidationError: If the distance overflows or the ratio to the scale
            is not representable
    """
    ratio = contrast.distance / contrast.scale
    if not math.isfinite(ratio):
        raise ValidationError(
            f"distance {contrast.distance!r} is too large relative to scale {contrast.scale!r}",
            field="scale",
        )
    return NbValue(canonical_transform(ratio).value, Domain.GENERAL, "general nb")


def unit_scaled(values: np.ndarray) -> np.ndarray:
    """
    Divide values by the power of two just above their largest magnitude.

    The result lies in (-1, 1). Scaling by a power of two is exact for all but
    underflowing elements, and squares and products of the result stay finite.
    """
    peak = float(np.max(np.abs(values))) if values.size else 0.0
    if peak == 0.0:
        return values
    _, exponent = math.frexp(peak)
    return np.ldexp(values, -exponent)
