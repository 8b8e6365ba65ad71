"""
Qualitative robustness bands for nb values.

Bands are half-open intervals closed on the left, so a boundary value such as
0.05 belongs to the stronger band.
"""
from bisect import bisect_right
from dataclasses import dataclass
from enum import Enum
from typing import Tuple, Union

from core import NbValue


class BandLabel(str, Enum):
    EXTREMELY_FRAGILE = "extremely_fragile"
    FRAGILE = "fragile"
    MODERATELY_ROBUST = "moderately_robust"
    ROBUST = "robust"
    VERY_ROBUST = "very_robust"


@dataclass(frozen=True)
class RobustnessBand:
    """
    One row of the interpretation table.

    Attributes:
        label: Machine-readable band label
        interpretation: Band name as read by people ("Robust")
        meaning: What the band says about the distance from neutrality
        lower: Inclusive lower bound
        upper: Exclusive upper bound
    """
    label: BandLabel
    interpretation: str
    meaning: str
    lower: float
    upper: float

    def contains(self, value: float) -> bool:
        return self.lower <= value < self.upper


BANDS: Tuple[RobustnessBand, ...] = (
    RobustnessBand(BandLabel.EXTREMELY_FRAGILE, "Extremely fragile", "Near neutrality", 0.0, 0.05),
    RobustnessBand(BandLabel.FRAGILE, "Fragile", "Slight separation", 0.05, 0.10),
    RobustnessBand(BandLabel.MODERATELY_ROBUST, "Moderately robust", "Stable separation", 0.10, 0.25),
    RobustnessBand(BandLabel.ROBUST, "Robust", "Strong separation", 0.25, 0.50),
    RobustnessBand(BandLabel.VERY_ROBUST, "Very robust", "Far from neutrality", 0.50, 1.0),
)

_LOWER_BOUNDS = [band.lower for band in BANDS]


def classify(nb: Union[NbValue, float]) -> RobustnessBand:
    """
    Return the band whose interval contains the value.

    Args:
        nb: An nb value (a bare float is validated as one)

    Returns:
        RobustnessBand: The unique band containing the value
    """
    value = nb.value if isinstance(nb, NbValue) else NbValue(float(nb)).value
    return BANDS[bisect_right(_LOWER_BOUNDS, value) - 1]
