"""
One-way fixed-effect ANOVA: partial eta squared and Cohen's f as nb values.
"""
import logging
import math
import numbers
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from base import NbMetric
from core import Contrast, Domain, NbValue, ValidationError, canonical_transform, unit_scaled

logger = logging.getLogger(__name__)


class AnovaError(ValidationError):
    """Base class for ANOVA errors"""
    pass


class InfiniteFError(AnovaError):
    """Raised when groups differ but have no within-group variance"""
    pass


class IndeterminateFError(AnovaError):
    """Raised when the data has no variance at all"""
    pass


def _require_df(value: object, name: str) -> int:
    if isinstance(value, bool) or not isinstance(value, numbers.Integral) or value < 1:
        raise AnovaError(f"{name} must be a positive integer, got {value!r}", field=name)
    return int(value)


@dataclass(frozen=True)
class AnovaSummary:
    """
    Summary statistics of a one-way ANOVA.

    Attributes:
        df_between: Between-group degrees of freedom (k - 1)
        df_within: Within-group degrees of freedom (N - k)
        f_stat: F statistic, nonnegative and finite
    """
    df_between: int
    df_within: int
    f_stat: float

    def __post_init__(self):
        object.__setattr__(self, 'df_between', _require_df(self.df_between, "df_between"))
        object.__setattr__(self, 'df_within', _require_df(self.df_within, "df_within"))
        f_stat = float(self.f_stat)
        if not math.isfinite(f_stat) or f_stat < 0:
            raise AnovaError(f"f_stat must be finite and nonnegative, got {self.f_stat!r}", field="f_stat")
        object.__setattr__(self, 'f_stat', f_stat)


@dataclass(frozen=True)
class GroupData:
    """
    Raw observations of a one-way design.

    Attributes:
        groups: One tuple of observations per group (at least 2 groups of 2)
        labels: Group labels, in the same order; defaults to "1", "2", ...
    """
    groups: Tuple[Tuple[float, ...], ...]
    labels: Optional[Tuple[str, ...]] = field(default=None)

    def __post_init__(self):
        groups = tuple(tuple(float(x) for x in group) for group in self.groups)
        if len(groups) < 2:
            raise AnovaError(f"at least 2 groups are required, got {len(groups)}", field="groups")
        labels = tuple(self.labels) if self.labels is not None else tuple(str(i + 1) for i in range(len(groups)))
        if len(labels) != len(groups):
            raise AnovaError(f"{len(labels)} labels given for {len(groups)} groups", field="labels")
        for label, group in zip(labels, groups):
            if len(group) < 2:
                raise AnovaError(f"group {label!r} has {len(group)} observation(s), at least 2 are required", field="groups")
            if not all(math.isfinite(x) for x in group):
                raise AnovaError(f"group {label!r} contains a non-finite observation", field="groups")
        object.__setattr__(self, 'groups', groups)
        object.__setattr__(self, 'labels', labels)

    @property
    def k(self) -> int:
        return len(self.groups)

    @property
    def total(self) -> int:
        return sum(len(group) for group in self.groups)


def _sums_of_squares(arrays: List[np.ndarray]) -> Tuple[float, float]:
    sizes = np.array([a.size for a in arrays], dtype=np.float64)
    means = np.array([a.mean() for a in arrays])
    grand_mean = np.concatenate(arrays).mean()
    ss_between = float(np.sum(sizes * (means - grand_mean) ** 2))
    ss_within = float(sum(np.sum((a - m) ** 2) for a, m in zip(arrays, means)))
    return ss_between, ss_within


def sums_of_squares(data: GroupData) -> Tuple[float, float]:
    """
    Between-group and within-group sums of squares.

    Both sums are formed from mean-subtracted values (two passes) rather than
    from raw sums of squares.

    Returns:
        Tuple[float, float]: (SS_between, SS_within)
    """
    return _sums_of_squares([np.asarray(group, dtype=np.float64) for group in data.groups])


def _scaled_sums_of_squares(data: GroupData) -> Tuple[float, float]:
    # one common power-of-two factor for every group keeps SS_b / SS_w exact
    pooled = unit_scaled(np.concatenate([np.asarray(group, dtype=np.float64) for group in data.groups]))
    arrays = np.split(pooled, np.cumsum([len(group) for group in data.groups])[:-1])
    return _sums_of_squares(arrays)


def anova_from_raw(data: GroupData) -> AnovaSummary:
    """
    Derive the one-way ANOVA summary from raw group observations.

    Args:
        data: Validated group data

    Returns:
        AnovaSummary: df_b = k - 1, df_w = N - k and F = (SS_b / df_b) / (SS_w / df_w)

    Raises:
        InfiniteFError: If SS_within is 0 while SS_between is positive, or F overflows
        IndeterminateFError: If both sums of squares are 0
    """
    ss_between, ss_within = _scaled_sums_of_squares(data)
    df_between = data.k - 1
    df_within = data.total - data.k
    if ss_within == 0.0:
        if ss_between == 0.0:
            raise IndeterminateFError("all observations are equal; F is indeterminate (0/0)", field="groups")
        raise InfiniteFError("groups differ but have no within-group variance; F is infinite", field="groups")
    f_stat = (ss_between / df_between) / (ss_within / df_within)
    if not math.isfinite(f_stat):
        raise InfiniteFError(f"within-group variance is negligible next to the group differences; F = {f_stat!r}",
                             field="groups")
    logger.debug("one-way ANOVA: k=%d N=%d scaled SS_b=%r SS_w=%r F=%r", data.k, data.total, ss_between, ss_within, f_stat)
    return AnovaSummary(df_between, df_within, f_stat)


def eta_squared_from_raw(data: GroupData) -> float:
    """
    Eta squared SS_between / (SS_between + SS_within) straight from the data.

    For one-way designs this equals partial eta squared of the derived summary.
    """
    ss_between, ss_within = _scaled_sums_of_squares(data)
    total = ss_between + ss_within
    if total == 0.0:
        raise IndeterminateFError("all observations are equal; eta squared is indeterminate", field="groups")
    return ss_between / total


def nb_partial_eta_sq(summary: AnovaSummary) -> NbValue:
    """
    Partial eta squared df_b F / (df_b F + df_w) as an nb value.

    Args:
        summary: ANOVA summary

    Returns:
        NbValue: 0 exactly when F = 0, increasing in F for fixed dfs
    """
    return PARTIAL_ETA_SQUARED.compute(summary)


def cohens_f(eta_sq: float) -> float:
    """
    Cohen's f = sqrt(eta^2 / (1 - eta^2)).

    Raises:
        AnovaError: If eta_sq is outside [0, 1)
    """
    if not (0.0 <= eta_sq < 1.0):
        raise AnovaError(f"eta_sq must lie in [0, 1), got {eta_sq!r}", field="eta_sq")
    return math.sqrt(eta_sq / (1.0 - eta_sq))


def nb_cohens_f(summary: AnovaSummary) -> NbValue:
    """The alternative ANOVA form f / (1 + f), monotone-equivalent to partial eta squared."""
    return COHENS_F.compute(summary)


class PartialEtaSquaredMetric(NbMetric[AnovaSummary]):
    """delta = df_b * F, delta0 = 0, scale = df_w."""
    domain = Domain.ANOVA
    metric_name = "partial eta squared"

    def contrast(self, data: AnovaSummary) -> Contrast:
        return Contrast(data.df_between * data.f_stat, 0.0, float(data.df_within))

    def compute(self, data: AnovaSummary) -> NbValue:
        weighted = data.df_between * data.f_stat
        return NbValue(weighted / (weighted + data.df_within), self.domain, self.metric_name)


class CohensFMetric(NbMetric[AnovaSummary]):
    """delta = Cohen's f, delta0 = 0, scale = 1."""
    domain = Domain.ANOVA
    metric_name = "Cohen's f nb"

    def contrast(self, data: AnovaSummary) -> Contrast:
        return Contrast(cohens_f(PARTIAL_ETA_SQUARED.compute(data).value), 0.0, 1.0)

    def compute(self, data: AnovaSummary) -> NbValue:
        return self.label(canonical_transform(cohens_f(PARTIAL_ETA_SQUARED.compute(data).value)))


PARTIAL_ETA_SQUARED = PartialEtaSquaredMetric()
COHENS_F = CohensFMetric()

