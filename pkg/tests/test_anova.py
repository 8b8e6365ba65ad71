"""
Tests for the one-way ANOVA forms of nb.
"""
import math

import numpy as np
import pytest
from scipy import stats

from anova import (
    AnovaError,
    AnovaSummary,
    GroupData,
    IndeterminateFError,
    InfiniteFError,
    anova_from_raw,
    cohens_f,
    eta_squared_from_raw,
    nb_cohens_f,
    nb_partial_eta_sq,
    sums_of_squares,
)
from core import Domain


def oracle_eta_squared(groups) -> float:
    """SS_b / (SS_b + SS_w) with plain Python two-pass sums."""
    values = [x for group in groups for x in group]
    grand = math.fsum(values) / len(values)
    ss_between = 0.0
    ss_within = 0.0
    for group in groups:
        mean = math.fsum(group) / len(group)
        ss_between += len(group) * (mean - grand) ** 2
        ss_within += math.fsum((x - mean) ** 2 for x in group)
    return ss_between / (ss_between + ss_within)


def random_group_data(rng: np.random.Generator) -> GroupData:
    k = int(rng.integers(2, 7))
    groups = []
    for _ in range(k):
        size = int(rng.integers(3, 41))
        groups.append(tuple(rng.normal(rng.uniform(-3, 3), rng.uniform(0.5, 3), size=size).tolist()))
    return GroupData(tuple(groups))


def test_anova_from_raw_identical_groups():
    """Equal group means give F = 0."""
    summary = anova_from_raw(GroupData(((1, 2, 3), (1, 2, 3))))
    assert summary == AnovaSummary(1, 4, 0.0)


def test_anova_from_raw_two_groups():
    """([0,0,1,1], [1,1,2,2]): SS_b = 2, SS_w = 2, F = 6 on (1, 6) df."""
    data = GroupData(((0, 0, 1, 1), (1, 1, 2, 2)))
    assert sums_of_squares(data) == (2.0, 2.0)
    summary = anova_from_raw(data)
    assert (summary.df_between, summary.df_within) == (1, 6)
    assert summary.f_stat == pytest.approx(6.0, rel=1e-12)  # type: ignore
    assert nb_partial_eta_sq(summary).value == pytest.approx(0.5, rel=1e-12)  # type: ignore


def test_anova_from_raw_zero_variance():
    """No variance at all is indeterminate; variance only between groups is infinite F."""
    with pytest.raises(IndeterminateFError, match="indeterminate"):
        anova_from_raw(GroupData(((1, 1), (1, 1))))
    with pytest.raises(InfiniteFError, match="infinite"):
        anova_from_raw(GroupData(((1, 1), (2, 2))))


@pytest.mark.parametrize("groups, f_stat", [
    (((0, 1e200), (5e200, 6e200)), 50.0),
    (((0, 1e200), (5, 6)), 1.0),
    (((0, 1e300), (5e300, 6e300), (2e300, 3e300)), 76 / 3),
    (((0, 1e-200), (5e-200, 6e-200)), 50.0),
])
def test_anova_from_raw_extreme_magnitudes(groups, f_stat):
    """Values near the ends of the float range give the same F as their unit-scale versions."""
    data = GroupData(groups)
    assert anova_from_raw(data).f_stat == pytest.approx(f_stat, rel=1e-12)  # type: ignore
    assert math.isfinite(eta_squared_from_raw(data))


def test_anova_from_raw_matches_scipy():
    """F agrees with scipy's one-way ANOVA."""
    rng = np.random.default_rng(2)
    for _ in range(50):
        data = random_group_data(rng)
        expected = stats.f_oneway(*[np.array(g) for g in data.groups]).statistic
        assert anova_from_raw(data).f_stat == pytest.approx(expected, rel=1e-9)  # type: ignore


def test_nb_partial_eta_sq_examples():
    """df_b F / (df_b F + df_w) for the worked summaries."""
    assert nb_partial_eta_sq(AnovaSummary(2, 27, 0.0)).value == 0.0
    assert nb_partial_eta_sq(AnovaSummary(2, 27, 4.5)).value == 0.25
    nb = nb_partial_eta_sq(AnovaSummary(1, 6, 8.0))
    assert nb.value == pytest.approx(8 / 14, rel=1e-15)  # type: ignore
    assert nb.domain is Domain.ANOVA
    assert nb.metric_name == "partial eta squared"


def test_nb_partial_eta_sq_bounded_for_large_f():
    """Huge but finite F stays below 1."""
    assert nb_partial_eta_sq(AnovaSummary(3, 100, 1e12)).value < 1.0


def test_cohens_f_examples():
    """0 -> 0, 0.5 -> 1, 0.25 -> sqrt(1/3)."""
    assert cohens_f(0.0) == 0.0
    assert cohens_f(0.5) == 1.0
    assert cohens_f(0.25) == pytest.approx(math.sqrt(1 / 3), rel=1e-15)  # type: ignore


@pytest.mark.parametrize("eta_sq", [-0.1, 1.0, 1.5, float("nan")])
def test_cohens_f_rejects_out_of_range(eta_sq):
    """eta squared must lie in [0, 1)."""
    with pytest.raises(AnovaError, match="eta_sq"):
        cohens_f(eta_sq)


def test_nb_cohens_f_examples():
    """f / (1 + f) for the worked summaries."""
    assert nb_cohens_f(AnovaSummary(2, 27, 0.0)).value == 0.0
    assert nb_cohens_f(AnovaSummary(1, 6, 6.0)).value == 0.5
    assert nb_cohens_f(AnovaSummary(2, 27, 4.5)).value == pytest.approx(0.366025, abs=1e-6)  # type: ignore


def test_raw_data_oracle_equivalence():
    """500 random designs: nb from the derived summary equals SS_b / (SS_b + SS_w)."""
    rng = np.random.default_rng(1234)
    for _ in range(500):
        data = random_group_data(rng)
        oracle = oracle_eta_squared(data.groups)
        assert nb_partial_eta_sq(anova_from_raw(data)).value == pytest.approx(oracle, rel=1e-10)  # type: ignore
        assert eta_squared_from_raw(data) == pytest.approx(oracle, rel=1e-10)  # type: ignore


def test_affine_invariance():
    """x -> alpha x + beta leaves F and both nb forms unchanged."""
    rng = np.random.default_rng(99)
    for _ in range(500):
        data = random_group_data(rng)
        alpha = float(rng.uniform(0.1, 10)) * (1 if rng.random() < 0.5 else -1)
        beta = float(rng.uniform(-100, 100))
        moved = GroupData(tuple(tuple(alpha * x + beta for x in g) for g in data.groups))
        before, after = anova_from_raw(data), anova_from_raw(moved)
        assert after.f_stat == pytest.approx(before.f_stat, rel=1e-9)  # type: ignore
        assert nb_partial_eta_sq(after).value == pytest.approx(nb_partial_eta_sq(before).value, rel=1e-9)  # type: ignore
        assert nb_cohens_f(after).value == pytest.approx(nb_cohens_f(before).value, rel=1e-9)  # type: ignore


def test_replication_keeps_eta_squared():
    """Repeating every observation m times changes df_w but not eta squared."""
    rng = np.random.default_rng(5)
    for _ in range(100):
        data = random_group_data(rng)
        m = int(rng.integers(2, 5))
        replicated = GroupData(tuple(tuple(x for x in g for _ in range(m)) for g in data.groups))
        assert anova_from_raw(replicated).df_within == replicated.total - replicated.k
        assert eta_squared_from_raw(replicated) == pytest.approx(eta_squared_from_raw(data), rel=1e-12)  # type: ignore
        assert nb_partial_eta_sq(anova_from_raw(replicated)).value == \
            pytest.approx(eta_squared_from_raw(data), rel=1e-10)  # type: ignore


def test_monotone_equivalence():
    """1,000 summary pairs with shared dfs order identically under both forms."""
    rng = np.random.default_rng(8)
    for _ in range(1_000):
        df_between, df_within = int(rng.integers(1, 10)), int(rng.integers(1, 200))
        f1, f2 = rng.uniform(0, 50, size=2).tolist()
        s1, s2 = AnovaSummary(df_between, df_within, f1), AnovaSummary(df_between, df_within, f2)
        eta_order = np.sign(nb_partial_eta_sq(s1).value - nb_partial_eta_sq(s2).value)
        f_order = np.sign(nb_cohens_f(s1).value - nb_cohens_f(s2).value)
        assert eta_order == f_order


@pytest.mark.parametrize("args, field", [
    ((0, 27, 1.0), "df_between"),
    ((2, 0, 1.0), "df_within"),
    ((2.0, 27, 1.0), "df_between"),
    ((2, 27, -1.0), "f_stat"),
    ((2, 27, float("inf")), "f_stat"),
    ((2, 27, float("nan")), "f_stat"),
])
def test_summary_validation(args, field):
    """Invalid summaries name the offending field."""
    with pytest.raises(AnovaError) as info:
        AnovaSummary(*args)
    assert info.value.field == field


@pytest.mark.parametrize("groups, match", [
    (((1, 2, 3),), "at least 2 groups"),
    (((1, 2, 3), (4,)), "at least 2 are required"),
    (((1, 2), (3, float("nan"))), "non-finite"),
])
def test_group_data_validation(groups, match):
    """Group data needs two groups of two finite observations."""
    with pytest.raises(AnovaError, match=match):
        GroupData(groups)


def test_group_data_labels():
    """Labels default to 1..k and must match the group count."""
    assert GroupData(((1, 2), (3, 4))).labels == ("1", "2")
    assert GroupData(((1, 2), (3, 4)), ("a", "b")).labels == ("a", "b")
    with pytest.raises(AnovaError, match="labels"):
        GroupData(((1, 2), (3, 4)), ("a",))
