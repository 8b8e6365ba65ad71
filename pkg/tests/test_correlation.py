"""
Tests for Pearson r, the Fisher z-transform and Distance to Independence.
"""
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import stats

from core import Domain
from correlation import (
    DISTANCE_TO_INDEPENDENCE,
    CorrelationError,
    CorrelationValue,
    DegenerateCorrelationError,
    PairedSample,
    UndefinedCorrelationError,
    fisher_z,
    nb_dti,
    pearson_r,
)


def random_sample(rng: np.random.Generator) -> PairedSample:
    size = int(rng.integers(5, 60))
    x = rng.normal(size=size)
    y = float(rng.uniform(-2, 2)) * x + rng.normal(size=size)
    return PairedSample(tuple(zip(x.tolist(), y.tolist())))


def test_pearson_r_zero():
    """(0,0), (1,1), (2,0) has no linear association."""
    assert pearson_r(PairedSample(((0, 0), (1, 1), (2, 0)))).r == 0.0


def test_pearson_r_negative():
    """(0,1), (1,0), (2,1), (3,0) gives r = -1/sqrt(5)."""
    r = pearson_r(PairedSample(((0, 1), (1, 0), (2, 1), (3, 0)))).r
    assert r == pytest.approx(-1 / math.sqrt(5), rel=1e-14)  # type: ignore


def test_pearson_r_matches_scipy():
    """r agrees with scipy.stats.pearsonr on random samples."""
    rng = np.random.default_rng(17)
    for _ in range(200):
        sample = random_sample(rng)
        expected = stats.pearsonr(sample.x, sample.y).statistic
        assert pearson_r(sample).r == pytest.approx(expected, abs=1e-12)  # type: ignore


@pytest.mark.parametrize("scale", [1e200, 1e300, 1e-200])
def test_pearson_r_extreme_magnitudes(scale):
    """Coordinates near the ends of the float range give the unit-scale r."""
    r = pearson_r(PairedSample(((0, 0), (scale, 0), (2 * scale, 1)))).r
    assert r == pytest.approx(math.sqrt(3) / 2, rel=1e-12)  # type: ignore
    r = pearson_r(PairedSample(((0, 0), (1, scale), (2, 0), (3, scale)))).r
    assert r == pytest.approx(1 / math.sqrt(5), rel=1e-12)  # type: ignore


def test_pearson_r_zero_variance():
    """A constant coordinate makes r undefined and the error names it."""
    with pytest.raises(UndefinedCorrelationError) as info:
        pearson_r(PairedSample(((1, 0), (1, 2), (1, 5))))
    assert info.value.field == "x"
    with pytest.raises(UndefinedCorrelationError) as info:
        pearson_r(PairedSample(((0, 3), (1, 3), (2, 3))))
    assert info.value.field == "y"


def test_pearson_r_perfect_correlation():
    """Exactly linear data is degenerate in both directions."""
    with pytest.raises(DegenerateCorrelationError):
        pearson_r(PairedSample(((0, 1), (1, 3), (2, 5), (3, 7))))
    with pytest.raises(DegenerateCorrelationError):
        pearson_r(PairedSample(((0, 1), (1, -1), (2, -3))))


@pytest.mark.parametrize("pairs, match", [
    (((0, 1), (1, 2)), "at least 3 pairs"),
    (((0, 1), (1, float("nan")), (2, 3)), "not finite"),
    (((0, 1), (float("inf"), 2), (2, 3)), "not finite"),
])
def test_paired_sample_validation(pairs, match):
    """At least three finite pairs are required."""
    with pytest.raises(CorrelationError, match=match):
        PairedSample(pairs)


@pytest.mark.parametrize("r", [1.0, -1.0, 1.5, float("nan")])
def test_correlation_value_range(r):
    """Only r strictly inside (-1, 1) is accepted."""
    with pytest.raises(DegenerateCorrelationError) as info:
        CorrelationValue(r)
    assert info.value.field == "r"


def test_fisher_z_examples():
    """atanh(0) = 0, atanh(tanh 1) = 1, atanh(0.5) ~ 0.549306."""
    assert fisher_z(CorrelationValue(0.0)) == 0.0
    assert fisher_z(CorrelationValue(math.tanh(1.0))) == pytest.approx(1.0, rel=1e-12)  # type: ignore
    assert fisher_z(0.5) == pytest.approx(0.549306, abs=1e-6)  # type: ignore


def test_fisher_z_rejects_unit_r():
    with pytest.raises(DegenerateCorrelationError):
        fisher_z(1.0)


def test_nb_dti_examples():
    """0 at r = 0, one half at z = 1, ~0.354551 at r = 0.5."""
    assert nb_dti(CorrelationValue(0.0)).value == 0.0
    assert nb_dti(CorrelationValue(math.tanh(1.0))).value == pytest.approx(0.5, rel=1e-12)  # type: ignore
    nb = nb_dti(CorrelationValue(0.5))
    assert nb.value == pytest.approx(0.354551, abs=1e-6)  # type: ignore
    assert nb.domain is Domain.CORRELATION
    assert nb.metric_name == "DTI"


def test_sign_symmetry_exact():
    """r and -r give bit-identical DTI."""
    for r in np.linspace(-0.999, 0.999, 2001).tolist():
        assert nb_dti(CorrelationValue(r)).value == nb_dti(CorrelationValue(-r)).value
        assert fisher_z(r) == -fisher_z(-r)


def test_monotone_in_absolute_r():
    """DTI strictly increases with |r| on a fine grid."""
    grid = np.linspace(0.0, 0.9999, 5001).tolist()
    values = [nb_dti(CorrelationValue(r)).value for r in grid]
    assert all(a < b for a, b in zip(values, values[1:]))


def test_general_form_agrees():
    """The domain formula and the general form with (|z|, 0, 1) agree exactly."""
    rng = np.random.default_rng(23)
    for r in rng.uniform(-0.9999, 0.9999, size=2_000).tolist():
        value = CorrelationValue(r)
        assert DISTANCE_TO_INDEPENDENCE.compute(value).value == \
            DISTANCE_TO_INDEPENDENCE.compute_general(value).value


def test_tanh_round_trip():
    """tanh(fisher_z(r)) recovers r."""
    for r in np.linspace(-0.99, 0.99, 999).tolist():
        assert math.tanh(fisher_z(r)) == pytest.approx(r, abs=1e-12)  # type: ignore


def test_affine_invariance():
    """Positive rescaling and shifts keep r; a sign flip on one axis negates it."""
    rng = np.random.default_rng(29)
    for _ in range(200):
        sample = random_sample(rng)
        r = pearson_r(sample).r
        a, c = rng.uniform(0.1, 10, size=2).tolist()
        b, d = rng.uniform(-50, 50, size=2).tolist()
        moved = PairedSample(tuple((a * x + b, c * y + d) for x, y in sample.pairs))
        flipped = PairedSample(tuple((-a * x + b, c * y + d) for x, y in sample.pairs))
        assert pearson_r(moved).r == pytest.approx(r, abs=1e-12)  # type: ignore
        assert pearson_r(flipped).r == pytest.approx(-r, abs=1e-12)  # type: ignore
        assert nb_dti(pearson_r(moved)).value == pytest.approx(nb_dti(pearson_r(sample)).value, abs=1e-12)  # type: ignore


def test_duplication_keeps_r():
    """Repeating every pair leaves r unchanged."""
    rng = np.random.default_rng(31)
    for _ in range(100):
        sample = random_sample(rng)
        doubled = PairedSample(sample.pairs + sample.pairs)
        assert pearson_r(doubled).r == pytest.approx(pearson_r(sample).r, abs=1e-13)  # type: ignore


coordinates = st.integers(min_value=-100, max_value=100)


@given(st.lists(st.tuples(coordinates, coordinates), min_size=5, max_size=30),
       st.sampled_from([0.25, 0.5, 2.0, 4.0]), st.integers(min_value=-50, max_value=50))
@settings(max_examples=200)
def test_affine_invariance_property(pairs, scale, shift):
    """Rescaling and shifting y keeps r whenever r is well defined."""
    try:
        r = pearson_r(PairedSample(tuple(pairs))).r
    except CorrelationError:
        return
    if abs(r) > 0.99:
        return
    moved = PairedSample(tuple((x, scale * y + shift) for x, y in pairs))
    assert pearson_r(moved).r == pytest.approx(r, abs=1e-12)  # type: ignore
