import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from surropt.doe import lhd, stratum_indices, uniform_pool


def test_single_point_design():
    bounds = np.array([[0.0, 1.0]] * 3)
    X = lhd(1, bounds, np.random.default_rng(0))
    assert X.shape == (1, 3)
    assert np.all((X >= 0) & (X <= 1))


def test_four_point_design_fills_each_quarter():
    bounds = np.array([[0.0, 1.0]] * 2)
    X = lhd(4, bounds, np.random.default_rng(1))
    for j in range(2):
        counts = np.histogram(X[:, j], bins=[0, 0.25, 0.5, 0.75, 1.0])[0]
        assert counts.tolist() == [1, 1, 1, 1]


def test_thirty_dimensional_design_stratification():
    bounds = np.array([[-5.0, 10.0]] * 30)
    X = lhd(31, bounds, np.random.default_rng(2))
    for j in range(30):
        counts = np.histogram(X[:, j], bins=np.linspace(-5, 10, 32))[0]
        assert np.all(counts == 1)


@given(n=st.integers(1, 40), d=st.integers(1, 6), seed=st.integers(0, 2**32 - 1),
       lo=st.floats(-100, 100), width=st.floats(0.1, 100))
@settings(max_examples=80, deadline=None)
def test_latin_property_and_bounds(n, d, seed, lo, width):
    bounds = np.array([[lo, lo + width]] * d)
    X = lhd(n, bounds, np.random.default_rng(seed))
    assert np.all(X >= bounds[:, 0]) and np.all(X <= bounds[:, 1])
    idx = stratum_indices(X, bounds, n)
    for j in range(d):
        assert sorted(idx[:, j].tolist()) == list(range(n))


def test_pool_single_point_and_bounds():
    bounds = np.array([[-5.0, 10.0]] * 2)
    X = uniform_pool(1, bounds, np.random.default_rng(0))
    assert X.shape == (1, 2)
    assert np.all((X >= -5) & (X <= 10))


def test_pool_mean_matches_box_center():
    bounds = np.array([[-5.0, 10.0]] * 2)
    X = uniform_pool(10**4, bounds, np.random.default_rng(4))
    assert np.all(np.abs(X.mean(axis=0) - 2.5) < 0.15)


def test_designs_are_seed_deterministic():
    bounds = np.array([[0.0, 1.0]] * 3)
    assert np.array_equal(uniform_pool(50, bounds, np.random.default_rng(9)),
                          uniform_pool(50, bounds, np.random.default_rng(9)))
    assert np.array_equal(lhd(7, bounds, np.random.default_rng(9)), lhd(7, bounds, np.random.default_rng(9)))


def test_invalid_arguments():
    rng = np.random.default_rng(0)
    with pytest.raises(ValueError):
        lhd(0, [[0, 1]], rng)
    with pytest.raises(ValueError):
        uniform_pool(0, [[0, 1]], rng)
    with pytest.raises(ValueError):
        lhd(3, [[1, 0]], rng)
    with pytest.raises(ValueError):
        lhd(3, [0, 1], rng)
