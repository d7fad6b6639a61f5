import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cubelab.maximal import MaxBound, dense_sup, grid_values, twisted_profile_max, ww_max, ww_mean_square

from .conftest import seeds

EPS = 1e-12


def test_constant_sequence():
    mb = ww_max(np.ones(16), L=4)
    assert mb.grid_max == pytest.approx(1.0)
    assert mb.argmax == 0.0
    assert mb.width == pytest.approx(math.pi / 4)


def test_pure_frequency_peaks_at_its_frequency():
    N, q = 64, 5
    a = np.exp(-2j * np.pi * q * np.arange(N) / N)
    mb = ww_max(a, L=8)
    assert mb.grid_max == pytest.approx(1.0)
    assert mb.argmax == pytest.approx(q / N)


@given(seeds, st.integers(1, 80), st.sampled_from([1, 2, 4, 8]))
def test_grid_matches_direct_evaluation(seed, N, L):
    a = np.random.default_rng(seed).uniform(-1, 1, N)
    t = np.arange(L * N) / (L * N)
    direct = np.abs(np.exp(2j * np.pi * np.outer(t, np.arange(N))) @ a) / N
    assert np.allclose(grid_values(a, L), direct, atol=1e-12)


@given(seeds, st.integers(1, 60), st.sampled_from([1, 2, 3, 8]), st.booleans())
def test_dense_value_is_sandwiched(seed, N, L, complex_):
    r = np.random.default_rng(seed)
    a = r.uniform(-1, 1, N) + (1j * r.uniform(-1, 1, N) if complex_ else 0)
    mb = ww_max(a, L)
    ref = dense_sup(a, 16 * L * N)
    assert mb.grid_max - EPS <= ref <= mb.certified_upper + EPS
    assert mb.width <= math.pi * np.max(np.abs(a)) / L + EPS


@given(seeds, st.floats(0, 5))
def test_scaling(seed, c):
    a = np.random.default_rng(seed).uniform(-1, 1, 20)
    mb = ww_max(a, 4)
    s = ww_max(c * a, 4)
    assert s.grid_max == pytest.approx(mb.scaled(c).grid_max, abs=1e-12)
    with pytest.raises(ValueError):
        mb.scaled(-1)


@given(seeds, st.integers(1, 30))
def test_twisted_profile_rows(seed, N):
    r = np.random.default_rng(seed)
    b, c = r.uniform(-1, 1, N), r.uniform(-1, 1, 2 * N - 1)
    bounds = twisted_profile_max(b, c, N, 4)
    assert len(bounds) == N
    for n in (0, N - 1):
        ref = ww_max(b * c[n:n + N], 4)
        assert bounds[n].grid_max == pytest.approx(ref.grid_max, abs=1e-12)
        assert bounds[n].certified_upper == pytest.approx(ref.certified_upper, abs=1e-12)
    ms = ww_mean_square(b, c, N, 4, bounds)
    assert ms == pytest.approx(sum(x.certified_upper ** 2 for x in bounds) / N)


def test_errors():
    with pytest.raises(ValueError):
        ww_max(np.ones(4), L=0)
    with pytest.raises(ValueError):
        ww_max(np.ones((2, 2)))
    with pytest.raises(ValueError):
        twisted_profile_max(np.ones(4), np.ones(6), 4)
    assert isinstance(ww_max([0.0]), MaxBound)
