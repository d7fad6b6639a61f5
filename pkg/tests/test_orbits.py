import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cubelab.orbits import (
    GOLDEN,
    Bernoulli,
    Cyclic,
    IntervalIndicator,
    Rotation,
    Skew,
    SkewCoordinate,
    SymbolFn,
    Table,
    TrigPoly,
    advance,
    birkhoff_mean,
    exact_mean,
    orbit,
    rotation_points,
    skew_points,
    symbol_stream,
)

from .conftest import seeds

unit = st.floats(0.0, 1.0, exclude_max=True)


def test_rotation_first_points():
    o = orbit(Rotation(), IntervalIndicator(0.0, 1.0), 0.0, 5)
    assert o.values.tolist() == [1.0] * 5
    pts = rotation_points(GOLDEN, 0.0, 3)
    assert pts[0] == 0.0
    assert pts[1] == pytest.approx(GOLDEN)
    assert pts[2] == pytest.approx(2 * GOLDEN - 1)


@given(unit, st.integers(1, 3000))
def test_rotation_points_in_unit_interval(x0, n):
    pts = rotation_points(GOLDEN, x0, n)
    assert np.all((pts >= 0.0) & (pts < 1.0))


def test_rotation_points_accurate_at_large_n():
    n = 10**7
    pts = rotation_points(GOLDEN, 0.25, n + 1)
    from fractions import Fraction

    exact = (Fraction(0.25) + n * Fraction(GOLDEN)) % 1
    assert abs(pts[n] - float(exact)) < 1e-12


@given(st.sampled_from([1, 2, 3, 7, 12]), st.integers(0, 50), st.integers(1, 40))
def test_cyclic_orbit_is_periodic(p, x0, n):
    t = Table(np.arange(p, dtype=float))
    o = orbit(Cyclic(p), t, x0, n)
    assert o.values.tolist() == [float((x0 + i) % p) for i in range(n)]


@given(unit, unit, st.integers(2, 200))
def test_skew_closed_form_matches_iteration(x0, y0, n):
    xs, ys = skew_points(GOLDEN, x0, y0, n)
    x, y = x0, y0
    for i in range(n):
        d = abs(ys[i] - y)
        assert min(d, 1 - d) < 1e-9
        x, y = (x + GOLDEN) % 1.0, (y + x) % 1.0


def test_skew_length_guard():
    with pytest.raises(ValueError):
        skew_points(GOLDEN, 0.0, 0.0, (1 << 26) + 1)


@given(seeds, st.integers(0, 200000), st.integers(1, 5000))
def test_symbol_stream_prefix_consistent(seed, start, n):
    spec = Bernoulli(seed)
    whole = symbol_stream(spec, 0, start + n)
    assert np.array_equal(symbol_stream(spec, start, n), whole[start:])


def test_bernoulli_frequencies():
    s = symbol_stream(Bernoulli(3, 3), 0, 90000)
    counts = np.bincount(s, minlength=3) / len(s)
    assert np.allclose(counts, 1 / 3, atol=0.01)


@given(seeds, st.integers(0, 100), st.integers(0, 100))
def test_advance_shifts_orbit_bernoulli(seed, x0, s):
    spec, f = Bernoulli(seed), SymbolFn([1.0, -1.0])
    long = orbit(spec, f, x0, s + 50)
    assert np.array_equal(orbit(spec, f, advance(spec, x0, s), 50).values, long.values[s:])


@given(unit, st.integers(0, 500))
def test_advance_shifts_orbit_rotation(x0, s):
    spec, f = Rotation(), TrigPoly.cos(1)
    long = orbit(spec, f, x0, s + 30)
    assert np.allclose(orbit(spec, f, advance(spec, x0, s), 30).values, long.values[s:], atol=1e-9)


def test_trig_poly_validation_and_bounds():
    with pytest.raises(ValueError):
        TrigPoly({1: 1.0})
    f = TrigPoly.cos(2, 3.0)
    assert f.sup_bound == 3.0 and f.degree == 2
    x = np.linspace(0, 1, 101)
    assert np.allclose(f.evaluate(x), 3 * np.cos(4 * np.pi * x))
    assert np.all(np.abs(f.evaluate(x)) <= f.sup_bound)


def test_observable_system_mismatch():
    with pytest.raises(ValueError):
        orbit(Rotation(), Table([1.0]), 0, 3)
    with pytest.raises(ValueError):
        orbit(Cyclic(3), Table([1.0, 2.0]), 0, 3)
    with pytest.raises(ValueError):
        orbit(Bernoulli(0, 3), SymbolFn([1.0, 2.0]), 0, 3)
    with pytest.raises(ValueError):
        Rotation(2.0)


def test_orbit_values_read_only():
    o = orbit(Cyclic(2), Table([1.0, -1.0]), 0, 4)
    with pytest.raises(ValueError):
        o.values[0] = 5.0
    assert o.length == 4 and o.sup_bound == 1.0


def test_exact_means():
    assert exact_mean(Rotation(), IntervalIndicator(0.25, 0.75)) == 0.5
    assert exact_mean(Rotation(), TrigPoly({0: 0.3, 1: 0.5, -1: 0.5})) == pytest.approx(0.3)
    assert exact_mean(Cyclic(3), Table([1.0, 2.0, 6.0])) == 3.0
    assert exact_mean(Skew(), SkewCoordinate(TrigPoly.constant(2.0))) == 2.0


@pytest.mark.parametrize(
    "spec,obs,x0",
    [
        (Rotation(), TrigPoly.cos(1), 0.1),
        (Rotation(), IntervalIndicator(0.1, 0.4), 0.0),
        (Skew(), SkewCoordinate(TrigPoly.cos(1)), (0.3, 0.2)),
        (Bernoulli(9), SymbolFn([0.0, 1.0]), 0),
    ],
)
def test_birkhoff_means_converge(spec, obs, x0):
    o = orbit(spec, obs, x0, 1 << 16)
    assert birkhoff_mean(o, len(o)) == pytest.approx(exact_mean(spec, obs), abs=0.02)


def test_birkhoff_errors():
    o = orbit(Cyclic(2), Table([1.0, -1.0]), 0, 4)
    with pytest.raises(ValueError):
        birkhoff_mean(o, 5)
    with pytest.raises(ValueError):
        birkhoff_mean(o, 0)
    assert math.isclose(birkhoff_mean(o, 3), 1 / 3)
