import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cubelab.cubes import CubeSpec, cube_average, required_length
from cubelab.lab.oracles import (
    oracle_for,
    periodic_limit_oracle,
    product_of_integrals_oracle,
    rotation_fourier_k2,
    rotation_limit_oracle,
    rotation_quadrature,
)
from cubelab.orbits import GOLDEN, Bernoulli, Cyclic, Rotation, Skew, SkewCoordinate, SymbolFn, Table, TrigPoly, orbit

from .conftest import seeds

COS = TrigPoly.cos(1)


def test_product_oracle():
    sys_ = Bernoulli(0, 2)
    assert product_of_integrals_oracle([SymbolFn([1, -1]), SymbolFn([1, 1])], sys_) == 0.0
    assert product_of_integrals_oracle([SymbolFn([1, 1])] * 3, sys_) == 1.0
    fs = [SymbolFn([1, 0]), SymbolFn([2 / 3, 0]), SymbolFn([0.5, 0])]
    assert product_of_integrals_oracle(fs, sys_) == pytest.approx(1 / 24)
    with pytest.raises(ValueError):
        product_of_integrals_oracle([COS], Rotation())


def test_periodic_oracle_examples():
    assert periodic_limit_oracle([[3.0], [2.0], [0.5]], 2) == 3.0
    assert periodic_limit_oracle([[1.0, -1.0]] * 3, 2) == 1.0
    assert periodic_limit_oracle([[1.0] * 4] * 7, 3) == 1.0
    with pytest.raises(ValueError):
        periodic_limit_oracle([[1.0] * 200] * 7, 3)
    with pytest.raises(ValueError):
        periodic_limit_oracle([[1.0]] * 2, 2)


@given(seeds, st.sampled_from([(2, 2), (2, 5), (3, 3), (3, 4)]), st.integers(1, 3), st.integers(0, 10))
def test_periodic_oracle_matches_full_periods(seed, kp, reps, x0):
    k, p = kp
    r = np.random.default_rng(seed)
    tabs = [Table(r.uniform(-1, 1, p)) for _ in range((1 << k) - 1)]
    N = reps * p
    orbs = [orbit(Cyclic(p), t, x0, required_length(k, N)) for t in tabs]
    m = cube_average(CubeSpec(k, N, orbs), "naive").value
    assert m == pytest.approx(periodic_limit_oracle(tabs, k, x0), abs=1e-12)


def test_rotation_cos_triple():
    assert rotation_limit_oracle([COS] * 3, GOLDEN, 0.0) == pytest.approx(0.25)
    assert rotation_limit_oracle([COS] * 3, GOLDEN, 0.0, method="quadrature") == pytest.approx(0.25, abs=1e-12)
    one = TrigPoly.constant(1.0)
    assert rotation_limit_oracle([one, one, COS], GOLDEN, 0.3) == pytest.approx(0.0, abs=1e-15)
    assert rotation_limit_oracle([one] * 3, GOLDEN) == pytest.approx(1.0)
    assert rotation_limit_oracle([one] * 7, GOLDEN, k=3) == pytest.approx(1.0)


trig = st.lists(st.tuples(st.integers(0, 3), st.floats(-1, 1), st.floats(-1, 1)), min_size=1, max_size=3).map(
    lambda terms: TrigPoly(_symmetric(terms))
)


def _symmetric(terms):
    c = {}
    for f, re, im in terms:
        if f == 0:
            c[0] = c.get(0, 0) + re
        else:
            c[f] = c.get(f, 0) + complex(re, im)
            c[-f] = c.get(-f, 0) + complex(re, -im)
    return c


@given(st.lists(trig, min_size=3, max_size=3), st.floats(0, 1, exclude_max=True))
def test_fourier_form_matches_quadrature(polys, x):
    assert rotation_fourier_k2(polys, x) == pytest.approx(rotation_quadrature(polys, x, 2, points=64), abs=1e-10)


def test_k3_quadrature_cos():
    # only the (1, 1, -1) style frequency balances survive
    v = rotation_limit_oracle([COS] * 7, GOLDEN, 0.0, k=3)
    assert v == pytest.approx(0.0625, abs=1e-12)


def test_rotation_oracle_errors():
    with pytest.raises(ValueError):
        rotation_limit_oracle([COS] * 3, 0.5)
    with pytest.raises(ValueError):
        rotation_limit_oracle([COS] * 15, GOLDEN, k=4)
    with pytest.raises(ValueError):
        rotation_limit_oracle([COS] * 7, GOLDEN, k=3, method="fourier")


def test_oracle_for_dispatch():
    assert oracle_for(Bernoulli(1), [SymbolFn([1, 0])] * 3, 2, 0) == pytest.approx(0.125)
    assert oracle_for(Cyclic(2), [Table([1, -1])] * 3, 2, 0) == 1.0
    assert oracle_for(Rotation(), [COS] * 3, 2, 0.0) == pytest.approx(0.25)
    assert oracle_for(Skew(), [SkewCoordinate(COS)] * 3, 2, (0.0, 0.0)) is None


def test_rotation_average_approaches_oracle():
    N = 1024
    o = orbit(Rotation(), COS, 0.2, required_length(2, N))
    m = cube_average(CubeSpec.uniform(2, N, o)).value
    assert m == pytest.approx(rotation_limit_oracle([COS] * 3, GOLDEN, 0.2), abs=0.02)
    assert rotation_limit_oracle([COS] * 3, GOLDEN, 0.2) == pytest.approx(math.cos(2 * math.pi * 0.2) / 4)
