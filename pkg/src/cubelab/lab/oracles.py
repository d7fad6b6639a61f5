"""Exact or independently computed limits of cube averages."""
from __future__ import annotations

import math

import numpy as np

from ..orbits import Bernoulli, Cyclic, Rotation, Table, TrigPoly, exact_mean

#: enumeration guard for periodic_limit_oracle
MAX_PERIODIC_TERMS = 10 ** 6

#: quadrature points per axis for k = 2
QUADRATURE_POINTS_K2 = 1 << 10


def product_of_integrals_oracle(observables, specs):
    """``prod_j int f_j`` for weakly mixing (Bernoulli) systems.

    ``specs`` is one system shared by all functions or one per function.
    """
    observables = list(observables)
    if not isinstance(specs, (list, tuple)):
        specs = [specs] * len(observables)
    if len(specs) != len(observables):
        raise ValueError("need one system per observable")
    for spec in specs:
        if not isinstance(spec, Bernoulli):
            raise ValueError(f"{type(spec).__name__} is not weakly mixing; the product law does not apply")
    return math.prod(exact_mean(s, o) for s, o in zip(specs, observables))


def periodic_limit_oracle(tables, k, x=0):
    """Average of the cube product over ``(Z_p)^k``, by enumeration.

    ``tables[j - 1]`` is ``f_j`` on Z_p (a :class:`Table` or a sequence).
    """
    tabs = [np.asarray(t.values if isinstance(t, Table) else t, dtype=np.float64) for t in tables]
    if len(tabs) != (1 << k) - 1:
        raise ValueError(f"k={k} needs {(1 << k) - 1} tables, got {len(tabs)}")
    p = len(tabs[0])
    if any(len(t) != p for t in tabs):
        raise ValueError("all tables must live on the same Z_p")
    if p ** k > MAX_PERIODIC_TERMS:
        raise ValueError(f"p^k = {p ** k} exceeds the enumeration guard")
    grids = np.indices((p,) * k).reshape(k, -1)
    prod = np.ones(grids.shape[1])
    for j in range(1, 1 << k):
        e = sum(grids[i] for i in range(k) if (j >> i) & 1)
        prod = prod * tabs[j - 1][(x + e) % p]
    return math.fsum(prod) / p ** k


def _check_irrational_surrogate(alpha, max_denominator=64):
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0, 1)")
    for q in range(1, max_denominator + 1):
        if abs(q * alpha - round(q * alpha)) < 1e-12:
            raise ValueError(f"alpha={alpha!r} is rational with denominator {q}; no equidistribution limit")


def rotation_fourier_k2(polys, x=0.0):
    """``sum_c f1^(-c) f2^(-c) f3^(c) e(-c x)`` for ``k = 2``."""
    f1, f2, f3 = polys
    total = 0j
    for c, amp in f3.coefficients:
        total += f1.coefficient(-c) * f2.coefficient(-c) * amp * np.exp(-2j * np.pi * c * x)
    return float(total.real)


def _quadrature_points(polys, k):
    if k == 2:
        return QUADRATURE_POINTS_K2
    # the integrand's degree in s_i is at most the sum of the degrees of the
    # f_j that involve i; the trapezoid rule is exact below M
    need = max(sum(polys[j - 1].degree for j in range(1, 1 << k) if (j >> i) & 1) for i in range(k))
    return 1 << max(2, need.bit_length())


def rotation_quadrature(polys, x=0.0, k=2, points=None):
    """Tensor trapezoid rule for ``int_{T^k} prod_j f_j(x + sum_{i in eps(j)} s_i) ds``."""
    polys = list(polys)
    if len(polys) != (1 << k) - 1:
        raise ValueError(f"k={k} needs {(1 << k) - 1} trig polys")
    M = points or _quadrature_points(polys, k)
    s = np.arange(M) / M
    axes = np.meshgrid(*([s] * k), indexing="ij", sparse=True)
    prod = np.ones((M,) * k)
    for j in range(1, 1 << k):
        arg = x + sum(axes[i] for i in range(k) if (j >> i) & 1)
        prod = prod * polys[j - 1].evaluate(np.broadcast_to(arg, prod.shape) % 1.0)
    return math.fsum(prod.ravel()) / M ** k


def rotation_limit_oracle(polys, alpha, x=0.0, k=2, method="auto"):
    """Limit of the cube averages of trig polynomials along an irrational rotation.

    ``method``: ``"fourier"`` (closed form, k = 2 only), ``"quadrature"``,
    or ``"auto"`` (fourier for k = 2, quadrature for k = 3).
    """
    if k not in (2, 3):
        raise ValueError("rotation_limit_oracle supports k in {2, 3}")
    polys = list(polys)
    if not all(isinstance(p, TrigPoly) for p in polys):
        raise TypeError("rotation limits need trig_poly observables")
    _check_irrational_surrogate(alpha)
    if method == "auto":
        method = "fourier" if k == 2 else "quadrature"
    if method == "fourier":
        if k != 2:
            raise ValueError("the closed form is implemented for k = 2")
        return rotation_fourier_k2(polys, x)
    if method == "quadrature":
        return rotation_quadrature(polys, x, k)
    raise ValueError(f"unknown method {method!r}")


def oracle_for(system, observables, k, x):
    """The applicable limit oracle, or ``None`` when no exact one exists."""
    try:
        if isinstance(system, Bernoulli):
            return product_of_integrals_oracle(observables, system)
        if isinstance(system, Cyclic):
            if system.p ** k <= MAX_PERIODIC_TERMS:
                return periodic_limit_oracle(observables, k, x)
            return None
        if isinstance(system, Rotation) and all(isinstance(o, TrigPoly) for o in observables) and k in (2, 3):
            return rotation_limit_oracle(observables, system.alpha, x, k)
    except ValueError:
        return None
    return None


__all__ = [
    "oracle_for",
    "periodic_limit_oracle",
    "product_of_integrals_oracle",
    "rotation_fourier_k2",
    "rotation_limit_oracle",
    "rotation_quadrature",
]
