"""Finite-N checks of the inequality chain for cube averages.

Each check returns an :class:`InequalityReport` with both sides computed
with constant 1.  Two kinds exist:

* ``rigorous=True``: the finite-N form is a proven bound (Cauchy-Schwarz,
  Parseval, van der Corput, power means).  ``lhs <= rhs`` must hold up to
  floating-point rounding and is asserted by the test-suite and the CLI.
* ``rigorous=False``: the printed statement is asymptotic with an unnamed
  constant; the ratio ``lhs / rhs`` is an empirical constant and only its
  stability is checked.

Suprema over ``t`` use the certified upper bound when they sit on the
right-hand side and the grid maximum on the left, so every comparison is
sound rather than optimistic.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import cubes
from .cubes import correlate_rows, correlation_profile, eq5_rhs
from .maximal import DEFAULT_OVERSAMPLE, twisted_profile_max, ww_max, ww_mean_square
from .orbits import OrbitSample
from .seminorms import default_horizon, seminorm_recursive

#: relative rounding slack allowed in rigorous comparisons
ROUNDING_SLACK = 1e-12

TAGS = ("eq1", "eq2", "eq3", "eq4", "eq5", "induction", "vdc", "powermean")


def holds(lhs, rhs, slack=ROUNDING_SLACK):
    return lhs <= rhs + slack * max(1.0, abs(rhs))


@dataclass(frozen=True)
class InequalityReport:
    tag: str
    lhs: float
    rhs: float
    rigorous: bool
    parameters: dict = field(default_factory=dict)

    @property
    def ratio(self):
        if self.rhs > 0:
            return self.lhs / self.rhs
        if self.lhs > 0:
            return math.inf
        return math.nan

    @property
    def holds(self):
        return holds(self.lhs, self.rhs)

    @property
    def passed(self):
        """Rigorous reports pass iff they hold; empirical ones always pass."""
        return self.holds if self.rigorous else True

    def param(self, name, default=None):
        return self.parameters.get(name, default)


def _values(o):
    return np.asarray(o.values if isinstance(o, OrbitSample) else o, dtype=np.float64)


def _sup(o):
    if isinstance(o, OrbitSample):
        return float(o.sup_bound)
    a = np.asarray(o)
    return float(np.max(np.abs(a))) if a.size else 0.0


def _need(o, length, name):
    if len(_values(o)) < length:
        raise ValueError(f"{name} has length {len(_values(o))}, needs {length}")


# --------------------------------------------------------------------------
# rigorous finite forms


def van_der_corput_check(u, N, H):
    """Finite van der Corput inequality for ``u_0 .. u_{N-1}``.

    ``|(1/N) sum u_n|^2 <= (N+H)/(N(H+1)) * (a_0 + 2 sum_{h=1}^H (1 - h/(H+1)) |a_h|)``
    with ``a_h = (1/N) sum_{n < N-h} u_n conj(u_{n+h})`` using only the window.
    For unit-modulus ``u`` the term ``a_0`` equals 1.
    """
    u = np.asarray(u, dtype=np.complex128)
    N, H = int(N), int(H)
    if N < 1:
        raise ValueError("N must be positive")
    if H < 0 or H >= N:
        raise ValueError(f"need 0 <= H < N, got H={H}, N={N}")
    if len(u) < N:
        raise ValueError(f"sequence has length {len(u)} < N={N}")
    lhs, rhs = _vdc_sides(u[None, :N], N, H)
    return InequalityReport("vdc", float(lhs[0]), float(rhs[0]), True, {"N": N, "H": H})


def _vdc_sides(U, N, H):
    """Row-wise van der Corput sides for a batch ``U`` of shape ``(rows, N)``."""
    U = U[:, :N]
    mean = U.sum(axis=1) / N
    lhs = (mean.real ** 2 + mean.imag ** 2)
    acc = (np.abs(U) ** 2).sum(axis=1) / N
    for h in range(1, H + 1):
        a_h = np.abs((U[:, : N - h] * np.conj(U[:, h:N])).sum(axis=1)) / N
        acc = acc + 2.0 * (1.0 - h / (H + 1)) * a_h
    rhs = (N + H) / (N * (H + 1)) * acc
    return lhs, rhs


def power_mean(u, alpha):
    u = np.asarray(u, dtype=np.float64)
    return (math.fsum(np.abs(u) ** alpha) / len(u)) ** (1.0 / alpha)


def power_mean_step(u, alphas):
    """``M_{a1}(u) <= M_{a2}(u)`` for ``0 < a1 <= a2``."""
    a1, a2 = (float(a) for a in alphas)
    u = np.asarray(u, dtype=np.float64)
    if u.ndim != 1 or len(u) < 1:
        raise ValueError("u must be a nonempty 1-d sequence")
    if np.any(u < 0):
        raise ValueError("u must be nonnegative")
    if a1 <= 0 or a2 <= 0:
        raise ValueError("exponents must be positive")
    if a1 > a2:
        raise ValueError("need alpha1 <= alpha2")
    return InequalityReport(
        "powermean", power_mean(u, a1), power_mean(u, a2), True, {"alpha1": a1, "alpha2": a2, "H": len(u)}
    )


def check_eq1(f2, f3, N, L=DEFAULT_OVERSAMPLE):
    """Correlation mean square against the twisted sup of the 2N-1 window.

    By Parseval over all shifts,
    ``(1/N) sum_{n<N} |(1/N) sum_m b_m c_{n+m}|^2
    <= ||b||^2 sup_t |(1/N) sum_{j<2N-1} c_j e(jt)|^2``.
    """
    N = int(N)
    _need(f2, N, "f2")
    _need(f3, 2 * N - 1, "f3")
    b, c = _values(f2), _values(f3)
    prof = correlation_profile(b, c, N)
    lhs = math.fsum(prof * prof) / N
    window = c[: 2 * N - 1]
    mb = ww_max(window, L).scaled((2 * N - 1) / N)
    rhs = _sup(f2) ** 2 * mb.certified_upper ** 2
    return InequalityReport("eq1", lhs, rhs, True, {"N": N, "L": L})


def check_eq5(spec, method="naive"):
    """``|M_N|^2`` against the Cauchy-Schwarz bound over the top-half product."""
    m = cubes.cube_average(spec, method).value
    rhs = eq5_rhs(spec)
    return InequalityReport("eq5", m * m, rhs, True, {"k": spec.k, "N": spec.N, "method": method})


# --------------------------------------------------------------------------
# empirical constants


def check_eq2(f, N_schedule, k2_estimate, L=DEFAULT_OVERSAMPLE):
    """``(grid max)^2`` of the twisted average per ``N`` against ``|||f|||_2^2``."""
    schedule = [int(N) for N in N_schedule]
    if not schedule:
        raise ValueError("N schedule must be nonempty")
    if any(b <= a for a, b in zip(schedule, schedule[1:])):
        raise ValueError("N schedule must be increasing")
    a = _values(f)
    _need(a, schedule[-1], "f")
    rhs = k2_estimate.value ** 2
    out = []
    for N in schedule:
        mb = ww_max(a[:N], L)
        out.append(InequalityReport("eq2", mb.grid_max ** 2, rhs, False, {"N": N, "L": L, "H": k2_estimate.H}))
    return out


def eq2_decay_factor(reports):
    """End-to-end decay ``lhs_first / lhs_last`` of an ``eq2`` sequence."""
    first, last = reports[0].lhs, reports[-1].lhs
    if last == 0:
        return math.inf if first > 0 else math.nan
    return first / last


def check_eq3(orbits, N, L=DEFAULT_OVERSAMPLE):
    """Seven-function step: mean square of the ``f4..f7`` correlations.

    ``orbits`` lists ``f_1 .. f_7`` in cube order.
    """
    if len(orbits) != 7:
        raise ValueError("check_eq3 takes the seven orbits f_1..f_7")
    N = int(N)
    need = cubes.required_length(3, N)
    for j, o in enumerate(orbits, start=1):
        _need(o, need, f"f{j}")
    f4, f5, f6, f7 = (_values(o) for o in orbits[3:])
    p = np.arange(N)
    m = np.arange(N)
    s = np.arange(2 * N - 1)
    B = f4[None, m] * f6[p[:, None] + m[None, :]]
    C = f5[None, s] * f7[p[:, None] + s[None, :]]
    prof = correlate_rows(B, C, N)
    pre_lhs = math.prod(_sup(o) ** 2 for o in orbits[:3])
    lhs = pre_lhs * math.fsum((prof * prof).ravel()) / (N * N)
    pre_rhs = math.prod(_sup(o) ** 2 for o in orbits[:5])
    rhs = pre_rhs * ww_mean_square(f6, f7, N, L)
    return InequalityReport("eq3", lhs, rhs, False, {"N": N, "L": L})


def check_eq4(f1, f2, N_schedule, H=None, L=DEFAULT_OVERSAMPLE):
    """Twisted correlation mean square against ``min(|||f1|||_3, |||f2|||_3)^2``.

    Besides the empirical ratio each report carries the van der Corput
    chain: the per-``n`` bound applied to the twisted sequence at its grid
    maximiser, averaged over ``n``.  It must dominate the grid-max mean
    square (``vdc_ok``).
    """
    schedule = [int(N) for N in N_schedule]
    if not schedule:
        raise ValueError("N schedule must be nonempty")
    a1, a2 = _values(f1), _values(f2)
    out = []
    for N in schedule:
        h = default_horizon(N) if H is None else int(H)
        need = max(2 * N - 1, N + 2 * h)
        _need(a1, need, "f1")
        _need(a2, need, "f2")
        bounds = twisted_profile_max(a1, a2, N, L)
        lhs = ww_mean_square(a1, a2, N, L, bounds)
        s1 = seminorm_recursive(a1, 3, N, h).value
        s2 = seminorm_recursive(a2, 3, N, h).value
        rhs = min(s1, s2) ** 2
        chain, lower = _vdc_chain(a1, a2, N, min(h, N - 1), bounds)
        out.append(
            InequalityReport(
                "eq4",
                lhs,
                rhs,
                False,
                {"N": N, "H": h, "L": L, "vdc_chain": chain, "vdc_lower": lower, "vdc_ok": holds(lower, chain)},
            )
        )
    return out


def _vdc_chain(a1, a2, N, H, bounds):
    m = np.arange(N)
    t = np.array([mb.argmax for mb in bounds])
    chain = []
    lower = []
    step = max(1, (1 << 20) // N)
    for start in range(0, N, step):
        n = np.arange(start, min(N, start + step))
        g = a1[None, m] * a2[n[:, None] + m[None, :]]
        U = g * np.exp(2j * np.pi * np.outer(t[n], m))
        lhs, rhs = _vdc_sides(U, N, H)
        chain.extend(rhs.tolist())
        lower.extend(lhs.tolist())
    return math.fsum(chain) / N, math.fsum(lower) / N


def induction_group_size(k):
    return 1 << (k - 2)


def check_induction(k, orbits, N, H=None, L=DEFAULT_OVERSAMPLE, variant="eq6"):
    """Induction step for the ``2^{k-2}`` functions of one A group.

    Function ``c`` (``0 <= c < 2^{k-2}``) is sampled at
    ``T^{sum_{i in eps(c)} i_i + i_k}`` with ``eps(c)`` read from the bits of
    ``c`` over ``{1, ..., k-2}``.

    ``variant="eq6"``: ``lhs`` is the mean square of the plain ``i_k``
    averages, ``rhs = min_c |||g_c|||_{k-2}^2``.
    ``variant="eq8"``: ``lhs`` uses the certified ``sup_t`` of the twisted
    averages, ``rhs = min_c |||g_c|||_{k-1}^2``.
    """
    if k not in (3, 4):
        raise ValueError("check_induction supports k in {3, 4}")
    if variant not in ("eq6", "eq8"):
        raise ValueError(f"unknown variant {variant!r}")
    size = induction_group_size(k)
    if len(orbits) != size:
        raise ValueError(f"k={k} needs {size} functions, got {len(orbits)}")
    N = int(N)
    H = default_horizon(N) if H is None else int(H)
    level = k - 2 if variant == "eq6" else k - 1
    vals = np.stack([_values(o) for o in orbits])
    need = max((k - 1) * (N - 1) + 1, N + (level - 1) * H)
    for c, o in enumerate(orbits):
        _need(o, need, f"g{c}")
    vals = vals[:, :need]

    # outer tuple (i_1..i_{k-3}); the last outer index i_{k-2} is the lag
    last = k - 3
    plain = [c for c in range(size) if not (c >> last) & 1]
    lagged = [c for c in range(size) if (c >> last) & 1]
    rows = []
    outer = N ** (k - 3)
    for r in range(outer):
        digits = []
        rem = r
        for _ in range(k - 3):
            digits.append(rem % N)
            rem //= N
        digits = digits[::-1]

        def base(c):
            return sum(digits[i] for i in range(k - 3) if (c >> i) & 1)

        b = np.ones(N)
        for c in plain:
            b = b * vals[c, base(c) + np.arange(N)]
        cc = np.ones(2 * N - 1)
        for c in lagged:
            cc = cc * vals[c, base(c) + np.arange(2 * N - 1)]
        if variant == "eq6":
            prof = correlation_profile(b, cc, N)
            rows.append(math.fsum(prof * prof))
        else:
            rows.append(math.fsum(mb.certified_upper ** 2 for mb in twisted_profile_max(b, cc, N, L)))
    lhs = math.fsum(rows) / float(N) ** (k - 2)
    sems = [seminorm_recursive(vals[c], level, N, H).value for c in range(size)]
    rhs = min(sems) ** 2
    return InequalityReport("induction", lhs, rhs, False, {"k": k, "N": N, "H": H, "L": L, "variant": variant})
