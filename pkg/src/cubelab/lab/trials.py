"""Seeded random corpora for the inequality checks.

Trial ``i`` of a run with seed ``s`` draws from ``default_rng([s, i])``, so
a report depends only on ``(s, i)`` and never on scheduling.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .. import verify
from ..cubes import CubeSpec, required_length
from ..orbits import Bernoulli, Cyclic, SymbolFn, Table, orbit
from ..seminorms import default_horizon, seminorm_recursive

DEFAULTS = {
    "vdc": {"N": 64, "H": 8},
    "powermean": {"H": 16},
    "eq1": {"N": 64, "L": 8},
    "eq2": {"N": (256, 512, 1024, 2048, 4096), "L": 8},
    "eq3": {"N": 32, "L": 8},
    "eq4": {"N": (256, 512), "L": 8},
    "eq5": {"k": 2, "N": 16},
    "induction": {"k": 3, "N": 64, "H": 8, "L": 8, "variant": "eq6"},
}

ALPHA_CHAIN = (1.0, 2.0, 4.0, 8.0)


def trial_rng(seed, trial):
    return np.random.default_rng([int(seed), int(trial)])


#: periods of the default cyclic corpus
DEFAULT_PERIODS = tuple(range(2, 9))


def random_tables(rng, count, p=None, periods=None):
    """``count`` uniform tables on one Z_p, ``p`` drawn from ``periods`` unless given."""
    if p is None:
        if periods is None:
            p = int(rng.integers(DEFAULT_PERIODS[0], DEFAULT_PERIODS[-1] + 1))
        else:
            p = int(rng.choice(periods))
    return Cyclic(p), [Table(rng.uniform(-1.0, 1.0, p)) for _ in range(count)]


def cyclic_orbits(rng, count, length, p=None, periods=None):
    system, tables = random_tables(rng, count, p, periods)
    x0 = int(rng.integers(0, system.p))
    return [orbit(system, t, x0, length) for t in tables]


def random_cube(rng, k, N, p=None, periods=None):
    return CubeSpec(k, N, cyclic_orbits(rng, (1 << k) - 1, required_length(k, N), p, periods))


def unit_modulus(rng, n):
    return np.exp(2j * np.pi * rng.uniform(size=n))


def bernoulli_pm1(seed, length):
    return orbit(Bernoulli(int(seed)), SymbolFn([1.0, -1.0]), 0, length)


def _seedval(rng):
    return int(rng.integers(0, 2**63))


def run_trial(ineq, seed, trial, params):
    """Reports (a list) for one trial of ``ineq``."""
    rng = trial_rng(seed, trial)
    p = dict(DEFAULTS[ineq])
    p.update({k: v for k, v in params.items() if v is not None})
    periods = p.pop("periods", None)
    tagged = {"seed": int(seed), "trial": int(trial)}

    def tag(rep):
        params_ = dict(rep.parameters)
        params_.update(tagged)
        return verify.InequalityReport(rep.tag, rep.lhs, rep.rhs, rep.rigorous, params_)

    if ineq == "vdc":
        N, H = int(p["N"]), int(p["H"])
        return [tag(verify.van_der_corput_check(unit_modulus(rng, N + H), N, H))]
    if ineq == "powermean":
        u = rng.uniform(0.0, 1.0, int(p["H"]))
        u[rng.uniform(size=len(u)) < 0.2] = 0.0
        a, b = sorted(rng.choice(len(ALPHA_CHAIN), size=2, replace=False))
        return [tag(verify.power_mean_step(u, (ALPHA_CHAIN[a], ALPHA_CHAIN[b])))]
    if ineq == "eq1":
        N = int(p["N"])
        f2, f3 = cyclic_orbits(rng, 2, 2 * N - 1, periods=periods)
        return [tag(verify.check_eq1(f2, f3, N, int(p["L"])))]
    if ineq == "eq5":
        spec = random_cube(rng, int(p["k"]), int(p["N"]), periods=periods)
        return [tag(verify.check_eq5(spec))]
    if ineq == "eq3":
        N = int(p["N"])
        return [tag(verify.check_eq3(cyclic_orbits(rng, 7, required_length(3, N), periods=periods), N, int(p["L"])))]
    if ineq == "induction":
        k, N, H = int(p["k"]), int(p["N"]), int(p["H"])
        level = k - 2 if p["variant"] == "eq6" else k - 1
        length = max((k - 1) * (N - 1) + 1, N + (level - 1) * H)
        orbs = cyclic_orbits(rng, verify.induction_group_size(k), length, periods=periods)
        return [tag(verify.check_induction(k, orbs, N, H, int(p["L"]), p["variant"]))]
    if ineq == "eq2":
        sched = _schedule(p["N"])
        f = bernoulli_pm1(_seedval(rng), sched[-1] + default_horizon(sched[-1]))
        k2 = seminorm_recursive(f, 2, sched[-1], default_horizon(sched[-1]))
        return [tag(r) for r in verify.check_eq2(f, sched, k2, int(p["L"]))]
    if ineq == "eq4":
        sched = _schedule(p["N"])
        H = p.get("H")
        h = default_horizon(sched[-1]) if H is None else int(H)
        length = max(2 * sched[-1] - 1, sched[-1] + 2 * h)
        f1 = bernoulli_pm1(_seedval(rng), length)
        f2 = bernoulli_pm1(_seedval(rng), length)
        return [tag(r) for r in verify.check_eq4(f1, f2, sched, H, int(p["L"]))]
    raise ValueError(f"unknown inequality {ineq!r}")


def _schedule(N):
    if isinstance(N, (int, np.integer)):
        return [int(N)]
    return [int(n) for n in N]


def run_trials(ineq, trials, seed=0, threads=1, **params):
    """All reports of ``trials`` trials, in trial order."""
    if ineq not in DEFAULTS:
        raise ValueError(f"unknown inequality {ineq!r}; choose from {sorted(DEFAULTS)}")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    jobs = range(int(trials))
    if threads <= 1:
        nested = [run_trial(ineq, seed, t, params) for t in jobs]
    else:
        with ThreadPoolExecutor(max_workers=int(threads)) as pool:
            nested = list(pool.map(lambda t: run_trial(ineq, seed, t, params), jobs))
    return [r for reps in nested for r in reps]
