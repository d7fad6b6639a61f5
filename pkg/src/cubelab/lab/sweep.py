"""Convergence sweeps of cube averages against their limit oracles."""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from ..cubes import CubeSpec, cube_average, required_length
from ..orbits import Bernoulli, orbit
from .oracles import oracle_for


@dataclass(frozen=True)
class ConvergenceTrace:
    experiment_id: str
    system: str
    k: int
    points: tuple
    oracle_limit: float | None = None
    seed: int | None = None
    base_point: object = None

    def __post_init__(self):
        pts = tuple((int(N), float(v)) for N, v in self.points)
        if any(b[0] <= a[0] for a, b in zip(pts, pts[1:])):
            raise ValueError("trace points must be strictly increasing in N")
        object.__setattr__(self, "points", pts)
        if self.oracle_limit is not None:
            object.__setattr__(self, "oracle_limit", float(self.oracle_limit))

    @property
    def final_gap(self):
        if self.oracle_limit is None or not self.points:
            return None
        return abs(self.points[-1][1] - self.oracle_limit)

    def gap(self, N):
        if self.oracle_limit is None:
            return None
        return abs(dict(self.points)[N] - self.oracle_limit)


def _runs(config):
    system = config.system
    if isinstance(system, Bernoulli):
        seeds = config.seeds or (system.seed,)
        return [(Bernoulli(s, system.alphabet_size), s, bp) for s in seeds for bp in config.base_points]
    seed = config.seeds[0] if config.seeds else None
    return [(system, seed, bp) for bp in config.base_points]


def _one(config, system, seed, bp, threads):
    k = config.k
    length = required_length(k, config.N_schedule[-1])
    obs = config.observables()
    cache = {}
    samples = []
    for o in obs:
        if o not in cache:
            cache[o] = orbit(system, o, bp, length)
        samples.append(cache[o])
    pts = []
    for N in config.N_schedule:
        spec = CubeSpec(k, N, samples)
        pts.append((N, cube_average(spec, config.method, threads).value))
    x = samples[0].base_point
    return ConvergenceTrace(
        experiment_id=config.experiment_id,
        system=repr(system),
        k=k,
        points=pts,
        oracle_limit=oracle_for(system, obs, k, x),
        seed=seed,
        base_point=x,
    )


def convergence_sweep(config, threads=1):
    """One trace per (seed, base point); results come back in config order."""
    runs = _runs(config)
    if threads <= 1 or len(runs) == 1:
        return [_one(config, s, seed, bp, 1) for s, seed, bp in runs]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda r: _one(config, r[0], r[1], r[2], 1), runs))
