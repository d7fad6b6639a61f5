"""Measure-preserving systems, observables with exact integrals, and orbits.

Four system families are supported:

* ``Rotation(alpha)``: ``x -> x + alpha`` on the circle.
* ``Skew(alpha)``: ``(x, y) -> (x + alpha, y + x)`` on the 2-torus.
* ``Cyclic(p)``: ``x -> x + 1`` on Z_p.
* ``Bernoulli(seed, alphabet_size)``: one-sided full shift with i.i.d.
  uniform symbols; the base point is an integer offset into the stream.

Orbit values are exposed only through :class:`OrbitSample`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from ._kernels import neumaier_sum

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0

_BLOCK = 1 << 16


# --------------------------------------------------------------------------
# systems


@dataclass(frozen=True)
class Rotation:
    alpha: float = GOLDEN

    def __post_init__(self):
        _check_alpha(self.alpha)


@dataclass(frozen=True)
class Skew:
    alpha: float = GOLDEN

    def __post_init__(self):
        _check_alpha(self.alpha)


@dataclass(frozen=True)
class Cyclic:
    p: int

    def __post_init__(self):
        if int(self.p) != self.p or self.p < 1:
            raise ValueError(f"cyclic system needs an integer p >= 1, got {self.p!r}")


@dataclass(frozen=True)
class Bernoulli:
    seed: int
    alphabet_size: int = 2

    def __post_init__(self):
        if int(self.seed) != self.seed or not 0 <= self.seed < 2**64:
            raise ValueError(f"bernoulli seed must be a 64-bit unsigned integer, got {self.seed!r}")
        if int(self.alphabet_size) != self.alphabet_size or self.alphabet_size < 2:
            raise ValueError(f"alphabet_size must be >= 2, got {self.alphabet_size!r}")


SystemSpec = Union[Rotation, Skew, Cyclic, Bernoulli]


def _check_alpha(alpha):
    if not math.isfinite(alpha) or not 0.0 <= alpha < 1.0:
        raise ValueError(f"alpha must be finite and in [0, 1), got {alpha!r}")


# --------------------------------------------------------------------------
# observables


def _as_coefficients(coefficients):
    items = coefficients.items() if isinstance(coefficients, dict) else coefficients
    merged = {}
    for freq, amp in items:
        if int(freq) != freq:
            raise ValueError(f"trig frequency must be an integer, got {freq!r}")
        amp = complex(amp)
        if not (math.isfinite(amp.real) and math.isfinite(amp.imag)):
            raise ValueError("trig amplitudes must be finite")
        merged[int(freq)] = merged.get(int(freq), 0j) + amp
    return tuple(sorted(merged.items()))


@dataclass(frozen=True)
class TrigPoly:
    """Real trigonometric polynomial ``sum_k c_k e(k x)``.

    ``coefficients`` may be a dict or a sequence of ``(frequency, amplitude)``
    pairs; it is normalised to a sorted tuple.  Conjugate symmetry
    ``c_{-k} = conj(c_k)`` is required so that values are real.
    """

    coefficients: tuple = ()

    def __post_init__(self):
        coeffs = _as_coefficients(self.coefficients)
        object.__setattr__(self, "coefficients", coeffs)
        table = dict(coeffs)
        for freq, amp in coeffs:
            partner = table.get(-freq, 0j)
            if abs(partner - amp.conjugate()) > 1e-12 * max(1.0, abs(amp)):
                raise ValueError(f"coefficients are not conjugate-symmetric at frequency {freq}")

    @classmethod
    def cos(cls, freq=1, amplitude=1.0):
        """``amplitude * cos(2 pi freq x)``."""
        if freq == 0:
            return cls({0: amplitude})
        return cls({freq: amplitude / 2, -freq: amplitude / 2})

    @classmethod
    def constant(cls, value):
        return cls({0: value})

    @property
    def sup_bound(self):
        return float(sum(abs(a) for _, a in self.coefficients))

    @property
    def degree(self):
        return max((abs(f) for f, _ in self.coefficients), default=0)

    def coefficient(self, freq):
        return dict(self.coefficients).get(freq, 0j)

    def evaluate(self, x):
        x = np.asarray(x, dtype=np.float64)
        out = np.zeros_like(x)
        for freq, amp in self.coefficients:
            phase = 2.0 * np.pi * _frac(freq * x)
            out += amp.real * np.cos(phase) - amp.imag * np.sin(phase)
        # rounding must not push values past the stored bound
        bound = self.sup_bound
        return np.clip(out, -bound, bound)


@dataclass(frozen=True)
class IntervalIndicator:
    """Indicator of ``[a, b)`` on the circle, ``0 <= a <= b <= 1``."""

    a: float
    b: float

    def __post_init__(self):
        if not (math.isfinite(self.a) and math.isfinite(self.b)) or not 0.0 <= self.a <= self.b <= 1.0:
            raise ValueError(f"interval needs 0 <= a <= b <= 1, got [{self.a}, {self.b})")

    @property
    def sup_bound(self):
        return 1.0 if self.b > self.a else 0.0

    def evaluate(self, x):
        x = np.asarray(x, dtype=np.float64)
        return ((x >= self.a) & (x < self.b)).astype(np.float64)


def _real_tuple(values, what):
    values = tuple(float(v) for v in values)
    if not values:
        raise ValueError(f"{what} must be nonempty")
    if not all(math.isfinite(v) for v in values):
        raise ValueError(f"{what} entries must be finite")
    return values


@dataclass(frozen=True)
class Table:
    """Function on Z_p given by its ``p`` values."""

    values: tuple

    def __post_init__(self):
        object.__setattr__(self, "values", _real_tuple(self.values, "table"))

    @property
    def sup_bound(self):
        return max(abs(v) for v in self.values)


@dataclass(frozen=True)
class SymbolFn:
    """Function of the zeroth symbol of a Bernoulli sequence."""

    values: tuple

    def __post_init__(self):
        object.__setattr__(self, "values", _real_tuple(self.values, "symbol_fn"))

    @property
    def sup_bound(self):
        return max(abs(v) for v in self.values)


@dataclass(frozen=True)
class SkewCoordinate:
    """Trigonometric polynomial applied to one coordinate of the skew torus.

    ``axis=1`` (the default) reads the fibre coordinate ``y``.
    """

    poly: TrigPoly
    axis: int = 1

    def __post_init__(self):
        if self.axis not in (0, 1):
            raise ValueError("axis must be 0 or 1")

    @property
    def sup_bound(self):
        return self.poly.sup_bound


Observable = Union[TrigPoly, IntervalIndicator, Table, SymbolFn, SkewCoordinate]


def check_compatible(spec, obs):
    """Raise ``ValueError`` unless ``obs`` is defined on ``spec``."""
    ok = False
    if isinstance(spec, Rotation):
        ok = isinstance(obs, (TrigPoly, IntervalIndicator))
    elif isinstance(spec, Skew):
        ok = isinstance(obs, SkewCoordinate)
    elif isinstance(spec, Cyclic):
        ok = isinstance(obs, Table)
        if ok and len(obs.values) != spec.p:
            raise ValueError(f"table has {len(obs.values)} values but the system is Z_{spec.p}")
    elif isinstance(spec, Bernoulli):
        ok = isinstance(obs, SymbolFn)
        if ok and len(obs.values) != spec.alphabet_size:
            raise ValueError(
                f"symbol_fn has {len(obs.values)} values but the alphabet has {spec.alphabet_size} symbols"
            )
    else:
        raise TypeError(f"unknown system {spec!r}")
    if not ok:
        raise ValueError(f"{type(obs).__name__} is not an observable on {type(spec).__name__}")


def exact_mean(spec, obs):
    """Closed-form integral of ``obs`` against the invariant measure of ``spec``."""
    check_compatible(spec, obs)
    if isinstance(obs, TrigPoly):
        return obs.coefficient(0).real
    if isinstance(obs, SkewCoordinate):
        return obs.poly.coefficient(0).real
    if isinstance(obs, IntervalIndicator):
        return obs.b - obs.a
    return math.fsum(obs.values) / len(obs.values)


# --------------------------------------------------------------------------
# orbit generation

_SPLITTER = 134217729.0  # 2**27 + 1


def _split(a):
    t = _SPLITTER * a
    hi = t - (t - a)
    return hi, a - hi


def _two_prod(a, b):
    """Dekker's error-free product: ``a * b == p + e`` exactly."""
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    e = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    return p, e


def _frac(x):
    out = x - np.floor(x)
    return np.where(out >= 1.0, 0.0, out)


def _frac_times(n, alpha):
    """``frac(n * alpha)`` for integer-valued float arrays ``n < 2**53``."""
    p, e = _two_prod(n, alpha)
    return _frac(_frac(p) + e)


def rotation_points(alpha, x0, length):
    n = np.arange(length, dtype=np.float64)
    return _frac(_frac_times(n, alpha) + x0)


def skew_points(alpha, x0, y0, length):
    """Orbit ``(x_n, y_n)`` with ``y_n = y0 + n x0 + alpha n(n-1)/2 (mod 1)``."""
    if length > 1 << 26:
        raise ValueError("skew orbits longer than 2**26 are not supported")
    n = np.arange(length, dtype=np.float64)
    xs = _frac(_frac_times(n, alpha) + x0)
    tri = n * (n - 1.0) / 2.0  # exact integers for n < 2**26
    ys = _frac(_frac(_frac_times(tri, alpha) + _frac_times(n, x0)) + y0)
    return xs, ys


def symbol_stream(spec, start, length):
    """Symbols ``omega_start .. omega_{start+length-1}`` of the Bernoulli point.

    The stream is generated in fixed blocks, each from its own generator
    keyed by ``(seed, block)``, so any window is prefix-consistent.
    """
    first = start // _BLOCK
    last = (start + length - 1) // _BLOCK
    blocks = [
        np.random.default_rng([spec.seed, b]).integers(0, spec.alphabet_size, size=_BLOCK)
        for b in range(first, last + 1)
    ]
    stream = np.concatenate(blocks)
    off = start - first * _BLOCK
    return stream[off:off + length]


def canonical_base_point(spec, x0):
    if isinstance(spec, Rotation):
        x0 = float(x0)
        if not math.isfinite(x0):
            raise ValueError("base point must be finite")
        return float(_frac(np.float64(x0)))
    if isinstance(spec, Skew):
        x, y = (float(v) for v in x0)
        if not (math.isfinite(x) and math.isfinite(y)):
            raise ValueError("base point must be finite")
        return (float(_frac(np.float64(x))), float(_frac(np.float64(y))))
    if isinstance(spec, Cyclic):
        if int(x0) != x0:
            raise ValueError("cyclic base point must be an integer")
        return int(x0) % spec.p
    if isinstance(spec, Bernoulli):
        if int(x0) != x0 or x0 < 0:
            raise ValueError("bernoulli base point is a nonnegative stream offset")
        return int(x0)
    raise TypeError(f"unknown system {spec!r}")


def advance(spec, x0, steps):
    """Base point ``T^steps x0``."""
    x0 = canonical_base_point(spec, x0)
    if isinstance(spec, Rotation):
        return float(_frac(_frac_times(np.float64(steps), spec.alpha) + x0))
    if isinstance(spec, Skew):
        xs, ys = skew_points(spec.alpha, x0[0], x0[1], steps + 1)
        return (float(xs[-1]), float(ys[-1]))
    if isinstance(spec, Cyclic):
        return (x0 + steps) % spec.p
    return x0 + steps


@dataclass(frozen=True, eq=False)
class OrbitSample:
    """The finite sequence ``values[n] = f(T^n x0)``, read-only."""

    values: np.ndarray = field(repr=False)
    system: SystemSpec
    observable: Observable
    base_point: object

    def __post_init__(self):
        vals = np.array(self.values, dtype=np.float64)
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @property
    def length(self):
        return len(self.values)

    @property
    def sup_bound(self):
        return self.observable.sup_bound

    def __len__(self):
        return len(self.values)

    def __eq__(self, other):
        if not isinstance(other, OrbitSample):
            return NotImplemented
        return (
            self.system == other.system
            and self.observable == other.observable
            and self.base_point == other.base_point
            and np.array_equal(self.values, other.values)
        )

    __hash__ = None


def orbit(spec, obs, x0, length):
    """Evaluate ``obs`` along the first ``length`` points of the orbit of ``x0``."""
    check_compatible(spec, obs)
    if int(length) != length or length < 1:
        raise ValueError(f"orbit length must be a positive integer, got {length!r}")
    length = int(length)
    x0 = canonical_base_point(spec, x0)
    if isinstance(spec, Rotation):
        values = obs.evaluate(rotation_points(spec.alpha, x0, length))
    elif isinstance(spec, Skew):
        xs, ys = skew_points(spec.alpha, x0[0], x0[1], length)
        values = obs.poly.evaluate(ys if obs.axis == 1 else xs)
    elif isinstance(spec, Cyclic):
        idx = (x0 + np.arange(length)) % spec.p
        values = np.asarray(obs.values)[idx]
    else:
        values = np.asarray(obs.values)[symbol_stream(spec, x0, length)]
    return OrbitSample(values=values, system=spec, observable=obs, base_point=x0)


def birkhoff_mean(sample, N):
    """Compensated ``(1/N) sum_{n<N} values[n]``."""
    if int(N) != N or N < 1:
        raise ValueError(f"N must be a positive integer, got {N!r}")
    if N > sample.length:
        raise ValueError(f"N={N} exceeds orbit length {sample.length}")
    return neumaier_sum(sample.values[: int(N)]) / N
