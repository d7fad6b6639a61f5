"""Experiment configuration in a flat INI-style text format.

Example::

    [experiment]
    id = rot-cos
    k = 2
    N = 256, 1024, 4096
    H = 64
    L = 8
    seeds =
    base_points = 0.0
    method = fast
    output = rot.csv

    [system]
    kind = rotation
    alpha = 0.6180339887498949

    [observable]          ; default for every f_j
    kind = trig_poly
    coefficients = 1:0.5, -1:0.5

    [observable.3]        ; override for f_3
    kind = trig_poly
    coefficients = 0:1.0

System kinds: ``rotation`` (alpha), ``skew`` (alpha), ``cyclic`` (p),
``bernoulli`` (seed, alphabet_size).  Observable kinds: ``trig_poly``
(coefficients), ``interval`` (a, b), ``table`` (values), ``symbol_fn``
(values), ``skew_coordinate`` (coefficients, axis).  Skew base points are
written ``x:y``.
"""
from __future__ import annotations

import configparser
import io
import re
from dataclasses import dataclass, field

from ..orbits import (
    Bernoulli,
    Cyclic,
    IntervalIndicator,
    Rotation,
    Skew,
    SkewCoordinate,
    SymbolFn,
    Table,
    TrigPoly,
    check_compatible,
)


class ConfigError(ValueError):
    """Malformed configuration; the message carries ``source:line``."""


@dataclass(frozen=True)
class ExperimentConfig:
    system: object
    observable: object
    k: int = 2
    N_schedule: tuple = (256,)
    H: int | None = None
    L: int = 8
    seeds: tuple = ()
    base_points: tuple = (0,)
    experiment_id: str = "experiment"
    overrides: dict = field(default_factory=dict)
    method: str = "fast"
    output: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "N_schedule", tuple(int(n) for n in self.N_schedule))
        object.__setattr__(self, "seeds", tuple(int(s) for s in self.seeds))
        object.__setattr__(self, "base_points", tuple(self.base_points))
        object.__setattr__(self, "overrides", {int(j): o for j, o in sorted(self.overrides.items())})
        if self.k < 2:
            raise ValueError("k must be >= 2")
        if not self.N_schedule or any(b <= a for a, b in zip(self.N_schedule, self.N_schedule[1:])):
            raise ValueError("N schedule must be nonempty and strictly increasing")
        if self.N_schedule[0] < 1:
            raise ValueError("N values must be positive")
        bad = [j for j in self.overrides if not 1 <= j < (1 << self.k)]
        if bad:
            raise ValueError(f"observable overrides {bad} out of range for k={self.k}")
        if self.method not in ("fast", "naive"):
            raise ValueError(f"unknown method {self.method!r}")
        check_compatible(self.system, self.observable)
        for o in self.overrides.values():
            check_compatible(self.system, o)

    def observables(self):
        """``f_1 .. f_{2^k - 1}`` with overrides applied."""
        return [self.overrides.get(j, self.observable) for j in range(1, 1 << self.k)]

    def replace(self, **changes):
        fields = dict(self.__dict__)
        fields.update(changes)
        return ExperimentConfig(**fields)


# --------------------------------------------------------------------------
# emission


def _num(x):
    return repr(float(x))


def _amp(a):
    a = complex(a)
    return _num(a.real) if a.imag == 0 else repr(a).replace(" ", "")


def _list(xs, fmt=str):
    return ", ".join(fmt(x) for x in xs)


def _base_point(bp):
    if isinstance(bp, tuple):
        return f"{_num(bp[0])}:{_num(bp[1])}"
    if isinstance(bp, float):
        return _num(bp)
    return str(bp)


def _system_items(spec):
    if isinstance(spec, Rotation):
        return {"kind": "rotation", "alpha": _num(spec.alpha)}
    if isinstance(spec, Skew):
        return {"kind": "skew", "alpha": _num(spec.alpha)}
    if isinstance(spec, Cyclic):
        return {"kind": "cyclic", "p": str(spec.p)}
    if isinstance(spec, Bernoulli):
        return {"kind": "bernoulli", "seed": str(spec.seed), "alphabet_size": str(spec.alphabet_size)}
    raise TypeError(f"unknown system {spec!r}")


def _observable_items(obs):
    if isinstance(obs, TrigPoly):
        return {"kind": "trig_poly", "coefficients": _list(obs.coefficients, lambda fa: f"{fa[0]}:{_amp(fa[1])}")}
    if isinstance(obs, SkewCoordinate):
        coeffs = _list(obs.poly.coefficients, lambda fa: f"{fa[0]}:{_amp(fa[1])}")
        return {"kind": "skew_coordinate", "coefficients": coeffs, "axis": str(obs.axis)}
    if isinstance(obs, IntervalIndicator):
        return {"kind": "interval", "a": _num(obs.a), "b": _num(obs.b)}
    if isinstance(obs, Table):
        return {"kind": "table", "values": _list(obs.values, _num)}
    if isinstance(obs, SymbolFn):
        return {"kind": "symbol_fn", "values": _list(obs.values, _num)}
    raise TypeError(f"unknown observable {obs!r}")


def dumps(cfg):
    """Serialise ``cfg``; :func:`loads` of the result compares equal."""
    parser = configparser.ConfigParser(interpolation=None)
    exp = {
        "id": cfg.experiment_id,
        "k": str(cfg.k),
        "N": _list(cfg.N_schedule),
        "H": "" if cfg.H is None else str(cfg.H),
        "L": str(cfg.L),
        "seeds": _list(cfg.seeds),
        "base_points": _list(cfg.base_points, _base_point),
        "method": cfg.method,
        "output": cfg.output or "",
    }
    parser["experiment"] = exp
    parser["system"] = _system_items(cfg.system)
    parser["observable"] = _observable_items(cfg.observable)
    for j, obs in cfg.overrides.items():
        parser[f"observable.{j}"] = _observable_items(obs)
    buf = io.StringIO()
    parser.write(buf)
    return buf.getvalue()


def dump(cfg, path):
    with open(path, "w") as fh:
        fh.write(dumps(cfg))


# --------------------------------------------------------------------------
# parsing


class _Section:
    """Typed accessor for one section that reports ``source:line`` on error."""

    def __init__(self, parser, name, lines, source):
        if not parser.has_section(name):
            raise ConfigError(f"{source}: missing section [{name}]")
        self.data = parser[name]
        self.name = name
        self.lines = lines
        self.source = source

    def where(self, key=None):
        line = self.lines.get((self.name, key)) or self.lines.get((self.name, None))
        return f"{self.source}:{line}" if line else self.source

    def fail(self, key, msg):
        raise ConfigError(f"{self.where(key)}: [{self.name}] {key}: {msg}")

    def raw(self, key, default=None, required=False):
        if key not in self.data:
            if required:
                raise ConfigError(f"{self.where()}: [{self.name}] missing key {key!r}")
            return default
        return self.data[key].strip()

    def get(self, key, conv, default=None, required=False):
        text = self.raw(key, None, required)
        if text is None or text == "":
            if required:
                self.fail(key, "empty value")
            return default
        try:
            return conv(text)
        except (ValueError, TypeError) as exc:
            self.fail(key, f"cannot parse {text!r} ({exc})")

    def get_list(self, key, conv, default=()):
        text = self.raw(key, "")
        if not text:
            return tuple(default)
        out = []
        for item in re.split(r"[,\s]+", text):
            if not item:
                continue
            try:
                out.append(conv(item))
            except (ValueError, TypeError) as exc:
                self.fail(key, f"cannot parse item {item!r} ({exc})")
        return tuple(out)


def _int(text):
    v = float(text)
    if v != int(v):
        raise ValueError("not an integer")
    return int(v)


def _coefficient(item):
    freq, sep, amp = item.partition(":")
    if not sep:
        raise ValueError("expected frequency:amplitude")
    return int(freq), complex(amp)


def _line_index(text):
    lines = {}
    section = None
    for no, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        m = re.match(r"\[([^\]]+)\]", stripped)
        if m:
            section = m.group(1).strip()
            lines[(section, None)] = no
            continue
        m = re.match(r"([^=:;#\s][^=:]*?)\s*[=:]", stripped)
        if m and section is not None:
            lines[(section, m.group(1).strip().lower())] = no
    return lines


def _parse_system(sec):
    kind = sec.get("kind", str, required=True)
    try:
        if kind == "rotation":
            return Rotation(sec.get("alpha", float, Rotation().alpha))
        if kind == "skew":
            return Skew(sec.get("alpha", float, Skew().alpha))
        if kind == "cyclic":
            return Cyclic(sec.get("p", _int, required=True))
        if kind == "bernoulli":
            return Bernoulli(sec.get("seed", _int, 0), sec.get("alphabet_size", _int, 2))
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"{sec.where()}: [{sec.name}] {exc}") from None
    sec.fail("kind", f"unknown system kind {kind!r}")


def _parse_observable(sec):
    kind = sec.get("kind", str, required=True)
    try:
        if kind == "trig_poly":
            return TrigPoly(sec.get_list("coefficients", _coefficient))
        if kind == "skew_coordinate":
            return SkewCoordinate(TrigPoly(sec.get_list("coefficients", _coefficient)), sec.get("axis", _int, 1))
        if kind == "interval":
            return IntervalIndicator(sec.get("a", float, required=True), sec.get("b", float, required=True))
        if kind == "table":
            return Table(sec.get_list("values", float))
        if kind == "symbol_fn":
            return SymbolFn(sec.get_list("values", float))
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"{sec.where()}: [{sec.name}] {exc}") from None
    sec.fail("kind", f"unknown observable kind {kind!r}")


def _base_point_parser(system):
    if isinstance(system, Skew):
        def conv(item):
            x, sep, y = item.partition(":")
            if not sep:
                raise ValueError("skew base points are written x:y")
            return (float(x), float(y))
        return conv
    if isinstance(system, Rotation):
        return float
    return _int


def loads(text, source="<config>"):
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=(";", "#"))
    try:
        parser.read_string(text, source=source)
    except configparser.Error as exc:
        raise ConfigError(str(exc).replace("\n", " ")) from None
    lines = _line_index(text)
    exp = _Section(parser, "experiment", lines, source)
    system = _parse_system(_Section(parser, "system", lines, source))
    observable = _parse_observable(_Section(parser, "observable", lines, source))
    overrides = {}
    for name in parser.sections():
        m = re.fullmatch(r"observable\.(\d+)", name)
        if m:
            overrides[int(m.group(1))] = _parse_observable(_Section(parser, name, lines, source))
        elif name not in ("experiment", "system", "observable"):
            raise ConfigError(f"{source}:{lines.get((name, None))}: unknown section [{name}]")
    default_bp = (0.0,) if isinstance(system, Rotation) else ((0.0, 0.0),) if isinstance(system, Skew) else (0,)
    try:
        return ExperimentConfig(
            system=system,
            observable=observable,
            k=exp.get("k", _int, 2),
            N_schedule=exp.get_list("n", _int, (256,)),
            H=exp.get("h", _int, None),
            L=exp.get("l", _int, 8),
            seeds=exp.get_list("seeds", _int),
            base_points=exp.get_list("base_points", _base_point_parser(system), default_bp),
            experiment_id=exp.get("id", str, "experiment"),
            overrides=overrides,
            method=exp.get("method", str, "fast"),
            output=exp.get("output", str, None),
        )
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(f"{exp.where()}: {exc}") from None


def load(path):
    with open(path) as fh:
        return loads(fh.read(), source=str(path))
