"""Command-line entry point: ``cubelab <subcommand> ...``.

CSV goes to ``--out`` if given, else to ``$CUBELAB_OUT_DIR/<subcommand>.csv``
if that variable is set, else to standard output (the human-readable
summary then moves to standard error).  The exit status is 0 iff every
rigorous check passed.
"""
from __future__ import annotations

import argparse
import math
import os
import sys
from collections import OrderedDict

from ..cubes import CubeSpec, cube_average, required_length
from ..maximal import ww_max
from ..orbits import (
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
    orbit,
)
from ..seminorms import box_norm_cyclic, default_horizon, seminorm_recursive, u2_fourier
from . import config as cfgmod
from . import csvio
from .sweep import convergence_sweep
from .trials import DEFAULTS, run_trials

OUT_DIR_ENV = "CUBELAB_OUT_DIR"


class UsageError(Exception):
    pass


# --------------------------------------------------------------------------
# argument parsing


def _common(p):
    g = p.add_argument_group("global options")
    g.add_argument("--config", help="experiment config file")
    g.add_argument("--seed", type=int, help="seed (overrides config seeds)")
    g.add_argument("--out", help="CSV output path")
    g.add_argument("--threads", type=int, default=1, help="parallelism hint; results do not depend on it")


def _system_flags(p):
    g = p.add_argument_group("system and observable (ignored with --config)")
    g.add_argument("--system", choices=("rotation", "skew", "cyclic", "bernoulli"), default="rotation")
    g.add_argument("--alpha", type=float, default=GOLDEN)
    g.add_argument("--p", type=int, default=2, help="cyclic group order")
    g.add_argument("--alphabet", type=int, default=2)
    g.add_argument("--obs", choices=("trig_poly", "interval", "table", "symbol_fn", "skew_coordinate"))
    g.add_argument("--coeffs", default="1:0.5,-1:0.5", help="trig coefficients freq:amp,...")
    g.add_argument("--values", help="table/symbol values v0,v1,...")
    g.add_argument("--interval", default="0,0.5", help="a,b")
    g.add_argument("--x0", default=None, help="base point (x:y for skew)")


def build_parser():
    parser = argparse.ArgumentParser(prog="cubelab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("orbit", help="emit an orbit")
    _common(p)
    _system_flags(p)
    p.add_argument("--length", type=int, default=16)

    p = sub.add_parser("average", help="one cube average")
    _common(p)
    _system_flags(p)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--N", type=int, default=64)
    p.add_argument("--method", choices=("naive", "fast"), default="fast")

    p = sub.add_parser("sweep", help="convergence sweep from a config file")
    _common(p)

    p = sub.add_parser("seminorm", help="seminorm estimate")
    _common(p)
    _system_flags(p)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--N", type=int, default=1024)
    p.add_argument("--H", type=int)
    p.add_argument("--method", choices=("recursive", "cyclic_box", "fourier_u2"), default="recursive")

    p = sub.add_parser("wwmax", help="Wiener-Wintner maximal bounds of an orbit window")
    _common(p)
    _system_flags(p)
    p.add_argument("--N", type=int, default=1024)
    p.add_argument("--L", type=int, default=8)

    p = sub.add_parser("verify", help="inequality trials")
    _common(p)
    p.add_argument("--ineq", required=True, choices=tuple(DEFAULTS))
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--N", type=int, nargs="+")
    p.add_argument("--H", type=int)
    p.add_argument("--L", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--variant", choices=("eq6", "eq8"))
    p.add_argument("--periods", type=int, nargs="+", help="cyclic periods to draw from (default 2..8)")

    p = sub.add_parser("report", help="aggregate CSV files")
    _common(p)
    p.add_argument("files", nargs="+")
    return parser


# --------------------------------------------------------------------------
# helpers


def _floats(text):
    return [float(v) for v in text.replace(" ", "").split(",") if v]


def _coeffs(text):
    out = []
    for item in text.replace(" ", "").split(","):
        if not item:
            continue
        f, sep, a = item.partition(":")
        if not sep:
            raise UsageError(f"bad coefficient {item!r}; expected freq:amp")
        out.append((int(f), complex(a)))
    return out


def _system_from_flags(args):
    kind = args.system
    if kind == "rotation":
        system = Rotation(args.alpha)
    elif kind == "skew":
        system = Skew(args.alpha)
    elif kind == "cyclic":
        system = Cyclic(args.p)
    else:
        system = Bernoulli(0 if args.seed is None else args.seed, args.alphabet)
    obs_kind = args.obs or {
        "rotation": "trig_poly",
        "skew": "skew_coordinate",
        "cyclic": "table",
        "bernoulli": "symbol_fn",
    }[kind]
    if obs_kind == "trig_poly":
        obs = TrigPoly(_coeffs(args.coeffs))
    elif obs_kind == "skew_coordinate":
        obs = SkewCoordinate(TrigPoly(_coeffs(args.coeffs)))
    elif obs_kind == "interval":
        a, b = _floats(args.interval)
        obs = IntervalIndicator(a, b)
    else:
        if args.values is None and obs_kind == "symbol_fn" and args.alphabet == 2:
            args.values = "1,-1"
        if args.values is None:
            raise UsageError(f"--obs {obs_kind} needs --values")
        vals = _floats(args.values)
        obs = Table(vals) if obs_kind == "table" else SymbolFn(vals)
    if args.x0 is None:
        x0 = (0.0, 0.0) if kind == "skew" else 0.0 if kind == "rotation" else 0
    elif kind == "skew":
        x, _, y = args.x0.partition(":")
        x0 = (float(x), float(y))
    elif kind == "rotation":
        x0 = float(args.x0)
    else:
        x0 = int(args.x0)
    return system, obs, x0


def _setup(args):
    """``(system, [observables], base point)`` from --config or the flags."""
    if args.config:
        cfg = cfgmod.load(args.config)
        system = cfg.system
        if args.seed is not None and isinstance(system, Bernoulli):
            system = Bernoulli(args.seed, system.alphabet_size)
        return system, cfg, cfg.base_points[0]
    system, obs, x0 = _system_from_flags(args)
    return system, obs, x0


def _observables(src, k):
    if isinstance(src, cfgmod.ExperimentConfig):
        return src.replace(k=k).observables() if k != src.k else src.observables()
    return [src] * ((1 << k) - 1)


def _first_observable(src):
    return src.observable if isinstance(src, cfgmod.ExperimentConfig) else src


class _Output:
    def __init__(self, args):
        path = args.out
        if path is None and os.environ.get(OUT_DIR_ENV):
            path = os.path.join(os.environ[OUT_DIR_ENV], f"{args.command}.csv")
        self.path = path
        self.summary = sys.stdout if path else sys.stderr

    def write_csv(self, rows):
        text = csvio.dumps(rows)
        if self.path:
            d = os.path.dirname(self.path)
            if d:
                os.makedirs(d, exist_ok=True)
            with open(self.path, "w", newline="") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)

    def say(self, msg):
        print(msg, file=self.summary)


def _fmt(v):
    return "-" if v is None else f"{v:.6g}"


# --------------------------------------------------------------------------
# subcommands


def cmd_orbit(args, out):
    system, src, x0 = _setup(args)
    o = orbit(system, _first_observable(src), x0, args.length)
    text = "n,value\n" + "".join(f"{n},{v!r}\n" for n, v in enumerate(o.values.tolist()))
    if out.path:
        with open(out.path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_average(args, out):
    system, src, x0 = _setup(args)
    k, N = args.k, args.N
    length = required_length(k, N)
    samples = {}
    orbs = []
    for o in _observables(src, k):
        if o not in samples:
            samples[o] = orbit(system, o, x0, length)
        orbs.append(samples[o])
    res = cube_average(CubeSpec(k, N, orbs), args.method, args.threads)
    print(repr(res.value))
    if out.path:
        out.write_csv([{
            "tag": f"average:{args.method}", "k": k, "N": N, "seed": args.seed, "value": res.value,
            "rigorous": False, "pass": True,
        }])
    return 0


def cmd_sweep(args, out):
    if not args.config:
        raise UsageError("sweep needs --config")
    cfg = cfgmod.load(args.config)
    if args.seed is not None:
        cfg = cfg.replace(seeds=(args.seed,))
    if args.out is None and cfg.output:
        out.path = cfg.output
        out.summary = sys.stdout
    traces = convergence_sweep(cfg, args.threads)
    rows = [r for t in traces for r in csvio.trace_rows(t, cfg.H, cfg.L)]
    out.write_csv(rows)
    for t in traces:
        out.say(f"{t.experiment_id} seed={t.seed} x={t.base_point!r}: final={_fmt(t.points[-1][1])} "
                f"oracle={_fmt(t.oracle_limit)} gap={_fmt(t.final_gap)}")
    return 0


def cmd_seminorm(args, out):
    system, src, x0 = _setup(args)
    obs = _first_observable(src)
    if args.method == "recursive":
        H = args.H or default_horizon(args.N)
        o = orbit(system, obs, x0, args.N + (args.k - 1) * H)
        est = seminorm_recursive(o, args.k, args.N, H)
    else:
        if not isinstance(obs, Table):
            raise UsageError(f"--method {args.method} needs a cyclic table observable")
        est = box_norm_cyclic(obs.values, args.k) if args.method == "cyclic_box" else u2_fourier(obs.values)
    print(repr(est.value))
    if out.path:
        out.write_csv([{
            "tag": f"seminorm:{est.method}", "k": est.k, "N": est.N, "H": est.H, "seed": args.seed,
            "value": est.value, "rigorous": False, "pass": True,
        }])
    return 0


def cmd_wwmax(args, out):
    system, src, x0 = _setup(args)
    o = orbit(system, _first_observable(src), x0, args.N)
    mb = ww_max(o.values, args.L)
    print(f"{mb.grid_max!r} {mb.certified_upper!r}")
    if out.path:
        out.write_csv([{
            "tag": "wwmax", "N": args.N, "L": args.L, "seed": args.seed, "value": mb.grid_max,
            "oracle": mb.certified_upper, "gap": mb.width, "rigorous": True, "pass": True,
        }])
    return 0


def cmd_verify(args, out):
    params = {"H": args.H, "L": args.L, "k": args.k, "variant": args.variant}
    if args.periods:
        params["periods"] = tuple(args.periods)
    if args.N:
        params["N"] = args.N[0] if len(args.N) == 1 and args.ineq not in ("eq2", "eq4") else tuple(args.N)
    seed = 0 if args.seed is None else args.seed
    reports = run_trials(args.ineq, args.trials, seed, args.threads, **params)
    rows = [csvio.report_row(r) for r in reports]
    out.write_csv(rows)
    rig = [r for r in reports if r.rigorous]
    failed = [r for r in rig if not r.holds]
    ratios = [r.ratio for r in reports if math.isfinite(r.ratio)]
    out.say(f"{args.ineq}: {len(reports)} reports, {len(rig)} rigorous, {len(failed)} violations, "
            f"max ratio {_fmt(max(ratios) if ratios else None)}")
    if args.ineq == "eq4":
        bad = [r for r in reports if not r.param("vdc_ok")]
        out.say(f"eq4 van der Corput chain: {len(reports) - len(bad)}/{len(reports)} dominate the grid maxima")
        if bad:
            return 1
    return 0 if not failed else 1


def cmd_report(args, out):
    # the aggregate CSV is only written with --out; the summary is the main output
    out.summary = sys.stdout
    groups = OrderedDict()
    for path in args.files:
        for row in csvio.read(path):
            groups.setdefault(row["tag"], []).append(row)
    rows = []
    status = 0
    for tag, rs in groups.items():
        rig = [r for r in rs if r["rigorous"]]
        failed = [r for r in rig if not r["pass"]]
        ratios = [r["ratio"] for r in rs if r["ratio"] is not None and math.isfinite(r["ratio"])]
        gaps = [r["gap"] for r in rs if r["gap"] is not None]
        status |= bool(failed)
        out.say(f"{tag}: rows={len(rs)} rigorous={len(rig)} violations={len(failed)} "
                f"ratio=[{_fmt(min(ratios) if ratios else None)}, {_fmt(max(ratios) if ratios else None)}] "
                f"max_gap={_fmt(max(gaps) if gaps else None)}")
        rows.append({
            "tag": tag, "value": float(len(rs)), "oracle": float(len(failed)),
            "gap": max(gaps) if gaps else None, "ratio": max(ratios) if ratios else None,
            "rigorous": bool(rig), "pass": not failed,
        })
    if out.path:
        out.write_csv(rows)
    return 1 if status else 0


COMMANDS = {
    "orbit": cmd_orbit,
    "average": cmd_average,
    "sweep": cmd_sweep,
    "seminorm": cmd_seminorm,
    "wwmax": cmd_wwmax,
    "verify": cmd_verify,
    "report": cmd_report,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads < 1:
        parser.error("--threads must be >= 1")
    out = _Output(args)
    try:
        return COMMANDS[args.command](args, out)
    except cfgmod.ConfigError as exc:
        print(f"cubelab: config error: {exc}", file=sys.stderr)
        return 2
    except (UsageError, ValueError, TypeError) as exc:
        print(f"cubelab {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"cubelab: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
