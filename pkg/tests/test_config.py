import pytest
from hypothesis import given
from hypothesis import strategies as st

from cubelab.lab.config import ConfigError, ExperimentConfig, dump, dumps, load, loads
from cubelab.orbits import (
    Bernoulli,
    Cyclic,
    IntervalIndicator,
    Rotation,
    Skew,
    SkewCoordinate,
    SymbolFn,
    Table,
    TrigPoly,
)

finite = st.floats(-5, 5, allow_nan=False)
unit = st.floats(0, 1, exclude_max=True)


@st.composite
def trig_polys(draw):
    c = {}
    for f in draw(st.lists(st.integers(0, 4), min_size=1, max_size=3, unique=True)):
        if f == 0:
            c[0] = draw(finite)
        else:
            z = complex(draw(finite), draw(finite))
            c[f], c[-f] = z, z.conjugate()
    return TrigPoly(c)


@st.composite
def configs(draw):
    kind = draw(st.sampled_from(["rotation", "skew", "cyclic", "bernoulli"]))
    if kind == "rotation":
        system = Rotation(draw(st.sampled_from([0.6180339887498949, 0.41421356237309515])))
        obs = draw(st.one_of(trig_polys(), st.builds(lambda a, w: IntervalIndicator(a, min(1.0, a + w)), unit, unit)))
        bps = draw(st.lists(unit, min_size=1, max_size=3))
    elif kind == "skew":
        system = Skew()
        obs = SkewCoordinate(draw(trig_polys()), draw(st.sampled_from([0, 1])))
        bps = draw(st.lists(st.tuples(unit, unit), min_size=1, max_size=2))
    elif kind == "cyclic":
        p = draw(st.integers(1, 6))
        system = Cyclic(p)
        obs = Table(draw(st.lists(finite, min_size=p, max_size=p)))
        bps = draw(st.lists(st.integers(0, 20), min_size=1, max_size=3))
    else:
        a = draw(st.integers(2, 4))
        system = Bernoulli(draw(st.integers(0, 2**63)), a)
        obs = SymbolFn(draw(st.lists(finite, min_size=a, max_size=a)))
        bps = draw(st.lists(st.integers(0, 100), min_size=1, max_size=2))
    k = draw(st.integers(2, 3))
    overrides = {}
    if kind == "cyclic" and draw(st.booleans()):
        overrides[draw(st.integers(1, (1 << k) - 1))] = Table([1.0] * system.p)
    sched = sorted(set(draw(st.lists(st.integers(1, 5000), min_size=1, max_size=4))))
    return ExperimentConfig(
        system=system,
        observable=obs,
        k=k,
        N_schedule=sched,
        H=draw(st.one_of(st.none(), st.integers(1, 100))),
        L=draw(st.integers(1, 16)),
        seeds=draw(st.lists(st.integers(0, 1000), max_size=3)),
        base_points=bps,
        experiment_id=draw(st.from_regex(r"[a-z][a-z0-9_-]{0,10}", fullmatch=True)),
        overrides=overrides,
        method=draw(st.sampled_from(["fast", "naive"])),
        output=draw(st.one_of(st.none(), st.just("out/run.csv"))),
    )


@given(configs())
def test_round_trip(cfg):
    assert loads(dumps(cfg)) == cfg


def test_file_round_trip(tmp_path):
    cfg = ExperimentConfig(system=Cyclic(2), observable=Table([1.0, -1.0]), N_schedule=(2, 4))
    path = tmp_path / "c.ini"
    dump(cfg, path)
    assert load(path) == cfg


def test_documented_example():
    text = """
[experiment]
id = rot-cos
k = 2
N = 256, 1024, 4096
H = 64
L = 8
seeds =
base_points = 0.0
method = fast

[system]
kind = rotation

[observable]          ; default for every f_j
kind = trig_poly
coefficients = 1:0.5, -1:0.5

[observable.3]
kind = trig_poly
coefficients = 0:1.0
"""
    cfg = loads(text)
    assert cfg.N_schedule == (256, 1024, 4096)
    assert cfg.observables()[2] == TrigPoly.constant(1.0)
    assert cfg.observables()[0] == TrigPoly.cos(1)


@pytest.mark.parametrize(
    "text,where",
    [
        ("[experiment]\nk = two\n[system]\nkind = cyclic\np = 1\n[observable]\nkind = table\nvalues = 1\n", "cfg:2"),
        ("[experiment]\n[system]\nkind = torus\n[observable]\nkind = table\nvalues = 1\n", "cfg:3"),
        ("[experiment]\n[system]\nkind = cyclic\np = 2\n\n[observable]\nkind = table\nvalues = 1, x\n", "cfg:8"),
        ("[experiment]\n[system]\nkind = cyclic\np = 1\n[observable]\nkind = table\nvalues = 1\n[extra]\n", "cfg:8"),
    ],
)
def test_errors_carry_line(text, where):
    with pytest.raises(ConfigError) as exc:
        loads(text, source="cfg")
    assert where in str(exc.value)


def test_semantic_errors():
    base = "[experiment]\nN = {N}\n[system]\nkind = cyclic\np = 2\n[observable]\nkind = table\nvalues = {v}\n"
    with pytest.raises(ConfigError):
        loads(base.format(N="64, 32", v="1, 2"))
    with pytest.raises(ConfigError):
        loads(base.format(N="8", v="1, 2, 3"))
    with pytest.raises(ConfigError):
        loads("[system]\nkind = cyclic\np = 2\n")
    with pytest.raises(ValueError):
        ExperimentConfig(system=Cyclic(1), observable=Table([1.0]), overrides={4: Table([1.0])})
