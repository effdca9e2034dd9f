import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from holosim.errors import ConfigurationError, InvariantViolation
from holosim.harness import (PRESETS, RUNTIME_BUDGET, Grid, SweepConfig, Table, build_config, parse_angle,
                             read_config, run_2d_map, run_epsilon_sweep, run_preset)
from holosim.harness import sweeps
from holosim.harness.config import parse_gate, parse_schemes
from holosim.harness.sweeps import gamma_threshold, infidelity_ratio, order_slopes
from holosim.pulses import ALL_SCHEMES, S_GATE, X_HALF, Scheme

pi = math.pi


@pytest.mark.parametrize("text,value", [
    ("0.5pi", pi / 2), ("pi/4", pi / 4), ("-3pi/4", -3 * pi / 4), ("pi", pi), ("+pi", pi),
    ("-pi", -pi), ("2*pi", 2 * pi), ("1.25", 1.25), (0.3, 0.3),
])
def test_parse_angle(text, value):
    assert parse_angle(text) == pytest.approx(value)


@pytest.mark.parametrize("bad", ["", "pix", "abc", "pi/", "0.5pi4"])
def test_parse_angle_rejects(bad):
    with pytest.raises(ConfigurationError):
        parse_angle(bad)


def test_grid_parsing_and_invariants():
    assert Grid.parse("0.1") == Grid(0.1, 0.1, 1)
    assert list(Grid.parse("-0.1:0.1:3").values) == pytest.approx([-0.1, 0, 0.1])
    for bad in ("1:0:3", "0:1:0", "0:1", "a:b:c", "0:1:2:3"):
        with pytest.raises(ConfigurationError):
            Grid.parse(bad)
    with pytest.raises(ConfigurationError):
        Grid(0.0, 1.0, 1)


def test_gate_and_scheme_parsing():
    assert parse_gate("S") == S_GATE and parse_gate(None) == X_HALF
    g = parse_gate("custom", theta="pi/3", phi="0", gamma_g="0.5pi")
    assert g.theta == pytest.approx(pi / 3) and g.gamma_g == pytest.approx(pi / 2)
    assert parse_gate("X/2", gamma_g="pi").gamma_g == pytest.approx(pi)
    with pytest.raises(ConfigurationError):
        parse_gate("custom", theta="1")
    with pytest.raises(ConfigurationError):
        parse_gate("T")
    assert parse_schemes("all") == ALL_SCHEMES
    assert parse_schemes("opnhqc, NHQC") == (Scheme.OPNHQC, Scheme.NHQC)


def test_config_file(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("# a comment\nscheme = OPNHQC\ngamma-g = 0.5pi  # trailing\n\nepsilon=-0.1:0.1:5\n")
    values = read_config(path)
    assert values == {"scheme": "OPNHQC", "gamma_g": "0.5pi", "epsilon": "-0.1:0.1:5"}
    cfg = build_config(values)
    assert cfg.schemes == (Scheme.OPNHQC,) and cfg.epsilon.count == 5
    path.write_text("nonsense line\n")
    with pytest.raises(ConfigurationError, match="key=value"):
        read_config(path)


def test_sweep_config_invariants():
    with pytest.raises(ConfigurationError):
        SweepConfig(step=0.0)
    with pytest.raises(ConfigurationError):
        SweepConfig(encoding="other")
    with pytest.raises(ConfigurationError):
        SweepConfig(gamma_rate=Grid(-1.0, 0.0, 2))
    with pytest.raises(ConfigurationError):
        build_config({"workers": "two"})


def test_epsilon_sweep_rows():
    table = run_epsilon_sweep(SweepConfig(epsilon=Grid(-0.1, 0.1, 5)))
    assert table.columns == ("scheme", "epsilon", "fidelity_exact", "fidelity_numeric")
    assert len(table.rows) == 20
    assert all(f == 1.0 for f in table.where(epsilon=0.0).column("fidelity_exact"))
    edge = {r[0]: r[2] for r in table.where(epsilon=0.1).rows}
    assert edge["OPNHQC"] >= edge["DCNHQC"] >= edge["TLNHQC"] >= edge["NHQC"]
    assert edge["NHQC"] == pytest.approx(0.987840, abs=1e-5)
    with pytest.raises(ConfigurationError):
        run_epsilon_sweep(SweepConfig(gamma_rate=Grid(0, 1e-4, 2)))
    with pytest.raises(ConfigurationError):
        run_epsilon_sweep(SweepConfig(delta=Grid(0, 0.1, 2)))


def test_epsilon_sweep_flags_disagreement(monkeypatch):
    monkeypatch.setattr(sweeps, "scheme_fidelity", lambda *a, **k: 0.5)
    with pytest.raises(InvariantViolation):
        run_epsilon_sweep(SweepConfig(schemes=(Scheme.NHQC,), epsilon=Grid(0.1, 0.1, 1)))


def test_2d_map_needs_exactly_one_secondary_grid():
    with pytest.raises(ConfigurationError):
        run_2d_map(SweepConfig())
    with pytest.raises(ConfigurationError):
        run_2d_map(SweepConfig(delta=Grid(0, 0.1, 2), gamma_rate=Grid(0, 1e-4, 2)))
    with pytest.raises(ConfigurationError):
        run_2d_map(SweepConfig(gamma_rate=Grid(0, 1e-4, 2), encoding="dfs"))


def test_gamma_map_corner_and_threshold():
    cfg = SweepConfig(schemes=(Scheme.OPNHQC,), epsilon=Grid(-0.1, 0.1, 3), gamma_rate=Grid(0, 3e-4, 4))
    table = run_2d_map(cfg)
    assert table.columns == ("scheme", "epsilon", "gamma_rate", "fidelity")
    assert table.where(epsilon=0.0, gamma_rate=0.0).column("fidelity") == [pytest.approx(1.0, abs=1e-8)]
    assert gamma_threshold(table, "OPNHQC") == pytest.approx(1e-4)
    assert gamma_threshold(table, "OPNHQC", level=1.1) is None


def test_delta_map_bare_vs_encoded():
    base = dict(schemes=(Scheme.OPNHQC,), epsilon=Grid(0.05, 0.05, 1), delta=Grid(-0.1, 0.1, 5))
    bare = run_2d_map(SweepConfig(**base)).column("fidelity")
    enc = run_2d_map(SweepConfig(**base, encoding="dfs")).column("fidelity")
    assert max(enc) - min(enc) < 1e-12
    assert max(bare) - min(bare) > 1e-4


def test_order_slopes_and_ratio():
    slopes = order_slopes()
    assert slopes[Scheme.NHQC] == pytest.approx(2, abs=0.05)
    assert slopes[Scheme.DCNHQC] == pytest.approx(4, abs=0.05)
    assert infidelity_ratio() == pytest.approx(0.5, abs=0.025)


def test_table_round_trip_and_format(tmp_path):
    table = Table(("name", "x", "y"), [("a", 1 / 3, 2.0), (Scheme.NHQC, -1e-20, 12345678901234.5)])
    text = table.to_csv()
    assert text.splitlines()[0] == "name,x,y" and "\r" not in text
    assert "0.333333333333" in text and "NHQC" in text
    assert Table.from_csv(text).rows == table.rows
    path = table.write(tmp_path / "sub" / "t.csv")
    assert Table.read(path).rows == table.rows
    with pytest.raises(ValueError):
        table.append((1, 2))


@settings(max_examples=80, deadline=None)
@given(st.lists(st.floats(allow_nan=False, allow_infinity=False, width=64), min_size=1, max_size=6))
def test_table_round_trip_property(xs):
    table = Table(("v",), [(x,) for x in xs])
    assert Table.from_csv(table.to_csv()).rows == table.rows


def test_parallel_output_is_byte_identical():
    serial = SweepConfig(epsilon=Grid(-0.1, 0.1, 7), delta=Grid(-0.05, 0.05, 3))
    parallel = SweepConfig(epsilon=Grid(-0.1, 0.1, 7), delta=Grid(-0.05, 0.05, 3), workers=4)
    assert run_2d_map(serial).to_csv() == run_2d_map(parallel).to_csv() == run_2d_map(serial).to_csv()


def test_unknown_preset_lists_known():
    with pytest.raises(ConfigurationError) as info:
        run_preset("fig99")
    for name in PRESETS:
        assert name in str(info.value)


@pytest.mark.parametrize("name", ["fig3a", "fig3b", "fig4a", "fig4b", "fig6", "cnot-check", "order-scaling"])
def test_fast_presets_pass(tmp_path, name):
    report = run_preset(name, tmp_path)
    assert report.passed, report.summary()
    assert report.elapsed <= RUNTIME_BUDGET[name]
    summary = (tmp_path / f"{name}_summary.txt").read_text()
    assert summary.startswith(f"preset {name}: PASS")
    csvs = [f for f in report.files if str(f).endswith(".csv")]
    assert csvs and all(Table.read(f).rows for f in csvs)


def test_preset_csv_is_deterministic(tmp_path):
    a, b = run_preset("fig3a", tmp_path / "a"), run_preset("fig3a", tmp_path / "b")
    for fa, fb in zip(a.files, b.files):
        if str(fa).endswith(".csv"):
            assert fa.read_bytes() == fb.read_bytes()


@pytest.mark.slow
@pytest.mark.parametrize("name", ["fig5", "fig7"])
def test_slow_presets_pass(tmp_path, name):
    report = run_preset(name, tmp_path, workers=2)
    assert report.passed, report.summary()
