"""Command-line entry point: ``holosim <command> [flags]``.

Every option may also come from a ``--config`` file of ``key = value`` lines;
flags given on the command line win.  Tables go to ``--out`` as CSV, or to
stdout when no path is given.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import dfs, lindblad
from .errors import ConfigurationError, HolosimError, InvariantViolation
from .harness import PRESETS, Grid, Table, build_config, parse_angle, read_config, run_preset
from .harness.sweeps import closed_system_fidelity, run_2d_map, run_epsilon_sweep
from .propagator import NoiseParams, bloch_trajectory, scheme_fidelity
from .pulses import Scheme, build_sequence, target_gate

EXIT_OK, EXIT_USAGE, EXIT_INVARIANT = 0, 1, 2

CARDINAL_LABELS = ("0", "1", "-", "+", "-i", "+i")
INITIAL_STATES = dict(zip(CARDINAL_LABELS, lindblad.CARDINAL_STATES))

# keys shared by the config file and the common flags
CONFIG_KEYS = ("scheme", "gate", "theta", "phi", "gamma_g", "phi0", "epsilon", "delta",
               "gamma_rate", "step", "samples", "out", "workers", "encoding")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _common_flags() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("common options")
    g.add_argument("--config", help="key=value file; flags override its entries")
    g.add_argument("--scheme", help="NHQC, TLNHQC, DCNHQC, OPNHQC, a comma list, or 'all'")
    g.add_argument("--gate", help="X/2, S or custom")
    g.add_argument("--theta", help="gate axis polar angle (accepts e.g. 0.5pi)")
    g.add_argument("--phi", help="gate axis azimuth")
    g.add_argument("--gamma-g", dest="gamma_g", help="geometric rotation angle")
    g.add_argument("--phi0", help="base drive phase")
    g.add_argument("--epsilon", help="X error: value or min:max:count")
    g.add_argument("--delta", help="Z error: value or min:max:count")
    g.add_argument("--gamma-rate", dest="gamma_rate", help="decoherence rate: value or min:max:count")
    g.add_argument("--step", help="RK4 step in units of 1/Omega (default 1e-3)")
    g.add_argument("--samples", help="time samples for dynamics and trajectories")
    g.add_argument("--out", help="output CSV path (directory for presets)")
    g.add_argument("--workers", help="parallel grid workers")
    g.add_argument("--encoding", help="bare or dfs (epsilon-delta maps)")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="holosim", description="Holonomic gate pulse-scheme simulator.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    common = [_common_flags()]
    sub.add_parser("gate", parents=common, help="fidelity of one gate at one noise point")
    sub.add_parser("sweep", parents=common, help="closed-system fidelity over an epsilon grid")
    sub.add_parser("map", parents=common, help="fidelity over epsilon x delta or epsilon x gamma-rate")
    dyn = sub.add_parser("dynamics", parents=common, help="level populations in time under decoherence")
    dyn.add_argument("--initial", default="0", choices=CARDINAL_LABELS, help="input qubit state")
    d = sub.add_parser("dfs", parents=common, help="decoherence-free-subspace encoded gate under decoherence")
    d.add_argument("--level", choices=("single", "two"), default="single")
    d.add_argument("--chi", default="0.5pi", help="two-qubit coupling-ratio angle")
    d.add_argument("--eta", default="0", help="two-qubit relative drive phase")
    sub.add_parser("traj", parents=common, help="Bloch trajectory of the bright-state evolution")
    pre = sub.add_parser("preset", parents=common, help="run a named experiment preset")
    pre.add_argument("name", help=", ".join(PRESETS))
    return parser


def _merge(args) -> dict:
    values = read_config(args.config) if args.config else {}
    unknown = set(values) - set(CONFIG_KEYS)
    if unknown:
        raise ConfigurationError(f"unknown config keys: {', '.join(sorted(unknown))}")
    for key in CONFIG_KEYS:
        flag = getattr(args, key, None)
        if flag is not None:
            values[key] = flag
    return values


def _single_scheme(values) -> Scheme:
    text = values.get("scheme") or "OPNHQC"
    if "," in text or text.lower() == "all":
        raise ConfigurationError("this command runs one scheme; pass a single --scheme")
    return Scheme.parse(text)


def _point(values, key) -> float:
    grid = Grid.parse(values.get(key, 0.0))
    if grid.count != 1:
        raise ConfigurationError(f"--{key.replace('_', '-')} must be a single value here")
    return grid.lo


def _samples(values, default) -> int:
    try:
        return int(values.get("samples", default))
    except ValueError:
        raise ConfigurationError("samples must be an integer") from None


def _emit(table: Table, values) -> None:
    if values.get("out"):
        path = table.write(values["out"])
        print(f"wrote {path}")
    else:
        sys.stdout.write(table.to_csv())


def cmd_gate(values):
    cfg = build_config({k: v for k, v in values.items() if k not in ("epsilon", "delta", "gamma_rate")})
    eps, dl, rate = _point(values, "epsilon"), _point(values, "delta"), _point(values, "gamma_rate")
    rows = []
    for scheme in cfg.schemes:
        n = NoiseParams(eps, dl)
        closed = closed_system_fidelity(scheme, cfg.gate, n, cfg.phi0)
        exact = scheme_fidelity(scheme, cfg.gate.gamma_g, eps) if dl == 0 else float("nan")
        avg = lindblad.avg_gate_fidelity(scheme, cfg.gate, n, lindblad.DecoherenceParams.uniform(rate),
                                         cfg.step)
        rows.append((scheme.value, eps, dl, rate, exact, closed, avg))
    _emit(Table(("scheme", "epsilon", "delta", "gamma_rate", "fidelity_exact", "fidelity_numeric",
                 "avg_gate_fidelity"), rows), values)


def cmd_sweep(values):
    _emit(run_epsilon_sweep(build_config(values)), values)


def cmd_map(values):
    _emit(run_2d_map(build_config(values)), values)


def cmd_dynamics(values, initial):
    scheme = _single_scheme(values)
    cfg = build_config({**values, "scheme": scheme.value, "epsilon": _point(values, "epsilon"),
                        "delta": None, "gamma_rate": None})
    n = NoiseParams(_point(values, "epsilon"), _point(values, "delta"))
    d = lindblad.DecoherenceParams.uniform(_point(values, "gamma_rate"))
    psi = INITIAL_STATES[initial]
    schedule = lindblad.scheme_schedule(scheme, cfg.gate, n, cfg.phi0)
    rho0 = lindblad.pure_density(np.concatenate([psi, [0]]))
    tr = lindblad.population_trace(rho0, schedule, d, _samples(values, 101), target_gate(cfg.gate) @ psi,
                                   cfg.step)
    _emit(Table(("time", "pop_0", "pop_1", "pop_e", "fidelity"),
                [(t, *p, f) for t, p, f in zip(tr.times, tr.populations, tr.fidelity)]), values)


def cmd_dfs(values, level, chi, eta):
    scheme = _single_scheme(values)
    cfg = build_config({**values, "scheme": scheme.value, "epsilon": None, "delta": None, "gamma_rate": None})
    n = NoiseParams(_point(values, "epsilon"), _point(values, "delta"))
    d = lindblad.DecoherenceParams.uniform(_point(values, "gamma_rate"), "qubits")
    if level == "single":
        params = cfg.gate
    else:
        params = dfs.TwoQubitParams(parse_angle(chi), parse_angle(eta), cfg.gate.gamma_g)
    report = dfs.simulate_dfs(level, scheme, params, n, d, step=cfg.step)
    print(report.summary())
    if values.get("out"):
        table = Table(("level", "scheme", "dim", "fidelity", "leakage"),
                      [(report.level, report.scheme, report.dim, report.fidelity, report.leakage)])
        print(f"wrote {table.write(values['out'])}")


def cmd_traj(values):
    scheme = _single_scheme(values)
    cfg = build_config({**values, "scheme": scheme.value, "epsilon": None, "delta": None, "gamma_rate": None})
    n = NoiseParams(_point(values, "epsilon"), _point(values, "delta"))
    segments = build_sequence(scheme, cfg.gate, cfg.phi0)
    samples = _samples(values, 201)
    xyz = bloch_trajectory(segments, cfg.gate, n, samples)
    times = np.linspace(0.0, sum(s.duration for s in segments), samples)
    _emit(Table(("time", "x", "y", "z"), [(t, *v) for t, v in zip(times, xyz)]), values)


def cmd_preset(values, name):
    workers = int(values.get("workers", 1))
    report = run_preset(name, values.get("out") or ".", workers)
    sys.stdout.write(report.summary())


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        values = _merge(args)
        if args.command == "dynamics":
            cmd_dynamics(values, args.initial)
        elif args.command == "dfs":
            cmd_dfs(values, args.level, args.chi, args.eta)
        elif args.command == "preset":
            cmd_preset(values, args.name)
        else:
            {"gate": cmd_gate, "sweep": cmd_sweep, "map": cmd_map, "traj": cmd_traj}[args.command](values)
    except InvariantViolation as exc:
        print(f"holosim: invariant violated: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except (HolosimError, ValueError, OSError) as exc:
        print(f"holosim: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
