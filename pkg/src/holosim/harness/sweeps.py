"""Parameter sweeps over X error, Z error and decoherence rate.

Grid points are independent; they are evaluated on a bounded thread pool and
always collected in grid order, so the emitted table does not depend on the
number of workers.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .. import dfs, lindblad
from ..algebra import trace_fidelity
from ..errors import ConfigurationError, InvariantViolation
from ..propagator import (ERROR_ORDER, NoiseParams, computational_block, evolve_sequence,
                          scheme_fidelity)
from ..pulses import Scheme, build_sequence, target_gate
from .config import SweepConfig
from .table import Table

EQUIVALENCE_TOL = 1e-9
FIDELITY_LEVEL = 0.999


def _ordered_map(fn, items, workers: int) -> list:
    items = list(items)
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def closed_system_fidelity(scheme, g, n: NoiseParams, phi0: float = 0.0, encoding: str = "bare") -> float:
    """Trace fidelity of the qubit block against the target gate, no decoherence."""
    if encoding == "dfs":
        u = dfs.dfs_single_gate(scheme, g, n)
    else:
        u = evolve_sequence(build_sequence(scheme, g, phi0), g, n)
    return trace_fidelity(target_gate(g), computational_block(u))


def run_epsilon_sweep(cfg: SweepConfig) -> Table:
    """Closed-form and propagated fidelity against the X error, per scheme."""
    if cfg.gamma_rate is not None:
        raise ConfigurationError("the epsilon sweep is closed-system; drop the decoherence grid")
    if cfg.delta is not None:
        raise ConfigurationError("the epsilon sweep has no Z error; use `map` for epsilon-delta grids")
    points = [(s, float(e)) for s in cfg.schemes for e in cfg.epsilon.values]

    def evaluate(pt):
        scheme, eps = pt
        exact = scheme_fidelity(scheme, cfg.gate.gamma_g, eps)
        numeric = closed_system_fidelity(scheme, cfg.gate, NoiseParams(eps), cfg.phi0)
        if abs(exact - numeric) > EQUIVALENCE_TOL:
            raise InvariantViolation(
                f"{scheme.value} eps={eps}: closed form {exact} vs propagation {numeric}")
        return scheme.value, eps, exact, numeric

    rows = _ordered_map(evaluate, points, cfg.workers)
    return Table(("scheme", "epsilon", "fidelity_exact", "fidelity_numeric"), rows)


def run_2d_map(cfg: SweepConfig) -> Table:
    """Fidelity over (epsilon, gamma_rate) with Lindblad dynamics or (epsilon, delta) closed-system."""
    if (cfg.gamma_rate is None) == (cfg.delta is None):
        raise ConfigurationError("a map needs exactly one of the delta or gamma-rate grids")
    if cfg.gamma_rate is not None:
        if cfg.encoding == "dfs":
            raise ConfigurationError("epsilon-gamma maps use the bare three-level model")
        second, values = "gamma_rate", cfg.gamma_rate.values

        def evaluate(pt):
            scheme, eps, rate = pt
            f = lindblad.avg_gate_fidelity(scheme, cfg.gate, NoiseParams(eps),
                                           lindblad.DecoherenceParams.uniform(rate), cfg.step)
            return scheme.value, eps, rate, f
    else:
        second, values = "delta", cfg.delta.values

        def evaluate(pt):
            scheme, eps, dl = pt
            f = closed_system_fidelity(scheme, cfg.gate, NoiseParams(eps, dl), cfg.phi0, cfg.encoding)
            return scheme.value, eps, dl, f

    points = [(s, float(e), float(x)) for s in cfg.schemes for e in cfg.epsilon.values for x in values]
    rows = _ordered_map(evaluate, points, cfg.workers)
    return Table(("scheme", "epsilon", second, "fidelity"), rows)


def gamma_threshold(table: Table, scheme, level: float = FIDELITY_LEVEL) -> float | None:
    """Largest grid rate such that every rate up to it keeps min-over-epsilon fidelity >= level."""
    scheme = Scheme.parse(scheme).value
    sub = table.where(scheme=scheme)
    rates = sorted(set(sub.column("gamma_rate")))
    best = None
    for rate in rates:
        if min(sub.where(gamma_rate=rate).column("fidelity")) >= level:
            best = rate
        else:
            break
    return best


def order_slopes(gamma_g: float = math.pi / 2, lo: float = 1e-3, hi: float = 1e-2,
                 count: int = 10, schemes=tuple(ERROR_ORDER)) -> dict:
    """Least-squares slope of log(1 - F) against log(epsilon) per scheme."""
    eps = np.geomspace(lo, hi, count)
    out = {}
    for s in schemes:
        infid = np.array([1.0 - scheme_fidelity(s, gamma_g, e) for e in eps])
        out[Scheme.parse(s)] = float(np.polyfit(np.log(eps), np.log(infid), 1)[0])
    return out


def infidelity_ratio(epsilon: float = 1e-3, gamma_g: float = math.pi / 2) -> float:
    """(1 - F_OPNHQC) / (1 - F_DCNHQC)."""
    op = 1.0 - scheme_fidelity(Scheme.OPNHQC, gamma_g, epsilon)
    dc = 1.0 - scheme_fidelity(Scheme.DCNHQC, gamma_g, epsilon)
    return op / dc
