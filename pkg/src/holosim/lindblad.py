"""Lindblad dynamics for piecewise-constant Hamiltonians.

The master equation is taken in the form

    drho/dt = i[rho, H] + 1/2 sum_j G_j (2 s rho s^+ - s^+ s rho - rho s^+ s)

so a single jump operator at rate G transfers population at net rate G.
Integration is classic fixed-step RK4 on the vectorized density matrix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from . import pulses
from .algebra import as_matrix, dagger, is_hermitian
from .errors import ConfigurationError, InvariantViolation, ShapeError, ValidationError
from .propagator import NOISELESS, NoiseParams, embed_qubit, segment_hamiltonians

DEFAULT_STEP = 1e-3
TRACE_TOL = 1e-8
# superoperators up to this size are propagated by repeated squaring of the RK4 step matrix
DENSE_SUPEROP_MAX = 256

_R2 = 1 / math.sqrt(2)
CARDINAL_STATES = (
    np.array([1, 0], dtype=complex),
    np.array([0, 1], dtype=complex),
    np.array([1, -1], dtype=complex) * _R2,
    np.array([1, 1], dtype=complex) * _R2,
    np.array([1, -1j], dtype=complex) * _R2,
    np.array([1, 1j], dtype=complex) * _R2,
)


def decoherence_ops_3level() -> list[tuple[np.ndarray, str]]:
    def op(entries):
        m = np.zeros((3, 3), dtype=complex)
        for (r, c), v in entries.items():
            m[r, c] = v
        return m

    return [
        (op({(2, 0): 1}), "|e><0|"),
        (op({(2, 1): 1}), "|e><1|"),
        (op({(0, 0): 0.5, (2, 2): -0.5}), "(|0><0|-|e><e|)/2"),
        (op({(1, 1): 0.5, (2, 2): -0.5}), "(|1><1|-|e><e|)/2"),
    ]


def qubit_decay_dephasing_ops(n_qubits: int) -> list[tuple[np.ndarray, str]]:
    """Per physical qubit: lowering S_j^- = |0><1|_j and dephasing (|1><1|_j - |0><0|_j)/2.

    Qubit 0 is the leftmost (most significant) tensor factor.
    """
    lower = np.array([[0, 1], [0, 0]], dtype=complex)
    dephase = np.diag([-0.5, 0.5]).astype(complex)
    out = []
    for j in range(n_qubits):
        left, right = np.eye(2**j), np.eye(2 ** (n_qubits - j - 1))
        out.append((np.kron(np.kron(left, lower), right), f"S{j}^-"))
        out.append((np.kron(np.kron(left, dephase), right), f"Z{j}/2"))
    return out


OPERATOR_SETS = {
    "lambda": "three-level set |e><0|, |e><1|, (|0><0|-|e><e|)/2, (|1><1|-|e><e|)/2",
    "qubits": "per physical qubit: decay S_j^- and dephasing (|1><1|_j-|0><0|_j)/2",
}


@dataclass(frozen=True)
class DecoherenceParams:
    """Rates for a named jump-operator set.

    A single rate is broadcast over every operator of the set; an empty
    ``rates`` tuple means closed-system evolution.
    """

    rates: tuple = ()
    operator_set: str = "lambda"

    def __post_init__(self):
        object.__setattr__(self, "rates", tuple(float(r) for r in self.rates))
        if any(r < 0 or not math.isfinite(r) for r in self.rates):
            raise ValidationError(f"decoherence rates must be finite and >= 0, got {self.rates}")
        if self.operator_set not in OPERATOR_SETS:
            raise ConfigurationError(f"unknown operator set {self.operator_set!r}")

    @classmethod
    def uniform(cls, gamma: float, operator_set: str = "lambda") -> "DecoherenceParams":
        return cls((gamma,), operator_set)

    @property
    def is_closed(self) -> bool:
        return all(r == 0 for r in self.rates)

    def describe(self) -> str:
        return f"{OPERATOR_SETS[self.operator_set]}; rates={list(self.rates)}"

    def operators(self, dim: int) -> tuple[list[np.ndarray], list[float]]:
        if self.is_closed:
            return [], []
        if self.operator_set == "lambda":
            if dim != 3:
                raise ShapeError(f"the three-level operator set needs dim 3, got {dim}")
            ops = [o for o, _ in decoherence_ops_3level()]
        else:
            n_qubits = int(round(math.log2(dim)))
            if 2**n_qubits != dim:
                raise ShapeError(f"qubit operator set needs a power-of-two dimension, got {dim}")
            ops = [o for o, _ in qubit_decay_dephasing_ops(n_qubits)]
        rates = list(self.rates)
        if len(rates) == 1:
            rates = rates * len(ops)
        if len(rates) != len(ops):
            raise ShapeError(f"{len(rates)} rates for {len(ops)} operators")
        return ops, rates


CLOSED = DecoherenceParams()


@dataclass(frozen=True)
class Schedule:
    """Ordered (Hamiltonian, duration) segments."""

    segments: tuple = field(default_factory=tuple)

    def __post_init__(self):
        segs = tuple((as_matrix(h), float(t)) for h, t in self.segments)
        if not segs:
            raise ValidationError("schedule has no segments")
        dim = segs[0][0].shape[0]
        for h, t in segs:
            if h.shape != (dim, dim):
                raise ShapeError("all schedule Hamiltonians must share one square shape")
            if not t > 0:
                raise ValidationError(f"segment durations must be positive, got {t}")
            if not is_hermitian(h):
                raise ValidationError("schedule Hamiltonian is not Hermitian")
        object.__setattr__(self, "segments", segs)

    @property
    def dim(self) -> int:
        return self.segments[0][0].shape[0]

    @property
    def duration(self) -> float:
        return sum(t for _, t in self.segments)

    @property
    def shortest(self) -> float:
        return min(t for _, t in self.segments)


def scheme_schedule(scheme, g: pulses.GateParams, n: NoiseParams = NOISELESS,
                    phi0_base: float = 0.0) -> Schedule:
    segs = pulses.build_sequence(scheme, g, phi0_base)
    return Schedule(tuple(segment_hamiltonians(segs, g, n)))


def lindblad_rhs(rho, h, ops, rates) -> np.ndarray:
    rho, h = as_matrix(rho), as_matrix(h)
    if rho.shape != h.shape:
        raise ShapeError(f"rho {rho.shape} and H {h.shape} differ")
    if len(ops) != len(rates):
        raise ShapeError(f"{len(ops)} operators but {len(rates)} rates")
    out = 1j * (rho @ h - h @ rho)
    for s, rate in zip(ops, rates):
        s = as_matrix(s)
        if s.shape != rho.shape:
            raise ShapeError(f"jump operator shape {s.shape} does not match {rho.shape}")
        sd = dagger(s)
        sds = sd @ s
        out += 0.5 * rate * (2 * s @ rho @ sd - sds @ rho - rho @ sds)
    return out


def liouvillian(h, ops, rates):
    """Superoperator acting on the row-major flattening ``rho.reshape(-1)``.

    Dense for small systems, where scipy.sparse construction overhead dominates,
    and CSR otherwise.
    """
    h = as_matrix(h)
    dim = h.shape[0]
    dense = dim * dim <= DENSE_SUPEROP_MAX
    kron = np.kron if dense else sp.kron
    eye = np.eye(dim, dtype=complex) if dense else sp.identity(dim, dtype=complex, format="csr")
    if not dense:
        h = sp.csr_matrix(h)
    gen = -1j * (kron(h, eye) - kron(eye, h.T))
    for s, rate in zip(ops, rates):
        if rate == 0:
            continue
        s = as_matrix(s) if dense else sp.csr_matrix(as_matrix(s))
        sds = s.conj().T @ s
        gen = gen + 0.5 * rate * (2 * kron(s, s.conj()) - kron(sds, eye) - kron(eye, sds.T))
    return gen if dense else sp.csr_matrix(gen)


def _n_steps(duration: float, step: float) -> int:
    # uniform steps no longer than `step`
    return max(1, math.ceil(duration / step - 1e-9))


def _rk4_step_matrix(gen: np.ndarray, h: float) -> np.ndarray:
    a = h * gen
    eye = np.eye(a.shape[0], dtype=complex)
    return eye + a @ (eye + a @ (eye + a @ (eye + a / 4) / 3) / 2)


def _rk4_advance(gen, vec: np.ndarray, duration: float, step: float) -> np.ndarray:
    n = _n_steps(duration, step)
    h = duration / n
    if gen.shape[0] <= DENSE_SUPEROP_MAX:
        return np.linalg.matrix_power(_rk4_step_matrix(np.asarray(gen), h), n) @ vec
    half = h / 2
    for _ in range(n):
        k1 = gen @ vec
        k2 = gen @ (vec + half * k1)
        k3 = gen @ (vec + half * k2)
        k4 = gen @ (vec + h * k3)
        vec = vec + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4)
    return vec


def _check_step(schedule: Schedule, step: float):
    if not step > 0:
        raise ConfigurationError(f"step must be positive, got {step}")
    if step > schedule.shortest * (1 + 1e-12):
        raise ConfigurationError(
            f"step {step} exceeds the shortest segment duration {schedule.shortest}")


def _finish(vec: np.ndarray, dim: int) -> np.ndarray:
    rho = vec.reshape(dim, dim)
    rho = (rho + dagger(rho)) / 2
    drift = abs(np.trace(rho) - 1)
    if drift > TRACE_TOL:
        raise InvariantViolation(f"trace drifted by {drift:.3e}")
    return rho


def integrate(rho0, schedule: Schedule, d: DecoherenceParams = CLOSED,
              step: float = DEFAULT_STEP) -> np.ndarray:
    """Propagate ``rho0`` through ``schedule`` with fixed-step RK4."""
    rho0 = as_matrix(rho0)
    if rho0.shape != (schedule.dim, schedule.dim):
        raise ShapeError(f"rho0 {rho0.shape} does not match schedule dimension {schedule.dim}")
    _check_step(schedule, step)
    ops, rates = d.operators(schedule.dim)
    vec = rho0.reshape(-1).astype(complex)
    for h, t in schedule.segments:
        vec = _rk4_advance(liouvillian(h, ops, rates), vec, t, step)
    return _finish(vec, schedule.dim)


def rk4_channel(schedule: Schedule, d: DecoherenceParams = CLOSED,
                step: float = DEFAULT_STEP) -> np.ndarray:
    """Dense superoperator of the whole schedule (small dimensions only)."""
    _check_step(schedule, step)
    dim = schedule.dim
    if dim * dim > DENSE_SUPEROP_MAX:
        raise ConfigurationError(f"dense channel not supported for dimension {dim}")
    ops, rates = d.operators(dim)
    chan = np.eye(dim * dim, dtype=complex)
    for h, t in schedule.segments:
        n = _n_steps(t, step)
        gen = liouvillian(h, ops, rates)
        chan = np.linalg.matrix_power(_rk4_step_matrix(gen, t / n), n) @ chan
    return chan


def pure_density(psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    return np.outer(psi, psi.conj())


def state_fidelity(rho, psi_target) -> float:
    """<psi|rho|psi>; a shorter target is padded with zeros (e.g. a qubit in the three-level space)."""
    rho = as_matrix(rho)
    psi = np.asarray(psi_target, dtype=complex).ravel()
    dim = rho.shape[0]
    if psi.size > dim or rho.shape != (dim, dim):
        raise ShapeError(f"target of size {psi.size} does not fit rho {rho.shape}")
    if psi.size < dim:
        psi = np.concatenate([psi, np.zeros(dim - psi.size, dtype=complex)])
    return float(np.real(np.vdot(psi, rho @ psi)))


def avg_gate_fidelity(scheme, g: pulses.GateParams, n: NoiseParams = NOISELESS,
                      d: DecoherenceParams = CLOSED, step: float = DEFAULT_STEP) -> float:
    """Mean state fidelity over the six cardinal qubit inputs."""
    schedule = scheme_schedule(scheme, g, n)
    chan = rk4_channel(schedule, d, step)
    ideal = pulses.target_gate(g)
    total = 0.0
    for psi in CARDINAL_STATES:
        p = embed_qubit(psi)
        rho = _finish(chan @ pure_density(p).reshape(-1), 3)
        total += state_fidelity(rho, ideal @ psi)
    return total / len(CARDINAL_STATES)


@dataclass
class PopulationTrace:
    times: np.ndarray
    populations: np.ndarray  # (samples, dim)
    fidelity: np.ndarray | None
    final_rho: np.ndarray


def population_trace(rho0, schedule: Schedule, d: DecoherenceParams = CLOSED,
                     samples: int = 101, target=None, step: float = DEFAULT_STEP) -> PopulationTrace:
    """Diagonal of rho(t) (and fidelity against ``target``) at uniform times over the schedule."""
    if samples < 2:
        raise ValidationError("samples must be >= 2")
    rho0 = as_matrix(rho0)
    _check_step(schedule, step)
    dim = schedule.dim
    ops, rates = d.operators(dim)
    gens = [liouvillian(h, ops, rates) for h, _ in schedule.segments]
    bounds = np.cumsum([0.0] + [t for _, t in schedule.segments])
    times = np.linspace(0.0, bounds[-1], samples)

    pops = np.empty((samples, dim))
    fid = np.empty(samples) if target is not None else None
    vec = rho0.reshape(-1).astype(complex)
    now = 0.0
    for k, tk in enumerate(times):
        # walk forward through segment boundaries up to tk
        while tk - now > 1e-13:
            seg = min(int(np.searchsorted(bounds, now, side="right")) - 1, len(gens) - 1)
            stop = min(tk, bounds[seg + 1])
            if stop - now > 1e-13:
                vec = _rk4_advance(gens[seg], vec, stop - now, step)
            now = stop
        rho = _finish(vec, dim)
        pops[k] = np.real(np.diag(rho))
        if fid is not None:
            fid[k] = state_fidelity(rho, target)
    return PopulationTrace(times, pops, fid, _finish(vec, dim))
