"""Decoherence-free-subspace encodings built from exchange-coupled physical qubits.

Single logical qubit: physical qubits (T1, T2, TE1) with
``|0>_L = |100>``, ``|1>_L = |010>``, ``|E1>_L = |001>``.

Two logical qubits: physical qubits (T1, T2, TE1, T3, T4, TE2); the logical
basis is ordered ``(|00>, |01>, |E1>, |10>, |11>, |E2>)``.

In every bit string the leftmost character is the most significant tensor
factor.  ``S^+ = |1><0|`` and ``S^- = |0><1|``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import lindblad
from .algebra import dagger, expm_generator, kron_all, trace_fidelity
from .errors import ConfigurationError, InvariantViolation, ValidationError
from .propagator import NOISELESS, NoiseParams
from .pulses import GateParams, Scheme, build_sequence, drive_phase_1, target_gate, total_area

SINGLE_LABELS = ("100", "010", "001")
TWO_LABELS = ("100100", "100010", "110000", "010100", "010010", "000110")
SINGLE_BASIS = tuple(int(s, 2) for s in SINGLE_LABELS)
TWO_BASIS = tuple(int(s, 2) for s in TWO_LABELS)
TWO_LOGICAL = (0, 1, 3, 4)  # positions of |00>,|01>,|10>,|11> within TWO_BASIS

CONSISTENCY_TOL = 1e-10

_RAISE = np.array([[0, 0], [1, 0]], dtype=complex)
_LOWER = np.array([[0, 1], [0, 0]], dtype=complex)
_NUMBER = np.diag([0.0, 1.0]).astype(complex)

CNOT = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)


def qubit_op(op: np.ndarray, j: int, n_qubits: int) -> np.ndarray:
    factors = [np.eye(2, dtype=complex)] * n_qubits
    factors[j] = op
    return kron_all(*factors)


def excitation_number(n_qubits: int) -> np.ndarray:
    return sum(qubit_op(_NUMBER, j, n_qubits) for j in range(n_qubits))


def _hop(amp: complex, up: int, down: int, n_qubits: int) -> np.ndarray:
    """amp * S_up^+ S_down^- + H.c."""
    term = amp * qubit_op(_RAISE, up, n_qubits) @ qubit_op(_LOWER, down, n_qubits)
    return term + dagger(term)


def project(op: np.ndarray, indices) -> np.ndarray:
    idx = list(indices)
    return op[np.ix_(idx, idx)]


def embed_state(psi, indices, n_qubits: int) -> np.ndarray:
    out = np.zeros(2**n_qubits, dtype=complex)
    out[list(indices)] = psi
    return out


# -- single logical qubit ------------------------------------------------------

def exchange_hamiltonian_1q(k1: float, k2: float, eta1: float, eta2: float) -> np.ndarray:
    """Exchange couplings T1-TE1 and T2-TE1 in the 8-dim physical space."""
    return _hop(k1 * np.exp(-1j * eta1), 0, 2, 3) + _hop(k2 * np.exp(-1j * eta2), 1, 2, 3)


def logical_hamiltonian_1q(k1: float, k2: float, eta1: float, eta2: float,
                           n: NoiseParams = NOISELESS, k_max: float = 1.0) -> np.ndarray:
    if k1 < 0 or k2 < 0 or (k1 == 0 and k2 == 0):
        raise ValidationError("couplings must be non-negative and not both zero")
    h = np.zeros((3, 3), dtype=complex)
    h[0, 2] = k1 * np.exp(-1j * eta1)
    h[1, 2] = k2 * np.exp(-1j * eta2)
    h = h + dagger(h)
    return n.mu * h + n.delta * k_max * np.eye(3)


def _single_couplings(g: GateParams) -> tuple[float, float]:
    return math.sin(g.theta / 2), math.cos(g.theta / 2)


def _single_pieces(scheme, g: GateParams, n: NoiseParams, physical: bool):
    k1, k2 = _single_couplings(g)
    number = excitation_number(3) if physical else None
    out = []
    for seg in build_sequence(scheme, g):
        eta1, eta2 = seg.phi0, drive_phase_1(seg.phi0, g)
        if physical:
            h = n.mu * exchange_hamiltonian_1q(k1, k2, eta1, eta2) + n.delta * number
        else:
            h = logical_hamiltonian_1q(k1, k2, eta1, eta2, n)
        out.append((h, seg.area))
    return out


def dfs_single_gate(scheme, g: GateParams, n: NoiseParams = NOISELESS) -> np.ndarray:
    """3x3 logical propagator in the basis (|0>_L, |1>_L, |E1>_L)."""
    u = np.eye(3, dtype=complex)
    for h, t in _single_pieces(scheme, g, n, physical=False):
        u = expm_generator(h, t) @ u
    return u


# -- two logical qubits ---------------------------------------------------------

@dataclass(frozen=True)
class TwoQubitParams:
    """Two-qubit holonomic gate: tan(chi/2) = G1/G2 and eta = eta3 - eta4 + pi.

    ``eta3`` is the base drive phase on the T2-T3 coupling; ``eta4`` follows
    from ``eta``.
    """

    chi: float
    eta: float
    gamma_g: float
    eta3: float = 0.0

    def __post_init__(self):
        if not -1e-12 <= self.chi <= math.pi + 1e-12:
            raise ValidationError(f"chi must lie in [0, pi], got {self.chi}")

    @property
    def eta4(self) -> float:
        return self.eta3 - self.eta + math.pi

    @property
    def alpha(self) -> complex:
        return complex(math.cos(self.gamma_g / 2), math.cos(self.chi) * math.sin(self.gamma_g / 2))

    @property
    def beta(self) -> complex:
        return math.sin(self.chi) * math.sin(self.gamma_g / 2) * np.exp(-1j * self.eta)

    @property
    def couplings(self) -> tuple[float, float]:
        return math.sin(self.chi / 2), math.cos(self.chi / 2)


CNOT_PARAMS = TwoQubitParams(chi=math.pi / 2, eta=0.0, gamma_g=math.pi / 2)


def exchange_hamiltonian_2q(g1: float, g2: float, eta3: float, eta4: float) -> np.ndarray:
    """T2-T3 and T2-T4 exchange couplings in the 64-dim physical space."""
    # tensor positions: T1=0, T2=1, TE1=2, T3=3, T4=4, TE2=5
    return _hop(g1 * np.exp(-1j * eta3), 1, 3, 6) + _hop(g2 * np.exp(-1j * eta4), 1, 4, 6)


def logical_hamiltonian_2q(g1: float, g2: float, eta3: float, eta4: float,
                           n: NoiseParams = NOISELESS, k_max: float = 1.0) -> np.ndarray:
    h = np.zeros((6, 6), dtype=complex)
    h[0, 2] = g1 * np.exp(1j * eta3)
    h[1, 2] = g2 * np.exp(1j * eta4)
    h[4, 5] = g1 * np.exp(-1j * eta3)
    h[3, 5] = g2 * np.exp(-1j * eta4)
    h = h + dagger(h)
    # collective Z error: every state of the sector carries two excitations
    return n.mu * h + 2 * n.delta * k_max * np.eye(6)


def _two_pieces(p: TwoQubitParams, scheme, n: NoiseParams, physical: bool):
    segs = build_sequence(scheme, GateParams(p.chi, p.eta, p.gamma_g), phi0_base=p.eta3)
    if not math.isclose(total_area(segs), 2 * math.pi, rel_tol=1e-12):
        raise ConfigurationError(
            f"two-qubit gate needs total pulse area 2pi; {Scheme.parse(scheme).value} gives "
            f"{total_area(segs):.6f}")
    g1, g2 = p.couplings
    number = excitation_number(6) if physical else None
    out = []
    for seg in segs:
        eta3 = seg.phi0
        eta4 = eta3 - p.eta + math.pi
        if physical:
            h = n.mu * exchange_hamiltonian_2q(g1, g2, eta3, eta4) + n.delta * number
        else:
            h = logical_hamiltonian_2q(g1, g2, eta3, eta4, n)
        out.append((h, seg.area))
    return out


def two_qubit_gate(p: TwoQubitParams) -> tuple[np.ndarray, np.ndarray]:
    """Closed-form 6x6 propagator and its 4x4 restriction to the logical states."""
    a, b = p.alpha, p.beta
    if abs(abs(a) ** 2 + abs(b) ** 2 - 1) > CONSISTENCY_TOL:
        raise InvariantViolation("|alpha|^2 + |beta|^2 != 1")
    lo, hi = np.exp(-0.5j * p.gamma_g), np.exp(0.5j * p.gamma_g)
    u6 = np.zeros((6, 6), dtype=complex)
    u6[0:2, 0:2] = lo * np.array([[a, 1j * np.conj(b)], [1j * b, np.conj(a)]])
    u6[2, 2] = np.exp(1j * p.gamma_g)
    u6[3:5, 3:5] = hi * np.array([[a, -1j * np.conj(b)], [-1j * b, np.conj(a)]])
    u6[5, 5] = np.exp(-1j * p.gamma_g)
    return u6, project(u6, TWO_LOGICAL)


def two_qubit_evolution(p: TwoQubitParams, scheme=Scheme.OPNHQC,
                        n: NoiseParams = NOISELESS) -> np.ndarray:
    """Propagate the logical two-qubit Hamiltonian under the scheme's phase schedule.

    The scheme's drive-phase sequence is applied to ``eta3`` while ``eta4``
    moves with it so that ``eta`` stays fixed.
    """
    u = np.eye(6, dtype=complex)
    for h, t in _two_pieces(p, scheme, n, physical=False):
        u = expm_generator(h, t) @ u
    return u


def cnot_equivalence(source: str = "closed", scheme=Scheme.OPNHQC,
                     params: TwoQubitParams = CNOT_PARAMS) -> tuple[bool, float]:
    """Check U'_T(params) (I x X/2) == CNOT; returns (ok, 1 - trace fidelity).

    With the default parameters (chi=pi/2, eta=0, gamma_g=pi/2) the identity is exact.
    """
    if source == "closed":
        _, u4 = two_qubit_gate(params)
    elif source == "evolved":
        u4 = project(two_qubit_evolution(params, scheme), TWO_LOGICAL)
    else:
        raise ConfigurationError(f"source must be 'closed' or 'evolved', got {source!r}")
    x_half = target_gate(GateParams(math.pi / 2, 0.0, math.pi / 2))
    product = u4 @ np.kron(np.eye(2), x_half)
    deviation = 1.0 - trace_fidelity(CNOT, product)
    return deviation < CONSISTENCY_TOL, deviation


# -- open-system simulation in the full physical space --------------------------

@dataclass
class DfsReport:
    level: str
    scheme: str
    fidelity: float
    leakage: float
    model: str
    dim: int
    final_rho: np.ndarray

    def summary(self) -> str:
        return (f"DFS {self.level} ({self.scheme}, {self.dim}-dim physical space): "
                f"fidelity={self.fidelity:.6f} leakage={self.leakage:.3e}; Lindblad model: {self.model}")


def physical_schedule(level: str, scheme, params, n: NoiseParams = NOISELESS) -> lindblad.Schedule:
    if level == "single":
        return lindblad.Schedule(tuple(_single_pieces(scheme, params, n, physical=True)))
    if level == "two":
        return lindblad.Schedule(tuple(_two_pieces(params, scheme, n, physical=True)))
    raise ConfigurationError(f"level must be 'single' or 'two', got {level!r}")


def simulate_dfs(level: str, scheme, params, n: NoiseParams = NOISELESS,
                 d: lindblad.DecoherenceParams = lindblad.CLOSED, psi=None,
                 step: float = lindblad.DEFAULT_STEP) -> DfsReport:
    """Lindblad run of an encoded gate on all physical qubits.

    ``params`` is a :class:`GateParams` for ``level="single"`` (default input
    |0>_L) or a :class:`TwoQubitParams` for ``level="two"`` (default input
    (|00>_L + |10>_L)/sqrt 2).  Every physical qubit decays and dephases at
    the rates in ``d``.
    """
    if level == "single":
        if not isinstance(params, GateParams):
            raise ConfigurationError("single-qubit DFS simulation needs GateParams")
        n_qubits, basis = 3, SINGLE_BASIS
        psi = np.array([1, 0], dtype=complex) if psi is None else np.asarray(psi, dtype=complex)
        ideal = np.concatenate([target_gate(params) @ psi, [0]])
        logical_in = np.concatenate([psi, [0]])
    elif level == "two":
        if not isinstance(params, TwoQubitParams):
            raise ConfigurationError("two-qubit DFS simulation needs TwoQubitParams")
        n_qubits, basis = 6, TWO_BASIS
        if psi is None:
            psi = np.zeros(4, dtype=complex)
            psi[0] = psi[2] = 1 / math.sqrt(2)
        psi = np.asarray(psi, dtype=complex)
        logical_in = np.zeros(6, dtype=complex)
        logical_in[list(TWO_LOGICAL)] = psi
        u6, _ = two_qubit_gate(params)
        ideal = u6 @ logical_in
    else:
        raise ConfigurationError(f"level must be 'single' or 'two', got {level!r}")

    d_phys = lindblad.DecoherenceParams(d.rates, "qubits")
    schedule = physical_schedule(level, scheme, params, n)
    rho0 = lindblad.pure_density(embed_state(logical_in, basis, n_qubits))
    rho = lindblad.integrate(rho0, schedule, d_phys, step)
    target = embed_state(ideal, basis, n_qubits)
    leakage = 1.0 - float(np.real(sum(rho[k, k] for k in basis)))
    return DfsReport(level, Scheme.parse(scheme).value, lindblad.state_fidelity(rho, target),
                     leakage, d_phys.describe(), 2**n_qubits, rho)

