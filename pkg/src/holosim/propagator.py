"""Three-level propagation with systematic X/Z errors and closed-form error operators.

Basis order everywhere is ``(|0>, |1>, |e>)``.  An X error scales the whole
drive by ``mu = 1 + epsilon``; a Z error adds ``delta * Omega_m |e><e|``.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass

import numpy as np

from .algebra import basis_vector, dagger, expm_generator, trace_fidelity
from .errors import ValidationError
from .pulses import GateParams, Scheme, bright_dark_basis, target_gate

NOISE_BOUND = 0.5

# leading power of epsilon in 1 - F
ERROR_ORDER = {Scheme.NHQC: 2, Scheme.TLNHQC: 2, Scheme.OPNHQC: 4, Scheme.DCNHQC: 4}


@dataclass(frozen=True)
class NoiseParams:
    epsilon: float = 0.0
    delta: float = 0.0

    def __post_init__(self):
        for name in ("epsilon", "delta"):
            v = getattr(self, name)
            if not math.isfinite(v) or abs(v) > NOISE_BOUND:
                raise ValidationError(f"{name} must satisfy |{name}| <= {NOISE_BOUND}, got {v}")

    @property
    def mu(self) -> float:
        return 1.0 + self.epsilon


NOISELESS = NoiseParams()


def embed_qubit(v) -> np.ndarray:
    """Place a qubit state into the three-level space with zero |e> amplitude."""
    out = np.zeros(3, dtype=complex)
    out[:2] = v
    return out


def hamiltonian_3level(g: GateParams, phi0: float, omega: float = 1.0,
                       n: NoiseParams = NOISELESS, omega_max: float = 1.0) -> np.ndarray:
    if not omega > 0:
        raise ValidationError(f"drive amplitude must be positive, got {omega}")
    bright, _ = bright_dark_basis(g)
    b = embed_qubit(bright)
    e = basis_vector(2, 3)
    coupling = omega * np.exp(-1j * phi0) * np.outer(b, e.conj())
    h = n.mu * (coupling + dagger(coupling))
    h[2, 2] += n.delta * omega_max
    return h


def segment_hamiltonians(segments, g: GateParams, n: NoiseParams = NOISELESS,
                         omega: float = 1.0) -> list[tuple[np.ndarray, float]]:
    """(H, duration) per segment; duration is area / omega."""
    return [(hamiltonian_3level(g, s.phi0, omega, n), s.area / omega) for s in segments]


def evolve_sequence(segments, g: GateParams, n: NoiseParams = NOISELESS,
                    omega: float = 1.0) -> np.ndarray:
    segments = list(segments)
    if not segments:
        raise ValidationError("segment list is empty")
    u = np.eye(3, dtype=complex)
    for h, t in segment_hamiltonians(segments, g, n, omega):
        u = expm_generator(h, t) @ u
    return u


def computational_block(u: np.ndarray) -> np.ndarray:
    return u[:2, :2]


def dressed_block(u: np.ndarray, g: GateParams) -> np.ndarray:
    """2x2 matrix of ``u`` in the (|b>, |d>) basis."""
    bright, dark = bright_dark_basis(g)
    w = np.column_stack([embed_qubit(bright), embed_qubit(dark)])
    return dagger(w) @ u @ w


def dressed_error_amplitude(scheme, gamma_g: float, epsilon: float) -> complex:
    """Coefficient of |b><b| in the scheme's error operator (closed form)."""
    scheme = Scheme.parse(scheme)
    mu = 1.0 + epsilon
    c = math.cos(mu * math.pi / 2)
    s = math.sin(mu * math.pi / 2)
    s_full = math.sin(mu * math.pi)
    ph = np.exp(1j * gamma_g)
    if scheme is Scheme.NHQC:
        return complex(c**2 + s**2 * ph)
    if scheme is Scheme.OPNHQC:
        inner = c**4 * np.exp(-0.5j * gamma_g) + 0.25 * s_full**2
        return complex(ph - 2j * ph * math.sin(gamma_g / 2) * inner)
    if scheme is Scheme.TLNHQC:
        return complex(
            0.5 * s_full**2 * (math.cos(gamma_g / 2) + np.exp(0.5j * gamma_g))
            + s**4 * ph
            + c**2 * (1 - 3 * s**2)
        )
    return complex(c**4 + (s**2 + 0.25 * s_full**2) * ph)


def scheme_fidelity(scheme, gamma_g: float, epsilon: float, mode: str = "exact") -> float:
    """Gate fidelity under an X error: exact closed form or leading-order series."""
    scheme = Scheme.parse(scheme)
    if mode == "exact":
        a = dressed_error_amplitude(scheme, gamma_g, epsilon)
        return float(0.5 * abs(1 + a * np.exp(-1j * gamma_g)))
    if mode != "series":
        raise ValidationError(f"mode must be 'exact' or 'series', got {mode!r}")
    e2pi2 = (epsilon * math.pi) ** 2
    if scheme is Scheme.NHQC:
        return 1 - e2pi2 * (1 - math.cos(gamma_g)) / 8
    if scheme is Scheme.TLNHQC:
        return 1 - e2pi2 * math.sin(gamma_g / 4) ** 2 * math.cos(gamma_g / 2) ** 2
    if scheme is Scheme.OPNHQC:
        return 1 - e2pi2**2 * (1 - math.cos(gamma_g)) / 64
    return 1 - e2pi2**2 * (1 - math.cos(gamma_g)) / 32


def numeric_fidelity(segments, g: GateParams, n: NoiseParams = NOISELESS) -> float:
    """Trace fidelity of the propagated computational block against the target gate."""
    u = evolve_sequence(segments, g, n)
    return trace_fidelity(target_gate(g), computational_block(u))


def bloch_trajectory(segments, g: GateParams, n: NoiseParams = NOISELESS,
                     samples: int = 201, omega: float = 1.0) -> np.ndarray:
    """Bloch vectors of the bright-state evolution in the {|b>, |e>} two-level picture.

    Returns an array of shape ``(samples, 3)`` sampled uniformly in time; the
    north pole is |b>.
    """
    if samples < 2:
        raise ValidationError("samples must be >= 2")
    pieces = segment_hamiltonians(list(segments), g, n, omega)
    bright, _ = bright_dark_basis(g)
    b = embed_qubit(bright)

    starts, props = [], []
    t, u = 0.0, np.eye(3, dtype=complex)
    for h, dt in pieces:
        starts.append(t)
        props.append(u)
        u = expm_generator(h, dt) @ u
        t += dt
    total = t

    out = np.empty((samples, 3))
    for k, tk in enumerate(np.linspace(0.0, total, samples)):
        idx = max(bisect_right(starts, tk) - 1, 0)
        h, _ = pieces[idx]
        psi = expm_generator(h, max(tk - starts[idx], 0.0)) @ props[idx] @ b
        cb, ce = np.vdot(b, psi), psi[2]
        x = np.conj(cb) * ce
        out[k] = (2 * x.real, 2 * x.imag, abs(cb) ** 2 - abs(ce) ** 2)
    return out

