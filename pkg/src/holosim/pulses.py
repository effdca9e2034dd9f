"""Pulse schemes for holonomic gates on a Lambda-type three-level system.

Every scheme is a list of square segments (constant amplitude ``Omega_m = 1``,
so a segment's duration equals its area).  Only the common drive phase
``phi0`` changes from segment to segment; the gate axis ``(theta, phi)`` is
fixed by the amplitude ratio and relative phase of the two drives.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .algebra import SIGMA_X, SIGMA_Y, SIGMA_Z
from .errors import ConfigurationError, ValidationError

TWO_PI = 2.0 * math.pi


class Scheme(str, Enum):
    NHQC = "NHQC"
    TLNHQC = "TLNHQC"
    DCNHQC = "DCNHQC"
    OPNHQC = "OPNHQC"

    @classmethod
    def parse(cls, name) -> "Scheme":
        if isinstance(name, cls):
            return name
        try:
            return cls(str(name).strip().upper())
        except ValueError:
            known = ", ".join(s.value for s in cls)
            raise ConfigurationError(f"unknown scheme {name!r}; expected one of {known}") from None


ALL_SCHEMES = (Scheme.NHQC, Scheme.TLNHQC, Scheme.DCNHQC, Scheme.OPNHQC)


@dataclass(frozen=True)
class GateParams:
    """Target gate ``exp(i g/2) exp(-i g/2 n.sigma)`` with axis angles (theta, phi)."""

    theta: float
    phi: float
    gamma_g: float

    def __post_init__(self):
        if not all(math.isfinite(x) for x in (self.theta, self.phi, self.gamma_g)):
            raise ValidationError("gate parameters must be finite")
        if not -1e-12 <= self.theta <= math.pi + 1e-12:
            raise ValidationError(f"theta must lie in [0, pi], got {self.theta}")

    def normalized(self) -> "GateParams":
        return GateParams(self.theta, self.phi % TWO_PI, self.gamma_g % TWO_PI)

    @property
    def axis(self) -> np.ndarray:
        st = math.sin(self.theta)
        return np.array([st * math.cos(self.phi), st * math.sin(self.phi), math.cos(self.theta)])


X_HALF = GateParams(theta=math.pi / 2, phi=0.0, gamma_g=math.pi / 2)
S_GATE = GateParams(theta=0.0, phi=0.0, gamma_g=math.pi / 2)
GATE_PRESETS = {"X/2": X_HALF, "x2": X_HALF, "S": S_GATE, "s": S_GATE}


@dataclass(frozen=True)
class PulseSegment:
    area: float
    phi0: float

    def __post_init__(self):
        if not self.area > 0:
            raise ValidationError(f"segment area must be positive, got {self.area}")

    @property
    def duration(self) -> float:
        return self.area


def build_sequence(scheme, g: GateParams, phi0_base: float = 0.0) -> list[PulseSegment]:
    """Segment list (areas and drive phases) realizing ``g`` with the given scheme.

    Phases are kept exactly as the scheme lists them, so they may fall
    outside ``[0, 2pi)``.
    """
    scheme = Scheme.parse(scheme)
    if not math.isfinite(phi0_base):
        raise ValidationError("phi0_base must be finite")
    p, gg = phi0_base, g.gamma_g
    q, h = math.pi / 4, math.pi / 2
    if scheme is Scheme.NHQC:
        rows = [(h, p), (h, p + math.pi - gg)]
    elif scheme is Scheme.OPNHQC:
        rows = [
            (h, p),
            (h, p + math.pi - gg / 2),
            (h, p + math.pi - gg),
            (h, p + TWO_PI - 1.5 * gg),
        ]
    elif scheme is Scheme.TLNHQC:
        rows = [(h, p), (h, p + math.pi - gg / 2), (h, p), (h, p + math.pi - gg / 2)]
    else:
        rows = [
            (q, p),
            (h, p + math.pi / 2),
            (q, p),
            (q, p + math.pi - gg),
            (h, p - math.pi / 2 - gg),
            (q, p + math.pi - gg),
        ]
    return [PulseSegment(area, phase) for area, phase in rows]


def total_area(segments) -> float:
    return float(sum(s.area for s in segments))


def target_gate(g: GateParams) -> np.ndarray:
    n = g.axis
    n_sigma = n[0] * SIGMA_X + n[1] * SIGMA_Y + n[2] * SIGMA_Z
    half = g.gamma_g / 2
    return np.exp(1j * half) * (math.cos(half) * np.eye(2) - 1j * math.sin(half) * n_sigma)


def bright_dark_basis(g: GateParams) -> tuple[np.ndarray, np.ndarray]:
    """Bright and dark qubit states for the drive axis of ``g``."""
    c, s = math.cos(g.theta / 2), math.sin(g.theta / 2)
    bright = np.array([s, -c * np.exp(1j * g.phi)], dtype=complex)
    dark = np.array([-c * np.exp(-1j * g.phi), -s], dtype=complex)
    return bright, dark


def drive_phase_1(phi0: float, g: GateParams) -> float:
    """Phase of the |1>-|e> drive that keeps the axis azimuth fixed at ``g.phi``."""
    return phi0 - g.phi + math.pi
