"""Sweep configuration: key=value files, angle and grid parsing."""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..errors import ConfigurationError
from ..lindblad import DEFAULT_STEP
from ..pulses import ALL_SCHEMES, GATE_PRESETS, GateParams, Scheme


def parse_angle(text) -> float:
    """Parse a float or a multiple of pi: ``0.5pi``, ``pi/4``, ``-3pi/4``, ``1.2``."""
    if isinstance(text, (int, float)):
        return float(text)
    s = str(text).replace(" ", "").replace("*", "").lower()
    try:
        if "pi" not in s:
            return float(s)
        coef, _, rest = s.partition("pi")
        coef = {"": 1.0, "+": 1.0, "-": -1.0}.get(coef, None) or float(coef)
        if rest and not rest.startswith("/"):
            raise ValueError
        return coef * math.pi / (float(rest[1:]) if rest else 1.0)
    except ValueError:
        raise ConfigurationError(f"cannot parse angle {text!r}") from None


@dataclass(frozen=True)
class Grid:
    lo: float
    hi: float
    count: int

    def __post_init__(self):
        if self.count < 1:
            raise ConfigurationError(f"grid count must be >= 1, got {self.count}")
        if self.lo > self.hi:
            raise ConfigurationError(f"grid min {self.lo} exceeds max {self.hi}")
        if self.count == 1 and self.lo != self.hi:
            raise ConfigurationError("a single-point grid needs min == max")

    @classmethod
    def parse(cls, text) -> "Grid":
        """``value`` or ``min:max:count``."""
        if isinstance(text, Grid):
            return text
        if isinstance(text, (int, float)):
            return cls(float(text), float(text), 1)
        parts = str(text).split(":")
        try:
            if len(parts) == 1:
                lo = hi = float(parts[0])
                count = 1
            elif len(parts) == 3:
                lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
            else:
                raise ValueError
        except ValueError:
            raise ConfigurationError(f"grid must be 'value' or 'min:max:count', got {text!r}") from None
        return cls(lo, hi, count)

    @property
    def values(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.count)


def parse_gate(name: str | None = None, theta=None, phi=None, gamma_g=None) -> GateParams:
    """Gate from a preset name (X/2, S) or ``custom``; explicit angles override the preset."""
    if name and name.lower() == "custom":
        if theta is None or gamma_g is None:
            raise ConfigurationError("custom gates need theta and gamma_g")
        base = GateParams(0.0, 0.0, 0.0)
    elif name and name not in GATE_PRESETS:
        raise ConfigurationError(f"unknown gate preset {name!r}; use X/2, S or custom")
    else:
        base = GATE_PRESETS[name or "X/2"]
    return GateParams(
        parse_angle(theta) if theta is not None else base.theta,
        parse_angle(phi) if phi is not None else base.phi,
        parse_angle(gamma_g) if gamma_g is not None else base.gamma_g,
    )


def parse_schemes(text) -> tuple[Scheme, ...]:
    if text is None or str(text).strip().lower() == "all":
        return ALL_SCHEMES
    if isinstance(text, (list, tuple)):
        return tuple(Scheme.parse(s) for s in text)
    return tuple(Scheme.parse(s) for s in str(text).split(",") if s.strip())


def read_config(path) -> dict[str, str]:
    """Read ``key = value`` lines; ``#`` starts a comment.  Keys are normalized to snake_case."""
    out = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, value = (p.strip() for p in line.split("=", 1))
        out[key.replace("-", "_").lower()] = value
    return out


@dataclass(frozen=True)
class SweepConfig:
    schemes: tuple = ALL_SCHEMES
    gate: GateParams = GATE_PRESETS["X/2"]
    epsilon: Grid = Grid(-0.1, 0.1, 21)
    delta: Grid | None = None
    gamma_rate: Grid | None = None
    phi0: float = 0.0
    step: float = DEFAULT_STEP
    out: Path | None = None
    workers: int = 1
    encoding: str = "bare"

    def __post_init__(self):
        if not self.step > 0:
            raise ConfigurationError(f"step must be positive, got {self.step}")
        if self.workers < 1:
            raise ConfigurationError("workers must be >= 1")
        if self.encoding not in ("bare", "dfs"):
            raise ConfigurationError(f"encoding must be 'bare' or 'dfs', got {self.encoding!r}")
        if self.gamma_rate is not None and self.gamma_rate.lo < 0:
            raise ConfigurationError("decoherence rates must be >= 0")


def build_config(values: dict) -> SweepConfig:
    """SweepConfig from merged string values (config file overlaid by CLI flags)."""
    v = {k: x for k, x in values.items() if x is not None}
    kw = {
        "schemes": parse_schemes(v.get("scheme")),
        "gate": parse_gate(v.get("gate"), v.get("theta"), v.get("phi"), v.get("gamma_g")),
    }
    for key in ("epsilon", "delta", "gamma_rate"):
        if key in v:
            kw[key] = Grid.parse(v[key])
    try:
        if "phi0" in v:
            kw["phi0"] = parse_angle(v["phi0"])
        if "step" in v:
            kw["step"] = float(v["step"])
        if "workers" in v:
            kw["workers"] = int(v["workers"])
    except ValueError as exc:
        raise ConfigurationError(str(exc)) from None
    if "out" in v:
        kw["out"] = Path(v["out"])
    if "encoding" in v:
        kw["encoding"] = str(v["encoding"]).lower()
    return SweepConfig(**kw)
