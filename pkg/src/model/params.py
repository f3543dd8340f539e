"""Physical inputs of the hybrid cavity system.

All frequencies and rates are angular (rad/s). The defaults reproduce the base
point of the mirror/atom symmetric regime: ω_m/2π = 3 MHz, Q = 3×10⁴, m = 50 ng,
R = 50 mW, F = 10⁴, L = 1 mm, Δ = 2ω_m, χ = ζ = 100 s⁻¹, T = 10 μK.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace
from typing import Any

from .errors import ParameterError

OMEGA_M_BASE = 2.0 * math.pi * 3.0e6


@dataclass(frozen=True)
class SystemParams:
    omega_m: float = OMEGA_M_BASE
    Omega: float = OMEGA_M_BASE
    mass: float = 50e-12
    quality: float = 3.0e4
    finesse: float = 1.0e4
    cavity_length: float = 1.0e-3
    pump_power: float = 50e-3
    laser_wavelength: float = 780e-9
    detuning: float = 2.0 * OMEGA_M_BASE
    chi: float = 100.0
    zeta: float = 100.0
    temperature: float = 10e-6
    # Damping of the Bogoliubov momentum (zero-temperature bath); 0 for the bare condensate.
    atom_damping: float = 0.0


SYSTEM_FIELDS: tuple[str, ...] = tuple(f.name for f in fields(SystemParams))

_STRICTLY_POSITIVE = (
    "omega_m",
    "Omega",
    "mass",
    "quality",
    "finesse",
    "cavity_length",
    "laser_wavelength",
    "temperature",
)
_NON_NEGATIVE = ("pump_power", "chi", "zeta", "atom_damping")


def validate_params(params: SystemParams) -> tuple[bool, str]:
    """Check the field invariants of SystemParams."""
    for name in SYSTEM_FIELDS:
        value = getattr(params, name)
        if not isinstance(value, (int, float)) or not math.isfinite(float(value)):
            return False, f"{name} must be a finite number (got {value!r})."

    for name in _STRICTLY_POSITIVE:
        if getattr(params, name) <= 0:
            return False, f"{name} must be strictly positive (got {getattr(params, name)!r})."

    for name in _NON_NEGATIVE:
        if getattr(params, name) < 0:
            return False, f"{name} must be non-negative (got {getattr(params, name)!r})."

    return True, "OK"


def require_valid(params: SystemParams) -> SystemParams:
    ok, reason = validate_params(params)
    if not ok:
        raise ParameterError(reason)
    return params


def with_overrides(params: SystemParams, overrides: dict[str, Any]) -> SystemParams:
    """Return a copy of params with the given SystemParams fields replaced."""
    unknown = sorted(set(overrides) - set(SYSTEM_FIELDS))
    if unknown:
        raise ParameterError(f"Unknown SystemParams field(s): {', '.join(unknown)}")
    return replace(params, **{k: float(v) for k, v in overrides.items()})
