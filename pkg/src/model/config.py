"""Flat ``key = value`` parameter files and ``--set`` overrides.

Files use the dotenv grammar (``#`` comments, optional quotes). Values are SI;
a frequency key ending in ``_hz`` sets the field without the suffix to 2π
times the value. Probe keys and the readout settings are collected separately
and resolved by the probe package.
"""

from __future__ import annotations

import io
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from dotenv.parser import Binding, parse_stream

from .errors import ParameterError
from .params import SYSTEM_FIELDS, SystemParams, require_valid, with_overrides

logger = logging.getLogger(__name__)

PROBE_FIELDS: tuple[str, ...] = ("kappa_p", "zeta_p", "eta_p", "delta_p_tilde")
READOUT_FIELDS: tuple[str, ...] = ("tau_m", "homodyne_phase")
KNOWN_KEYS: frozenset[str] = frozenset(SYSTEM_FIELDS + PROBE_FIELDS + READOUT_FIELDS)

HZ_SUFFIX = "_hz"
# Angular frequencies that may be given in Hz.
FREQUENCY_KEYS: frozenset[str] = frozenset({"omega_m", "Omega", "detuning", "kappa_p", "delta_p_tilde"})


@dataclass(frozen=True)
class RunConfig:
    system: SystemParams = field(default_factory=SystemParams)
    probe: dict[str, float] = field(default_factory=dict)
    readout: dict[str, float] = field(default_factory=dict)

    def canonical(self) -> dict[str, object]:
        """Plain dict of every resolved value, used for cache keys."""
        return {
            "system": {name: float(getattr(self.system, name)) for name in SYSTEM_FIELDS},
            "probe": dict(sorted(self.probe.items())),
            "readout": dict(sorted(self.readout.items())),
        }


def _resolve_key(raw_key: str, raw_value: str, where: str) -> tuple[str, float]:
    key = raw_key.strip()
    try:
        value = float(raw_value.strip())
    except ValueError as e:
        raise ParameterError(f"{where}: cannot parse {raw_value.strip()!r} as a number") from e
    if not math.isfinite(value):
        raise ParameterError(f"{where}: {key} must be finite")

    if key.endswith(HZ_SUFFIX):
        base = key[: -len(HZ_SUFFIX)]
        if base in FREQUENCY_KEYS:
            return base, 2.0 * math.pi * value
        if base in KNOWN_KEYS:
            raise ParameterError(f"{where}: {base!r} is not a frequency; the {HZ_SUFFIX!r} suffix does not apply")
    if key not in KNOWN_KEYS:
        raise ParameterError(f"{where}: unknown key {key!r}")
    return key, value


def _binding_line(binding: Binding) -> int:
    # A binding's text starts with any blank lines that precede it.
    text = binding.original.string
    return binding.original.line + text[: len(text) - len(text.lstrip())].count("\n")


def parse_assignments(lines: Iterable[str], source: str = "<config>") -> dict[str, float]:
    """Parse ``key = value`` lines into resolved field values.

    A field given twice (directly or through its ``_hz`` form) is an error.
    """
    values: dict[str, float] = {}
    first_seen: dict[str, int] = {}

    for binding in parse_stream(io.StringIO("\n".join(lines))):
        lineno = _binding_line(binding)
        where = f"{source}:{lineno}"
        if binding.error or (binding.key is not None and binding.value is None):
            raise ParameterError(f"{where}: expected 'key = value', got {binding.original.string.strip()!r}")
        if binding.key is None:
            continue

        key, value = _resolve_key(binding.key, binding.value, where)
        if key in values:
            raise ParameterError(f"{where}: duplicate key {key!r} (first set on line {first_seen[key]})")
        values[key] = value
        first_seen[key] = lineno

    return values


def parse_overrides(items: Iterable[str]) -> dict[str, float]:
    """Parse CLI ``--set key=value`` items with the file grammar."""
    return parse_assignments(items, source="--set")


def build_config(values: dict[str, float], base: SystemParams | None = None) -> RunConfig:
    system_values = {k: v for k, v in values.items() if k in SYSTEM_FIELDS}
    system = require_valid(with_overrides(base or SystemParams(), system_values))
    return RunConfig(
        system=system,
        probe={k: v for k, v in values.items() if k in PROBE_FIELDS},
        readout={k: v for k, v in values.items() if k in READOUT_FIELDS},
    )


def load_config(path: str | Path | None = None, overrides: Iterable[str] = ()) -> RunConfig:
    """Read a parameter file (optional) and apply ``--set`` overrides on top."""
    values: dict[str, float] = {}
    if path is not None:
        path = Path(path)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as e:
            raise ParameterError(f"Cannot read parameter file {path}: {e}") from e
        values.update(parse_assignments(text.splitlines(), source=str(path)))
        logger.debug("Loaded %d parameter(s) from %s", len(values), path)

    values.update(parse_overrides(overrides))
    return build_config(values)
