"""Sweep definitions, validation and grid expansion."""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable

import numpy as np

from model.config import PROBE_FIELDS, RunConfig
from model.errors import ParameterError
from model.params import SYSTEM_FIELDS, require_valid, with_overrides

logger = logging.getLogger(__name__)

SWEEPABLE: frozenset[str] = frozenset(SYSTEM_FIELDS + PROBE_FIELDS)
SCALES = ("linear", "log")
MAX_AXES = 2


@dataclass(frozen=True)
class Axis:
    name: str
    start: float
    stop: float
    points: int
    scale: str = "linear"

    def values(self) -> np.ndarray:
        if self.points == 1:
            return np.array([float(self.start)])
        if self.scale == "log":
            return np.geomspace(self.start, self.stop, self.points)
        return np.linspace(self.start, self.stop, self.points)

    def canonical(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "start": float(self.start),
            "stop": float(self.stop),
            "points": int(self.points),
            "scale": self.scale,
        }


@dataclass(frozen=True)
class SweepSpec:
    axes: tuple[Axis, ...]
    fields: tuple[str, ...]
    overrides: dict[str, float] = field(default_factory=dict)
    # target field -> source field; the target takes the source's value at every point.
    links: dict[str, str] = field(default_factory=dict)
    name: str | None = None

    @property
    def n_points(self) -> int:
        return math.prod(axis.points for axis in self.axes)

    @property
    def axis_names(self) -> tuple[str, ...]:
        return tuple(axis.name for axis in self.axes)

    def canonical(self) -> dict[str, Any]:
        return {
            "axes": [axis.canonical() for axis in self.axes],
            "fields": list(self.fields),
            "overrides": {k: float(v) for k, v in sorted(self.overrides.items())},
            "links": dict(sorted(self.links.items())),
        }


def validate_axis(axis: Axis) -> tuple[bool, str]:
    if axis.name not in SWEEPABLE:
        return False, f"Axis {axis.name!r} is not a SystemParams or ProbeParams field."
    if axis.scale not in SCALES:
        return False, f"Axis {axis.name!r}: scale must be one of {SCALES}."
    if not (math.isfinite(axis.start) and math.isfinite(axis.stop)):
        return False, f"Axis {axis.name!r}: bounds must be finite."
    if axis.points == 1:
        if axis.start != axis.stop:
            return False, f"Axis {axis.name!r}: a single point needs start == stop."
    elif axis.points < 2:
        return False, f"Axis {axis.name!r}: point count must be at least 2."
    if axis.scale == "log" and (axis.start <= 0 or axis.stop <= 0):
        return False, f"Axis {axis.name!r}: log axes need positive bounds."
    return True, "OK"


def validate_sweep_spec(spec: SweepSpec, available_fields: Iterable[str]) -> tuple[bool, str]:
    """Validate a sweep definition against the fields its evaluator can produce."""
    if not 1 <= len(spec.axes) <= MAX_AXES:
        return False, f"A sweep needs 1 to {MAX_AXES} axes (got {len(spec.axes)})."
    if len(set(spec.axis_names)) != len(spec.axes):
        return False, "Axis names must be distinct."

    for axis in spec.axes:
        ok, reason = validate_axis(axis)
        if not ok:
            return False, reason

    for key in spec.overrides:
        if key not in SWEEPABLE:
            return False, f"Override {key!r} is not a SystemParams or ProbeParams field."
        if key in spec.axis_names:
            return False, f"Override {key!r} is also a sweep axis."

    for target, source in spec.links.items():
        if target not in SWEEPABLE or source not in SWEEPABLE:
            return False, f"Link {target!r} <- {source!r} must join two parameter fields."
        if target in spec.axis_names:
            return False, f"Link target {target!r} is a sweep axis."
        if target in spec.links.values():
            return False, f"Link target {target!r} is itself a link source."

    available = set(available_fields)
    if not spec.fields:
        return False, "At least one output field is required."
    unknown = [f for f in spec.fields if f not in available]
    if unknown:
        return False, f"Unknown output field(s): {', '.join(unknown)}."
    return True, "OK"


def grid_points(spec: SweepSpec) -> list[dict[str, float]]:
    """Every grid point in axis-major order (the first axis varies slowest)."""
    points: list[dict[str, float]] = [{}]
    for axis in spec.axes:
        points = [{**p, axis.name: float(v)} for p in points for v in axis.values()]
    return points


def point_config(spec: SweepSpec, base: RunConfig, point: dict[str, float]) -> RunConfig:
    """Resolve one grid point into a full RunConfig."""
    values: dict[str, float] = dict(spec.overrides)
    values.update(point)
    base_values = {name: float(getattr(base.system, name)) for name in SYSTEM_FIELDS}
    for target, source in spec.links.items():
        linked = values.get(source, base_values.get(source, base.probe.get(source)))
        if linked is None:
            raise ParameterError(f"Link source {source!r} has no value at this point")
        values[target] = linked

    system_values = {k: v for k, v in values.items() if k in SYSTEM_FIELDS}
    probe_values = {k: v for k, v in values.items() if k in PROBE_FIELDS}
    system = require_valid(with_overrides(base.system, system_values))
    return RunConfig(system=system, probe={**base.probe, **probe_values}, readout=dict(base.readout))


def spec_from_dict(data: dict[str, Any], name: str | None = None) -> SweepSpec:
    try:
        axes = tuple(
            Axis(
                name=str(a["name"]),
                start=float(a["start"]),
                stop=float(a["stop"]),
                points=int(a["points"]),
                scale=str(a.get("scale", "linear")),
            )
            for a in data["axes"]
        )
        return SweepSpec(
            axes=axes,
            fields=tuple(str(f) for f in data["fields"]),
            overrides={str(k): float(v) for k, v in (data.get("overrides") or {}).items()},
            links={str(k): str(v) for k, v in (data.get("links") or {}).items()},
            name=data.get("name", name),
        )
    except (KeyError, TypeError, ValueError) as e:
        raise ParameterError(f"Malformed sweep definition: {e}") from e


def load_sweep_spec(path: str | Path) -> SweepSpec:
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as e:
        raise ParameterError(f"Cannot read sweep definition {path}: {e}") from e
    if not isinstance(data, dict):
        raise ParameterError(f"{path}: sweep definition must be a JSON object")
    return spec_from_dict(data, name=path.stem)
