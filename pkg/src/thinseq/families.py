"""Reference point families with known separation character, and sequence
file round-trip.

Two file forms are supported.  The two-column text form holds one "re,im"
pair per line with '#' comments; it cannot represent points whose
cartesian parts collapse onto the unit circle in doubles, and the writer
refuses them.  The structured form {"points": [{"re", "im", ...}]} is
written with additional "theta" and "gap" fields per point; when present
these are authoritative on load, so boundary gaps far below the double
spacing at 1.0 survive the trip.  Floats are serialized via repr and parse
back bit-identically.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

from .disc import DiscPoint, PointSequence

__all__ = [
    "FamilySpec",
    "SequenceFileError",
    "generate",
    "save_sequence",
    "load_sequence",
]

MAX_COUNT = 64
MIN_GAP = 1e-300

_KINDS = ("geometric", "supergeometric", "power_tower", "custom_file")
_ANGLE_RULES = ("radial", "fixed_list")


class SequenceFileError(ValueError):
    """Malformed or unrepresentable sequence file."""


@dataclass(frozen=True)
class FamilySpec:
    """Parameters of a generated point family.

    Boundary gaps are c * q^e(n) with e(n) = n, n^2, or a^n by kind; the
    moduli increase strictly toward 1.
    """

    kind: str
    c: float = 1.0
    q: float = 0.5
    a: float = 2.0
    count: int = 12
    angle_rule: str = "radial"
    angles: tuple[float, ...] = ()
    path: str | None = None

    def __post_init__(self) -> None:
        if self.kind not in _KINDS:
            raise ValueError(f"unknown family kind: {self.kind!r}")
        if self.angle_rule not in _ANGLE_RULES:
            raise ValueError(f"unknown angle rule: {self.angle_rule!r}")
        if self.kind == "custom_file":
            if not self.path:
                raise ValueError("custom_file family needs a path")
            return
        if not 0.0 < self.q < 1.0:
            raise ValueError(f"q must lie in (0, 1): {self.q}")
        if not 0.0 < self.c <= 1.0:
            raise ValueError(f"c must lie in (0, 1]: {self.c}")
        if self.kind == "power_tower" and not self.a > 1.0:
            raise ValueError(f"a must exceed 1: {self.a}")
        if not 1 <= self.count <= MAX_COUNT:
            raise ValueError(f"count must lie in 1..{MAX_COUNT}: {self.count}")
        if self.angle_rule == "fixed_list" and len(self.angles) != self.count:
            raise ValueError(
                f"fixed_list needs {self.count} angles, got {len(self.angles)}"
            )

    def describe(self) -> str:
        if self.kind == "custom_file":
            return f"custom_file path={self.path}"
        parts = [f"{self.kind} c={self.c!r} q={self.q!r}"]
        if self.kind == "power_tower":
            parts.append(f"a={self.a!r}")
        parts.append(f"count={self.count}")
        parts.append(f"angles={self.angle_rule}")
        return " ".join(parts)


def _exponent(spec: FamilySpec, n: int) -> float:
    if spec.kind == "geometric":
        return float(n)
    if spec.kind == "supergeometric":
        return float(n * n)
    return spec.a ** n


def generate(spec: FamilySpec) -> PointSequence:
    """Materialize the family; boundary gaps are computed directly, never
    through the cartesian parts."""
    if spec.kind == "custom_file":
        return load_sequence(spec.path)
    points = []
    for n in range(1, spec.count + 1):
        gap = spec.c * spec.q ** _exponent(spec, n)
        if gap < MIN_GAP:
            raise ValueError(
                f"point {n} has boundary gap {gap:.3e} below {MIN_GAP:.0e}; "
                "reduce count"
            )
        theta = spec.angles[n - 1] if spec.angle_rule == "fixed_list" else 0.0
        points.append(DiscPoint(theta, gap))
    return PointSequence(points)


def _format_auto(path: str) -> str:
    return "csv" if str(path).endswith(".csv") else "json"


def save_sequence(path, Z: PointSequence, fmt: str = "auto", header: str | None = None) -> None:
    """Write the sequence; fmt is 'json', 'csv', or 'auto' (by suffix)."""
    if fmt == "auto":
        fmt = _format_auto(path)
    if fmt == "json":
        doc: dict = {}
        if header:
            doc["meta"] = {"comment": header}
        doc["points"] = [
            {"re": p.re, "im": p.im, "theta": p.theta, "gap": p.gap}
            for p in Z.points
        ]
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=2, sort_keys=True)
            fh.write("\n")
        return
    if fmt != "csv":
        raise ValueError(f"unknown format: {fmt!r}")
    lines = []
    if header:
        for h in header.splitlines():
            lines.append(f"# {h}")
    for k, p in enumerate(Z.points, start=1):
        if 1.0 - p.gap == 1.0:
            raise SequenceFileError(
                f"point {k} sits too close to the boundary for the "
                "two-column form; use the structured format"
            )
        lines.append(f"{p.re!r},{p.im!r}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def _point_from_json(i: int, item) -> DiscPoint:
    if not isinstance(item, dict):
        raise SequenceFileError(f"point {i}: expected an object, got {type(item).__name__}")
    try:
        if "theta" in item and "gap" in item:
            return DiscPoint(float(item["theta"]), float(item["gap"]))
        return DiscPoint.from_cartesian(float(item["re"]), float(item["im"]))
    except KeyError as exc:
        raise SequenceFileError(f"point {i}: missing field {exc}") from exc
    except (TypeError, ValueError) as exc:
        raise SequenceFileError(f"point {i}: {exc}") from exc


def _load_json(text: str) -> PointSequence:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SequenceFileError(f"line {exc.lineno}: {exc.msg}") from exc
    if not isinstance(doc, dict) or "points" not in doc:
        raise SequenceFileError('document has no "points" field')
    items = doc["points"]
    if not isinstance(items, list) or not items:
        raise SequenceFileError('"points" must be a non-empty list')
    return PointSequence([_point_from_json(i, it) for i, it in enumerate(items, 1)])


def _load_csv(text: str) -> PointSequence:
    points = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = [f.strip() for f in line.split(",")]
        if len(fields) != 2:
            raise SequenceFileError(
                f"line {lineno}: expected two comma-separated values, got {len(fields)}"
            )
        try:
            re, im = float(fields[0]), float(fields[1])
        except ValueError as exc:
            raise SequenceFileError(f"line {lineno}: {exc}") from exc
        try:
            points.append(DiscPoint.from_cartesian(re, im))
        except ValueError as exc:
            raise SequenceFileError(f"line {lineno}: {exc}") from exc
    if not points:
        raise SequenceFileError("file contains no points")
    return PointSequence(points)


def load_sequence(path) -> PointSequence:
    """Load a sequence file, auto-detecting the format by first byte."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    stripped = text.lstrip()
    if not stripped:
        raise SequenceFileError("file is empty")
    if stripped[0] == "{":
        return _load_json(text)
    return _load_csv(text)
