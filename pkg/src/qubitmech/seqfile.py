"""Reading and writing pulse-sequence files.

Format (angles in radians)::

    {"name": "...", "description": "...",
     "pulses": [{"tau": 3.14159, "phi": 0.0}, ...],
     "expected": [{"transition": "10", "order": 1, "re": 0.0, "im": -1.57}]}

Only ``pulses`` is required. ``expected`` holds reference amplitudes that
``verify`` checks the solver against.
"""
from __future__ import annotations

import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Any

from .core import TRANSITIONS, Pulse, PulseSequence
from .errors import SequenceFileError


@dataclass(frozen=True)
class ExpectedAmplitude:
    transition: str
    order: int
    value: complex


@dataclass(frozen=True)
class SequenceFile:
    sequence: PulseSequence
    name: str | None = None
    description: str | None = None
    expected: tuple[ExpectedAmplitude, ...] = field(default=())


def _number(obj: dict, key: str, where: str) -> float:
    if key not in obj:
        raise SequenceFileError(f"{where}.{key}", "missing")
    value = obj[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SequenceFileError(f"{where}.{key}", f"expected a number, got {value!r}")
    value = float(value)
    if not math.isfinite(value):
        raise SequenceFileError(f"{where}.{key}", "must be finite")
    return value


def parse_sequence_document(doc: Any, *, degrees: bool = False) -> SequenceFile:
    if not isinstance(doc, dict):
        raise SequenceFileError("<root>", "expected a JSON object")
    pulses = doc.get("pulses")
    if pulses is None:
        raise SequenceFileError("pulses", "missing")
    if not isinstance(pulses, list) or not pulses:
        raise SequenceFileError("pulses", "expected a non-empty list")
    parsed = []
    for k, entry in enumerate(pulses):
        where = f"pulses[{k}]"
        if not isinstance(entry, dict):
            raise SequenceFileError(where, "expected an object with tau and phi")
        tau = _number(entry, "tau", where)
        phi = _number(entry, "phi", where)
        if tau < 0:
            raise SequenceFileError(f"{where}.tau", "must be nonnegative")
        parsed.append(Pulse(tau, math.radians(phi) if degrees else phi))

    expected = []
    for k, entry in enumerate(doc.get("expected") or []):
        where = f"expected[{k}]"
        if not isinstance(entry, dict):
            raise SequenceFileError(where, "expected an object")
        transition = entry.get("transition")
        if transition not in TRANSITIONS:
            raise SequenceFileError(f"{where}.transition", f"must be one of {', '.join(TRANSITIONS)}")
        order = entry.get("order")
        if isinstance(order, bool) or not isinstance(order, int) or order < 0:
            raise SequenceFileError(f"{where}.order", "must be a nonnegative integer")
        value = complex(_number(entry, "re", where), _number(entry, "im", where))
        expected.append(ExpectedAmplitude(transition, order, value))

    for key in ("name", "description"):
        if key in doc and doc[key] is not None and not isinstance(doc[key], str):
            raise SequenceFileError(key, "must be a string")
    return SequenceFile(PulseSequence(tuple(parsed)), doc.get("name"), doc.get("description"), tuple(expected))


def load_sequence_file(source: str | Path | IO[str], *, degrees: bool = False) -> SequenceFile:
    """Parse a sequence file; ``"-"`` reads standard input."""
    try:
        if hasattr(source, "read"):
            text = source.read()
        elif str(source) == "-":
            text = sys.stdin.read()
        else:
            text = Path(source).read_text(encoding="utf-8")
    except OSError as exc:
        raise SequenceFileError("<file>", str(exc)) from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SequenceFileError("<json>", str(exc)) from exc
    return parse_sequence_document(doc, degrees=degrees)


def sequence_document(sf: SequenceFile | PulseSequence) -> dict:
    if isinstance(sf, PulseSequence):
        sf = SequenceFile(sf)
    doc: dict[str, Any] = {}
    if sf.name is not None:
        doc["name"] = sf.name
    if sf.description is not None:
        doc["description"] = sf.description
    doc["pulses"] = [{"tau": p.tau, "phi": p.phi} for p in sf.sequence]
    if sf.expected:
        doc["expected"] = [
            {"transition": e.transition, "order": e.order, "re": e.value.real, "im": e.value.imag}
            for e in sf.expected
        ]
    return doc


def dumps_sequence_file(sf: SequenceFile | PulseSequence) -> str:
    # json writes floats with repr(), the shortest string that round-trips exactly
    return json.dumps(sequence_document(sf), indent=2) + "\n"


def write_sequence_file(sf: SequenceFile | PulseSequence, path: str | Path) -> None:
    Path(path).write_text(dumps_sequence_file(sf), encoding="utf-8", newline="\n")
