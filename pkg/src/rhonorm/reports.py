"""Report plumbing: exact-rational JSON with deterministic bytes.

Every machine-readable artifact the package emits goes through dumps() so the
same run configuration always produces byte-identical output: keys are sorted,
rationals are rendered as strings, floats are rejected outright.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, is_dataclass, asdict
from fractions import Fraction
from typing import Any

from .ordinals import Ordinal, render as render_ordinal
from .vectors import Vec00, format_rat, render_vector

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class Waiver:
    """A relaxation applied during a run (toy-mode shortcuts and the like).

    Reports carry the full list so a relaxed run can never masquerade as a
    strict one.
    """

    code: str
    detail: str


@dataclass
class CheckReport:
    """Outcome of one named check: a verdict plus inspectable details."""

    name: str
    ok: bool
    details: dict[str, Any] = field(default_factory=dict)
    waivers: list[Waiver] = field(default_factory=list)

    def to_json_obj(self) -> dict[str, Any]:
        return {
            "schema": SCHEMA_VERSION,
            "name": self.name,
            "ok": self.ok,
            "details": jsonable(self.details),
            "waivers": [{"code": w.code, "detail": w.detail} for w in self.waivers],
        }


def jsonable(obj: Any) -> Any:
    """Convert to JSON-safe values; exact types only, floats are a bug."""
    if isinstance(obj, float):
        raise TypeError("floats are banned from reports; use Fraction")
    if isinstance(obj, Fraction):
        return format_rat(obj)
    if isinstance(obj, Ordinal):
        return render_ordinal(obj)
    if isinstance(obj, Vec00):
        return render_vector(obj)
    if isinstance(obj, Waiver):
        return {"code": obj.code, "detail": obj.detail}
    if isinstance(obj, CheckReport):
        return obj.to_json_obj()
    if is_dataclass(obj) and not isinstance(obj, type):
        return jsonable(asdict(obj))
    if isinstance(obj, dict):
        return {_key_str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, (set, frozenset)):
        return [jsonable(v) for v in sorted(obj)]
    if isinstance(obj, (str, int, bool)) or obj is None:
        return obj
    raise TypeError(f"cannot serialize {type(obj).__name__} into a report")


def _key_str(k: Any) -> str:
    if isinstance(k, str):
        return k
    if isinstance(k, int):
        return str(k)
    if isinstance(k, Ordinal):
        return render_ordinal(k)
    raise TypeError(f"bad report key type {type(k).__name__}")


def dumps(obj: Any) -> str:
    return json.dumps(jsonable(obj), sort_keys=True, separators=(",", ":")) + "\n"
