"""Verification results shared by the exact and numeric checks."""

from __future__ import annotations

import json
import time
from contextlib import contextmanager
from dataclasses import dataclass, field


@dataclass
class Residual:
    index: tuple
    value: str  # canonical expression, or a float rendered by the caller

    def to_json(self) -> dict:
        return {"index": list(self.index), "residual": self.value}


@dataclass
class CheckReport:
    name: str
    passed: bool = True
    residuals: list = field(default_factory=list)
    details: dict = field(default_factory=dict)
    seconds: float = 0.0
    skipped: str | None = None

    @classmethod
    def skip(cls, name: str, reason: str) -> "CheckReport":
        return cls(name, True, skipped=reason)

    @property
    def status(self) -> str:
        if self.skipped is not None:
            return "skipped"
        return "pass" if self.passed else "fail"

    def fail(self, index, value) -> None:
        self.passed = False
        self.residuals.append(Residual(tuple(index), str(value)))

    def to_json(self, timings: bool = True) -> dict:
        out = {
            "name": self.name,
            "status": self.status,
            "residuals": [r.to_json() for r in self.residuals],
        }
        if self.skipped is not None:
            out["reason"] = self.skipped
        if self.details:
            out["details"] = self.details
        if timings:
            out["seconds"] = self.seconds
        return out

    def __bool__(self) -> bool:
        return self.passed


@contextmanager
def timed(report: CheckReport):
    start = time.perf_counter()
    try:
        yield report
    finally:
        report.seconds = time.perf_counter() - start


def _format_float(x: float) -> str:
    if x != x:
        return '"nan"'
    if x in (float("inf"), float("-inf")):
        return '"inf"' if x > 0 else '"-inf"'
    s = format(x, ".17g")
    if "e" not in s and "." not in s and "n" not in s:
        s += ".0"
    return s


def canonical_json(obj, indent: int = 2, _level: int = 0) -> str:
    """JSON with sorted keys and floats at 17 significant digits.

    Complex numbers become {"re": ..., "im": ...}; tuples become lists.
    """
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if obj is None or isinstance(obj, bool) or isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _format_float(obj)
    if isinstance(obj, complex):
        return canonical_json({"re": obj.real, "im": obj.imag}, indent, _level)
    if hasattr(obj, "item") and getattr(obj, "ndim", 1) == 0:  # numpy scalars
        return canonical_json(obj.item(), indent, _level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = sorted((str(k), v) for k, v in obj.items())
        body = ",\n".join(f"{pad}{json.dumps(k)}: {canonical_json(v, indent, _level + 1)}" for k, v in items)
        return "{\n" + body + "\n" + end + "}"
    if isinstance(obj, (list, tuple)) or hasattr(obj, "tolist"):
        seq = obj.tolist() if hasattr(obj, "tolist") else obj
        if not seq:
            return "[]"
        body = ",\n".join(pad + canonical_json(v, indent, _level + 1) for v in seq)
        return "[\n" + body + "\n" + end + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")
