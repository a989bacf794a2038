"""Superpotential spec files: a TOML subset, or the same keys as JSON.

    variables = ["t1", "t2"]
    chart = "exp"            # "affine" (default) or "exp"
    kappa = "i"              # exp chart only: z = exp(kappa p), kappa "1" or "i"
    lambda = "t1 - 2*exp(t2/2)*cos(p)"
    mode = "exact"           # or "numeric"

    [weights]                # optional Euler vector field
    q = ["0", "1"]
    r = ["0", "2"]
    d = "1"

    [numeric]                # numeric mode settings
    tol = 1e-9
    samples = 5
    seed = 7

    F = "..."                # verify only
    Omega = "..."
"""

from __future__ import annotations

import hashlib
import json
import re
import sys
from dataclasses import dataclass, field

from ._rational import as_rational
from .coefring import CoefElement
from .expr import ParseError, parse_coefficient, parse_expression, parse_superpotential
from .frobenius import EulerWeights, SuperpotentialSpec
from .laurent import AFFINE, Chart, LogLaurent

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

__all__ = ["SpecFile", "SpecFileError", "load_spec_file", "parse_spec_text"]

_KNOWN = {"variables", "chart", "kappa", "lambda", "mode", "weights", "numeric", "F", "Omega", "name"}


class SpecFileError(ValueError):
    """Invalid spec file; carries a line and column when known."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)


@dataclass
class SpecFile:
    variables: tuple
    chart: Chart
    lambda_text: str | None
    mode: str = "exact"
    weights: EulerWeights | None = None
    numeric: dict = field(default_factory=dict)
    F_text: str | None = None
    Omega_text: str | None = None
    name: str = ""
    digest: str = ""
    _positions: dict = field(default_factory=dict, repr=False)

    def superpotential(self) -> SuperpotentialSpec:
        if self.lambda_text is None:
            raise SpecFileError("missing key 'lambda'")
        lam = self._parse("lambda", lambda t, line: parse_superpotential(t, self.chart, self.variables, line))
        try:
            return SuperpotentialSpec(lam, self.variables, self.weights, self.name)
        except ValueError as exc:
            line, _ = self._positions.get("lambda", (None, None))
            raise SpecFileError(str(exc), line) from exc

    def pair(self) -> tuple:
        """(F, Omega) for verification."""
        if self.F_text is None or self.Omega_text is None:
            raise SpecFileError("verify needs both 'F' and 'Omega'")
        F: CoefElement = self._parse("F", lambda t, line: parse_coefficient(t, self.variables, line))
        omega: LogLaurent = self._parse("Omega", lambda t, line: parse_expression(t, self.chart, self.variables, line))
        return F, omega

    def _parse(self, key: str, fn):
        text = {"lambda": self.lambda_text, "F": self.F_text, "Omega": self.Omega_text}[key]
        line, offset = self._positions.get(key, (None, None))
        try:
            return fn(text, line)
        except ParseError as exc:
            col = exc.column + offset if offset is not None else exc.column
            msg = str(exc).split(": ", 1)[-1]
            raise SpecFileError(f"in '{key}': {msg}", line, col) from exc


def _locate(text: str, key: str):
    """(line, column offset of the string value) of ``key`` in the source text."""
    pat = re.compile(r'^\s*"?' + re.escape(key) + r'"?\s*[=:]\s*"', re.M)
    m = pat.search(text)
    if not m:
        return None, None
    line = text.count("\n", 0, m.start()) + 1
    line_start = text.rfind("\n", 0, m.end()) + 1
    return line, m.end() - line_start


def _rationals(values, what: str) -> list:
    out = []
    for v in values:
        try:
            out.append(as_rational(str(v)) if not isinstance(v, int) else v)
        except (TypeError, ValueError, ZeroDivisionError) as exc:
            raise SpecFileError(f"weights.{what}: {v!r} is not an exact rational") from exc
    return out


def parse_spec_text(text: str, fmt: str = "toml") -> SpecFile:
    if fmt == "json":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SpecFileError(exc.msg, exc.lineno, exc.colno) from exc
    else:
        try:
            data = tomllib.loads(text)
        except tomllib.TOMLDecodeError as exc:
            m = re.search(r"\(at line (\d+), column (\d+)\)", str(exc))
            line, col = (int(m.group(1)), int(m.group(2))) if m else (None, None)
            msg = re.sub(r"\s*\(at line \d+, column \d+\)", "", str(exc))
            raise SpecFileError(msg, line, col) from exc
    if not isinstance(data, dict):
        raise SpecFileError("spec must be a table of keys")
    unknown = set(data) - _KNOWN
    if unknown:
        key = sorted(unknown)[0]
        raise SpecFileError(f"unknown key {key!r}", _locate(text, key)[0])
    variables = data.get("variables")
    if not isinstance(variables, list) or not variables or not all(isinstance(v, str) for v in variables):
        raise SpecFileError("'variables' must be a non-empty list of names", _locate(text, "variables")[0])
    if len(set(variables)) != len(variables):
        raise SpecFileError("variable names must be distinct")
    bad = [v for v in variables if not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", v) or v in ("p", "z", "I", "sqrt2", "exp", "sin", "cos", "log")]
    if bad:
        raise SpecFileError(f"invalid or reserved variable name {bad[0]!r}")
    kind = data.get("chart", "affine")
    if kind == "affine":
        chart = AFFINE
        if "kappa" in data:
            raise SpecFileError("'kappa' only applies to the exp chart", _locate(text, "kappa")[0])
    elif kind == "exp":
        kappa = str(data.get("kappa", "1"))
        if kappa not in ("1", "i"):
            raise SpecFileError("'kappa' must be \"1\" or \"i\"", _locate(text, "kappa")[0])
        chart = Chart("exp", kappa)
    else:
        raise SpecFileError(f"unknown chart {kind!r}", _locate(text, "chart")[0])
    mode = data.get("mode", "exact")
    if mode not in ("exact", "numeric"):
        raise SpecFileError(f"unknown mode {mode!r}", _locate(text, "mode")[0])
    weights = None
    if "weights" in data:
        w = data["weights"]
        if not isinstance(w, dict) or "q" not in w:
            raise SpecFileError("'weights' needs at least q")
        q = _rationals(w["q"], "q")
        r = _rationals(w.get("r", [0] * len(q)), "r")
        d = _rationals([w.get("d", 0)], "d")[0]
        if len(q) != len(variables) or len(r) != len(variables):
            raise SpecFileError("weights must have one entry per variable")
        weights = EulerWeights.of(q, r, d)
    numeric = data.get("numeric", {})
    if not isinstance(numeric, dict):
        raise SpecFileError("'numeric' must be a table")
    for key in ("lambda", "F", "Omega"):
        if key in data and not isinstance(data[key], str):
            raise SpecFileError(f"'{key}' must be a string expression", _locate(text, key)[0])
    spec = SpecFile(
        variables=tuple(variables),
        chart=chart,
        lambda_text=data.get("lambda"),
        mode=mode,
        weights=weights,
        numeric=dict(numeric),
        F_text=data.get("F"),
        Omega_text=data.get("Omega"),
        name=str(data.get("name", "")),
        digest=hashlib.sha256(text.encode()).hexdigest(),
    )
    spec._positions = {k: _locate(text, k) for k in ("lambda", "F", "Omega")}
    return spec


def load_spec_file(path: str) -> SpecFile:
    with open(path, "rb") as fh:
        raw = fh.read()
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise SpecFileError("spec file is not UTF-8") from exc
    fmt = "json" if path.endswith(".json") or text.lstrip().startswith("{") else "toml"
    return parse_spec_text(text, fmt)
