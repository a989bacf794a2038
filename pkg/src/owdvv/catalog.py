"""Built-in superpotential families."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache

from ._rational import ONE, Rational
from .coefring import ONE_ELT, ZERO_ELT, CoefElement, var
from .expr import parse_coefficient, parse_expression, parse_superpotential
from .frobenius import EulerWeights, SuperpotentialSpec, fractional_power_residue
from .laurent import AFFINE, Chart, LaurentPoly, LogLaurent

__all__ = ["Calibration", "CatalogEntry", "get", "list", "list_entries", "names", "UnknownEntry", "flat_polynomial_superpotential"]

TRIG1_CHART = Chart("exp", "i")
TRIG2_CHART = Chart("exp", "1")


class UnknownEntry(KeyError):
    pass


@dataclass(frozen=True)
class Calibration:
    """Linear change t -> t_map(t) together with scalings of F and Omega.

    Transport: F_printed(t) = F_scale * F(t_map(t)), likewise for Omega.
    """

    t_map: tuple = ()  # pairs (j, CoefElement); empty means identity
    F_scale: Rational = ONE
    Omega_scale: Rational = ONE

    def transport_F(self, F: CoefElement) -> CoefElement:
        if self.t_map:
            F = F.substitute(dict(self.t_map))
        return F.scale(self.F_scale)

    def transport_Omega(self, omega: LogLaurent) -> LogLaurent:
        if self.t_map:
            omega = omega.substitute_t(dict(self.t_map))
        return omega * CoefElement({((), (), 0, 0): Rational(self.Omega_scale)})

    def is_identity(self) -> bool:
        return not self.t_map and self.F_scale == 1 and self.Omega_scale == 1

    def to_json(self, names=None) -> dict:
        from ._rational import rational_str

        return {
            "t_map": {f"t{j}": c.render(names) for j, c in self.t_map},
            "F_scale": rational_str(self.F_scale),
            "Omega_scale": rational_str(self.Omega_scale),
        }


@dataclass
class CatalogEntry:
    name: str
    mode: str  # "exact" or "numeric"
    description: str
    spec: SuperpotentialSpec | None
    calibration: Calibration = field(default_factory=Calibration)
    printed_F: str | None = None
    printed_Omega: str | None = None
    params: dict = field(default_factory=dict)
    notes: tuple = ()
    known_discrepancies: tuple = ()  # parts of the printed solution known not to match

    @property
    def varnames(self) -> tuple:
        return self.spec.varnames if self.spec is not None else ("t1", "t2", "t3")

    @property
    def chart(self) -> Chart:
        return self.spec.chart if self.spec is not None else AFFINE

    def printed_solution(self):
        """(F, Omega) as printed, parsed; None for entries without one or numeric mode."""
        if self.printed_F is None or self.mode != "exact":
            return None
        F = parse_coefficient(self.printed_F, self.varnames)
        omega = parse_expression(self.printed_Omega, self.chart, self.varnames)
        return F, omega

    def to_json(self) -> dict:
        out = {
            "name": self.name,
            "mode": self.mode,
            "description": self.description,
            "params": dict(self.params),
            "calibration": self.calibration.to_json(self.varnames),
            "printed_solution": {"F": self.printed_F, "Omega": self.printed_Omega} if self.printed_F else None,
            "notes": [*self.notes],
            "known_discrepancies": [*self.known_discrepancies],
        }
        if self.spec is not None:
            out["variables"] = [*self.spec.varnames]
            out["chart"] = self.spec.chart.describe()
            out["lambda"] = {
                "raw": self.spec.lam.render(self.spec.varnames),
                "human": self.spec.lam.render_p(self.spec.varnames),
            }
            if self.spec.euler is not None:
                out["euler"] = self.spec.euler.to_json()
        else:
            out["variables"] = [*self.varnames]
            out["lambda"] = {"human": "t1 + t2^2 * d^2/dp^2 log theta1(p, t3)"}
        return out


# -- flat coordinates for polynomial families -----------------------------------------


def flat_polynomial_superpotential(degree: int, with_pole: bool = False, coordinates: str = "flat") -> LaurentPoly:
    """lambda = p^N + sum_k c_k p^k (+ c_-1 / p) written in flat coordinates.

    Without the pole the p^(N-1) coefficient is absent and t^a pairs with
    c_(a-1).  With the pole all c_0..c_(N-1) are present, t^N = c_(N-1) and
    t^(N+1) = c_-1.  Flat coordinates t^a (a < N, or a <= N-1 without the pole
    shift) are N/(N-a) times the coefficient of p^-1 in lambda^((N-a)/N).
    """
    big = degree
    top = big - 1 if with_pole else big - 2  # highest coefficient present
    coeffs = {big: ONE_ELT}
    for k in range(0, top + 1):
        coeffs[k] = var(k + 1)
    if with_pole:
        coeffs[-1] = var(big + 1)
    lam_c = LaurentPoly(AFFINE, coeffs)
    if coordinates == "coefficient":
        return lam_c
    if coordinates != "flat":
        raise ValueError("coordinates must be 'flat' or 'coefficient'")
    n_res = big - 1  # coordinates given by fractional residues: a = 1..N-1
    if with_pole:
        n_res = big - 1  # t^N = c_(N-1) is already flat
    expr = {}
    for a in range(n_res, 0, -1):
        tau = fractional_power_residue(lam_c, big - a).scale(Rational(big, big - a))
        rest = tau - var(a)
        bad = {j for j in rest.variables() if j <= a}
        if bad:
            raise ArithmeticError(f"flat coordinate t{a} is not triangular in {sorted(bad)}")
        expr[a] = var(a) - rest.substitute({j: e for j, e in expr.items()})
    return LaurentPoly(AFFINE, {k: (c.substitute(expr) if k >= 0 else c) for k, c in coeffs.items()})


# -- entries ------------------------------------------------------------------------------


def _h0_n(n: int, coordinates: str = "flat") -> CatalogEntry:
    if n < 1:
        raise ValueError("h0_n needs n >= 1")
    names_ = tuple(f"t{i}" for i in range(1, n + 1))
    lam = flat_polynomial_superpotential(n + 1, coordinates=coordinates)
    big = n + 1
    # deg p = 1/(n+1), deg t^a = (n+2-a)/(n+1)
    q = [Rational(a - 1, big) for a in range(1, n + 1)]
    euler = EulerWeights.of(q, None, Rational(n - 1, big))
    spec = SuperpotentialSpec(lam, names_, euler, f"h0_{n}")
    return CatalogEntry(
        name="h0_n",
        mode="exact",
        description=f"genus 0, one pole of order {big}: lambda = p^{big} + ... ({coordinates} coordinates)",
        spec=spec,
        calibration=Calibration(F_scale=Rational(big)),
        params={"n": n, "coordinates": coordinates},
    )


def _h0_n_0(n: int) -> CatalogEntry:
    if n < 1:
        raise ValueError("h0_n_0 needs n >= 1")
    names_ = tuple(f"t{i}" for i in range(1, n + 2))
    lam = flat_polynomial_superpotential(n, with_pole=True)
    # deg p = 1/n; t^a <-> c_(a-1) of degree (n-a+1)/n; t^(n+1) <-> c_-1 of degree (n+1)/n
    degs = [Rational(n - a + 1, n) for a in range(1, n + 1)] + [Rational(n + 1, n)]
    q = [ONE - d for d in degs]
    euler = EulerWeights.of(q, None, Rational(n - 2, n))
    spec = SuperpotentialSpec(lam, names_, euler, f"h0_{n}_0")
    return CatalogEntry(
        name="h0_n_0",
        mode="exact",
        description=f"genus 0, poles of order {n} and 1: lambda = p^{n} + ... + t{n + 1}/p (flat coordinates)",
        spec=spec,
        params={"n": n},
        notes=("potential contains logarithms; only tensor-level checks apply",),
    )


def _h0_1() -> CatalogEntry:
    e = _h0_n(1)
    e.name = "h0_1"
    e.params = {}
    e.printed_F = "t1^3/6"
    e.printed_Omega = "p^3/3 + t1*p"
    return e


def _h0_2() -> CatalogEntry:
    e = _h0_n(2)
    e.name = "h0_2"
    e.params = {}
    e.printed_F = "t1^2*t2/2 - t2^4/72"
    e.printed_Omega = "p^4/4 + t2*p^2/2 + t1*p + t2^2/6"
    return e


def _trig1() -> CatalogEntry:
    names_ = ("t1", "t2")
    lam = parse_superpotential("t1 - 2*exp(t2/2)*cos(p)", TRIG1_CHART, names_)
    euler = EulerWeights.of([0, 1], [0, 2], 1)
    return CatalogEntry(
        name="trig1",
        mode="exact",
        description="lambda = t1 - 2 exp(t2/2) cos p in the chart z = exp(I*p)",
        spec=SuperpotentialSpec(lam, names_, euler, "trig1"),
        calibration=Calibration(F_scale=Rational(-1)),
        printed_F="t1^2*t2/2 + exp(t2)",
        printed_Omega="t1*p - 2*exp(t2/2)*sin(p)",
    )


def _trig2() -> CatalogEntry:
    names_ = ("t1", "t2", "t3")
    lam = parse_superpotential("exp(2*p) + sqrt2*t2*exp(p) + t1 + exp(t3 - p)/sqrt2", TRIG2_CHART, names_)
    euler = EulerWeights.of([0, Rational(1, 2), 1], [0, 0, Rational(3, 2)], 1)
    return CatalogEntry(
        name="trig2",
        mode="exact",
        description="lambda = e^{2p} + sqrt2 t2 e^p + t1 + e^{t3-p}/sqrt2 in the chart z = exp(p)",
        spec=SuperpotentialSpec(lam, names_, euler, "trig2"),
        printed_F="t1^2*t2/2 + t2^2*t1/2 - t2^4/24 + t2*exp(t3)",
        printed_Omega="exp(2*p)/2 + sqrt2*t2*exp(p) + t1*p - exp(t3 - p)/sqrt2 + t2^2/2",
        notes=("printed F pairs t1 with t2 twice; compared as printed and the discrepancy is reported",),
        known_discrepancies=("F",),
    )


def _h1_1() -> CatalogEntry:
    return CatalogEntry(
        name="h1_1",
        mode="numeric",
        description="genus 1: lambda = t1 + t2^2 d^2/dp^2 log theta1(p, t3)",
        spec=None,
        printed_F="t1^2*t3/2 + t1*t2^2/2 - (I*pi/48)*E2(t3)",
        printed_Omega="t1*p + t2^2 * d/dp log theta1(p, t3)",
        params={"q_terms": 40, "tol": 1e-9, "samples": 20, "seed": 20240611},
        notes=("the E2 term of F carries a factor t2^4 in the verified potential",),
    )


_BUILDERS = {
    "h0_1": (_h0_1, 0, "exact"),
    "h0_2": (_h0_2, 0, "exact"),
    "h0_n": (_h0_n, 1, "exact"),
    "h0_n_0": (_h0_n_0, 1, "exact"),
    "trig1": (_trig1, 0, "exact"),
    "trig2": (_trig2, 0, "exact"),
    "h1_1": (_h1_1, 0, "numeric"),
}


def names() -> list:
    return [*_BUILDERS]


def list_entries() -> list:
    """Entry names with their mode and parameter arity."""
    return [{"name": k, "mode": mode, "arity": arity} for k, (_, arity, mode) in _BUILDERS.items()]


_CALL = re.compile(r"^(?P<name>[a-z0-9_]+?)(?:[(:](?P<arg>\d+)\)?)?$")


@lru_cache(maxsize=64)
def _get_cached(name: str, n, coordinates: str) -> CatalogEntry:
    builder, arity, _ = _BUILDERS[name]
    if arity == 0:
        if n is not None:
            raise ValueError(f"{name} takes no parameter")
        return builder()
    if n is None:
        raise ValueError(f"{name} needs a parameter n")
    if name == "h0_n":
        return builder(n, coordinates)
    return builder(n)


def get(name: str, n: int | None = None, coordinates: str = "flat") -> CatalogEntry:
    """Entry by name; parametrised families accept ``n`` or the forms ``h0_n(3)`` / ``h0_n:3``."""
    m = _CALL.match(name.strip())
    if not m or m.group("name") not in _BUILDERS:
        raise UnknownEntry(f"unknown catalog entry {name!r}; known: {', '.join(_BUILDERS)}")
    if m.group("arg") is not None:
        if n is not None and int(m.group("arg")) != n:
            raise ValueError("conflicting parameters")
        n = int(m.group("arg"))
    if n is not None and n < 1:
        raise ValueError("parameter n must be >= 1")
    return _get_cached(m.group("name"), n, coordinates)


list = list_entries  # noqa: A001  (catalog.list() mirrors the registry listing)
