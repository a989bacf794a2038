"""Frobenius structure of a superpotential: metric, product, potential, checks."""

from __future__ import annotations

import cmath
import itertools
import warnings
from dataclasses import dataclass, field

import numpy as np

from ._rational import ONE, ZERO, Rational, as_rational
from .coefring import ONE_ELT, ZERO_ELT, CoefElement, CoefFraction, NotAntidifferentiable, const, var
from .laurent import Chart, LaurentPoly, primitive_in_p
from .report import CheckReport, timed
from .residue import (
    DegenerateCriticalPoints,
    ResidueError,
    critical_integrand,
    critical_polynomial,
    critical_sum,
    numeric_critical_points,
    boundary_at_zero,
    residue_at_boundary,
    residue_numeric,
    root_sum,
    split_boundary,
)
from .laurent import RatFunc

__all__ = [
    "EulerWeights",
    "SuperpotentialSpec",
    "FrobeniusData",
    "IntegrabilityError",
    "compute_eta",
    "compute_c",
    "compute_intersection_form",
    "tensors_numeric",
    "intersection_form_numeric",
    "intersection_form_from_euler",
    "invert_matrix",
    "raise_index",
    "third_derivatives",
    "integrate_gradient",
    "reconstruct_F",
    "check_closed_wdvv",
    "check_quasi_homogeneity",
    "fractional_power_residue",
    "flat_coordinates_residue",
    "critical_data_numeric",
    "CriticalData",
    "derive_frobenius",
]


class IntegrabilityError(ValueError):
    """Third derivatives (or a gradient) fail the symmetry needed for a potential."""

    def __init__(self, message: str, index: tuple = (), difference: CoefElement | None = None):
        super().__init__(message)
        self.index = index
        self.difference = difference


@dataclass(frozen=True)
class EulerWeights:
    """E = sum_i ((1 - q_i) t^i + r_i) d/dt^i together with the charge d."""

    q: tuple
    r: tuple
    d: Rational

    @classmethod
    def of(cls, q, r=None, d=0) -> "EulerWeights":
        q = tuple(as_rational(x) if not isinstance(x, int) else Rational(x) for x in q)
        r = tuple(as_rational(x) if not isinstance(x, int) else Rational(x) for x in (r or [0] * len(q)))
        if len(r) != len(q):
            raise ValueError("q and r weights differ in length")
        d = as_rational(d) if not isinstance(d, int) else Rational(d)
        return cls(q, r, d)

    def components(self) -> list:
        """E^i as ring elements."""
        return [var(i + 1).scale(ONE - qi) + const(ri) for i, (qi, ri) in enumerate(zip(self.q, self.r))]

    def apply(self, f: CoefElement) -> CoefElement:
        out = ZERO_ELT
        for i, comp in enumerate(self.components()):
            out = out + comp * f.derive(i + 1)
        return out

    def to_json(self) -> dict:
        from ._rational import rational_str

        return {
            "q": [rational_str(x) for x in self.q],
            "r": [rational_str(x) for x in self.r],
            "d": rational_str(self.d),
        }


@dataclass
class SuperpotentialSpec:
    """A superpotential lambda(p, t^1..t^n) with phi = dp in a chart."""

    lam: LaurentPoly
    varnames: tuple
    euler: EulerWeights | None = None
    name: str = ""

    def __post_init__(self):
        self.varnames = tuple(self.varnames)
        if len(self.varnames) < 1:
            raise ValueError("at least one flat variable is required")
        if len(set(self.varnames)) != len(self.varnames):
            raise ValueError("variable names must be distinct")
        if self.lam.max_exp() == 0 and self.lam.min_exp() == 0:
            raise ValueError("superpotential does not depend on the chart variable")
        extra = {j for j in self.lam.variables() if j > self.n}
        if extra:
            raise ValueError(f"superpotential uses undeclared variables {sorted(extra)}")
        if self.euler is not None and len(self.euler.q) != self.n:
            raise ValueError("Euler weights do not match the number of variables")

    @property
    def chart(self) -> Chart:
        return self.lam.chart

    @property
    def n(self) -> int:
        return len(self.varnames)

    def derivatives(self) -> list:
        return [self.lam.derive_t(j) for j in range(1, self.n + 1)]

    def unit_direction_ok(self) -> bool:
        return self.lam.derive_t(1) == LaurentPoly.one(self.chart)


# -- residue tensors ---------------------------------------------------------------


def compute_eta(spec: SuperpotentialSpec, engine: str = "complement") -> list:
    """eta_ij = sum over d lambda = 0 of res(d_i lambda d_j lambda / lambda_p dp)."""
    n = spec.n
    d = spec.derivatives()
    eta = [[ZERO_ELT] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            v = critical_sum(d[i] * d[j], spec.lam, engine)
            eta[i][j] = eta[j][i] = v
    return eta


def compute_c(spec: SuperpotentialSpec, engine: str = "complement") -> list:
    """c_ijk = sum over d lambda = 0 of res(d_i lambda d_j lambda d_k lambda / lambda_p dp)."""
    n = spec.n
    d = spec.derivatives()
    c = [[[ZERO_ELT] * n for _ in range(n)] for _ in range(n)]
    for i, j, k in itertools.combinations_with_replacement(range(n), 3):
        v = critical_sum(d[i] * d[j] * d[k], spec.lam, engine)
        for a, b, e in set(itertools.permutations((i, j, k))):
            c[a][b][e] = v
    return c


def tensors_numeric(spec: SuperpotentialSpec, t_assignment: dict, nodes: int = 512) -> tuple:
    """(eta, c) as complex arrays by contour quadrature; an engine-independent oracle."""
    n = spec.n
    d = spec.derivatives()
    eta = np.zeros((n, n), dtype=complex)
    c = np.zeros((n, n, n), dtype=complex)
    for i in range(n):
        for j in range(i, n):
            form = critical_integrand(d[i] * d[j], spec.lam)
            eta[i, j] = eta[j, i] = residue_numeric(form, spec.lam, t_assignment, nodes=nodes)
    for i, j, k in itertools.combinations_with_replacement(range(n), 3):
        form = critical_integrand(d[i] * d[j] * d[k], spec.lam)
        v = residue_numeric(form, spec.lam, t_assignment, nodes=nodes)
        for a, b, e in set(itertools.permutations((i, j, k))):
            c[a, b, e] = v
    return eta, c


def _intersection_pieces(spec: SuperpotentialSpec):
    lam = spec.lam
    chart = spec.chart
    jac = chart.dp_factor()
    _, crit = critical_polynomial(lam)
    zeros = split_boundary(lam, lam)[1]
    # omega = P / (lambda * lambda_p) dp = P / (lambda * J^2 * lambda_x) dx
    q = lam * jac * jac * lam.d_dx()
    return q, crit, zeros


def compute_intersection_form(spec: SuperpotentialSpec, engine: str = "complement") -> list:
    """g_ij = sum over d lambda = 0 of res(d_i lambda d_j lambda / (lambda lambda_p) dp)."""
    n = spec.n
    d = spec.derivatives()
    q, crit, zeros = _intersection_pieces(spec)
    g = [[ZERO_ELT] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            p = d[i] * d[j]
            try:
                if engine == "trace":
                    v = root_sum(p, q, crit, allow_fraction=True)
                elif engine == "complement":
                    eq, qp = split_boundary(q, spec.lam)
                    form = RatFunc(p.shift(-eq), qp, reduce=False)
                    boundary = residue_at_boundary(form, "infinity")
                    if boundary_at_zero(spec.lam):
                        boundary = boundary + residue_at_boundary(form, "zero")
                    v = CoefFraction.lift(-boundary) - root_sum(p, q, zeros, allow_fraction=True)
                    v = v.simplify() if isinstance(v, CoefFraction) else v
                else:
                    raise ValueError(f"unknown exact engine {engine!r}")
            except DegenerateCriticalPoints as exc:
                raise DegenerateCriticalPoints(
                    f"critical value identically zero or colliding zeros of lambda: {exc}"
                ) from exc
            g[i][j] = g[j][i] = v
    return g


def intersection_form_numeric(spec: SuperpotentialSpec, t_assignment: dict, nodes: int = 512) -> np.ndarray:
    """Numeric g_ij by contour quadrature around the critical points."""
    data = critical_data_numeric(spec, t_assignment)
    scale = max(1.0, max(abs(u) for u in data.values))
    if min(abs(u) for u in data.values) < 1e-10 * scale:
        raise DegenerateCriticalPoints("a critical value vanishes at this sample")
    n = spec.n
    d = spec.derivatives()
    lam = spec.lam
    den = lam * lam.d_dp()
    m = den.min_exp()
    g = np.zeros((n, n), dtype=complex)
    for i in range(n):
        for j in range(i, n):
            form = RatFunc((d[i] * d[j]).shift(-m), den.shift(-m), reduce=False)
            g[i, j] = g[j, i] = residue_numeric(form, lam, t_assignment, nodes=nodes)
    return g


# -- linear algebra over the ring -----------------------------------------------------


def invert_matrix(m: list):
    """Inverse by Gauss-Jordan with unit pivots; None if no unit pivot is available."""
    n = len(m)
    a = [list(row) + [ONE_ELT if i == j else ZERO_ELT for j in range(n)] for i, row in enumerate(m)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col].is_unit()), None)
        if piv is None:
            return None
        a[col], a[piv] = a[piv], a[col]
        inv = a[col][col].inverse()
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and not a[r][col].is_zero():
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


def raise_index(eta_inv: list, c_lower: list) -> list:
    """c^g_{ab} = eta^{gd} c_{dab}, stored as c_raised[g][a][b]."""
    n = len(eta_inv)
    out = [[[ZERO_ELT] * n for _ in range(n)] for _ in range(n)]
    for g in range(n):
        for a in range(n):
            for b in range(a, n):
                acc = ZERO_ELT
                for d in range(n):
                    if not eta_inv[g][d].is_zero():
                        acc = acc + eta_inv[g][d] * c_lower[d][a][b]
                out[g][a][b] = out[g][b][a] = acc
    return out


def third_derivatives(F: CoefElement, n: int) -> list:
    c = [[[ZERO_ELT] * n for _ in range(n)] for _ in range(n)]
    for i, j, k in itertools.combinations_with_replacement(range(n), 3):
        v = F.derive(i + 1).derive(j + 1).derive(k + 1)
        for a, b, e in set(itertools.permutations((i, j, k))):
            c[a][b][e] = v
    return c


def intersection_form_from_euler(eta_inv: list, c_lower: list, euler: EulerWeights) -> list:
    """g^{ab} = E^e eta^{am} eta^{bl} c_{eml}."""
    n = len(eta_inv)
    comps = euler.components()
    ec = [[ZERO_ELT] * n for _ in range(n)]  # E^e c_{eml}
    for m in range(n):
        for l in range(n):
            acc = ZERO_ELT
            for e in range(n):
                acc = acc + comps[e] * c_lower[e][m][l]
            ec[m][l] = acc
    g = [[ZERO_ELT] * n for _ in range(n)]
    for a in range(n):
        for b in range(n):
            acc = ZERO_ELT
            for m in range(n):
                if eta_inv[a][m].is_zero():
                    continue
                for l in range(n):
                    if not eta_inv[b][l].is_zero():
                        acc = acc + eta_inv[a][m] * eta_inv[b][l] * ec[m][l]
            g[a][b] = acc
    return g


# -- potentials -----------------------------------------------------------------------


def integrate_gradient(components: list) -> CoefElement:
    """phi with d phi / dt^k = components[k-1]; integration constants zero."""
    phi = ZERO_ELT
    n = len(components)
    for k in range(1, n + 1):
        rest = components[k - 1] - phi.derive(k)
        for j in range(1, k):
            if not rest.derive(j).is_zero():
                raise IntegrabilityError(
                    f"gradient is not closed in directions ({j}, {k})", (j, k), rest.derive(j)
                )
        phi = phi + rest.antiderive(k)
    return phi


def _strip_low_order(f: CoefElement, max_degree: int) -> CoefElement:
    """Drop pure polynomial terms (no exponential) of total degree <= max_degree."""
    keep = {}
    for key, v in f.terms.items():
        tm, ea, _, _ = key
        if not ea and all(e >= 0 for _, e in tm) and sum(e for _, e in tm) <= max_degree:
            continue
        keep[key] = v
    return CoefElement(keep)


def check_integrability(c_lower: list) -> CheckReport:
    """d_delta c_{abg} totally symmetric, i.e. d_delta c_{abg} = d_a c_{delta b g}."""
    n = len(c_lower)
    rep = CheckReport("integrability")
    with timed(rep):
        for a, b, g in itertools.combinations_with_replacement(range(n), 3):
            for dlt in range(n):
                if dlt <= a:
                    continue
                diff = c_lower[a][b][g].derive(dlt + 1) - c_lower[dlt][b][g].derive(a + 1)
                if not diff.is_zero():
                    rep.fail((dlt + 1, a + 1, b + 1, g + 1), diff.render())
    return rep


def reconstruct_F(c_lower: list) -> CoefElement:
    """Potential F with third derivatives c_lower; quadratic and lower terms dropped."""
    n = len(c_lower)
    rep = check_integrability(c_lower)
    if not rep.passed:
        r = rep.residuals[0]
        raise IntegrabilityError(f"integrability fails at {r.index}: {r.value}", r.index)
    second = [[None] * n for _ in range(n)]
    for a in range(n):
        for b in range(a, n):
            second[a][b] = second[b][a] = integrate_gradient([c_lower[a][b][g] for g in range(n)])
    first = [integrate_gradient(second[a]) for a in range(n)]
    F = _strip_low_order(integrate_gradient(first), 2)
    if third_derivatives(F, n) != c_lower:
        raise IntegrabilityError("reconstructed potential does not reproduce the tensor")
    return F


# -- checks ------------------------------------------------------------------------------


def check_closed_wdvv(c_raised: list) -> CheckReport:
    """c^m_{ab} c^d_{mg} = c^m_{gb} c^d_{ma} for all index tuples, exactly."""
    n = len(c_raised)
    rep = CheckReport("closed_wdvv")
    with timed(rep):
        for a, b, g, d in itertools.product(range(n), repeat=4):
            if g <= a:  # the identity is antisymmetric under a <-> g
                continue
            lhs = ZERO_ELT
            rhs = ZERO_ELT
            for m in range(n):
                lhs = lhs + c_raised[m][a][b] * c_raised[d][m][g]
                rhs = rhs + c_raised[m][g][b] * c_raised[d][m][a]
            diff = lhs - rhs
            if not diff.is_zero():
                rep.fail((a + 1, b + 1, g + 1, d + 1), diff.render())
    return rep


def check_quasi_homogeneity(F: CoefElement, euler: EulerWeights, names=None) -> CheckReport:
    """E(F) - (3 - d) F must be a polynomial of degree at most two."""
    rep = CheckReport("quasi_homogeneity")
    with timed(rep):
        disc = euler.apply(F) - F.scale(3 - euler.d)
        ok = disc.is_zero() or (disc.is_polynomial() and disc.total_degree() <= 2)
        rep.details["discrepancy"] = disc.render(names)
        rep.details["euler"] = euler.to_json()
        if not ok:
            rep.fail((), disc.render(names))
    return rep


# -- flat coordinates -------------------------------------------------------------------


def _binomial(r: Rational, k: int) -> Rational:
    out = ONE
    for i in range(k):
        out = out * (r - i) / (i + 1)
    return out


def fractional_power_residue(lam: LaurentPoly, m: int) -> CoefElement:
    """Coefficient of p^-1 in lambda^(m/N) at p = oo, N the degree of a monic lambda."""
    if lam.chart.is_exp:
        raise ValueError("fractional powers are only expanded in the affine chart")
    big = lam.max_exp()
    if big <= 0 or lam.leading() != ONE_ELT:
        raise ValueError("superpotential must be monic of positive degree")
    # lambda = p^N (1 + u), u = sum_k a_k w^(N-k) with w = 1/p
    u = {big - k: c for k, c in lam.coeffs.items() if k != big}
    need = m + 1  # coefficient of w^(m+1) in (1+u)^(m/N)
    r = Rational(m, big)
    total = ZERO_ELT
    power = {0: ONE_ELT}
    for j in range(0, need + 1):
        if j:
            nxt: dict = {}
            for e1, c1 in power.items():
                for e2, c2 in u.items():
                    e = e1 + e2
                    if e <= need:
                        nxt[e] = nxt[e] + c1 * c2 if e in nxt else c1 * c2
            power = nxt
        if need in power:
            total = total + power[need].scale(_binomial(r, j))
        if not power or min(power) > need:
            break
    return total


def flat_coordinates_residue(spec: SuperpotentialSpec, gamma: int) -> CoefElement:
    """t^gamma = +[p^-1] lambda^((n+1-gamma)/(n+1)) for a monic polynomial lambda."""
    lam = spec.lam
    if lam.chart.is_exp:
        raise ValueError("flat-coordinate residues need the affine chart")
    if lam.min_exp() < 0 or lam.leading() != ONE_ELT or lam.max_exp() != spec.n + 1:
        raise ValueError("superpotential must be a monic polynomial of degree n+1")
    if not 1 <= gamma <= spec.n:
        raise ValueError(f"gamma must lie in 1..{spec.n}")
    return fractional_power_residue(lam, spec.n + 1 - gamma)


# -- numeric canonical data ------------------------------------------------------------


@dataclass
class CriticalData:
    points: list  # critical points in p
    values: list  # critical values u_i
    semisimple: bool
    second_order: list  # lambda - u_i vanishes to exactly second order at p_i

    def to_json(self) -> dict:
        def cx(z):
            return [float(z.real), float(z.imag)]

        return {
            "points": [cx(p) for p in self.points],
            "values": [cx(u) for u in self.values],
            "semisimple": self.semisimple,
            "second_order": list(self.second_order),
        }


def critical_data_numeric(spec: SuperpotentialSpec, t_assignment: dict, tol: float = 1e-8) -> CriticalData:
    lam = spec.lam
    chart = spec.chart
    xs = numeric_critical_points(lam, t_assignment)
    if xs.size == 0:
        raise ResidueError("no critical points found")
    if not np.all(np.isfinite(xs)):
        raise ResidueError("root finding failed")
    coeffs = lam.numeric_coeffs(t_assignment)
    second = lam.d_dp().d_dp().numeric_coeffs(t_assignment)

    def ev(cs, x):
        return sum(c * x**k for k, c in cs.items())

    points, values, order2 = [], [], []
    for x in xs:
        p = cmath.log(x) / chart.kappa_value() if chart.is_exp else complex(x)
        points.append(p)
        values.append(complex(ev(coeffs, x)))
        order2.append(bool(abs(ev(second, x)) > tol))
    scale = max(1.0, max(abs(u) for u in values))
    semisimple = all(
        abs(values[a] - values[b]) > tol * scale
        for a in range(len(values))
        for b in range(a + 1, len(values))
    ) and all(order2)
    return CriticalData(points, values, semisimple, order2)


# -- the whole structure -----------------------------------------------------------------


@dataclass
class FrobeniusData:
    eta: list
    eta_inv: list | None
    c_lower: list
    c_raised: list | None
    F: CoefElement | None = None
    F_error: str | None = None
    g: list | None = None
    warnings: list = field(default_factory=list)

    @property
    def n(self) -> int:
        return len(self.eta)

    def eta_is_constant(self) -> bool:
        return all(x.is_constant() for row in self.eta for x in row)

    def to_json(self, names=None) -> dict:
        def mat(m):
            return [[x.render(names) for x in row] for row in m] if m is not None else None

        return {
            "eta": mat(self.eta),
            "eta_inv": mat(self.eta_inv),
            "c_lower": [mat(s) for s in self.c_lower],
            "c_raised": [mat(s) for s in self.c_raised] if self.c_raised is not None else None,
            "F": self.F.render(names) if self.F is not None else None,
            "F_error": self.F_error,
            "g": mat(self.g),
            "warnings": list(self.warnings),
        }


def derive_frobenius(
    spec: SuperpotentialSpec, engine: str = "complement", with_intersection: bool = False
) -> FrobeniusData:
    eta = compute_eta(spec, engine)
    c = compute_c(spec, engine)
    notes = []
    if not all(x.is_constant() for row in eta for x in row):
        notes.append("metric is not constant: the variables are not flat coordinates")
        warnings.warn(notes[-1], RuntimeWarning, stacklevel=2)
    eta_inv = invert_matrix(eta)
    c_raised = raise_index(eta_inv, c) if eta_inv is not None else None
    if eta_inv is None:
        notes.append("metric could not be inverted over the coefficient ring")
    F = None
    F_error = None
    try:
        F = reconstruct_F(c)
    except (IntegrabilityError, NotAntidifferentiable) as exc:
        F_error = str(exc)
    g = None
    if with_intersection:
        try:
            g = compute_intersection_form(spec, engine)
        except ResidueError as exc:
            notes.append(f"intersection form unavailable: {exc}")
    return FrobeniusData(eta, eta_inv, c, c_raised, F, F_error, g, notes)
