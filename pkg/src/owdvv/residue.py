"""Sums of residues at the critical points of a superpotential.

Three engines compute the same quantity independently:

* ``residue_complement`` -- minus the residues at the chart boundary
  (x = 0, x = infinity), by exact series expansion;
* ``residue_trace`` -- trace form of the quotient ring K[x]/(N) where N is the
  critical polynomial; no expansion at the boundary is involved;
* ``residue_numeric`` -- trapezoidal contour quadrature around numerically
  located critical points.

Residue orientation: finite residues are counterclockwise and
``res_oo(f dx) = -[x^-1] f`` for the expansion at infinity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .coefring import ONE_ELT, ZERO_ELT, CoefElement, CoefFraction, NotDivisible, exact_div
from .laurent import LaurentPoly, RatFunc, SeriesError, poly_divmod, series_at

__all__ = [
    "ResidueError",
    "DegenerateCriticalPoints",
    "residue_at_boundary",
    "residue_complement",
    "residue_trace",
    "residue_numeric",
    "root_sum",
    "critical_polynomial",
    "native_form",
    "numeric_critical_points",
    "critical_integrand",
    "critical_sum",
    "boundary_at_zero",
    "split_boundary",
]


class ResidueError(ValueError):
    """The request is outside the domain of the chosen engine."""


class DegenerateCriticalPoints(ResidueError):
    """Critical points are not simple (or collide with other poles)."""


def native_form(f: RatFunc) -> RatFunc:
    """Turn the coefficient of dp into the coefficient of dx (x the chart variable)."""
    chart = f.chart
    if not chart.is_exp:
        return f
    # dp = dx / (kappa x); f.den is canonical so only the numerator shifts
    return RatFunc(f.num.shift(-1) * chart.kappa_elt().inverse(), f.den, reduce=False)


def boundary_at_zero(lam: LaurentPoly) -> bool:
    """Whether x = 0 is a boundary point of the chart for this superpotential."""
    return lam.chart.is_exp or lam.min_exp() < 0


def critical_polynomial(lam: LaurentPoly):
    """(e, N): d lambda/dx = x^e * N, N a polynomial whose roots are the critical points.

    Powers of x belong to N exactly when x = 0 is an interior point.
    """
    lx = lam.d_dx()
    if lx.is_zero():
        raise ResidueError("superpotential is constant in the chart variable")
    e, n = lx.poly_part()
    if e > 0 and not boundary_at_zero(lam):
        return 0, n.shift(e)
    return e, n


def residue_at_boundary(f, which: str) -> CoefElement:
    """Residue of the form ``f dx`` at x = 0 (``"zero"``) or x = oo (``"infinity"``)."""
    if isinstance(f, LaurentPoly):
        f = RatFunc.from_laurent(f)
    if which in ("zero", 0):
        if f.num.is_zero() or f.num.min_exp() >= f.den.min_exp():
            return ZERO_ELT
        return series_at(f, 0, -1).coeff(-1)
    if which == "infinity":
        if f.num.is_zero():
            return ZERO_ELT
        return -series_at(f, "infinity", 1).coeff(-1)
    raise ValueError(f"unknown boundary point {which!r}")


def _divides_power(d: LaurentPoly, n: LaurentPoly) -> bool:
    """Whether the polynomial d divides n**deg(d)."""
    deg = d.max_exp()
    if deg == 0:
        return True
    acc = LaurentPoly.one(n.chart)
    for _ in range(deg):
        acc = acc * n
        _, acc = poly_divmod(acc, d)
        if acc.is_zero():
            return True
    return acc.is_zero()


def residue_complement(integrand: RatFunc, lam: LaurentPoly, check: bool = True) -> CoefElement:
    """Sum over d lambda = 0 of res(integrand * dp), via the global residue theorem."""
    omega = native_form(integrand)
    at_zero = boundary_at_zero(lam)
    if check and omega.den.max_exp() > 0:
        _, n = critical_polynomial(lam)
        den = omega.den.poly_part()[1] if at_zero else omega.den
        try:
            ok = _divides_power(den, n)
        except NotDivisible as exc:
            raise ResidueError(f"cannot verify pole locations: {exc}") from exc
        if not ok:
            raise ResidueError(
                f"integrand has poles away from d lambda = 0 and the boundary: {omega.den}"
            )
    try:
        total = residue_at_boundary(omega, "infinity")
        if at_zero:
            total = total + residue_at_boundary(omega, "zero")
    except SeriesError as exc:
        raise ResidueError(str(exc)) from exc
    return -total


def split_boundary(q: LaurentPoly, lam: LaurentPoly):
    """(e, qp) with q = x^e qp; x-powers split off only where x = 0 is a boundary point."""
    if boundary_at_zero(lam):
        return q.poly_part()
    m = min(q.min_exp(), 0)
    return m, q.shift(-m)


def critical_integrand(numerator: LaurentPoly, lam: LaurentPoly) -> RatFunc:
    """numerator / lambda_p as a rational function with polynomial denominator."""
    lp = lam.d_dp()
    m = min(lp.min_exp(), 0)
    den = lp.shift(-m)
    num = numerator.shift(-m)
    lead = den.leading()
    if lead.is_unit() and lead != ONE_ELT:
        inv = lead.inverse()
        num, den = num * inv, den * inv
    return RatFunc(num, den, reduce=False)


def critical_sum(numerator: LaurentPoly, lam: LaurentPoly, engine: str = "complement") -> CoefElement:
    """Sum over d lambda = 0 of res(numerator / lambda_p * dp) with an exact engine."""
    if engine == "complement":
        return residue_complement(critical_integrand(numerator, lam), lam, check=False)
    if engine == "trace":
        return residue_trace(numerator, lam)
    raise ValueError(f"unknown exact engine {engine!r}")


# -- trace engine ----------------------------------------------------------------------


def _bareiss_solve(m: list, b: list):
    """Return (D, X) with M X = D b and D = +-det M, using fraction-free elimination."""
    d = len(m)
    a = [list(row) + [b[i]] for i, row in enumerate(m)]
    prev = ONE_ELT
    for k in range(d - 1):
        if a[k][k].is_zero():
            for i in range(k + 1, d):
                if not a[i][k].is_zero():
                    a[k], a[i] = a[i], a[k]
                    break
            else:
                return ZERO_ELT, None
        piv = a[k][k]
        for i in range(k + 1, d):
            aik = a[i][k]
            row_i = a[i]
            row_k = a[k]
            for j in range(k + 1, d + 1):
                val = row_i[j] * piv - aik * row_k[j]
                row_i[j] = exact_div(val, prev) if prev != ONE_ELT else val
            row_i[k] = ZERO_ELT
        prev = piv
    det = a[d - 1][d - 1]
    if det.is_zero():
        return ZERO_ELT, None
    x = [ZERO_ELT] * d
    for i in range(d - 1, -1, -1):
        acc = det * a[i][d]
        for j in range(i + 1, d):
            acc = acc - a[i][j] * x[j]
        x[i] = exact_div(acc, a[i][i])
    return det, x


def _mod(p: LaurentPoly, n: LaurentPoly) -> LaurentPoly:
    return poly_divmod(p, n)[1]


def _power_sums(n_monic: LaurentPoly) -> list:
    """s_k = sum of k-th powers of the roots, k = 0..d-1 (Newton's identities)."""
    d = n_monic.max_exp()
    a = [n_monic.coeff(k) for k in range(d + 1)]
    s = [CoefElement({((), (), 0, 0): ONE_ELT.terms[((), (), 0, 0)] * d})]
    for k in range(1, d):
        acc = a[d - k].scale(k)
        for i in range(1, k):
            acc = acc + a[d - i] * s[k - i]
        s.append(-acc)
    return s


@dataclass
class _QuotientRing:
    """Precomputed data for sums over the roots of a polynomial L."""

    monic: LaurentPoly
    lead_inv: CoefElement
    power_sums: list

    @classmethod
    def of(cls, poly: LaurentPoly) -> "_QuotientRing":
        lead = poly.leading()
        if not lead.is_unit():
            raise ResidueError(f"leading coefficient {lead} of {poly} is not a unit")
        inv = lead.inverse()
        monic = poly * inv
        return cls(monic, inv, _power_sums(monic))

    @property
    def degree(self) -> int:
        return self.monic.max_exp()

    def reduce(self, p: LaurentPoly) -> LaurentPoly:
        return _mod(p, self.monic)

    def trace(self, h: LaurentPoly) -> CoefElement:
        h = self.reduce(h)
        total = ZERO_ELT
        for k, c in h.coeffs.items():
            total = total + c * self.power_sums[k]
        return total

    def scaled_inverse(self, b: LaurentPoly):
        """(D, u) with b*u = D mod L, D != 0, by solving the multiplication matrix."""
        d = self.degree
        cols = []
        bx = self.reduce(b)
        for _ in range(d):
            cols.append([bx.coeff(r) for r in range(d)])
            bx = self.reduce(bx.shift(1))
        m = [[cols[c][r] for c in range(d)] for r in range(d)]
        rhs = [ONE_ELT] + [ZERO_ELT] * (d - 1)
        det, x = _bareiss_solve(m, rhs)
        if x is None:
            raise DegenerateCriticalPoints(
                f"{b} is not invertible modulo {self.monic}: repeated or shared roots"
            )
        return det, LaurentPoly(b.chart, {r: x[r] for r in range(d)})


def root_sum(
    p: LaurentPoly,
    q: LaurentPoly,
    roots_of: LaurentPoly,
    ring: _QuotientRing | None = None,
    allow_fraction: bool = False,
):
    """Sum of residues of (p/q) dx at the roots of the polynomial ``roots_of``.

    ``roots_of`` must divide the polynomial part of ``q`` exactly once per
    root (simple roots), and the cofactor must not vanish at those roots.
    Computed as Tr(h) in K[x]/(L) with h = p / (L' * cofactor) and the
    inverse obtained from the multiplication matrix.  With ``allow_fraction``
    a result outside the ring comes back as a ``CoefFraction``.
    """
    ring = ring or _QuotientRing.of(roots_of)
    chart = roots_of.chart
    eq, qp = q.poly_part()
    k = roots_of.min_exp()  # roots at x = 0 stay with the polynomial part
    if k > 0:
        qp, eq = qp.shift(k), eq - k
    cof, rem = poly_divmod(qp, ring.monic)
    if not rem.is_zero():
        raise ResidueError(f"{roots_of} does not divide the denominator {q}")
    # residue at simple root r: p(r) / (r^eq * L_monic'(r) * cof(r))
    if p.is_zero():
        return ZERO_ELT
    ep, pp = p.poly_part()
    s = ep - eq
    denom = ring.monic.d_dx() * cof
    num = pp
    if s >= 0:
        num = num.shift(s)
    else:
        denom = denom.shift(-s)
    det, u = ring.scaled_inverse(denom)
    tr = ring.trace(num * u)
    return CoefFraction.make(tr, det) if allow_fraction else exact_div(tr, det)


_trace_cache: dict = {}


def residue_trace(numerator: LaurentPoly, lam: LaurentPoly) -> CoefElement:
    """Sum over d lambda = 0 of res(numerator/lambda_p * dp) by the trace form."""
    chart = lam.chart
    e, n = critical_polynomial(lam)
    key = (lam, "crit")
    ring = _trace_cache.get(key)
    if ring is None:
        ring = _QuotientRing.of(n)
        _trace_cache[key] = ring
    # numerator * dp / lambda_p = numerator dx / (J^2 x^e N)
    j = chart.dp_factor()
    q = (j * j) * LaurentPoly(chart, {e: ONE_ELT}) * n
    return root_sum(numerator, q, n, ring)


# -- numeric engine -------------------------------------------------------------------


def _numeric_poly_roots(poly: LaurentPoly, t_assignment: dict) -> np.ndarray:
    """Roots of a polynomial with ring coefficients at a numeric t (companion eigenvalues)."""
    coeffs = poly.numeric_coeffs(t_assignment)
    deg = max(coeffs)
    arr = np.array([coeffs.get(k, 0j) for k in range(deg, -1, -1)], dtype=complex)
    if deg == 0:
        return np.zeros(0, dtype=complex)
    return np.roots(arr)


def numeric_critical_points(lam: LaurentPoly, t_assignment: dict) -> np.ndarray:
    """Critical points in the chart variable (z-plane for the exponential chart)."""
    _, n = critical_polynomial(lam)
    return _numeric_poly_roots(n, t_assignment)


def _eval_numeric_laurent(coeffs: dict, x: np.ndarray) -> np.ndarray:
    out = np.zeros_like(x, dtype=complex)
    for k, c in coeffs.items():
        out += c * x**k
    return out


def residue_numeric(
    integrand: RatFunc,
    lam: LaurentPoly,
    t_assignment: dict,
    nodes: int = 512,
    cluster_tol: float = 1e-6,
) -> complex:
    """Sum over d lambda = 0 of res(integrand * dp) by contour quadrature."""
    if nodes < 256:
        raise ValueError("at least 256 quadrature nodes are required")
    omega = native_form(integrand)
    crit = numeric_critical_points(lam, t_assignment)
    if crit.size == 0:
        return 0j
    scale = max(1.0, float(np.max(np.abs(crit))))
    for a in range(len(crit)):
        for b in range(a + 1, len(crit)):
            if abs(crit[a] - crit[b]) < cluster_tol * scale:
                raise DegenerateCriticalPoints(
                    f"critical points {crit[a]:.3g} and {crit[b]:.3g} are clustered"
                )
    poles = list(_numeric_poly_roots(omega.den, t_assignment)) if omega.den.max_exp() > 0 else []
    if boundary_at_zero(lam) or (not omega.num.is_zero() and omega.num.min_exp() < 0):
        poles.append(0j)
    poles = np.array(poles + list(crit), dtype=complex)
    ncoef = omega.num.numeric_coeffs(t_assignment)
    dcoef = omega.den.numeric_coeffs(t_assignment)
    theta = 2 * math.pi * np.arange(nodes) / nodes
    unit = np.exp(1j * theta)
    contributions = []
    for r in crit:
        dist = np.abs(poles - r)
        others = dist[dist > cluster_tol * scale]
        radius = 0.4 * float(np.min(others)) if others.size else 0.5
        x = r + radius * unit
        vals = _eval_numeric_laurent(ncoef, x) / _eval_numeric_laurent(dcoef, x)
        # (1/(2 pi i)) * sum f(x) * i*rho*e^{i theta} * (2 pi / K)
        contributions.append(complex(np.sum(vals * radius * unit)) / nodes)
    contributions.sort(key=abs)
    return sum(contributions, 0j)
