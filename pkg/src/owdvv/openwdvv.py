"""Open extension of a Frobenius structure built from the superpotential.

Omega = (primitive of lambda in p) + (p-free correction).  The correction is
recovered from the p-constant part of

    (d_a lambda d_b lambda - c^g_ab d_g lambda) / lambda_p  -  d_a d_b (primitive).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .coefring import ZERO_ELT, CoefElement, NotAntidifferentiable, NotDivisible, exact_div
from .frobenius import (
    FrobeniusData,
    IntegrabilityError,
    SuperpotentialSpec,
    integrate_gradient,
    invert_matrix,
    raise_index,
    third_derivatives,
)
from .laurent import Chart, LaurentPoly, LogLaurent, Primitive, RatFunc, primitive_in_p
from .report import CheckReport, timed

__all__ = [
    "OpenData",
    "IntegrationConstantError",
    "open_rhs_numerators",
    "open_rhs",
    "check_main_identity",
    "integration_constants",
    "integration_delta",
    "integrate_delta",
    "open_hessian",
    "assemble_omega",
    "closed_data_from_F",
    "check_open_wdvv",
    "check_oriented_wdvv",
    "check_unit_conditions",
    "check_first_line_redundancy",
    "derive_open",
]


class IntegrationConstantError(ValueError):
    """Delta is not p-free, not symmetric or not integrable."""


def open_rhs_numerators(spec: SuperpotentialSpec, c_raised: list) -> list:
    """N_ab = d_a lambda d_b lambda - sum_g c^g_ab d_g lambda (RHS = N_ab / lambda_p)."""
    n = spec.n
    d = spec.derivatives()
    out = [[None] * n for _ in range(n)]
    for a in range(n):
        for b in range(a, n):
            num = d[a] * d[b]
            for g in range(n):
                cg = c_raised[g][a][b]
                if not cg.is_zero():
                    num = num - d[g] * cg
            out[a][b] = out[b][a] = num
    return out


def open_rhs(spec: SuperpotentialSpec, c_raised: list) -> list:
    """RHS_ab as reduced rational functions in the chart variable."""
    lp = spec.lam.d_dp()
    nums = open_rhs_numerators(spec, c_raised)
    return [[RatFunc(x, lp) for x in row] for row in nums]


def check_main_identity(spec: SuperpotentialSpec, c_raised: list, names=None) -> CheckReport:
    """d_a d_b lambda - d_p(RHS_ab) = 0, checked without division:

    d_a d_b lambda * D^2 - (N_p D - N D_p) = 0 with RHS = N / D, D = lambda_p.
    """
    rep = CheckReport("main_identity")
    with timed(rep):
        n = spec.n
        lam = spec.lam
        dd = lam.d_dp()
        dd_p = dd.d_dp()
        d2 = dd * dd
        nums = open_rhs_numerators(spec, c_raised)
        for a in range(n):
            for b in range(a, n):
                num = nums[a][b]
                lhs = lam.derive_t(a + 1).derive_t(b + 1) * d2
                res = lhs - (num.d_dp() * dd - num * dd_p)
                if not res.is_zero():
                    rep.fail((a + 1, b + 1), res.render(names))
        rep.details["pairs"] = n * (n + 1) // 2
    return rep


def _p_free_quotient(r: LaurentPoly, d: LaurentPoly):
    """delta with r = delta * d and delta free of the chart variable, else None."""
    if r.is_zero():
        return ZERO_ELT
    if r.max_exp() != d.max_exp() or r.min_exp() != d.min_exp():
        return None
    try:
        delta = exact_div(r.leading(), d.leading())
    except NotDivisible:
        return None
    return delta if (r - d * delta).is_zero() else None


def _strip_affine(f: CoefElement) -> CoefElement:
    """Drop polynomial terms of total degree <= 1 (linear terms and the constant)."""
    keep = {}
    for key, v in f.terms.items():
        tm, ea, _, _ = key
        if not ea and all(e >= 0 for _, e in tm) and sum(e for _, e in tm) <= 1:
            continue
        keep[key] = v
    return CoefElement(keep)


def integration_delta(spec: SuperpotentialSpec, c_raised: list, primitive: Primitive | None = None) -> list:
    """Delta_ab = RHS_ab - d_a d_b(primitive), asserted p-free, symmetric and closed."""
    n = spec.n
    lam = spec.lam
    prim = primitive or primitive_in_p(lam)
    dd = lam.d_dp()
    nums = open_rhs_numerators(spec, c_raised)
    delta = [[ZERO_ELT] * n for _ in range(n)]
    for a in range(n):
        for b in range(a, n):
            lp2 = prim.laurent_part.derive_t(a + 1).derive_t(b + 1)
            log2 = prim.log_coefficient.derive(a + 1).derive(b + 1)
            if not log2.is_zero():
                raise IntegrationConstantError(
                    f"Delta[{a + 1},{b + 1}] carries a log-symbol term {log2.render(spec.varnames)}"
                )
            r = nums[a][b] - dd * lp2
            q = _p_free_quotient(r, dd)
            if q is None:
                raise IntegrationConstantError(
                    f"Delta[{a + 1},{b + 1}] depends on p: ({r.render(spec.varnames)})/lambda_p"
                )
            delta[a][b] = delta[b][a] = q
    for a, b, g in itertools.product(range(n), repeat=3):
        if a < g and not (delta[a][b].derive(g + 1) - delta[g][b].derive(a + 1)).is_zero():
            raise IntegrationConstantError(f"Delta is not integrable at ({a + 1},{b + 1},{g + 1})")
    return delta


def integrate_delta(delta: list) -> CoefElement:
    """OmegaTilde with Hessian Delta, linear and constant terms set to zero."""
    n = len(delta)
    try:
        grad = [integrate_gradient(delta[a]) for a in range(n)]
        return _strip_affine(integrate_gradient(grad))
    except (IntegrabilityError, NotAntidifferentiable) as exc:
        raise IntegrationConstantError(f"cannot integrate Delta: {exc}") from exc


def integration_constants(spec: SuperpotentialSpec, c_raised: list, primitive: Primitive | None = None):
    """(Delta, OmegaTilde); see integration_delta and integrate_delta."""
    delta = integration_delta(spec, c_raised, primitive)
    return delta, integrate_delta(delta)


def assemble_omega(primitive: Primitive, omega_tilde: CoefElement) -> LogLaurent:
    return LogLaurent.from_primitive(primitive) + omega_tilde


# -- checks on a pair (F, Omega) ---------------------------------------------------------


def closed_data_from_F(F: CoefElement, n: int, eta: list | None = None):
    """(eta, eta_inv, c_lower, c_raised) read off from a potential."""
    c = third_derivatives(F, n)
    eta = eta if eta is not None else [row[:] for row in c[0]]
    eta_inv = invert_matrix(eta)
    if eta_inv is None:
        raise ValueError("metric c_1ab read off from F is degenerate")
    return eta, eta_inv, c, raise_index(eta_inv, c)


def _hessian(omega: LogLaurent, n: int) -> list:
    """Second derivatives with index 0 = p and 1..n = t^1..t^n."""
    first = [omega.derive(j) for j in range(n + 1)]
    h = [[None] * (n + 1) for _ in range(n + 1)]
    for a in range(n + 1):
        for b in range(a, n + 1):
            h[a][b] = h[b][a] = first[a].derive(b)
    return h


def _structure(F, n, eta, c_raised, rep):
    if c_raised is not None:
        return c_raised
    try:
        return closed_data_from_F(F, n, eta)[3]
    except ValueError as exc:
        rep.fail(("metric",), str(exc))
        return None


def open_hessian(spec: SuperpotentialSpec, primitive: Primitive, delta: list) -> list:
    """Second derivatives of Omega (index 0 = p) from lambda, its primitive and Delta.

    Needs no antiderivative of Delta, so it also covers families whose
    correction term involves logarithms of the variables.
    """
    n = spec.n
    lam = spec.lam
    big = LogLaurent.from_primitive(primitive)
    h = [[None] * (n + 1) for _ in range(n + 1)]
    h[0][0] = LogLaurent.from_laurent(lam.d_dp())
    for a in range(n):
        h[0][a + 1] = h[a + 1][0] = LogLaurent.from_laurent(lam.derive_t(a + 1))
        for b in range(a, n):
            h[a + 1][b + 1] = h[b + 1][a + 1] = big.derive_t(a + 1).derive_t(b + 1) + delta[a][b]
    return h


def check_open_wdvv(
    F: CoefElement | None,
    omega: LogLaurent | None,
    n: int,
    eta: list | None = None,
    names=None,
    c_raised: list | None = None,
    hessian: list | None = None,
) -> CheckReport:
    """Both lines of the open system, exactly, for indices in 1..n.

    The structure constants come from F unless ``c_raised`` is given; the
    second derivatives of Omega from ``omega`` unless ``hessian`` is given.
    """
    rep = CheckReport("open_wdvv")
    with timed(rep):
        cr = _structure(F, n, eta, c_raised, rep)
        if cr is None:
            return rep
        h = hessian if hessian is not None else _hessian(omega, n)

        def om(a, b):  # a, b in 0..n-1 for t-directions, "p" for p
            ia = 0 if a == "p" else a + 1
            ib = 0 if b == "p" else b + 1
            return h[ia][ib]

        for a, b, g in itertools.product(range(n), repeat=3):
            if g <= a:
                continue
            lhs = om(a, b) * om(g, "p")
            rhs = om(g, b) * om(a, "p")
            for dl in range(n):
                lhs = lhs + om(g, dl) * cr[dl][a][b]
                rhs = rhs + om(a, dl) * cr[dl][g][b]
            diff = lhs - rhs
            if not diff.is_zero():
                rep.fail(("line1", a + 1, b + 1, g + 1), diff.render(names))
        for a in range(n):
            for b in range(a, n):
                lhs = om(a, b) * om("p", "p")
                for dl in range(n):
                    lhs = lhs + om("p", dl) * cr[dl][a][b]
                diff = lhs - om(a, "p") * om(b, "p")
                if not diff.is_zero():
                    rep.fail(("line2", a + 1, b + 1), diff.render(names))
    return rep


def check_oriented_wdvv(
    F: CoefElement | None,
    omega: LogLaurent | None,
    n: int,
    eta: list | None = None,
    names=None,
    c_raised: list | None = None,
    hessian: list | None = None,
) -> CheckReport:
    """Associativity of the (n+1)-dimensional algebra with structure constants
    d_b d_c of (eta^{1m} d_m F, ..., eta^{nm} d_m F, Omega), p being the last variable."""
    rep = CheckReport("oriented_wdvv")
    with timed(rep):
        cr = _structure(F, n, eta, c_raised, rep)
        if cr is None:
            return rep
        h = hessian if hessian is not None else _hessian(omega, n)
        chart = h[0][0].chart
        m = n + 1
        zero = LogLaurent(chart)

        def a_(up, b, c):
            # indices 0..n-1 are t-directions, n is p
            if up == n:
                ib = 0 if b == n else b + 1
                ic = 0 if c == n else c + 1
                return h[ib][ic]
            if b == n or c == n:
                return zero
            return LogLaurent.constant(chart, cr[up][b][c])

        table = {(u, b, c): a_(u, b, c) for u in range(m) for b in range(m) for c in range(m)}
        for al, be, ga, de in itertools.product(range(m), repeat=4):
            if de < be:  # symmetric under b <-> d
                continue
            lhs = zero
            rhs = zero
            for mu in range(m):
                lhs = lhs + table[(mu, be, ga)] * table[(al, mu, de)]
                rhs = rhs + table[(mu, ga, de)] * table[(al, be, mu)]
            diff = lhs - rhs
            if not diff.is_zero():
                rep.fail((al + 1, be + 1, ga + 1, de + 1), diff.render(names))
    return rep


def check_unit_conditions(omega: LogLaurent | None, n: int, names=None, hessian: list | None = None) -> CheckReport:
    """d_1 d_p Omega = 1 and d_1 d_b Omega = 0 for every b."""
    rep = CheckReport("unit_conditions")
    with timed(rep):
        if hessian is not None:
            row = hessian[1]
        else:
            d1 = omega.derive_t(1)
            row = [d1.d_dp()] + [d1.derive_t(b) for b in range(1, n + 1)]
        diff = row[0] - LogLaurent.constant(row[0].chart, 1)
        if not diff.is_zero():
            rep.fail(("p",), diff.render(names))
        for b in range(1, n + 1):
            if not row[b].is_zero():
                rep.fail((b,), row[b].render(names))
    return rep


def check_first_line_redundancy(spec: SuperpotentialSpec, c_raised: list, names=None) -> CheckReport:
    """With Omega_ab = N_ab/lambda_p, Omega_ap = d_a lambda, Omega_pp = lambda_p, the
    first open line holds; multiplied through by lambda_p it reads

    c^d_ab N_gd + N_ab d_g lambda = c^d_gb N_ad + N_gb d_a lambda.
    """
    rep = CheckReport("first_line_redundancy")
    with timed(rep):
        n = spec.n
        d = spec.derivatives()
        nums = open_rhs_numerators(spec, c_raised)
        for a, b, g in itertools.product(range(n), repeat=3):
            if g <= a:
                continue
            lhs = nums[a][b] * d[g]
            rhs = nums[g][b] * d[a]
            for dl in range(n):
                lhs = lhs + nums[g][dl] * c_raised[dl][a][b]
                rhs = rhs + nums[a][dl] * c_raised[dl][g][b]
            diff = lhs - rhs
            if not diff.is_zero():
                rep.fail((a + 1, b + 1, g + 1), diff.render(names))
    return rep


# -- the whole open sector ------------------------------------------------------------------


@dataclass
class OpenData:
    Lambda: Primitive
    Delta: list | None
    OmegaTilde: CoefElement | None
    Omega: LogLaurent | None
    reports: list = field(default_factory=list)
    error: str | None = None
    hessian: list | None = None

    def to_json(self, names=None) -> dict:
        return {
            "Lambda": {
                "raw": self.Lambda.render(names),
                "human": self.Lambda.render_p(names),
            },
            "Delta": [[x.render(names) for x in row] for row in self.Delta] if self.Delta else None,
            "OmegaTilde": self.OmegaTilde.render(names) if self.OmegaTilde is not None else None,
            "Omega": {
                "raw": self.Omega.render(names),
                "human": self.Omega.render_p(names),
            }
            if self.Omega is not None
            else None,
            "error": self.error,
        }


def derive_open(spec: SuperpotentialSpec, fd: FrobeniusData) -> OpenData:
    prim = primitive_in_p(spec.lam)
    if fd.c_raised is None:
        return OpenData(prim, None, None, None, error="structure constants could not be raised")
    try:
        delta = integration_delta(spec, fd.c_raised, prim)
    except IntegrationConstantError as exc:
        return OpenData(prim, None, None, None, error=str(exc))
    hess = open_hessian(spec, prim, delta)
    try:
        omega_tilde = integrate_delta(delta)
    except IntegrationConstantError as exc:
        return OpenData(prim, delta, None, None, error=str(exc), hessian=hess)
    return OpenData(prim, delta, omega_tilde, assemble_omega(prim, omega_tilde), hessian=hess)
