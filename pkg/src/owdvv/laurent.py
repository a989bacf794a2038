"""Laurent polynomials and rational functions in the chart variable.

The chart variable ``x`` is either ``p`` itself (affine chart) or
``z = exp(kappa*p)`` with ``kappa`` in {1, I} (exponential chart).  In the
exponential chart ``d/dp = kappa*z*d/dz`` and ``dp = dz/(kappa*z)``.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field

from ._rational import Rational
from .coefring import I, ONE_ELT, ZERO_ELT, CoefElement, NotDivisible, const

__all__ = [
    "Chart",
    "AFFINE",
    "LaurentPoly",
    "RatFunc",
    "Primitive",
    "TruncatedSeries",
    "SeriesError",
    "primitive_in_p",
    "series_at",
    "poly_divmod",
    "poly_gcd",
    "LogLaurent",
    "d_dp",
    "derive_t",
    "ratfunc_arith",
]


class SeriesError(ValueError):
    """A series expansion was requested at an unsupported or degenerate point."""


@dataclass(frozen=True)
class Chart:
    kind: str = "affine"  # "affine" or "exp"
    kappa: str = "1"  # "1" or "i"; only used by the exponential chart

    def __post_init__(self):
        if self.kind not in ("affine", "exp"):
            raise ValueError(f"unknown chart kind {self.kind!r}")
        if self.kappa not in ("1", "i"):
            raise ValueError(f"kappa must be '1' or 'i', got {self.kappa!r}")

    @property
    def is_exp(self) -> bool:
        return self.kind == "exp"

    @property
    def var(self) -> str:
        return "z" if self.is_exp else "p"

    def kappa_elt(self) -> CoefElement:
        return I if self.kappa == "i" else ONE_ELT

    def kappa_value(self) -> complex:
        return 1j if self.kappa == "i" else 1.0

    def x_of_p(self, p: complex) -> complex:
        return cmath.exp(self.kappa_value() * p) if self.is_exp else complex(p)

    def dp_factor(self) -> "LaurentPoly":
        """J with dp = dx / J: 1 (affine) or kappa*z (exp)."""
        if self.is_exp:
            return LaurentPoly(self, {1: self.kappa_elt()})
        return LaurentPoly.one(self)

    def log_symbol_derivative(self) -> "LaurentPoly":
        """d/dp of the primitive's transcendental symbol (log p or p)."""
        if self.is_exp:
            return LaurentPoly.one(self)
        return LaurentPoly(self, {-1: ONE_ELT})

    def describe(self) -> dict:
        if self.is_exp:
            return {"kind": "exp", "kappa": self.kappa, "variable": "z", "z": f"exp({'I*' if self.kappa == 'i' else ''}p)"}
        return {"kind": "affine", "variable": "p"}


AFFINE = Chart()


class LaurentPoly:
    """Finite Laurent polynomial sum_k c_k x^k with ``CoefElement`` coefficients."""

    __slots__ = ("chart", "_c")

    def __init__(self, chart: Chart, coeffs: dict | None = None):
        self.chart = chart
        self._c = {k: v for k, v in (coeffs or {}).items() if not v.is_zero()}

    @classmethod
    def zero(cls, chart: Chart) -> "LaurentPoly":
        return cls(chart, {})

    @classmethod
    def one(cls, chart: Chart) -> "LaurentPoly":
        return cls(chart, {0: ONE_ELT})

    @classmethod
    def constant(cls, chart: Chart, c) -> "LaurentPoly":
        c = c if isinstance(c, CoefElement) else const(c)
        return cls(chart, {0: c})

    @classmethod
    def monomial(cls, chart: Chart, k: int, c=None) -> "LaurentPoly":
        c = ONE_ELT if c is None else (c if isinstance(c, CoefElement) else const(c))
        return cls(chart, {k: c})

    # -- access -----------------------------------------------------------------
    @property
    def coeffs(self) -> dict:
        return self._c

    def coeff(self, k: int) -> CoefElement:
        return self._c.get(k, ZERO_ELT)

    def is_zero(self) -> bool:
        return not self._c

    def __bool__(self):
        return bool(self._c)

    def max_exp(self) -> int:
        return max(self._c)

    def min_exp(self) -> int:
        return min(self._c)

    def leading(self) -> CoefElement:
        return self._c[self.max_exp()]

    def trailing(self) -> CoefElement:
        return self._c[self.min_exp()]

    def is_x_free(self) -> bool:
        return all(k == 0 for k in self._c)

    def variables(self) -> set:
        out = set()
        for v in self._c.values():
            out |= v.variables()
        return out

    def _check(self, other: "LaurentPoly"):
        if other.chart != self.chart:
            raise ValueError(f"chart mismatch: {self.chart} vs {other.chart}")

    def _lift(self, other):
        if isinstance(other, LaurentPoly):
            self._check(other)
            return other
        if isinstance(other, (CoefElement, int)) or hasattr(other, "numerator"):
            return LaurentPoly.constant(self.chart, other)
        return NotImplemented

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self._c)
        for k, v in other._c.items():
            out[k] = out[k] + v if k in out else v
        return LaurentPoly(self.chart, out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly(self.chart, {k: -v for k, v in self._c.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (CoefElement, int)) or hasattr(other, "numerator"):
            return LaurentPoly(self.chart, {k: v * other for k, v in self._c.items()})
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        self._check(other)
        out: dict = {}
        for ka, va in self._c.items():
            for kb, vb in other._c.items():
                prod = va * vb
                k = ka + kb
                out[k] = out[k] + prod if k in out else prod
        return LaurentPoly(self.chart, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers of Laurent polynomials are RatFuncs")
        result = LaurentPoly.one(self.chart)
        for _ in range(n):
            result = result * self
        return result

    def shift(self, m: int) -> "LaurentPoly":
        """Multiply by x^m."""
        return LaurentPoly(self.chart, {k + m: v for k, v in self._c.items()})

    def __eq__(self, other):
        if isinstance(other, LaurentPoly):
            return self.chart == other.chart and self._c == other._c
        if isinstance(other, (CoefElement, int)):
            return self == LaurentPoly.constant(self.chart, other)
        return NotImplemented

    def __hash__(self):
        return hash((self.chart, frozenset(self._c.items())))

    # -- calculus -------------------------------------------------------------
    def d_dx(self) -> "LaurentPoly":
        return LaurentPoly(self.chart, {k - 1: v.scale(k) for k, v in self._c.items() if k})

    def d_dp(self) -> "LaurentPoly":
        if not self.chart.is_exp:
            return self.d_dx()
        kap = self.chart.kappa_elt()
        return LaurentPoly(self.chart, {k: v.scale(k) * kap for k, v in self._c.items() if k})

    def derive_t(self, j: int) -> "LaurentPoly":
        return LaurentPoly(self.chart, {k: v.derive(j) for k, v in self._c.items()})

    def map_coeffs(self, fn) -> "LaurentPoly":
        return LaurentPoly(self.chart, {k: fn(v) for k, v in self._c.items()})

    # -- polynomial views ---------------------------------------------------------
    def poly_part(self):
        """(m, P) with self = x^m * P, P a polynomial with P(0) != 0."""
        if not self._c:
            return 0, self
        m = self.min_exp()
        return m, self.shift(-m)

    def degree(self) -> int:
        return self.max_exp() - self.min_exp()

    # -- numerics -----------------------------------------------------------------
    def numeric_coeffs(self, t_assignment: dict) -> dict:
        return {k: v.evaluate(t_assignment) for k, v in self._c.items()}

    def evaluate_x(self, x: complex, t_assignment: dict) -> complex:
        return sum(v.evaluate(t_assignment) * x**k for k, v in self._c.items())

    def evaluate_p(self, p: complex, t_assignment: dict) -> complex:
        return self.evaluate_x(self.chart.x_of_p(p), t_assignment)

    # -- rendering ------------------------------------------------------------------
    def render(self, names=None) -> str:
        """Raw chart-variable form, e.g. ``z^2 + sqrt2*t2*z + t1``."""
        if not self._c:
            return "0"
        x = self.chart.var
        pieces = []
        for k in sorted(self._c, reverse=True):
            pieces.append(_with_power(self._c[k].render(names), x, k))
        return _join(pieces)

    def render_p(self, names=None) -> str:
        """Human form in p: exponentials for kappa=1, cos/sin for kappa=I."""
        if not self.chart.is_exp:
            return self.render(names)
        if not self._c:
            return "0"
        pieces = []
        if self.chart.kappa == "1":
            for k in sorted(self._c, reverse=True):
                c = self._c[k].render(names)
                if k == 0:
                    pieces.append(c)
                else:
                    arg = "p" if k == 1 else "-p" if k == -1 else f"{k}*p"
                    pieces.append(_with_factor(c, f"exp({arg})"))
            return _join(pieces)
        done = set()
        if 0 in self._c:
            pieces.append(self._c[0].render(names))
        for k in sorted({abs(k) for k in self._c if k}, reverse=True):
            a = self.coeff(k)
            b = self.coeff(-k)
            cos_c = a + b
            sin_c = I * (a - b)
            arg = "p" if k == 1 else f"{k}*p"
            if not cos_c.is_zero():
                pieces.append(_with_factor(cos_c.render(names), f"cos({arg})"))
            if not sin_c.is_zero():
                pieces.append(_with_factor(sin_c.render(names), f"sin({arg})"))
            done.add(k)
        return _join(pieces) if pieces else "0"

    def __repr__(self):
        return f"LaurentPoly({self.render()!r}, chart={self.chart.kind})"

    def __str__(self):
        return self.render()


def _wrap(c: str) -> str:
    return f"({c})" if (" + " in c or " - " in c) else c


def _with_power(c: str, x: str, k: int) -> str:
    if k == 0:
        return c
    xp = x if k == 1 else f"{x}^{k}" if k > 0 else f"{x}^({k})"
    return _with_factor(c, xp)


def _with_factor(c: str, f: str) -> str:
    if c == "1":
        return f
    if c == "-1":
        return "-" + f
    return f"{_wrap(c)}*{f}"


def _join(pieces) -> str:
    text = pieces[0]
    for p in pieces[1:]:
        text += " - " + p[1:] if p.startswith("-") else " + " + p
    return text


# -- polynomial division in K[x] ------------------------------------------------


def poly_divmod(a: LaurentPoly, b: LaurentPoly):
    """Division with remainder of polynomials (nonnegative exponents).

    The leading coefficient of ``b`` must be a unit of the coefficient ring.
    """
    if b.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    if a.min_exp() < 0 if a._c else False:
        raise ValueError("poly_divmod expects polynomials")
    db = b.max_exp()
    lb = b.leading()
    if not lb.is_unit():
        raise NotDivisible(f"leading coefficient {lb} is not a unit")
    lb_inv = lb.inverse()
    q: dict = {}
    r = dict(a._c)
    while r:
        dr = max(r)
        if dr < db:
            break
        c = r[dr] * lb_inv
        q[dr - db] = c
        for k, v in b._c.items():
            kk = k + dr - db
            nv = r.get(kk, ZERO_ELT) - c * v
            if nv.is_zero():
                r.pop(kk, None)
            else:
                r[kk] = nv
    return LaurentPoly(a.chart, q), LaurentPoly(a.chart, r)


def poly_gcd(a: LaurentPoly, b: LaurentPoly):
    """Monic gcd of two polynomials, or ``None`` if Euclid meets a non-unit."""
    try:
        while not b.is_zero():
            _, r = poly_divmod(a, b)
            a, b = b, r
    except NotDivisible:
        return None
    if a.is_zero() or not a.leading().is_unit():
        return None
    return a * a.leading().inverse()


class RatFunc:
    """Quotient of two Laurent polynomials in the same chart.

    Canonical form: the denominator is a polynomial with nonzero constant
    term (x-powers moved to the numerator), common polynomial factors are
    cancelled whenever Euclid's algorithm stays within units, and the
    denominator's leading coefficient is scaled to 1 when it is a unit.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: LaurentPoly, den: LaurentPoly | None = None, reduce: bool = True):
        chart = num.chart
        if den is None:
            den = LaurentPoly.one(chart)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        num._check(den)
        if reduce:
            num, den = _reduce(num, den)
        self.num = num
        self.den = den

    @property
    def chart(self) -> Chart:
        return self.num.chart

    @classmethod
    def from_laurent(cls, f: LaurentPoly) -> "RatFunc":
        return cls(f, LaurentPoly.one(f.chart), reduce=False)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_laurent(self) -> bool:
        return self.den.is_x_free() and self.den.coeff(0).is_unit()

    def as_laurent(self) -> LaurentPoly:
        if not self.den.is_x_free():
            raise ValueError("not a Laurent polynomial")
        return self.num * self.den.coeff(0).inverse()

    def _lift(self, other):
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, LaurentPoly):
            return RatFunc.from_laurent(other)
        if isinstance(other, (CoefElement, int)):
            return RatFunc.from_laurent(LaurentPoly.constant(self.chart, other))
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        if self.den == other.den:
            return RatFunc(self.num + other.num, self.den)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den, reduce=False)

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RatFunc(self.num * other.den, self.den * other.num)

    def equals(self, other) -> bool:
        other = self._lift(other)
        return (self.num * other.den - other.num * self.den).is_zero()

    def __eq__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return self.equals(other)

    __hash__ = None

    def derive_t(self, j: int) -> "RatFunc":
        n, d = self.num, self.den
        return RatFunc(n.derive_t(j) * d - n * d.derive_t(j), d * d)

    def d_dp(self) -> "RatFunc":
        n, d = self.num, self.den
        return RatFunc(n.d_dp() * d - n * d.d_dp(), d * d)

    def evaluate_x(self, x: complex, t_assignment: dict) -> complex:
        return self.num.evaluate_x(x, t_assignment) / self.den.evaluate_x(x, t_assignment)

    def evaluate_p(self, p: complex, t_assignment: dict) -> complex:
        return self.evaluate_x(self.chart.x_of_p(p), t_assignment)

    def render(self, names=None) -> str:
        if self.den == LaurentPoly.one(self.chart):
            return self.num.render(names)
        return f"({self.num.render(names)})/({self.den.render(names)})"

    def render_p(self, names=None) -> str:
        if self.den == LaurentPoly.one(self.chart):
            return self.num.render_p(names)
        return f"({self.num.render_p(names)})/({self.den.render_p(names)})"

    def __repr__(self):
        return f"RatFunc({self.render()!r})"


def _reduce(num: LaurentPoly, den: LaurentPoly):
    if num.is_zero():
        return LaurentPoly.zero(num.chart), LaurentPoly.one(num.chart)
    m = den.min_exp()
    if m:
        den = den.shift(-m)
        num = num.shift(-m)
    if den.max_exp() > 0:
        mn, pnum = num.poly_part()
        g = poly_gcd(pnum, den)
        if g is not None and g.max_exp() > 0:
            pnum, r1 = poly_divmod(pnum, g)
            den, r2 = poly_divmod(den, g)
            assert r1.is_zero() and r2.is_zero()
            num = pnum.shift(mn)
    lead = den.leading()
    if lead.is_unit() and lead != ONE_ELT:
        inv = lead.inverse()
        num = num * inv
        den = den * inv
    return num, den


# -- primitives -----------------------------------------------------------------


@dataclass(frozen=True)
class Primitive:
    """laurent_part + log_coefficient * L with L = p (exp chart) or log p (affine)."""

    laurent_part: LaurentPoly
    log_coefficient: CoefElement = field(default=ZERO_ELT)

    @property
    def chart(self) -> Chart:
        return self.laurent_part.chart

    def derivative(self) -> LaurentPoly:
        """d/dp of the primitive."""
        return self.laurent_part.d_dp() + self.chart.log_symbol_derivative() * self.log_coefficient

    def render(self, names=None) -> str:
        return _render_primitive(self, names, human=False)

    def render_p(self, names=None) -> str:
        return _render_primitive(self, names, human=True)


def _render_primitive(prim: Primitive, names, human: bool) -> str:
    base = prim.laurent_part.render_p(names) if human else prim.laurent_part.render(names)
    if prim.log_coefficient.is_zero():
        return base
    sym = "p" if prim.chart.is_exp else "log(p)"
    piece = _with_factor(prim.log_coefficient.render(names), sym)
    if base == "0":
        return piece
    return _join([base, piece])


def primitive_in_p(f: LaurentPoly) -> Primitive:
    """Antiderivative of f in p with zero p-free constant."""
    chart = f.chart
    out: dict = {}
    log_c = ZERO_ELT
    if chart.is_exp:
        kap_inv = chart.kappa_elt().inverse()
        for k, v in f.coeffs.items():
            if k == 0:
                log_c = v
            else:
                out[k] = v.scale(Rational(1, k)) * kap_inv
    else:
        for k, v in f.coeffs.items():
            if k == -1:
                log_c = v
            else:
                out[k + 1] = v.scale(Rational(1, k + 1))
    return Primitive(LaurentPoly(chart, out), log_c)


# -- series ---------------------------------------------------------------------------


@dataclass
class TruncatedSeries:
    """Laurent coefficients of an expansion, exact up to ``order``.

    For ``center='infinity'`` the known exponents are those >= -order; for a
    finite center they are those <= order (in powers of x - center).
    """

    center: object
    coeffs: dict
    order: int

    def coeff(self, k: int) -> CoefElement:
        if self.center == "infinity":
            if k < -self.order:
                raise SeriesError(f"exponent {k} beyond truncation order")
        elif k > self.order:
            raise SeriesError(f"exponent {k} beyond truncation order")
        return self.coeffs.get(k, ZERO_ELT)


def _long_divide_descending(num: dict, den: dict, lowest: int) -> dict:
    """Quotient coefficients of num/den expanded at infinity down to x^lowest."""
    dd = max(den)
    lc_inv = den[dd].inverse()
    rem = dict(num)
    q: dict = {}
    if not rem:
        return q
    k = max(rem) - dd
    while k >= lowest:
        c = rem.pop(k + dd, None)
        if c is not None:
            c = c * lc_inv
            q[k] = c
            for e, v in den.items():
                if e == dd:
                    continue
                kk = e + k
                nv = rem.get(kk, ZERO_ELT) - c * v
                if nv.is_zero():
                    rem.pop(kk, None)
                else:
                    rem[kk] = nv
        k -= 1
    return q


def _long_divide_ascending(num: dict, den: dict, highest: int) -> dict:
    """Quotient coefficients of num/den expanded at x = 0 up to x^highest."""
    d0 = min(den)
    lc_inv = den[d0].inverse()
    rem = dict(num)
    q: dict = {}
    if not rem:
        return q
    k = min(rem) - d0
    while k <= highest:
        c = rem.pop(k + d0, None)
        if c is not None:
            c = c * lc_inv
            q[k] = c
            for e, v in den.items():
                if e == d0:
                    continue
                kk = e + k
                nv = rem.get(kk, ZERO_ELT) - c * v
                if nv.is_zero():
                    rem.pop(kk, None)
                else:
                    rem[kk] = nv
        k += 1
    return q


def _taylor_shift(f: LaurentPoly, c: CoefElement) -> LaurentPoly:
    """Polynomial f(c + y) as a polynomial in y."""
    from math import comb

    out: dict = {}
    cpows = [ONE_ELT]
    for k, a in f.coeffs.items():
        while len(cpows) <= k:
            cpows.append(cpows[-1] * c)
        for i in range(k + 1):
            term = a * cpows[k - i]
            term = term.scale(comb(k, i))
            out[i] = out[i] + term if i in out else term
    return LaurentPoly(f.chart, out)


def series_at(f, center, order: int) -> TruncatedSeries:
    """Exact Laurent expansion of ``f`` at ``center``.

    ``center`` is ``"infinity"``, ``0``/``"zero"`` or a ``CoefElement``
    (affine chart only).  The relevant leading coefficient of the
    denominator must be a unit of the coefficient ring.
    """
    if isinstance(f, LaurentPoly):
        f = RatFunc.from_laurent(f)
    num, den = f.num, f.den
    symbolic = not isinstance(center, CoefElement)
    if symbolic and center == "infinity":
        if not den.leading().is_unit():
            raise SeriesError(f"leading coefficient {den.leading()} is not invertible")
        q = _long_divide_descending(num.coeffs, den.coeffs, -order)
        return TruncatedSeries("infinity", q, order)
    if symbolic and center in (0, "zero"):
        if not den.trailing().is_unit():
            raise SeriesError(f"trailing coefficient {den.trailing()} is not invertible")
        q = _long_divide_ascending(num.coeffs, den.coeffs, order)
        return TruncatedSeries(0, q, order)
    if f.chart.is_exp:
        raise SeriesError("finite nonzero centers are only supported in the affine chart")
    c = center if isinstance(center, CoefElement) else const(center)
    m = min(num.min_exp() if not num.is_zero() else 0, den.min_exp())
    pn = _taylor_shift(num.shift(-m), c) if not num.is_zero() else num
    pd = _taylor_shift(den.shift(-m), c)
    if not pn.is_zero() and pn.min_exp() > 0 and pd.min_exp() > 0:
        raise SeriesError(
            f"center {c} is a common zero of numerator {num} and denominator {den}"
        )
    if not pd.trailing().is_unit():
        raise SeriesError(f"coefficient {pd.trailing()} is not invertible")
    q = _long_divide_ascending(pn.coeffs, pd.coeffs, order)
    return TruncatedSeries(c, q, order)


# -- functions with a logarithmic symbol -------------------------------------------


class LogLaurent:
    """Sum of L^m * f_m(x) with L the log symbol of the chart and f_m Laurent.

    L stands for p in the exponential chart (z = e^{kappa p}) and for log p
    in the affine chart.  Closed under d/dp and d/dt, which is all the open
    checks need.
    """

    __slots__ = ("chart", "_parts")

    def __init__(self, chart: Chart, parts: dict | None = None):
        self.chart = chart
        self._parts = {m: f for m, f in (parts or {}).items() if not f.is_zero()}

    @classmethod
    def from_laurent(cls, f: LaurentPoly) -> "LogLaurent":
        return cls(f.chart, {0: f})

    @classmethod
    def from_primitive(cls, prim: Primitive) -> "LogLaurent":
        chart = prim.chart
        parts = {0: prim.laurent_part}
        if not prim.log_coefficient.is_zero():
            parts[1] = LaurentPoly.constant(chart, prim.log_coefficient)
        return cls(chart, parts)

    @classmethod
    def constant(cls, chart: Chart, c) -> "LogLaurent":
        return cls(chart, {0: LaurentPoly.constant(chart, c)})

    @classmethod
    def log_symbol(cls, chart: Chart) -> "LogLaurent":
        return cls(chart, {1: LaurentPoly.one(chart)})

    @property
    def parts(self) -> dict:
        return dict(self._parts)

    def part(self, m: int) -> LaurentPoly:
        return self._parts.get(m, LaurentPoly.zero(self.chart))

    def is_zero(self) -> bool:
        return not self._parts

    def log_degree(self) -> int:
        return max(self._parts) if self._parts else 0

    def is_laurent(self) -> bool:
        return all(m == 0 for m in self._parts)

    def as_laurent(self) -> LaurentPoly:
        if not self.is_laurent():
            raise ValueError("function involves the log symbol")
        return self.part(0)

    def is_p_free(self) -> bool:
        return self.is_laurent() and self.part(0).is_x_free()

    def as_coef(self) -> CoefElement:
        if not self.is_p_free():
            raise ValueError("function depends on p")
        return self.part(0).coeff(0)

    def _lift(self, other):
        if isinstance(other, LogLaurent):
            return other
        if isinstance(other, LaurentPoly):
            return LogLaurent.from_laurent(other)
        if isinstance(other, (CoefElement, int)):
            return LogLaurent.constant(self.chart, other)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self._parts)
        for m, f in other._parts.items():
            out[m] = out[m] + f if m in out else f
        return LogLaurent(self.chart, out)

    __radd__ = __add__

    def __neg__(self):
        return LogLaurent(self.chart, {m: -f for m, f in self._parts.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        out: dict = {}
        for ma, fa in self._parts.items():
            for mb, fb in other._parts.items():
                prod = fa * fb
                m = ma + mb
                out[m] = out[m] + prod if m in out else prod
        return LogLaurent(self.chart, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not supported")
        out = LogLaurent.constant(self.chart, ONE_ELT)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    def derive_t(self, j: int) -> "LogLaurent":
        return LogLaurent(self.chart, {m: f.derive_t(j) for m, f in self._parts.items()})

    def d_dp(self) -> "LogLaurent":
        dl = self.chart.log_symbol_derivative()
        out: dict = {}
        for m, f in self._parts.items():
            pieces = [(m, f.d_dp())]
            if m:
                pieces.append((m - 1, (dl * f).map_coeffs(lambda c, m=m: c.scale(m))))
            for k, g in pieces:
                out[k] = out[k] + g if k in out else g
        return LogLaurent(self.chart, out)

    def derive(self, j: int) -> "LogLaurent":
        """Partial derivative with j = 0 meaning d/dp."""
        return self.d_dp() if j == 0 else self.derive_t(j)

    def substitute_t(self, values: dict) -> "LogLaurent":
        return LogLaurent(
            self.chart,
            {m: f.map_coeffs(lambda c: c.substitute(values)) for m, f in self._parts.items()},
        )

    def evaluate_p(self, p: complex, t_assignment: dict) -> complex:
        import cmath

        x = self.chart.x_of_p(p)
        sym = p if self.chart.is_exp else cmath.log(p)
        return sum(
            (sym**m) * f.evaluate_x(x, t_assignment) for m, f in sorted(self._parts.items())
        )

    def _render(self, names, human: bool) -> str:
        if not self._parts:
            return "0"
        sym = "p" if self.chart.is_exp else "log(p)"
        pieces = []
        for m in sorted(self._parts, reverse=True):
            f = self._parts[m]
            body = f.render_p(names) if human else f.render(names)
            if m == 0:
                pieces.append(body)
                continue
            s = sym if m == 1 else f"{sym}^{m}"
            pieces.append(_with_factor(body, s))
        return _join(pieces)

    def render(self, names=None) -> str:
        return self._render(names, human=False)

    def render_p(self, names=None) -> str:
        return self._render(names, human=True)

    def __repr__(self):
        return f"LogLaurent({self.render()!r})"

    def __str__(self):
        return self.render()


def d_dp(f):
    return f.d_dp()


def derive_t(f, j: int):
    return f.derive_t(j)


def ratfunc_arith(op: str, a, b) -> RatFunc:
    """``op`` in + - * / on rational functions (Laurent polynomials are promoted)."""
    a = a if isinstance(a, RatFunc) else RatFunc.from_laurent(a)
    b = b if isinstance(b, RatFunc) else RatFunc.from_laurent(b)
    if op == "+":
        return a + b
    if op == "-":
        return a - b
    if op == "*":
        return a * b
    if op == "/":
        return a / b
    raise ValueError(f"unknown operation {op!r}")
