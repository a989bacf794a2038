"""Exact coefficient ring for superpotential computations.

Elements are finite sums of terms

    q * sqrt2**s * I**k * prod_j (t^j)**e_j * exp(sum_j c_j t^j)

with ``q`` rational, ``s, k`` in {0, 1}, integer exponents ``e_j`` (negative
exponents are allowed, so monomials are units) and rational exponential
arguments ``c_j``.  Exponentials of distinct linear forms are linearly
independent over the rational functions in ``t``, so the canonical dict form
decides equality.
"""

from __future__ import annotations

import cmath
import math
from functools import lru_cache

from ._rational import ONE, ZERO, Rational, as_rational, rational_str

__all__ = [
    "CoefElement",
    "exact_div",
    "CoefFraction",
    "NotAntidifferentiable",
    "NotDivisible",
    "MissingAssignment",
    "const",
    "var",
    "exp_linear",
    "SQRT2",
    "I",
    "ONE_ELT",
    "ZERO_ELT",
    "add",
    "mul",
    "derive_t",
    "antiderive_t",
    "eval_numeric",
]

SQRT2_VALUE = math.sqrt(2.0)


class NotAntidifferentiable(ValueError):
    """A term has no antiderivative inside the ring (log or Ei would appear)."""


class NotDivisible(ArithmeticError):
    """Exact division failed."""


class MissingAssignment(KeyError):
    """Numeric evaluation was asked for without a value for some variable."""


# A term key is (tmono, earg, s, k):
#   tmono: tuple of (index, int exponent), sorted, exponents nonzero
#   earg:  tuple of (index, Rational coefficient), sorted, coefficients nonzero
#   s:     power of sqrt2 (0/1);  k: power of I (0/1)


def _merge(a: tuple, b: tuple) -> tuple:
    if not a:
        return b
    if not b:
        return a
    acc = dict(a)
    for j, e in b:
        v = acc.get(j, 0) + e
        if v:
            acc[j] = v
        else:
            del acc[j]
    return tuple(sorted(acc.items()))


# Exponents (ints) and exponential arguments (rationals) get separate caches:
# keys such as ((3, 1),) and ((3, mpq(1)),) compare equal but must not be mixed.
_merge_exponents = lru_cache(maxsize=1 << 16)(_merge)
_merge_arguments = lru_cache(maxsize=1 << 16)(_merge)


def _negate_sparse(a: tuple) -> tuple:
    return tuple((j, -e) for j, e in a)


def _sparse_get(a: tuple, j: int, default=0):
    for i, e in a:
        if i == j:
            return e
    return default


def _sparse_set(a: tuple, j: int, value) -> tuple:
    acc = dict(a)
    if value:
        acc[j] = value
    else:
        acc.pop(j, None)
    return tuple(sorted(acc.items()))


def _mul_keys(ka: tuple, kb: tuple):
    """Product of two term keys: returns (key, scalar factor)."""
    tm = _merge_exponents(ka[0], kb[0])
    ea = _merge_arguments(ka[1], kb[1])
    factor = 1
    s = ka[2] + kb[2]
    if s == 2:
        s = 0
        factor = 2
    k = ka[3] + kb[3]
    if k == 2:
        k = 0
        factor = -factor
    return (tm, ea, s, k), factor


def _coerce(x) -> "CoefElement":
    if isinstance(x, CoefElement):
        return x
    if isinstance(x, int):
        return const(x)
    if isinstance(x, str):
        return NotImplemented
    try:
        return const(as_rational(x))
    except TypeError:
        return NotImplemented


class CoefElement:
    """Immutable element of Q(sqrt2, I)[t^{+-1}, exp(Q-linear forms in t)]."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: dict | None = None):
        # terms must already be canonical: nonzero Rational values
        self._terms = terms if terms is not None else {}
        self._hash = None

    # -- construction helpers -------------------------------------------------
    @staticmethod
    def _from_accumulator(acc: dict) -> "CoefElement":
        return CoefElement({key: v for key, v in acc.items() if v != 0})

    @property
    def terms(self) -> dict:
        return self._terms

    # -- predicates -----------------------------------------------------------
    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_constant(self) -> bool:
        """True if free of t and exp (an element of Q(sqrt2, I))."""
        return all(not key[0] and not key[1] for key in self._terms)

    def is_rational(self) -> bool:
        return all(key == ((), (), 0, 0) for key in self._terms)

    def monomials(self) -> set:
        """Distinct (tmono, earg) monomials occurring in the element."""
        return {(key[0], key[1]) for key in self._terms}

    def is_unit(self) -> bool:
        """Units are nonzero constants times a single t-monomial/exp-monomial."""
        return bool(self._terms) and len(self.monomials()) == 1

    def variables(self) -> set:
        out = set()
        for tm, ea, _, _ in self._terms:
            out.update(j for j, _ in tm)
            out.update(j for j, _ in ea)
        return out

    def depends_on(self, j: int) -> bool:
        return j in self.variables()

    def has_exp(self) -> bool:
        return any(key[1] for key in self._terms)

    def is_polynomial(self) -> bool:
        """No exp generators and no negative t-exponents."""
        return all(not ea and all(e > 0 for _, e in tm) for tm, ea, _, _ in self._terms)

    def total_degree(self) -> int:
        if not self._terms:
            return -1
        return max(sum(e for _, e in key[0]) for key in self._terms)

    def degree_in(self, j: int) -> int:
        return max((_sparse_get(key[0], j) for key in self._terms), default=0)

    # -- ring operations ------------------------------------------------------
    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not other._terms:
            return self
        if not self._terms:
            return other
        acc = dict(self._terms)
        for key, v in other._terms.items():
            w = acc.get(key, ZERO) + v
            if w:
                acc[key] = w
            else:
                del acc[key]
        return CoefElement(acc)

    __radd__ = __add__

    def __neg__(self):
        return CoefElement({key: -v for key, v in self._terms.items()})

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not self._terms or not other._terms:
            return ZERO_ELT
        acc: dict = {}
        for ka, va in self._terms.items():
            for kb, vb in other._terms.items():
                key, factor = _mul_keys(ka, kb)
                w = va * vb
                if factor != 1:
                    w = w * factor
                acc[key] = acc.get(key, ZERO) + w
        return CoefElement._from_accumulator(acc)

    __rmul__ = __mul__

    def scale(self, q) -> "CoefElement":
        q = as_rational(q) if not isinstance(q, int) else Rational(q)
        if q == 0:
            return ZERO_ELT
        return CoefElement({key: v * q for key, v in self._terms.items()})

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = ONE_ELT
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return exact_div(self, other)

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return exact_div(other, self)

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # -- units ----------------------------------------------------------------
    def _split_unit(self):
        """Write a unit as (constant part, monomial key pair)."""
        mons = self.monomials()
        if len(mons) != 1:
            raise NotDivisible(f"{self} is not a unit of the coefficient ring")
        tm, ea = next(iter(mons))
        cpart = CoefElement({((), (), s, k): v for (_, _, s, k), v in self._terms.items()})
        return cpart, tm, ea

    def inverse(self) -> "CoefElement":
        """Inverse of a unit (nonzero algebraic constant times a monomial)."""
        if not self._terms:
            raise ZeroDivisionError("inverse of zero")
        cpart, tm, ea = self._split_unit()
        cinv = _constant_inverse(cpart)
        mono = CoefElement({(_negate_sparse(tm), _negate_sparse(ea), 0, 0): ONE})
        return cinv * mono

    # -- calculus ---------------------------------------------------------------
    def derive(self, j: int) -> "CoefElement":
        """Partial derivative with respect to t^j."""
        acc: dict = {}
        for (tm, ea, s, k), v in self._terms.items():
            e = _sparse_get(tm, j)
            c = _sparse_get(ea, j, ZERO)
            if c:
                key = (tm, ea, s, k)
                acc[key] = acc.get(key, ZERO) + v * c
            if e:
                key = (_sparse_set(tm, j, e - 1), ea, s, k)
                acc[key] = acc.get(key, ZERO) + v * e
        return CoefElement._from_accumulator(acc)

    def antiderive(self, j: int) -> "CoefElement":
        """An antiderivative in t^j whose t^j-free integration constant is zero."""
        acc: dict = {}
        for (tm, ea, s, k), v in self._terms.items():
            e = _sparse_get(tm, j)
            c = _sparse_get(ea, j, ZERO)
            if not c:
                if e == -1:
                    raise NotAntidifferentiable(
                        f"term {_render_term((tm, ea, s, k), v, None)} integrates to a logarithm"
                    )
                key = (_sparse_set(tm, j, e + 1), ea, s, k)
                acc[key] = acc.get(key, ZERO) + v / (e + 1)
                continue
            if e < 0:
                raise NotAntidifferentiable(
                    f"term {_render_term((tm, ea, s, k), v, None)} integrates to an exponential integral"
                )
            # int t^e exp(c t) dt = exp(c t) sum_i (-1)^i e!/(e-i)! t^(e-i) / c^(i+1)
            falling = 1
            cpow = c
            for i in range(e + 1):
                coeff = v * falling / cpow
                if i % 2:
                    coeff = -coeff
                key = (_sparse_set(tm, j, e - i), ea, s, k)
                acc[key] = acc.get(key, ZERO) + coeff
                falling *= e - i
                cpow = cpow * c
        return CoefElement._from_accumulator(acc)

    # -- substitution and evaluation -----------------------------------------
    def substitute(self, values: dict) -> "CoefElement":
        """Replace t^j by ring elements, simultaneously.

        Inside exponentials only homogeneous rational linear forms may be
        substituted, so the result stays in the ring.
        """
        values = {j: _coerce(v) for j, v in values.items()}
        linear: dict = {}
        result = ZERO_ELT
        powers: dict = {}
        for (tm, ea, s, k), v in self._terms.items():
            new_arg: dict = {}
            for j, c in ea:
                if j not in values:
                    new_arg[j] = new_arg.get(j, ZERO) + c
                    continue
                if j not in linear:
                    linear[j] = _linear_form(values[j])
                for i, a in linear[j].items():
                    new_arg[i] = new_arg.get(i, ZERO) + c * a
            new_ea = tuple(sorted((i, c) for i, c in new_arg.items() if c != 0))
            term = CoefElement({(tuple((j, e) for j, e in tm if j not in values), new_ea, s, k): v})
            for j, e in tm:
                if j in values:
                    if (j, e) not in powers:
                        powers[(j, e)] = values[j] ** e
                    term = term * powers[(j, e)]
            result = result + term
        return result

    def evaluate(self, assignment: dict) -> complex:
        """Numeric value; ``assignment`` maps variable index to a complex number."""
        total = 0j
        for (tm, ea, s, k), v in self._terms.items():
            val = complex(float(v))
            for j, e in tm:
                if j not in assignment:
                    raise MissingAssignment(f"no value for t{j}")
                val *= complex(assignment[j]) ** e
            if ea:
                arg = 0j
                for j, c in ea:
                    if j not in assignment:
                        raise MissingAssignment(f"no value for t{j}")
                    arg += float(c) * complex(assignment[j])
                val *= cmath.exp(arg)
            if s:
                val *= SQRT2_VALUE
            if k:
                val *= 1j
            total += val
        return total

    def constant_term(self) -> "CoefElement":
        return CoefElement({key: v for key, v in self._terms.items() if not key[0] and not key[1]})

    def coefficient_of(self, tm: tuple, ea: tuple = ()) -> "CoefElement":
        """Algebraic-constant coefficient of one (t-monomial, exp-monomial)."""
        return CoefElement(
            {((), (), s, k): v for (a, b, s, k), v in self._terms.items() if a == tm and b == ea}
        )

    def split_by_monomial(self) -> dict:
        out: dict = {}
        for (tm, ea, s, k), v in self._terms.items():
            out.setdefault((tm, ea), {})[((), (), s, k)] = v
        return {m: CoefElement(d) for m, d in out.items()}

    # -- rendering --------------------------------------------------------------
    def render(self, names=None) -> str:
        if not self._terms:
            return "0"
        parts = []
        for key in sorted(self._terms, key=_term_sort_key):
            parts.append(_render_term(key, self._terms[key], names))
        text = parts[0]
        for p in parts[1:]:
            text += " - " + p[1:] if p.startswith("-") else " + " + p
        return text

    def __str__(self):
        return self.render()

    def __repr__(self):
        return f"CoefElement({self.render()!r})"


# -- module helpers -------------------------------------------------------------


def _term_sort_key(key):
    tm, ea, s, k = key
    deg = sum(e for _, e in tm)
    dense = tuple(-e for _, e in tm)
    idx = tuple(j for j, _ in tm)
    return (-deg, idx, dense, tuple((j, -c) for j, c in ea), s, k)


def _var_name(j: int, names) -> str:
    if names is not None:
        return names[j - 1]
    return f"t{j}"


def _render_linear(ea: tuple, names) -> str:
    text = ""
    for j, c in ea:
        name = _var_name(j, names)
        num, den = int(c.numerator), int(c.denominator)
        mag = abs(num)
        piece = name if mag == 1 else f"{mag}*{name}"
        if den != 1:
            piece = f"{piece}/{den}"
        if not text:
            text = ("-" if num < 0 else "") + piece
        else:
            text += (" - " if num < 0 else " + ") + piece
    return text


def _render_term(key, v, names) -> str:
    tm, ea, s, k = key
    factors = []
    if s:
        factors.append("sqrt2")
    if k:
        factors.append("I")
    for j, e in tm:
        name = _var_name(j, names)
        factors.append(name if e == 1 else f"{name}^{e}" if e > 0 else f"{name}^({e})")
    if ea:
        factors.append(f"exp({_render_linear(ea, names)})")
    mag = abs(v)
    sign = "-" if v < 0 else ""
    if not factors:
        return sign + rational_str(mag)
    if mag == 1:
        return sign + "*".join(factors)
    return sign + rational_str(mag) + "*" + "*".join(factors)


def _constant_inverse(c: "CoefElement") -> "CoefElement":
    """Inverse in Q(sqrt2, I) via the norm to Q."""
    if not c._terms:
        raise ZeroDivisionError("inverse of zero")
    if len(c._terms) == 1:
        (key, v), = c._terms.items()
        _, _, s, k = key
        # (sqrt2)^-1 = sqrt2/2, I^-1 = -I
        inv = ONE / v
        if s:
            inv = inv / 2
        if k:
            inv = -inv
        return CoefElement({key: inv})
    sig = _conjugate(c, flip_sqrt2=True, flip_i=False)
    tau = _conjugate(c, flip_sqrt2=False, flip_i=True)
    sigtau = _conjugate(c, flip_sqrt2=True, flip_i=True)
    cofactor = sig * tau * sigtau
    norm = c * cofactor
    if not norm.is_rational():
        raise ArithmeticError("norm computation left the rationals")
    n = norm._terms[((), (), 0, 0)]
    return cofactor.scale(ONE / n)


def _linear_form(c: "CoefElement") -> dict:
    """{j: a_j} when c = sum a_j t^j with rational a_j, else ValueError."""
    out = {}
    for (tm, ea, s, k), v in c.terms.items():
        if ea or s or k or len(tm) != 1 or tm[0][1] != 1:
            raise ValueError(f"cannot substitute {c} inside an exponential")
        out[tm[0][0]] = v
    return out


def _conjugate(c: "CoefElement", flip_sqrt2: bool, flip_i: bool) -> "CoefElement":
    out = {}
    for (tm, ea, s, k), v in c._terms.items():
        if (flip_sqrt2 and s) ^ (flip_i and k):
            v = -v
        out[(tm, ea, s, k)] = v
    return CoefElement(out)


def _monomial_order_key(m, indices):
    tm, ea = m
    td = dict(tm)
    ed = dict(ea)
    return tuple(td.get(j, 0) for j in indices) + tuple(ed.get(j, ZERO) for j in indices)


def _mono_div(ma, mb):
    return (_merge(ma[0], _negate_sparse(mb[0])), _merge(ma[1], _negate_sparse(mb[1])))


def exact_div(a: CoefElement, b: CoefElement, max_steps: int = 100000) -> CoefElement:
    """Exact quotient a/b; raises ``NotDivisible`` when b does not divide a.

    Uses the division algorithm for a lexicographic group order on the
    combined (t, exp) exponent vectors.  Any exact quotient has every
    monomial bounded below by low(a)/low(b), which gives a stopping rule.
    """
    if b.is_zero():
        raise ZeroDivisionError("division by zero element")
    if a.is_zero():
        return ZERO_ELT
    if b.is_unit():
        return a * b.inverse()
    indices = sorted(a.variables() | b.variables())

    def key(m):
        return _monomial_order_key(m, indices)

    bparts = b.split_by_monomial()
    b_lead = max(bparts, key=key)
    b_low = min(bparts, key=key)
    b_lead_inv = _constant_inverse(bparts[b_lead])
    a_low = min(a.split_by_monomial(), key=key)
    bound = key(_mono_div(a_low, b_low))
    q = ZERO_ELT
    r = a
    for _ in range(max_steps):
        if r.is_zero():
            return q
        rparts = r.split_by_monomial()
        r_lead = max(rparts, key=key)
        mq = _mono_div(r_lead, b_lead)
        if key(mq) < bound:
            raise NotDivisible(f"{b} does not divide {a}")
        tq = rparts[r_lead] * b_lead_inv * CoefElement({(mq[0], mq[1], 0, 0): ONE})
        q = q + tq
        r = r - tq * b
    raise NotDivisible("division did not terminate")  # pragma: no cover


def const(q) -> CoefElement:
    q = Rational(q) if isinstance(q, int) else as_rational(q)
    if q == 0:
        return ZERO_ELT
    return CoefElement({((), (), 0, 0): q})


def var(j: int, power: int = 1) -> CoefElement:
    if j < 1:
        raise ValueError("variable indices start at 1")
    if power == 0:
        return ONE_ELT
    return CoefElement({(((j, power),), (), 0, 0): ONE})


def exp_linear(arg: dict) -> CoefElement:
    """exp(sum_j c_j t^j) for a mapping ``{j: c_j}`` of rational coefficients."""
    items = tuple(sorted((j, as_rational(c) if not isinstance(c, int) else Rational(c))
                         for j, c in arg.items() if c != 0))
    return CoefElement({((), items, 0, 0): ONE})


ZERO_ELT = CoefElement({})
ONE_ELT = CoefElement({((), (), 0, 0): ONE})
SQRT2 = CoefElement({((), (), 1, 0): ONE})
I = CoefElement({((), (), 0, 1): ONE})


class CoefFraction:
    """Quotient of ring elements, used where results leave the ring (e.g. g_ij).

    Not reduced beyond an attempted exact division; equality is decided by
    cross-multiplication.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        num = _coerce(num)
        den = ONE_ELT if den is None else _coerce(den)
        if den.is_zero():
            raise ZeroDivisionError("fraction with zero denominator")
        if den.is_unit():
            num, den = num * den.inverse(), ONE_ELT
        self.num = num
        self.den = den

    @classmethod
    def make(cls, num, den):
        """An exact quotient when possible, otherwise a fraction."""
        try:
            return exact_div(_coerce(num), _coerce(den))
        except NotDivisible:
            return cls(num, den)

    @staticmethod
    def lift(x) -> "CoefFraction":
        return x if isinstance(x, CoefFraction) else CoefFraction(x)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __add__(self, other):
        o = CoefFraction.lift(other)
        if self.den == o.den:
            return CoefFraction(self.num + o.num, self.den)
        return CoefFraction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return CoefFraction(-self.num, self.den)

    def __sub__(self, other):
        return self + (-CoefFraction.lift(other))

    def __rsub__(self, other):
        return CoefFraction.lift(other) - self

    def __mul__(self, other):
        o = CoefFraction.lift(other)
        return CoefFraction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = CoefFraction.lift(other)
        return CoefFraction(self.num * o.den, self.den * o.num)

    def __eq__(self, other):
        if not isinstance(other, (CoefFraction, CoefElement, int)):
            return NotImplemented
        o = CoefFraction.lift(other)
        return (self.num * o.den - o.num * self.den).is_zero()

    __hash__ = None

    def simplify(self):
        return CoefFraction.make(self.num, self.den)

    def evaluate(self, assignment: dict) -> complex:
        return self.num.evaluate(assignment) / self.den.evaluate(assignment)

    def render(self, names=None) -> str:
        if self.den == ONE_ELT:
            return self.num.render(names)
        return f"({self.num.render(names)})/({self.den.render(names)})"

    def __repr__(self):
        return f"CoefFraction({self.render()!r})"

    __str__ = render


def add(a, b) -> CoefElement:
    return _coerce(a) + _coerce(b)


def mul(a, b) -> CoefElement:
    return _coerce(a) * _coerce(b)


def derive_t(a: CoefElement, j: int) -> CoefElement:
    return a.derive(j)


def antiderive_t(a: CoefElement, j: int) -> CoefElement:
    """Antiderivative in t^j with zero integration constant."""
    return a.antiderive(j)


def eval_numeric(a: CoefElement, assignment: dict) -> complex:
    return a.evaluate(assignment)
