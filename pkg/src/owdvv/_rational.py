"""Arbitrary-precision rational type, gmpy2 when available."""

from __future__ import annotations

try:
    from gmpy2 import mpq as Rational

    HAVE_GMPY2 = True
except ImportError:  # pragma: no cover - exercised only without gmpy2
    from fractions import Fraction as Rational

    HAVE_GMPY2 = False

ZERO = Rational(0)
ONE = Rational(1)


def as_rational(x) -> Rational:
    """Coerce an int, Fraction, mpq or "a/b" string to ``Rational``."""
    if isinstance(x, str):
        if "/" in x:
            num, den = x.split("/")
            return Rational(int(num), int(den))
        return Rational(int(x))
    if hasattr(x, "numerator") and hasattr(x, "denominator"):
        return Rational(int(x.numerator), int(x.denominator))
    raise TypeError(f"cannot interpret {x!r} as a rational")


def rational_str(q) -> str:
    num, den = int(q.numerator), int(q.denominator)
    return str(num) if den == 1 else f"{num}/{den}"
