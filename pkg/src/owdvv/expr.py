"""Parser for the expression language of spec files.

Integers, ``a/b``, variable names, ``p`` (and ``z`` in the exponential
chart), ``+ - * / ^`` with integer exponents, ``exp(...)`` of a linear form,
``sin``/``cos`` of integer multiples of p when z = e^{ip}, ``log(p)`` in the
affine chart, and the constants ``sqrt2`` and ``I``.  Every expression parses
to a ``LogLaurent`` in the requested chart.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ._rational import ONE, Rational
from .coefring import I, ONE_ELT, SQRT2, CoefElement, const, exp_linear, var
from .laurent import AFFINE, Chart, LaurentPoly, LogLaurent

__all__ = ["ParseError", "parse_expression", "parse_coefficient", "parse_superpotential", "default_names"]


class ParseError(ValueError):
    def __init__(self, message: str, column: int, line: int | None = None, text: str = ""):
        self.column = column
        self.line = line
        self.text = text
        where = f"line {line}, column {column}" if line is not None else f"column {column}"
        super().__init__(f"{where}: {message}")


_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+\.\d*|\.\d+|\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>\*\*|[-+*/^()]))"
)


@dataclass
class _Tok:
    kind: str
    text: str
    col: int


def _tokenize(text: str) -> list:
    toks = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            col = pos + len(text[pos:]) - len(text[pos:].lstrip()) + 1
            raise ParseError(f"unexpected character {text[col - 1]!r}", col, text=text)
        kind = m.lastgroup
        col = m.start(kind) + 1
        tok = m.group(kind)
        if kind == "num" and "." in tok:
            raise ParseError("floating-point literals are not allowed in exact mode", col, text=text)
        toks.append(_Tok(kind, "^" if tok == "**" else tok, col))
        pos = m.end()
    toks.append(_Tok("end", "", len(text) + 1))
    return toks


def default_names(n: int) -> tuple:
    return tuple(f"t{i}" for i in range(1, n + 1))


class _Parser:
    def __init__(self, text: str, chart: Chart, names):
        self.text = text
        self.chart = chart
        self.index = {name: i + 1 for i, name in enumerate(names)}
        self.toks = _tokenize(text)
        self.pos = 0

    # -- helpers
    def peek(self) -> _Tok:
        return self.toks[self.pos]

    def take(self) -> _Tok:
        tok = self.toks[self.pos]
        self.pos += 1
        return tok

    def expect(self, text: str) -> _Tok:
        tok = self.take()
        if tok.text != text:
            self.fail(f"expected {text!r}", tok)
        return tok

    def fail(self, message: str, tok: _Tok | None = None):
        tok = tok or self.peek()
        raise ParseError(message, tok.col, text=self.text)

    def const(self, c) -> LogLaurent:
        return LogLaurent.constant(self.chart, c)

    # -- grammar
    def parse(self) -> LogLaurent:
        val = self.expr()
        if self.peek().kind != "end":
            self.fail(f"unexpected {self.peek().text!r}")
        return val

    def expr(self) -> LogLaurent:
        val = self.term()
        while self.peek().text in ("+", "-"):
            op = self.take().text
            rhs = self.term()
            val = val + rhs if op == "+" else val - rhs
        return val

    def term(self) -> LogLaurent:
        val = self.unary()
        while self.peek().text in ("*", "/"):
            tok = self.take()
            rhs = self.unary()
            val = val * rhs if tok.text == "*" else self.divide(val, rhs, tok)
        return val

    def unary(self) -> LogLaurent:
        if self.peek().text == "-":
            self.take()
            return -self.unary()
        if self.peek().text == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> LogLaurent:
        base = self.atom()
        if self.peek().text == "^":
            tok = self.take()
            sign = 1
            if self.peek().text in ("-", "+"):
                sign = -1 if self.take().text == "-" else 1
            if self.peek().text == "(":
                self.take()
                if self.peek().text in ("-", "+"):
                    sign *= -1 if self.take().text == "-" else 1
                num = self.take()
                self.expect(")")
            else:
                num = self.take()
            if num.kind != "num":
                self.fail("exponents must be integers", num)
            e = sign * int(num.text)
            if e >= 0:
                return base**e
            inv = self.invert(base, tok)
            return inv ** (-e)
        return base

    def atom(self) -> LogLaurent:
        tok = self.take()
        if tok.kind == "num":
            return self.const(const(int(tok.text)))
        if tok.text == "(":
            val = self.expr()
            self.expect(")")
            return val
        if tok.kind != "name":
            self.fail(f"unexpected {tok.text or 'end of input'!r}", tok)
        name = tok.text
        if self.peek().text == "(" and name in ("exp", "sin", "cos", "log"):
            self.take()
            arg = self.expr()
            self.expect(")")
            return getattr(self, f"fn_{name}")(arg, tok)
        if name in self.index:
            return self.const(var(self.index[name]))
        if name == "p":
            if self.chart.is_exp:
                return LogLaurent.log_symbol(self.chart)
            return LogLaurent.from_laurent(LaurentPoly.monomial(self.chart, 1))
        if name == "z":
            if not self.chart.is_exp:
                self.fail("z is only defined in the exponential chart", tok)
            return LogLaurent.from_laurent(LaurentPoly.monomial(self.chart, 1))
        if name == "sqrt2":
            return self.const(SQRT2)
        if name == "I":
            return self.const(I)
        self.fail(f"unknown name {name!r}", tok)

    # -- division and inverses
    def invert(self, val: LogLaurent, tok: _Tok) -> LogLaurent:
        if val.is_laurent():
            f = val.as_laurent()
            if len(f.coeffs) == 1:
                (k, c), = f.coeffs.items()
                if c.is_unit():
                    return LogLaurent.from_laurent(LaurentPoly.monomial(self.chart, -k, c.inverse()))
        self.fail("division is only allowed by a single monomial term", tok)

    def divide(self, a: LogLaurent, b: LogLaurent, tok: _Tok) -> LogLaurent:
        if b.is_zero():
            self.fail("division by zero", tok)
        return a * self.invert(b, tok)

    # -- functions
    def _linear_parts(self, arg: LogLaurent, tok: _Tok):
        """(coefficient of p, {j: c_j}) for a linear argument."""
        p_coef = CoefElement()
        rest = arg
        if self.chart.is_exp:
            if arg.log_degree() > 1:
                self.fail("exponent must be linear in p", tok)
            sym = arg.part(1)
            if not sym.is_zero():
                if not sym.is_x_free() or not sym.coeff(0).is_constant():
                    self.fail("coefficient of p in an exponent must be a constant", tok)
                p_coef = sym.coeff(0)
            rest = LogLaurent.from_laurent(arg.part(0))
        if not rest.is_p_free():
            self.fail("exponent must be a linear form in the variables and p", tok)
        lin = rest.as_coef()
        coeffs = {}
        for (tm, ea, s, k), v in lin.terms.items():
            if ea or s or k or len(tm) != 1 or tm[0][1] != 1:
                self.fail("exponent must be a rational linear form in the variables", tok)
            coeffs[tm[0][0]] = v
        return p_coef, coeffs

    def _z_power(self, p_coef: CoefElement, tok: _Tok) -> int:
        """Integer k with exp(a p) = z^k."""
        kap = self.chart.kappa_elt()
        ratio = p_coef * kap.inverse()
        terms = ratio.terms
        if not terms:
            return 0
        if len(terms) != 1:
            self.fail("exp(a*p) must be an integer power of the chart variable", tok)
        (key, v), = terms.items()
        if key != ((), (), 0, 0) or v.denominator != 1:
            self.fail("exp(a*p) must be an integer power of the chart variable", tok)
        return int(v)

    def fn_exp(self, arg: LogLaurent, tok: _Tok) -> LogLaurent:
        p_coef, coeffs = self._linear_parts(arg, tok)
        out = LaurentPoly.constant(self.chart, exp_linear(coeffs))
        if not p_coef.is_zero():
            out = out.shift(self._z_power(p_coef, tok))
        return LogLaurent.from_laurent(out)

    def _trig(self, arg: LogLaurent, tok: _Tok, kind: str) -> LogLaurent:
        if not (self.chart.is_exp and self.chart.kappa == "i"):
            self.fail(f"{kind}(p) needs the chart z = exp(I*p)", tok)
        p_coef, coeffs = self._linear_parts(arg, tok)
        if coeffs:
            self.fail(f"{kind} only accepts integer multiples of p", tok)
        terms = p_coef.terms
        if set(terms) - {((), (), 0, 0)} or any(v.denominator != 1 for v in terms.values()):
            self.fail(f"{kind} only accepts integer multiples of p", tok)
        k = int(terms.get(((), (), 0, 0), 0))
        half = Rational(1, 2)
        zp = LaurentPoly.monomial(self.chart, k)
        zm = LaurentPoly.monomial(self.chart, -k)
        if kind == "cos":
            return LogLaurent.from_laurent((zp + zm) * const(half))
        # sin(kp) = (z^k - z^-k) / (2i) = -i/2 (z^k - z^-k)
        return LogLaurent.from_laurent((zp - zm) * (I * const(-half)))

    def fn_sin(self, arg, tok):
        return self._trig(arg, tok, "sin")

    def fn_cos(self, arg, tok):
        return self._trig(arg, tok, "cos")

    def fn_log(self, arg: LogLaurent, tok: _Tok) -> LogLaurent:
        if self.chart.is_exp:
            self.fail("log is not available in the exponential chart", tok)
        if arg != LogLaurent.from_laurent(LaurentPoly.monomial(self.chart, 1)):
            self.fail("only log(p) is supported", tok)
        return LogLaurent.log_symbol(self.chart)


def parse_expression(text: str, chart: Chart = AFFINE, names=None, line: int | None = None) -> LogLaurent:
    names = tuple(names) if names is not None else default_names(9)
    try:
        return _Parser(text, chart, names).parse()
    except ParseError as exc:
        if line is not None and exc.line is None:
            raise ParseError(str(exc).split(": ", 1)[1], exc.column, line, text) from None
        raise


def parse_coefficient(text: str, names=None, line: int | None = None) -> CoefElement:
    """An expression that must not depend on p (a potential F, say)."""
    val = parse_expression(text, AFFINE, names, line)
    if not val.is_p_free():
        raise ParseError("expression must not depend on p", 1, line, text)
    return val.as_coef()


def parse_superpotential(text: str, chart: Chart, names=None, line: int | None = None) -> LaurentPoly:
    val = parse_expression(text, chart, names, line)
    if not val.is_laurent():
        raise ParseError("superpotential must be a Laurent polynomial in the chart variable", 1, line, text)
    return val.as_laurent()
