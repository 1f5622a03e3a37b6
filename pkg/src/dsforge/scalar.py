"""Exact arithmetic in cyclotomic fields Q(zeta_N).

A scalar is stored by a field order N and its coordinates in the power
basis 1, z, ..., z^(phi(N)-1) of Q(zeta_N), reduced modulo the N-th
cyclotomic polynomial.  Reduction makes the representation canonical, so
zero-testing is a coordinate check and equality needs at most one
embedding into a common field Q(zeta_lcm).

The module also provides the text grammar used as the wire format for
eigenvalues everywhere in this package:

    expr     := term (('+'|'-') term)*
    term     := atom (('*'|'/') atom)*
    atom     := rational | 'z'INT('^'INT)? | '(' expr ')' | '-' atom
    rational := INT('/'INT)?

`zN^k` denotes the primitive N-th root of unity raised to the k-th power.
"""

from __future__ import annotations

import os
import re
from functools import lru_cache
from math import gcd

from gmpy2 import mpq

Rational = mpq

DEFAULT_MAX_FIELD_ORDER = 1 << 20
_MAX_ORDER_ENV = "DSFORGE_MAX_FIELD_ORDER"


class ScalarError(Exception):
    """Base class for scalar arithmetic failures."""


class ScalarParseError(ScalarError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class FieldOrderError(ScalarError):
    """Requested cyclotomic field order exceeds the configured cap."""


def max_field_order() -> int:
    value = os.environ.get(_MAX_ORDER_ENV)
    if value is None:
        return DEFAULT_MAX_FIELD_ORDER
    return int(value)


def _check_order(n: int) -> None:
    if n < 1:
        raise ScalarError(f"field order must be >= 1, got {n}")
    if n > max_field_order():
        raise FieldOrderError(
            f"field order {n} exceeds cap {max_field_order()} "
            f"(set {_MAX_ORDER_ENV} to raise it)"
        )


@lru_cache(maxsize=None)
def euler_phi(n: int) -> int:
    result = n
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def _poly_div_exact(num: list[int], den: list[int]) -> list[int]:
    # exact division of integer polynomials, den monic up to sign
    num = list(num)
    q = [0] * (len(num) - len(den) + 1)
    for i in range(len(q) - 1, -1, -1):
        c = num[i + len(den) - 1] // den[-1]
        q[i] = c
        if c:
            for j, d in enumerate(den):
                num[i + j] -= c * d
    if any(num[: len(den) - 1]):
        raise ArithmeticError("inexact polynomial division")
    return q


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Coefficients of the n-th cyclotomic polynomial, ascending, monic."""
    poly = [-1] + [0] * (n - 1) + [1]  # x^n - 1
    for d in range(1, n):
        if n % d == 0:
            poly = _poly_div_exact(poly, list(cyclotomic_poly(d)))
    return tuple(poly)


def _reduce_mod_cyclotomic(coeffs: list, n: int) -> tuple:
    """Reduce a coefficient list modulo Phi_n; result has length phi(n)."""
    phi = euler_phi(n)
    cyc = cyclotomic_poly(n)
    c = list(coeffs)
    for i in range(len(c) - 1, phi - 1, -1):
        top = c[i]
        if top:
            for j in range(phi + 1):
                c[i - phi + j] -= top * cyc[j]
    c = c[:phi]
    while len(c) < phi:
        c.append(mpq(0))
    return tuple(mpq(x) for x in c)


_ZERO = mpq(0)
_ONE = mpq(1)


class Scalar:
    """An element of a cyclotomic field, canonically reduced."""

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs: tuple):
        self.order = order
        self.coeffs = coeffs

    # -- constructors -------------------------------------------------

    @staticmethod
    def from_rational(value) -> "Scalar":
        return Scalar(1, (mpq(value),))

    @staticmethod
    def zeta(n: int, k: int = 1) -> "Scalar":
        _check_order(n)
        k %= n
        mono = [_ZERO] * k + [_ONE]
        return Scalar(n, _reduce_mod_cyclotomic(mono, n))

    @staticmethod
    def zero() -> "Scalar":
        return Scalar(1, (_ZERO,))

    @staticmethod
    def one() -> "Scalar":
        return Scalar(1, (_ONE,))

    # -- field coercion -----------------------------------------------

    def lift(self, order: int) -> "Scalar":
        """Embed into Q(zeta_order); self.order must divide order."""
        if order == self.order:
            return self
        if order % self.order != 0:
            raise ScalarError(f"cannot lift from order {self.order} to {order}")
        _check_order(order)
        step = order // self.order
        out = [_ZERO] * ((len(self.coeffs) - 1) * step + 1)
        for j, c in enumerate(self.coeffs):
            if c:
                out[j * step] += c
        return Scalar(order, _reduce_mod_cyclotomic(out, order))

    def _common(self, other: "Scalar") -> tuple["Scalar", "Scalar"]:
        if self.order == other.order:
            return self, other
        L = self.order * other.order // gcd(self.order, other.order)
        return self.lift(L), other.lift(L)

    # -- predicates ---------------------------------------------------

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def is_one(self) -> bool:
        return self.coeffs[0] == 1 and all(c == 0 for c in self.coeffs[1:])

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def as_rational(self):
        if not self.is_rational():
            raise ScalarError(f"{self} is not rational")
        return self.coeffs[0]

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other: "Scalar") -> "Scalar":
        a, b = self._common(other)
        return Scalar(a.order, tuple(x + y for x, y in zip(a.coeffs, b.coeffs)))

    def __sub__(self, other: "Scalar") -> "Scalar":
        a, b = self._common(other)
        return Scalar(a.order, tuple(x - y for x, y in zip(a.coeffs, b.coeffs)))

    def __neg__(self) -> "Scalar":
        return Scalar(self.order, tuple(-x for x in self.coeffs))

    def __mul__(self, other: "Scalar") -> "Scalar":
        a, b = self._common(other)
        n = len(a.coeffs)
        prod = [_ZERO] * (2 * n - 1)
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    if y:
                        prod[i + j] += x * y
        return Scalar(a.order, _reduce_mod_cyclotomic(prod, a.order))

    def inv(self) -> "Scalar":
        if self.is_zero():
            raise ZeroDivisionError("inversion of zero scalar")
        if self.is_rational():
            return Scalar(1, (1 / self.coeffs[0],))
        # extended Euclid with the cyclotomic polynomial over Q
        n = self.order
        phi = euler_phi(n)
        r0 = [mpq(c) for c in cyclotomic_poly(n)]
        r1 = list(self.coeffs)
        while r1 and r1[-1] == 0:
            r1.pop()
        s0: list = [_ZERO]
        s1: list = [_ONE]
        while True:
            # divide r0 by r1
            q = [_ZERO] * (len(r0) - len(r1) + 1)
            rem = list(r0)
            for i in range(len(q) - 1, -1, -1):
                c = rem[i + len(r1) - 1] / r1[-1]
                q[i] = c
                if c:
                    for j, d in enumerate(r1):
                        rem[i + j] -= c * d
            rem = rem[: len(r1) - 1]
            while rem and rem[-1] == 0:
                rem.pop()
            # s_next = s0 - q*s1
            qs = [_ZERO] * (len(q) + len(s1) - 1)
            for i, x in enumerate(q):
                if x:
                    for j, y in enumerate(s1):
                        if y:
                            qs[i + j] += x * y
            s_next = [_ZERO] * max(len(s0), len(qs))
            for i, x in enumerate(s0):
                s_next[i] += x
            for i, x in enumerate(qs):
                s_next[i] -= x
            while s_next and s_next[-1] == 0:
                s_next.pop()
            if not rem:
                break
            r0, r1 = r1, rem
            s0, s1 = s1, s_next
        # r1 is the (constant) gcd: Phi_n is irreducible and self != 0
        g = r1[0]
        result = [x / g for x in s1]
        return Scalar(n, _reduce_mod_cyclotomic(result, n))

    def __truediv__(self, other: "Scalar") -> "Scalar":
        return self * other.inv()

    def __pow__(self, k: int) -> "Scalar":
        if k < 0:
            return self.inv() ** (-k)
        result = Scalar.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, Scalar):
            return NotImplemented
        a, b = self._common(other)
        return a.coeffs == b.coeffs

    __hash__ = None  # equal values may live in different field orders

    def __repr__(self) -> str:
        return f"Scalar({format_scalar(self)!r})"

    def __str__(self) -> str:
        return format_scalar(self)


def coerce(values) -> list:
    """Return the given scalars embedded in one common field Q(zeta_lcm)."""
    values = list(values)
    L = 1
    for v in values:
        L = L * v.order // gcd(L, v.order)
    _check_order(L)
    return [v.lift(L) for v in values]


# -- printing ---------------------------------------------------------


def _format_rational(q) -> str:
    return str(q)


def format_scalar(s: Scalar) -> str:
    """Render a scalar in the wire grammar; parse(format_scalar(s)) == s."""
    parts: list[tuple[bool, str]] = []  # (negative, body)
    for k, c in enumerate(s.coeffs):
        if c == 0:
            continue
        negative = c < 0
        mag = -c if negative else c
        if k == 0:
            body = _format_rational(mag)
        else:
            power = f"z{s.order}" if k == 1 else f"z{s.order}^{k}"
            body = power if mag == 1 else f"{_format_rational(mag)}*{power}"
        parts.append((negative, body))
    if not parts:
        return "0"
    pieces = []
    for idx, (negative, body) in enumerate(parts):
        if idx == 0:
            pieces.append(f"-{body}" if negative else body)
        else:
            pieces.append(f"- {body}" if negative else f"+ {body}")
    return " ".join(pieces)


# -- parsing ----------------------------------------------------------

_TOKEN_RE = re.compile(r"\s*(z\d+|\d+|\^|\+|-|\*|/|\(|\))")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens: list[tuple[str, int]] = []
        pos = 0
        while pos < len(text):
            m = _TOKEN_RE.match(text, pos)
            if m is None:
                stripped = text[pos:].lstrip()
                if not stripped:
                    break
                raise ScalarParseError(
                    f"unexpected character {stripped[0]!r}",
                    len(text) - len(stripped),
                )
            self.tokens.append((m.group(1), m.start(1)))
            pos = m.end()
        self.index = 0

    def peek(self) -> str | None:
        if self.index < len(self.tokens):
            return self.tokens[self.index][0]
        return None

    def pos(self) -> int:
        if self.index < len(self.tokens):
            return self.tokens[self.index][1]
        return len(self.text)

    def take(self) -> str:
        tok = self.peek()
        if tok is None:
            raise ScalarParseError("unexpected end of input", self.pos())
        self.index += 1
        return tok

    def expect(self, tok: str) -> None:
        got = self.peek()
        if got != tok:
            raise ScalarParseError(f"expected {tok!r}, got {got!r}", self.pos())
        self.index += 1

    def parse(self) -> Scalar:
        value = self.expr()
        if self.peek() is not None:
            raise ScalarParseError(f"trailing input {self.peek()!r}", self.pos())
        return value

    def expr(self) -> Scalar:
        value = self.term()
        while self.peek() in ("+", "-"):
            op = self.take()
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> Scalar:
        value = self.atom()
        while self.peek() in ("*", "/"):
            op = self.take()
            at = self.pos()
            rhs = self.atom()
            if op == "*":
                value = value * rhs
            else:
                if rhs.is_zero():
                    raise ScalarParseError("division by zero scalar", at)
                value = value / rhs
        return value

    def atom(self) -> Scalar:
        tok = self.peek()
        if tok is None:
            raise ScalarParseError("unexpected end of input", self.pos())
        if tok == "-":
            self.take()
            return -self.atom()
        if tok == "(":
            self.take()
            value = self.expr()
            self.expect(")")
            return value
        if tok.startswith("z"):
            at = self.pos()
            self.take()
            n = int(tok[1:])
            if n < 1:
                raise ScalarParseError("root-of-unity order must be >= 1", at)
            k = 1
            if self.peek() == "^":
                self.take()
                sign = 1
                if self.peek() == "-":
                    self.take()
                    sign = -1
                exp_tok = self.peek()
                if exp_tok is None or not exp_tok.isdigit():
                    raise ScalarParseError("expected integer exponent", self.pos())
                self.take()
                k = sign * int(exp_tok)
            return Scalar.zeta(n, k)
        if tok.isdigit():
            self.take()
            return Scalar.from_rational(int(tok))
        raise ScalarParseError(f"unexpected token {tok!r}", self.pos())


def parse_scalar(text: str) -> Scalar:
    """Parse a scalar expression; raises ScalarParseError with position."""
    return _Parser(text).parse()
