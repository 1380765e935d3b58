"""Sparse exact-rational multivariate polynomials, jets, and the expression
language used for germ input and vector-field output.

Monomials are exponent tuples ordered graded-lexicographically (total degree
first, then lexicographic with earlier variables heavier).  Coefficients are
exact rationals; no floating point enters anywhere.  All values are immutable
and all operations are pure.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ._linalg import QQ, QQ0, QQ1, qq


@dataclass(frozen=True)
class Ring:
    """A named tuple of variables; polynomials carry their ring as a tag."""

    variables: tuple

    @property
    def arity(self) -> int:
        return len(self.variables)

    def index_of(self, name: str) -> int:
        try:
            return self.variables.index(name)
        except ValueError:
            raise KeyError(name) from None


def source_ring(n: int) -> Ring:
    return Ring(tuple(f"x{i}" for i in range(1, n + 1)))


def target_ring(p: int) -> Ring:
    return Ring(tuple(f"X{i}" for i in range(1, p + 1)))


def monomial_degree(mono: tuple) -> int:
    return sum(mono)


def grlex_key(mono: tuple):
    """Sort key: larger key = larger monomial in graded-lex order."""
    return (sum(mono), mono)


def monomials_upto(n: int, degree: int) -> list[tuple]:
    """All exponent tuples on n variables of total degree <= degree,
    ascending graded-lex."""
    out = [()]
    for _ in range(n):
        out = [m + (e,) for m in out for e in range(degree + 1 - sum(m))]
    out.sort(key=grlex_key)
    return out


def monomials_of_degree(n: int, degree: int) -> list[tuple]:
    return [m for m in monomials_upto(n, degree) if sum(m) == degree]


class RingMismatchError(ValueError):
    pass


class Polynomial:
    """Immutable sparse polynomial over exact rationals."""

    __slots__ = ("ring", "_terms", "_hash")

    def __init__(self, ring: Ring, terms=None):
        object.__setattr__(self, "ring", ring)
        clean = {}
        if terms:
            for mono, coeff in (terms.items() if isinstance(terms, dict) else terms):
                c = qq(coeff)
                if c:
                    prev = clean.get(mono)
                    c = c + prev if prev is not None else c
                    if c:
                        clean[mono] = c
                    else:
                        del clean[mono]
        object.__setattr__(self, "_terms", clean)
        object.__setattr__(self, "_hash", None)

    # -- construction helpers -------------------------------------------------

    @staticmethod
    def zero(ring: Ring) -> "Polynomial":
        return Polynomial(ring)

    @staticmethod
    def constant(ring: Ring, value) -> "Polynomial":
        c = qq(value)
        return Polynomial(ring, {(0,) * ring.arity: c} if c else {})

    @staticmethod
    def variable(ring: Ring, index: int) -> "Polynomial":
        expo = [0] * ring.arity
        expo[index] = 1
        return Polynomial(ring, {tuple(expo): QQ1})

    @staticmethod
    def from_monomial(ring: Ring, mono: tuple, coeff=QQ1) -> "Polynomial":
        return Polynomial(ring, {mono: qq(coeff)})

    # -- basic protocol --------------------------------------------------------

    def items(self):
        return self._terms.items()

    def monomials(self):
        return self._terms.keys()

    def coefficient(self, mono: tuple):
        return self._terms.get(mono, QQ0)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self._terms:
            return -1
        return max(sum(m) for m in self._terms)

    def order(self) -> int:
        """Degree of the lowest term; large sentinel for zero."""
        if not self._terms:
            return 1 << 30
        return min(sum(m) for m in self._terms)

    def constant_term(self):
        return self._terms.get((0,) * self.ring.arity, QQ0)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Polynomial)
            and self.ring == other.ring
            and self._terms == other._terms
        )

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self.ring, frozenset(self._terms.items())))
            object.__setattr__(self, "_hash", h)
        return h

    def _check_ring(self, other: "Polynomial"):
        if self.ring != other.ring:
            raise RingMismatchError(
                f"ring mismatch: {self.ring.variables} vs {other.ring.variables}"
            )

    # -- arithmetic -------------------------------------------------------------

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._check_ring(other)
        terms = dict(self._terms)
        for mono, coeff in other._terms.items():
            nv = terms.get(mono, QQ0) + coeff
            if nv:
                terms[mono] = nv
            else:
                terms.pop(mono, None)
        return Polynomial._raw(self.ring, terms)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        self._check_ring(other)
        terms = dict(self._terms)
        for mono, coeff in other._terms.items():
            nv = terms.get(mono, QQ0) - coeff
            if nv:
                terms[mono] = nv
            else:
                terms.pop(mono, None)
        return Polynomial._raw(self.ring, terms)

    def __neg__(self) -> "Polynomial":
        return Polynomial._raw(self.ring, {m: -c for m, c in self._terms.items()})

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        self._check_ring(other)
        terms = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                mono = tuple(a + b for a, b in zip(m1, m2))
                nv = terms.get(mono, QQ0) + c1 * c2
                if nv:
                    terms[mono] = nv
                else:
                    del terms[mono]
        return Polynomial._raw(self.ring, terms)

    def scale(self, scalar) -> "Polynomial":
        c = qq(scalar)
        if not c:
            return Polynomial.zero(self.ring)
        return Polynomial._raw(self.ring, {m: v * c for m, v in self._terms.items()})

    def mul_monomial(self, mono: tuple, coeff=QQ1) -> "Polynomial":
        c = qq(coeff)
        if not c:
            return Polynomial.zero(self.ring)
        return Polynomial._raw(
            self.ring,
            {tuple(a + b for a, b in zip(m, mono)): v * c for m, v in self._terms.items()},
        )

    def __pow__(self, exponent: int) -> "Polynomial":
        if exponent < 0:
            raise ValueError("negative exponent")
        result = Polynomial.constant(self.ring, 1)
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            base = base * base if e > 1 else base
            e >>= 1
        return result

    @staticmethod
    def _raw(ring: Ring, terms: dict) -> "Polynomial":
        p = object.__new__(Polynomial)
        object.__setattr__(p, "ring", ring)
        object.__setattr__(p, "_terms", terms)
        object.__setattr__(p, "_hash", None)
        return p

    def __repr__(self):
        return f"Polynomial({poly_to_text(self)!r})"


# -- operation surface -----------------------------------------------------------


def arith(op: str, a: Polynomial, b) -> Polynomial:
    """Ring arithmetic dispatch: add | sub | mul | scale."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "scale":
        return b.scale(a) if isinstance(b, Polynomial) else a.scale(b)
    raise ValueError(f"unknown arith op {op!r}")


def truncate(a: Polynomial, order: int) -> Polynomial:
    """Drop all terms of total degree > order (jet reduction)."""
    if a.degree() <= order:
        return a
    return Polynomial._raw(
        a.ring, {m: c for m, c in a.items() if sum(m) <= order}
    )


def partial(a: Polynomial, var_index: int) -> Polynomial:
    """Formal partial derivative with respect to the var_index-th variable."""
    if not 0 <= var_index < a.ring.arity:
        raise IndexError(f"variable index {var_index} out of range")
    terms = {}
    for mono, coeff in a.items():
        e = mono[var_index]
        if e:
            m = list(mono)
            m[var_index] = e - 1
            terms[tuple(m)] = coeff * e
    return Polynomial._raw(a.ring, terms)


class ConstantTermError(ValueError):
    """A branch component fails to vanish at the origin."""


def compose(u: Polynomial, branch_components, order: int) -> Polynomial:
    """Jet of u(f_1,...,f_p) to the given order.

    Every component must vanish at the origin so that substitution is
    filtration-compatible; intermediate products are truncated at the
    working order, which is exact because each component has order >= 1.
    """
    comps = list(branch_components)
    if u.ring.arity != len(comps):
        raise RingMismatchError(
            f"composing {u.ring.arity}-variable polynomial with {len(comps)} components"
        )
    for q, comp in enumerate(comps):
        if comp.constant_term():
            raise ConstantTermError(f"component {q + 1} has a nonzero constant term")
    if not comps:
        return Polynomial.zero(u.ring)
    ring = comps[0].ring
    # cache truncated powers of each component
    powers = [{0: Polynomial.constant(ring, 1)} for _ in comps]

    def power(q: int, e: int) -> Polynomial:
        cache = powers[q]
        if e not in cache:
            half = power(q, e // 2)
            result = truncate(half * half, order)
            if e & 1:
                result = truncate(result * comps[q], order)
            cache[e] = result
        return cache[e]

    total = Polynomial.zero(ring)
    for mono, coeff in sorted(u.items(), key=lambda mc: grlex_key(mc[0])):
        if sum(mono) > order:
            continue  # each component has order >= 1
        term = Polynomial.constant(ring, coeff)
        for q, e in enumerate(mono):
            if e:
                term = truncate(term * power(q, e), order)
                if term.is_zero():
                    break
        total = total + term
    return total


# -- expression text -------------------------------------------------------------


class PolyParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|([()+\-*/^]))")


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            at = len(text) - len(stripped)
            raise PolyParseError(f"unexpected character {stripped[0]!r}", at)
        if m.group(1) is not None:
            tokens.append(("int", int(m.group(1)), m.start(1)))
        elif m.group(2) is not None:
            tokens.append(("name", m.group(2), m.start(2)))
        else:
            tokens.append(("op", m.group(3), m.start(3)))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


class _Parser:
    """Recursive-descent parser for the polynomial expression grammar:

    expr   := term (('+' | '-') term)*
    term   := unary ('*' unary)*
    unary  := ('-' | '+')* power
    power  := atom ('^' nonneg-int)?
    atom   := rational | variable | '(' expr ')'
    rational := int ('/' int)?

    Implicit multiplication is rejected; '/' only forms rational constants.
    """

    def __init__(self, text: str, ring: Ring):
        self.tokens = _tokenize(text)
        self.idx = 0
        self.ring = ring

    def peek(self):
        return self.tokens[self.idx]

    def advance(self):
        tok = self.tokens[self.idx]
        self.idx += 1
        return tok

    def expect_op(self, symbol: str):
        kind, value, pos = self.peek()
        if kind != "op" or value != symbol:
            raise PolyParseError(f"expected {symbol!r}", pos)
        return self.advance()

    def parse(self) -> Polynomial:
        poly = self.expr()
        kind, value, pos = self.peek()
        if kind != "end":
            raise PolyParseError(f"unexpected {value!r}", pos)
        return poly

    def expr(self) -> Polynomial:
        poly = self.term()
        while True:
            kind, value, _ = self.peek()
            if kind == "op" and value in "+-":
                self.advance()
                rhs = self.term()
                poly = poly + rhs if value == "+" else poly - rhs
            else:
                return poly

    def term(self) -> Polynomial:
        poly = self.unary()
        while True:
            kind, value, pos = self.peek()
            if kind == "op" and value == "*":
                self.advance()
                poly = poly * self.unary()
            elif kind in ("int", "name") or (kind == "op" and value == "("):
                raise PolyParseError("implicit multiplication is not allowed", pos)
            else:
                return poly

    def unary(self) -> Polynomial:
        sign = 1
        while True:
            kind, value, _ = self.peek()
            if kind == "op" and value in "+-":
                self.advance()
                if value == "-":
                    sign = -sign
            else:
                break
        poly = self.power()
        return poly if sign > 0 else -poly

    def power(self) -> Polynomial:
        poly = self.atom()
        kind, value, _ = self.peek()
        if kind == "op" and value == "^":
            self.advance()
            kind, value, pos = self.peek()
            if kind != "int":
                raise PolyParseError("exponent must be a non-negative integer", pos)
            self.advance()
            poly = poly**value
        return poly

    def atom(self) -> Polynomial:
        kind, value, pos = self.advance()
        if kind == "int":
            nkind, nvalue, npos = self.peek()
            if nkind == "op" and nvalue == "/":
                self.advance()
                dkind, dvalue, dpos = self.peek()
                if dkind != "int":
                    raise PolyParseError("expected integer denominator", dpos)
                self.advance()
                if dvalue == 0:
                    raise PolyParseError("zero denominator", dpos)
                return Polynomial.constant(self.ring, QQ(value) / QQ(dvalue))
            return Polynomial.constant(self.ring, value)
        if kind == "name":
            try:
                index = self.ring.index_of(value)
            except KeyError:
                raise PolyParseError(f"unknown variable {value!r}", pos) from None
            return Polynomial.variable(self.ring, index)
        if kind == "op" and value == "(":
            poly = self.expr()
            self.expect_op(")")
            return poly
        raise PolyParseError("expected a constant, variable or '('", pos)


def parse_poly(text: str, ring: Ring) -> Polynomial:
    """Parse an expression in the tagged ring's variables."""
    return _Parser(text, ring).parse()


def poly_to_text(a: Polynomial) -> str:
    """Canonical form: terms in descending graded-lex order, explicit * and ^."""
    if a.is_zero():
        return "0"
    variables = a.ring.variables
    pieces = []
    for mono, coeff in sorted(a.items(), key=lambda mc: grlex_key(mc[0]), reverse=True):
        factors = []
        for name, e in zip(variables, mono):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        mag = coeff if coeff > 0 else -coeff
        if not factors:
            body = str(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = "*".join([str(mag)] + factors)
        pieces.append(("-" if coeff < 0 else "+", body))
    sign, body = pieces[0]
    out = body if sign == "+" else f"-{body}"
    for sign, body in pieces[1:]:
        out += f" {sign} {body}"
    return out
