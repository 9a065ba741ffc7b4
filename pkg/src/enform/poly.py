"""Exact multivariate polynomial arithmetic over the rationals.

Every coefficient function in this package (anchor components, structure
functions, form coefficients) is a ``Polynomial``: a finite sum of monomials
in named base coordinates with ``Fraction`` coefficients.  Exactness is the
point -- every identity check in the package reduces to "normal form equals
zero", with no tolerances anywhere.

The module also owns the expression grammar used by manifests::

    expr   := term (("+" | "-") term)*
    term   := factor ("*" factor)*
    factor := "-" factor | "+" factor | atom ("^" integer)?
    atom   := integer ("/" integer)? | name | "(" expr ")"

Whitespace is insignificant.  Exponents are nonnegative integer literals and
the only division allowed is inside a rational literal such as ``3/2``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

# Coefficient field.  Fraction is always reduced, keeps denominator > 0 and
# represents zero as 0/1, which is exactly the contract we need.
Rational = Fraction

Scalar = Union[int, Fraction]

__all__ = [
    "Rational",
    "Polynomial",
    "PolyError",
    "ParseError",
    "parse_poly",
    "add",
    "mul",
    "scale",
    "partial_derivative",
]


class PolyError(ValueError):
    pass


class ParseError(PolyError):
    """Syntax or validation error in the expression grammar.

    ``offset`` is the 0-based position in the source string at which the
    problem was detected.
    """

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


def _as_fraction(value: Scalar) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"not a rational scalar: {value!r}")


class Polynomial:
    """Immutable polynomial in an ordered list of named variables.

    Terms are stored densely keyed by exponent tuples (one entry per
    variable); zero-coefficient terms are never stored.  Instances with
    different variable lists compare and combine by embedding both into the
    union list, never positionally.
    """

    __slots__ = ("variables", "_terms", "_key")

    def __init__(
        self,
        variables: Sequence[str],
        terms: Union[Mapping[tuple, Scalar], Iterable[tuple]] = (),
    ):
        variables = tuple(variables)
        if len(set(variables)) != len(variables):
            raise PolyError(f"duplicate variable names in {variables}")
        acc: dict[tuple[int, ...], Fraction] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for exps, coeff in items:
            exps = tuple(int(e) for e in exps)
            if len(exps) != len(variables):
                raise PolyError(
                    f"exponent vector {exps} does not match variables {variables}"
                )
            if any(e < 0 for e in exps):
                raise PolyError(f"negative exponent in {exps}")
            c = acc.get(exps, Fraction(0)) + _as_fraction(coeff)
            if c:
                acc[exps] = c
            else:
                acc.pop(exps, None)
        object.__setattr__(self, "variables", variables)
        object.__setattr__(self, "_terms", acc)
        object.__setattr__(self, "_key", None)

    def __setattr__(self, name, value):  # pragma: no cover - defensive
        raise AttributeError("Polynomial is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, variables: Sequence[str]) -> "Polynomial":
        return cls(variables)

    @classmethod
    def constant(cls, variables: Sequence[str], value: Scalar) -> "Polynomial":
        variables = tuple(variables)
        return cls(variables, {(0,) * len(variables): _as_fraction(value)})

    @classmethod
    def variable(cls, variables: Sequence[str], name: str) -> "Polynomial":
        variables = tuple(variables)
        if name not in variables:
            raise PolyError(f"unknown variable {name!r} for {variables}")
        exps = tuple(1 if v == name else 0 for v in variables)
        return cls(variables, {exps: Fraction(1)})

    # -- data access -------------------------------------------------------

    def coefficient(self, exps: Sequence[int]) -> Fraction:
        return self._terms.get(tuple(exps), Fraction(0))

    def items(self):
        """Terms in descending graded-lexicographic order."""
        return sorted(self._terms.items(), key=lambda kv: (sum(kv[0]), kv[0]), reverse=True)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def degree(self) -> int:
        """Total degree; the zero polynomial reports -1."""
        if not self._terms:
            return -1
        return max(sum(e) for e in self._terms)

    def is_constant(self) -> bool:
        return all(sum(e) == 0 for e in self._terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise PolyError(f"not a constant: {self}")
        return self.coefficient((0,) * len(self.variables))

    # -- variable embedding ------------------------------------------------

    def embed(self, variables: Sequence[str]) -> "Polynomial":
        """Reinterpret over a superset variable list (matched by name)."""
        variables = tuple(variables)
        if variables == self.variables:
            return self
        pos = {v: i for i, v in enumerate(variables)}
        missing = [v for v in self.variables if v not in pos]
        if missing:
            raise PolyError(f"cannot embed: {missing} not in {variables}")
        n = len(variables)
        out: dict[tuple[int, ...], Fraction] = {}
        for exps, c in self._terms.items():
            new = [0] * n
            for v, e in zip(self.variables, exps):
                new[pos[v]] = e
            out[tuple(new)] = c
        return Polynomial(variables, out)

    @staticmethod
    def align(p: "Polynomial", q: "Polynomial"):
        if p.variables == q.variables:
            return p, q
        union = list(p.variables) + [v for v in q.variables if v not in p.variables]
        return p.embed(union), q.embed(union)

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(self.variables, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        p, q = Polynomial.align(self, other)
        out = dict(p._terms)
        for exps, c in q._terms.items():
            s = out.get(exps, Fraction(0)) + c
            if s:
                out[exps] = s
            else:
                out.pop(exps, None)
        return Polynomial(p.variables, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.variables, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = _as_fraction(other)
            return Polynomial(self.variables, {e: c * v for e, v in self._terms.items()})
        if not isinstance(other, Polynomial):
            return NotImplemented
        p, q = Polynomial.align(self, other)
        out: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in p._terms.items():
            for e2, c2 in q._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e, Fraction(0)) + c1 * c2
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return Polynomial(p.variables, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise PolyError(f"exponent must be a nonnegative integer, got {n!r}")
        result = Polynomial.constant(self.variables, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def diff(self, name: str) -> "Polynomial":
        """Partial derivative with respect to the named variable."""
        if name not in self.variables:
            raise PolyError(f"unknown variable {name!r} for {self.variables}")
        i = self.variables.index(name)
        out: dict[tuple[int, ...], Fraction] = {}
        for exps, c in self._terms.items():
            e = exps[i]
            if e == 0:
                continue
            new = list(exps)
            new[i] = e - 1
            key = tuple(new)
            s = out.get(key, Fraction(0)) + c * e
            if s:
                out[key] = s
            else:
                out.pop(key, None)
        return Polynomial(self.variables, out)

    # -- comparison --------------------------------------------------------

    def _canonical(self):
        key = self._key
        if key is None:
            key = tuple(
                sorted(
                    (
                        tuple(
                            (v, e)
                            for v, e in zip(self.variables, exps)
                            if e
                        ),
                        c,
                    )
                    for exps, c in self._terms.items()
                )
            )
            object.__setattr__(self, "_key", key)
        return key

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(self.variables, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self._canonical() == other._canonical()

    def __hash__(self):
        return hash(self._canonical())

    # -- printing ----------------------------------------------------------

    def _monomial_str(self, exps) -> str:
        parts = []
        for v, e in zip(self.variables, exps):
            if e == 1:
                parts.append(v)
            elif e > 1:
                parts.append(f"{v}^{e}")
        return "*".join(parts)

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        chunks = []
        for exps, c in self.items():
            mono = self._monomial_str(exps)
            mag = abs(c)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            chunks.append(("-" if c < 0 else "+", body))
        sign, body = chunks[0]
        out = body if sign == "+" else "-" + body
        for sign, body in chunks[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self) -> str:
        return f"Polynomial({self})"


# -- spec-named operation aliases -----------------------------------------


def add(p: Polynomial, q: Polynomial) -> Polynomial:
    return p + q


def mul(p: Polynomial, q: Polynomial) -> Polynomial:
    return p * q


def scale(c: Scalar, p: Polynomial) -> Polynomial:
    return p * _as_fraction(c)


def partial_derivative(p: Polynomial, name: str) -> Polynomial:
    return p.diff(name)


# -- expression parser -----------------------------------------------------

_OPS = set("+-*/^()")


def _tokenize(src: str):
    tokens = []
    i, n = 0, len(src)
    while i < n:
        ch = src[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and src[j].isdigit():
                j += 1
            tokens.append(("num", src[i:j], i))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (src[j].isalnum() or src[j] == "_"):
                j += 1
            tokens.append(("name", src[i:j], i))
            i = j
            continue
        if ch in _OPS:
            tokens.append(("op", ch, i))
            i += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", i)
    tokens.append(("end", "", n))
    return tokens


class _Parser:
    def __init__(self, src: str, variables: Sequence[str]):
        self.src = src
        self.variables = tuple(variables)
        self.tokens = _tokenize(src)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def advance(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect_op(self, op: str):
        kind, value, offset = self.peek()
        if kind != "op" or value != op:
            raise ParseError(f"expected {op!r}", offset)
        return self.advance()

    def parse(self) -> Polynomial:
        result = self.expr()
        kind, value, offset = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected {value!r}", offset)
        return result

    def expr(self) -> Polynomial:
        result = self.term()
        while True:
            kind, value, _ = self.peek()
            if kind == "op" and value in "+-":
                self.advance()
                rhs = self.term()
                result = result + rhs if value == "+" else result - rhs
            else:
                return result

    def term(self) -> Polynomial:
        result = self.factor()
        while True:
            kind, value, _ = self.peek()
            if kind == "op" and value == "*":
                self.advance()
                result = result * self.factor()
            else:
                return result

    def factor(self) -> Polynomial:
        kind, value, offset = self.peek()
        if kind == "op" and value in "+-":
            self.advance()
            inner = self.factor()
            return inner if value == "+" else -inner
        return self.power()

    def power(self) -> Polynomial:
        base = self.atom()
        kind, value, _ = self.peek()
        if kind == "op" and value == "^":
            self.advance()
            kind, value, offset = self.peek()
            if kind == "op" and value == "-":
                raise ParseError("exponent must be a nonnegative integer", offset)
            if kind != "num":
                raise ParseError("exponent must be an integer literal", offset)
            self.advance()
            return base ** int(value)
        return base

    def atom(self) -> Polynomial:
        kind, value, offset = self.advance()
        if kind == "num":
            numerator = int(value)
            k, v, _ = self.peek()
            if k == "op" and v == "/":
                self.advance()
                k, v, off2 = self.peek()
                if k != "num":
                    raise ParseError("denominator must be an integer literal", off2)
                self.advance()
                if int(v) == 0:
                    raise ParseError("zero denominator", off2)
                return Polynomial.constant(self.variables, Fraction(numerator, int(v)))
            return Polynomial.constant(self.variables, numerator)
        if kind == "name":
            if value not in self.variables:
                raise ParseError(f"unknown variable {value!r}", offset)
            return Polynomial.variable(self.variables, value)
        if kind == "op" and value == "(":
            inner = self.expr()
            self.expect_op(")")
            return inner
        raise ParseError(f"unexpected {value!r}" if value else "unexpected end of input", offset)


def parse_poly(src: str, variables: Sequence[str]) -> Polynomial:
    """Parse an expression in the manifest grammar into normal form."""
    return _Parser(src, variables).parse()
