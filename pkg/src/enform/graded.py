"""Graded commutative polynomial algebra with Koszul-sign normal forms.

Elements are finite sums of (Polynomial coefficient) x (monomial in graded
generators).  Generators carry integer degrees; parity is degree mod 2, odd
generators square to zero, even generators may appear with multiplicity.
Degree-zero *base coordinates* are never generators -- they live inside the
Polynomial coefficients -- but degree-zero (and, in low-degree phase spaces,
negative-degree) *fiber* generators are allowed.

Sign convention: moving generator g past generator h multiplies by
(-1)^(|g||h|).  A monomial is stored as a non-decreasing tuple of generator
indices into its context (one entry per factor, so even powers appear as
repeats), with the sign accumulated by sorting absorbed into the coefficient.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

from .poly import Polynomial, Scalar

__all__ = [
    "GradedGenerator",
    "GradedContext",
    "GradedElement",
    "Derivation",
    "ContextMismatch",
]


class ContextMismatch(ValueError):
    pass


@dataclass(frozen=True)
class GradedGenerator:
    name: str
    degree: int

    @property
    def parity(self) -> int:
        return self.degree & 1

    def __str__(self) -> str:
        return self.name


class GradedContext:
    """Ordered generator list plus the base coordinate names.

    The stored generator order *is* the canonical monomial order; builders in
    this package sort generators by (degree, name) so printing is stable.
    """

    __slots__ = ("generators", "base_vars", "_index")

    def __init__(self, generators: Sequence[GradedGenerator], base_vars: Sequence[str]):
        generators = tuple(generators)
        base_vars = tuple(base_vars)
        names = [g.name for g in generators]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate generator names: {names}")
        if set(names) & set(base_vars):
            raise ValueError("generator names collide with base coordinates")
        self.generators = generators
        self.base_vars = base_vars
        self._index = {g.name: i for i, g in enumerate(generators)}

    def index_of(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"no generator named {name!r}") from None

    def generator(self, name: str) -> GradedGenerator:
        return self.generators[self.index_of(name)]

    def degree_of_index(self, i: int) -> int:
        return self.generators[i].degree

    def __eq__(self, other):
        return (
            isinstance(other, GradedContext)
            and self.generators == other.generators
            and self.base_vars == other.base_vars
        )

    def __hash__(self):
        return hash((self.generators, self.base_vars))

    def __repr__(self):
        gens = ", ".join(f"{g.name}:{g.degree}" for g in self.generators)
        return f"GradedContext([{gens}]; base={list(self.base_vars)})"


Monomial = tuple  # non-decreasing tuple of generator indices


def _sort_word(ctx: GradedContext, word: Sequence[int]):
    """Sort a generator word into canonical order.

    Returns (sign, tuple) or None when an odd generator repeats.
    Insertion sort; each adjacent swap of generators g, h contributes
    (-1)^(|g||h|).
    """
    word = list(word)
    sign = 1
    parities = [ctx.generators[i].parity for i in word]
    for i in range(1, len(word)):
        j = i
        while j > 0 and word[j - 1] > word[j]:
            if parities[j - 1] & parities[j]:
                sign = -sign
            word[j - 1], word[j] = word[j], word[j - 1]
            parities[j - 1], parities[j] = parities[j], parities[j - 1]
            j -= 1
    for a, b in zip(word, word[1:]):
        if a == b and ctx.generators[a].parity:
            return None
    return sign, tuple(word)


def _merge_words(ctx: GradedContext, m1: Monomial, m2: Monomial):
    """Merge two canonical words; returns (sign, word) or None if zero."""
    if not m1:
        return 1, m2
    if not m2:
        return 1, m1
    out = []
    sign = 1
    # odd-count suffix for m1: odd1[i] = number of odd generators in m1[i:]
    odd1 = [0] * (len(m1) + 1)
    for i in range(len(m1) - 1, -1, -1):
        odd1[i] = odd1[i + 1] + ctx.generators[m1[i]].parity
    i = j = 0
    while i < len(m1) and j < len(m2):
        if m1[i] <= m2[j]:
            out.append(m1[i])
            i += 1
        else:
            g = m2[j]
            if ctx.generators[g].parity and (odd1[i] & 1):
                sign = -sign
            out.append(g)
            j += 1
    out.extend(m1[i:])
    out.extend(m2[j:])
    for a, b in zip(out, out[1:]):
        if a == b and ctx.generators[a].parity:
            return None
    return sign, tuple(out)


def _word_degree(ctx: GradedContext, word: Monomial) -> int:
    return sum(ctx.generators[i].degree for i in word)


class GradedElement:
    """Normal-form sum of Polynomial-coefficient graded monomials."""

    __slots__ = ("context", "terms")

    def __init__(
        self,
        context: GradedContext,
        terms: Union[Mapping[Monomial, Polynomial], Iterable[tuple]] = (),
    ):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Monomial, Polynomial] = {}
        for word, coeff in items:
            word = tuple(word)
            coeff = coeff.embed(context.base_vars) if coeff.variables != context.base_vars else coeff
            prev = acc.get(word)
            coeff = coeff if prev is None else prev + coeff
            if coeff.is_zero():
                acc.pop(word, None)
            else:
                acc[word] = coeff
        object.__setattr__(self, "context", context)
        object.__setattr__(self, "terms", acc)

    def __setattr__(self, name, value):  # pragma: no cover - defensive
        raise AttributeError("GradedElement is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, context: GradedContext) -> "GradedElement":
        return cls(context)

    @classmethod
    def from_poly(cls, context: GradedContext, p: Polynomial) -> "GradedElement":
        return cls(context, {(): p.embed(context.base_vars)})

    @classmethod
    def from_scalar(cls, context: GradedContext, c: Scalar) -> "GradedElement":
        return cls.from_poly(context, Polynomial.constant(context.base_vars, c))

    @classmethod
    def generator(cls, context: GradedContext, name: str) -> "GradedElement":
        i = context.index_of(name)
        return cls(context, {(i,): Polynomial.constant(context.base_vars, 1)})

    @classmethod
    def from_word(
        cls, context: GradedContext, coeff: Polynomial, word: Sequence[int]
    ) -> "GradedElement":
        """Build coeff * (product of generators in the given order)."""
        sorted_ = _sort_word(context, word)
        if sorted_ is None:
            return cls.zero(context)
        sign, canon = sorted_
        return cls(context, {canon: coeff * sign})

    # -- queries -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def degrees(self) -> tuple:
        """Sorted tuple of distinct term degrees (empty for zero)."""
        return tuple(sorted({_word_degree(self.context, w) for w in self.terms}))

    def degree_of(self):
        """The common degree of all terms, or None (zero or mixed)."""
        degs = self.degrees()
        return degs[0] if len(degs) == 1 else None

    def momentum_multiplicity(self, momentum_indices) -> int:
        """Max number of factors from the given index set in any term."""
        if not self.terms:
            return 0
        s = set(momentum_indices)
        return max(sum(1 for i in w if i in s) for w in self.terms)

    def coefficient(self, word: Sequence[int]) -> Polynomial:
        sorted_ = _sort_word(self.context, word)
        zero = Polynomial.zero(self.context.base_vars)
        if sorted_ is None:
            return zero
        sign, canon = sorted_
        return self.terms.get(canon, zero) * sign

    # -- arithmetic --------------------------------------------------------

    def _check(self, other: "GradedElement"):
        if self.context != other.context:
            raise ContextMismatch("elements live in different generator contexts")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = GradedElement.from_scalar(self.context, other)
        if not isinstance(other, GradedElement):
            return NotImplemented
        self._check(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            s = out.get(w)
            s = c if s is None else s + c
            if s.is_zero():
                out.pop(w, None)
            else:
                out[w] = s
        return GradedElement(self.context, out)

    __radd__ = __add__

    def __neg__(self):
        return GradedElement(self.context, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = GradedElement.from_scalar(self.context, other)
        if not isinstance(other, GradedElement):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Polynomial)):
            return GradedElement(
                self.context, {w: c * other for w, c in self.terms.items()}
            )
        if not isinstance(other, GradedElement):
            return NotImplemented
        self._check(other)
        ctx = self.context
        out: dict[Monomial, Polynomial] = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                merged = _merge_words(ctx, w1, w2)
                if merged is None:
                    continue
                sign, word = merged
                c = c1 * c2 * sign
                prev = out.get(word)
                c = c if prev is None else prev + c
                if c.is_zero():
                    out.pop(word, None)
                else:
                    out[word] = c
        return GradedElement(ctx, out)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, Polynomial)):
            return self * other  # scalars and degree-0 coefficients commute
        return NotImplemented

    # -- substitution ------------------------------------------------------

    def drop_generators(self, indices) -> "GradedElement":
        """Substitute zero for every generator in the index set."""
        s = set(indices)
        return GradedElement(
            self.context,
            {w: c for w, c in self.terms.items() if not (s & set(w))},
        )

    def map_context(self, new_context: GradedContext) -> "GradedElement":
        """Reinterpret in a context containing the same-named generators."""
        mapping = {
            i: new_context.index_of(g.name) for i, g in enumerate(self.context.generators)
        }
        out = GradedElement.zero(new_context)
        for w, c in self.terms.items():
            out = out + GradedElement.from_word(
                new_context, c.embed(new_context.base_vars), [mapping[i] for i in w]
            )
        return out

    # -- comparison and printing -------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = GradedElement.from_scalar(self.context, other)
        if not isinstance(other, GradedElement):
            return NotImplemented
        return self.context == other.context and self.terms == other.terms

    def __hash__(self):
        return hash((self.context, tuple(sorted(self.terms.items(), key=lambda kv: kv[0]))))

    def _word_str(self, word: Monomial) -> str:
        parts = []
        i = 0
        while i < len(word):
            j = i
            while j < len(word) and word[j] == word[i]:
                j += 1
            name = self.context.generators[word[i]].name
            parts.append(name if j - i == 1 else f"{name}^{j - i}")
            i = j
        return "*".join(parts)

    def __str__(self):
        if not self.terms:
            return "0"
        chunks = []
        for word in sorted(self.terms, key=lambda w: (len(w), w)):
            coeff = self.terms[word]
            mono = self._word_str(word)
            cs = str(coeff)
            negated = False
            if len(coeff.items()) == 1:
                if cs.startswith("-"):
                    negated = True
                    cs = cs[1:]
                if not mono:
                    body = cs
                elif cs == "1":
                    body = mono
                else:
                    body = f"{cs}*{mono}"
            else:
                body = f"({cs})*{mono}" if mono else f"({cs})"
            chunks.append(("-" if negated else "+", body))
        sign, body = chunks[0]
        out = body if sign == "+" else "-" + body
        for sign, body in chunks[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"GradedElement({self})"


class Derivation:
    """A graded derivation given by its action on base coordinates and
    generators, extended by the graded Leibniz rule.

    Passing the derivation (of degree d) over a prefix of degree k costs
    (-1)^(dk); the Polynomial coefficient has degree zero and costs nothing.
    """

    __slots__ = ("context", "degree", "base_images", "gen_images")

    def __init__(
        self,
        context: GradedContext,
        degree: int,
        base_images: Sequence[GradedElement],
        gen_images: Sequence[GradedElement],
    ):
        if len(base_images) != len(context.base_vars):
            raise ValueError("one image per base coordinate required")
        if len(gen_images) != len(context.generators):
            raise ValueError("one image per generator required")
        self.context = context
        self.degree = degree
        self.base_images = tuple(base_images)
        self.gen_images = tuple(gen_images)

    def __call__(self, e: GradedElement) -> GradedElement:
        if e.context != self.context:
            raise ContextMismatch("element context does not match derivation")
        ctx = self.context
        out = GradedElement.zero(ctx)
        one = Polynomial.constant(ctx.base_vars, 1)
        for word, coeff in e.terms.items():
            word_elem = GradedElement(ctx, {word: one})
            # action on the coefficient
            for i, var in enumerate(ctx.base_vars):
                img = self.base_images[i]
                if img.is_zero():
                    continue
                d = coeff.diff(var)
                if d.is_zero():
                    continue
                out = out + (img * d) * word_elem
            # action on each generator position
            prefix_parity = 0
            for p, g in enumerate(word):
                img = self.gen_images[g]
                if not img.is_zero():
                    sign = -1 if (self.degree & 1) and (prefix_parity & 1) else 1
                    prefix = GradedElement(ctx, {tuple(word[:p]): coeff * sign})
                    suffix = GradedElement(ctx, {tuple(word[p + 1:]): one})
                    out = out + prefix * img * suffix
                prefix_parity ^= ctx.generators[g].parity
        return out

    def compose_square(self) -> "_SquaredDerivation":
        return _SquaredDerivation(self)


class _SquaredDerivation:
    """Apply a derivation twice; used for nilpotency residuals."""

    def __init__(self, d: Derivation):
        self.d = d

    def __call__(self, e: GradedElement) -> GradedElement:
        return self.d(self.d(e))
