"""Canonical graded symplectic phase spaces and their Poisson calculus.

A phase space is a collection of conjugate pairs: each base coordinate x^i is
paired with a momentum generator, and each fiber coordinate generator is
paired with its momentum generator, all pair degrees summing to the symplectic
form degree N.  The bracket is the biderivation determined by

    {coordinate, momentum} = +1                  (same pair, that order)
    {f, g} = -(-1)^((|f|-N)(|g|-N)) {g, f}       (graded antisymmetry)
    {f, gh} = {f, g} h + (-1)^((|f|-N)|g|) g {f, h}   (right Leibniz)

together with bilinearity; brackets of any other generator pair vanish, and
on polynomial coefficients {f(x), m_i} = df/dx^i for the momentum m_i of x^i.
The displayed coordinate relations of every degree pattern used in this
package are pinned against this rule in the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .graded import (
    ContextMismatch,
    Derivation,
    GradedContext,
    GradedElement,
    GradedGenerator,
)
from .poly import Polynomial

__all__ = [
    "PhaseSpace",
    "TwistError",
    "poisson_bracket",
    "hamiltonian_derivation",
    "twist",
    "project_to_base",
    "derived_bracket",
]


class TwistError(ValueError):
    pass


def _parity_sign(exponent: int) -> int:
    return -1 if exponent & 1 else 1


@dataclass(frozen=True)
class PhaseSpace:
    """Canonical pairs over a shared graded context.

    base_momenta[i] is the momentum generator conjugate to base_vars[i];
    fiber_pairs lists (coordinate generator, momentum generator).
    """

    base_vars: tuple
    base_momenta: tuple
    fiber_pairs: tuple
    degree: int
    context: GradedContext = field(compare=False)

    @staticmethod
    def build(
        base_vars: Sequence[str],
        base_momenta: Sequence[GradedGenerator],
        fiber_pairs: Sequence[tuple],
        degree: int,
    ) -> "PhaseSpace":
        base_vars = tuple(base_vars)
        base_momenta = tuple(base_momenta)
        fiber_pairs = tuple((c, m) for c, m in fiber_pairs)
        if len(base_vars) != len(base_momenta):
            raise ValueError("one momentum per base coordinate required")
        for m in base_momenta:
            if m.degree != degree:
                raise ValueError(
                    f"momentum {m.name} of a degree-0 coordinate must have degree {degree}"
                )
        for c, m in fiber_pairs:
            if c.degree + m.degree != degree:
                raise ValueError(
                    f"pair ({c.name}, {m.name}) degrees {c.degree}+{m.degree} != {degree}"
                )
        gens = list(base_momenta)
        for c, m in fiber_pairs:
            gens.extend((c, m))
        gens.sort(key=lambda g: (g.degree, g.name))
        ctx = GradedContext(gens, base_vars)
        return PhaseSpace(base_vars, base_momenta, fiber_pairs, degree, ctx)

    # -- lookups -----------------------------------------------------------

    def momentum_indices(self) -> frozenset:
        idx = {self.context.index_of(m.name) for m in self.base_momenta}
        idx |= {self.context.index_of(m.name) for _, m in self.fiber_pairs}
        return frozenset(idx)

    def _tables(self):
        # momentum index -> base var name, and generator-pair table
        base_mom = {
            self.context.index_of(m.name): v
            for v, m in zip(self.base_vars, self.base_momenta)
        }
        coord_of = {}
        mom_of = {}
        for c, m in self.fiber_pairs:
            ci, mi = self.context.index_of(c.name), self.context.index_of(m.name)
            mom_of[ci] = mi
            coord_of[mi] = ci
        return base_mom, mom_of, coord_of

    def gen(self, name: str) -> GradedElement:
        return GradedElement.generator(self.context, name)

    def bracket_sign_table(self):
        """Signed {a, b} entries for both orders of every conjugate pair."""
        n = self.degree
        rows = []
        for v, m in zip(self.base_vars, self.base_momenta):
            rows.append((v, m.name, 1))
            rows.append((m.name, v, -_parity_sign((m.degree - n) * (0 - n))))
        for c, m in self.fiber_pairs:
            rows.append((c.name, m.name, 1))
            rows.append((m.name, c.name, -_parity_sign((m.degree - n) * (c.degree - n))))
        return tuple(rows)


class _BracketEngine:
    def __init__(self, ps: PhaseSpace):
        self.ps = ps
        self.ctx = ps.context
        self.n = ps.degree
        self.base_mom, self.mom_of, self.coord_of = ps._tables()
        self.one = Polynomial.constant(self.ctx.base_vars, 1)
        self.zero_elem = GradedElement.zero(self.ctx)

    def elem(self, coeff: Polynomial, word) -> GradedElement:
        if coeff.is_zero():
            return self.zero_elem
        return GradedElement(self.ctx, {tuple(word): coeff})

    def gen_degree(self, i: int) -> int:
        return self.ctx.generators[i].degree

    def term_degree(self, word) -> int:
        return sum(self.gen_degree(i) for i in word)

    # elementary brackets --------------------------------------------------

    def poly_gen(self, p: Polynomial, v: int) -> GradedElement:
        var = self.base_mom.get(v)
        if var is None:
            return self.zero_elem
        return self.elem(p.diff(var), ())

    def gen_gen(self, u: int, v: int) -> GradedElement:
        if self.mom_of.get(u) == v:
            return self.elem(self.one, ())
        if self.coord_of.get(u) == v:
            du, dv = self.gen_degree(u), self.gen_degree(v)
            s = -_parity_sign((du - self.n) * (dv - self.n))
            return self.elem(self.one * s, ())
        return self.zero_elem

    def gen_poly(self, u: int, q: Polynomial) -> GradedElement:
        var = self.base_mom.get(u)
        if var is None:
            return self.zero_elem
        du = self.gen_degree(u)
        s = -_parity_sign((du - self.n) * (0 - self.n))
        return self.elem(q.diff(var) * s, ())

    # recursive reduction --------------------------------------------------

    def poly_word(self, p: Polynomial, wg) -> GradedElement:
        """{p(x), word} via the right Leibniz rule."""
        if not wg:
            return self.zero_elem
        v, rest = wg[0], wg[1:]
        out = self.poly_gen(p, v) * self.elem(self.one, rest)
        tail = self.poly_word(p, rest)
        if not tail.is_zero():
            sign = _parity_sign((0 - self.n) * self.gen_degree(v))
            out = out + self.elem(self.one * sign, (v,)) * tail
        return out

    def single_term(self, u: int, cg: Polynomial, wg) -> GradedElement:
        """{u, cg * word} for a single generator u."""
        # cg is degree 0: {u, cg * w} = {u, cg} w + cg {u, w}
        out = self.gen_poly(u, cg) * self.elem(self.one, wg)
        rest = self.gen_word(u, wg)
        if not rest.is_zero():
            out = out + rest * cg
        return out

    def gen_word(self, u: int, wg) -> GradedElement:
        if not wg:
            return self.zero_elem
        v, rest = wg[0], wg[1:]
        out = self.gen_gen(u, v) * self.elem(self.one, rest)
        tail = self.gen_word(u, rest)
        if not tail.is_zero():
            du = self.gen_degree(u)
            sign = _parity_sign((du - self.n) * self.gen_degree(v))
            out = out + self.elem(self.one * sign, (v,)) * tail
        return out

    def term_term(self, cf: Polynomial, wf, cg: Polynomial, wg) -> GradedElement:
        """{cf * wf, cg * wg} by peeling the last factor of the first term."""
        if wf:
            u = wf[-1]
            head_c, head_w = cf, wf[:-1]
            t1 = self.elem(head_c, head_w) * self.single_term(u, cg, wg)
            inner = self.term_term(head_c, head_w, cg, wg)
            if inner.is_zero():
                return t1
            # the coefficient cg has graded degree 0, so the term degree is
            # carried entirely by the generator word
            sign = _parity_sign(self.gen_degree(u) * (self.term_degree(wg) - self.n))
            return t1 + (inner * self.elem(self.one * sign, (u,)))
        # first term is a pure polynomial
        if not wg:
            return self.zero_elem
        return self.poly_word(cf, wg) * cg


def poisson_bracket(f: GradedElement, g: GradedElement, ps: PhaseSpace) -> GradedElement:
    """Graded Poisson bracket {f, g} of the canonical symplectic structure."""
    if f.context != ps.context or g.context != ps.context:
        raise ContextMismatch("arguments must live in the phase-space context")
    eng = _BracketEngine(ps)
    out = GradedElement.zero(ps.context)
    for wf, cf in f.terms.items():
        for wg, cg in g.terms.items():
            out = out + eng.term_term(cf, wf, cg, wg)
    return out


def hamiltonian_derivation(h: GradedElement, ps: PhaseSpace) -> Derivation:
    """The derivation g -> {h, g}, tabulated on coordinates and generators."""
    ctx = ps.context
    deg = h.degree_of()
    d = (deg - ps.degree) if deg is not None else 0
    base_images = [
        poisson_bracket(h, GradedElement.from_poly(ctx, Polynomial.variable(ctx.base_vars, v)), ps)
        for v in ctx.base_vars
    ]
    gen_images = [
        poisson_bracket(h, GradedElement.generator(ctx, g.name), ps)
        for g in ctx.generators
    ]
    return Derivation(ctx, d, base_images, gen_images)


def project_to_base(f: GradedElement, ps: PhaseSpace) -> GradedElement:
    """Substitute zero for every momentum generator (the projection pullback
    inverse); idempotent."""
    if f.context != ps.context:
        raise ContextMismatch("argument must live in the phase-space context")
    return f.drop_generators(ps.momentum_indices())


def twist(phi: GradedElement, f: GradedElement, ps: PhaseSpace) -> GradedElement:
    """exp(ad_phi) f = f + {f, phi} + {{f, phi}, phi}/2 + ...

    phi must be homogeneous of the phase-space degree (zero counts).  The
    iteration stops when a bracket vanishes; if it has not vanished after
    1 + (momentum multiplicity of f) brackets, phi is ineligible and a
    TwistError is raised.
    """
    if phi.context != ps.context or f.context != ps.context:
        raise ContextMismatch("arguments must live in the phase-space context")
    if not phi.is_zero():
        deg = phi.degree_of()
        if deg != ps.degree:
            raise TwistError(
                f"twist requires a degree-{ps.degree} function, got degree {deg}"
            )
    bound = 1 + f.momentum_multiplicity(ps.momentum_indices())
    out = f
    cur = f
    factorial = 1
    for k in range(1, bound + 1):
        cur = poisson_bracket(cur, phi, ps)
        if cur.is_zero():
            return out
        factorial *= k
        out = out + cur * Fraction(1, factorial)
    raise TwistError(
        f"twist did not terminate within {bound} brackets; phi is ineligible"
    )


def derived_bracket(
    f: GradedElement, g: GradedElement, theta: GradedElement, ps: PhaseSpace
) -> GradedElement:
    """project_to_base({{f, theta}, g}) for momentum-free f, g."""
    momenta = ps.momentum_indices()
    for name, e in (("first", f), ("second", g)):
        if e.momentum_multiplicity(momenta):
            raise ValueError(f"{name} argument must be momentum-free")
    inner = poisson_bracket(poisson_bracket(f, theta, ps), g, ps)
    return project_to_base(inner, ps)
