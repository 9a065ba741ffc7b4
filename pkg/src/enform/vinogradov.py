"""The extended bracket geometry on sections (u, alpha) of the bundle plus
its (n-1)-st dual exterior power: inner product, the non-skew bracket, the
cyclic Jacobi-type identity, and the graph criterion.

The bracket implemented here is

    [[u + a, v + b]] = [u, v] + L_u b - iota_v d_E a - iota_u iota_v T,

with T the full anchor contraction of the closed (n+1)-form.  With this sign
the graph of an n-form J is involutive exactly when d_E J = -T, i.e. exactly
when J passes the compatibility check; the graph residual is
-iota_u iota_v (d_E J + T).  (The opposite sign for the T-term would flip the
criterion to d_E J = +T; the conventions document records this choice.)
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from random import Random
from typing import Union

from .algebroid import (
    LieAlgebroidData,
    check_lie_algebroid,
    e_differential,
    e_lie_derivative,
    interior_product,
    section_bracket,
)
from .compat import PreNPlectic, _closedness_verdict, _omega_of, iota_rho_top
from .forms import BaseForm, EForm, ESection, FormError
from .poly import Polynomial
from .verdict import Verdict

__all__ = [
    "VinSection",
    "vin_inner",
    "dorfman",
    "loday_residual",
    "cyclic_jacobiator",
    "check_leibniz",
    "check_higher_dirac",
    "graph_section",
]


@dataclass(frozen=True)
class VinSection:
    """A section u + alpha with alpha of arity n-1."""

    vec: ESection
    form: EForm

    def __post_init__(self):
        if self.vec.rank != self.form.rank:
            raise FormError("vector and form parts live over different ranks")

    @property
    def n(self) -> int:
        return self.form.arity + 1

    def __add__(self, other):
        return VinSection(self.vec + other.vec, self.form + other.form)

    def __sub__(self, other):
        return VinSection(self.vec - other.vec, self.form - other.form)

    def is_zero(self) -> bool:
        return self.vec.is_zero() and self.form.is_zero()

    def __str__(self):
        return f"{self.vec} + {self.form}"


def vin_inner(s1: VinSection, s2: VinSection) -> EForm:
    """Symmetric pairing <u+a, v+b> = iota_u b + iota_v a (arity n-2)."""
    if s1.n != s2.n:
        raise FormError("sections have different degree parameters")
    if s1.n < 2:
        raise FormError("the pairing needs degree parameter at least 2")
    return interior_product(s1.vec, s2.form) + interior_product(s2.vec, s1.form)


def dorfman(
    s1: VinSection,
    s2: VinSection,
    omega: Union[PreNPlectic, BaseForm],
    data: LieAlgebroidData,
) -> VinSection:
    """The non-skew bracket; see the module docstring for the sign of the
    contraction term."""
    form = _omega_of(omega)
    n = s1.n
    if form.arity != n + 1:
        raise FormError(f"closed form arity {form.arity} does not match n+1 = {n + 1}")
    u, a = s1.vec, s1.form
    v, b = s2.vec, s2.form
    vec = section_bracket(data, u, v)
    t = iota_rho_top(form, data)
    out_form = e_lie_derivative(u, b, data) - interior_product(v, e_differential(a, data))
    out_form = out_form - interior_product(u, interior_product(v, t))
    return VinSection(vec, out_form)


def _random_poly(rng: Random, coords, deg=2) -> Polynomial:
    terms = {}
    for _ in range(rng.randint(1, 2)):
        e = [0] * len(coords)
        for _ in range(rng.randint(0, deg)):
            e[rng.randrange(len(coords))] += 1
        key = tuple(e)
        terms[key] = terms.get(key, 0) + rng.randint(-3, 3)
    return Polynomial(coords, terms)


def _random_section(rng: Random, data: LieAlgebroidData, n: int) -> VinSection:
    vec = ESection(data.coords, [_random_poly(rng, data.coords) for _ in range(data.rank)])
    form = EForm(
        n - 1,
        data.rank,
        data.coords,
        {idx: _random_poly(rng, data.coords) for idx in combinations(range(data.rank), n - 1)},
    )
    return VinSection(vec, form)


def _frame_sections(data: LieAlgebroidData, n: int):
    zero_form = EForm.zero(n - 1, data.rank, data.coords)
    zero_vec = ESection.zero(data.coords, data.rank)
    one = Polynomial.constant(data.coords, 1)
    for a in range(data.rank):
        yield VinSection(data.frame(a), zero_form)
    for idx in combinations(range(data.rank), n - 1):
        yield VinSection(zero_vec, EForm(n - 1, data.rank, data.coords, {idx: one}))


def loday_residual(
    s1: VinSection,
    s2: VinSection,
    s3: VinSection,
    omega: Union[PreNPlectic, BaseForm],
    data: LieAlgebroidData,
) -> VinSection:
    """Defect of the Leibniz rule
    [[s1, [[s2, s3]] ]] - [[ [[s1, s2]], s3]] - [[s2, [[s1, s3]] ]]."""
    form = _omega_of(omega)
    lhs = dorfman(s1, dorfman(s2, s3, form, data), form, data)
    rhs = dorfman(dorfman(s1, s2, form, data), s3, form, data) + dorfman(
        s2, dorfman(s1, s3, form, data), form, data
    )
    return lhs - rhs


def cyclic_jacobiator(
    s1: VinSection,
    s2: VinSection,
    s3: VinSection,
    omega: Union[PreNPlectic, BaseForm],
    data: LieAlgebroidData,
) -> VinSection:
    """Cyclic sum of left-nested double brackets.

    Vanishes on frame (constant) sections but not for general polynomial
    coefficients, where the symmetric part of the bracket contributes exact
    terms; reported as a diagnostic, never as a verdict.
    """
    form = _omega_of(omega)
    total = dorfman(dorfman(s1, s2, form, data), s3, form, data)
    total = total + dorfman(dorfman(s2, s3, form, data), s1, form, data)
    total = total + dorfman(dorfman(s3, s1, form, data), s2, form, data)
    return total


def check_leibniz(
    omega: Union[PreNPlectic, BaseForm],
    data: LieAlgebroidData,
    n: int,
    sample_budget: int = 50,
    rng: Random = None,
) -> Verdict:
    """Leibniz rule of the bracket, exhaustively on frame triples and on
    randomized polynomial-coefficient triples.

    The verdict is on the left Leibniz rule; the cyclic three-term sum is
    additionally reported on frame triples (where it holds), since for
    polynomial coefficients the symmetric defect of the bracket obstructs it.
    """
    if rng is None:
        rng = Random(0)
    form = _omega_of(omega)

    residuals = []
    cyclic_residuals = []
    frames = list(_frame_sections(data, n))
    for i, s1 in enumerate(frames):
        for j, s2 in enumerate(frames):
            for k, s3 in enumerate(frames):
                r = loday_residual(s1, s2, s3, form, data)
                if not r.is_zero():
                    residuals.append(f"frame triple ({i},{j},{k}): {r}")
                c = cyclic_jacobiator(s1, s2, s3, form, data)
                if not c.is_zero():
                    cyclic_residuals.append(f"frame triple ({i},{j},{k}): {c}")
    frame_v = Verdict.from_residuals("Leibniz rule on frame triples", residuals)
    cyclic_v = Verdict.from_residuals(
        "cyclic three-term sum on frame triples", cyclic_residuals
    )
    residuals = []
    for t in range(sample_budget):
        s1 = _random_section(rng, data, n)
        s2 = _random_section(rng, data, n)
        s3 = _random_section(rng, data, n)
        r = loday_residual(s1, s2, s3, form, data)
        if not r.is_zero():
            residuals.append(f"random triple #{t}: {r}")
    random_v = Verdict.from_residuals("Leibniz rule on random triples", residuals)
    return Verdict.combine(
        "Leibniz bracket identity",
        (
            check_lie_algebroid(data),
            _closedness_verdict(form),
            frame_v,
            cyclic_v,
            random_v,
        ),
    )


def graph_section(u: ESection, j: EForm) -> VinSection:
    return VinSection(u, interior_product(u, j))


def check_higher_dirac(
    j: EForm,
    omega: Union[PreNPlectic, BaseForm],
    data: LieAlgebroidData,
    sample_budget: int = 20,
    rng: Random = None,
) -> Verdict:
    """Isotropy and involutivity of the graph sections u + iota_u J.

    Involutivity is decided against the closed-form target
    [u, v] + iota_[u,v] J, which is equivalent to membership since the graph
    is free over sections.
    """
    if rng is None:
        rng = Random(0)
    form = _omega_of(omega)
    n = j.arity
    if form.arity != n + 1:
        raise FormError("closed form arity must be one more than the graph form arity")

    def sections():
        for a in range(data.rank):
            yield f"frame e{a + 1}", data.frame(a)
        for t in range(sample_budget):
            yield f"random #{t}", ESection(
                data.coords, [_random_poly(rng, data.coords) for _ in range(data.rank)]
            )

    iso_residuals = []
    inv_residuals = []
    pool = list(sections())
    for name_u, u in pool:
        su = graph_section(u, j)
        for name_v, v in pool:
            sv = graph_section(v, j)
            if n >= 2:
                pairing = vin_inner(su, sv)
                if not pairing.is_zero():
                    iso_residuals.append(f"<{name_u}, {name_v}> = {pairing}")
            bracket = dorfman(su, sv, form, data)
            target = graph_section(section_bracket(data, u, v), j)
            resid = bracket - target
            if not resid.is_zero():
                inv_residuals.append(f"[[{name_u}, {name_v}]] - graph([u,v]) = {resid}")
    iso = Verdict.from_residuals("graph isotropy", iso_residuals)
    inv = Verdict.from_residuals("graph involutivity", inv_residuals)
    return Verdict.combine(
        "higher Dirac graph criterion",
        (check_lie_algebroid(data), _closedness_verdict(form), iso, inv),
    )
