"""Catalog of standard example structures used by the tests, the shipped
manifests, and the experiment scripts.

Each builder returns plain data objects; nothing here is required by the
verification machinery itself.
"""

from __future__ import annotations

from .algebroid import LieAlgebroidData, twisted_poisson_algebroid
from .forms import BaseForm, EForm, MixedForm, MultiVector
from .poly import Polynomial, parse_poly

__all__ = [
    "EPSILON3",
    "so3_action_r3",
    "so3_jacobi_breaker",
    "tangent_r2_liouville",
    "tangent_r3",
    "poisson_r2",
    "twisted_poisson_r3",
    "translations_r4",
    "rank2_abelian_r3",
    "so2_momentum_r2",
    "tangent_r4_n3",
]

# Levi-Civita symbol on three indices, 0-based
EPSILON3 = {
    (0, 1, 2): 1, (1, 2, 0): 1, (2, 0, 1): 1,
    (0, 2, 1): -1, (2, 1, 0): -1, (1, 0, 2): -1,
}


def _eps_structure():
    # C^a_{bc} = epsilon_{abc} (cyclically invariant, so index order is moot)
    return [
        [[str(EPSILON3.get((b, c, a), 0)) for c in range(3)] for b in range(3)]
        for a in range(3)
    ]


def so3_action_r3(mutated: bool = False) -> LieAlgebroidData:
    """Rotation algebra acting on 3-space: C^a_{bc} = eps_{abc},
    rho(e_a) = -eps_{abc} x_b d_c.  The mutation negates C^3_{12}, which
    breaks the anchor-morphism identity (the negated constants still satisfy
    the Jacobi identity on their own)."""
    coords = ("x1", "x2", "x3")
    anchor = [["0", "x3", "-x2"], ["-x3", "0", "x1"], ["x2", "-x1", "0"]]
    structure = _eps_structure()
    if mutated:
        structure = [[list(r) for r in plane] for plane in structure]
        structure[2][0][1] = "-1"
        structure[2][1][0] = "1"
    return LieAlgebroidData.from_strings(coords, 3, anchor, structure)


def so3_jacobi_breaker() -> LieAlgebroidData:
    """Point-base algebra whose constants violate the Jacobi identity:
    [e1,e2] = e3 + e1, [e2,e3] = e1, [e3,e1] = e2."""
    coords = ()
    structure = _eps_structure()
    structure = [[list(r) for r in plane] for plane in structure]
    structure[0][0][1] = "1"
    structure[0][1][0] = "-1"
    return LieAlgebroidData.from_strings(coords, 3, [[], [], []], structure)


def tangent_r2_liouville():
    """Tangent algebroid of the plane with the standard area form and its
    primitive: omega = dx1^dx2, J = -x1 e^2 (so d_E J = -omega)."""
    coords = ("x1", "x2")
    data = LieAlgebroidData.from_strings(
        coords, 2, [["1", "0"], ["0", "1"]], [[["0"] * 2] * 2] * 2
    )
    omega = BaseForm(2, coords, {(0, 1): Polynomial.constant(coords, 1)})
    j = EForm(1, 2, coords, {(1,): parse_poly("0-x1", coords)})
    return data, omega, j, 1


def tangent_r3() -> LieAlgebroidData:
    coords = ("x1", "x2", "x3")
    idm = [["1" if i == j else "0" for i in range(3)] for j in range(3)]
    return LieAlgebroidData.from_strings(coords, 3, idm, [[["0"] * 3] * 3] * 3)


def poisson_r2():
    """Constant bivector on the plane; H = 0, J = pi, n = 2."""
    coords = ("x1", "x2")
    pi = MultiVector(2, coords, {(0, 1): Polynomial.constant(coords, 1)})
    data = twisted_poisson_algebroid(pi, None)
    omega = BaseForm.zero(3, coords)
    j = EForm(2, 2, coords, dict(pi.entries))
    return data, omega, j, 2, pi


def twisted_poisson_r3(mutate_j: bool = False):
    """pi = d1^d2 on 3-space with H = x3 dx1^dx2^dx3; J = pi, n = 2.
    The J-mutation adds x2 e^2^e^3, whose differential is nonzero here."""
    coords = ("x1", "x2", "x3")
    pi = MultiVector(2, coords, {(0, 1): Polynomial.constant(coords, 1)})
    h = BaseForm(3, coords, {(0, 1, 2): Polynomial.variable(coords, "x3")})
    data = twisted_poisson_algebroid(pi, h)
    entries = dict(pi.entries)
    j = EForm(2, 3, coords, entries)
    if mutate_j:
        j = j + EForm(2, 3, coords, {(1, 2): Polynomial.variable(coords, "x2")})
    return data, h, j, 2, pi


def translations_r4(mutate_omega: bool = False, mutate_j: bool = False):
    """Rank-3 translation algebroid on 4-space with a nonconstant closed
    3-form; the unique-up-to-closed J solving the compatibility equation is
    J = -x3 x4 e^1^e^2.  Both contraction and differential are nonzero, so
    this fixture pins all sign conventions at n = 2.

    The omega-mutation adds the non-closed term x2 dx1^dx3^dx4."""
    coords = ("x1", "x2", "x3", "x4")
    p = lambda s: parse_poly(s, coords)
    data = LieAlgebroidData.from_strings(
        coords,
        3,
        [["1", "0", "0", "0"], ["0", "1", "0", "0"], ["0", "0", "1", "0"]],
        [[["0"] * 3] * 3] * 3,
    )
    omega = BaseForm(3, coords, {(0, 1, 2): p("x4"), (1, 2, 3): p("x1")})
    if mutate_omega:
        omega = omega + BaseForm(3, coords, {(0, 2, 3): p("x2")})
    j = EForm(2, 3, coords, {(0, 1): p("0-x3*x4")})
    if mutate_j:
        j = j + EForm(2, 3, coords, {(1, 2): p("x1^2")})
    return data, omega, j, 2


def rank2_abelian_r3():
    """Rank-2 abelian algebroid on 3-space (a rotation field and a
    translation field), with the volume form and a hand-solved homotopy
    momentum tower: mu1 in the (1,1) block, mu0 = -(x1^2+x2^2) e^1^e^2."""
    coords = ("x1", "x2", "x3")
    p = lambda s: parse_poly(s, coords)
    data = LieAlgebroidData.from_strings(
        coords, 2, [["0-x2", "x1", "0"], ["0", "0", "1"]], [[["0"] * 2] * 2] * 2
    )
    omega = BaseForm(3, coords, {(0, 1, 2): Polynomial.constant(coords, 1)})
    mu1 = MixedForm(
        1, 1, coords, 2,
        {((2,), (0,)): p("1/2*x1^2+1/2*x2^2"), ((1,), (1,)): p("0-x1")},
    )
    mu0 = MixedForm(0, 2, coords, 2, {((), (0, 1)): p("0-x1^2-x2^2")})
    return data, omega, [mu0, mu1], 2


def so2_momentum_r2():
    """Rotation action on the symplectic plane with its quadratic momentum:
    rho(e) = x1 d2 - x2 d1, omega = dx1^dx2, mu = (x1^2+x2^2)/2."""
    coords = ("x1", "x2")
    data = LieAlgebroidData.from_strings(coords, 1, [["0-x2", "x1"]], [[["0"]]])
    omega = BaseForm(2, coords, {(0, 1): Polynomial.constant(coords, 1)})
    mu = EForm(1, 1, coords, {(0,): parse_poly("1/2*x1^2 + 1/2*x2^2", coords)})
    return data, omega, mu, 1


def tangent_r4_n3(mutate_j: bool = False):
    """Tangent algebroid of 4-space at n = 3 with the volume form;
    J = -x1 dx2^dx3^dx4 solves the compatibility equation."""
    coords = ("x1", "x2", "x3", "x4")
    idm = [["1" if i == j else "0" for i in range(4)] for j in range(4)]
    data = LieAlgebroidData.from_strings(coords, 4, idm, [[["0"] * 4] * 4] * 4)
    omega = BaseForm(4, coords, {(0, 1, 2, 3): Polynomial.constant(coords, 1)})
    j = EForm(3, 4, coords, {(1, 2, 3): parse_poly("0-x1", coords)})
    if mutate_j:
        j = j + EForm(3, 4, coords, {(0, 1, 2): Polynomial.variable(coords, "x4")})
    return data, omega, j, 3
