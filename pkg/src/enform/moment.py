"""Connections, frame connections along the anchor, exterior covariant
derivatives, and the verifier cascade for momentum maps, momentum sections,
and homotopy momentum sections.

A connection is stored by its coefficients Gamma^b_{ia} (covariant derivative
of the frame section a in the base direction i, component b).  The dual
action on dual-frame coefficients is (nabla_i mu)_a = d_i mu_a - Gamma^b_{ia}
mu_b, extended as a derivation to antisymmetric blocks.

The cascade verified by ``check_homotopy_momentum_section`` reads, line by
line in base arity k = n, .., 0,

    d^nabla mu_{k-1} + d_E^nabla mu_k  =  - iota_rho^(n+1-k) omega,

with the missing terms dropped at the ends; at k = 0 the last line is the
compatibility equation for mu_0.
"""

from __future__ import annotations

from itertools import combinations
from typing import Sequence, Union

from .algebroid import LieAlgebroidData, check_lie_algebroid, e_differential
from .compat import (
    PreNPlectic,
    _closedness_verdict,
    _omega_of,
    check_compatible,
    iota_rho_k,
)
from .forms import BaseForm, EForm, FormError, MixedForm
from .poly import Polynomial
from .verdict import Verdict

__all__ = [
    "Connection",
    "EConnection",
    "exterior_covariant_derivative",
    "e_exterior_covariant_derivative",
    "dual_pairing_residual",
    "connection_curvature_action",
    "check_momentum_map",
    "check_momentum_section",
    "check_homotopy_momentum_section",
]


class Connection:
    """Coefficients Gamma^b_{ia}: nabla e_a = Gamma^b_{ia} dx^i (x) e_b."""

    __slots__ = ("coords", "rank", "gamma")

    def __init__(self, coords: Sequence[str], rank: int, gamma=None):
        self.coords = tuple(coords)
        self.rank = rank
        dim = len(self.coords)
        if gamma is None:
            zero = Polynomial.zero(self.coords)
            gamma = [[[zero] * rank for _ in range(rank)] for _ in range(dim)]
        gamma = tuple(
            tuple(tuple(p.embed(self.coords) for p in row) for row in plane)
            for plane in gamma
        )
        if len(gamma) != dim or any(
            len(plane) != rank or any(len(row) != rank for row in plane)
            for plane in gamma
        ):
            raise ValueError("gamma must be dim x rank x rank")
        self.gamma = gamma

    def coeff(self, i: int, a: int, b: int) -> Polynomial:
        """Gamma^b_{ia}."""
        return self.gamma[i][a][b]

    @classmethod
    def flat(cls, coords, rank: int) -> "Connection":
        return cls(coords, rank)


class EConnection:
    """Frame connection along the anchor: the canonical one built from a base
    connection, optionally deformed on frame sections by a tensor chi."""

    __slots__ = ("base", "chi")

    def __init__(self, base: Connection, chi=None):
        self.base = base
        rank = base.rank
        if chi is None:
            zero = Polynomial.zero(base.coords)
            chi = [[[zero] * rank for _ in range(rank)] for _ in range(rank)]
        chi = tuple(
            tuple(tuple(p.embed(base.coords) for p in row) for row in plane)
            for plane in chi
        )
        self.chi = chi

    def chi_coeff(self, c: int, a: int, b: int) -> Polynomial:
        """Component of chi(e_a, e_b) on e_c."""
        return self.chi[c][a][b]


def _nabla_on_e_block(conn: Connection, i: int, e_idx, value, alpha_at):
    """(nabla_i value)_{e_idx}: derivative minus one Gamma contraction per
    frame leg."""
    coords = conn.coords
    out = value.diff(coords[i])
    for pos, a in enumerate(e_idx):
        for b in range(conn.rank):
            g = conn.coeff(i, a, b)
            if g.is_zero():
                continue
            replaced = e_idx[:pos] + (b,) + e_idx[pos + 1:]
            out = out - g * alpha_at(replaced)
    return out


def exterior_covariant_derivative(alpha: MixedForm, conn: Connection) -> MixedForm:
    """Raise the base arity by one; reduces to the exterior derivative when
    there are no frame legs."""
    coords = conn.coords
    dim = len(coords)
    out = {}
    for b_idx in combinations(range(dim), alpha.base_arity + 1):
        for e_idx in combinations(range(conn.rank), alpha.e_arity):
            total = Polynomial.zero(coords)
            for pos, i in enumerate(b_idx):
                rest = b_idx[:pos] + b_idx[pos + 1:]
                term = _nabla_on_e_block(
                    conn,
                    i,
                    e_idx,
                    alpha.at(rest, e_idx),
                    lambda replaced, rest=rest: alpha.at(rest, replaced),
                )
                total = total + (term if pos % 2 == 0 else -term)
            if not total.is_zero():
                out[(b_idx, e_idx)] = total
    result = MixedForm(alpha.base_arity + 1, alpha.e_arity, coords, conn.rank)
    result.entries = out
    return result


def _e_connection_on_cotangent(conn: Connection, data: LieAlgebroidData, a: int, m: int, j: int):
    """Coefficient K^m_{aj} of the canonical frame connection acting on the
    base coframe: nabla_{e_a} dx^m = K^m_{aj} dx^j with
    K^m_{aj} = d_j rho^m_a - Gamma^b_{ja} rho^m_b."""
    out = data.rho(a, m).diff(data.coords[j])
    for b in range(data.rank):
        g = conn.coeff(j, a, b)
        if not g.is_zero():
            out = out - g * data.rho(b, m)
    return out


def _e_nabla_on_base_block(conn, data, a, b_idx, value, alpha_at):
    """(E-connection along frame a applied to a base block): anchor
    derivative plus one coframe-rotation term per base leg."""
    coords = data.coords
    out = Polynomial.zero(coords)
    for j in range(data.dim):
        r = data.rho(a, j)
        if not r.is_zero():
            out = out + r * value.diff(coords[j])
    for pos, m in enumerate(b_idx):
        for j in range(data.dim):
            k = _e_connection_on_cotangent(conn, data, a, m, j)
            if k.is_zero():
                continue
            replaced = b_idx[:pos] + (j,) + b_idx[pos + 1:]
            out = out + k * alpha_at(replaced)
    return out


def e_exterior_covariant_derivative(
    alpha: MixedForm, econn: EConnection, data: LieAlgebroidData
) -> MixedForm:
    """Raise the frame arity by one; at base arity zero this is the algebroid
    differential."""
    conn = econn.base
    coords = data.coords
    out = {}
    for e_idx in combinations(range(data.rank), alpha.e_arity + 1):
        for b_idx in combinations(range(data.dim), alpha.base_arity):
            total = Polynomial.zero(coords)
            for pos, a in enumerate(e_idx):
                rest = e_idx[:pos] + e_idx[pos + 1:]
                term = _e_nabla_on_base_block(
                    conn,
                    data,
                    a,
                    b_idx,
                    alpha.at(b_idx, rest),
                    lambda replaced, rest=rest: alpha.at(replaced, rest),
                )
                total = total + (term if pos % 2 == 0 else -term)
            for pi, pj in combinations(range(alpha.e_arity + 1), 2):
                rest = tuple(e_idx[t] for t in range(alpha.e_arity + 1) if t not in (pi, pj))
                sign = -1 if (pi + pj) % 2 else 1
                for c in range(data.rank):
                    coeff = data.c(c, e_idx[pi], e_idx[pj])
                    if not coeff.is_zero():
                        total = total + sign * coeff * alpha.at(b_idx, (c,) + rest)
                    chi = econn.chi_coeff(c, e_idx[pi], e_idx[pj])
                    if not chi.is_zero():
                        total = total - sign * chi * alpha.at(b_idx, (c,) + rest)
            if not total.is_zero():
                out[(b_idx, e_idx)] = total
    result = MixedForm(alpha.base_arity, alpha.e_arity + 1, coords, data.rank)
    result.entries = out
    return result


def dual_pairing_residual(
    mu: EForm, e_components: Sequence[Polynomial], conn: Connection
):
    """d<mu, e> - <nabla mu, e> - <mu, nabla e>, one base form per direction;
    zero exactly by the definition of the dual connection."""
    coords = conn.coords
    if mu.arity != 1:
        raise FormError("the pairing identity is about dual sections (arity 1)")
    out = []
    nabla_mu = exterior_covariant_derivative(MixedForm.from_eform(mu), conn)
    for i in range(len(coords)):
        pairing = Polynomial.zero(coords)
        for a in range(conn.rank):
            pairing = pairing + mu.at((a,)) * e_components[a]
        lhs = pairing.diff(coords[i])
        rhs = Polynomial.zero(coords)
        for a in range(conn.rank):
            rhs = rhs + nabla_mu.at((i,), (a,)) * e_components[a]
        for b in range(conn.rank):
            # (nabla_i e)^b = d_i e^b + Gamma^b_{ia} e^a
            nabla_e_b = e_components[b].diff(coords[i])
            for a in range(conn.rank):
                nabla_e_b = nabla_e_b + conn.coeff(i, a, b) * e_components[a]
            rhs = rhs + mu.at((b,)) * nabla_e_b
        out.append(lhs - rhs)
    return out


def connection_curvature_action(mu: EForm, conn: Connection) -> MixedForm:
    """Diagnostic: (d^nabla)^2 applied to a dual section; measures curvature
    and never affects verdicts."""
    first = exterior_covariant_derivative(MixedForm.from_eform(mu), conn)
    return exterior_covariant_derivative(first, conn)


def _is_action_algebroid(data: LieAlgebroidData) -> bool:
    return all(
        data.c(a, b, c).is_constant()
        for a in range(data.rank)
        for b in range(data.rank)
        for c in range(data.rank)
    )


def check_momentum_map(
    mu: EForm, data: LieAlgebroidData, omega: Union[PreNPlectic, BaseForm]
) -> Verdict:
    """Both the direct equations and the differential reformulation.

    Direct: d mu_a = -iota_{rho(e_a)} omega for every frame index a, and
    rho(e_a)<mu, e_b> = <mu, [e_a, e_b]>.  Reformulation: the degree-1
    compatibility equation d_E mu = -iota_rho^2 omega.
    """
    if not _is_action_algebroid(data):
        raise ValueError("momentum maps require constant structure functions")
    form = _omega_of(omega)
    if mu.arity != 1 or form.arity != 2:
        raise FormError("expected a dual section and a 2-form")
    coords = data.coords
    residuals = []
    for a in range(data.rank):
        for i in range(data.dim):
            lhs = mu.at((a,)).diff(coords[i])
            rhs = Polynomial.zero(coords)
            for j in range(data.dim):
                rhs = rhs + data.rho(a, j) * form.at((j, i))
            r = lhs + rhs
            if not r.is_zero():
                residuals.append(f"d mu(e{a + 1}) + iota_rho(e{a + 1}) omega at {coords[i]}: {r}")
    hamilton = Verdict.from_residuals("hamiltonian equations", residuals)
    residuals = []
    for a in range(data.rank):
        for b in range(data.rank):
            lhs = Polynomial.zero(coords)
            for i in range(data.dim):
                lhs = lhs + data.rho(a, i) * mu.at((b,)).diff(coords[i])
            rhs = Polynomial.zero(coords)
            for c in range(data.rank):
                rhs = rhs + data.c(c, a, b) * mu.at((c,))
            r = lhs - rhs
            if not r.is_zero():
                residuals.append(f"equivariance (e{a + 1}, e{b + 1}): {r}")
    equivariance = Verdict.from_residuals("equivariance equations", residuals)
    reformulated = check_compatible(mu, omega, data)
    reformulated = Verdict(
        "differential reformulation d_E mu = -iota_rho^2 omega",
        reformulated.ok,
        reformulated.residuals,
        reformulated.subs,
    )
    return Verdict.combine(
        "momentum map", (hamilton, equivariance, reformulated)
    )


def _nabla_mu_residual(mu, conn, form, data):
    """nabla mu + iota_rho^1 omega as a (1,1) mixed form."""
    nabla_mu = exterior_covariant_derivative(MixedForm.from_eform(mu), conn)
    return nabla_mu + iota_rho_k(form, 1, data)


def check_momentum_section(
    mu: EForm,
    conn: Connection,
    omega: Union[PreNPlectic, BaseForm],
    data: LieAlgebroidData,
) -> Verdict:
    """nabla mu = -iota_rho omega and d_E mu = -iota_rho^2 omega, reported
    separately."""
    form = _omega_of(omega)
    if mu.arity != 1 or form.arity != 2:
        raise FormError("expected a dual section and a 2-form")
    r1 = _nabla_mu_residual(mu, conn, form, data)
    first = Verdict.from_residuals(
        "covariant derivative condition",
        () if r1.is_zero() else (f"nabla mu + iota_rho omega = {r1}",),
    )
    r2 = e_differential(mu, data) + iota_rho_k(form, 2, data).as_eform()
    second = Verdict.from_residuals(
        "differential condition",
        () if r2.is_zero() else (f"d_E mu + iota_rho^2 omega = {r2}",),
    )
    return Verdict.combine(
        "momentum section",
        (check_lie_algebroid(data), _closedness_verdict(form), first, second),
    )


def check_homotopy_momentum_section(
    mu: Sequence[MixedForm],
    conn: Connection,
    omega: Union[PreNPlectic, BaseForm],
    data: LieAlgebroidData,
) -> Verdict:
    """Verify every line of the cascade for mu = (mu_0, .., mu_{n-1}) with
    mu_k of base arity k and frame arity n-k."""
    form = _omega_of(omega)
    n = form.arity - 1
    if len(mu) != n:
        raise FormError(f"expected {n} tower entries, got {len(mu)}")
    for k, m in enumerate(mu):
        if m.base_arity != k or m.e_arity != n - k:
            raise FormError(
                f"tower entry {k} has arities ({m.base_arity},{m.e_arity}), "
                f"expected ({k},{n - k})"
            )
    econn = EConnection(conn)
    lines = []
    for k in range(n + 1):
        lhs = MixedForm.zero(k, n + 1 - k, data.coords, data.rank)
        if k >= 1:
            lhs = lhs + exterior_covariant_derivative(mu[k - 1], conn)
        if k <= n - 1:
            lhs = lhs + e_exterior_covariant_derivative(mu[k], econn, data)
        rhs = iota_rho_k(form, n + 1 - k, data)
        residual = lhs + rhs
        label = f"cascade line k={k} (base arity {k}, frame arity {n + 1 - k})"
        lines.append(
            Verdict.from_residuals(
                label, () if residual.is_zero() else (f"residual = {residual}",)
            )
        )
    return Verdict.combine(
        "homotopy momentum section",
        (check_lie_algebroid(data), _closedness_verdict(form), *lines),
    )
