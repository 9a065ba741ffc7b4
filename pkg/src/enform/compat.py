"""Closed higher-degree forms on the base, the anchor contraction, the
compatibility equation between frame forms and base forms, its consistency
property, and the two equivalence moves (exact shifts and gauge
transformations).

Convention: the k-fold anchor contraction evaluates slots in argument order,

    (iota_rho^k w)(e_{a_1}, ..., e_{a_k}; v's) = w(rho(e_{a_1}), ..., rho(e_{a_k}), v's),

and the compatibility equation reads  d_E J = - iota_rho^(n+1) w.  See the
conventions document for why the order-preserving evaluation is the one under
which the gauge identity d_E(iota_rho^n l) = iota_rho^(n+1) dl and the
degree-1 examples hold exactly.
"""

from __future__ import annotations

from itertools import combinations
from typing import Union

from .algebroid import LieAlgebroidData, check_lie_algebroid, e_differential
from .forms import BaseForm, EForm, FormError, MixedForm, de_rham_d
from .poly import Polynomial
from .verdict import Verdict

__all__ = [
    "PreNPlectic",
    "de_rham_d",
    "iota_rho_k",
    "iota_rho_top",
    "compatibility_residual",
    "check_compatible",
    "consistency_residual",
    "check_consistency",
    "gauge_transform",
    "exact_shift",
]


class PreNPlectic:
    """A closed (n+1)-form; closedness is validated exactly at construction."""

    __slots__ = ("form", "n")

    def __init__(self, form: BaseForm, n: int):
        if n < 1:
            raise FormError("degree parameter must be at least 1")
        if form.arity != n + 1:
            raise FormError(f"expected arity {n + 1}, got {form.arity}")
        d = de_rham_d(form)
        if not d.is_zero():
            raise FormError(f"form is not closed: d = {d}")
        self.form = form
        self.n = n

    @classmethod
    def zero(cls, n: int, coords) -> "PreNPlectic":
        return cls(BaseForm.zero(n + 1, coords), n)


def _omega_of(omega: Union[PreNPlectic, BaseForm]) -> BaseForm:
    return omega.form if isinstance(omega, PreNPlectic) else omega


def _closedness_verdict(omega: Union[PreNPlectic, BaseForm]) -> Verdict:
    form = _omega_of(omega)
    d = de_rham_d(form)
    return Verdict.from_residuals(
        "base form closedness", () if d.is_zero() else (f"d(omega) = {d}",)
    )


def iota_rho_k(
    omega: Union[PreNPlectic, BaseForm], k: int, data: LieAlgebroidData
) -> MixedForm:
    """Contract the first k slots with anchored frame sections.

    Result lives in base-arity (arity - k), frame-arity k; the value at
    (frame block A, base block I) is w(rho(e_{A_1}), .., rho(e_{A_k}), d_I..).
    """
    form = _omega_of(omega)
    if not 1 <= k <= form.arity:
        raise FormError(f"contraction depth {k} out of range for arity {form.arity}")
    coords = data.coords
    dim = data.dim
    base_arity = form.arity - k
    entries = {}
    for e_idx in combinations(range(data.rank), k):
        for b_idx in combinations(range(dim), base_arity):
            total = Polynomial.zero(coords)
            for j_idx in _index_tuples(dim, k):
                val = form.at(j_idx + b_idx)
                if val.is_zero():
                    continue
                coeff = val
                for slot, a in enumerate(e_idx):
                    coeff = coeff * data.rho(a, j_idx[slot])
                total = total + coeff
            if not total.is_zero():
                entries[(b_idx, e_idx)] = total
    return MixedForm(base_arity, k, coords, data.rank, entries)


def _index_tuples(dim, k):
    if k == 0:
        yield ()
        return
    for head in range(dim):
        for tail in _index_tuples(dim, k - 1):
            yield (head,) + tail


def iota_rho_top(omega: Union[PreNPlectic, BaseForm], data: LieAlgebroidData) -> EForm:
    """Full contraction of an (n+1)-form into a frame (n+1)-form."""
    form = _omega_of(omega)
    return iota_rho_k(form, form.arity, data).as_eform()


def compatibility_residual(
    j: EForm, omega: Union[PreNPlectic, BaseForm], data: LieAlgebroidData
) -> EForm:
    """d_E J + iota_rho^(n+1) omega, which must vanish for compatibility."""
    form = _omega_of(omega)
    if form.arity != j.arity + 1:
        raise FormError(
            f"arity mismatch: J has arity {j.arity}, omega arity {form.arity}"
        )
    return e_differential(j, data) + iota_rho_top(form, data)


def check_compatible(
    j: EForm, omega: Union[PreNPlectic, BaseForm], data: LieAlgebroidData
) -> Verdict:
    """Exact verdict on d_E J = -iota_rho^(n+1) omega.

    The axiom and closedness preconditions are reported as sub-verdicts so a
    broken input fails here exactly when it fails the graded formulations.
    """
    residual = compatibility_residual(j, omega, data)
    main = Verdict.from_residuals(
        "compatibility equation",
        () if residual.is_zero() else (f"d_E(J) + iota_rho^(n+1)(omega) = {residual}",),
    )
    return Verdict.combine(
        "compatible frame form",
        (check_lie_algebroid(data), _closedness_verdict(omega), main),
    )


def consistency_residual(omega: BaseForm, data: LieAlgebroidData) -> EForm:
    """d_E(iota_rho^(n+1) omega); vanishes whenever omega is closed and the
    algebroid axioms hold."""
    return e_differential(iota_rho_top(omega, data), data)


def check_consistency(
    omega: Union[PreNPlectic, BaseForm], data: LieAlgebroidData
) -> Verdict:
    residual = consistency_residual(_omega_of(omega), data)
    main = Verdict.from_residuals(
        "closedness of the contracted form",
        () if residual.is_zero() else (f"d_E(iota_rho^(n+1) omega) = {residual}",),
    )
    return Verdict.combine(
        "consistency of the compatibility equation",
        (check_lie_algebroid(data), _closedness_verdict(omega), main),
    )


def gauge_transform(j: EForm, lam: BaseForm, data: LieAlgebroidData):
    """Gauge move by an n-form: returns (J - iota_rho^n lambda, d lambda).

    The caller replaces omega by omega + d lambda; compatibility is preserved
    because d_E(iota_rho^n lambda) = iota_rho^(n+1)(d lambda) exactly.
    """
    if lam.arity != j.arity:
        raise FormError(
            f"gauge form arity {lam.arity} must equal frame form arity {j.arity}"
        )
    shifted = j - iota_rho_k(lam, lam.arity, data).as_eform()
    return shifted, de_rham_d(lam)


def exact_shift(j: EForm, k_form: EForm, data: LieAlgebroidData) -> EForm:
    """Equivalence move J -> J + d_E K by a frame (n-1)-form."""
    if k_form.arity != j.arity - 1:
        raise FormError(
            f"shift form arity {k_form.arity} must be {j.arity - 1}"
        )
    return j + e_differential(k_form, data)
