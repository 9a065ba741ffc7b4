"""Graded-geometry formulations: the homological charge of the algebroid
data, the extended degree +1 vector field for a frame n-form over a closed
(n+1)-form, its nilpotency criterion, and the twisted projection condition on
the doubled phase space.

Spaces (for structure degree n over base coordinates x^i, frame index a):

  shifted space   : momenta z_i (degree n-1) for x^i, pairs (q^a, y_a) of
                    degrees (1, n-2); symplectic degree n-1.
  doubled space   : momenta xi_i (degree n) for x^i, pairs (q^a, p_a),
                    (z_i, zeta^i), (y_a, eta^a) of degrees (1, n-1),
                    (n-1, 1), (n-2, 2); symplectic degree n.

All signs below are pinned by the test suite against the nontrivial fixtures
at n = 1, 2, 3; the conventions document records each choice.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, permutations
from typing import Union

from .algebroid import LieAlgebroidData, check_lie_algebroid
from .compat import PreNPlectic, _closedness_verdict, _omega_of
from .forms import BaseForm, EForm, FormError
from .graded import Derivation, GradedElement, GradedGenerator
from .poly import Polynomial
from .symplectic import PhaseSpace, poisson_bracket, project_to_base, twist
from .verdict import Verdict

__all__ = [
    "GradedVectorField",
    "shifted_phase_space",
    "doubled_phase_space",
    "eform_to_q_function",
    "baseform_to_zeta_function",
    "build_theta_lie",
    "build_phi_lie",
    "q_lie",
    "build_q_comp",
    "check_q_comp_nilpotent",
    "build_theta_tilde",
    "check_twisted_qp",
]

GradedVectorField = Derivation


def shifted_phase_space(data: LieAlgebroidData, n: int) -> PhaseSpace:
    """Phase space of the shifted bundle carrying the degree-n charge."""
    if n < 1:
        raise ValueError("n must be at least 1")
    zs = [GradedGenerator(f"z{i + 1}", n - 1) for i in range(data.dim)]
    fib = [
        (GradedGenerator(f"q{a + 1}", 1), GradedGenerator(f"y{a + 1}", n - 2))
        for a in range(data.rank)
    ]
    return PhaseSpace.build(data.coords, zs, fib, n - 1)


def doubled_phase_space(data: LieAlgebroidData, n: int) -> PhaseSpace:
    """Doubled phase space of symplectic degree n over the shifted bundle."""
    if n < 1:
        raise ValueError("n must be at least 1")
    xis = [GradedGenerator(f"xi{i + 1}", n) for i in range(data.dim)]
    fib = []
    for a in range(data.rank):
        fib.append((GradedGenerator(f"q{a + 1}", 1), GradedGenerator(f"p{a + 1}", n - 1)))
        fib.append((GradedGenerator(f"y{a + 1}", n - 2), GradedGenerator(f"eta{a + 1}", 2)))
    for i in range(data.dim):
        fib.append((GradedGenerator(f"z{i + 1}", n - 1), GradedGenerator(f"zeta{i + 1}", 1)))
    return PhaseSpace.build(data.coords, xis, fib, n)


def eform_to_q_function(j: EForm, ps: PhaseSpace) -> GradedElement:
    """Avatar of a frame n-form: sum over all index tuples of the evaluation
    times the q-monomial (n! times the sorted-tuple sum)."""
    ctx = ps.context
    out = GradedElement.zero(ctx)
    fact = 1
    for k in range(2, j.arity + 1):
        fact *= k
    for idx, coeff in j.items():
        word = tuple(ctx.index_of(f"q{a + 1}") for a in idx)
        out = out + GradedElement.from_word(ctx, coeff * fact, word)
    return out


def baseform_to_zeta_function(h: BaseForm, ps: PhaseSpace) -> GradedElement:
    """Avatar of a base (n+1)-form on the doubled space: sorted-tuple sum of
    evaluations times zeta-monomials."""
    ctx = ps.context
    out = GradedElement.zero(ctx)
    for idx, coeff in h.items():
        word = tuple(ctx.index_of(f"zeta{i + 1}") for i in idx)
        out = out + GradedElement.from_word(ctx, coeff, word)
    return out


def _rho_zq_term(data: LieAlgebroidData, ps: PhaseSpace, z_prefix: str = "z") -> GradedElement:
    ctx = ps.context
    out = GradedElement.zero(ctx)
    for a in range(data.rank):
        for i in range(data.dim):
            r = data.rho(a, i)
            if r.is_zero():
                continue
            out = out + GradedElement.from_word(
                ctx, r, (ctx.index_of(f"{z_prefix}{i + 1}"), ctx.index_of(f"q{a + 1}"))
            )
    return out


def _cqqy_term(data: LieAlgebroidData, ps: PhaseSpace) -> GradedElement:
    ctx = ps.context
    out = GradedElement.zero(ctx)
    half = Fraction(1, 2)
    for c in range(data.rank):
        for a in range(data.rank):
            for b in range(data.rank):
                coeff = data.c(c, a, b)
                if coeff.is_zero():
                    continue
                out = out + GradedElement.from_word(
                    ctx,
                    coeff * half,
                    (
                        ctx.index_of(f"q{a + 1}"),
                        ctx.index_of(f"q{b + 1}"),
                        ctx.index_of(f"y{c + 1}"),
                    ),
                )
    return out


def build_theta_lie(data: LieAlgebroidData, n: int, ps: PhaseSpace = None) -> GradedElement:
    """Degree-n charge (-1)^(n-1) [rho^i_a z_i q^a + 1/2 C^a_{bc} q^b q^c y_a];
    its self-bracket vanishes exactly when the algebroid axioms hold."""
    if ps is None:
        ps = shifted_phase_space(data, n)
    sign = 1 if (n - 1) % 2 == 0 else -1
    return (_rho_zq_term(data, ps) + _cqqy_term(data, ps)) * sign


def build_phi_lie(data: LieAlgebroidData, ps: PhaseSpace) -> GradedElement:
    """Twisting charge rho^i_a z_i q^a + 1/2 C^c_{ab} q^a q^b y_c (no overall
    sign)."""
    return _rho_zq_term(data, ps) + _cqqy_term(data, ps)


def q_lie(data: LieAlgebroidData, n: int, ps: PhaseSpace = None) -> Derivation:
    """Minus the Hamiltonian lift of the homological charge; its restriction
    to (x, q) is the shifted-bundle vector field rho q d/dx - 1/2 C q q d/dq
    for every n."""
    if ps is None:
        ps = shifted_phase_space(data, n)
    theta = build_theta_lie(data, n, ps)
    return _hamiltonian_vf(-theta, ps)


def _hamiltonian_vf(h: GradedElement, ps: PhaseSpace) -> Derivation:
    ctx = ps.context
    base_images = [
        poisson_bracket(h, GradedElement.from_poly(ctx, Polynomial.variable(ctx.base_vars, v)), ps)
        for v in ctx.base_vars
    ]
    gen_images = [
        poisson_bracket(h, GradedElement.generator(ctx, g.name), ps) for g in ctx.generators
    ]
    return Derivation(ctx, 1, base_images, gen_images)


def _h_correction_images(
    data: LieAlgebroidData, h: BaseForm, n: int, ps: PhaseSpace
) -> list:
    """Per-z_i correction: sum over all frame tuples of
    rho^{j_1}_{a_1}..rho^{j_n}_{a_n} H(i, j_1..j_n) q^{a_1}..q^{a_n}.

    The all-tuples sum (weight n! per sorted tuple) matches the avatar
    normalization of frame forms, so the nilpotency obstruction collects the
    compatibility residual with a single overall factor.
    """
    ctx = ps.context
    images = []
    q_idx = [ctx.index_of(f"q{a + 1}") for a in range(data.rank)]
    for i in range(data.dim):
        img = GradedElement.zero(ctx)
        for a_sorted in combinations(range(data.rank), n):
            for a_tuple in permutations(a_sorted):
                term = Polynomial.zero(data.coords)
                for j_tuple in _tuples(data.dim, n):
                    hv = h.at((i,) + j_tuple)
                    if hv.is_zero():
                        continue
                    coeff = hv
                    for slot in range(n):
                        coeff = coeff * data.rho(a_tuple[slot], j_tuple[slot])
                    term = term + coeff
                img = img + GradedElement.from_word(
                    ctx, term, tuple(q_idx[a] for a in a_tuple)
                )
        images.append(img)
    return images


def _tuples(dim, k):
    if k == 0:
        yield ()
        return
    for head in range(dim):
        for tail in _tuples(dim, k - 1):
            yield (head,) + tail


def build_q_comp(
    data: LieAlgebroidData,
    j: EForm,
    omega: Union[PreNPlectic, BaseForm],
    n: int,
    ps: PhaseSpace = None,
) -> Derivation:
    """The extended degree +1 vector field: minus the Hamiltonian lift of
    the charge extended by (-1)^(n-1) times the frame-form avatar, plus the
    non-Hamiltonian correction feeding the closed (n+1)-form into the
    z-directions with sign (-1)^n.

    The correction sign and weight are pinned by the test suite: they are the
    unique choice (up to an overall sign of the whole field) for which the
    nilpotency verdict coincides with the compatibility verdict at
    n = 1, 2, 3 on fixtures where the contracted form is nonzero.
    """
    form = _omega_of(omega)
    if ps is None:
        ps = shifted_phase_space(data, n)
    if j.arity != n or form.arity != n + 1:
        raise FormError("arity schedule: frame form n, base form n+1")
    ctx = ps.context
    theta = build_theta_lie(data, n, ps)
    j_sign = 1 if (n - 1) % 2 == 0 else -1
    hamiltonian_part = -(theta + eform_to_q_function(j, ps) * j_sign)
    base = _hamiltonian_vf(hamiltonian_part, ps)
    corrections = _h_correction_images(data, form, n, ps)
    h_sign = 1 if n % 2 == 0 else -1
    gen_images = list(base.gen_images)
    for i in range(data.dim):
        zi = ctx.index_of(f"z{i + 1}")
        gen_images[zi] = gen_images[zi] + corrections[i] * h_sign
    return Derivation(ctx, 1, base.base_images, gen_images)


def _derivation_square_residuals(q: Derivation, ps: PhaseSpace):
    ctx = ps.context
    residuals = []
    for v in ctx.base_vars:
        e = GradedElement.from_poly(ctx, Polynomial.variable(ctx.base_vars, v))
        r = q(q(e))
        if not r.is_zero():
            residuals.append(f"Q^2({v}) = {r}")
    for g in ctx.generators:
        r = q(q(GradedElement.generator(ctx, g.name)))
        if not r.is_zero():
            residuals.append(f"Q^2({g.name}) = {r}")
    return residuals


def check_q_comp_nilpotent(
    data: LieAlgebroidData,
    j: EForm,
    omega: Union[PreNPlectic, BaseForm],
    n: int,
) -> Verdict:
    """Exact Q^2 = 0 on every coordinate and generator; equivalent to the
    compatibility check whenever the axioms hold and the form is closed."""
    form = _omega_of(omega)
    ps = shifted_phase_space(data, n)
    q = build_q_comp(data, j, form, n, ps)
    main = Verdict.from_residuals(
        "nilpotency of the extended vector field",
        _derivation_square_residuals(q, ps),
    )
    return Verdict.combine(
        "extended vector field squares to zero",
        (check_lie_algebroid(data), _closedness_verdict(form), main),
    )


def _theta_tilde_kinetic(data: LieAlgebroidData, ps: PhaseSpace, n: int) -> GradedElement:
    """The pairing part xi_i zeta^i + (-1)^(n-1) p_a eta^a of the doubled
    charge.

    The relative sign aligns the two double-fibration sectors: with it, the
    derived bracket of momentum-free functions through this charge reproduces
    the canonical bracket of the shifted space up to one global sign for
    every n (without it the two sectors disagree at even n, and the twist
    condition would reject valid x-dependent anchors)."""
    ctx = ps.context
    out = GradedElement.zero(ctx)
    one = Polynomial.constant(data.coords, 1)
    for i in range(data.dim):
        out = out + GradedElement.from_word(
            ctx, one, (ctx.index_of(f"xi{i + 1}"), ctx.index_of(f"zeta{i + 1}"))
        )
    sp = 1 if (n - 1) % 2 == 0 else -1
    for a in range(data.rank):
        out = out + GradedElement.from_word(
            ctx, one * sp, (ctx.index_of(f"p{a + 1}"), ctx.index_of(f"eta{a + 1}"))
        )
    return out


def build_theta_tilde(
    data: LieAlgebroidData,
    omega: Union[PreNPlectic, BaseForm],
    n: int,
    ps: PhaseSpace = None,
) -> GradedElement:
    """Degree-(n+1) charge xi_i zeta^i + p_a eta^a + n! (zeta-avatar of the
    base form); its self-bracket vanishes exactly when the base form is
    closed (any nonzero scale of the last term preserves that equivalence).

    The weight n! is the unique scale for which the projected twist by
    phi_Lie - J-avatar vanishes exactly on compatible data; it compensates
    the 1/k! of the twist exponential against the avatar weight of frame
    forms.  Pinned at n = 1, 2, 3 by the test suite.
    """
    form = _omega_of(omega)
    if ps is None:
        ps = doubled_phase_space(data, n)
    fact = 1
    for k in range(2, n + 1):
        fact *= k
    return _theta_tilde_kinetic(data, ps, n) + baseform_to_zeta_function(form, ps) * Fraction(fact)


def check_twisted_qp(
    data: LieAlgebroidData,
    j: EForm,
    omega: Union[PreNPlectic, BaseForm],
    n: int,
) -> Verdict:
    """Projected twist condition on the doubled space.

    Builds the degree-(n+1) charge, twists by phi = phi_Lie - J-avatar, and
    demands that the projection of the twisted charge to the zero section
    vanish exactly.  The verdict also reports which obstruction survives: the
    quadratic charge-chain (algebroid axioms) or the remainder (the
    compatibility equation), and checks the term-by-term reconstruction of
    the projected twist from the four contributing chains.
    """
    form = _omega_of(omega)
    if j.arity != n or form.arity != n + 1:
        raise FormError("arity schedule: frame form n, base form n+1")
    ps = doubled_phase_space(data, n)
    theta = build_theta_tilde(data, form, n, ps)
    phi_lie = build_phi_lie(data, ps)
    j_avatar = eform_to_q_function(j, ps)
    phi = phi_lie - j_avatar

    twisted = twist(phi, theta, ps)
    projected = project_to_base(twisted, ps)
    main = Verdict.from_residuals(
        "projected twisted charge",
        () if projected.is_zero() else (f"pr(exp(ad phi) Theta) = {projected}",),
    )

    # obstruction attribution: the quadratic chain of the kinetic part alone
    # carries the axiom violations; everything else is the compatibility part
    kinetic = _theta_tilde_kinetic(data, ps, n)
    alg_obstruction = project_to_base(
        poisson_bracket(poisson_bracket(kinetic, phi_lie, ps), phi_lie, ps), ps
    ) * Fraction(1, 2)
    alg_v = Verdict.from_residuals(
        "algebroid obstruction (kinetic chain)",
        () if alg_obstruction.is_zero() else (f"{alg_obstruction}",),
    )
    compat_obstruction = projected - alg_obstruction
    compat_v = Verdict.from_residuals(
        "compatibility obstruction (remainder)",
        () if compat_obstruction.is_zero() else (f"{compat_obstruction}",),
    )

    # term-by-term reconstruction: the only chains surviving the projection
    # are the quadratic pure chain, the two quadratic mixed chains, and the
    # length-(n+1) pure chain acting on the form avatar
    mixed = poisson_bracket(poisson_bracket(theta, j_avatar, ps), phi_lie, ps) + poisson_bracket(
        poisson_bracket(theta, phi_lie, ps), j_avatar, ps
    )
    reconstruction = (
        project_to_base(
            poisson_bracket(poisson_bracket(theta, phi_lie, ps), phi_lie, ps), ps
        )
        * Fraction(1, 2)
        - project_to_base(mixed, ps) * Fraction(1, 2)
    )
    if n + 1 > 2:
        fact = 1
        for k in range(2, n + 2):
            fact *= k
        pure = theta
        for _ in range(n + 1):
            pure = poisson_bracket(pure, phi_lie, ps)
        reconstruction = reconstruction + project_to_base(pure, ps) * Fraction(1, fact)
    deviation = projected - reconstruction
    recon_v = Verdict.from_residuals(
        "term-by-term reconstruction of the projected twist",
        () if deviation.is_zero() else (f"deviation = {deviation}",),
    )

    return Verdict.combine(
        "twisted projection condition",
        (_closedness_verdict(form), main, alg_v, compat_v, recon_v),
    )
