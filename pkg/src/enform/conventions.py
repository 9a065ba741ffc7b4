"""The sign-convention document for this package, plus its fingerprint.

Every report emitted by the CLI carries the fingerprint of this text so that
results are only comparable when they were produced under the same
conventions.
"""

from __future__ import annotations

import hashlib

CONVENTIONS_VERSION = "1"

CONVENTIONS = """\
# Sign conventions

All formulas in this package are transcribed against the following fixed
choices.  Tests pin each convention with explicit coordinate computations at
degree parameters n = 1, 2, 3.

## Graded algebra

- Parity of a generator is its degree mod 2.  Moving generator g past
  generator h multiplies by (-1)^(|g||h|).  Odd generators square to zero;
  even generators may repeat.  Monomials are stored sorted by context order
  (builders order generators by (degree, name)), signs absorbed into the
  Polynomial coefficient.
- Base coordinates x^i have degree 0 and live in the Polynomial coefficients,
  never in the generator list.  Fiber generators of degree 0 or negative
  degree are allowed (they occur in the low-degree phase spaces).

## Canonical Poisson bracket (symplectic form degree N)

- Determined by: bilinearity, {coordinate, momentum} = +1 per conjugate pair,
  graded antisymmetry {f,g} = -(-1)^((|f|-N)(|g|-N)) {g,f}, and the right
  Leibniz rule {f, gh} = {f,g} h + (-1)^((|f|-N)|g|) g {f,h}.
- Consequences pinned by tests, on the shifted space of form degree N = n-1:
  {x^i, z_j} = delta^i_j = -{z_j, x^i}; {q^a, y_b} = delta^a_b,
  {y_b, q^a} = -(-1)^(n-2) delta^a_b.  On the doubled space of degree N = n:
  {x^i, xi_j} = -{xi_j, x^i} = delta^i_j; {q^a, p_b} = delta^a_b,
  {p_b, q^a} = -(-1)^(n-1) delta^a_b; {z_i, zeta^j} = delta_i^j,
  {zeta^j, z_i} = -(-1)^(n-1) delta_i^j; {y_a, eta^b} = delta_a^b,
  {eta^b, y_a} = -delta_a^b.
- The graded Jacobi identity
  {f,{g,h}} = {{f,g},h} + (-1)^((|f|-N)(|g|-N)) {g,{f,h}} holds exactly.

## Exterior calculus

- Forms, multivectors and mixed forms are stored sparsely on strictly
  increasing index tuples; evaluation at arbitrary tuples applies the
  permutation sign.  Stored values ARE the evaluations on frame/coordinate
  tuples (no factorial rescaling).
- d omega (i_0..i_k) = sum_j (-1)^j d_{i_j} omega(..no i_j..).
- Interior product contracts the FIRST slot: (iota_u a)(..) = a(u, ..), so
  iota_u iota_v T (..) = T(v, u, ..).

## Anchor contraction (the central convention)

- iota_rho^k evaluates slots in ARGUMENT ORDER:
      (iota_rho^k w)(e_1,..,e_k; v's) = w(rho(e_1),..,rho(e_k), v's).
  The reversed-order alternative differs by (-1)^(k(k-1)/2); the
  order-preserving form is the one under which the gauge identity
  d_E(iota_rho^n lambda) = iota_rho^(n+1)(d lambda) holds exactly at every n,
  and it is what every checker in this package uses.
- Compatibility equation: d_E J = - iota_rho^(n+1) omega.

## Algebroid differential and brackets

- d_E a(e_1..e_{m+1}) = sum_i (-1)^(i-1) rho(e_i) a(..no i..)
  + sum_{i<j} (-1)^(i+j) a([e_i,e_j], ..no i, no j..).
- Section bracket from frame data: [u,v]^c = u^a v^b C^c_{ab} + rho(u)v^c
  - rho(v)u^c.
- Bivector-induced algebroid: anchor rho(dx^i) = -pi#(dx^i) with
  <pi#(a), b> = pi(a, b); structure functions are extracted symbolically from
  L_{pi# dx^i} dx^j - L_{pi# dx^j} dx^i - d(pi(dx^i,dx^j))
  + iota_{pi# dx^i} iota_{pi# dx^j} H.  Under this anchor sign the
  compatibility residual of J = pi on the induced algebroid vanishes
  identically (the derivative sum and the contraction flip together); the
  opposite anchor sign would give residual = [pi,pi]_S - 2 <pi x pi x pi, H>.
- Schouten bracket: the odd-momentum avatar of a k-vector is the sorted-sum
  of evaluations times theta-monomials; [P,Q]_S := -{P-avatar, Q-avatar} on
  the degree-1 phase space.  Normalized so [v, f]_S = v(f) and [u,v]_S is the
  vector-field bracket (pinned against the independent combinatorial oracle).

## Extended bracket on E + wedge^(n-1) E*

- [[u+a, v+b]] = [u,v] + L_u b - iota_v d_E a - iota_u iota_v
  (iota_rho^(n+1) omega).  With the MINUS sign on the contraction term the
  graph of J is involutive exactly when J is compatible, with graph residual
  -iota_u iota_v (d_E J + iota_rho^(n+1) omega).
- The bracket satisfies the left Leibniz rule
  [[s1,[[s2,s3]]]] = [[[[s1,s2]],s3]] + [[s2,[[s1,s3]]]] exactly when
  d omega = 0.  The cyclic sum of left-nested double brackets vanishes on
  frame (constant) sections only; for polynomial coefficients its residual is
  the exact-term defect and is reported as a diagnostic, never a verdict.

## Avatars and graded charges

- Frame-form avatar: J-bar = sum over ALL index tuples of J(e-tuple) times
  the q-monomial (n! times the sorted-tuple sum).
- Base-form avatar: sorted-tuple sum of evaluations times zeta-monomials.
- Homological charge: Theta = (-1)^(n-1) [rho^i_a z_i q^a
  + 1/2 C^a_{bc} q^b q^c y_a]; {Theta, Theta} = 0 iff the axioms hold.
- Lifted field: Q = -{Theta, -}; its restriction to (x, q) is
  rho q d/dx - 1/2 C q q d/dq for every n.
- Extended field: Q_comp = -{Theta + (-1)^(n-1) J-bar, -}
  + (-1)^n K, where K(z_i) = sum over all frame tuples of
  rho..rho H(i, j's) q..q (weight n! per sorted tuple, matching the frame
  avatar).  This is the unique sign-and-weight choice (up to a global sign of
  the whole field) making Q_comp^2 = 0 equivalent to compatibility; it
  differs from a naive component transcription, which is inconsistent with
  the Hamiltonian definition.
- Doubled charge: Theta-tilde = xi_i zeta^i + p_a eta^a + n! H-tilde, with
  H-tilde the zeta-avatar of the closed (n+1)-form.  The twist charge is
  phi = phi_Lie - J-bar with phi_Lie = rho^i_a z_i q^a
  + 1/2 C^c_{ab} q^a q^b y_c.  The weight n! (rather than a bare sign) is
  forced by the 1/k! coefficients of the twist exponential; solved exactly
  and pinned at n = 1, 2, 3.
- {Theta-tilde, Theta-tilde} = 0 iff d H = 0, independent of the H-tilde
  scale.

## Momentum conventions

- Hamiltonian equation: d mu(e) = - iota_{rho(e)} omega.
- Momentum section: nabla mu = - iota_rho^1 omega and
  d_E mu = - iota_rho^2 omega (the module's order-preserving iota).
- Cascade, line k = n..0:
  d^nabla mu_{k-1} + d_E^nabla mu_k = - iota_rho^(n+1-k) omega.
- Dual connection: (nabla_i mu)_a = d_i mu_a - Gamma^b_{ia} mu_b; frame
  connection along the anchor on the coframe:
  nabla_{e_a} dx^m = (d_j rho^m_a - Gamma^b_{ja} rho^m_b) dx^j.
"""


def convention_fingerprint() -> str:
    digest = hashlib.sha256(
        (CONVENTIONS_VERSION + "\n" + CONVENTIONS).encode()
    ).hexdigest()
    return digest[:12]
