"""Exact symbolic verification of Lie algebroid and graded symplectic
structure identities: polynomial coefficients over the rationals, graded
commutative algebra with Koszul signs, canonical Poisson calculus, and a
battery of structure checkers wired to a manifest-driven CLI."""

from .poly import ParseError, PolyError, Polynomial, Rational, parse_poly
from .graded import Derivation, GradedContext, GradedElement, GradedGenerator
from .symplectic import (
    PhaseSpace,
    TwistError,
    derived_bracket,
    poisson_bracket,
    project_to_base,
    twist,
)
from .forms import BaseForm, EForm, ESection, FormError, MixedForm, MultiVector, de_rham_d
from .verdict import Verdict

__all__ = [
    "ParseError",
    "PolyError",
    "Polynomial",
    "Rational",
    "parse_poly",
    "Derivation",
    "GradedContext",
    "GradedElement",
    "GradedGenerator",
    "PhaseSpace",
    "TwistError",
    "derived_bracket",
    "poisson_bracket",
    "project_to_base",
    "twist",
    "BaseForm",
    "EForm",
    "ESection",
    "FormError",
    "MixedForm",
    "MultiVector",
    "de_rham_d",
    "Verdict",
]
