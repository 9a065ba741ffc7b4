"""Antisymmetric coefficient arrays: base forms, E-forms, multivectors and
mixed forms, all with Polynomial entries.

Storage is sparse over strictly increasing index tuples; evaluation at an
arbitrary index tuple applies the permutation sign (repeated indices give
zero).  Index tuples are 0-based internally; 1-based manifest indices are
converted at the loading boundary only.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .poly import Polynomial, Scalar

__all__ = [
    "FormError",
    "BaseForm",
    "EForm",
    "MultiVector",
    "MixedForm",
    "ESection",
    "canonical_key",
    "de_rham_d",
]


class FormError(ValueError):
    pass


def canonical_key(idx: Sequence[int]):
    """Sort an index tuple; returns (sign, tuple) or None on repeats."""
    idx = list(idx)
    sign = 1
    for i in range(1, len(idx)):
        j = i
        while j > 0 and idx[j - 1] > idx[j]:
            idx[j - 1], idx[j] = idx[j], idx[j - 1]
            sign = -sign
            j -= 1
    for a, b in zip(idx, idx[1:]):
        if a == b:
            return None
    return sign, tuple(idx)


def _normalize_entries(arity, dim, coords, entries):
    acc: dict[tuple, Polynomial] = {}
    items = entries.items() if isinstance(entries, Mapping) else entries
    for idx, value in items:
        idx = tuple(int(i) for i in idx)
        if len(idx) != arity:
            raise FormError(f"index tuple {idx} does not have arity {arity}")
        if any(i < 0 or i >= dim for i in idx):
            raise FormError(f"index tuple {idx} out of range for dimension {dim}")
        value = value.embed(coords)
        key = canonical_key(idx)
        if key is None:
            if not value.is_zero():
                raise FormError(f"repeated index {idx} requires a zero entry")
            continue
        sign, canon = key
        value = value * sign
        prev = acc.get(canon)
        if prev is None:
            if not value.is_zero():
                acc[canon] = value
        else:
            if prev != value:
                raise FormError(
                    f"antisymmetry violated at index {idx}: "
                    f"{prev} vs {value} after sign normalization"
                )
    return acc


class _AltArray:
    """Shared machinery for one antisymmetric index block."""

    __slots__ = ("arity", "dim", "coords", "entries")

    def __init__(self, arity: int, dim: int, coords: Sequence[str], entries=()):
        if arity < 0:
            raise FormError("arity must be nonnegative")
        self.arity = arity
        self.dim = dim
        self.coords = tuple(coords)
        self.entries = _normalize_entries(arity, dim, self.coords, entries)

    def _zero_poly(self) -> Polynomial:
        return Polynomial.zero(self.coords)

    def at(self, *idx) -> Polynomial:
        if len(idx) == 1 and isinstance(idx[0], (tuple, list)):
            idx = tuple(idx[0])
        if len(idx) != self.arity:
            raise FormError(f"expected {self.arity} indices, got {len(idx)}")
        key = canonical_key(idx)
        if key is None:
            return self._zero_poly()
        sign, canon = key
        value = self.entries.get(canon)
        return self._zero_poly() if value is None else value * sign

    def items(self):
        return sorted(self.entries.items())

    def is_zero(self) -> bool:
        return not self.entries

    def _compatible(self, other):
        if type(self) is not type(other):
            raise FormError(f"cannot combine {type(self).__name__} with {type(other).__name__}")
        if self.arity != other.arity or self.dim != other.dim:
            raise FormError("arity or index dimension mismatch")

    def _clone(self, entries):
        raise NotImplementedError

    def __add__(self, other):
        self._compatible(other)
        out = dict(self.entries)
        for k, v in other.entries.items():
            s = out.get(k)
            s = v if s is None else s + v
            if s.is_zero():
                out.pop(k, None)
            else:
                out[k] = s
        return self._clone(out)

    def __neg__(self):
        return self._clone({k: -v for k, v in self.entries.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, c):
        if not isinstance(c, (int, Fraction, Polynomial)):
            return NotImplemented
        return self._clone({k: v * c for k, v in self.entries.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if type(self) is not type(other):
            return NotImplemented
        return (
            self.arity == other.arity
            and self.dim == other.dim
            and {k: v for k, v in self.entries.items()}
            == {k: v for k, v in other.entries.items()}
        )

    def __hash__(self):
        return hash((type(self).__name__, self.arity, self.dim, tuple(self.items())))

    def __str__(self):
        if not self.entries:
            return "0"
        return "; ".join(f"[{','.join(str(i + 1) for i in k)}] = {v}" for k, v in self.items())

    def __repr__(self):
        return f"{type(self).__name__}(arity={self.arity}, {self})"


class BaseForm(_AltArray):
    """Differential form on the base: indices range over base coordinates."""

    def __init__(self, arity: int, coords: Sequence[str], entries=()):
        super().__init__(arity, len(tuple(coords)), coords, entries)

    def _clone(self, entries):
        out = BaseForm(self.arity, self.coords)
        out.entries = entries
        return out

    @classmethod
    def zero(cls, arity: int, coords) -> "BaseForm":
        return cls(arity, coords)


class MultiVector(_AltArray):
    """Antisymmetric multivector field: indices range over base coordinates."""

    def __init__(self, arity: int, coords: Sequence[str], entries=()):
        super().__init__(arity, len(tuple(coords)), coords, entries)

    def _clone(self, entries):
        out = MultiVector(self.arity, self.coords)
        out.entries = entries
        return out

    @classmethod
    def zero(cls, arity: int, coords) -> "MultiVector":
        return cls(arity, coords)


class EForm(_AltArray):
    """Section of the exterior power of the dual bundle: indices over the
    frame, coefficients over the base coordinates."""

    def __init__(self, arity: int, rank: int, coords: Sequence[str], entries=()):
        super().__init__(arity, rank, coords, entries)

    @property
    def rank(self) -> int:
        return self.dim

    def _clone(self, entries):
        out = EForm(self.arity, self.dim, self.coords)
        out.entries = entries
        return out

    @classmethod
    def zero(cls, arity: int, rank: int, coords) -> "EForm":
        return cls(arity, rank, coords)


class MixedForm:
    """Base-form with values in an exterior power of the dual bundle:
    antisymmetric separately in a base index block and a frame index block."""

    __slots__ = ("base_arity", "e_arity", "coords", "rank", "entries")

    def __init__(
        self,
        base_arity: int,
        e_arity: int,
        coords: Sequence[str],
        rank: int,
        entries=(),
    ):
        self.base_arity = base_arity
        self.e_arity = e_arity
        self.coords = tuple(coords)
        self.rank = rank
        acc: dict[tuple, Polynomial] = {}
        items = entries.items() if isinstance(entries, Mapping) else entries
        dim = len(self.coords)
        for (bidx, eidx), value in items:
            bidx = tuple(int(i) for i in bidx)
            eidx = tuple(int(i) for i in eidx)
            if len(bidx) != base_arity or len(eidx) != e_arity:
                raise FormError("index block arity mismatch")
            if any(i < 0 or i >= dim for i in bidx):
                raise FormError(f"base index {bidx} out of range")
            if any(i < 0 or i >= rank for i in eidx):
                raise FormError(f"frame index {eidx} out of range")
            value = value.embed(self.coords)
            kb = canonical_key(bidx)
            ke = canonical_key(eidx)
            if kb is None or ke is None:
                if not value.is_zero():
                    raise FormError(f"repeated index ({bidx},{eidx}) requires zero")
                continue
            sb, cb = kb
            se, ce = ke
            value = value * (sb * se)
            key = (cb, ce)
            prev = acc.get(key)
            if prev is None:
                if not value.is_zero():
                    acc[key] = value
            elif prev != value:
                raise FormError(f"antisymmetry violated at ({bidx},{eidx})")
        self.entries = acc

    def at(self, base_idx: Sequence[int], e_idx: Sequence[int]) -> Polynomial:
        zero = Polynomial.zero(self.coords)
        kb = canonical_key(tuple(base_idx))
        ke = canonical_key(tuple(e_idx))
        if kb is None or ke is None:
            return zero
        sb, cb = kb
        se, ce = ke
        value = self.entries.get((cb, ce))
        return zero if value is None else value * (sb * se)

    def items(self):
        return sorted(self.entries.items())

    def is_zero(self) -> bool:
        return not self.entries

    def _clone(self, entries):
        out = MixedForm(self.base_arity, self.e_arity, self.coords, self.rank)
        out.entries = entries
        return out

    def __add__(self, other):
        if not isinstance(other, MixedForm):
            return NotImplemented
        if (self.base_arity, self.e_arity, self.rank) != (
            other.base_arity,
            other.e_arity,
            other.rank,
        ):
            raise FormError("mixed form shape mismatch")
        out = dict(self.entries)
        for k, v in other.entries.items():
            s = out.get(k)
            s = v if s is None else s + v
            if s.is_zero():
                out.pop(k, None)
            else:
                out[k] = s
        return self._clone(out)

    def __neg__(self):
        return self._clone({k: -v for k, v in self.entries.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, c):
        if not isinstance(c, (int, Fraction, Polynomial)):
            return NotImplemented
        return self._clone({k: v * c for k, v in self.entries.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, MixedForm):
            return NotImplemented
        return (
            (self.base_arity, self.e_arity, self.rank)
            == (other.base_arity, other.e_arity, other.rank)
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.base_arity, self.e_arity, self.rank, tuple(self.items())))

    def as_eform(self) -> EForm:
        if self.base_arity != 0:
            raise FormError("only a base-arity-0 mixed form is an E-form")
        return EForm(
            self.e_arity,
            self.rank,
            self.coords,
            {e: v for (_, e), v in self.entries.items()},
        )

    def as_base_form(self) -> BaseForm:
        if self.e_arity != 0:
            raise FormError("only an e-arity-0 mixed form is a base form")
        return BaseForm(
            self.base_arity,
            self.coords,
            {b: v for (b, _), v in self.entries.items()},
        )

    @classmethod
    def from_eform(cls, form: EForm) -> "MixedForm":
        return cls(
            0,
            form.arity,
            form.coords,
            form.rank,
            {((), e): v for e, v in form.entries.items()},
        )

    @classmethod
    def from_base_form(cls, form: BaseForm, rank: int) -> "MixedForm":
        return cls(
            form.arity,
            0,
            form.coords,
            rank,
            {(b, ()): v for b, v in form.entries.items()},
        )

    @classmethod
    def zero(cls, base_arity: int, e_arity: int, coords, rank: int) -> "MixedForm":
        return cls(base_arity, e_arity, coords, rank)

    def __str__(self):
        if not self.entries:
            return "0"
        return "; ".join(
            "[{}|{}] = {}".format(
                ",".join(str(i + 1) for i in b),
                ",".join(str(i + 1) for i in e),
                v,
            )
            for (b, e), v in self.items()
        )

    def __repr__(self):
        return f"MixedForm(({self.base_arity},{self.e_arity}), {self})"


class ESection:
    """Section of the bundle, expressed in the global frame."""

    __slots__ = ("coords", "components")

    def __init__(self, coords: Sequence[str], components: Sequence[Polynomial]):
        self.coords = tuple(coords)
        self.components = tuple(p.embed(self.coords) for p in components)

    @property
    def rank(self) -> int:
        return len(self.components)

    @classmethod
    def frame(cls, coords, rank: int, a: int) -> "ESection":
        comps = [Polynomial.zero(coords) for _ in range(rank)]
        comps[a] = Polynomial.constant(coords, 1)
        return cls(coords, comps)

    @classmethod
    def zero(cls, coords, rank: int) -> "ESection":
        return cls(coords, [Polynomial.zero(coords)] * rank)

    def __add__(self, other):
        if not isinstance(other, ESection):
            return NotImplemented
        return ESection(self.coords, [a + b for a, b in zip(self.components, other.components)])

    def __neg__(self):
        return ESection(self.coords, [-a for a in self.components])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, c):
        if not isinstance(c, (int, Fraction, Polynomial)):
            return NotImplemented
        return ESection(self.coords, [a * c for a in self.components])

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, ESection):
            return NotImplemented
        return self.components == other.components

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def __str__(self):
        return "(" + ", ".join(str(c) for c in self.components) + ")"

    def __repr__(self):
        return f"ESection{self}"


def de_rham_d(omega: BaseForm) -> BaseForm:
    """Exterior derivative: (d w)(v_0..v_k) = sum_j (-1)^j d_{i_j} w(..no j..)."""
    coords = omega.coords
    out: dict[tuple, Polynomial] = {}
    from itertools import combinations

    for idx in combinations(range(len(coords)), omega.arity + 1):
        total = Polynomial.zero(coords)
        for j, i in enumerate(idx):
            rest = idx[:j] + idx[j + 1:]
            term = omega.at(rest).diff(coords[i])
            total = total + (term if j % 2 == 0 else -term)
        if not total.is_zero():
            out[idx] = total
    result = BaseForm(omega.arity + 1, coords)
    result.entries = out
    return result
