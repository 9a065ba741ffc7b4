"""Manifest ingestion: a JSON document declaring the structure data and the
checks to run against it.

Schema (all polynomial values are expression strings; all indices 1-based):

    {
      "name":      "fixture-name",
      "base":      ["x1", "x2", ...],
      "rank":      r,
      "n":         n,
      "anchor":    [[expr, ...dim], ...rank],          # anchor[a][i]
      "structure": {"a,b,c": expr, ...},               # C^a_{bc}, sparse
      "omega":     {"i1,..,i(n+1)": expr, ...},        # optional, default 0
      "J":         {"a1,..,an": expr, ...},            # optional, default 0
      "mu":        {"1": expr, ...},                   # optional dual section
      "mu_tower":  [ {"base": [..], "e": [..], "value": expr}, ...],
                                                       # optional, entries of
                                                       # every tower level
      "connection": [ {"i": i, "a": a, "b": b, "value": expr}, ...],
      "checks":    ["algebroid", ...]
    }

Sparse antisymmetric maps may list any index order; entries related by a
permutation are validated against each other (symmetrize-and-compare) and
repeated indices must carry the value "0".
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

from .algebroid import LieAlgebroidData
from .forms import BaseForm, EForm, FormError, MixedForm, canonical_key
from .moment import Connection
from .poly import ParseError, Polynomial, parse_poly

__all__ = ["Manifest", "ManifestError", "load_manifest", "CHECK_NAMES"]

CHECK_NAMES = (
    "algebroid",
    "compatible",
    "consistency",
    "dirac",
    "leibniz",
    "momentum-map",
    "momentum-section",
    "homotopy-section",
    "q-nilpotent",
    "twisted-qp",
)


class ManifestError(ValueError):
    pass


@dataclass
class Manifest:
    name: str
    data: LieAlgebroidData
    n: int
    omega: Optional[BaseForm] = None
    j: Optional[EForm] = None
    mu: Optional[EForm] = None
    mu_tower: Optional[list] = None
    connection: Optional[Connection] = None
    checks: tuple = ()

    @property
    def coords(self):
        return self.data.coords


def _parse(expr, coords, where):
    if not isinstance(expr, str):
        raise ManifestError(f"{where}: expected an expression string, got {expr!r}")
    try:
        return parse_poly(expr, coords)
    except ParseError as exc:
        raise ManifestError(f"{where}: {exc}") from exc


def _parse_key(key, arity, bound, where, one_based=True):
    try:
        idx = tuple(int(part) for part in key.split(","))
    except ValueError:
        raise ManifestError(f"{where}: bad index key {key!r}") from None
    if len(idx) != arity:
        raise ManifestError(f"{where}: key {key!r} must have {arity} indices")
    if one_based:
        idx = tuple(i - 1 for i in idx)
    if any(i < 0 or i >= bound for i in idx):
        raise ManifestError(f"{where}: key {key!r} out of range 1..{bound}")
    return idx


def _load_alt_map(mapping, arity, bound, coords, where):
    """Load a sparse antisymmetric map with symmetrize-and-compare
    validation; returns canonical entries."""
    entries = {}
    for key, expr in mapping.items():
        idx = _parse_key(key, arity, bound, where)
        value = _parse(expr, coords, f"{where}[{key}]")
        canon = canonical_key(idx)
        if canon is None:
            if not value.is_zero():
                raise ManifestError(
                    f"{where}[{key}]: repeated index requires the value 0"
                )
            continue
        sign, sorted_idx = canon
        value = value * sign
        if sorted_idx in entries and entries[sorted_idx] != value:
            raise ManifestError(
                f"{where}[{key}]: antisymmetry mismatch with an earlier entry"
            )
        entries.setdefault(sorted_idx, value)
    return {k: v for k, v in entries.items() if not v.is_zero()}


def load_manifest(path) -> Manifest:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ManifestError(f"{path}: not valid JSON: {exc}") from exc
    return parse_manifest(doc, str(path))


def parse_manifest(doc: dict, source: str = "<manifest>") -> Manifest:
    for required in ("name", "base", "rank", "n", "anchor"):
        if required not in doc:
            raise ManifestError(f"{source}: missing field {required!r}")
    coords = tuple(doc["base"])
    rank = int(doc["rank"])
    n = int(doc["n"])
    if n < 1:
        raise ManifestError(f"{source}: n must be at least 1")
    dim = len(coords)

    anchor_rows = doc["anchor"]
    if len(anchor_rows) != rank or any(len(row) != dim for row in anchor_rows):
        raise ManifestError(f"{source}: anchor must be rank x dim")
    anchor = [
        [_parse(expr, coords, f"anchor[{a + 1}][{i + 1}]") for i, expr in enumerate(row)]
        for a, row in enumerate(anchor_rows)
    ]

    zero = Polynomial.zero(coords)
    structure = [[[zero for _ in range(rank)] for _ in range(rank)] for _ in range(rank)]
    struct_map = doc.get("structure", {})
    seen = {}
    for key, expr in struct_map.items():
        idx = _parse_key(key, 3, rank, "structure")
        a, b, c = idx
        value = _parse(expr, coords, f"structure[{key}]")
        if b == c:
            if not value.is_zero():
                raise ManifestError(f"structure[{key}]: repeated lower index requires 0")
            continue
        canon = (a, b, c) if b < c else (a, c, b)
        canon_value = value if b < c else -value
        if canon in seen and seen[canon] != canon_value:
            raise ManifestError(f"structure[{key}]: antisymmetry mismatch")
        seen[canon] = canon_value
    for (a, b, c), value in seen.items():
        structure[a][b][c] = value
        structure[a][c][b] = -value

    try:
        data = LieAlgebroidData(coords, rank, anchor, structure)
    except ValueError as exc:
        raise ManifestError(f"{source}: {exc}") from exc

    omega = None
    if "omega" in doc:
        entries = _load_alt_map(doc["omega"], n + 1, dim, coords, "omega")
        omega = BaseForm(n + 1, coords, entries)

    j = None
    if "J" in doc:
        entries = _load_alt_map(doc["J"], n, rank, coords, "J")
        j = EForm(n, rank, coords, entries)

    mu = None
    if "mu" in doc:
        entries = _load_alt_map(doc["mu"], 1, rank, coords, "mu")
        mu = EForm(1, rank, coords, entries)

    mu_tower = None
    if "mu_tower" in doc:
        per_level = {k: {} for k in range(n)}
        for rec in doc["mu_tower"]:
            b_idx = tuple(int(i) - 1 for i in rec.get("base", ()))
            e_idx = tuple(int(i) - 1 for i in rec.get("e", ()))
            k = len(b_idx)
            if k >= n or len(e_idx) != n - k:
                raise ManifestError(
                    f"mu_tower entry {rec}: arities must be (k, n-k) with k < n"
                )
            value = _parse(rec["value"], coords, f"mu_tower{rec}")
            per_level[k][(b_idx, e_idx)] = value
        mu_tower = []
        for k in range(n):
            try:
                mu_tower.append(MixedForm(k, n - k, coords, rank, per_level[k]))
            except FormError as exc:
                raise ManifestError(f"mu_tower level {k}: {exc}") from exc

    connection = None
    if "connection" in doc:
        gamma = [[[zero for _ in range(rank)] for _ in range(rank)] for _ in range(dim)]
        for rec in doc["connection"]:
            i, a, b = int(rec["i"]) - 1, int(rec["a"]) - 1, int(rec["b"]) - 1
            if not (0 <= i < dim and 0 <= a < rank and 0 <= b < rank):
                raise ManifestError(f"connection entry {rec}: index out of range")
            gamma[i][a][b] = _parse(rec["value"], coords, f"connection{rec}")
        connection = Connection(coords, rank, gamma)
    elif mu is not None or mu_tower is not None:
        connection = Connection.flat(coords, rank)

    checks = tuple(doc.get("checks", ()))
    for c in checks:
        if c not in CHECK_NAMES and c != "all":
            raise ManifestError(f"{source}: unknown check name {c!r}")

    return Manifest(
        name=str(doc["name"]),
        data=data,
        n=n,
        omega=omega,
        j=j,
        mu=mu,
        mu_tower=mu_tower,
        connection=connection,
        checks=checks,
    )
