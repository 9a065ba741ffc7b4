#!/usr/bin/env python3
"""Regenerate the manifest files in fixtures/ from the example catalog.

Run from the repository root:  python3 scripts/regenerate_fixtures.py
The emitted JSON is deterministic, so a clean run leaves git clean.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from enform import zoo  # noqa: E402


def poly_map(form, one_based=True):
    out = {}
    for idx, value in form.items():
        key = ",".join(str(i + 1) for i in idx)
        out[key] = str(value)
    return out


def structure_map(data):
    out = {}
    for a in range(data.rank):
        for b in range(data.rank):
            for c in range(b + 1, data.rank):
                value = data.c(a, b, c)
                if not value.is_zero():
                    out[f"{a + 1},{b + 1},{c + 1}"] = str(value)
    return out


def anchor_rows(data):
    return [[str(data.rho(a, i)) for i in range(data.dim)] for a in range(data.rank)]


def tower_records(tower):
    out = []
    for level in tower:
        for (b_idx, e_idx), value in level.items():
            out.append(
                {
                    "base": [i + 1 for i in b_idx],
                    "e": [i + 1 for i in e_idx],
                    "value": str(value),
                }
            )
    return out


def base_manifest(name, data, n, checks):
    return {
        "name": name,
        "base": list(data.coords),
        "rank": data.rank,
        "n": n,
        "anchor": anchor_rows(data),
        "structure": structure_map(data),
        "checks": list(checks),
    }


GEOMETRY_CHECKS = [
    "algebroid",
    "compatible",
    "consistency",
    "dirac",
    "leibniz",
    "q-nilpotent",
    "twisted-qp",
]


def build_all():
    manifests = {}

    data, omega, j, n = zoo.tangent_r2_liouville()
    doc = base_manifest("tangent-r2-liouville", data, n, GEOMETRY_CHECKS)
    doc["omega"] = poly_map(omega)
    doc["J"] = poly_map(j)
    manifests["tangent-r2-liouville"] = doc

    data = zoo.so3_action_r3()
    doc = base_manifest("so3-action-r3", data, 2, GEOMETRY_CHECKS)
    manifests["so3-action-r3"] = doc

    data = zoo.so3_action_r3(mutated=True)
    doc = base_manifest("so3-action-r3-mutated", data, 2, GEOMETRY_CHECKS)
    manifests["mutations/so3-action-r3-mutated"] = doc

    data, omega, j, n, _pi = zoo.poisson_r2()
    doc = base_manifest("poisson-r2", data, n, GEOMETRY_CHECKS)
    doc["omega"] = poly_map(omega)
    doc["J"] = poly_map(j)
    manifests["poisson-r2"] = doc

    data, omega, j, n, _pi = zoo.twisted_poisson_r3()
    doc = base_manifest("twisted-poisson-r3", data, n, GEOMETRY_CHECKS)
    doc["omega"] = poly_map(omega)
    doc["J"] = poly_map(j)
    manifests["twisted-poisson-r3"] = doc

    data, omega, j, n, _pi = zoo.twisted_poisson_r3(mutate_j=True)
    doc = base_manifest("twisted-poisson-r3-j-mutated", data, n, GEOMETRY_CHECKS)
    doc["omega"] = poly_map(omega)
    doc["J"] = poly_map(j)
    manifests["mutations/twisted-poisson-r3-j-mutated"] = doc

    data, omega, j, n = zoo.translations_r4()
    doc = base_manifest("translations-r4", data, n, GEOMETRY_CHECKS)
    doc["omega"] = poly_map(omega)
    doc["J"] = poly_map(j)
    manifests["translations-r4"] = doc

    data, omega, j, n = zoo.translations_r4(mutate_omega=True)
    doc = base_manifest("translations-r4-omega-nonclosed", data, n, GEOMETRY_CHECKS)
    doc["omega"] = poly_map(omega)
    doc["J"] = poly_map(j)
    manifests["mutations/translations-r4-omega-nonclosed"] = doc

    data, omega, j, n = zoo.translations_r4(mutate_j=True)
    doc = base_manifest("translations-r4-j-mutated", data, n, GEOMETRY_CHECKS)
    doc["omega"] = poly_map(omega)
    doc["J"] = poly_map(j)
    manifests["mutations/translations-r4-j-mutated"] = doc

    data, omega, mu, n = zoo.so2_momentum_r2()
    doc = base_manifest(
        "so2-momentum-r2",
        data,
        n,
        ["algebroid", "momentum-map", "momentum-section", "homotopy-section", "compatible"],
    )
    doc["omega"] = poly_map(omega)
    doc["mu"] = poly_map(mu)
    doc["J"] = poly_map(mu)
    manifests["so2-momentum-r2"] = doc

    data, omega, tower, n = zoo.rank2_abelian_r3()
    doc = base_manifest(
        "rank2-abelian-r3-homotopy",
        data,
        n,
        ["algebroid", "homotopy-section", "compatible", "q-nilpotent", "twisted-qp"],
    )
    doc["omega"] = poly_map(omega)
    doc["mu_tower"] = tower_records(tower)
    doc["J"] = {
        ",".join(str(i + 1) for i in e_idx): str(v)
        for (_b, e_idx), v in tower[0].items()
    }
    manifests["rank2-abelian-r3-homotopy"] = doc

    return manifests


def main():
    root = Path(__file__).resolve().parent.parent / "fixtures"
    (root / "mutations").mkdir(parents=True, exist_ok=True)
    for rel, doc in sorted(build_all().items()):
        path = root / f"{rel}.json"
        path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
        print(f"wrote {path}")


if __name__ == "__main__":
    main()
