"""Batch verification CLI.

    enform verify <manifest.json> [--check NAME]... [--seed N] [--stable]
                  [--json | --text]

Exit codes: 0 when every requested (non-skipped) check passes, 1 when any
check fails, 2 on usage, parse or schema errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from random import Random

from .algebroid import check_lie_algebroid
from .compat import check_compatible, check_consistency
from .conventions import convention_fingerprint
from .forms import BaseForm, EForm
from .manifest import CHECK_NAMES, Manifest, ManifestError, load_manifest
from .moment import (
    check_homotopy_momentum_section,
    check_momentum_map,
    check_momentum_section,
)
from .qgraded import check_q_comp_nilpotent, check_twisted_qp
from .verdict import Verdict
from .vinogradov import check_higher_dirac, check_leibniz

__all__ = ["main", "run_verify"]


def _zero_omega(m: Manifest) -> BaseForm:
    return BaseForm.zero(m.n + 1, m.coords)


def _zero_j(m: Manifest) -> EForm:
    return EForm.zero(m.n, m.data.rank, m.coords)


def _dispatch(m: Manifest, check: str, rng: Random):
    """Returns a Verdict, or a skip-reason string when inputs are missing."""
    omega = m.omega if m.omega is not None else _zero_omega(m)
    j = m.j if m.j is not None else _zero_j(m)
    if check == "algebroid":
        return check_lie_algebroid(m.data)
    if check == "compatible":
        return check_compatible(j, omega, m.data)
    if check == "consistency":
        return check_consistency(omega, m.data)
    if check == "dirac":
        return check_higher_dirac(j, omega, m.data, sample_budget=8, rng=rng)
    if check == "leibniz":
        return check_leibniz(omega, m.data, m.n, sample_budget=8, rng=rng)
    if check == "momentum-map":
        if m.mu is None:
            return "no dual section in the manifest"
        if m.n != 1:
            return "momentum maps need n = 1"
        return check_momentum_map(m.mu, m.data, omega)
    if check == "momentum-section":
        if m.mu is None:
            return "no dual section in the manifest"
        if m.n != 1:
            return "momentum sections need n = 1"
        return check_momentum_section(m.mu, m.connection, omega, m.data)
    if check == "homotopy-section":
        tower = m.mu_tower
        if tower is None and m.mu is not None and m.n == 1:
            from .forms import MixedForm

            tower = [MixedForm.from_eform(m.mu)]
        if tower is None:
            return "no tower in the manifest"
        return check_homotopy_momentum_section(tower, m.connection, omega, m.data)
    if check == "q-nilpotent":
        return check_q_comp_nilpotent(m.data, j, omega, m.n)
    if check == "twisted-qp":
        return check_twisted_qp(m.data, j, omega, m.n)
    raise ValueError(f"unknown check {check!r}")


def run_verify(m: Manifest, checks, seed: int = 7, stable: bool = False) -> dict:
    """Run the requested checks and assemble a deterministic report dict."""
    results = []
    all_ok = True
    for name in checks:
        rng = Random(seed)
        start = time.perf_counter()
        outcome = _dispatch(m, name, rng)
        elapsed = time.perf_counter() - start
        if isinstance(outcome, str):
            entry = {
                "check": name,
                "verdict": "skipped",
                "residuals": [],
                "reason": outcome,
            }
        else:
            entry = {
                "check": name,
                "verdict": "pass" if outcome.ok else "fail",
                "residuals": sorted(outcome.all_residuals()),
            }
            if not outcome.ok:
                all_ok = False
        if not stable:
            entry["seconds"] = round(elapsed, 4)
        results.append(entry)
    report = {
        "fixture": m.name,
        "n": m.n,
        "convention": convention_fingerprint(),
        "seed": seed,
        "results": results,
        "ok": all_ok,
    }
    return report


def _expand_checks(requested, manifest_checks):
    if not requested:
        requested = manifest_checks or ("all",)
    out = []
    for name in requested:
        if name == "all":
            out.extend(CHECK_NAMES)
        else:
            out.append(name)
    seen = set()
    deduped = []
    for name in out:
        if name not in seen:
            seen.add(name)
            deduped.append(name)
    return tuple(deduped)


def _emit_text(report: dict, out):
    print(f"fixture: {report['fixture']} (n={report['n']})", file=out)
    print(f"convention: {report['convention']}  seed: {report['seed']}", file=out)
    for entry in report["results"]:
        line = f"{entry['verdict'].upper():7s} {entry['check']}"
        if "seconds" in entry:
            line += f"  [{entry['seconds']}s]"
        if entry["verdict"] == "skipped":
            line += f"  ({entry['reason']})"
        print(line, file=out)
        for residual in entry["residuals"]:
            print(f"        residual: {residual}", file=out)
    print("result: " + ("all pass" if report["ok"] else "FAILURES"), file=out)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="enform",
        description="Exact verification of algebroid and graded structure identities.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    verify = sub.add_parser("verify", help="run checks from a manifest")
    verify.add_argument("manifest", help="path to a manifest JSON file")
    verify.add_argument(
        "--check",
        action="append",
        default=None,
        help="check name (repeatable); overrides the manifest's list",
    )
    verify.add_argument("--seed", type=int, default=7, help="seed for randomized checks")
    verify.add_argument(
        "--stable",
        action="store_true",
        help="suppress timing fields for byte-identical reports",
    )
    fmt = verify.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="as_json", action="store_true")
    fmt.add_argument("--text", dest="as_json", action="store_false")
    verify.set_defaults(as_json=False)

    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0

    if args.command != "verify":  # pragma: no cover - argparse enforces this
        parser.print_usage()
        return 2

    try:
        manifest = load_manifest(args.manifest)
        checks = _expand_checks(tuple(args.check) if args.check else (), manifest.checks)
        for name in checks:
            if name not in CHECK_NAMES:
                raise ManifestError(f"unknown check name {name!r}")
        report = run_verify(manifest, checks, seed=args.seed, stable=args.stable)
    except (ManifestError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    if args.as_json:
        json.dump(report, sys.stdout, indent=2, sort_keys=True)
        print()
    else:
        _emit_text(report, sys.stdout)
    return 0 if report["ok"] else 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
