"""Structured pass/fail results with exact residuals.

Residual strings use the same expression grammar as manifests (extended with
generator names), so a failing check shows exactly which combination refuses
to normalize to zero.
"""

from __future__ import annotations

from dataclasses import dataclass, field

__all__ = ["Verdict"]


@dataclass(frozen=True)
class Verdict:
    label: str
    ok: bool
    residuals: tuple = ()
    subs: tuple = ()

    @staticmethod
    def from_residuals(label: str, residuals) -> "Verdict":
        residuals = tuple(residuals)
        return Verdict(label, not residuals, residuals)

    @staticmethod
    def combine(label: str, subs) -> "Verdict":
        subs = tuple(subs)
        return Verdict(label, all(s.ok for s in subs), (), subs)

    def all_residuals(self) -> tuple:
        out = list(self.residuals)
        for s in self.subs:
            out.extend(s.all_residuals())
        return tuple(out)

    def walk(self):
        yield self
        for s in self.subs:
            yield from s.walk()

    def __str__(self):
        status = "pass" if self.ok else "FAIL"
        lines = [f"{status}: {self.label}"]
        for r in self.residuals:
            lines.append(f"    residual {r}")
        for s in self.subs:
            for line in str(s).splitlines():
                lines.append("  " + line)
        return "\n".join(lines)
