"""Claim lines: ``CLAIM <name> PASS|FAIL lhs=<exact> rhs=<exact> witness=<codeword>``."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .scalar import ExtScalar, format_scalar


def render(x) -> str:
    if isinstance(x, bool):
        return str(x).lower()
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, ExtScalar):
        return format_scalar(x).replace(" ", "")
    if isinstance(x, float) and x == float("inf"):
        return "inf"
    return str(x)


def approx(x) -> str | None:
    try:
        return f"{float(x):.12g}"
    except (TypeError, ValueError):
        return None


@dataclass(frozen=True)
class Claim:
    name: str
    passed: bool
    lhs: object = "-"
    rhs: object = "-"
    witness: str = "-"

    def line(self, with_approx: bool = False) -> str:
        text = (
            f"CLAIM {self.name} {'PASS' if self.passed else 'FAIL'} "
            f"lhs={render(self.lhs)} rhs={render(self.rhs)} witness={self.witness or '-'}"
        )
        if with_approx:
            extra = [approx(v) for v in (self.lhs, self.rhs)]
            if any(extra):
                text += f"  [approx lhs~{extra[0] or '-'} rhs~{extra[1] or '-'}]"
        return text


def all_pass(claims) -> bool:
    return all(c.passed for c in claims)
