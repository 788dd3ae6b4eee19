"""Finite prefix-free machine tables.

A table maps binary codewords to outputs. It stands in for the universal
prefix-free machine or for a computable measure machine: at this scale
every table's domain measure (its Kraft sum) is an exact dyadic rational.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Union

from .linalg import ExactProjection, InvariantError, OrthoSet


class TableError(ValueError):
    """A raw table violates a machine-table invariant."""


@dataclass(frozen=True)
class Ortho:
    vectors: OrthoSet

    @property
    def n_qubits(self) -> int:
        return self.vectors.n_qubits

    @property
    def rank(self) -> int:
        return len(self.vectors)

    @property
    def projection(self) -> ExactProjection:
        return self.vectors.projection


@dataclass(frozen=True)
class Proj:
    projection: ExactProjection

    @property
    def n_qubits(self) -> int:
        return self.projection.n_qubits

    @property
    def rank(self) -> int:
        return self.projection.rank


@dataclass(frozen=True)
class Classical:
    bits: str


@dataclass(frozen=True)
class Nat:
    value: int


MachineOutput = Union[Ortho, Proj, Classical, Nat]


def is_quantum(out: MachineOutput) -> bool:
    return isinstance(out, (Ortho, Proj))


def _check_codeword(code: str) -> None:
    if not code or set(code) - {"0", "1"}:
        raise TableError(f"codeword {code!r} is not a nonempty 0/1 string")


def prefix_violation(codes: Iterable[str]) -> tuple[str, str] | None:
    """A pair ``(u, w)`` with ``u`` a proper prefix of ``w``, if any."""
    ordered = sorted(codes)
    # in lexicographic order a prefix sorts right before its extensions
    for u, w in zip(ordered, ordered[1:]):
        if w.startswith(u):
            return u, w
    return None


def kraft_of(codes: Iterable[str]) -> Fraction:
    codes = list(codes)
    if not codes:
        return Fraction(0)
    top = max(map(len, codes))
    return Fraction(sum(1 << (top - len(c)) for c in codes), 1 << top)


@dataclass
class MachineTable:
    entries: dict[str, MachineOutput]
    label: str = "machine"
    cmm_declared_measure: Fraction | None = None

    def __post_init__(self):
        validate_table(self.entries, self.cmm_declared_measure)
        self.entries = dict(self.entries)

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries.items())

    def __getitem__(self, code: str) -> MachineOutput:
        return self.entries[code]

    def quantum_entries(self, n_qubits: int | None = None):
        for code, out in self.entries.items():
            if is_quantum(out) and (n_qubits is None or out.n_qubits == n_qubits):
                yield code, out


def validate_table(
    entries: Mapping[str, MachineOutput], declared_measure: Fraction | None = None
) -> None:
    """Raise :class:`TableError` naming the first violation found."""
    for code, out in entries.items():
        _check_codeword(code)
        if not isinstance(out, (Ortho, Proj, Classical, Nat)):
            raise TableError(f"codeword {code!r}: unsupported output {out!r}")
        if isinstance(out, Classical) and set(out.bits) - {"0", "1"}:
            raise TableError(f"codeword {code!r}: output {out.bits!r} is not a bitstring")
        if isinstance(out, Nat) and out.value < 0:
            raise TableError(f"codeword {code!r}: negative natural {out.value}")
    bad = prefix_violation(entries)
    if bad is not None:
        raise TableError(f'prefix violation: "{bad[0]}" < "{bad[1]}"')
    total = kraft_of(entries)
    if total > 1:
        raise TableError(f"Kraft sum {total} exceeds 1")
    if declared_measure is not None and Fraction(declared_measure) != total:
        raise TableError(f"declared measure {declared_measure} != Kraft sum {total}")


def build_table(raw: Mapping[str, object], label: str = "machine", measure=None) -> MachineTable:
    """Validate a raw mapping; OrthoSet values become :class:`Ortho`, and so on.

    Orthonormality of raw vector lists is checked here, so a bad family is
    reported against its codeword.
    """
    entries: dict[str, MachineOutput] = {}
    for code, out in raw.items():
        if isinstance(out, OrthoSet):
            out = Ortho(out)
        elif isinstance(out, ExactProjection):
            out = Proj(out)
        elif isinstance(out, (list, tuple)):
            try:
                out = Ortho(OrthoSet(out))
            except InvariantError as exc:
                raise TableError(f"codeword {code!r}: {exc}") from None
        entries[code] = out
    return MachineTable(entries, label, None if measure is None else Fraction(measure))


def kraft_sum(t: MachineTable) -> Fraction:
    return kraft_of(t.entries)


def k_of(t: MachineTable, target: MachineOutput) -> float | int:
    """Shortest codeword length with output exactly ``target``; ``math.inf`` if none."""
    best = math.inf
    for code, out in t.entries.items():
        if out == target and len(code) < best:
            best = len(code)
    return best


def encode_natural(n: int) -> str:
    """Self-delimiting code ``0^n 1``."""
    if n < 0:
        raise ValueError("naturals only")
    return "0" * n + "1"


def k_enc(n: int) -> int:
    return n + 1


def natural_table(upto: int, label: str = "enc") -> MachineTable:
    return MachineTable({encode_natural(n): Nat(n) for n in range(upto + 1)}, label)


def wrap_with_prefix(t: MachineTable, r: str) -> MachineTable:
    """Prepend ``r`` to every codeword (embedding with coding constant ``|r|``)."""
    _check_codeword(r)
    measure = t.cmm_declared_measure
    return MachineTable(
        {r + code: out for code, out in t.entries.items()},
        f"{t.label}@{r}",
        None if measure is None else measure / (1 << len(r)),
    )


def union(*tables: MachineTable, label: str = "union") -> MachineTable:
    merged: dict[str, MachineOutput] = {}
    for t in tables:
        for code, out in t.entries.items():
            if code in merged:
                raise TableError(f"codeword {code!r} appears in two tables")
            merged[code] = out
    return MachineTable(merged, label)
