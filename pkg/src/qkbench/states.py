"""Finite coherent state prefixes rho_1, ..., rho_N.

Level ``k`` is a density matrix on ``k`` qubits and tracing out its last
qubit must give level ``k - 1`` exactly.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .linalg import (
    DensityMatrix,
    InvariantError,
    OrthoSet,
    QVector,
    add,
    partial_trace,
    scale,
    zeros,
)
from .scalar import INV_SQRT2, ExtScalar


class DensityPrefix:
    __slots__ = ("levels",)

    def __init__(self, levels: Sequence[DensityMatrix], *, check: bool = True):
        levels = tuple(levels)
        if not levels:
            raise InvariantError("a state prefix needs at least one level")
        for k, rho in enumerate(levels, start=1):
            if rho.n_qubits != k:
                raise InvariantError(f"level {k} has {rho.n_qubits} qubits")
        if check:
            for k in range(1, len(levels)):
                if partial_trace(levels[k]) != levels[k - 1]:
                    raise InvariantError(f"level {k + 1} does not trace down to level {k}")
        self.levels = levels

    @property
    def depth(self) -> int:
        return len(self.levels)

    def level(self, n: int) -> DensityMatrix:
        """``rho_n``, 1-based."""
        if not 1 <= n <= self.depth:
            raise IndexError(f"level {n} outside 1..{self.depth}")
        return self.levels[n - 1]

    def is_coherent(self) -> bool:
        return all(partial_trace(self.levels[k]) == self.levels[k - 1] for k in range(1, self.depth))

    def __eq__(self, other):
        return isinstance(other, DensityPrefix) and self.levels == other.levels

    def __hash__(self):
        return hash(self.levels)

    def __repr__(self):
        return f"DensityPrefix(depth={self.depth})"


class SystemB:
    """Finite list of one-qubit orthonormal bases ``(b_0^n, b_1^n)``."""

    __slots__ = ("bases",)

    def __init__(self, bases: Sequence[Sequence[QVector]]):
        checked = []
        for n, pair in enumerate(bases, start=1):
            pair = tuple(pair)
            if len(pair) != 2 or any(v.n_qubits != 1 for v in pair):
                raise InvariantError(f"basis {n} is not a pair of one-qubit vectors")
            OrthoSet(pair)
            checked.append(pair)
        self.bases = tuple(checked)

    def __len__(self):
        return len(self.bases)

    def __eq__(self, other):
        return isinstance(other, SystemB) and self.bases == other.bases

    @classmethod
    def standard(cls, length: int) -> SystemB:
        return cls([(QVector.basis(1, 0), QVector.basis(1, 1))] * length)

    @classmethod
    def hadamard(cls, length: int) -> SystemB:
        plus = QVector([INV_SQRT2, INV_SQRT2])
        minus = QVector([INV_SQRT2, -INV_SQRT2])
        return cls([(plus, minus)] * length)

    def product_vector(self, bits: str) -> QVector:
        if len(bits) > len(self.bases):
            raise ValueError(f"{len(bits)} bits but the system has {len(self.bases)} bases")
        v = None
        for n, bit in enumerate(bits):
            b = self.bases[n][int(bit)]
            v = b if v is None else v.tensor(b)
        return v

    def product_basis(self, n: int) -> OrthoSet:
        """Basis of C^(2^n) made of all n-fold products, ordered by bit label."""
        return OrthoSet(
            [self.product_vector(format(i, f"0{n}b")) for i in range(1 << n)], check=False
        )


def tracial_prefix(depth: int) -> DensityPrefix:
    if depth < 1:
        raise ValueError("depth must be at least 1")
    return DensityPrefix([DensityMatrix.tracial(k) for k in range(1, depth + 1)], check=False)


def classical_prefix(bits: str) -> DensityPrefix:
    if not bits:
        raise ValueError("need at least one bit")
    return DensityPrefix(
        [DensityMatrix.classical(bits[:k]) for k in range(1, len(bits) + 1)], check=False
    )


def product_prefix(system: SystemB, bits: str) -> DensityPrefix:
    if len(bits) > len(system):
        raise ValueError(f"{len(bits)} bits but the system has {len(system)} bases")
    if not bits:
        raise ValueError("need at least one bit")
    return DensityPrefix(
        [DensityMatrix.pure(system.product_vector(bits[:k])) for k in range(1, len(bits) + 1)],
        check=False,
    )


def induced_bitstring(system: SystemB, prefix: DensityPrefix) -> str | None:
    """The bitstring ``x`` with ``product_prefix(system, x) == prefix``, or None."""
    if prefix.depth > len(system):
        return None
    bits = ""
    for rho in prefix.levels:
        for bit in "01":
            if DensityMatrix.pure(system.product_vector(bits + bit)) == rho:
                bits += bit
                break
        else:
            return None
    return bits


def mixture_prefix(weights: Sequence, prefixes: Sequence[DensityPrefix]) -> DensityPrefix:
    weights = [Fraction(w) for w in weights]
    if len(weights) != len(prefixes) or not prefixes:
        raise ValueError("need one positive weight per component")
    if any(w <= 0 for w in weights):
        raise ValueError("mixture weights must be positive")
    if sum(weights) != 1:
        raise ValueError(f"mixture weights sum to {sum(weights)}, not 1")
    depth = prefixes[0].depth
    if any(p.depth != depth for p in prefixes):
        raise ValueError("mixture components have different depths")
    levels = []
    for k in range(depth):
        dim = 1 << (k + 1)
        acc = zeros(dim)
        for w, p in zip(weights, prefixes):
            acc = add(acc, scale(p.levels[k].matrix, ExtScalar(w)))
        levels.append(DensityMatrix(acc, check=False))
    return DensityPrefix(levels, check=False)
