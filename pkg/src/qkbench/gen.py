"""Seeded random generators for exact objects.

Everything stays inside Q(i)(sqrt2): one-qubit bases are drawn from a fixed
pool (standard, Hadamard, i-Hadamard and two Pythagorean rotations), and
multi-qubit bases are tensor products optionally mixed by exact Givens
rotations.
"""
from __future__ import annotations

import random
from fractions import Fraction
from typing import Sequence

from .linalg import DensityMatrix, ExactProjection, OrthoSet, QVector, add, scale, zeros
from .machines import MachineTable, Nat, Ortho, Classical, Proj
from .qtests import QSigma1Prefix, StrongSolovayTestPrefix
from .scalar import I, INV_SQRT2, ONE, ZERO, ExtScalar
from .states import DensityPrefix, SystemB, mixture_prefix, product_prefix

# (cos, sin) pairs with exact entries
ROTATIONS = (
    (INV_SQRT2, INV_SQRT2),
    (ExtScalar(Fraction(3, 5)), ExtScalar(Fraction(4, 5))),
    (ExtScalar(Fraction(5, 13)), ExtScalar(Fraction(12, 13))),
)


def one_qubit_bases() -> list[tuple[QVector, QVector]]:
    h = INV_SQRT2
    ih = INV_SQRT2 * I
    out = [
        (QVector([ONE, ZERO]), QVector([ZERO, ONE])),
        (QVector([h, h]), QVector([h, -h])),
        (QVector([h, ih]), QVector([h, -ih])),
    ]
    for c, s in ROTATIONS[1:]:
        out.append((QVector([c, s]), QVector([-s, c])))
    return out


_POOL = one_qubit_bases()


def random_system(rng: random.Random, length: int) -> SystemB:
    return SystemB([rng.choice(_POOL) for _ in range(length)])


def _givens(u: QVector, v: QVector, c: ExtScalar, s: ExtScalar) -> tuple[QVector, QVector]:
    a = QVector([c * x + s * y for x, y in zip(u.entries, v.entries)])
    b = QVector([c * y - s * x for x, y in zip(u.entries, v.entries)])
    return a, b


def random_basis(rng: random.Random, n: int, rotations: int = 0) -> list[QVector]:
    """A full orthonormal basis of C^(2^n)."""
    vecs = list(random_system(rng, n).product_basis(n)) if n else [QVector([ONE])]
    for _ in range(rotations if len(vecs) > 1 else 0):
        i, j = rng.sample(range(len(vecs)), 2)
        c, s = rng.choice(ROTATIONS)
        vecs[i], vecs[j] = _givens(vecs[i], vecs[j], c, s)
    return vecs


def random_orthoset(rng: random.Random, n: int, size: int | None = None, rotations: int = 0) -> OrthoSet:
    basis = random_basis(rng, n, rotations)
    if size is None:
        size = rng.randint(1, len(basis))
    return OrthoSet(rng.sample(basis, size), check=False)


def random_projection(rng: random.Random, n: int, rank: int | None = None, rotations: int = 0) -> ExactProjection:
    if rank == 0:
        return ExactProjection.zero(n)
    return random_orthoset(rng, n, rank, rotations).projection


def random_weights(rng: random.Random, k: int, grain: int = 6) -> list[Fraction]:
    """``k`` positive rationals summing to 1."""
    raw = [rng.randint(1, grain) for _ in range(k)]
    total = sum(raw)
    return [Fraction(r, total) for r in raw]


def random_density(rng: random.Random, n: int, terms: int | None = None, rotations: int = 1) -> DensityMatrix:
    """Rational mixture of pure states from random exact bases."""
    if terms is None:
        terms = rng.randint(1, 3)
    dim = 1 << n
    acc = zeros(dim)
    for w in random_weights(rng, terms):
        v = rng.choice(random_basis(rng, n, rotations))
        acc = add(acc, scale(v.projector(), ExtScalar(w)))
    return DensityMatrix(acc, check=False)


def random_prefix(rng: random.Random, depth: int, terms: int | None = None) -> DensityPrefix:
    """Coherent prefix: a mixture of product prefixes over random systems."""
    if terms is None:
        terms = rng.randint(1, 3)
    parts = []
    for _ in range(terms):
        bits = "".join(rng.choice("01") for _ in range(depth))
        parts.append(product_prefix(random_system(rng, depth), bits))
    return mixture_prefix(random_weights(rng, terms), parts)


def random_codewords(rng: random.Random, count: int, max_len: int = 8, keep: float = 1.0) -> list[str]:
    """Leaves of a random binary tree; ``keep < 1`` drops leaves at random."""
    leaves = [""]
    while len(leaves) < count:
        splittable = [x for x in leaves if len(x) < max_len]
        if not splittable:
            break
        x = rng.choice(splittable)
        leaves.remove(x)
        leaves += [x + "0", x + "1"]
    if leaves == [""]:
        leaves = ["0", "1"]
    kept = [x for x in leaves if rng.random() < keep]
    return sorted(kept or leaves[:1])


def random_table(
    rng: random.Random,
    entries: int = 8,
    max_qubits: int = 3,
    *,
    singleton_bits: Sequence[str] = (),
    classical: float = 0.0,
    rotations: int = 0,
    keep: float = 1.0,
    label: str = "random",
) -> MachineTable:
    """Random prefix-free table with quantum outputs.

    Every string in ``singleton_bits`` is guaranteed a codeword whose output
    is the singleton ``{|x>}``; a fraction ``classical`` of the remaining
    entries carry classical or natural outputs.
    """
    codes = random_codewords(rng, max(entries, len(singleton_bits)), keep=keep)
    rng.shuffle(codes)
    out = {}
    for x, code in zip(singleton_bits, codes):
        out[code] = Ortho(OrthoSet([QVector.from_bits(x)], check=False))
    for code in codes[len(singleton_bits):]:
        if rng.random() < classical:
            if rng.random() < 0.5:
                out[code] = Nat(rng.randint(0, 6))
            else:
                out[code] = Classical("".join(rng.choice("01") for _ in range(rng.randint(0, 4))))
            continue
        n = rng.randint(1, max_qubits)
        if rng.random() < 0.3:
            out[code] = Ortho(OrthoSet([QVector.from_bits(format(rng.randrange(1 << n), f"0{n}b"))], check=False))
        elif rng.random() < 0.5:
            out[code] = Ortho(random_orthoset(rng, n, rotations=rotations))
        else:
            out[code] = Proj(random_projection(rng, n, rng.randint(1, 1 << n), rotations))
    return MachineTable(out, label)


def random_qsigma(rng: random.Random, depth: int) -> QSigma1Prefix:
    """Nested projections built on one random product system.

    ``p_i`` projects onto the product vectors labelled by a set ``S_i`` of
    ``i``-bit strings with ``S_i x {0,1} <= S_{i+1}``.
    """
    system = random_system(rng, depth)
    labels: set[str] = set()
    projs = []
    for i in range(1, depth + 1):
        labels = {x + b for x in labels for b in "01"}
        for x in (format(k, f"0{i}b") for k in range(1 << i)):
            if rng.random() < 0.2:
                labels.add(x)
        vecs = [system.product_vector(x) for x in sorted(labels)]
        projs.append(OrthoSet(vecs, check=False).projection if vecs else ExactProjection.zero(i))
    return QSigma1Prefix(projs, check=False)


def random_test(
    rng: random.Random,
    members: int,
    max_qubits: int = 4,
    *,
    declared: bool = True,
    allow_zero: bool = False,
    rotations: int = 0,
) -> StrongSolovayTestPrefix:
    """Members of small rank so that the total stays modest."""
    ps = []
    for _ in range(members):
        n = rng.randint(1, max_qubits)
        lo = 0 if allow_zero else 1
        r = rng.randint(lo, max(lo, (1 << n) // 4))
        ps.append(random_projection(rng, n, r, rotations))
    test = StrongSolovayTestPrefix(ps)
    return StrongSolovayTestPrefix(ps, test.total()) if declared else test
