"""QK^eps over finite machine tables, and the constructions built on it.

QK is handled in weight form: an entry ``sigma -> F`` contributes the
integer ``2^|sigma| * rank(F)``, whose base-2 log is ``|sigma| + log|F|``.
Minimising weights is the same as minimising QK, and every comparison
stays in integers or rationals.

Threshold convention: an entry qualifies when its overlap with the target
is strictly above ``eps``. At ``eps == 1`` nothing can be strictly above,
so there an overlap of exactly 1 qualifies (this is what makes
``QK^eps <= QK^1 <= K`` meaningful for singletons).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence, Union

from .linalg import (
    DensityMatrix,
    ExactProjection,
    OrthoSet,
    QVector,
    heavy_basis_vectors,
    overlap,
    standard_basis,
)
from .machines import (
    Classical,
    MachineTable,
    Nat,
    Ortho,
    Proj,
    encode_natural,
    k_enc,
    k_of,
)
from .report import Claim
from .scalar import ExtScalar, cmp_to_rational
from .states import SystemB


@dataclass(frozen=True, order=True)
class QKValue:
    """``weight`` is ``2^QK``; ``None`` means QK is infinite."""

    weight: int | None

    @property
    def finite(self) -> bool:
        return self.weight is not None

    def log2_text(self) -> str:
        if self.weight is None:
            return "inf"
        if self.weight & (self.weight - 1) == 0:
            return str(self.weight.bit_length() - 1)
        return f"log2({self.weight})"

    def log2(self) -> float:
        return math.inf if self.weight is None else math.log2(self.weight)

    def le_weight(self, bound) -> bool:
        """``weight <= bound`` (infinite never is)."""
        return self.weight is not None and self.weight <= bound

    def __str__(self):
        return "inf" if self.weight is None else str(self.weight)


INFINITE = QKValue(None)


@dataclass(frozen=True)
class QKWitness:
    codeword: str
    rank: int
    overlap: ExtScalar


def captures(ov: ExtScalar, eps: Fraction) -> bool:
    """Does an overlap count at threshold ``eps``? (see module docstring)"""
    c = cmp_to_rational(ov, eps)
    return c > 0 or (c == 0 and eps == 1)


def qk_eps(t: MachineTable, tau: DensityMatrix, eps) -> tuple[QKValue, QKWitness | None]:
    """Exact ``QK^eps(tau)`` relative to table ``t`` with its minimising entry.

    Ties go to the shorter, then lexicographically smaller, codeword.
    """
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    best = None
    for code, out in t.quantum_entries(tau.n_qubits):
        r = out.rank
        if r == 0:
            continue
        ov = overlap(tau, out.projection)
        if not captures(ov, eps):
            continue
        key = ((1 << len(code)) * r, len(code), code)
        if best is None or key < best[0]:
            best = (key, QKWitness(code, r, ov))
    if best is None:
        return INFINITE, None
    return QKValue(best[0][0]), best[1]


def ceil_log2(x) -> int:
    """Smallest integer ``L >= 0`` with ``2^L >= x`` (x rational, positive)."""
    x = Fraction(x)
    L = 0
    while (1 << L) < x:
        L += 1
    return L


def _bases_for(n: int, basis_seq) -> OrthoSet:
    if basis_seq is None:
        return standard_basis(n)
    if isinstance(basis_seq, SystemB):
        return basis_seq.product_basis(n)
    if isinstance(basis_seq, Mapping):
        return basis_seq[n]
    return basis_seq[n - 1]


def basis_label(n: int, index: int) -> str:
    return format(index, f"0{n}b") if n else ""


def compress_classical_machine(
    u: MachineTable,
    eps,
    basis_seq: Union[None, SystemB, Sequence[OrthoSet], Mapping[int, OrthoSet]] = None,
) -> MachineTable:
    """Machine P turning a QK^eps description into a classical one.

    For each entry ``sigma -> F`` on ``n`` qubits, and each suffix ``tau``
    of length ``ceil(log2(rank F / eps))``, ``P(sigma tau)`` is the label of
    the ``(int(tau) mod |S|)``-th heavy vector of ``B_n`` (standard basis by
    default), where heavy means ``<e|F|e> > eps``. Labels are the n-bit
    index of the vector in ``B_n``. Entries with no heavy vector are dropped.
    ``basis_seq`` is a :class:`SystemB`, a sequence with ``B_n`` at index
    ``n - 1``, or a mapping ``n -> B_n``.
    """
    eps = Fraction(eps)
    if not 0 < eps <= 1:
        raise ValueError("eps must lie in (0, 1]")
    out: dict[str, Classical] = {}
    for code, f in u.quantum_entries():
        n = f.n_qubits
        if f.rank == 0:
            continue
        basis = _bases_for(n, basis_seq)
        heavy = heavy_basis_vectors(basis, f.projection, eps)
        if not heavy:
            continue
        L = ceil_log2(f.rank / eps)
        for i in range(1 << L):
            suffix = format(i, f"0{L}b") if L else ""
            out[code + suffix] = Classical(basis_label(n, heavy[i % len(heavy)]))
    return MachineTable(out, f"compress({u.label},{eps})")


def compression_claims(
    u: MachineTable,
    p: MachineTable,
    eps,
    basis_seq=None,
    qubit_counts: Sequence[int] | None = None,
) -> list[Claim]:
    """Check ``K_P(e) <= QK^eps_u(|e><e|) + ceil(log2(1/eps)) + 1`` per basis vector.

    Weight form: ``2^K_P(e) <= W * 2^(ceil(log2(1/eps)) + 1)``. Only vectors
    whose minimising entry makes them heavy are quantified over.
    """
    eps = Fraction(eps)
    slack = ceil_log2(1 / eps) + 1
    if qubit_counts is None:
        qubit_counts = sorted({f.n_qubits for _, f in u.quantum_entries()})
    claims = []
    for n in qubit_counts:
        basis = _bases_for(n, basis_seq)
        for idx, e in enumerate(basis):
            val, wit = qk_eps(u, DensityMatrix.pure(e), eps)
            if not val.finite or cmp_to_rational(wit.overlap, eps) <= 0:
                continue
            label = basis_label(n, idx)
            kp = k_of(p, Classical(label))
            lhs = math.inf if kp == math.inf else 1 << kp
            rhs = val.weight << slack
            claims.append(Claim(f"compress[{label}]", lhs <= rhs, lhs, rhs, wit.codeword))
    return claims


def classical_as_quantum(t: MachineTable) -> MachineTable:
    """Read each nonempty classical output ``x`` as the singleton ``{|x>}``.

    This is the step that turns ``K_P(x)`` back into an upper bound on
    ``QK(|x><x|)``; other entries are dropped.
    """
    out = {
        code: Ortho(OrthoSet([QVector.from_bits(o.bits)], check=False))
        for code, o in t.entries.items()
        if isinstance(o, Classical) and o.bits
    }
    return MachineTable(out, f"quantum({t.label})")


def singleton_k(t: MachineTable, v: QVector) -> float | int:
    """Shortest codeword whose output spans exactly the line through ``v``."""
    target = DensityMatrix.pure(v).matrix
    best = math.inf
    for code, out in t.quantum_entries(v.n_qubits):
        if out.rank == 1 and out.projection.matrix == target and len(code) < best:
            best = len(code)
    return best


def standard_basis_machine(depth: int) -> MachineTable:
    """``0^n 1 -> identity on n qubits`` for ``1 <= n <= depth``."""
    if depth < 1:
        raise ValueError("depth must be at least 1")
    return MachineTable(
        {encode_natural(n): Proj(ExactProjection.identity(n)) for n in range(1, depth + 1)},
        f"stdbasis({depth})",
    )


def standard_basis_claim(t: MachineTable, tau: DensityMatrix, eps) -> Claim:
    """``QK^eps(tau) <= |tau| + K_enc(|tau|)`` in weight form."""
    n = tau.n_qubits
    val, wit = qk_eps(t, tau, eps)
    rhs = 1 << (n + k_enc(n))
    return Claim(
        f"stdbasis[n={n}]", val.le_weight(rhs), val.weight if val.finite else math.inf, rhs,
        wit.codeword if wit else "-",
    )


@dataclass
class CountingReport:
    claims: list[Claim]
    weights: list[QKValue]
    witnesses: list[QKWitness | None]
    notes: list[str] = field(default_factory=list)


def counting_check(t: MachineTable, vectors: Sequence[QVector], eps) -> CountingReport:
    """``N <= 2^B / eps`` where ``2^B`` is the largest QK^eps weight in the family."""
    eps = Fraction(eps)
    fam = OrthoSet(vectors)
    weights, witnesses = [], []
    for v in fam:
        val, wit = qk_eps(t, DensityMatrix.pure(v), eps)
        weights.append(val)
        witnesses.append(wit)
    infinite = [i for i, w in enumerate(weights) if not w.finite]
    if infinite:
        note = f"vectors {infinite} have infinite QK; bound not asserted"
        return CountingReport([], weights, witnesses, [note])
    top = max(range(len(weights)), key=lambda i: weights[i].weight)
    wmax = weights[top].weight
    n = len(fam)
    rhs = Fraction(wmax) / eps
    claim = Claim("counting", n <= rhs, n, rhs, witnesses[top].codeword)
    return CountingReport([claim], weights, witnesses)


def tracial_bound_check(t: MachineTable, n: int, k: int) -> list[Claim]:
    """Lower bounds on ``QK^{2^-k}(tau_n)``.

    (a) the witness weight exceeds ``2^(n-k)``;
    (b) it is at least ``2^(n-k) * 2^K_M(n)`` where ``M`` sends each
        codeword with an n-qubit output to ``Nat(n)``.
    """
    if n < 1 or k < 0:
        raise ValueError("need n >= 1 and k >= 0")
    eps = Fraction(1, 1 << k)
    val, wit = qk_eps(t, DensityMatrix.tracial(n), eps)
    floor = Fraction(1 << n, 1 << k)
    tag = f"n={n},k={k}"
    if not val.finite:
        return [
            Claim(f"tracial-weak[{tag}]", True, math.inf, floor, "-"),
            Claim(f"tracial-full[{tag}]", True, math.inf, "-", "-"),
        ]
    aux = MachineTable({code: Nat(n) for code, _ in t.quantum_entries(n)}, f"{t.label}->n")
    km = k_of(aux, Nat(n))
    full = floor * (1 << km)
    return [
        Claim(f"tracial-weak[{tag}]", val.weight > floor, val.weight, floor, wit.codeword),
        Claim(f"tracial-full[{tag}]", val.weight >= full, val.weight, full, wit.codeword),
    ]
