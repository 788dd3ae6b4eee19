"""Quantum randomness tests truncated to finite depth, and the compilers
between tests and machine tables.

Members of a Solovay-style test are numbered from 1 except inside the
Schnorr grouping, which follows the 0-based partial sums it is defined by.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .complexity import captures, qk_eps
from .linalg import (
    DimensionError,
    ExactProjection,
    InvariantError,
    QVector,
    overlap,
    projection_from_span,
    tau_measure,
    tensor_with_identity,
)
from .machines import MachineTable, Proj, encode_natural, k_enc, kraft_sum
from .report import Claim
from .scalar import ExtScalar
from .states import DensityPrefix


class QSigma1Prefix:
    """Projections ``p_1..p_N`` (``p_i`` on ``i`` qubits) with nested ranges."""

    __slots__ = ("projections",)

    def __init__(self, projections: Sequence[ExactProjection], *, check: bool = True):
        projections = tuple(projections)
        for i, p in enumerate(projections, start=1):
            if p.n_qubits != i:
                raise InvariantError(f"p_{i} acts on {p.n_qubits} qubits")
        if check:
            for i in range(1, len(projections)):
                lifted = tensor_with_identity(projections[i - 1], 1)
                if not projections[i].contains(lifted):
                    raise InvariantError(f"range(p_{i} (x) I) is not inside range(p_{i + 1})")
        self.projections = projections

    def __len__(self):
        return len(self.projections)

    def tau(self, depth: int | None = None) -> Fraction:
        p = self.projections[(depth or len(self)) - 1]
        return tau_measure(p)


class QMLTestPrefix:
    """Levels ``m = 1..M`` of q-Sigma1 prefixes, each of tau-measure <= 2^-m."""

    __slots__ = ("levels",)

    def __init__(self, levels: Sequence[QSigma1Prefix]):
        levels = tuple(levels)
        for m, g in enumerate(levels, start=1):
            for i, p in enumerate(g.projections, start=1):
                if tau_measure(p) > Fraction(1, 1 << m):
                    raise InvariantError(f"level {m}: tau(p_{i}) = {tau_measure(p)} > 2^-{m}")
        self.levels = levels


class StrongSolovayTestPrefix:
    """Finite run of special projections, optionally with its exact total measure."""

    __slots__ = ("members", "declared_total")

    def __init__(self, members: Sequence[ExactProjection], declared_total=None):
        self.members = tuple(members)
        if declared_total is not None:
            declared_total = Fraction(declared_total)
            if declared_total != self.total():
                raise InvariantError(
                    f"declared total {declared_total} != sum of measures {self.total()}"
                )
        self.declared_total = declared_total

    def __len__(self):
        return len(self.members)

    def total(self) -> Fraction:
        return sum((tau_measure(p) for p in self.members), Fraction(0))

    def __eq__(self, other):
        return (
            isinstance(other, StrongSolovayTestPrefix)
            and self.members == other.members
            and self.declared_total == other.declared_total
        )

    def __repr__(self):
        return f"StrongSolovayTestPrefix(members={len(self)}, total={self.declared_total})"


def evaluate_qsigma(g: QSigma1Prefix, rho: DensityPrefix, depth: int) -> ExtScalar:
    """``Tr(rho_depth p_depth)``."""
    if not 1 <= depth <= min(len(g), rho.depth):
        raise DimensionError(f"depth {depth} exceeds the available levels")
    return overlap(rho.level(depth), g.projections[depth - 1])


def fails_at(test: StrongSolovayTestPrefix, rho: DensityPrefix, delta) -> tuple[int, list[int]]:
    """Count members (1-based indices) whose overlap with rho exceeds ``delta``."""
    delta = Fraction(delta)
    hits = []
    for m, p in enumerate(test.members, start=1):
        if p.n_qubits > rho.depth:
            raise DimensionError(f"member {m} needs {p.n_qubits} levels, state has {rho.depth}")
        if overlap(rho.level(p.n_qubits), p) > delta:
            hits.append(m)
    return len(hits), hits


# ----------------------------------------------------------------------
# tests -> machines


def test_to_machine(test: StrongSolovayTestPrefix) -> MachineTable:
    """``0^m 1 -> S^m`` for each nonzero member ``m``."""
    return MachineTable(
        {encode_natural(m): Proj(p) for m, p in enumerate(test.members, start=1) if p.rank},
        "from-test",
    )


# keep pytest from collecting the compiler above as a test
test_to_machine.__test__ = False


def test_machine_claims(
    test: StrongSolovayTestPrefix,
    table: MachineTable,
    rho: DensityPrefix,
    eps,
    coding_constant: int = 0,
) -> list[Claim]:
    """``QK^eps(rho_{n_m}) <= K_enc(m) + coding + log rank(S^m)`` whenever rho is caught by S^m."""
    eps = Fraction(eps)
    claims = []
    for m, p in enumerate(test.members, start=1):
        if p.n_qubits > rho.depth or p.rank == 0:
            continue
        level = rho.level(p.n_qubits)
        if not captures(overlap(level, p), eps):
            continue
        val, wit = qk_eps(table, level, eps)
        bound = (1 << (k_enc(m) + coding_constant)) * p.rank
        claims.append(
            Claim(
                f"test-to-machine[m={m}]",
                val.le_weight(bound),
                val.weight if val.finite else math.inf,
                bound,
                wit.codeword if wit else "-",
            )
        )
    return claims


test_machine_claims.__test__ = False


# ----------------------------------------------------------------------
# machines -> tests


@dataclass
class MachineTest:
    test: StrongSolovayTestPrefix
    certificate: Claim
    sources: list[str]


def _weight_below(code: str, rank: int, n: int, c: int) -> bool:
    # 2^|sigma| * rank < 2^(n + c), c may be negative
    return Fraction((1 << len(code)) * rank) < Fraction(2) ** (n + c)


def machine_to_test(t: MachineTable, c: int) -> MachineTest:
    """Collect ``P_sigma`` for entries with ``|sigma| + log rank < n_sigma + c``."""
    members, sources = [], []
    for code, out in t.quantum_entries():
        if out.rank and _weight_below(code, out.rank, out.n_qubits, c):
            members.append(out.projection)
            sources.append(code)
    test = StrongSolovayTestPrefix(members)
    total = test.total()
    bound = Fraction(2) ** c * kraft_sum(t)
    cert = Claim(f"kraft-certificate[c={c}]", total <= bound, total, bound, ",".join(sources) or "-")
    return MachineTest(test, cert, sources)


def schnorr_machine_to_test(t: MachineTable, c: int) -> MachineTest:
    """As :func:`machine_to_test`, with the (exact) total measure declared."""
    mt = machine_to_test(t, c)
    mt.test = StrongSolovayTestPrefix(mt.test.members, mt.test.total())
    return mt


# ----------------------------------------------------------------------
# Schnorr grouping


@dataclass
class SchnorrCompilation:
    table: MachineTable
    cut_points: list[int]
    groups: dict[int, tuple[int, ...]]
    projections: dict[int, ExactProjection]
    claims: list[Claim]


def cut_points(taus: Sequence[Fraction], alpha: Fraction) -> list[int]:
    """``s_j`` = least ``t`` with ``tau_0 + ... + tau_t > alpha - 2^-j``, for j up to stabilisation."""
    partial = []
    acc = Fraction(0)
    for x in taus:
        acc += x
        partial.append(acc)
    if not partial:
        return []
    final = next(i for i, v in enumerate(partial) if v >= alpha)
    cuts = []
    j = 0
    while True:
        target = alpha - Fraction(1, 1 << j)
        s = next(i for i, v in enumerate(partial) if v > target)
        cuts.append(s)
        if s >= final:
            return cuts
        j += 1


def _lift_range(p: ExactProjection, n: int) -> list[QVector]:
    extra = n - p.n_qubits
    base = p.range_vectors()
    if extra == 0:
        return base
    pads = [QVector.basis(extra, i) for i in range(1 << extra)]
    return [v.tensor(e) for v in base for e in pads]


def group_codeword(r: int) -> str:
    x, odd = divmod(r, 2)
    return "0" * x + ("11" if odd else "10")


def schnorr_test_to_machine(test: StrongSolovayTestPrefix) -> SchnorrCompilation:
    """Group members between consecutive cut points into ``G_r`` and emit
    ``0^x 10 -> G_2x``, ``0^x 11 -> G_2x+1``.

    ``G_r`` is the projection onto the joint range of ``S^i`` for
    ``s_r < i <= s_{r+1}``, lifted to the largest qubit count in the group.
    """
    if test.declared_total is None:
        raise ValueError("a Schnorr compilation needs the declared total measure")
    alpha = test.declared_total
    taus = [tau_measure(p) for p in test.members]
    cuts = cut_points(taus, alpha)
    groups, projs, entries, claims = {}, {}, {}, []
    for r in range(len(cuts) - 1):
        idx = tuple(range(cuts[r] + 1, cuts[r + 1] + 1))
        if not idx:
            continue
        members = [test.members[i] for i in idx]
        n_r = max(p.n_qubits for p in members)
        span = [v for p in members if p.rank for v in _lift_range(p, n_r)]
        if not span:
            continue
        g = projection_from_span(span)
        groups[r], projs[r] = idx, g
        entries[group_codeword(r)] = Proj(g)
        claims.append(
            Claim(f"schnorr-group[r={r}]", tau_measure(g) < Fraction(1, 1 << r), tau_measure(g),
                  Fraction(1, 1 << r), group_codeword(r))
        )
    table = MachineTable(entries, "schnorr")
    expected = sum((Fraction(1, 1 << len(group_codeword(r))) for r in projs), Fraction(0))
    k = kraft_sum(table)
    claims.append(Claim("schnorr-kraft", k == expected and k <= 1, k, expected, "-"))
    return SchnorrCompilation(table, cuts, groups, projs, claims)


def schnorr_state_claims(comp: SchnorrCompilation, rho: DensityPrefix, eps) -> list[Claim]:
    """``QK^eps_C(rho_{n_r}) <= floor(r/2) + 2 + log rank(G_r) < n_r - floor(r/2) + 2`` when G_r catches rho."""
    eps = Fraction(eps)
    claims = []
    for r, g in comp.projections.items():
        if g.n_qubits > rho.depth:
            continue
        level = rho.level(g.n_qubits)
        if not captures(overlap(level, g), eps):
            continue
        val, wit = qk_eps(comp.table, level, eps)
        x = r // 2
        bound = (1 << (x + 2)) * g.rank
        strict = Fraction(2) ** (g.n_qubits - x + 2)
        ok = val.le_weight(bound) and val.weight < strict
        claims.append(Claim(f"schnorr-qk[r={r}]", ok, val.weight if val.finite else math.inf,
                            bound, wit.codeword if wit else "-"))
    return claims


# ----------------------------------------------------------------------
# padding to a computable set of lengths


@dataclass
class CompsetReport:
    claims: list[Claim] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)


def compset_machine(
    t: MachineTable, c_set: Sequence[int], rho: DensityPrefix, eps, c: int
) -> CompsetReport:
    """Pad every witness of ``QK^eps(rho_n) < n - c`` up to the next length in ``c_set``.

    Checks that the padded projection ``W (x) I`` catches ``rho`` exactly as
    much as ``W`` did, and that the padded weight stays below ``2^(n+s-c)``.
    """
    eps = Fraction(eps)
    lengths = sorted(set(c_set))
    rep = CompsetReport()
    for code, out in t.quantum_entries():
        n = out.n_qubits
        if n > rho.depth or out.rank == 0:
            continue
        w = out.projection
        ov = overlap(rho.level(n), w)
        if not captures(ov, eps) or not _weight_below(code, out.rank, n, -c):
            continue
        nxt = next((m for m in lengths if m > n), None)
        if nxt is None or nxt > rho.depth:
            rep.notes.append(f"{code}: no usable length above {n} (set exhausted at depth {rho.depth})")
            continue
        s = nxt - n
        lifted = tensor_with_identity(w, s)
        ov2 = overlap(rho.level(nxt), lifted)
        weight = (1 << len(code)) * out.rank
        padded = (1 << len(code)) * lifted.rank
        tag = f"{code},n={n},s={s}"
        rep.claims.append(Claim(f"compset-coherence[{tag}]", ov2 == ov, ov2, ov, code))
        rep.claims.append(Claim(f"compset-size[{tag}]", lifted.rank == out.rank << s and padded == weight << s,
                                padded, weight << s, code))
        bound = Fraction(2) ** (nxt - c)
        rep.claims.append(Claim(f"compset-weight[{tag}]", padded <= bound, padded, bound, code))
    return rep


# ----------------------------------------------------------------------
# fibers of g(m) = ceil(s * f(m)), f(m) = -log2 tau(S^m)


@dataclass
class FiberReport:
    g: list[int]
    fibers: list[tuple[int, tuple[int, ...]]]  # (g value, 1-based members)
    h: list[tuple[int, int, Fraction]]  # (fiber size, g value, size / 2^g)
    cutoffs: dict[int, int]
    claims: list[Claim]


def ceil_scaled_neglog(rank: int, n: int, s: Fraction) -> int:
    """``ceil(s * (n - log2 rank))`` via ``2^(p n) <= rank^p 2^(q k)``."""
    p, q = s.numerator, s.denominator
    lhs = 1 << (p * n)
    rp = rank**p
    k = 0
    while lhs > rp << (q * k):
        k += 1
    return k


def fiber_partition(test: StrongSolovayTestPrefix, s) -> FiberReport:
    s = Fraction(s)
    if not 0 < s < 1:
        raise ValueError("s must lie strictly between 0 and 1")
    if test.declared_total is None:
        raise ValueError("fiber computation needs the declared total measure")
    for m, p in enumerate(test.members, start=1):
        if p.rank == 0:
            raise ValueError(f"member {m} is the zero projection")
    p_, q_ = s.numerator, s.denominator
    g = [ceil_scaled_neglog(p.rank, p.n_qubits, s) for p in test.members]
    by_g: dict[int, list[int]] = {}
    for m, gm in enumerate(g, start=1):
        by_g.setdefault(gm, []).append(m)
    fibers = [(x, tuple(ms)) for x, ms in sorted(by_g.items())]
    h = [(len(ms), x, Fraction(len(ms), 1 << x)) for x, ms in fibers]

    claims = []
    for m, (p, gm) in enumerate(zip(test.members, g), start=1):
        lo = (1 << (p_ * p.n_qubits)) <= (p.rank**p_) << (q_ * gm)
        tight = gm == 0 or (1 << (p_ * p.n_qubits)) > (p.rank**p_) << (q_ * (gm - 1))
        claims.append(Claim(f"fiber-ceiling[m={m}]", lo and tight, gm, "ceil(s*f)", "-"))

    taus = [tau_measure(p) for p in test.members]
    cutoffs = {}
    for x, ms in fibers:
        # least q with Q - sum_{r<=q} tau_r < 2^(-x/s)
        rem = test.declared_total
        qx = len(taus)
        for i, tv in enumerate(taus, start=1):
            rem -= tv
            if rem**p_ * (1 << (x * q_)) < 1:
                qx = i
                break
        cutoffs[x] = qx
        beyond_ok = all(tv**p_ * (1 << (x * q_)) < 1 for tv in taus[qx:])
        inside_ok = all(m <= qx for m in ms)
        claims.append(Claim(f"fiber-cutoff[g={x}]", beyond_ok and inside_ok, max(ms), qx, "-"))
    return FiberReport(g, fibers, h, cutoffs, claims)
