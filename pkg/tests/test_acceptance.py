"""Acceptance criteria, each run at its stated size and time limit.

Every test records ``(passed, seconds, limit, detail)`` in ``RESULTS``; the
conftest hook prints one ``ACCEPTANCE`` line per criterion at the end of the
run. ``python tests/test_acceptance.py`` prints the same lines directly.
"""
from __future__ import annotations

import io
import itertools
import random
import time
from fractions import Fraction
from functools import lru_cache
from pathlib import Path

from qkbench import gen
from qkbench.cli import dispatch
from qkbench.complexity import (
    classical_as_quantum,
    compress_classical_machine,
    compression_claims,
    counting_check,
    qk_eps,
    singleton_k,
    standard_basis_claim,
    standard_basis_machine,
    tracial_bound_check,
)
from qkbench.formats import (
    format_machine,
    format_matrix,
    format_state,
    format_test,
    format_vectors,
    parse_machine,
    parse_matrix,
    parse_state,
    parse_test,
    parse_vectors,
)
from qkbench.linalg import (
    DensityMatrix,
    ExactProjection,
    OrthoSet,
    QVector,
    heavy_basis_vectors,
    inner_product,
    tau_measure,
)
from qkbench.machines import Classical, MachineTable, Ortho, Proj, k_enc, k_of, kraft_of, prefix_violation
from qkbench.qtests import (
    QSigma1Prefix,
    StrongSolovayTestPrefix,
    evaluate_qsigma,
    machine_to_test,
    schnorr_test_to_machine,
    test_machine_claims as machine_claims_for,
    test_to_machine as compile_test,
)
from qkbench.scalar import ONE, ZERO, ExtScalar
from qkbench.states import (
    classical_prefix,
    mixture_prefix,
    product_prefix,
    tracial_prefix,
)

SAMPLES = Path(__file__).resolve().parent.parent / "sample_data"
EPSILONS = (Fraction(1, 4), Fraction(1, 2), Fraction(3, 4))
ALL_BITS = ["".join(b) for n in range(1, 7) for b in itertools.product("01", repeat=n)]

RESULTS: dict[int, tuple[bool, float, float, str, str]] = {}


def _run(number: int, title: str, limit: float, body) -> None:
    start = time.perf_counter()
    ok, detail = body()
    elapsed = time.perf_counter() - start
    passed = bool(ok) and elapsed < limit
    RESULTS[number] = (passed, elapsed, limit, title, detail)
    print(result_line(number))
    assert ok, f"criterion {number} violated: {detail}"
    assert elapsed < limit, f"criterion {number} took {elapsed:.2f}s, limit {limit}s"


def result_line(number: int) -> str:
    passed, elapsed, limit, title, detail = RESULTS[number]
    return (
        f"ACCEPTANCE {number:2d} {'PASS' if passed else 'FAIL'} {title} "
        f"[{elapsed:.2f}s < {limit:g}s] {detail}"
    )


# ---------------------------------------------------------------- shared inputs


@lru_cache(maxsize=None)
def counting_tables() -> tuple[MachineTable, ...]:
    rng = random.Random(303)
    return tuple(
        gen.random_table(rng, rng.randint(8, 64), 3, rotations=1, label=f"count{i}") for i in range(50)
    )


@lru_cache(maxsize=None)
def singleton_tables() -> tuple[MachineTable, ...]:
    rng = random.Random(404)
    tables = []
    for i in range(20):
        picks = sorted(rng.sample(ALL_BITS, 40))
        tables.append(
            gen.random_table(rng, 60, 4, singleton_bits=picks, rotations=1, label=f"single{i}")
        )
    return tuple(tables)


# ---------------------------------------------------------------- 1


def test_criterion_01_scalar_field_axioms():
    def body():
        rng = random.Random(101)

        def rs():
            return ExtScalar(*(Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(4)))

        bad = 0
        for _ in range(10_000):
            x, y, z = rs(), rs(), rs()
            ok = (
                (x + y) + z == x + (y + z)
                and (x * y) * z == x * (y * z)
                and x * (y + z) == x * y + x * z
                and x + y == y + x
                and x * y == y * x
                and x + ZERO == x
                and x * ONE == x
                and x + (-x) == ZERO
                and (x.is_zero() or x * x.inverse() == ONE)
                and x.conj().conj() == x
            )
            bad += not ok
        return bad == 0, f"triples=10000 violations={bad}"

    _run(1, "scalar field axioms", 5, body)


# ---------------------------------------------------------------- 2


def test_criterion_02_heavy_vector_bound():
    def body():
        rng = random.Random(202)
        bad = 0
        for _ in range(1000):
            n = rng.randint(1, 4)
            e = OrthoSet(gen.random_basis(rng, n, rotations=2), check=False)
            f = gen.random_projection(rng, n, rotations=2)
            delta = rng.choice(EPSILONS)
            s = heavy_basis_vectors(e, f, delta)
            bad += not (len(s) * delta < f.rank)
        return bad == 0, f"instances=1000 violations={bad}"

    _run(2, "heavy-vector bound |S| < Tr(F)/delta", 30, body)


# ---------------------------------------------------------------- 3


def _families(t: MachineTable) -> list[list[QVector]]:
    """Each orthonormal output, plus a greedy maximal orthonormal union per qubit count."""
    fams = []
    pools: dict[int, list[QVector]] = {}
    for _, out in t.quantum_entries():
        if isinstance(out, Ortho):
            fams.append(list(out.vectors))
            pools.setdefault(out.n_qubits, []).extend(out.vectors)
    for pool in pools.values():
        chosen: list[QVector] = []
        for v in pool:
            if all(inner_product(u, v).is_zero() for u in chosen) and v not in chosen:
                chosen.append(v)
        fams.append(chosen)
    return fams


def test_criterion_03_counting_theorem():
    def body():
        checked = bad = skipped = 0
        for t in counting_tables():
            for fam in _families(t):
                for eps in EPSILONS:
                    rep = counting_check(t, fam, eps)
                    skipped += bool(rep.notes)
                    checked += len(rep.claims)
                    bad += sum(not c.passed for c in rep.claims)
        return bad == 0 and checked > 0 and skipped == 0, (
            f"tables=50 claims={checked} violations={bad} unasserted={skipped}"
        )

    _run(3, "counting theorem N <= 2^B/eps", 30, body)


# ---------------------------------------------------------------- 4


def test_criterion_04_singleton_and_compression():
    def body():
        single = comp = bad = 0
        for t in singleton_tables():
            for eps in EPSILONS:
                for x in ALL_BITS:
                    k = singleton_k(t, QVector.from_bits(x))
                    if k == float("inf"):
                        continue
                    val, _ = qk_eps(t, DensityMatrix.classical(x), eps)
                    single += 1
                    bad += not val.le_weight(1 << k)
                p = compress_classical_machine(t, eps)
                claims = compression_claims(t, p, eps, qubit_counts=range(1, 7))
                comp += len(claims)
                bad += sum(not c.passed for c in claims)
                bad += prefix_violation(p.entries) is not None
        return bad == 0, f"tables=20 singleton-checks={single} compression-claims={comp} violations={bad}"

    _run(4, "QK vs K agreement (singletons, machine P)", 60, body)


# ---------------------------------------------------------------- 5


def test_criterion_05_standard_basis_upper_bound():
    def body():
        rng = random.Random(505)
        t = standard_basis_machine(6)
        bad = 0
        for i in range(100):
            n = rng.randint(1, 3)
            rho = gen.random_density(rng, n, rotations=2)
            eps = (EPSILONS + (Fraction(1),))[i % 4]
            claim = standard_basis_claim(t, rho, eps)
            bad += not (claim.passed and claim.lhs == 1 << (n + k_enc(n)))
        return bad == 0, f"densities=100 violations={bad}"

    _run(5, "standard-basis upper bound QK <= |tau| + K_enc(|tau|)", 30, body)


# ---------------------------------------------------------------- 6


def test_criterion_06_tracial_lower_bound():
    counting_tables(), singleton_tables()  # built (and timed) by criteria 3 and 4

    def body():
        tables = list(counting_tables()) + list(singleton_tables())
        tables += [standard_basis_machine(6), MachineTable({"1": Proj(ExactProjection.identity(3))})]
        weak = bad = full_fail = 0
        for t in tables:
            for n in range(1, 7):
                for k in range(4):
                    w, f = tracial_bound_check(t, n, k)
                    weak += 1
                    bad += not w.passed
                    full_fail += not f.passed
        return bad == 0, f"tables={len(tables)} weak-claims={weak} violations={bad} full-form-fails={full_fail}"

    _run(6, "tracial lower bound W > 2^(n-k)", 10, body)


# ---------------------------------------------------------------- 7


def _matching_test(rng: random.Random, depth: int = 4):
    """A test over one product system, with states caught by its members."""
    system = gen.random_system(rng, depth)
    members, states = [], []
    for _ in range(rng.randint(3, 8)):
        n = rng.randint(1, depth)
        labels = rng.sample(
            ["".join(b) for b in itertools.product("01", repeat=n)], rng.randint(1, max(1, (1 << n) // 4))
        )
        vecs = [system.product_vector(x) for x in labels]
        members.append(OrthoSet(vecs, check=False).projection)
        x = rng.choice(labels) + "".join(rng.choice("01") for _ in range(depth - n))
        states.append(product_prefix(system, x))
    states.append(gen.random_prefix(rng, depth))
    return StrongSolovayTestPrefix(members), states


def test_criterion_07_duality():
    def body():
        rng = random.Random(707)
        certs = bad = 0
        for i in range(50):
            t = gen.random_table(rng, rng.randint(4, 32), 3, keep=0.8, label=f"dual{i}")
            mt = machine_to_test(t, rng.randint(-2, 4))
            certs += 1
            bad += not mt.certificate.passed
        member_checks = 0
        for _ in range(20):
            test, states = _matching_test(rng)
            table = compile_test(test)
            for rho in states:
                for eps in EPSILONS:
                    for c in machine_claims_for(test, table, rho, eps):
                        m = int(c.name.split("m=")[1].rstrip("]"))
                        p = test.members[m - 1]
                        direct, _ = qk_eps(table, rho.level(p.n_qubits), eps)
                        member_checks += 1
                        bad += not (c.passed and direct.weight == c.lhs <= (1 << k_enc(m)) * p.rank)
        return bad == 0 and member_checks > 0, (
            f"certificates={certs} member-checks={member_checks} violations={bad}"
        )

    _run(7, "test/machine duality bounds", 30, body)


# ---------------------------------------------------------------- 8


def test_criterion_08_schnorr_grouping():
    def body():
        rng = random.Random(808)
        groups = bad = 0
        for _ in range(20):
            test = gen.random_test(rng, rng.randint(1, 16), 4, rotations=1)
            comp = schnorr_test_to_machine(test)
            bad += sum(not c.passed for c in comp.claims)
            for r, g in comp.projections.items():
                groups += 1
                bad += not tau_measure(g) < Fraction(1, 1 << r)
            codes = list(comp.table.entries)
            bad += prefix_violation(codes) is not None
            expected = sum((Fraction(1, 2 ** len(c)) for c in codes), Fraction(0))
            bad += kraft_of(codes) != expected
        return bad == 0, f"tests=20 groups={groups} violations={bad}"

    _run(8, "Schnorr grouping tau(G_r) < 2^-r", 30, body)


# ---------------------------------------------------------------- 9


def test_criterion_09_coherence_and_monotonicity():
    def body():
        rng = random.Random(909)
        bad = 0
        for _ in range(100):
            depth = rng.randint(1, 4)
            g = gen.random_qsigma(rng, depth)
            QSigma1Prefix(g.projections)  # nesting re-verified exactly
            bits = "".join(rng.choice("01") for _ in range(depth))
            builders = [
                tracial_prefix(depth),
                classical_prefix(bits),
                product_prefix(gen.random_system(rng, depth), bits),
                mixture_prefix([Fraction(1, 3), Fraction(2, 3)], [classical_prefix(bits), tracial_prefix(depth)]),
                gen.random_prefix(rng, depth),
            ]
            for rho in builders:
                bad += not rho.is_coherent()
            rho = builders[-1]
            vals = [evaluate_qsigma(g, rho, d) for d in range(1, depth + 1)]
            bad += not all(a <= b for a, b in zip(vals, vals[1:]))
        return bad == 0, f"pairs=100 violations={bad}"

    _run(9, "state coherence and q-Sigma1 monotonicity", 30, body)


# ---------------------------------------------------------------- 10


def test_criterion_10_classical_chain():
    def body():
        eps = Fraction(1, 2)
        slack = 4  # 2^(ceil(log2(1/eps)) + 1)
        chains = bad = 0
        prefixes = {x: classical_prefix(x) for x in ALL_BITS if len(x) == 6}
        for t in singleton_tables():
            p = compress_classical_machine(t, eps)
            q = classical_as_quantum(p)
            for x, pre in prefixes.items():
                for n in range(1, 7):
                    sigma = x[:n]
                    if sigma != x and n < 6 and x[n:] != "0" * (6 - n):
                        continue  # each prefix once
                    rho = pre.level(n)
                    w, _ = qk_eps(t, rho, eps)
                    kp = k_of(p, Classical(sigma))
                    if not w.finite:
                        bad += kp != float("inf")
                        continue
                    chains += 1
                    wq, _ = qk_eps(q, rho, eps)
                    ks = singleton_k(t, QVector.from_bits(sigma))
                    ok = (1 << kp) <= w.weight * slack and wq.le_weight(1 << kp)
                    ok = ok and (ks == float("inf") or w.le_weight(1 << ks))
                    bad += not ok
        return bad == 0 and chains > 0, f"tables=20 chains={chains} violations={bad}"

    _run(10, "classical chain QK ~ K_P", 30, body)


# ---------------------------------------------------------------- 11

PARSERS = {
    ".mt": (parse_machine, format_machine),
    ".st": (parse_state, format_state),
    ".qt": (parse_test, format_test),
    ".mat": (parse_matrix, lambda doc: format_matrix(doc[1])),
    ".vec": (parse_vectors, lambda doc: format_vectors(*doc)),
    ".sys": (parse_vectors, lambda doc: format_vectors(*doc)),
}

CLI_CASES = [
    (["qk", "--machine", "u.mt", "--state", "s.st", "--level", "1", "--eps", "1/2"], 0),
    (["kraft", "--machine", "u.mt"], 0),
    (["validate", "--machine", "bad.mt"], 2),
    (["validate", "--machine", "mixed.mt"], 0),
    (["compress", "--machine", "u.mt", "--eps", "1/2"], 0),
    (["stdbasis", "--state", "mix.st", "--eps", "1"], 0),
    (["stdbasis", "--state", "mix.st", "--eps", "1/2", "--depth", "1", "--level", "3"], 1),
    (["counting", "--machine", "u.mt", "--vectors", "basis.vec#both", "--eps", "1/2"], 0),
    (["tracial-bound", "--machine", "mixed.mt", "--depth", "3"], 0),
    (["eval-test", "--test", "t.qt", "--state", "x.st", "--delta", "1/2"], 0),
    (["to-machine", "--test", "t.qt", "--state", "x.st", "--eps", "1/2"], 0),
    (["to-test", "--machine", "mixed.mt", "--c", "1"], 0),
    (["schnorr-compile", "--test", "t.qt", "--state", "x.st", "--eps", "1/2"], 0),
    (["fibers", "--test", "t.qt", "--s", "1/2"], 0),
    (["report", "--machine", "mixed.mt", "--state", "mix.st", "--eps", "1/4", "--c", "0"], 0),
    (["no-such-verb"], 2),
]


def test_criterion_11_cli_round_trip():
    def body():
        import os

        files = sorted(p for p in SAMPLES.iterdir() if p.suffix in PARSERS)
        bad = 0
        for path in files:
            parse, fmt = PARSERS[path.suffix]
            doc = parse(path.read_text(), path)
            bad += parse(fmt(doc)) != doc
        old = os.getcwd()
        os.chdir(SAMPLES)
        try:
            for argv, expected in CLI_CASES:
                out, err = io.StringIO(), io.StringIO()
                code = dispatch(argv, out, err)
                text = out.getvalue()
                has_claims = "CLAIM " in text
                implied = 2 if err.getvalue() else (1 if " FAIL " in text else 0)
                bad += code != expected or code != implied or (code == 1 and not has_claims)
        finally:
            os.chdir(old)
        return bad == 0 and files, f"files={len(files)} commands={len(CLI_CASES)} violations={bad}"

    _run(11, "CLI round trip and exit codes", 5, body)


if __name__ == "__main__":
    import sys

    failures = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                failures += 1
    sys.exit(1 if failures else 0)
