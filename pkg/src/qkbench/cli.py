"""Batch command line: one verb per operation, exact reports on stdout.

Exit status is 0 when every CLAIM line passes, 1 when any fails and 2 on
bad input (unknown verb, malformed or invalid file).
"""
from __future__ import annotations

import argparse
import math
import sys
from fractions import Fraction
from pathlib import Path
from typing import Callable

from . import complexity as cx
from . import qtests as qt
from .formats import (
    FormatError,
    load_machine,
    load_state,
    load_system,
    load_test,
    load_vector_set,
    save_machine,
    save_test,
)
from .linalg import DimensionError, InvariantError
from .machines import Classical, MachineTable, Nat, TableError, k_of, kraft_sum
from .report import approx, render
from .scalar import ScalarError, parse_rational


class InputError(Exception):
    """Bad command-line input; reported with exit status 2."""


class Out:
    def __init__(self, with_approx: bool):
        self.with_approx = with_approx
        self.lines: list[str] = []
        self.failed = False

    def say(self, text: str) -> None:
        self.lines.append(text)

    def value(self, text: str, x) -> None:
        if self.with_approx and approx(x) is not None and not isinstance(x, int):
            text += f"  [approx {approx(x)}]"
        self.say(text)

    def claims(self, claims) -> None:
        for c in claims:
            self.failed |= not c.passed
            self.lines.append(c.line(self.with_approx))


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except ScalarError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _need(args, *names):
    missing = [f"--{n.replace('_', '-')}" for n in names if getattr(args, n) is None]
    if missing:
        raise InputError(f"{args.verb} needs {', '.join(missing)}")


def _machine(args) -> MachineTable:
    _need(args, "machine")
    return load_machine(args.machine)


def _state(args):
    _need(args, "state")
    return load_state(args.state)


def _test(args):
    _need(args, "test")
    return load_test(args.test)


def _eps(args) -> Fraction:
    _need(args, "eps")
    if not 0 < args.eps <= 1:
        raise InputError("--eps must lie in (0, 1]")
    return args.eps


def _system(args, length: int):
    if args.system is None:
        return None
    base = Path.cwd()
    return load_system(args.system, length, base)


# ----------------------------------------------------------------------
# verbs


def cmd_validate(args, out: Out):
    t = _machine(args)
    quantum = sum(1 for _ in t.quantum_entries())
    out.value(f"valid label={t.label} entries={len(t)} quantum={quantum} kraft={render(kraft_sum(t))}",
              kraft_sum(t))


def cmd_kraft(args, out: Out):
    k = kraft_sum(_machine(args))
    out.value(f"kraft={render(k)}", k)


def cmd_k(args, out: Out):
    t = _machine(args)
    _need(args, "target")
    if args.target.startswith("nat:"):
        target = Nat(int(args.target[4:]))
    elif set(args.target) <= {"0", "1"}:
        target = Classical(args.target)
    else:
        raise InputError("--target is a bitstring or nat:<n>")
    k = k_of(t, target)
    witness = "-"
    if k != math.inf:
        witness = min(c for c, o in t.entries.items() if o == target and len(c) == k)
    out.say(f"K={render(k)} witness={witness}")


def cmd_qk(args, out: Out):
    t, rho, eps = _machine(args), _state(args), _eps(args)
    levels = [args.level] if args.level is not None else range(1, rho.depth + 1)
    for n in levels:
        val, wit = cx.qk_eps(t, rho.level(n), eps)
        tag = "" if args.level is not None else f"level={n} "
        out.value(f"QK {tag}weight={val} log2={val.log2_text()} witness={wit.codeword if wit else '-'}",
                  val.log2() if val.finite else None)


def cmd_compress(args, out: Out):
    t, eps = _machine(args), _eps(args)
    top = max((f.n_qubits for _, f in t.quantum_entries()), default=0)
    system = _system(args, top)
    p = cx.compress_classical_machine(t, eps, system)
    out.value(f"P entries={len(p)} kraft={render(kraft_sum(p))}", kraft_sum(p))
    out.claims(cx.compression_claims(t, p, eps, system))
    if args.out:
        save_machine(p, args.out)
        out.say(f"wrote {args.out}")


def cmd_stdbasis(args, out: Out):
    rho, eps = _state(args), _eps(args)
    depth = args.depth if args.depth is not None else max(6, rho.depth)
    t = cx.standard_basis_machine(depth)
    levels = [args.level] if args.level is not None else range(1, min(depth, rho.depth) + 1)
    out.claims(cx.standard_basis_claim(t, rho.level(n), eps) for n in levels)


def cmd_counting(args, out: Out):
    t, eps = _machine(args), _eps(args)
    _need(args, "vectors")
    rep = cx.counting_check(t, load_vector_set(args.vectors), eps)
    for w, wit in zip(rep.weights, rep.witnesses):
        out.say(f"member weight={w} witness={wit.codeword if wit else '-'}")
    for note in rep.notes:
        out.say(f"note: {note}")
    out.claims(rep.claims)


def cmd_tracial_bound(args, out: Out):
    t = _machine(args)
    _need(args, "depth")
    kmax = args.k if args.k is not None else 3
    for n in range(1, args.depth + 1):
        for k in range(kmax + 1):
            out.claims(cx.tracial_bound_check(t, n, k))


def cmd_eval_test(args, out: Out):
    test, rho = _test(args), _state(args)
    _need(args, "delta")
    count, hits = qt.fails_at(test, rho, args.delta)
    out.say(f"fails={count} members={','.join(map(str, hits)) or '-'}")
    total = test.total()
    out.value(f"total={render(total)}", total)


def cmd_to_machine(args, out: Out):
    test = _test(args)
    t = qt.test_to_machine(test)
    out.value(f"machine entries={len(t)} kraft={render(kraft_sum(t))}", kraft_sum(t))
    if args.state is not None:
        out.claims(qt.test_machine_claims(test, t, load_state(args.state), _eps(args)))
    if args.out:
        save_machine(t, args.out)
        out.say(f"wrote {args.out}")


def cmd_to_test(args, out: Out):
    t = _machine(args)
    _need(args, "c")
    mt = (qt.schnorr_machine_to_test if args.schnorr else qt.machine_to_test)(t, args.c)
    out.say(f"test members={len(mt.test)} sources={','.join(mt.sources) or '-'}")
    out.claims([mt.certificate])
    if args.out:
        save_test(mt.test, args.out)
        out.say(f"wrote {args.out}")


def cmd_schnorr_compile(args, out: Out):
    test = _test(args)
    comp = qt.schnorr_test_to_machine(test)
    out.say(f"cuts={','.join(map(str, comp.cut_points)) or '-'}")
    for r, idx in comp.groups.items():
        # report members 1-based like every other verb
        out.say(f"group r={r} members={','.join(str(i + 1) for i in idx)} code={qt.group_codeword(r)}")
    out.claims(comp.claims)
    if args.state is not None:
        out.claims(qt.schnorr_state_claims(comp, load_state(args.state), _eps(args)))
    if args.out:
        save_machine(comp.table, args.out)
        out.say(f"wrote {args.out}")


def cmd_fibers(args, out: Out):
    test = _test(args)
    _need(args, "s")
    rep = qt.fiber_partition(test, args.s)
    for x, ms in rep.fibers:
        size = len(ms)
        h = Fraction(size, 1 << x)
        out.value(f"fiber g={x} members={','.join(map(str, ms))} h={render(h)} cutoff={rep.cutoffs[x]}", h)
    out.claims(rep.claims)


def cmd_report(args, out: Out):
    """Kraft sum, QK at every level, and the bounds that apply to them."""
    t, rho, eps = _machine(args), _state(args), _eps(args)
    k = kraft_sum(t)
    out.value(f"kraft={render(k)}", k)
    for n in range(1, rho.depth + 1):
        val, wit = cx.qk_eps(t, rho.level(n), eps)
        out.say(f"QK level={n} weight={val} log2={val.log2_text()} witness={wit.codeword if wit else '-'}")
    std = cx.standard_basis_machine(max(6, rho.depth))
    out.claims(cx.standard_basis_claim(std, rho.level(n), eps) for n in range(1, rho.depth + 1))
    top = max((f.n_qubits for _, f in t.quantum_entries()), default=0)
    system = _system(args, top)
    p = cx.compress_classical_machine(t, eps, system)
    out.claims(cx.compression_claims(t, p, eps, system))
    if args.c is not None:
        rep = qt.compset_machine(t, range(1, rho.depth + 1), rho, eps, args.c)
        for note in rep.notes:
            out.say(f"note: {note}")
        out.claims(rep.claims)


VERBS: dict[str, Callable] = {
    "validate": cmd_validate,
    "kraft": cmd_kraft,
    "k": cmd_k,
    "qk": cmd_qk,
    "compress": cmd_compress,
    "stdbasis": cmd_stdbasis,
    "counting": cmd_counting,
    "tracial-bound": cmd_tracial_bound,
    "eval-test": cmd_eval_test,
    "to-machine": cmd_to_machine,
    "to-test": cmd_to_test,
    "schnorr-compile": cmd_schnorr_compile,
    "fibers": cmd_fibers,
    "report": cmd_report,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="qkbench", description="Exact QK^eps workbench over finite machine tables.")
    ap.add_argument("verb", help=", ".join(VERBS))
    ap.add_argument("--machine")
    ap.add_argument("--state")
    ap.add_argument("--test")
    ap.add_argument("--eps", type=_rational)
    ap.add_argument("--delta", type=_rational)
    ap.add_argument("--c", type=int)
    ap.add_argument("--s", type=_rational)
    ap.add_argument("--level", type=int)
    ap.add_argument("--depth", type=int)
    ap.add_argument("--k", type=int, help="largest k for tracial-bound (default 3)")
    ap.add_argument("--target", help="bitstring or nat:<n> for the k verb")
    ap.add_argument("--vectors", help="vector file, optionally file#set, for counting")
    ap.add_argument("--system", help="standard, hadamard or a one-qubit vector file")
    ap.add_argument("--schnorr", action="store_true", help="to-test: declare the total measure")
    ap.add_argument("--out")
    ap.add_argument("--approx", action="store_true", help="append decimal renderings, marked approximate")
    return ap


def dispatch(argv, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        if args.verb not in VERBS:
            raise InputError(f"unknown verb {args.verb!r}; expected one of {', '.join(VERBS)}")
        out = Out(args.approx)
        VERBS[args.verb](args, out)
    except (InputError, FormatError, TableError, InvariantError, DimensionError, ScalarError,
            ValueError, IndexError, OSError) as exc:
        print(f"error: {exc}", file=stderr)
        return 2
    for line in out.lines:
        print(line, file=stdout)
    return 1 if out.failed else 0


def main(argv=None) -> int:
    return dispatch(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
