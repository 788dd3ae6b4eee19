"""Line-oriented text formats.

Matrix file::

    qubits: 1
    1/2, 1/2
    1/2, 1/2

Vector file (one vector per line, optional named sets)::

    qubits: 1
    set plus
    1/2*r2, 1/2*r2

Machine file::

    machine u
    measure: 1/1
    code 0 -> ortho vecs.vec#zero
    code 11 -> proj id.mat
    code 10 -> str 01
    code 110 -> str -
    code 0001 -> nat 3

State file::

    state s
    kind: product basisfile: hadamard bits: 010

(``kind: tracial depth: N``, ``kind: classical bits: ...``, or
``kind: mixture`` followed by ``component <weight> <statefile>`` lines.)

Test file::

    test t
    total: 3/4
    member 1 proj s1.mat

``str -`` is the empty output string. Relative paths resolve against the
referring file's directory. Blank lines and lines starting with ``%`` are
ignored.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .linalg import ExactProjection, InvariantError, OrthoSet, QVector
from .machines import Classical, MachineTable, Nat, Ortho, Proj, TableError, build_table
from .qtests import StrongSolovayTestPrefix
from .scalar import ScalarError, format_scalar, parse_rational, parse_scalar
from .states import (
    DensityPrefix,
    SystemB,
    classical_prefix,
    mixture_prefix,
    product_prefix,
    tracial_prefix,
)


class FormatError(ValueError):
    def __init__(self, source, line: int, col: int, msg: str):
        self.source, self.line, self.col, self.msg = str(source), line, col, msg
        super().__init__(f"{source}:{line}:{col}: {msg}")


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("%"):
            continue
        col = len(raw) - len(raw.lstrip()) + 1
        yield no, col, stripped


def _fmt_q(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


# ----------------------------------------------------------------------
# matrices and vectors


def _parse_row(line: str, source, no: int, col: int, width: int | None):
    try:
        row = tuple(parse_scalar(cell) for cell in line.split(","))
    except ScalarError as exc:
        raise FormatError(source, no, col, str(exc)) from None
    if width is not None and len(row) != width:
        raise FormatError(source, no, col, f"expected {width} entries, found {len(row)}")
    return row


def _parse_header(it, source) -> int:
    try:
        no, col, line = next(it)
    except StopIteration:
        raise FormatError(source, 1, 1, "missing 'qubits: n' header") from None
    m = re.fullmatch(r"qubits:\s*(\d+)", line)
    if not m:
        raise FormatError(source, no, col, "expected 'qubits: n' header")
    return int(m.group(1))


def parse_matrix(text: str, source="<matrix>"):
    it = _lines(text)
    n = _parse_header(it, source)
    dim = 1 << n
    rows = [_parse_row(line, source, no, col, dim) for no, col, line in it]
    if len(rows) != dim:
        raise FormatError(source, 1, 1, f"expected {dim} rows, found {len(rows)}")
    return n, tuple(rows)


def format_matrix(matrix) -> str:
    n = len(matrix).bit_length() - 1
    body = "\n".join(", ".join(format_scalar(x) for x in row) for row in matrix)
    return f"qubits: {n}\n{body}\n"


def parse_vectors(text: str, source="<vectors>") -> tuple[int, dict[str, list[tuple]]]:
    it = _lines(text)
    n = _parse_header(it, source)
    sets: dict[str, list[tuple]] = {}
    current = None
    for no, col, line in it:
        m = re.fullmatch(r"set\s+(\S+)", line)
        if m:
            current = m.group(1)
            if current in sets:
                raise FormatError(source, no, col, f"duplicate set {current!r}")
            sets[current] = []
            continue
        if current is None:
            current = "default"
            sets[current] = []
        sets[current].append(_parse_row(line, source, no, col, 1 << n))
    return n, sets


def format_vectors(n: int, sets: dict[str, list[tuple]]) -> str:
    out = [f"qubits: {n}"]
    for name, vecs in sets.items():
        out.append(f"set {name}")
        out.extend(", ".join(format_scalar(x) for x in v) for v in vecs)
    return "\n".join(out) + "\n"


def load_projection(path) -> ExactProjection:
    path = Path(path)
    _, rows = parse_matrix(path.read_text(), path)
    try:
        return ExactProjection(rows)
    except InvariantError as exc:
        raise FormatError(path, 1, 1, str(exc)) from None


def load_vector_set(ref: str, base: Path | None = None) -> list[QVector]:
    """Load ``file#set`` (or the first set of ``file``)."""
    fname, _, name = ref.partition("#")
    path = Path(fname) if base is None else base / fname
    _, sets = parse_vectors(path.read_text(), path)
    if not sets:
        raise FormatError(path, 1, 1, "no vectors")
    key = name or next(iter(sets))
    if key not in sets:
        raise FormatError(path, 1, 1, f"no set named {key!r}")
    return [QVector(v) for v in sets[key]]


# ----------------------------------------------------------------------
# machines


@dataclass
class MachineDoc:
    label: str
    measure: Fraction | None = None
    entries: list[tuple[str, str, str]] = field(default_factory=list)  # (code, kind, arg)


_ENTRY = re.compile(r"code\s+(\S+)\s*->\s*(ortho|proj|str|nat)\s+(\S+)")


def parse_machine(text: str, source="<machine>") -> MachineDoc:
    it = _lines(text)
    try:
        no, col, line = next(it)
    except StopIteration:
        raise FormatError(source, 1, 1, "empty machine file") from None
    m = re.fullmatch(r"machine\s+(\S+)", line)
    if not m:
        raise FormatError(source, no, col, "expected 'machine <label>'")
    doc = MachineDoc(m.group(1))
    seen = set()
    for no, col, line in it:
        m = re.fullmatch(r"measure:\s*(\S+)", line)
        if m:
            if doc.entries or doc.measure is not None:
                raise FormatError(source, no, col, "'measure:' must precede entries, once")
            try:
                doc.measure = parse_rational(m.group(1))
            except ScalarError as exc:
                raise FormatError(source, no, col, str(exc)) from None
            continue
        m = _ENTRY.fullmatch(line)
        if not m:
            raise FormatError(source, no, col, f"cannot parse entry {line!r}")
        code, kind, arg = m.groups()
        if not re.fullmatch(r"[01]+", code):
            raise FormatError(source, no, col + line.index(code), f"codeword {code!r} is not binary")
        if code in seen:
            raise FormatError(source, no, col, f"duplicate codeword {code!r}")
        if kind == "str" and not re.fullmatch(r"[01]+|-", arg):
            raise FormatError(source, no, col, f"output {arg!r} is not a bitstring")
        if kind == "nat" and not arg.isdigit():
            raise FormatError(source, no, col, f"output {arg!r} is not a natural")
        seen.add(code)
        doc.entries.append((code, kind, arg))
    return doc


def format_machine(doc: MachineDoc) -> str:
    out = [f"machine {doc.label}"]
    if doc.measure is not None:
        out.append(f"measure: {_fmt_q(doc.measure)}")
    out.extend(f"code {c} -> {k} {a}" for c, k, a in doc.entries)
    return "\n".join(out) + "\n"


def resolve_machine(doc: MachineDoc, base: Path) -> MachineTable:
    """Turn a parsed document into a validated table; raises TableError or FormatError."""
    raw = {}
    for code, kind, arg in doc.entries:
        if kind == "ortho":
            raw[code] = load_vector_set(arg, base)
        elif kind == "proj":
            raw[code] = load_projection(base / arg)
        elif kind == "str":
            raw[code] = Classical("" if arg == "-" else arg)
        else:
            raw[code] = Nat(int(arg))
    return build_table(raw, doc.label, doc.measure)


def load_machine(path) -> MachineTable:
    path = Path(path)
    return resolve_machine(parse_machine(path.read_text(), path), path.parent)


def save_machine(t: MachineTable, path) -> Path:
    """Write ``t`` to ``path`` plus a sidecar ``<stem>.d/`` directory for matrices."""
    path = Path(path)
    side = path.parent / f"{path.stem}.d"
    doc = MachineDoc(t.label, t.cmm_declared_measure)
    ortho_sets: dict[str, list[tuple]] = {}
    ortho_n = None
    mixed_ortho = False
    for code, out in t.entries.items():
        if isinstance(out, Ortho):
            if ortho_n not in (None, out.n_qubits):
                mixed_ortho = True
            ortho_n = out.n_qubits
    for code, out in t.entries.items():
        if isinstance(out, Ortho):
            if mixed_ortho:
                vf = f"ortho{out.n_qubits}.vec"
            else:
                vf = "ortho.vec"
            ortho_sets.setdefault(vf, {})
            ortho_sets[vf][f"c{code}"] = [v.entries for v in out.vectors]
            doc.entries.append((code, "ortho", f"{side.name}/{vf}#c{code}"))
        elif isinstance(out, Proj):
            side.mkdir(parents=True, exist_ok=True)
            (side / f"c{code}.mat").write_text(format_matrix(out.projection.matrix))
            doc.entries.append((code, "proj", f"{side.name}/c{code}.mat"))
        elif isinstance(out, Classical):
            doc.entries.append((code, "str", out.bits or "-"))
        else:
            doc.entries.append((code, "nat", str(out.value)))
    for vf, sets in ortho_sets.items():
        side.mkdir(parents=True, exist_ok=True)
        n = len(next(iter(sets.values()))[0]).bit_length() - 1
        (side / vf).write_text(format_vectors(n, sets))
    path.write_text(format_machine(doc))
    return path


# ----------------------------------------------------------------------
# states


@dataclass
class StateDoc:
    name: str
    kind: str
    params: dict[str, str] = field(default_factory=dict)
    components: list[tuple[Fraction, str]] = field(default_factory=list)


_KINDS = {
    "tracial": ("depth",),
    "classical": ("bits",),
    "product": ("basisfile", "bits"),
    "mixture": (),
}


def parse_state(text: str, source="<state>") -> StateDoc:
    it = _lines(text)
    try:
        no, col, line = next(it)
    except StopIteration:
        raise FormatError(source, 1, 1, "empty state file") from None
    m = re.fullmatch(r"state\s+(\S+)", line)
    if not m:
        raise FormatError(source, no, col, "expected 'state <name>'")
    name = m.group(1)
    try:
        no, col, line = next(it)
    except StopIteration:
        raise FormatError(source, no, col, "missing 'kind:' line") from None
    pairs = re.findall(r"(\w+):\s*(\S+)", line)
    if not pairs or pairs[0][0] != "kind":
        raise FormatError(source, no, col, "expected 'kind: <kind> ...'")
    kind = pairs[0][1]
    if kind not in _KINDS:
        raise FormatError(source, no, col, f"unknown state kind {kind!r}")
    params = dict(pairs[1:])
    missing = [k for k in _KINDS[kind] if k not in params]
    if missing:
        raise FormatError(source, no, col, f"kind {kind} needs {', '.join(missing)}")
    extra = set(params) - set(_KINDS[kind])
    if extra:
        raise FormatError(source, no, col, f"unexpected field(s) {sorted(extra)}")
    if "bits" in params and not re.fullmatch(r"[01]+", params["bits"]):
        raise FormatError(source, no, col, f"bits {params['bits']!r} is not a bitstring")
    if "depth" in params and not params["depth"].isdigit():
        raise FormatError(source, no, col, f"depth {params['depth']!r} is not a natural")
    doc = StateDoc(name, kind, params)
    for no, col, line in it:
        m = re.fullmatch(r"component\s+(\S+)\s+(\S+)", line)
        if kind != "mixture" or not m:
            raise FormatError(source, no, col, f"unexpected line {line!r}")
        try:
            doc.components.append((parse_rational(m.group(1)), m.group(2)))
        except ScalarError as exc:
            raise FormatError(source, no, col, str(exc)) from None
    if kind == "mixture" and not doc.components:
        raise FormatError(source, no, col, "mixture without components")
    return doc


def format_state(doc: StateDoc) -> str:
    head = " ".join([f"kind: {doc.kind}"] + [f"{k}: {doc.params[k]}" for k in _KINDS[doc.kind]])
    out = [f"state {doc.name}", head]
    out.extend(f"component {_fmt_q(w)} {ref}" for w, ref in doc.components)
    return "\n".join(out) + "\n"


def load_system(ref: str, length: int, base: Path) -> SystemB:
    """``standard`` / ``hadamard`` or a vector file whose sets are the pairs, in order."""
    if ref == "standard":
        return SystemB.standard(length)
    if ref == "hadamard":
        return SystemB.hadamard(length)
    path = base / ref
    n, sets = parse_vectors(path.read_text(), path)
    if n != 1:
        raise FormatError(path, 1, 1, "a system file holds one-qubit vectors")
    try:
        return SystemB([[QVector(v) for v in pair] for pair in sets.values()])
    except InvariantError as exc:
        raise FormatError(path, 1, 1, str(exc)) from None


def load_state(path, _stack=()) -> DensityPrefix:
    path = Path(path)
    if path.resolve() in _stack:
        raise FormatError(path, 1, 1, "mixture refers to itself")
    doc = parse_state(path.read_text(), path)
    base = path.parent
    try:
        if doc.kind == "tracial":
            return tracial_prefix(int(doc.params["depth"]))
        if doc.kind == "classical":
            return classical_prefix(doc.params["bits"])
        if doc.kind == "product":
            bits = doc.params["bits"]
            return product_prefix(load_system(doc.params["basisfile"], len(bits), base), bits)
        parts = [load_state(base / ref, _stack + (path.resolve(),)) for _, ref in doc.components]
        return mixture_prefix([w for w, _ in doc.components], parts)
    except (ValueError, InvariantError) as exc:
        if isinstance(exc, FormatError):
            raise
        raise FormatError(path, 2, 1, str(exc)) from None


# ----------------------------------------------------------------------
# tests


@dataclass
class TestDoc:
    __test__ = False

    name: str
    total: Fraction | None = None
    members: list[tuple[int, str]] = field(default_factory=list)


def parse_test(text: str, source="<test>") -> TestDoc:
    it = _lines(text)
    try:
        no, col, line = next(it)
    except StopIteration:
        raise FormatError(source, 1, 1, "empty test file") from None
    m = re.fullmatch(r"test\s+(\S+)", line)
    if not m:
        raise FormatError(source, no, col, "expected 'test <name>'")
    doc = TestDoc(m.group(1))
    for no, col, line in it:
        m = re.fullmatch(r"total:\s*(\S+)", line)
        if m:
            if doc.members or doc.total is not None:
                raise FormatError(source, no, col, "'total:' must precede members, once")
            try:
                doc.total = parse_rational(m.group(1))
            except ScalarError as exc:
                raise FormatError(source, no, col, str(exc)) from None
            continue
        m = re.fullmatch(r"member\s+(\d+)\s+proj\s+(\S+)", line)
        if not m:
            raise FormatError(source, no, col, f"cannot parse member {line!r}")
        doc.members.append((int(m.group(1)), m.group(2)))
    return doc


def format_test(doc: TestDoc) -> str:
    out = [f"test {doc.name}"]
    if doc.total is not None:
        out.append(f"total: {_fmt_q(doc.total)}")
    out.extend(f"member {n} proj {ref}" for n, ref in doc.members)
    return "\n".join(out) + "\n"


def load_test(path) -> StrongSolovayTestPrefix:
    path = Path(path)
    doc = parse_test(path.read_text(), path)
    members = []
    for k, (n, ref) in enumerate(doc.members, start=1):
        p = load_projection(path.parent / ref)
        if p.n_qubits != n:
            raise FormatError(path, 1, 1, f"member {k} declared on {n} qubits, matrix has {p.n_qubits}")
        members.append(p)
    try:
        return StrongSolovayTestPrefix(members, doc.total)
    except InvariantError as exc:
        raise FormatError(path, 1, 1, str(exc)) from None


def save_test(test: StrongSolovayTestPrefix, path, name: str = "t") -> Path:
    path = Path(path)
    side = path.parent / f"{path.stem}.d"
    side.mkdir(parents=True, exist_ok=True)
    doc = TestDoc(name, test.declared_total)
    for m, p in enumerate(test.members, start=1):
        (side / f"s{m}.mat").write_text(format_matrix(p.matrix))
        doc.members.append((p.n_qubits, f"{side.name}/s{m}.mat"))
    path.write_text(format_test(doc))
    return path


__all__ = [
    "FormatError",
    "TableError",
    "parse_matrix",
    "format_matrix",
    "parse_vectors",
    "format_vectors",
    "parse_machine",
    "format_machine",
    "load_machine",
    "save_machine",
    "parse_state",
    "format_state",
    "load_state",
    "parse_test",
    "format_test",
    "load_test",
    "save_test",
    "OrthoSet",
]
