"""Exact linear algebra over Q(i)(sqrt2) on n-qubit spaces.

Index convention: qubit k of n (1-based) is bit ``n - k`` of a basis index,
so the last qubit varies fastest and ``|x1 x2 ... xn>`` has index
``int("x1x2...xn", 2)``.

Matrices are tuples of row tuples of :class:`ExtScalar`. Nothing here uses
floating point; orthogonal projections onto spans are computed as
``V (V* V)^-1 V*`` so no square roots are ever needed.
"""
from __future__ import annotations

from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from .scalar import ONE, ZERO, ExtScalar, cmp_to_rational

Matrix = tuple  # tuple[tuple[ExtScalar, ...], ...]


class DimensionError(ValueError):
    pass


class InvariantError(ValueError):
    """A value violates the invariants of the type it was built as."""


def _qubits_for(dim: int) -> int:
    n = dim.bit_length() - 1
    if dim < 1 or (1 << n) != dim:
        raise DimensionError(f"dimension {dim} is not a power of two")
    return n


def _as_scalars(entries) -> tuple[ExtScalar, ...]:
    if type(entries) is tuple and all(type(e) is ExtScalar for e in entries):
        return entries
    return tuple(ExtScalar.coerce(e) for e in entries)


# ----------------------------------------------------------------------
# matrix helpers


def zeros(dim: int) -> Matrix:
    row = (ZERO,) * dim
    return (row,) * dim


def identity(dim: int) -> Matrix:
    return tuple(tuple(ONE if i == j else ZERO for j in range(dim)) for i in range(dim))


def matmul(x: Matrix, y: Matrix) -> Matrix:
    m = len(y[0]) if y else 0
    out = []
    for row in x:
        acc = [ZERO] * m
        for k, xv in enumerate(row):
            if xv.is_zero():
                continue
            yrow = y[k]
            for j in range(m):
                yv = yrow[j]
                if not yv.is_zero():
                    acc[j] = acc[j] + xv * yv
        out.append(tuple(acc))
    return tuple(out)


def adjoint(x: Matrix) -> Matrix:
    return tuple(tuple(x[i][j].conj() for i in range(len(x))) for j in range(len(x[0])))


def trace(x: Matrix) -> ExtScalar:
    total = ZERO
    for i, row in enumerate(x):
        total = total + row[i]
    return total


def scale(x: Matrix, s) -> Matrix:
    s = ExtScalar.coerce(s)
    return tuple(tuple(v * s for v in row) for row in x)


def add(x: Matrix, y: Matrix) -> Matrix:
    return tuple(tuple(a + b for a, b in zip(rx, ry)) for rx, ry in zip(x, y))


def kron(x: Matrix, y: Matrix) -> Matrix:
    rows = []
    for xr in x:
        for yr in y:
            rows.append(tuple(a * b for a in xr for b in yr))
    return tuple(rows)


def outer(u: Sequence[ExtScalar], v: Sequence[ExtScalar]) -> Matrix:
    """``|u><v|``."""
    vc = [e.conj() for e in v]
    zero_row = (ZERO,) * len(vc)
    return tuple(
        zero_row if a.is_zero() else tuple(ZERO if b.is_zero() else a * b for b in vc) for a in u
    )


def is_hermitian(x: Matrix) -> bool:
    n = len(x)
    return all(x[i][j] == x[j][i].conj() for i in range(n) for j in range(i, n))


def trace_of_product(x: Matrix, y: Matrix) -> ExtScalar:
    """``Tr(x y)`` in O(nnz(x))."""
    total = ZERO
    for i, row in enumerate(x):
        for j, v in enumerate(row):
            if not v.is_zero():
                w = y[j][i]
                if not w.is_zero():
                    total = total + v * w
    return total


def nonzero_entries(x: Matrix) -> tuple[tuple[int, int, ExtScalar], ...]:
    """``(i, j, x[i][j])`` for every nonzero entry, row-major."""
    return tuple((i, j, v) for i, row in enumerate(x) for j, v in enumerate(row) if not v.is_zero())


def independent_subset(vectors: Sequence[Sequence[ExtScalar]]) -> list[int]:
    """Indices of a maximal linearly independent subfamily (first-come order).

    Incremental exact Gaussian elimination: each vector is reduced against
    the pivots found so far and kept iff a nonzero remainder is left.
    """
    basis: list[tuple[int, list[ExtScalar]]] = []  # (pivot column, reduced row)
    keep = []
    for idx, vec in enumerate(vectors):
        row = list(vec)
        for col, prow in basis:
            f = row[col]
            if not f.is_zero():
                row = [a - f * b for a, b in zip(row, prow)]
        pivot = next((j for j, v in enumerate(row) if not v.is_zero()), None)
        if pivot is None:
            continue
        inv = row[pivot].inverse()
        row = [v * inv for v in row]
        # keep earlier rows reduced in the new pivot column
        basis = [
            (c, [a - r[pivot] * b for a, b in zip(r, row)]) if not r[pivot].is_zero() else (c, r)
            for c, r in basis
        ]
        basis.append((pivot, row))
        keep.append(idx)
    return keep


def rank(vectors: Sequence[Sequence[ExtScalar]]) -> int:
    return len(independent_subset(vectors))


def invert(x: Matrix) -> Matrix:
    """Gauss-Jordan inverse; raises ZeroDivisionError when singular."""
    n = len(x)
    aug = [list(row) + [ONE if i == j else ZERO for j in range(n)] for i, row in enumerate(x)]
    for col in range(n):
        piv = next((r for r in range(col, n) if not aug[r][col].is_zero()), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = aug[col][col].inverse()
        aug[col] = [v * inv for v in aug[col]]
        for r in range(n):
            if r != col:
                f = aug[r][col]
                if not f.is_zero():
                    aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return tuple(tuple(row[n:]) for row in aug)


def is_psd(x: Matrix) -> bool:
    """Exact positive-semidefiniteness of a Hermitian matrix by pivoted LDL*.

    Pivot on a strictly positive diagonal entry; a zero diagonal entry must
    have an all-zero row and column (then deflate it); any negative diagonal
    entry refutes PSD.
    """
    a = [list(row) for row in x]
    while a:
        n = len(a)
        diag_signs = [a[i][i].sign() for i in range(n)]
        if any(s < 0 for s in diag_signs):
            return False
        zero_rows = [i for i in range(n) if diag_signs[i] == 0]
        for i in zero_rows:
            if any(not a[i][j].is_zero() or not a[j][i].is_zero() for j in range(n)):
                return False
        if zero_rows:
            live = [i for i in range(n) if diag_signs[i] != 0]
            a = [[a[i][j] for j in live] for i in live]
            continue
        # all diagonal entries positive: eliminate the first
        p = a[0][0]
        inv = p.inverse()
        col = [a[i][0] for i in range(1, n)]
        rowp = [a[0][j] for j in range(1, n)]
        nxt = []
        for ii in range(1, n):
            ci = col[ii - 1]
            if ci.is_zero():
                nxt.append(a[ii][1:])
            else:
                f = ci * inv
                nxt.append([a[ii][j] - f * rowp[j - 1] for j in range(1, n)])
        a = nxt
    return True


# ----------------------------------------------------------------------
# types


class QVector:
    __slots__ = ("n_qubits", "entries", "_hash")

    def __init__(self, entries: Iterable, n_qubits: int | None = None):
        self.entries = _as_scalars(entries)
        n = _qubits_for(len(self.entries))
        if n_qubits is not None and n_qubits != n:
            raise DimensionError(f"{len(self.entries)} entries is not 2^{n_qubits}")
        self.n_qubits = n
        self._hash = None

    @classmethod
    def basis(cls, n_qubits: int, index: int | str) -> QVector:
        """Standard basis vector; ``index`` may be a bitstring label."""
        if isinstance(index, str):
            if len(index) != n_qubits:
                raise DimensionError(f"label {index!r} is not {n_qubits} bits")
            index = int(index, 2) if index else 0
        dim = 1 << n_qubits
        return cls([ONE if i == index else ZERO for i in range(dim)])

    @classmethod
    def from_bits(cls, bits: str) -> QVector:
        return cls.basis(len(bits), bits)

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def __eq__(self, other):
        return isinstance(other, QVector) and self.entries == other.entries

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.entries)
        return self._hash

    def __repr__(self):
        return f"QVector([{', '.join(map(str, self.entries))}])"

    def scaled(self, s) -> QVector:
        s = ExtScalar.coerce(s)
        return QVector([e * s for e in self.entries])

    def tensor(self, other: QVector) -> QVector:
        return QVector([a * b for a in self.entries for b in other.entries])

    def norm2(self) -> ExtScalar:
        return inner_product(self, self)

    def projector(self) -> Matrix:
        return outer(self.entries, self.entries)


def inner_product(u: QVector, v: QVector) -> ExtScalar:
    """``<u|v> = sum conj(u_i) v_i``."""
    if u.n_qubits != v.n_qubits:
        raise DimensionError(f"{u.n_qubits}-qubit vs {v.n_qubits}-qubit vector")
    total = ZERO
    for a, b in zip(u.entries, v.entries):
        if not a.is_zero() and not b.is_zero():
            total = total + a.conj() * b
    return total


class OrthoSet:
    """A nonempty orthonormal family; construct via :func:`check_orthonormal`."""

    __slots__ = ("n_qubits", "vectors", "__dict__")

    def __init__(self, vectors: Sequence[QVector], *, check: bool = True):
        vectors = tuple(vectors)
        if check:
            _require_orthonormal(vectors)
        self.vectors = vectors
        self.n_qubits = vectors[0].n_qubits

    def __len__(self):
        return len(self.vectors)

    def __iter__(self):
        return iter(self.vectors)

    def __getitem__(self, i):
        return self.vectors[i]

    def __eq__(self, other):
        # F is an unordered set of vectors
        return isinstance(other, OrthoSet) and frozenset(self.vectors) == frozenset(other.vectors)

    def __hash__(self):
        return hash(frozenset(self.vectors))

    def __repr__(self):
        return f"OrthoSet(n_qubits={self.n_qubits}, size={len(self.vectors)})"

    @cached_property
    def projection(self) -> ExactProjection:
        dim = 1 << self.n_qubits
        acc = [[ZERO] * dim for _ in range(dim)]
        for v in self.vectors:
            nz = [(i, e) for i, e in enumerate(v.entries) if not e.is_zero()]
            for i, a in nz:
                row = acc[i]
                for j, b in nz:
                    row[j] = row[j] + a * b.conj()
        return ExactProjection(tuple(map(tuple, acc)), len(self.vectors), check=False)


def _orthonormal_violation(vectors: Sequence[QVector]) -> str | None:
    if not vectors:
        return "empty family"
    n = vectors[0].n_qubits
    for k, v in enumerate(vectors):
        if v.n_qubits != n:
            raise DimensionError(f"vector {k} has {v.n_qubits} qubits, expected {n}")
    for i, u in enumerate(vectors):
        nu = inner_product(u, u)
        if nu != ONE:
            return f"vector {i} has norm^2 {nu} != 1"
        for j in range(i + 1, len(vectors)):
            ip = inner_product(u, vectors[j])
            if not ip.is_zero():
                return f"vectors {i},{j} have inner product {ip} != 0"
    return None


def _require_orthonormal(vectors):
    msg = _orthonormal_violation(vectors)
    if msg is not None:
        raise InvariantError(f"not orthonormal: {msg}")


def check_orthonormal(vectors: Sequence[QVector]) -> OrthoSet:
    """Return an :class:`OrthoSet`, or raise :class:`InvariantError` naming the bad pair."""
    return OrthoSet(vectors)


class ExactProjection:
    """Hermitian idempotent matrix together with its rank."""

    __slots__ = ("n_qubits", "matrix", "rank", "__dict__")

    def __init__(self, matrix, rank: int | None = None, *, check: bool = True):
        matrix = tuple(_as_scalars(row) for row in matrix)
        self.n_qubits = _qubits_for(len(matrix))
        tr = trace(matrix)
        if not tr.is_rational() or Fraction(tr.a).denominator != 1:
            raise InvariantError(f"projection trace {tr} is not an integer")
        if rank is None:
            rank = int(tr.a)
        if check:
            if not is_hermitian(matrix):
                raise InvariantError("projection is not Hermitian")
            if matmul(matrix, matrix) != matrix:
                raise InvariantError("projection is not idempotent")
            if tr != rank:
                raise InvariantError(f"trace {tr} != rank {rank}")
        self.matrix = matrix
        self.rank = rank

    @classmethod
    def identity(cls, n_qubits: int) -> ExactProjection:
        return cls(identity(1 << n_qubits), 1 << n_qubits, check=False)

    @classmethod
    def zero(cls, n_qubits: int) -> ExactProjection:
        return cls(zeros(1 << n_qubits), 0, check=False)

    @property
    def dim(self) -> int:
        return 1 << self.n_qubits

    @cached_property
    def nonzeros(self):
        return nonzero_entries(self.matrix)

    def __eq__(self, other):
        return isinstance(other, ExactProjection) and self.matrix == other.matrix

    def __hash__(self):
        return hash(self.matrix)

    def __repr__(self):
        return f"ExactProjection(n_qubits={self.n_qubits}, rank={self.rank})"

    def range_vectors(self) -> list[QVector]:
        """A (non-orthonormal) basis of the range: independent columns."""
        cols = [tuple(self.matrix[i][j] for i in range(self.dim)) for j in range(self.dim)]
        keep = independent_subset(cols)
        return [QVector(cols[j]) for j in keep]

    def contains(self, other: ExactProjection) -> bool:
        """``range(other) <= range(self)``, i.e. ``self @ other == other``."""
        if other.n_qubits != self.n_qubits:
            raise DimensionError("projections on different spaces")
        return matmul(self.matrix, other.matrix) == other.matrix


class DensityMatrix:
    __slots__ = ("n_qubits", "matrix", "__dict__")

    def __init__(self, matrix, *, check: bool = True):
        matrix = tuple(_as_scalars(row) for row in matrix)
        self.n_qubits = _qubits_for(len(matrix))
        if check:
            if not is_hermitian(matrix):
                raise InvariantError("density matrix is not Hermitian")
            if trace(matrix) != ONE:
                raise InvariantError(f"density matrix has trace {trace(matrix)} != 1")
            if not is_psd(matrix):
                raise InvariantError("density matrix is not positive semidefinite")
        self.matrix = matrix

    @classmethod
    def pure(cls, v: QVector) -> DensityMatrix:
        """``|v><v| / <v|v>``; ``v`` need not be normalized."""
        n2 = v.norm2()
        proj = v.projector()
        return cls(proj if n2 == ONE else scale(proj, n2.inverse()), check=False)

    @classmethod
    def tracial(cls, n_qubits: int) -> DensityMatrix:
        dim = 1 << n_qubits
        return cls(scale(identity(dim), Fraction(1, dim)), check=False)

    @classmethod
    def classical(cls, bits: str) -> DensityMatrix:
        return cls(QVector.from_bits(bits).projector(), check=False)

    @cached_property
    def nonzeros(self):
        return nonzero_entries(self.matrix)

    def __eq__(self, other):
        return isinstance(other, DensityMatrix) and self.matrix == other.matrix

    def __hash__(self):
        return hash(self.matrix)

    def __repr__(self):
        return f"DensityMatrix(n_qubits={self.n_qubits})"


# ----------------------------------------------------------------------
# operations


def projection_from_span(vectors: Sequence[QVector]) -> ExactProjection:
    """Orthogonal projector onto the joint span, ``V (V*V)^-1 V*``."""
    if not vectors:
        raise DimensionError("empty spanning family")
    n = vectors[0].n_qubits
    for v in vectors:
        if v.n_qubits != n:
            raise DimensionError("spanning vectors on different spaces")
    dim = 1 << n
    keep = independent_subset([v.entries for v in vectors])
    if not keep:
        return ExactProjection.zero(n)
    basis = [vectors[k] for k in keep]
    gram = tuple(tuple(inner_product(u, v) for v in basis) for u in basis)
    ginv = invert(gram)
    # V G^-1: dim x k
    vg = [
        [
            sum((basis[l].entries[i] * ginv[l][j] for l in range(len(basis))), ZERO)
            for j in range(len(basis))
        ]
        for i in range(dim)
    ]
    mat = tuple(
        tuple(
            sum(
                (vg[i][j] * basis[j].entries[k].conj() for j in range(len(basis))),
                ZERO,
            )
            for k in range(dim)
        )
        for i in range(dim)
    )
    return ExactProjection(mat, len(basis), check=False)


def tau_measure(p: ExactProjection) -> Fraction:
    """Tracial measure ``rank / 2^n``."""
    return Fraction(p.rank, p.dim)


def overlap(rho: DensityMatrix, p: ExactProjection) -> ExtScalar:
    """``Tr(rho p)``; real, in [0, 1]."""
    if rho.n_qubits != p.n_qubits:
        raise DimensionError(f"{rho.n_qubits}-qubit state vs {p.n_qubits}-qubit projection")
    # walk the sparser side; Tr(xy) = sum x[i][j] y[j][i]
    a, b = rho.nonzeros, p.nonzeros
    if len(b) < len(a):
        a, other = b, rho.matrix
    else:
        other = p.matrix
    total = ZERO
    for i, j, v in a:
        w = other[j][i]
        if not w.is_zero():
            total = total + v * w
    return total


def partial_trace(rho: DensityMatrix) -> DensityMatrix:
    """Trace out the last qubit."""
    if rho.n_qubits < 1:
        raise DimensionError("cannot trace out a qubit from a 0-qubit state")
    m = rho.matrix
    half = len(m) // 2
    out = tuple(
        tuple(m[2 * i][2 * j] + m[2 * i + 1][2 * j + 1] for j in range(half)) for i in range(half)
    )
    return DensityMatrix(out, check=False)


def tensor_with_identity(p: ExactProjection, extra_qubits: int) -> ExactProjection:
    """``p (x) I_{2^extra}``."""
    if extra_qubits == 0:
        return p
    k = 1 << extra_qubits
    dim = p.dim * k
    rows = []
    for i in range(dim):
        pi, a = divmod(i, k)
        src = p.matrix[pi]
        row = [ZERO] * dim
        for pj, v in enumerate(src):
            if not v.is_zero():
                row[pj * k + a] = v
        rows.append(tuple(row))
    return ExactProjection(tuple(rows), p.rank * k, check=False)


def expectation(v: QVector, m: Matrix) -> ExtScalar:
    """``<v|m|v>``, skipping zero amplitudes."""
    nz = [(i, e) for i, e in enumerate(v.entries) if not e.is_zero()]
    total = ZERO
    for i, a in nz:
        row = m[i]
        ac = a.conj()
        for j, b in nz:
            x = row[j]
            if not x.is_zero():
                total = total + ac * x * b
    return total


def standard_basis(n_qubits: int) -> OrthoSet:
    return OrthoSet([QVector.basis(n_qubits, i) for i in range(1 << n_qubits)], check=False)


def heavy_basis_vectors(basis: OrthoSet, f: ExactProjection, delta) -> list[int]:
    """Indices ``i`` with ``<e_i|F|e_i> > delta`` (strict).

    Also checks the counting bound ``|S| < Tr(F) / delta``.
    """
    delta = Fraction(delta)
    if delta <= 0:
        raise ValueError("delta must be positive")
    if basis.n_qubits != f.n_qubits:
        raise DimensionError("basis and projection on different spaces")
    if len(basis) != f.dim:
        raise DimensionError(f"basis has {len(basis)} vectors, need {f.dim}")
    heavy = [
        i for i, e in enumerate(basis) if cmp_to_rational(expectation(e, f.matrix), delta) > 0
    ]
    if not len(heavy) * delta < f.rank:
        raise AssertionError(f"|S|={len(heavy)} violates |S| < Tr(F)/delta")
    return heavy
