"""Exact rational scalars, dense rational matrices and row-echelon machinery.

Scalars are ``gmpy2.mpq`` values, which are always kept in lowest terms with a
positive denominator.  ``Matrix`` is an immutable row-major dense matrix; its
product skips zero entries, which is what keeps the block-sparse images of the
representations cheap to multiply.

Linear algebra (rank, RREF, nullspaces, spans) goes through ``Echelon``, an
incremental reduced-row-echelon builder over sparse dict rows.  Pivots are
always chosen at the smallest surviving column, so the rows it holds are
exactly the RREF of the span inserted so far.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from gmpy2 import mpq

ZERO = mpq(0)
ONE = mpq(1)

__all__ = [
    "ZERO", "ONE", "Q", "render_q", "parse_q", "Matrix", "BlockPartition",
    "Echelon", "rref", "rank", "nullspace", "span_basis", "jordan_block",
    "ad_shift_power", "commutator", "block_view", "is_i_diagonal",
    "independence_certificate", "IndependenceCertificate", "DimensionError",
]


class DimensionError(ValueError):
    """Raised when matrix shapes do not conform."""


_MPQ = type(mpq(0))


def Q(value) -> mpq:
    """Coerce ints, strings ``"p/q"``, Fractions and mpq to an exact rational."""
    if type(value) is _MPQ:
        return value
    if isinstance(value, str):
        return parse_q(value)
    if isinstance(value, Fraction):
        return mpq(value.numerator, value.denominator)
    if isinstance(value, float):
        raise TypeError("floats are not accepted as exact rationals")
    return mpq(value)


def render_q(q) -> str:
    """``"p/q"``, or ``"p"`` when the denominator is 1."""
    q = mpq(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def parse_q(text: str) -> mpq:
    text = text.strip()
    if "/" in text:
        num, den = text.split("/", 1)
        den_i = int(den)
        if den_i == 0:
            raise ZeroDivisionError(f"zero denominator in {text!r}")
        return mpq(int(num), den_i)
    return mpq(int(text))


class Matrix:
    """Immutable dense matrix over the rationals."""

    __slots__ = ("_rows", "rows", "cols", "_sparse", "_hash")

    def __init__(self, rows: Iterable[Iterable]):
        data = tuple(tuple(Q(v) for v in row) for row in rows)
        if not data or not data[0]:
            raise DimensionError("matrices must have at least one row and one column")
        width = len(data[0])
        if any(len(r) != width for r in data):
            raise DimensionError("ragged rows")
        self._rows = data
        self.rows = len(data)
        self.cols = width
        self._sparse = None
        self._hash = None

    @classmethod
    def _raw(cls, data: tuple) -> "Matrix":
        # trusted constructor: data already a tuple of tuples of mpq
        m = cls.__new__(cls)
        m._rows = data
        m.rows = len(data)
        m.cols = len(data[0])
        m._sparse = None
        m._hash = None
        return m

    @classmethod
    def zeros(cls, rows: int, cols: int | None = None) -> "Matrix":
        cols = rows if cols is None else cols
        return cls._raw(tuple((ZERO,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls._raw(tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n)))

    @classmethod
    def unit(cls, rows: int, cols: int, i: int, j: int) -> "Matrix":
        """Matrix unit with a single 1 at 0-based position (i, j)."""
        data = [[ZERO] * cols for _ in range(rows)]
        data[i][j] = ONE
        return cls._raw(tuple(tuple(r) for r in data))

    @classmethod
    def from_flat(cls, rows: int, cols: int, entries: Sequence) -> "Matrix":
        if len(entries) != rows * cols:
            raise DimensionError("entries length must equal rows * cols")
        return cls(entries[i * cols:(i + 1) * cols] for i in range(rows))

    @classmethod
    def from_sparse(cls, rows: int, cols: int, entries: dict) -> "Matrix":
        data = [[ZERO] * cols for _ in range(rows)]
        for (i, j), v in entries.items():
            data[i][j] = Q(v)
        return cls._raw(tuple(tuple(r) for r in data))

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, ij):
        i, j = ij
        return self._rows[i][j]

    def row(self, i: int) -> tuple:
        return self._rows[i]

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self._rows)

    def tolist(self) -> list[list]:
        return [list(r) for r in self._rows]

    def flat(self) -> tuple:
        return tuple(v for r in self._rows for v in r)

    def sparse_rows(self) -> tuple:
        """Per row, the tuple of (column, value) pairs with nonzero value."""
        if self._sparse is None:
            self._sparse = tuple(tuple((j, v) for j, v in enumerate(r) if v) for r in self._rows)
        return self._sparse

    def nonzeros(self) -> dict:
        return {(i, j): v for i, r in enumerate(self.sparse_rows()) for j, v in r}

    def is_zero(self) -> bool:
        return not any(self.sparse_rows())

    def __bool__(self):
        raise TypeError("use is_zero() to test a Matrix")

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self._rows == other._rows

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._rows)
        return self._hash

    def __repr__(self):
        body = ", ".join("[" + ", ".join(render_q(v) for v in r) + "]" for r in self._rows)
        return f"Matrix([{body}])"

    def _check_same(self, other: "Matrix"):
        if self.shape != other.shape:
            raise DimensionError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_same(other)
        return Matrix._raw(tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self._rows, other._rows)))

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_same(other)
        return Matrix._raw(tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self._rows, other._rows)))

    def __neg__(self) -> "Matrix":
        return Matrix._raw(tuple(tuple(-a for a in r) for r in self._rows))

    def scale(self, c) -> "Matrix":
        c = Q(c)
        return Matrix._raw(tuple(tuple(c * a for a in r) for r in self._rows))

    def __mul__(self, c):
        if isinstance(c, Matrix):
            raise TypeError("use @ for matrix products")
        return self.scale(c)

    __rmul__ = __mul__

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        osp = other.sparse_rows()
        width = other.cols
        out = []
        for srow in self.sparse_rows():
            if not srow:
                out.append((ZERO,) * width)
                continue
            acc = [ZERO] * width
            for k, a in srow:
                for j, b in osp[k]:
                    acc[j] += a * b
            out.append(tuple(acc))
        return Matrix._raw(tuple(out))

    def apply(self, vec: Sequence) -> tuple:
        """Matrix times column vector."""
        if len(vec) != self.cols:
            raise DimensionError("vector length mismatch")
        return tuple(sum((a * vec[j] for j, a in srow), ZERO) for srow in self.sparse_rows())

    def transpose(self) -> "Matrix":
        return Matrix._raw(tuple(zip(*self._rows)))

    T = property(transpose)

    def submatrix(self, r0: int, r1: int, c0: int, c1: int) -> "Matrix":
        return Matrix._raw(tuple(r[c0:c1] for r in self._rows[r0:r1]))

    def with_block(self, r0: int, c0: int, block: "Matrix") -> "Matrix":
        """Copy with ``block`` pasted at 0-based offset (r0, c0)."""
        data = [list(r) for r in self._rows]
        for i, brow in enumerate(block._rows):
            data[r0 + i][c0:c0 + block.cols] = brow
        return Matrix._raw(tuple(tuple(r) for r in data))

    def trace(self):
        return sum((self._rows[i][i] for i in range(min(self.rows, self.cols))), ZERO)

    def det(self):
        if self.rows != self.cols:
            raise DimensionError("determinant of a non-square matrix")
        a = [list(r) for r in self._rows]
        n = self.rows
        det = ONE
        for c in range(n):
            p = next((r for r in range(c, n) if a[r][c]), None)
            if p is None:
                return ZERO
            if p != c:
                a[c], a[p] = a[p], a[c]
                det = -det
            piv = a[c][c]
            det *= piv
            for r in range(c + 1, n):
                f = a[r][c]
                if f:
                    f /= piv
                    ar, ac = a[r], a[c]
                    for j in range(c, n):
                        if ac[j]:
                            ar[j] -= f * ac[j]
        return det

    def inverse(self) -> "Matrix":
        if self.rows != self.cols:
            raise DimensionError("inverse of a non-square matrix")
        n = self.rows
        a = [list(r) + [ONE if i == j else ZERO for j in range(n)] for i, r in enumerate(self._rows)]
        for c in range(n):
            p = next((r for r in range(c, n) if a[r][c]), None)
            if p is None:
                raise ZeroDivisionError("matrix is singular")
            a[c], a[p] = a[p], a[c]
            inv = 1 / a[c][c]
            a[c] = [v * inv for v in a[c]]
            for r in range(n):
                if r != c and a[r][c]:
                    f = a[r][c]
                    ar, ac = a[r], a[c]
                    for j in range(2 * n):
                        if ac[j]:
                            ar[j] -= f * ac[j]
        return Matrix._raw(tuple(tuple(r[n:]) for r in a))

    @staticmethod
    def block_diag(*blocks: "Matrix") -> "Matrix":
        n_rows = sum(b.rows for b in blocks)
        n_cols = sum(b.cols for b in blocks)
        data = [[ZERO] * n_cols for _ in range(n_rows)]
        r0 = c0 = 0
        for b in blocks:
            for i, brow in enumerate(b._rows):
                data[r0 + i][c0:c0 + b.cols] = brow
            r0 += b.rows
            c0 += b.cols
        return Matrix._raw(tuple(tuple(r) for r in data))

    @staticmethod
    def kron(a: "Matrix", b: "Matrix") -> "Matrix":
        data = []
        for arow in a._rows:
            for brow in b._rows:
                data.append(tuple(x * y for x in arow for y in brow))
        return Matrix._raw(tuple(data))


def commutator(a: Matrix, b: Matrix) -> Matrix:
    if a.shape != b.shape or a.rows != a.cols:
        raise DimensionError("commutator needs square matrices of equal size")
    return Matrix.from_sparse(a.rows, a.cols, commutator_entries(a, b))


def commutator_entries(a: Matrix, b: Matrix) -> dict:
    """Nonzero entries of ab - ba as {(i, j): value}."""
    out: dict = {}
    asp, bsp = a.sparse_rows(), b.sparse_rows()
    for i, srow in enumerate(asp):
        for k, x in srow:
            for j, y in bsp[k]:
                out[(i, j)] = out.get((i, j), ZERO) + x * y
    for i, srow in enumerate(bsp):
        for k, x in srow:
            for j, y in asp[k]:
                out[(i, j)] = out.get((i, j), ZERO) - x * y
    return {k: v for k, v in out.items() if v}


class BlockPartition(tuple):
    """Block sizes (d_1, ..., d_l) of a square matrix; all sizes positive."""

    def __new__(cls, sizes: Iterable[int]):
        sizes = tuple(int(s) for s in sizes)
        if not sizes or any(s < 1 for s in sizes):
            raise ValueError(f"block sizes must be positive, got {sizes}")
        return super().__new__(cls, sizes)

    @property
    def total(self) -> int:
        return sum(self)

    @property
    def offsets(self) -> tuple[int, ...]:
        out, acc = [], 0
        for s in self:
            out.append(acc)
            acc += s
        return tuple(out)

    def span(self, i: int) -> tuple[int, int]:
        """0-based half-open index range of block i (1-based, as in block notation)."""
        if not 1 <= i <= len(self):
            raise IndexError(f"block index {i} outside 1..{len(self)}")
        start = self.offsets[i - 1]
        return start, start + self[i - 1]

    def reversed(self) -> "BlockPartition":
        return BlockPartition(tuple(self)[::-1])


def jordan_block(p: int, eigenvalue=0, orientation: str = "upper") -> Matrix:
    """J^p(eigenvalue) (upper) or J_p(eigenvalue) (lower)."""
    if p < 1:
        raise ValueError("Jordan block size must be >= 1")
    ev = Q(eigenvalue)
    if orientation not in ("upper", "lower"):
        raise ValueError(f"orientation must be 'upper' or 'lower', not {orientation!r}")
    entries = {(i, i): ev for i in range(p)}
    for i in range(p - 1):
        entries[(i, i + 1) if orientation == "upper" else (i + 1, i)] = ONE
    return Matrix.from_sparse(p, p, entries)


def ad_shift_power(A: Matrix, lam, k: int, X: Matrix) -> Matrix:
    """(ad A - lam)^k applied to X."""
    if A.rows != A.cols or X.rows != X.cols or A.rows != X.rows:
        raise DimensionError("ad_shift_power needs square matrices of equal size")
    lam = Q(lam)
    for _ in range(k):
        X = A @ X - X @ A - X.scale(lam)
    return X


def block_view(M: Matrix, part_rows: BlockPartition, part_cols: BlockPartition, i: int, j: int) -> Matrix:
    """Copy of block (i, j), 1-based."""
    if M.rows != part_rows.total or M.cols != part_cols.total:
        raise DimensionError("partition totals do not match the matrix")
    r0, r1 = part_rows.span(i)
    c0, c1 = part_cols.span(j)
    return M.submatrix(r0, r1, c0, c1)


def block_of(M: Matrix, part: BlockPartition, i: int, j: int) -> Matrix:
    return block_view(M, part, part, i, j)


def is_i_diagonal(M: Matrix, part: BlockPartition, s: int) -> bool:
    """True iff every nonzero entry of M lies in a block (i, i+s)."""
    if M.rows != part.total or M.cols != part.total:
        raise DimensionError("partition total does not match the matrix")
    owner = [b for b, size in enumerate(part) for _ in range(size)]
    return all(owner[j] - owner[i] == s for (i, j) in M.nonzeros())


# --------------------------------------------------------------------------
# Row echelon machinery over sparse dict rows
# --------------------------------------------------------------------------

class Echelon:
    """Incrementally maintained reduced row-echelon basis of a span.

    Rows are dicts ``{column: value}``.  Every stored row has pivot value 1 at
    its smallest column, and pivot columns vanish in all other rows.
    """

    __slots__ = ("pivots",)

    def __init__(self, vectors: Iterable = ()):
        self.pivots: dict[int, dict] = {}
        for v in vectors:
            self.add(v)

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, vec) -> dict:
        """Remainder of ``vec`` (dict or sequence) modulo the span."""
        v = _as_dict(vec)
        piv = self.pivots
        for c in [c for c in v if c in piv]:
            f = v.get(c)
            if not f:
                continue
            for k, x in piv[c].items():
                nv = v.get(k, ZERO) - f * x
                if nv:
                    v[k] = nv
                else:
                    v.pop(k, None)
        return v

    def contains(self, vec) -> bool:
        return not self.reduce(vec)

    def add(self, vec) -> bool:
        """Insert a vector; return True if it enlarged the span."""
        v = self.reduce(vec)
        if not v:
            return False
        p = min(v)
        inv = 1 / v[p]
        v = {k: x * inv for k, x in v.items()}
        for row in self.pivots.values():
            f = row.get(p)
            if f:
                for k, x in v.items():
                    nv = row.get(k, ZERO) - f * x
                    if nv:
                        row[k] = nv
                    else:
                        row.pop(k, None)
        self.pivots[p] = v
        return True

    def rows(self) -> list[dict]:
        return [self.pivots[p] for p in sorted(self.pivots)]

    def dense_rows(self, ncols: int) -> list[tuple]:
        out = []
        for r in self.rows():
            d = [ZERO] * ncols
            for k, x in r.items():
                d[k] = x
            out.append(tuple(d))
        return out

    def nullspace(self, ncols: int) -> list[tuple]:
        """Basis of {x : row . x = 0 for all rows}, one vector per free column."""
        pivs = self.pivots
        out = []
        for f in range(ncols):
            if f in pivs:
                continue
            x = [ZERO] * ncols
            x[f] = ONE
            for p, row in pivs.items():
                val = row.get(f)
                if val:
                    x[p] = -val
            out.append(tuple(x))
        return out


def _as_dict(vec) -> dict:
    if isinstance(vec, dict):
        return {k: Q(v) for k, v in vec.items() if v}
    return {i: Q(v) for i, v in enumerate(vec) if v}


def rref(rows: Iterable, ncols: int | None = None) -> tuple[list[tuple], list[int]]:
    """Reduced row-echelon form (nonzero rows only) and pivot columns."""
    rows = list(rows)
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    e = Echelon(rows)
    return e.dense_rows(ncols), sorted(e.pivots)


def rank(rows: Iterable) -> int:
    return Echelon(rows).rank


def nullspace(M: Matrix) -> list[tuple]:
    """Basis of the right nullspace {x : M x = 0}."""
    return Echelon(dict(r) for r in M.sparse_rows()).nullspace(M.cols)


def span_basis(vectors: Iterable, ncols: int) -> list[tuple]:
    """RREF basis of the span of the given vectors."""
    return Echelon(vectors).dense_rows(ncols)


class IndependenceCertificate:
    """Verdict of a linear independence test over matrices of one shape."""

    __slots__ = ("independent", "relation", "rank")

    def __init__(self, independent: bool, relation, rank: int):
        self.independent = independent
        self.relation = relation
        self.rank = rank

    def __repr__(self):
        rel = None if self.relation is None else [render_q(c) for c in self.relation]
        return f"IndependenceCertificate(independent={self.independent}, rank={self.rank}, relation={rel})"


def independence_certificate(mats: Sequence[Matrix]) -> IndependenceCertificate:
    """Rank-test flattened matrices; on dependence return a kernel relation.

    The relation c satisfies sum(c[k] * mats[k]) == 0 and is the first RREF
    nullspace vector with its first nonzero coordinate scaled to 1.
    """
    mats = list(mats)
    if not mats:
        return IndependenceCertificate(True, None, 0)
    shape = mats[0].shape
    if any(m.shape != shape for m in mats):
        raise DimensionError("all matrices must share one shape")
    # rows of the (entries x k) matrix whose columns are the flattened inputs
    columns: dict[tuple, dict] = {}
    for k, m in enumerate(mats):
        for pos, v in m.nonzeros().items():
            columns.setdefault(pos, {})[k] = v
    e = Echelon(columns.values())
    r = e.rank
    if r == len(mats):
        return IndependenceCertificate(True, None, r)
    rel = e.nullspace(len(mats))[0]
    lead = next(c for c in rel if c)
    rel = tuple(c / lead for c in rel)
    return IndependenceCertificate(False, rel, r)
