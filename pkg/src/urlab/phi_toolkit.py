"""The operator Y -> J^a(0) Y - Y J^b(0) on rectangular blocks and what is built on it.

Covers the kernel of that operator, independence of the families
T_{i,j} = P_i Q_j - P_j Q_i (closed-form predicate plus a brute-force rank
oracle), the explicit independence families with prescribed sparsity, the
lowest-matrix lemma, and the four-block subalgebra closure scan.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from math import comb
from typing import Callable, Sequence

from .exact_linalg import (
    ONE, ZERO, BlockPartition, DimensionError, Echelon, IndependenceCertificate, Matrix, Q,
    ad_shift_power, block_of, commutator, independence_certificate,
)
from .lie_core import HypothesisViolated
from .rep_builder import block_jordan
from .sampling import rng_for, small_rational

__all__ = [
    "phi", "phi_power", "phi_kernel_basis", "PhiFamily", "phi_family", "lidep_predict",
    "lidep_bruteforce", "fieln2_family", "Fieln2Result", "reduccion_scan", "ReduccionResult",
    "reduccion_oracle", "sample_reduccion_X", "lemma1_check", "Lemma1Verdict",
    "faithful_triples",
]

CLOSURE_CAP = 200


def phi(a: int, b: int, Y: Matrix) -> Matrix:
    """J^a(0) Y - Y J^b(0) for an a x b matrix Y."""
    if Y.shape != (a, b):
        raise DimensionError(f"expected a {a}x{b} matrix, got {Y.shape}")
    # J^a(0) Y shifts rows up, Y J^b(0) shifts columns right
    rows = Y.tolist()
    out = []
    for i in range(a):
        below = rows[i + 1] if i + 1 < a else [ZERO] * b
        out.append(tuple(below[j] - (rows[i][j - 1] if j else ZERO) for j in range(b)))
    return Matrix._raw(tuple(out))


def phi_power(a: int, b: int, Y: Matrix, k: int) -> Matrix:
    for _ in range(k):
        Y = phi(a, b, Y)
    return Y


def phi_kernel_basis(a: int, b: int) -> list[Matrix]:
    """Banded basis of ker Phi_{a,b}, one matrix per free band parameter.

    For a <= b the bands are upper-triangular Toeplitz and pushed to the
    right edge; for b < a they sit in the top b rows.  The result is checked
    against the nullspace of Phi computed as a linear map.
    """
    if a < 1 or b < 1:
        raise ValueError("a and b must be >= 1")
    basis = []
    if a <= b:
        shift = b - a
        for k in range(a):
            basis.append(Matrix.from_sparse(a, b, {(i, shift + i + k): ONE for i in range(a - k)}))
    else:
        for k in range(b):
            basis.append(Matrix.from_sparse(a, b, {(i, i + k): ONE for i in range(b - k)}))
    null = _phi_nullspace(a, b)
    if len(null) != len(basis) or any(not phi(a, b, Y).is_zero() for Y in basis):
        raise RuntimeError(f"banded kernel basis disagrees with the nullspace for ({a}, {b})")
    span = Echelon(m.flat() for m in basis)
    if span.rank != len(basis) or any(not span.contains(v) for v in null):
        raise RuntimeError(f"banded kernel basis does not span the nullspace for ({a}, {b})")
    return basis


def _phi_nullspace(a: int, b: int) -> list[tuple]:
    columns = [phi(a, b, Matrix.unit(a, b, k // b, k % b)).flat() for k in range(a * b)]
    rows = [{k: col[r] for k, col in enumerate(columns) if col[r]} for r in range(a * b)]
    return Echelon(r for r in rows if r).nullspace(a * b)


# ---------------------------------------------------------------------------
# T_{i,j} families
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PhiFamily:
    """P_i, Q_i and T_{i,j} = P_i Q_j - P_j Q_i for 0 <= i < j <= n-1."""

    a: int
    b: int
    c: int
    P: Matrix
    Q: Matrix
    Ps: tuple
    Qs: tuple
    n: int
    Ts: dict = field(repr=False)

    def t_list(self) -> list[Matrix]:
        return [self.Ts[k] for k in sorted(self.Ts)]


def _t_matrices(Ps: Sequence[Matrix], Qs: Sequence[Matrix], n: int) -> dict:
    return {(i, j): Ps[i] @ Qs[j] - Ps[j] @ Qs[i] for i in range(n) for j in range(i + 1, n)}


def phi_family(a: int, b: int, c: int, P: Matrix, Q: Matrix) -> PhiFamily:
    if P.shape != (a, b) or Q.shape != (b, c):
        raise DimensionError(f"P must be {a}x{b} and Q must be {b}x{c}")
    n = max(a + b - 1, b + c - 1)
    Ps, Qs = [P], [Q]
    for _ in range(n):
        Ps.append(phi(a, b, Ps[-1]))
        Qs.append(phi(b, c, Qs[-1]))
    if not (Ps[n].is_zero() and Qs[n].is_zero()):
        raise RuntimeError("Phi failed to vanish at the expected power")
    return PhiFamily(a, b, c, P, Q, tuple(Ps[:n]), tuple(Qs[:n]), n, _t_matrices(Ps, Qs, n))


def faithful_triples(n: int) -> set:
    return {(n, 1, n), (n - 1, 2, n - 1), (n, 1, n - 1), (n - 1, 1, n)}


def _entry(M: Matrix, i: int, j: int):
    """1-based entry, zero when the position lies outside M."""
    if 1 <= i <= M.rows and 1 <= j <= M.cols:
        return M[i - 1, j - 1]
    return ZERO


def lidep_predict(a: int, b: int, c: int, P: Matrix, Q: Matrix, literal: bool = False) -> bool:
    """Closed-form verdict on the independence of {T_{i,j}}.

    Evaluates the three corner conditions.  When n = 1 the family is empty
    and hence independent; ``literal=True`` skips that case and evaluates the
    corner conditions there too, where they can fail for a zero corner.
    Corner entries outside the matrix count as zero.
    """
    if P.shape != (a, b) or Q.shape != (b, c):
        raise DimensionError(f"P must be {a}x{b} and Q must be {b}x{c}")
    n = max(a + b - 1, b + c - 1)
    if n == 1 and not literal:
        return True
    p1, q1 = _entry(P, a, 1), _entry(Q, b, 1)
    p0, q2 = _entry(P, a - 1, 1), _entry(Q, b, 2)
    top = (n, 1, n)
    conds = [
        p1 != 0 and q1 != 0 and (a, b, c) in faithful_triples(n),
        p1 == 0 and p0 != 0 and q1 != 0 and (a, b, c) == top,
        p1 != 0 and q1 == 0 and q2 != 0 and (a, b, c) == top,
    ]
    return sum(conds) == 1


def lidep_bruteforce(a: int, b: int, c: int, P: Matrix, Q: Matrix) -> bool:
    return lidep_certificate(a, b, c, P, Q).independent


def lidep_certificate(a: int, b: int, c: int, P: Matrix, Q: Matrix) -> IndependenceCertificate:
    return independence_certificate(phi_family(a, b, c, P, Q).t_list())


# ---------------------------------------------------------------------------
# explicit families with prescribed sparsity
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Fieln2Result:
    family: PhiFamily
    certificate: IndependenceCertificate

    @property
    def independent(self) -> bool:
        return self.certificate.independent


def _fieln2_P(n: int, i: int, p: Sequence, z, star: Callable[[], object]) -> Matrix:
    rows = n - 1
    data = [[ZERO, ZERO] for _ in range(rows)]
    # 1-based row holding (z, *); for i = 0 it is the last row
    z_row = rows - i
    for r in range(1, rows + 1):
        if r < z_row:
            data[r - 1] = [star(), star()]
        elif r == z_row:
            data[r - 1] = [z, star()]
        elif r == z_row + 1 and i >= 1:
            data[r - 1] = [ZERO, -p[i - 1] * z]
    return Matrix(data)


def _fieln2_Q(n: int, i: int, q: Sequence, w, star: Callable[[], object]) -> Matrix:
    cols = n - 1
    top, bottom = [ZERO] * cols, [ZERO] * cols
    if i == 0:
        top = [star() for _ in range(cols)]
        bottom = [w] + [star() for _ in range(cols - 1)]
    else:
        top[i - 1] = (-1) ** (i - 1) * q[i - 1] * w
        for k in range(i, cols):
            top[k] = star()
        if i < cols:
            bottom[i] = (-1) ** i * w
            for k in range(i + 1, cols):
                bottom[k] = star()
    return Matrix([top, bottom])


def fieln2_family(n: int, p: Sequence, q: Sequence, z, w, filler: random.Random | None = None,
                  strict: bool = True) -> Fieln2Result:
    """Build the prescribed P_0..P_{n-1}, Q_0..Q_{n-1} and rank-test all T_{i,j}.

    Free entries are drawn from ``filler``.  With ``strict`` the hypotheses
    p_j + q_j != 0 and z, w != 0 are enforced; pass ``strict=False`` to
    compute the verdict for data that breaks them.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    p, q = [Q(v) for v in p], [Q(v) for v in q]
    z, w = Q(z), Q(w)
    if len(p) != n - 1 or len(q) != n - 1:
        raise ValueError("p and q must have length n - 1")
    if strict:
        bad = [j + 1 for j in range(n - 1) if p[j] + q[j] == 0]
        if bad:
            raise HypothesisViolated(f"p_j + q_j = 0 for j in {bad}", witness=bad)
        if z == 0 or w == 0:
            raise HypothesisViolated("z and w must be nonzero", witness=(z, w))
    rng = filler if filler is not None else rng_for(0, "fieln2", n)

    def star():
        return small_rational(rng)

    Ps = tuple(_fieln2_P(n, i, p, z, star) for i in range(n))
    Qs = tuple(_fieln2_Q(n, i, q, w, star) for i in range(n))
    fam = PhiFamily(n - 1, 2, n - 1, Ps[0], Qs[0], Ps, Qs, n, _t_matrices(Ps, Qs, n))
    return Fieln2Result(fam, independence_certificate(fam.t_list()))


# ---------------------------------------------------------------------------
# lowest-matrix lemma
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Lemma1Verdict:
    z_zero: bool
    conclusion_holds: bool | None
    mu1: object = None
    nu1: object = None
    reasons: tuple = ()


def _is_banded(Y: Matrix, right: bool) -> bool:
    """Upper-triangular Toeplitz band, right-justified (right=True) or in the top rows."""
    rows, cols = Y.shape
    shift = cols - rows if right else 0
    height = rows if right else cols
    if shift < 0 or height > rows:
        return False
    for i in range(rows):
        for j in range(cols):
            k = j - shift - i
            expected = Y[0, shift + k] if (i < height and k >= 0) else ZERO
            if Y[i, j] != expected:
                return False
    return True


def lemma1_check(X1: Matrix, X2: Matrix, Y1: Matrix, Y2: Matrix) -> Lemma1Verdict:
    """Check the lowest-matrix lemma on one instance.

    Shapes: X1 a x b1, X2 b2 x c, Y1 b1 x c, Y2 a x b2.  X1 and X2 must be
    lowest (bottom-left entry 1), Y1 and Y2 must lie in ker Phi and not both
    vanish.  When Z = X1 Y1 - Y2 X2 is zero the conclusion is tested.
    """
    a, b1 = X1.shape
    b2, c = X2.shape
    if Y1.shape != (b1, c) or Y2.shape != (a, b2):
        raise DimensionError("shapes must be X1 a×b1, X2 b2×c, Y1 b1×c, Y2 a×b2")
    if X1[a - 1, 0] != 1 or X2[b2 - 1, 0] != 1:
        raise HypothesisViolated("X1 and X2 must be lowest matrices")
    if not (phi(b1, c, Y1).is_zero() and phi(a, b2, Y2).is_zero()):
        raise HypothesisViolated("Y1 and Y2 must be annihilated by Phi")
    if Y1.is_zero() and Y2.is_zero():
        raise HypothesisViolated("Y1 and Y2 must not both vanish")
    Z = X1 @ Y1 - Y2 @ X2
    if not Z.is_zero():
        return Lemma1Verdict(False, None)
    reasons = []
    if a > b2:
        reasons.append("a > b2")
    if c > b1:
        reasons.append("c > b1")
    mu1 = nu1 = None
    if not reasons:
        if not _is_banded(Y2, right=True):
            reasons.append("Y2 not right-justified banded")
        if not _is_banded(Y1, right=False):
            reasons.append("Y1 not top-justified banded")
        mu1, nu1 = Y1[0, 0], Y2[0, b2 - a]
        if mu1 != nu1:
            reasons.append("mu1 != nu1")
        if mu1 == 0:
            reasons.append("mu1 = 0")
    return Lemma1Verdict(True, not reasons, mu1, nu1, tuple(reasons))


# ---------------------------------------------------------------------------
# four-block closure scan
# ---------------------------------------------------------------------------

def _four_block_A(sizes: Sequence[int], lam, alpha) -> Matrix:
    return block_jordan(sizes, [Q(alpha) - k * Q(lam) for k in range(4)])


def sample_reduccion_X(sizes: Sequence[int], rng: random.Random) -> Matrix:
    """1-diagonal block matrix with blocks (i, i+1) random and bottom-left entries 1."""
    part = BlockPartition(sizes)
    off = part.offsets
    entries = {}
    for i in range(3):
        for r in range(sizes[i]):
            for s in range(sizes[i + 1]):
                entries[(off[i] + r, off[i + 1] + s)] = small_rational(rng)
        entries[(off[i] + sizes[i] - 1, off[i + 1])] = ONE
    return Matrix.from_sparse(part.total, part.total, entries)


@dataclass(frozen=True)
class ReduccionResult:
    sizes: tuple
    all_14_blocks_zero: bool
    witness: Matrix | None
    closure_dim: int
    A: Matrix = field(repr=False)
    X: Matrix = field(repr=False)


def reduccion_scan(sizes: Sequence[int], lam, alpha, X: Matrix | None = None,
                   rng: random.Random | None = None) -> ReduccionResult:
    """Lie closure of {A, X} and whether every element has a zero (1,4) block.

    The closure is grown by bracketing each new basis element with the two
    generators, which spans the generated subalgebra.
    """
    sizes = tuple(int(s) for s in sizes)
    if len(sizes) != 4 or min(sizes) < 1:
        raise ValueError("need four positive block sizes")
    if Q(lam) == 0:
        raise ValueError("lambda must be nonzero")
    part = BlockPartition(sizes)
    A = _four_block_A(sizes, lam, alpha)
    if X is None:
        X = sample_reduccion_X(sizes, rng if rng is not None else rng_for(0, "reduccion", sizes))
    _check_X(X, part)
    gens = [A, X]
    ech = Echelon()
    basis: list[Matrix] = []
    queue = []
    for g in gens:
        if ech.add(g.flat()):
            basis.append(g)
            queue.append(g)
    steps = 0
    while queue:
        steps += 1
        if steps > CLOSURE_CAP * len(gens) * part.total ** 2:
            raise RuntimeError("closure failed to stabilize")
        e = queue.pop(0)
        for g in gens:
            br = commutator(g, e)
            if ech.add(br.flat()):
                basis.append(br)
                queue.append(br)
    witness = next((m for m in basis if not block_of(m, part, 1, 4).is_zero()), None)
    return ReduccionResult(sizes, witness is None, witness, len(basis), A, X)


def _check_X(X: Matrix, part: BlockPartition) -> None:
    owner = [b for b, size in enumerate(part) for _ in range(size)]
    if X.shape != (part.total, part.total):
        raise DimensionError("X does not match the block sizes")
    if any(owner[j] - owner[i] != 1 for (i, j) in X.nonzeros()):
        raise HypothesisViolated("X must be 1-diagonal")
    for i in range(1, 4):
        blk = block_of(X, part, i, i + 1)
        if blk[blk.rows - 1, 0] != 1:
            raise HypothesisViolated(f"block ({i},{i + 1}) of X needs bottom-left entry 1")


@dataclass(frozen=True)
class ReduccionOracle:
    m: int
    D: dict
    Z: Matrix
    U: Matrix


def reduccion_oracle(sizes: Sequence[int], lam, alpha, X: Matrix) -> ReduccionOracle:
    """The intermediate elements Z = (ad A - lam)^{m-2}(X) and U = [X, Z].

    D[(i, j)] = (-1)^{d_j - 1} binom(d_i + d_j - 2, d_i - 1) is the only
    nonzero entry (top right) of the blocks of Z that reach the maximum m.
    """
    d = tuple(int(s) for s in sizes)
    A = _four_block_A(d, lam, alpha)
    m = max(d[0] + d[1], d[1] + d[2], d[2] + d[3])
    D = {(i + 1, j + 1): (-1) ** (d[j] - 1) * comb(d[i] + d[j] - 2, d[i] - 1)
         for i in range(4) for j in range(i + 1, 4)}
    Z = ad_shift_power(A, lam, m - 2, X)
    return ReduccionOracle(m, D, Z, commutator(X, Z))
