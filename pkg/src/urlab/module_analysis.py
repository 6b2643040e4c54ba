"""Module-theoretic predicates for matrix representations of g.

Subspaces of F^d are carried as RREF row bases (tuples of coordinate tuples).
Quotients P/S with S inside P are realized on the rows of RREF(P) whose
pivots are not pivots of S, so every computation here is deterministic.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import comb
from typing import Sequence

from .exact_linalg import ONE, ZERO, Echelon, Matrix, render_q
from .lie_core import GAlgebra, derived_ideal
from .rep_builder import Representation, combine
from .sampling import DEFAULT_SEED, rng_for

__all__ = [
    "Filtration", "AnalysisReport", "IsomorphismResult", "IrrationalSpectrum",
    "length_filtration", "socle_series", "is_uniserial", "kernel_and_flags",
    "isomorphism_search", "lambda2_nilpotency_degree", "lambda2_witness",
    "kernel_of_map",
]

ISO_ATTEMPTS = 32
ISO_RANGE = 10


class IrrationalSpectrum(ValueError):
    """A characteristic polynomial does not split over the rationals."""


@dataclass(frozen=True)
class Filtration:
    subspaces: tuple
    layer_dims: tuple

    @property
    def length(self) -> int:
        return len(self.layer_dims)


@dataclass(frozen=True)
class AnalysisReport:
    length: int
    uniserial: bool
    kernel_basis: tuple
    faithful: bool
    relatively_faithful: bool
    socle_layer_dims: tuple
    length_layer_dims: tuple
    kernel_V_dim: int
    kernel_L2_dim: int
    dim_L2: int
    lemma_funk_consistent: bool | None = None
    negative_certified: bool = False

    @property
    def kernel_dim(self) -> int:
        return len(self.kernel_basis)

    def to_json(self) -> dict:
        return {
            "schema": "v1",
            "length": self.length,
            "uniserial": self.uniserial,
            "faithful": self.faithful,
            "relatively_faithful": self.relatively_faithful,
            "kernel_dim": self.kernel_dim,
            "kernel_basis": [[render_q(c) for c in v] for v in self.kernel_basis],
            "socle_layers": list(self.socle_layer_dims),
            "length_layers": list(self.length_layer_dims),
            "kernel_V_dim": self.kernel_V_dim,
            "kernel_L2_dim": self.kernel_L2_dim,
            "negative_certified": self.negative_certified,
        }


@lru_cache(maxsize=64)
def _derived(alg: GAlgebra):
    return derived_ideal(alg)


def _derived_images(rep: Representation) -> list[Matrix]:
    return [combine(rep.images, z) for z in _derived(rep.algebra).first]


# ---------------------------------------------------------------------------
# small subspace helpers
# ---------------------------------------------------------------------------

def _joint_kernel(mats: Sequence[Matrix], dim: int) -> list[tuple]:
    ech = Echelon()
    for m in mats:
        for r in m.sparse_rows():
            if r:
                ech.add(dict(r))
    return ech.nullspace(dim)


def _rref_basis(vectors, dim: int) -> tuple:
    return tuple(Echelon(vectors).dense_rows(dim))


def _annihilator(basis: Sequence[tuple], dim: int) -> Matrix | None:
    """Matrix K with ker K = span(basis); None when the span is everything."""
    rows = Echelon(basis).nullspace(dim)
    if not rows:
        return None
    return Matrix(rows)


def _pivots(basis: Sequence[tuple]) -> list[int]:
    return [next(i for i, v in enumerate(r) if v) for r in basis]


def _restrict(op: Matrix, basis: Sequence[tuple]) -> Matrix:
    """Matrix of op on the invariant span of an RREF basis, in that basis."""
    piv = _pivots(basis)
    cols = []
    for b in basis:
        img = op.apply(b)
        cols.append([img[p] for p in piv])
    return Matrix(zip(*cols))


def _from_coords(coords: Sequence, basis: Sequence[tuple], dim: int) -> tuple:
    out = [ZERO] * dim
    for c, b in zip(coords, basis):
        if c:
            for i, v in enumerate(b):
                if v:
                    out[i] += c * v
    return tuple(out)


# ---------------------------------------------------------------------------
# length filtration
# ---------------------------------------------------------------------------

def length_filtration(rep: Representation) -> Filtration:
    """U_1 = joint kernel of R([g,g]); U_{i+1}/U_i = same on U/U_i."""
    d = rep.dim
    dg = _derived_images(rep)
    subspaces = []
    dims = []
    current: tuple = ()
    while len(current) < d:
        K = _annihilator(current, d) if current else None
        mats = dg if K is None else [K @ z for z in dg]
        nxt = _rref_basis(_joint_kernel(mats, d) if mats else [tuple(Matrix.identity(d).row(i)) for i in range(d)], d)
        if len(nxt) <= len(current):
            raise RuntimeError("annihilator filtration stalled; derived ideal does not act nilpotently")
        dims.append(len(nxt) - len(current))
        subspaces.append(nxt)
        current = nxt
    return Filtration(tuple(subspaces), tuple(dims))


# ---------------------------------------------------------------------------
# socle series
# ---------------------------------------------------------------------------

def _rational_eigenvalues(C: Matrix) -> list:
    """Distinct eigenvalues of C; IrrationalSpectrum if some are not rational."""
    k = C.rows
    rows = C.tolist()
    if all(rows[i][j] == 0 for i in range(k) for j in range(i)) or \
       all(rows[i][j] == 0 for i in range(k) for j in range(i + 1, k)):
        return sorted(set(rows[i][i] for i in range(k)))
    coeffs = _charpoly(C)
    import sympy
    t = sympy.Symbol("t")
    poly = sympy.Poly([sympy.Rational(int(c.numerator), int(c.denominator)) for c in coeffs], t, domain="QQ")
    _, factors = poly.factor_list()
    roots = []
    for f, _mult in factors:
        if f.degree() != 1:
            raise IrrationalSpectrum(f"characteristic polynomial has irreducible factor {f.as_expr()}")
        a1, a0 = f.all_coeffs()
        r = -sympy.Rational(a0) / sympy.Rational(a1)
        roots.append(r)
    from gmpy2 import mpq
    return sorted(set(mpq(int(r.p), int(r.q)) for r in roots))


def _charpoly(C: Matrix) -> list:
    """Coefficients of det(tI - C), leading first (Faddeev-LeVerrier)."""
    n = C.rows
    coeffs = [ONE]
    Mk = Matrix.zeros(n)
    I = Matrix.identity(n)
    for k in range(1, n + 1):
        Mk = C @ Mk + I.scale(coeffs[-1])
        coeffs.append(-(C @ Mk).trace() / k)
    return coeffs


def _joint_eigenspaces(ops: Sequence[Matrix], k: int) -> list[tuple]:
    """Basis of the sum of joint eigenspaces of commuting-mod-kernel operators on F^k."""
    pieces = [tuple(Matrix.identity(k).row(i) for i in range(k))]
    for C in ops:
        new_pieces = []
        for piece in pieces:
            Cp = _restrict(C, piece)
            if _is_scalar(Cp):
                new_pieces.append(piece)
                continue
            for theta in _rational_eigenvalues(Cp):
                shifted = Cp - Matrix.identity(Cp.rows).scale(theta)
                null = Echelon(dict(r) for r in shifted.sparse_rows()).nullspace(Cp.rows)
                vecs = [_from_coords(v, piece, k) for v in null]
                new_pieces.append(_rref_basis(vecs, k))
        pieces = new_pieces
    return [v for piece in pieces for v in piece]


def _is_scalar(C: Matrix) -> bool:
    d = C[0, 0]
    return all((v == d) if i == j else not v for i, r in enumerate(C.tolist()) for j, v in enumerate(r))


def _top_indices(alg: GAlgebra) -> list[int]:
    # basis elements spanning a complement of [g,g]
    piv = set(_pivots(_derived(alg).first))
    return [i for i in range(alg.dim) if i not in piv]


def _next_socle(rep: Representation, current: tuple, dg: Sequence[Matrix], top: Sequence[int]) -> tuple:
    """Preimage of soc(F^d / current).

    Simple modules of a solvable algebra with rational spectra are characters
    killing [g,g].  So soc(M/S) is the sum of the joint eigenspaces of a
    complement of [g,g] acting on P/S, where P/S is the joint kernel of the
    derived ideal on M/S.
    """
    d = rep.dim
    K = _annihilator(current, d) if current else None
    mats = dg if K is None else [K @ z for z in dg]
    pre = _rref_basis(_joint_kernel(mats, d), d)
    sub_piv = set(_pivots(current))
    comp = [b for b, p in zip(pre, _pivots(pre)) if p not in sub_piv]
    if not comp:
        raise RuntimeError("derived ideal has no common null vector on the quotient")
    comp_piv = _pivots(comp)
    ech = Echelon(current)
    ops = []
    for idx in top:
        op = rep.images[idx]
        cols = []
        for b in comp:
            red = ech.reduce(op.apply(b))
            cols.append([red.get(p, ZERO) for p in comp_piv])
        ops.append(Matrix(zip(*cols)))
    coords = _joint_eigenspaces(ops, len(comp))
    lifts = [_from_coords(v, comp, d) for v in coords]
    return _rref_basis(list(current) + lifts, d)


def socle_series(rep: Representation) -> Filtration:
    d = rep.dim
    dg = _derived_images(rep)
    top = _top_indices(rep.algebra)
    current: tuple = ()
    subspaces, dims = [], []
    while len(current) < d:
        nxt = _next_socle(rep, current, dg, top)
        if len(nxt) <= len(current):
            raise RuntimeError("socle series stalled")
        dims.append(len(nxt) - len(current))
        subspaces.append(nxt)
        current = nxt
    return Filtration(tuple(subspaces), tuple(dims))


def is_uniserial(rep: Representation) -> bool:
    """Every socle layer is 1-dimensional (requires rational spectra)."""
    return all(k == 1 for k in socle_series(rep).layer_dims)


# ---------------------------------------------------------------------------
# kernel and faithfulness
# ---------------------------------------------------------------------------

def kernel_of_map(mats: Sequence[Matrix]) -> list[tuple]:
    """Nullspace of c -> sum c_k mats[k]."""
    columns: dict = {}
    for k, m in enumerate(mats):
        for pos, v in m.nonzeros().items():
            columns.setdefault(pos, {})[k] = v
    return Echelon(columns.values()).nullspace(len(mats))


def kernel_and_flags(rep: Representation) -> AnalysisReport:
    alg = rep.algebra
    kernel = tuple(kernel_of_map(rep.images))
    v_idx = list(alg.v_indices())
    w_idx = list(alg.w_indices())
    ker_v = len(kernel_of_map([rep.images[i] for i in v_idx]))
    ker_w = len(kernel_of_map([rep.images[i] for i in w_idx])) if w_idx else 0
    rel = ker_v == 0 and ker_w < len(w_idx)
    filt = length_filtration(rep)
    soc = socle_series(rep)
    funk = None
    if rep.partition is not None and alg.kind == "single":
        part = rep.partition
        predicted = any(part[i] + part[i + 1] == alg.n + 1 for i in range(len(part) - 1))
        funk = predicted == (ker_v == 0)
    return AnalysisReport(
        length=filt.length,
        uniserial=all(k == 1 for k in soc.layer_dims),
        kernel_basis=kernel,
        faithful=not kernel,
        relatively_faithful=rel,
        socle_layer_dims=soc.layer_dims,
        length_layer_dims=filt.layer_dims,
        kernel_V_dim=ker_v,
        kernel_L2_dim=ker_w,
        dim_L2=len(w_idx),
        lemma_funk_consistent=funk,
    )


# ---------------------------------------------------------------------------
# isomorphism search
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IsomorphismResult:
    intertwiner: Matrix | None
    solution_dim: int
    attempts: int
    certified: bool = field(default=False)

    @property
    def isomorphic(self) -> bool:
        return self.intertwiner is not None

    @property
    def negative_certified(self) -> bool:
        return self.intertwiner is None and self.certified


def _intertwiner_space(repA: Representation, repB: Representation, gens: Sequence[int]) -> list[Matrix]:
    d = repA.dim
    ech = Echelon()
    for g in gens:
        RA = repA.images[g].sparse_rows()
        RB = repB.images[g].sparse_rows()
        RA_cols: dict[int, list] = {}
        for k, row in enumerate(RA):
            for j, v in row:
                RA_cols.setdefault(j, []).append((k, v))
        for i in range(d):
            for j in range(d):
                eq: dict[int, object] = {}
                # (T RA)_{ij} = sum_k T_{ik} RA_{kj}
                for k, v in RA_cols.get(j, ()):
                    eq[i * d + k] = eq.get(i * d + k, ZERO) + v
                # (RB T)_{ij} = sum_k RB_{ik} T_{kj}
                for k, v in RB[i]:
                    eq[k * d + j] = eq.get(k * d + j, ZERO) - v
                eq = {c: v for c, v in eq.items() if v}
                if eq:
                    ech.add(eq)
    return [Matrix.from_flat(d, d, v) for v in ech.nullspace(d * d)]


def isomorphism_search(repA: Representation, repB: Representation, seed: int = DEFAULT_SEED) -> IsomorphismResult:
    """Look for an invertible T with T R_A(y) = R_B(y) T for all y.

    The linear system is solved on a generating set of the algebra (enough,
    since both sides are verified homomorphisms) and any hit is re-checked on
    the full basis.  Invertibility is searched by seeded random combinations
    of the solution basis; a negative is certified when the solution space
    has dimension at most 1, because then every solution is a multiple of a
    single matrix.
    """
    if repA.dim != repB.dim or repA.algebra.names != repB.algebra.names:
        return IsomorphismResult(None, 0, 0, certified=True)
    gens = repA.algebra.generators()
    basis = _intertwiner_space(repA, repB, gens)
    dim = len(basis)
    if dim == 0:
        return IsomorphismResult(None, 0, 0, certified=True)
    if dim == 1:
        T = basis[0]
        ok = T.det() != 0
        return IsomorphismResult(_checked(T, repA, repB) if ok else None, 1, 1, certified=True)
    rng = rng_for(seed, repA.fingerprint(), repB.fingerprint())
    for attempt in range(1, ISO_ATTEMPTS + 1):
        coeffs = [rng.randint(-ISO_RANGE, ISO_RANGE) for _ in basis]
        if not any(coeffs):
            continue
        T = combine(basis, coeffs)
        if T.det() != 0:
            return IsomorphismResult(_checked(T, repA, repB), dim, attempt, certified=True)
    return IsomorphismResult(None, dim, ISO_ATTEMPTS, certified=False)


def _checked(T: Matrix, repA: Representation, repB: Representation) -> Matrix:
    for ya, yb in zip(repA.images, repB.images):
        if T @ ya != yb @ T:
            raise RuntimeError("intertwiner fails on a non-generator; generators were insufficient")
    return T


# ---------------------------------------------------------------------------
# nilpotency of ad x - 2 lam on Λ²V
# ---------------------------------------------------------------------------

def _ad_x_shift(alg: GAlgebra, vec: dict, shift) -> dict:
    out: dict = {}
    for k, c in vec.items():
        for j, s in alg.bracket_basis(0, k).items():
            out[j] = out.get(j, ZERO) + c * s
        out[k] = out.get(k, ZERO) - shift * c
    return {k: v for k, v in out.items() if v}


def lambda2_witness(alg: GAlgebra) -> tuple[dict, int]:
    """((ad x - 2 lam)^{2n-4}(v_0∧v_1) as {index: coeff}, expected coefficient on v_{n-1}∧v_{n-2})."""
    n = alg.n
    vec = {alg.w_index(0, 1)[0]: ONE}
    for _ in range(2 * n - 4):
        vec = _ad_x_shift(alg, vec, 2 * alg.lam)
    return vec, comb(2 * n - 4, n - 1) - comb(2 * n - 4, n - 2)


def lambda2_nilpotency_degree(alg: GAlgebra) -> int:
    """Smallest m with (ad x - 2 lam)^m = 0 on Λ²V; the binomial witness is checked too."""
    if alg.kind != "single":
        raise ValueError("defined for the single Jordan block algebra")
    n = alg.n
    if n < 2:
        raise ValueError("Λ²V is zero for n < 2")
    vecs = [{i: ONE} for i in alg.w_indices()]
    m = 0
    while any(vecs):
        vecs = [_ad_x_shift(alg, v, 2 * alg.lam) for v in vecs]
        m += 1
    got, coeff = lambda2_witness(alg)
    idx, sign = alg.w_index(n - 1, n - 2)
    if coeff == 0 or got != {idx: sign * coeff}:
        raise RuntimeError(f"binomial witness mismatch: got {got}, expected {coeff} v_{n-1}∧v_{n-2}")
    return m
