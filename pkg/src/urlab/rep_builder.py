"""Explicit representations of g = <x> ⋉ L(V) and their construction checks.

The central family is ``R_{a,b,c,M,N,alpha}`` on F^(a+b+c)::

    R(x)   = J^a(alpha) ⊕ J^b(alpha - lam) ⊕ J^c(alpha - 2 lam)
    R(v_k) = (ad R(x) - lam)^k [[0, M, 0], [0, 0, N], [0, 0, 0]]
    R(v∧w) = [R(v), R(w)]

Every builder returns a ``Representation`` that has already been checked
bracket by bracket against the structure constants of its algebra.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field, replace
from typing import Mapping, Sequence

from .exact_linalg import (
    ONE, ZERO, BlockPartition, Matrix, Q, ad_shift_power, block_of, commutator,
    commutator_entries,
    is_i_diagonal, jordan_block, render_q,
)
from .lie_core import (
    Diagonal, GAlgebra, HypothesisViolated, TwoBlocks, algebra_from_json, build_g,
    build_g_variants, extend_from_V,
)

__all__ = [
    "RepParams", "Representation", "ParamViolation", "RepresentationCheckFailed",
    "NotNormalizable", "NotStandard", "ExtremeDegeneracy", "build_R",
    "verify_representation", "normalize", "is_extreme", "dualize", "is_standard",
    "standard_data", "params_from_standard", "STwoBlocks", "Salpha", "DiagonalT",
    "build_S_family", "build_sl2_tensor", "conjugate", "rep_to_json", "rep_from_json",
    "toeplitz_upper",
]


class ParamViolation(ValueError):
    pass


class RepresentationCheckFailed(RuntimeError):
    pass


class NotNormalizable(ValueError):
    pass


class NotStandard(ValueError):
    pass


class ExtremeDegeneracy(ValueError):
    pass


@dataclass(frozen=True)
class RepParams:
    n: int
    lam: object
    alpha: object
    a: int
    b: int
    c: int
    M: Matrix
    N: Matrix

    def __post_init__(self):
        object.__setattr__(self, "lam", Q(self.lam))
        object.__setattr__(self, "alpha", Q(self.alpha))
        if not isinstance(self.M, Matrix):
            object.__setattr__(self, "M", Matrix(self.M))
        if not isinstance(self.N, Matrix):
            object.__setattr__(self, "N", Matrix(self.N))

    @property
    def abc(self) -> tuple[int, int, int]:
        return self.a, self.b, self.c

    @property
    def d(self) -> int:
        return self.a + self.b + self.c

    def violations(self) -> list[str]:
        out = []
        a, b, c, n = self.a, self.b, self.c, self.n
        if min(a, b, c) < 1:
            out.append("a, b, c must be positive")
            return out
        if not ((a + b == n + 1 and c <= a) or (c + b == n + 1 and a <= c)):
            out.append(f"(a,b,c)=({a},{b},{c}) violates the size condition for n={n}")
        if self.M.shape != (a, b):
            out.append(f"M must be {a}x{b}, got {self.M.shape}")
        elif self.M[a - 1, 0] == 0:
            out.append("M_{a,1} must be nonzero")
        if self.N.shape != (b, c):
            out.append(f"N must be {b}x{c}, got {self.N.shape}")
        elif self.N[b - 1, 0] == 0:
            out.append("N_{b,1} must be nonzero")
        return out

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "lambda": render_q(self.lam),
            "alpha": render_q(self.alpha),
            "abc": [self.a, self.b, self.c],
            "M": _mat_json(self.M),
            "N": _mat_json(self.N),
        }

    @classmethod
    def from_json(cls, payload: Mapping) -> "RepParams":
        a, b, c = (int(v) for v in payload["abc"])
        return cls(int(payload["n"]), Q(payload["lambda"]), Q(payload["alpha"]), a, b, c,
                   Matrix(payload["M"]), Matrix(payload["N"]))


@dataclass(frozen=True, eq=False)
class Representation:
    """Images of the basis of ``algebra`` in gl(dim), indexed like ``algebra.names``."""

    algebra: GAlgebra
    images: tuple
    partition: BlockPartition | None = None
    params: RepParams | None = None
    verified: bool = False
    label: str = ""
    _fp: list = field(default_factory=list, repr=False)

    @property
    def dim(self) -> int:
        return self.images[0].rows

    def image(self, key) -> Matrix:
        if isinstance(key, str):
            key = self.algebra.index(key)
        return self.images[key]

    def of(self, coeffs: Sequence) -> Matrix:
        """Image of an algebra element given by coordinates."""
        return combine(self.images, coeffs)

    def fingerprint(self) -> str:
        if not self._fp:
            h = hashlib.sha256()
            h.update(repr(self.algebra.names).encode())
            for m in self.images:
                h.update(json.dumps(_mat_json(m)).encode())
            self._fp.append(h.hexdigest())
        return self._fp[0]


def combine(images: Sequence[Matrix], coeffs: Sequence) -> Matrix:
    return Matrix.from_sparse(images[0].rows, images[0].cols, _combine_entries(images, enumerate(coeffs)))


def _combine_entries(images: Sequence[Matrix], indexed_coeffs) -> dict:
    acc: dict = {}
    for k, c in indexed_coeffs:
        if not c:
            continue
        for i, srow in enumerate(images[k].sparse_rows()):
            for j, v in srow:
                acc[(i, j)] = acc.get((i, j), ZERO) + c * v
    return {k: v for k, v in acc.items() if v}


def _mat_json(m: Matrix) -> list:
    return [[render_q(v) for v in row] for row in m.tolist()]


def verify_representation(alg: GAlgebra, images: Sequence[Matrix]):
    """Check R([y,z]) == [R(y), R(z)] on every basis pair.

    Returns ``(True, None)`` or ``(False, (name_y, name_z))`` for the first
    failing pair in basis order.
    """
    images = list(images)
    if len(images) != alg.dim:
        raise ValueError(f"expected {alg.dim} images, got {len(images)}")
    size = images[0].rows
    if any(m.shape != (size, size) for m in images):
        raise ValueError("images must be square of one size")
    for a in range(alg.dim):
        for b in range(a + 1, alg.dim):
            lhs = _combine_entries(images, alg.bracket_basis(a, b).items())
            if commutator_entries(images[a], images[b]) != lhs:
                return False, (alg.names[a], alg.names[b])
    return True, None


def _finish(alg: GAlgebra, x_img: Matrix, v_imgs: Mapping[int, Matrix], **kw) -> Representation:
    try:
        lv = extend_from_V(alg, v_imgs)
    except HypothesisViolated as exc:
        raise RepresentationCheckFailed(str(exc)) from exc
    images = [x_img] + [lv[i] for i in range(1, alg.dim)]
    ok, witness = verify_representation(alg, images)
    if not ok:
        raise RepresentationCheckFailed(f"bracket {witness} not preserved")
    return Representation(alg, tuple(images), verified=True, **kw)


def _superdiag(sizes: Sequence[int], blocks: Sequence[Matrix]) -> Matrix:
    part = BlockPartition(sizes)
    out = Matrix.zeros(part.total)
    offs = part.offsets
    for i, blk in enumerate(blocks):
        if blk is not None:
            out = out.with_block(offs[i], offs[i + 1], blk)
    return out


def block_jordan(sizes: Sequence[int], eigenvalues: Sequence) -> Matrix:
    return Matrix.block_diag(*(jordan_block(s, e) for s, e in zip(sizes, eigenvalues)))


def build_R(params: RepParams) -> Representation:
    """The representation R_{a,b,c,M,N,alpha} of g(n, lam)."""
    bad = params.violations()
    if bad:
        raise ParamViolation("; ".join(bad))
    alg = build_g(params.n, params.lam)
    return _build_standard(alg, (params.a, params.b, params.c), params.alpha,
                           [params.M, params.N], params=params)


def _build_standard(alg: GAlgebra, sizes, alpha, blocks, params=None, label="") -> Representation:
    lam = alg.lam
    sizes = BlockPartition(sizes)
    A = block_jordan(sizes, [alpha - i * lam for i in range(len(sizes))])
    X = _superdiag(sizes, blocks)
    v_imgs = {}
    for k in range(alg.n):
        v_imgs[k] = X
        X = ad_shift_power(A, lam, 1, X)
    return _finish(alg, A, v_imgs, partition=sizes, params=params, label=label)


def build_standard(n: int, lam, alpha, sizes: Sequence[int], blocks: Sequence[Matrix]) -> Representation:
    """Standard representation with arbitrary block count (superdiagonal blocks of R(v_0))."""
    sizes = BlockPartition(sizes)
    if len(blocks) != len(sizes) - 1:
        raise ParamViolation("need one superdiagonal block per adjacent pair")
    for i, blk in enumerate(blocks):
        if blk.shape != (sizes[i], sizes[i + 1]):
            raise ParamViolation(f"block {i + 1} must be {sizes[i]}x{sizes[i + 1]}")
    return _build_standard(build_g(n, lam), sizes, Q(alpha), list(blocks))


def conjugate(rep: Representation, T: Matrix, T_inv: Matrix | None = None, label: str = "") -> Representation:
    """y -> T R(y) T^{-1}; partition and params are dropped unless T is trusted by the caller."""
    T_inv = T.inverse() if T_inv is None else T_inv
    imgs = tuple(T @ m @ T_inv for m in rep.images)
    return Representation(rep.algebra, imgs, verified=rep.verified, label=label or rep.label)


# ---------------------------------------------------------------------------
# Standard shape
# ---------------------------------------------------------------------------

def is_standard(rep: Representation, sizes: Sequence[int], alpha) -> bool:
    """Shape test for standard representations of the single-block algebra."""
    try:
        _check_standard(rep, BlockPartition(sizes), Q(alpha))
    except NotStandard:
        return False
    return True


def _check_standard(rep: Representation, part: BlockPartition, alpha) -> None:
    alg = rep.algebra
    if alg.kind != "single":
        raise NotStandard("standard shape is defined for the single-block algebra")
    ell = len(part)
    if ell < 3:
        raise NotStandard("standard shape needs at least three blocks")
    if part.total != rep.dim:
        raise NotStandard("partition does not sum to the dimension")
    n = alg.n
    if any(part[i] + part[i + 1] > n + 1 for i in range(ell - 1)):
        raise NotStandard("adjacent block sizes exceed n + 1")
    A = block_jordan(part, [alpha - i * alg.lam for i in range(ell)])
    if rep.image(0) != A:
        raise NotStandard("R(x) is not the block Jordan matrix")
    for k in alg.v_indices():
        if not is_i_diagonal(rep.image(k), part, 1):
            raise NotStandard(f"R({alg.names[k]}) is not 1-diagonal")
    v0 = rep.image(alg.v_index(0))
    for i in range(1, ell):
        blk = block_of(v0, part, i, i + 1)
        if blk[blk.rows - 1, 0] == 0:
            raise NotStandard(f"block ({i},{i + 1}) of R(v0) has zero bottom-left entry")


def standard_data(rep: Representation) -> tuple[BlockPartition, object, list[Matrix]]:
    """(partition, alpha, superdiagonal blocks of R(v_0)) of a standard representation."""
    if rep.partition is None:
        raise NotStandard("representation carries no block partition")
    part = rep.partition
    alpha = rep.image(0)[0, 0]
    _check_standard(rep, part, alpha)
    v0 = rep.image(rep.algebra.v_index(0))
    blocks = [block_of(v0, part, i, i + 1) for i in range(1, len(part))]
    return part, alpha, blocks


def params_from_standard(rep: Representation) -> RepParams:
    part, alpha, blocks = standard_data(rep)
    if len(part) != 3:
        raise NotStandard("R_{a,b,c,M,N,alpha} has exactly three blocks")
    a, b, c = part
    return RepParams(rep.algebra.n, rep.algebra.lam, alpha, a, b, c, blocks[0], blocks[1])


# ---------------------------------------------------------------------------
# Normalization
# ---------------------------------------------------------------------------

def toeplitz_upper(coeffs: Sequence) -> Matrix:
    """sum_k coeffs[k] * J^p(0)^k with p = len(coeffs)."""
    p = len(coeffs)
    return Matrix.from_sparse(p, p, {(i, i + k): coeffs[k] for k in range(p) for i in range(p - k)})


def normalize(rep: Representation) -> tuple[Representation, Matrix]:
    """Conjugate a standard representation into normalized form.

    The conjugator is block diagonal, each block a polynomial in the nilpotent
    Jordan part with nonzero constant term, so it commutes with R(x).  Its
    (1,1) entry is fixed to 1, which makes it unique.
    """
    part, alpha, blocks = standard_data(rep)
    first = blocks[0]
    a = part[0]
    m_col = first.column(0)
    pivot = m_col[a - 1]
    if pivot == 0:
        raise NotNormalizable("first superdiagonal block has zero corner")
    # T_1 m_col = t_0 * e_last; solve upward for the Toeplitz coefficients
    t = [ONE]
    for s in range(1, a):
        acc = sum((t[k] * m_col[a - 1 - s + k] for k in range(s)), ZERO)
        t.append(-acc / pivot)
    coeff_lists = [t]
    for i, blk in enumerate(blocks):
        tau = coeff_lists[-1][0]
        nxt = [tau * v for v in blk.row(blk.rows - 1)]
        if nxt[0] == 0:
            raise NotNormalizable(f"block {i + 1} has zero bottom-left entry")
        coeff_lists.append(nxt)
    T_blocks = [toeplitz_upper(cs) for cs in coeff_lists]
    T = Matrix.block_diag(*T_blocks)
    T_inv = Matrix.block_diag(*(b.inverse() for b in T_blocks))
    imgs = tuple(T @ m @ T_inv for m in rep.images)
    v0 = imgs[rep.algebra.v_index(0)]
    new_blocks = [block_of(v0, part, i, i + 1) for i in range(1, len(part))]
    new_params = None
    if len(part) == 3:
        new_params = RepParams(rep.algebra.n, rep.algebra.lam, alpha, part[0], part[1], part[2],
                               new_blocks[0], new_blocks[1])
    out = Representation(rep.algebra, imgs, partition=part, params=new_params,
                         verified=rep.verified, label=rep.label)
    if not is_normalized_blocks(new_blocks):
        raise NotNormalizable("conjugation did not reach the normal form")
    return out, T


def is_normalized_blocks(blocks: Sequence[Matrix]) -> bool:
    """Last row of every block is e_1 and the first column of the first block is e_last."""
    for blk in blocks:
        last = blk.row(blk.rows - 1)
        if last[0] != 1 or any(last[1:]):
            return False
    col = blocks[0].column(0)
    return col[-1] == 1 and not any(col[:-1])


def is_normalized(params: RepParams) -> bool:
    return is_normalized_blocks([params.M, params.N])


def is_extreme(params: RepParams) -> bool:
    """n odd, a = c = 1 and N_{i,1} = 0 for every even (1-based) i."""
    if params.n % 2 == 0 or params.a != 1 or params.c != 1:
        return False
    col = params.N.column(0)
    return all(col[i - 1] == 0 for i in range(2, params.b + 1, 2))


# ---------------------------------------------------------------------------
# Duals
# ---------------------------------------------------------------------------

def dualize(rep: Representation) -> Representation:
    """Dual of a standard representation, conjugated back into standard shape.

    y -> S P (-R(y)^T) P S with P the anti-diagonal permutation and S the
    alternating sign matrix diag(1, -1, 1, ...); S restores the unit
    superdiagonal of the Jordan blocks that the transpose-and-reverse turns
    into -1 entries.
    """
    part, alpha, _ = standard_data(rep)
    d = rep.dim
    ell = len(part)

    def flip(m: Matrix) -> Matrix:
        return Matrix.from_sparse(d, d, {(d - 1 - j, d - 1 - i): (v if (i + j) % 2 else -v)
                                         for (i, j), v in m.nonzeros().items()})

    imgs = tuple(flip(m) for m in rep.images)
    new_part = part.reversed()
    new_alpha = (ell - 1) * rep.algebra.lam - alpha
    out = Representation(rep.algebra, imgs, partition=new_part, verified=rep.verified,
                         label=f"dual({rep.label})" if rep.label else "dual")
    _check_standard(out, new_part, new_alpha)
    if ell == 3:
        out = replace(out, params=params_from_standard(out), _fp=[])
    return out


# ---------------------------------------------------------------------------
# Further families: two Jordan blocks, the 3x3 S_alpha, and diagonal x
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class STwoBlocks:
    n: int
    m: int
    lam: object
    mu: object
    alpha: object
    a: int
    b: int
    c: int
    M: Matrix
    N: Matrix


@dataclass(frozen=True)
class Salpha:
    lam: object
    mu: object
    alpha: object


@dataclass(frozen=True)
class DiagonalT:
    exponents: tuple
    lam: object
    alpha: object
    beta: object
    gamma: object


def build_S_family(spec) -> Representation:
    if isinstance(spec, Salpha):
        return build_S_family(STwoBlocks(1, 1, spec.lam, spec.mu, spec.alpha, 1, 1, 1,
                                         Matrix([[1]]), Matrix([[1]])))
    if isinstance(spec, STwoBlocks):
        return _build_two_blocks(spec)
    if isinstance(spec, DiagonalT):
        return _build_diagonal_T(spec)
    raise TypeError(f"unknown family spec {spec!r}")


def _build_two_blocks(spec: STwoBlocks) -> Representation:
    a, b, c = spec.a, spec.b, spec.c
    M = spec.M if isinstance(spec.M, Matrix) else Matrix(spec.M)
    N = spec.N if isinstance(spec.N, Matrix) else Matrix(spec.N)
    if a + b != spec.n + 1 or b + c != spec.m + 1:
        raise ParamViolation("two-block family needs a+b = n+1 and b+c = m+1")
    if M.shape != (a, b) or N.shape != (b, c):
        raise ParamViolation("M must be a x b and N must be b x c")
    if M[a - 1, 0] == 0 or N[b - 1, 0] == 0:
        raise ParamViolation("corner entries M_{a,1}, N_{b,1} must be nonzero")
    lam, mu, alpha = Q(spec.lam), Q(spec.mu), Q(spec.alpha)
    alg = build_g_variants(TwoBlocks(spec.n, spec.m, lam, mu))
    sizes = (a, b, c)
    A = block_jordan(sizes, [alpha, alpha - lam, alpha - lam - mu])
    XM = _superdiag(sizes, [M, None])
    XN = _superdiag(sizes, [None, N])
    v_imgs = {}
    for k in range(spec.n):
        v_imgs[k] = XM
        XM = ad_shift_power(A, lam, 1, XM)
    for k in range(spec.m):
        # the w-chain shifts by its own eigenvalue mu
        v_imgs[spec.n + k] = XN
        XN = ad_shift_power(A, mu, 1, XN)
    return _finish(alg, A, v_imgs, partition=BlockPartition(sizes), label="S")


def _build_diagonal_T(spec: DiagonalT) -> Representation:
    exps = tuple(int(e) for e in spec.exponents)
    if len(exps) < 2:
        raise ParamViolation("diagonal family needs n > 1")
    beta, gamma = Q(spec.beta), Q(spec.gamma)
    if beta == gamma:
        raise ExtremeDegeneracy("beta == gamma puts all of Λ²V in the kernel")
    lam, alpha = Q(spec.lam), Q(spec.alpha)
    alg = build_g_variants(Diagonal(exps, lam))
    p = exps[-1] + 2
    x_img = Matrix.from_sparse(p, p, {(j, j): alpha - j * lam for j in range(p)})
    J = jordan_block(p, 0)
    v_imgs = {k: _mat_power(J, e) for k, e in enumerate(exps[:-1])}
    v_imgs[len(exps) - 1] = Matrix.from_sparse(p, p, {(0, p - 2): beta, (1, p - 1): gamma})
    return _finish(alg, x_img, v_imgs, label="T")


def _mat_power(m: Matrix, k: int) -> Matrix:
    out = Matrix.identity(m.rows)
    for _ in range(k):
        out = out @ m
    return out


# ---------------------------------------------------------------------------
# sl(2) ⊗ F[t]/(t^3)
# ---------------------------------------------------------------------------

_E = Matrix([[0, 1], [0, 0]])
_F = Matrix([[0, 0], [1, 0]])


def _current_bracket(u: dict, w: dict, depth: int) -> dict:
    """Bracket in sl(2) ⊗ F[t]/(t^depth); elements are {power of t: 2x2 matrix}."""
    out: dict[int, Matrix] = {}
    for p, X in u.items():
        for q, Y in w.items():
            if p + q >= depth:
                continue
            c = commutator(X, Y)
            out[p + q] = out[p + q] + c if p + q in out else c
    return {k: v for k, v in out.items() if not v.is_zero()}


def build_sl2_tensor() -> Representation:
    """Restriction of (weight-1 irreducible) ⊗ (regular rep of F[t]/(t^3)) to <E⊗1, F⊗t>.

    The subalgebra is identified with g(n=3, lam=0) through x -> E⊗1 and
    v_0 -> F⊗t; the remaining basis elements follow from the relations.
    Basis of the module: weight vectors ⊗ (1, t, t^2), lexicographic.
    """
    depth = 3
    alg = build_g(3, 0)
    x_el = {0: _E}
    v_els = [{1: _F}]
    for _ in range(alg.n - 1):
        v_els.append(_current_bracket(x_el, v_els[-1], depth))
    mult_t = jordan_block(depth, 0, "lower")

    def act(el: dict) -> Matrix:
        out = Matrix.zeros(2 * depth)
        for p, X in el.items():
            out = out + Matrix.kron(X, _mat_power(mult_t, p))
        return out

    images = [act(x_el)] + [act(v) for v in v_els]
    for i, j in alg.wedges:
        images.append(act(_current_bracket(v_els[i], v_els[j], depth)))
    ok, witness = verify_representation(alg, images)
    if not ok:
        raise RepresentationCheckFailed(f"sl2 tensor restriction fails on {witness}")
    return Representation(alg, tuple(images), verified=True, label="sl2⊗F[t]/(t^3)")


# ---------------------------------------------------------------------------
# JSON
# ---------------------------------------------------------------------------

def rep_to_json(rep: Representation) -> dict:
    out = {
        "schema": "v1",
        "algebra": rep.algebra.to_json(),
        "images": {name: _mat_json(m) for name, m in zip(rep.algebra.names, rep.images)},
        "verified": bool(rep.verified),
    }
    if rep.params is not None:
        out["params"] = rep.params.to_json()
    if rep.partition is not None:
        out["partition"] = list(rep.partition)
    return out


def rep_from_json(payload: Mapping) -> Representation:
    """Parse a rep file; params (if present) are rebuilt and must match any given images."""
    if "params" in payload:
        rep = build_R(RepParams.from_json(payload["params"]))
        given = payload.get("images")
        if given:
            for name, m in given.items():
                if rep.image(name) != Matrix(m):
                    raise RepresentationCheckFailed(f"stored image of {name} disagrees with params")
        return rep
    alg = algebra_from_json(payload["algebra"])
    imgs = payload["images"]
    missing = [nm for nm in alg.names if nm not in imgs]
    if missing:
        raise ValueError(f"images missing for {missing}")
    images = tuple(Matrix(imgs[nm]) for nm in alg.names)
    ok, witness = verify_representation(alg, images)
    part = BlockPartition(payload["partition"]) if payload.get("partition") else None
    return Representation(alg, images, partition=part, verified=ok,
                          label="" if ok else f"fails on {witness}")
