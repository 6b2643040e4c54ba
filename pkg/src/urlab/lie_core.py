"""Structure constants for g = <x> ⋉ L(V), with L(V) = V ⊕ Λ²V free 2-step nilpotent.

An algebra is fixed by the matrix of ``x`` acting on a basis of V.  The basis
of g is ordered ``x``, then the V basis, then the wedges ``V[i]^V[j]`` with
``i < j`` in lexicographic order.  Only wedges with ``i < j`` are stored; the
sign of ``v_j ∧ v_i`` is resolved at lookup.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Mapping, Sequence

from .exact_linalg import ONE, ZERO, Echelon, Matrix, Q, commutator, render_q

__all__ = [
    "GAlgebra", "build_g", "build_g_variants", "algebra_from_json", "bracket",
    "derived_ideal", "DerivedSeries", "extend_from_V", "HypothesisViolated",
    "TwoBlocks", "Diagonal", "Single",
]


class HypothesisViolated(ValueError):
    """A construction hypothesis fails; ``witness`` names the offending data."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


@dataclass(frozen=True)
class Single:
    n: int
    lam: object


@dataclass(frozen=True)
class TwoBlocks:
    n: int
    m: int
    lam: object
    mu: object


@dataclass(frozen=True)
class Diagonal:
    exponents: tuple
    lam: object


@dataclass(frozen=True, eq=False)
class GAlgebra:
    """Immutable semidirect product <x> ⋉ L(V).

    ``x_on_V`` holds the action of x on V in column convention:
    ``[x, v_k] = sum_j x_on_V[j, k] v_j``.
    """

    kind: str
    v_names: tuple
    x_on_V: Matrix
    lam: object
    mu: object = None
    exponents: tuple = ()
    names: tuple = field(init=False)
    wedges: tuple = field(init=False)
    table: dict = field(init=False, repr=False)

    def __post_init__(self):
        nv = len(self.v_names)
        wedges = tuple(combinations(range(nv), 2))
        names = ("x",) + tuple(self.v_names) + tuple(f"{self.v_names[i]}^{self.v_names[j]}" for i, j in wedges)
        object.__setattr__(self, "wedges", wedges)
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "table", self._build_table())

    # basis bookkeeping -------------------------------------------------------

    @property
    def n(self) -> int:
        """Dimension of V."""
        return len(self.v_names)

    @property
    def dim(self) -> int:
        return 1 + self.n + self.n * (self.n - 1) // 2

    @property
    def x_index(self) -> int:
        return 0

    def v_index(self, k: int) -> int:
        return 1 + k

    def w_index(self, i: int, j: int) -> tuple[int, int]:
        """(basis index, sign) of v_i ∧ v_j; index None when i == j."""
        if i == j:
            return None, 0
        sign = 1
        if i > j:
            i, j, sign = j, i, -1
        nv = self.n
        # position of (i, j) in lexicographic combinations
        pos = i * nv - i * (i + 1) // 2 + (j - i - 1)
        return 1 + nv + pos, sign

    def v_indices(self) -> range:
        return range(1, 1 + self.n)

    def w_indices(self) -> range:
        return range(1 + self.n, self.dim)

    def index(self, name: str) -> int:
        return self.names.index(name)

    def basis_vector(self, idx: int) -> tuple:
        e = [ZERO] * self.dim
        e[idx] = ONE
        return tuple(e)

    def element(self, coeffs: Mapping[str, object]) -> tuple:
        """Coordinate vector from ``{name: coefficient}``."""
        e = [ZERO] * self.dim
        for name, c in coeffs.items():
            e[self.index(name)] += Q(c)
        return tuple(e)

    def generators(self) -> list[int]:
        """Basis indices generating g as a Lie algebra."""
        if self.kind == "single":
            return [0, self.v_index(0)]
        if self.kind == "two_blocks":
            return [0, self.v_index(0), self.v_index(self.n_first)]
        return [0] + list(self.v_indices())

    @property
    def n_first(self) -> int:
        """Size of the first Jordan block for two-block algebras."""
        return sum(1 for nm in self.v_names if nm.startswith("v"))

    # structure constants -----------------------------------------------------

    def _wedge(self, a: dict, b: dict) -> dict:
        """a ∧ b for V-vectors given as {k: coeff}; result keyed by basis index."""
        out: dict[int, object] = {}
        for i, x in a.items():
            for j, y in b.items():
                idx, sign = self.w_index(i, j)
                if idx is None:
                    continue
                out[idx] = out.get(idx, ZERO) + sign * x * y
        return {k: v for k, v in out.items() if v}

    def _x_v(self, k: int) -> dict:
        col = self.x_on_V.column(k)
        return {j: c for j, c in enumerate(col) if c}

    def _build_table(self) -> dict:
        nv = self.n
        table: dict[tuple[int, int], dict] = {}
        for k in range(nv):
            img = {self.v_index(j): c for j, c in self._x_v(k).items()}
            if img:
                table[(0, self.v_index(k))] = img
        for (i, j) in self.wedges:
            widx, _ = self.w_index(i, j)
            table[(self.v_index(i), self.v_index(j))] = {widx: ONE}
            xw = self._wedge(self._x_v(i), {j: ONE})
            for k, c in self._wedge({i: ONE}, self._x_v(j)).items():
                xw[k] = xw.get(k, ZERO) + c
            xw = {k: c for k, c in xw.items() if c}
            if xw:
                table[(0, widx)] = xw
        return table

    def bracket_basis(self, a: int, b: int) -> dict:
        """[e_a, e_b] as a sparse {index: coeff} dict."""
        if a == b:
            return {}
        if a < b:
            return self.table.get((a, b), {})
        return {k: -c for k, c in self.table.get((b, a), {}).items()}

    def to_json(self) -> dict:
        out = {"schema": "v1", "kind": self.kind, "lambda": render_q(self.lam)}
        if self.kind == "single":
            out["n"] = self.n
        elif self.kind == "two_blocks":
            out.update(n=self.n_first, m=self.n - self.n_first, mu=render_q(self.mu))
        else:
            out["exponents"] = list(self.exponents)
        return out


def _lower_jordan_action(n: int, lam) -> Matrix:
    # x v_k = lam v_k + v_{k+1}
    entries = {(k, k): lam for k in range(n)}
    entries.update({(k + 1, k): ONE for k in range(n - 1)})
    return Matrix.from_sparse(n, n, entries)


def build_g(n: int, lam) -> GAlgebra:
    """g with x acting on V = span(v_0..v_{n-1}) by the lower Jordan block J_n(lam)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return _build_single(n, Q(lam))


@lru_cache(maxsize=128)
def _build_single(n: int, lam) -> GAlgebra:
    return GAlgebra("single", tuple(f"v{k}" for k in range(n)), _lower_jordan_action(n, lam), lam)


def build_g_variants(spec) -> GAlgebra:
    """Two-Jordan-block or diagonal variants of g (or a plain single block)."""
    if isinstance(spec, Single):
        return build_g(spec.n, spec.lam)
    if isinstance(spec, TwoBlocks):
        if spec.n < 1 or spec.m < 1:
            raise ValueError("block sizes must be >= 1")
        lam, mu = Q(spec.lam), Q(spec.mu)
        x = Matrix.block_diag(_lower_jordan_action(spec.n, lam), _lower_jordan_action(spec.m, mu))
        names = tuple(f"v{k}" for k in range(spec.n)) + tuple(f"w{k}" for k in range(spec.m))
        return GAlgebra("two_blocks", names, x, lam, mu=mu)
    if isinstance(spec, Diagonal):
        exps = tuple(int(e) for e in spec.exponents)
        if not exps or exps[0] != 1:
            raise ValueError("exponents must start at 1")
        if any(b <= a for a, b in zip(exps, exps[1:])):
            raise ValueError("exponents must be strictly increasing")
        lam = Q(spec.lam)
        x = Matrix.from_sparse(len(exps), len(exps), {(k, k): e * lam for k, e in enumerate(exps)})
        names = tuple(f"v{k + 1}" for k in range(len(exps)))
        return GAlgebra("diagonal", names, x, lam, exponents=exps)
    raise TypeError(f"unknown algebra spec {spec!r}")


def algebra_from_json(payload: Mapping) -> GAlgebra:
    kind = payload.get("kind", "single")
    lam = Q(payload["lambda"])
    if kind == "single":
        return build_g(int(payload["n"]), lam)
    if kind == "two_blocks":
        return build_g_variants(TwoBlocks(int(payload["n"]), int(payload["m"]), lam, Q(payload["mu"])))
    if kind == "diagonal":
        return build_g_variants(Diagonal(tuple(payload["exponents"]), lam))
    raise ValueError(f"unknown algebra kind {kind!r}")


def bracket(alg: GAlgebra, a: Sequence, b: Sequence) -> tuple:
    """Bilinear extension of the structure table to coordinate vectors."""
    if len(a) != alg.dim or len(b) != alg.dim:
        raise ValueError("element dimension does not match the algebra")
    out = [ZERO] * alg.dim
    nz_a = [(i, c) for i, c in enumerate(a) if c]
    nz_b = [(j, c) for j, c in enumerate(b) if c]
    for i, ca in nz_a:
        for j, cb in nz_b:
            for k, s in alg.bracket_basis(i, j).items():
                out[k] += ca * cb * s
    return tuple(out)


@dataclass(frozen=True)
class DerivedSeries:
    """RREF bases of [g,g] and [[g,g],[g,g]] obtained from spans of brackets."""

    first: tuple
    second: tuple
    formula_asserted: bool

    @property
    def dims(self) -> tuple[int, int]:
        return len(self.first), len(self.second)


def derived_ideal(alg: GAlgebra) -> DerivedSeries:
    """Span all pairwise brackets of a basis, then of the resulting basis.

    The formula [g,g] = V ⊕ Λ²V only holds for invertible x on V; for other
    inputs the computed spans are returned with ``formula_asserted`` False.
    """
    ech = Echelon()
    for a in range(alg.dim):
        for b in range(a + 1, alg.dim):
            br = alg.bracket_basis(a, b)
            if br:
                ech.add(br)
    first = tuple(ech.dense_rows(alg.dim))
    ech2 = Echelon()
    for i, u in enumerate(first):
        for w in first[i + 1:]:
            br = bracket(alg, u, w)
            if any(br):
                ech2.add(br)
    second = tuple(ech2.dense_rows(alg.dim))
    invertible = alg.x_on_V.det() != 0
    return DerivedSeries(first, second, formula_asserted=invertible)


def extend_from_V(alg: GAlgebra, images: Mapping[int, Matrix]) -> dict[int, Matrix]:
    """Extend a linear map on V to a Lie homomorphism on L(V).

    ``images`` maps V positions 0..n-1 to square matrices.  The hypothesis
    [Ω(V), [Ω(V), Ω(V)]] = 0 is checked on all basis triples first.
    Returns a dict keyed by algebra basis index covering V and Λ²V.
    """
    nv = alg.n
    if set(images) != set(range(nv)):
        raise ValueError("images must be given for every V basis vector")
    mats = [images[k] for k in range(nv)]
    size = mats[0].rows
    if any(m.shape != (size, size) for m in mats):
        raise ValueError("images must be square of equal size")
    wedge_imgs = {}
    for i, j in alg.wedges:
        wedge_imgs[(i, j)] = commutator(mats[i], mats[j])
    for (i, j), w in wedge_imgs.items():
        if w.is_zero():
            continue
        for a in range(nv):
            if not commutator(mats[a], w).is_zero():
                raise HypothesisViolated(
                    f"[Ω({alg.v_names[a]}), [Ω({alg.v_names[i]}), Ω({alg.v_names[j]})]] != 0",
                    witness=(a, i, j),
                )
    out = {alg.v_index(k): mats[k] for k in range(nv)}
    for (i, j), w in wedge_imgs.items():
        out[alg.w_index(i, j)[0]] = w
    return out
