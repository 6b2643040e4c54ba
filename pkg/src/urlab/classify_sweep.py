"""Seeded sweeps over the R_{a,b,c,M,N,alpha} family and the four-block obstruction.

Each sweep returns a ``SweepReport`` whose records are ordered by parameter
tuple, so serialized reports are byte-stable for a fixed seed.  Sweeps that
check the skeleton of a classification argument (normal-form uniqueness and
the four-block obstruction) label their reports as supporting evidence.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field, replace
from itertools import product
from typing import Sequence

from .exact_linalg import ONE, ZERO, BlockPartition, Echelon, Matrix, Q, render_q
from .module_analysis import (
    IrrationalSpectrum, _from_coords, _rational_eigenvalues, _rref_basis, _restrict,
    isomorphism_search, kernel_and_flags,
)
from .phi_toolkit import faithful_triples, reduccion_scan, sample_reduccion_X
from .rep_builder import (
    NotStandard, RepParams, Representation, RepresentationCheckFailed, build_R, build_sl2_tensor,
    conjugate, dualize, is_extreme, normalize, params_from_standard, standard_data, toeplitz_upper,
)
from .sampling import DEFAULT_SEED, nonzero_int, rng_for

__all__ = [
    "enumerate_triples", "SweepConfig", "SweepRecord", "SweepReport", "sample_params",
    "faithful_sweep", "classification_roundtrip", "length_bound_scan", "to_standard_form",
    "sl2_crosscheck", "EVIDENCE_LABEL",
]

EVIDENCE_LABEL = "supporting evidence"


def enumerate_triples(n: int) -> list[tuple[int, int, int]]:
    """All (a, b, c) with a + b = n + 1, c <= a or c + b = n + 1, a <= c."""
    if n < 2:
        raise ValueError("n must be >= 2")
    out = set()
    for a in range(1, n + 1):
        out.update((a, n + 1 - a, c) for c in range(1, a + 1))
    for c in range(1, n + 1):
        out.update((a, n + 1 - c, c) for a in range(1, c + 1))
    return sorted(out)


@dataclass(frozen=True)
class SweepConfig:
    n_range: tuple = (2, 3, 4)
    alpha_set: tuple = (0, 1, "-1/2")
    lambda_set: tuple = (1, 2, "-1/3")
    samples_per_cell: int = 5
    # per-sample seeds are derived from this and the cell key
    seed: int = DEFAULT_SEED

    def __post_init__(self):
        object.__setattr__(self, "n_range", tuple(int(n) for n in self.n_range))
        object.__setattr__(self, "alpha_set", tuple(Q(a) for a in self.alpha_set))
        object.__setattr__(self, "lambda_set", tuple(Q(v) for v in self.lambda_set))

    def check(self, classification: bool = False) -> None:
        if not self.n_range or min(self.n_range) < 2:
            raise ValueError("n_range must be nonempty with every n >= 2")
        if self.samples_per_cell < 1:
            raise ValueError("samples_per_cell must be positive")
        if classification and any(v == 0 for v in self.lambda_set):
            raise ValueError("classification sweeps need nonzero lambda")

    def to_json(self) -> dict:
        return {
            "n_range": list(self.n_range),
            "alpha_set": [render_q(a) for a in self.alpha_set],
            "lambda_set": [render_q(v) for v in self.lambda_set],
            "samples_per_cell": self.samples_per_cell,
            "seed": self.seed,
        }


@dataclass(frozen=True)
class SweepRecord:
    key: str
    n: int
    abc: tuple
    cell: dict
    flags: dict
    expected: object
    observed: object
    passed: bool

    def to_json(self) -> dict:
        return {
            "key": self.key, "n": self.n, "abc": list(self.abc), "cell": self.cell,
            "flags": self.flags, "expected": self.expected, "observed": self.observed,
            "pass": self.passed,
        }


@dataclass
class SweepReport:
    kind: str
    label: str = ""
    config: dict = field(default_factory=dict)
    records: list = field(default_factory=list)
    counterexamples: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.counterexamples

    def add(self, record: SweepRecord, detail: dict | None = None) -> None:
        self.records.append(record)
        if not record.passed:
            self.counterexamples.append({"record": record.to_json(), **(detail or {})})

    def to_json(self) -> dict:
        return {
            "schema": "v1", "kind": self.kind, "label": self.label, "config": self.config,
            "pass": self.passed, "records": [r.to_json() for r in self.records],
            "counterexamples": self.counterexamples,
        }


def _fingerprint(payload) -> str:
    return hashlib.sha256(json.dumps(payload, sort_keys=True).encode()).hexdigest()[:16]


def sample_params(n: int, abc: Sequence[int], lam, alpha, rng) -> RepParams:
    """Legal (M, N): integer entries in [-5, 5] with nonzero bottom-left corners."""
    a, b, c = abc
    M = [[rng.randint(-5, 5) for _ in range(b)] for _ in range(a)]
    N = [[rng.randint(-5, 5) for _ in range(c)] for _ in range(b)]
    M[a - 1][0] = nonzero_int(rng)
    N[b - 1][0] = nonzero_int(rng)
    return RepParams(n, lam, alpha, a, b, c, M, N)


def _cells(cfg: SweepConfig):
    for n in cfg.n_range:
        for abc in enumerate_triples(n):
            for lam in cfg.lambda_set:
                for alpha in cfg.alpha_set:
                    yield n, abc, lam, alpha


# ---------------------------------------------------------------------------
# faithfulness
# ---------------------------------------------------------------------------

def faithful_sweep(cfg: SweepConfig) -> SweepReport:
    """Build every sampled rep, analyze it, and compare faithfulness with the triple set.

    Each record also carries the verification, uniseriality and length flags
    so one pass over the grid serves all three checks.
    """
    cfg.check()
    report = SweepReport("faithful", config=cfg.to_json())
    for n, abc, lam, alpha in _cells(cfg):
        expected = abc in faithful_triples(n)
        for s in range(cfg.samples_per_cell):
            rng = rng_for(cfg.seed, "faithful", n, abc, render_q(lam), render_q(alpha), s)
            params = sample_params(n, abc, lam, alpha, rng)
            cell = {"lambda": render_q(lam), "alpha": render_q(alpha), "sample": s}
            key = _fingerprint(params.to_json())
            try:
                rep = build_R(params)
            except RepresentationCheckFailed as exc:
                flags = {"verified": False, "error": str(exc)}
                report.add(SweepRecord(key, n, abc, cell, flags, expected, None, False),
                           {"params": params.to_json()})
                continue
            rpt = kernel_and_flags(rep)
            flags = {
                "verified": rep.verified, "uniserial": rpt.uniserial, "length": rpt.length,
                "faithful": rpt.faithful, "relatively_faithful": rpt.relatively_faithful,
                "kernel_dim": rpt.kernel_dim, "lemma_funk_consistent": rpt.lemma_funk_consistent,
            }
            passed = rpt.faithful == expected
            report.add(SweepRecord(key, n, abc, cell, flags, expected, rpt.faithful, passed),
                       {"params": params.to_json()})
    return report


# ---------------------------------------------------------------------------
# standard form recovery
# ---------------------------------------------------------------------------

def _grading_operator(rep: Representation) -> Matrix:
    """Some H with [H, R(x)] = 0 and [H, R(v_0)] = R(v_0)."""
    d = rep.dim
    const = d * d
    X, V0 = rep.image(0), rep.image(rep.algebra.v_index(0))
    ech = Echelon()
    for R, rhs in ((X, None), (V0, V0)):
        Rs = R.sparse_rows()
        Rcols: dict[int, list] = {}
        for k, row in enumerate(Rs):
            for j, v in row:
                Rcols.setdefault(j, []).append((k, v))
        for i in range(d):
            for j in range(d):
                eq: dict = {}
                for k, v in Rcols.get(j, ()):
                    eq[i * d + k] = eq.get(i * d + k, ZERO) + v
                for k, v in Rs[i]:
                    eq[k * d + j] = eq.get(k * d + j, ZERO) - v
                if rhs is not None and rhs[i, j]:
                    eq[const] = -rhs[i, j]
                eq = {c: v for c, v in eq.items() if v}
                if eq:
                    ech.add(eq)
    if const in ech.pivots:
        raise NotStandard("no grading operator: R(v_0) is not an eigenvector of ad H for any H commuting with R(x)")
    sol = next(v for v in ech.nullspace(const + 1) if v[const])
    return Matrix.from_flat(d, d, [c / sol[const] for c in sol[:const]])


def _generalized_eigenspace(H: Matrix, theta) -> tuple:
    d = H.rows
    S = H - Matrix.identity(d).scale(theta)
    P = Matrix.identity(d)
    for _ in range(d):
        P = P @ S
    return _rref_basis(Echelon(dict(r) for r in P.sparse_rows()).nullspace(d), d)


def _jordan_chain(rep: Representation, space: tuple) -> tuple[list[tuple], object]:
    """Basis e_1..e_k of an R(x)-invariant space with R(x) = J^k(theta) upper."""
    d = rep.dim
    C = _restrict(rep.image(0), space)
    k = C.rows
    theta = C.trace() / k
    Nmat = C - Matrix.identity(k).scale(theta)
    powers = [Matrix.identity(k)]
    for _ in range(k):
        powers.append(powers[-1] @ Nmat)
    if not powers[k].is_zero():
        raise NotStandard("R(x) has several eigenvalues on a graded piece")
    top = powers[k - 1]
    j = next((j for j in range(k) if any(top.column(j))), None)
    if j is None:
        raise NotStandard("R(x) is not a single Jordan block on a graded piece")
    u = tuple(ONE if t == j else ZERO for t in range(k))
    chain = [powers[k - 1 - s].apply(u) for s in range(k)]
    return [_from_coords(v, space, d) for v in chain], theta


def to_standard_form(rep: Representation) -> tuple[Representation, Matrix]:
    """Conjugate a representation of the single-block algebra into standard shape.

    A grading operator H is found by linear algebra; its generalized
    eigenspaces, ordered by decreasing eigenvalue, are the blocks, and a
    Jordan chain of R(x) on each block gives the basis.  Returns the
    standard representation and the change of basis T (new = T^{-1} old T).
    Raises NotStandard when the representation has no such form.
    """
    if rep.algebra.kind != "single":
        raise NotStandard("standard form is defined for the single-block algebra")
    H = _grading_operator(rep)
    try:
        thetas = sorted(_rational_eigenvalues(H), reverse=True)
    except IrrationalSpectrum as exc:
        raise NotStandard(str(exc)) from exc
    if any(t1 - t2 != 1 for t1, t2 in zip(thetas, thetas[1:])):
        raise NotStandard("grading eigenvalues do not form a unit-step chain")
    columns, sizes = [], []
    for theta in thetas:
        space = _generalized_eigenspace(H, theta)
        chain, _ = _jordan_chain(rep, space)
        columns.extend(chain)
        sizes.append(len(chain))
    T = Matrix(zip(*columns))
    T_inv = T.inverse()
    out = Representation(rep.algebra, tuple(T_inv @ m @ T for m in rep.images),
                         partition=BlockPartition(sizes), verified=rep.verified, label=rep.label)
    standard_data(out)
    if len(sizes) == 3:
        out = replace(out, params=params_from_standard(out), _fp=[])
    return out, T


# ---------------------------------------------------------------------------
# normal-form uniqueness
# ---------------------------------------------------------------------------

def _toeplitz_conjugator(sizes: Sequence[int], rng) -> tuple[Matrix, Matrix]:
    blocks = []
    for s in sizes:
        coeffs = [Q(nonzero_int(rng))] + [Q(rng.randint(-5, 5)) for _ in range(s - 1)]
        blocks.append(toeplitz_upper(coeffs))
    return Matrix.block_diag(*blocks), Matrix.block_diag(*(b.inverse() for b in blocks))


def _random_unimodular(d: int, rng) -> tuple[Matrix, Matrix]:
    """Integer L U with unit triangular factors, so det = 1 and the inverse is integral."""
    L = Matrix.from_sparse(d, d, {**{(i, j): Q(rng.randint(-2, 2)) for i in range(d) for j in range(i)},
                                  **{(i, i): ONE for i in range(d)}})
    U = Matrix.from_sparse(d, d, {**{(i, j): Q(rng.randint(-2, 2)) for i in range(d) for j in range(i + 1, d)},
                                  **{(i, i): ONE for i in range(d)}})
    return L @ U, U.inverse() @ L.inverse()


def _perturbed(params: RepParams, rng) -> RepParams | None:
    """Change one free entry of the normalized M (or N) by a nonzero amount."""
    a, b = params.a, params.b
    free_M = [(i, j) for i in range(a - 1) for j in range(1, b)]
    free_N = [(i, j) for i in range(b - 1) for j in range(params.c)]
    if free_M:
        i, j = free_M[rng.randrange(len(free_M))]
        M = params.M.tolist()
        M[i][j] += nonzero_int(rng)
        return RepParams(params.n, params.lam, params.alpha, a, b, params.c, M, params.N)
    if free_N:
        i, j = free_N[rng.randrange(len(free_N))]
        N = params.N.tolist()
        N[i][j] += nonzero_int(rng)
        return RepParams(params.n, params.lam, params.alpha, a, b, params.c, params.M, N)
    return None


def classification_roundtrip(cfg: SweepConfig, trials: int = 50, dense_trials: int = 10) -> SweepReport:
    """Normal-form recovery after conjugation, and non-isomorphism of distinct normal forms.

    Trials cycle through the cells of ``cfg``.  Each trial records
    recovery after a random block-Toeplitz conjugation (commuting with R(x)),
    recovery after a dense unimodular conjugation followed by ``to_standard_form``
    (first ``dense_trials`` trials only, as it solves a d^2-variable system),
    and an isomorphism test against a second, distinct normalized rep.
    """
    cfg.check(classification=True)
    report = SweepReport("roundtrip", label=EVIDENCE_LABEL, config={**cfg.to_json(), "trials": trials})
    cells = list(_cells(cfg))
    for t in range(trials):
        n, abc, lam, alpha = cells[(t * 7919) % len(cells)]
        rng = rng_for(cfg.seed, "roundtrip", t)
        base = sample_params(n, abc, lam, alpha, rng)
        rep, _ = normalize(build_R(base))
        target = rep.params
        cell = {"lambda": render_q(lam), "alpha": render_q(alpha), "trial": t}
        key = _fingerprint(target.to_json())
        detail = {"params": target.to_json()}

        T, T_inv = _toeplitz_conjugator(abc, rng)
        moved = conjugate(rep, T, T_inv)
        moved = Representation(moved.algebra, moved.images, partition=rep.partition,
                               verified=moved.verified)
        got_block = normalize(moved)[0].params
        ok_block = got_block == target

        ok_dense = None
        if t < dense_trials:
            dense = conjugate(rep, *_random_unimodular(rep.dim, rng))
            try:
                ok_dense = normalize(to_standard_form(dense)[0])[0].params == target
            except NotStandard as exc:
                ok_dense, detail["dense_error"] = False, str(exc)

        flags = {"block_recovered": ok_block, "dense_recovered": ok_dense,
                 "extreme": is_extreme(target)}
        other = _perturbed(target, rng)
        if other is None:
            other_raw = sample_params(n, abc, lam, alpha, rng)
            other = normalize(build_R(other_raw))[0].params
        distinct = other != target
        if distinct:
            res = isomorphism_search(rep, build_R(other), seed=cfg.seed)
            flags.update(distinct_isomorphic=res.isomorphic, negative_certified=res.negative_certified,
                         solution_dim=res.solution_dim)
            ok_distinct = not res.isomorphic
        else:
            ok_distinct = True
        flags["distinct_pair"] = distinct
        dual = dualize(rep)
        if dual.partition != rep.partition or dual.params.alpha != target.alpha:
            res = isomorphism_search(rep, dual, seed=cfg.seed)
            flags["dual_isomorphic"] = res.isomorphic
            ok_dual = not res.isomorphic
        else:
            ok_dual = True
        passed = ok_block and ok_dense is not False and ok_distinct and ok_dual
        report.add(SweepRecord(key, n, abc, cell, flags, "recovered, distinct forms non-isomorphic",
                               "pass" if passed else "fail", passed), detail)
    return report


# ---------------------------------------------------------------------------
# four-block obstruction
# ---------------------------------------------------------------------------

def length_bound_scan(dmax: int = 3, lambda_set: Sequence = (1, -2, "1/3"), samples: int = 3,
                      seed: int = DEFAULT_SEED, alpha_set: Sequence = (0,)) -> SweepReport:
    """Closure scan over all block sizes d_i <= dmax; only (1,1,1,1) may keep every (1,4) block zero."""
    lambda_set = tuple(Q(v) for v in lambda_set)
    if any(v == 0 for v in lambda_set):
        raise ValueError("lambda must be nonzero")
    report = SweepReport("length_bound", label=EVIDENCE_LABEL, config={
        "dmax": dmax, "lambda_set": [render_q(v) for v in lambda_set], "samples": samples,
        "seed": seed, "alpha_set": [render_q(Q(a)) for a in alpha_set]})
    for sizes in product(range(1, dmax + 1), repeat=4):
        expected = sizes == (1, 1, 1, 1)
        for lam in lambda_set:
            for alpha in alpha_set:
                for s in range(samples):
                    rng = rng_for(seed, "reduccion", sizes, render_q(lam), render_q(Q(alpha)), s)
                    X = sample_reduccion_X(sizes, rng)
                    res = reduccion_scan(sizes, lam, alpha, X=X)
                    cell = {"lambda": render_q(lam), "alpha": render_q(Q(alpha)), "sample": s,
                            "sizes": list(sizes)}
                    flags = {"closure_dim": res.closure_dim}
                    passed = res.all_14_blocks_zero == expected
                    detail = {"X": [[render_q(v) for v in r] for r in X.tolist()]}
                    if res.witness is not None:
                        detail["witness"] = [[render_q(v) for v in r] for r in res.witness.tolist()]
                    report.add(SweepRecord(_fingerprint(cell), sum(sizes), tuple(sizes), cell, flags,
                                           expected, res.all_14_blocks_zero, passed), detail)
    return report


# ---------------------------------------------------------------------------
# sl(2) current algebra cross-check
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Sl2Crosscheck:
    faithful: bool
    uniserial: bool
    length: int
    block_sizes: tuple
    recovered: RepParams
    isomorphic: bool
    intertwiner: Matrix | None

    @property
    def passed(self) -> bool:
        return (self.faithful and self.uniserial and self.block_sizes == (2, 2, 2)
                and self.isomorphic)

    def to_json(self) -> dict:
        return {
            "schema": "v1", "faithful": self.faithful, "uniserial": self.uniserial,
            "length": self.length, "block_sizes": list(self.block_sizes),
            "recovered": self.recovered.to_json(), "isomorphic": self.isomorphic, "pass": self.passed,
        }


def sl2_crosscheck(seed: int = DEFAULT_SEED) -> Sl2Crosscheck:
    """Match the sl(2) ⊗ F[t]/(t^3) module against build_R(n=3, (2,2,2), lambda=alpha=0)."""
    tensor = build_sl2_tensor()
    rpt = kernel_and_flags(tensor)
    std, _ = to_standard_form(tensor)
    normed, _ = normalize(std)
    params = normed.params
    target = build_R(RepParams(3, 0, 0, *params.abc, params.M, params.N))
    res = isomorphism_search(tensor, target, seed=seed)
    return Sl2Crosscheck(rpt.faithful, rpt.uniserial, rpt.length, tuple(std.partition), params,
                         res.isomorphic, res.intertwiner)
