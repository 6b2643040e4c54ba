from fractions import Fraction

import pytest
import sympy
from gmpy2 import mpq
from hypothesis import given, settings, strategies as st

from urlab.exact_linalg import (
    BlockPartition, DimensionError, Echelon, Matrix, Q, ad_shift_power, block_of, block_view,
    commutator, independence_certificate, is_i_diagonal, jordan_block, nullspace, parse_q, rank,
    render_q, rref, span_basis,
)

small = st.integers(-4, 4)


def matrices(max_rows=5, max_cols=5):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r)))


def square(max_n=5):
    return st.integers(1, max_n).flatmap(
        lambda n: st.lists(st.lists(small, min_size=n, max_size=n), min_size=n, max_size=n))


def test_scalars_parse_and_render():
    assert Q("3/6") == mpq(1, 2)
    assert Q(Fraction(-4, 6)) == mpq(-2, 3)
    assert render_q(Q("4/2")) == "2"
    assert render_q(Q("-1/3")) == "-1/3"
    assert parse_q(" 7 ") == 7
    with pytest.raises(TypeError):
        Q(0.5)
    with pytest.raises(ZeroDivisionError):
        parse_q("1/0")


def test_matrix_basics():
    A = Matrix([[1, 2], [3, 4]])
    assert A.shape == (2, 2)
    assert A.T == Matrix([[1, 3], [2, 4]])
    assert A @ Matrix.identity(2) == A
    assert (A - A).is_zero()
    assert A.det() == -2
    assert A @ A.inverse() == Matrix.identity(2)
    assert 2 * A == A.scale(2)
    with pytest.raises(TypeError):
        bool(A)
    with pytest.raises(DimensionError):
        A @ Matrix([[1, 2, 3]])
    with pytest.raises(DimensionError):
        Matrix([[1, 2], [3]])


def test_singular_inverse_raises():
    with pytest.raises(ZeroDivisionError):
        Matrix([[1, 2], [2, 4]]).inverse()


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_rref_and_rank_match_sympy(rows):
    M = Matrix(rows)
    ours, pivots = rref(M.tolist(), M.cols)
    ref, ref_piv = sympy.Matrix(rows).rref()
    assert tuple(pivots) == ref_piv
    assert rank(M.tolist()) == len(ref_piv)
    for i, r in enumerate(ours):
        assert [sympy.Rational(int(v.numerator), int(v.denominator)) for v in r] == list(ref.row(i))


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_nullspace_is_kernel_of_right_size(rows):
    M = Matrix(rows)
    null = nullspace(M)
    assert len(null) == M.cols - rank(M.tolist())
    for v in null:
        assert not any(M.apply(v))


@settings(max_examples=40, deadline=None)
@given(square())
def test_det_matches_sympy(rows):
    assert Matrix(rows).det() == int(sympy.Matrix(rows).det())


@settings(max_examples=40, deadline=None)
@given(square(4), square(4))
def test_commutator_is_antisymmetric_and_traceless(a, b):
    n = min(len(a), len(b))
    A = Matrix([r[:n] for r in a[:n]])
    B = Matrix([r[:n] for r in b[:n]])
    C = commutator(A, B)
    assert C == A @ B - B @ A
    assert C == -commutator(B, A)
    assert C.trace() == 0


def test_echelon_incremental_equals_batch():
    vecs = [(1, 2, 3), (2, 4, 6), (0, 1, 1), (1, 0, 1)]
    e = Echelon()
    added = [e.add(v) for v in vecs]
    assert added == [True, False, True, False]
    assert e.dense_rows(3) == rref(vecs, 3)[0]
    assert e.contains((3, 5, 8))
    assert not e.contains((0, 0, 1))


def test_span_basis_is_rref():
    assert span_basis([(0, 2, 4), (0, 1, 2)], 3) == [(0, 1, 2)]


def test_independence_certificate_relation():
    mats = [Matrix([[1, 0]]), Matrix([[0, 1]]), Matrix([[2, 3]])]
    cert = independence_certificate(mats)
    assert not cert.independent and cert.rank == 2
    combo = Matrix.zeros(1, 2)
    for c, m in zip(cert.relation, mats):
        combo = combo + m.scale(c)
    assert combo.is_zero()
    assert next(c for c in cert.relation if c) == 1
    assert independence_certificate(mats[:2]).independent
    assert independence_certificate([]).independent


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(small, min_size=4, max_size=4), min_size=1, max_size=6))
def test_certificate_relations_always_vanish(rows):
    mats = [Matrix([r[:2], r[2:]]) for r in rows]
    cert = independence_certificate(mats)
    assert cert.rank == rank([m.flat() for m in mats])
    if not cert.independent:
        total = Matrix.zeros(2)
        for c, m in zip(cert.relation, mats):
            total = total + m.scale(c)
        assert total.is_zero()


def test_jordan_blocks():
    assert jordan_block(3, 2) == Matrix([[2, 1, 0], [0, 2, 1], [0, 0, 2]])
    assert jordan_block(2, "1/2", "lower") == Matrix([["1/2", 0], [1, "1/2"]])
    with pytest.raises(ValueError):
        jordan_block(0)


def test_ad_shift_power_on_offdiagonal_block():
    # on a block between eigenvalues alpha and alpha - lam, ad A - lam is nilpotent
    A = Matrix.block_diag(jordan_block(2, 1), jordan_block(1, 0))
    X = Matrix.from_sparse(3, 3, {(1, 2): 1})
    once = ad_shift_power(A, 1, 1, X)
    assert once == Matrix.from_sparse(3, 3, {(0, 2): 1})
    assert ad_shift_power(A, 1, 2, X).is_zero()


def test_block_views_and_diagonal_shape():
    part = BlockPartition((2, 1, 1))
    assert part.offsets == (0, 2, 3)
    assert part.span(1) == (0, 2) and part.total == 4
    M = Matrix.from_sparse(4, 4, {(1, 2): 5, (2, 3): 7})
    assert block_of(M, part, 1, 2) == Matrix([[0], [5]])
    assert block_view(M, part, part, 2, 3) == Matrix([[7]])
    assert is_i_diagonal(M, part, 1)
    assert not is_i_diagonal(M + Matrix.unit(4, 4, 0, 3), part, 1)
    assert part.reversed() == BlockPartition((1, 1, 2))


def test_kron_and_block_diag():
    A = Matrix([[1, 2], [3, 4]])
    I = Matrix.identity(2)
    K = Matrix.kron(A, I)
    assert K.shape == (4, 4) and K[0, 2] == 2 and K[1, 3] == 2
    assert Matrix.block_diag(A, I).submatrix(2, 4, 2, 4) == I
