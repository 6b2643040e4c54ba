from itertools import product
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from urlab.exact_linalg import BlockPartition, DimensionError, Matrix, Q, block_of, is_i_diagonal
from urlab.lie_core import HypothesisViolated
from urlab.module_analysis import kernel_of_map
from urlab.phi_toolkit import (
    fieln2_family, lemma1_check, lidep_bruteforce, lidep_certificate, lidep_predict, phi,
    phi_family, phi_kernel_basis, phi_power, reduccion_oracle, reduccion_scan, sample_reduccion_X,
)
from urlab.rep_builder import RepParams, build_R
from urlab.sampling import rng_for, small_rational


def test_phi_examples():
    assert phi(1, 1, Matrix([[7]])).is_zero()
    assert phi(2, 1, Matrix([[3], [5]])) == Matrix([[5], [0]])
    assert phi(1, 3, Matrix([[1, 2, 3]])) == Matrix([[0, -1, -2]])
    with pytest.raises(DimensionError):
        phi(2, 2, Matrix([[1, 2]]))


@pytest.mark.parametrize("a,b", list(product(range(1, 6), repeat=2)))
def test_phi_nilpotency_degree_is_a_plus_b_minus_one(a, b):
    units = [Matrix.unit(a, b, i, j) for i in range(a) for j in range(b)]
    assert all(phi_power(a, b, Y, a + b - 1).is_zero() for Y in units)
    # the bottom-left unit survives one step less
    assert not phi_power(a, b, Matrix.unit(a, b, a - 1, 0), a + b - 2).is_zero()


def test_kernel_basis_examples():
    assert phi_kernel_basis(1, 3) == [Matrix([[0, 0, 1]])]
    assert phi_kernel_basis(2, 2) == [Matrix.identity(2), Matrix([[0, 1], [0, 0]])]
    tall = phi_kernel_basis(3, 2)
    assert tall[0] == Matrix([[1, 0], [0, 1], [0, 0]])
    with pytest.raises(ValueError):
        phi_kernel_basis(0, 2)


def test_family_vanishes_past_n():
    fam = phi_family(2, 2, 3, Matrix([[1, 2], [3, 4]]), Matrix([[1, 0, 2], [5, 1, 1]]))
    assert fam.n == 4 and len(fam.Ps) == 4 and len(fam.Ts) == 6
    assert phi_power(2, 2, fam.P, fam.n).is_zero()
    assert fam.Ts[(0, 1)] == fam.Ps[0] @ fam.Qs[1] - fam.Ps[1] @ fam.Qs[0]


def test_lidep_examples():
    Qm = Matrix([[2, 1]])
    assert lidep_predict(2, 1, 2, Matrix([[1], [3]]), Qm)
    assert lidep_predict(2, 1, 2, Matrix([[4], [0]]), Qm)
    assert lidep_bruteforce(2, 1, 2, Matrix([[4], [0]]), Qm)
    corners = (Matrix([[1], [2], [3]]), Matrix([[5]]))
    assert not lidep_predict(3, 1, 1, *corners) and not lidep_bruteforce(3, 1, 1, *corners)
    assert not lidep_bruteforce(2, 1, 2, Matrix.zeros(2, 1), Qm)
    worked = build_R(RepParams(2, 1, 0, 2, 1, 1, [[0], [1]], [[1]])).params
    assert lidep_predict(2, 1, 1, worked.M, worked.N) and lidep_bruteforce(2, 1, 1, worked.M, worked.N)


def test_lidep_relation_is_a_real_dependency():
    P, Qm = Matrix([[1], [2], [3]]), Matrix([[5]])
    cert = lidep_certificate(3, 1, 1, P, Qm)
    fam = phi_family(3, 1, 1, P, Qm)
    total = Matrix.zeros(3, 1)
    for c, T in zip(cert.relation, fam.t_list()):
        total = total + T.scale(c)
    assert total.is_zero() and any(cert.relation)


def test_lidep_literal_conditions_fail_only_on_the_empty_family():
    # with n = 1 there are no T_{i,j}; the printed corner test can still say "dependent"
    P, Qm = Matrix([[0]]), Matrix([[3]])
    assert lidep_bruteforce(1, 1, 1, P, Qm)
    assert lidep_predict(1, 1, 1, P, Qm)
    assert not lidep_predict(1, 1, 1, P, Qm, literal=True)
    for a, b, c in product(range(1, 4), repeat=3):
        if (a, b, c) == (1, 1, 1):
            continue
        rng = rng_for(1, "literal", a, b, c)
        P = Matrix([[small_rational(rng) for _ in range(b)] for _ in range(a)])
        Qm = Matrix([[small_rational(rng) for _ in range(c)] for _ in range(b)])
        assert lidep_predict(a, b, c, P, Qm, literal=True) == lidep_predict(a, b, c, P, Qm)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4), st.integers(1, 4), st.data())
def test_lidep_predict_matches_bruteforce(a, b, c, data):
    entry = st.integers(-2, 2)
    P = Matrix([[data.draw(entry) for _ in range(b)] for _ in range(a)])
    Qm = Matrix([[data.draw(entry) for _ in range(c)] for _ in range(b)])
    assert lidep_predict(a, b, c, P, Qm) == lidep_bruteforce(a, b, c, P, Qm)


def test_fieln2_base_case():
    res = fieln2_family(2, [2], [3], 5, 7)
    assert res.family.Ts[(0, 1)] == Matrix([[175]])
    assert res.independent


def test_fieln2_shapes():
    res = fieln2_family(4, [2, 3, 5], [1, 1, 1], 2, 3, filler=rng_for(9, "shape"))
    Ps, Qs = res.family.Ps, res.family.Qs
    # P_2: row n-1-i = 1 holds (z, *), row 2 holds (0, -p_2 z), row 3 is zero
    assert Ps[2][0, 0] == 2 and Ps[2][1, 0] == 0 and Ps[2][1, 1] == -6
    assert Ps[2].row(2) == (0, 0)
    # Q_2: (-1)^1 q_2 w at column 2 of row 1, (-1)^2 w at column 3 of row 2
    assert Qs[2][0, 1] == -3 and Qs[2][1, 2] == 3
    assert Qs[2][0, 0] == 0 and Qs[2][1, 1] == 0
    assert Qs[0][1, 0] == 3


@pytest.mark.parametrize("n", range(2, 7))
def test_fieln2_verdict_ignores_star_fills(n):
    p = q = list(range(1, n))
    verdicts = {fieln2_family(n, p, q, 1, 1, filler=rng_for(s, "stars", n)).independent for s in range(10)}
    assert verdicts == {True}
    rng = rng_for(0, "pq", n)
    p2 = [Q(rng.choice((1, 2, -3))) for _ in range(n - 1)]
    q2 = [Q(rng.choice((1, 4))) for _ in range(n - 1)]
    assert fieln2_family(n, p2, q2, "1/2", -2, filler=rng).independent


def test_fieln2_hypotheses():
    with pytest.raises(HypothesisViolated):
        fieln2_family(3, [1, 2], [1, -2], 1, 1)
    with pytest.raises(HypothesisViolated):
        fieln2_family(2, [1], [1], 0, 1)
    broken = fieln2_family(2, [4], [-4], 1, 1, strict=False)
    assert broken.family.Ts[(0, 1)].is_zero() and not broken.independent


def test_lemma1_scalar_case():
    one = Matrix([[1]])
    v = lemma1_check(one, one, Matrix([[3]]), Matrix([[3]]))
    assert v.z_zero and v.conclusion_holds and v.mu1 == v.nu1 == 3


def test_lemma1_one_sided_is_nonzero():
    # a = 1 <= b2 = 2; Y2 is the right-justified band (0, nu) and Y1 vanishes
    X1, X2 = Matrix([[1]]), Matrix([[4], [1]])
    v = lemma1_check(X1, X2, Matrix([[0]]), Matrix([[0, 3]]))
    assert not v.z_zero and v.conclusion_holds is None


def test_lemma1_preconditions():
    one = Matrix([[1]])
    with pytest.raises(HypothesisViolated):
        lemma1_check(Matrix([[2]]), one, one, one)
    with pytest.raises(HypothesisViolated):
        lemma1_check(one, one, Matrix([[0]]), Matrix([[0]]))
    with pytest.raises(HypothesisViolated):
        lemma1_check(Matrix([[0], [1]]), one, one, Matrix([[1], [1]]))


def _lowest(rows, cols, rng):
    X = [[small_rational(rng) for _ in range(cols)] for _ in range(rows)]
    X[rows - 1][0] = 1
    return Matrix(X)


@pytest.mark.parametrize("dims", list(product(range(1, 4), repeat=4)))
def test_lemma1_conclusion_on_every_vanishing_pair(dims):
    a, b1, b2, c = dims
    rng = rng_for(5, "lemma1", dims)
    X1, X2 = _lowest(a, b1, rng), _lowest(b2, c, rng)
    K1, K2 = phi_kernel_basis(b1, c), phi_kernel_basis(a, b2)
    # Z is linear in the kernel coordinates of (Y1, Y2); solve Z = 0
    maps = [X1 @ Y for Y in K1] + [-(Y @ X2) for Y in K2]
    null = kernel_of_map(maps)
    # each basis solution and their sum
    candidates = null + ([tuple(map(sum, zip(*null)))] if len(null) > 1 else [])
    for coeffs in candidates:
        Y1 = sum((Y.scale(c_) for Y, c_ in zip(K1, coeffs)), Matrix.zeros(b1, c))
        Y2 = sum((Y.scale(c_) for Y, c_ in zip(K2, coeffs[len(K1):])), Matrix.zeros(a, b2))
        v = lemma1_check(X1, X2, Y1, Y2)
        assert v.z_zero and v.conclusion_holds, (dims, v.reasons)
        assert a <= b2 and c <= b1


def test_reduccion_smallest_case():
    res = reduccion_scan((1, 1, 1, 1), 2, 5, X=sample_reduccion_X((1, 1, 1, 1), rng_for(0, "x")))
    assert res.all_14_blocks_zero and res.closure_dim == 2 and res.witness is None
    assert res.A @ res.X - res.X @ res.A == res.X.scale(2)


@pytest.mark.parametrize("sizes", [(2, 1, 1, 1), (1, 2, 1, 1), (1, 1, 1, 2), (2, 2, 2, 2)])
def test_reduccion_witness(sizes):
    res = reduccion_scan(sizes, 1, 0, rng=rng_for(3, "w", sizes))
    assert not res.all_14_blocks_zero
    part = BlockPartition(sizes)
    assert not block_of(res.witness, part, 1, 4).is_zero()


def test_reduccion_verdict_independent_of_lambda():
    for sizes in product((1, 2), repeat=4):
        verdicts = {reduccion_scan(sizes, lam, 0, rng=rng_for(4, sizes)).all_14_blocks_zero
                    for lam in (1, -2, "1/3")}
        assert verdicts == {sizes == (1, 1, 1, 1)}


def test_reduccion_rejects_bad_input():
    with pytest.raises(ValueError):
        reduccion_scan((1, 1, 1), 1, 0)
    with pytest.raises(ValueError):
        reduccion_scan((1, 1, 1, 1), 0, 0)
    with pytest.raises(HypothesisViolated):
        reduccion_scan((1, 1, 1, 1), 1, 0, X=Matrix.unit(4, 4, 0, 2))


@pytest.mark.parametrize("sizes", [s for s in product(range(1, 4), repeat=4) if s != (1, 1, 1, 1)])
def test_reduccion_oracle_blocks(sizes):
    X = sample_reduccion_X(sizes, rng_for(8, "oracle", sizes))
    orc = reduccion_oracle(sizes, "1/3", 2, X)
    part = BlockPartition(sizes)
    assert is_i_diagonal(orc.Z, part, 1) and is_i_diagonal(orc.U, part, 2)
    for i in range(1, 4):
        blk = block_of(orc.Z, part, i, i + 1)
        di, dj = sizes[i - 1], sizes[i]
        if di + dj < orc.m:
            assert blk.is_zero()
        else:
            expected = Matrix.from_sparse(di, dj, {(0, dj - 1): orc.D[(i, i + 1)]})
            assert blk == expected
            assert orc.D[(i, i + 1)] == (-1) ** (dj - 1) * comb(di + dj - 2, di - 1)
    assert orc.U == X @ orc.Z - orc.Z @ X
