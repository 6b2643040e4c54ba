import pytest
from hypothesis import given, settings, strategies as st

from urlab.classify_sweep import enumerate_triples, sample_params
from urlab.exact_linalg import BlockPartition, Matrix, Q, is_i_diagonal, jordan_block
from urlab.lie_core import build_g
from urlab.module_analysis import isomorphism_search, kernel_and_flags
from urlab.rep_builder import (
    DiagonalT, ExtremeDegeneracy, NotStandard, ParamViolation, RepParams,
    Representation, Salpha, STwoBlocks, build_R, build_S_family, build_sl2_tensor, build_standard,
    conjugate, dualize, is_extreme, is_normalized, is_standard, normalize, params_from_standard,
    rep_from_json, rep_to_json, toeplitz_upper, verify_representation,
)
from urlab.sampling import rng_for


def unit(i, j, d=4):
    return Matrix.unit(d, d, i - 1, j - 1)


def worked(M=((0,), (1,)), N=((1,),), alpha=0):
    return build_R(RepParams(2, 1, alpha, 2, 1, 1, [list(r) for r in M], [list(r) for r in N]))


def sampled(seed, n_choices=(2, 3, 4, 5)):
    rng = rng_for(seed, "rep-builder-tests")
    n = rng.choice(n_choices)
    abc = rng.choice(enumerate_triples(n))
    return build_R(sample_params(n, abc, Q(rng.choice((1, 2, "-1/3"))), Q(rng.choice((0, 1, "-1/2"))), rng))


def test_worked_example_images():
    rep = worked()
    assert rep.dim == 4 and rep.verified
    A = Matrix.block_diag(jordan_block(2, 0), jordan_block(1, -1), jordan_block(1, -2))
    assert rep.image("x") == A
    assert rep.image("v0") == unit(2, 3) + unit(3, 4)
    assert rep.image("v1") == unit(1, 3)
    assert rep.image("v0^v1") == -unit(1, 4)


def test_param_violations():
    with pytest.raises(ParamViolation, match="size condition"):
        build_R(RepParams(2, 1, 0, 1, 1, 1, [[1]], [[1]]))
    with pytest.raises(ParamViolation, match="M_"):
        build_R(RepParams(2, 1, 0, 2, 1, 1, [[1], [0]], [[1]]))
    with pytest.raises(ParamViolation, match="N must be"):
        build_R(RepParams(2, 1, 0, 2, 1, 1, [[0], [1]], [[1, 2]]))
    assert RepParams(2, 1, 0, 2, 1, 1, [[0], [1]], [[1]]).violations() == []


def test_verify_representation_witness():
    rep = worked()
    imgs = list(rep.images)
    assert verify_representation(rep.algebra, imgs) == (True, None)
    imgs[rep.algebra.index("v1")] = 2 * unit(1, 3)
    ok, witness = verify_representation(rep.algebra, imgs)
    assert not ok and witness == ("x", "v0")
    assert verify_representation(rep.algebra, [Matrix.zeros(3)] * rep.algebra.dim)[0]


@pytest.mark.parametrize("seed", range(12))
def test_band_structure(seed):
    rep = sampled(seed)
    part = rep.partition
    for k in rep.algebra.v_indices():
        assert is_i_diagonal(rep.images[k], part, 1)
    for k in rep.algebra.w_indices():
        assert is_i_diagonal(rep.images[k], part, 2)
    assert is_standard(rep, part, rep.params.alpha)


def test_normalize_example():
    rep = worked(M=((0,), (3,)), N=((2,),))
    normed, T = normalize(rep)
    assert normed.params.M == Matrix([[0], [1]]) and normed.params.N == Matrix([[1]])
    for y, z in zip(rep.images, normed.images):
        assert T @ y == z @ T
    assert T[0, 0] == 1


@pytest.mark.parametrize("seed", range(12))
def test_normalize_properties(seed):
    rep = sampled(seed)
    normed, T = normalize(rep)
    assert is_normalized(normed.params)
    again, T2 = normalize(normed)
    assert again.params == normed.params and T2 == Matrix.identity(rep.dim)
    assert isomorphism_search(rep, normed).isomorphic
    # T commutes with R(x)
    assert T @ rep.image("x") == rep.image("x") @ T


def test_normalize_rejects_bad_input():
    rep = worked()
    with pytest.raises(NotStandard):
        normalize(Representation(rep.algebra, rep.images))
    with pytest.raises(NotStandard):
        normalize(Representation(rep.algebra, rep.images, partition=BlockPartition((1, 1, 2))))


def test_toeplitz_upper():
    assert toeplitz_upper([2, 3, 5]) == Matrix([[2, 3, 5], [0, 2, 3], [0, 0, 2]])


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000))
def test_toeplitz_conjugation_preserves_normal_form(seed):
    rep, _ = normalize(sampled(seed, (2, 3, 4)))
    rng = rng_for(seed, "toeplitz")
    blocks = [toeplitz_upper([rng.choice((1, 2, -3))] + [rng.randint(-3, 3) for _ in range(s - 1)])
              for s in rep.partition]
    T = Matrix.block_diag(*blocks)
    moved = Representation(rep.algebra, conjugate(rep, T).images, partition=rep.partition)
    assert normalize(moved)[0].params == rep.params


def test_is_extreme():
    assert is_extreme(RepParams(3, 1, 0, 1, 3, 1, [[1, 0, 0]], [[7], [0], [1]]))
    assert not is_extreme(RepParams(3, 1, 0, 1, 3, 1, [[1, 0, 0]], [[7], [2], [1]]))
    assert not is_extreme(RepParams(2, 1, 0, 1, 2, 1, [[1, 0]], [[0], [1]]))


def test_dual_of_worked_example():
    dual = dualize(worked())
    assert tuple(dual.partition) == (1, 1, 2)
    assert dual.params.alpha == 2
    assert is_standard(dual, (1, 1, 2), 2)
    assert kernel_and_flags(dual).faithful


@pytest.mark.parametrize("seed", range(8))
def test_double_dual_is_the_original(seed):
    rep = sampled(seed)
    back = dualize(dualize(rep))
    assert back.images == rep.images
    assert params_from_standard(back) == rep.params


def test_dualize_needs_standard_input():
    rep = worked()
    with pytest.raises(NotStandard):
        dualize(Representation(rep.algebra, rep.images))


def test_salpha_matrices():
    rep = build_S_family(Salpha(2, 3, 1))
    alg = rep.algebra
    assert rep.image("x") == Matrix([[1, 0, 0], [0, -1, 0], [0, 0, -4]])
    assert rep.image("v0") == Matrix.unit(3, 3, 0, 1)
    assert rep.image("w0") == Matrix.unit(3, 3, 1, 2)
    assert rep.image("v0^w0") == Matrix.unit(3, 3, 0, 2)
    assert alg.kind == "two_blocks"
    r = kernel_and_flags(rep)
    assert r.faithful and r.uniserial


def test_two_block_family_kills_v_wedges():
    rep = build_S_family(STwoBlocks(3, 2, 1, 2, 0, 2, 2, 1, [[1, 0], [2, 1]], [[3], [1]]))
    alg = rep.algebra
    assert rep.verified
    for i in range(3):
        for j in range(i + 1, 3):
            assert rep.images[alg.w_index(i, j)[0]].is_zero()
    assert not kernel_and_flags(rep).faithful
    with pytest.raises(ParamViolation):
        build_S_family(STwoBlocks(3, 2, 1, 2, 0, 2, 1, 1, [[1], [1]], [[1]]))


def test_two_block_chain_needs_its_own_shift():
    # the w-chain built with the v-eigenvalue instead of mu breaks the homomorphism property
    spec = STwoBlocks(1, 2, 1, 3, 0, 1, 1, 2, [[1]], [[1, 0]])
    rep = build_S_family(spec)
    alg = rep.algebra
    imgs = list(rep.images)
    w0 = imgs[alg.index("w0")]
    A = rep.image("x")
    imgs[alg.index("w1")] = A @ w0 - w0 @ A - w0  # shift by lam = 1, not mu = 3
    assert not verify_representation(alg, imgs)[0]


def test_diagonal_family():
    rep = build_S_family(DiagonalT((1, 2), 1, 0, 1, 2))
    assert rep.dim == 4 and kernel_and_flags(rep).faithful
    three = kernel_and_flags(build_S_family(DiagonalT((1, 2, 3), 1, 0, 1, 2)))
    assert not three.faithful and three.relatively_faithful
    with pytest.raises(ExtremeDegeneracy):
        build_S_family(DiagonalT((1, 2), 1, 0, 3, 3))


def test_sl2_tensor_module():
    rep = build_sl2_tensor()
    assert rep.dim == 6 and rep.verified
    assert rep.algebra.lam == 0 and rep.algebra.n == 3
    r = kernel_and_flags(rep)
    assert r.faithful and r.uniserial


def test_json_roundtrip_through_params_and_images():
    rep = sampled(3)
    payload = rep_to_json(rep)
    again = rep_from_json(payload)
    assert again.images == rep.images and again.params == rep.params
    bare = {k: v for k, v in payload.items() if k != "params"}
    parsed = rep_from_json(bare)
    assert parsed.verified and parsed.images == rep.images
    broken = dict(bare, images=dict(bare["images"], v0=bare["images"]["x"]))
    assert not rep_from_json(broken).verified


def test_build_standard_with_four_blocks():
    blocks = [Matrix([[1]]), Matrix([[1]]), Matrix([[1]])]
    rep = build_standard(2, 1, 0, (1, 1, 1, 1), blocks)
    assert rep.verified and rep.dim == 4
    assert rep.image("v1").is_zero()
    with pytest.raises(ParamViolation):
        build_standard(2, 1, 0, (1, 1, 1, 1), blocks[:2])


def test_lambda_zero_is_accepted():
    rep = build_R(RepParams(3, 0, 0, 3, 1, 3, [[0], [0], [1]], [[1, 0, 0]]))
    assert rep.verified
    assert build_g(3, 0) is rep.algebra
