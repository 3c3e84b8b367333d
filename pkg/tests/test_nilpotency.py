"""Nilpotency deciders, flags, the plane dichotomy, block flags."""

import pytest

from elemop.errors import ContractError
from elemop.exact import (
    Matrix,
    basis_vector,
    char_poly,
    derive_seed,
    inverse,
    lambda_power,
    random_invertible,
    random_matrix,
    rref,
)
from elemop.nilpotency import (
    Certified,
    Flag,
    NotTriangularizable,
    ProbablyNilpotent,
    Refuted,
    SPECIAL_PLANE_FIRST,
    SPECIAL_PLANE_SECOND,
    SpecialForm,
    Triangularizable,
    all_x_nilpotent,
    block_strict_triangularize,
    classify_nilpotent_2dim_m3,
    gerstenhaber_check,
    graded_product_check,
    is_nilpotent,
    refutes,
    strict_triangularize,
    subspace_all_nilpotent,
    special_plane_member,
    witness_search,
)
from elemop.operators import apply, gram, minimal_length
from elemop.spaces import reduce_basis
from conftest import specimen_form_ii, single_pair, strictly_upper_basis, unit


def special_plane_space():
    return reduce_basis([SPECIAL_PLANE_FIRST, SPECIAL_PLANE_SECOND])


def conjugated_space(space, q):
    q_inv = inverse(q)
    return reduce_basis([q_inv @ m @ q for m in space.basis])


def test_is_nilpotent_examples():
    assert is_nilpotent(Matrix.from_rows([[0, 1], [0, 0]]))
    assert not is_nilpotent(Matrix.identity(2))
    m = Matrix.from_rows([[0, 1, 0], [1, 0, 1], [0, -1, 0]])
    assert (m @ m @ m).is_zero  # oracle
    assert is_nilpotent(m)


def test_subspace_strictly_upper_certified():
    space = reduce_basis(strictly_upper_basis(3))
    report = subspace_all_nilpotent(space)
    assert report.all_nilpotent and report.method == "exact-grid"


def test_subspace_single_projection_refuted():
    report = subspace_all_nilpotent(reduce_basis([unit(2, 0, 0)]))
    assert not report.all_nilpotent
    assert report.counterexample is not None
    assert char_poly(report.counterexample) != lambda_power(2)


def test_subspace_special_plane_certified():
    # Every member has vanishing trace powers; the certificate confirms it
    # and direct cubes give an independent oracle.
    for alpha, beta in [(1, 0), (0, 1), (2, 3), (-1, 5)]:
        member = special_plane_member(alpha, beta)
        assert member.power(3).is_zero
    report = subspace_all_nilpotent(special_plane_space())
    assert report.all_nilpotent and report.method == "exact-grid"


def test_subspace_zero_space():
    report = subspace_all_nilpotent(reduce_basis([], ambient_dim=2))
    assert report.all_nilpotent and report.method == "exact-grid"


def test_subspace_conjugated_triangular_soundness():
    for s in range(30):
        m = 3 + s % 2
        q = random_invertible(m, derive_seed(200, s), 4)
        space = conjugated_space(reduce_basis(strictly_upper_basis(m)), q)
        tri = strict_triangularize(space)
        assert isinstance(tri, Flag)
        report = subspace_all_nilpotent(space)
        assert report.all_nilpotent and report.method == "exact-grid"


def test_gerstenhaber_examples():
    assert gerstenhaber_check(reduce_basis(strictly_upper_basis(3)))
    assert gerstenhaber_check(special_plane_space())


def test_gerstenhaber_rejects_non_nilpotent_input():
    with pytest.raises(ContractError):
        gerstenhaber_check(reduce_basis([unit(2, 0, 0)]))


def test_gerstenhaber_dim_four_candidates_always_refuted():
    # No 4-dimensional all-nilpotent space exists in M_3: every attempt to
    # extend the strictly uppers by an independent matrix is refuted.
    base = strictly_upper_basis(3)
    for s in range(10):
        extra = random_matrix(3, derive_seed(210, s), 4)
        space = reduce_basis(base + [extra])
        if space.dim != 4:
            continue
        report = subspace_all_nilpotent(space)
        assert not report.all_nilpotent
        assert char_poly(report.counterexample) != lambda_power(3)


def test_strict_triangularize_upper_space():
    space = reduce_basis(strictly_upper_basis(3))
    flag = strict_triangularize(space)
    assert isinstance(flag, Flag)
    assert flag.vectors == (basis_vector(3, 0), basis_vector(3, 1), basis_vector(3, 2))


def test_strict_triangularize_special_plane_fails_at_stage_one():
    # Oracle: ker(first) = span{e3}, ker(second) = span{e1}, intersection 0.
    from elemop.exact import kernel_basis

    k1 = kernel_basis(SPECIAL_PLANE_FIRST)
    k2 = kernel_basis(SPECIAL_PLANE_SECOND)
    assert k1 == [basis_vector(3, 2)] and k2 == [basis_vector(3, 0)]
    assert len(rref(k1 + k2)[0]) == 2  # no common direction
    result = strict_triangularize(special_plane_space())
    assert isinstance(result, NotTriangularizable) and result.stage == 1


def test_strict_triangularize_zero_space():
    flag = strict_triangularize(reduce_basis([], ambient_dim=2))
    assert isinstance(flag, Flag)
    assert flag.vectors == (basis_vector(2, 0), basis_vector(2, 1))


def test_flag_invariant_holds_on_output():
    for s in range(10):
        q = random_invertible(3, derive_seed(220, s), 4)
        space = conjugated_space(reduce_basis(strictly_upper_basis(3)), q)
        flag = strict_triangularize(space)
        assert isinstance(flag, Flag)
        prefix = []
        for k, v in enumerate(flag.vectors):
            lower_rank = len(rref(prefix)[0])
            for t in space.basis:
                image = t @ v
                assert len(rref(prefix + [image])[0]) == lower_rank
            prefix.append(v)


def test_classify_plane_triangularizable():
    space = reduce_basis([unit(3, 0, 1), unit(3, 0, 2)])
    outcome = classify_nilpotent_2dim_m3(space)
    assert isinstance(outcome, Triangularizable)


def test_classify_plane_special_family_identity_conjugator():
    outcome = classify_nilpotent_2dim_m3(special_plane_space())
    assert isinstance(outcome, SpecialForm)
    assert outcome.conjugator == Matrix.identity(3)
    assert outcome.first == SPECIAL_PLANE_FIRST
    assert outcome.second == SPECIAL_PLANE_SECOND


def test_classify_plane_recovers_conjugates():
    for s in range(12):
        q = random_invertible(3, derive_seed(230, s), 4)
        space = conjugated_space(special_plane_space(), q)
        outcome = classify_nilpotent_2dim_m3(space)
        assert isinstance(outcome, SpecialForm)
        p, p_inv = outcome.conjugator, inverse(outcome.conjugator)
        assert p_inv @ outcome.first @ p == SPECIAL_PLANE_FIRST
        assert p_inv @ outcome.second @ p == SPECIAL_PLANE_SECOND
        # the certified basis spans the input space
        assert reduce_basis([outcome.first, outcome.second]).dim == 2


def test_classify_plane_contract_errors():
    with pytest.raises(ContractError):
        classify_nilpotent_2dim_m3(reduce_basis(strictly_upper_basis(3)))
    with pytest.raises(ContractError):
        classify_nilpotent_2dim_m3(reduce_basis([unit(3, 0, 0), unit(3, 1, 1)]))


def test_block_flag_on_already_patterned_grid():
    phi = single_pair(2, unit(2, 0, 1), unit(2, 0, 1))  # b a = 0
    p = block_strict_triangularize(gram(phi))
    assert p is not None


def test_block_flag_recovers_scrambled_pattern():
    from elemop.classify import generate
    from elemop.operators import similarity_transform

    for s in range(6):
        phi = generate("i", 3, 4, seed=derive_seed(240, s))
        n, reduced = minimal_length(phi)
        p = block_strict_triangularize(gram(reduced))
        assert p is not None
        g2 = similarity_transform(reduced, p).gram()
        for i in range(n):
            for j in range(i + 1):
                assert g2.block(i, j).is_zero
        result = all_x_nilpotent(phi)
        assert isinstance(result, Certified) and result.exponent == n + 1


def test_block_flag_rejects_specimen_grid():
    # Oracle: stage one needs w with sum_l w_l b_k a_l = 0 for all k; the
    # stacked system for the specimen has trivial kernel.
    from elemop.exact import kernel_basis

    phi = specimen_form_ii()
    g = gram(phi)
    rows = []
    for k in range(3):
        for s in range(3):
            for t in range(3):
                rows.append(tuple(g.block(k, l).entry(s, t) for l in range(3)))
    assert kernel_basis(Matrix(tuple(rows))) == []
    assert block_strict_triangularize(g) is None


def test_all_x_nilpotent_certifies_square_zero_pair():
    phi = single_pair(2, unit(2, 0, 1), unit(2, 0, 1))
    result = all_x_nilpotent(phi)
    assert isinstance(result, Certified)
    assert result.exponent == 2
    for s in range(10):
        x = random_matrix(2, derive_seed(250, s), 8)
        assert apply(phi, x).power(2).is_zero


def test_all_x_nilpotent_refutes_identity_pair():
    eye = Matrix.identity(2)
    result = all_x_nilpotent(single_pair(2, eye, eye))
    assert isinstance(result, Refuted)
    assert char_poly(apply(single_pair(2, eye, eye), result.witness)) != lambda_power(2)


def test_all_x_nilpotent_refutes_near_miss_family():
    from elemop.classify import generate

    phi = generate("remark45", 3, 4, seed=2)
    result = all_x_nilpotent(phi)
    assert isinstance(result, Refuted)
    assert refutes(phi, result.witness)


def test_all_x_nilpotent_sampling_mode_is_pure():
    phi = specimen_form_ii()
    result = all_x_nilpotent(phi, mode="sampling", trials=25)
    assert isinstance(result, ProbablyNilpotent)
    assert result.trials == 25


def test_all_x_nilpotent_grid_mode_certifies_dimension_two():
    phi = single_pair(2, unit(2, 0, 1), unit(2, 0, 1))
    result = all_x_nilpotent(phi, mode="grid")
    assert isinstance(result, Certified) and result.by == "exact-grid"
    eye = Matrix.identity(2)
    result = all_x_nilpotent(single_pair(2, eye, eye), mode="grid")
    assert isinstance(result, Refuted)
    # grid witnesses are integer matrices
    for row in result.witness.entries:
        for c in row:
            assert c.re.denominator == 1 and c.im == 0


def test_witness_search_reverifies():
    eye = Matrix.identity(3)
    found = witness_search(single_pair(3, eye, eye), trials=20, seed=1)
    assert found is not None
    x, trial = found
    assert trial >= 1
    assert refutes(single_pair(3, eye, eye), x)


def test_graded_product_single_part_square_zero():
    phi = single_pair(2, unit(2, 0, 1), unit(2, 0, 1))
    probes = [
        (random_matrix(2, derive_seed(260, 2 * s), 5), random_matrix(2, derive_seed(260, 2 * s + 1), 5))
        for s in range(5)
    ]
    assert graded_product_check([phi], probes).ok


def test_graded_product_pattern_parts():
    from elemop.classify import construct_triangular_rep, generate

    phi = generate("i", 3, 4, seed=31)
    rep = construct_triangular_rep(phi)
    assert rep is not None
    parts = [single_pair(4, u, v) for u, v in zip(rep.u, rep.v)]
    probes = [
        tuple(random_matrix(4, derive_seed(270, 4 * s + k), 4) for k in range(4))
        for s in range(20)
    ]
    report = graded_product_check(parts, probes)
    assert report.ok


def test_graded_product_rejects_identity():
    eye = Matrix.identity(2)
    probes = [(eye, eye)]
    report = graded_product_check([single_pair(2, eye, eye)], probes)
    assert not report.ok and "hypothesis" in report.failure
