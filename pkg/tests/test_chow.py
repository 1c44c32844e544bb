import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from matroid_csm.chow import (
    ALL,
    PROPER,
    ChowElement,
    chow_context,
    degree,
    equal_in_ring,
    format_monomial,
    multiply,
    normalize,
    pairing_determinant,
    pairing_matrix,
    product,
    restrict_to_flag,
    to_all_flats_presentation,
    to_proper_presentation,
    top_substitute,
)
from matroid_csm.errors import DegreeOverflow, FlagNotMaximal, HasLoop, WrongDegree
from matroid_csm.matroid import is_subset

from conftest import mask, uniform


def fy_graded_ranks(M):
    """Count Feichtner-Yuzvinsky basis monomials by degree.

    Chains 0 < F_1 < ... < F_k (F_k may be E) with exponents
    1 <= a_j <= rk F_j - rk F_{j-1} - 1.
    """
    lat = M.lattice
    d = M.rank_E - 1
    counts = [0] * (d + 1)

    def walk(prev, deg):
        counts[deg] += 1
        for f in lat.nonempty:
            if f != prev and is_subset(prev, f):
                gap = lat.rank_of[f] - lat.rank_of[prev] - 1
                for a in range(1, gap + 1):
                    if deg + a <= d:
                        walk(f, deg + a)

    walk(lat.bottom, 0)
    return tuple(counts)


def x(f, presentation=PROPER):
    return ChowElement.gen(f, presentation)


def test_graded_rank_examples(m_ex):
    assert chow_context(uniform(2, 3)).graded_ranks == (1, 1)
    assert chow_context(uniform(3, 3)).graded_ranks == (1, 4, 1)
    assert chow_context(m_ex).graded_ranks == (1, 5, 1)


def test_graded_ranks_match_fy_oracle(corpus):
    for M in corpus.values():
        if M.has_loop():
            continue
        ranks = chow_context(M).graded_ranks
        assert ranks == fy_graded_ranks(M), M.name
        assert ranks == ranks[::-1]


def test_loop_rejected(corpus):
    with pytest.raises(HasLoop):
        chow_context(corpus["loop"])


def test_presentations(m_ex):
    ctx = chow_context(uniform(2, 3))
    assert top_substitute(ctx) == -x(mask(0))
    assert to_proper_presentation(ctx, x(ctx.top, ALL)) == -x(mask(0))
    assert to_proper_presentation(ctx, ChowElement.one(ALL)) == ChowElement.one(PROPER)
    cex = chow_context(m_ex)
    a = x(mask(1, 2, 3))
    assert to_proper_presentation(cex, to_all_flats_presentation(cex, a)) == a


def test_multiply_examples(m_ex):
    ctx = chow_context(m_ex)
    assert multiply(ctx, x(mask(1)), x(mask(2))) == 0
    assert multiply(ctx, x(mask(0)), x(mask(0, 1))).terms == {((mask(0), 1), (mask(0, 1), 1)): 1}
    lhs = multiply(ctx, x(mask(0)) + x(mask(1)), x(mask(1, 2, 3)))
    assert lhs == ChowElement({((mask(1), 1), (mask(1, 2, 3), 1)): 1})
    cube = product(product(x(mask(0)), x(mask(0))), x(mask(0)))
    assert multiply(ctx, cube, ChowElement.one()) == 0
    with pytest.raises(DegreeOverflow):
        multiply(ctx, cube, ChowElement.one(), strict=True)


def test_normalize_examples(m_ex):
    ctx = chow_context(m_ex)
    j0 = ChowElement.linear({f: 1 for f in ctx.flats if f & 1})
    j1 = ChowElement.linear({f: 1 for f in ctx.flats if f & 2})
    assert normalize(ctx, j0 - j1) == 0
    assert normalize(ctx, x(mask(0)) * x(mask(1))) == 0


def test_relations_vanish(corpus):
    for M in corpus.values():
        if M.has_loop():
            continue
        ctx = chow_context(M)
        for i in range(M.n):
            ji = ChowElement.linear({f: 1 for f in ctx.flats if f >> i & 1})
            j0 = ChowElement.linear({f: 1 for f in ctx.flats if f & 1})
            assert normalize(ctx, ji - j0) == 0
        if ctx.d >= 2:
            for f in ctx.flats:
                for g in ctx.flats:
                    if not (is_subset(f, g) or is_subset(g, f)):
                        assert normalize(ctx, product(x(f), x(g))) == 0


def test_normal_form_basis_is_projection(corpus):
    for M in corpus.values():
        if M.has_loop():
            continue
        ctx = chow_context(M)
        for k in range(ctx.d + 1):
            for b in ctx.basis[k]:
                e = ChowElement({b: 1})
                assert normalize(ctx, e) == e


def test_degree_examples(m_ex):
    ctx = chow_context(m_ex)
    assert degree(ctx, x(mask(0)) * x(mask(0, 1))) == 1
    assert degree(ctx, x(mask(0)) * x(mask(0, 2)) - x(mask(3)) * x(mask(1, 2, 3))) == 0
    assert degree(chow_context(uniform(2, 3)), x(mask(0))) == 1
    with pytest.raises(WrongDegree):
        degree(ctx, x(mask(0)))


def test_full_flags_have_degree_one(corpus):
    for M in corpus.values():
        if M.has_loop():
            continue
        ctx = chow_context(M)
        for flag in ctx.full_flags():
            mono = ChowElement({tuple((f, 1) for f in flag): 1})
            assert degree(ctx, mono) == 1


def test_pairing(m_ex):
    assert pairing_matrix(chow_context(uniform(2, 3)), 0) == [[1]]
    ctx33 = chow_context(uniform(3, 3))
    mat = pairing_matrix(ctx33, 1)
    assert len(mat) == 4 and all(len(r) == 4 for r in mat)
    assert pairing_determinant(ctx33, 1) in (1, -1)
    assert pairing_matrix(chow_context(m_ex), 0) == [[1]]


def test_restrict_to_flag(m_ex):
    ctx = chow_context(m_ex)
    flag = (mask(0), mask(0, 1), mask(0, 1, 2, 3))
    # formal product of the three staircase factors
    lat = m_ex.lattice
    factors = [
        ChowElement.one(ALL) - ChowElement.linear({f: 1 for f in lat.nonempty if lat.rank_of[f] >= r}, ALL)
        for r in (1, 2, 3)
    ]
    full = factors[0] * factors[1] * factors[2]
    expected = (
        (ChowElement.one(ALL) - ChowElement.linear({flag[0]: 1, flag[1]: 1, flag[2]: 1}, ALL))
        * (ChowElement.one(ALL) - ChowElement.linear({flag[1]: 1, flag[2]: 1}, ALL))
        * (ChowElement.one(ALL) - ChowElement.gen(flag[2], ALL))
    )
    assert restrict_to_flag(ctx, full, flag) == expected
    assert restrict_to_flag(ctx, x(mask(0), ALL), flag) == x(mask(0), ALL)
    assert restrict_to_flag(ctx, x(mask(2), ALL), flag) == 0
    with pytest.raises(FlagNotMaximal):
        restrict_to_flag(ctx, full, (mask(0), mask(0, 1, 2, 3)))


def test_format_and_json(m_ex):
    e = ChowElement.one() - x(mask(1, 2, 3)) + 2 * x(mask(0)) * x(mask(0, 1))
    assert e.format() == "1 - x_{123} + 2x_0x_{01}"
    assert ChowElement.from_json(e.to_json()) == e
    assert format_monomial(((mask(0), 2),)) == "x_0^2"


@settings(max_examples=25, deadline=None)
@given(st.data())
def test_ring_laws(data):
    M = uniform(3, 4)
    ctx = chow_context(M)

    def rand_linear():
        coeffs = {f: data.draw(st.integers(-2, 2)) for f in ctx.flats}
        return ChowElement.linear(coeffs)

    a, b, c = rand_linear(), rand_linear(), rand_linear()
    ab = multiply(ctx, a, b)
    assert equal_in_ring(ctx, ab, multiply(ctx, b, a))
    assert equal_in_ring(ctx, multiply(ctx, ab, c), multiply(ctx, a, multiply(ctx, b, c)))
    n = normalize(ctx, ab + c)
    assert normalize(ctx, n) == n
    assert n == normalize(ctx, ab) + normalize(ctx, c)
