import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from matroid_csm.chow import ALL, ChowElement, chow_context, degree, normalize, product
from matroid_csm.csm import deletion_pullback, staircase, y_element
from matroid_csm.errors import HasLoop, IsColoop, NonUniqueLift, UnbalancedInput
from matroid_csm.fan import (
    MinkowskiWeight,
    PLFunction,
    balanced_completion,
    bergman_cones,
    cap_by_degree,
    courant_divisor,
    is_balanced,
    lattice_point,
    modification_pullback,
    one_top,
    phi_function,
    u_flats,
)
from matroid_csm.matroid import contract, delete

from conftest import mask, uniform


def test_bergman_cones(m_ex):
    assert bergman_cones(uniform(2, 3), 1) == [(1,), (2,), (4,)]
    top = bergman_cones(m_ex, 2)
    assert len(top) == 9
    assert sum(1 for c in top if c[0] == mask(0)) == 3
    for e in (1, 2, 3):
        assert sum(1 for c in top if c[0] == mask(e)) == 2
    assert bergman_cones(m_ex, 0) == [()]


def test_bergman_cones_loop(corpus):
    with pytest.raises(HasLoop):
        bergman_cones(corpus["loop"], 0)


def test_lattice_point_quotient():
    assert lattice_point(3, mask(0, 1)) == (1, 1)
    assert lattice_point(3, mask(0, 2)) == (0, -1)
    assert lattice_point(3, mask(0, 1, 2)) == (0, 0)


def test_balancing_examples(m_ex):
    u = uniform(2, 3)
    assert is_balanced(u, MinkowskiWeight(1, {(1,): 1, (2,): 1, (4,): 1}))[0]
    assert not is_balanced(u, MinkowskiWeight(1, {(1,): 1, (2,): 1}))[0]
    ok, _ = is_balanced(m_ex, one_top(m_ex))
    assert ok and len(one_top(m_ex).weights) == 9
    # singleton < pair: 3 * 2 chains, one per permutation of {0,1,2}
    assert len(one_top(uniform(3, 3)).weights) == 6


def test_courant_divisor_examples(m_ex):
    u = uniform(2, 3)
    assert courant_divisor(u, one_top(u), PLFunction.courant(mask(0))) == MinkowskiWeight(0, {(): 1})
    assert courant_divisor(m_ex, one_top(m_ex), PLFunction({})) == MinkowskiWeight(1, {})
    with pytest.raises(UnbalancedInput):
        courant_divisor(u, MinkowskiWeight(1, {(1,): 1}), PLFunction.courant(mask(0)))


def test_phi_examples(m_ex):
    phi = phi_function(m_ex, 3)
    D = delete(m_ex, 3)
    assert phi.ray_values[mask(1, 2)] == -1
    for f in (mask(0), mask(1), mask(2), mask(0, 1), mask(0, 2)):
        assert phi.ray_values[f] == 0
    assert phi({}, 0) == 0
    # e_{E-i} is the lineality direction; phi drops by one there
    assert phi.lineality == -1
    assert D.full not in phi.ray_values
    phi_u = phi_function(uniform(2, 3), 0)
    assert all(v == 0 for v in phi_u.ray_values.values())
    with pytest.raises(IsColoop):
        phi_function(m_ex, 0)


def test_phi_divisor_is_contraction(m_ex):
    D, C = delete(m_ex, 3), contract(m_ex, 3)
    div = courant_divisor(D, one_top(D), phi_function(m_ex, 3))
    assert div == MinkowskiWeight(1, {c: 1 for c in bergman_cones(C, 1)})


def test_cap_examples(m_ex):
    u = uniform(2, 3)
    cu = chow_context(u)
    st1 = staircase(u).homogeneous(1)
    assert cap_by_degree(cu, st1) == MinkowskiWeight(0, {(): -1})
    for M in (u, m_ex, uniform(3, 4)):
        ctx = chow_context(M)
        assert cap_by_degree(ctx, ChowElement.one()) == one_top(M)
    ctx = chow_context(m_ex)
    w = cap_by_degree(ctx, ChowElement.gen(mask(0)))
    for (f,), v in w.weights.items():
        assert v == degree(ctx, normalize(ctx, product(ChowElement.gen(mask(0)), ChowElement.gen(f))))


def test_pullback_examples(m_ex):
    D = delete(m_ex, 3)
    assert modification_pullback(m_ex, 3, one_top(D)) == one_top(m_ex)
    cd = chow_context(D)
    y = y_element(m_ex, 3)
    lhs = cap_by_degree(chow_context(m_ex), deletion_pullback(m_ex, 3, y))
    sum_u = ChowElement.linear({f: 1 for f in u_flats(m_ex, 3)}, ALL)
    assert lhs == cap_by_degree(chow_context(m_ex), sum_u)
    assert modification_pullback(m_ex, 3, cap_by_degree(cd, y)) == lhs
    u = uniform(2, 3)
    assert modification_pullback(u, 0, MinkowskiWeight(1, {})) == MinkowskiWeight(1, {})


def test_balanced_completion_agrees_or_is_not_unique(corpus):
    for name in ("example-2.4", "k4", "u34"):
        M = corpus[name]
        for i in range(M.n):
            if M.is_coloop(i):
                continue
            D = delete(M, i)
            ctx = chow_context(D)
            for k in range(ctx.d + 1):
                for b in ctx.basis[k]:
                    w = cap_by_degree(ctx, ChowElement({b: 1}))
                    assert balanced_completion(M, i, w) == modification_pullback(M, i, w)
    u45 = uniform(4, 5)
    w = cap_by_degree(chow_context(delete(u45, 0)), ChowElement.gen(1))
    with pytest.raises(NonUniqueLift):
        balanced_completion(u45, 0, w)
    assert is_balanced(u45, modification_pullback(u45, 0, w))[0]


def test_outputs_balanced_and_json(corpus):
    for M in corpus.values():
        if M.has_loop():
            continue
        ctx = chow_context(M)
        for k in range(ctx.d + 1):
            for b in ctx.basis[k]:
                w = cap_by_degree(ctx, ChowElement({b: 1}))
                assert is_balanced(M, w)[0]
                assert MinkowskiWeight.from_json(w.to_json()) == w


def _layer_constant_oracle(M, w):
    """Balancing checked by hand: sum of w(sigma) e_G must be constant on each layer of tau."""
    if w.dim == 0:
        return True
    for tau in bergman_cones(M, w.dim - 1):
        vec = [0] * M.n
        for c, v in w.weights.items():
            if set(tau) <= set(c):
                (g,) = set(c) - set(tau)
                for e in range(M.n):
                    vec[e] += v * (g >> e & 1)
        prev = 0
        for f in list(tau) + [M.full]:
            layer = [vec[e] for e in range(M.n) if f >> e & 1 and not prev >> e & 1]
            if len(set(layer)) > 1:
                return False
            prev = f
    return True


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(["u33", "u34", "example-2.4", "k4"]), st.data())
def test_is_balanced_matches_layer_oracle(name, data):
    from matroid_csm.corpus import BUILTINS

    M = BUILTINS[name].matroid()
    k = data.draw(st.integers(1, M.rank_E - 1))
    cones = bergman_cones(M, k)
    w = MinkowskiWeight(k, {c: data.draw(st.integers(-1, 1)) for c in cones})
    assert is_balanced(M, w)[0] == _layer_constant_oracle(M, w)


@settings(max_examples=20, deadline=None)
@given(st.data())
def test_courant_divisor_bilinear(data):
    M = uniform(3, 4)
    ctx = chow_context(M)
    flats = ctx.flats
    psi1 = PLFunction({f: data.draw(st.integers(-2, 2)) for f in flats}, data.draw(st.integers(-1, 1)))
    psi2 = PLFunction({f: data.draw(st.integers(-2, 2)) for f in flats}, data.draw(st.integers(-1, 1)))
    w0 = one_top(M)
    assert courant_divisor(M, w0, psi1 + psi2) == courant_divisor(M, w0, psi1) + courant_divisor(M, w0, psi2)
    w1 = cap_by_degree(ctx, ChowElement.gen(flats[0]))
    w2 = cap_by_degree(ctx, ChowElement.gen(flats[-1]))
    assert courant_divisor(M, w1 + w2, psi1) == courant_divisor(M, w1, psi1) + courant_divisor(M, w2, psi1)
