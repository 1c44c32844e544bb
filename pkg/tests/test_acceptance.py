"""Acceptance criteria 1-12, one test each.

A PASS/FAIL line per criterion is printed in the pytest terminal summary
(see ``conftest.pytest_terminal_summary``) and when this file is run as a
script. Criterion 1 asks for st(example-2.4) = 1 - x_{123} - x_{0123}; the
linear relations force the opposite sign in degree 1, so that check is an
expected failure and reports FAIL.
"""
import os
import time

import pytest

from matroid_csm.chow import ALL, ChowElement, chow_context, equal_in_ring, normalize, pairing_determinant, product
from matroid_csm.corpus import BUILTINS, builtin_names
from matroid_csm.csm import (
    chain_multisets,
    coefficient_CF,
    csm_cycle,
    expand_staircase_bruteforce,
    staircase,
    staircase_factors,
    verify_identity,
)
from matroid_csm.errors import IsColoop
from matroid_csm.fan import MinkowskiWeight, is_balanced, one_top

RESULTS = {}

TITLES = {
    1: "example-2.4 staircase equals 1 - x_{123} - x_{0123}",
    2: "u33 staircase equals the three-factor display",
    3: "brute-force coefficients equal C_F on every corpus matroid",
    4: "contraction-deletion for every corpus matroid and non-coloop element",
    5: "degree and divisor routes agree cone by cone",
    6: "div(phi) on 1_{M\\i} is exactly B(M/i)",
    7: "pullback of caps equals cap of pullbacks",
    8: "pairing determinants are +-1 on the desk-scale matroids",
    9: "1_M and every csm weight are balanced",
    10: "t/s/u/v vanishing identities",
    11: "loop and isthmus base cases",
    12: "scope of the reproduction is documented",
}

BUDGET = {1: 1, 2: 1, 3: 5, 4: 10, 5: 10}


def _corpus():
    return [BUILTINS[n].matroid() for n in builtin_names()]


def _loopless():
    return [M for M in _corpus() if not M.has_loop()]


def _elementwise(identity):
    for M in _loopless():
        for i in range(M.n):
            try:
                r = verify_identity(identity, M, i)
            except IsColoop:
                continue
            assert r.result == "pass", r.to_json()


def _gen(*elems):
    return ChowElement.gen(sum(1 << e for e in elems), ALL)


def c1():
    M = BUILTINS["example-2.4"].matroid()
    ctx = chow_context(M)
    target = ChowElement.one(ALL) - _gen(1, 2, 3) - _gen(0, 1, 2, 3)
    got = normalize(ctx, staircase(M))
    assert equal_in_ring(ctx, staircase(M), target), (
        f"normal form {got.format()} equals 1 + x_{{123}} + x_{{0123}}, not the target"
    )


def c2():
    M = BUILTINS["u33"].matroid()
    s, p, E = [1, 2, 4], [3, 5, 6], 7

    def factor(flats):
        return ChowElement.one(ALL) - ChowElement.linear({f: 1 for f in flats}, ALL)

    display = [factor(s + p + [E]), factor(p + [E]), factor([E])]
    assert staircase_factors(M) == display
    assert staircase(M) == product(product(display[0], display[1], 2), display[2], 2)
    # and term by term against the full commutative expansion
    full = {}
    for m, c in staircase(M).terms.items():
        full[m] = c
    brute = expand_staircase_bruteforce(M)
    assert {m: c for m, c in brute.items() if sum(e for _, e in m) <= 2} == full


def c3():
    for M in _loopless():
        brute = expand_staircase_bruteforce(M)
        for chain in chain_multisets(M, M.rank_E):
            assert brute.get(chain.monomial(), 0) == coefficient_CF(chain), (M.name, chain)


def c4():
    _elementwise("cd-theorem-4.1")


def c5():
    for M in _corpus():
        assert csm_cycle(M, "degree") == csm_cycle(M, "divisor"), M.name


def c6():
    _elementwise("phi-divisor")


def c7():
    _elementwise("pullback-lemma-4.4")


def c8():
    for name in ("u23", "u33", "u24", "example-2.4", "k4"):
        ctx = chow_context(BUILTINS[name].matroid())
        for k in range(ctx.d + 1):
            assert pairing_determinant(ctx, k) in (1, -1), (name, k)


def c9():
    for M in _loopless():
        assert is_balanced(M, one_top(M))[0]
        for w in csm_cycle(M):
            assert is_balanced(M, w)[0], (M.name, w.dim)


def c10():
    _elementwise("tsuv-vanishing")


def c11():
    loop = BUILTINS["loop"].matroid()
    assert staircase(loop) == 0
    assert all(not w.weights for w in csm_cycle(loop))
    isthmus = BUILTINS["u11"].matroid()
    assert csm_cycle(isthmus) == [one_top(isthmus)] == [MinkowskiWeight(0, {(): 1})]


def c12():
    readme = os.path.join(os.path.dirname(__file__), os.pardir, "README.md")
    with open(readme, encoding="utf-8") as fh:
        text = fh.read().lower()
    assert "out of scope" in text
    for phrase in ("wonderful", "tautological", "externally defined"):
        assert phrase in text, phrase


CHECKS = {1: c1, 2: c2, 3: c3, 4: c4, 5: c5, 6: c6, 7: c7, 8: c8, 9: c9, 10: c10, 11: c11, 12: c12}


def run_criterion(n):
    start = time.perf_counter()
    try:
        CHECKS[n]()
        ok, note = True, ""
    except AssertionError as exc:
        ok, note = False, str(exc).splitlines()[0] if str(exc) else "assertion failed"
    elapsed = time.perf_counter() - start
    if ok and n in BUDGET and elapsed > BUDGET[n]:
        ok, note = False, f"took {elapsed:.2f}s, budget {BUDGET[n]}s"
    RESULTS[n] = (ok, elapsed, note)
    return ok, note


def format_line(n):
    ok, elapsed, note = RESULTS[n]
    line = f"criterion {n:2d} {'PASS' if ok else 'FAIL'} ({elapsed:.2f}s) {TITLES[n]}"
    return line + (f" -- {note}" if note else "")


@pytest.mark.parametrize(
    "n",
    [
        pytest.param(
            1,
            marks=pytest.mark.xfail(
                strict=True,
                reason="J_M forces st(example-2.4) = 1 + x_{123} + x_{0123}; the target has the wrong sign",
            ),
        ),
        *range(2, 13),
    ],
)
def test_criterion(n):
    ok, note = run_criterion(n)
    assert ok, note


if __name__ == "__main__":
    for n in CHECKS:
        run_criterion(n)
        print(format_line(n))
