"""Staircase classes, CSM cycles and the contraction-deletion machinery.

Everything in the all-flats presentation lives in ``chow.ALL``; flats of the
minors ``M \\ i`` and ``M / i`` are bitsets in the minor's own (relabeled)
ground set, translated through :func:`matroid.drop_mask` / ``lift``.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Optional

from .chow import (
    ALL,
    PROPER,
    ChowElement,
    chow_context,
    is_chain,
    mono_flats,
    normalize,
    pairing_determinant,
    prod,
    product,
)
from .errors import IsColoop, RouteMismatch, UnknownIdentity
from .fan import (
    MinkowskiWeight,
    PLFunction,
    bergman_cones,
    cap_by_degree,
    courant_divisor,
    is_balanced,
    modification_pullback,
    one_top,
    phi_function,
)
from .matroid import contract, delete, drop_mask, elements, is_subset, lift_mask


# ---------------------------------------------------------------------------
# the staircase class


def staircase_factors(M):
    """The linear factors 1 - sum_{rk F >= r} x_F for r = 1..rk(E)."""
    lat = M.lattice
    return [
        ChowElement.one(ALL) - ChowElement.linear(
            {f: 1 for f in lat.nonempty if lat.rank_of[f] >= r}, ALL
        )
        for r in range(1, M.rank_E + 1)
    ]


def _matroid_of(obj):
    return obj.matroid if hasattr(obj, "matroid") else obj


def staircase(obj):
    """st(M) in the all-flats presentation, unnormalized; 0 if M has a loop.

    Accepts a matroid or its Chow context. Monomials of degree above
    rk(E) - 1 and non-chain monomials are dropped.
    """
    M = _matroid_of(obj)
    if M.has_loop():
        return ChowElement.zero(ALL)
    return prod(staircase_factors(M), ALL, M.rank_E - 1)


def staircase_normalized(obj):
    M = _matroid_of(obj)
    if M.has_loop():
        return ChowElement.zero(PROPER)
    return normalize(chow_context(M), staircase(M))


# ---------------------------------------------------------------------------
# coefficients


@dataclass(frozen=True)
class ChainMultiset:
    """Weak chain F_1 <= ... <= F_k of nonempty flats, with their ranks."""

    flats: tuple
    ranks: tuple

    @classmethod
    def from_monomial(cls, M, mono):
        lat = M.lattice
        flats = sorted(
            (f for f, e in mono for _ in range(e)), key=lambda f: (lat.rank_of[f], f)
        )
        return cls(tuple(flats), tuple(lat.rank_of[f] for f in flats))

    def monomial(self):
        acc = {}
        for f in self.flats:
            acc[f] = acc.get(f, 0) + 1
        return tuple(sorted(acc.items()))

    def multiplicity(self, r):
        return self.ranks.count(r)


def coefficient_CF(chain):
    """(-1)^k r_1 (r_2 - 1) ... (r_k - k + 1) / prod_r m(r)!."""
    k = len(chain.ranks)
    num = 1
    for i, r in enumerate(chain.ranks):
        num *= r - i
    den = 1
    for r in set(chain.ranks):
        den *= factorial(chain.multiplicity(r))
    value = Fraction((-1) ** k * num, den)
    if value.denominator != 1:
        raise ArithmeticError(f"non-integral coefficient {value} for ranks {chain.ranks}")
    return int(value)


def expand_staircase_bruteforce(M):
    """Full commutative expansion of the staircase product; chain monomials only.

    No relation and no degree truncation is applied, so every monomial up
    to degree rk(E) appears with its raw coefficient.
    """
    poly = {(): 1}
    for factor in staircase_factors(M):
        nxt = {}
        for m1, c1 in poly.items():
            for m2, c2 in factor.terms.items():
                acc = dict(m1)
                for f, e in m2:
                    acc[f] = acc.get(f, 0) + e
                m = tuple(sorted(acc.items()))
                nxt[m] = nxt.get(m, 0) + c1 * c2
        poly = {m: c for m, c in nxt.items() if c}
    return {m: c for m, c in poly.items() if is_chain(mono_flats(m))}


def chain_multisets(M, max_size):
    """All weak chains of nonempty flats with at most ``max_size`` members."""
    flats = sorted(M.lattice.nonempty, key=lambda f: (M.lattice.rank_of[f], f))
    out = [()]
    frontier = [()]
    for _ in range(max_size):
        nxt = [c + (f,) for c in frontier for f in flats if not c or is_subset(c[-1], f)]
        out.extend(nxt)
        frontier = nxt
    lat = M.lattice
    return [ChainMultiset(c, tuple(lat.rank_of[f] for f in c)) for c in out]


def coefficient_table(M):
    """``monomial -> C_F`` over every chain multiset of size <= rk(E), zeros dropped."""
    table = {}
    for chain in chain_multisets(M, M.rank_E):
        c = coefficient_CF(chain)
        if c:
            table[chain.monomial()] = c
    return table


def rational_product_form(ctx, max_degree=None):
    """prod_F ((1 - sum_{F' >= F} x_F') / (1 - sum_{F' > F} x_F'))^{rk F} as a truncated series.

    Each factor equals 1 - x_F / (1 - A_F) with A_F = sum_{F' > F} x_F', and
    the inverse is the geometric series in A_F up to ``max_degree``
    (default: the top degree of the ring).
    """
    M = ctx.matroid
    N = ctx.d if max_degree is None else max_degree
    lat = M.lattice
    out = ChowElement.one(ALL)
    for f in lat.nonempty:
        above = ChowElement.linear({g: 1 for g in lat.nonempty if g != f and is_subset(f, g)}, ALL)
        series = ChowElement.one(ALL)
        term = ChowElement.one(ALL)
        for _ in range(N):
            term = product(term, above, N)
            if not term:
                break
            series = series + term
        factor = ChowElement.one(ALL) - product(ChowElement.gen(f, ALL), series, N)
        for _ in range(lat.rank_of[f]):
            out = product(out, factor, N)
    return out


# ---------------------------------------------------------------------------
# deletion / contraction


def _require_noncoloop(M, i):
    if M.is_coloop(i):
        raise IsColoop(f"element {i} is a coloop of {M!r}")


def deletion_pullback(M, i, y):
    """delta-bar^*: A*(M \\ i) -> A*(M), y_F -> sum_{F' in L(M), F' - i = F} x_F'."""
    _require_noncoloop(M, i)
    lat = M.lattice
    images = {}
    for g in lat.nonempty:
        base = drop_mask(g, i)
        if base:
            images.setdefault(base, []).append(g)
    presentation = y.presentation
    d = M.rank_E - 1
    out = ChowElement.zero(ALL)
    for m, c in y.terms.items():
        term = ChowElement({(): c}, ALL)
        for f, e in m:
            img = ChowElement.linear({g: 1 for g in images.get(f, [])}, ALL)
            for _ in range(e):
                term = product(term, img, d)
        out = out + term
    if presentation == PROPER and all(f != lat.top for m in out.terms for f, _ in m):
        return ChowElement(out.terms, PROPER)
    return out


def y_element(M, i):
    """y_i = -sum y_F over flats F of M \\ i with F not a flat of M but F + i one."""
    _require_noncoloop(M, i)
    D = delete(M, i)
    lat = M.lattice
    coeffs = {}
    for f in D.lattice.nonempty:
        g = lift_mask(f, i)
        if g not in lat and (g | 1 << i) in lat:
            coeffs[f] = -1
    return ChowElement.linear(coeffs, ALL)


def contraction_embedding(M, i, z):
    """z -> y_i * iota(z), with iota renaming z_F to y_F."""
    _require_noncoloop(M, i)
    D = delete(M, i)
    for m in z.terms:
        for f, _ in m:
            if f not in D.lattice:
                raise ValueError(f"{elements(f)} is a flat of M/{i} but not of M\\{i}")
    iz = ChowElement(dict(z.terms), ALL)
    return product(y_element(M, i), iz, D.rank_E - 1)


def contraction_deletion_rhs(M, i):
    """delta-bar^*(st(M \\ i)) - delta-bar^*(y_i * iota(st(M / i)))."""
    D, C = delete(M, i), contract(M, i)
    first = deletion_pullback(M, i, staircase(D))
    second = deletion_pullback(M, i, contraction_embedding(M, i, staircase(C)))
    return first - second


@dataclass(frozen=True)
class TSUVPartition:
    element: int
    T: frozenset
    S: frozenset
    U: frozenset
    V: frozenset
    rank_of: dict = field(repr=False, compare=False)

    @property
    def U_minus_i(self):
        return frozenset(f & ~(1 << self.element) for f in self.U)

    @property
    def V_minus_i(self):
        return frozenset(f & ~(1 << self.element) for f in self.V)

    def _sum(self, block, r):
        return ChowElement.linear({f: 1 for f in block if self.rank_of[f] == r}, ALL)

    def t(self, r):
        return self._sum(self.T, r)

    def s(self, r):
        return self._sum(self.S, r)

    def u(self, r):
        return self._sum(self.U, r)

    def v(self, r):
        return self._sum(self.V, r)


def tsuv_partition(M, i):
    """Split the nonempty flats of M by: i in F? then F + i (or F - i) a flat?"""
    lat = M.lattice
    bit = 1 << i
    T, S, U, V = set(), set(), set(), set()
    for f in lat.nonempty:
        if not f & bit:
            (S if (f | bit) in lat else T).add(f)
        else:
            rest = f & ~bit
            (U if rest == 0 or rest in lat else V).add(f)
    return TSUVPartition(i, frozenset(T), frozenset(S), frozenset(U), frozenset(V), lat.rank_of)


# ---------------------------------------------------------------------------
# CSM cycles


def _zero_cycle(M):
    return [MinkowskiWeight(k, {}) for k in range(max(M.rank_E, 1))]


def _csm_degree_route(M):
    ctx = chow_context(M)
    st = staircase(M)
    return [cap_by_degree(ctx, st.homogeneous(ctx.d - k), j=ctx.d - k) for k in range(ctx.d + 1)]


def staircase_pl_functions(M):
    """PL functions of sum_{rk F >= r} x_F (x_E included), r = 1..rk(E)."""
    lat = M.lattice
    return [
        PLFunction({f: 1 for f in lat.proper_nonempty if lat.rank_of[f] >= r}, 1)
        for r in range(1, M.rank_E + 1)
    ]


def _csm_divisor_route(M):
    d = M.rank_E - 1
    cycle = {d: one_top(M)}
    funcs = staircase_pl_functions(M)
    for psi in reversed(funcs):
        nxt = dict(cycle)
        for k, w in cycle.items():
            if k >= 1:
                nxt[k - 1] = nxt.get(k - 1, MinkowskiWeight(k - 1, {})) - courant_divisor(M, w, psi)
        cycle = nxt
    return [cycle.get(k, MinkowskiWeight(k, {})) for k in range(d + 1)]


def csm_cycle(M, route="degree"):
    """CSM weights indexed by dimension 0..d, by the chosen route ("degree", "divisor", "both")."""
    if route not in ("degree", "divisor", "both"):
        raise ValueError(f"unknown route {route!r}")
    if M.has_loop():
        return _zero_cycle(M)
    if route == "degree":
        return _csm_degree_route(M)
    if route == "divisor":
        return _csm_divisor_route(M)
    a, b = _csm_degree_route(M), _csm_divisor_route(M)
    for k, (wa, wb) in enumerate(zip(a, b)):
        if wa != wb:
            diff = (wa - wb).sorted_items()
            raise RouteMismatch(f"routes disagree in dimension {k}: first cone {diff[:1]}")
    return a


# ---------------------------------------------------------------------------
# verification


IDENTITIES = (
    "cd-theorem-4.1",
    "tsuv-vanishing",
    "phi-divisor",
    "pullback-lemma-4.4",
    "coefficients-3.1",
    "route-equivalence",
    "duality",
)
ELEMENTWISE = {"cd-theorem-4.1", "tsuv-vanishing", "phi-divisor", "pullback-lemma-4.4"}
NEEDS_NONCOLOOP = {"cd-theorem-4.1", "phi-divisor", "pullback-lemma-4.4"}


@dataclass
class Verification:
    matroid: Optional[str]
    identity: str
    element: Optional[int]
    result: str
    witness: Optional[str] = None

    def to_json(self):
        out = {
            "matroid": self.matroid,
            "identity": self.identity,
            "element": self.element,
            "result": self.result,
        }
        if self.witness is not None:
            out["witness"] = self.witness
        return out


def _first_difference(a, b):
    keys = sorted(set(a.terms) | set(b.terms))
    for m in keys:
        if a.terms.get(m, 0) != b.terms.get(m, 0):
            return m, a.terms.get(m, 0), b.terms.get(m, 0)
    return None


def _check_cd(M, i):
    ctx = chow_context(M)
    lhs = normalize(ctx, staircase(M))
    rhs = normalize(ctx, contraction_deletion_rhs(M, i))
    diff = _first_difference(lhs, rhs)
    return diff is None, None if diff is None else f"monomial {diff[0]}: {diff[1]} != {diff[2]}"


def _check_tsuv(M, i):
    ctx = chow_context(M)
    p = tsuv_partition(M, i)
    top = M.rank_E
    ranks = range(1, top + 1)
    checks = [("t", j, "u", l) for j in ranks for l in ranks]
    checks += [("u", k, "s", l) for k in ranks for l in ranks if k <= l]
    checks += [("u", k, "v", l) for k in ranks for l in ranks if l < k]
    for a, ra, b, rb in checks:
        prod_ab = product(getattr(p, a)(ra), getattr(p, b)(rb))
        if normalize(ctx, prod_ab):
            return False, f"{a}_{ra} * {b}_{rb} != 0"
    return True, None


def _check_phi(M, i):
    D, C = delete(M, i), contract(M, i)
    div = courant_divisor(D, one_top(D), phi_function(M, i))
    if C.has_loop():
        expected = MinkowskiWeight(div.dim, {})
    else:
        expected = MinkowskiWeight(div.dim, {c: 1 for c in bergman_cones(C, C.rank_E - 1)})
    if div == expected:
        return True, None
    diff = (div - expected).sorted_items()
    return False, f"cone {diff[0][0]} off by {diff[0][1]}"


def _check_pullback(M, i):
    D = delete(M, i)
    ctx_m, ctx_d = chow_context(M), chow_context(D)
    tests = [ChowElement({b: 1}, PROPER) for b in ctx_d.basis[1]] if ctx_d.d >= 1 else []
    st = staircase(D)
    tests += [st.homogeneous(k) for k in range(ctx_d.d + 1)]
    for y in tests:
        degs = y.degrees()
        if not degs:
            continue
        j = degs[0]
        lhs = cap_by_degree(ctx_m, deletion_pullback(M, i, y), j=j)
        rhs = modification_pullback(M, i, cap_by_degree(ctx_d, y, j=j))
        if lhs != rhs:
            return False, f"class {y.format()}"
    return True, None


def _check_coefficients(M):
    brute = expand_staircase_bruteforce(M)
    table = coefficient_table(M)
    for m in sorted(set(brute) | set(table)):
        if brute.get(m, 0) != table.get(m, 0):
            return False, f"monomial {m}: expansion {brute.get(m, 0)} vs formula {table.get(m, 0)}"
    return True, None


def _check_routes(M):
    a, b = csm_cycle(M, "degree"), csm_cycle(M, "divisor")
    for k, (wa, wb) in enumerate(zip(a, b)):
        if wa != wb:
            return False, f"dimension {k}"
    return True, None


def _check_duality(M):
    ctx = chow_context(M)
    for k in range(ctx.d + 1):
        det = pairing_determinant(ctx, k)
        if det not in (1, -1):
            return False, f"pairing in degree {k} has determinant {det}"
    for w in [one_top(M)] + csm_cycle(M):
        ok, tau = is_balanced(M, w)
        if not ok:
            return False, f"weight of dimension {w.dim} unbalanced at {tau}"
    return True, None


def verify_identity(name, M, i=None):
    """Check one identity exactly; returns a :class:`Verification`.

    Raises :class:`IsColoop` when ``i`` must be a non-coloop and is not, and
    :class:`UnknownIdentity` for names outside :data:`IDENTITIES`.
    """
    if name not in IDENTITIES:
        raise UnknownIdentity(name)
    if name in ELEMENTWISE and i is None:
        raise ValueError(f"{name} needs an element")
    label = M.name
    if M.has_loop():
        return Verification(label, name, i, "n/a", "matroid has a loop; A*(M) is not built")
    if name in NEEDS_NONCOLOOP:
        _require_noncoloop(M, i)
    if name == "cd-theorem-4.1":
        ok, witness = _check_cd(M, i)
    elif name == "tsuv-vanishing":
        ok, witness = _check_tsuv(M, i)
    elif name == "phi-divisor":
        ok, witness = _check_phi(M, i)
    elif name == "pullback-lemma-4.4":
        ok, witness = _check_pullback(M, i)
    elif name == "coefficients-3.1":
        ok, witness = _check_coefficients(M)
    elif name == "route-equivalence":
        ok, witness = _check_routes(M)
    else:
        ok, witness = _check_duality(M)
    return Verification(label, name, i if name in ELEMENTWISE else None, "pass" if ok else "fail", witness)


def run_verification(M, identities=IDENTITIES, elements_=None):
    """Every requested identity over every requested element; coloops give "n/a"."""
    out = []
    for name in identities:
        if name in ELEMENTWISE:
            for i in (range(M.n) if elements_ is None else elements_):
                try:
                    out.append(verify_identity(name, M, i))
                except IsColoop:
                    out.append(Verification(M.name, name, i, "n/a", f"{i} is a coloop"))
        else:
            out.append(verify_identity(name, M))
    return out
