"""Chow rings of loopless matroids with exact normal forms.

Elements are integer combinations of monomials in generators ``x_F``. A
monomial is a tuple of ``(flat bitset, exponent)`` pairs sorted by bitset.
Two presentations are supported: ``"proper"`` uses only proper nonempty
flats, ``"all"`` adds the top flat ``E`` as a generator, tied to the others
by ``x_E = -sum_{F ni i, F proper} x_F``. Normal forms are computed in the
proper presentation by exact integer row reduction of the linear relations,
after monomials whose support is not a chain have been discarded.
"""
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np

from .errors import (
    DegreeOverflow,
    FlagNotMaximal,
    HasLoop,
    InconsistentDegreeMap,
    WrongDegree,
)
from .exact import bareiss_det, unit_pivot_reduce
from .matroid import comparable, elements, is_subset

PROPER = "proper"
ALL = "all"


# ---------------------------------------------------------------------------
# monomials


def mono_degree(mono):
    return sum(e for _, e in mono)


def mono_flats(mono):
    return [f for f, _ in mono]


def is_chain(masks):
    ordered = sorted(masks, key=lambda f: (bin(f).count("1"), f))
    return all(is_subset(a, b) for a, b in zip(ordered, ordered[1:]))


def mono_mul(m1, m2):
    if not m1:
        return m2
    if not m2:
        return m1
    acc = dict(m1)
    for f, e in m2:
        acc[f] = acc.get(f, 0) + e
    return tuple(sorted(acc.items()))


def mono_from_flats(flats):
    acc = {}
    for f in flats:
        acc[f] = acc.get(f, 0) + 1
    return tuple(sorted(acc.items()))


def format_flat(mask):
    elems = elements(mask)
    if any(e > 9 for e in elems):
        label = ",".join(str(e) for e in elems)
    else:
        label = "".join(str(e) for e in elems)
    return f"x_{label}" if len(label) == 1 else f"x_{{{label}}}"


def format_monomial(mono):
    parts = []
    for f, e in mono:
        parts.append(format_flat(f) + (f"^{e}" if e > 1 else ""))
    return "".join(parts) if parts else "1"


# ---------------------------------------------------------------------------
# elements


@dataclass(frozen=True, eq=False)
class ChowElement:
    """Integer combination of chain monomials.

    Arithmetic is formal: ``*`` drops non-chain monomials but applies no
    other relation. Use :func:`normalize` for canonical representatives.
    """

    terms: dict
    presentation: str = PROPER

    def __post_init__(self):
        clean = {m: c for m, c in self.terms.items() if c}
        object.__setattr__(self, "terms", clean)

    @classmethod
    def one(cls, presentation=PROPER):
        return cls({(): 1}, presentation)

    @classmethod
    def zero(cls, presentation=PROPER):
        return cls({}, presentation)

    @classmethod
    def gen(cls, flat, presentation=PROPER, coeff=1):
        return cls({((flat, 1),): coeff}, presentation)

    @classmethod
    def linear(cls, coeffs, presentation=PROPER):
        """Degree-1 element from a ``flat -> coefficient`` map."""
        return cls({((f, 1),): c for f, c in coeffs.items()}, presentation)

    def _check(self, other):
        if not isinstance(other, ChowElement):
            return NotImplemented
        if other.presentation != self.presentation:
            raise ValueError(
                f"presentation mismatch: {self.presentation} vs {other.presentation}"
            )
        return other

    def __add__(self, other):
        if isinstance(other, int):
            other = ChowElement({(): other}, self.presentation)
        other = self._check(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return ChowElement(out, self.presentation)

    __radd__ = __add__

    def __neg__(self):
        return ChowElement({m: -c for m, c in self.terms.items()}, self.presentation)

    def __sub__(self, other):
        if isinstance(other, int):
            return self + (-other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return ChowElement({m: c * other for m, c in self.terms.items()}, self.presentation)
        other = self._check(other)
        if other is NotImplemented:
            return other
        return product(self, other)

    def __rmul__(self, other):
        if isinstance(other, int):
            return self * other
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, int):
            other = ChowElement({(): other}, self.presentation)
        if not isinstance(other, ChowElement):
            return NotImplemented
        return self.presentation == other.presentation and self.terms == other.terms

    def __hash__(self):
        return hash((self.presentation, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        return f"ChowElement({self.format()!r}, {self.presentation})"

    def degrees(self):
        return sorted({mono_degree(m) for m in self.terms})

    def homogeneous(self, k):
        return ChowElement(
            {m: c for m, c in self.terms.items() if mono_degree(m) == k}, self.presentation
        )

    def truncate(self, max_degree):
        return ChowElement(
            {m: c for m, c in self.terms.items() if mono_degree(m) <= max_degree},
            self.presentation,
        )

    def map_flats(self, fn, presentation=None):
        """Substitute ``x_F -> x_{fn(F)}`` monomial by monomial."""
        out = {}
        for m, c in self.terms.items():
            nm = mono_from_flats([fn(f) for f, e in m for _ in range(e)])
            out[nm] = out.get(nm, 0) + c
        return ChowElement(out, presentation or self.presentation)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda mc: (mono_degree(mc[0]), mc[0]))

    def format(self):
        if not self.terms:
            return "0"
        out = ""
        for i, (m, c) in enumerate(self.sorted_terms()):
            mag = abs(c)
            body = format_monomial(m)
            if m and mag == 1:
                piece = body
            elif m:
                piece = f"{mag}{body}"
            else:
                piece = str(mag)
            if i == 0:
                out = ("-" if c < 0 else "") + piece
            else:
                out += (" - " if c < 0 else " + ") + piece
        return out

    def to_json(self):
        return [
            {"monomial": [[f, e] for f, e in m], "coeff": c}
            for m, c in self.sorted_terms()
        ]

    @classmethod
    def from_json(cls, data, presentation=PROPER):
        return cls(
            {tuple((int(f), int(e)) for f, e in t["monomial"]): int(t["coeff"]) for t in data},
            presentation,
        )


def product(a, b, max_degree=None, strict=False):
    """Formal product dropping non-chain monomials (and degrees above ``max_degree``)."""
    out = {}
    for m1, c1 in a.terms.items():
        for m2, c2 in b.terms.items():
            m = mono_mul(m1, m2)
            if len(m) > 1 and not is_chain(mono_flats(m)):
                continue
            if max_degree is not None and mono_degree(m) > max_degree:
                if strict:
                    raise DegreeOverflow(f"product has degree {mono_degree(m)} > {max_degree}")
                continue
            out[m] = out.get(m, 0) + c1 * c2
    return ChowElement(out, a.presentation)


def power(a, e, max_degree=None):
    out = ChowElement.one(a.presentation)
    for _ in range(e):
        out = product(out, a, max_degree)
    return out


def prod(factors, presentation=PROPER, max_degree=None):
    out = ChowElement.one(presentation)
    for f in factors:
        out = product(out, f, max_degree)
    return out


# ---------------------------------------------------------------------------
# context


class ChowContext:
    """Graded normal-form data for the Chow ring of a loopless matroid."""

    def __init__(self, M):
        if M.has_loop():
            raise HasLoop(f"{M!r} has loops {elements(M.loops)}; its Chow ring is not built")
        if M.rank_E < 1:
            raise ValueError("Chow ring needs a matroid of positive rank")
        self.matroid = M
        self.lattice = M.lattice
        self.d = M.rank_E - 1
        self.top = self.lattice.top
        self.flats = self.lattice.proper_nonempty
        self.ref = 0
        self.monomials = []
        self.index = []
        self.basis = []
        self.reduction = []
        for k in range(self.d + 1):
            self._build_degree(k)
        self.degree_sign = self._degree_sign()

    # -- construction --------------------------------------------------

    def _chain_monomials(self, k):
        if k == 0:
            return [()]
        out = set()
        for m in self.monomials[k - 1]:
            support = mono_flats(m)
            for f in self.flats:
                if all(comparable(f, g) for g in support):
                    out.add(mono_mul(m, ((f, 1),)))
        return sorted(out, key=_column_key)

    @cached_property
    def linear_relations(self):
        """Generators of J as ``flat -> coeff`` maps: sum_{F ni j} - sum_{F ni ref}."""
        ref = self.ref
        gens = []
        for j in range(self.matroid.n):
            if j == ref:
                continue
            g = {}
            for f in self.flats:
                c = (f >> j & 1) - (f >> ref & 1)
                if c:
                    g[f] = c
            if g:
                gens.append(g)
        return gens

    def _build_degree(self, k):
        monos = self._chain_monomials(k)
        index = {m: i for i, m in enumerate(monos)}
        rows = []
        if k >= 1:
            for m in self.monomials[k - 1]:
                support = mono_flats(m)
                for g in self.linear_relations:
                    row = {}
                    for f, c in g.items():
                        if all(comparable(f, h) for h in support):
                            col = index[mono_mul(m, ((f, 1),))]
                            row[col] = row.get(col, 0) + c
                    row = {col: c for col, c in row.items() if c}
                    if row:
                        rows.append(row)
        pivots = unit_pivot_reduce(rows)
        basis_cols = [c for c in range(len(monos)) if c not in pivots]
        bpos = {c: i for i, c in enumerate(basis_cols)}
        red = np.zeros((len(monos), len(basis_cols)), dtype=object)
        for c in range(len(monos)):
            if c in bpos:
                red[c, bpos[c]] = 1
            else:
                for cc, v in pivots[c].items():
                    if cc != c:
                        red[c, bpos[cc]] = -v
        self.monomials.append(monos)
        self.index.append(index)
        self.basis.append([monos[c] for c in basis_cols])
        self.reduction.append(red)

    def full_flags(self):
        """Maximal chains of proper flats, as lists ``F_1 < ... < F_d``."""
        levels = self.lattice.flats_by_rank
        chains = [[f] for f in levels[1]] if self.d >= 1 else [[]]
        for r in range(2, self.d + 1):
            chains = [c + [g] for c in chains for g in levels[r] if is_subset(c[-1], g)]
        return chains

    def _degree_sign(self):
        if len(self.basis[self.d]) != 1:
            raise InconsistentDegreeMap(
                f"top degree {self.d} has rank {len(self.basis[self.d])}, expected 1"
            )
        values = set()
        for flag in self.full_flags():
            vec = self.reduction[self.d][self.index[self.d][mono_from_flats(flag)]]
            values.add(int(vec[0]))
        if len(values) != 1 or values.pop() not in (1, -1):
            raise InconsistentDegreeMap("maximal-flag monomials disagree in top degree")
        vec = self.reduction[self.d][self.index[self.d][mono_from_flats(self.full_flags()[0])]]
        return int(vec[0])

    # -- queries ----------------------------------------------------------

    @property
    def graded_ranks(self):
        return tuple(len(b) for b in self.basis)

    def coordinates(self, a):
        """Coordinates of ``a`` in the chosen bases, one integer vector per degree."""
        a = to_proper_presentation(self, a)
        vecs = [np.zeros(len(b), dtype=object) for b in self.basis]
        for m, c in a.terms.items():
            k = mono_degree(m)
            if k > self.d:
                continue
            if len(m) > 1 and not is_chain(mono_flats(m)):
                continue
            vecs[k] = vecs[k] + c * self.reduction[k][self.index[k][m]]
        return vecs

    def element(self, vecs):
        terms = {}
        for k, vec in enumerate(vecs):
            for b, c in zip(self.basis[k], vec):
                if c:
                    terms[b] = int(c)
        return ChowElement(terms, PROPER)

    def generator(self, flat, presentation=PROPER):
        return ChowElement.gen(flat, presentation)

    def x_top(self):
        """``x_E`` in the all-flats presentation."""
        return ChowElement.gen(self.top, ALL)


def _column_key(mono):
    # squarefree monomials with long supports sort first and stay in the basis
    return (max(e for _, e in mono), -len(mono), mono)


@lru_cache(maxsize=256)
def chow_context(M):
    """Build (or fetch the cached) :class:`ChowContext` of a loopless matroid."""
    return ChowContext(M)


def to_all_flats_presentation(ctx, a):
    if a.presentation == ALL:
        return a
    return ChowElement(dict(a.terms), ALL)


def top_substitute(ctx):
    """The proper-presentation value of ``x_E``."""
    return ChowElement.linear(
        {f: -1 for f in ctx.flats if f >> ctx.ref & 1}, PROPER
    )


def to_proper_presentation(ctx, a):
    if a.presentation == PROPER:
        return a
    sub = top_substitute(ctx)
    out = ChowElement.zero(PROPER)
    for m, c in a.terms.items():
        rest = tuple((f, e) for f, e in m if f != ctx.top)
        e_top = sum(e for f, e in m if f == ctx.top)
        term = ChowElement({rest: c}, PROPER)
        if e_top:
            term = product(term, power(sub, e_top, ctx.d), ctx.d)
        out = out + term
    return out


def multiply(ctx, a, b, strict=False):
    if a.presentation != b.presentation:
        raise ValueError("operands must share a presentation")
    return product(a, b, ctx.d, strict=strict)


def normalize(ctx, a):
    """Canonical representative in the chosen monomial basis (proper presentation)."""
    return ctx.element(ctx.coordinates(a))


def equal_in_ring(ctx, a, b):
    return normalize(ctx, a) == normalize(ctx, b)


def degree(ctx, a):
    """Image of a top-degree class under the degree map (maximal flags -> +1)."""
    for m in a.terms:
        if mono_degree(m) != ctx.d:
            raise WrongDegree(f"degree map needs pure degree {ctx.d}, got a term of degree {mono_degree(m)}")
    vec = ctx.coordinates(a)[ctx.d]
    return int(vec[0]) * ctx.degree_sign if len(vec) else 0


def pairing_matrix(ctx, k):
    left = ctx.basis[k]
    right = ctx.basis[ctx.d - k]
    return [
        [degree(ctx, ChowElement({mono_mul(b, c): 1}, PROPER))
         if is_chain(mono_flats(mono_mul(b, c))) else 0
         for c in right]
        for b in left
    ]


def pairing_determinant(ctx, k):
    return bareiss_det(pairing_matrix(ctx, k))


def restrict_to_flag(ctx, a, flag):
    """Set ``x_F = 0`` for every flat outside a maximal flag ``F_1 < ... < F_{d+1} = E``."""
    flag = list(flag)
    lat = ctx.lattice
    if (
        len(flag) != ctx.d + 1
        or flag[-1] != ctx.top
        or any(f not in lat or lat.rank_of[f] != r + 1 for r, f in enumerate(flag))
        or any(not is_subset(x, y) for x, y in zip(flag, flag[1:]))
    ):
        raise FlagNotMaximal(f"{[elements(f) for f in flag]} is not a maximal flag")
    keep = set(flag)
    return ChowElement(
        {m: c for m, c in a.terms.items() if all(f in keep for f, _ in m)}, a.presentation
    )
