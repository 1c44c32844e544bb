"""Matroids as materialized rank tables, with flats, minors and invariants.

Subsets of the ground set ``{0, ..., n-1}`` are bitsets: element ``i``
corresponds to bit ``1 << i``. Functions accepting a subset take either such
an int or an iterable of element indices.
"""
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Optional

import numpy as np

from . import _kernels
from .errors import (
    AxiomViolation,
    EmptyBases,
    NonEquicardinalBases,
    OutOfRange,
    ParseError,
)
from .exact import bareiss_rank, integer_columns

MAX_ELEMENTS = 16

_AXIOM_NAMES = {
    1: "rk(A) <= |A|",
    2: "A subset of B implies rk(A) <= rk(B)",
    3: "rk(A u B) + rk(A n B) <= rk(A) + rk(B)",
}


def to_mask(subset):
    if isinstance(subset, (int, np.integer)):
        return int(subset)
    mask = 0
    for i in subset:
        mask |= 1 << int(i)
    return mask


def elements(mask):
    """Sorted element indices of a bitset."""
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def is_subset(a, b):
    return a & ~b == 0


def comparable(a, b):
    return a & ~b == 0 or b & ~a == 0


# ---------------------------------------------------------------------------
# specs


@dataclass(frozen=True)
class MatroidSpec:
    """How to build a matroid: one of rank_table, bases, matrix, uniform, graphic."""

    type: str
    n: int
    params: dict = field(default_factory=dict, compare=False)
    name: Optional[str] = None

    @classmethod
    def uniform(cls, r, n, name=None):
        return cls("uniform", n, {"r": r}, name or f"u{r}{n}")

    @classmethod
    def from_bases(cls, n, bases, name=None):
        return cls("bases", n, {"bases": [sorted(elements(to_mask(b))) for b in bases]}, name)

    @classmethod
    def from_matrix(cls, rows, name=None):
        rows = [[str(x) for x in row] for row in rows]
        return cls("matrix", len(rows[0]) if rows else 0, {"rows": rows}, name)

    @classmethod
    def graphic(cls, vertices, edges, name=None):
        return cls("graphic", len(edges), {"vertices": vertices, "edges": [list(e) for e in edges]}, name)

    @classmethod
    def from_rank_table(cls, n, ranks, name=None):
        return cls("rank_table", n, {"ranks": [int(r) for r in ranks]}, name)

    def to_dict(self):
        body = {"type": self.type}
        body.update(self.params)
        return {"name": self.name, "n": self.n, "spec": body}

    @classmethod
    def from_dict(cls, data):
        try:
            n = int(data["n"])
            body = dict(data["spec"])
            kind = body.pop("type")
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"malformed matroid record: {exc!r}") from None
        if kind not in ("rank_table", "bases", "matrix", "uniform", "graphic"):
            raise ParseError(f"unknown matroid spec type {kind!r}")
        return cls(kind, n, body, data.get("name"))


# ---------------------------------------------------------------------------
# core types


@dataclass(frozen=True)
class Flat:
    members: int
    rank: int

    @property
    def elements(self):
        return elements(self.members)


class Matroid:
    """A matroid on ``{0..n-1}`` given by its full rank table.

    ``labels[k]`` is the label of element ``k`` in the matroid this one was
    derived from (identity for a freshly built matroid).
    """

    def __init__(self, n, ranks, name=None, labels=None, validate=True):
        if n > MAX_ELEMENTS:
            raise OutOfRange(f"ground set of size {n} exceeds {MAX_ELEMENTS}")
        ranks = np.array(ranks, dtype=np.int64)
        if ranks.shape != (1 << n,):
            raise ParseError(f"rank table must have 2^{n} entries, got {ranks.shape[0]}")
        if validate:
            report = validate_rank_axioms(ranks, n)
            if report is not None:
                raise AxiomViolation(*report)
        ranks.setflags(write=False)
        self.n = n
        self.ranks = ranks
        self.name = name
        self.labels = tuple(range(n)) if labels is None else tuple(labels)

    def __repr__(self):
        return f"Matroid(name={self.name!r}, n={self.n}, rank={self.rank_E})"

    def __eq__(self, other):
        return (
            isinstance(other, Matroid)
            and self.n == other.n
            and np.array_equal(self.ranks, other.ranks)
        )

    def __hash__(self):
        return hash((self.n, self.ranks.tobytes()))

    @property
    def full(self):
        return (1 << self.n) - 1

    @property
    def rank_E(self):
        return int(self.ranks[self.full])

    def rank(self, subset):
        return rank(self, subset)

    @cached_property
    def closure_table(self):
        table = _kernels.closure_table(self.n, self.ranks)
        table.setflags(write=False)
        return table

    @cached_property
    def lattice(self):
        return flats_lattice(self)

    @cached_property
    def loops(self):
        return int(self.closure_table[0])

    @cached_property
    def coloops(self):
        return loops_coloops_simple(self)[1]

    def has_loop(self):
        return self.loops != 0

    def is_coloop(self, i):
        return bool(self.coloops >> i & 1)

    def bases(self):
        r = self.rank_E
        pc = _kernels.popcounts(self.n)
        idx = np.nonzero((pc == r) & (self.ranks == r))[0]
        return [int(b) for b in idx]


@dataclass(frozen=True)
class FlatLattice:
    flats_by_rank: tuple
    rank_of: dict

    @property
    def top(self):
        return self.flats_by_rank[-1][0]

    @property
    def bottom(self):
        return self.flats_by_rank[0][0]

    @cached_property
    def all(self):
        return tuple(f for level in self.flats_by_rank for f in level)

    @cached_property
    def nonempty(self):
        """L(M): nonempty flats, the top included."""
        return tuple(f for f in self.all if f != 0)

    @cached_property
    def proper_nonempty(self):
        """L-hat(M): flats other than the closure of the empty set and the top."""
        return tuple(f for f in self.all if f != self.bottom and f != self.top)

    def comparable(self, a, b):
        return comparable(a, b)

    def covers(self, a, b):
        """True if flat ``b`` covers flat ``a``."""
        return is_subset(a, b) and self.rank_of[b] == self.rank_of[a] + 1

    def __contains__(self, mask):
        return mask in self.rank_of

    def __len__(self):
        return len(self.rank_of)


# ---------------------------------------------------------------------------
# operations


def validate_rank_axioms(table, n=None):
    """Check the three rank axioms on a full table.

    Returns ``None`` when all hold, else ``(axiom, A, B, message)`` for the
    first counterexample.
    """
    table = np.asarray(table, dtype=np.int64)
    if n is None:
        n = int(table.shape[0]).bit_length() - 1
    if table.shape != (1 << n,):
        raise ParseError(f"rank table must have 2^{n} entries")
    code, a, b = _kernels.axiom_check(n, table)
    if code == 0:
        return None
    msg = (
        f"axiom {code} ({_AXIOM_NAMES[code]}) fails for A={elements(a)}, B={elements(b)}"
    )
    return code, a, b, msg


def _matrix_ranks(n, rows):
    cols = integer_columns(rows)
    out = np.zeros(1 << n, dtype=np.int64)
    for s in range(1, 1 << n):
        idx = elements(s)
        out[s] = bareiss_rank([[row[c] for c in idx] for row in cols])
    return out


def build_matroid(spec):
    """Build a validated :class:`Matroid` from a :class:`MatroidSpec` or its dict form."""
    if isinstance(spec, dict):
        spec = MatroidSpec.from_dict(spec)
    n, p = spec.n, spec.params
    if n > MAX_ELEMENTS or n < 0:
        raise OutOfRange(f"ground set size {n} outside 0..{MAX_ELEMENTS}")
    if spec.type == "rank_table":
        ranks = p["ranks"]
    elif spec.type == "uniform":
        r = int(p["r"])
        if not 0 <= r <= n:
            raise ParseError(f"uniform matroid needs 0 <= r <= n, got r={r}, n={n}")
        ranks = np.minimum(_kernels.popcounts(n), r)
    elif spec.type == "bases":
        bases = [to_mask(b) for b in p["bases"]]
        if not bases:
            raise EmptyBases("a matroid needs at least one basis")
        sizes = {bin(b).count("1") for b in bases}
        if len(sizes) != 1:
            raise NonEquicardinalBases(f"bases have sizes {sorted(sizes)}")
        if any(b >> n for b in bases):
            raise OutOfRange("basis element outside the ground set")
        ranks = _kernels.rank_from_bases(n, bases)
    elif spec.type == "matrix":
        rows = p["rows"]
        if rows and any(len(row) != n for row in rows):
            raise ParseError(f"every matrix row needs {n} entries")
        ranks = _matrix_ranks(n, rows)
    elif spec.type == "graphic":
        edges = [tuple(int(v) for v in e) for e in p["edges"]]
        nv = int(p["vertices"])
        if len(edges) != n or any(not (0 <= v < nv) for e in edges for v in e):
            raise ParseError("graphic spec needs n edges on vertices 0..vertices-1")
        ranks = _kernels.graphic_rank(nv, edges)
    else:
        raise ParseError(f"unknown matroid spec type {spec.type!r}")
    return Matroid(n, ranks, name=spec.name)


def rank(M, subset):
    mask = to_mask(subset)
    if mask < 0 or mask >> M.n:
        raise OutOfRange(f"subset {elements(mask)} not inside ground set of size {M.n}")
    return int(M.ranks[mask])


def closure(M, subset):
    mask = to_mask(subset)
    if mask < 0 or mask >> M.n:
        raise OutOfRange(f"subset {elements(mask)} not inside ground set of size {M.n}")
    return Flat(int(M.closure_table[mask]), int(M.ranks[mask]))


def flats_lattice(M):
    """All flats graded by rank, found by closure breadth-first search."""
    cl = M.closure_table
    bottom = int(cl[0])
    levels = [[bottom]]
    rank_of = {bottom: 0}
    for r in range(M.rank_E):
        nxt = set()
        for f in levels[r]:
            for i in range(M.n):
                if not f >> i & 1:
                    nxt.add(int(cl[f | 1 << i]))
        level = sorted(nxt)
        for g in level:
            rank_of[g] = r + 1
        levels.append(level)
    return FlatLattice(tuple(tuple(level) for level in levels), rank_of)


def loops_coloops_simple(M):
    """Return ``(loops, coloops, simple)`` with loops/coloops as bitsets."""
    loops = 0
    for i in range(M.n):
        if M.ranks[1 << i] == 0:
            loops |= 1 << i
    coloops = M.full
    for b in M.bases():
        coloops &= b
    atoms = M.lattice.flats_by_rank[1] if M.rank_E >= 1 else ()
    simple = loops == 0 and sorted(atoms) == [1 << i for i in range(M.n)]
    return loops, coloops, simple


def _squeeze(mask, i):
    """Drop bit i from mask, shifting the higher bits down."""
    low = mask & ((1 << i) - 1)
    return low | ((mask >> (i + 1)) << i)


def _expand(mask, i):
    """Inverse of :func:`_squeeze` with bit i cleared."""
    low = mask & ((1 << i) - 1)
    return low | ((mask >> i) << (i + 1))


def lift_mask(minor_mask, i):
    """Express a subset of ``M \\ i`` or ``M / i`` in the labels of ``M``."""
    return _expand(minor_mask, i)


def drop_mask(mask, i):
    """Express a subset of ``M`` avoiding ``i`` in the labels of the minor."""
    return _squeeze(mask & ~(1 << i), i)


def minor(M, kind, i):
    """Deletion or contraction of element ``i``, relabeled order-preservingly."""
    if not 0 <= i < M.n:
        raise OutOfRange(f"element {i} not in ground set of size {M.n}")
    idx = np.array([_expand(s, i) for s in range(1 << (M.n - 1))], dtype=np.int64)
    if kind == "delete":
        ranks = M.ranks[idx]
        tag = "\\"
    elif kind == "contract":
        ranks = M.ranks[idx | (1 << i)] - M.ranks[1 << i]
        tag = "/"
    else:
        raise ValueError(f"kind must be 'delete' or 'contract', not {kind!r}")
    labels = [M.labels[k] for k in range(M.n) if k != i]
    name = f"{M.name}{tag}{i}" if M.name else None
    return Matroid(M.n - 1, ranks, name=name, labels=labels, validate=False)


def delete(M, i):
    return minor(M, "delete", i)


def contract(M, i):
    return minor(M, "contract", i)


def mobius_from_bottom(M):
    """Mobius values mu(bottom, F) for every flat F."""
    lat = M.lattice
    mu = {}
    for f in lat.all:
        if f == lat.bottom:
            mu[f] = 1
        else:
            mu[f] = -sum(v for g, v in mu.items() if g != f and is_subset(g, f))
    return mu


def characteristic_polynomial(M):
    """Coefficients ``c`` with chi_M(q) = sum c[k] q^k; all zero if M has a loop."""
    r = M.rank_E
    coeffs = [0] * (r + 1)
    if M.has_loop():
        return tuple(coeffs)
    mu = mobius_from_bottom(M)
    for f, v in mu.items():
        coeffs[r - M.lattice.rank_of[f]] += v
    return tuple(coeffs)


def format_polynomial(coeffs, var="q"):
    terms = []
    for k in range(len(coeffs) - 1, -1, -1):
        c = coeffs[k]
        if c == 0:
            continue
        mag = abs(c)
        if k == 0:
            body = str(mag)
        else:
            body = ("" if mag == 1 else str(mag)) + (var if k == 1 else f"{var}^{k}")
        sign = "-" if c < 0 else "+"
        terms.append((sign, body))
    if not terms:
        return "0"
    first_sign, first = terms[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return out


def all_subsets_of_size(n, k):
    return [to_mask(c) for c in combinations(range(n), k)]
