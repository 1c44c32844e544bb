"""Exact integer and rational linear algebra.

Everything here works on Python ints and :class:`fractions.Fraction`, never
floats. Sparse vectors are ``dict`` objects mapping a column index to a
nonzero coefficient.
"""
from fractions import Fraction
from math import gcd

from .errors import NonUnimodularQuotient


def parse_rational(value):
    """Parse ``"p/q"``, ``"p"`` or an int into a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"not an exact rational: {value!r}")


def integer_columns(rows):
    """Rescale each column of a rational matrix to a primitive integer column.

    Column spans (and hence matroid ranks) are unchanged.
    """
    rows = [[parse_rational(x) for x in row] for row in rows]
    if not rows:
        return []
    ncols = len(rows[0])
    out = [[0] * ncols for _ in rows]
    for c in range(ncols):
        den = 1
        for row in rows:
            den = den * row[c].denominator // gcd(den, row[c].denominator)
        col = [int(row[c] * den) for row in rows]
        g = 0
        for x in col:
            g = gcd(g, x)
        g = g or 1
        for r, x in enumerate(col):
            out[r][c] = x // g
    return out


def bareiss_rank(matrix):
    """Rank of an integer matrix by fraction-free Bareiss elimination."""
    a = [list(row) for row in matrix]
    if not a or not a[0]:
        return 0
    m, n = len(a), len(a[0])
    rank = 0
    prev = 1
    for col in range(n):
        piv = next((r for r in range(rank, m) if a[r][col] != 0), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        p = a[rank][col]
        for r in range(rank + 1, m):
            arc = a[r][col]
            row_r, row_p = a[r], a[rank]
            for c in range(col + 1, n):
                row_r[c] = (p * row_r[c] - arc * row_p[c]) // prev
            row_r[col] = 0
        prev = p
        rank += 1
        if rank == m:
            break
    return rank


def solve_rational(matrix, rhs):
    """Solve ``matrix @ x = rhs`` exactly.

    Returns ``(x, rank)`` with one particular solution (free variables set to
    zero), or ``(None, rank)`` when the system is inconsistent.
    """
    m = len(matrix)
    n = len(matrix[0]) if m else 0
    aug = [[Fraction(v) for v in row] + [Fraction(b)] for row, b in zip(matrix, rhs)]
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if aug[i][c] != 0), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        p = aug[r][c]
        aug[r] = [v / p for v in aug[r]]
        for i in range(m):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [vi - f * vr for vi, vr in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    for i in range(r, m):
        if aug[i][n] != 0:
            return None, r
    x = [Fraction(0)] * n
    for i, c in enumerate(pivots):
        x[c] = aug[i][n]
    return x, r


def solve_sparse_unique(equations, nvars):
    """Solve a sparse linear system that must have a unique solution.

    ``equations`` is a list of ``(coeffs, rhs)`` with ``coeffs`` a dict
    ``var -> int``. Returns ``(solution, status)`` where status is
    ``"ok"``, ``"inconsistent"`` or ``"underdetermined"``.
    """
    pivots = {}  # var -> (row dict, rhs) with unit coefficient on var
    for coeffs, rhs in equations:
        row = {k: Fraction(v) for k, v in coeffs.items() if v}
        rhs = Fraction(rhs)
        for k in [k for k in row if k in pivots]:
            f = row.get(k)
            if f:
                prow, prhs = pivots[k]
                _axpy(row, f, prow)
                rhs -= f * prhs
        if not row:
            if rhs != 0:
                return None, "inconsistent"
            continue
        var = min(row)
        p = row[var]
        row = {k: v / p for k, v in row.items()}
        rhs = rhs / p
        for k, (prow, prhs) in list(pivots.items()):
            f = prow.get(var)
            if f:
                for kk, vv in row.items():
                    nv = prow.get(kk, 0) - f * vv
                    if nv:
                        prow[kk] = nv
                    else:
                        prow.pop(kk, None)
                pivots[k] = (prow, prhs - f * rhs)
        pivots[var] = (row, rhs)
    if len(pivots) < nvars:
        return None, "underdetermined"
    return [pivots[v][1] for v in range(nvars)], "ok"


def _axpy(target, factor, source):
    """target -= factor * source, in place on sparse dicts."""
    for k, v in source.items():
        nv = target.get(k, 0) - factor * v
        if nv:
            target[k] = nv
        else:
            target.pop(k, None)


def _xgcd(a, b):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def unit_pivot_reduce(rows, pivot_rank=None):
    """Fully reduce an integer row lattice using only +-1 pivots.

    ``rows`` are sparse integer vectors spanning a lattice R. Returns a dict
    ``col -> row`` where each row has coefficient +1 on its pivot column and
    0 on every other pivot column; the rows span R over the integers. The
    non-pivot columns then form a Z-basis of Z^m / R.

    ``pivot_rank(col)`` orders candidate pivots within a row; the largest
    value is eliminated first. Raises :class:`NonUnimodularQuotient` if no
    sequence of unimodular row operations exposes a unit pivot.
    """
    key = pivot_rank or (lambda c: c)
    pivots = {}

    def reduce(row):
        for c in [c for c in row if c in pivots]:
            f = row.get(c)
            if f:
                _axpy(row, f, pivots[c])
        return row

    def add_pivot(row, col):
        if row[col] == -1:
            row = {k: -v for k, v in row.items()}
        for pc, prow in pivots.items():
            f = prow.get(col)
            if f:
                _axpy(prow, f, row)
        pivots[col] = row

    def try_pivot(row):
        units = [c for c, v in row.items() if v in (1, -1)]
        if not units:
            return False
        add_pivot(row, max(units, key=key))
        return True

    hard = []
    for r in rows:
        row = reduce(dict(r))
        if row and not try_pivot(row):
            hard.append(row)

    while hard:
        progress = False
        rest = []
        for row in hard:
            row = reduce(row)
            if not row:
                progress = True
            elif try_pivot(row):
                progress = True
            else:
                rest.append(row)
        hard = rest
        if progress or not hard:
            continue
        # combine rows on one column down to its gcd
        col = min({c for row in hard for c in row}, key=lambda c: (-key(c), c))
        with_col = [row for row in hard if row.get(col)]
        acc = with_col[0]
        for other in with_col[1:]:
            g, x, y = _xgcd(acc[col], other[col])
            a, b = acc[col] // g, other[col] // g
            new_acc = {}
            new_other = {}
            for k in set(acc) | set(other):
                va, vb = acc.get(k, 0), other.get(k, 0)
                s = x * va + y * vb
                t = -b * va + a * vb
                if s:
                    new_acc[k] = s
                if t:
                    new_other[k] = t
            hard[hard.index(other)] = new_other
            hard[hard.index(acc)] = new_acc
            acc = new_acc
        if abs(acc.get(col, 0)) != 1 and not any(
            v in (1, -1) for row in hard for v in row.values()
        ):
            raise NonUnimodularQuotient(
                f"relation lattice has no unit pivot (column {col}, gcd {acc.get(col)})"
            )
        hard = [row for row in hard if row]
    return pivots


def bareiss_det(matrix):
    """Determinant of a square integer matrix, fraction-free."""
    a = [list(row) for row in matrix]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if a[r][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]
