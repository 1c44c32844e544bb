"""Bergman fans, Minkowski weights and tropical divisors.

Cones of the Bergman fan B(M) are indexed by flags of proper nonempty flats,
stored as tuples of bitsets ordered by inclusion. The ambient lattice
Z^E / Z e_E is realized by dropping the coordinate of the largest element.
"""
from dataclasses import dataclass, field
from fractions import Fraction

from .chow import ChowElement, degree, mono_degree, mono_from_flats, product
from .errors import HasLoop, IsColoop, NoBalancedLift, NonUniqueLift, UnbalancedInput
from .exact import solve_rational, solve_sparse_unique
from .matroid import comparable, delete, drop_mask, elements, is_subset


def lattice_point(n, vec):
    """Image of an integer vector of Z^E (or a subset bitset) in Z^E / Z e_E.

    The representative with last coordinate 0 is taken and that coordinate
    dropped, so e_E maps to 0.
    """
    if isinstance(vec, int):
        vec = [vec >> k & 1 for k in range(n)]
    last = vec[n - 1]
    return tuple(v - last for v in vec[: n - 1])


def flag_key(flag):
    return tuple(sorted(flag, key=lambda f: (bin(f).count("1"), f)))


def bergman_cones(M, k):
    """All k-dimensional cones: strict chains of k proper nonempty flats."""
    if M.has_loop():
        raise HasLoop(f"{M!r} has loops; its Bergman fan is empty")
    proper = M.lattice.proper_nonempty
    chains = [()]
    for _ in range(k):
        chains = [
            c + (f,)
            for c in chains
            for f in proper
            if not c or (is_subset(c[-1], f) and c[-1] != f)
        ]
    return chains


def facets(cone):
    return [cone[:j] + cone[j + 1:] for j in range(len(cone))]


def star(M, tau):
    """Flats G extending the chain ``tau`` to a chain one longer."""
    return [
        g for g in M.lattice.proper_nonempty
        if g not in tau and all(comparable(g, f) for f in tau)
    ]


def insert(tau, g):
    return flag_key(tau + (g,))


# ---------------------------------------------------------------------------
# weights and functions


@dataclass(frozen=True, eq=False)
class MinkowskiWeight:
    dim: int
    weights: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {flag_key(c): int(w) for c, w in self.weights.items() if w}
        object.__setattr__(self, "weights", clean)

    def __getitem__(self, cone):
        return self.weights.get(flag_key(cone), 0)

    def __eq__(self, other):
        if not isinstance(other, MinkowskiWeight):
            return NotImplemented
        return self.dim == other.dim and self.weights == other.weights

    def __hash__(self):
        return hash((self.dim, frozenset(self.weights.items())))

    def __add__(self, other):
        if self.dim != other.dim:
            raise ValueError("dimension mismatch")
        out = dict(self.weights)
        for c, w in other.weights.items():
            out[c] = out.get(c, 0) + w
        return MinkowskiWeight(self.dim, out)

    def __neg__(self):
        return MinkowskiWeight(self.dim, {c: -w for c, w in self.weights.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, k):
        return MinkowskiWeight(self.dim, {c: k * w for c, w in self.weights.items()})

    __rmul__ = __mul__

    def __repr__(self):
        return f"MinkowskiWeight(dim={self.dim}, {len(self.weights)} cones)"

    def sorted_items(self):
        return sorted(self.weights.items())

    def to_json(self):
        return {
            "dim": self.dim,
            "cones": [{"flag": list(c), "weight": w} for c, w in self.sorted_items()],
        }

    @classmethod
    def from_json(cls, data):
        return cls(int(data["dim"]), {tuple(c["flag"]): int(c["weight"]) for c in data["cones"]})

    def to_tsv(self):
        lines = ["dim\tflag\tweight"]
        for c, w in self.sorted_items():
            flag = " < ".join("{" + ",".join(map(str, elements(f))) + "}" for f in c) or "origin"
            lines.append(f"{self.dim}\t{flag}\t{w}")
        return "\n".join(lines)


@dataclass(frozen=True)
class PLFunction:
    """Piecewise-linear function on the affine Bergman fan.

    ``ray_values[F]`` is the value at e_F for a proper flat F and
    ``lineality`` the value at e_E. Linear on every cone spanned by a flag
    together with +-e_E.
    """

    ray_values: dict
    lineality: int = 0

    def __call__(self, coeffs, top_coeff=0):
        return sum(c * self.ray_values.get(f, 0) for f, c in coeffs.items()) + top_coeff * self.lineality

    def __add__(self, other):
        keys = set(self.ray_values) | set(other.ray_values)
        return PLFunction(
            {f: self.ray_values.get(f, 0) + other.ray_values.get(f, 0) for f in keys},
            self.lineality + other.lineality,
        )

    def __mul__(self, k):
        return PLFunction({f: k * v for f, v in self.ray_values.items()}, k * self.lineality)

    __rmul__ = __mul__

    @classmethod
    def courant(cls, flat):
        return cls({flat: 1})

    @classmethod
    def from_linear(cls, element, top):
        """The function of a degree-1 class (either presentation)."""
        rays, lin = {}, 0
        for m, c in element.terms.items():
            if mono_degree(m) != 1:
                raise ValueError("PL function needs a homogeneous degree-1 class")
            f = m[0][0]
            if f == top:
                lin += c
            else:
                rays[f] = rays.get(f, 0) + c
        return cls(rays, lin)


def express_in_cone(n, tau, vec):
    """Write ``vec`` in Z^E as sum c_F e_F + c_E e_E over F in ``tau``.

    Solved exactly in the quotient lattice; returns ``(coeffs, c_E)`` or
    ``None`` when vec is not in the span.
    """
    target = lattice_point(n, vec)
    gens = [lattice_point(n, f) for f in tau]
    if not tau:
        if any(target):
            return None
        return {}, Fraction(vec[n - 1]) if n else Fraction(0)
    matrix = [[g[r] for g in gens] for r in range(n - 1)]
    x, rank = solve_rational(matrix, target)
    if x is None:
        return None
    coeffs = dict(zip(tau, x))
    last = n - 1
    c_top = Fraction(vec[last]) - sum(c for f, c in coeffs.items() if f >> last & 1)
    return coeffs, c_top


def _star_vector(n, tau, contributions):
    vec = [0] * n
    for g, w in contributions:
        for k in range(n):
            if g >> k & 1:
                vec[k] += w
    return vec


def _faces(w):
    taus = {}
    for cone, wt in w.weights.items():
        for j in range(len(cone)):
            tau = cone[:j] + cone[j + 1:]
            taus.setdefault(tau, []).append((cone[j], wt))
    return taus


def is_balanced(M, w):
    """Return ``(True, None)`` or ``(False, tau)`` for the first failing codim-1 cone."""
    lat = M.lattice
    proper = set(lat.proper_nonempty)
    for cone in w.weights:
        if len(cone) != w.dim or any(f not in proper for f in cone) or not all(
            is_subset(a, b) and a != b for a, b in zip(cone, cone[1:])
        ):
            return False, cone
    if w.dim == 0:
        return True, None
    for tau, contribs in sorted(_faces(w).items()):
        if express_in_cone(M.n, tau, _star_vector(M.n, tau, contribs)) is None:
            return False, tau
    return True, None


def one_top(M):
    d = M.rank_E - 1
    w = MinkowskiWeight(d, {c: 1 for c in bergman_cones(M, d)})
    ok, tau = is_balanced(M, w)
    assert ok, f"fundamental weight unbalanced at {tau}"
    return w


def courant_divisor(M, w, psi, check=True):
    """Divisor of a piecewise-linear function on a balanced weight.

    On each codimension-one cone tau the weight is
    sum_{sigma > tau} w(sigma) psi(e_G) - psi(sum_{sigma > tau} w(sigma) e_G),
    with G the flat that sigma adds to tau.
    """
    if w.dim < 1:
        raise ValueError("cannot take a divisor on a 0-dimensional weight")
    if check:
        ok, tau = is_balanced(M, w)
        if not ok:
            raise UnbalancedInput(f"weight is not balanced at {tau}")
    out = {}
    for tau, contribs in _faces(w).items():
        vec = _star_vector(M.n, tau, contribs)
        solved = express_in_cone(M.n, tau, vec)
        coeffs, c_top = solved
        value = Fraction(sum(wt * psi.ray_values.get(g, 0) for g, wt in contribs)) - psi(coeffs, c_top)
        if value.denominator != 1:
            raise ArithmeticError(f"non-integral divisor weight {value} at {tau}")
        if value:
            out[tau] = int(value)
    result = MinkowskiWeight(w.dim - 1, out)
    if check:
        ok, tau = is_balanced(M, result)
        assert ok, f"divisor unbalanced at {tau}"
    return result


def cap_by_degree(ctx, alpha, j=None, check=True):
    """Minkowski weight of a homogeneous class: sigma -> deg(alpha * x_sigma)."""
    degs = alpha.degrees()
    if j is None:
        if len(degs) > 1:
            raise ValueError("cap product needs a homogeneous class")
        j = degs[0] if degs else 0
    elif degs and degs != [j]:
        raise ValueError(f"class is not homogeneous of degree {j}")
    M = ctx.matroid
    dim = ctx.d - j
    out = {}
    if dim >= 0 and alpha:
        for cone in bergman_cones(M, dim):
            mono = ChowElement({mono_from_flats(cone): 1}, alpha.presentation)
            value = degree(ctx, product(alpha, mono, ctx.d))
            if value:
                out[cone] = value
    result = MinkowskiWeight(max(dim, 0), out)
    if check:
        ok, tau = is_balanced(M, result)
        assert ok, f"cap product unbalanced at {tau}"
    return result


# ---------------------------------------------------------------------------
# deletion: the modification B(M) -> B(M \ i)


def u_flats(M, i):
    """Flats F containing i such that F - i is a flat of M or empty."""
    lat = M.lattice
    return {
        f for f in lat.nonempty
        if f >> i & 1 and ((f & ~(1 << i)) == 0 or (f & ~(1 << i)) in lat)
    }


def phi_function(M, i):
    """The modification function on B(M \\ i): e_F -> rk(F + i) - rk(F) - 1.

    On the lineality direction e_{E-i} it takes the value -1.
    """
    if M.is_coloop(i):
        raise IsColoop(f"element {i} is a coloop")
    D = delete(M, i)
    rays = {}
    for f in D.lattice.proper_nonempty:
        g = _lift(f, i)
        rays[f] = M.rank(g | 1 << i) - M.rank(g) - 1
    g = _lift(D.full, i)
    lineality = M.rank(g | 1 << i) - M.rank(g) - 1
    return PLFunction(rays, lineality)


def _lift(mask, i):
    low = mask & ((1 << i) - 1)
    return low | ((mask >> i) << (i + 1))


def modification_pullback(M, i, w):
    """Pull a balanced weight on B(M \\ i) back along the modification B(M) -> B(M \\ i).

    The projection drops coordinate i and sends e_F to e_{F - i}. A cone of
    B(M) whose image keeps its dimension is either in the graph of the
    modification (no flat from U, the flats F containing i with F - i a
    flat or empty) and inherits the weight of its image, or lies off the
    graph and gets 0. A cone whose image loses one dimension lies in the
    vertical part above div(phi) and gets that divisor's weight.
    """
    if M.is_coloop(i):
        raise IsColoop(f"element {i} is a coloop")
    D = delete(M, i)
    U = u_flats(M, i)
    k = w.dim
    div = courant_divisor(D, w, phi_function(M, i)) if k >= 1 else None
    weights = {}
    for c in bergman_cones(M, k):
        img = []
        for f in c:
            g = drop_mask(f, i)
            if g and (not img or img[-1] != g):
                img.append(g)
        img = tuple(img)
        if len(img) == k:
            if not any(f in U for f in c):
                weights[c] = w[img]
        elif len(img) == k - 1:
            weights[c] = div[img]
    result = MinkowskiWeight(k, weights)
    ok, tau = is_balanced(M, result)
    if not ok:
        raise NoBalancedLift(f"pullback unbalanced at {tau}")
    return result


def balanced_completion(M, i, w):
    """Linear-solve characterization of the pullback, used as a cross-check.

    Graph cones take the weight of their image; the weights on cones meeting
    U are the solution of the balancing conditions together with the
    requirement that the projection pushes the result forward to ``w``.
    Raises :class:`NonUniqueLift` when these conditions do not pin the
    weights down, which does happen (u45 with a 2-dimensional weight).
    """
    if M.is_coloop(i):
        raise IsColoop(f"element {i} is a coloop")
    U = u_flats(M, i)
    k = w.dim
    cones = bergman_cones(M, k)
    known, unknown = {}, []
    for c in cones:
        if any(f in U for f in c):
            unknown.append(c)
        else:
            known[c] = w[tuple(drop_mask(f, i) for f in c)]
    pos = {c: j for j, c in enumerate(unknown)}
    equations = []
    if unknown:
        for tau in bergman_cones(M, k - 1):
            contribs = [(g, insert(tau, g)) for g in star(M, tau)]
            if not any(s in pos for _, s in contribs):
                continue
            layers, prev = [], 0
            for f in list(tau) + [M.full]:
                layers.append(elements(f & ~prev))
                prev = f
            for layer in layers:
                for a, b in zip(layer, layer[1:]):
                    coeffs, rhs = {}, 0
                    for g, s in contribs:
                        delta = (g >> a & 1) - (g >> b & 1)
                        if not delta:
                            continue
                        if s in pos:
                            coeffs[pos[s]] = coeffs.get(pos[s], 0) + delta
                        else:
                            rhs -= delta * known[s]
                    if coeffs or rhs:
                        equations.append((coeffs, rhs))
        images = {}
        for c in cones:
            img = tuple(drop_mask(f, i) for f in c)
            if all(img) and len(set(img)) == len(img):
                images.setdefault(img, []).append(c)
        for img, over in images.items():
            if not any(c in pos for c in over):
                continue
            coeffs = {pos[c]: 1 for c in over if c in pos}
            rhs = w[img] - sum(known[c] for c in over if c not in pos)
            equations.append((coeffs, rhs))
    sol, status = solve_sparse_unique(equations, len(unknown))
    if status == "inconsistent":
        raise NoBalancedLift(f"no balanced lift of a {k}-dimensional weight")
    if status == "underdetermined":
        raise NonUniqueLift(f"balanced lift of a {k}-dimensional weight is not unique")
    weights = dict(known)
    for c, v in zip(unknown, sol):
        if v.denominator != 1:
            raise NoBalancedLift(f"lift weight {v} on {c} is not integral")
        weights[c] = int(v)
    return MinkowskiWeight(k, weights)
