"""Builtin matroid corpus, with expected values tagged by provenance."""
import json
import os
from dataclasses import dataclass, field
from itertools import combinations

from .chow import ALL, ChowElement
from .errors import ParseError
from .matroid import MatroidSpec, build_matroid, to_mask

PROVENANCE = ("paper", "trivial", "derived")

FANO_LINES = [(0, 1, 3), (1, 2, 4), (2, 3, 5), (3, 4, 6), (4, 5, 0), (5, 6, 1), (6, 0, 2)]


@dataclass(frozen=True)
class Expected:
    value: object
    provenance: str

    def __post_init__(self):
        if self.provenance not in PROVENANCE:
            raise ValueError(f"provenance must be one of {PROVENANCE}")


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    spec: MatroidSpec
    expected: dict = field(default_factory=dict, compare=False)

    def matroid(self):
        return build_matroid(self.spec)

    def to_dict(self):
        out = self.spec.to_dict()
        out["name"] = self.name
        out["expected"] = {
            k: {"value": v.value, "provenance": v.provenance} for k, v in sorted(self.expected.items())
        }
        return out

    @classmethod
    def from_dict(cls, data):
        spec = MatroidSpec.from_dict(data)
        expected = {
            k: Expected(v["value"], v["provenance"]) for k, v in data.get("expected", {}).items()
        }
        return cls(data.get("name") or spec.name, spec, expected)


def element_from_flat_lists(terms, presentation=ALL):
    """``[[[flat, flat, ...], coeff], ...]`` with flats as element lists -> ChowElement."""
    acc = {}
    for flats, c in terms:
        m = {}
        for f in flats:
            mask = to_mask(f)
            m[mask] = m.get(mask, 0) + 1
        key = tuple(sorted(m.items()))
        acc[key] = acc.get(key, 0) + c
    return ChowElement(acc, presentation)


def _bases_fano():
    lines = {frozenset(l) for l in FANO_LINES}
    return [list(b) for b in combinations(range(7), 3) if frozenset(b) not in lines]


def _entries():
    E = Expected
    yield CorpusEntry("u11", MatroidSpec.uniform(1, 1, "u11"), {
        "graded_ranks": E([1], "trivial"),
        "csm": E([{"dim": 0, "cones": [{"flag": [], "weight": 1}]}], "paper"),
    })
    yield CorpusEntry("loop", MatroidSpec.from_rank_table(1, [0, 0], "loop"), {
        "staircase": E([], "paper"),
    })
    yield CorpusEntry("u23", MatroidSpec.uniform(2, 3, "u23"), {
        "graded_ranks": E([1, 1], "derived"),
        "staircase": E([[[], 1], [[[0]], -1]], "derived"),
        "csm_dim0": E(-1, "derived"),
    })
    yield CorpusEntry("u24", MatroidSpec.uniform(2, 4, "u24"), {
        "graded_ranks": E([1, 1], "derived"),
    })
    yield CorpusEntry("u33", MatroidSpec.uniform(3, 3, "u33"), {
        "graded_ranks": E([1, 4, 1], "derived"),
    })
    yield CorpusEntry("u34", MatroidSpec.uniform(3, 4, "u34"), {
        "graded_ranks": E([1, 7, 1], "derived"),
    })
    # the sign of the degree-1 part is forced by the linear relations
    yield CorpusEntry(
        "example-2.4",
        MatroidSpec.from_matrix([[1, 0, 0, 0], [0, 1, 1, 0], [0, 0, -1, 1]], "example-2.4"),
        {
            "graded_ranks": E([1, 5, 1], "derived"),
            "staircase": E([[[], 1], [[[1, 2, 3]], 1], [[[0, 1, 2, 3]], 1]], "derived"),
        },
    )
    yield CorpusEntry(
        "k4",
        MatroidSpec.graphic(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)], "k4"),
        {"rank": E(3, "trivial")},
    )
    yield CorpusEntry("fano", MatroidSpec.from_bases(7, _bases_fano(), "fano"), {
        "rank": E(3, "derived"),
    })
    cols = [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 0), (1, 0, 1), (0, 1, 1), (1, 1, 1)]
    yield CorpusEntry(
        "nonfano",
        MatroidSpec.from_matrix([[c[r] for c in cols] for r in range(3)], "nonfano"),
        {"rank": E(3, "derived")},
    )
    yield CorpusEntry(
        "parallel",
        MatroidSpec.from_matrix([[1, 1, 0, 1], [0, 0, 1, 1]], "parallel"),
        {"rank": E(2, "trivial"), "graded_ranks": E([1, 1], "derived")},
    )


BUILTINS = {e.name: e for e in _entries()}


def builtin_names():
    return sorted(BUILTINS)


def get_builtin(name):
    try:
        return BUILTINS[name]
    except KeyError:
        raise ParseError(f"no builtin matroid named {name!r}") from None


def parse_entry_text(text, source="<input>"):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(
            f"{source}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}"
        ) from None
    if not isinstance(data, dict):
        raise ParseError(f"{source}: expected a JSON object")
    return CorpusEntry.from_dict(data)


def load_entry(arg):
    """A path to a JSON file, or the name of a builtin."""
    if os.path.exists(arg):
        with open(arg, encoding="utf-8") as fh:
            return parse_entry_text(fh.read(), arg)
    return get_builtin(arg)


def load_matroid(arg):
    return load_entry(arg).matroid()


def dump_entry(entry):
    return json.dumps(entry.to_dict(), indent=2, sort_keys=True) + "\n"


def dump_corpus(directory):
    os.makedirs(directory, exist_ok=True)
    paths = []
    for name in builtin_names():
        path = os.path.join(directory, f"{name}.json")
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(dump_entry(BUILTINS[name]))
        paths.append(path)
    return paths
