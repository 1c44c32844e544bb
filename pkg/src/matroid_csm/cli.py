"""``matroid-csm`` command-line front end.

Exit codes: 0 ok, 1 verification failure or route mismatch, 2 usage error.
"""
import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from . import corpus
from .chow import chow_context
from .csm import (
    ELEMENTWISE,
    IDENTITIES,
    Verification,
    csm_cycle,
    staircase_normalized,
    verify_identity,
)
from .errors import IsColoop, MatroidCSMError, RouteMismatch
from .matroid import (
    build_matroid,
    characteristic_polynomial,
    elements,
    format_polynomial,
    loops_coloops_simple,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _flat_list(mask):
    return elements(mask)


def _dumps(obj):
    return json.dumps(obj, indent=2, sort_keys=True)


def info_report(M):
    loops, coloops, simple = loops_coloops_simple(M)
    lat = M.lattice
    by_rank = {}
    for f in lat.all:
        by_rank.setdefault(lat.rank_of[f], []).append(f)
    report = {
        "name": M.name,
        "n": M.n,
        "rank": M.rank_E,
        "flats_by_rank": {
            str(r): [_flat_list(f) for f in sorted(fs)] for r, fs in sorted(by_rank.items())
        },
        "loops": _flat_list(loops),
        "coloops": _flat_list(coloops),
        "simple": simple,
        "characteristic_polynomial": format_polynomial(characteristic_polynomial(M)),
        "graded_ranks": None if M.has_loop() else list(chow_context(M).graded_ranks),
    }
    return report


def _info_tsv(rep):
    lines = [
        f"name\t{rep['name']}",
        f"n\t{rep['n']}",
        f"rank\t{rep['rank']}",
    ]
    for r, fs in rep["flats_by_rank"].items():
        lines.append(f"flats_rank_{r}\t" + " ".join("{" + ",".join(map(str, f)) + "}" for f in fs))
    lines.append("loops\t{" + ",".join(map(str, rep["loops"])) + "}")
    lines.append("coloops\t{" + ",".join(map(str, rep["coloops"])) + "}")
    lines.append(f"simple\t{str(rep['simple']).lower()}")
    lines.append(f"characteristic_polynomial\t{rep['characteristic_polynomial']}")
    gr = rep["graded_ranks"]
    lines.append("graded_ranks\t" + ("n/a" if gr is None else " ".join(map(str, gr))))
    return "\n".join(lines)


def csm_report(M, route):
    weights = csm_cycle(M, route)
    if M.has_loop():
        st_text, st_json = "0", []
    else:
        st = staircase_normalized(M)
        st_text, st_json = st.format(), st.to_json()
    return {
        "name": M.name,
        "route": route,
        "staircase": st_text,
        "staircase_terms": st_json,
        "csm": [w.to_json() for w in weights],
    }, weights


def _csm_tsv(M, rep, weights):
    if M.has_loop():
        lines = ["st = 0; all weights 0"]
    else:
        lines = [f"staircase\t{rep['staircase']}"]
    for w in weights:
        lines.append(w.to_tsv())
    return "\n".join(lines)


def _verify_task(args):
    spec, name, i = args
    M = build_matroid(spec)
    try:
        return verify_identity(name, M, i).to_json()
    except IsColoop:
        return Verification(M.name, name, i, "n/a", f"{i} is a coloop").to_json()


def _tasks(entries, identities, element):
    tasks = []
    for entry in entries:
        M = entry.matroid()
        spec = entry.spec.to_dict()
        spec["name"] = entry.name
        for name in identities:
            if name in ELEMENTWISE:
                elems = range(M.n) if element is None else [element]
                tasks.extend((spec, name, i) for i in elems)
            else:
                tasks.append((spec, name, None))
    return tasks


def _threads():
    raw = os.environ.get("MATROID_CSM_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def run_tasks(tasks):
    workers = _threads()
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_verify_task, tasks))
    else:
        results = [_verify_task(t) for t in tasks]
    order = {n: k for k, n in enumerate(IDENTITIES)}
    results.sort(key=lambda r: (r["matroid"] or "", order[r["identity"]], -1 if r["element"] is None else r["element"]))
    return results


def cmd_info(args):
    M = corpus.load_matroid(args.target)
    rep = info_report(M)
    print(_dumps(rep) if args.format == "json" else _info_tsv(rep))
    return EXIT_OK


def cmd_csm(args):
    M = corpus.load_matroid(args.target)
    try:
        rep, weights = csm_report(M, args.route)
    except RouteMismatch as exc:
        print(f"route mismatch: {exc}", file=sys.stderr)
        return EXIT_FAIL
    print(_dumps(rep) if args.format == "json" else _csm_tsv(M, rep, weights))
    return EXIT_OK


def cmd_verify(args):
    if args.corpus == bool(args.target):
        raise _Usage("verify needs exactly one of TARGET or --corpus")
    if args.corpus:
        entries = [corpus.BUILTINS[n] for n in corpus.builtin_names()]
    else:
        entry = corpus.load_entry(args.target)
        entries = [entry]
    identities = IDENTITIES if args.identity == "all" else (args.identity,)
    if args.identity not in IDENTITIES and args.identity != "all":
        raise _Usage(f"unknown identity {args.identity!r}; choose from {', '.join(IDENTITIES)} or all")
    element = None
    if args.element != "all":
        try:
            element = int(args.element)
        except ValueError:
            raise _Usage(f"--element must be an integer or 'all', got {args.element!r}") from None
        for entry in entries:
            n = entry.spec.n
            if not 0 <= element < n:
                raise _Usage(f"element {element} outside the ground set of {entry.name} (size {n})")
    results = run_tasks(_tasks(entries, identities, element))
    print(_dumps(results))
    return EXIT_FAIL if any(r["result"] == "fail" for r in results) else EXIT_OK


def cmd_corpus(args):
    if args.list == bool(args.dump):
        raise _Usage("corpus needs exactly one of --list or --dump DIR")
    if args.list:
        for name in corpus.builtin_names():
            e = corpus.BUILTINS[name]
            print(f"{name}\t{e.spec.type}\tn={e.spec.n}")
        return EXIT_OK
    try:
        for path in corpus.dump_corpus(args.dump):
            print(path)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


class _Usage(Exception):
    pass


def build_parser():
    p = argparse.ArgumentParser(prog="matroid-csm", description="Staircase classes and CSM cycles of matroids.")
    sub = p.add_subparsers(dest="command", required=True)

    info = sub.add_parser("info", help="matroid summary")
    info.add_argument("target", help="JSON file or builtin name")
    info.add_argument("--format", choices=("json", "tsv"), default="tsv")
    info.set_defaults(func=cmd_info)

    c = sub.add_parser("csm", help="normalized staircase class and CSM weights")
    c.add_argument("target")
    c.add_argument("--route", choices=("degree", "divisor", "both"), default="degree")
    c.add_argument("--format", choices=("json", "tsv"), default="tsv")
    c.set_defaults(func=cmd_csm)

    v = sub.add_parser("verify", help="check identities exactly; JSON report")
    v.add_argument("target", nargs="?")
    v.add_argument("--corpus", action="store_true", help="run over every builtin")
    v.add_argument("--identity", default="all")
    v.add_argument("--element", default="all")
    v.set_defaults(func=cmd_verify)

    k = sub.add_parser("corpus", help="list or dump the builtin corpus")
    k.add_argument("--list", action="store_true")
    k.add_argument("--dump", metavar="DIR")
    k.set_defaults(func=cmd_corpus)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _Usage as exc:
        parser.error(str(exc))
    except MatroidCSMError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
