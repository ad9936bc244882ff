"""Command-line front end: file ingestion, subcommand dispatch, and
machine-readable reports.

Exit codes: 0 all checks pass, 1 a mathematical property failed (the
report names a counterexample), 2 input or usage error.  Output is
byte-deterministic for fixed inputs; BURNSIDE_LAB_SEED only permutes
sweep order, never results.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from . import horn, rings, retract, simplicial, spans
from .errors import InputError, ResourceLimitError
from .groups import FiniteGroup, named_group
from .gsets import GMap, GSet
from .mackey import MackeyFunctor, check_mackey_axioms
from .spans import Span, TripleStructure, span_class


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def load_group(ref):
    """A builtin name (C4, S3, D4, Q8, V4) or a path to a group JSON file."""
    if os.path.exists(ref):
        return FiniteGroup.from_json(_load_json(ref))
    try:
        return named_group(ref)
    except InputError:
        raise InputError(
            f"{ref!r} is neither a readable file nor a builtin group name")


def _group_of_record(data):
    ref = data.get("group")
    if isinstance(ref, str):
        return load_group(ref)
    if isinstance(ref, dict):
        return FiniteGroup.from_json(ref)
    raise InputError("record needs a 'group' field (name or inline object)")


def load_gset(path, group=None):
    data = _load_json(path)
    if group is None:
        group = _group_of_record(data)
    return GSet.from_json(data, group=group)


def load_span(path):
    data = _load_json(path)
    try:
        group = _group_of_record(data["apex"])
        apex = GSet.from_json(data["apex"], group=group)
        src = GSet.from_json(data["left"]["target"], group=group)
        tgt = GSet.from_json(data["right"]["target"], group=group)
        left = GMap(apex, src, data["left"]["images"])
        right = GMap(apex, tgt, data["right"]["images"])
    except (KeyError, TypeError) as exc:
        raise InputError(f"bad span record in {path}: {exc}") from exc
    return Span(left, right)


def span_to_json(span):
    return {"apex": span.apex.to_json(),
            "left": {"source": span.apex.to_json(),
                     "target": span.source.to_json(),
                     "images": list(span.left.images)},
            "right": {"source": span.apex.to_json(),
                      "target": span.target.to_json(),
                      "images": list(span.right.images)}}


def emit(payload, fmt):
    if fmt == "csv":
        if not (isinstance(payload, dict) and "matrix" in payload):
            raise InputError("csv output is only available for matrices")
        lines = [",".join(str(x) for x in row) for row in payload["matrix"]]
        sys.stdout.write("\n".join(lines) + "\n")
    elif fmt == "text":
        sys.stdout.write(_as_text(payload) + "\n")
    else:
        sys.stdout.write(json.dumps(payload, sort_keys=True,
                                    separators=(",", ": "), indent=1) + "\n")


def _as_text(payload, indent=""):
    if isinstance(payload, dict):
        out = []
        for k in sorted(payload):
            v = payload[k]
            if isinstance(v, (dict, list)):
                out.append(f"{indent}{k}:")
                out.append(_as_text(v, indent + "  "))
            else:
                out.append(f"{indent}{k}: {v}")
        return "\n".join(out)
    if isinstance(payload, list):
        return "\n".join(f"{indent}- {json.dumps(v, sort_keys=True)}"
                         for v in payload)
    return f"{indent}{payload}"


# --- subcommands -------------------------------------------------------------


def cmd_marks(args):
    group = load_group(args.group)
    marks = rings.table_of_marks(group)
    payload = {"group": group.name, "matrix": marks.as_lists(),
               "determinant": marks.determinant()}
    emit(payload, args.format or "csv")
    return 0


def cmd_burnside_product(args):
    group = load_group(args.group)
    ring = rings.burnside_ring(group)
    ok = ring.verify_ring_axioms()
    payload = {"group": group.name, "rank": ring.rank,
               "unit_index": ring.unit_index,
               "structure_constants": {
                   f"{i},{j}": list(ring.constants[(i, j)])
                   for i in range(ring.rank) for j in range(ring.rank)},
               "ring_axioms": ok}
    emit(payload, args.format or "json")
    return 0 if ok else 1


def cmd_mackey_check(args):
    group = load_group(args.group)
    data = _load_json(args.functor)
    functor = MackeyFunctor.from_json(data, group=group)
    report = check_mackey_axioms(functor)
    payload = {"group": group.name, "functor": functor.name,
               "ok": report.ok,
               "axioms": [{"name": e.name, "ok": e.ok,
                           "counterexample": e.counterexample}
                          for e in report.entries]}
    emit(payload, args.format or "json")
    return 0 if report.ok else 1


def cmd_span_compose(args):
    s1 = load_span(args.first)
    s2 = load_span(args.second)
    composed = spans.compose(span_class(s1), span_class(s2))
    rep = composed.representative()
    payload = {"atoms": [{"stabilizer_class": c, "left": list(u),
                          "right": list(v)}
                         for (c, u, v) in composed.atoms],
               "apex_points": rep.apex.n_points,
               "result": span_to_json(rep)}
    emit(payload, args.format or "json")
    return 0


def cmd_span_check_triple(args):
    group = load_group(args.group)
    triple = TripleStructure(group, args.ingressive, args.egressive)
    report = spans.check_triple_adequate(triple, max_points=args.max_points,
                                         coproduct_points=min(args.max_points, 2))
    emit(report, args.format or "json")
    return 0 if report["adequate"] else 1


def cmd_subdivide(args):
    if args.input:
        raise InputError("only standard simplices are supported as input here")
    x_set = simplicial.standard_simplex(args.m)
    sub = simplicial.edgewise_subdivision(x_set)
    payload = sub.to_json()
    payload["cells_per_dim"] = {str(n): sub.n_cells(n)
                                for n in sorted(sub.simplices)}
    emit(payload, args.format or "json")
    return 0


def cmd_twisted_arrow(args):
    if args.group:
        cat = simplicial.FiniteCategory.from_group(load_group(args.group))
        cap = args.cap if args.cap is not None else 3
    elif args.m is not None:
        cat = simplicial.FiniteCategory.chain(args.m)
        cap = args.cap if args.cap is not None else args.m
    else:
        raise InputError("twisted-arrow needs --m or --group")
    tw = simplicial.twisted_arrow_category(cat)
    nerve = simplicial.nerve(tw, cap)
    proj = simplicial.twisted_arrow_projection(cat, tw)
    payload = nerve.to_json()
    payload["objects"] = len(tw.objects)
    payload["morphisms"] = tw.n_morphisms
    payload["discrete_opfibration"] = simplicial.is_discrete_opfibration(proj)
    emit(payload, args.format or "json")
    return 0 if payload["discrete_opfibration"] else 1


def cmd_homology(args):
    x_set = simplicial.standard_simplex(args.m)
    if args.edgewise:
        x_set = simplicial.edgewise_subdivision(x_set)
    max_deg = args.max_deg if args.max_deg is not None else \
        max(x_set.max_dim(), 0)
    hom = simplicial.homology(x_set, max_deg)
    payload = {"reduced_homology": {str(n): v for n, v in hom.items()}}
    emit(payload, args.format or "json")
    return 0


def cmd_horn_classify(args):
    jobs = args.jobs or os.cpu_count() or 1
    disagreements = _horn_sweep(args.m, jobs)
    exceptional = {}
    for k in range(args.m) if args.k is None else [args.k]:
        exceptional[str(k)] = [
            {"N": n, "essential_vertices": sorted(e)}
            for n, e in horn.exceptional_cases(args.m, k)]
    payload = {"m": args.m,
               "oracle_formula_disagreements": disagreements,
               "exceptional_cases": exceptional}
    emit(payload, args.format or "json")
    return 0 if not disagreements else 1


def _horn_worker(task):
    m, big_n, k = task
    return (big_n, k, horn.oracle_matches_formula(m, big_n, k))


def _horn_sweep(m, jobs):
    tasks = [(m, big_n, k) for k in range(m)
             for big_n in horn._sweep_order(1 << m)]
    if jobs > 1:
        import multiprocessing
        with multiprocessing.Pool(jobs) as pool:
            results = pool.map(_horn_worker, tasks)
    else:
        results = [_horn_worker(t) for t in tasks]
    return sorted([big_n, k] for big_n, k, ok in results if not ok)


def cmd_horn_oracle(args):
    payload = horn.oracle_report(args.m, args.n, args.k)
    emit(payload, args.format or "json")
    if args.k < args.m and not payload["matches_formula"]:
        return 1
    return 0


def cmd_horn_anodyne(args):
    s_set = frozenset(int(x) for x in args.s.split(","))
    star = horn.is_condition_star(args.m, s_set)
    payload = {"m": args.m, "S": sorted(s_set), "condition_star": star}
    if star:
        dec = horn.anodyne_decomposition(args.m, s_set)
        payload["fill_sequence"] = [{"simplex": list(t), "horn_at": j}
                                    for t, j in dec.steps]
        payload["replay_ok"] = dec.replay()
        emit(payload, args.format or "json")
        return 0 if payload["replay_ok"] else 1
    emit(payload, args.format or "json")
    return 0


def cmd_tomdieck(args):
    group = load_group(args.group)
    report = retract.tomdieck_monoid_check(group, max_n=args.max_points)
    report["details"]["aut_equals_weyl"] = {
        str(k): v for k, v in report["details"]["aut_equals_weyl"].items()}
    emit(report, args.format or "json")
    return 0 if report["ok"] else 1


def cmd_unfurl_check(args):
    group = load_group(args.group)
    report = retract.unfurl_functoriality_check(group,
                                                max_points=args.max_points)
    payload = {"group": report.group_name, "max_points": report.max_points,
               "pairs_checked": report.pairs_checked,
               "ok": report.ok, "failures": report.failures}
    emit(payload, args.format or "json")
    return 0 if report.ok else 1


def cmd_burnside_theorem(args):
    group = load_group(args.group)
    base = load_gset(args.base, group=group)
    report = retract.verify_burnside_theorem(group, base)
    emit(report, args.format or "json")
    return 0 if report["ok"] else 1


def build_parser():
    parser = argparse.ArgumentParser(
        prog="burnside-lab",
        description="Finite Burnside categories, Mackey functors and "
                    "horn-filling combinatorics, with brute-force oracles.")
    parser.add_argument("--format", choices=["json", "csv", "text"],
                        help="output format (default json; csv for matrices)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("marks", help="table of marks")
    p.add_argument("--group", required=True)
    p.set_defaults(func=cmd_marks)

    p = sub.add_parser("burnside-product", help="Burnside ring structure constants")
    p.add_argument("--group", required=True)
    p.set_defaults(func=cmd_burnside_product)

    p = sub.add_parser("mackey-check", help="verify the Mackey axioms")
    p.add_argument("--group", required=True)
    p.add_argument("--functor", required=True)
    p.set_defaults(func=cmd_mackey_check)

    p = sub.add_parser("span", help="span category operations")
    span_sub = p.add_subparsers(dest="span_command", required=True)
    pc = span_sub.add_parser("compose", help="compose two spans by pullback")
    pc.add_argument("first")
    pc.add_argument("second")
    pc.set_defaults(func=cmd_span_compose)
    pt = span_sub.add_parser("check-triple", help="verify triple axioms")
    pt.add_argument("--group", required=True)
    pt.add_argument("--ingressive", default="all")
    pt.add_argument("--egressive", default="all")
    pt.add_argument("--max-points", type=int, default=3)
    pt.set_defaults(func=cmd_span_check_triple)

    p = sub.add_parser("subdivide", help="edgewise subdivision of a simplex")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--input", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_subdivide)

    p = sub.add_parser("twisted-arrow", help="twisted arrow category and nerve")
    p.add_argument("--m", type=int)
    p.add_argument("--group")
    p.add_argument("--cap", type=int)
    p.set_defaults(func=cmd_twisted_arrow)

    p = sub.add_parser("homology", help="reduced integer homology")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--edgewise", action="store_true")
    p.add_argument("--max-deg", type=int)
    p.set_defaults(func=cmd_homology)

    p = sub.add_parser("horn", help="walk/horn combinatorics")
    horn_sub = p.add_subparsers(dest="horn_command", required=True)
    ph = horn_sub.add_parser("classify",
                             help="oracle-vs-formula sweep and exceptional cases")
    ph.add_argument("--m", type=int, required=True)
    ph.add_argument("--k", type=int)
    ph.add_argument("--jobs", type=int)
    ph.set_defaults(func=cmd_horn_classify)
    po = horn_sub.add_parser("oracle", help="one intersection computation")
    po.add_argument("--m", type=int, required=True)
    po.add_argument("--n", type=int, required=True)
    po.add_argument("--k", type=int, required=True)
    po.set_defaults(func=cmd_horn_oracle)
    pa = horn_sub.add_parser("anodyne", help="inner-anodyne fill sequence")
    pa.add_argument("--m", type=int, required=True)
    pa.add_argument("--s", required=True, help="comma-separated vertex set")
    pa.set_defaults(func=cmd_horn_anodyne)

    p = sub.add_parser("tomdieck", help="free-monoid and splitting checks")
    p.add_argument("--group", required=True)
    p.add_argument("--max-points", type=int, default=4)
    p.set_defaults(func=cmd_tomdieck)

    p = sub.add_parser("unfurl-check", help="Beck-Chevalley functoriality on K0")
    p.add_argument("--group", required=True)
    p.add_argument("--max-points", type=int, default=4)
    p.set_defaults(func=cmd_unfurl_check)

    p = sub.add_parser("burnside-theorem", help="K0 of retractives vs spans")
    p.add_argument("--group", required=True)
    p.add_argument("--base", required=True, help="G-set JSON file")
    p.set_defaults(func=cmd_burnside_theorem)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, ResourceLimitError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
