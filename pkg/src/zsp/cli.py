"""Command line interface: ``zsp info | partition | verify | skolem | search | label``.

Every command prints one JSON document on stdout.  Exit status is 0 on
success, 1 when the request is infeasible or refused, 2 on bad input.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from .errors import InputError, PreconditionViolated, ZspError
from .groups import GroupSpec, group_sum, involution_count, sylow2_split
from .partition import (
    QuadrupleWABC,
    TripleABC,
    ZeroSumPartition,
    parse_appendix,
    parse_sizes,
    parts_from_json,
    verify_partition,
)

EXIT_OK, EXIT_REFUSED, EXIT_INPUT = 0, 1, 2


class _Refused(Exception):
    def __init__(self, payload: dict):
        super().__init__(payload.get("reason", ""))
        self.payload = payload


def _emit(payload) -> None:
    sys.stdout.write(json.dumps(payload, sort_keys=True) + "\n")


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def _refusal(exc: ZspError) -> dict:
    out = {"status": "refused", "error": type(exc).__name__, "reason": str(exc)}
    for attr in ("status", "condition"):
        val = getattr(exc, attr, None)
        if val:
            out["detail" if attr == "status" else "condition"] = val
    return out


# ---------------------------------------------------------------- commands

def cmd_info(args) -> dict:
    from .engine import classify

    spec = GroupSpec.parse(args.group)
    split = sylow2_split(spec)
    return {
        "group": str(spec),
        "factors": list(spec.factors),
        "order": spec.order,
        "involutions": involution_count(spec),
        "groupSum": list(group_sum(spec)),
        "sylow2": split.to_json(),
        "class": classify(spec).to_json(),
    }


def _requested_sizes(args) -> list[int]:
    given = [x for x in (args.sizes, args.triple, args.quadruple) if x]
    if len(given) != 1:
        raise InputError("give exactly one of SIZES, --triple or --quadruple")
    if args.triple:
        return TripleABC.parse(args.triple).sizes()
    if args.quadruple:
        return QuadrupleWABC.parse(args.quadruple).sizes()
    return parse_sizes(args.sizes)


def cmd_partition(args) -> dict:
    from .engine import realize
    from .oracle import FOUND, SearchBudget, search_partition

    spec = GroupSpec.parse(args.group)
    sizes = _requested_sizes(args)
    if sum(sizes) != spec.order - 1:
        raise InputError(f"sizes sum to {sum(sizes)}, expected |G| - 1 = {spec.order - 1}")
    trace = None
    if args.engine == "oracle":
        res = search_partition(spec, None, sizes, SearchBudget.from_env())
        if res.outcome != FOUND:
            raise _Refused({"status": "refused", "error": res.outcome,
                            "reason": f"oracle: {res.outcome} after {res.nodes} nodes"})
        part = res.partition
    else:
        part, trace = realize(spec, sizes)
    rep = verify_partition(spec, part.parts, sizes)
    if not rep.ok:  # pragma: no cover - engines verify their output already
        raise RuntimeError(f"unverified partition: {rep.issues}")
    out = {"status": "ok", "group": str(spec), "sizes": sorted(sizes),
           "parts": part.to_json(), "verification": rep.to_json()}
    if args.trace and trace is not None:
        out["trace"] = trace.to_json()
    return out


def cmd_verify(args) -> dict:
    spec = GroupSpec.parse(args.group)
    text = _read(args.file)
    if args.appendix_format:
        tables = [t for t in parse_appendix(text) if not t.factors or t.factors == spec.factors]
        if not tables:
            raise InputError(f"no tables for {spec} in {args.file}")
        results = []
        for t in tables:
            expected = args.profile or t.profile or (
                TripleABC(*t.triple).sizes() if len(t.triple) == 3 else None)
            rep = verify_partition(spec, t.parts, expected)
            results.append({"triple": list(t.triple), **rep.to_json()})
        ok = all(r["verdict"] == "pass" for r in results)
        out = {"status": "ok" if ok else "fail", "group": str(spec), "tables": results}
    else:
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"{args.file} is not JSON: {exc}") from exc
        rep = verify_partition(spec, parts_from_json(data), args.profile)
        if not rep.well_formed:
            raise InputError("; ".join(rep.issues))
        ok = rep.ok
        out = {"status": "ok" if ok else "fail", "group": str(spec), **rep.to_json()}
    if not ok:
        raise _Refused(out)
    return out


def cmd_skolem(args) -> dict:
    from .oracle import FOUND, SearchBudget
    from .skolem import skolem_partition, skolem_subset

    spec = GroupSpec.parse(args.group)
    if args.subset:
        subset = [tuple(int(x) for x in e) for e in json.loads(_read(args.subset))]
        res = skolem_subset(spec, subset, SearchBudget.from_env())
        if res.outcome != FOUND:
            raise _Refused({"status": "refused", "error": res.outcome,
                            "reason": f"Skolem search: {res.outcome} after {res.nodes} nodes"})
        sk = res.partition
    else:
        if spec.order % 2 == 0:
            raise InputError(f"{spec} has even order; pass --subset")
        sk = skolem_partition(spec)
    if not sk.verify():  # pragma: no cover
        raise RuntimeError("Skolem partition failed verification")
    return {"status": "ok", **sk.to_json(), "sixCount": len(sk.sixes), "pairCount": len(sk.pairs)}


def cmd_search(args) -> dict:
    from .oracle import FOUND, SearchBudget, enumerate_realizable, search_partition

    spec = GroupSpec.parse(args.group)
    if args.enumerate is not None:
        table = enumerate_realizable(spec, args.enumerate)
        return {"status": "ok", "group": str(spec), "minPart": args.enumerate,
                "verdicts": [{"sizes": list(k), "outcome": v} for k, v in table.verdicts.items()]}
    if not args.sizes:
        raise InputError("give SIZES or --enumerate MIN_PART")
    sizes = parse_sizes(args.sizes)
    ground = None
    if args.ground:
        ground = [spec.check(e) for e in json.loads(_read(args.ground))]
    res = search_partition(spec, ground, sizes, SearchBudget.from_env())
    out = {"group": str(spec), "sizes": sorted(sizes), **res.stats()}
    if res.outcome != FOUND:
        out.update(status="refused", reason=f"oracle: {res.outcome}")
        raise _Refused(out)
    out.update(status="ok", parts=res.partition.to_json())
    return out


def cmd_label(args) -> dict:
    from . import labeling as lab

    text = _read(args.graph)
    if args.kind == "join":
        g = lab.load_graph(text)
        padded, assignment = lab.pad_to_min_twins(g, args.twins, args.floor)
        return {"status": "ok", "graph": padded.to_json(),
                "assignment": {str(v): [p.kind, p.k] for v, p in sorted(assignment.items())}}
    if not args.group:
        raise InputError(f"label {args.kind} needs a group")
    spec = GroupSpec.parse(args.group)
    if args.kind == "irregular":
        d = lab.load_digraph(text)
        res = lab.irregular_label(d, spec, override=args.override)
        if not res.check(d) or len(set(res.induced.values())) != d.n:  # pragma: no cover
            raise RuntimeError("irregular labeling failed verification")
        return {"status": "ok", "group": str(spec), **res.to_json(),
                "feasibility": lab.irregular_feasibility(d, spec).to_json()}
    g = lab.load_graph(text)
    fn = lab.distance_magic_label if args.kind == "magic" else lab.distance_antimagic_label
    res = fn(g, spec)
    if res.weights != lab.vertex_weights(spec, g, res.ell):  # pragma: no cover
        raise RuntimeError("vertex labeling failed verification")
    return {"status": "ok", "group": str(spec), **res.to_json()}


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="zsp", description="Zero-sum partitions of finite Abelian groups.")
    p.add_argument("--threads", type=int, default=1,
                   help="accepted for compatibility; searches run sequentially")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("info", help="order, involutions, Sylow split and class")
    s.add_argument("group", help='group such as "Z2xZ4"')
    s.set_defaults(func=cmd_info)

    s = sub.add_parser("partition", help="realize a size request")
    s.add_argument("group")
    s.add_argument("sizes", nargs="?", help="comma separated part sizes")
    s.add_argument("--triple", help="a,b,c: a parts of 3, b of 4, c of 5")
    s.add_argument("--quadruple", help="w,a,b,c: adds w parts of 2")
    s.add_argument("--engine", choices=("constructive", "oracle"), default="constructive")
    s.add_argument("--trace", action="store_true", help="include the construction trace")
    s.set_defaults(func=cmd_partition)

    s = sub.add_parser("verify", help="check a partition file")
    s.add_argument("group")
    s.add_argument("file", help="JSON list of parts, or appendix text with --appendix-format")
    s.add_argument("--profile", help='expected profile such as "5*3 2*4 0*5"')
    s.add_argument("--appendix-format", action="store_true")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("skolem", help="Skolem partition of an odd group or a subset")
    s.add_argument("group")
    s.add_argument("--subset", help="JSON list of elements (even size)")
    s.set_defaults(func=cmd_skolem)

    s = sub.add_parser("search", help="exhaustive oracle")
    s.add_argument("group")
    s.add_argument("sizes", nargs="?")
    s.add_argument("--ground", help="JSON list of elements to partition instead of G*")
    s.add_argument("--enumerate", type=int, metavar="MIN_PART",
                   help="verdict for every multiset with parts >= MIN_PART")
    s.set_defaults(func=cmd_search)

    s = sub.add_parser("label", help="graph labelings")
    s.add_argument("kind", choices=("irregular", "magic", "antimagic", "join"))
    s.add_argument("graph", help='edge list ("u v" per line) or JSON {"n", "edges"}')
    s.add_argument("group", nargs="?")
    s.add_argument("--override", action="store_true",
                   help="irregular: skip the default preconditions and ask the engine")
    s.add_argument("--twins", choices=("false", "true"), default="false", help="join: twin kind")
    s.add_argument("--floor", type=int, default=4, help="join: minimum class size")
    s.set_defaults(func=cmd_label)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        payload = args.func(args)
    except _Refused as exc:
        _emit(exc.payload)
        return EXIT_REFUSED
    except (InputError, PreconditionViolated, json.JSONDecodeError) as exc:
        _emit({"status": "error", "error": type(exc).__name__, "reason": str(exc)})
        print(f"zsp: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ZspError as exc:
        _emit(_refusal(exc))
        print(f"zsp: {exc}", file=sys.stderr)
        return EXIT_REFUSED
    _emit(payload)
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
