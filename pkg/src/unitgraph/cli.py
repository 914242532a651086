"""Command-line entry point: ``unitgraph <subcommand> ...``."""

from __future__ import annotations

import argparse
import json
import sys

from .errors import DomainError, ResourceError
from .gf_linalg import matrix_to_text
from .incidence_codes import code_from_incidence, decode_trials, default_budget, dual_code, incidence_matrix
from .ring_core import RingSpec, ring_of
from .unit_graph import build_unit_graph, graph_to_text
from .verify_harness import DEFAULT_Q, code_field, crt_isomorphism_check, report, sweep


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="unitgraph", description="Unit graphs of Z_n and their incidence codes.")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("report", help="verification report for one n")
    r.add_argument("--n", type=int, required=True)
    r.add_argument("--q", type=int, default=DEFAULT_Q, help="odd prime for even n (default 3)")
    r.add_argument("--format", default="json", help="json or text")

    s = sub.add_parser("sweep", help="CSV of reports for a range of n")
    s.add_argument("--from", dest="start", type=int, required=True)
    s.add_argument("--to", dest="stop", type=int, required=True)
    s.add_argument("--q", type=int, default=DEFAULT_Q)
    s.add_argument("--out", required=True)
    s.add_argument("--jobs", type=int, default=1, help="worker processes")

    c = sub.add_parser("check-crt", help="check the CRT graph isomorphism for n")
    c.add_argument("--n", type=int, required=True)

    m = sub.add_parser("export-matrix", help="write the incidence matrix over F_q")
    m.add_argument("--n", type=int, required=True)
    m.add_argument("--q", type=int, required=True)
    m.add_argument("--out", required=True)

    g = sub.add_parser("export-graph", help="write the edge list of G(Z_n)")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--out", required=True)

    d = sub.add_parser("decode-demo", help="single-error decoding trials on the dual incidence code")
    d.add_argument("--n", type=int, required=True)
    d.add_argument("--q", type=int, default=None, help="field; default 2 for odd n, 3 for even n")
    d.add_argument("--errors", type=int, default=1)
    d.add_argument("--trials", type=int, default=1000)
    d.add_argument("--seed", type=int, default=0)
    return p


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    try:
        return _run(args)
    except (DomainError, ResourceError, OSError) as exc:
        print(f"unitgraph: error: {exc}", file=sys.stderr)
        return 2


def _run(args) -> int:
    if args.command == "report":
        if args.format not in ("json", "text"):
            print(f"unitgraph: error: unknown format {args.format!r}", file=sys.stderr)
            return 2
        sys.stdout.write(report(args.n, args.q, args.format))
        return 0
    if args.command == "sweep":
        return sweep(args.start, args.stop, args.q, args.out, jobs=args.jobs)
    if args.command == "check-crt":
        ok = crt_isomorphism_check(args.n)
        print("true" if ok else "false")
        return 0 if ok else 1
    if args.command == "export-matrix":
        g = build_unit_graph(RingSpec([args.n]))
        with open(args.out, "w") as fh:
            fh.write(matrix_to_text(incidence_matrix(g, args.q)))
        return 0
    if args.command == "export-graph":
        g = build_unit_graph(RingSpec([args.n]))
        with open(args.out, "w") as fh:
            fh.write(graph_to_text(g))
        return 0
    if args.command == "decode-demo":
        q = args.q if args.q is not None else code_field(args.n, DEFAULT_Q)
        g = build_unit_graph(ring_of(args.n))
        dual = dual_code(code_from_incidence(g, q, 0), default_budget())
        tally = decode_trials(dual, args.errors, args.trials, args.seed)
        print(json.dumps({"n": args.n, "q": q, "code": str(dual), "errors": args.errors,
                          "seed": args.seed, **tally}, sort_keys=True))
        return 0
    raise AssertionError(args.command)


if __name__ == "__main__":
    sys.exit(main())
