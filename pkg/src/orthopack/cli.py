"""Command line: ``orthopack {run,adversary,gen,render,report}``.

The exit status is nonzero exactly when a packing is invalid or an audited
bound fails; usage errors exit with status 2.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional

from . import io as fio
from .geometry import UNIT, validate_packing
from .harness import ADVERSARIES, ALGORITHMS, GENERATORS, MatchResult, RoutingError, generate, run_adversary, run_match
from .render import render_svg


def _write(path: Optional[str], text: str) -> None:
    if path:
        with open(path, "w") as fh:
            fh.write(text)


def _finish(res: MatchResult, args) -> int:
    print(res.summary())
    _write(args.trace_out, res.trace)
    if res.packing is not None:
        _write(args.svg_out, render_svg(res.packing, res.violations))
        if args.packing_out:
            fio.save_packing(res.packing, args.packing_out)
    if getattr(args, "certificate_out", None) and res.certificate is not None:
        fio.save_packing(res.certificate, args.certificate_out)
    if args.json:
        print(json.dumps(res.to_dict(), sort_keys=True))
    return 0 if res.ok else 1


def cmd_run(args) -> int:
    inst = fio.load_instance(args.instance)
    res = run_match(inst, args.algorithm, bound_audit=args.bound_audit, command=args.command)
    return _finish(res, args)


def cmd_adversary(args) -> int:
    res = run_adversary(args.family, args.n, args.algorithm, seed=args.seed, t=args.t)
    return _finish(res, args)


def cmd_gen(args) -> int:
    inst = generate(args.family, args.n, seed=args.seed, t=args.t)
    text = inst.to_json()
    if args.out:
        _write(args.out, text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_render(args) -> int:
    packing = fio.load_packing(args.packing)
    bad = validate_packing(packing, None if args.plane else UNIT)
    svg = render_svg(packing, bad)
    if args.svg_out:
        _write(args.svg_out, svg)
    else:
        sys.stdout.write(svg)
    return 1 if bad else 0


def cmd_report(args) -> int:
    packing = fio.load_packing(args.packing)
    bad = validate_packing(packing, None if args.plane else UNIT)
    print(f"items={len(packing)} bins={packing.bin_count} {'valid' if not bad else 'INVALID'}")
    for v in bad:
        print(f"  {v.kind} bin={v.bin} items={list(v.items)} {v.detail}".rstrip())
    return 1 if bad else 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="orthopack", description="Online packing of orthogonal polygons.")
    sub = p.add_subparsers(dest="command_name", required=True)

    def outputs(sp):
        sp.add_argument("--trace-out", help="write the per-step trace here")
        sp.add_argument("--svg-out", help="write an SVG rendering here")
        sp.add_argument("--packing-out", help="write the packing as JSON here")
        sp.add_argument("--json", action="store_true", help="also print the result as JSON")

    r = sub.add_parser("run", help="run an online algorithm on an instance file")
    r.add_argument("instance")
    r.add_argument("--algorithm", required=True, choices=sorted(ALGORITHMS))
    r.add_argument("--bound-audit", action="store_true", help="check the algorithm's guarantee")
    r.add_argument("--command", help="external program for custom-via-trace")
    outputs(r)
    r.set_defaults(func=cmd_run)

    a = sub.add_parser("adversary", help="play a lower-bound adversary")
    a.add_argument("--family", required=True, choices=ADVERSARIES)
    a.add_argument("--n", type=int, required=True)
    a.add_argument("--algorithm", help="algorithm or response policy facing the adversary")
    a.add_argument("--seed", type=int, default=0)
    a.add_argument("--t", help="arm bound for density-ub, a rational string")
    a.add_argument("--bound-audit", action="store_true", help="accepted for symmetry; adversaries always audit")
    a.add_argument("--certificate-out", help="write the one-bin certificate as JSON here")
    outputs(a)
    a.set_defaults(func=cmd_adversary)

    g = sub.add_parser("gen", help="generate a seeded instance file")
    g.add_argument("--family", required=True, choices=GENERATORS)
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--t", help="arm bound for density-budget, a rational string")
    g.add_argument("--out", help="output path (default stdout)")
    g.set_defaults(func=cmd_gen)

    v = sub.add_parser("render", help="render a packing file to SVG")
    v.add_argument("packing")
    v.add_argument("--svg-out")
    v.add_argument("--plane", action="store_true", help="no unit-bin containment check")
    v.set_defaults(func=cmd_render)

    rp = sub.add_parser("report", help="validate a packing file and summarize it")
    rp.add_argument("packing")
    rp.add_argument("--plane", action="store_true", help="no unit-bin containment check")
    rp.set_defaults(func=cmd_report)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (RoutingError, ValueError, OSError) as exc:
        print(f"orthopack: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
