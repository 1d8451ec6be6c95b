"""Command-line interface.

Subcommands: gen, spr, spr-general, decompose, eval, compare.  Exit codes:
0 when every invariant check passed, 1 when a violation was found, 2 on
usage errors.
"""

from __future__ import annotations

import argparse
import random
import sys

from . import reports
from .decomp import evaluate_requirements, verify_decomposition
from .errors import GraphFormatError, InvariantViolation
from .general import spr_general
from .graph import format_edge_list, load_graph
from .harness import (
    STRETCH_SLACK,
    FAMILIES,
    amplify,
    compare_baseline,
    distortion,
    evaluate_partition,
    generate,
)
from .minor import TerminalMinor
from .seeds import STREAM_DECOMP, mix
from .spr import DEFAULT_ASPECT_THRESHOLD, run_partition, rescale_to_unit_min


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sprkit",
        description="Steiner point removal toolkit: terminal-centered minors, "
        "randomized decompositions, and distortion measurement.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--seed", type=int, default=0, help="master seed")
        p.add_argument("--report", choices=("json", "csv"), default="json")
        p.add_argument("--out", default=None, metavar="FILE", help="write output here")

    p_gen = sub.add_parser("gen", help="generate an instance (edge-list text)")
    common(p_gen)
    p_gen.add_argument("--family", choices=FAMILIES, required=True)
    p_gen.add_argument("--n", type=int)
    p_gen.add_argument("--k", type=int)
    p_gen.add_argument("--rows", type=int)
    p_gen.add_argument("--cols", type=int)
    p_gen.add_argument("--p", type=float)
    p_gen.add_argument("--placement", choices=("spread", "uniform"))
    p_gen.add_argument("--wmin", type=float)
    p_gen.add_argument("--wmax", type=float)
    p_gen.add_argument("--clique", type=int)
    p_gen.add_argument("--bridge-weight", type=float)
    p_gen.add_argument("--steiner-per-side", type=int)

    p_spr = sub.add_parser("spr", help="ball-growing partition and its stretch")
    common(p_spr)
    p_spr.add_argument("--input", required=True)
    p_spr.add_argument("--trials", type=int, default=1)
    p_spr.add_argument("--trace", action="store_true", help="embed the best trial's growth trace")
    p_spr.add_argument("--b-override", type=float, default=None)
    p_spr.add_argument(
        "--rate-interpretation",
        action="store_true",
        help="treat b^i as the exponential rate instead of the mean",
    )
    p_spr.add_argument("--timings", action="store_true", help="include wall times (breaks byte-stability)")

    p_gen2 = sub.add_parser("spr-general", help="scale-gap recursion for any aspect ratio")
    common(p_gen2)
    p_gen2.add_argument("--input", required=True)
    p_gen2.add_argument("--threshold", type=float, default=DEFAULT_ASPECT_THRESHOLD)
    p_gen2.add_argument("--timings", action="store_true")

    p_dec = sub.add_parser("decompose", help="Monte-Carlo decomposition checks")
    common(p_dec)
    p_dec.add_argument("--input", required=True)
    p_dec.add_argument("--delta", type=float, required=True)
    p_dec.add_argument("--trials", type=int, default=1000)

    p_eval = sub.add_parser("eval", help="stretch of a stored minor against its graph")
    common(p_eval)
    p_eval.add_argument("--input", required=True, help="original graph edge list")
    p_eval.add_argument("--minor", required=True, help="minor edge list (vertex i = i-th terminal)")

    p_cmp = sub.add_parser("compare", help="baseline vs amplified construction")
    common(p_cmp)
    p_cmp.add_argument("--input", required=True)
    p_cmp.add_argument("--trials", type=int, default=8)
    p_cmp.add_argument("--threshold", type=float, default=DEFAULT_ASPECT_THRESHOLD)
    p_cmp.add_argument("--timings", action="store_true")

    return parser


def _emit(args, doc: dict | None, raw: str | None = None) -> None:
    if raw is None:
        assert doc is not None
        raw = reports.render_json(doc) if args.report == "json" else reports.render_csv(doc)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(raw)
    else:
        sys.stdout.write(raw)


def _stretch_ok(stretch) -> bool:
    return all(x >= 1.0 - STRETCH_SLACK for row in stretch for x in row)


def _cmd_gen(args) -> int:
    params = {
        key: getattr(args, attr)
        for key, attr in (
            ("n", "n"),
            ("k", "k"),
            ("rows", "rows"),
            ("cols", "cols"),
            ("p", "p"),
            ("placement", "placement"),
            ("wmin", "wmin"),
            ("wmax", "wmax"),
            ("clique", "clique"),
            ("bridge_weight", "bridge_weight"),
            ("steiner_per_side", "steiner_per_side"),
        )
        if getattr(args, attr) is not None
    }
    g = generate(args.family, seed=args.seed, **params)
    _emit(args, None, raw=format_edge_list(g))
    return 0


def _cmd_spr(args) -> int:
    g = load_graph(args.input)
    options = {}
    if args.b_override is not None:
        options["b_override"] = args.b_override
    if args.rate_interpretation:
        options["rate_parameterization"] = True
    amplified = amplify(g, "alg1", args.trials, args.seed, alg1_options=options)
    payload = reports.amplified_to_dict(amplified, include_timings=args.timings)
    payload["instance"] = {"input": args.input, "n": g.n, "m": g.m, "k": g.k}
    if args.trace:
        best = amplified.trials[amplified.best_index]
        work = rescale_to_unit_min(g)[0] if g.k >= 2 else g
        res = run_partition(work, best.seed, trace=True, **options)
        payload["trace"] = [
            [s.i, s.j, s.draw, s.radius, list(s.newly_assigned)] for s in res.trace
        ]
    doc = reports.document("spr", payload)
    _emit(args, doc)
    ok = all(t.partition_valid and _stretch_ok(t.stretch) for t in amplified.trials)
    return 0 if ok and not amplified.failures else 1


def _cmd_spr_general(args) -> int:
    g = load_graph(args.input)
    res = spr_general(g, args.seed, threshold=args.threshold)
    stretch, worst, valid = evaluate_partition(g, res.partition)
    payload = reports.general_to_dict(res)
    payload["instance"] = {"input": args.input, "n": g.n, "m": g.m, "k": g.k}
    payload["stretch"] = [[reports._num(x) for x in row] for row in stretch]
    payload["max_stretch"] = reports._num(worst)
    payload["partition_valid"] = valid
    doc = reports.document("spr-general", payload)
    _emit(args, doc)
    return 0 if valid and _stretch_ok(stretch) else 1


def _cmd_decompose(args) -> int:
    g = load_graph(args.input)
    rng = random.Random(mix(args.seed, STREAM_DECOMP))
    stats = verify_decomposition(g, args.delta, args.trials, rng)
    requirements = evaluate_requirements(stats)
    payload = reports.decomposition_to_dict(stats, requirements)
    payload["instance"] = {"input": args.input, "n": g.n, "m": g.m, "k": g.k}
    doc = reports.document("decompose", payload)
    _emit(args, doc)
    return 0 if requirements["all_passed"] else 1


def _cmd_eval(args) -> int:
    g = load_graph(args.input)
    mg = load_graph(args.minor)
    if mg.n != g.k:
        raise GraphFormatError(
            f"minor has {mg.n} vertices but the graph has {g.k} terminals"
        )
    minor = TerminalMinor(terminals=g.terminals, edges=tuple(mg.edges()))
    stretch, worst = distortion(g, minor)
    payload = {
        "instance": {"input": args.input, "minor": args.minor, "n": g.n, "k": g.k},
        "stretch": [[reports._num(x) for x in row] for row in stretch.tolist()],
        "max_stretch": reports._num(worst),
        "domination_ok": bool((stretch >= 1.0 - STRETCH_SLACK).all()),
    }
    doc = reports.document("eval", payload)
    _emit(args, doc)
    return 0 if payload["domination_ok"] else 1


def _cmd_compare(args) -> int:
    g = load_graph(args.input)
    cmp_report = compare_baseline(g, args.trials, args.seed, threshold=args.threshold)
    payload = reports.comparison_to_dict(cmp_report, include_timings=args.timings)
    payload["instance"] = {"input": args.input, "n": g.n, "m": g.m, "k": g.k}
    doc = reports.document("compare", payload)
    _emit(args, doc)
    trials_ok = all(
        t.partition_valid and _stretch_ok(t.stretch) for t in cmp_report.amplified.trials
    )
    baseline_ok = cmp_report.baseline.partition_valid and _stretch_ok(
        cmp_report.baseline.stretch
    )
    return 0 if trials_ok and baseline_ok and not cmp_report.amplified.failures else 1


_COMMANDS = {
    "gen": _cmd_gen,
    "spr": _cmd_spr,
    "spr-general": _cmd_spr_general,
    "decompose": _cmd_decompose,
    "eval": _cmd_eval,
    "compare": _cmd_compare,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (GraphFormatError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InvariantViolation as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
