"""Command-line front end.

Exit codes: 0 success, 1 invalid input, 2 a ``verify`` check failed.
"""
from __future__ import annotations

import argparse
import os
import random
import re
import sys
from collections import Counter
from fractions import Fraction

from . import chain_oracle, thresholds, tri_game, triangle_walk
from .output import SCHEMA_VERSION, csv_text, dumps
from .regions import STANDARD, CubeParams, Region, boundary_description, classify, trivial_action
from .sim_core import MAX_SEED, derive_stream

SEED_ENV = "CUBE_ENGINE_SEED"
_NEGATIVE = re.compile(r"^-[\d.]")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _seed(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer seed: {text!r}")
    if not 0 <= value <= MAX_SEED:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def _k_value(text: str):
    if text.strip().lower() in ("inf", "infinity"):
        return thresholds.INF
    return _positive_int(text)


def _point(text: str) -> triangle_walk.TriPoint:
    try:
        return triangle_walk.TriPoint.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _max_doubles(text: str):
    if text.strip().lower() in ("unlimited", "inf", "none"):
        return None
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer or 'unlimited': {text!r}")
    if value < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return value


def _eval_mode(text: str) -> int:
    if text == "exact":
        return 0
    if text.startswith("mc:"):
        return _positive_int(text[3:])
    raise argparse.ArgumentTypeError(f"expected exact or mc:<trials>, got {text!r}")


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return 0
    try:
        return _seed(raw)
    except argparse.ArgumentTypeError as exc:
        raise UsageError(f"{SEED_ENV}: {exc}")


def _add_cube_args(p):
    p.add_argument("--x", type=_fraction, help="fold multiplier (may be negative; fractions like -1/2 allowed)")
    p.add_argument("--y", type=_fraction, help="accept multiplier (> 0)")
    p.add_argument("--standard", action="store_true", help="use the standard (1, 2) doubling cube")


def _add_sim_args(p):
    p.add_argument("--seed", type=_seed, default=None, help=f"u64 seed (default: ${SEED_ENV}, else 0)")
    p.add_argument("--jobs", type=_positive_int, default=1, help="worker processes; output does not depend on it")


def _add_output(p, formats=("json",), default="json"):
    p.add_argument("--format", choices=formats, default=default, help="output format")
    p.add_argument("--output", default=None, help="write to this path instead of standard output")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cube-engine", description="Doubling-cube thresholds, oracles and triangle-game simulation.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("classify", help="strategy region of an (x, y) cube")
    p.add_argument("--x", type=_fraction, required=True, help="fold multiplier")
    p.add_argument("--y", type=_fraction, required=True, help="accept multiplier (> 0)")
    _add_output(p)

    p = sub.add_parser("thresholds", help="doubling states d_k and acceptance thresholds a_k")
    _add_cube_args(p)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--k", type=_positive_int, help="single level, closed form")
    group.add_argument("--k-max", type=_positive_int, help="levels 1..K by recurrence")
    _add_output(p)

    p = sub.add_parser("figure", help="data behind the threshold plots")
    p.add_argument("--which", choices=("1", "2", "3"), required=True,
                   help="1: log error vs k (standard cube); 2: R+ contour; 3: R- contour")
    p.add_argument("--k", type=_k_value, required=True, help="max k for figure 1, or k (or inf) for contours")
    p.add_argument("--grid", type=thresholds.Grid.parse, default=None, help="xmin:xmax:ymin:ymax:step (contours)")
    _add_output(p, ("csv", "json"), "csv")

    p = sub.add_parser("verify", help="numerical cross-checks")
    vsub = p.add_subparsers(dest="check", required=True, parser_class=_Parser)
    v = vsub.add_parser("oracle", help="grid-scan optimum vs closed-form d_k")
    _add_cube_args(v)
    v.add_argument("--k", type=_positive_int, required=True, help="levels 1..k")
    v.add_argument("--grid-n", type=_positive_int, required=True, help="grid subdivisions")
    _add_output(v)
    v = vsub.add_parser("dirichlet", help="lattice solve vs barycentric coordinates")
    v.add_argument("--n", type=_positive_int, required=True, help="edge subdivisions")
    v.add_argument("--tol", type=float, default=1e-9, help="max allowed componentwise error")
    _add_output(v)
    v = vsub.add_parser("identities", help="closed forms vs recurrences and margin identities")
    v.add_argument("--samples", type=_positive_int, default=100, help="random points per region")
    v.add_argument("--k-max", type=_positive_int, default=30, help="levels checked")
    v.add_argument("--seed", type=_seed, default=None, help=f"u64 seed (default: ${SEED_ENV}, else 0)")
    _add_output(v)

    p = sub.add_parser("tri", help="three-player triangle game")
    tsub = p.add_subparsers(dest="tri_command", required=True, parser_class=_Parser)
    t = tsub.add_parser("eval", help="exact evaluation at every lattice point")
    t.add_argument("--n", type=_positive_int, required=True, help="edge subdivisions")
    _add_output(t, ("csv", "json"), "csv")
    t = tsub.add_parser("walk", help="Monte Carlo win frequencies from a start point")
    t.add_argument("--n", type=_positive_int, required=True, help="edge subdivisions")
    t.add_argument("--start", type=_point, required=True, help="a,b,c with a+b+c = n")
    t.add_argument("--trials", type=_positive_int, required=True, help="replications")
    t.add_argument("--trace", action="store_true", help="include the path of replication 0")
    _add_sim_args(t)
    _add_output(t)
    t = tsub.add_parser("game", help="simulate the doubling game")
    t.add_argument("--n", type=_positive_int, required=True, help="edge subdivisions")
    t.add_argument("--start", type=_point, required=True, help="a,b,c with a+b+c = n")
    t.add_argument("--q-offer", type=_fraction, default=None,
                   help="offer when own evaluation exceeds this; omit for the one-double rule")
    t.add_argument("--q-fold", type=_fraction, default=Fraction(1, 6), help="opponents fold below this (default 1/6)")
    t.add_argument("--accept-rule", choices=("all", "any"), default="all", help="acceptances needed to continue")
    t.add_argument("--max-doubles", type=_max_doubles, default=argparse.SUPPRESS,
                   help="integer or 'unlimited' (default: 1 for the one-double rule, else unlimited)")
    t.add_argument("--trials", type=_positive_int, required=True, help="games to play")
    t.add_argument("--eval", dest="eval_mode", type=_eval_mode, default=0, help="exact or mc:<trials>")
    t.add_argument("--games", action="store_true", help="include every game record")
    _add_sim_args(t)
    _add_output(t)
    t = tsub.add_parser("indifference", help="accept payoff vs evaluation at the one-double threshold")
    t.add_argument("--n", type=_positive_int, required=True, help="edge subdivisions")
    t.add_argument("--trials", type=_positive_int, required=True, help="replications per point")
    t.add_argument("--exact", action="store_true", help="use the lattice solve instead of simulation")
    _add_sim_args(t)
    _add_output(t, ("csv", "json"), "csv")
    return parser


def _cube(args) -> CubeParams | None:
    if args.standard:
        if args.x is not None or args.y is not None:
            raise UsageError("--standard cannot be combined with --x/--y")
        return None
    if args.x is None or args.y is None:
        raise UsageError("give --x and --y, or --standard")
    return CubeParams(args.x, args.y)


def _cube_fields(params: CubeParams | None) -> dict:
    p = params or STANDARD
    return {"standard": params is None, "x": p.x, "y": p.y}


def _write(args, text: str) -> None:
    if args.output:
        with open(args.output, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _doc(**fields) -> dict:
    return {"schema_version": SCHEMA_VERSION, **fields}


def cmd_classify(args) -> int:
    params = CubeParams(args.x, args.y)
    region = classify(params)
    _write(args, dumps(_doc(
        x=params.x, y=params.y, region=region.value,
        trivial_action=trivial_action(region), note=boundary_description(params),
    )))
    return 0


def cmd_thresholds(args) -> int:
    params = _cube(args)
    base = _doc(**_cube_fields(params), region=classify(params or STANDARD).value)
    limit = thresholds.limit_threshold(params)
    if args.k is not None:
        d = thresholds.standard_dk(args.k) if params is None else thresholds.general_dk(params, args.k)
        doc = {**base, "k": args.k, "d": d, "a": 1 - d, "limit": limit}
        if isinstance(d, Fraction):
            doc.update(d_exact=str(d), a_exact=str(1 - d))
    else:
        sched = thresholds.recurrence_schedule(params, args.k_max)
        doc = {**base, "k_max": args.k_max, "d": list(sched.d), "a": list(sched.a), "limit": limit}
        if all(isinstance(v, Fraction) for v in sched.d):
            doc.update(d_exact=[str(v) for v in sched.d], a_exact=[str(v) for v in sched.a])
    if isinstance(limit, Fraction):
        doc["limit_exact"] = str(limit)
    _write(args, dumps(doc))
    return 0


_SERIES = {"1": "fig1", "2": "contour_plus", "3": "contour_minus"}


def cmd_figure(args) -> int:
    series = _SERIES[args.which]
    rows = thresholds.figure_series(series, args.k, args.grid)
    header = thresholds.FIG1_HEADER if series == "fig1" else thresholds.CONTOUR_HEADER
    if args.format == "csv":
        _write(args, csv_text(header, rows))
    else:
        k = "inf" if args.k == thresholds.INF else args.k
        _write(args, dumps(_doc(series=series, k=k, header=list(header), rows=[list(r) for r in rows])))
    return 0


def cmd_verify(args) -> int:
    if args.check == "oracle":
        params = _cube(args)
        rep = chain_oracle.oracle_report(params, args.k, args.grid_n)
        doc = _doc(
            **_cube_fields(params), k=args.k, grid_n=args.grid_n,
            closed_form=rep.closed_form, oracle=rep.oracle, triggers=rep.triggers,
            max_abs_diff=rep.max_abs_diff, tolerance=1.0 / args.grid_n,
            overlap_levels=rep.overlap_levels, **{"pass": rep.passed},
        )
        ok = rep.passed
    elif args.check == "dirichlet":
        lattice = triangle_walk.TriLattice(args.n)
        table = triangle_walk.exact_evaluation(lattice)
        err = max(
            abs(v - c / args.n)
            for p, ev in table.items()
            for v, c in zip(ev.as_tuple(), p)
        )
        ok = err <= args.tol
        doc = _doc(n=args.n, points=len(table), max_abs_err=err, tolerance=args.tol, **{"pass": ok})
    else:
        seed = args.seed if args.seed is not None else _default_seed()
        doc = _doc(seed=seed, **identity_checks(args.samples, args.k_max, seed))
        ok = doc["pass"]
    _write(args, dumps(doc))
    return 0 if ok else 2


def random_region_point(rng: random.Random, region: Region) -> CubeParams:
    """Rational point drawn uniformly-ish from the open region (denominators <= 97)."""
    while True:
        den = rng.randint(2, 97)
        if region is Region.RAISE_PLUS:
            y = Fraction(rng.randint(den + 1, 10 * den), den)
            x = Fraction(rng.randint(1, int(y * den) - 1), den)
        else:
            y = Fraction(rng.randint(1, den - 1), den)
            x = -Fraction(rng.randint(1, max(1, int(y * den) - 1)), den)
        params = CubeParams(x, y)
        if classify(params) is region:
            return params


def identity_checks(samples: int, k_max: int, seed: int) -> dict:
    rng = random.Random(seed)
    closed_vs_rec = 0.0
    identity = 0.0
    min_margin = None
    single_ok = True
    for region in (Region.RAISE_PLUS, Region.REDUCE_MINUS):
        for _ in range(samples):
            params = random_region_point(rng, region)
            sched = thresholds.recurrence_schedule(params, k_max)
            for k in range(1, k_max + 1):
                closed_vs_rec = max(closed_vs_rec, abs(float(thresholds.general_dk(params, k) - sched.d[k - 1])))
                m = thresholds.never_double_margin(params, k)
                min_margin = m if min_margin is None else min(min_margin, m)
            identity = max(identity, abs(float(thresholds.never_double_margin(params, 2) - thresholds.margin_identity_rhs(params))))
            single_ok &= thresholds.single_double_point(params) == thresholds.general_dk(params, 1)
    standard_ok = all(
        thresholds.standard_dk(k) == thresholds.recurrence_schedule(None, k_max).d[k - 1]
        == thresholds.general_dk(STANDARD, k)
        for k in range(1, k_max + 1)
    )
    checks = {
        "closed_form_vs_recurrence_max_diff": closed_vs_rec,
        "margin_identity_max_diff": identity,
        "min_never_double_margin": min_margin,
        "single_double_point_matches": single_ok,
        "standard_matches": standard_ok,
    }
    ok = closed_vs_rec == 0 and identity <= 1e-12 and min_margin > 0 and single_ok and standard_ok
    return {"samples_per_region": samples, "k_max": k_max, "checks": checks, "pass": ok}


def _lattice_start(args):
    lattice = triangle_walk.TriLattice(args.n)
    return lattice, lattice.check(args.start)


def cmd_tri(args) -> int:
    cmd = args.tri_command
    if cmd == "eval":
        lattice = triangle_walk.TriLattice(args.n)
        table = triangle_walk.exact_evaluation(lattice)
        rows = [(*p, *table[p].as_tuple()) for p in lattice.points()]
        header = ("a", "b", "c", "pA", "pB", "pC")
        if args.format == "csv":
            _write(args, csv_text(header, rows))
        else:
            _write(args, dumps(_doc(n=args.n, header=list(header), rows=[list(r) for r in rows])))
        return 0

    seed = args.seed if args.seed is not None else _default_seed()
    if cmd == "walk":
        lattice, start = _lattice_start(args)
        diffs, est = triangle_walk.prob_vs_area(lattice, start, args.trials, seed, args.jobs)
        counts = [int(p * args.trials) for p in est.as_tuple()]
        doc = _doc(
            seed=seed, n=args.n, start=list(start), trials=args.trials,
            counts=dict(zip(triangle_walk.PLAYERS, counts)),
            estimate=list(est.as_tuple()), stderr=list(est.stderr),
            barycentric=[Fraction(v, args.n) for v in start], difference=list(diffs),
        )
        if args.trace:
            winner, path = triangle_walk.trace_round(lattice, start, derive_stream(seed, 0))
            doc["trace"] = {"replication": 0, "winner": winner, "points": [list(p) for p in path]}
        _write(args, dumps(doc))
        return 0

    if cmd == "game":
        lattice, start = _lattice_start(args)
        max_doubles = getattr(args, "max_doubles", 1 if args.q_offer is None else None)
        config = tri_game.TriDoublingConfig(
            lattice, start, q_offer=args.q_offer, q_fold=args.q_fold,
            accept_rule=args.accept_rule, max_doubles=max_doubles, mc_trials=args.eval_mode,
        )
        for w in config.warnings:
            print(f"warning: {w}", file=sys.stderr)
        games = tri_game.run_games(config, args.trials, seed, args.jobs)
        wins = Counter(g.winner for g in games)
        stakes = Counter(g.stake for g in games)
        doc = _doc(
            seed=seed, n=args.n, start=list(start), trials=args.trials,
            config={
                "rule": "one_double" if args.q_offer is None else "threshold",
                "q_offer": args.q_offer, "q_fold": args.q_fold,
                "accept_rule": args.accept_rule,
                "max_doubles": "unlimited" if max_doubles is None else max_doubles,
                "eval": "exact" if args.eval_mode == 0 else f"mc:{args.eval_mode}",
            },
            aggregate={
                "wins": {p: wins.get(p, 0) for p in triangle_walk.PLAYERS},
                "mean_payoff": [Fraction(sum(g.payoffs[i] for g in games), len(games)) for i in range(3)],
                "stake_counts": {str(s): c for s, c in sorted(stakes.items())},
                "folds": sum(g.folded for g in games),
                "accepted_doubles": sum(g.accepted_doubles for g in games),
            },
        )
        if args.games:
            doc["games"] = [g.summary() for g in games]
        _write(args, dumps(doc))
        return 0

    lattice = triangle_walk.TriLattice(args.n)
    rows, crossing = tri_game.indifference_scan(lattice, args.trials, seed, exact=args.exact, jobs=args.jobs)
    header = ("y", "accept_payoff", "stderr")
    if args.format == "csv":
        print(f"seed={seed}", file=sys.stderr)
        _write(args, csv_text(header, rows))
    else:
        _write(args, dumps(_doc(
            seed=seed, n=args.n, trials=args.trials, exact=args.exact,
            header=list(header), rows=[list(r) for r in rows], crossing=crossing,
        )))
    return 0


_COMMANDS = {
    "classify": cmd_classify,
    "thresholds": cmd_thresholds,
    "figure": cmd_figure,
    "verify": cmd_verify,
    "tri": cmd_tri,
}


def _attach_negative_values(argv: list[str]) -> list[str]:
    """Rewrite ``--x -1/2`` as ``--x=-1/2``; argparse reads ``-1/2`` as a flag."""
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        nxt = argv[i + 1] if i + 1 < len(argv) else None
        if tok.startswith("--") and "=" not in tok and nxt is not None and _NEGATIVE.match(nxt):
            out.append(f"{tok}={nxt}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def run(argv=None) -> int:
    parser = build_parser()
    argv = _attach_negative_values(list(sys.argv[1:] if argv is None else argv))
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 1
    except (ValueError, TypeError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())
