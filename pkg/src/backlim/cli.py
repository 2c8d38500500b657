"""Command-line front end: analysis, certification, corpus verification,
family scanning and plot-data emission, all reporting deterministic JSON.

Exit codes: 0 success, 1 certification/verification failure, 2 input error,
3 precondition failure.
"""

from __future__ import annotations

import argparse
import itertools
import json
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from pathlib import Path

from .backlimits import (
    BackwardTree,
    Budget,
    DEFAULT_AVOID_LAYERS,
    DEFAULT_DEPTH,
    DEFAULT_MAX_PERIOD,
    DEFAULT_WIDTH_CAP,
    PreconditionError,
    RejectedSeed,
    SalphaEnclosure,
    avoided_region,
    beta_upper,
    cert_to_obj,
    certified_period_set,
    find_contraction,
    find_exact_tail,
    salpha_enclosure,
    verify_certificate,
)
from .corpus import all_entries, entry_by_name, verify_entry
from .exactnum import (
    Interval,
    IntervalSet,
    RationalParseError,
    parse_interval_set,
    parse_rational,
)
from .markov import (
    CycleOfIntervals,
    check_cycle_of_intervals,
    is_mixing,
    is_transitive,
    markov_partition,
)
from .orbits import PeriodicOrbit, least_period_of, periodic_orbits
from .plmap import InvalidMap, PLMap, make_plmap, map_digest, map_to_obj, parse_map

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INPUT = 2
EXIT_PRECONDITION = 3


class _InputError(Exception):
    pass


def _load_map(path: str) -> PLMap:
    try:
        return parse_map(Path(path).read_text(encoding="utf-8"))
    except OSError as e:
        raise _InputError(f"cannot read map file: {e}") from e
    except InvalidMap as e:
        raise _InputError(str(e)) from e


def _rat(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except RationalParseError as e:
        raise _InputError(str(e)) from e


def _set_obj(s: IntervalSet) -> list[list[str]]:
    return [[str(p.lo), str(p.hi)] for p in s.parts]


def _enclosure_obj(enc: SalphaEnclosure) -> dict:
    return {
        "point": str(enc.point),
        "lower_points": [str(p) for p in enc.lower_points],
        "lower_intervals": _set_obj(enc.lower_intervals),
        "upper": _set_obj(enc.upper),
        "exact": enc.exact,
        "degraded": enc.degraded,
        "orbit_certificates": [cert_to_obj(c) for c in enc.orbit_certs],
        "cycle_certificates": [cert_to_obj(c) for c in enc.cycle_certs],
        "avoidance_certificates": [cert_to_obj(c) for c in enc.avoidance_certs],
    }


def _report(command: str, f: PLMap | None, inputs: dict, result: dict,
            budgets: dict | None = None, exact: bool | None = None,
            started: float | None = None) -> dict:
    out: dict = {
        "command": command,
        "inputs": inputs,
        "result": result,
    }
    if f is not None:
        out["map_digest"] = map_digest(f)
    if budgets is not None:
        out["budgets"] = budgets
    if exact is not None:
        out["exact"] = exact
    if started is not None:
        out["wall_time_ms"] = int((time.monotonic() - started) * 1000)
    return out


def _emit(report: dict, json_path: str | None) -> None:
    text = json.dumps(report, indent=2, sort_keys=True)
    print(text)
    if json_path:
        try:
            Path(json_path).write_text(text + "\n", encoding="utf-8")
        except OSError as e:
            raise _InputError(f"cannot write report: {e}") from e


def _budget_from(args) -> Budget:
    return Budget(
        depth=args.depth,
        width_cap=args.width,
        max_period=args.max_period,
        avoid_layers=getattr(args, "avoid_layers", DEFAULT_AVOID_LAYERS),
    )


def _budget_obj(b: Budget) -> dict:
    return {
        "depth": b.depth,
        "width_cap": b.width_cap,
        "max_period": b.max_period,
        "avoid_layers": b.avoid_layers,
    }


# ---------------------------------------------------------------------------
# commands


def _cmd_analyze(args) -> int:
    started = time.monotonic()
    f = _load_map(args.map)
    y = _rat(args.point)
    if not f.domain.contains(y):
        raise _InputError(f"point {y} outside domain {f.domain}")
    budget = _budget_from(args)
    enc = salpha_enclosure(f, y, budget)
    beta = beta_upper(f, y, budget)
    result = {
        "enclosure": _enclosure_obj(enc),
        "beta_upper": _set_obj(beta),
        "beta_empty": beta.is_empty,
    }
    _emit(
        _report("analyze", f, {"point": str(y)}, result,
                budgets=_budget_obj(budget), exact=enc.exact, started=started),
        args.json,
    )
    return EXIT_OK


def _cmd_certify(args) -> int:
    started = time.monotonic()
    f = _load_map(args.map)
    y = _rat(args.point)
    t = _rat(args.target)
    if not f.domain.contains(y) or not f.domain.contains(t):
        raise _InputError("point or target outside the domain")
    if args.period is not None:
        if f.eval_chain(t, args.period) != t:
            print(f"target {t} is not {args.period}-periodic", file=sys.stderr)
            return EXIT_PRECONDITION
        bound = args.period
    else:
        bound = 64
    least = least_period_of(f, t, bound)
    if least is None:
        print(f"target {t} is not periodic within {bound} steps", file=sys.stderr)
        return EXIT_PRECONDITION
    orbit = PeriodicOrbit.from_point(f, t, least)
    tree = BackwardTree(f, y, args.width)
    cert = find_exact_tail(f, y, orbit, args.depth, tree=tree)
    if cert is None:
        for pt in orbit.points:
            cert = find_contraction(f, y, pt, least, args.depth, tree=tree)
            if cert is not None:
                break
    stats = {
        "tree_nodes": len(tree.point_values(tree.depth_available())),
        "depth_explored": tree.depth_available(),
    }
    inputs = {"point": str(y), "target": str(t), "period": least}
    if cert is None:
        result = {"found": False, "stats": stats}
        _emit(_report("certify", f, inputs, result, started=started), args.json)
        return EXIT_FAIL
    check = verify_certificate(f, y, cert)
    result = {
        "found": True,
        "certificate": cert_to_obj(cert),
        "verified": bool(check),
        "stats": stats,
    }
    _emit(_report("certify", f, inputs, result, started=started), args.json)
    return EXIT_OK if check else EXIT_FAIL


def _cmd_exclude(args) -> int:
    started = time.monotonic()
    f = _load_map(args.map)
    y = _rat(args.point)
    if not f.domain.contains(y):
        raise _InputError(f"point {y} outside domain {f.domain}")
    try:
        seed = parse_interval_set(args.seed)
    except RationalParseError as e:
        raise _InputError(str(e)) from e
    got = avoided_region(f, y, seed, args.depth)
    inputs = {"point": str(y), "seed": args.seed}
    if isinstance(got, RejectedSeed):
        result = {"accepted": False, "reason": got.reason}
        _emit(_report("exclude", f, inputs, result, started=started), args.json)
        return EXIT_PRECONDITION
    check = verify_certificate(f, y, got)
    excluded = got.final.complement(f.domain)
    result = {
        "accepted": True,
        "certificate": cert_to_obj(got),
        "verified": bool(check),
        "limit_set_upper_bound": _set_obj(excluded),
    }
    _emit(_report("exclude", f, inputs, result, started=started), args.json)
    return EXIT_OK if check else EXIT_FAIL


def _cmd_periodic(args) -> int:
    started = time.monotonic()
    f = _load_map(args.map)
    structure = periodic_orbits(f, args.max_period)
    result = {
        "isolated_orbits": [
            {"period": o.least_period, "points": [str(p) for p in o.points]}
            for o in structure.isolated_orbits
        ],
        "fixed_intervals": [
            {"period": n, "set": _set_obj(s)} for n, s in structure.fixed_intervals
        ],
    }
    _emit(
        _report("periodic", f, {"max_period": args.max_period}, result, started=started),
        args.json,
    )
    return EXIT_OK


def _cmd_markov(args) -> int:
    started = time.monotonic()
    f = _load_map(args.map)
    ms = markov_partition(f, args.cap)
    if ms is None:
        result = {"markov": False}
    else:
        cycles = []
        for base, period in [(Interval(ms.cuts[0], ms.cuts[-1]), 1)]:
            got = check_cycle_of_intervals(f, base, period)
            if isinstance(got, CycleOfIntervals):
                cycles.append(
                    {
                        "base": [str(base.lo), str(base.hi)],
                        "period": period,
                        "transitive": is_transitive(ms, got).value,
                        "mixing": is_mixing(ms, got).value,
                    }
                )
        result = {
            "markov": True,
            "cuts": [str(c) for c in ms.cuts],
            "matrix": [list(row) for row in ms.matrix],
            "cell_slopes": [str(s) for s in ms.cell_slopes],
            "expanding": ms.expanding,
            "whole_domain_cycle": cycles,
        }
    _emit(_report("markov", f, {"cap": args.cap}, result, started=started), args.json)
    return EXIT_OK


def _cmd_corpus(args) -> int:
    started = time.monotonic()
    if args.action == "export":
        entry = entry_by_name(args.name)
        if entry is None:
            raise _InputError(f"unknown corpus entry {args.name!r}")
        outdir = Path(args.dir)
        outdir.mkdir(parents=True, exist_ok=True)
        (outdir / f"{entry.name}.json").write_text(
            json.dumps(map_to_obj(entry.map), indent=2) + "\n", encoding="utf-8"
        )
        expectations = [
            {"kind": e.kind, "label": e.label, "provenance": e.provenance}
            for e in entry.expectations
        ]
        (outdir / f"{entry.name}.expectations.json").write_text(
            json.dumps(expectations, indent=2) + "\n", encoding="utf-8"
        )
        print(f"wrote {entry.name}.json and {entry.name}.expectations.json to {outdir}")
        return EXIT_OK

    if args.name == "all":
        entries = all_entries()
    else:
        entry = entry_by_name(args.name)
        if entry is None:
            raise _InputError(f"unknown corpus entry {args.name!r}")
        entries = (entry,)
    with ThreadPoolExecutor(max_workers=max(1, args.workers)) as pool:
        all_results = list(pool.map(verify_entry, entries))
    result: dict = {"entries": {}}
    ok = True
    for entry, results in zip(entries, all_results):
        result["entries"][entry.name] = [
            {"label": r.label, "ok": r.ok, "detail": r.detail} for r in results
        ]
        ok = ok and all(r.ok for r in results)
    result["all_ok"] = ok
    _emit(
        _report("corpus", None, {"name": args.name, "workers": args.workers},
                result, started=started),
        args.json,
    )
    return EXIT_OK if ok else EXIT_FAIL


def enumerate_scan_maps(dots: int, upper: int, limit: int) -> list[PLMap]:
    """Integer connect-the-dots maps on [0, upper]: x-tuples span the domain,
    values are pairwise distinct and include both 0 and upper (so the map is
    onto). Order: value-tuple-major, x-tuple-minor, lexicographic."""
    inner = list(itertools.combinations(range(1, upper), dots - 2))
    xss = [(0, *mid, upper) for mid in inner]
    out: list[PLMap] = []
    domain = Interval(Fraction(0), Fraction(upper))
    for ys in itertools.permutations(range(upper + 1), dots):
        if 0 not in ys or upper not in ys:
            continue
        for xs in xss:
            if len(out) >= limit:
                return out
            out.append(make_plmap(domain, list(zip(xs, ys))))
    return out


def _cmd_scan(args) -> int:
    started = time.monotonic()
    if args.dots > 6 or args.dots < 2:
        raise _InputError("dots must be between 2 and 6")
    try:
        lo_s, _, hi_s = args.domain.partition("..")
        lo, hi = int(lo_s), int(hi_s)
    except ValueError as e:
        raise _InputError(f"malformed domain {args.domain!r}") from e
    if lo != 0 or hi < 1 or hi > 10:
        raise _InputError("domain must be 0..D with 1 <= D <= 10")
    maps = enumerate_scan_maps(args.dots, hi, args.limit)
    reports = []
    for f in maps:
        points = {}
        verdict = None
        for k in range(hi + 1):
            y = Fraction(k)
            try:
                periods = certified_period_set(f, y, args.max_period, depth=args.depth)
            except Exception:
                continue
            if 3 not in periods:
                continue
            gaps = [
                n
                for n in range(1, args.max_period + 1)
                if n not in periods and 2 * n not in periods
            ]
            points[str(y)] = {
                "certified_periods": sorted(periods),
                "gaps": gaps,
            }
            if gaps:
                verdict = "candidate"
            elif verdict is None:
                verdict = "consistent"
        if points:
            reports.append(
                {
                    "digest": map_digest(f),
                    "dots": [[str(x), str(v)] for x, v in f.dots],
                    "points": points,
                    "verdict": verdict,
                }
            )
    result = {
        "maps_scanned": len(maps),
        "period3_maps": len(reports),
        "candidates": sum(1 for r in reports if r["verdict"] == "candidate"),
        "reports": reports,
        "note": "a certification gap is not a counterexample; absence of a "
        "certificate does not witness absence of an orbit",
    }
    inputs = {
        "dots": args.dots,
        "domain": args.domain,
        "max_period": args.max_period,
        "limit": args.limit,
    }
    _emit(_report("scan", None, inputs, result, started=started), args.json)
    return EXIT_OK


def _cmd_plot(args) -> int:
    f = _load_map(args.map)
    if args.samples < 2:
        raise _InputError("need at least 2 samples")
    xs = {x for x, _ in f.dots}
    span = f.domain.length
    for k in range(1, args.samples + 1):
        xs.add(f.domain.lo + Fraction(k, args.samples + 1) * span)
    lines = [f"{x}\t{f.eval_at(x)}" for x in sorted(xs)]
    if args.tree:
        point_s, _, depth_s = args.tree.partition(",")
        root = _rat(point_s)
        try:
            depth = int(depth_s)
        except ValueError as e:
            raise _InputError(f"malformed tree argument {args.tree!r}") from e
        if not f.domain.contains(root):
            raise _InputError(f"tree root {root} outside domain")
        tree = BackwardTree(f, root, DEFAULT_WIDTH_CAP)
        lines.append("")
        for d, value in tree.point_values(depth):
            lines.append(f"{d}\t{value}")
    text = "\n".join(lines) + "\n"
    try:
        Path(args.out).write_text(text, encoding="utf-8")
    except OSError as e:
        raise _InputError(f"cannot write {args.out}: {e}") from e
    print(f"wrote {args.out}")
    return EXIT_OK


# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="backlim",
        description="exact analysis of piecewise-linear interval maps and "
        "certified bounds on backward limit sets",
    )
    sub = parser.add_subparsers(dest="cmd", required=True)

    def add_budget(p, depth=DEFAULT_DEPTH):
        p.add_argument("--depth", type=int, default=depth)
        p.add_argument("--width", type=int, default=DEFAULT_WIDTH_CAP)
        p.add_argument("--max-period", dest="max_period", type=int,
                       default=DEFAULT_MAX_PERIOD)
        p.add_argument("--json", default=None)

    p = sub.add_parser("analyze", help="certified enclosure of a limit set")
    p.add_argument("map")
    p.add_argument("--point", required=True)
    add_budget(p)
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("certify", help="membership certificate for a periodic target")
    p.add_argument("map")
    p.add_argument("--point", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--period", type=int, default=None)
    add_budget(p)
    p.set_defaults(func=_cmd_certify)

    p = sub.add_parser("exclude", help="invariant-region exclusion certificate")
    p.add_argument("map")
    p.add_argument("--point", required=True)
    p.add_argument("--seed", required=True, help='intervals "[a,b];[c,d]"')
    p.add_argument("--depth", type=int, default=DEFAULT_AVOID_LAYERS)
    p.add_argument("--json", default=None)
    p.set_defaults(func=_cmd_exclude)

    p = sub.add_parser("periodic", help="periodic orbits and continua")
    p.add_argument("map")
    p.add_argument("--max-period", dest="max_period", type=int,
                   default=DEFAULT_MAX_PERIOD)
    p.add_argument("--json", default=None)
    p.set_defaults(func=_cmd_periodic)

    p = sub.add_parser("markov", help="Markov partition and transition matrix")
    p.add_argument("map")
    p.add_argument("--cap", type=int, default=64)
    p.add_argument("--json", default=None)
    p.set_defaults(func=_cmd_markov)

    p = sub.add_parser("corpus", help="verify or export the bundled examples")
    p.add_argument("action", choices=["verify", "export"])
    p.add_argument("name")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--dir", default=".")
    p.add_argument("--json", default=None)
    p.set_defaults(func=_cmd_corpus)

    p = sub.add_parser("scan", help="scan integer maps for period-forcing evidence")
    p.add_argument("--dots", type=int, required=True)
    p.add_argument("--domain", required=True, help="0..D")
    p.add_argument("--max-period", dest="max_period", type=int, default=6)
    p.add_argument("--limit", type=int, required=True)
    p.add_argument("--depth", type=int, default=6)
    p.add_argument("--json", default=None)
    p.set_defaults(func=_cmd_scan)

    p = sub.add_parser("plot", help="emit TSV samples of the graph")
    p.add_argument("map")
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--tree", default=None, help="point,depth")
    p.set_defaults(func=_cmd_plot)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except PreconditionError as e:
        print(f"precondition failed: {e}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
