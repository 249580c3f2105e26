"""Batch command line: measures, invariance suites, separation runs, tables.

Every command resolves its full configuration (defaults included), embeds it
in the output, and derives all randomness from the master seed, so re-running
a command with the same arguments reproduces the output byte for byte.

Exit codes: 0 success, 1 property violation (an invariance failure or a
strategy disagreement), 2 usage or parse error, 3 infeasible scale.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from math import comb, isqrt

from . import circuits, f2lab, functions, groups, measures, sepmod
from .errors import InfeasibleError
from .field import Field, field_from_name, prime_field
from .seeding import trial_rng


# ---------------------------------------------------------------------------
# output plumbing
# ---------------------------------------------------------------------------


def _json_text(config: dict, result) -> str:
    return (
        json.dumps({"config": config, "result": result}, sort_keys=True, indent=2)
        + "\n"
    )


def _csv_text(config: dict, rows: list[list]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    compact = json.dumps(config, sort_keys=True, separators=(",", ":"))
    writer.writerow([f"config={compact}"])
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _require_json(fmt: str) -> None:
    if fmt != "json":
        raise ValueError(
            "csv output is only available for the table and separate commands"
        )


# ---------------------------------------------------------------------------
# shared argument parsing
# ---------------------------------------------------------------------------


def _parse_point(text: str, fld: Field) -> list:
    return [fld.parse(tok.strip()) for tok in text.split(",") if tok.strip()]


def _measure_params(args, fld: Field) -> dict:
    params: dict = {}
    if args.measure == "shifted":
        params["k"] = args.k if args.k is not None else 1
        params["l"] = args.l if args.l is not None else 1
    if args.measure == "hessian_rank":
        if not args.point:
            raise ValueError("hessian_rank needs --point")
        params["point"] = _parse_point(args.point, fld)
    return params


def _module_from_spec(spec: str, ambient: sepmod.Ambient, args) -> sepmod.TestModule:
    parts = spec.split(":")
    if len(parts) == 3 and parts[0] == "minors":
        name = parts[1]
        try:
            r = int(parts[2])
        except ValueError as exc:
            raise ValueError(f"bad rank threshold in module spec {spec!r}") from exc
        params: dict = {}
        if name == "shifted":
            params["k"] = args.k if args.k is not None else 1
            params["l"] = args.l if args.l is not None else 1
        return sepmod.MinorsOfMeasure(ambient, name, r, params)
    raise ValueError(
        f"unrecognized module spec {spec!r} (format: \"minors:<measure>:<r>\")"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="seplab",
        description="exact separating-module laboratory",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, seeded=True):
        p.add_argument("--field", default="Q", help='coefficient field: "Q" or "Fp:<p>"')
        p.add_argument("--out", default=None, help="output path (default stdout)")
        p.add_argument("--format", default=None, choices=["json", "csv"])
        p.add_argument("--mod3-residue", type=int, default=0, dest="mod3_residue")
        if seeded:
            p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("measure", help="compute one measure of one function")
    p.add_argument("--fn", required=True)
    p.add_argument("--measure", required=True, choices=list(measures.MEASURES))
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--l", type=int, default=None)
    p.add_argument("--point", default=None)
    common(p, seeded=False)

    p = sub.add_parser("invariance", help="measure before/after substitutions")
    p.add_argument("--fn", required=True)
    p.add_argument("--measure", required=True, choices=list(measures.MEASURES))
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--l", type=int, default=None)
    p.add_argument("--point", default=None)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--exhaustive", action="store_true")
    common(p)

    p = sub.add_parser("separate", help="run a separation experiment")
    p.add_argument("--module", required=True)
    p.add_argument("--easy", required=True)
    p.add_argument("--hard", required=True)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--l", type=int, default=None)
    p.add_argument("--trials", type=int, default=100)
    common(p)

    p = sub.add_parser("table", help="derivative-span dimensions on a grid")
    p.add_argument("--n-min", type=int, default=4, dest="n_min")
    p.add_argument("--n-max", type=int, default=10, dest="n_max")
    p.add_argument("--d-min", type=int, default=1, dest="d_min")
    p.add_argument("--d-max", type=int, default=3, dest="d_max")
    common(p, seeded=False)

    p = sub.add_parser("rs-distance", help="distance to the low-degree code")
    p.add_argument("--fn", default=None)
    p.add_argument("--table", default=None, help="path to a truth-table file")
    p.add_argument("--bound", type=int, required=True, help="degree bound d")
    common(p, seeded=False)

    p = sub.add_parser("gk-check", help="twisted-derivative intersection test")
    p.add_argument("--fn", required=True)
    p.add_argument("--r", type=int, default=1)
    p.add_argument("--max-degree", type=int, default=None, dest="max_degree")
    p.add_argument("--trials", type=int, default=0, help="sampled twists (0 = whole group)")
    common(p)
    p.set_defaults(field="Fp:2")

    return parser


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_measure(args) -> int:
    fmt = args.format or "json"
    _require_json(fmt)
    fld = field_from_name(args.field)
    f = functions.from_spec(args.fn, fld, args.mod3_residue)
    params = _measure_params(args, f.field)
    report = measures.compute_measure(args.measure, f, params)
    config = {
        "command": "measure",
        "fn": args.fn,
        "field": f.field.name,
        "measure": args.measure,
        "params": report.params,
        "mod3_residue": args.mod3_residue,
    }
    _emit(_json_text(config, report.to_json()), args.out)
    return 0


def cmd_invariance(args) -> int:
    fmt = args.format or "json"
    _require_json(fmt)
    fld = field_from_name(args.field)
    f = functions.from_spec(args.fn, fld, args.mod3_residue)
    params = _measure_params(args, f.field)
    rng = trial_rng(args.seed, 0)
    report = groups.invariance_check(
        args.measure,
        f,
        args.trials,
        rng,
        params=params,
        exhaustive=args.exhaustive,
    )
    config = {
        "command": "invariance",
        "fn": args.fn,
        "field": f.field.name,
        "measure": args.measure,
        "params": report.params,
        "trials": args.trials,
        "seed": args.seed,
        "exhaustive": args.exhaustive,
        "mod3_residue": args.mod3_residue,
    }
    _emit(_json_text(config, report.to_json()), args.out)
    return 0 if report.all_equal else 1


def cmd_separate(args) -> int:
    fmt = args.format or "json"
    fld = field_from_name(args.field)
    sampler = circuits.sampler_from_spec(args.easy, fld)
    f_hard = functions.from_spec(args.hard, fld, args.mod3_residue)
    if sampler.n != f_hard.n:
        raise ValueError(
            f"easy class on {sampler.n} variables but hard candidate on {f_hard.n}"
        )
    ambient = sepmod.Ambient(
        sampler.n, max(sampler.d, f_hard.degree), fld, homogeneous=False
    )
    module = _module_from_spec(args.module, ambient, args)
    report = sepmod.run_separation(module, sampler, f_hard, args.trials, args.seed)
    config = {
        "command": "separate",
        "module": args.module,
        "easy": args.easy,
        "hard": args.hard,
        "field": fld.name,
        "trials": args.trials,
        "seed": args.seed,
        "mod3_residue": args.mod3_residue,
    }
    if fmt == "json":
        _emit(_json_text(config, report.to_json()), args.out)
    else:
        summary = [
            ["separating", int(report.separating)],
            ["easy_vanish_count", report.easy_vanish_count],
            ["hard_nonvanish", int(report.hard_nonvanish)],
            ["hard_value", report.hard_value],
        ]
        _emit(_csv_text(config, report.csv_rows() + summary), args.out)
    return 0


def cmd_table(args) -> int:
    fmt = args.format or "csv"
    fld = field_from_name(args.field)
    if not (1 <= args.d_min <= args.d_max and 1 <= args.n_min <= args.n_max):
        raise ValueError("empty or inverted grid ranges")
    header = [
        "n",
        "d",
        "two_d",
        "rank",
        "lower_bound",
        "ok",
        "matrix_rows",
        "matrix_cols",
        "threshold_s1",
    ]
    rows = []
    for n in range(args.n_min, args.n_max + 1):
        for d in range(args.d_min, args.d_max + 1):
            if 2 * d > n:
                continue
            f = functions.elementary_symmetric(2 * d, n, fld)
            report = measures.compute_measure("dim_partials", f)
            bound = comb(n, d)
            rows.append(
                [
                    n,
                    d,
                    2 * d,
                    report.rank,
                    bound,
                    int(report.rank >= bound),
                    report.rows,
                    report.cols,
                    1 << (2 * d),
                ]
            )
    config = {
        "command": "table",
        "n_min": args.n_min,
        "n_max": args.n_max,
        "d_min": args.d_min,
        "d_max": args.d_max,
        "field": fld.name,
        "measure": "dim_partials",
    }
    if fmt == "csv":
        _emit(_csv_text(config, [header] + rows), args.out)
    else:
        result = [dict(zip(header, row)) for row in rows]
        _emit(_json_text(config, result), args.out)
    return 0


def cmd_rs_distance(args) -> int:
    fmt = args.format or "json"
    _require_json(fmt)
    if bool(args.fn) == bool(args.table):
        raise ValueError("pass exactly one of --fn and --table")
    if args.fn:
        f = functions.from_spec(args.fn, prime_field(2), args.mod3_residue)
        t = f2lab.multilinear_to_truth_table(f2lab.reduce_pointwise(f))
        source = {"fn": args.fn}
    else:
        with open(args.table) as fh:
            t = f2lab.parse_table(fh.read())
        source = {"table": args.table}
    report = f2lab.distance_to_degree(t, args.bound)
    config = {
        "command": "rs-distance",
        "bound": args.bound,
        "mod3_residue": args.mod3_residue,
        **source,
    }
    _emit(_json_text(config, report.to_json()), args.out)
    return 0


def cmd_gk_check(args) -> int:
    fmt = args.format or "json"
    _require_json(fmt)
    fld = field_from_name(args.field)
    if fld.p is None:
        raise ValueError("gk-check runs over a prime field (use --field Fp:<q>)")
    f = functions.from_spec(args.fn, fld, args.mod3_residue)
    n = isqrt(f.n)
    if n * n != f.n:
        raise ValueError(f"{f.n} variables do not form a square matrix")
    if args.trials > 0:
        rng = trial_rng(args.seed, 0)
        sigmas = [
            groups.random_invertible(n, fld, rng) for _ in range(args.trials)
        ]
    else:
        sigmas = groups.enumerate_invertible(n, fld)
    pairwise = f2lab.gk_intersection_test(
        f, args.r, sigmas, args.max_degree, strategy="pairwise"
    )
    stacked = f2lab.gk_intersection_test(
        f, args.r, sigmas, args.max_degree, strategy="stacked"
    )
    agree = (
        pairwise.lambda_dim == stacked.lambda_dim
        and pairwise.intersection_dim == stacked.intersection_dim
        and pairwise.property_holds == stacked.property_holds
    )
    config = {
        "command": "gk-check",
        "fn": args.fn,
        "field": fld.name,
        "r": args.r,
        "max_degree": pairwise.max_degree,
        "trials": args.trials,
        "seed": args.seed,
        "mod3_residue": args.mod3_residue,
    }
    result = {
        "pairwise": pairwise.to_json(),
        "stacked": stacked.to_json(),
        "agree": agree,
    }
    _emit(_json_text(config, result), args.out)
    return 0 if agree else 1


_COMMANDS = {
    "measure": cmd_measure,
    "invariance": cmd_invariance,
    "separate": cmd_separate,
    "table": cmd_table,
    "rs-distance": cmd_rs_distance,
    "gk-check": cmd_gk_check,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        return code if isinstance(code, int) else 2
    try:
        return _COMMANDS[args.command](args)
    except InfeasibleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
