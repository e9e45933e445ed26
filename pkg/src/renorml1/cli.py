"""Batch front-end: JSON in, machine-readable reports out.

Subcommands
    norm                       squared-norm report for one function
    split                      mass split (b, c, f1, f2) at level K
    witness                    neighborhood witness pair with named checks
    probe strict|midpoint|extreme|chain|slice
    ell1 greedy|spikes|dual
    ured                       sup-norm recursion + claim/segment checks
    selftest                   seeded invariant batteries

Exit codes: 0 success, 1 verification failure (for example the witness gap
condition), 2 input error (bad JSON, bad rationals, overflow). Rationals are
read and written as 'p/q' strings; floats appear only in labelled rendering
fields. With a fixed seed every command writes byte-identical reports.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .dyadic import (
    LevelOverflowError,
    decimal_str,
    frac_str,
    step_from_json,
    to_frac,
)
from .ell1 import (
    disjoint_spike_family,
    dual_segment,
    greedy_asymptotic_ell1,
    nonsmooth_pairings,
)
from .probes import (
    midpoint_defect,
    perturbation_l1_chain,
    slice_csv,
    slice_diameter_lb,
    strong_extreme_failure,
)
from .renorm import norm_report, triangle_equality_case
from .selftest import run_selftest
from .ured import segment_check, ured_recursion, verify_claim
from .witness import GapConditionError, WeakNbhd, d2p_witness, split_pair


class InputError(ValueError):
    pass


def _load_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise InputError(f"input file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise InputError(
            f"malformed JSON in {path} at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from None


def _need(obj: dict, key: str):
    if key not in obj:
        raise InputError(f"missing required key {key!r} in input")
    return obj[key]


def _parse_rat(text) -> Fraction:
    try:
        return to_frac(text)
    except (ValueError, TypeError) as exc:
        raise InputError(str(exc)) from None


def _parse_rat_list(text: str) -> list[Fraction]:
    return [_parse_rat(part.strip()) for part in text.split(",") if part.strip()]


def _step(obj) -> "DyadicStep":
    try:
        return step_from_json(obj)
    except (ValueError, TypeError) as exc:
        raise InputError(str(exc)) from None


def _nbhd_from_json(obj) -> WeakNbhd:
    center = _step(_need(obj, "center"))
    functionals = tuple(_step(o) for o in obj.get("functionals", []))
    delta = _parse_rat(_need(obj, "delta"))
    try:
        return WeakNbhd(center, functionals, delta)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _emit(text: str, out_path) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_json(obj, out_path) -> None:
    _emit(json.dumps(obj, indent=2) + "\n", out_path)


# -- subcommand handlers -------------------------------------------------------


def _cmd_norm(args) -> int:
    f = _step(_load_json(args.input))
    _emit_json(norm_report(f, args.float_digits).to_json(), args.out)
    return 0


def _cmd_split(args) -> int:
    f = _step(_load_json(args.input))
    if args.level is None:
        raise InputError("split needs --level K")
    sp = split_pair(f, args.level)
    _emit_json(sp.to_json(), args.out)
    return 0


def _cmd_witness(args) -> int:
    nbhd = _nbhd_from_json(_load_json(args.input))
    if not args.eps:
        raise InputError("witness needs --eps")
    eps_list = _parse_rat_list(args.eps)
    if len(eps_list) != 1:
        raise InputError("witness takes exactly one --eps value")
    rep = d2p_witness(nbhd, eps_list[0])
    _emit_json(rep.to_json(), args.out)
    return 0


def _cmd_probe(args) -> int:
    if args.what == "strict":
        obj = _load_json(args.input)
        case = triangle_equality_case(_step(_need(obj, "f")), _step(_need(obj, "g")))
        _emit_json(case.to_json(), args.out)
    elif args.what == "midpoint":
        obj = _load_json(args.input)
        d = midpoint_defect(_step(_need(obj, "f")), _step(_need(obj, "g")))
        _emit_json(
            {"defect": frac_str(d), "defect_float": decimal_str(d, args.float_digits)},
            args.out,
        )
    elif args.what == "extreme":
        nbhd = _nbhd_from_json(_load_json(args.input))
        if not args.eps:
            raise InputError("probe extreme needs --eps")
        wit = strong_extreme_failure(nbhd, _parse_rat_list(args.eps)[0])
        _emit_json(wit.to_json(), args.out)
    elif args.what == "chain":
        obj = _load_json(args.input)
        A = [tuple(idx) for idx in obj.get("A", [])]
        try:
            rep = perturbation_l1_chain(
                _step(_need(obj, "f")), _step(_need(obj, "g")), A
            )
        except ValueError as exc:
            raise InputError(str(exc)) from None
        _emit_json(rep.to_json(), args.out)
    elif args.what == "slice":
        nbhd = _nbhd_from_json(_load_json(args.input))
        if not args.eps:
            raise InputError("probe slice needs --eps schedule")
        entries = slice_diameter_lb(
            nbhd.center, nbhd.functionals, nbhd.delta, _parse_rat_list(args.eps)
        )
        _emit(slice_csv(entries, args.float_digits), args.out)
        failed = [e for e in entries if not e.ok]
        if failed:
            sys.stderr.write(f"slice entries failed: {failed[0].error}\n")
            return 1
    else:  # pragma: no cover - argparse restricts choices
        raise InputError(f"unknown probe {args.what}")
    return 0


def _cmd_ell1(args) -> int:
    obj = _load_json(args.input)
    deltas = [_parse_rat(d) for d in _need(obj, "deltas")]
    m = obj.get("m", len(deltas))
    if args.what == "greedy":
        try:
            fam = greedy_asymptotic_ell1(deltas, m)
        except ValueError as exc:
            raise InputError(str(exc)) from None
        _emit_json(fam.to_json(), args.out)
    else:
        if args.level is None:
            raise InputError("ell1 spikes/dual need --level K")
        try:
            fam = disjoint_spike_family(deltas, m, args.level)
        except ValueError as exc:
            raise InputError(str(exc)) from None
        if args.what == "spikes":
            _emit_json(fam.to_json(), args.out)
        else:
            pair = dual_segment(fam)
            report = {
                "family": fam.to_json(),
                "dual": pair.to_json(),
                "nonsmooth": nonsmooth_pairings(fam, pair).to_json(),
            }
            _emit_json(report, args.out)
    return 0


def _cmd_ured(args) -> int:
    if args.delta is None or not args.eps:
        raise InputError("ured needs --delta and --eps (comma-separated)")
    delta = _parse_rat(args.delta)
    eps = _parse_rat_list(args.eps)
    try:
        run = ured_recursion(delta, eps, len(eps))
        grid = [Fraction(0), Fraction(1, 4), Fraction(1, 2), Fraction(3, 4), Fraction(1)]
        report = run.to_json()
        report["verify"] = verify_claim(run)
        if run.steps >= 1:
            report["segment"] = segment_check(run, grid, run.steps)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    _emit_json(report, args.out)
    return 0


def _cmd_selftest(args) -> int:
    ok, lines = run_selftest(args.seed, args.trials)
    _emit("\n".join(lines) + "\n", args.out)
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="renorml1",
        description="Exact-arithmetic reports for dyadic step functions and the renormed ball.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--input", help="input JSON path")
        p.add_argument("--out", help="output path (default stdout)")
        p.add_argument("--seed", type=int, default=0, help="seed for randomized trials")
        p.add_argument("--eps", help="rational eps, or comma-separated schedule")
        p.add_argument("--delta", help="rational delta")
        p.add_argument("--level", type=int, help="dyadic level parameter")
        p.add_argument("--prec", default="1/10000", help="rational precision parameter")
        p.add_argument("--float-digits", type=int, default=12, dest="float_digits")
        p.add_argument("--trials", type=int, default=25, help="trial count")

    for name, fn in [
        ("norm", _cmd_norm),
        ("split", _cmd_split),
        ("witness", _cmd_witness),
        ("ured", _cmd_ured),
        ("selftest", _cmd_selftest),
    ]:
        p = sub.add_parser(name)
        common(p)
        p.set_defaults(handler=fn)

    p = sub.add_parser("probe")
    p.add_argument("what", choices=["strict", "midpoint", "extreme", "chain", "slice"])
    common(p)
    p.set_defaults(handler=_cmd_probe)

    p = sub.add_parser("ell1")
    p.add_argument("what", choices=["greedy", "spikes", "dual"])
    common(p)
    p.set_defaults(handler=_cmd_ell1)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except GapConditionError as exc:
        sys.stderr.write(f"verification failure: {exc}\n")
        return 1
    except (InputError, LevelOverflowError) as exc:
        sys.stderr.write(f"input error: {exc}\n")
        return 2
    except ValueError as exc:
        sys.stderr.write(f"input error: {exc}\n")
        return 2
    except OSError as exc:
        sys.stderr.write(f"input error: {exc}\n")
        return 2


def entry() -> None:  # console-script hook
    sys.exit(main())


if __name__ == "__main__":
    entry()
