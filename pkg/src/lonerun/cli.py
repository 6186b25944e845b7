"""Command-line surface for the loneliness engine.

Exit codes: 0 success / claim verified; 1 violation or unexpected exception
found; 2 usage error; 3 arithmetic width exceeded.  Results go to stdout as
JSON (one object) unless --table is given; diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import analysis, engine, scan, spectrum
from .rational import Rational, WidthError

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2
EXIT_WIDTH = 3


class UsageError(Exception):
    pass


def _parse_rational(text: str) -> Rational:
    try:
        return Rational.parse(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"invalid rational {text!r}: {exc}") from exc


def _parse_speeds(values) -> list[int]:
    speeds = []
    for v in values:
        try:
            speeds.append(int(v))
        except ValueError as exc:
            raise UsageError(f"invalid speed {v!r}") from exc
    deduped = list(dict.fromkeys(speeds))
    if len(deduped) != len(speeds):
        print("warning: duplicate speeds removed", file=sys.stderr)
    if not deduped:
        raise UsageError("no speeds given")
    for v in deduped:
        if v < 1:
            raise UsageError(f"speeds must be positive integers (got {v})")
    return deduped


def _parse_shard(text: str) -> tuple[int, int]:
    try:
        index, total = text.split("/", 1)
        shard = (int(index), int(total))
    except ValueError as exc:
        raise UsageError(f"invalid shard {text!r} (expected i/t)") from exc
    if not (0 <= shard[0] < shard[1]):
        raise UsageError(f"invalid shard {text!r} (need 0 <= i < t)")
    return shard


def _emit(payload: dict, table: bool):
    if table:
        _print_table(payload)
    else:
        json.dump(payload, sys.stdout, separators=(",", ":"))
        sys.stdout.write("\n")


def _print_table(payload: dict, indent: str = ""):
    for key, value in payload.items():
        if isinstance(value, dict):
            print(f"{indent}{key}:")
            _print_table(value, indent + "  ")
        elif isinstance(value, list) and value and isinstance(value[0], dict):
            print(f"{indent}{key}: ({len(value)} entries)")
            for entry in value:
                print(f"{indent}  - " + ", ".join(f"{k}={v}" for k, v in entry.items()))
        else:
            print(f"{indent}{key}: {value}")


def _cmd_ml(args) -> int:
    floor = _parse_rational(args.floor) if args.floor else None
    batches = []
    if args.file:
        try:
            with open(args.file) as fh:
                for line in fh:
                    line = line.strip()
                    if line:
                        batches.append(line.split())
        except OSError as exc:
            raise UsageError(f"cannot read {args.file}: {exc}") from exc
        if args.speeds:
            raise UsageError("give speeds either positionally or via --file, not both")
    else:
        if not args.speeds:
            raise UsageError("no speeds given")
        batches.append(args.speeds)
    code = EXIT_OK
    for raw in batches:
        try:
            speed_set = engine.normalize(_parse_speeds(raw))
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        if floor is None:
            result = engine.compute_ml(speed_set)
        else:
            try:
                result = engine.compute_ml_with_floor(speed_set, floor)
            except ValueError as exc:
                raise UsageError(str(exc)) from exc
        _emit(result.to_json_dict(speed_set), args.table)
    return code


def _cmd_classify(args) -> int:
    value = _parse_rational(args.value)
    try:
        cls = spectrum.classify(args.n, value)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    _emit(cls.to_json_dict(), args.table)
    return EXIT_OK


def _cmd_scan(args) -> int:
    floor = _parse_rational(args.floor) if args.floor else None
    shard = _parse_shard(args.shard) if args.shard else (0, 1)
    try:
        cfg = scan.ScanConfig(
            n=args.n,
            v_max=args.v_max,
            floor=floor,
            shard=shard,
            output_path=args.out,
            checkpoint_path=args.checkpoint,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if args.resume and (args.checkpoint is None or args.out is None):
        raise UsageError("--resume requires --out and --checkpoint")
    workers = args.workers if args.workers else (os.cpu_count() or 1)
    census = scan.run_scan(
        cfg,
        workers=workers,
        resume=args.resume,
        log=lambda msg: print(msg, file=sys.stderr),
    )
    payload = census.to_json_dict()
    _emit(payload, args.table)
    if census.amended or census.lrc:
        return EXIT_VIOLATION
    return EXIT_OK


def _cmd_verify_family(args) -> int:
    try:
        report = analysis.verify_family(args.s_lo, args.s_hi)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    _emit(report.to_json_dict(), args.table)
    return EXIT_OK if report.all_pass else EXIT_VIOLATION


def _cmd_verify_theorem(args) -> int:
    if args.theorem == 1:
        report = analysis.verify_theorem1(args.v_max)
        clean = not report.exceptions_found
    elif args.theorem == 3:
        report = analysis.verify_theorem3(args.v_max)
        clean = not report.exceptions_found
    elif args.theorem == 4:
        report = analysis.verify_theorem4(args.v_max)
        clean = all(
            analysis.is_exception_family(e["speeds"]) for e in report.exceptions_found
        )
    else:
        report = analysis.verify_shifted_theorem2(
            args.trials, args.q_max, args.v_max, args.seed
        )
        clean = not report.exceptions_found
    _emit(report.to_json_dict(), args.table)
    return EXIT_OK if clean else EXIT_VIOLATION


def _cmd_lemma3(args) -> int:
    L = _parse_rational(args.L)
    eps = _parse_rational(args.eps)
    try:
        v_min = analysis.lemma3_min_speed(L, eps, args.v_prev)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    _emit({"L": str(L), "eps": str(eps), "v_prev": args.v_prev, "min_speed": v_min}, args.table)
    return EXIT_OK


def _cmd_lemma4(args) -> int:
    L = _parse_rational(args.L)
    try:
        ok = analysis.lemma4_condition(L, args.n, args.v_nm2, args.v_nm1)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    _emit(
        {"L": str(L), "n": args.n, "v_nm2": args.v_nm2, "v_nm1": args.v_nm1, "condition": ok},
        args.table,
    )
    return EXIT_OK


def _cmd_oracle_check(args) -> int:
    import random

    checked = 0
    mismatches = []

    def check(speeds):
        nonlocal checked
        s = engine.normalize(list(speeds))
        a = engine.compute_ml(s)
        b = engine.oracle_ml(s)
        checked += 1
        if a.value != b.value:
            mismatches.append(
                {"speeds": list(s.speeds), "ml": str(a.value), "oracle": str(b.value)}
            )

    if args.trials:
        rng = random.Random(args.seed)
        for _ in range(args.trials):
            speeds = rng.sample(range(1, args.v_max + 1), args.n)
            check(speeds)
    else:
        for speeds in scan.enumerate_primitive(args.n, args.v_max):
            check(speeds)
    _emit({"n": args.n, "v_max": args.v_max, "checked": checked, "mismatches": mismatches}, args.table)
    return EXIT_OK if not mismatches else EXIT_VIOLATION


def _cmd_shifted_ml(args) -> int:
    speeds = _parse_speeds(args.speeds)
    if args.offsets:
        if len(args.offsets) != len(speeds):
            raise UsageError("need exactly one offset per speed")
        offsets = [_parse_rational(o) for o in args.offsets]
    else:
        offsets = [Rational(0)] * len(speeds)
    try:
        inst = engine.ShiftedInstance.create(speeds, offsets)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    result = engine.shifted_ml(inst)
    payload = {
        "speeds": list(inst.speeds),
        "offsets": [str(o) for o in inst.offsets],
        "ml": str(result.value),
        "witness": {
            "t": str(result.witness_time),
            "pair": list(result.witness_pair) if result.witness_pair else None,
        },
    }
    _emit(payload, args.table)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lonerun",
        description="Exact loneliness values, spectrum classification, and scans "
        "for integer speed sets.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ml", help="exact maximum loneliness of a speed set")
    p.add_argument("speeds", nargs="*", help="positive integer speeds")
    p.add_argument("--file", help="batch mode: one whitespace-separated tuple per line")
    p.add_argument("--floor", metavar="p/q", help="early-exit once this floor is reached")
    p.set_defaults(func=_cmd_ml)

    p = sub.add_parser("classify", help="classify a value against the spectrum lattice")
    p.add_argument("-n", "--n", dest="n", type=int, required=True, help="runner count")
    p.add_argument("value", help="exact value p/q")
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("scan", help="exhaustive census over primitive tuples")
    p.add_argument("--n", dest="n", type=int, required=True)
    p.add_argument("--v-max", dest="v_max", type=int, required=True)
    p.add_argument("--floor", metavar="p/q", help="early-exit floor (default 1/n)")
    p.add_argument("--shard", metavar="i/t", help="process only shard i of t")
    p.add_argument("--out", metavar="PATH", help="JSONL output path")
    p.add_argument("--checkpoint", metavar="PATH", help="checkpoint path")
    p.add_argument("--resume", action="store_true", help="resume from checkpoint")
    p.add_argument("--workers", type=int, default=0, help="parallel workers (default: all cores)")
    p.set_defaults(func=_cmd_scan)

    p = sub.add_parser("verify-family", help="check the counterexample family formula")
    p.add_argument("--s-lo", dest="s_lo", type=int, default=0)
    p.add_argument("--s-hi", dest="s_hi", type=int, default=200)
    p.set_defaults(func=_cmd_verify_family)

    p = sub.add_parser("verify-theorem", help="run a common-factor or shifted-start scan")
    p.add_argument("theorem", type=int, choices=[1, 2, 3, 4])
    p.add_argument("--v-max", dest="v_max", type=int, default=40)
    p.add_argument("--trials", type=int, default=10000, help="trials for theorem 2")
    p.add_argument("--q-max", dest="q_max", type=int, default=8, help="offset denominator bound")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_verify_theorem)

    p = sub.add_parser("lemma3", help="least speed keeping loneliness within eps of L")
    p.add_argument("L", help="loneliness bound p/q")
    p.add_argument("eps", help="allowed loss p/q")
    p.add_argument("v_prev", type=int, help="fastest existing speed")
    p.set_defaults(func=_cmd_lemma3)

    p = sub.add_parser("lemma4", help="two-fast-runners condition L - 3a/(nb) >= 1/n")
    p.add_argument("L", help="loneliness bound p/q")
    p.add_argument("n", type=int)
    p.add_argument("v_nm2", type=int)
    p.add_argument("v_nm1", type=int)
    p.set_defaults(func=_cmd_lemma4)

    p = sub.add_parser("oracle-check", help="cross-check the engine against the oracle")
    p.add_argument("--n", dest="n", type=int, required=True)
    p.add_argument("--v-max", dest="v_max", type=int, required=True)
    p.add_argument("--trials", type=int, default=0, help="random trials (default: exhaustive)")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_oracle_check)

    p = sub.add_parser("shifted-ml", help="maximum loneliness with start offsets")
    p.add_argument("speeds", nargs="+")
    p.add_argument("--offsets", nargs="+", metavar="p/q", help="one per speed (default 0)")
    p.set_defaults(func=_cmd_shifted_ml)

    for sp in sub.choices.values():
        sp.add_argument("--table", action="store_true", help="human-readable output")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except scan.CheckpointMismatch as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except scan.ScanError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except WidthError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_WIDTH
    except BrokenPipeError:
        return EXIT_OK
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
