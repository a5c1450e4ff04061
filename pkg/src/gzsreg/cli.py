"""Command-line entry point ``gz``.

Exit codes: 0 success, 1 verification failure, 2 bad input,
3 the two strong-regularity criteria disagree.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from pathlib import Path

from .construct import construct_sreg_trace, verify_construction
from .gz import is_nilfibre, is_sreg_centralizer, is_sreg_differentials, kw_map, level_diagnostics
from .io import MatrixFormatError, dumps, matrix_to_json, read_flag, read_matrix, read_matrix_list
from .korbits import InvariantViolation, borel_flag, classify_korbit, is_borel_subalgebra
from .nilfibre import ClosedOrbitSequence, SignSequence, build_bq, component_census
from .verify import MAX_N, run_suites

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_DISAGREE = 0, 1, 2, 3


class InputError(Exception):
    pass


def _emit(payload, out: str | None = None) -> None:
    text = dumps(payload)
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


def cmd_phi(args) -> int:
    x = read_matrix(args.matrix)
    spectrum = kw_map(x)
    _emit({"levels": [str(p) for p in spectrum.level_polys], "coefficients": spectrum.to_json()})
    return EXIT_OK


def cmd_sreg_check(args) -> int:
    x = read_matrix(args.matrix)
    by_centralizer = is_sreg_centralizer(x)
    by_differentials = is_sreg_differentials(x)
    payload = {
        "sreg": by_centralizer,
        "sreg_centralizer": by_centralizer,
        "sreg_differentials": by_differentials,
        "nilfibre": is_nilfibre(x),
        "nilfibre_sreg": by_centralizer and is_nilfibre(x),
        "levels": [d.to_json() for d in level_diagnostics(x)],
    }
    _emit(payload)
    if by_centralizer != by_differentials:
        print("error: strong-regularity criteria disagree", file=sys.stderr)
        return EXIT_DISAGREE
    return EXIT_OK


def cmd_classify(args) -> int:
    if args.borel:
        mats = read_matrix_list(args.borel)
        size = mats[0].nrows
        if not is_borel_subalgebra(mats, size):
            raise InputError("the matrices do not span a Borel subalgebra")
        flag = borel_flag(mats, size)
    else:
        if not args.flag:
            raise InputError("give a flag file or --borel")
        flag = read_flag(args.flag)
    c = classify_korbit(flag)
    _emit({"orbit": c.to_json(), "label": str(c), "closed": c.is_closed, "sign": c.sign(flag.n_plus_1)})
    return EXIT_OK


def _check_n(n: int) -> None:
    if not 1 <= n <= MAX_N:
        raise InputError(f"--n must be in 1..{MAX_N}")


def cmd_components(args) -> int:
    _check_n(args.n)
    report = component_census(args.n, args.samples, random.Random(f"{args.seed}:components"))
    _emit(report.to_json())
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_build_borel(args) -> int:
    try:
        s = SignSequence(args.signs)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    _emit({"signs": str(s), "orbits": str(s.orbit_sequence()), **build_bq(s).to_json()})
    return EXIT_OK


def cmd_construct_sreg(args) -> int:
    try:
        q = ClosedOrbitSequence.parse(args.orbits)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    if q.n_plus_1 > MAX_N + 1:
        raise InputError(f"at most {MAX_N + 1} levels")
    c = construct_sreg_trace(q)
    checks = verify_construction(c)
    signs = q.signs()
    payload = {
        "orbits": str(q),
        "signs": str(signs) if signs else None,
        "borel": c.pattern.to_json(),
        "matrix": matrix_to_json(c.x),
        "eigenvalues": [str(v) for v in c.eigenvalues],
        "spectrum": [str(p) for p in kw_map(c.x).level_polys],
        "steps": [
            {
                "level": s.level,
                "orbit_index": s.orbit_index,
                "weyl": list(s.weyl),
                "z": matrix_to_json(s.z),
                "border": {f"{r},{col}": str(v) for (r, col), v in sorted(s.border_entries().items())},
            }
            for s in c.steps
        ],
        "verification": checks,
    }
    _emit(payload)
    return EXIT_OK if all(checks.values()) else EXIT_FAIL


def cmd_verify(args) -> int:
    _check_n(args.n)
    start = time.perf_counter()
    reports = run_suites(args.suite, args.n, args.seed, args.trials)
    elapsed = time.perf_counter() - start
    payload = [r.to_json() for r in reports] if args.suite == "all" else reports[0].to_json()
    _emit(payload, args.out)
    print(f"wall time {elapsed:.2f}s", file=sys.stderr)
    failed = [rec for r in reports for rec in r.failures()]
    for rec in failed:
        print("FAILED " + json.dumps(rec.to_json(), default=str), file=sys.stderr)
    return EXIT_FAIL if failed else EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_INPUT)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="gz", description="Gelfand-Zeitlin strong regularity toolkit (exact arithmetic)")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("phi", help="level characteristic polynomials")
    s.add_argument("matrix")
    s.set_defaults(func=cmd_phi)

    s = sub.add_parser("sreg-check", help="both strong-regularity criteria with per-level diagnostics")
    s.add_argument("matrix")
    s.set_defaults(func=cmd_sreg_check)

    s = sub.add_parser("classify", help="K-orbit of a flag or of a Borel subalgebra")
    s.add_argument("flag", nargs="?", help="matrix whose columns are the flag basis")
    s.add_argument("--borel", help="JSON list of matrices spanning a Borel subalgebra")
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("components", help="sample every component of the strongly regular nilfibre")
    s.add_argument("--n", type=int, default=3)
    s.add_argument("--samples", type=int, default=10)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_components)

    s = sub.add_parser("build-borel", help="Borel pattern of a sign word")
    s.add_argument("--signs", required=True)
    s.set_defaults(func=cmd_build_borel)

    s = sub.add_parser("construct-sreg", help="strongly regular element of a standard Borel")
    s.add_argument("--orbits", required=True, help='closed orbit indices, e.g. "1,2,1"')
    s.set_defaults(func=cmd_construct_sreg)

    s = sub.add_parser("verify", help="run verification suites")
    s.add_argument("--suite", choices=("korbits", "nilfibre", "sreg", "all"), default="all")
    s.add_argument("--n", type=int, default=3)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--trials", type=int, default=100)
    s.add_argument("--out")
    s.set_defaults(func=cmd_verify)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (MatrixFormatError, InputError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except InvariantViolation as exc:
        print(f"invariant violated: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
