"""Command-line surface: construct, certify, verify, density, lemma.

All commands emit machine-readable JSON lines (default) or CSV with fixed
headers, and identical configuration reproduces identical bytes.  Exit codes:
0 success / all checks passed, 1 verification failure, 2 usage or
configuration error.

Witness records use the "witness/1" schema:

    {"schema":"witness/1","n":str,"k":int,"m0":str,"m1":str,"m2":str,
     "m3":str,"u":int,"M":int,"sq":int,"residue":int,"e":int}

with n and the quadruple as decimal strings (they outgrow machine words).
The CSV variant carries the same fields, header
``n,k,m0,m1,m2,m3,u,M,sq,residue,e``.
"""

from __future__ import annotations

import argparse
import csv
import itertools
import json
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import IO, Iterator, Optional

from . import bounds, construction, oracle
from .construction import CongruenceTarget, CubicParams, Witness
from .intpoly import IntPolynomial

WITNESS_FIELDS = ["n", "k", "m0", "m1", "m2", "m3", "u", "M", "sq", "residue", "e"]

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


def parse_poly(text: str) -> IntPolynomial:
    """x^H / x monomial shorthand, or a high-to-low comma coefficient list."""
    s = text.strip()
    if s == "x":
        return IntPolynomial.monomial(1)
    match = re.fullmatch(r"x\^(\d+)", s)
    if match:
        return IntPolynomial.monomial(int(match.group(1)))
    if re.fullmatch(r"-?\d+(\s*,\s*-?\d+)*", s):
        coeffs_high_to_low = [int(tok) for tok in s.split(",")]
        return IntPolynomial.from_coeffs(reversed(coeffs_high_to_low))
    raise ValueError(
        f"cannot parse polynomial {text!r}: use x^H or a comma-separated "
        f"coefficient list, highest degree first"
    )


@dataclass(frozen=True)
class RunConfig:
    """Validated knobs for one CLI invocation."""

    command: str
    q: int = 0
    m: int = 0
    g: int = 0
    h: Optional[int] = None
    poly: Optional[IntPolynomial] = None
    u: Optional[int] = None
    n_limit: Optional[int] = None
    n_expr: Optional[str] = None
    limit: Optional[int] = None
    count: Optional[int] = None
    l: Optional[int] = None
    mode: Optional[str] = None
    max_per_range: Optional[int] = None
    seed: Optional[int] = None
    tolerance: Fraction = Fraction(1, 50)
    fmt: str = "json"
    out: Optional[str] = None
    workers: int = 1
    input_path: Optional[str] = None


class _Writer:
    """Streams records as JSON lines or CSV rows with a fixed header."""

    def __init__(self, stream: IO[str], fmt: str, fields: list[str]):
        self.stream = stream
        self.fmt = fmt
        self.fields = fields
        self._csv = None
        if fmt == "csv":
            self._csv = csv.writer(stream, lineterminator="\n")
            self._csv.writerow(fields)

    def write(self, record: dict) -> None:
        if self._csv is not None:
            self._csv.writerow([record.get(f, "") for f in self.fields])
        else:
            self.stream.write(json.dumps(record, separators=(",", ":")) + "\n")


def _with_output(config: RunConfig, fields: list[str]):
    if config.out:
        stream = open(config.out, "w")
        return stream, _Writer(stream, config.fmt, fields), True
    return sys.stdout, _Writer(sys.stdout, config.fmt, fields), False


def witness_record(w: Witness) -> dict:
    return {
        "schema": "witness/1",
        "n": str(w.n),
        "k": w.k,
        "m0": str(w.params.m0),
        "m1": str(w.params.m1),
        "m2": str(w.params.m2),
        "m3": str(w.params.m3),
        "u": w.params.u,
        "M": w.offset,
        "sq": w.sq_value,
        "residue": w.residue,
        "e": w.e,
    }


def _witness_from_record(record: dict) -> Witness:
    params = CubicParams(
        m0=int(record["m0"]),
        m1=int(record["m1"]),
        m2=int(record["m2"]),
        m3=int(record["m3"]),
        u=int(record["u"]),
    )
    return Witness(
        n=int(record["n"]),
        k=int(record["k"]),
        params=params,
        offset=int(record["M"]),
        sq_value=int(record["sq"]),
        residue=int(record["residue"]),
        e=int(record["e"]),
    )


def read_witness_file(path: str) -> tuple[list[Witness], list[tuple[int, str]]]:
    """Parse a construct output file (JSON lines or CSV, auto-detected).

    Returns (witnesses, malformed) where malformed pairs 1-based line numbers
    with a description of what was wrong.
    """
    witnesses: list[Witness] = []
    malformed: list[tuple[int, str]] = []
    with open(path, "r") as handle:
        lines = handle.read().splitlines()
    body = [(i + 1, line) for i, line in enumerate(lines) if line.strip()]
    if not body:
        return witnesses, malformed
    is_json = body[0][1].lstrip().startswith("{")
    if not is_json:
        header = next(csv.reader([body[0][1]]))
        if header != WITNESS_FIELDS:
            malformed.append((body[0][0], f"unexpected CSV header {header}"))
            return witnesses, malformed
        body = body[1:]
    for lineno, line in body:
        try:
            if is_json:
                record = json.loads(line)
                if record.get("schema") != "witness/1":
                    raise ValueError(f"unexpected schema {record.get('schema')!r}")
            else:
                row = next(csv.reader([line]))
                if len(row) != len(WITNESS_FIELDS):
                    raise ValueError(f"expected {len(WITNESS_FIELDS)} columns, got {len(row)}")
                record = dict(zip(WITNESS_FIELDS, row))
            witnesses.append(_witness_from_record(record))
        except (ValueError, KeyError, TypeError) as exc:
            malformed.append((lineno, str(exc)))
    return witnesses, malformed


def _family_chunk(
    args: tuple[int, int, int, tuple[int, ...], int, int, int]
) -> list[dict]:
    q, m, g, coeffs, u, start, stop = args
    target = CongruenceTarget(q=q, m=m, g=g)
    p = IntPolynomial.from_coeffs(coeffs)
    plan = construction.make_plan(target, p, u)
    box = construction.admissible_ranges(q, plan.h, plan.u)
    return [
        witness_record(construction.witness_for(plan, box.params_at(i)))
        for i in range(start, stop)
    ]


def cmd_construct(config: RunConfig) -> int:
    target = CongruenceTarget(q=config.q, m=config.m, g=config.g)
    p = config.poly
    assert p is not None
    plan = construction.make_plan(target, p, config.u)
    box = construction.admissible_ranges(target.q, plan.h, plan.u)
    total = box.size if config.limit is None else min(config.limit, box.size)
    stream, writer, close = _with_output(config, WITNESS_FIELDS)
    try:
        if config.workers <= 1:
            for index in range(total):
                writer.write(
                    witness_record(
                        construction.witness_for(plan, box.params_at(index))
                    )
                )
        else:
            cuts = [total * i // config.workers for i in range(config.workers + 1)]
            jobs = [
                (target.q, target.m, target.g, p.coeffs, plan.u, cuts[i], cuts[i + 1])
                for i in range(config.workers)
                if cuts[i] < cuts[i + 1]
            ]
            with ProcessPoolExecutor(max_workers=config.workers) as pool:
                for rows in pool.map(_family_chunk, jobs):
                    for record in rows:
                        writer.write(record)
    finally:
        if close:
            stream.close()
    return EXIT_OK


_N_EXPR_TOKENS = re.compile(r"[Nqmh0-9+\-*^() ]+\Z")

BOUNDS_FIELDS = [
    "q", "m", "h", "u0", "N0", "C_num", "C_den", "C_root", "N", "u",
    "guaranteed", "estimate_num", "estimate_den", "required", "verdict",
]


def _eval_n_expression(expr: str, q: int, m: int, h: int, n0: int) -> int:
    """Evaluate an --N-at expression over N0, q, m, h (e.g. N0*q^(3h+1))."""
    if not _N_EXPR_TOKENS.match(expr):
        raise ValueError(f"unsupported characters in N expression {expr!r}")
    normalized = expr.replace("^", "**")
    normalized = re.sub(r"(\d)\s*([Nqmh(])", r"\1*\2", normalized)
    normalized = re.sub(r"\)\s*(?=[Nqmh0-9(])", ")*", normalized)
    try:
        value = eval(  # restricted: digits, N0/q/m/h and arithmetic only
            normalized, {"__builtins__": {}}, {"N0": n0, "q": q, "m": m, "h": h}
        )
    except Exception as exc:
        raise ValueError(f"cannot evaluate N expression {expr!r}: {exc}") from None
    if not isinstance(value, int) or value < 1:
        raise ValueError(f"N expression {expr!r} must yield a positive integer")
    return value


def cmd_certify(config: RunConfig) -> int:
    h = config.h
    if h is None:
        p = config.poly
        assert p is not None
        if p.degree < 1 or p.coeffs != (0,) * p.degree + (1,):
            raise ValueError(
                f"certification covers monomials x^h only, got {p}; "
                f"use `construct` for general polynomials"
            )
        h = p.degree
    constants = bounds.explicit_constants(config.q, config.m, h)
    if config.n_expr is not None:
        n_limit = _eval_n_expression(
            config.n_expr, config.q, config.m, h, constants.n0
        )
    else:
        assert config.n_limit is not None
        n_limit = config.n_limit
    report = bounds.certify_lower_bound(config.q, config.m, h, n_limit)
    record = {
        "schema": "bounds/1",
        "q": report.q,
        "m": report.m,
        "h": report.h,
        "u0": report.u0,
        "N0": str(report.n0),
        "C_num": str(report.c.num),
        "C_den": str(report.c.den),
        "C_root": report.c.root,
        "N": str(report.n_limit),
        "u": report.u,
        "guaranteed": str(report.guaranteed),
        "estimate_num": str(report.estimate.numerator),
        "estimate_den": str(report.estimate.denominator),
        "required": str(report.required),
        "verdict": report.verdict,
    }
    stream, writer, close = _with_output(config, BOUNDS_FIELDS)
    try:
        writer.write(record)
    finally:
        if close:
            stream.close()
    return EXIT_OK if report.verdict else EXIT_FAIL


VERIFY_FIELDS = ["line", "index", "ok", "detail"]


def cmd_verify(config: RunConfig) -> int:
    assert config.input_path is not None and config.poly is not None
    witnesses, malformed = read_witness_file(config.input_path)
    report = oracle.verify_witnesses(
        witnesses, config.q, config.m, config.g, config.poly
    )
    by_index: dict[int, list[str]] = {}
    for failure in report.failures:
        by_index.setdefault(failure.index, []).append(failure.message)
    stream, writer, close = _with_output(config, VERIFY_FIELDS)
    try:
        for lineno, message in malformed:
            writer.write(
                {
                    "schema": "verify/1",
                    "line": lineno,
                    "index": None,
                    "ok": False,
                    "detail": f"malformed row: {message}",
                }
            )
        for index in range(report.total):
            problems = by_index.get(index, [])
            writer.write(
                {
                    "schema": "verify/1",
                    "line": None,
                    "index": index,
                    "ok": not problems,
                    "detail": "; ".join(problems),
                }
            )
        ok = report.ok and not malformed
        writer.write(
            {
                "schema": "verify-summary/1",
                "line": None,
                "index": None,
                "ok": ok,
                "detail": (
                    f"total={report.total} failed={len(by_index)} "
                    f"malformed={len(malformed)}"
                ),
            }
        )
    finally:
        if close:
            stream.close()
    return EXIT_OK if ok else EXIT_FAIL


DENSITY_FIELDS = [
    "residue", "count", "density", "prediction", "deviation", "within_tolerance",
]


def cmd_density(config: RunConfig) -> int:
    assert config.poly is not None and config.n_limit is not None
    table = oracle.density_table(
        config.q, config.m, config.poly, config.n_limit, workers=config.workers
    )
    comparison = oracle.compare_to_main_term(table)
    all_within = True
    stream, writer, close = _with_output(config, DENSITY_FIELDS)
    try:
        for row in comparison.rows:
            within = row.deviation <= config.tolerance
            all_within = all_within and within
            writer.write(
                {
                    "schema": "density/1",
                    "residue": row.residue,
                    "count": row.count,
                    "density": f"{row.density.numerator}/{row.density.denominator}",
                    "prediction": (
                        f"{row.prediction.numerator}/{row.prediction.denominator}"
                    ),
                    "deviation": (
                        f"{row.deviation.numerator}/{row.deviation.denominator}"
                    ),
                    "within_tolerance": within,
                }
            )
    finally:
        if close:
            stream.close()
    return EXIT_OK if all_within else EXIT_FAIL


LEMMA_FIELDS = ["m0", "m1", "m2", "m3", "u", "ok", "first_violation"]

# Refuse unbounded exhaustive runs past this many quadruples.
_EXHAUSTIVE_CAP = 10**7


def _lemma_quadruples(
    config: RunConfig, box: construction.AdmissibleBox
) -> Iterator[CubicParams]:
    if config.mode == "random":
        assert config.seed is not None and config.count is not None
        yield from box.sample(config.count, config.seed)
        return
    per = config.max_per_range
    m_values = range(box.lo, box.hi if per is None else min(box.lo + per, box.hi))
    m1_values = range(1, (box.m1_max if per is None else min(per, box.m1_max)) + 1)
    total = len(m_values) ** 3 * len(m1_values)
    if total > _EXHAUSTIVE_CAP:
        raise ValueError(
            f"exhaustive run would cover {total} quadruples; "
            f"truncate with --max-per-range"
        )
    for m3, m2, m1, m0 in itertools.product(m_values, m_values, m1_values, m_values):
        yield CubicParams(m0=m0, m1=m1, m2=m2, m3=m3, u=box.u)


def cmd_lemma(config: RunConfig) -> int:
    assert config.l is not None and config.u is not None
    box = construction.admissible_ranges(config.q, config.l, config.u)
    total = passed = 0
    stream, writer, close = _with_output(config, LEMMA_FIELDS)
    try:
        for params in _lemma_quadruples(config, box):
            report = construction.verify_sign_pattern(config.q, config.l, params)
            total += 1
            passed += report.ok
            writer.write(
                {
                    "schema": "lemma/1",
                    "m0": str(params.m0),
                    "m1": str(params.m1),
                    "m2": str(params.m2),
                    "m3": str(params.m3),
                    "u": params.u,
                    "ok": report.ok,
                    "first_violation": report.first_violation,
                }
            )
        writer.write(
            {
                "schema": "lemma-summary/1",
                "m0": "",
                "m1": "",
                "m2": "",
                "m3": "",
                "u": config.u,
                "ok": passed == total,
                "first_violation": None,
                "total": total,
                "passed": passed,
                "failed": total - passed,
            }
        )
    finally:
        if close:
            stream.close()
    return EXIT_OK if passed == total else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="digitwitness",
        description=(
            "Construct integers n with s_q(p(n)) = g (mod m), certify the "
            "explicit count lower bound, and cross-check by brute force."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser, workers: bool = False):
        p.add_argument("--format", choices=["json", "csv"], default="json")
        p.add_argument("--out", metavar="PATH", help="output path (default stdout)")
        if workers:
            p.add_argument("--workers", type=int, default=1)

    c = sub.add_parser("construct", help="emit a stream of witnesses")
    c.add_argument("--q", type=int, required=True)
    c.add_argument("--m", type=int, required=True)
    c.add_argument("--g", type=int, required=True)
    c.add_argument("--poly", required=True, help="x^H or high-to-low coefficients")
    c.add_argument("--u", type=int, help="scale override (default: minimum scale)")
    c.add_argument("--limit", type=int, help="stop after this many witnesses")
    add_common(c, workers=True)

    y = sub.add_parser("certify", help="certify the explicit lower bound")
    y.add_argument("--q", type=int, required=True)
    y.add_argument("--m", type=int, required=True)
    deg = y.add_mutually_exclusive_group(required=True)
    deg.add_argument("--h", type=int, help="monomial degree")
    deg.add_argument("--poly", help="monomial as x^H (general p is rejected)")
    n_group = y.add_mutually_exclusive_group(required=True)
    n_group.add_argument("--N", dest="n_limit", type=int)
    n_group.add_argument(
        "--N-at", dest="n_expr", help="expression over N0, q, m, h, e.g. N0*q^(3h+1)"
    )
    add_common(y)

    v = sub.add_parser("verify", help="recheck a witness file from scratch")
    v.add_argument("--q", type=int, required=True)
    v.add_argument("--m", type=int, required=True)
    v.add_argument("--g", type=int, required=True)
    v.add_argument("--poly", required=True)
    v.add_argument("--in", dest="input_path", required=True, metavar="PATH")
    add_common(v)

    d = sub.add_parser("density", help="brute-force residue densities")
    d.add_argument("--q", type=int, required=True)
    d.add_argument("--m", type=int, required=True)
    d.add_argument("--poly", required=True)
    d.add_argument("--N", dest="n_limit", type=int, required=True)
    d.add_argument(
        "--tolerance",
        type=Fraction,
        default=Fraction(1, 50),
        help="max |density - prediction| (exact, default 0.02)",
    )
    add_common(d, workers=True)

    le = sub.add_parser("lemma", help="certify sign patterns over quadruple grids")
    le.add_argument("--q", type=int, required=True)
    le.add_argument("--l", type=int, required=True, help="power of the cubic")
    le.add_argument("--u", type=int, required=True)
    le.add_argument("--mode", choices=["exhaustive", "random"], required=True)
    le.add_argument("--count", type=int, help="sample size (random mode)")
    le.add_argument("--seed", type=int, help="generator seed (random mode)")
    le.add_argument(
        "--max-per-range",
        type=int,
        help="truncate each parameter range to its first K values (exhaustive mode)",
    )
    add_common(le)
    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    poly = None
    if getattr(args, "poly", None) is not None:
        poly = parse_poly(args.poly)
    tolerance = getattr(args, "tolerance", Fraction(1, 50))
    if tolerance < 0:
        raise ValueError("tolerance must be nonnegative")
    workers = getattr(args, "workers", 1)
    if workers < 1:
        raise ValueError("workers must be >= 1")
    limit = getattr(args, "limit", None)
    if limit is not None and limit < 0:
        raise ValueError("limit must be >= 0")
    if args.command == "lemma" and args.mode == "random":
        if args.seed is None or args.count is None:
            raise ValueError("random mode requires --seed and --count")
    if args.command == "density" and args.n_limit < 1:
        raise ValueError("N must be >= 1")
    return RunConfig(
        command=args.command,
        q=getattr(args, "q", 0),
        m=getattr(args, "m", 0),
        g=getattr(args, "g", 0),
        h=getattr(args, "h", None),
        poly=poly,
        u=getattr(args, "u", None),
        n_limit=getattr(args, "n_limit", None),
        n_expr=getattr(args, "n_expr", None),
        limit=limit,
        count=getattr(args, "count", None),
        l=getattr(args, "l", None),
        mode=getattr(args, "mode", None),
        max_per_range=getattr(args, "max_per_range", None),
        seed=getattr(args, "seed", None),
        tolerance=tolerance,
        fmt=args.format,
        out=args.out,
        workers=workers,
        input_path=getattr(args, "input_path", None),
    )


_COMMANDS = {
    "construct": cmd_construct,
    "certify": cmd_certify,
    "verify": cmd_verify,
    "density": cmd_density,
    "lemma": cmd_lemma,
}


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        config = _config_from_args(args)
        return _COMMANDS[args.command](config)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
