import argparse
import json
import logging
import sys
from enum import IntEnum
from pathlib import Path
from typing import Any, List, Optional, Sequence

from sqlalchemy.exc import SQLAlchemyError

from twoprimeadic.core.config import settings
from twoprimeadic.core.exc import (
    CalibrationError,
    EmptyValueError,
    InvalidParametersError,
    SequenceFormatError,
    TheoryMismatchError,
)
from twoprimeadic.ntheory.adic import complexity_report, madic_complexity
from twoprimeadic.ntheory.cyclotomy import (
    build_class_table,
    calibrate,
    cyclotomic_numbers_bruteforce,
    cyclotomic_numbers_formula,
    make_params,
)
from twoprimeadic.ntheory.sequence import (
    SequenceFormat,
    generate,
    parse,
    reverse,
    serialize,
)
from twoprimeadic.ntheory.verify import MODULUS_LEMMAS, verify_all
from twoprimeadic.schemas.params import CaseTag
from twoprimeadic.schemas.reports import ScanFilter

from .scan import query_store, render_rows, run_scan


logger = logging.getLogger(__name__)


class ExitCode(IntEnum):
    OK = 0
    INVALID = 1
    FAILURE = 2
    IO = 3


class _Parser(argparse.ArgumentParser):
    """Ошибки разбора аргументов считаются недопустимыми параметрами."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(ExitCode.INVALID, f"{self.prog}: error: {message}\n")


def _emit(args: argparse.Namespace, payload: Any, lines: Sequence[str]) -> None:
    if args.format == "json":
        sys.stdout.write(json.dumps(payload, sort_keys=True) + "\n")
    else:
        sys.stdout.write("\n".join(lines) + "\n")


def _matrix_lines(matrix) -> List[str]:
    return [" ".join(f"{value:>5}" for value in row) for row in matrix]


def cmd_params(args: argparse.Namespace) -> int:
    params = make_params(args.p, args.q)
    payload = params.model_dump(mode="json")
    _emit(
        args,
        payload,
        [
            f"p={params.p} q={params.q} g={params.g} h={params.h} e={params.e}",
            f"parity={'even' if params.parity_even else 'odd'} "
            f"case={params.case_tag.value}",
        ],
    )
    return ExitCode.OK


def cmd_sequence(args: argparse.Namespace) -> int:
    params = make_params(args.p, args.q)
    seq = generate(params)
    if args.reverse:
        seq = reverse(seq)
    fmt = SequenceFormat.STRUCTURED if args.format in ("json", "structured") else SequenceFormat.DIGITS
    data = serialize(seq, fmt)
    if args.out:
        Path(args.out).write_bytes(data)
        logger.info("Последовательность записана в %s", args.out)
    else:
        sys.stdout.write(data.decode("ascii"))
    return ExitCode.OK


def cmd_complexity(args: argparse.Namespace) -> int:
    if args.input:
        seq = parse(Path(args.input).read_bytes())
        phi = madic_complexity(seq, args.m)
        _emit(
            args,
            {"m": args.m, "period": seq.period, "phi": phi},
            [f"T={seq.period} m={args.m} Φ={phi}"],
        )
        return ExitCode.OK

    if args.p is None or args.q is None:
        raise InvalidParametersError("Нужны --p и --q или --in FILE")

    if args.m != 4:
        params = make_params(args.p, args.q)
        phi = madic_complexity(generate(params), args.m)
        _emit(
            args,
            {"m": args.m, "p": args.p, "q": args.q, "phi": phi},
            [f"p={args.p} q={args.q} m={args.m} Φ={phi}"],
        )
        return ExitCode.OK

    report = complexity_report(args.p, args.q, exact=not args.predict)
    lines = [
        f"p={report.p} q={report.q} case={report.case_tag.value}",
        f"r1={report.r1} r2={report.r2}",
        f"d={report.candidate_d} prime={report.candidate_prime}",
        f"predicted={list(report.phi_predicted)}",
    ]
    if report.phi_exact is not None:
        lines += [
            f"gcd: p-part={report.gcd_p} q-part={report.gcd_q} "
            f"cofactor={report.gcd_cofactor} total={report.gcd_total}",
            f"Φ={report.phi_exact} (pq-{report.p * report.q - report.phi_exact})",
            f"consistent={report.consistent}",
        ]
        if report.lower_bound_ok is not None:
            lines.append(f"lower_bound={report.lower_bound_ok}")
    _emit(args, report.model_dump(mode="json"), lines)
    if report.consistent is False or report.lower_bound_ok is False:
        return ExitCode.FAILURE
    return ExitCode.OK


def cmd_scan(args: argparse.Namespace) -> int:
    rows = run_scan(
        args.pq_max,
        jobs=args.jobs,
        exact=args.exact,
        force_full=args.force_full or None,
        store_url=args.store,
        resume=args.resume,
    )
    text = render_rows(rows, "json" if args.format == "json" else "csv")
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        logger.info("Строки скана записаны в %s", args.out)
    else:
        sys.stdout.write(text)
    if any((row.d_divides and row.candidate_prime) or not row.consistent for row in rows):
        return ExitCode.FAILURE
    return ExitCode.OK


def cmd_stored(args: argparse.Namespace) -> int:
    if (args.p is None) != (args.q is None):
        raise InvalidParametersError("--p и --q задаются вместе")
    key = (args.p, args.q) if args.p is not None else None
    conditions = {}
    if args.case_tag:
        conditions["case_tag"] = CaseTag(args.case_tag)
    if args.counterexamples:
        conditions.update(candidate_prime=True, d_divides=True)
    if args.inconsistent:
        conditions["consistent"] = False
    filters = ScanFilter(**conditions) if conditions else None

    summary, rows = query_store(args.store, key=key, filters=filters, limit=args.limit)
    payload = {
        "summary": summary,
        "rows": [row.model_dump(mode="json") for row in rows],
    }
    lines = [" ".join(f"{name}={value}" for name, value in summary.items())]
    lines += render_rows(rows, "csv").splitlines()
    _emit(args, payload, lines)
    return ExitCode.FAILURE if summary["counterexamples"] else ExitCode.OK


def cmd_verify(args: argparse.Namespace) -> int:
    params = make_params(args.p, args.q)
    reports = verify_all(
        params, lambda_max=args.lambda_max, include_cofactor=args.with_cofactor
    )
    non_vacuous = sum(
        1 for report in reports if report.lemma_id in MODULUS_LEMMAS and not report.vacuous
    )
    lines = []
    for report in reports:
        status = "PASS" if report.passed else "FAIL"
        if report.vacuous:
            status += " (vacuous)"
        lines.append(
            f"{report.lemma_id.value:<4} {status} checks={len(report.checks)} "
            f"moduli={len(report.moduli)}"
        )
        lines += [f"    {check.name}: {check.detail}" for check in report.failures]
    lines.append(f"non-vacuous modulus checks: {non_vacuous}/{len(MODULUS_LEMMAS)}")
    _emit(
        args,
        {
            "p": params.p,
            "q": params.q,
            "reports": [report.model_dump(mode="json") for report in reports],
            "non_vacuous": non_vacuous,
        },
        lines,
    )
    return ExitCode.OK if all(report.passed for report in reports) else ExitCode.FAILURE


def cmd_cyclotomic(args: argparse.Namespace) -> int:
    params = make_params(args.p, args.q)
    table = build_class_table(params)
    payload = {"p": params.p, "q": params.q, "mode": args.mode}
    lines = [f"p={params.p} q={params.q} parity={'even' if params.parity_even else 'odd'}"]

    if args.mode == "brute":
        brute = cyclotomic_numbers_bruteforce(table)
        payload["brute"] = brute
        lines += ["brute:", *_matrix_lines(brute)]
        _emit(args, payload, lines)
        return ExitCode.OK

    # Для формул нужна калибровка (a, b), поэтому перебор выполняется всегда
    calibrated = calibrate(params, table)
    formula = cyclotomic_numbers_formula(params, calibrated.a, calibrated.b)
    payload.update(
        {"a": calibrated.a, "b": calibrated.b, "M": calibrated.M, "formula": formula}
    )
    lines.append(f"a={calibrated.a} b={calibrated.b} M={calibrated.M}")
    lines += ["formula:", *_matrix_lines(formula)]
    matched = formula == calibrated.counts
    if args.mode == "both":
        payload.update({"brute": calibrated.counts, "match": matched})
        lines += ["brute:", *_matrix_lines(calibrated.counts), f"match={matched}"]
    _emit(args, payload, lines)
    return ExitCode.OK if matched else ExitCode.FAILURE


def _pair_arguments(parser: argparse.ArgumentParser, required: bool = True) -> None:
    parser.add_argument("--p", type=int, required=required, help="первое простое")
    parser.add_argument("--q", type=int, required=required, help="второе простое")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=["text", "json"], default="text")

    parser = _Parser(
        prog="twoprimeadic",
        description="4-адическая сложность четверичных последовательностей двух простых",
    )
    parser.add_argument("--log-level", default=None, help="уровень логирования")
    commands = parser.add_subparsers(dest="command", required=True)

    params = commands.add_parser("params", parents=[common], help="параметры g, h, e")
    _pair_arguments(params)
    params.set_defaults(handler=cmd_params)

    sequence = commands.add_parser("sequence", help="период последовательности")
    _pair_arguments(sequence)
    sequence.add_argument("--reverse", action="store_true")
    sequence.add_argument(
        "--format",
        choices=["digits", "structured", "text", "json"],
        default="digits",
    )
    sequence.add_argument("--out", default=None)
    sequence.set_defaults(handler=cmd_sequence)

    complexity = commands.add_parser("complexity", parents=[common], help="m-адическая сложность")
    _pair_arguments(complexity, required=False)
    complexity.add_argument("--in", dest="input", default=None, help="файл последовательности")
    complexity.add_argument("--m", type=int, default=4)
    mode = complexity.add_mutually_exclusive_group()
    mode.add_argument("--exact", dest="predict", action="store_false")
    mode.add_argument("--predict", dest="predict", action="store_true")
    complexity.set_defaults(handler=cmd_complexity, predict=False)

    scan = commands.add_parser("scan", parents=[common], help="скан гипотезы")
    scan.add_argument("--pq-max", type=int, required=True)
    scan.add_argument("--jobs", type=int, default=None)
    scan.add_argument("--out", default=None)
    scan.add_argument("--exact", action="store_true")
    scan.add_argument("--resume", action="store_true")
    scan.add_argument("--store", default=None, help="URL хранилища SQLAlchemy")
    scan.add_argument("--force-full", action="store_true")
    scan.set_defaults(handler=cmd_scan)

    stored = commands.add_parser("stored", parents=[common], help="строки хранилища скана")
    _pair_arguments(stored, required=False)
    stored.add_argument("--store", default=None, help="URL хранилища SQLAlchemy")
    stored.add_argument("--case-tag", choices=[tag.value for tag in CaseTag], default=None)
    stored.add_argument("--counterexamples", action="store_true")
    stored.add_argument("--inconsistent", action="store_true")
    stored.add_argument("--limit", type=int, default=None)
    stored.set_defaults(handler=cmd_stored)

    verify = commands.add_parser("verify", parents=[common], help="проверки лемм")
    _pair_arguments(verify)
    verify.add_argument("--lambda-max", type=int, default=None)
    verify.add_argument("--with-cofactor", action="store_true")
    verify.set_defaults(handler=cmd_verify)

    cyclotomic = commands.add_parser("cyclotomic", parents=[common], help="циклотомические числа")
    _pair_arguments(cyclotomic)
    cyclotomic.add_argument("--mode", choices=["brute", "formula", "both"], default="both")
    cyclotomic.set_defaults(handler=cmd_cyclotomic)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Точка входа CLI.

    Returns:
        int: 0 успех, 1 недопустимые параметры, 2 провал проверки или
            контрпример, 3 ошибка ввода-вывода
    """
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=(args.log_level or settings.LOG_LEVEL).upper())
    try:
        return int(args.handler(args))
    except (InvalidParametersError, SequenceFormatError) as exc:
        logger.error("%s", exc)
        sys.stderr.write(f"error: {exc}\n")
        return ExitCode.INVALID
    except (CalibrationError, TheoryMismatchError) as exc:
        logger.error("%s", exc)
        sys.stderr.write(f"failure: {exc}\n")
        return ExitCode.FAILURE
    except (OSError, SQLAlchemyError, EmptyValueError) as exc:
        logger.error("%s", exc)
        sys.stderr.write(f"io error: {exc}\n")
        return ExitCode.IO
