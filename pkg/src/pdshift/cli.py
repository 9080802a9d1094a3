"""Command-line front end: ``pdshift seq|complexity|measure|rqa|rplot``.

Exit codes: 0 success, 1 usage or I/O error, 2 a closed form disagreed with
its oracle.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from . import language, measure, recurrence, sequence
from .errors import ConsistencyError

EIGEN_CAP = 256
RPLOT_RASTER_CAP = 4096
DEFAULT_SWEEP = "dyadic:1:10"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def _nonnegative(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be a nonnegative integer")
    return value


def parse_mode(text: str, allowed: Sequence[str]) -> tuple[str, int | None]:
    """``"formula"`` -> ``("formula", None)``; ``"empirical:4096"`` -> ``("empirical", 4096)``."""
    name, _, arg = text.partition(":")
    if name not in allowed:
        raise UsageError(f"mode must be one of {', '.join(allowed)}, got {text!r}")
    if name == "empirical":
        if not arg:
            raise UsageError("empirical mode needs a sample size, e.g. empirical:65536")
        n = int(arg)
        if n < 1:
            raise UsageError("empirical sample size must be positive")
        return name, n
    if arg:
        raise UsageError(f"mode {name!r} takes no argument")
    return name, None


def parse_sweep(text: str) -> list[Fraction]:
    """Thresholds for ``--sweep``.

    ``dyadic:M`` gives ``1, 1/2, ..., 2^-M``; ``dyadic:A:B`` gives ``2^-A .. 2^-B``;
    ``min:max:samples`` gives log-uniform samples from ``max`` down to ``min``.
    A dyadic sweep over ``[2^-M, 1]`` emits exactly one threshold per step
    of the (step-function) quantities.
    """
    parts = text.split(":")
    if parts[0] == "dyadic":
        if len(parts) == 2:
            lo, hi = 0, int(parts[1])
        elif len(parts) == 3:
            lo, hi = int(parts[1]), int(parts[2])
        else:
            raise UsageError(f"bad dyadic sweep {text!r}")
        if lo < 0 or hi < lo:
            raise UsageError(f"bad dyadic sweep range {text!r}")
        return [recurrence.dyadic(m) for m in range(lo, hi + 1)]
    if len(parts) != 3:
        raise UsageError(f"sweep must be min:max:samples or dyadic:M, got {text!r}")
    eps_min = recurrence.as_epsilon(parts[0])
    eps_max = recurrence.as_epsilon(parts[1])
    samples = int(parts[2])
    if samples < 1 or eps_min > eps_max:
        raise UsageError("sweep needs 0 < min <= max and samples >= 1")
    if samples == 1:
        return [eps_max]
    out = [eps_max]
    ratio = math.log(eps_min / eps_max)
    for t in range(1, samples - 1):
        out.append(Fraction(eps_max * Fraction(math.exp(ratio * t / (samples - 1)))))
    out.append(eps_min)
    return out


class _Output:
    def __init__(self, path: str | None, binary: bool = False):
        self.path = path
        self.binary = binary

    def write(self, data):
        if self.path is None or self.path == "-":
            if self.binary:
                sys.stdout.buffer.write(data)
                sys.stdout.buffer.flush()
            else:
                sys.stdout.write(data)
            return
        mode = "wb" if self.binary else "w"
        with open(self.path, mode, **({} if self.binary else {"newline": ""})) as fh:
            fh.write(data)


def _table(header: Sequence[str], rows: Iterable[Sequence], fmt: str) -> str:
    rows = list(rows)
    if fmt == "json":
        return json.dumps([dict(zip(header, row)) for row in rows], indent=1) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _require_format(fmt: str, allowed: Sequence[str]):
    if fmt not in allowed:
        raise UsageError(f"format {fmt!r} is not valid here (choose from {', '.join(allowed)})")


def cmd_seq(args) -> int:
    _require_format(args.format, ("csv", "json"))
    cap = sequence.max_prefix()
    if args.n > cap:
        raise UsageError(f"n={args.n} exceeds the prefix cap {cap} (set PDSHIFT_MAX_PREFIX)")
    word = str(sequence.prefix(args.n, args.method))
    if args.format == "json":
        text = json.dumps({"n": args.n, "method": args.method, "word": word}) + "\n"
    else:
        text = word + "\n"
    _Output(args.out).write(text)
    return 0


def cmd_complexity(args) -> int:
    _require_format(args.format, ("csv", "json"))
    header = ["m", "k", "q", "p_formula"] + (["p_oracle"] if args.oracle else [])
    rows, bad = [], []
    for m in range(1, args.m_max + 1):
        _, k, q = language.decompose(m)
        row = [m, k, q, language.complexity(m)]
        if args.oracle:
            seen = language.scan_count(m, 6 << k)
            row.append(seen)
            if seen != row[3]:
                bad.append(m)
        rows.append(row)
    _Output(args.out).write(_table(header, rows, args.format))
    if bad:
        print(f"complexity mismatch at m = {', '.join(map(str, bad))}", file=sys.stderr)
        return 2
    return 0


def cmd_measure(args) -> int:
    _require_format(args.format, ("csv", "json"))
    mode, n = parse_mode(args.mode, ("formula", "eigen", "empirical"))
    if mode == "formula":
        table = measure.measure_table(args.m)
    elif mode == "eigen":
        if args.m > EIGEN_CAP:
            raise UsageError(f"eigen mode is limited to m <= {EIGEN_CAP}")
        table = measure.perron_measure_oracle(args.m)
    else:
        language_table = language.enumerate_words(args.m)
        freqs = measure.empirical_frequencies(args.m, n)
        header = ["word", "first_index", "numerator", "denominator", "float"]
        rows = []
        for word, i in language_table:
            value = freqs.get(word, Fraction(0))
            rows.append([str(word), i, value.numerator, value.denominator, float(value)])
        _Output(args.out).write(_table(header, rows, args.format))
        return 0
    header = ["word", "first_index", "numerator", "denominator"]
    rows = [[str(w), i, v.numerator, v.denominator] for w, i, v in table.rows]
    _Output(args.out).write(_table(header, rows, args.format))
    return 0


def rqa_value(quantity: str, ell: int, dim: int, eps: Fraction, mode: str, n: int | None) -> Fraction:
    """One RQA value; ``cint`` is the recurrence rate with ``ell = 1``."""
    if quantity == "cint":
        ell = 1
    if quantity == "det" and ell < 2:
        raise UsageError("det needs --ell >= 2")
    if mode == "formula":
        if quantity == "det":
            return recurrence.embedded_det(dim, ell, eps)
        return recurrence.embedded_rr(dim, ell, eps)
    if dim == 1:
        if quantity == "det":
            return recurrence.determinism_empirical(ell, n, eps)
        return recurrence.recurrence_rate_empirical(ell, n, eps)
    if quantity == "det":
        return recurrence.embedded_det_empirical(dim, ell, n, eps)
    return recurrence.embedded_rr_empirical(dim, ell, n, eps)


def cmd_rqa(args) -> int:
    _require_format(args.format, ("csv", "json"))
    mode, n = parse_mode(args.mode, ("formula", "empirical"))
    if args.eps is not None and args.sweep is not None:
        raise UsageError("give either --eps or --sweep, not both")
    if args.eps is not None:
        thresholds = [recurrence.as_epsilon(args.eps)]
    else:
        thresholds = parse_sweep(args.sweep or DEFAULT_SWEEP)
    header = ["eps_numerator", "eps_denominator", "m_eps", "value_numerator", "value_denominator", "float"]
    rows = []
    for eps in thresholds:
        value = rqa_value(args.quantity, args.ell, args.dim, eps, mode, n)
        rows.append(
            [eps.numerator, eps.denominator, recurrence.m_epsilon(eps),
             value.numerator, value.denominator, float(value)]
        )
    _Output(args.out).write(_table(header, rows, args.format))
    return 0


def pgm_bytes(matrix) -> bytes:
    """Binary PGM, recurrences black (0) and non-recurrences white (255)."""
    n_rows, n_cols = matrix.shape
    pixels = np.where(matrix, 0, 255).astype(np.uint8)
    return f"P5\n{n_cols} {n_rows}\n255\n".encode("ascii") + pixels.tobytes()


def cmd_rplot(args) -> int:
    _require_format(args.format, ("csv", "pgm"))
    if args.format == "pgm" and args.n > RPLOT_RASTER_CAP:
        raise UsageError(f"raster output is limited to n <= {RPLOT_RASTER_CAP}")
    matrix = recurrence.recurrence_matrix(args.n, recurrence.as_epsilon(args.eps))
    if args.format == "pgm":
        _Output(args.out, binary=True).write(pgm_bytes(matrix))
    else:
        text = "".join(",".join("1" if x else "0" for x in row) + "\n" for row in matrix)
        _Output(args.out).write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pdshift", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, default_format="csv"):
        p.add_argument("--format", default=default_format, choices=["csv", "json", "pgm"])
        p.add_argument("--out", default=None, help="output path (default: stdout)")

    p = sub.add_parser("seq", help="print a prefix of the sequence")
    p.add_argument("--n", type=_nonnegative, required=True)
    p.add_argument("--method", default="valuation", choices=[m.value for m in sequence.GeneratorMethod])
    common(p)
    p.set_defaults(func=cmd_seq)

    p = sub.add_parser("complexity", help="complexity function table")
    p.add_argument("--m-max", type=_positive, required=True)
    p.add_argument("--oracle", action="store_true", help="also count windows directly")
    common(p)
    p.set_defaults(func=cmd_complexity)

    p = sub.add_parser("measure", help="cylinder measures of all m-words")
    p.add_argument("--m", type=_positive, required=True)
    p.add_argument("--mode", default="formula", help="formula, eigen or empirical:<n>")
    common(p)
    p.set_defaults(func=cmd_measure)

    p = sub.add_parser("rqa", help="correlation integral, recurrence rate or determinism")
    p.add_argument("quantity", choices=["cint", "rr", "det"])
    p.add_argument("--ell", type=_positive, default=1)
    p.add_argument("--dim", type=_positive, default=1)
    p.add_argument("--eps", default=None, help="decimal, a/b or 2^-m")
    p.add_argument("--sweep", default=None, help="min:max:samples, dyadic:M or dyadic:A:B")
    p.add_argument("--mode", default="formula", help="formula or empirical:<n>")
    common(p)
    p.set_defaults(func=cmd_rqa)

    p = sub.add_parser("rplot", help="recurrence plot matrix")
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--eps", required=True)
    common(p, default_format="pgm")
    p.set_defaults(func=cmd_rplot)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConsistencyError as exc:
        print(f"pdshift: consistency check failed: {exc}", file=sys.stderr)
        return 2
    except (UsageError, ValueError, TypeError, OSError) as exc:
        print(f"pdshift: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
