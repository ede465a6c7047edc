"""Command-line front end.

Exit codes: 0 success, 1 experiment check failed, 2 I/O error, 64 usage
error, 65 malformed data.
"""
from __future__ import annotations

import argparse
import csv
import sys
import warnings
from pathlib import Path

import numpy as np

from . import codec
from .experiment import ExperimentConfig, REFERENCE_PROBS, run_experiment, tuple_label, write_experiment
from .quasigroup import InvalidTableError, SymbolRangeError, random_quasigroup
from .stats import SampleSizeWarning, chi_square_uniformity, count_ngrams, detect_classes
from .transform import PEKey, RoundParams, pe_decrypt, pe_encrypt

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_IO = 2
EXIT_USAGE = 64
EXIT_DATA = 65
MAX_CLI_ORDER = 256


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _bool(text: str) -> bool:
    low = text.lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise argparse.ArgumentTypeError(f"expected a boolean, got {text!r}")


def _u64(text: str) -> int:
    v = int(text)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def _check_order(order):
    if not 2 <= order <= MAX_CLI_ORDER:
        raise UsageError(f"order must be in 2..{MAX_CLI_ORDER}, got {order}")


def _read_key(path) -> PEKey:
    text = Path(path).read_text(encoding="utf-8")
    try:
        return codec.parse_key(text)
    except ValueError as exc:
        raise DataError(f"{path}: {exc}") from None


def _read_symbols(path, fmt, order):
    try:
        if fmt == "bytes":
            return codec.bytes_to_symbols(Path(path).read_bytes(), order)
        return codec.parse_symbol_text(Path(path).read_text(encoding="utf-8"), order)
    except (codec.CodecError, UnicodeDecodeError) as exc:
        raise DataError(f"{path}: {exc}") from None


def _write_symbols(path, fmt, symbols, order):
    if fmt == "bytes":
        Path(path).write_bytes(codec.symbols_to_bytes(symbols, order))
    else:
        Path(path).write_text(codec.format_symbol_text(symbols), encoding="utf-8", newline="\n")


def cmd_genkey(args):
    _check_order(args.order)
    if args.rounds < 1:
        raise UsageError("rounds must be at least 1")
    rng = np.random.default_rng(args.seed)
    q = random_quasigroup(args.order, rng)
    a = args.order
    rounds = tuple(
        RoundParams(int(rng.integers(1, a + 1)), int(rng.integers(2, a * a + a + 1)))
        for _ in range(args.rounds)
    )
    text = codec.serialize_key(PEKey(q, rounds))
    Path(args.out).write_text(text, encoding="utf-8", newline="\n")
    return EXIT_OK


def _crypt(args, fn):
    key = _read_key(args.key)
    if args.format == "bytes" and key.order not in codec.BYTE_ORDERS:
        raise DataError(f"bytes format needs order in {sorted(codec.BYTE_ORDERS)}, key has {key.order}")
    symbols = _read_symbols(args.input, args.format, key.order)
    if symbols.size == 0:
        raise DataError(f"{args.input}: input is empty")
    try:
        out = fn(key, symbols)
    except (SymbolRangeError, ValueError) as exc:
        raise DataError(str(exc)) from None
    _write_symbols(args.out, args.format, out, key.order)
    return EXIT_OK


def cmd_encrypt(args):
    return _crypt(args, pe_encrypt)


def cmd_decrypt(args):
    return _crypt(args, pe_decrypt)


def cmd_analyze(args):
    _check_order(args.order)
    if not 1 <= args.m_max <= 8:
        raise UsageError("--m-max must be in 1..8")
    symbols = _read_symbols(args.input, args.format, args.order)
    if symbols.size < args.m_max:
        raise DataError(f"{args.input}: {symbols.size} symbols is too short for m={args.m_max}")
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    summary = []
    for m in range(1, args.m_max + 1):
        d = count_ngrams(symbols, m, args.order, overlapping=args.overlapping)
        with (out / f"ngram_m{m}.csv").open("w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["rank", "tuple", "count", "prob"])
            for rank, (t, c, p) in enumerate(zip(d.tuples(), d.counts, d.probs), start=1):
                w.writerow([rank, tuple_label(t), int(c), repr(float(p))])
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", SampleSizeWarning)
            rep = chi_square_uniformity(d)
        row = [m, d.total, repr(rep.statistic), rep.df, repr(rep.p_value), repr(rep.l1), repr(rep.max_dev)]
        if m == 2:
            cls = detect_classes(d, args.order)
            row += [repr(cls.score), str(cls.detected).lower()]
        else:
            row += ["", ""]
        row.append("" if d.expected_count >= 5 else f"sample too small for m={m} analysis")
        summary.append(row)
    with (out / "summary.csv").open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["m", "windows", "statistic", "df", "p_value", "l1", "max_dev",
                    "class_score", "classes_detected", "note"])
        w.writerows(summary)
    return EXIT_OK


def cmd_experiment(args):
    quasigroup = None
    rounds, leader, d1 = args.rounds, args.leader, args.d1
    order = args.order
    if args.key:
        key = _read_key(args.key)
        quasigroup = key.quasigroup
        order = key.order
        first = key.rounds[0]
        leader, d1 = first.leader, first.d1
    _check_order(order)
    if args.probs:
        try:
            probs = tuple(float(v) for v in args.probs.split(","))
        except ValueError:
            raise UsageError(f"--probs must be comma-separated numbers, got {args.probs!r}") from None
    elif order == 4:
        probs = REFERENCE_PROBS
    else:
        raise UsageError("--probs is required for orders other than 4")
    if quasigroup is None and order != 4:
        quasigroup = random_quasigroup(order, args.seed)
    config = ExperimentConfig(
        order=order, probs=probs, length=args.length, rounds=rounds, leader=leader, d1=d1,
        seed=args.seed, quasigroup=quasigroup, m_max=args.m_max,
    )
    try:
        result = run_experiment(config)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    write_experiment(result, args.out)
    for c in result.checks:
        extra = f"  ({c.note})" if c.note else ""
        print(f"{c.status.upper():7} {c.name}: {c.value!r} target {c.target}{extra}")
    print(f"{'all checks passed' if result.passed else 'some checks FAILED'} "
          f"in {result.elapsed:.2f}s; CSVs in {args.out}")
    return EXIT_OK if result.passed else EXIT_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qgcipher", description="Parastrophic quasigroup cipher toolkit")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("genkey", help="write a random key file")
    p.add_argument("--order", type=int, default=4)
    p.add_argument("--rounds", type=int, default=3)
    p.add_argument("--seed", type=_u64, default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_genkey)

    for name, func in (("encrypt", cmd_encrypt), ("decrypt", cmd_decrypt)):
        p = sub.add_parser(name, help=f"{name} a file with a key file")
        p.add_argument("--key", required=True)
        p.add_argument("--in", dest="input", required=True)
        p.add_argument("--out", required=True)
        p.add_argument("--format", choices=("bytes", "text"), default="text")
        p.set_defaults(func=func)

    p = sub.add_parser("analyze", help="m-tuple frequencies and uniformity tests")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--format", choices=("bytes", "text"), default="text")
    p.add_argument("--order", type=int, default=4)
    p.add_argument("--m-max", type=int, default=4)
    p.add_argument("--overlapping", type=_bool, default=False)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("experiment", help="reproduce the reference PE experiment")
    p.add_argument("--order", type=int, default=4)
    p.add_argument("--probs", default=None, help="comma-separated letter probabilities")
    p.add_argument("--length", type=int, default=1_000_000)
    p.add_argument("--rounds", type=int, default=3)
    p.add_argument("--leader", type=int, default=4)
    p.add_argument("--d1", type=int, default=3)
    p.add_argument("--key", default=None, help="take the quasigroup and first round from a key file")
    p.add_argument("--m-max", type=int, default=4)
    p.add_argument("--seed", type=_u64, default=0)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_experiment)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"qgcipher: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, InvalidTableError) as exc:
        print(f"qgcipher: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"qgcipher: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
