"""Command-line front end.

Subcommands: tables, capacity, bound, encode, decode, verify, enumerate.
Diagnostics go to stderr as ``composite-dna: error[CODE]: message`` and the
exit status identifies the error class (see ``EXIT_CODES``).
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from composite_dna.alphabet import (
    SIGMA1_AC,
    SIGMA2_ATGC,
    AlphabetError,
    CompositeAlphabet,
    Seq,
    dna_representation,
    dna_value,
    parse_alphabet,
)
from composite_dna.capacity import (
    CapacityError,
    Constraint,
    ForbiddenRule,
    brute_count,
    count_exact,
    one_redundancy_bound,
    rll_capacity,
)
from composite_dna.combined_codec import CombinedParams, ConstructionError, combined_decode, combined_encode
from composite_dna.gc_codec import (
    AtgcParams,
    CompositeGcParams,
    GridMode,
    check_atgc,
    gc_decode_atgc,
    gc_decode_composite,
    gc_encode_atgc,
    gc_encode_composite,
)
from composite_dna.rll_codec import CodecError, RllParams, rll_decode_long, rll_encode_long
from composite_dna import report
from composite_dna.verifier import BalanceMode, balance_window, first_run_violation, gc_bounds

PROG = "composite-dna"

EXIT_CODES = {
    "E_FAIL": 1,  # verify found a violating line
    "E_FLAG": 2,
    "E_IO": 3,
    "E_INPUT": 4,  # malformed input symbols or header
    "E_CODEC": 5,
    "E_NUMERIC": 6,  # capacity / counting caps, non-convergence
}


class CliError(Exception):
    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # route argparse errors through the same channel
        raise CliError("E_FLAG", message)


def _rational(text: str) -> Fraction:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None
    if not 0 <= value <= Fraction(1, 2):
        raise argparse.ArgumentTypeError("eps must lie in [0, 1/2]")
    return value


def _alphabet(text: str) -> CompositeAlphabet:
    try:
        return parse_alphabet(text)
    except AlphabetError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


# --- codecs over text lines ------------------------------------------------


@dataclass
class LineCodec:
    """Maps one input line to one output line and back."""

    alphabet: CompositeAlphabet
    encode_word: Callable[[Seq], Seq]
    decode_word: Callable[[Seq], Seq]
    payload_length: int | None  # None: the word codec takes any length

    def encode_line(self, x: Seq) -> str:
        a = self.alphabet
        if self.payload_length is None:
            return a.text(self.encode_word(x))
        return " ".join(a.text(self.encode_word(chunk)) for chunk in self._chunks(x))

    def decode_line(self, line: str) -> Seq:
        a = self.alphabet
        if self.payload_length is None:
            return self.decode_word(a.word(line))
        words = [self.decode_word(a.word(tok)) for tok in line.split()]
        if len(words) == 1:
            return words[0]
        k = self.payload_length
        length = dna_value(words[0])
        payload = tuple(s for w in words[1:] for s in w)
        slack = len(payload) - length
        if not (0 <= slack < k or (length == 0 and slack == k)):
            raise CodecError("length header inconsistent with payload")
        return payload[:length]

    def _chunks(self, x: Seq) -> list[Seq]:
        # same framing as the long run-length stream: length word, then padded blocks
        k = self.payload_length
        if len(x) == k:
            return [x]
        if len(x) >= 4**k:
            raise CodecError(f"line of length {len(x)} does not fit a {k}-digit length header")
        chunks = [dna_representation(len(x), k)]
        for i in range(0, len(x), k):
            chunk = x[i : i + k]
            chunks.append(chunk + (0,) * (k - len(chunk)))
        if not x:
            chunks.append((0,) * k)
        return chunks


def _is_atgc(a: CompositeAlphabet) -> bool:
    try:
        check_atgc(a)
    except ValueError:
        return False
    return True


def build_codec(args) -> LineCodec:
    a = args.alphabet
    if args.codec == "rll":
        if args.l is None or args.n is None:
            raise CliError("E_FLAG", "the rll codec needs --l and --n")
        p = RllParams(a, args.l, args.n)
        return LineCodec(a, lambda x: rll_encode_long(x, p), lambda c: rll_decode_long(c, p), None)
    if args.codec == "gc":
        if args.n is None or args.eps is None:
            raise CliError("E_FLAG", "the gc codec needs --n and --eps")
        grid = GridMode(args.grid)
        if _is_atgc(a):
            p = AtgcParams(args.n, args.eps, grid, a)
            return LineCodec(a, lambda x: gc_encode_atgc(x, p), lambda c: gc_decode_atgc(c, p), p.payload_length)
        p = CompositeGcParams(a, args.n, args.eps, grid)
        return LineCodec(
            a, lambda x: gc_encode_composite(x, p), lambda c: gc_decode_composite(c, p), p.payload_length
        )
    if args.l is None or args.n is None or args.eps is None:
        raise CliError("E_FLAG", "the combined codec needs --n, --l and --eps")
    p = CombinedParams(args.n, args.l, args.eps, a)
    return LineCodec(a, lambda x: combined_encode(x, p), lambda c: combined_decode(c, p), p.payload_length)


def params_header(args) -> str:
    l = "" if args.l is None else args.l
    n = "" if args.n is None else args.n
    eps = "" if args.eps is None else args.eps
    return f"n={n} l={l} eps={eps} alphabet={args.alphabet.spec()}"


def apply_header(line: str, args) -> None:
    """Fill flags from a params header line; explicit flags must agree with it."""
    fields = {}
    for item in line.split():
        key, sep, value = item.partition("=")
        if not sep:
            raise CliError("E_INPUT", f"malformed header item {item!r}")
        fields[key] = value
    if set(fields) != {"n", "l", "eps", "alphabet"}:
        raise CliError("E_INPUT", f"header must have n, l, eps and alphabet: {line!r}")
    try:
        parsed = {
            "n": int(fields["n"]) if fields["n"] else None,
            "l": int(fields["l"]) if fields["l"] else None,
            "eps": Fraction(fields["eps"]) if fields["eps"] else None,
            "alphabet": parse_alphabet(fields["alphabet"]),
        }
    except (ValueError, AlphabetError) as exc:
        raise CliError("E_INPUT", f"bad header: {exc}") from None
    for key, value in parsed.items():
        given = getattr(args, key)
        if key == "alphabet" and not args.alphabet_given:
            given = None
        if given is None:
            setattr(args, key, value)
        elif value is not None and given != value:
            raise CliError("E_FLAG", f"--{key} disagrees with the input header")


# --- I/O ---------------------------------------------------------------------


def _read_lines(path: str | None) -> list[str]:
    try:
        if path is None or path == "-":
            return sys.stdin.read().splitlines()
        with open(path, encoding="utf-8") as fh:
            return fh.read().splitlines()
    except OSError as exc:
        raise CliError("E_IO", str(exc)) from None


class _Output:
    def __init__(self, path: str | None):
        self.path = path
        self.parts: list[str] = []

    def write(self, text: str) -> None:
        self.parts.append(text)

    def line(self, text: str = "") -> None:
        self.parts.append(text + "\n")

    def close(self) -> None:
        data = "".join(self.parts)
        if self.path is None or self.path == "-":
            sys.stdout.write(data)
            return
        try:
            with open(self.path, "w", encoding="utf-8") as fh:
                fh.write(data)
        except OSError as exc:
            raise CliError("E_IO", str(exc)) from None


def _parse_word(a: CompositeAlphabet, text: str, lineno: int) -> Seq:
    try:
        return a.word(text)
    except AlphabetError as exc:
        raise CliError("E_INPUT", f"line {lineno}: {exc}") from None


# --- commands ----------------------------------------------------------------


def cmd_tables(args, out: _Output) -> int:
    rule = ForbiddenRule(args.rule)
    cap = report.capacity_rows(tol=args.tol, rule=rule)
    bounds = report.bound_rows()
    if args.format == "csv":
        out.write(report.to_csv(report.CAPACITY_FIELDS, report.capacity_records(cap, args.precision)))
        out.line()
        out.write(report.to_csv(report.BOUND_FIELDS, report.bound_records(bounds)))
    else:
        for table, title in (("sigma1", "capacity, one composite letter"), ("sigma2", "capacity, two composite letters")):
            out.line(f"# {title} (bits/symbol)")
            out.write(report.to_text(*report.capacity_grid(cap, table)))
            out.line()
        out.line("# computed vs reference capacities")
        out.write(report.to_text(report.CAPACITY_FIELDS, report.capacity_records(cap, args.precision)))
        out.line()
        out.line("# longest codeword with one redundant symbol (floor rule)")
        out.write(report.to_text(report.BOUND_FIELDS, report.bound_records(bounds)))
        off = [b for b in bounds if b.delta]
        if off:
            out.line(
                "# note: reference bounds for "
                + ", ".join(sorted({b.alphabet for b in off}))
                + " are ceiling-rounded; the floor value is the largest n satisfying the inequality"
            )
    if args.figures:
        for path in report.write_figures(cap, bounds, args.figures):
            print(f"wrote {path}", file=sys.stderr)
    return 0


def cmd_capacity(args, out: _Output) -> int:
    res = rll_capacity(args.l, args.alphabet, tol=args.tol, rule=ForbiddenRule(args.rule))
    if args.format == "csv":
        out.write(report.to_csv(
            ("alphabet", "l", "lambda", "capacity_bits", "iterations", "residual"),
            [[args.alphabet.spec(), str(args.l), f"{res.lam:.{args.precision + 3}f}",
              f"{res.capacity_bits:.{args.precision}f}", str(res.iterations), f"{res.residual:.3g}"]],
        ))
    else:
        out.line(f"{res.capacity_bits:.{args.precision}f}")
    return 0


def cmd_bound(args, out: _Output) -> int:
    out.line(str(one_redundancy_bound(args.l, args.alphabet)))
    return 0


def cmd_encode(args, out: _Output) -> int:
    codec = build_codec(args)
    lines = _read_lines(args.input)
    out.line(params_header(args))
    for i, line in enumerate(lines, 1):
        out.line(codec.encode_line(_parse_word(args.alphabet, line, i)))
    return 0


def cmd_decode(args, out: _Output) -> int:
    lines = _read_lines(args.input)
    if lines and "=" in lines[0]:
        apply_header(lines[0], args)
        lines = lines[1:]
    codec = build_codec(args)
    for i, line in enumerate(lines, 1):
        try:
            out.line(args.alphabet.text(codec.decode_line(line)))
        except AlphabetError as exc:
            raise CliError("E_INPUT", f"line {i}: {exc}") from None
        except CodecError as exc:
            raise CliError("E_CODEC", f"line {i}: {exc}") from None
    return 0


def verify_line(a: CompositeAlphabet, x: Seq, l, eps, mode: BalanceMode) -> list[str]:
    """Reasons a word fails; empty when it passes."""
    problems = []
    if l is not None:
        hit = first_run_violation(a, x, l)
        if hit is not None:
            bases = "".join(b for i, b in enumerate("ATCG") if hit.bases >> i & 1)
            problems.append(f"rll: window {a.text(hit.window)} at {hit.start} realizes a run of {bases}")
    if eps is not None:
        b = gc_bounds(a, x)
        lo, hi = balance_window(len(x), eps, mode)
        if not (lo <= b.min_gc and b.max_gc <= hi):
            problems.append(f"balance: gc count in [{b.min_gc},{b.max_gc}] outside [{lo},{hi}]")
    return problems


def cmd_verify(args, out: _Output) -> int:
    if args.l is None and args.eps is None:
        raise CliError("E_FLAG", "verify needs --l, --eps, or both")
    mode = BalanceMode(args.mode)
    failed = 0
    for i, line in enumerate(_read_lines(args.input), 1):
        x = _parse_word(args.alphabet, line, i)
        problems = verify_line(args.alphabet, x, args.l, args.eps, mode)
        if problems:
            failed += 1
            out.line(f"{line}\tFAIL\t" + "; ".join(problems))
        else:
            out.line(f"{line}\tPASS")
    return EXIT_CODES["E_FAIL"] if failed else 0


def cmd_enumerate(args, out: _Output) -> int:
    mode = BalanceMode(args.mode)
    if args.l is not None and args.eps is not None:
        con = Constraint.both(args.l, args.eps, mode)
    elif args.l is not None:
        con = Constraint.rll(args.l)
    elif args.eps is not None:
        con = Constraint.bal(args.eps, mode)
    else:
        raise CliError("E_FLAG", "enumerate needs --l, --eps, or both")
    exact = count_exact(args.n, con, args.alphabet)
    try:
        brute = str(brute_count(args.n, con, args.alphabet, cap=args.brute_cap))
    except CapacityError:
        brute = "skipped"
    records = [[args.alphabet.spec(), str(args.n), "" if args.l is None else str(args.l),
                "" if args.eps is None else str(args.eps), str(exact), brute]]
    header = ("alphabet", "n", "l", "eps", "count_exact", "brute_count")
    out.write(report.render(header, records, args.format))
    return 0


# --- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog=PROG, description="Constrained coding for composite DNA alphabets.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, alphabet=True):
        if alphabet:
            p.add_argument("--alphabet", type=_alphabet, default=None,
                           help="composite letters, e.g. 'M=AC' or 'M=AT~N=CG' (default depends on command)")
        p.add_argument("--out", default=None, help="output path (default: stdout)")

    p = sub.add_parser("tables", help="capacity tables and the single-redundancy bound table")
    common(p, alphabet=False)
    p.add_argument("--format", choices=("csv", "text"), default="text")
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--precision", type=int, default=3)
    p.add_argument("--rule", choices=[r.value for r in ForbiddenRule], default="common-base")
    p.add_argument("--figures", metavar="DIR", help="also write PNG figures and CSV files here")
    p.set_defaults(func=cmd_tables)

    p = sub.add_parser("capacity", help="capacity of the l-RLL constraint")
    common(p)
    p.add_argument("--l", type=_positive, required=True)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--precision", type=int, default=3)
    p.add_argument("--rule", choices=[r.value for r in ForbiddenRule], default="common-base")
    p.add_argument("--format", choices=("csv", "text"), default="text")
    p.set_defaults(func=cmd_capacity)

    p = sub.add_parser("bound", help="longest codeword encodable with one redundant symbol")
    common(p)
    p.add_argument("--l", type=_positive, required=True)
    p.set_defaults(func=cmd_bound)

    for name, func, helptext in (("encode", cmd_encode, "encode words line by line"),
                                 ("decode", cmd_decode, "decode words line by line")):
        p = sub.add_parser(name, help=helptext)
        common(p)
        p.add_argument("--codec", choices=("rll", "gc", "combined"), required=True)
        p.add_argument("--l", type=_positive)
        p.add_argument("--n", type=_positive)
        p.add_argument("--eps", type=_rational)
        p.add_argument("--grid", choices=[g.value for g in GridMode], default="full")
        p.add_argument("--in", dest="input", default=None, help="input path (default: stdin)")
        p.set_defaults(func=func)

    p = sub.add_parser("verify", help="check each line against the run-length and balance constraints")
    common(p)
    p.add_argument("--l", type=_positive)
    p.add_argument("--eps", type=_rational)
    p.add_argument("--mode", choices=[m.value for m in BalanceMode], default="strict")
    p.add_argument("--in", dest="input", default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("enumerate", help="exact constrained word counts, with a brute-force cross-check")
    common(p)
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--l", type=_positive)
    p.add_argument("--eps", type=_rational)
    p.add_argument("--mode", choices=[m.value for m in BalanceMode], default="strict")
    p.add_argument("--brute-cap", type=int, default=10**7)
    p.add_argument("--format", choices=("csv", "text"), default="text")
    p.set_defaults(func=cmd_enumerate)
    return parser


def _default_alphabet(args) -> CompositeAlphabet:
    if getattr(args, "codec", None) == "combined":
        return SIGMA2_ATGC
    return SIGMA1_AC


def run(argv: Sequence[str] | None = None) -> int:
    out = None
    try:
        args = build_parser().parse_args(argv)
        if hasattr(args, "alphabet"):
            args.alphabet_given = args.alphabet is not None
            if args.alphabet is None:
                args.alphabet = _default_alphabet(args)
        for key in ("l", "n", "eps"):
            if not hasattr(args, key):
                setattr(args, key, None)
        out = _Output(args.out)
        status = args.func(args, out)
        out.close()
        return status
    except CliError as exc:
        code = exc.code
        message = str(exc)
    except (CodecError, ConstructionError) as exc:
        code, message = "E_CODEC", str(exc)
    except CapacityError as exc:
        code, message = "E_NUMERIC", str(exc)
    except (ValueError, AlphabetError) as exc:
        # parameter validation inside the library
        code, message = "E_FLAG", str(exc)
    print(f"{PROG}: error[{code}]: {message}", file=sys.stderr)
    return EXIT_CODES[code]


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
