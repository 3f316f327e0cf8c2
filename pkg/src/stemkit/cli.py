"""Command-line entry point.

Exit codes: 0 success, 1 usage error, 2 data or validation failure,
3 resource limit.  Results go to stdout (or ``--out``), diagnostics to
stderr.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Sequence

from . import __version__, imj, motivic, steenrod, stems
from .errors import ChartFormatError, ParseError, ResourceLimitError, StemRangeError, StemTableError
from .ext import charts, cobar
from .ext.resolution import BUDGET_ENV, default_budget, minimal_resolution

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_LIMIT = 0, 1, 2, 3

log = logging.getLogger("stemkit")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


class _Version(argparse.Action):
    def __init__(self, option_strings, dest=argparse.SUPPRESS, default=argparse.SUPPRESS, help=None):
        super().__init__(option_strings, dest=dest, default=default, nargs=0, help=help)

    def __call__(self, parser, namespace, values, option_string=None):
        sys.stdout.write(f"stemkit {__version__} {stems.DATA_FILE} sha256:{stems.data_checksum()}\n")
        parser.exit(EXIT_OK)


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if value <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def _nonnegative(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if value < 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return value


def _write(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
        log.info("wrote %s", out)
    else:
        sys.stdout.write(text)


# -- handlers ---------------------------------------------------------------------


def _steenrod_adem(args: argparse.Namespace) -> int:
    word = steenrod.parse_word(args.expr)
    _write(f"{steenrod.adem_reduce(word, args.strategy)}\n", args.out)
    return EXIT_OK


def _steenrod_coproduct(args: argparse.Namespace) -> int:
    _write(f"{steenrod.coproduct(steenrod.parse_monomial(args.expr))}\n", args.out)
    return EXIT_OK


def _motivic_coproduct(args: argparse.Namespace) -> int:
    _write(f"{motivic.motivic_coproduct(motivic.parse_monomial(args.expr))}\n", args.out)
    return EXIT_OK


def _motivic_normalize(args: argparse.Namespace) -> int:
    _write(f"{motivic.normalize(motivic.parse_raw(args.expr))}\n", args.out)
    return EXIT_OK


def _motivic_basis(args: argparse.Namespace) -> int:
    _write("".join(f"{m}\n" for m in motivic.motivic_basis(args.deg, args.weight)), args.out)
    return EXIT_OK


def _ext_resolve(args: argparse.Namespace) -> int:
    if args.format.lower() not in charts.FORMATS + ("text",):
        raise ChartFormatError(f"unknown chart format {args.format!r}; choose one of {', '.join(charts.FORMATS)}")
    res = minimal_resolution(args.max_s, args.max_t, args.max_dim)
    chart = charts.ext_chart(res, with_lines=args.h_lines)
    _write(charts.emit_chart(chart, args.format), args.out)
    return EXIT_OK


def _ext_cobar(args: argparse.Namespace) -> int:
    lines = []
    if args.motivic:
        cx = cobar.motivic_cobar(args.max_s, args.max_stem, args.max_dim)
        lines.append("s,t,weight,free_rank,torsion")
        for line in _tau_lines(cx, args.max_s, args.max_stem):
            s, t, w, d = line
            lines.append(f"{s},{t},{w},{d.free_rank},{_torsion(d)}")
    else:
        cx = cobar.classical_cobar(args.max_s, args.max_stem + args.max_s, args.max_dim)
        lines.append("s,t,dim")
        for n in range(args.max_stem + 1):
            for s in range(args.max_s + 1):
                d = cx.homology_dim(s, n + s)
                if d:
                    lines.append(f"{s},{n + s},{d}")
    _write("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def _torsion(d: cobar.TauModuleDescriptor) -> str:
    return "[" + ",".join(map(str, d.torsion)) + "]"


def _tau_lines(cx: cobar.CobarComplex, max_s: int, max_stem: int):
    for n in range(max_stem + 1):
        for s in range(max_s + 1):
            for w, d in cobar.tau_homology(cx, s, n + s).items():
                yield s, n + s, w, d


def _ext_tau_homology(args: argparse.Namespace) -> int:
    cx = cobar.motivic_cobar(args.max_s, args.max_stem, args.max_dim)
    text = "".join(
        f"{s},({t},{w}),{d.free_rank},{_torsion(d)}\n" for s, t, w, d in _tau_lines(cx, args.max_s, args.max_stem)
    )
    _write(text, args.out)
    return EXIT_OK


def _imj(args: argparse.Namespace) -> int:
    if args.prime is None:
        group = imj.v1_periodic_all(args.k)
    else:
        if not imj.is_prime(args.prime):
            raise UsageError(f"{args.prime} is not prime")
        group = imj.v1_periodic(args.prime, args.k)
    _write(f"{group}\n", args.out)
    return EXIT_OK


def _stems_query(args: argparse.Namespace) -> int:
    q = stems.query_stem(args.k)
    e = q.entry
    lines = [
        f"k: {e.k}",
        f"v1-torsion at 2: {' or '.join(map(str, e.two_torsion))}",
        f"v1-torsion at odd primes: {e.odd_torsion}",
        f"v1-periodic: {e.v1_periodic}",
    ]
    if q.is_uncertain:
        lines.append(f"uncertain: {len(e.two_torsion)} alternatives")
    if e.is_new:
        lines.append("new: yes")
    if args.assemble:
        for g in q.groups:
            lines.append(f"group: {g}")
    _write("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def _stems_validate(args: argparse.Namespace) -> int:
    violations = stems.check_consistency(stems.load_table())
    for v in violations:
        print(v, file=sys.stderr)
    if violations:
        return EXIT_DATA
    _write(f"ok: {len(stems.load_table())} rows consistent\n", args.out)
    return EXIT_OK


def _stems_growth(args: argparse.Namespace) -> int:
    fit = stems.cumulative_growth(stems.load_table())
    text = fit.to_csv()
    if not args.fit:
        text = "".join(line + "\n" for line in text.splitlines() if not line.startswith("# least squares"))
    _write(text, args.out)
    return EXIT_OK


# -- parser -----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--out", metavar="FILE", help="write results to FILE instead of stdout")
    # global flags are accepted after the subcommand too
    common.add_argument("--max-dim", type=_positive, default=argparse.SUPPRESS, metavar="N",
                        help="largest basis dimension per bidegree")
    common.add_argument("-v", "--verbose", action="count", default=argparse.SUPPRESS,
                        help="more diagnostics on stderr")

    p = _Parser(prog="stemkit", description="Steenrod algebra, Ext charts and stable stems.")
    p.add_argument("--version", action=_Version, help="print version and data-file checksum")
    p.add_argument("--max-dim", type=_positive, default=None, metavar="N",
                   help=f"largest basis dimension per bidegree (default: ${BUDGET_ENV} or built-in)")
    p.add_argument("-v", "--verbose", action="count", default=0, help="more diagnostics on stderr")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    st = sub.add_parser("steenrod", help="classical Steenrod algebra").add_subparsers(
        dest="action", required=True, parser_class=_Parser)
    c = st.add_parser("adem", parents=[common], help="admissible normal form of a Sq word")
    c.add_argument("expr", help='e.g. "Sq3 Sq2"')
    c.add_argument("--strategy", choices=("leftmost", "rightmost"), default="leftmost")
    c.set_defaults(func=_steenrod_adem)
    c = st.add_parser("coproduct", parents=[common], help="coproduct of a dual monomial")
    c.add_argument("expr", help='e.g. "z1^2*z2"')
    c.set_defaults(func=_steenrod_coproduct)

    mo = sub.add_parser("motivic", help="motivic dual Steenrod algebra").add_subparsers(
        dest="action", required=True, parser_class=_Parser)
    c = mo.add_parser("coproduct", parents=[common], help="coproduct of a monomial")
    c.add_argument("expr", help='e.g. "t1"')
    c.set_defaults(func=_motivic_coproduct)
    c = mo.add_parser("normalize", parents=[common], help="normal form of a monomial")
    c.add_argument("expr", help='e.g. "t0^2"')
    c.set_defaults(func=_motivic_normalize)
    c = mo.add_parser("basis", parents=[common], help="monomial basis of a bidegree")
    c.add_argument("--deg", type=int, required=True)
    c.add_argument("--weight", type=int, required=True)
    c.set_defaults(func=_motivic_basis)

    ex = sub.add_parser("ext", help="Ext over the Steenrod algebra").add_subparsers(
        dest="action", required=True, parser_class=_Parser)
    c = ex.add_parser("resolve", parents=[common], help="minimal resolution chart")
    c.add_argument("--max-s", type=_nonnegative, default=20, help="default: 20")
    c.add_argument("--max-t", type=_nonnegative, default=40, help="default: 40")
    c.add_argument("--format", default="csv", help="csv, txt or svg")
    c.add_argument("--h-lines", action="store_true", help="include h0, h1, h2 multiplications")
    c.set_defaults(func=_ext_resolve)
    c = ex.add_parser("cobar", parents=[common], help="cobar complex homology")
    g = c.add_mutually_exclusive_group(required=True)
    g.add_argument("--classical", action="store_true")
    g.add_argument("--motivic", action="store_true")
    c.add_argument("--max-s", type=_nonnegative, default=5, help="default: 5")
    c.add_argument("--max-stem", type=_nonnegative, default=10, help="default: 10")
    c.set_defaults(func=_ext_cobar)
    c = ex.add_parser("tau-homology", parents=[common], help="motivic Ext as GF(2)[tau]-modules")
    c.add_argument("--max-s", type=_nonnegative, default=5, help="default: 5")
    c.add_argument("--max-stem", type=_nonnegative, default=10, help="default: 10")
    c.set_defaults(func=_ext_tau_homology)

    c = sub.add_parser("imj", parents=[common], help="v1-periodic summand of a stem")
    c.add_argument("--k", type=_positive, required=True)
    c.add_argument("--prime", type=_positive, default=None)
    c.set_defaults(func=_imj)

    sm = sub.add_parser("stems", help="table of stable stems").add_subparsers(
        dest="action", required=True, parser_class=_Parser)
    c = sm.add_parser("query", parents=[common], help="one row of the table")
    c.add_argument("k", type=int)
    c.add_argument("--assemble", action="store_true", help="also print invariant factors")
    c.set_defaults(func=_stems_query)
    c = sm.add_parser("validate", parents=[common], help="check the table's internal consistency")
    c.set_defaults(func=_stems_validate)
    c = sm.add_parser("growth", parents=[common], help="cumulative 2-primary order growth")
    c.add_argument("--fit", action="store_true", help="include the least-squares fit against k^2")
    c.set_defaults(func=_stems_growth)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    level = logging.WARNING - 10 * min(args.verbose, 2)
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.max_dim is None:
            args.max_dim = default_budget()
        return args.func(args)
    except (UsageError, StemRangeError, ParseError, ChartFormatError) as exc:
        print(f"stemkit: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except StemTableError as exc:
        print(f"stemkit: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ResourceLimitError as exc:
        done = f" (last completed bidegree {exc.last_completed})" if exc.last_completed else ""
        print(f"stemkit: resource limit: {exc}{done}", file=sys.stderr)
        return EXIT_LIMIT
    except ValueError as exc:
        print(f"stemkit: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"stemkit: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
