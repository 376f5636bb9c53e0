"""
Command-line front end.

    python cli.py convert --to z hexagon.vpoly | python cli.py convert --to v -
    python cli.py bound -f ex4.expr -s ex4.zpoly --method pz
    python cli.py complexity --case zono-point -n 20 -m 20 --csv

Results go to stdout (or -o), diagnostics to stderr. Exit codes: 0 success,
1 invalid input or failed computation, 2 usage error.
"""

import argparse
import csv
import io
import logging
import sys
from typing import List, Optional

from pydantic import ValidationError

import complexity
import core
import rangebound
from convert import DEDUP_TOLERANCE, v_to_z, z_to_v
from errors import InvalidSetError, ZonoError
from file_utils import (
    format_float, parse_expr, parse_matrix, parse_vpoly, parse_zpoly, read_text,
    serialize_vpoly, serialize_zpoly, write_text,
)
from log_utils import setup_logging
from models import BoundMethod, ComplexityCase, Interval, VertexOrder, ZPolytope
from schemas import BoundConfig
from setops import convex_hull, linear_map, minkowski_sum

logger = logging.getLogger(__name__)

CSV_COLUMNS = ["case", "n", "m", "m1", "m2", "n_v", "n_h", "n_z", "bound_kind"]


def _load_zpoly(path: str) -> ZPolytope:
    return parse_zpoly(read_text(path))


def _with_stats(P: ZPolytope) -> str:
    return serialize_zpoly(P) + f"# {core.size_stats(P).as_text()}\n"


def _format_interval(iv: Interval) -> str:
    return f"[{format_float(iv.lo)}, {format_float(iv.hi)}]"


def _sweep(text: str) -> List[int]:
    try:
        start, stop = (int(part) for part in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a:b, got {text!r}") from None
    if start > stop:
        raise argparse.ArgumentTypeError(f"empty sweep {text!r}")
    return list(range(start, stop + 1))


# Subcommand handlers
def cmd_validate(args) -> None:
    P = parse_zpoly(read_text(args.file), check=False)
    violations = core.validate(P)
    if violations:
        raise InvalidSetError(violations)
    write_text(None, "OK\n")


def cmd_convert(args) -> None:
    text = read_text(args.input)
    if args.to == "z":
        out = serialize_zpoly(v_to_z(parse_vpoly(text), VertexOrder(args.order)))
    else:
        out = serialize_vpoly(z_to_v(parse_zpoly(text), tol=args.tol))
    write_text(args.output, out)


def cmd_op(args) -> None:
    if args.op_name == "map":
        result = linear_map(parse_matrix(read_text(args.matrix)), _load_zpoly(args.set))
    elif args.op_name == "sum":
        result = minkowski_sum(_load_zpoly(args.first), _load_zpoly(args.second))
    else:
        result = convex_hull(_load_zpoly(args.first), _load_zpoly(args.second))
    write_text(args.output, _with_stats(result))


def cmd_vertices(args) -> None:
    write_text(args.output, serialize_vpoly(z_to_v(_load_zpoly(args.file), tol=args.tol)))


def cmd_regularize(args) -> None:
    regular, _ = core.regularize(_load_zpoly(args.file))
    write_text(args.output, _with_stats(regular))


def cmd_bound(args) -> None:
    cfg = BoundConfig(
        taylor_order=args.order, degree_cap=args.cap, split_depth=args.splits,
        split_fanout=args.fanout, method=BoundMethod(args.method), inflate=args.inflate,
    )
    result = rangebound.bound(parse_expr(read_text(args.expr)), _load_zpoly(args.set), cfg)
    write_text(None, _format_interval(result) + "\n")


def cmd_sample(args) -> None:
    result = rangebound.sample_range(
        parse_expr(read_text(args.expr)), _load_zpoly(args.set), args.samples, args.seed
    )
    write_text(None, _format_interval(result) + "\n")


def cmd_eval(args) -> None:
    P = _load_zpoly(args.file)
    if args.lifted:
        point = core.evaluate_pz(core.lift_to_pz(P), args.alpha, args.allow_outside)
    else:
        point = core.evaluate(P, args.alpha, args.allow_outside)
    write_text(None, " ".join(format_float(v) for v in point) + "\n")


def cmd_info(args) -> None:
    P = _load_zpoly(args.file)
    lines = [core.size_stats(P).as_text()]
    h_max, mu_max = core.regular_size_bounds(P.num_factors)
    lines.append(f"regular bounds h<={h_max} mu<={mu_max}")
    for k, iv in enumerate(core.interval_hull(P), start=1):
        lines.append(f"x{k} {_format_interval(iv)}")
    write_text(None, "\n".join(lines) + "\n")


def cmd_complexity(args) -> None:
    case = ComplexityCase(args.case)
    if case is ComplexityCase.ZONO_POINT:
        m_values = args.sweep or args.m
        if not m_values:
            raise InvalidSetError(["zono-point needs -m or --sweep"])
        rows = complexity.emit_table(case, args.n, m_values=m_values)
    else:
        m1_values = args.sweep or args.m1
        m2_values = args.sweep or args.m2
        if not m1_values or not m2_values:
            raise InvalidSetError(["zono-zono needs --m1 and --m2, or --sweep"])
        rows = complexity.emit_table(case, args.n, m1_values=m1_values, m2_values=m2_values)

    columns = CSV_COLUMNS + (["smallest"] if args.winner else [])
    if args.csv:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            values = [row.case.value, row.n, row.m, row.m1, row.m2, row.n_v, row.n_h, row.n_z,
                      row.bound_kind_text]
            if args.winner:
                values.append(complexity.smallest_representation(row))
            writer.writerow(["" if v is None else v for v in values])
        write_text(None, buffer.getvalue())
        return

    lines = []
    for row in rows:
        params = f"m={row.m}" if row.m is not None else f"m1={row.m1} m2={row.m2}"
        line = f"n={row.n} {params} Nv={row.n_v} Nh={row.n_h} Nz={row.n_z} ({row.bound_kind_text})"
        if args.winner:
            line += f" smallest={complexity.smallest_representation(row)}"
        lines.append(line)
    write_text(None, "\n".join(lines) + "\n")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="zonoset", description="Polytopes in Z-representation")
    parser.add_argument("--log-level", default=None, help="Overrides ZONOSET_LOG_LEVEL")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="Check a zpoly file")
    p.add_argument("file")
    p.set_defaults(handler=cmd_validate)

    p = sub.add_parser("convert", help="V-representation <-> Z-representation")
    p.add_argument("--to", choices=["z", "v"], required=True)
    p.add_argument("input")
    p.add_argument("-o", "--output", default=None)
    p.add_argument("--order", choices=[o.value for o in VertexOrder], default=VertexOrder.INPUT.value)
    p.add_argument("--tol", type=float, default=DEDUP_TOLERANCE)
    p.set_defaults(handler=cmd_convert)

    p = sub.add_parser("op", help="Linear map, Minkowski sum or convex hull")
    ops = p.add_subparsers(dest="op_name", required=True)
    q = ops.add_parser("map")
    q.add_argument("-m", "--matrix", required=True)
    q.add_argument("set")
    q.add_argument("-o", "--output", default=None)
    for name in ("sum", "hull"):
        q = ops.add_parser(name)
        q.add_argument("first")
        q.add_argument("second")
        q.add_argument("-o", "--output", default=None)
    p.set_defaults(handler=cmd_op)

    p = sub.add_parser("vertices", help="Vertices of a zpoly set")
    p.add_argument("file")
    p.add_argument("-o", "--output", default=None)
    p.add_argument("--tol", type=float, default=DEDUP_TOLERANCE)
    p.set_defaults(handler=cmd_vertices)

    p = sub.add_parser("regularize", help="Merge generators and renumber factors")
    p.add_argument("file")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(handler=cmd_regularize)

    defaults = BoundConfig()
    p = sub.add_parser("bound", help="Enclose the range of an expression over a set")
    p.add_argument("-f", "--expr", required=True)
    p.add_argument("-s", "--set", required=True)
    p.add_argument("--method", choices=[m.value for m in BoundMethod], default=defaults.method.value)
    p.add_argument("--order", type=int, default=defaults.taylor_order)
    p.add_argument("--cap", type=int, default=defaults.degree_cap)
    p.add_argument("--splits", type=int, default=defaults.split_depth)
    p.add_argument("--fanout", type=int, default=defaults.split_fanout)
    p.add_argument("--inflate", action="store_true")
    p.set_defaults(handler=cmd_bound)

    p = sub.add_parser("sample", help="Sampled inner range of an expression over a set")
    p.add_argument("-f", "--expr", required=True)
    p.add_argument("-s", "--set", required=True)
    p.add_argument("-n", "--samples", type=int, default=rangebound.DEFAULT_SAMPLES)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(handler=cmd_sample)

    p = sub.add_parser("eval", help="Evaluate a zpoly set at factor values")
    p.add_argument("file")
    p.add_argument("--alpha", type=float, nargs="*", default=[])
    p.add_argument("--lifted", action="store_true", help="Evaluate through the polynomial zonotope")
    p.add_argument("--allow-outside", action="store_true")
    p.set_defaults(handler=cmd_eval)

    p = sub.add_parser("info", help="Sizes and interval hull of a zpoly set")
    p.add_argument("file")
    p.set_defaults(handler=cmd_info)

    p = sub.add_parser("complexity", help="Representation sizes of hull polytopes")
    p.add_argument("--case", choices=[c.value for c in ComplexityCase], required=True)
    p.add_argument("-n", type=int, nargs="+", required=True)
    p.add_argument("-m", type=int, nargs="+")
    p.add_argument("--m1", type=int, nargs="+")
    p.add_argument("--m2", type=int, nargs="+")
    p.add_argument("--sweep", type=_sweep, default=None)
    p.add_argument("--csv", action="store_true")
    p.add_argument("--winner", action="store_true", help="Add the smallest representation")
    p.set_defaults(handler=cmd_complexity)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(args.log_level)
    logger.debug("running command", extra={"command": args.command})
    try:
        args.handler(args)
    except ValidationError as exc:
        errors = "; ".join(err["msg"] for err in exc.errors())
        print(f"zonoset: error: {errors}", file=sys.stderr)
        return 2
    except ZonoError as exc:
        print(f"zonoset: error: {exc.detail}", file=sys.stderr)
        return exc.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
