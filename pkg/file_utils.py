"""
Plain-text formats for V-polytopes, Z-representations, matrices and
expressions, plus file helpers where ``-`` stands for stdin/stdout.

All numbers are written with 17 significant digits so that parsing what was
serialized reproduces the same doubles. LF and CRLF are accepted, LF is
emitted.
"""

import math
import re
import sys
from pathlib import Path
from typing import Iterator, List, Optional, Tuple

import numpy as np

import core
from errors import FileAccessError, InvalidSetError, ParseError
from expressions import Add, Const, Cos, Div, Exp, Expr, Mul, Neg, Pow, Sin, Sub, Var
from models import VPolytope, ZPolytope

# Configuration
FLOAT_FORMAT = ".17g"
STDIO = "-"

Token = Tuple[str, int]  # text, 1-based column
Line = Tuple[int, List[Token]]  # 1-based line number, tokens


def format_float(value: float) -> str:
    return format(float(value) + 0.0, FLOAT_FORMAT)


def _format_row(values) -> str:
    return " ".join(format_float(v) for v in values)


# File helpers
def read_text(path: str) -> str:
    try:
        if path == STDIO:
            return sys.stdin.read()
        return Path(path).read_text(encoding="utf-8")
    except UnicodeDecodeError as exc:
        raise FileAccessError(f"Cannot read {path}: not valid UTF-8 at byte {exc.start}") from exc
    except OSError as exc:
        raise FileAccessError(f"Cannot read {path}: {exc.strerror or exc}") from exc


def write_text(path: Optional[str], text: str) -> None:
    if path is None or path == STDIO:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
    except OSError as exc:
        raise FileAccessError(f"Cannot write {path}: {exc.strerror or exc}") from exc


# Line-oriented formats
def _tokenized_lines(text: str) -> Iterator[Line]:
    for number, raw in enumerate(text.splitlines(), start=1):
        content = raw.split("#", 1)[0]
        tokens = [(m.group(0), m.start() + 1) for m in re.finditer(r"\S+", content)]
        if tokens:
            yield number, tokens


class _LineReader:
    """Cursor over the non-empty lines of a record."""

    def __init__(self, text: str, kind: str):
        self.lines = list(_tokenized_lines(text))
        self.pos = 0
        self.kind = kind
        header = self.next_line()
        if header is None:
            raise ParseError(f"Empty input, expected '{kind}'", 1, 1)
        number, tokens = header
        if tokens[0][0] != kind or len(tokens) != 1:
            raise ParseError(f"Expected header '{kind}'", number, tokens[0][1])

    def next_line(self) -> Optional[Line]:
        if self.pos >= len(self.lines):
            return None
        line = self.lines[self.pos]
        self.pos += 1
        return line

    def peek_keyword(self) -> Optional[str]:
        if self.pos >= len(self.lines):
            return None
        return self.lines[self.pos][1][0][0]

    def expect(self, keyword: str) -> Line:
        line = self.next_line()
        if line is None:
            last = self.lines[-1][0] if self.lines else 1
            raise ParseError(f"Unexpected end of input, expected '{keyword}'", last + 1, 1)
        number, tokens = line
        if tokens[0][0] != keyword:
            raise ParseError(f"Expected '{keyword}', found '{tokens[0][0]}'", number, tokens[0][1])
        return line

    def expect_count(self, keyword: str, minimum: int) -> int:
        number, tokens = self.expect(keyword)
        if len(tokens) != 2:
            raise ParseError(f"'{keyword}' takes exactly one integer", number, tokens[0][1])
        value = _parse_int(tokens[1], number)
        if value < minimum:
            raise ParseError(f"'{keyword}' must be at least {minimum}", number, tokens[1][1])
        return value

    def finish(self):
        line = self.next_line()
        if line is not None:
            number, tokens = line
            raise ParseError(f"Unexpected '{tokens[0][0]}'", number, tokens[0][1])


def _parse_int(token: Token, line: int) -> int:
    text, column = token
    if not re.fullmatch(r"[+-]?\d+", text):
        raise ParseError(f"Expected an integer, found '{text}'", line, column)
    return int(text)


def _parse_float(token: Token, line: int) -> float:
    text, column = token
    try:
        value = float(text)
    except ValueError:
        raise ParseError(f"Expected a number, found '{text}'", line, column) from None
    if not math.isfinite(value):
        raise ParseError(f"Numbers must be finite, found '{text}'", line, column)
    return value


def _parse_vector(tokens: List[Token], line: int, size: int, anchor: Token) -> List[float]:
    if len(tokens) != size:
        raise ParseError(f"Expected {size} values, found {len(tokens)}", line, anchor[1])
    return [_parse_float(token, line) for token in tokens]


def parse_zpoly(text: str, check: bool = True) -> ZPolytope:
    """
    Parse a ``zpoly`` record. With ``check`` the result must satisfy every
    invariant reported by core.validate, otherwise InvalidSetError is raised.
    """
    reader = _LineReader(text, "zpoly")
    n = reader.expect_count("dim", 1)
    p = reader.expect_count("factors", 0)
    number, tokens = reader.expect("center")
    center = _parse_vector(tokens[1:], number, n, tokens[0])

    columns, exponents = [], []
    while reader.peek_keyword() is not None:
        number, tokens = reader.expect("gen")
        colon = next((i for i, (tok, _) in enumerate(tokens) if tok == ":"), None)
        if colon is None:
            raise ParseError("Generator line needs ':' before its factor indices", number, tokens[0][1])
        columns.append(_parse_vector(tokens[1:colon], number, n, tokens[0]))
        indices = tuple(_parse_int(token, number) for token in tokens[colon + 1:])
        if not indices:
            raise ParseError("Generator needs at least one factor index", number, tokens[colon][1])
        exponents.append(indices)
    reader.finish()

    generators = np.array(columns, dtype=float).T if columns else np.zeros((n, 0))
    P = ZPolytope(center, generators, tuple(exponents), p)
    if check:
        violations = core.validate(P)
        if violations:
            raise InvalidSetError(violations)
    return P


def serialize_zpoly(P: ZPolytope) -> str:
    lines = ["zpoly", f"dim {P.dim}", f"factors {P.num_factors}", f"center {_format_row(P.center)}"]
    for i, idx in enumerate(P.exponents):
        lines.append(f"gen {_format_row(P.generators[:, i])} : {' '.join(str(k) for k in idx)}")
    return "\n".join(lines) + "\n"


def parse_vpoly(text: str) -> VPolytope:
    reader = _LineReader(text, "vpoly")
    n = reader.expect_count("dim", 1)
    vertices = []
    while reader.peek_keyword() is not None:
        number, tokens = reader.expect("vertex")
        vertices.append(_parse_vector(tokens[1:], number, n, tokens[0]))
    reader.finish()
    if not vertices:
        raise InvalidSetError(["A V-polytope needs at least one vertex"])
    return VPolytope(np.array(vertices, dtype=float))


def serialize_vpoly(P: VPolytope) -> str:
    lines = ["vpoly", f"dim {P.dim}"]
    lines.extend(f"vertex {_format_row(v)}" for v in P.vertices)
    return "\n".join(lines) + "\n"


def parse_matrix(text: str) -> np.ndarray:
    reader = _LineReader(text, "matrix")
    rows = reader.expect_count("rows", 1)
    cols = reader.expect_count("cols", 1)
    values = []
    for _ in range(rows):
        number, tokens = reader.expect("row")
        values.append(_parse_vector(tokens[1:], number, cols, tokens[0]))
    reader.finish()
    return np.array(values, dtype=float)


def serialize_matrix(M) -> str:
    M = np.atleast_2d(np.asarray(M, dtype=float))
    lines = ["matrix", f"rows {M.shape[0]}", f"cols {M.shape[1]}"]
    lines.extend(f"row {_format_row(row)}" for row in M)
    return "\n".join(lines) + "\n"


# Expressions
_UNARY = {"neg": Neg, "sin": Sin, "cos": Cos, "exp": Exp}
_VARIABLE = re.compile(r"x([1-9][0-9]*)")


def _expr_tokens(text: str) -> List[Tuple[str, int, int]]:
    tokens = []
    for number, raw in enumerate(text.splitlines(), start=1):
        content = raw.split("#", 1)[0]
        for match in re.finditer(r"[()]|[^\s()]+", content):
            tokens.append((match.group(0), number, match.start() + 1))
    return tokens


def parse_expr(text: str) -> Expr:
    """Parse fully parenthesised prefix notation, e.g. ``(+ (pow x1 2) (sin x2))``."""
    tokens = _expr_tokens(text)
    pos = 0

    def fail(message: str, at: int):
        if at < len(tokens):
            raise ParseError(message, tokens[at][1], tokens[at][2])
        word, line, column = tokens[-1]
        raise ParseError(message, line, column + len(word))

    def atom(at: int) -> Expr:
        word, line, column = tokens[at]
        var = _VARIABLE.fullmatch(word)
        if var:
            return Var(int(var.group(1)))
        return Const(_parse_float((word, column), line))

    def expression() -> Expr:
        nonlocal pos
        if pos >= len(tokens):
            fail("Unexpected end of expression", pos)
        word = tokens[pos][0]
        if word == ")":
            fail("Unexpected ')'", pos)
        if word != "(":
            pos += 1
            return atom(pos - 1)

        open_at = pos
        pos += 1
        if pos >= len(tokens) or tokens[pos][0] in "()":
            fail("Expected an operator after '('", pos)
        op_at = pos
        op = tokens[pos][0]
        pos += 1
        args, arg_at = [], []
        while pos < len(tokens) and tokens[pos][0] != ")":
            arg_at.append(pos)
            args.append(expression())
        if pos >= len(tokens):
            fail("Unbalanced parentheses: missing ')'", open_at)
        pos += 1
        return build(op, op_at, args, arg_at)

    def build(op: str, op_at: int, args: List[Expr], arg_at: List[int]) -> Expr:
        def arity(count: int):
            if len(args) != count:
                fail(f"'{op}' takes {count} argument{'s' if count > 1 else ''}, got {len(args)}", op_at)

        if op in ("+", "*"):
            if not args:
                fail(f"'{op}' needs at least one argument", op_at)
            return Add(tuple(args)) if op == "+" else Mul(tuple(args))
        if op == "-":
            arity(2)
            return Sub(args[0], args[1])
        if op == "/":
            arity(2)
            if not isinstance(args[1], Const):
                fail("Division is only supported by a constant", arg_at[1])
            if args[1].value == 0.0:
                fail("Division by zero", arg_at[1])
            return Div(args[0], args[1].value)
        if op == "pow":
            arity(2)
            word = tokens[arg_at[1]][0]
            if not re.fullmatch(r"\d+", word):
                fail("'pow' needs a nonnegative integer literal exponent", arg_at[1])
            exponent = int(word)
            return Const(1.0) if exponent == 0 else Pow(args[0], exponent)
        if op in _UNARY:
            arity(1)
            return _UNARY[op](args[0])
        fail(f"Unknown operator '{op}'", op_at)

    if not tokens:
        raise ParseError("Empty expression", 1, 1)
    result = expression()
    if pos < len(tokens):
        fail("Trailing input after expression", pos)
    return result


def serialize_expr(f: Expr) -> str:
    """Canonical prefix text; parse_expr(serialize_expr(f)) == f."""
    if isinstance(f, Var):
        return f"x{f.index}"
    if isinstance(f, Const):
        return format_float(f.value)
    if isinstance(f, Pow):
        return f"(pow {serialize_expr(f.base)} {f.exponent})"
    if isinstance(f, Div):
        return f"(/ {serialize_expr(f.num)} {format_float(f.denom)})"
    names = {Add: "+", Mul: "*", Sub: "-", Neg: "neg", Sin: "sin", Cos: "cos", Exp: "exp"}
    name = names[type(f)]
    return "(" + " ".join([name] + [serialize_expr(child) for child in f.children()]) + ")"

