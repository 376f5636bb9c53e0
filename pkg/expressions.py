"""
Expression trees for scalar functions f: R^n -> R, with pointwise evaluation
and the natural interval extension.
"""

import math
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from errors import RangeOverflowError, UnsupportedExpressionError
from models import Interval

# Configuration
INFLATION = 1e-12
TWO_PI = 2.0 * math.pi
HALF_PI = 0.5 * math.pi


class Expr:
    """Base class of all expression nodes."""

    def children(self) -> Tuple["Expr", ...]:
        return ()


@dataclass(frozen=True)
class Var(Expr):
    index: int  # 1-based


@dataclass(frozen=True)
class Const(Expr):
    value: float


@dataclass(frozen=True)
class Neg(Expr):
    arg: Expr

    def children(self):
        return (self.arg,)


@dataclass(frozen=True)
class Add(Expr):
    args: Tuple[Expr, ...]

    def children(self):
        return self.args


@dataclass(frozen=True)
class Sub(Expr):
    left: Expr
    right: Expr

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True)
class Mul(Expr):
    args: Tuple[Expr, ...]

    def children(self):
        return self.args


@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    exponent: int

    def __post_init__(self):
        if int(self.exponent) != self.exponent or self.exponent < 0:
            raise UnsupportedExpressionError("Powers need a nonnegative integer exponent")

    def children(self):
        return (self.base,)


@dataclass(frozen=True)
class Div(Expr):
    num: Expr
    denom: float

    def __post_init__(self):
        if self.denom == 0.0:
            raise UnsupportedExpressionError("Division by zero constant")

    def children(self):
        return (self.num,)


@dataclass(frozen=True)
class Sin(Expr):
    arg: Expr

    def children(self):
        return (self.arg,)


@dataclass(frozen=True)
class Cos(Expr):
    arg: Expr

    def children(self):
        return (self.arg,)


@dataclass(frozen=True)
class Exp(Expr):
    arg: Expr

    def children(self):
        return (self.arg,)


def node_count(f: Expr) -> int:
    return 1 + sum(node_count(child) for child in f.children())


def max_variable(f: Expr) -> int:
    """Largest variable index used by f (0 for constant expressions)."""
    if isinstance(f, Var):
        return f.index
    return max((max_variable(child) for child in f.children()), default=0)


def eval_point(f: Expr, x):
    """Evaluate f at x; x may be a single point (n,) or a batch (N, n)."""
    x = np.asarray(x, dtype=float)
    if isinstance(f, Var):
        return x[..., f.index - 1]
    if isinstance(f, Const):
        return f.value
    if isinstance(f, Neg):
        return -eval_point(f.arg, x)
    if isinstance(f, Add):
        return sum(eval_point(arg, x) for arg in f.args)
    if isinstance(f, Sub):
        return eval_point(f.left, x) - eval_point(f.right, x)
    if isinstance(f, Mul):
        result = 1.0
        for arg in f.args:
            result = result * eval_point(arg, x)
        return result
    if isinstance(f, Pow):
        return eval_point(f.base, x) ** f.exponent
    if isinstance(f, Div):
        return eval_point(f.num, x) / f.denom
    if isinstance(f, Sin):
        return np.sin(eval_point(f.arg, x))
    if isinstance(f, Cos):
        return np.cos(eval_point(f.arg, x))
    if isinstance(f, Exp):
        return np.exp(eval_point(f.arg, x))
    raise UnsupportedExpressionError(f"Unsupported node {type(f).__name__}")


def checked_exp(x: float) -> float:
    try:
        return math.exp(x)
    except OverflowError:
        raise RangeOverflowError(f"exp overflows the float range at argument {x:.6g}") from None


def sin_range(iv: Interval) -> Interval:
    """Exact range of sin over iv via its critical points."""
    if iv.width >= TWO_PI:
        return Interval(-1.0, 1.0)
    a, b = math.sin(iv.lo), math.sin(iv.hi)
    lo, hi = min(a, b), max(a, b)
    if HALF_PI + TWO_PI * math.ceil((iv.lo - HALF_PI) / TWO_PI) <= iv.hi:
        hi = 1.0
    if -HALF_PI + TWO_PI * math.ceil((iv.lo + HALF_PI) / TWO_PI) <= iv.hi:
        lo = -1.0
    return Interval(lo, hi)


def cos_range(iv: Interval) -> Interval:
    if iv.width >= TWO_PI:
        return Interval(-1.0, 1.0)
    a, b = math.cos(iv.lo), math.cos(iv.hi)
    lo, hi = min(a, b), max(a, b)
    if TWO_PI * math.ceil(iv.lo / TWO_PI) <= iv.hi:
        hi = 1.0
    if math.pi + TWO_PI * math.ceil((iv.lo - math.pi) / TWO_PI) <= iv.hi:
        lo = -1.0
    return Interval(lo, hi)


def pow_range(iv: Interval, k: int) -> Interval:
    if k == 0:
        return Interval.point(1.0)
    a, b = iv.lo ** k, iv.hi ** k
    if k % 2 == 1 or iv.lo >= 0.0:
        return Interval(a, b)
    if iv.hi <= 0.0:
        return Interval(b, a)
    return Interval(0.0, max(a, b))


def eval_interval(f: Expr, box: Sequence[Interval], inflate: bool = False) -> Interval:
    """Natural interval extension of f over the box."""

    def widen(iv: Interval) -> Interval:
        return iv.inflate(INFLATION) if inflate else iv

    def visit(node: Expr) -> Interval:
        if isinstance(node, Var):
            if node.index < 1 or node.index > len(box):
                raise UnsupportedExpressionError(f"Variable x{node.index} is outside the box")
            return box[node.index - 1]
        if isinstance(node, Const):
            return Interval.point(node.value)
        if isinstance(node, Neg):
            return -visit(node.arg)
        if isinstance(node, Add):
            result = visit(node.args[0])
            for arg in node.args[1:]:
                result = widen(result + visit(arg))
            return result
        if isinstance(node, Sub):
            return widen(visit(node.left) - visit(node.right))
        if isinstance(node, Mul):
            result = visit(node.args[0])
            for arg in node.args[1:]:
                result = widen(result * visit(arg))
            return result
        if isinstance(node, Pow):
            return widen(pow_range(visit(node.base), node.exponent))
        if isinstance(node, Div):
            return widen(visit(node.num).scale(1.0 / node.denom))
        if isinstance(node, Sin):
            return widen(sin_range(visit(node.arg)))
        if isinstance(node, Cos):
            return widen(cos_range(visit(node.arg)))
        if isinstance(node, Exp):
            arg = visit(node.arg)
            return widen(Interval(checked_exp(arg.lo), checked_exp(arg.hi)))
        raise UnsupportedExpressionError(f"Unsupported node {type(node).__name__}")

    return visit(f)
