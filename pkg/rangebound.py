"""
Range bounding of scalar expressions over Z-representations.

Three methods are offered:

  ia-box  interval arithmetic over the exact interval hull of the set
  tm-box  Taylor-form composition over the interval hull, one factor per axis
  pz      Taylor-form composition directly over the set's own factors

Taylor forms pair a one-dimensional PolyZonotope over the factors with an
interval remainder. Monomials are bounded with the parity rule: [0, 1] when
every exponent is even, [-1, 1] otherwise.
"""

import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

import core
from errors import (
    DimensionMismatchError, FactorMismatchError, RangeOverflowError, UnsupportedExpressionError,
)
from expressions import (
    INFLATION, Add, Const, Cos, Div, Exp, Expr, Mul, Neg, Pow, Sin, Sub, Var,
    checked_exp, eval_interval, eval_point, max_variable,
)
from models import BoundMethod, Interval, PolyZonotope, ZPolytope
from schemas import BoundConfig

logger = logging.getLogger(__name__)

# Configuration
DEFAULT_DEGREE_CAP = 8
DEFAULT_SAMPLES = 10000
ZERO = Interval(0.0, 0.0)

# Factor domains in alpha space, one (lo, hi) pair per factor
Domain = Tuple[Tuple[float, float], ...]


@dataclass(frozen=True, eq=False)
class TaylorForm:
    poly: PolyZonotope
    remainder: Interval = field(default=ZERO)

    def __post_init__(self):
        if self.poly.dim != 1:
            raise DimensionMismatchError(f"Taylor forms are scalar, got dimension {self.poly.dim}")

    @classmethod
    def constant(cls, value: float, num_factors: int) -> "TaylorForm":
        return cls(PolyZonotope([value], np.zeros((1, 0)), np.zeros((num_factors, 0)), num_factors))

    @classmethod
    def factor(cls, k: int, num_factors: int) -> "TaylorForm":
        """The form alpha_k (k is 1-based)."""
        exponents = np.zeros((num_factors, 1), dtype=np.int64)
        exponents[k - 1, 0] = 1
        return cls(PolyZonotope([0.0], [[1.0]], exponents, num_factors))

    @property
    def num_factors(self) -> int:
        return self.poly.num_factors

    @property
    def coefficients(self) -> np.ndarray:
        return self.poly.generators[0]


def poly_bound(poly: PolyZonotope) -> Interval:
    """Parity-rule enclosure of a scalar polynomial over [-1, 1]^p."""
    coeffs = poly.generators[0] if poly.num_terms else np.zeros(0)
    even = ~np.any(poly.exponents % 2 == 1, axis=0)
    lo = np.where(even, np.minimum(coeffs, 0.0), -np.abs(coeffs)).sum()
    hi = np.where(even, np.maximum(coeffs, 0.0), np.abs(coeffs)).sum()
    c = poly.center[0]
    return Interval(c + lo, c + hi)


def tf_bound(t: TaylorForm) -> Interval:
    return poly_bound(t.poly) + t.remainder


def _check_factors(a: TaylorForm, b: TaylorForm):
    if a.num_factors != b.num_factors:
        raise FactorMismatchError(
            f"Taylor forms over {a.num_factors} and {b.num_factors} factors cannot be combined"
        )


def _widen(t: TaylorForm, inflate: bool) -> TaylorForm:
    if not inflate:
        return t
    b = tf_bound(t)
    pad = INFLATION * max(abs(b.lo), abs(b.hi))
    return TaylorForm(t.poly, t.remainder + Interval(-pad, pad))


def truncate(center: float, coeffs, exponents, num_factors: int, degree_cap: int) -> TaylorForm:
    """Scalar form from raw terms; terms above degree_cap move into the remainder."""
    coeffs = np.asarray(coeffs, dtype=float).reshape(1, -1)
    exponents = np.asarray(exponents, dtype=np.int64).reshape(num_factors, coeffs.shape[1])
    poly = PolyZonotope([center], coeffs, exponents, num_factors)
    over = poly.degrees() > degree_cap
    if not over.any():
        return TaylorForm(poly)
    absorbed = poly_bound(
        PolyZonotope([0.0], poly.generators[:, over], poly.exponents[:, over], num_factors)
    )
    kept = PolyZonotope(poly.center, poly.generators[:, ~over], poly.exponents[:, ~over], num_factors)
    return TaylorForm(kept, absorbed)


def add(a: TaylorForm, b: TaylorForm, inflate: bool = False) -> TaylorForm:
    _check_factors(a, b)
    poly = PolyZonotope(
        a.poly.center + b.poly.center,
        np.hstack([a.poly.generators, b.poly.generators]),
        np.hstack([a.poly.exponents, b.poly.exponents]),
        a.num_factors,
    )
    return _widen(TaylorForm(poly, a.remainder + b.remainder), inflate)


def scale(k: float, t: TaylorForm) -> TaylorForm:
    poly = PolyZonotope(k * t.poly.center, k * t.poly.generators, t.poly.exponents, t.num_factors)
    return TaylorForm(poly, t.remainder.scale(k))


def shift(t: TaylorForm, value: float) -> TaylorForm:
    poly = PolyZonotope(t.poly.center + value, t.poly.generators, t.poly.exponents, t.num_factors)
    return TaylorForm(poly, t.remainder)


def _with_constant(t: TaylorForm) -> Tuple[np.ndarray, np.ndarray]:
    coeffs = np.concatenate([t.poly.center, t.coefficients])
    zero = np.zeros((t.num_factors, 1), dtype=np.int64)
    return coeffs, np.hstack([zero, t.poly.exponents])


def multiply(
    a: TaylorForm, b: TaylorForm, degree_cap: int = DEFAULT_DEGREE_CAP, inflate: bool = False,
) -> TaylorForm:
    _check_factors(a, b)
    p = a.num_factors
    ca, ea = _with_constant(a)
    cb, eb = _with_constant(b)
    coeffs = np.outer(ca, cb).reshape(-1)
    exponents = (ea[:, :, None] + eb[:, None, :]).reshape(p, ca.size * cb.size)
    product = truncate(0.0, coeffs, exponents, p, degree_cap)

    cross = (
        poly_bound(a.poly) * b.remainder
        + a.remainder * poly_bound(b.poly)
        + a.remainder * b.remainder
    )
    return _widen(TaylorForm(product.poly, product.remainder + cross), inflate)


def int_pow(t: TaylorForm, k: int, degree_cap: int = DEFAULT_DEGREE_CAP, inflate: bool = False) -> TaylorForm:
    if k < 0:
        raise UnsupportedExpressionError("Negative powers are not supported")
    if k == 0:
        return TaylorForm.constant(1.0, t.num_factors)
    result = t
    for _ in range(k - 1):
        result = multiply(result, t, degree_cap, inflate)
    return result


def _derivatives(kind: str, m0: float, order: int) -> List[float]:
    """g^(j)(m0) for j = 0..order."""
    if kind == "exp":
        return [checked_exp(m0)] * (order + 1)
    s, c = math.sin(m0), math.cos(m0)
    cycle = {"sin": [s, c, -s, -c], "cos": [c, -s, -c, s]}.get(kind)
    if cycle is None:
        raise UnsupportedExpressionError(f"Unknown elementary function {kind!r}")
    return [cycle[j % 4] for j in range(order + 1)]


def tf_transcendental(
    kind: str, u: TaylorForm, order: int, degree_cap: int = DEFAULT_DEGREE_CAP, inflate: bool = False,
) -> TaylorForm:
    """
    Enclosure of kind(u) for kind in sin, cos, exp: Taylor polynomial of the
    given order around the midpoint of u's bound, plus a Lagrange remainder.
    """
    if order < 1:
        raise UnsupportedExpressionError("Taylor order must be at least 1")
    b = tf_bound(u)
    m0, r = b.mid, b.rad
    derivs = _derivatives(kind, m0, order)
    result = TaylorForm.constant(derivs[0], u.num_factors)
    if r == 0.0:
        return result

    w = shift(u, -m0)
    power = None
    for j in range(1, order + 1):
        power = w if j == 1 else multiply(power, w, degree_cap, inflate)
        coeff = derivs[j] / math.factorial(j)
        if coeff != 0.0:
            result = add(result, scale(coeff, power), inflate)

    bound_on_derivative = checked_exp(b.hi) if kind == "exp" else 1.0
    lagrange = bound_on_derivative * r ** (order + 1) / math.factorial(order + 1)
    return _widen(TaylorForm(result.poly, result.remainder + Interval(-lagrange, lagrange)), inflate)


def compose(f: Expr, coords: Sequence[TaylorForm], cfg: BoundConfig, num_factors: int) -> TaylorForm:
    """Evaluate f with Taylor-form arithmetic, coords[i] standing for x_{i+1}."""
    cap, order, inflate = cfg.degree_cap, cfg.taylor_order, cfg.inflate

    def visit(node: Expr) -> TaylorForm:
        if isinstance(node, Var):
            if node.index < 1 or node.index > len(coords):
                raise DimensionMismatchError(
                    f"Variable x{node.index} is outside a {len(coords)}-dimensional set"
                )
            return coords[node.index - 1]
        if isinstance(node, Const):
            return TaylorForm.constant(node.value, num_factors)
        if isinstance(node, Neg):
            return scale(-1.0, visit(node.arg))
        if isinstance(node, Add):
            result = visit(node.args[0])
            for arg in node.args[1:]:
                result = add(result, visit(arg), inflate)
            return result
        if isinstance(node, Sub):
            return add(visit(node.left), scale(-1.0, visit(node.right)), inflate)
        if isinstance(node, Mul):
            result = visit(node.args[0])
            for arg in node.args[1:]:
                result = multiply(result, visit(arg), cap, inflate)
            return result
        if isinstance(node, Pow):
            return int_pow(visit(node.base), node.exponent, cap, inflate)
        if isinstance(node, Div):
            return scale(1.0 / node.denom, visit(node.num))
        if isinstance(node, Sin):
            return tf_transcendental("sin", visit(node.arg), order, cap, inflate)
        if isinstance(node, Cos):
            return tf_transcendental("cos", visit(node.arg), order, cap, inflate)
        if isinstance(node, Exp):
            return tf_transcendental("exp", visit(node.arg), order, cap, inflate)
        raise UnsupportedExpressionError(f"Unsupported node {type(node).__name__}")

    return visit(f)


def coordinate_forms(Q: PolyZonotope, domain: Domain, degree_cap: int) -> List[TaylorForm]:
    """Coordinates of Q re-parameterised onto the factor box ``domain``."""
    mids = [0.5 * (lo + hi) for lo, hi in domain]
    rads = [0.5 * (hi - lo) for lo, hi in domain]
    sub = core.substitute_affine(Q, mids, rads)
    return [
        truncate(sub.center[i], sub.generators[i], sub.exponents, Q.num_factors, degree_cap)
        for i in range(sub.dim)
    ]


def split_factors(t: TaylorForm, limit: int) -> List[int]:
    """Up to limit 0-based factors with odd-exponent mass, heaviest first; lowest index on ties."""
    if t.poly.num_terms == 0:
        return []
    odd = (t.poly.exponents % 2 == 1).astype(float)
    score = odd @ np.abs(t.coefficients)
    order = np.argsort(-score, kind="stable")
    return [int(k) for k in order[:limit] if score[k] > 0.0]


def split_factor(t: TaylorForm) -> Optional[int]:
    chosen = split_factors(t, 1)
    return chosen[0] if chosen else None


def _bisect(domain: Domain, factors: Sequence[int]) -> List[Domain]:
    """All 2^len(factors) cells from halving each chosen factor's interval."""
    halves = []
    for k in factors:
        lo, hi = domain[k]
        mid = 0.5 * (lo + hi)
        halves.append(((lo, mid), (mid, hi)))
    cells = []
    for choice in itertools.product(*halves):
        cell = list(domain)
        for k, part in zip(factors, choice):
            cell[k] = part
        cells.append(tuple(cell))
    return cells


def split_refine(builder: Callable[[Domain], TaylorForm], cfg: BoundConfig, num_factors: int) -> Interval:
    """
    Bisect factor domains down to cfg.split_depth, halving up to
    cfg.split_fanout factors per level. Each node's bound is its own
    Taylor-form bound intersected with the union of its children's bounds, so a
    deeper split is never wider.
    """

    def refine(domain: Domain, depth: int) -> Interval:
        form = builder(domain)
        here = tf_bound(_widen(form, cfg.inflate))
        if depth == 0:
            return here
        factors = split_factors(form, cfg.split_fanout)
        if not factors:
            return here
        logger.debug("splitting factors", extra={"factors": [k + 1 for k in factors], "depth": depth})
        union = None
        for cell in _bisect(domain, factors):
            part = refine(cell, depth - 1)
            union = part if union is None else union.hull(part)
        tighter = union.intersect(here)
        return here if tighter is None else tighter

    return refine(((-1.0, 1.0),) * num_factors, cfg.split_depth)


def box_zonotope(box: Sequence[Interval]) -> ZPolytope:
    """The box as <mid, diag(rad), (<1>, ..., <n>)>."""
    return ZPolytope.zonotope([iv.mid for iv in box], np.diag([iv.rad for iv in box]))


def _pz_bound(f: Expr, S: ZPolytope, cfg: BoundConfig) -> Interval:
    Q = core.lift_to_pz(S)

    def builder(domain: Domain) -> TaylorForm:
        return compose(f, coordinate_forms(Q, domain, cfg.degree_cap), cfg, Q.num_factors)

    return split_refine(builder, cfg, Q.num_factors)


def _bound_by_method(f: Expr, S: ZPolytope, cfg: BoundConfig) -> Interval:
    method = BoundMethod(cfg.method)
    logger.debug("bounding expression", extra={"method": method.value, "p": S.num_factors})
    if method is BoundMethod.IA_BOX:
        return eval_interval(f, core.interval_hull(S), inflate=cfg.inflate)
    if method is BoundMethod.TM_BOX:
        return _pz_bound(f, box_zonotope(core.interval_hull(S)), cfg)
    return _pz_bound(f, S, cfg)


def _check_finite(result: Interval) -> Interval:
    if not (math.isfinite(result.lo) and math.isfinite(result.hi)):
        raise RangeOverflowError(f"Range bound [{result.lo}, {result.hi}] is not finite")
    return result


def bound(f: Expr, S: ZPolytope, cfg: Optional[BoundConfig] = None) -> Interval:
    cfg = cfg or BoundConfig()
    if max_variable(f) > S.dim:
        raise DimensionMismatchError(
            f"Expression uses x{max_variable(f)} but the set has dimension {S.dim}"
        )
    try:
        result = _bound_by_method(f, S, cfg)
    except OverflowError as exc:
        raise RangeOverflowError(f"Range bound overflows the float range: {exc}") from exc
    return _check_finite(result)


def sample_range(f: Expr, S: ZPolytope, n: int = DEFAULT_SAMPLES, seed: int = 0) -> Interval:
    """Inner approximation of f(S) from uniformly sampled factor values."""
    if max_variable(f) > S.dim:
        raise DimensionMismatchError(
            f"Expression uses x{max_variable(f)} but the set has dimension {S.dim}"
        )
    rng = np.random.default_rng(seed)
    alphas = rng.uniform(-1.0, 1.0, size=(n, S.num_factors))
    points = S.center + core.monomial_values(S, alphas) @ S.generators.T
    with np.errstate(over="ignore", invalid="ignore"):
        values = np.broadcast_to(eval_point(f, points), (n,))
    if not np.all(np.isfinite(values)):
        raise RangeOverflowError("Sampled values overflow the float range")
    return Interval(float(values.min()), float(values.max()))
