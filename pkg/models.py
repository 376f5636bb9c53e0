from dataclasses import dataclass, field
from typing import Iterable, Sequence, Tuple
import enum
import math

import numpy as np

from errors import DimensionMismatchError, InvalidSetError

# Factor indices attached to one generator, 1-based, sorted ascending
IndexList = Tuple[int, ...]


class VertexOrder(str, enum.Enum):
    INPUT = "input"
    GREEDY = "greedy"


class BoundMethod(str, enum.Enum):
    IA_BOX = "ia-box"
    TM_BOX = "tm-box"
    PZ = "pz"


class BoundKind(str, enum.Enum):
    EXACT = "exact"
    UPPER = "upper"
    LOWER = "lower"


class ComplexityCase(str, enum.Enum):
    ZONO_POINT = "zono-point"
    ZONO_ZONO = "zono-zono"


def _frozen_array(values, ndim: int) -> np.ndarray:
    array = np.array(values, dtype=float)
    if array.ndim != ndim:
        raise DimensionMismatchError(f"Expected a {ndim}-dimensional array, got shape {array.shape}")
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class Interval:
    """Closed real interval [lo, hi]."""

    lo: float
    hi: float

    def __post_init__(self):
        lo, hi = float(self.lo), float(self.hi)
        if math.isnan(lo) or math.isnan(hi) or lo > hi:
            raise InvalidSetError([f"Interval bounds out of order: [{lo}, {hi}]"])
        # Normalises -0.0 so printed bounds stay deterministic
        object.__setattr__(self, "lo", lo + 0.0)
        object.__setattr__(self, "hi", hi + 0.0)

    @classmethod
    def point(cls, value: float) -> "Interval":
        return cls(value, value)

    @classmethod
    def hull_of(cls, values: Iterable[float]) -> "Interval":
        values = list(values)
        return cls(min(values), max(values))

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def mid(self) -> float:
        return 0.5 * (self.lo + self.hi)

    @property
    def rad(self) -> float:
        return 0.5 * (self.hi - self.lo)

    def contains(self, value, tol: float = 0.0) -> bool:
        if isinstance(value, Interval):
            return self.lo - tol <= value.lo and value.hi <= self.hi + tol
        return self.lo - tol <= value <= self.hi + tol

    def hull(self, other: "Interval") -> "Interval":
        return Interval(min(self.lo, other.lo), max(self.hi, other.hi))

    def intersect(self, other: "Interval"):
        """Intersection, or None when the intervals are disjoint."""
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        if lo > hi:
            return None
        return Interval(lo, hi)

    def inflate(self, rel: float) -> "Interval":
        pad = rel * max(abs(self.lo), abs(self.hi))
        return Interval(self.lo - pad, self.hi + pad)

    def scale(self, factor: float) -> "Interval":
        a, b = factor * self.lo, factor * self.hi
        return Interval(min(a, b), max(a, b))

    def __add__(self, other):
        if isinstance(other, Interval):
            return Interval(self.lo + other.lo, self.hi + other.hi)
        return Interval(self.lo + other, self.hi + other)

    __radd__ = __add__

    def __neg__(self):
        return Interval(-self.hi, -self.lo)

    def __sub__(self, other):
        if isinstance(other, Interval):
            return Interval(self.lo - other.hi, self.hi - other.lo)
        return Interval(self.lo - other, self.hi - other)

    def __mul__(self, other):
        if not isinstance(other, Interval):
            return self.scale(other)
        products = (self.lo * other.lo, self.lo * other.hi, self.hi * other.lo, self.hi * other.hi)
        return Interval(min(products), max(products))

    __rmul__ = __mul__

    def __repr__(self):
        return f"[{self.lo!r}, {self.hi!r}]"


@dataclass(frozen=True, eq=False)
class VPolytope:
    """Vertex representation; ``vertices`` holds one vertex per row (q x n)."""

    vertices: np.ndarray

    def __post_init__(self):
        vertices = _frozen_array(self.vertices, 2)
        if vertices.shape[0] < 1 or vertices.shape[1] < 1:
            raise InvalidSetError(["A V-polytope needs at least one vertex of positive dimension"])
        object.__setattr__(self, "vertices", vertices)

    @property
    def dim(self) -> int:
        return self.vertices.shape[1]

    @property
    def num_vertices(self) -> int:
        return self.vertices.shape[0]


@dataclass(frozen=True, eq=False)
class ZPolytope:
    """
    Z-representation <c, G, E>: ``generators`` is n x h (one column per
    generator) and ``exponents[i]`` lists the factors multiplying column i.

    Generators with an empty index list are constant and are folded into the
    center on construction.
    """

    center: np.ndarray
    generators: np.ndarray
    exponents: Tuple[IndexList, ...]
    num_factors: int

    def __post_init__(self):
        center = np.array(self.center, dtype=float).reshape(-1)
        if center.size < 1:
            raise DimensionMismatchError("Center must have positive dimension")
        generators = np.array(self.generators, dtype=float)
        if generators.size == 0:
            generators = np.zeros((center.size, 0))
        if generators.ndim == 1:
            generators = generators.reshape(center.size, -1)
        if generators.ndim != 2 or generators.shape[0] != center.size:
            raise DimensionMismatchError(
                f"Generator matrix of shape {generators.shape} does not match dimension {center.size}"
            )
        exponents = tuple(tuple(int(k) for k in idx) for idx in self.exponents)
        if len(exponents) != generators.shape[1]:
            raise InvalidSetError(
                [f"{generators.shape[1]} generators but {len(exponents)} index lists"]
            )

        constant = [i for i, idx in enumerate(exponents) if len(idx) == 0]
        if constant:
            center = center + generators[:, constant].sum(axis=1)
            keep = [i for i, idx in enumerate(exponents) if len(idx) > 0]
            generators = generators[:, keep]
            exponents = tuple(exponents[i] for i in keep)

        center.setflags(write=False)
        generators.setflags(write=False)
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "generators", generators)
        object.__setattr__(self, "exponents", exponents)
        object.__setattr__(self, "num_factors", int(self.num_factors))

    @classmethod
    def point(cls, v: Sequence[float]) -> "ZPolytope":
        return cls(center=v, generators=np.zeros((len(v), 0)), exponents=(), num_factors=0)

    @classmethod
    def zonotope(cls, center: Sequence[float], generators) -> "ZPolytope":
        """<c, G, (<1>, ..., <m>)> with one independent factor per generator."""
        generators = np.array(generators, dtype=float).reshape(len(center), -1)
        m = generators.shape[1]
        return cls(center, generators, tuple((i + 1,) for i in range(m)), m)

    @property
    def dim(self) -> int:
        return self.center.size

    @property
    def num_generators(self) -> int:
        return self.generators.shape[1]

    @property
    def num_entries(self) -> int:
        return sum(len(idx) for idx in self.exponents)

    def equals(self, other: "ZPolytope", tol: float = 0.0) -> bool:
        return (
            self.num_factors == other.num_factors
            and self.exponents == other.exponents
            and self.generators.shape == other.generators.shape
            and self.center.shape == other.center.shape
            and np.allclose(self.center, other.center, rtol=0.0, atol=tol)
            and np.allclose(self.generators, other.generators, rtol=0.0, atol=tol)
        )


@dataclass(frozen=True, eq=False)
class PolyZonotope:
    """
    Sparse polynomial zonotope: center + sum_i prod_k alpha_k^E[k, i] * G[:, i].

    ``exponents`` is p x h. Terms with equal exponent columns are merged in
    first-occurrence order, all-zero columns are folded into the center and
    terms whose coefficients are all exactly zero are dropped.
    """

    center: np.ndarray
    generators: np.ndarray
    exponents: np.ndarray
    num_factors: int = field(default=None)

    def __post_init__(self):
        center = np.array(self.center, dtype=float).reshape(-1)
        n = center.size
        generators = np.array(self.generators, dtype=float).reshape(n, -1)
        h = generators.shape[1]
        p = self.num_factors
        exponents = np.array(self.exponents, dtype=np.int64)
        if p is None:
            p = exponents.shape[0] if exponents.ndim == 2 else 0
        exponents = exponents.reshape(p, h)
        if np.any(exponents < 0):
            raise InvalidSetError(["Polynomial zonotope exponents must be nonnegative"])

        center, generators, exponents = _compact_terms(center, generators, exponents)
        for array in (center, generators, exponents):
            array.setflags(write=False)
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "generators", generators)
        object.__setattr__(self, "exponents", exponents)
        object.__setattr__(self, "num_factors", int(p))

    @property
    def dim(self) -> int:
        return self.center.size

    @property
    def num_terms(self) -> int:
        return self.generators.shape[1]

    def degrees(self) -> np.ndarray:
        return self.exponents.sum(axis=0)


def _compact_terms(center: np.ndarray, generators: np.ndarray, exponents: np.ndarray):
    p, h = exponents.shape
    if h == 0:
        return center, generators, exponents

    constant = ~exponents.any(axis=0)
    if constant.any():
        center = center + generators[:, constant].sum(axis=1)
        generators = generators[:, ~constant]
        exponents = exponents[:, ~constant]
        h = generators.shape[1]
        if h == 0:
            return center, generators, exponents

    unique, first, inverse = np.unique(exponents, axis=1, return_index=True, return_inverse=True)
    inverse = np.asarray(inverse).reshape(-1)
    if unique.shape[1] < h:
        order = np.argsort(first, kind="stable")
        rank = np.empty_like(order)
        rank[order] = np.arange(order.size)
        exponents = unique[:, order]
        slot = rank[inverse]
        merged = np.zeros((generators.shape[0], order.size))
        for row in range(generators.shape[0]):
            merged[row] = np.bincount(slot, weights=generators[row], minlength=order.size)
        generators = merged

    nonzero = np.any(generators != 0.0, axis=0)
    if not nonzero.all():
        generators = generators[:, nonzero]
        exponents = exponents[:, nonzero]
    return center, np.ascontiguousarray(generators), np.ascontiguousarray(exponents)
