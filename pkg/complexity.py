"""
Representation-complexity calculators: how many numbers the V-, H- and
Z-representations need for the polytope families compared in the literature
(convex hull of a zonotope with a point, and of two zonotopes).
"""

from math import comb
from typing import Iterable, List, Optional

from errors import ComplexityOverflowError, InvalidSetError
from models import BoundKind, ComplexityCase, ZPolytope
from schemas import ComplexityRow, SizeStats
from setops import convex_hull

# Configuration
INT64_MAX = 2 ** 63 - 1


def _checked(value: int) -> int:
    if value > INT64_MAX:
        raise ComplexityOverflowError(f"Count {value} does not fit in a 64-bit integer")
    return value


def _binom(n: int, k: int) -> int:
    if k < 0 or n < 0 or k > n:
        return 0
    return _checked(comb(n, k))


def _require(condition: bool, message: str):
    if not condition:
        raise InvalidSetError([message])


def rep_size_v(n: int, q: int) -> int:
    _require(n >= 1 and q >= 1, "n and q must be positive")
    return _checked(n * q)


def rep_size_h(n: int, facets: int) -> int:
    _require(n >= 1 and facets >= 1, "n and the facet count must be positive")
    return _checked((n + 1) * facets)


def rep_size_z(n: int, h: int, mu: int) -> int:
    return _checked(n * (h + 1) + mu)


def zonotope_vertex_count(n: int, m: int) -> int:
    """Vertices of an n-dimensional zonotope with m generators in general position."""
    _require(n >= 1 and m >= 1, "n and m must be positive")
    return _checked(2 * sum(_binom(m - 1, i) for i in range(min(n, m))))


def hypercube_pyramid_facets(n: int) -> int:
    """Facets of conv(hypercube, point beyond one facet on its axis)."""
    _require(n >= 2, "n must be at least 2")
    return (2 * n - 1) + 2 * (n - 1)


def zono_point_complexity(n: int, m: int) -> ComplexityRow:
    _require(n >= 2 and m >= 1, "Need n >= 2 and m >= 1")
    n_v = _checked(n * (zonotope_vertex_count(n, m) + 1))
    facets = 2 * _binom(m, n - 1) - 1 + 2 * _binom(m, n - 2)
    n_h = _checked((n + 1) * facets)
    n_z = _checked(2 * n + 2 * m * n + 3 * m + 1)
    return ComplexityRow(
        case=ComplexityCase.ZONO_POINT, n=n, m=m, n_v=n_v, n_h=n_h, n_z=n_z,
        bound_kind=(BoundKind.UPPER, BoundKind.UPPER, BoundKind.EXACT),
    )


def zono_zono_complexity(n: int, m1: int, m2: int) -> ComplexityRow:
    _require(n >= 2 and m1 >= 1 and m2 >= 1, "Need n >= 2, m1 >= 1 and m2 >= 1")
    m_min = min(m1, m2)
    n_v = _checked(n * zonotope_vertex_count(n, m_min))
    n_h = _checked(2 * _binom(m_min, n - 1) * (n + 1))
    n_z = _checked(2 * n * (m1 + m2 + 1) + 3 * m1 + 3 * m2 + 1)
    return ComplexityRow(
        case=ComplexityCase.ZONO_ZONO, n=n, m1=m1, m2=m2, n_v=n_v, n_h=n_h, n_z=n_z,
        bound_kind=(BoundKind.LOWER, BoundKind.LOWER, BoundKind.EXACT),
    )


def alg1_size_predictor(q: int, dim: int = 1) -> SizeStats:
    """
    Sizes of the V->Z tree for q vertices, assuming a perfect binary tree of
    depth ceil(log2 q). Exact for powers of two, an upper bound otherwise.
    ``dim`` only enters n_z.
    """
    _require(q >= 1, "q must be positive")
    k = (q - 1).bit_length()
    p = 2 ** k - 1
    h = (4 ** k - 1) // 3
    numerator = 4 ** k * (3 * k + 2) - 2
    assert numerator % 18 == 0, "mu must be integral for integer tree depth"
    mu = numerator // 18
    return SizeStats(p=p, h=h, mu=mu, n_z=rep_size_z(dim, h, mu))


def smallest_representation(row: ComplexityRow) -> str:
    """Which representation needs the fewest values ('V', 'H' or 'Z'); ties favour V, then H."""
    sizes = {"V": row.n_v, "H": row.n_h, "Z": row.n_z}
    return min(sizes, key=lambda key: (sizes[key], "VHZ".index(key)))


def emit_table(
    case: ComplexityCase,
    n_values: Iterable[int],
    m_values: Optional[Iterable[int]] = None,
    m1_values: Optional[Iterable[int]] = None,
    m2_values: Optional[Iterable[int]] = None,
) -> List[ComplexityRow]:
    """Rows for every parameter combination; n outermost, then m (or m1, m2)."""
    case = ComplexityCase(case)
    rows = []
    for n in n_values:
        if case is ComplexityCase.ZONO_POINT:
            rows.extend(zono_point_complexity(n, m) for m in (m_values or []))
        else:
            for m1 in (m1_values or []):
                rows.extend(zono_zono_complexity(n, m1, m2) for m2 in (m2_values or []))
    return rows


def zono_point_polytope(center, generators, point) -> ZPolytope:
    """conv(<c, G, (<1>..<m>)>, <d, [], ()>) built with the closed-form hull."""
    return convex_hull(ZPolytope.zonotope(center, generators), ZPolytope.point(point))


def zono_zono_polytope(c1, g1, c2, g2) -> ZPolytope:
    return convex_hull(ZPolytope.zonotope(c1, g1), ZPolytope.zonotope(c2, g2))
