"""
Closed-form set operations on Z-representations.

None of these regularize their result: sizes follow the construction exactly
and callers use core.regularize when they want a compact set.
"""

from typing import Sequence, Tuple

import numpy as np

from errors import DimensionMismatchError
from models import IndexList, ZPolytope

Block = Tuple[np.ndarray, Sequence[IndexList]]


def _shift(exponents: Sequence[IndexList], offset: int) -> Tuple[IndexList, ...]:
    return tuple(tuple(k + offset for k in idx) for idx in exponents)


def _append(exponents: Sequence[IndexList], factor: int) -> Tuple[IndexList, ...]:
    return tuple(tuple(idx) + (factor,) for idx in exponents)


def _check_dims(P1: ZPolytope, P2: ZPolytope):
    if P1.dim != P2.dim:
        raise DimensionMismatchError(f"Dimensions differ: {P1.dim} and {P2.dim}")


def merge_concat(center: Sequence[float], first: Block, second: Block, num_factors: int) -> ZPolytope:
    """<c, [G1, G2], (E1, E2)> for two blocks already sharing one factor numbering."""
    center = np.asarray(center, dtype=float).reshape(-1)
    g1, e1 = first
    g2, e2 = second
    g1 = np.asarray(g1, dtype=float).reshape(center.size, -1) if np.size(g1) else np.zeros((center.size, 0))
    g2 = np.asarray(g2, dtype=float).reshape(center.size, -1) if np.size(g2) else np.zeros((center.size, 0))
    if g1.shape[0] != center.size or g2.shape[0] != center.size:
        raise DimensionMismatchError("Generator blocks do not match the center dimension")
    return ZPolytope(center, np.hstack([g1, g2]), tuple(e1) + tuple(e2), num_factors)


def linear_map(M, P: ZPolytope) -> ZPolytope:
    M = np.atleast_2d(np.asarray(M, dtype=float))
    if M.shape[1] != P.dim:
        raise DimensionMismatchError(
            f"Matrix with {M.shape[1]} columns cannot map a {P.dim}-dimensional set"
        )
    return ZPolytope(M @ P.center, M @ P.generators, P.exponents, P.num_factors)


def minkowski_sum(P1: ZPolytope, P2: ZPolytope) -> ZPolytope:
    _check_dims(P1, P2)
    return merge_concat(
        P1.center + P2.center,
        (P1.generators, P1.exponents),
        (P2.generators, _shift(P2.exponents, P1.num_factors)),
        P1.num_factors + P2.num_factors,
    )


def convex_hull(P1: ZPolytope, P2: ZPolytope) -> ZPolytope:
    """
    conv(P1, P2) with one new factor p = p1 + p2 + 1 playing the role of the
    convex-combination weight:

        <(c1 + c2)/2, [c1 - c2, G1, G1, G2, -G2]/2, ((p), E1, E1^p, E2', E2'^p)>

    where E2' shifts P2's factors by p1 and ^p appends factor p to every list.
    """
    _check_dims(P1, P2)
    p = P1.num_factors + P2.num_factors + 1
    e2 = _shift(P2.exponents, P1.num_factors)

    first_g = 0.5 * np.column_stack([P1.center - P2.center, P1.generators, P1.generators])
    first_e = ((p,),) + P1.exponents + _append(P1.exponents, p)
    second_g = 0.5 * np.hstack([P2.generators, -P2.generators])
    second_e = e2 + _append(e2, p)

    return merge_concat(0.5 * (P1.center + P2.center), (first_g, first_e), (second_g, second_e), p)
