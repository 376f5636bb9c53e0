"""
Conversions between vertex representation and Z-representation.

v_to_z builds the set bottom-up as a binary tree of pairwise convex hulls;
z_to_v evaluates the set at every hypercube vertex and keeps the extreme points.
"""

import logging
from typing import List, Sequence

import numpy as np

import core
from errors import InvalidSetError
from lp import in_convex_hull
from models import VertexOrder, VPolytope, ZPolytope
from setops import convex_hull

logger = logging.getLogger(__name__)

# Configuration
DEDUP_TOLERANCE = 1e-9


def greedy_nearest_order(vertices: np.ndarray) -> List[int]:
    """Nearest-neighbour chain from the lexicographically smallest vertex."""
    q = vertices.shape[0]
    start = int(np.lexsort(vertices.T[::-1])[0])
    order = [start]
    unused = np.ones(q, dtype=bool)
    unused[start] = False
    while unused.any():
        last = vertices[order[-1]]
        distances = np.linalg.norm(vertices - last, axis=1)
        distances[~unused] = np.inf
        # argmin returns the lowest index on ties
        nxt = int(np.argmin(distances))
        order.append(nxt)
        unused[nxt] = False
    return order


def v_to_z(P: VPolytope, ordering: VertexOrder = VertexOrder.INPUT) -> ZPolytope:
    vertices = P.vertices
    if vertices.shape[0] == 0:
        raise InvalidSetError(["Cannot convert an empty vertex list"])
    if VertexOrder(ordering) is VertexOrder.GREEDY:
        vertices = vertices[greedy_nearest_order(vertices)]

    nodes = [ZPolytope.point(v) for v in vertices]
    level = 0
    while len(nodes) > 1:
        paired = [convex_hull(nodes[i], nodes[i + 1]) for i in range(0, len(nodes) - 1, 2)]
        if len(nodes) % 2 == 1:
            paired.append(nodes[-1])
        nodes = paired
        level += 1
        logger.debug("V->Z tree level", extra={"level": level, "nodes": len(nodes)})
    return nodes[0]


def dedup_points(points, tol: float = DEDUP_TOLERANCE) -> np.ndarray:
    """Keep first occurrences; drop points within tol (Euclidean) of a kept one."""
    points = np.asarray(points, dtype=float)
    if points.shape[0] == 0:
        return points
    kept = [points[0]]
    for point in points[1:]:
        if np.min(np.linalg.norm(np.asarray(kept) - point, axis=1)) > tol:
            kept.append(point)
    return np.asarray(kept)


def _cross(o, a, b) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def hull_2d(points) -> np.ndarray:
    """Monotone-chain convex hull, counterclockwise from the lexicographic minimum."""
    pts = sorted(set(map(tuple, np.asarray(points, dtype=float).reshape(-1, 2))))
    if len(pts) <= 2:
        return np.asarray(pts).reshape(-1, 2)

    lower = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    return np.asarray(hull)


def _remove_redundant(points: np.ndarray) -> np.ndarray:
    n = points.shape[1]
    if n == 1:
        return np.unique(np.array([points.min(axis=0), points.max(axis=0)]), axis=0)
    if n == 2:
        return hull_2d(points)
    kept = list(range(points.shape[0]))
    for i in range(points.shape[0]):
        others = [j for j in kept if j != i]
        if others and in_convex_hull(points[i], points[others]):
            kept.remove(i)
    return points[kept]


def z_to_v(P: ZPolytope, tol: float = DEDUP_TOLERANCE, cap: int = core.ENUMERATION_CAP) -> VPolytope:
    """
    Vertices of the convex hull of P. Every vertex of P is the image of a
    hypercube vertex, so the candidates are the 2^p evaluations.
    """
    candidates = core.enumerate_vertex_points(P, cap)
    candidates = candidates[np.lexsort(candidates.T[::-1])]
    candidates = dedup_points(candidates, tol)
    logger.debug("Z->V candidates", extra={"p": P.num_factors, "candidates": len(candidates)})
    return VPolytope(_remove_redundant(candidates))


def same_vertex_set(a, b, tol: float = DEDUP_TOLERANCE) -> bool:
    """True when both point lists match one-to-one within tol."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        return False
    for point in a:
        if np.min(np.linalg.norm(b - point, axis=1)) > tol:
            return False
    for point in b:
        if np.min(np.linalg.norm(a - point, axis=1)) > tol:
            return False
    return True
