"""
Operations on single Z-representations: validation, pointwise evaluation,
lifting to polynomial zonotopes, regularization and the exact interval hull.
"""

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from math import comb
from typing import Dict, List, Sequence, Tuple

import numpy as np

from errors import DimensionMismatchError, DomainError, EnumerationCapError
from models import Interval, PolyZonotope, ZPolytope
from schemas import SizeStats

logger = logging.getLogger(__name__)

# Configuration
ENUMERATION_CAP = 20
ZERO_TOLERANCE = 1e-12
CHUNK_BITS = 14  # 2^14 hypercube vertices per enumeration chunk
THREADS_ENV = "ZONOSET_THREADS"


def thread_count() -> int:
    """Worker count from ZONOSET_THREADS; 0 or unset means one per CPU."""
    raw = os.environ.get(THREADS_ENV, "").strip()
    try:
        value = int(raw) if raw else 0
    except ValueError:
        value = 0
    if value <= 0:
        value = os.cpu_count() or 1
    return value


def validate(P: ZPolytope) -> List[str]:
    """Return every violated invariant of P; empty when P is well-formed."""
    violations = []
    if P.num_factors < 0:
        violations.append(f"Number of factors must be nonnegative, got {P.num_factors}")
    if len(P.exponents) != P.num_generators:
        violations.append(
            f"{P.num_generators} generators but {len(P.exponents)} index lists"
        )
    if not np.all(np.isfinite(P.center)) or not np.all(np.isfinite(P.generators)):
        violations.append("Center and generators must be finite")

    for i, idx in enumerate(P.exponents, start=1):
        if len(idx) == 0:
            violations.append(f"Generator {i}: empty index list")
            continue
        if len(set(idx)) != len(idx):
            violations.append(f"Generator {i}: repeated factor index in {list(idx)}")
        elif any(b <= a for a, b in zip(idx, idx[1:])):
            violations.append(f"Generator {i}: index list {list(idx)} is not strictly increasing")
        out_of_range = [k for k in idx if k < 1 or k > P.num_factors]
        if out_of_range:
            violations.append(
                f"Generator {i}: factor index {out_of_range[0]} outside 1..{P.num_factors}"
            )
    return violations


def _check_alpha(alpha, num_factors: int, allow_outside: bool) -> np.ndarray:
    alpha = np.asarray(alpha, dtype=float).reshape(-1)
    if alpha.size != num_factors:
        raise DimensionMismatchError(
            f"Expected {num_factors} factor values, got {alpha.size}"
        )
    if not np.all(np.isfinite(alpha)):
        raise DomainError("Factor values must be finite")
    if not allow_outside and np.any(np.abs(alpha) > 1.0):
        raise DomainError("Factor values must lie in [-1, 1]")
    return alpha


def monomial_values(P: ZPolytope, alphas: np.ndarray) -> np.ndarray:
    """Variable-part values for a batch of factor vectors (N x p) -> N x h."""
    values = np.ones((alphas.shape[0], P.num_generators))
    for i, idx in enumerate(P.exponents):
        values[:, i] = np.prod(alphas[:, [k - 1 for k in idx]], axis=1)
    return values


def evaluate(P: ZPolytope, alpha: Sequence[float], allow_outside: bool = False) -> np.ndarray:
    alpha = _check_alpha(alpha, P.num_factors, allow_outside)
    if P.num_generators == 0:
        return P.center.copy()
    return P.center + P.generators @ monomial_values(P, alpha.reshape(1, -1))[0]


def evaluate_pz(Q: PolyZonotope, alpha: Sequence[float], allow_outside: bool = False) -> np.ndarray:
    alpha = _check_alpha(alpha, Q.num_factors, allow_outside)
    if Q.num_terms == 0:
        return Q.center.copy()
    monomials = np.prod(alpha.reshape(-1, 1) ** Q.exponents, axis=0)
    return Q.center + Q.generators @ monomials


def lift_to_pz(P: ZPolytope) -> PolyZonotope:
    exponents = np.zeros((P.num_factors, P.num_generators), dtype=np.int64)
    for i, idx in enumerate(P.exponents):
        exponents[[k - 1 for k in idx], i] = 1
    return PolyZonotope(P.center, P.generators, exponents, P.num_factors)


def regularize(P: ZPolytope) -> Tuple[ZPolytope, Dict[int, int]]:
    """
    Merge generators sharing a variable part, drop zero generators and
    renumber the remaining factors in order.

    Returns the regular set and the map old factor index -> new factor index.
    """
    merged: Dict[Tuple[int, ...], np.ndarray] = {}
    for i, idx in enumerate(P.exponents):
        key = tuple(sorted(idx))
        if key in merged:
            merged[key] = merged[key] + P.generators[:, i]
        else:
            merged[key] = P.generators[:, i].copy()

    kept = [(key, g) for key, g in merged.items() if np.max(np.abs(g)) > ZERO_TOLERANCE]
    used = sorted({k for key, _ in kept for k in key})
    mapping = {old: new for new, old in enumerate(used, start=1)}

    exponents = tuple(tuple(mapping[k] for k in key) for key, _ in kept)
    if kept:
        generators = np.column_stack([g for _, g in kept])
    else:
        generators = np.zeros((P.dim, 0))

    logger.debug(
        "regularized set",
        extra={"h_before": P.num_generators, "h_after": len(kept), "p_after": len(used)},
    )
    return ZPolytope(P.center, generators, exponents, len(used)), mapping


def hypercube_vertices(num_factors: int, start: int = 0, stop: int = None) -> np.ndarray:
    """Vertices start..stop-1 of [-1, 1]^p; factor 1 is the least significant bit."""
    stop = 2 ** num_factors if stop is None else stop
    index = np.arange(start, stop, dtype=np.int64)
    bits = (index[:, None] >> np.arange(num_factors, dtype=np.int64)) & 1
    return 2.0 * bits - 1.0


def _check_cap(num_factors: int, cap: int):
    if num_factors > cap:
        raise EnumerationCapError(num_factors, cap)


def _chunk_points(P: ZPolytope, start: int, stop: int) -> np.ndarray:
    alphas = hypercube_vertices(P.num_factors, start, stop)
    return P.center + monomial_values(P, alphas) @ P.generators.T


def _chunks(num_factors: int):
    total = 2 ** num_factors
    size = 2 ** CHUNK_BITS
    return [(start, min(start + size, total)) for start in range(0, total, size)]


def enumerate_vertex_points(P: ZPolytope, cap: int = ENUMERATION_CAP) -> np.ndarray:
    """Evaluate P at all 2^p hypercube vertices, in hypercube_vertices order."""
    _check_cap(P.num_factors, cap)
    chunks = _chunks(P.num_factors)
    workers = min(thread_count(), len(chunks))
    logger.debug("enumerating hypercube vertices", extra={"p": P.num_factors, "workers": workers})
    if workers <= 1:
        parts = [_chunk_points(P, start, stop) for start, stop in chunks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda bounds: _chunk_points(P, *bounds), chunks))
    return np.vstack(parts)


def interval_hull(P: ZPolytope, cap: int = ENUMERATION_CAP) -> Tuple[Interval, ...]:
    """Exact axis-aligned bounding box; every coordinate is multilinear in alpha."""
    if P.num_generators == 0:
        return tuple(Interval.point(v) for v in P.center)
    _check_cap(P.num_factors, cap)
    lows = np.full(P.dim, np.inf)
    highs = np.full(P.dim, -np.inf)
    chunks = _chunks(P.num_factors)
    workers = min(thread_count(), len(chunks))

    def extremes(bounds):
        points = _chunk_points(P, *bounds)
        return points.min(axis=0), points.max(axis=0)

    if workers <= 1:
        results = [extremes(bounds) for bounds in chunks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(extremes, chunks))
    for low, high in results:
        lows = np.minimum(lows, low)
        highs = np.maximum(highs, high)
    return tuple(Interval(lo, hi) for lo, hi in zip(lows, highs))


def size_stats(P: ZPolytope) -> SizeStats:
    h = P.num_generators
    mu = P.num_entries
    return SizeStats(p=P.num_factors, h=h, mu=mu, n_z=P.dim * (h + 1) + mu)


def regular_size_bounds(num_factors: int) -> Tuple[int, int]:
    """Largest (h, mu) a regular Z-representation with p factors can have."""
    p = num_factors
    if p == 0:
        return 0, 0
    return 2 ** p - 1, p * 2 ** (p - 1)


def substitute_affine(Q: PolyZonotope, mids: Sequence[float], rads: Sequence[float]) -> PolyZonotope:
    """Re-parameterise alpha_k = mids[k] + rads[k] * beta_k (binomial expansion)."""
    mids = np.asarray(mids, dtype=float)
    rads = np.asarray(rads, dtype=float)
    if mids.size != Q.num_factors or rads.size != Q.num_factors:
        raise DimensionMismatchError("Substitution needs one (mid, rad) pair per factor")

    generators = Q.generators
    exponents = Q.exponents
    for k in range(Q.num_factors):
        if mids[k] == 0.0 and rads[k] == 1.0:
            continue
        new_gens, new_exps = [], []
        for i in range(exponents.shape[1]):
            e = int(exponents[k, i])
            for j in range(e + 1):
                weight = comb(e, j) * mids[k] ** (e - j) * rads[k] ** j
                if weight == 0.0:
                    continue
                column = exponents[:, i].copy()
                column[k] = j
                new_gens.append(weight * generators[:, i])
                new_exps.append(column)
        if new_gens:
            generators = np.column_stack(new_gens)
            exponents = np.column_stack(new_exps)
        else:
            generators = np.zeros((Q.dim, 0))
            exponents = np.zeros((Q.num_factors, 0), dtype=np.int64)
        # Keeps the term count bounded between factors
        compact = PolyZonotope(np.zeros(Q.dim), generators, exponents, Q.num_factors)
        generators = np.column_stack([compact.center, compact.generators])
        zero = np.zeros((Q.num_factors, 1), dtype=np.int64)
        exponents = np.hstack([zero, compact.exponents])
    return PolyZonotope(Q.center, generators, exponents, Q.num_factors)
