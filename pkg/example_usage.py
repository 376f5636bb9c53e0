"""
Example usage of the zonoset library
"""

from pathlib import Path

import core
import rangebound
from complexity import rep_size_h, zono_point_complexity
from convert import v_to_z, z_to_v
from file_utils import parse_expr, parse_vpoly, parse_zpoly, read_text, serialize_vpoly
from models import BoundMethod
from schemas import BoundConfig
from setops import convex_hull, minkowski_sum

FIXTURES = Path(__file__).parent / "fixtures"

def load_fixture(name: str) -> str:
    return read_text(str(FIXTURES / name))

def example_vertices():
    """Example: vertices of a set given in Z-representation"""
    P = parse_zpoly(load_fixture("ex1.zpoly"))
    V = z_to_v(P)
    print("Vertices of the two-factor set:")
    print(serialize_vpoly(V))
    return V

def example_round_trip():
    """Example: hexagon to Z-representation and back"""
    V = parse_vpoly(load_fixture("hexagon.vpoly"))
    Z = v_to_z(V)
    print("Hexagon in Z-representation:", core.size_stats(Z).as_text())
    back = z_to_v(Z)
    print("Recovered vertices:", back.num_vertices)
    return Z, back

def example_set_operations():
    """Example: Minkowski sum and convex hull bookkeeping"""
    P = parse_zpoly(load_fixture("ex1.zpoly"))
    total = minkowski_sum(P, P)
    hull = convex_hull(P, P)
    print("P + P:", core.size_stats(total).as_text())
    print("conv(P, P):", core.size_stats(hull).as_text())
    regular, _ = core.regularize(hull)
    print("conv(P, P) regularized:", core.size_stats(regular).as_text())
    return total, hull

def example_complexity():
    """Example: convex hull of a 20-dimensional zonotope and a point"""
    row = zono_point_complexity(20, 20)
    print(f"N_Z = {row.n_z}, N_H of the hypercube case = {rep_size_h(20, 77)}")
    return row

def example_range_bounding():
    """Example: the three bounding methods on the same function and set"""
    f = parse_expr(load_fixture("ex4.expr"))
    P = parse_zpoly(load_fixture("ex4.zpoly"))
    print("Sampled range:", rangebound.sample_range(f, P))
    results = {}
    for method in BoundMethod:
        results[method] = rangebound.bound(f, P, BoundConfig(method=method))
        print(f"bound with {method.value}:", results[method])
    return results

def main():
    print("zonoset examples")
    print("================")
    example_vertices()
    example_round_trip()
    example_set_operations()
    example_complexity()
    example_range_bounding()

if __name__ == "__main__":
    main()
