"""
Dynamics of ((z + a)/(1 + conj(a) z))**2 and zero ladders of iterates.

Inside the cardioid Q = 0 the map has an attracting fixed point in the
disk; outside, the attraction moves to the circle. The zero ladders show
the matching behaviour of sum (1 - |z_j|).
"""

import numpy as np

from hardyscale.blaschke import FiniteBlaschke
from hardyscale.dynamics import (bound_pair, cardioid_radius, classify_square_example,
                                 sandwich_check, square_example_map, zero_tail_sum)


def main():
    print(f"cardioid crosses the positive axis at r = {cardioid_radius(0.0):.6f}")
    for a in (0.0, 0.2 + 0.1j, 0.5, 0.6):
        rep = classify_square_example(a)
        att = rep.attracting[0]
        print(f"a = {a!s:>10}: Q = {rep.Q:+.4f}, attracting fixed point {att.z:.4f} "
              f"({att.location}, |multiplier| {abs(att.multiplier):.3f}), "
              f"iterates of 0 tend to {rep.limit_of_iterates:.4f}")

    bp = bound_pair(0.5, 1)
    print(f"g(0.5) = {bp.g(0.5):.6f}, g'(1) = {bp.g_prime_at_one()}, h'(1) = {bp.h_prime_at_one()}")
    for lv in sandwich_check(0.5, 1, 4):
        print(f"level {lv.level}: {lv.count:3d} zeros, moduli in [{lv.min_modulus:.6f}, "
              f"{lv.max_modulus:.6f}], bounds [{lv.lower:.6f}, {lv.upper:.6f}]")

    inside = zero_tail_sum(FiniteBlaschke([0.5], nu=1), 6)
    print("interior fixed point, increments of sum(1-|z|):", np.round(inside.increments, 3))
    outside = zero_tail_sum(square_example_map(0.6), 5)
    print(f"boundary attraction (a = 0.6): gaps 1-|B_n(0)| shrink by {outside.gap_ratio():.3f} "
          f"per step, increments {np.round(outside.increments, 4)}")


if __name__ == "__main__":
    main()
