"""
Unwinding a signal into orthogonal Blaschke-modulated terms.

Each stage divides out the Blaschke part of what is left, so the terms
a_k B_1...B_k carry increasingly many oscillations while the energy
ledger stays exact.
"""

import numpy as np

from hardyscale import TorusSignal, reconstruct, unwind
from hardyscale.numerics import winding_number

N = 4096


def main():
    rng = np.random.default_rng(0)
    c = (rng.normal(size=17) + 1j * rng.normal(size=17)) / np.arange(1, 18)
    F = TorusSignal.from_coefficients(c, N)
    e = unwind(F, K=10)
    print(f"working grid: {e.work_residual.N} points")
    print(" k   |a_k|      winding(B_1..B_k)   residual norm")
    for k, (a, P, r) in enumerate(zip(e.coefficients, e.cumulative_products(),
                                      e.residual_norms), start=1):
        print(f"{k:2d}  {abs(a):.3e}   {winding_number(P):4d}            {r:.3e}")
    print(f"energy defect {e.energy_defect():.1e}")
    for n in (1, 3, 10):
        err = (reconstruct(e, n, include_residual=False) - F).norm() / F.norm()
        print(f"relative error after {n:2d} terms: {err:.3e}")


if __name__ == "__main__":
    main()
