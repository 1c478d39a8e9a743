"""
Malmquist-Takenaka coefficients of a signal on the dyadic ring zeros.

A Fourier basis spreads a sharply localized analytic bump over many
modes. Rational functions with zeros placed near the circle adapt to it:
the same number of coefficients captures far more of the energy.
"""

import numpy as np

from hardyscale import MTBasis, TorusSignal, analyze, dyadic_ring_zeros
from hardyscale.mt import project_invariant
from hardyscale.blaschke import FiniteBlaschke

N = 4096


def main():
    # Cauchy bump peaked near z = 1: analytic, localized on the circle
    f = TorusSignal.from_function(lambda z: 0.05 / (1.05 - z), N)
    energy = f.norm() ** 2
    print(f"signal energy {energy:.6f}")

    zeros = dyadic_ring_zeros(4)
    mt_basis = MTBasis(zeros)
    fourier = MTBasis(np.zeros(zeros.size))
    for name, b in (("dyadic rings", mt_basis), ("Fourier", fourier)):
        c = analyze(b, f)
        captured = np.sum(np.abs(c) ** 2) / energy
        print(f"{name:>13}: {b.count} coefficients capture {captured:.4%} of the energy")

    # projection onto u H^2 removes the part of f orthogonal to the invariant subspace
    u = FiniteBlaschke([0.9, 0.5j])
    p = project_invariant(u, f)
    print(f"energy of f inside u H^2: {p.norm() ** 2 / energy:.4%}")


if __name__ == "__main__":
    main()
