"""
Dyadic wavelets on the upper half-plane built from Gamma-function products.

G_n is an infinite Blaschke product with zeros j + i, j <= n; through
Gamma it costs two function calls. The generator phi and its dyadic
modulations form an orthonormal system, checked here by quadrature.
"""

import numpy as np

from hardyscale.wavelets import (DyadicWaveletBasis, G_n_eval, G_n_product,
                                 phi_shift_identity_check, wavelet_gram)


def main():
    x = np.array([0.3, -2.0 + 0.5j, 4.0 + 1.0j])
    for n in (-2, 0, 3):
        closed = G_n_eval(n, x)
        prod = G_n_product(n, x, M=10_000)
        raw = G_n_product(n, x, M=10_000, tail=False)
        print(f"n = {n:+d}: |Gamma form - product| = {np.max(np.abs(closed - prod)):.1e} "
              f"(raw truncation {np.max(np.abs(closed - raw)):.1e})")
    print(f"phi shift identity residual: {np.max(phi_shift_identity_check(2, x)):.1e}")

    basis = DyadicWaveletBasis(n_lo=-1, n_hi=1, J=3)
    print(f"tail constant C = {basis.C:.2f}, truncation bound {basis.tail_bound():.1e}")
    G = wavelet_gram(basis)
    print(f"Gram of {G.shape[0]} wavelets: max |G - I| = {np.max(np.abs(G - np.eye(G.shape[0]))):.1e}")


if __name__ == "__main__":
    main()
