"""
Independent oracle values, frozen to ``frozen.json``.

Every value here is computed without the package: mpmath for Gamma and
products at 40 digits, sympy for exact algebra. Run from the repository
root to regenerate::

    python tests/oracles/generate.py
"""

import json
import os

import mpmath as mp
import sympy as sp

mp.mp.dps = 40
HERE = os.path.dirname(os.path.abspath(__file__))


def c(z):
    z = complex(z)
    return [z.real, z.imag]


def gamma_values():
    pts = [1, 0.5, 1 + 1j, -2.5 + 0.3j, 3.7 - 4.2j, -17.25 + 9j, 42 + 0.5j, 0.1 - 30j,
           50 + 50j, -49.5 + 50j, -49.7 - 0.2j, 49.9 - 50j, -0.5 - 50j, 1e-3 + 1e-3j]
    return [{"z": c(p), "gamma": c(mp.gamma(mp.mpc(p)))} for p in pts]


def g_n_values():
    # defining product over j <= n, summed in log form by mpmath nsum
    out = []
    for n, x in [(0, 0.3), (2, -1.7), (-3, 4.25), (1, 0.5 + 0.25j), (5, 2.0 + 1.5j)]:
        x = mp.mpc(x)

        def term(j):
            return mp.log(((j - 1j) / (j + 1j)) * ((x - j - 1j) / (x - j + 1j)))

        s = mp.nsum(term, [-mp.inf, n])
        # log branch jumps are integer multiples of 2 pi i and vanish under exp
        out.append({"n": n, "x": c(x), "G_n": c(mp.exp(s))})
    return out


def phi_values():
    pts = [0.0, 1.5, -2.25, 0.3 + 0.7j, 12.0, -40.5 + 0.1j]
    return [{"x": c(p), "phi": c(mp.gamma(mp.mpc(p) - 1 + 1j)
                                / (mp.sqrt(mp.pi) * mp.gamma(mp.mpc(p) - 1j)))} for p in pts]


def G_values():
    pts = [0.0, 0.5, 3.0, 0.25, -1.3 + 0.4j, 0.7 + 2.0j]
    return [{"x": c(p), "G": c(mp.sin(mp.pi * (1j - p)) / mp.sin(mp.pi * (1j + p)))} for p in pts]


def dynamics_values():
    r = sp.symbols("r", positive=True)
    g05 = sp.nsolve(r**2 + sp.Rational(1, 4) * r - sp.Rational(1, 2), r, 0.6, prec=30)
    g05_exact = (-sp.Rational(1, 4) + sp.sqrt(sp.Rational(33, 16))) / 2
    rho, k = sp.Rational(1, 2), 1
    gp = 1 / (1 + k * (1 - rho**k) / (1 + rho**k))
    hp = 1 / (1 + k * (1 + rho**k) / (1 - rho**k))
    # cardioid radius at angle pi/2: 27 r^4 - 18 r^2 - 1 = 0
    r2 = (9 + sp.sqrt(108)) / 27
    # fixed points at a = 1/2: z^3 = 1; multipliers 2(z + a)(1 - a^2)/(1 + a z)^3
    a = sp.Rational(1, 2)
    z = sp.symbols("z")
    fps = sp.solve(sp.conjugate(a)**2 * z**3 + (2 * a - 1) * z**2 - (2 * a - 1) * z - a**2, z)
    mults = [sp.N(2 * (f + a) * (1 - a**2) / (1 + a * f)**3, 30) for f in fps]
    return {
        "g_half_k1": float(g05_exact),
        "g_half_k1_nsolve": float(g05),
        "g_prime_one": float(gp),
        "h_prime_one": float(hp),
        "cardioid_radius_half_pi": float(sp.sqrt(r2)),
        "Q_half": float(27 * a**4 - 18 * a**2 + 8 * a - 1),
        "Q_06": float(27 * sp.Rational(3, 5)**4 - 18 * sp.Rational(3, 5)**2
                      + 8 * sp.Rational(3, 5) - 1),
        "fixed_points_half": [c(complex(sp.N(f, 30))) for f in fps],
        "multipliers_half": [c(complex(m)) for m in mults],
    }


def mt_values():
    # <z, phi_0> with a = 1/2: reproducing kernel gives sqrt(1 - a^2) * a
    a = mp.mpf(1) / 2
    return {"z_against_phi0_half": float(mp.sqrt(1 - a**2) * a)}


def main():
    d = {
        "gamma": gamma_values(),
        "G_n": g_n_values(),
        "phi": phi_values(),
        "G": G_values(),
        "dynamics": dynamics_values(),
        "mt": mt_values(),
    }
    with open(os.path.join(HERE, "frozen.json"), "w") as fh:
        json.dump(d, fh, indent=1, sort_keys=True)
        fh.write("\n")


if __name__ == "__main__":
    main()
