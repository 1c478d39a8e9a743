import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hardyscale.blaschke import FiniteBlaschke
from hardyscale.errors import IllConditionedError, InvalidInputError
from hardyscale.numerics import TorusSignal, inner_product, poly_from_roots, torus_points, winding_number
from hardyscale.unwinding import (expansion_to_json, negative_frequency_energy, reconstruct,
                                  stage_zeros, unwind, weiss_factor)

N = 4096
Z = torus_points(N)


def synthetic(rng, n_zeros, n_outer=3):
    """Known Blaschke factor times a polynomial with roots outside the closed disk."""
    a = 0.85 * np.sqrt(rng.uniform(size=n_zeros)) * np.exp(2j * np.pi * rng.uniform(size=n_zeros))
    B = FiniteBlaschke(a)
    r = rng.uniform(1.5, 3, n_outer) * np.exp(2j * np.pi * rng.uniform(size=n_outer))
    P = np.polyval(poly_from_roots(r)[::-1], Z)
    return a, B, TorusSignal(B(Z) * P)


def test_weiss_factor_of_z():
    B, G = weiss_factor(TorusSignal(Z))
    assert np.max(np.abs(B.samples - Z)) < 1e-12
    assert np.max(np.abs(G.samples - 1)) < 1e-12


def test_weiss_factor_of_linear():
    F = TorusSignal(Z - 0.5)
    B, G = weiss_factor(F)
    ref = (Z - 0.5) / (1 - 0.5 * Z)
    c = np.mean(B.samples / ref)
    assert abs(abs(c) - 1) < 1e-12
    assert np.max(np.abs(B.samples - c * ref)) < 1e-10
    assert np.max(np.abs(np.abs(G.samples) - np.abs(1 - 0.5 * Z))) < 1e-12
    assert np.allclose(stage_zeros(B), [0.5], atol=1e-10)


def test_weiss_factor_jensen():
    B, G = weiss_factor(TorusSignal(2 + Z))
    assert abs(G.mean() - 2) <= 1e-8
    assert np.max(np.abs(B.samples - B.samples[0])) < 1e-12


@given(st.integers(0, 2 ** 31 - 1), st.integers(1, 5))
def test_weiss_factor_recovers_known_factor(seed, n):
    rng = np.random.default_rng(seed)
    a, Bk, F = synthetic(rng, n)
    B, G = weiss_factor(F)
    assert np.max(np.abs(np.abs(B.samples) - 1)) <= 1e-6
    fmax = np.max(np.abs(F.samples))
    assert np.max(np.abs(F.samples - B.samples * G.samples)) <= 1e-8 * fmax
    assert winding_number(B) == n
    assert winding_number(G) == 0
    found = stage_zeros(B)
    d = np.abs(found[:, None] - a[None, :])
    assert np.max(d.min(axis=0)) <= 1e-6


def test_weiss_factor_boundary_zero():
    F = TorusSignal((Z - 1) * (Z - 0.3j))
    B, G = weiss_factor(F)
    assert winding_number(B) == 1
    assert np.max(np.abs(np.abs(B.samples) - 1)) <= 1e-6
    assert np.max(np.abs(F.samples - B.samples * G.samples)) <= 1e-8 * np.max(np.abs(F.samples))


def test_weiss_factor_ill_conditioned():
    s = np.ones(N, dtype=complex)
    s[: N // 20] = 0
    with pytest.raises(IllConditionedError):
        weiss_factor(TorusSignal(s))
    with pytest.raises(IllConditionedError):
        weiss_factor(TorusSignal(np.zeros(N)))


def test_unwind_monomial():
    for m in (1, 3):
        e = unwind(TorusSignal(Z ** m))
        assert e.n_stages == 1
        assert abs(e.coefficients[0] - 1) < 1e-12
        assert np.max(np.abs(e.stage_factors[0].samples - Z ** m)) < 1e-10
        assert e.residual.norm() < 1e-10


def test_unwind_z_plus_z2():
    e = unwind(TorusSignal(Z + Z ** 2), K=4)
    assert np.max(np.abs(e.coefficients - [1, 1])) <= 1e-8
    P = e.cumulative_products()
    assert np.max(np.abs(P[0].samples - Z)) < 1e-8
    assert np.max(np.abs(P[1].samples - Z ** 2)) < 1e-8
    assert np.max(np.abs(reconstruct(e).samples - (Z + Z ** 2))) < 1e-12
    one = reconstruct(e, 1, include_residual=False)
    assert abs(TorusSignal(Z + Z ** 2 - one.samples).norm() - 1) < 1e-8


def random_polynomial(rng, deg=32):
    c = (rng.normal(size=deg + 1) + 1j * rng.normal(size=deg + 1)) / np.sqrt(np.arange(1, deg + 2))
    return TorusSignal.from_coefficients(c, N)


@settings(max_examples=6)
@given(st.integers(0, 2 ** 31 - 1))
def test_unwind_invariants(seed):
    F = random_polynomial(np.random.default_rng(seed))
    e = unwind(F, K=16)
    nrm = F.norm() ** 2
    assert abs(e.energy_defect()) <= 1e-6 * nrm
    for B in e.stage_factors:
        assert np.max(np.abs(np.abs(B.samples) - 1)) <= 1e-6
    # B_k(0) is the mean over the working grid the factors live on
    for B in e.work_factors[1:]:
        assert abs(B.mean()) <= 1e-6
    T = e.terms(fine=True)
    for i in range(len(T)):
        for j in range(i):
            assert abs(inner_product(T[i], T[j])) <= 1e-6 * nrm
    rn = np.array(e.residual_norms)
    assert np.all(np.diff(rn) <= 1e-12)
    assert np.max(np.abs(reconstruct(e).samples - F.samples)) <= 1e-7 * F.norm()


def test_unwind_rejects_non_analytic():
    f = TorusSignal(np.conj(Z))
    assert negative_frequency_energy(f) == 1.0
    with pytest.raises(InvalidInputError):
        unwind(f)
    with pytest.raises(InvalidInputError):
        unwind(TorusSignal(Z), K=0)


def test_expansion_json():
    import json
    e = unwind(TorusSignal(Z + Z ** 2), K=4)
    d = json.loads(expansion_to_json(e, K=4, with_zeros=True))
    assert len(d["coefficients"]) == 4
    assert abs(d["energy_ledger"]["defect"]) < 1e-12
    assert {"input_energy", "coefficient_energy", "residual_energy"} <= set(d["energy_ledger"])
    assert len(d["stage_zero_estimates"]) == e.n_stages


def test_stage_zeros_ordering():
    a = np.array([0.6j, -0.2, 0.2, 0.5])
    B = TorusSignal(FiniteBlaschke(a)(Z))
    found = stage_zeros(B)
    assert np.allclose(found, [0.2, -0.2, 0.5, 0.6j], atol=1e-10)
