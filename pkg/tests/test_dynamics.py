import json
import warnings

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from hardyscale.blaschke import FiniteBlaschke
from hardyscale.dynamics import (bound_pair, bounds_csv, cardioid_csv, cardioid_curve,
                                 cardioid_radius, classify_square_example, discriminant_Q,
                                 fixed_point_cubic, fold_map, multiplier_resultant, p_polynomial,
                                 resultant_R, resultant_R1, sandwich_check, sign_variations,
                                 square_example_map, zero_tail_sum)
from hardyscale.errors import InvalidInputError
from hardyscale.numerics import poly_roots


def cx(p):
    return complex(p[0], p[1])


def disk_points(n=20, rmax=0.95):
    t = np.linspace(-rmax, rmax, n)
    a = (t[:, None] + 1j * t[None, :]).ravel()
    return a[np.abs(a) < rmax]


def test_cubic_at_zero_degenerates():
    assert np.allclose(fixed_point_cubic(0), [0, 1, -1, 0])
    r = np.sort(poly_roots(fixed_point_cubic(0)).real)
    assert np.allclose(r, [0, 1])


def test_classify_a_zero():
    rep = classify_square_example(0)
    assert rep.Q == -1
    zs = sorted(rep.fixed_points, key=lambda p: abs(p.z))
    assert abs(zs[0].z) < 1e-15 and zs[0].location == "interior" and zs[0].attracting
    assert abs(zs[0].multiplier) < 1e-15
    assert abs(zs[1].z - 1) < 1e-12 and zs[1].location == "boundary"
    assert abs(zs[1].multiplier - 2) < 1e-12
    assert rep.limit_matches and rep.consistent


def test_classify_a_third_on_cardioid():
    assert abs(discriminant_Q(1 / 3)) <= 1e-12
    with pytest.warns(RuntimeWarning):
        rep = classify_square_example(1 / 3)
    assert rep.status == "cardioid"


def test_classify_a_half_against_frozen(frozen):
    d = frozen["dynamics"]
    rep = classify_square_example(0.5)
    assert abs(rep.Q - d["Q_half"]) < 1e-15
    assert len(rep.boundary) == 3 and not rep.interior
    assert len(rep.attracting) == 1
    for fz, fm in zip(d["fixed_points_half"], d["multipliers_half"]):
        p = min(rep.fixed_points, key=lambda q: abs(q.z - cx(fz)))
        assert abs(p.z - cx(fz)) < 1e-12
        assert abs(p.multiplier - cx(fm)) < 1e-10
    assert abs(rep.attracting[0].z - 1) < 1e-12
    assert rep.limit_matches


def test_report_json():
    d = json.loads(classify_square_example(0.2 + 0.1j).to_json())
    assert {"a", "Q", "fixed_points", "limit_of_iterates"} <= set(d)


@given(st.floats(0, 0.97), st.floats(0, 2 * np.pi))
def test_fixed_point_residuals_and_single_attractor(r, t):
    a = r * np.exp(1j * t)
    if abs(discriminant_Q(a)) <= 1e-3:
        return
    rep = classify_square_example(a)
    B = square_example_map(a)
    for p in rep.fixed_points:
        assert abs(B(p.z) - p.z) <= 1e-9 * max(1, abs(p.z)) ** 2
    assert rep.consistent
    assert len(rep.attracting) == 1


def test_classification_grid():
    for a in disk_points(15):
        if abs(discriminant_Q(a)) > 1e-3:
            assert classify_square_example(a).consistent


def test_p_polynomial_roots_are_real_parts():
    for a in (0.5, 0.6 + 0.2j, -0.3 + 0.8j, 0.9j):
        rep = classify_square_example(a)
        P = p_polynomial(a)
        scale = np.max(np.abs(P))
        for p in rep.boundary:
            assert abs(np.polyval(P[::-1], p.z.real)) <= 1e-6 * scale


def resultant_oracle(t, u):
    """R(w) up to a constant, from sympy's resultant of the cubic and 1 - w B'."""
    z, w = sp.symbols("z w")
    a = t + sp.I * u
    ab = t - sp.I * u
    cubic = ab ** 2 * z ** 3 + (2 * ab - 1) * z ** 2 - (2 * a - 1) * z - a ** 2
    # 1 - w B'(z) cleared of the denominator (1 + conj(a) z)**3
    s = t ** 2 + u ** 2
    lin = sp.expand((1 + ab * z) ** 3 - 2 * w * (z + a) * (1 - s))
    res = sp.Poly(sp.resultant(cubic, lin, z), w)
    return [complex(sp.N(c)) for c in reversed(res.all_coeffs())]


@pytest.mark.parametrize("t,u", [(sp.Rational(1, 2), 0), (sp.Rational(3, 5), sp.Rational(1, 5)),
                                 (sp.Rational(-1, 4), sp.Rational(1, 3))])
def test_resultant_against_sympy(t, u):
    ref = np.array(resultant_oracle(t, u))
    R = resultant_R(complex(float(t), float(u)))
    k = np.argmax(np.abs(R))
    ratio = ref / R
    assert np.max(np.abs(ratio - ratio[k])) <= 1e-10 * abs(ratio[k])


def test_r1_is_shifted_r():
    rng = np.random.default_rng(10)
    for a in 0.9 * rng.uniform(size=5) * np.exp(2j * np.pi * rng.uniform(size=5)):
        R, R1 = resultant_R(a), resultant_R1(a)
        w = rng.normal(size=4)
        assert np.allclose(np.polyval(R[::-1], 1 + w), np.polyval(R1[::-1], w), atol=1e-12)


def test_resultant_small_a_limit():
    rep = multiplier_resultant(1e-6)
    assert abs(rep.R[0] - 1) < 1e-5 and abs(rep.R[1] + 2) < 1e-5
    assert np.min(np.abs(rep.roots - 0.5)) < 1e-5
    with pytest.raises(InvalidInputError):
        multiplier_resultant(0)


def test_resultant_half():
    rep = multiplier_resultant(0.5)
    assert rep.max_reciprocal_error <= 1e-6 and rep.root_above_one
    assert rep.r1_sign_variations == 1


def test_sign_variations():
    assert sign_variations([1, -1, 1]) == 2
    assert sign_variations([1, 0, 2, -3]) == 1


def test_q_positive_sample_one_variation():
    rng = np.random.default_rng(11)
    found = 0
    while found < 20:
        a = np.sqrt(rng.uniform()) * np.exp(2j * np.pi * rng.uniform())
        if abs(a) > 0.99 or discriminant_Q(a) <= 1e-3:
            continue
        rep = multiplier_resultant(a)
        assert rep.r1_sign_variations == 1 and rep.root_above_one
        found += 1


def test_cardioid(frozen):
    assert abs(cardioid_radius(0.0) - 1 / 3) < 1e-15
    assert cardioid_radius(np.pi) == 1.0
    assert abs(cardioid_radius(np.pi / 2) - frozen["dynamics"]["cardioid_radius_half_pi"]) < 1e-14
    pts = cardioid_curve(64)
    s = pts[:, 0] ** 2 + pts[:, 1] ** 2
    assert np.max(np.abs(27 * s ** 2 - 18 * s + 8 * pts[:, 0] - 1)) <= 1e-10
    assert np.all(s < 1)
    assert np.allclose(pts[::-1, 1], -pts[:, 1]) and np.allclose(pts[::-1, 0], pts[:, 0])
    with pytest.raises(InvalidInputError):
        cardioid_curve(8)
    assert cardioid_csv(16).startswith("t,u\n")


def test_bound_pair_values(frozen):
    d = frozen["dynamics"]
    bp = bound_pair(0.5, 1)
    assert bp.g(1.0) == 1 and bp.h(1.0) == 1 and bp.g(0.0) == 0
    assert abs(bp.g(0.5) - d["g_half_k1"]) <= 1e-12
    assert abs(bp.g_prime_at_one() - d["g_prime_one"]) <= 1e-15
    assert abs(bp.h_prime_at_one() - d["h_prime_one"]) <= 1e-15
    # finite differences agree with the closed-form slopes
    e = 1e-6
    assert abs((1 - bp.g(1 - e)) / e - 0.75) < 1e-5
    assert abs((1 - bp.h(1 - e)) / e - 0.25) < 1e-5


@pytest.mark.parametrize("rho,k", [(0.5, 1), (0.5, 3), (0.3, 5), (0.8, 2)])
def test_bound_pair_shape(rho, k):
    bp = bound_pair(rho, k)
    t = np.linspace(0, 1, 1000)
    g = bp.g(t)
    h = bp.h(t)
    assert np.all(g[:-1] < h[:-1])
    assert np.all(np.diff(g) > 0) and np.all(np.diff(h) > 0)
    u = np.linspace(0.05, 0.95, 181)
    for f in (bp.g, bp.h):
        v = f(u)
        assert np.max(v[2:] - 2 * v[1:-1] + v[:-2]) <= 1e-8
    assert bounds_csv(rho, k, 11).startswith("t,g,h\n")


def test_bound_pair_validation():
    with pytest.raises(InvalidInputError):
        bound_pair(1.0, 1)
    with pytest.raises(InvalidInputError):
        bound_pair(0.5, 0)
    with pytest.raises(InvalidInputError):
        bound_pair(0.5, 1).g(1.5)


def test_sandwich_closed_interval():
    for k in (1, 3):
        for lv in sandwich_check(0.5, k, 3):
            assert lv.closed
            assert lv.count == (k + 1) ** lv.level - (k + 1) ** (lv.level - 1)


def test_sandwich_bounds_are_attained():
    # k = 1, real a: the real preimage of h(|a|) has modulus h(h(|a|)) on the nose
    bp = bound_pair(0.5, 1)
    F = fold_map(0.5, 1)
    assert abs(F(-bp.g(0.5)) - 0.5) < 1e-15
    assert abs(F(bp.h(0.5)) - 0.5) < 1e-15


def test_fold_map():
    F = fold_map(0.5, 3)
    assert F.degree == 4 and F.nu == 1
    assert fold_map(0, 2).nu == 3


def test_tail_square():
    rep = zero_tail_sum(FiniteBlaschke.monomial(2), 6)
    assert rep.mode == "ladder"
    assert list(rep.increments) == [2, 2, 4, 8, 16, 32]
    assert np.all(np.diff(rep.partial_sums) > 0)


def test_tail_interior_example():
    rep = zero_tail_sum(FiniteBlaschke([0.5], nu=1), 6)
    inc = rep.increments
    assert np.all(np.diff(rep.partial_sums) > 0)
    assert np.all(np.diff(inc[1:]) >= 0)
    assert rep.counts == [2, 2, 4, 8, 16, 32]


def test_tail_boundary_example(frozen):
    a = 0.6
    assert abs(discriminant_Q(a) - frozen["dynamics"]["Q_06"]) < 1e-14
    rep = zero_tail_sum(square_example_map(a), 5)
    assert rep.mode == "iterates"
    ratio = rep.gap_ratio()
    mult = abs(classify_square_example(a).attracting[0].multiplier)
    assert ratio < 1
    assert abs(ratio - mult) < 1e-3


@settings(max_examples=15)
@given(st.floats(0.1, 0.9), st.floats(0, 2 * np.pi))
def test_denjoy_wolff_limit(r, t):
    a = r * np.exp(1j * t)
    if abs(discriminant_Q(a)) <= 0.05:
        return
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        rep = classify_square_example(a, n_iter=2000)
    assert rep.limit_matches


@pytest.mark.parametrize("k", [1, 3, 5])
def test_upper_bound_attained_at_every_level(k):
    # zeros with w**k > 0 have a preimage on the same ray meeting h exactly
    for lv in sandwich_check(0.5, k, 4 if k < 5 else 3):
        assert abs(lv.max_modulus - lv.upper) <= 4e-16
