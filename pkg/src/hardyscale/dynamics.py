"""
Fixed points and zero distribution of iterated Blaschke products.

The worked family is ``B(z) = ((z + a)/(1 + conj(a) z))**2``. Its fixed
points solve the cubic

    conj(a)**2 z**3 + (2 conj(a) - 1) z**2 - (2a - 1) z - a**2 = 0,

and with ``a = t + iu``, ``s = t**2 + u**2`` the sign of

    Q = 27 s**2 - 18 s + 8 t - 1

decides whether one of them lies inside the disk (Q < 0) or all three lie
on the circle (Q > 0). The zero set ``Q = 0`` is a cardioid with its cusp
at ``t = 1/3``.

The module also carries the modulus bounds ``g = psi^-1``, ``h = phi^-1``
for zeros of the iterates of ``F(z) = z (z**k - a**k)/(1 - conj(a)**k z**k)``
and tail sums ``sum (1 - |z_j|)`` over zero ladders.
"""

import csv
import io
import json
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .blaschke import FiniteBlaschke, evaluate, preimages, zero_ladder
from .errors import InvalidInputError, NumericalFailureError, ResourceError
from .numerics import poly_roots

__all__ = [
    "square_example_map", "fixed_point_cubic", "discriminant_Q",
    "FixedPoint", "FixedPointReport", "classify_square_example",
    "ResultantReport", "multiplier_resultant", "resultant_R", "resultant_R1",
    "p_polynomial", "sign_variations", "cardioid_radius", "cardioid_curve",
    "BoundPair", "bound_pair", "fold_map", "sandwich_check",
    "TailReport", "zero_tail_sum", "orbit", "cardioid_csv", "bounds_csv",
]

Q_BOUNDARY_TOL = 1e-6
LOCATION_TOL = 1e-8
ATTRACT_TOL = 1e-9
FIXED_POINT_TOL = 1e-9


def _check_param(a):
    a = complex(a)
    if not np.isfinite(a) or abs(a) >= 1:
        raise InvalidInputError(f"parameter must satisfy |a| < 1, got {a}")
    return a


def square_example_map(a):
    """``((z + a)/(1 + conj(a) z))**2`` as a FiniteBlaschke (stored zero -a)."""
    a = _check_param(a)
    return FiniteBlaschke([-a], [2])


def fixed_point_cubic(a):
    """Coefficients, low to high, of the fixed-point cubic."""
    a = complex(a)
    ac = a.conjugate()
    return np.array([-a * a, 1 - 2 * a, 2 * ac - 1, ac * ac])


def discriminant_Q(a):
    a = complex(a)
    t = a.real
    s = t * t + a.imag * a.imag
    return 27 * s * s - 18 * s + 8 * t - 1


def _multiplier(a, z):
    # B'(z) = 2 (z + a)(1 - |a|^2)/(1 + conj(a) z)^3
    return 2 * (z + a) * (1 - abs(a) ** 2) / (1 + np.conj(a) * z) ** 3


def orbit(B, z0=0j, n=200):
    """``z0, B(z0), B(B(z0)), ...`` (n + 1 values)."""
    out = np.empty(int(n) + 1, dtype=complex)
    z = complex(z0)
    out[0] = z
    for j in range(1, n + 1):
        z = complex(evaluate(B, z))
        out[j] = z
    return out


@dataclass(frozen=True)
class FixedPoint:
    z: complex
    location: str
    multiplier: complex
    attracting: bool

    def to_dict(self):
        return {
            "z": {"re": self.z.real, "im": self.z.imag},
            "location": self.location,
            "multiplier": {"re": self.multiplier.real, "im": self.multiplier.imag},
            "attracting": self.attracting,
        }


@dataclass(frozen=True)
class FixedPointReport:
    """
    Fixed points of ``((z + a)/(1 + conj(a) z))**2``.

    ``status`` is ``"ok"`` or ``"cardioid"`` (|Q| <= 1e-6, where the
    classification rests on the computed roots alone). ``consistent``
    records whether sign(Q) agrees with the interior count;
    ``limit_matches`` whether 200 iterations from 0 landed within 1e-6 of
    the attracting fixed point.
    """

    a: complex
    Q: float
    fixed_points: list
    limit_of_iterates: complex
    limit_matches: bool
    consistent: bool
    status: str = "ok"

    @property
    def interior(self):
        return [p for p in self.fixed_points if p.location == "interior"]

    @property
    def boundary(self):
        return [p for p in self.fixed_points if p.location == "boundary"]

    @property
    def attracting(self):
        return [p for p in self.fixed_points if p.attracting]

    def to_dict(self):
        return {
            "a": {"re": self.a.real, "im": self.a.imag},
            "Q": self.Q,
            "fixed_points": [p.to_dict() for p in self.fixed_points],
            "limit_of_iterates": {"re": self.limit_of_iterates.real,
                                  "im": self.limit_of_iterates.imag},
            "limit_matches": self.limit_matches,
            "consistent": self.consistent,
            "status": self.status,
        }

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)


def _location(z):
    r = abs(z)
    if r < 1 - LOCATION_TOL:
        return "interior"
    if abs(r - 1) <= LOCATION_TOL:
        return "boundary"
    return "exterior"


def classify_square_example(a, n_iter=200):
    """
    Fixed points, multipliers and classification for the squared factor.

    All roots of the cubic are reported, including the one outside the
    closed disk (the mirror image ``1/conj(z)`` of the interior one) when
    Q < 0. Attraction is decided by ``|B'(z)| < 1 - 1e-9`` for points of the
    closed disk; the exterior mirror point carries the conjugate multiplier
    and attracts only on the far side of the circle, so it is never flagged.

    Raises
    ------
    NumericalFailureError
        A computed root misses ``B(z) = z`` by more than 1e-9.
    """
    a = _check_param(a)
    Q = float(discriminant_Q(a))
    B = square_example_map(a)
    roots = poly_roots(fixed_point_cubic(a))
    pts = []
    for z in sorted(roots, key=lambda r: (abs(r), np.angle(r))):
        z = complex(z)
        loc = _location(z)
        w = complex(evaluate(B, z))
        if abs(w - z) > FIXED_POINT_TOL * max(1.0, abs(z)) ** 2:
            raise NumericalFailureError(f"fixed point residual {abs(w - z):.2e} at z={z}")
        m = complex(_multiplier(a, z))
        pts.append(FixedPoint(z, loc, m, loc != "exterior" and abs(m) < 1 - ATTRACT_TOL))
    status = "ok"
    if abs(Q) <= Q_BOUNDARY_TOL:
        status = "cardioid"
        warnings.warn(f"a={a} lies on the cardioid (Q={Q:.2e}); classification by roots only",
                      RuntimeWarning, stacklevel=2)
    n_int = sum(p.location == "interior" for p in pts)
    n_bd = sum(p.location == "boundary" for p in pts)
    if status == "ok":
        consistent = (n_int == 1) if Q < 0 else (n_int == 0 and n_bd == 3)
    else:
        consistent = True
    limit = complex(orbit(B, 0j, n_iter)[-1])
    att = [p for p in pts if p.attracting]
    matches = len(att) == 1 and abs(limit - att[0].z) <= 1e-6
    return FixedPointReport(a, Q, pts, limit, bool(matches), bool(consistent), status)


def resultant_R(a):
    """Coefficients, low to high, of the multiplier polynomial R(w)."""
    a = complex(a)
    t = a.real
    s = t * t + a.imag * a.imag
    return np.array([(s - 1) ** 2, 2 * (3 * s + 1) * (s - 1),
                     12 * s * s - 4 * s + 8 * t, 8 * s * (s - 1)])


def resultant_R1(a):
    """Coefficients, low to high, of ``R1(w) = R(1 + w)``."""
    a = complex(a)
    t = a.real
    s = t * t + a.imag * a.imag
    Q = 27 * s * s - 18 * s + 8 * t - 1
    return np.array([Q, 2 * Q, 4 * (9 * s * s - 7 * s + 2 * t), 8 * s * (s - 1)])


def p_polynomial(a):
    """
    Coefficients, low to high, of the cubic in x whose real roots are the
    real parts of the unimodular fixed points. Verification oracle only.
    """
    a = complex(a)
    t, u = a.real, a.imag
    s = t * t + u * u
    c3 = 4 * s * s
    c2 = 8 * t ** 3 + 8 * t * u * u - 4 * t * t + 4 * u * u
    c1 = (-3 * t ** 4 - 6 * t * t * u * u - 3 * u ** 4 - 4 * t ** 3 + 12 * t * u * u
          + 6 * t * t + 2 * u * u - 4 * t + 1)
    c0 = -((t * t + 2 * t * u - u * u + 2 * t - 2 * u - 1)
           * (t * t - 2 * t * u - u * u + 2 * t + 2 * u - 1))
    return np.array([c0, c1, c2, c3])


def sign_variations(coeffs, tol=0.0):
    """Number of sign changes in a real coefficient sequence (zeros skipped)."""
    c = [float(v) for v in np.real(coeffs) if abs(v) > tol]
    return sum(1 for x, y in zip(c, c[1:]) if x * y < 0)


@dataclass(frozen=True)
class ResultantReport:
    a: complex
    Q: float
    R: np.ndarray
    roots: np.ndarray
    R1: np.ndarray
    r1_sign_variations: int
    max_reciprocal_error: float
    root_above_one: bool


def multiplier_resultant(a, tol=1e-6):
    """
    Roots of R(w) checked against reciprocal multipliers.

    Each root w must satisfy ``|w B'(z) - 1| <= tol`` for some fixed point
    z; when Q > 0, R must have a real root above 1.

    Raises
    ------
    InvalidInputError
        a = 0, where the resultant prefactor vanishes.
    NumericalFailureError
        A check fails.
    """
    a = _check_param(a)
    if a == 0:
        raise InvalidInputError("multiplier resultant needs a != 0")
    R = resultant_R(a)
    roots = poly_roots(R)
    fps = poly_roots(fixed_point_cubic(a))
    mults = _multiplier(a, fps)
    err = 0.0
    for w in roots:
        err = max(err, float(np.min(np.abs(w * mults - 1))))
    if err > tol:
        raise NumericalFailureError(f"R root misses every reciprocal multiplier by {err:.2e}")
    Q = float(discriminant_Q(a))
    above = bool(np.any((np.abs(roots.imag) <= 1e-8 * np.maximum(1, np.abs(roots)))
                        & (roots.real > 1)))
    if Q > 0 and not above:
        raise NumericalFailureError("Q > 0 but R has no real root above 1")
    R1 = resultant_R1(a)
    return ResultantReport(a, Q, R, roots, R1, sign_variations(R1), err, above)


def _cardioid_q(r, alpha):
    # 27 r^4 - 18 r^2 + 8 r cos(alpha) - 1 rewritten around the cusp r = 1/3
    return (3 * r - 1) ** 3 * (r + 1) - 16 * r * np.sin(alpha / 2) ** 2


def cardioid_radius(alpha):
    """
    Radius r in (0, 1] with ``27 r**4 - 18 r**2 + 8 r cos(alpha) - 1 = 0``.

    At alpha = pi the root is r = 1 exactly (the quartic factors as
    ``(r - 1)(3r + 1)**3``).
    """
    alpha = float(alpha)
    lo, hi = 0.0, 1.0
    if _cardioid_q(hi, alpha) <= 0:
        return 1.0
    return float(brentq(_cardioid_q, lo, hi, args=(alpha,), xtol=1e-15, maxiter=200))


def cardioid_curve(n_samples=256):
    """
    ``n_samples`` points (t, u) on ``Q = 0``, one per angle
    ``2 pi (j + 1/2)/n`` (midpoints keep clear of the point (-1, 0) where
    the curve touches the circle).
    """
    n = int(n_samples)
    if n < 16:
        raise InvalidInputError("cardioid needs at least 16 samples")
    alpha = 2 * np.pi * (np.arange(n) + 0.5) / n
    r = np.array([cardioid_radius(al) for al in alpha])
    return np.stack([r * np.cos(alpha), r * np.sin(alpha)], axis=1)


def _psi(r, rho, k):
    c = rho ** k
    rk = r ** k
    return r * (rk + c) / (1 + rk * c)


def _phi(r, rho, k):
    c = rho ** k
    rk = r ** k
    return r * (rk - c) / (1 - rk * c)


def _bisect_inverse(f, t, lo, hi):
    """Bisection run until the bracket stops shrinking (full double precision)."""
    t = np.asarray(t, dtype=float)
    lo = np.full(t.shape, float(lo))
    hi = np.full(t.shape, float(hi))
    if np.any(f(lo) > t) or np.any(f(hi) < t):
        raise NumericalFailureError("bisection does not bracket the target")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if np.all((mid == lo) | (mid == hi)):
            break
        below = f(mid) < t
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class BoundPair:
    """
    Modulus bounds for preimages under ``F(z) = z (z**k - a**k)/(1 - conj(a)**k z**k)``.

    ``g`` inverts ``psi(r) = r (r**k + rho**k)/(1 + r**k rho**k)`` on [0, 1]
    and ``h`` inverts ``phi(r) = r (r**k - rho**k)/(1 - r**k rho**k)`` on
    [rho, 1]. Both are computed by bisection to full double precision.
    """

    rho: float
    k: int

    def __post_init__(self):
        if not 0 < self.rho < 1:
            raise InvalidInputError("need 0 < |a| < 1")
        if int(self.k) != self.k or self.k < 1:
            raise InvalidInputError("k must be a positive integer")

    def _check_t(self, t):
        t = np.asarray(t, dtype=float)
        if np.any((t < 0) | (t > 1)) or not np.all(np.isfinite(t)):
            raise InvalidInputError("bounds are defined on [0, 1]")
        return t

    def psi(self, r):
        return _psi(np.asarray(r, dtype=float), self.rho, self.k)

    def phi(self, r):
        return _phi(np.asarray(r, dtype=float), self.rho, self.k)

    def g(self, t):
        t = self._check_t(t)
        out = _bisect_inverse(self.psi, t, 0.0, 1.0)
        out = np.where(t == 1, 1.0, np.where(t == 0, 0.0, out))
        return out if out.ndim else float(out)

    def h(self, t):
        t = self._check_t(t)
        out = _bisect_inverse(self.phi, t, self.rho, 1.0)
        out = np.where(t == 1, 1.0, out)
        return out if out.ndim else float(out)

    def g_n(self, t, n):
        for _ in range(int(n)):
            t = self.g(t)
        return t

    def h_n(self, t, n):
        for _ in range(int(n)):
            t = self.h(t)
        return t

    def g_prime_at_one(self):
        c = self.rho ** self.k
        return 1 / (1 + self.k * (1 - c) / (1 + c))

    def h_prime_at_one(self):
        c = self.rho ** self.k
        return 1 / (1 + self.k * (1 + c) / (1 - c))


def bound_pair(a_modulus, k):
    return BoundPair(float(a_modulus), int(k))


def fold_map(a, k):
    """``z (z**k - a**k)/(1 - conj(a)**k z**k)``: zero at 0 plus the k-th roots of a**k."""
    a = _check_param(a)
    k = int(k)
    if k < 1:
        raise InvalidInputError("k must be a positive integer")
    if a == 0:
        return FiniteBlaschke.monomial(k + 1)
    zs = a * np.exp(2j * np.pi * np.arange(k) / k)
    return FiniteBlaschke(zs, nu=1)


@dataclass(frozen=True)
class SandwichLevel:
    level: int
    count: int
    min_modulus: float
    max_modulus: float
    lower: float
    upper: float
    strict: bool
    closed: bool


def sandwich_check(a, k, n_max, cap=8192, closed_tol=1e-9):
    """
    Compare ladder zero moduli with ``(g_n(|a|), h_n(|a|))``.

    For n = 1 .. n_max the new zeros at level n + 1 are tested against the
    n-fold bounds. ``strict`` is the open-interval test; ``closed`` allows
    ``closed_tol`` of slack. Both bounds are attained (for instance the
    real preimages of a real ``a`` when k = 1), so ``strict`` can fail by
    rounding while ``closed`` holds.
    """
    a = _check_param(a)
    if a == 0:
        raise InvalidInputError("need 0 < |a| < 1")
    F = fold_map(a, k)
    lad = zero_ladder(F, int(n_max) + 1, cap=cap)
    bp = bound_pair(abs(a), k)
    out = []
    lo, hi = abs(a), abs(a)
    for n in range(1, int(n_max) + 1):
        lo, hi = bp.g(lo), bp.h(hi)
        r, m = lad.moduli(n)
        rmin, rmax = float(r.min()), float(r.max())
        out.append(SandwichLevel(n + 1, int(m.sum()), rmin, rmax, float(lo), float(hi),
                                 bool(rmin > lo and rmax < hi),
                                 bool(rmin >= lo - closed_tol and rmax <= hi + closed_tol)))
    return out


@dataclass(frozen=True)
class TailReport:
    """
    Per-level increments of ``sum (1 - |z_j|)`` and the gaps ``1 - |F_n(0)|``.

    ``mode`` is ``"ladder"`` (new zeros of ``F_n/F_{n-1}`` when ``F(0) = 0``)
    or ``"iterates"`` (all zeros of ``F_n``, found as ``F^-1`` of the zeros
    of ``F_{n-1}``, when the origin is not fixed).
    """

    increments: np.ndarray
    partial_sums: np.ndarray
    origin_gaps: np.ndarray
    mode: str
    counts: list = field(default_factory=list)

    def gap_ratio(self, floor=1e-12):
        """Median ratio of successive origin gaps while they exceed ``floor``."""
        g = self.origin_gaps
        keep = g > floor
        g = g[keep]
        if g.size < 3:
            return float("nan")
        return float(np.median(g[1:] / g[:-1]))


def zero_tail_sum(F, n_max, cap=4096, n_orbit=60):
    """Increments of ``sum (1 - |z_j|)`` level by level, with multiplicity."""
    n_max = int(n_max)
    if n_max < 1:
        raise InvalidInputError("n_max must be positive")
    if F.domain != "disk":
        raise InvalidInputError("tail sums are defined for disk products")
    inc, counts = [], []
    if F.nu >= 1:
        mode = "ladder"
        lad = zero_ladder(F, n_max, cap=cap)
        for z, m in lad.levels:
            inc.append(float(np.sum(m * (1 - np.abs(z)))))
            counts.append(int(m.sum()))
    else:
        mode = "iterates"
        if F.degree ** n_max > cap:
            raise ResourceError(f"degree {F.degree}**{n_max} exceeds cap {cap}")
        z, m = F.zeros.copy(), F.mults.copy()
        for n in range(n_max):
            if n:
                z, m = preimages(F, z, m)
            inc.append(float(np.sum(m * (1 - np.abs(z)))))
            counts.append(int(m.sum()))
    gaps = 1 - np.abs(orbit(F, 0j, n_orbit)[1:])
    inc = np.array(inc)
    return TailReport(inc, np.cumsum(inc), gaps, mode, counts)


def cardioid_csv(n_samples=256):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t", "u"])
    for t, u in cardioid_curve(n_samples):
        w.writerow([repr(float(t)), repr(float(u))])
    return buf.getvalue()


def bounds_csv(a_modulus, k, n_points=101):
    bp = bound_pair(a_modulus, k)
    t = np.linspace(0, 1, int(n_points))
    g, h = bp.g(t), bp.h(t)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t", "g", "h"])
    for row in zip(t, g, h):
        w.writerow([repr(float(v)) for v in row])
    return buf.getvalue()
