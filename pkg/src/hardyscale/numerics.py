"""
Shared numerical kernels.

Uniform sampling of the unit circle, FFT-based analytic projection, a
simultaneous-iteration polynomial root finder, quadrature on the real line
and a Lanczos complex Gamma function.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InvalidInputError, NumericalFailureError

__all__ = [
    "DEFAULT_N", "TorusSignal", "RealLineGrid", "torus_points",
    "analytic_projection", "analytic_completion", "poly_roots",
    "poly_from_roots", "complex_gamma", "gamma", "rgamma", "loggamma",
    "gamma_ratio", "inner_product", "winding_number",
]

DEFAULT_N = 4096


def _is_pow2(n):
    return n >= 1 and (n & (n - 1)) == 0


def torus_points(N):
    """Return the N-th roots of unity ``exp(2*pi*1j*j/N)``, j = 0..N-1."""
    return np.exp(2j * np.pi * np.arange(N) / N)


@dataclass(frozen=True, eq=False)
class TorusSignal:
    """
    N uniform complex samples of a function on the unit circle.

    Sample ``j`` sits at ``exp(2*pi*1j*j/N)``. N must be a power of two
    and at least 4.
    """

    samples: np.ndarray

    def __post_init__(self):
        s = np.array(self.samples, dtype=complex).ravel()
        N = s.size
        if N < 4 or not _is_pow2(N):
            raise InvalidInputError(f"grid length must be a power of two >= 4, got {N}")
        s.setflags(write=False)
        object.__setattr__(self, "samples", s)

    @classmethod
    def from_function(cls, func, N=DEFAULT_N):
        """Sample ``func(z)`` on the N-point circle grid."""
        return cls(func(torus_points(N)))

    @classmethod
    def from_coefficients(cls, coeffs, N=DEFAULT_N):
        """Samples of the polynomial ``sum_k coeffs[k] z**k`` (degree < N)."""
        c = np.zeros(N, dtype=complex)
        coeffs = np.asarray(coeffs, dtype=complex)
        if coeffs.size > N:
            raise InvalidInputError("more coefficients than grid points")
        c[:coeffs.size] = coeffs
        return cls(np.fft.ifft(c) * N)

    @property
    def N(self):
        return self.samples.size

    def points(self):
        return torus_points(self.N)

    def coefficients(self):
        """Discrete Fourier coefficients, index k <-> frequency k (mod N)."""
        return np.fft.fft(self.samples) / self.N

    def norm(self):
        """L2 norm with the normalized measure d(theta)/2pi."""
        return float(np.sqrt(np.mean(np.abs(self.samples) ** 2)))

    def mean(self):
        return complex(np.mean(self.samples))

    def __mul__(self, other):
        if isinstance(other, TorusSignal):
            _check_same_grid(self, other)
            other = other.samples
        return TorusSignal(self.samples * other)

    __rmul__ = __mul__

    def __add__(self, other):
        if isinstance(other, TorusSignal):
            _check_same_grid(self, other)
            other = other.samples
        return TorusSignal(self.samples + other)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, TorusSignal):
            _check_same_grid(self, other)
            other = other.samples
        return TorusSignal(self.samples - other)

    def __truediv__(self, other):
        if isinstance(other, TorusSignal):
            _check_same_grid(self, other)
            other = other.samples
        return TorusSignal(self.samples / other)

    def conj(self):
        return TorusSignal(np.conj(self.samples))


def _check_same_grid(f, g):
    if f.N != g.N:
        raise InvalidInputError(f"grid mismatch: {f.N} vs {g.N}")


@dataclass(frozen=True, eq=False)
class RealLineGrid:
    """
    Quadrature on the real line through ``x = tan(t/2)``.

    The t-grid is the uniform midpoint grid on (-pi, pi), so nodes never
    hit the point at infinity. Rational integrands decaying like 1/x**2
    become smooth periodic functions of t and the rule converges
    spectrally.
    """

    nodes: np.ndarray
    weights: np.ndarray

    @classmethod
    def tan_substitution(cls, M=1024):
        if M < 2:
            raise InvalidInputError("need at least two nodes")
        t = -np.pi + 2 * np.pi * (np.arange(M) + 0.5) / M
        x = np.tan(t / 2)
        w = (np.pi / M) * (1 + x * x)
        x.setflags(write=False)
        w.setflags(write=False)
        return cls(x, w)

    @property
    def M(self):
        return self.nodes.size

    def integrate(self, values):
        return complex(np.sum(self.weights * values))


def analytic_projection(f):
    """
    Orthogonal projection onto H^2 of the circle.

    Fourier coefficients of negative frequency are zeroed. With an even
    grid the Nyquist bin N/2 is ambiguous between +N/2 and -N/2; it is
    treated as negative so the operator stays an exact projection.
    """
    s = np.asarray(f.samples if isinstance(f, TorusSignal) else f, dtype=complex)
    if not np.all(np.isfinite(s)):
        raise InvalidInputError("non-finite samples")
    N = s.size
    c = np.fft.fft(s)
    c[N // 2:] = 0
    return TorusSignal(np.fft.ifft(c))


def analytic_completion(u):
    """
    Boundary values of the analytic function whose real part is ``u``.

    Returns ``u + i*conj_harmonic(u)`` normalized so that the imaginary
    part has zero mean. The Nyquist coefficient is kept once, so the real
    part reproduces ``u`` exactly on the grid.
    """
    u = np.asarray(u, dtype=float)
    N = u.size
    c = np.fft.fft(u)
    c[1:N // 2] *= 2
    c[N // 2 + 1:] = 0
    return np.fft.ifft(c)


def winding_number(samples):
    """Winding number about 0 of a closed curve sampled counterclockwise."""
    s = np.asarray(samples.samples if isinstance(samples, TorusSignal) else samples)
    ph = np.angle(s)
    d = np.diff(np.concatenate([ph, ph[:1]]))
    d = (d + np.pi) % (2 * np.pi) - np.pi
    return int(np.rint(d.sum() / (2 * np.pi)))


def inner_product(f, g, domain="torus", grid=None):
    """
    Inner product <f, g> = integral of f * conj(g).

    ``domain="torus"``: normalized trapezoidal sum (1/N) sum f conj(g).
    ``domain="halfplane"``: weighted sum over a :class:`RealLineGrid`.
    """
    fs = f.samples if isinstance(f, TorusSignal) else np.asarray(f)
    gs = g.samples if isinstance(g, TorusSignal) else np.asarray(g)
    if fs.shape != gs.shape:
        raise InvalidInputError(f"grid mismatch: {fs.shape} vs {gs.shape}")
    if domain == "torus":
        return complex(np.mean(fs * np.conj(gs)))
    if domain == "halfplane":
        if grid is None:
            raise InvalidInputError("halfplane inner product needs a RealLineGrid")
        if grid.M != fs.size:
            raise InvalidInputError(f"grid mismatch: {grid.M} nodes vs {fs.size} samples")
        return complex(np.sum(grid.weights * fs * np.conj(gs)))
    raise InvalidInputError(f"unknown domain {domain!r}")


# ---------------------------------------------------------------------------
# polynomial roots

_DROP_TOL = 1e-14


def poly_from_roots(roots, mults=None):
    """Monic polynomial coefficients (low to high) with the given roots."""
    roots = np.atleast_1d(np.asarray(roots, dtype=complex))
    if mults is not None:
        roots = np.repeat(roots, np.asarray(mults, dtype=int))
    c = np.array([1.0 + 0j])
    for r in roots:
        c = np.concatenate([[0], c]) - r * np.concatenate([c, [0]])
    return c


def _horner(c, z):
    """Value and derivative of polynomials (rows of c, low to high) at z.

    c has shape (m, d+1); z has shape (m, k).
    """
    d = c.shape[1] - 1
    p = np.repeat(c[:, d:d + 1], z.shape[1], axis=1).astype(complex)
    dp = np.zeros_like(p)
    for k in range(d - 1, -1, -1):
        dp = dp * z + p
        p = p * z + c[:, k:k + 1]
    return p, dp


def _initial_guesses(c):
    # circle of radius |c0/cd|^(1/d), bounded by the Cauchy bound
    m, dp1 = c.shape
    d = dp1 - 1
    lead = np.abs(c[:, -1])
    c0 = np.abs(c[:, 0])
    r = np.where(c0 > 0, (c0 / lead) ** (1.0 / d), 0.0)
    cauchy = 1 + np.max(np.abs(c[:, :-1]), axis=1) / lead
    r = np.where(r > 0, np.minimum(r, cauchy), 0.5 * cauchy / d)
    ang = 2 * np.pi * np.arange(d) / d + 0.4
    return r[:, None] * np.exp(1j * ang)[None, :]


def _aberth(c, maxiter=500):
    """Aberth-Ehrlich iteration on a batch of same-degree polynomials."""
    m, dp1 = c.shape
    d = dp1 - 1
    z = _initial_guesses(c)
    if d == 1:
        return (-c[:, 0] / c[:, 1])[:, None]
    active = np.ones(m, dtype=bool)
    eye = np.eye(d, dtype=bool)
    for _ in range(maxiter):
        idx = np.nonzero(active)[0]
        if idx.size == 0:
            break
        za = z[idx]
        p, dp = _horner(c[idx], za)
        diff = za[:, :, None] - za[:, None, :]
        diff[:, eye] = 1.0
        inv = 1.0 / diff
        inv[:, eye] = 0.0
        s = inv.sum(axis=2)
        with np.errstate(divide="ignore", invalid="ignore"):
            w = p / dp
            corr = w / (1 - w * s)
        corr = np.where(p == 0, 0, corr)
        corr = np.where(np.isfinite(corr), corr, 0)
        za = za - corr
        z[idx] = za
        small = np.abs(corr) <= 4e-16 * np.maximum(np.abs(za), 1e-300)
        done = np.all(small | (p == 0), axis=1)
        active[idx[done]] = False
    # one Newton polish where it lowers the residual
    p, dp = _horner(c, z)
    with np.errstate(divide="ignore", invalid="ignore"):
        zn = z - p / dp
    pn, _ = _horner(c, np.where(np.isfinite(zn), zn, z))
    better = np.isfinite(zn) & (np.abs(pn) < np.abs(p))
    return np.where(better, zn, z)


def _strip(coeffs):
    c = np.asarray(coeffs, dtype=complex).ravel()
    if c.size == 0 or not np.all(np.isfinite(c)):
        raise InvalidInputError("coefficients must be a nonempty finite list")
    scale = np.max(np.abs(c))
    if scale == 0:
        raise InvalidInputError("all-zero polynomial has no well-defined roots")
    keep = np.nonzero(np.abs(c) > _DROP_TOL * scale)[0]
    c = c[:keep[-1] + 1]
    nz = np.nonzero(c)[0]
    n_zero = int(nz[0])
    return c[n_zero:], n_zero


def poly_roots(coeffs, check=True):
    """
    All roots of ``sum_k coeffs[k] z**k``, with multiplicity.

    Leading coefficients below ``1e-14 * max|coeff|`` are dropped (the
    degree is reduced). Exact zero low-order coefficients give exact zero
    roots. The remaining roots come from Aberth-Ehrlich simultaneous
    iteration started on a circle sized from the coefficients.

    Raises
    ------
    InvalidInputError
        All coefficients zero or not finite.
    NumericalFailureError
        A root fails ``|p(r)| <= 1e-10 * max|c| * (1+|r|)**deg``.
    """
    c, n_zero = _strip(coeffs)
    d = c.size - 1
    zeros = np.zeros(n_zero, dtype=complex)
    if d == 0:
        return zeros
    r = _aberth(c[None, :])[0]
    out = np.concatenate([zeros, r])
    if check:
        _check_residual(np.asarray(coeffs, dtype=complex), out)
    return out


def _check_residual(c_full, roots):
    c, n_zero = _strip(c_full)
    c = np.concatenate([np.zeros(n_zero, dtype=complex), c])
    d = c.size - 1
    if d <= 0 or roots.size == 0:
        return
    scale = np.max(np.abs(c_full))
    p = np.polyval(c[::-1], roots)
    bound = 1e-10 * scale * (1 + np.abs(roots)) ** d
    if np.any(np.abs(p) > bound) or not np.all(np.isfinite(roots)):
        raise NumericalFailureError(
            f"root residual too large: max |p(r)| = {np.max(np.abs(p)):.3e}")


def poly_roots_batch(coeffs):
    """Roots of each row of a (m, d+1) array of same-degree polynomials.

    Rows must have a nonzero leading coefficient. Used for batched
    preimage solves; no degree dropping is performed.
    """
    c = np.asarray(coeffs, dtype=complex)
    if c.ndim != 2 or c.shape[1] < 2:
        raise InvalidInputError("need a 2-d array with degree >= 1")
    if np.any(c[:, -1] == 0):
        raise InvalidInputError("leading coefficient vanishes")
    return _aberth(c)


# ---------------------------------------------------------------------------
# Gamma function
#
# Lanczos approximation, g = 7, nine coefficients (Godfrey's table). The
# shifted series is accurate to ~1e-15 relative in Re z >= 1/2; the left
# half-plane goes through the reflection formula.

_LANCZOS_G = 7.0
_LANCZOS_C = np.array([
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
])
_POLE_TOL = 1e-12
_LOG_SQRT_2PI = 0.5 * np.log(2 * np.pi)


def _lanczos_sum(zm1):
    a = np.full(zm1.shape, _LANCZOS_C[0], dtype=complex)
    for k in range(1, _LANCZOS_C.size):
        a = a + _LANCZOS_C[k] / (zm1 + k)
    return a


def _sinpi(z):
    """sin(pi z) with the integer part of Re z removed first (exact zeros at integers)."""
    n = np.rint(z.real)
    sign = np.where(np.mod(n, 2) == 0, 1.0, -1.0)
    return sign * np.sin(np.pi * (z - n))


def _near_pole(z):
    zr = np.rint(z.real)
    return (zr <= 0) & (np.abs(z - zr) < _POLE_TOL)


def _gamma_right(z):
    zm1 = z - 1
    t = zm1 + _LANCZOS_G + 0.5
    return np.sqrt(2 * np.pi) * np.exp((zm1 + 0.5) * np.log(t) - t) * _lanczos_sum(zm1)


def gamma(z):
    """Vectorized complex Gamma function.

    Raises :class:`DomainError` within 1e-12 of a nonpositive integer.
    """
    z = np.asarray(z, dtype=complex)
    if np.any(_near_pole(z)):
        raise DomainError("Gamma evaluated at a pole")
    left = z.real < 0.5
    zz = np.where(left, 1 - z, z)
    g = _gamma_right(zz)
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        refl = np.pi / (_sinpi(z) * g)
    return np.where(left, refl, g)


def complex_gamma(z):
    """Gamma(z) for a single complex argument."""
    return complex(gamma(complex(z)))


def loggamma(z):
    """A branch of log Gamma(z), vectorized; exact up to multiples of 2*pi*i.

    Suitable for ratios ``exp(loggamma(a) - loggamma(b))`` with large
    arguments where Gamma itself would overflow.
    """
    z = np.asarray(z, dtype=complex)
    left = z.real < 0.5
    zz = np.where(left, 1 - z, z)
    zm1 = zz - 1
    t = zm1 + _LANCZOS_G + 0.5
    right = _LOG_SQRT_2PI + (zm1 + 0.5) * np.log(t) - t + np.log(_lanczos_sum(zm1))
    with np.errstate(divide="ignore", invalid="ignore"):
        refl = np.log(np.pi) - np.log(_sinpi(z)) - right
    return np.where(left, refl, right)


def rgamma(z):
    """Reciprocal Gamma function 1/Gamma(z), entire (zero at the poles)."""
    z = np.asarray(z, dtype=complex)
    left = z.real < 0.5
    zz = np.where(left, 1 - z, z)
    with np.errstate(over="ignore", invalid="ignore"):
        g = _gamma_right(zz)
        out = np.where(left, _sinpi(z) * g / np.pi, 1 / g)
    return out


def gamma_ratio(a, b):
    """Gamma(a)/Gamma(b) through the log-Gamma difference.

    Stable for large arguments and near poles of Gamma(b), where the
    ratio tends to zero.
    """
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        d = loggamma(a) - loggamma(b)
        r = np.exp(d)
    return np.where(np.isnan(r) & np.isinf(d.real) & (d.real < 0), 0, r)
