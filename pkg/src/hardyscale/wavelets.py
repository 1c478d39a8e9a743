"""
Dyadic multiscale decomposition of the Hardy space of the upper half-plane.

Building blocks:

* ``G(x) = sin(pi(i - x))/sin(pi(i + x))``, the 1-periodic Blaschke product
  with zeros ``j + i`` (j integer);
* ``G_n(x)``, the same product restricted to ``j <= n``, through Gamma:
  ``G_n(x) = Gamma(-i-n)/Gamma(i-n) * Gamma(x-n+i)/Gamma(x-n-i)``;
* ``phi(x) = Gamma(x-1+i)/(sqrt(pi) Gamma(x-i))``, whose integer shifts are
  orthonormal;
* ``script_B_n(x) = prod_{j<n} G(2**j x)`` truncated to ``T`` factors;
* wavelets ``phi_{n,j}(x) = 2**(n/2) phi(2**n x - j) script_B(2**n x)``.
"""

import csv
import io
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InvalidInputError
from .numerics import RealLineGrid, gamma, gamma_ratio, rgamma

__all__ = [
    "G_eval", "G_sin_eval", "G_n_eval", "G_n_product", "phi_eval",
    "phi_shift_identity_check", "measure_tail_constant", "DyadicWaveletBasis",
    "script_B_eval", "wavelet_eval", "PanelQuadrature", "wavelet_gram",
    "wavelet_csv",
]

_R = np.exp(-2 * np.pi)
_SQRT_PI = np.sqrt(np.pi)
_POLE_TOL = 1e-12
_NEAR_POLE = 1e-6
_DIRECT_LIMIT = 60.0


def G_eval(x):
    """
    ``G(x)`` through ``q = exp(2 pi i x)``: ``G = (q - r)/(1 - r q)`` with
    ``r = exp(-2 pi)``. Equal to the sine quotient but free of the
    ``cosh(pi Im x)`` overflow; ``|q| <= 1`` on the closed upper half-plane.

    Raises
    ------
    DomainError
        ``x`` within 1e-12 of a pole ``k - i``.
    """
    x = np.asarray(x, dtype=complex)
    q = np.exp(2j * np.pi * x)
    den = 1 - _R * q
    if np.any(np.abs(den) < _POLE_TOL * np.maximum(1, np.abs(q))):
        raise DomainError("G evaluated at a pole")
    return (q - _R) / den


def G_sin_eval(x):
    """The sine quotient itself; independent route used for cross-checks."""
    x = np.asarray(x, dtype=complex)
    return np.sin(np.pi * (1j - x)) / np.sin(np.pi * (1j + x))


def _near_nonpositive_integer(z, tol):
    zr = np.rint(z.real)
    return (zr <= 0) & (np.abs(z - zr) < tol)


def _ratio(a, b):
    """Gamma(a)/Gamma(b): direct product for moderate arguments, log route otherwise."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if np.any(_near_nonpositive_integer(a, _POLE_TOL)):
        raise DomainError("numerator Gamma evaluated at a pole")
    use_log = ((np.abs(a) > _DIRECT_LIMIT) | (np.abs(b) > _DIRECT_LIMIT)
               | _near_nonpositive_integer(b, _NEAR_POLE))
    out = np.empty(np.broadcast(a, b).shape, dtype=complex)
    a, b = np.broadcast_arrays(a, b)
    if np.any(use_log):
        out[use_log] = gamma_ratio(a[use_log], b[use_log])
    d = ~use_log
    if np.any(d):
        out[d] = gamma(a[d]) * rgamma(b[d])
    return out


def _scalar_or_array(v):
    return complex(v) if np.ndim(v) == 0 else v


def G_n_eval(n, x):
    """``G_n(x)`` through Gamma; zero at ``x = n - k + i``, pole at ``x = n - k - i``."""
    n = int(n)
    x = np.asarray(x, dtype=complex)
    pref = complex(gamma(-1j - n) * rgamma(1j - n))
    return _scalar_or_array(pref * _ratio(x - n + 1j, x - n - 1j))


def _log_factor(y):
    # branch of log((y - i)/(y + i)) that vanishes as y -> -infinity
    return np.log((y - 1j) / (y + 1j))


def _log_factor_antiderivative(y):
    return y * _log_factor(y) - 1j * np.log(y * y + 1)


def G_n_product(n, x, M=10_000, tail=True):
    """
    Direct product over ``-M <= j <= n`` of
    ``(j - i)/(j + i) * (x - j - i)/(x - j + i)``.

    The truncated factors contribute ``exp(sum_{j < -M} g(j))`` with
    ``g(y) = f(y) - f(y - x)``, ``f = log((y - i)/(y + i))``; the midpoint
    rule turns the sum into ``integral_{c-x}^{c} f`` with ``c = -M - 1/2``,
    accurate to ``O(|x|/M**3)``. Without it the truncation error is about
    ``2|x|/M``. ``tail=False`` returns the raw product.
    """
    n, M = int(n), int(M)
    if n < -M:
        raise InvalidInputError("need n >= -M")
    x = np.atleast_1d(np.asarray(x, dtype=complex))
    j = np.arange(-M, n + 1, dtype=float)
    logs = _log_factor(j)[None, :] - _log_factor(j[None, :] - x[:, None])
    # summing logs (each |.| small) avoids the drift of 10^4 complex products
    s = logs.sum(axis=1)
    if tail:
        c = -M - 0.5
        s = s + _log_factor_antiderivative(c) - _log_factor_antiderivative(c - x)
    return np.exp(s)


def phi_eval(x):
    """``phi(x) = Gamma(x - 1 + i)/(sqrt(pi) Gamma(x - i))``."""
    x = np.asarray(x, dtype=complex)
    return _scalar_or_array(_ratio(x - 1 + 1j, x - 1j) / _SQRT_PI)


def phi_shift_identity_check(n, x):
    """
    ``|phi(x - n) - Gamma(i-n)/Gamma(-i-n) * G_n(x)/(sqrt(pi)(x - (n+1) + i))|``.

    The left side goes through ``phi_eval``, the right side through
    ``G_n_eval``; the two share no Gamma arguments.
    """
    n = int(n)
    x = np.asarray(x, dtype=complex)
    lhs = phi_eval(x - n)
    pref = complex(gamma(1j - n) * rgamma(-1j - n))
    rhs = pref * G_n_eval(n, x) / (_SQRT_PI * (x - (n + 1) + 1j))
    return np.abs(lhs - rhs)


def measure_tail_constant(window=8.0, m_range=(-60, 0), n_points=2001):
    """
    ``max |1 - G(2**m x)| / 2**m`` over ``|x| <= window`` and ``m`` in
    ``m_range`` (half-open). Bounds the truncation error of the dyadic
    products via ``sum_{j < n-T} C 2**j = C 2**(n-T)``.
    """
    x = np.linspace(-window, window, int(n_points))
    best = 0.0
    for m in range(*m_range):
        s = 2.0 ** m
        best = max(best, float(np.max(np.abs(1 - G_eval(s * x)))) / s)
    return best


@dataclass(frozen=True)
class DyadicWaveletBasis:
    """
    Scales ``n_lo..n_hi``, shifts ``-J..J``, product depth ``T``.

    ``C`` is measured on ``|x| <= window``; construction fails when the
    truncation tail ``C 2**(n_hi - T)`` exceeds 1e-8.
    """

    n_lo: int = -1
    n_hi: int = 1
    J: int = 3
    T: int = 40
    window: float = 8.0
    C: float = None

    def __post_init__(self):
        if self.n_lo > self.n_hi or self.J < 0 or self.T < 1 or self.window <= 0:
            raise InvalidInputError("empty or invalid wavelet ranges")
        if self.C is None:
            object.__setattr__(self, "C", measure_tail_constant(self.window))
        if self.tail_bound() > 1e-8:
            raise InvalidInputError(
                f"depth T={self.T} leaves a truncation tail {self.tail_bound():.2e} > 1e-8")

    def tail_bound(self, n=None):
        n = self.n_hi if n is None else n
        return self.C * 2.0 ** (n - self.T)

    def indices(self):
        return [(n, j) for n in range(self.n_lo, self.n_hi + 1)
                for j in range(-self.J, self.J + 1)]


def script_B_eval(n, x, basis):
    """Truncated ``prod_{m=n-T}^{n-1} G(2**m x)``; unimodular on the real line."""
    n = int(n)
    x = np.asarray(x, dtype=complex)
    out = np.ones(x.shape, dtype=complex)
    for m in range(n - basis.T, n):
        out = out * G_eval(2.0 ** m * x)
    return _scalar_or_array(out)


def wavelet_eval(n, j, x, basis):
    """``phi_{n,j}(x) = 2**(n/2) phi(2**n x - j) script_B_n(x)``."""
    n, j = int(n), int(j)
    if not (basis.n_lo <= n <= basis.n_hi and -basis.J <= j <= basis.J):
        raise InvalidInputError(f"(n, j) = ({n}, {j}) outside the basis ranges")
    x = np.asarray(x, dtype=complex)
    s = 2.0 ** n
    return _scalar_or_array(np.sqrt(s) * phi_eval(s * x - j) * script_B_eval(n, x, basis))


@dataclass(frozen=True, eq=False)
class PanelQuadrature:
    """
    Gauss-Legendre panels on ``[-X, X]`` with an asymptotic tail term.

    Products of wavelets from different scales decay like ``P(x)/x**2``
    with ``P`` periodic (the factor ``conj(G(x))`` does not decay), so the
    tan-substituted rule oscillates without bound near its endpoints.
    Here the tails are ``integral_X^inf P/x**2 ~ mean(P)/X``, with
    ``mean(P)`` read off the last ``block`` units of each side (a common
    multiple of the periods in play). The error is ``O(1/X**2)``.
    """

    nodes: np.ndarray
    weights: np.ndarray
    X: float
    block: float

    @classmethod
    def build(cls, X=2048.0, panel=0.5, order=20, block=4.0):
        n_pan = int(round(2 * X / panel))
        if n_pan * panel != 2 * X:
            raise InvalidInputError("panel width must divide 2X")
        g, w = np.polynomial.legendre.leggauss(int(order))
        left = -X + panel * np.arange(n_pan)
        nodes = (left[:, None] + panel * (g[None, :] + 1) / 2).ravel()
        weights = np.tile(w * panel / 2, n_pan)
        return cls(nodes, weights, float(X), float(block))

    def integrate(self, values):
        """Integral over the real line of sampled values (last axis = nodes)."""
        v = np.asarray(values)
        x, w = self.nodes, self.weights
        body = v @ w
        right = x > self.X - self.block
        left = x < -self.X + self.block
        mean_r = (v[..., right] * x[right] ** 2) @ w[right] / self.block
        mean_l = (v[..., left] * x[left] ** 2) @ w[left] / self.block
        return body + (mean_r + mean_l) / self.X


def wavelet_gram(basis, indices=None, quadrature=None):
    """
    Gram matrix ``<phi_a, phi_b>`` over ``indices`` (default: all of the basis).

    ``quadrature`` is a :class:`PanelQuadrature` (default ``build()``) or a
    :class:`RealLineGrid`; the latter is exact enough for same-scale pairs
    only.
    """
    idx = basis.indices() if indices is None else list(indices)
    q = PanelQuadrature.build() if quadrature is None else quadrature
    x = np.asarray(q.nodes, dtype=complex)
    for n, j in idx:
        wavelet_eval(n, j, 0.0, basis)
    scale = {n: script_B_eval(n, x, basis) for n in sorted({n for n, _ in idx})}
    V = np.array([np.sqrt(2.0 ** n) * phi_eval(2.0 ** n * x - j) * scale[n] for n, j in idx])
    if isinstance(q, RealLineGrid):
        return (V * q.weights) @ V.conj().T
    K = len(idx)
    out = np.empty((K, K), dtype=complex)
    for a in range(K):
        out[a] = q.integrate(V[a][None, :] * V.conj())
    return out


def wavelet_csv(n, j, basis, window=None, n_points=1025):
    """CSV table ``x,re,im`` of ``phi_{n,j}`` on ``[-window, window]``."""
    w = basis.window if window is None else float(window)
    if not w > 0:
        raise InvalidInputError("window must be positive")
    x = np.linspace(-w, w, int(n_points))
    v = wavelet_eval(n, j, x, basis)
    buf = io.StringIO()
    out = csv.writer(buf, lineterminator="\n")
    out.writerow(["x", "re", "im"])
    for xi, vi in zip(x, v):
        out.writerow([repr(float(xi)), repr(float(vi.real)), repr(float(vi.imag))])
    return buf.getvalue()
