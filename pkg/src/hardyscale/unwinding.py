"""
Blaschke factorization on the FFT grid and the unwinding series.

``weiss_factor`` splits boundary samples ``F = B * G`` with ``G`` outer,
``G = exp(ln|F| + i * conj_harmonic(ln|F|))`` and ``B = F / G`` unimodular.
``unwind`` iterates the split on ``G - G(0)`` to produce

    F = a_1 B_1 + a_2 B_1 B_2 + a_3 B_1 B_2 B_3 + ...
"""

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import HardyError, IllConditionedError, InvalidInputError
from .numerics import (TorusSignal, analytic_completion, poly_roots,
                       winding_number)

__all__ = [
    "weiss_factor", "unwind", "reconstruct", "UnwindingExpansion",
    "stage_zeros", "negative_frequency_energy", "expansion_to_json",
]

_LOW_FRACTION = 0.01
_BOUNDARY_TOL = 1e-8


def negative_frequency_energy(f):
    """Fraction of the energy of ``f`` in Fourier bins N/2 .. N-1."""
    c = np.fft.fft(f.samples)
    tot = np.sum(np.abs(c) ** 2)
    if tot == 0:
        return 0.0
    return float(np.sum(np.abs(c[f.N // 2:]) ** 2) / tot)


def _boundary_zeros(s, rel=1e-2):
    """
    Zeros of the analytic part of ``s`` lying on the circle itself.

    Candidates are local minima of ``|s|`` below ``rel * max|s|``; each is
    polished by Newton's method on the Taylor polynomial read off the FFT
    and accepted when it converges to within 1e-8 of the circle. Returns
    the list of accepted roots (with repetition) and the deflated Taylor
    coefficients.
    """
    N = s.size
    a = np.abs(s)
    amax = a.max()
    # a zero on the circle sits within half a grid step of a local minimum,
    # so |s| there is at most ~|F'| h / 2
    slope = np.abs(np.roll(s, -1) - np.roll(s, 1)) / 2
    cand = np.nonzero((a <= rel * amax) & (a <= np.roll(a, 1)) & (a <= np.roll(a, -1))
                      & (a <= 0.75 * slope))[0]
    if cand.size == 0:
        return [], None
    c = np.fft.fft(s) / N
    c = c[:N // 2].copy()
    scale = np.sum(np.abs(c))
    roots = []
    tried = []
    for j in cand:
        zeta = _newton_on_circle(c, np.exp(2j * np.pi * j / N))
        if zeta is None or any(abs(zeta - t) < 1e-6 for t in tried):
            continue
        if abs(_taylor(c, zeta)[0]) > 1e-10 * scale:
            continue
        tried.append(zeta)
        zeta = zeta / abs(zeta)
        # deflate as long as zeta stays a root (multiple boundary zeros)
        while True:
            q, rem = _synthetic_division(c, zeta)
            if abs(rem) > 1e-9 * scale:
                break
            roots.append(zeta)
            c = np.concatenate([q, [0]])
            if abs(_taylor(c, zeta)[0]) > 1e-8 * np.sum(np.abs(c)):
                break
    if not roots:
        return [], None
    return roots, c


def _taylor(c, z):
    """Value and derivative of sum c_k z**k at a point with |z| ~ 1."""
    k = np.arange(c.size)
    zk = np.exp(k * np.log(z))
    return np.dot(c, zk), np.dot(c[1:] * k[1:], zk[:-1])


def _newton_on_circle(c, z, maxiter=60):
    for _ in range(maxiter):
        p, dp = _taylor(c, z)
        if dp == 0 or not np.isfinite(dp):
            return None
        step = p / dp
        z = z - step
        if not np.isfinite(z) or abs(abs(z) - 1) > 0.1:
            return None
        if abs(step) < 1e-15:
            break
    if abs(abs(z) - 1) > _BOUNDARY_TOL:
        return None
    return z


def _synthetic_division(c, zeta):
    """Quotient and remainder of sum c_k z**k by (z - zeta)."""
    q = np.empty(c.size - 1, dtype=complex)
    acc = 0j
    for k in range(c.size - 1, 0, -1):
        acc = c[k] + zeta * acc
        q[k - 1] = acc
    return q, c[0] + zeta * acc


def _factor(s, floor):
    N = s.size
    z = np.exp(2j * np.pi * np.arange(N) / N)
    amax = np.max(np.abs(s))
    if not np.all(np.isfinite(s)):
        raise InvalidInputError("non-finite samples")
    if amax == 0:
        raise IllConditionedError("identically zero input")
    roots, c = _boundary_zeros(s)
    rot = 1.0 + 0j
    outer = np.ones(N, dtype=complex)
    if roots:
        full = np.zeros(N, dtype=complex)
        full[:c.size] = c
        s = np.fft.ifft(full) * N
        for zeta in roots:
            # z - zeta = (-zeta) * (1 - conj(zeta) z)
            rot *= -zeta
            outer *= 1 - np.conj(zeta) * z
    eps = floor * amax
    a = np.abs(s)
    if np.mean(a < eps) > _LOW_FRACTION:
        raise IllConditionedError("|F| below the floor on more than 1% of the grid")
    G = np.exp(analytic_completion(np.log(np.maximum(a, eps))))
    B = rot * s / G
    return B, G * outer, len(roots)


def weiss_factor(F, floor=1e-9):
    """
    Split ``F`` into a unimodular Blaschke part and an outer part.

    ``G = exp(analytic completion of ln max(|F|, floor*max|F|))`` and
    ``B = F / G``. Zeros of ``F`` lying exactly on the circle are divided
    out first (they belong to the outer factor) and multiplied back into
    ``G``; this keeps ``ln|F|`` integrable on the grid.

    Returns
    -------
    B, G : TorusSignal

    Raises
    ------
    IllConditionedError
        ``|F|`` below the floor on more than 1% of the grid.
    """
    B, G, _ = _factor(np.asarray(F.samples, dtype=complex), floor)
    return TorusSignal(B), TorusSignal(G)


@dataclass(frozen=True, eq=False)
class UnwindingExpansion:
    """
    Coefficients, stage factors and residual of an unwinding series.

    Stage factors and the residual are held on the working grid, which is
    ``oversample`` times finer than the input grid. ``stage_factors`` and
    ``residual`` give them sampled back on the input grid; pass
    ``fine=True`` to :meth:`terms` for inner products at full resolution.
    """

    coefficients: np.ndarray
    work_factors: list
    work_residual: TorusSignal
    input_norm: float
    residual_norms: list = field(default_factory=list)
    truncated: bool = False
    oversample: int = 1
    alias: float = 0.0

    @property
    def n_stages(self):
        return len(self.work_factors)

    @property
    def stage_factors(self):
        L = self.oversample
        return [TorusSignal(B.samples[::L]) for B in self.work_factors]

    @property
    def residual(self):
        return TorusSignal(self.work_residual.samples[::self.oversample])

    def cumulative_products(self, fine=False):
        L = 1 if fine else self.oversample
        out = []
        acc = np.ones(self.work_residual.N, dtype=complex)
        for B in self.work_factors:
            acc = acc * B.samples
            out.append(TorusSignal(acc[::L]))
        return out

    def terms(self, fine=False):
        """The mutually orthogonal terms ``a_k B_1 ... B_k``."""
        return [TorusSignal(a * P.samples) for a, P in
                zip(self.coefficients, self.cumulative_products(fine))]

    def energy_defect(self):
        """``||F||^2 - sum |a_k|^2 - ||R||^2`` (zero up to rounding)."""
        return (self.input_norm ** 2 - float(np.sum(np.abs(self.coefficients) ** 2))
                - self.work_residual.norm() ** 2)


def _oversample(s, L):
    """Zero-padded trigonometric interpolation of analytic samples onto L*N points."""
    if L == 1:
        return s
    N = s.size
    c = np.fft.fft(s) / N
    full = np.zeros(L * N, dtype=complex)
    full[:N // 2] = c[:N // 2]
    return np.fft.ifft(full) * (L * N)


WORK_N = 65536
MAX_WORK_N = 2 ** 21
# term orthogonality defects track roughly 0.2 * alias**2
ALIAS_TOL = 1e-4


def _alias_level(B):
    """Root energy of the negative-frequency bins of a stage factor (0 when exact)."""
    c = np.fft.fft(B) / B.size
    return float(np.sqrt(np.sum(np.abs(c[B.size // 2:]) ** 2)))


def _unwind_on(F, L, K, tol, floor):
    Bs, G, _ = _factor(_oversample(np.asarray(F.samples, dtype=complex), L), floor)
    coeffs, stages, rnorms = [], [], []
    cum = np.ones(L * F.N, dtype=complex)
    truncated = False
    alias = 0.0
    while True:
        a = np.mean(G)
        H = G - a
        cum = cum * Bs
        coeffs.append(a)
        stages.append(TorusSignal(Bs))
        alias = max(alias, _alias_level(Bs))
        rn = float(np.sqrt(np.mean(np.abs(H) ** 2)))
        rnorms.append(rn)
        if len(coeffs) >= K or rn ** 2 <= tol * F.norm() ** 2:
            break
        try:
            Bs, G, _ = _factor(H, floor)
        except HardyError:
            truncated = True
            break
    return coeffs, stages, TorusSignal(cum * H), rnorms, truncated, alias


def unwind(F, K=16, tol=1e-10, floor=1e-9, h2_tol=1e-8, work_n=WORK_N,
           max_work_n=MAX_WORK_N, alias_tol=ALIAS_TOL):
    """
    Unwinding series of ``F`` with at most ``K`` stages.

    Stage 1 factors ``F = B_1 G_1`` and emits ``a_1 = G_1(0)``, read as the
    grid mean of ``G_1``. Stage k+1 factors ``G_k - a_k = B_{k+1} G_{k+1}``.
    Stops after ``K`` stages or once the residual energy falls below
    ``tol * ||F||^2``. A failing stage ends the expansion early with
    ``truncated=True``.

    The recursion runs on a working grid of ``max(N, work_n)`` points.
    Stage zeros drift towards the circle as k grows, and a factor with a
    zero at distance ``d`` from the circle needs about ``30/d`` Fourier
    modes; on a coarse grid the aliased tail breaks ``B_k(0) = 0`` and with
    it the orthogonality of the terms. The aliasing shows up as
    negative-frequency content of the stage factors; while it exceeds
    ``alias_tol`` the working grid is doubled (up to ``max_work_n``) and the
    recursion rerun. The final level is kept in ``alias``.
    """
    if K < 1:
        raise InvalidInputError("need at least one stage")
    neg = negative_frequency_energy(F)
    if neg > h2_tol:
        raise InvalidInputError(f"input is not in H^2 (negative-frequency energy {neg:.2e})")
    norm = F.norm()
    if norm == 0:
        raise IllConditionedError("identically zero input")
    L = max(1, int(work_n) // F.N)
    if L & (L - 1):
        raise InvalidInputError("work_n must be a power of 2")
    while True:
        coeffs, stages, R, rnorms, truncated, alias = _unwind_on(F, L, K, tol, floor)
        if alias <= alias_tol or 2 * L * F.N > max_work_n:
            break
        L *= 2
    return UnwindingExpansion(np.array(coeffs), stages, R, norm, rnorms, truncated, L, alias)


def reconstruct(e, n_terms=None, include_residual=True):
    """
    Sum ``a_k B_1 ... B_k`` over the first ``n_terms`` stages.

    With ``include_residual`` (and all stages kept) the residual is added
    back, which reproduces the input.
    """
    n = e.n_stages if n_terms is None else int(n_terms)
    terms = e.terms()[:n]
    out = np.zeros(e.residual.N, dtype=complex)
    for t in terms:
        out = out + t.samples
    if include_residual and n == e.n_stages:
        out = out + e.residual.samples
    return TorusSignal(out)


def stage_zeros(B, degree=None):
    """
    Zeros of a sampled finite Blaschke product.

    The degree defaults to the winding number. The denominator
    ``q(z) = prod (1 - conj(a_j) z)`` is fitted so that the Taylor series of
    ``B * q`` terminates at degree ``d``; zeros are ``1/conj(r)`` for the
    roots ``r`` of ``q``, and missing roots (degree drop) are zeros at 0.
    Returned sorted by modulus, then argument.
    """
    d = winding_number(B) if degree is None else int(degree)
    if d <= 0:
        return np.zeros(0, dtype=complex)
    N = B.N
    b = np.fft.fft(B.samples) / N
    L = min(N // 2 - d - 1, max(4 * d, 32))
    rows = np.arange(d + 1, d + 1 + L)
    A = np.stack([b[rows - i] for i in range(1, d + 1)], axis=1)
    rhs = -b[rows]
    q, *_ = np.linalg.lstsq(A, rhs, rcond=1e-13)
    qc = np.concatenate([[1.0], q])
    if np.max(np.abs(q)) < 1e-14:
        found = np.zeros(0, dtype=complex)
    else:
        r = poly_roots(qc, check=False)
        found = 1 / np.conj(r)
    zs = np.concatenate([np.zeros(d - found.size, dtype=complex), found])
    order = np.lexsort((np.angle(zs), np.round(np.abs(zs), 12)))
    return zs[order]


def expansion_to_json(e, K=None, with_zeros=False):
    """JSON text: coefficients, residual norm, energy ledger, optional zeros."""
    c = list(e.coefficients)
    if K is not None and len(c) < K:
        c = c + [0j] * (K - len(c))
    d = {
        "coefficients": [{"re": float(v.real), "im": float(v.imag)} for v in c],
        "residual_norm": e.work_residual.norm(),
        "energy_ledger": {
            "input_energy": e.input_norm ** 2,
            "coefficient_energy": float(np.sum(np.abs(e.coefficients) ** 2)),
            "residual_energy": e.work_residual.norm() ** 2,
            "defect": e.energy_defect(),
        },
        "stages": e.n_stages,
        "truncated": e.truncated,
        "working_grid": e.work_residual.N,
    }
    if with_zeros:
        d["stage_zero_estimates"] = [
            [{"re": float(z.real), "im": float(z.imag)} for z in stage_zeros(B)]
            for B in e.work_factors]
    return json.dumps(d, sort_keys=True)
