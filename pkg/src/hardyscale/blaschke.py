"""
Finite Blaschke products on the unit disk and the upper half-plane.

Zeros are stored as the points where the product vanishes, so a disk
factor with stored zero ``a`` is ``(z - a)/(1 - conj(a) z)``. A factor
written ``(z + a)/(1 + conj(a) z)`` therefore has stored zero ``-a``.
"""

import json
from dataclasses import dataclass

import numpy as np

from .errors import (DomainError, InvalidInputError, NumericalFailureError,
                     ResourceError)
from .numerics import poly_from_roots, poly_roots_batch

__all__ = [
    "FiniteBlaschke", "IterateChain", "ZeroLadder", "evaluate", "compose",
    "iterate", "zero_ladder", "phase_layer", "preimages", "DEFAULT_DEGREE_CAP",
]

DEFAULT_DEGREE_CAP = 4096
_POLE_TOL = 1e-13
_EDGE_TOL = 1e-14


@dataclass(frozen=True, eq=False)
class FiniteBlaschke:
    """
    ``exp(i*theta) * z**nu * prod_j ((z - a_j)/(1 - conj(a_j) z))**m_j`` on
    the disk, or ``exp(i*theta) * prod_j ((x - a_j)/(x - conj(a_j)))**m_j``
    on the upper half-plane.

    Disk zeros that are exactly 0 are folded into ``nu``; repeated zeros
    are merged into multiplicities.
    """

    zeros: np.ndarray = ()
    mults: np.ndarray = None
    nu: int = 0
    theta: float = 0.0
    domain: str = "disk"

    def __post_init__(self):
        if self.domain not in ("disk", "halfplane"):
            raise InvalidInputError(f"unknown domain {self.domain!r}")
        z = np.atleast_1d(np.asarray(self.zeros, dtype=complex)).ravel()
        m = (np.ones(z.size, dtype=int) if self.mults is None
             else np.atleast_1d(np.asarray(self.mults, dtype=int)).ravel())
        if m.size != z.size:
            raise InvalidInputError("zeros and mults differ in length")
        if np.any(m < 1):
            raise InvalidInputError("multiplicities must be >= 1")
        if not np.all(np.isfinite(z)):
            raise InvalidInputError("non-finite zero")
        nu = int(self.nu)
        if nu < 0:
            raise InvalidInputError("monomial order must be nonnegative")
        if self.domain == "disk":
            if np.any(np.abs(z) >= 1 - _EDGE_TOL):
                raise InvalidInputError("disk zeros must satisfy |a| < 1")
            at0 = z == 0
            nu += int(m[at0].sum())
            z, m = z[~at0], m[~at0]
        else:
            if nu:
                raise InvalidInputError("half-plane products carry no monomial factor")
            if np.any(z.imag <= _EDGE_TOL):
                raise InvalidInputError("half-plane zeros must satisfy Im a > 0")
        if z.size:
            uz, inv = np.unique(z, return_inverse=True)
            um = np.bincount(inv.ravel(), weights=m).astype(int)
            z, m = uz, um
        z.setflags(write=False)
        m.setflags(write=False)
        object.__setattr__(self, "zeros", z)
        object.__setattr__(self, "mults", m)
        object.__setattr__(self, "nu", nu)
        object.__setattr__(self, "theta", float(self.theta))

    @property
    def degree(self):
        return self.nu + int(self.mults.sum())

    def zero_list(self):
        """All zeros repeated by multiplicity (disk: including nu zeros at 0)."""
        z = np.repeat(self.zeros, self.mults)
        if self.nu:
            z = np.concatenate([np.zeros(self.nu, dtype=complex), z])
        return z

    def __call__(self, z):
        return evaluate(self, z)

    def derivative(self, z):
        """Complex derivative, vectorized."""
        z = np.asarray(z, dtype=complex)
        val = evaluate(self, z)
        if self.domain == "halfplane":
            s = np.zeros_like(z)
            for a, m in zip(self.zeros, self.mults):
                s = s + m * (1 / (z - a) - 1 / (z - np.conj(a)))
            return val * s
        rest = FiniteBlaschke(self.zeros, self.mults, 0, self.theta)
        r = evaluate(rest, z)
        s = np.zeros_like(z)
        with np.errstate(invalid="ignore", divide="ignore"):
            for a, m in zip(self.zeros, self.mults):
                s = s + m * (1 - abs(a) ** 2) / ((z - a) * (1 - np.conj(a) * z))
            dr = r * s
        dr = np.where(np.isfinite(dr), dr, _factor_derivative_at_zero(self, z))
        if self.nu == 0:
            return dr
        zn1 = z ** (self.nu - 1)
        return self.nu * zn1 * r + zn1 * z * dr

    def to_dict(self):
        return {
            "domain": self.domain,
            "theta": self.theta,
            "nu": self.nu,
            "zeros": [{"re": float(a.real), "im": float(a.imag), "mult": int(m)}
                      for a, m in zip(self.zeros, self.mults)],
        }

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d):
        try:
            zs = d.get("zeros", [])
            zeros = [complex(float(e["re"]), float(e["im"])) for e in zs]
            mults = [int(e.get("mult", 1)) for e in zs]
            return cls(zeros, mults, int(d.get("nu", 0)), float(d.get("theta", 0.0)),
                       d.get("domain", "disk"))
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, InvalidInputError):
                raise
            raise InvalidInputError(f"malformed Blaschke product: {exc}") from exc

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))

    @classmethod
    def monomial(cls, nu, theta=0.0):
        return cls((), None, nu, theta)


def _factor_derivative_at_zero(B, z):
    # derivative of the zero-factor part at points where z hits a simple zero
    out = np.zeros_like(z)
    for i, (a, m) in enumerate(zip(B.zeros, B.mults)):
        hit = z == a
        if not np.any(hit) or m > 1:
            continue
        others = FiniteBlaschke(np.delete(B.zeros, i), np.delete(B.mults, i), 0, B.theta)
        out = np.where(hit, evaluate(others, z) / (1 - abs(a) ** 2), out)
    return out


def evaluate(B, z):
    """
    Evaluate a finite Blaschke product at ``z`` (scalar or array).

    Raises
    ------
    DomainError
        ``z`` within 1e-13 of a pole (``1/conj(a)`` on the disk,
        ``conj(a)`` on the half-plane).
    """
    scalar = np.ndim(z) == 0
    z = np.asarray(z, dtype=complex)
    out = np.full(z.shape, np.exp(1j * B.theta), dtype=complex)
    if B.domain == "disk":
        if B.nu:
            out = out * z ** B.nu
        for a, m in zip(B.zeros, B.mults):
            den = 1 - np.conj(a) * z
            if np.any(np.abs(den) < _POLE_TOL):
                raise DomainError("evaluation at a pole of the Blaschke product")
            f = (z - a) / den
            out = out * (f if m == 1 else f ** m)
    else:
        for a, m in zip(B.zeros, B.mults):
            den = z - np.conj(a)
            if np.any(np.abs(den) < _POLE_TOL):
                raise DomainError("evaluation at a pole of the Blaschke product")
            f = (z - a) / den
            out = out * (f if m == 1 else f ** m)
    return complex(out) if scalar else out


def _numerator_denominator(B):
    """Polynomial coefficients (low to high) with B = num/den on the disk."""
    num = np.exp(1j * B.theta) * poly_from_roots(B.zero_list())
    den = np.array([1.0 + 0j])
    for a, m in zip(B.zeros, B.mults):
        for _ in range(m):
            den = np.concatenate([den, [0]]) - np.conj(a) * np.concatenate([[0], den])
    den = np.concatenate([den, np.zeros(num.size - den.size)])
    return num, den


def preimages(B, w, w_mults=None, tol=1e-8):
    """
    Solve ``B(z) = w`` for every target in ``w`` (disk, |w| < 1).

    Returns ``(roots, mults)`` flattened over all targets; each target
    contributes ``degree(B)`` roots inside the disk carrying the target's
    multiplicity. Targets equal to 0 use the stored zeros exactly.
    """
    if B.domain != "disk":
        raise InvalidInputError("preimages are implemented for the disk only")
    w = np.atleast_1d(np.asarray(w, dtype=complex))
    wm = (np.ones(w.size, dtype=int) if w_mults is None
          else np.atleast_1d(np.asarray(w_mults, dtype=int)))
    d = B.degree
    if d == 0:
        raise InvalidInputError("constant map has no preimages")
    out_z, out_m = [], []
    zero = w == 0
    if np.any(zero):
        mz = int(wm[zero].sum())
        out_z.append(B.zeros)
        out_m.append(B.mults * mz)
        if B.nu:
            out_z.append(np.zeros(1, dtype=complex))
            out_m.append(np.array([B.nu * mz]))
    wz, wmz = w[~zero], wm[~zero]
    if wz.size:
        num, den = _numerator_denominator(B)
        coeffs = num[None, :] - wz[:, None] * den[None, :]
        if d == 1:
            roots = (-coeffs[:, 0] / coeffs[:, 1])[:, None]
        else:
            roots = poly_roots_batch(coeffs)
        res = np.abs(evaluate(B, roots) - wz[:, None])
        if not np.all(np.isfinite(res)) or np.max(res) > tol:
            raise NumericalFailureError(
                f"preimage residual {np.nanmax(res):.3e} exceeds {tol:g}")
        if np.any(np.abs(roots) >= 1 - _EDGE_TOL):
            raise NumericalFailureError("preimage left the unit disk")
        out_z.append(roots.ravel())
        out_m.append(np.repeat(wmz, d))
    if not out_z:
        return np.zeros(0, dtype=complex), np.zeros(0, dtype=int)
    return np.concatenate(out_z), np.concatenate(out_m).astype(int)


_PHASE_PROBES = np.exp(2j * np.pi * (np.arange(16) + 0.3) / 16)


def compose(outer, inner, tol=1e-8):
    """
    Explicit zero list of ``outer(inner(z))`` for disk products.

    Each zero ``w`` of ``outer`` contributes the ``degree(inner)`` solutions
    of ``inner(z) = w``. The unimodular constant is fixed by matching the
    composition pointwise at 16 boundary points.

    Raises
    ------
    NumericalFailureError
        Root residual or pointwise mismatch above ``tol``.
    """
    if outer.domain != "disk" or inner.domain != "disk":
        raise InvalidInputError("composition is implemented for disk products only")
    if inner.degree == 0:
        c = evaluate(outer, evaluate(inner, 0.0))
        return FiniteBlaschke((), None, 0, float(np.angle(c)))
    ws = [outer.zeros]
    wm = [outer.mults]
    if outer.nu:
        ws.append(np.zeros(1, dtype=complex))
        wm.append(np.array([outer.nu]))
    z, m = preimages(inner, np.concatenate(ws), np.concatenate(wm), tol=tol)
    prov = FiniteBlaschke(z, m, 0, 0.0)
    target = evaluate(outer, evaluate(inner, _PHASE_PROBES))
    ratio = target / evaluate(prov, _PHASE_PROBES)
    theta = float(np.angle(np.mean(ratio)))
    out = FiniteBlaschke(prov.zeros, prov.mults, prov.nu, theta)
    err = np.max(np.abs(evaluate(out, _PHASE_PROBES) - target))
    if err > tol:
        raise NumericalFailureError(f"composition mismatch {err:.3e}")
    return out


def iterate(B, n, cap=DEFAULT_DEGREE_CAP):
    """
    The n-th iterate ``B o B o ... o B`` as an explicit product.

    Raises
    ------
    ResourceError
        ``degree(B)**n`` exceeds ``cap``; use :class:`IterateChain` for
        pointwise evaluation of large iterates.
    """
    if B.domain != "disk":
        raise InvalidInputError("iteration is implemented for disk products only")
    n = int(n)
    if n < 1:
        raise InvalidInputError("iteration count must be positive")
    if B.degree < 1:
        raise InvalidInputError("cannot iterate a constant")
    if B.degree ** n > cap:
        raise ResourceError(f"degree {B.degree}**{n} exceeds cap {cap}")
    out = B
    for _ in range(n - 1):
        out = compose(out, B)
    return out


class IterateChain:
    """
    Lazy composition ``maps[-1] o ... o maps[0]`` evaluated pointwise.

    ``maps`` may hold Blaschke products or any vectorized callables.
    """

    def __init__(self, maps):
        self.maps = list(maps)

    @classmethod
    def power(cls, f, n):
        return cls([f] * int(n))

    def __call__(self, z):
        w = np.asarray(z, dtype=complex)
        for f in self.maps:
            w = f(w)
        return w


@dataclass(frozen=True, eq=False)
class ZeroLadder:
    """
    Zeros of the iterates of ``F = z*B``, level by level.

    ``levels[0]`` holds all zeros of ``F``; ``levels[n]`` (n >= 1) holds the
    zeros of ``F_{n+1}/F_n``. ``counts[n]`` is the cumulative count through
    level n+1, equal to ``degree(F)**(n+1)``.
    """

    levels: list
    counts: list

    def moduli(self, n):
        z, m = self.levels[n]
        return np.abs(z), m


def zero_ladder(F, n_max, cap=DEFAULT_DEGREE_CAP):
    """
    Level-by-level zeros of ``F_1, ..., F_{n_max}`` for ``F = z*B``.

    The new zeros at level n+1 are the preimages under ``F`` of the new
    zeros at level n, starting from the nonzero zeros of ``F``.
    """
    if F.domain != "disk" or F.nu < 1:
        raise InvalidInputError("zero ladder needs a disk product with a zero at 0")
    if F.degree < 2:
        raise InvalidInputError("zero ladder needs degree >= 2")
    if F.degree ** n_max > cap:
        raise ResourceError(f"degree {F.degree}**{n_max} exceeds cap {cap}")
    first = (np.concatenate([np.zeros(1, dtype=complex), F.zeros]),
             np.concatenate([[F.nu], F.mults]).astype(int))
    levels = [first]
    counts = [F.degree]
    fresh_z = first[0].copy()
    fresh_m = first[1].copy()
    fresh_m[0] -= 1
    keep = fresh_m > 0
    fresh = (fresh_z[keep], fresh_m[keep])
    for _ in range(1, n_max):
        z, m = preimages(F, fresh[0], fresh[1])
        levels.append((z, m))
        counts.append(counts[-1] + int(m.sum()))
        fresh = (z, m)
    return ZeroLadder(levels, counts)


def phase_layer(B, x):
    """
    Phase of a half-plane Blaschke product as a sum of arctan sigmoids.

    ``theta(x) = theta0 + sum_j m_j * 2*sigma((x - alpha_j)/beta_j)`` with
    ``sigma = arctan + pi/2`` and ``a_j = alpha_j + i*beta_j``, reduced into
    (-pi, pi]. Each factor contributes twice the sigmoid.
    """
    if B.domain != "halfplane":
        raise InvalidInputError("phase_layer needs a half-plane product")
    x = np.asarray(x, dtype=float)
    th = np.full(x.shape, B.theta)
    for a, m in zip(B.zeros, B.mults):
        th = th + m * 2 * (np.arctan((x - a.real) / a.imag) + np.pi / 2)
    return np.pi - np.mod(np.pi - th, 2 * np.pi)
