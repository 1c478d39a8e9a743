"""
Malmquist-Takenaka bases on the circle and on the upper half-plane.

A basis is an ordered zero sequence ``a_0, a_1, ...`` plus an optional
inner prefix ``u``. On the disk

    phi_n(z) = u(z) * prod_{j<n} (z - a_j)/(1 - conj(a_j) z)
               * sqrt(1 - |a_n|^2)/(1 - conj(a_n) z),

and on the half-plane

    phi_n(x) = u(x) * sqrt(Im(a_n)/pi) * prod_{j<n} (x - a_j)/(x - conj(a_j))
               / (x - conj(a_n)).

The half-plane factor ``sqrt(Im a_n)`` makes the system orthonormal for
any zeros; it equals 1 for zeros on the line ``Im a = 1``.
"""

import json
from dataclasses import dataclass

import numpy as np

from .blaschke import FiniteBlaschke, evaluate
from .errors import InvalidInputError
from .numerics import RealLineGrid, TorusSignal, analytic_projection

__all__ = [
    "MTBasis", "mt_function", "mt_functions", "dyadic_ring_zeros",
    "project_invariant", "analyze", "synthesize", "block_bases",
    "coefficients_to_json", "coefficients_from_json", "gram_matrix",
]

_BOUNDARY_MARGIN = 1e-6


@dataclass(frozen=True, eq=False)
class MTBasis:
    """Ordered zeros generating a Malmquist-Takenaka system.

    Zero order is preserved exactly as given. Disk zeros with
    ``|a| > 1 - 1e-6`` are rejected: the normalization factor loses too
    many digits for the system to stay orthonormal on a 4096-point grid.
    """

    zeros: np.ndarray
    domain: str = "disk"
    prefix: FiniteBlaschke = None

    def __post_init__(self):
        if self.domain not in ("disk", "halfplane"):
            raise InvalidInputError(f"unknown domain {self.domain!r}")
        z = np.atleast_1d(np.asarray(self.zeros, dtype=complex)).ravel()
        if not np.all(np.isfinite(z)):
            raise InvalidInputError("non-finite zero")
        if self.domain == "disk" and np.any(np.abs(z) > 1 - _BOUNDARY_MARGIN):
            raise InvalidInputError("disk zeros must satisfy |a| <= 1 - 1e-6")
        if self.domain == "halfplane" and np.any(z.imag <= 0):
            raise InvalidInputError("half-plane zeros must satisfy Im a > 0")
        if self.prefix is not None and self.prefix.domain != self.domain:
            raise InvalidInputError("prefix lives on a different domain")
        z.setflags(write=False)
        object.__setattr__(self, "zeros", z)

    @property
    def count(self):
        return self.zeros.size

    def to_dict(self):
        return {
            "domain": self.domain,
            "zeros": [{"re": float(a.real), "im": float(a.imag)} for a in self.zeros],
            "prefix": None if self.prefix is None else self.prefix.to_dict(),
        }

    @classmethod
    def from_dict(cls, d):
        try:
            zeros = [complex(float(e["re"]), float(e["im"])) for e in d["zeros"]]
            prefix = d.get("prefix")
            prefix = None if prefix is None else FiniteBlaschke.from_dict(prefix)
            return cls(zeros, d.get("domain", "disk"), prefix)
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, InvalidInputError):
                raise
            raise InvalidInputError(f"malformed basis: {exc}") from exc


def _points(basis, where):
    if isinstance(where, TorusSignal):
        return where.points()
    if isinstance(where, RealLineGrid):
        return where.nodes
    return np.asarray(where, dtype=complex if basis.domain == "disk" else float)


def mt_functions(basis, where, K=None):
    """
    Values of ``phi_0 .. phi_{K-1}`` at ``where``.

    ``where`` is an array of points, a :class:`RealLineGrid` (half-plane) or
    a :class:`TorusSignal` whose grid is used (disk). Returns an array of
    shape ``(K, len(points))``.
    """
    K = basis.count if K is None else int(K)
    if K < 0 or K > basis.count:
        raise InvalidInputError(f"K={K} outside 0..{basis.count}")
    x = _points(basis, where)
    x = np.asarray(x, dtype=complex)
    run = np.ones(x.shape, dtype=complex)
    if basis.prefix is not None:
        run = run * evaluate(basis.prefix, x)
    out = np.empty((K,) + x.shape, dtype=complex)
    for n in range(K):
        a = basis.zeros[n]
        if basis.domain == "disk":
            den = 1 - np.conj(a) * x
            out[n] = run * np.sqrt(1 - abs(a) ** 2) / den
            run = run * (x - a) / den
        else:
            den = x - np.conj(a)
            out[n] = run * np.sqrt(a.imag / np.pi) / den
            run = run * (x - a) / den
    return out


def mt_function(basis, n, where):
    """Values of the single basis function ``phi_n`` at ``where``."""
    if not 0 <= n < basis.count:
        raise InvalidInputError(f"index {n} out of range 0..{basis.count - 1}")
    return mt_functions(basis, where, n + 1)[n]


def dyadic_ring_zeros(n_max):
    """
    Zeros ``(1 - 2**-n) * exp(2i*pi*j/2**n)`` for 1 <= n <= n_max, 0 <= j < 2**n.

    Ordered by scale n, then by angle index j.
    """
    n_max = int(n_max)
    if not 1 <= n_max <= 12:
        raise InvalidInputError("n_max must lie in 1..12")
    out = []
    for n in range(1, n_max + 1):
        j = np.arange(2 ** n)
        out.append((1 - 2.0 ** -n) * np.exp(2j * np.pi * j / 2 ** n))
    return np.concatenate(out)


def project_invariant(u, f, tol=1e-8):
    """
    Orthogonal projection of ``f`` onto ``u * H^2``: ``u * H(conj(u) * f)``.

    ``u`` is a disk :class:`FiniteBlaschke` or a :class:`TorusSignal` of an
    inner function's boundary values.
    """
    if isinstance(u, FiniteBlaschke):
        if u.domain != "disk":
            raise InvalidInputError("projection needs a disk inner function")
        us = evaluate(u, f.points())
    else:
        if u.N != f.N:
            raise InvalidInputError(f"grid mismatch: {u.N} vs {f.N}")
        us = u.samples
    dev = np.max(np.abs(np.abs(us) - 1))
    if dev > tol:
        raise InvalidInputError(f"u is not unimodular on the grid (deviation {dev:.2e})")
    return TorusSignal(us * analytic_projection(np.conj(us) * f.samples).samples)


def analyze(basis, f, K=None, grid=None):
    """
    Coefficients ``c_n = <f, phi_n>`` for n < K.

    Disk: ``f`` is a :class:`TorusSignal`. Half-plane: ``f`` holds samples
    at the nodes of ``grid``.
    """
    K = basis.count if K is None else int(K)
    if basis.domain == "disk":
        if not isinstance(f, TorusSignal):
            raise InvalidInputError("disk analysis needs a TorusSignal")
        phi = mt_functions(basis, f, K)
        return phi.conj() @ f.samples / f.N
    if grid is None:
        raise InvalidInputError("half-plane analysis needs a RealLineGrid")
    f = np.asarray(f, dtype=complex)
    if f.shape != grid.nodes.shape:
        raise InvalidInputError(f"grid mismatch: {f.shape} vs {grid.nodes.shape}")
    phi = mt_functions(basis, grid, K)
    return phi.conj() @ (grid.weights * f)


def synthesize(basis, coefficients, where):
    """Samples of ``sum_n c_n phi_n`` at ``where``."""
    c = np.asarray(coefficients, dtype=complex)
    phi = mt_functions(basis, where, c.size)
    vals = c @ phi
    if isinstance(where, TorusSignal):
        return TorusSignal(vals)
    return vals


def gram_matrix(basis, where, K=None):
    """Gram matrix ``<phi_m, phi_n>`` on a torus grid or RealLineGrid."""
    phi = mt_functions(basis, where, K)
    if basis.domain == "disk":
        return phi @ phi.conj().T / phi.shape[1]
    return (phi * where.weights) @ phi.conj().T


def block_bases(blocks, domain="disk"):
    """
    Block Malmquist-Takenaka systems over finite zero blocks.

    Block m uses the zeros of ``blocks[m]`` with prefix equal to the
    product of all earlier blocks, so the systems span the mutually
    orthogonal pieces ``P_{m-1} H^2 (-) P_m H^2`` with
    ``P_m = B_1 ... B_m``.
    """
    out = []
    acc_z, acc_m = [], []
    for zs in blocks:
        zs = np.atleast_1d(np.asarray(zs, dtype=complex))
        prefix = (FiniteBlaschke(np.concatenate(acc_z), np.concatenate(acc_m),
                                 domain=domain) if acc_z else None)
        out.append(MTBasis(zs, domain, prefix))
        acc_z.append(zs)
        acc_m.append(np.ones(zs.size, dtype=int))
    return out


def coefficients_to_json(basis, coefficients):
    c = np.asarray(coefficients, dtype=complex)
    return json.dumps({
        "basis": basis.to_dict(),
        "coefficients": [{"re": float(v.real), "im": float(v.imag)} for v in c],
    }, sort_keys=True)


def coefficients_from_json(text):
    d = json.loads(text)
    try:
        basis = MTBasis.from_dict(d["basis"])
        c = np.array([complex(float(e["re"]), float(e["im"])) for e in d["coefficients"]])
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, InvalidInputError):
            raise
        raise InvalidInputError(f"malformed coefficient file: {exc}") from exc
    return basis, c
