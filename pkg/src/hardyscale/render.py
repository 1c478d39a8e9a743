"""
Phase and modulus renders of maps of the disk.

Pixel ``(row, col)`` shows the point ``z = exp(-y + i x)`` with ``x`` and
``y`` at pixel centres; the top row holds the largest ``y`` (the centre of
the disk) and the bottom row the circle side. Output is binary PPM (P6).

* ``phase``: ``arg F(z)`` in (-pi, pi] indexes a 256-entry hue wheel,
  ``index = floor((phase + pi)/(2 pi) * 256) mod 256``.
* ``neglog``: ``-ln|F(z)|`` clipped to [0, 10] maps linearly to gray.
"""

import os
import tempfile
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .blaschke import FiniteBlaschke, IterateChain
from .errors import HardyError, InvalidInputError, RenderError
from .wavelets import G_eval

__all__ = [
    "RenderSpec", "HUE_TABLE", "render_field", "render_ppm", "write_ppm",
    "count_zero_peaks", "preset_target", "PRESETS",
]

# Fully saturated HSV wheel, entry i = hsv(i/256, 1, 1) as RGB bytes
# rounded to nearest; row-major, 256 x 3.
_HUE_HEX = (
    "ff0000ff0600ff0c00ff1200ff1800ff1e00ff2400ff2a00ff3000ff3600ff3c00ff4200ff4800ff4e00ff5400ff5a00"
    "ff6000ff6600ff6c00ff7200ff7800ff7e00ff8300ff8900ff8f00ff9500ff9b00ffa100ffa700ffad00ffb300ffb900"
    "ffbf00ffc500ffcb00ffd100ffd700ffdd00ffe300ffe900ffef00fff500fffb00fdff00f7ff00f1ff00ebff00e5ff00"
    "dfff00d9ff00d3ff00cdff00c7ff00c1ff00bbff00b5ff00afff00a9ff00a3ff009dff0097ff0091ff008bff0085ff00"
    "80ff007aff0074ff006eff0068ff0062ff005cff0056ff0050ff004aff0044ff003eff0038ff0032ff002cff0026ff00"
    "20ff001aff0014ff000eff0008ff0002ff0000ff0400ff0a00ff1000ff1600ff1c00ff2200ff2800ff2e00ff3400ff3a"
    "00ff4000ff4600ff4c00ff5200ff5800ff5e00ff6400ff6a00ff7000ff7600ff7c00ff8100ff8700ff8d00ff9300ff99"
    "00ff9f00ffa500ffab00ffb100ffb700ffbd00ffc300ffc900ffcf00ffd500ffdb00ffe100ffe700ffed00fff300fff9"
    "00ffff00f9ff00f3ff00edff00e7ff00e1ff00dbff00d5ff00cfff00c9ff00c3ff00bdff00b7ff00b1ff00abff00a5ff"
    "009fff0099ff0093ff008dff0087ff0081ff007cff0076ff0070ff006aff0064ff005eff0058ff0052ff004cff0046ff"
    "0040ff003aff0034ff002eff0028ff0022ff001cff0016ff0010ff000aff0004ff0200ff0800ff0e00ff1400ff1a00ff"
    "2000ff2600ff2c00ff3200ff3800ff3e00ff4400ff4a00ff5000ff5600ff5c00ff6200ff6800ff6e00ff7400ff7a00ff"
    "8000ff8500ff8b00ff9100ff9700ff9d00ffa300ffa900ffaf00ffb500ffbb00ffc100ffc700ffcd00ffd300ffd900ff"
    "df00ffe500ffeb00fff100fff700fffd00ffff00fbff00f5ff00efff00e9ff00e3ff00ddff00d7ff00d1ff00cbff00c5"
    "ff00bfff00b9ff00b3ff00adff00a7ff00a1ff009bff0095ff008fff0089ff0083ff007eff0078ff0072ff006cff0066"
    "ff0060ff005aff0054ff004eff0048ff0042ff003cff0036ff0030ff002aff0024ff001eff0018ff0012ff000cff0006"
)
HUE_TABLE = np.frombuffer(bytes.fromhex(_HUE_HEX), dtype=np.uint8).reshape(256, 3)

NEGLOG_MAX = 10.0
FAIL_FRACTION = 1e-3


@dataclass(frozen=True, eq=False)
class RenderSpec:
    """Window, size, mode and target (any vectorized map of the disk)."""

    target: object
    x_range: tuple = (-np.pi, np.pi)
    y_range: tuple = (0.0, 4.0)
    width: int = 512
    height: int = 256
    mode: str = "phase"

    def __post_init__(self):
        if self.mode not in ("phase", "neglog"):
            raise InvalidInputError(f"unknown render mode {self.mode!r}")
        if int(self.width) < 16 or int(self.height) < 16:
            raise InvalidInputError("width and height must be at least 16")
        for name, (lo, hi) in (("x", self.x_range), ("y", self.y_range)):
            if not (np.isfinite(lo) and np.isfinite(hi) and hi > lo):
                raise InvalidInputError(f"{name}-range must be a nonempty finite interval")
        if not callable(self.target):
            raise InvalidInputError("render target is not evaluable")

    def grid(self):
        (x0, x1), (y0, y1) = self.x_range, self.y_range
        x = x0 + (np.arange(self.width) + 0.5) * (x1 - x0) / self.width
        y = y1 - (np.arange(self.height) + 0.5) * (y1 - y0) / self.height
        return x, y


def _evaluate_rows(target, z):
    out = np.empty(z.shape, dtype=complex)
    for r in range(z.shape[0]):
        try:
            with np.errstate(all="ignore"):
                out[r] = target(z[r])
        except HardyError:
            for c in range(z.shape[1]):
                try:
                    with np.errstate(all="ignore"):
                        out[r, c] = target(z[r, c])
                except HardyError:
                    out[r, c] = np.nan
    return out


def render_field(spec):
    """
    Float field of the render (phase in (-pi, pi] or clipped -ln|F|) and
    the mask of pixels where evaluation failed.

    Raises
    ------
    RenderError
        More than 0.1% of the pixels failed.
    """
    x, y = spec.grid()
    z = np.exp(-y[:, None] + 1j * x[None, :])
    w = _evaluate_rows(spec.target, z)
    bad = ~np.isfinite(w)
    if spec.mode == "phase":
        v = np.angle(np.where(bad, 1, w))
        v = np.where(v <= -np.pi, np.pi, v)
    else:
        with np.errstate(divide="ignore"):
            v = -np.log(np.abs(np.where(bad, 1, w)))
        v = np.clip(v, 0.0, NEGLOG_MAX)
    if bad.mean() > FAIL_FRACTION:
        raise RenderError(f"evaluation failed at {bad.mean():.2%} of the pixels")
    return v, bad


def _to_rgb(v, bad, mode):
    if mode == "phase":
        idx = np.floor((v + np.pi) / (2 * np.pi) * 256).astype(np.int64) % 256
        rgb = HUE_TABLE[idx]
    else:
        g = np.rint(v / NEGLOG_MAX * 255).astype(np.uint8)
        rgb = np.repeat(g[..., None], 3, axis=-1)
    rgb = np.array(rgb, dtype=np.uint8)
    rgb[bad] = 0
    return rgb


def render_ppm(spec):
    """The render as P6 PPM bytes; deterministic for a fixed spec."""
    v, bad = render_field(spec)
    rgb = _to_rgb(v, bad, spec.mode)
    header = b"P6\n%d %d\n255\n" % (spec.width, spec.height)
    return header + rgb.tobytes()


def write_ppm(spec, path):
    """Render and write atomically; nothing is left behind on failure."""
    data = render_ppm(spec)
    d = os.path.dirname(os.path.abspath(path))
    try:
        fd, tmp = tempfile.mkstemp(dir=d, prefix=".render-", suffix=".ppm")
    except OSError as exc:
        raise InvalidInputError(f"cannot write to {path}: {exc}") from exc
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except OSError as exc:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise InvalidInputError(f"cannot write to {path}: {exc}") from exc
    return len(data)


def count_zero_peaks(field):
    """
    Connected plateaus of local maxima of a neglog field, 8-neighbour,
    periodic in x (columns). A saturated band counts once.
    """
    v = np.asarray(field, dtype=float)
    m = ndimage.maximum_filter(v, size=3, mode=("nearest", "wrap"))
    peak = v >= m
    lab, n = ndimage.label(peak, structure=np.ones((3, 3), dtype=int))
    if n == 0:
        return 0
    parent = list(range(n + 1))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    left, right = lab[:, 0], lab[:, -1]
    H = v.shape[0]
    for r in range(H):
        if not left[r]:
            continue
        for rr in (r - 1, r, r + 1):
            if 0 <= rr < H and right[rr]:
                a, b = find(left[r]), find(right[rr])
                if a != b:
                    parent[a] = b
    return len({find(i) for i in range(1, n + 1)})


def _halfplane_sine_map(z):
    z = np.asarray(z, dtype=complex)
    return G_eval(1j * (1 - z) / (1 + z))


PRESETS = {
    "fig2": (FiniteBlaschke([0.5], nu=1), 5),
    "fig3": (FiniteBlaschke([0.5, -0.5], nu=1), 5),
    "fig4": (_halfplane_sine_map, 2),
}


def preset_target(name, n_iter=None):
    """
    Named maps: ``fig2`` is ``z (z - 1/2)/(1 - z/2)``, ``fig3`` is
    ``z (z**2 - 1/4)/(1 - z**2/4)``, ``fig4`` is ``G(i (1 - z)/(1 + z))``.
    Returns the ``n_iter``-fold composition (preset default when None).
    """
    if name not in PRESETS:
        raise InvalidInputError(f"unknown preset {name!r}")
    f, n = PRESETS[name]
    n = n if n_iter is None else int(n_iter)
    if n < 1:
        raise InvalidInputError("iteration count must be positive")
    return IterateChain.power(f, n)
