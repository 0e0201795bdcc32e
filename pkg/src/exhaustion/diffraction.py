"""Aperture diffraction by exhaustion expansion of the angular spectrum.

The field behind an aperture with even spatial-frequency transform ``F`` is
truncated to the propagating square ``|kx|, |ky| <= k`` and both transverse
integrals are expanded as dyadic exhaustion sums:

    phi = (2 k^2 / pi) e^{-i w0 t} sum_{n,m,p,q} (-1)^(m+q) 2^(-n-p) F(m k/2^n, q k/2^p)
          cos(m x k/2^n) cos(q y k/2^p) exp(i z k sqrt(1 - m^2/4^n - q^2/4^p))

Each summand is a plane wave, so the expansion doubles as a listing of
plane-wave components and their axial group speeds.  Terms with a negative
radicand are evanescent and decay as ``exp(-z k sqrt(|.|))`` (or are dropped
with ``evanescent="zero"``).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Literal, Sequence

import numpy as np

__all__ = [
    "Aperture",
    "FieldPoint",
    "PlaneWaveComponent",
    "WaveParams",
    "field_exhaustion",
    "field_exhaustion_literal",
    "field_reference",
    "group_velocity_spectrum",
    "helmholtz_residual",
    "rect_aperture",
    "unit_aperture",
]

Evanescent = Literal["decay", "zero"]


@dataclass(frozen=True)
class WaveParams:
    k: float
    omega0: float
    c: float

    def __post_init__(self) -> None:
        if not (self.k > 0 and self.omega0 > 0 and self.c > 0):
            raise ValueError("k, omega0 and c must be positive")
        if not math.isclose(self.k, self.omega0 / self.c, rel_tol=1e-12):
            raise ValueError(f"k={self.k} is not omega0/c={self.omega0 / self.c}")

    @classmethod
    def from_k(cls, k: float, c: float = 1.0) -> WaveParams:
        return cls(k=k, omega0=k * c, c=c)


@dataclass(frozen=True)
class FieldPoint:
    x: float
    y: float
    z: float
    t: float = 0.0

    def __post_init__(self) -> None:
        if self.z < 0:
            raise ValueError("field points must have z >= 0")


@dataclass(frozen=True)
class Aperture:
    """Spatial-frequency transform ``F(kx, ky)`` of an aperture.

    ``transform`` is called with broadcastable float arrays.  When
    ``even_symmetric`` is set the evenness in each argument is spot-checked.
    """

    transform: Callable[[np.ndarray, np.ndarray], np.ndarray]
    even_symmetric: bool = True
    label: str = "aperture"

    def __post_init__(self) -> None:
        if not self.even_symmetric:
            return
        pts = np.random.default_rng(0).uniform(-5.0, 5.0, size=(2, 16))
        kx, ky = pts
        f = np.asarray(self.transform(kx, ky), dtype=np.float64)
        scale = np.maximum(np.abs(f), 1e-300)
        for other in (self.transform(-kx, ky), self.transform(kx, -ky)):
            if np.any(np.abs(np.asarray(other) - f) > 1e-12 * scale + 1e-300):
                raise ValueError(f"{self.label} transform is not even in kx and ky")

    def __call__(self, kx, ky) -> np.ndarray:
        return np.broadcast_to(np.asarray(self.transform(kx, ky), dtype=np.float64), np.broadcast(kx, ky).shape)


def unit_aperture() -> Aperture:
    return Aperture(lambda kx, ky: np.ones(np.broadcast(kx, ky).shape), label="unit")


def rect_aperture(wx: float, wy: float) -> Aperture:
    """Transform of a ``wx`` by ``wy`` rectangle: ``wx wy sinc(kx wx/2) sinc(ky wy/2)``."""
    if not (wx > 0 and wy > 0):
        raise ValueError("aperture widths must be positive")
    # np.sinc is the normalized sinc sin(pi t)/(pi t)
    return Aperture(
        lambda kx, ky: wx * wy * np.sinc(kx * wx / (2 * np.pi)) * np.sinc(ky * wy / (2 * np.pi)),
        label=f"rect({wx:g}x{wy:g})",
    )


def _axial(zk: float, radicand: np.ndarray, evanescent: Evanescent) -> np.ndarray:
    """``exp(i zk sqrt(r))`` for ``r >= 0``, the evanescent branch otherwise."""
    root = np.sqrt(np.abs(radicand))
    if evanescent == "decay":
        decay = np.exp(-zk * root)
    elif evanescent == "zero":
        decay = np.zeros_like(root)
    else:
        raise ValueError(f"evanescent must be 'decay' or 'zero', got {evanescent!r}")
    return np.where(radicand >= 0, np.exp(1j * zk * root), decay)


def _levels(levels: int | Sequence[int]) -> tuple[int, int]:
    n, p = (levels, levels) if isinstance(levels, int) else tuple(levels)
    if n < 1 or p < 1:
        raise ValueError("levels must be >= 1")
    return int(n), int(p)


def _complex_sum(parts: list[complex]) -> complex:
    return complex(math.fsum(z.real for z in parts), math.fsum(z.imag for z in parts))


def _require_even(ap: Aperture) -> None:
    if not ap.even_symmetric:
        raise ValueError("the exhaustion expansion needs an even aperture transform")


def field_exhaustion(
    ap: Aperture,
    pt: FieldPoint,
    wave: WaveParams,
    levels: int | Sequence[int] = 8,
    evanescent: Evanescent = "decay",
) -> complex:
    """Field at ``pt`` from the exhaustion expansion truncated at ``levels = (N, P)``.

    Evaluated in telescoped form: a ``(2^N - 1) x (2^P - 1)`` interior-node
    double sum scaled by ``2^(-N-P)``.
    """
    _require_even(ap)
    big_n, big_p = _levels(levels)
    k = wave.k
    v = np.arange(1, 1 << big_p, dtype=np.float64) / 2.0**big_p
    cos_y = np.cos(v * pt.y * k)
    rows = max(1, (1 << 20) // v.size)
    parts = []
    for lo in range(1, 1 << big_n, rows):
        u = np.arange(lo, min(lo + rows, 1 << big_n), dtype=np.float64)[:, None] / 2.0**big_n
        g = ap(u * k, v * k) * np.cos(u * pt.x * k) * cos_y * _axial(pt.z * k, 1.0 - u * u - v * v, evanescent)
        parts.append(complex(np.sum(g)))
    total = _complex_sum(parts) / 2.0 ** (big_n + big_p)
    return 2 * k * k / math.pi * cmath.exp(-1j * wave.omega0 * pt.t) * total


def field_exhaustion_literal(
    ap: Aperture,
    pt: FieldPoint,
    wave: WaveParams,
    levels: int | Sequence[int] = 3,
    evanescent: Evanescent = "decay",
) -> complex:
    """The quadruple sum term by term; only practical for small levels."""
    _require_even(ap)
    big_n, big_p = _levels(levels)
    k = wave.k
    terms = []
    for n in range(1, big_n + 1):
        m = np.arange(1, 1 << n, dtype=np.float64)[:, None]
        for p in range(1, big_p + 1):
            q = np.arange(1, 1 << p, dtype=np.float64)[None, :]
            sign = np.where((m + q) % 2 == 0, 1.0, -1.0)
            g = (
                sign
                * 2.0 ** (-n - p)
                * ap(m * k / 2.0**n, q * k / 2.0**p)
                * np.cos(m * pt.x * k / 2.0**n)
                * np.cos(q * pt.y * k / 2.0**p)
                * _axial(pt.z * k, 1.0 - m * m / 4.0**n - q * q / 4.0**p, evanescent)
            )
            terms.extend(g.ravel().tolist())
    return 2 * k * k / math.pi * cmath.exp(-1j * wave.omega0 * pt.t) * _complex_sum(terms)


def field_reference(
    ap: Aperture,
    pt: FieldPoint,
    wave: WaveParams,
    grid: int = 512,
    evanescent: Evanescent = "decay",
) -> complex:
    """Midpoint-rule angular-spectrum integral over ``[-k, k]^2`` on a ``grid x grid`` mesh."""
    if grid < 64:
        raise ValueError("reference grid must be at least 64")
    k = wave.k
    h = 2 * k / grid
    kx = (-k + (np.arange(grid) + 0.5) * h)[:, None]
    ky = (-k + (np.arange(grid) + 0.5) * h)[None, :]
    f = ap(kx, ky)
    if not np.all(np.isfinite(f)):
        raise ValueError("aperture transform is non-finite on the reference grid")
    g = f * np.exp(-1j * (kx * pt.x + ky * pt.y)) * _axial(pt.z * k, 1.0 - (kx / k) ** 2 - (ky / k) ** 2, evanescent)
    total = _complex_sum([complex(np.sum(row)) for row in g])
    return cmath.exp(-1j * wave.omega0 * pt.t) * total * h * h / (2 * math.pi)


def helmholtz_residual(
    field: Callable[[FieldPoint], complex],
    pt: FieldPoint,
    k: float,
    h: float | None = None,
) -> float:
    """Normalized ``|lap(phi) + k^2 phi| / (k^2 max(|phi|, eps))`` by central differences."""
    h = 0.01 / k if h is None else h
    if pt.z < h:
        raise ValueError("field point must be at least h above the screen")
    centre = field(pt)
    lap = -6.0 * centre
    for dx, dy, dz in ((h, 0, 0), (-h, 0, 0), (0, h, 0), (0, -h, 0), (0, 0, h), (0, 0, -h)):
        lap += field(FieldPoint(pt.x + dx, pt.y + dy, pt.z + dz, pt.t))
    lap /= h * h
    return abs(lap + k * k * centre) / (k * k * max(abs(centre), np.finfo(float).tiny))


@dataclass(frozen=True)
class PlaneWaveComponent:
    n: int
    m: int
    p: int
    q: int
    kx: float
    ky: float
    weight: float
    kz: float | None
    group_speed_z: float | None
    evanescent: bool


def group_velocity_spectrum(
    ap: Aperture,
    wave: WaveParams,
    levels: int | Sequence[int] = 4,
) -> list[PlaneWaveComponent]:
    """Every plane-wave term of the expansion through ``levels``.

    ``group_speed_z = c kz / k`` follows from the free-space dispersion
    relation; evanescent terms have no ``kz`` or speed.
    """
    big_n, big_p = _levels(levels)
    k, c = wave.k, wave.c
    out = []
    for n in range(1, big_n + 1):
        for m in range(1, 1 << n):
            kx = m * k / 2.0**n
            for p in range(1, big_p + 1):
                for q in range(1, 1 << p):
                    ky = q * k / 2.0**p
                    weight = (-1.0) ** (m + q) * 2.0 ** (-n - p) * float(ap(kx, ky))
                    radicand = 1.0 - m * m / 4.0**n - q * q / 4.0**p
                    if radicand >= 0:
                        kz = k * math.sqrt(radicand)
                        out.append(PlaneWaveComponent(n, m, p, q, kx, ky, weight, kz, c * kz / k, False))
                    else:
                        out.append(PlaneWaveComponent(n, m, p, q, kx, ky, weight, None, None, True))
    return out
