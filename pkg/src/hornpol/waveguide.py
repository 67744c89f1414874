"""Analytic TE/TM mode catalog for an ideal rectangular metal waveguide.

Cutoff wavenumber of mode (m, n) in a guide of width ``a`` and height ``b``::

    k_c = sqrt((m*pi/a)**2 + (n*pi/b)**2),   f_c = c0 * k_c / (2*pi)

Transverse fields are the separable sin/cos solutions of the reduced
Helmholtz equation for ``h_z`` (TE) or ``e_z`` (TM) that satisfy the
conducting-wall conditions.  Every mode is scaled to unit peak transverse
|E| over the cross-section; physical excitation strength lives in the
amplitude table of :mod:`hornpol.synth`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .constants import C0
from .errors import DomainError


class Family(str, Enum):
    TE = "TE"
    TM = "TM"


@dataclass(frozen=True)
class RectangularGuide:
    """Broad wall ``a`` and narrow wall ``b``, both in metres."""

    a: float
    b: float

    def __post_init__(self):
        if not (self.a > 0 and self.b > 0):
            raise DomainError(f"guide dimensions must be positive, got a={self.a}, b={self.b}")
        if self.a < self.b:
            raise DomainError(f"broad wall a={self.a} must be >= narrow wall b={self.b}")


@dataclass(frozen=True)
class ModeId:
    family: Family
    m: int
    n: int

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        if self.m < 0 or self.n < 0 or int(self.m) != self.m or int(self.n) != self.n:
            raise DomainError(f"mode indices must be non-negative integers, got ({self.m}, {self.n})")
        object.__setattr__(self, "m", int(self.m))
        object.__setattr__(self, "n", int(self.n))
        if self.family is Family.TE and self.m == 0 and self.n == 0:
            raise DomainError("TE00 does not exist")
        if self.family is Family.TM and (self.m == 0 or self.n == 0):
            raise DomainError(f"TM modes need m >= 1 and n >= 1, got TM{self.m}{self.n}")

    @classmethod
    def parse(cls, label: str) -> "ModeId":
        """Parse ``"TE10"`` or ``"TM_1_1"``-style labels."""
        text = label.strip().upper().replace("_", "")
        if len(text) < 4 or text[:2] not in ("TE", "TM"):
            raise DomainError(f"cannot parse mode label {label!r}")
        digits = text[2:]
        if "," in digits:
            m, n = digits.split(",")
        elif len(digits) == 2:
            m, n = digits[0], digits[1]
        else:
            raise DomainError(f"ambiguous mode label {label!r}; use e.g. 'TE1,10'")
        try:
            return cls(Family(text[:2]), int(m), int(n))
        except ValueError as exc:
            if isinstance(exc, DomainError):
                raise
            raise DomainError(f"cannot parse mode label {label!r}") from exc

    def __str__(self):
        if self.m < 10 and self.n < 10:
            return f"{self.family.value}{self.m}{self.n}"
        return f"{self.family.value}{self.m},{self.n}"

    def sort_key(self):
        return (0 if self.family is Family.TE else 1, self.m, self.n)


@dataclass(frozen=True)
class ModeDispersion:
    """Cutoff and propagation constant of one mode at frequency ``f``.

    ``beta`` is the phase constant when propagating; for an evanescent mode it
    holds the magnitude of the (imaginary) propagation constant, i.e. the
    field decay rate in Np/m, and ``evanescent`` is set.
    """

    mode: ModeId
    f: float
    f_c: float
    k_c: float
    beta: float
    evanescent: bool


@dataclass(frozen=True)
class TransverseFieldSample:
    x: float
    y: float
    ex: float
    ey: float
    longitudinal: float  # h_z for TE, e_z for TM

    @property
    def e_magnitude(self):
        return math.hypot(self.ex, self.ey)


def cutoff_wavenumber(guide: RectangularGuide, mode: ModeId) -> float:
    return math.hypot(mode.m * math.pi / guide.a, mode.n * math.pi / guide.b)


def cutoff_frequency(guide: RectangularGuide, mode: ModeId) -> float:
    """Cutoff frequency in Hz."""
    return C0 * cutoff_wavenumber(guide, mode) / (2.0 * math.pi)


def propagation_constant(guide: RectangularGuide, mode: ModeId, f: float) -> ModeDispersion:
    if not f > 0:
        raise DomainError(f"frequency must be positive, got {f}")
    k_c = cutoff_wavenumber(guide, mode)
    f_c = C0 * k_c / (2.0 * math.pi)
    k = 2.0 * math.pi * f / C0
    # factored form keeps k**2 == k_c**2 + beta**2 accurate near cutoff
    if f > f_c:
        beta = math.sqrt((k - k_c) * (k + k_c))
        evanescent = False
    else:
        beta = math.sqrt((k_c - k) * (k_c + k))
        evanescent = True
    return ModeDispersion(mode, f, f_c, k_c, beta, evanescent)


def enumerate_modes(guide: RectangularGuide, f_max: float, max_index: int | None = None) -> list[ModeId]:
    """All valid TE/TM modes with cutoff below ``f_max`` (or index <= ``max_index``)."""
    if max_index is None:
        k_max = 2.0 * math.pi * f_max / C0
        m_top = int(k_max * guide.a / math.pi) + 1
        n_top = int(k_max * guide.b / math.pi) + 1
    else:
        m_top = n_top = max_index
    modes = []
    for m in range(m_top + 1):
        for n in range(n_top + 1):
            if m == 0 and n == 0:
                continue
            modes.append(ModeId(Family.TE, m, n))
            if m >= 1 and n >= 1:
                modes.append(ModeId(Family.TM, m, n))
    if max_index is None:
        modes = [md for md in modes if cutoff_frequency(guide, md) < f_max]
    return sort_modes(guide, modes)


def sort_modes(guide: RectangularGuide, modes) -> list[ModeId]:
    """Ascending cutoff, TE before TM on ties, then (m, n)."""
    return sorted(modes, key=lambda md: (cutoff_frequency(guide, md),) + md.sort_key())


def propagating_modes(guide: RectangularGuide, f: float) -> list[ModeDispersion]:
    if not f > 0:
        raise DomainError(f"frequency must be positive, got {f}")
    return [propagation_constant(guide, md, f) for md in enumerate_modes(guide, f)]


def mode_count(guide: RectangularGuide, f) -> np.ndarray | int:
    """Number of propagating modes n(f); accepts scalars or arrays."""
    f_arr = np.atleast_1d(np.asarray(f, dtype=np.float64))
    cutoffs = np.array([cutoff_frequency(guide, md) for md in enumerate_modes(guide, float(f_arr.max()))])
    counts = np.sum(cutoffs[None, :] < f_arr[:, None], axis=1)
    return int(counts[0]) if np.ndim(f) == 0 else counts


def first_higher_order_cutoff(guide: RectangularGuide) -> float:
    """Cutoff of the second mode, i.e. the end of the single-mode band."""
    return min(cutoff_frequency(guide, ModeId(Family.TE, 2, 0)), cutoff_frequency(guide, ModeId(Family.TE, 0, 1)))


def transverse_field(guide: RectangularGuide, mode: ModeId, x, y) -> TransverseFieldSample:
    """Unit-peak transverse E (and the longitudinal potential) at ``(x, y)``.

    Uses ``E_t ∝ z × grad(h_z)`` for TE and ``E_t ∝ grad(e_z)`` for TM.
    """
    a, b = guide.a, guide.b
    if not (0.0 <= x <= a and 0.0 <= y <= b):
        raise DomainError(f"position ({x}, {y}) outside the {a} x {b} cross-section")
    kx = mode.m * math.pi / a
    ky = mode.n * math.pi / b
    sx, cx = math.sin(kx * x), math.cos(kx * x)
    sy, cy = math.sin(ky * y), math.cos(ky * y)
    if mode.family is Family.TE:
        # h_z = cos(kx x) cos(ky y);  E ∝ (dh/dy, -dh/dx)
        ex = -ky * cx * sy
        ey = kx * sx * cy
        longitudinal = cx * cy
    else:
        # e_z = sin(kx x) sin(ky y);  E_t ∝ -grad(e_z)
        ex = -kx * cx * sy
        ey = -ky * sx * cy
        longitudinal = sx * sy
    norm = _peak_transverse(kx, ky)
    return TransverseFieldSample(x, y, ex / norm, ey / norm, longitudinal)


def _peak_transverse(kx: float, ky: float) -> float:
    # |E|^2 is bilinear in (sin^2 kx x, sin^2 ky y); its maximum sits on a corner
    return max(kx, ky)


def transverse_field_grid(guide: RectangularGuide, mode: ModeId, nx: int, ny: int):
    """Vectorised fields on an ``nx`` by ``ny`` lattice including the walls.

    Returns ``(x, y, ex, ey, longitudinal)`` with 2-D arrays indexed ``[i, j]``.
    """
    x = np.linspace(0.0, guide.a, nx)
    y = np.linspace(0.0, guide.b, ny)
    X, Y = np.meshgrid(x, y, indexing="ij")
    kx = mode.m * math.pi / guide.a
    ky = mode.n * math.pi / guide.b
    sx, cx = np.sin(kx * X), np.cos(kx * X)
    sy, cy = np.sin(ky * Y), np.cos(ky * Y)
    norm = _peak_transverse(kx, ky)
    if mode.family is Family.TE:
        ex, ey, lon = -ky * cx * sy, kx * sx * cy, cx * cy
    else:
        ex, ey, lon = -kx * cx * sy, -ky * sx * cy, sx * sy
    return x, y, ex / norm, ey / norm, lon
