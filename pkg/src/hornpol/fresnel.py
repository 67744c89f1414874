"""Reflection of a plane wave from a lossless dielectric slab (etalon).

Interface coefficients for air -> slab at incidence angle ``alpha`` with
internal angle ``theta_t`` (Snell)::

    r_perp = (cos a - n cos t) / (cos a + n cos t)      (s, E normal to plane of incidence)
    r_par  = (n cos a - cos t) / (n cos a + cos t)      (p, E in plane of incidence)

With this convention the two coefficients have opposite signs below the
Brewster angle (73.7 deg for silicon), so at 45 deg ``Re r_par > 0`` and
``Re r_perp < 0``.  Multiple internal reflections are summed in closed form::

    r = r01 (1 - e^{i d}) / (1 - r01^2 e^{i d}),   d = 2 k0 n t cos(theta_t)

using the ``exp(-i w t)`` time convention (phase advances as ``e^{+i d}``).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import _kernels
from .constants import C0
from .errors import DomainError, NumericalError

#: Silicon mirror used in the measurements.
SILICON_INDEX = 3.416
SILICON_THICKNESS = 3.415e-3
MIRROR_ANGLE_DEG = 45.0
#: Detector coupling asymmetry applied to the parallel channel.
DEFAULT_ASYMMETRY = 0.85


@dataclass(frozen=True)
class DielectricSlab:
    n_index: float = SILICON_INDEX
    t: float = SILICON_THICKNESS
    alpha: float = MIRROR_ANGLE_DEG  # degrees

    def __post_init__(self):
        if not self.n_index >= 1.0:
            raise DomainError(f"refractive index must be >= 1, got {self.n_index}")
        if not self.t > 0:
            raise DomainError(f"thickness must be positive, got {self.t}")
        if not 0.0 <= self.alpha < 90.0:
            raise DomainError(f"incidence angle must lie in [0, 90) degrees, got {self.alpha}")

    @property
    def cos_incidence(self) -> float:
        return math.cos(math.radians(self.alpha))

    @property
    def cos_internal(self) -> float:
        s = math.sin(math.radians(self.alpha)) / self.n_index
        return math.sqrt(1.0 - s * s)

    def interface_coefficients(self) -> tuple[float, float]:
        """Air-to-slab ``(r_par, r_perp)``."""
        ci, ct, n = self.cos_incidence, self.cos_internal, self.n_index
        r_perp = (ci - n * ct) / (ci + n * ct)
        r_par = (n * ci - ct) / (n * ci + ct)
        return r_par, r_perp


@dataclass(frozen=True)
class SlabReflection:
    """Complex amplitude reflection at frequency (or frequencies) ``f``."""

    f: np.ndarray | float
    r_par: np.ndarray | complex
    r_perp: np.ndarray | complex


@dataclass(frozen=True)
class AsymmetryCalibration:
    A: float = DEFAULT_ASYMMETRY

    def __post_init__(self):
        if not 0.0 < self.A <= 1.0:
            raise DomainError(f"asymmetry must lie in (0, 1], got {self.A}")


class PhaseOffsets(NamedTuple):
    phi_par: np.ndarray | float
    phi_perp: np.ndarray | float
    delta_phi: np.ndarray | float
    defined: np.ndarray | bool


def slab_reflection(slab: DielectricSlab, f) -> SlabReflection:
    """Reflection coefficients of ``slab`` for scalar or array frequency ``f`` (Hz)."""
    r_par, r_perp, _, _ = _airy(slab, f)
    if np.ndim(f) == 0:
        return SlabReflection(float(f), complex(r_par[0]), complex(r_perp[0]))
    return SlabReflection(np.asarray(f, dtype=np.float64), r_par, r_perp)


def slab_transmission(slab: DielectricSlab, f) -> tuple[np.ndarray, np.ndarray]:
    """Complex ``(t_par, t_perp)`` through the slab, used for energy checks."""
    _, _, t_par, t_perp = _airy(slab, f)
    return t_par, t_perp


def _airy(slab, f):
    f_arr = np.atleast_1d(np.asarray(f, dtype=np.float64))
    if np.any(~(f_arr > 0)):
        raise DomainError("frequencies must be positive")
    r01_par, r01_perp = slab.interface_coefficients()
    ct = slab.cos_internal
    r_par, t_par = _kernels.etalon(f_arr, slab.n_index, slab.t, ct, r01_par)
    r_perp, t_perp = _kernels.etalon(f_arr, slab.n_index, slab.t, ct, r01_perp)
    return r_par, r_perp, t_par, t_perp


def wrap_phase(x):
    """Wrap to (-pi, pi]."""
    w = np.mod(np.asarray(x, dtype=np.float64) + np.pi, 2.0 * np.pi) - np.pi
    w = np.where(w == -np.pi, np.pi, w)
    return float(w) if np.ndim(x) == 0 else w


def phase_offsets(refl: SlabReflection) -> PhaseOffsets:
    """Arguments of both coefficients and their wrapped difference.

    Where either coefficient is exactly zero the phase is undefined: the
    entries are NaN and ``defined`` is False.
    """
    r_par = np.asarray(refl.r_par, dtype=np.complex128)
    r_perp = np.asarray(refl.r_perp, dtype=np.complex128)
    defined = (r_par != 0) & (r_perp != 0)
    phi_par = np.where(r_par != 0, np.angle(r_par), np.nan)
    phi_perp = np.where(r_perp != 0, np.angle(r_perp), np.nan)
    with np.errstate(invalid="ignore"):
        delta = np.where(defined, wrap_phase(np.nan_to_num(phi_par) - np.nan_to_num(phi_perp)), np.nan)
    if np.ndim(refl.r_par) == 0:
        return PhaseOffsets(float(phi_par), float(phi_perp), float(delta), bool(defined))
    return PhaseOffsets(phi_par, phi_perp, delta, defined)


def residual_phase(r) -> np.ndarray:
    """Phase of ``r`` modulo pi, in (-pi/2, pi/2]: the part not carried by ``sign(Re r)``."""
    r = np.asarray(r, dtype=np.complex128)
    psi = np.arctan2(r.imag, r.real)
    psi = np.where(psi > np.pi / 2, psi - np.pi, psi)
    psi = np.where(psi <= -np.pi / 2, psi + np.pi, psi)
    return psi


def residual_phase_difference(refl: SlabReflection) -> np.ndarray:
    """Extra parallel-minus-perpendicular phase from the finite slab thickness.

    ``Re r`` already carries the sign (the pi shift between the two
    polarizations), so the detector model only needs the remainder.  Zero
    where either coefficient vanishes.
    """
    return residual_phase(refl.r_par) - residual_phase(refl.r_perp)


def resonance_spacing(slab: DielectricSlab) -> float:
    """Frequency spacing of the reflection zeros, ``c0 / (2 n t cos theta_t)``."""
    return C0 / (2.0 * slab.n_index * slab.t * slab.cos_internal)


def resonance_spacing_external_angle(slab: DielectricSlab) -> float:
    """Same expression evaluated with the incidence angle instead of the internal one.

    Kept only for comparison with resonance positions quoted this way; it does
    not locate the zeros of :func:`slab_reflection` at oblique incidence.
    """
    return C0 / (2.0 * slab.n_index * slab.t * slab.cos_incidence)


def resonance_frequencies(slab: DielectricSlab, f_min: float, f_max: float) -> np.ndarray:
    """All reflection zeros ``p * spacing`` in ``[f_min, f_max]``."""
    df = resonance_spacing(slab)
    p = np.arange(math.ceil(f_min / df), math.floor(f_max / df) + 1)
    return p * df


def calibrate_asymmetry(measured_par, theory_par) -> AsymmetryCalibration:
    """Least-squares scale ``A`` minimising ``sum((A * measured - theory)**2)``.

    The result is clipped to at most 1; a non-positive optimum means the
    series cannot be matched by a positive scale and raises.
    """
    m = np.asarray(measured_par, dtype=np.float64)
    t = np.asarray(theory_par, dtype=np.float64)
    if m.shape != t.shape or m.ndim != 1:
        raise DomainError("measured and theory series must be 1-D and of equal length")
    if not (np.all(np.isfinite(m)) and np.all(np.isfinite(t))):
        raise DomainError("series contain non-finite values")
    if np.count_nonzero(t) * 2 <= t.size:
        raise NumericalError("theory series is zero on the majority of points")
    mm = float(np.dot(m, m))
    if mm == 0.0:
        raise NumericalError("measured series is identically zero")
    A = float(np.dot(m, t)) / mm
    if not A > 0:
        raise NumericalError(f"least-squares scale is non-positive ({A:.3g})")
    return AsymmetryCalibration(min(A, 1.0))
