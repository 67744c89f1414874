"""Coherent-detector current traces for the two waveguide orientations.

With ``theta = 2 pi f dL / c0`` and the slab coefficients ``r_par``,
``r_perp`` the E-orientation current is::

    I_E = C * sum_l [ A Re(r_par)  E_l cos(theta + phi_par_l + dphi) C1_l
                    +   Re(r_perp) H_l cos(theta + phi_perp_l)       C2_l ]

and the H-orientation current swaps which amplitude meets which
coefficient::

    I_H = C * sum_l [   Re(r_perp) E_l cos(theta + phi_par_l)        C3_l
                    + A Re(r_par)  H_l cos(theta + phi_perp_l + dphi) C4_l ]

Both are finally multiplied by the detector roll-off ``A0 / (1 + (2 pi f tau)^2)``.
``dphi`` is the residual parallel-minus-perpendicular phase of the slab
(see :func:`hornpol.fresnel.residual_phase_difference`); the pi shift between
the polarizations is already carried by the signs of ``Re r``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Sequence, Union

import numpy as np

from . import _kernels
from .constants import C0
from .errors import DomainError
from .fresnel import (
    DEFAULT_ASYMMETRY,
    AsymmetryCalibration,
    DielectricSlab,
    SlabReflection,
    residual_phase_difference,
    slab_reflection,
)
from .waveguide import Family, ModeId, RectangularGuide, cutoff_frequency

Coefficient = Union[float, Callable[[np.ndarray], np.ndarray]]

DEFAULT_DELTA_L = 0.15
DEFAULT_COUPLING = 1e-12
DEFAULT_TAU = 500e-15
DEFAULT_STEP = 25e6


class Orientation(str, Enum):
    """Which waveguide plane is aligned with the mirror's plane of incidence."""

    E = "E"
    H = "H"


@dataclass(frozen=True)
class ModeAmplitude:
    """One row of the amplitude table: E/H-plane field strengths of mode ``l``."""

    amp_E: float
    amp_H: float
    phase_par: float = 0.0
    phase_perp: float = 0.0
    corr: tuple[Coefficient, Coefficient, Coefficient, Coefficient] = (1.0, 1.0, 1.0, 1.0)
    mode: ModeId | None = None

    def __post_init__(self):
        if not (self.amp_E >= 0 and self.amp_H >= 0):
            raise DomainError(f"mode amplitudes must be non-negative, got ({self.amp_E}, {self.amp_H})")
        if len(self.corr) != 4:
            raise DomainError("exactly four correction coefficients are required")
        for c in self.corr:
            if not callable(c) and not 0.0 <= c <= 1.0:
                raise DomainError(f"correction coefficient {c} outside [0, 1]")

    @property
    def power(self) -> float:
        return self.amp_E ** 2 + self.amp_H ** 2


@dataclass(frozen=True)
class ModeAmplitudeTable:
    entries: tuple[ModeAmplitude, ...]

    def __post_init__(self):
        entries = tuple(self.entries)
        object.__setattr__(self, "entries", entries)
        if not 1 <= len(entries) <= 6:
            raise DomainError(f"table needs 1 to 6 modes, got {len(entries)}")
        if any(c != 1.0 for c in entries[0].corr):
            raise DomainError("the fundamental mode (l = 0) must have all correction coefficients equal to 1")

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    @property
    def total_power(self) -> float:
        return sum(e.power for e in self.entries)


@dataclass(frozen=True)
class InterferometerConfig:
    delta_L: float = DEFAULT_DELTA_L
    coupling: float = DEFAULT_COUPLING
    asymmetry: float = DEFAULT_ASYMMETRY
    rolloff_tau: float = DEFAULT_TAU
    rolloff_A0: float = 1.0

    def __post_init__(self):
        if isinstance(self.asymmetry, AsymmetryCalibration):
            object.__setattr__(self, "asymmetry", self.asymmetry.A)
        AsymmetryCalibration(self.asymmetry)
        if self.delta_L == 0:
            raise DomainError("delay length must be non-zero")
        if not self.coupling > 0:
            raise DomainError(f"coupling must be positive, got {self.coupling}")
        if not self.rolloff_tau >= 0:
            raise DomainError(f"roll-off time constant must be >= 0, got {self.rolloff_tau}")
        if not self.rolloff_A0 > 0:
            raise DomainError(f"envelope scale must be positive, got {self.rolloff_A0}")


@dataclass(frozen=True)
class DetectorTrace:
    frequencies: np.ndarray
    currents: np.ndarray
    orientation: Orientation = field(default=Orientation.E)

    def __post_init__(self):
        f = np.asarray(self.frequencies, dtype=np.float64)
        i = np.asarray(self.currents, dtype=np.float64)
        object.__setattr__(self, "frequencies", f)
        object.__setattr__(self, "currents", i)
        object.__setattr__(self, "orientation", Orientation(self.orientation))
        if f.ndim != 1 or f.shape != i.shape:
            raise DomainError("frequencies and currents must be 1-D arrays of equal length")
        if not np.all(np.isfinite(i)):
            raise DomainError("trace contains non-finite currents")
        check_uniform_grid(f)

    @property
    def step(self) -> float:
        return float(self.frequencies[1] - self.frequencies[0])


def check_uniform_grid(f: np.ndarray, rtol: float = 1e-6) -> float:
    """Return the step of a strictly increasing uniform grid, else raise."""
    if f.size < 2:
        raise DomainError("frequency grid needs at least two points")
    if not np.all(np.isfinite(f)):
        raise DomainError("frequency grid contains non-finite values")
    d = np.diff(f)
    if np.any(d <= 0):
        raise DomainError("frequency grid must be strictly increasing")
    step = (f[-1] - f[0]) / (f.size - 1)
    if np.max(np.abs(d - step)) > rtol * step:
        raise DomainError("frequency grid is not uniformly spaced")
    return float(step)


def frequency_grid(start: float, stop: float, step: float = DEFAULT_STEP) -> np.ndarray:
    """Uniform grid from ``start`` up to ``stop`` inclusive (when it falls on the lattice)."""
    if not step > 0:
        raise DomainError(f"step must be positive, got {step}")
    if not stop > start:
        raise DomainError(f"stop ({stop}) must exceed start ({start})")
    span = (stop - start) / step
    n = int(math.floor(span + 1e-9)) + 1
    return start + step * np.arange(n, dtype=np.float64)


def lorentzian_envelope(f, tau: float = DEFAULT_TAU, A0: float = 1.0):
    """Detector roll-off ``A0 / (1 + (2 pi f tau)^2)``."""
    if tau < 0:
        raise DomainError(f"tau must be >= 0, got {tau}")
    x = 2.0 * np.pi * np.asarray(f, dtype=np.float64) * tau
    out = A0 / (1.0 + x * x)
    return float(out) if np.ndim(f) == 0 else out


def _coefficient(c: Coefficient, f: np.ndarray) -> np.ndarray:
    if callable(c):
        v = np.broadcast_to(np.asarray(c(f), dtype=np.float64), f.shape)
        if np.any((v < 0) | (v > 1)) or not np.all(np.isfinite(v)):
            raise DomainError("correction coefficient callable returned values outside [0, 1]")
        return v
    return np.full(f.shape, float(c))


def _reflection_for(slab, f: np.ndarray) -> SlabReflection:
    if isinstance(slab, DielectricSlab):
        return slab_reflection(slab, f)
    if isinstance(slab, SlabReflection):
        refl = slab
    elif callable(slab):
        refl = slab(f)
    else:
        raise DomainError(f"unsupported reflection model {slab!r}")
    try:
        r_par = np.broadcast_to(np.asarray(refl.r_par, dtype=np.complex128), f.shape)
        r_perp = np.broadcast_to(np.asarray(refl.r_perp, dtype=np.complex128), f.shape)
    except ValueError as exc:
        raise DomainError(f"reflection coefficients do not match the {f.size}-point grid") from exc
    return SlabReflection(f, r_par, r_perp)


def propagation_weights(table: ModeAmplitudeTable, guide: RectangularGuide, f: np.ndarray) -> np.ndarray:
    """Per-mode amplitude factors that switch modes on above cutoff.

    Entries with a ``mode`` contribute only above its cutoff; the total power
    of the propagating entries is rescaled to the table's total power.
    Entries without a mode id are always on.
    """
    on = np.ones((len(table), f.size))
    for k, entry in enumerate(table):
        if entry.mode is not None:
            on[k] = f > cutoff_frequency(guide, entry.mode)
    powers = np.array([e.power for e in table])
    prop_power = powers @ on
    with np.errstate(divide="ignore", invalid="ignore"):
        scale = np.where(prop_power > 0, np.sqrt(table.total_power / prop_power), 0.0)
    return on * scale[None, :]


def synthesize_trace(
    table: ModeAmplitudeTable,
    cfg: InterferometerConfig,
    slab: DielectricSlab | SlabReflection | Callable[[np.ndarray], SlabReflection],
    grid: Sequence[float] | np.ndarray,
    orientation: Orientation | str = Orientation.E,
    guide: RectangularGuide | None = None,
) -> DetectorTrace:
    """Detector current on ``grid`` for one waveguide orientation.

    ``slab`` may be a :class:`DielectricSlab`, a precomputed
    :class:`SlabReflection` on the same grid, or a callable ``f -> SlabReflection``
    (useful to substitute idealised coefficients).  With ``guide`` given, modes
    are gated by their cutoff (see :func:`propagation_weights`).
    """
    f = np.asarray(grid, dtype=np.float64)
    if f.ndim != 1:
        raise DomainError("grid must be one-dimensional")
    check_uniform_grid(f)
    if not isinstance(table, ModeAmplitudeTable):
        table = ModeAmplitudeTable(tuple(table))
    orientation = Orientation(orientation)

    if isinstance(slab, SlabReflection) and np.shape(slab.f) != f.shape:
        raise DomainError("precomputed reflection does not match the grid")
    refl = _reflection_for(slab, f)
    re_par = np.real(refl.r_par)
    re_perp = np.real(refl.r_perp)
    dphi = residual_phase_difference(refl)
    A = cfg.asymmetry

    weights = propagation_weights(table, guide, f) if guide is not None else np.ones((len(table), f.size))

    n_terms = 2 * len(table)
    amps = np.empty((n_terms, f.size))
    phases = np.empty((n_terms, f.size))
    for k, entry in enumerate(table):
        c = [_coefficient(ci, f) for ci in entry.corr]
        w = weights[k]
        if orientation is Orientation.E:
            amps[2 * k] = A * re_par * entry.amp_E * c[0] * w
            phases[2 * k] = entry.phase_par + dphi
            amps[2 * k + 1] = re_perp * entry.amp_H * c[1] * w
            phases[2 * k + 1] = entry.phase_perp
        else:
            amps[2 * k] = re_perp * entry.amp_E * c[2] * w
            phases[2 * k] = entry.phase_par
            amps[2 * k + 1] = A * re_par * entry.amp_H * c[3] * w
            phases[2 * k + 1] = entry.phase_perp + dphi

    theta = 2.0 * np.pi * f * cfg.delta_L / C0
    envelope = lorentzian_envelope(f, cfg.rolloff_tau, cfg.rolloff_A0)
    currents = cfg.coupling * _kernels.cosine_sum(theta, amps, phases) * envelope
    return DetectorTrace(f, currents, orientation)


def single_mode_reference(table: ModeAmplitudeTable, cfg: InterferometerConfig, f) -> np.ndarray:
    """Envelope a single mode carrying the table's total power would produce
    at unit reflection: ``C * sqrt(P) * A0 / (1 + (2 pi f tau)^2)``."""
    return cfg.coupling * math.sqrt(table.total_power) * lorentzian_envelope(f, cfg.rolloff_tau, cfg.rolloff_A0)


_MULTIMODE_ORDER = (
    ModeId(Family.TE, 1, 0),
    ModeId(Family.TE, 2, 0),
    ModeId(Family.TE, 0, 1),
    ModeId(Family.TE, 1, 1),
    ModeId(Family.TM, 1, 1),
)


def mode_table_from_polarization(
    crosspol_power_fraction: float,
    multimode: bool = False,
    higher_order_fraction: float = 0.5,
    phase_par: float = 0.0,
    mode_powers: Sequence[float] | None = None,
) -> ModeAmplitudeTable:
    """Amplitude table from a cross-polarization power fraction ``p``.

    The fundamental TE10 mode gets ``amp_H / amp_E = sqrt(p / (1 - p))`` at
    unit power.  With ``multimode`` the TE20, TE11 and TM11 modes split their
    power by ``higher_order_fraction`` (0.5 means equal co/cross amplitude)
    and TE01 takes the TE10 split with E and H swapped.  ``mode_powers``
    optionally weights the five modes (default: equal power per mode).
    """
    for name, v in (("crosspol_power_fraction", crosspol_power_fraction),
                    ("higher_order_fraction", higher_order_fraction)):
        if not 0.0 <= v <= 1.0:
            raise DomainError(f"{name} must lie in [0, 1], got {v}")
    p = crosspol_power_fraction
    co, cross = math.sqrt(1.0 - p), math.sqrt(p)
    if not multimode:
        return ModeAmplitudeTable((ModeAmplitude(co, cross, phase_par, 0.0, mode=_MULTIMODE_ORDER[0]),))

    q = higher_order_fraction
    hco, hcross = math.sqrt(1.0 - q), math.sqrt(q)
    splits = [(co, cross), (hco, hcross), (cross, co), (hco, hcross), (hco, hcross)]
    powers = [1.0] * 5 if mode_powers is None else list(mode_powers)
    if len(powers) != 5 or any(not pw >= 0 for pw in powers):
        raise DomainError("mode_powers needs five non-negative entries")
    entries = []
    for mode, (e, h), pw in zip(_MULTIMODE_ORDER, splits, powers):
        s = math.sqrt(pw)
        entries.append(ModeAmplitude(e * s, h * s, phase_par, 0.0, mode=mode))
    return ModeAmplitudeTable(tuple(entries))
