"""Co- and cross-polarization content of a sampled far field.

For a lattice of ``E_eta`` (co-polar) and ``E_xi`` (cross-polar) samples over
``(theta, phi)``::

    A_cpol  = int |E_eta| dtheta dphi,     e_cpol  = A_cpol  / (A_cpol + A_crpol)
    A_crpol = int |E_xi|  dtheta dphi,     e_crpol = A_crpol / (A_cpol + A_crpol)

Integration is the trapezoid rule in radians with the plain ``dtheta dphi``
measure; ``solid_angle=True`` inserts ``|sin theta|``.
"""
from __future__ import annotations

import enum
import math
import os
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import DomainError, GridFormatError, NumericalError
from .fresnel import wrap_phase
from .waveguide import ModeId

HEADER = ("theta_deg", "phi_deg", "re_eta", "im_eta", "re_xi", "im_xi")


class Pattern(str, enum.Enum):
    FUNDAMENTAL = "fundamental"
    ANTISYMMETRIC = "antisymmetric"


@dataclass(frozen=True)
class HornGeometry:
    """Diagonal-horn dimensions in metres (descriptive only)."""

    w_A: float = 9.9e-3
    l: float = 7e-3
    w_F: float = 400e-6
    L_F: float = 19.6e-3
    L_P: float = 21.48e-3
    w_C: float = 4.91e-3

    def __post_init__(self):
        for name in ("w_A", "l", "w_F", "L_F", "L_P", "w_C"):
            if not getattr(self, name) > 0:
                raise DomainError(f"{name} must be positive")


@dataclass(frozen=True)
class FarFieldGrid:
    theta: np.ndarray  # degrees
    phi: np.ndarray  # degrees
    E_eta: np.ndarray
    E_xi: np.ndarray
    frequency: float | None = None
    mode: ModeId | None = None

    def __post_init__(self):
        th = np.asarray(self.theta, dtype=np.float64)
        ph = np.asarray(self.phi, dtype=np.float64)
        eta = np.asarray(self.E_eta, dtype=np.complex128)
        xi = np.asarray(self.E_xi, dtype=np.complex128)
        for name, v in (("theta", th), ("phi", ph)):
            if v.ndim != 1 or v.size < 2:
                raise DomainError(f"{name} axis needs at least two samples")
            if not np.all(np.isfinite(v)) or np.any(np.diff(v) <= 0):
                raise DomainError(f"{name} axis must be finite and strictly increasing")
        shape = (th.size, ph.size)
        if eta.shape != shape or xi.shape != shape:
            raise DomainError(f"field arrays must have shape {shape}")
        if not (np.all(np.isfinite(eta)) and np.all(np.isfinite(xi))):
            raise DomainError("field samples must be finite")
        object.__setattr__(self, "theta", th)
        object.__setattr__(self, "phi", ph)
        object.__setattr__(self, "E_eta", eta)
        object.__setattr__(self, "E_xi", xi)


@dataclass(frozen=True)
class PolContent:
    A_cpol: float
    A_crpol: float
    e_cpol: float
    e_crpol: float
    mean_phase_diff: float

    @property
    def beta_deg(self) -> float:
        """Polarization angle from the integrated amplitudes."""
        return math.degrees(math.atan2(self.A_crpol, self.A_cpol))


def _weights(grid: FarFieldGrid, solid_angle: bool) -> np.ndarray:
    w = np.ones(grid.E_eta.shape)
    if solid_angle:
        w = w * np.abs(np.sin(np.radians(grid.theta)))[:, None]
    return w


def _weighted_phase(field: np.ndarray, w: np.ndarray, th: np.ndarray, ph: np.ndarray) -> float:
    mag = np.abs(field) * w
    norm = _kernels.trapezoid2d(mag, th, ph)
    if norm == 0.0:
        return math.nan
    return _kernels.trapezoid2d(mag * np.angle(field), th, ph) / norm


def pol_content(grid: FarFieldGrid, solid_angle: bool = False) -> PolContent:
    """Integrated amplitudes, their fractions and the amplitude-weighted mean phase difference.

    The mean phase of each component is weighted by its own magnitude; the
    difference is NaN when either component vanishes identically.
    """
    th = np.radians(grid.theta)
    ph = np.radians(grid.phi)
    w = _weights(grid, solid_angle)
    a_c = _kernels.trapezoid2d(np.abs(grid.E_eta) * w, th, ph)
    a_x = _kernels.trapezoid2d(np.abs(grid.E_xi) * w, th, ph)
    total = a_c + a_x
    if not total > 0:
        raise NumericalError("field vanishes on the whole grid; fractions undefined")
    # derive the larger share from the smaller one so the pair sums to 1 exactly
    if a_x <= a_c:
        e_x = a_x / total
        e_c = 1.0 - e_x
    else:
        e_c = a_c / total
        e_x = 1.0 - e_c
    diff = _weighted_phase(grid.E_eta, w, th, ph) - _weighted_phase(grid.E_xi, w, th, ph)
    return PolContent(a_c, a_x, e_c, e_x, wrap_phase(diff) if math.isfinite(diff) else math.nan)


def signed_mean(grid: FarFieldGrid) -> tuple[complex, complex]:
    """Plane averages of the signed complex fields over the lattice."""
    th = np.radians(grid.theta)
    ph = np.radians(grid.phi)
    area = (th[-1] - th[0]) * (ph[-1] - ph[0])
    out = []
    for field in (grid.E_eta, grid.E_xi):
        re = _kernels.trapezoid2d(np.ascontiguousarray(field.real), th, ph)
        im = _kernels.trapezoid2d(np.ascontiguousarray(field.imag), th, ph)
        out.append(complex(re, im) / area)
    return out[0], out[1]


def _symmetric_axis(limit: float, n_half: int) -> np.ndarray:
    pos = limit * np.arange(1, n_half + 1) / n_half
    return np.concatenate((-pos[::-1], [0.0], pos))


def synthetic_grid(
    beam_width_deg: float = 15.0,
    crosspol_power_fraction: float = 0.0,
    phase_offset_rad: float = 0.0,
    pattern: Pattern | str = Pattern.FUNDAMENTAL,
    theta_max_deg: float | None = None,
    n_theta_half: int = 60,
    n_phi: int = 37,
    frequency: float | None = None,
) -> FarFieldGrid:
    """Gaussian beam ``exp(-(theta/w)^2)`` split into co/cross amplitudes ``sqrt(1-p)``, ``sqrt(p)``.

    ``theta`` runs symmetrically over ``[-theta_max, theta_max]`` (default
    three beam widths) and ``phi`` over ``[0, 180]``.  The antisymmetric
    pattern multiplies both components by ``sign(theta)``.  The co-polar
    component carries the phase offset.
    """
    if not beam_width_deg > 0:
        raise DomainError(f"beam width must be positive, got {beam_width_deg}")
    if not 0.0 <= crosspol_power_fraction <= 1.0:
        raise DomainError(f"cross-polar fraction must lie in [0, 1], got {crosspol_power_fraction}")
    pattern = Pattern(pattern)
    limit = 3.0 * beam_width_deg if theta_max_deg is None else theta_max_deg
    theta = _symmetric_axis(limit, n_theta_half)
    phi = np.linspace(0.0, 180.0, n_phi)
    g = np.exp(-(theta / beam_width_deg) ** 2)
    if pattern is Pattern.ANTISYMMETRIC:
        g = g * np.sign(theta)
    g2 = np.repeat(g[:, None], n_phi, axis=1)
    co = math.sqrt(1.0 - crosspol_power_fraction)
    cross = math.sqrt(crosspol_power_fraction)
    return FarFieldGrid(theta, phi, co * g2 * np.exp(1j * phase_offset_rad), cross * g2 + 0j, frequency)


def save_grid(grid: FarFieldGrid, path: str | os.PathLike) -> None:
    """Write the lattice as CSV, theta-major, 17 significant digits."""
    with open(path, "w", encoding="utf-8") as fh:
        if grid.frequency is not None:
            fh.write(f"# frequency_hz: {grid.frequency:.17g}\n")
        if grid.mode is not None:
            fh.write(f"# mode: {grid.mode}\n")
        fh.write(",".join(HEADER) + "\n")
        for i, t in enumerate(grid.theta):
            for j, p in enumerate(grid.phi):
                e, x = grid.E_eta[i, j], grid.E_xi[i, j]
                fh.write(",".join(f"{v:.17g}" for v in (t, p, e.real, e.imag, x.real, x.imag)) + "\n")


def load_grid(path: str | os.PathLike, format: str = "csv") -> FarFieldGrid:
    """Read a grid written by :func:`save_grid` (or any file in the same layout)."""
    if format != "csv":
        raise GridFormatError(f"unsupported grid format {format!r}")
    frequency, mode = None, None
    rows: list[tuple[int, list[float]]] = []
    header_seen = False
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                key, _, value = line[1:].partition(":")
                key = key.strip()
                try:
                    if key == "frequency_hz":
                        frequency = float(value)
                    elif key == "mode":
                        mode = ModeId.parse(value)
                except ValueError as exc:
                    raise GridFormatError(f"bad metadata: {exc}", lineno) from exc
                continue
            if not header_seen:
                cols = tuple(c.strip() for c in line.split(","))
                if cols != HEADER:
                    raise GridFormatError(f"expected header {','.join(HEADER)}, got {line!r}", lineno)
                header_seen = True
                continue
            parts = line.split(",")
            if len(parts) != len(HEADER):
                raise GridFormatError(f"expected {len(HEADER)} columns, got {len(parts)}", lineno)
            try:
                vals = [float(p) for p in parts]
            except ValueError as exc:
                raise GridFormatError(f"non-numeric value: {exc}", lineno) from exc
            if not all(math.isfinite(v) for v in vals):
                raise GridFormatError("non-finite value", lineno)
            rows.append((lineno, vals))
    if not rows:
        raise GridFormatError("grid file contains no samples")
    return _assemble(rows, frequency, mode)


def _assemble(rows, frequency, mode) -> FarFieldGrid:
    # group consecutive rows by theta
    groups: list[tuple[int, float, list[list[float]]]] = []
    for lineno, vals in rows:
        if groups and vals[0] == groups[-1][1]:
            groups[-1][2].append(vals)
            continue
        if groups and vals[0] <= groups[-1][1]:
            raise GridFormatError(f"theta {vals[0]:g} deg out of order (rows must be theta-major, ascending)", lineno)
        groups.append((lineno, vals[0], [vals]))
    first_line, _, first = groups[0]
    phi = np.array([v[1] for v in first])
    for lineno, t, g in groups:
        if len(g) != phi.size:
            raise GridFormatError(
                f"theta row {t:g} deg has {len(g)} phi samples, expected {phi.size} (ragged lattice)", lineno)
        row_phi = np.array([v[1] for v in g])
        if not np.array_equal(row_phi, phi):
            raise GridFormatError(f"theta row {t:g} deg uses a different phi axis (non-rectangular lattice)", lineno)
    if phi.size < 2 or np.any(np.diff(phi) <= 0):
        raise GridFormatError("phi samples must be strictly increasing with at least two values", first_line)
    if len(groups) < 2:
        raise GridFormatError("need at least two theta rows", first_line)
    data = np.array([v for _, _, g in groups for v in g]).reshape(len(groups), phi.size, 6)
    theta = data[:, 0, 0]
    return FarFieldGrid(theta, phi, data[..., 2] + 1j * data[..., 3], data[..., 4] + 1j * data[..., 5],
                        frequency, mode)
