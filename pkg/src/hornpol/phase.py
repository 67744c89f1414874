"""Analytic-signal phase extraction, phase-phase correlator and pos/neg statistics.

The analytic signal of a real trace ``x`` is ``x + i H[x]`` with ``H`` the
discrete Hilbert transform, built here in the Fourier domain: keep DC (and
Nyquist for even length), double the positive frequencies, drop the negative
ones.  The correlator of two instantaneous phases is ``cos(phi_E) cos(phi_H)``;
its sign statistics in a frequency band give the polarization angle via
``beta = arctan(pos / neg)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import DomainError, NumericalError
from .synth import DetectorTrace, check_uniform_grid

MIN_SAMPLES = 64
DEFAULT_BINS = 41
DEFAULT_TAPER_FRACTION = 0.1


@dataclass(frozen=True)
class AnalyticTrace:
    frequencies: np.ndarray
    amplitude: np.ndarray
    phase: np.ndarray
    degenerate: bool = False

    @property
    def signal(self) -> np.ndarray:
        return self.amplitude * np.exp(1j * self.phase)


@dataclass(frozen=True)
class CorrelatorHistogram:
    band_center: float
    band_width: float
    bin_edges: np.ndarray
    counts: np.ndarray
    pos_count: int
    neg_count: int
    zero_count: int

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    @property
    def ratio(self) -> float:
        """``pos / neg``; ``inf`` when there are no negative samples."""
        if self.neg_count == 0:
            return math.inf if self.pos_count else math.nan
        return self.pos_count / self.neg_count

    @property
    def negative_fraction(self) -> float:
        return self.neg_count / self.total

    @property
    def mass_below_zero(self) -> float:
        """Fraction of samples in bins lying entirely below zero."""
        below = self.bin_edges[1:] <= 0.0
        return float(self.counts[below].sum()) / self.total


@dataclass(frozen=True)
class PolarizationEstimate:
    band_center: float
    ratio: float
    beta: float
    beta_mirror: float
    saturated: bool = False


def hilbert_transform(x) -> np.ndarray:
    """Discrete Hilbert transform of a real sequence (imaginary part of its analytic signal)."""
    return _analytic(np.asarray(x, dtype=np.float64)).imag


def _analytic(x: np.ndarray) -> np.ndarray:
    n = x.size
    spec = np.fft.fft(x)
    h = np.zeros(n)
    h[0] = 1.0
    if n % 2 == 0:
        h[n // 2] = 1.0
        h[1:n // 2] = 2.0
    else:
        h[1:(n + 1) // 2] = 2.0
    return np.fft.ifft(spec * h)


def cosine_taper(n: int, fraction: float = DEFAULT_TAPER_FRACTION) -> np.ndarray:
    """Tukey window with raised-cosine flanks covering ``fraction`` of the length at each end."""
    w = np.ones(n)
    m = int(fraction * n)
    if m > 0:
        ramp = 0.5 * (1.0 - np.cos(np.pi * (np.arange(m) + 0.5) / m))
        w[:m] = ramp
        w[n - m:] = ramp[::-1]
    return w


def analytic_signal(trace: DetectorTrace, taper: bool = False) -> AnalyticTrace:
    """Amplitude ``S(f)`` and wrapped instantaneous phase of the mean-removed trace.

    ``taper`` applies a cosine taper before the transform to suppress edge
    ringing.  A constant trace gives ``S = 0`` everywhere and is flagged
    ``degenerate`` (its phase is reported as 0).
    """
    f = np.asarray(trace.frequencies, dtype=np.float64)
    x = np.asarray(trace.currents, dtype=np.float64)
    if f.size < MIN_SAMPLES:
        raise DomainError(f"analytic signal needs at least {MIN_SAMPLES} samples, got {f.size}")
    check_uniform_grid(f)
    x = x - x.mean()
    scale = np.max(np.abs(x))
    if scale == 0.0 or scale <= 1e-12 * np.max(np.abs(trace.currents)):
        zeros = np.zeros_like(f)
        return AnalyticTrace(f, zeros, zeros.copy(), degenerate=True)
    if taper:
        x = x * cosine_taper(x.size)
    z = _analytic(x)
    return AnalyticTrace(f, np.abs(z), np.angle(z))


def unwrap_phase(phase) -> np.ndarray:
    """Continue a wrapped phase by the nearest multiple of 2 pi at every step."""
    return np.unwrap(np.asarray(phase, dtype=np.float64))


def phase_slope(analytic: AnalyticTrace, interior: float = 0.8) -> float:
    """Least-squares ``d phi / d f`` (rad/Hz) of the unwrapped phase over the central ``interior`` fraction."""
    if not 0.0 < interior <= 1.0:
        raise DomainError(f"interior fraction must lie in (0, 1], got {interior}")
    n = analytic.frequencies.size
    cut = int(round(0.5 * (1.0 - interior) * n))
    sl = slice(cut, n - cut)
    f = analytic.frequencies[sl]
    ph = unwrap_phase(analytic.phase)[sl]
    slope, _ = np.polyfit(f - f.mean(), ph, 1)
    return float(slope)


def correlator(phi_E, phi_H) -> np.ndarray:
    """Pointwise ``cos(phi_E) * cos(phi_H)``."""
    a = np.asarray(phi_E, dtype=np.float64)
    b = np.asarray(phi_H, dtype=np.float64)
    if a.shape != b.shape:
        raise DomainError(f"phase series differ in shape: {a.shape} vs {b.shape}")
    return np.clip(np.cos(a) * np.cos(b), -1.0, 1.0)


def band_histogram(corr, frequencies, band_center: float, band_width: float,
                   n_bins: int = DEFAULT_BINS) -> CorrelatorHistogram:
    """Histogram of the correlator samples with ``|f - center| < width / 2`` (lower edge inclusive)."""
    c = np.asarray(corr, dtype=np.float64)
    f = np.asarray(frequencies, dtype=np.float64)
    if c.shape != f.shape:
        raise DomainError("correlator and frequency series differ in length")
    if not band_width > 0:
        raise DomainError(f"band width must be positive, got {band_width}")
    if n_bins < 2:
        raise DomainError(f"need at least two bins, got {n_bins}")
    lo = band_center - 0.5 * band_width
    hi = band_center + 0.5 * band_width
    if f.size >= 2:
        step = (f[-1] - f[0]) / (f.size - 1)
        if lo < f[0] - step or hi > f[-1] + step:
            raise DomainError(
                f"band {lo / 1e9:.6g}-{hi / 1e9:.6g} GHz exceeds the trace support "
                f"{f[0] / 1e9:.6g}-{f[-1] / 1e9:.6g} GHz")
    vals = c[(f >= lo) & (f < hi)]
    if vals.size == 0:
        raise DomainError(f"no samples in band centred at {band_center / 1e9:.6g} GHz")
    counts = _kernels.histogram_counts(vals, n_bins)
    return CorrelatorHistogram(
        band_center=float(band_center),
        band_width=float(band_width),
        bin_edges=np.linspace(-1.0, 1.0, n_bins + 1),
        counts=counts,
        pos_count=int(np.count_nonzero(vals > 0)),
        neg_count=int(np.count_nonzero(vals < 0)),
        zero_count=int(np.count_nonzero(vals == 0)),
    )


def angle_from_ratio(ratio: float) -> tuple[float, float]:
    """``(beta, 90 - beta)`` in degrees with ``beta = arctan(ratio)``."""
    if not ratio >= 0:
        raise DomainError(f"ratio must be non-negative, got {ratio}")
    beta = math.degrees(math.atan(ratio))
    return beta, 90.0 - beta


def polarization_from_ratio(hist: CorrelatorHistogram) -> PolarizationEstimate:
    """Polarization angle and its 90-degree complement from the band's pos/neg ratio.

    With no negative samples the ratio is infinite and the estimate saturates
    at 90 degrees (flagged).
    """
    if hist.pos_count == 0 and hist.neg_count == 0:
        raise NumericalError("band has no non-zero correlator samples")
    if hist.neg_count == 0:
        return PolarizationEstimate(hist.band_center, math.inf, 90.0, 0.0, saturated=True)
    beta, mirror = angle_from_ratio(hist.pos_count / hist.neg_count)
    return PolarizationEstimate(hist.band_center, hist.pos_count / hist.neg_count, beta, mirror)


def polarization_from_fields(E_eta: complex, E_xi: complex) -> float:
    """``arctan(|E_xi| / |E_eta|)`` in degrees."""
    a, b = abs(E_eta), abs(E_xi)
    if a == 0 and b == 0:
        raise NumericalError("both field components are zero; angle undefined")
    if a == 0:
        raise DomainError("co-polar component must be non-zero")
    return math.degrees(math.atan2(b, a))
