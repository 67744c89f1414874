"""Pure-numpy reference kernels.

Every function here has a twin in :mod:`numba_impl` with the same signature
and semantics; the tests check the two against each other.
"""
import numpy as np

from ..constants import C0


def etalon(freqs, n_index, thickness, cos_t, r01):
    """Airy reflection and transmission of a lossless slab for one polarization.

    ``r01`` is the air-to-slab interface coefficient; returns complex ``(r, t)``.
    """
    freqs = np.asarray(freqs, dtype=np.float64)
    delta = 4.0 * np.pi * freqs * n_index * thickness * cos_t / C0
    e = np.exp(1j * delta)
    r2 = r01 * r01
    denom = 1.0 - r2 * e
    r = r01 * (1.0 - e) / denom
    t = (1.0 - r2) * np.exp(0.5j * delta) / denom
    return r, t


def cosine_sum(theta, amps, phases):
    """Return ``sum_k amps[k] * cos(theta + phases[k])`` for 2-D ``amps``/``phases``."""
    theta = np.asarray(theta, dtype=np.float64)
    return np.sum(amps * np.cos(theta[None, :] + phases), axis=0)


def histogram_counts(values, n_bins):
    """Counts in ``n_bins`` uniform bins on [-1, 1]; +1 falls in the last bin."""
    values = np.asarray(values, dtype=np.float64)
    idx = np.floor((values + 1.0) * 0.5 * n_bins).astype(np.int64)
    idx = np.clip(idx, 0, n_bins - 1)
    return np.bincount(idx, minlength=n_bins).astype(np.int64)


def trapezoid2d(values, x, y):
    """Trapezoid-rule integral of ``values[i, j]`` sampled on ``x[i]``, ``y[j]``."""
    inner = np.trapezoid(values, y, axis=1) if hasattr(np, "trapezoid") else np.trapz(values, y, axis=1)
    return float(np.trapezoid(inner, x) if hasattr(np, "trapezoid") else np.trapz(inner, x))


def count_coincidences(trigger_times, detector_times, half_window):
    """Number of trigger events with a detector event within ``±half_window``.

    Both inputs must be sorted ascending.
    """
    trig = np.asarray(trigger_times, dtype=np.float64)
    det = np.asarray(detector_times, dtype=np.float64)
    if trig.size == 0 or det.size == 0:
        return 0
    idx = np.searchsorted(det, trig - half_window, side="left")
    ok = idx < det.size
    hit = np.zeros(trig.size, dtype=bool)
    hit[ok] = det[idx[ok]] <= trig[ok] + half_window
    return int(np.count_nonzero(hit))
