"""numba-compiled kernels mirroring :mod:`numpy_impl` one-to-one."""
import math

import numpy as np
from numba import njit

from ..constants import C0


@njit(cache=True)
def _etalon(freqs, n_index, thickness, cos_t, r01):
    n = freqs.shape[0]
    r = np.empty(n, dtype=np.complex128)
    t = np.empty(n, dtype=np.complex128)
    r2 = r01 * r01
    scale = 4.0 * math.pi * n_index * thickness * cos_t / C0
    for i in range(n):
        delta = scale * freqs[i]
        e = complex(math.cos(delta), math.sin(delta))
        half = complex(math.cos(0.5 * delta), math.sin(0.5 * delta))
        denom = 1.0 - r2 * e
        r[i] = r01 * (1.0 - e) / denom
        t[i] = (1.0 - r2) * half / denom
    return r, t


def etalon(freqs, n_index, thickness, cos_t, r01):
    freqs = np.ascontiguousarray(freqs, dtype=np.float64)
    return _etalon(freqs, float(n_index), float(thickness), float(cos_t), float(r01))


@njit(cache=True)
def _cosine_sum(theta, amps, phases):
    k, n = amps.shape
    out = np.zeros(n)
    for i in range(n):
        acc = 0.0
        for j in range(k):
            acc += amps[j, i] * math.cos(theta[i] + phases[j, i])
        out[i] = acc
    return out


def cosine_sum(theta, amps, phases):
    return _cosine_sum(
        np.ascontiguousarray(theta, dtype=np.float64),
        np.ascontiguousarray(amps, dtype=np.float64),
        np.ascontiguousarray(phases, dtype=np.float64),
    )


@njit(cache=True)
def _histogram_counts(values, n_bins):
    counts = np.zeros(n_bins, dtype=np.int64)
    for v in values:
        idx = int(math.floor((v + 1.0) * 0.5 * n_bins))
        if idx < 0:
            idx = 0
        elif idx > n_bins - 1:
            idx = n_bins - 1
        counts[idx] += 1
    return counts


def histogram_counts(values, n_bins):
    return _histogram_counts(np.ascontiguousarray(values, dtype=np.float64), int(n_bins))


@njit(cache=True)
def _trapezoid2d(values, x, y):
    nx, ny = values.shape
    total = 0.0
    for i in range(nx - 1):
        dx = x[i + 1] - x[i]
        for j in range(ny - 1):
            dy = y[j + 1] - y[j]
            total += 0.25 * dx * dy * (
                values[i, j] + values[i + 1, j] + values[i, j + 1] + values[i + 1, j + 1]
            )
    return total


def trapezoid2d(values, x, y):
    return float(_trapezoid2d(
        np.ascontiguousarray(values, dtype=np.float64),
        np.ascontiguousarray(x, dtype=np.float64),
        np.ascontiguousarray(y, dtype=np.float64),
    ))


@njit(cache=True)
def _count_coincidences(trig, det, half_window):
    n_det = det.shape[0]
    j = 0
    hits = 0
    for t in trig:
        lo = t - half_window
        while j < n_det and det[j] < lo:
            j += 1
        if j < n_det and det[j] <= t + half_window:
            hits += 1
    return hits


def count_coincidences(trigger_times, detector_times, half_window):
    return int(_count_coincidences(
        np.ascontiguousarray(trigger_times, dtype=np.float64),
        np.ascontiguousarray(detector_times, dtype=np.float64),
        float(half_window),
    ))
