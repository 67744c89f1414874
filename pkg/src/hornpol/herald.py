"""Monte Carlo of a heralded detector-efficiency measurement.

Photon pairs arrive as a Poisson process.  Each pair's trigger photon is
registered with probability ``eta_trig`` and its partner with ``eta_det``,
independently; both channels also see uncorrelated Poisson background.  The
efficiency estimate ``eta = N_coinc / N_2`` divides coincidences by trigger
counts, so it does not depend on the trigger efficiency.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .constants import C0
from .errors import DomainError, NumericalError
from .waveguide import RectangularGuide, mode_count

DEFAULT_WINDOW = 1e-9
PILEUP_LIMIT = 0.1


class PileupWarning(RuntimeWarning):
    """Count rates are too high for the single-event coincidence model."""


def validate_pair(f_p: float, f_s: float) -> float:
    """Idler frequency ``2 f_p - f_s`` of a pair from two pump photons."""
    if not (f_p > 0 and f_s > 0):
        raise DomainError("frequencies must be positive")
    if f_s >= 2.0 * f_p:
        raise DomainError(f"signal {f_s:g} Hz leaves no energy for the idler (2 f_p = {2 * f_p:g} Hz)")
    return 2.0 * f_p - f_s


@dataclass(frozen=True)
class PairSource:
    f_p: float
    f_s: float
    pair_rate: float = 1e3

    def __post_init__(self):
        validate_pair(self.f_p, self.f_s)
        if not self.pair_rate >= 0:
            raise DomainError(f"pair rate must be >= 0, got {self.pair_rate}")

    @property
    def f_i(self) -> float:
        return validate_pair(self.f_p, self.f_s)

    def wavenumbers(self) -> tuple[float, float, float]:
        """Free-space ``(k_p, k_s, k_i)`` for collinear propagation."""
        k = 2.0 * math.pi / C0
        return k * self.f_p, k * self.f_s, k * self.f_i

    def momentum_mismatch(self) -> float:
        """Relative residual of ``2 k_p = k_s + k_i``."""
        kp, ks, ki = self.wavenumbers()
        return abs(2.0 * kp - ks - ki) / (2.0 * kp)


@dataclass(frozen=True)
class DetectorModel:
    efficiency: float
    background_rate: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.efficiency <= 1.0:
            raise DomainError(f"efficiency must lie in [0, 1], got {self.efficiency}")
        if not self.background_rate >= 0:
            raise DomainError(f"background rate must be >= 0, got {self.background_rate}")


@dataclass(frozen=True)
class CoincidenceResult:
    n_coinc: int
    n_2: int
    duration: float
    seed: int | None
    n_pairs: int = 0
    n_true_coinc: int = 0
    n_2_signal: int = 0
    accidental_expected: float = 0.0
    pileup: bool = False


def simulate(
    source: PairSource,
    detector: DetectorModel,
    trigger: DetectorModel,
    duration: float,
    coincidence_window: float = DEFAULT_WINDOW,
    seed: int | None = 0,
    n_pairs: int | None = None,
) -> CoincidenceResult:
    """Generate events for ``duration`` seconds and count coincidences.

    A trigger event counts as a coincidence when a detector event lies within
    ``coincidence_window / 2`` of it.  ``n_pairs`` fixes the number of pairs
    instead of drawing it from the Poisson distribution.
    """
    if not duration > 0:
        raise DomainError(f"duration must be positive, got {duration}")
    if not coincidence_window > 0:
        raise DomainError(f"coincidence window must be positive, got {coincidence_window}")
    rng = np.random.default_rng(seed)
    if n_pairs is None:
        n_pairs = int(rng.poisson(source.pair_rate * duration))
    elif n_pairs < 0:
        raise DomainError("n_pairs must be >= 0")

    t_pairs = np.sort(rng.uniform(0.0, duration, n_pairs))
    trig_hit = rng.random(n_pairs) < trigger.efficiency
    det_hit = rng.random(n_pairs) < detector.efficiency
    bg_trig = rng.uniform(0.0, duration, rng.poisson(trigger.background_rate * duration))
    bg_det = rng.uniform(0.0, duration, rng.poisson(detector.background_rate * duration))

    trig_times = np.sort(np.concatenate((t_pairs[trig_hit], bg_trig)))
    det_times = np.sort(np.concatenate((t_pairs[det_hit], bg_det)))
    n_coinc = _kernels.count_coincidences(trig_times, det_times, 0.5 * coincidence_window)

    rate_trig = trig_times.size / duration
    rate_det = det_times.size / duration
    pileup = coincidence_window * max(rate_trig, rate_det) > PILEUP_LIMIT
    if pileup:
        warnings.warn(
            f"window x rate = {coincidence_window * max(rate_trig, rate_det):.3g} exceeds {PILEUP_LIMIT}; "
            "pile-up is not modelled", PileupWarning, stacklevel=2)

    # triggers without a correlated partner can still meet an unrelated detector event
    n_uncorrelated = bg_trig.size + int(np.count_nonzero(trig_hit & ~det_hit))
    return CoincidenceResult(
        n_coinc=int(n_coinc),
        n_2=int(trig_times.size),
        duration=float(duration),
        seed=seed,
        n_pairs=int(n_pairs),
        n_true_coinc=int(np.count_nonzero(trig_hit & det_hit)),
        n_2_signal=int(np.count_nonzero(trig_hit)),
        accidental_expected=n_uncorrelated * rate_det * coincidence_window,
        pileup=bool(pileup),
    )


def estimate_efficiency(result: CoincidenceResult) -> tuple[float, float]:
    """``(eta, standard error)`` with ``eta = N_coinc / N_2``, binomial error."""
    if result.n_2 <= 0:
        raise NumericalError("no trigger counts; efficiency undefined")
    eta = result.n_coinc / result.n_2
    return eta, math.sqrt(eta * (1.0 - eta) / result.n_2)


def trigger_rotated(source: PairSource, guide: RectangularGuide) -> bool:
    """True when the idler is multimode in ``guide``, calling for a 45-degree rotated trigger."""
    return mode_count(guide, source.f_i) > 1
