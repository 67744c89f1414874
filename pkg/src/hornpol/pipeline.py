"""End-to-end sweep: synthesize both orientations, extract phases, histogram per band.

Configuration is plain JSON in SI units.  Bands are tiled from the sweep
start; a band is 10 GHz wide while its centre sits below the first
higher-order cutoff and 20 GHz above.  The traces are synthesized over the
sweep widened by ``guard`` on both sides so that the edge transients of the
Hilbert transform stay outside the analysed bands.
"""
from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .errors import ConfigError, DomainError
from .fresnel import DielectricSlab
from .phase import (
    DEFAULT_BINS,
    CorrelatorHistogram,
    analytic_signal,
    band_histogram,
    correlator,
    polarization_from_ratio,
)
from .synth import (
    DetectorTrace,
    InterferometerConfig,
    Orientation,
    frequency_grid,
    mode_table_from_polarization,
    synthesize_trace,
)
from .waveguide import RectangularGuide, first_higher_order_cutoff, mode_count


@dataclass(frozen=True)
class Sweep:
    start: float = 215e9
    stop: float = 580e9
    step: float = 25e6

    def __post_init__(self):
        if not self.step > 0:
            raise DomainError(f"step must be positive, got {self.step}")
        if not self.start < self.stop:
            raise DomainError(f"start ({self.start}) must be below stop ({self.stop})")
        if not self.start > 0:
            raise DomainError("start must be positive")


@dataclass(frozen=True)
class TableSpec:
    """How the pipeline builds its mode table (see ``mode_table_from_polarization``)."""

    crosspol_fraction: float = 0.05
    higher_order_fraction: float = 0.5
    multimode: bool = True
    phase_par: float = 0.0

    def build(self):
        return mode_table_from_polarization(
            self.crosspol_fraction, self.multimode, self.higher_order_fraction, self.phase_par)


@dataclass(frozen=True)
class PipelineConfig:
    guide: RectangularGuide = field(default_factory=lambda: RectangularGuide(800e-6, 400e-6))
    slab: DielectricSlab = field(default_factory=DielectricSlab)
    interferometer: InterferometerConfig = field(default_factory=InterferometerConfig)
    sweep: Sweep = field(default_factory=Sweep)
    table: TableSpec = field(default_factory=TableSpec)
    single_mode_band_width: float = 10e9
    multimode_band_width: float = 20e9
    guard: float = 10e9
    n_bins: int = DEFAULT_BINS
    noise_rms: float = 0.0
    seed: int = 0

    def __post_init__(self):
        for name in ("single_mode_band_width", "multimode_band_width"):
            if not getattr(self, name) > self.sweep.step:
                raise ConfigError(name, f"band width must exceed the sweep step ({self.sweep.step:g} Hz)")
        if not self.guard >= 0:
            raise ConfigError("guard", "must be >= 0")
        if self.guard >= self.sweep.start:
            raise ConfigError("guard", "guard band would reach zero frequency")
        if int(self.n_bins) != self.n_bins or self.n_bins < 2:
            raise ConfigError("n_bins", "must be an integer >= 2")
        if not self.noise_rms >= 0:
            raise ConfigError("noise_rms", "must be >= 0")

    @property
    def crosspol_fraction_single(self) -> float:
        return self.table.crosspol_fraction

    def to_dict(self) -> dict[str, Any]:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "PipelineConfig":
        if not isinstance(data, dict):
            raise ConfigError("", "pipeline configuration must be a JSON object")
        nested = {
            "guide": RectangularGuide,
            "slab": DielectricSlab,
            "interferometer": InterferometerConfig,
            "sweep": Sweep,
            "table": TableSpec,
        }
        kwargs: dict[str, Any] = {}
        known = {f.name: f for f in dataclasses.fields(cls)}
        for key, value in data.items():
            if key not in known:
                raise ConfigError(key, "unknown field")
            if key in nested:
                kwargs[key] = _build(nested[key], value, key)
            else:
                kwargs[key] = _scalar(value, key, int if key in ("n_bins", "seed") else float)
        try:
            return cls(**kwargs)
        except ConfigError:
            raise
        except DomainError as exc:
            raise ConfigError("", str(exc)) from exc


def _scalar(value, path, kind):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(path, f"expected a number, got {value!r}")
    if kind is int:
        if int(value) != value:
            raise ConfigError(path, f"expected an integer, got {value!r}")
        return int(value)
    if not math.isfinite(value):
        raise ConfigError(path, "must be finite")
    return float(value)


def _build(kind, value, path):
    if not isinstance(value, dict):
        raise ConfigError(path, "expected an object")
    names = {f.name: f for f in dataclasses.fields(kind)}
    kwargs = {}
    for key, v in value.items():
        if key not in names:
            raise ConfigError(f"{path}.{key}", "unknown field")
        if names[key].type in ("bool", bool):
            if not isinstance(v, bool):
                raise ConfigError(f"{path}.{key}", f"expected true/false, got {v!r}")
            kwargs[key] = v
        else:
            kwargs[key] = _scalar(v, f"{path}.{key}", float)
    try:
        return kind(**kwargs)
    except DomainError as exc:
        raise ConfigError(path, str(exc)) from exc


@dataclass(frozen=True)
class BandResult:
    center: float
    width: float
    n_modes: int
    pos: int
    neg: int
    zero: int
    ratio: float
    beta: float
    beta_mirror: float
    neg_mass: float
    saturated: bool
    histogram: CorrelatorHistogram = field(repr=False, compare=False)


@dataclass(frozen=True)
class PipelineResult:
    bands: list[BandResult]
    trace_E: DetectorTrace = field(repr=False)
    trace_H: DetectorTrace = field(repr=False)


def tile_bands(start: float, stop: float, guide: RectangularGuide,
               single_width: float = 10e9, multi_width: float = 20e9) -> list[tuple[float, float]]:
    """``(center, width)`` of consecutive full bands inside ``[start, stop]``."""
    f_hoc = first_higher_order_cutoff(guide)
    bands = []
    lo = start
    tol = 1e-9 * max(abs(stop), 1.0)
    while True:
        width = single_width if lo + 0.5 * single_width <= f_hoc else multi_width
        if lo + width > stop + tol:
            break
        bands.append((lo + 0.5 * width, width))
        lo += width
    return bands


def analyze_traces(trace_E: DetectorTrace, trace_H: DetectorTrace, bands, guide: RectangularGuide | None = None,
                   n_bins: int = DEFAULT_BINS, taper: bool = False) -> list[BandResult]:
    """Histogram the correlator of two aligned traces over the given ``(center, width)`` bands."""
    if trace_E.frequencies.shape != trace_H.frequencies.shape or not np.allclose(
            trace_E.frequencies, trace_H.frequencies, rtol=0, atol=1e-6 * trace_E.step):
        raise DomainError("E and H traces must share the same frequency grid")
    phi_E = analytic_signal(trace_E, taper=taper).phase
    phi_H = analytic_signal(trace_H, taper=taper).phase
    corr = correlator(phi_E, phi_H)
    out = []
    for center, width in bands:
        hist = band_histogram(corr, trace_E.frequencies, center, width, n_bins)
        est = polarization_from_ratio(hist)
        out.append(BandResult(
            center=center, width=width,
            n_modes=mode_count(guide, center) if guide is not None else -1,
            pos=hist.pos_count, neg=hist.neg_count, zero=hist.zero_count,
            ratio=est.ratio, beta=est.beta, beta_mirror=est.beta_mirror,
            neg_mass=hist.mass_below_zero, saturated=est.saturated, histogram=hist,
        ))
    return out


def run_pipeline(cfg: PipelineConfig) -> PipelineResult:
    sw = cfg.sweep
    grid = frequency_grid(sw.start - cfg.guard, sw.stop + cfg.guard, sw.step)
    table = cfg.table.build()
    traces = {}
    for orient in Orientation:
        traces[orient] = synthesize_trace(table, cfg.interferometer, cfg.slab, grid, orient, cfg.guide)
    if cfg.noise_rms > 0:
        rng = np.random.default_rng(cfg.seed)
        for orient in Orientation:
            tr = traces[orient]
            traces[orient] = DetectorTrace(tr.frequencies, tr.currents + rng.normal(0.0, cfg.noise_rms, tr.currents.size),
                                           orient)
    bands = tile_bands(sw.start, sw.stop, cfg.guide, cfg.single_mode_band_width, cfg.multimode_band_width)
    results = analyze_traces(traces[Orientation.E], traces[Orientation.H], bands, cfg.guide, cfg.n_bins)
    return PipelineResult(results, traces[Orientation.E], traces[Orientation.H])
