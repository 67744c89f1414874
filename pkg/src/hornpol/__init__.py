"""Polarization diagnostics for diagonal-horn coherent terahertz detection."""
from ._kernels import BACKEND
from .errors import ConfigError, DomainError, GridFormatError, HornpolError, NumericalError
from .farfield import FarFieldGrid, HornGeometry, PolContent, load_grid, pol_content, save_grid, synthetic_grid
from .fresnel import (
    AsymmetryCalibration,
    DielectricSlab,
    SlabReflection,
    calibrate_asymmetry,
    phase_offsets,
    slab_reflection,
)
from .herald import CoincidenceResult, DetectorModel, PairSource, estimate_efficiency, simulate, validate_pair
from .phase import (
    AnalyticTrace,
    CorrelatorHistogram,
    PolarizationEstimate,
    analytic_signal,
    band_histogram,
    correlator,
    polarization_from_fields,
    polarization_from_ratio,
)
from .pipeline import PipelineConfig, run_pipeline
from .synth import (
    DetectorTrace,
    InterferometerConfig,
    ModeAmplitude,
    ModeAmplitudeTable,
    Orientation,
    lorentzian_envelope,
    mode_table_from_polarization,
    synthesize_trace,
)
from .waveguide import (
    Family,
    ModeDispersion,
    ModeId,
    RectangularGuide,
    TransverseFieldSample,
    cutoff_frequency,
    propagating_modes,
    propagation_constant,
    transverse_field,
)

__version__ = "0.1.0"
