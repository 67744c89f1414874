import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from numpy.testing import assert_allclose
from scipy.interpolate import CubicSpline

from hornpol.constants import C0
from hornpol.errors import DomainError
from hornpol.fresnel import SlabReflection, slab_reflection
from hornpol.synth import (
    DetectorTrace,
    InterferometerConfig,
    ModeAmplitude,
    ModeAmplitudeTable,
    Orientation,
    frequency_grid,
    lorentzian_envelope,
    mode_table_from_polarization,
    synthesize_trace,
)

GHZ = 1e9


def ideal(r_par, r_perp):
    return lambda f: SlabReflection(f, np.full(f.shape, r_par, complex), np.full(f.shape, r_perp, complex))


def single(amp_E, amp_H, phase_par=0.0):
    return ModeAmplitudeTable((ModeAmplitude(amp_E, amp_H, phase_par),))


def test_single_cosine_reduction():
    f = frequency_grid(215 * GHZ, 360 * GHZ, 25e6)
    cfg = InterferometerConfig(asymmetry=1.0)
    tr = synthesize_trace(single(0.7, 0.0, 0.3), cfg, ideal(1.0, -1.0), f, "E")
    expected = cfg.coupling * 0.7 * np.cos(2 * np.pi * f * cfg.delta_L / C0 + 0.3) * lorentzian_envelope(f)
    assert_allclose(tr.currents, expected, rtol=0, atol=1e-12 * cfg.coupling)


def test_h_orientation_formula(slab):
    f = frequency_grid(250 * GHZ, 260 * GHZ, 25e6)
    cfg = InterferometerConfig()
    refl = slab_reflection(slab, f)
    tr = synthesize_trace(single(0.9, 0.2, 0.1), cfg, slab, f, Orientation.H)
    th = 2 * np.pi * f * cfg.delta_L / C0
    dphi = np.arctan(refl.r_par.imag / refl.r_par.real) - np.arctan(refl.r_perp.imag / refl.r_perp.real)
    expected = cfg.coupling * lorentzian_envelope(f) * (
        refl.r_perp.real * 0.9 * np.cos(th + 0.1) + 0.85 * refl.r_par.real * 0.2 * np.cos(th + dphi))
    assert_allclose(tr.currents, expected, rtol=1e-10, atol=1e-24)


def test_partial_cancellation_ideal():
    f = frequency_grid(300 * GHZ, 302 * GHZ, 25e6)
    cfg = InterferometerConfig(asymmetry=1.0)
    both = synthesize_trace(single(1.0, 1.0), cfg, ideal(0.5, -0.5), f, "E")
    one = synthesize_trace(single(1.0, 0.0), cfg, ideal(0.5, -0.5), f, "E")
    assert np.max(np.abs(both.currents)) < np.max(np.abs(one.currents))


def test_partial_cancellation_slab(slab):
    f = frequency_grid(300 * GHZ, 310 * GHZ, 25e6)
    cfg = InterferometerConfig()
    both = synthesize_trace(single(1.0, 1.0), cfg, slab, f, "E")
    co = synthesize_trace(single(1.0, 0.0), cfg, slab, f, "E")
    cross = synthesize_trace(single(0.0, 1.0), cfg, slab, f, "E")
    assert np.max(np.abs(both.currents)) < max(np.max(np.abs(co.currents)), np.max(np.abs(cross.currents)))


def test_envelope_half_point():
    f_half = 1 / (2 * np.pi * 500e-15)
    assert f_half / GHZ == pytest.approx(318.31, abs=0.01)
    assert lorentzian_envelope(318.3 * GHZ, 500e-15) == pytest.approx(0.5, rel=1e-3)
    assert lorentzian_envelope(f_half, 500e-15, 2.0) == pytest.approx(1.0, rel=1e-14)


def test_envelope_halves_in_trace():
    cfg = InterferometerConfig(asymmetry=1.0)
    f = np.array([1e6, 1e6 + 1.0])
    lo = synthesize_trace(single(1.0, 0.0), cfg, ideal(1.0, 1.0), f, "E")
    ratio = lorentzian_envelope(318.31 * GHZ) / lorentzian_envelope(1e6)
    assert ratio == pytest.approx(0.5, rel=1e-4)
    assert abs(lo.currents[0]) <= cfg.coupling


def test_envelope_trivial_cases():
    assert lorentzian_envelope(0.0, 500e-15, 3.0) == 3.0
    f = np.linspace(0, 1e12, 50)
    assert np.all(lorentzian_envelope(f, 0.0, 2.0) == 2.0)
    v = lorentzian_envelope(f, 500e-15, 2.0)
    assert np.all(np.diff(v) < 0) and np.all((v > 0) & (v <= 2.0))
    with pytest.raises(DomainError):
        lorentzian_envelope(1.0, -1.0)


def test_mode_table_examples():
    t0 = mode_table_from_polarization(0.0)
    assert t0.entries[0].amp_H == 0.0
    t5 = mode_table_from_polarization(0.05)
    e = t5.entries[0]
    assert e.amp_H / e.amp_E == pytest.approx(math.sqrt(0.05 / 0.95), rel=1e-14)
    assert e.amp_H / e.amp_E == pytest.approx(0.2294, abs=1e-4)
    assert e.power == pytest.approx(1.0)
    half = mode_table_from_polarization(0.5)
    assert half.entries[0].amp_E == half.entries[0].amp_H


def test_multimode_table_rules():
    t = mode_table_from_polarization(0.05, multimode=True)
    labels = [str(e.mode) for e in t]
    assert labels == ["TE10", "TE20", "TE01", "TE11", "TM11"]
    by = {str(e.mode): e for e in t}
    assert by["TE01"].amp_E == by["TE10"].amp_H and by["TE01"].amp_H == by["TE10"].amp_E
    for lab in ("TE20", "TE11", "TM11"):
        assert by[lab].amp_E == pytest.approx(by[lab].amp_H)


@pytest.mark.parametrize("p", [-0.1, 1.5])
def test_mode_table_rejects_fraction(p):
    with pytest.raises(DomainError):
        mode_table_from_polarization(p)


def _random_table(draw_amps, phases):
    return ModeAmplitudeTable(tuple(ModeAmplitude(a, b, p, q) for (a, b), (p, q) in zip(draw_amps, phases)))


@given(st.lists(st.tuples(st.floats(0, 2), st.floats(0, 2)), min_size=2, max_size=6),
       st.floats(-3, 3), st.floats(-3, 3))
def test_linearity(amps, p1, p2):
    f = frequency_grid(400 * GHZ, 405 * GHZ, 25e6)
    cfg = InterferometerConfig()
    table = _random_table(amps, [(p1, p2)] * len(amps))
    from hornpol.fresnel import DielectricSlab
    slab = DielectricSlab()
    for orient in Orientation:
        total = synthesize_trace(table, cfg, slab, f, orient).currents
        parts = sum(synthesize_trace(ModeAmplitudeTable((e,)), cfg, slab, f, orient).currents for e in table)
        scale = max(np.max(np.abs(total)), np.max(np.abs(parts)), 1e-30)
        assert np.max(np.abs(total - parts)) <= 1e-12 * scale


@given(st.floats(0, 3), st.floats(-3, 3))
def test_orientation_swap_symmetry(amp, phase):
    from hornpol.fresnel import DielectricSlab
    f = frequency_grid(230 * GHZ, 240 * GHZ, 25e6)
    cfg = InterferometerConfig(asymmetry=1.0)
    table = ModeAmplitudeTable((ModeAmplitude(amp, amp, phase, phase),))
    e = synthesize_trace(table, cfg, DielectricSlab(), f, "E").currents
    h = synthesize_trace(table, cfg, DielectricSlab(), f, "H").currents
    assert np.max(np.abs(e - h)) <= 1e-12 * max(np.max(np.abs(e)), 1e-30)


@given(st.lists(st.tuples(st.floats(0, 2), st.floats(0, 2)), min_size=1, max_size=6), st.floats(0.1, 1.0),
       st.sampled_from(list(Orientation)))
def test_envelope_bound(amps, A, orient):
    from hornpol.fresnel import DielectricSlab
    f = frequency_grid(215 * GHZ, 580 * GHZ, 1 * GHZ)
    cfg = InterferometerConfig(asymmetry=A)
    table = _random_table(amps, [(0.2, 0.0)] * len(amps))
    tr = synthesize_trace(table, cfg, DielectricSlab(), f, orient)
    bound = cfg.coupling * sum(a + b for a, b in amps) * lorentzian_envelope(f)
    assert np.all(np.abs(tr.currents) <= bound * (1 + 1e-12))


def test_fringe_zero_crossing_spacing():
    dL = 0.15
    f = frequency_grid(215 * GHZ, 580 * GHZ, 5e6)
    cfg = InterferometerConfig(delta_L=dL, asymmetry=1.0, rolloff_tau=0.0)
    tr = synthesize_trace(single(1.0, 0.0), cfg, ideal(1.0, -1.0), f, "E")
    roots = CubicSpline(f, tr.currents / cfg.coupling).roots(extrapolate=False)
    spacing = np.diff(roots)
    assert roots.size > 300
    assert np.max(np.abs(spacing / (C0 / (2 * dL)) - 1)) < 1e-6


def test_gating_below_second_cutoff(guide, slab):
    f = frequency_grid(250 * GHZ, 260 * GHZ, 25e6)
    cfg = InterferometerConfig()
    multi = mode_table_from_polarization(0.05, multimode=True)
    one = mode_table_from_polarization(0.05)
    a = synthesize_trace(multi, cfg, slab, f, "E", guide).currents
    b = synthesize_trace(one, cfg, slab, f, "E").currents
    # total power of five unit-power modes is carried by TE10 alone
    assert_allclose(a, math.sqrt(5) * b, rtol=1e-12, atol=0)


def test_gating_switches_on_modes(guide, slab):
    f = frequency_grid(370 * GHZ, 380 * GHZ, 25e6)
    multi = mode_table_from_polarization(0.05, multimode=True)
    gated = synthesize_trace(multi, InterferometerConfig(), slab, f, "H", guide).currents
    ungated = synthesize_trace(multi, InterferometerConfig(), slab, f, "H").currents
    above = f > 374.75 * GHZ
    assert np.allclose(gated[above], ungated[above] * math.sqrt(5 / 3), rtol=1e-12)


def test_grid_errors(slab):
    with pytest.raises(DomainError):
        synthesize_trace(single(1, 0), InterferometerConfig(), slab, np.array([1e11, 2e11, 2.5e11]), "E")
    with pytest.raises(DomainError):
        synthesize_trace(single(1, 0), InterferometerConfig(), slab, np.array([[1e11, 2e11]]), "E")
    refl = slab_reflection(slab, np.linspace(1e11, 2e11, 5))
    with pytest.raises(DomainError):
        synthesize_trace(single(1, 0), InterferometerConfig(), refl, np.linspace(1e11, 2e11, 7), "E")


def test_table_validation():
    with pytest.raises(DomainError):
        ModeAmplitudeTable(())
    with pytest.raises(DomainError):
        ModeAmplitudeTable(tuple(ModeAmplitude(1, 0) for _ in range(7)))
    with pytest.raises(DomainError):
        ModeAmplitudeTable((ModeAmplitude(1, 0, corr=(0.5, 1, 1, 1)),))
    with pytest.raises(DomainError):
        ModeAmplitude(-1, 0)
    with pytest.raises(DomainError):
        ModeAmplitude(1, 0, corr=(1, 1, 1, 1.5))


def test_callable_correction(slab):
    f = frequency_grid(400 * GHZ, 410 * GHZ, 25e6)
    base = ModeAmplitude(1.0, 0.2)
    half = ModeAmplitudeTable((base, ModeAmplitude(0.5, 0.5, corr=(lambda x: 0.5 + 0 * x, 0.5, 0.5, 0.5))))
    full = ModeAmplitudeTable((base, ModeAmplitude(0.25, 0.25)))
    cfg = InterferometerConfig()
    assert_allclose(synthesize_trace(half, cfg, slab, f, "E").currents,
                    synthesize_trace(full, cfg, slab, f, "E").currents, rtol=1e-12)
    bad = ModeAmplitudeTable((base, ModeAmplitude(0.5, 0.5, corr=(lambda x: 2 + 0 * x, 1, 1, 1))))
    with pytest.raises(DomainError):
        synthesize_trace(bad, cfg, slab, f, "E")


@pytest.mark.parametrize("kwargs", [dict(delta_L=0.0), dict(coupling=0.0), dict(rolloff_tau=-1.0), dict(asymmetry=1.2)])
def test_config_validation(kwargs):
    with pytest.raises(DomainError):
        InterferometerConfig(**kwargs)


def test_trace_validation():
    with pytest.raises(DomainError):
        DetectorTrace(np.array([1.0, 3.0, 4.0]), np.zeros(3))
    with pytest.raises(DomainError):
        DetectorTrace(np.array([1.0, 2.0, 3.0]), np.array([0.0, np.nan, 1.0]))
    with pytest.raises(DomainError):
        DetectorTrace(np.array([3.0, 2.0, 1.0]), np.zeros(3))


def test_frequency_grid():
    g = frequency_grid(215 * GHZ, 360 * GHZ, 25e6)
    assert g.size == 5801 and g[0] == 215 * GHZ and g[-1] == pytest.approx(360 * GHZ, rel=1e-15)
    with pytest.raises(DomainError):
        frequency_grid(1.0, 0.5, 0.1)
