import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from hornpol.constants import C0
from hornpol.errors import DomainError, NumericalError
from hornpol.fresnel import (
    AsymmetryCalibration,
    DielectricSlab,
    SlabReflection,
    calibrate_asymmetry,
    phase_offsets,
    residual_phase,
    resonance_frequencies,
    resonance_spacing,
    resonance_spacing_external_angle,
    slab_reflection,
    slab_transmission,
    wrap_phase,
)

GHZ = 1e9


def matrix_oracle(n, t, alpha_deg, f):
    """Thin-film characteristic-matrix reflection (exp(+i w t) convention, p sign per Born & Wolf)."""
    a = math.radians(alpha_deg)
    ct = math.sqrt(1 - (math.sin(a) / n) ** 2)
    out = {}
    for pol, eta0, eta1 in (("s", math.cos(a), n * ct), ("p", 1 / math.cos(a), n / ct)):
        d = 2 * math.pi * f / C0 * n * t * ct
        # substrate is air, so its admittance is eta0
        B = np.cos(d) + 1j * np.sin(d) * eta0 / eta1
        Cc = 1j * eta1 * np.sin(d) + np.cos(d) * eta0
        out[pol] = (eta0 * B - Cc) / (eta0 * B + Cc)
    return out


def test_matches_characteristic_matrix(slab, rng):
    f = rng.uniform(150e9, 600e9, 2000)
    refl = slab_reflection(slab, f)
    ref = matrix_oracle(slab.n_index, slab.t, slab.alpha, f)
    # opposite time convention (conjugate); p coefficient sign convention flipped
    assert_allclose(refl.r_perp, np.conj(ref["s"]), atol=1e-12)
    assert_allclose(refl.r_par, -np.conj(ref["p"]), atol=1e-12)


def test_interface_values(slab):
    r_par, r_perp = slab.interface_coefficients()
    assert r_perp == pytest.approx(-0.6507, abs=1e-4)
    assert r_par == pytest.approx(0.4235, abs=1e-4)
    # at 45 degrees r_p = r_s^2 exactly (Abeles relation)
    assert r_par == pytest.approx(r_perp ** 2, rel=1e-12)


def test_energy_conservation(slab, rng):
    f = rng.uniform(100e9, 1000e9, 10_000)
    refl = slab_reflection(slab, f)
    t_par, t_perp = slab_transmission(slab, f)
    assert np.max(np.abs(np.abs(refl.r_par) ** 2 + np.abs(t_par) ** 2 - 1)) < 1e-9
    assert np.max(np.abs(np.abs(refl.r_perp) ** 2 + np.abs(t_perp) ** 2 - 1)) < 1e-9


@given(n=st.floats(1.0, 5.0), t=st.floats(1e-5, 1e-2), alpha=st.floats(0, 89), f=st.floats(1e9, 2e12))
def test_bounded_magnitudes(n, t, alpha, f):
    refl = slab_reflection(DielectricSlab(n, t, alpha), f)
    assert abs(refl.r_par) <= 1 + 1e-12
    assert abs(refl.r_perp) <= 1 + 1e-12


def _refined_zeros(slab, which, f_lo, f_hi, step=1e6):
    f = np.arange(f_lo, f_hi, step)
    mag = np.abs(getattr(slab_reflection(slab, f), which))
    idx = np.where((mag[1:-1] < mag[:-2]) & (mag[1:-1] <= mag[2:]))[0] + 1
    zeros = []
    for i in idx:
        # Newton on the (analytic) complex coefficient, central-difference slope
        x = f[i]
        for _ in range(4):
            r = getattr(slab_reflection(slab, x), which)
            dr = (getattr(slab_reflection(slab, x + 1e3), which) - getattr(slab_reflection(slab, x - 1e3), which)) / 2e3
            x -= (r / dr).real
        assert abs(x - f[i]) < step
        zeros.append(x)
    return np.array(zeros)


def test_zero_scan_spacing(slab):
    par = _refined_zeros(slab, "r_par", 150e9, 600e9)
    perp = _refined_zeros(slab, "r_perp", 150e9, 600e9)
    assert par.size == perp.size > 30
    # co-located within one scan step
    assert np.max(np.abs(par - perp)) < 1e6
    for which, z in (("r_par", par), ("r_perp", perp)):
        assert max(abs(getattr(slab_reflection(slab, x), which)) for x in z) < 1e-6
        spacing = np.diff(z)
        assert np.mean(spacing) / GHZ == pytest.approx(13.13, abs=0.01)
        # constant across the band
        assert np.max(np.abs(spacing / resonance_spacing(slab) - 1)) < 1e-6


def test_resonance_formula(slab):
    ct = math.sqrt(1 - (math.sin(math.radians(45)) / 3.416) ** 2)
    assert resonance_spacing(slab) == pytest.approx(C0 / (2 * 3.416 * 3.415e-3 * ct), rel=1e-15)
    assert resonance_spacing(slab) / GHZ == pytest.approx(13.1338, abs=1e-4)
    assert resonance_spacing_external_angle(slab) / GHZ == pytest.approx(18.172, abs=1e-3)
    zs = resonance_frequencies(slab, 150e9, 600e9)
    refl = slab_reflection(slab, zs)
    assert np.max(np.abs(refl.r_par)) < 1e-9 and np.max(np.abs(refl.r_perp)) < 1e-9


def test_normal_incidence_resonance_transparent():
    slab = DielectricSlab(3.416, 3.415e-3, 0.0)
    f = C0 / (2 * 3.416 * 3.415e-3) * 23
    refl = slab_reflection(slab, f)
    assert abs(refl.r_par) < 1e-12 and abs(refl.r_perp) < 1e-12


def test_normal_incidence_limit(rng):
    slab = DielectricSlab(3.416, 3.415e-3, 0.0)
    f = rng.uniform(100e9, 800e9, 1000)
    refl = slab_reflection(slab, f)
    # r_par = -r_perp at normal incidence under this sign convention
    assert np.max(np.abs(refl.r_par + refl.r_perp)) < 1e-9


def test_opposite_signs_at_45_deg(slab):
    f = np.linspace(215e9, 580e9, 20001)
    refl = slab_reflection(slab, f)
    away = np.abs(refl.r_perp) > 1e-3
    assert np.all(refl.r_par.real[away] > 0)
    assert np.all(refl.r_perp.real[away] < 0)


def test_opposite_signs_finite_angle_band():
    f = np.linspace(215e9, 580e9, 4001)
    for alpha in (30.0, 40.0, 45.0, 50.0, 60.0):
        refl = slab_reflection(DielectricSlab(alpha=alpha), f)
        away = np.abs(refl.r_perp) > 1e-3
        assert np.all(refl.r_par.real[away] * refl.r_perp.real[away] < 0)


@pytest.mark.parametrize("r_par, r_perp, expected", [(-0.3, 0.3, math.pi), (0.4 + 0.1j, 0.4 + 0.1j, 0.0)])
def test_phase_offsets_examples(r_par, r_perp, expected):
    off = phase_offsets(SlabReflection(1.0, complex(r_par), complex(r_perp)))
    assert off.defined
    assert off.delta_phi == pytest.approx(expected, abs=1e-15)


def test_phase_offsets_golden_300ghz(slab):
    off = phase_offsets(slab_reflection(slab, 300 * GHZ))
    ref = matrix_oracle(slab.n_index, slab.t, slab.alpha, 300 * GHZ)
    expected = wrap_phase(np.angle(-np.conj(ref["p"])) - np.angle(np.conj(ref["s"])))
    assert off.delta_phi == pytest.approx(expected, abs=1e-12)
    assert off.delta_phi == pytest.approx(-2.874275886, abs=1e-8)
    assert math.isfinite(off.delta_phi) and off.delta_phi != 0


def test_phase_offsets_undefined_at_zero():
    off = phase_offsets(SlabReflection(1.0, 0j, 0.5 + 0j))
    assert not off.defined and math.isnan(off.delta_phi) and math.isnan(off.phi_par)


@given(st.floats(-50, 50))
def test_wrap_range(x):
    w = wrap_phase(x)
    assert -math.pi < w <= math.pi
    assert math.isclose(math.cos(w), math.cos(x), abs_tol=1e-9)


@given(st.floats(-math.pi, math.pi), st.floats(1e-3, 2.0))
def test_residual_phase_folds_sign(psi, mag):
    r = mag * np.exp(1j * psi)
    res = residual_phase(r)
    assert -math.pi / 2 < res <= math.pi / 2
    # r = +-|r| exp(i res)
    assert min(abs(r - mag * np.exp(1j * res)), abs(r + mag * np.exp(1j * res))) < 1e-9


def test_calibrate_identity_and_inverse(slab):
    theory = np.abs(slab_reflection(slab, np.linspace(215e9, 580e9, 2000)).r_par)
    assert calibrate_asymmetry(theory, theory).A == pytest.approx(1.0, rel=1e-14)
    assert calibrate_asymmetry(theory / 0.85, theory).A == pytest.approx(0.85, rel=1e-12)


def test_calibrate_noise_monte_carlo(slab):
    theory = np.abs(slab_reflection(slab, np.linspace(215e9, 580e9, 2000)).r_par)
    sigma = 0.01 * theory.max()
    for seed in range(100):
        noise = np.random.default_rng(seed).normal(0, sigma, theory.size)
        assert abs(calibrate_asymmetry(theory / 0.85 + noise, theory).A - 0.85) < 0.02


def test_calibrate_clips_to_one():
    theory = np.linspace(1, 2, 50)
    assert calibrate_asymmetry(theory * 0.5, theory).A == 1.0


@pytest.mark.parametrize("measured, theory", [
    (np.zeros(10), np.ones(10)),
    (np.ones(10), np.zeros(10)),
    (-np.ones(10), np.ones(10)),
])
def test_calibrate_degenerate(measured, theory):
    with pytest.raises(NumericalError):
        calibrate_asymmetry(measured, theory)


def test_calibrate_shape_mismatch():
    with pytest.raises(DomainError):
        calibrate_asymmetry(np.ones(3), np.ones(4))


@pytest.mark.parametrize("kwargs", [dict(n_index=0.9), dict(t=0.0), dict(alpha=90.0), dict(alpha=-1.0)])
def test_slab_validation(kwargs):
    with pytest.raises(DomainError):
        DielectricSlab(**kwargs)


def test_asymmetry_validation():
    for bad in (0.0, 1.1, -0.2):
        with pytest.raises(DomainError):
            AsymmetryCalibration(bad)


def test_negative_frequency_rejected(slab):
    with pytest.raises(DomainError):
        slab_reflection(slab, -1.0)
