import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from guidescat import GuideKind, GuideSpec, RootMode, build_channels, channels_from_k0, channels_from_kn, cir_constant
from guidescat.errors import InvalidArgument, NoOpenChannel, ThresholdDegeneracy, UnsupportedGuide

from . import oracles

DISC = GuideSpec()
COSINE = GuideSpec(root_mode=RootMode.COSINE)
HARMONIC = GuideSpec(kind=GuideKind.HARMONIC_EQUIVALENT)

# disc of unit radius at k = 3, from 40-digit mpmath
K3_K0 = 1.7935478909282616
K3_PC = 4.6337093503652219
K3_N0 = 1.9262348469772531
K3_GAMMA = 1.3791586699846086
EXACT_C_PRIME = 2.5794932210726230


def test_frozen_values_match_oracle():
    q, N, k_open, p_c, n_E = oracles.disc_channels(3)
    assert n_E == 0
    assert float(k_open[0]) == pytest.approx(K3_K0, rel=1e-16)
    assert float(p_c) == pytest.approx(K3_PC, rel=1e-16)
    assert float(N[0]) == pytest.approx(K3_N0, rel=1e-16)
    assert float(2 * N[0] ** 2 / (3 * k_open[0])) == pytest.approx(K3_GAMMA, rel=1e-15)
    assert float(oracles.exact_c_prime()) == pytest.approx(EXACT_C_PRIME, rel=1e-16)


def test_disc_channels_at_k3():
    ch = build_channels(DISC, 3.0)
    assert ch.n_E == 0
    assert ch.k_open[0] == pytest.approx(K3_K0, rel=1e-14)
    assert ch.p_c == pytest.approx(K3_PC, rel=1e-14)
    assert ch.N[0] == pytest.approx(K3_N0, rel=1e-14)
    assert ch.N[0] ** 2 == pytest.approx(3.710380685709482, rel=1e-14)
    assert ch.gamma == pytest.approx(K3_GAMMA, rel=1e-14)
    assert ch.d_perp == pytest.approx(1 / K3_N0, rel=1e-14)


def test_cosine_root_mode():
    assert COSINE.mode_wavenumber(0) == pytest.approx(0.75 * math.pi, rel=1e-15)
    assert COSINE.mode_norm(0) == pytest.approx(math.sqrt(3 * math.pi**2 / 8), rel=1e-15)
    assert cir_constant(COSINE) == pytest.approx(math.sqrt(20 / 3), rel=1e-15)


def test_c_prime_values():
    assert cir_constant(DISC) == pytest.approx(EXACT_C_PRIME, rel=1e-14)
    assert cir_constant(HARMONIC) == 2.0
    # the cosine approximation is good to a tenth of a percent
    assert abs(cir_constant(COSINE) / cir_constant(DISC) - 1) < 1e-3


@pytest.mark.parametrize("scale", [0.3, 1.0, 7.5])
def test_c_prime_is_scale_free(scale):
    assert cir_constant(GuideSpec(transverse_scale=scale)) == pytest.approx(EXACT_C_PRIME, rel=1e-14)


def test_harmonic_single_mode():
    ch = channels_from_k0(HARMONIC, 0.3)
    assert ch.N[0] == 1.0
    assert ch.d_perp == 1.0
    assert ch.q[1] ** 2 - ch.q[0] ** 2 == pytest.approx(4.0)
    assert ch.p_c**2 == pytest.approx(4.0 - 0.09, rel=1e-14)
    with pytest.raises(UnsupportedGuide):
        build_channels(HARMONIC, 2.5)


@settings(max_examples=150, deadline=None)
@given(st.floats(2.5, 40.0))
def test_channel_invariants(k):
    try:
        ch = build_channels(DISC, k, n_closed=2)
    except ThresholdDegeneracy:
        return
    n = ch.n_E
    assert np.all(ch.q[: n + 1] < k) and ch.q[n + 1] > k
    np.testing.assert_allclose(ch.k_open**2 + ch.q[: n + 1] ** 2, k * k, rtol=1e-12)
    assert ch.p_c**2 == pytest.approx(ch.q[n + 1] ** 2 - k * k, rel=1e-9, abs=1e-9)
    assert len(ch.p_closed) == 2 and np.all(np.diff(ch.p_closed) > 0) and ch.p_closed[0] > ch.p_c
    expect = np.sum(2 * ch.N[: n + 1] ** 2 / (k * ch.k_open))
    assert ch.gamma == pytest.approx(expect, rel=1e-14)


def test_n_E_is_monotone_in_k():
    ks = np.linspace(2.41, 30.0, 500)
    counts = [build_channels(DISC, k).n_E for k in ks]
    assert np.all(np.diff(counts) >= 0)
    assert counts[0] == 0 and counts[-1] == 8


def test_gamma_scales_with_geometry():
    # gamma is dimensionless, so invariant when k scales as 1/l_perp
    g1 = build_channels(DISC, 3.0).gamma
    g2 = build_channels(GuideSpec(transverse_scale=2.0), 1.5).gamma
    assert g2 == pytest.approx(g1, rel=1e-14)


def test_threshold_errors():
    with pytest.raises(NoOpenChannel):
        build_channels(DISC, 2.0)
    with pytest.raises(NoOpenChannel):
        build_channels(DISC, DISC.mode_wavenumber(0))
    with pytest.raises(ThresholdDegeneracy):
        build_channels(DISC, DISC.mode_wavenumber(1))
    with pytest.raises(ThresholdDegeneracy):
        channels_from_kn(DISC, 0, 0.0)


def test_channels_from_kn_resolves_tiny_momenta():
    ch = channels_from_kn(DISC, 1, 1e-12)
    assert ch.n_E == 1
    assert ch.k_open[1] == 1e-12
    gap = DISC.gap
    assert ch.k_open[0] == pytest.approx(math.sqrt(gap), rel=1e-14)


def test_channels_from_k0_matches_build():
    a = channels_from_k0(DISC, 0.7)
    b = build_channels(DISC, math.hypot(DISC.mode_wavenumber(0), 0.7))
    assert a.k_open[0] == pytest.approx(b.k_open[0], rel=1e-13)
    assert a.p_c == pytest.approx(b.p_c, rel=1e-14)


def test_spec_validation():
    with pytest.raises(InvalidArgument):
        GuideSpec(transverse_scale=0.0)
    with pytest.raises(InvalidArgument):
        GuideSpec(kind="harmonic", root_mode="cosine")
    with pytest.raises(ValueError):
        GuideSpec(kind="triangle")
    ch = build_channels(DISC, 3.0)
    with pytest.raises(ValueError):
        ch.q[0] = 1.0
