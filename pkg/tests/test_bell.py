import math

import pytest
from hypothesis import assume, given, strategies as st

from faradayjam import bell
from faradayjam.bell import (
    TSIRELSON_BOUND,
    ChshEstimate,
    SecurityThreshold,
    ThresholdMode,
    chsh,
    chsh_from_correlations,
    jammed_estimate,
    jammed_s,
    p_insecure,
    required_alpha,
    violation_sigmas,
)
from faradayjam.errors import DomainError, NoAttackRequired
from faradayjam.polarization import PHI_PLUS, PSI_MINUS, MeasurementSettings, apply_arm_rotation, settings_correlations


def brute_force_s(s, alpha, state=PHI_PLUS):
    v = s / TSIRELSON_BOUND
    settings = apply_arm_rotation(MeasurementSettings(), alpha)
    return chsh_from_correlations(settings_correlations(state, settings, visibility=v))


def test_chsh_examples():
    corr = settings_correlations(PHI_PLUS, MeasurementSettings())
    assert chsh_from_correlations(corr) == pytest.approx(2 * math.sqrt(2), abs=1e-12)
    assert chsh(1, -1, 1, 1) == 4
    assert chsh(0.5, 0.5, 0.5, 0.5) == 1.0
    with pytest.raises(DomainError):
        chsh(1.01, 0, 0, 0)
    assert chsh(1 + 1e-10, 0, 0, 0) == pytest.approx(1.0)


def test_psi_minus_reaches_tsirelson_too():
    assert chsh_from_correlations(settings_correlations(PSI_MINUS, MeasurementSettings())) == pytest.approx(
        TSIRELSON_BOUND
    )


def test_jammed_s_examples():
    assert jammed_s(2.37, 0.216) == pytest.approx(2.15, abs=0.005)
    assert jammed_s(2.5, 0.0) == 2.5
    assert jammed_s(TSIRELSON_BOUND, math.pi / 8) == pytest.approx(2.0, abs=1e-12)
    with pytest.raises(DomainError):
        jammed_s(4.5, 0.1)


def test_rotated_tsirelson_examples():
    assert brute_force_s(TSIRELSON_BOUND, math.pi / 4) == pytest.approx(0.0, abs=1e-12)
    direct = brute_force_s(TSIRELSON_BOUND, 0.216)
    assert direct == pytest.approx(2.5685, abs=1e-4)
    assert direct == pytest.approx(jammed_s(TSIRELSON_BOUND, 0.216), abs=1e-12)


@given(st.floats(0, 2 * math.sqrt(2)), st.floats(-math.pi, math.pi))
def test_jammed_s_equals_brute_force(s, alpha):
    assert brute_force_s(s, alpha) == pytest.approx(jammed_s(s, alpha), abs=1e-9)


@given(st.floats(0, 4), st.floats(0, math.pi / 4), st.floats(0, math.pi / 4))
def test_jammed_s_monotone_and_even(s, a1, a2):
    lo, hi = sorted((a1, a2))
    assert jammed_s(s, hi) <= jammed_s(s, lo) + 1e-15
    assert jammed_s(s, -a1) == jammed_s(s, a1)


def test_jammed_estimate_keeps_sigma():
    j = jammed_estimate(ChshEstimate(2.37, 0.09), 0.216)
    assert j.sigma == 0.09


def test_violation_sigmas_examples():
    assert violation_sigmas(ChshEstimate(2.37, 0.09)) == pytest.approx(4.11, abs=0.005)
    assert violation_sigmas(ChshEstimate(2.15, 0.09)) == pytest.approx(1.67, abs=0.005)
    assert violation_sigmas(ChshEstimate(2.0, 0.3)) == 0.0
    assert violation_sigmas(ChshEstimate(1.9, 0.1)) < 0
    with pytest.raises(DomainError):
        violation_sigmas(ChshEstimate(2.3, 0.0))


def test_p_insecure_examples():
    assert p_insecure(ChshEstimate(2.37, 0.09)) == pytest.approx(2.0e-5, rel=0.10)
    assert p_insecure(ChshEstimate(2.15, 0.09)) == pytest.approx(0.048, rel=0.05)
    assert p_insecure(ChshEstimate(2.0, 0.09)) == 0.5
    with pytest.raises(DomainError):
        p_insecure(ChshEstimate(2.3, 0.0))


def test_threshold_conversions():
    assert SecurityThreshold.sigmas(1.7).p == pytest.approx(0.0446, abs=1e-4)
    assert SecurityThreshold.sigmas(2.5).p == pytest.approx(0.006, abs=3e-4)
    assert SecurityThreshold.p_value(0.05).k == pytest.approx(1.6449, abs=1e-4)
    t = SecurityThreshold.p_value(0.006)
    assert SecurityThreshold.sigmas(t.k).p == pytest.approx(0.006, rel=1e-9)
    assert t.mode is ThresholdMode.P_VALUE
    with pytest.raises(DomainError):
        SecurityThreshold.p_value(1.0)
    with pytest.raises(DomainError):
        SecurityThreshold.sigmas(0.0)


@given(st.floats(2.01, 3.9), st.floats(2.01, 3.9))
def test_p_insecure_decreasing_in_s(s1, s2):
    assume(abs(s1 - s2) > 1e-6)
    lo, hi = sorted((s1, s2))
    assert p_insecure(ChshEstimate(hi, 0.5)) < p_insecure(ChshEstimate(lo, 0.5))


def test_estimate_invariants():
    with pytest.raises(DomainError):
        ChshEstimate(4.1, 0.1)
    with pytest.raises(DomainError):
        ChshEstimate(2.5, -0.1)


def test_required_alpha_examples():
    k17, k25 = SecurityThreshold.sigmas(1.7), SecurityThreshold.sigmas(2.5)
    assert required_alpha(ChshEstimate(2.65, 0.09), k17) == pytest.approx(0.31, abs=0.01)
    assert required_alpha(ChshEstimate(2.24, 0.09), k25) == pytest.approx(0.05, abs=0.01)
    assert required_alpha(ChshEstimate(TSIRELSON_BOUND, 0.0), k17) == pytest.approx(math.pi / 8, abs=1e-12)


def test_required_alpha_errors():
    with pytest.raises(NoAttackRequired):
        required_alpha(ChshEstimate(2.1, 0.09), SecurityThreshold.sigmas(1.7))
    with pytest.raises(DomainError):
        required_alpha(ChshEstimate(1.9, 0.09), SecurityThreshold.sigmas(1.7))


@given(st.floats(2.05, 2 * math.sqrt(2)), st.floats(0.0, 0.3), st.floats(0.1, 5.0))
def test_required_alpha_round_trip(s, sigma, k):
    t = SecurityThreshold.sigmas(k)
    target = t.target_s(sigma)
    assume(target < s)
    a = required_alpha(ChshEstimate(s, sigma), t)
    assert 0 < a <= math.pi / 4
    assert jammed_s(s, a) == pytest.approx(target, abs=1e-9)


def test_is_trusted_threshold_semantics():
    t = SecurityThreshold.sigmas(1.7)
    assert bell.is_trusted(ChshEstimate(2.37, 0.09), t)
    assert not bell.is_trusted(ChshEstimate(2.15, 0.09), t)
    # equality counts as untrusted
    assert not bell.is_trusted(ChshEstimate(2.25, 0.125), SecurityThreshold.sigmas(2.0))
