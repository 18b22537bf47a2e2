from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import CASE1_ARRAY, DATA, case1_system, example51_system
from firstint.arrays import synthesize
from firstint.errors import DomainError, IntegrationError
from firstint.lie import AlgebraicIntegral, LogIntegralA, parse_integral
from firstint.numeric import drift, integral_evaluator, rhs_eval, rk4
from firstint.system import MultinomialSystem

HARMONIC_I = AlgebraicIntegral([(1, (0, 2)), (1, (2, 0))])


def test_rhs_examples(harmonic):
    np.testing.assert_array_equal(rhs_eval(harmonic, [0, 1]), [1, 0])
    single = MultinomialSystem.from_terms(2, [((3, -2), (0, 0))])
    np.testing.assert_array_equal(rhs_eval(single, [1, 1]), [3, -2])


def test_rhs_removable_singularity(harmonic):
    # y1 * (y1^-1 y2) is finite at y1 = 0
    assert rhs_eval(harmonic, [0.0, 2.0])[0] == 2.0


def test_rhs_domain_errors():
    frac = MultinomialSystem.from_terms(2, [((1, 0), (F(1, 2), 0))])
    with pytest.raises(DomainError, match="y1"):
        rhs_eval(frac, [-1.0, 1.0])
    neg = MultinomialSystem.from_terms(2, [((0, 1), (-2, 0))])
    with pytest.raises(DomainError, match="y1"):
        rhs_eval(neg, [0.0, 1.0])


def test_rhs_against_direct_formula():
    s = case1_system()
    y = np.array([0.3, -0.7])
    y1, y2 = y
    # y1' = y2 + y1^2 y2, y2' = -y1 - y1 y2^2
    np.testing.assert_allclose(rhs_eval(s, y), [y2 + y1 ** 2 * y2, -y1 - y1 * y2 ** 2], rtol=1e-15)


def test_rk4_rotation_stays_on_circle(harmonic):
    tr = rk4(harmonic, (0.6, 0.8), 1e-2, 2 * np.pi)
    radius = np.hypot(tr.states[:, 0], tr.states[:, 1])
    assert np.max(np.abs(radius - 1)) < 1e-8
    # matches the exact rotation y1 = sin(t + phi)
    phi = np.arctan2(0.6, 0.8)
    np.testing.assert_allclose(tr.states[:, 0], np.sin(tr.times + phi), atol=1e-8)


def test_rk4_step_count(harmonic):
    assert len(rk4(harmonic, (1, 0), 0.1, 1.0).states) == 11
    assert len(rk4(harmonic, (1, 0), 0.3, 1.0).states) == 5
    tr = rk4(harmonic, (1, 0), 1e-3, 10)
    assert len(tr.times) == 10001 and tr.h == 1e-3


def test_rk4_rejects_bad_arguments(harmonic):
    with pytest.raises(ValueError):
        rk4(harmonic, (1, 0), 0.5, 0.1)
    with pytest.raises(ValueError):
        rk4(harmonic, (1, 0), 0.0, 1.0)
    with pytest.raises(ValueError):
        rk4(harmonic, (1, 0, 0), 0.1, 1.0)


def test_rk4_blow_up_aborts():
    s = MultinomialSystem.from_terms(1, [((1,), (1,))])  # z' = z^2
    with pytest.raises(IntegrationError) as info:
        rk4(s, (1.0,), 1e-3, 2.0)
    t = float(str(info.value).split("t = ")[1].rstrip(")"))
    assert 1.0 < t < 2.0


def test_drift_harmonic(harmonic):
    rep = drift(HARMONIC_I, rk4(harmonic, (0.6, 0.8), 1e-3, 10))
    assert rep.initial == pytest.approx(1.0, abs=1e-15)
    assert rep.max_drift <= 1e-6
    assert rep.horizon == pytest.approx(10)


def test_drift_of_constant_integral(harmonic):
    # y1^0 y2^0 is a constant
    rep = drift(AlgebraicIntegral([(5, (0, 0))]), rk4(harmonic, (0.6, 0.8), 0.1, 1))
    assert rep.max_drift == 0.0


def test_drift_logarithmic_example():
    i = parse_integral((DATA / "example51.int").read_text())
    rep = drift(i, rk4(example51_system(), (0.1, 0.1), 1e-4, 1.0))
    assert rep.max_drift <= 1e-6


@pytest.mark.parametrize("y0", [(0.6, 0.8), (0.3, 0.4)])
def test_drift_is_fourth_order(y0):
    s = case1_system()
    i = synthesize(CASE1_ARRAY, s).integral
    coarse = drift(i, rk4(s, y0, 0.1, 5)).max_drift
    fine = drift(i, rk4(s, y0, 0.05, 5)).max_drift
    assert fine > 1e-14
    assert coarse / fine >= 8


@settings(max_examples=20, deadline=None)
@given(st.floats(min_value=1e-3, max_value=1e3).map(lambda x: F(x).limit_denominator(1000)).filter(bool))
def test_drift_scales_with_coefficients(c):
    s = case1_system()
    i = synthesize(CASE1_ARRAY, s).integral
    tr = rk4(s, (0.6, 0.8), 0.1, 2)
    assert drift(i.scaled(c), tr).max_drift == pytest.approx(float(c) * drift(i, tr).max_drift, rel=1e-6)


def test_drift_domain_error_names_sample():
    i = LogIntegralA((1, 0))  # ln y1
    s = MultinomialSystem.from_terms(2, [((1, 0), (-1, 1)), ((0, -1), (1, -1))])
    tr = rk4(s, (0.1, -1.0), 0.1, 1.0)  # y1 crosses zero
    with pytest.raises(DomainError, match="sample"):
        drift(i, tr)


def test_evaluator_matches_hand_value():
    i = parse_integral((DATA / "example51.int").read_text())
    y, yp = 0.3, 0.2
    expected = -4 * y + np.log(1 - 16 / 3 * yp ** 2 + 8 * y ** 2 + 4 * y)
    assert integral_evaluator(i)(np.array([y, yp])) == pytest.approx(expected, rel=1e-15)


def test_drift_report_text():
    rep = drift(HARMONIC_I, rk4(MultinomialSystem.from_terms(2, [((1, 0), (-1, 1)), ((0, -1), (1, -1))]),
                                (0.6, 0.8), 0.5, 1))
    line = str(rep).splitlines()[1]
    mantissa = line.split()[2].split("e")[0]
    assert len(mantissa.replace(".", "").lstrip("-")) == 17
