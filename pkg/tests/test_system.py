from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import DATA, harmonic_system, independence_system, systems
from firstint.errors import DegenerateScaleError, DimensionError, EmptySystemError, ParseError
from firstint.numeric import rk4
from firstint.system import (MultinomialSystem, ScalarODE, canonicalize, check_exponent_independence,
                             format_scalar_ode, format_system, parse_scalar_ode, parse_system,
                             parse_system_report, reduce_scalar_ode, sigma_alpha)


def test_parse_harmonic_file():
    s = parse_system((DATA / "harmonic.mvf").read_text())
    assert s.n == 2 and s.r == 2
    assert s.expos == [(-1, 1), (1, -1)]
    assert s.coefs == [(1, 0), (0, -1)]


def test_cancelling_terms_leave_empty_system():
    with pytest.raises(EmptySystemError):
        parse_system("mvf 2\nterm 1 0 | 1 1\nterm -1 0 | 1 1\n")


def test_merge_report():
    s, report = parse_system_report("mvf 1\nterm 1 | 2\nterm 3 | 0\nterm 2 | 2\nterm 1 | 5\nterm -1 | 5\n")
    assert s.expos == [(2,), (0,)]
    assert s.coefs == [(3,), (3,)]
    assert report.merged == ((0, (0, 2)),)
    assert report.dropped == ((5,),)


@pytest.mark.parametrize("text, line, column", [
    ("mvf 2\nterm 1 0 | 1 x\n", 2, 14),
    ("mvf 2\nterm 1 0 1 1\n", 2, 1),
    ("mvg 2\n", 1, 1),
    ("mvf -1\n", 1, 5),
    ("mvf 1\nterm 1/0 | 1\n", 2, 6),
    ("mvf 1\nfoo 1 | 1\n", 2, 1),
])
def test_syntax_errors_carry_position(text, line, column):
    with pytest.raises(ParseError) as info:
        parse_system(text)
    assert (info.value.line, info.value.column) == (line, column)


def test_dimension_mismatch():
    with pytest.raises(DimensionError):
        parse_system("mvf 2\nterm 1 0 | 1\n")


def test_comments_and_blank_lines():
    s = parse_system("# header\n\nmvf 1  # one variable\nterm 2 | 1 # logistic\n")
    assert s.coefs == [(2,)] and s.expos == [(1,)]


def test_parse_scalar_ode():
    o = parse_scalar_ode((DATA / "example51.ode").read_text())
    assert o.order == 2
    assert [(t.l, t.m) for t in o.terms] == [(2, (0, 2)), (-3, (2, 0))]
    assert parse_scalar_ode("ode 2\nterm 1 | 0 0\n").terms[0].m == (0, 0)


def test_scalar_ode_merges_duplicates():
    o = parse_scalar_ode("ode 1\nterm 1 | 2\nterm 1/2 | 2\nterm 1 | 3\nterm -1 | 3\n")
    assert [(t.l, t.m) for t in o.terms] == [(F(3, 2), (2,))]


def test_reduce_example51():
    s = reduce_scalar_ode(parse_scalar_ode((DATA / "example51.ode").read_text()))
    assert s.expos == [(-1, 1), (0, 1), (2, -1)]
    assert s.coefs == [(1, 0), (0, 2), (0, -3)]


def test_reduce_trivial_ode():
    s = reduce_scalar_ode(ScalarODE(2))
    assert s.coefs == [(1, 0)] and s.expos == [(-1, 1)]


def test_reduce_merges_chain_term():
    s = independence_system()
    assert s.r == 3
    assert s.terms[0].coef == (1, -1) and s.terms[0].expo == (-1, 1)


def test_sigma_alpha_examples(harmonic):
    assert sigma_alpha(harmonic, 2).expos == [(-2, 2), (2, -2)]
    assert sigma_alpha(harmonic, 1) == harmonic
    assert sigma_alpha(harmonic, F(1, 2)).expos == [(F(-1, 2), F(1, 2)), (F(1, 2), F(-1, 2))]
    with pytest.raises(DegenerateScaleError):
        sigma_alpha(harmonic, 0)


def test_exponent_independence_examples():
    o = ScalarODE.from_terms(2, [(-1, (-1, 2)), (1, (1, 0)), (1, (3, 0))])
    assert check_exponent_independence(o) == [False, True, True]
    o3 = ScalarODE.from_terms(3, [(1, (0, -1, 2)), (1, (-1, 1, 1)), (1, (1, 0, 0))])
    assert check_exponent_independence(o3) == [False, False, True]


# properties ----------------------------------------------------------------

@settings(max_examples=100)
@given(systems(rational=True))
def test_print_parse_round_trip(s):
    assert parse_system(format_system(s)) == s
    assert format_system(parse_system(format_system(s))) == format_system(s)


@settings(max_examples=100)
@given(systems())
def test_canonicalize_idempotent(s):
    again, report = canonicalize(s.n, s.terms)
    assert again == s
    assert report.merged == () and report.dropped == ()


@settings(max_examples=100)
@given(systems(rational=True), st.fractions(min_value=-5, max_value=5, max_denominator=4).filter(bool))
def test_sigma_alpha_inverse(s, a):
    assert sigma_alpha(sigma_alpha(s, a), 1 / a) == s


@settings(max_examples=50)
@given(st.integers(1, 3), st.data())
def test_scalar_ode_round_trip(order, data):
    rows = data.draw(st.lists(st.tuples(*[st.integers(-2, 2)] * order), max_size=3, unique=True))
    ls = data.draw(st.lists(st.fractions(-3, 3, max_denominator=3).filter(bool), min_size=len(rows), max_size=len(rows)))
    o = ScalarODE.from_terms(order, list(zip(ls, rows)))
    assert parse_scalar_ode(format_scalar_ode(o)) == o


def _direct_rk4(ode, y0, h, steps):
    """Integrate the scalar ODE in state form (y, y', ...) without the reduction."""
    def f(v):
        top = sum(float(t.l) * np.prod([v[i] ** float(t.m[i]) for i in range(ode.order)]) for t in ode.terms)
        return np.append(v[1:], top)
    v = np.array(y0, dtype=float)
    out = [v]
    for _ in range(steps):
        k1 = f(v)
        k2 = f(v + h / 2 * k1)
        k3 = f(v + h / 2 * k2)
        k4 = f(v + h * k3)
        v = v + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        out.append(v)
    return np.array(out)


@pytest.mark.parametrize("name, y0", [("example51.ode", (0.1, 0.1)), ("independence.ode", (1.0, 0.5))])
def test_reduced_system_matches_direct_simulation(name, y0):
    ode = parse_scalar_ode((DATA / name).read_text())
    tr = rk4(reduce_scalar_ode(ode), y0, 1e-2, 0.5)
    direct = _direct_rk4(ode, y0, 1e-2, len(tr.states) - 1)
    np.testing.assert_allclose(tr.states, direct, rtol=1e-12, atol=1e-13)


def test_system_invariants():
    with pytest.raises(ValueError):
        MultinomialSystem.from_terms(2, [((0, 0), (1, 1))])
    with pytest.raises(DimensionError):
        MultinomialSystem(0, ())
    assert harmonic_system().coefficient_matrix().rank() == 2
