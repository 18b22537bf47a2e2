from fractions import Fraction
from pathlib import Path

import pytest
import sympy as sp

from firstint.lie import AlgebraicIntegral, LogIntegralA, LogIntegralB
from firstint.system import MultinomialSystem, parse_scalar_ode, parse_system, reduce_scalar_ode

DATA = Path(__file__).parent / "data"


def harmonic_system():
    return MultinomialSystem.from_terms(2, [((1, 0), (-1, 1)), ((0, -1), (1, -1))])


def example51_system():
    return reduce_scalar_ode(parse_scalar_ode((DATA / "example51.ode").read_text()))


def independence_system(l1=1, l2=1, l3=1):
    """Reduced form of y'' = -l1 y^-1 y'^2 + l2 y + l3 y^3."""
    from firstint.system import ScalarODE
    ode = ScalarODE.from_terms(2, [(-l1, (-1, 2)), (l2, (1, 0)), (l3, (3, 0))])
    return reduce_scalar_ode(ode)


@pytest.fixture
def harmonic():
    return harmonic_system()


@pytest.fixture
def data_dir():
    return DATA


# --- independent symbolic oracle -------------------------------------------------

def _sym(x):
    return sp.Rational(Fraction(x).numerator, Fraction(x).denominator)


def _mono(ys, B):
    return sp.Mul(*(y ** _sym(b) for y, b in zip(ys, B)))


def sympy_derivative(integral, s: MultinomialSystem):
    """``dI/dt`` along ``s`` computed by sympy from scratch (no library derivative code)."""
    ys = sp.symbols(f"y1:{s.n + 1}", positive=True)
    field = [ys[i] * sum(_sym(t.coef[i]) * _mono(ys, t.expo) for t in s.terms) for i in range(s.n)]
    if isinstance(integral, AlgebraicIntegral):
        expr = sum(_sym(t.e) * _mono(ys, t.B) for t in integral.terms)
    elif isinstance(integral, LogIntegralA):
        expr = sp.log(_mono(ys, integral.log_expo)) + sum(_sym(t.e) * _mono(ys, t.B) for t in integral.terms)
    elif isinstance(integral, LogIntegralB):
        expr = (_sym(integral.lead.e) * _mono(ys, integral.lead.B)
                + sp.log(1 + sum(_sym(t.e) * _mono(ys, t.B) for t in integral.inner)))
    else:
        raise TypeError(integral)
    return sp.simplify(sum(sp.diff(expr, y) * f for y, f in zip(ys, field)))


def sympy_is_integral(integral, s) -> bool:
    return sympy_derivative(integral, s) == 0


# --- hypothesis strategies -----------------------------------------------------

from hypothesis import strategies as st  # noqa: E402

small_int = st.integers(-3, 3)
small_rat = st.fractions(min_value=-3, max_value=3, max_denominator=3)


@st.composite
def systems(draw, max_n=3, max_r=3, rational=False):
    n = draw(st.integers(1, max_n))
    r = draw(st.integers(1, max_r))
    num = small_rat if rational else small_int
    expos = draw(st.lists(st.tuples(*[num] * n), min_size=r, max_size=r, unique=True))
    coefs = [draw(st.tuples(*[small_int] * n).filter(any)) for _ in range(r)]
    return MultinomialSystem.from_terms(n, list(zip(coefs, expos)))


# --- shared constructions ---------------------------------------------------------

from firstint import exact  # noqa: E402
from firstint.arrays import IntegralArray  # noqa: E402
from firstint.families import ALGEBRAIC, PlanarTheta, classify_planar  # noqa: E402

THETA_BAR = PlanarTheta(1, 0, 0, -1, -1, 1, 1, -1)
THETA_STAR = PlanarTheta(1, 0, 0, 1, 0, 1, 1, 1)
_ = None


def case1_system():
    """Harmonic oscillator plus ``C_3 = C_1 + C_2`` on ``Y^{(1,1)}``."""
    return MultinomialSystem.from_terms(2, [((1, 0), (-1, 1)), ((0, -1), (1, -1)), ((1, -1), (1, 1))])


CASE1_ARRAY = IntegralArray(((1, 0, _), (2, _, 0), (_, 2, 1)))


def validator_cases():
    """Six (system, array) pairs, keyed by the single array condition each one breaks."""
    u3 = [exact.unit(3, i) for i in range(3)]
    cyclic = MultinomialSystem.from_terms(3, [(u3[0], (0, 1, 1)), (u3[1], (1, 0, 1)), (u3[2], (1, 1, 0))])

    # d: B = e1, e2, e3 in four variables; C_a = C_d so H_d sits in column 1
    # while (B_3 - B_1;C_d) happens to vanish
    u4 = [exact.unit(4, i) for i in range(4)]
    E1, E2 = (1, 1, 1, 0), (2, 0, 3, 0)
    d_sys = MultinomialSystem.from_terms(4, [
        (u4[0], exact.sub(E1, u4[0])), (u4[1], exact.sub(E1, u4[1])), (u4[3], exact.sub(E1, u4[2])),
        (u4[0], exact.sub(E2, u4[0])), (u4[2], exact.sub(E2, u4[2]))])

    return {
        "a": (cyclic, IntegralArray(((1, 0, _), (1, _, 2)))),
        "b": (MultinomialSystem.from_terms(2, [((1, 0), (1, 0)), ((0, 1), (0, 1)),
                                              ((1, 1), (2, 3)), ((1, -1), (5, -1))]),
              IntegralArray(((0, 1), (2, 3)))),
        "c": (MultinomialSystem.from_terms(2, [((1, 0), (-1, 1)), ((0, -1), (1, -1)), ((1, 0), (5, 7))]),
              IntegralArray(((1, 0),))),
        "d": (d_sys, IntegralArray(((0, 1, 2), (3, _, 4)))),
        "e": (cyclic, IntegralArray(((1, 0, 2),))),
        "f": (MultinomialSystem.from_terms(2, [((1, 0), (0, 1)), ((2, 0), (1, 1))]), IntegralArray(((1, 0),))),
    }


def random_theta(rng, branch=ALGEBRAIC):
    """Draw small-integer planar parameters until the requested branch appears."""
    while True:
        t = PlanarTheta(*[rng.randint(-3, 3) for _ in range(8)])
        if classify_planar(t) == branch:
            return t


# --- acceptance reporting -------------------------------------------------------------

_ACCEPTANCE = {}


def pytest_addoption(parser):
    parser.addoption("--seed", type=int, default=0, help="offset added to every seeded sweep")


@pytest.fixture
def seed(request):
    """Base seed for the random sweeps; shift it with ``pytest --seed N``."""
    return request.config.getoption("--seed")


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): numbered acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or (rep.when != "call" and rep.passed):
        return
    number, title = mark.args
    ok = rep.passed and _ACCEPTANCE.get(number, (None, True))[1]
    _ACCEPTANCE[number] = (title, ok)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        title, ok = _ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number:2d}  {'PASS' if ok else 'FAIL'}  {title}")
