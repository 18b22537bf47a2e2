import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import sympy_is_integral, systems
from firstint.exact import primitive
from firstint.lie import AlgebraicIntegral, verify_algebraic
from firstint.monomial import monomial_integral_basis, separation_check
from firstint.system import MultinomialSystem


def test_basis_examples(harmonic):
    assert monomial_integral_basis(harmonic) == []
    s = MultinomialSystem.from_terms(2, [((1, -1), (1, 1))])
    assert monomial_integral_basis(s) == [(1, 1)]
    same = MultinomialSystem.from_terms(3, [((1, 2, 3), (0, 0, 1)), ((1, 2, 3), (5, 0, 1))])
    assert len(monomial_integral_basis(same)) == 2


def test_basis_element_is_integral_by_sympy():
    s = MultinomialSystem.from_terms(2, [((1, -1), (1, 1))])
    assert sympy_is_integral(AlgebraicIntegral([(1, (1, 1))]), s)


def test_separation_examples(harmonic):
    s = MultinomialSystem.from_terms(2, [((1, 0), (1, 0)), ((0, 1), (0, 1))])
    res = separation_check(s)
    assert res.substitutions == ((1, 0), (0, 1))
    assert res.diagonal == (1, 1)
    assert separation_check(harmonic) is None
    assert separation_check(MultinomialSystem.from_terms(2, [((1, 0), (1, 0))])) is None


def test_separation_gives_riccati_form():
    # z_i = Y^{H_i} satisfies z_i' = (H_i;C_i) z_i^2: check with sympy
    s = MultinomialSystem.from_terms(2, [((1, 1), (1, 1)), ((1, -1), (1, -1))])
    res = separation_check(s)
    assert res.diagonal == (2, 2)
    y1, y2 = sp.symbols("y1 y2", positive=True)
    field = {y1: y1 * (y1 * y2 + y1 / y2), y2: y2 * (y1 * y2 - y1 / y2)}
    for H, d in zip(res.substitutions, res.diagonal):
        z = y1 ** H[0] * y2 ** H[1]
        dz = sum(sp.diff(z, v) * f for v, f in field.items())
        assert sp.simplify(dz - d * z ** 2) == 0


@settings(max_examples=100)
@given(systems(max_n=4, max_r=4, rational=True))
def test_basis_size_and_verification(s):
    basis = monomial_integral_basis(s)
    assert len(basis) + sp.Matrix([[sp.Rational(x) for x in c] for c in s.coefs]).rank() == s.n
    assert basis == sorted(basis)
    for B in basis:
        assert primitive(B) == B
        assert verify_algebraic(AlgebraicIntegral([(1, B)]), s).holds


@settings(max_examples=50)
@given(systems(max_n=4, max_r=4), st.randoms())
def test_basis_ignores_exponents(s, rnd):
    fresh = set()
    while len(fresh) < s.r:
        fresh.add(tuple(rnd.randint(-4, 4) for _ in range(s.n)))
    other = MultinomialSystem.from_terms(s.n, list(zip(s.coefs, sorted(fresh))))
    assert monomial_integral_basis(other) == monomial_integral_basis(s)
