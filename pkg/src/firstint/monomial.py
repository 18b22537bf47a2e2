"""Monomial first integrals and separation of variables."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exact import RatMatrix, inner_product, null_space
from .system import MultinomialSystem


def monomial_integral_basis(s: MultinomialSystem) -> list[tuple]:
    """Primitive basis of ``{B : (B;C_j) = 0 for all j}``, sorted lexicographically.

    ``Y^B`` is a first integral exactly for ``B`` in this space; the exponent
    rows ``H_j`` play no role.
    """
    rows = RatMatrix.from_rows(s.coefs, cols=s.n)
    return sorted(null_space(rows))


@dataclass(frozen=True)
class SeparationResult:
    """Substitutions ``z_i = Y^{H_i}`` turning the system into ``z_i' = d_i z_i^2``."""

    substitutions: tuple  # H_i rows
    diagonal: tuple       # d_i = (H_i;C_i)


def separation_check(s: MultinomialSystem) -> SeparationResult | None:
    if s.r != s.n:
        return None
    for i, ti in enumerate(s.terms):
        for j, tj in enumerate(s.terms):
            if i != j and inner_product(ti.expo, tj.coef) != 0:
                return None
    diag = tuple(Fraction(inner_product(t.expo, t.coef)) for t in s.terms)
    return SeparationResult(tuple(s.expos), diag)
