"""Closed-form parameter families and their logarithmic degenerations.

* the two-term planar family ``y' = y (C_1 Y^{H_1} + C_2 Y^{H_2})`` with its
  algebraic, monomial and two logarithmic branches;
* three-term extensions ``C_3 = l_1 C_1 + l_2 C_2`` (both ``l`` nonzero, or
  ``l_1 = 0``);
* the second-order family ``y'' = c22 y^h21 y'^2 + c23 y^alpha y'^beta`` whose
  integral has the form ``e_1 Y^{B_1} + ln(1 + sum e_k Y^{B_k})``.

Parameters are exact rationals; every constructor checks its own result with
the symbolic verifier before returning it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import exact
from .errors import BranchError, ConstraintError, ContradictionError, PreconditionError
from .exact import RatMatrix, inner_product as ip, sub, vector
from .lie import (AlgebraicIntegral, LogIntegralA, LogIntegralB, verify_algebraic, verify_logA,
                  verify_logB)
from .monomial import monomial_integral_basis
from .system import MultinomialSystem, ScalarODE, reduce_scalar_ode

ALGEBRAIC = "Algebraic"
MONOMIAL = "Monomial"
LOG_STAR = "LogStar"
LOG_STAR_STAR = "LogStarStar"
DEGENERATE = "Degenerate"


@dataclass(frozen=True)
class PlanarTheta:
    c11: Fraction
    c21: Fraction
    c12: Fraction
    c22: Fraction
    h11: Fraction
    h12: Fraction
    h21: Fraction
    h22: Fraction

    def __post_init__(self):
        for name in self.__dataclass_fields__:
            object.__setattr__(self, name, exact.as_rational(getattr(self, name)))

    @classmethod
    def from_sequence(cls, values) -> "PlanarTheta":
        return cls(*values)

    @property
    def C1(self):
        return (self.c11, self.c21)

    @property
    def C2(self):
        return (self.c12, self.c22)

    @property
    def H1(self):
        return (self.h11, self.h12)

    @property
    def H2(self):
        return (self.h21, self.h22)

    @property
    def d(self) -> Fraction:
        return self.c11 * self.c22 - self.c12 * self.c21

    def system(self) -> MultinomialSystem:
        return MultinomialSystem.from_terms(2, [(self.C1, self.H1), (self.C2, self.H2)])

    def gaps(self) -> tuple[Fraction, Fraction]:
        """``((H_1 - H_2;C_1), (H_1 - H_2;C_2))``."""
        D = sub(self.H1, self.H2)
        return ip(D, self.C1), ip(D, self.C2)


@dataclass(frozen=True)
class PlanarBranch:
    tag: str
    integral: object = None  # AlgebraicIntegral | LogIntegralA | None


def classify_planar(t: PlanarTheta) -> str:
    if t.H1 == t.H2:
        return DEGENERATE
    if t.d == 0:
        return MONOMIAL
    g1, g2 = t.gaps()
    if g1 != 0 and g2 != 0:
        return ALGEBRAIC
    if g2 == 0 and g1 != 0:
        return LOG_STAR
    if g1 == 0 and g2 != 0:
        return LOG_STAR_STAR
    # H1 != H2 and independent C's cannot both be orthogonal to H1 - H2
    raise ContradictionError("both inner products vanish with d != 0 and H1 != H2")


def planar_branch(t: PlanarTheta) -> PlanarBranch:
    tag = classify_planar(t)
    if tag == ALGEBRAIC:
        return PlanarBranch(tag, planar_algebraic(t))
    if tag in (LOG_STAR, LOG_STAR_STAR):
        return PlanarBranch(tag, planar_log(t))
    if tag == MONOMIAL:
        basis = monomial_integral_basis(t.system())
        return PlanarBranch(tag, AlgebraicIntegral([(1, basis[0])]))
    return PlanarBranch(tag)


def _planar_exponents(t: PlanarTheta):
    g1, g2 = t.gaps()
    B1 = exact.scale(g2 / t.d, (-t.c21, t.c11))
    B2 = exact.scale(-g1 / t.d, (t.c22, -t.c12))
    return B1, B2


def planar_algebraic(t: PlanarTheta) -> AlgebraicIntegral:
    """``e_1 Y^{B_1} + e_2 Y^{B_2}`` with ``e_1 = (H_2-H_1;C_1)``, ``e_2 = (H_2-H_1;C_2)``."""
    tag = classify_planar(t)
    if tag != ALGEBRAIC:
        raise BranchError(f"planar_algebraic needs the Algebraic branch, got {tag}")
    B1, B2 = _planar_exponents(t)
    if B2 != exact.add(B1, sub(t.H2, t.H1)):
        raise ContradictionError("B_2 != B_1 + H_2 - H_1")
    g1, g2 = t.gaps()
    integral = AlgebraicIntegral([(-g1, B1), (-g2, B2)])
    _require(verify_algebraic(integral, t.system()), "planar algebraic integral")
    return integral


def planar_log(t: PlanarTheta) -> LogIntegralA:
    """Logarithmic integral on either degenerate locus of the planar family.

    LogStar (``(H_1-H_2;C_2) = 0``): ``ln Y^{B_1} + Y^{H_2-H_1}`` with
    ``(B_1;C_1) = 0``, ``(B_1;C_2) = (H_1-H_2;C_1)``.  LogStarStar is the
    mirror image with the roles of the two terms exchanged.
    """
    tag = classify_planar(t)
    g1, g2 = t.gaps()
    C = RatMatrix.from_rows([t.C1, t.C2])
    if tag == LOG_STAR:
        mono = sub(t.H2, t.H1)
        rhs = (Fraction(0), g1)
    elif tag == LOG_STAR_STAR:
        mono = sub(t.H1, t.H2)
        rhs = (-g2, Fraction(0))
    else:
        raise BranchError(f"planar_log needs a logarithmic branch, got {tag}")
    sol = exact.solve(C, rhs)
    if sol.kind != "unique":
        raise ContradictionError("log exponent system is not uniquely solvable")
    integral = LogIntegralA(sol.particular, [(1, mono)])
    _require(verify_logA(integral, t.system()), f"{tag} integral")
    return integral


def _require(check, what):
    if not check.holds:
        raise ContradictionError(f"{what} fails verification: {check.residual}")


# --- three-term extensions ----------------------------------------------------------

@dataclass(frozen=True)
class ExtensionParams:
    base: PlanarTheta
    l1: Fraction
    l2: Fraction
    H3: tuple

    def __post_init__(self):
        object.__setattr__(self, "l1", exact.as_rational(self.l1))
        object.__setattr__(self, "l2", exact.as_rational(self.l2))
        object.__setattr__(self, "H3", vector(self.H3))

    @property
    def C3(self):
        b = self.base
        return exact.add(exact.scale(self.l1, b.C1), exact.scale(self.l2, b.C2))

    def system(self) -> MultinomialSystem:
        b = self.base
        return MultinomialSystem.from_terms(2, [(b.C1, b.H1), (b.C2, b.H2), (self.C3, self.H3)])


@dataclass(frozen=True)
class Extension:
    system: MultinomialSystem
    integral: AlgebraicIntegral
    determinant: Fraction | None = None  # 3x3 coupling determinant, Case 1 only


def _base_algebraic(x: ExtensionParams):
    tag = classify_planar(x.base)
    if tag != ALGEBRAIC:
        raise BranchError(f"extension base must be on the Algebraic branch, got {tag}")
    return planar_algebraic(x.base)


def extend_case1(x: ExtensionParams) -> Extension:
    """``S_3 = S_2 + C_3 Y^{H_3}`` with ``l_1 l_2 != 0``; adds ``e_3 Y^{B_1 + H_3 - H_1}``."""
    if x.l1 * x.l2 == 0:
        raise PreconditionError("Case 1 requires l1 * l2 != 0")
    b = x.base
    C1, C2, C3, H1, H2, H3 = b.C1, b.C2, x.C3, b.H1, b.H2, x.H3
    if ip(H3, C3) != x.l1 * ip(H1, C1) + x.l2 * ip(H2, C2):
        raise ConstraintError("(H3;C3) != l1 (H1;C1) + l2 (H2;C2)")
    for D, Cs, label in ((sub(H1, H3), (C1, C3), "H1-H3"), (sub(H2, H3), (C2, C3), "H2-H3")):
        if any(ip(D, c) == 0 for c in Cs):
            raise BranchError(f"inequality on ({label}; .) fails")
    I2 = _base_algebraic(x)
    (e1, B1), (e2, B2) = [(t.e, t.B) for t in I2.terms]
    B3 = exact.add(B1, sub(H3, H1))
    e3 = -e1 * ip(B1, C3) / ip(B3, C1)
    det = _det3([[ip(B1, C2), ip(B2, C1), 0],
                 [ip(B1, C3), 0, ip(B3, C1)],
                 [0, ip(B2, C3), ip(B3, C2)]])
    if det != 0:
        raise ContradictionError(f"Case 1 coupling determinant is {det}, expected 0")
    s = x.system()
    integral = AlgebraicIntegral([(e1, B1), (e2, B2), (e3, B3)])
    _require(verify_algebraic(integral, s), "Case 1 integral")
    return Extension(s, integral, det)


def extend_case2(x: ExtensionParams) -> Extension:
    """``C_3 = l_2 C_2`` with ``(H_3 - H_2;C_2) = 0``."""
    if x.l1 != 0 or x.l2 == 0:
        raise PreconditionError("Case 2 requires l1 = 0 and l2 != 0")
    b = x.base
    C1, C2, C3, H1, H2, H3 = b.C1, b.C2, x.C3, b.H1, b.H2, x.H3
    if ip(sub(H3, H2), C2) != 0:
        raise ConstraintError("(H3 - H2;C2) != 0")
    D = sub(H3, H1)
    if ip(D, C1) == 0 or ip(D, C3) == 0:
        raise BranchError("inequality (H3 - H1;C1,C3) != 0 fails")
    I2 = _base_algebraic(x)
    (e1, B1), (e2, B2) = [(t.e, t.B) for t in I2.terms]
    B3 = exact.add(B1, D)
    e3 = -e1 * ip(B1, C3) / ip(B3, C1)
    s = x.system()
    integral = AlgebraicIntegral([(e1, B1), (e2, B2), (e3, B3)])
    _require(verify_algebraic(integral, s), "Case 2 integral")
    return Extension(s, integral)


def _det3(m) -> Fraction:
    (a, b, c), (d, e, f), (g, h, i) = m
    return Fraction(a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g))


# --- second-order logarithmic family -------------------------------------------------

@dataclass(frozen=True)
class LogFamilyParams:
    h21: Fraction
    h32: Fraction
    c22: Fraction
    c23: Fraction
    q: int

    def __post_init__(self):
        for name in ("h21", "h32", "c22", "c23"):
            object.__setattr__(self, name, exact.as_rational(getattr(self, name)))
        if not isinstance(self.q, int) or self.q < 3:
            raise PreconditionError("q must be an integer >= 3")
        if self.h21 == -1:
            raise PreconditionError("h21 = -1 makes the exponent h21 + 1 vanish")
        if self.c23 == 0:
            raise PreconditionError("c23 must be nonzero")
        if self.h32 == 1:
            raise PreconditionError("h32 = 1 makes the y' exponent 1 - h32 vanish")
        if self.c22 == 0:
            raise PreconditionError("c22 = 0 makes the lead coefficient vanish")

    @property
    def alpha(self) -> Fraction:
        return (self.q - 1) * self.h21 + self.q - 2

    @property
    def beta(self) -> Fraction:
        return self.h32 + 1


@dataclass(frozen=True)
class LogFamily:
    ode: ScalarODE
    system: MultinomialSystem
    integral: LogIntegralB


def log_family_coefficients(p: LogFamilyParams) -> tuple:
    """``(e_1, ..., e_q)`` for the family integral.

    With ``a = h21 + 1`` and ``m = 1 - h32``, matching monomials in the
    cleared derivative gives ``e_1 = -m c22 / a``, the power terms
    ``f_j = (-e_1)^j / j!`` on ``y^{j a}`` (``j = 1 .. q-2``), and
    ``e_2 = -e_1 a f_{q-2} / (m c23)``.
    """
    a = p.h21 + 1
    m = 1 - p.h32
    e1 = -m * p.c22 / a
    f = {j: (-e1) ** j / math.factorial(j) for j in range(1, p.q - 1)}
    e2 = -e1 * a * f[p.q - 2] / (m * p.c23)
    # e_k multiplies y^{(q-k+1) a}
    rest = tuple(f[p.q - k + 1] for k in range(3, p.q + 1))
    return (e1, e2) + rest


def log_family(p: LogFamilyParams) -> LogFamily:
    a = p.h21 + 1
    m = 1 - p.h32
    ode = ScalarODE.from_terms(2, [(p.c22, (p.h21, 2)), (p.c23, (p.alpha, p.beta))])
    s = reduce_scalar_ode(ode)
    e = log_family_coefficients(p)
    lead = (e[0], (a, Fraction(0)))
    inner = [(e[1], (Fraction(0), m))]
    inner += [(e[k - 1], ((p.q - k + 1) * a, Fraction(0))) for k in range(3, p.q + 1)]
    integral = LogIntegralB(lead, inner)
    _require(verify_logB(integral, s), "log family integral")
    return LogFamily(ode, s, integral)


def worked_log_coefficients(s: MultinomialSystem) -> tuple:
    """Solve the four-monomial logB ansatz on a three-term system by back substitution.

    Exponents follow from the array: ``B_1 = B_4 = H_2 - H_1``,
    ``B_2 = 3 H_2 - 2 H_1 - H_3``, ``B_3 = 2 B_1``; the coefficients then
    come from zeroing the four collected monomials one after another.
    Returns ``((e_1, ..., e_4), (B_1, ..., B_4))``.
    """
    if s.r != 3:
        raise PreconditionError("expects a three-term system")
    (C1, C2, C3), (H1, H2, H3) = s.coefs, s.expos
    B1 = sub(H2, H1)
    B2 = sub(sub(exact.scale(3, H2), exact.scale(2, H1)), H3)
    B3 = exact.scale(2, B1)
    B4 = B1
    e1 = -ip(B2, C2) / ip(B1, C1)
    e4 = -e1
    e3 = -e1 * e4 * ip(B1, C1) / ip(B3, C1)
    e2 = -e1 * e3 * ip(B1, C1) / ip(B2, C3)
    return (e1, e2, e3, e4), (B1, B2, B3, B4)
