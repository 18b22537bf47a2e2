"""Derivatives along trajectories and symbolic first-integral checks.

For a monomial ``Y^B`` on ``y' = y sum_j C_j Y^{H_j}``::

    (Y^B)'     = sum_j (B;C_j) Y^{B + H_j}
    (ln Y^B)'  = sum_j (B;C_j) Y^{H_j}

Derivatives are lists of ``(exponent, coefficient)`` pairs; :func:`collect`
groups equal exponents.  A claimed integral holds exactly when its collected
derivative is empty, and the non-empty remainder is returned as a witness.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from . import exact
from .errors import DimensionError, ParseError
from .exact import format_rational, inner_product, vector
from .system import MultinomialSystem, _content_lines, _fmt, _rationals, _split_bar, _tokens


@dataclass(frozen=True)
class IntegralTerm:
    e: Fraction
    B: tuple


def _terms(pairs) -> tuple:
    out = []
    for p in pairs:
        e, B = (p.e, p.B) if isinstance(p, IntegralTerm) else p
        out.append(IntegralTerm(exact.as_rational(e), vector(B)))
    return tuple(out)


def _check_distinct(terms, what):
    seen = set()
    for t in terms:
        if t.B in seen:
            raise ValueError(f"repeated exponent {t.B} in {what}")
        seen.add(t.B)


def _check_width(vectors, what):
    widths = {len(v) for v in vectors}
    if len(widths) > 1:
        raise DimensionError(f"{what} mixes exponent lengths {sorted(widths)}")


@dataclass(frozen=True)
class AlgebraicIntegral:
    """``I = sum_k e_k Y^{B_k}``."""

    terms: tuple

    def __post_init__(self):
        object.__setattr__(self, "terms", _terms(self.terms))
        if not self.terms:
            raise ValueError("an algebraic integral needs at least one term")
        if any(t.e == 0 for t in self.terms):
            raise ValueError("zero coefficient in algebraic integral")
        _check_distinct(self.terms, "algebraic integral")
        _check_width([t.B for t in self.terms], "algebraic integral")

    @property
    def n(self) -> int:
        return len(self.terms[0].B)

    def scaled(self, c) -> "AlgebraicIntegral":
        c = exact.as_rational(c)
        return AlgebraicIntegral([(c * t.e, t.B) for t in self.terms])

    def normalized(self) -> "AlgebraicIntegral":
        """Terms sorted by exponent, coefficients primitive with a positive lead."""
        ts = sorted(self.terms, key=lambda t: t.B)
        es = exact.primitive([t.e for t in ts])
        return AlgebraicIntegral(list(zip(es, (t.B for t in ts))))

    def exponents(self) -> list[tuple]:
        return [t.B for t in self.terms]

    def __str__(self):
        return format_integral(self)


@dataclass(frozen=True)
class LogIntegralA:
    """``I = ln(Y^{B_1}) + sum_{k>=2} e_k Y^{B_k}``."""

    log_expo: tuple
    terms: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "log_expo", vector(self.log_expo))
        object.__setattr__(self, "terms", _terms(self.terms))
        if exact.is_zero(self.log_expo):
            raise ValueError("logarithm exponent must be nonzero")
        _check_distinct(self.terms, "logA integral")
        _check_width([self.log_expo] + [t.B for t in self.terms], "logA integral")

    @property
    def n(self) -> int:
        return len(self.log_expo)

    def __str__(self):
        return format_integral(self)


@dataclass(frozen=True)
class LogIntegralB:
    """``I = e_1 Y^{B_1} + ln(1 + sum_{k>=2} e_k Y^{B_k})``."""

    lead: IntegralTerm
    inner: tuple = ()

    def __post_init__(self):
        lead = self.lead
        if not isinstance(lead, IntegralTerm):
            lead = IntegralTerm(exact.as_rational(lead[0]), vector(lead[1]))
        object.__setattr__(self, "lead", lead)
        object.__setattr__(self, "inner", _terms(self.inner))
        if lead.e == 0:
            raise ValueError("lead coefficient must be nonzero")
        _check_distinct(self.inner, "logB integral")
        if any(exact.is_zero(t.B) for t in self.inner):
            raise ValueError("inner exponents must be nonzero")
        _check_width([lead.B] + [t.B for t in self.inner], "logB integral")

    @property
    def n(self) -> int:
        return len(self.lead.B)

    @property
    def rho(self) -> int:
        """Number of monomials, counting the lead."""
        return len(self.inner) + 1

    def __str__(self):
        return format_integral(self)


@dataclass(frozen=True)
class CollectedDerivative:
    """Exponent-keyed exact sums, zero rows dropped, sorted by exponent."""

    rows: tuple = ()

    def __bool__(self):
        return bool(self.rows)

    def __len__(self):
        return len(self.rows)

    def __iter__(self):
        return iter(self.rows)

    def as_dict(self) -> dict:
        return dict(self.rows)


@dataclass(frozen=True)
class Verification:
    holds: bool
    residual: CollectedDerivative

    def __bool__(self):
        return self.holds


def _check_n(B, s: MultinomialSystem):
    if len(B) != s.n:
        raise DimensionError(f"exponent {B} has length {len(B)}, system has n = {s.n}")


def monomial_derivative(B: Sequence, s: MultinomialSystem) -> list[tuple]:
    B = vector(B)
    _check_n(B, s)
    out = []
    for t in s.terms:
        c = inner_product(B, t.coef)
        if c != 0:
            out.append((exact.add(B, t.expo), c))
    return out


def log_monomial_derivative(B: Sequence, s: MultinomialSystem) -> list[tuple]:
    B = vector(B)
    _check_n(B, s)
    out = []
    for t in s.terms:
        c = inner_product(B, t.coef)
        if c != 0:
            out.append((t.expo, c))
    return out


def collect(termlist: Iterable[tuple]) -> CollectedDerivative:
    acc: dict[tuple, Fraction] = {}
    for expo, coeff in termlist:
        expo = vector(expo)
        acc[expo] = acc.get(expo, Fraction(0)) + coeff
    return CollectedDerivative(tuple(sorted((E, c) for E, c in acc.items() if c != 0)))


def _weighted(e, entries):
    return [(E, e * c) for E, c in entries]


def derivative(i, s: MultinomialSystem) -> CollectedDerivative:
    """Collected time derivative of an algebraic or ``logA`` integral.

    For ``logB`` integrals this returns the cleared-fraction numerator.
    """
    if isinstance(i, AlgebraicIntegral):
        rows = []
        for t in i.terms:
            rows += _weighted(t.e, monomial_derivative(t.B, s))
        return collect(rows)
    if isinstance(i, LogIntegralA):
        rows = log_monomial_derivative(i.log_expo, s)
        for t in i.terms:
            rows += _weighted(t.e, monomial_derivative(t.B, s))
        return collect(rows)
    if isinstance(i, LogIntegralB):
        return cleared_numerator(i.lead.e, i.lead.B, i.inner, s)
    raise TypeError(f"not an integral: {type(i).__name__}")


def cleared_numerator(e1, B1, inner: Sequence, s: MultinomialSystem) -> CollectedDerivative:
    """Numerator of ``I'`` for ``e1 Y^B1 + ln(1 + sum e_k Y^B_k)`` over the common denominator.

    ``e1 (Y^B1)' (1 + sum e_k Y^B_k) + sum e_k (Y^B_k)'``
    """
    e1 = exact.as_rational(e1)
    inner = _terms(inner)
    lead = monomial_derivative(B1, s)
    rows = _weighted(e1, lead)
    for t in inner:
        rows += [(exact.add(E, t.B), e1 * t.e * c) for E, c in lead]
        rows += _weighted(t.e, monomial_derivative(t.B, s))
    return collect(rows)


def verify(i, s: MultinomialSystem) -> Verification:
    if i.n != s.n:
        raise DimensionError(f"integral has n = {i.n}, system has n = {s.n}")
    residual = derivative(i, s)
    return Verification(not residual, residual)


def verify_algebraic(i: AlgebraicIntegral, s: MultinomialSystem) -> Verification:
    return verify(i, s)


def verify_logA(i: LogIntegralA, s: MultinomialSystem) -> Verification:
    return verify(i, s)


def verify_logB(i: LogIntegralB, s: MultinomialSystem) -> Verification:
    return verify(i, s)


# --- integral file format -------------------------------------------------------

def format_integral(i) -> str:
    if isinstance(i, AlgebraicIntegral):
        lines = ["integral algebraic"]
        terms = i.terms
    elif isinstance(i, LogIntegralA):
        lines = ["integral logA", f"logterm | {_fmt(i.log_expo)}"]
        terms = i.terms
    elif isinstance(i, LogIntegralB):
        lines = ["integral logB", f"lead {format_rational(i.lead.e)} | {_fmt(i.lead.B)}"]
        terms = i.inner
    else:
        raise TypeError(f"not an integral: {type(i).__name__}")
    lines += [f"term {format_rational(t.e)} | {_fmt(t.B)}" for t in terms]
    return "\n".join(lines) + "\n"


def parse_integral(text: str):
    lines = list(_content_lines(text))
    if not lines:
        raise ParseError("empty input, expected 'integral <kind>'")
    lineno, line = lines[0]
    toks = list(_tokens(line))
    if toks[0][0] != "integral" or len(toks) != 2:
        raise ParseError("expected 'integral algebraic|logA|logB'", lineno, toks[0][1])
    kind = toks[1][0]
    if kind not in ("algebraic", "logA", "logB"):
        raise ParseError(f"unknown integral kind {kind!r}", lineno, toks[1][1])

    special = None
    terms = []
    for lineno, line in lines[1:]:
        toks = list(_tokens(line))
        key, col = toks[0]
        left, right = _split_bar(toks[1:], lineno, line)
        B = _rationals(right, lineno)
        if key == "term":
            if len(left) != 1:
                raise ParseError("expected one coefficient before '|'", lineno, col)
            terms.append((_rationals(left, lineno)[0], B))
        elif key == "logterm" and kind == "logA" and special is None and not terms:
            if left:
                raise ParseError("logterm takes no coefficient", lineno, left[0][1])
            special = B
        elif key == "lead" and kind == "logB" and special is None and not terms:
            if len(left) != 1:
                raise ParseError("expected one coefficient before '|'", lineno, col)
            special = (_rationals(left, lineno)[0], B)
        else:
            raise ParseError(f"unexpected {key!r} line", lineno, col)

    try:
        if kind == "algebraic":
            return AlgebraicIntegral(terms)
        if special is None:
            raise ParseError(f"missing {'logterm' if kind == 'logA' else 'lead'} line")
        if kind == "logA":
            return LogIntegralA(special, terms)
        return LogIntegralB(special, terms)
    except DimensionError:
        raise
    except ParseError:
        raise
    except ValueError as exc:
        raise ParseError(str(exc)) from None
