"""Multinomial systems ``y' = y * sum_j C_j Y^{H_j}`` and scalar ODEs.

A system is stored as an ordered list of terms, each pairing a coefficient
column ``C_j`` with an exponent row ``H_j``.  Construction always goes
through :func:`canonicalize`, which merges terms sharing an exponent row.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from . import exact
from .errors import DegenerateScaleError, DimensionError, EmptySystemError, ParseError
from .exact import RatMatrix, format_rational, is_zero, vector


@dataclass(frozen=True)
class Term:
    coef: tuple  # C_j, column of length n
    expo: tuple  # H_j, row of length n


@dataclass(frozen=True)
class MultinomialSystem:
    n: int
    terms: tuple

    def __post_init__(self):
        if self.n < 1:
            raise DimensionError("a system needs at least one variable")
        if not self.terms:
            raise EmptySystemError("a system needs at least one term")
        seen = set()
        for t in self.terms:
            if len(t.coef) != self.n or len(t.expo) != self.n:
                raise DimensionError(f"term {t} does not have length {self.n}")
            if is_zero(t.coef):
                raise ValueError("zero coefficient column in canonical system")
            if t.expo in seen:
                raise ValueError(f"repeated exponent row {t.expo}")
            seen.add(t.expo)

    @classmethod
    def from_terms(cls, n: int, terms: Iterable) -> "MultinomialSystem":
        """Build from ``(C, H)`` pairs, merging duplicates."""
        return canonicalize(n, terms)[0]

    @property
    def r(self) -> int:
        return len(self.terms)

    @property
    def coefs(self) -> list[tuple]:
        return [t.coef for t in self.terms]

    @property
    def expos(self) -> list[tuple]:
        return [t.expo for t in self.terms]

    def coefficient_matrix(self) -> RatMatrix:
        """The ``n x r`` matrix ``(c_ij)`` whose columns are the ``C_j``."""
        return RatMatrix.from_columns(self.coefs, rows=self.n)

    def __str__(self) -> str:
        return format_system(self)


@dataclass(frozen=True)
class SystemReport:
    """Outcome of canonicalization: which input terms were merged or dropped."""

    merged: tuple = ()   # (output index, input indices) for every merge
    dropped: tuple = ()  # exponent rows whose summed coefficient vanished


def canonicalize(n: int, terms: Iterable) -> tuple[MultinomialSystem, SystemReport]:
    order: list[tuple] = []
    sums: dict[tuple, list] = {}
    sources: dict[tuple, list[int]] = {}
    for idx, t in enumerate(terms):
        c, h = (t.coef, t.expo) if isinstance(t, Term) else t
        c, h = vector(c), vector(h)
        if len(c) != n or len(h) != n:
            raise DimensionError(f"term {idx + 1} has lengths {len(c)}/{len(h)}, expected {n}")
        if h not in sums:
            order.append(h)
            sums[h] = list(c)
            sources[h] = []
        else:
            sums[h] = [a + b for a, b in zip(sums[h], c)]
        sources[h].append(idx)
    kept, merged, dropped = [], [], []
    for h in order:
        c = tuple(sums[h])
        if is_zero(c):
            dropped.append(h)
            continue
        if len(sources[h]) > 1:
            merged.append((len(kept), tuple(sources[h])))
        kept.append(Term(c, h))
    if not kept:
        raise EmptySystemError("no terms remain after merging equal exponent rows")
    return MultinomialSystem(n, tuple(kept)), SystemReport(tuple(merged), tuple(dropped))


@dataclass(frozen=True)
class ODETerm:
    l: Fraction
    m: tuple  # exponents over (y, y', ..., y^(n-1))


@dataclass(frozen=True)
class ScalarODE:
    """``y^(n) = sum_j l_j Y^{M_j}``."""

    order: int
    terms: tuple = field(default=())

    def __post_init__(self):
        if self.order < 1:
            raise DimensionError("ODE order must be at least 1")
        seen = set()
        for t in self.terms:
            if len(t.m) != self.order:
                raise DimensionError(f"exponent row {t.m} does not have length {self.order}")
            if t.l == 0:
                raise ValueError("zero coefficient in canonical ODE")
            if t.m in seen:
                raise ValueError(f"repeated exponent row {t.m}")
            seen.add(t.m)

    @classmethod
    def from_terms(cls, order: int, terms: Iterable) -> "ScalarODE":
        acc: dict[tuple, Fraction] = {}
        for t in terms:
            l, m = (t.l, t.m) if isinstance(t, ODETerm) else t
            m = vector(m)
            if len(m) != order:
                raise DimensionError(f"exponent row {m} does not have length {order}")
            acc[m] = acc.get(m, Fraction(0)) + exact.as_rational(l)
        return cls(order, tuple(ODETerm(l, m) for m, l in acc.items() if l != 0))

    def __str__(self) -> str:
        return format_scalar_ode(self)


# --- text formats -----------------------------------------------------------

def _tokens(line: str):
    """Yield ``(token, 1-based column)`` pairs."""
    col = 0
    for part in line.split():
        col = line.index(part, col)
        yield part, col + 1
        col += len(part)


def _strip_comment(line: str) -> str:
    return line.split("#", 1)[0]


def _rationals(toks, lineno):
    out = []
    for tok, col in toks:
        try:
            out.append(exact.parse_rational(tok))
        except ParseError as exc:
            raise ParseError(str(exc), lineno, col) from None
    return out


def _split_bar(toks, lineno, line):
    bars = [i for i, (t, _) in enumerate(toks) if t == "|"]
    if len(bars) != 1:
        raise ParseError("expected exactly one '|' separator", lineno, len(line) - len(line.lstrip()) + 1)
    b = bars[0]
    return toks[:b], toks[b + 1:]


def _content_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if line.strip():
            yield lineno, line


def _header(lines, keyword):
    try:
        lineno, line = next(lines)
    except StopIteration:
        raise ParseError(f"empty input, expected '{keyword} <n>'") from None
    toks = list(_tokens(line))
    if toks[0][0] != keyword:
        raise ParseError(f"expected '{keyword}'", lineno, toks[0][1])
    if len(toks) != 2 or not toks[1][0].isdigit() or int(toks[1][0]) < 1:
        col = toks[1][1] if len(toks) > 1 else len(line) + 1
        raise ParseError(f"expected a positive integer after '{keyword}'", lineno, col)
    return int(toks[1][0])


def _term_lines(lines, keyword="term"):
    for lineno, line in lines:
        toks = list(_tokens(line))
        if toks[0][0] != keyword:
            raise ParseError(f"expected '{keyword}'", lineno, toks[0][1])
        left, right = _split_bar(toks[1:], lineno, line)
        yield lineno, line, left, right


def parse_system_report(text: str) -> tuple[MultinomialSystem, SystemReport]:
    lines = _content_lines(text)
    n = _header(lines, "mvf")
    terms = []
    for lineno, line, left, right in _term_lines(lines):
        if len(left) != n or len(right) != n:
            raise DimensionError(f"line {lineno}: expected {n} coefficients and {n} exponents, "
                                 f"got {len(left)} and {len(right)}")
        terms.append((_rationals(left, lineno), _rationals(right, lineno)))
    if not terms:
        raise EmptySystemError("system file contains no terms")
    return canonicalize(n, terms)


def parse_system(text: str) -> MultinomialSystem:
    return parse_system_report(text)[0]


def _fmt(v: Sequence) -> str:
    return " ".join(format_rational(x) for x in v)


def format_system(s: MultinomialSystem) -> str:
    lines = [f"mvf {s.n}"]
    lines += [f"term {_fmt(t.coef)} | {_fmt(t.expo)}" for t in s.terms]
    return "\n".join(lines) + "\n"


def parse_scalar_ode(text: str) -> ScalarODE:
    lines = _content_lines(text)
    order = _header(lines, "ode")
    terms = []
    for lineno, line, left, right in _term_lines(lines):
        if len(left) != 1 or len(right) != order:
            raise DimensionError(f"line {lineno}: expected 1 coefficient and {order} exponents")
        terms.append((_rationals(left, lineno)[0], _rationals(right, lineno)))
    return ScalarODE.from_terms(order, terms)


def format_scalar_ode(o: ScalarODE) -> str:
    lines = [f"ode {o.order}"]
    lines += [f"term {format_rational(t.l)} | {_fmt(t.m)}" for t in o.terms]
    return "\n".join(lines) + "\n"


# --- transforms ---------------------------------------------------------------

def reduce_scalar_ode(o: ScalarODE) -> MultinomialSystem:
    """Rewrite ``y^(n) = f`` as a first-order multinomial system.

    Uses ``y_1 = y, y_2 = y', ...``; the chain ``y_i' = y_{i+1}`` becomes
    ``y_i * (y_i^-1 y_{i+1})`` and each ODE term ``l Y^M`` becomes
    ``y_n * (l Y^{M - e_n})``.
    """
    n = o.order
    terms = []
    for i in range(n - 1):
        terms.append((exact.unit(n, i), exact.sub(exact.unit(n, i + 1), exact.unit(n, i))))
    last = exact.unit(n, n - 1)
    for t in o.terms:
        terms.append((exact.scale(t.l, last), exact.sub(t.m, last)))
    return MultinomialSystem.from_terms(n, terms)


def sigma_alpha(s: MultinomialSystem, alpha) -> MultinomialSystem:
    """Replace every exponent row ``H_j`` by ``alpha * H_j``."""
    alpha = exact.as_rational(alpha)
    if alpha == 0:
        raise DegenerateScaleError("alpha = 0 collapses every exponent row")
    return MultinomialSystem.from_terms(s.n, [(t.coef, exact.scale(alpha, t.expo)) for t in s.terms])


def excluded_shapes(order: int) -> list[tuple]:
    """Exponent rows of ``(y^(i))^-1 y^(i+1) y^(n-1)`` for ``0 <= i <= n-2``."""
    n = order
    top = exact.unit(n, n - 1)
    return [exact.add(exact.sub(exact.unit(n, i + 1), exact.unit(n, i)), top) for i in range(n - 1)]


def check_exponent_independence(o: ScalarODE) -> list[bool]:
    """Flag each term True when its coefficient cannot move the integral's exponents."""
    bad = set(excluded_shapes(o.order))
    return [t.m not in bad for t in o.terms]
