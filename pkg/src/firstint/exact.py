"""Exact rational scalars, vectors and dense matrices.

Scalars are :class:`fractions.Fraction`; vectors are plain tuples of
fractions.  Row/column orientation is carried by context (exponent vectors
are rows, coefficient vectors are columns) rather than by the type.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DimensionError, ParseError

Rational = Fraction
Vector = tuple  # tuple[Fraction, ...]

_RATIONAL_RE = re.compile(r"[+-]?\d+(?:/\d+)?\Z")


def parse_rational(text: str) -> Fraction:
    """Parse ``[sign]int[/posint]`` with no embedded whitespace."""
    if not _RATIONAL_RE.match(text):
        raise ParseError(f"malformed rational {text!r}")
    try:
        return Fraction(text)
    except ZeroDivisionError:
        raise ParseError(f"zero denominator in {text!r}") from None


def format_rational(x: Fraction) -> str:
    return str(Fraction(x))


def as_rational(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return parse_rational(x)
    if isinstance(x, float):
        raise TypeError("floats are not accepted as exact rationals")
    return Fraction(x)


def vector(values: Iterable) -> tuple:
    return tuple(as_rational(v) for v in values)


def zeros(n: int) -> tuple:
    return (Fraction(0),) * n


def unit(n: int, i: int) -> tuple:
    return tuple(Fraction(1 if k == i else 0) for k in range(n))


def add(u: Sequence[Fraction], v: Sequence[Fraction]) -> tuple:
    _check_len(u, v)
    return tuple(a + b for a, b in zip(u, v))


def sub(u: Sequence[Fraction], v: Sequence[Fraction]) -> tuple:
    _check_len(u, v)
    return tuple(a - b for a, b in zip(u, v))


def scale(c, u: Sequence[Fraction]) -> tuple:
    c = as_rational(c)
    return tuple(c * a for a in u)


def is_zero(u: Sequence[Fraction]) -> bool:
    return all(a == 0 for a in u)


def inner_product(b: Sequence[Fraction], c: Sequence[Fraction]) -> Fraction:
    """``(B;C) = sum b_i c_i`` computed exactly."""
    _check_len(b, c)
    return sum((x * y for x, y in zip(b, c)), Fraction(0))


def _check_len(u, v):
    if len(u) != len(v):
        raise DimensionError(f"length mismatch: {len(u)} vs {len(v)}")


def primitive(v: Sequence[Fraction]) -> tuple:
    """Scale ``v`` to coprime integers with the first nonzero entry positive.

    The zero vector is returned unchanged.
    """
    v = tuple(as_rational(a) for a in v)
    if is_zero(v):
        return v
    den = math.lcm(*(a.denominator for a in v))
    ints = [int(a * den) for a in v]
    g = math.gcd(*ints)
    lead = next(a for a in ints if a != 0)
    sign = 1 if lead > 0 else -1
    return tuple(Fraction(sign * a // g) for a in ints)


@dataclass(frozen=True)
class RatMatrix:
    """Dense row-major matrix of fractions."""

    rows: int
    cols: int
    entries: tuple  # tuple of row tuples

    def __post_init__(self):
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise DimensionError("entries do not match declared shape")

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable], cols: int | None = None) -> "RatMatrix":
        data = tuple(vector(r) for r in rows)
        if cols is None:
            if not data:
                raise DimensionError("column count required for an empty matrix")
            cols = len(data[0])
        return cls(len(data), cols, data)

    @classmethod
    def from_columns(cls, columns: Iterable[Iterable], rows: int | None = None) -> "RatMatrix":
        cols_data = [vector(c) for c in columns]
        if not cols_data:
            if rows is None:
                raise DimensionError("row count required for an empty matrix")
            return cls(rows, 0, ((),) * rows)
        return cls.from_rows(zip(*cols_data), cols=len(cols_data))

    @classmethod
    def identity(cls, n: int) -> "RatMatrix":
        return cls.from_rows((unit(n, i) for i in range(n)), cols=n)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def row(self, i: int) -> tuple:
        return self.entries[i]

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self.entries)

    def transpose(self) -> "RatMatrix":
        return RatMatrix(self.cols, self.rows, tuple(zip(*self.entries)) if self.rows else ((),) * self.cols)

    def delete_column(self, j: int) -> "RatMatrix":
        return RatMatrix(self.rows, self.cols - 1, tuple(r[:j] + r[j + 1:] for r in self.entries))

    def apply(self, x: Sequence[Fraction]) -> tuple:
        """Matrix-vector product ``A x``."""
        if len(x) != self.cols:
            raise DimensionError(f"vector length {len(x)} != {self.cols} columns")
        return tuple(inner_product(r, x) for r in self.entries)

    def rank(self) -> int:
        return rref(self)[2]


def rref(m: RatMatrix) -> tuple[RatMatrix, list[int], int]:
    """Reduced row-echelon form by Gauss-Jordan elimination.

    Returns ``(reduced, pivot_columns, rank)``.
    """
    a = [list(r) for r in m.entries]
    pivots: list[int] = []
    pr = 0
    for pc in range(m.cols):
        if pr == m.rows:
            break
        src = next((i for i in range(pr, m.rows) if a[i][pc] != 0), None)
        if src is None:
            continue
        a[pr], a[src] = a[src], a[pr]
        piv = a[pr][pc]
        a[pr] = [x / piv for x in a[pr]]
        for i in range(m.rows):
            if i != pr and a[i][pc] != 0:
                f = a[i][pc]
                a[i] = [x - f * y for x, y in zip(a[i], a[pr])]
        pivots.append(pc)
        pr += 1
    reduced = RatMatrix(m.rows, m.cols, tuple(tuple(r) for r in a))
    return reduced, pivots, len(pivots)


def null_space(m: RatMatrix) -> list[tuple]:
    """Basis of ``{x : A x = 0}``, each vector primitive with a positive lead."""
    red, pivots, _ = rref(m)
    free = [j for j in range(m.cols) if j not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * m.cols
        x[f] = Fraction(1)
        for i, pc in enumerate(pivots):
            x[pc] = -red[i, f]
        basis.append(primitive(x))
    return basis


@dataclass(frozen=True)
class Solution:
    """Solution set of ``A x = b``.

    ``kind`` is ``"inconsistent"``, ``"unique"`` or ``"affine"``.  For the
    last two, ``particular`` has every free variable set to zero and
    ``basis`` spans the homogeneous solutions.
    """

    kind: str
    particular: tuple | None = None
    basis: tuple = ()

    @property
    def consistent(self) -> bool:
        return self.kind != "inconsistent"


def solve(a: RatMatrix, b: Sequence) -> Solution:
    b = vector(b)
    if len(b) != a.rows:
        raise DimensionError(f"right-hand side has length {len(b)}, expected {a.rows}")
    aug = RatMatrix(a.rows, a.cols + 1, tuple(r + (bi,) for r, bi in zip(a.entries, b)))
    red, pivots, _ = rref(aug)
    if a.cols in pivots:
        return Solution("inconsistent")
    x = [Fraction(0)] * a.cols
    for i, pc in enumerate(pivots):
        x[pc] = red[i, a.cols]
    basis = tuple(null_space(a))
    kind = "unique" if not basis else "affine"
    return Solution(kind, tuple(x), basis)
