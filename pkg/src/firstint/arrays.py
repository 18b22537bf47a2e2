"""Integral arrays: validation, coupling matrix, synthesis and search.

An array is a ``p x q`` grid.  Column ``k`` stands for the integral term
``e_k Y^{B_k}``, row ``i`` for a monomial ``Y^{E_i}`` of the derivative, and
cell ``(i, k)`` holds the index of the system term ``alpha`` with
``B_k + H_alpha = E_i`` (or is empty).  Term indices are 0-based in Python
and 1-based in the text format.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

from . import exact
from .errors import (ContradictionError, DimensionError, FirstIntegralError, ParseError,
                     SearchLimitError, UnsupportedArrayError)
from .exact import RatMatrix, inner_product, null_space, solve
from .lie import AlgebraicIntegral, CollectedDerivative, monomial_derivative, verify_algebraic
from .system import MultinomialSystem, _content_lines, _tokens

CONDITIONS = ("a", "b", "c", "d", "e", "f")
SEARCH_BOUND = 6


class InvalidArrayError(FirstIntegralError, ValueError):
    """Synthesis was requested for an array that fails validation."""

    def __init__(self, report: "ValidationReport"):
        self.report = report
        super().__init__(f"array fails condition(s) {', '.join(report.failed) or '-'}"
                         + ("" if report.normal else "; array is abnormal")
                         + ("" if report.connected else "; array is not connected"))


@dataclass(frozen=True)
class IntegralArray:
    cells: tuple  # rows of (int | None)

    def __post_init__(self):
        cells = tuple(tuple(c for c in row) for row in self.cells)
        if not cells or not cells[0]:
            raise DimensionError("an array needs at least one row and one column")
        if any(len(r) != len(cells[0]) for r in cells):
            raise DimensionError("array rows have different lengths")
        for row in cells:
            for c in row:
                if c is not None and (not isinstance(c, int) or c < 0):
                    raise ValueError(f"bad cell {c!r}")
        object.__setattr__(self, "cells", cells)

    @property
    def p(self) -> int:
        return len(self.cells)

    @property
    def q(self) -> int:
        return len(self.cells[0])

    def column(self, k: int) -> tuple:
        return tuple(row[k] for row in self.cells)

    def column_terms(self, k: int) -> set:
        return {c for c in self.column(k) if c is not None}

    def terms(self) -> set:
        return {c for row in self.cells for c in row if c is not None}

    def permuted(self, row_perm: Sequence[int], col_perm: Sequence[int]) -> "IntegralArray":
        return IntegralArray(tuple(tuple(self.cells[i][k] for k in col_perm) for i in row_perm))

    def __str__(self):
        return format_array(self)


def parse_array(text: str) -> IntegralArray:
    lines = list(_content_lines(text))
    if not lines:
        raise ParseError("empty input, expected 'array <p> <q>'")
    lineno, line = lines[0]
    toks = list(_tokens(line))
    if toks[0][0] != "array" or len(toks) != 3 or not all(t.isdigit() and int(t) > 0 for t, _ in toks[1:]):
        raise ParseError("expected 'array <p> <q>' with positive integers", lineno, toks[0][1])
    p, q = int(toks[1][0]), int(toks[2][0])
    body = lines[1:]
    if len(body) != p:
        raise DimensionError(f"array declares {p} rows, found {len(body)}")
    rows = []
    for lineno, line in body:
        toks = list(_tokens(line))
        if len(toks) != q:
            raise DimensionError(f"line {lineno}: expected {q} entries, found {len(toks)}")
        row = []
        for tok, col in toks:
            if tok == ".":
                row.append(None)
            elif tok.isdigit() and int(tok) >= 1:
                row.append(int(tok) - 1)
            else:
                raise ParseError(f"bad array entry {tok!r}", lineno, col)
        rows.append(tuple(row))
    return IntegralArray(tuple(rows))


def format_array(a: IntegralArray) -> str:
    lines = [f"array {a.p} {a.q}"]
    lines += [" ".join("." if c is None else str(c + 1) for c in row) for row in a.cells]
    return "\n".join(lines) + "\n"


def _check_indices(a: IntegralArray, s: MultinomialSystem):
    bad = sorted(c for c in a.terms() if c >= s.r)
    if bad:
        raise DimensionError(f"array references term {bad[0] + 1} but the system has {s.r} terms")


# --- links ----------------------------------------------------------------------

@dataclass(frozen=True)
class LinkGraph:
    """Column offsets ``L_jk = H_alpha - H_beta`` implied by shared rows.

    ``offsets[k]`` is ``B_k - B_root`` for the root (lowest column) of the
    component of ``k``; ``L(j, k)`` composes paths through it.  ``conflicts``
    lists direct links disagreeing with the composed offset, ``zero_pairs``
    lists distinct connected columns whose offset vanishes.
    """

    q: int
    links: tuple       # (j, k, row, L) for every linked pair j < k in every row
    components: tuple  # tuples of column indices
    offsets: tuple
    conflicts: tuple = ()
    zero_pairs: tuple = ()

    @property
    def connected(self) -> bool:
        return len(self.components) == 1

    @property
    def consistent(self) -> bool:
        return not self.conflicts and not self.zero_pairs

    def component_of(self, k: int) -> int:
        return next(i for i, comp in enumerate(self.components) if k in comp)

    def L(self, j: int, k: int) -> tuple:
        """``B_k - B_j`` along any chain of links."""
        if self.component_of(j) != self.component_of(k):
            raise KeyError(f"columns {j + 1} and {k + 1} are not connected")
        return exact.sub(self.offsets[k], self.offsets[j])


def build_links(a: IntegralArray, s: MultinomialSystem) -> LinkGraph:
    _check_indices(a, s)
    H = s.expos
    links = []
    adj: dict[int, list] = {k: [] for k in range(a.q)}
    for i, row in enumerate(a.cells):
        filled = [(k, c) for k, c in enumerate(row) if c is not None]
        for (j, al), (k, be) in itertools.combinations(filled, 2):
            L = exact.sub(H[al], H[be])
            links.append((j, k, i, L))
            adj[j].append((k, L))
            adj[k].append((j, exact.scale(-1, L)))

    offsets: list = [None] * a.q
    components = []
    for root in range(a.q):
        if offsets[root] is not None:
            continue
        offsets[root] = exact.zeros(s.n)
        comp = [root]
        todo = deque([root])
        while todo:
            j = todo.popleft()
            for k, L in adj[j]:
                if offsets[k] is None:
                    offsets[k] = exact.add(offsets[j], L)
                    comp.append(k)
                    todo.append(k)
        components.append(tuple(sorted(comp)))

    conflicts = tuple((j, k, i, L) for j, k, i, L in links
                      if exact.sub(offsets[k], offsets[j]) != L)
    zero_pairs = []
    for comp in components:
        for j, k in itertools.combinations(comp, 2):
            if offsets[j] == offsets[k]:
                zero_pairs.append((j, k))
    return LinkGraph(a.q, tuple(links), tuple(components), tuple(offsets),
                     conflicts, tuple(zero_pairs))


def classify_normal(a: IntegralArray, s: MultinomialSystem | None = None) -> tuple[bool, tuple]:
    """Return ``(is_normal, terms present in every column)``."""
    if s is not None:
        _check_indices(a, s)
    everywhere = set.intersection(*(a.column_terms(k) for k in range(a.q)))
    return not everywhere, tuple(sorted(everywhere))


# --- validation -------------------------------------------------------------------

@dataclass(frozen=True)
class ConditionResult:
    name: str
    status: str  # "pass", "fail" or "skipped"
    witness: tuple = ()

    @property
    def failed(self) -> bool:
        return self.status == "fail"


@dataclass(frozen=True)
class ValidationReport:
    conditions: tuple               # ConditionResult for a..f
    normal: bool
    abnormal_terms: tuple = ()
    connected: bool = True
    components: tuple = ()
    matrix: RatMatrix | None = None

    def __getitem__(self, name: str) -> ConditionResult:
        return next(c for c in self.conditions if c.name == name)

    @property
    def failed(self) -> list[str]:
        return [c.name for c in self.conditions if c.failed]

    @property
    def ok(self) -> bool:
        return (self.normal and self.connected
                and all(c.status == "pass" for c in self.conditions))


def _missing_column(a: IntegralArray, alpha: int, cols: Sequence[int]) -> int | None:
    return next((j for j in cols if alpha not in a.column_terms(j)), None)


def _check_a(a: IntegralArray) -> ConditionResult:
    witness = []
    for i, row in enumerate(a.cells):
        filled = [c for c in row if c is not None]
        if len(set(filled)) < 2:
            witness.append(("row-fill", i))
        if len(set(filled)) != len(filled):
            witness.append(("row-repeat", i))
    for k in range(a.q):
        filled = [c for c in a.column(k) if c is not None]
        if len(set(filled)) != len(filled):
            witness.append(("column-repeat", k))
    return ConditionResult("a", "fail" if witness else "pass", tuple(witness))


def _matrix(a: IntegralArray, s: MultinomialSystem, links: LinkGraph, check: bool) -> RatMatrix:
    C = s.coefs
    rows = []
    for i, row in enumerate(a.cells):
        out = []
        for k, alpha in enumerate(row):
            if alpha is None:
                out.append(Fraction(0))
                continue
            missing = [j for j in range(a.q) if alpha not in a.column_terms(j)]
            values = {inner_product(links.L(j, k), C[alpha]) for j in missing}
            if check and len(values) > 1:
                raise ContradictionError(f"entry ({i + 1},{k + 1}) depends on the reference column")
            out.append(inner_product(links.L(missing[0], k), C[alpha]))
        rows.append(out)
    return RatMatrix.from_rows(rows, cols=a.q)


def build_matrix(a: IntegralArray, s: MultinomialSystem, links: LinkGraph | None = None) -> RatMatrix:
    """Coupling matrix ``a_ik = (B_k;C_alpha)`` computed from links alone."""
    normal, everywhere = classify_normal(a, s)
    if not normal:
        raise UnsupportedArrayError(f"abnormal array: term(s) {[t + 1 for t in everywhere]} fill every column")
    links = links or build_links(a, s)
    if not links.connected:
        raise UnsupportedArrayError(f"array is not connected: components {_one_based(links.components)}")
    if not links.consistent:
        raise UnsupportedArrayError("column links are inconsistent or zero")
    return _matrix(a, s, links, check=True)


def _one_based(components):
    return [[k + 1 for k in comp] for comp in components]


def _b1_system(a: IntegralArray, s: MultinomialSystem, links: LinkGraph):
    rows, rhs = [], []
    col1 = a.column_terms(0)
    for alpha, t in enumerate(s.terms):
        rows.append(t.coef)
        if alpha in col1:
            j = _missing_column(a, alpha, range(a.q))
            rhs.append(inner_product(links.L(j, 0), t.coef))
        else:
            rhs.append(Fraction(0))
    return RatMatrix.from_rows(rows, cols=s.n), rhs


def validate(a: IntegralArray, s: MultinomialSystem) -> ValidationReport:
    _check_indices(a, s)
    results = {"a": _check_a(a)}
    normal, everywhere = classify_normal(a, s)

    def finish(**kw):
        conds = tuple(results.get(n) or ConditionResult(n, "skipped") for n in CONDITIONS)
        return ValidationReport(conds, normal, everywhere, **kw)

    links = build_links(a, s)
    if not normal:
        # no coupling-matrix recipe exists, so b..f stay unevaluated
        return finish(connected=links.connected, components=links.components)

    witness = tuple(("conflict", j, k, i) for j, k, i, _ in links.conflicts)
    witness += tuple(("zero", j, k) for j, k in links.zero_pairs)
    results["b"] = ConditionResult("b", "fail" if witness else "pass", witness)
    if witness or not links.connected:
        return finish(connected=links.connected, components=links.components)

    C = s.coefs
    present = [a.column_terms(k) for k in range(a.q)]
    wc, wd = [], []
    for alpha in range(s.r):
        for j, k in itertools.combinations(range(a.q), 2):
            value = inner_product(links.L(j, k), C[alpha])
            in_j, in_k = alpha in present[j], alpha in present[k]
            if not in_j and not in_k and value != 0:
                wc.append((alpha, j, k))
            elif in_j != in_k and value == 0:
                wd.append((alpha, j, k))
    results["c"] = ConditionResult("c", "fail" if wc else "pass", tuple(wc))
    results["d"] = ConditionResult("d", "fail" if wd else "pass", tuple(wd))

    m = _matrix(a, s, links, check=False)
    rank = m.rank()
    minors = tuple(m.delete_column(k).rank() for k in range(a.q))
    e_ok = rank == a.q - 1 and all(r == a.q - 1 for r in minors)
    results["e"] = ConditionResult("e", "pass" if e_ok else "fail", (("rank", rank), ("minor-ranks", minors)))

    sysmat, rhs = _b1_system(a, s, links)
    sol = solve(sysmat, rhs)
    results["f"] = ConditionResult("f", "pass" if sol.consistent else "fail",
                                   () if sol.consistent else (("inconsistent",),))
    return finish(connected=True, components=links.components, matrix=m)


# --- synthesis ----------------------------------------------------------------------

@dataclass(frozen=True)
class Synthesis:
    array: IntegralArray
    integral: AlgebraicIntegral
    exponents: tuple      # B_k in column order
    coefficients: tuple   # e_k in column order
    matrix: RatMatrix
    row_exponents: tuple  # E_i
    proof: CollectedDerivative  # collected I', empty when the integral holds


def synthesize(a: IntegralArray, s: MultinomialSystem) -> Synthesis:
    report = validate(a, s)
    if not report.ok:
        raise InvalidArrayError(report)
    links = build_links(a, s)
    m = build_matrix(a, s, links)

    sysmat, rhs = _b1_system(a, s, links)
    sol = solve(sysmat, rhs)
    if not sol.consistent:
        raise ContradictionError("B_1 system is inconsistent")
    B1 = sol.particular
    B = tuple(exact.add(B1, links.L(0, k)) for k in range(a.q))

    basis = null_space(m)
    if len(basis) != 1 or any(x == 0 for x in basis[0]):
        raise ContradictionError("coupling matrix does not have a single nowhere-zero null vector")
    e = basis[0]

    C, H = s.coefs, s.expos
    for k in range(a.q):
        col = a.column_terms(k)
        for alpha in range(s.r):
            if (inner_product(B[k], C[alpha]) != 0) != (alpha in col):
                raise ContradictionError(f"column property fails at column {k + 1}, term {alpha + 1}")
    E = []
    for i, row in enumerate(a.cells):
        sums = {exact.add(B[k], H[alpha]) for k, alpha in enumerate(row) if alpha is not None}
        if len(sums) != 1:
            raise ContradictionError(f"row {i + 1} does not share one exponent")
        E.append(sums.pop())

    integral = AlgebraicIntegral(list(zip(e, B)))
    check = verify_algebraic(integral, s)
    if not check.holds:
        raise ContradictionError(f"synthesized integral does not verify: {check.residual}")
    return Synthesis(a, integral, B, e, m, tuple(E), check.residual)


# --- search -----------------------------------------------------------------------

def canonical_form(a: IntegralArray) -> IntegralArray:
    """Lexicographically least grid reachable by permuting rows and columns.

    Empty cells sort before every term index.  Rows are sorted for each of the
    ``q!`` column orders, which covers the full ``p! q!`` group.
    """
    def key(c):
        return 0 if c is None else c + 1

    best = None
    for perm in itertools.permutations(range(a.q)):
        grid = tuple(sorted(tuple(key(row[k]) for k in perm) for row in a.cells))
        if best is None or grid < best:
            best = grid
    return IntegralArray(tuple(tuple(None if v == 0 else v - 1 for v in row) for row in best))


@dataclass(frozen=True)
class SearchResult:
    array: IntegralArray
    synthesis: Synthesis

    @property
    def integral(self) -> AlgebraicIntegral:
        return self.synthesis.integral


def _row_candidates(q: int, r: int) -> list[tuple]:
    rows = []
    for size in range(2, min(q, r) + 1):
        for cols in itertools.combinations(range(q), size):
            for terms in itertools.permutations(range(r), size):
                row = [None] * q
                for k, t in zip(cols, terms):
                    row[k] = t
                rows.append(tuple(row))
    rows.sort(key=lambda row: tuple(-1 if c is None else c for c in row))
    return rows


class _Potentials:
    """Incremental union of column offsets; detects inconsistent or zero links."""

    def __init__(self, q, H):
        self.H = H
        self.off: list = [None] * q
        self.comp = list(range(q))

    def add_row(self, row) -> bool:
        filled = [(k, c) for k, c in enumerate(row) if c is not None]
        k0, a0 = filled[0]
        for k, al in filled[1:]:
            L = exact.sub(self.H[a0], self.H[al])  # B_k - B_k0
            if not self._link(k0, k, L):
                return False
        return True

    def _link(self, j, k, L) -> bool:
        if self.off[j] is None:
            self.off[j] = exact.zeros(len(L))
        if self.off[k] is None:
            self.off[k] = exact.add(self.off[j], L)
            self.comp[k] = self.comp[j]
            return self._distinct(self.comp[k])
        if self.comp[j] == self.comp[k]:
            return exact.sub(self.off[k], self.off[j]) == L
        # merge k's component into j's
        old = self.comp[k]
        shift = exact.sub(exact.add(self.off[j], L), self.off[k])
        for m in range(len(self.off)):
            if self.comp[m] == old and self.off[m] is not None:
                self.off[m] = exact.add(self.off[m], shift)
                self.comp[m] = self.comp[j]
        return self._distinct(self.comp[j])

    def _distinct(self, comp) -> bool:
        seen = [self.off[m] for m in range(len(self.off)) if self.comp[m] == comp and self.off[m] is not None]
        return len(set(seen)) == len(seen)

    def copy(self):
        new = _Potentials.__new__(_Potentials)
        new.H, new.off, new.comp = self.H, list(self.off), list(self.comp)
        return new


def enumerate_arrays(s: MultinomialSystem, max_p: int, max_q: int,
                     max_nodes: int = 2_000_000) -> Iterator[IntegralArray]:
    """Yield candidate arrays with consistent, nonzero links and no repeated terms.

    Rows are taken in increasing order (row permutations are redundant) and
    every column must end up nonempty.  Column symmetry is removed later by
    :func:`canonical_form`.
    """
    H = s.expos
    nodes = 0
    for q in range(2, max_q + 1):
        rows = _row_candidates(q, s.r)

        def extend(chosen, start, pots, colsets):
            nonlocal nodes
            if chosen and all(colsets):
                yield IntegralArray(tuple(chosen))
            if len(chosen) == max_p:
                return
            for idx in range(start, len(rows)):
                nodes += 1
                if nodes > max_nodes:
                    raise SearchLimitError(f"search explored more than {max_nodes} candidate nodes")
                row = rows[idx]
                if any(c is not None and c in colsets[k] for k, c in enumerate(row)):
                    continue
                nxt = pots.copy()
                if not nxt.add_row(row):
                    continue
                new_cols = [cs | {c} if c is not None else cs for cs, c in zip(colsets, row)]
                yield from extend(chosen + [row], idx + 1, nxt, new_cols)

        yield from extend([], 0, _Potentials(q, H), [frozenset()] * q)


def _sort_key(a: IntegralArray):
    return (a.q, a.p, tuple(tuple(-1 if c is None else c for c in row) for row in a.cells))


def search(s: MultinomialSystem, max_p: int = 2, max_q: int = 2,
           max_nodes: int = 2_000_000) -> list[SearchResult]:
    """All valid arrays up to ``max_p x max_q`` with their synthesized integrals.

    Arrays are deduplicated under row/column permutation and returned in
    canonical order.
    """
    if not (1 <= max_p <= SEARCH_BOUND and 1 <= max_q <= SEARCH_BOUND):
        raise SearchLimitError(f"search bounds must lie in 1..{SEARCH_BOUND}, got {max_p} x {max_q}")
    seen = set()
    results = []
    for cand in enumerate_arrays(s, max_p, max_q, max_nodes):
        canon = canonical_form(cand)
        if canon in seen:
            continue
        seen.add(canon)
        if not validate(canon, s).ok:
            continue
        results.append(SearchResult(canon, synthesize(canon, s)))
    results.sort(key=lambda res: _sort_key(res.array))
    return results
