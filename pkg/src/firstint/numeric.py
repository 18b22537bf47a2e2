"""Fixed-step RK4 integration and invariant drift measurement.

This is a floating-point cross-check of the exact verifier.  Real powers
follow one policy everywhere: a fractional exponent needs a strictly
positive base, a negative integer exponent needs a nonzero base.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import exact
from .errors import DomainError, IntegrationError
from .lie import AlgebraicIntegral, LogIntegralA, LogIntegralB
from .system import MultinomialSystem


class _MonomialTable:
    """Rows of exponent vectors evaluated together as ``prod_k y_k^{E_ik}``."""

    def __init__(self, expos: Sequence[tuple], n: int):
        self.E = np.array([[float(x) for x in row] for row in expos], dtype=float).reshape(len(expos), n)
        frac = np.array([[x.denominator != 1 for x in row] for row in expos], dtype=bool).reshape(self.E.shape)
        self.need_pos = frac.any(axis=0)
        self.need_nonzero = (self.E < 0).any(axis=0)
        self.check_pos = bool(self.need_pos.any())
        self.check_nonzero = bool(self.need_nonzero.any())

    def __call__(self, y: np.ndarray) -> np.ndarray:
        if self.check_pos and not np.all(y[self.need_pos] > 0):
            k = int(np.flatnonzero(self.need_pos & ~(y > 0))[0])
            raise DomainError(f"component y{k + 1} = {y[k]} must be positive for a fractional exponent")
        if self.check_nonzero and not np.all(y[self.need_nonzero] != 0):
            k = int(np.flatnonzero(self.need_nonzero & (y == 0))[0])
            raise DomainError(f"component y{k + 1} = 0 under a negative exponent")
        with np.errstate(over="ignore", invalid="ignore"):
            return np.power(y, self.E).prod(axis=1)


class _RHS:
    """``y_i' = sum_j c_ij Y^{H_j + e_i}``, skipping zero coefficients.

    Folding ``y_i`` into the exponent keeps removable singularities such as
    ``y_1 (y_1^-1 y_2)`` finite at ``y_1 = 0``.
    """

    def __init__(self, s: MultinomialSystem):
        expos, coef, target = [], [], []
        for t in s.terms:
            for i in range(s.n):
                if t.coef[i] != 0:
                    expos.append(exact.add(t.expo, exact.unit(s.n, i)))
                    coef.append(float(t.coef[i]))
                    target.append(i)
        self.n = s.n
        self.table = _MonomialTable(expos, s.n)
        # scatter matrix: out = W @ monomials, with W[i, m] = c_im
        self.W = np.zeros((s.n, len(coef)))
        self.W[target, np.arange(len(coef))] = coef

    def __call__(self, y: np.ndarray) -> np.ndarray:
        return self.W @ self.table(y)


def rhs_eval(s: MultinomialSystem, y: Sequence[float]) -> np.ndarray:
    return _RHS(s)(np.asarray(y, dtype=float))


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    states: np.ndarray  # shape (steps + 1, n)
    h: float


def _step_count(h: float, T: float) -> int:
    ratio = T / h
    near = round(ratio)
    return int(near) if math.isclose(ratio, near, rel_tol=1e-9) else math.ceil(ratio)


def rk4(s: MultinomialSystem, y0: Sequence[float], h: float, T: float) -> Trajectory:
    """Classical four-stage Runge-Kutta with ``ceil(T/h)`` uniform steps."""
    if not h > 0:
        raise ValueError("step size must be positive")
    if T < h:
        raise ValueError("horizon T must be at least one step h")
    f = _RHS(s)
    steps = _step_count(h, T)
    y = np.asarray(y0, dtype=float)
    if y.shape != (s.n,):
        raise ValueError(f"initial state must have {s.n} components")
    states = np.empty((steps + 1, s.n))
    states[0] = y
    carry = np.zeros(s.n)  # Kahan compensation for the running state
    with np.errstate(over="ignore", invalid="ignore"):  # blow-up is caught below
        for k in range(steps):
            k1 = f(y)
            k2 = f(y + 0.5 * h * k1)
            k3 = f(y + 0.5 * h * k2)
            k4 = f(y + h * k3)
            incr = (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4) - carry
            nxt = y + incr
            carry = (nxt - y) - incr
            y = nxt
            if not np.all(np.isfinite(y)):
                raise IntegrationError(f"non-finite state at step {k + 1} (t = {(k + 1) * h:g})")
            states[k + 1] = y
    return Trajectory(np.arange(steps + 1) * h, states, h)


def integral_evaluator(i):
    """Return a callable ``y -> I(y)`` for any integral form."""
    if isinstance(i, AlgebraicIntegral):
        table = _MonomialTable(i.exponents(), i.n)
        e = np.array([float(t.e) for t in i.terms])
        return lambda y: float(e @ table(y))
    if isinstance(i, LogIntegralA):
        log_table = _MonomialTable([i.log_expo], i.n)
        table = _MonomialTable([t.B for t in i.terms], i.n)
        e = np.array([float(t.e) for t in i.terms])

        def evaluate(y):
            arg = float(log_table(y)[0])
            if not arg > 0:
                raise DomainError(f"log argument {arg} is not positive")
            return math.log(arg) + (float(e @ table(y)) if len(e) else 0.0)
        return evaluate
    if isinstance(i, LogIntegralB):
        lead = _MonomialTable([i.lead.B], i.n)
        table = _MonomialTable([t.B for t in i.inner], i.n)
        e = np.array([float(t.e) for t in i.inner])
        e1 = float(i.lead.e)

        def evaluate(y):
            arg = 1.0 + (float(e @ table(y)) if len(e) else 0.0)
            if not arg > 0:
                raise DomainError(f"log argument {arg} is not positive")
            return e1 * float(lead(y)[0]) + math.log(arg)
        return evaluate
    raise TypeError(f"not an integral: {type(i).__name__}")


@dataclass(frozen=True)
class DriftReport:
    initial: float
    max_drift: float
    h: float
    horizon: float

    def __str__(self):
        return (f"initial value {self.initial:.16e}\n"
                f"max drift {self.max_drift:.16e}\n"
                f"step {self.h:.16e}\nhorizon {self.horizon:.16e}\n")


def drift(i, tr: Trajectory) -> DriftReport:
    evaluate = integral_evaluator(i)
    values = np.empty(len(tr.states))
    for k, y in enumerate(tr.states):
        try:
            values[k] = evaluate(y)
        except DomainError as exc:
            raise DomainError(f"sample {k}: {exc}") from None
    return DriftReport(float(values[0]), float(np.max(np.abs(values - values[0]))),
                       tr.h, float(tr.times[-1]))
