"""Newton, Picard and constant-slope iterations for a scalar equation F(x) = 0.

All three share the update ``x_{k+1} = x_k - F(x_k) / m_k``; they differ
only in the slope ``m_k``:

=============  ============
Newton         F'(x_k)
Picard         m (fixed)
constant-slope F'(x_0)
=============  ============
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import ConfigError, ConvergenceError, SolverError


class ScalarMethod(enum.Enum):
    NEWTON = "newton"
    PICARD = "picard"
    CONSTANT_SLOPE = "constant-slope"


@dataclass(frozen=True)
class TraceRecord:
    k: int
    value: float
    residual: float


@dataclass
class IterationTrace:
    """Per-iteration ``(k, value, residual)`` records.

    For the ODE shooting drivers ``value`` is the initial slope and
    ``residual`` the right-end mismatch; for relaxation ``residual`` is the
    max-norm of the discrete residual.
    """

    records: list = field(default_factory=list)
    converged: bool = False

    def append(self, k, value, residual):
        if self.records and k <= self.records[-1].k:
            raise ValueError(f"trace index must increase, got {k} after {self.records[-1].k}")
        if not self.records and k != 0:
            raise ValueError("trace must start at k = 0")
        self.records.append(TraceRecord(int(k), float(value), float(residual)))

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def __getitem__(self, i):
        return self.records[i]

    @property
    def values(self) -> np.ndarray:
        return np.array([r.value for r in self.records])

    @property
    def residuals(self) -> np.ndarray:
        return np.array([r.residual for r in self.records])

    @property
    def iterations(self) -> int:
        """Number of updates performed (records minus the starting one)."""
        return max(len(self.records) - 1, 0)


def empirical_orders(errors) -> np.ndarray:
    """Order estimates ``log(e_{k+1}/e_k) / log(e_k/e_{k-1})`` over consecutive triples."""
    e = np.abs(np.asarray(errors, dtype=float))
    if len(e) < 3:
        return np.array([])
    with np.errstate(divide="ignore", invalid="ignore"):
        r = np.log(e[1:] / e[:-1])
        return r[1:] / r[:-1]


@dataclass(frozen=True)
class ScalarProblem:
    F: Callable[[float], float]
    x0: float
    Fprime: Optional[Callable[[float], float]] = None
    m: Optional[float] = None


def _derivative(problem: ScalarProblem, x: float) -> float:
    if problem.Fprime is not None:
        return problem.Fprime(x)
    delta = max(1e-6, 1e-6 * abs(x))
    return (problem.F(x + delta) - problem.F(x - delta)) / ((x + delta) - (x - delta))


def _slope(problem: ScalarProblem, method: ScalarMethod, x_k: float) -> float:
    if method is ScalarMethod.NEWTON:
        return _derivative(problem, x_k)
    if method is ScalarMethod.PICARD:
        if problem.m is None:
            raise ConfigError("Picard iteration needs a slope m")
        return problem.m
    return _derivative(problem, problem.x0)


def scalar_step(problem: ScalarProblem, method: ScalarMethod, x_k: float, k: int = 0) -> float:
    m_k = _slope(problem, method, x_k)
    if m_k == 0:
        raise SolverError(f"{method.value}: zero slope m_k at iteration k={k}, x_k={x_k!r}")
    return x_k - problem.F(x_k) / m_k


def scalar_solve(problem: ScalarProblem, method: ScalarMethod, tol: float = 1e-12,
                 max_iter: int = 100) -> IterationTrace:
    """Iterate until ``|F(x_k)| <= tol``.

    Raises ConvergenceError (trace attached) after ``max_iter`` updates.
    """
    if not tol > 0:
        raise ConfigError("tol must be positive")
    if max_iter < 1:
        raise ConfigError("max_iter must be at least 1")
    if method is ScalarMethod.PICARD and not problem.m:
        raise ConfigError("Picard iteration needs a nonzero slope m")
    # the constant slope is computed once, as in the definition
    if method is ScalarMethod.CONSTANT_SLOPE:
        m0 = _derivative(problem, problem.x0)
        problem = ScalarProblem(problem.F, problem.x0, problem.Fprime, m0)
        method_used = ScalarMethod.PICARD
        if m0 == 0:
            raise SolverError(f"{method.value}: zero slope F'(x_0) at iteration k=0")
    else:
        method_used = method

    trace = IterationTrace()
    x = float(problem.x0)
    for k in range(max_iter + 1):
        Fx = problem.F(x)
        if not math.isfinite(Fx):
            raise SolverError(f"{method.value}: F(x_k) is not finite at k={k}, x_k={x!r}")
        trace.append(k, x, Fx)
        if abs(Fx) <= tol:
            trace.converged = True
            return trace
        if k == max_iter:
            break
        x = scalar_step(problem, method_used, x, k)
    raise ConvergenceError(
        f"{method.value}: no convergence after {max_iter} iterations, |F| = {abs(Fx):.3e}", trace=trace)
