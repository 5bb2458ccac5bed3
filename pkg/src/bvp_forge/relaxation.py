"""Finite-difference relaxation: ``u^{k+1} = u^k - (L^k)^{-1} G^k``."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import ConfigError, DivergenceError, SolverError
from .linsys import (DominanceDiagnostic, Linearization, LinearizationVariant, as_variant, assemble,
                     check_diag_dominance, thomas_solve)
from .mesh import DScheme, GridFunction, linear_interpolant, make_mesh, nonlinear_residual
from .problem import ProblemSpec
from .scalar import IterationTrace

DIVERGENCE_LIMIT = 1e50


@dataclass
class RelaxConfig:
    variant: LinearizationVariant = field(default_factory=LinearizationVariant.newton)
    scheme: DScheme = DScheme.CENTRAL
    N: int = 1001
    tol: float = 1e-10
    max_iter: int = 50
    initial_guess: Optional[GridFunction] = None  # None: linear interpolant of the BCs

    def __post_init__(self):
        self.variant = as_variant(self.variant)
        self.scheme = DScheme(self.scheme)
        if not self.tol > 0:
            raise ConfigError("tol must be positive")
        if self.max_iter < 1:
            raise ConfigError("max_iter must be at least 1")
        if self.initial_guess is not None and self.initial_guess.mesh.N != self.N:
            raise ConfigError("initial guess must have N points")


@dataclass
class RelaxReport:
    solution: GridFunction
    trace: IterationTrace
    converged: bool
    dominance: DominanceDiagnostic

    @property
    def iterations(self) -> int:
        return self.trace.iterations

    def to_dict(self) -> dict:
        return {
            "converged": self.converged,
            "iterations": self.iterations,
            "final_residual": self.trace[-1].residual,
            "initial_slope": self.solution.initial_slope(),
            "dominance": self.dominance.status.value,
            "trace": [{"k": r.k, "initial_slope": r.value, "residual": r.residual} for r in self.trace],
        }

    def to_json(self, path):
        with open(path, "w") as fh:
            json.dump(self.to_dict(), fh, indent=2)


def relax_step(spec: ProblemSpec, config: RelaxConfig, u_k: GridFunction, k: int = 0) -> GridFunction:
    system = assemble(spec, config.scheme, config.variant, u_k)
    try:
        delta = thomas_solve(system)
    except SolverError as exc:
        raise SolverError(f"relaxation step k={k}: {exc}") from None
    return GridFunction(u_k.mesh, u_k.values - delta)


def relax_solve(spec: ProblemSpec, config: RelaxConfig) -> RelaxReport:
    """Run relaxation until the residual max-norm drops to ``config.tol``.

    Constant-slope relaxation freezes its coefficients at the initial guess.
    Non-convergence is reported through ``RelaxReport.converged``; a
    residual above 1e50 raises DivergenceError.
    """
    mesh = make_mesh(spec.a, spec.b, config.N)
    u = config.initial_guess if config.initial_guess is not None else linear_interpolant(spec, mesh)
    if config.variant.kind is Linearization.CONSTANT_SLOPE and config.variant.reference is None:
        config = RelaxConfig(LinearizationVariant.constant_slope(u), config.scheme, config.N,
                             config.tol, config.max_iter, config.initial_guess)
    dominance = check_diag_dominance(spec, mesh, config.scheme)

    trace = IterationTrace()
    for k in range(config.max_iter + 1):
        res = float(np.max(np.abs(nonlinear_residual(spec, config.scheme, u).values)))
        trace.append(k, u.initial_slope(), res)
        if not np.isfinite(res) or res > DIVERGENCE_LIMIT:
            raise DivergenceError(f"relaxation diverged at k={k}: residual {res:.3e}")
        if res <= config.tol:
            trace.converged = True
            break
        if k == config.max_iter:
            break
        u = relax_step(spec, config, u, k)
    return RelaxReport(u, trace, trace.converged, dominance)
