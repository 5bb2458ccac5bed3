"""Shooting-projection iteration.

Each step shoots from ``u(a) = u_a, u'(a) = v_a^k``, measures the right-end
mismatch ``E_k = u(b) - u_b`` and corrects the slope.  Two equivalent
routes are provided:

* ``Path.FORMULA``: ``v_a^{k+1} = v_a^k - E_k / l_k`` with
  ``l_k = du(b)/dv_a`` (Newton), ``b - a`` (Picard) or ``du(b)/dv_a`` at
  k = 0 (constant slope).
* ``Path.PROJECTION``: relax the shooting trajectory through the
  linearized BVP, ``u^{k+1} = u^k - L^{-1} [0, ..., 0, E_k]``, and read
  the new slope off the projection as ``(u_1 - u_0) / h``.

``NEWTON_DF`` is the projection route for ``u'' = f(u)`` where df/du is
unknown: the Jacobian diagonal is recovered from the trajectory itself,
``L_ii = -(v_{i-1} + v_{i+1}) / v_i``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import ConfigError, ConvergenceError, DivergenceError, SolverError
from .ivp import Integrator, SensitivityPair, TrajectoryPair, shoot, shoot_sensitivity
from .linsys import (LinearizationVariant, TridiagSystem, assemble, boundary_system, endpoint_rhs,
                     thomas_solve)
from .mesh import DScheme, GridFunction, Mesh, make_mesh, nonlinear_residual
from .problem import ProblemSpec
from .scalar import IterationTrace

SINGULAR_SLOPE = 1e-12


class ShootMethod(enum.Enum):
    NEWTON = "newton"
    PICARD = "picard"
    CONSTANT_SLOPE = "constant-slope"
    NEWTON_DF = "newton-df"


class Path(enum.Enum):
    FORMULA = "formula"
    PROJECTION = "projection"


class RhsMode(enum.Enum):
    ENDPOINT = "endpoint"  # [0, ..., 0, E_k]
    RESIDUAL = "residual"  # full discrete residual of the trajectory


@dataclass
class ShootConfig:
    method: ShootMethod = ShootMethod.NEWTON
    path: Path = Path.FORMULA
    integrator: Integrator = Integrator.PAPER_EULER
    N: int = 1001
    v_a0: float = 0.0
    tol: float = 1e-3
    max_iter: int = 50
    zero_v_threshold: float = 1e-8
    rhs: RhsMode = RhsMode.ENDPOINT
    scheme: DScheme = DScheme.CENTRAL

    def __post_init__(self):
        self.method = ShootMethod(self.method)
        self.path = Path(self.path)
        self.integrator = Integrator(self.integrator)
        self.rhs = RhsMode(self.rhs)
        self.scheme = DScheme(self.scheme)
        if self.method is ShootMethod.NEWTON_DF:
            self.path = Path.PROJECTION
        if not self.tol > 0:
            raise ConfigError("tol must be positive")
        if self.max_iter < 1:
            raise ConfigError("max_iter must be at least 1")
        if not self.zero_v_threshold > 0:
            raise ConfigError("zero_v_threshold must be positive")
        if int(self.N) != self.N or self.N < 3:
            raise ConfigError("shooting needs N >= 3 mesh points")


@dataclass
class ShootState:
    k: int
    v_a: float
    traj: TrajectoryPair
    E: float
    l: float = math.nan
    sens: Optional[SensitivityPair] = None
    # k = 0 trajectory; constant-slope projections linearize about it
    reference: Optional[TrajectoryPair] = None
    converged: bool = False

    @property
    def mesh(self) -> Mesh:
        return self.traj.mesh

    @classmethod
    def from_grid(cls, spec: ProblemSpec, g: GridFunction, k: int = 0) -> "ShootState":
        """Wrap an arbitrary grid function as if it were a shooting trajectory."""
        v = np.gradient(g.values, g.mesh.h)
        traj = TrajectoryPair(g.mesh, np.array(g.values), v)
        return cls(k, float(g.initial_slope()), traj, float(g.values[-1] - spec.u_b))


def _check_method(spec: ProblemSpec, config: ShootConfig):
    if config.method is ShootMethod.NEWTON_DF and spec.uses_v:
        raise ConfigError("derivative-free Newton shooting needs f = f(x, u); "
                          "this f depends on v, use the formula path")


def _denominator(spec, config, state) -> float:
    m = config.method
    if m is ShootMethod.PICARD:
        return state.mesh.b - state.mesh.a
    if m is ShootMethod.CONSTANT_SLOPE and state.k > 0:
        if math.isnan(state.l):
            raise ConfigError("constant-slope step at k > 0 needs the slope frozen at k = 0 (state.l)")
        return state.l
    if m is ShootMethod.NEWTON_DF:
        raise ConfigError("derivative-free Newton has no closed-form update; use the projection path")
    source = state.traj if m is ShootMethod.NEWTON else (state.reference or state.traj)
    state.sens = shoot_sensitivity(spec, state.mesh, state.traj, source, config.integrator)
    return state.sens.end_value


def spi_step_formula(spec: ProblemSpec, config: ShootConfig, state: ShootState) -> float:
    """Closed-form slope correction ``v_a - E / l``; records ``l`` on the state."""
    l = _denominator(spec, config, state)
    state.l = l
    if not abs(l) >= SINGULAR_SLOPE:
        raise SolverError(f"{config.method.value} shooting: singular update, l_k = {l!r} at k={state.k}")
    return state.v_a - state.E / l


def _df_extrapolate(diag, valid, i):
    left = [j for j in range(i - 1, 0, -1) if valid[j]][:2]
    right = [j for j in range(i + 1, len(diag) - 1) if valid[j]][:2]
    sides = sorted((s for s in (left, right) if s), key=lambda s: abs(s[0] - i))
    for s in sides:
        if len(s) == 2:
            j1, j2 = s
            return diag[j1] + (diag[j1] - diag[j2]) * (i - j1) / (j1 - j2)
    # one valid point on each side: interpolate across the gap
    j1, j2 = left[0], right[0]
    return diag[j1] + (diag[j2] - diag[j1]) * (i - j1) / (j2 - j1)


def assemble_df_diagonal(v, zero_v_threshold: float = 1e-8) -> np.ndarray:
    """Jacobian diagonal ``-(v_{i-1} + v_{i+1}) / v_i`` rebuilt from a trajectory's slopes.

    ``v`` is the slope array (or a ShootState).  Returns the full diagonal
    with 1 in the two boundary rows.  Entries where ``|v_i|`` is below
    ``zero_v_threshold * max|v|`` are linearly extrapolated from the nearest
    valid interior entries.
    """
    if hasattr(v, "traj"):
        v = v.traj.v
    v = np.asarray(v, dtype=float)
    N = len(v)
    diag = np.ones(N)
    vmax = float(np.max(np.abs(v))) if N else 0.0
    valid = np.zeros(N, dtype=bool)
    valid[1:-1] = np.abs(v[1:-1]) >= zero_v_threshold * vmax
    if vmax == 0.0:
        valid[:] = False
    idx = np.flatnonzero(valid)
    diag[idx] = -(v[idx - 1] + v[idx + 1]) / v[idx]
    bad = [i for i in range(1, N - 1) if not valid[i]]
    if bad:
        if len(idx) < 2:
            raise SolverError("cannot rebuild the Jacobian diagonal: the trajectory slope vanishes "
                              "almost everywhere; use the formula path with df/du instead")
        for i in bad:
            diag[i] = _df_extrapolate(diag, valid, i)
    return diag


def projection_system(spec: ProblemSpec, config: ShootConfig, state: ShootState) -> TridiagSystem:
    mesh = state.mesh
    u_k = GridFunction(mesh, state.traj.u)
    if config.rhs is RhsMode.ENDPOINT:
        rhs = endpoint_rhs(state.E, mesh.N)
    else:
        rhs = nonlinear_residual(spec, config.scheme, u_k).values
    m = config.method
    if m is ShootMethod.NEWTON_DF:
        diag = assemble_df_diagonal(state.traj.v, config.zero_v_threshold)
        ones = np.ones(mesh.N)
        return boundary_system(ones, diag, ones, rhs)
    if m is ShootMethod.NEWTON:
        variant = LinearizationVariant.newton()
    elif m is ShootMethod.PICARD:
        variant = LinearizationVariant.picard()
    else:
        ref = state.reference or state.traj
        variant = LinearizationVariant.constant_slope(GridFunction(mesh, ref.u))
    return assemble(spec, config.scheme, variant, u_k, rhs=rhs)


def project_trajectory(spec: ProblemSpec, config: ShootConfig, state: ShootState) -> GridFunction:
    """Projection trajectory ``u^k - L^{-1} G``; satisfies both boundary values."""
    system = projection_system(spec, config, state)
    try:
        delta = thomas_solve(system)
    except SolverError as exc:
        raise SolverError(f"projection at k={state.k}: {exc}") from None
    return GridFunction(state.mesh, state.traj.u - delta)


def spi_solve(spec: ProblemSpec, config: ShootConfig):
    """Shoot and correct until ``|E_k| <= tol``.

    Returns ``(final_state, trace)`` where the trace rows are
    ``(k, v_a^k, E_k)``.  Raises ConvergenceError with the trace attached
    when ``max_iter`` corrections do not suffice.
    """
    _check_method(spec, config)
    mesh = make_mesh(spec.a, spec.b, config.N)
    trace = IterationTrace()
    v_a = float(config.v_a0)
    reference = None
    frozen_l = math.nan
    frozen_sens = None
    for k in range(config.max_iter + 1):
        traj = shoot(spec, mesh, v_a, config.integrator)
        E = float(traj.u[-1] - spec.u_b)
        if reference is None:
            reference = traj
        state = ShootState(k, v_a, traj, E, frozen_l, frozen_sens, reference)
        trace.append(k, v_a, E)
        if abs(E) <= config.tol:
            state.converged = trace.converged = True
            if config.method is ShootMethod.PICARD:
                state.l = spec.b - spec.a
            return state, trace
        if k == config.max_iter:
            break
        if config.path is Path.FORMULA:
            v_next = spi_step_formula(spec, config, state)
        else:
            v_next = float(project_trajectory(spec, config, state).initial_slope())
            if config.method is ShootMethod.PICARD:
                state.l = spec.b - spec.a
            elif v_next != v_a:
                state.l = -E / (v_next - v_a)
        if not math.isfinite(v_next):
            raise DivergenceError(f"initial slope became {v_next!r} at k={k}")
        if config.method is ShootMethod.CONSTANT_SLOPE and k == 0:
            frozen_l, frozen_sens = state.l, state.sens
        v_a = v_next
    raise ConvergenceError(
        f"{config.method.value} shooting: no convergence after {config.max_iter} corrections, "
        f"|E| = {abs(trace[-1].residual):.3e}", trace=trace, state=state)
