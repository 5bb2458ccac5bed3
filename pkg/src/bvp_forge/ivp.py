"""Shooting trajectories and their sensitivity to the initial slope.

``PAPER_EULER`` is the semi-updated explicit Euler scheme used by the
reference MATLAB code::

    u[i] = u[i-1] + h*v[i-1]
    v[i] = v[i-1] + h*f(x[i], u[i], v[i-1])

i.e. f sees the new u, the old v and the new x.  Keeping this exact order
is what makes the published iteration tables reproducible digit for digit.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DivergenceError, ExprDomainError
from .mesh import Mesh
from .problem import ProblemSpec, eval_f, eval_p, eval_q

BLOWUP = 1e100


class Integrator(enum.Enum):
    PAPER_EULER = "paper-euler"
    RK4 = "rk4"


@dataclass(frozen=True, eq=False)
class TrajectoryPair:
    mesh: Mesh
    u: np.ndarray
    v: np.ndarray

    @property
    def end_value(self) -> float:
        return float(self.u[-1])


@dataclass(frozen=True, eq=False)
class SensitivityPair:
    mesh: Mesh
    z: np.ndarray
    w: np.ndarray

    @property
    def end_value(self) -> float:
        return float(self.z[-1])


def _guard(i, x, *vals):
    for val in vals:
        if not (math.isfinite(val) and abs(val) <= BLOWUP):
            raise DivergenceError(f"trajectory diverged at step i={i}, x={x!r}: value {val!r}")


def _domain(exc, i):
    return ExprDomainError(f"{exc} (integration step i={i})")


def shoot(spec: ProblemSpec, mesh: Mesh, v_a: float,
          integrator: Integrator = Integrator.PAPER_EULER) -> TrajectoryPair:
    """Integrate u'' = f from u(a) = u_a, u'(a) = v_a across the mesh."""
    N, h, x = mesh.N, mesh.h, mesh.x
    u = np.empty(N)
    v = np.empty(N)
    u[0] = spec.u_a
    v[0] = v_a
    f = spec._f
    # plain floats in the hot loop; numpy scalars are slow here
    xs = x.tolist()
    ui, vi = float(spec.u_a), float(v_a)
    try:
        if integrator is Integrator.PAPER_EULER:
            for i in range(1, N):
                ui = ui + h * vi
                vi = vi + h * f(xs[i], ui, vi)
                _guard(i, xs[i], ui, vi)
                u[i] = ui
                v[i] = vi
        else:
            half = 0.5 * h
            for i in range(1, N):
                xi = xs[i - 1]
                xm = xi + half
                k1u, k1v = vi, f(xi, ui, vi)
                k2u, k2v = vi + half * k1v, f(xm, ui + half * k1u, vi + half * k1v)
                k3u, k3v = vi + half * k2v, f(xm, ui + half * k2u, vi + half * k2v)
                k4u, k4v = vi + h * k3v, f(xs[i], ui + h * k3u, vi + h * k3v)
                ui = ui + h / 6.0 * (k1u + 2 * k2u + 2 * k3u + k4u)
                vi = vi + h / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v)
                _guard(i, xs[i], ui, vi)
                u[i] = ui
                v[i] = vi
    except ExprDomainError as exc:
        raise ExprDomainError(f"{exc} at step i={i}", (xs[i], ui, vi)) from None
    return TrajectoryPair(mesh, u, v)


def shoot_sensitivity(spec: ProblemSpec, mesh: Mesh, traj: TrajectoryPair,
                      coeff_source: TrajectoryPair | None = None,
                      integrator: Integrator = Integrator.PAPER_EULER,
                      w_start: float = 1.0) -> SensitivityPair:
    """Solve z'' = q z + p z', z(a) = 0, z'(a) = 1, with q and p taken along ``coeff_source``.

    ``z[-1]`` is du(b)/dv_a for the trajectory that ``coeff_source`` is.
    Passing the k=0 trajectory freezes the coefficients, as constant-slope
    shooting requires.  The PAPER_EULER variant evaluates q, p at
    ``(x_i, u_i, v_{i-1})`` of the source.  RK4 needs the coefficients
    between mesh points, so it re-integrates the source trajectory from its
    initial slope alongside (z, w).
    """
    src = traj if coeff_source is None else coeff_source
    if src.mesh.N != mesh.N or traj.mesh.N != mesh.N:
        raise ValueError("trajectories must live on the given mesh")
    N, h = mesh.N, mesh.h
    xs = mesh.x.tolist()
    z = np.empty(N)
    w = np.empty(N)
    z[0] = 0.0
    w[0] = w_start
    zi, wi = 0.0, float(w_start)
    i = 0
    try:
        if integrator is Integrator.PAPER_EULER:
            su = src.u.tolist()
            sv = src.v.tolist()
            for i in range(1, N):
                zi = zi + h * wi
                qi = eval_q(spec, xs[i], su[i], sv[i - 1])
                pi = eval_p(spec, xs[i], su[i], sv[i - 1])
                wi = wi + h * (qi * zi + pi * wi)
                _guard(i, xs[i], zi, wi)
                z[i] = zi
                w[i] = wi
        else:
            f = spec._f
            ui, vi = float(src.u[0]), float(src.v[0])
            half = 0.5 * h

            def rhs(xx, uu, vv, zz, ww):
                return (vv, f(xx, uu, vv), ww,
                        eval_q(spec, xx, uu, vv) * zz + eval_p(spec, xx, uu, vv) * ww)

            for i in range(1, N):
                y = (ui, vi, zi, wi)
                xi = xs[i - 1]
                k1 = rhs(xi, *y)
                k2 = rhs(xi + half, *(a + half * b for a, b in zip(y, k1)))
                k3 = rhs(xi + half, *(a + half * b for a, b in zip(y, k2)))
                k4 = rhs(xs[i], *(a + h * b for a, b in zip(y, k3)))
                ui, vi, zi, wi = (a + h / 6.0 * (b1 + 2 * b2 + 2 * b3 + b4)
                                  for a, b1, b2, b3, b4 in zip(y, k1, k2, k3, k4))
                _guard(i, xs[i], zi, wi)
                z[i] = zi
                w[i] = wi
    except ExprDomainError as exc:
        raise ExprDomainError(f"{exc} in sensitivity step i={i}") from None
    return SensitivityPair(mesh, z, w)
