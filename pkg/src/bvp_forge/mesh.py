"""Uniform meshes, grid functions and first-difference operators.

Indices are 0-based: the mesh points are ``x[0] = a, ..., x[N-1] = b``
and the interior points are ``1 <= i <= N-2``.
"""

from __future__ import annotations

import csv
import enum
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .problem import ProblemSpec, eval_f


class DScheme(enum.Enum):
    CENTRAL = "central"
    FORWARD = "forward"
    BACKWARD = "backward"


@dataclass(frozen=True, eq=False)
class Mesh:
    a: float
    b: float
    N: int
    h: float
    x: np.ndarray

    def __len__(self):
        return self.N


def make_mesh(a: float, b: float, N: int) -> Mesh:
    """N equally spaced points, ``x_i = a + i*h`` with ``x[-1]`` pinned to ``b``."""
    if int(N) != N or N < 2:
        raise ConfigError(f"mesh needs N >= 2 points, got {N}")
    if not b > a:
        raise ConfigError(f"mesh needs b > a, got a={a}, b={b}")
    N = int(N)
    h = (b - a) / (N - 1)
    x = a + h * np.arange(N, dtype=float)
    x[0] = a
    x[-1] = b
    x.setflags(write=False)
    return Mesh(float(a), float(b), N, h, x)


@dataclass(frozen=True, eq=False)
class GridFunction:
    mesh: Mesh
    values: np.ndarray

    def __post_init__(self):
        vals = np.array(self.values, dtype=float)
        if vals.shape != (self.mesh.N,):
            raise ConfigError(f"grid function has {vals.shape} values for a mesh of {self.mesh.N} points")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    def __len__(self):
        return self.mesh.N

    def __getitem__(self, i):
        return self.values[i]

    def initial_slope(self) -> float:
        """One-sided slope at the left boundary, ``(u_1 - u_0) / h``."""
        return (self.values[1] - self.values[0]) / self.mesh.h

    def to_csv(self, path, header=("x", "u")):
        write_columns_csv(path, header, (self.mesh.x, self.values))


def linear_interpolant(spec: ProblemSpec, mesh: Mesh) -> GridFunction:
    t = (mesh.x - spec.a) / (spec.b - spec.a)
    vals = spec.u_a + (spec.u_b - spec.u_a) * t
    vals[0], vals[-1] = spec.u_a, spec.u_b
    return GridFunction(mesh, vals)


def dscheme_weights(scheme: DScheme, h: float):
    """Coefficients of u_{i-1}, u_i, u_{i+1} in the difference quotient."""
    if scheme is DScheme.CENTRAL:
        return (-1.0 / (2 * h), 0.0, 1.0 / (2 * h))
    if scheme is DScheme.FORWARD:
        return (0.0, -1.0 / h, 1.0 / h)
    if scheme is DScheme.BACKWARD:
        return (-1.0 / h, 1.0 / h, 0.0)
    raise ConfigError(f"unknown difference scheme {scheme!r}")


def dapply(scheme: DScheme, g: GridFunction, i: int) -> float:
    N = g.mesh.N
    if not 1 <= i <= N - 2:
        raise IndexError(f"difference quotient needs an interior index 1..{N - 2}, got {i}")
    u, h = g.values, g.mesh.h
    if scheme is DScheme.CENTRAL:
        return (u[i + 1] - u[i - 1]) / (2 * h)
    if scheme is DScheme.FORWARD:
        return (u[i + 1] - u[i]) / h
    return (u[i] - u[i - 1]) / h


def dapply_all(scheme: DScheme, values: np.ndarray, h: float) -> np.ndarray:
    """Difference quotients at every interior point (length N-2)."""
    u = np.asarray(values, dtype=float)
    if scheme is DScheme.CENTRAL:
        return (u[2:] - u[:-2]) / (2 * h)
    if scheme is DScheme.FORWARD:
        return (u[2:] - u[1:-1]) / h
    return (u[1:-1] - u[:-2]) / h


def nonlinear_residual(spec: ProblemSpec, scheme: DScheme, g: GridFunction) -> GridFunction:
    """Discrete residual vector with the boundary mismatches in the first and last slots.

    Interior entries are ``u_{i-1} - 2 u_i + u_{i+1} - h^2 f(x_i, u_i, Du_i)``.
    """
    mesh = g.mesh
    u, x, h = g.values, mesh.x, mesh.h
    h2 = h * h
    G = np.empty(mesh.N)
    G[0] = u[0] - spec.u_a
    G[-1] = u[-1] - spec.u_b
    du = dapply_all(scheme, u, h).tolist()
    u, x = u.tolist(), x.tolist()
    for i in range(1, mesh.N - 1):
        G[i] = u[i - 1] - 2 * u[i] + u[i + 1] - h2 * eval_f(spec, x[i], u[i], du[i - 1])
    return GridFunction(mesh, G)


def write_columns_csv(path, header, columns):
    """CSV with 17 significant digits so values survive a text round trip."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in zip(*columns):
            w.writerow([format_float(c) for c in row])


def format_float(value, digits: int = 17) -> str:
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return str(int(value))
    return f"{float(value):.{digits}g}"
