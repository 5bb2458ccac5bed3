"""Tridiagonal Jacobian systems for the linearized BVP and their solution."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ConfigError, SolverError
from .mesh import DScheme, GridFunction, Mesh, dapply_all, dscheme_weights, nonlinear_residual, write_columns_csv
from .problem import ProblemSpec, eval_p, eval_q

PIVOT_FLOOR = 1e-300


class Linearization(enum.Enum):
    NEWTON = "newton"
    PICARD = "picard"
    CONSTANT_SLOPE = "constant-slope"


@dataclass(frozen=True, eq=False)
class LinearizationVariant:
    """Which coefficients q_i, p_i enter the Jacobian.

    NEWTON linearizes about the current iterate, PICARD drops q and p,
    CONSTANT_SLOPE linearizes about the frozen ``reference`` (the k=0
    iterate).  A constant-slope variant without a reference uses the
    iterate it is applied to, which is the k=0 behaviour.
    """

    kind: Linearization
    reference: Optional[GridFunction] = None

    @classmethod
    def newton(cls):
        return cls(Linearization.NEWTON)

    @classmethod
    def picard(cls):
        return cls(Linearization.PICARD)

    @classmethod
    def constant_slope(cls, reference=None):
        return cls(Linearization.CONSTANT_SLOPE, reference)


def as_variant(v) -> LinearizationVariant:
    if isinstance(v, LinearizationVariant):
        return v
    if isinstance(v, Linearization):
        return LinearizationVariant(v)
    return LinearizationVariant(Linearization(v))


@dataclass(frozen=True, eq=False)
class TridiagSystem:
    """Rows ``sub[i]*s[i-1] + diag[i]*s[i] + sup[i]*s[i+1] = rhs[i]``.

    ``sub[0]`` and ``sup[-1]`` are unused and kept at 0.
    """

    sub: np.ndarray
    diag: np.ndarray
    sup: np.ndarray
    rhs: np.ndarray

    @property
    def N(self) -> int:
        return len(self.diag)

    def matvec(self, w) -> np.ndarray:
        w = np.asarray(w, dtype=float)
        out = self.diag * w
        out[1:] += self.sub[1:] * w[:-1]
        out[:-1] += self.sup[:-1] * w[1:]
        return out

    def to_dense(self) -> np.ndarray:
        A = np.diag(self.diag)
        A += np.diag(self.sub[1:], -1)
        A += np.diag(self.sup[:-1], 1)
        return A

    def with_rhs(self, rhs) -> "TridiagSystem":
        return TridiagSystem(self.sub, self.diag, self.sup, np.asarray(rhs, dtype=float))

    def to_csv(self, path):
        """Dump the diagonals and right-hand side for failure triage."""
        write_columns_csv(path, ("i", "sub", "diag", "sup", "rhs"),
                          (np.arange(self.N), self.sub, self.diag, self.sup, self.rhs))


def _coefficients(spec, scheme, kind, g: GridFunction):
    mesh = g.mesh
    n = mesh.N - 2
    if kind is Linearization.PICARD:
        return np.zeros(n), np.zeros(n)
    u, x = g.values.tolist(), mesh.x.tolist()
    du = dapply_all(scheme, g.values, mesh.h).tolist()
    q = np.empty(n)
    p = np.empty(n)
    for j in range(n):
        i = j + 1
        q[j] = eval_q(spec, x[i], u[i], du[j])
        p[j] = eval_p(spec, x[i], u[i], du[j])
    return q, p


def boundary_system(sub, diag, sup, rhs) -> TridiagSystem:
    sub = np.asarray(sub, dtype=float).copy()
    diag = np.asarray(diag, dtype=float).copy()
    sup = np.asarray(sup, dtype=float).copy()
    sub[0] = sup[0] = 0.0
    sub[-1] = sup[-1] = 0.0
    diag[0] = diag[-1] = 1.0
    return TridiagSystem(sub, diag, sup, np.asarray(rhs, dtype=float))


def assemble(spec: ProblemSpec, scheme: DScheme, variant, u_k: GridFunction,
             rhs: Optional[np.ndarray] = None) -> TridiagSystem:
    """Jacobian L^k of the discrete BVP about ``u_k`` plus the residual G^k.

    Interior rows are ``(1 - h^2 p w_-,  -2 - h^2 q - h^2 p w_0,  1 - h^2 p w_+)``
    with ``(w_-, w_0, w_+)`` the difference-scheme weights.  ``rhs``
    overrides G^k (used by the projection step).
    """
    variant = as_variant(variant)
    mesh = u_k.mesh
    N, h = mesh.N, mesh.h
    h2 = h * h
    source = u_k
    if variant.kind is Linearization.CONSTANT_SLOPE and variant.reference is not None:
        source = variant.reference
        if source.mesh.N != N:
            raise ConfigError("constant-slope reference must share the iterate's mesh")
    q, p = _coefficients(spec, scheme, variant.kind, source)
    wm, w0, wp = dscheme_weights(scheme, h)

    sub = np.zeros(N)
    diag = np.ones(N)
    sup = np.zeros(N)
    sub[1:-1] = 1.0 - h2 * p * wm
    diag[1:-1] = -2.0 - h2 * q - h2 * p * w0
    sup[1:-1] = 1.0 - h2 * p * wp
    bad = ~(np.isfinite(sub) & np.isfinite(diag) & np.isfinite(sup))
    if bad.any():
        i = int(np.flatnonzero(bad)[0])
        raise SolverError(f"non-finite Jacobian row i={i}: q={q[i - 1]!r}, p={p[i - 1]!r}")
    if rhs is None:
        rhs = nonlinear_residual(spec, scheme, u_k).values
    return TridiagSystem(sub, diag, sup, np.asarray(rhs, dtype=float))


def endpoint_rhs(end_mismatch: float, N: int) -> np.ndarray:
    """Right-hand side that is zero except for the right-end mismatch."""
    if N < 2:
        raise ConfigError("N must be at least 2")
    G = np.zeros(N)
    G[-1] = end_mismatch
    return G


def thomas_solve(system: TridiagSystem) -> np.ndarray:
    """Forward elimination / back substitution without pivoting, O(N)."""
    a = system.sub.tolist()
    b = system.diag.tolist()
    c = system.sup.tolist()
    d = system.rhs.tolist()
    n = len(b)
    cp = [0.0] * n
    dp = [0.0] * n
    piv = b[0]
    if abs(piv) < PIVOT_FLOOR:
        raise SolverError("zero pivot in tridiagonal solve at row 0")
    cp[0] = c[0] / piv
    dp[0] = d[0] / piv
    for i in range(1, n):
        piv = b[i] - a[i] * cp[i - 1]
        if not abs(piv) >= PIVOT_FLOOR:
            raise SolverError(f"zero pivot in tridiagonal solve at row {i}")
        cp[i] = c[i] / piv if i < n - 1 else 0.0
        dp[i] = (d[i] - a[i] * dp[i - 1]) / piv
    s = [0.0] * n
    s[-1] = dp[-1]
    for i in range(n - 2, -1, -1):
        s[i] = dp[i] - cp[i] * s[i + 1]
    return np.array(s)


class Dominance(enum.Enum):
    PASS = "pass"
    FAIL = "fail"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class DominanceDiagnostic:
    status: Dominance
    h: float
    threshold: Optional[float]

    def __str__(self):
        if self.status is Dominance.UNKNOWN:
            return "diagonal dominance: unknown (no bound on |df/dv| given)"
        return f"diagonal dominance: {self.status.value} (h={self.h:g}, need h < {self.threshold:g})"


def check_diag_dominance(spec: ProblemSpec, mesh: Mesh, scheme: DScheme) -> DominanceDiagnostic:
    """Mesh-size condition for strict diagonal dominance given |p| <= P (and q > 0).

    h < 2/P for central differences, h < 1/P for one-sided ones.
    """
    P = spec.p_bound
    if P is None:
        return DominanceDiagnostic(Dominance.UNKNOWN, mesh.h, None)
    if P == 0:
        return DominanceDiagnostic(Dominance.PASS, mesh.h, math.inf)
    threshold = (2.0 if scheme is DScheme.CENTRAL else 1.0) / P
    status = Dominance.PASS if mesh.h < threshold else Dominance.FAIL
    return DominanceDiagnostic(status, mesh.h, threshold)
