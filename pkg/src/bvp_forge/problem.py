"""Two-point boundary value problems u'' = f(x, u, u'), u(a) = u_a, u(b) = u_b."""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from .errors import ConfigError, ExprDomainError, SolverError
from .expr import ExprAst, compile_expr, parse_expr, to_source, variables_used

log = logging.getLogger(__name__)

NUMERIC_STEP = 1e-6


def _as_ast(e):
    return parse_expr(e) if isinstance(e, str) else e


@dataclass(frozen=True)
class ProblemSpec:
    """A TPBVP on [a, b].

    ``f``, ``q`` (df/du) and ``p`` (df/dv) may be given as source strings
    or parsed trees.  Missing partials are replaced by central differences.
    ``p_bound`` is an upper bound on |p| used by the diagonal-dominance
    check.
    """

    a: float
    b: float
    u_a: float
    u_b: float
    f: ExprAst
    q: Optional[ExprAst] = None
    p: Optional[ExprAst] = None
    p_bound: Optional[float] = None
    name: str = "custom"
    _f: object = field(init=False, repr=False, compare=False)
    _q: object = field(init=False, repr=False, compare=False)
    _p: object = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        for attr in ("a", "b", "u_a", "u_b"):
            object.__setattr__(self, attr, float(getattr(self, attr)))
        if not self.b > self.a:
            raise ConfigError(f"need b > a, got a={self.a}, b={self.b}")
        if self.p_bound is not None and not self.p_bound >= 0:
            raise ConfigError(f"p_bound must be nonnegative, got {self.p_bound}")
        for attr in ("f", "q", "p"):
            object.__setattr__(self, attr, _as_ast(getattr(self, attr)))
        if self.f is None:
            raise ConfigError("f is required")
        object.__setattr__(self, "_f", compile_expr(self.f))
        object.__setattr__(self, "_q", None if self.q is None else compile_expr(self.q))
        object.__setattr__(self, "_p", None if self.p is None else compile_expr(self.p))

    @property
    def uses_v(self) -> bool:
        return "v" in variables_used(self.f)

    def without_partials(self, name=None) -> "ProblemSpec":
        return ProblemSpec(self.a, self.b, self.u_a, self.u_b, self.f, None, None,
                           self.p_bound, name or self.name)

    def to_dict(self) -> dict:
        d = {"a": self.a, "b": self.b, "ua": self.u_a, "ub": self.u_b, "f": to_source(self.f)}
        if self.q is not None:
            d["dfdu"] = to_source(self.q)
        if self.p is not None:
            d["dfdv"] = to_source(self.p)
        if self.p_bound is not None:
            d["p_bound"] = self.p_bound
        return d


def _call(fn, x, u, v):
    try:
        return fn(x, u, v)
    except ExprDomainError as exc:
        raise ExprDomainError(str(exc), (x, u, v)) from None


def eval_f(spec: ProblemSpec, x, u, v) -> float:
    return _call(spec._f, x, u, v)


def _numeric_partial(spec, x, u, v, wrt):
    base = u if wrt == "u" else v
    delta = max(NUMERIC_STEP, NUMERIC_STEP * abs(base))
    hi, lo = base + delta, base - delta
    width = hi - lo
    if not width > 0.0:
        raise SolverError(f"numeric partial step underflow in {wrt} at (x={x}, u={u}, v={v})")
    if wrt == "u":
        return (_call(spec._f, x, hi, v) - _call(spec._f, x, lo, v)) / width
    return (_call(spec._f, x, u, hi) - _call(spec._f, x, u, lo)) / width


def eval_q(spec: ProblemSpec, x, u, v) -> float:
    """df/du: the supplied expression, else a central difference."""
    if spec._q is not None:
        return _call(spec._q, x, u, v)
    if "u" not in variables_used(spec.f):
        return 0.0
    return _numeric_partial(spec, x, u, v, "u")


def eval_p(spec: ProblemSpec, x, u, v) -> float:
    """df/dv: the supplied expression, else a central difference."""
    if spec._p is not None:
        return _call(spec._p, x, u, v)
    if not spec.uses_v:
        return 0.0
    return _numeric_partial(spec, x, u, v, "v")


def solvability_diagnostics(spec: ProblemSpec, n_samples: int = 11, box: float = 10.0) -> list:
    """Sample df/du on a box of (x, u, v) and report points with q <= 0.

    Positivity of q is sufficient, not necessary, for a unique solution,
    so this only warns.
    """
    notes = []
    xs = np.linspace(spec.a, spec.b, n_samples)
    us = np.linspace(-box, box, n_samples)
    for x in xs:
        for u in us:
            for v in us:
                try:
                    qv = eval_q(spec, float(x), float(u), float(v))
                except (ExprDomainError, SolverError):
                    continue
                if qv <= 0.0:
                    notes.append((float(x), float(u), float(v), qv))
    if notes:
        log.warning("df/du <= 0 at %d of %d sampled points (first: %s); "
                    "uniqueness is not guaranteed", len(notes), n_samples ** 3, notes[0])
    return notes


# ---------------------------------------------------------------------------
# registry

_BUILTINS = {
    "cube": dict(a=0.0, b=1.0, u_a=0.5, u_b=1.0, f="u*u*u", q="3*u*u", p="0", p_bound=0.0),
    "cube-no-derivs": dict(a=0.0, b=1.0, u_a=0.5, u_b=1.0, f="u*u*u"),
    "linear": dict(a=0.0, b=1.0, u_a=0.0, u_b=1.0, f="0", q="0", p="0", p_bound=0.0),
    # cube with a drag term, exercises the df/dv paths
    "cube-drag": dict(a=0.0, b=1.0, u_a=0.5, u_b=1.0, f="u^3 + 0.5*v", q="3*u^2", p="0.5",
                      p_bound=0.5),
}


def available_problems() -> list:
    return sorted(_BUILTINS)


def builtin_problem(name: str) -> ProblemSpec:
    try:
        kw = _BUILTINS[name]
    except KeyError:
        raise ConfigError(f"unknown problem {name!r}; available: {', '.join(available_problems())}") from None
    return ProblemSpec(name=name, **kw)


def problem_from_dict(d: dict, name: str = "custom") -> ProblemSpec:
    """Build a problem from the JSON object shape ``{a, b, ua, ub, f, dfdu?, dfdv?, p_bound?}``."""
    missing = [k for k in ("a", "b", "ua", "ub", "f") if k not in d]
    if missing:
        raise ConfigError(f"problem file missing keys: {', '.join(missing)}")
    unknown = set(d) - {"a", "b", "ua", "ub", "f", "dfdu", "dfdv", "p_bound", "name"}
    if unknown:
        raise ConfigError(f"problem file has unknown keys: {', '.join(sorted(unknown))}")
    for k in ("f", "dfdu", "dfdv"):
        if k in d and not isinstance(d[k], str):
            raise ConfigError(f"{k} must be an expression string")
    try:
        a, b, ua, ub = (float(d[k]) for k in ("a", "b", "ua", "ub"))
        pb = None if d.get("p_bound") is None else float(d["p_bound"])
    except (TypeError, ValueError):
        raise ConfigError("a, b, ua, ub, p_bound must be numbers") from None
    return ProblemSpec(a, b, ua, ub, d["f"], d.get("dfdu"), d.get("dfdv"), pb, d.get("name", name))


def load_problem(source) -> ProblemSpec:
    """Resolve a builtin name or a path to a JSON problem file."""
    path = Path(source)
    if str(source) in _BUILTINS:
        return builtin_problem(str(source))
    if not path.is_file():
        raise ConfigError(f"{source!r} is neither a builtin problem "
                          f"({', '.join(available_problems())}) nor a readable file")
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: expected a JSON object")
    return problem_from_dict(data, name=path.stem)
