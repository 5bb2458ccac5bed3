import json

import numpy as np
import pytest

from bvp_forge.errors import ConfigError, ExprDomainError, ParseError
from bvp_forge.problem import (ProblemSpec, available_problems, builtin_problem, eval_f, eval_p, eval_q,
                               load_problem, problem_from_dict, solvability_diagnostics)


def test_eval_f_cube(cube):
    assert eval_f(cube, 0.3, 1.0, 0.0) == 1.0
    assert eval_f(cube, 0.3, 0.0, 0.0) == 0.0
    assert eval_f(cube, 0.3, 0.5, 0.0) == 0.125


def test_eval_q_analytic_and_numeric(cube, cube_nd):
    assert eval_q(cube, 0.0, 0.5, 0.0) == 0.75
    assert eval_q(cube_nd, 0.0, 0.5, 0.0) == pytest.approx(0.75, abs=1e-6)


def test_p_vanishes_without_v(cube, cube_nd):
    assert eval_p(cube, 0.0, 0.5, 1.0) == 0.0
    assert eval_p(cube_nd, 0.0, 0.5, 1.0) == 0.0


def test_numeric_p_for_v_dependent_f():
    spec = ProblemSpec(0, 1, 0, 1, "u*v^2")
    assert eval_p(spec, 0.0, 2.0, 3.0) == pytest.approx(12.0, abs=1e-6)
    assert eval_q(spec, 0.0, 2.0, 3.0) == pytest.approx(9.0, abs=1e-6)


def test_numeric_partials_match_analytic_q():
    spec = ProblemSpec(0, 1, 0, 1, "u^3 + sin(u)*v + x*u", q="3*u^2 + cos(u)*v + x", p="sin(u)")
    numeric = spec.without_partials()
    rng = np.random.default_rng(3)
    for x, u, v in zip(rng.uniform(0, 1, 200), rng.uniform(-10, 10, 200), rng.uniform(-10, 10, 200)):
        assert eval_q(numeric, x, u, v) == pytest.approx(eval_q(spec, x, u, v), abs=1e-6)
        assert eval_p(numeric, x, u, v) == pytest.approx(eval_p(spec, x, u, v), abs=1e-6)


def test_builtins():
    c = builtin_problem("cube")
    assert (c.a, c.b, c.u_a, c.u_b) == (0.0, 1.0, 0.5, 1.0)
    lin = builtin_problem("linear")
    assert (lin.a, lin.b, lin.u_a, lin.u_b) == (0.0, 1.0, 0.0, 1.0)
    assert eval_f(lin, 0.4, 3.0, 2.0) == 0.0
    nd = builtin_problem("cube-no-derivs")
    assert nd.q is None and nd.p is None
    assert {"cube", "cube-no-derivs", "linear"} <= set(available_problems())


def test_unknown_builtin_lists_names():
    with pytest.raises(ConfigError, match="cube"):
        builtin_problem("nope")


def test_b_must_exceed_a():
    with pytest.raises(ConfigError):
        ProblemSpec(1.0, 1.0, 0, 0, "u")


def test_eval_domain_error_carries_point():
    spec = ProblemSpec(0, 1, 1, 1, "log(u)")
    with pytest.raises(ExprDomainError) as info:
        eval_f(spec, 0.5, -1.0, 0.0)
    assert info.value.point == (0.5, -1.0, 0.0)


def test_problem_file_round_trip(tmp_path):
    path = tmp_path / "p.json"
    path.write_text(json.dumps({"a": 0, "b": 2, "ua": 1, "ub": 3, "f": "u^3 + v",
                                "dfdu": "3*u^2", "dfdv": "1", "p_bound": 1}))
    spec = load_problem(str(path))
    assert spec.b == 2.0 and spec.p_bound == 1.0
    assert eval_p(spec, 0, 0, 0) == 1.0
    again = problem_from_dict(spec.to_dict())
    assert eval_f(again, 0.1, 1.3, 0.7) == eval_f(spec, 0.1, 1.3, 0.7)


@pytest.mark.parametrize("data, exc", [
    ({"a": 0, "b": 1, "ua": 0}, ConfigError),
    ({"a": 0, "b": 1, "ua": 0, "ub": 1, "f": "u +"}, ParseError),
    ({"a": 0, "b": 1, "ua": 0, "ub": 1, "f": 3}, ConfigError),
    ({"a": 0, "b": 1, "ua": 0, "ub": 1, "f": "u", "extra": 1}, ConfigError),
    ({"a": 1, "b": 0, "ua": 0, "ub": 1, "f": "u"}, ConfigError),
])
def test_bad_problem_files(data, exc):
    with pytest.raises(exc):
        problem_from_dict(data)


def test_missing_problem_file():
    with pytest.raises(ConfigError):
        load_problem("/no/such/file.json")


def test_solvability_diagnostic(cube, caplog):
    # q = 3u^2 vanishes at u = 0, which the sampler hits
    notes = solvability_diagnostics(cube)
    assert notes and all(n[3] <= 0 for n in notes)
    ok = ProblemSpec(0, 1, 0, 1, "u + u^3", q="1 + 3*u^2")
    assert solvability_diagnostics(ok) == []
