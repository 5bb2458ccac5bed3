import numpy as np
import pytest

from bvp_forge.errors import DivergenceError, ExprDomainError
from bvp_forge.ivp import Integrator, shoot, shoot_sensitivity
from bvp_forge.mesh import make_mesh
from bvp_forge.problem import ProblemSpec

E0_TABLE = -0.433349035739307
VA1_TABLE = 0.379948530223661


@pytest.mark.parametrize("integrator", list(Integrator))
def test_initial_conditions_exact(cube, integrator):
    m = make_mesh(0, 1, 51)
    tr = shoot(cube, m, 0.3, integrator)
    assert tr.u[0] == 0.5 and tr.v[0] == 0.3
    s = shoot_sensitivity(cube, m, tr, tr, integrator)
    assert s.z[0] == 0.0 and s.w[0] == 1.0


@pytest.mark.parametrize("N", [2, 11, 1001])
def test_linear_problem_is_integrated_exactly(linear, N):
    m = make_mesh(0, 1, N)
    tr = shoot(linear, m, 1.0)
    assert abs(tr.u[-1] - 1.0) <= 1e-13
    np.testing.assert_allclose(tr.u, linear.u_a + 1.0 * (m.x - linear.a), atol=1e-13, rtol=0)


def test_euler_end_mismatch(cube):
    tr = shoot(cube, make_mesh(0, 1, 1001), 0.0, Integrator.PAPER_EULER)
    assert tr.u[-1] - cube.u_b == pytest.approx(E0_TABLE, abs=1e-15)


def test_euler_operation_order(cube):
    # f is evaluated at the freshly updated u and the previous v
    m = make_mesh(0, 1, 4)
    tr = shoot(cube, m, 0.2)
    u, v = [0.5], [0.2]
    for i in range(1, 4):
        u.append(u[-1] + m.h * v[-1])
        v.append(v[-1] + m.h * (u[-1] * u[-1] * u[-1]))
    assert tr.u.tolist() == u and tr.v.tolist() == v


def test_rk4_end_mismatch(cube):
    m = make_mesh(0, 1, 1001)
    rk = shoot(cube, m, 0.0, Integrator.RK4).u[-1] - cube.u_b
    eu = shoot(cube, m, 0.0, Integrator.PAPER_EULER).u[-1] - cube.u_b
    assert rk == pytest.approx(-0.43338, abs=2e-4)
    assert abs(rk - eu) <= 10 * m.h


def test_rk4_fourth_order(cube):
    ends = [shoot(cube, make_mesh(0, 1, N), 0.3, Integrator.RK4).u[-1] for N in (11, 21, 41)]
    ratio = abs(ends[0] - ends[1]) / abs(ends[1] - ends[2])
    assert 12 <= ratio <= 20


def test_sensitivity_of_linear_problem(linear):
    m = make_mesh(0, 1, 101)
    tr = shoot(linear, m, 0.7)
    for integ in Integrator:
        s = shoot_sensitivity(linear, m, tr, tr, integ)
        np.testing.assert_allclose(s.z, m.x - m.a, atol=1e-13, rtol=0)
        assert s.z[-1] == pytest.approx(1.0, abs=1e-13)


def test_sensitivity_reproduces_first_newton_correction(cube):
    m = make_mesh(0, 1, 1001)
    tr = shoot(cube, m, 0.0)
    zN = shoot_sensitivity(cube, m, tr, tr).z[-1]
    assert zN == pytest.approx(-E0_TABLE / VA1_TABLE, rel=1e-12)
    assert zN == pytest.approx(1.14055, abs=1e-5)


@pytest.mark.parametrize("integrator", list(Integrator))
@pytest.mark.parametrize("va", [0.0, 0.36, -0.4])
def test_sensitivity_matches_finite_difference(cube, integrator, va):
    m = make_mesh(0, 1, 1001)
    d = 1e-5
    fd = (shoot(cube, m, va + d, integrator).u[-1] - shoot(cube, m, va - d, integrator).u[-1]) / (2 * d)
    tr = shoot(cube, m, va, integrator)
    zN = shoot_sensitivity(cube, m, tr, tr, integrator).z[-1]
    assert zN == pytest.approx(fd, rel=1e-4)


@pytest.mark.parametrize("integrator", list(Integrator))
def test_sensitivity_is_homogeneous(cube, integrator):
    m = make_mesh(0, 1, 201)
    tr = shoot(cube, m, 0.2, integrator)
    s1 = shoot_sensitivity(cube, m, tr, tr, integrator)
    s2 = shoot_sensitivity(cube, m, tr, tr, integrator, w_start=2.0)
    np.testing.assert_allclose(s2.z, 2 * s1.z, atol=1e-14, rtol=0)
    np.testing.assert_allclose(s2.w, 2 * s1.w, atol=1e-14, rtol=0)


def test_frozen_coefficients_use_source(cube):
    m = make_mesh(0, 1, 101)
    t0 = shoot(cube, m, 0.0)
    t1 = shoot(cube, m, 0.5)
    frozen = shoot_sensitivity(cube, m, t1, t0)
    own = shoot_sensitivity(cube, m, t0, t0)
    assert np.array_equal(frozen.z, own.z)


def test_numeric_partials_in_sensitivity(cube, cube_nd):
    m = make_mesh(0, 1, 1001)
    tr = shoot(cube, m, 0.1)
    a = shoot_sensitivity(cube, m, tr, tr).z[-1]
    b = shoot_sensitivity(cube_nd, m, tr, tr).z[-1]
    assert a == pytest.approx(b, rel=1e-8)


def test_blowup_is_reported():
    spec = ProblemSpec(0, 1, 1, 1, "u^4")
    with pytest.raises(DivergenceError, match="diverged"):
        shoot(spec, make_mesh(0, 1, 101), 100.0)


def test_domain_error_reports_step():
    spec = ProblemSpec(0, 1, 1, 1, "sqrt(u)")
    with pytest.raises(ExprDomainError) as info:
        shoot(spec, make_mesh(0, 1, 11), -20.0)
    assert "step i=" in str(info.value)
    assert info.value.point is not None
