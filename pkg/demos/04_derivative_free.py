"""Newton shooting without df/du.

For u'' = f(u) the Jacobian diagonal can be read off the shooting
trajectory's own slopes, -(v[i-1] + v[i+1]) / v[i].  The answer differs
from the analytic-Jacobian update by an amount proportional to h.
"""

from bvp_forge import ShootConfig, ShootState, builtin_problem, make_mesh, shoot
from bvp_forge.shooting import assemble_df_diagonal, project_trajectory, spi_solve, spi_step_formula

cube = builtin_problem("cube")
blind = builtin_problem("cube-no-derivs")

state, trace = spi_solve(blind, ShootConfig(method="newton-df", tol=1e-3))
for r in trace:
    print(f"k={r.k}  v_a={r.value:.15f}  E={r.residual:.15f}")

print("\nfirst-step gap between analytic and derivative-free updates:")
for N in (251, 501, 1001, 2001):
    mesh = make_mesh(0, 1, N)
    traj = shoot(cube, mesh, 0.0)
    E = float(traj.u[-1] - cube.u_b)
    vf = spi_step_formula(cube, ShootConfig(N=N), ShootState(0, 0.0, traj, E))
    vd = project_trajectory(blind, ShootConfig(method="newton-df", N=N), ShootState(0, 0.0, traj, E))
    gap = abs(vf - vd.initial_slope())
    print(f"  h={mesh.h:.5f}  gap={gap:.4e}  gap/h={gap / mesh.h:.5f}")

diag = assemble_df_diagonal(traj.v)
print(f"\nrecovered diagonal range at h={mesh.h:g}: [{diag[1:-1].min():.9f}, {diag[1:-1].max():.9f}]")
