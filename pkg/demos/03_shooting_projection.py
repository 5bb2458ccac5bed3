"""Shooting with slope correction on the cube problem.

Each shot integrates from the left end with a trial slope.  The miss
distance E at the right end is turned into a new slope either with a
closed-form update or by projecting the trajectory onto the boundary
values through the linearized problem.
"""

from bvp_forge import ShootConfig, builtin_problem, spi_solve

cube = builtin_problem("cube")

for method in ("newton", "constant-slope", "picard"):
    for path in ("formula", "projection"):
        state, trace = spi_solve(cube, ShootConfig(method=method, path=path, tol=1e-10))
        print(f"{method:>15} / {path:<10} {trace.iterations:2d} corrections, v_a = {state.v_a:.12f}")

state, trace = spi_solve(cube, ShootConfig(method="newton", tol=1e-3))
print("\nNewton trace at tol 1e-3:")
for r in trace:
    print(f"  k={r.k}  v_a={r.value:.15f}  E={r.residual:.15f}")
