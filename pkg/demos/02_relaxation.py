"""Finite-difference relaxation for u'' = u^3, u(0) = 0.5, u(1) = 1.

Starting from the straight line between the boundary values, each step
solves a tridiagonal system for the correction.  The Newton variant
squares the residual each step; Picard shrinks it by a constant factor.
"""

from bvp_forge import RelaxConfig, builtin_problem, relax_solve

cube = builtin_problem("cube")

for variant in ("newton", "constant-slope", "picard"):
    rep = relax_solve(cube, RelaxConfig(variant=variant, N=1001, tol=1e-12))
    print(f"{variant}: converged={rep.converged} after {rep.iterations} iterations")
    for r in rep.trace:
        print(f"  k={r.k:2d}  slope={r.value:.12f}  max|G|={r.residual:.3e}")

print("\ndiagonal dominance check:", rep.dominance)
