"""Three ways to solve F(x) = 0 with a slope correction x <- x - F(x)/m.

Newton updates the slope every step, Picard keeps a fixed one, and the
constant-slope method freezes F'(x0).  The error ratios show quadratic
versus linear convergence.
"""

from bvp_forge import ScalarMethod, ScalarProblem, empirical_orders, scalar_solve


def F(x):
    return x ** 3 - 2 * x - 5


def dF(x):
    return 3 * x ** 2 - 2


root = 2.0945514815423265

for method, problem in [
    (ScalarMethod.NEWTON, ScalarProblem(F, 2.5, dF)),
    (ScalarMethod.PICARD, ScalarProblem(F, 2.5, dF, m=10.0)),
    (ScalarMethod.CONSTANT_SLOPE, ScalarProblem(F, 2.5, dF)),
]:
    trace = scalar_solve(problem, method, tol=1e-13)
    errors = [abs(x - root) for x in trace.values if abs(x - root) > 1e-14]
    print(f"{method.value:>15}: {trace.iterations:2d} iterations, x = {trace.values[-1]:.16f}")
    print(f"{'':>15}  estimated orders {[round(float(o), 2) for o in empirical_orders(errors)][-3:]}")
