"""Linearization-based relaxation and shooting solvers for nonlinear two-point BVPs

    u''(x) = f(x, u, u'),   u(a) = u_a,  u(b) = u_b.
"""

from .errors import (BVPError, ConfigError, ConvergenceError, DivergenceError, ExprDomainError,
                     ParseError, SolverError)
from .expr import ExprAst, evaluate, parse_expr, to_source
from .ivp import Integrator, SensitivityPair, TrajectoryPair, shoot, shoot_sensitivity
from .linsys import (Linearization, LinearizationVariant, TridiagSystem, assemble, check_diag_dominance,
                     endpoint_rhs, thomas_solve)
from .mesh import DScheme, GridFunction, Mesh, dapply, dscheme_weights, make_mesh, nonlinear_residual
from .problem import (ProblemSpec, available_problems, builtin_problem, eval_f, eval_p, eval_q, load_problem,
                      problem_from_dict)
from .relaxation import RelaxConfig, RelaxReport, relax_solve, relax_step
from .scalar import (IterationTrace, ScalarMethod, ScalarProblem, empirical_orders, scalar_solve,
                     scalar_step)
from .shooting import (Path, RhsMode, ShootConfig, ShootMethod, ShootState, assemble_df_diagonal,
                       project_trajectory, spi_solve, spi_step_formula)

__version__ = "0.1.0"
