"""Time-optimal unitary control in the presence of an uncontrollable background Hamiltonian."""

from .algebra import orthonormal_basis, trace_inner, traceless_log, unitary_exp
from .continuation import newton_polish, solve_continuation, windfree_seed
from .errors import ZermeloError
from .fixedpoint import solve_fixedpoint, spin_half_closed_form
from .geodesic import control_at, covering_map_su2, evolve, sample_trajectory
from .geometry import finsler_norm, first_variation, journey_time
from .problem import ControlSolution, NavigationProblem, SolveOptions, spin_half_problem
from .verify import integrate_schrodinger, verify_solution

__version__ = "0.1.0"
