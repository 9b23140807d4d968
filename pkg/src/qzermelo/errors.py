"""Exception hierarchy.

Every error carries a short machine-readable ``code`` that the CLI copies into
its JSON error objects.
"""

from __future__ import annotations


class ZermeloError(Exception):
    code = "error"

    def to_json(self) -> dict[str, str]:
        return {"code": self.code, "message": str(self)}


class InputError(ZermeloError):
    """Malformed or inconsistent input data."""

    code = "invalid_input"


class NotHermitian(InputError):
    code = "not_hermitian"


class NotUnitary(InputError):
    code = "not_unitary"


class DimensionMismatch(InputError):
    code = "dimension_mismatch"


class NotTraceless(InputError):
    code = "not_traceless"


class WindTooStrong(InputError):
    code = "wind_too_strong"


class EndpointViolation(InputError):
    code = "endpoint_violation"


class SolverError(ZermeloError):
    code = "solver_failure"


class EigensolverFailure(SolverError):
    code = "eigensolver_failure"


class BranchAmbiguity(SolverError):
    """Logarithm branch is not unique (an eigenphase sits at +-pi)."""

    code = "branch_ambiguity"

    def __init__(self, message: str, T: float | None = None):
        super().__init__(message)
        self.T = T


class IdentityTarget(ZermeloError):
    """Target already reached: ``U_F == U_I`` so the optimal time is zero."""

    code = "identity_target"


class SingularSystem(SolverError):
    code = "singular_system"

    def __init__(self, message: str, lam: float | None = None, condition: float | None = None):
        super().__init__(message)
        self.lam = lam
        self.condition = condition


class NoConvergence(SolverError):
    code = "no_convergence"


class NoRoot(SolverError):
    code = "no_root"
