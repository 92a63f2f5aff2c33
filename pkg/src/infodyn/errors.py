"""Exception hierarchy.

Identity and inequality violations are raised rather than warned about: the
relations being audited are exact, so a violation always points at a
numerical problem (resolution, box size, time step) or a bug.
"""


class InfodynError(Exception):
    pass


class GridError(InfodynError, ValueError):
    """Invalid grid construction or incompatible sampled data."""


class BoxOverflowError(InfodynError):
    """Too much probability near the edges of the periodic box."""


class ResolutionError(InfodynError):
    """A state is not resolved by the grid."""


class UnitarityError(InfodynError):
    """Norm drift beyond tolerance during time stepping."""


class NodalStateError(InfodynError):
    """A phase-dependent quantity was requested for a state with nodes."""


class InequalityViolation(InfodynError):
    def __init__(self, name, slack, tol):
        self.name, self.slack, self.tol = name, slack, tol
        super().__init__(f"inequality {name!r} violated: slack {slack:.3e} < -{tol:g}")


class IdentityViolation(InfodynError):
    def __init__(self, name, residual, tol):
        self.name, self.residual, self.tol = name, residual, tol
        super().__init__(f"identity {name!r} violated: |residual| {abs(residual):.3e} > {tol:g}")
