"""Exception types shared across the planner and harness."""


class PlannerError(Exception):
    """Base class for planning failures."""


class NoFeasibleWaypoint(PlannerError):
    """Every candidate on the sample surface is infeasible (outside the
    depth envelope or coincident with an obstacle sample point)."""


class TrappedError(PlannerError):
    """The escape maneuver has no clear direction left."""


class ScenarioError(ValueError):
    """A scenario file failed validation.

    ``problems`` lists one human-readable message per offending field.
    """

    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))
