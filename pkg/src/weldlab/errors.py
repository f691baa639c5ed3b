"""Exception hierarchy.

Validation problems (malformed signatures, bad instructions, schema errors)
derive from :class:`ValidationError`; failures of a mathematical
precondition (border length condition, non-exceptional components, solver
divergence) derive from :class:`MathError`. The CLI maps the two families to
different exit codes.
"""


class WeldlabError(Exception):
    pass


class ValidationError(WeldlabError, ValueError):
    pass


class SignatureError(ValidationError):
    pass


class InstructionError(ValidationError):
    pass


class MathError(WeldlabError):
    pass


class BLCViolated(MathError):
    def __init__(self, component, trajectory=None):
        self.component = component
        self.trajectory = trajectory
        msg = f"border length condition fails on component {component!r}"
        if trajectory is not None:
            msg += f" (trajectory of length {trajectory.length} exceeds half)"
        super().__init__(msg)


class NotExceptional(MathError):
    pass


class NotIShaped(MathError):
    pass


class ConvergenceError(MathError):
    pass


class InconsistentConstraints(MathError):
    pass
