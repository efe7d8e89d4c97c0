"""Exception hierarchy.

Every error carries the CLI exit code it maps to: 2 for unreadable input,
3 for inputs that parse but violate a contract, 4 for solver failures.
"""


class CoverThermError(Exception):
    exit_code = 1

    def to_dict(self):
        return {"error": type(self).__name__, "message": str(self), "exit_code": self.exit_code}


class InputError(CoverThermError):
    exit_code = 2


class ConfigParseError(InputError):
    pass


class ParseError(InputError):
    pass


class ValidationError(CoverThermError, ValueError):
    exit_code = 3


class SolverError(CoverThermError, RuntimeError):
    exit_code = 4


# body_model
class DuplicateId(ValidationError):
    pass


class DanglingRelation(ValidationError):
    pass


class DisconnectedBody(ValidationError):
    pass


class InvalidGeometry(ValidationError):
    pass


class GridTooSmall(ValidationError):
    pass


class MissingJoint(ValidationError):
    pass


class GridMismatch(ValidationError):
    pass


# thermal_solver
class UnstableTimestep(ValidationError):
    pass


class NonFiniteValue(SolverError):
    pass


class NoConvergence(SolverError):
    pass


# radiometry
class NonPositiveTemperature(ValidationError):
    pass


class DegenerateNormalization(ValidationError):
    pass


class CameraBelowScene(ValidationError):
    pass


# recognizability
class MismatchedAppearance(ValidationError):
    pass


# geometry_transfer
class TooFewCorrespondences(ValidationError):
    pass


class DegenerateConfiguration(ValidationError):
    pass


class PointAtInfinity(ValidationError):
    pass


# pose_eval
class LengthMismatch(ValidationError):
    pass


class MissingTorsoJoint(ValidationError):
    pass


class DegenerateTorso(ValidationError):
    pass
