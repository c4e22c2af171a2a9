"""
Exception hierarchy shared by the library and the command line front end.

Every exception carries the process exit code the CLI uses when the
exception escapes a command.
"""


class StarkError(Exception):
    """Base class for all starkrankin errors"""

    exit_code = 1

    def __init__(self, description=None, **details):
        super().__init__(description)
        self.description = description
        self.details = details

    def __str__(self):
        return self.description or self.__class__.__name__


class DomainError(StarkError, ValueError):
    """An operation was called outside its precondition"""


class ResourceError(StarkError):
    """A configured size bound was exceeded"""


class TruncationError(StarkError):
    """A q-expansion operation fell below the minimum truncation"""


class PrecisionError(StarkError):
    """A p-adic computation cannot be carried out at the requested precision"""


class NoSquareRootError(PrecisionError):
    """The radicand has no square root in Q_p"""


class ResamplingExhausted(StarkError):
    """Every attempt at drawing pole-free sample points failed"""


class IdentityFailure(StarkError):
    """An identity that must hold exactly did not"""

    exit_code = 2


class DegenerateError(StarkError):
    """A fudge factor or Euler factor vanishes for the given scenario"""

    exit_code = 3

    def __init__(self, description=None, factor=None, **details):
        super().__init__(description, **details)
        self.factor = factor


class ScenarioError(StarkError):
    """A scenario document failed validation"""

    exit_code = 4
