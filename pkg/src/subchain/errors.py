"""Exception types shared across the package.

Each failure class the CLI distinguishes maps to one exception; the CLI turns
them into distinct exit codes.
"""


class SubchainError(Exception):
    """Base class for all errors raised by this package."""


class UnstableError(SubchainError, ValueError):
    """Some station has arrival rate >= service capacity.

    ``vnf_index`` names the first bottleneck stage when known.
    """

    def __init__(self, message, vnf_index=None):
        super().__init__(message)
        self.vnf_index = vnf_index


class InfeasibleError(SubchainError):
    """No subchain count satisfies the delay SLA (not even l = 1)."""


class DivergedError(SubchainError):
    """A simulated queue grew past its configured length bound."""


class ScenarioError(SubchainError):
    """Problem with a scenario file. Carries the offending line when known."""

    def __init__(self, message, path=None, line=None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where = str(path)
            if line is not None:
                where += f":{line}"
            where += ": "
        super().__init__(where + message)
        self.detail = message


class ScenarioParseError(ScenarioError):
    """The file is not well-formed."""


class ScenarioValidationError(ScenarioError):
    """The file parses but violates a model invariant."""
