"""Error types shared across the package."""


class UnknownCmd(KeyError):
    """The oracle has no program for a command id."""


class UnboundVar(ValueError):
    """A program referenced a variable with no earlier Read binding."""


class DisjointnessViolation(ValueError):
    """A command wrote to one of its own inputs."""

    def __init__(self, cmd: str, name: str):
        super().__init__(f"command {cmd!r} writes to its own input {name!r}")
        self.cmd = cmd
        self.name = name


class BuildTooLarge(ValueError):
    """Permutation enumeration requested for a build longer than 6 commands."""


class GenerationExhausted(RuntimeError):
    """Instance generation failed to satisfy the preconditions within bounds."""
