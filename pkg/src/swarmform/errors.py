"""Exception types shared across the package."""


class SwarmError(Exception):
    """Base class for all package errors."""


class InvalidArgument(SwarmError, ValueError):
    pass


class DegenerateInput(SwarmError, ValueError):
    pass


class PoleError(SwarmError, ZeroDivisionError):
    """A point sits on (or too close to) the pole of a mapping."""

    def __init__(self, message, agent_id=None):
        super().__init__(message)
        self.agent_id = agent_id


class NumericDivergence(SwarmError, ArithmeticError):
    def __init__(self, tick):
        super().__init__(f"non-finite state detected at tick {tick}")
        self.tick = tick


class ConfigError(SwarmError, ValueError):
    pass
