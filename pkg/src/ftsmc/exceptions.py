"""Exception types raised across the toolkit."""

from __future__ import annotations


class FTSMCError(Exception):
    """Base class for every error raised by :mod:`ftsmc`."""


class DomainError(FTSMCError, ValueError):
    """An argument lies outside the domain of a function."""


class InfeasibleStateError(DomainError):
    """The state sits on or outside the performance envelope."""


class BracketError(FTSMCError, ValueError):
    """A root-finding bracket contains no sign change."""


class ConvergenceError(FTSMCError, RuntimeError):
    """An iterative method ran out of iterations."""


class InfeasibleGainError(FTSMCError, ValueError):
    """Gains do not dominate the disturbance bound a formula requires."""


class NumericDivergenceError(FTSMCError, FloatingPointError):
    def __init__(self, message: str, time: float):
        super().__init__(message)
        self.time = time


class ConfigError(FTSMCError, ValueError):
    def __init__(self, message: str, key: str | None = None, line: int | None = None):
        where = ""
        if key is not None:
            where = f"[{key}]"
            if line is not None:
                where += f" (line {line})"
            where += ": "
        super().__init__(where + message)
        self.key = key
        self.line = line
