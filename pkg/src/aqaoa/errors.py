"""Exception types shared across the package.

Two failure categories map onto the CLI exit codes: bad inputs/configuration
(exit 1) and numerical breakdowns during a run (exit 2).
"""


class ConfigError(ValueError):
    """Invalid user input: malformed problem files, bad parameters, bad CLI args."""


class NumericalError(RuntimeError):
    """A computation failed or left its validity envelope (norm drift, NaNs, no convergence)."""
