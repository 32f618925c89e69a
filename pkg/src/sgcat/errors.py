"""Exception types shared by the library and mapped to CLI exit codes."""


class SgcatError(Exception):
    exit_code = 1


class InputError(SgcatError, ValueError):
    """Malformed or inconsistent input (exit code 3)."""

    exit_code = 3


class PreconditionError(InputError):
    """An operation's precondition fails; carries an optional certificate."""

    def __init__(self, msg, certificate=None):
        super().__init__(msg)
        self.certificate = certificate


class InvariantViolation(SgcatError, AssertionError):
    """An internal cross-check failed (exit code 4)."""

    exit_code = 4


class HorizonExceeded(SgcatError):
    """A search ran past its horizon; ``data`` holds diagnostics."""

    exit_code = 4

    def __init__(self, msg, data=None):
        super().__init__(msg)
        self.data = data


class ParseError(InputError):
    """A presentation file could not be parsed; ``line`` is 1-based."""

    def __init__(self, msg, line=None):
        super().__init__(f"line {line}: {msg}" if line else msg)
        self.line = line


class UnsupportedInput(InputError):
    """The input is valid but outside what the command handles."""
