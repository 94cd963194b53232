"""Exception types shared across the package.

The CLI maps them onto exit codes: parse errors to 2, domain violations
to 3, resource limits to 4.
"""


class DQSimError(Exception):
    exit_code = 1


class DomainError(DQSimError, ValueError):
    """Input violates a mathematical precondition (wrong arity, bad wire, ...)."""

    exit_code = 3


class ResourceLimitError(DQSimError):
    """Requested register exceeds a dense-representation limit."""

    exit_code = 4


class ParseError(DQSimError, ValueError):
    exit_code = 2

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f" at line {line}" + (f", column {column}" if column is not None else "")
        super().__init__(f"parse error{where}: {message}")
