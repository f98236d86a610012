"""Exception hierarchy shared by the library and the command line."""


class SinrError(Exception):
    """Base class for all errors raised by sinrconn."""


class PreconditionError(SinrError, ValueError):
    """An input violates an operation's precondition."""


class InfeasibleError(SinrError):
    """A slot that was supposed to be SINR-feasible is not."""


class SchemaError(SinrError, ValueError):
    """A serialized document does not match the expected layout."""
