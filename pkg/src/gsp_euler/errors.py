"""Exception hierarchy shared by the library and the command-line front end."""


class GSPError(Exception):
    """Base class for all errors raised by gsp_euler."""


class InputError(GSPError):
    """Malformed or inconsistent input (bad vertex, bad file, bad label set)."""


class TreeSyntaxError(InputError):
    """A decomposition tree string does not match the grammar."""

    def __init__(self, message, position):
        super().__init__(f"{message} at position {position}")
        self.position = position


class LegalityError(GSPError):
    """The tree is illegal, or its root is not Eulerian where that is required."""


class RecognitionError(GSPError):
    """The recognizer could not find a decomposition tree for a multigraph."""


class ArithmeticIntegrityError(GSPError):
    """A combination term that must be a non-negative integer was not one."""


class OracleBoundError(GSPError):
    """The brute-force oracle refuses graphs above its edge bound."""
