"""
Error types for the dimred toolkit

Every failure raised by the library derives from DimRedError so the command
line front end can map it onto an exit code in one place.
"""


class DimRedError(Exception):
    """Base class for all library errors"""


class EmptyInput(DimRedError, ValueError):
    pass


class NotInNerve(DimRedError, KeyError):
    """An index tuple whose distinct vertices do not span a simplex"""

    def __init__(self, indices):
        self.indices = tuple(indices)
        super().__init__(f"indices {self.indices} do not span a simplex of the nerve")

    def __str__(self):
        return self.args[0]


class LengthMismatch(DimRedError, ValueError):
    pass


class DegreeMismatch(DimRedError, ValueError):
    pass


class DegreeOutOfRange(DimRedError, ValueError):
    pass


class NotClosed(DimRedError):
    """A twist that fails the cocycle condition on some 3-simplex"""

    def __init__(self, simplex, component, value):
        self.simplex = tuple(simplex)
        self.component = component
        self.value = value
        super().__init__(
            f"twist is not closed: dF{self.simplex}[{component}] = {value}"
        )


class NotCoboundary(DimRedError):
    """Raised when d x = z has no solution over the requested scalar"""

    def __init__(self, residue, message=None):
        # residue: list of (position, remainder, invariant factor)
        self.residue = list(residue)
        super().__init__(message or f"not a coboundary, residue {self.residue}")


class NotACocycle(DimRedError):
    pass


class NotSES(DimRedError):
    pass


class IndexOutOfRange(DimRedError, IndexError):
    pass


class CellUndefined(DimRedError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else "cell undefined"


class TooLarge(DimRedError):
    pass


class NonInteger(DimRedError, ValueError):
    def __init__(self, value, message=None):
        self.value = value
        super().__init__(message or f"expected an integer value, got {value}")


class GroupoidAxiomError(DimRedError, ValueError):
    pass


class UnknownExample(DimRedError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else "unknown example"


class InvalidInstance(DimRedError, ValueError):
    pass


class InapplicableCheck(DimRedError, ValueError):
    pass


class ConfigError(DimRedError, ValueError):
    pass
