"""Exception types shared across the package."""


class EffiterError(Exception):
    pass


class VarietyMismatch(EffiterError, ValueError):
    """Two algebras, laws or coalgebras live in different varieties or functors."""


class UnsupportedInstance(EffiterError, ValueError):
    """No builtin construction exists for the requested (variety, shape, backend)."""


class InfiniteCarrierError(EffiterError, ValueError):
    """An operation needs to enumerate a carrier that is infinite and unbounded."""


class InvalidAlgebra(EffiterError, ValueError):
    """Operation tables violate the equations of the variety."""


class NonMonotoneError(EffiterError, ValueError):
    pass


class ParseError(EffiterError, ValueError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        super().__init__(f"{line}:{column}: {message}" if line else message)
        self.line = line
        self.column = column
        self.message = message
