"""
Exception hierarchy for conecalc.

The CLI maps these onto exit codes: parse and lookup problems are usage
errors (2), range and grading problems are domain errors (3), and a broken
internal identity counts as a failed check (1).
"""


class ConecalcError(Exception):
    """Base class for every error raised by conecalc."""


class DomainError(ConecalcError, ValueError):
    """A parameter lies outside the range a construction accepts."""


class GradingError(ConecalcError, ValueError):
    """A class is inhomogeneous or has the wrong codimension."""


class GeneratorMismatchError(ConecalcError, ValueError):
    """Two formal sums live over different generator sets."""


class ParseError(ConecalcError, ValueError):
    """Syntax error in a class expression.

    Attributes:
        offset: Byte offset into the input where the problem was detected
    """

    def __init__(self, message: str, offset: int = 0):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class ConeError(ConecalcError, ValueError):
    """Degenerate or mismatched cone input."""


class NonPointedConeError(ConeError):
    """The cone contains a line."""


class NotFullDimensionalError(ConeError):
    """The rays do not span the ambient space."""


class SingularPairingError(ConecalcError, ArithmeticError):
    """A duality solve met a singular pairing matrix."""


class UnknownCaseError(ConecalcError, KeyError):
    """No catalog record has the requested id."""

    def __str__(self) -> str:
        return str(self.args[0]) if self.args else "unknown case"


class InvariantError(ConecalcError, ArithmeticError):
    """A computed quantity contradicts an identity a construction relies on."""
