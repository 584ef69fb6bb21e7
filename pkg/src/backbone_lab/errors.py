"""Exception types shared across the package."""


class BackboneLabError(Exception):
    """Base class for every error raised by this package."""


class FormulaSyntaxError(BackboneLabError, ValueError):
    def __init__(self, message, position=None):
        self.position = position
        if position is not None:
            message = f"{message} (at offset {position})"
        super().__init__(message)


class EmptyFormulaError(FormulaSyntaxError):
    pass


class UnboundVariableError(BackboneLabError, KeyError):
    def __init__(self, name):
        self.name = name
        super().__init__(f"variable {name} is not bound")

    def __str__(self):
        return self.args[0]


class MachineFormatError(BackboneLabError, ValueError):
    """Malformed .tm file, machine description, or machine tag."""


class BudgetExceeded(BackboneLabError):
    """A configured resource budget ran out; the answer is unknown, not negative."""


class BruteLimitExceeded(BudgetExceeded):
    pass


class DomainMismatch(BackboneLabError, ValueError):
    pass


class NotABackbone(BackboneLabError):
    pass


class WrongFamily(BackboneLabError, ValueError):
    pass


class InconsistentOracle(BackboneLabError):
    pass


class NotComplementary(BackboneLabError):
    """The machine pair disagrees with the complementarity a gadget relies on."""
