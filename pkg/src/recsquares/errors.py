"""Exception types shared across the package."""


class DomainError(ValueError):
    """Input lies outside the domain where an operation is defined."""


class FactorizationError(ArithmeticError):
    """Factoring gave up before the residue was fully split."""

    def __init__(self, residue: int, partial: dict[int, int]):
        self.residue = residue
        self.partial = dict(partial)
        super().__init__(f"unfactored residue {residue}")
