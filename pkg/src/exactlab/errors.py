"""
Exception hierarchy shared by the workbench
"""


class ExactLabError(Exception):
    """Base error"""


class ContractViolation(ExactLabError):
    """A caller broke a precondition (shapes, endpoints, side markers)"""


class AlgebraSpecError(ExactLabError):
    """Algebra or seed specification is invalid

    Each violation is a (message, line) pair; line is None when the violation
    does not come from a file.
    """

    def __init__(self, violations: list[tuple[str, int | None]]):
        self.violations = list(violations)
        super().__init__("; ".join(self.describe()))

    def describe(self) -> list[str]:
        lines = []
        for message, line in self.violations:
            lines.append(f"line {line}: {message}" if line is not None else message)
        return lines


class OutOfUniverseError(ExactLabError):
    """A construction produced an object outside the bounded universe"""

    def __init__(self, message: str, multiplicities: tuple[int, ...] | None = None):
        self.multiplicities = multiplicities
        if multiplicities is not None:
            message = f"{message} (multiplicity vector {list(multiplicities)})"
        super().__init__(message)


class InconclusiveError(ExactLabError):
    """An enumeration would exceed its cap"""

    def __init__(self, message: str, cap: int, cell: str | None = None):
        self.cap = cap
        self.cell = cell
        super().__init__(f"{message} (undecidable at cap {cap})")


class NotExtensionClosedError(ExactLabError):
    """A candidate subcategory misses the middle term of a conflation"""

    def __init__(self, message: str, witness: dict):
        self.witness = witness
        super().__init__(message)


class UnsupportedAlgebraError(ExactLabError):
    """Input lies outside the supported class of rings"""
