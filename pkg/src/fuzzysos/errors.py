"""Exception types raised across the package."""


class FuzzySosError(Exception):
    """Base class for all package errors."""


class EmptyAggregate(FuzzySosError):
    """No rule fired, or the aggregated output shape has zero area."""


class RuleFileError(FuzzySosError):
    """Base class for rule-file validation failures."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ParseError(RuleFileError):
    pass


class DuplicateRule(RuleFileError):
    pass


class IncompleteTable(RuleFileError):
    def __init__(self, missing):
        self.missing = list(missing)
        first = ",".join(t.label for t in self.missing[0])
        super().__init__(
            f"incomplete table: {len(self.missing)} antecedent(s) missing, first missing ({first})"
        )


class InfeasibleBudget(FuzzySosError):
    pass


class ZeroWeightSum(FuzzySosError):
    pass


class ScenarioError(FuzzySosError):
    """Invalid scenario; ``path`` names the offending field."""

    def __init__(self, path, message):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)
