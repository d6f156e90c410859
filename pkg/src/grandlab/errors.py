"""Error types shared across the package."""


class ContractError(ValueError):
    """An argument violated a documented precondition (dimension or range mismatch)."""


class MatrixParseError(ValueError):
    """A matrix file failed to parse; message carries the 1-based line number."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class CodeLoadError(ValueError):
    """A loaded code failed a structural invariant (rank, dimensions, or G·H^T)."""


class ConfigError(ValueError):
    """A run configuration value is out of range or inconsistent."""
