class ConfigError(ValueError):
    """Bad run configuration; ``line`` is 1-based when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class BlowUpError(RuntimeError):
    def __init__(self, time: float, partial=None):
        self.time = time
        self.partial = partial
        super().__init__(f"non-finite vorticity detected at t={time:.6g}")


class AnalysisPreconditionError(ValueError):
    pass
