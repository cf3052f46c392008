"""Exception types shared across the package."""


class BivirusError(Exception):
    """Base class for all package-specific errors."""


class InvalidParamsError(BivirusError, ValueError):
    """Raised when model parameters fail a hard validity check.

    Carries the full :class:`~bivirusgame.model.ValidationReport` in
    ``report`` so callers can inspect individual checks.
    """

    def __init__(self, report):
        self.report = report
        failed = ", ".join(c.name for c in report.errors)
        super().__init__(f"invalid model parameters: {failed}")


class StateSpaceError(BivirusError, ValueError):
    """Raised when a state lies outside the invariant region beyond slack."""


class NonFiniteStageError(BivirusError, ArithmeticError):
    """Raised when an intermediate Runge-Kutta stage is non-finite.

    ``stage`` is the 1-based index of the offending stage.
    """

    def __init__(self, stage, message=None):
        self.stage = stage
        super().__init__(message or f"non-finite value in Runge-Kutta stage {stage}")


class IntegrationError(BivirusError, RuntimeError):
    """Raised when an integration run fails; carries the failing time."""

    def __init__(self, time, stage=None):
        self.time = time
        self.stage = stage
        detail = f" (stage {stage})" if stage else ""
        super().__init__(f"integration failed at t={time:.6g}{detail}")


class DegenerateRiskRatioError(BivirusError, ValueError):
    """Raised when a mixed-distancing coexistence line is evaluated with r1 == r2.

    The line's parameter bounds divide by (1 - r1/r2); with equal perceived
    risk factors the construction is degenerate and no point can be built.
    """


class LineRangeError(BivirusError, ValueError):
    """Raised when a line is evaluated outside its parameter range."""

    def __init__(self, y1, lo, hi):
        self.y1 = y1
        self.bounds = (lo, hi)
        super().__init__(f"y1={y1:.6g} outside line parameter range [{lo:.6g}, {hi:.6g}]")


class ConfigError(BivirusError, ValueError):
    """Raised on malformed configuration files; carries line number and key."""

    def __init__(self, message, line_no=None, key=None):
        self.line_no = line_no
        self.key = key
        where = f" (line {line_no})" if line_no is not None else ""
        super().__init__(f"{message}{where}")
