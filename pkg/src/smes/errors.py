"""Exception hierarchy shared by the library and the command line."""


class SmesError(Exception):
    """Base class for every error raised by this package."""


class ConfigError(SmesError, ValueError):
    """Invalid parameters, configuration documents or dimensions."""


class DimensionError(ConfigError):
    pass


class BlowUpError(SmesError, ArithmeticError):
    """A state component became non-finite or exceeded the blow-up threshold."""

    def __init__(self, step, method="", detail=""):
        self.step = step
        self.method = method
        msg = f"numerical blow-up at step {step}"
        if method:
            msg = f"{method}: {msg}"
        if detail:
            msg = f"{msg} ({detail})"
        super().__init__(msg)


class StabilityError(SmesError, ValueError):
    """Eigenvalues or step parameters outside the domain of a stability rule."""


class SeparationError(SmesError, ValueError):
    """The spectrum cannot be split into the requested slow/fast classes."""


class ConvergenceError(SmesError, ArithmeticError):
    pass


class UnsupportedSizeError(SmesError, ValueError):
    pass
