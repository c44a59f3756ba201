"""Exception types shared across the package."""


class ConfigError(ValueError):
    """Invalid configuration file or option combination."""


class DataError(ValueError):
    """Malformed or physically invalid input data (files, spectra, records)."""


class SingularChannelError(ValueError):
    """The device model has zero impedance at an excited tone."""


class ConvergenceError(RuntimeError):
    """A solver hit its iteration cap before reaching tolerance.

    Carries the best iterate found so far in ``best_x``.
    """

    def __init__(self, message, best_x=None):
        super().__init__(message)
        self.best_x = best_x
