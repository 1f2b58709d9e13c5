"""Exception types raised across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain where the quantity is defined."""


class ConvergenceError(RuntimeError):
    """An iterative solver did not meet its tolerance."""


class ConstructionError(RuntimeError):
    """Building the spectral curve failed at a specific regime/parameter."""

    def __init__(self, message, *, regime=None, param=None):
        super().__init__(message)
        self.regime = regime
        self.param = param

    def __str__(self):
        base = super().__str__()
        if self.regime is None:
            return base
        return f"{base} [regime={self.regime}, param={self.param!r}]"


def check_time(t, *, allow_four=False):
    """Validate a diffusion time and return it as a float.

    The curve construction only exists for ``0 < t < 4``; ``allow_four``
    admits the closed endpoint for the support parameters, which extend
    continuously to ``t = 4``.
    """
    t = float(t)
    upper_ok = t <= 4.0 if allow_four else t < 4.0
    if not (t > 0.0 and upper_ok):
        bound = "0 < t <= 4" if allow_four else "0 < t < 4"
        raise DomainError(f"time t={t!r} outside {bound}; the construction requires t < 4")
    return t
