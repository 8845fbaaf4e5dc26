"""Exception types shared across the package."""


class DimensionError(ValueError):
    """Operands have incompatible shapes."""


class DivergenceError(RuntimeError):
    """An iterative optimization produced a non-finite loss.

    Carries the step (or epoch) index at which the loss blew up.
    """

    def __init__(self, message, step):
        super().__init__(f"{message} (step {step})")
        self.step = step


class WeightFormatError(ValueError):
    """A weight document violates the serialization schema."""


class SpecValidationError(ValueError):
    """An experiment spec fails validation."""
