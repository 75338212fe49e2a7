"""Exception types shared across the package."""


class FDFVError(Exception):
    """Base class for all package errors."""


class UnknownStencilError(FDFVError):
    """Raised when a stencil identifier is not in the catalog."""

    def __init__(self, name, valid):
        self.name = name
        self.valid = tuple(valid)
        super().__init__(
            f"unknown stencil {name!r}; valid identifiers: {', '.join(self.valid)}"
        )


class WindowError(FDFVError):
    """A stencil was applied to a window that is missing required entries.

    The caller is responsible for boundary closures; reaching this error
    from a solver indicates a closure bug.
    """


class IllPosedClosureError(FDFVError):
    """A Neumann boundary solve has a zero coefficient on the unknown."""


class InvalidStateError(FDFVError):
    """A physical state is inadmissible (e.g. non-positive density/pressure)."""

    def __init__(self, message, where=None):
        self.where = where
        if where is not None:
            message = f"{message} (at index {where})"
        super().__init__(message)


class BlowUpError(FDFVError):
    """Non-finite values appeared during time stepping."""

    def __init__(self, stage, step=None, time=None):
        self.stage = stage
        self.step = step
        self.time = time
        msg = f"non-finite state after stage {stage}"
        if step is not None:
            msg += f" of step {step}"
        if time is not None:
            msg += f" (t = {time:.6g})"
        super().__init__(msg)


class ValidationError(FDFVError):
    """Invalid configuration or arguments (CLI exit code 2)."""
