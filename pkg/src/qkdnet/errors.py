"""Exception types shared across the package."""


class InvalidArgumentError(ValueError):
    """A caller-supplied argument violates a precondition."""


class CapacityError(RuntimeError):
    """A request exceeds the dense-simulation qubit or enumeration cap."""


class StateError(RuntimeError):
    """An operation was invoked in a protocol state that does not allow it."""
