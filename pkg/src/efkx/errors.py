"""Exception types shared across the package."""


class InputError(ValueError):
    """Raised when a caller violates a documented precondition."""


class CapabilityError(RuntimeError):
    """Raised when a request exceeds a configured enumeration budget."""


class ConstructionError(RuntimeError):
    """Raised when a gadget construction cannot produce valid parameters."""
