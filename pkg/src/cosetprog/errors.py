"""Exception types shared by all modules."""


class StructureError(ValueError):
    """Objects from incompatible groups were combined."""


class DomainError(ValueError):
    """A documented precondition of an operation was violated."""


class ResourceLimitError(RuntimeError):
    """An enumeration or search cap was exceeded."""


class InvariantError(RuntimeError):
    """A theorem-backed internal guarantee failed; this indicates a bug."""
