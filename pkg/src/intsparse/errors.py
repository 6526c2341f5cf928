"""Exception hierarchy shared by every module."""


class DimensionError(ValueError):
    """Operand shapes do not fit the operation."""


class RankError(ValueError):
    """A matrix that must have full rank does not."""


class PreconditionError(ValueError):
    """An input violates a documented precondition."""


class CertificateError(PreconditionError):
    """A sensing-matrix certificate is missing, failing or contradicted."""


class ResourceCapError(RuntimeError):
    """An enumeration would exceed its configured cap."""
