"""Exception types shared across the package."""


class OddRedError(Exception):
    """Base class for package errors."""


class InputError(OddRedError, ValueError):
    """Malformed or out-of-contract input."""


class SizeLimitError(OddRedError):
    """An exhaustive routine was asked to go beyond its desk-scale cap."""


class ValidityError(OddRedError):
    """A constraint is violated by one of the points it should be valid for."""

    def __init__(self, message, witness=None, index=None):
        super().__init__(message)
        self.witness = witness
        self.index = index


class CertificationError(OddRedError):
    """A facet certificate could not be produced; carries the achieved dimensions."""

    def __init__(self, message, polytope_dim=None, face_dim=None, rank=None):
        super().__init__(message)
        self.polytope_dim = polytope_dim
        self.face_dim = face_dim
        self.rank = rank
