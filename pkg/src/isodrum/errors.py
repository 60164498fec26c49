"""Exception types shared across the package."""


class BoundExceeded(Exception):
    """A configured resource bound (enumeration, index, search) was hit.

    Distinct from a negative answer: the computation was abandoned, not
    decided.
    """


class SpecFormatError(ValueError):
    """A spec file (group, triple, involution system, domain) failed to parse."""
