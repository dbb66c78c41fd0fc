"""Exception hierarchy shared by all wittlang modules."""


class WittlangError(Exception):
    pass


class SpecError(WittlangError, ValueError):
    """Operands do not share a field, shape or truncation level."""


class DomainError(WittlangError, ValueError):
    """Argument outside the mathematical domain of the operation."""


class ResourceError(WittlangError):
    """An enumeration would exceed the configured size cap."""


class VerificationError(WittlangError):
    """Two independent computations of the same quantity disagree."""


class ModulusError(WittlangError):
    """A field modulus has no root where field theory guarantees one."""


class LiftError(WittlangError):
    """No preimage exists over the current work field; enlarge it."""
