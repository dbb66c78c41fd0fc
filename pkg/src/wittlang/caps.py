import os

from .errors import ResourceError

DEFAULT_CAP = 2**20


def global_cap() -> int:
    """Size cap for exhaustive scans; ``WITTLANG_CAP`` overrides the default."""
    raw = os.environ.get("WITTLANG_CAP")
    if raw is None:
        return DEFAULT_CAP
    cap = int(raw)
    if cap <= 0:
        raise ValueError(f"WITTLANG_CAP must be positive, got {cap}")
    return cap


def require_within(size: int, cap: int | None = None, what: str = "enumeration") -> None:
    limit = global_cap() if cap is None else cap
    if size > limit:
        raise ResourceError(f"{what} of size {size} exceeds cap {limit}")
