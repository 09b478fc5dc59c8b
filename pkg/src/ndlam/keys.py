"""Canonical serialization keys: the total order behind set canonicalization."""

from __future__ import annotations

__all__ = ["canon_key", "try_canon_key"]


def canon_key(x) -> str:
    """Canonical textual form of ``x``, used for ordering, hashing and JSON.

    Raises TypeError for values with no finite canonical form (anything
    still holding unforced suspensions).
    """
    method = getattr(x, "canon_key", None)
    if method is not None:
        return method()
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    if isinstance(x, str):
        return x
    raise TypeError(f"no canonical serialization for {type(x).__name__}")


def try_canon_key(x) -> str | None:
    try:
        return canon_key(x)
    except TypeError:
        return None
