"""Nonempty finite sets in canonical form.

The quotient by associativity, commutativity and idempotence of union is
realized by keeping elements strictly sorted by their canonical
serialization, so the three laws hold as structural equalities. Element
types with no finite serialization (trees still holding suspensions)
fall back to insertion order with equality-based deduplication; for
those the quotient is recovered at observation depth instead.
"""

from __future__ import annotations

from functools import reduce
from typing import Callable, Iterable, Iterator

from ndlam.keys import canon_key, try_canon_key

__all__ = ["FinSet", "rel_lift"]


class FinSet:
    """Nonempty finite set; always deduplicated, sorted whenever possible."""

    __slots__ = ("items",)

    def __init__(self, items: Iterable):
        items = tuple(items)
        if not items:
            raise ValueError("FinSet must be nonempty")
        keys = [try_canon_key(x) for x in items]
        if all(k is not None for k in keys):
            by_key = dict(sorted(zip(keys, items), key=lambda pair: pair[0]))
            object.__setattr__(self, "items", tuple(by_key.values()))
        else:
            kept: list = []
            for x in items:
                if not any(x == y for y in kept):
                    kept.append(x)
            object.__setattr__(self, "items", tuple(kept))

    def __setattr__(self, name, value):
        raise AttributeError("FinSet is immutable")

    @classmethod
    def of(cls, *items) -> "FinSet":
        return cls(items)

    @classmethod
    def single(cls, a) -> "FinSet":
        return cls((a,))

    def union(self, other: "FinSet") -> "FinSet":
        return FinSet(self.items + other.items)

    def member(self, a) -> bool:
        return any(x == a for x in self.items)

    def fold(self, f: Callable, join: Callable):
        """Extend ``f`` along the free structure; ``join`` must be
        associative, commutative and idempotent on the image."""
        return reduce(join, (f(x) for x in self.items))

    def map(self, f: Callable) -> "FinSet":
        return FinSet(f(x) for x in self.items)

    def bind(self, f: Callable[..., "FinSet"]) -> "FinSet":
        out: list = []
        for x in self.items:
            out.extend(f(x).items)
        return FinSet(out)

    def canon_key(self) -> str:
        return "{" + ",".join(canon_key(x) for x in self.items) + "}"

    def __or__(self, other: "FinSet") -> "FinSet":
        return self.union(other)

    def __contains__(self, a) -> bool:
        return self.member(a)

    def __iter__(self) -> Iterator:
        return iter(self.items)

    def __len__(self) -> int:
        return len(self.items)

    def __eq__(self, other) -> bool:
        return isinstance(other, FinSet) and self.items == other.items

    def __hash__(self) -> int:
        return hash(self.items)

    def __repr__(self) -> str:
        return f"FinSet({list(self.items)!r})"

    def __str__(self) -> str:
        key = try_canon_key(self)
        return key if key is not None else "{" + ",".join(repr(x) for x in self.items) + "}"


def rel_lift(r: Callable, xs: FinSet, ys: FinSet) -> bool:
    """Relation lifting to sets: every element of ``ys`` has an r-related
    counterpart in ``xs``."""
    return all(any(r(a, b) for a in xs) for b in ys)
