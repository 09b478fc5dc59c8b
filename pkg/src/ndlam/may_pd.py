"""May-convergence trees: finite sets of settled values and suspended subtrees.

A tree is a nonempty collection whose members are either values available
now or whole subtrees available one step later, so converging and
diverging branches coexist and any branch can be probed without waiting
for its siblings. Settled values are deduplicated eagerly; suspended
branches can only be compared at an observation depth, so their share of
the set quotient is re-established by `truncate`, which keys every branch
by its serialized finite observation.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Any, Callable

from ndlam.delay import Susp
from ndlam.keys import canon_key

__all__ = [
    "Leaf",
    "Later",
    "MayTree",
    "now",
    "step",
    "later",
    "bot",
    "union",
    "fold",
    "bind",
    "map_tree",
    "lift",
    "reach",
    "leaf_occurrences",
    "reachable_values",
    "TSet",
    "TLeaf",
    "TSub",
    "TFrontier",
    "truncate",
    "tree_equal",
]


@dataclass(frozen=True)
class Leaf:
    value: Any


@dataclass(frozen=True)
class Later:
    tail: Susp


class MayTree:
    __slots__ = ("entries",)

    def __init__(self, entries: tuple):
        if not entries:
            raise ValueError("MayTree must be nonempty")
        self.entries = entries

    def __repr__(self) -> str:
        return f"MayTree({self.entries!r})"


def now(a) -> MayTree:
    return MayTree((Leaf(a),))


def step(tail: Susp) -> MayTree:
    return MayTree((Later(tail),))


def later(tree: MayTree) -> MayTree:
    return step(Susp.of(tree))


def bot() -> MayTree:
    """The tree whose only branch suspends forever."""
    return _BOT


_BOT = MayTree((Later(Susp(lambda: _BOT)),))


def _dedup(entries: tuple) -> tuple:
    # Settled values merge eagerly; suspended branches only when they are
    # literally the same suspension (full dedup happens at truncation).
    out: list = []
    seen_values: set = set()
    seen_susps: set[int] = set()
    for e in entries:
        if isinstance(e, Leaf):
            if e.value not in seen_values:
                seen_values.add(e.value)
                out.append(e)
        else:
            if id(e.tail) not in seen_susps:
                seen_susps.add(id(e.tail))
                out.append(e)
    return tuple(out)


def union(t1: MayTree, t2: MayTree) -> MayTree:
    return MayTree(_dedup(t1.entries + t2.entries))


def fold(f: Callable, join: Callable, delta: Callable, tree: MayTree):
    """Unique extension of ``f`` commuting with union (via ``join``) and with
    the step structure (via ``delta``, which receives a suspension of the
    folded tail and must not force it eagerly)."""
    parts = []
    for e in tree.entries:
        if isinstance(e, Leaf):
            parts.append(f(e.value))
        else:
            tail = e.tail
            parts.append(delta(Susp(lambda tail=tail: fold(f, join, delta, tail.force()))))
    return reduce(join, parts)


def bind(tree: MayTree, f: Callable[[Any], MayTree]) -> MayTree:
    """Settled values continue into ``f``; suspended branches bind later,
    and unions distribute."""
    trees = []
    for e in tree.entries:
        if isinstance(e, Leaf):
            trees.append(f(e.value))
        else:
            tail = e.tail
            trees.append(MayTree((Later(Susp(lambda tail=tail: bind(tail.force(), f))),)))
    return reduce(union, trees)


def map_tree(f: Callable, tree: MayTree) -> MayTree:
    return bind(tree, lambda a: now(f(a)))


def lift(q: Callable[[Any, int], bool], tree: MayTree, fuel: int) -> bool:
    """Fuel-indexed predicate lifting, built with `fold`: settled values are
    tested with the remaining fuel, union is conjunction, and a suspended
    branch at fuel 0 counts as true."""
    prop = fold(
        lambda a: (lambda n: bool(q(a, n))),
        lambda p1, p2: (lambda n: p1(n) and p2(n)),
        lambda s: (lambda n: True if n == 0 else s.force()(n - 1)),
        tree,
    )
    return prop(fuel)


def reach(tree: MayTree, a, depth: int) -> bool:
    """Is ``a`` a settled value within ``depth`` forced suspensions? Union
    structure is traversed freely; only suspensions consume depth."""
    for e in tree.entries:
        if isinstance(e, Leaf):
            if e.value == a:
                return True
        elif depth > 0 and reach(e.tail.force(), a, depth - 1):
            return True
    return False


def leaf_occurrences(tree: MayTree, depth: int) -> list[tuple[Any, int]]:
    """All (value, suspension distance) pairs observable within ``depth``."""
    out: list[tuple[Any, int]] = []

    def go(t: MayTree, d: int) -> None:
        for e in t.entries:
            if isinstance(e, Leaf):
                out.append((e.value, d))
            elif d < depth:
                go(e.tail.force(), d + 1)

    go(tree, 0)
    return out


def reachable_values(tree: MayTree, depth: int) -> tuple:
    """Deduplicated settled values within ``depth``, in canonical order.
    May be empty (a tree can suspend forever). Monotone in ``depth``."""
    values = {canon_key(v): v for v, _ in leaf_occurrences(tree, depth)}
    return tuple(values[k] for k in sorted(values))


# ------------------------------------------------------------- observation

class _Trunc:
    __slots__ = ()

    def __str__(self) -> str:
        return self.canon_key()


@dataclass(frozen=True)
class TLeaf(_Trunc):
    value: Any

    def canon_key(self) -> str:
        return f"leaf({canon_key(self.value)})"


@dataclass(frozen=True)
class TSub(_Trunc):
    sub: "TSet"

    def canon_key(self) -> str:
        return f"later({self.sub.canon_key()})"


@dataclass(frozen=True)
class TFrontier(_Trunc):
    def canon_key(self) -> str:
        return "later(?)"


@dataclass(frozen=True)
class TSet(_Trunc):
    entries: tuple

    def canon_key(self) -> str:
        return "{" + ",".join(e.canon_key() for e in self.entries) + "}"


def truncate(tree: MayTree, depth: int) -> TSet:
    """Observe ``depth`` suspension levels; the frontier becomes a single
    opaque marker and every set level is canonicalized bottom-up by the
    serialization of its members."""
    entries = []
    for e in tree.entries:
        if isinstance(e, Leaf):
            entries.append(TLeaf(e.value))
        elif depth == 0:
            entries.append(TFrontier())
        else:
            entries.append(TSub(truncate(e.tail.force(), depth - 1)))
    by_key = dict(sorted(((e.canon_key(), e) for e in entries), key=lambda p: p[0]))
    return TSet(tuple(by_key.values()))


def tree_equal(t1: MayTree, t2: MayTree, depth: int) -> bool:
    return truncate(t1, depth) == truncate(t2, depth)
