"""Guarded partiality trees: a value now, or a memoized suspension of more tree.

The one-step-later modality is a `Susp`: forcing is the only way to look
under a step, suspensions memoize so repeated observation is stable, and
no operation here forces further than asked. Observation is depth
bounded: `truncate` unrolls a fixed number of steps and replaces the
frontier by an opaque marker, so equality claims are always indexed by
an observation depth.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Any, Callable

from ndlam.keys import canon_key

__all__ = [
    "Susp",
    "Now",
    "Step",
    "DelayTree",
    "now",
    "step",
    "later",
    "bot",
    "fold",
    "bind",
    "mu",
    "map_tree",
    "run",
    "lift",
    "Converged",
    "Timeout",
    "TIMEOUT",
    "TNow",
    "TStep",
    "TLater",
    "truncate",
    "tree_equal",
]


class Susp:
    """Memoized thunk. Forcing twice yields the identical result."""

    __slots__ = ("_fn", "_value", "_forced", "_lock")

    def __init__(self, fn: Callable[[], Any]):
        self._fn = fn
        self._value = None
        self._forced = False
        self._lock = threading.Lock()

    @classmethod
    def of(cls, value) -> "Susp":
        s = cls(lambda: value)
        s.force()
        return s

    def force(self):
        if self._forced:
            return self._value
        value = self._fn()
        with self._lock:
            if not self._forced:
                self._value = value
                self._forced = True
                self._fn = None
        return self._value


@dataclass(frozen=True)
class Now:
    value: Any


@dataclass(frozen=True)
class Step:
    tail: Susp


DelayTree = Now | Step


def now(a) -> DelayTree:
    return Now(a)


def step(tail: Susp) -> DelayTree:
    return Step(tail)


def later(tree: DelayTree) -> DelayTree:
    """One explicit step in front of an already-built tree."""
    return Step(Susp.of(tree))


def bot() -> DelayTree:
    """The tree that steps forever."""
    return _BOT


_BOT = Step(Susp(lambda: _BOT))


# -------------------------------------------------------------- operations

def fold(on_now: Callable, on_step: Callable, tree: DelayTree):
    """Unique homomorphism into a delay algebra extending ``on_now``.

    ``on_step`` receives a suspension of the folded tail and must not
    force it eagerly; the two defining equations hold after one unfold:
    fold f d (now a) = f a and fold f d (step s) = d(suspended fold).
    """
    match tree:
        case Now(value=a):
            return on_now(a)
        case Step(tail=s):
            return on_step(Susp(lambda: fold(on_now, on_step, s.force())))
    raise TypeError(f"not a delay tree: {tree!r}")


def bind(tree: DelayTree, f: Callable[[Any], DelayTree]) -> DelayTree:
    match tree:
        case Now(value=a):
            return f(a)
        case Step(tail=s):
            return Step(Susp(lambda: bind(s.force(), f)))
    raise TypeError(f"not a delay tree: {tree!r}")


def mu(tree: DelayTree) -> DelayTree:
    """Flatten a tree of trees; the homomorphism extending the identity."""
    return fold(lambda inner: inner, Step, tree)


def map_tree(f: Callable, tree: DelayTree) -> DelayTree:
    return bind(tree, lambda a: Now(f(a)))


@dataclass(frozen=True)
class Converged:
    value: Any
    steps: int


@dataclass(frozen=True)
class Timeout:
    pass


TIMEOUT = Timeout()


def run(tree: DelayTree, budget: int):
    """Force at most ``budget`` steps; Converged(a, k) iff exactly k <= budget
    steps precede the value."""
    t, k = tree, 0
    while True:
        match t:
            case Now(value=a):
                return Converged(a, k)
            case Step(tail=s):
                if k >= budget:
                    return TIMEOUT
                t = s.force()
                k += 1


def lift(q: Callable[[Any, int], bool], tree: DelayTree, fuel: int) -> bool:
    """Fuel-indexed predicate lifting: a step consumes one unit of fuel and
    an exhausted budget counts as true, so divergence satisfies everything."""
    t, n = tree, fuel
    while True:
        match t:
            case Now(value=a):
                return bool(q(a, n))
            case Step(tail=s):
                if n == 0:
                    return True
                t = s.force()
                n -= 1


# ------------------------------------------------------------- observation

class _Trunc:
    __slots__ = ()

    def __str__(self) -> str:
        return self.canon_key()


@dataclass(frozen=True)
class TNow(_Trunc):
    value: Any

    def canon_key(self) -> str:
        return f"now({canon_key(self.value)})"


@dataclass(frozen=True)
class TStep(_Trunc):
    sub: "TNow | TStep | TLater"

    def canon_key(self) -> str:
        return f"step({self.sub.canon_key()})"


@dataclass(frozen=True)
class TLater(_Trunc):
    def canon_key(self) -> str:
        return "later"


def truncate(tree: DelayTree, depth: int):
    """Finite observation: unroll ``depth`` steps, mark the frontier opaque."""
    match tree:
        case Now(value=a):
            return TNow(a)
        case Step(tail=s):
            if depth == 0:
                return TLater()
            return TStep(truncate(s.force(), depth - 1))
    raise TypeError(f"not a delay tree: {tree!r}")


def tree_equal(t1: DelayTree, t2: DelayTree, depth: int) -> bool:
    """Depth-bounded structural equality of observations. Sound in the sense
    that truly equal trees are n-equal for every n."""
    return truncate(t1, depth) == truncate(t2, depth)
