"""Must-convergence trees: delay trees carrying finite sets of values.

A computation is a (possibly infinite) sequence of steps followed by the
set of values every branch settled on, so nothing is observable until all
branches converge. Union evaluates branches in parallel: two steps merge
into one, a step absorbs a settled side unchanged, and two settled sides
merge their sets, which makes the step count of a union the maximum of
the branch step counts. The induced bind keeps both unit laws and
commutes with steps on the nose, but because parallel union takes the
max of step counts while sequencing adds them, it distributes over
union only up to step counts (`weakly_equal`) and is not associative;
`find_assoc_counterexample` locates a small witness by exhaustive search.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import reduce
from typing import Any, Callable, Iterable

from ndlam import delay
from ndlam.delay import DelayTree, Now, Step, Susp
from ndlam.finset import FinSet

__all__ = [
    "MustTree",
    "now",
    "step",
    "later",
    "bot",
    "union",
    "zeta",
    "bind",
    "weakly_equal",
    "map_values",
    "run",
    "truncate",
    "tree_equal",
    "DiagramInstance",
    "check_zeta_diagrams",
    "zeta_mult_counterexample",
    "SimpleTree",
    "AssocWitness",
    "find_assoc_counterexample",
    "witness_to_trees",
    "witness_violates_associativity",
]

MustTree = DelayTree  # with FinSet payloads at the leaves


def now(a) -> MustTree:
    return Now(FinSet.single(a))


def step(tail: Susp) -> MustTree:
    return Step(tail)


def later(tree: MustTree) -> MustTree:
    return delay.later(tree)


def bot() -> MustTree:
    return delay.bot()


def union(t1: MustTree, t2: MustTree) -> MustTree:
    """Parallel union; one-step lookahead only, never forcing more than one
    level per step produced."""
    match (t1, t2):
        case (Now(value=x), Now(value=y)):
            return Now(x.union(y))
        case (Step(tail=s), Step(tail=r)):
            return Step(Susp(lambda: union(s.force(), r.force())))
        case (Step(tail=s), Now()):
            return Step(Susp(lambda: union(s.force(), t2)))
        case (Now(), Step(tail=r)):
            return Step(Susp(lambda: union(t1, r.force())))
    raise TypeError(f"not must trees: {t1!r}, {t2!r}")


def zeta(branches: Iterable[DelayTree]) -> MustTree:
    """Merge a set of delay trees into one delay tree of sets: wrap every
    branch value in a singleton set, then union the branches in parallel.
    The resulting step count is the maximum of the branch step counts."""
    mapped = [delay.map_tree(FinSet.single, x) for x in branches]
    if not mapped:
        raise ValueError("zeta needs a nonempty collection of branches")
    return reduce(union, mapped)


def bind(tree: MustTree, f: Callable[[Any], MustTree]) -> MustTree:
    """Sequencing: once the set of results settles, run ``f`` on every member
    and union the continuations. Both unit laws hold and bind commutes
    with steps on the left, but it distributes over union only up to step
    counts and is NOT associative; see `find_assoc_counterexample`."""
    return delay.bind(tree, lambda values: reduce(union, (f(x) for x in values)))


def weakly_equal(t1: MustTree, t2: MustTree, budget: int) -> bool:
    """Step-insensitive comparison: equal settled sets when both converge
    within the budget, indistinguishable when neither does."""
    r1 = delay.run(t1, budget)
    r2 = delay.run(t2, budget)
    if isinstance(r1, delay.Converged) and isinstance(r2, delay.Converged):
        return r1.value == r2.value
    return not isinstance(r1, delay.Converged) and not isinstance(r2, delay.Converged)


def map_values(f: Callable, tree: MustTree) -> MustTree:
    return delay.map_tree(lambda values: values.map(f), tree)


run = delay.run
truncate = delay.truncate
tree_equal = delay.tree_equal


# -------------------------------------------------- composition diagnostics

@dataclass(frozen=True)
class DiagramInstance:
    """Inputs for the four composition-law diagrams of `zeta`.

    branch: a single delay tree (inner-unit law);
    nested_sets: a set of sets of delay trees (outer multiplication law);
    values: a set of plain values (outer-unit law);
    nested_branches: a set of delay trees of delay trees (inner
    multiplication law, the one that fails).
    """

    branch: DelayTree
    nested_sets: FinSet
    values: FinSet
    nested_branches: FinSet
    depth: int


def check_zeta_diagrams(inst: DiagramInstance) -> dict[str, bool]:
    d = inst.depth

    lhs1 = zeta(FinSet.single(inst.branch))
    rhs1 = delay.map_tree(FinSet.single, inst.branch)

    lower2 = zeta(reduce(FinSet.union, inst.nested_sets))
    upper2 = delay.map_tree(
        lambda sets: reduce(FinSet.union, sets),
        zeta(inst.nested_sets.map(zeta)),
    )

    lhs3 = zeta(inst.values.map(delay.now))
    rhs3 = delay.now(inst.values)

    lower4 = zeta(inst.nested_branches.map(delay.mu))
    upper4 = delay.mu(delay.map_tree(zeta, zeta(inst.nested_branches)))

    return {
        "set_unit": delay.tree_equal(lhs1, rhs1, d),
        "set_mult": delay.tree_equal(lower2, upper2, d),
        "delay_unit": delay.tree_equal(lhs3, rhs3, d),
        "delay_mult": delay.tree_equal(lower4, upper4, d),
    }


def zeta_mult_counterexample(x="x") -> tuple[FinSet, DelayTree, DelayTree]:
    """The two-branch input on which the inner multiplication diagram fails:
    one branch steps before an immediate value, the other is an immediate
    one-step computation. Returns (input, lower composite, upper composite);
    the lower is one step, the upper two."""
    e1 = delay.later(delay.now(delay.now(x)))
    e2 = delay.now(delay.later(delay.now(x)))
    branches = FinSet.of(e1, e2)
    lower = zeta(branches.map(delay.mu))
    upper = delay.mu(delay.map_tree(zeta, zeta(branches)))
    return branches, lower, upper


# ----------------------------------------------- associativity of sequencing

@dataclass(frozen=True)
class SimpleTree:
    """Finite normal form: ``steps`` delays before the set of ``values``."""

    steps: int
    values: tuple[str, ...]

    def build(self) -> MustTree:
        t: MustTree = Now(FinSet(self.values))
        for _ in range(self.steps):
            t = later(t)
        return t


@dataclass(frozen=True)
class AssocWitness:
    t: SimpleTree
    f: tuple[tuple[str, SimpleTree], ...]
    g: tuple[tuple[str, SimpleTree], ...]
    depth: int

    def to_json(self) -> dict:
        enc = lambda st: {"steps": st.steps, "values": list(st.values)}
        return {
            "t": enc(self.t),
            "f": {k: enc(v) for k, v in self.f},
            "g": {k: enc(v) for k, v in self.g},
            "depth": self.depth,
        }

    @classmethod
    def from_json(cls, data: dict) -> "AssocWitness":
        dec = lambda d: SimpleTree(d["steps"], tuple(d["values"]))
        return cls(
            t=dec(data["t"]),
            f=tuple(sorted((k, dec(v)) for k, v in data["f"].items())),
            g=tuple(sorted((k, dec(v)) for k, v in data["g"].items())),
            depth=data["depth"],
        )


def _enumerate_simple_trees(elements: tuple[str, ...], max_depth: int, max_set: int):
    subsets = []
    for size in range(1, max_set + 1):
        subsets.extend(itertools.combinations(elements, size))
    return [SimpleTree(k, values) for k in range(max_depth + 1) for values in subsets]


def witness_to_trees(w: AssocWitness):
    t = w.t.build()
    f_map = {k: v for k, v in w.f}
    g_map = {k: v for k, v in w.g}
    f = lambda a: f_map[a].build()
    g = lambda a: g_map[a].build()
    return t, f, g


def witness_violates_associativity(w: AssocWitness) -> bool:
    t, f, g = witness_to_trees(w)
    lhs = bind(bind(t, f), g)
    rhs = bind(t, lambda a: bind(f(a), g))
    return not tree_equal(lhs, rhs, w.depth)


def find_assoc_counterexample(
    elements: tuple[str, ...] = ("a", "b"),
    max_depth: int = 2,
    max_set: int = 2,
    check_depth: int = 4,
) -> AssocWitness | None:
    """Exhaustively search small (tree, f, g) triples for an associativity
    failure of `bind`, returning the first witness in enumeration order."""
    trees = _enumerate_simple_trees(elements, max_depth, max_set)
    assignments = list(itertools.product(trees, repeat=len(elements)))
    for t in trees:
        t_built = t.build()
        for f_choice in assignments:
            f_map = dict(zip(elements, f_choice))
            f = lambda a: f_map[a].build()
            inner = bind(t_built, f)
            for g_choice in assignments:
                g_map = dict(zip(elements, g_choice))
                g = lambda a: g_map[a].build()
                lhs = bind(inner, g)
                rhs = bind(t_built, lambda a: bind(f_map[a].build(), g))
                for d in range(1, check_depth + 1):
                    if not tree_equal(lhs, rhs, d):
                        return AssocWitness(
                            t=t,
                            f=tuple(sorted(f_map.items())),
                            g=tuple(sorted(g_map.items())),
                            depth=d,
                        )
    return None
