"""Seeded random instances for the law suites. Everything here is a pure
function of the supplied RNG, so reports are reproducible byte for byte."""

from __future__ import annotations

import random
import zlib
from typing import Callable, Sequence

from ndlam import delay, may_pd, must_pd
from ndlam.finset import FinSet
from ndlam.keys import canon_key
from ndlam.must_pd import DiagramInstance

UNIVERSE = ("a", "b", "c", "d")


def rng_for(seed: int, *salt) -> random.Random:
    return random.Random(":".join(str(part) for part in (seed, *salt)))


def rand_subset(rng: random.Random, universe: Sequence = UNIVERSE, max_size: int = 3) -> tuple:
    size = rng.randint(1, min(max_size, len(universe)))
    return tuple(rng.sample(list(universe), size))


def rand_finset(rng: random.Random, universe: Sequence = UNIVERSE, max_size: int = 3) -> FinSet:
    return FinSet(rand_subset(rng, universe, max_size))


def rand_delay_tree(rng: random.Random, leaf: Callable, max_depth: int = 3):
    if max_depth == 0 or rng.random() < 0.4:
        return delay.now(leaf())
    return delay.later(rand_delay_tree(rng, leaf, max_depth - 1))


def rand_may_tree(
    rng: random.Random,
    universe: Sequence = UNIVERSE,
    max_depth: int = 3,
    max_width: int = 2,
) -> may_pd.MayTree:
    branches = []
    for _ in range(rng.randint(1, max_width)):
        if max_depth == 0 or rng.random() < 0.45:
            branches.append(may_pd.now(rng.choice(universe)))
        else:
            branches.append(
                may_pd.later(rand_may_tree(rng, universe, max_depth - 1, max_width))
            )
    out = branches[0]
    for b in branches[1:]:
        out = may_pd.union(out, b)
    return out


def rand_must_tree(
    rng: random.Random,
    universe: Sequence = UNIVERSE,
    max_depth: int = 3,
    max_set: int = 2,
) -> must_pd.MustTree:
    if max_depth == 0:
        return delay.now(rand_finset(rng, universe, max_set))
    roll = rng.random()
    if roll < 0.4:
        return delay.now(rand_finset(rng, universe, max_set))
    if roll < 0.75:
        return must_pd.later(rand_must_tree(rng, universe, max_depth - 1, max_set))
    return must_pd.union(
        rand_must_tree(rng, universe, max_depth - 1, max_set),
        rand_must_tree(rng, universe, max_depth - 1, max_set),
    )


def rand_pred(rng: random.Random, modulus: int = 3) -> Callable:
    """Deterministic fuel-indexed predicate on keyable elements."""
    salt = rng.getrandbits(32)

    def q(a, n: int) -> bool:
        digest = zlib.crc32(f"{salt}:{canon_key(a)}:{n}".encode())
        return digest % modulus != 0

    return q


def rand_fun(rng: random.Random, domain: Sequence, gen: Callable) -> Callable:
    """Random tabulated function: one independently generated image per
    domain element."""
    table = {a: gen(rng) for a in domain}
    return lambda a: table[a]


def rand_diagram_instance(rng: random.Random, depth: int = 8) -> DiagramInstance:
    leaf = lambda: rng.choice(UNIVERSE)
    tree = lambda: rand_delay_tree(rng, leaf, 3)
    inner_set = lambda: FinSet(tree() for _ in range(rng.randint(1, 3)))
    return DiagramInstance(
        branch=tree(),
        nested_sets=FinSet(inner_set() for _ in range(rng.randint(1, 3))),
        values=rand_finset(rng, UNIVERSE, 3),
        nested_branches=FinSet(
            rand_delay_tree(rng, tree, 3) for _ in range(rng.randint(1, 3))
        ),
        depth=depth,
    )
