"""Fuel-indexed applicative simulation, in may and must flavours.

The left term is evaluated with the guarded semantics, so a divergent
left side passes vacuously once the fuel-gated step budget runs out; the
right side must be shown to converge by the inductive search, which is
only semi-decidable, so verdicts are three-valued and an exhausted search
reports unknown rather than false. Universal quantification over argument
values is approximated by a pool that always contains the basic
combinators plus every closed value subterm of the compared terms.

False verdicts are stable under added fuel; true at fuel 0 is the vacuous
base of the step-indexed reading.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field, replace
from typing import Callable

from ndlam import densem, opsem, syntax
from ndlam.delay import Now, Step, TIMEOUT
from ndlam.finset import FinSet
from ndlam.may_pd import Leaf
from ndlam.opsem import FALSE, MAY, MUST, TRUE, Verdict, unknown, verdict_all, verdict_any
from ndlam.syntax import (
    App,
    Hole,
    Lam,
    Or,
    Term,
    Var,
    free_var_count,
    gen_context,
    height,
    hole_count,
    is_closed,
    plug,
    show,
    subst,
    subst_env,
)

__all__ = [
    "DEFAULT_POOL",
    "SimConfig",
    "query_pool",
    "sim_may",
    "sim_must",
    "sim",
    "sim_open",
    "rel_may",
    "rel_must",
    "rel_val_may",
    "rel_val_must",
    "slack",
    "ContextCheck",
    "CongruenceReport",
    "congruence_probe",
]

DEFAULT_POOL: tuple[Term, ...] = (syntax.I, syntax.K, syntax.LAM_OMEGA)


@dataclass(frozen=True)
class SimConfig:
    """Budgets for one simulation query.

    fuel bounds the step-gated depth, conv_budget the inductive
    convergence searches on the right, pool the argument values tried at
    value comparisons, subst_pool the closing substitutions for open
    terms. may_divergent lists terms annotated as having no may-values;
    a failed existential over such a term is a definite refutation
    rather than an exhausted search. subst_closed_terms widens the
    closing substitutions from values to small closed choice/application
    combinations over the pool.
    """

    fuel: int = 6
    conv_budget: int = 50
    pool: tuple[Term, ...] = DEFAULT_POOL
    subst_pool: tuple[Term, ...] = DEFAULT_POOL
    subst_closed_terms: bool = False
    may_divergent: frozenset = frozenset()
    pool_limit: int | None = None


def query_pool(cfg: SimConfig, *terms: Term) -> tuple[Term, ...]:
    """The configured pool augmented with all closed value subterms of the
    compared terms."""
    pool = list(cfg.pool)
    for t in terms:
        for v in syntax.closed_value_subterms(t):
            if v not in pool:
                pool.append(v)
    if cfg.pool_limit is not None:
        pool = pool[: cfg.pool_limit]
    return tuple(pool)


def _require_closed(*terms: Term) -> None:
    for t in terms:
        if not is_closed(t):
            raise ValueError(f"simulation requires closed terms: {show(t)}")


# ----------------------------------------------------------- may simulation

def sim_may(m: Term, n: Term, cfg: SimConfig = SimConfig()) -> Verdict:
    """Does every value the left term may reach have a convergence witness
    on the right whose body simulates it one step later, for all pool
    arguments?"""
    _require_closed(m, n)
    pool = query_pool(cfg, m, n)
    memo: dict = {}
    bs_cache: dict = {}

    def converges_to(n1: Term):
        if n1 not in bs_cache:
            bs_cache[n1] = opsem.bigstep_may_all(n1, cfg.conv_budget)
        return bs_cache[n1]

    def pair(m1: Term, n1: Term, fuel: int) -> Verdict:
        key = (m1, n1, fuel)
        if key not in memo:
            memo[key] = walk(opsem.eval_may(m1), n1, fuel)
        return memo[key]

    def walk(tree, n1: Term, fuel: int) -> Verdict:
        out = []
        for e in tree.entries:
            if isinstance(e, Leaf):
                out.append(leaf(e.value, n1, fuel))
            elif fuel == 0:
                out.append(TRUE)
            else:
                out.append(walk(e.tail.force(), n1, fuel - 1))
        return verdict_all(out)

    def leaf(v: Term, n1: Term, fuel: int) -> Verdict:
        witnesses, cut = converges_to(n1)
        verdict = verdict_any(value_le(v, w, fuel) for w in witnesses)
        if verdict.is_true:
            return verdict
        if cut and n1 not in cfg.may_divergent:
            return unknown(
                f"may-convergence search for {show(n1)} cut at budget {cfg.conv_budget}"
            )
        return verdict

    def value_le(v: Term, w: Term, fuel: int) -> Verdict:
        if fuel == 0:
            return TRUE
        return verdict_all(
            pair(subst(v.body, u), subst(w.body, u), fuel - 1) for u in pool
        )

    return pair(m, n, cfg.fuel)


# ---------------------------------------------------------- must simulation

def sim_must(m: Term, n: Term, cfg: SimConfig = SimConfig()) -> Verdict:
    """Once the left term's set of results settles, the right term must
    converge to a set in which every value is simulated by some left
    value, one step later, for all pool arguments."""
    _require_closed(m, n)
    pool = query_pool(cfg, m, n)
    memo: dict = {}
    bs_cache: dict = {}

    def converges_to(n1: Term):
        if n1 not in bs_cache:
            bs_cache[n1] = opsem.bigstep_must(n1, cfg.conv_budget)
        return bs_cache[n1]

    def pair(m1: Term, n1: Term, fuel: int) -> Verdict:
        key = (m1, n1, fuel)
        if key not in memo:
            memo[key] = walk(opsem.eval_must(m1), n1, fuel)
        return memo[key]

    def walk(tree, n1: Term, fuel: int) -> Verdict:
        while True:
            match tree:
                case Now(value=values):
                    return settled(values, n1, fuel)
                case Step(tail=s):
                    if fuel == 0:
                        return TRUE
                    tree = s.force()
                    fuel -= 1

    def settled(values: FinSet, n1: Term, fuel: int) -> Verdict:
        result = converges_to(n1)
        if result is TIMEOUT:
            return unknown(
                f"must-convergence search for {show(n1)} timed out at budget {cfg.conv_budget}"
            )
        return verdict_all(
            verdict_any(value_le(v, w, fuel) for v in values) for w in result
        )

    def value_le(v: Term, w: Term, fuel: int) -> Verdict:
        if fuel == 0:
            return TRUE
        return verdict_all(
            pair(subst(v.body, u), subst(w.body, u), fuel - 1) for u in pool
        )

    return pair(m, n, cfg.fuel)


def sim(m: Term, n: Term, cfg: SimConfig = SimConfig(), mode: str = "may") -> Verdict:
    if mode == "may":
        return sim_may(m, n, cfg)
    if mode == "must":
        return sim_must(m, n, cfg)
    raise ValueError(f"unknown mode {mode!r}")


def _closing_substitutions(cfg: SimConfig) -> tuple[Term, ...]:
    terms = list(cfg.subst_pool)
    if cfg.subst_closed_terms:
        for a, b in itertools.product(cfg.subst_pool, repeat=2):
            for t in (Or(a, b), App(a, b)):
                if t not in terms:
                    terms.append(t)
    return tuple(terms)


def sim_open(m: Term, n: Term, cfg: SimConfig = SimConfig(), mode: str = "may") -> Verdict:
    """Simulation for open terms: the conjunction over closing substitutions
    drawn from the substitution pool (values by default)."""
    k = max(free_var_count(m), free_var_count(n))
    if k == 0:
        return sim(m, n, cfg, mode)
    pool = _closing_substitutions(cfg)
    return verdict_all(
        sim(subst_env(m, combo), subst_env(n, combo), cfg, mode)
        for combo in itertools.product(pool, repeat=k)
    )


# ------------------------------------------------- syntax-semantics relation

def rel_may(d, n: Term, cfg: SimConfig = SimConfig(), pool: tuple[Term, ...] | None = None) -> Verdict:
    """Relate a may-denotation to a term: every settled semantic value needs
    a convergence witness on the right related to it one step later. The
    argument pairs for the step case are (interpretation of V, V) for pool
    values V."""
    if pool is None:
        pool = query_pool(cfg, n)
    memo: dict = {}
    bs_cache: dict = {}

    def converges_to(n1: Term):
        if n1 not in bs_cache:
            bs_cache[n1] = opsem.bigstep_may_all(n1, cfg.conv_budget)
        return bs_cache[n1]

    def walk(tree, n1: Term, fuel: int) -> Verdict:
        out = []
        for e in tree.entries:
            if isinstance(e, Leaf):
                out.append(leaf(e.value, n1, fuel))
            elif fuel == 0:
                out.append(TRUE)
            else:
                out.append(walk(e.tail.force(), n1, fuel - 1))
        return verdict_all(out)

    def leaf(sv: densem.SemVal, n1: Term, fuel: int) -> Verdict:
        witnesses, cut = converges_to(n1)
        verdict = verdict_any(value_rel(sv, w, fuel) for w in witnesses)
        if verdict.is_true:
            return verdict
        if cut and n1 not in cfg.may_divergent:
            return unknown(
                f"may-convergence search for {show(n1)} cut at budget {cfg.conv_budget}"
            )
        return verdict

    def value_rel(sv: densem.SemVal, w: Term, fuel: int) -> Verdict:
        if fuel == 0:
            return TRUE
        key = (sv.tag, w, fuel)
        if key not in memo:
            memo[key] = verdict_all(
                walk(sv.apply_to(densem.interp_val(u, MAY)), subst(w.body, u), fuel - 1)
                for u in pool
            )
        return memo[key]

    return walk(d, n, cfg.fuel)


def rel_val_may(sv: densem.SemVal, value: Term, cfg: SimConfig = SimConfig()) -> Verdict:
    return rel_may(opsem.MAY.pure(sv), value, cfg)


def rel_must(d, n: Term, cfg: SimConfig = SimConfig(), pool: tuple[Term, ...] | None = None) -> Verdict:
    """Must-mode relation: once the denotation's set settles, the right term
    must converge to a set every member of which is related to some
    semantic value in the settled set."""
    if pool is None:
        pool = query_pool(cfg, n)
    memo: dict = {}
    bs_cache: dict = {}

    def converges_to(n1: Term):
        if n1 not in bs_cache:
            bs_cache[n1] = opsem.bigstep_must(n1, cfg.conv_budget)
        return bs_cache[n1]

    def walk(tree, n1: Term, fuel: int) -> Verdict:
        while True:
            match tree:
                case Now(value=values):
                    return settled(values, n1, fuel)
                case Step(tail=s):
                    if fuel == 0:
                        return TRUE
                    tree = s.force()
                    fuel -= 1

    def settled(values: FinSet, n1: Term, fuel: int) -> Verdict:
        result = converges_to(n1)
        if result is TIMEOUT:
            return unknown(
                f"must-convergence search for {show(n1)} timed out at budget {cfg.conv_budget}"
            )
        return verdict_all(
            verdict_any(value_rel(sv, w, fuel) for sv in values) for w in result
        )

    def value_rel(sv: densem.SemVal, w: Term, fuel: int) -> Verdict:
        if fuel == 0:
            return TRUE
        key = (sv.tag, w, fuel)
        if key not in memo:
            memo[key] = verdict_all(
                walk(sv.apply_to(densem.interp_val(u, MUST)), subst(w.body, u), fuel - 1)
                for u in pool
            )
        return memo[key]

    return walk(d, n, cfg.fuel)


def rel_val_must(sv: densem.SemVal, value: Term, cfg: SimConfig = SimConfig()) -> Verdict:
    return rel_must(opsem.MUST.pure(sv), value, cfg)


# --------------------------------------------------------------- congruence

def slack(ctx: Term) -> int:
    """Application nodes on the path from the context root to its hole; each
    one inserts a matching step on both plugged sides, so the congruence
    probe compensates fuel by this amount."""
    match ctx:
        case Hole():
            return 0
        case Lam(body=body):
            return slack(body)
        case App(fn=a, arg=b):
            return 1 + (slack(a) if hole_count(a) else slack(b))
        case Or(left=a, right=b):
            return slack(a) if hole_count(a) else slack(b)
    raise ValueError(f"context without hole: {show(ctx)}")


@dataclass(frozen=True)
class ContextCheck:
    context: str
    slack: int
    fuel: int
    verdict: Verdict


@dataclass
class CongruenceReport:
    mode: str
    fuel: int
    contexts: int = 0
    true_count: int = 0
    unknown_count: int = 0
    false_checks: list[ContextCheck] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.false_checks


def congruence_probe(
    m: Term,
    n: Term,
    cfg: SimConfig = SimConfig(),
    n_contexts: int = 100,
    seed: int = 0,
    mode: str = "may",
    max_context_height: int = 3,
) -> CongruenceReport:
    """Plug a true-simulating pair into random closing contexts and check the
    plugged pair still simulates at slack-adjusted fuel. A false verdict is
    a congruence counterexample (none is expected); unknowns are tallied."""
    base = sim(m, n, cfg, mode)
    if not base.is_true:
        raise ValueError(
            f"congruence probe requires a true verdict for the input pair, got {base}"
        )
    report = CongruenceReport(mode=mode, fuel=cfg.fuel)
    rng = random.Random(f"probe:{seed}:{mode}")
    attempts = 0
    while report.contexts < n_contexts:
        attempts += 1
        if attempts > 100 * n_contexts:
            raise RuntimeError("context generation failed to produce enough contexts")
        ctx = gen_context(rng.getrandbits(32), rng.randint(1, 6))
        if height(ctx) > max_context_height:
            continue
        s = slack(ctx)
        fuel = max(cfg.fuel - s, 0)
        verdict = sim(plug(ctx, m), plug(ctx, n), replace(cfg, fuel=fuel), mode)
        report.contexts += 1
        if verdict.is_true:
            report.true_count += 1
        elif verdict.is_unknown:
            report.unknown_count += 1
        else:
            report.false_checks.append(ContextCheck(show(ctx), s, fuel, verdict))
    return report
