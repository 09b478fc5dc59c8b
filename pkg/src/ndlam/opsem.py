"""Operational semantics, twice over.

The guarded route is an evaluator into an effect tree, generic in the
effect signature: a value is pure, a choice is a union, and every beta
step inserts exactly one delay before evaluating the substituted body.
The inductive route is a direct big-step search over the derivation
rules. The two are independent implementations on purpose so that their
agreement on the corpus is a genuine cross-check.
"""

from __future__ import annotations

import importlib.resources
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Callable

from ndlam import delay, may_pd, must_pd, syntax
from ndlam.delay import Susp, TIMEOUT, Timeout
from ndlam.finset import FinSet
from ndlam.syntax import App, Lam, Or, Term, Var, is_closed, parse, show, subst

__all__ = [
    "Verdict",
    "TRUE",
    "FALSE",
    "unknown",
    "verdict_all",
    "verdict_any",
    "EffectSignature",
    "MAY",
    "MUST",
    "signature",
    "eval_term",
    "eval_may",
    "eval_must",
    "bigstep_may_all",
    "bigstep_may",
    "bigstep_must",
    "bigstep_must_check",
    "sat_may",
    "sat_must",
    "CorpusEntry",
    "parse_corpus",
    "load_corpus",
]


# ----------------------------------------------------------------- verdicts

@dataclass(frozen=True)
class Verdict:
    """Three-valued result of a semi-decidable check. Unknown only ever
    reports an exhausted search budget, never an exhausted delay budget
    (running out of delay fuel counts as true)."""

    value: str  # "true" | "false" | "unknown"
    reason: str | None = None

    @property
    def is_true(self) -> bool:
        return self.value == "true"

    @property
    def is_false(self) -> bool:
        return self.value == "false"

    @property
    def is_unknown(self) -> bool:
        return self.value == "unknown"

    def __str__(self) -> str:
        return self.value if self.reason is None else f"{self.value} ({self.reason})"


TRUE = Verdict("true")
FALSE = Verdict("false")


def unknown(reason: str) -> Verdict:
    return Verdict("unknown", reason)


def verdict_all(verdicts) -> Verdict:
    """Conjunction: false dominates, then unknown."""
    out = TRUE
    for v in verdicts:
        if v.is_false:
            return v
        if v.is_unknown:
            out = v
    return out


def verdict_any(verdicts) -> Verdict:
    """Disjunction: true dominates, then unknown."""
    out = FALSE
    for v in verdicts:
        if v.is_true:
            return v
        if v.is_unknown:
            out = v
    return out


# --------------------------------------------------------- effect signature

@dataclass(frozen=True)
class EffectSignature:
    """The operations the evaluator and interpreter are generic over.

    ``bind`` must satisfy both unit laws and distribute over ``step`` and
    ``union``; associativity is deliberately not required (the must
    instance lacks it).
    """

    name: str
    pure: Callable[[Any], Any]
    bind: Callable[[Any, Callable], Any]
    step: Callable[[Susp], Any]
    union: Callable[[Any, Any], Any]
    map: Callable[[Callable, Any], Any]
    truncate: Callable[[Any, int], Any]
    equal: Callable[[Any, Any, int], bool]


MAY = EffectSignature(
    name="may",
    pure=may_pd.now,
    bind=may_pd.bind,
    step=may_pd.step,
    union=may_pd.union,
    map=may_pd.map_tree,
    truncate=may_pd.truncate,
    equal=may_pd.tree_equal,
)

MUST = EffectSignature(
    name="must",
    pure=must_pd.now,
    bind=must_pd.bind,
    step=must_pd.step,
    union=must_pd.union,
    map=must_pd.map_values,
    truncate=must_pd.truncate,
    equal=must_pd.tree_equal,
)


def signature(mode: str) -> EffectSignature:
    if mode == "may":
        return MAY
    if mode == "must":
        return MUST
    raise ValueError(f"unknown mode {mode!r}")


# -------------------------------------------------------- guarded evaluator

def eval_term(term: Term, sig: EffectSignature):
    """Evaluate a closed term to an effect tree over values. Three clauses:
    an abstraction is pure, a choice is the union of its branches, and an
    application binds function then argument and takes one step before
    evaluating the substituted body."""
    if not is_closed(term):
        raise ValueError(f"cannot evaluate open term: {show(term)}")
    return _eval(term, sig)


def _eval(term: Term, sig: EffectSignature):
    match term:
        case Lam():
            return sig.pure(term)
        case App(fn=fn, arg=arg):
            return sig.bind(
                _eval(fn, sig),
                lambda fv: sig.bind(
                    _eval(arg, sig),
                    lambda av: sig.step(Susp(lambda: _eval(subst(fv.body, av), sig))),
                ),
            )
        case Or(left=left, right=right):
            return sig.union(_eval(left, sig), _eval(right, sig))
        case Var():
            raise ValueError("free variable reached during evaluation")
    raise TypeError(f"not a term: {term!r}")


# Trees and search results are pure functions of the (immutable) term, so
# memoizing across queries is observationally invisible and lets repeated
# simulation queries share forced prefixes.
@lru_cache(maxsize=4096)
def eval_may(term: Term) -> may_pd.MayTree:
    return eval_term(term, MAY)


@lru_cache(maxsize=4096)
def eval_must(term: Term) -> must_pd.MustTree:
    return eval_term(term, MUST)


# --------------------------------------------------- inductive big-step: may

@lru_cache(maxsize=None)
def bigstep_may_all(term: Term, height: int) -> tuple[frozenset[Term], bool]:
    """All values derivable by the may rules within the given derivation
    height, together with a flag recording whether the search frontier was
    cut (in which case the set may be incomplete). Monotone in height."""
    memo: dict[tuple[Term, int], tuple[frozenset, bool]] = {}

    def go(m: Term, h: int) -> tuple[frozenset, bool]:
        key = (m, h)
        if key in memo:
            return memo[key]
        if h <= 0:
            result = (frozenset(), True)
        else:
            match m:
                case Lam():
                    result = (frozenset((m,)), False)
                case Or(left=left, right=right):
                    lv, lc = go(left, h - 1)
                    rv, rc = go(right, h - 1)
                    result = (lv | rv, lc or rc)
                case App(fn=fn, arg=arg):
                    fv, fc = go(fn, h - 1)
                    av, ac = go(arg, h - 1)
                    values: frozenset = frozenset()
                    cut = fc or ac
                    for f in fv:
                        for a in av:
                            bv, bc = go(subst(f.body, a), h - 1)
                            values |= bv
                            cut = cut or bc
                    result = (values, cut)
                case _:
                    raise ValueError("big-step search requires a closed term")
        memo[key] = result
        return result

    return go(term, height)


def bigstep_may(term: Term, value: Term, height: int) -> Verdict:
    """Is there a derivation of ``term`` may-converging to ``value`` within
    the height? Unknown only when the search frontier was cut."""
    values, cut = bigstep_may_all(term, height)
    if value in values:
        return TRUE
    if cut:
        return unknown(f"derivation search cut at height {height}")
    return FALSE


# -------------------------------------------------- inductive big-step: must

@lru_cache(maxsize=None)
def bigstep_must(term: Term, budget: int) -> FinSet | Timeout:
    """Direct evaluation of the must rules: a term must-converges iff every
    branch does within the budget. An application gathers one result set
    per (function value, argument value) pair and unions them."""
    match term:
        case Lam():
            return FinSet.single(term) if budget >= 1 else TIMEOUT
        case Or(left=left, right=right):
            lv = bigstep_must(left, budget - 1)
            if lv is TIMEOUT:
                return TIMEOUT
            rv = bigstep_must(right, budget - 1)
            if rv is TIMEOUT:
                return TIMEOUT
            return lv.union(rv)
        case App(fn=fn, arg=arg):
            fv = bigstep_must(fn, budget - 1)
            if fv is TIMEOUT:
                return TIMEOUT
            av = bigstep_must(arg, budget - 1)
            if av is TIMEOUT:
                return TIMEOUT
            out: FinSet | None = None
            for f in fv:
                for a in av:
                    z = bigstep_must(subst(f.body, a), budget - 1)
                    if z is TIMEOUT:
                        return TIMEOUT
                    out = z if out is None else out.union(z)
            return out
        case _:
            raise ValueError("big-step search requires a closed term")


def bigstep_must_check(term: Term, values: FinSet, budget: int) -> Verdict:
    result = bigstep_must(term, budget)
    if result is TIMEOUT:
        return unknown(f"must-convergence search exhausted budget {budget}")
    return TRUE if result == values else FALSE


# ------------------------------------------------- fuel-indexed satisfaction

def sat_may(term: Term, q: Callable[[Term, int], bool], fuel: int) -> bool:
    """Every value the term may settle on within the fuel satisfies ``q`` at
    the remaining fuel; divergence satisfies everything."""
    return may_pd.lift(q, eval_may(term), fuel)


def sat_must(term: Term, q: Callable[[FinSet, int], bool], fuel: int) -> bool:
    """If the term must-converges within the fuel, its value set satisfies
    ``q`` at the remaining fuel."""
    return delay.lift(q, eval_must(term), fuel)


# ------------------------------------------------------------------- corpus

@dataclass(frozen=True)
class CorpusEntry:
    """One annotated closed term.

    File format, one record per line (``#`` starts a comment):

        <term> ; may:{<value>, ...}|may:diverges ; must:{...}|must:diverges ; budget:<n>

    The may annotation lists every value reachable along some branch
    (``diverges`` when there is none); the must annotation gives the full
    value set when every branch terminates. The budget is a per-term
    derivation height / step bound generous enough to settle both search
    routes.
    """

    text: str
    term: Term
    may_values: tuple[Term, ...]
    must_values: FinSet | None
    budget: int

    @property
    def may_diverges(self) -> bool:
        return not self.may_values

    @property
    def must_diverges(self) -> bool:
        return self.must_values is None


def _parse_value_set(field: str, tag: str) -> tuple[Term, ...] | None:
    body = field[len(tag) + 1 :].strip()
    if body == "diverges":
        return None
    if not (body.startswith("{") and body.endswith("}")):
        raise ValueError(f"malformed {tag} annotation: {field!r}")
    inner = body[1:-1].strip()
    if not inner:
        return ()
    values = tuple(parse(part.strip()) for part in inner.split(","))
    for v in values:
        if not syntax.is_value(v):
            raise ValueError(f"annotation is not a value: {show(v)}")
    return values


def parse_corpus(text: str) -> tuple[CorpusEntry, ...]:
    entries = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = [f.strip() for f in line.split(";")]
        if len(fields) != 4:
            raise ValueError(f"expected 4 ;-separated fields: {raw!r}")
        term_text, may_field, must_field, budget_field = fields
        if not may_field.startswith("may:"):
            raise ValueError(f"second field must be a may annotation: {raw!r}")
        if not must_field.startswith("must:"):
            raise ValueError(f"third field must be a must annotation: {raw!r}")
        if not budget_field.startswith("budget:"):
            raise ValueError(f"fourth field must be a budget: {raw!r}")
        may_values = _parse_value_set(may_field, "may")
        must_values = _parse_value_set(must_field, "must")
        entries.append(
            CorpusEntry(
                text=term_text,
                term=parse(term_text),
                may_values=may_values if may_values is not None else (),
                must_values=FinSet(must_values) if must_values else None,
                budget=int(budget_field[len("budget:") :]),
            )
        )
    return tuple(entries)


def load_corpus(path: str | None = None) -> tuple[CorpusEntry, ...]:
    """Load an annotated corpus; defaults to the packaged one."""
    if path is None:
        text = importlib.resources.files("ndlam").joinpath("data/corpus.txt").read_text()
    else:
        with open(path, encoding="utf-8") as handle:
            text = handle.read()
    return parse_corpus(text)
