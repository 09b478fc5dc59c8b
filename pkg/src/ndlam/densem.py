"""Denotational semantics with syntactic tags.

Semantic values are suspended functions from semantic values to effect
trees. Function equality is not decidable, so every semantic value also
carries the closed syntactic value it denotes (the abstraction with the
environment's tags substituted in); the tag is the working equality and
the serialization for set canonicalization. Every semantic value the
interpreter produces is the interpretation of its own tag, which is what
makes comparing denotations against evaluator output meaningful.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ndlam import delay, may_pd
from ndlam.delay import Susp
from ndlam.finset import FinSet
from ndlam.keys import canon_key
from ndlam.opsem import EffectSignature, eval_term
from ndlam.syntax import App, Lam, Or, Term, Var, is_value, show, subst_env

__all__ = [
    "SemVal",
    "sem_app",
    "interp",
    "interp_val",
    "soundness_check",
    "den_sat",
]


@dataclass(frozen=True, eq=False)
class SemVal:
    """A suspended function on semantic values, tagged with the closed
    syntactic value it denotes. Tag equality is the module's equality."""

    apply: Susp = field(repr=False)
    tag: Term

    def apply_to(self, w: "SemVal"):
        return self.apply.force()(w)

    def canon_key(self) -> str:
        return canon_key(self.tag)

    def __eq__(self, other) -> bool:
        return isinstance(other, SemVal) and self.tag == other.tag

    def __hash__(self) -> int:
        return hash(self.tag)

    def __str__(self) -> str:
        return show(self.tag)


def sem_app(d, e, sig: EffectSignature):
    """Semantic application: bind the function, bind the argument, then one
    step before the function's suspension is forced."""
    return sig.bind(
        d,
        lambda f: sig.bind(e, lambda v: sig.step(Susp(lambda: f.apply_to(v)))),
    )


def interp(term: Term, env: tuple[SemVal, ...], sig: EffectSignature):
    """Interpretation into an effect tree over semantic values.

    The environment is innermost-first: index i reads env[i]. Variables
    and abstractions are pure, applications go through `sem_app`, and a
    choice is the union of its branches.
    """
    match term:
        case Var(index=k):
            if k >= len(env):
                raise ValueError(f"free index {k} outside environment")
            return sig.pure(env[k])
        case Lam():
            return sig.pure(_close(term, env, sig))
        case App(fn=fn, arg=arg):
            return sem_app(interp(fn, env, sig), interp(arg, env, sig), sig)
        case Or(left=left, right=right):
            return sig.union(interp(left, env, sig), interp(right, env, sig))
    raise TypeError(f"not a term: {term!r}")


def _close(lam: Lam, env: tuple[SemVal, ...], sig: EffectSignature) -> SemVal:
    # The tag is the substitution image: the abstraction with every
    # environment entry replaced by its own tag.
    tag = subst_env(lam, tuple(v.tag for v in env))
    return SemVal(
        apply=Susp.of(lambda d: interp(lam.body, (d,) + env, sig)),
        tag=tag,
    )


def interp_val(value: Term, sig: EffectSignature) -> SemVal:
    """The semantic value underlying the interpretation of a closed value;
    its tag is the value itself."""
    if not is_value(value):
        raise ValueError(f"not a closed value: {show(value)}")
    return _close(value, (), sig)


def soundness_check(term: Term, depth: int, sig: EffectSignature) -> bool:
    """Push the evaluator's syntactic results into semantic values and
    compare with the interpretation, at the given observation depth."""
    lhs = sig.map(lambda v: interp_val(v, sig), eval_term(term, sig))
    rhs = interp(term, (), sig)
    return sig.equal(lhs, rhs, depth)


def den_sat(d, q, fuel: int, sig: EffectSignature) -> bool:
    """Fuel-indexed satisfaction over a denotation, with predicates stated
    on tags: on single tags in may mode, on the set of tags in must mode."""
    if sig.name == "may":
        return may_pd.lift(lambda sv, n: q(sv.tag, n), d, fuel)
    return delay.lift(lambda values, n: q(values.map(lambda sv: sv.tag), n), d, fuel)
