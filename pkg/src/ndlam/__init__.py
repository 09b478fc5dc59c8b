"""Semantics workbench for the untyped lambda calculus with binary choice.

Two observation disciplines for nondeterministic evaluation live side by
side: may-trees, whose branches can be probed one at a time even next to
diverging siblings, and must-trees, which only reveal the set of results
once every branch has settled. On top of both sit a guarded evaluator and
an independent inductive big-step search, a tagged denotational
interpreter, and fuel-indexed applicative simulation checkers with a
congruence probe.
"""

from ndlam.syntax import App, Hole, Lam, Or, Term, Var, parse, show

__version__ = "0.1.0"

__all__ = [
    "Term",
    "Var",
    "Lam",
    "App",
    "Or",
    "Hole",
    "parse",
    "show",
    "__version__",
]
