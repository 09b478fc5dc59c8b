"""De Bruijn syntax for the untyped lambda calculus with binary choice.

Terms are nameless internally; the concrete syntax uses named binders and
is translated at the boundary, so structural equality of terms is
alpha-equivalence. `or` is a reserved keyword that binds loosest and
associates left, application associates left, and a lambda body extends
as far right as possible::

    term    := orterm
    orterm  := appterm { "or" appterm }
    appterm := atom { atom }
    atom    := ident | "\\" ident "." term | "(" term ")"
    ident   := [A-Za-z_][A-Za-z0-9_']*

The Unicode lambda is accepted as an alias for the backslash.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

__all__ = [
    "Term",
    "Var",
    "Lam",
    "App",
    "Or",
    "Hole",
    "ParseError",
    "UnboundVariable",
    "parse",
    "show",
    "is_closed",
    "is_value",
    "subst",
    "subst_env",
    "plug",
    "hole_count",
    "height",
    "free_var_count",
    "closed_value_subterms",
    "gen_term",
    "gen_context",
    "I",
    "K",
    "FALSE",
    "DELTA",
    "OMEGA",
    "LAM_OMEGA",
]


class _Node:
    __slots__ = ()

    def canon_key(self) -> str:
        return show(self)

    def __str__(self) -> str:
        return show(self)


@dataclass(frozen=True)
class Var(_Node):
    index: int


@dataclass(frozen=True)
class Lam(_Node):
    body: "Term"


@dataclass(frozen=True)
class App(_Node):
    fn: "Term"
    arg: "Term"


@dataclass(frozen=True)
class Or(_Node):
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class Hole(_Node):
    pass


Term = Var | Lam | App | Or


# ---------------------------------------------------------------- parsing

class ParseError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


class UnboundVariable(ParseError):
    def __init__(self, name: str, pos: int):
        super().__init__(f"unbound variable {name!r}", pos)
        self.name = name


def _ident_start(c: str) -> bool:
    return c.isalpha() and c.isascii() or c == "_"


def _ident_cont(c: str) -> bool:
    return _ident_start(c) or c.isdigit() and c.isascii() or c == "'"


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
        elif c in "\\λ":
            tokens.append(("lambda", c, i))
            i += 1
        elif c == ".":
            tokens.append(("dot", c, i))
            i += 1
        elif c == "(":
            tokens.append(("lparen", c, i))
            i += 1
        elif c == ")":
            tokens.append(("rparen", c, i))
            i += 1
        elif _ident_start(c):
            j = i + 1
            while j < n and _ident_cont(text[j]):
                j += 1
            name = text[i:j]
            tokens.append(("or" if name == "or" else "ident", name, i))
            i = j
        else:
            raise ParseError(f"unexpected character {c!r}", i)
    tokens.append(("eof", "", n))
    return tokens


class _Parser:
    def __init__(self, tokens: list[tuple[str, str, int]]):
        self.tokens = tokens
        self.k = 0

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.k]

    def advance(self) -> tuple[str, str, int]:
        tok = self.tokens[self.k]
        self.k += 1
        return tok

    def expect(self, kind: str, what: str) -> tuple[str, str, int]:
        tok = self.advance()
        if tok[0] != kind:
            raise ParseError(f"expected {what}, found {tok[1] or 'end of input'!r}", tok[2])
        return tok

    def term(self, env: list[str]) -> Term:
        t = self.appterm(env)
        while self.peek()[0] == "or":
            self.advance()
            t = Or(t, self.appterm(env))
        return t

    def appterm(self, env: list[str]) -> Term:
        t = self.atom(env)
        while self.peek()[0] in ("ident", "lambda", "lparen"):
            t = App(t, self.atom(env))
        return t

    def atom(self, env: list[str]) -> Term:
        kind, value, pos = self.advance()
        if kind == "ident":
            try:
                return Var(env.index(value))
            except ValueError:
                raise UnboundVariable(value, pos) from None
        if kind == "lambda":
            name = self.expect("ident", "a variable name")[1]
            self.expect("dot", "'.'")
            return Lam(self.term([name] + env))
        if kind == "lparen":
            t = self.term(env)
            self.expect("rparen", "')'")
            return t
        raise ParseError(f"unexpected {value or 'end of input'!r}", pos)


def parse(text: str) -> Term:
    """Parse concrete syntax into a closed de Bruijn term."""
    parser = _Parser(_tokenize(text))
    t = parser.term([])
    parser.expect("eof", "end of input")
    return t


# ---------------------------------------------------------------- printing

_OR, _APP, _ATOM = 0, 1, 2


def show(term: Term) -> str:
    """Canonical concrete syntax; reparses to a structurally equal term.

    Binder names are regenerated deterministically as x0, x1, ... by
    nesting depth. Free indices of open terms render as _0, _1, ... and
    do not reparse.
    """
    return _show(term, 0, _OR, True)


def _show(t: Term, depth: int, level: int, tail: bool) -> str:
    match t:
        case Var(index=k):
            return f"x{depth - 1 - k}" if k < depth else f"_{k - depth}"
        case Lam(body=body):
            s = f"\\x{depth}.{_show(body, depth + 1, _OR, True)}"
            return s if tail and level == _OR else f"({s})"
        case App(fn=fn, arg=arg):
            s = f"{_show(fn, depth, _APP, False)} {_show(arg, depth, _ATOM, False)}"
            return s if level <= _APP else f"({s})"
        case Or(left=left, right=right):
            s = f"{_show(left, depth, _OR, False)} or {_show(right, depth, _APP, tail)}"
            return s if level == _OR else f"({s})"
        case Hole():
            return "[]"
    raise TypeError(f"not a term: {t!r}")


# ------------------------------------------------------------ term queries

def is_closed(t: Term, depth: int = 0) -> bool:
    match t:
        case Var(index=k):
            return k < depth
        case Lam(body=body):
            return is_closed(body, depth + 1)
        case App(fn=fn, arg=arg):
            return is_closed(fn, depth) and is_closed(arg, depth)
        case Or(left=left, right=right):
            return is_closed(left, depth) and is_closed(right, depth)
        case Hole():
            return True
    raise TypeError(f"not a term: {t!r}")


def is_value(t: Term) -> bool:
    """Values are exactly the closed abstractions."""
    return isinstance(t, Lam) and is_closed(t)


def free_var_count(t: Term, depth: int = 0) -> int:
    """Least n such that all free indices of ``t`` are below n."""
    match t:
        case Var(index=k):
            return k - depth + 1 if k >= depth else 0
        case Lam(body=body):
            return free_var_count(body, depth + 1)
        case App(fn=fn, arg=arg):
            return max(free_var_count(fn, depth), free_var_count(arg, depth))
        case Or(left=left, right=right):
            return max(free_var_count(left, depth), free_var_count(right, depth))
        case Hole():
            return 0
    raise TypeError(f"not a term: {t!r}")


def height(t: Term) -> int:
    match t:
        case Var() | Hole():
            return 1
        case Lam(body=body):
            return 1 + height(body)
        case App(fn=a, arg=b) | Or(left=a, right=b):
            return 1 + max(height(a), height(b))
    raise TypeError(f"not a term: {t!r}")


def closed_value_subterms(t: Term) -> tuple[Term, ...]:
    """All distinct closed abstractions occurring inside ``t``, outermost first."""
    out: list[Term] = []
    seen: set[Term] = set()

    def go(s: Term) -> None:
        if isinstance(s, Lam) and is_closed(s) and s not in seen:
            seen.add(s)
            out.append(s)
        match s:
            case Lam(body=body):
                go(body)
            case App(fn=a, arg=b) | Or(left=a, right=b):
                go(a)
                go(b)
            case _:
                pass

    go(t)
    return tuple(out)


# ------------------------------------------------------------ substitution

def subst(body: Term, value: Term) -> Term:
    """Substitute the closed ``value`` for index 0 of ``body``.

    Remaining free indices shift down by one; being closed, the value
    needs no adjustment under binders, so capture cannot occur.
    """
    if not is_closed(value):
        raise ValueError(f"substituted value must be closed: {show(value)}")
    return _subst_top(body, value, 0)


def _subst_top(t: Term, v: Term, depth: int) -> Term:
    match t:
        case Var(index=k):
            if k < depth:
                return t
            return v if k == depth else Var(k - 1)
        case Lam(body=body):
            return Lam(_subst_top(body, v, depth + 1))
        case App(fn=fn, arg=arg):
            return App(_subst_top(fn, v, depth), _subst_top(arg, v, depth))
        case Or(left=left, right=right):
            return Or(_subst_top(left, v, depth), _subst_top(right, v, depth))
    raise TypeError(f"not a term: {t!r}")


def subst_env(t: Term, values: tuple[Term, ...]) -> Term:
    """Simultaneously substitute closed ``values`` for the free indices of ``t``.

    Index i (innermost first) maps to values[i]; all free indices must be
    covered.
    """
    for v in values:
        if not is_closed(v):
            raise ValueError(f"substituted value must be closed: {show(v)}")
    return _subst_env(t, values, 0)


def _subst_env(t: Term, values: tuple[Term, ...], depth: int) -> Term:
    match t:
        case Var(index=k):
            if k < depth:
                return t
            if k - depth < len(values):
                return values[k - depth]
            raise ValueError(f"free index {k - depth} not covered by environment")
        case Lam(body=body):
            return Lam(_subst_env(body, values, depth + 1))
        case App(fn=fn, arg=arg):
            return App(_subst_env(fn, values, depth), _subst_env(arg, values, depth))
        case Or(left=left, right=right):
            return Or(_subst_env(left, values, depth), _subst_env(right, values, depth))
    raise TypeError(f"not a term: {t!r}")


# ---------------------------------------------------------------- contexts

def hole_count(ctx: Term) -> int:
    match ctx:
        case Hole():
            return 1
        case Var():
            return 0
        case Lam(body=body):
            return hole_count(body)
        case App(fn=a, arg=b) | Or(left=a, right=b):
            return hole_count(a) + hole_count(b)
    raise TypeError(f"not a context: {ctx!r}")


def plug(ctx: Term, term: Term) -> Term:
    """Replace the unique hole of ``ctx`` by ``term``; binders may capture.

    Raises ValueError when the context does not have exactly one hole or
    when the plugged result is not closed.
    """
    if hole_count(ctx) != 1:
        raise ValueError(f"context must have exactly one hole: {show(ctx)}")
    result = _plug(ctx, term)
    if not is_closed(result):
        raise ValueError(f"plugged term is not closed: {show(result)}")
    return result


def _plug(ctx: Term, term: Term) -> Term:
    match ctx:
        case Hole():
            return term
        case Var():
            return ctx
        case Lam(body=body):
            return Lam(_plug(body, term))
        case App(fn=a, arg=b):
            return App(_plug(a, term), _plug(b, term))
        case Or(left=a, right=b):
            return Or(_plug(a, term), _plug(b, term))
    raise TypeError(f"not a context: {ctx!r}")


# --------------------------------------------------------------- generators

def gen_term(seed: int, size: int) -> Term:
    """Deterministic random closed term of at most ``size`` nodes."""
    if size < 1:
        raise ValueError("size must be >= 1")
    rng = random.Random(f"term:{seed}:{size}")
    return _gen(rng, size, 0)


def _gen(rng: random.Random, fuel: int, depth: int) -> Term:
    if fuel <= 1:
        return Var(rng.randrange(depth)) if depth else Lam(Var(0))
    choices = ["lam", "lam"]
    if depth:
        choices += ["var"]
    if fuel >= 3:
        choices += ["app", "app", "or"]
    match rng.choice(choices):
        case "var":
            return Var(rng.randrange(depth))
        case "lam":
            return Lam(_gen(rng, fuel - 1, depth + 1))
        case "app":
            k = rng.randint(1, fuel - 2)
            return App(_gen(rng, k, depth), _gen(rng, fuel - 1 - k, depth))
        case "or":
            k = rng.randint(1, fuel - 2)
            return Or(_gen(rng, k, depth), _gen(rng, fuel - 1 - k, depth))
    raise AssertionError


def gen_context(seed: int, size: int) -> Term:
    """Deterministic random context: a closed skeleton with exactly one hole."""
    if size < 1:
        raise ValueError("size must be >= 1")
    rng = random.Random(f"ctx:{seed}:{size}")
    return _gen_ctx(rng, size, 0)


def _gen_ctx(rng: random.Random, fuel: int, depth: int) -> Term:
    if fuel <= 1:
        return Hole()
    r = rng.random()
    if r < 0.15:
        return Hole()
    if r < 0.45:
        return Lam(_gen_ctx(rng, fuel - 1, depth + 1))
    if fuel < 3:
        return Lam(_gen_ctx(rng, fuel - 1, depth + 1))
    k = rng.randint(1, fuel - 2)
    hole_left = rng.random() < 0.5
    ctor = App if r < 0.8 else Or
    if hole_left:
        return ctor(_gen_ctx(rng, k, depth), _gen(rng, fuel - 1 - k, depth))
    return ctor(_gen(rng, k, depth), _gen_ctx(rng, fuel - 1 - k, depth))


# ------------------------------------------------------- common combinators

I = Lam(Var(0))
K = Lam(Lam(Var(1)))
FALSE = Lam(Lam(Var(0)))
DELTA = Lam(App(Var(0), Var(0)))
OMEGA = App(DELTA, DELTA)
LAM_OMEGA = Lam(OMEGA)
