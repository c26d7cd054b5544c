"""
Lambda-DRS terms: boxes, conditions, lambda abstraction and application.

A box `[x,e | man(x), walk(e)]` binds its referents in its own conditions.
Sequencing `a;b` (Merge) and implication `a → b` let the referents a box
on the left declares bind free occurrences on the right, as in DRT.

Templates hold two kinds of placeholders in predicate position: SYM (the
token's symbol) and role slots R1, R2, ... which `fill_slots` replaces with
concrete names. Predicate functors are constants, never variables; a
predicate variable applied to an argument is an `App` (`p(x)`).
"""
from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple, Union

from errors import NonTerminating, TermError

LOGGER = logging.getLogger(__name__)

DEFAULT_STEP_BUDGET = 10_000


# =========================
# Term types
# =========================

@dataclass(frozen=True)
class Sym:
    def __str__(self) -> str:
        return "SYM"


@dataclass(frozen=True)
class Role:
    index: int

    def __str__(self) -> str:
        return f"R{self.index}"


Functor = Union[str, Sym, Role]


@dataclass(frozen=True)
class Term:
    def __str__(self) -> str:
        return show(self)


@dataclass(frozen=True)
class Var(Term):
    name: str


@dataclass(frozen=True)
class Lam(Term):
    var: str
    body: Term


@dataclass(frozen=True)
class App(Term):
    fn: Term
    arg: Term


@dataclass(frozen=True)
class Pred(Term):
    functor: Functor
    args: Tuple[Term, ...] = ()


@dataclass(frozen=True)
class Drs(Term):
    refs: Tuple[str, ...] = ()
    conds: Tuple[Term, ...] = ()


@dataclass(frozen=True)
class Merge(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class Not(Term):
    body: Term


@dataclass(frozen=True)
class Imp(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class Or(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class And(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class Exists(Term):
    var: str
    body: Term


@dataclass(frozen=True)
class Forall(Term):
    var: str
    body: Term


TRUE = Pred("⊤")

_BINDERS = (Lam, Exists, Forall)
_BINARY = (And, Or, Imp)


def app(fn: Term, *args: Term) -> Term:
    """Curried application: app(f, a, b) is f(a)(b)."""
    for a in args:
        fn = App(fn, a)
    return fn


def conj(terms: Sequence[Term]) -> Term:
    if not terms:
        return TRUE
    out = terms[0]
    for t in terms[1:]:
        out = And(out, t)
    return out


# =========================
# Variables
# =========================

def exported(t: Term) -> FrozenSet[str]:
    """Referents a term declares for what follows it in a merge or implication."""
    if isinstance(t, Drs):
        return frozenset(t.refs)
    if isinstance(t, Merge):
        return exported(t.left) | exported(t.right)
    return frozenset()


def free_vars(t: Term) -> Set[str]:
    if isinstance(t, Var):
        return {t.name}
    if isinstance(t, _BINDERS):
        return free_vars(t.body) - {t.var}
    if isinstance(t, App):
        return free_vars(t.fn) | free_vars(t.arg)
    if isinstance(t, Pred):
        return set().union(*(free_vars(a) for a in t.args))
    if isinstance(t, Drs):
        return set().union(*(free_vars(c) for c in t.conds)) - set(t.refs)
    if isinstance(t, (Merge, Imp)):
        return free_vars(t.left) | (free_vars(t.right) - exported(t.left))
    if isinstance(t, Not):
        return free_vars(t.body)
    if isinstance(t, (And, Or)):
        return free_vars(t.left) | free_vars(t.right)
    raise TermError(f"not a term: {t!r}")


def names(t: Term) -> Set[str]:
    """Every variable name in a term, bound or free."""
    if isinstance(t, Var):
        return {t.name}
    if isinstance(t, _BINDERS):
        return names(t.body) | {t.var}
    if isinstance(t, Drs):
        return set(t.refs).union(*(names(c) for c in t.conds))
    if isinstance(t, Pred):
        return set().union(*(names(a) for a in t.args))
    return set().union(*(names(c) for c in _children(t)))


def _children(t: Term) -> Tuple[Term, ...]:
    if isinstance(t, (Var, Pred)):
        return t.args if isinstance(t, Pred) else ()
    if isinstance(t, _BINDERS) or isinstance(t, Not):
        return (t.body,)
    if isinstance(t, App):
        return (t.fn, t.arg)
    if isinstance(t, Drs):
        return t.conds
    if isinstance(t, (Merge, Imp, And, Or)):
        return (t.left, t.right)
    raise TermError(f"not a term: {t!r}")


_SUFFIX_RE = re.compile(r"\d+$")


def fresh(base: str, avoid: Iterable[str]) -> str:
    avoid = set(avoid)
    stem = _SUFFIX_RE.sub("", base) or base
    i = 1
    while f"{stem}{i}" in avoid:
        i += 1
    return f"{stem}{i}"


# =========================
# Substitution
# =========================

def _rename_ref(t: Term, old: str, new: str) -> Term:
    """Rename a referent that `t` declares, together with what it binds inside `t`."""
    if isinstance(t, Drs):
        refs = tuple(new if r == old else r for r in t.refs)
        return Drs(refs, tuple(substitute(c, old, Var(new)) for c in t.conds))
    if isinstance(t, Merge):
        if old in exported(t.left):
            right = substitute(t.right, old, Var(new))
            if old in exported(t.right):
                right = _rename_ref(right, old, new)
            return Merge(_rename_ref(t.left, old, new), right)
        return Merge(t.left, _rename_ref(t.right, old, new))
    return t


def _sequence(t: Union[Merge, Imp], v: str, n: Term) -> Term:
    left, right = t.left, t.right
    n_free = free_vars(n)
    for old in sorted(exported(left) & n_free):
        new = fresh(old, names(t) | n_free | {v})
        left = _rename_ref(left, old, new)
        right = substitute(right, old, Var(new))
    left2 = substitute(left, v, n)
    right2 = right if v in exported(left) else substitute(right, v, n)
    return type(t)(left2, right2)


def substitute(t: Term, v: str, n: Term) -> Term:
    """Capture-avoiding t[v := n]."""
    if isinstance(t, Var):
        return n if t.name == v else t
    if v not in free_vars(t):
        return t
    if isinstance(t, _BINDERS):
        if t.var == v:
            return t
        var, body = t.var, t.body
        if var in free_vars(n) and v in free_vars(body):
            new = fresh(var, names(body) | free_vars(n) | {v})
            body = substitute(body, var, Var(new))
            var = new
        return type(t)(var, substitute(body, v, n))
    if isinstance(t, App):
        return App(substitute(t.fn, v, n), substitute(t.arg, v, n))
    if isinstance(t, Pred):
        return Pred(t.functor, tuple(substitute(a, v, n) for a in t.args))
    if isinstance(t, Drs):
        if v in t.refs:
            return t
        n_free = free_vars(n)
        drs = t
        for old in sorted(set(t.refs) & n_free):
            drs = _rename_ref(drs, old, fresh(old, names(drs) | n_free | {v}))
        return Drs(drs.refs, tuple(substitute(c, v, n) for c in drs.conds))
    if isinstance(t, (Merge, Imp)):
        return _sequence(t, v, n)
    if isinstance(t, Not):
        return Not(substitute(t.body, v, n))
    if isinstance(t, (And, Or)):
        return type(t)(substitute(t.left, v, n), substitute(t.right, v, n))
    raise TermError(f"not a term: {t!r}")


def merge_boxes(a: Drs, b: Drs) -> Drs:
    """
    a;b as one box: referents and conditions are unioned. Referents `b`
    re-declares, or that clash with names free in `a`, are renamed first;
    names free in `b` that `a` declares stay bound by `a`.
    """
    clash = (set(b.refs) & set(a.refs)) | (set(b.refs) & free_vars(a))
    for old in sorted(clash):
        b = _rename_ref(b, old, fresh(old, names(a) | names(b)))
    return Drs(a.refs + b.refs, a.conds + b.conds)


# =========================
# Reduction
# =========================

def _step(t: Term) -> Optional[Term]:
    """One leftmost-outermost reduction step, or None in normal form."""
    if isinstance(t, App):
        if isinstance(t.fn, Lam):
            return substitute(t.fn.body, t.fn.var, t.arg)
        s = _step(t.fn)
        if s is not None:
            return App(s, t.arg)
        s = _step(t.arg)
        return App(t.fn, s) if s is not None else None
    if isinstance(t, Merge):
        s = _step(t.left)
        if s is not None:
            return Merge(s, t.right)
        s = _step(t.right)
        if s is not None:
            return Merge(t.left, s)
        if isinstance(t.left, Drs) and isinstance(t.right, Drs):
            return merge_boxes(t.left, t.right)
        return None
    if isinstance(t, _BINDERS):
        s = _step(t.body)
        return type(t)(t.var, s) if s is not None else None
    if isinstance(t, Not):
        s = _step(t.body)
        return Not(s) if s is not None else None
    if isinstance(t, (Imp, And, Or)):
        s = _step(t.left)
        if s is not None:
            return type(t)(s, t.right)
        s = _step(t.right)
        return type(t)(t.left, s) if s is not None else None
    if isinstance(t, Drs):
        for i, c in enumerate(t.conds):
            s = _step(c)
            if s is not None:
                return Drs(t.refs, t.conds[:i] + (s,) + t.conds[i + 1:])
        return None
    if isinstance(t, Pred):
        for i, a in enumerate(t.args):
            s = _step(a)
            if s is not None:
                return Pred(t.functor, t.args[:i] + (s,) + t.args[i + 1:])
        return None
    if isinstance(t, Var):
        return None
    raise TermError(f"not a term: {t!r}")


def beta_reduce(t: Term, max_steps: int = DEFAULT_STEP_BUDGET) -> Term:
    """Normal form by normal-order beta reduction and box merging."""
    steps = 0
    while True:
        nxt = _step(t)
        if nxt is None:
            if steps:
                LOGGER.debug("reduced in %d steps", steps)
            return t
        steps += 1
        if steps > max_steps:
            raise NonTerminating(f"no normal form within {max_steps} reduction steps")
        t = nxt


# =========================
# Alpha equivalence
# =========================

def _canon(t: Term, env: Dict[str, str], counter: List[int]) -> Tuple[Term, Dict[str, str]]:
    def new_name() -> str:
        counter[0] += 1
        return f"_{counter[0]}"

    if isinstance(t, Var):
        return Var(env.get(t.name, t.name)), {}
    if isinstance(t, _BINDERS):
        name = new_name()
        body, _ = _canon(t.body, {**env, t.var: name}, counter)
        return type(t)(name, body), {}
    if isinstance(t, Drs):
        mapping = {r: new_name() for r in t.refs}
        inner = {**env, **mapping}
        conds = tuple(_canon(c, inner, counter)[0] for c in t.conds)
        return Drs(tuple(mapping[r] for r in t.refs), conds), mapping
    if isinstance(t, (Merge, Imp)):
        left, out = _canon(t.left, env, counter)
        right, out_r = _canon(t.right, {**env, **out}, counter)
        return type(t)(left, right), ({**out, **out_r} if isinstance(t, Merge) else {})
    if isinstance(t, App):
        return App(_canon(t.fn, env, counter)[0], _canon(t.arg, env, counter)[0]), {}
    if isinstance(t, Pred):
        return Pred(t.functor, tuple(_canon(a, env, counter)[0] for a in t.args)), {}
    if isinstance(t, Not):
        return Not(_canon(t.body, env, counter)[0]), {}
    if isinstance(t, (And, Or)):
        return type(t)(_canon(t.left, env, counter)[0], _canon(t.right, env, counter)[0]), {}
    raise TermError(f"not a term: {t!r}")


def canonical(t: Term) -> Term:
    return _canon(t, {}, [0])[0]


def alpha_equal(a: Term, b: Term) -> bool:
    return canonical(a) == canonical(b)


# =========================
# Slots
# =========================

def role_slots(t: Term) -> Set[int]:
    if isinstance(t, Pred):
        own = {t.functor.index} if isinstance(t.functor, Role) else set()
        return own.union(*(role_slots(a) for a in t.args))
    return set().union(*(role_slots(c) for c in _children(t)))


def has_sym(t: Term) -> bool:
    if isinstance(t, Pred) and isinstance(t.functor, Sym):
        return True
    return any(has_sym(c) for c in _children(t))


def fill_slots(t: Term, symbol: str, roles: Sequence[str]) -> Term:
    """Replace SYM by `symbol` and R<i> by roles[i-1]."""
    if isinstance(t, Pred):
        f = t.functor
        if isinstance(f, Sym):
            f = symbol
        elif isinstance(f, Role):
            if not 1 <= f.index <= len(roles):
                raise TermError(f"role slot R{f.index} has no filler")
            f = roles[f.index - 1]
        return Pred(f, tuple(fill_slots(a, symbol, roles) for a in t.args))
    if isinstance(t, Var):
        return t
    if isinstance(t, _BINDERS):
        return type(t)(t.var, fill_slots(t.body, symbol, roles))
    if isinstance(t, App):
        return App(fill_slots(t.fn, symbol, roles), fill_slots(t.arg, symbol, roles))
    if isinstance(t, Drs):
        return Drs(t.refs, tuple(fill_slots(c, symbol, roles) for c in t.conds))
    if isinstance(t, Not):
        return Not(fill_slots(t.body, symbol, roles))
    if isinstance(t, (Merge, Imp, And, Or)):
        return type(t)(fill_slots(t.left, symbol, roles), fill_slots(t.right, symbol, roles))
    raise TermError(f"not a term: {t!r}")


# =========================
# First-order translation
# =========================

def to_fol(t: Term) -> Term:
    """
    Boxes become existentially closed conjunctions; an implication whose
    antecedent is a box quantifies that box's referents universally.
    """
    if isinstance(t, Drs):
        body = conj([to_fol(c) for c in t.conds])
        for r in reversed(t.refs):
            body = Exists(r, body)
        return body
    if isinstance(t, Merge):
        box = _flatten_merge(t)
        if isinstance(box, Drs):
            return to_fol(box)
        if isinstance(box.left, Drs):
            # the left box scopes over the right operand
            body = And(conj([to_fol(c) for c in box.left.conds]), to_fol(box.right))
            for r in reversed(box.left.refs):
                body = Exists(r, body)
            return body
        return And(to_fol(box.left), to_fol(box.right))
    if isinstance(t, Imp):
        left = _flatten_merge(t.left)
        if isinstance(left, Drs):
            body = Imp(conj([to_fol(c) for c in left.conds]), to_fol(t.right))
            for r in reversed(left.refs):
                body = Forall(r, body)
            return body
        return Imp(to_fol(left), to_fol(t.right))
    if isinstance(t, (Var, Pred)):
        return t
    if isinstance(t, _BINDERS):
        return type(t)(t.var, to_fol(t.body))
    if isinstance(t, App):
        return App(to_fol(t.fn), to_fol(t.arg))
    if isinstance(t, Not):
        return Not(to_fol(t.body))
    if isinstance(t, (And, Or)):
        return type(t)(to_fol(t.left), to_fol(t.right))
    raise TermError(f"not a term: {t!r}")


def _flatten_merge(t: Term) -> Term:
    if isinstance(t, Merge):
        left, right = _flatten_merge(t.left), _flatten_merge(t.right)
        if isinstance(left, Drs) and isinstance(right, Drs):
            return merge_boxes(left, right)
        return Merge(left, right)
    return t


# =========================
# Linear notation
# =========================

_OPS = {And: "∧", Or: "∨", Imp: "→"}


def _operand(t: Term, parent: type) -> str:
    s = show(t)
    if isinstance(t, (Lam, Merge)) or (isinstance(t, _BINARY) and not (type(t) is parent and parent in (And, Or))):
        return f"({s})"
    return s


def show(t: Term) -> str:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Lam):
        return f"λ{t.var}.{show(t.body)}"
    if isinstance(t, App):
        head = show(t.fn) if isinstance(t.fn, (Var, App)) else f"({show(t.fn)})"
        return f"{head}({show(t.arg)})"
    if isinstance(t, Pred):
        if not t.args:
            return str(t.functor)
        return f"{t.functor}({','.join(show(a) for a in t.args)})"
    if isinstance(t, Drs):
        return f"[{','.join(t.refs)} | {', '.join(show(c) for c in t.conds)}]"
    if isinstance(t, Merge):
        parts = []
        for side in (t.left, t.right):
            s = show(side)
            parts.append(f"({s})" if isinstance(side, (Lam,) + _BINARY) else s)
        return ";".join(parts)
    if isinstance(t, Not):
        return "¬" + _operand(t.body, Not)
    if isinstance(t, _BINARY):
        return f"{_operand(t.left, type(t))} {_OPS[type(t)]} {_operand(t.right, type(t))}"
    if isinstance(t, Exists):
        return f"∃{t.var}({show(t.body)})"
    if isinstance(t, Forall):
        return f"∀{t.var}({show(t.body)})"
    raise TermError(f"not a term: {t!r}")
