"""
Registry mapping (sem-tag, CCG category) pairs to lambda-DRS templates.

The registry is read from data/schemas.txt, one `(TAG "category" template)`
entry per line, so new pairs are added without code changes. Loading checks
every entry: a known tag, a well-formed category, a closed template whose
role slots run R1..Rn, and no duplicate (tag, category) key.
"""
from __future__ import annotations

import logging
import os
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import pandas as pd

from ccg import WILDCARD, CcgCategory, as_category, parse_category
from drs import (
    And, Drs, Exists, Forall, Imp, Lam, Merge, Not, Or, Pred, Role, Sym, Term, Var,
    app, beta_reduce, fill_slots, free_vars, role_slots, show,
)
from errors import ArityMismatch, CategoryError, FormatError, TermError, UnknownTag, UnregisteredPair
from tagset import DATA_DIR, SemTag, Tagset, default_tagset

LOGGER = logging.getLogger(__name__)

SCHEMA_PATH = os.path.join(DATA_DIR, "schemas.txt")

_TOKEN_RE = re.compile(r'\s*(?:(\()|(\))|"([^"]*)"|([^\s()"]+))')
_NAME_RE = re.compile(r"^[^\s(),;\[\]|.]+$")


class _Quoted(str):
    pass


# =========================
# S-expressions
# =========================

def _read_sexpr(text: str):
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise TermError(f"cannot read {text[pos:pos + 10]!r}")
        if m.group(1):
            tokens.append("(")
        elif m.group(2):
            tokens.append(")")
        elif m.group(3) is not None:
            tokens.append(_Quoted(m.group(3)))
        else:
            tokens.append(m.group(4))
        pos = m.end()

    def parse(i: int):
        tok = tokens[i]
        if tok == "(" and not isinstance(tok, _Quoted):
            items = []
            i += 1
            while i < len(tokens) and not (tokens[i] == ")" and not isinstance(tokens[i], _Quoted)):
                item, i = parse(i)
                items.append(item)
            if i >= len(tokens):
                raise TermError("unbalanced parentheses")
            return items, i + 1
        if tok == ")" and not isinstance(tok, _Quoted):
            raise TermError("unexpected ')'")
        return tok, i + 1

    if not tokens:
        raise TermError("empty expression")
    expr, end = parse(0)
    if end != len(tokens):
        raise TermError("trailing input after expression")
    return expr


def _atom(x, what: str) -> str:
    if isinstance(x, list) or isinstance(x, _Quoted):
        raise TermError(f"expected {what}, found {x!r}")
    return x


_FIXED_ARITY = {"lam": 3, "not": 2, "imp": 3, "or": 3, "exists": 3, "forall": 3}


def build_term(expr) -> Term:
    """Turn a parsed template s-expression into a term."""
    if not isinstance(expr, list):
        return Var(_atom(expr, "a variable"))
    if not expr:
        raise TermError("empty form ()")
    head = _atom(expr[0], "a form name")
    rest = expr[1:]
    if head in _FIXED_ARITY and len(expr) != _FIXED_ARITY[head]:
        raise TermError(f"({head} ...) takes {_FIXED_ARITY[head] - 1} operand(s)")

    if head == "lam":
        return Lam(_atom(rest[0], "a variable"), build_term(rest[1]))
    if head in ("exists", "forall"):
        cls = Exists if head == "exists" else Forall
        return cls(_atom(rest[0], "a variable"), build_term(rest[1]))
    if head == "app":
        if len(rest) < 2:
            raise TermError("(app f a ...) needs a function and an argument")
        return app(build_term(rest[0]), *(build_term(a) for a in rest[1:]))
    if head == "box":
        if not rest or not isinstance(rest[0], list):
            raise TermError("(box (refs ...) conds ...) needs a referent list")
        refs = tuple(_atom(r, "a referent") for r in rest[0])
        return Drs(refs, tuple(build_term(c) for c in rest[1:]))
    if head in ("merge", "and"):
        if len(rest) < 2:
            raise TermError(f"({head} ...) needs at least two operands")
        cls = Merge if head == "merge" else And
        out = build_term(rest[0])
        for r in rest[1:]:
            out = cls(out, build_term(r))
        return out
    if head == "not":
        return Not(build_term(rest[0]))
    if head in ("imp", "or"):
        cls = Imp if head == "imp" else Or
        return cls(build_term(rest[0]), build_term(rest[1]))
    if head == "sym":
        return Pred(Sym(), tuple(build_term(a) for a in rest))
    if head == "role":
        if not rest:
            raise TermError("(role n args ...) needs a slot number")
        n = _atom(rest[0], "a slot number")
        if not n.isdigit() or int(n) < 1:
            raise TermError(f"role slot must be a positive integer, found {n!r}")
        return Pred(Role(int(n)), tuple(build_term(a) for a in rest[1:]))
    if head == "pred":
        if not rest:
            raise TermError("(pred name args ...) needs a name")
        return Pred(_atom(rest[0], "a predicate name"), tuple(build_term(a) for a in rest[1:]))
    raise TermError(f"unknown form ({head} ...)")


# =========================
# Registry
# =========================

@dataclass(frozen=True)
class SemSchema:
    tag: SemTag
    category: CcgCategory
    template: Term

    @property
    def role_count(self) -> int:
        return len(role_slots(self.template))

    def __str__(self) -> str:
        return f"{self.tag.code} {self.category}: {show(self.template)}"


def _check_entry(schema: SemSchema):
    loose = free_vars(schema.template)
    if loose:
        raise TermError(f"template has free variables: {', '.join(sorted(loose))}")
    slots = role_slots(schema.template)
    if slots != set(range(1, len(slots) + 1)):
        raise TermError(f"role slots must be numbered R1..R{len(slots)}, found {sorted(slots)}")
    for label in schema.category.roles():
        if label not in {f"R{i}" for i in slots}:
            raise CategoryError(f"category role {label} has no slot in the template")


class SchemaRegistry:
    """Immutable after load; safe for concurrent lookups."""

    def __init__(self, schemas: Sequence[SemSchema]):
        self._schemas = list(schemas)
        self._index: Dict[Tuple[str, CcgCategory], SemSchema] = {}
        for s in self._schemas:
            key = (s.tag.code, s.category.strip_roles())
            if key in self._index:
                raise FormatError(f"duplicate schema for {s.tag.code} {s.category.strip_roles()}")
            self._index[key] = s

    @classmethod
    def parse(cls, lines: Iterable[str], tagset: Optional[Tagset] = None) -> "SchemaRegistry":
        ts = tagset or default_tagset()
        schemas: List[SemSchema] = []
        seen = set()
        for line_no, raw in enumerate(lines, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            try:
                expr = _read_sexpr(line)
                if not isinstance(expr, list) or len(expr) != 3 or not isinstance(expr[1], _Quoted):
                    raise TermError('entries look like (TAG "category" template)')
                tag = ts.parse_tag(_atom(expr[0], "a sem-tag"))
                schema = SemSchema(tag, parse_category(expr[1]), build_term(expr[2]))
                _check_entry(schema)
            except UnknownTag as e:
                raise UnknownTag(e.code, line_no) from None
            except (TermError, CategoryError) as e:
                raise FormatError(e.message, line_no) from None
            key = (schema.tag.code, schema.category.strip_roles())
            if key in seen:
                raise FormatError(f"duplicate schema for {key[0]} {key[1]}", line_no)
            seen.add(key)
            schemas.append(schema)
        return cls(schemas)

    @classmethod
    def load(cls, path: str = SCHEMA_PATH, tagset: Optional[Tagset] = None) -> "SchemaRegistry":
        with open(path, encoding="utf-8") as f:
            registry = cls.parse(f, tagset)
        LOGGER.debug("loaded %d schemas from %s", len(registry), path)
        return registry

    def schema_for(self, tag: Union[SemTag, str], category: Union[CcgCategory, str],
                   tagset: Optional[Tagset] = None) -> SemSchema:
        if isinstance(tag, str):
            tag = (tagset or default_tagset()).parse_tag(tag)
        key = as_category(category).strip_roles()
        found = self._index.get((tag.code, key)) or self._index.get((tag.code, WILDCARD))
        if found is None:
            raise UnregisteredPair(f"no schema registered for {tag.code} with category {key}")
        return found

    def entries(self) -> List[SemSchema]:
        return list(self._schemas)

    def tags(self) -> List[SemTag]:
        out: List[SemTag] = []
        for s in self._schemas:
            if s.tag not in out:
                out.append(s.tag)
        return sorted(out, key=lambda t: t.index)

    def categories_for(self, tag: SemTag) -> List[CcgCategory]:
        return [s.category for s in self._schemas if s.tag == tag]

    def frame(self) -> pd.DataFrame:
        return pd.DataFrame([{
            "tag": s.tag.code,
            "category": str(s.category),
            "roles": s.role_count,
            "template": show(s.template),
        } for s in self._schemas])

    def __len__(self) -> int:
        return len(self._schemas)

    def __iter__(self):
        return iter(self._schemas)


@lru_cache(maxsize=1)
def default_registry() -> SchemaRegistry:
    return SchemaRegistry.load()


def _check_name(name: str, what: str):
    if not name or not _NAME_RE.match(name):
        raise TermError(f"invalid {what} {name!r}")


def schema_for(tag: Union[SemTag, str], category: Union[CcgCategory, str]) -> SemSchema:
    return default_registry().schema_for(tag, category)


def instantiate(schema: SemSchema, symbol: str, roles: Sequence[str] = ()) -> Term:
    """Fill SYM with `symbol` and R1..Rn with `roles`, in slot order."""
    if len(roles) != schema.role_count:
        raise ArityMismatch(
            f"{schema.tag.code} {schema.category} has {schema.role_count} role slot(s), {len(roles)} given"
        )
    _check_name(symbol, "symbol")
    for r in roles:
        _check_name(r, "role name")
    return fill_slots(schema.template, symbol, list(roles))


def interpret(tag: Union[SemTag, str], category: Union[CcgCategory, str], symbol: str,
              roles: Sequence[str] = (), registry: Optional[SchemaRegistry] = None) -> Term:
    """Lexical meaning of one token: look up, instantiate and normalize."""
    reg = registry or default_registry()
    return beta_reduce(instantiate(reg.schema_for(tag, category), symbol, roles))
