"""
CCG categories with optional thematic-role labels on argument slots.

    S\\NP              intransitive verb
    (S\\NP:R1)/NP:R2   transitive verb, subject slot R1, object slot R2
    *                  any category (used by registry entries such as NIL)

Slashes associate to the left, so `(S\\NP)/NP` and `S\\NP/NP` parse alike.
Role labels never take part in matching: `strip_roles()` gives the lookup key.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import List, Optional, Union

from errors import CategoryError

WILDCARD_SYMBOL = "*"

_TOKEN_RE = re.compile(r"\s*(?:([A-Z][A-Za-z]*(?:\[[a-z]+\])?|\*)|(:[A-Za-z][A-Za-z0-9]*)|([()/\\]))")


@dataclass(frozen=True)
class Atomic:
    name: str

    def strip_roles(self) -> "Atomic":
        return self

    def roles(self) -> List[str]:
        return []

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Functor:
    result: "CcgCategory"
    slash: str
    arg: "CcgCategory"
    role: Optional[str] = None

    def __post_init__(self):
        if self.slash not in ("/", "\\"):
            raise CategoryError(f"bad slash {self.slash!r}")

    def strip_roles(self) -> "Functor":
        return Functor(self.result.strip_roles(), self.slash, self.arg.strip_roles())

    def roles(self) -> List[str]:
        own = [self.role] if self.role else []
        return self.result.roles() + self.arg.roles() + own

    def __str__(self) -> str:
        def part(c):
            return f"({c})" if isinstance(c, Functor) else str(c)
        label = f":{self.role}" if self.role else ""
        return f"{part(self.result)}{self.slash}{part(self.arg)}{label}"


CcgCategory = Union[Atomic, Functor]

WILDCARD = Atomic(WILDCARD_SYMBOL)


def _tokenize(text: str) -> List[str]:
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            raise CategoryError(f"unexpected character {text[pos:].strip()[:1]!r} in category {text!r}")
        tokens.append(m.group(m.lastindex))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> Optional[str]:
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def take(self) -> str:
        tok = self.peek()
        if tok is None:
            raise CategoryError(f"category {self.text!r} ends unexpectedly")
        self.i += 1
        return tok

    def category(self) -> CcgCategory:
        cat = self.term()
        while self.peek() in ("/", "\\"):
            slash = self.take()
            arg = self.term()
            role = None
            if self.peek() and self.peek().startswith(":"):
                role = self.take()[1:]
            cat = Functor(cat, slash, arg, role)
        return cat

    def term(self) -> CcgCategory:
        tok = self.take()
        if tok == "(":
            inner = self.category()
            if self.take() != ")":
                raise CategoryError(f"unbalanced parentheses in {self.text!r}")
            return inner
        if tok in (")", "/", "\\") or tok.startswith(":"):
            raise CategoryError(f"unexpected {tok!r} in {self.text!r}")
        return Atomic(tok)


def parse_category(text: str) -> CcgCategory:
    p = _Parser(text)
    if not p.tokens:
        raise CategoryError("empty category")
    cat = p.category()
    if p.peek() is not None:
        raise CategoryError(f"trailing {p.peek()!r} in category {text!r}")
    if WILDCARD_SYMBOL in str(cat) and cat != WILDCARD:
        raise CategoryError("`*` stands for a whole category")
    return cat


def as_category(value: Union[str, CcgCategory]) -> CcgCategory:
    return parse_category(value) if isinstance(value, str) else value
