from typing import Any, List, Tuple

from errors import FormatError

JOINER = "~"
BOM = "\ufeff"


def clean_line(line: Any, first: bool = False) -> str:
    if line is None:
        return ""
    s = str(line)
    if first and s.startswith(BOM):
        s = s[1:]
    # keep inner TABs, drop the line terminator only
    return s.rstrip("\r\n")


def clean_tag_code(code: Any, upcase: bool = False) -> str:
    s = "" if code is None else str(code).strip()
    return s.upper() if upcase else s


def check_part(part: str) -> str:
    if part == "":
        raise FormatError("empty token part")
    if JOINER in part:
        raise FormatError(f"token part {part!r} contains the joiner {JOINER!r}")
    for ch in part:
        if ch.isspace():
            raise FormatError(f"token part {part!r} contains whitespace")
    return part


def split_surface(surface: str) -> Tuple[str, ...]:
    """Split a serialized surface ("United~States") into its parts."""
    if surface == "":
        raise FormatError("empty token")
    return tuple(check_part(p) for p in surface.split(JOINER))


def join_parts(parts: List[str]) -> str:
    return JOINER.join(parts)


def is_capitalized(surface: str) -> bool:
    return bool(surface) and surface[0].isupper()


def suffix_source(surface: str) -> str:
    # multiword tokens: only the last part feeds suffix statistics
    return surface.rsplit(JOINER, 1)[-1]
