"""Presentation text grammar and JSON loading.

Two text forms are accepted::

    gens: t a
    rels: t a t^-1 a^-2 ; ...

    t, a | t a t^-1 a^-2 ; ...

Lines starting with ``#`` are comments. JSON input (canonical schema) is
recognized by a leading ``{``.
"""

from __future__ import annotations

import json
import re
import warnings

from .errors import DuplicateGenerator, PresentationSyntaxError
from .presentations import FinitePresentation
from .words import NAME_RE, cyclic_reduce, parse_word


class TrivialRelatorWarning(UserWarning):
    pass


def _parse_gens(text: str, offset: int) -> list[str]:
    names: list[str] = []
    for m in re.finditer(r"[^\s,]+", text):
        name = m.group(0)
        if not NAME_RE.match(name):
            raise PresentationSyntaxError(f"invalid generator name {name!r}", offset + m.start())
        if name in names:
            raise DuplicateGenerator(f"duplicate generator {name!r}", offset + m.start())
        names.append(name)
    return names


def _parse_rels(text: str, offset: int, names: list[str]):
    rels = []
    pos = 0
    for chunk in text.split(";"):
        if chunk.strip():
            w = parse_word(chunk, names, offset + pos)
            core, _ = cyclic_reduce(w)
            if not core:
                warnings.warn(f"dropping trivial relator {chunk.strip()!r}",
                              TrivialRelatorWarning, stacklevel=3)
            else:
                rels.append(core)
        pos += len(chunk) + 1
    return rels


def parse_presentation(text: str) -> FinitePresentation:
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            return FinitePresentation.from_dict(json.loads(text))
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise PresentationSyntaxError(f"invalid presentation JSON: {exc}") from None

    # blank out comments, keeping offsets intact
    clean = re.sub(r"#[^\n]*", lambda m: " " * len(m.group(0)), text)
    gm = re.search(r"^[ \t]*gens[ \t]*:", clean, re.M)
    if gm:
        gline_end = clean.find("\n", gm.end())
        gline_end = len(clean) if gline_end < 0 else gline_end
        names = _parse_gens(clean[gm.end():gline_end], gm.end())
        rels = []
        rest = clean[gline_end:]
        for rm in re.finditer(r"^[ \t]*rels[ \t]*:([^\n]*)", rest, re.M):
            rels += _parse_rels(rm.group(1), gline_end + rm.start(1), names)
        leftover = re.sub(r"^[ \t]*rels[ \t]*:[^\n]*", "", rest, flags=re.M)
        if leftover.strip():
            bad = gline_end + rest.find(leftover.strip()[0])
            raise PresentationSyntaxError("unexpected text outside gens:/rels: lines", bad)
        return FinitePresentation(tuple(names), tuple(rels))

    body = " ".join(clean.split("\n"))
    if "|" not in body:
        raise PresentationSyntaxError("expected 'gens:' line or 'generators | relators'",
                                      len(text.rstrip()))
    bar = body.index("|")
    if "|" in body[bar + 1:]:
        raise PresentationSyntaxError("more than one '|'", body.index("|", bar + 1))
    names = _parse_gens(body[:bar], 0)
    rels = _parse_rels(body[bar + 1:], bar + 1, names)
    return FinitePresentation(tuple(names), tuple(rels))


def dump_presentation(p: FinitePresentation) -> str:
    return json.dumps(p.to_dict(), indent=2, sort_keys=True) + "\n"


def load_presentation(path: str) -> FinitePresentation:
    with open(path, encoding="utf-8") as fh:
        return parse_presentation(fh.read())
