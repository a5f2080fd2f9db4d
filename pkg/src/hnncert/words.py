"""Freely reduced words over signed generator alphabets.

A letter is a pair ``(generator id, sign)`` with sign in ``{+1, -1}``.
Words never hold a cancelling pair; every constructor reduces eagerly.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import PresentationSyntaxError, UnknownGenerator

Letter = tuple[int, int]

NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")
_ATOM_RE = re.compile(r"([A-Za-z][A-Za-z0-9_]*)(?:\^([+-]?\d+))?\Z")


@dataclass(frozen=True)
class GeneratorSymbol:
    id: int
    name: str

    def __post_init__(self):
        if self.id < 0:
            raise ValueError(f"negative generator id {self.id}")
        if not NAME_RE.match(self.name):
            raise ValueError(f"invalid generator name {self.name!r}")


def _reduce(letters: Iterable[Letter]) -> tuple[Letter, ...]:
    out: list[Letter] = []
    for gen, sign in letters:
        if sign not in (1, -1):
            raise ValueError(f"letter sign must be +1 or -1, got {sign!r}")
        if gen < 0:
            raise ValueError(f"negative generator id {gen}")
        if out and out[-1][0] == gen and out[-1][1] == -sign:
            out.pop()
        else:
            out.append((gen, sign))
    return tuple(out)


class Word:
    """An immutable freely reduced word."""

    __slots__ = ("letters",)

    def __init__(self, letters: Iterable[Letter] = ()):
        object.__setattr__(self, "letters", _reduce((int(g), int(s)) for g, s in letters))

    def __setattr__(self, name, value):
        raise AttributeError("Word is immutable")

    @classmethod
    def gen(cls, g: int, power: int = 1) -> "Word":
        sign = 1 if power >= 0 else -1
        return cls([(g, sign)] * abs(power))

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return Word(self.letters[i])
        return self.letters[i]

    def __bool__(self) -> bool:
        return bool(self.letters)

    def __eq__(self, other) -> bool:
        return isinstance(other, Word) and self.letters == other.letters

    def __hash__(self) -> int:
        return hash(self.letters)

    def __repr__(self) -> str:
        return f"Word({list(self.letters)!r})"

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def __invert__(self) -> "Word":
        return Word((g, -s) for g, s in reversed(self.letters))

    def inverse(self) -> "Word":
        return ~self

    def __pow__(self, n: int) -> "Word":
        if n < 0:
            return (~self) ** (-n)
        return Word(self.letters * n)

    def conjugate(self, by: "Word") -> "Word":
        """Return ``by * self * by^-1``."""
        return by * self * ~by

    def generators(self) -> set[int]:
        return {g for g, _ in self.letters}

    def count(self, g: int) -> int:
        return sum(1 for h, _ in self.letters if h == g)

    def substitute(self, images: Mapping[int, "Word"]) -> "Word":
        """Replace each generator by its image; unmapped generators are kept."""
        out: list[Letter] = []
        for g, s in self.letters:
            if g in images:
                img = images[g]
                out.extend(img.letters if s == 1 else (~img).letters)
            else:
                out.append((g, s))
        return Word(out)

    def rename(self, mapping: Mapping[int, int]) -> "Word":
        return Word((mapping[g], s) for g, s in self.letters)

    def is_cyclically_reduced(self) -> bool:
        if len(self.letters) < 2:
            return True
        (g0, s0), (g1, s1) = self.letters[0], self.letters[-1]
        return not (g0 == g1 and s0 == -s1)

    def format(self, names: Sequence[str]) -> str:
        return format_word(self, names)


def free_reduce(raw: Iterable[Letter]) -> Word:
    return Word(raw)


def cyclic_reduce(w: Word) -> tuple[Word, Word]:
    """Split ``w`` as ``conjugator * core * conjugator^-1`` with ``core`` cyclically reduced."""
    letters = w.letters
    i, j = 0, len(letters) - 1
    while i < j and letters[i][0] == letters[j][0] and letters[i][1] == -letters[j][1]:
        i += 1
        j -= 1
    return Word(letters[i : j + 1]), Word(letters[:i])


def exponent_sum(w: Word, g: int | GeneratorSymbol) -> int:
    gid = g.id if isinstance(g, GeneratorSymbol) else g
    return sum(s for h, s in w.letters if h == gid)


def cyclic_conjugates(w: Word) -> set[Word]:
    """All cyclic rotations of a cyclically reduced word (as reduced words)."""
    letters = w.letters
    return {Word(letters[i:] + letters[:i]) for i in range(max(len(letters), 1))}


# -- text grammar ------------------------------------------------------------

def parse_word(text: str, names: Sequence[str] | Mapping[str, int], offset: int = 0) -> Word:
    """Parse ``a b^-1 * c^2`` style text; ``1`` is the empty word.

    ``offset`` shifts reported error positions when ``text`` is a slice of a
    larger document.
    """
    index = names if isinstance(names, Mapping) else {n: i for i, n in enumerate(names)}
    letters: list[Letter] = []
    for m in re.finditer(r"[^\s*]+", text):
        atom, pos = m.group(0), offset + m.start()
        if atom == "1":
            continue
        am = _ATOM_RE.match(atom)
        if am is None:
            raise PresentationSyntaxError(f"malformed word atom {atom!r}", pos)
        name, exp = am.group(1), am.group(2)
        if name not in index:
            raise UnknownGenerator(f"unknown generator {name!r}", pos)
        e = 1 if exp is None else int(exp)
        if e == 0:
            raise PresentationSyntaxError(f"zero exponent in {atom!r}", pos)
        letters.extend([(index[name], 1 if e > 0 else -1)] * abs(e))
    return Word(letters)


def format_word(w: Word, names: Sequence[str]) -> str:
    if not w:
        return "1"
    parts: list[str] = []
    letters = w.letters
    i = 0
    while i < len(letters):
        g, s = letters[i]
        j = i
        while j < len(letters) and letters[j] == (g, s):
            j += 1
        e = s * (j - i)
        parts.append(names[g] if e == 1 else f"{names[g]}^{e}")
        i = j
    return " ".join(parts)
