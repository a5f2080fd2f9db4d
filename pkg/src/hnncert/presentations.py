"""Finite presentations and a logged Tietze-transformation engine."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

from .errors import DuplicateGenerator, MalformedMove, NotRedundant
from .words import (
    NAME_RE,
    GeneratorSymbol,
    Word,
    cyclic_conjugates,
    cyclic_reduce,
    format_word,
    parse_word,
)

SCHEMA_VERSION = "1"


@dataclass(frozen=True)
class FinitePresentation:
    """Generators plus cyclically reduced relators.

    Relators are cyclically reduced on construction and relators that reduce
    to the empty word are dropped. Relator order and duplicates are kept.
    """

    generators: tuple[str, ...]
    relators: tuple[Word, ...] = ()

    def __post_init__(self):
        gens = tuple(self.generators)
        seen = set()
        for name in gens:
            if not NAME_RE.match(name):
                raise ValueError(f"invalid generator name {name!r}")
            if name in seen:
                raise DuplicateGenerator(f"duplicate generator {name!r}")
            seen.add(name)
        rels = []
        for r in self.relators:
            if not isinstance(r, Word):
                r = Word(r)
            if any(g >= len(gens) for g in r.generators()):
                raise ValueError(f"relator {r!r} uses an undeclared generator")
            core, _ = cyclic_reduce(r)
            if core:
                rels.append(core)
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "relators", tuple(rels))

    @property
    def num_generators(self) -> int:
        return len(self.generators)

    @property
    def num_relators(self) -> int:
        return len(self.relators)

    @property
    def symbols(self) -> list[GeneratorSymbol]:
        return [GeneratorSymbol(i, n) for i, n in enumerate(self.generators)]

    def gen_id(self, name: str) -> int:
        try:
            return self.generators.index(name)
        except ValueError:
            raise KeyError(f"no generator named {name!r}") from None

    def symbol(self, gen: int | str | GeneratorSymbol) -> GeneratorSymbol:
        if isinstance(gen, GeneratorSymbol):
            gen = gen.id
        if isinstance(gen, str):
            gen = self.gen_id(gen)
        return GeneratorSymbol(gen, self.generators[gen])

    def word(self, text: str) -> Word:
        return parse_word(text, self.generators)

    def format_word(self, w: Word) -> str:
        return format_word(w, self.generators)

    def __str__(self) -> str:
        rels = " ; ".join(self.format_word(r) for r in self.relators)
        return f"{', '.join(self.generators)} | {rels}".rstrip()

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "generators": list(self.generators),
            "relators": [word_to_pairs(r, self.generators) for r in self.relators],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "FinitePresentation":
        gens = list(data["generators"])
        index = {n: i for i, n in enumerate(gens)}
        rels = [pairs_to_word(pairs, index) for pairs in data.get("relators", [])]
        return cls(tuple(gens), tuple(rels))


def word_to_pairs(w: Word, names: Sequence[str]) -> list[list[str]]:
    return [[names[g], str(s)] for g, s in w]


def pairs_to_word(pairs, index: dict[str, int]) -> Word:
    letters = []
    for name, sign in pairs:
        if name not in index:
            raise KeyError(f"unknown generator {name!r}")
        sign = int(sign)
        letters.append((index[name], sign))
    return Word(letters)


def deficiency(p: FinitePresentation) -> int:
    return p.num_generators - p.num_relators


# -- Tietze moves ------------------------------------------------------------

# (conjugator, relator index, exponent +1/-1)
WitnessFactor = tuple[Word, int, int]


@dataclass(frozen=True)
class AddGenerator:
    name: str
    definition: Word


@dataclass(frozen=True)
class RemoveGenerator:
    gen: int
    relator: int | None = None


@dataclass(frozen=True)
class AddRedundantRelator:
    word: Word
    witness: tuple[WitnessFactor, ...] | None = None
    at: int | None = None


@dataclass(frozen=True)
class RemoveRedundantRelator:
    index: int
    witness: tuple[WitnessFactor, ...] | None = None


@dataclass(frozen=True)
class SubstituteGenerator:
    """Textual substitution ``gen -> replacement`` in every relator.

    ``replacement`` must contain ``gen`` exactly once, so the substitution is
    an automorphism of the free group.
    """

    gen: int
    replacement: Word


TietzeMove = Union[AddGenerator, RemoveGenerator, AddRedundantRelator,
                   RemoveRedundantRelator, SubstituteGenerator]


def _check_gens(p: FinitePresentation, w: Word, what: str) -> None:
    bad = [g for g in w.generators() if g >= p.num_generators]
    if bad:
        raise MalformedMove(f"{what} references missing generator id {bad[0]}")


def _check_gen(p: FinitePresentation, g: int) -> None:
    if not 0 <= g < p.num_generators:
        raise MalformedMove(f"generator id {g} out of range")


def _witness_product(p: FinitePresentation, witness, exclude: int | None = None) -> Word:
    prod = Word()
    for conj, idx, e in witness:
        if not 0 <= idx < p.num_relators or idx == exclude:
            raise NotRedundant(f"witness references invalid relator index {idx}")
        if e not in (1, -1):
            raise NotRedundant("witness exponent must be +1 or -1")
        _check_gens(p, conj, "witness conjugator")
        prod = prod * (p.relators[idx] ** e).conjugate(conj)
    return prod


def _derivable(p: FinitePresentation, w: Word, witness, exclude: int | None = None) -> bool:
    """Whether ``w`` lies in the normal closure of the relators (minus ``exclude``).

    With a witness the check is exact free reduction up to conjugacy. Without
    one, only conjugates of a single existing relator (or its inverse) count.
    """
    core, _ = cyclic_reduce(w)
    if not core:
        return True
    if witness is not None:
        prod_core, _ = cyclic_reduce(_witness_product(p, witness, exclude))
        return prod_core in cyclic_conjugates(core)
    for i, r in enumerate(p.relators):
        if i == exclude:
            continue
        rots = cyclic_conjugates(r)
        if core in rots or ~core in rots:
            return True
    return False


def _solve_for(r: Word, g: int) -> Word:
    """Given relator ``r`` containing ``g`` once, return ``w`` with ``g = w`` modulo ``r``."""
    pos = next(i for i, (h, _) in enumerate(r) if h == g)
    e = r[pos][1]
    u, v = r[:pos], r[pos + 1 :]
    # u g^e v = 1  =>  g^e = u^-1 v^-1
    sol = ~u * ~v
    return sol if e == 1 else ~sol


def _nielsen_parts(replacement: Word, g: int) -> tuple[Word, int, Word]:
    pos = next(i for i, (h, _) in enumerate(replacement) if h == g)
    return replacement[:pos], replacement[pos][1], replacement[pos + 1 :]


def _removal_target(p: FinitePresentation, mv: RemoveGenerator) -> int:
    if mv.relator is not None:
        if not 0 <= mv.relator < p.num_relators:
            raise MalformedMove(f"relator index {mv.relator} out of range")
        if p.relators[mv.relator].count(mv.gen) != 1:
            raise NotRedundant(
                f"relator {mv.relator} does not contain generator {mv.gen} exactly once")
        return mv.relator
    for i, r in enumerate(p.relators):
        if r.count(mv.gen) == 1:
            return i
    raise NotRedundant(f"no relator defines generator {mv.gen}")


def rename_map(p: FinitePresentation, mv: TietzeMove) -> dict[int, int]:
    """Old id -> new id after ``mv``; removed generators are absent."""
    n = p.num_generators
    if isinstance(mv, RemoveGenerator):
        return {i: (i if i < mv.gen else i - 1) for i in range(n) if i != mv.gen}
    return {i: i for i in range(n)}


def apply_tietze(p: FinitePresentation, mv: TietzeMove) -> FinitePresentation:
    if isinstance(mv, AddGenerator):
        _check_gens(p, mv.definition, "definition")
        if mv.name in p.generators:
            raise MalformedMove(f"generator {mv.name!r} already exists")
        new = p.num_generators
        rel = Word.gen(new) * ~mv.definition
        return FinitePresentation(p.generators + (mv.name,), p.relators + (rel,))

    if isinstance(mv, RemoveGenerator):
        _check_gen(p, mv.gen)
        ridx = _removal_target(p, mv)
        sol = _solve_for(p.relators[ridx], mv.gen)
        ren = rename_map(p, mv)
        rels = [r.substitute({mv.gen: sol}).rename(ren)
                for i, r in enumerate(p.relators) if i != ridx]
        gens = tuple(n for i, n in enumerate(p.generators) if i != mv.gen)
        return FinitePresentation(gens, tuple(rels))

    if isinstance(mv, AddRedundantRelator):
        _check_gens(p, mv.word, "relator")
        if not cyclic_reduce(mv.word)[0]:
            raise MalformedMove("relator reduces to the identity")
        if not _derivable(p, mv.word, mv.witness):
            raise NotRedundant("relator is not derivable from the witness")
        rels = list(p.relators)
        at = len(rels) if mv.at is None else mv.at
        if not 0 <= at <= len(rels):
            raise MalformedMove(f"insert position {at} out of range")
        rels.insert(at, mv.word)
        return FinitePresentation(p.generators, tuple(rels))

    if isinstance(mv, RemoveRedundantRelator):
        if not 0 <= mv.index < p.num_relators:
            raise MalformedMove(f"relator index {mv.index} out of range")
        if not _derivable(p, p.relators[mv.index], mv.witness, exclude=mv.index):
            raise NotRedundant(f"relator {mv.index} is not derivable from the others")
        rels = p.relators[: mv.index] + p.relators[mv.index + 1 :]
        return FinitePresentation(p.generators, rels)

    if isinstance(mv, SubstituteGenerator):
        _check_gen(p, mv.gen)
        _check_gens(p, mv.replacement, "replacement")
        if mv.replacement.count(mv.gen) != 1:
            raise MalformedMove("replacement must contain the substituted generator exactly once")
        rels = [r.substitute({mv.gen: mv.replacement}) for r in p.relators]
        return FinitePresentation(p.generators, tuple(rels))

    raise MalformedMove(f"unknown move {mv!r}")


def inverse_move(p: FinitePresentation, mv: TietzeMove) -> TietzeMove:
    """A move undoing ``mv`` when applied to ``apply_tietze(p, mv)``.

    Exact for every variant except :class:`RemoveGenerator`, whose inverse
    restores the generator but leaves the other relators in substituted form.
    """
    if isinstance(mv, AddGenerator):
        return RemoveGenerator(p.num_generators, p.num_relators)
    if isinstance(mv, RemoveGenerator):
        ridx = _removal_target(p, mv)
        sol = _solve_for(p.relators[ridx], mv.gen).rename(rename_map(p, mv))
        return AddGenerator(p.generators[mv.gen], sol)
    if isinstance(mv, AddRedundantRelator):
        at = p.num_relators if mv.at is None else mv.at
        return RemoveRedundantRelator(at, _shift_witness(mv.witness, at, +1))
    if isinstance(mv, RemoveRedundantRelator):
        return AddRedundantRelator(p.relators[mv.index],
                                   _shift_witness(mv.witness, mv.index, -1), at=mv.index)
    if isinstance(mv, SubstituteGenerator):
        u, e, v = _nielsen_parts(mv.replacement, mv.gen)
        g = Word.gen(mv.gen)
        if e == 1:
            return SubstituteGenerator(mv.gen, ~u * g * ~v)
        return SubstituteGenerator(mv.gen, v * ~g * u)
    raise MalformedMove(f"unknown move {mv!r}")


def _shift_witness(witness, pivot: int, direction: int):
    if witness is None:
        return None
    out = []
    for conj, idx, e in witness:
        if direction > 0:
            idx = idx + 1 if idx >= pivot else idx
        else:
            idx = idx - 1 if idx > pivot else idx
        out.append((conj, idx, e))
    return tuple(out)


@dataclass
class TietzeLog:
    """A presentation together with the sequence of moves that produced it."""

    start: FinitePresentation
    moves: list[TietzeMove] = field(default_factory=list)
    history: list[FinitePresentation] = field(default_factory=list)

    @property
    def current(self) -> FinitePresentation:
        return self.history[-1] if self.history else self.start

    def apply(self, mv: TietzeMove) -> FinitePresentation:
        q = apply_tietze(self.current, mv)
        self.moves.append(mv)
        self.history.append(q)
        return q


def apply_moves(p: FinitePresentation, moves: Iterable[TietzeMove]) -> FinitePresentation:
    for mv in moves:
        p = apply_tietze(p, mv)
    return p


def abelianized_invariants_preserved(p: FinitePresentation, q: FinitePresentation) -> bool:
    from .intlin import abelianization

    a, b = abelianization(p), abelianization(q)
    return (a.b1, a.torsion) == (b.b1, b.torsion)


# -- move serialization (names resolved against the presentation the move applies to)

def _witness_to_list(witness, names):
    if witness is None:
        return None
    return [[format_word(c, names), str(i), str(e)] for c, i, e in witness]


def _witness_from_list(data, names):
    if data is None:
        return None
    return tuple((parse_word(c, names), int(i), int(e)) for c, i, e in data)


def move_to_dict(mv: TietzeMove, p: FinitePresentation) -> dict:
    names = p.generators
    if isinstance(mv, AddGenerator):
        return {"move": "add_generator", "name": mv.name,
                "definition": format_word(mv.definition, names)}
    if isinstance(mv, RemoveGenerator):
        d = {"move": "remove_generator", "generator": names[mv.gen]}
        if mv.relator is not None:
            d["relator"] = str(mv.relator)
        return d
    if isinstance(mv, AddRedundantRelator):
        d = {"move": "add_relator", "word": format_word(mv.word, names)}
        if mv.witness is not None:
            d["witness"] = _witness_to_list(mv.witness, names)
        if mv.at is not None:
            d["at"] = str(mv.at)
        return d
    if isinstance(mv, RemoveRedundantRelator):
        d = {"move": "remove_relator", "index": str(mv.index)}
        if mv.witness is not None:
            d["witness"] = _witness_to_list(mv.witness, names)
        return d
    if isinstance(mv, SubstituteGenerator):
        return {"move": "substitute", "generator": names[mv.gen],
                "replacement": format_word(mv.replacement, names)}
    raise MalformedMove(f"unknown move {mv!r}")


def move_from_dict(d: dict, p: FinitePresentation) -> TietzeMove:
    names = p.generators
    kind = d.get("move")
    try:
        if kind == "add_generator":
            return AddGenerator(d["name"], parse_word(d["definition"], names))
        if kind == "remove_generator":
            rel = d.get("relator")
            return RemoveGenerator(p.gen_id(d["generator"]), None if rel is None else int(rel))
        if kind == "add_relator":
            at = d.get("at")
            return AddRedundantRelator(parse_word(d["word"], names),
                                       _witness_from_list(d.get("witness"), names),
                                       None if at is None else int(at))
        if kind == "remove_relator":
            return RemoveRedundantRelator(int(d["index"]),
                                          _witness_from_list(d.get("witness"), names))
        if kind == "substitute":
            return SubstituteGenerator(p.gen_id(d["generator"]),
                                       parse_word(d["replacement"], names))
    except KeyError as exc:
        raise MalformedMove(f"bad move record {d!r}: {exc}") from None
    raise MalformedMove(f"unknown move kind {kind!r}")
