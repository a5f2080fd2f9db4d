"""Homomorphisms onto Z: discovery, checking and stable-letter normalization."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .errors import MalformedMove, NotHomomorphism, NotSurjective
from .intlin import gcd_all, relation_matrix, smith_normal_form
from .presentations import (
    AddGenerator,
    FinitePresentation,
    RemoveGenerator,
    SubstituteGenerator,
    TietzeLog,
    TietzeMove,
    inverse_move,
    rename_map,
)
from .words import GeneratorSymbol, Word


@dataclass(frozen=True)
class ZHomomorphism:
    """Images in Z of the generators, by generator id."""

    values: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))

    def image(self, w: Word) -> int:
        return sum(s * self.values[g] for g, s in w)

    def as_dict(self, names: Sequence[str]) -> dict[str, int]:
        return dict(zip(names, self.values))

    def format(self, names: Sequence[str]) -> str:
        return ",".join(f"{n}={v}" for n, v in zip(names, self.values))

    @classmethod
    def from_mapping(cls, p: FinitePresentation, mapping: Mapping[str, int]) -> "ZHomomorphism":
        unknown = [k for k in mapping if k not in p.generators]
        if unknown:
            raise KeyError(f"unknown generator {unknown[0]!r}")
        return cls(tuple(int(mapping.get(n, 0)) for n in p.generators))


def parse_zmap(text: str, p: FinitePresentation) -> ZHomomorphism:
    """Parse ``"t=1,a=0"``; generators left out map to 0."""
    mapping: dict[str, int] = {}
    for part in text.replace(";", ",").split(","):
        part = part.strip()
        if not part:
            continue
        name, sep, value = part.partition("=")
        if not sep:
            raise ValueError(f"expected name=value, got {part!r}")
        name = name.strip()
        if name in mapping:
            raise ValueError(f"generator {name!r} given twice")
        mapping[name] = int(value.strip())
    return ZHomomorphism.from_mapping(p, mapping)


def zmap_defects(p: FinitePresentation, eps: ZHomomorphism) -> list[str]:
    """Reasons ``eps`` is not an epimorphism onto Z (empty when it is)."""
    if len(eps.values) != p.num_generators:
        return [f"expected {p.num_generators} values, got {len(eps.values)}"]
    problems = []
    for i, r in enumerate(p.relators):
        img = eps.image(r)
        if img:
            problems.append(f"relator {i} maps to {img}, not 0")
    g = gcd_all(eps.values)
    if g != 1:
        problems.append(f"image is {g}Z, not Z")
    return problems


def verify_zmap(p: FinitePresentation, eps: ZHomomorphism) -> bool:
    return not zmap_defects(p, eps)


def _canonical_sign(v: list[int]) -> tuple[int, ...]:
    first = next((x for x in v if x), 0)
    return tuple(-x for x in v) if first < 0 else tuple(v)


def find_zmap(p: FinitePresentation) -> ZHomomorphism | None:
    """A surjection onto Z read off the Smith transform, or None when b1 = 0.

    Candidates are the kernel columns of V (each primitive since V is
    unimodular), sign-normalized so the first nonzero entry is positive. The
    pick minimizes the l1 norm, ties going to the lexicographically largest
    vector so coordinate projections prefer earlier generators.
    """
    A = relation_matrix(p)
    snf = smith_normal_form(A)
    cands = [_canonical_sign(snf.V.column(j)) for j in range(snf.rank, p.num_generators)]
    if not cands:
        return None
    best = min(cands, key=lambda v: (sum(abs(x) for x in v), tuple(-x for x in v)))
    return ZHomomorphism(best)


def transport_zmap(p: FinitePresentation, eps: ZHomomorphism, mv: TietzeMove) -> ZHomomorphism:
    """The map induced on ``apply_tietze(p, mv)`` by ``eps``."""
    values = list(eps.values)
    if isinstance(mv, AddGenerator):
        return ZHomomorphism(values + [eps.image(mv.definition)])
    if isinstance(mv, RemoveGenerator):
        ren = rename_map(p, mv)
        out = [0] * len(ren)
        for old, new in ren.items():
            out[new] = values[old]
        return ZHomomorphism(out)
    if isinstance(mv, SubstituteGenerator):
        # new relators are phi(R); the induced map is eps o phi^-1
        back = inverse_move(p, mv).replacement
        values[mv.gen] = eps.image(back)
        return ZHomomorphism(values)
    return eps


@dataclass(frozen=True)
class Normalization:
    presentation: FinitePresentation
    stable: GeneratorSymbol
    moves: tuple[TietzeMove, ...]
    zmap: ZHomomorphism
    history: tuple[FinitePresentation, ...]


def normalize_stable_letter(p: FinitePresentation, eps: ZHomomorphism) -> Normalization:
    """Euclid on the value vector, one logged substitution per step.

    Each step takes the generator with the smallest nonzero |value| as pivot
    and substitutes ``g -> g pivot^q`` for every other generator with a nonzero
    value, where ``q = value(g) // value(pivot)``; that lowers ``value(g)`` by
    ``q * value(pivot)``. A last ``t -> t^-1`` fixes the sign.
    """
    if len(eps.values) != p.num_generators:
        raise MalformedMove("value vector length does not match generator count")
    bad = [i for i, r in enumerate(p.relators) if eps.image(r)]
    if bad:
        raise NotHomomorphism(f"relator {bad[0]} has nonzero image")
    if gcd_all(eps.values) != 1:
        raise NotSurjective(f"gcd of values is {gcd_all(eps.values)}")

    log = TietzeLog(p)
    cur = eps
    while True:
        support = [i for i, v in enumerate(cur.values) if v]
        if len(support) == 1:
            break
        pivot = min(support, key=lambda i: (abs(cur.values[i]), i))
        for g in support:
            if g == pivot:
                continue
            q = cur.values[g] // cur.values[pivot]
            mv = SubstituteGenerator(g, Word.gen(g) * Word.gen(pivot, q))
            cur = transport_zmap(log.current, cur, mv)
            log.apply(mv)
    t = support[0]
    if cur.values[t] == -1:
        mv = SubstituteGenerator(t, Word.gen(t, -1))
        cur = transport_zmap(log.current, cur, mv)
        log.apply(mv)
    q = log.current
    return Normalization(q, q.symbol(t), tuple(log.moves), cur, tuple(log.history))
