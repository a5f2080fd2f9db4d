"""HNN splittings over the shifted alphabet ``b(a, beta) = t^beta a t^-beta``.

Given a presentation in which every relator has zero exponent sum in the
stable letter ``t``, each relator is rewritten as a word in the letters
``b(a, beta)``; together with the conjugation relations
``t b(a, beta) t^-1 = b(a, beta+1)`` this exhibits the group as an HNN
extension of ``<b(a, beta)>`` whose associated subgroups are generated by at
most ``k * N`` letters.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NonzeroStableExponent, NotNormalized
from .presentations import FinitePresentation, word_to_pairs
from .words import GeneratorSymbol, Word, exponent_sum

# (alpha generator id, shift beta) -> sign
BLetter = tuple[tuple[int, int], int]


def shifted_name(name: str, beta: int) -> str:
    return f"{name}_s{beta}"


def rewrite_relator(r: Word, t: int | GeneratorSymbol) -> tuple[tuple[BLetter, ...], int]:
    """Rewrite ``r`` over the shifted alphabet.

    Returns the B-letters and the power ``c`` with ``t^c r t^-c`` equal to the
    product of the emitted ``b`` letters; ``c`` makes the least shift exactly 0.
    """
    tid = t.id if isinstance(t, GeneratorSymbol) else t
    if exponent_sum(r, tid):
        raise NonzeroStableExponent(f"stable letter exponent sum is {exponent_sum(r, tid)}")
    beta = 0
    raw: list[tuple[int, int, int]] = []
    for g, s in r:
        if g == tid:
            beta += s
        else:
            raw.append((g, beta, s))
    if not raw:
        return (), 0
    offset = -min(b for _, b, _ in raw)
    out: list[BLetter] = []
    for g, b, s in raw:
        key = (g, b + offset)
        if out and out[-1] == (key, -s):
            out.pop()
        else:
            out.append((key, s))
    return tuple(out), offset


@dataclass(frozen=True)
class HnnSplitting:
    source_generators: tuple[str, ...]
    stable: GeneratorSymbol
    alphas: tuple[int, ...]
    base: FinitePresentation
    letters: tuple[tuple[int, int], ...]
    assoc_C: tuple[Word, ...]
    assoc_D: tuple[Word, ...]
    conj_relations: tuple[tuple[int, int], ...]
    shift_bound_N: int
    rank_bound_M: int
    coarse_shift_bound: int
    offsets: tuple[int, ...]
    embedding: tuple[Word, ...]

    @property
    def k(self) -> int:
        return len(self.alphas)

    def base_id(self, alpha: int, beta: int) -> int:
        return self.letters.index((alpha, beta))

    def embed(self, w: Word) -> Word:
        return w.substitute(dict(enumerate(self.embedding)))

    def to_dict(self) -> dict:
        src, names = self.source_generators, self.base.generators

        def pairs(w):
            return word_to_pairs(w, names)

        return {
            "schema_version": "1",
            "stable": self.stable.name,
            "k": str(self.k),
            "N": str(self.shift_bound_N),
            "M": str(self.rank_bound_M),
            "coarse_shift_bound": str(self.coarse_shift_bound),
            "base": self.base.to_dict(),
            "relator_offsets": [str(c) for c in self.offsets],
            "assoc_C": [pairs(w) for w in self.assoc_C],
            "assoc_D": [pairs(w) for w in self.assoc_D],
            "conj_relations": [[names[a], names[b]] for a, b in self.conj_relations],
            "embedding": {names[i]: word_to_pairs(w, src) for i, w in enumerate(self.embedding)},
        }


def _stable_id(p: FinitePresentation, t) -> int:
    if isinstance(t, GeneratorSymbol):
        return t.id
    if isinstance(t, str):
        return p.gen_id(t)
    return int(t)


def split_as_hnn(p: FinitePresentation, t: int | str | GeneratorSymbol) -> HnnSplitting:
    tid = _stable_id(p, t)
    for i, r in enumerate(p.relators):
        if exponent_sum(r, tid):
            raise NotNormalized(f"relator {i} has stable-letter exponent sum "
                                f"{exponent_sum(r, tid)}")
    alphas = tuple(g for g in range(p.num_generators) if g != tid)
    rewritten = [rewrite_relator(r, tid) for r in p.relators]
    N = max((b for s, _ in rewritten for (_, b), _ in s), default=0)
    coarse_N = max((r.count(tid) for r in p.relators), default=0)
    if not alphas:
        N = 0
    M = len(alphas) * N

    letters = tuple((a, b) for a in alphas for b in range(N + 1))
    index = {ab: i for i, ab in enumerate(letters)}
    names = tuple(shifted_name(p.generators[a], b) for a, b in letters)
    base_rels = tuple(Word((index[ab], s) for ab, s in sw) for sw, _ in rewritten)
    base = FinitePresentation(names, base_rels)

    C = tuple(Word.gen(index[(a, b)]) for a in alphas for b in range(N))
    D = tuple(Word.gen(index[(a, b + 1)]) for a in alphas for b in range(N))
    conj = tuple((index[(a, b)], index[(a, b + 1)]) for a in alphas for b in range(N))
    tw = Word.gen(tid)
    embedding = tuple(Word.gen(a).conjugate(tw ** b) for a, b in letters)
    return HnnSplitting(p.generators, p.symbol(tid), alphas, base, letters, C, D, conj,
                        N, M, coarse_N, tuple(c for _, c in rewritten), embedding)


def verify_splitting(split: HnnSplitting, original: FinitePresentation) -> bool:
    """Re-check the rewriting by substituting the embedding back."""
    tid = split.stable.id
    tw = Word.gen(tid)
    if split.source_generators != original.generators:
        return False
    if split.base.num_relators != original.num_relators:
        return False
    if len(split.offsets) != original.num_relators:
        return False
    if split.rank_bound_M != split.k * split.shift_bound_N:
        return False
    if not len(split.assoc_C) == len(split.assoc_D) <= split.rank_bound_M:
        return False
    if split.alphas != tuple(g for g in range(original.num_generators) if g != tid):
        return False
    if len(split.letters) != len(split.embedding) or \
            len(split.letters) != split.base.num_generators:
        return False
    for (a, b), emb in zip(split.letters, split.embedding):
        if emb != Word.gen(a).conjugate(tw ** b):
            return False
    for s, r, c in zip(split.base.relators, original.relators, split.offsets):
        if split.embed(s) != r.conjugate(tw ** c):
            return False
    expected = {(split.base_id(a, b), split.base_id(a, b + 1))
                for a in split.alphas for b in range(split.shift_bound_N)}
    if set(split.conj_relations) != expected or len(split.conj_relations) != len(expected):
        return False
    if tuple(Word.gen(lo) for lo, _ in split.conj_relations) != split.assoc_C:
        return False
    if tuple(Word.gen(hi) for _, hi in split.conj_relations) != split.assoc_D:
        return False
    for lo, hi in split.conj_relations:
        rel = split.embedding[lo].conjugate(tw) * ~split.embedding[hi]
        if rel:
            return False
    return True
