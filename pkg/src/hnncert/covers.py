"""Presentations of the cyclic covers K_n = ker(H -> Z -> Z/n).

Reidemeister-Schreier with the transversal ``1, t, ..., t^(n-1)``. Schreier
generators coming from ``t`` are trivial except the one closing the cycle,
which becomes ``x = t^n``; the remaining generators are ``a_c<i> = t^i a t^-i``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import BadDegree, DegreeTooSmall, NotNormalized
from .hnn import HnnSplitting, _stable_id
from .intlin import Abelianization, abelianization
from .presentations import FinitePresentation, word_to_pairs
from .words import GeneratorSymbol, Word, exponent_sum
from .zmaps import ZHomomorphism

STABLE_NAME = "x"


def cover_name(name: str, i: int) -> str:
    return f"{name}_c{i}"


@dataclass(frozen=True)
class CoverPresentation:
    n: int
    pres: FinitePresentation
    stable_x: GeneratorSymbol
    source_generators: tuple[str, ...]
    source_stable: GeneratorSymbol
    schreier_gens: dict  # (alpha id, coset i) -> cover generator id
    embedding: tuple[Word, ...]  # cover generator id -> word in the source generators
    inherited_zmap: ZHomomorphism

    def to_dict(self) -> dict:
        names = self.pres.generators
        return {
            "schema_version": "1",
            "n": str(self.n),
            "stable": self.stable_x.name,
            "source_stable": self.source_stable.name,
            "presentation": self.pres.to_dict(),
            "embedding": {names[i]: word_to_pairs(w, self.source_generators)
                          for i, w in enumerate(self.embedding)},
            "zmap": {n: str(v) for n, v in zip(names, self.inherited_zmap.values)},
        }


def rs_rewrite(w: Word, tid: int, n: int, start: int, schreier: dict, xid: int) -> Word:
    """Rewrite ``t^start w t^-(start + sum_t(w))`` over the Schreier generators."""
    coset = start
    out: list[tuple[int, int]] = []
    for g, s in w:
        if g == tid:
            if s == 1:
                if coset == n - 1:
                    out.append((xid, 1))
                coset = (coset + 1) % n
            else:
                if coset == 0:
                    out.append((xid, -1))
                coset = (coset - 1) % n
        else:
            out.append((schreier[(g, coset)], s))
    return Word(out)


def kernel_presentation(p: FinitePresentation, t, n: int) -> CoverPresentation:
    if not isinstance(n, int) or n < 1:
        raise BadDegree(f"cover degree must be a positive integer, got {n!r}")
    tid = _stable_id(p, t)
    for i, r in enumerate(p.relators):
        if exponent_sum(r, tid):
            raise NotNormalized(f"relator {i} has nonzero stable-letter exponent sum")
    alphas = [g for g in range(p.num_generators) if g != tid]
    names = [STABLE_NAME]
    schreier = {}
    tw = Word.gen(tid)
    embedding = [tw ** n]
    for a in alphas:
        for i in range(n):
            schreier[(a, i)] = len(names)
            names.append(cover_name(p.generators[a], i))
            embedding.append(Word.gen(a).conjugate(tw ** i))
    rels = [rs_rewrite(r, tid, n, i, schreier, 0) for r in p.relators for i in range(n)]
    pres = FinitePresentation(tuple(names), tuple(rels))
    zmap = ZHomomorphism((1,) + (0,) * (len(names) - 1))
    return CoverPresentation(n, pres, pres.symbol(0), p.generators, p.symbol(tid),
                             schreier, tuple(embedding), zmap)


def betti_of_cover(p: FinitePresentation, t, n: int) -> Abelianization:
    return abelianization(kernel_presentation(p, t, n).pres)


@dataclass(frozen=True)
class CoverHnnData:
    stable_x: GeneratorSymbol
    assoc_C_words: tuple[Word, ...]
    assoc_D_words: tuple[Word, ...]
    base_gens: tuple[GeneratorSymbol, ...]
    sharp_rank_bound: int

    def to_dict(self, names) -> dict:
        return {
            "stable": self.stable_x.name,
            "assoc_C": [word_to_pairs(w, names) for w in self.assoc_C_words],
            "assoc_D": [word_to_pairs(w, names) for w in self.assoc_D_words],
            "base_generators": [g.name for g in self.base_gens],
            "rank_bound": str(self.sharp_rank_bound),
        }


def cover_hnn_data(split: HnnSplitting, cover: CoverPresentation) -> CoverHnnData:
    """Edge-group data of K_n: C = <a_c(beta) : beta < N>, D = x C x^-1.

    The generating set has at most M = kN elements regardless of n.
    """
    if cover.n < split.shift_bound_N:
        raise DegreeTooSmall(f"cover degree {cover.n} < shift bound {split.shift_bound_N}")
    if split.source_generators != cover.source_generators or \
            split.stable.id != cover.source_stable.id:
        raise ValueError("splitting and cover come from different presentations")
    x = Word.gen(cover.stable_x.id)
    C = tuple(Word.gen(cover.schreier_gens[(a, b)])
              for a in split.alphas for b in range(split.shift_bound_N))
    D = tuple(c.conjugate(x) for c in C)
    base = tuple(s for s in cover.pres.symbols if s.id != cover.stable_x.id)
    return CoverHnnData(cover.stable_x, C, D, base, split.rank_bound_M)
