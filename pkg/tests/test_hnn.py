import dataclasses
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hnncert.errors import NonzeroStableExponent, NotNormalized
from hnncert.hnn import rewrite_relator, split_as_hnn, verify_splitting
from hnncert.presentations import FinitePresentation, deficiency
from hnncert.textio import parse_presentation
from hnncert.words import Word

BS12 = "t, a | t a t^-1 a^-2"
GENUS2 = "a, b, c, d | a b a^-1 b^-1 c d c^-1 d^-1"


def P(text):
    return parse_presentation(text)


def prefix_trace(r, t):
    # hand-rolled oracle: running t-exponent at each non-t letter
    beta, out = 0, []
    for g, s in r:
        if g == t:
            beta += s
        else:
            out.append(((g, beta), s))
    return out


class TestRewrite:
    def test_bs12(self):
        p = P(BS12)
        # trace beta: 0 -> 1 emits a at 1, back to 0 emits a^-1 a^-1
        assert rewrite_relator(p.relators[0], 0) == ((((1, 1), 1), ((1, 0), -1), ((1, 0), -1)), 0)

    def test_genus2(self):
        p = P(GENUS2)
        b, c, d = 1, 2, 3
        expected = (((b, 1), 1), ((b, 0), -1), ((c, 0), 1), ((d, 0), 1), ((c, 0), -1), ((d, 0), -1))
        assert rewrite_relator(p.relators[0], 0) == (expected, 0)

    def test_negative_shift_is_normalized(self):
        # t^-1 a t is cyclically reduced away on ingest, so build the raw word
        w = Word([(0, -1), (1, 1), (0, 1)])
        assert rewrite_relator(w, 0) == ((((1, 0), 1),), 1)

    def test_matches_trace_after_offset(self):
        p = P("t, a, b | t^-2 a t b^-1 t a^-1 b^2")
        r = p.relators[0]
        letters, c = rewrite_relator(r, 0)
        trace = prefix_trace(r, 0)
        assert min(b for (_, b), _ in trace) == -c
        assert letters == tuple(((g, b + c), s) for (g, b), s in trace)

    def test_nonzero_sum(self):
        with pytest.raises(NonzeroStableExponent):
            rewrite_relator(P("t, a | t a").relators[0], 0)


class TestSplit:
    def test_bs12(self):
        s = split_as_hnn(P(BS12), "t")
        assert (s.shift_bound_N, s.k, s.rank_bound_M) == (1, 1, 1)
        assert s.base == P("a_s0, a_s1 | a_s1 a_s0^-2")
        assert [s.base.format_word(w) for w in s.assoc_C] == ["a_s0"]
        assert [s.base.format_word(w) for w in s.assoc_D] == ["a_s1"]
        assert verify_splitting(s, P(BS12))

    def test_free(self):
        p = P("t, a |")
        s = split_as_hnn(p, "t")
        assert (s.shift_bound_N, s.rank_bound_M) == (0, 0)
        assert s.base == P("a_s0 |")
        assert s.assoc_C == s.assoc_D == ()
        assert verify_splitting(s, p)

    def test_genus2(self):
        p = P(GENUS2)
        s = split_as_hnn(p, "a")
        assert (s.shift_bound_N, s.k, s.rank_bound_M) == (1, 3, 3)
        assert s.base.generators == ("b_s0", "b_s1", "c_s0", "c_s1", "d_s0", "d_s1")
        assert s.base.num_relators == 1
        assert [s.base.format_word(w) for w in s.assoc_C] == ["b_s0", "c_s0", "d_s0"]
        assert verify_splitting(s, p)

    def test_embedding_back_substitution(self):
        p = P(BS12)
        s = split_as_hnn(p, "t")
        assert s.embed(s.base.relators[0]) == p.word("t a t^-1 a^-2")

    def test_not_normalized(self):
        with pytest.raises(NotNormalized):
            split_as_hnn(P("x, y | x^2 y^-3"), "x")

    def test_json(self):
        d = split_as_hnn(P(BS12), "t").to_dict()
        assert (d["N"], d["M"], d["k"]) == ("1", "1", "1")
        assert d["embedding"]["a_s1"] == [["t", "1"], ["a", "1"], ["t", "-1"]]


class TestMutation:
    def test_corrupted_beta(self):
        p = P(GENUS2)
        s = split_as_hnn(p, "a")
        for i, (a, b) in enumerate(s.letters):
            bad = list(s.letters)
            bad[i] = (a, b + 1)
            assert not verify_splitting(dataclasses.replace(s, letters=tuple(bad)), p)

    def test_corrupted_offset_and_bounds(self):
        p = P(BS12)
        s = split_as_hnn(p, "t")
        assert not verify_splitting(dataclasses.replace(s, offsets=(1,)), p)
        assert not verify_splitting(dataclasses.replace(s, rank_bound_M=0), p)
        assert not verify_splitting(dataclasses.replace(s, conj_relations=()), p)
        assert not verify_splitting(dataclasses.replace(s, assoc_D=s.assoc_C), p)

    def test_corrupted_base_relator(self):
        p = P(BS12)
        s = split_as_hnn(p, "t")
        bad = FinitePresentation(s.base.generators, (s.base.word("a_s1 a_s0^-1"),))
        assert not verify_splitting(dataclasses.replace(s, base=bad), p)


def random_zero_sum(rng, max_gens=5, max_rels=4, max_len=20):
    g = rng.randint(1, max_gens)
    rels = []
    for _ in range(rng.randint(0, max_rels)):
        body = [(rng.randrange(g), rng.choice((1, -1))) for _ in range(rng.randint(1, max_len))]
        tsum = sum(s for x, s in body if x == 0)
        body += [(0, -1 if tsum > 0 else 1)] * abs(tsum)
        rels.append(Word(body[:max_len] if tsum == 0 else body))
    return FinitePresentation(tuple(f"g{i}" for i in range(g)), tuple(rels))


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**9))
def test_random_splittings(seed):
    p = random_zero_sum(random.Random(seed))
    s = split_as_hnn(p, 0)
    assert verify_splitting(s, p)
    assert len(s.assoc_C) == len(s.assoc_D) <= s.k * s.shift_bound_N == s.rank_bound_M
    assert s.shift_bound_N <= s.coarse_shift_bound
    assert deficiency(s.base) == s.k * (s.shift_bound_N + 1) - p.num_relators
