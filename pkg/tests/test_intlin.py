import itertools
import random
from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hnncert.errors import ResourceLimit
from hnncert.intlin import (
    IntMatrix,
    abelianization,
    determinant,
    relation_matrix,
    smith_normal_form,
)
from hnncert.textio import parse_presentation


def cofactor_det(rows):
    # Laplace expansion; independent of the Bareiss routine under test
    n = len(rows)
    if n == 0:
        return 1
    if n == 1:
        return rows[0][0]
    return sum((-1) ** j * rows[0][j] * cofactor_det([r[:j] + r[j + 1:] for r in rows[1:]])
               for j in range(n) if rows[0][j])


def minor_gcds(rows):
    m, n = len(rows), len(rows[0]) if rows else 0
    out = []
    for k in range(1, min(m, n) + 1):
        g = 0
        for ri in itertools.combinations(range(m), k):
            for ci in itertools.combinations(range(n), k):
                g = gcd(g, cofactor_det([[rows[i][j] for j in ci] for i in ri]))
        out.append(g)
    return out


def partial_products(factors):
    out, acc = [], 1
    for d in factors:
        acc *= d
        out.append(acc)
    return out


def random_matrix(rng, max_dim=8, lo=-10, hi=10):
    m, n = rng.randint(1, max_dim), rng.randint(1, max_dim)
    return [[rng.randint(lo, hi) for _ in range(n)] for _ in range(m)]


class TestExamples:
    def test_identity(self):
        snf = smith_normal_form(IntMatrix.identity(3))
        assert snf.invariant_factors == (1, 1, 1) and snf.rank == 3

    def test_two_by_two(self):
        A = [[2, 4], [6, 8]]
        assert minor_gcds(A) == [2, 8]
        assert smith_normal_form(IntMatrix(A)).invariant_factors == (2, 4)

    def test_rectangular(self):
        A = [[0, -2, 1], [0, 1, -2]]
        assert minor_gcds(A) == [1, 3]
        snf = smith_normal_form(IntMatrix(A))
        assert snf.invariant_factors == (1, 3)
        assert snf.verify(IntMatrix(A))

    def test_empty(self):
        A = IntMatrix([], cols=2)
        snf = smith_normal_form(A)
        assert snf.rank == 0 and snf.V == IntMatrix.identity(2) and snf.verify(A)

    def test_zero(self):
        A = IntMatrix([[0, 0], [0, 0]])
        assert smith_normal_form(A).invariant_factors == ()

    def test_big_entries_stay_exact(self):
        big = 2**80 + 1
        A = IntMatrix([[big, 2**81], [3, 7]])
        snf = smith_normal_form(A)
        assert snf.verify(A)
        assert partial_products(snf.invariant_factors) == minor_gcds(A.entries)


def test_determinant_matches_cofactor():
    rng = random.Random(7)
    for _ in range(200):
        n = rng.randint(0, 5)
        rows = [[rng.randint(-6, 6) for _ in range(n)] for _ in range(n)]
        assert determinant(IntMatrix(rows, cols=n)) == cofactor_det(rows)


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**9))
def test_random_decompositions(seed):
    A = IntMatrix(random_matrix(random.Random(seed)))
    assert smith_normal_form(A).verify(A)


@settings(max_examples=150, deadline=None)
@given(st.lists(st.lists(st.integers(-10, 10), min_size=4, max_size=4), min_size=1, max_size=4))
def test_minor_gcd_oracle(rows):
    snf = smith_normal_form(IntMatrix(rows))
    expected = [g for g in minor_gcds(rows) if g]
    assert partial_products(snf.invariant_factors) == expected


def test_matches_sympy():
    from sympy import ZZ
    from sympy.polys.matrices import DomainMatrix
    from sympy.polys.matrices.normalforms import invariant_factors

    rng = random.Random(11)
    for _ in range(100):
        rows = random_matrix(rng, max_dim=6)
        ours = smith_normal_form(IntMatrix(rows)).invariant_factors
        theirs = tuple(abs(int(d)) for d in invariant_factors(DomainMatrix([[ZZ(x) for x in r] for r in rows],
                                                                          (len(rows), len(rows[0])), ZZ)))
        assert ours == tuple(d for d in theirs if d)


class TestAbelianization:
    def test_relation_matrix(self):
        assert relation_matrix(parse_presentation("t, a | t a t^-1 a^-2")).entries == [[0, -1]]
        m = relation_matrix(parse_presentation("a, b |"))
        assert m.shape == (0, 2)
        g2 = parse_presentation("a, b, c, d | a b a^-1 b^-1 c d c^-1 d^-1")
        assert relation_matrix(g2).entries == [[0, 0, 0, 0]]

    @pytest.mark.parametrize("text, b1, torsion", [
        ("t, a | t a t^-1 a^-2", 1, ()),
        ("a, b |", 2, ()),
        ("x, a_c0, a_c1 | a_c1 a_c0^-2 ; x a_c0 x^-1 a_c1^-2", 1, (3,)),
        ("a | a^2", 0, (2,)),
        ("a, b | a^4 b^6 ; a^-2 b^2", 0, (2, 10)),  # gcd 2, |det| 20
    ])
    def test_examples(self, text, b1, torsion):
        ab = abelianization(parse_presentation(text))
        assert (ab.b1, ab.torsion) == (b1, torsion)
        assert ab.min_abelian_gens == b1 + len(torsion)

    def test_b1_plus_rank(self):
        rng = random.Random(3)
        for _ in range(50):
            rows = random_matrix(rng, max_dim=5)
            g = len(rows[0])
            names = ",".join(f"g{i}" for i in range(g))
            rels = " ; ".join(" ".join(f"g{j}^{e}" for j, e in enumerate(r) if e) for r in rows)
            p = parse_presentation(f"{names} | {rels}")
            snf = smith_normal_form(relation_matrix(p))
            assert abelianization(p).b1 + snf.rank == g

    def test_resource_guard(self, monkeypatch):
        monkeypatch.setenv("HNNCERT_MAX_SNF_DIM", "2")
        with pytest.raises(ResourceLimit):
            abelianization(parse_presentation("a, b, c |"))
