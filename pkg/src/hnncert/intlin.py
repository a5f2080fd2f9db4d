"""Exact integer linear algebra: relation matrices and Smith normal form.

Everything here works on Python ints. No floating point and no fixed-width
fast path: intermediate entries in Smith reduction can grow well past 64 bits.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from math import gcd
from typing import Sequence

from .errors import ResourceLimit
from .presentations import FinitePresentation
from .words import exponent_sum

MAX_DIM_ENV = "HNNCERT_MAX_SNF_DIM"
DEFAULT_MAX_DIM = 2000


class IntMatrix:
    """Row-major matrix of Python integers."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries: Sequence[Sequence[int]] = (), cols: int | None = None):
        rows = [[int(x) for x in row] for row in entries]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise ValueError("ragged matrix")
        self.rows = len(rows)
        self.cols = cols
        self.entries = rows

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)], cols=n)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls([[0] * cols for _ in range(rows)], cols=cols)

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __eq__(self, other) -> bool:
        return isinstance(other, IntMatrix) and self.shape == other.shape \
            and self.entries == other.entries

    def __repr__(self) -> str:
        return f"IntMatrix({self.entries!r}, cols={self.cols})"

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        cols_b = list(zip(*other.entries)) if other.rows else [()] * other.cols
        out = [[sum(a * b for a, b in zip(row, col)) for col in cols_b] for row in self.entries]
        return IntMatrix(out, cols=other.cols)

    def column(self, j: int) -> list[int]:
        return [row[j] for row in self.entries]

    def to_strings(self) -> list[list[str]]:
        return [[str(x) for x in row] for row in self.entries]


def determinant(m: IntMatrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    if m.rows != m.cols:
        raise ValueError("determinant of a non-square matrix")
    n = m.rows
    a = [row[:] for row in m.entries]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1] if n else 1


@dataclass(frozen=True)
class SmithDecomposition:
    """``U @ A @ V == D`` with ``D`` diagonal, ``d1 | d2 | ... | dr`` all positive."""

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix
    invariant_factors: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)

    def verify(self, A: IntMatrix) -> bool:
        if self.U @ A @ self.V != self.D:
            return False
        if determinant(self.U) not in (1, -1) or determinant(self.V) not in (1, -1):
            return False
        d = self.invariant_factors
        if any(x <= 0 for x in d):
            return False
        if any(d[i + 1] % d[i] for i in range(len(d) - 1)):
            return False
        for i in range(self.D.rows):
            for j in range(self.D.cols):
                want = d[i] if i == j and i < len(d) else 0
                if self.D[i, j] != want:
                    return False
        return True


def _smallest_nonzero(a, r0: int, c0: int):
    best = None
    for i in range(r0, len(a)):
        for j, x in enumerate(a[i][c0:], start=c0):
            if x and (best is None or abs(x) < best[0]):
                best = (abs(x), i, j)
                if best[0] == 1:
                    return best
    return best


def smith_normal_form(A: IntMatrix) -> SmithDecomposition:
    m, n = A.shape
    a = [row[:] for row in A.entries]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    # V is kept transposed so column operations become row operations
    Vt = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, k):
        a[i], a[k] = a[k], a[i]
        U[i], U[k] = U[k], U[i]

    def swap_cols(j, k):
        for row in a:
            row[j], row[k] = row[k], row[j]
        Vt[j], Vt[k] = Vt[k], Vt[j]

    def add_row(dst, src, q):  # row_dst += q * row_src
        ra, rs = a[dst], a[src]
        for j in range(n):
            if rs[j]:
                ra[j] += q * rs[j]
        ua, us = U[dst], U[src]
        for j in range(m):
            if us[j]:
                ua[j] += q * us[j]

    def add_col(dst, src, q):  # col_dst += q * col_src
        for row in a:
            if row[src]:
                row[dst] += q * row[src]
        va, vs = Vt[dst], Vt[src]
        for j in range(n):
            if vs[j]:
                va[j] += q * vs[j]

    factors: list[int] = []
    t = 0
    while t < min(m, n):
        found = _smallest_nonzero(a, t, t)
        if found is None:
            break
        _, i, j = found
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            p = a[t][t]
            dirty = False
            for i in range(t + 1, m):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // p))
                    dirty = dirty or a[i][t] != 0
            for j in range(t + 1, n):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // p))
                    dirty = dirty or a[t][j] != 0
            if dirty:
                # a remainder smaller than the pivot survived; promote it
                best = None
                for i in range(t + 1, m):
                    if a[i][t] and (best is None or abs(a[i][t]) < best[0]):
                        best = (abs(a[i][t]), "r", i)
                for j in range(t + 1, n):
                    if a[t][j] and (best is None or abs(a[t][j]) < best[0]):
                        best = (abs(a[t][j]), "c", j)
                if best[1] == "r":
                    swap_rows(t, best[2])
                else:
                    swap_cols(t, best[2])
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if a[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            U[t] = [-x for x in U[t]]
        factors.append(a[t][t])
        t += 1

    V = [list(col) for col in zip(*Vt)] if n else []
    return SmithDecomposition(IntMatrix(U, cols=m), IntMatrix(a, cols=n),
                              IntMatrix(V, cols=n), tuple(factors))


def relation_matrix(p: FinitePresentation) -> IntMatrix:
    g = p.num_generators
    return IntMatrix([[exponent_sum(r, j) for j in range(g)] for r in p.relators], cols=g)


@dataclass(frozen=True)
class Abelianization:
    b1: int
    torsion: tuple[int, ...]

    @property
    def min_abelian_gens(self) -> int:
        return self.b1 + len(self.torsion)


def max_snf_dim() -> int:
    raw = os.environ.get(MAX_DIM_ENV)
    return DEFAULT_MAX_DIM if not raw else int(raw)


def abelianization(p: FinitePresentation) -> Abelianization:
    A = relation_matrix(p)
    cap = max_snf_dim()
    if max(A.shape) > cap:
        raise ResourceLimit(f"relation matrix {A.rows}x{A.cols} exceeds {MAX_DIM_ENV}={cap}")
    snf = smith_normal_form(A)
    return Abelianization(p.num_generators - snf.rank,
                          tuple(d for d in snf.invariant_factors if d > 1))


def gcd_all(values) -> int:
    out = 0
    for v in values:
        out = gcd(out, v)
    return out
