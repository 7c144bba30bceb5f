"""Smith normal form over the integers with unimodular transforms.

Only what the coloring solver needs: ``smith(A)`` returns ``(U, D, V)`` with
``U * A * V = D`` diagonal, each diagonal entry dividing the next.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import List, Optional, Sequence

Matrix = List[List[int]]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]]) -> Matrix:
    cols = list(zip(*B)) if B else []
    return [[sum(a * b for a, b in zip(row, col)) for col in cols] for row in A]


def matvec(A: Sequence[Sequence[int]], x: Sequence[int]) -> List[int]:
    return [sum(a * b for a, b in zip(row, x)) for row in A]


@dataclass(frozen=True)
class SmithForm:
    U: Matrix
    D: Matrix
    V: Matrix

    @property
    def diagonal(self) -> List[int]:
        return [self.D[i][i] for i in range(min(len(self.D), len(self.V)))]

    @property
    def rank(self) -> int:
        return sum(1 for x in self.diagonal if x)


def smith(A: Sequence[Sequence[int]], ncols: Optional[int] = None) -> SmithForm:
    """Smith normal form of an integer matrix given as a list of rows.

    ``ncols`` is needed only when ``A`` has no rows.
    """
    M = [list(map(int, row)) for row in A]
    rows = len(M)
    cols = len(M[0]) if M else (ncols or 0)
    U = identity(rows)
    V = identity(cols)

    def swap_rows(i, j):
        M[i], M[j] = M[j], M[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for X in (M, V):
            for row in X:
                row[i], row[j] = row[j], row[i]

    def add_row(src, dst, k):  # row_dst += k * row_src
        if k:
            M[dst] = [a + k * b for a, b in zip(M[dst], M[src])]
            U[dst] = [a + k * b for a, b in zip(U[dst], U[src])]

    def add_col(src, dst, k):  # col_dst += k * col_src
        if k:
            for X in (M, V):
                for row in X:
                    row[dst] += k * row[src]

    for t in range(min(rows, cols)):
        # pivot: nonzero entry of least absolute value in the remaining block
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                if M[i][j] and (best is None or abs(M[i][j]) < abs(M[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        while True:
            done = True
            for i in range(t + 1, rows):
                if M[i][t]:
                    add_row(t, i, -(M[i][t] // M[t][t]))
                    if M[i][t]:
                        swap_rows(t, i)
                        done = False
            for j in range(t + 1, cols):
                if M[t][j]:
                    add_col(t, j, -(M[t][j] // M[t][t]))
                    if M[t][j]:
                        swap_cols(t, j)
                        done = False
            if not done:
                continue
            # divisibility: fold any offending entry into the pivot row
            bad = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols)
                        if M[i][j] % M[t][t]), None)
            if bad is None:
                break
            add_row(bad[0], t, 1)
        if M[t][t] < 0:
            M[t] = [-a for a in M[t]]
            U[t] = [-a for a in U[t]]
    return SmithForm(U, M, V)


def kernel_basis(A: Sequence[Sequence[int]], ncols: int) -> List[List[int]]:
    """A basis of the integer kernel {x : A x = 0}."""
    sf = smith(A, ncols)
    V = sf.V
    return [[V[i][j] for i in range(ncols)] for j in range(sf.rank, ncols)]


def kernel_mod(A: Sequence[Sequence[int]], ncols: int, p: int) -> List[tuple]:
    """Generators of {x in (Z/p)^n : A x = 0 mod p} as (vector, additive order).

    Works for composite p: column j of V contributes with order gcd(d_j, p),
    where d_j is the j-th invariant factor (0 beyond the rank).
    """
    sf = smith(A, ncols)
    diag = sf.diagonal + [0] * (ncols - len(sf.diagonal))
    out = []
    for j in range(ncols):
        order = gcd(diag[j], p)
        if order == 1:
            continue
        scale = p // order
        vec = [(scale * sf.V[i][j]) % p for i in range(ncols)]
        out.append((vec, order))
    return out
