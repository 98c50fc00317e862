"""Dense-tableau simplex method over the rationals.

Solves ``max c.x  s.t.  A x <= b, x >= 0`` for ``b >= 0`` (the origin is
feasible, so no phase one is needed).  Bland's rule guarantees termination
on the heavily degenerate systems produced by homogeneous constraints.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence


@dataclass
class LPResult:
    status: str  # "optimal" or "unbounded"
    value: Optional[Fraction]
    x: Optional[List[Fraction]]
    dual: Optional[List[Fraction]]


def maximize(c: Sequence, A: Sequence[Sequence], b: Sequence) -> LPResult:
    m = len(A)
    n = len(c)
    if any(Fraction(x) < 0 for x in b):
        raise ValueError("right-hand side must be nonnegative")
    width = n + m + 1
    tab: List[List[Fraction]] = []
    for i in range(m):
        row = [Fraction(x) for x in A[i]] + [Fraction(int(i == j)) for j in range(m)] + [Fraction(b[i])]
        tab.append(row)
    obj = [-Fraction(x) for x in c] + [Fraction(0)] * m + [Fraction(0)]
    basis = [n + i for i in range(m)]
    while True:
        enter = next((j for j in range(width - 1) if obj[j] < 0), None)
        if enter is None:
            break
        best = None
        leave = None
        for i in range(m):
            a = tab[i][enter]
            if a > 0:
                ratio = tab[i][-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best = ratio
                    leave = i
        if leave is None:
            return LPResult("unbounded", None, None, None)
        prow = tab[leave]
        inv = 1 / prow[enter]
        prow = [x * inv for x in prow]
        tab[leave] = prow
        nz = [j for j, x in enumerate(prow) if x]
        for i in range(m):
            if i != leave:
                f = tab[i][enter]
                if f:
                    r = tab[i]
                    for j in nz:
                        r[j] -= f * prow[j]
        f = obj[enter]
        for j in nz:
            obj[j] -= f * prow[j]
        basis[leave] = enter
    x = [Fraction(0)] * n
    for i, bv in enumerate(basis):
        if bv < n:
            x[bv] = tab[i][-1]
    dual = obj[n:n + m]
    return LPResult("optimal", obj[-1], x, dual)
