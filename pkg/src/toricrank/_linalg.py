"""Exact linear algebra over Q and Z.

Rationals are ``fractions.Fraction``; integer lattices use unimodular
column operations.  Everything here is deterministic: no pivoting choice
depends on anything other than the input order.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

Vector = List[Fraction]
SparseVec = Dict[int, Fraction]


def as_fraction_rows(rows: Iterable[Sequence]) -> List[Vector]:
    return [[Fraction(x) for x in row] for row in rows]


def primitive(vec: Sequence[int]) -> Tuple[int, ...]:
    """Divide an integer vector by the gcd of its entries."""
    g = 0
    for x in vec:
        g = gcd(g, int(x))
    if g == 0:
        return tuple(int(x) for x in vec)
    return tuple(int(x) // g for x in vec)


def integral_scale(vec: Sequence[Fraction]) -> Tuple[int, ...]:
    """Smallest positive multiple of a rational vector that is primitive integral."""
    den = 1
    for x in vec:
        x = Fraction(x)
        den = den * x.denominator // gcd(den, x.denominator)
    return primitive([int(Fraction(x) * den) for x in vec])


def rref(rows: Sequence[Sequence], ncols: Optional[int] = None):
    """Reduced row echelon form.  Returns (rows, pivot columns)."""
    mat = as_fraction_rows(rows)
    if ncols is None:
        ncols = len(mat[0]) if mat else 0
    pivots: List[int] = []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(mat)):
            if mat[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        inv = 1 / mat[r][c]
        mat[r] = [x * inv for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    return mat[:r], pivots


def rank(rows: Sequence[Sequence]) -> int:
    if not rows:
        return 0
    return len(rref(rows)[1])


def nullspace(rows: Sequence[Sequence], ncols: int) -> List[Vector]:
    """Rational basis of {x : rows . x = 0}."""
    red, pivots = rref(rows, ncols) if rows else ([], [])
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for row, p in zip(red, pivots):
            x[p] = -row[f]
        basis.append(x)
    return basis


def solve(rows: Sequence[Sequence], rhs: Sequence) -> Optional[Vector]:
    """One solution of A x = b (free variables set to zero), or None."""
    ncols = len(rows[0])
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, pivots = rref(aug, ncols + 1)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for row, p in zip(red, pivots):
        x[p] = row[ncols]
    return x


def solve_square(rows: Sequence[Sequence], rhs: Sequence) -> Vector:
    """Unique solution of a nonsingular square system."""
    n = len(rows)
    red, pivots = rref([list(r) + [b] for r, b in zip(rows, rhs)], n + 1)
    if pivots != list(range(n)):
        raise ValueError("singular system")
    return [row[n] for row in red]


def determinant(rows: Sequence[Sequence[int]]) -> int:
    """Exact integer determinant by fraction-free (Bareiss) elimination."""
    m = [list(map(int, r)) for r in rows]
    n = len(m)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


class SparseEchelon:
    """Incrementally maintained echelon basis of a row space.

    Rows are dicts ``column -> Fraction``.  Each stored row has its pivot
    at its smallest column with coefficient 1, and pivots are eliminated
    from later insertions, so ``reduce`` returns a canonical representative
    supported on non-pivot columns only.
    """

    def __init__(self) -> None:
        self.rows: Dict[int, SparseVec] = {}

    @property
    def rank(self) -> int:
        return len(self.rows)

    @property
    def pivots(self) -> List[int]:
        return sorted(self.rows)

    def reduce(self, vec: SparseVec) -> SparseVec:
        v = {k: Fraction(x) for k, x in vec.items() if x != 0}
        rows = self.rows
        while True:
            hits = [k for k in v if k in rows]
            if not hits:
                return v
            c = min(hits)
            f = v[c]
            for k, x in rows[c].items():
                y = v.get(k, 0) - f * x
                if y:
                    v[k] = y
                else:
                    v.pop(k, None)

    def add(self, vec: SparseVec) -> bool:
        v = self.reduce(vec)
        if not v:
            return False
        c = min(v)
        inv = 1 / v[c]
        self.rows[c] = {k: x * inv for k, x in v.items()}
        return True


def sparse_rank(rows: Iterable[SparseVec]) -> int:
    ech = SparseEchelon()
    for r in rows:
        ech.add(r)
    return ech.rank


# ---------------------------------------------------------------------------
# integer lattices


def _column_hnf(mat: List[List[int]]):
    """Unimodular column reduction A U = [H | 0].

    Returns (H-part rank r, U) where the last m-r columns of U span the
    integer kernel of A and A U has zeros outside its first r columns.
    """
    rows = len(mat)
    m = len(mat[0]) if rows else 0
    a = [list(map(int, r)) for r in mat]
    u = [[int(i == j) for j in range(m)] for i in range(m)]

    def col_op(j, k, q):  # col_j -= q * col_k
        for r in a:
            r[j] -= q * r[k]
        for r in u:
            r[j] -= q * r[k]

    def col_swap(j, k):
        for r in a:
            r[j], r[k] = r[k], r[j]
        for r in u:
            r[j], r[k] = r[k], r[j]

    def col_neg(j):
        for r in a:
            r[j] = -r[j]
        for r in u:
            r[j] = -r[j]

    piv = 0
    for i in range(rows):
        if piv == m:
            break
        while True:
            nz = [j for j in range(piv, m) if a[i][j] != 0]
            if not nz:
                break
            jmin = min(nz, key=lambda j: (abs(a[i][j]), j))
            if jmin != piv:
                col_swap(piv, jmin)
            done = True
            for j in range(piv + 1, m):
                if a[i][j] != 0:
                    col_op(j, piv, a[i][j] // a[i][piv])
                    if a[i][j] != 0:
                        done = False
            if done:
                break
        if a[i][piv] != 0:
            if a[i][piv] < 0:
                col_neg(piv)
            piv += 1
    return piv, u, a


def row_hnf(rows: Sequence[Sequence[int]]) -> List[Tuple[int, ...]]:
    """Hermite normal form of the row lattice (positive pivots, reduced above)."""
    if not rows:
        return []
    transposed = [list(col) for col in zip(*rows)]
    r, u, a = _column_hnf(transposed)
    h = [tuple(a[i][j] for i in range(len(a))) for j in range(r)]
    # h rows are echelon; reduce entries above pivots into [0, pivot)
    h = [list(x) for x in h]
    pivcols = []
    for row in h:
        pivcols.append(next(c for c, x in enumerate(row) if x != 0))
    for k, (row, pc) in enumerate(zip(h, pivcols)):
        for j in range(k):
            q = h[j][pc] // row[pc]
            if q:
                h[j] = [x - q * y for x, y in zip(h[j], row)]
    return [tuple(x) for x in h]


def integer_kernel(mat: Sequence[Sequence[int]], ncols: Optional[int] = None) -> List[Tuple[int, ...]]:
    """Basis of {x in Z^m : A x = 0}, canonicalized.

    The basis is put in Hermite normal form with respect to the reversed
    column order, so pivots sit on the rightmost coordinates and are
    positive.  This makes the output independent of elimination details.
    """
    if not mat:
        m = ncols or 0
        return [tuple(int(i == j) for j in range(m)) for i in range(m)]
    m = len(mat[0])
    r, u, _ = _column_hnf(mat)
    kern = [[u[i][j] for i in range(m)] for j in range(r, m)]
    if not kern:
        return []
    rev = row_hnf([list(reversed(k)) for k in kern])
    return [tuple(reversed(k)) for k in rev]


def lattice_right_inverse(basis: Sequence[Sequence[int]]) -> List[List[int]]:
    """Integer matrix C with B C = I for a basis B of a saturated sublattice.

    Columns of C give integer functionals dual to the basis rows.
    """
    b = [list(map(int, r)) for r in basis]
    k = len(b)
    m = len(b[0])
    r, u, a = _column_hnf(b)
    if r != k:
        raise ValueError("rows are not independent")
    h = [[Fraction(a[i][j]) for j in range(k)] for i in range(k)]
    # B U = [H 0] => B (U[:, :k] H^{-1}) = I
    hinv = []
    for col in range(k):
        e = [Fraction(int(i == col)) for i in range(k)]
        hinv.append(solve_square(h, e))
    # hinv[col] is column col of H^{-1}
    c = [[Fraction(0)] * k for _ in range(m)]
    for i in range(m):
        for col in range(k):
            c[i][col] = sum((u[i][j] * hinv[col][j] for j in range(k)), Fraction(0))
    out = []
    for row in c:
        if any(x.denominator != 1 for x in row):
            raise ValueError("sublattice is not saturated")
        out.append([int(x) for x in row])
    return out


def saturated_span(vectors: Sequence[Sequence[int]], dim: int) -> List[Tuple[int, ...]]:
    """Basis of (Q-span of vectors) intersected with Z^dim."""
    vecs = [list(map(int, v)) for v in vectors if any(v)]
    if not vecs:
        return []
    normals = integer_kernel(vecs)
    if not normals:
        return [tuple(int(i == j) for j in range(dim)) for i in range(dim)]
    return integer_kernel([list(nv) for nv in normals])


def smith_invariants(mat: Sequence[Sequence[int]]) -> List[int]:
    """Nonzero invariant factors computed from determinantal divisors."""
    from itertools import combinations

    rows = len(mat)
    cols = len(mat[0]) if rows else 0
    r = rank(mat)
    divs = [1]
    for k in range(1, r + 1):
        g = 0
        for ri in combinations(range(rows), k):
            for ci in combinations(range(cols), k):
                g = gcd(g, determinant([[mat[i][j] for j in ci] for i in ri]))
                if g == 1:
                    break
            if g == 1:
                break
        divs.append(g)
    return [divs[k] // divs[k - 1] for k in range(1, r + 1)]
