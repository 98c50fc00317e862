"""Rational cohomology of smooth complete toric varieties.

Degree k is spanned by orbit-closure classes V(sigma), sigma a k-cone,
modulo the relations obtained by cupping linear equivalences with
(k-1)-dimensional orbit closures.  A second, independent construction
from the Stanley-Reisner face ring is kept for validation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from math import comb
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from ._linalg import SparseEchelon, integer_kernel, nullspace, rank, solve
from .fan import Fan

Cone = Tuple[int, ...]


class RingClass:
    """Sparse vector over the graded basis of a CohomRing."""

    __slots__ = ("ring", "coords")

    def __init__(self, ring: "CohomRing", coords: Optional[Dict[int, Fraction]] = None):
        self.ring = ring
        self.coords: Dict[int, Fraction] = {k: Fraction(v) for k, v in (coords or {}).items() if v}

    def __add__(self, other: "RingClass") -> "RingClass":
        out = dict(self.coords)
        for k, v in other.coords.items():
            out[k] = out.get(k, 0) + v
        return RingClass(self.ring, out)

    def __sub__(self, other: "RingClass") -> "RingClass":
        return self + other.scale(-1)

    def __neg__(self) -> "RingClass":
        return self.scale(-1)

    def scale(self, c) -> "RingClass":
        c = Fraction(c)
        return RingClass(self.ring, {k: v * c for k, v in self.coords.items()})

    def __mul__(self, other):
        if isinstance(other, RingClass):
            return self.ring.multiply(self, other)
        return self.scale(other)

    __rmul__ = scale

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = self.ring.one().scale(other)
        return isinstance(other, RingClass) and self.coords == other.coords

    def __hash__(self):
        return hash(tuple(sorted(self.coords.items())))

    def is_zero(self) -> bool:
        return not self.coords

    def component(self, k: int) -> "RingClass":
        lo, hi = self.ring.offsets[k], self.ring.offsets[k + 1]
        return RingClass(self.ring, {i: v for i, v in self.coords.items() if lo <= i < hi})

    def degrees(self) -> List[int]:
        return sorted({self.ring.degree_of[i] for i in self.coords})

    def scalar(self) -> Fraction:
        return self.coords.get(0, Fraction(0))

    def to_json(self) -> Dict[str, str]:
        return {",".join(map(str, self.ring.basis[i])) or "1": str(v) for i, v in sorted(self.coords.items())}

    def __repr__(self):
        terms = [f"{v}*V{self.ring.basis[i]}" for i, v in sorted(self.coords.items())]
        return " + ".join(terms) or "0"


class CohomRing:
    """Graded ring H^*(X_Sigma, Q) with divisor multiplication."""

    def __init__(self, fan: Fan):
        if not fan.is_smooth():
            raise ValueError("fan is not smooth")
        if not fan.is_complete():
            raise ValueError("fan is not complete")
        self.fan = fan
        self.dim = fan.dim
        self.num_divisors = fan.num_rays + 1
        self.cones_by_degree: List[List[Cone]] = [sorted(fan.cones(k)) for k in range(self.dim + 1)]
        self._cone_set = fan.cone_set
        self.echelons: List[SparseEchelon] = []
        self.basis: List[Cone] = []
        self.offsets = [0]
        for k in range(self.dim + 1):
            ech = self._relations(k)
            self.echelons.append(ech)
            free = [c for c in self.cones_by_degree[k] if c not in ech.rows]
            self.basis.extend(free)
            self.offsets.append(len(self.basis))
        self.index = {c: i for i, c in enumerate(self.basis)}
        self.degree_of = [len(c) for c in self.basis]
        self._mult: Dict[Tuple[int, int], Dict[int, Fraction]] = {}

    # construction -----------------------------------------------------------

    def _relations(self, k: int) -> SparseEchelon:
        ech = SparseEchelon()
        if k == 0:
            return ech
        for tau in self.cones_by_degree[k - 1]:
            vecs = [self.fan.points[i] for i in tau]
            perp = integer_kernel(vecs, self.dim) if vecs else [tuple(int(i == j) for j in range(self.dim)) for i in range(self.dim)]
            nbrs = [i for i in range(1, self.num_divisors) if i not in tau and self._is_cone(tau + (i,))]
            for m in perp:
                row: Dict[Cone, Fraction] = {}
                for i in nbrs:
                    c = sum(a * b for a, b in zip(m, self.fan.points[i]))
                    if c:
                        row[tuple(sorted(tau + (i,)))] = Fraction(c)
                if row:
                    ech.add(row)
        return ech

    def _is_cone(self, idx: Iterable[int]) -> bool:
        return tuple(sorted(idx)) in self._cone_set

    # basic accessors ----------------------------------------------------------

    @property
    def graded_dims(self) -> Tuple[int, ...]:
        return tuple(self.offsets[k + 1] - self.offsets[k] for k in range(self.dim + 1))

    @property
    def total_dim(self) -> int:
        return len(self.basis)

    def one(self) -> RingClass:
        return RingClass(self, {0: Fraction(1)})

    def zero(self) -> RingClass:
        return RingClass(self)

    def orbit_class(self, cone: Iterable[int]) -> RingClass:
        """Class of V(sigma) in normal form (zero if sigma is not a cone)."""
        c = tuple(sorted(cone))
        if not self._is_cone(c):
            return self.zero()
        return self._normal_form(len(c), {c: Fraction(1)})

    def _normal_form(self, k: int, vec: Dict[Cone, Fraction]) -> RingClass:
        red = self.echelons[k].reduce(vec)
        return RingClass(self, {self.index[c]: v for c, v in red.items()})

    # multiplication -------------------------------------------------------------

    def _divisor_on_basis(self, i: int, b: int) -> Dict[int, Fraction]:
        key = (i, b)
        hit = self._mult.get(key)
        if hit is not None:
            return hit
        sigma = self.basis[b]
        k = len(sigma)
        if k == self.dim:
            out: Dict[int, Fraction] = {}
        elif i not in sigma:
            out = self.orbit_class(sigma + (i,)).coords
        else:
            pts = self.fan.points
            # m with <m,u_i> = 1 and <m,u_j> = 0 for the other rays of sigma
            rows = [list(pts[j]) for j in sigma]
            rhs = [Fraction(int(j == i)) for j in sigma]
            m = solve(rows, rhs)
            vec: Dict[Cone, Fraction] = {}
            for j in range(1, self.num_divisors):
                if j in sigma:
                    continue
                c = tuple(sorted(sigma + (j,)))
                if c in self._cone_set:
                    w = sum(a * b for a, b in zip(m, pts[j]))
                    if w:
                        vec[c] = vec.get(c, 0) - w
            out = self._normal_form(k + 1, vec).coords
        self._mult[key] = out
        return out

    def cup_divisor(self, x: RingClass, i: int) -> RingClass:
        """D_i * x, where D_0 = -(D_1 + ... + D_p)."""
        if not 0 <= i < self.num_divisors:
            raise IndexError("divisor index out of range")
        if i == 0:
            total = self.zero()
            for j in range(1, self.num_divisors):
                total = total + self.cup_divisor(x, j)
            return -total
        out: Dict[int, Fraction] = {}
        for b, v in x.coords.items():
            for c, w in self._divisor_on_basis(i, b).items():
                out[c] = out.get(c, 0) + v * w
        return RingClass(self, out)

    def divisor(self, i: int) -> RingClass:
        return self.cup_divisor(self.one(), i)

    def multiply(self, x: RingClass, y: RingClass) -> RingClass:
        """General product; uses V(sigma) = prod of D_i over sigma (smooth fan)."""
        total = self.zero()
        for b, v in y.coords.items():
            part = x.scale(v)
            for i in self.basis[b]:
                part = self.cup_divisor(part, i)
            total = total + part
        return total

    def monomial(self, exponents: Dict[int, int]) -> RingClass:
        x = self.one()
        for i, e in sorted(exponents.items()):
            for _ in range(e):
                x = self.cup_divisor(x, i)
        return x

    def degree_map(self, i: int, k: int) -> List[List[Fraction]]:
        """Matrix of cupping with D_i from degree k to k+1 (rows = source basis)."""
        lo, hi = self.offsets[k], self.offsets[k + 1]
        lo2, hi2 = self.offsets[k + 1], self.offsets[k + 2] if k + 2 < len(self.offsets) else self.offsets[-1]
        mat = []
        for b in range(lo, hi):
            img = self.cup_divisor(RingClass(self, {b: Fraction(1)}), i)
            mat.append([img.coords.get(c, Fraction(0)) for c in range(lo2, hi2)])
        return mat

    def top_degree(self, x: RingClass) -> Fraction:
        """Coefficient of the top-degree class (the class V(sigma) of any maximal cone)."""
        assert self.graded_dims[-1] == 1
        return x.coords.get(self.offsets[self.dim], Fraction(0))

    def pairing_rank(self, k: int) -> int:
        rows = []
        for a in range(self.offsets[k], self.offsets[k + 1]):
            xa = RingClass(self, {a: Fraction(1)})
            rows.append(
                [
                    self.top_degree(self.multiply(xa, RingClass(self, {b: Fraction(1)})))
                    for b in range(self.offsets[self.dim - k], self.offsets[self.dim - k + 1])
                ]
            )
        return rank(rows) if rows and rows[0] else 0


def build_ring(F: Fan) -> CohomRing:
    return CohomRing(F)


def cup_divisor(R: CohomRing, x: RingClass, i: int) -> RingClass:
    return R.cup_divisor(x, i)


def anticanonical_cup_rank(R: CohomRing) -> Tuple[int, Tuple[int, ...]]:
    """Rank of x -> -D_0 x on H^*, total and per degree k -> k+1."""
    per = []
    for k in range(R.dim + 1):
        if k == R.dim:
            per.append(0)
            continue
        per.append(rank(R.degree_map(0, k)))
    return sum(per), tuple(per)


# ---------------------------------------------------------------------------
# the operators O_ell


def _shift(R: CohomRing, x: RingClass, i: int, c) -> RingClass:
    """(D_i + c) x."""
    return R.cup_divisor(x, i) + x.scale(c)


def _inverse_shift(R: CohomRing, x: RingClass, i: int, c: int) -> RingClass:
    """(D_i + c)^{-1} x for c != 0, by the terminating geometric series."""
    c = Fraction(c)
    total = R.zero()
    term = x
    coeff = 1 / c
    for _ in range(R.dim + 1):
        if term.is_zero():
            break
        total = total + term.scale(coeff)
        term = R.cup_divisor(term, i)
        coeff = -coeff / c
    return total


def o_ell(R: CohomRing, ell: Sequence[int]) -> RingClass:
    """O_ell = prod_{j=1}^{-ell_0} (D_0 - j) * prod_{i>=1} Gamma-type ratios.

    For i >= 1: falling factorial D_i (D_i - 1) ... (D_i + ell_i + 1) when
    ell_i < 0, or 1/((D_i + 1) ... (D_i + ell_i)) when ell_i > 0.
    """
    ell = [int(x) for x in ell]
    if len(ell) != R.num_divisors:
        raise ValueError("relation has the wrong length")
    if ell[0] > 0:
        raise ValueError("O_ell is defined for ell_0 <= 0 only")
    x = R.one()
    for i in range(1, R.num_divisors):
        if ell[i] < 0:
            for j in range(-ell[i]):
                x = _shift(R, x, i, -j)
                if x.is_zero():
                    return x
    for j in range(1, -ell[0] + 1):
        x = _shift(R, x, 0, -j)
    for i in range(1, R.num_divisors):
        for j in range(1, ell[i] + 1):
            x = _inverse_shift(R, x, i, j)
    return x


def shift_identity(R: CohomRing, ell: Sequence[int], i: int, exponent_form: bool = True) -> bool:
    """Test O_ell (D_i + c) == O_{ell - e_i}.

    With ``exponent_form`` the constant c is the i-th entry of the series
    exponent d = ell - e_0 (so c = ell_0 - 1 at i = 0); otherwise c = ell_i.
    The two agree for i >= 1.
    """
    ell = [int(x) for x in ell]
    c = ell[i] - 1 if (exponent_form and i == 0) else ell[i]
    lowered = list(ell)
    lowered[i] -= 1
    return _shift(R, o_ell(R, ell), i, c) == o_ell(R, lowered)


def vanishing_witness(R: CohomRing, gamma: Sequence[int], collections: Sequence[Iterable[int]]) -> Optional[Tuple[int, ...]]:
    """For gamma outside the Mori cone (gamma_0 <= 0): a primitive collection
    inside {i >= 1 : gamma_i < 0}, returned when O_gamma vanishes through the
    falling-factorial factors it contributes.  None if no collection fits
    or O_gamma fails to vanish.
    """
    negative = {i for i in range(1, len(gamma)) if gamma[i] < 0}
    for coll in collections:
        coll = frozenset(coll)
        if coll <= negative:
            return tuple(sorted(coll)) if o_ell(R, gamma).is_zero() else None
    return None


# ---------------------------------------------------------------------------
# independent construction via the face ring


class FaceRingQuotient:
    """H^* realized as Q[x_1..x_p] / (Stanley-Reisner + linear forms).

    In each degree the quotient is spanned by monomials supported on cones;
    relations are the linear forms times degree-(k-1) cone monomials, with
    non-face products dropped (they lie in the Stanley-Reisner ideal).
    Only practical for small fans.
    """

    def __init__(self, fan: Fan):
        self.fan = fan
        self.dim = fan.dim
        self.cones = fan.cone_set
        self.monomials: List[List[Tuple[int, ...]]] = [self._face_monomials(k) for k in range(self.dim + 2)]
        self.monomial_index = [{m: j for j, m in enumerate(ms)} for ms in self.monomials]
        self.relations: List[SparseEchelon] = [self._relations(k) for k in range(self.dim + 2)]

    def _face_monomials(self, k: int) -> List[Tuple[int, ...]]:
        out = []
        for m in combinations_with_replacement(range(1, self.fan.num_rays + 1), k):
            if tuple(sorted(set(m))) in self.cones:
                out.append(m)
        return out

    def _reduce_monomial(self, m: Tuple[int, ...]) -> Optional[Tuple[int, ...]]:
        m = tuple(sorted(m))
        return m if tuple(sorted(set(m))) in self.cones else None

    def _relations(self, k: int) -> SparseEchelon:
        ech = SparseEchelon()
        if k == 0:
            return ech
        index = self.monomial_index[k]
        for base in self.monomials[k - 1]:
            for j in range(self.dim):
                row: Dict[int, Fraction] = {}
                for i in range(1, self.fan.num_rays + 1):
                    c = self.fan.points[i][j]
                    if not c:
                        continue
                    m = self._reduce_monomial(base + (i,))
                    if m is not None:
                        row[index[m]] = row.get(index[m], 0) + c
                if row:
                    ech.add(row)
        return ech

    @property
    def graded_dims(self) -> Tuple[int, ...]:
        return tuple(len(self.monomials[k]) - self.relations[k].rank for k in range(self.dim + 1))

    def anticanonical_ranks(self) -> Tuple[int, ...]:
        """Rank of multiplication by x_1 + ... + x_p from degree k to k+1."""
        out = []
        for k in range(self.dim + 1):
            if k == self.dim:
                out.append(0)
                continue
            ech = SparseEchelon()
            for r in self.relations[k + 1].rows.values():
                ech.add(r)
            base_rank = ech.rank
            index = self.monomial_index[k + 1]
            for m in self.monomials[k]:
                row: Dict[int, Fraction] = {}
                for i in range(1, self.fan.num_rays + 1):
                    mm = self._reduce_monomial(m + (i,))
                    if mm is not None:
                        row[index[mm]] = row.get(index[mm], 0) + 1
                if row:
                    ech.add(row)
            out.append(ech.rank - base_rank)
        return tuple(out)

    def is_zero(self, k: int, monomial_coeffs: Dict[Tuple[int, ...], Fraction]) -> bool:
        vec = {}
        for m, c in monomial_coeffs.items():
            mm = self._reduce_monomial(m)
            if mm is not None and c:
                vec[self.monomial_index[k][mm]] = vec.get(self.monomial_index[k][mm], 0) + Fraction(c)
        return not self.relations[k].reduce(vec)


def brute_force_dims(F: Fan) -> Tuple[int, ...]:
    return FaceRingQuotient(F).graded_dims
