"""Combinatorics of the decomposition theorem for crepant toric resolutions.

Ehrhart S-polynomials of faces, the multiplicity polynomials S_a(t), the
counts d_l and multiplicities delta, rank series of cupping with the
anticanonical class, vanishing and string-theoretic E-polynomials, and the
a(s) numbers with their generating-function identities.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from math import comb
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

import numpy as np

from .geom import FacePoset, Polytope, dual_polytope, face_polytope, face_poset, is_reflexive, pn_polytope
from .poset import ONE, INDETERMINATE, EulerianPoset, GradedPoly, stanley_inversion_check

Face = FrozenSet[int]


# ---------------------------------------------------------------------------
# Ehrhart data


def count_lattice_points(Q: Polytope) -> int:
    """Number of integer points of a full-dimensional polytope.

    Enumerates a box over all but the last coordinate and counts the
    admissible interval of the last coordinate for each box point.
    """
    m = Q.ambient_dim
    lo = [min(v[j] for v in Q.vertices) for j in range(m)]
    hi = [max(v[j] for v in Q.vertices) for j in range(m)]
    normals = np.array([f.normal for f in Q.facets], dtype=np.int64)
    offsets = np.array([f.offset for f in Q.facets], dtype=np.int64)
    if m == 1:
        return hi[0] - lo[0] + 1
    grids = np.meshgrid(*[np.arange(a, b + 1, dtype=np.int64) for a, b in zip(lo[:-1], hi[:-1])], indexing="ij")
    pts = np.stack([g.ravel() for g in grids], axis=1)
    partial = pts @ normals[:, :-1].T + offsets  # value of each facet form without last coordinate
    last = normals[:, -1]
    lower = np.full(len(pts), lo[-1], dtype=np.int64)
    upper = np.full(len(pts), hi[-1], dtype=np.int64)
    ok = np.ones(len(pts), dtype=bool)
    for j, c in enumerate(last):
        rest = partial[:, j]
        if c > 0:  # c*x + rest >= 0  ->  x >= ceil(-rest / c)
            lower = np.maximum(lower, -((rest) // c))
        elif c < 0:  # x <= floor(rest / -c)
            upper = np.minimum(upper, rest // (-c))
        else:
            ok &= rest >= 0
    width = np.where(ok, np.maximum(upper - lower + 1, 0), 0)
    return int(width.sum())


def ehrhart_s(Q: Optional[Polytope], point: bool = False) -> GradedPoly:
    """S(Q, t) = (1-t)^d Ehr_Q(t) for a full-dimensional Q of dimension d-1.

    ``None`` stands for the empty face (or a point when ``point`` is set);
    both give 1.
    """
    if Q is None:
        return ONE
    d = Q.ambient_dim + 1
    counts = [1] + [count_lattice_points(Q.scaled(k)) for k in range(1, d + 1)]
    series = GradedPoly(counts)
    prod = (ONE - INDETERMINATE) ** d * series
    out = prod.truncate_below(d + 1)
    if out[d] != 0:
        raise AssertionError("Ehrhart numerator has degree >= d")
    return out.truncate_below(d)


def face_ehrhart_s(P: Polytope, a: Face) -> GradedPoly:
    """Ehrhart S-polynomial of a face in its own affine lattice."""
    return ehrhart_s(face_polytope(P, a))


class FaceData:
    """Face poset of a polytope with cached S-polynomials of every face."""

    def __init__(self, P: Polytope):
        self.polytope = P
        self.faces: FacePoset = face_poset(P)
        self.poset: EulerianPoset = self.faces.as_eulerian()
        self._s: Dict[Face, GradedPoly] = {}

    @property
    def dim(self) -> int:
        return self.polytope.ambient_dim

    def rank(self, a: Face) -> int:
        return self.faces.rank(a)

    def s(self, a: Face) -> GradedPoly:
        if a not in self._s:
            self._s[a] = face_ehrhart_s(self.polytope, a)
        return self._s[a]

    def below(self, a: Face) -> List[Face]:
        return [c for c in self.faces.faces if c <= a]

    def above(self, a: Face) -> List[Face]:
        return [c for c in self.faces.faces if a <= c]


def _sq(p: GradedPoly) -> GradedPoly:
    return p.substitute_power(2)


def s_tilde(data: FaceData, a: Face) -> GradedPoly:
    """sum_{c <= a} S(face_c, x) (-1)^{rho(a)-rho(c)} G([c, a], x), in the variable x."""
    total = GradedPoly()
    ra = data.rank(a)
    for c in data.below(a):
        sign = (-1) ** (ra - data.rank(c))
        total = total + sign * data.s(c) * data.poset.g_interval(c, a)
    return total


def s_a_polynomial(data: FaceData, a: Face) -> GradedPoly:
    """Multiplicity polynomial S_a(t); the face-ring sum evaluated at x = t^2."""
    return _sq(s_tilde(data, a))


# ---------------------------------------------------------------------------
# counts from a triangulation


class TriangulationFaces:
    """Simplices of a triangulation grouped by the face of P that carries them."""

    def __init__(self, P: Polytope, tri):
        self.polytope = P
        self.tri = tri
        inc = [frozenset(j for j, f in enumerate(P.facets) if f.value(p) == 0) for p in tri.points]
        facet_sets = P.facet_vertex_sets()
        all_facets = frozenset(range(len(P.facets)))
        all_vertices = frozenset(range(len(P.vertices)))
        self.counts: Dict[Tuple[Face, int], int] = {}
        seen = set()
        for s in tri.simplices:
            for k in range(0, len(s) + 1):
                for sub in combinations(s, k):
                    if sub in seen:
                        continue
                    seen.add(sub)
                    common = all_facets
                    for i in sub:
                        common = common & inc[i]
                    carrier = all_vertices
                    for j in common:
                        carrier = carrier & facet_sets[j]
                    key = (carrier, k - 1)
                    self.counts[key] = self.counts.get(key, 0) + 1

    def simplices_in_relative_interior(self, b: Face, dim: int) -> int:
        return self.counts.get((frozenset(b), dim), 0)


def d_ell_counts(tf: TriangulationFaces, b: Face, ell: int) -> int:
    """Number of (rho(b)-ell-1)-simplices of the induced triangulation interior to face b."""
    rho = _face_rank(tf.polytope, b) if b else 0
    return tf.simplices_in_relative_interior(b, rho - ell - 1)


def _face_rank(P: Polytope, b: Face) -> int:
    from .geom import _affine_rank

    return _affine_rank([P.vertices[i] for i in b]) + 1


def fiber_poincare(tf: TriangulationFaces, b: Face) -> GradedPoly:
    """sum_l d_l (t^2 - 1)^l."""
    rho = _face_rank(tf.polytope, b) if b else 0
    total = GradedPoly()
    u = INDETERMINATE ** 2 - 1
    for ell in range(0, rho + 1):
        d = d_ell_counts(tf, b, ell)
        if d:
            total = total + d * u ** ell
    return total


def delta_multiplicity(tf: TriangulationFaces, data: FaceData, b: Face) -> int:
    """sum over faces c of b of (-1)^{rho(b)-rho(c)} d_0(c)."""
    rb = data.rank(b)
    return sum((-1) ** (rb - data.rank(c)) * d_ell_counts(tf, c, 0) for c in data.below(b))


def delta_closed_form(n: int, i: int) -> Fraction:
    return Fraction(n**i + n * (-1) ** i, n + 1)


# ---------------------------------------------------------------------------
# rank series and E-polynomials


def rank_series(P: Polytope, data: Optional[FaceData] = None) -> GradedPoly:
    """sum_a t^-2 (-1)^{n+1-rho(a)} S(face_a, t^2) G([a, top], t^2)."""
    if not is_reflexive(P):
        raise ValueError("rank series requires a reflexive polytope")
    data = data or FaceData(P)
    n = data.dim
    top = data.faces.top
    total = GradedPoly()
    for a in data.faces.faces:
        sign = (-1) ** (n + 1 - data.rank(a))
        total = total + sign * _sq(data.s(a) * data.poset.g_interval(a, top))
    out = total.shift(-2)
    if not out.is_polynomial():
        raise AssertionError("singular part of the rank series does not cancel")
    return out


def lefschetz_rank_series(P: Polytope, data: Optional[FaceData] = None) -> GradedPoly:
    """sum_{a < top} S_a(t) H_Lef([a, top]*, t^2): the same series before simplification."""
    data = data or FaceData(P)
    top = data.faces.top
    total = GradedPoly()
    for a in data.faces.faces:
        if a == top:
            continue
        total = total + s_a_polynomial(data, a) * _sq(data.poset.h_lef_interval(a, top, dual=True))
    return total


def e_van_series(P: Polytope, data: Optional[FaceData] = None) -> GradedPoly:
    """E^van(Y; t, 1) = sum_a t^-1 (-1)^{rho(a)} S(face_a, t) G([a, top], t)."""
    data = data or FaceData(P)
    top = data.faces.top
    total = GradedPoly()
    for a in data.faces.faces:
        total = total + (-1) ** data.rank(a) * data.s(a) * data.poset.g_interval(a, top)
    out = total.shift(-1)
    if not out.is_polynomial():
        raise AssertionError("E^van is not a polynomial")
    return out


class Poly2:
    """Laurent polynomial in u, v with rational coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Optional[Dict[Tuple[int, int], Fraction]] = None):
        self.coeffs = {k: Fraction(v) for k, v in (coeffs or {}).items() if v}

    def __add__(self, other: "Poly2") -> "Poly2":
        c = dict(self.coeffs)
        for k, v in other.coeffs.items():
            c[k] = c.get(k, 0) + v
        return Poly2(c)

    def __mul__(self, other: "Poly2") -> "Poly2":
        c: Dict[Tuple[int, int], Fraction] = {}
        for (a, b), x in self.coeffs.items():
            for (p, q), y in other.coeffs.items():
                c[(a + p, b + q)] = c.get((a + p, b + q), 0) + x * y
        return Poly2(c)

    def __eq__(self, other) -> bool:
        return isinstance(other, Poly2) and self.coeffs == other.coeffs

    def __repr__(self):
        return " + ".join(f"{v}*u^{a}*v^{b}" for (a, b), v in sorted(self.coeffs.items())) or "0"

    @classmethod
    def monomial(cls, a: int, b: int, c=1) -> "Poly2":
        return cls({(a, b): c})

    @classmethod
    def from_uv(cls, p: GradedPoly) -> "Poly2":
        """p(uv)."""
        return cls({(k, k): v for k, v in p.coeffs.items()})

    @classmethod
    def from_ratio(cls, p: GradedPoly) -> "Poly2":
        """p(v/u)."""
        return cls({(-k, k): v for k, v in p.coeffs.items()})

    def is_polynomial(self) -> bool:
        return all(a >= 0 and b >= 0 for a, b in self.coeffs)

    def swapped(self) -> "Poly2":
        return Poly2({(b, a): v for (a, b), v in self.coeffs.items()})

    def is_symmetric(self) -> bool:
        return self == self.swapped()

    def diagonal(self) -> GradedPoly:
        """Specialization u = v = t."""
        out: Dict[int, Fraction] = {}
        for (a, b), v in self.coeffs.items():
            out[a + b] = out.get(a + b, 0) + v
        return GradedPoly(out)

    def to_json(self) -> Dict[str, str]:
        return {f"{a},{b}": str(v) for (a, b), v in sorted(self.coeffs.items())}


def string_e_polynomial(P: Polytope, data: Optional[FaceData] = None, dual_data: Optional[FaceData] = None) -> Poly2:
    """sum_a (uv)^-1 (-u)^{n+1-rho(a)} S~(C_a, uv) S~(C_a*, v/u).

    C_a* is the face of the dual cone over the dual face of a; its S~ is
    evaluated in the face poset of the dual polytope.
    """
    data = data or FaceData(P)
    Q = dual_polytope(P)
    dual_data = dual_data or FaceData(Q)
    n = data.dim
    # dual vertices are the facet normals of P in facet order
    assert tuple(Q.vertices) == tuple(f.normal for f in P.facets)
    total = Poly2()
    for a in data.faces.faces:
        a_star = data.faces.facets_containing(a)
        k = n + 1 - data.rank(a)
        left = Poly2.from_uv(s_tilde(data, a))
        right = Poly2.from_ratio(s_tilde(dual_data, a_star))
        weight = Poly2.monomial(k - 1, -1, (-1) ** k)
        total = total + weight * left * right
    if not total.is_polynomial():
        raise AssertionError("string E-polynomial has negative exponents")
    return total


def top_term_split(P: Polytope, data: Optional[FaceData] = None) -> bool:
    """S~(C, x)/x equals sum_{a < top} S~(C_a, x) H_Lef([a, top]*, x).

    This is the a = top summand of the string E-polynomial matched against
    its Lefschetz part; evaluated at x = t^2 it is the rank series.
    """
    data = data or FaceData(P)
    top = data.faces.top
    lhs = s_tilde(data, top).shift(-1)
    rhs = GradedPoly()
    for a in data.faces.faces:
        if a != top:
            rhs = rhs + s_tilde(data, a) * data.poset.h_lef_interval(a, top, dual=True)
    return lhs == rhs and _sq(lhs) == rank_series(P, data)


# ---------------------------------------------------------------------------
# a(s) numbers and closed forms


def a_polynomial(n: int) -> GradedPoly:
    """(1 + t + ... + t^{n-1})^{n+1}; its coefficients are the a(s)."""
    return GradedPoly([1] * n) ** (n + 1)


def a_numbers(n: int) -> Tuple[int, ...]:
    """a(i(n+1)) for i = 0..n-1."""
    if n < 1:
        raise ValueError("n must be positive")
    poly = a_polynomial(n)
    return tuple(int(poly[i * (n + 1)]) for i in range(n))


def a_numbers_bruteforce(n: int) -> Tuple[int, ...]:
    """Count tuples in {0..n-1}^{n+1} by digit sum (independent of the polynomial route)."""
    counts: Dict[int, int] = {}
    for tup in product(range(n), repeat=n + 1):
        s = sum(tup)
        counts[s] = counts.get(s, 0) + 1
    return tuple(counts.get(i * (n + 1), 0) for i in range(n))


def nu(n: int) -> int:
    if n < 1:
        raise ValueError("n must be positive")
    val = Fraction(n, n + 1) * (n**n - (-1) ** n)
    assert val.denominator == 1
    return int(val)


def g_m(n: int, m: int) -> GradedPoly:
    """(1-t)^m sum_k C(k(n+1)+m-1, m-1) t^k (a polynomial of degree < m); g_0 = 1."""
    if m == 0:
        return ONE
    series = GradedPoly([comb(k * (n + 1) + m - 1, m - 1) for k in range(m + 1)])
    out = ((ONE - INDETERMINATE) ** m * series).truncate_below(m + 1)
    if out[m] != 0:
        raise AssertionError("g_m has degree >= m")
    return out.truncate_below(m)


def dilated_simplex(scale: int, dim: int) -> Polytope:
    """scale * conv(0, e_1, ..., e_dim)."""
    verts = [tuple([0] * dim)] + [tuple(scale * int(i == j) for j in range(dim)) for i in range(dim)]
    return Polytope(verts)


def g_m_check(n: int, m: int) -> bool:
    expected = ONE if m <= 1 else ehrhart_s(dilated_simplex(n + 1, m - 1))
    return g_m(n, m) == expected


def g_tilde(n: int) -> GradedPoly:
    """sum_i C(n+1,i) (sum_j (-1)^{i-j} C(i,j) g_j) (1 + t + ... + t^{n-i-1})."""
    total = GradedPoly()
    for i in range(n):
        inner = GradedPoly()
        for j in range(i + 1):
            inner = inner + (-1) ** (i - j) * comb(i, j) * g_m(n, j)
        total = total + comb(n + 1, i) * inner * GradedPoly([1] * (n - i))
    return total


def f_polynomial_check(n: int) -> bool:
    """The generating function F(t), with 1/(1-t)^j cleared, equals the closed form."""
    cyc = ONE - INDETERMINATE ** (n + 1)
    numer = GradedPoly()
    for j in range(n):
        inner = GradedPoly()
        for i in range(j, n):
            inner = inner + cyc**i
        numer = numer + (-1) ** (n - j - 1) * comb(n + 1, j) * inner * (ONE - INDETERMINATE) ** (n - 1 - j)
    closed = a_polynomial(n)
    return numer.exact_divide((ONE - INDETERMINATE) ** (n - 1)) == closed if n > 1 else numer == closed


# ---------------------------------------------------------------------------
# identity suite


def s_h_identity(data: FaceData) -> bool:
    """sum_{a < top} S_a(t) H([a, top]*, t^2) = S(P, t^2)."""
    top = data.faces.top
    total = GradedPoly()
    for a in data.faces.faces:
        if a != top:
            total = total + s_a_polynomial(data, a) * _sq(data.poset.h_interval(a, top, dual=True))
    return total == _sq(data.s(top))


def s_g_identity(data: FaceData) -> bool:
    """sum_{a < top} S_a(t) G([a, top]*, t^2) = sum_{a < top} S(face_a, t^2) (-1)^{n-rho(a)} G([a, top], t^2)."""
    top = data.faces.top
    n = data.dim
    lhs = GradedPoly()
    rhs = GradedPoly()
    for a in data.faces.faces:
        if a == top:
            continue
        lhs = lhs + s_a_polynomial(data, a) * _sq(data.poset.g_interval(a, top, dual=True))
        rhs = rhs + (-1) ** (n - data.rank(a)) * _sq(data.s(a) * data.poset.g_interval(a, top))
    return lhs == rhs


def all_intervals_inversion(data: FaceData) -> bool:
    P = data.poset
    return all(stanley_inversion_check(P, a, b) for a, b in P.pairs())


def all_intervals_palindromic(data: FaceData) -> bool:
    P = data.poset
    for a, b in P.pairs():
        d = data.rank(b) - data.rank(a)
        if d >= 1 and not P.h_interval(a, b).is_palindromic(d - 1):
            return False
    return True


@dataclass
class IdentityReport:
    n: int
    results: Dict[str, bool] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.results.values())


def identity_suite(n: int, poset_identities: Optional[bool] = None, m_max: int = 5) -> IdentityReport:
    """Run the polynomial identities for the model polytope of dimension n."""
    rep = IdentityReport(n)
    if poset_identities is None:
        poset_identities = n <= 5
    if poset_identities:
        P = pn_polytope(n)
        data = FaceData(P)
        rep.results["s_h_identity"] = s_h_identity(data)
        rep.results["s_g_identity"] = s_g_identity(data)
        rep.results["stanley_inversion"] = all_intervals_inversion(data)
        rep.results["h_palindromic"] = all_intervals_palindromic(data)
        rs = rank_series(P, data)
        rep.results["rank_series_equals_a_numbers"] = tuple(rs[2 * i] for i in range(n)) == a_numbers(n) and rs.degree <= 2 * (n - 1)
    rep.results["g_m_ehrhart"] = all(g_m_check(n, m) for m in range(1, m_max + 1))
    rep.results["g_tilde_equals_a_numbers"] = g_tilde(n) == GradedPoly(list(a_numbers(n)))
    rep.results["f_closed_form"] = f_polynomial_check(n)
    return rep
