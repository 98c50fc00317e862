"""Simplicial fans, primitive collections, Mori and Kähler cones.

Point/ray indexing convention used throughout the package: a fan carries a
point list whose entry 0 is the origin and whose entries 1..p are the rays.
Cones, primitive collections and divisor indices all refer to positions
in that list, so relation vectors have length p+1 with index 0 for the
origin.
"""

from __future__ import annotations

import json
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

from ._cones import cone_dualize, dual_cone, extreme_rays
from ._linalg import (
    determinant,
    integer_kernel,
    lattice_right_inverse,
    primitive,
    solve_square,
)
from .geom import LatticeVector, Polytope, face_poset, is_reflexive

Cone = Tuple[int, ...]
Relation = Tuple[int, ...]


class Fan:
    """Simplicial fan given by rays and maximal cones."""

    def __init__(self, rays: Sequence[Sequence[int]], max_cones: Iterable[Iterable[int]]):
        rays = [tuple(int(x) for x in r) for r in rays]
        if not rays:
            raise ValueError("fan needs at least one ray")
        self.dim = len(rays[0])
        for r in rays:
            if primitive(r) != r or not any(r):
                raise ValueError(f"ray {r} is not primitive")
        self.points: Tuple[LatticeVector, ...] = (tuple([0] * self.dim), *rays)
        cones = sorted(set(tuple(sorted(int(i) for i in c)) for c in max_cones))
        for c in cones:
            if any(i < 1 or i > len(rays) for i in c):
                raise ValueError("cone index out of range")
            if determinant_rank(self.points, c) != len(c):
                raise ValueError(f"cone {c} is not simplicial")
        self.max_cones: Tuple[Cone, ...] = tuple(cones)

    # basic structure

    @property
    def rays(self) -> Tuple[LatticeVector, ...]:
        return self.points[1:]

    @property
    def num_rays(self) -> int:
        return len(self.points) - 1

    def ray(self, i: int) -> LatticeVector:
        return self.points[i]

    @cached_property
    def cone_set(self) -> FrozenSet[Cone]:
        out: Set[Cone] = set()
        for c in self.max_cones:
            for k in range(len(c) + 1):
                out.update(combinations(c, k))
        return frozenset(out)

    def cones(self, k: int) -> List[Cone]:
        return sorted(c for c in self.cone_set if len(c) == k)

    def is_cone(self, idx: Iterable[int]) -> bool:
        return tuple(sorted(idx)) in self.cone_set

    def is_smooth(self) -> bool:
        return all(
            len(c) == self.dim and abs(determinant([self.points[i] for i in c])) == 1 for c in self.max_cones
        )

    def is_pure(self) -> bool:
        return all(len(c) == self.dim for c in self.max_cones)

    def cone_coordinates(self, cone: Cone, v: Sequence[int]) -> List[Fraction]:
        """Coefficients of v in the rays of a full-dimensional cone."""
        cols = [self.points[i] for i in cone]
        mat = [[cols[j][r] for j in range(len(cols))] for r in range(self.dim)]
        return solve_square(mat, list(v))

    def is_complete(self) -> bool:
        """Walls shared by exactly two cones on opposite sides, and degree one."""
        if not self.is_pure():
            return False
        walls: Dict[Cone, List[Tuple[Cone, int]]] = {}
        for c in self.max_cones:
            for i in c:
                w = tuple(j for j in c if j != i)
                walls.setdefault(w, []).append((c, i))
        for w, sides in walls.items():
            if len(sides) != 2:
                return False
            (c1, a), (c2, b) = sides
            wall_rays = [self.points[j] for j in w]
            s1 = determinant([*wall_rays, self.points[a]])
            s2 = determinant([*wall_rays, self.points[b]])
            if s1 * s2 >= 0:
                return False
        probe = tuple(1 + 37 ** (k + 1) for k in range(self.dim))
        hits = 0
        for c in self.max_cones:
            coords = self.cone_coordinates(c, probe)
            if all(x >= 0 for x in coords):
                if any(x == 0 for x in coords):
                    probe = None
                    break
                hits += 1
        if probe is None:
            return True  # probe hit a wall; the wall test above already certifies a pseudomanifold
        return hits == 1

    def complete(self) -> bool:
        return self.is_complete()

    def __eq__(self, other):
        return isinstance(other, Fan) and self.points == other.points and self.max_cones == other.max_cones

    def __hash__(self):
        return hash((self.points, self.max_cones))

    def __repr__(self):
        return f"Fan(rays={len(self.rays)}, max_cones={len(self.max_cones)})"

    def to_json(self) -> str:
        return json.dumps(
            {"rays": [list(r) for r in self.rays], "max_cones": [[i - 1 for i in c] for c in self.max_cones]}
        )

    @classmethod
    def from_json(cls, text: str) -> "Fan":
        data = json.loads(text)
        return cls(data["rays"], [[i + 1 for i in c] for c in data["max_cones"]])

    def same_cones(self, other: "Fan") -> bool:
        """Equality of cone sets as sets of ray vectors (ignoring indexing)."""

        def key(f):
            return {frozenset(f.points[i] for i in c) for c in f.max_cones}

        return key(self) == key(other)


def determinant_rank(points, cone) -> int:
    from ._linalg import rank

    return rank([points[i] for i in cone]) if cone else 0


def fan_from_triangulation(T) -> Fan:
    """Cones over the boundary simplices of a star triangulation with apex 0."""
    if any(x != 0 for x in T.points[0]):
        raise ValueError("point 0 must be the origin")
    cones = []
    for s in T.simplices:
        if 0 not in s:
            raise ValueError("every maximal simplex must contain the origin")
        cones.append([i for i in s if i != 0])
    return Fan(T.points[1:], cones)


def coarse_fan(P: Polytope) -> Fan:
    """Cones over the proper faces of a reflexive polytope (simplicial faces only)."""
    if not is_reflexive(P):
        raise ValueError("coarse fan requires a reflexive polytope")
    poset = face_poset(P)
    facets = [f for f in poset.faces if poset.dims[f] == P.ambient_dim - 1]
    cones = []
    for f in facets:
        if len(f) != P.ambient_dim:
            raise ValueError("facet is not a simplex; only simplicial fans are supported")
        cones.append([i + 1 for i in sorted(f)])
    return Fan(P.vertices, cones)


def product_fan(a: Fan, b: Fan) -> Fan:
    rays = [tuple(r) + tuple([0] * b.dim) for r in a.rays] + [tuple([0] * a.dim) + tuple(r) for r in b.rays]
    off = a.num_rays
    cones = [list(c1) + [j + off for j in c2] for c1 in a.max_cones for c2 in b.max_cones]
    return Fan(rays, cones)


def projective_space_fan(n: int) -> Fan:
    rays = [tuple(int(i == j) for j in range(n)) for i in range(n)] + [tuple([-1] * n)]
    cones = [[j for j in range(1, n + 2) if j != i] for i in range(1, n + 2)]
    return Fan(rays, cones)


# ---------------------------------------------------------------------------
# relations


def relation_matrix(points: Sequence[Sequence[int]]) -> List[List[int]]:
    """Rows: all-ones, then each coordinate of the points."""
    n = len(points[0])
    return [[1] * len(points)] + [[p[j] for p in points] for j in range(n)]


def relation_lattice_basis(points: Sequence[Sequence[int]]) -> List[Relation]:
    """Integer basis of the affine relations among the points."""
    from ._linalg import rank

    pts = [tuple(p) for p in points]
    n = len(pts[0])
    mat = relation_matrix(pts)
    if rank(mat) != n + 1:
        raise ValueError("points do not span affinely")
    return [tuple(v) for v in integer_kernel(mat)]


def is_relation(points, ell: Sequence[int]) -> bool:
    return all(sum(a * b for a, b in zip(row, ell)) == 0 for row in relation_matrix(points))


def primitive_collections(F: Fan) -> List[FrozenSet[int]]:
    """Minimal subsets of rays that do not span a cone."""
    faces = F.cone_set
    out: List[FrozenSet[int]] = []
    for k in range(2, F.dim + 2):
        smaller = [c for c in faces if len(c) == k - 1]
        seen = set()
        for c in smaller:
            for w in range(c[-1] + 1 if c else 1, F.num_rays + 1):
                cand = c + (w,)
                if cand in seen or cand in faces:
                    continue
                seen.add(cand)
                if all(tuple(x for x in cand if x != y) in faces for y in cand):
                    out.append(frozenset(cand))
    return sorted(out, key=lambda s: (len(s), sorted(s)))


def sr_generators(F: Fan) -> List[FrozenSet[int]]:
    """Supports of the square-free monomials generating the Stanley-Reisner ideal."""
    return primitive_collections(F)


def primitive_relation(F: Fan, collection: Iterable[int]) -> Relation:
    """Integral relation attached to a primitive collection.

    The barycenter of the collection lies in a unique cone; writing it in
    that cone's rays (with the origin absorbing the remaining weight) and
    clearing the denominator |collection| gives the relation.
    """
    coll = sorted(collection)
    k = len(coll)
    total = [sum(F.points[i][j] for i in coll) for j in range(F.dim)]
    coords = None
    for c in F.max_cones:
        x = F.cone_coordinates(c, total)
        if all(q >= 0 for q in x):
            coords = dict(zip(c, x))
            break
    if coords is None:
        raise ValueError("barycenter not in the support of the fan")
    ell = [0] * (F.num_rays + 1)
    for i in coll:
        ell[i] += 1
    weight = Fraction(0)
    for i, q in coords.items():
        if q.denominator != 1:
            raise ArithmeticError("non-integral barycentric coordinates; triangulation not unimodular")
        ell[i] -= int(q)
        weight += q
    c0 = k - weight
    if c0.denominator != 1 or c0 < 0:
        raise ArithmeticError("barycenter lies outside the polytope spanned by the rays")
    ell[0] = -int(c0)
    rel = tuple(ell)
    assert is_relation(F.points, rel)
    assert rel[0] <= 0
    return rel


def mori_generators(F: Fan) -> List[Relation]:
    rels = {primitive_relation(F, P) for P in primitive_collections(F)}
    return sorted(rels)


def relation_parts(ell: Sequence[int]) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    """(ell+, ell-) with ell = ell+ - ell- and both nonnegative."""
    plus = tuple(max(x, 0) for x in ell)
    minus = tuple(max(-x, 0) for x in ell)
    return plus, minus


class MoriCone:
    """The Mori cone of a smooth projective fan inside the relation lattice.

    Elements are stored in lattice coordinates w.r.t. ``basis`` and in full
    coordinates.  ``facets`` are the Kähler cone generators as functionals
    on lattice coordinates; membership is a sign test against them.
    """

    def __init__(self, F: Fan):
        self.fan = F
        self.basis: List[Relation] = relation_lattice_basis(F.points)
        self.rank = len(self.basis)
        self.coordinate_map = lattice_right_inverse(self.basis)  # ell -> ell @ C
        self.generators: List[Relation] = mori_generators(F)
        gens_coords = [self.coordinates(g) for g in self.generators]
        self.facets: List[Tuple[int, ...]] = cone_dualize(gens_coords, self.rank)
        rays, lin = dual_cone(gens_coords, self.rank)
        if lin:
            raise ValueError("Mori cone is not full-dimensional; fan is not projective")
        self.extremal = [self.from_coordinates(r) for r in extreme_rays(gens_coords)]

    def coordinates(self, ell: Sequence[int]) -> Tuple[int, ...]:
        c = self.coordinate_map
        return tuple(sum(ell[i] * c[i][j] for i in range(len(ell))) for j in range(self.rank))

    def from_coordinates(self, x: Sequence[int]) -> Relation:
        return tuple(sum(x[k] * self.basis[k][i] for k in range(self.rank)) for i in range(len(self.basis[0])))

    def contains(self, ell: Sequence[int]) -> bool:
        if not is_relation(self.fan.points, ell):
            return False
        x = self.coordinates(ell)
        return all(sum(a * b for a, b in zip(f, x)) >= 0 for f in self.facets)

    def lift_functional(self, w: Sequence[int]) -> Tuple[int, ...]:
        """Integer vector h on Z^{p+1} with <h, ell> = <w, coordinates(ell)> on L.

        Lifts differ by affine functions of the points; the returned lift
        vanishes at the origin and, when a small integral linear shift
        allows it, is nonnegative on all rays.
        """
        c = self.coordinate_map
        h = [sum(c[i][j] * w[j] for j in range(self.rank)) for i in range(len(c))]
        h = [x - h[0] for x in h]
        pts = self.fan.points
        best = None
        radius = 6
        grid = range(-radius, radius + 1)
        from itertools import product

        for lam in sorted(product(grid, repeat=self.fan.dim), key=lambda v: (sum(abs(x) for x in v), v)):
            cand = [x - sum(a * b for a, b in zip(lam, p)) for x, p in zip(h, pts)]
            if min(cand[1:]) >= 0:
                best = cand
                break
        return tuple(best if best is not None else h)

    def kahler_functional(self) -> Tuple[int, ...]:
        """Sum of the Kähler cone generators, lifted to Z^{p+1}."""
        w = [sum(f[j] for f in self.facets) for j in range(self.rank)]
        return self.lift_functional(w)

    def default_functional(self) -> Tuple[int, ...]:
        """Sum of the ray coordinates if it is positive on every generator.

        Otherwise the integral lift (zero at the origin, nonnegative on rays)
        minimizing the total generator degree subject to every generator
        having degree at least one; the Kähler sum is the last resort.
        """
        simple = tuple([0] + [1] * self.fan.num_rays)
        if all(degree(simple, g) > 0 for g in self.generators):
            return simple
        cand = self._minimal_functional()
        if cand is not None and all(degree(cand, g) > 0 for g in self.generators):
            return cand
        return self.kahler_functional()

    def _minimal_functional(self) -> Optional[Tuple[int, ...]]:
        try:
            import numpy as np
            from scipy.optimize import Bounds, LinearConstraint, milp
        except ImportError:  # pragma: no cover
            return None
        size = self.fan.num_rays + 1
        gens = np.array(self.generators, dtype=float)
        cost = gens.sum(axis=0)
        upper = np.full(size, np.inf)
        upper[0] = 0.0
        res = milp(
            cost,
            constraints=[LinearConstraint(gens, lb=np.ones(len(gens)), ub=np.full(len(gens), np.inf))],
            integrality=np.ones(size),
            bounds=Bounds(np.zeros(size), upper),
        )
        if res.status != 0 or res.x is None:
            return None
        return tuple(int(round(x)) for x in res.x)

    def check_functional(self, omega: Sequence[int]) -> None:
        if len(omega) != self.fan.num_rays + 1:
            raise ValueError("functional has the wrong length")
        if any(degree(omega, g) <= 0 for g in self.generators):
            raise ValueError("degree functional is not positive on every Mori generator")

    def points(self, omega: Optional[Sequence[int]], bound: int) -> List[Relation]:
        """All lattice points of the cone with degree at most ``bound``."""
        if omega is None:
            omega = self.default_functional()
        omega = tuple(omega)
        self.check_functional(omega)
        if bound < 0:
            return []
        w = self.coordinates_functional(omega)
        found = [self.from_coordinates(x) for x in self._enumerate(w, bound)]
        return sorted(found, key=lambda l: (degree(omega, l), l))

    def _enumerate(self, w: Sequence[int], bound: int) -> List[Tuple[int, ...]]:
        """Lattice points x with <f,x> >= 0 for all facets and <w,x> <= bound.

        Coordinate ranges come from floating LP bounds widened by a margin;
        every reported point passes the exact inequalities.
        """
        import numpy as np
        from scipy.optimize import linprog

        r = self.rank
        A = np.array([[-float(a) for a in f] for f in self.facets] + [[float(a) for a in w]])
        b = np.array([0.0] * len(self.facets) + [float(bound)])
        out: List[Tuple[int, ...]] = []
        margin = 1e-6

        def extent(prefix, j):
            fixed = len(prefix)
            eq_a = np.eye(r)[:fixed] if fixed else None
            eq_b = np.array(prefix, dtype=float) if fixed else None
            ends = []
            for sign in (1.0, -1.0):
                c = np.zeros(r)
                c[j] = sign
                res = linprog(c, A_ub=A, b_ub=b, A_eq=eq_a, b_eq=eq_b, bounds=[(None, None)] * r, method="highs")
                if res.status != 0:
                    return None
                ends.append(sign * res.fun)
            return int(np.ceil(ends[0] - margin)), int(np.floor(ends[1] + margin))

        def exact_ok(x):
            if sum(a * c for a, c in zip(w, x)) > bound:
                return False
            return all(sum(a * c for a, c in zip(f, x)) >= 0 for f in self.facets)

        def rec(prefix):
            j = len(prefix)
            if j == r:
                if exact_ok(prefix):
                    out.append(tuple(prefix))
                return
            rng = extent(prefix, j)
            if rng is None:
                return
            lo, hi = rng
            if j == r - 1:
                for v in range(lo, hi + 1):
                    cand = prefix + [v]
                    if exact_ok(cand):
                        out.append(tuple(cand))
                return
            for v in range(lo, hi + 1):
                rec(prefix + [v])

        rec([])
        return out

    def coordinates_functional(self, omega: Sequence[int]) -> Tuple[int, ...]:
        """Functional omega expressed on lattice coordinates."""
        return tuple(sum(omega[i] * self.basis[k][i] for i in range(len(omega))) for k in range(self.rank))

def mori_points(F: Fan, omega: Optional[Sequence[int]], bound: int, cone: Optional[MoriCone] = None) -> List[Relation]:
    return (cone or MoriCone(F)).points(omega, bound)


def degree(omega: Sequence[int], ell: Sequence[int]) -> int:
    return sum(a * b for a, b in zip(omega, ell))
