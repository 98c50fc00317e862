"""Lattice polytopes: facets, lattice points, duality, volumes and face posets."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

import numpy as np

from ._cones import dual_cone
from ._linalg import determinant, integer_kernel, rank, saturated_span, solve

LatticeVector = Tuple[int, ...]
Face = FrozenSet[int]


@dataclass(frozen=True)
class Facet:
    """Inequality ``<normal, x> + offset >= 0`` with primitive integral normal."""

    normal: LatticeVector
    offset: int

    def value(self, x: Sequence[int]) -> int:
        return sum(a * b for a, b in zip(self.normal, x)) + self.offset


class Polytope:
    """Full-dimensional lattice polytope given by its vertices.

    Redundant input points are dropped; the surviving vertices keep the
    order in which they were supplied.
    """

    def __init__(self, points: Sequence[Sequence[int]]):
        pts: List[LatticeVector] = []
        for p in points:
            t = tuple(int(x) for x in p)
            if t not in pts:
                pts.append(t)
        if not pts:
            raise ValueError("empty point set")
        dim = len(pts[0])
        if any(len(p) != dim for p in pts):
            raise ValueError("points have mixed dimensions")
        if dim == 0 or rank([[1, *p] for p in pts]) != dim + 1:
            raise ValueError("polytope is not full-dimensional")
        self.ambient_dim = dim
        cone_gens = [(1, *p) for p in pts]
        rays, lin = dual_cone(cone_gens)
        assert not lin
        facets = [Facet(tuple(r[1:]), r[0]) for r in rays]
        facets.sort(key=lambda f: (f.normal, f.offset), reverse=True)
        self.facets: Tuple[Facet, ...] = tuple(facets)
        verts = []
        for p in pts:
            tight = [f.normal for f in self.facets if f.value(p) == 0]
            if len(tight) >= dim and rank(tight) == dim:
                verts.append(p)
        self.vertices: Tuple[LatticeVector, ...] = tuple(verts)

    @property
    def dimension(self) -> int:
        return self.ambient_dim

    def __eq__(self, other):
        return isinstance(other, Polytope) and set(self.vertices) == set(other.vertices)

    def __hash__(self):
        return hash(frozenset(self.vertices))

    def __repr__(self):
        return f"Polytope({[list(v) for v in self.vertices]})"

    def contains(self, x: Sequence[int]) -> bool:
        return all(f.value(x) >= 0 for f in self.facets)

    def interior_contains(self, x: Sequence[int]) -> bool:
        return all(f.value(x) > 0 for f in self.facets)

    def scaled(self, k: int) -> "Polytope":
        return Polytope([[k * x for x in v] for v in self.vertices])

    def facet_vertex_sets(self) -> List[Face]:
        return [frozenset(i for i, v in enumerate(self.vertices) if f.value(v) == 0) for f in self.facets]

    def to_json(self) -> str:
        return json.dumps({"vertices": [list(v) for v in self.vertices]})

    @classmethod
    def from_json(cls, text: str) -> "Polytope":
        data = json.loads(text)
        if not isinstance(data, dict) or "vertices" not in data:
            raise ValueError("expected an object with key 'vertices'")
        verts = data["vertices"]
        if not isinstance(verts, list) or not all(
            isinstance(v, list) and all(isinstance(x, int) and not isinstance(x, bool) for x in v) for v in verts
        ):
            raise ValueError("vertices must be arrays of integers")
        return cls(verts)


def pn_polytope(n: int) -> Polytope:
    """Convex hull of (n+1)e_i - (1,...,1) for i = 1..n together with -(1,...,1)."""
    if n < 1:
        raise ValueError("n must be positive")
    verts = []
    for i in range(n):
        verts.append(tuple(n if j == i else -1 for j in range(n)))
    verts.append(tuple([-1] * n))
    return Polytope(verts)


def cube(n: int) -> Polytope:
    return Polytope(list(itertools.product((-1, 1), repeat=n)))


def lattice_points(P: Polytope) -> List[LatticeVector]:
    """All integer points of P in lexicographic order."""
    lo = [min(v[j] for v in P.vertices) for j in range(P.ambient_dim)]
    hi = [max(v[j] for v in P.vertices) for j in range(P.ambient_dim)]
    grids = np.meshgrid(*[np.arange(a, b + 1, dtype=np.int64) for a, b in zip(lo, hi)], indexing="ij")
    pts = np.stack([g.ravel() for g in grids], axis=1)
    keep = np.ones(len(pts), dtype=bool)
    for f in P.facets:
        keep &= pts @ np.array(f.normal, dtype=np.int64) + f.offset >= 0
    return [tuple(int(x) for x in row) for row in pts[keep]]


def indexed_points(P: Polytope) -> List[LatticeVector]:
    """Lattice points with the origin first and the rest lexicographic."""
    pts = lattice_points(P)
    origin = tuple([0] * P.ambient_dim)
    if origin not in pts:
        raise ValueError("origin is not a lattice point of the polytope")
    return [origin] + [p for p in pts if p != origin]


def is_reflexive(P: Polytope) -> bool:
    origin = tuple([0] * P.ambient_dim)
    if not P.interior_contains(origin):
        return False
    return all(f.offset == 1 for f in P.facets)


def dual_polytope(P: Polytope) -> Polytope:
    """Polar dual of a reflexive polytope; its vertices are the facet normals."""
    if not is_reflexive(P):
        raise ValueError("dual is only taken for reflexive polytopes")
    return Polytope([f.normal for f in P.facets])


# ---------------------------------------------------------------------------
# faces


def _affine_rank(points: Sequence[Sequence[int]]) -> int:
    if not points:
        return -1
    return rank([[1, *p] for p in points]) - 1


@dataclass
class FacePoset:
    """Face lattice of a polytope, faces keyed by vertex-index sets."""

    polytope: Polytope
    faces: Tuple[Face, ...]
    dims: Dict[Face, int]

    @property
    def bottom(self) -> Face:
        return frozenset()

    @property
    def top(self) -> Face:
        return frozenset(range(len(self.polytope.vertices)))

    def rank(self, a: Face) -> int:
        return self.dims[a] + 1

    def leq(self, a: Face, b: Face) -> bool:
        return a <= b

    @property
    def height(self) -> int:
        return self.polytope.ambient_dim + 1

    def rank_counts(self) -> Tuple[int, ...]:
        counts = [0] * (self.height + 1)
        for f in self.faces:
            counts[self.rank(f)] += 1
        return tuple(counts)

    def proper_faces(self) -> List[Face]:
        return [f for f in self.faces if f != self.top]

    def vertices_of(self, a: Face) -> List[LatticeVector]:
        return [self.polytope.vertices[i] for i in sorted(a)]

    def facets_containing(self, a: Face) -> FrozenSet[int]:
        fsets = self.polytope.facet_vertex_sets()
        return frozenset(j for j, fs in enumerate(fsets) if a <= fs)

    def as_eulerian(self):
        from .poset import EulerianPoset

        return EulerianPoset(self.faces, {f: self.rank(f) for f in self.faces}, lambda a, b: a <= b)


def face_poset(P: Polytope) -> FacePoset:
    fsets = P.facet_vertex_sets()
    faces = set(fsets)
    frontier = set(fsets)
    while frontier:
        nxt = set()
        for a in frontier:
            for b in fsets:
                c = a & b
                if c not in faces:
                    nxt.add(c)
        faces |= nxt
        frontier = nxt
    top = frozenset(range(len(P.vertices)))
    faces.add(top)
    faces.add(frozenset())
    dims = {}
    for f in faces:
        dims[f] = _affine_rank([P.vertices[i] for i in f])
    ordered = tuple(sorted(faces, key=lambda f: (dims[f], sorted(f))))
    return FacePoset(P, ordered, dims)


def dual_face(poset: FacePoset, a: Face) -> Face:
    """Face of the dual polytope corresponding to a face of a reflexive polytope.

    Dual vertices are indexed like the facets of the original polytope.
    """
    return poset.facets_containing(a)


# ---------------------------------------------------------------------------
# affine lattices and volumes


def affine_lattice_coordinates(points: Sequence[Sequence[int]]) -> List[Tuple[int, ...]]:
    """Coordinates of points in a basis of aff(points) intersected with Z^n.

    The first point is taken as origin of the affine lattice.
    """
    base = points[0]
    diffs = [[a - b for a, b in zip(p, base)] for p in points[1:]]
    basis = saturated_span(diffs, len(base))
    if not basis:
        return [() for _ in points]
    cols = [list(col) for col in zip(*basis)]
    out = []
    for p in points:
        d = [a - b for a, b in zip(p, base)]
        x = solve(cols, d)
        assert x is not None and all(c.denominator == 1 for c in x)
        out.append(tuple(int(c) for c in x))
    return out


def face_polytope(P: Polytope, a: Face) -> Optional[Polytope]:
    """A face as a full-dimensional polytope in its own affine lattice.

    Returns None for the empty face and for vertices (dimension 0).
    """
    if len(a) == 0:
        return None
    verts = [P.vertices[i] for i in sorted(a)]
    coords = affine_lattice_coordinates(verts)
    if not coords[0]:
        return None
    return Polytope(coords)


def simplex_volume(vertices: Sequence[Sequence[int]]) -> int:
    """Normalized volume of a full-dimensional lattice simplex (0 if degenerate)."""
    base = vertices[0]
    edges = [[a - b for a, b in zip(v, base)] for v in vertices[1:]]
    if len(edges) != len(base):
        raise ValueError("need dim+1 vertices")
    return abs(determinant(edges)) if edges else 1


def normalized_volume(obj) -> int:
    """Normalized volume of a lattice simplex (vertex list) or a Polytope."""
    if not isinstance(obj, Polytope):
        verts = [tuple(v) for v in obj]
        if len(verts) != len(verts[0]) + 1:
            return 0
        return simplex_volume(verts)
    poset = face_poset(obj)
    return sum(simplex_volume([obj.vertices[i] for i in s]) for s in pulling_triangulation(poset, poset.top))


def pulling_triangulation(poset: FacePoset, a: Face) -> List[Tuple[int, ...]]:
    """Triangulation of a face by pulling its smallest-index vertex, recursively."""
    d = poset.dims[a]
    if d <= 0:
        return [tuple(sorted(a))]
    apex = min(a)
    sub = [b for b in poset.faces if b < a and poset.dims[b] == d - 1 and apex not in b]
    out = []
    for b in sub:
        for s in pulling_triangulation(poset, b):
            out.append(tuple(sorted((apex, *s))))
    return out


def cones_over_proper_faces(P: Polytope) -> Dict[int, int]:
    """Count of cones over proper faces by cone dimension (dim face + 1)."""
    poset = face_poset(P)
    counts: Dict[int, int] = {}
    for f in poset.proper_faces():
        counts[poset.rank(f)] = counts.get(poset.rank(f), 0) + 1
    return dict(sorted(counts.items()))
