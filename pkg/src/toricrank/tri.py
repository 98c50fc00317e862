"""Triangulations: star subdivision, the face-by-face construction for the
simplex-type reflexive polytopes, unimodularity and regularity tests."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from . import _lp
from ._linalg import determinant, solve_square
from .fan import Fan, coarse_fan
from .geom import (
    LatticeVector,
    affine_lattice_coordinates,
    indexed_points,
    pn_polytope,
    simplex_volume,
)

Simplex = Tuple[int, ...]


@dataclass(frozen=True)
class Triangulation:
    """Maximal simplices as sorted index tuples into ``points``."""

    points: Tuple[LatticeVector, ...]
    simplices: Tuple[Simplex, ...]

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(tuple(int(x) for x in p) for p in self.points))
        object.__setattr__(self, "simplices", tuple(sorted(tuple(sorted(s)) for s in self.simplices)))

    @property
    def dim(self) -> int:
        return len(self.points[0])

    def volumes(self) -> List[int]:
        return [simplex_volume([self.points[i] for i in s]) for s in self.simplices]

    def used_points(self) -> FrozenSet[int]:
        return frozenset(i for s in self.simplices for i in s)

    def all_faces(self) -> FrozenSet[Simplex]:
        out = set()
        for s in self.simplices:
            for k in range(1, len(s) + 1):
                out.update(combinations(s, k))
        return frozenset(out)

    def boundary_simplices(self) -> List[Simplex]:
        """Maximal simplices with the origin removed (requires a star triangulation)."""
        return [tuple(i for i in s if i != 0) for s in self.simplices]

    def to_json(self) -> str:
        return json.dumps({"points": [list(p) for p in self.points], "simplices": [list(s) for s in self.simplices]})

    @classmethod
    def from_json(cls, text: str) -> "Triangulation":
        data = json.loads(text)
        return cls(tuple(map(tuple, data["points"])), tuple(map(tuple, data["simplices"])))


# ---------------------------------------------------------------------------
# star subdivision


def star_subdivide(F: Fan, v: Sequence[int], candidates: Optional[Sequence[int]] = None) -> Fan:
    """Star subdivision of a simplicial fan at a primitive vector of its support.

    Cones not containing v are kept; each cone containing v is replaced by
    the cones spanned by v and those of its facets that miss v.
    ``candidates`` optionally restricts which maximal cones are tested.
    """
    v = tuple(int(x) for x in v)
    from math import gcd

    g = 0
    for x in v:
        g = gcd(g, x)
    if g != 1:
        raise ValueError("vector must be primitive")
    if v in F.rays:
        return F
    new_index = F.num_rays + 1
    keep: List[Tuple[int, ...]] = []
    hit = False
    pool = range(len(F.max_cones)) if candidates is None else candidates
    pool = set(pool)
    for k, cone in enumerate(F.max_cones):
        if k not in pool:
            keep.append(cone)
            continue
        rays = [F.points[i] for i in cone]
        base = determinant(rays)
        signs = []
        inside = True
        for j in range(len(cone)):
            replaced = list(rays)
            replaced[j] = v
            dj = determinant(replaced)
            if dj * base < 0:
                inside = False
                break
            signs.append(dj != 0)
        if len(cone) < F.dim or not inside:
            keep.append(cone)
            continue
        hit = True
        for j, positive in enumerate(signs):
            if positive:
                keep.append(tuple(i for i in cone if i != cone[j]) + (new_index,))
    if not hit:
        raise ValueError("vector lies outside the support of the fan")
    return Fan(list(F.rays) + [v], keep)


# ---------------------------------------------------------------------------
# the face-by-face construction


def _inner_sequence(k: int, size: int, corner: Tuple[int, ...], edges: List[Tuple[int, ...]]) -> List[Tuple[int, ...]]:
    """Subdivision points for a dilated k-simplex corner + size*conv(0, edges)."""
    if k == 0 or size <= 1:
        return []

    def at(base, vec, s):
        return tuple(b + s * x for b, x in zip(base, vec))

    out = [at(corner, edges[j], s) for s in range(size - 1, 0, -1) for j in range(k)]
    for i in range(2, size + 1):
        slice_corner = at(corner, edges[0], i)
        slice_edges = [tuple(a - b for a, b in zip(edges[j], edges[0])) for j in range(1, k)]
        out.extend(_inner_sequence(k - 1, i, slice_corner, slice_edges))
    return out


@dataclass
class FaceStep:
    """Points inserted for one face, split into the w-stage and the inner stage."""

    face: Tuple[int, ...]
    w_points: List[LatticeVector]
    inner_points: List[LatticeVector]


def appendix_sequence(n: int, order: str = "lex") -> List[FaceStep]:
    """Ordered star-subdivision points for the model polytope of dimension n.

    Faces are processed by decreasing dimension; faces of equal dimension in
    lexicographic order of vertex index sets.  ``order="reverse"`` reverses
    that order and also the vertex order inside each face, which moves the
    corner used for the interior subdivision.  From n = 3 on this yields a
    different unimodular triangulation; for n <= 2 the result coincides,
    since a complete fan in the plane is fixed by its rays.
    """
    if order not in ("lex", "reverse"):
        raise ValueError("order must be 'lex' or 'reverse'")
    P = pn_polytope(n)
    V = P.vertices
    m = n + 1
    steps: List[FaceStep] = []
    for k in range(n - 1, 0, -1):
        faces = list(combinations(range(n + 1), k + 1))
        if order == "reverse":
            faces = [tuple(reversed(f)) for f in reversed(faces)]
        for face in faces:
            corner = V[face[0]]
            edges = [tuple((a - b) // m for a, b in zip(V[j], corner)) for j in face[1:]]

            def point(c):
                return tuple(corner[r] + sum(c[j] * edges[j][r] for j in range(k)) for r in range(n))

            size = m - k - 1
            w0 = tuple([1] * k)
            ws = [w0] + [tuple(1 + (size if j == i else 0) for j in range(k)) for i in range(k)]
            unit = [tuple(int(i == j) for j in range(k)) for i in range(k)]
            inner = _inner_sequence(k, size, w0, unit)
            steps.append(FaceStep(face, [point(c) for c in ws], [point(c) for c in inner]))
    return steps


@dataclass
class JoinRecord:
    face: Tuple[int, ...]
    simplex: Tuple[LatticeVector, ...]
    volume: int
    inner_volume: int
    outer_volume: int


def relative_volume(points: Sequence[Sequence[int]]) -> int:
    """Normalized volume of a simplex inside its own affine lattice."""
    if len(points) <= 1:
        return 1
    coords = affine_lattice_coordinates(points)
    return simplex_volume(coords)


def _facet_incidence(P, pts):
    return [frozenset(j for j, f in enumerate(P.facets) if f.value(p) == 0) for p in pts]


def appendix_construction(n: int, order: str = "lex"):
    """Run the construction; returns (triangulation, join-volume audit records)."""
    if not 1 <= n <= 5:
        raise ValueError("n must be between 1 and 5")
    P = pn_polytope(n)
    pts = indexed_points(P)
    fan = coarse_fan(P)
    audit: List[JoinRecord] = []
    incidence: Dict[LatticeVector, FrozenSet[int]] = dict(zip(pts, _facet_incidence(P, pts)))
    vertex_set = set(P.vertices)

    def subdivide(f: Fan, v) -> Fan:
        phi = incidence[v]
        cands = []
        for k, cone in enumerate(f.max_cones):
            common = frozenset.intersection(*(incidence[f.points[i]] for i in cone))
            if common <= phi:
                cands.append(k)
        return star_subdivide(f, v, cands)

    for step in appendix_sequence(n, order):
        for v in step.w_points:
            fan = subdivide(fan, v)
        face_pts = {P.vertices[i] for i in step.face}
        wset = set(step.w_points)
        kdim = len(step.face) - 1
        seen = set()
        face_facets = frozenset.intersection(*(incidence[P.vertices[i]] for i in step.face))
        for cone in fan.max_cones:
            in_face = [fan.points[i] for i in cone if face_facets <= incidence[fan.points[i]]]
            for sub in combinations(sorted(in_face), kdim + 1):
                if sub in seen:
                    continue
                seen.add(sub)
                inner = [p for p in sub if p in wset]
                outer = [p for p in sub if p not in wset]
                assert all(p in vertex_set for p in outer)
                if inner and outer:
                    audit.append(
                        JoinRecord(step.face, sub, relative_volume(list(sub)), relative_volume(inner), relative_volume(outer))
                    )
        for v in step.inner_points:
            fan = subdivide(fan, v)
    index = {p: i for i, p in enumerate(pts)}
    simplices = [tuple(sorted([0] + [index[fan.points[i]] for i in c])) for c in fan.max_cones]
    return Triangulation(tuple(pts), tuple(simplices)), audit


def appendix_triangulation(n: int, order: str = "lex") -> Triangulation:
    return appendix_construction(n, order)[0]


# ---------------------------------------------------------------------------
# checks


def is_unimodular(T: Triangulation) -> bool:
    return all(v == 1 for v in T.volumes())


def _affine_coords(points: Sequence[Sequence[int]], target: Sequence[int]) -> List[Fraction]:
    """Affine coordinates of target w.r.t. affinely independent points."""
    d = len(target)
    mat = [[1] * len(points)] + [[p[r] for p in points] for r in range(d)]
    return solve_square(mat, [1, *target])


def folding_constraints(T: Triangulation) -> List[Dict[int, Fraction]]:
    """Linear forms in the heights that must be positive for regularity.

    One form per interior wall (the opposite vertex must lie strictly above
    the affine extension of the neighbor's lifted facet) and one per unused
    point (it must lie strictly above the simplex containing it).
    """
    walls: Dict[Tuple[int, ...], List[Tuple[Simplex, int]]] = {}
    for s in T.simplices:
        for i in s:
            walls.setdefault(tuple(j for j in s if j != i), []).append((s, i))
    forms = []
    for w, sides in sorted(walls.items()):
        if len(sides) != 2:
            continue
        (s1, a), (s2, b) = sides
        mu = _affine_coords([T.points[i] for i in s1], T.points[b])
        form: Dict[int, Fraction] = {b: Fraction(1)}
        for idx, m in zip(s1, mu):
            form[idx] = form.get(idx, Fraction(0)) - m
        forms.append({k: v for k, v in form.items() if v})
    used = T.used_points()
    for q in range(len(T.points)):
        if q in used:
            continue
        for s in T.simplices:
            mu = _affine_coords([T.points[i] for i in s], T.points[q])
            if all(m >= 0 for m in mu):
                form = {q: Fraction(1)}
                for idx, m in zip(s, mu):
                    form[idx] = form.get(idx, Fraction(0)) - m
                forms.append(form)
                break
    return forms


@dataclass
class CoherenceResult:
    coherent: bool
    method: str
    slack: Optional[Fraction] = None
    heights: Optional[List[Fraction]] = None
    certificate: Optional[List[Fraction]] = None


def _exact_lp(forms, npts) -> CoherenceResult:
    # variables: h+ (npts), h- (npts), s ; constraints: -form.h + s <= 0 ; s <= 1
    nv = 2 * npts + 1
    A = []
    for f in forms:
        row = [Fraction(0)] * nv
        for k, v in f.items():
            row[k] = -v
            row[npts + k] = v
        row[-1] = Fraction(1)
        A.append(row)
    A.append([Fraction(0)] * (nv - 1) + [Fraction(1)])
    b = [0] * len(forms) + [1]
    c = [0] * (nv - 1) + [1]
    res = _lp.maximize(c, A, b)
    assert res.status == "optimal"
    h = [res.x[i] - res.x[npts + i] for i in range(npts)]
    return CoherenceResult(res.value > 0, "exact-simplex", res.value, h, res.dual[: len(forms)])


def _certificate_lp(forms, npts) -> Optional[CoherenceResult]:
    """Floating LP for a candidate, then exact verification of the candidate.

    Only a verified certificate is returned: strictly positive forms on
    rational heights (regular), or a nonnegative combination of forms that
    vanishes identically (not regular).
    """
    try:
        import numpy as np
        from scipy.optimize import linprog
    except ImportError:  # pragma: no cover
        return None
    m = len(forms)
    A = np.zeros((m, npts))
    for r, f in enumerate(forms):
        for k, v in f.items():
            A[r, k] = float(v)
    # maximize s subject to A h >= s, s <= 1, |h| <= big
    c = np.zeros(npts + 1)
    c[-1] = -1.0
    A_ub = np.hstack([-A, np.ones((m, 1))])
    b_ub = np.zeros(m)
    bounds = [(-1e4, 1e4)] * npts + [(None, 1.0)]
    res = linprog(c, A_ub=A_ub, b_ub=b_ub, bounds=bounds, method="highs")
    if res.status != 0:
        return None
    if -res.fun > 1e-9:
        h = res.x[:npts]
        for scale in (1, 10, 100, 1000, 10**4, 10**6):
            hq = [Fraction(round(x * scale)) for x in h]
            vals = [sum(v * hq[k] for k, v in f.items()) for f in forms]
            if all(x > 0 for x in vals):
                return CoherenceResult(True, "verified-certificate", min(vals), hq)
        return None
    duals = getattr(res, "ineqlin", None)
    if duals is None:
        return None
    y = [-float(x) for x in duals.marginals]
    for scale in (10**3, 10**6, 10**9):
        yq = [Fraction(round(max(x, 0.0) * scale)) for x in y]
        if not any(yq):
            continue
        comb = [Fraction(0)] * npts
        for w, f in zip(yq, forms):
            if w:
                for k, v in f.items():
                    comb[k] += w * v
        if not any(comb):
            return CoherenceResult(False, "verified-certificate", Fraction(0), None, yq)
    return None


def coherence(T: Triangulation, method: str = "auto") -> CoherenceResult:
    """Decide regularity of a triangulation.

    ``method="exact"`` always runs the rational simplex method.  ``"auto"``
    first tries a floating-point LP whose answer is then certified in exact
    arithmetic, and falls back to the rational simplex if certification
    fails.  Either way the returned verdict is backed by exact arithmetic.
    """
    forms = folding_constraints(T)
    npts = len(T.points)
    if not forms:
        return CoherenceResult(True, "trivial", Fraction(1), [Fraction(0)] * npts)
    if method == "auto":
        cert = _certificate_lp(forms, npts)
        if cert is not None:
            return cert
        method = "exact"
    if method != "exact":
        raise ValueError("method must be 'auto' or 'exact'")
    return _exact_lp(forms, npts)


def is_coherent(T: Triangulation, method: str = "exact") -> bool:
    return coherence(T, method).coherent


def verify_heights(T: Triangulation, heights: Sequence) -> bool:
    """True iff the given heights induce T (all folding forms strictly positive)."""
    return all(sum(v * Fraction(heights[k]) for k, v in f.items()) > 0 for f in folding_constraints(T))


def mother_of_all_examples() -> Triangulation:
    """Classical non-regular triangulation of two nested triangles."""
    pts = ((0, 0), (12, 0), (6, 12), (3, 2), (9, 2), (6, 8))
    a1, a2, a3, b1, b2, b3 = range(6)
    simplices = (
        (b1, b2, b3),
        (a1, a2, b1),
        (a2, b2, b1),
        (a2, a3, b2),
        (a3, b3, b2),
        (a3, a1, b3),
        (a1, b1, b3),
    )
    return Triangulation(pts, simplices)


def is_triangulation(T: Triangulation) -> bool:
    """Proper-triangulation test for small full-dimensional configurations.

    Checks nondegeneracy, that every interior wall is shared by exactly two
    simplices lying on opposite sides, and that volumes add up to the volume
    of the convex hull.
    """
    from .geom import Polytope, normalized_volume

    vols = T.volumes()
    if any(v == 0 for v in vols):
        return False
    hull = Polytope(T.points)
    if sum(vols) != normalized_volume(hull):
        return False
    walls: Dict[Tuple[int, ...], List[int]] = {}
    for s in T.simplices:
        for i in s:
            walls.setdefault(tuple(j for j in s if j != i), []).append(i)
    for w, opp in walls.items():
        if len(opp) > 2:
            return False
        if len(opp) == 2:
            base = [T.points[j] for j in w]
            o = T.points[w[0]]
            rows1 = [[a - b for a, b in zip(p, o)] for p in base[1:] + [T.points[opp[0]]]]
            rows2 = [[a - b for a, b in zip(p, o)] for p in base[1:] + [T.points[opp[1]]]]
            if determinant(rows1) * determinant(rows2) >= 0:
                return False
    return True


def induced_on_face(T: Triangulation, facet_index: int, polytope) -> List[Simplex]:
    """Simplices of the triangulation lying in a given facet of the polytope."""
    f = polytope.facets[facet_index]
    on = {i for i, p in enumerate(T.points) if f.value(p) == 0}
    out = set()
    for s in T.simplices:
        sub = tuple(i for i in s if i in on)
        if len(sub) == T.dim:
            out.add(sub)
    return sorted(out)
