"""Double description for rational polyhedral cones.

A cone is given by generators; its dual ``{y : <g, y> >= 0 for all g}``
is computed by the incremental double-description method with the
combinatorial adjacency test.  All arithmetic is on integer vectors.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Sequence, Tuple

from ._linalg import integer_kernel, integral_scale, nullspace, primitive, rank

IntVec = Tuple[int, ...]


def _dot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, b))


def _pointed_dual_rays(constraints: List[List[int]], basis: List[IntVec]) -> List[IntVec]:
    """Extreme rays of {y in span(basis) : A y >= 0} when that cone is pointed.

    ``basis`` spans the ambient subspace in which the cone has full rank.
    Works in coordinates w.r.t. ``basis`` and maps back at the end.
    """
    d = len(basis)
    if d == 0:
        return []
    # constraint rows in basis coordinates
    rows = [[_dot(c, b) for b in basis] for c in constraints]
    rows = [r for r in rows if any(r)]
    # initial simplicial cone from d independent rows
    chosen: List[int] = []
    for i in range(len(rows)):
        if rank([rows[j] for j in chosen + [i]]) == len(chosen) + 1:
            chosen.append(i)
        if len(chosen) == d:
            break
    if len(chosen) < d:
        raise ValueError("dual cone is not pointed in the given subspace")
    sub = [rows[i] for i in chosen]
    rays: List[IntVec] = []
    for k in range(d):
        # ray tight on all chosen rows except k, positive on k
        others = [sub[j] for j in range(d) if j != k]
        ns = nullspace(others, d) if others else [[Fraction(int(i == 0)) for i in range(d)]]
        if d == 1:
            ns = [[Fraction(1)]]
        v = integral_scale(ns[0])
        if _dot(sub[k], v) < 0:
            v = tuple(-x for x in v)
        rays.append(v)
    processed = list(chosen)
    for i in range(len(rows)):
        if i in chosen:
            continue
        row = rows[i]
        vals = [_dot(row, r) for r in rays]
        pos = [j for j, x in enumerate(vals) if x > 0]
        neg = [j for j, x in enumerate(vals) if x < 0]
        zero = [j for j, x in enumerate(vals) if x == 0]
        if not neg:
            processed.append(i)
            continue
        tight = [frozenset(h for h in processed if _dot(rows[h], r) == 0) for r in rays]
        new = [rays[j] for j in pos + zero]
        for a in pos:
            for b in neg:
                common = tight[a] & tight[b]
                if len(common) < d - 2:
                    continue
                if d > 2 and rank([rows[h] for h in common]) != d - 2:
                    continue
                adjacent = True
                for c in range(len(rays)):
                    if c != a and c != b and common <= tight[c]:
                        adjacent = False
                        break
                if not adjacent:
                    continue
                va, vb = vals[a], -vals[b]
                comb = tuple(vb * x + va * y for x, y in zip(rays[a], rays[b]))
                new.append(primitive(comb))
        rays = sorted(set(new))
        processed.append(i)
    out = []
    for r in rays:
        amb = [sum(r[k] * basis[k][j] for k in range(d)) for j in range(len(basis[0]))]
        out.append(primitive(amb))
    return sorted(set(out))


def dual_cone(generators: Sequence[Sequence], dim: int | None = None):
    """Dual of cone(generators) as (extreme rays of pointed part, lineality basis).

    The dual is {y : <g, y> >= 0}.  If the generators do not span the
    ambient space, the dual contains the orthogonal complement as its
    lineality space; rays are then taken inside the span of the generators.
    """
    gens = [integral_scale([Fraction(x) for x in g]) for g in generators]
    gens = [g for g in gens if any(g)]
    if dim is None:
        if not gens:
            raise ValueError("ambient dimension unknown")
        dim = len(gens[0])
    if not gens:
        eye = [tuple(int(i == j) for j in range(dim)) for i in range(dim)]
        return [], eye
    lineality = integer_kernel([list(g) for g in gens])
    span = integer_kernel([list(v) for v in lineality]) if lineality else [
        tuple(int(i == j) for j in range(dim)) for i in range(dim)
    ]
    rays = _pointed_dual_rays([list(g) for g in gens], list(span))
    return rays, lineality


def cone_dualize(generators: Sequence[Sequence], dim: int | None = None) -> List[IntVec]:
    """Generators of the dual cone: its extreme rays plus +/- a lineality basis.

    When cone(generators) is full-dimensional these are exactly the inward
    facet normals of cone(generators), primitive and sorted.
    """
    rays, lin = dual_cone(generators, dim)
    out = list(rays)
    for v in lin:
        out.append(tuple(v))
        out.append(tuple(-x for x in v))
    return out


def extreme_rays(generators: Sequence[Sequence]) -> List[IntVec]:
    """Irredundant generators of a pointed cone, computed inside its span."""
    gens = [integral_scale([Fraction(x) for x in g]) for g in generators]
    gens = [g for g in gens if any(g)]
    if not gens:
        return []
    dim = len(gens[0])
    lineality = integer_kernel([list(g) for g in gens])
    span = integer_kernel([list(v) for v in lineality]) if lineality else [
        tuple(int(i == j) for j in range(dim)) for i in range(dim)
    ]
    facets = _pointed_dual_rays([list(g) for g in gens], list(span))
    try:
        return _pointed_dual_rays([list(f) for f in facets], list(span))
    except ValueError as exc:
        raise ValueError("cone is not pointed") from exc
