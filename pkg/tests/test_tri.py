from fractions import Fraction

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st
from scipy.spatial import ConvexHull

from toricrank.fan import Fan, fan_from_triangulation, projective_space_fan
from toricrank.geom import Polytope, face_poset, indexed_points, is_reflexive, normalized_volume, pn_polytope
from toricrank.tri import (
    Triangulation,
    appendix_construction,
    appendix_sequence,
    coherence,
    folding_constraints,
    induced_on_face,
    is_coherent,
    is_triangulation,
    is_unimodular,
    mother_of_all_examples,
    relative_volume,
    star_subdivide,
    verify_heights,
)


def test_star_subdivide_two_dim_cone():
    F = projective_space_fan(2)
    G = star_subdivide(F, (1, 1))
    assert len(G.max_cones) == len(F.max_cones) + 1
    assert (1, 1) in G.rays and G.is_complete()


def test_star_subdivide_existing_ray_is_noop():
    F = projective_space_fan(2)
    assert star_subdivide(F, (1, 0)).same_cones(F)


def test_star_subdivide_three_dim_cone():
    F = projective_space_fan(3)
    G = star_subdivide(F, (1, 1, 1))
    assert len(G.max_cones) == len(F.max_cones) + 2


def test_star_subdivide_wall_point():
    # e_1 + e_2 lies on a wall shared by two maximal cones: both get split
    F = projective_space_fan(3)
    G = star_subdivide(F, (1, 1, 0))
    assert len(G.max_cones) == len(F.max_cones) + 2
    assert G.is_complete()


def test_star_subdivide_rejects():
    F = projective_space_fan(2)
    with pytest.raises(ValueError):
        star_subdivide(F, (2, 2))
    incomplete = Fan([(1, 0), (0, 1)], [[1, 2]])
    with pytest.raises(ValueError):
        star_subdivide(incomplete, (-1, -1))


@st.composite
def primitive_vectors(draw):
    from math import gcd

    x = draw(st.integers(-4, 4))
    y = draw(st.integers(-4, 4))
    assume((x, y) != (0, 0) and gcd(x, y) == 1)
    return (x, y)


@settings(max_examples=40, deadline=None)
@given(st.lists(primitive_vectors(), min_size=1, max_size=5))
def test_star_subdivision_keeps_fan_complete(vectors):
    F = projective_space_fan(2)
    for v in vectors:
        before = len(F.max_cones)
        new_ray = v not in F.rays
        F = star_subdivide(F, v)
        assert F.is_complete()
        assert v in F.rays
        if not new_ray:
            assert len(F.max_cones) == before
        else:
            assert len(F.max_cones) in (before + 1, before + 2)


def test_sequence_structure():
    for n in (2, 3, 4):
        P = pn_polytope(n)
        inserted = [p for s in appendix_sequence(n) for p in s.w_points + s.inner_points]
        # every non-vertex boundary point gets inserted exactly once
        assert len(set(inserted)) == len(inserted)
        boundary = [p for p in indexed_points(P)[1:] if not P.interior_contains(p)]
        assert sorted(inserted) == sorted(set(boundary) - set(P.vertices))


def test_reverse_order():
    lex, rev = appendix_construction(3)[0], appendix_construction(3, "reverse")[0]
    assert lex.simplices != rev.simplices
    assert is_unimodular(rev) and len(rev.simplices) == 64 and is_coherent(rev)
    # in the plane the fan is determined by its rays
    assert appendix_construction(2, "reverse")[0] == appendix_construction(2)[0]
    with pytest.raises(ValueError):
        appendix_sequence(2, "random")


@pytest.mark.parametrize("n,count", [(1, 2), (2, 9), (3, 64)])
def test_model_triangulation_counts(model, n, count):
    T = model(n)["T"]
    assert len(T.simplices) == count
    assert is_unimodular(T)
    assert T.used_points() == frozenset(range(len(T.points)))
    assert all(0 in s for s in T.simplices)
    assert is_triangulation(T)


def test_model_triangulation_segments(model):
    T = model(1)["T"]
    assert sorted(sorted(T.points[i] for i in s) for s in T.simplices) == [[(-1,), (0,)], [(0,), (1,)]]


def test_join_volumes_multiply():
    for n in (2, 3):
        _, audit = appendix_construction(n)
        assert audit
        assert all(r.volume == r.inner_volume * r.outer_volume for r in audit)


def test_construction_rejects_out_of_range():
    with pytest.raises(ValueError):
        appendix_construction(0)
    with pytest.raises(ValueError):
        appendix_construction(6)


def test_unimodularity_checks(model):
    assert not is_unimodular(Triangulation(((0,), (2,)), ((0, 1),)))
    T, P = model(2)["T"], pn_polytope(2)
    for facet in range(len(P.facets)):
        simplices = induced_on_face(T, facet, P)
        assert len(simplices) == 3
        assert all(relative_volume([T.points[i] for i in s]) == 1 for s in simplices)


def test_model_triangulations_are_coherent(model):
    for n in (1, 2, 3):
        res = coherence(model(n)["T"], "exact")
        assert res.coherent
        assert verify_heights(model(n)["T"], res.heights)


def test_auto_and_exact_routes_agree(model):
    for n in (2, 3):
        assert coherence(model(n)["T"], "auto").coherent == coherence(model(n)["T"], "exact").coherent


def _vanishing_combination(T, weights):
    forms = folding_constraints(T)
    total = [Fraction(0)] * len(T.points)
    for w, f in zip(weights, forms):
        for k, v in f.items():
            total[k] += w * v
    return all(w >= 0 for w in weights) and any(weights) and not any(total)


def test_mother_of_all_examples_rejected():
    T = mother_of_all_examples()
    assert is_triangulation(T)
    for method in ("exact", "auto"):
        res = coherence(T, method)
        assert not res.coherent
        assert res.certificate is not None
        assert _vanishing_combination(T, res.certificate)


def test_reflexive_polygon_star_triangulations():
    squares = [
        Polytope([[-1, -1], [1, -1], [-1, 1], [1, 1]]),
        pn_polytope(2),
        Polytope([[1, 0], [0, 1], [-1, -1]]),
        Polytope([[-1, 0], [1, 0], [0, 1], [0, -1]]),
        Polytope([[-1, -1], [1, 0], [0, 1]]),
    ]
    for P in squares:
        assert is_reflexive(P)
        T = polygon_star(P)
        assert is_triangulation(T) and is_unimodular(T)
        assert is_coherent(T)


def polygon_star(P):
    import math

    pts = indexed_points(P)
    ring = sorted(range(1, len(pts)), key=lambda i: math.atan2(pts[i][1], pts[i][0]))
    simplices = [(0, ring[k], ring[(k + 1) % len(ring)]) for k in range(len(ring))]
    return Triangulation(tuple(pts), tuple(simplices))


@settings(max_examples=30, deadline=None)
@given(
    st.lists(st.tuples(st.integers(0, 4), st.integers(0, 4)), min_size=5, max_size=9, unique=True),
    st.lists(st.integers(0, 30), min_size=9, max_size=9),
)
def test_lifted_triangulations_are_coherent(points, heights):
    """Lower hulls of random liftings: the LP must find some height vector."""
    pts = np.array(points, dtype=float)
    try:
        P = Polytope(points)
    except ValueError:
        return
    lifted = np.column_stack([pts, [h + 0.37 * (x * x + y * y) for (x, y), h in zip(points, heights)]])
    hull = ConvexHull(lifted)
    simplices = [tuple(sorted(s)) for s, eq in zip(hull.simplices, hull.equations) if eq[2] < -1e-9]
    hs = [Fraction(h) + Fraction(37, 100) * (x * x + y * y) for (x, y), h in zip(points, heights)]
    T = Triangulation(tuple(map(tuple, points)), tuple(simplices))
    assume(all(v > 0 for v in T.volumes()) and is_triangulation(T))
    # only generic liftings define T uniquely
    assume(verify_heights(T, hs))
    assert sum(T.volumes()) == normalized_volume(P)
    assert is_coherent(T, "exact")
    assert is_coherent(T, "auto")


def test_json_round_trip(model):
    T = model(2)["T"]
    assert Triangulation.from_json(T.to_json()) == T
