import random
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from toricrank._cones import cone_dualize
from toricrank.fan import (
    Fan,
    MoriCone,
    coarse_fan,
    degree,
    fan_from_triangulation,
    is_relation,
    mori_generators,
    mori_points,
    primitive_collections,
    primitive_relation,
    product_fan,
    projective_space_fan,
    relation_lattice_basis,
    sr_generators,
)
from toricrank.geom import dual_polytope, normalized_volume, pn_polytope


def collection_of(F, vectors):
    return frozenset(F.points.index(tuple(v)) for v in vectors)


def test_relation_lattice():
    assert relation_lattice_basis([(0,), (1,), (-1,)]) == [(-2, 1, 1)] or relation_lattice_basis([(0,), (1,), (-1,)]) == [(2, -1, -1)]
    pts = [(0, 0)] + [p for p in product(range(-1, 3), repeat=2) if p != (0, 0) and pn_polytope(2).contains(p)]
    assert len(relation_lattice_basis(pts)) == 10 - 1 - 2


def test_fans_from_triangulations(model):
    F1 = model(1)["F"]
    assert set(F1.rays) == {(1,), (-1,)}
    assert F1.is_complete() and F1.is_smooth()
    F2 = model(2)["F"]
    assert F2.num_rays == 9 and len(F2.max_cones) == 9
    assert F2.is_smooth() and F2.is_complete()
    for n in (1, 2, 3):
        assert len(model(n)["F"].max_cones) == normalized_volume(pn_polytope(n))


def test_coarse_fans():
    for n in (2, 3):
        F = coarse_fan(dual_polytope(pn_polytope(n)))
        assert set(F.rays) == set(projective_space_fan(n).rays)
        assert F.same_cones(projective_space_fan(n))
    assert [len(coarse_fan(pn_polytope(2)).cones(k)) for k in range(3)] == [1, 3, 3]
    assert [len(coarse_fan(pn_polytope(3)).cones(k)) for k in range(4)] == [1, 4, 6, 4]


def test_primitive_collections_and_sr():
    P1 = projective_space_fan(1)
    assert primitive_collections(P1) == [frozenset({1, 2})]
    for n in (2, 3):
        assert primitive_collections(projective_space_fan(n)) == [frozenset(range(1, n + 2))]
    square = product_fan(P1, P1)
    colls = primitive_collections(square)
    assert len(colls) == 2
    for c in colls:
        a, b = (square.points[i] for i in c)
        assert tuple(x + y for x, y in zip(a, b)) == (0, 0)
    for F in (P1, square, projective_space_fan(3)):
        assert sorted(map(sorted, sr_generators(F))) == sorted(map(sorted, primitive_collections(F)))


def test_primitive_relations(model):
    P1 = projective_space_fan(1)
    ell = primitive_relation(P1, {1, 2})
    assert ell == (-2, 1, 1)
    assert primitive_relation(projective_space_fan(2), {1, 2, 3}) == (-3, 1, 1, 1)
    F = model(2)["F"]
    coll = collection_of(F, [(1, -1), (-1, 1)])
    ell = primitive_relation(F, coll)
    assert ell[0] == -2
    assert all(ell[i] == (1 if i in coll else 0) for i in range(1, len(ell)))


def test_primitive_relation_invariants(model):
    for n in (1, 2, 3):
        F = model(n)["F"]
        for coll in primitive_collections(F):
            ell = primitive_relation(F, coll)
            assert sum(ell) == 0
            assert is_relation(F.points, ell)
            assert all(ell[i] == 1 for i in coll)
            others = [i for i in range(1, len(ell)) if i not in coll]
            assert all(ell[i] <= 0 for i in others)
            assert ell[0] <= 0
            # the negative part sits on a single cone
            negative = [i for i in others if ell[i] < 0]
            assert F.is_cone(negative)


def test_mori_generators(model):
    assert mori_generators(projective_space_fan(1)) == [(-2, 1, 1)]
    assert mori_generators(projective_space_fan(2)) == [(-3, 1, 1, 1)]
    gens = mori_generators(model(2)["F"])
    assert len(gens) >= 9
    assert all(g[0] <= 0 for g in gens)
    basis = relation_lattice_basis(model(2)["F"].points)
    assert all(MoriCone(model(2)["F"]).contains(g) for g in gens)
    assert len(basis) == 7


def test_cone_dualize():
    quadrant = cone_dualize([(1, 0), (0, 1)])
    assert sorted(quadrant) == [(0, 1), (1, 0)]
    assert sorted(cone_dualize([(1, 0), (1, 2)])) == [(0, 1), (2, -1)]


def test_mori_points_on_line():
    F = projective_space_fan(1)
    cone = MoriCone(F)
    pts = mori_points(F, (0, 1, 1), 6, cone)
    assert pts == [(0, 0, 0), (-2, 1, 1), (-4, 2, 2), (-6, 3, 3)]
    assert mori_points(F, (0, 1, 1), 0, cone) == [(0, 0, 0)]
    with pytest.raises(ValueError):
        mori_points(F, (0, 1, -1), 4, cone)


def test_mori_points_plane(model, mori):
    F, cone = model(2)["F"], mori(2)
    omega = cone.default_functional()
    counts = [len(mori_points(F, omega, b, cone)) for b in range(4)]
    assert counts == [1, 10, 55, 222]
    pts = mori_points(F, omega, 3, cone)
    assert all(p[0] <= 0 for p in pts)
    keys = [(degree(omega, p), p) for p in pts]
    assert keys == sorted(keys)


def test_mori_points_cross_check_box(model, mori):
    """Independent enumeration: scan integer combinations of the generators."""
    F, cone = model(2)["F"], mori(2)
    omega = cone.default_functional()
    gens = cone.generators
    found = {tuple([0] * len(gens[0]))}
    frontier = set(found)
    while frontier:
        nxt = set()
        for p in frontier:
            for g in gens:
                q = tuple(a + b for a, b in zip(p, g))
                if degree(omega, q) <= 3 and q not in found:
                    nxt.add(q)
        found |= nxt
        frontier = nxt
    # the generator semigroup sits inside the saturated cone
    assert found <= set(mori_points(F, omega, 3, cone))


def test_mori_closure_under_addition(model, mori):
    F, cone = model(2)["F"], mori(2)
    omega = cone.default_functional()
    pts = set(mori_points(F, omega, 3, cone))
    rng = random.Random(7)
    sample = rng.sample(sorted(pts), 40)
    for a in sample:
        for b in sample:
            s = tuple(x + y for x, y in zip(a, b))
            if degree(omega, s) <= 3:
                assert s in pts


def test_mori_membership_random_relations(model, mori):
    F, cone = model(2)["F"], mori(2)
    rng = random.Random(3)
    basis = cone.basis
    colls = primitive_collections(F)
    for _ in range(300):
        coeffs = [rng.randint(-2, 2) for _ in basis]
        ell = tuple(sum(c * b[j] for c, b in zip(coeffs, basis)) for j in range(len(basis[0])))
        assert is_relation(F.points, ell)
        if not cone.contains(ell) and ell[0] <= 0:
            negative = {i for i in range(1, len(ell)) if ell[i] < 0}
            assert any(c <= negative for c in colls)


def test_fan_json_round_trip(model):
    F = model(2)["F"]
    G = Fan.from_json(F.to_json())
    assert G == F and G.same_cones(F)


def test_fan_rejects_bad_rays():
    with pytest.raises(ValueError):
        Fan([(2, 0), (0, 1)], [[1, 2]])


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=1, max_value=3), st.integers(min_value=1, max_value=3))
def test_product_fans_are_smooth_complete(a, b):
    F = product_fan(projective_space_fan(a), projective_space_fan(b))
    assert F.is_complete() and F.is_smooth()
    assert len(primitive_collections(F)) == 2
