"""Acceptance criteria 1-9; each criterion prints one PASS/FAIL line (also in the terminal summary)."""

from math import comb

import pytest

from toricrank.cohom import anticanonical_cup_rank, build_ring, shift_identity
from toricrank.fan import MoriCone, fan_from_triangulation
from toricrank.geom import face_poset, normalized_volume, pn_polytope
from toricrank.gkz import apply_Lv, b_series, check_extended, check_gkz, check_torus_euler, roots
from toricrank.hodge import (
    FaceData,
    TriangulationFaces,
    a_numbers,
    delta_closed_form,
    delta_multiplicity,
    ehrhart_s,
    identity_suite,
    nu,
    rank_series,
    s_a_polynomial,
    string_e_polynomial,
)
from toricrank.poset import GradedPoly
from toricrank.tri import appendix_triangulation, coherence, is_unimodular, mother_of_all_examples


@pytest.fixture(scope="module")
def rings(model):
    def get(n):
        return model(n)["R"]

    return get


@pytest.fixture(scope="module")
def series(model, mori):
    """Full series at bound 6 together with the Mori points it was built from."""
    cache = {}

    def get(n):
        if n not in cache:
            F, R, cone = model(n)["F"], model(n)["R"], mori(n)
            omega = cone.default_functional()
            pts = cone.points(omega, 6)
            cache[n] = (b_series(F, R, 6, omega=omega, cone=cone, points=pts), pts)
        return cache[n]

    return get


def test_criterion_1_nu_pillar(criterion, rings):
    with criterion(1, "anticanonical cup rank = nu_n") as c:
        got = {n: anticanonical_cup_rank(rings(n))[0] for n in (1, 2, 3, 4)}
        combinatorial = rank_series(pn_polytope(5)).evaluate(1)
        c.detail = f"ring n=1..4 -> {[got[n] for n in (1, 2, 3, 4)]}; poset route n=5 -> {combinatorial}"
        assert got == {1: 1, 2: 2, 3: 21, 4: 204}
        assert all(got[n] == nu(n) for n in got)
        assert combinatorial == nu(5) == 2605


def test_criterion_2_graded_identity(criterion, rings):
    with criterion(2, "per-degree cup ranks = a(i(n+1)), independent of triangulation") as c:
        per = {n: anticanonical_cup_rank(rings(n))[1][:n] for n in (2, 3, 4)}
        assert per[2] == (1, 1) and per[3] == (1, 19, 1) and per[4] == (1, 101, 101, 1)
        assert all(per[n] == a_numbers(n) for n in per)
        notes = []
        for n in (2, 3):
            lex = appendix_triangulation(n)
            alt = appendix_triangulation(n, order="reverse")
            alt_ranks = anticanonical_cup_rank(build_ring(fan_from_triangulation(alt)))
            assert is_unimodular(alt) and coherence(alt, "exact").coherent
            assert alt_ranks == anticanonical_cup_rank(rings(n))
            notes.append(f"n={n} reverse order {'distinct' if alt.simplices != lex.simplices else 'same fan'}: {alt_ranks[1][:n]}")
        c.detail = f"{per[2]}, {per[3]}, {per[4]}; " + "; ".join(notes)


def test_criterion_3_decomposition_multiplicities(criterion, model):
    with criterion(3, "delta multiplicities") as c:
        assert [delta_closed_form(2, i) for i in range(3)] == [1, 0, 2]
        assert [delta_closed_form(3, i) for i in range(4)] == [1, 0, 3, 6]
        for n in (2, 3, 4):
            P = pn_polytope(n)
            data = FaceData(P)
            tf = TriangulationFaces(P, model(n)["T"])
            for b in data.faces.faces:
                if b == data.faces.top:
                    continue
                via_poset = s_a_polynomial(data, b).evaluate(1)
                assert via_poset == delta_multiplicity(tf, data, b)
                assert via_poset == delta_closed_form(n, data.rank(b))
        sums = []
        for n in range(1, 6):
            total = sum(comb(n + 1, i) * delta_closed_form(n, i) * (n - i) for i in range(n + 1))
            data = FaceData(pn_polytope(n))
            by_rank = {data.rank(b): s_a_polynomial(data, b).evaluate(1) for b in data.faces.faces if b != data.faces.top}
            from_faces = sum(comb(n + 1, i) * by_rank[i] * (n - i) for i in range(n + 1))
            assert total == from_faces == nu(n)
            sums.append(int(total))
        c.detail = f"closed form matches both routes for n<=4; sums n=1..5 -> {sums}"


def test_criterion_4_gkz_annihilation(criterion, model, mori, series):
    with criterion(4, "GKZ and extended annihilation, bound 6") as c:
        parts = []
        for n in (1, 2):
            S, pts = series(n)
            R, P = model(n)["R"], pn_polytope(n)
            gens = mori(n).generators
            assert all(check_gkz(S, g) for g in gens)
            assert check_torus_euler(S)
            rs = roots(P)
            assert len(rs) == n * (n + 1)
            assert check_extended(S, R, P)
            if n == 1:
                assert all(not apply_Lv(S, rd).is_zero() for rd in rs)
            parts.append(f"n={n}: {len(gens)} generators, {len(rs)} roots, window {S.window}, {len(pts)} Mori points")
        c.detail = "; ".join(parts) + "; un-cupped residual nonzero on the line"


def test_criterion_5_shift_identity(criterion, model, series):
    with criterion(5, "O_l (D_i + l_i) = O_(l - e_i) on the Mori set to bound 6") as c:
        counts = []
        for n in (1, 2):
            R = model(n)["R"]
            _, pts = series(n)
            for ell in pts:
                for i in range(1, len(ell)):
                    assert shift_identity(R, ell, i, exponent_form=False)
                assert shift_identity(R, ell, 0, exponent_form=True)
            counts.append(len(pts) * len(pts[0]))
        c.detail = f"i>=1 literal and i=0 with constant l_0 - 1: {counts} checks"


def test_criterion_5_literal_index_zero(criterion, model, series):
    """The literal constant l_0 at i = 0, as the criterion states it."""
    with criterion(5, "O_l (D_i + l_i) = O_(l - e_i) on the Mori set to bound 6") as c:
        failures = {}
        for n in (1, 2):
            R = model(n)["R"]
            _, pts = series(n)
            failures[n] = (sum(not shift_identity(R, ell, 0, exponent_form=False) for ell in pts), len(pts))
        c.detail = "literal i=0: " + ", ".join(f"n={n} fails on {bad}/{tot}" for n, (bad, tot) in failures.items())
        assert all(bad == 0 for bad, _ in failures.values())


def test_criterion_6_polynomial_identities(criterion):
    with criterion(6, "polynomial identity suite") as c:
        names = set()
        for n in range(1, 5):
            rep = identity_suite(n, m_max=5)
            assert rep.passed, rep.results
            names |= set(rep.results)
        for n in range(5, 9):
            rep = identity_suite(n, poset_identities=False)
            assert rep.results["f_closed_form"] and rep.passed
        c.detail = f"{len(names)} identities for n<=4, closed forms n<=8"


def test_criterion_7_ehrhart(criterion):
    with criterion(7, "Ehrhart data") as c:
        assert ehrhart_s(pn_polytope(3)) == GradedPoly([1, 31, 31, 1])
        sums = [int(ehrhart_s(pn_polytope(n)).evaluate(1)) for n in range(1, 5)]
        assert sums == [(n + 1) ** n for n in range(1, 5)] == [normalized_volume(pn_polytope(n)) for n in range(1, 5)]
        c.detail = f"S(P^3) = 1+31t+31t^2+t^3; sums {sums}"


def test_criterion_8_triangulation_pillar(criterion, model):
    with criterion(8, "model triangulation unimodular, (n+1)^n simplices, coherent") as c:
        methods = []
        for n in (1, 2, 3, 4):
            T = model(n)["T"]
            assert len(T.simplices) == (n + 1) ** n
            assert is_unimodular(T)
            res = coherence(T, "exact" if n <= 3 else "auto")
            assert res.coherent
            methods.append(res.method)
        assert not coherence(mother_of_all_examples(), "exact").coherent
        c.detail = f"coherence via {methods}; non-regular 6-point triangulation rejected"


def test_criterion_9_string_e_polynomial(criterion):
    with criterion(9, "string E-polynomial") as c:
        E2 = string_e_polynomial(pn_polytope(2))
        assert E2.to_json() == {"0,0": "1", "0,1": "-1", "1,0": "-1", "1,1": "1"}
        for n in (1, 2, 3):
            assert string_e_polynomial(pn_polytope(n)).is_symmetric()
        c.detail = "n=2 -> (1-u)(1-v); symmetric for n<=3"
