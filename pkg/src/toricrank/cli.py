"""Command-line front end: ``toricrank pn-verify`` and ``toricrank polytope-report``."""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Any, Dict, List, Optional

from .poset import GradedPoly

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


def exact(value: Any) -> Any:
    """Convert numbers to strings (recursively) so JSON stays exact."""
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, (int, Fraction)):
        return str(value)
    if isinstance(value, GradedPoly):
        return value.to_json()
    if isinstance(value, dict):
        return {str(k): exact(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [exact(v) for v in value]
    if hasattr(value, "to_json"):
        return value.to_json()
    return str(value)


@dataclass
class Report:
    command: str
    inputs: Dict[str, Any]
    checks: List[Dict[str, Any]] = field(default_factory=list)
    data: Dict[str, Any] = field(default_factory=dict)
    warnings: List[str] = field(default_factory=list)

    def check(self, name: str, passed: bool, expected: Any = None, actual: Any = None, window: Optional[int] = None) -> bool:
        rec = {"name": name, "status": "pass" if passed else "fail", "expected": exact(expected), "actual": exact(actual)}
        if window is not None:
            rec["window"] = str(window)
        self.checks.append(rec)
        return passed

    def skip(self, name: str, reason: str) -> None:
        self.checks.append({"name": name, "status": "skipped", "reason": reason})

    @property
    def exit_status(self) -> int:
        return EXIT_FAIL if any(c["status"] == "fail" for c in self.checks) else EXIT_OK

    def to_dict(self) -> Dict[str, Any]:
        return {
            "command": self.command,
            "inputs": exact(self.inputs),
            "checks": self.checks,
            "data": exact(self.data),
            "warnings": self.warnings,
            "exit_status": self.exit_status,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def to_text(self) -> str:
        lines = [f"{self.command}  " + " ".join(f"{k}={v}" for k, v in sorted(self.inputs.items()))]
        width = max([len(c["name"]) for c in self.checks] + [10])
        for c in self.checks:
            extra = c.get("reason") or f"expected={json.dumps(c['expected'], sort_keys=True)} actual={json.dumps(c['actual'], sort_keys=True)}"
            lines.append(f"  {c['status']:<8} {c['name']:<{width}}  {extra}")
        for key in sorted(self.data):
            lines.append(f"  data {key}: {json.dumps(exact(self.data[key]), sort_keys=True)}")
        for w in self.warnings:
            lines.append(f"  warning: {w}")
        lines.append(f"exit status {self.exit_status}")
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# pn-verify


def cmd_pn_verify(n: int, bound: int, route: str) -> Report:
    from . import cohom, fan, gkz, hodge, tri
    from .geom import normalized_volume, pn_polytope

    rep = Report("pn-verify", {"n": n, "bound": bound, "route": route})
    target = hodge.nu(n)
    a_target = hodge.a_numbers(n)
    P = pn_polytope(n)
    use_ring = route in ("ring", "both")
    use_poset = route in ("poset", "both")
    if use_ring and n >= 5:
        rep.warnings.append("ring route disabled for n >= 5")
        use_ring = False

    if use_ring:
        T, audit = tri.appendix_construction(n)
        count = (n + 1) ** n
        rep.check("triangulation.simplex_count", len(T.simplices) == count, count, len(T.simplices))
        rep.check("triangulation.volume", sum(T.volumes()) == normalized_volume(P), normalized_volume(P), sum(T.volumes()))
        rep.check("triangulation.unimodular", tri.is_unimodular(T), True, tri.is_unimodular(T))
        rep.check("triangulation.all_points_used", len(T.used_points()) == len(T.points), len(T.points), len(T.used_points()))
        joins = all(r.volume == r.inner_volume * r.outer_volume for r in audit)
        rep.check("triangulation.join_volumes", joins, True, joins)
        coh = tri.coherence(T, "exact" if n <= 3 else "auto")
        rep.check("triangulation.coherent", coh.coherent, True, coh.coherent)
        rep.data["coherence_method"] = coh.method
        F = fan.fan_from_triangulation(T)
        R = cohom.build_ring(F)
        rep.data["graded_dims"] = list(R.graded_dims)
        total, per = cohom.anticanonical_cup_rank(R)
        rep.check("ring.rank_total", total == target, target, total)
        rep.check("ring.rank_graded", tuple(per[:n]) == a_target, list(a_target), list(per))
        rep.check("ring.total_dim", R.total_dim == len(T.simplices), len(T.simplices), R.total_dim)

    if use_poset:
        data = hodge.FaceData(P)
        rs = hodge.rank_series(P, data)
        coeffs = tuple(int(rs[2 * i]) for i in range(n))
        rep.check("poset.rank_total", rs.evaluate(1) == target, target, rs.evaluate(1))
        rep.check("poset.rank_graded", coeffs == a_target, list(a_target), list(coeffs))
        deltas = []
        for i in range(n + 1):
            face = next(a for a in data.faces.faces if data.rank(a) == i)
            deltas.append(hodge.s_a_polynomial(data, face).evaluate(1))
        closed = [hodge.delta_closed_form(n, i) for i in range(n + 1)]
        rep.check("poset.delta_closed_form", deltas == closed, closed, deltas)
        dsum = sum(comb(n + 1, i) * deltas[i] * (n - i) for i in range(n + 1))
        rep.check("poset.delta_sum", dsum == target, target, dsum)
        suite = hodge.identity_suite(n)
        for name, ok in sorted(suite.results.items()):
            rep.check(f"identity.{name}", ok, True, ok)

    if n <= 2 and use_ring:
        cone = fan.MoriCone(F)
        omega = cone.default_functional()
        mori = cone.points(omega, bound)
        rep.data["mori_points"] = len(mori)
        shifts = all(cohom.shift_identity(R, ell, i) for ell in mori for i in range(len(ell)))
        rep.check("ring.shift_identity", shifts, True, shifts, bound)
        S = gkz.b_series(F, R, bound, omega=omega, cone=cone, points=mori)
        rep.data["series_terms"] = len(S.terms)
        rep.data["degree_functional"] = list(S.weights)
        gens_ok = all(gkz.check_gkz(S, g) for g in cone.generators)
        rep.check("gkz.box_generators", gens_ok, True, gens_ok, S.window)
        te = gkz.check_torus_euler(S)
        rep.check("gkz.torus_euler", te, True, te, S.window)
        roots = gkz.roots(P)
        rep.check("gkz.root_count", len(roots) == n * (n + 1), n * (n + 1), len(roots))
        ext = gkz.check_extended(S, R, P)
        rep.check("gkz.extended", ext, True, ext, S.window)
        crank = gkz.coefficient_rank(S, -R.divisor(0))
        rep.check("gkz.coefficient_rank", crank == target, target, crank)
    elif n > 2:
        rep.skip("gkz", "series checks run for n <= 2")
    else:
        rep.skip("gkz", "series checks need the ring route")
    return rep


# ---------------------------------------------------------------------------
# polytope-report


def cmd_polytope_report(path: str) -> Report:
    from . import hodge
    from .geom import Polytope, dual_polytope, is_reflexive, normalized_volume

    with open(path, encoding="utf-8") as fh:
        P = Polytope.from_json(fh.read())
    rep = Report("polytope-report", {"file": path})
    reflexive = is_reflexive(P)
    rep.data["vertices"] = [list(v) for v in P.vertices]
    rep.data["dimension"] = P.ambient_dim
    rep.data["reflexive"] = reflexive
    rep.data["normalized_volume"] = normalized_volume(P)
    data = hodge.FaceData(P)
    rep.data["face_rank_counts"] = list(data.faces.rank_counts())
    faces = []
    for a in data.faces.faces:
        rec = {
            "face": sorted(a),
            "dim": data.faces.dims[a],
            "S": data.s(a),
        }
        if a != data.faces.top:
            sa = hodge.s_a_polynomial(data, a)
            rec["S_a"] = sa
            rec["delta"] = sa.evaluate(1)
        faces.append(rec)
    rep.data["faces"] = faces
    top_s = data.s(data.faces.top)
    rep.check("ehrhart.volume", top_s.evaluate(1) == normalized_volume(P), normalized_volume(P), top_s.evaluate(1))
    if reflexive:
        rep.data["dual_vertices"] = [list(v) for v in dual_polytope(P).vertices]
        rs = hodge.rank_series(P, data)
        rep.data["rank_series"] = rs
        rep.data["rank_total"] = rs.evaluate(1)
        pal = rs.is_palindromic(2 * (P.ambient_dim - 1))
        rep.check("rank_series.palindromic", pal, True, pal)
        rep.check("rank_series.nonnegative", all(c >= 0 for c in rs.coeffs.values()), True, all(c >= 0 for c in rs.coeffs.values()))
    else:
        rep.data["rank_series"] = None
        rep.warnings.append("polytope is not reflexive; rank series unavailable")
    return rep


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="toricrank", description="Verification pipelines for reflexive polytopes.")
    sub = parser.add_subparsers(dest="command", required=True)
    pv = sub.add_parser("pn-verify", help="verify the rank and annihilation checks for the model polytope")
    pv.add_argument("--n", type=int, required=True)
    pv.add_argument("--bound", type=int, default=6)
    pv.add_argument("--route", choices=("ring", "poset", "both"), default="both")
    pv.add_argument("--out")
    pv.add_argument("--format", choices=("json", "text"), default="json")
    pr = sub.add_parser("polytope-report", help="report invariants of a polytope given as JSON")
    pr.add_argument("file")
    pr.add_argument("--out")
    pr.add_argument("--format", choices=("json", "text"), default="json")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if args.command == "pn-verify":
        if not 1 <= args.n <= 5:
            print("error: --n must be between 1 and 5", file=sys.stderr)
            return EXIT_USAGE
        if args.bound < 0:
            print("error: --bound must be nonnegative", file=sys.stderr)
            return EXIT_USAGE
        rep = cmd_pn_verify(args.n, args.bound, args.route)
    else:
        try:
            rep = cmd_polytope_report(args.file)
        except (OSError, ValueError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_USAGE
    text = rep.to_json() if args.format == "json" else rep.to_text()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return rep.exit_status


def main_exit() -> None:
    sys.exit(main())


if __name__ == "__main__":  # pragma: no cover
    main_exit()
