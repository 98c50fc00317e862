"""Truncated cohomology-valued log-series solutions of the GKZ system.

A LogSeries is a finite sum of terms  c * a^d * L^alpha  where ``d`` is an
integer exponent vector on the points, ``L^alpha`` a monomial in the formal
symbols L_i = log a_i and ``c`` a cohomology class.

Truncation bookkeeping uses an integral weight vector h on the points: the
coefficient at exponent d is guaranteed to agree with the untruncated
series whenever <h, d> <= window.  Differentiating in a_i lowers the
window by h_i, multiplying by a_j raises it by h_j.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from math import factorial
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .cohom import CohomRing, RingClass, o_ell
from .fan import Fan, MoriCone, relation_parts
from .geom import Polytope, dual_polytope, indexed_points, is_reflexive, lattice_points

Exponent = Tuple[int, ...]
LogMonomial = Tuple[int, ...]
Coeffs = Dict[int, Fraction]
Terms = Dict[Exponent, Dict[LogMonomial, Coeffs]]


def _add_into(target: Coeffs, source: Coeffs, scale) -> None:
    for k, v in source.items():
        y = target.get(k, 0) + v * scale
        if y:
            target[k] = y
        else:
            target.pop(k, None)


def _dot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, b))


@dataclass
class LogSeries:
    ring: CohomRing
    weights: Tuple[int, ...]
    window: int
    terms: Terms

    # -- construction ---------------------------------------------------------

    @classmethod
    def zero(cls, ring: CohomRing, weights: Sequence[int], window: int) -> "LogSeries":
        return cls(ring, tuple(weights), window, {})

    @classmethod
    def from_compact(cls, ring: CohomRing, weights: Sequence[int], window: int, compact: Dict[Exponent, RingClass]) -> "LogSeries":
        """Expand  sum_d C_d a^d exp(sum_i L_i D_i)  into log monomials."""
        powers = _divisor_powers(ring)
        terms: Terms = {}
        for d, c in compact.items():
            if _dot(weights, d) > window or c.is_zero():
                continue
            block: Dict[LogMonomial, Coeffs] = {}
            for alpha, pa in powers.items():
                prod = ring.multiply(c, pa)
                if not prod.is_zero():
                    block[alpha] = dict(prod.coords)
            if block:
                terms[tuple(d)] = block
        return cls(ring, tuple(weights), window, terms)

    # -- helpers ----------------------------------------------------------------

    @property
    def size(self) -> int:
        return len(self.ring.fan.points)

    def _prune(self, terms: Terms, window: int) -> Terms:
        return {d: blk for d, blk in terms.items() if blk and _dot(self.weights, d) <= window}

    def restrict(self, window: int) -> "LogSeries":
        w = min(window, self.window)
        return LogSeries(self.ring, self.weights, w, self._prune(self.terms, w))

    def is_zero(self) -> bool:
        return not any(any(c for c in blk.values()) for blk in self._prune(self.terms, self.window).values())

    def __add__(self, other: "LogSeries") -> "LogSeries":
        w = min(self.window, other.window)
        out: Terms = {}
        for src in (self.terms, other.terms):
            for d, blk in src.items():
                if _dot(self.weights, d) > w:
                    continue
                tgt = out.setdefault(d, {})
                for alpha, c in blk.items():
                    cur = tgt.setdefault(alpha, {})
                    _add_into(cur, c, 1)
                    if not cur:
                        del tgt[alpha]
        return LogSeries(self.ring, self.weights, w, self._prune(out, w))

    def scale(self, c) -> "LogSeries":
        c = Fraction(c)
        if not c:
            return LogSeries(self.ring, self.weights, self.window, {})
        return LogSeries(
            self.ring,
            self.weights,
            self.window,
            {d: {a: {k: v * c for k, v in cc.items()} for a, cc in blk.items()} for d, blk in self.terms.items()},
        )

    def __sub__(self, other: "LogSeries") -> "LogSeries":
        return self + other.scale(-1)

    def equals(self, other: "LogSeries") -> bool:
        """Equality on the common exactness window."""
        return (self - other).is_zero()

    def coefficient(self, d: Sequence[int], alpha: Optional[Sequence[int]] = None) -> RingClass:
        if alpha is None:
            alpha = (0,) * self.size
        return RingClass(self.ring, self.terms.get(tuple(d), {}).get(tuple(alpha), {}))

    def cup(self, x: RingClass) -> "LogSeries":
        out: Terms = {}
        for d, blk in self.terms.items():
            nb = {}
            for alpha, c in blk.items():
                prod = self.ring.multiply(RingClass(self.ring, c), x)
                if not prod.is_zero():
                    nb[alpha] = dict(prod.coords)
            if nb:
                out[d] = nb
        return LogSeries(self.ring, self.weights, self.window, out)

    def to_json(self) -> str:
        rows = []
        for d in sorted(self.terms):
            if _dot(self.weights, d) > self.window:
                continue
            for alpha in sorted(self.terms[d]):
                c = self.terms[d][alpha]
                rows.append(
                    {
                        "exponent": list(d),
                        "log_monomial": list(alpha),
                        "coefficients": {str(k): str(v) for k, v in sorted(c.items())},
                    }
                )
        return json.dumps({"window": self.window, "weights": list(self.weights), "terms": rows}, sort_keys=True)


def _divisor_powers(ring: CohomRing) -> Dict[LogMonomial, RingClass]:
    """D^alpha / alpha! for every nonzero log monomial of total degree <= dim."""
    size = ring.num_divisors
    out: Dict[LogMonomial, RingClass] = {(0,) * size: ring.one()}
    frontier = dict(out)
    for _ in range(ring.dim):
        nxt: Dict[LogMonomial, RingClass] = {}
        for alpha, c in frontier.items():
            last = max([i for i, a in enumerate(alpha) if a] or [0])
            for i in range(last, size):
                beta = list(alpha)
                beta[i] += 1
                beta = tuple(beta)
                val = ring.cup_divisor(c, i).scale(Fraction(1, beta[i]))
                if not val.is_zero():
                    nxt[beta] = val
        out.update(nxt)
        frontier = nxt
    return out


# ---------------------------------------------------------------------------
# the series


def b_series(
    F: Fan,
    R: CohomRing,
    bound: int,
    omega: Optional[Sequence[int]] = None,
    cone: Optional[MoriCone] = None,
    points: Optional[Sequence[Sequence[int]]] = None,
) -> LogSeries:
    """sum over Mori points ell of degree <= bound of O_ell a^(ell - e_0) exp(sum L_i D_i).

    ``points`` may pass a precomputed enumeration for the same functional and bound.
    """
    if bound < 0:
        raise ValueError("bound must be nonnegative")
    cone = cone or MoriCone(F)
    if omega is None:
        omega = cone.default_functional()
    omega = tuple(omega)
    cone.check_functional(omega)
    compact: Dict[Exponent, RingClass] = {}
    for ell in cone.points(omega, bound) if points is None else points:
        d = (ell[0] - 1,) + tuple(ell[1:])
        compact[d] = o_ell(R, ell)
    return LogSeries.from_compact(R, omega, bound - omega[0], compact)


# ---------------------------------------------------------------------------
# operators


def diff_a(S: LogSeries, i: int, target: Optional[int] = None) -> LogSeries:
    """Formal derivative in a_i.  ``target`` optionally lowers the kept window."""
    h = S.weights
    window = S.window - h[i]
    if target is not None:
        window = min(window, target)
    out: Terms = {}
    for d, blk in S.terms.items():
        nd = list(d)
        nd[i] -= 1
        nd = tuple(nd)
        if _dot(h, nd) > window:
            continue
        tgt = out.setdefault(nd, {})
        for alpha, c in blk.items():
            if d[i]:
                cur = tgt.setdefault(alpha, {})
                _add_into(cur, c, d[i])
                if not cur:
                    del tgt[alpha]
            if alpha[i]:
                beta = list(alpha)
                beta[i] -= 1
                beta = tuple(beta)
                cur = tgt.setdefault(beta, {})
                _add_into(cur, c, alpha[i])
                if not cur:
                    del tgt[beta]
        if not tgt:
            del out[nd]
    return LogSeries(S.ring, S.weights, window, out)


def times_a(S: LogSeries, j: int, c=1) -> LogSeries:
    """c * a_j * S."""
    out: Terms = {}
    for d, blk in S.terms.items():
        nd = list(d)
        nd[j] += 1
        out[tuple(nd)] = {a: {k: v * c for k, v in cc.items()} for a, cc in blk.items()}
    return LogSeries(S.ring, S.weights, S.window + S.weights[j], out)


def euler_a(S: LogSeries, i: int) -> LogSeries:
    """a_i d/da_i, which preserves exponents and the window."""
    out: Terms = {}
    for d, blk in S.terms.items():
        tgt: Dict[LogMonomial, Coeffs] = {}
        for alpha, c in blk.items():
            if d[i]:
                cur = tgt.setdefault(alpha, {})
                _add_into(cur, c, d[i])
            if alpha[i]:
                beta = list(alpha)
                beta[i] -= 1
                cur = tgt.setdefault(tuple(beta), {})
                _add_into(cur, c, alpha[i])
        tgt = {a: c for a, c in tgt.items() if c}
        if tgt:
            out[d] = tgt
    return LogSeries(S.ring, S.weights, S.window, out)


def apply_derivatives(S: LogSeries, counts: Sequence[int], target: Optional[int] = None) -> LogSeries:
    """prod_i (d/da_i)^counts[i] S, pruning to what the final window needs."""
    h = S.weights
    order = [i for i, c in enumerate(counts) for _ in range(c)]
    total = sum(h[i] for i in order)
    final = S.window - total if target is None else min(target, S.window - total)
    remaining = total
    cur = S
    for i in order:
        remaining -= h[i]
        cur = diff_a(cur, i, final + remaining)
    if target is not None and cur.window > final:
        cur = cur.restrict(final)
    return cur


def box_operator(S: LogSeries, ell: Sequence[int]) -> LogSeries:
    plus, minus = relation_parts(ell)
    h = S.weights
    final = S.window - max(_dot(h, plus), _dot(h, minus))
    return apply_derivatives(S, plus, final) - apply_derivatives(S, minus, final)


def check_gkz(S: LogSeries, ell: Sequence[int]) -> bool:
    """True iff the box operator of ell annihilates S inside the valid window."""
    if not any(ell):
        return True
    return box_operator(S, ell).is_zero()


def torus_operators(S: LogSeries) -> List[LogSeries]:
    pts = S.ring.fan.points
    out = []
    for j in range(S.ring.dim):
        acc = LogSeries.zero(S.ring, S.weights, S.window)
        for i, v in enumerate(pts):
            if v[j]:
                acc = acc + euler_a(S, i).scale(v[j])
        out.append(acc)
    return out


def euler_operator(S: LogSeries) -> LogSeries:
    acc = S
    for i in range(S.size):
        acc = acc + euler_a(S, i)
    return acc


def check_torus_euler(S: LogSeries) -> bool:
    return all(t.is_zero() for t in torus_operators(S)) and euler_operator(S).is_zero()


# ---------------------------------------------------------------------------
# roots and the extended system


@dataclass(frozen=True)
class RootDatum:
    v: Tuple[int, ...]
    u: Tuple[int, ...]
    facet: int


def roots(P: Polytope) -> List[RootDatum]:
    """Relative-interior lattice points of facets, paired with the facet normal.

    The normal u satisfies <x, u> >= -1 on P with equality on the facet, so
    <v, u> = -1 for the root and <v, u'> >= 0 for every other facet normal.
    """
    if not is_reflexive(P):
        raise ValueError("roots are defined for reflexive polytopes")
    out = []
    pts = lattice_points(P)
    for k, f in enumerate(P.facets):
        for v in pts:
            if f.value(v) != 0:
                continue
            if all(g.value(v) > 0 for j, g in enumerate(P.facets) if j != k):
                out.append(RootDatum(v, f.normal, k))
    return sorted(out, key=lambda r: (r.facet, r.v))


def root_operator_terms(points: Sequence[Sequence[int]], rd: RootDatum) -> List[Tuple[int, int, int]]:
    """(coefficient, multiplier index, derivative index) for each term of L_v.

    Sum over points v' off the root's facet of (<v',u> + 1) a_{v'} d/da_{v'+v}.
    """
    index = {tuple(p): i for i, p in enumerate(points)}
    out = []
    for j, vp in enumerate(points):
        pairing = _dot(vp, rd.u)
        if pairing == -1:
            continue
        target = tuple(a + b for a, b in zip(vp, rd.v))
        if target not in index:
            raise AssertionError(f"{target} is not a lattice point of the polytope")
        out.append((pairing + 1, j, index[target]))
    return out


def apply_Lv(S: LogSeries, rd: RootDatum) -> LogSeries:
    pts = S.ring.fan.points
    terms = root_operator_terms(pts, rd)
    h = S.weights
    final = min(S.window - h[t] + h[j] for _, j, t in terms)
    acc = None
    for coeff, j, t in terms:
        part = times_a(diff_a(S, t, final - h[j]), j, coeff)
        acc = part if acc is None else acc + part
    return acc.restrict(final)


def check_extended(S: LogSeries, R: CohomRing, P: Polytope) -> bool:
    """Every root operator annihilates S cupped with -D_0 inside the window."""
    neg_k = -R.divisor(0)
    cupped = S.cup(neg_k)
    return all(apply_Lv(cupped, rd).is_zero() for rd in roots(P))


def coefficient_rank(S: LogSeries, x: Optional[RingClass] = None) -> int:
    """Number of linearly independent scalar coefficient functions of S * x."""
    from ._linalg import SparseEchelon

    series = S if x is None else S.cup(x)
    # coefficient functions are indexed by basis position; collect their
    # values over all (exponent, log monomial) slots and take the rank
    slots = []
    for d in sorted(series.terms):
        for alpha in sorted(series.terms[d]):
            slots.append(series.terms[d][alpha])
    ech = SparseEchelon()
    for b in range(S.ring.total_dim):
        row = {k: c[b] for k, c in enumerate(slots) if b in c}
        ech.add(row)
    return ech.rank
