"""Graded posets, Möbius functions and Stanley's toric h- and g-polynomials."""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Dict, Hashable, Iterable, List, Mapping, Sequence, Tuple


class GradedPoly:
    """Univariate polynomial with exact rational coefficients.

    Negative exponents are allowed transiently (Laurent polynomials) so that
    sums carrying a ``t^-k`` prefactor can be formed before checking that
    the singular part cancels.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Mapping[int, object] | Sequence | None = None):
        c: Dict[int, Fraction] = {}
        if coeffs is None:
            pass
        elif isinstance(coeffs, Mapping):
            for k, v in coeffs.items():
                v = Fraction(v)
                if v:
                    c[int(k)] = c.get(int(k), Fraction(0)) + v
        else:
            for k, v in enumerate(coeffs):
                v = Fraction(v)
                if v:
                    c[k] = v
        self.coeffs = {k: v for k, v in c.items() if v}

    @classmethod
    def monomial(cls, k: int, c=1) -> "GradedPoly":
        return cls({k: c})

    @classmethod
    def one(cls) -> "GradedPoly":
        return cls({0: 1})

    def __repr__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for k in sorted(self.coeffs):
            v = self.coeffs[k]
            terms.append(f"{v}" if k == 0 else f"{v}*t^{k}")
        return " + ".join(terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = GradedPoly({0: other})
        return isinstance(other, GradedPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(tuple(sorted(self.coeffs.items())))

    def __bool__(self):
        return bool(self.coeffs)

    def __getitem__(self, k: int) -> Fraction:
        return self.coeffs.get(k, Fraction(0))

    def _coerce(self, other) -> "GradedPoly":
        if isinstance(other, GradedPoly):
            return other
        return GradedPoly({0: other})

    def __add__(self, other):
        other = self._coerce(other)
        c = dict(self.coeffs)
        for k, v in other.coeffs.items():
            c[k] = c.get(k, Fraction(0)) + v
        return GradedPoly(c)

    __radd__ = __add__

    def __neg__(self):
        return GradedPoly({k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        c: Dict[int, Fraction] = {}
        for i, a in self.coeffs.items():
            for j, b in other.coeffs.items():
                c[i + j] = c.get(i + j, Fraction(0)) + a * b
        return GradedPoly(c)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        out = GradedPoly.one()
        for _ in range(e):
            out = out * self
        return out

    @property
    def degree(self) -> int:
        return max(self.coeffs) if self.coeffs else -1

    @property
    def low_degree(self) -> int:
        return min(self.coeffs) if self.coeffs else 0

    def is_polynomial(self) -> bool:
        return all(k >= 0 for k in self.coeffs)

    def coefficient_list(self) -> List[Fraction]:
        if not self.coeffs:
            return []
        return [self[k] for k in range(max(0, self.low_degree), self.degree + 1)]

    def int_coefficients(self) -> List[int]:
        out = []
        for v in self.coefficient_list():
            if v.denominator != 1:
                raise ValueError("non-integral coefficient")
            out.append(int(v))
        return out

    def is_integral(self) -> bool:
        return all(v.denominator == 1 for v in self.coeffs.values())

    def evaluate(self, x):
        return sum((v * Fraction(x) ** k for k, v in self.coeffs.items()), Fraction(0))

    def truncate_below(self, bound) -> "GradedPoly":
        """Keep terms with exponent strictly less than ``bound``."""
        return GradedPoly({k: v for k, v in self.coeffs.items() if k < bound})

    def shift(self, k: int) -> "GradedPoly":
        """Multiply by t^k (k may be negative)."""
        return GradedPoly({e + k: v for e, v in self.coeffs.items()})

    def substitute_power(self, m: int) -> "GradedPoly":
        """p(t) -> p(t^m)."""
        return GradedPoly({e * m: v for e, v in self.coeffs.items()})

    def reflect(self, d: int) -> "GradedPoly":
        """t^d p(1/t)."""
        return GradedPoly({d - e: v for e, v in self.coeffs.items()})

    def is_palindromic(self, d: int) -> bool:
        return self == self.reflect(d)

    def exact_divide(self, other: "GradedPoly") -> "GradedPoly":
        """Polynomial division that must leave no remainder."""
        num = dict(self.coeffs)
        dd = other.degree
        lead = other.coeffs[dd]
        quot: Dict[int, Fraction] = {}
        while num:
            top = max(num)
            if top < dd:
                break
            q = num[top] / lead
            quot[top - dd] = q
            for k, v in other.coeffs.items():
                e = top - dd + k
                num[e] = num.get(e, Fraction(0)) - q * v
                if not num[e]:
                    del num[e]
        if num:
            raise ArithmeticError("division leaves a remainder")
        return GradedPoly(quot)

    def to_json(self) -> Dict[str, str]:
        return {str(k): str(v) for k, v in sorted(self.coeffs.items())}


INDETERMINATE = GradedPoly.monomial(1)
ONE = GradedPoly.one()


class NotEulerianError(ValueError):
    pass


class EulerianPoset:
    """Finite bounded graded poset with cached interval invariants.

    ``elements`` is any iterable of hashables, ``ranks`` gives the rank
    function and ``leq`` the order relation.  Intervals are addressed by
    their endpoints; a ``dual`` flag addresses the interval with the order
    reversed.  G-values are memoized per (a, b, dual).
    """

    def __init__(self, elements: Iterable[Hashable], ranks: Mapping[Hashable, int], leq: Callable[[Hashable, Hashable], bool]):
        self.elements = tuple(elements)
        self.ranks = dict(ranks)
        self._leq = leq
        bottoms = [a for a in self.elements if all(leq(a, b) for b in self.elements)]
        tops = [a for a in self.elements if all(leq(b, a) for b in self.elements)]
        if len(bottoms) != 1 or len(tops) != 1:
            raise ValueError("poset must have a unique minimum and maximum")
        self.bottom = bottoms[0]
        self.top = tops[0]
        self._below: Dict[Hashable, Tuple[Hashable, ...]] = {
            b: tuple(a for a in self.elements if leq(a, b)) for b in self.elements
        }
        self._mu: Dict[Tuple, int] = {}
        self._g: Dict[Tuple, GradedPoly] = {}
        self._h: Dict[Tuple, GradedPoly] = {}

    @classmethod
    def from_covers(cls, covers: Mapping[Hashable, Iterable[Hashable]]) -> "EulerianPoset":
        """Build from a cover relation ``x -> elements covering x``."""
        up: Dict[Hashable, set] = {}
        elems = set(covers)
        for x, ys in covers.items():
            elems.update(ys)
        for x in elems:
            up[x] = set(covers.get(x, ()))

        def closure(x):
            out = {x}
            for y in up[x]:
                out |= closure(y)
            return out

        above = {x: closure(x) for x in elems}
        order = sorted(elems, key=repr)
        bottom = [x for x in order if all(y in above[x] for y in order)]
        if len(bottom) != 1:
            raise ValueError("poset must have a unique minimum")
        ranks = {bottom[0]: 0}
        frontier = [bottom[0]]
        while frontier:
            nxt = []
            for x in frontier:
                for y in up[x]:
                    r = ranks[x] + 1
                    if y in ranks and ranks[y] != r:
                        raise ValueError("poset is not graded")
                    if y not in ranks:
                        ranks[y] = r
                        nxt.append(y)
            frontier = nxt
        return cls(order, ranks, lambda a, b: b in above[a])

    def rank(self, a) -> int:
        return self.ranks[a]

    def leq(self, a, b) -> bool:
        return self._leq(a, b)

    @property
    def height(self) -> int:
        return self.ranks[self.top] - self.ranks[self.bottom]

    def interval(self, a, b) -> List[Hashable]:
        if not self.leq(a, b):
            raise ValueError("interval endpoints are not comparable")
        return [c for c in self._below[b] if self.leq(a, c)]

    def pairs(self) -> List[Tuple[Hashable, Hashable]]:
        return [(a, b) for b in self.elements for a in self._below[b]]

    def mobius(self, a, b) -> int:
        if not self.leq(a, b):
            raise ValueError("incomparable pair")
        key = (a, b)
        if key not in self._mu:
            if a == b:
                self._mu[key] = 1
            else:
                self._mu[key] = -sum(self.mobius(a, c) for c in self.interval(a, b) if c != b)
        return self._mu[key]

    def is_eulerian(self) -> bool:
        return all(self.mobius(a, b) == (-1) ** (self.ranks[b] - self.ranks[a]) for a, b in self.pairs())

    def dual(self) -> "EulerianPoset":
        top = max(self.ranks.values())
        leq = self._leq
        return EulerianPoset(self.elements, {a: top - r for a, r in self.ranks.items()}, lambda a, b: leq(b, a))

    def _interval_rank(self, a, b) -> int:
        return self.ranks[b] - self.ranks[a]

    # Stanley polynomials on [a, b] (dual=False) or on [a, b]* (dual=True)

    def h_interval(self, a, b, dual: bool = False) -> GradedPoly:
        key = (a, b, dual)
        if key in self._h:
            return self._h[key]
        if a == b:
            out = ONE
        else:
            out = GradedPoly()
            tm1 = INDETERMINATE - 1
            for c in self.interval(a, b):
                if not dual:
                    if c == a:
                        continue
                    out = out + tm1 ** (self.ranks[c] - self.ranks[a] - 1) * self.g_interval(c, b, False)
                else:
                    if c == b:
                        continue
                    out = out + tm1 ** (self.ranks[b] - self.ranks[c] - 1) * self.g_interval(a, c, True)
        self._h[key] = out
        return out

    def g_interval(self, a, b, dual: bool = False) -> GradedPoly:
        key = (a, b, dual)
        if key in self._g:
            return self._g[key]
        d = self._interval_rank(a, b)
        if d == 0:
            out = ONE
        else:
            out = ((1 - INDETERMINATE) * self.h_interval(a, b, dual)).truncate_below(Fraction(d, 2))
        self._g[key] = out
        return out

    def h_lef_interval(self, a, b, dual: bool = False) -> GradedPoly:
        d = self._interval_rank(a, b)
        if d < 1:
            raise ValueError("H_Lef needs rank at least 1")
        if d == 1:
            return GradedPoly()
        diff = self.h_interval(a, b, dual) - self.g_interval(a, b, dual)
        return diff.shift(-1)


def _require_eulerian(P: EulerianPoset) -> None:
    if not P.is_eulerian():
        raise NotEulerianError("poset is not Eulerian")


def mobius(P: EulerianPoset, a, b) -> int:
    return P.mobius(a, b)


def is_eulerian(P: EulerianPoset) -> bool:
    return P.is_eulerian()


def h_polynomial(P: EulerianPoset) -> GradedPoly:
    _require_eulerian(P)
    return P.h_interval(P.bottom, P.top)


def g_polynomial(P: EulerianPoset) -> GradedPoly:
    _require_eulerian(P)
    return P.g_interval(P.bottom, P.top)


def h_lef_polynomial(P: EulerianPoset) -> GradedPoly:
    _require_eulerian(P)
    if P.height < 1:
        raise ValueError("H_Lef needs rank at least 1")
    return P.h_lef_interval(P.bottom, P.top)


def stanley_inversion_sum(P: EulerianPoset, a=None, b=None) -> GradedPoly:
    """Sum over c in [a, b] of G([a,c]) (-1)^rk[c,b] G([c,b]*)."""
    a = P.bottom if a is None else a
    b = P.top if b is None else b
    total = GradedPoly()
    for c in P.interval(a, b):
        sign = (-1) ** (P.ranks[b] - P.ranks[c])
        total = total + sign * P.g_interval(a, c) * P.g_interval(c, b, True)
    return total


def stanley_inversion_check(P: EulerianPoset, a=None, b=None) -> bool:
    a = P.bottom if a is None else a
    b = P.top if b is None else b
    if P.ranks[b] - P.ranks[a] == 0:
        return True
    return not stanley_inversion_sum(P, a, b)


def chain_poset(length: int) -> EulerianPoset:
    elems = list(range(length + 1))
    return EulerianPoset(elems, {i: i for i in elems}, lambda a, b: a <= b)


def boolean_poset(r: int) -> EulerianPoset:
    elems = [frozenset(i for i in range(r) if mask >> i & 1) for mask in range(1 << r)]
    return EulerianPoset(elems, {e: len(e) for e in elems}, lambda a, b: a <= b)
