"""Standard bases of nonlinear difference ideals.

Difference monomials are finite power products of terms.  They are ordered
lexicographically with respect to a ranking: the monomials are compared at
their highest-ranked term first, and a larger power wins.  This extends the
ranking, puts every non-unit monomial above ``1`` and is compatible with
multiplication and shifting.

The completion is the plain Buchberger-style loop: S-polynomials of all
(self-)pairs are reduced modulo the current set until nothing new appears,
then the result is interreduced.  It need not terminate for nonlinear input,
so it runs under a round budget.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from .errors import DiffBasisError
from .linear import LinearPoly
from .ring import Exponent, Ranking, Term, shift_term

log = logging.getLogger(__name__)

COMPLETE = "complete"
BUDGET_EXHAUSTED = "budget-exhausted"
DEFAULT_BUDGET = 500


class DifferenceMonomial(tuple):
    """Sorted tuple of ``(Term, power)`` pairs; the empty tuple is ``1``."""

    __slots__ = ()

    def __new__(cls, factors: Iterable[Tuple[Term, int]] = ()):
        merged: Dict[Term, int] = {}
        for t, e in factors:
            if e < 0:
                raise ValueError("negative power in a difference monomial")
            if e:
                merged[t] = merged.get(t, 0) + e
        return super().__new__(cls, sorted(merged.items()))

    @classmethod
    def of(cls, t: Term, power: int = 1) -> "DifferenceMonomial":
        return cls(((t, power),))

    @property
    def is_unit(self) -> bool:
        return not self

    @property
    def degree(self) -> int:
        return sum(e for _, e in self)

    def as_dict(self) -> Dict[Term, int]:
        return dict(self)

    def __mul__(self, other: "DifferenceMonomial") -> "DifferenceMonomial":
        return DifferenceMonomial(itertools.chain(self, other))

    def shift(self, theta: Exponent) -> "DifferenceMonomial":
        if not any(theta):
            return self
        return DifferenceMonomial((shift_term(theta, t), e) for t, e in self)

    def divide(self, other: "DifferenceMonomial") -> Optional["DifferenceMonomial"]:
        """Ordinary quotient ``self / other`` if ``other`` divides ``self`` as a power product."""
        mine = dict(self)
        for t, e in other:
            left = mine.get(t, 0) - e
            if left < 0:
                return None
            mine[t] = left
        return DifferenceMonomial(mine.items())

    def gcd(self, other: "DifferenceMonomial") -> "DifferenceMonomial":
        theirs = dict(other)
        return DifferenceMonomial((t, min(e, theirs.get(t, 0))) for t, e in self)

    def max_shift(self, n: int) -> Exponent:
        out = [0] * n
        for t, _ in self:
            out = [max(a, b) for a, b in zip(out, t.shift)]
        return tuple(out)

    def __repr__(self):
        if not self:
            return "1"
        return "*".join(f"{t}^{e}" if e > 1 else f"{t}" for t, e in self)


ONE = DifferenceMonomial()


class MonomialOrder:
    """Lexicographic monomial order compatible with a ranking."""

    def __init__(self, ranking: Ranking):
        self.ranking = ranking
        self._cache: Dict[DifferenceMonomial, tuple] = {}

    def key(self, m: DifferenceMonomial) -> tuple:
        k = self._cache.get(m)
        if k is None:
            rk = self.ranking.key
            k = tuple(sorted(((rk(t), e) for t, e in m), reverse=True))
            self._cache[m] = k
        return k

    def compare(self, a: DifferenceMonomial, b: DifferenceMonomial) -> int:
        ka, kb = self.key(a), self.key(b)
        return (ka > kb) - (ka < kb)


def admissible_compare(a: DifferenceMonomial, b: DifferenceMonomial, r: Ranking) -> int:
    return MonomialOrder(r).compare(a, b)


def _as_order(order) -> MonomialOrder:
    return order if isinstance(order, MonomialOrder) else MonomialOrder(order)


class DiffPoly:
    """Sparse ``DifferenceMonomial -> coefficient`` map over the field ``K``."""

    __slots__ = ("terms", "K")

    def __init__(self, terms: Dict[DifferenceMonomial, object], K):
        self.K = K
        self.terms = {m: c for m, c in terms.items() if c}

    @classmethod
    def from_linear(cls, p: LinearPoly) -> "DiffPoly":
        terms = {DifferenceMonomial.of(t): c for t, c in p.terms.items()}
        if p.const:
            terms[ONE] = p.const
        return cls(terms, p.K)

    def to_linear(self) -> LinearPoly:
        terms = {}
        const = self.K.zero
        for m, c in self.terms.items():
            if m.is_unit:
                const = c
            elif m.degree == 1:
                terms[m[0][0]] = c
            else:
                raise DiffBasisError(f"{self} is not linear")
        return LinearPoly(terms, self.K, const)

    def is_linear(self) -> bool:
        return all(m.degree <= 1 for m in self.terms)

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, DiffPoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        return "DiffPoly(" + " + ".join(f"({c})*{m}" for m, c in self.terms.items()) + ")"

    def lm(self, order) -> DifferenceMonomial:
        return max(self.terms, key=_as_order(order).key)

    def lc(self, order):
        return self.terms[self.lm(order)]

    def monic(self, order) -> "DiffPoly":
        lc = self.lc(order)
        if lc == self.K.one:
            return self
        return self.scale(self.K.one / lc)

    def scale(self, c) -> "DiffPoly":
        return DiffPoly({m: c * a for m, a in self.terms.items()}, self.K)

    def __add__(self, other: "DiffPoly") -> "DiffPoly":
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, self.K.zero) + c
        return DiffPoly(out, self.K)

    def __neg__(self):
        return self.scale(-self.K.one)

    def __sub__(self, other: "DiffPoly") -> "DiffPoly":
        return self + (-other)

    def __mul__(self, other: "DiffPoly") -> "DiffPoly":
        out: Dict[DifferenceMonomial, object] = {}
        zero = self.K.zero
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = m1 * m2
                out[m] = out.get(m, zero) + c1 * c2
        return DiffPoly(out, self.K)

    def mul_monomial(self, t: DifferenceMonomial, c=None) -> "DiffPoly":
        c = self.K.one if c is None else c
        return DiffPoly({t * m: c * a for m, a in self.terms.items()}, self.K)

    def shift(self, theta: Exponent) -> "DiffPoly":
        if not any(theta):
            return self
        return DiffPoly({m.shift(theta): self.K.shift(c, theta) for m, c in self.terms.items()},
                        self.K)


def _candidate_shifts(v: DifferenceMonomial, w: DifferenceMonomial) -> Iterator[Exponent]:
    a = v[0][0]
    seen = set()
    for b, _ in w:
        if b.func != a.func:
            continue
        theta = tuple(y - x for x, y in zip(a.shift, b.shift))
        if min(theta) >= 0 and theta not in seen:
            seen.add(theta)
            yield theta


def monomial_divides(v: DifferenceMonomial, w: DifferenceMonomial,
                     n: Optional[int] = None) -> List[Tuple[DifferenceMonomial, Exponent]]:
    """Every witness ``(t, theta)`` with ``w == t * (theta o v)``.

    For ``v == 1`` the shift is arbitrary; it is enumerated over the box bounded
    by the largest shift occurring in ``w`` (``n`` gives the arity then).
    """
    if v.is_unit:
        if n is None:
            n = len(w[0][0].shift) if w else 0
        box = w.max_shift(n) if w else (0,) * n
        return [(w, theta) for theta in itertools.product(*(range(b + 1) for b in box))]
    out = []
    for theta in _candidate_shifts(v, w):
        t = w.divide(v.shift(theta))
        if t is not None:
            out.append((t, theta))
    return out


def first_witness(v: DifferenceMonomial, w: DifferenceMonomial):
    if v.is_unit:
        n = len(w[0][0].shift) if w else 0
        return w, (0,) * n
    for theta in _candidate_shifts(v, w):
        t = w.divide(v.shift(theta))
        if t is not None:
            return t, theta
    return None


@dataclass(frozen=True)
class SPolyPair:
    """``m1 * theta1 o p - m2 * theta2 o q`` with matching leading monomials."""

    p: DiffPoly
    q: DiffPoly
    m1: DifferenceMonomial
    theta1: Exponent
    m2: DifferenceMonomial
    theta2: Exponent

    def polynomial(self) -> DiffPoly:
        return (self.p.shift(self.theta1).mul_monomial(self.m1)
                - self.q.shift(self.theta2).mul_monomial(self.m2))


def s_pairs(p: DiffPoly, q: DiffPoly, order, same: Optional[bool] = None) -> List[SPolyPair]:
    """All S-pairs of monic ``p`` and ``q`` whose shifted leading monomials share a term.

    Cofactors satisfy ``gcd(m1, m2) == 1`` and ``min(theta1[i], theta2[i]) == 0``.
    Pairs whose shifted leading monomials are coprime are left out: their
    S-polynomials reduce to zero by the product criterion.
    """
    order = _as_order(order)
    v, w = p.lm(order), q.lm(order)
    if same is None:
        same = p is q or p == q
    found = {}
    for a, _ in v:
        for b, _ in w:
            if a.func != b.func:
                continue
            delta = [y - x for x, y in zip(a.shift, b.shift)]
            th1 = tuple(max(d, 0) for d in delta)
            th2 = tuple(max(-d, 0) for d in delta)
            if same and (th1 == th2 or (th2, th1) in found):
                continue
            if (th1, th2) in found:
                continue
            A, B = v.shift(th1), w.shift(th2)
            g = A.gcd(B)
            found[(th1, th2)] = SPolyPair(p, q, B.divide(g), th1, A.divide(g), th2)
    return [found[k] for k in sorted(found)]


def s_polynomials(p: DiffPoly, q: DiffPoly, order) -> List[DiffPoly]:
    return [pair.polynomial() for pair in s_pairs(p, q, order)]


def normal_form(p: DiffPoly, G: Sequence[DiffPoly], order, trace: Optional[list] = None) -> DiffPoly:
    """Full (head and tail) normal form, highest monomial first.

    ``trace`` receives the leading monomial of the working polynomial before
    every elementary reduction.
    """
    order = _as_order(order)
    K = p.K
    monics = [g.monic(order) for g in G]
    leads = [g.lm(order) for g in monics]
    h = dict(p.terms)
    done: Dict[DifferenceMonomial, object] = {}
    key = order.key
    zero = K.zero
    while h:
        u = max(h, key=key)
        hit = None
        for g, v in zip(monics, leads):
            wit = first_witness(v, u)
            if wit is not None:
                hit = g, wit
                break
        if hit is None:
            done[u] = h.pop(u)
            continue
        g, (t, theta) = hit
        if trace is not None:
            trace.append(u)
        b = h[u]
        for m, c in g.shift(theta).mul_monomial(t).terms.items():
            val = h.get(m, zero) - b * c
            if val:
                h[m] = val
            else:
                h.pop(m, None)
    return DiffPoly(done, K)


def interreduce(F: Iterable[DiffPoly], order) -> List[DiffPoly]:
    """Monic set with every element in normal form modulo the others."""
    order = _as_order(order)
    G = [f.monic(order) for f in F if f]
    changed = True
    while changed:
        changed = False
        G.sort(key=lambda g: order.key(g.lm(order)))
        for i in range(len(G)):
            f = G[i]
            others = G[:i] + G[i + 1:]
            red = normal_form(f, others, order)
            if red != f:
                changed = True
                G = others + ([red.monic(order)] if red else [])
                break
    G = list(dict.fromkeys(G))
    return sorted(G, key=lambda g: order.key(g.lm(order)))


@dataclass
class StandardBasisResult:
    basis: List[DiffPoly]
    status: str
    rounds: int

    def __iter__(self):
        return iter((self.basis, self.status))


def standard_basis(F: Iterable[DiffPoly], order, budget: int = DEFAULT_BUDGET) -> StandardBasisResult:
    """Difference standard basis of ``Id(F)`` by S-polynomial completion.

    Each round reduces the S-polynomials of all not yet treated pairs among the
    elements present at the start of the round, modulo the current (growing)
    set.  The loop stops after a round that adds nothing.  If ``budget`` rounds pass
    without the set stabilizing, the current set is returned unreduced with
    status ``budget-exhausted``.
    """
    if budget <= 0:
        raise DiffBasisError("budget must be positive")
    order = _as_order(order)
    G: List[DiffPoly] = []
    for f in F:
        if f:
            g = f.monic(order)
            if g not in G:
                G.append(g)
    if not G:
        raise DiffBasisError("input system is empty or zero")
    treated = set()
    for rounds in range(1, budget + 1):
        H = list(G)
        for i, j in itertools.combinations_with_replacement(range(len(H)), 2):
            if (H[i], H[j]) in treated:
                continue
            for pair in s_pairs(H[i], H[j], order, same=(i == j)):
                g = normal_form(pair.polynomial(), G, order)
                if g:
                    g = g.monic(order)
                    if g not in G:
                        G.append(g)
            treated.add((H[i], H[j]))
        log.debug("round %d: %d -> %d elements", rounds, len(H), len(G))
        if len(G) == len(H):
            return StandardBasisResult(interreduce(G, order), COMPLETE, rounds)
    return StandardBasisResult(G, BUDGET_EXHAUSTED, budget)


def all_s_polynomials(G: Sequence[DiffPoly], order) -> List[DiffPoly]:
    order = _as_order(order)
    out = []
    for i, j in itertools.combinations_with_replacement(range(len(G)), 2):
        out.extend(pair.polynomial() for pair in s_pairs(G[i], G[j], order, same=(i == j)))
    return out
