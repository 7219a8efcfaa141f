"""Linear difference polynomials and unrestricted (Groebner) reduction."""

from __future__ import annotations

import heapq

from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from .errors import SignatureMismatchError
from .ring import Exponent, Ranking, Term, exp_add, shift_term, term_divides

TraceStep = Tuple[object, Exponent, int]


class LinearPoly:
    """A sparse map ``Term -> coefficient`` plus an optional constant tail.

    Instances are treated as immutable.  ``K`` is the coefficient field the
    coefficients live in.
    """

    __slots__ = ("terms", "const", "K", "_lead")

    def __init__(self, terms: Dict[Term, object], K, const=None):
        self.K = K
        self.terms = {t: c for t, c in terms.items() if c}
        self.const = K.zero if const is None else const
        self._lead = None

    # construction helpers -------------------------------------------------

    @classmethod
    def zero(cls, K) -> "LinearPoly":
        return cls({}, K)

    @classmethod
    def term(cls, t: Term, K, coeff=None) -> "LinearPoly":
        return cls({t: K.one if coeff is None else coeff}, K)

    # basic queries --------------------------------------------------------

    def __bool__(self):
        return bool(self.terms) or bool(self.const)

    def is_zero(self) -> bool:
        return not self

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        if not isinstance(other, LinearPoly):
            return NotImplemented
        return self.terms == other.terms and self.const == other.const

    def __hash__(self):
        return hash((frozenset(self.terms.items()), self.const))

    def __repr__(self):
        body = " + ".join(f"({c})*{t}" for t, c in self.terms.items())
        if self.const:
            body += f" + ({self.const})"
        return f"LinearPoly({body or '0'})"

    def functions(self) -> set:
        return {t.func for t in self.terms}

    def sorted_terms(self, r: Ranking) -> List[Term]:
        return sorted(self.terms, key=r.key, reverse=True)

    def lm(self, r: Ranking) -> Term:
        lead = self._lead
        if lead is None or lead[0] is not r:
            if not self.terms:
                raise ValueError("leading term of a polynomial without difference terms")
            lead = (r, max(self.terms, key=r.key))
            self._lead = lead
        return lead[1]

    def lc(self, r: Ranking):
        return self.terms[self.lm(r)]

    # arithmetic -----------------------------------------------------------

    def _check(self, other: "LinearPoly"):
        if other.K != self.K:
            raise SignatureMismatchError("polynomials over different coefficient fields")

    def __add__(self, other: "LinearPoly") -> "LinearPoly":
        self._check(other)
        out = dict(self.terms)
        for t, c in other.terms.items():
            out[t] = out.get(t, self.K.zero) + c
        return LinearPoly(out, self.K, self.const + other.const)

    def __neg__(self) -> "LinearPoly":
        return LinearPoly({t: -c for t, c in self.terms.items()}, self.K, -self.const)

    def __sub__(self, other: "LinearPoly") -> "LinearPoly":
        return self + (-other)

    def scale(self, c) -> "LinearPoly":
        """Left multiplication by a field element (coefficients are not shifted)."""
        if not c:
            return LinearPoly.zero(self.K)
        return LinearPoly({t: c * a for t, a in self.terms.items()}, self.K, c * self.const)

    def __rmul__(self, c) -> "LinearPoly":
        return self.scale(c)

    def monic(self, r: Ranking) -> "LinearPoly":
        lc = self.lc(r)
        if lc == self.K.one:
            return self
        inv = self.K.one / lc
        return self.scale(inv)

    def shift(self, beta: Exponent) -> "LinearPoly":
        return apply_shift(beta, self)

    def map_terms(self, fn: Callable[[Term], Term]) -> "LinearPoly":
        out: Dict[Term, object] = {}
        for t, c in self.terms.items():
            s = fn(t)
            out[s] = out.get(s, self.K.zero) + c
        return LinearPoly(out, self.K, self.const)


def apply_shift(beta: Exponent, p: LinearPoly) -> LinearPoly:
    """``theta^beta o p``: shifts every term and every coefficient."""
    if not any(beta):
        return p
    K = p.K
    out = {shift_term(beta, t): K.shift(c, beta) for t, c in p.terms.items()}
    return LinearPoly(out, K, K.shift(p.const, beta))


def shifted_terms(beta: Exponent, terms: Dict[Term, object], K) -> Dict[Term, object]:
    """Dictionary-level ``theta^beta``; the hot path for reductions."""
    if not any(beta):
        return terms
    shift = K.shift
    return {Term(t.func, exp_add(t.shift, beta)): shift(c, beta) for t, c in terms.items()}


Reductor = Callable[[Term], Optional[Tuple[int, Exponent, Dict[Term, object], object]]]


def reduce_with(p: LinearPoly, find: Reductor, r: Ranking, head_only: bool = False,
                trace: Optional[list] = None) -> LinearPoly:
    """Reduce ``p`` highest-term-first using the reductor lookup ``find``.

    ``find(t)`` returns ``(index, theta, shifted_monic_terms, shifted_const)``
    describing ``theta o (g/lc(g))`` with leading term ``t``, or ``None``.
    When ``trace`` is a list, ``(coefficient, theta, index)`` triples are
    appended so that ``p - result == sum(c * theta o monic(g_index))``.
    """
    K = p.K
    h = dict(p.terms)
    const = p.const
    done: Dict[Term, object] = {}
    hkey = r.heap_key
    # lazy max-heap over the live terms of h; stale entries are skipped
    heap = [(hkey(t), t) for t in h]
    heapq.heapify(heap)
    push, pop = heapq.heappush, heapq.heappop
    while heap:
        t = pop(heap)[1]
        b = h.get(t)
        if b is None:
            continue
        hit = find(t)
        if hit is None:
            if head_only:
                done.update(h)
                break
            done[t] = h.pop(t)
            continue
        idx, theta, sterms, sconst = hit
        for s, c in sterms.items():
            v = h.get(s)
            if v is None:
                h[s] = -b * c
                push(heap, (hkey(s), s))
            else:
                v = v - b * c
                if v:
                    h[s] = v
                else:
                    del h[s]
        if sconst:
            const = const - b * sconst
        if trace is not None:
            trace.append((b, theta, idx))
    return LinearPoly(done, K, const)


def plain_reduce(f: LinearPoly, G: Sequence[LinearPoly], r: Ranking, head_only: bool = False,
                 trace: Optional[list] = None) -> LinearPoly:
    """Groebner reduction of ``f`` modulo ``G`` (any ``theta``-multiple may be used).

    With ``head_only`` the loop stops as soon as the leading term is
    irreducible; otherwise every term of the result is irreducible.
    """
    monics = [g.monic(r) for g in G]
    leads = [g.lm(r) for g in monics]
    K = f.K

    def find(t):
        for i, (g, u) in enumerate(zip(monics, leads)):
            theta = term_divides(u, t)
            if theta is not None:
                return i, theta, shifted_terms(theta, g.terms, K), K.shift(g.const, theta)
        return None

    return reduce_with(f, find, r, head_only, trace)


def expand_trace(trace: Iterable[TraceStep], G: Sequence[LinearPoly], r: Ranking, K) -> LinearPoly:
    """Re-expand ``sum(c * theta o monic(G[i]))`` exactly."""
    total = LinearPoly.zero(K)
    for c, theta, i in trace:
        total = total + apply_shift(theta, G[i].monic(r)).scale(c)
    return total
