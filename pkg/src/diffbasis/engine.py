"""Completion to minimal Janet-like (or Janet) bases of linear difference ideals.

The completion keeps a working basis ``G`` indexed by a :class:`JanetTree`
and a queue ``Q`` ordered by leading term (lowest first, FIFO on ties).
Each basis element remembers the leading term of its ancestor and the
forbidden powers it has already been prolonged by, so a prolongation
``theta^s o g`` enters the queue at most once per element.
"""

from __future__ import annotations

import heapq
import itertools
import logging
from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from .division import JANET, JANET_LIKE, JanetTree, Powers, power_exponent
from .errors import DiffBasisError, InconsistentSystemError
from .linear import LinearPoly, apply_shift, plain_reduce, reduce_with, shifted_terms
from .ring import Exponent, Ranking, Term, exp_add, exp_lcm, shift_term, term_divides

log = logging.getLogger(__name__)

# representation of an element in terms of the inputs: (input index, shift) -> coefficient
Rep = Dict[Tuple[int, Exponent], object]


@dataclass
class Options:
    division: str = JANET_LIKE
    criteria: bool = True
    track: bool = False
    trace: bool = False


def _rep_shift(rep: Rep, beta: Exponent, K) -> Rep:
    if not any(beta):
        return rep
    return {(i, exp_add(b, beta)): K.shift(c, beta) for (i, b), c in rep.items()}


def _rep_axpy(acc: Rep, c, rep: Rep, K) -> None:
    """``acc += c * rep`` in place."""
    for key, v in rep.items():
        w = acc.get(key, K.zero) + c * v
        if w:
            acc[key] = w
        else:
            acc.pop(key, None)


def _rep_scale(rep: Rep, c) -> Rep:
    return {k: c * v for k, v in rep.items()}


class BasisElement:
    """A monic basis polynomial with its completion bookkeeping."""

    __slots__ = ("poly", "lead", "anc", "prolonged", "rep", "_shifts")

    def __init__(self, poly: LinearPoly, lead: Term, anc: Term, prolonged=None, rep=None):
        self.poly = poly
        self.lead = lead
        self.anc = anc
        self.prolonged = set() if prolonged is None else set(prolonged)
        self.rep = rep
        self._shifts: Dict[Exponent, tuple] = {}

    def shifted(self, theta: Exponent):
        hit = self._shifts.get(theta)
        if hit is None:
            K = self.poly.K
            hit = (shifted_terms(theta, self.poly.terms, K), K.shift(self.poly.const, theta))
            self._shifts[theta] = hit
        return hit

    def __repr__(self):
        return f"BasisElement(lead={self.lead}, anc={self.anc})"


class Basis:
    """A completed basis: the polynomials plus the division used to build it.

    Iterating yields the monic polynomials in increasing order of leading term.
    """

    def __init__(self, elements: Iterable[BasisElement], r: Ranking, kind: str, K,
                 inputs: Sequence[LinearPoly] = (), events: Optional[list] = None):
        self.r = r
        self.kind = kind
        self.K = K
        self.inputs = list(inputs)
        self.events = events
        self.tree = JanetTree(r, kind)
        els = sorted(elements, key=lambda e: r.key(e.lead))
        for e in els:
            self.tree.insert(e.lead, e)
        self.elements = els

    @classmethod
    def from_polys(cls, polys: Iterable[LinearPoly], r: Ranking, kind: str = JANET_LIKE) -> "Basis":
        """Wrap already-completed polynomials (no completion is performed)."""
        polys = [p.monic(r) for p in polys if p.terms]
        if not polys:
            raise DiffBasisError("empty basis")
        return cls((BasisElement(p, p.lm(r), p.lm(r)) for p in polys), r, kind, polys[0].K)

    @property
    def polys(self) -> List[LinearPoly]:
        return [e.poly for e in self.elements]

    def __iter__(self) -> Iterator[LinearPoly]:
        return iter(self.polys)

    def __len__(self):
        return len(self.elements)

    def leads(self) -> List[Term]:
        return [e.lead for e in self.elements]

    def powers(self, e: BasisElement) -> Powers:
        return self.tree.powers(e.lead)

    def reductor(self, t: Term):
        return self.tree.lookup(t)

    def normal_form(self, p: LinearPoly, trace: Optional[list] = None) -> LinearPoly:
        return j_normal_form(p, self, trace)

    def representation(self, e: BasisElement) -> LinearPoly:
        """Expand the tracked combination of inputs that equals ``e.poly``."""
        if e.rep is None:
            raise DiffBasisError("completion ran without tracking")
        return expand_rep(e.rep, self.inputs, self.K)


def expand_rep(rep: Rep, inputs: Sequence[LinearPoly], K) -> LinearPoly:
    total = LinearPoly.zero(K)
    for (i, beta), c in rep.items():
        total = total + apply_shift(beta, inputs[i]).scale(c)
    return total


def _finder(tree: JanetTree):
    def find(t: Term):
        hit = tree.lookup(t)
        if hit is None:
            return None
        e, theta = hit
        terms, const = e.shifted(theta)
        return e, theta, terms, const
    return find


def j_normal_form(p: LinearPoly, G, trace: Optional[list] = None) -> LinearPoly:
    """Janet(-like) normal form of ``p`` modulo a :class:`Basis` or completion state.

    When ``trace`` is a list it receives ``(b, theta, element)`` triples with
    ``p - result == sum(b * theta o element.poly)``.
    """
    return reduce_with(p, _finder(G.tree), G.r, False, trace)


class CompletionState:
    """Working basis ``G`` plus the queue ``Q`` of pending polynomials."""

    def __init__(self, r: Ranking, K, opts: Options):
        self.r = r
        self.K = K
        self.opts = opts
        self.tree = JanetTree(r, opts.division)
        self.G: Dict[Term, BasisElement] = {}
        self._queue: list = []
        self._count = itertools.count()
        self.events: Optional[list] = [] if opts.trace else None
        self.stats = {"reductions": 0, "skipped": 0, "zero": 0, "tail": 0}

    # queue entries: (key, counter, kind, payload)
    def push_poly(self, poly: LinearPoly, anc: Term, prolonged=(), rep=None):
        lead = poly.lm(self.r)
        heapq.heappush(self._queue, (self.r.key(lead), next(self._count), "poly",
                                     (poly, anc, frozenset(prolonged), rep)))

    def push_prolongation(self, e: BasisElement, power: Tuple[int, int]):
        beta = power_exponent(self.r.n, power)
        lead = shift_term(beta, e.lead)
        heapq.heappush(self._queue, (self.r.key(lead), next(self._count), "prolong", (e, power)))

    def pop(self):
        """Next pending ``(poly, anc, prolonged, rep)``, or ``None`` for a stale prolongation."""
        _, _, kind, payload = heapq.heappop(self._queue)
        if kind == "poly":
            return payload
        e, power = payload
        if self.G.get(e.lead) is e and power not in self.tree.powers(e.lead):
            # the shift lies in e's own cone again; re-queued if it leaves it later
            return None
        beta = power_exponent(self.r.n, power)
        poly = apply_shift(beta, e.poly)
        rep = _rep_shift(e.rep, beta, self.K) if e.rep is not None else None
        return poly, e.anc, frozenset(), rep

    def __bool__(self):
        return bool(self._queue)

    def note(self, *event):
        if self.events is not None:
            self.events.append(event)
        log.debug("%s", event)

    def insert(self, e: BasisElement):
        self.G[e.lead] = e
        self.tree.insert(e.lead, e)

    def remove(self, e: BasisElement):
        del self.G[e.lead]
        self.tree.remove(e.lead)

    def criteria_hold(self, poly: LinearPoly, anc: Term) -> bool:
        """Ancestor chain criterion: the pair behind ``poly`` was already treated lower down."""
        lead = poly.lm(self.r)
        if lead == anc:
            return False
        hit = self.tree.lookup(lead)
        if hit is None:
            return False
        g, _ = hit
        if g.anc.func != anc.func:
            return False
        lcm = exp_lcm(anc.shift, g.anc.shift)
        return lcm != lead.shift

    def normal_form(self, poly: LinearPoly, trace=None) -> LinearPoly:
        return reduce_with(poly, _finder(self.tree), self.r, False, trace)

    def reduce_tails(self) -> None:
        """J-reduce every tail modulo the current basis, lowest lead first.

        Leads, ancestors and ideal membership are unchanged; keeping tails
        reduced stops coefficient growth in later reductions.
        """
        K = self.K
        for e in sorted(self.G.values(), key=lambda e: self.r.key(e.lead)):
            head = LinearPoly.term(e.lead, K)
            tail = e.poly - head
            if not tail:
                continue
            trace = [] if e.rep is not None else None
            nf = self.normal_form(tail, trace)
            if nf == tail:
                continue
            e.poly = head + nf
            e._shifts = {}
            if trace:
                rep = dict(e.rep)
                for b, theta, g in trace:
                    _rep_axpy(rep, -b, _rep_shift(g.rep, theta, K), K)
                e.rep = rep
            self.stats["tail"] += 1


def _prepare_inputs(F: Iterable[LinearPoly], r: Ranking):
    F = list(F)
    if not F or all(not f for f in F):
        raise DiffBasisError("input system is empty or zero")
    for f in F:
        if f and not f.terms:
            raise InconsistentSystemError("nonzero constant among the inputs")
    return F


def _monic_with_rep(poly: LinearPoly, rep, r: Ranking):
    lc = poly.lc(r)
    if lc == poly.K.one:
        return poly, rep
    inv = poly.K.one / lc
    return poly.scale(inv), (_rep_scale(rep, inv) if rep is not None else None)


def janet_like_basis(F: Iterable[LinearPoly], r: Ranking, opts: Optional[Options] = None,
                     **kwargs) -> Basis:
    """Minimal Janet-like (or Janet, per ``opts.division``) basis of ``Id(F)``.

    Keyword arguments override fields of ``opts``.
    """
    opts = Options(**{**(vars(opts) if opts else {}), **kwargs})
    F = _prepare_inputs(F, r)
    K = F[0].K
    st = CompletionState(r, K, opts)
    track = opts.track

    items = []
    for i, f in enumerate(F):
        if not f:
            continue
        rep = {(i, (0,) * r.n): K.one} if track else None
        poly, rep = _monic_with_rep(f, rep, r)
        items.append((poly, rep))
    items.sort(key=lambda it: r.key(it[0].lm(r)))
    first, first_rep = items[0]
    st.insert(BasisElement(first, first.lm(r), first.lm(r), rep=first_rep))
    for poly, rep in items[1:]:
        st.push_poly(poly, poly.lm(r), rep=rep)

    while st:
        h = None
        while st and h is None:
            item = st.pop()
            if item is None:
                continue
            poly, anc, prolonged, rep = item
            lead = poly.lm(r)
            if opts.criteria and st.criteria_hold(poly, anc):
                st.stats["skipped"] += 1
                st.note("skip", lead)
                continue
            trace = [] if track else None
            nf = st.normal_form(poly, trace)
            st.stats["reductions"] += 1
            if not nf:
                st.stats["zero"] += 1
                st.note("zero", lead)
                continue
            if not nf.terms:
                raise InconsistentSystemError("the system implies a nonzero constant")
            if track:
                rep = dict(rep)
                for b, theta, e in trace:
                    _rep_axpy(rep, -b, _rep_shift(e.rep, theta, K), K)
            h, rep = _monic_with_rep(nf, rep, r)
            h_lead = h.lm(r)
            if h_lead == lead:
                h_elem = BasisElement(h, h_lead, anc, prolonged, rep)
            else:
                h_elem = BasisElement(h, h_lead, h_lead, rep=rep)
        if h is None:
            break
        for g in [g for g in st.G.values() if g.lead.func == h_elem.lead.func]:
            mu = term_divides(h_elem.lead, g.lead)
            if mu is not None and any(mu):
                st.remove(g)
                st.push_poly(g.poly, g.anc, g.prolonged, g.rep)
                st.note("displace", g.lead)
        st.insert(h_elem)
        st.note("insert", h_elem.lead)
        st.reduce_tails()
        for g in list(st.G.values()):
            current = st.tree.powers(g.lead)
            # a ledger entry stays valid only while its power remains forbidden
            g.prolonged.intersection_update(current)
            for pw in current:
                if pw not in g.prolonged:
                    g.prolonged.add(pw)
                    st.push_prolongation(g, pw)

    log.debug("completion stats: %s", st.stats)
    basis = Basis(st.G.values(), r, opts.division, K, F, st.events)
    basis.stats = st.stats
    return basis


def janet_basis(F: Iterable[LinearPoly], r: Ranking, **kwargs) -> Basis:
    return janet_like_basis(F, r, division=JANET, **kwargs)


def characterization_violations(G: Basis) -> List[Tuple[Term, Exponent]]:
    """Pairs ``(lm(g), theta)`` with ``theta`` a forbidden power and nonzero ``NF(theta o g)``."""
    bad = []
    n = G.r.n
    for e in G.elements:
        for pw in G.powers(e):
            beta = power_exponent(n, pw)
            if j_normal_form(apply_shift(beta, e.poly), G):
                bad.append((e.lead, beta))
    return bad


def _interreduce_linear(polys: List[LinearPoly], r: Ranking) -> List[LinearPoly]:
    """Tail-reduce each polynomial against the others; heads must be mutually irreducible."""
    out = []
    for i, p in enumerate(polys):
        others = polys[:i] + polys[i + 1:]
        red = plain_reduce(p, others, r)
        out.append(red.monic(r))
    return sorted(out, key=lambda p: r.key(p.lm(r)))


def _minimal(polys: List[LinearPoly], r: Ranking) -> List[LinearPoly]:
    """Drop every polynomial whose leading term is a multiple of an earlier kept one."""
    kept: List[LinearPoly] = []
    for p in sorted(polys, key=lambda p: r.key(p.lm(r))):
        u = p.lm(r)
        if not any(term_divides(q.lm(r), u) is not None for q in kept):
            kept.append(p)
    return kept


def extract_reduced_gb(G: Iterable[LinearPoly], r: Ranking) -> List[LinearPoly]:
    """Reduced Groebner basis contained (up to tails) in a minimal Janet(-like) basis."""
    polys = [p.monic(r) for p in G]
    return _interreduce_linear(_minimal(polys, r), r)


def s_pair(f: LinearPoly, g: LinearPoly, r: Ranking) -> Optional[LinearPoly]:
    """``theta_1 o f - theta_2 o g`` over the lcm of the leading shifts (monic inputs)."""
    u, v = f.lm(r), g.lm(r)
    if u.func != v.func:
        return None
    l = exp_lcm(u.shift, v.shift)
    a = tuple(x - y for x, y in zip(l, u.shift))
    b = tuple(x - y for x, y in zip(l, v.shift))
    return apply_shift(a, f) - apply_shift(b, g)


def buchberger_oracle(F: Iterable[LinearPoly], r: Ranking) -> List[LinearPoly]:
    """Reduced Groebner basis by naive pair completion; a test oracle only."""
    F = _prepare_inputs(F, r)
    G: List[LinearPoly] = []
    pairs: List[Tuple[int, int]] = []
    for f in F:
        if f:
            G.append(f.monic(r))
    pairs = [(i, j) for j in range(len(G)) for i in range(j)]
    while pairs:
        i, j = pairs.pop(0)
        s = s_pair(G[i], G[j], r)
        if s is None or not s:
            continue
        red = plain_reduce(s, G, r)
        if red:
            if not red.terms:
                raise InconsistentSystemError("the system implies a nonzero constant")
            G.append(red.monic(r))
            k = len(G) - 1
            pairs.extend((i2, k) for i2 in range(k))
    return _interreduce_linear(_minimal(G, r), r)
