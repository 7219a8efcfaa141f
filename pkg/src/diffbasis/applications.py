"""Compatibility conditions, residue class bases, Hilbert series and extra relations.

Residue class bases are described by cones: a root term ``w`` and a set
``S`` of index positions, standing for every ``theta^beta o w`` with ``beta``
supported on ``S``.  For a completed basis the cones cover exactly the terms
that are not J-reducible (equivalently, not shifts of a leading term).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from math import comb
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from .engine import Basis, Options, extract_reduced_gb, janet_like_basis
from .errors import DiffBasisError, ParseError
from .linear import LinearPoly
from .ring import POT, Exponent, Ranking, RingSignature, Term

Cone = Tuple[Term, Tuple[int, ...]]


# compatibility conditions ---------------------------------------------------

@dataclass
class CompCondResult:
    conditions: List[LinearPoly]
    signature: RingSignature
    ranking: Ranking
    basis: Basis

    def __iter__(self):
        return iter(self.conditions)

    def __len__(self):
        return len(self.conditions)


def comp_cond(system: Sequence[Tuple[LinearPoly, Optional[str]]], sig: RingSignature,
              r: Ranking, opts: Optional[Options] = None) -> CompCondResult:
    """Compatibility conditions of ``lhs_j = tag_j``.

    Each tag becomes a new function ranked below all original ones, with
    position-over-term priority so that the originals are eliminated.  The
    conditions are the reduced Groebner basis elements that involve tags only.
    A tag of ``None`` (or ``"0"``) is a homogeneous equation.
    """
    tags: List[str] = []
    for _, tag in system:
        if tag in (None, "0"):
            continue
        if tag in sig.index_names or tag in sig.function_names or tag in sig.parameter_names:
            raise DiffBasisError(f"right-hand side tag {tag!r} clashes with an existing name")
        if tag not in tags:
            tags.append(tag)
    if not system:
        raise DiffBasisError("empty system")
    m = sig.m
    big = sig.with_functions(tags)
    rr = r.with_extra_functions(len(tags))
    rr = Ranking(rr.n, rr.m, rr.order, POT, rr.function_order, rr.index_order)
    K = system[0][0].K
    polys = []
    for lhs, tag in system:
        if lhs.const:
            raise DiffBasisError("left-hand sides must be homogeneous in the functions")
        p = LinearPoly(dict(lhs.terms), K)
        if tag not in (None, "0"):
            p = p - LinearPoly.term(Term(m + tags.index(tag), big.zero_shift()), K)
        if p:
            polys.append(p)
    B = janet_like_basis(polys, rr, opts)
    gb = extract_reduced_gb(B, rr)
    conds = [g for g in gb if all(f >= m for f in g.functions())]
    return CompCondResult(conds, big, rr, B)


# cones ------------------------------------------------------------------------

def _complement(gens: List[Exponent], root: Exponent, free: Tuple[int, ...]) -> List[Tuple[Exponent, Tuple[int, ...]]]:
    """Disjoint cones covering ``{root + beta : beta on free}`` minus the multiples of ``gens``.

    ``gens`` are relative to ``root`` and already restricted to ``free``.
    """
    n = len(root)
    if any(not any(g) for g in gens):
        return []
    if not gens:
        return [(root, free)]
    i = next(i for i in free if any(g[i] for g in gens))
    rest = tuple(j for j in free if j != i)
    top = max(g[i] for g in gens)
    out = []
    for k in range(top + 1):
        slice_gens = [tuple(0 if j == i else g[j] for j in range(n)) for g in gens if g[i] <= k]
        slice_gens = _minimize(slice_gens)
        new_root = tuple(root[j] + (k if j == i else 0) for j in range(n))
        if k < top:
            out.extend(_complement(slice_gens, new_root, rest))
        else:
            sub = _complement(slice_gens, new_root, rest)
            out.extend((w, tuple(sorted(S + (i,)))) for w, S in sub)
    return out


def _minimize(gens: List[Exponent]) -> List[Exponent]:
    gens = sorted(set(gens), key=sum)
    kept: List[Exponent] = []
    for g in gens:
        if not any(all(a <= b for a, b in zip(h, g)) for h in kept):
            kept.append(g)
    return kept


@dataclass
class ConeDecomposition:
    """Disjoint cones ``(root term, multiplicative index positions)``."""

    cones: List[Cone]
    n: int

    def __iter__(self) -> Iterator[Cone]:
        return iter(self.cones)

    def __len__(self):
        return len(self.cones)

    @property
    def is_finite(self) -> bool:
        return all(not S for _, S in self.cones)

    def contains(self, t: Term) -> bool:
        return any(_in_cone(t, c) for c in self.cones)

    def terms(self, max_degree: Optional[int] = None) -> List[Term]:
        """All terms in the cones, up to total shift degree ``max_degree`` for infinite cones."""
        if max_degree is None and not self.is_finite:
            raise DiffBasisError("infinite residue class basis; give max_degree")
        out = []
        for w, S in self.cones:
            base = sum(w.shift)
            if max_degree is not None and base > max_degree:
                continue
            budget = 0 if max_degree is None else max_degree - base
            for extra in _compositions(len(S), budget):
                shift = list(w.shift)
                for i, e in zip(S, extra):
                    shift[i] += e
                out.append(Term(w.func, tuple(shift)))
        return out

    def count_by_degree(self, max_degree: int) -> List[int]:
        counts = [0] * (max_degree + 1)
        for w, S in self.cones:
            a = sum(w.shift)
            for d in range(a, max_degree + 1):
                counts[d] += _cone_count(len(S), d - a)
        return counts


def _in_cone(t: Term, cone: Cone) -> bool:
    w, S = cone
    if t.func != w.func:
        return False
    for i, (a, b) in enumerate(zip(w.shift, t.shift)):
        if i in S:
            if b < a:
                return False
        elif a != b:
            return False
    return True


def _cone_count(s: int, d: int) -> int:
    if s == 0:
        return 1 if d == 0 else 0
    return comb(d + s - 1, s - 1)


def _compositions(k: int, total: int) -> Iterator[Tuple[int, ...]]:
    """Exponent tuples of length ``k`` with sum at most ``total``."""
    if k == 0:
        yield ()
        return
    for first in range(total + 1):
        for rest in _compositions(k - 1, total - first):
            yield (first,) + rest


# quotient relations -----------------------------------------------------------

Constraint = Optional[Tuple[str, int]]


@dataclass(frozen=True)
class QuotientRelation:
    """A family of terms set to zero: per coordinate ``None``, ``(">=", c)`` or ``("=", c)``.

    Offsets are internal shift degrees (forward direction).
    """

    func: int
    constraints: Tuple[Constraint, ...]
    source: str = ""

    def matches(self, t: Term) -> bool:
        if t.func != self.func:
            return False
        for c, s in zip(self.constraints, t.shift):
            if c is None:
                continue
            op, v = c
            if op == ">=" and s < v:
                return False
            if op == "=" and s != v:
                return False
        return True


_REL_ITEM = re.compile(r"^\s*([A-Za-z_][A-Za-z0-9_]*)\s*(?:(>=|=)\s*(\d+))?\s*$")


def parse_relation(src: str, sig: RingSignature) -> QuotientRelation:
    """Read ``f[k>=3, n=0]``; a bare index name leaves that coordinate free."""
    m = re.match(r"^\s*([A-Za-z_][A-Za-z0-9_]*)\s*(?:\[(.*)\])?\s*$", src)
    if not m:
        raise ParseError("malformed relation pattern", src, 0)
    name, body = m.group(1), m.group(2)
    if name not in sig.function_names:
        raise ParseError(f"unknown function {name!r}", src, m.start(1))
    cons: List[Constraint] = [None] * sig.n
    if body is not None and body.strip():
        items = body.split(",")
        if len(items) != sig.n:
            raise ParseError(f"pattern needs {sig.n} entries", src, m.start(2))
        for i, item in enumerate(items):
            im = _REL_ITEM.match(item)
            if not im or im.group(1) != sig.index_names[i]:
                raise ParseError(f"expected {sig.index_names[i]!r}, '{sig.index_names[i]}>=c' or "
                                 f"'{sig.index_names[i]}=c'", src, m.start(2))
            if im.group(2):
                cons[i] = (im.group(2), int(im.group(3)))
    return QuotientRelation(sig.function_index(name), tuple(cons), src.strip())


@dataclass
class RelationStore:
    relations: List[QuotientRelation] = field(default_factory=list)

    def matches(self, t: Term) -> bool:
        return any(rel.matches(t) for rel in self.relations)


def add_relation(store: RelationStore, rel: QuotientRelation) -> RelationStore:
    store.relations.append(rel)
    return store


def list_relations(store: RelationStore) -> List[str]:
    return [rel.source for rel in store.relations]


def erase_relations(p: LinearPoly, store: Optional[RelationStore]) -> LinearPoly:
    if not store or not store.relations:
        return p
    return LinearPoly({t: c for t, c in p.terms.items() if not store.matches(t)}, p.K, p.const)


def inv_reduce(p: LinearPoly, G: Basis, store: Optional[RelationStore] = None,
               trace: Optional[list] = None) -> LinearPoly:
    """Normal form modulo ``G`` with terms matched by stored relations dropped."""
    nf = G.normal_form(p, trace)
    return erase_relations(nf, store)


def _subtract(cone: Cone, rel: QuotientRelation) -> List[Cone]:
    """Disjoint cones covering ``cone`` minus the terms matched by ``rel``."""
    w, S = cone
    if rel.func != w.func:
        return [cone]
    n = len(w.shift)
    # per coordinate: (matched part, unmatched parts); parts are (start, free)
    matched = []
    unmatched = []
    for i in range(n):
        c = rel.constraints[i]
        a = w.shift[i]
        if i not in S:
            ok = c is None or (c[0] == ">=" and a >= c[1]) or (c[0] == "=" and a == c[1])
            if not ok:
                return [cone]
            matched.append([(a, False)])
            unmatched.append([])
            continue
        if c is None:
            matched.append([(a, True)])
            unmatched.append([])
        elif c[0] == ">=":
            lo = max(a, c[1])
            matched.append([(lo, True)])
            unmatched.append([(v, False) for v in range(a, lo)])
        else:
            v = c[1]
            if v < a:
                return [cone]
            matched.append([(v, False)])
            unmatched.append([(u, False) for u in range(a, v)] + [(v + 1, True)])
    out: List[Cone] = []
    for i in range(n):
        for part in unmatched[i]:
            pieces = [matched[j][0] for j in range(i)] + [part]
            pieces += [(w.shift[j], j in S) for j in range(i + 1, n)]
            root = Term(w.func, tuple(p[0] for p in pieces))
            free = tuple(j for j, p in enumerate(pieces) if p[1])
            out.append((root, free))
    return out


def residue_class_basis(G: Basis, store: Optional[RelationStore] = None) -> ConeDecomposition:
    """Cone decomposition of the terms that are irreducible modulo a completed basis."""
    r = G.r
    n = r.n
    leads: Dict[int, List[Exponent]] = {}
    for u in G.leads():
        leads.setdefault(u.func, []).append(u.shift)
    cones: List[Cone] = []
    order = tuple(r.index_order)
    for k in range(r.m):
        for root, free in _complement(_minimize(leads.get(k, [])), (0,) * n, order):
            cones.append((Term(k, root), tuple(sorted(free))))
    if store:
        for rel in store.relations:
            cones = [c for cone in cones for c in _subtract(cone, rel)]
    cones.sort(key=lambda c: (r.key(c[0]), c[1]))
    return ConeDecomposition(cones, n)


# Hilbert series ---------------------------------------------------------------

def _poly_mul(a: List[int], b: List[int]) -> List[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _trim(a: List[int]) -> List[int]:
    while len(a) > 1 and a[-1] == 0:
        a = a[:-1]
    return a


@dataclass(frozen=True)
class HilbertSeries:
    """``numerator(t) / (1 - t)^power`` with integer numerator coefficients (ascending)."""

    numerator: Tuple[int, ...]
    power: int

    @classmethod
    def from_cones(cls, cones: Iterable[Cone]) -> "HilbertSeries":
        cones = list(cones)
        k = max((len(S) for _, S in cones), default=0)
        num = [0]
        for w, S in cones:
            a = sum(w.shift)
            term = [0] * a + [1]
            for _ in range(k - len(S)):
                term = _poly_mul(term, [1, -1])
            if len(term) > len(num):
                num += [0] * (len(term) - len(num))
            for i, c in enumerate(term):
                num[i] += c
        # num(1) counts the cones of top dimension, so no factor (1 - t) cancels
        return cls(tuple(_trim(num)), k)

    def coefficients(self, order: int) -> List[int]:
        """Series coefficients of ``t^0 .. t^order``."""
        out = []
        for d in range(order + 1):
            total = 0
            for i, c in enumerate(self.numerator):
                if c and i <= d:
                    total += c * _cone_count(self.power, d - i)
            out.append(total)
        return out

    def numerator_text(self) -> str:
        parts = []
        for i, c in enumerate(self.numerator):
            if not c:
                continue
            mono = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
            mag = abs(c)
            body = str(mag) if not mono else (mono if mag == 1 else f"{mag}*{mono}")
            sign = "-" if c < 0 else "+"
            if not parts:
                parts.append(f"-{body}" if c < 0 else body)
            else:
                parts.append(f" {sign} {body}")
        return "".join(parts) or "0"

    def __str__(self):
        num = self.numerator_text()
        if self.power == 0:
            return num
        den = "(1 - t)" if self.power == 1 else f"(1 - t)^{self.power}"
        if sum(1 for c in self.numerator if c) > 1:
            num = f"({num})"
        return f"{num}/{den}"

    def series_text(self, order: int) -> str:
        parts = []
        for d, c in enumerate(self.coefficients(order)):
            if not c:
                continue
            mono = "" if d == 0 else ("t" if d == 1 else f"t^{d}")
            body = str(abs(c)) if not mono else (mono if abs(c) == 1 else f"{abs(c)}*{mono}")
            if not parts:
                parts.append(f"-{body}" if c < 0 else body)
            else:
                parts.append(f" {'-' if c < 0 else '+'} {body}")
        parts.append(f" + O(t^{order + 1})" if parts else f"O(t^{order + 1})")
        return "".join(parts)


def hilbert_series(G: Basis, store: Optional[RelationStore] = None) -> HilbertSeries:
    return HilbertSeries.from_cones(residue_class_basis(G, store))


def irreducible_counts(G: Basis, max_degree: int) -> List[int]:
    """Per-degree counts of terms with no J-reductor, by enumeration."""
    counts = [0] * (max_degree + 1)
    n = G.r.n
    for k in range(G.r.m):
        for d in range(max_degree + 1):
            for mu in _exact(n, d):
                if G.reductor(Term(k, mu)) is None:
                    counts[d] += 1
    return counts


def _exact(k: int, total: int) -> Iterator[Tuple[int, ...]]:
    if k == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _exact(k - 1, total - first):
            yield (first,) + rest


__all__ = [
    "CompCondResult", "comp_cond", "ConeDecomposition", "QuotientRelation", "parse_relation",
    "RelationStore", "add_relation", "list_relations", "erase_relations", "inv_reduce",
    "residue_class_basis", "HilbertSeries", "hilbert_series", "irreducible_counts",
]
