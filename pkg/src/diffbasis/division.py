"""Janet and Janet-like divisions on leading terms.

For each function ``k`` the leading terms ``lm_k(F)`` are split into groups
sharing their degrees in the first ``i - 1`` index coordinates (in the
ranking's ``index_order``).  Inside a group an element whose ``i``-th degree
is not maximal gets a forbidden power ``theta_i^s``: ``s`` is the gap to the
next larger degree in the group (Janet-like) or ``1`` (Janet).  A shift is
admissible for the element iff it stays strictly below every forbidden
power, which makes the admissible cones of distinct leading terms disjoint.
"""

from __future__ import annotations

from bisect import bisect_right, insort
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .errors import DuplicateLeadError
from .ring import Exponent, Ranking, Term

JANET = "janet"
JANET_LIKE = "janet-like"
DIVISIONS = (JANET, JANET_LIKE)

# (coordinate, power) pairs; coordinate is a position in the shift tuple
Powers = Tuple[Tuple[int, int], ...]


def _check_kind(kind: str):
    if kind not in DIVISIONS:
        raise ValueError(f"unknown division {kind!r}; expected one of {DIVISIONS}")


def in_cone(theta: Exponent, powers: Powers) -> bool:
    """True iff ``theta`` avoids the upward closure of ``powers``."""
    for i, s in powers:
        if theta[i] >= s:
            return False
    return True


def power_exponent(n: int, power: Tuple[int, int]) -> Exponent:
    i, s = power
    return tuple(s if j == i else 0 for j in range(n))


def difference_powers(leads: Iterable[Term], r: Ranking, kind: str = JANET_LIKE) -> Dict[Term, Powers]:
    """Forbidden powers of every leading term, straight from the group definition."""
    _check_kind(kind)
    leads = list(leads)
    if len(set(leads)) != len(leads):
        raise DuplicateLeadError("leading terms must be pairwise distinct")
    io = r.index_order
    out: Dict[Term, Powers] = {}
    for u in leads:
        same = [v for v in leads if v.func == u.func]
        powers = []
        for level, i in enumerate(io):
            group = [v for v in same if all(v.shift[j] == u.shift[j] for j in io[:level])]
            above = [v.shift[i] - u.shift[i] for v in group if v.shift[i] > u.shift[i]]
            if above:
                powers.append((i, min(above) if kind == JANET_LIKE else 1))
        out[u] = tuple(powers)
    return out


@dataclass
class DivisionMeta:
    """Forbidden powers per element (``dp``), indexed like the input list."""

    kind: str
    leads: List[Term]
    dp: List[Powers]

    def powers_of(self, u: Term) -> Powers:
        return self.dp[self.leads.index(u)]

    def nonmultiplicative(self, u: Term) -> Tuple[int, ...]:
        """Coordinates carrying a forbidden power (the Janet non-multiplicative variables)."""
        return tuple(i for i, _ in self.powers_of(u))

    def cone(self, u: Term) -> Powers:
        return self.powers_of(u)


def compute_division_meta(F: Sequence, r: Ranking, kind: str = JANET_LIKE) -> DivisionMeta:
    """Division data for polynomials (or bare terms) ``F``."""
    leads = [f if isinstance(f, Term) else f.lm(r) for f in F]
    table = difference_powers(leads, r, kind)
    return DivisionMeta(kind, leads, [table[u] for u in leads])


def brute_force_reductor(t: Term, leads: Sequence[Term], powers: Sequence[Powers]):
    """Linear scan for an element whose admissible cone contains ``t``."""
    hits = []
    for idx, (u, dp) in enumerate(zip(leads, powers)):
        if u.func != t.func:
            continue
        theta = tuple(a - b for a, b in zip(t.shift, u.shift))
        if min(theta) >= 0 and in_cone(theta, dp):
            hits.append((idx, theta))
    return hits


class _Node:
    __slots__ = ("keys", "children", "payload")

    def __init__(self):
        self.keys: List[int] = []
        self.children: Dict[int, "_Node"] = {}
        self.payload = None


class JanetTree:
    """Trie over (function, degree in each index coordinate) of leading terms.

    Looking up a term walks one root-to-leaf path, choosing at each level the
    largest stored degree not exceeding the query's, so the cost depends on
    the depth ``n`` and the branching, not on the basis size.
    """

    def __init__(self, r: Ranking, kind: str = JANET_LIKE):
        _check_kind(kind)
        self.r = r
        self.kind = kind
        self._roots: Dict[int, _Node] = {}
        self._items: Dict[Term, object] = {}

    def __len__(self):
        return len(self._items)

    def __contains__(self, u: Term):
        return u in self._items

    def items(self):
        return self._items.items()

    def insert(self, u: Term, payload) -> None:
        if u in self._items:
            raise DuplicateLeadError(f"leading term {u} already present")
        node = self._roots.get(u.func)
        if node is None:
            node = self._roots[u.func] = _Node()
        for i in self.r.index_order:
            d = u.shift[i]
            child = node.children.get(d)
            if child is None:
                child = node.children[d] = _Node()
                insort(node.keys, d)
            node = child
        node.payload = (u, payload)
        self._items[u] = payload

    def remove(self, u: Term) -> None:
        del self._items[u]
        path = []
        node = self._roots[u.func]
        for i in self.r.index_order:
            d = u.shift[i]
            path.append((node, d))
            node = node.children[d]
        node.payload = None
        for parent, d in reversed(path):
            child = parent.children[d]
            if child.children or child.payload is not None:
                break
            del parent.children[d]
            parent.keys.remove(d)
        root = self._roots[u.func]
        if not root.children:
            del self._roots[u.func]

    def _gap(self, keys: List[int], pos: int) -> Optional[int]:
        if pos + 1 >= len(keys):
            return None
        return keys[pos + 1] - keys[pos] if self.kind == JANET_LIKE else 1

    def powers(self, u: Term) -> Powers:
        """Forbidden powers of a stored leading term, read off the tree."""
        node = self._roots[u.func]
        out = []
        for i in self.r.index_order:
            d = u.shift[i]
            pos = bisect_right(node.keys, d) - 1
            gap = self._gap(node.keys, pos)
            if gap is not None:
                out.append((i, gap))
            node = node.children[d]
        return tuple(out)

    def lookup(self, t: Term) -> Optional[Tuple[object, Exponent]]:
        """The unique stored element whose admissible cone contains ``t``."""
        node = self._roots.get(t.func)
        if node is None:
            return None
        for i in self.r.index_order:
            d = t.shift[i]
            keys = node.keys
            pos = bisect_right(keys, d) - 1
            if pos < 0:
                return None
            k = keys[pos]
            gap = self._gap(keys, pos)
            if gap is not None and d - k >= gap:
                return None
            node = node.children[k]
        u, payload = node.payload
        return payload, tuple(a - b for a, b in zip(t.shift, u.shift))


def j_reductor(t: Term, tree: JanetTree):
    """``(element, theta)`` with ``theta o lm(element) == t`` inside its cone, or ``None``."""
    return tree.lookup(t)
