"""Difference terms, exponent arithmetic and rankings.

A term ``theta^mu o y^k`` is stored as a :class:`Term` holding the
(zero-based) function index ``k`` and the shift exponent ``mu`` as a tuple
of nonnegative integers, one entry per index variable.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Sequence, Tuple

from .errors import SignatureMismatchError

Exponent = Tuple[int, ...]

DEGREVLEX = "degrevlex"
LEX = "lex"
TOP = "top"
POT = "pot"


@dataclass(frozen=True)
class RingSignature:
    """Names of the index variables, unknown functions and parameters."""

    index_names: Tuple[str, ...]
    function_names: Tuple[str, ...]
    parameter_names: Tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "index_names", tuple(self.index_names))
        object.__setattr__(self, "function_names", tuple(self.function_names))
        object.__setattr__(self, "parameter_names", tuple(self.parameter_names))
        if not self.index_names:
            raise ValueError("at least one index variable is required")
        if not self.function_names:
            raise ValueError("at least one function is required")
        names = self.index_names + self.function_names + self.parameter_names
        if len(set(names)) != len(names):
            raise ValueError(f"names must be pairwise distinct: {names}")

    @property
    def n(self) -> int:
        return len(self.index_names)

    @property
    def m(self) -> int:
        return len(self.function_names)

    def function_index(self, name: str) -> int:
        return self.function_names.index(name)

    def zero_shift(self) -> Exponent:
        return (0,) * self.n

    def unit(self, i: int, power: int = 1) -> Exponent:
        return tuple(power if j == i else 0 for j in range(self.n))

    def with_functions(self, extra: Sequence[str]) -> "RingSignature":
        return RingSignature(self.index_names, self.function_names + tuple(extra),
                             self.parameter_names)


class Term(NamedTuple):
    """``theta^shift o y^func``."""

    func: int
    shift: Exponent

    @property
    def degree(self) -> int:
        return sum(self.shift)


def exp_add(a: Exponent, b: Exponent) -> Exponent:
    return tuple(x + y for x, y in zip(a, b))


def exp_sub(a: Exponent, b: Exponent) -> Optional[Exponent]:
    """``a - b`` if it is componentwise nonnegative, else ``None``."""
    out = tuple(x - y for x, y in zip(a, b))
    if any(x < 0 for x in out):
        return None
    return out


def exp_divides(a: Exponent, b: Exponent) -> bool:
    return all(x <= y for x, y in zip(a, b))


def exp_lcm(a: Exponent, b: Exponent) -> Exponent:
    return tuple(max(x, y) for x, y in zip(a, b))


def shift_term(beta: Exponent, t: Term) -> Term:
    if not any(beta):
        return t
    return Term(t.func, exp_add(t.shift, beta))


def term_divides(v: Term, w: Term) -> Optional[Exponent]:
    """The shift ``theta`` with ``theta o v == w``, or ``None``."""
    if v.func != w.func:
        return None
    return exp_sub(w.shift, v.shift)


@dataclass(frozen=True)
class Ranking:
    """A ranking on terms over ``n`` index variables and ``m`` functions.

    ``function_order`` lists function indices from highest to lowest rank;
    ``index_order`` lists index positions from most to least significant.
    Under TOP the shift exponents are compared first and the function order
    breaks ties; under POT the function order decides first.
    """

    n: int
    m: int
    order: str = DEGREVLEX
    priority: str = TOP
    function_order: Optional[Tuple[int, ...]] = None
    index_order: Optional[Tuple[int, ...]] = None
    _cache: dict = field(default_factory=dict, compare=False, hash=False, repr=False)
    _neg_cache: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    def __post_init__(self):
        if self.order not in (DEGREVLEX, LEX):
            raise ValueError(f"unknown order {self.order!r}")
        if self.priority not in (TOP, POT):
            raise ValueError(f"unknown priority {self.priority!r}")
        fo = tuple(range(self.m)) if self.function_order is None else tuple(self.function_order)
        io = tuple(range(self.n)) if self.index_order is None else tuple(self.index_order)
        if sorted(fo) != list(range(self.m)):
            raise ValueError(f"function_order must permute 0..{self.m - 1}")
        if sorted(io) != list(range(self.n)):
            raise ValueError(f"index_order must permute 0..{self.n - 1}")
        object.__setattr__(self, "function_order", fo)
        object.__setattr__(self, "index_order", io)
        # rank value: larger means higher
        object.__setattr__(self, "_frank", {k: self.m - 1 - pos for pos, k in enumerate(fo)})

    @classmethod
    def for_signature(cls, sig: RingSignature, order=DEGREVLEX, priority=TOP,
                      function_order=None, index_order=None) -> "Ranking":
        return cls(sig.n, sig.m, order, priority, function_order, index_order)

    def with_extra_functions(self, count: int) -> "Ranking":
        """Same ranking with ``count`` new functions ranked below all others."""
        fo = self.function_order + tuple(range(self.m, self.m + count))
        return Ranking(self.n, self.m + count, self.order, self.priority, fo, self.index_order)

    def shift_key(self, mu: Exponent) -> Tuple[int, ...]:
        io = self.index_order
        if self.order == LEX:
            return tuple(mu[i] for i in io)
        return (sum(mu),) + tuple(-mu[i] for i in reversed(io))

    def key(self, t: Term) -> Tuple[int, ...]:
        """Sort key: ``key(a) > key(b)`` iff ``a`` ranks above ``b``."""
        k = self._cache.get(t)
        if k is None:
            if t.func < 0 or t.func >= self.m or len(t.shift) != self.n:
                raise SignatureMismatchError(f"term {t} does not fit a ranking over n={self.n}, m={self.m}")
            fr = self._frank[t.func]
            sk = self.shift_key(t.shift)
            k = sk + (fr,) if self.priority == TOP else (fr,) + sk
            self._cache[t] = k
        return k

    def heap_key(self, t: Term) -> Tuple[int, ...]:
        """Negated :meth:`key`, so a min-heap pops the highest term first."""
        k = self._neg_cache.get(t)
        if k is None:
            k = self._neg_cache[t] = tuple(-v for v in self.key(t))
        return k

    def compare(self, a: Term, b: Term) -> int:
        ka, kb = self.key(a), self.key(b)
        return (ka > kb) - (ka < kb)


def compare_terms(a: Term, b: Term, r: Ranking) -> int:
    """-1, 0 or 1 as ``a`` ranks below, equal to, or above ``b``."""
    return r.compare(a, b)
