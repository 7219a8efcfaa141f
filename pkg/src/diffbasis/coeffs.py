"""Coefficient fields: exact rationals and rational functions.

Two concrete difference fields are provided.  :class:`RationalField` is
``Q`` with the trivial shift action and is used whenever a problem only
carries constant coefficients.  :class:`FunctionField` is
``Q(x_1..x_n, p_1..p_k)`` where the index variables ``x_i`` are shifted by
``theta_i`` and the parameters ``p_j`` are constants of the shift action.

Elements are plain Python objects supporting ``+ - * /`` and ``==``
(sympy's ``QQ.dtype`` for ``Q``, which is gmpy2's ``mpq`` when gmpy2 is
installed; sympy ``FracElement`` for rational functions, kept
in lowest terms with a positive leading denominator coefficient by sympy's
``cancel``), so polynomial code never needs to know which field it runs on.
"""

from __future__ import annotations

import operator
from fractions import Fraction
from functools import lru_cache
from typing import Sequence, Tuple

from sympy import QQ
from sympy.polys.fields import FracElement
from sympy.polys.fields import field as sympy_field

from .errors import DiffBasisError

# element types of the two fields
Rational = QQ.dtype
RationalFunction = FracElement


def _rational(value) -> Rational:
    if isinstance(value, Rational):
        return value
    if isinstance(value, (Fraction, str)):
        q = Fraction(value)
        return Rational(q.numerator, q.denominator)
    return QQ.convert(value)


class RationalField:
    """The field ``Q``; every shift acts as the identity."""

    is_constant_field = True

    def __init__(self, index_names: Sequence[str] = (), parameter_names: Sequence[str] = ()):
        self.index_names = tuple(index_names)
        self.parameter_names = tuple(parameter_names)
        self.zero = Rational(0)
        self.one = Rational(1)

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash(RationalField)

    def __repr__(self):
        return "QQ"

    def __call__(self, value) -> Rational:
        return _rational(value)

    def gen(self, name: str):
        raise DiffBasisError(f"symbol {name!r} is not available in the constant field Q")

    def shift(self, c, beta) -> Rational:
        return c

    def reflect(self, c) -> Rational:
        return c

    def is_constant(self, c) -> bool:
        return True

    def to_fraction(self, c) -> Fraction:
        return Fraction(int(c.numerator), int(c.denominator))

    def is_negative(self, c) -> bool:
        return c < 0

    def format(self, c) -> str:
        return str(c)


class FunctionField:
    """``Q(index variables, parameters)`` with ``theta_i: x_i -> x_i + 1``."""

    is_constant_field = False

    def __init__(self, index_names: Sequence[str], parameter_names: Sequence[str] = ()):
        self.index_names = tuple(index_names)
        self.parameter_names = tuple(parameter_names)
        names = self.index_names + self.parameter_names
        self._field, *gens = sympy_field(",".join(names), QQ)
        self._ring = self._field.ring
        self._gens = dict(zip(names, gens))
        self._ring_gens = self._ring.gens[: len(self.index_names)]
        self.zero = self._field.zero
        self.one = self._field.one
        self._shift = lru_cache(maxsize=1 << 16)(self._shift_uncached)

    def __eq__(self, other):
        return (isinstance(other, FunctionField) and other.index_names == self.index_names
                and other.parameter_names == self.parameter_names)

    def __hash__(self):
        return hash((self.index_names, self.parameter_names))

    def __repr__(self):
        return f"QQ({', '.join(self.index_names + self.parameter_names)})"

    def __call__(self, value) -> FracElement:
        if isinstance(value, (Fraction, Rational)):
            return self._field(QQ(int(value.numerator), int(value.denominator)))
        if isinstance(value, FracElement):
            return value
        return self._field(value)

    def gen(self, name: str) -> FracElement:
        try:
            return self._gens[name]
        except KeyError:
            raise DiffBasisError(f"unknown coefficient symbol {name!r}") from None

    def _substitute(self, c: FracElement, images) -> FracElement:
        pairs = [(x, img) for x, img in zip(self._ring_gens, images) if img is not None]
        if not pairs:
            return c
        num = c.numer.compose(pairs)
        den = c.denom.compose(pairs)
        return self._field.new(num, den)

    def _shift_uncached(self, c: FracElement, beta: Tuple[int, ...]) -> FracElement:
        images = [x + b if b else None for x, b in zip(self._ring_gens, beta)]
        return self._substitute(c, images)

    def shift(self, c: FracElement, beta: Tuple[int, ...]) -> FracElement:
        """Apply ``theta^beta``: substitute ``x_i -> x_i + beta_i``."""
        if not any(beta) or self.is_constant(c):
            return c
        return self._shift(c, tuple(beta))

    def reflect(self, c: FracElement) -> FracElement:
        """Substitute ``x_i -> -x_i`` for every index variable."""
        return self._substitute(c, [-x for x in self._ring_gens])

    def is_constant(self, c: FracElement) -> bool:
        return c.numer.is_ground and c.denom.is_ground

    def to_fraction(self, c: FracElement) -> Fraction:
        if not self.is_constant(c):
            raise DiffBasisError(f"coefficient {c} is not constant")
        q = QQ.convert(c.numer.LC) / QQ.convert(c.denom.LC)
        return Fraction(int(q.numerator), int(q.denominator))

    def is_negative(self, c: FracElement) -> bool:
        return bool(c.numer) and c.numer.LC < 0

    def format(self, c: FracElement) -> str:
        return str(c)


CoefficientField = (RationalField, FunctionField)

_OPS = {"add": operator.add, "sub": operator.sub, "mul": operator.mul, "div": operator.truediv}


def field_arith(a, b, op: str):
    """Exact ``a <op> b`` for two elements of the same field."""
    if op == "div" and not b:
        raise ZeroDivisionError("division by zero coefficient")
    return _OPS[op](a, b)


def shift_coeff(K, i: int, c, times: int = 1):
    """Apply ``theta_i^times`` to ``c``."""
    beta = tuple(times if j == i else 0 for j in range(len(K.index_names)))
    return K.shift(c, beta)


def convert(c, source, target):
    """Move ``c`` from field ``source`` into field ``target``."""
    if source == target:
        return c
    if isinstance(target, RationalField):
        return target(source.to_fraction(c))
    if isinstance(source, RationalField):
        return target(c)
    raise DiffBasisError("cannot convert between distinct function fields")
