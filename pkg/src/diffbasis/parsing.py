"""Text syntax for difference polynomials.

Equation syntax writes terms with brackets, one entry per index variable in
signature order: ``u[x+1,y]``, ``f[k,n+2]``.  A bare function name is the
unshifted term.  Operator syntax uses ``T<index>`` for the difference
operators, e.g. ``Tx^2*Ty*u`` or ``(Tx - 1)*u``; coefficients always act from
the left, so ``n*Tx*u`` is ``n*u[x+1]``.  Coefficients are rational
expressions in the index variables and parameters.  ``^`` and ``**`` both
denote integer powers; ``lhs = rhs`` means ``lhs - rhs``.

With ``direction="backward"`` the difference operators shift by ``-1``:
brackets are written ``u[x-1,y]`` and coefficients are read in the original
coordinates.  Internally the engine always works forward, so backward input
is reflected (``x -> -x``) on the way in and out.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .coeffs import FunctionField, RationalField, convert
from .errors import DiffBasisError, ParseError
from .linear import LinearPoly
from .nonlinear import ONE, DiffPoly, DifferenceMonomial, MonomialOrder
from .ring import Ranking, RingSignature, Term

_IDENT = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")

FORWARD = "forward"
BACKWARD = "backward"

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>\*\*|[-+*/^()\[\],=]))")


@dataclass
class _Tok:
    kind: str
    text: str
    pos: int


def tokenize(src: str) -> List[_Tok]:
    toks = []
    pos = 0
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if not m:
            if src[pos:].strip() == "":
                break
            raise ParseError("unexpected character", src, pos + len(src[pos:]) - len(src[pos:].lstrip()))
        kind = m.lastgroup
        toks.append(_Tok(kind, m.group(kind), m.start(kind)))
        pos = m.end()
    toks.append(_Tok("end", "", len(src)))
    return toks


# Parse values: {(operator shift, monomial): coefficient}
_Key = Tuple[Tuple[int, ...], DifferenceMonomial]


class _Parser:
    def __init__(self, src: str, sig: RingSignature, K: FunctionField, backward: bool,
                 extra_functions: Sequence[str] = (), allow_negative: bool = False):
        self.src = src
        self.allow_negative = allow_negative
        self.sig = sig
        self.K = K
        self.backward = backward
        self.toks = tokenize(src)
        self.i = 0
        self.functions = tuple(sig.function_names) + tuple(extra_functions)
        self.zero_shift = sig.zero_shift()

    # token helpers
    def peek(self) -> _Tok:
        return self.toks[self.i]

    def next(self) -> _Tok:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, text: str) -> _Tok:
        tok = self.next()
        if tok.text != text:
            raise ParseError(f"expected {text!r}, found {tok.text or 'end of input'!r}", self.src, tok.pos)
        return tok

    def error(self, msg: str, tok: Optional[_Tok] = None):
        tok = tok or self.peek()
        return ParseError(msg, self.src, tok.pos)

    # value helpers
    def const(self, c) -> Dict[_Key, object]:
        return {(self.zero_shift, ONE): c}

    def add(self, a, b, sign=1):
        out = dict(a)
        for k, c in b.items():
            v = out.get(k, self.K.zero) + (c if sign > 0 else -c)
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return out

    def mul(self, a, b):
        out: Dict[_Key, object] = {}
        for (s1, m1), c1 in a.items():
            for (s2, m2), c2 in b.items():
                k = (tuple(x + y for x, y in zip(s1, s2)), m1 * m2)
                v = out.get(k, self.K.zero) + c1 * c2
                if v:
                    out[k] = v
                else:
                    out.pop(k, None)
        return out

    def as_coeff(self, a, tok):
        if not a:
            return self.K.zero
        if set(a) != {(self.zero_shift, ONE)}:
            raise self.error("only coefficients may be divided by or raised to negative powers", tok)
        return a[(self.zero_shift, ONE)]

    # grammar
    def parse(self):
        value = self.expr()
        if self.peek().text == "=":
            self.next()
            value = self.add(value, self.expr(), -1)
        tok = self.peek()
        if tok.kind != "end":
            raise self.error(f"unexpected {tok.text!r}")
        return value

    def expr(self):
        tok = self.peek()
        if tok.text in "+-" and tok.kind == "op":
            self.next()
            value = self.term()
            if tok.text == "-":
                value = {k: -c for k, c in value.items()}
        else:
            value = self.term()
        while self.peek().text in ("+", "-"):
            op = self.next().text
            value = self.add(value, self.term(), 1 if op == "+" else -1)
        return value

    def term(self):
        value = self.power()
        while self.peek().text in ("*", "/"):
            op = self.next()
            rhs = self.power()
            if op.text == "*":
                value = self.mul(value, rhs)
            else:
                c = self.as_coeff(rhs, op)
                if not c:
                    raise self.error("division by zero", op)
                value = {k: v / c for k, v in value.items()}
        return value

    def power(self):
        base = self.unary()
        if self.peek().text in ("^", "**"):
            op = self.next()
            neg = False
            if self.peek().text == "-":
                self.next()
                neg = True
            tok = self.next()
            if tok.kind != "num":
                raise self.error("integer exponent expected", tok)
            e = int(tok.text)
            if neg:
                c = self.as_coeff(base, op)
                if not c:
                    raise self.error("zero to a negative power", op)
                return self.const((self.K.one / c) ** e)
            out = self.const(self.K.one)
            for _ in range(e):
                out = self.mul(out, base)
            return out
        return base

    def unary(self):
        tok = self.peek()
        if tok.text == "-":
            self.next()
            return {k: -c for k, c in self.unary().items()}
        if tok.text == "+":
            self.next()
            return self.unary()
        return self.atom()

    def atom(self):
        tok = self.next()
        if tok.kind == "num":
            return self.const(self.K(int(tok.text)))
        if tok.text == "(":
            value = self.expr()
            self.expect(")")
            return value
        if tok.kind != "name":
            raise self.error(f"unexpected {tok.text or 'end of input'!r}", tok)
        name = tok.text
        if name in self.functions:
            k = self.functions.index(name)
            if self.peek().text == "[":
                shift = self.bracket()
                if min(shift) < 0 and not self.allow_negative:
                    raise ParseError("negative shift (pass normalize_shifts to pre-shift the equation)",
                                     self.src, tok.pos)
            else:
                shift = self.zero_shift
            return {(self.zero_shift, DifferenceMonomial.of(Term(k, shift))): self.K.one}
        if name in self.sig.index_names or name in self.sig.parameter_names:
            c = self.K.gen(name)
            if self.backward and name in self.sig.index_names:
                c = -c
            return self.const(c)
        if name.startswith("T") and name[1:] in self.sig.index_names:
            i = self.sig.index_names.index(name[1:])
            return {(self.sig.unit(i), ONE): self.K.one}
        raise ParseError(f"unknown symbol {name!r}", self.src, tok.pos)

    def bracket(self):
        self.expect("[")
        shift = []
        for i, idx in enumerate(self.sig.index_names):
            if i:
                self.expect(",")
            tok = self.next()
            if tok.text != idx:
                raise self.error(f"expected index {idx!r}", tok)
            offset = 0
            if self.peek().text in ("+", "-"):
                sign = 1 if self.next().text == "+" else -1
                num = self.next()
                if num.kind != "num":
                    raise self.error("integer offset expected", num)
                offset = sign * int(num.text)
            shift.append(-offset if self.backward else offset)
        self.expect("]")
        return tuple(shift)


def _finish(value, src: str, K, target: Optional[int]) -> DiffPoly:
    terms: Dict[DifferenceMonomial, object] = {}
    for (s, m), c in value.items():
        if any(s):
            if m.is_unit:
                if target is None:
                    raise ParseError("shift operator is not applied to any function", src, 0)
                m = DifferenceMonomial.of(Term(target, s))
            else:
                m = m.shift(s)
        elif m.is_unit and target is not None and not _has_functions(value):
            m = DifferenceMonomial.of(Term(target, s))
        terms[m] = terms.get(m, K.zero) + c
    return DiffPoly(terms, K)


def _has_functions(value) -> bool:
    return any(not m.is_unit for (_, m) in value)


def _normalize(p: DiffPoly, normalize: bool, src: str) -> DiffPoly:
    """Pre-shift so that every shift is nonnegative, or reject negative shifts."""
    lows = None
    for m in p.terms:
        for t, _ in m:
            lows = list(t.shift) if lows is None else [min(a, b) for a, b in zip(lows, t.shift)]
    if lows is None or min(lows) >= 0:
        return p
    if not normalize:
        raise ParseError("negative shift (pass normalize_shifts to pre-shift the equation)", src, 0)
    beta = tuple(max(0, -x) for x in lows)
    return p.shift(beta)


def parse_diffpoly(src: str, sig: RingSignature, K: Optional[FunctionField] = None,
                   direction: str = FORWARD, normalize_shifts: bool = False,
                   target: Optional[str] = None, extra_functions: Sequence[str] = ()) -> DiffPoly:
    """Parse a (possibly nonlinear) difference polynomial over ``Q(indices, parameters)``."""
    if direction not in (FORWARD, BACKWARD):
        raise DiffBasisError(f"unknown shift direction {direction!r}")
    if K is None:
        K = FunctionField(sig.index_names, sig.parameter_names)
    parser = _Parser(src, sig, K, direction == BACKWARD, extra_functions, normalize_shifts)
    value = parser.parse()
    tgt = None
    if target is not None:
        tgt = parser.functions.index(target)
    p = _finish(value, src, K, tgt)
    return _normalize(p, normalize_shifts, src)


def parse_equation(src: str, sig: RingSignature, K: Optional[FunctionField] = None,
                   direction: str = FORWARD, normalize_shifts: bool = False,
                   extra_functions: Sequence[str] = ()):
    """Parse one equation; linear input yields a :class:`LinearPoly`, otherwise a :class:`DiffPoly`."""
    p = parse_diffpoly(src, sig, K, direction, normalize_shifts, None, extra_functions)
    return p.to_linear() if p.is_linear() else p


def parse_system(sources: Sequence[str], sig: RingSignature, direction: str = FORWARD,
                 normalize_shifts: bool = False, narrow: bool = True):
    """Parse several equations over one field; returns ``(polys, K)``.

    With ``narrow`` the field drops to ``Q`` when every coefficient is constant.
    """
    K = FunctionField(sig.index_names, sig.parameter_names)
    polys = [parse_equation(s, sig, K, direction, normalize_shifts) for s in sources]
    if narrow:
        return narrow_field(polys, K)
    return polys, K


def narrow_field(polys: Sequence, K: FunctionField):
    """Move polynomials to ``Q`` when every coefficient is a rational constant."""
    if all(all(K.is_constant(c) for c in _coeffs(p)) for p in polys):
        Q = RationalField(K.index_names, K.parameter_names)
        return [_convert(p, K, Q) for p in polys], Q
    return list(polys), K


def _coeffs(p):
    if isinstance(p, LinearPoly):
        return list(p.terms.values()) + [p.const]
    return list(p.terms.values())


def _convert(p, K, Q):
    if isinstance(p, LinearPoly):
        return LinearPoly({t: convert(c, K, Q) for t, c in p.terms.items()}, Q, convert(p.const, K, Q))
    return DiffPoly({m: convert(c, K, Q) for m, c in p.terms.items()}, Q)


# printing ------------------------------------------------------------------

def format_term(t: Term, sig: RingSignature, direction: str = FORWARD,
                functions: Optional[Sequence[str]] = None) -> str:
    names = functions or sig.function_names
    parts = []
    for name, s in zip(sig.index_names, t.shift):
        off = -s if direction == BACKWARD else s
        if off > 0:
            parts.append(f"{name}+{off}")
        elif off < 0:
            parts.append(f"{name}-{-off}")
        else:
            parts.append(name)
    return f"{names[t.func]}[{','.join(parts)}]"


def _outward(c, K, direction):
    if direction == BACKWARD and isinstance(K, FunctionField):
        return K.reflect(c)
    return c


def _coeff_text(c, K) -> str:
    if K.is_constant(c):
        return str(K.to_fraction(c))
    text = K.format(c)
    return text if _IDENT.match(text) else f"({text})"


def _join(pieces: List[Tuple[object, str]], K) -> str:
    """Render ``[(coefficient, monomial text or '')]`` as a signed sum."""
    if not pieces:
        return "0"
    out = []
    for n, (c, body) in enumerate(pieces):
        neg = K.is_negative(c)
        mag = -c if neg else c
        if body:
            text = body if mag == K.one else f"{_coeff_text(mag, K)}*{body}"
        else:
            text = _coeff_text(mag, K)
        if n == 0:
            out.append(f"-{text}" if neg else text)
        else:
            out.append(f" - {text}" if neg else f" + {text}")
    return "".join(out)


def format_linear(p: LinearPoly, sig: RingSignature, r: Ranking, direction: str = FORWARD,
                  functions: Optional[Sequence[str]] = None) -> str:
    K = p.K
    pieces = [(_outward(p.terms[t], K, direction), format_term(t, sig, direction, functions))
              for t in p.sorted_terms(r)]
    if p.const:
        pieces.append((_outward(p.const, K, direction), ""))
    return _join(pieces, K)


def format_monomial(m: DifferenceMonomial, sig: RingSignature, r: Ranking,
                    direction: str = FORWARD, functions=None) -> str:
    factors = sorted(m, key=lambda te: r.key(te[0]), reverse=True)
    return "*".join(format_term(t, sig, direction, functions) + (f"^{e}" if e > 1 else "")
                    for t, e in factors)


def format_diffpoly(p: DiffPoly, sig: RingSignature, r: Ranking, direction: str = FORWARD,
                    functions=None) -> str:
    order = MonomialOrder(r)
    K = p.K
    mons = sorted(p.terms, key=order.key, reverse=True)
    pieces = [(_outward(p.terms[m], K, direction), format_monomial(m, sig, r, direction, functions))
              for m in mons]
    return _join(pieces, K)


def format_poly(p, sig: RingSignature, r: Ranking, direction: str = FORWARD, functions=None) -> str:
    if isinstance(p, LinearPoly):
        return format_linear(p, sig, r, direction, functions)
    return format_diffpoly(p, sig, r, direction, functions)


# operator conversion -----------------------------------------------------------

def _op_monomial(shift, sig: RingSignature, direction: str) -> str:
    parts = []
    for name, s in zip(sig.index_names, shift):
        if s == 1:
            parts.append(f"T{name}")
        elif s > 1:
            parts.append(f"T{name}^{s}")
    return "*".join(parts)


def pol2shift(p: LinearPoly, sig: RingSignature, r: Ranking, per_summand: bool = False,
              direction: str = FORWARD) -> str:
    """Operator text for ``p``: ``Tx^2*Ty*u`` or ``(Tx - 1)*u``.

    Without ``per_summand`` the polynomial must involve a single function and
    the operator is factored out; otherwise every summand names its function.
    """
    if p.const:
        raise DiffBasisError("a constant term has no operator form")
    if not p:
        return "0"
    K = p.K
    funcs = p.functions()
    terms = p.sorted_terms(r)
    if per_summand:
        pieces = []
        for t in terms:
            op = _op_monomial(t.shift, sig, direction)
            body = f"{op}*{sig.function_names[t.func]}" if op else sig.function_names[t.func]
            pieces.append((_outward(p.terms[t], K, direction), body))
        return _join(pieces, K)
    if len(funcs) != 1:
        raise DiffBasisError("operator form needs a single function; use per_summand")
    name = sig.function_names[next(iter(funcs))]
    if len(terms) == 1 and p.terms[terms[0]] == K.one:
        op = _op_monomial(terms[0].shift, sig, direction)
        return f"{op}*{name}" if op else name
    pieces = [(_outward(p.terms[t], K, direction), _op_monomial(t.shift, sig, direction))
              for t in terms]
    body = _join([(c, b) for c, b in pieces], K)
    if any(not b for _, b in pieces):
        body = _join([(c, b if b else "") for c, b in pieces], K)
    return f"({body})*{name}"


def shift2pol(src: str, sig: RingSignature, target: Optional[str] = None,
              K: Optional[FunctionField] = None, direction: str = FORWARD) -> LinearPoly:
    """Apply operator text to ``target`` (or read the functions named in ``src``)."""
    p = parse_diffpoly(src, sig, K, direction, False, target)
    if not p.is_linear():
        raise DiffBasisError("operator expression is not linear")
    return p.to_linear()


def flip_direction(p, K: FunctionField):
    """Reflect ``x -> -x``: the same equation read with the opposite shift direction.

    Term shifts are negated and coefficients reflected; applying it twice is
    the identity.  The result may carry negative shifts until it is
    pre-shifted.
    """
    if isinstance(p, LinearPoly):
        terms = {Term(t.func, tuple(-s for s in t.shift)): K.reflect(c) for t, c in p.terms.items()}
        return LinearPoly(terms, K, K.reflect(p.const))
    terms = {}
    for m, c in p.terms.items():
        terms[DifferenceMonomial((Term(t.func, tuple(-s for s in t.shift)), e) for t, e in m)] = K.reflect(c)
    return DiffPoly(terms, K)
