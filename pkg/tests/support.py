"""Shared builders for the test suite."""

import random
from fractions import Fraction

from diffbasis.coeffs import FunctionField, RationalField
from diffbasis.linear import LinearPoly
from diffbasis.parsing import BACKWARD, format_poly, parse_equation, pol2shift, shift2pol
from diffbasis.ring import Ranking, RingSignature, Term

Q = RationalField()


def T(*shift, func=0):
    return Term(func, tuple(shift))


def poly(d, K=Q):
    """``{(shift...): coeff}`` or ``{Term: coeff}`` -> LinearPoly."""
    terms = {}
    for k, v in d.items():
        t = k if isinstance(k, Term) else Term(0, tuple(k))
        terms[t] = K(v)
    return LinearPoly(terms, K)


def toric_system():
    F = [poly({(7, 0, 0, 0): 1, (0, 2, 1, 0): -1}),
         poly({(4, 0, 0, 1): 1, (0, 3, 0, 0): -1}),
         poly({(3, 1, 0, 0): 1, (0, 0, 1, 1): -1})]
    return F, Ranking(4, 1)


TORIC_REDUCED = [
    {(7, 0, 0, 0): 1, (0, 2, 1, 0): -1},
    {(4, 0, 0, 1): 1, (0, 3, 0, 0): -1},
    {(3, 1, 0, 0): 1, (0, 0, 1, 1): -1},
    {(0, 4, 0, 0): 1, (1, 0, 1, 2): -1},
]


def random_system(rng: random.Random, n_max=3, m_max=2, gens=(1, 4), terms=(1, 3), deg_max=4):
    """Random linear system with small integer coefficients and a random ranking."""
    n = rng.randint(1, n_max)
    m = rng.randint(1, m_max)
    while True:
        F = []
        for _ in range(rng.randint(*gens)):
            d = {}
            for _ in range(rng.randint(*terms)):
                sh = [0] * n
                for _ in range(rng.randint(0, deg_max)):
                    sh[rng.randrange(n)] += 1
                d[Term(rng.randrange(m), tuple(sh))] = Q(rng.choice([-3, -2, -1, 1, 2, 3]))
            F.append(LinearPoly(d, Q))
        if any(F):
            break
    order = rng.choice(["degrevlex", "lex"])
    priority = rng.choice(["top", "pot"])
    return F, Ranking(n, m, order, priority)


def corpus(seed: int, count: int, **kw):
    rng = random.Random(seed)
    return [random_system(rng, **kw) for _ in range(count)]


def sig_xy(*functions, params=()):
    return RingSignature(("x", "y"), functions or ("u",), params)


# parser corpus -------------------------------------------------------------------

def random_coeff(rng, K, names):
    def rand_poly():
        p = K(rng.randint(-4, 4))
        for _ in range(rng.randint(0, 2)):
            p = p + K(rng.randint(-3, 3)) * K.gen(rng.choice(names)) ** rng.randint(1, 2)
        return p

    if rng.random() < 0.5:
        return K(Fraction(rng.randint(-9, 9), rng.randint(1, 5)))
    den = rand_poly()
    while not den:
        den = rand_poly()
    return rand_poly() / den


def random_poly(rng, sig, K, funcs=None, max_terms=4):
    funcs = range(sig.m) if funcs is None else funcs
    names = list(sig.index_names + sig.parameter_names)
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        t = Term(rng.choice(list(funcs)), tuple(rng.randint(0, 4) for _ in range(sig.n)))
        terms[t] = random_coeff(rng, K, names)
    return LinearPoly(terms, K)


def round_trip_failures(seed: int, count: int):
    """Print/parse ``count`` random polynomials in every surface syntax.

    Returns ``(checked, failures)`` where ``failures`` lists the texts that
    did not parse back to the polynomial they were printed from.
    """
    rng = random.Random(seed)
    sigs = [RingSignature(("x", "y"), ("u", "v")), RingSignature(("k", "n"), ("f",), ("d",)),
            RingSignature(("a", "b", "c"), ("g", "h"), ("p", "q"))]
    fields = [FunctionField(s.index_names, s.parameter_names) for s in sigs]
    checked, failures, i = 0, [], 0
    while checked < count:
        sig, K = sigs[i % len(sigs)], fields[i % len(sigs)]
        i += 1
        r = Ranking.for_signature(sig, rng.choice(["lex", "degrevlex"]), rng.choice(["top", "pot"]))
        p = random_poly(rng, sig, K)
        if not p:
            continue
        text = format_poly(p, sig, r)
        if parse_equation(text, sig, K) != p:
            failures.append(text)
        # operator syntax, one function at a time
        f = rng.randrange(sig.m)
        q = random_poly(rng, sig, K, funcs=[f])
        if q:
            op = pol2shift(q, sig, r)
            if shift2pol(op, sig, sig.function_names[f], K) != q:
                failures.append(op)
            per = pol2shift(q, sig, r, per_summand=True)
            if parse_equation(per, sig, K) != q:
                failures.append(per)
        back = format_poly(p, sig, r, BACKWARD)
        if parse_equation(back, sig, K, direction=BACKWARD) != p:
            failures.append(back)
        checked += 1
    return checked, failures
