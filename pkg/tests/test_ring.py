import random

import pytest

from diffbasis.errors import SignatureMismatchError
from diffbasis.ring import (Ranking, RingSignature, Term, compare_terms, exp_lcm, exp_sub,
                            shift_term, term_divides)


def naive_compare(a: Term, b: Term, r: Ranking) -> int:
    """Reference comparison written directly from the order definitions."""
    def shift_cmp(mu, nu):
        io = r.index_order
        if r.order == "degrevlex":
            if sum(mu) != sum(nu):
                return 1 if sum(mu) > sum(nu) else -1
            for i in reversed(io):
                if mu[i] != nu[i]:
                    return 1 if mu[i] < nu[i] else -1
            return 0
        for i in io:
            if mu[i] != nu[i]:
                return 1 if mu[i] > nu[i] else -1
        return 0

    def func_cmp(j, k):
        pos = {f: p for p, f in enumerate(r.function_order)}
        if j == k:
            return 0
        return 1 if pos[j] < pos[k] else -1

    if r.priority == "top":
        return shift_cmp(a.shift, b.shift) or func_cmp(a.func, b.func)
    return func_cmp(a.func, b.func) or shift_cmp(a.shift, b.shift)


def random_ranking(rng):
    n, m = rng.randint(1, 4), rng.randint(1, 3)
    fo = list(range(m))
    io = list(range(n))
    rng.shuffle(fo)
    rng.shuffle(io)
    return Ranking(n, m, rng.choice(["degrevlex", "lex"]), rng.choice(["top", "pot"]), fo, io)


def random_term(rng, r, deg=5):
    return Term(rng.randrange(r.m), tuple(rng.randint(0, deg) for _ in range(r.n)))


def test_signature_validation():
    sig = RingSignature(("x", "y"), ("u", "v"), ("d",))
    assert (sig.n, sig.m) == (2, 2)
    assert sig.function_index("v") == 1
    assert sig.unit(1, 3) == (0, 3)
    with pytest.raises(ValueError):
        RingSignature(("x", "x"), ("u",))
    with pytest.raises(ValueError):
        RingSignature(("x",), ("x",))
    with pytest.raises(ValueError):
        RingSignature((), ("u",))


def test_exponent_helpers():
    assert exp_sub((3, 1), (1, 1)) == (2, 0)
    assert exp_sub((1, 1), (2, 0)) is None
    assert exp_lcm((3, 0, 1), (1, 2, 1)) == (3, 2, 1)
    assert term_divides(Term(0, (1, 0)), Term(0, (3, 2))) == (2, 2)
    assert term_divides(Term(0, (1, 0)), Term(1, (3, 2))) is None
    assert shift_term((1, 1), Term(0, (0, 2))) == Term(0, (1, 3))


def test_degrevlex_example():
    r = Ranking(2, 1)
    # total degree first, then the smaller last exponent wins
    assert compare_terms(Term(0, (2, 0)), Term(0, (1, 1)), r) == 1
    assert compare_terms(Term(0, (0, 3)), Term(0, (2, 0)), r) == 1
    assert compare_terms(Term(0, (1, 0)), Term(0, (0, 1)), r) == 1


def test_top_pot_priority():
    top = Ranking(1, 2, "degrevlex", "top")
    pot = Ranking(1, 2, "degrevlex", "pot")
    a, b = Term(0, (0,)), Term(1, (3,))
    assert top.compare(a, b) == -1
    assert pot.compare(a, b) == 1
    # ties in the shift are broken by the function order under TOP
    assert top.compare(Term(0, (2,)), Term(1, (2,))) == 1
    swapped = Ranking(1, 2, "degrevlex", "top", function_order=(1, 0))
    assert swapped.compare(Term(0, (2,)), Term(1, (2,))) == -1


def test_arity_mismatch():
    r = Ranking(2, 1)
    with pytest.raises(SignatureMismatchError):
        r.key(Term(0, (1, 2, 3)))
    with pytest.raises(SignatureMismatchError):
        r.key(Term(1, (1, 2)))


def test_bad_permutations():
    with pytest.raises(ValueError):
        Ranking(2, 1, function_order=(1,))
    with pytest.raises(ValueError):
        Ranking(2, 1, index_order=(0, 0))
    with pytest.raises(ValueError):
        Ranking(2, 1, order="grlex")


def test_ranking_axioms_random():
    rng = random.Random(11)
    samples = 0
    for _ in range(40):
        r = random_ranking(rng)
        for _ in range(300):
            a, b, c = (random_term(rng, r) for _ in range(3))
            theta = tuple(rng.randint(0, 3) for _ in range(r.n))
            ab = r.compare(a, b)
            assert ab == naive_compare(a, b, r)
            # antisymmetry and totality
            assert ab == -r.compare(b, a)
            assert (ab == 0) == (a == b)
            # transitivity
            if ab >= 0 and r.compare(b, c) >= 0:
                assert r.compare(a, c) >= 0
            # compatible with shifting
            assert r.compare(shift_term(theta, a), shift_term(theta, b)) == ab
            # shifting never decreases
            assert r.compare(shift_term(theta, a), a) == (1 if any(theta) else 0)
            samples += 1
    assert samples >= 10_000


def test_with_extra_functions_ranks_lowest():
    r = Ranking(2, 2, "lex", "pot", function_order=(1, 0))
    big = r.with_extra_functions(2)
    assert big.function_order == (1, 0, 2, 3)
    assert big.compare(Term(0, (0, 0)), Term(2, (5, 5))) == 1
    assert big.compare(Term(2, (0, 0)), Term(3, (5, 5))) == 1
