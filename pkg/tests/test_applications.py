import itertools
import random
from fractions import Fraction

import pytest

from diffbasis.applications import (HilbertSeries, RelationStore, add_relation,
                                    comp_cond, erase_relations, hilbert_series, inv_reduce,
                                    irreducible_counts, list_relations, parse_relation,
                                    residue_class_basis)
from diffbasis.division import JANET_LIKE
from diffbasis.engine import Basis, buchberger_oracle, janet_like_basis
from diffbasis.errors import DiffBasisError, ParseError
from diffbasis.linear import LinearPoly
from diffbasis.ring import POT, Ranking, Term

from support import Q, T, corpus, poly, sig_xy, toric_system

SIG = sig_xy("u")
R = Ranking(2, 1)


def two_eq():
    return [poly({(1, 0): 1, (0, 0): -1}), poly({(0, 1): 1, (0, 0): -1})]


def tag_term(k, *shift):
    return Term(k, tuple(shift))


# compatibility conditions ------------------------------------------------------

def test_comp_cond_two_equations():
    F = two_eq()
    res = comp_cond([(F[0], "r1"), (F[1], "r2")], SIG, R)
    expected = LinearPoly({tag_term(1, 0, 1): Q(1), tag_term(1, 0, 0): Q(-1),
                           tag_term(2, 1, 0): Q(-1), tag_term(2, 0, 0): Q(1)}, Q)
    assert res.signature.function_names == ("u", "r1", "r2")
    assert len(res) == 1
    cond = res.conditions[0]
    assert cond in (expected, -expected)
    # oracle: naive completion of the augmented system under the same elimination ranking
    rr = Ranking(2, 3, "degrevlex", POT, (0, 1, 2))
    aug = [F[0] - LinearPoly.term(tag_term(1, 0, 0), Q), F[1] - LinearPoly.term(tag_term(2, 0, 0), Q)]
    oracle = [g for g in buchberger_oracle(aug, rr) if all(k >= 1 for k in g.functions())]
    assert oracle == res.conditions


def test_comp_cond_single_equation_has_none():
    assert len(comp_cond([(two_eq()[0], "r1")], SIG, R)) == 0


def test_comp_cond_homogeneous():
    F = two_eq()
    assert len(comp_cond([(F[0], None), (F[1], "0")], SIG, R)) == 0


def test_comp_cond_tag_clash():
    with pytest.raises(DiffBasisError):
        comp_cond([(two_eq()[0], "u")], SIG, R)
    with pytest.raises(DiffBasisError):
        comp_cond([(two_eq()[0], "x")], SIG, R)


def test_comp_cond_vanishes_on_solutions():
    # lhs_1 = u[x+2,y] - u[x,y+1], lhs_2 = u[x+1,y+1] - 2 u[x,y]
    F = [poly({(2, 0): 1, (0, 1): -1}), poly({(1, 1): 1, (0, 0): -2})]
    res = comp_cond([(F[0], "a"), (F[1], "b")], SIG, R)
    assert len(res) >= 1
    rng = random.Random(1)
    for _ in range(5):
        coeffs = {(i, j): Fraction(rng.randint(-5, 5)) for i in range(3) for j in range(3)}

        def u(x, y):
            return sum(c * x ** i * y ** j for (i, j), c in coeffs.items())

        def apply(p, x, y):
            return sum(c * u(x + t.shift[0], y + t.shift[1]) for t, c in p.terms.items())

        tags = [lambda x, y, p=p: apply(p, x, y) for p in F]
        for cond in res.conditions:
            for x, y in itertools.product(range(-2, 3), repeat=2):
                val = sum(c * tags[t.func - 1](x + t.shift[0], y + t.shift[1])
                          for t, c in cond.terms.items())
                assert val == 0


# residue class bases ---------------------------------------------------------

def test_residue_finite():
    B = janet_like_basis(two_eq(), R)
    cd = residue_class_basis(B)
    assert cd.is_finite
    assert cd.terms() == [T(0, 0)]
    assert str(hilbert_series(B)) == "1"


def test_residue_single_cone():
    B = janet_like_basis(two_eq()[:1], R)
    cd = residue_class_basis(B)
    assert cd.cones == [(T(0, 0), (1,))]
    assert not cd.is_finite
    with pytest.raises(DiffBasisError):
        cd.terms()
    assert cd.terms(2) == [T(0, 0), T(0, 1), T(0, 2)]
    h = hilbert_series(B)
    assert (h.numerator, h.power) == ((1,), 1)
    assert str(h) == "1/(1 - t)"


def test_zero_ideal():
    B = Basis([], R, JANET_LIKE, Q)
    cd = residue_class_basis(B)
    assert cd.cones == [(T(0, 0), (0, 1))]
    h = hilbert_series(B)
    assert str(h) == "1/(1 - t)^2"
    assert h.coefficients(4) == [1, 2, 3, 4, 5]


def test_hilbert_common_denominator():
    # 1 + t/(1-t) = 1/(1-t)
    h = HilbertSeries.from_cones([(T(0), ()), (T(1), (0,))])
    assert (h.numerator, h.power) == ((1,), 1)
    assert h.coefficients(3) == [1, 1, 1, 1]
    h2 = HilbertSeries.from_cones([(T(0, 0), (1,)), (T(1, 0), (1,))])
    assert (h2.numerator, h2.power) == ((1, 1), 1)
    assert str(h2) == "(1 + t)/(1 - t)"


def brute_irreducible(B, D):
    out = set()
    for k in range(B.r.m):
        for mu in itertools.product(range(D + 1), repeat=B.r.n):
            if sum(mu) <= D and B.reductor(Term(k, mu)) is None:
                out.add(Term(k, mu))
    return out


def test_cones_match_irreducible_terms():
    D = 8
    systems = corpus(41, 20, n_max=3, deg_max=3) + [toric_system()]
    for F, r in systems:
        B = janet_like_basis(F, r)
        cd = residue_class_basis(B)
        listed = cd.terms(D)
        assert len(listed) == len(set(listed)), "cones overlap"
        assert set(listed) == brute_irreducible(B, D)
        assert hilbert_series(B).coefficients(D) == irreducible_counts(B, D)
        assert cd.count_by_degree(D) == irreducible_counts(B, D)


# relations ---------------------------------------------------------------------

SIG_F = sig_xy("f")


def test_parse_relation():
    rel = parse_relation("f[x>=3, y]", SIG_F)
    assert rel.constraints == ((">=", 3), None)
    assert rel.matches(T(3, 0)) and rel.matches(T(5, 7)) and not rel.matches(T(2, 0))
    assert parse_relation("f", SIG_F).matches(T(9, 9))
    eq = parse_relation("f[x, y=0]", SIG_F)
    assert eq.matches(T(4, 0)) and not eq.matches(T(4, 1))
    for bad in ("g[x,y]", "f[x]", "f[y,x]", "f[x>3, y]"):
        with pytest.raises(ParseError):
            parse_relation(bad, SIG_F)


def test_relation_erases_terms():
    store = RelationStore()
    add_relation(store, parse_relation("f[x>=3, y]", SIG_F))
    assert list_relations(store) == ["f[x>=3, y]"]
    B = janet_like_basis([poly({(0, 1): 1, (0, 0): -1})], R)
    p = poly({(3, 0): 1, (1, 0): 2})
    assert inv_reduce(p, B, store) == poly({(1, 0): 2})
    assert inv_reduce(p, B) == inv_reduce(p, B, RelationStore()) == p


def test_relation_then_reduce_is_reduce_then_erase():
    rng = random.Random(19)
    for F, r in corpus(29, 20, m_max=1, n_max=2):
        B = janet_like_basis(F, r)
        sig = sig_xy("f") if r.n == 2 else None
        if sig is None:
            continue
        store = RelationStore()
        c = rng.randint(0, 3)
        add_relation(store, parse_relation(f"f[x>={c}, y]", sig))
        p = LinearPoly({Term(0, (rng.randint(0, 4), rng.randint(0, 4))): Q(rng.randint(1, 3))
                        for _ in range(4)}, Q)
        lhs = inv_reduce(p, B, store)
        rhs = B.normal_form(erase_relations(B.normal_form(p), store))
        assert lhs == rhs


def test_relation_removes_cone():
    B = janet_like_basis(two_eq()[:1], R)
    store = RelationStore()
    add_relation(store, parse_relation("f[x=0, y>=0]", SIG_F))
    assert residue_class_basis(B, store).cones == []
    # zero out a prefix of the ray only
    store = add_relation(RelationStore(), parse_relation("f[x, y=1]", SIG_F))
    cd = residue_class_basis(B, store)
    assert cd.cones == [(T(0, 0), ()), (T(0, 2), (1,))]
    assert hilbert_series(B, store).coefficients(4) == [1, 0, 1, 1, 1]


def test_relation_subtraction_random():
    rng = random.Random(37)
    D = 7
    for F, r in corpus(43, 15, n_max=2, m_max=1, deg_max=3):
        if r.n != 2:
            continue
        B = janet_like_basis(F, r)
        store = RelationStore()
        for _ in range(rng.randint(1, 2)):
            parts = []
            for name in ("x", "y"):
                kind = rng.choice(["", ">=", "="])
                parts.append(name if not kind else f"{name}{kind}{rng.randint(0, 3)}")
            add_relation(store, parse_relation(f"f[{', '.join(parts)}]", SIG_F))
        cd = residue_class_basis(B, store)
        listed = cd.terms(D)
        assert len(listed) == len(set(listed))
        expected = {t for t in brute_irreducible(B, D) if not store.matches(t)}
        assert set(listed) == expected
