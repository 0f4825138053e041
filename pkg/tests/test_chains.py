import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from coxwalls.algebra import Root, named_matrix
from coxwalls.chains import (
    check_ladder,
    classify_chain,
    classify_dihedral_pair,
    constant_L,
    estimate_epsilon,
    hyperbolic_distance,
    maximally_convex_chain,
    parabolic_closure_finite,
    r_sequence,
    root_interval,
    validate_chain,
)
from coxwalls.algebra import element_from_word
from coxwalls.errors import BadParameters, HypothesisViolated, InvalidChain
from coxwalls.roots import enumerate_roots
from coxwalls.scalar import field


def r(M, *c):
    return Root.from_numbers(M, c)


def test_interval_affine_line():
    M = named_matrix("~A1")
    iv = root_interval(r(M, 0, 1), r(M, 2, 3))
    assert iv == [r(M, 0, 1), r(M, 1, 2), r(M, 2, 3)]


def test_invalid_chain():
    M = named_matrix("~A1")
    with pytest.raises(InvalidChain):
        validate_chain([r(M, 1, 2), r(M, 0, 1)])


def test_affine_chain_alternative_two():
    M = named_matrix("~A1")
    v = classify_chain([r(M, 0, 1), r(M, 1, 2), r(M, 2, 3)])
    assert v.alternative == 2
    assert v.value == 1
    assert {x for x in v.dihedral_witness} == {r(M, 1, 0), r(M, 0, 1)}
    assert v.affine_parabolic.types[0][2] == "~A1"


def test_epsilon_undefined_for_affine():
    assert not estimate_epsilon(named_matrix("~A1"), 8).defined
    assert not estimate_epsilon(named_matrix("~A2"), 6).defined


def test_epsilon_237_baseline():
    e = estimate_epsilon(named_matrix("237"), 6)
    assert e.value.exact() == ["-3/2", "0", "1/2"]
    assert float(e.value) == pytest.approx(0.12348980185873353, abs=1e-14)


def test_r_sequence_closed_form():
    assert r_sequence(0, Fraction(1, 2), Fraction(1, 2)) == 1
    eps, kap = Fraction(1, 2), Fraction(1, 2)
    for n in (1, 4, 10, 100):
        D = 1 + 2 * float(eps) * (1 - float(kap)) * n
        ref = min(-1 + math.sqrt(D), (5 + math.sqrt(D)) / 4)
        assert float(r_sequence(n, eps, kap)) == pytest.approx(ref, rel=1e-12)
    with pytest.raises(BadParameters):
        r_sequence(3, 0, Fraction(1, 2))
    with pytest.raises(BadParameters):
        r_sequence(3, Fraction(1, 2), 1)


@given(st.integers(1, 500), st.fractions(Fraction(1, 100), 2), st.fractions(0, Fraction(99, 100)))
def test_r_sequence_monotone(n, eps, kap):
    assert r_sequence(n + 1, eps, kap) >= r_sequence(n, eps, kap)


def test_constant_L_values():
    assert constant_L(Fraction(1, 2), 1, None) == 2
    s2 = field(8).two_cos(1)  # sqrt 2
    assert float(constant_L(s2 / 2, s2, Fraction(1, 2))) == pytest.approx(
        max(2, 2 * 0.5 ** 0.5 * 2 ** 0.5 / (1 - 0.5 ** 0.5), (8 * 0.5 * 2 - 4 * 1) / (0.5 * (1 - 0.5 ** 0.5))))


def test_hyperbolic_distance():
    x, d = hyperbolic_distance(Fraction(5, 4))
    assert x == 2 and d == pytest.approx(math.log(2))


def test_parabolic_closure_finite():
    M = named_matrix("B3")
    pc = parabolic_closure_finite([element_from_word(M, [1, 0, 1])])
    assert pc.conjugator.word == (1,) and pc.generators == (0,)
    A2 = named_matrix("A2")
    assert parabolic_closure_finite([element_from_word(A2, [0, 1])]).generators == (0, 1)


def test_dihedral_pair_kinds():
    M = named_matrix("~A2")
    assert classify_dihedral_pair(r(M, 1, 0, 0), r(M, 0, 1, 0))["kind"] == "finite"
    out = classify_dihedral_pair(r(M, 1, 0, 0), r(M, 2, 1, 1))
    assert out["kind"] == "affine_closure" and out["closure_affine"]


def test_maximal_chain_longest():
    M = named_matrix("~A2")
    inv = enumerate_roots(M, 8)
    a, b = r(M, 1, 0, 0), r(M, 3, 2, 2)
    ch = maximally_convex_chain(a, b, inv)
    assert ch.roots[0] == a and ch.roots[-1] == b
    validate_chain(ch.roots, inv)


def test_ladder_affine_triangle():
    M = named_matrix("~A2")
    mu, mup = r(M, 1, 0, 0), r(M, 0, 1, 0)
    walls = [r(M, 1, 1, 0)] + [r(M, i, i, i + 1) for i in range(10)]
    rep = check_ladder(mu, mup, walls)
    assert rep.L == 2 and rep.exceeds_L
    assert rep.euclidean_triangle and rep.closure_affine
    short = check_ladder(mu, mup, walls[:2])
    assert not short.exceeds_L and short.to_json()["note"]
    with pytest.raises(HypothesisViolated) as exc:
        check_ladder(mu, mup, [walls[0], walls[3], walls[1], walls[2]])
    assert exc.value.index == 2


def test_interval_sorted_innermost_first_for_negative_inner_root():
    # -(a2+a3) sits inside zeta(a1) in ~A2 but is enumerated after it
    M = named_matrix("~A2")
    inv = enumerate_roots(M, 6)
    a, b = -Root.from_numbers(M, [0, 1, 1]), Root.from_numbers(M, [1, 0, 0])
    assert root_interval(a, b, inv) == [a, b]
    assert maximally_convex_chain(a, b, inv).roots == [a, b]


def test_r_100_matches_closed_form_value():
    v = float(r_sequence(100, Fraction(1, 2), Fraction(1, 2)))
    assert v == pytest.approx(1 + 25 / (2 * math.sqrt(51) - 2), rel=1e-12)
    assert round(v, 4) == 3.0354
