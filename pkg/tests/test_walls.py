import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles as O
from coxwalls.algebra import NAMED, Root, element_from_word, named_matrix
from coxwalls.errors import PreconditionFailed, SameWall
from coxwalls.roots import enumerate_roots
from coxwalls.walls import (
    ChamberBall,
    classify_wall_pair,
    estimate_Q,
    find_separating_wall,
    halfspace_contains,
    halfspace_distance,
    max_crossing_clique,
    project_to_halfspace,
)


def r(M, *c):
    return Root.from_numbers(M, c)


def test_wall_pair_classes_affine_line():
    M = named_matrix("~A1")
    assert classify_wall_pair(r(M, 0, 1), r(M, 1, 2)).kind == "nested"
    assert classify_wall_pair(r(M, 0, 1), r(M, 1, 2)).inner == r(M, 0, 1)
    assert classify_wall_pair(r(M, 0, -1), r(M, 1, 2)).kind == "cover"
    assert classify_wall_pair(r(M, 0, 1), r(M, -1, -2)).kind == "disjoint"
    assert classify_wall_pair(r(M, 1, 0), r(M, 0, 1)).kind == "cover"
    with pytest.raises(SameWall):
        classify_wall_pair(r(M, 0, 1), r(M, 0, -1))


def test_ball_distance_is_word_metric():
    M = named_matrix("~A2")
    bl = ChamberBall(M, 4)
    for x in range(0, len(bl), 3):
        for y in range(0, len(bl), 5):
            g = bl.elements[x].inverse() * bl.elements[y]
            assert bl.dist(x, y) == len(g.word)


def test_distances_affine_line():
    M = named_matrix("~A1")
    assert halfspace_distance(r(M, 0, 1), r(M, -2, -3), 8) == 3
    assert halfspace_distance(r(M, 0, 1), r(M, 0, -1), 8) == 1
    with pytest.raises(PreconditionFailed):
        halfspace_distance(r(M, 0, 1), r(M, 1, 2), 8)


def test_projection_fixed_inside():
    M = named_matrix("~A2")
    x = element_from_word(M, [0, 1, 2])
    h = r(M, 1, 0, 0)
    assert not x.act_inverse(h).is_positive()
    p = project_to_halfspace(h, x)
    assert p.act_inverse(h).is_positive()
    bl = ChamberBall(M, 7)
    best = min(len((x.inverse() * y).word) for y in bl.elements if y.act_inverse(h).is_positive())
    assert len((x.inverse() * p).word) == best
    with pytest.raises(PreconditionFailed):
        project_to_halfspace(h, p)


def test_separator_affine_line():
    M = named_matrix("~A1")
    rep = find_separating_wall(r(M, 0, 1), r(M, 2, 3), 8)
    assert rep.separator is not None and rep.separator.positive() == r(M, 1, 2)
    assert rep.certificate["strict"]
    rep = find_separating_wall(r(M, 0, 1), r(M, 1, 2), 8)
    assert rep.separator is None and rep.distance == 2


@pytest.mark.parametrize("name", ["~A2", "237"])
def test_unseparated_pairs_have_no_separator_by_exhaustion(name):
    inv = enumerate_roots(named_matrix(name), 6)
    q = estimate_Q(named_matrix(name), 4, inv=inv)
    cands = [np.array(x.floats()) for x in inv.roots]
    for i, j, _ in q.unseparated[:12]:
        a, b = inv.roots[i], inv.roots[j]
        cls = classify_wall_pair(a, b, inv)
        if cls.kind == "nested":
            x, y = -cls.inner, cls.outer
        else:
            x, y = -a, -b  # cover: the complements are disjoint
        seps = O.separating_walls(NAMED[name], np.array(x.floats()), np.array(y.floats()),
                                  [c for k, c in enumerate(cands) if k not in (i, j)], 10)
        assert seps == []


@given(st.integers(0, 30), st.integers(0, 30))
def test_containment_agrees_with_chamber_oracle(i, j):
    M = named_matrix("~A2")
    inv = enumerate_roots(M, 4)
    a, b = inv.roots[i % len(inv)], inv.roots[j % len(inv)]
    for x, y in ((a, b), (-a, b), (a, -b)):
        if x == y or x == -y:
            continue
        assert halfspace_contains(x, y, inv) == O.containment(NAMED["~A2"], np.array(x.floats()), np.array(y.floats()), 14)


def test_crossing_cliques():
    assert max_crossing_clique(named_matrix("A2"), 3)[0] == 3
    assert max_crossing_clique(named_matrix("~A1"), 6)[0] == 1
    assert max_crossing_clique(named_matrix("~A2"), 5)[0] == 3


def test_q_hat_affine_line_is_two():
    # parallel walls of ~A1 two apart, e.g. e2 and e1 + 2 e2, have no wall strictly between
    assert estimate_Q(named_matrix("~A1"), 5).value == 2
