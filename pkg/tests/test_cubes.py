import itertools
import math
from fractions import Fraction

import pytest

import oracles as O
from coxwalls.algebra import NAMED, Root, element_from_word, identity_element, named_matrix, reflection_element
from coxwalls.cubes import (
    Cube,
    WallSpace,
    bits,
    check_deep_cube_affine,
    co_hopf,
    constant_A_bound,
    constant_K,
    constant_K_from,
    cover_families,
    cube_from_pairwise,
    cubical_chamber_vertices,
    enumerate_2spherical_classes,
    is_subgroup_root,
    sigma_of_tuple,
    tuples_of_cube,
    vertex_ball,
    vertex_valid,
)
from coxwalls.chains import r_sequence
from coxwalls.errors import EpsilonUndefined, Not2Spherical, NotPairwiseCrossing


def r(M, *c):
    return Root.from_numbers(M, c)


def test_vertex_valid_examples():
    M = named_matrix("~A1")
    sp = WallSpace(M, 8)
    e = identity_element(M)
    assert vertex_valid(e, [], sp)
    assert not vertex_valid(e, [r(M, 1, 2)], sp)
    assert vertex_valid(e, [r(M, 0, 1), r(M, 1, 2)], sp)
    R = named_matrix("A1xA1")
    assert vertex_valid(identity_element(R), [r(R, 1, 0)], WallSpace(R, 3))


def test_flips_relative_to_base():
    M = named_matrix("~A1")
    sp = WallSpace(M, 8)
    w = element_from_word(M, [1])  # N(w) = {e2}
    assert vertex_valid(w, [], sp)
    assert vertex_valid(w, [r(M, 0, 1)], sp)  # back to the identity vertex
    assert not vertex_valid(w, [r(M, 2, 3)], sp)


@pytest.mark.parametrize("name", ["A2", "A1xA1", "B2"])
def test_finite_vertex_count_matches_orientation_oracle(name):
    sp = WallSpace(named_matrix(name), 4, ball_radius=3)
    consistent, _ = O.finite_orientations(NAMED[name])
    assert len(vertex_ball(sp, 10)) == consistent


def test_edge_wall_duality_and_metric():
    sp = WallSpace(named_matrix("~A2"), 10, ball_radius=4)
    V = sorted(vertex_ball(sp, 3))
    for F in V:
        for G in sp.neighbors(F):
            assert (F ^ G).bit_count() == 1
            assert sp.valid(G)
    # graph distance from the base vertex equals the flip count
    dist = {0: 0}
    frontier = [0]
    while frontier:
        nxt = []
        for F in frontier:
            for G in sp.neighbors(F):
                if G not in dist and G.bit_count() <= 3:
                    dist[G] = dist[F] + 1
                    nxt.append(G)
        frontier = nxt
    assert all(d == F.bit_count() for F, d in dist.items())


@pytest.mark.parametrize("name", ["RA3", "~A1xA1"])
def test_right_angled_vertices_are_cayley(name):
    sp = WallSpace(named_matrix(name), 8, ball_radius=6)
    assert vertex_ball(sp, 6) == sp.cayley


def test_pairs_agree_across_spaces():
    sp = WallSpace(named_matrix("~A2"), 10, ball_radius=4)
    V = vertex_ball(sp, 5)
    idx = [i for i in range(sp.n) if sp.inv.depths[i] <= 3]
    for a, b in itertools.combinations(idx, 2):
        combos = {((F >> a) & 1, (F >> b) & 1) for F in V}
        if (sp.cross[a] >> b) & 1:
            assert len(combos) == 4
        else:
            assert len(combos) <= 3


def test_cube_from_pairwise_examples():
    R = named_matrix("A1xA1")
    sp = WallSpace(R, 3)
    c = cube_from_pairwise([r(R, 1, 0), r(R, 0, 1)], sp)
    assert c.dim == 2 and set(c.corners()) == sp.cayley
    A2 = named_matrix("A2")
    sp = WallSpace(A2, 3, ball_radius=3)
    c = cube_from_pairwise([r(A2, 1, 0), r(A2, 0, 1)], sp)
    assert c.dim == 2 and c.is_valid(sp)
    M = named_matrix("~A1")
    with pytest.raises(NotPairwiseCrossing):
        cube_from_pairwise([r(M, 0, 1), r(M, 1, 2)], WallSpace(M, 6))


def test_cube_near_far_vertex_is_gate():
    sp = WallSpace(named_matrix("~A2"), 12, ball_radius=6)
    M = named_matrix("~A2")
    walls = [r(M, 1, 0, 0), r(M, 0, 1, 0)]
    far = sp.ball.masks[sp.ball.index(element_from_word(M, [2, 0, 1, 2]))]
    c = cube_from_pairwise(walls, sp, near=far)
    best = min(min((x ^ far).bit_count() for x in Cube(F0, c.walls).corners())
               for F0 in [c.corner])
    # brute force over all cubes on these walls inside the vertex ball
    V = vertex_ball(sp, 6)
    Mm = c.walls
    cands = [F for F in V if not F & Mm and Cube(F, Mm).is_valid(sp)]
    brute = min(min((x ^ far).bit_count() for x in Cube(F, Mm).corners()) for F in cands)
    assert best == brute


def test_triple_divergence_in_A2():
    A2 = named_matrix("A2")
    sp = WallSpace(A2, 3, ball_radius=3)
    c = cube_from_pairwise(sp.inv.roots, sp)
    assert c.dim == 3 and c.is_valid(sp)
    assert sum(F in sp.cayley for F in c.corners()) == 6


def test_cubical_chamber_radius_zero_and_growth():
    sp = WallSpace(named_matrix("~A2"), 16, ball_radius=0)
    assert cubical_chamber_vertices(sp, 0) == [0]
    sizes = [len(cubical_chamber_vertices(sp, k)) for k in range(1, 6)]
    assert sizes == [4, 10, 20, 35, 56]


def test_chamber_translation():
    M = named_matrix("~A2")
    sp = WallSpace(M, 14, ball_radius=4)
    w = element_from_word(M, [0, 1])
    V = cubical_chamber_vertices(sp, 2, v0=w)
    Nw = sp.ball.masks[sp.ball.index(w)]
    assert Nw in V and all(sp.valid(F) for F in V)


def test_constant_K_closed_form():
    half = Fraction(1, 2)
    K = constant_K_from(3, half, 1, half)
    assert r_sequence(K, half, half) > Fraction(3, 2)
    assert not r_sequence(K - 1, half, half) > Fraction(3, 2)
    assert constant_K(named_matrix("A1")).value == 0
    with pytest.raises(EpsilonUndefined):
        constant_K(named_matrix("~A2"))


def test_A_bound():
    b = constant_A_bound(5, 3)
    assert b.K_prime == math.comb(14 + 4 - 2, 13) and b.A == b.K_prime + 1
    assert b.to_json()["label"] == "upper bound, not exact"


def test_deep_check_touching_cube():
    A2 = named_matrix("A2")
    sp = WallSpace(A2, 3, ball_radius=3)
    c = cube_from_pairwise([r(A2, 1, 0)], sp)
    rep = check_deep_cube_affine(c, sp, 1)
    assert rep.distance == 0 and not rep.claim
    assert rep.to_json()["note"] == "distance below threshold, no claim"


def test_sigma_of_tuples():
    R = named_matrix("A1xA1")
    sp = WallSpace(R, 3, ball_radius=3)
    s1, s2 = element_from_word(R, [0]), element_from_word(R, [1])
    c, d = sigma_of_tuple([s1, s2], sp)
    assert c.dim == 2 and d == 0
    c, d = sigma_of_tuple([s1], sp)
    assert c.dim == 1 and sp.roots_of(c.walls) == [r(R, 1, 0)]
    A2 = named_matrix("A2")
    sp = WallSpace(A2, 3, ball_radius=3)
    c, d = sigma_of_tuple([element_from_word(A2, [0]), element_from_word(A2, [1])], sp)
    assert set(sp.roots_of(c.walls)) == {r(A2, 1, 0), r(A2, 0, 1)}


def test_tuples_of_cube():
    R = named_matrix("A1xA1")
    sp = WallSpace(R, 3, ball_radius=3)
    s1, s2 = element_from_word(R, [0]), element_from_word(R, [1])
    edge = cube_from_pairwise([r(R, 1, 0)], sp)
    assert tuples_of_cube(edge, sp) == [frozenset({s1})]
    sq = cube_from_pairwise([r(R, 1, 0), r(R, 0, 1)], sp)
    assert set(tuples_of_cube(sq, sp)) == {frozenset({s1, s2}), frozenset({s1})}


@pytest.mark.parametrize("n", [1, 2, 3])
def test_cover_counts_against_brute_force(n):
    assert len(cover_families(n)) == O.count_covers(n)


def test_subgroup_root_membership():
    M = named_matrix("~A1")
    system = [r(M, 0, 1), r(M, 2, 1)]
    assert is_subgroup_root(r(M, 2, 3), system)
    assert is_subgroup_root(r(M, 4, 5), system)
    assert not is_subgroup_root(r(M, 1, 2), system)


@pytest.mark.parametrize("name,depth,count", [("A2", 3, 2), ("A1xA1", 3, 3), ("A1", 2, 1)])
def test_class_counts(name, depth, count):
    assert len(enumerate_2spherical_classes(named_matrix(name), depth).classes) == count


def test_classes_affine_excluded():
    rep = enumerate_2spherical_classes(named_matrix("~A2"), 4)
    assert rep.excluded_affine > 0
    assert len(rep.classes) == 4  # baseline: one A1 class, three A2 vertex stabilizers
    assert all("~" not in c.type_name for c in rep.classes)


def test_co_hopf_examples():
    assert not co_hopf(named_matrix("~A2")).co_hopfian
    assert co_hopf(named_matrix("~A2")).affine_components == [[0, 1, 2]]
    assert co_hopf(named_matrix("237")).co_hopfian
    assert co_hopf(named_matrix("A2")).co_hopfian
    with pytest.raises(Not2Spherical):
        co_hopf(named_matrix("~A1"))
