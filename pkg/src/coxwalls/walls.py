"""Half-spaces, wall pairs, combinatorial distances and separating walls.

A root a stands for the half-space zeta(a); positive roots are the half-spaces
containing the base chamber C, and a wall is represented by its positive root.
Chamber w.C lies in zeta(a) iff w^-1 a is positive.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

import networkx as nx

from .algebra import (
    CoxeterMatrix,
    GroupElement,
    Root,
    _left_gen,
    _right_gen,
    bilinear_form,
    identity_element,
    reflection_element,
)
from .errors import (
    InvariantViolation,
    OutOfInventory,
    PreconditionFailed,
    SameWall,
    SearchExhausted,
)
from .roots import RootInventory, canonical_simple_system, coxeter_matrix_of_roots, depth_of, enumerate_roots

# ---------------------------------------------------------------------------
# chamber balls


class ChamberBall:
    """Chambers w.C with l(w) <= radius, in ShortLex order.

    Each chamber carries the bitmask (over inventory indices) of the walls
    separating it from C, so that d(x, y) = popcount(mask_x ^ mask_y).
    """

    def __init__(self, matrix: CoxeterMatrix, radius: int, inv: RootInventory | None = None) -> None:
        # walls bounding the outermost chambers have depth radius + 1
        if inv is None or (not inv.stabilized and (inv.depth_limit or 0) <= radius):
            inv = enumerate_roots(matrix, radius + 1)
        self.matrix = matrix
        self.radius = radius
        self.inv = inv
        e = identity_element(matrix)
        self.elements: list[GroupElement] = [e]
        self.masks: list[int] = [0]
        self.lookup: dict[int, int] = {0: 0}
        self.nbr: list[list[int | None]] = []
        frontier = [0]
        for _ in range(radius):
            nxt = []
            for x in frontier:
                g = self.elements[x]
                for s in range(matrix.rank):
                    col = Root(matrix, [row[s] for row in g.mat])
                    if not col.is_positive():
                        continue
                    bit = 1 << inv.index_of(col)
                    m = self.masks[x] | bit
                    if m in self.lookup:
                        continue
                    h = GroupElement(matrix, g.word + (s,), _right_gen(matrix, g.mat, s),
                                     _left_gen(matrix, g.inv, s))
                    self.lookup[m] = len(self.elements)
                    self.elements.append(h)
                    self.masks.append(m)
                    nxt.append(self.lookup[m])
            frontier = nxt
        for x, g in enumerate(self.elements):
            row: list[int | None] = []
            for s in range(matrix.rank):
                col = Root(matrix, [r[s] for r in g.mat])
                m = self.masks[x] ^ (1 << inv.index_of(col.positive()))
                row.append(self.lookup.get(m))
            self.nbr.append(row)

    def __len__(self) -> int:
        return len(self.elements)

    def index(self, g: GroupElement) -> int:
        for i, h in enumerate(self.elements):
            if h == g:
                return i
        raise OutOfInventory(f"{g} lies outside the chamber ball")

    def in_halfspace(self, x: int, a: Root) -> bool:
        i, sg = self.inv.signed_index(a)
        inside_positive = not (self.masks[x] >> i) & 1
        return inside_positive if sg > 0 else not inside_positive

    def halfspace_mask(self, a: Root) -> list[int]:
        return [x for x in range(len(self.elements)) if self.in_halfspace(x, a)]

    def dist(self, x: int, y: int) -> int:
        return (self.masks[x] ^ self.masks[y]).bit_count()

    def walls_between(self, x: int, y: int) -> list[int]:
        m = self.masks[x] ^ self.masks[y]
        return [i for i in range(m.bit_length()) if (m >> i) & 1]


def chamber_side(w: GroupElement, h: Root) -> bool:
    """True iff the chamber w.C lies in the half-space zeta(h)."""
    return w.act_inverse(h).is_positive()


# ---------------------------------------------------------------------------
# pairs of half-spaces


@dataclass(frozen=True)
class WallPairClass:
    """Relation of two half-spaces with distinct walls.

    kind is 'cross', 'nested' (inner strictly inside outer), 'disjoint'
    (empty intersection) or 'cover' (the union is everything, i.e. the
    complements are disjoint).
    """

    kind: str
    inner: Root | None = None
    outer: Root | None = None

    def to_json(self) -> dict:
        out: dict = {"kind": self.kind}
        if self.inner is not None:
            out["inner"] = self.inner.to_json()
            out["outer"] = self.outer.to_json()
        return out


def _depth(a: Root, inv: RootInventory | None) -> int:
    if inv is not None and a in inv.index:
        return inv.depths[inv.index[a]]
    return depth_of(a)


def _nested_inner_is_first(a: Root, b: Root, inv: RootInventory | None) -> bool:
    """For (a, b) >= 1 with a != b: whether zeta(a) is inside zeta(b)."""
    pa, pb = a.is_positive(), b.is_positive()
    if pa and pb:
        da, db = _depth(a, inv), _depth(b, inv)
        if da == db:
            raise InvariantViolation("nested positive roots of equal depth")
        return da < db
    if not pa and not pb:
        da, db = _depth(-a, inv), _depth(-b, inv)
        if da == db:
            raise InvariantViolation("nested negative roots of equal depth")
        return da > db
    # the half-space containing C cannot sit inside one that misses it
    return not pa


def classify_wall_pair(a: Root, b: Root, inv: RootInventory | None = None) -> WallPairClass:
    """Cross / nested / disjoint / cover for the half-spaces zeta(a), zeta(b)."""
    if a == b or a == -b:
        raise SameWall("the two roots define the same wall")
    v = bilinear_form(a, b)
    if v.__abs__() < 1:
        return WallPairClass("cross")
    if v >= 1:
        if _nested_inner_is_first(a, b, inv):
            return WallPairClass("nested", a, b)
        return WallPairClass("nested", b, a)
    # zeta(a) and zeta(-b) are nested
    if _nested_inner_is_first(a, -b, inv):
        return WallPairClass("disjoint")
    return WallPairClass("cover")


def halfspace_contains(x: Root, y: Root, inv: RootInventory | None = None) -> bool:
    """zeta(x) is a subset of zeta(y)."""
    if x == y:
        return True
    if x == -y:
        return False
    c = classify_wall_pair(x, y, inv)
    return c.kind == "nested" and c.inner == x


def walls_parallel(a: Root, b: Root) -> bool:
    return not abs(bilinear_form(a, b)) < 1


# ---------------------------------------------------------------------------
# distances and projections


def _ball_for(matrix: CoxeterMatrix, radius: int, inv: RootInventory | None, ball: ChamberBall | None) -> ChamberBall:
    if ball is not None and ball.radius >= radius:
        return ball
    return ChamberBall(matrix, radius, inv)


def halfspace_distance(
    a: Root, b: Root, search_depth: int, ball: ChamberBall | None = None
) -> int:
    """min d(x, y) over chambers x in zeta(a), y in zeta(b), within the search ball."""
    cls = classify_wall_pair(a, b) if a != -b else WallPairClass("disjoint")
    if cls.kind != "disjoint":
        raise PreconditionFailed(f"half-spaces are not disjoint ({cls.kind})")
    bl = _ball_for(a.matrix, search_depth, None, ball)
    return _min_distance(bl, a, b)[0]


def _boundary(bl: ChamberBall, a: Root) -> list[int]:
    """Chambers of zeta(a) in the ball adjacent to its wall."""
    i, _ = bl.inv.signed_index(a)
    bit = 1 << i
    out = []
    for x in range(len(bl)):
        if bl.in_halfspace(x, a):
            for y in bl.nbr[x]:
                if y is not None and (bl.masks[x] ^ bl.masks[y]) == bit:
                    out.append(x)
                    break
    return out


def _min_distance(bl: ChamberBall, a: Root, b: Root) -> tuple[int, int, int]:
    xs, ys = _boundary(bl, a), _boundary(bl, b)
    if not xs or not ys:
        raise SearchExhausted("search ball does not reach both walls")
    best = None
    for x in xs:
        mx = bl.masks[x]
        for y in ys:
            d = (mx ^ bl.masks[y]).bit_count()
            if best is None or d < best[0]:
                best = (d, x, y)
    return best


def project_to_halfspace(h: Root, x: GroupElement, ball: ChamberBall | None = None) -> GroupElement:
    """Chamber of zeta(h) nearest to x.C (ShortLex-least among the nearest)."""
    if chamber_side(x, h):
        raise PreconditionFailed("the chamber already lies in the half-space")
    radius = 2 * x.length + depth_of(h.positive())
    bl = _ball_for(x.matrix, radius, None, ball)
    xi = bl.index(x)
    best = None
    for y in range(len(bl)):
        if bl.in_halfspace(y, h):
            d = bl.dist(xi, y)
            if best is None or d < best[0]:
                best = (d, y)
    if best is None:
        raise SearchExhausted("no chamber of the half-space inside the search ball")
    return bl.elements[best[1]]


# ---------------------------------------------------------------------------
# separation


@dataclass
class SeparationReport:
    pair_class: WallPairClass
    away: tuple[Root, Root]
    distance: int
    separator: Root | None
    gallery_ends: tuple[GroupElement, GroupElement]
    certificate: dict

    def to_json(self) -> dict:
        return {
            "pair_class": self.pair_class.to_json(),
            "distance": self.distance,
            "separator": self.separator.to_json() if self.separator is not None else None,
            "certificate": self.certificate,
        }


def opposite_halfspaces(m1: Root, m2: Root, inv: RootInventory | None = None) -> tuple[Root, Root]:
    """Disjoint half-spaces bounded by two parallel walls (m1's side first)."""
    p1, p2 = m1.positive(), m2.positive()
    for s1, s2 in ((1, 1), (1, -1), (-1, 1), (-1, -1)):
        a, b = (p1 if s1 > 0 else -p1), (p2 if s2 > 0 else -p2)
        if classify_wall_pair(a, b, inv).kind == "disjoint":
            return a, b
    raise PreconditionFailed("walls cross")


def separates(c: Root, a: Root, b: Root, inv: RootInventory | None = None) -> Root | None:
    """For disjoint zeta(a), zeta(b): the side c' of wall c with zeta(a) < zeta(c'), zeta(b) < zeta(-c')."""
    cp = c.positive()
    for cc in (cp, -cp):
        if cc == a or cc == -a or cc == b or cc == -b:
            return None
        ka = classify_wall_pair(a, cc, inv)
        kb = classify_wall_pair(b, -cc, inv)
        if ka.kind == "nested" and ka.inner == a and kb.kind == "nested" and kb.inner == b:
            return cc
    return None


def find_separating_wall(
    m1: Root, m2: Root, search_depth: int, ball: ChamberBall | None = None
) -> SeparationReport:
    """A wall strictly between two parallel walls, searched along a minimal gallery."""
    bl = _ball_for(m1.matrix, search_depth, None, ball)
    inv = bl.inv
    if m1.positive() == m2.positive():
        raise SameWall("the two walls coincide")
    cls = classify_wall_pair(m1.positive(), m2.positive(), inv)
    if cls.kind == "cross":
        raise PreconditionFailed("walls cross")
    a, b = opposite_halfspaces(m1, m2, inv)
    d, x, y = _min_distance(bl, a, b)
    sep = None
    for i in bl.walls_between(x, y):
        c = inv.roots[i]
        side = separates(c, a, b, inv)
        if side is not None:
            sep = side
            break
    cert: dict = {"from": list(bl.elements[x].word), "to": list(bl.elements[y].word)}
    if sep is not None:
        cert["checked_chambers"] = len(bl)
        cert["strict"] = _certify(bl, a, b, sep)
        if not cert["strict"]:
            raise InvariantViolation("separator failed its chamber-side certificate")
    return SeparationReport(cls, (a, b), d, sep, (bl.elements[x], bl.elements[y]), cert)


def _certify(bl: ChamberBall, a: Root, b: Root, c: Root) -> bool:
    """Chamber-side check over the ball: zeta(a) inside zeta(c), zeta(b) outside."""
    seen_between = False
    for x in range(len(bl)):
        ina, inb, inc = bl.in_halfspace(x, a), bl.in_halfspace(x, b), bl.in_halfspace(x, c)
        if ina and not inc:
            return False
        if inb and inc:
            return False
        if not ina and not inb:
            seen_between = True
    return seen_between


@dataclass
class QEstimate:
    value: int
    witness: tuple[Root, Root] | None
    pairs_checked: int
    separated: int
    unseparated: list[tuple[int, int, int]]

    def to_json(self) -> dict:
        return {
            "Q_hat": self.value,
            "witness": [r.to_json() for r in self.witness] if self.witness else None,
            "parallel_pairs": self.pairs_checked,
            "separated_pairs": self.separated,
        }


def parallel_pairs(inv: RootInventory, depth: int) -> list[tuple[int, int]]:
    idx = [i for i in range(len(inv)) if inv.depths[i] <= depth]
    return [(i, j) for i, j in itertools.combinations(idx, 2) if not inv.abs_form_lt_one(i, j)]


def estimate_Q(matrix: CoxeterMatrix, search_depth: int, margin: int = 2,
               inv: RootInventory | None = None) -> QEstimate:
    """Largest distance between parallel walls of depth <= search_depth with no separator."""
    radius = search_depth + margin
    bl = ChamberBall(matrix, radius, inv)
    inv = bl.inv
    best, wit = 0, None
    pairs = parallel_pairs(inv, search_depth)
    sep_count = 0
    unsep = []
    for i, j in pairs:
        rep = find_separating_wall(inv.roots[i], inv.roots[j], radius, bl)
        if rep.separator is not None:
            sep_count += 1
            continue
        unsep.append((i, j, rep.distance))
        if rep.distance > best:
            best, wit = rep.distance, (inv.roots[i], inv.roots[j])
    return QEstimate(best, wit, len(pairs), sep_count, unsep)


def crossing_graph(inv: RootInventory, depth: int) -> nx.Graph:
    G = nx.Graph()
    idx = [i for i in range(len(inv)) if inv.depths[i] <= depth]
    G.add_nodes_from(idx)
    for i, j in itertools.combinations(idx, 2):
        if inv.abs_form_lt_one(i, j):
            G.add_edge(i, j)
    return G


def max_crossing_clique(matrix: CoxeterMatrix, search_depth: int,
                        inv: RootInventory | None = None) -> tuple[int, list[int]]:
    """Size (and members) of a largest set of pairwise crossing walls of depth <= search_depth."""
    if inv is None or (not inv.stabilized and (inv.depth_limit or 0) < search_depth):
        inv = enumerate_roots(matrix, search_depth)
    G = crossing_graph(inv, search_depth)
    best: list[int] = []
    for c in nx.find_cliques(G):
        c = sorted(c)
        if len(c) > len(best) or (len(c) == len(best) and c < best):
            best = c
    return len(best), best


# ---------------------------------------------------------------------------
# a wall against an infinite dihedral family


@dataclass
class DihedralVerdict:
    kind: str  # centralizes | euclidean_triangle | partial | violation
    crossings: int
    generators: list[Root]

    def to_json(self) -> dict:
        return {"kind": self.kind, "crossings": self.crossings,
                "generators": [g.to_json() for g in self.generators]}


def classify_wall_vs_dihedral(m: Root, M: Sequence[Root], inv: RootInventory, threshold: int = 8) -> DihedralVerdict:
    """Crossings of m with a pairwise parallel family M and the resulting dichotomy."""
    M = [x.positive() for x in M]
    for x, y in itertools.combinations(M, 2):
        if abs(bilinear_form(x, y)) < 1:
            raise PreconditionFailed("walls of M are not pairwise parallel")
    cs = canonical_simple_system(inv, M)
    gens = cs.roots
    if len(gens) != 2 or not bilinear_form(gens[0], gens[1]) <= -1:
        raise PreconditionFailed("W(M) is not infinite dihedral")
    k = sum(1 for x in M if abs(bilinear_form(m, x)) < 1)
    if k < threshold:
        return DihedralVerdict("partial", k, gens)
    rm = reflection_element(m)
    if all(rm * reflection_element(g) == reflection_element(g) * rm for g in gens):
        return DihedralVerdict("centralizes", k, gens)
    cs2 = canonical_simple_system(inv, list(gens) + [m.positive()])
    if len(cs2.roots) == 3:
        from .algebra import diagram_type, ComponentType

        cm = coxeter_matrix_of_roots(cs2.roots)
        try:
            kind, _ = diagram_type(cm)
        except Exception:
            kind = None
        if kind is ComponentType.AFFINE:
            return DihedralVerdict("euclidean_triangle", k, cs2.roots)
    return DihedralVerdict("violation", k, cs2.roots)
