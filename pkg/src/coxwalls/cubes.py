"""Desk-scale model of the Niblo-Reeves cube complex.

A vertex is an orientation of every wall; it is stored as the finite set F of
positive roots beta whose chosen half-space is zeta(-beta) (the side away from
the base chamber C).  Orientations are consistent when no two chosen
half-spaces are disjoint, which for F reads:

* F is down-closed: if zeta(g) < zeta(b) with b in F then g is in F;
* no b, g in F have (b, g) <= -1.

The Cayley vertex w has F = N(w), the walls separating C from w.C.  Sets are
bitmasks over the indices of a root inventory.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import networkx as nx

from .algebra import (
    ComponentType,
    CoxeterMatrix,
    GroupElement,
    Root,
    bilinear_form,
    component_types,
    element_order,
    reflection_element,
    simple_root,
)
from .chains import (
    _group_closure,
    estimate_epsilon,
    parabolic_closure_finite,
    r_sequence,
)
from .errors import (
    EpsilonUndefined,
    Not2Spherical,
    NotFinite,
    NotPairwiseCrossing,
    OutOfInventory,
    ResourceLimit,
    SearchExhausted,
)
from .roots import (
    RootInventory,
    canonical_simple_system,
    constant_kappa,
    constant_lambda_max,
    coxeter_matrix_of_roots,
    enumerate_roots,
    parabolic_roots,
)
from .scalar import cos_pi_over, to_scalar
from .walls import ChamberBall, max_crossing_clique


def bits(x: int) -> Iterator[int]:
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def popcount(x: int) -> int:
    return x.bit_count()


# ---------------------------------------------------------------------------
# the wall space


class WallSpace:
    """Inventory-backed relations between walls plus a ball of Cayley vertices."""

    def __init__(self, matrix: CoxeterMatrix, depth: int, ball_radius: int | None = None,
                 inv: RootInventory | None = None) -> None:
        if inv is None or (not inv.stabilized and (inv.depth_limit or 0) < depth):
            inv = enumerate_roots(matrix, depth)
        self.matrix = matrix
        self.inv = inv
        self.depth = depth
        n = len(inv)
        self.n = n
        self.inner = [0] * n   # roots g with zeta(g) strictly inside zeta(b)
        self.outer = [0] * n
        self.apart = [0] * n   # (b, g) <= -1
        self.cross = [0] * n
        for i, j in itertools.combinations(range(n), 2):
            rel = inv.relation(i, j)
            if rel == "cross":
                self.cross[i] |= 1 << j
                self.cross[j] |= 1 << i
            elif rel == "apart":
                self.apart[i] |= 1 << j
                self.apart[j] |= 1 << i
            else:
                lo, hi = (i, j) if inv.depths[i] < inv.depths[j] else (j, i)
                self.inner[hi] |= 1 << lo
                self.outer[lo] |= 1 << hi
        self.simple = 0
        for s in range(matrix.rank):
            self.simple |= 1 << inv.index_of(simple_root(matrix, s))
        radius = ball_radius if ball_radius is not None else max(0, min(depth - 1, depth // 2 + 2))
        if radius >= depth and not inv.stabilized:
            raise ResourceLimit("Cayley ball radius must stay below the inventory depth")
        self.ball = ChamberBall(matrix, radius, inv)
        self.cayley = set(self.ball.masks)

    # vertices ---------------------------------------------------------------

    def valid(self, F: int) -> bool:
        for b in bits(F):
            if self.inner[b] & ~F or self.apart[b] & F:
                return False
        return True

    def addable(self, F: int) -> list[int]:
        out = []
        for b in range(self.n):
            if not (F >> b) & 1 and not self.inner[b] & ~F and not self.apart[b] & F:
                out.append(b)
        return out

    def removable(self, F: int) -> list[int]:
        return [b for b in bits(F) if not self.outer[b] & F]

    def neighbors(self, F: int) -> list[int]:
        return [F | (1 << b) for b in self.addable(F)] + [F & ~(1 << b) for b in self.removable(F)]

    def distance_to_cayley(self, F: int) -> tuple[int, GroupElement]:
        best = None
        for k, m in enumerate(self.ball.masks):
            d = popcount(F ^ m)
            if best is None or d < best[0]:
                best = (d, k)
        return best[0], self.ball.elements[best[1]]

    def mask_of(self, roots: Iterable[Root]) -> int:
        m = 0
        for r in roots:
            m |= 1 << self.inv.index_of(r.positive())
        return m

    def roots_of(self, mask: int) -> list[Root]:
        return [self.inv.roots[i] for i in bits(mask)]

    def translate(self, w: GroupElement, F: int) -> int:
        """Flip set of w.v for the vertex v with flip set F."""
        Nw = self.ball.masks[self.ball.index(w)]
        out = 0
        for b in bits(F):
            out |= 1 << self.inv.index_of(w.act(self.inv.roots[b]).positive())
        return out ^ Nw

    # sets of pairwise crossing walls -----------------------------------------

    def pairwise_crossing(self, M: int) -> bool:
        ms = list(bits(M))
        return all((self.cross[a] >> b) & 1 for a, b in itertools.combinations(ms, 2))

    def forced(self, M: int) -> tuple[int, int]:
        """(walls every cube on M flips, walls it never flips) among inventory roots."""
        fin = 0
        par = 0
        for b in bits(M):
            fin |= self.inner[b]
            par |= self.inner[b] | self.outer[b] | self.apart[b]
        return fin, par & ~fin & ~M

    def carrier_distance(self, M: int) -> tuple[int, GroupElement]:
        """min over Cayley vertices of the distance to a cube c with M(c) = M."""
        fin, fout = self.forced(M)
        best = None
        for k, m in enumerate(self.ball.masks):
            d = popcount(fin & ~m) + popcount(m & fout)
            if best is None or d < best[0]:
                best = (d, k)
        return best[0], self.ball.elements[best[1]]


# ---------------------------------------------------------------------------
# vertices and cubes


@dataclass(frozen=True)
class CubeVertex:
    flips: int  # flip set relative to the base chamber C

    def roots(self, space: WallSpace) -> list[Root]:
        return space.roots_of(self.flips)

    def to_json(self, space: WallSpace) -> dict:
        d, w = space.distance_to_cayley(self.flips)
        return {"flips": [r.to_json() for r in self.roots(space)], "base": list(w.word),
                "distance_to_cayley": d}


@dataclass(frozen=True)
class Cube:
    corner: int  # the corner flipping no wall of M
    walls: int

    @property
    def dim(self) -> int:
        return popcount(self.walls)

    def corners(self) -> list[int]:
        ms = list(bits(self.walls))
        out = []
        for k in range(len(ms) + 1):
            for S in itertools.combinations(ms, k):
                out.append(self.corner | sum(1 << b for b in S))
        return out

    def is_valid(self, space: WallSpace) -> bool:
        return space.pairwise_crossing(self.walls) and all(space.valid(F) for F in self.corners())

    def distance_to_cayley(self, space: WallSpace) -> int:
        return min(space.distance_to_cayley(F)[0] for F in self.corners())

    def to_json(self, space: WallSpace) -> dict:
        return {
            "dim": self.dim,
            "corner": [r.to_json() for r in space.roots_of(self.corner)],
            "walls": [r.to_json() for r in space.roots_of(self.walls)],
            "distance_to_cayley": self.distance_to_cayley(space),
        }


def vertex_valid(base: GroupElement, flips: Iterable[Root], space: WallSpace) -> bool:
    """Consistency of the orientation that differs from base.C on the given walls."""
    try:
        Nw = space.ball.masks[space.ball.index(base)]
    except OutOfInventory:
        raise OutOfInventory("base element lies outside the Cayley ball") from None
    return space.valid(space.mask_of(flips) ^ Nw)


def cube_from_pairwise(M: Sequence[Root], space: WallSpace, near: int = 0, radius: int | None = None) -> Cube | None:
    """The cube on M nearest to the vertex `near` (gate projection onto the carrier of M)."""
    Mm = space.mask_of(M)
    if not space.pairwise_crossing(Mm):
        raise NotPairwiseCrossing("walls of M do not pairwise cross")
    fin, fout = space.forced(Mm)
    corner = (near | fin) & ~fout & ~Mm
    cube = Cube(corner, Mm)
    if not cube.is_valid(space):  # pragma: no cover - excluded by the gate argument
        raise SearchExhausted("gate corner is not a consistent orientation")
    if radius is not None:
        d = popcount(near ^ corner) - popcount(near & Mm)
        if d > radius:
            return None
    return cube


def cubical_chamber_vertices(space: WallSpace, radius: int, v0: GroupElement | None = None,
                             cap: int = 200000) -> list[int]:
    """Vertices of the cubical chamber of v0 within the given distance of v0 (BFS)."""
    seen = {0}
    frontier = [0]
    for _ in range(radius):
        nxt = []
        for F in frontier:
            for G in space.neighbors(F):
                if G & space.simple or G in seen:
                    continue
                seen.add(G)
                nxt.append(G)
                if len(seen) > cap:
                    raise ResourceLimit("cubical chamber exceeds the vertex cap")
        frontier = nxt
    out = sorted(seen, key=lambda F: (popcount(F), F))
    if v0 is not None and not v0.is_identity():
        out = [space.translate(v0, F) for F in out]
    return out


@dataclass
class ChamberProfile:
    sizes: list[int]
    depth: int
    stable: bool

    def to_json(self) -> dict:
        return {"sizes": list(self.sizes), "inventory_depth": self.depth, "stable_under_deepening": self.stable}


def chamber_profile(matrix: CoxeterMatrix, radius: int, depth: int | None = None, step: int = 4,
                    max_depth: int = 40) -> ChamberProfile:
    """Chamber sizes for radius 1..radius, deepening the inventory until two runs agree.

    A vertex may flip deep walls whose inner sets are small, so no fixed
    inventory depth is known to suffice; agreement across a deepening step is
    the evidence used instead.
    """
    d = depth if depth is not None else 2 * radius + 4
    prev = None
    while True:
        sp = WallSpace(matrix, d, ball_radius=0)
        V = cubical_chamber_vertices(sp, radius)
        sizes = [sum(1 for F in V if popcount(F) <= r) for r in range(1, radius + 1)]
        if sp.inv.stabilized or sizes == prev:
            return ChamberProfile(sizes, d, True)
        if d + step > max_depth:
            return ChamberProfile(sizes, d, False)
        prev = sizes
        d += step


def vertex_ball(space: WallSpace, radius: int, cap: int = 200000) -> set[int]:
    """All vertices of X within distance `radius` of the base Cayley vertex."""
    seen = {0}
    frontier = [0]
    for _ in range(radius):
        nxt = []
        for F in frontier:
            for G in space.neighbors(F):
                if G not in seen:
                    seen.add(G)
                    nxt.append(G)
        if len(seen) > cap:
            raise ResourceLimit("vertex ball exceeds the cap")
        frontier = nxt
    return seen


def cubes_at_corner(space: WallSpace, F: int, max_dim: int | None = None) -> list[Cube]:
    """Cubes whose corner flipping none of their walls is F."""
    cand = space.addable(F)
    G = nx.Graph()
    G.add_nodes_from(cand)
    for a, b in itertools.combinations(cand, 2):
        if (space.cross[a] >> b) & 1:
            G.add_edge(a, b)
    out = [Cube(F, 0)]
    for clique in nx.enumerate_all_cliques(G):
        if max_dim is not None and len(clique) > max_dim:
            break
        c = Cube(F, sum(1 << b for b in clique))
        if all(space.valid(x) for x in c.corners()):
            out.append(c)
    return out


# ---------------------------------------------------------------------------
# constants K and A


@dataclass
class KReport:
    value: int
    threshold: object
    flags: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"K": self.value, "threshold": self.threshold.to_json(), "flags": list(self.flags)}


def constant_K_from(rank: int, kappa, lambda_max, epsilon, cap: int = 10**9) -> int:
    """min{n : r_n > rank * kappa * lambda_max}."""
    t = rank * to_scalar(kappa) * to_scalar(lambda_max)
    if t < 1:
        return 0
    if epsilon is None:
        raise EpsilonUndefined("epsilon is undefined for this group")
    eps, kap = to_scalar(epsilon), to_scalar(kappa)
    # r_n > t needs sqrt(D) > max(t + 1, 4t - 5) with D = 1 + 2 eps (1 - kappa) n
    m = max(float(t) + 1, 4 * float(t) - 5)
    guess = max(1, int((m * m - 1) / (2 * float(eps) * (1 - float(kap)))) - 2)
    n = guess
    while n > 1 and r_sequence(n - 1, eps, kap) > t:
        n -= 1
    while not r_sequence(n, eps, kap) > t:
        n += 1
        if n > cap:
            raise ResourceLimit("K exceeds the configured cap")
    return n


def constant_K(matrix: CoxeterMatrix, depth: int = 6) -> KReport:
    kap = constant_kappa(matrix)
    lam = constant_lambda_max(matrix)
    eps = estimate_epsilon(matrix, depth)
    t = matrix.rank * kap.value * lam.value
    flags = ["uses the depth-%d estimate of epsilon" % depth] if eps.defined else []
    if t < 1:
        return KReport(0, t, flags + ["threshold below r_0 = 1"])
    if not eps.defined:
        raise EpsilonUndefined("all nested pairs have form value 1; epsilon is undefined")
    return KReport(constant_K_from(matrix.rank, kap.value, lam.value, eps.value), t, flags)


@dataclass
class ABound:
    K: int
    N_hat: int
    K_prime: int
    A: int

    def to_json(self) -> dict:
        return {"K": self.K, "N_hat": self.N_hat, "K_prime_upper": str(self.K_prime),
                "A_upper": str(self.A), "label": "upper bound, not exact"}


def constant_A_bound(K: int, N_hat: int) -> ABound:
    """Ramsey chain: any binom(a+b-2, a-1) walls hold a parallel a-set or a crossing b-set."""
    a, b = K + 9, N_hat + 1
    kp = math.comb(a + b - 2, a - 1)
    return ABound(K, N_hat, kp, kp + 1)


# ---------------------------------------------------------------------------
# deep cubes


def _direct_types(roots: Sequence[Root]) -> list[tuple[list[int], ComponentType, str]]:
    return component_types(coxeter_matrix_of_roots(roots))


@dataclass
class DeepCubeReport:
    walls: list[Root]
    distance: int
    threshold: int
    claim: bool
    affine_rank3: bool | None
    components: list = field(default_factory=list)
    flags: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "walls": [r.to_json() for r in self.walls],
            "distance": self.distance,
            "threshold": self.threshold,
            "claim": self.claim,
            "affine_rank_ge_3": self.affine_rank3,
            "components": [{"size": len(c), "type": t.value, "name": nm} for c, t, nm in self.components],
            "flags": list(self.flags),
            "note": None if self.claim else "distance below threshold, no claim",
        }


def check_deep_cube_affine(cube: Cube, space: WallSpace, threshold: int) -> DeepCubeReport:
    """Distance from X_0 to the walls of the cube; when at least the threshold, test for an affine component."""
    d, _ = space.carrier_distance(cube.walls)
    walls = space.roots_of(cube.walls)
    rep = DeepCubeReport(walls, d, threshold, d >= threshold, None)
    if d < threshold or not walls:
        return rep
    cs = canonical_simple_system(space.inv, walls)
    rep.flags.extend(cs.flags)
    comps = _direct_types(cs.roots)
    rep.components = comps
    rep.affine_rank3 = any(t is ComponentType.AFFINE and len(c) >= 3 for c, t, _ in comps)
    return rep


def deep_cube_scan(space: WallSpace, wall_depth: int, threshold: int, max_dim: int | None = None) -> list[DeepCubeReport]:
    """check_deep_cube_affine over every set of pairwise crossing walls of depth <= wall_depth."""
    idx = [i for i in range(space.n) if space.inv.depths[i] <= wall_depth]
    G = nx.Graph()
    G.add_nodes_from(idx)
    for a, b in itertools.combinations(idx, 2):
        if (space.cross[a] >> b) & 1:
            G.add_edge(a, b)
    out = []
    for clique in nx.enumerate_all_cliques(G):
        if max_dim is not None and len(clique) > max_dim:
            break
        M = sum(1 << b for b in clique)
        fin, fout = space.forced(M)
        out.append(check_deep_cube_affine(Cube(fin, M), space, threshold))
    return out


# ---------------------------------------------------------------------------
# tuples and cubes


def finite_reflection_roots(G: Sequence[GroupElement], cap: int = 5000) -> list[Root]:
    """Positive roots whose reflections lie in the parabolic closure of the finite group <G>."""
    pc = parabolic_closure_finite(G, cap)
    w = pc.conjugator
    return sorted({w.act(r).positive() for r in parabolic_roots(w.matrix, pc.generators)},
                  key=lambda r: r.key())


def sigma_of_tuple(T: Sequence[GroupElement], space: WallSpace) -> tuple[Cube, int]:
    """A cube c with M(c) = M(T) nearest to X_0, with that distance."""
    T = [t for t in T if not t.is_identity()]
    for s, t in itertools.combinations(T, 2):
        if element_order(s * t) is None:
            raise NotFinite("a pair of elements generates an infinite group")
    walls: set[Root] = set()
    for t in T:
        walls.update(finite_reflection_roots([t]))
    M = space.mask_of(walls)
    if not space.pairwise_crossing(M):  # pragma: no cover - guaranteed for finite pairs
        raise NotPairwiseCrossing("M(T) is not pairwise crossing")
    d, w = space.carrier_distance(M)
    Nw = space.ball.masks[space.ball.index(w)]
    cube = cube_from_pairwise(space.roots_of(M), space, near=Nw)
    return cube, d


def cover_families(n: int, cap: int = 200000) -> list[tuple[frozenset[int], ...]]:
    """Families of distinct nonempty subsets of range(n) whose union is everything."""
    subsets = [frozenset(c) for k in range(1, n + 1) for c in itertools.combinations(range(n), k)]
    full = frozenset(range(n))
    out = []
    for k in range(1, len(subsets) + 1):
        for fam in itertools.combinations(subsets, k):
            if frozenset().union(*fam) == full:
                out.append(fam)
                if len(out) > cap:
                    raise ResourceLimit("cover enumeration exceeds the cap")
    return out


def _least_nontrivial(roots: Sequence[Root], cap: int = 5000) -> GroupElement | None:
    gens = [reflection_element(r) for r in roots]
    try:
        H = _group_closure(gens, cap)
    except NotFinite:
        return None
    return min(h for h in H if not h.is_identity())


def tuples_of_cube(cube: Cube, space: WallSpace, max_walls: int = 4) -> list[frozenset[GroupElement]]:
    """The canonicalized set T(c): one ShortLex-least nontrivial element per covering subset."""
    walls = space.roots_of(cube.walls)
    if len(walls) > max_walls:
        raise ResourceLimit(f"cover enumeration capped at {max_walls} walls")
    if not walls:
        return []
    least: dict[frozenset[int], GroupElement | None] = {}

    def elem(S: frozenset[int]) -> GroupElement | None:
        if S not in least:
            least[S] = _least_nontrivial([walls[i] for i in sorted(S)])
        return least[S]

    out: set[frozenset[GroupElement]] = set()
    for fam in cover_families(len(walls)):
        if any(elem(a | b) is None for a in fam for b in fam):
            continue
        out.add(frozenset(elem(a) for a in fam))
    return sorted(out, key=lambda T: sorted((len(t.word), t.word) for t in T))


# ---------------------------------------------------------------------------
# 2-spherical reflection subgroups up to conjugacy


def is_subgroup_root(g: Root, system: Sequence[Root], max_steps: int = 500) -> bool:
    """Whether r_g lies in the reflection subgroup with canonical simple system `system`."""
    sys_set = set(system)
    g = g.positive()
    for _ in range(max_steps):
        if g in sys_set:
            return True
        for b in system:
            if bilinear_form(g, b).sign() > 0:
                h = g - b.scale(2 * bilinear_form(g, b))
                if not h.is_positive():
                    return False
                g = h
                break
        else:
            return False
    return False


def _fingerprint(system: Sequence[Root]) -> tuple:
    cm = coxeter_matrix_of_roots(system)
    return (len(system), tuple(sorted(tuple(sorted(row)) for row in cm.entries)))


def _conjugate_by(w: GroupElement, s1: Sequence[Root], s2: Sequence[Root]) -> bool:
    return all(is_subgroup_root(w.act(b), s2) for b in s1) and all(
        is_subgroup_root(w.act_inverse(g), s1) for g in s2)


@dataclass
class SphericalClass:
    representative: list[Root]
    members: int
    type_name: str
    conjugators_found: bool = True

    def to_json(self) -> dict:
        return {"representative": [r.to_json() for r in self.representative], "members": self.members,
                "type": self.type_name}


@dataclass
class ClassesReport:
    classes: list[SphericalClass]
    depth: int
    conjugator_radius: int
    excluded_affine: int
    flags: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "class_count": len(self.classes),
            "classes": [c.to_json() for c in self.classes],
            "depth": self.depth,
            "conjugator_radius": self.conjugator_radius,
            "excluded_with_affine_component": self.excluded_affine,
            "flags": list(self.flags),
        }


def _is_spherical_pair_value(v) -> bool:
    if not (v.sign() <= 0 and v > -1):
        return False
    c = -float(v)
    m = max(2, round(math.pi / math.acos(min(1.0, c))))
    return cos_pi_over(m) == -v


def enumerate_2spherical_classes(matrix: CoxeterMatrix, depth: int, conj_radius: int | None = None,
                                 max_rank: int | None = None) -> ClassesReport:
    """2-spherical reflection subgroups with canonical roots of depth <= depth and no affine component, up to conjugacy."""
    inv = enumerate_roots(matrix, depth)
    idx = [i for i in range(len(inv)) if inv.depths[i] <= depth]
    G = nx.Graph()
    G.add_nodes_from(idx)
    for i, j in itertools.combinations(idx, 2):
        if inv.compare_form(i, j, 0) <= 0 and inv.compare_form(i, j, -1) > 0 and _is_spherical_pair_value(inv.form(i, j)):
            G.add_edge(i, j)
    radius = conj_radius if conj_radius is not None else 2 * depth
    ball = ChamberBall(matrix, radius)
    classes: list[tuple[tuple, list[Root], SphericalClass]] = []
    excluded = 0
    for clique in nx.enumerate_all_cliques(G):
        if max_rank is not None and len(clique) > max_rank:
            break
        system = [inv.roots[i] for i in sorted(clique)]
        types = _direct_types(system)
        if any(t is ComponentType.AFFINE for _, t, _ in types):
            excluded += 1
            continue
        fp = _fingerprint(system)
        for key, rep, cls in classes:
            if key == fp and any(_conjugate_by(w, rep, system) for w in ball.elements):
                cls.members += 1
                break
        else:
            name = "+".join(nm for _, _, nm in types)
            classes.append((fp, system, SphericalClass(system, 1, name)))
    flags = [f"conjugators searched to length {radius}; the class count is an upper bound"]
    return ClassesReport([c for _, _, c in classes], depth, radius, excluded, flags)


# ---------------------------------------------------------------------------
# co-Hopf criterion


@dataclass
class CoHopfReport:
    co_hopfian: bool
    affine_components: list[list[int]]
    components: list

    def to_json(self) -> dict:
        return {
            "co_hopfian": self.co_hopfian,
            "affine_components": self.affine_components,
            "components": [{"generators": c, "type": t.value, "name": nm} for c, t, nm in self.components],
        }


def co_hopf(matrix: CoxeterMatrix) -> CoHopfReport:
    """For 2-spherical W: co-Hopfian iff no diagram component is of affine type."""
    if not matrix.is_2spherical():
        raise Not2Spherical("some m_ij is infinite")
    comps = component_types(matrix)
    aff = [c for c, t, _ in comps if t is ComponentType.AFFINE]
    return CoHopfReport(not aff, aff, comps)
