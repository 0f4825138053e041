"""Root intervals, chains of nested half-spaces and the constants built on them."""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .algebra import (
    ComponentType,
    CoxeterMatrix,
    GroupElement,
    Root,
    bilinear_form,
    component_types,
    element_order,
    identity_element,
    reflect,
    reflection_element,
)
from .errors import (
    BadParameters,
    HypothesisViolated,
    InvalidChain,
    NotFinite,
    NotNested,
    PreconditionFailed,
    ResourceLimit,
    SameWall,
    SearchExhausted,
)
from .roots import (
    RootInventory,
    canonical_simple_system,
    constant_kappa,
    constant_lambda_fin,
    coxeter_matrix_of_roots,
    depth_of,
    enumerate_roots,
)
from .scalar import QuadScalar, Scalar, sqrt, to_scalar
from .walls import classify_wall_pair, halfspace_contains, opposite_halfspaces, separates


class DepthInsufficient(ResourceLimit):
    pass


def _abs_depth(a: Root, inv: RootInventory | None = None) -> int:
    p = a.positive()
    if inv is not None and p in inv.index:
        return inv.depths[inv.index[p]]
    return depth_of(p)


def _inventory_for(matrix: CoxeterMatrix, depth: int, inv: RootInventory | None) -> RootInventory:
    if inv is not None and (inv.stabilized or (inv.depth_limit or 0) >= depth):
        return inv
    return enumerate_roots(matrix, depth)


# ---------------------------------------------------------------------------
# intervals and chains


def root_interval(a: Root, b: Root, inv: RootInventory | None = None) -> list[Root]:
    """Phi(a; b): the roots g with zeta(a) <= zeta(g) <= zeta(b), innermost first."""
    if a == b:
        return [a]
    if not halfspace_contains(a, b, inv):
        raise NotNested("zeta(a) is not contained in zeta(b)")
    # a wall between the two has depth at most the larger of the two depths
    bound = max(_abs_depth(a, inv), _abs_depth(b, inv))
    if inv is None:
        inv = enumerate_roots(a.matrix, bound)
    elif not inv.stabilized and (inv.depth_limit or 0) < bound:
        raise DepthInsufficient(f"interval needs roots of depth {bound}")
    out = []
    for i, r in enumerate(inv.roots):
        if inv.depths[i] > bound:
            break
        for g in (r, -r):
            if halfspace_contains(a, g, inv) and halfspace_contains(g, b, inv):
                out.append(g)
    # count roots below each one; list.sort hides the list from its own key
    below = {g: sum(1 for h in out if halfspace_contains(h, g, inv)) for g in out}
    out.sort(key=below.__getitem__)
    return out


@dataclass
class RootChain:
    roots: list[Root]
    convex: bool = False
    maximally_convex: bool = False

    def __post_init__(self) -> None:
        if len(self.roots) < 1:
            raise InvalidChain("empty chain")
        if len(set(self.roots)) != len(self.roots):
            raise InvalidChain("repeated root in chain")

    @property
    def n(self) -> int:
        return len(self.roots) - 1

    def to_json(self) -> dict:
        return {"roots": [r.to_json() for r in self.roots], "convex": self.convex,
                "maximally_convex": self.maximally_convex}


def validate_chain(roots: Sequence[Root], inv: RootInventory | None = None) -> RootChain:
    """Check strict nesting of consecutive roots and record convexity flags."""
    ch = RootChain(list(roots))
    for x, y in zip(ch.roots, ch.roots[1:]):
        if not halfspace_contains(x, y, inv):
            raise InvalidChain("consecutive roots are not strictly nested")
    if inv is not None:
        ch.convex = all(len(root_interval(x, y, inv)) == 2 for x, y in zip(ch.roots, ch.roots[1:]))
        if ch.n >= 1:
            best = maximally_convex_chain(ch.roots[0], ch.roots[-1], inv)
            ch.maximally_convex = best.n == ch.n
    return ch


def maximally_convex_chain(a: Root, b: Root, inv: RootInventory) -> RootChain:
    """A longest chain from a to b inside Phi(a; b)."""
    if a == b:
        raise NotNested("degenerate interval")
    interval = root_interval(a, b, inv)
    pos = {r: k for k, r in enumerate(interval)}
    key = {r: (_abs_depth(r, inv), inv.index_of(r.positive()), r.sign()) for r in interval}
    # longest path to b from each element; the interval is sorted innermost first
    best: dict[Root, tuple[int, list[Root]]] = {b: (0, [b])}
    for r in reversed(interval[:-1]):
        cand = None
        for s in interval[pos[r] + 1:]:
            if s in best and halfspace_contains(r, s, inv):
                ln, path = best[s]
                tie = [key[x] for x in path]
                if cand is None or ln + 1 > cand[0] or (ln + 1 == cand[0] and tie < cand[2]):
                    cand = (ln + 1, [r] + path, tie)
        if cand is not None:
            best[r] = (cand[0], cand[1])
    n, path = best[a]
    return RootChain(path, convex=True, maximally_convex=True)


# ---------------------------------------------------------------------------
# constants epsilon, r_n, L


@dataclass
class EpsilonEstimate:
    value: Scalar | None
    witness: tuple[Root, Root] | None
    depth: int

    @property
    def defined(self) -> bool:
        return self.value is not None

    def to_json(self) -> dict:
        return {
            "value": self.value.to_json() if self.value is not None else "undefined",
            "witness": [r.to_json() for r in self.witness] if self.witness else None,
            "depth": self.depth,
        }


def estimate_epsilon(matrix: CoxeterMatrix, depth: int, inv: RootInventory | None = None) -> EpsilonEstimate:
    """-1 + min |(a, b)| over positive roots of depth <= depth with |(a, b)| > 1."""
    inv = _inventory_for(matrix, depth, inv)
    idx = [i for i in range(len(inv)) if inv.depths[i] <= depth]
    G, err = inv.float_forms()
    cands = []
    for i, j in itertools.combinations(idx, 2):
        g = abs(G[i, j])
        if g > 1 + err[i, j] or (g >= 1 - err[i, j] and abs(inv.form(i, j)) > 1):
            cands.append((g, i, j))
    if not cands:
        return EpsilonEstimate(None, None, depth)
    cands.sort()
    lo = cands[0][0]
    best = None
    band = sorted((i, j) for g, i, j in cands if g <= lo + 1e-9 * max(1.0, lo))
    for i, j in band:
        v = abs(inv.form(i, j))
        if best is None or v < best[0]:
            best = (v, i, j)
    v, i, j = best
    return EpsilonEstimate(v - 1, (inv.roots[i], inv.roots[j]), depth)


def r_sequence(n: int, epsilon: Scalar | int | Fraction, kappa: Scalar | int | Fraction) -> Scalar | QuadScalar:
    """r_n from the closed form: r_0 = 1, else min(-1 + sqrt(D), (5 + sqrt(D)) / 4), D = 1 + 2 eps (1 - kappa) n.

    The second expression is 1 + a / (-2 + 2 sqrt(1 + 2a)) with a = eps (1 - kappa) n,
    simplified with (sqrt(D) - 1)(sqrt(D) + 1) = 2a.
    """
    if n < 0:
        raise BadParameters("n must be non-negative")
    eps, kap = to_scalar(epsilon), to_scalar(kappa)
    if eps.sign() <= 0:
        raise BadParameters("epsilon must be positive")
    if kap.sign() < 0 or kap >= 1:
        raise BadParameters("kappa must lie in [0, 1)")
    if n == 0:
        return eps.field.one()
    d = 1 + 2 * eps * (1 - kap) * n
    root = sqrt(d)
    first = root - 1
    second = (root + 5) / 4
    return first if first <= second else second


def r_table(k_max: int, epsilon: Scalar, kappa: Scalar) -> list[dict]:
    out = []
    for k in range(k_max + 1):
        r = r_sequence(k, epsilon, kappa)
        row = {"k": k, "r": r.to_json()}
        if k >= 1 and r <= 1:
            row["flag"] = "r_k <= 1"
        out.append(row)
    return out


def constant_L(kappa, lambda_fin, epsilon) -> Scalar:
    """max{2, 2 k l / (1 - k), (8 k^2 l^2 - 4 k l) / (eps (1 - k))}; epsilon None drops the last term."""
    kap, lam = to_scalar(kappa), to_scalar(lambda_fin)
    if kap.sign() < 0 or kap >= 1:
        raise BadParameters("kappa must lie in [0, 1)")
    if lam < 1:
        raise BadParameters("lambda_fin must be at least 1")
    terms = [to_scalar(2), 2 * kap * lam / (1 - kap)]
    if epsilon is not None:
        eps = to_scalar(epsilon)
        if eps.sign() <= 0:
            raise BadParameters("epsilon must be positive")
        terms.append((8 * kap * kap * lam * lam - 4 * kap * lam) / (eps * (1 - kap)))
    return max(terms)


@dataclass
class ChainConstants:
    kappa: Scalar
    lambda_fin: Scalar
    epsilon: EpsilonEstimate

    @property
    def L(self) -> Scalar:
        eps = self.epsilon.value if self.epsilon.defined else None
        return constant_L(self.kappa, self.lambda_fin, eps)

    def r(self, n: int):
        if not self.epsilon.defined:
            return None
        return r_sequence(n, self.epsilon.value, self.kappa)


def chain_constants(matrix: CoxeterMatrix, depth: int = 6, inv: RootInventory | None = None) -> ChainConstants:
    return ChainConstants(constant_kappa(matrix).value, constant_lambda_fin(matrix).value,
                          estimate_epsilon(matrix, depth, inv))


def hyperbolic_distance(v) -> tuple[Scalar | QuadScalar, float]:
    """For v >= 1 write v = (x + 1/x) / 2 with x >= 1; returns (x, log x)."""
    v = to_scalar(v)
    if v < 1:
        raise BadParameters("v must be at least 1")
    x = sqrt(v * v - 1) + v
    return x, math.log(float(x))


# ---------------------------------------------------------------------------
# parabolic closures


def _group_closure(gens: Sequence[GroupElement], cap: int) -> list[GroupElement]:
    e = identity_element(gens[0].matrix)
    seen = {e}
    out = [e]
    frontier = [e]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = x * g
                if y not in seen:
                    seen.add(y)
                    out.append(y)
                    nxt.append(y)
                    if len(out) > cap:
                        raise NotFinite("generated subgroup exceeds the finiteness cap")
        frontier = nxt
    return out


@dataclass
class ParabolicClosure:
    conjugator: GroupElement
    generators: tuple[int, ...]
    types: list[tuple[list[int], ComponentType, str]] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "conjugator": list(self.conjugator.word),
            "generators": list(self.generators),
            "components": [{"generators": c, "type": t.value, "name": nm} for c, t, nm in self.types],
        }


def parabolic_closure_finite(G: Sequence[GroupElement], cap: int = 20000, max_steps: int = 1000) -> ParabolicClosure:
    """Parabolic closure of a finite subgroup by steepest descent on total displacement."""
    G = [g for g in G if not g.is_identity()]
    if not G:
        raise PreconditionFailed("empty generating set")
    matrix = G[0].matrix
    for g in G:
        if element_order(g) is None:
            raise NotFinite(f"{g} has infinite order")
    H = _group_closure(G, cap)

    def cost(w: GroupElement) -> int:
        wi = w.inverse()
        return sum((wi * h * w).length for h in H)

    w = identity_element(matrix)
    c = cost(w)
    for _ in range(max_steps):
        moves = sorted((w.times_generator(s) for s in range(matrix.rank)))
        nbest = None
        for u in moves:
            cu = cost(u)
            if cu < c and (nbest is None or cu < nbest[0]):
                nbest = (cu, u)
        if nbest is None:
            break
        c, w = nbest
    else:
        raise SearchExhausted("descent did not terminate")
    wi = w.inverse()
    J = sorted(set().union(*((wi * h * w).support() for h in H)))
    return ParabolicClosure(w, tuple(J), component_types(matrix, J) if J else [])


@functools.lru_cache(maxsize=16)
def cached_ball(matrix: CoxeterMatrix, radius: int):
    from .walls import ChamberBall

    return ChamberBall(matrix, radius)


def parabolic_closure_roots(roots: Sequence[Root], radius: int) -> ParabolicClosure:
    """Parabolic closure of the reflection subgroup generated by r_b, b in roots.

    r_g lies in w W_J w^-1 iff supp(w^-1 g) <= J, so the closure is the
    conjugate minimizing the union of supports, searched over a ball.
    """
    matrix = roots[0].matrix
    # |J| is at least the dimension spanned by the roots
    floor = int(np.linalg.matrix_rank(np.array([r.floats() for r in roots]), tol=1e-9))
    ball = cached_ball(matrix, radius)
    best = None
    for w in ball.elements:
        J = frozenset().union(*(w.act_inverse(b).support() for b in roots))
        key = (len(J), w.length, w.word)
        if best is None or key < best[0]:
            best = (key, w, J)
            if len(J) <= floor:
                break
    _, w, J = best
    J = tuple(sorted(J))
    return ParabolicClosure(w, J, component_types(matrix, J))


def _single_affine(pc: ParabolicClosure) -> bool:
    return len(pc.types) == 1 and pc.types[0][1] is ComponentType.AFFINE


# ---------------------------------------------------------------------------
# the chain alternative


@dataclass
class ChainVerdict:
    alternative: int
    value: Scalar
    bound: Scalar | QuadScalar | None
    bound_holds: bool | None
    dihedral_witness: list[Root] | None = None
    affine_parabolic: ParabolicClosure | None = None
    flags: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "alternative": self.alternative,
            "value": self.value.to_json(),
            "bound": self.bound.to_json() if self.bound is not None else None,
            "bound_holds": self.bound_holds,
            "dihedral_witness": [r.to_json() for r in self.dihedral_witness] if self.dihedral_witness else None,
            "affine_parabolic": self.affine_parabolic.to_json() if self.affine_parabolic else None,
            "flags": list(self.flags),
        }


def classify_chain(
    chain: RootChain | Sequence[Root],
    inv: RootInventory | None = None,
    constants: ChainConstants | None = None,
    closure_radius: int | None = None,
) -> ChainVerdict:
    roots = chain.roots if isinstance(chain, RootChain) else list(chain)
    if len(roots) < 2:
        raise InvalidChain("a chain needs n >= 1")
    matrix = roots[0].matrix
    need = max(_abs_depth(r) for r in roots)
    inv = _inventory_for(matrix, need + 2, inv)
    validate_chain(roots)
    v = bilinear_form(roots[0], roots[-1])
    if v < 1:  # pragma: no cover - ruled out by nesting
        raise InvalidChain("nested ends with form value below 1")
    if v == 1:
        cs = canonical_simple_system(inv, roots)
        flags = cs.flags
        gens = cs.roots
        if len(gens) != 2 or bilinear_form(gens[0], gens[1]) != -1:
            flags = flags + ["canonical system is not infinite dihedral"]
        radius = closure_radius if closure_radius is not None else 2 * need + 2
        pc = parabolic_closure_roots(gens, radius)
        if not _single_affine(pc):
            flags = flags + ["parabolic closure not irreducible affine within the search radius"]
        return ChainVerdict(2, v, None, None, gens, pc, flags)
    if constants is None:
        constants = chain_constants(matrix, max(need, 2), inv)
    n = len(roots) - 1
    r = constants.r(n)
    flags = [] if r is not None else ["epsilon undefined"]
    holds = None if r is None else bool(v >= r)
    return ChainVerdict(1, v, r, holds, flags=flags)


def classify_dihedral_pair(a: Root, b: Root, epsilon: EpsilonEstimate | None = None,
                           closure_radius: int | None = None) -> dict:
    """finite / affine_closure / nonaffine_closure for the pair r_a, r_b."""
    if a == b or a == -b:
        raise SameWall("the two roots define the same wall")
    v = bilinear_form(a, b)
    av = abs(v)
    out: dict = {"value": v.to_json()}
    if av < 1:
        out["kind"] = "finite"
        return out
    radius = closure_radius if closure_radius is not None else 2 * max(_abs_depth(a), _abs_depth(b)) + 2
    pc = parabolic_closure_roots([a.positive(), b.positive()], radius)
    out["parabolic_closure"] = pc.to_json()
    if av == 1:
        out["kind"] = "affine_closure"
        out["closure_affine"] = _single_affine(pc)
        return out
    out["kind"] = "nonaffine_closure"
    out["closure_affine"] = _single_affine(pc)
    if epsilon is not None and epsilon.defined:
        out["epsilon_hat"] = epsilon.value.to_json()
        out["gap_holds"] = bool(av >= 1 + epsilon.value)
    return out


# ---------------------------------------------------------------------------
# inequality checks on triples and chains


def check_ordered_triple(a: Root, b: Root, c: Root, kappa: Scalar, inv: RootInventory | None = None) -> dict:
    """The three ordered-triple statements for a <= b <= c."""
    ac, ab, bc = bilinear_form(a, c), bilinear_form(a, b), bilinear_form(b, c)
    out = {"i": bool(ac >= max(ab, bc))}
    rba = reflect(b, a)
    t = bilinear_form(rba, c)
    if t > -1:
        out["ii"] = bool(ac >= 2 * ab - kappa)
    else:
        rbc = reflect(b, c)
        first = -rba in (b, c) or (halfspace_contains(b, -rba, inv) and halfspace_contains(-rba, c, inv))
        second = -rbc in (a, b) or (halfspace_contains(a, -rbc, inv) and halfspace_contains(-rbc, b, inv))
        out["iii"] = bool(first or second)
    return out


def check_finite_chain(chain: RootChain, kappa: Scalar) -> list[dict]:
    """Both finite-chain statements at every j of a maximally convex chain."""
    a = chain.roots
    n = len(a) - 1
    vals = [bilinear_form(a[0], x) for x in a]
    rows = []
    for j in range(1, n + 1):
        row: dict = {"j": j}
        if vals[j - 1] == 1:
            row["i"] = bool(vals[j] == 1 or vals[j] >= j * (1 - kappa))
        e = vals[j] - 1
        if e.sign() > 0:
            row["ii"] = bool(vals[n] > 1 + Fraction(n, 2 * j) * e)
        rows.append(row)
    return rows


# ---------------------------------------------------------------------------
# ladders


@dataclass
class LadderReport:
    n: int
    L: Scalar
    exceeds_L: bool
    conclusion_checked: bool
    euclidean_triangle: bool | None = None
    closure_affine: bool | None = None
    canonical_system: list[Root] = field(default_factory=list)
    flags: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "L": self.L.to_json(),
            "n_exceeds_L": self.exceeds_L,
            "conclusion_checked": self.conclusion_checked,
            "euclidean_triangle": self.euclidean_triangle,
            "closure_affine": self.closure_affine,
            "canonical_system": [r.to_json() for r in self.canonical_system],
            "flags": list(self.flags),
            "note": None if self.exceeds_L else "n <= L, no conclusion claimed",
        }


def _dihedral_roots(a: Root, b: Root, cap: int = 1000) -> set[Root]:
    seen = {a.positive(), b.positive()}
    frontier = list(seen)
    while frontier:
        nxt = []
        for x in frontier:
            for y in list(seen):
                for z in (reflect(x, y).positive(), reflect(y, x).positive()):
                    if z not in seen:
                        seen.add(z)
                        nxt.append(z)
        if len(seen) > cap:
            raise NotFinite("dihedral closure too large")
        frontier = nxt
    return seen


def check_ladder(mu: Root, mu_prime: Root, walls: Sequence[Root],
                 constants: ChainConstants | None = None, inv: RootInventory | None = None) -> LadderReport:
    """Validate the three ladder hypotheses, then test the Euclidean-triangle conclusion when n > L."""
    mu, mu_prime = mu.positive(), mu_prime.positive()
    walls = [m.positive() for m in walls]
    if not walls:
        raise HypothesisViolated(1, "no walls")
    # (1) finite <r_mu, r_mu'> containing r_{m_0}
    if mu == mu_prime or not abs(bilinear_form(mu, mu_prime)) < 1:
        raise HypothesisViolated(1, "mu and mu' do not meet")
    if walls[0] not in _dihedral_roots(mu, mu_prime):
        raise HypothesisViolated(1, "r_{m_0} is not in <r_mu, r_mu'>")
    # (2) m_j separates m_i from m_k
    for i, k in itertools.combinations(range(len(walls)), 2):
        if walls[i] == walls[k] or abs(bilinear_form(walls[i], walls[k])) < 1:
            raise HypothesisViolated(2, f"m_{i} and m_{k} are not parallel")
        a, b = opposite_halfspaces(walls[i], walls[k])
        for j in range(i + 1, k):
            if separates(walls[j], a, b) is None:
                raise HypothesisViolated(2, f"m_{j} does not separate m_{i} from m_{k}")
    # (3) crossings
    for i, m in enumerate(walls[1:], start=1):
        for x in (mu, mu_prime):
            if m == x or not abs(bilinear_form(m, x)) < 1:
                raise HypothesisViolated(3, f"m_{i} does not cross both mu and mu'")
    matrix = mu.matrix
    n = len(walls) - 1
    if constants is None:
        constants = chain_constants(matrix)
    L = constants.L
    exceeds = n > L
    rep = LadderReport(n, L, bool(exceeds), False)
    if not constants.epsilon.defined:
        rep.flags.append("epsilon undefined: L uses its first two terms")
    if not exceeds:
        return rep
    need = max(_abs_depth(r) for r in [mu, mu_prime] + walls)
    inv = _inventory_for(matrix, need + 2, inv)
    cs = canonical_simple_system(inv, [mu, mu_prime] + walls)
    rep.conclusion_checked = True
    rep.canonical_system = cs.roots
    rep.flags.extend(cs.flags)
    tri = False
    if len(cs.roots) == 3:
        types = component_types(coxeter_matrix_of_roots(cs.roots))
        tri = len(types) == 1 and types[0][1] is ComponentType.AFFINE
    rep.euclidean_triangle = tri
    pc = parabolic_closure_roots(cs.roots, 2 * need + 2)
    rep.closure_affine = _single_affine(pc)
    return rep
