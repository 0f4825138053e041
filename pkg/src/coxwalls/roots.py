"""Root inventories, depth, small roots and the constants kappa, lambda_fin, lambda_max."""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

from .algebra import (
    INF,
    CoxeterMatrix,
    Root,
    bilinear_form,
    is_spherical,
    reflect,
    reflect_simple,
    simple_root,
)
from .errors import OutOfInventory, ResourceLimit
from .scalar import Scalar

DEFAULT_ROOT_CAP = 100_000
NEG = -1  # reflection table marker: the image is a negative root

# relative error allowance for float prefilters; decisions inside the band are exact
_FLOAT_TOL = 1e-11


@dataclass
class RootInventory:
    """Positive roots of depth at most ``depth_limit``, indexed breadth-first."""

    matrix: CoxeterMatrix
    depth_limit: int | None
    roots: list[Root]
    depths: list[int]
    table: list[list[int | None]]
    stabilized: bool
    index: dict[Root, int] = field(repr=False, default_factory=dict)
    _forms: dict[tuple[int, int], Scalar] = field(repr=False, default_factory=dict)
    _float: tuple | None = field(repr=False, default=None)
    _refl: dict[tuple[int, int], tuple[int | None, bool]] = field(repr=False, default_factory=dict)

    def __post_init__(self) -> None:
        if not self.index:
            self.index = {r: i for i, r in enumerate(self.roots)}

    def __len__(self) -> int:
        return len(self.roots)

    @property
    def max_depth(self) -> int:
        return max(self.depths) if self.depths else 0

    def index_of(self, a: Root) -> int:
        try:
            return self.index[a]
        except KeyError:
            raise OutOfInventory(f"{a} is not an inventoried positive root") from None

    def signed_index(self, a: Root) -> tuple[int, int]:
        """(index of the positive representative, sign of a)."""
        if a.is_positive():
            return self.index_of(a), 1
        return self.index_of(-a), -1

    def contains(self, a: Root) -> bool:
        return a in self.index

    def depth(self, i: int) -> int:
        return self.depths[i]

    def complete_for(self, *indices: int) -> bool:
        return self.stabilized or all(
            self.depth_limit is None or self.depths[i] < self.depth_limit for i in indices
        )

    def form(self, i: int, j: int) -> Scalar:
        key = (i, j) if i <= j else (j, i)
        v = self._forms.get(key)
        if v is None:
            v = bilinear_form(self.roots[key[0]], self.roots[key[1]])
            self._forms[key] = v
        return v

    def reflect_pair(self, i: int, j: int) -> int | None:
        """Index of the positive root +-r_{a_i}(a_j), or None outside the inventory (memoized)."""
        return self._reflection(i, j)[0]

    def reflects_positive(self, i: int, j: int) -> bool:
        """Whether r_{a_i}(a_j) is a positive root."""
        return self._reflection(i, j)[1]

    def _reflection(self, i: int, j: int) -> tuple[int | None, bool]:
        key = (i, j)
        if key not in self._refl:
            img = reflect(self.roots[i], self.roots[j])
            pos = img.is_positive()
            self._refl[key] = (self.index.get(img if pos else -img), pos)
        return self._refl[key]

    def float_forms(self) -> tuple[np.ndarray, np.ndarray]:
        """(approximate Gram matrix of the inventory, elementwise error bound)."""
        if self._float is None:
            R = np.array([r.floats() for r in self.roots], dtype=float).reshape(len(self.roots), -1)
            B = np.array(self.matrix.gram_float, dtype=float)
            G = R @ B @ R.T
            err = (np.abs(R) @ np.abs(B) @ np.abs(R).T) * _FLOAT_TOL + 1e-300
            self._float = (G, err)
        return self._float

    def compare_form(self, i: int, j: int, t: int) -> int:
        """Certified sign of (a_i, a_j) - t."""
        G, err = self.float_forms()
        g, e = G[i, j], err[i, j]
        if g - t > e:
            return 1
        if g - t < -e:
            return -1
        return (self.form(i, j) - t).sign()

    def abs_form_lt_one(self, i: int, j: int) -> bool:
        return self.compare_form(i, j, 1) < 0 and self.compare_form(i, j, -1) > 0

    def relation(self, i: int, j: int) -> str:
        """Relation of two distinct positive roots: 'cross', 'nested' or 'apart'."""
        if self.compare_form(i, j, 1) >= 0:
            return "nested"
        if self.compare_form(i, j, -1) <= 0:
            return "apart"
        return "cross"

    def reflect_index(self, s: int, i: int) -> int | None:
        return self.table[i][s]

    def by_depth(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {}
        for i, d in enumerate(self.depths):
            out.setdefault(d, []).append(i)
        return out

    def coords_json(self, i: int) -> list:
        return self.roots[i].to_json()


def _levels(matrix: CoxeterMatrix) -> Iterator[list[Root]]:
    """Breadth-first levels of positive roots by depth (level k has depth k)."""
    level = [simple_root(matrix, s) for s in range(matrix.rank)]
    seen = set(level)
    while level:
        yield level
        nxt: list[Root] = []
        for a in level:
            bv = a.gram_image()
            for s in range(matrix.rank):
                if bv[s].sign() < 0:
                    b = reflect_simple(s, a)
                    if b not in seen:
                        seen.add(b)
                        nxt.append(b)
        level = nxt


def enumerate_roots(
    matrix: CoxeterMatrix, depth_limit: int | None = None, cap: int = DEFAULT_ROOT_CAP
) -> RootInventory:
    """Positive roots of depth at most ``depth_limit`` (None: until the system closes)."""
    if depth_limit is not None and depth_limit < 1:
        raise ValueError("depth_limit must be at least 1")
    roots: list[Root] = []
    depths: list[int] = []
    stabilized = False
    levels = _levels(matrix)
    d = 0
    while True:
        if depth_limit is not None and d >= depth_limit:
            # peek whether the system is already complete
            try:
                nxt = next(levels)
            except StopIteration:
                stabilized = True
            else:
                stabilized = False
                del nxt
            break
        try:
            level = next(levels)
        except StopIteration:
            stabilized = True
            break
        d += 1
        roots.extend(level)
        depths.extend([d] * len(level))
        if len(roots) > cap:
            raise ResourceLimit(f"root count exceeds cap {cap} at depth {d}")
    index = {r: i for i, r in enumerate(roots)}
    table: list[list[int | None]] = []
    for i, a in enumerate(roots):
        row: list[int | None] = []
        for s in range(matrix.rank):
            b = reflect_simple(s, a)
            if not b.is_positive():
                row.append(NEG)
            else:
                row.append(index.get(b))
        table.append(row)
    return RootInventory(matrix, depth_limit, roots, depths, table, stabilized, index)


@functools.lru_cache(maxsize=1 << 16)
def depth_of(a: Root) -> int:
    """Depth of a positive root, computed by descending along simple reflections."""
    if not a.is_positive():
        raise ValueError("depth is defined for positive roots")
    steps = 0
    rank = a.matrix.rank
    while True:
        bv = a.gram_image()
        for s in range(rank):
            if bv[s].sign() > 0:
                b = reflect_simple(s, a)
                if not b.is_positive():
                    return steps + 1
                a = b
                steps += 1
                break
        else:  # pragma: no cover
            raise RuntimeError("positive root without descent")


def root_depth(inv: RootInventory, a: Root) -> int:
    """Minimal length of an element sending the positive root ``a`` negative."""
    return inv.depths[inv.index_of(a)]


# ---------------------------------------------------------------------------
# small roots


@dataclass
class SmallRootsResult:
    roots: list[Root]
    depth_reached: int
    inventory: RootInventory


def small_roots(matrix: CoxeterMatrix, cap: int = DEFAULT_ROOT_CAP) -> SmallRootsResult:
    """Positive roots minimal for half-space inclusion.

    A positive root is discarded when another positive root of smaller depth
    has form value at least 1 with it (nested, and the shallower one is
    inner).  The scan stops at the first depth level without small roots.
    """
    depth = 2
    while True:
        inv = enumerate_roots(matrix, depth, cap)
        small = _small_indices(inv)
        by_d = inv.by_depth()
        last = max(by_d)
        if inv.stabilized or not any(inv.depths[i] == last for i in small):
            return SmallRootsResult([inv.roots[i] for i in small], last, inv)
        depth *= 2


def _small_indices(inv: RootInventory) -> list[int]:
    G, err = inv.float_forms()
    out = []
    for i in range(len(inv)):
        di = inv.depths[i]
        cand = np.nonzero(G[i] >= 1 - err[i])[0]
        dominated = False
        for j in cand:
            if j != i and inv.depths[j] < di and inv.compare_form(i, int(j), 1) >= 0:
                dominated = True
                break
        if not dominated:
            out.append(i)
    return out


# ---------------------------------------------------------------------------
# constants


@dataclass
class ConstantValue:
    value: Scalar
    witness: tuple = ()
    flags: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "value": self.value.to_json(),
            "witness": [w.to_json() if isinstance(w, Root) else w for w in self.witness],
            "flags": list(self.flags),
        }


def maximal_spherical_subsets(matrix: CoxeterMatrix) -> list[tuple[int, ...]]:
    sph = [
        J
        for k in range(1, matrix.rank + 1)
        for J in itertools.combinations(range(matrix.rank), k)
        if is_spherical(matrix, J)
    ]
    return [J for J in sph if not any(set(J) < set(K) for K in sph)]


def parabolic_roots(matrix: CoxeterMatrix, J: Sequence[int]) -> list[Root]:
    """Positive roots of the finite standard parabolic W_J, in full coordinates."""
    sub = matrix.submatrix(J)
    inv = enumerate_roots(sub, None)
    f = matrix.field
    out = []
    for r in inv.roots:
        coords = [f.zero()] * matrix.rank
        for k, j in enumerate(J):
            coords[j] = r.coords[k].lift(f)
        out.append(Root(matrix, coords))
    return out


def constant_kappa(matrix: CoxeterMatrix) -> ConstantValue:
    """sup |(a, b)| over root pairs with |(a, b)| < 1."""
    best: Scalar | None = None
    witness: tuple = ()
    for J in maximal_spherical_subsets(matrix):
        rs = parabolic_roots(matrix, J)
        for a, b in itertools.combinations(rs, 2):
            v = abs(bilinear_form(a, b))
            if v < 1 and (best is None or v > best):
                best, witness = v, (a, b)
    if best is None:
        return ConstantValue(matrix.field.zero(), (), ["undefined: no root pair with |(a,b)| < 1"])
    return ConstantValue(best, witness)


def _plane_coefficients(alpha: Root, phi: Root, psi: Root) -> tuple[Scalar, Scalar] | None:
    c = bilinear_form(phi, psi)
    p = bilinear_form(alpha, phi)
    q = bilinear_form(alpha, psi)
    det = 1 - c * c
    x = (p - q * c) / det
    y = (q - p * c) / det
    if phi.scale(x) + psi.scale(y) == alpha:
        return x, y
    return None


def constant_lambda_fin(matrix: CoxeterMatrix) -> ConstantValue:
    """sup of x over a = x phi + y psi with roots a, phi, psi and |(phi, psi)| < 1."""
    best: Scalar | None = None
    witness: tuple = ()
    for J in maximal_spherical_subsets(matrix):
        pos = parabolic_roots(matrix, J)
        allr = pos + [-r for r in pos]
        fl = {id(r): np.array(r.floats()) for r in allr}
        for phi in allr:
            for psi in allr:
                if phi == psi or phi == -psi:
                    continue
                c = bilinear_form(phi, psi)
                if not abs(c) < 1:
                    continue
                basis = np.array([fl[id(phi)], fl[id(psi)]]).T
                for alpha in allr:
                    sol, *_ = np.linalg.lstsq(basis, fl[id(alpha)], rcond=None)
                    if np.linalg.norm(basis @ sol - fl[id(alpha)]) > 1e-6:
                        continue
                    if best is not None and sol[0] < float(best) - 1e-6:
                        continue
                    xy = _plane_coefficients(alpha, phi, psi)
                    if xy is None:
                        continue
                    x = xy[0]
                    if best is None or x > best:
                        best, witness = x, (alpha, phi, psi)
    if best is None:
        return ConstantValue(matrix.field.one(), (), ["no qualifying triple; set to 1 by convention"])
    return ConstantValue(best, witness)


def constant_lambda_max(matrix: CoxeterMatrix, cap: int = DEFAULT_ROOT_CAP) -> ConstantValue:
    """Largest coordinate of a small root."""
    sr = small_roots(matrix, cap).roots
    best, wit = None, None
    for r in sr:
        for c in r.coords:
            if best is None or c > best:
                best, wit = c, r
    return ConstantValue(best, (wit,))


# ---------------------------------------------------------------------------
# reflection subgroups


@dataclass
class CanonicalSystem:
    roots: list[Root]
    visible_roots: list[Root]
    approximate: bool

    @property
    def flags(self) -> list[str]:
        return ["DepthInsufficient: closure not stabilized within the inventory"] if self.approximate else []


def reflection_closure(inv: RootInventory, generating: Iterable[Root], max_size: int | None = None) -> tuple[list[Root], bool]:
    """Positive roots of the subgroup generated by r_g, as far as the inventory shows."""
    start: list[int] = []
    for g in generating:
        k = inv.index_of(g.positive())
        if k not in start:
            start.append(k)
    found = list(start)
    seen = set(found)
    truncated = False
    frontier = list(found)
    while frontier:
        new = []
        for b in found:
            for g in frontier:
                if b == g:
                    continue
                for x, y in ((b, g), (g, b)):
                    k = inv.reflect_pair(x, y)
                    if k is None:
                        truncated = True
                    elif k not in seen:
                        seen.add(k)
                        new.append(k)
        found.extend(new)
        frontier = new
        if max_size is not None and len(found) > max_size:
            raise ResourceLimit("reflection closure exceeds the configured size")
    return [inv.roots[k] for k in found], truncated


def canonical_simple_system(inv: RootInventory, generating: Iterable[Root]) -> CanonicalSystem:
    """Canonical simple roots of the reflection subgroup generated by the given roots."""
    gens = [g.positive() for g in generating]
    for g in gens:
        if not inv.contains(g):
            raise OutOfInventory(f"{g} is outside the inventory")
    visible, truncated = reflection_closure(inv, gens)
    vis = sorted(inv.index_of(r) for r in visible)
    out = [inv.roots[b] for b in vis if all(g == b or inv.reflects_positive(b, g) for g in vis)]
    visible = [inv.roots[b] for b in vis]
    return CanonicalSystem(out, visible, truncated)


def coxeter_matrix_of_roots(roots: Sequence[Root]) -> CoxeterMatrix:
    """Coxeter matrix of a canonical simple system, read off from form values."""
    from .scalar import cos_pi_over

    n = len(roots)
    rows = [[1] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            v = bilinear_form(roots[i], roots[j])
            if v <= -1:
                m = INF
            else:
                c = -float(v)
                if not -1e-12 <= c < 1:
                    raise ValueError("roots do not form a simple system")
                m = max(2, round(math.pi / math.acos(min(1.0, c))))
                if cos_pi_over(m) != -v:
                    raise ValueError("form value is not -cos(pi/m)")
            rows[i][j] = rows[j][i] = m
    return CoxeterMatrix(tuple(tuple(r) for r in rows))
