"""Coxeter matrices, the standard root basis, reflections and group elements."""

from __future__ import annotations

import enum
import hashlib
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from .errors import (
    BadDiagonal,
    BadOffDiagonal,
    NotConnected,
    NotSquare,
    NotSymmetric,
)
from .scalar import NumberField, Scalar, conductor_for, cos_pi_over, field

INF = 0  # matrix encoding of m_ij = infinity


@dataclass(frozen=True)
class CoxeterMatrix:
    """Symmetric Coxeter matrix; ``0`` encodes an infinite entry."""

    entries: tuple[tuple[int, ...], ...]

    @property
    def rank(self) -> int:
        return len(self.entries)

    def m(self, i: int, j: int) -> int:
        return self.entries[i][j]

    def is_infinite(self, i: int, j: int) -> bool:
        return self.entries[i][j] == INF

    @cached_property
    def field(self) -> NumberField:
        n = 1
        for row in self.entries:
            for m in row:
                if m > 1:
                    c = conductor_for(2 * m)
                    n = n * c // math.gcd(n, c)
        return field(n)

    @cached_property
    def gram(self) -> tuple[tuple[Scalar, ...], ...]:
        f = self.field
        rows = []
        for i in range(self.rank):
            row = []
            for j in range(self.rank):
                m = self.entries[i][j]
                if m == INF:
                    row.append(f.rational(-1))
                else:
                    row.append(-cos_pi_over(m).lift(f))
            rows.append(tuple(row))
        return tuple(rows)

    @cached_property
    def gram_float(self) -> tuple[tuple[float, ...], ...]:
        return tuple(tuple(float(x) for x in row) for row in self.gram)

    def submatrix(self, J: Sequence[int]) -> "CoxeterMatrix":
        return CoxeterMatrix(tuple(tuple(self.entries[i][j] for j in J) for i in J))

    def to_json(self) -> dict:
        return {"rank": self.rank, "matrix": [list(r) for r in self.entries]}

    def digest(self) -> str:
        blob = json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()[:16]

    def is_2spherical(self) -> bool:
        return all(m != INF for row in self.entries for m in row)

    def edges(self) -> dict[tuple[int, int], int]:
        """Diagram edges (pairs with m_ij != 2), with labels."""
        out = {}
        for i in range(self.rank):
            for j in range(i + 1, self.rank):
                if self.entries[i][j] != 2:
                    out[(i, j)] = self.entries[i][j]
        return out


def validate_matrix(raw: Sequence[Sequence[int]]) -> CoxeterMatrix:
    """Check a raw integer table (0 meaning infinity) and wrap it."""
    n = len(raw)
    if n == 0 or any(len(row) != n for row in raw):
        raise NotSquare("matrix must be square and non-empty")
    for i in range(n):
        for j in range(n):
            v = raw[i][j]
            if not isinstance(v, int) or isinstance(v, bool):
                raise BadOffDiagonal(f"entry ({i},{j}) is not an integer")
    for i in range(n):
        if raw[i][i] != 1:
            raise BadDiagonal(f"diagonal entry ({i},{i}) is {raw[i][i]}, expected 1")
    for i in range(n):
        for j in range(n):
            if raw[i][j] != raw[j][i]:
                raise NotSymmetric(f"entries ({i},{j}) and ({j},{i}) differ")
    for i in range(n):
        for j in range(n):
            if i != j and (raw[i][j] < 0 or raw[i][j] == 1):
                raise BadOffDiagonal(f"off-diagonal entry ({i},{j}) is {raw[i][j]}")
    return CoxeterMatrix(tuple(tuple(int(v) for v in row) for row in raw))


# ---------------------------------------------------------------------------
# roots


class Root:
    """Vector of V in the basis Pi; engine-produced instances are roots."""

    __slots__ = ("coords", "matrix", "_hash", "_bv", "_float")

    def __init__(self, matrix: CoxeterMatrix, coords: Sequence[Scalar]) -> None:
        self.matrix = matrix
        self.coords = tuple(coords)
        self._hash = None
        self._bv = None
        self._float = None

    @classmethod
    def from_numbers(cls, matrix: CoxeterMatrix, values: Iterable) -> "Root":
        f = matrix.field
        out = []
        for v in values:
            out.append(v.lift(f) if isinstance(v, Scalar) else f.rational(Fraction(v)))
        if len(out) != matrix.rank:
            raise ValueError("coordinate count does not match the rank")
        return cls(matrix, out)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Root):
            return NotImplemented
        return self.coords == other.coords and self.matrix == other.matrix

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(tuple((c.num, c.den) for c in self.coords))
        return self._hash

    def __neg__(self) -> "Root":
        return Root(self.matrix, [-c for c in self.coords])

    def __add__(self, other: "Root") -> "Root":
        return Root(self.matrix, [a + b for a, b in zip(self.coords, other.coords)])

    def __sub__(self, other: "Root") -> "Root":
        return Root(self.matrix, [a - b for a, b in zip(self.coords, other.coords)])

    def scale(self, k) -> "Root":
        return Root(self.matrix, [c * k for c in self.coords])

    def sign(self) -> int:
        """+1 for a nonnegative combination of Pi, -1 for a nonpositive one, else 0."""
        signs = {c.sign() for c in self.coords} - {0}
        if signs == {1}:
            return 1
        if signs == {-1}:
            return -1
        return 0

    def is_positive(self) -> bool:
        for c in self.coords:
            s = c.sign()
            if s:
                return s > 0
        return False

    def positive(self) -> "Root":
        return self if self.is_positive() else -self

    def support(self) -> frozenset[int]:
        return frozenset(i for i, c in enumerate(self.coords) if not c.is_zero())

    def gram_image(self) -> tuple[Scalar, ...]:
        """B x, so that (y, x) = sum y_i (Bx)_i."""
        if self._bv is None:
            g = self.matrix.gram
            n = len(self.coords)
            out = []
            for i in range(n):
                acc = None
                row = g[i]
                for j, c in enumerate(self.coords):
                    if c.is_zero() or row[j].is_zero():
                        continue
                    t = row[j] * c
                    acc = t if acc is None else acc + t
                out.append(acc if acc is not None else self.matrix.field.zero())
            self._bv = tuple(out)
        return self._bv

    def floats(self) -> tuple[float, ...]:
        if self._float is None:
            self._float = tuple(float(c) for c in self.coords)
        return self._float

    def key(self) -> tuple:
        return tuple(float(c) for c in self.coords)

    def to_json(self, digits: int = 17) -> list:
        out = []
        for c in self.coords:
            out.append(str(c.as_fraction()) if c.is_rational() else c.to_json(digits))
        return out

    def __repr__(self) -> str:
        parts = []
        for c in self.coords:
            parts.append(str(c.as_fraction()) if c.is_rational() else c.decimal(6))
        return "Root(" + ", ".join(parts) + ")"


def simple_root(matrix: CoxeterMatrix, i: int) -> Root:
    f = matrix.field
    return Root(matrix, [f.one() if j == i else f.zero() for j in range(matrix.rank)])


def bilinear_form(a: Root, b: Root) -> Scalar:
    """Exact value of the Tits form (a, b)."""
    bv = b.gram_image()
    acc = None
    for x, y in zip(a.coords, bv):
        if x.is_zero() or y.is_zero():
            continue
        t = x * y
        acc = t if acc is None else acc + t
    return acc if acc is not None else a.matrix.field.zero()


def reflect(a: Root, x: Root) -> Root:
    """r_a(x) = x - 2 (x, a) a."""
    k = bilinear_form(x, a) * 2
    if k.is_zero():
        return x
    return Root(x.matrix, [xc - k * ac for xc, ac in zip(x.coords, a.coords)])


def reflect_simple(s: int, x: Root) -> Root:
    """Action of the generator s; only coordinate s changes."""
    k = x.gram_image()[s] * 2
    if k.is_zero():
        return x
    coords = list(x.coords)
    coords[s] = coords[s] - k
    return Root(x.matrix, coords)


# ---------------------------------------------------------------------------
# group elements

Mat = tuple[tuple[Scalar, ...], ...]


def _identity(matrix: CoxeterMatrix) -> Mat:
    f = matrix.field
    n = matrix.rank
    return tuple(tuple(f.one() if i == j else f.zero() for j in range(n)) for i in range(n))


def _right_gen(matrix: CoxeterMatrix, g: Mat, s: int) -> Mat:
    b = matrix.gram[s]
    rows = []
    for row in g:
        gs = row[s] * 2
        rows.append(tuple(x if b[j].is_zero() else x - b[j] * gs for j, x in enumerate(row)))
    return tuple(rows)


def _left_gen(matrix: CoxeterMatrix, g: Mat, s: int) -> Mat:
    b = matrix.gram[s]
    n = matrix.rank
    new = []
    for j in range(n):
        acc = g[s][j]
        for k in range(n):
            if not b[k].is_zero() and not g[k][j].is_zero():
                acc = acc - b[k] * g[k][j] * 2
        new.append(acc)
    return tuple(tuple(new) if i == s else g[i] for i in range(n))


def _matmul(a: Mat, b: Mat) -> Mat:
    n = len(a)
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            acc = None
            for k in range(n):
                x, y = a[i][k], b[k][j]
                if x.is_zero() or y.is_zero():
                    continue
                t = x * y
                acc = t if acc is None else acc + t
            row.append(acc if acc is not None else a[0][0].field.zero())
        out.append(tuple(row))
    return tuple(out)


def _column_negative(m: Mat, s: int) -> bool:
    for row in m:
        sg = row[s].sign()
        if sg:
            return sg < 0
    return False


class GroupElement:
    """Element of W as (ShortLex normal form, action matrix, inverse matrix)."""

    __slots__ = ("matrix", "word", "mat", "inv", "_hash")

    def __init__(self, matrix: CoxeterMatrix, word: tuple[int, ...], mat: Mat, inv: Mat) -> None:
        self.matrix = matrix
        self.word = word
        self.mat = mat
        self.inv = inv
        self._hash = None

    @property
    def length(self) -> int:
        return len(self.word)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GroupElement):
            return NotImplemented
        return self.mat == other.mat

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(tuple(tuple((c.num, c.den) for c in row) for row in self.mat))
        return self._hash

    def __lt__(self, other: "GroupElement") -> bool:
        return (len(self.word), self.word) < (len(other.word), other.word)

    def is_identity(self) -> bool:
        return not self.word

    def act(self, x: Root) -> Root:
        return Root(x.matrix, _apply(self.mat, x.coords))

    def act_inverse(self, x: Root) -> Root:
        return Root(x.matrix, _apply(self.inv, x.coords))

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return _normalize(self.matrix, _matmul(self.mat, other.mat), _matmul(other.inv, self.inv))

    def inverse(self) -> "GroupElement":
        return _normalize(self.matrix, self.inv, self.mat)

    def times_generator(self, s: int) -> "GroupElement":
        return _normalize(self.matrix, _right_gen(self.matrix, self.mat, s),
                          _left_gen(self.matrix, self.inv, s))

    def conjugate(self, g: "GroupElement") -> "GroupElement":
        """self * g * self^-1."""
        return self * g * self.inverse()

    def support(self) -> frozenset[int]:
        return frozenset(self.word)

    def __repr__(self) -> str:
        return "GroupElement(" + ("".join(f"s{i + 1}" for i in self.word) or "1") + ")"


def _apply(m: Mat, v: Sequence[Scalar]) -> list[Scalar]:
    out = []
    for row in m:
        acc = None
        for x, y in zip(row, v):
            if x.is_zero() or y.is_zero():
                continue
            t = x * y
            acc = t if acc is None else acc + t
        out.append(acc if acc is not None else v[0].field.zero())
    return out


def _normalize(matrix: CoxeterMatrix, mat: Mat, inv: Mat) -> GroupElement:
    # greedy least left descent yields the ShortLex normal form
    word: list[int] = []
    cur_inv = inv
    cur = mat
    ident = _identity(matrix)
    while cur != ident:
        for s in range(matrix.rank):
            if _column_negative(cur_inv, s):
                word.append(s)
                cur = _left_gen(matrix, cur, s)
                cur_inv = _right_gen(matrix, cur_inv, s)
                break
        else:  # pragma: no cover - impossible for a group element
            raise RuntimeError("no descent found for a non-identity element")
    return GroupElement(matrix, tuple(word), mat, inv)


def identity_element(matrix: CoxeterMatrix) -> GroupElement:
    i = _identity(matrix)
    return GroupElement(matrix, (), i, i)


def element_from_word(matrix: CoxeterMatrix, word: Sequence[int]) -> GroupElement:
    """Element represented by ``word``, reduced to ShortLex normal form."""
    mat = inv = _identity(matrix)
    for s in word:
        if not 0 <= s < matrix.rank:
            raise ValueError(f"generator index {s} out of range")
        mat = _right_gen(matrix, mat, s)
        inv = _left_gen(matrix, inv, s)
    return _normalize(matrix, mat, inv)


def reflection_element(root: Root) -> GroupElement:
    """The reflection r_root as a group element."""
    m = root.matrix
    n = m.rank
    cols = []
    for j in range(n):
        cols.append(reflect(root, simple_root(m, j)).coords)
    mat = tuple(tuple(cols[j][i] for j in range(n)) for i in range(n))
    return _normalize(m, mat, mat)


def element_order(g: GroupElement, bound: int = 0) -> int | None:
    """Order of g, or None when it exceeds ``bound`` (default: lcm-based bound)."""
    if bound <= 0:
        bound = order_bound(g.matrix)
    ident = _identity(g.matrix)
    cur = g.mat
    for k in range(1, bound + 1):
        if cur == ident:
            return k
        cur = _matmul(cur, g.mat)
    return None


def order_bound(matrix: CoxeterMatrix) -> int:
    """Bound on orders of finite-order elements used by the engine."""
    ms = [m for row in matrix.entries for m in row if m > 1]
    lcm = 1
    for m in ms:
        lcm = lcm * m // math.gcd(lcm, m)
    return max(2, 2 * lcm) * max(1, matrix.rank)


# ---------------------------------------------------------------------------
# diagram classification


class ComponentType(str, enum.Enum):
    SPHERICAL = "spherical"
    AFFINE = "affine"
    INDEFINITE = "indefinite"


def components(matrix: CoxeterMatrix, J: Iterable[int] | None = None) -> list[list[int]]:
    """Connected components of the diagram restricted to J (sorted)."""
    nodes = sorted(set(range(matrix.rank) if J is None else J))
    seen: set[int] = set()
    out = []
    for v in nodes:
        if v in seen:
            continue
        comp, stack = [], [v]
        seen.add(v)
        while stack:
            x = stack.pop()
            comp.append(x)
            for y in nodes:
                if y not in seen and matrix.entries[x][y] != 2:
                    seen.add(y)
                    stack.append(y)
        out.append(sorted(comp))
    return out


def classify_component_type(matrix: CoxeterMatrix, J: Iterable[int] | None = None) -> ComponentType:
    """Spherical / affine / indefinite type of a connected subdiagram."""
    return diagram_type(matrix, J)[0]


def diagram_type(matrix: CoxeterMatrix, J: Iterable[int] | None = None) -> tuple[ComponentType, str]:
    nodes = sorted(set(range(matrix.rank) if J is None else J))
    if not nodes:
        raise NotConnected("empty generator set")
    if len(components(matrix, nodes)) != 1:
        raise NotConnected(f"{nodes} does not induce a connected diagram")
    sub = matrix.submatrix(nodes)
    return _classify_connected(sub)


_SPH, _AFF, _IND = ComponentType.SPHERICAL, ComponentType.AFFINE, ComponentType.INDEFINITE


def _classify_connected(m: CoxeterMatrix) -> tuple[ComponentType, str]:
    n = m.rank
    if n == 1:
        return _SPH, "A1"
    edges = m.edges()
    if n == 2:
        k = edges[(0, 1)]
        if k == INF:
            return _AFF, "~A1"
        names = {3: "A2", 4: "B2", 6: "G2"}
        return _SPH, names.get(k, f"I2({k})")
    labels = list(edges.values())
    if INF in labels or any(k > 6 for k in labels):
        return _IND, "indefinite"
    adj: dict[int, list[int]] = {v: [] for v in range(n)}
    for (i, j) in edges:
        adj[i].append(j)
        adj[j].append(i)
    deg = {v: len(adj[v]) for v in adj}
    if len(edges) == n:
        if all(d == 2 for d in deg.values()) and all(k == 3 for k in labels):
            return _AFF, f"~A{n - 1}"
        return _IND, "indefinite"
    if len(edges) > n:
        return _IND, "indefinite"
    # tree
    branch = [v for v in adj if deg[v] >= 3]
    if any(deg[v] > 4 for v in adj):
        return _IND, "indefinite"
    if any(deg[v] == 4 for v in adj):
        if n == 5 and all(k == 3 for k in labels):
            return _AFF, "~D4"
        return _IND, "indefinite"
    if len(branch) > 2:
        return _IND, "indefinite"
    if len(branch) == 2:
        if not all(k == 3 for k in labels):
            return _IND, "indefinite"
        leaves_ok = all(sum(1 for u in adj[b] if deg[u] == 1) >= 2 for b in branch)
        return (_AFF, f"~D{n - 1}") if leaves_ok else (_IND, "indefinite")
    if len(branch) == 1:
        return _classify_star(m, adj, branch[0], edges)
    return _classify_path(m, adj, deg, edges)


def _label(edges: dict, i: int, j: int) -> int:
    return edges[(min(i, j), max(i, j))]


def _classify_star(m, adj, center, edges) -> tuple[ComponentType, str]:
    n = m.rank
    arms = []
    for start in adj[center]:
        arm, prev, cur = [start], center, start
        while True:
            nxt = [u for u in adj[cur] if u != prev]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
            arm.append(cur)
        arms.append(arm)
    non3 = [(e, k) for e, k in edges.items() if k != 3]
    lengths = sorted(len(a) for a in arms)
    if not non3:
        table = {
            (2, 2, 2): (_AFF, "~E6"),
            (1, 3, 3): (_AFF, "~E7"),
            (1, 2, 5): (_AFF, "~E8"),
            (1, 2, 2): (_SPH, "E6"),
            (1, 2, 3): (_SPH, "E7"),
            (1, 2, 4): (_SPH, "E8"),
        }
        if lengths[0] == 1 and lengths[1] == 1:
            return _SPH, f"D{n}"
        return table.get(tuple(lengths), (_IND, "indefinite"))
    if len(non3) == 1 and non3[0][1] == 4:
        (i, j), _ = non3[0]
        for arm in arms:
            others = [len(a) for a in arms if a is not arm]
            if others == [1, 1] and {arm[-1], arm[-2] if len(arm) > 1 else center} == {i, j}:
                return _AFF, f"~B{n - 1}"
    return _IND, "indefinite"


def _classify_path(m, adj, deg, edges) -> tuple[ComponentType, str]:
    n = m.rank
    start = min(v for v in adj if deg[v] == 1)
    order, prev, cur = [start], None, start
    while True:
        nxt = [u for u in adj[cur] if u != prev]
        if not nxt:
            break
        prev, cur = cur, nxt[0]
        order.append(cur)
    seq = [_label(edges, order[i], order[i + 1]) for i in range(n - 1)]
    if seq[0] != 3 and seq[-1] == 3:
        pass
    elif seq[-1] != 3 and seq[0] == 3:
        seq = seq[::-1]
    non3 = [(i, k) for i, k in enumerate(seq) if k != 3]
    if not non3:
        return _SPH, f"A{n}"
    if len(non3) == 1:
        pos, k = non3[0]
        at_end = pos in (0, n - 2)
        if k == 4:
            if at_end:
                return _SPH, f"B{n}"
            if n == 4 and pos == 1:
                return _SPH, "F4"
            if n == 5 and pos in (1, 2):
                return _AFF, "~F4"
            return _IND, "indefinite"
        if k == 5 and at_end and n in (3, 4):
            return _SPH, f"H{n}"
        if k == 6 and at_end and n == 3:
            return _AFF, "~G2"
        return _IND, "indefinite"
    if len(non3) == 2 and all(k == 4 for _, k in non3) and {p for p, _ in non3} == {0, n - 2}:
        return _AFF, f"~C{n - 1}"
    return _IND, "indefinite"


def component_types(matrix: CoxeterMatrix, J: Iterable[int] | None = None) -> list[tuple[list[int], ComponentType, str]]:
    """Type of every connected component of the diagram on J."""
    out = []
    for comp in components(matrix, J):
        kind, name = diagram_type(matrix, comp)
        out.append((comp, kind, name))
    return out


def is_spherical(matrix: CoxeterMatrix, J: Iterable[int] | None = None) -> bool:
    return all(kind is _SPH for _, kind, _ in component_types(matrix, J))


# ---------------------------------------------------------------------------
# named matrices used by tests, scripts and the CLI

NAMED: dict[str, list[list[int]]] = {
    "A1": [[1]],
    "A2": [[1, 3], [3, 1]],
    "A3": [[1, 3, 2], [3, 1, 3], [2, 3, 1]],
    "B2": [[1, 4], [4, 1]],
    "B3": [[1, 4, 2], [4, 1, 3], [2, 3, 1]],
    "H3": [[1, 5, 2], [5, 1, 3], [2, 3, 1]],
    "A1xA1": [[1, 2], [2, 1]],
    "~A1": [[1, 0], [0, 1]],
    "~A2": [[1, 3, 3], [3, 1, 3], [3, 3, 1]],
    "~C2": [[1, 4, 2], [4, 1, 4], [2, 4, 1]],
    "~G2": [[1, 6, 2], [6, 1, 3], [2, 3, 1]],
    "237": [[1, 2, 3], [2, 1, 7], [3, 7, 1]],
    "~A1xA1": [[1, 0, 2], [0, 1, 2], [2, 2, 1]],
    "RA3": [[1, 2, 0], [2, 1, 0], [0, 0, 1]],
}


def named_matrix(name: str) -> CoxeterMatrix:
    return validate_matrix(NAMED[name])
