"""Independent brute-force oracles in floating point.

Nothing here imports coxwalls: roots come from enumerating group elements as
numpy matrices, half-space containment from scanning chambers, and so on.
Tolerances are loose enough for floats and tight enough to separate the
exact values the package claims.
"""

from __future__ import annotations

import functools
import itertools
import math

import numpy as np

TOL = 1e-8


def gram(entries) -> np.ndarray:
    n = len(entries)
    B = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            m = entries[i][j]
            B[i, j] = 1.0 if i == j else (-1.0 if m == 0 else -math.cos(math.pi / m))
    return B


def simple_reflections(entries) -> list[np.ndarray]:
    B = gram(entries)
    n = len(entries)
    out = []
    for s in range(n):
        R = np.eye(n)
        # s(x) = x - 2 (x, a_s) a_s, acting on coordinate columns
        R[s, :] -= 2 * B[s, :]
        out.append(R)
    return out


def _key(v: np.ndarray) -> tuple:
    return tuple(np.round(v, 7) + 0.0)


def group_ball(entries, length: int) -> list[tuple[tuple[int, ...], np.ndarray]]:
    """Elements of length <= length as (reduced word, matrix), by BFS on matrices."""
    S = simple_reflections(entries)
    n = len(entries)
    e = np.eye(n)
    seen = {_key(e.ravel())}
    out = [((), e)]
    frontier = [((), e)]
    for _ in range(length):
        nxt = []
        for w, M in frontier:
            for s in range(n):
                M2 = M @ S[s]
                k = _key(M2.ravel())
                if k not in seen:
                    seen.add(k)
                    nxt.append((w + (s,), M2))
        out.extend(nxt)
        frontier = nxt
    return out


def positive_root_vectors(entries, max_depth: int) -> dict[tuple, tuple[np.ndarray, int]]:
    """key -> (vector, depth) with depth(b) = 1 + min l(w) over w, s with w a_s = b positive."""
    n = len(entries)
    out: dict[tuple, tuple[np.ndarray, int]] = {}
    for w, M in group_ball(entries, max_depth - 1):
        for s in range(n):
            v = M[:, s]
            if np.all(v > -TOL):
                k = _key(v)
                d = len(w) + 1
                if k not in out or d < out[k][1]:
                    out[k] = (v.copy(), d)
    return out


def positive_roots_by_depth(entries, max_depth: int) -> dict[tuple, int]:
    return {k: d for k, (_, d) in positive_root_vectors(entries, max_depth).items()}


def orbit_closure_count(entries, cap: int = 10000) -> int:
    """Number of positive roots of a finite group, by closing the simple roots under reflections."""
    S = simple_reflections(entries)
    n = len(entries)
    seen = {}
    frontier = [np.eye(n)[:, s] for s in range(n)]
    for v in frontier:
        seen[_key(v)] = v
    while frontier:
        nxt = []
        for v in frontier:
            for R in S:
                u = R @ v
                k = _key(u)
                if k not in seen:
                    seen[k] = u
                    nxt.append(u)
                    if len(seen) > cap:
                        raise RuntimeError("orbit closure does not terminate (infinite group?)")
        frontier = nxt
    return sum(1 for v in seen.values() if np.all(v > -TOL))


def is_spherical(entries, J) -> bool:
    if not J:
        return True
    B = gram(entries)[np.ix_(J, J)]
    return bool(np.all(np.linalg.eigvalsh(B) > TOL))


def spherical_root_sets(entries) -> list[list[np.ndarray]]:
    """All roots (both signs) of each maximal spherical standard parabolic."""
    n = len(entries)
    sph = [J for k in range(1, n + 1) for J in itertools.combinations(range(n), k) if is_spherical(entries, list(J))]
    maxi = [J for J in sph if not any(set(J) < set(K) for K in sph)]
    S = simple_reflections(entries)
    out = []
    for J in maxi:
        seen = {}
        frontier = [np.eye(n)[:, s] for s in J]
        for v in frontier:
            seen[_key(v)] = v
        while frontier:
            nxt = []
            for v in frontier:
                for s in J:
                    u = S[s] @ v
                    k = _key(u)
                    if k not in seen:
                        seen[k] = u
                        nxt.append(u)
            frontier = nxt
        out.append(list(seen.values()))
    return out


def kappa(entries) -> float:
    B = gram(entries)
    best = 0.0
    for rs in spherical_root_sets(entries):
        for a, b in itertools.combinations(rs, 2):
            v = abs(a @ B @ b)
            if v < 1 - TOL:
                best = max(best, v)
    return best


def lambda_fin(entries) -> float:
    B = gram(entries)
    best = None
    for rs in spherical_root_sets(entries):
        for phi, psi in itertools.permutations(rs, 2):
            if np.allclose(phi, -psi) or abs(phi @ B @ psi) >= 1 - TOL:
                continue
            A = np.array([phi, psi]).T
            for a in rs:
                sol, *_ = np.linalg.lstsq(A, a, rcond=None)
                if np.linalg.norm(A @ sol - a) < 1e-7:
                    best = sol[0] if best is None else max(best, sol[0])
    return 1.0 if best is None else float(best)


@functools.lru_cache(maxsize=None)
def _inverses(entries: tuple, radius: int) -> np.ndarray:
    return np.array([np.linalg.inv(M) for _, M in group_ball(entries, radius)])


def chamber_inverses(entries, radius: int) -> np.ndarray:
    return _inverses(tuple(map(tuple, entries)), radius)


def containment(entries, a: np.ndarray, b: np.ndarray, radius: int) -> bool:
    """zeta(a) within zeta(b) on every chamber w.C of the ball: w.C in zeta(a) iff w^-1 a > 0.

    One-sided: a False is certain, a True only holds on the ball.
    """
    inv = chamber_inverses(entries, radius)
    in_a = np.all(inv @ a > -TOL, axis=1)
    in_b = np.all(inv @ b > -TOL, axis=1)
    return not bool(np.any(in_a & ~in_b))


def separating_walls(entries, a: np.ndarray, b: np.ndarray, candidates, radius: int) -> list[np.ndarray]:
    """Walls c with zeta(a) inside one side of c and zeta(b) inside the other, on the ball."""
    out = []
    inv = chamber_inverses(entries, radius)
    in_a = np.all(inv @ a > -TOL, axis=1)
    in_b = np.all(inv @ b > -TOL, axis=1)
    for c in candidates:
        for sgn in (1, -1):
            in_c = np.all(inv @ (sgn * c) > -TOL, axis=1)
            if not np.any(in_a & ~in_c) and not np.any(in_b & in_c):
                out.append(sgn * c)
                break
    return out


def count_covers(n: int) -> int:
    """Families of distinct nonempty subsets of an n-set covering it, by bitmask brute force."""
    subsets = list(range(1, 1 << n))
    full = (1 << n) - 1
    count = 0
    for fam in range(1, 1 << len(subsets)):
        u = 0
        for k, s in enumerate(subsets):
            if (fam >> k) & 1:
                u |= s
        if u == full:
            count += 1
    return count


def finite_orientations(entries) -> tuple[int, int]:
    """(consistent orientations, chambers) for a finite group, walls as sets of chambers."""
    els = group_ball(entries, 64)
    rts = [v for v, _ in positive_root_vectors(entries, 64).values()]
    chambers = [np.linalg.inv(M) for _, M in els]
    sides = [frozenset(i for i, Mi in enumerate(chambers) if np.all(Mi @ r > -TOL)) for r in rts]
    everything = frozenset(range(len(chambers)))
    consistent = 0
    for choice in itertools.product((0, 1), repeat=len(rts)):
        hs = [sides[i] if c == 0 else everything - sides[i] for i, c in enumerate(choice)]
        if all(x & y for x, y in itertools.combinations(hs, 2)):
            consistent += 1
    return consistent, len(chambers)
