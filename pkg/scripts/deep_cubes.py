"""Scan cubes on pairwise-crossing wall sets and check deep ones for affine rank-3 parts."""

import argparse
import collections
import json

from coxwalls.algebra import named_matrix
from coxwalls.cubes import WallSpace, deep_cube_scan


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--group", default="~A2")
    p.add_argument("--inventory-depth", type=int, default=12)
    p.add_argument("--ball-radius", type=int, default=10)
    p.add_argument("--wall-depth", type=int, default=6)
    p.add_argument("--threshold", type=int, default=2)
    a = p.parse_args()
    sp = WallSpace(named_matrix(a.group), a.inventory_depth, ball_radius=a.ball_radius)
    reps = deep_cube_scan(sp, a.wall_depth, a.threshold)
    by_d = collections.Counter(r.distance for r in reps)
    claims = [r for r in reps if r.claim]
    print(json.dumps({
        "group": a.group,
        "scanned": len(reps),
        "by_distance": dict(sorted(by_d.items())),
        "claims": len(claims),
        "confirmed_affine_rank3": sum(1 for r in claims if r.affine_rank3),
        "counterexamples": [r.to_json() for r in claims if not r.affine_rank3],
    }, indent=2))


if __name__ == "__main__":
    main()
