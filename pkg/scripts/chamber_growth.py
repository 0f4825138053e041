"""Cubical-chamber sizes per radius, deepening the root inventory until they agree."""

import argparse
import json
import time

from coxwalls.algebra import named_matrix
from coxwalls.cubes import chamber_profile


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--groups", nargs="+", default=["~A2", "237"])
    p.add_argument("--radius", type=int, default=8)
    a = p.parse_args()
    out = {}
    for name in a.groups:
        t = time.perf_counter()
        prof = chamber_profile(named_matrix(name), a.radius)
        out[name] = {**prof.to_json(), "seconds": round(time.perf_counter() - t, 1)}
    print(json.dumps(out, indent=2))


if __name__ == "__main__":
    main()
