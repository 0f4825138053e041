"""Conjugacy classes of 2-spherical reflection subgroups, with counts as the depth grows."""

import argparse
import json

from coxwalls.algebra import named_matrix
from coxwalls.cubes import co_hopf, enumerate_2spherical_classes


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--groups", nargs="+", default=["A2", "A1xA1", "~A2", "237"])
    p.add_argument("--depths", nargs="+", type=int, default=[2, 3, 4])
    a = p.parse_args()
    out = {}
    for name in a.groups:
        M = named_matrix(name)
        out[name] = {
            "co_hopfian": co_hopf(M).co_hopfian,
            "classes": {d: [c.type_name for c in enumerate_2spherical_classes(M, d).classes] for d in a.depths},
        }
    print(json.dumps(out, indent=2))


if __name__ == "__main__":
    main()
