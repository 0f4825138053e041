"""Q-hat and epsilon-hat across search depths, to see where the estimates settle.

    python3 scripts/separation_baselines.py --groups ~A2 237 --depths 3 4 5 6
"""

import argparse
import json

from coxwalls.algebra import named_matrix
from coxwalls.chains import estimate_epsilon
from coxwalls.walls import estimate_Q


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--groups", nargs="+", default=["~A1", "~A2", "~C2", "237"])
    p.add_argument("--depths", nargs="+", type=int, default=[3, 4, 5, 6])
    a = p.parse_args()
    rows = []
    for name in a.groups:
        M = named_matrix(name)
        for d in a.depths:
            q = estimate_Q(M, d)
            e = estimate_epsilon(M, d)
            rows.append({
                "group": name, "depth": d, "Q_hat": q.value,
                "parallel_pairs": q.pairs_checked, "separated": q.separated,
                "epsilon_hat": float(e.value) if e.defined else None,
            })
    print(json.dumps(rows, indent=2))


if __name__ == "__main__":
    main()
