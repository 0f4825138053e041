"""kappa, lambda, K and the A upper bound for a list of groups."""

import argparse
import json

from coxwalls.algebra import named_matrix
from coxwalls.cubes import constant_A_bound, constant_K
from coxwalls.errors import EpsilonUndefined
from coxwalls.roots import constant_kappa, constant_lambda_fin, constant_lambda_max
from coxwalls.walls import max_crossing_clique


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--groups", nargs="+", default=["A2", "B2", "~A2", "237"])
    p.add_argument("--depth", type=int, default=6)
    a = p.parse_args()
    out = {}
    for name in a.groups:
        M = named_matrix(name)
        row = {
            "kappa": float(constant_kappa(M).value),
            "lambda_fin": float(constant_lambda_fin(M).value),
            "lambda_max": float(constant_lambda_max(M).value),
        }
        try:
            k = constant_K(M, a.depth)
            n_hat, _ = max_crossing_clique(M, a.depth)
            row["K"] = k.value
            row["A"] = constant_A_bound(k.value, n_hat).to_json()
        except EpsilonUndefined as exc:
            row["K"] = f"undefined: {exc}"
        out[name] = row
    print(json.dumps(out, indent=2))


if __name__ == "__main__":
    main()
