"""Command-line front end: one subcommand per operation family, one JSON report per run."""

from __future__ import annotations

import argparse
import json
import os
import sys
import traceback
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import __version__
from .algebra import NAMED, CoxeterMatrix, Root, element_from_word, named_matrix, simple_root, validate_matrix
from .chains import (
    chain_constants,
    check_ladder,
    classify_chain,
    classify_dihedral_pair,
    estimate_epsilon,
    r_table,
    validate_chain,
)
from .config import RunConfig
from .cubes import (
    WallSpace,
    co_hopf,
    constant_A_bound,
    constant_K,
    cubes_at_corner,
    cubical_chamber_vertices,
    deep_cube_scan,
    enumerate_2spherical_classes,
)
from .errors import CoxwallsError, EpsilonUndefined, InvariantViolation, ResourceLimit, ValidationError
from .roots import constant_kappa, constant_lambda_fin, constant_lambda_max, enumerate_roots, small_roots
from .walls import estimate_Q, find_separating_wall, max_crossing_clique


# ---------------------------------------------------------------------------
# input parsing


def load_matrix(source: str) -> CoxeterMatrix:
    """A JSON file {"rank": n, "matrix": [[...]]} (0 = infinity), or a built-in name."""
    p = Path(source)
    if p.exists():
        try:
            data = json.loads(p.read_text())
        except json.JSONDecodeError as exc:
            raise ValidationError(f"matrix file is not valid JSON: {exc}") from None
        raw = data["matrix"] if isinstance(data, dict) else data
        m = validate_matrix(raw)
        if isinstance(data, dict) and "rank" in data and data["rank"] != m.rank:
            raise ValidationError("declared rank does not match the matrix")
        return m
    if source in NAMED:
        return named_matrix(source)
    raise ValidationError(f"no matrix file or built-in matrix named {source!r}")


def parse_root(matrix: CoxeterMatrix, text: str) -> Root:
    """'[1,2]' (coordinates in the simple basis) or 'w@s' with w a dot-separated word."""
    text = text.strip()
    if "@" in text:
        w, s = text.split("@")
        word = [int(x) for x in w.split(".") if x.strip()] if w.strip() else []
        g = element_from_word(matrix, word)
        return g.act(simple_root(matrix, int(s)))
    try:
        vals = json.loads(text)
    except json.JSONDecodeError:
        vals = [x for x in text.strip("[]").split(",")]
    try:
        coords = [Fraction(str(v)) for v in vals]
    except ValueError:
        raise ValidationError(f"cannot parse root {text!r}") from None
    if len(coords) != matrix.rank:
        raise ValidationError(f"root {text!r} does not have {matrix.rank} coordinates")
    return Root.from_numbers(matrix, coords)


def parse_roots(matrix: CoxeterMatrix, text: str) -> list[Root]:
    text = text.strip()
    if "@" in text:
        return [parse_root(matrix, t) for t in text.split(",")]
    try:
        data = json.loads("[" + text + "]")
    except json.JSONDecodeError:
        raise ValidationError(f"cannot parse root list {text!r}") from None
    if data and not isinstance(data[0], list):
        data = [data]
    return [parse_root(matrix, json.dumps(v)) for v in data]


def _check_root(r: Root, max_steps: int = 100000) -> Root:
    """Reject vectors that are not roots: descend to a simple root or fail."""
    from .algebra import reflect_simple

    v = r.positive() if r.sign() != 0 else None
    if v is None:
        raise ValidationError(f"{r} is not a root")
    simple = {simple_root(r.matrix, s) for s in range(r.matrix.rank)}
    for _ in range(max_steps):
        if v in simple:
            return r
        bv = v.gram_image()
        s = next((s for s in range(r.matrix.rank) if bv[s].sign() > 0), None)
        if s is None:
            break
        v = reflect_simple(s, v)
        if not v.is_positive():
            break
    raise ValidationError(f"{r} is not a root")


# ---------------------------------------------------------------------------
# subcommands


def cmd_roots(m: CoxeterMatrix, a: argparse.Namespace, cfg: RunConfig) -> dict:
    inv = enumerate_roots(m, cfg.depth, cfg.max_roots)
    sm = small_roots(m, cfg.max_roots)
    return {
        "count": len(inv),
        "stabilized": inv.stabilized,
        "by_depth": {str(d): len(v) for d, v in sorted(inv.by_depth().items())},
        "roots": [{"coords": r.to_json(), "depth": d} for r, d in zip(inv.roots, inv.depths)],
        "small_roots": [r.to_json() for r in sm.roots],
    }


def cmd_constants(m: CoxeterMatrix, a: argparse.Namespace, cfg: RunConfig) -> dict:
    kap = constant_kappa(m)
    lfin = constant_lambda_fin(m)
    lmax = constant_lambda_max(m, cfg.max_roots)
    cfg.check_budget()
    eps = estimate_epsilon(m, cfg.depth)
    out = {
        "kappa": kap.to_json(),
        "lambda_fin": lfin.to_json(),
        "lambda_max": lmax.to_json(),
        "epsilon_hat": eps.to_json(),
    }
    cc = chain_constants(m, cfg.depth)
    if kap.value >= 1:
        out["L"] = None
        out["r_table"] = None
        out["K"] = None
        return out
    out["L"] = cc.L.to_json()
    out["r_table"] = r_table(32, eps.value, kap.value) if eps.defined else None
    try:
        out["K"] = constant_K(m, cfg.depth).to_json()
    except EpsilonUndefined as exc:
        out["K"] = {"K": None, "error": "EpsilonUndefined", "detail": str(exc)}
    return out


def cmd_chain_check(m: CoxeterMatrix, a: argparse.Namespace, cfg: RunConfig) -> dict:
    roots = [_check_root(r) for r in parse_roots(m, a.roots)]
    inv = enumerate_roots(m, max(cfg.depth, 2 + max(_depth(r) for r in roots)), cfg.max_roots)
    chain = validate_chain(roots, inv)
    verdict = classify_chain(chain, inv)
    return {"chain": chain.to_json(), "verdict": verdict.to_json()}


def _depth(r: Root) -> int:
    from .roots import depth_of

    return depth_of(r)


def cmd_separate(m: CoxeterMatrix, a: argparse.Namespace, cfg: RunConfig) -> dict:
    roots = [_check_root(r) for r in parse_roots(m, a.roots)]
    if len(roots) != 2:
        raise ValidationError("separate takes exactly two roots")
    rep = find_separating_wall(roots[0], roots[1], cfg.radius)
    out = {"report": rep.to_json()}
    if a.estimate_q:
        cfg.check_budget()
        out["Q_hat"] = estimate_Q(m, cfg.depth).to_json()
    return out


def cmd_ladder(m: CoxeterMatrix, a: argparse.Namespace, cfg: RunConfig) -> dict:
    mu = _check_root(parse_root(m, a.mu))
    mup = _check_root(parse_root(m, a.mu_prime))
    walls = [_check_root(r) for r in parse_roots(m, a.walls)]
    return {"ladder": check_ladder(mu, mup, walls).to_json()}


def cmd_dihedral(m: CoxeterMatrix, a: argparse.Namespace, cfg: RunConfig) -> dict:
    roots = [_check_root(r) for r in parse_roots(m, a.roots)]
    if len(roots) != 2:
        raise ValidationError("dihedral-pair takes exactly two roots")
    eps = estimate_epsilon(m, cfg.depth)
    return {"pair": classify_dihedral_pair(roots[0], roots[1], eps), "epsilon_hat": eps.to_json()}


def cmd_cubes(m: CoxeterMatrix, a: argparse.Namespace, cfg: RunConfig) -> dict:
    depth = max(cfg.depth, 2 * cfg.radius + 4)
    sp = WallSpace(m, depth, ball_radius=min(cfg.radius, depth - 1))
    v0 = element_from_word(m, [int(x) for x in a.chamber.split(".") if x.strip()]) if a.chamber else None
    verts = cubical_chamber_vertices(sp, cfg.radius, cap=cfg.max_chambers)
    cfg.check_budget()
    by_dim: dict[str, int] = {}
    witnesses = []
    n_cubes = 0
    for F in verts:
        for c in cubes_at_corner(sp, F):
            by_dim[str(c.dim)] = by_dim.get(str(c.dim), 0) + 1
            n_cubes += 1
            if n_cubes > cfg.max_cubes:
                raise ResourceLimit("cube count exceeds max_cubes")
            if c.dim >= 2 and len(witnesses) < 8 and c.dim == max(int(k) for k in by_dim):
                witnesses.append(c.to_json(sp))
        cfg.check_budget()
    sizes = [sum(1 for F in verts if F.bit_count() <= r) for r in range(cfg.radius + 1)]
    shown = verts if v0 is None else [sp.translate(v0, F) for F in verts]
    out = {
        "vertices": {
            "count": len(verts),
            "sizes_by_radius": sizes,
            "chamber_of": list(v0.word) if v0 is not None else [],
            "flip_sets": [[r.to_json() for r in sp.roots_of(F)] for F in shown[:64]],
            "truncated_listing": len(verts) > 64,
        },
        "cubes_by_dim": dict(sorted(by_dim.items())),
        "witnesses": witnesses,
        "inventory_depth": depth,
    }
    if a.count_orbits:
        # every cube of X is a translate of one whose bottom corner lies in the chamber of 1
        out["orbit_counts"] = {"upper_bound_by_dim": dict(sorted(by_dim.items())),
                               "complete": sizes[-1] == sizes[-2] if len(sizes) > 1 else False}
    else:
        out["orbit_counts"] = None
    if a.deep_check:
        reps = deep_cube_scan(sp, a.deep_check_depth, a.deep_threshold)
        claims = [r for r in reps if r.claim]
        out["deep_check"] = {
            "threshold": a.deep_threshold,
            "wall_depth": a.deep_check_depth,
            "cubes_scanned": len(reps),
            "claims": len(claims),
            "claims_confirmed": sum(1 for r in claims if r.affine_rank3),
            "failures": [r.to_json() for r in claims if not r.affine_rank3],
        }
    return out


def cmd_classes(m: CoxeterMatrix, a: argparse.Namespace, cfg: RunConfig) -> dict:
    return enumerate_2spherical_classes(m, cfg.depth).to_json()


def cmd_cohopf(m: CoxeterMatrix, a: argparse.Namespace, cfg: RunConfig) -> dict:
    return co_hopf(m).to_json()


def cmd_cube_bounds(m: CoxeterMatrix, a: argparse.Namespace, cfg: RunConfig) -> dict:
    k = constant_K(m, cfg.depth)
    n_hat, _ = max_crossing_clique(m, cfg.depth)
    return {"K": k.to_json(), "A": constant_A_bound(k.value, n_hat).to_json()}


COMMANDS = {
    "roots": cmd_roots,
    "constants": cmd_constants,
    "chain-check": cmd_chain_check,
    "separate": cmd_separate,
    "ladder-check": cmd_ladder,
    "dihedral-pair": cmd_dihedral,
    "cubes": cmd_cubes,
    "classes": cmd_classes,
    "cohopf": cmd_cohopf,
    "cube-bounds": cmd_cube_bounds,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="coxwalls", description="Exact wall combinatorics of Coxeter groups.")
    p.add_argument("--version", action="version", version=f"coxwalls {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp: argparse.ArgumentParser) -> None:
        sp.add_argument("--matrix", required=True, help="JSON file or built-in name (e.g. ~A2)")
        sp.add_argument("--depth", type=int, default=6)
        sp.add_argument("--radius", type=int, default=6)
        sp.add_argument("--format", choices=("json", "text"), default="json")
        sp.add_argument("--output")
        sp.add_argument("--precision", type=int, default=20)
        sp.add_argument("--max-roots", type=int, default=200000)
        sp.add_argument("--max-chambers", type=int, default=200000)
        sp.add_argument("--max-cubes", type=int, default=200000)
        sp.add_argument("--budget", type=float, default=600.0, help="wall-clock seconds")
        sp.add_argument("--repro-dir", default=".")

    for name in COMMANDS:
        sp = sub.add_parser(name)
        common(sp)
        if name in ("chain-check", "separate", "dihedral-pair"):
            sp.add_argument("--roots", required=True)
        if name == "separate":
            sp.add_argument("--estimate-q", action="store_true")
        if name == "ladder-check":
            sp.add_argument("--mu", required=True)
            sp.add_argument("--mu-prime", required=True)
            sp.add_argument("--walls", required=True)
        if name == "cubes":
            sp.add_argument("--count-orbits", action="store_true")
            sp.add_argument("--chamber", default="", help="dot-separated word of v0")
            sp.add_argument("--deep-check", action="store_true")
            sp.add_argument("--deep-threshold", type=int, default=2)
            sp.add_argument("--deep-check-depth", type=int, default=4)
    return p


def _text(obj, indent: int = 0) -> list[str]:
    pad = "  " * indent
    if isinstance(obj, dict):
        out = []
        for k in sorted(obj):
            v = obj[k]
            if isinstance(v, (dict, list)) and v:
                out.append(f"{pad}{k}:")
                out.extend(_text(v, indent + 1))
            else:
                out.append(f"{pad}{k}: {json.dumps(v, sort_keys=True)}")
        return out
    if isinstance(obj, list):
        return [f"{pad}- {json.dumps(v, sort_keys=True)}" for v in obj]
    return [f"{pad}{json.dumps(obj)}"]


def render(report: dict, fmt: str) -> str:
    if fmt == "text":
        return "\n".join(_text(report)) + "\n"
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def run_command(argv: Sequence[str]) -> tuple[int, dict]:
    args = build_parser().parse_args(list(argv))
    report: dict = {"tool": "coxwalls", "version": __version__, "command": args.command}
    try:
        cfg = RunConfig(matrix_path=args.matrix, depth=args.depth, radius=args.radius,
                        max_roots=args.max_roots, max_chambers=args.max_chambers, max_cubes=args.max_cubes,
                        budget_seconds=args.budget, output=args.output, precision=args.precision)
        report["limits"] = cfg.limits()
        m = load_matrix(args.matrix)
        report["matrix"] = m.to_json()
        report["matrix_digest"] = m.digest()
        report["result"] = COMMANDS[args.command](m, args, cfg)
        code = 0
    except ValidationError as exc:
        code = exc.exit_code
        report["error"] = {"kind": type(exc).__name__, "detail": str(exc)}
    except ResourceLimit as exc:
        code = exc.exit_code
        report["error"] = {"kind": type(exc).__name__, "detail": str(exc)}
    except (InvariantViolation, AssertionError, ArithmeticError, KeyError, IndexError, ValueError) as exc:
        code = 4
        report["error"] = {"kind": type(exc).__name__, "detail": str(exc)}
        report["reproduction_bundle"] = _write_bundle(args, argv, exc)
    except CoxwallsError as exc:
        code = exc.exit_code
        report["error"] = {"kind": type(exc).__name__, "detail": str(exc)}
    report["exit_code"] = code
    _emit(render(report, args.format), args.output)
    return code, report


def _write_bundle(args: argparse.Namespace, argv: Sequence[str], exc: BaseException) -> str:
    bundle = {
        "argv": list(argv),
        "version": __version__,
        "matrix_source": Path(args.matrix).read_text() if Path(args.matrix).exists() else args.matrix,
        "error": repr(exc),
        "traceback": traceback.format_exception(type(exc), exc, exc.__traceback__),
        "threads": os.environ.get("COXWALLS_THREADS"),
    }
    path = Path(args.repro_dir) / f"coxwalls-repro-{args.command}.json"
    path.write_text(json.dumps(bundle, sort_keys=True, indent=2))
    return str(path)


def main(argv: Sequence[str] | None = None) -> int:
    code, _ = run_command(sys.argv[1:] if argv is None else argv)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
