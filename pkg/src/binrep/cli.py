"""Command-line interface.

Exit status: 0 success, 2 usage error, 3 invalid input (bad representation
file, mismatched sizes), 4 a theorem check failed.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from . import experiments
from . import locality as loc
from .errors import BinrepError
from .fitness import DEJONG, OneMaxTarget, count_local_maxima
from .gea import ESConfig, GAConfig, GenerationStats, SAConfig, run_es, run_ga, run_sa
from .markov import (MarkovModel, absorption_probabilities, phenotype_trajectory)
from .representation import (KINDS, Representation, is_gray, load, make_brg,
                             make_harper_max, make_harper_min, make_random, make_sb,
                             make_suboptimal_gray, named, save, serialize)

EXIT_OK, EXIT_USAGE, EXIT_INVALID, EXIT_THEOREM = 0, 2, 3, 4


class CheckFailed(Exception):
    pass


def resolve_repr(spec: str, ell: int, seed: int = 0) -> Representation:
    """``sb``, ``brg``, ``ngg``, ``ubl`` or ``file:PATH``."""
    if spec.startswith("file:"):
        r = load(spec[5:])
        if r.ell != ell:
            raise BinrepError(f"{spec} has ell={r.ell}, expected {ell}")
        return r
    return named(spec, ell, seed)


# -- output helpers -----------------------------------------------------------

def write_manifest(out: Path, argv: Sequence[str], params: dict, outputs: Sequence[Path]):
    manifest = {
        "command": argv[0] if argv else "",
        "argv": list(argv),
        "parameters": params,
        "master_seed": params.get("seed"),
        "version": __version__,
        "outputs": [str(p) for p in outputs],
    }
    out.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def stats_csv(stats: Sequence[GenerationStats]) -> str:
    return "\n".join([GenerationStats.CSV_HEADER] + [s.csv_row() for s in stats]) + "\n"


def _fmt(x) -> str:
    if isinstance(x, float):
        return f"{x:.6g}"
    return str(x)


def rows_csv(header: str, rows) -> str:
    return "\n".join([header] + [",".join(_fmt(v) for v in row) for row in rows]) + "\n"


def emit(text: str, out: Optional[str], args, argv) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    path = Path(out)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    params = {k: v for k, v in vars(args).items() if k != "func"}
    write_manifest(path.with_name(path.name + ".manifest.json"), argv, params, [path])


# -- subcommands --------------------------------------------------------------

_MAKERS = {
    "sb": lambda ell, seed: make_sb(ell),
    "brg": lambda ell, seed: make_brg(ell),
    "random": make_random,
    "harper-min": make_harper_min,
    "harper-max": make_harper_max,
    "suboptimal-gray": make_suboptimal_gray,
}


def cmd_repr_make(args, argv):
    if args.kind in _MAKERS:
        r = _MAKERS[args.kind](args.ell, args.seed)
    else:
        r = named(args.kind, args.ell, args.seed)
    if args.out:
        save(r, args.out)
    else:
        print(serialize(r))
    return EXIT_OK


def cmd_repr_inspect(args, argv):
    r = load(args.repr_file)
    lo, hi = loc.point_locality_bounds(r.ell)
    p = loc.point_locality(r)
    print(f"ell={r.ell}")
    print(f"is_gray={is_gray(r)}")
    print(f"point_locality={float(p):.3f} ({p})")
    print(f"bounds=[{float(lo):.3f}, {float(hi):.3f}]")
    print(f"dm={loc.rothlauf_dm(r)}")
    return EXIT_OK


def cmd_locality_report(args, argv):
    r = load(args.repr_file)
    rep = loc.locality_report(r, general=args.general, max_ell=args.max_ell)
    print("ell,point_locality,dm,general_locality,dc")
    print(rep.csv_row())
    return EXIT_OK


def cmd_local_maxima(args, argv):
    r = load(args.repr_file)
    report = count_local_maxima(OneMaxTarget(r.ell, args.target), r)
    print(f"count,{report.count}")
    print("genotype,phenotype,fitness")
    for g, p, f in report.maxima:
        print(f"{g},{p},{f}")
    return EXIT_OK


def cmd_sa(args, argv):
    r = resolve_repr(args.repr, args.ell, args.repr_seed)
    cfg = SAConfig(ell=args.ell, a=args.target, initial_temperature=args.t0,
                   cooling_factor=args.cooling, max_generations=args.generations,
                   trials=args.trials, master_seed=args.seed)
    emit(stats_csv(run_sa(cfg, r)), args.out, args, argv)
    return EXIT_OK


def cmd_es(args, argv):
    r = resolve_repr(args.repr, args.ell, args.repr_seed)
    cfg = ESConfig(ell=args.ell, a=args.target, mutation_rate=args.mutation_rate,
                   max_generations=args.generations, trials=args.trials,
                   master_seed=args.seed)
    res = run_es(cfg, r)
    emit(stats_csv(res.stats), args.out, args, argv)
    summary = ("mean_generations_to_optimum,converged_fraction\n"
               f"{res.mean_generations_to_optimum:.6g},{res.converged_fraction:.6g}\n")
    (sys.stdout if args.out else sys.stderr).write(summary)
    return EXIT_OK


def cmd_ga(args, argv):
    spec = DEJONG[args.function]
    if args.bits:
        spec = spec.with_bits(args.bits)
    r = resolve_repr(args.repr, spec.bits_per_dim, args.repr_seed)
    cfg = GAConfig(spec, r, population_size=args.population,
                   crossover_rate=args.crossover_rate, mutation_rate=args.mutation_rate,
                   generations=args.generations, trials=args.trials, master_seed=args.seed)
    emit(stats_csv(run_ga(cfg)), args.out, args, argv)
    return EXIT_OK


def cmd_markov(args, argv):
    r = resolve_repr(args.repr, args.ell, args.repr_seed)
    model = MarkovModel(r, args.target, args.t0, args.cooling, args.fixed_temp)
    traj = phenotype_trajectory(model, args.generations)
    maxima = [p for _, p, _ in count_local_maxima(OneMaxTarget(r.ell, args.target), r).maxima
              if p != args.target]
    header = ",".join(["generation", "mass_at_optimum"] + [f"mass_at_{p}" for p in maxima])
    rows = [[g, float(traj[g, args.target])] + [float(traj[g, p]) for p in maxima]
            for g in range(len(traj))]
    emit(rows_csv(header, rows), args.out, args, argv)
    if args.absorption:
        for c in absorption_probabilities(model):
            print("absorption," + " ".join(map(str, c.phenotypes)) + f",{c.probability:.6g}",
                  file=sys.stderr)
    return EXIT_OK


def _check(results, name, ok, detail=""):
    results.append((name, bool(ok), detail))


def run_verification(max_ell: int, trials: int, seed: int, seeds: int = 5,
                     extra: Sequence[Representation] = ()) -> list[tuple[str, bool, str]]:
    """Theorem checks used by ``verify``; returns (name, passed, detail) triples."""
    results: list[tuple[str, bool, str]] = []
    for ell in range(1, min(max_ell, 3) + 1):
        rep = loc.verify_bounds_exhaustive(ell)
        _check(results, f"exhaustive ell={ell}", rep.ok,
               f"min={rep.minimum} max={rep.maximum} mean={rep.mean} over {rep.count}")
    for ell in range(1, max_ell + 1):
        lo, hi = loc.point_locality_bounds(ell)
        cands = [("sb", make_sb(ell)), ("brg", make_brg(ell))]
        cands += [(f"harper-min seed={s}", make_harper_min(ell, seed + s)) for s in range(seeds)]
        for label, r in cands:
            p = loc.point_locality(r)
            _check(results, f"lower bound attained ell={ell} {label}", p == lo, f"p={p}")
        for s in range(seeds):
            p = loc.point_locality(make_harper_max(ell, seed + s))
            _check(results, f"upper bound attained ell={ell} harper-max seed={s}", p == hi,
                   f"p={p}")
        for s in range(seeds):
            r = make_random(ell, seed + s)
            p = loc.point_locality(r)
            dm = loc.rothlauf_dm(r)
            ident = Fraction(dm, ell << (ell - 1)) + 1 == p
            _check(results, f"bounds+dm identity ell={ell} random seed={s}",
                   lo <= p <= hi and ident, f"p={p} dm={dm}")
            if ell <= 8:
                g = loc.general_locality_sum(r)
                bound = loc.general_locality_lower_bound(ell)
                _check(results, f"general lower bound ell={ell} random seed={s}",
                       Fraction(g, (1 << ell) * ((1 << ell) - 1) // 2) >= bound)
        if ell >= 3:
            for s in range(min(seeds, 3)):
                r = make_suboptimal_gray(ell, s)
                p = loc.point_locality(r)
                _check(results, f"suboptimal gray ell={ell} seed={s}", is_gray(r) and p > lo,
                       f"p={p}")
        expected = loc.expected_point_locality(ell)
        mean, se = loc.monte_carlo_expected_locality(ell, trials, seed + ell)
        ok = abs(mean - float(expected)) <= 3 * se if se > 0 else mean == float(expected)
        _check(results, f"monte carlo mean ell={ell}", ok,
               f"mean={mean:.4f} se={se:.4f} expected={float(expected):.4f}")
    for k, r in enumerate(extra):
        lo, hi = loc.point_locality_bounds(r.ell)
        p = loc.point_locality(r)
        _check(results, f"supplied representation #{k} bounds", lo <= p <= hi,
               f"p={p} perm={r.tolist() if r.ell <= 6 else '...'}")
    return results


def cmd_verify(args, argv):
    if not 1 <= args.max_ell <= 10:
        raise BinrepError("--max-ell must lie in [1, 10]")
    extra = [load(f) for f in args.repr_file or ()]
    results = run_verification(args.max_ell, args.trials, args.seed, extra=extra)
    failed = 0
    for name, ok, detail in results:
        failed += not ok
        print(f"{'PASS' if ok else 'FAIL'} {name}" + (f" ({detail})" if detail else ""))
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return EXIT_THEOREM if failed else EXIT_OK


def cmd_reproduce(args, argv):
    trials = args.trials or experiments.PROFILE_TRIALS[args.profile][args.id]
    result = experiments.RUNNERS[args.id](trials, args.seed)
    out_dir = Path(args.out_dir) / args.id
    out_dir.mkdir(parents=True, exist_ok=True)
    outputs = []
    for name, stats in result.series.items():
        path = out_dir / f"{name}.csv"
        path.write_text(stats_csv(stats), encoding="utf-8")
        outputs.append(path)
    summary = out_dir / "summary.csv"
    summary.write_text(rows_csv(result.summary_header, result.summary), encoding="utf-8")
    outputs.append(summary)
    params = {k: v for k, v in vars(args).items() if k != "func"}
    params["trials"] = trials
    write_manifest(out_dir / "manifest.json", argv, params, outputs)
    sys.stdout.write(summary.read_text(encoding="utf-8"))
    return EXIT_OK


def cmd_plot(args, argv):
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(7, 4))
    for path in args.csv:
        with open(path, encoding="utf-8") as fh:
            rows = list(csv.DictReader(fh))
        if not rows or args.column not in rows[0]:
            raise BinrepError(f"{path} has no column {args.column!r}")
        ax.plot([int(r["generation"]) for r in rows], [float(r[args.column]) for r in rows],
                label=Path(path).stem)
    ax.set_xlabel("generation")
    ax.set_ylabel(args.column)
    ax.legend()
    fig.tight_layout()
    fig.savefig(args.out, format="svg")
    plt.close(fig)
    return EXIT_OK


def cmd_rerun(args, argv):
    manifest = json.loads(Path(args.manifest).read_text(encoding="utf-8"))
    return main(manifest["argv"])


# -- parser -------------------------------------------------------------------

def _experiment_args(p, target, generations, trials):
    p.add_argument("--repr", default="sb", help="sb, brg, ngg, ubl or file:PATH")
    p.add_argument("--repr-seed", type=int, default=0,
                   help="seed for generated ngg/ubl at widths other than 5")
    if target is not None:
        p.add_argument("--ell", type=int, default=5)
        p.add_argument("--target", type=int, default=target)
    p.add_argument("--trials", type=int, default=trials)
    p.add_argument("--generations", type=int, default=generations)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="CSV path (a .manifest.json is written alongside)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="binrep", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    rp = sub.add_parser("repr", help="generate or inspect representations")
    rsub = rp.add_subparsers(dest="repr_command", required=True)
    p = rsub.add_parser("make")
    p.add_argument("--kind", required=True, choices=KINDS)
    p.add_argument("--ell", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_repr_make)
    p = rsub.add_parser("inspect")
    p.add_argument("--repr-file", required=True)
    p.set_defaults(func=cmd_repr_inspect)

    lp = sub.add_parser("locality", help="locality metrics")
    lsub = lp.add_subparsers(dest="locality_command", required=True)
    p = lsub.add_parser("report")
    p.add_argument("--repr-file", required=True)
    p.add_argument("--general", action="store_true", help="also compute the O(4**ell) metrics")
    p.add_argument("--max-ell", type=int, default=None,
                   help=f"raise the general-locality cap (up to {loc.GENERAL_LOCALITY_HARD_MAX_ELL})")
    p.set_defaults(func=cmd_locality_report)

    fp = sub.add_parser("fitness", help="fitness landscape analysis")
    fsub = fp.add_subparsers(dest="fitness_command", required=True)
    p = fsub.add_parser("local-maxima")
    p.add_argument("--repr-file", required=True)
    p.add_argument("--target", type=int, required=True)
    p.set_defaults(func=cmd_local_maxima)

    p = sub.add_parser("sa", help="simulated annealing on generalized ONEMAX")
    _experiment_args(p, 15, 2000, 10_000)
    p.add_argument("--t0", type=float, default=50.0)
    p.add_argument("--cooling", type=float, default=0.995)
    p.set_defaults(func=cmd_sa)

    p = sub.add_parser("es", help="(1+1)-ES on generalized ONEMAX")
    _experiment_args(p, 31, 1000, 10_000)
    p.add_argument("--mutation-rate", type=float, default=0.2)
    p.set_defaults(func=cmd_es)

    p = sub.add_parser("ga", help="generational GA on a De Jong function")
    _experiment_args(p, None, 30, 300)
    p.add_argument("--function", choices=sorted(DEJONG), default="f1")
    p.add_argument("--bits", type=int, default=None, help="override bits per dimension")
    p.add_argument("--population", type=int, default=30)
    p.add_argument("--crossover-rate", type=float, default=0.95)
    p.add_argument("--mutation-rate", type=float, default=0.01)
    p.set_defaults(func=cmd_ga)

    p = sub.add_parser("markov", help="exact Markov-chain prediction for SA")
    p.add_argument("--repr", default="sb")
    p.add_argument("--repr-seed", type=int, default=0)
    p.add_argument("--ell", type=int, default=5)
    p.add_argument("--target", type=int, default=15)
    p.add_argument("--t0", type=float, default=50.0)
    p.add_argument("--cooling", type=float, default=0.995)
    p.add_argument("--generations", type=int, default=2000)
    p.add_argument("--fixed-temp", type=float, default=None)
    p.add_argument("--absorption", action="store_true",
                   help="also print zero-temperature absorption probabilities to stderr")
    p.add_argument("--out")
    p.set_defaults(func=cmd_markov)

    p = sub.add_parser("verify", help="check the locality theorems numerically")
    p.add_argument("--max-ell", type=int, default=8)
    p.add_argument("--trials", type=int, default=10_000, help="Monte Carlo samples per ell")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--repr-file", action="append", help="extra representation to validate")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("reproduce", help="rerun one of the experiment comparisons")
    p.add_argument("id", choices=experiments.EXPERIMENTS)
    p.add_argument("--profile", choices=sorted(experiments.PROFILE_TRIALS), default="quick")
    p.add_argument("--trials", type=int, default=None, help="override the profile's trial count")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-dir", default="results")
    p.set_defaults(func=cmd_reproduce)

    p = sub.add_parser("plot", help="render CSV series to SVG")
    p.add_argument("csv", nargs="+")
    p.add_argument("--column", default="fraction_at_optimum")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_plot)

    p = sub.add_parser("rerun", help="replay the command recorded in a manifest")
    p.add_argument("manifest")
    p.set_defaults(func=cmd_rerun)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, argv)
    except (BinrepError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
