"""Drivers that rerun the SA, ES and GA comparisons across the four 5-bit representations."""

from __future__ import annotations

from dataclasses import dataclass

from .fitness import DEJONG
from .gea import (ESConfig, GAConfig, GenerationStats, SAConfig, run_es, run_ga,
                  run_sa)
from .representation import named

REPRESENTATIONS = ("sb", "brg", "ngg", "ubl")
EXPERIMENTS = ("fig2", "table1", "table2", "fig4", "fig5")

# Targets with four local maxima each: a=5 under SB, a=15 under UBL.
FIG4_CASES = (("sb", 5), ("ubl", 15))


@dataclass
class ExperimentResult:
    series: dict[str, list[GenerationStats]]
    summary_header: str
    summary: list[tuple]


def fig2(trials: int, seed: int, generations: int = 2000) -> ExperimentResult:
    series = {}
    summary = []
    for a in (15, 31):
        for rep in REPRESENTATIONS:
            stats = run_sa(SAConfig(a=a, trials=trials, max_generations=generations,
                                    master_seed=seed), named(rep))
            series[f"sa_{rep}_a{a}"] = stats
            summary.append((rep, a, stats[-1].fraction_at_optimum))
    return ExperimentResult(series, "representation,target,final_fraction_at_optimum", summary)


def table1(trials: int, seed: int, generations: int = 1000) -> ExperimentResult:
    series = {}
    summary = []
    for a in (31, 15):
        for rep in REPRESENTATIONS:
            res = run_es(ESConfig(a=a, trials=trials, max_generations=generations,
                                  master_seed=seed), named(rep))
            series[f"es_{rep}_a{a}"] = res.stats
            summary.append((rep, a, res.mean_generations_to_optimum, res.converged_fraction))
    return ExperimentResult(
        series, "representation,target,mean_generations_to_optimum,converged_fraction", summary)


def _ga_runs(trials, seed, generations):
    for fid, spec in DEJONG.items():
        for rep in REPRESENTATIONS:
            r = named(rep, spec.bits_per_dim, 0)
            yield fid, rep, run_ga(GAConfig(spec, r, generations=generations,
                                            trials=trials, master_seed=seed))


def table2(trials: int, seed: int, generations: int = 30) -> ExperimentResult:
    series = {}
    summary = []
    for fid, rep, stats in _ga_runs(trials, seed, generations):
        series[f"ga_{fid}_{rep}"] = stats
        summary.append((fid, rep, stats[-1].online_performance))
    return ExperimentResult(series, "function,representation,online_performance", summary)


def fig4(trials: int, seed: int, sa_generations: int = 2000,
         es_generations: int = 1000) -> ExperimentResult:
    series = {}
    summary = []
    for rep, a in FIG4_CASES:
        sa = run_sa(SAConfig(a=a, trials=trials, max_generations=sa_generations,
                             master_seed=seed), named(rep))
        es = run_es(ESConfig(a=a, trials=trials, max_generations=es_generations,
                             master_seed=seed), named(rep))
        series[f"sa_{rep}_a{a}"] = sa
        series[f"es_{rep}_a{a}"] = es.stats
        summary.append(("sa", rep, a, sa[10].mean_fitness, sa[-1].mean_fitness))
        summary.append(("es", rep, a, es.stats[10].mean_fitness, es.stats[-1].mean_fitness))
    return ExperimentResult(
        series, "engine,representation,target,mean_fitness_gen10,mean_fitness_final", summary)


def fig5(trials: int, seed: int, generations: int = 20) -> ExperimentResult:
    series = {}
    summary = []
    for fid, rep, stats in _ga_runs(trials, seed, generations):
        series[f"ga_{fid}_{rep}"] = stats
        summary.append((fid, rep, stats[0].best_fitness, stats[-1].best_fitness))
    return ExperimentResult(
        series, "function,representation,best_fitness_first,best_fitness_last", summary)


RUNNERS = {"fig2": fig2, "table1": table1, "table2": table2, "fig4": fig4, "fig5": fig5}

# trial counts for --profile; GA experiments are far more expensive per trial
PROFILE_TRIALS = {
    "quick": {"fig2": 10_000, "table1": 10_000, "fig4": 10_000, "table2": 300, "fig5": 300},
    "paper": {"fig2": 100_000, "table1": 100_000, "fig4": 100_000, "table2": 3000, "fig5": 3000},
}
