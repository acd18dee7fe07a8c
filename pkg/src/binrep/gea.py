"""Simulated annealing, (1+1)-ES and a generational GA over binary representations.

Every engine aggregates per-generation statistics across independent
trials.  Generation 0 is the random initial state; generation ``g`` is
the state after ``g`` variation steps.  Trial ``i`` draws its randomness
from a stream that depends only on ``(master_seed, i)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ShapeError
from .fitness import DeJongSpec, OneMaxTarget, dejong_fitness, onemax_table
from .representation import Representation
from .streams import TrialStreams

CHUNK = 1 << 17


@dataclass(frozen=True)
class GenerationStats:
    generation: int
    mean_fitness: float
    best_fitness: float
    fraction_at_optimum: float
    online_performance: float

    CSV_HEADER = "generation,mean_fitness,best_fitness,fraction_at_optimum,online_performance"

    def csv_row(self) -> str:
        return (f"{self.generation},{self.mean_fitness:.6g},{self.best_fitness:.6g},"
                f"{self.fraction_at_optimum:.6g},{self.online_performance:.6g}")


def fraction_stderr(fraction: float, trials: int) -> float:
    return math.sqrt(max(fraction * (1.0 - fraction), 0.0) / trials)


@dataclass(frozen=True)
class SAConfig:
    ell: int = 5
    a: int = 15
    initial_temperature: float = 50.0
    cooling_factor: float = 0.995
    max_generations: int = 2000
    trials: int = 10_000
    master_seed: int = 0

    def __post_init__(self):
        if not 0 < self.cooling_factor < 1:
            raise ValueError("cooling_factor must lie in (0, 1)")
        if not self.initial_temperature > 0:
            raise ValueError("initial_temperature must be positive")
        _check_run(self.max_generations, self.trials)


@dataclass(frozen=True)
class ESConfig:
    ell: int = 5
    a: int = 31
    mutation_rate: float = 0.2
    max_generations: int = 1000
    trials: int = 10_000
    master_seed: int = 0

    def __post_init__(self):
        if not 0 < self.mutation_rate <= 1:
            raise ValueError("mutation_rate must lie in (0, 1]")
        _check_run(self.max_generations, self.trials)


def _check_run(generations, trials):
    if generations < 0:
        raise ValueError("max_generations must be >= 0")
    if trials < 1:
        raise ValueError("trials must be >= 1")


class _Accumulator:
    """Per-generation integer sums across trials, reduced in trial order."""

    def __init__(self, generations: int):
        size = generations + 1
        self.fit = np.zeros(size, dtype=np.int64)
        self.best = np.zeros(size, dtype=np.int64)
        self.hits = np.zeros(size, dtype=np.int64)
        self.evals = np.zeros(size, dtype=np.int64)  # cumulative evaluation sums

    def add(self, g, fit, best, hits, eval_total):
        self.fit[g] += int(fit.sum())
        self.best[g] += int(best.sum())
        self.hits[g] += int(hits.sum())
        self.evals[g] += int(eval_total.sum())

    def stats(self, trials: int) -> list[GenerationStats]:
        return [
            GenerationStats(g, self.fit[g] / trials, self.best[g] / trials,
                            self.hits[g] / trials, self.evals[g] / (trials * (g + 1)))
            for g in range(len(self.fit))
        ]


def _onemax_setup(ell, a, r):
    if r.ell != ell:
        raise ShapeError(f"config has ell={ell}, representation has ell={r.ell}")
    target = OneMaxTarget(ell, a)
    return onemax_table(target, r), int(r.inverse()[a])


def run_sa(cfg: SAConfig, r: Representation) -> list[GenerationStats]:
    """Single-organism simulated annealing on generalized ONEMAX.

    Each generation flips one uniformly chosen bit.  An offspring at least as
    fit as its parent is kept; a worse one is kept with probability
    ``exp(-delta / T)``.  The temperature is then multiplied by the cooling
    factor.  ``best_fitness`` is the trial mean of the best fitness seen so
    far; ``online_performance`` averages the initial and every offspring
    evaluation.
    """
    table, opt = _onemax_setup(cfg.ell, cfg.a, r)
    acc = _Accumulator(cfg.max_generations)
    n = 1 << cfg.ell
    span = int(table.max() - table.min())
    losses = np.arange(-span, span + 1)
    for lo in range(0, cfg.trials, CHUNK):
        ids = np.arange(lo, min(lo + CHUNK, cfg.trials))
        st = TrialStreams(cfg.master_seed, ids)
        g = st.integers(n, 0, 0)
        fit = table[g]
        best = fit.copy()
        evals = fit.copy()
        acc.add(0, fit, best, g == opt, evals)
        temp = cfg.initial_temperature
        for step in range(1, cfg.max_generations + 1):
            child = g ^ (1 << st.integers(cfg.ell, step, 0))
            cf = table[child]
            # acceptance probability looked up by fitness loss, offset by span
            accept = np.exp(-np.maximum(losses, 0) / temp)
            keep = st.uniform(step, 1) < accept[fit - cf + span]
            g = np.where(keep, child, g)
            fit = table[g]
            np.maximum(best, fit, out=best)
            evals += cf
            acc.add(step, fit, best, g == opt, evals)
            temp *= cfg.cooling_factor
    return acc.stats(cfg.trials)


@dataclass(frozen=True)
class ESResult:
    """(1+1)-ES outcome.

    ``generations_to_optimum`` counts the initial parent as generation 1, so
    a trial that starts on the optimum scores 1 and one that reaches it
    after ``k`` mutation steps scores ``k + 1``.  Trials that never reach
    the optimum are excluded from the mean.
    """
    mean_generations_to_optimum: float
    converged_fraction: float
    stats: list[GenerationStats] = field(repr=False)

    def __iter__(self):
        yield self.mean_generations_to_optimum
        yield self.stats


def run_es(cfg: ESConfig, r: Representation) -> ESResult:
    """Elitist (1+1)-ES with independent per-bit mutation on generalized ONEMAX.

    Every bit flips with probability ``mutation_rate``; the offspring replaces
    the parent only if strictly fitter.  Generations with no flipped bit
    still count.
    """
    table, opt = _onemax_setup(cfg.ell, cfg.a, r)
    if cfg.ell > 63:
        raise ShapeError("ES supports ell <= 63")
    acc = _Accumulator(cfg.max_generations)
    n = 1 << cfg.ell
    hit_total = 0
    hit_count = 0
    for lo in range(0, cfg.trials, CHUNK):
        ids = np.arange(lo, min(lo + CHUNK, cfg.trials))
        st = TrialStreams(cfg.master_seed, ids)
        g = st.integers(n, 0, 0)
        fit = table[g]
        best = fit.copy()
        evals = fit.copy()
        first = np.where(g == opt, 1, 0)
        acc.add(0, fit, best, g == opt, evals)
        for step in range(1, cfg.max_generations + 1):
            mask = np.zeros_like(g)
            for b in range(cfg.ell):
                mask |= (st.uniform(step, b) < cfg.mutation_rate).astype(np.int64) << b
            child = g ^ mask
            cf = table[child]
            better = cf > fit
            g = np.where(better, child, g)
            fit = np.where(better, cf, fit)
            best = fit  # elitist: the parent is always the best so far
            evals += cf
            at = g == opt
            first[(first == 0) & at] = step + 1
            acc.add(step, fit, best, at, evals)
        hit_total += int(first[first > 0].sum())
        hit_count += int((first > 0).sum())
    mean = hit_total / hit_count if hit_count else math.nan
    return ESResult(mean, hit_count / cfg.trials, acc.stats(cfg.trials))


@dataclass(frozen=True)
class GAConfig:
    spec: DeJongSpec
    representation: Representation
    population_size: int = 30
    crossover_rate: float = 0.95
    mutation_rate: float = 0.01
    generations: int = 30
    trials: int = 100
    master_seed: int = 0
    optimum_tolerance: float = 1e-6
    epsilon: float = 1e-9

    def __post_init__(self):
        if self.population_size < 2 or self.population_size % 2:
            raise ValueError("population_size must be even and >= 2")
        if not 0 <= self.crossover_rate <= 1 or not 0 <= self.mutation_rate <= 1:
            raise ValueError("rates must lie in [0, 1]")
        if self.generations < 1:
            raise ValueError("generations must be >= 1")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.representation.ell != self.spec.bits_per_dim:
            raise ShapeError(f"{self.spec.id} uses {self.spec.bits_per_dim}-bit slices, "
                             f"representation has ell={self.representation.ell}")


def trial_generator(master_seed: int, trial: int) -> np.random.Generator:
    seq = np.random.SeedSequence(int(master_seed) & ((1 << 64) - 1), spawn_key=(int(trial),))
    return np.random.Generator(np.random.PCG64(seq))


def roulette(weights: np.ndarray, count: int, rng: np.random.Generator) -> np.ndarray:
    """Indices drawn with probability proportional to ``weights``."""
    cum = np.cumsum(weights)
    picks = np.searchsorted(cum, rng.random(count) * cum[-1], side="right")
    return np.minimum(picks, len(weights) - 1)


def single_point_crossover(a: np.ndarray, b: np.ndarray, mate: np.ndarray,
                           points: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Swap tails of paired rows ``a[k], b[k]`` from ``points[k]`` on where ``mate[k]``."""
    cols = np.arange(a.shape[1])
    swap = mate[:, None] & (cols[None, :] >= points[:, None])
    return np.where(swap, b, a), np.where(swap, a, b)


def ga_trial(cfg: GAConfig, trial: int) -> np.ndarray:
    """Fitness of every individual in every generation, shape ``(generations, population)``."""
    rng = trial_generator(cfg.master_seed, trial)
    spec, r = cfg.spec, cfg.representation
    pop_n, length = cfg.population_size, spec.genotype_length
    noise = rng if spec.noisy else None
    pop = rng.integers(0, 2, size=(pop_n, length), dtype=np.uint8)
    fit = dejong_fitness(spec, pop, r, noise)
    out = np.empty((cfg.generations, pop_n))
    out[0] = fit
    half = pop_n // 2
    for gen in range(1, cfg.generations):
        # minimization: weight by distance above the generation's worst
        w = (fit.max() - fit) + cfg.epsilon
        parents = pop[roulette(w, pop_n, rng)]
        mate = rng.random(half) < cfg.crossover_rate
        points = rng.integers(1, length, size=half) if length > 1 else np.ones(half, int)
        a, b = single_point_crossover(parents[0::2], parents[1::2], mate, points)
        pop = np.empty_like(parents)
        pop[0::2], pop[1::2] = a, b
        if cfg.mutation_rate > 0:
            pop ^= (rng.random(pop.shape) < cfg.mutation_rate).astype(np.uint8)
        fit = dejong_fitness(spec, pop, r, noise)
        out[gen] = fit
    return out


def run_ga(cfg: GAConfig) -> list[GenerationStats]:
    """Generational GA: roulette selection, single-point crossover, bitwise mutation.

    Fitness is minimized.  ``best_fitness`` is the trial mean of each
    generation's lowest fitness, ``fraction_at_optimum`` the share of trials
    whose generation best is within ``optimum_tolerance`` of the known
    optimum, and ``online_performance`` the mean of every evaluation so far.
    """
    gens = cfg.generations
    mean = np.zeros(gens)
    best = np.zeros(gens)
    hits = np.zeros(gens)
    total = np.zeros(gens)
    for t in range(cfg.trials):
        f = ga_trial(cfg, t)
        mean += f.mean(axis=1)
        b = f.min(axis=1)
        best += b
        hits += b <= cfg.spec.optimum + cfg.optimum_tolerance
        total += f.sum(axis=1)
    cum = np.cumsum(total)
    evals = cfg.population_size * cfg.trials * np.arange(1, gens + 1)
    return [GenerationStats(g, mean[g] / cfg.trials, best[g] / cfg.trials,
                            hits[g] / cfg.trials, cum[g] / evals[g])
            for g in range(gens)]
